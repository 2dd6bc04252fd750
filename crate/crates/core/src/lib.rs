//! Kripke and monotone neighborhood frames for bimodal logics, the
//! sequence frames `N_ω(F)` over tree frames, and window checks for the
//! maps between them.

pub mod cli;
pub mod countermodel;
pub mod error;
pub mod formula;
pub mod kripke;
pub mod nbhd;
pub mod omega;
pub mod report;
pub mod sample;
pub mod suites;
pub mod worlds;

pub use error::{Error, Result};
pub use formula::{Formula, Modality};
pub use report::VerificationReport;
