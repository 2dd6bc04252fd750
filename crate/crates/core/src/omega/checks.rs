//! Window checks for the neighborhood chain, the zero-forgetting map and
//! the axiom conditions on the sequence frames.

use super::{in_neighborhood, universe, Neighborhood, PseudoSeq, SymbolicSet};
use crate::error::{Error, Result};
use crate::kripke::{FrameKind, TreeFrame, Word};
use crate::report::{Tally, VerificationReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainVariant {
    /// `U_k(α) ⊆ U_m(α)` for `k >= m`
    Standard,
    /// same inclusion, with `m = min(k, st(α))` inside the neighborhoods
    MinIndex,
    /// the converse inclusion `U_m(α) ⊆ U_k(α)`, which must fail
    Reversed,
}

pub fn check_chain(frame: &TreeFrame, depth: usize, k_max: usize) -> Result<VerificationReport> {
    chain_sweep(frame, depth, k_max, ChainVariant::Standard)
}

pub fn chain_sweep(frame: &TreeFrame, depth: usize, k_max: usize, variant: ChainVariant) -> Result<VerificationReport> {
    let points = universe(frame.alphabet, depth)?;
    let member = |alpha: &PseudoSeq, k: usize, beta: &PseudoSeq| match variant {
        ChainVariant::MinIndex => {
            let m = k.min(alpha.st());
            alpha.agrees_up_to(beta, m) && frame.relates(alpha.forget_zeros().letters(), beta.forget_zeros().letters())
        }
        _ => in_neighborhood(frame, alpha, k, beta),
    };
    let mut tally = Tally::new("chain")
        .param("kind", frame.kind.name())
        .param("branching", frame.branching())
        .param("depth", depth as u64)
        .param("k_max", k_max as u64);
    if variant != ChainVariant::Standard {
        tally = tally.param("variant", format!("{variant:?}"));
    }
    for alpha in &points {
        for k in 0..=k_max {
            for m in 0..=k {
                let (small, large) = match variant {
                    ChainVariant::Reversed => (m, k),
                    _ => (k, m),
                };
                for beta in &points {
                    let ok = !member(alpha, small, beta) || member(alpha, large, beta);
                    tally.check(ok, || format!("α={alpha} β={beta}: in U_{small} but not in U_{large}"));
                }
            }
        }
    }
    Ok(tally.finish())
}

/// The member of `U_k(α)` that `f` sends to `target`: `α|m` followed by the
/// letters `target` adds to `f(α)`.
pub fn ff_witness(frame: &TreeFrame, alpha: &PseudoSeq, k: usize, target: &Word) -> Result<PseudoSeq> {
    super::check_alphabet(frame, alpha)?;
    frame.alphabet.check(target.letters())?;
    let base = alpha.forget_zeros();
    if !frame.relates(base.letters(), target.letters()) {
        return Err(Error::Precondition(format!(
            "{target} is not a successor of f(α) = {base}"
        )));
    }
    let m = k.max(alpha.st());
    Ok(alpha.extend_prefix(m, &target.letters()[base.len()..]))
}

/// `f: N_ω(F) ↠ N(F)` on the window: surjectivity by lifting, the forward
/// inclusion `f(U_k(α)) ⊆ R(f(α))` by enumeration, and the covering
/// inclusion `R(f(α)) ⊆ f(U_k(α))` by the explicit witness.
pub fn verify_ff_morphism(frame: &TreeFrame, depth: usize) -> Result<VerificationReport> {
    let words = frame.words(depth)?;
    let points = universe(frame.alphabet, depth)?;
    let mut tally = Tally::new("ff-morphism")
        .param("kind", frame.kind.name())
        .param("branching", frame.branching())
        .param("depth", depth as u64);

    for w in &words {
        let lifted = PseudoSeq::lift(w, frame.alphabet)?;
        tally.check(lifted.forget_zeros() == *w, || {
            format!("surjectivity: f(lift({w})) ≠ {w}")
        });
    }
    for alpha in &points {
        let image = alpha.forget_zeros();
        for k in 0..=depth {
            for beta in Neighborhood::new(frame, alpha, k).enumerate(depth)? {
                let target = beta.forget_zeros();
                tally.check(frame.relates(image.letters(), target.letters()), || {
                    format!("forward: β={beta} ∈ U_{k}({alpha}) but f(β)={target} is not R-above {image}")
                });
            }
            for w in words.iter().filter(|w| frame.relates(image.letters(), w.letters())) {
                let beta = ff_witness(frame, alpha, k, w)?;
                let ok = in_neighborhood(frame, alpha, k, &beta) && beta.forget_zeros() == *w;
                tally.check(ok, || format!("covering: witness {beta} for α={alpha}, k={k}, w={w}"));
            }
        }
    }
    Ok(tally.finish())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Evidence {
    /// every neighborhood is nonempty
    D,
    /// every point lies in its neighborhoods
    T,
    /// neighborhoods are neighborhoods of their members
    Four,
}

impl Evidence {
    pub fn name(self) -> &'static str {
        match self {
            Evidence::D => "d",
            Evidence::T => "t",
            Evidence::Four => "four",
        }
    }
}

/// IN → D, RN → T, IT → D and 4, RT → T and 4.
pub fn applicable_evidence(kind: FrameKind) -> &'static [Evidence] {
    match kind {
        FrameKind::In => &[Evidence::D],
        FrameKind::Rn => &[Evidence::T],
        FrameKind::It => &[Evidence::D, Evidence::Four],
        FrameKind::Rt => &[Evidence::T, Evidence::Four],
    }
}

pub fn axiom_evidence(frame: &TreeFrame, depth: usize, evidence: Evidence) -> Result<VerificationReport> {
    if !applicable_evidence(frame.kind).contains(&evidence) {
        return Err(Error::Inapplicable(evidence.name(), frame.kind.to_string()));
    }
    let points = universe(frame.alphabet, depth)?;
    let letter = frame.alphabet.letters()[0];
    let mut tally = Tally::new("axiom-evidence")
        .param("evidence", evidence.name())
        .param("kind", frame.kind.name())
        .param("branching", frame.branching())
        .param("depth", depth as u64);
    for alpha in &points {
        match evidence {
            Evidence::D => {
                for k in 0..=depth {
                    let m = k.max(alpha.st());
                    let witness = alpha.extend_prefix(m, &[letter]);
                    tally.check(in_neighborhood(frame, alpha, k, &witness), || {
                        format!("U_{k}({alpha}) misses witness {witness}")
                    });
                }
            }
            Evidence::T => {
                for k in 0..=depth {
                    tally.check(in_neighborhood(frame, alpha, k, alpha), || {
                        format!("{alpha} ∉ U_{k}({alpha})")
                    });
                }
            }
            Evidence::Four => {
                for m in 0..=depth {
                    let outer = m.max(alpha.st());
                    for y in Neighborhood::new(frame, alpha, outer).enumerate(depth)? {
                        let inner = outer.max(y.st());
                        for z in Neighborhood::new(frame, &y, inner).enumerate(depth)? {
                            tally.check(in_neighborhood(frame, alpha, m, &z), || {
                                format!("z={z} ∈ U_{inner}(y={y}) but z ∉ U_{m}({alpha})")
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(tally.finish())
}
