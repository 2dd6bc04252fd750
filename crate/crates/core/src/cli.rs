//! Command-line front end. Every command renders one JSON value; text
//! output is a rendering of the same result.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::countermodel::{check_certificate, Bounds, CertifiedAxiom};
use crate::error::{Error, Result};
use crate::formula::{axiom_instance, parse, AxiomScheme, Modality};
use crate::kripke::{check_fractal, FrameKind, KripkeFrame, KripkeFrameJson, TreeFrame};
use crate::nbhd::{
    nof, product_n, structural_characteristics, valid_on_frame, validate_frame, NFrame, NFrameJson, Validity,
};
use crate::omega::{check_chain, verify_ff_morphism, verify_g_morphism};
use crate::report::VerificationReport;
use crate::suites;
use crate::worlds::Valuation;

#[derive(Debug, Parser)]
#[command(
    name = "modal-nbhd",
    version,
    about = "Kripke and neighborhood frames for bimodal logics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// print JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    /// seed for randomized suites
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// keep wall-clock times in reports
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a formula and print it back
    Parse {
        #[arg(long)]
        formula: String,
    },
    /// Evaluate a formula on a Kripke or neighborhood model
    Mc {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        formula: String,
        /// report the value at this world only
        #[arg(long)]
        world: Option<String>,
    },
    /// Check validity of a formula on a frame by sweeping all valuations
    Valid {
        #[arg(long)]
        frame: PathBuf,
        #[arg(long)]
        formula: String,
    },
    /// Structural D/T/4 conditions of a neighborhood frame, with brute-force validity
    Char {
        #[arg(long)]
        frame: PathBuf,
    },
    /// Neighborhood frame of a Kripke frame
    Nof {
        #[arg(long)]
        frame: PathBuf,
    },
    /// Product of two unimodal neighborhood frames
    Product {
        /// exactly two frame files
        #[arg(long = "frame", num_args = 1, required = true)]
        frames: Vec<PathBuf>,
    },
    /// Export a window of a tree frame as a Kripke frame
    Tree {
        #[command(flatten)]
        window: Window,
        /// export the neighborhood frame of the window instead
        #[arg(long)]
        nof: bool,
    },
    /// Run a window check
    Verify {
        #[arg(long, value_enum)]
        lemma: Lemma,
        #[command(flatten)]
        window: Window,
        /// largest neighborhood index (chain: 5, lex: 3)
        #[arg(long)]
        k_max: Option<usize>,
        /// number of random instances (default 100)
        #[arg(long)]
        count: Option<usize>,
        /// modal depth of generated formulas
        #[arg(long, default_value_t = 2)]
        formula_depth: usize,
    },
    /// Check a countermodel certificate for Com or Chr
    Countermodel {
        #[arg(long)]
        axiom: CertifiedAxiom,
        #[arg(long)]
        kind1: FrameKind,
        #[arg(long)]
        kind2: FrameKind,
        #[arg(long, default_value_t = 2)]
        branching: u32,
        #[arg(long, default_value = "8,8,4")]
        bounds: Bounds,
    },
}

#[derive(Debug, Args)]
struct Window {
    #[arg(long)]
    kind: Option<FrameKind>,
    #[arg(long)]
    kind1: Option<FrameKind>,
    #[arg(long)]
    kind2: Option<FrameKind>,
    #[arg(long, default_value_t = 2)]
    branching: u32,
    #[arg(long, default_value_t = 4)]
    depth: usize,
}

impl Window {
    fn need(kind: Option<FrameKind>, flag: &str) -> Result<FrameKind> {
        kind.ok_or_else(|| Error::Precondition(format!("--{flag} is required here")))
    }

    fn frame(&self) -> Result<TreeFrame> {
        TreeFrame::new(Self::need(self.kind, "kind")?, self.branching)
    }

    fn pair(&self) -> Result<(TreeFrame, TreeFrame)> {
        Ok((
            TreeFrame::new(Self::need(self.kind1, "kind1")?, self.branching)?,
            TreeFrame::new(Self::need(self.kind2, "kind2")?, self.branching)?,
        ))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Lemma {
    Fractal,
    Chain,
    FfMorphism,
    GMorphism,
    NfAgreement,
    FusionAxioms,
    AxiomEvidence,
    FiniteCom,
    Lex,
}

/// What a command produced: a JSON value, its text rendering, and whether
/// every check in it passed.
struct Rendered {
    json: Value,
    text: String,
    pass: bool,
}

impl Rendered {
    fn info(json: Value, text: String) -> Self {
        Rendered { json, text, pass: true }
    }

    fn report(report: VerificationReport) -> Result<Self> {
        Ok(Rendered {
            text: report.to_string(),
            pass: report.pass,
            json: serde_json::to_value(&report)?,
        })
    }

    fn document(json: Value) -> Result<Self> {
        let text = serde_json::to_string_pretty(&json)?;
        Ok(Rendered::info(json, text))
    }
}

enum Model {
    Kripke(KripkeFrame, Valuation),
    Neighborhood(NFrame, Valuation),
}

fn load(path: &Path) -> Result<Model> {
    let text = fs::read_to_string(path)?;
    let value: Value = serde_json::from_str(&text)?;
    if value.get("rel").is_some() {
        let json: KripkeFrameJson = serde_json::from_value(value)?;
        Ok(Model::Kripke(json.into_frame()?, json.valuation()?))
    } else if value.get("base").is_some() {
        let json: NFrameJson = serde_json::from_value(value)?;
        Ok(Model::Neighborhood(json.into_frame()?, json.valuation()?))
    } else {
        Err(Error::InvalidFrame(format!(
            "{}: expected a \"rel\" (Kripke) or \"base\" (neighborhood) table",
            path.display()
        )))
    }
}

/// A neighborhood frame from either file format; Kripke frames go
/// through `N(·)`.
fn load_nframe(path: &Path) -> Result<NFrame> {
    let frame = match load(path)? {
        Model::Kripke(k, _) => nof(&k),
        Model::Neighborhood(n, _) => n,
    };
    let report = validate_frame(&frame);
    if !report.pass {
        return Err(Error::InvalidFrame(report.counterexample.unwrap_or_default()));
    }
    Ok(frame)
}

fn names(set: crate::worlds::WorldSet, worlds: &[String]) -> Vec<String> {
    set.names(worlds).into_iter().map(String::from).collect()
}

fn cmd_parse(formula: &str) -> Result<Rendered> {
    let phi = parse(formula)?;
    let atoms: Vec<&str> = phi.atoms().into_iter().collect();
    Ok(Rendered::info(
        json!({"formula": phi.to_string(), "modal_depth": phi.modal_depth(), "atoms": atoms}),
        phi.to_string(),
    ))
}

fn cmd_mc(model: &Path, formula: &str, world: Option<&str>) -> Result<Rendered> {
    let phi = parse(formula)?;
    let (semantics, worlds, ext) = match load(model)? {
        Model::Kripke(k, v) => ("kripke", k.worlds().to_vec(), k.extension(&v, &phi)?),
        Model::Neighborhood(n, v) => ("neighborhood", n.worlds().to_vec(), n.extension(&v, &phi)?),
    };
    let true_at = names(ext, &worlds);
    let mut json = json!({"formula": phi.to_string(), "semantics": semantics, "true_at": true_at});
    let mut text = format!("{phi} holds at {{{}}}", true_at.join(", "));
    let mut pass = true;
    if let Some(w) = world {
        let idx = worlds
            .iter()
            .position(|x| x == w)
            .ok_or_else(|| Error::UnknownWorld(w.to_string()))?;
        pass = ext.contains(idx);
        json["world"] = json!(w);
        json["value"] = json!(pass);
        text = format!("{phi} at {w}: {pass}");
    }
    Ok(Rendered { json, text, pass })
}

fn valuation_json(frame: &NFrame, valuation: &Valuation) -> Value {
    let map: BTreeMap<&str, Vec<String>> = valuation
        .iter()
        .map(|(k, v)| (k.as_str(), names(*v, frame.worlds())))
        .collect();
    json!(map)
}

fn cmd_valid(frame: &Path, formula: &str) -> Result<Rendered> {
    let phi = parse(formula)?;
    let frame = load_nframe(frame)?;
    Ok(match valid_on_frame(&frame, &phi)? {
        Validity::Valid => Rendered::info(
            json!({"formula": phi.to_string(), "valid": true}),
            format!("{phi}: valid"),
        ),
        Validity::Counterexample { valuation, world } => {
            let val = valuation_json(&frame, &valuation);
            let w = &frame.worlds()[world];
            Rendered {
                text: format!("{phi}: not valid\ncounterexample: world {w}, valuation {val}"),
                json: json!({
                    "formula": phi.to_string(),
                    "valid": false,
                    "counterexample": {"world": w, "valuation": val},
                }),
                pass: false,
            }
        }
    })
}

fn cmd_char(frame: &Path) -> Result<Rendered> {
    let frame = load_nframe(frame)?;
    let mut json = serde_json::Map::new();
    let mut text = Vec::new();
    for &i in &Modality::ALL[..frame.modalities()] {
        let c = structural_characteristics(&frame, i)?;
        let mut brute = serde_json::Map::new();
        for (name, scheme) in [
            ("d", AxiomScheme::D),
            ("t", AxiomScheme::T),
            ("four", AxiomScheme::Four),
        ] {
            let valid = valid_on_frame(&frame, &axiom_instance(scheme, i))?.is_valid();
            brute.insert(name.to_string(), json!(valid));
        }
        text.push(format!("modality {i}: d={} t={} four={}", c.d_ok, c.t_ok, c.four_ok));
        json.insert(
            i.to_string(),
            json!({"d": c.d_ok, "t": c.t_ok, "four": c.four_ok, "brute_force": brute}),
        );
    }
    Ok(Rendered::info(json!({"modalities": json}), text.join("\n")))
}

fn cmd_nof(path: &Path) -> Result<Rendered> {
    match load(path)? {
        Model::Kripke(k, v) => {
            let mut json = nof(&k).to_json();
            if !v.is_empty() {
                json.val = Some(crate::worlds::valuation_to_names(k.worlds(), &v));
            }
            Rendered::document(serde_json::to_value(json)?)
        }
        Model::Neighborhood(..) => Err(Error::InvalidFrame("nof expects a Kripke frame".into())),
    }
}

fn cmd_product(paths: &[PathBuf]) -> Result<Rendered> {
    if paths.len() != 2 {
        return Err(Error::Precondition(format!(
            "product takes two --frame files, got {}",
            paths.len()
        )));
    }
    let first = load_nframe(&paths[0])?;
    let second = load_nframe(&paths[1])?;
    Rendered::document(serde_json::to_value(product_n(&first, &second)?.to_json())?)
}

fn cmd_tree(window: &Window, as_nof: bool) -> Result<Rendered> {
    let frame = window.frame()?;
    let words = frame.words(window.depth)?;
    let mut kripke = KripkeFrame::new(words.iter().map(|w| w.to_string()).collect())?;
    for (a, u) in words.iter().enumerate() {
        for (b, v) in words.iter().enumerate() {
            if frame.relates(u.letters(), v.letters()) {
                kripke.add_edge(Modality::One, a, b)?;
            }
        }
    }
    let mut doc = if as_nof {
        serde_json::to_value(nof(&kripke).unimodal().to_json())?
    } else {
        serde_json::to_value(kripke.to_json())?
    };
    doc["window"] = json!({"kind": frame.kind, "branching": frame.branching(), "depth": window.depth});
    Rendered::document(doc)
}

fn cmd_verify(
    lemma: Lemma,
    w: &Window,
    k_max: Option<usize>,
    count: Option<usize>,
    formula_depth: usize,
    seed: u64,
) -> Result<Rendered> {
    let count = count.unwrap_or(100);
    let mut report = match lemma {
        Lemma::Fractal => check_fractal(&w.frame()?, w.depth)?,
        Lemma::Chain => check_chain(&w.frame()?, w.depth, k_max.unwrap_or(5))?,
        Lemma::FfMorphism => verify_ff_morphism(&w.frame()?, w.depth)?,
        Lemma::GMorphism => {
            let (a, b) = w.pair()?;
            verify_g_morphism(&a, &b, w.depth)?
        }
        Lemma::NfAgreement => suites::nf_agreement(seed, count, 4, formula_depth)?,
        Lemma::FusionAxioms => suites::fusion_soundness(seed, count, 6)?,
        Lemma::AxiomEvidence => suites::axiom_evidence_all(&w.frame()?, w.depth)?,
        Lemma::FiniteCom => suites::finite_com(seed, count, 6)?,
        Lemma::Lex => suites::lex_evidence(w.branching, w.depth, k_max.unwrap_or(3), 2)?,
    };
    report.params.insert("seed".into(), seed.into());
    Rendered::report(report)
}

fn cmd_countermodel(
    axiom: CertifiedAxiom,
    kind1: FrameKind,
    kind2: FrameKind,
    branching: u32,
    bounds: Bounds,
) -> Result<Rendered> {
    let first = TreeFrame::new(kind1, branching)?;
    let second = TreeFrame::new(kind2, branching)?;
    let cert = check_certificate(axiom, &first, &second, bounds)?;
    Ok(Rendered {
        text: cert.to_string(),
        pass: cert.accepted,
        json: serde_json::to_value(&cert)?,
    })
}

fn dispatch(cli: &Cli) -> Result<Rendered> {
    match &cli.command {
        Command::Parse { formula } => cmd_parse(formula),
        Command::Mc { model, formula, world } => cmd_mc(model, formula, world.as_deref()),
        Command::Valid { frame, formula } => cmd_valid(frame, formula),
        Command::Char { frame } => cmd_char(frame),
        Command::Nof { frame } => cmd_nof(frame),
        Command::Product { frames } => cmd_product(frames),
        Command::Tree { window, nof } => cmd_tree(window, *nof),
        Command::Verify {
            lemma,
            window,
            k_max,
            count,
            formula_depth,
        } => cmd_verify(*lemma, window, *k_max, *count, *formula_depth, cli.seed),
        Command::Countermodel {
            axiom,
            kind1,
            kind2,
            branching,
            bounds,
        } => cmd_countermodel(*axiom, *kind1, *kind2, *branching, *bounds),
    }
}

fn strip_timing(value: &mut Value) {
    match value {
        Value::Object(map) => {
            map.remove("millis");
            map.values_mut().for_each(strip_timing);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

/// Runs one command line. Exit codes: 0 when every check passes, 1 on a
/// violated property or an exceeded budget, 2 on usage or input errors.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return 2;
            }
            let _ = write!(out, "{}", e.render());
            return 0;
        }
    };
    match dispatch(&cli) {
        Ok(mut rendered) => {
            let written = if cli.json {
                if !cli.timing {
                    strip_timing(&mut rendered.json);
                }
                serde_json::to_string_pretty(&rendered.json).map(|s| writeln!(out, "{s}"))
            } else {
                let text = if cli.timing {
                    rendered.text
                } else {
                    rendered
                        .text
                        .lines()
                        .filter(|l| !l.starts_with("millis:"))
                        .collect::<Vec<_>>()
                        .join("\n")
                };
                Ok(writeln!(out, "{text}"))
            };
            if !matches!(written, Ok(Ok(()))) {
                return 2;
            }
            if rendered.pass {
                0
            } else {
                1
            }
        }
        Err(e @ (Error::Budget { .. } | Error::Guard { .. })) => {
            let _ = writeln!(err, "budget: {e}");
            1
        }
        Err(e @ Error::Internal(_)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}
