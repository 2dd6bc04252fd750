//! Acceptance suite. Prints one line per criterion and exits nonzero if
//! any criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use modal_nbhd::countermodel::{
    check_certificate, check_chr_certificate_with, check_com_certificate_with, eval_axiom_at_anchor, Bounds,
    CertifiedAxiom, SymbolicValuation, ValuationName, ALL_KINDS,
};
use modal_nbhd::formula::{generate_formulas, parse};
use modal_nbhd::kripke::{FrameKind, TreeFrame};
use modal_nbhd::omega::{check_chain, verify_ff_morphism, verify_g_morphism, ProductPoint, PseudoSeq};
use modal_nbhd::suites;
use modal_nbhd::VerificationReport;

const SEED: u64 = 20240601;

struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn from_reports(reports: &[VerificationReport]) -> Self {
        let checked: u64 = reports.iter().map(|r| r.checked).sum();
        let violations: u64 = reports.iter().map(|r| r.violations).sum();
        let first = reports.iter().find_map(|r| r.counterexample.clone());
        let ok = reports.iter().all(|r| r.pass && r.checked > 0);
        let mut detail = format!("checked={checked} violations={violations}");
        if let Some(c) = first {
            detail.push_str(&format!(" first counterexample: {c}"));
        }
        Outcome { ok, detail }
    }

    fn fail(detail: impl Into<String>) -> Self {
        Outcome {
            ok: false,
            detail: detail.into(),
        }
    }
}

fn frame(kind: FrameKind, b: u32) -> TreeFrame {
    TreeFrame::new(kind, b).unwrap()
}

fn characterization() -> Outcome {
    Outcome::from_reports(&[suites::characterization_sweep(SEED, 500, 3, 3).unwrap()])
}

fn kripke_agreement() -> Outcome {
    Outcome::from_reports(&[suites::nf_agreement(SEED, 100, 4, 2).unwrap()])
}

fn truth_preservation() -> Outcome {
    let r = suites::truth_preservation_suite(SEED, 10, 2).unwrap();
    let instances = r.params["instances"].as_u64().unwrap();
    let morphisms = r.params["morphisms_passing"].as_u64().unwrap();
    if instances < 20 || morphisms != instances {
        return Outcome::fail(format!("{morphisms} of {instances} instances are bounded morphisms"));
    }
    let mut out = Outcome::from_reports(&[r]);
    out.detail = format!("instances={instances} {}", out.detail);
    out
}

fn chain() -> Outcome {
    let mut reports = Vec::new();
    for kind in ALL_KINDS {
        for b in 1..=3 {
            reports.push(check_chain(&frame(kind, b), 4, 5).unwrap());
        }
    }
    Outcome::from_reports(&reports)
}

fn ff_morphism() -> Outcome {
    let reports: Vec<_> = ALL_KINDS
        .iter()
        .map(|&k| verify_ff_morphism(&frame(k, 2), 5).unwrap())
        .collect();
    Outcome::from_reports(&reports)
}

fn g_morphism() -> Outcome {
    let mut reports = Vec::new();
    for k1 in ALL_KINDS {
        for k2 in ALL_KINDS {
            reports.push(verify_g_morphism(&frame(k1, 2), &frame(k2, 2), 4).unwrap());
        }
    }
    Outcome::from_reports(&reports)
}

fn fusion_soundness() -> Outcome {
    Outcome::from_reports(&[suites::fusion_soundness(SEED, 100, 6).unwrap()])
}

fn certificates() -> Outcome {
    let large = Bounds { m: 10, k: 10, d: 5 };
    let mut accepted = 0;
    let mut failures = Vec::new();
    for axiom in [CertifiedAxiom::Com, CertifiedAxiom::Chr] {
        for k1 in ALL_KINDS {
            for k2 in ALL_KINDS {
                let (f, g) = (frame(k1, 2), frame(k2, 2));
                for bounds in [Bounds::default(), large] {
                    let c = check_certificate(axiom, &f, &g, bounds).unwrap();
                    if c.accepted {
                        accepted += 1;
                    } else {
                        failures.push(format!("{axiom} {k1}x{k2} at {bounds}"));
                    }
                }
                let truth = eval_axiom_at_anchor(axiom, &f, &g, Bounds::default()).unwrap();
                if truth.value {
                    failures.push(format!("evaluator finds {axiom} true on {k1}x{k2}: {truth}"));
                }
            }
        }
    }
    let rt = frame(FrameKind::Rt, 2);
    let anchor = ProductPoint::new(PseudoSeq::zero(rt.alphabet), PseudoSeq::zero(rt.alphabet));
    let top = SymbolicValuation::new(ValuationName::Constant(true), anchor.clone());
    let com = SymbolicValuation::new(ValuationName::StCom, anchor);
    let controls = [
        check_com_certificate_with(&rt, &rt, Bounds::default(), &top).unwrap(),
        check_chr_certificate_with(&rt, &rt, Bounds::default(), &com).unwrap(),
    ];
    for c in &controls {
        if c.accepted || c.rejected_layer().map(|l| l.name) != Some("consequent") {
            failures.push(format!("sanity control for {} not rejected at the consequent", c.axiom));
        }
    }
    Outcome {
        ok: failures.is_empty(),
        detail: format!(
            "accepted={accepted}/64 controls_rejected={} {}",
            controls.iter().filter(|c| !c.accepted).count(),
            failures.join("; ")
        )
        .trim_end()
        .to_string(),
    }
}

fn finite_com() -> Outcome {
    Outcome::from_reports(&[suites::finite_com(SEED, 100, 6).unwrap()])
}

fn lex() -> Outcome {
    Outcome::from_reports(&[suites::lex_evidence(2, 4, 3, 2).unwrap()])
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_modal-nbhd"))
        .args(args)
        .output()
        .unwrap();
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn round_trip_and_determinism() -> Outcome {
    let formulas = generate_formulas(2, &["p", "q"]).unwrap();
    let mismatches: Vec<String> = formulas
        .iter()
        .filter(|phi| parse(&phi.to_string()).ok().as_ref() != Some(*phi))
        .map(|phi| phi.to_string())
        .collect();
    if let Some(first) = mismatches.first() {
        return Outcome::fail(format!(
            "{} of {} formulas fail to round-trip, first {first}",
            mismatches.len(),
            formulas.len()
        ));
    }
    let runs: [&[&str]; 3] = [
        &[
            "verify",
            "--lemma",
            "fusion-axioms",
            "--count",
            "20",
            "--seed",
            "7",
            "--json",
        ],
        &[
            "verify",
            "--lemma",
            "nf-agreement",
            "--count",
            "10",
            "--seed",
            "7",
            "--json",
        ],
        &[
            "countermodel",
            "--axiom",
            "chr",
            "--kind1",
            "it",
            "--kind2",
            "rn",
            "--json",
        ],
    ];
    for args in runs {
        let (c1, a) = run_cli(args);
        let (c2, b) = run_cli(args);
        if c1 != 0 || c2 != 0 || a != b || a.is_empty() {
            return Outcome::fail(format!("`{}` not reproducible (exit {c1}, {c2})", args.join(" ")));
        }
    }
    Outcome {
        ok: true,
        detail: format!("formulas={} runs_compared={}", formulas.len(), runs.len()),
    }
}

type Criterion = (u32, &'static str, fn() -> Outcome, Option<Duration>);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        (1, "characterization", characterization, Some(Duration::from_secs(60))),
        (2, "kripke agreement", kripke_agreement, Some(Duration::from_secs(60))),
        (3, "truth preservation", truth_preservation, None),
        (4, "chain", chain, Some(Duration::from_secs(120))),
        (5, "f_F morphism", ff_morphism, Some(Duration::from_secs(120))),
        (6, "g morphism", g_morphism, Some(Duration::from_secs(600))),
        (7, "fusion soundness", fusion_soundness, None),
        (
            8,
            "countermodel certificates",
            certificates,
            Some(Duration::from_secs(300)),
        ),
        (9, "finite product contrast", finite_com, None),
        (10, "lexicographic evidence", lex, None),
        (11, "round trip and determinism", round_trip_and_determinism, None),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let results: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .filter(|(_, name, ..)| filter.is_empty() || filter.iter().any(|f| name.contains(f.as_str())))
            .map(|&(n, name, run, limit)| {
                s.spawn(move || {
                    let start = Instant::now();
                    let mut outcome = run();
                    let elapsed = start.elapsed();
                    if let Some(limit) = limit {
                        if elapsed > limit {
                            outcome.ok = false;
                            outcome
                                .detail
                                .push_str(&format!(" over time limit {}s", limit.as_secs()));
                        }
                    }
                    (n, name, outcome, elapsed)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("criterion panicked"))
            .collect()
    });
    let mut all = true;
    for (n, name, outcome, elapsed) in &results {
        all &= outcome.ok;
        println!(
            "criterion {n:>2} {:<4} {name} ({:.1}s) {}",
            if outcome.ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            outcome.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
