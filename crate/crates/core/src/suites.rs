//! Randomized and combined checks shared by the command line and the
//! acceptance tests. Every suite is a function of its seed.

use std::collections::BTreeMap;

use rand::Rng;
use serde_json::Value;

use crate::error::Result;
use crate::formula::{axiom_instance, fusion_axioms, generate_formulas, AxiomScheme, Logic, Modality};
use crate::kripke::{Alphabet, FrameKind, TreeFrame};
use crate::nbhd::{
    check_bounded_morphism_finite, nof, product_n, structural_characteristics, truth_preservation_check,
    valid_on_frame, valid_on_frame_guarded, Morphism, NFrame, Validity, DEFAULT_SWEEP_GUARD,
};
use crate::omega::{applicable_evidence, axiom_evidence, check_lex_order, interval_neighborhood_check};
use crate::report::{merge, Tally, VerificationReport};
use crate::sample::{self, Lifting};
use crate::worlds::{Valuation, WorldSet};

fn params(pairs: &[(&str, Value)]) -> BTreeMap<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn holds(frame: &NFrame, scheme: AxiomScheme) -> Result<bool> {
    Ok(valid_on_frame(frame, &axiom_instance(scheme, Modality::One))?.is_valid())
}

/// Brute-force validity of the D, T and 4 instances against the
/// structural conditions, on random unimodal frames.
pub fn characterization_sweep(
    seed: u64,
    count: usize,
    max_worlds: usize,
    max_bases: usize,
) -> Result<VerificationReport> {
    let mut rng = sample::rng(seed);
    let mut tally = Tally::new("characterization")
        .param("seed", seed)
        .param("frames", count as u64)
        .param("max_worlds", max_worlds as u64)
        .param("max_bases", max_bases as u64);
    for _ in 0..count {
        let n = rng.gen_range(1..=max_worlds);
        let frame = sample::random_nframe(&mut rng, n, 1, max_bases)?;
        let c = structural_characteristics(&frame, Modality::One)?;
        for (scheme, structural) in [
            (AxiomScheme::D, c.d_ok),
            (AxiomScheme::T, c.t_ok),
            (AxiomScheme::Four, c.four_ok),
        ] {
            let brute = holds(&frame, scheme)?;
            tally.check(brute == structural, || {
                format!(
                    "{scheme}: brute force {brute}, structural {structural} on {}",
                    serde_json::to_string(&frame.to_json()).unwrap_or_default()
                )
            });
        }
    }
    Ok(tally.finish())
}

/// Kripke semantics against neighborhood semantics of `N(F)`, for every
/// formula up to `depth` over `p` and every valuation of `p`.
pub fn nf_agreement(seed: u64, count: usize, max_worlds: usize, depth: usize) -> Result<VerificationReport> {
    let mut rng = sample::rng(seed);
    let formulas = generate_formulas(depth, &["p"])?;
    let mut tally = Tally::new("nf-agreement")
        .param("seed", seed)
        .param("frames", count as u64)
        .param("max_worlds", max_worlds as u64)
        .param("depth", depth as u64)
        .param("formulas", formulas.len() as u64);
    for _ in 0..count {
        let n = rng.gen_range(1..=max_worlds);
        let kripke = sample::random_kripke(&mut rng, n)?;
        let nframe = nof(&kripke);
        for mask in 0..1u64 << n {
            let val = Valuation::from([("p".to_string(), WorldSet(mask))]);
            for phi in &formulas {
                let k = kripke.extension(&val, phi)?;
                let m = nframe.extension(&val, phi)?;
                tally.check(k == m, || {
                    format!(
                        "{phi} with p={:?}: Kripke {:?}, neighborhood {:?} on {}",
                        WorldSet(mask).names(kripke.worlds()),
                        k.names(kripke.worlds()),
                        m.names(kripke.worlds()),
                        serde_json::to_string(&kripke.to_json()).unwrap_or_default()
                    )
                });
            }
        }
    }
    Ok(tally.finish())
}

fn hand_instances() -> Result<Vec<(NFrame, NFrame, Morphism)>> {
    let mut out = Vec::new();
    let two = NFrame::from_indices(&[vec![vec![vec![1]], vec![vec![1]]]])?;
    let one = NFrame::from_indices(&[vec![vec![vec![0]]]])?;
    out.push((two.clone(), one.clone(), Morphism::new(vec![0, 0], &two, &one)?));
    out.push((two.clone(), two.clone(), Morphism::identity(&two)));
    let improper = NFrame::from_indices(&[vec![vec![vec![]], vec![vec![0, 1]]]])?;
    out.push((improper.clone(), improper.clone(), Morphism::identity(&improper)));
    let swap = NFrame::from_indices(&[vec![vec![vec![1]], vec![vec![0]]]])?;
    out.push((swap.clone(), swap.clone(), Morphism::new(vec![1, 0], &swap, &swap)?));
    let bimodal = NFrame::from_indices(&[
        vec![vec![vec![0, 1]], vec![vec![1]], vec![vec![1]]],
        vec![vec![vec![0]], vec![vec![2]], vec![vec![2]]],
    ])?;
    let folded = NFrame::from_indices(&[
        vec![vec![vec![0, 1]], vec![vec![1]]],
        vec![vec![vec![0]], vec![vec![1]]],
    ])?;
    out.push((
        bimodal.clone(),
        folded.clone(),
        Morphism::new(vec![0, 1, 1], &bimodal, &folded)?,
    ));
    Ok(out)
}

/// Truth preservation along bounded morphisms: hand-built instances and
/// `quotients` random quotients per lifting, every valuation of `p` on the
/// target, formulas up to `depth`.
pub fn truth_preservation_suite(seed: u64, quotients: usize, depth: usize) -> Result<VerificationReport> {
    let mut rng = sample::rng(seed);
    let mut instances = hand_instances()?;
    for lifting in [Lifting::Preimage, Lifting::Section] {
        for i in 0..quotients {
            let n = rng.gen_range(1..=3);
            let extra = rng.gen_range(0..=2);
            let inst = sample::quotient_instance(&mut rng, n, extra, 1 + i % 2, lifting)?;
            instances.push((inst.source, inst.target, inst.map));
        }
    }
    let mut parts = Vec::new();
    let mut morphisms = 0u64;
    for (source, target, f) in &instances {
        let m = check_bounded_morphism_finite(f, source, target)?;
        morphisms += m.pass as u64;
        parts.push(m);
        for mask in 0..1u64 << target.len() {
            let val = Valuation::from([("p".to_string(), WorldSet(mask))]);
            parts.push(truth_preservation_check(f, source, target, &val, depth)?);
        }
    }
    Ok(merge(
        "truth-preservation",
        params(&[
            ("seed", seed.into()),
            ("instances", (instances.len() as u64).into()),
            ("morphisms_passing", morphisms.into()),
            ("depth", (depth as u64).into()),
        ]),
        &parts,
    ))
}

/// Random sizes `(n1, n2)` with `n1 * n2 <= max_product`.
fn sizes<R: Rng>(rng: &mut R, max_product: usize) -> (usize, usize) {
    let n1 = rng.gen_range(1..=max_product.clamp(1, 3));
    let n2 = rng.gen_range(1..=(max_product / n1).clamp(1, 3));
    (n1, n2)
}

fn sweep(frame: &NFrame, phi: &crate::formula::Formula, tally: &mut Tally, what: impl Fn() -> String) -> Result<()> {
    match valid_on_frame_guarded(frame, phi, DEFAULT_SWEEP_GUARD)? {
        Validity::Valid => {
            tally.check(true, String::new);
        }
        Validity::Counterexample { valuation, world } => {
            tally.check(false, || {
                format!(
                    "{}: {phi} fails at {} under {valuation:?}",
                    what(),
                    frame.worlds()[world]
                )
            });
        }
    }
    Ok(())
}

/// Fusion axioms on products of random frames of the factor logics.
pub fn fusion_soundness(seed: u64, count: usize, max_product: usize) -> Result<VerificationReport> {
    let mut rng = sample::rng(seed);
    let mut tally = Tally::new("fusion-axioms")
        .param("seed", seed)
        .param("pairs", count as u64)
        .param("max_product_worlds", max_product as u64);
    for i in 0..count {
        let l1 = Logic::ALL[i % 4];
        let l2 = Logic::ALL[(i / 4) % 4];
        let (n1, n2) = sizes(&mut rng, max_product);
        let f1 = sample::random_frame_for_logic(&mut rng, l1, n1, 3, 100_000)?;
        let f2 = sample::random_frame_for_logic(&mut rng, l2, n2, 3, 100_000)?;
        let product = product_n(&f1, &f2)?;
        for (scheme, modality, phi) in fusion_axioms(l1, l2) {
            sweep(&product, &phi, &mut tally, || {
                format!("{l1} x {l2}, {scheme}{}", modality.index())
            })?;
        }
    }
    Ok(tally.finish())
}

/// Commutativity on products of random finite frames.
pub fn finite_com(seed: u64, count: usize, max_product: usize) -> Result<VerificationReport> {
    let mut rng = sample::rng(seed);
    let com = axiom_instance(AxiomScheme::Com, Modality::One);
    let mut tally = Tally::new("finite-com")
        .param("seed", seed)
        .param("pairs", count as u64)
        .param("max_product_worlds", max_product as u64);
    for _ in 0..count {
        let (n1, n2) = sizes(&mut rng, max_product);
        let f1 = sample::random_nframe(&mut rng, n1, 1, 3)?;
        let f2 = sample::random_nframe(&mut rng, n2, 1, 3)?;
        let product = product_n(&f1, &f2)?;
        sweep(&product, &com, &mut tally, || {
            format!(
                "{} x {}",
                serde_json::to_string(&f1.to_json()).unwrap_or_default(),
                serde_json::to_string(&f2.to_json()).unwrap_or_default()
            )
        })?;
    }
    Ok(tally.finish())
}

/// Every axiom condition that applies to `kind`.
pub fn axiom_evidence_all(frame: &TreeFrame, depth: usize) -> Result<VerificationReport> {
    let parts = applicable_evidence(frame.kind)
        .iter()
        .map(|&e| axiom_evidence(frame, depth, e))
        .collect::<Result<Vec<_>>>()?;
    Ok(merge(
        "axiom-evidence",
        params(&[
            ("kind", frame.kind.name().into()),
            ("branching", frame.branching().into()),
            ("depth", (depth as u64).into()),
        ]),
        &parts,
    ))
}

/// Order facts on the signed window, then neighborhood and interval
/// comparisons for RT and IT with centers of support at most `center_depth`.
pub fn lex_evidence(branching: u32, depth: usize, k_max: usize, center_depth: usize) -> Result<VerificationReport> {
    let mut parts = vec![check_lex_order(Alphabet::signed(branching), depth)?];
    for kind in [FrameKind::Rt, FrameKind::It] {
        let frame = TreeFrame::signed(kind, branching)?;
        parts.push(interval_neighborhood_check(&frame, center_depth, k_max, depth)?);
    }
    Ok(merge(
        "lex",
        params(&[
            ("branching", branching.into()),
            ("depth", (depth as u64).into()),
            ("k_max", (k_max as u64).into()),
            ("center_depth", (center_depth as u64).into()),
        ]),
        &parts,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        for r in [
            characterization_sweep(1, 40, 3, 3).unwrap(),
            nf_agreement(2, 5, 3, 1).unwrap(),
            truth_preservation_suite(3, 3, 1).unwrap(),
            fusion_soundness(4, 8, 4).unwrap(),
            finite_com(5, 10, 4).unwrap(),
        ] {
            assert!(r.pass, "{r}");
            assert!(r.checked > 0);
        }
    }

    #[test]
    fn suites_are_deterministic() {
        let a = characterization_sweep(9, 20, 3, 3).unwrap().without_timing();
        let b = characterization_sweep(9, 20, 3, 3).unwrap().without_timing();
        assert_eq!(a, b);
    }

    #[test]
    fn evidence_merges() {
        let f = TreeFrame::new(FrameKind::Rt, 2).unwrap();
        let r = axiom_evidence_all(&f, 3).unwrap();
        assert!(r.pass, "{r}");
    }
}
