//! Seeded random frames and morphisms for the randomized suites.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::formula::{axiom_instance, Logic, Modality};
use crate::kripke::KripkeFrame;
use crate::nbhd::{valid_on_frame, validate_frame, Morphism, NFrame};
use crate::worlds::{Valuation, WorldSet};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Base sets for one point: between one and `max_bases` random subsets,
/// redrawn until any two meet over some base set.
fn random_base<R: Rng>(rng: &mut R, n: usize, max_bases: usize) -> Vec<WorldSet> {
    loop {
        let count = rng.gen_range(1..=max_bases.max(1));
        let mut sets: Vec<WorldSet> = (0..count).map(|_| WorldSet(rng.gen_range(0..1u64 << n))).collect();
        sets.sort();
        sets.dedup();
        let closed = sets.iter().enumerate().all(|(a, u)| {
            sets[a + 1..]
                .iter()
                .all(|v| sets.iter().any(|w| w.is_subset(u.intersection(*v))))
        });
        if closed {
            return sets;
        }
    }
}

/// A valid frame on `x0..` with `n` worlds, at most `max_bases` base sets
/// per point and modality.
pub fn random_nframe<R: Rng>(rng: &mut R, n: usize, modalities: usize, max_bases: usize) -> Result<NFrame> {
    let mut frame = NFrame::new((0..n).map(|i| format!("x{i}")).collect(), modalities)?;
    for &i in &Modality::ALL[..modalities] {
        for w in 0..n {
            frame.set_base(i, w, random_base(rng, n, max_bases))?;
        }
    }
    debug_assert!(validate_frame(&frame).pass);
    Ok(frame)
}

/// Each edge present with probability 1/2, independently per modality.
pub fn random_kripke<R: Rng>(rng: &mut R, n: usize) -> Result<KripkeFrame> {
    let mut edges = [Vec::new(), Vec::new()];
    for list in &mut edges {
        for u in 0..n {
            for v in 0..n {
                if rng.gen_bool(0.5) {
                    list.push((u, v));
                }
            }
        }
    }
    KripkeFrame::from_edges(n, &edges[0], &edges[1])
}

/// A unimodal frame validating the defining axioms of `logic`, by
/// rejection. Gives up after `attempts` draws.
pub fn random_frame_for_logic<R: Rng>(
    rng: &mut R,
    logic: Logic,
    n: usize,
    max_bases: usize,
    attempts: usize,
) -> Result<NFrame> {
    for _ in 0..attempts {
        let frame = random_nframe(rng, n, 1, max_bases)?;
        let mut ok = true;
        for &scheme in logic.defining_schemes() {
            if !valid_on_frame(&frame, &axiom_instance(scheme, Modality::One))?.is_valid() {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(frame);
        }
    }
    Err(Error::Precondition(format!(
        "no {logic} frame on {n} worlds after {attempts} draws"
    )))
}

/// How a quotient source gets its base sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lifting {
    /// `f⁻¹(V)` for every base set `V` of the image point
    Preimage,
    /// `s(V)` for a fixed section `s` of the map
    Section,
}

#[derive(Clone, Debug)]
pub struct MorphismInstance {
    pub source: NFrame,
    pub target: NFrame,
    pub map: Morphism,
    pub valuation: Valuation,
}

/// A random valid target on `n` worlds, a source with `extra` additional
/// worlds mapped onto it, base sets lifted per `lifting`, and a random
/// valuation of `p` on the target.
pub fn quotient_instance<R: Rng>(
    rng: &mut R,
    n: usize,
    extra: usize,
    modalities: usize,
    lifting: Lifting,
) -> Result<MorphismInstance> {
    let target = random_nframe(rng, n, modalities, 3)?;
    let mut map: Vec<usize> = (0..n).collect();
    map.extend((0..extra).map(|_| rng.gen_range(0..n)));
    map.shuffle(rng);
    let size = map.len();

    let mut section = vec![usize::MAX; n];
    for (x, &y) in map.iter().enumerate() {
        if section[y] == usize::MAX {
            section[y] = x;
        }
    }
    let lift = |v: WorldSet| match lifting {
        Lifting::Preimage => WorldSet::from_worlds((0..size).filter(|&x| v.contains(map[x]))),
        Lifting::Section => WorldSet::from_worlds(v.iter().map(|y| section[y])),
    };

    let mut source = NFrame::new((0..size).map(|i| format!("x{i}")).collect(), modalities)?;
    for &i in &Modality::ALL[..modalities] {
        for (x, &y) in map.iter().enumerate() {
            let sets = target.base(i, y).iter().map(|&v| lift(v)).collect();
            source.set_base(i, x, sets)?;
        }
    }
    let morphism = Morphism::new(map, &source, &target)?;
    let valuation = Valuation::from([("p".to_string(), WorldSet(rng.gen_range(0..1u64 << n)))]);
    Ok(MorphismInstance {
        source,
        target,
        map: morphism,
        valuation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nbhd::check_bounded_morphism_finite;

    #[test]
    fn frames_are_valid_and_seeded() {
        let mut r = rng(7);
        for _ in 0..50 {
            let f = random_nframe(&mut r, 3, 2, 3).unwrap();
            assert!(validate_frame(&f).pass);
        }
        let a = random_nframe(&mut rng(1), 3, 1, 3).unwrap();
        let b = random_nframe(&mut rng(1), 3, 1, 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn logic_frames_validate_their_axioms() {
        let mut r = rng(3);
        for logic in Logic::ALL {
            let f = random_frame_for_logic(&mut r, logic, 2, 3, 10_000).unwrap();
            for &s in logic.defining_schemes() {
                assert!(valid_on_frame(&f, &axiom_instance(s, Modality::One))
                    .unwrap()
                    .is_valid());
            }
        }
    }

    #[test]
    fn quotients_are_bounded_morphisms() {
        let mut r = rng(11);
        for lifting in [Lifting::Preimage, Lifting::Section] {
            for _ in 0..20 {
                let inst = quotient_instance(&mut r, 3, 2, 2, lifting).unwrap();
                assert!(validate_frame(&inst.source).pass);
                let rep = check_bounded_morphism_finite(&inst.map, &inst.source, &inst.target).unwrap();
                assert!(rep.pass, "{rep}");
            }
        }
    }
}
