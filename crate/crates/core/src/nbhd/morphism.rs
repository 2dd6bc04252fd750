use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::NFrame;
use crate::error::{Error, Result};
use crate::formula::{generate_formulas, Formula, Modality};
use crate::report::{Tally, VerificationReport};
use crate::worlds::{self, Valuation, WorldSet};

/// A total map from source worlds to target worlds, by index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    map: Vec<usize>,
}

impl Morphism {
    pub fn new(map: Vec<usize>, source: &NFrame, target: &NFrame) -> Result<Self> {
        if map.len() != source.len() {
            return Err(Error::Precondition(format!(
                "map covers {} of {} source worlds",
                map.len(),
                source.len()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&y| y >= target.len()) {
            return Err(Error::UnknownWorld(format!("#{bad}")));
        }
        Ok(Morphism { map })
    }

    pub fn identity(frame: &NFrame) -> Self {
        Morphism {
            map: (0..frame.len()).collect(),
        }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn image(&self, set: WorldSet) -> WorldSet {
        WorldSet::from_worlds(set.iter().map(|x| self.map[x]))
    }

    pub fn preimage(&self, set: WorldSet) -> WorldSet {
        WorldSet::from_worlds((0..self.map.len()).filter(|&x| set.contains(self.map[x])))
    }
}

/// `{"map":{"x0":"y0",..}}`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MorphismJson {
    pub map: BTreeMap<String, String>,
}

impl MorphismJson {
    pub fn resolve(&self, source: &NFrame, target: &NFrame) -> Result<Morphism> {
        let src = worlds::index_worlds(source.worlds())?;
        let tgt = worlds::index_worlds(target.worlds())?;
        let mut map = vec![None; source.len()];
        for (x, y) in &self.map {
            map[worlds::lookup(&src, x)?] = Some(worlds::lookup(&tgt, y)?);
        }
        let map = map
            .into_iter()
            .enumerate()
            .map(|(x, y)| {
                y.ok_or_else(|| Error::Precondition(format!("map is not total: {} unmapped", source.worlds()[x])))
            })
            .collect::<Result<_>>()?;
        Morphism::new(map, source, target)
    }
}

/// The three bounded-morphism conditions, reduced to base sets: upward
/// closure makes it enough to test (2) on base sets of the source and (3)
/// on base sets of the target.
pub fn check_bounded_morphism_finite(f: &Morphism, source: &NFrame, target: &NFrame) -> Result<VerificationReport> {
    if source.modalities() != target.modalities() {
        return Err(Error::ModalityMismatch(source.modalities(), target.modalities()));
    }
    let mut tally = Tally::new("bounded-morphism")
        .param("source_worlds", source.len() as u64)
        .param("target_worlds", target.len() as u64);

    let hit = WorldSet::from_worlds((0..source.len()).map(|x| f.apply(x)));
    for y in 0..target.len() {
        tally.check(hit.contains(y), || {
            format!("(1) surjectivity: {} has no preimage", target.worlds()[y])
        });
    }
    for &i in &Modality::ALL[..source.modalities()] {
        for x in 0..source.len() {
            let fx = f.apply(x);
            for u in source.base(i, x) {
                let image = f.image(*u);
                tally.check(target.is_neighborhood(i, fx, image), || {
                    format!(
                        "(2) modality {i}: f({:?}) = {:?} is not a neighborhood of {}",
                        u.names(source.worlds()),
                        image.names(target.worlds()),
                        target.worlds()[fx]
                    )
                });
            }
            for v in target.base(i, fx) {
                let covered = source.base(i, x).iter().any(|u| f.image(*u).is_subset(*v));
                tally.check(covered, || {
                    format!(
                        "(3) modality {i}: no neighborhood of {} maps into {:?}",
                        source.worlds()[x],
                        v.names(target.worlds())
                    )
                });
            }
        }
    }
    Ok(tally.finish())
}

/// `V(p) = f⁻¹(V′(p))`
pub fn pull_back(f: &Morphism, valuation: &Valuation) -> Valuation {
    valuation
        .iter()
        .map(|(atom, set)| (atom.clone(), f.preimage(*set)))
        .collect()
}

/// Compares `source, val_source, x ⊨ φ` with `target, val_target, f(x) ⊨ φ`
/// for every `x` and every formula.
pub fn pointwise_agreement(
    f: &Morphism,
    source: &NFrame,
    val_source: &Valuation,
    target: &NFrame,
    val_target: &Valuation,
    formulas: &[Formula],
) -> Result<VerificationReport> {
    let mut tally = Tally::new("truth-preservation")
        .param("formulas", formulas.len() as u64)
        .param("source_worlds", source.len() as u64);
    for phi in formulas {
        let left = source.extension(val_source, phi)?;
        let right = target.extension(val_target, phi)?;
        for x in 0..source.len() {
            let (l, r) = (left.contains(x), right.contains(f.apply(x)));
            tally.check(l == r, || {
                format!(
                    "{phi} at {}: source {l}, target {r} at {}",
                    source.worlds()[x],
                    target.worlds()[f.apply(x)]
                )
            });
        }
    }
    Ok(tally.finish())
}

/// Pulls `val_target` back along `f` and checks pointwise agreement on all
/// generated formulas up to `depth` over the valuation's atoms.
pub fn truth_preservation_check(
    f: &Morphism,
    source: &NFrame,
    target: &NFrame,
    val_target: &Valuation,
    depth: usize,
) -> Result<VerificationReport> {
    let morphism = check_bounded_morphism_finite(f, source, target)?;
    if !morphism.pass {
        return Err(Error::NotAMorphism(morphism.counterexample.unwrap_or_default()));
    }
    let atoms: Vec<&str> = val_target.keys().map(String::as_str).collect();
    let mut formulas = generate_formulas(depth, &atoms)?;
    if target.modalities() == 1 {
        formulas.retain(|phi| !phi.uses_modality(Modality::Two));
    }
    let val_source = pull_back(f, val_target);
    let mut report = pointwise_agreement(f, source, &val_source, target, val_target, &formulas)?;
    report.params.insert("depth".into(), (depth as u64).into());
    Ok(report)
}
