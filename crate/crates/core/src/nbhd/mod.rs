//! Finite monotone neighborhood frames.
//!
//! A neighborhood filter `τ_i(x)` is stored through a base: a nonempty
//! list of world sets whose supersets are exactly the members of the
//! filter. `□_i ψ` holds at `x` iff some base set of `τ_i(x)` lies inside
//! the extension of `ψ`, which is the filter clause after upward closure.

mod morphism;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{Formula, Modality};
use crate::kripke::{parse_modality_key, KripkeFrame};
use crate::report::{Tally, VerificationReport};
use crate::worlds::{self, Valuation, WorldSet};

pub use morphism::{
    check_bounded_morphism_finite, pointwise_agreement, pull_back, truth_preservation_check, Morphism, MorphismJson,
};

/// Default bound on `worlds × atoms` for exhaustive valuation sweeps.
pub const DEFAULT_SWEEP_GUARD: usize = 16;
/// Bound on worlds for the subset enumeration behind `four_ok`.
pub const MAX_FOUR_WORLDS: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NFrame {
    worlds: Vec<String>,
    /// `bases[modality][world]`
    bases: Vec<Vec<Vec<WorldSet>>>,
}

impl NFrame {
    /// A frame whose points have no base sets yet.
    pub fn new(worlds: Vec<String>, modalities: usize) -> Result<Self> {
        worlds::index_worlds(&worlds)?;
        if !(1..=2).contains(&modalities) {
            return Err(Error::InvalidFrame(format!("{modalities} modalities")));
        }
        let n = worlds.len();
        Ok(NFrame {
            worlds,
            bases: vec![vec![Vec::new(); n]; modalities],
        })
    }

    /// Frame on worlds `x0, x1, ...`; `bases[m][w]` lists world indices.
    pub fn from_indices(bases: &[Vec<Vec<Vec<usize>>>]) -> Result<Self> {
        let n = bases.first().map_or(0, Vec::len);
        let mut frame = NFrame::new((0..n).map(|i| format!("x{i}")).collect(), bases.len())?;
        for (m, per_world) in bases.iter().enumerate() {
            if per_world.len() != n {
                return Err(Error::InvalidFrame("ragged base table".into()));
            }
            for (w, sets) in per_world.iter().enumerate() {
                let sets = sets.iter().map(|s| WorldSet::from_worlds(s.iter().copied())).collect();
                frame.set_base(Modality::ALL[m], w, sets)?;
            }
        }
        Ok(frame)
    }

    pub fn set_base(&mut self, modality: Modality, world: usize, sets: Vec<WorldSet>) -> Result<()> {
        self.check_modality(modality)?;
        if world >= self.len() {
            return Err(Error::UnknownWorld(format!("#{world}")));
        }
        self.bases[modality.slot()][world] = sets;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.worlds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.worlds.is_empty()
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn world(&self, name: &str) -> Result<usize> {
        self.worlds
            .iter()
            .position(|w| w == name)
            .ok_or_else(|| Error::UnknownWorld(name.to_string()))
    }

    pub fn modalities(&self) -> usize {
        self.bases.len()
    }

    fn check_modality(&self, modality: Modality) -> Result<()> {
        if modality.index() > self.modalities() {
            return Err(Error::ModalityMismatch(modality.index(), self.modalities()));
        }
        Ok(())
    }

    /// Base of `τ_i(world)`. Panics if the frame lacks modality `i`.
    pub fn base(&self, modality: Modality, world: usize) -> &[WorldSet] {
        &self.bases[modality.slot()][world]
    }

    /// Whether `set` belongs to the filter `τ_i(world)`.
    pub fn is_neighborhood(&self, modality: Modality, world: usize, set: WorldSet) -> bool {
        self.base(modality, world).iter().any(|b| b.is_subset(set))
    }

    /// The first modality only.
    pub fn unimodal(&self) -> NFrame {
        NFrame {
            worlds: self.worlds.clone(),
            bases: vec![self.bases[0].clone()],
        }
    }

    pub fn extension(&self, valuation: &Valuation, formula: &Formula) -> Result<WorldSet> {
        let n = self.len();
        Ok(match formula {
            Formula::Atom(name) => valuation
                .get(name)
                .copied()
                .ok_or_else(|| Error::UnknownAtom(name.clone()))?
                .intersection(WorldSet::full(n)),
            Formula::Bottom => WorldSet::EMPTY,
            Formula::Implies(l, r) => self
                .extension(valuation, l)?
                .complement(n)
                .union(self.extension(valuation, r)?),
            Formula::Box(i, body) => {
                self.check_modality(*i)?;
                let inner = self.extension(valuation, body)?;
                WorldSet::from_worlds((0..n).filter(|&w| self.is_neighborhood(*i, w, inner)))
            }
        })
    }

    pub fn to_json(&self) -> NFrameJson {
        let base = (0..self.modalities())
            .map(|m| {
                let per_world = (0..self.len())
                    .map(|w| {
                        let sets = self.bases[m][w]
                            .iter()
                            .map(|s| s.names(&self.worlds).into_iter().map(String::from).collect())
                            .collect();
                        (self.worlds[w].clone(), sets)
                    })
                    .collect();
                ((m + 1).to_string(), per_world)
            })
            .collect();
        NFrameJson {
            worlds: self.worlds.clone(),
            base,
            val: None,
        }
    }
}

/// `{"worlds":[..],"base":{"1":{"w0":[["w0","w1"],["w1"]]}}}`, with an
/// optional `"val":{"p":[..]}` for models.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NFrameJson {
    pub worlds: Vec<String>,
    pub base: BTreeMap<String, BTreeMap<String, Vec<Vec<String>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub val: Option<BTreeMap<String, Vec<String>>>,
}

impl NFrameJson {
    /// Points missing from the table get no base sets, which
    /// `validate_frame` then reports.
    pub fn into_frame(&self) -> Result<NFrame> {
        let index = worlds::index_worlds(&self.worlds)?;
        let keys: Vec<Modality> = self.base.keys().map(|k| parse_modality_key(k)).collect::<Result<_>>()?;
        let modalities = if keys.contains(&Modality::Two) { 2 } else { 1 };
        let mut frame = NFrame::new(self.worlds.clone(), modalities)?;
        for (key, per_world) in &self.base {
            let modality = parse_modality_key(key)?;
            for (name, sets) in per_world {
                let w = worlds::lookup(&index, name)?;
                let sets = sets
                    .iter()
                    .map(|s| worlds::set_from_names(&index, s))
                    .collect::<Result<_>>()?;
                frame.set_base(modality, w, sets)?;
            }
        }
        Ok(frame)
    }

    pub fn valuation(&self) -> Result<Valuation> {
        let index = worlds::index_worlds(&self.worlds)?;
        worlds::valuation_from_names(&index, self.val.as_ref().unwrap_or(&BTreeMap::new()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NModel {
    pub frame: NFrame,
    pub valuation: Valuation,
}

impl NModel {
    pub fn to_json(&self) -> NFrameJson {
        let mut json = self.frame.to_json();
        json.val = Some(worlds::valuation_to_names(&self.frame.worlds, &self.valuation));
        json
    }
}

/// Filter-base checks: every point has a base, base sets stay inside the
/// carrier, and any two base sets contain a third inside their meet.
pub fn validate_frame(frame: &NFrame) -> VerificationReport {
    let n = frame.len();
    let full = WorldSet::full(n);
    let mut tally = Tally::new("validate-frame")
        .param("worlds", n as u64)
        .param("modalities", frame.modalities() as u64);
    for &i in &Modality::ALL[..frame.modalities()] {
        for x in 0..n {
            let base = frame.base(i, x);
            let name = &frame.worlds[x];
            tally.check(!base.is_empty(), || format!("modality {i}, point {name}: empty base"));
            for (a, u) in base.iter().enumerate() {
                tally.check(u.is_subset(full), || {
                    format!("modality {i}, point {name}: base set {a} leaves the carrier")
                });
                for v in base.iter().skip(a + 1) {
                    let meet = u.intersection(*v);
                    tally.check(base.iter().any(|w| w.is_subset(meet)), || {
                        format!(
                            "modality {i}, point {name}: base sets {:?} and {:?} have no base set inside their intersection",
                            u.names(&frame.worlds),
                            v.names(&frame.worlds)
                        )
                    });
                }
            }
        }
    }
    tally.finish()
}

/// `τ(w) = {U | R(w) ⊆ U}`, one base set per point and modality.
pub fn nof(frame: &KripkeFrame) -> NFrame {
    let n = frame.len();
    NFrame {
        worlds: frame.worlds().to_vec(),
        bases: Modality::ALL
            .iter()
            .map(|&i| (0..n).map(|w| vec![frame.successors(i, w)]).collect())
            .collect(),
    }
}

pub fn eval(model: &NModel, world: usize, formula: &Formula) -> Result<bool> {
    if world >= model.frame.len() {
        return Err(Error::UnknownWorld(format!("#{world}")));
    }
    Ok(model.frame.extension(&model.valuation, formula)?.contains(world))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Validity {
    Valid,
    Counterexample { valuation: Valuation, world: usize },
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid)
    }
}

pub fn valid_on_frame(frame: &NFrame, formula: &Formula) -> Result<Validity> {
    valid_on_frame_guarded(frame, formula, DEFAULT_SWEEP_GUARD)
}

/// Sweeps every valuation of the formula's atoms. Valuations run in
/// binary-counter order where bit `w * atoms + a` sets atom `a` at world
/// `w`; the first failing world of the first failing valuation is returned.
pub fn valid_on_frame_guarded(frame: &NFrame, formula: &Formula, guard: usize) -> Result<Validity> {
    let atoms: Vec<String> = formula.atoms().into_iter().map(String::from).collect();
    let n = frame.len();
    let bits = n * atoms.len();
    if bits > guard || bits >= 64 {
        return Err(Error::Guard {
            what: "valuation sweep bits (worlds x atoms)",
            actual: bits as u64,
            limit: guard as u64,
        });
    }
    let all = WorldSet::full(n);
    for counter in 0u64..(1u64 << bits) {
        let valuation: Valuation = atoms
            .iter()
            .enumerate()
            .map(|(a, name)| {
                let set = WorldSet::from_worlds((0..n).filter(|w| counter >> (w * atoms.len() + a) & 1 == 1));
                (name.clone(), set)
            })
            .collect();
        let ext = frame.extension(&valuation, formula)?;
        if ext != all {
            let world = (0..n).find(|&w| !ext.contains(w)).expect("some world fails");
            return Ok(Validity::Counterexample { valuation, world });
        }
    }
    Ok(Validity::Valid)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Characteristics {
    /// `∅ ∉ τ_i(x)` everywhere
    pub d_ok: bool,
    /// `x ∈ U` for every `U ∈ τ_i(x)`
    pub t_ok: bool,
    /// `{y | U ∈ τ_i(y)} ∈ τ_i(x)` for every `U ∈ τ_i(x)`
    pub four_ok: bool,
}

pub fn structural_characteristics(frame: &NFrame, modality: Modality) -> Result<Characteristics> {
    frame.check_modality(modality)?;
    let n = frame.len();
    if n > MAX_FOUR_WORLDS {
        return Err(Error::Guard {
            what: "worlds for subset enumeration",
            actual: n as u64,
            limit: MAX_FOUR_WORLDS as u64,
        });
    }
    let d_ok = (0..n).all(|x| frame.base(modality, x).iter().all(|u| !u.is_empty()));
    let t_ok = (0..n).all(|x| frame.base(modality, x).iter().all(|u| u.contains(x)));
    let four_ok = (0..n).all(|x| {
        (0u64..1 << n).map(WorldSet).all(|u| {
            if !frame.is_neighborhood(modality, x, u) {
                return true;
            }
            let holders = WorldSet::from_worlds((0..n).filter(|&y| frame.is_neighborhood(modality, y, u)));
            frame.is_neighborhood(modality, x, holders)
        })
    });
    Ok(Characteristics { d_ok, t_ok, four_ok })
}

/// Product of two unimodal frames: modality-1 base sets are horizontal
/// slabs `V × {x₂}`, modality-2 base sets vertical slabs `{x₁} × V`.
/// World `(a, b)` has index `a * |X₂| + b`.
pub fn product_n(first: &NFrame, second: &NFrame) -> Result<NFrame> {
    for (label, frame) in [("first", first), ("second", second)] {
        if frame.modalities() != 1 {
            return Err(Error::InvalidFrame(format!("{label} factor is not unimodal")));
        }
        let report = validate_frame(frame);
        if !report.pass {
            return Err(Error::InvalidFrame(format!(
                "{label} factor: {}",
                report.counterexample.unwrap_or_default()
            )));
        }
    }
    let (n1, n2) = (first.len(), second.len());
    worlds::check_world_count(n1 * n2)?;
    let idx = |a: usize, b: usize| a * n2 + b;
    let worlds = (0..n1)
        .flat_map(|a| (0..n2).map(move |b| (a, b)))
        .map(|(a, b)| format!("({},{})", first.worlds[a], second.worlds[b]))
        .collect();
    let mut out = NFrame::new(worlds, 2)?;
    for a in 0..n1 {
        for b in 0..n2 {
            let horizontal = first
                .base(Modality::One, a)
                .iter()
                .map(|v| WorldSet::from_worlds(v.iter().map(|a2| idx(a2, b))))
                .collect();
            let vertical = second
                .base(Modality::One, b)
                .iter()
                .map(|v| WorldSet::from_worlds(v.iter().map(|b2| idx(a, b2))))
                .collect();
            out.set_base(Modality::One, idx(a, b), horizontal)?;
            out.set_base(Modality::Two, idx(a, b), vertical)?;
        }
    }
    Ok(out)
}
