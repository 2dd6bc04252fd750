//! Finite Kripke frames and the infinite tree frames.

mod tree;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{Formula, Modality};
use crate::worlds::{self, Valuation, WorldSet};

pub use tree::{
    check_fractal, enumerate_words, fractal_sweep, fusion_word_rel, Alphabet, FrameKind, FusionFrame, Letter,
    TaggedLetter, TaggedWord, TreeFrame, Word, DEFAULT_BUDGET,
};

/// A finite bimodal Kripke frame. A unimodal frame simply leaves the
/// second relation empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeFrame {
    worlds: Vec<String>,
    successors: [Vec<WorldSet>; 2],
}

impl KripkeFrame {
    pub fn new(worlds: Vec<String>) -> Result<Self> {
        worlds::index_worlds(&worlds)?;
        let n = worlds.len();
        Ok(KripkeFrame {
            worlds,
            successors: [vec![WorldSet::EMPTY; n], vec![WorldSet::EMPTY; n]],
        })
    }

    /// Frame on worlds `w0, w1, ...` from index pairs.
    pub fn from_edges(n: usize, first: &[(usize, usize)], second: &[(usize, usize)]) -> Result<Self> {
        let mut frame = KripkeFrame::new((0..n).map(|i| format!("w{i}")).collect())?;
        for (i, edges) in [first, second].into_iter().enumerate() {
            let modality = Modality::ALL[i];
            for &(u, v) in edges {
                frame.add_edge(modality, u, v)?;
            }
        }
        Ok(frame)
    }

    pub fn add_edge(&mut self, modality: Modality, from: usize, to: usize) -> Result<()> {
        for w in [from, to] {
            if w >= self.len() {
                return Err(Error::UnknownWorld(format!("#{w}")));
            }
        }
        let slot = &mut self.successors[modality.slot()][from];
        *slot = slot.with(to);
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

    pub fn successors(&self, modality: Modality, w: usize) -> WorldSet {
        self.successors[modality.slot()][w]
    }

    pub fn related(&self, modality: Modality, u: usize, v: usize) -> bool {
        self.successors(modality, u).contains(v)
    }

    /// Worlds satisfying `formula` under `valuation`.
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
                let inner = self.extension(valuation, body)?;
                WorldSet::from_worlds((0..n).filter(|&w| self.successors(*i, w).is_subset(inner)))
            }
        })
    }

    pub fn to_json(&self) -> KripkeFrameJson {
        let rel = Modality::ALL
            .iter()
            .map(|&i| {
                let pairs = (0..self.len())
                    .flat_map(|u| self.successors(i, u).iter().map(move |v| (u, v)))
                    .map(|(u, v)| (self.worlds[u].clone(), self.worlds[v].clone()))
                    .collect();
                (i.to_string(), pairs)
            })
            .collect();
        KripkeFrameJson {
            worlds: self.worlds.clone(),
            rel,
            val: None,
        }
    }
}

/// `{"worlds":[..],"rel":{"1":[[u,v],..],"2":[..]}}`, optionally with
/// `"val":{"p":[..]}` for a model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KripkeFrameJson {
    pub worlds: Vec<String>,
    #[serde(default)]
    pub rel: BTreeMap<String, Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub val: Option<BTreeMap<String, Vec<String>>>,
}

impl KripkeFrameJson {
    pub fn into_frame(&self) -> Result<KripkeFrame> {
        let mut frame = KripkeFrame::new(self.worlds.clone())?;
        let index = worlds::index_worlds(&self.worlds)?;
        for (key, pairs) in &self.rel {
            let modality = parse_modality_key(key)?;
            for (u, v) in pairs {
                frame.add_edge(modality, worlds::lookup(&index, u)?, worlds::lookup(&index, v)?)?;
            }
        }
        Ok(frame)
    }

    pub fn valuation(&self) -> Result<Valuation> {
        let index = worlds::index_worlds(&self.worlds)?;
        worlds::valuation_from_names(&index, self.val.as_ref().unwrap_or(&BTreeMap::new()))
    }
}

pub(crate) fn parse_modality_key(key: &str) -> Result<Modality> {
    let index = key
        .parse::<u32>()
        .map_err(|_| Error::InvalidFrame(format!("modality key {key:?} is not 1 or 2")))?;
    Modality::new(index)
}

/// Standard relational satisfaction at world index `world`.
pub fn mc_kripke(frame: &KripkeFrame, valuation: &Valuation, world: usize, formula: &Formula) -> Result<bool> {
    if world >= frame.len() {
        return Err(Error::UnknownWorld(format!("#{world}")));
    }
    Ok(frame.extension(valuation, formula)?.contains(world))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FrameProps {
    pub serial: bool,
    pub reflexive: bool,
    pub transitive: bool,
}

/// Seriality, reflexivity and transitivity of each relation, by scanning
/// pairs and triples.
pub fn kripke_frame_props(frame: &KripkeFrame) -> [FrameProps; 2] {
    let n = frame.len();
    Modality::ALL.map(|i| {
        let serial = (0..n).all(|w| !frame.successors(i, w).is_empty());
        let reflexive = (0..n).all(|w| frame.related(i, w, w));
        let transitive = (0..n).all(|u| {
            (0..n).all(|v| !frame.related(i, u, v) || (0..n).all(|x| !frame.related(i, v, x) || frame.related(i, u, x)))
        });
        FrameProps {
            serial,
            reflexive,
            transitive,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn val(pairs: &[(&str, &[usize])]) -> Valuation {
        pairs
            .iter()
            .map(|(a, ws)| (a.to_string(), WorldSet::from_worlds(ws.iter().copied())))
            .collect()
    }

    #[test]
    fn model_checking_examples() {
        let lone = KripkeFrame::from_edges(1, &[], &[]).unwrap();
        assert!(mc_kripke(&lone, &val(&[]), 0, &parse("[1] false").unwrap()).unwrap());

        let refl = KripkeFrame::from_edges(1, &[(0, 0)], &[]).unwrap();
        assert!(mc_kripke(&refl, &val(&[("p", &[0])]), 0, &parse("[1] p -> p").unwrap()).unwrap());

        let chain = KripkeFrame::from_edges(2, &[(0, 1)], &[]).unwrap();
        let v = val(&[("p", &[1])]);
        assert!(mc_kripke(&chain, &v, 0, &parse("<1> p").unwrap()).unwrap());
        assert!(!mc_kripke(&chain, &v, 1, &parse("<1> p").unwrap()).unwrap());
    }

    #[test]
    fn model_checking_errors() {
        let lone = KripkeFrame::from_edges(1, &[], &[]).unwrap();
        assert!(matches!(
            mc_kripke(&lone, &val(&[]), 0, &parse("q").unwrap()),
            Err(Error::UnknownAtom(_))
        ));
        assert!(matches!(
            mc_kripke(&lone, &val(&[]), 3, &Formula::Bottom),
            Err(Error::UnknownWorld(_))
        ));
    }

    #[test]
    fn frame_property_examples() {
        let refl = KripkeFrame::from_edges(1, &[(0, 0)], &[]).unwrap();
        assert_eq!(
            kripke_frame_props(&refl)[0],
            FrameProps {
                serial: true,
                reflexive: true,
                transitive: true
            }
        );
        let chain = KripkeFrame::from_edges(2, &[(0, 1)], &[]).unwrap();
        assert!(!kripke_frame_props(&chain)[0].serial);
        let tri = KripkeFrame::from_edges(3, &[(0, 1), (1, 2), (0, 2)], &[]).unwrap();
        assert!(kripke_frame_props(&tri)[0].transitive);
        let open = KripkeFrame::from_edges(3, &[(0, 1), (1, 2)], &[]).unwrap();
        assert!(!kripke_frame_props(&open)[0].transitive);
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"worlds":["w0","w1"],"rel":{"1":[["w0","w1"]],"2":[]}}"#;
        let json: KripkeFrameJson = serde_json::from_str(text).unwrap();
        let frame = json.into_frame().unwrap();
        assert!(frame.related(Modality::One, 0, 1));
        assert_eq!(serde_json::to_string(&frame.to_json()).unwrap(), text);

        let bad: KripkeFrameJson = serde_json::from_str(r#"{"worlds":["a"],"rel":{"1":[["a","b"]]}}"#).unwrap();
        assert!(matches!(bad.into_frame(), Err(Error::UnknownWorld(_))));
        let bad: KripkeFrameJson = serde_json::from_str(r#"{"worlds":["a"],"rel":{"3":[]}}"#).unwrap();
        assert!(bad.into_frame().is_err());
    }
}
