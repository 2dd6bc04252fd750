//! World sets of finite frames as 64-bit masks, plus named valuations.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Finite frames are limited to this many worlds.
pub const MAX_WORLDS: usize = 64;

#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WorldSet(pub u64);

impl WorldSet {
    pub const EMPTY: WorldSet = WorldSet(0);

    pub fn full(n: usize) -> Self {
        if n >= 64 {
            WorldSet(u64::MAX)
        } else {
            WorldSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(w: usize) -> Self {
        WorldSet(1u64 << w)
    }

    pub fn from_worlds(ws: impl IntoIterator<Item = usize>) -> Self {
        ws.into_iter().fold(WorldSet::EMPTY, |acc, w| acc.with(w))
    }

    pub fn with(self, w: usize) -> Self {
        WorldSet(self.0 | (1u64 << w))
    }

    pub fn contains(self, w: usize) -> bool {
        self.0 >> w & 1 == 1
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: WorldSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: WorldSet) -> Self {
        WorldSet(self.0 | other.0)
    }

    pub fn intersection(self, other: WorldSet) -> Self {
        WorldSet(self.0 & other.0)
    }

    /// Complement within the first `n` worlds.
    pub fn complement(self, n: usize) -> Self {
        WorldSet(!self.0 & WorldSet::full(n).0)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..64).filter(move |w| bits >> w & 1 == 1)
    }

    pub fn names(self, worlds: &[String]) -> Vec<&str> {
        self.iter().map(|w| worlds[w].as_str()).collect()
    }
}

impl fmt::Debug for WorldSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Atom name to the set of worlds where it holds.
pub type Valuation = BTreeMap<String, WorldSet>;

pub(crate) fn check_world_count(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidFrame("a frame needs at least one world".into()));
    }
    if n > MAX_WORLDS {
        return Err(Error::Guard {
            what: "world count",
            actual: n as u64,
            limit: MAX_WORLDS as u64,
        });
    }
    Ok(())
}

pub(crate) fn index_worlds(worlds: &[String]) -> Result<BTreeMap<&str, usize>> {
    check_world_count(worlds.len())?;
    let mut index = BTreeMap::new();
    for (i, w) in worlds.iter().enumerate() {
        if index.insert(w.as_str(), i).is_some() {
            return Err(Error::InvalidFrame(format!("duplicate world {w:?}")));
        }
    }
    Ok(index)
}

pub(crate) fn lookup(index: &BTreeMap<&str, usize>, name: &str) -> Result<usize> {
    index
        .get(name)
        .copied()
        .ok_or_else(|| Error::UnknownWorld(name.to_string()))
}

pub(crate) fn set_from_names(index: &BTreeMap<&str, usize>, names: &[String]) -> Result<WorldSet> {
    names
        .iter()
        .map(|n| lookup(index, n))
        .collect::<Result<Vec<_>>>()
        .map(WorldSet::from_worlds)
}

pub(crate) fn valuation_from_names(
    index: &BTreeMap<&str, usize>,
    val: &BTreeMap<String, Vec<String>>,
) -> Result<Valuation> {
    val.iter()
        .map(|(atom, names)| Ok((atom.clone(), set_from_names(index, names)?)))
        .collect()
}

pub(crate) fn valuation_to_names(worlds: &[String], val: &Valuation) -> BTreeMap<String, Vec<String>> {
    val.iter()
        .map(|(atom, set)| (atom.clone(), set.names(worlds).into_iter().map(String::from).collect()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_algebra() {
        let a = WorldSet::from_worlds([0, 2]);
        let b = WorldSet::from_worlds([2, 3]);
        assert_eq!(a.intersection(b), WorldSet::singleton(2));
        assert_eq!(a.union(b).len(), 3);
        assert!(WorldSet::singleton(2).is_subset(a));
        assert!(!b.is_subset(a));
        assert_eq!(a.complement(4), WorldSet::from_worlds([1, 3]));
        assert_eq!(WorldSet::full(64).len(), 64);
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![0, 2]);
    }
}
