//! Eventually-zero sequences and the neighborhood frames built on them.
//!
//! A point of the carrier is an infinite sequence over `{0} ∪ A` that is
//! zero from some position on. It is stored canonically as the finite
//! prefix up to its last nonzero entry. Positions are 1-based, as in the
//! definitions of `st(α)` and `α|k`.

mod checks;
mod lex;
mod product;

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::kripke::{Alphabet, Letter, TreeFrame, Word, DEFAULT_BUDGET};

pub use checks::{
    applicable_evidence, axiom_evidence, chain_sweep, check_chain, ff_witness, verify_ff_morphism, ChainVariant,
    Evidence,
};
pub use lex::{
    check_lex_order, interval_neighborhood_check, lex_above, lex_below, lex_between, lex_compare, lex_window_compare,
};
pub use product::{
    g_map, g_preimage, g_witness, product_u_contains, product_universe, verify_g_morphism, ProductBase, ProductPoint,
};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PseudoSeq {
    stored: Vec<Letter>,
    alphabet: Alphabet,
}

impl PseudoSeq {
    /// Validates entries against `alphabet ∪ {0}` and drops trailing zeros.
    pub fn new(entries: Vec<Letter>, alphabet: Alphabet) -> Result<Self> {
        for &e in &entries {
            if e != 0 && !alphabet.contains(e) {
                return Err(Error::BranchingMismatch {
                    letter: e,
                    alphabet: alphabet.to_string(),
                });
            }
        }
        Ok(PseudoSeq::canonical(entries, alphabet))
    }

    pub(crate) fn canonical(mut entries: Vec<Letter>, alphabet: Alphabet) -> Self {
        while entries.last() == Some(&0) {
            entries.pop();
        }
        PseudoSeq {
            stored: entries,
            alphabet,
        }
    }

    /// `0^ω`
    pub fn zero(alphabet: Alphabet) -> Self {
        PseudoSeq {
            stored: Vec::new(),
            alphabet,
        }
    }

    /// `w·0^ω`
    pub fn lift(word: &Word, alphabet: Alphabet) -> Result<Self> {
        alphabet.check(word.letters())?;
        Ok(PseudoSeq {
            stored: word.letters().to_vec(),
            alphabet,
        })
    }

    /// `j` zeros followed by a single letter.
    pub fn spike(zeros: usize, letter: Letter, alphabet: Alphabet) -> Result<Self> {
        let mut entries = vec![0; zeros];
        entries.push(letter);
        PseudoSeq::new(entries, alphabet)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn is_signed(&self) -> bool {
        self.alphabet.signed
    }

    pub fn stored(&self) -> &[Letter] {
        &self.stored
    }

    /// Length of the canonical stored prefix.
    pub fn support(&self) -> usize {
        self.stored.len()
    }

    /// Least `N` with `a_k = 0` for all `k >= N`.
    pub fn st(&self) -> usize {
        self.stored.len() + 1
    }

    /// Entry at 1-based position `pos`.
    pub fn entry(&self, pos: usize) -> Letter {
        debug_assert!(pos >= 1);
        self.stored.get(pos - 1).copied().unwrap_or(0)
    }

    /// `α|k`: the first `k` entries, zeros materialized.
    pub fn prefix(&self, k: usize) -> Vec<Letter> {
        (1..=k).map(|pos| self.entry(pos)).collect()
    }

    pub fn agrees_up_to(&self, other: &PseudoSeq, k: usize) -> bool {
        (1..=k).all(|pos| self.entry(pos) == other.entry(pos))
    }

    /// `f_F`: the word left after deleting every zero.
    pub fn forget_zeros(&self) -> Word {
        Word(self.stored.iter().copied().filter(|&e| e != 0).collect())
    }

    /// `α|k · tail`, canonicalized.
    pub fn extend_prefix(&self, k: usize, tail: &[Letter]) -> PseudoSeq {
        let mut entries = self.prefix(k);
        entries.extend_from_slice(tail);
        PseudoSeq::canonical(entries, self.alphabet)
    }
}

impl fmt::Debug for PseudoSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PseudoSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.stored.is_empty() {
            f.write_str("0^ω")
        } else {
            write!(f, "{:?}", self.stored)
        }
    }
}

impl Serialize for PseudoSeq {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.stored.serialize(s)
    }
}

/// Entries `0` and the alphabet's letters, in integer order.
fn entries_of(alphabet: Alphabet) -> Vec<Letter> {
    let mut out = alphabet.letters();
    out.push(0);
    out.sort_unstable();
    out
}

/// All strings of length `len` over `entries` whose last entry is nonzero
/// (the empty string when `len == 0`), lexicographic.
fn tails(entries: &[Letter], len: usize) -> Vec<Vec<Letter>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    let mut layer: Vec<Vec<Letter>> = vec![Vec::new()];
    for step in 0..len {
        let last = step + 1 == len;
        layer = layer
            .iter()
            .flat_map(|t| {
                entries.iter().filter(move |&&e| !(last && e == 0)).map(move |&e| {
                    let mut v = t.clone();
                    v.push(e);
                    v
                })
            })
            .collect();
    }
    layer
}

fn check_budget(what: &'static str, alphabet: Alphabet, depth: usize) -> Result<()> {
    let base = alphabet.letter_count() + 1;
    match base.checked_pow(depth as u32) {
        Some(n) if n <= DEFAULT_BUDGET => Ok(()),
        other => Err(Error::Budget {
            what,
            needed: other.unwrap_or(u64::MAX),
            budget: DEFAULT_BUDGET,
        }),
    }
}

/// Every point of support at most `depth`, shortlex over stored forms.
pub fn universe(alphabet: Alphabet, depth: usize) -> Result<Vec<PseudoSeq>> {
    check_budget("sequence universe", alphabet, depth)?;
    let entries = entries_of(alphabet);
    Ok((0..=depth)
        .flat_map(|len| tails(&entries, len))
        .map(|stored| PseudoSeq { stored, alphabet })
        .collect())
}

/// An infinite set given by a membership test and an exact bounded
/// enumeration: `enumerate(d)` lists the members of support at most `d`.
pub trait SymbolicSet {
    type Item;

    fn contains(&self, item: &Self::Item) -> bool;

    fn enumerate(&self, depth: usize) -> Result<Vec<Self::Item>>;
}

/// `U_k(α) = {β | α|m = β|m and f(α) R f(β)}` with `m = max(k, st(α))`.
#[derive(Clone, Debug)]
pub struct Neighborhood<'a> {
    pub frame: &'a TreeFrame,
    pub center: &'a PseudoSeq,
    pub index: usize,
}

impl<'a> Neighborhood<'a> {
    pub fn new(frame: &'a TreeFrame, center: &'a PseudoSeq, index: usize) -> Self {
        Neighborhood { frame, center, index }
    }

    /// Length of the prefix every member shares with the center.
    pub fn fixed_prefix(&self) -> usize {
        self.index.max(self.center.st())
    }
}

impl SymbolicSet for Neighborhood<'_> {
    type Item = PseudoSeq;

    fn contains(&self, beta: &PseudoSeq) -> bool {
        in_neighborhood(self.frame, self.center, self.index, beta)
    }

    fn enumerate(&self, depth: usize) -> Result<Vec<PseudoSeq>> {
        let alphabet = self.center.alphabet;
        let m = self.fixed_prefix();
        if depth < m {
            // members longer than the fixed prefix would exceed the window
            return Ok(if self.center.support() <= depth && self.contains(self.center) {
                vec![self.center.clone()]
            } else {
                Vec::new()
            });
        }
        check_budget("neighborhood enumeration", alphabet, depth - m)?;
        let entries = entries_of(alphabet);
        let mut out = Vec::new();
        for len in 0..=depth - m {
            for tail in tails(&entries, len) {
                let beta = self.center.extend_prefix(m, &tail);
                if self.contains(&beta) {
                    out.push(beta);
                }
            }
        }
        Ok(out)
    }
}

impl Neighborhood<'_> {
    /// Calls `f` on the members of [`SymbolicSet::enumerate`] in the same
    /// order without collecting them, stopping at the first `false`.
    /// Returns whether every call returned `true`.
    pub fn all_members<F>(&self, depth: usize, mut f: F) -> Result<bool>
    where
        F: FnMut(PseudoSeq) -> Result<bool>,
    {
        let m = self.fixed_prefix();
        if depth < m {
            if self.center.support() <= depth && self.contains(self.center) {
                return f(self.center.clone());
            }
            return Ok(true);
        }
        let entries = entries_of(self.center.alphabet);
        let last_choices: Vec<Letter> = entries.iter().copied().filter(|&e| e != 0).collect();
        let prefix = self.center.prefix(m);
        for len in 0..=depth - m {
            // odometer over tails of length `len` with a nonzero last entry
            let mut digits = vec![0usize; len];
            loop {
                let mut stored = prefix.clone();
                for (pos, &d) in digits.iter().enumerate() {
                    stored.push(if pos + 1 == len { last_choices[d] } else { entries[d] });
                }
                let beta = PseudoSeq::canonical(stored, self.center.alphabet);
                if self.contains(&beta) && !f(beta)? {
                    return Ok(false);
                }
                let mut pos = len;
                let mut exhausted = true;
                while pos > 0 {
                    pos -= 1;
                    let radix = if pos + 1 == len {
                        last_choices.len()
                    } else {
                        entries.len()
                    };
                    digits[pos] += 1;
                    if digits[pos] < radix {
                        exhausted = false;
                        break;
                    }
                    digits[pos] = 0;
                }
                if exhausted {
                    break;
                }
            }
        }
        Ok(true)
    }
}

/// R-image of a word in a tree frame.
#[derive(Clone, Debug)]
pub struct Successors<'a> {
    pub frame: &'a TreeFrame,
    pub word: &'a Word,
}

impl SymbolicSet for Successors<'_> {
    type Item = Word;

    fn contains(&self, w: &Word) -> bool {
        self.frame.relates(self.word.letters(), w.letters())
    }

    fn enumerate(&self, depth: usize) -> Result<Vec<Word>> {
        Ok(self
            .frame
            .words(depth)?
            .into_iter()
            .filter(|w| self.contains(w))
            .collect())
    }
}

pub(crate) fn in_neighborhood(frame: &TreeFrame, center: &PseudoSeq, k: usize, beta: &PseudoSeq) -> bool {
    let m = k.max(center.st());
    center.agrees_up_to(beta, m) && frame.relates(center.forget_zeros().letters(), beta.forget_zeros().letters())
}

pub(crate) fn check_alphabet(frame: &TreeFrame, seq: &PseudoSeq) -> Result<()> {
    if frame.alphabet != seq.alphabet {
        return Err(Error::BranchingMismatch {
            letter: seq
                .stored
                .iter()
                .copied()
                .find(|&e| !frame.alphabet.contains(e) && e != 0)
                .unwrap_or(0),
            alphabet: frame.alphabet.to_string(),
        });
    }
    Ok(())
}

pub fn st(alpha: &PseudoSeq) -> usize {
    alpha.st()
}

pub fn prefix(alpha: &PseudoSeq, k: usize) -> Vec<Letter> {
    alpha.prefix(k)
}

pub fn forget_zeros(alpha: &PseudoSeq) -> Word {
    alpha.forget_zeros()
}

pub fn lift(word: &Word, alphabet: Alphabet) -> Result<PseudoSeq> {
    PseudoSeq::lift(word, alphabet)
}

pub fn u_contains(frame: &TreeFrame, alpha: &PseudoSeq, k: usize, beta: &PseudoSeq) -> Result<bool> {
    check_alphabet(frame, alpha)?;
    check_alphabet(frame, beta)?;
    Ok(in_neighborhood(frame, alpha, k, beta))
}
