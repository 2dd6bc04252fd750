//! Infinite trees of finite words with the four relation kinds, and the
//! fusion frame over words in two disjoint alphabets.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::formula::Modality;
use crate::report::{Tally, VerificationReport};

pub type Letter = i32;

/// Largest window any enumeration may produce.
pub const DEFAULT_BUDGET: u64 = 1 << 22;

/// Letters `1..=size`, or `±1..=±size` when signed. `0` is never a letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    pub size: u32,
    pub signed: bool,
}

impl Alphabet {
    pub fn unsigned(size: u32) -> Self {
        Alphabet { size, signed: false }
    }

    pub fn signed(size: u32) -> Self {
        Alphabet { size, signed: true }
    }

    pub fn contains(&self, letter: Letter) -> bool {
        let bound = self.size as i64;
        let l = letter as i64;
        (1..=bound).contains(&l) || (self.signed && (-bound..=-1).contains(&l))
    }

    /// All letters in increasing integer order.
    pub fn letters(&self) -> Vec<Letter> {
        let n = self.size as Letter;
        let mut out = Vec::with_capacity(2 * self.size as usize);
        if self.signed {
            out.extend((1..=n).rev().map(|l| -l));
        }
        out.extend(1..=n);
        out
    }

    pub fn letter_count(&self) -> u64 {
        self.size as u64 * if self.signed { 2 } else { 1 }
    }

    pub fn check(&self, letters: &[Letter]) -> Result<()> {
        match letters.iter().find(|l| !self.contains(**l)) {
            Some(&letter) => Err(Error::BranchingMismatch {
                letter,
                alphabet: self.to_string(),
            }),
            None => Ok(()),
        }
    }

    /// Every word of length at most `depth`, in shortlex order.
    pub fn words(&self, depth: usize) -> Result<Vec<Word>> {
        let b = self.letter_count();
        let needed = (0..=depth as u32).try_fold(0u64, |acc, l| acc.checked_add(b.checked_pow(l)?));
        match needed {
            Some(n) if n <= DEFAULT_BUDGET => {}
            _ => {
                return Err(Error::Budget {
                    what: "word enumeration",
                    needed: needed.unwrap_or(u64::MAX),
                    budget: DEFAULT_BUDGET,
                })
            }
        }
        let letters = self.letters();
        let mut out = vec![Word::empty()];
        let mut layer = vec![Word::empty()];
        for _ in 0..depth {
            let mut next = Vec::with_capacity(layer.len() * letters.len());
            for w in &layer {
                for &l in &letters {
                    next.push(w.pushed(l));
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        Ok(out)
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.signed {
            write!(f, "±1..±{}", self.size)
        } else {
            write!(f, "1..{}", self.size)
        }
    }
}

/// All words of length at most `depth` over `1..=branching`, shortlex.
pub fn enumerate_words(branching: u32, depth: usize) -> Result<Vec<Word>> {
    Alphabet::unsigned(branching).words(depth)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<Letter>, alphabet: &Alphabet) -> Result<Self> {
        alphabet.check(&letters)?;
        Ok(Word(letters))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        out.extend_from_slice(&other.0);
        Word(out)
    }

    pub fn pushed(&self, letter: Letter) -> Word {
        let mut out = self.0.clone();
        out.push(letter);
        Word(out)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FrameKind {
    /// irreflexive, non-transitive: one step
    In,
    /// reflexive, non-transitive
    Rn,
    /// irreflexive, transitive: proper extensions
    It,
    /// reflexive, transitive: all extensions
    Rt,
}

impl FrameKind {
    pub const ALL: [FrameKind; 4] = [FrameKind::In, FrameKind::Rn, FrameKind::It, FrameKind::Rt];

    pub fn reflexive(self) -> bool {
        matches!(self, FrameKind::Rn | FrameKind::Rt)
    }

    pub fn transitive(self) -> bool {
        matches!(self, FrameKind::It | FrameKind::Rt)
    }

    pub fn name(self) -> &'static str {
        match self {
            FrameKind::In => "in",
            FrameKind::Rn => "rn",
            FrameKind::It => "it",
            FrameKind::Rt => "rt",
        }
    }
}

impl fmt::Display for FrameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FrameKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "in" => Ok(FrameKind::In),
            "rn" => Ok(FrameKind::Rn),
            "it" => Ok(FrameKind::It),
            "rt" => Ok(FrameKind::Rt),
            _ => Err(Error::Precondition(format!("unknown frame kind {s:?}"))),
        }
    }
}

impl Serialize for FrameKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// The tree frame over all finite words in `alphabet`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TreeFrame {
    pub kind: FrameKind,
    pub alphabet: Alphabet,
}

impl TreeFrame {
    pub fn new(kind: FrameKind, branching: u32) -> Result<Self> {
        if branching == 0 {
            return Err(Error::Precondition("branching must be positive".into()));
        }
        Ok(TreeFrame {
            kind,
            alphabet: Alphabet::unsigned(branching),
        })
    }

    pub fn signed(kind: FrameKind, branching: u32) -> Result<Self> {
        if branching == 0 {
            return Err(Error::Precondition("branching must be positive".into()));
        }
        Ok(TreeFrame {
            kind,
            alphabet: Alphabet::signed(branching),
        })
    }

    pub fn branching(&self) -> u32 {
        self.alphabet.size
    }

    /// The relation on raw letter slices; letters are not range-checked.
    pub fn relates(&self, u: &[Letter], v: &[Letter]) -> bool {
        if !v.starts_with(u) {
            return false;
        }
        let extra = v.len() - u.len();
        match self.kind {
            FrameKind::In => extra == 1,
            FrameKind::Rn => extra <= 1,
            FrameKind::It => extra >= 1,
            FrameKind::Rt => true,
        }
    }

    pub fn word_rel(&self, u: &Word, v: &Word) -> Result<bool> {
        self.alphabet.check(&u.0)?;
        self.alphabet.check(&v.0)?;
        Ok(self.relates(&u.0, &v.0))
    }

    pub fn words(&self, depth: usize) -> Result<Vec<Word>> {
        self.alphabet.words(depth)
    }
}

/// Checks `a R (a·c) ⟺ Λ R c` for all `a`, `c` with `|a| + |c| <= depth`.
pub fn check_fractal(frame: &TreeFrame, depth: usize) -> Result<VerificationReport> {
    fractal_sweep(frame, frame, depth)
}

/// Fractal biconditional with the left side read in `lhs` and the right
/// side in `rhs`; the two differ only in negative controls.
pub fn fractal_sweep(lhs: &TreeFrame, rhs: &TreeFrame, depth: usize) -> Result<VerificationReport> {
    let words = lhs.words(depth)?;
    let mut tally = Tally::new("fractal")
        .param("kind", lhs.kind.name())
        .param("branching", lhs.branching())
        .param("depth", depth as u64);
    if lhs.kind != rhs.kind {
        tally = tally.param("rhs_kind", rhs.kind.name());
    }
    let empty = Word::empty();
    for a in &words {
        for c in words.iter().filter(|c| a.len() + c.len() <= depth) {
            let left = lhs.relates(&a.0, &a.concat(c).0);
            let right = rhs.relates(&empty.0, &c.0);
            tally.check(left == right, || {
                format!("a={a} c={c}: a R a·c is {left}, Λ R c is {right}")
            });
        }
    }
    Ok(tally.finish())
}

/// A letter of the disjoint union `A ⊔ B`, tagged with its side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TaggedLetter {
    pub side: Modality,
    pub letter: Letter,
}

impl Serialize for TaggedLetter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (self.side.index(), self.letter).serialize(s)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct TaggedWord(pub Vec<TaggedLetter>);

impl TaggedWord {
    pub fn from_pairs(pairs: &[(u32, Letter)]) -> Result<Self> {
        pairs
            .iter()
            .map(|&(side, letter)| {
                Ok(TaggedLetter {
                    side: Modality::new(side)?,
                    letter,
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(TaggedWord)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The letters of one side, in order.
    pub fn project(&self, side: Modality) -> Vec<Letter> {
        self.0.iter().filter(|t| t.side == side).map(|t| t.letter).collect()
    }

    pub fn concat(&self, other: &TaggedWord) -> TaggedWord {
        let mut out = self.0.clone();
        out.extend_from_slice(&other.0);
        TaggedWord(out)
    }
}

impl fmt::Display for TaggedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|t| format!("{}{}", if t.side == Modality::One { 'A' } else { 'B' }, t.letter))
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

/// The fusion frame of two tree frames over tagged words.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FusionFrame {
    pub first: TreeFrame,
    pub second: TreeFrame,
}

impl FusionFrame {
    pub fn new(first: TreeFrame, second: TreeFrame) -> Self {
        FusionFrame { first, second }
    }

    pub fn side(&self, side: Modality) -> &TreeFrame {
        match side {
            Modality::One => &self.first,
            Modality::Two => &self.second,
        }
    }

    pub fn check(&self, w: &TaggedWord) -> Result<()> {
        for t in &w.0 {
            self.side(t.side).alphabet.check(&[t.letter])?;
        }
        Ok(())
    }

    /// `v = u·z` with `z` made of side-`i` letters only and `Λ R_i z`.
    pub fn relates(&self, i: Modality, u: &TaggedWord, v: &TaggedWord) -> bool {
        if !v.0.starts_with(&u.0) {
            return false;
        }
        let suffix = &v.0[u.len()..];
        if suffix.iter().any(|t| t.side != i) {
            return false;
        }
        let z: Vec<Letter> = suffix.iter().map(|t| t.letter).collect();
        self.side(i).relates(&[], &z)
    }

    /// Every tagged word of length at most `depth`, shortlex with side-1
    /// letters before side-2 letters.
    pub fn words(&self, depth: usize) -> Result<Vec<TaggedWord>> {
        let letters: Vec<TaggedLetter> = Modality::ALL
            .iter()
            .flat_map(|&side| {
                self.side(side)
                    .alphabet
                    .letters()
                    .into_iter()
                    .map(move |letter| TaggedLetter { side, letter })
            })
            .collect();
        let b = letters.len() as u64;
        let needed = (0..=depth as u32).try_fold(0u64, |acc, l| acc.checked_add(b.checked_pow(l)?));
        if !matches!(needed, Some(n) if n <= DEFAULT_BUDGET) {
            return Err(Error::Budget {
                what: "tagged word enumeration",
                needed: needed.unwrap_or(u64::MAX),
                budget: DEFAULT_BUDGET,
            });
        }
        let mut out = vec![TaggedWord::default()];
        let mut layer = vec![TaggedWord::default()];
        for _ in 0..depth {
            let next: Vec<TaggedWord> = layer
                .iter()
                .flat_map(|w| {
                    letters.iter().map(move |&t| {
                        let mut v = w.0.clone();
                        v.push(t);
                        TaggedWord(v)
                    })
                })
                .collect();
            out.extend(next.iter().cloned());
            layer = next;
        }
        Ok(out)
    }
}

pub fn fusion_word_rel(
    first: &TreeFrame,
    second: &TreeFrame,
    i: Modality,
    u: &TaggedWord,
    v: &TaggedWord,
) -> Result<bool> {
    let fusion = FusionFrame::new(*first, *second);
    fusion.check(u)?;
    fusion.check(v)?;
    Ok(fusion.relates(i, u, v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame(kind: FrameKind, b: u32) -> TreeFrame {
        TreeFrame::new(kind, b).unwrap()
    }

    fn w(letters: &[Letter]) -> Word {
        Word(letters.to_vec())
    }

    #[test]
    fn word_relation_examples() {
        let f_in = frame(FrameKind::In, 2);
        assert!(f_in.word_rel(&w(&[]), &w(&[1])).unwrap());
        assert!(!f_in.word_rel(&w(&[1]), &w(&[1])).unwrap());
        assert!(frame(FrameKind::It, 2).word_rel(&w(&[1]), &w(&[1, 2, 2])).unwrap());
        assert!(frame(FrameKind::Rn, 2).word_rel(&w(&[1]), &w(&[1])).unwrap());
        assert!(matches!(
            f_in.word_rel(&w(&[3]), &w(&[3, 1])),
            Err(Error::BranchingMismatch { letter: 3, .. })
        ));
    }

    // Oracle: R∘R by brute force over the window, for the IT example.
    #[test]
    fn transitive_example_matches_path_composition() {
        let f_in = frame(FrameKind::In, 2);
        let words = f_in.words(3).unwrap();
        let (u, v) = (w(&[1]), w(&[1, 2, 2]));
        let two_steps = words
            .iter()
            .any(|mid| f_in.relates(&u.0, &mid.0) && f_in.relates(&mid.0, &v.0));
        assert!(two_steps);
        assert_eq!(frame(FrameKind::It, 2).relates(&u.0, &v.0), two_steps);
    }

    #[test]
    fn enumeration_counts_and_order() {
        assert_eq!(enumerate_words(2, 1).unwrap(), vec![w(&[]), w(&[1]), w(&[2])]);
        assert_eq!(enumerate_words(2, 2).unwrap().len(), 7);
        assert_eq!(
            enumerate_words(1, 3).unwrap(),
            vec![w(&[]), w(&[1]), w(&[1, 1]), w(&[1, 1, 1])]
        );
        for b in 2..=4u32 {
            for d in 0..=4usize {
                let expected = (b.pow(d as u32 + 1) - 1) / (b - 1);
                assert_eq!(enumerate_words(b, d).unwrap().len(), expected as usize);
            }
        }
        assert!(matches!(enumerate_words(10, 9), Err(Error::Budget { .. })));
    }

    #[test]
    fn signed_letters_are_ordered() {
        assert_eq!(Alphabet::signed(2).letters(), vec![-2, -1, 1, 2]);
        assert!(!Alphabet::signed(2).contains(0));
        assert!(!Alphabet::unsigned(2).contains(-1));
    }

    #[test]
    fn fractal_holds_for_examples() {
        for kind in [FrameKind::It, FrameKind::In] {
            let r = check_fractal(&frame(kind, 2), 4).unwrap();
            assert!(r.pass, "{r}");
            assert_eq!(r.violations, 0);
            assert!(r.checked > 0);
        }
    }

    #[test]
    fn fractal_negative_control() {
        let (rn, fin) = (frame(FrameKind::Rn, 2), frame(FrameKind::In, 2));
        let r = fractal_sweep(&rn, &fin, 4).unwrap();
        assert!(!r.pass);
        let (a, c) = (w(&[1]), w(&[]));
        assert_ne!(rn.relates(&a.0, &a.concat(&c).0), fin.relates(&[], &c.0));
    }

    #[test]
    fn fusion_examples() {
        let t = |pairs: &[(u32, Letter)]| TaggedWord::from_pairs(pairs).unwrap();
        let f_in = frame(FrameKind::In, 2);
        assert!(fusion_word_rel(&f_in, &f_in, Modality::One, &t(&[]), &t(&[(1, 1)])).unwrap());
        assert!(!fusion_word_rel(&f_in, &f_in, Modality::One, &t(&[]), &t(&[(1, 1), (2, 2)])).unwrap());
        assert!(fusion_word_rel(
            &frame(FrameKind::It, 2),
            &frame(FrameKind::Rn, 2),
            Modality::One,
            &t(&[(2, 2)]),
            &t(&[(2, 2), (1, 1), (1, 2)])
        )
        .unwrap());
        assert!(fusion_word_rel(&f_in, &f_in, Modality::One, &t(&[]), &t(&[(1, 3)])).is_err());
    }
}
