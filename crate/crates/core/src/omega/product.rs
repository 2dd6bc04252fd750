//! Products of two sequence frames and the interleaving map onto the
//! fusion of the underlying tree frames.

use std::fmt;

use serde::Serialize;

use super::{check_alphabet, universe, Neighborhood, PseudoSeq, SymbolicSet};
use crate::error::Result;
use crate::formula::Modality;
use crate::kripke::{Alphabet, FusionFrame, TaggedLetter, TaggedWord, TreeFrame, Word};
use crate::report::{Tally, VerificationReport};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ProductPoint {
    pub first: PseudoSeq,
    pub second: PseudoSeq,
}

impl ProductPoint {
    pub fn new(first: PseudoSeq, second: PseudoSeq) -> Self {
        ProductPoint { first, second }
    }

    pub fn coordinate(&self, side: Modality) -> &PseudoSeq {
        match side {
            Modality::One => &self.first,
            Modality::Two => &self.second,
        }
    }

    pub fn support(&self) -> usize {
        self.first.support().max(self.second.support())
    }

    /// `max(st(α), st(β))`
    pub fn st(&self) -> usize {
        self.first.st().max(self.second.st())
    }

    /// Replaces one coordinate.
    pub fn with(&self, side: Modality, value: PseudoSeq) -> ProductPoint {
        match side {
            Modality::One => ProductPoint::new(value, self.second.clone()),
            Modality::Two => ProductPoint::new(self.first.clone(), value),
        }
    }
}

impl fmt::Display for ProductPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.first, self.second)
    }
}

/// Pairs whose coordinates both have support at most `depth`.
pub fn product_universe(first: Alphabet, second: Alphabet, depth: usize) -> Result<Vec<ProductPoint>> {
    let xs = universe(first, depth)?;
    let ys = universe(second, depth)?;
    Ok(xs
        .iter()
        .flat_map(|x| ys.iter().map(move |y| ProductPoint::new(x.clone(), y.clone())))
        .collect())
}

/// Interleaves `x₁y₁x₂y₂…`, drops zeros and tags survivors by side.
pub fn g_map(point: &ProductPoint) -> TaggedWord {
    let mut out = Vec::new();
    for pos in 1..=point.support() {
        for side in Modality::ALL {
            let letter = point.coordinate(side).entry(pos);
            if letter != 0 {
                out.push(TaggedLetter { side, letter });
            }
        }
    }
    TaggedWord(out)
}

/// The preimage from the surjectivity argument: the letter at slot `i` of
/// `z` goes to position `i` of its side's coordinate; all else is zero.
pub fn g_preimage(z: &TaggedWord, first: Alphabet, second: Alphabet) -> Result<ProductPoint> {
    let mut xs = vec![0; z.len()];
    let mut ys = vec![0; z.len()];
    for (slot, t) in z.0.iter().enumerate() {
        match t.side {
            Modality::One => xs[slot] = t.letter,
            Modality::Two => ys[slot] = t.letter,
        }
    }
    Ok(ProductPoint::new(
        PseudoSeq::new(xs, first)?,
        PseudoSeq::new(ys, second)?,
    ))
}

/// Base set `U_m(α) × {β}` (modality 1) or `{α} × U_m(β)` (modality 2).
#[derive(Clone, Debug)]
pub struct ProductBase<'a> {
    pub fusion: &'a FusionFrame,
    pub modality: Modality,
    pub point: &'a ProductPoint,
    pub index: usize,
}

impl ProductBase<'_> {
    fn moving(&self) -> Neighborhood<'_> {
        Neighborhood::new(
            self.fusion.side(self.modality),
            self.point.coordinate(self.modality),
            self.index,
        )
    }
}

impl ProductBase<'_> {
    /// Lazy counterpart of [`SymbolicSet::enumerate`]; see
    /// [`Neighborhood::all_members`].
    pub fn all_members<F>(&self, depth: usize, mut f: F) -> Result<bool>
    where
        F: FnMut(ProductPoint) -> Result<bool>,
    {
        if self.point.coordinate(self.modality.other()).support() > depth {
            return Ok(true);
        }
        self.moving()
            .all_members(depth, |moved| f(self.point.with(self.modality, moved)))
    }
}

impl SymbolicSet for ProductBase<'_> {
    type Item = ProductPoint;

    fn contains(&self, q: &ProductPoint) -> bool {
        let fixed = self.modality.other();
        q.coordinate(fixed) == self.point.coordinate(fixed) && self.moving().contains(q.coordinate(self.modality))
    }

    fn enumerate(&self, depth: usize) -> Result<Vec<ProductPoint>> {
        if self.point.coordinate(self.modality.other()).support() > depth {
            return Ok(Vec::new());
        }
        Ok(self
            .moving()
            .enumerate(depth)?
            .into_iter()
            .map(|moved| self.point.with(self.modality, moved))
            .collect())
    }
}

pub fn product_u_contains(
    first: &TreeFrame,
    second: &TreeFrame,
    modality: Modality,
    base: &ProductPoint,
    m: usize,
    q: &ProductPoint,
) -> Result<bool> {
    for p in [base, q] {
        check_alphabet(first, &p.first)?;
        check_alphabet(second, &p.second)?;
    }
    let fusion = FusionFrame::new(*first, *second);
    Ok(ProductBase {
        fusion: &fusion,
        modality,
        point: base,
        index: m,
    }
    .contains(q))
}

/// The member of the `i`-base set at index `m` that `g` sends to
/// `g(point)·c`, for `c` over side `i`.
pub fn g_witness(
    fusion: &FusionFrame,
    modality: Modality,
    point: &ProductPoint,
    m: usize,
    c: &Word,
) -> Result<ProductPoint> {
    fusion.side(modality).alphabet.check(c.letters())?;
    let moving = point.coordinate(modality);
    let fixed_prefix = m.max(moving.st());
    Ok(point.with(modality, moving.extend_prefix(fixed_prefix, c.letters())))
}

fn tag(c: &Word, side: Modality) -> TaggedWord {
    TaggedWord(
        c.letters()
            .iter()
            .map(|&letter| TaggedLetter { side, letter })
            .collect(),
    )
}

/// `g: N_ω(F₁) × N_ω(F₂) ↠ N(F₁ ⊗ F₂)` on the window. Base indices run over
/// `max(st(α), st(β)) + 1 ..= depth`; base-set members are enumerated up
/// to `depth` positions past their fixed prefix.
pub fn verify_g_morphism(first: &TreeFrame, second: &TreeFrame, depth: usize) -> Result<VerificationReport> {
    let fusion = FusionFrame::new(*first, *second);
    let mut tally = Tally::new("g-morphism")
        .param("kind1", first.kind.name())
        .param("kind2", second.kind.name())
        .param("branching1", first.branching())
        .param("branching2", second.branching())
        .param("depth", depth as u64);

    for z in fusion.words(depth)? {
        let pre = g_preimage(&z, first.alphabet, second.alphabet)?;
        let back = g_map(&pre);
        tally.check(back == z, || format!("surjectivity: g(g⁻¹({z})) = {back}"));
    }

    let side_words = [first.words(depth)?, second.words(depth)?];
    for point in product_universe(first.alphabet, second.alphabet, depth)? {
        let image = g_map(&point);
        for modality in Modality::ALL {
            let frame = fusion.side(modality);
            for m in point.st() + 1..=depth {
                let base = ProductBase {
                    fusion: &fusion,
                    modality,
                    point: &point,
                    index: m,
                };
                for q in base.enumerate(m + depth)? {
                    let target = g_map(&q);
                    tally.check(fusion.relates(modality, &image, &target), || {
                        format!("forward: modality {modality}, point {point}, m={m}: g(q) = {target} for q = {q}")
                    });
                }
                for c in side_words[modality.slot()]
                    .iter()
                    .filter(|c| frame.relates(&[], c.letters()))
                {
                    let q = g_witness(&fusion, modality, &point, m, c)?;
                    let target = image.concat(&tag(c, modality));
                    let ok = base.contains(&q) && g_map(&q) == target;
                    tally.check(ok, || {
                        format!("covering: modality {modality}, point {point}, m={m}, c={c}: witness {q}")
                    });
                }
            }
        }
    }
    Ok(tally.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::FrameKind;

    fn ab() -> Alphabet {
        Alphabet::unsigned(2)
    }

    fn seq(entries: &[i32]) -> PseudoSeq {
        PseudoSeq::new(entries.to_vec(), ab()).unwrap()
    }

    fn tw(pairs: &[(u32, i32)]) -> TaggedWord {
        TaggedWord::from_pairs(pairs).unwrap()
    }

    #[test]
    fn g_examples() {
        let p = ProductPoint::new(seq(&[1, 0, 2]), seq(&[0, 1]));
        assert_eq!(g_map(&p), tw(&[(1, 1), (2, 1), (1, 2)]));
        assert_eq!(g_preimage(&tw(&[(1, 1), (2, 1), (1, 2)]), ab(), ab()).unwrap(), p);
        let origin = ProductPoint::new(PseudoSeq::zero(ab()), PseudoSeq::zero(ab()));
        assert_eq!(g_map(&origin), TaggedWord::default());
        assert!(g_preimage(&tw(&[(1, 3)]), ab(), ab()).is_err());
    }

    #[test]
    fn preimage_inverts_only_on_its_own_zero_pattern() {
        let p = ProductPoint::new(seq(&[0, 1]), PseudoSeq::zero(ab()));
        let z = g_map(&p);
        assert_eq!(z, tw(&[(1, 1)]));
        assert_ne!(g_preimage(&z, ab(), ab()).unwrap(), p);
    }

    #[test]
    fn product_base_examples() {
        let f_in = TreeFrame::new(FrameKind::In, 2).unwrap();
        let zero = PseudoSeq::zero(ab());
        let origin = ProductPoint::new(zero.clone(), zero.clone());
        let q = ProductPoint::new(seq(&[0, 2]), zero.clone());
        assert!(product_u_contains(&f_in, &f_in, Modality::One, &origin, 1, &q).unwrap());
        let moved = ProductPoint::new(seq(&[0, 2]), seq(&[1]));
        assert!(!product_u_contains(&f_in, &f_in, Modality::One, &origin, 1, &moved).unwrap());
        let mirror = ProductPoint::new(zero.clone(), seq(&[0, 2]));
        assert!(product_u_contains(&f_in, &f_in, Modality::Two, &origin, 1, &mirror).unwrap());
    }

    #[test]
    fn g_witness_example() {
        let f_in = TreeFrame::new(FrameKind::In, 2).unwrap();
        let fusion = FusionFrame::new(f_in, f_in);
        let zero = PseudoSeq::zero(ab());
        let origin = ProductPoint::new(zero.clone(), zero.clone());
        let q = g_witness(&fusion, Modality::One, &origin, 1, &Word(vec![2])).unwrap();
        assert_eq!(q, ProductPoint::new(seq(&[0, 2]), zero));
        assert_eq!(g_map(&q), tw(&[(1, 2)]));
    }

    #[test]
    fn g_morphism_examples() {
        let f = |k| TreeFrame::new(k, 2).unwrap();
        let r = verify_g_morphism(&f(FrameKind::In), &f(FrameKind::In), 4).unwrap();
        assert!(r.pass, "{r}");
        let r = verify_g_morphism(&f(FrameKind::Rt), &f(FrameKind::It), 3).unwrap();
        assert!(r.pass, "{r}");
    }

    #[test]
    fn small_index_breaks_forward_inclusion() {
        // m = 1 does not exceed st(β) = 3: side-1 letters can land before β's
        let f_in = TreeFrame::new(FrameKind::In, 2).unwrap();
        let fusion = FusionFrame::new(f_in, f_in);
        let point = ProductPoint::new(PseudoSeq::zero(ab()), seq(&[0, 1]));
        let q = ProductPoint::new(seq(&[0, 1]), seq(&[0, 1]));
        let base = ProductBase {
            fusion: &fusion,
            modality: Modality::One,
            point: &point,
            index: 1,
        };
        assert!(base.contains(&q));
        assert!(!fusion.relates(Modality::One, &g_map(&point), &g_map(&q)));
    }
}
