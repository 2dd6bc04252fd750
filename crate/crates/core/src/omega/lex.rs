//! Lexicographic order on signed sequences and its relation to the
//! neighborhoods of the transitive sequence frames.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use super::{universe, Neighborhood, PseudoSeq, SymbolicSet};
use crate::error::{Error, Result};
use crate::kripke::{Alphabet, FrameKind, TreeFrame};
use crate::report::{Tally, VerificationReport};

fn require_signed(alpha: &PseudoSeq, beta: &PseudoSeq) -> Result<()> {
    if !alpha.is_signed() || !beta.is_signed() {
        return Err(Error::SignednessMismatch);
    }
    if alpha.alphabet() != beta.alphabet() {
        return Err(Error::Precondition(format!(
            "alphabets differ: {} and {}",
            alpha.alphabet(),
            beta.alphabet()
        )));
    }
    Ok(())
}

/// First differing position decides; `0` sits between the negative and
/// positive letters.
pub fn lex_compare(alpha: &PseudoSeq, beta: &PseudoSeq) -> Result<Ordering> {
    require_signed(alpha, beta)?;
    Ok(cmp_unchecked(alpha, beta))
}

fn cmp_unchecked(alpha: &PseudoSeq, beta: &PseudoSeq) -> Ordering {
    let n = alpha.support().max(beta.support());
    (1..=n)
        .map(|pos| alpha.entry(pos).cmp(&beta.entry(pos)))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// `β|K·(−1)` with `K = max(st(α), st(β))`, for `α < β`.
pub fn lex_between(alpha: &PseudoSeq, beta: &PseudoSeq) -> Result<PseudoSeq> {
    if lex_compare(alpha, beta)? != Ordering::Less {
        return Err(Error::Precondition(format!("{alpha} is not below {beta}")));
    }
    let k = alpha.st().max(beta.st());
    let gamma = beta.extend_prefix(k, &[-1]);
    if cmp_unchecked(alpha, &gamma) != Ordering::Less || cmp_unchecked(&gamma, beta) != Ordering::Less {
        return Err(Error::Internal(format!("{gamma} is not between {alpha} and {beta}")));
    }
    Ok(gamma)
}

fn step(alpha: &PseudoSeq, letter: i32) -> Result<PseudoSeq> {
    if !alpha.is_signed() {
        return Err(Error::SignednessMismatch);
    }
    Ok(alpha.extend_prefix(alpha.st(), &[letter]))
}

/// `α|st(α)·(−1)`, a point strictly below `α`.
pub fn lex_below(alpha: &PseudoSeq) -> Result<PseudoSeq> {
    step(alpha, -1)
}

/// `α|st(α)·(+1)`, a point strictly above `α`.
pub fn lex_above(alpha: &PseudoSeq) -> Result<PseudoSeq> {
    step(alpha, 1)
}

fn strictly_inside(l: &PseudoSeq, x: &PseudoSeq, r: &PseudoSeq) -> bool {
    cmp_unchecked(l, x) == Ordering::Less && cmp_unchecked(x, r) == Ordering::Less
}

fn check_order_frame(frame: &TreeFrame, alpha: &PseudoSeq) -> Result<()> {
    if !matches!(frame.kind, FrameKind::Rt | FrameKind::It) {
        return Err(Error::Inapplicable("lexicographic window", frame.kind.to_string()));
    }
    if !frame.alphabet.signed || !alpha.is_signed() {
        return Err(Error::SignednessMismatch);
    }
    if frame.alphabet != alpha.alphabet() {
        return Err(Error::Precondition(format!(
            "alphabets differ: {} and {}",
            frame.alphabet,
            alpha.alphabet()
        )));
    }
    Ok(())
}

/// Compares `U_k(α)` with open lexicographic intervals around `α` on the
/// window of support at most `depth`.
///
/// (a) Every window point of `(p·(−1), p·(+1))`, `p = α|max(k, st(α))`, lies
/// in `U_k(α)`; for IT the point `α` itself is exempt.
/// (b) For every window interval `(l, r)` around `α`, the neighborhood of
/// index `max(k, st(l), st(r), st(α))` sits inside it. Its members are
/// enumerated two positions past the window and only the extreme ones are
/// compared, which suffices since intervals are convex.
pub fn lex_window_compare(frame: &TreeFrame, alpha: &PseudoSeq, k: usize, depth: usize) -> Result<VerificationReport> {
    check_order_frame(frame, alpha)?;
    let points = universe(frame.alphabet, depth)?;
    let mut tally = Tally::new("lex-window")
        .param("kind", frame.kind.name())
        .param("branching", frame.branching())
        .param("alpha", alpha.to_string())
        .param("k", k as u64)
        .param("depth", depth as u64);
    window_obligations(frame, alpha, k, &points, &mut tally)?;
    Ok(tally.finish())
}

fn window_obligations(
    frame: &TreeFrame,
    alpha: &PseudoSeq,
    k: usize,
    points: &[PseudoSeq],
    tally: &mut Tally,
) -> Result<()> {
    let m = k.max(alpha.st());
    let left = alpha.extend_prefix(m, &[-1]);
    let right = alpha.extend_prefix(m, &[1]);
    let u_k = Neighborhood::new(frame, alpha, k);
    for gamma in points.iter().filter(|g| strictly_inside(&left, g, &right)) {
        let exempt = frame.kind == FrameKind::It && gamma == alpha;
        tally.check(exempt || u_k.contains(gamma), || {
            format!("(a) α={alpha} k={k}: {gamma} in ({left}, {right}) but not in U_{k}")
        });
    }

    let mut extremes: BTreeMap<usize, Option<(PseudoSeq, PseudoSeq)>> = BTreeMap::new();
    let below: Vec<&PseudoSeq> = points.iter().filter(|l| cmp_unchecked(l, alpha).is_lt()).collect();
    let above: Vec<&PseudoSeq> = points.iter().filter(|r| cmp_unchecked(alpha, r).is_lt()).collect();
    for l in &below {
        for r in &above {
            let index = k.max(l.st()).max(r.st()).max(alpha.st());
            if let Entry::Vacant(slot) = extremes.entry(index) {
                let members = Neighborhood::new(frame, alpha, index).enumerate(index + 2)?;
                let lo = members.iter().min_by(|a, b| cmp_unchecked(a, b)).cloned();
                let hi = members.iter().max_by(|a, b| cmp_unchecked(a, b)).cloned();
                slot.insert(lo.zip(hi));
            }
            let ok = match &extremes[&index] {
                Some((lo, hi)) => cmp_unchecked(l, lo).is_lt() && cmp_unchecked(hi, r).is_lt(),
                None => true,
            };
            tally.check(ok, || format!("(b) α={alpha}: U_{index} leaves ({l}, {r})"));
        }
    }
    Ok(())
}

/// Order facts on the signed window of support at most `depth`: strict
/// totality, density through [`lex_between`] and the endpoint witnesses.
pub fn check_lex_order(alphabet: Alphabet, depth: usize) -> Result<VerificationReport> {
    if !alphabet.signed {
        return Err(Error::SignednessMismatch);
    }
    let points = universe(alphabet, depth)?;
    let mut tally = Tally::new("lex-order")
        .param("branching", alphabet.size)
        .param("depth", depth as u64);

    let mut sorted = points.clone();
    sorted.sort_by(cmp_unchecked);
    for pair in sorted.windows(2) {
        tally.check(cmp_unchecked(&pair[0], &pair[1]).is_lt(), || {
            format!("not strict: {} and {}", pair[0], pair[1])
        });
    }
    for (i, a) in sorted.iter().enumerate() {
        for (j, b) in sorted.iter().enumerate() {
            let ord = cmp_unchecked(a, b);
            tally.check(ord == i.cmp(&j) && ord == cmp_unchecked(b, a).reverse(), || {
                format!("order disagrees with its sort at {a}, {b}")
            });
            if ord.is_lt() {
                match lex_between(a, b) {
                    Ok(_) => tally.check(true, String::new),
                    Err(e) => tally.check(false, || format!("density at ({a}, {b}): {e}")),
                };
            }
        }
        let lo = lex_below(a)?;
        let hi = lex_above(a)?;
        tally.check(cmp_unchecked(&lo, a).is_lt() && cmp_unchecked(a, &hi).is_lt(), || {
            format!("endpoint witnesses fail at {a}: {lo}, {hi}")
        });
    }
    Ok(tally.finish())
}

/// [`lex_window_compare`] for every center of support at most
/// `center_depth` and every `k <= k_max`.
pub fn interval_neighborhood_check(
    frame: &TreeFrame,
    center_depth: usize,
    k_max: usize,
    depth: usize,
) -> Result<VerificationReport> {
    let points = universe(frame.alphabet, depth)?;
    let mut tally = Tally::new("lex-window")
        .param("kind", frame.kind.name())
        .param("branching", frame.branching())
        .param("center_depth", center_depth as u64)
        .param("k_max", k_max as u64)
        .param("depth", depth as u64);
    for alpha in universe(frame.alphabet, center_depth)? {
        check_order_frame(frame, &alpha)?;
        for k in 0..=k_max {
            window_obligations(frame, &alpha, k, &points, &mut tally)?;
        }
    }
    Ok(tally.finish())
}
