use std::collections::HashSet;

use super::{Formula, Modality};
use crate::error::{Error, Result};

pub const MAX_GENERATION_DEPTH: usize = 3;
pub const MAX_GENERATION_ATOMS: usize = 2;

/// Test-surface enumeration, deduplicated, in a fixed order.
///
/// Literals of depth 0 are the atoms and `false`. Literals of depth `d`
/// add `[i] ψ` and `[i] ~ψ` for every literal `ψ` of depth `d - 1`. The
/// result is every literal of depth `d` together with every implication
/// between two of them, which covers negations, diamonds and the usual
/// one-atom axiom shapes.
pub fn generate_formulas(depth: usize, atoms: &[&str]) -> Result<Vec<Formula>> {
    if depth > MAX_GENERATION_DEPTH {
        return Err(Error::Guard {
            what: "generation depth",
            actual: depth as u64,
            limit: MAX_GENERATION_DEPTH as u64,
        });
    }
    if atoms.len() > MAX_GENERATION_ATOMS {
        return Err(Error::Guard {
            what: "generation atoms",
            actual: atoms.len() as u64,
            limit: MAX_GENERATION_ATOMS as u64,
        });
    }

    let mut literals: Vec<Formula> = atoms.iter().map(|a| Formula::atom(*a)).collect();
    literals.push(Formula::Bottom);
    literals = dedup(literals);
    for _ in 0..depth {
        let mut next = literals.clone();
        for psi in &literals {
            for i in Modality::ALL {
                next.push(Formula::boxed(i, psi.clone()));
                next.push(Formula::boxed(i, Formula::not(psi.clone())));
            }
        }
        literals = dedup(next);
    }

    let mut out = literals.clone();
    for a in &literals {
        for b in &literals {
            out.push(Formula::implies(a.clone(), b.clone()));
        }
    }
    Ok(dedup(out))
}

fn dedup(items: Vec<Formula>) -> Vec<Formula> {
    let mut seen = HashSet::new();
    items.into_iter().filter(|f| seen.insert(f.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_zero_contains_basics() {
        let p = Formula::atom("p");
        let g = generate_formulas(0, &["p"]).unwrap();
        assert!(g.contains(&p));
        assert!(g.contains(&Formula::Bottom));
        assert!(g.contains(&Formula::implies(p.clone(), p)));
        assert_eq!(g.len(), 6);
    }

    #[test]
    fn depth_one_contains_box_and_diamond() {
        let p = Formula::atom("p");
        let g = generate_formulas(1, &["p"]).unwrap();
        assert!(g.contains(&Formula::boxed(Modality::One, p.clone())));
        assert!(g.contains(&Formula::diamond(Modality::Two, p)));
        assert!(g.iter().all(|f| f.modal_depth() <= 1));
    }

    #[test]
    fn counts_are_monotone_in_depth() {
        for atoms in [&["p"][..], &["p", "q"][..]] {
            let counts: Vec<usize> = (0..=2).map(|d| generate_formulas(d, atoms).unwrap().len()).collect();
            assert!(counts.windows(2).all(|w| w[0] < w[1]), "{counts:?}");
        }
        assert_eq!(generate_formulas(2, &["p"]).unwrap().len(), 1806);
    }

    #[test]
    fn guards() {
        assert!(matches!(generate_formulas(4, &["p"]), Err(Error::Guard { .. })));
        assert!(matches!(
            generate_formulas(1, &["p", "q", "r"]),
            Err(Error::Guard { .. })
        ));
    }
}
