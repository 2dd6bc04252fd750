//! Bimodal formulas over the primitive basis `p | false | φ -> φ | [i] φ`.
//!
//! Every other connective is sugar: the smart constructors below rewrite
//! `~`, `&`, `|`, `true` and `<i>` into the core, so evaluators only ever
//! see four cases.

mod generate;
mod parser;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use generate::{generate_formulas, MAX_GENERATION_ATOMS, MAX_GENERATION_DEPTH};
pub use parser::parse;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Modality {
    One,
    Two,
}

impl Modality {
    pub const ALL: [Modality; 2] = [Modality::One, Modality::Two];

    pub fn new(index: u32) -> Result<Self> {
        match index {
            1 => Ok(Modality::One),
            2 => Ok(Modality::Two),
            other => Err(Error::ModalityOutOfRange(other)),
        }
    }

    pub fn index(self) -> usize {
        match self {
            Modality::One => 1,
            Modality::Two => 2,
        }
    }

    /// Zero-based slot, for per-modality arrays.
    pub fn slot(self) -> usize {
        self.index() - 1
    }

    pub fn other(self) -> Self {
        match self {
            Modality::One => Modality::Two,
            Modality::Two => Modality::One,
        }
    }
}

impl fmt::Display for Modality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String),
    Bottom,
    Implies(Box<Formula>, Box<Formula>),
    Box(Modality, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    pub fn implies(left: Formula, right: Formula) -> Self {
        Formula::Implies(Box::new(left), Box::new(right))
    }

    pub fn boxed(modality: Modality, body: Formula) -> Self {
        Formula::Box(modality, Box::new(body))
    }

    pub fn top() -> Self {
        Formula::implies(Formula::Bottom, Formula::Bottom)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(body: Formula) -> Self {
        Formula::implies(body, Formula::Bottom)
    }

    pub fn and(left: Formula, right: Formula) -> Self {
        Formula::not(Formula::implies(left, Formula::not(right)))
    }

    pub fn or(left: Formula, right: Formula) -> Self {
        Formula::implies(Formula::not(left), right)
    }

    pub fn diamond(modality: Modality, body: Formula) -> Self {
        Formula::not(Formula::boxed(modality, Formula::not(body)))
    }

    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Bottom => 0,
            Formula::Implies(l, r) => l.modal_depth().max(r.modal_depth()),
            Formula::Box(_, body) => 1 + body.modal_depth(),
        }
    }

    pub fn uses_modality(&self, modality: Modality) -> bool {
        match self {
            Formula::Atom(_) | Formula::Bottom => false,
            Formula::Implies(l, r) => l.uses_modality(modality) || r.uses_modality(modality),
            Formula::Box(i, body) => *i == modality || body.uses_modality(modality),
        }
    }

    pub fn atoms(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Formula::Atom(name) => {
                out.insert(name.as_str());
            }
            Formula::Bottom => {}
            Formula::Implies(l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
            Formula::Box(_, body) => body.collect_atoms(out),
        }
    }

    /// `Some(ψ)` when the formula is `ψ -> false` with `ψ ≠ false`.
    fn as_negation(&self) -> Option<&Formula> {
        match self {
            Formula::Implies(l, r) if **r == Formula::Bottom && **l != Formula::Bottom => Some(l),
            _ => None,
        }
    }

    /// `Some((i, ψ))` when the formula is `~[i]~ψ`.
    fn as_diamond(&self) -> Option<(Modality, &Formula)> {
        match self {
            Formula::Implies(l, r) if **r == Formula::Bottom => match &**l {
                Formula::Box(i, body) => match &**body {
                    Formula::Implies(inner, bot) if **bot == Formula::Bottom => Some((*i, inner)),
                    _ => None,
                },
                _ => None,
            },
            _ => None,
        }
    }

    fn is_unary_printed(&self) -> bool {
        !matches!(self, Formula::Implies(..)) || self.as_diamond().is_some() || self.as_negation().is_some()
    }

    fn fmt_operand(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unary_printed() {
            write!(f, "{self}")
        } else {
            write!(f, "({self})")
        }
    }

    fn fmt_prefixed(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // "[1][2] p": stacked prefixes share one trailing space
        match self {
            Formula::Box(..) => write!(f, "{self}"),
            _ if self.as_diamond().is_some() => write!(f, "{self}"),
            _ => {
                f.write_str(" ")?;
                self.fmt_operand(f)
            }
        }
    }
}

/// Prints with the minimal parentheses the grammar needs. Negations and
/// diamonds are recognized and printed as `~` and `<i>`; conjunction and
/// disjunction stay in their implicational form.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((i, body)) = self.as_diamond() {
            write!(f, "<{i}>")?;
            return body.fmt_prefixed(f);
        }
        if let Some(body) = self.as_negation() {
            f.write_str("~")?;
            return body.fmt_operand(f);
        }
        match self {
            Formula::Atom(name) => f.write_str(name),
            Formula::Bottom => f.write_str("false"),
            Formula::Box(i, body) => {
                write!(f, "[{i}]")?;
                body.fmt_prefixed(f)
            }
            Formula::Implies(l, r) => {
                l.fmt_operand(f)?;
                write!(f, " -> {r}")
            }
        }
    }
}

impl FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AxiomScheme {
    K,
    D,
    T,
    Four,
    Com,
    Chr,
}

impl fmt::Display for AxiomScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AxiomScheme::K => "K",
            AxiomScheme::D => "D",
            AxiomScheme::T => "T",
            AxiomScheme::Four => "4",
            AxiomScheme::Com => "Com",
            AxiomScheme::Chr => "Chr",
        })
    }
}

/// Instance of a scheme over the atoms `p` (and `q` for K). Com and Chr
/// ignore `modality` and always read `[1]` before `[2]`.
pub fn axiom_instance(scheme: AxiomScheme, modality: Modality) -> Formula {
    use Modality::{One, Two};
    let p = || Formula::atom("p");
    let bx = |i, body| Formula::boxed(i, body);
    let i = modality;
    match scheme {
        AxiomScheme::K => Formula::implies(
            bx(i, Formula::implies(p(), Formula::atom("q"))),
            Formula::implies(bx(i, p()), bx(i, Formula::atom("q"))),
        ),
        AxiomScheme::D => Formula::implies(bx(i, p()), Formula::diamond(i, p())),
        AxiomScheme::T => Formula::implies(bx(i, p()), p()),
        AxiomScheme::Four => Formula::implies(bx(i, p()), bx(i, bx(i, p()))),
        AxiomScheme::Com => Formula::implies(bx(One, bx(Two, p())), bx(Two, bx(One, p()))),
        AxiomScheme::Chr => Formula::implies(Formula::diamond(One, bx(Two, p())), bx(Two, Formula::diamond(One, p()))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Logic {
    D,
    T,
    D4,
    S4,
}

impl Logic {
    pub const ALL: [Logic; 4] = [Logic::D, Logic::T, Logic::D4, Logic::S4];

    /// Schemes added to K to obtain this logic.
    pub fn defining_schemes(self) -> &'static [AxiomScheme] {
        match self {
            Logic::D => &[AxiomScheme::D],
            Logic::T => &[AxiomScheme::T],
            Logic::D4 => &[AxiomScheme::D, AxiomScheme::Four],
            Logic::S4 => &[AxiomScheme::T, AxiomScheme::Four],
        }
    }
}

impl FromStr for Logic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "D" => Ok(Logic::D),
            "T" => Ok(Logic::T),
            "D4" => Ok(Logic::D4),
            "S4" => Ok(Logic::S4),
            _ => Err(Error::UnsupportedLogic(s.to_string())),
        }
    }
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Logic::D => "D",
            Logic::T => "T",
            Logic::D4 => "D4",
            Logic::S4 => "S4",
        };
        f.write_str(name)
    }
}

/// Axioms of the fusion: K at both modalities, then the defining axioms of
/// `first` at modality 1 and of `second` at modality 2. No interaction
/// axioms are ever included.
pub fn fusion_axioms(first: Logic, second: Logic) -> Vec<(AxiomScheme, Modality, Formula)> {
    let mut out = vec![
        (
            AxiomScheme::K,
            Modality::One,
            axiom_instance(AxiomScheme::K, Modality::One),
        ),
        (
            AxiomScheme::K,
            Modality::Two,
            axiom_instance(AxiomScheme::K, Modality::Two),
        ),
    ];
    for (logic, modality) in [(first, Modality::One), (second, Modality::Two)] {
        for &scheme in logic.defining_schemes() {
            out.push((scheme, modality, axiom_instance(scheme, modality)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p")
    }

    #[test]
    fn prints_core_shapes() {
        assert_eq!(Formula::boxed(Modality::One, p()).to_string(), "[1] p");
        assert_eq!(
            Formula::implies(Formula::Bottom, Formula::Bottom).to_string(),
            "false -> false"
        );
        assert_eq!(
            Formula::implies(Formula::implies(p(), p()), p()).to_string(),
            "(p -> p) -> p"
        );
        assert_eq!(
            Formula::boxed(Modality::Two, Formula::implies(p(), p())).to_string(),
            "[2] (p -> p)"
        );
        assert_eq!(Formula::not(p()).to_string(), "~p");
        assert_eq!(Formula::diamond(Modality::Two, p()).to_string(), "<2> p");
    }

    #[test]
    fn axiom_instances_print_as_expected() {
        assert_eq!(axiom_instance(AxiomScheme::T, Modality::One).to_string(), "[1] p -> p");
        assert_eq!(
            axiom_instance(AxiomScheme::Four, Modality::Two).to_string(),
            "[2] p -> [2][2] p"
        );
        assert_eq!(
            axiom_instance(AxiomScheme::Com, Modality::Two).to_string(),
            "[1][2] p -> [2][1] p"
        );
        assert_eq!(
            axiom_instance(AxiomScheme::Chr, Modality::One).to_string(),
            "<1>[2] p -> [2]<1> p"
        );
        assert_eq!(
            axiom_instance(AxiomScheme::K, Modality::One).to_string(),
            "[1] (p -> q) -> [1] p -> [1] q"
        );
    }

    #[test]
    fn modal_depths() {
        assert_eq!(p().modal_depth(), 0);
        let bb = Formula::boxed(Modality::One, Formula::boxed(Modality::Two, p()));
        assert_eq!(bb.modal_depth(), 2);
        assert_eq!(
            Formula::implies(Formula::boxed(Modality::One, p()), p()).modal_depth(),
            1
        );
        for i in Modality::ALL {
            assert_eq!(axiom_instance(AxiomScheme::Four, i).modal_depth(), 2);
        }
        assert_eq!(axiom_instance(AxiomScheme::Com, Modality::One).modal_depth(), 2);
    }

    #[test]
    fn fusion_axiom_lists() {
        use AxiomScheme::*;
        let names = |a, b| {
            fusion_axioms(a, b)
                .into_iter()
                .map(|(s, i, _)| (s, i.index()))
                .collect::<Vec<_>>()
        };
        assert_eq!(names(Logic::D, Logic::T), vec![(K, 1), (K, 2), (D, 1), (T, 2)]);
        assert_eq!(
            names(Logic::S4, Logic::S4),
            vec![(K, 1), (K, 2), (T, 1), (Four, 1), (T, 2), (Four, 2)]
        );
        assert_eq!(
            names(Logic::D4, Logic::D),
            vec![(K, 1), (K, 2), (D, 1), (Four, 1), (D, 2)]
        );
        let com = axiom_instance(Com, Modality::One);
        let chr = axiom_instance(Chr, Modality::One);
        for a in Logic::ALL {
            for b in Logic::ALL {
                for (scheme, _, f) in fusion_axioms(a, b) {
                    assert!(scheme != Com && scheme != Chr);
                    assert!(f != com && f != chr);
                }
            }
        }
    }

    #[test]
    fn unsupported_logic_name() {
        assert!(matches!("K4".parse::<Logic>(), Err(Error::UnsupportedLogic(_))));
        assert_eq!("s4".parse::<Logic>().unwrap(), Logic::S4);
    }
}
