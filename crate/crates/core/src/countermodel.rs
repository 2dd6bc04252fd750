//! Certified failures of commutativity and Church-Rosser on products of
//! sequence frames.
//!
//! Both certificates are anchored at `(0^ω, 0^ω)` and read the atom `p`
//! through a symbolic valuation defined by comparing `st` values.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{axiom_instance, AxiomScheme, Formula, Modality};
use crate::kripke::{FrameKind, FusionFrame, TreeFrame};
use crate::omega::{ProductBase, ProductPoint, PseudoSeq, SymbolicSet};

/// Search bounds: base indices up to `m` (outer) and `k` (inner), members
/// enumerated `d` positions past their fixed prefix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub m: usize,
    pub k: usize,
    pub d: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { m: 8, k: 8, d: 4 }
    }
}

impl fmt::Display for Bounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m={},k={},d={}", self.m, self.k, self.d)
    }
}

impl FromStr for Bounds {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let bad = || Error::Precondition(format!("bounds must look like m,k,d: {s:?}"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let n: Vec<usize> = parts
            .iter()
            .map(|p| p.parse().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        Ok(Bounds {
            m: n[0],
            k: n[1],
            d: n[2],
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValuationName {
    /// `p(α′,β′)` iff `β′ = β₀` or `st(β′) >= st(α′)`
    StCom,
    /// `p(α′,β′)` iff `α′ ≠ α₀` and (`β′ = β₀` or `st(β′) >= st(α′)`)
    StChr,
    /// `p` everywhere or nowhere
    Constant(bool),
}

/// Decidable extension of `p` relative to an anchor `(α₀, β₀)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymbolicValuation {
    pub name: ValuationName,
    pub anchor: ProductPoint,
}

impl SymbolicValuation {
    pub fn new(name: ValuationName, anchor: ProductPoint) -> Self {
        SymbolicValuation { name, anchor }
    }

    pub fn contains(&self, q: &ProductPoint) -> bool {
        let com = q.second == self.anchor.second || q.second.st() >= q.first.st();
        match self.name {
            ValuationName::StCom => com,
            ValuationName::StChr => q.first != self.anchor.first && com,
            ValuationName::Constant(b) => b,
        }
    }
}

fn anchor(first: &TreeFrame, second: &TreeFrame) -> ProductPoint {
    ProductPoint::new(PseudoSeq::zero(first.alphabet), PseudoSeq::zero(second.alphabet))
}

/// Truth value of a bounded evaluation, labelled with its bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BoundedTruth {
    pub value: bool,
    pub bounds: Bounds,
}

impl fmt::Display for BoundedTruth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@({})", self.value, self.bounds)
    }
}

/// Member visits one bounded evaluation may make.
pub const EVAL_BUDGET: u64 = 1 << 30;

struct Evaluator<'a> {
    fusion: FusionFrame,
    valuation: &'a SymbolicValuation,
    bounds: Bounds,
    memo: HashMap<(usize, ProductPoint), bool>,
    visits: u64,
}

impl Evaluator<'_> {
    /// `□ᵢψ` at `P` tries indices `0 ..= st(P) + max(m, k)` and for each
    /// checks the base-set members of support at most
    /// `max(index, st(P)) + d`, stopping at the first member refuting `ψ`.
    fn eval(&mut self, phi: &Formula, point: &ProductPoint) -> Result<bool> {
        match phi {
            Formula::Atom(_) => Ok(self.valuation.contains(point)),
            Formula::Bottom => Ok(false),
            Formula::Implies(a, b) => Ok(!self.eval(a, point)? || self.eval(b, point)?),
            Formula::Box(modality, psi) => {
                let key = (phi as *const Formula as usize, point.clone());
                if let Some(&v) = self.memo.get(&key) {
                    return Ok(v);
                }
                let fusion = self.fusion;
                let top = point.st() + self.bounds.m.max(self.bounds.k);
                let mut found = false;
                for index in 0..=top {
                    let window = index.max(point.st()) + self.bounds.d;
                    let base = ProductBase {
                        fusion: &fusion,
                        modality: *modality,
                        point,
                        index,
                    };
                    let all = base.all_members(window, |q| {
                        self.visits += 1;
                        if self.visits > EVAL_BUDGET {
                            return Err(Error::Budget {
                                what: "bounded evaluation member visits",
                                needed: self.visits,
                                budget: EVAL_BUDGET,
                            });
                        }
                        self.eval(psi, &q)
                    })?;
                    if all {
                        found = true;
                        break;
                    }
                }
                self.memo.insert(key, found);
                Ok(found)
            }
        }
    }
}

/// Bounded evaluation on the product of the sequence frames over `first`
/// and `second`. A box found true has a real base index behind it, up to
/// the member window; a box found false is evidence only.
pub fn eval_bounded(
    first: &TreeFrame,
    second: &TreeFrame,
    phi: &Formula,
    point: &ProductPoint,
    valuation: &SymbolicValuation,
    bounds: Bounds,
) -> Result<BoundedTruth> {
    if let Some(other) = phi.atoms().into_iter().find(|a| *a != "p") {
        return Err(Error::UnknownAtom(other.to_string()));
    }
    let mut ev = Evaluator {
        fusion: FusionFrame::new(*first, *second),
        valuation,
        bounds,
        memo: HashMap::new(),
        visits: 0,
    };
    Ok(BoundedTruth {
        value: ev.eval(phi, point)?,
        bounds,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertifiedAxiom {
    Com,
    Chr,
}

impl CertifiedAxiom {
    pub fn scheme(self) -> AxiomScheme {
        match self {
            CertifiedAxiom::Com => AxiomScheme::Com,
            CertifiedAxiom::Chr => AxiomScheme::Chr,
        }
    }

    pub fn valuation(self) -> ValuationName {
        match self {
            CertifiedAxiom::Com => ValuationName::StCom,
            CertifiedAxiom::Chr => ValuationName::StChr,
        }
    }

    pub fn instance(self) -> Formula {
        axiom_instance(self.scheme(), Modality::One)
    }
}

impl FromStr for CertifiedAxiom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "com" => Ok(CertifiedAxiom::Com),
            "chr" => Ok(CertifiedAxiom::Chr),
            _ => Err(Error::Precondition(format!("axiom must be com or chr, got {s:?}"))),
        }
    }
}

impl fmt::Display for CertifiedAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertifiedAxiom::Com => "com",
            CertifiedAxiom::Chr => "chr",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Layer {
    pub name: &'static str,
    pub claim: String,
    pub obligations: u64,
    pub discharged: bool,
    pub failure: Option<String>,
    pub witnesses: Vec<String>,
}

impl Layer {
    fn new(name: &'static str, claim: String) -> Self {
        Layer {
            name,
            claim,
            obligations: 0,
            discharged: true,
            failure: None,
            witnesses: Vec::new(),
        }
    }

    fn require(&mut self, ok: bool, failure: impl FnOnce() -> String) -> bool {
        self.obligations += 1;
        if !ok && self.discharged {
            self.discharged = false;
            self.failure = Some(failure());
        }
        ok
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub axiom: CertifiedAxiom,
    pub kinds: [FrameKind; 2],
    pub valuation: ValuationName,
    pub anchor: ProductPoint,
    pub bounds: Bounds,
    pub accepted: bool,
    pub layers: Vec<Layer>,
}

impl Certificate {
    fn close(
        axiom: CertifiedAxiom,
        first: &TreeFrame,
        second: &TreeFrame,
        v: &SymbolicValuation,
        bounds: Bounds,
        layers: Vec<Layer>,
    ) -> Self {
        Certificate {
            axiom,
            kinds: [first.kind, second.kind],
            valuation: v.name,
            anchor: v.anchor.clone(),
            bounds,
            accepted: layers.iter().all(|l| l.discharged),
            layers,
        }
    }

    pub fn rejected_layer(&self) -> Option<&Layer> {
        self.layers.iter().find(|l| !l.discharged)
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "certificate: {} on {} x {} at {} ({})",
            self.axiom,
            self.kinds[0].name(),
            self.kinds[1].name(),
            self.anchor,
            self.bounds
        )?;
        for l in &self.layers {
            writeln!(
                f,
                "  {}: {} [{} obligations, {}]",
                l.name,
                l.claim,
                l.obligations,
                if l.discharged { "discharged" } else { "failed" }
            )?;
            if let Some(why) = &l.failure {
                writeln!(f, "    failure: {why}")?;
            }
        }
        write!(f, "accepted: {}", self.accepted)
    }
}

/// `j` zeros (at least one) followed by the letter 1.
fn spike(j: usize, like: &PseudoSeq) -> Result<PseudoSeq> {
    PseudoSeq::spike(j.max(1), 1, like.alphabet())
}

fn base<'a>(fusion: &'a FusionFrame, modality: Modality, point: &'a ProductPoint, index: usize) -> ProductBase<'a> {
    ProductBase {
        fusion,
        modality,
        point,
        index,
    }
}

fn window(index: usize, point: &ProductPoint, bounds: Bounds) -> usize {
    index.max(point.st()) + bounds.d
}

pub fn check_com_certificate(first: &TreeFrame, second: &TreeFrame, bounds: Bounds) -> Result<Certificate> {
    let v = SymbolicValuation::new(ValuationName::StCom, anchor(first, second));
    check_com_certificate_with(first, second, bounds, &v)
}

/// `□₁□₂p` certified true and `□₂□₁p` certified false under `v`.
pub fn check_com_certificate_with(
    first: &TreeFrame,
    second: &TreeFrame,
    bounds: Bounds,
    v: &SymbolicValuation,
) -> Result<Certificate> {
    let fusion = FusionFrame::new(*first, *second);
    let a0 = &v.anchor;

    let mut ante = Layer::new("antecedent", "[1][2] p true".into());
    let outer = 1;
    ante.witnesses.push(format!("outer index {outer}"));
    for q in base(&fusion, Modality::One, a0, outer).enumerate(window(outer, a0, bounds))? {
        let j = q.first.st().max(q.second.st());
        for r in base(&fusion, Modality::Two, &q, j).enumerate(window(j, &q, bounds))? {
            ante.require(v.contains(&r), || format!("inner index {j} at {q}: p false at {r}"));
        }
    }

    let mut cons = Layer::new("consequent", "[2][1] p false".into());
    for m in 0..=bounds.m {
        let beta = spike(m, &a0.second)?;
        let q = a0.with(Modality::Two, beta.clone());
        cons.require(base(&fusion, Modality::Two, a0, m).contains(&q), || {
            format!("m={m}: {beta} not in U_{m}(β₀)")
        });
        for k in 0..=bounds.k {
            let alpha = spike(k.max(beta.st()), &a0.first)?;
            let r = q.with(Modality::One, alpha.clone());
            cons.require(base(&fusion, Modality::One, &q, k).contains(&r), || {
                format!("m={m}, k={k}: {alpha} not in U_{k}(α₀)")
            });
            cons.require(!v.contains(&r), || format!("m={m}, k={k}: p true at {r}"));
            cons.witnesses.push(format!("m={m} k={k}: {r}"));
        }
    }
    Ok(Certificate::close(
        CertifiedAxiom::Com,
        first,
        second,
        v,
        bounds,
        vec![ante, cons],
    ))
}

pub fn check_chr_certificate(first: &TreeFrame, second: &TreeFrame, bounds: Bounds) -> Result<Certificate> {
    let v = SymbolicValuation::new(ValuationName::StChr, anchor(first, second));
    check_chr_certificate_with(first, second, bounds, &v)
}

/// `◇₁□₂p` certified true and `□₂◇₁p` certified false under `v`.
pub fn check_chr_certificate_with(
    first: &TreeFrame,
    second: &TreeFrame,
    bounds: Bounds,
    v: &SymbolicValuation,
) -> Result<Certificate> {
    let fusion = FusionFrame::new(*first, *second);
    let a0 = &v.anchor;

    let mut ante = Layer::new("antecedent", "<1>[2] p true".into());
    for m in 0..=bounds.m {
        let alpha = spike(m, &a0.first)?;
        let q = a0.with(Modality::One, alpha.clone());
        ante.require(base(&fusion, Modality::One, a0, m).contains(&q), || {
            format!("m={m}: {alpha} not in U_{m}(α₀)")
        });
        ante.require(alpha != a0.first, || format!("m={m}: witness equals α₀"));
        let j = alpha.st();
        for r in base(&fusion, Modality::Two, &q, j).enumerate(window(j, &q, bounds))? {
            ante.require(v.contains(&r), || format!("m={m}, j={j}: p false at {r}"));
        }
        ante.witnesses.push(format!("m={m}: {q}, inner index {j}"));
    }

    let mut cons = Layer::new("consequent", "[2]<1> p false".into());
    for j in 0..=bounds.m {
        let beta = spike(j, &a0.second)?;
        let q = a0.with(Modality::Two, beta.clone());
        cons.require(base(&fusion, Modality::Two, a0, j).contains(&q), || {
            format!("j={j}: {beta} not in U_{j}(β₀)")
        });
        let k = bounds.k.max(beta.st());
        for r in base(&fusion, Modality::One, &q, k).enumerate(window(k, &q, bounds))? {
            cons.require(!v.contains(&r), || format!("j={j}, k={k}: p true at {r}"));
        }
        cons.witnesses.push(format!("j={j}: {q}, index {k}"));
    }
    Ok(Certificate::close(
        CertifiedAxiom::Chr,
        first,
        second,
        v,
        bounds,
        vec![ante, cons],
    ))
}

pub fn check_certificate(
    axiom: CertifiedAxiom,
    first: &TreeFrame,
    second: &TreeFrame,
    bounds: Bounds,
) -> Result<Certificate> {
    match axiom {
        CertifiedAxiom::Com => check_com_certificate(first, second, bounds),
        CertifiedAxiom::Chr => check_chr_certificate(first, second, bounds),
    }
}

/// The axiom instance evaluated at the anchor under the matching valuation.
pub fn eval_axiom_at_anchor(
    axiom: CertifiedAxiom,
    first: &TreeFrame,
    second: &TreeFrame,
    bounds: Bounds,
) -> Result<BoundedTruth> {
    let v = SymbolicValuation::new(axiom.valuation(), anchor(first, second));
    eval_bounded(first, second, &axiom.instance(), &v.anchor, &v, bounds)
}

pub const ALL_KINDS: [FrameKind; 4] = [FrameKind::In, FrameKind::Rn, FrameKind::It, FrameKind::Rt];
