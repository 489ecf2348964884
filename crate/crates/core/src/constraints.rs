//! Declarations and their normalization into atom-level constraints.

use std::fmt;

use crate::coefficients::{convert, CoeffSpec, ExtReal, Family, RangeType};
use crate::error::{Error, Result};
use crate::partition::{atoms_of, AtomMask, BoolExpr, EventTable};

/// Default lower bound on the probability of a conditioning event.
pub const DEFAULT_EPS_COND: f64 = 1e-9;

/// Asserted relation, with values in the coefficient's rendering range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Relation {
    Eq(f64),
    In(f64, f64),
}

impl Relation {
    pub fn validate(&self, range: RangeType) -> Result<()> {
        let check = |v: f64| {
            if range.contains(v) {
                Ok(())
            } else {
                Err(Error::Domain(format!("{v} is outside the {range}-type range")))
            }
        };
        match *self {
            Relation::Eq(v) => check(v),
            Relation::In(lo, hi) => {
                check(lo)?;
                check(hi)?;
                if lo > hi {
                    return Err(Error::Domain(format!("empty interval [{lo}, {hi}]")));
                }
                Ok(())
            }
        }
    }

    /// Whether `v` satisfies the relation within `tol`.
    pub fn holds(&self, v: f64, tol: f64) -> bool {
        match *self {
            Relation::Eq(c) => (v == c) || (v - c).abs() <= tol,
            Relation::In(lo, hi) => v >= lo - tol && (v <= hi + tol || hi == f64::INFINITY),
        }
    }
}

/// A user-declared fact about the events.
#[derive(Debug, Clone, PartialEq)]
pub enum Declaration {
    CoeffAssert { spec: CoeffSpec, relation: Relation },
    BoolDefine { event: String, expr: BoolExpr },
    ExchBlock { events: Vec<String> },
}

/// Dense linear form over atom probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearForm(pub Vec<f64>);

impl LinearForm {
    pub fn zero(dim: usize) -> Self {
        LinearForm(vec![0.0; dim])
    }

    pub fn from_mask(mask: &AtomMask) -> Self {
        let mut c = vec![0.0; mask.len()];
        for a in mask.atoms() {
            c[a] = 1.0;
        }
        LinearForm(c)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn eval(&self, p: &[f64]) -> f64 {
        self.0.iter().zip(p).map(|(c, x)| c * x).sum()
    }

    /// `self + k * other`
    pub fn add_scaled(&self, k: f64, other: &LinearForm) -> LinearForm {
        LinearForm(self.0.iter().zip(&other.0).map(|(a, b)| a + k * b).collect())
    }

    pub fn scale(&self, k: f64) -> LinearForm {
        LinearForm(self.0.iter().map(|a| k * a).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintRel {
    Eq,
    Ge,
}

/// `coeffs . p  (= | >=)  rhs`
#[derive(Debug, Clone, PartialEq)]
pub struct LinearConstraint {
    pub coeffs: LinearForm,
    pub relation: ConstraintRel,
    pub rhs: f64,
}

impl LinearConstraint {
    pub fn eq(coeffs: LinearForm, rhs: f64) -> Self {
        LinearConstraint { coeffs, relation: ConstraintRel::Eq, rhs }
    }

    pub fn ge(coeffs: LinearForm, rhs: f64) -> Self {
        LinearConstraint { coeffs, relation: ConstraintRel::Ge, rhs }
    }

    /// Amount by which `p` violates the constraint (0 when satisfied).
    pub fn violation(&self, p: &[f64]) -> f64 {
        let r = self.coeffs.eval(p) - self.rhs;
        match self.relation {
            ConstraintRel::Eq => r.abs(),
            ConstraintRel::Ge => (-r).max(0.0),
        }
    }
}

/// `left_weight * L1 * L2 - right_weight * L3 * L4  (= | >=)  0`
#[derive(Debug, Clone, PartialEq)]
pub struct BilinearConstraint {
    pub left: (LinearForm, LinearForm),
    pub right: (LinearForm, LinearForm),
    pub left_weight: f64,
    pub right_weight: f64,
    pub relation: ConstraintRel,
}

impl BilinearConstraint {
    pub fn residual(&self, p: &[f64]) -> f64 {
        let l = self.left.0.eval(p) * self.left.1.eval(p);
        let r = self.right.0.eval(p) * self.right.1.eval(p);
        self.left_weight * l - self.right_weight * r
    }

    pub fn gradient(&self, p: &[f64]) -> Vec<f64> {
        let (l1, l2) = (self.left.0.eval(p), self.left.1.eval(p));
        let (r1, r2) = (self.right.0.eval(p), self.right.1.eval(p));
        (0..p.len())
            .map(|i| {
                self.left_weight * (self.left.0 .0[i] * l2 + l1 * self.left.1 .0[i])
                    - self.right_weight * (self.right.0 .0[i] * r2 + r1 * self.right.1 .0[i])
            })
            .collect()
    }

    pub fn violation(&self, p: &[f64]) -> f64 {
        let r = self.residual(p);
        match self.relation {
            ConstraintRel::Eq => r.abs(),
            ConstraintRel::Ge => (-r).max(0.0),
        }
    }

    /// Magnitude of the two product terms at `p`.
    pub fn scale(&self, p: &[f64]) -> f64 {
        let l = self.left.0.eval(p) * self.left.1.eval(p);
        let r = self.right.0.eval(p) * self.right.1.eval(p);
        (self.left_weight * l).abs() + (self.right_weight * r).abs()
    }

    /// Violation relative to [`scale`](Self::scale). Near the boundary of
    /// the simplex both products are tiny and an absolute residual says
    /// little about how far the constrained ratio is from its target.
    pub fn relative_violation(&self, p: &[f64]) -> f64 {
        let v = self.violation(p);
        if v == 0.0 {
            0.0
        } else {
            v / self.scale(p).max(f64::MIN_POSITIVE)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AtomicConstraint {
    Linear(LinearConstraint),
    Bilinear(BilinearConstraint),
}

impl AtomicConstraint {
    pub fn violation(&self, p: &[f64]) -> f64 {
        match self {
            AtomicConstraint::Linear(c) => c.violation(p),
            AtomicConstraint::Bilinear(c) => c.violation(p),
        }
    }

    pub fn is_linear(&self) -> bool {
        matches!(self, AtomicConstraint::Linear(_))
    }
}

/// Constraint counts by class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ClassSummary {
    pub n_linear: usize,
    pub n_bilinear: usize,
}

impl fmt::Display for ClassSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} linear, {} bilinear", self.n_linear, self.n_bilinear)
    }
}

pub fn classify(constraints: &[AtomicConstraint]) -> ClassSummary {
    let n_linear = constraints.iter().filter(|c| c.is_linear()).count();
    ClassSummary { n_linear, n_bilinear: constraints.len() - n_linear }
}

/// Splits a constraint list into its linear and bilinear parts, preserving order.
pub fn split(constraints: &[AtomicConstraint]) -> (Vec<LinearConstraint>, Vec<BilinearConstraint>) {
    let mut lin = Vec::new();
    let mut bil = Vec::new();
    for c in constraints {
        match c {
            AtomicConstraint::Linear(l) => lin.push(l.clone()),
            AtomicConstraint::Bilinear(b) => bil.push(b.clone()),
        }
    }
    (lin, bil)
}

/// The 2x2 cell forms `x, y, z, w` of two masks (see `coefficients`).
pub(crate) struct CellForms {
    pub x: LinearForm,
    pub y: LinearForm,
    pub z: LinearForm,
    pub w: LinearForm,
}

impl CellForms {
    pub fn new(a: &AtomMask, b: &AtomMask) -> Self {
        let na = a.complement();
        let nb = b.complement();
        CellForms {
            x: LinearForm::from_mask(&a.intersect(b)),
            y: LinearForm::from_mask(&a.intersect(&nb)),
            z: LinearForm::from_mask(&na.intersect(b)),
            w: LinearForm::from_mask(&na.intersect(&nb)),
        }
    }

    pub fn p_a(&self) -> LinearForm {
        self.x.add_scaled(1.0, &self.y)
    }

    pub fn p_b(&self) -> LinearForm {
        self.x.add_scaled(1.0, &self.z)
    }

    pub fn p_not_b(&self) -> LinearForm {
        self.y.add_scaled(1.0, &self.w)
    }
}

fn guard(form: LinearForm, eps: f64) -> AtomicConstraint {
    AtomicConstraint::Linear(LinearConstraint::ge(form, eps))
}

/// Constraints for `num / den = c` or `num / den in [lo, hi]`, with `c` possibly infinite.
fn ratio_constraints(num: &LinearForm, den: &LinearForm, rel: Relation) -> Vec<AtomicConstraint> {
    let lin = AtomicConstraint::Linear;
    match rel {
        Relation::Eq(c) if c.is_infinite() => vec![lin(LinearConstraint::eq(den.clone(), 0.0))],
        Relation::Eq(c) => vec![lin(LinearConstraint::eq(num.add_scaled(-c, den), 0.0))],
        Relation::In(lo, hi) => {
            let mut out = Vec::new();
            if lo.is_infinite() {
                out.push(lin(LinearConstraint::eq(den.clone(), 0.0)));
                return out;
            }
            out.push(lin(LinearConstraint::ge(num.add_scaled(-lo, den), 0.0)));
            if hi.is_finite() {
                out.push(lin(LinearConstraint::ge(den.scale(hi).add_scaled(-1.0, num), 0.0)));
            }
            out
        }
    }
}

/// Constraints for `(l1 l2) / (r1 r2) = q` or `in [lo, hi]`.
fn product_ratio_constraints(
    l: (&LinearForm, &LinearForm),
    r: (&LinearForm, &LinearForm),
    rel: Relation,
) -> Vec<AtomicConstraint> {
    let make = |lw: f64, rw: f64, relation| {
        AtomicConstraint::Bilinear(BilinearConstraint {
            left: (l.0.clone(), l.1.clone()),
            right: (r.0.clone(), r.1.clone()),
            left_weight: lw,
            right_weight: rw,
            relation,
        })
    };
    match rel {
        // l1 l2 / (r1 r2) = inf  <=>  r1 r2 = 0
        Relation::Eq(q) if q.is_infinite() => vec![make(0.0, -1.0, ConstraintRel::Eq)],
        Relation::Eq(q) => vec![make(1.0, q, ConstraintRel::Eq)],
        Relation::In(lo, hi) => {
            if lo.is_infinite() {
                return vec![make(0.0, -1.0, ConstraintRel::Eq)];
            }
            let mut out = vec![make(1.0, lo, ConstraintRel::Ge)];
            if hi.is_finite() {
                out.push(make(-1.0, -hi, ConstraintRel::Ge));
            }
            out
        }
    }
}

fn to_canonical(rel: Relation, from: RangeType, to: RangeType) -> Result<Relation> {
    let conv = |v: f64| convert(ExtReal::from_f64(v), from, to).map(ExtReal::to_f64);
    Ok(match rel {
        Relation::Eq(v) => Relation::Eq(conv(v)?),
        Relation::In(lo, hi) => Relation::In(conv(lo)?, conv(hi)?),
    })
}

fn resolve(expr: &BoolExpr, table: &EventTable) -> Result<AtomMask> {
    if let Some(name) = expr.first_unknown(table) {
        return Err(Error::UnknownEvent(name.to_string()));
    }
    atoms_of(expr, table)
}

/// Normalizes a declaration into atomic constraints.
///
/// Conditional families and both Quetelet families also emit guards that
/// bound the probability of each conditioning event below by `eps_cond`.
pub fn normalize(
    decl: &Declaration,
    table: &EventTable,
    eps_cond: f64,
) -> Result<Vec<AtomicConstraint>> {
    match decl {
        Declaration::BoolDefine { event, expr } => define_event(event, expr, table),
        Declaration::ExchBlock { events } => expand_exchangeable(events, table),
        Declaration::CoeffAssert { spec, relation } => {
            relation.validate(spec.range)?;
            if !spec.family.allowed_ranges().contains(&spec.range) {
                return Err(Error::Domain(format!("{} has no {}-type form", spec.family.description(), spec.range)));
            }
            let canonical = if spec.family == Family::O {
                // odds of a single event are asserted as its probability
                to_canonical(*relation, spec.range, RangeType::P)?
            } else {
                to_canonical(*relation, spec.range, spec.family.natural_range())?
            };
            let ma = resolve(&spec.a, table)?;
            let mb = match &spec.b {
                Some(b) => Some(resolve(b, table)?),
                None => None,
            };
            normalize_coefficient(spec.family, &ma, mb.as_ref(), canonical, eps_cond)
        }
    }
}

fn normalize_coefficient(
    family: Family,
    a: &AtomMask,
    b: Option<&AtomMask>,
    rel: Relation,
    eps: f64,
) -> Result<Vec<AtomicConstraint>> {
    if b.is_none() {
        let form = LinearForm::from_mask(a);
        return Ok(match rel {
            Relation::Eq(c) => vec![AtomicConstraint::Linear(LinearConstraint::eq(form, c))],
            Relation::In(lo, hi) => vec![
                AtomicConstraint::Linear(LinearConstraint::ge(form.clone(), lo)),
                AtomicConstraint::Linear(LinearConstraint::ge(form.scale(-1.0), -hi)),
            ],
        });
    }
    let b = b.ok_or_else(|| Error::Domain(format!("{} needs two arguments", family.description())))?;
    let cells = CellForms::new(a, b);
    let mut out = match family {
        Family::CondP => ratio_constraints(&cells.x, &cells.p_b(), rel),
        Family::CondO => ratio_constraints(&cells.x, &cells.z, rel),
        Family::FOdds => ratio_constraints(&cells.y, &cells.z, rel),
        Family::FProb => ratio_constraints(&cells.p_a(), &cells.p_b(), rel),
        Family::QOdds => product_ratio_constraints((&cells.x, &cells.w), (&cells.y, &cells.z), rel),
        Family::QProb => {
            product_ratio_constraints((&cells.x, &cells.p_not_b()), (&cells.y, &cells.p_b()), rel)
        }
        Family::P | Family::O => unreachable!("handled above"),
    };
    match family {
        Family::CondP | Family::CondO => out.push(guard(cells.p_b(), eps)),
        Family::QOdds | Family::QProb => {
            out.push(guard(cells.p_b(), eps));
            out.push(guard(cells.p_not_b(), eps));
        }
        _ => {}
    }
    Ok(out)
}

/// Zeroes every atom where `name` disagrees with `expr`.
pub fn define_event(name: &str, expr: &BoolExpr, table: &EventTable) -> Result<Vec<AtomicConstraint>> {
    let i = table.index_of(name).ok_or_else(|| Error::UnknownEvent(name.to_string()))?;
    if expr.mentions(name) {
        return Err(Error::Cycle(name.to_string()));
    }
    let disagree = table.event_mask(i).sym_diff(&resolve(expr, table)?);
    let dim = table.num_atoms();
    Ok(disagree
        .atoms()
        .map(|atom| {
            let mut c = vec![0.0; dim];
            c[atom] = 1.0;
            AtomicConstraint::Linear(LinearConstraint::eq(LinearForm(c), 0.0))
        })
        .collect())
}

/// Equalities making the joint distribution invariant under permutations of
/// the block's events, with all other events held fixed.
///
/// Atoms are grouped by (pattern outside the block, number of true block
/// events); each group of size `k` contributes `k - 1` equalities tying its
/// members to its smallest atom.
pub fn expand_exchangeable(events: &[String], table: &EventTable) -> Result<Vec<AtomicConstraint>> {
    if events.len() < 2 {
        return Err(Error::Domain("an exchangeable block needs at least two events".into()));
    }
    let mut block_bits = 0usize;
    for name in events {
        let i = table.index_of(name).ok_or_else(|| Error::UnknownEvent(name.clone()))?;
        let bit = 1 << table.bit_of(i);
        if block_bits & bit != 0 {
            return Err(Error::Domain(format!("event '{name}' appears twice in the block")));
        }
        block_bits |= bit;
    }
    let dim = table.num_atoms();
    let mut representative: std::collections::BTreeMap<(usize, u32), usize> = Default::default();
    let mut out = Vec::new();
    for atom in 0..dim {
        let key = (atom & !block_bits, (atom & block_bits).count_ones());
        match representative.get(&key) {
            None => {
                representative.insert(key, atom);
            }
            Some(&rep) => {
                let mut c = vec![0.0; dim];
                c[rep] = 1.0;
                c[atom] = -1.0;
                out.push(AtomicConstraint::Linear(LinearConstraint::eq(LinearForm(c), 0.0)));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::Family;
    use crate::partition::Distribution;
    use proptest::prelude::*;

    fn table(n: usize) -> EventTable {
        let names = ["A", "B", "C", "D", "E", "F"];
        EventTable::new(names[..n].iter().copied()).unwrap()
    }

    fn ev(n: &str) -> BoolExpr {
        BoolExpr::event(n)
    }

    fn assert_decl(spec: CoeffSpec, relation: Relation) -> Declaration {
        Declaration::CoeffAssert { spec, relation }
    }

    #[test]
    fn marginal_is_one_equality() {
        let t = table(2);
        let out = normalize(&assert_decl(CoeffSpec::prob(ev("A")), Relation::Eq(0.3)), &t, 1e-9).unwrap();
        assert_eq!(out.len(), 1);
        match &out[0] {
            AtomicConstraint::Linear(l) => {
                assert_eq!(l.coeffs.0, vec![0.0, 0.0, 1.0, 1.0]);
                assert_eq!(l.relation, ConstraintRel::Eq);
                assert_eq!(l.rhs, 0.3);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn marginal_interval_is_two_inequalities() {
        let t = table(2);
        let out = normalize(&assert_decl(CoeffSpec::prob(ev("A")), Relation::In(0.2, 0.7)), &t, 1e-9).unwrap();
        assert_eq!(out.len(), 2);
        let on = [0.0, 0.0, 0.25, 0.25];
        assert!(out.iter().all(|c| c.violation(&on) == 0.0));
        let low = [0.5, 0.4, 0.05, 0.05];
        assert!(out.iter().any(|c| c.violation(&low) > 0.0));
        let high = [0.1, 0.1, 0.4, 0.4];
        assert!(out.iter().any(|c| c.violation(&high) > 0.0));
    }

    #[test]
    fn odds_assertion_is_a_marginal() {
        let t = table(2);
        let spec = CoeffSpec::new(Family::O, ev("A"), None, RangeType::O).unwrap();
        let out = normalize(&assert_decl(spec, Relation::Eq(3.0)), &t, 1e-9).unwrap();
        match &out[0] {
            AtomicConstraint::Linear(l) => assert_eq!(l.rhs, 0.75),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn independence_is_bilinear() {
        let t = table(2);
        let spec = CoeffSpec::pair(Family::QOdds, ev("A"), ev("B"));
        let out = normalize(&assert_decl(spec, Relation::Eq(1.0)), &t, 1e-9).unwrap();
        assert_eq!(classify(&out), ClassSummary { n_linear: 2, n_bilinear: 1 });
        let AtomicConstraint::Bilinear(b) = &out[0] else { panic!() };
        // x w - y z on the cells of (A, B)
        let p = [0.3, 0.2, 0.1, 0.4]; // w z y x
        assert!((b.residual(&p) - (0.4 * 0.3 - 0.1 * 0.2)).abs() < 1e-15);
    }

    #[test]
    fn exchangeable_probability_ratio_is_linear() {
        let t = table(2);
        let spec = CoeffSpec::pair(Family::FProb, ev("A"), ev("B"));
        let out = normalize(&assert_decl(spec, Relation::Eq(1.0)), &t, 1e-9).unwrap();
        assert_eq!(out.len(), 1);
        let AtomicConstraint::Linear(l) = &out[0] else { panic!() };
        // P(A) - P(B): atoms 10 and 11 minus atoms 01 and 11
        assert_eq!(l.coeffs.0, vec![0.0, -1.0, 1.0, 0.0]);
    }

    #[test]
    fn classification_examples() {
        let t = table(2);
        let mut all = Vec::new();
        all.extend(normalize(&assert_decl(CoeffSpec::prob(ev("A")), Relation::Eq(0.3)), &t, 1e-9).unwrap());
        all.extend(
            normalize(&assert_decl(CoeffSpec::pair(Family::FProb, ev("A"), ev("B")), Relation::Eq(1.0)), &t, 1e-9)
                .unwrap(),
        );
        assert_eq!(classify(&all), ClassSummary { n_linear: 2, n_bilinear: 0 });

        let mut all = Vec::new();
        all.extend(
            normalize(&assert_decl(CoeffSpec::pair(Family::QProb, ev("A"), ev("B")), Relation::Eq(2.0)), &t, 1e-9)
                .unwrap(),
        );
        all.extend(normalize(&assert_decl(CoeffSpec::prob(ev("B")), Relation::Eq(0.5)), &t, 1e-9).unwrap());
        assert_eq!(classify(&all), ClassSummary { n_linear: 3, n_bilinear: 1 });
    }

    #[test]
    fn define_zeroes_disagreeing_atoms() {
        let t = table(3);
        let out = define_event("C", &ev("A").and(ev("B")), &t).unwrap();
        assert_eq!(out.len(), 4);
        let zeroed: Vec<usize> = out
            .iter()
            .map(|c| match c {
                AtomicConstraint::Linear(l) => l.coeffs.0.iter().position(|&v| v == 1.0).unwrap(),
                _ => panic!(),
            })
            .collect();
        // atoms ABC: C must equal A&B
        for atom in 0..8usize {
            let (a, b, c) = (atom >> 2 & 1, atom >> 1 & 1, atom & 1);
            assert_eq!(zeroed.contains(&atom), c != (a & b), "atom {atom:03b}");
        }

        let out = define_event("C", &BoolExpr::True, &t).unwrap();
        assert_eq!(out.len(), 4);
        assert!(matches!(define_event("C", &ev("C").or(ev("A")), &t), Err(Error::Cycle(_))));
        assert!(matches!(define_event("Z", &ev("A"), &t), Err(Error::UnknownEvent(_))));
    }

    #[test]
    fn exchangeable_counts() {
        for n in 2..=6 {
            let t = table(n);
            let names: Vec<String> = t.names().to_vec();
            let out = expand_exchangeable(&names, &t).unwrap();
            assert_eq!(out.len(), (1 << n) - (n + 1), "n = {n}");
        }
        let t = table(2);
        let out = expand_exchangeable(&["A".into(), "B".into()], &t).unwrap();
        assert_eq!(out.len(), 1);
        let AtomicConstraint::Linear(l) = &out[0] else { panic!() };
        // y = z: atom 01 (-A&B) tied to atom 10 (A&-B)
        assert_eq!(l.coeffs.0, vec![0.0, 1.0, -1.0, 0.0]);
    }

    #[test]
    fn partial_block_fixes_outside_bits() {
        let t = table(3);
        let out = expand_exchangeable(&["A".into(), "B".into()], &t).unwrap();
        let pairs: Vec<(usize, usize)> = out
            .iter()
            .map(|c| {
                let AtomicConstraint::Linear(l) = c else { panic!() };
                (
                    l.coeffs.0.iter().position(|&v| v == 1.0).unwrap(),
                    l.coeffs.0.iter().position(|&v| v == -1.0).unwrap(),
                )
            })
            .collect();
        // (-A&B&-C, A&-B&-C) and (-A&B&C, A&-B&C)
        assert_eq!(pairs, vec![(0b010, 0b100), (0b011, 0b101)]);
        assert!(expand_exchangeable(&["A".into()], &t).is_err());
        assert!(expand_exchangeable(&["A".into(), "X".into()], &t).is_err());
        assert!(expand_exchangeable(&["A".into(), "A".into()], &t).is_err());
    }

    #[test]
    fn rejects_out_of_range_values() {
        let t = table(2);
        assert!(normalize(&assert_decl(CoeffSpec::prob(ev("A")), Relation::Eq(1.5)), &t, 1e-9).is_err());
        assert!(normalize(&assert_decl(CoeffSpec::prob(ev("A")), Relation::In(0.6, 0.4)), &t, 1e-9).is_err());
        assert!(normalize(&assert_decl(CoeffSpec::prob(ev("Z")), Relation::Eq(0.5)), &t, 1e-9).is_err());
    }

    #[test]
    fn normalization_is_deterministic() {
        let t = table(3);
        let d = assert_decl(
            CoeffSpec::pair(Family::QProb, ev("A").or(ev("C")), ev("B")).with_range(RangeType::S).unwrap(),
            Relation::In(-0.2, 0.4),
        );
        assert_eq!(normalize(&d, &t, 1e-9).unwrap(), normalize(&d, &t, 1e-9).unwrap());
    }

    fn families() -> impl Strategy<Value = Family> {
        prop_oneof![
            Just(Family::P),
            Just(Family::O),
            Just(Family::CondP),
            Just(Family::CondO),
            Just(Family::QOdds),
            Just(Family::QProb),
            Just(Family::FOdds),
            Just(Family::FProb),
        ]
    }

    fn positive_dist(n: usize) -> impl Strategy<Value = Distribution> {
        prop::collection::vec(1e-3f64..1.0, 1 << n).prop_map(move |v| {
            let s: f64 = v.iter().sum();
            let k = (1 << n) as f64;
            Distribution::new(v.iter().map(|x| 0.8 * x / s + 0.2 / k).collect::<Vec<_>>()).unwrap()
        })
    }

    fn exprs(n: usize) -> impl Strategy<Value = BoolExpr> {
        let leaf = (0..n).prop_map(|i| ev(["A", "B", "C"][i]));
        leaf.prop_recursive(2, 6, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(BoolExpr::not),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
                (inner.clone(), inner).prop_map(|(a, b)| a.or(b)),
            ]
        })
    }

    fn satisfied(cs: &[AtomicConstraint], p: &[f64]) -> bool {
        cs.iter().all(|c| c.violation(p) <= 1e-9)
    }

    fn case() -> impl Strategy<Value = (usize, Family, Distribution, BoolExpr, BoolExpr)> {
        (2usize..=3).prop_flat_map(|n| (Just(n), families(), positive_dist(n), exprs(n), exprs(n)))
    }

    proptest! {
        #[test]
        fn normalization_is_sound((n, family, dist, a, b) in case()) {
            let t = table(n);
            let b = (family.arity() == 2).then_some(b);
            let spec = CoeffSpec::new(family, a, b, family.natural_range()).unwrap();
            let Some(v) = spec.evaluate(&dist, &t).unwrap().finite() else { return Ok(()) };
            let p = dist.as_slice();

            let holds = normalize(&assert_decl(spec.clone(), Relation::Eq(v)), &t, 1e-9).unwrap();
            prop_assert!(satisfied(&holds, p), "{} = {} should hold", spec, v);

            let off = match family.natural_range() {
                RangeType::P => if v < 0.5 { v + 0.3 } else { v - 0.3 },
                _ => 2.0 * v + 0.1,
            };
            let fails = normalize(&assert_decl(spec.clone(), Relation::Eq(off)), &t, 1e-9).unwrap();
            prop_assert!(!satisfied(&fails, p), "{} = {} should fail (true {})", spec, off, v);

            let eps = 0.05 * v.max(0.01);
            let around = Relation::In((v - eps).max(0.0), v + eps);
            if around.validate(family.natural_range()).is_ok() {
                let holds = normalize(&assert_decl(spec.clone(), around), &t, 1e-9).unwrap();
                prop_assert!(satisfied(&holds, p));
            }
            let above = Relation::In(v + eps, v + 2.0 * eps);
            if above.validate(family.natural_range()).is_ok() {
                let fails = normalize(&assert_decl(spec, above), &t, 1e-9).unwrap();
                prop_assert!(!satisfied(&fails, p));
            }
        }
    }
}
