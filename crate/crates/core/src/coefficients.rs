//! Coefficients of relation between two events and the three value ranges.
//!
//! Every two-argument coefficient is a function of the four cells of the
//! 2x2 table induced by the argument events:
//!
//! ```text
//!            b        -b
//!    a       x         y
//!   -a       z         w
//! ```
//!
//! | family  | notation  | value                                  |
//! |---------|-----------|----------------------------------------|
//! | `CondP` | `P(a|b)`  | `x / (x+z)`                            |
//! | `CondO` | `O(a|b)`  | `x / z`                                |
//! | `QOdds` | `Q(a|b)`  | `xw / yz` (Quetelet odds ratio)        |
//! | `QProb` | `Q(a:b)`  | `P(a|b) / P(a|-b)`                     |
//! | `FOdds` | `F(a|b)`  | `O(a|b) / O(b|a) = y / z` (de Finetti) |
//! | `FProb` | `F(a:b)`  | `P(a|b) / P(b|a)`                      |
//!
//! Zero denominators produce `+inf` for a positive numerator and
//! [`ExtReal::Undefined`] for `0/0`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::{atoms_of, prob, AtomMask, BoolExpr, Distribution, EventTable};

/// Value range of a coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RangeType {
    /// `[0, 1]`
    P,
    /// `[0, +inf]`
    O,
    /// `[-1, 1]`
    S,
}

impl RangeType {
    pub fn contains(self, v: f64) -> bool {
        match self {
            RangeType::P => (0.0..=1.0).contains(&v),
            RangeType::O => v >= 0.0 && !v.is_nan(),
            RangeType::S => (-1.0..=1.0).contains(&v),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RangeType::P => "P",
            RangeType::O => "O",
            RangeType::S => "S",
        }
    }
}

impl fmt::Display for RangeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RangeType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "P" | "p" => Ok(RangeType::P),
            "O" | "o" => Ok(RangeType::O),
            "S" | "s" => Ok(RangeType::S),
            _ => Err(Error::Domain(format!("unknown range type '{s}' (expected P, O or S)"))),
        }
    }
}

/// A real value, `+inf`, or the result of `0/0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    Finite(f64),
    PosInf,
    Undefined,
}

impl ExtReal {
    /// Maps an `f64` into the extended reals; NaN becomes `Undefined`.
    pub fn from_f64(v: f64) -> Self {
        if v.is_nan() {
            ExtReal::Undefined
        } else if v == f64::INFINITY {
            ExtReal::PosInf
        } else {
            ExtReal::Finite(v)
        }
    }

    /// `+inf` as `f64::INFINITY`, `Undefined` as NaN.
    pub fn to_f64(self) -> f64 {
        match self {
            ExtReal::Finite(v) => v,
            ExtReal::PosInf => f64::INFINITY,
            ExtReal::Undefined => f64::NAN,
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_defined(self) -> bool {
        !matches!(self, ExtReal::Undefined)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(v) => f.write_str(&format_sig(*v)),
            ExtReal::PosInf => f.write_str("inf"),
            ExtReal::Undefined => f.write_str("undef"),
        }
    }
}

/// Formats with 10 significant digits, trimming trailing zeros.
pub fn format_sig(v: f64) -> String {
    if v.is_nan() {
        return "undef".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let rounded: f64 = format!("{v:.9e}").parse().unwrap_or(v);
    let out = if rounded != 0.0 && (rounded.abs() < 1e-6 || rounded.abs() >= 1e15) {
        format!("{rounded:e}")
    } else {
        format!("{rounded}")
    };
    if out == "-0" {
        "0".into()
    } else {
        out
    }
}

/// Division of nonnegative quantities with `x/0 = inf`, `0/0 = undef`.
pub(crate) fn ratio(num: f64, den: f64) -> ExtReal {
    if den == 0.0 {
        if num == 0.0 {
            ExtReal::Undefined
        } else {
            ExtReal::PosInf
        }
    } else {
        ExtReal::Finite(num / den)
    }
}

/// Division in the nonnegative extended reals.
pub(crate) fn ext_div(num: ExtReal, den: ExtReal) -> ExtReal {
    use ExtReal::*;
    match (num, den) {
        (Undefined, _) | (_, Undefined) | (PosInf, PosInf) => Undefined,
        (PosInf, Finite(_)) => PosInf,
        (Finite(_), PosInf) => Finite(0.0),
        (Finite(n), Finite(d)) => ratio(n, d),
    }
}

/// Cells of the 2x2 table of two events under a distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Table2x2 {
    /// `P(a & b)`
    pub x: f64,
    /// `P(a & -b)`
    pub y: f64,
    /// `P(-a & b)`
    pub z: f64,
    /// `P(-a & -b)`
    pub w: f64,
}

impl Table2x2 {
    pub fn from_masks(dist: &Distribution, a: &AtomMask, b: &AtomMask) -> Result<Self> {
        let na = a.complement();
        let nb = b.complement();
        Ok(Table2x2 {
            x: prob(dist, &a.intersect(b))?,
            y: prob(dist, &a.intersect(&nb))?,
            z: prob(dist, &na.intersect(b))?,
            w: prob(dist, &na.intersect(&nb))?,
        })
    }

    pub fn p_a(&self) -> f64 {
        self.x + self.y
    }

    pub fn p_b(&self) -> f64 {
        self.x + self.z
    }

    pub fn transpose(&self) -> Self {
        Table2x2 { x: self.x, y: self.z, z: self.y, w: self.w }
    }

    pub fn cond_p(&self) -> ExtReal {
        ratio(self.x, self.x + self.z)
    }

    pub fn cond_o(&self) -> ExtReal {
        ratio(self.x, self.z)
    }

    pub fn q_odds(&self) -> ExtReal {
        ratio(self.x * self.w, self.y * self.z)
    }

    pub fn q_prob(&self) -> ExtReal {
        let given_b = ratio(self.x, self.x + self.z);
        let given_not_b = ratio(self.y, self.y + self.w);
        ext_div(given_b, given_not_b)
    }

    pub fn f_odds(&self) -> ExtReal {
        ratio(self.y, self.z)
    }

    pub fn f_prob(&self) -> ExtReal {
        ext_div(self.cond_p(), self.transpose().cond_p())
    }
}

fn table(dist: &Distribution, a: &AtomMask, b: &AtomMask) -> Table2x2 {
    // callers run check_len first
    Table2x2::from_masks(dist, a, b).expect("mask length matches distribution")
}

fn check_len(dist: &Distribution, masks: &[&AtomMask]) -> Result<()> {
    for m in masks {
        if m.len() != dist.len() {
            return Err(Error::Dimension { expected: dist.len(), found: m.len() });
        }
    }
    Ok(())
}

/// `P(a | b) = P(a & b) / P(b)`.
pub fn cond_p(dist: &Distribution, a: &AtomMask, b: &AtomMask) -> Result<ExtReal> {
    check_len(dist, &[a, b])?;
    Ok(table(dist, a, b).cond_p())
}

/// `O(a | b) = P(a & b) / P(-a & b)`.
pub fn cond_o(dist: &Distribution, a: &AtomMask, b: &AtomMask) -> Result<ExtReal> {
    check_len(dist, &[a, b])?;
    Ok(table(dist, a, b).cond_o())
}

/// Quetelet odds ratio `Q(a|b) = O(a|b) / O(a|-b)`.
pub fn q_odds(dist: &Distribution, a: &AtomMask, b: &AtomMask) -> Result<ExtReal> {
    check_len(dist, &[a, b])?;
    Ok(table(dist, a, b).q_odds())
}

/// Quetelet probability ratio `Q(a:b) = P(a|b) / P(a|-b)`.
pub fn q_prob(dist: &Distribution, a: &AtomMask, b: &AtomMask) -> Result<ExtReal> {
    check_len(dist, &[a, b])?;
    Ok(table(dist, a, b).q_prob())
}

/// de Finetti odds ratio `F(a|b) = O(a|b) / O(b|a)`.
pub fn f_odds(dist: &Distribution, a: &AtomMask, b: &AtomMask) -> Result<ExtReal> {
    check_len(dist, &[a, b])?;
    Ok(table(dist, a, b).f_odds())
}

/// de Finetti probability ratio `F(a:b) = P(a|b) / P(b|a)`.
pub fn f_prob(dist: &Distribution, a: &AtomMask, b: &AtomMask) -> Result<ExtReal> {
    check_len(dist, &[a, b])?;
    Ok(table(dist, a, b).f_prob())
}

/// Converts `v` between ranges. Undefined stays undefined.
pub fn convert(v: ExtReal, from: RangeType, to: RangeType) -> Result<ExtReal> {
    use RangeType::*;
    let x = match v {
        ExtReal::Undefined => return Ok(ExtReal::Undefined),
        ExtReal::PosInf if from == O => f64::INFINITY,
        ExtReal::PosInf => return Err(Error::Domain(format!("inf is outside the {from}-type range"))),
        ExtReal::Finite(x) => x,
    };
    if !from.contains(x) {
        return Err(Error::Domain(format!("{} is outside the {from}-type range", format_sig(x))));
    }
    let out = match (from, to) {
        (P, P) | (O, O) | (S, S) => x,
        (P, O) => {
            if x == 1.0 {
                f64::INFINITY
            } else {
                x / (1.0 - x)
            }
        }
        (P, S) => 2.0 * x - 1.0,
        (O, P) => {
            if x.is_infinite() {
                1.0
            } else {
                x / (1.0 + x)
            }
        }
        (O, S) => {
            if x.is_infinite() {
                1.0
            } else {
                (x - 1.0) / (x + 1.0)
            }
        }
        (S, P) => (x + 1.0) / 2.0,
        (S, O) => {
            if x == 1.0 {
                f64::INFINITY
            } else {
                (1.0 + x) / (1.0 - x)
            }
        }
    };
    Ok(ExtReal::from_f64(out))
}

/// Coefficient families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    P,
    O,
    CondP,
    CondO,
    QOdds,
    QProb,
    FOdds,
    FProb,
}

impl Family {
    pub fn arity(self) -> usize {
        match self {
            Family::P | Family::O => 1,
            _ => 2,
        }
    }

    /// Range the family's raw value lives in.
    pub fn natural_range(self) -> RangeType {
        match self {
            Family::P | Family::CondP => RangeType::P,
            _ => RangeType::O,
        }
    }

    /// Ranges a coefficient of this family may be rendered in.
    pub fn allowed_ranges(self) -> &'static [RangeType] {
        match self {
            Family::P | Family::CondP => &[RangeType::P],
            Family::O | Family::CondO => &[RangeType::O],
            _ => &[RangeType::O, RangeType::S],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::P => "P",
            Family::O => "O",
            Family::CondP => "CondP",
            Family::CondO => "CondO",
            Family::QOdds => "QOdds",
            Family::QProb => "QProb",
            Family::FOdds => "FOdds",
            Family::FProb => "FProb",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Family::P => "probability",
            Family::O => "odds",
            Family::CondP => "conditional probability",
            Family::CondO => "conditional odds",
            Family::QOdds => "Quetelet odds ratio",
            Family::QProb => "Quetelet probability ratio",
            Family::FOdds => "de Finetti odds ratio",
            Family::FProb => "de Finetti probability ratio",
        }
    }
}

/// A coefficient to evaluate: family, arguments, rendering range.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoeffSpec {
    pub family: Family,
    pub a: BoolExpr,
    pub b: Option<BoolExpr>,
    pub range: RangeType,
}

impl CoeffSpec {
    pub fn new(family: Family, a: BoolExpr, b: Option<BoolExpr>, range: RangeType) -> Result<Self> {
        if b.is_some() != (family.arity() == 2) {
            return Err(Error::Domain(format!(
                "{} takes {} argument(s)",
                family.description(),
                family.arity()
            )));
        }
        if !family.allowed_ranges().contains(&range) {
            return Err(Error::Domain(format!(
                "{} has no {range}-type rendering",
                family.description()
            )));
        }
        Ok(CoeffSpec { family, a, b, range })
    }

    /// Single-event probability in its natural range.
    pub fn prob(a: BoolExpr) -> Self {
        CoeffSpec { family: Family::P, a, b: None, range: RangeType::P }
    }

    /// Two-argument family in its natural range.
    pub fn pair(family: Family, a: BoolExpr, b: BoolExpr) -> Self {
        assert_eq!(family.arity(), 2, "{family:?} is a one-argument family");
        CoeffSpec { family, a, b: Some(b), range: family.natural_range() }
    }

    pub fn with_range(mut self, range: RangeType) -> Result<Self> {
        if !self.family.allowed_ranges().contains(&range) {
            return Err(Error::Domain(format!(
                "{} has no {range}-type rendering",
                self.family.description()
            )));
        }
        self.range = range;
        Ok(self)
    }

    /// Surface name of the coefficient, e.g. `P`, `Q`, `QS`.
    pub fn symbol(&self) -> &'static str {
        let s = self.range == RangeType::S;
        match self.family {
            Family::P | Family::CondP => "P",
            Family::O | Family::CondO => "O",
            Family::QOdds | Family::QProb if s => "QS",
            Family::QOdds | Family::QProb => "Q",
            Family::FOdds | Family::FProb if s => "FS",
            Family::FOdds | Family::FProb => "F",
        }
    }

    fn separator(&self) -> &'static str {
        match self.family {
            Family::QProb | Family::FProb => ":",
            _ => "|",
        }
    }

    /// Evaluates the coefficient on `dist` in the requested range.
    pub fn evaluate(&self, dist: &Distribution, table: &EventTable) -> Result<ExtReal> {
        let ma = atoms_of(&self.a, table)?;
        check_len(dist, &[&ma])?;
        let raw = match (&self.b, self.family) {
            (None, Family::P) => ExtReal::Finite(prob(dist, &ma)?),
            (None, Family::O) => {
                let p = prob(dist, &ma)?;
                ratio(p, prob(dist, &ma.complement())?)
            }
            (Some(b), family) => {
                let mb = atoms_of(b, table)?;
                let t = Table2x2::from_masks(dist, &ma, &mb)?;
                match family {
                    Family::CondP => t.cond_p(),
                    Family::CondO => t.cond_o(),
                    Family::QOdds => t.q_odds(),
                    Family::QProb => t.q_prob(),
                    Family::FOdds => t.f_odds(),
                    Family::FProb => t.f_prob(),
                    Family::P | Family::O => unreachable!("arity checked on construction"),
                }
            }
            (None, _) => unreachable!("arity checked on construction"),
        };
        convert(raw, self.family.natural_range(), self.range)
    }
}

impl fmt::Display for CoeffSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.b {
            None => write!(f, "{}({})", self.symbol(), self.a),
            Some(b) => write!(f, "{}({}{}{})", self.symbol(), self.a, self.separator(), b),
        }
    }
}

/// A coefficient together with its value.
#[derive(Debug, Clone, PartialEq)]
pub struct Coefficient {
    pub spec: CoeffSpec,
    pub value: ExtReal,
}

/// Evaluates the full coefficient block for the pair `(a, b)`.
pub fn coefficient_report(
    dist: &Distribution,
    table: &EventTable,
    a: &BoolExpr,
    b: &BoolExpr,
) -> Result<Vec<Coefficient>> {
    let na = a.clone().not();
    let nb = b.clone().not();
    let mut specs = vec![
        CoeffSpec::prob(a.clone()),
        CoeffSpec::prob(b.clone()),
        CoeffSpec { family: Family::O, a: a.clone(), b: None, range: RangeType::O },
        CoeffSpec { family: Family::O, a: b.clone(), b: None, range: RangeType::O },
    ];
    for family in [Family::CondP, Family::CondO] {
        specs.push(CoeffSpec::pair(family, a.clone(), b.clone()));
        specs.push(CoeffSpec::pair(family, a.clone(), nb.clone()));
        specs.push(CoeffSpec::pair(family, b.clone(), a.clone()));
        specs.push(CoeffSpec::pair(family, b.clone(), na.clone()));
    }
    for family in [Family::QOdds, Family::QProb, Family::FOdds, Family::FProb] {
        let spec = CoeffSpec::pair(family, a.clone(), b.clone());
        specs.push(spec.clone());
        specs.push(spec.with_range(RangeType::S)?);
    }
    specs
        .into_iter()
        .map(|spec| {
            let value = spec.evaluate(dist, table)?;
            Ok(Coefficient { spec, value })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::dist_from_2x2;

    fn ab() -> EventTable {
        EventTable::new(["A", "B"]).unwrap()
    }

    fn masks() -> (AtomMask, AtomMask) {
        let t = ab();
        (
            atoms_of(&BoolExpr::event("A"), &t).unwrap(),
            atoms_of(&BoolExpr::event("B"), &t).unwrap(),
        )
    }

    fn close(v: ExtReal, expected: f64) -> bool {
        v.finite().is_some_and(|x| (x - expected).abs() < 1e-12)
    }

    #[test]
    fn conditional_probability() {
        let (a, b) = masks();
        let u = Distribution::uniform(4).unwrap();
        assert!(close(cond_p(&u, &a, &b).unwrap(), 0.5));
        let d = dist_from_2x2(0.4, 0.1, 0.2, 0.3).unwrap();
        assert!(close(cond_p(&d, &a, &b).unwrap(), 2.0 / 3.0));
        let zero_b = dist_from_2x2(0.0, 0.5, 0.0, 0.5).unwrap();
        assert_eq!(cond_p(&zero_b, &a, &b).unwrap(), ExtReal::Undefined);
    }

    #[test]
    fn conditional_odds() {
        let (a, b) = masks();
        let d = dist_from_2x2(0.4, 0.1, 0.2, 0.3).unwrap();
        assert!(close(cond_o(&d, &a, &b).unwrap(), 2.0));
        assert!(close(cond_o(&Distribution::uniform(4).unwrap(), &a, &b).unwrap(), 1.0));
        let d = dist_from_2x2(0.5, 0.5, 0.0, 0.0).unwrap();
        assert_eq!(cond_o(&d, &a, &b).unwrap(), ExtReal::PosInf);
    }

    #[test]
    fn quetelet_odds_ratio() {
        let (a, b) = masks();
        let d = dist_from_2x2(0.4, 0.1, 0.2, 0.3).unwrap();
        assert!(close(q_odds(&d, &a, &b).unwrap(), 6.0));
        let (pa, pb) = (0.3, 0.5);
        let prod = dist_from_2x2(pa * pb, pa * (1.0 - pb), (1.0 - pa) * pb, (1.0 - pa) * (1.0 - pb)).unwrap();
        assert!(close(q_odds(&prod, &a, &b).unwrap(), 1.0));
    }

    #[test]
    fn quetelet_probability_ratio() {
        let (a, b) = masks();
        let d = dist_from_2x2(0.4, 0.1, 0.2, 0.3).unwrap();
        assert!(close(q_prob(&d, &a, &b).unwrap(), 8.0 / 3.0));
        assert!(close(q_prob(&Distribution::uniform(4).unwrap(), &a, &b).unwrap(), 1.0));
    }

    #[test]
    fn de_finetti_ratios() {
        let (a, b) = masks();
        let d = dist_from_2x2(0.4, 0.1, 0.2, 0.3).unwrap();
        assert!(close(f_odds(&d, &a, &b).unwrap(), 0.5));
        assert!(close(f_prob(&d, &a, &b).unwrap(), 5.0 / 6.0));
        let sym = dist_from_2x2(0.3, 0.2, 0.2, 0.3).unwrap();
        assert!(close(f_odds(&sym, &a, &b).unwrap(), 1.0));
        assert!(close(f_prob(&sym, &a, &b).unwrap(), 1.0));
        assert_eq!(f_odds(&d, &a, &a).unwrap(), ExtReal::Undefined);
    }

    #[test]
    fn conversion_examples() {
        use RangeType::*;
        let f = ExtReal::Finite;
        assert_eq!(convert(f(0.5), P, O).unwrap(), f(1.0));
        assert_eq!(convert(f(1.0), O, S).unwrap(), f(0.0));
        assert_eq!(convert(f(3.0), O, P).unwrap(), f(0.75));
        assert_eq!(convert(f(3.0), O, S).unwrap(), f(0.5));
        assert_eq!(convert(ExtReal::PosInf, O, S).unwrap(), f(1.0));
        assert_eq!(convert(f(1.0), P, O).unwrap(), ExtReal::PosInf);
        assert_eq!(convert(f(1.0), S, O).unwrap(), ExtReal::PosInf);
        assert_eq!(convert(f(0.0), P, S).unwrap(), f(-1.0));
        assert_eq!(convert(f(-1.0), S, O).unwrap(), f(0.0));
        assert_eq!(convert(ExtReal::Undefined, O, S).unwrap(), ExtReal::Undefined);
        assert!(convert(f(1.5), P, O).is_err());
        assert!(convert(f(-0.1), O, P).is_err());
        assert!(convert(f(-1.5), S, P).is_err());
        assert!(convert(ExtReal::PosInf, P, O).is_err());
    }

    #[test]
    fn report_for_uniform_table() {
        let t = ab();
        let u = Distribution::uniform(4).unwrap();
        let report = coefficient_report(&u, &t, &BoolExpr::event("A"), &BoolExpr::event("B")).unwrap();
        for c in &report {
            match (c.spec.family, c.spec.range) {
                (Family::QOdds | Family::QProb | Family::FOdds | Family::FProb, RangeType::O) => {
                    assert!(close(c.value, 1.0), "{} = {}", c.spec, c.value)
                }
                (_, RangeType::S) => assert!(close(c.value, 0.0), "{} = {}", c.spec, c.value),
                _ => {}
            }
        }
    }

    #[test]
    fn report_for_skewed_table() {
        let t = ab();
        let d = dist_from_2x2(0.4, 0.1, 0.2, 0.3).unwrap();
        let report = coefficient_report(&d, &t, &BoolExpr::event("A"), &BoolExpr::event("B")).unwrap();
        let find = |s: &str| report.iter().find(|c| c.spec.to_string() == s).unwrap().value;
        assert!(close(find("Q(A|B)"), 6.0));
        assert!(close(find("QS(A|B)"), 5.0 / 7.0));
        assert!(close(find("F(A|B)"), 0.5));
        assert!(close(find("F(A:B)"), 5.0 / 6.0));
        assert!(close(find("P(B|-A)"), 0.4));
        assert_eq!(report.len(), 20);
    }

    #[test]
    fn spec_validation() {
        let a = BoolExpr::event("A");
        assert!(CoeffSpec::new(Family::CondP, a.clone(), None, RangeType::P).is_err());
        assert!(CoeffSpec::new(Family::P, a.clone(), None, RangeType::S).is_err());
        assert!(CoeffSpec::new(Family::QOdds, a.clone(), Some(a.clone()), RangeType::P).is_err());
        assert!(CoeffSpec::new(Family::QOdds, a.clone(), Some(a), RangeType::S).is_ok());
    }

    #[test]
    fn sig_formatting() {
        assert_eq!(format_sig(2.9999999999999996), "3");
        assert_eq!(format_sig(5.0 / 6.0), "0.8333333333");
        assert_eq!(format_sig(0.29999999999999993), "0.3");
        assert_eq!(format_sig(f64::INFINITY), "inf");
        assert_eq!(format_sig(-0.0), "0");
        assert_eq!(format_sig(1e-12), "1e-12");
        assert_eq!(format_sig(0.000125), "0.000125");
    }
}
