//! Bounds on coefficients over the set of distributions satisfying a
//! constraint system.
//!
//! Linear queries are answered by two simplex solves, ratios of linear forms
//! by the Charnes-Cooper substitution, and everything involving products of
//! linear forms by a multi-start local search that reports an inner
//! approximation unless an outer relaxation bound coincides with it.

mod search;

use std::fmt;

use rayon::prelude::*;

use crate::coefficients::{convert, CoeffSpec, ExtReal, Family, RangeType};
use crate::constraints::{
    normalize, split, AtomicConstraint, BilinearConstraint, CellForms, ConstraintRel, LinearConstraint, LinearForm,
    DEFAULT_EPS_COND,
};
use crate::dsl::Program;
use crate::error::{Error, Result};
use crate::partition::{atoms_of, Distribution, EventTable};
use crate::simplex::{self, Outcome, Problem, Row, RowKind, Tolerances};

pub use search::SearchStats;

/// Agreement needed between the inner search and the outer relaxation
/// bound before a nonconvex interval is reported as exact.
const CERTIFY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub eps_cond: f64,
    pub seed: u64,
    pub starts: usize,
    /// Penalty rounds of the local search.
    pub rounds: usize,
    pub initial_penalty: f64,
    pub penalty_growth: f64,
    /// Trust-region iterations per penalty round.
    pub max_local_iters: usize,
    pub lp: Tolerances,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            eps_cond: DEFAULT_EPS_COND,
            seed: 42,
            starts: 64,
            rounds: 5,
            initial_penalty: 10.0,
            penalty_growth: 10.0,
            max_local_iters: 60,
            lp: Tolerances::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Exact,
    InnerApprox,
    Infeasible,
    UndefinedQuery,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Exact => "EXACT",
            Status::InnerApprox => "INNER_APPROX",
            Status::Infeasible => "INFEASIBLE",
            Status::UndefinedQuery => "UNDEFINED_QUERY",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Answer to a query. `lo`/`hi` are NaN for infeasible and undefined
/// queries and may be `+inf` for odds-type coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub status: Status,
    /// Distributions attaining `lo` and `hi`.
    pub witnesses: Option<(Distribution, Distribution)>,
}

impl Interval {
    pub fn infeasible() -> Self {
        Interval { lo: f64::NAN, hi: f64::NAN, status: Status::Infeasible, witnesses: None }
    }

    pub fn undefined() -> Self {
        Interval { lo: f64::NAN, hi: f64::NAN, status: Status::UndefinedQuery, witnesses: None }
    }

    pub fn has_bounds(&self) -> bool {
        matches!(self.status, Status::Exact | Status::InnerApprox)
    }

    fn map(self, f: impl Fn(f64) -> Result<f64>) -> Result<Self> {
        if !self.has_bounds() {
            return Ok(self);
        }
        Ok(Interval { lo: f(self.lo)?, hi: f(self.hi)?, ..self })
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use crate::coefficients::format_sig;
        if self.has_bounds() {
            write!(f, "[{}, {}] {}", format_sig(self.lo), format_sig(self.hi), self.status)
        } else {
            write!(f, "{}", self.status)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Min,
    Max,
}

/// Linear program over the atom probabilities of a product partition.
/// `p >= 0` and `sum(p) = 1` are implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgramSpec {
    pub objective: LinearForm,
    pub sense: Sense,
    pub constraints: Vec<LinearConstraint>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpSolution {
    Optimal { value: f64, point: Vec<f64> },
    Infeasible,
    Unbounded,
}

fn constraint_row(c: &LinearConstraint, extra: usize) -> Row {
    let mut coeffs = c.coeffs.0.clone();
    coeffs.resize(coeffs.len() + extra, 0.0);
    let kind = match c.relation {
        ConstraintRel::Eq => RowKind::Eq,
        ConstraintRel::Ge => RowKind::Ge,
    };
    Row::new(coeffs, kind, c.rhs)
}

fn simplex_rows(dim: usize, constraints: &[LinearConstraint]) -> Result<Vec<Row>> {
    let mut rows = Vec::with_capacity(constraints.len() + 1);
    for c in constraints {
        if c.coeffs.dim() != dim {
            return Err(Error::Dimension { expected: dim, found: c.coeffs.dim() });
        }
        rows.push(constraint_row(c, 0));
    }
    rows.push(Row::new(vec![1.0; dim], RowKind::Eq, 1.0));
    Ok(rows)
}

/// Solves a linear program over the probability simplex.
pub fn simplex_solve(lp: &LinearProgramSpec, tol: &Tolerances) -> Result<LpSolution> {
    let dim = lp.objective.dim();
    let sign = if lp.sense == Sense::Min { 1.0 } else { -1.0 };
    let problem = Problem { objective: lp.objective.scale(sign).0, rows: simplex_rows(dim, &lp.constraints)? };
    Ok(match simplex::solve(&problem, tol)? {
        Outcome::Optimal { value, x } => LpSolution::Optimal { value: sign * value, point: x },
        Outcome::Infeasible => LpSolution::Infeasible,
        Outcome::Unbounded => LpSolution::Unbounded,
    })
}

fn optimum(lp: &LinearProgramSpec, tol: &Tolerances) -> Result<Option<(f64, Vec<f64>)>> {
    match simplex_solve(lp, tol)? {
        LpSolution::Optimal { value, point } => Ok(Some((value, point))),
        LpSolution::Infeasible => Ok(None),
        LpSolution::Unbounded => {
            Err(Error::NumericFailure("unbounded linear program over the probability simplex".into()))
        }
    }
}

/// A feasible point of the linear system, if one exists.
pub fn linear_feasible_point(
    dim: usize,
    constraints: &[LinearConstraint],
    tol: &Tolerances,
) -> Result<Option<Vec<f64>>> {
    let lp = LinearProgramSpec { objective: LinearForm::zero(dim), sense: Sense::Min, constraints: constraints.to_vec() };
    Ok(optimum(&lp, tol)?.map(|(_, p)| p))
}

/// Largest value of `min_k g_k(p)` over the linear feasible set, where the
/// guards read `g_k(p) >= eps`. Deciding `margin >= eps` this way does not
/// lean on the LP feasibility tolerance, which is as large as `eps` itself.
fn guard_margin(dim: usize, constraints: &[LinearConstraint], guards: &[LinearConstraint], tol: &Tolerances) -> Result<f64> {
    if guards.is_empty() {
        return Ok(f64::INFINITY);
    }
    let mut rows: Vec<Row> = constraints.iter().map(|c| constraint_row(c, 1)).collect();
    let mut total = vec![1.0; dim + 1];
    total[dim] = 0.0;
    rows.push(Row::new(total, RowKind::Eq, 1.0));
    for g in guards {
        let mut row = constraint_row(g, 1);
        row.coeffs[dim] = -1.0;
        row.rhs = 0.0;
        rows.push(row);
    }
    let mut objective = vec![0.0; dim + 1];
    objective[dim] = -1.0;
    match simplex::solve(&Problem { objective, rows }, tol)? {
        Outcome::Optimal { value, .. } => Ok(-value),
        Outcome::Infeasible => Ok(f64::NEG_INFINITY),
        Outcome::Unbounded => Err(Error::NumericFailure("unbounded guard program".into())),
    }
}

/// Exact bounds of a linear form over a linear constraint system.
pub fn bounds_linear(query: &LinearForm, constraints: &[LinearConstraint], cfg: &SolverConfig) -> Result<Interval> {
    let mut lp = LinearProgramSpec { objective: query.clone(), sense: Sense::Min, constraints: constraints.to_vec() };
    let Some((lo, p_lo)) = optimum(&lp, &cfg.lp)? else { return Ok(Interval::infeasible()) };
    lp.sense = Sense::Max;
    let Some((hi, p_hi)) = optimum(&lp, &cfg.lp)? else { return Ok(Interval::infeasible()) };
    Ok(Interval {
        lo,
        hi: hi.max(lo),
        status: Status::Exact,
        witnesses: Some((Distribution::from_point(&p_lo)?, Distribution::from_point(&p_hi)?)),
    })
}

/// One side of the Charnes-Cooper program: optimizes `num.u` subject to
/// `den.u = 1`, `sum(u) = t`, homogenized constraints, and `den.p >= eps`.
fn charnes_cooper(
    num: &LinearForm,
    den: &LinearForm,
    constraints: &[LinearConstraint],
    sense: Sense,
    cfg: &SolverConfig,
) -> Result<Option<(f64, Vec<f64>)>> {
    let dim = num.dim();
    let width = dim + 1;
    let mut rows = Vec::with_capacity(constraints.len() + 3);
    for c in constraints {
        let mut row = constraint_row(c, 1);
        row.coeffs[dim] = -c.rhs;
        row.rhs = 0.0;
        rows.push(row);
    }
    let mut total = vec![1.0; width];
    total[dim] = -1.0;
    rows.push(Row::new(total, RowKind::Eq, 0.0));
    let mut scale = den.0.clone();
    scale.push(0.0);
    rows.push(Row::new(scale, RowKind::Eq, 1.0));
    let mut guard = vec![0.0; width];
    guard[dim] = cfg.eps_cond;
    rows.push(Row::new(guard, RowKind::Le, 1.0));

    let sign = if sense == Sense::Min { 1.0 } else { -1.0 };
    let mut objective = num.scale(sign).0;
    objective.push(0.0);
    match simplex::solve(&Problem { objective, rows }, &cfg.lp)? {
        Outcome::Optimal { value, x } => {
            let t = x[dim];
            if t <= 0.0 {
                return Err(Error::NumericFailure("Charnes-Cooper scale variable vanished".into()));
            }
            let p: Vec<f64> = x[..dim].iter().map(|u| u / t).collect();
            Ok(Some((sign * value, p)))
        }
        Outcome::Infeasible => Ok(None),
        Outcome::Unbounded => Err(Error::NumericFailure("unbounded linear-fractional program".into())),
    }
}

/// Exact bounds of `num / den` over a linear constraint system, with
/// `den >= eps_cond` enforced.
pub fn bounds_fractional(
    num: &LinearForm,
    den: &LinearForm,
    constraints: &[LinearConstraint],
    cfg: &SolverConfig,
) -> Result<Interval> {
    let dim = num.dim();
    let Some(_) = linear_feasible_point(dim, constraints, &cfg.lp)? else { return Ok(Interval::infeasible()) };
    let lp = LinearProgramSpec { objective: den.clone(), sense: Sense::Max, constraints: constraints.to_vec() };
    let Some((den_max, _)) = optimum(&lp, &cfg.lp)? else { return Ok(Interval::infeasible()) };
    if den_max < cfg.eps_cond {
        return Ok(Interval::undefined());
    }
    let Some((lo, p_lo)) = charnes_cooper(num, den, constraints, Sense::Min, cfg)? else {
        return Ok(Interval::undefined());
    };
    let Some((hi, p_hi)) = charnes_cooper(num, den, constraints, Sense::Max, cfg)? else {
        return Ok(Interval::undefined());
    };
    Ok(Interval {
        lo,
        hi: hi.max(lo),
        status: Status::Exact,
        witnesses: Some((Distribution::from_point(&p_lo)?, Distribution::from_point(&p_hi)?)),
    })
}

/// Query value as a smooth function of the atom probabilities, scaled
/// into `[0, 1]`. Odds-type coefficients `r` are handled as `r / (1 + r)`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Objective {
    Linear(LinearForm),
    Ratio { num: LinearForm, den: LinearForm },
    /// `(n1 n2) / (n1 n2 + d1 d2)`
    ProductRatio { n: (LinearForm, LinearForm), d: (LinearForm, LinearForm) },
}

impl Objective {
    pub fn value(&self, p: &[f64]) -> Option<f64> {
        match self {
            Objective::Linear(l) => Some(l.eval(p)),
            Objective::Ratio { num, den } => {
                let d = den.eval(p);
                (d > 0.0).then(|| num.eval(p) / d)
            }
            Objective::ProductRatio { n, d } => {
                let nv = n.0.eval(p) * n.1.eval(p);
                let dv = d.0.eval(p) * d.1.eval(p);
                (nv + dv > 0.0).then(|| nv / (nv + dv))
            }
        }
    }

    pub fn gradient(&self, p: &[f64]) -> Option<Vec<f64>> {
        match self {
            Objective::Linear(l) => Some(l.0.clone()),
            Objective::Ratio { num, den } => {
                let (nv, dv) = (num.eval(p), den.eval(p));
                if dv <= 0.0 {
                    return None;
                }
                Some(num.0.iter().zip(&den.0).map(|(a, b)| (dv * a - nv * b) / (dv * dv)).collect())
            }
            Objective::ProductRatio { n, d } => {
                let (n1, n2) = (n.0.eval(p), n.1.eval(p));
                let (d1, d2) = (d.0.eval(p), d.1.eval(p));
                let (nv, dv) = (n1 * n2, d1 * d2);
                let s = nv + dv;
                if s <= 0.0 {
                    return None;
                }
                Some(
                    (0..p.len())
                        .map(|i| {
                            let dn = n.0 .0[i] * n2 + n1 * n.1 .0[i];
                            let dd = d.0 .0[i] * d2 + d1 * d.1 .0[i];
                            (dv * dn - nv * dd) / (s * s)
                        })
                        .collect(),
                )
            }
        }
    }
}

/// Building blocks of a Quetelet coefficient for the outer bound:
/// `p1 = P(a|b)`, `p2 = P(a|-b)`.
#[derive(Debug, Clone, PartialEq)]
struct QuetComponents {
    odds: bool,
    p1: (LinearForm, LinearForm),
    p2: (LinearForm, LinearForm),
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct CompiledQuery {
    objective: Objective,
    /// Whether the objective is the `r / (1 + r)` image of an odds value.
    odds_scaled: bool,
    /// Constraints a point must meet for the query to be defined.
    guards: Vec<LinearConstraint>,
    quetelet: Option<QuetComponents>,
    /// The query in its natural range, for evaluating witnesses.
    natural: CoeffSpec,
    table: EventTable,
}

impl CompiledQuery {
    fn dim(&self) -> usize {
        match &self.objective {
            Objective::Linear(l) => l.dim(),
            Objective::Ratio { num, .. } => num.dim(),
            Objective::ProductRatio { n, .. } => n.0.dim(),
        }
    }
}

pub(crate) fn compile_query(spec: &CoeffSpec, table: &EventTable, eps: f64) -> Result<CompiledQuery> {
    if let Some(name) = spec.a.first_unknown(table).or(spec.b.as_ref().and_then(|b| b.first_unknown(table))) {
        return Err(Error::UnknownEvent(name.to_string()));
    }
    let natural = spec.clone().with_range(spec.family.natural_range())?;
    let compiled = |objective, odds_scaled, guards, quetelet| CompiledQuery {
        objective,
        odds_scaled,
        guards,
        quetelet,
        natural: natural.clone(),
        table: table.clone(),
    };
    let a = atoms_of(&spec.a, table)?;
    let guard = |f: &LinearForm| LinearConstraint::ge(f.clone(), eps);
    let Some(b) = &spec.b else {
        let objective = Objective::Linear(LinearForm::from_mask(&a));
        return Ok(compiled(objective, spec.family == Family::O, Vec::new(), None));
    };
    let cells = CellForms::new(&a, &atoms_of(b, table)?);
    let ratio = |num: LinearForm, den: LinearForm, odds: bool, mut guards: Vec<LinearConstraint>| {
        guards.push(guard(&den));
        compiled(Objective::Ratio { num, den }, odds, guards, None)
    };
    Ok(match spec.family {
        Family::CondP => ratio(cells.x.clone(), cells.p_b(), false, vec![]),
        Family::CondO => ratio(cells.x.clone(), cells.p_b(), true, vec![]),
        Family::FOdds => ratio(cells.y.clone(), cells.y.add_scaled(1.0, &cells.z), true, vec![]),
        Family::FProb => {
            let pa = cells.p_a();
            let den = pa.add_scaled(1.0, &cells.p_b());
            // F(a:b) reduces to P(a)/P(b) only where P(a & b) > 0
            ratio(pa, den, true, vec![guard(&cells.x)])
        }
        Family::QOdds | Family::QProb => {
            let guards = [&cells.x, &cells.y, &cells.z, &cells.w].into_iter().map(guard).collect();
            let odds = spec.family == Family::QOdds;
            let objective = if odds {
                Objective::ProductRatio { n: (cells.x.clone(), cells.w.clone()), d: (cells.y.clone(), cells.z.clone()) }
            } else {
                Objective::ProductRatio { n: (cells.x.clone(), cells.p_not_b()), d: (cells.y.clone(), cells.p_b()) }
            };
            let parts = QuetComponents { odds, p1: (cells.x.clone(), cells.p_b()), p2: (cells.y.clone(), cells.p_not_b()) };
            compiled(objective, true, guards, Some(parts))
        }
        Family::P | Family::O => unreachable!("one-argument families have no second argument"),
    })
}

/// Outer bound over the linear constraints alone, in the query's natural range.
fn outer_bound(query: &CompiledQuery, linear: &[LinearConstraint], cfg: &SolverConfig) -> Result<Option<(f64, f64)>> {
    let finite = |iv: Interval| iv.has_bounds().then_some((iv.lo, iv.hi));
    let scaled = match &query.objective {
        Objective::Linear(l) => finite(bounds_linear(l, linear, cfg)?),
        Objective::Ratio { num, den } => finite(bounds_fractional(num, den, linear, cfg)?),
        Objective::ProductRatio { .. } => {
            let Some(q) = &query.quetelet else { return Ok(None) };
            let Some((p1lo, p1hi)) = finite(bounds_fractional(&q.p1.0, &q.p1.1, linear, cfg)?) else {
                return Ok(None);
            };
            let Some((p2lo, p2hi)) = finite(bounds_fractional(&q.p2.0, &q.p2.1, linear, cfg)?) else {
                return Ok(None);
            };
            let odds = |p: f64| p / (1.0 - p);
            let bounds = if q.odds {
                (odds(p1lo) / odds(p2hi), odds(p1hi) / odds(p2lo))
            } else {
                (p1lo / p2hi, p1hi / p2lo)
            };
            return Ok((bounds.0.is_finite() && bounds.1.is_finite()).then_some(bounds));
        }
    };
    Ok(scaled.map(|(lo, hi)| {
        if query.odds_scaled {
            (odds_from_scaled(lo), odds_from_scaled(hi))
        } else {
            (lo, hi)
        }
    }))
}

fn agrees(a: f64, b: f64) -> bool {
    a == b || (a.is_finite() && b.is_finite() && (a - b).abs() <= CERTIFY_TOL * a.abs().max(b.abs()).max(1.0))
}

/// Bounds of a query whose objective or constraints are not linear, in the
/// query's natural range.
///
/// Runs the multi-start local search; the result is exact only when the
/// linear relaxation's outer bound agrees with the search's extremes.
pub(crate) fn bounds_nonconvex(
    query: &CompiledQuery,
    linear: &[LinearConstraint],
    bilinear: &[BilinearConstraint],
    cfg: &SolverConfig,
) -> Result<Interval> {
    let problem = search::SearchProblem { dim: query.dim(), linear, bilinear };
    let Some(found) = search::extremes(&problem, &query.objective, cfg)? else {
        return Ok(Interval::infeasible());
    };
    let w_lo = Distribution::from_point(&found.lo.point)?;
    let w_hi = Distribution::from_point(&found.hi.point)?;
    let natural = |w: &Distribution, t: f64| -> Result<f64> {
        Ok(match query.natural.evaluate(w, &query.table)? {
            ExtReal::Finite(v) => v,
            ExtReal::PosInf => f64::INFINITY,
            // the search only keeps points where the objective is defined
            ExtReal::Undefined => if query.odds_scaled { odds_from_scaled(t) } else { t },
        })
    };
    let (lo, hi) = (natural(&w_lo, found.lo.value)?, natural(&w_hi, found.hi.value)?);
    let mut interval = Interval { lo, hi: hi.max(lo), status: Status::InnerApprox, witnesses: Some((w_lo, w_hi)) };
    if let Some((olo, ohi)) = outer_bound(query, linear, cfg)? {
        if agrees(olo, interval.lo) && agrees(ohi, interval.hi) {
            interval.status = Status::Exact;
        }
    }
    Ok(interval)
}

fn odds_from_scaled(t: f64) -> f64 {
    if 1.0 - t <= 1e-15 {
        f64::INFINITY
    } else {
        (t / (1.0 - t)).max(0.0)
    }
}

/// Bounds for one coefficient under the normalized constraint system.
pub fn solve_query(
    spec: &CoeffSpec,
    table: &EventTable,
    constraints: &[AtomicConstraint],
    cfg: &SolverConfig,
) -> Result<Interval> {
    let (linear, bilinear) = split(constraints);
    let dim = table.num_atoms();
    if linear_feasible_point(dim, &linear, &cfg.lp)?.is_none() {
        return Ok(Interval::infeasible());
    }
    let query = compile_query(spec, table, cfg.eps_cond)?;
    if guard_margin(dim, &linear, &query.guards, &cfg.lp)? < cfg.eps_cond {
        return Ok(Interval::undefined());
    }
    let mut guarded = linear.clone();
    guarded.extend(query.guards.iter().cloned());
    let in_natural = match (&query.objective, bilinear.is_empty()) {
        (Objective::Linear(l), true) => bounds_linear(l, &guarded, cfg)?,
        (Objective::Ratio { num, den }, true) => bounds_fractional(num, den, &guarded, cfg)?,
        _ => return finish(bounds_nonconvex(&query, &guarded, &bilinear, cfg)?, &query, spec.range),
    };
    let in_natural = if query.odds_scaled { in_natural.map(|t| Ok(odds_from_scaled(t)))? } else { in_natural };
    finish(in_natural, &query, spec.range)
}

/// Clamps round-off and converts from the natural range to `range`.
fn finish(interval: Interval, query: &CompiledQuery, range: RangeType) -> Result<Interval> {
    let from = query.natural.range;
    interval.map(|v| {
        let clamped = if from == RangeType::P { v.clamp(0.0, 1.0) } else { v.max(0.0) };
        Ok(convert(ExtReal::from_f64(clamped), from, range)?.to_f64())
    })
}

/// Normalizes every declaration of `program`.
pub fn normalize_program(program: &Program, eps_cond: f64) -> Result<Vec<AtomicConstraint>> {
    let mut out = Vec::new();
    for d in &program.declarations {
        out.extend(normalize(d, &program.events, eps_cond)?);
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct QueryAnswer {
    pub query: CoeffSpec,
    pub result: Result<Interval>,
}

/// Answers every query of `program`, in program order.
pub fn answer_query(program: &Program, cfg: &SolverConfig) -> Result<Vec<QueryAnswer>> {
    let constraints = normalize_program(program, cfg.eps_cond)?;
    Ok(program
        .queries
        .par_iter()
        .map(|q| QueryAnswer { query: q.clone(), result: solve_query(q, &program.events, &constraints, cfg) })
        .collect())
}

/// Result of a feasibility check.
#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility {
    Feasible(Distribution),
    /// Indices of declarations forming an infeasible linear subsystem.
    Infeasible { subsystem: Vec<usize> },
}

/// Deletion filter over the declarations: returns a subset whose linear
/// parts are infeasible and from which no single declaration can be dropped.
pub fn infeasible_subsystem(program: &Program, cfg: &SolverConfig) -> Result<Option<Vec<usize>>> {
    let dim = program.events.num_atoms();
    let per_decl: Vec<Vec<LinearConstraint>> = program
        .declarations
        .iter()
        .map(|d| Ok(split(&normalize(d, &program.events, cfg.eps_cond)?).0))
        .collect::<Result<_>>()?;
    let gather = |keep: &[usize]| keep.iter().flat_map(|&i| per_decl[i].iter().cloned()).collect::<Vec<_>>();
    let mut keep: Vec<usize> = (0..per_decl.len()).collect();
    if linear_feasible_point(dim, &gather(&keep), &cfg.lp)?.is_some() {
        return Ok(None);
    }
    let mut i = 0;
    while i < keep.len() {
        let mut trial = keep.clone();
        trial.remove(i);
        if linear_feasible_point(dim, &gather(&trial), &cfg.lp)?.is_none() {
            keep = trial;
        } else {
            i += 1;
        }
    }
    Ok(Some(keep))
}

/// Decides feasibility of the program's constraint system. Bilinear systems
/// with no feasible point found by the search yield
/// [`Error::UnknownFeasibility`].
pub fn check_feasibility(program: &Program, cfg: &SolverConfig) -> Result<Feasibility> {
    let constraints = normalize_program(program, cfg.eps_cond)?;
    let (linear, bilinear) = split(&constraints);
    let dim = program.events.num_atoms();
    let Some(point) = linear_feasible_point(dim, &linear, &cfg.lp)? else {
        let subsystem = infeasible_subsystem(program, cfg)?.unwrap_or_default();
        return Ok(Feasibility::Infeasible { subsystem });
    };
    if bilinear.is_empty() {
        return Ok(Feasibility::Feasible(Distribution::from_point(&point)?));
    }
    let problem = search::SearchProblem { dim, linear: &linear, bilinear: &bilinear };
    match search::extremes(&problem, &Objective::Linear(LinearForm::zero(dim)), cfg)? {
        Some(found) => Ok(Feasibility::Feasible(Distribution::from_point(&found.lo.point)?)),
        None => Ok(Feasibility::Infeasible { subsystem: Vec::new() }),
    }
}
