//! Multi-start local search for extremes of a smooth objective under
//! linear and bilinear constraints.
//!
//! Each start is a random convex combination of vertices of the linear
//! feasible set. From there a sequential linear programming method with a
//! trust region minimizes `f + mu * sum|bilinear residual|`; linear
//! constraints stay hard throughout. The l1 penalty is exact, so once `mu`
//! exceeds the multipliers the iterates land on the feasible set instead of
//! hovering near it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use rayon::prelude::*;

use super::{constraint_row, simplex_rows, Objective, SolverConfig};
use crate::constraints::{BilinearConstraint, ConstraintRel, LinearConstraint};
use crate::error::{Error, Result};
use crate::simplex::{self, Outcome, Problem, Row, RowKind};

const VERTICES_PER_START: usize = 3;
const INITIAL_RADIUS: f64 = 0.1;
const MIN_RADIUS: f64 = 1e-10;
const POLISH_ITERS: usize = 30;
/// Relative residual at which a bilinear constraint counts as satisfied.
const BILINEAR_TOL: f64 = 1e-9;
const POLISH_TOL: f64 = 1e-13;
const LINEAR_TOL: f64 = 1e-8;

pub(crate) struct SearchProblem<'a> {
    pub dim: usize,
    pub linear: &'a [LinearConstraint],
    pub bilinear: &'a [BilinearConstraint],
}

impl SearchProblem<'_> {
    fn bilinear_violation(&self, p: &[f64]) -> f64 {
        self.bilinear.iter().map(|b| b.violation(p)).sum()
    }

    fn relative_violation(&self, p: &[f64]) -> f64 {
        self.bilinear.iter().map(|b| b.relative_violation(p)).fold(0.0, f64::max)
    }

    fn is_feasible(&self, p: &[f64]) -> bool {
        p.iter().all(|v| *v >= -LINEAR_TOL)
            && (p.iter().sum::<f64>() - 1.0).abs() <= LINEAR_TOL
            && self.linear.iter().all(|c| c.violation(p) <= LINEAR_TOL)
            && self.bilinear.iter().all(|b| b.violation(p) <= BILINEAR_TOL && b.relative_violation(p) <= BILINEAR_TOL)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Candidate {
    pub value: f64,
    pub point: Vec<f64>,
}

/// Counters from one search, useful when tuning the start budget.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub starts: usize,
    pub feasible_runs: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Extremes {
    pub lo: Candidate,
    pub hi: Candidate,
    pub stats: SearchStats,
}

/// Smallest and largest objective values found over all starts. `None`
/// means the linear part alone is infeasible.
pub(crate) fn extremes(problem: &SearchProblem, objective: &Objective, cfg: &SolverConfig) -> Result<Option<Extremes>> {
    let base = simplex_rows(problem.dim, problem.linear)?;
    let starts = cfg.starts.max(1);
    let runs: Vec<Option<Vec<Candidate>>> = (0..starts)
        .into_par_iter()
        .map(|k| {
            let Some(start) = start_point(problem.dim, &base, cfg, k as u64)? else { return Ok(None) };
            let mut found = Vec::with_capacity(2);
            for sign in [1.0, -1.0] {
                if let Some(c) = local_search(problem, objective, &start, sign, cfg)? {
                    found.push(c);
                }
            }
            Ok(Some(found))
        })
        .collect::<Result<_>>()?;
    if runs.iter().any(Option::is_none) {
        return Ok(None);
    }
    let candidates: Vec<Candidate> = runs.into_iter().flatten().flatten().collect();
    let stats = SearchStats { starts, feasible_runs: candidates.len() };
    // ties go to the earliest run so results do not depend on thread timing
    let mut lo: Option<&Candidate> = None;
    let mut hi: Option<&Candidate> = None;
    for c in &candidates {
        if lo.is_none_or(|l| c.value < l.value) {
            lo = Some(c);
        }
        if hi.is_none_or(|h| c.value > h.value) {
            hi = Some(c);
        }
    }
    match (lo, hi) {
        (Some(lo), Some(hi)) => Ok(Some(Extremes { lo: lo.clone(), hi: hi.clone(), stats })),
        _ => Err(Error::UnknownFeasibility { starts }),
    }
}

fn start_point(dim: usize, base: &[Row], cfg: &SolverConfig, stream: u64) -> Result<Option<Vec<f64>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(stream);
    let mut point = vec![0.0; dim];
    let mut total = 0.0;
    for _ in 0..VERTICES_PER_START {
        let objective: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let vertex = match simplex::solve(&Problem { objective, rows: base.to_vec() }, &cfg.lp)? {
            Outcome::Optimal { x, .. } => x,
            Outcome::Infeasible => return Ok(None),
            Outcome::Unbounded => return Err(Error::NumericFailure("unbounded start-point program".into())),
        };
        let weight: f64 = rng.sample(Exp1);
        for (p, v) in point.iter_mut().zip(&vertex) {
            *p += weight * v;
        }
        total += weight;
    }
    point.iter_mut().for_each(|p| *p /= total);
    Ok(Some(point))
}

/// Penalized merit: `sign * f(p) + mu * violation(p)`.
fn merit(problem: &SearchProblem, objective: &Objective, p: &[f64], sign: f64, mu: f64) -> f64 {
    match objective.value(p) {
        Some(v) => sign * v + mu * problem.bilinear_violation(p),
        None => f64::INFINITY,
    }
}

/// Trust-region subproblem around `p`. Returns the step target and the
/// model's slack total.
fn subproblem(
    problem: &SearchProblem,
    p: &[f64],
    gradient: &[f64],
    radius: f64,
    mu: f64,
    cfg: &SolverConfig,
) -> Result<Option<(Vec<f64>, f64)>> {
    let dim = problem.dim;
    let n_slack: usize = problem
        .bilinear
        .iter()
        .map(|b| if b.relation == ConstraintRel::Eq { 2 } else { 1 })
        .sum();
    let width = dim + n_slack;
    let mut rows = Vec::with_capacity(problem.linear.len() + 2 * dim + problem.bilinear.len() + 1);
    for c in problem.linear {
        rows.push(constraint_row(c, n_slack));
    }
    let mut total = vec![0.0; width];
    total[..dim].iter_mut().for_each(|v| *v = 1.0);
    rows.push(Row::new(total, RowKind::Eq, 1.0));
    for (i, &pi) in p.iter().enumerate() {
        let mut unit = vec![0.0; width];
        unit[i] = 1.0;
        if pi - radius > 0.0 {
            rows.push(Row::new(unit.clone(), RowKind::Ge, pi - radius));
        }
        if pi + radius < 1.0 {
            rows.push(Row::new(unit, RowKind::Le, pi + radius));
        }
    }
    let mut slack = dim;
    for b in problem.bilinear {
        // g(p) + grad.(q - p) relaxed by slacks
        let grad = b.gradient(p);
        let rhs = grad.iter().zip(p).map(|(g, v)| g * v).sum::<f64>() - b.residual(p);
        let mut coeffs = grad;
        coeffs.resize(width, 0.0);
        match b.relation {
            ConstraintRel::Eq => {
                coeffs[slack] = 1.0;
                coeffs[slack + 1] = -1.0;
                slack += 2;
                rows.push(Row::new(coeffs, RowKind::Eq, rhs));
            }
            ConstraintRel::Ge => {
                coeffs[slack] = 1.0;
                slack += 1;
                rows.push(Row::new(coeffs, RowKind::Ge, rhs));
            }
        }
    }
    let mut objective = gradient.to_vec();
    objective.resize(width, mu);
    match simplex::solve(&Problem { objective, rows }, &cfg.lp) {
        Ok(Outcome::Optimal { x, .. }) => {
            let slack_total = x[dim..].iter().sum();
            let mut q = x;
            q.truncate(dim);
            Ok(Some((q, slack_total)))
        }
        Ok(_) => Ok(None),
        // a subproblem that stalls is treated as a failed step
        Err(Error::NumericFailure(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn local_search(
    problem: &SearchProblem,
    objective: &Objective,
    start: &[f64],
    sign: f64,
    cfg: &SolverConfig,
) -> Result<Option<Candidate>> {
    let mut p = start.to_vec();
    let mut mu = cfg.initial_penalty;
    let mut radius = INITIAL_RADIUS;
    for _ in 0..cfg.rounds.max(1) {
        radius = radius.max(1e-4);
        for _ in 0..cfg.max_local_iters {
            let Some(grad) = objective.gradient(&p) else { break };
            let grad: Vec<f64> = grad.iter().map(|g| sign * g).collect();
            let Some((q, slack)) = subproblem(problem, &p, &grad, radius, mu, cfg)? else { break };
            let here = merit(problem, objective, &p, sign, mu);
            let model_here = grad.iter().zip(&p).map(|(g, v)| g * v).sum::<f64>() + mu * problem.bilinear_violation(&p);
            let model_there = grad.iter().zip(&q).map(|(g, v)| g * v).sum::<f64>() + mu * slack;
            let predicted = model_here - model_there;
            if predicted <= 1e-13 * (1.0 + here.abs()) {
                break;
            }
            let actual = here - merit(problem, objective, &q, sign, mu);
            if actual >= 0.1 * predicted {
                let step = p.iter().zip(&q).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                p = q;
                if actual >= 0.75 * predicted && step >= 0.9 * radius {
                    radius = (2.0 * radius).min(1.0);
                }
            } else {
                radius *= 0.25;
                if radius < MIN_RADIUS {
                    break;
                }
            }
        }
        mu *= cfg.penalty_growth;
    }
    polish(problem, &mut p, cfg)?;
    if !problem.is_feasible(&p) {
        return Ok(None);
    }
    Ok(objective.value(&p).map(|value| Candidate { value, point: p }))
}

/// Newton-like restoration of the bilinear constraints with a small trust
/// region, so the objective barely moves.
fn polish(problem: &SearchProblem, p: &mut Vec<f64>, cfg: &SolverConfig) -> Result<()> {
    let zero = vec![0.0; problem.dim];
    for _ in 0..POLISH_ITERS {
        let violation = problem.relative_violation(p);
        if violation <= POLISH_TOL {
            break;
        }
        // a Newton step moves about residual / gradient along each constraint
        let reach = problem
            .bilinear
            .iter()
            .map(|b| {
                let g = b.gradient(p).iter().fold(0.0, |m: f64, v| m.max(v.abs()));
                b.violation(p) / g.max(1e-12)
            })
            .fold(0.0, f64::max);
        let radius = (10.0 * reach).clamp(1e-15, 0.1);
        let Some((q, _)) = subproblem(problem, p, &zero, radius, 1.0, cfg)? else { break };
        if problem.relative_violation(&q) >= violation {
            break;
        }
        *p = q;
    }
    Ok(())
}
