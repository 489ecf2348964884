//! Brute-force reference for small programs.
//!
//! Samples the probability simplex uniformly, pulls each sample onto the
//! constraint set by alternating projection, and records the range of every
//! query over the accepted points. Record-setting samples are then refined
//! by coordinate moves. Everything here is an inner approximation; zero
//! accepted samples is reported as such and never as infeasibility.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;

use crate::coefficients::{CoeffSpec, ExtReal};
use crate::constraints::{split, BilinearConstraint, ConstraintRel, LinearConstraint};
use crate::dsl::Program;
use crate::error::{Error, Result};
use crate::partition::Distribution;
use crate::solver::{normalize_program, Interval, Status};

pub const MAX_ORACLE_EVENTS: usize = 4;
const BATCH: usize = 4096;
const PROJECTION_CYCLES: usize = 500;
const INITIAL_STEP: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    pub samples: usize,
    pub seed: u64,
    pub refine_steps: usize,
    /// Constraint tolerance for accepting a sample.
    pub tol: f64,
    pub eps_cond: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            samples: 1_000_000,
            seed: 42,
            refine_steps: 100,
            tol: 1e-7,
            eps_cond: crate::constraints::DEFAULT_EPS_COND,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleAnswer {
    pub query: CoeffSpec,
    /// Accepted samples at which the query is defined.
    pub defined: usize,
    /// `None` when no accepted sample defines the query.
    pub interval: Option<Interval>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub samples: usize,
    pub accepted: usize,
    pub answers: Vec<OracleAnswer>,
}

/// Projection onto the constraint set: affine equalities through a
/// pseudo-inverse, then halfspaces, linearized bilinear constraints and the
/// nonnegative orthant, repeated.
struct Projector {
    eq: DMatrix<f64>,
    eq_rhs: DVector<f64>,
    eq_pinv: DMatrix<f64>,
    halfspaces: Vec<LinearConstraint>,
    bilinear: Vec<BilinearConstraint>,
    linear: Vec<LinearConstraint>,
    tol: f64,
}

impl Projector {
    fn new(dim: usize, linear: Vec<LinearConstraint>, bilinear: Vec<BilinearConstraint>, tol: f64) -> Result<Self> {
        let eqs: Vec<&LinearConstraint> = linear.iter().filter(|c| c.relation == ConstraintRel::Eq).collect();
        let m = eqs.len() + 1;
        let mut eq = DMatrix::zeros(m, dim);
        let mut eq_rhs = DVector::zeros(m);
        for (r, c) in eqs.iter().enumerate() {
            for (j, v) in c.coeffs.0.iter().enumerate() {
                eq[(r, j)] = *v;
            }
            eq_rhs[r] = c.rhs;
        }
        eq.row_mut(m - 1).fill(1.0);
        eq_rhs[m - 1] = 1.0;
        let eq_pinv = eq.clone().pseudo_inverse(1e-12).map_err(|e| Error::NumericFailure(e.to_string()))?;
        let halfspaces = linear.iter().filter(|c| c.relation == ConstraintRel::Ge).cloned().collect();
        Ok(Projector { eq, eq_rhs, eq_pinv, halfspaces, bilinear, linear, tol })
    }

    fn violation(&self, p: &[f64]) -> f64 {
        let neg = p.iter().fold(0.0, |m: f64, v| m.max(-v));
        let mass = (p.iter().sum::<f64>() - 1.0).abs();
        let lin = self.linear.iter().map(|c| c.violation(p)).fold(0.0, f64::max);
        let bil = self.bilinear.iter().map(|c| c.violation(p)).fold(0.0, f64::max);
        neg.max(mass).max(lin).max(bil)
    }

    fn cycle(&self, p: &mut DVector<f64>) {
        let r = &self.eq * &*p - &self.eq_rhs;
        *p -= &self.eq_pinv * r;
        for h in &self.halfspaces {
            let a = &h.coeffs.0;
            let gap = h.rhs - a.iter().zip(p.iter()).map(|(x, y)| x * y).sum::<f64>();
            let norm2: f64 = a.iter().map(|x| x * x).sum();
            if gap > 0.0 && norm2 > 0.0 {
                for (pi, ai) in p.iter_mut().zip(a) {
                    *pi += gap / norm2 * ai;
                }
            }
        }
        for b in &self.bilinear {
            let g = b.residual(p.as_slice());
            if b.relation == ConstraintRel::Ge && g >= 0.0 {
                continue;
            }
            let grad = b.gradient(p.as_slice());
            let norm2: f64 = grad.iter().map(|x| x * x).sum();
            if norm2 > 0.0 {
                for (pi, gi) in p.iter_mut().zip(&grad) {
                    *pi -= g / norm2 * gi;
                }
            }
        }
        p.iter_mut().for_each(|v| *v = v.max(0.0));
    }

    /// Projects `point`; returns it if it ends within tolerance.
    fn project(&self, point: &[f64]) -> Option<Distribution> {
        let mut p = DVector::from_column_slice(point);
        for _ in 0..PROJECTION_CYCLES {
            if self.violation(p.as_slice()) <= self.tol * 1e-3 {
                break;
            }
            self.cycle(&mut p);
        }
        if self.violation(p.as_slice()) > self.tol {
            return None;
        }
        let d = Distribution::from_point(p.as_slice()).ok()?;
        // checked again after renormalization
        (self.violation(d.as_slice()) <= self.tol).then_some(d)
    }
}

fn value_of(query: &CoeffSpec, program: &Program, d: &Distribution) -> Option<f64> {
    match query.evaluate(d, &program.events).ok()? {
        ExtReal::Finite(v) => Some(v),
        ExtReal::PosInf => Some(f64::INFINITY),
        ExtReal::Undefined => None,
    }
}

#[derive(Debug, Clone)]
struct Record {
    value: f64,
    point: Distribution,
}

/// Per query: samples defining it, running-minimum records, running-maximum records.
#[derive(Debug, Clone, Default)]
struct QueryTrace {
    defined: usize,
    lows: Vec<Record>,
    highs: Vec<Record>,
}

fn run_batch(
    program: &Program,
    projector: &Projector,
    cfg: &OracleConfig,
    batch: usize,
    count: usize,
) -> (usize, Vec<QueryTrace>) {
    let dim = program.events.num_atoms();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(batch as u64);
    let mut traces = vec![QueryTrace::default(); program.queries.len()];
    let mut accepted = 0;
    let mut raw = vec![0.0; dim];
    for _ in 0..count {
        let mut total = 0.0;
        for v in raw.iter_mut() {
            *v = rng.sample::<f64, _>(Exp1);
            total += *v;
        }
        raw.iter_mut().for_each(|v| *v /= total);
        let Some(d) = projector.project(&raw) else { continue };
        accepted += 1;
        for (q, trace) in program.queries.iter().zip(traces.iter_mut()) {
            let Some(v) = value_of(q, program, &d) else { continue };
            trace.defined += 1;
            if trace.lows.last().is_none_or(|r| v < r.value) {
                trace.lows.push(Record { value: v, point: d.clone() });
            }
            if trace.highs.last().is_none_or(|r| v > r.value) {
                trace.highs.push(Record { value: v, point: d.clone() });
            }
        }
    }
    (accepted, traces)
}

/// Coordinate moves toward and away from each vertex of the simplex,
/// halving the step whenever no move improves.
fn refine(program: &Program, projector: &Projector, query: &CoeffSpec, start: &Record, sign: f64, steps: usize) -> Record {
    let mut best = start.clone();
    let mut h = INITIAL_STEP;
    for _ in 0..steps {
        let p = best.point.as_slice().to_vec();
        let mut improved = false;
        for i in 0..p.len() {
            let toward: Vec<f64> =
                p.iter().enumerate().map(|(j, v)| (1.0 - h) * v + if i == j { h } else { 0.0 }).collect();
            let mut trials = vec![toward];
            if p[i] >= h {
                trials.push(p.iter().enumerate().map(|(j, v)| (v - if i == j { h } else { 0.0 }) / (1.0 - h)).collect());
            }
            for t in trials {
                let Some(d) = projector.project(&t) else { continue };
                let Some(v) = value_of(query, program, &d) else { continue };
                if sign * v < sign * best.value {
                    best = Record { value: v, point: d };
                    improved = true;
                }
            }
        }
        if !improved {
            h *= 0.5;
            if h < 1e-12 {
                break;
            }
        }
    }
    best
}

/// Keeps the records that also beat every earlier batch.
fn global_records(batches: &[Vec<Record>], sign: f64) -> Vec<Record> {
    let mut out: Vec<Record> = Vec::new();
    for records in batches {
        for r in records {
            if out.last().is_none_or(|b| sign * r.value < sign * b.value) {
                out.push(r.clone());
            }
        }
    }
    out
}

/// Sampled range of every query in `program`.
pub fn oracle_bounds(program: &Program, cfg: &OracleConfig) -> Result<OracleReport> {
    let n = program.events.len();
    if n > MAX_ORACLE_EVENTS {
        return Err(Error::Domain(format!("the oracle handles at most {MAX_ORACLE_EVENTS} events, program has {n}")));
    }
    if cfg.samples == 0 {
        return Err(Error::Domain("the oracle needs at least one sample".into()));
    }
    let (linear, bilinear) = split(&normalize_program(program, cfg.eps_cond)?);
    let projector = Projector::new(program.events.num_atoms(), linear, bilinear, cfg.tol)?;
    let n_batches = cfg.samples.div_ceil(BATCH);
    let batches: Vec<(usize, Vec<QueryTrace>)> = (0..n_batches)
        .into_par_iter()
        .map(|b| run_batch(program, &projector, cfg, b, BATCH.min(cfg.samples - b * BATCH)))
        .collect();
    let accepted = batches.iter().map(|(a, _)| a).sum();

    let answers = program
        .queries
        .par_iter()
        .enumerate()
        .map(|(qi, query)| {
            let defined = batches.iter().map(|(_, t)| t[qi].defined).sum();
            let lows: Vec<Vec<Record>> = batches.iter().map(|(_, t)| t[qi].lows.clone()).collect();
            let highs: Vec<Vec<Record>> = batches.iter().map(|(_, t)| t[qi].highs.clone()).collect();
            let extreme = |records: Vec<Record>, sign: f64| {
                records
                    .par_iter()
                    .map(|r| refine(program, &projector, query, r, sign, cfg.refine_steps))
                    .collect::<Vec<_>>()
                    .into_iter()
                    .reduce(|a, b| if sign * b.value < sign * a.value { b } else { a })
            };
            let interval = match (extreme(global_records(&lows, 1.0), 1.0), extreme(global_records(&highs, -1.0), -1.0)) {
                (Some(lo), Some(hi)) => Some(Interval {
                    lo: lo.value,
                    hi: hi.value,
                    status: Status::InnerApprox,
                    witnesses: Some((lo.point, hi.point)),
                }),
                _ => None,
            };
            OracleAnswer { query: query.clone(), defined, interval }
        })
        .collect();
    Ok(OracleReport { samples: cfg.samples, accepted, answers })
}
