//! Dense two-phase primal simplex with Bland's rule.
//!
//! Problems are `minimize c.x` subject to rows `a.x (<= | = | >=) b` and
//! `x >= 0`. Rows with a negative right-hand side are negated on entry so
//! every artificial variable starts at a nonnegative value.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub coeffs: Vec<f64>,
    pub kind: RowKind,
    pub rhs: f64,
}

impl Row {
    pub fn new(coeffs: Vec<f64>, kind: RowKind, rhs: f64) -> Self {
        Row { coeffs, kind, rhs }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub objective: Vec<f64>,
    pub rows: Vec<Row>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Phase-one objective above this means infeasible.
    pub feasibility: f64,
    /// Reduced costs above `-optimality` are treated as nonnegative.
    pub optimality: f64,
    /// Smallest admissible pivot magnitude.
    pub pivot: f64,
    pub max_pivots: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { feasibility: 1e-9, optimality: 1e-9, pivot: 1e-10, max_pivots: 100_000 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Optimal { value: f64, x: Vec<f64> },
    Infeasible,
    Unbounded,
}

struct Tableau {
    /// `m` constraint rows followed by the objective row; `width` columns,
    /// the last holding the right-hand side.
    data: Vec<f64>,
    width: usize,
    m: usize,
    basis: Vec<usize>,
    pivots: usize,
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.width + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.data[r * self.width + self.width - 1]
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.width;
        let inv = 1.0 / self.at(pr, pc);
        for v in &mut self.data[pr * w..(pr + 1) * w] {
            *v *= inv;
        }
        let pivot_row: Vec<f64> = self.data[pr * w..(pr + 1) * w].to_vec();
        for r in 0..=self.m {
            if r == pr {
                continue;
            }
            let f = self.data[r * w + pc];
            if f == 0.0 {
                continue;
            }
            let row = &mut self.data[r * w..(r + 1) * w];
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if *p != 0.0 {
                    *v -= f * p;
                }
            }
            row[pc] = 0.0;
        }
        self.basis[pr] = pc;
        self.pivots += 1;
    }

    /// Runs Bland's rule on the current objective row over columns `< allowed`.
    fn optimize(&mut self, allowed: usize, tol: &Tolerances) -> Result<bool> {
        let obj = self.m;
        loop {
            let entering = (0..allowed).find(|&c| self.at(obj, c) < -tol.optimality);
            let Some(pc) = entering else { return Ok(true) };
            let mut best: Option<(usize, f64)> = None;
            for r in 0..self.m {
                let a = self.at(r, pc);
                if a > tol.pivot {
                    let ratio = self.rhs(r) / a;
                    best = match best {
                        None => Some((r, ratio)),
                        Some((br, bratio)) => {
                            let tie = (ratio - bratio).abs() <= 1e-12 * (1.0 + bratio.abs());
                            if ratio < bratio && !tie || tie && self.basis[r] < self.basis[br] {
                                Some((r, ratio))
                            } else {
                                Some((br, bratio))
                            }
                        }
                    };
                }
            }
            let Some((pr, _)) = best else { return Ok(false) };
            if self.pivots >= tol.max_pivots {
                return Err(Error::NumericFailure(format!(
                    "simplex exceeded {} pivots",
                    tol.max_pivots
                )));
            }
            self.pivot(pr, pc);
        }
    }

    fn set_objective(&mut self, costs: &[f64]) {
        let w = self.width;
        let obj = self.m;
        for c in 0..w {
            self.data[obj * w + c] = 0.0;
        }
        for (c, &v) in costs.iter().enumerate() {
            self.data[obj * w + c] = v;
        }
        for r in 0..self.m {
            let cb = costs.get(self.basis[r]).copied().unwrap_or(0.0);
            if cb != 0.0 {
                for c in 0..w {
                    let v = self.data[r * w + c];
                    self.data[obj * w + c] -= cb * v;
                }
            }
        }
    }

    fn remove_row(&mut self, r: usize) {
        let w = self.width;
        self.data.drain(r * w..(r + 1) * w);
        self.basis.remove(r);
        self.m -= 1;
    }
}

/// Solves `problem` to optimality.
pub fn solve(problem: &Problem, tol: &Tolerances) -> Result<Outcome> {
    let n = problem.objective.len();
    for (i, row) in problem.rows.iter().enumerate() {
        if row.coeffs.len() != n {
            return Err(Error::Dimension { expected: n, found: row.coeffs.len() });
        }
        if !row.rhs.is_finite() || row.coeffs.iter().any(|v| !v.is_finite()) {
            return Err(Error::NumericFailure(format!("row {i} has a non-finite entry")));
        }
    }

    // Normalize to nonnegative right-hand sides.
    let rows: Vec<(Vec<f64>, RowKind, f64)> = problem
        .rows
        .iter()
        .map(|r| {
            if r.rhs < 0.0 {
                let kind = match r.kind {
                    RowKind::Le => RowKind::Ge,
                    RowKind::Ge => RowKind::Le,
                    RowKind::Eq => RowKind::Eq,
                };
                (r.coeffs.iter().map(|v| -v).collect(), kind, -r.rhs)
            } else {
                (r.coeffs.clone(), r.kind, r.rhs)
            }
        })
        .collect();

    let m = rows.len();
    let n_slack = rows.iter().filter(|r| r.1 != RowKind::Eq).count();
    let n_art = rows.iter().filter(|r| r.1 != RowKind::Le).count();
    let art_start = n + n_slack;
    let width = art_start + n_art + 1;

    let mut t = Tableau { data: vec![0.0; (m + 1) * width], width, m, basis: vec![0; m], pivots: 0 };
    let mut slack = n;
    let mut art = art_start;
    for (r, (coeffs, kind, rhs)) in rows.iter().enumerate() {
        t.data[r * width..r * width + n].copy_from_slice(coeffs);
        t.data[r * width + width - 1] = *rhs;
        match kind {
            RowKind::Le => {
                t.data[r * width + slack] = 1.0;
                t.basis[r] = slack;
                slack += 1;
            }
            RowKind::Ge => {
                t.data[r * width + slack] = -1.0;
                slack += 1;
                t.data[r * width + art] = 1.0;
                t.basis[r] = art;
                art += 1;
            }
            RowKind::Eq => {
                t.data[r * width + art] = 1.0;
                t.basis[r] = art;
                art += 1;
            }
        }
    }

    if n_art > 0 {
        let mut phase1 = vec![0.0; art_start + n_art];
        for c in phase1.iter_mut().skip(art_start) {
            *c = 1.0;
        }
        t.set_objective(&phase1);
        t.optimize(art_start + n_art, tol)?;
        let infeasibility: f64 = (0..t.m).filter(|&r| t.basis[r] >= art_start).map(|r| t.rhs(r)).sum();
        if infeasibility > tol.feasibility {
            return Ok(Outcome::Infeasible);
        }
        // Drive remaining artificials out of the basis; drop redundant rows.
        let mut r = 0;
        while r < t.m {
            if t.basis[r] >= art_start {
                let col = (0..art_start)
                    .filter(|&c| t.at(r, c).abs() > tol.pivot)
                    .max_by(|&a, &b| t.at(r, a).abs().total_cmp(&t.at(r, b).abs()));
                match col {
                    Some(c) => t.pivot(r, c),
                    None => {
                        t.remove_row(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    t.set_objective(&problem.objective);
    if !t.optimize(art_start, tol)? {
        return Ok(Outcome::Unbounded);
    }
    let mut x = vec![0.0; n];
    for r in 0..t.m {
        if t.basis[r] < n {
            x[t.basis[r]] = t.rhs(r);
        }
    }
    let value = problem.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(Outcome::Optimal { value, x })
}
