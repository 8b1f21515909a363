//! Dense two-phase tableau simplex with Bland's anti-cycling rule.
//!
//! Built for auditability at desk scale, not speed: the full tableau is
//! dense, artificials stay in the tableau (barred from re-entering) so row
//! duals can be read off their reduced costs, and pivoting is deterministic,
//! so identical inputs produce identical pivot sequences and solutions.

use crate::error::{Error, Result};

pub const PIVOT_TOL: f64 = 1e-11;
pub const FEAS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
pub struct LpRow {
    pub coeffs: Vec<f64>,
    pub rel: Rel,
    pub rhs: f64,
}

/// LP over nonnegative variables.
#[derive(Debug, Clone)]
pub struct Lp {
    pub maximize: bool,
    pub objective: Vec<f64>,
    pub rows: Vec<LpRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub objective: f64,
    pub x: Vec<f64>,
    /// One dual per input row (signs for the maximization form).
    pub duals: Vec<f64>,
    pub pivots: usize,
    pub max_primal_residual: f64,
    pub max_cs_residual: f64,
}

impl Lp {
    /// Plain-text export: objective then one row per line.
    pub fn to_text(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} {} vars {} rows",
            if self.maximize { "maximize" } else { "minimize" },
            self.objective.len(),
            self.rows.len()
        );
        let _ = writeln!(
            out,
            "obj {}",
            self.objective
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        );
        for r in &self.rows {
            let rel = match r.rel {
                Rel::Le => "<=",
                Rel::Eq => "=",
                Rel::Ge => ">=",
            };
            let _ = writeln!(
                out,
                "row {} {} {}",
                r.coeffs
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(" "),
                rel,
                r.rhs
            );
        }
        out
    }
}

struct Tableau {
    /// (m+1) rows × width; last row is the objective, last column the rhs.
    data: Vec<f64>,
    width: usize,
    m: usize,
    /// Basic variable per row.
    basis: Vec<usize>,
    pivots: usize,
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.width + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.width - 1)
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let w = self.width;
        let p = self.at(row, col);
        debug_assert!(p.abs() > PIVOT_TOL);
        let inv = 1.0 / p;
        for c in 0..w {
            self.data[row * w + c] *= inv;
        }
        for r in 0..=self.m {
            if r == row {
                continue;
            }
            let f = self.at(r, col);
            if f != 0.0 {
                for c in 0..w {
                    self.data[r * w + c] -= f * self.data[row * w + c];
                }
                // Kill residual round-off in the pivot column.
                self.data[r * w + col] = 0.0;
            }
        }
        self.basis[row] = col;
        self.pivots += 1;
    }

    /// Bland: entering = lowest-index improving column among `allowed`,
    /// leaving = min ratio with ties broken by lowest basic variable.
    /// Returns false when optimal, error when unbounded.
    fn phase(&mut self, allowed_cols: usize, max_pivots: usize) -> Result<bool> {
        loop {
            let obj = self.m;
            let mut enter = None;
            for c in 0..allowed_cols {
                if self.at(obj, c) > FEAS_TOL {
                    enter = Some(c);
                    break;
                }
            }
            let Some(enter) = enter else {
                return Ok(true); // optimal
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.m {
                let a = self.at(r, enter);
                if a > PIVOT_TOL {
                    let ratio = self.rhs(r) / a;
                    match leave {
                        None => leave = Some((r, ratio)),
                        Some((br, bratio)) => {
                            if ratio < bratio - PIVOT_TOL
                                || ((ratio - bratio).abs() <= PIVOT_TOL
                                    && self.basis[r] < self.basis[br])
                            {
                                leave = Some((r, ratio));
                            }
                        }
                    }
                }
            }
            let Some((leave, _)) = leave else {
                return Ok(false); // unbounded
            };
            self.pivot(leave, enter);
            if self.pivots > max_pivots {
                return Err(Error::InvalidParam(format!(
                    "simplex exceeded {max_pivots} pivots"
                )));
            }
        }
    }

    /// Install objective coefficients `c` (length = total columns) in the
    /// objective row as reduced costs, eliminating basic columns.
    fn set_objective(&mut self, c: &[f64]) {
        let w = self.width;
        let obj = self.m;
        for col in 0..w - 1 {
            self.data[obj * w + col] = c[col];
        }
        self.data[obj * w + w - 1] = 0.0;
        for r in 0..self.m {
            let b = self.basis[r];
            let f = self.at(obj, b);
            if f != 0.0 {
                for col in 0..w {
                    self.data[obj * w + col] -= f * self.data[r * w + col];
                }
                self.data[obj * w + b] = 0.0;
            }
        }
    }
}

pub fn simplex_solve(lp: &Lp) -> Result<LpSolution> {
    let n = lp.objective.len();
    for (i, r) in lp.rows.iter().enumerate() {
        if r.coeffs.len() != n {
            return Err(Error::InvalidParam(format!(
                "row {i} has {} coefficients, expected {n}",
                r.coeffs.len()
            )));
        }
    }
    let m = lp.rows.len();

    // Normalized rows: rhs >= 0.
    let mut rows: Vec<LpRow> = lp.rows.clone();
    for r in rows.iter_mut() {
        if r.rhs < 0.0 {
            for c in r.coeffs.iter_mut() {
                *c = -*c;
            }
            r.rhs = -r.rhs;
            r.rel = match r.rel {
                Rel::Le => Rel::Ge,
                Rel::Ge => Rel::Le,
                Rel::Eq => Rel::Eq,
            };
        }
    }

    // Column layout: structural | slack/surplus | artificial | rhs.
    let num_slack = rows.iter().filter(|r| r.rel != Rel::Eq).count();
    let num_art = rows.iter().filter(|r| r.rel != Rel::Le).count();
    let artificial_start = n + num_slack;
    let width = n + num_slack + num_art + 1;

    let mut t = Tableau {
        data: vec![0.0; (m + 1) * width],
        width,
        m,
        basis: vec![usize::MAX; m],
        pivots: 0,
    };
    let mut slack_col_of_row = vec![usize::MAX; m];
    let mut art_col_of_row = vec![usize::MAX; m];
    let mut next_slack = n;
    let mut next_art = artificial_start;
    for (i, r) in rows.iter().enumerate() {
        for (j, &c) in r.coeffs.iter().enumerate() {
            t.data[i * width + j] = c;
        }
        t.data[i * width + width - 1] = r.rhs;
        match r.rel {
            Rel::Le => {
                t.data[i * width + next_slack] = 1.0;
                slack_col_of_row[i] = next_slack;
                t.basis[i] = next_slack;
                next_slack += 1;
            }
            Rel::Ge => {
                t.data[i * width + next_slack] = -1.0;
                slack_col_of_row[i] = next_slack;
                next_slack += 1;
                t.data[i * width + next_art] = 1.0;
                art_col_of_row[i] = next_art;
                t.basis[i] = next_art;
                next_art += 1;
            }
            Rel::Eq => {
                t.data[i * width + next_art] = 1.0;
                art_col_of_row[i] = next_art;
                t.basis[i] = next_art;
                next_art += 1;
            }
        }
    }

    let max_pivots = 2_000_000usize;

    // Phase 1: maximize −Σ artificials.
    if num_art > 0 {
        let mut c1 = vec![0.0; width - 1];
        for col in artificial_start..width - 1 {
            c1[col] = -1.0;
        }
        t.set_objective(&c1);
        let optimal = t.phase(artificial_start, max_pivots)?;
        debug_assert!(optimal, "phase 1 is bounded by construction");
        let z1 = -t.rhs(m); // objective row rhs holds −z
        let infeas = -z1;
        if infeas > FEAS_TOL {
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                objective: 0.0,
                x: vec![0.0; n],
                duals: vec![0.0; m],
                pivots: t.pivots,
                max_primal_residual: infeas,
                max_cs_residual: 0.0,
            });
        }
        // Drive artificials out of the basis where possible.
        for r in 0..m {
            if t.basis[r] >= artificial_start {
                if let Some(col) = (0..artificial_start)
                    .find(|&c| t.at(r, c).abs() > PIVOT_TOL)
                {
                    t.pivot(r, col);
                }
                // Otherwise the row is redundant; the artificial stays basic
                // at level 0.
            }
        }
    }

    // Phase 2 with the real objective.
    let sign = if lp.maximize { 1.0 } else { -1.0 };
    let mut c2 = vec![0.0; width - 1];
    for j in 0..n {
        c2[j] = sign * lp.objective[j];
    }
    t.set_objective(&c2);
    let optimal = t.phase(artificial_start, max_pivots)?;
    if !optimal {
        return Ok(LpSolution {
            status: LpStatus::Unbounded,
            objective: if lp.maximize {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            },
            x: vec![0.0; n],
            duals: vec![0.0; m],
            pivots: t.pivots,
            max_primal_residual: 0.0,
            max_cs_residual: 0.0,
        });
    }

    let mut x = vec![0.0; n];
    for r in 0..m {
        if t.basis[r] < n {
            x[t.basis[r]] = t.rhs(r);
        }
    }
    let z = -t.rhs(m);
    let objective = sign * z;

    // Row duals from the reduced costs of each row's unit column. A +e_i
    // unit column with zero cost has reduced cost −y_i; the surplus column
    // of a ≥ row is −e_i, giving +y_i.
    let mut duals = vec![0.0; m];
    for (i, r) in rows.iter().enumerate() {
        let y = match r.rel {
            Rel::Le => -t.at(m, slack_col_of_row[i]),
            Rel::Ge => t.at(m, slack_col_of_row[i]),
            Rel::Eq => -t.at(m, art_col_of_row[i]),
        };
        duals[i] = sign * y;
    }
    // Undo the rhs normalization: negating a row negates its shadow price.
    for (i, orig) in lp.rows.iter().enumerate() {
        if orig.rhs < 0.0 {
            duals[i] = -duals[i];
        }
    }

    // Residuals against the original system.
    let mut max_primal_residual = 0.0f64;
    let mut max_cs_residual = 0.0f64;
    for (i, r) in lp.rows.iter().enumerate() {
        let ax: f64 = r.coeffs.iter().zip(&x).map(|(a, b)| a * b).sum();
        let slack = match r.rel {
            Rel::Le => r.rhs - ax,
            Rel::Ge => ax - r.rhs,
            Rel::Eq => -(ax - r.rhs).abs(),
        };
        max_primal_residual = max_primal_residual.max(-slack);
        if r.rel != Rel::Eq {
            max_cs_residual = max_cs_residual.max((duals[i] * slack).abs());
        }
    }

    Ok(LpSolution {
        status: LpStatus::Optimal,
        objective,
        x,
        duals,
        pivots: t.pivots,
        max_primal_residual,
        max_cs_residual,
    })
}
