//! Projected, diagonally preconditioned gradient descent for homogeneous
//! quotients `F(u) / G(u)^theta` under the normalization `G(u) = 1`.
//!
//! Shared by the eigensolver (`F = Φ`, `G = J`) and the ground-state solver
//! (`F = Φ - λJ`, `G = ‖u‖_q^q`). Steps are Barzilai–Borwein in the
//! preconditioner metric with monotone Armijo backtracking, negative
//! overshoots projected to zero, and renormalization after every step. The
//! diagonal preconditioner absorbs the huge stiffness spread of the geometric
//! mesh; without it the iteration stalls far from the discrete minimizer.

use crate::grid::{RadialField, RadialGrid};
use crate::params::CknParams;
use std::sync::Arc;

pub(crate) struct DescentOptions {
    pub tol: f64,
    pub max_iters: usize,
    /// Project iterates onto the nonnegative cone.
    pub clamp_nonneg: bool,
    /// Call the early-stop probe every this many iterations.
    pub check_every: usize,
}

impl DescentOptions {
    pub fn new(tol: f64, max_iters: usize) -> Self {
        Self {
            tol,
            max_iters,
            clamp_nonneg: true,
            check_every: 25,
        }
    }
}

pub(crate) struct DescentOutcome {
    /// Final quotient value (numerator at `G = 1`).
    pub value: f64,
    /// Final normalized iterate (`G(u) = 1`).
    pub u: Vec<f64>,
    pub iterations: usize,
    /// Last relative change of the quotient.
    pub residual: f64,
    pub converged: bool,
    pub early_stopped: bool,
}

const ARMIJO_SIGMA: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 80;
/// Consecutive sub-tolerance steps required before declaring convergence.
const SETTLE_STEPS: usize = 3;

pub(crate) struct QuotientProblem<'a> {
    pub numerator: &'a dyn Fn(&[f64]) -> f64,
    pub numerator_grad: &'a dyn Fn(&[f64], &mut [f64]),
    pub constraint: &'a dyn Fn(&[f64]) -> f64,
    pub constraint_grad: &'a dyn Fn(&[f64], &mut [f64]),
    /// Homogeneity degree of the constraint functional.
    pub constraint_degree: f64,
    /// Quotient exponent: minimize `F / G^theta`.
    pub theta: f64,
    pub precondition: &'a dyn Fn(&[f64], &mut [f64]),
}

pub(crate) fn minimize_quotient(
    problem: &QuotientProblem<'_>,
    u0: &[f64],
    opts: &DescentOptions,
    mut early_stop: impl FnMut(usize, &[f64], f64) -> bool,
) -> DescentOutcome {
    let n = u0.len();
    let mut u = u0.to_vec();
    u[n - 1] = 0.0;
    normalize(&mut u, problem);
    let mut fval = (problem.numerator)(&u);

    let mut g = vec![0.0; n];
    let mut gc = vec![0.0; n];
    let mut diag = vec![0.0; n];
    let mut pg = vec![0.0; n];
    let grad = |u: &[f64], fval: f64, g: &mut Vec<f64>, gc: &mut Vec<f64>| {
        (problem.numerator_grad)(u, g);
        (problem.constraint_grad)(u, gc);
        for i in 0..u.len() {
            g[i] -= problem.theta * fval * gc[i];
        }
        g[u.len() - 1] = 0.0;
    };
    grad(&u, fval, &mut g, &mut gc);
    (problem.precondition)(&u, &mut diag);
    for i in 0..n {
        pg[i] = g[i] / diag[i];
    }

    let mut step = 1.0;
    let mut prev_u: Option<Vec<f64>> = None;
    let mut prev_pg: Option<Vec<f64>> = None;
    let mut settled = 0usize;
    let mut rel = f64::INFINITY;
    let mut v = vec![0.0; n];

    for it in 0..opts.max_iters {
        if it % opts.check_every == 0 && early_stop(it, &u, fval) {
            return DescentOutcome {
                value: fval,
                u,
                iterations: it,
                residual: rel,
                converged: false,
                early_stopped: true,
            };
        }
        if let (Some(up), Some(pgp)) = (&prev_u, &prev_pg) {
            let mut ss = 0.0;
            let mut sy = 0.0;
            for i in 0..n {
                let s = u[i] - up[i];
                let y = pg[i] - pgp[i];
                ss += s * s * diag[i];
                sy += s * y * diag[i];
            }
            step = if sy > 0.0 && ss.is_finite() && sy.is_finite() {
                (ss / sy).clamp(1e-16, 1e16)
            } else {
                1.0
            };
        }
        // g^T D^{-1} g, the Armijo decrease scale
        let gg: f64 = g.iter().zip(&pg).map(|(a, b)| a * b).sum();
        if !(gg > 0.0) {
            break; // stationary to machine precision
        }
        let mut tt = step;
        let mut accepted = false;
        let mut fv = fval;
        for _ in 0..MAX_BACKTRACKS {
            for i in 0..n {
                v[i] = u[i] - tt * pg[i];
                if opts.clamp_nonneg && v[i] < 0.0 {
                    v[i] = 0.0;
                }
            }
            v[n - 1] = 0.0;
            let gv = (problem.constraint)(&v);
            if gv > 0.0 && gv.is_finite() {
                let scale = gv.powf(-1.0 / problem.constraint_degree);
                for x in v.iter_mut() {
                    *x *= scale;
                }
                fv = (problem.numerator)(&v);
                if fv <= fval - ARMIJO_SIGMA * tt * gg {
                    accepted = true;
                    break;
                }
            }
            tt *= 0.5;
        }
        if !accepted {
            break; // no descent direction left at float precision
        }
        prev_u = Some(std::mem::replace(&mut u, v.clone()));
        prev_pg = Some(pg.clone());
        rel = (fval - fv).abs() / fval.abs().max(f64::MIN_POSITIVE);
        fval = fv;
        grad(&u, fval, &mut g, &mut gc);
        (problem.precondition)(&u, &mut diag);
        for i in 0..n {
            pg[i] = g[i] / diag[i];
        }
        if rel < opts.tol {
            settled += 1;
            if settled >= SETTLE_STEPS {
                return DescentOutcome {
                    value: fval,
                    u,
                    iterations: it + 1,
                    residual: rel,
                    converged: true,
                    early_stopped: false,
                };
            }
        } else {
            settled = 0;
        }
    }
    let converged = rel < opts.tol || settled > 0;
    DescentOutcome {
        value: fval,
        u,
        iterations: opts.max_iters,
        residual: rel,
        converged,
        early_stopped: false,
    }
}

fn normalize(u: &mut [f64], problem: &QuotientProblem<'_>) {
    let g = (problem.constraint)(u);
    assert!(g > 0.0 && g.is_finite(), "initial iterate has no constraint mass");
    let scale = g.powf(-1.0 / problem.constraint_degree);
    for x in u.iter_mut() {
        *x *= scale;
    }
}

/// Precomputed quadrature weights for one `(params, grid)` pair, so descent
/// iterations stay O(nodes) without repeated `powf` on the mesh.
pub(crate) struct EnergyContext {
    pub params: CknParams,
    pub grid: Arc<RadialGrid>,
    pub h: Vec<f64>,
    /// Cell weights for the gradient term (`alpha = ap`).
    pub w_phi: Vec<f64>,
    /// Node weights for `J` (`alpha = (a+1)p - c`).
    pub w_j: Vec<f64>,
    /// Node weights for the critical integral (`alpha = bq`).
    pub w_q: Vec<f64>,
}

impl EnergyContext {
    pub fn new(params: &CknParams, grid: &Arc<RadialGrid>) -> Self {
        let h = grid.nodes().windows(2).map(|w| w[1] - w[0]).collect();
        Self {
            params: *params,
            grid: grid.clone(),
            h,
            w_phi: grid.cell_weights(params.a() * params.p()),
            w_j: grid.node_weights((params.a() + 1.0) * params.p() - params.c()),
            w_q: grid.node_weights(params.b() * params.q()),
        }
    }

    pub fn phi(&self, u: &[f64]) -> f64 {
        let p = self.params.p();
        let mut acc = 0.0;
        if p == 2.0 {
            for i in 0..self.h.len() {
                let s = (u[i + 1] - u[i]) / self.h[i];
                acc += self.w_phi[i] * s * s;
            }
        } else {
            for i in 0..self.h.len() {
                let s = (u[i + 1] - u[i]) / self.h[i];
                acc += self.w_phi[i] * s.abs().powf(p);
            }
        }
        acc
    }

    pub fn phi_grad(&self, u: &[f64], out: &mut [f64]) {
        let p = self.params.p();
        out.fill(0.0);
        for i in 0..self.h.len() {
            let s = (u[i + 1] - u[i]) / self.h[i];
            let ps = if p == 2.0 { s } else { pow_signed(s, p - 1.0) };
            let f = self.w_phi[i] * p * ps / self.h[i];
            out[i] -= f;
            out[i + 1] += f;
        }
    }

    pub fn j(&self, u: &[f64]) -> f64 {
        let p = self.params.p();
        if p == 2.0 {
            self.w_j.iter().zip(u).map(|(w, x)| w * x * x).sum()
        } else {
            self.w_j.iter().zip(u).map(|(w, x)| w * x.abs().powf(p)).sum()
        }
    }

    pub fn j_grad(&self, u: &[f64], out: &mut [f64]) {
        let p = self.params.p();
        for i in 0..u.len() {
            let ps = if p == 2.0 { u[i] } else { pow_signed(u[i], p - 1.0) };
            out[i] = self.w_j[i] * p * ps;
        }
    }

    pub fn critical(&self, u: &[f64]) -> f64 {
        let q = self.params.q();
        self.w_q.iter().zip(u).map(|(w, x)| w * x.abs().powf(q)).sum()
    }

    pub fn critical_grad(&self, u: &[f64], out: &mut [f64]) {
        let q = self.params.q();
        for i in 0..u.len() {
            out[i] = self.w_q[i] * q * pow_signed(u[i], q - 1.0);
        }
    }

    /// Diagonal stiffness scale used as the descent metric.
    pub fn precondition(&self, u: &[f64], out: &mut [f64]) {
        let p = self.params.p();
        out.fill(0.0);
        let mut smax = 0.0f64;
        for i in 0..self.h.len() {
            smax = smax.max(((u[i + 1] - u[i]) / self.h[i]).abs());
        }
        let floor_s = (1e-12 * smax).max(f64::MIN_POSITIVE);
        for i in 0..self.h.len() {
            let sp = if p == 2.0 {
                1.0
            } else {
                ((u[i + 1] - u[i]) / self.h[i]).abs().max(floor_s).powf(p - 2.0)
            };
            let t = self.w_phi[i] * sp / (self.h[i] * self.h[i]);
            out[i] += t;
            out[i + 1] += t;
        }
        let dmax = out.iter().cloned().fold(0.0f64, f64::max);
        let floor = (1e-30 * dmax).max(f64::MIN_POSITIVE);
        for d in out.iter_mut() {
            *d = d.max(floor) * p;
        }
    }

    pub fn field(&self, values: Vec<f64>) -> RadialField {
        RadialField::new(self.grid.clone(), values).expect("values conform to grid")
    }
}

/// `|x|^{e-1} x` — the odd power that shows up in p-Laplacian gradients.
#[inline]
pub(crate) fn pow_signed(x: f64, e: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.abs().powf(e - 1.0) * x
    }
}
