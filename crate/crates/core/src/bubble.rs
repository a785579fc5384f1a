//! Truncated extremal families `u_eps = ψ U_eps`, normalized bubbles
//! `v_eps`, their weighted-norm measurements, and the concentration
//! (atom) diagnostic.
//!
//! The cutoff ψ is 1 on `[0, R/4]`, the C¹ cubic ramp `1 - 3s² + 2s³` with
//! `s = (r - R/4)/(R/4)` on `[R/4, R/2]`, and 0 beyond `R/2`.

use crate::extremal::{s_radial, ExtremalError};
use crate::grid::{
    energy_phi_upto, weighted_integral, weighted_integral_upto, GridError, RadialField, RadialGrid,
};
use crate::params::{CknParams, ParamError};
use serde::Serialize;
use std::fmt::Write as _;
use std::sync::Arc;
use thiserror::Error;

/// Default sweep: 13 geometric eps values in `[1e-6, 1e-2]`.
pub const DEFAULT_EPS_MIN: f64 = 1e-6;
pub const DEFAULT_EPS_MAX: f64 = 1e-2;
pub const DEFAULT_EPS_COUNT: usize = 13;
/// Minimum sweep length for a meaningful rate fit.
pub const MIN_EPS_COUNT: usize = 5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BubbleError {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Extremal(#[from] ExtremalError),
    #[error("eps must be positive, got {eps}")]
    NonPositiveEps { eps: f64 },
    #[error("under-resolved core: grid r_1 = {r1:e} exceeds eps^(1/eta)/10 = {core:e} for eps = {eps:e}")]
    UnderResolvedCore { eps: f64, r1: f64, core: f64 },
    #[error("sweep needs at least 5 eps values, got {count}")]
    TooFewEps { count: usize },
    #[error("sweep eps values must be geometrically spaced and strictly monotone")]
    NotGeometric,
    #[error("atom radius delta must lie in (0, R/4), got {delta}")]
    BadDelta { delta: f64 },
}

/// Weighted-norm measurements of one normalized bubble `v_eps`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BubbleRecord {
    pub eps: f64,
    /// `‖Dv_eps‖^p` with weight `|x|^{-ap}`.
    #[serde(rename = "grad_p")]
    pub grad_p_norm: f64,
    /// `grad_p_norm - S_R`.
    #[serde(rename = "grad_corr")]
    pub grad_correction: f64,
    /// `‖Dv‖^α_{L^α(|x|^{-ap})}` for α = 1.
    pub alpha1: f64,
    /// α = 2.
    pub alpha2: f64,
    /// α = p - 2 (weighted cell measure when p = 2 makes the power vanish).
    pub alphapm2: f64,
    /// α = p - 1.
    pub alphapm1: f64,
    /// `‖v‖^p` with the perturbation weight `|x|^{-(a+1)p+c}`.
    #[serde(rename = "pert")]
    pub pert_norm: f64,
    /// `‖v‖_{L^q(|x|^{-bq})}`; 1 by construction.
    #[serde(rename = "qnorm")]
    pub qnorm_check: f64,
}

/// Atom bookkeeping at radius `delta`: the q-mass `nu`, gradient mass `mu`,
/// and the slack of `S_R nu^{p/q} <= mu`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AtomReport {
    pub eps: f64,
    pub delta: f64,
    pub nu_atom: f64,
    pub mu_atom: f64,
    pub slack: f64,
}

pub(crate) fn cutoff_value(r: f64, radius: f64) -> f64 {
    let lo = radius / 4.0;
    let hi = radius / 2.0;
    if r < lo {
        1.0
    } else if r >= hi {
        0.0
    } else {
        let s = (r - lo) / lo;
        1.0 - 3.0 * s * s + 2.0 * s * s * s
    }
}

pub(crate) fn cutoff_slope(r: f64, radius: f64) -> f64 {
    let lo = radius / 4.0;
    let hi = radius / 2.0;
    if r < lo || r >= hi {
        0.0
    } else {
        let s = (r - lo) / lo;
        (-6.0 * s + 6.0 * s * s) / lo
    }
}

/// Build the normalized bubble `v_eps = ψ U_eps / ‖ψ U_eps‖_{q,b}`.
pub fn make_bubble(
    params: &CknParams,
    grid: &Arc<RadialGrid>,
    eps: f64,
) -> Result<RadialField, BubbleError> {
    params.require_subcritical_d()?;
    if !(eps > 0.0) {
        return Err(BubbleError::NonPositiveEps { eps });
    }
    let e = params.exponents();
    let eta = e.eta.expect("d > 0");
    let kappa = (params.nf() - e.d * params.p()) / (e.d * params.p());
    let core = eps.powf(1.0 / eta);
    let r1 = grid.nodes()[1];
    if r1 > core / 10.0 {
        return Err(BubbleError::UnderResolvedCore { eps, r1, core: core / 10.0 });
    }
    let radius = grid.radius();
    let values: Vec<f64> = grid
        .nodes()
        .iter()
        .map(|&r| cutoff_value(r, radius) * (eps + r.powf(eta)).powf(-kappa))
        .collect();
    let mut field = RadialField::new(grid.clone(), values)?;
    let qint = weighted_integral(&field, params.b() * e.q, e.q)?;
    if !(qint.is_finite() && qint > 0.0) {
        return Err(BubbleError::NonPositiveEps { eps });
    }
    field.scale(qint.powf(-1.0 / e.q));
    Ok(field)
}

/// All Lemma-style measurements of `v_eps` by grid quadrature.
pub fn bubble_report(
    params: &CknParams,
    grid: &Arc<RadialGrid>,
    eps: f64,
) -> Result<BubbleRecord, BubbleError> {
    let s_best = s_radial(params)?;
    bubble_report_with_sbest(params, grid, eps, s_best)
}

/// Same as [`bubble_report`] with the best constant supplied by the caller
/// (a sweep computes it once).
pub fn bubble_report_with_sbest(
    params: &CknParams,
    grid: &Arc<RadialGrid>,
    eps: f64,
    s_best: f64,
) -> Result<BubbleRecord, BubbleError> {
    let v = make_bubble(params, grid, eps)?;
    let p = params.p();
    let e = params.exponents();
    let grad_p = crate::grid::energy_phi(params, &v);
    let alpha = |pow: f64| crate::grid::gradient_alpha_integral(params, &v, pow);
    let pert = crate::grid::energy_j(params, &v)?;
    let qnorm = weighted_integral(&v, params.b() * e.q, e.q)?.powf(1.0 / e.q);
    Ok(BubbleRecord {
        eps,
        grad_p_norm: grad_p,
        grad_correction: grad_p - s_best,
        alpha1: alpha(1.0),
        alpha2: alpha(2.0),
        alphapm2: alpha(p - 2.0),
        alphapm1: alpha(p - 1.0),
        pert_norm: pert,
        qnorm_check: qnorm,
    })
}

/// Geometric eps ladder from `hi` down to `lo` (decreasing), inclusive.
pub fn geometric_eps(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let ratio = (lo / hi).powf(1.0 / (count as f64 - 1.0));
    (0..count).map(|k| hi * ratio.powi(k as i32)).collect()
}

fn check_eps_list(eps_list: &[f64]) -> Result<(), BubbleError> {
    if eps_list.len() < MIN_EPS_COUNT {
        return Err(BubbleError::TooFewEps { count: eps_list.len() });
    }
    let r0 = eps_list[1] / eps_list[0];
    if !(r0 > 0.0) || r0 == 1.0 {
        return Err(BubbleError::NotGeometric);
    }
    for w in eps_list.windows(2) {
        if !(w[0] > 0.0 && w[1] > 0.0) {
            return Err(BubbleError::NonPositiveEps { eps: w[1].min(w[0]) });
        }
        let r = w[1] / w[0];
        if (r / r0 - 1.0).abs() > 1e-6 {
            return Err(BubbleError::NotGeometric);
        }
    }
    Ok(())
}

/// Measure a whole eps ladder; `S_R` is computed once and shared.
pub fn sweep(
    params: &CknParams,
    grid: &Arc<RadialGrid>,
    eps_list: &[f64],
) -> Result<Vec<BubbleRecord>, BubbleError> {
    check_eps_list(eps_list)?;
    let s_best = s_radial(params)?;
    eps_list
        .iter()
        .map(|&eps| bubble_report_with_sbest(params, grid, eps, s_best))
        .collect()
}

/// CSV for a sweep; column order is part of the interface.
pub fn sweep_csv(records: &[BubbleRecord]) -> String {
    let mut out = String::from("eps,grad_p,grad_corr,alpha1,alpha2,alphapm2,alphapm1,pert,qnorm\n");
    for r in records {
        let _ = writeln!(
            out,
            "{:e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
            r.eps,
            r.grad_p_norm,
            r.grad_correction,
            r.alpha1,
            r.alpha2,
            r.alphapm2,
            r.alphapm1,
            r.pert_norm,
            r.qnorm_check
        );
    }
    out
}

/// Per-eps atom masses in `B_delta` and the slack of the atom inequality.
pub fn atom_check(
    params: &CknParams,
    grid: &Arc<RadialGrid>,
    eps_sequence: &[f64],
    delta: f64,
) -> Result<Vec<AtomReport>, BubbleError> {
    if !(delta > 0.0 && delta < grid.radius() / 4.0) {
        return Err(BubbleError::BadDelta { delta });
    }
    let s_best = s_radial(params)?;
    let e = params.exponents();
    let p = params.p();
    eps_sequence
        .iter()
        .map(|&eps| {
            let v = make_bubble(params, grid, eps)?;
            let nu = weighted_integral_upto(&v, params.b() * e.q, e.q, delta)?;
            let mu = energy_phi_upto(params, &v, delta);
            Ok(AtomReport {
                eps,
                delta,
                nu_atom: nu,
                mu_atom: mu,
                slack: mu - s_best * nu.powf(p / e.q),
            })
        })
        .collect()
}
