//! Log-log rate fitting for the bubble sweeps, predicted-exponent tables,
//! and a high-resolution measurement path for the asymptotic constants.
//!
//! Two predicted columns are always carried side by side: the exponents as
//! printed in the source analysis ("claimed") and the exponents that direct
//! dilation bookkeeping of the whole-space norms yields ("scaling"). They
//! disagree for the gradient correction and for the sub-threshold
//! perturbation regime; the fit adjudicates and nothing is silently
//! corrected.

use crate::bubble::{cutoff_slope, cutoff_value, BubbleRecord};
use crate::extremal::log_simpson;
use crate::params::{unit_sphere_area, CknParams, ParamError};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RateError {
    #[error("rate fit needs at least 5 points, got {count}")]
    TooFewPoints { count: usize },
    #[error("non-positive measured value at eps = {eps:e}: {value:e}")]
    NonPositiveValue { eps: f64, value: f64 },
    #[error(transparent)]
    Param(#[from] ParamError),
}

/// Least-squares fit of `log(value)` against `log(eps)`. When the
/// power-times-log model halves the residual sum of squares, its slope is
/// reported and `log_factor_detected` is set.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub stderr: f64,
    pub r_squared: f64,
    #[serde(rename = "log_factor")]
    pub log_factor_detected: bool,
}

fn ols(x: &[f64], y: &[f64]) -> (f64, f64, f64, f64, f64) {
    let m = x.len() as f64;
    let xbar = x.iter().sum::<f64>() / m;
    let ybar = y.iter().sum::<f64>() / m;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (xi, yi) in x.iter().zip(y) {
        sxx += (xi - xbar) * (xi - xbar);
        sxy += (xi - xbar) * (yi - ybar);
        syy += (yi - ybar) * (yi - ybar);
    }
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let rss: f64 = x
        .iter()
        .zip(y)
        .map(|(xi, yi)| {
            let e = yi - (intercept + slope * xi);
            e * e
        })
        .sum();
    (slope, intercept, rss, sxx, syy)
}

/// Fit `(eps, value)` pairs; errors name the eps of any non-positive value.
pub fn fit_rate_points(points: &[(f64, f64)]) -> Result<RateFit, RateError> {
    if points.len() < 5 {
        return Err(RateError::TooFewPoints { count: points.len() });
    }
    for &(eps, value) in points {
        if !(value > 0.0) {
            return Err(RateError::NonPositiveValue { eps, value });
        }
    }
    let x: Vec<f64> = points.iter().map(|(e, _)| e.ln()).collect();
    let y: Vec<f64> = points.iter().map(|(_, v)| v.ln()).collect();
    let (s1, i1, rss1, sxx, syy1) = ols(&x, &y);
    // power-times-log alternative: subtract the fixed log|log eps| regressor
    let loggable = x.iter().all(|t| t.abs() > 0.1);
    let mut best = RateFit {
        slope: s1,
        intercept: i1,
        stderr: (rss1 / (x.len() as f64 - 2.0) / sxx).sqrt(),
        r_squared: if syy1 > 0.0 { 1.0 - rss1 / syy1 } else { 1.0 },
        log_factor_detected: false,
    };
    if loggable {
        let y2: Vec<f64> = y
            .iter()
            .zip(&x)
            .map(|(yi, t)| yi - t.abs().ln())
            .collect();
        let (s2, i2, rss2, sxx2, syy2) = ols(&x, &y2);
        if rss2 <= 0.5 * rss1 {
            best = RateFit {
                slope: s2,
                intercept: i2,
                stderr: (rss2 / (x.len() as f64 - 2.0) / sxx2).sqrt(),
                r_squared: if syy2 > 0.0 { 1.0 - rss2 / syy2 } else { 1.0 },
                log_factor_detected: true,
            };
        }
    }
    Ok(best)
}

/// Which measured quantity of a [`BubbleRecord`] to fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordSelector {
    GradPNorm,
    GradCorrection,
    PertNorm,
    Alpha1,
    Alpha2,
    AlphaPm2,
    AlphaPm1,
}

pub fn fit_rate(records: &[BubbleRecord], selector: RecordSelector) -> Result<RateFit, RateError> {
    let points: Vec<(f64, f64)> = records
        .iter()
        .map(|r| {
            let v = match selector {
                RecordSelector::GradPNorm => r.grad_p_norm,
                RecordSelector::GradCorrection => r.grad_correction,
                RecordSelector::PertNorm => r.pert_norm,
                RecordSelector::Alpha1 => r.alpha1,
                RecordSelector::Alpha2 => r.alpha2,
                RecordSelector::AlphaPm2 => r.alphapm2,
                RecordSelector::AlphaPm1 => r.alphapm1,
            };
            (r.eps, v)
        })
        .collect();
    fit_rate_points(&points)
}

/// Perturbation-norm regime relative to `c* = (n-p-ap)/(p-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CRegime {
    Subcritical,
    Critical,
    Supercritical,
}

/// One predicted exponent, in both columns.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RatePrediction {
    pub paper_claimed: f64,
    pub paper_log_factor: bool,
    pub scaling_derived: Option<f64>,
    pub scaling_log_factor: bool,
}

/// Predicted eps-exponents for the three measured quantities.
#[derive(Debug, Clone, Serialize)]
pub struct RateTable {
    pub regime: CRegime,
    pub cstar: f64,
    /// Gradient-norm correction `‖Dv‖^p - S_R`.
    pub item1: RatePrediction,
    /// Low-order gradient norms, one entry per alpha in {1, 2, p-2, p-1}.
    pub item2: Vec<(f64, RatePrediction)>,
    /// Perturbation norm `‖v‖^p_{(a+1)p-c}`.
    pub item3: RatePrediction,
}

pub fn rate_table(params: &CknParams) -> Result<RateTable, RateError> {
    params.require_subcritical_d()?;
    let n = params.nf();
    let p = params.p();
    let c = params.c();
    let e = params.exponents();
    let d = e.d;
    let eta = e.eta.expect("d > 0");
    let cstar = e.cstar;
    let regime = if (c - cstar).abs() <= 1e-12 * cstar.abs().max(1.0) {
        CRegime::Critical
    } else if c < cstar {
        CRegime::Subcritical
    } else {
        CRegime::Supercritical
    };
    let item1 = RatePrediction {
        paper_claimed: (n - d * p) / d,
        paper_log_factor: false,
        scaling_derived: Some((n - d * p) / (d * p)),
        scaling_log_factor: false,
    };
    let item2 = [1.0, 2.0, p - 2.0, p - 1.0]
        .iter()
        .map(|&alpha| {
            (
                alpha,
                RatePrediction {
                    paper_claimed: alpha * (n - d * p) / (d * p),
                    paper_log_factor: false,
                    scaling_derived: None,
                    scaling_log_factor: false,
                },
            )
        })
        .collect();
    let item3 = match regime {
        CRegime::Supercritical => RatePrediction {
            paper_claimed: (n - d * p) / d,
            paper_log_factor: false,
            scaling_derived: Some((n - d * p) / (d * p)),
            scaling_log_factor: false,
        },
        CRegime::Critical => RatePrediction {
            paper_claimed: (n - d * p) / d,
            paper_log_factor: true,
            scaling_derived: Some((n - d * p) / (d * p)),
            scaling_log_factor: true,
        },
        CRegime::Subcritical => RatePrediction {
            paper_claimed: (p - 1.0) * (n - d * p) * (n + c - (params.a() + 1.0) * p)
                / (d * p * (n - p - params.a() * p)),
            paper_log_factor: false,
            // c/eta: dilation bookkeeping of the sub-threshold perturbation norm
            scaling_derived: Some(c / eta),
            scaling_log_factor: false,
        },
    };
    Ok(RateTable {
        regime,
        cstar,
        item1,
        item2,
        item3,
    })
}

/// One high-resolution measurement of the truncated-profile norms at `eps`,
/// normalized to the unit critical norm. `raw_*` are the unnormalized
/// integrals of `ψ U_eps` (reported because the whole-space Nehari
/// normalization is eps-dependent).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AsymptoticSample {
    pub eps: f64,
    pub grad_p_norm: f64,
    pub pert_norm: f64,
    pub raw_grad: f64,
    pub raw_critical: f64,
    pub raw_pert: f64,
}

/// Measure `ψ U_eps` on `B_radius` by log-space Simpson quadrature of the
/// closed-form profile (~1e-12 relative), the instrument behind the rate
/// fits: grid quadrature cannot resolve the gradient correction below its
/// own interpolation floor.
pub fn asymptotic_samples(
    params: &CknParams,
    radius: f64,
    eps_list: &[f64],
) -> Result<Vec<AsymptoticSample>, RateError> {
    params.require_subcritical_d()?;
    let n = params.nf();
    let p = params.p();
    let e = params.exponents();
    let eta = e.eta.expect("d > 0");
    let kappa = (n - e.d * p) / (e.d * p);
    let om = unit_sphere_area(params.n());
    let r_min = 1e-14 * radius;
    let t_lo = r_min.ln();
    let t_hi = (radius / 2.0).ln();
    let intervals = 1 << 17;

    let samples = eps_list
        .iter()
        .map(|&eps| {
            let u = |r: f64| cutoff_value(r, radius) * (eps + r.powf(eta)).powf(-kappa);
            let du = |r: f64| {
                cutoff_value(r, radius)
                    * (-kappa * eta * r.powf(eta - 1.0) * (eps + r.powf(eta)).powf(-kappa - 1.0))
                    + cutoff_slope(r, radius) * (eps + r.powf(eta)).powf(-kappa)
            };
            // weighted integrals with one-term head corrections below r_min
            let integral = |alpha: f64, f: &dyn Fn(f64) -> f64, sig_head: f64| -> f64 {
                let logf = |t: f64| {
                    let r = t.exp();
                    let v = r.powf(n - 1.0 - alpha) * f(r) * r;
                    if v > 0.0 {
                        v.ln()
                    } else {
                        f64::NEG_INFINITY
                    }
                };
                let mid = log_simpson(logf, t_lo, t_hi, intervals);
                let head = r_min.powf(n - 1.0 - alpha) * f(r_min) * r_min / (sig_head + 1.0);
                om * (mid + head)
            };
            let raw_grad = integral(
                params.a() * p,
                &|r| du(r).abs().powf(p),
                n - 1.0 - params.a() * p + (eta - 1.0) * p,
            );
            let raw_critical = integral(
                params.b() * e.q,
                &|r| u(r).powf(e.q),
                n - 1.0 - params.b() * e.q,
            );
            let raw_pert = integral(
                (params.a() + 1.0) * p - params.c(),
                &|r| u(r).powf(p),
                n - 1.0 - (params.a() + 1.0) * p + params.c(),
            );
            let denom = raw_critical.powf(p / e.q);
            AsymptoticSample {
                eps,
                grad_p_norm: raw_grad / denom,
                pert_norm: raw_pert / denom,
                raw_grad,
                raw_critical,
                raw_pert,
            }
        })
        .collect();
    Ok(samples)
}
