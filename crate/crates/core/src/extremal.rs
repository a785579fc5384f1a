//! Closed-form radial extremal profiles, the scaled bubble family, and the
//! radial best constant `S_R(a,b)`.
//!
//! The extremal of the weighted quotient is
//!
//! ```text
//! U(r) = c0 * ( (n-p-pa) / (1 + r^eta) )^{(n-dp)/(dp)},
//! eta  = dp(n-p-pa) / ((p-1)(n-dp)),
//! ```
//!
//! and the bubble family is `U_eps(r) = (eps + r^eta)^{-(n-dp)/(dp)}` with
//! amplitude factor `k(eps) = c0 (eps (n-p-ap))^{(n-dp)/(dp)}`, so that
//! `k(eps) U_eps(r) = U(r / eps^{1/eta})` is a pure dilation of `U`.
//!
//! `s_radial` evaluates the quotient at `U` by whole-line quadrature: a
//! log-space Simpson rule on `[r_min, R_inf]` plus analytic power-series
//! head/tail corrections whose exponents come from the closed-form decay
//! rate `(n-p-ap)/(p-1)`.

use crate::params::{unit_sphere_area, CknParams, ParamError};
use thiserror::Error;

/// Truncation radius for the whole-line quadrature.
pub const WHOLE_LINE_RADIUS: f64 = 1e6;
/// Inner truncation radius; below it the head series takes over.
pub const WHOLE_LINE_RMIN: f64 = 1e-8;
/// Relative tolerance target for `s_radial`.
pub const S_RADIAL_TOL: f64 = 1e-8;
/// Simpson intervals for the log-space middle section.
const MID_INTERVALS: usize = 1 << 17;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExtremalError {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error("whole-line tail correction did not converge: achieved relative tolerance {achieved:e} (target {target:e})")]
    NonConvergentTail { achieved: f64, target: f64 },
}

/// The radial extremal profile `U_{a,b}` with its exponent bundle.
#[derive(Debug, Clone, Copy)]
pub struct ExtremalProfile {
    params: CknParams,
    eta: f64,
    kappa: f64,
    amplitude: f64,
}

impl ExtremalProfile {
    pub fn new(params: CknParams) -> Result<Self, ParamError> {
        params.require_subcritical_d()?;
        let e = params.exponents();
        let kappa = (params.nf() - e.d * params.p()) / (e.d * params.p());
        let base = params.nf() - params.p() - params.p() * params.a();
        Ok(Self {
            params,
            eta: e.eta.expect("d > 0 checked"),
            kappa,
            amplitude: e.c0.expect("d > 0 checked") * base.powf(kappa),
        })
    }

    pub fn params(&self) -> &CknParams {
        &self.params
    }
    /// Radial power inside the profile denominator.
    pub fn eta(&self) -> f64 {
        self.eta
    }
    /// Decay bundle exponent `(n-dp)/(dp)`.
    pub fn kappa(&self) -> f64 {
        self.kappa
    }
    /// Value at the origin, `c0 (n-p-pa)^{(n-dp)/(dp)}`.
    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn value(&self, r: f64) -> f64 {
        self.amplitude * (1.0 + r.powf(self.eta)).powf(-self.kappa)
    }

    /// `dU/dr`; negative for r > 0.
    pub fn slope(&self, r: f64) -> f64 {
        if r == 0.0 {
            return 0.0;
        }
        -self.amplitude
            * self.kappa
            * self.eta
            * r.powf(self.eta - 1.0)
            * (1.0 + r.powf(self.eta)).powf(-self.kappa - 1.0)
    }
}

/// `U_{a,b}(r)` per the closed form; errs at the Hardy endpoint.
pub fn extremal_value(params: &CknParams, r: f64) -> Result<f64, ParamError> {
    Ok(ExtremalProfile::new(*params)?.value(r))
}

/// `U_eps(r) = (eps + r^eta)^{-(n-dp)/(dp)}`.
pub fn bubble_value(params: &CknParams, eps: f64, r: f64) -> Result<f64, ParamError> {
    params.require_subcritical_d()?;
    let e = params.exponents();
    let kappa = (params.nf() - e.d * params.p()) / (e.d * params.p());
    Ok((eps + r.powf(e.eta.expect("d > 0"))).powf(-kappa))
}

/// Amplitude factor `k(eps) = c0 (eps (n-p-ap))^{(n-dp)/(dp)}`.
pub fn k_eps(params: &CknParams, eps: f64) -> Result<f64, ParamError> {
    params.require_subcritical_d()?;
    let e = params.exponents();
    let kappa = (params.nf() - e.d * params.p()) / (e.d * params.p());
    let base = params.nf() - params.p() - params.a() * params.p();
    Ok(e.c0.expect("d > 0") * (eps * base).powf(kappa))
}

/// Composite Simpson rule for `exp(log_f(t))` over `[t_lo, t_hi]`.
pub(crate) fn log_simpson(log_f: impl Fn(f64) -> f64, t_lo: f64, t_hi: f64, intervals: usize) -> f64 {
    let m = intervals + intervals % 2; // even
    let h = (t_hi - t_lo) / m as f64;
    let eval = |i: usize| -> f64 {
        let lf = log_f(t_lo + h * i as f64);
        if lf < -745.0 {
            0.0
        } else {
            lf.exp()
        }
    };
    let mut acc = eval(0) + eval(m);
    let mut i = 1;
    while i < m {
        acc += 4.0 * eval(i);
        if i + 1 < m {
            acc += 2.0 * eval(i + 1);
        }
        i += 2;
    }
    acc * h / 3.0
}

/// `ln(1 + e^x)` without overflow.
fn softplus(x: f64) -> f64 {
    if x > 34.0 {
        x + (-x).exp()
    } else {
        x.exp().ln_1p()
    }
}

/// Generalized binomial series sum `Σ_k C(-nu, k) x_k` where the caller maps
/// term index to the analytic integral factor. Returns `(sum, first neglected
/// |term| / |sum|)`; the second component is the achieved-tolerance estimate.
fn binom_series(nu: f64, mut term_factor: impl FnMut(usize) -> f64) -> (f64, f64) {
    let mut coeff = 1.0; // C(-nu, 0)
    let mut sum = 0.0;
    let mut last = f64::INFINITY;
    for k in 0..64 {
        let term = coeff * term_factor(k);
        let mag = term.abs();
        if k > 0 && mag >= last {
            // series stopped contracting; report what is left on the table
            return (sum, mag / sum.abs().max(f64::MIN_POSITIVE));
        }
        sum += term;
        if mag <= 1e-18 * sum.abs() {
            return (sum, 0.0);
        }
        last = mag;
        coeff *= (-nu - k as f64) / (k as f64 + 1.0);
    }
    (sum, last / sum.abs().max(f64::MIN_POSITIVE))
}

/// `∫_0^∞ r^sigma (1 + r^eta)^{-nu} dr` over a dilated window:
/// middle `[r_lo, r_hi]` by log-Simpson, ends by binomial series.
/// Returns `(value, relative tolerance estimate)`.
fn power_integral(sigma: f64, eta: f64, nu: f64, r_lo: f64, r_hi: f64) -> (f64, f64) {
    let log_f = |t: f64| (sigma + 1.0) * t - nu * softplus(eta * t);
    let mid = log_simpson(log_f, r_lo.ln(), r_hi.ln(), MID_INTERVALS);
    // head: Σ_k C(-nu,k) r_lo^{sigma+1+k eta} / (sigma+1+k eta)
    let (head, head_tol) = binom_series(nu, |k| {
        let e = sigma + 1.0 + k as f64 * eta;
        r_lo.powf(e) / e
    });
    // tail: Σ_k C(-nu,k) r_hi^{sigma+1-eta(nu+k)} / (eta(nu+k)-sigma-1)
    let (tail, tail_tol) = binom_series(nu, |k| {
        let e = eta * (nu + k as f64) - sigma - 1.0;
        r_hi.powf(-e) / e
    });
    let total = mid + head + tail;
    let tol = (head_tol * head.abs() + tail_tol * tail.abs()) / total.abs().max(f64::MIN_POSITIVE);
    (total, tol)
}

/// Whole-line weighted norms of the extremal profile dilated by `scale`
/// (i.e. of `U(r/scale)`): the gradient p-norm `Φ` and the critical q-norm.
pub(crate) fn profile_whole_line_norms(
    params: &CknParams,
    scale: f64,
) -> Result<(f64, f64, f64), ExtremalError> {
    let profile = ExtremalProfile::new(*params)?;
    let n = params.nf();
    let p = params.p();
    let e = params.exponents();
    let eta = profile.eta();
    let kappa = profile.kappa();
    let om = unit_sphere_area(params.n());

    // Dilation maps the quadrature window; the integrand keeps its shape.
    let r_lo = WHOLE_LINE_RMIN / scale;
    let r_hi = WHOLE_LINE_RADIUS / scale;

    let c_phi = (profile.amplitude() * kappa * eta).powf(p);
    let sigma_phi = n - 1.0 - params.a() * p + (eta - 1.0) * p;
    let nu_phi = (kappa + 1.0) * p;
    let (i_phi, tol_phi) = power_integral(sigma_phi, eta, nu_phi, r_lo, r_hi);

    let c_n = profile.amplitude().powf(e.q);
    let sigma_n = n - 1.0 - params.b() * e.q;
    let nu_n = kappa * e.q;
    let (i_n, tol_n) = power_integral(sigma_n, eta, nu_n, r_lo, r_hi);

    let s_phi = scale.powf(n - p - params.a() * p);
    let s_n = scale.powf(n - params.b() * e.q);
    Ok((om * c_phi * i_phi * s_phi, om * c_n * i_n * s_n, tol_phi + tol_n))
}

/// Best constant over radial functions, `S_R(a,b) = E_{a,b}(U)`, by
/// whole-line quadrature of the scale-invariant quotient.
pub fn s_radial(params: &CknParams) -> Result<f64, ExtremalError> {
    s_radial_dilated(params, 1.0)
}

/// Same quotient evaluated at the dilated profile `U(r/scale)`; the result is
/// scale-invariant up to quadrature tolerance.
pub fn s_radial_dilated(params: &CknParams, scale: f64) -> Result<f64, ExtremalError> {
    let (phi, qn, tol) = profile_whole_line_norms(params, scale)?;
    if tol > S_RADIAL_TOL {
        return Err(ExtremalError::NonConvergentTail {
            achieved: tol,
            target: S_RADIAL_TOL,
        });
    }
    Ok(phi / qn.powf(params.p() / params.q()))
}

/// `E_{a,b}` at `amplitude * U(r/scale)`; amplitude and scale cancel
/// algebraically, so this exists to check the cancellation numerically.
pub fn s_radial_scaled(params: &CknParams, amplitude: f64, scale: f64) -> Result<f64, ExtremalError> {
    let (phi, qn, tol) = profile_whole_line_norms(params, scale)?;
    if tol > S_RADIAL_TOL {
        return Err(ExtremalError::NonConvergentTail {
            achieved: tol,
            target: S_RADIAL_TOL,
        });
    }
    let e = params.exponents();
    let phi_t = amplitude.abs().powf(params.p()) * phi;
    let qn_t = amplitude.abs().powf(e.q) * qn;
    Ok(phi_t / qn_t.powf(params.p() / e.q))
}
