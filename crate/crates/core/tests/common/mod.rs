//! Independent oracles shared by the integration suites. Everything here is
//! deliberately disjoint from the library's computation paths: closed-form
//! Beta-function values for the best constant, a uniform-grid
//! finite-difference generalized eigensolve, and special-function roots.

use statrs::function::gamma::ln_gamma;
use std::f64::consts::PI;

/// `S_R(a,b)` in closed form: both whole-space norms of the extremal are
/// Beta-function integrals, `∫ r^{μ-1} (1+r^η)^{-ν} dr = B(μ/η, ν-μ/η)/η`.
pub fn s_radial_beta(n: u32, p: f64, a: f64, b: f64) -> f64 {
    let nf = f64::from(n);
    let d = 1.0 + a - b;
    let q = nf * p / (nf - d * p);
    let eta = d * p * (nf - p - p * a) / ((p - 1.0) * (nf - d * p));
    let kappa = (nf - d * p) / (d * p);
    let c0 = (nf / ((p - 1.0).powf(p - 1.0) * (nf - d * p))).powf((nf - d * p) / (d * p * p));
    let amp = c0 * (nf - p - p * a).powf(kappa);
    let omega = 2.0 * PI.powf(nf / 2.0) / (ln_gamma(nf / 2.0)).exp();
    let beta = |x: f64, y: f64| (ln_gamma(x) + ln_gamma(y) - ln_gamma(x + y)).exp();

    let mu_phi = nf - a * p + p * (eta - 1.0);
    let nu_phi = p * (kappa + 1.0);
    let phi = omega
        * (amp * kappa * eta).powf(p)
        * beta(mu_phi / eta, nu_phi - mu_phi / eta)
        / eta;

    let mu_n = nf - b * q;
    let nu_n = kappa * q;
    let qn = omega * amp.powf(q) * beta(mu_n / eta, nu_n - mu_n / eta) / eta;

    phi / qn.powf(p / q)
}

/// First positive root of `tan x = x`, i.e. `j_{3/2,1}`, by bisection.
pub fn bessel_j32_first_zero() -> f64 {
    let f = |x: f64| x.tan() - x;
    let mut lo = PI + 0.1;
    let mut hi = 1.5 * PI - 1e-9;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(lo) * f(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Smallest generalized eigenvalue of `-div(r^{n-1} u')' = λ r^{n-1} u` on a
/// uniform grid over `[0, R]` (Dirichlet at `R`, natural at 0), by a
/// tridiagonal flux-form assembly and Sturm bisection. This is the oracle
/// for the `p = 2, a = 0, c = 2` eigenvalue cases.
pub fn lambda1_fd_uniform(n: u32, radius: f64, intervals: usize) -> f64 {
    let nf = f64::from(n);
    let h = radius / intervals as f64;
    let w = |r: f64| r.powf(nf - 1.0);
    // DOFs at r_i = i h for i = 0 .. intervals-1
    let m = intervals;
    let mut diag = vec![0.0; m];
    let mut off = vec![0.0; m - 1];
    let mut mass = vec![0.0; m];
    // node 0: half cell, zero flux through r = 0
    diag[0] = w(0.5 * h) / h;
    mass[0] = (0.5 * h).powf(nf) / nf;
    for i in 1..m {
        let r = i as f64 * h;
        diag[i] = (w(r + 0.5 * h) + w(r - 0.5 * h)) / h;
        off[i - 1] = -w(r - 0.5 * h) / h;
        mass[i] = w(r) * h;
    }
    // Sturm count: negative pivots of K - x M equal #eigenvalues < x
    let count_below = |x: f64| -> usize {
        let mut count = 0;
        let mut t = diag[0] - x * mass[0];
        if t < 0.0 {
            count += 1;
        }
        for i in 1..m {
            let denom = if t.abs() < 1e-300 { 1e-300_f64.copysign(t) } else { t };
            t = diag[i] - x * mass[i] - off[i - 1] * off[i - 1] / denom;
            if t < 0.0 {
                count += 1;
            }
        }
        count
    };
    let mut lo = 0.0;
    let mut hi = 4.0 * (intervals as f64 / radius).powi(2); // above the spectrum floor scale
    while count_below(hi) < 1 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if count_below(mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Print one verdict line for an acceptance criterion, then enforce it.
pub fn criterion(number: u32, label: &str, pass: bool, detail: &str) {
    println!(
        "criterion {number} [{}] {label}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {number} failed: {label} ({detail})");
}
