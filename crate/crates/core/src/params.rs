//! Problem parameters and derived exponents.
//!
//! The model problem on a ball `B_R` is
//!
//! ```text
//! -div(|x|^{-ap} |Du|^{p-2} Du) = |x|^{-bq} |u|^{q-2} u + λ |x|^{-(a+1)p+c} |u|^{p-2} u
//! ```
//!
//! with `1 < p < n`, `a < (n-p)/p`, `a ≤ b ≤ a+1`, `c > 0` and the critical
//! exponent `q = np/(n-dp)`, `d = 1+a-b ∈ [0,1]`. Everything downstream
//! (quadrature weights, eigenvalue problem, bubble family, energy thresholds)
//! is driven by the exponent bundle computed here.

use serde::Serialize;
use thiserror::Error;

/// Tolerance under which `d = 1+a-b` is treated as exactly zero (the Hardy
/// endpoint `b = a+1`). Guards against float noise in `1.0 + a - b`.
pub const HARDY_EPS: f64 = 1e-12;

/// Violations of the admissible parameter region, one variant per constraint.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("p-range violated: require 1 < p < n, got p = {p}, n = {n}")]
    PRange { p: f64, n: u32 },
    #[error("a-range violated: require a < (n-p)/p = {limit}, got a = {a}")]
    ARange { a: f64, limit: f64 },
    #[error("b-range violated: require a <= b <= a+1, got a = {a}, b = {b}")]
    BRange { a: f64, b: f64 },
    #[error("c-positivity violated: require c > 0, got c = {c}")]
    CPositivity { c: f64 },
    #[error("dimension must be an integer >= 2, got n = {n}")]
    Dimension { n: u32 },
    #[error("parameter {name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },
    #[error("Hardy endpoint d = 0 (b = a+1): parameters are valid but the requested operation needs d > 0")]
    HardyUnsupported,
}

/// Validated problem parameters `(n, p, a, b, c)`.
///
/// Constructed only through [`CknParams::validate`], so every instance
/// satisfies the admissibility constraints and the derived consequences
/// `(a+1)p < n` and `bq < n` (weight integrability).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CknParams {
    n: u32,
    p: f64,
    a: f64,
    b: f64,
    c: f64,
}

/// Exponent bundle derived from validated parameters.
///
/// `eta` is the radial power inside the extremal profile,
/// `eta = dp(n-p-pa)/((p-1)(n-dp))`, and `c0` the profile amplitude
/// constant. `nehari_exp = n/(dp)` and `eta`/`c0` degenerate at the Hardy
/// endpoint and are `None` there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedExponents {
    pub d: f64,
    pub q: f64,
    pub cstar: f64,
    pub eta: Option<f64>,
    pub c0: Option<f64>,
    pub nehari_exp: Option<f64>,
    pub gap_coeff: f64,
}

/// Validate raw inputs into [`CknParams`].
///
/// The Hardy endpoint `d = 0` is accepted here (it is a valid parameter
/// point); operations that need `d > 0` signal [`ParamError::HardyUnsupported`]
/// themselves.
pub fn validate_params(n: u32, p: f64, a: f64, b: f64, c: f64) -> Result<CknParams, ParamError> {
    CknParams::validate(n, p, a, b, c)
}

impl CknParams {
    pub fn validate(n: u32, p: f64, a: f64, b: f64, c: f64) -> Result<Self, ParamError> {
        for (name, value) in [("p", p), ("a", a), ("b", b), ("c", c)] {
            if !value.is_finite() {
                return Err(ParamError::NonFinite { name, value });
            }
        }
        if n < 2 {
            return Err(ParamError::Dimension { n });
        }
        let nf = f64::from(n);
        if !(p > 1.0 && p < nf) {
            return Err(ParamError::PRange { p, n });
        }
        let a_limit = (nf - p) / p;
        if a >= a_limit {
            return Err(ParamError::ARange { a, limit: a_limit });
        }
        if b < a || b > a + 1.0 + HARDY_EPS {
            return Err(ParamError::BRange { a, b });
        }
        if c <= 0.0 {
            return Err(ParamError::CPositivity { c });
        }
        let params = Self { n, p, a, b, c };
        // Consequences of the constraints; cheap to assert once per construction.
        debug_assert!((a + 1.0) * p < nf);
        debug_assert!(params.b * params.exponents().q < nf + 1e-9);
        Ok(params)
    }

    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn nf(&self) -> f64 {
        f64::from(self.n)
    }
    pub fn p(&self) -> f64 {
        self.p
    }
    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }

    /// `d = 1 + a - b`, clamped to exactly 0 within [`HARDY_EPS`].
    pub fn d(&self) -> f64 {
        let d = 1.0 + self.a - self.b;
        if d.abs() < HARDY_EPS {
            0.0
        } else {
            d
        }
    }

    /// `b = a + 1`, where `q` degenerates to `p` and the bubble family is undefined.
    pub fn is_hardy_endpoint(&self) -> bool {
        self.d() == 0.0
    }

    /// Errs with [`ParamError::HardyUnsupported`] unless `d > 0`.
    pub fn require_subcritical_d(&self) -> Result<(), ParamError> {
        if self.is_hardy_endpoint() {
            Err(ParamError::HardyUnsupported)
        } else {
            Ok(())
        }
    }

    /// Critical exponent `q = np/(n - dp)`.
    pub fn q(&self) -> f64 {
        let d = self.d();
        self.nf() * self.p / (self.nf() - d * self.p)
    }

    pub fn exponents(&self) -> DerivedExponents {
        let n = self.nf();
        let p = self.p;
        let d = self.d();
        let q = self.q();
        let cstar = (n - p - self.a * p) / (p - 1.0);
        let (eta, c0, nehari_exp) = if d > 0.0 {
            let eta = d * p * (n - p - p * self.a) / ((p - 1.0) * (n - d * p));
            let c0 = (n / ((p - 1.0).powf(p - 1.0) * (n - d * p))).powf((n - d * p) / (d * p * p));
            (Some(eta), Some(c0), Some(n / (d * p)))
        } else {
            (None, None, None)
        };
        DerivedExponents {
            d,
            q,
            cstar,
            eta,
            c0,
            nehari_exp,
            gap_coeff: d / n,
        }
    }
}

pub fn derive_exponents(params: &CknParams) -> DerivedExponents {
    params.exponents()
}

/// Surface measure of the unit (n-1)-sphere, `2 π^{n/2} / Γ(n/2)`.
///
/// Γ at integer and half-integer arguments is evaluated exactly, so no
/// general gamma implementation is needed.
pub fn unit_sphere_area(n: u32) -> f64 {
    use std::f64::consts::PI;
    let gamma_half = if n % 2 == 0 {
        // Γ(n/2) = (n/2 - 1)!
        let mut g = 1.0;
        for k in 2..(n / 2) {
            g *= f64::from(k);
        }
        g
    } else {
        // Γ(n/2) = sqrt(pi) * (n-2)!! / 2^{(n-1)/2}
        let mut dfac = 1.0;
        let mut k = n as i64 - 2;
        while k >= 2 {
            dfac *= k as f64;
            k -= 2;
        }
        PI.sqrt() * dfac / 2f64.powi((n as i32 - 1) / 2)
    };
    2.0 * PI.powf(f64::from(n) / 2.0) / gamma_half
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn validates_basic_cases() {
        let p = validate_params(3, 2.0, 0.0, 0.0, 2.0).unwrap();
        assert_eq!(p.d(), 1.0);
        assert!(!p.is_hardy_endpoint());

        let hardy = validate_params(4, 2.0, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(hardy.d(), 0.0);
        assert!(hardy.is_hardy_endpoint());
        assert!(matches!(
            hardy.require_subcritical_d(),
            Err(ParamError::HardyUnsupported)
        ));
    }

    #[test]
    fn each_constraint_gets_its_own_error() {
        assert!(matches!(
            validate_params(3, 4.0, 0.0, 0.0, 1.0),
            Err(ParamError::PRange { .. })
        ));
        // a >= (n-p)/p = 0.5
        assert!(matches!(
            validate_params(3, 2.0, 0.6, 0.6, 1.0),
            Err(ParamError::ARange { .. })
        ));
        assert!(matches!(
            validate_params(3, 2.0, 0.0, -0.1, 1.0),
            Err(ParamError::BRange { .. })
        ));
        assert!(matches!(
            validate_params(3, 2.0, 0.0, 1.1, 1.0),
            Err(ParamError::BRange { .. })
        ));
        assert!(matches!(
            validate_params(3, 2.0, 0.0, 0.0, 0.0),
            Err(ParamError::CPositivity { .. })
        ));
        assert!(matches!(
            validate_params(1, 0.5, 0.0, 0.0, 1.0),
            Err(ParamError::Dimension { .. })
        ));
        assert!(matches!(
            validate_params(3, f64::NAN, 0.0, 0.0, 1.0),
            Err(ParamError::NonFinite { .. })
        ));
    }

    #[test]
    fn derived_exponents_match_arithmetic() {
        let e = validate_params(3, 2.0, 0.0, 0.0, 2.0).unwrap().exponents();
        assert_relative_eq!(e.d, 1.0);
        assert_relative_eq!(e.q, 6.0);
        assert_relative_eq!(e.cstar, 1.0);
        assert_relative_eq!(e.eta.unwrap(), 2.0);
        assert_relative_eq!(e.c0.unwrap(), 3f64.powf(0.25), max_relative = 1e-15);
        assert_relative_eq!(e.nehari_exp.unwrap(), 1.5);

        let e = validate_params(5, 2.0, 0.5, 1.0, 1.0).unwrap().exponents();
        assert_relative_eq!(e.d, 0.5);
        assert_relative_eq!(e.q, 2.5);
        assert_relative_eq!(e.cstar, 2.0);

        let e = validate_params(5, 2.0, 0.0, 0.0, 1.0).unwrap().exponents();
        assert_relative_eq!(e.d, 1.0);
        assert_relative_eq!(e.q, 10.0 / 3.0, max_relative = 1e-15);
        assert_relative_eq!(e.cstar, 3.0);
        assert_relative_eq!(e.gap_coeff, 0.2);
    }

    #[test]
    fn hardy_endpoint_has_no_bubble_exponents() {
        let e = validate_params(4, 2.0, 0.0, 1.0, 1.0).unwrap().exponents();
        assert_eq!(e.d, 0.0);
        assert_relative_eq!(e.q, 2.0);
        assert!(e.eta.is_none());
        assert!(e.c0.is_none());
        assert!(e.nehari_exp.is_none());
    }

    #[test]
    fn exponent_identities_hold_over_random_admissible_sample() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x51ab);
        for _ in 0..500 {
            let n = rng.gen_range(2..=8u32);
            let nf = f64::from(n);
            let p = rng.gen_range(1.05..nf - 0.05);
            let a_hi = (nf - p) / p;
            let a = rng.gen_range(-2.0..a_hi - 1e-3);
            let d = rng.gen_range(0.05..1.0);
            let b = a + 1.0 - d;
            let c = rng.gen_range(0.1..5.0);
            let params = validate_params(n, p, a, b, c).unwrap();
            let e = params.exponents();
            // 1/p - 1/q = d/n and q/(q-p) = n/(dp)
            assert_relative_eq!(1.0 / p - 1.0 / e.q, e.d / nf, max_relative = 1e-12);
            assert_relative_eq!(
                e.q / (e.q - p),
                nf / (e.d * p),
                max_relative = 1e-12
            );
            assert!(e.q > p);
            // weight integrability consequences
            assert!((a + 1.0) * p < nf);
            assert!(b * e.q < nf);
        }
    }

    #[test]
    fn sphere_areas() {
        assert_relative_eq!(unit_sphere_area(2), 2.0 * PI, max_relative = 1e-14);
        assert_relative_eq!(unit_sphere_area(3), 4.0 * PI, max_relative = 1e-12);
        assert_relative_eq!(unit_sphere_area(4), 2.0 * PI * PI, max_relative = 1e-14);
        // omega_4 = 2 pi^{5/2} / Gamma(5/2), Gamma(5/2) = 3 sqrt(pi) / 4
        assert_relative_eq!(
            unit_sphere_area(5),
            8.0 * PI * PI / 3.0,
            max_relative = 1e-14
        );
    }
}
