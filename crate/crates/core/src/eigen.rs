//! First eigenpair of the weighted eigenvalue problem
//! `-div(|x|^{-ap}|Du|^{p-2}Du) = λ |x|^{-(a+1)p+c}|u|^{p-2}u` on `B_R`,
//! by Rayleigh-quotient minimization `λ₁ = inf{Φ(u) : J(u) = 1}`.
//!
//! One descent code path serves every `p ∈ (1, n)`; for `p = 2` an
//! independent finite-difference generalized eigensolve acts as the test
//! oracle. The returned value is a feasible Rayleigh value, hence an upper
//! bound for the discrete minimum.

use crate::descent::{minimize_quotient, DescentOptions, EnergyContext, QuotientProblem};
use crate::grid::{RadialField, RadialGrid};
use crate::params::CknParams;
use std::sync::Arc;
use thiserror::Error;

pub const DEFAULT_EIGEN_TOL: f64 = 1e-10;
pub const DEFAULT_EIGEN_MAX_ITERS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EigenError {
    #[error("J(field) is zero; Rayleigh quotient undefined")]
    ZeroConstraint,
}

/// First eigenpair: `lambda1` scales like `R^{-c}` under dilation of the ball.
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub lambda1: f64,
    /// Nonnegative eigenfunction normalized to `J(e1) = 1`.
    pub e1: RadialField,
    pub iterations: usize,
    /// Final relative quotient change.
    pub residual: f64,
    pub converged: bool,
}

/// Rayleigh quotient `Φ(u) / J(u)`.
pub fn rayleigh_lambda(
    params: &CknParams,
    field: &RadialField,
) -> Result<f64, EigenError> {
    let ctx = EnergyContext::new(params, field.grid());
    let j = ctx.j(field.values());
    if j <= 0.0 {
        return Err(EigenError::ZeroConstraint);
    }
    Ok(ctx.phi(field.values()) / j)
}

/// Minimize `Φ/J` over Dirichlet fields starting from `1 - (r/R)^2`.
pub fn first_eigenpair(
    params: &CknParams,
    grid: &Arc<RadialGrid>,
    tol: f64,
    max_iters: usize,
) -> EigenPair {
    let ctx = EnergyContext::new(params, grid);
    let radius = grid.radius();
    let u0: Vec<f64> = grid
        .nodes()
        .iter()
        .map(|&r| 1.0 - (r / radius) * (r / radius))
        .collect();
    let problem = QuotientProblem {
        numerator: &|u| ctx.phi(u),
        numerator_grad: &|u, out| ctx.phi_grad(u, out),
        constraint: &|u| ctx.j(u),
        constraint_grad: &|u, out| ctx.j_grad(u, out),
        constraint_degree: params.p(),
        theta: 1.0,
        precondition: &|u, out| ctx.precondition(u, out),
    };
    let outcome =
        minimize_quotient(&problem, &u0, &DescentOptions::new(tol, max_iters), |_, _, _| false);
    let mut values = outcome.u;
    // sign normalization: the iterate is already clamped nonnegative, but make
    // the invariant explicit and restore J = 1 exactly after it.
    for v in values.iter_mut() {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    let j = ctx.j(&values);
    let scale = j.powf(-1.0 / params.p());
    for v in values.iter_mut() {
        *v *= scale;
    }
    let lambda1 = ctx.phi(&values) / ctx.j(&values);
    EigenPair {
        lambda1,
        e1: ctx.field(values),
        iterations: outcome.iterations,
        residual: outcome.residual,
        converged: outcome.converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::RadialGrid;
    use crate::params::validate_params;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn solve(n: u32, radius: f64, nodes: usize) -> EigenPair {
        let params = validate_params(n, 2.0, 0.0, 0.0, 2.0).unwrap();
        let grid = RadialGrid::build(n, radius, nodes, crate::grid::default_ratio(nodes)).unwrap();
        first_eigenpair(&params, &grid, DEFAULT_EIGEN_TOL, DEFAULT_EIGEN_MAX_ITERS)
    }

    #[test]
    fn ball_laplacian_eigenvalue_n3() {
        let pair = solve(3, 1.0, 2048);
        assert!(pair.converged);
        assert_relative_eq!(pair.lambda1, PI * PI, max_relative = 1e-3);
        // normalized and nonnegative
        let params = validate_params(3, 2.0, 0.0, 0.0, 2.0).unwrap();
        let j = crate::grid::energy_j(&params, &pair.e1).unwrap();
        assert_relative_eq!(j, 1.0, max_relative = 1e-10);
        assert!(pair.e1.values().iter().all(|&v| v >= 0.0));
        // consistency: rayleigh_lambda(e1) = lambda1
        assert_relative_eq!(
            rayleigh_lambda(&params, &pair.e1).unwrap(),
            pair.lambda1,
            max_relative = 1e-12
        );
    }

    #[test]
    fn lambda1_positive_and_upper_bound_for_random_fields() {
        use rand::{Rng, SeedableRng};
        let params = validate_params(3, 2.0, 0.1, 0.4, 1.5).unwrap();
        let grid = RadialGrid::build(3, 1.0, 512, crate::grid::default_ratio(512)).unwrap();
        let pair = first_eigenpair(&params, &grid, 1e-10, 50_000);
        assert!(pair.lambda1 > 0.0);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let vals: Vec<f64> = grid.nodes().iter().map(|_| rng.gen_range(0.0..1.0)).collect();
            let w = RadialField::dirichlet(grid.clone(), vals).unwrap();
            let quotient = rayleigh_lambda(&params, &w).unwrap();
            assert!(pair.lambda1 <= quotient + 1e-9);
        }
    }

    #[test]
    fn amplitude_invariance_of_quotient() {
        let params = validate_params(3, 2.0, 0.0, 0.0, 2.0).unwrap();
        let grid = RadialGrid::build(3, 1.0, 256, crate::grid::default_ratio(256)).unwrap();
        let u = RadialField::dirichlet(
            grid.clone(),
            grid.nodes().iter().map(|&r| (1.0 - r) * (0.5 + r)).collect(),
        )
        .unwrap();
        let mut tu = u.clone();
        tu.scale(13.0);
        assert_relative_eq!(
            rayleigh_lambda(&params, &u).unwrap(),
            rayleigh_lambda(&params, &tu).unwrap(),
            max_relative = 1e-12
        );
    }
}
