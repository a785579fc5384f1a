//! Geometric radial meshes on `[0, R]` and exact-per-cell singular-weight
//! quadrature for piecewise-linear radial fields.
//!
//! All integrals are of the form `ω ∫ r^{n-1-α} φ(r) dr` with `φ` taken
//! linear on each cell and the power weight integrated exactly (power rule),
//! so the rule is exact whenever `φ` itself is piecewise linear. Derivatives
//! of a field are the per-cell slopes; no higher-order reconstruction.

use crate::params::{unit_sphere_area, CknParams};
use std::fmt::Write as _;
use std::sync::Arc;
use thiserror::Error;

/// Default node count (including the origin).
pub const DEFAULT_NODES: usize = 4096;

/// Default geometric ratio for `node_count` nodes: places `r_1 ≈ 1e-12 R`.
pub fn default_ratio(node_count: usize) -> f64 {
    10f64.powf(12.0 / (node_count as f64 - 1.0))
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("ratio must exceed 1, got {ratio}")]
    InvalidRatio { ratio: f64 },
    #[error("node_count must be at least 16, got {node_count}")]
    TooFewNodes { node_count: usize },
    #[error("radius must be positive and finite, got {radius}")]
    InvalidRadius { radius: f64 },
    #[error("grid degenerated: nodes not strictly increasing (ratio {ratio}, node_count {node_count})")]
    Degenerate { ratio: f64, node_count: usize },
    #[error("field has {values} values but grid has {nodes} nodes")]
    LengthMismatch { values: usize, nodes: usize },
    #[error("field value at node {index} is not finite")]
    NonFiniteValue { index: usize },
    #[error("non-integrable weight: alpha = {alpha} >= n = {n}")]
    NonIntegrableWeight { alpha: f64, n: u32 },
    #[error("zero denominator in quotient (field vanishes in the weighted norm)")]
    ZeroDenominator,
}

/// Geometric radial mesh: `r_0 = 0`, `r_i = R ρ^{i-M}` for `i = 1..M`.
#[derive(Debug, Clone)]
pub struct RadialGrid {
    n_dim: u32,
    radius: f64,
    ratio: f64,
    nodes: Vec<f64>,
    sphere_area: f64,
}

impl RadialGrid {
    /// Build the geometric mesh; `node_count` counts all nodes including the
    /// origin, so `M = node_count - 1` and `r_M = R` exactly.
    pub fn build(n_dim: u32, radius: f64, node_count: usize, ratio: f64) -> Result<Arc<Self>, GridError> {
        if !(ratio > 1.0) || !ratio.is_finite() {
            return Err(GridError::InvalidRatio { ratio });
        }
        if node_count < 16 {
            return Err(GridError::TooFewNodes { node_count });
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(GridError::InvalidRadius { radius });
        }
        let m = node_count - 1;
        let mut nodes = Vec::with_capacity(node_count);
        nodes.push(0.0);
        for i in 1..=m {
            nodes.push(radius * ratio.powi(i as i32 - m as i32));
        }
        nodes[m] = radius;
        for i in 1..nodes.len() {
            if !(nodes[i] > nodes[i - 1]) {
                return Err(GridError::Degenerate { ratio, node_count });
            }
        }
        Ok(Arc::new(Self {
            n_dim,
            radius,
            ratio,
            nodes,
            sphere_area: unit_sphere_area(n_dim),
        }))
    }

    /// Default mesh for a problem: 4096 nodes, `r_1 ≈ 1e-12 R`.
    pub fn default_for(n_dim: u32, radius: f64) -> Arc<Self> {
        Self::build(n_dim, radius, DEFAULT_NODES, default_ratio(DEFAULT_NODES))
            .expect("default grid parameters are valid")
    }

    pub fn n_dim(&self) -> u32 {
        self.n_dim
    }
    pub fn radius(&self) -> f64 {
        self.radius
    }
    pub fn ratio(&self) -> f64 {
        self.ratio
    }
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }
    pub fn sphere_area(&self) -> f64 {
        self.sphere_area
    }

    /// Exact cell integrals `ω ∫_{cell_i} r^m dr`, `m = n-1-alpha`.
    pub(crate) fn cell_weights(&self, alpha: f64) -> Vec<f64> {
        let m = f64::from(self.n_dim) - 1.0 - alpha;
        let om = self.sphere_area;
        self.nodes
            .windows(2)
            .map(|w| om * (w[1].powf(m + 1.0) - w[0].powf(m + 1.0)) / (m + 1.0))
            .collect()
    }

    /// Lumped node weights `W_j` with `ω ∫ r^m lin(φ) dr = Σ_j W_j φ_j`.
    pub(crate) fn node_weights(&self, alpha: f64) -> Vec<f64> {
        let m = f64::from(self.n_dim) - 1.0 - alpha;
        let om = self.sphere_area;
        let mut weights = vec![0.0; self.nodes.len()];
        for (i, w) in self.nodes.windows(2).enumerate() {
            let (r0, r1) = (w[0], w[1]);
            let h = r1 - r0;
            let p0 = (r1.powf(m + 1.0) - r0.powf(m + 1.0)) / (m + 1.0);
            let p1 = (r1.powf(m + 2.0) - r0.powf(m + 2.0)) / (m + 2.0);
            weights[i] += om * (r1 * p0 - p1) / h;
            weights[i + 1] += om * (p1 - r0 * p0) / h;
        }
        weights
    }

    fn check_weight(&self, alpha: f64) -> Result<(), GridError> {
        // integrability on the first cell: n-1-alpha > -1
        if alpha >= f64::from(self.n_dim) {
            return Err(GridError::NonIntegrableWeight {
                alpha,
                n: self.n_dim,
            });
        }
        Ok(())
    }
}

/// Piecewise-linear radial function on a [`RadialGrid`].
#[derive(Debug, Clone)]
pub struct RadialField {
    grid: Arc<RadialGrid>,
    values: Vec<f64>,
}

impl RadialField {
    pub fn new(grid: Arc<RadialGrid>, values: Vec<f64>) -> Result<Self, GridError> {
        if values.len() != grid.node_count() {
            return Err(GridError::LengthMismatch {
                values: values.len(),
                nodes: grid.node_count(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(GridError::NonFiniteValue { index });
        }
        Ok(Self { grid, values })
    }

    /// Build from node values and force the Dirichlet condition `u(R) = 0`.
    pub fn dirichlet(grid: Arc<RadialGrid>, mut values: Vec<f64>) -> Result<Self, GridError> {
        if let Some(last) = values.last_mut() {
            *last = 0.0;
        }
        Self::new(grid, values)
    }

    /// Sample a function of `r` at the nodes (Dirichlet end untouched).
    pub fn from_fn(grid: Arc<RadialGrid>, f: impl Fn(f64) -> f64) -> Result<Self, GridError> {
        let values = grid.nodes().iter().map(|&r| f(r)).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_dirichlet(&self) -> bool {
        *self.values.last().expect("non-empty") == 0.0
    }

    pub fn scale(&mut self, t: f64) {
        for v in &mut self.values {
            *v *= t;
        }
    }

    /// Per-cell slopes `(u_{i+1} - u_i) / h_i`.
    pub fn slopes(&self) -> Vec<f64> {
        self.grid
            .nodes()
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(r, u)| (u[1] - u[0]) / (r[1] - r[0]))
            .collect()
    }

    /// Boundary normal derivative `u'(R)` from the quadratic through the last
    /// three nodes; exact for quadratic profiles, second order otherwise.
    pub fn boundary_derivative(&self) -> f64 {
        let n = self.values.len();
        let (x0, x1, x2) = (
            self.grid.nodes()[n - 3],
            self.grid.nodes()[n - 2],
            self.grid.nodes()[n - 1],
        );
        let (u0, u1, u2) = (self.values[n - 3], self.values[n - 2], self.values[n - 1]);
        u0 * (x2 - x1) / ((x0 - x1) * (x0 - x2))
            + u1 * (x2 - x0) / ((x1 - x0) * (x1 - x2))
            + u2 * (2.0 * x2 - x0 - x1) / ((x2 - x0) * (x2 - x1))
    }

    /// CSV serialization: header `r,u`, decimal notation, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,u\n");
        for (r, u) in self.grid.nodes().iter().zip(&self.values) {
            let _ = writeln!(out, "{},{}", fmt_sig17(*r), fmt_sig17(*u));
        }
        out
    }
}

/// Decimal (non-scientific) formatting with 17 significant digits; enough to
/// round-trip any f64 and keep byte-identical outputs across runs.
pub fn fmt_sig17(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let exp = v.abs().log10().floor() as i32;
    let decimals = (16 - exp).max(0) as usize;
    format!("{v:.decimals$}")
}

/// `ω ∫_0^R r^{n-1-alpha} |u|^s dr` with `|u|^s` linear per cell.
pub fn weighted_integral(field: &RadialField, alpha: f64, s: f64) -> Result<f64, GridError> {
    let grid = field.grid();
    grid.check_weight(alpha)?;
    let weights = grid.node_weights(alpha);
    Ok(weights
        .iter()
        .zip(field.values())
        .map(|(w, u)| w * u.abs().powf(s))
        .sum())
}

/// Same integral truncated to the ball `B_{r_cut}`; the cell containing
/// `r_cut` contributes its exact partial power-rule integral.
pub fn weighted_integral_upto(
    field: &RadialField,
    alpha: f64,
    s: f64,
    r_cut: f64,
) -> Result<f64, GridError> {
    let grid = field.grid();
    grid.check_weight(alpha)?;
    let m = f64::from(grid.n_dim()) - 1.0 - alpha;
    let om = grid.sphere_area();
    let nodes = grid.nodes();
    let mut acc = 0.0;
    for i in 0..nodes.len() - 1 {
        let (r0, r1) = (nodes[i], nodes[i + 1]);
        if r0 >= r_cut {
            break;
        }
        let hi = r1.min(r_cut);
        let phi0 = field.values()[i].abs().powf(s);
        let phi1 = field.values()[i + 1].abs().powf(s);
        let h = r1 - r0;
        let slope = (phi1 - phi0) / h;
        let a0 = phi0 - slope * r0;
        let p0 = (hi.powf(m + 1.0) - r0.powf(m + 1.0)) / (m + 1.0);
        let p1 = (hi.powf(m + 2.0) - r0.powf(m + 2.0)) / (m + 2.0);
        acc += om * (a0 * p0 + slope * p1);
    }
    Ok(acc)
}

/// Exact `ω ∫ r^{n-1-alpha} f(r) g(r) dr` for two piecewise-linear node
/// arrays (their product is quadratic per cell; power rule in three terms).
pub fn weighted_product_integral(
    grid: &RadialGrid,
    f: &[f64],
    g: &[f64],
    alpha: f64,
) -> Result<f64, GridError> {
    if f.len() != grid.node_count() || g.len() != grid.node_count() {
        return Err(GridError::LengthMismatch {
            values: f.len().min(g.len()),
            nodes: grid.node_count(),
        });
    }
    grid.check_weight(alpha)?;
    let m = f64::from(grid.n_dim()) - 1.0 - alpha;
    let om = grid.sphere_area();
    let nodes = grid.nodes();
    let mut acc = 0.0;
    for i in 0..nodes.len() - 1 {
        let (r0, r1) = (nodes[i], nodes[i + 1]);
        let h = r1 - r0;
        let sf = (f[i + 1] - f[i]) / h;
        let sg = (g[i + 1] - g[i]) / h;
        let af = f[i] - sf * r0;
        let ag = g[i] - sg * r0;
        let p0 = (r1.powf(m + 1.0) - r0.powf(m + 1.0)) / (m + 1.0);
        let p1 = (r1.powf(m + 2.0) - r0.powf(m + 2.0)) / (m + 2.0);
        let p2 = (r1.powf(m + 3.0) - r0.powf(m + 3.0)) / (m + 3.0);
        acc += om * (af * ag * p0 + (af * sg + ag * sf) * p1 + sf * sg * p2);
    }
    Ok(acc)
}

/// Gradient functional `Φ(u) = ω ∫ r^{n-1-ap} |u'|^p dr`, exact on the
/// broken-linear class (slopes are per-cell constants).
pub fn energy_phi(params: &CknParams, field: &RadialField) -> f64 {
    gradient_alpha_integral(params, field, params.p())
}

/// `ω ∫ r^{n-1-ap} |u'|^alpha dr` for the Lemma-style alpha-norms.
pub fn gradient_alpha_integral(params: &CknParams, field: &RadialField, alpha_pow: f64) -> f64 {
    let cells = field.grid().cell_weights(params.a() * params.p());
    cells
        .iter()
        .zip(field.slopes())
        .map(|(w, s)| w * s.abs().powf(alpha_pow))
        .sum()
}

/// Gradient mass restricted to `B_{r_cut}` (partial last cell exact).
pub fn energy_phi_upto(params: &CknParams, field: &RadialField, r_cut: f64) -> f64 {
    let grid = field.grid();
    let m = f64::from(grid.n_dim()) - 1.0 - params.a() * params.p();
    let om = grid.sphere_area();
    let nodes = grid.nodes();
    let slopes = field.slopes();
    let mut acc = 0.0;
    for (i, s) in slopes.iter().enumerate() {
        let (r0, r1) = (nodes[i], nodes[i + 1]);
        if r0 >= r_cut {
            break;
        }
        let hi = r1.min(r_cut);
        acc += om * (hi.powf(m + 1.0) - r0.powf(m + 1.0)) / (m + 1.0) * s.abs().powf(params.p());
    }
    acc
}

/// Perturbation functional `J(u) = ω ∫ r^{n-1-(a+1)p+c} |u|^p dr`.
pub fn energy_j(params: &CknParams, field: &RadialField) -> Result<f64, GridError> {
    weighted_integral(field, (params.a() + 1.0) * params.p() - params.c(), params.p())
}

/// Critical-norm integral `ω ∫ r^{n-1-bq} |u|^q dr`.
pub fn critical_integral(params: &CknParams, field: &RadialField) -> Result<f64, GridError> {
    weighted_integral(field, params.b() * params.q(), params.q())
}

/// Full action `E_λ(u) = Φ/p - (1/q)∫|x|^{-bq}|u|^q - (λ/p) J`.
pub fn energy_total(
    params: &CknParams,
    field: &RadialField,
    lambda: f64,
) -> Result<f64, GridError> {
    let phi = energy_phi(params, field);
    let nq = critical_integral(params, field)?;
    let j = energy_j(params, field)?;
    Ok(phi / params.p() - nq / params.q() - lambda / params.p() * j)
}

/// Weighted quotient `Φ(u) / (∫|x|^{-bq}|u|^q)^{p/q}`.
pub fn rayleigh_ckn(params: &CknParams, field: &RadialField) -> Result<f64, GridError> {
    let nq = critical_integral(params, field)?;
    if nq <= 0.0 {
        return Err(GridError::ZeroDenominator);
    }
    Ok(energy_phi(params, field) / nq.powf(params.p() / params.q()))
}
