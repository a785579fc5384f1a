//! Numerical laboratory for a weighted critical elliptic problem on balls:
//! closed-form extremal profiles and best constants, the weighted p-Laplace
//! eigenvalue problem, Pohozaev-identity checks with a nonexistence probe,
//! bubble-family asymptotic rate measurement, and a sub-critical-level
//! ground-state solver — all on radial geometric meshes with exact
//! singular-weight quadrature.

pub mod bubble;
mod descent;
pub mod eigen;
pub mod extremal;
pub mod grid;
pub mod params;
pub mod pohozaev;
pub mod rates;
pub mod solver;

pub use bubble::{
    atom_check, bubble_report, geometric_eps, make_bubble, sweep, sweep_csv, AtomReport,
    BubbleError, BubbleRecord,
};
pub use eigen::{first_eigenpair, rayleigh_lambda, EigenError, EigenPair};
pub use extremal::{
    bubble_value, extremal_value, k_eps, s_radial, s_radial_dilated, s_radial_scaled,
    ExtremalError, ExtremalProfile,
};
pub use grid::{
    critical_integral, energy_j, energy_phi, energy_total, fmt_sig17, rayleigh_ckn,
    weighted_integral, weighted_integral_upto, GridError, RadialField, RadialGrid,
};
pub use params::{derive_exponents, validate_params, CknParams, DerivedExponents, ParamError};
pub use pohozaev::{
    nonexistence_certificate, pohozaev_residual, pohozaev_residual_unweighted_boundary,
    pucci_serrin_check, IdentityReport, PohozaevError, SourceSpec,
};
pub use rates::{
    asymptotic_samples, fit_rate, fit_rate_points, rate_table, AsymptoticSample, CRegime,
    RateError, RateFit, RatePrediction, RateTable, RecordSelector,
};
pub use solver::{
    ground_state, nehari_quotient, nonexistence_probe, pde_residual, peak_scaling, threshold,
    ProbeLevel, ProbeReport, SolveReport, SolveStatus, SolverError,
};
