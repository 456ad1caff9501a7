//! Jacobi and Riemann theta functions with certified truncation, the branch
//! of `det(-i tau)^{1/2}`, and residuals of the analytic identities.

pub mod identities;
pub mod linalg;
pub mod series;

pub use identities::{
    det_branch, jacobi_transform_residual, jacobi_transform_sides, real_limit_exact, riemann_transform_residual,
    riemann_transform_sides, theta_average_residual, theta_average_sides, theta_km_residual, theta_km_sides,
    thmb_finite_tau_residual, thmb_finite_tau_sides, thmb_large_tau_limit, DetBranchMode, LargeTauLimit,
};
pub use linalg::{symmetric_eigenvalues, CMatrix, SiegelPoint};
pub use series::{jacobi_theta, riemann_theta, riemann_theta_with_radius, theta_km, ThetaValue};
