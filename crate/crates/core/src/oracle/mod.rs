//! Independent checks on the solver: analytic derivatives, KKT residuals,
//! an exhaustive grid and a multi-start projected ascent.

mod derivatives;
mod kkt;
mod search;

pub use derivatives::{
    constraint_hessian, determinant, hessian_matrix, hessian_r_i, rate_gradient,
    scaled_leading_minors, sum_throughput_gradient, symmetric_eigenvalues_2x2, RateHessian,
};
pub use kkt::{kkt_residuals, kkt_residuals_at, kkt_residuals_solution, KktReport};
pub use search::{
    ascent_oracle, grid_oracle, project_simplex, project_simplex_weighted, AscentConfig,
    AscentResult, AscentRun, OracleBest, GRID_MAX_SU,
};
