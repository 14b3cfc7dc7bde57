//! Error analysis: global errors and empirical orders, truncation residuals,
//! the Lipschitz error bound, and linear stability regions.

mod convergence;
mod stability;
mod truncation;

pub use convergence::{
    convergence_orders, convergence_study, global_error, loglog_slope, max_grid_error,
    reports_to_csv, ConvergenceReport,
};
pub use stability::{amplification, stability_scan, Rect, StabilityGrid, DEFAULT_RECT};
pub use truncation::{
    local_defect, truncation_residual, verify_error_bound, ErrorBoundCheck, TruncationSample,
};
