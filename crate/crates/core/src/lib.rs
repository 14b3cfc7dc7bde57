//! Euler methods with adaptive radial-basis-function shape parameters.
//!
//! The forward-difference derivative behind Euler's method is replaced by the
//! derivative of a two-point RBF interpolant (inverse quadratic, inverse
//! multiquadric, multiquadric or Gaussian). The kernel's shape parameter is
//! chosen per step so that the leading local truncation term vanishes, which
//! lifts the global order from one to two.
//!
//! Modules:
//! - [`problems`]: scalar IVPs with exact solutions and derivatives.
//! - [`rbf`]: kernels, two-point weights, one-sided derivatives and the dense
//!   interpolation solve.
//! - [`scheme`], [`shape`], [`integrate`]: one-step update rules, shape
//!   parameter policies and the fixed-step driver.
//! - [`analysis`]: global errors, empirical orders, truncation residuals, the
//!   Lipschitz error bound and stability-region scans.
//!
//! ```
//! use rbf_euler::{integrate, problems, SchemeKind, ShapePolicy};
//! use rbf_euler::analysis::global_error;
//!
//! let ex1 = problems::get_problem("ex1").unwrap();
//! let traj = integrate(&ex1, SchemeKind::Imq, &ShapePolicy::finite_difference(), 160).unwrap();
//! let err = global_error(&traj, &ex1).unwrap();
//! assert!(err < 2e-5);
//! ```

// Validation uses `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
mod error;
pub mod exec;
pub mod format;
pub mod integrate;
pub mod problems;
pub mod rbf;
pub mod scheme;
pub mod shape;

pub use error::{Error, Result};
pub use exec::Execution;
pub use integrate::{integrate, StepFlag, StepRecord, Trajectory};
pub use problems::IvpProblem;
pub use rbf::{KernelFamily, ShapeSquared};
pub use scheme::{step, SchemeKind};
pub use shape::{Bootstrap, Guard, LRule, ShapeMode, ShapePolicy};
