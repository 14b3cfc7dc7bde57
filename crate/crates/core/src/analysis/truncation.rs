use crate::integrate::Trajectory;
use crate::problems::IvpProblem;
use crate::rbf::ShapeSquared;
use crate::scheme::{step, SchemeKind};
use crate::Result;

/// One-step defect of a scheme against the exact solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationSample {
    pub t: f64,
    pub h: f64,
    pub eps2: ShapeSquared,
    /// `(u(t+h) - Φ(u(t), f(t, u(t)), h, ε²)) / h`.
    pub tau: f64,
    /// Predicted `O(h)` part of `tau`, e.g. `h (u''/2 + u ε²/2)` for IMQ.
    pub leading_term: f64,
}

/// `τ = (u(t+h) - Φ(u(t), f(t, u(t)), h, ε²)) / h` from the exact solution.
pub fn local_defect(
    problem: &IvpProblem,
    scheme: SchemeKind,
    t: f64,
    h: f64,
    eps2: ShapeSquared,
) -> Result<f64> {
    let u = problem.exact(t)?;
    let next = step(scheme, u, problem.rhs(t, u), h, eps2)?;
    Ok((problem.exact(t + h)? - next) / h)
}

fn leading_coefficient(scheme: SchemeKind, u: f64, u2: f64, eps2: f64) -> f64 {
    match scheme {
        SchemeKind::Euler => 0.5 * u2,
        SchemeKind::Imq | SchemeKind::ImqMod => 0.5 * u2 + 0.5 * u * eps2,
        SchemeKind::Iq | SchemeKind::IqMod | SchemeKind::Gaussian => 0.5 * u2 + u * eps2,
        SchemeKind::Mq => 0.5 * u2 - 0.5 * u * eps2,
    }
}

/// Local truncation error at `t` together with its leading-order prediction.
/// Needs the exact solution and its second derivative.
pub fn truncation_residual(
    problem: &IvpProblem,
    scheme: SchemeKind,
    t: f64,
    h: f64,
    eps2: ShapeSquared,
) -> Result<TruncationSample> {
    let u = problem.exact(t)?;
    let u2 = problem.derivative(t, 2)?;
    Ok(TruncationSample {
        t,
        h,
        eps2,
        tau: local_defect(problem, scheme, t, h, eps2)?,
        leading_term: h * leading_coefficient(scheme, u, u2, eps2.0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorBoundCheck {
    pub holds: bool,
    /// `max_n |u(t_n) - u_n|`.
    pub max_error: f64,
    /// `max_{0 <= n < N} |τ_n|` with each step's own `ε_n²`.
    pub tau_inf: f64,
    /// `e^{L T} T ‖τ‖∞`.
    pub bound: f64,
    /// `max_error / bound` (0 when both vanish).
    pub ratio: f64,
}

/// Checks `max_n E_n <= e^{L_f T} T ‖τ‖∞` with `T = b - a`, `τ` evaluated on
/// the trajectory's grid using the shape parameters it actually used.
pub fn verify_error_bound(
    traj: &Trajectory,
    problem: &IvpProblem,
    lipschitz: f64,
) -> Result<ErrorBoundCheck> {
    let mut max_error = 0.0f64;
    for r in &traj.records {
        max_error = max_error.max((problem.exact(r.t)? - r.u).abs());
    }
    let mut tau_inf = 0.0f64;
    for r in &traj.records[..traj.records.len() - 1] {
        let tau = local_defect(problem, traj.scheme, r.t, traj.h, r.eps2)?;
        tau_inf = tau_inf.max(tau.abs());
    }
    let span = problem.length();
    let bound = (lipschitz * span).exp() * span * tau_inf;
    let ratio = if max_error == 0.0 {
        0.0
    } else {
        max_error / bound
    };
    Ok(ErrorBoundCheck {
        holds: max_error <= bound,
        max_error,
        tau_inf,
        bound,
        ratio,
    })
}
