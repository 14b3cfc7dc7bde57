use std::fmt::Write as _;

use crate::exec::Execution;
use crate::format::sci15;
use crate::integrate::{integrate, Trajectory};
use crate::problems::IvpProblem;
use crate::scheme::SchemeKind;
use crate::shape::ShapePolicy;
use crate::{Error, Result};

/// Absolute error at the final time, `|u_N - u(b)|`.
pub fn global_error(traj: &Trajectory, problem: &IvpProblem) -> Result<f64> {
    let end = traj.endpoint();
    Ok((end.u - problem.exact(end.t)?).abs())
}

/// `max_n |u_n - u(t_n)|` over the whole grid.
pub fn max_grid_error(traj: &Trajectory, problem: &IvpProblem) -> Result<f64> {
    traj.records
        .iter()
        .try_fold(0.0f64, |m, r| Ok(m.max((r.u - problem.exact(r.t)?).abs())))
}

/// `ln(e_i / e_{i+1}) / ln(N_{i+1} / N_i)` for each adjacent pair.
pub fn convergence_orders(errors: &[f64], n_list: &[usize]) -> Result<Vec<f64>> {
    if errors.len() != n_list.len() || errors.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "need two or more (N, error) pairs of equal length, got {} and {}",
            n_list.len(),
            errors.len()
        )));
    }
    if let Some(e) = errors.iter().find(|e| !(**e > 0.0) || !e.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "errors must be positive and finite, got {e}"
        )));
    }
    if n_list.windows(2).any(|w| w[1] <= w[0]) || n_list[0] == 0 {
        return Err(Error::InvalidInput(
            "N list must be positive and strictly increasing".into(),
        ));
    }
    Ok(errors
        .windows(2)
        .zip(n_list.windows(2))
        .map(|(e, n)| (e[0] / e[1]).ln() / (n[1] as f64 / n[0] as f64).ln())
        .collect())
}

/// Least-squares slope of `ln(error)` against `ln(N)` over entries with `N >= min_n`.
pub fn loglog_slope(n_list: &[usize], errors: &[f64], min_n: usize) -> Result<f64> {
    let pts: Vec<(f64, f64)> = n_list
        .iter()
        .zip(errors)
        .filter(|(n, _)| **n >= min_n)
        .map(|(n, e)| ((*n as f64).ln(), e.ln()))
        .collect();
    if pts.len() < 2 || pts.iter().any(|(_, y)| !y.is_finite()) {
        return Err(Error::InvalidInput(
            "need two or more positive errors to fit".into(),
        ));
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub problem_id: String,
    pub scheme: SchemeKind,
    pub policy: ShapePolicy,
    pub n_list: Vec<usize>,
    /// Endpoint errors.
    pub errors: Vec<f64>,
    /// Max-over-grid errors, reported alongside.
    pub max_errors: Vec<f64>,
    /// `n_list.len() - 1` entries; empty for a single N.
    pub orders: Vec<f64>,
}

impl ConvergenceReport {
    pub fn finest_order(&self) -> Option<f64> {
        self.orders.last().copied()
    }

    pub fn slope(&self, min_n: usize) -> Result<f64> {
        loglog_slope(&self.n_list, &self.errors, min_n)
    }
}

/// Integrates once per `N` (independently, possibly in parallel) and collects
/// errors and orders.
pub fn convergence_study(
    problem: &IvpProblem,
    scheme: SchemeKind,
    policy: &ShapePolicy,
    n_list: &[usize],
    exec: Execution,
) -> Result<ConvergenceReport> {
    if n_list.is_empty() {
        return Err(Error::InvalidInput("empty N list".into()));
    }
    if n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput(
            "N list must be strictly increasing".into(),
        ));
    }
    let runs = exec.map(n_list, |&n| {
        let tr = integrate(problem, scheme, policy, n)?;
        Ok((global_error(&tr, problem)?, max_grid_error(&tr, problem)?))
    });
    let runs: Vec<(f64, f64)> = runs.into_iter().collect::<Result<_>>()?;
    let errors: Vec<f64> = runs.iter().map(|r| r.0).collect();
    let orders = if n_list.len() >= 2 && errors.iter().all(|e| *e > 0.0) {
        convergence_orders(&errors, n_list)?
    } else {
        Vec::new()
    };
    Ok(ConvergenceReport {
        problem_id: problem.id.clone(),
        scheme,
        policy: *policy,
        n_list: n_list.to_vec(),
        max_errors: runs.iter().map(|r| r.1).collect(),
        errors,
        orders,
    })
}

/// CSV `scheme,N,error,order`, one block per report; the first order cell
/// of each block is empty.
pub fn reports_to_csv(reports: &[ConvergenceReport]) -> String {
    let mut out = String::from("scheme,N,error,order\n");
    for rep in reports {
        for (i, (n, e)) in rep.n_list.iter().zip(&rep.errors).enumerate() {
            let order = match i.checked_sub(1).and_then(|k| rep.orders.get(k)) {
                Some(o) => sci15(*o),
                None => String::new(),
            };
            let _ = writeln!(out, "{},{},{},{}", rep.scheme, n, sci15(*e), order);
        }
    }
    out
}
