//! Fixed-step integration on the uniform grid `t_n = a + n h`, `h = (b - a)/N`.

use std::fmt::Write as _;

use crate::format::sci15;
use crate::problems::IvpProblem;
use crate::rbf::ShapeSquared;
use crate::scheme::{step, SchemeKind};
use crate::shape::{eps2_exact, eps2_fd, Bootstrap, ShapeMode, ShapePolicy};
use crate::{Error, Result};

pub use crate::shape::StepFlag;

/// `1 + ε²h²` at or below this is treated as a vanishing radicand (IMQ) or
/// denominator (IQ, in absolute value) and `ε²` is reset to zero.
pub const CLAMP_MARGIN: f64 = 1e-12;

/// Grid point `n`: the state and the `ε²` used to leave it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub t: f64,
    pub u: f64,
    pub eps2: ShapeSquared,
    pub flag: StepFlag,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub problem_id: String,
    pub scheme: SchemeKind,
    pub policy: ShapePolicy,
    pub n: usize,
    pub h: f64,
    /// `n + 1` records; the last one carries `ε² = 0`.
    pub records: Vec<StepRecord>,
}

impl Trajectory {
    pub fn endpoint(&self) -> &StepRecord {
        self.records
            .last()
            .expect("a trajectory has at least two records")
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.t)
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.u)
    }

    pub fn count_flag(&self, flag: StepFlag) -> usize {
        self.records.iter().filter(|r| r.flag == flag).count()
    }

    /// CSV with header `t,u,eps2,flag`, one row per grid point.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * self.records.len());
        out.push_str("t,u,eps2,flag\n");
        for r in &self.records {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                sci15(r.t),
                sci15(r.u),
                sci15(r.eps2.0),
                r.flag
            );
        }
        out
    }
}

fn clamp(scheme: SchemeKind, eps2: ShapeSquared, h: f64) -> Option<ShapeSquared> {
    let q = 1.0 + eps2.scaled(h);
    let degenerate = match scheme {
        SchemeKind::Imq => q <= CLAMP_MARGIN,
        SchemeKind::Iq => q.abs() <= CLAMP_MARGIN,
        _ => false,
    };
    degenerate.then_some(ShapeSquared::ZERO)
}

fn eval_rhs(problem: &IvpProblem, step_index: usize, t: f64, u: f64) -> Result<f64> {
    let f = problem.rhs(t, u);
    if f.is_finite() {
        Ok(f)
    } else {
        Err(Error::NonFinite {
            step: step_index,
            t,
        })
    }
}

/// Integrates `problem` over its interval with `n` uniform steps.
pub fn integrate(
    problem: &IvpProblem,
    scheme: SchemeKind,
    policy: &ShapePolicy,
    n: usize,
) -> Result<Trajectory> {
    if n == 0 {
        return Err(Error::InvalidInput("step count must be at least 1".into()));
    }
    policy.validate()?;
    let family = scheme.family();
    if family.is_some() && policy.mode == ShapeMode::ExactC1 && problem.max_deriv_order() < 2 {
        return Err(Error::DerivativeUnavailable {
            id: problem.id.clone(),
            order: 2,
        });
    }

    let a = problem.t_start;
    let h = problem.length() / n as f64;
    let mut records = Vec::with_capacity(n + 1);
    let mut u = problem.u0;
    let mut f_prev = None;

    for i in 0..n {
        let t = a + i as f64 * h;
        let f = eval_rhs(problem, i, t, u)?;

        let (mut eps2, mut flag) = match (family, policy.mode) {
            (None, _) => (ShapeSquared::ZERO, StepFlag::Normal),
            (Some(_), ShapeMode::Fixed(e)) => (e, StepFlag::Normal),
            (Some(fam), ShapeMode::ExactC1) => (
                eps2_exact(fam, u, problem.derivative(t, 2)?),
                StepFlag::Normal,
            ),
            (Some(fam), ShapeMode::FiniteDifference) => match f_prev {
                Some(fp) => eps2_fd(fam, u, f, fp, h, policy.guard),
                None => match policy.bootstrap {
                    Bootstrap::PlainEuler => (ShapeSquared::ZERO, StepFlag::Bootstrap),
                    Bootstrap::ForwardPredictor => {
                        let f_pred = eval_rhs(problem, i, t + h, u + h * f)?;
                        (
                            eps2_fd(fam, u, f_pred, f, h, policy.guard).0,
                            StepFlag::Bootstrap,
                        )
                    }
                },
            },
        };
        if let Some(zero) = clamp(scheme, eps2, h) {
            eps2 = zero;
            flag = StepFlag::Clamped;
        }

        records.push(StepRecord { t, u, eps2, flag });
        u = step(scheme, u, f, h, eps2)?;
        if !u.is_finite() {
            return Err(Error::NonFinite {
                step: i + 1,
                t: a + (i + 1) as f64 * h,
            });
        }
        f_prev = Some(f);
    }
    records.push(StepRecord {
        t: problem.t_end,
        u,
        eps2: ShapeSquared::ZERO,
        flag: StepFlag::Normal,
    });

    Ok(Trajectory {
        problem_id: problem.id.clone(),
        scheme,
        policy: *policy,
        n,
        h,
        records,
    })
}
