//! Scalar initial value problems `u' = f(t, u)`, `u(a) = u0` on `[a, b]`.
//!
//! The four built-in problems carry closed-form exact solutions and the
//! derivatives needed by the exact shape-parameter policies.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::{Error, Result};

pub type Rhs = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
pub type Exact = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
/// `(t, k) -> u^(k)(t)` for `1 <= k <= max order`.
pub type ExactDeriv = Arc<dyn Fn(f64, u8) -> f64 + Send + Sync>;

/// Identifiers of the built-in problems.
pub const EXAMPLE_IDS: [&str; 4] = ["ex1", "ex2", "ex3", "ex4"];

#[derive(Clone)]
pub struct IvpProblem {
    pub id: String,
    rhs: Rhs,
    pub t_start: f64,
    pub t_end: f64,
    pub u0: f64,
    exact: Option<Exact>,
    exact_deriv: Option<(ExactDeriv, u8)>,
}

impl fmt::Debug for IvpProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IvpProblem")
            .field("id", &self.id)
            .field("t_start", &self.t_start)
            .field("t_end", &self.t_end)
            .field("u0", &self.u0)
            .field("has_exact", &self.exact.is_some())
            .field("max_deriv_order", &self.max_deriv_order())
            .finish()
    }
}

impl IvpProblem {
    pub fn new<F>(id: impl Into<String>, rhs: F, t_start: f64, t_end: f64, u0: f64) -> Result<Self>
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        if !(t_end > t_start) || !t_start.is_finite() || !t_end.is_finite() {
            return Err(Error::InvalidInput(format!(
                "interval must satisfy t_start < t_end, got [{t_start}, {t_end}]"
            )));
        }
        if !u0.is_finite() {
            return Err(Error::InvalidInput("initial value must be finite".into()));
        }
        Ok(Self {
            id: id.into(),
            rhs: Arc::new(rhs),
            t_start,
            t_end,
            u0,
            exact: None,
            exact_deriv: None,
        })
    }

    /// Attaches the exact solution. Rejected unless it reproduces `u0` at `t_start`.
    pub fn with_exact<F>(mut self, exact: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let at_start = exact(self.t_start);
        let tol = 4.0 * f64::EPSILON * self.u0.abs().max(f64::MIN_POSITIVE);
        if (at_start - self.u0).abs() > tol {
            return Err(Error::InvalidInput(format!(
                "exact solution gives {at_start} at t_start, expected {}",
                self.u0
            )));
        }
        self.exact = Some(Arc::new(exact));
        Ok(self)
    }

    /// Attaches closed-form derivatives `u^(k)` for `k = 1..=max_order`.
    pub fn with_exact_deriv<F>(mut self, max_order: u8, deriv: F) -> Self
    where
        F: Fn(f64, u8) -> f64 + Send + Sync + 'static,
    {
        self.exact_deriv = Some((Arc::new(deriv), max_order.min(4)));
        self
    }

    #[inline]
    pub fn rhs(&self, t: f64, u: f64) -> f64 {
        (self.rhs)(t, u)
    }

    pub fn has_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn exact(&self, t: f64) -> Result<f64> {
        self.exact
            .as_ref()
            .map(|e| e(t))
            .ok_or_else(|| Error::MissingExact(self.id.clone()))
    }

    /// Highest derivative order available in closed form (0 if none).
    pub fn max_deriv_order(&self) -> u8 {
        self.exact_deriv.as_ref().map_or(0, |(_, k)| *k)
    }

    /// `u^(order)(t)`; order 0 is the solution itself.
    pub fn derivative(&self, t: f64, order: u8) -> Result<f64> {
        if order == 0 {
            return self.exact(t);
        }
        match &self.exact_deriv {
            Some((d, max)) if order <= *max => Ok(d(t, order)),
            _ => Err(Error::DerivativeUnavailable {
                id: self.id.clone(),
                order,
            }),
        }
    }

    pub fn length(&self) -> f64 {
        self.t_end - self.t_start
    }
}

/// `u' = -u^2` on `(0, 1]`, `u(0) = 1`; `u = 1/(1+t)`.
pub fn ex1() -> IvpProblem {
    IvpProblem::new("ex1", |_, u| -u * u, 0.0, 1.0, 1.0)
        .and_then(|p| p.with_exact(|t| 1.0 / (1.0 + t)))
        .expect("ex1 is well formed")
        .with_exact_deriv(4, |t, k| {
            // u^(k) = (-1)^k k! / (1+t)^(k+1)
            let k = k as i32;
            let fact: f64 = (1..=k).map(f64::from).product();
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * fact / (1.0 + t).powi(k + 1)
        })
}

/// `u' = (2t^2 - u)/(t^2 u - t)` on `(1, 2]`, `u(1) = 2`;
/// `u = 1/t + sqrt(1/t^2 + 4t - 4)`. Derivatives up to order 2 only.
pub fn ex2() -> IvpProblem {
    IvpProblem::new(
        "ex2",
        |t, u| (2.0 * t * t - u) / (t * t * u - t),
        1.0,
        2.0,
        2.0,
    )
    .and_then(|p| p.with_exact(|t| 1.0 / t + (1.0 / (t * t) + 4.0 * t - 4.0).sqrt()))
    .expect("ex2 is well formed")
    .with_exact_deriv(2, |t, k| {
        let g = 1.0 / (t * t) + 4.0 * t - 4.0;
        let s = g.sqrt();
        let g1 = 4.0 - 2.0 / (t * t * t);
        match k {
            1 => -1.0 / (t * t) + g1 / (2.0 * s),
            _ => {
                let g2 = 6.0 / t.powi(4);
                2.0 / (t * t * t) + g2 / (2.0 * s) - g1 * g1 / (4.0 * s * s * s)
            }
        }
    })
}

/// `u' = -4 t^3 u^2` on `(-10, 0]`, `u(-10) = 1/10001`; `u = 1/(t^4 + 1)`.
pub fn ex3() -> IvpProblem {
    IvpProblem::new(
        "ex3",
        |t, u| -4.0 * t * t * t * u * u,
        -10.0,
        0.0,
        1.0 / 10001.0,
    )
    .and_then(|p| p.with_exact(|t| 1.0 / (t.powi(4) + 1.0)))
    .expect("ex3 is well formed")
    .with_exact_deriv(4, |t, k| {
        let t4 = t.powi(4);
        let p = t4 + 1.0;
        match k {
            1 => -4.0 * t.powi(3) / (p * p),
            2 => 4.0 * t * t * (5.0 * t4 - 3.0) / p.powi(3),
            3 => -24.0 * t * (5.0 * t4 * t4 - 10.0 * t4 + 1.0) / p.powi(4),
            _ => 24.0 * (35.0 * t4.powi(3) - 155.0 * t4 * t4 + 65.0 * t4 - 1.0) / p.powi(5),
        }
    })
}

/// `u' = u + 2` on `(0, 1]`, `u(0) = -1`; `u = e^t - 2`, zero at `t = ln 2`.
pub fn ex4() -> IvpProblem {
    IvpProblem::new("ex4", |_, u| u + 2.0, 0.0, 1.0, -1.0)
        .and_then(|p| p.with_exact(|t| t.exp() - 2.0))
        .expect("ex4 is well formed")
        .with_exact_deriv(4, |t, _| t.exp())
}

/// Looks up one of the built-in problems.
pub fn get_problem(id: &str) -> Result<IvpProblem> {
    match id {
        "ex1" => Ok(ex1()),
        "ex2" => Ok(ex2()),
        "ex3" => Ok(ex3()),
        "ex4" => Ok(ex4()),
        other => Err(Error::NotFound(other.to_string())),
    }
}

/// Built-in problems plus caller-registered ones.
#[derive(Debug, Clone)]
pub struct ProblemRegistry {
    problems: BTreeMap<String, IvpProblem>,
}

impl Default for ProblemRegistry {
    fn default() -> Self {
        Self::with_examples()
    }
}

impl ProblemRegistry {
    pub fn empty() -> Self {
        Self {
            problems: BTreeMap::new(),
        }
    }

    pub fn with_examples() -> Self {
        let mut reg = Self::empty();
        for p in [ex1(), ex2(), ex3(), ex4()] {
            reg.register(p);
        }
        reg
    }

    /// Adds or replaces a problem under its own id.
    pub fn register(&mut self, problem: IvpProblem) {
        self.problems.insert(problem.id.clone(), problem);
    }

    pub fn get(&self, id: &str) -> Result<IvpProblem> {
        self.problems
            .get(id)
            .cloned()
            .ok_or_else(|| Error::NotFound(id.to_string()))
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.problems.keys().map(String::as_str)
    }
}
