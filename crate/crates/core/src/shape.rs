//! Shape-parameter selection.
//!
//! The optimal `ε_n²` cancels the `O(h)` term of the local truncation error.
//! It needs `u''(t_n)`, which is either taken from the exact solution
//! ([`eps2_exact`]) or estimated by the backward difference
//! `(f_n - f_{n-1})/h` ([`eps2_fd`]). Because `u_n` sits in the denominator,
//! the finite-difference rule can be guarded: whenever `|u_n| <= h^p` the
//! value `sgn(..)·L` is used instead.

use std::fmt;

use crate::rbf::{KernelFamily, ShapeSquared};
use crate::{Error, Result};

/// How a step's shape parameter came about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepFlag {
    Normal,
    /// First finite-difference step, where `f_{n-1}` does not exist.
    Bootstrap,
    /// The zero guard or the `|u_n| <= h^p` threshold replaced the quotient.
    GuardTriggered,
    /// `ε²` was reset to zero because `1 + ε²h²` was (nearly) non-positive.
    Clamped,
}

impl StepFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            StepFlag::Normal => "normal",
            StepFlag::Bootstrap => "bootstrap",
            StepFlag::GuardTriggered => "guard-triggered",
            StepFlag::Clamped => "clamped",
        }
    }
}

impl fmt::Display for StepFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Fallback magnitude `L` of the threshold guard.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LRule {
    Zero,
    InvH,
    InvSqrtH,
    Value(f64),
}

impl LRule {
    pub fn resolve(self, h: f64) -> f64 {
        match self {
            LRule::Zero => 0.0,
            LRule::InvH => 1.0 / h,
            LRule::InvSqrtH => 1.0 / h.sqrt(),
            LRule::Value(v) => v,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Guard {
    /// "No condition": always the quotient, except `ε² = 0` when `u_n == 0`.
    #[default]
    None,
    Threshold {
        p: f64,
        l: LRule,
    },
}

impl Guard {
    pub fn threshold(p: f64, l: LRule) -> Self {
        Guard::Threshold { p, l }
    }

    pub fn validate(&self) -> Result<()> {
        if let Guard::Threshold { p, l } = *self {
            if !(p >= 0.0) || !p.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "guard exponent p must be >= 0, got {p}"
                )));
            }
            if let LRule::Value(v) = l {
                if !(v >= 0.0) || !v.is_finite() {
                    return Err(Error::InvalidInput(format!(
                        "guard magnitude L must be finite and >= 0, got {v}"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ShapeMode {
    Fixed(ShapeSquared),
    /// Exact `u''` from the problem, with `ε² = 0` where `u_n = 0`.
    ExactC1,
    FiniteDifference,
}

/// How the first finite-difference step obtains `f_{n-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Bootstrap {
    /// Estimates `u''(t_0)` by `(f(t_0 + h, u_0 + h f_0) - f_0)/h`.
    #[default]
    ForwardPredictor,
    /// Takes the first step with `ε² = 0`.
    PlainEuler,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapePolicy {
    pub mode: ShapeMode,
    pub guard: Guard,
    pub bootstrap: Bootstrap,
}

impl Default for ShapePolicy {
    fn default() -> Self {
        Self::finite_difference()
    }
}

impl ShapePolicy {
    pub fn fixed(eps2: f64) -> Self {
        Self {
            mode: ShapeMode::Fixed(ShapeSquared(eps2)),
            guard: Guard::None,
            bootstrap: Bootstrap::default(),
        }
    }

    pub fn exact() -> Self {
        Self {
            mode: ShapeMode::ExactC1,
            ..Self::finite_difference()
        }
    }

    pub fn finite_difference() -> Self {
        Self {
            mode: ShapeMode::FiniteDifference,
            guard: Guard::None,
            bootstrap: Bootstrap::default(),
        }
    }

    pub fn with_guard(mut self, guard: Guard) -> Self {
        self.guard = guard;
        self
    }

    pub fn with_bootstrap(mut self, bootstrap: Bootstrap) -> Self {
        self.bootstrap = bootstrap;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if let ShapeMode::Fixed(e) = self.mode {
            ShapeSquared::new(e.0)?;
        }
        self.guard.validate()
    }

    /// Short label such as `fd-nc`, `fd-p1-l0`, `exact`, `fixed(-2)`.
    pub fn label(&self) -> String {
        match self.mode {
            ShapeMode::Fixed(e) => format!("fixed({})", e.0),
            ShapeMode::ExactC1 => "exact".into(),
            ShapeMode::FiniteDifference => match self.guard {
                Guard::None => "fd-nc".into(),
                Guard::Threshold { p, l } => {
                    let l = match l {
                        LRule::Zero => "0".to_string(),
                        LRule::InvH => "1/h".to_string(),
                        LRule::InvSqrtH => "1/sqrt(h)".to_string(),
                        LRule::Value(v) => v.to_string(),
                    };
                    format!("fd-p{p}-l{l}")
                }
            },
        }
    }
}

fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Whether the family's optimal value is `-u''/(2u)` (IQ, Gaussian) rather
/// than `∓u''/u` (IMQ, MQ).
fn halved(family: KernelFamily) -> bool {
    matches!(family, KernelFamily::Iq | KernelFamily::Gaussian)
}

/// Optimal `ε²` for second order from the exact second derivative.
pub fn eps2_exact(family: KernelFamily, u: f64, u2: f64) -> ShapeSquared {
    if u == 0.0 {
        return ShapeSquared::ZERO;
    }
    ShapeSquared(match family {
        KernelFamily::Imq => -u2 / u,
        KernelFamily::Mq => u2 / u,
        KernelFamily::Iq | KernelFamily::Gaussian => -u2 / (2.0 * u),
    })
}

/// Optimal `ε²` for second order with `u''` replaced by `(f_n - f_prev)/h`.
///
/// Never divides by zero: `u_n == 0` without a threshold guard yields
/// `(0, GuardTriggered)`, and so does a quotient that overflows.
pub fn eps2_fd(
    family: KernelFamily,
    u: f64,
    f_n: f64,
    f_prev: f64,
    h: f64,
    guard: Guard,
) -> (ShapeSquared, StepFlag) {
    let df = f_n - f_prev;
    let denom = if halved(family) { 2.0 * h * u } else { h * u };

    if let Guard::Threshold { p, l } = guard {
        if u.abs() <= h.powf(p) {
            return (
                ShapeSquared(sgn(df * denom) * l.resolve(h)),
                StepFlag::GuardTriggered,
            );
        }
    }
    if u == 0.0 {
        return (ShapeSquared::ZERO, StepFlag::GuardTriggered);
    }
    let q = match family {
        KernelFamily::Mq => df / denom,
        _ => -df / denom,
    };
    if q.is_finite() {
        (ShapeSquared(q), StepFlag::Normal)
    } else {
        (ShapeSquared::ZERO, StepFlag::GuardTriggered)
    }
}

fn higher_order_family(op: &'static str, family: KernelFamily) -> Result<()> {
    match family {
        KernelFamily::Imq | KernelFamily::Iq => Ok(()),
        other => Err(Error::InvalidInput(format!(
            "{op}: not available for {other}"
        ))),
    }
}

/// `ε²` cancelling the two leading truncation terms (third order), using the
/// reference expressions
/// IMQ: `-(3u'' + h u''')/(3(u + h u'))`,
/// IQ: `-(u''/2 + h u'''/6)/(u - h u''/2)`.
pub fn eps2_third_order(
    family: KernelFamily,
    u: f64,
    u1: f64,
    u2: f64,
    u3: f64,
    h: f64,
) -> Result<ShapeSquared> {
    higher_order_family("eps2_third_order", family)?;
    let (num, den) = match family {
        KernelFamily::Imq => (3.0 * u2 + h * u3, 3.0 * (u + h * u1)),
        _ => (0.5 * u2 + h * u3 / 6.0, u - 0.5 * h * u2),
    };
    if den == 0.0 {
        return Err(Error::domain("eps2_third_order", "denominator vanishes"));
    }
    Ok(ShapeSquared(-num / den))
}

/// Both roots `(ε²⁺, ε²⁻)` of the quadratic that cancels the three leading
/// truncation terms (fourth order). `ε²⁺` takes the minus sign in front of
/// the square root.
///
/// The root that would suffer cancellation is computed from the product of
/// the roots; the values agree with the printed quotients.
pub fn eps2_fourth_order(
    family: KernelFamily,
    u: f64,
    u1: f64,
    u2: f64,
    u3: f64,
    u4: f64,
    h: f64,
) -> Result<(ShapeSquared, ShapeSquared)> {
    higher_order_family("eps2_fourth_order", family)?;
    if !(h > 0.0) {
        return Err(Error::InvalidInput(format!(
            "eps2_fourth_order: h must be positive, got {h}"
        )));
    }
    if u == 0.0 {
        return Err(Error::domain("eps2_fourth_order", "u_n must be non-zero"));
    }

    // Roots are (x ∓ s)/d with s² = x² + k; the numerator of the product is
    // x² - s² = -k, so the cancelling root equals -k/((x ± s) d).
    let (x, k, d) = match family {
        KernelFamily::Imq => {
            let x = 6.0 * (u + h * u1);
            let k = 9.0 * h * h * u * (12.0 * u2 + 4.0 * h * u3 + h * h * u4);
            (x, k, 9.0 * h * h * u)
        }
        _ => {
            let x = u - 0.5 * h * u1;
            let c = 0.5 * u2 + h * u3 / 6.0 + h * h * u4 / 24.0;
            (x, 4.0 * h * h * u * c, 2.0 * h * h * u)
        }
    };
    let disc = x * x + k;
    if disc < 0.0 {
        return Err(Error::domain(
            "eps2_fourth_order",
            format!("negative discriminant {disc}; roots are complex"),
        ));
    }
    let s = disc.sqrt();
    let (plus, minus) = if x >= 0.0 {
        let big = x + s;
        let small = if big == 0.0 { 0.0 } else { -k / (big * d) };
        (small, big / d)
    } else {
        let big = x - s;
        (big / d, -k / (big * d))
    };
    Ok((ShapeSquared(plus), ShapeSquared(minus)))
}

/// Picks the root that stays bounded as `h -> 0`: `ε²⁺` for `u_n > 0`,
/// `ε²⁻` for `u_n < 0`.
pub fn select_consistent_root(roots: (ShapeSquared, ShapeSquared), u: f64) -> Result<ShapeSquared> {
    if u > 0.0 {
        Ok(roots.0)
    } else if u < 0.0 {
        Ok(roots.1)
    } else {
        Err(Error::domain(
            "select_consistent_root",
            "no consistent root for u_n = 0",
        ))
    }
}
