//! One-step update rules `u_{n+1} = Φ(u_n, f_n, h, ε_n²)`.

use std::fmt;
use std::str::FromStr;

use crate::rbf::{KernelFamily, ShapeSquared};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    Euler,
    Mq,
    Gaussian,
    Imq,
    /// IMQ with `1/sqrt(1+ε²h²)` replaced by `1 - ε²h²/2`.
    ImqMod,
    Iq,
    /// IQ with `1/(1+ε²h²)` replaced by `1 - ε²h²`.
    IqMod,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 7] = [
        SchemeKind::Euler,
        SchemeKind::Mq,
        SchemeKind::Gaussian,
        SchemeKind::Imq,
        SchemeKind::ImqMod,
        SchemeKind::Iq,
        SchemeKind::IqMod,
    ];

    /// Kernel whose shape-parameter rules drive this scheme; `None` for Euler.
    pub fn family(self) -> Option<KernelFamily> {
        match self {
            SchemeKind::Euler => None,
            SchemeKind::Mq => Some(KernelFamily::Mq),
            SchemeKind::Gaussian => Some(KernelFamily::Gaussian),
            SchemeKind::Imq | SchemeKind::ImqMod => Some(KernelFamily::Imq),
            SchemeKind::Iq | SchemeKind::IqMod => Some(KernelFamily::Iq),
        }
    }

    /// The Taylor-simplified counterpart of IMQ/IQ; other schemes map to themselves.
    pub fn modified(self) -> SchemeKind {
        match self {
            SchemeKind::Imq => SchemeKind::ImqMod,
            SchemeKind::Iq => SchemeKind::IqMod,
            other => other,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Euler => "euler",
            SchemeKind::Mq => "mq",
            SchemeKind::Gaussian => "gaussian",
            SchemeKind::Imq => "imq",
            SchemeKind::ImqMod => "imq-mod",
            SchemeKind::Iq => "iq",
            SchemeKind::IqMod => "iq-mod",
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        Ok(match lower.as_str() {
            "euler" => SchemeKind::Euler,
            "mq" => SchemeKind::Mq,
            "gaussian" | "ga" => SchemeKind::Gaussian,
            "imq" => SchemeKind::Imq,
            "imq-mod" | "imqmod" => SchemeKind::ImqMod,
            "iq" => SchemeKind::Iq,
            "iq-mod" | "iqmod" => SchemeKind::IqMod,
            _ => return Err(Error::InvalidInput(format!("unknown scheme `{s}`"))),
        })
    }
}

/// Advances one step of size `h` from `u_n` with slope `f_n = f(t_n, u_n)`.
/// Euler ignores `eps2`.
pub fn step(scheme: SchemeKind, u: f64, f: f64, h: f64, eps2: ShapeSquared) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::InvalidInput(format!(
            "step size must be positive, got {h}"
        )));
    }
    let z = eps2.scaled(h);
    let q = 1.0 + z;
    Ok(match scheme {
        SchemeKind::Euler => u + h * f,
        SchemeKind::Mq => (1.0 + 0.5 * z) * (u + h * f),
        SchemeKind::Gaussian => u * (-z).exp() + h * f,
        SchemeKind::Imq => {
            if !(q > 0.0) {
                return Err(Error::domain(
                    "step",
                    format!("IMQ radicand 1 + ε²h² = {q}"),
                ));
            }
            (q * h * f + u) / q.sqrt()
        }
        SchemeKind::ImqMod => (1.0 - 0.5 * z) * (q * h * f + u),
        SchemeKind::Iq => {
            if q == 0.0 {
                return Err(Error::domain("step", "IQ denominator 1 + ε²h² vanishes"));
            }
            (h * q * (2.0 + z) * f + 2.0 * u) / (2.0 * q)
        }
        SchemeKind::IqMod => (1.0 - z) * (h * q * (2.0 + z) * f + 2.0 * u) / 2.0,
    })
}
