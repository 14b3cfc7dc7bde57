//! One-dimensional RBF interpolation: kernels, the dense (N+1)-point solve,
//! and the closed-form two-point weights and left-endpoint derivatives that
//! the adaptive Euler schemes are built on.
//!
//! Only `ε²` ever enters a formula, so the shape parameter is carried as
//! [`ShapeSquared`] and may be negative.

use std::fmt;

use nalgebra::{DMatrix, DVector};

use crate::{Error, Result};

/// Largest stencil accepted by [`interpolate_general`].
pub const MAX_NODES: usize = 64;
/// 2-norm condition number above which the dense solve is refused.
pub const MAX_CONDITION: f64 = 1e14;
/// Below this `|ε² h²|` the two-point closed forms are 0/0.
pub const FLAT_LIMIT: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelFamily {
    /// Inverse multiquadric `1/sqrt(1 + ε²r²)`.
    Imq,
    /// Inverse quadratic `1/(1 + ε²r²)`.
    Iq,
    /// Multiquadric `sqrt(1 + ε²r²)`.
    Mq,
    /// Gaussian `exp(-ε²r²)`.
    Gaussian,
}

impl fmt::Display for KernelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KernelFamily::Imq => "IMQ",
            KernelFamily::Iq => "IQ",
            KernelFamily::Mq => "MQ",
            KernelFamily::Gaussian => "Gaussian",
        })
    }
}

/// The squared shape parameter `ε²`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct ShapeSquared(pub f64);

impl ShapeSquared {
    pub const ZERO: ShapeSquared = ShapeSquared(0.0);

    pub fn new(eps2: f64) -> Result<Self> {
        if eps2.is_finite() {
            Ok(Self(eps2))
        } else {
            Err(Error::InvalidInput(format!(
                "shape parameter must be finite, got {eps2}"
            )))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    /// `ε² h²`, the only combination that appears in the schemes.
    #[inline]
    pub fn scaled(self, h: f64) -> f64 {
        self.0 * h * h
    }
}

impl From<f64> for ShapeSquared {
    fn from(v: f64) -> Self {
        ShapeSquared(v)
    }
}

/// `φ(r, ε)` for the given family.
pub fn kernel_eval(family: KernelFamily, r: f64, eps2: ShapeSquared) -> Result<f64> {
    let q = 1.0 + eps2.0 * r * r;
    match family {
        KernelFamily::Imq if q > 0.0 => Ok(1.0 / q.sqrt()),
        KernelFamily::Iq if q > 0.0 => Ok(1.0 / q),
        KernelFamily::Mq if q >= 0.0 => Ok(q.sqrt()),
        KernelFamily::Gaussian => Ok((-eps2.0 * r * r).exp()),
        _ => Err(Error::domain(
            "kernel_eval",
            format!("1 + ε²r² = {q} is outside the {family} kernel's domain"),
        )),
    }
}

/// Dense interpolation matrix `A[i][k] = φ(|x_i - x_k|, ε_k)`.
pub fn interpolation_matrix(
    nodes: &[f64],
    eps2: &[ShapeSquared],
    family: KernelFamily,
) -> Result<DMatrix<f64>> {
    let n = nodes.len();
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n {
        for k in 0..n {
            a[(i, k)] = kernel_eval(family, (nodes[i] - nodes[k]).abs(), eps2[k])?;
        }
    }
    Ok(a)
}

/// Solves for the expansion coefficients `λ` of `r(x) = Σ λ_k φ(|x - x_k|, ε_k)`
/// with `r(x_j) = u_j`.
pub fn interpolate_general(
    nodes: &[f64],
    values: &[f64],
    eps2: &[ShapeSquared],
    family: KernelFamily,
) -> Result<Vec<f64>> {
    let n = nodes.len();
    if n == 0 || values.len() != n || eps2.len() != n {
        return Err(Error::InvalidInput(format!(
            "need equal non-empty lengths, got {} nodes, {} values, {} shape parameters",
            n,
            values.len(),
            eps2.len()
        )));
    }
    if n > MAX_NODES {
        return Err(Error::InvalidInput(format!(
            "at most {MAX_NODES} nodes, got {n}"
        )));
    }
    for i in 0..n {
        for k in 0..i {
            if nodes[i] == nodes[k] {
                return Err(Error::InvalidInput(format!("duplicate node {}", nodes[i])));
            }
        }
    }

    let a = interpolation_matrix(nodes, eps2, family)?;
    let sv = a.clone().singular_values();
    let smax = sv.max();
    let smin = sv.min();
    if !(smin > 0.0) || smax / smin > MAX_CONDITION {
        return Err(Error::Solve(format!(
            "interpolation matrix is ill-conditioned (cond = {:e})",
            if smin > 0.0 {
                smax / smin
            } else {
                f64::INFINITY
            }
        )));
    }
    let rhs = DVector::from_column_slice(values);
    a.lu()
        .solve(&rhs)
        .map(|x| x.iter().copied().collect())
        .ok_or_else(|| Error::Solve("singular interpolation matrix".into()))
}

/// Evaluates the interpolant at `x`.
pub fn evaluate_interpolant(
    x: f64,
    nodes: &[f64],
    lambda: &[f64],
    eps2: &[ShapeSquared],
    family: KernelFamily,
) -> Result<f64> {
    nodes
        .iter()
        .zip(lambda)
        .zip(eps2)
        .try_fold(0.0, |acc, ((&xk, &lk), &ek)| {
            Ok(acc + lk * kernel_eval(family, (x - xk).abs(), ek)?)
        })
}

fn two_point_family(op: &'static str, family: KernelFamily) -> Result<()> {
    match family {
        KernelFamily::Imq | KernelFamily::Iq => Ok(()),
        other => Err(Error::InvalidInput(format!(
            "{op}: {other} has no two-point closed form"
        ))),
    }
}

fn check_spacing(op: &'static str, h: f64, q: f64) -> Result<()> {
    if !(h > 0.0) {
        return Err(Error::InvalidInput(format!(
            "{op}: spacing must be positive, got {h}"
        )));
    }
    if !(q > 0.0) {
        return Err(Error::domain(
            op,
            format!("1 + ε²h² = {q} must be positive"),
        ));
    }
    Ok(())
}

/// Closed-form `(λ0, λ1)` for nodes `x0` and `x0 + h`.
///
/// In the flat limit `|ε²h²| < FLAT_LIMIT` the weights diverge unless
/// `u0 == u1`, in which case both tend to `u0/2`. Non-constant data in that
/// regime is handed to the dense solve, which reports the ill-conditioning.
pub fn two_point_weights(
    family: KernelFamily,
    u0: f64,
    u1: f64,
    h: f64,
    eps2: ShapeSquared,
) -> Result<(f64, f64)> {
    two_point_family("two_point_weights", family)?;
    let z = eps2.scaled(h);
    let q = 1.0 + z;
    check_spacing("two_point_weights", h, q)?;

    if z.abs() < FLAT_LIMIT {
        if u0 == u1 {
            return Ok((0.5 * u0, 0.5 * u1));
        }
        let lam = interpolate_general(&[0.0, h], &[u0, u1], &[eps2, eps2], family)?;
        return Ok((lam[0], lam[1]));
    }

    Ok(match family {
        KernelFamily::Imq => {
            let s = q.sqrt();
            let c = q / z;
            (c * (u0 - u1 / s), c * (u1 - u0 / s))
        }
        _ => {
            let c = q / (z * (2.0 + z));
            (c * (q * u0 - u1), c * (q * u1 - u0))
        }
    })
}

/// Derivative of the two-point interpolant at the left node. Reduces to the
/// forward difference `(u1 - u0)/h` as `ε² -> 0`.
pub fn left_derivative(
    family: KernelFamily,
    u0: f64,
    u1: f64,
    h: f64,
    eps2: ShapeSquared,
) -> Result<f64> {
    two_point_family("left_derivative", family)?;
    let z = eps2.scaled(h);
    let q = 1.0 + z;
    check_spacing("left_derivative", h, q)?;
    Ok(match family {
        KernelFamily::Imq => (u1 * q.sqrt() - u0) / (q * h),
        _ => 2.0 * (u1 * q - u0) / (q * (2.0 + z) * h),
    })
}
