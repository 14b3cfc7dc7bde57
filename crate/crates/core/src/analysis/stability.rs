//! Linear stability regions.
//!
//! For `u' = λu` one step maps `u_n` to `R(z) u_n` with `z = λh`. The RBF
//! schemes use the exact optimal shape parameter of the test equation,
//! `u'' = λ²u`, so `ε²h² = -z²` (IMQ) and `ε²h² = -z²/2` (IQ):
//!
//! - Euler: `R = 1 + z`
//! - IMQ: `R = ((1 - z²) z + 1) / sqrt(1 - z²)` (principal branch)
//! - IQ: `R = ((1 + w)(2 + w) z + 2) / (2 (1 + w))`, `w = -z²/2`
//!
//! A cell is stable when the iterates `R^k`, `k = 1..=n_iter`, stay in the
//! closed unit disk.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::exec::Execution;
use crate::format::sci15;
use crate::scheme::SchemeKind;
use crate::{Error, Result};

/// `|1 + ε²h²|` below this makes `R` undefined.
const SINGULAR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

pub const DEFAULT_RECT: Rect = Rect {
    re_min: -4.0,
    re_max: 2.0,
    im_min: -3.0,
    im_max: 3.0,
};

impl Rect {
    fn validate(&self) -> Result<()> {
        let ok = [self.re_min, self.re_max, self.im_min, self.im_max]
            .iter()
            .all(|v| v.is_finite())
            && self.re_min < self.re_max
            && self.im_min < self.im_max;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "invalid scan rectangle {self:?}"
            )))
        }
    }
}

/// Amplification factor `R(z)`; `None` where it is undefined.
pub fn amplification(scheme: SchemeKind, z: Complex64) -> Result<Option<Complex64>> {
    let one = Complex64::new(1.0, 0.0);
    Ok(match scheme {
        SchemeKind::Euler => Some(one + z),
        SchemeKind::Imq => {
            let q = one - z * z;
            (q.norm() > SINGULAR).then(|| (q * z + one) / q.sqrt())
        }
        SchemeKind::Iq => {
            let w = -0.5 * z * z;
            let q = one + w;
            (q.norm() > SINGULAR).then(|| (q * (2.0 + w) * z + 2.0) / (2.0 * q))
        }
        other => {
            return Err(Error::InvalidInput(format!(
                "stability scan supports euler, imq and iq, not {other}"
            )))
        }
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityGrid {
    pub scheme: SchemeKind,
    pub rect: Rect,
    pub nx: usize,
    pub ny: usize,
    /// Row-major over `im`: cell `(i, j)` is `mask[j * nx + i]`.
    pub mask: Vec<bool>,
    /// Cells where `R(z)` is undefined; they are marked unstable.
    pub singular: Vec<(usize, usize)>,
}

impl StabilityGrid {
    /// `z` at cell `(i, j)`; corners of the rectangle are grid points.
    pub fn point(&self, i: usize, j: usize) -> Complex64 {
        grid_point(&self.rect, self.nx, self.ny, i, j)
    }

    pub fn is_stable(&self, i: usize, j: usize) -> bool {
        self.mask[j * self.nx + i]
    }

    pub fn stable_count(&self) -> usize {
        self.mask.iter().filter(|s| **s).count()
    }

    /// Cell closest to `z`, if `z` lies in the rectangle.
    pub fn nearest_cell(&self, z: Complex64) -> Option<(usize, usize)> {
        let r = &self.rect;
        if z.re < r.re_min || z.re > r.re_max || z.im < r.im_min || z.im > r.im_max {
            return None;
        }
        let fx = (z.re - r.re_min) / (r.re_max - r.re_min) * (self.nx - 1) as f64;
        let fy = (z.im - r.im_min) / (r.im_max - r.im_min) * (self.ny - 1) as f64;
        Some((fx.round() as usize, fy.round() as usize))
    }

    /// Midpoints of every pair of adjacent cells whose stability differs,
    /// an outline of the region suitable for plotting.
    pub fn boundary_points(&self) -> Vec<Complex64> {
        let mut pts = Vec::new();
        for j in 0..self.ny {
            for i in 0..self.nx {
                let s = self.is_stable(i, j);
                if i + 1 < self.nx && self.is_stable(i + 1, j) != s {
                    pts.push(0.5 * (self.point(i, j) + self.point(i + 1, j)));
                }
                if j + 1 < self.ny && self.is_stable(i, j + 1) != s {
                    pts.push(0.5 * (self.point(i, j) + self.point(i, j + 1)));
                }
            }
        }
        pts
    }

    /// CSV with header `re,im,stable` (stable as 0/1), one row per cell.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(48 * self.mask.len());
        out.push_str("re,im,stable\n");
        for j in 0..self.ny {
            for i in 0..self.nx {
                let z = self.point(i, j);
                let _ = writeln!(
                    out,
                    "{},{},{}",
                    sci15(z.re),
                    sci15(z.im),
                    u8::from(self.is_stable(i, j))
                );
            }
        }
        out
    }
}

fn grid_point(r: &Rect, nx: usize, ny: usize, i: usize, j: usize) -> Complex64 {
    let re = r.re_min + (r.re_max - r.re_min) * i as f64 / (nx - 1) as f64;
    let im = r.im_min + (r.im_max - r.im_min) * j as f64 / (ny - 1) as f64;
    Complex64::new(re, im)
}

/// Scans `rect` on an `nx × ny` grid. Rows are evaluated independently, in
/// parallel when `exec` allows it.
pub fn stability_scan(
    scheme: SchemeKind,
    rect: Rect,
    nx: usize,
    ny: usize,
    n_iter: usize,
    exec: Execution,
) -> Result<StabilityGrid> {
    rect.validate()?;
    if nx < 2 || ny < 2 {
        return Err(Error::InvalidInput(format!(
            "resolution must be at least 2x2, got {nx}x{ny}"
        )));
    }
    if n_iter == 0 {
        return Err(Error::InvalidInput("n_iter must be at least 1".into()));
    }
    amplification(scheme, Complex64::new(0.0, 0.0))?;

    let rows = exec.map_range(ny, |j| {
        (0..nx)
            .map(|i| {
                let z = grid_point(&rect, nx, ny, i, j);
                match amplification(scheme, z).expect("scheme checked above") {
                    Some(r) => {
                        let mut u = Complex64::new(1.0, 0.0);
                        let stable = (0..n_iter).all(|_| {
                            u *= r;
                            u.norm() <= 1.0
                        });
                        (stable, false)
                    }
                    None => (false, true),
                }
            })
            .collect::<Vec<_>>()
    });

    let mut mask = Vec::with_capacity(nx * ny);
    let mut singular = Vec::new();
    for (j, row) in rows.into_iter().enumerate() {
        for (i, (stable, sing)) in row.into_iter().enumerate() {
            mask.push(stable);
            if sing {
                singular.push((i, j));
            }
        }
    }
    Ok(StabilityGrid {
        scheme,
        rect,
        nx,
        ny,
        mask,
        singular,
    })
}
