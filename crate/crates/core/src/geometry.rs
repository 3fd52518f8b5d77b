//! Complex bilinear geometry on `C^n`.
//!
//! Two vector types are used throughout the crate. [`ComplexVector`] is a
//! general point of `C^n`. [`RotatedVector`] is a real vector turned by a
//! phase, `e^{i angle} coords`, which is how points of the rotated balls and
//! spheres are stored. Keeping the phase separate means powers such as
//! `(x^2)^k` and homogeneity factors `e^{i m angle}` never pass through a
//! square root.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used when deciding whether an angle is a sector angle `j pi / p`.
pub const SECTOR_ANGLE_TOL: f64 = 1e-12;

/// Tolerance used when deciding whether a real vector has unit length.
pub const UNIT_NORM_TOL: f64 = 1e-12;

fn check_dimension(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    Ok(())
}

/// A point of `C^n`, `n >= 2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexVector(Vec<Complex64>);

impl ComplexVector {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        check_dimension(entries.len())?;
        if let Some(i) = entries.iter().position(|z| !z.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self(entries))
    }

    /// Embeds a real vector.
    pub fn from_real(coords: &[f64]) -> Result<Self> {
        Self::new(coords.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.0
    }

    pub fn conj(&self) -> Self {
        Self(self.0.iter().map(|z| z.conj()).collect())
    }

    pub fn scale(&self, a: Complex64) -> Self {
        Self(self.0.iter().map(|z| z * a).collect())
    }

    /// `sum_j z_j^2`, without conjugation.
    pub fn bilinear_square(&self) -> Complex64 {
        self.0.iter().map(|z| z * z).sum()
    }

    /// Principal square root of [`bilinear_square`](Self::bilinear_square).
    pub fn complex_abs(&self) -> Complex64 {
        self.bilinear_square().sqrt()
    }

    /// `sum_j z_j w_j` (no conjugation).
    pub fn bilinear_dot(&self, other: &Self) -> Result<Complex64> {
        same_dim(self.dim(), other.dim())?;
        Ok(self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum())
    }

    /// `sum_j z_j conj(w_j)`.
    pub fn hermitian_dot(&self, other: &Self) -> Result<Complex64> {
        same_dim(self.dim(), other.dim())?;
        Ok(self.0.iter().zip(&other.0).map(|(a, b)| a * b.conj()).sum())
    }

    /// `||z|| = sqrt(sum |z_j|^2)`.
    pub fn hermitian_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// The Lie norm `L(z) = sqrt(||z||^2 + sqrt(||z||^4 - |z^2|^2))`.
    pub fn lie_norm(&self) -> f64 {
        self.lie_geometry().lie_norm
    }

    pub fn lie_geometry(&self) -> LieGeometry {
        let h2 = self.0.iter().map(|z| z.norm_sqr()).sum::<f64>();
        let sq = self.bilinear_square();
        // With z = u + iv the radicand is 4 |u ^ v|^2 (Lagrange identity); the
        // wedge form avoids cancellation for rotated real vectors. Clamp anyway.
        let mut wedge = 0.0;
        for i in 0..self.0.len() {
            for j in i + 1..self.0.len() {
                let w = self.0[i].re * self.0[j].im - self.0[j].re * self.0[i].im;
                wedge += w * w;
            }
        }
        let inner = (4.0 * wedge).max(0.0);
        LieGeometry {
            lie_norm: (h2 + inner.sqrt()).sqrt(),
            hermitian_norm: h2.sqrt(),
            bilinear_square: sq,
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        same_dim(self.dim(), other.dim())?;
        Ok(Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }
}

impl fmt::Display for ComplexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, z) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}{:+}i", z.re, z.im)?;
        }
        write!(f, ")")
    }
}

fn same_dim(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::DimensionMismatch { expected, actual });
    }
    Ok(())
}

/// Values describing `z` relative to the Lie ball.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LieGeometry {
    pub lie_norm: f64,
    pub hermitian_norm: f64,
    pub bilinear_square: Complex64,
}

/// A real vector rotated into `C^n`: `e^{i angle} coords` with `angle` in `[0, pi)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotatedVector {
    angle: f64,
    coords: Vec<f64>,
}

impl RotatedVector {
    /// Builds `e^{i angle} coords`, reducing the angle modulo `pi`.
    ///
    /// A shift by `pi` flips the sign of the real part, so the represented
    /// complex vector is unchanged.
    pub fn new(angle: f64, coords: Vec<f64>) -> Result<Self> {
        check_dimension(coords.len())?;
        if let Some(i) = coords.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        if !angle.is_finite() {
            return Err(Error::InvalidArgument("angle must be finite".into()));
        }
        let turns = (angle / PI).floor();
        let mut reduced = angle - turns * PI;
        let mut flip = (turns as i64).rem_euclid(2) == 1;
        if reduced >= PI - 1e-14 {
            reduced = 0.0;
            flip = !flip;
        }
        if reduced < 0.0 {
            reduced = 0.0;
        }
        let coords = if flip {
            coords.into_iter().map(|x| -x).collect()
        } else {
            coords
        };
        Ok(Self {
            angle: reduced,
            coords,
        })
    }

    /// A real point (angle zero).
    pub fn real(coords: Vec<f64>) -> Result<Self> {
        Self::new(0.0, coords)
    }

    /// `e^{j pi i / p} coords`, a point of sector `j` of the order-`p` rotated sets.
    pub fn on_sector(j: usize, p: usize, coords: Vec<f64>) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidOrder);
        }
        if j >= p {
            return Err(Error::InvalidArgument(format!(
                "sector index {j} out of range for p = {p}"
            )));
        }
        Self::new(j as f64 * PI / p as f64, coords)
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn phase(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.angle)
    }

    /// Euclidean norm of the real part; equals `||z||` and `L(z)`.
    pub fn radius(&self) -> f64 {
        self.coords.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// `z^2 = e^{2 i angle} |coords|^2`.
    pub fn bilinear_square(&self) -> Complex64 {
        let r2: f64 = self.coords.iter().map(|x| x * x).sum();
        Complex64::from_polar(r2, 2.0 * self.angle)
    }

    pub fn to_complex(&self) -> ComplexVector {
        let phase = self.phase();
        ComplexVector(self.coords.iter().map(|&x| phase * x).collect())
    }

    /// The same real part turned by an extra `delta`.
    pub fn rotate(&self, delta: f64) -> Result<Self> {
        Self::new(self.angle + delta, self.coords.clone())
    }

    /// Index `j` with `angle = j pi / p`, if the angle is a sector angle.
    pub fn sector_index(&self, p: usize) -> Option<usize> {
        if p == 0 {
            return None;
        }
        let step = PI / p as f64;
        let j = (self.angle / step).round();
        if (self.angle - j * step).abs() > SECTOR_ANGLE_TOL {
            return None;
        }
        let j = j as usize;
        (j < p).then_some(j)
    }

    /// Checks membership in the rotated sphere of order `p`; returns the sector.
    pub fn require_on_sphere(&self, p: usize) -> Result<usize> {
        let j = self.sector_index(p).ok_or_else(|| Error::OffSphere {
            p,
            reason: format!("angle {} is not a multiple of pi/{p}", self.angle),
        })?;
        let r = self.radius();
        if (r - 1.0).abs() > UNIT_NORM_TOL {
            return Err(Error::OffSphere {
                p,
                reason: format!("real part has norm {r}"),
            });
        }
        Ok(j)
    }

    /// Checks strict membership in the rotated ball of order `p` with the given margin.
    pub fn require_in_ball(&self, p: usize, margin: f64) -> Result<usize> {
        let j = self.sector_index(p).ok_or_else(|| Error::NotInterior {
            p,
            reason: format!("angle {} is not a multiple of pi/{p}", self.angle),
        })?;
        let r = self.radius();
        if r >= 1.0 - margin {
            return Err(Error::NotInterior {
                p,
                reason: format!("real part has norm {r}"),
            });
        }
        Ok(j)
    }
}

impl From<&RotatedVector> for ComplexVector {
    fn from(v: &RotatedVector) -> Self {
        v.to_complex()
    }
}

/// `sum_j z_j^2`.
pub fn bilinear_square(z: &ComplexVector) -> Complex64 {
    z.bilinear_square()
}

/// Principal square root of `z^2`; the complex extension of the euclidean norm.
pub fn complex_abs(z: &ComplexVector) -> Complex64 {
    z.complex_abs()
}

/// `sum_j x_j conj(w_j)`.
pub fn hermitian_dot(x: &ComplexVector, w: &ComplexVector) -> Result<Complex64> {
    x.hermitian_dot(w)
}

pub fn lie_norm(z: &ComplexVector) -> f64 {
    z.lie_norm()
}

/// True iff `L(z) L(w) < 1`.
pub fn in_lie_domain(z: &ComplexVector, w: &ComplexVector) -> Result<bool> {
    same_dim(z.dim(), w.dim())?;
    Ok(z.lie_norm() * w.lie_norm() < 1.0)
}
