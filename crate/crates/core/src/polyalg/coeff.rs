use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact coefficients: Gaussian rationals `a + b i` with `a, b` arbitrary-precision rationals.
pub type ExactCoeff = Complex<BigRational>;

/// Scalar field for [`MultiPoly`](super::MultiPoly) coefficients.
///
/// Two implementations exist: [`ExactCoeff`] for exact algebra and
/// [`Complex64`] for numeric interop with kernel evaluation.
pub trait Coefficient:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// True when arithmetic is exact.
    const EXACT: bool;

    fn from_rational(r: &BigRational) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(v)))
    }

    fn to_complex(&self) -> Complex64;

    fn conj(&self) -> Self;

    /// Magnitude used for pivot selection and thresholds.
    fn magnitude(&self) -> f64;
}

impl Coefficient for ExactCoeff {
    const EXACT: bool = true;

    fn from_rational(r: &BigRational) -> Self {
        Complex::new(r.clone(), BigRational::zero())
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    fn magnitude(&self) -> f64 {
        let re = self.re.abs().to_f64().unwrap_or(f64::INFINITY);
        let im = self.im.abs().to_f64().unwrap_or(f64::INFINITY);
        re.hypot(im)
    }
}

impl Coefficient for Complex64 {
    const EXACT: bool = false;

    fn from_rational(r: &BigRational) -> Self {
        Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// An exact rational as an [`ExactCoeff`].
pub fn rational(num: i64, den: i64) -> ExactCoeff {
    Complex::new(
        BigRational::new(BigInt::from(num), BigInt::from(den)),
        BigRational::zero(),
    )
}

/// An exact Gaussian rational `re + im i`.
pub fn gaussian(re: BigRational, im: BigRational) -> ExactCoeff {
    Complex::new(re, im)
}
