use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::coeff::{Coefficient, ExactCoeff};
use crate::error::{Error, Result};
use crate::geometry::{ComplexVector, RotatedVector};

/// Exponent multi-index of a monomial.
///
/// Ordered graded-lexicographically: total degree first, then `x1^2` before
/// `x1 x2` before `x2^2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Exponents(pub Vec<u32>);

impl Exponents {
    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }
}

impl Ord for Exponents {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Exponents {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial in `n` variables.
///
/// Zero coefficients are never stored, so the zero polynomial is the empty map.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiPoly<C> {
    n: usize,
    terms: BTreeMap<Exponents, C>,
}

pub type ExactPoly = MultiPoly<ExactCoeff>;
pub type NumericPoly = MultiPoly<Complex64>;

/// All exponent vectors of total degree `m` in `n` variables, in graded-lex order.
pub fn monomials_of_degree(n: usize, m: usize) -> Vec<Exponents> {
    fn rec(n: usize, left: usize, prefix: &mut Vec<u32>, out: &mut Vec<Exponents>) {
        if prefix.len() + 1 == n {
            prefix.push(left as u32);
            out.push(Exponents(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e as u32);
            rec(n, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    rec(n, m, &mut Vec::with_capacity(n), &mut out);
    out
}

impl<C: Coefficient> MultiPoly<C> {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: C) -> Self {
        Self::monomial(Exponents(vec![0; n]), c)
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, C::one())
    }

    pub fn monomial(exps: Exponents, c: C) -> Self {
        let n = exps.0.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Self { n, terms }
    }

    /// The coordinate function `x_{i+1}` (zero-based `i`).
    pub fn variable(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Self::monomial(Exponents(e), C::one())
    }

    /// `|x|^{2k} = (x_1^2 + ... + x_n^2)^k`.
    pub fn radial(n: usize, k: usize) -> Self {
        let mut sq = Self::zero(n);
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 2;
            sq.add_term(Exponents(e), C::one());
        }
        let mut out = Self::one(n);
        for _ in 0..k {
            out = &out * &sq;
        }
        out
    }

    /// Builds a polynomial from raw terms; zero coefficients are dropped and
    /// repeated exponents are summed.
    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Vec<u32>, C)>) -> Result<Self> {
        let mut out = Self::zero(n);
        for (e, c) in terms {
            if e.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: e.len(),
                });
            }
            out.add_term(Exponents(e), c);
        }
        Ok(out)
    }

    pub(crate) fn add_term(&mut self, e: Exponents, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&e) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(e, s);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_exact(&self) -> bool {
        C::EXACT
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &[u32]) -> C {
        self.terms
            .get(&Exponents(e.to_vec()))
            .cloned()
            .unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Exponents::degree).max()
    }

    /// True when every term has the same total degree. The zero polynomial
    /// counts as homogeneous of any degree.
    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Exponents::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn homogeneous_component(&self, d: usize) -> Self {
        Self {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.degree() == d)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Splits into homogeneous parts keyed by degree.
    pub fn homogeneous_components(&self) -> BTreeMap<usize, Self> {
        let mut out: BTreeMap<usize, Self> = BTreeMap::new();
        for (e, c) in &self.terms {
            out.entry(e.degree())
                .or_insert_with(|| Self::zero(self.n))
                .terms
                .insert(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, a: &C) -> Self {
        if a.is_zero() {
            return Self::zero(self.n);
        }
        Self {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.clone() * a.clone()))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> MultiPoly<D> {
        let mut out = MultiPoly::zero(self.n);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    pub fn to_numeric(&self) -> NumericPoly {
        self.map_coeffs(|c| c.to_complex())
    }

    /// Coefficient-wise complex conjugate.
    pub fn conj(&self) -> Self {
        self.map_coeffs(|c| c.conj())
    }

    /// `d/dx_{i+1}` (zero-based `i`).
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (e, c) in &self.terms {
            let k = e.0[i];
            if k == 0 {
                continue;
            }
            let mut f = e.0.clone();
            f[i] -= 1;
            out.add_term(Exponents(f), c.clone() * C::from_i64(k as i64));
        }
        out
    }

    /// `sum_j d^2/dx_j^2`, computed on coefficients.
    pub fn laplacian(&self) -> Self {
        let mut out = Self::zero(self.n);
        for (e, c) in &self.terms {
            for j in 0..self.n {
                let k = e.0[j] as i64;
                if k < 2 {
                    continue;
                }
                let mut f = e.0.clone();
                f[j] -= 2;
                out.add_term(Exponents(f), c.clone() * C::from_i64(k * (k - 1)));
            }
        }
        out
    }

    /// `p`-fold Laplacian.
    pub fn laplacian_pow(&self, p: usize) -> Self {
        let mut out = self.clone();
        for _ in 0..p {
            if out.is_zero() {
                break;
            }
            out = out.laplacian();
        }
        out
    }

    /// True iff `Delta^p q = 0`.
    ///
    /// Exact polynomials compare with zero exactly. Numeric polynomials use a
    /// threshold of `1e-9` relative to the largest coefficient of `q`, scaled
    /// by the growth `(n m^2)^p` that `p` Laplacians can produce.
    pub fn is_polyharmonic(&self, p: usize) -> Result<bool> {
        if p == 0 {
            return Err(Error::InvalidOrder);
        }
        let lap = self.laplacian_pow(p);
        if C::EXACT {
            return Ok(lap.is_zero());
        }
        let m = self.degree().unwrap_or(0) as f64;
        let qmax = self.max_magnitude();
        let growth = (self.n as f64 * m.max(1.0).powi(2)).powi(p as i32);
        Ok(lap.max_magnitude() <= 1e-9 * qmax * growth)
    }

    pub fn max_magnitude(&self) -> f64 {
        self.terms.values().map(C::magnitude).fold(0.0, f64::max)
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: n,
            });
        }
        Ok(())
    }

    /// Direct monomial evaluation at a complex point.
    pub fn evaluate(&self, z: &ComplexVector) -> Result<Complex64> {
        self.check_dim(z.dim())?;
        let deg = self.degree().unwrap_or(0);
        let powers: Vec<Vec<Complex64>> = z
            .entries()
            .iter()
            .map(|&zi| powers_upto(zi, deg))
            .collect();
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| {
                e.0.iter()
                    .enumerate()
                    .fold(c.to_complex(), |acc, (i, &k)| acc * powers[i][k as usize])
            })
            .sum())
    }

    /// Evaluation at a real point.
    pub fn evaluate_real(&self, x: &[f64]) -> Result<Complex64> {
        self.check_dim(x.len())?;
        let deg = self.degree().unwrap_or(0);
        let powers: Vec<Vec<f64>> = x
            .iter()
            .map(|&xi| {
                let mut v = Vec::with_capacity(deg + 1);
                let mut acc = 1.0;
                for _ in 0..=deg {
                    v.push(acc);
                    acc *= xi;
                }
                v
            })
            .collect();
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono = e
                    .0
                    .iter()
                    .enumerate()
                    .fold(1.0, |acc, (i, &k)| acc * powers[i][k as usize]);
                c.to_complex() * mono
            })
            .sum())
    }

    /// Evaluation at `e^{i phi} a` through homogeneity: each degree-`d`
    /// part contributes `e^{i d phi} q_d(a)`.
    pub fn evaluate_rotated(&self, v: &RotatedVector) -> Result<Complex64> {
        self.check_dim(v.dim())?;
        let deg = self.degree().unwrap_or(0);
        let phases = powers_upto(v.phase(), deg);
        let mut total = Complex64::new(0.0, 0.0);
        for (d, part) in self.homogeneous_components() {
            total += phases[d] * part.evaluate_real(v.coords())?;
        }
        Ok(total)
    }
}

fn powers_upto(z: Complex64, deg: usize) -> Vec<Complex64> {
    let mut v = Vec::with_capacity(deg + 1);
    let mut acc = Complex64::new(1.0, 0.0);
    for _ in 0..=deg {
        v.push(acc);
        acc *= z;
    }
    v
}

impl<C: Coefficient> Add for &MultiPoly<C> {
    type Output = MultiPoly<C>;

    fn add(self, rhs: Self) -> MultiPoly<C> {
        assert_eq!(self.n, rhs.n, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<C: Coefficient> Sub for &MultiPoly<C> {
    type Output = MultiPoly<C>;

    fn sub(self, rhs: Self) -> MultiPoly<C> {
        assert_eq!(self.n, rhs.n, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl<C: Coefficient> Mul for &MultiPoly<C> {
    type Output = MultiPoly<C>;

    fn mul(self, rhs: Self) -> MultiPoly<C> {
        assert_eq!(self.n, rhs.n, "variable count mismatch");
        let mut out = MultiPoly::zero(self.n);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<u32> = e1.0.iter().zip(&e2.0).map(|(a, b)| a + b).collect();
                out.add_term(Exponents(e), c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<C: Coefficient> Neg for &MultiPoly<C> {
    type Output = MultiPoly<C>;

    fn neg(self) -> MultiPoly<C> {
        self.map_coeffs(|c| -c.clone())
    }
}

impl<C: Coefficient> Add for MultiPoly<C> {
    type Output = MultiPoly<C>;

    fn add(self, rhs: Self) -> MultiPoly<C> {
        &self + &rhs
    }
}

impl<C: Coefficient> Sub for MultiPoly<C> {
    type Output = MultiPoly<C>;

    fn sub(self, rhs: Self) -> MultiPoly<C> {
        &self - &rhs
    }
}

impl<C: Coefficient> Mul for MultiPoly<C> {
    type Output = MultiPoly<C>;

    fn mul(self, rhs: Self) -> MultiPoly<C> {
        &self * &rhs
    }
}
