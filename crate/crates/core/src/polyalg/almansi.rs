//! Almansi decompositions of homogeneous polynomials.
//!
//! A homogeneous `q` of degree `m` splits uniquely as `q = h + |x|^2 r` with
//! `h` harmonic. Since `Delta q = Delta(|x|^2 r)` and `r -> Delta(|x|^2 r)`
//! is a bijection of `P_{m-2}`, `r` is found by one exact linear solve and the
//! procedure recurses on `r`. Grouping the harmonic pieces in blocks of `p`
//! gives the order-`p` decomposition.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::coeff::{Coefficient, ExactCoeff};
use super::linalg::Matrix;
use super::poly::{monomials_of_degree, Exponents, ExactPoly, MultiPoly};
use crate::error::{Error, Result};

/// `q = sum_k |x|^{2 k order} components[k]`, each component homogeneous
/// and annihilated by `Delta^order`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlmansiDecomposition<C> {
    order: usize,
    degree: usize,
    n: usize,
    components: Vec<MultiPoly<C>>,
}

impl<C: Coefficient> AlmansiDecomposition<C> {
    pub fn order(&self) -> usize {
        self.order
    }

    /// Degree of the decomposed polynomial.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Stored components; trailing zero components are dropped.
    pub fn components(&self) -> &[MultiPoly<C>] {
        &self.components
    }

    /// Component `k`, zero past the stored range.
    pub fn component(&self, k: usize) -> MultiPoly<C> {
        self.components
            .get(k)
            .cloned()
            .unwrap_or_else(|| MultiPoly::zero(self.n))
    }

    /// Components padded with zeros to length `len`.
    pub fn padded(&self, len: usize) -> Vec<MultiPoly<C>> {
        (0..len.max(self.components.len()))
            .map(|k| self.component(k))
            .collect()
    }

    /// Exponent `2 k order` of the radial factor multiplying component `k`.
    pub fn radial_exponent(&self, k: usize) -> usize {
        2 * k * self.order
    }

    pub fn reassemble(&self) -> MultiPoly<C> {
        self.components
            .iter()
            .enumerate()
            .fold(MultiPoly::zero(self.n), |acc, (k, u)| {
                &acc + &(&MultiPoly::radial(self.n, k * self.order) * u)
            })
    }
}

type InverseCache = Mutex<HashMap<(usize, usize), Arc<Matrix<ExactCoeff>>>>;

/// Inverse of `r -> Delta(|x|^2 r)` on `P_d(C^n)`, cached per `(n, d)`.
fn radial_laplacian_inverse(n: usize, d: usize) -> Result<Arc<Matrix<ExactCoeff>>> {
    static CACHE: OnceLock<InverseCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(m) = cache.lock().expect("cache poisoned").get(&(n, d)) {
        return Ok(m.clone());
    }
    let basis = monomials_of_degree(n, d);
    let index: HashMap<&Exponents, usize> =
        basis.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let r2 = ExactPoly::radial(n, 1);
    let mut mat = Matrix::zeros(basis.len(), basis.len());
    for (c, e) in basis.iter().enumerate() {
        let image = (&r2 * &ExactPoly::monomial(e.clone(), ExactCoeff::from_i64(1))).laplacian();
        for (f, v) in image.terms() {
            mat.set(index[f], c, v.clone());
        }
    }
    let inv = Arc::new(mat.inverse()?);
    cache
        .lock()
        .expect("cache poisoned")
        .insert((n, d), inv.clone());
    Ok(inv)
}

/// One Almansi step: `q = h + |x|^2 r` with `Delta h = 0`, for homogeneous `q`
/// of degree `m >= 2`.
fn almansi_step<C: Coefficient>(q: &MultiPoly<C>, m: usize) -> Result<(MultiPoly<C>, MultiPoly<C>)> {
    let n = q.n();
    let d = m - 2;
    let inv = radial_laplacian_inverse(n, d)?;
    let basis = monomials_of_degree(n, d);
    let lap = q.laplacian();
    let rhs: Vec<C> = basis
        .iter()
        .map(|e| lap.coeff(&e.0))
        .collect();
    let inv_c: Matrix<C> = inv.map(|c| C::from_rational(&c.re));
    let sol = inv_c.mul_vec(&rhs);
    let r = MultiPoly::from_terms(n, basis.into_iter().map(|e| e.0).zip(sol))?;
    let h = q - &(&MultiPoly::radial(n, 1) * &r);
    Ok((h, r))
}

fn homogeneous_degree<C: Coefficient>(q: &MultiPoly<C>) -> Result<usize> {
    if !q.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    Ok(q.degree().unwrap_or(0))
}

fn trim<C: Coefficient>(mut v: Vec<MultiPoly<C>>) -> Vec<MultiPoly<C>> {
    while v.last().is_some_and(MultiPoly::is_zero) {
        v.pop();
    }
    v
}

/// Harmonic Almansi decomposition `q = sum_k |x|^{2k} u_k`, `u_k` harmonic of
/// degree `m - 2k`.
pub fn harmonic_almansi<C: Coefficient>(q: &MultiPoly<C>) -> Result<AlmansiDecomposition<C>> {
    let m = homogeneous_degree(q)?;
    let n = q.n();
    let mut components = Vec::with_capacity(m / 2 + 1);
    let mut current = q.clone();
    let mut deg = m;
    while deg >= 2 && !current.is_zero() {
        let (h, r) = almansi_step(&current, deg)?;
        components.push(h);
        current = r;
        deg -= 2;
    }
    components.push(current);
    Ok(AlmansiDecomposition {
        order: 1,
        degree: m,
        n,
        components: trim(components),
    })
}

/// Order-`p` Almansi decomposition `q = sum_k |x|^{2kp} q_k`, `Delta^p q_k = 0`.
///
/// Built from the harmonic one by grouping
/// `q_k = sum_{j<p} |x|^{2j} u_{kp+j}`.
pub fn polyharmonic_almansi<C: Coefficient>(
    q: &MultiPoly<C>,
    p: usize,
) -> Result<AlmansiDecomposition<C>> {
    if p == 0 {
        return Err(Error::InvalidOrder);
    }
    let harmonic = harmonic_almansi(q)?;
    let n = q.n();
    let m = harmonic.degree;
    let blocks = m / (2 * p) + 1;
    let components = (0..blocks)
        .map(|k| {
            (0..p).fold(MultiPoly::zero(n), |acc, j| {
                let u = harmonic.component(k * p + j);
                if u.is_zero() {
                    acc
                } else {
                    &acc + &(&MultiPoly::radial(n, j) * &u)
                }
            })
        })
        .collect();
    Ok(AlmansiDecomposition {
        order: p,
        degree: m,
        n,
        components: trim(components),
    })
}

/// The direct-sum split `q = h + |x|^{2p} r` with `Delta^p h = 0`.
pub fn polyharmonic_split<C: Coefficient>(
    q: &MultiPoly<C>,
    p: usize,
) -> Result<(MultiPoly<C>, MultiPoly<C>)> {
    let dec = polyharmonic_almansi(q, p)?;
    let n = q.n();
    let h = dec.component(0);
    let r = dec
        .components()
        .iter()
        .enumerate()
        .skip(1)
        .fold(MultiPoly::zero(n), |acc, (k, c)| {
            &acc + &(&MultiPoly::radial(n, (k - 1) * p) * c)
        });
    Ok((h, r))
}

impl<C: Coefficient> AlmansiDecomposition<C> {
    /// True iff every component is annihilated by `Delta^order`.
    pub fn components_annihilated(&self) -> bool {
        self.components
            .iter()
            .all(|u| u.is_polyharmonic(self.order).unwrap_or(false))
    }
}
