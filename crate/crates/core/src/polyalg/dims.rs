//! Dimensions of the homogeneous, harmonic and polyharmonic polynomial spaces.

use std::collections::HashMap;

use super::coeff::{Coefficient, ExactCoeff};
use super::linalg::Matrix;
use super::poly::{monomials_of_degree, Exponents, ExactPoly};
use crate::error::{Error, Result};

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    Ok(())
}

/// Overflow-checked binomial coefficient.
pub fn binomial(a: u64, b: u64) -> Result<u64> {
    if b > a {
        return Ok(0);
    }
    let b = b.min(a - b);
    let mut acc: u128 = 1;
    for i in 0..b {
        // acc * (a - i) / (i + 1) is always an integer at this point
        acc = acc
            .checked_mul((a - i) as u128)
            .ok_or(Error::Overflow("binomial coefficient"))?
            / (i as u128 + 1);
    }
    u64::try_from(acc).map_err(|_| Error::Overflow("binomial coefficient"))
}

/// `dim P_m(C^n) = C(n + m - 1, n - 1)`.
pub fn dim_p(n: usize, m: usize) -> Result<u64> {
    check_n(n)?;
    let top = (n as u64)
        .checked_add(m as u64)
        .and_then(|v| v.checked_sub(1))
        .ok_or(Error::Overflow("dim_P"))?;
    binomial(top, n as u64 - 1)
}

/// `dim H_m(C^n)`.
pub fn dim_h(n: usize, m: usize) -> Result<u64> {
    dim_hp(n, m, 1)
}

/// `dim H^p_m(C^n)`: `dim P_m` for `m < 2p`, else `dim P_m - dim P_{m-2p}`.
pub fn dim_hp(n: usize, m: usize, p: usize) -> Result<u64> {
    if p == 0 {
        return Err(Error::InvalidOrder);
    }
    let full = dim_p(n, m)?;
    let two_p = p.checked_mul(2).ok_or(Error::Overflow("dim_Hp"))?;
    if m < two_p {
        return Ok(full);
    }
    Ok(full - dim_p(n, m - two_p)?)
}

/// Matrix of `Delta^p : P_m -> P_{m-2p}` in the graded-lex monomial bases.
pub(crate) fn laplacian_pow_matrix(n: usize, m: usize, p: usize) -> Matrix<ExactCoeff> {
    let cols = monomials_of_degree(n, m);
    if m < 2 * p {
        return Matrix::zeros(0, cols.len());
    }
    let rows = monomials_of_degree(n, m - 2 * p);
    let index: HashMap<&Exponents, usize> = rows.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let mut mat = Matrix::zeros(rows.len(), cols.len());
    for (c, e) in cols.iter().enumerate() {
        let image = ExactPoly::monomial(e.clone(), ExactCoeff::from_i64(1)).laplacian_pow(p);
        for (f, v) in image.terms() {
            mat.set(index[f], c, v.clone());
        }
    }
    mat
}

/// Exact nullity of `Delta^p` on `P_m(C^n)`, computed by row reduction.
pub fn polyharmonic_nullity(n: usize, m: usize, p: usize) -> Result<u64> {
    check_n(n)?;
    if p == 0 {
        return Err(Error::InvalidOrder);
    }
    let mat = laplacian_pow_matrix(n, m, p);
    Ok((mat.cols() - mat.rank()) as u64)
}
