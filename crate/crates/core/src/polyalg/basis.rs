//! Bases of the harmonic and polyharmonic homogeneous spaces.

use num_complex::Complex64;

use super::coeff::{Coefficient, ExactCoeff};
use super::dims::laplacian_pow_matrix;
use super::poly::{monomials_of_degree, ExactPoly, MultiPoly, NumericPoly};
use crate::error::{Error, Result};
use crate::quadrature::SphereRule;

/// Exact spanning basis of `H^p_m(C^n)` from the nullspace of `Delta^p` on `P_m`.
///
/// Free monomials are taken in graded-lex order, so the result is
/// deterministic. Its length is `dim_Hp(n, m, p)`.
pub fn polyharmonic_basis(n: usize, m: usize, p: usize) -> Result<Vec<ExactPoly>> {
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    if p == 0 {
        return Err(Error::InvalidOrder);
    }
    let monomials = monomials_of_degree(n, m);
    if m < 2 * p {
        return Ok(monomials
            .into_iter()
            .map(|e| MultiPoly::monomial(e, ExactCoeff::from_i64(1)))
            .collect());
    }
    let mat = laplacian_pow_matrix(n, m, p);
    mat.nullspace()
        .into_iter()
        .map(|v| MultiPoly::from_terms(n, monomials.iter().map(|e| e.0.clone()).zip(v)))
        .collect()
}

/// Exact spanning basis of `H_m(C^n)`.
pub fn harmonic_basis(n: usize, m: usize) -> Result<Vec<ExactPoly>> {
    polyharmonic_basis(n, m, 1)
}

/// `<f, g>_S` for polynomials via a rule exact in degree `deg f + deg g`.
fn sphere_inner(f: &NumericPoly, g: &NumericPoly, rule: &SphereRule) -> Result<Complex64> {
    rule.integrate(|x| {
        let a = f.evaluate_real(x).unwrap_or(Complex64::new(f64::NAN, 0.0));
        let b = g.evaluate_real(x).unwrap_or(Complex64::new(f64::NAN, 0.0));
        a * b.conj()
    })
}

/// Orthonormal basis of `H^p_m` under the `L^2(S)` inner product, which on a
/// single degree coincides with the rotated inner product on the order-`p`
/// sphere union. Gram-Schmidt runs over [`polyharmonic_basis`] in order.
///
/// Supported for `n` in `{2, 3}`, where exact quadrature is available.
pub fn orthonormal_polyharmonic_basis(n: usize, m: usize, p: usize) -> Result<Vec<NumericPoly>> {
    let rule = SphereRule::for_degree(n, 2 * m)?;
    let raw = polyharmonic_basis(n, m, p)?;
    let mut out: Vec<NumericPoly> = Vec::with_capacity(raw.len());
    for q in raw {
        let mut v = q.to_numeric();
        // modified Gram-Schmidt, applied twice for stability
        for _ in 0..2 {
            for e in &out {
                let proj = sphere_inner(&v, e, &rule)?;
                v = &v - &e.scale(&proj);
            }
        }
        let norm = sphere_inner(&v, &v, &rule)?.re.sqrt();
        if !(norm > 1e-10) {
            return Err(Error::SingularSystem);
        }
        out.push(v.scale(&Complex64::new(1.0 / norm, 0.0)));
    }
    Ok(out)
}

/// Orthonormal basis of `H_m(C^n)`, `n` in `{2, 3}`.
pub fn orthonormal_harmonic_basis(n: usize, m: usize) -> Result<Vec<NumericPoly>> {
    orthonormal_polyharmonic_basis(n, m, 1)
}
