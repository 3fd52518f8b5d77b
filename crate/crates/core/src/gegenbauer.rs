//! Gegenbauer polynomials `C_m^lambda` and their generating function.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > -0.5) || !lambda.is_finite() {
        return Err(Error::InvalidLambda(lambda));
    }
    Ok(())
}

/// `C_m^lambda(t)` by the three-term recurrence; zero for `m < 0`.
pub fn gegenbauer(lambda: f64, m: i64, t: Complex64) -> Result<Complex64> {
    check_lambda(lambda)?;
    if m < 0 {
        return Ok(Complex64::zero());
    }
    Ok(*gegenbauer_all(lambda, m as usize, t)?.last().unwrap_or(&Complex64::one()))
}

/// `[C_0^lambda(t), ..., C_max^lambda(t)]` by the recurrence
/// `m C_m = 2 t (m + lambda - 1) C_{m-1} - (m + 2 lambda - 2) C_{m-2}`.
pub fn gegenbauer_all(lambda: f64, max_m: usize, t: Complex64) -> Result<Vec<Complex64>> {
    homogeneous_gegenbauer(lambda, max_m, t, Complex64::one())
}

/// `H_m = C_m^lambda(t) w^m` for `m = 0..=max_m`, given only `s = t w` and `q = w^2`.
///
/// The recurrence `m H_m = 2 s (m + lambda - 1) H_{m-1} - (m + 2 lambda - 2) q H_{m-2}`
/// needs neither `t` nor `w` separately, so it stays well defined at `w = 0`
/// and never takes a square root of `q`.
pub fn homogeneous_gegenbauer(
    lambda: f64,
    max_m: usize,
    s: Complex64,
    q: Complex64,
) -> Result<Vec<Complex64>> {
    check_lambda(lambda)?;
    let mut out = Vec::with_capacity(max_m + 1);
    out.push(Complex64::one());
    if max_m >= 1 {
        out.push(s * (2.0 * lambda));
    }
    for m in 2..=max_m {
        let mf = m as f64;
        let next = (s * (2.0 * (mf + lambda - 1.0)) * out[m - 1]
            - q * (mf + 2.0 * lambda - 2.0) * out[m - 2])
            / mf;
        out.push(next);
    }
    Ok(out)
}

/// `C_m^lambda(t)` from the explicit alternating sum
/// `sum_k (-1)^k Gamma(m + lambda - k) / (k! (m - 2k)! Gamma(lambda)) (2t)^{m-2k}`,
/// with the Gamma ratio taken as the product `lambda (lambda + 1) ... (lambda + m - k - 1)`.
pub fn gegenbauer_explicit(lambda: f64, m: i64, t: Complex64) -> Result<Complex64> {
    check_lambda(lambda)?;
    if m < 0 {
        return Ok(Complex64::zero());
    }
    let m = m as usize;
    let mut sum = Complex64::zero();
    for k in 0..=m / 2 {
        let mut c = if k % 2 == 0 { 1.0 } else { -1.0 };
        for j in 0..(m - k) {
            c *= lambda + j as f64;
        }
        for j in 1..=k {
            c /= j as f64;
        }
        for j in 1..=(m - 2 * k) {
            c /= j as f64;
        }
        sum += (t * 2.0).powu((m - 2 * k) as u32) * c;
    }
    Ok(sum)
}

/// The explicit sum in exact rational arithmetic.
pub fn gegenbauer_exact(lambda: &BigRational, m: i64, t: &BigRational) -> Result<BigRational> {
    let half = BigRational::new(BigInt::from(-1), BigInt::from(2));
    if lambda <= &half {
        return Err(Error::InvalidLambda(num_traits::ToPrimitive::to_f64(lambda).unwrap_or(f64::NAN)));
    }
    if m < 0 {
        return Ok(BigRational::zero());
    }
    let m = m as usize;
    let two_t = t * BigRational::from_integer(BigInt::from(2));
    let mut sum = BigRational::zero();
    for k in 0..=m / 2 {
        let mut c = BigRational::one();
        for j in 0..(m - k) {
            c *= lambda + BigRational::from_integer(BigInt::from(j));
        }
        let mut den = BigInt::one();
        for j in 1..=k {
            den *= j;
        }
        for j in 1..=(m - 2 * k) {
            den *= j;
        }
        c /= BigRational::from_integer(den);
        let term = c * num_traits::pow(two_t.clone(), m - 2 * k);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Ok(sum)
}

/// `(1 - 2 t w + w^2)^{-lambda}` on the principal branch.
pub fn generating_closed_form(lambda: f64, t: f64, w: Complex64) -> Complex64 {
    (Complex64::one() - w * (2.0 * t) + w * w).powf(-lambda)
}

/// `sum_{m=0}^{M} C_m^lambda(t) w^m` for real `t` in `[-1, 1]` and `|w| < 1`.
pub fn generating_partial_sum(lambda: f64, t: f64, w: Complex64, big_m: usize) -> Result<Complex64> {
    check_lambda(lambda)?;
    if !(w.norm() < 1.0) {
        return Err(Error::GeneratingRadius(w.norm()));
    }
    if !(-1.0..=1.0).contains(&t) {
        return Err(Error::InvalidArgument(format!("t = {t} outside [-1, 1]")));
    }
    let c = gegenbauer_all(lambda, big_m, Complex64::new(t, 0.0))?;
    let mut acc = crate::quadrature::CompensatedSum::default();
    let mut wp = Complex64::one();
    for cm in c {
        acc.add(cm * wp);
        wp *= w;
    }
    Ok(acc.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn low_degrees() {
        for &lambda in &[0.5, 1.0, 1.5, 3.0] {
            for &t in &[-0.7, 0.0, 0.3, 1.0] {
                assert_eq!(gegenbauer(lambda, 0, c(t)).unwrap(), c(1.0));
                assert!((gegenbauer(lambda, 1, c(t)).unwrap() - c(2.0 * lambda * t)).norm() < 1e-15);
            }
        }
        assert!(gegenbauer(1.0, 2, c(0.5)).unwrap().norm() < 1e-15);
        assert!(gegenbauer_explicit(1.0, 2, c(0.5)).unwrap().norm() < 1e-15);
        assert_eq!(gegenbauer(1.5, -2, c(0.3)).unwrap(), c(0.0));
    }

    #[test]
    fn invalid_lambda() {
        assert_eq!(gegenbauer(-0.5, 2, c(0.1)), Err(Error::InvalidLambda(-0.5)));
        assert!(gegenbauer(f64::NAN, 2, c(0.1)).is_err());
        assert!(gegenbauer_exact(&BigRational::new((-1).into(), 2.into()), 1, &BigRational::zero()).is_err());
    }

    #[test]
    fn chebyshev_second_kind_at_one() {
        // C_m^1(1) = m + 1
        for m in 0..20 {
            assert!((gegenbauer(1.0, m, c(1.0)).unwrap().re - (m + 1) as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn parity() {
        for m in 0..25 {
            for &t in &[0.1, 0.45, 0.9] {
                let a = gegenbauer(1.5, m, c(t)).unwrap();
                let b = gegenbauer(1.5, m, c(-t)).unwrap();
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                assert!((b - a * sign).norm() <= 1e-12 * a.norm().max(1.0));
            }
        }
    }

    #[test]
    fn recurrence_matches_exact_sum() {
        for &lambda in &[1.0, 1.5, 2.0, 2.5] {
            let lr = BigRational::from_float(lambda).unwrap();
            for m in [3, 10, 17, 30] {
                let ts: Vec<f64> = (0..=20).map(|i| -1.0 + i as f64 / 10.0).collect();
                let exact: Vec<f64> = ts
                    .iter()
                    .map(|&t| {
                        gegenbauer_exact(&lr, m, &BigRational::from_float(t).unwrap())
                            .unwrap()
                            .to_f64()
                            .unwrap()
                    })
                    .collect();
                let scale = exact.iter().fold(0.0f64, |a, b| a.max(b.abs()));
                for (t, e) in ts.iter().zip(&exact) {
                    let r = gegenbauer(lambda, m, c(*t)).unwrap();
                    assert!((r.re - e).abs() <= 1e-11 * scale, "lambda={lambda} m={m} t={t}");
                }
            }
        }
    }

    #[test]
    fn homogeneous_form_matches_scaled() {
        let t = Complex64::new(0.3, 0.2);
        let w = Complex64::new(0.5, -0.4);
        let h = homogeneous_gegenbauer(1.5, 12, t * w, w * w).unwrap();
        let g = gegenbauer_all(1.5, 12, t).unwrap();
        for m in 0..=12 {
            let want = g[m] * w.powu(m as u32);
            assert!((h[m] - want).norm() < 1e-13 * want.norm().max(1.0));
        }
    }

    #[test]
    fn generating_function_examples() {
        let s = generating_partial_sum(0.5, 1.0, c(0.5), 80).unwrap();
        assert!((s - c(2.0)).norm() < 1e-14);
        assert_eq!(generating_partial_sum(2.0, 0.3, c(0.0), 7).unwrap(), c(1.0));
        let s = generating_partial_sum(1.0, 0.0, c(0.5), 80).unwrap();
        assert!((s - c(0.8)).norm() < 1e-14);
        assert_eq!(
            generating_partial_sum(1.0, 0.0, c(1.0), 5),
            Err(Error::GeneratingRadius(1.0))
        );
    }

    #[test]
    fn generating_gap_shrinks_geometrically() {
        let w = Complex64::from_polar(0.6, 0.7);
        let closed = generating_closed_form(1.5, 0.4, w);
        let gaps: Vec<f64> = (0..60)
            .map(|m| (generating_partial_sum(1.5, 0.4, w, m).unwrap() - closed).norm())
            .collect();
        let k = (10..60)
            .map(|m| gaps[m] * (1.0 - 0.6) / 0.6f64.powi(m as i32 + 1))
            .fold(0.0, f64::max);
        for (m, gap) in gaps.iter().enumerate().take(60).skip(10) {
            assert!(*gap <= k * 0.6f64.powi(m as i32 + 1) / (1.0 - 0.6) * (1.0 + 1e-9));
        }
        assert!(gaps[59] < 1e-9);
    }
}
