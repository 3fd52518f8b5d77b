//! Zonal harmonics, zonal polyharmonics, Poisson kernels of the rotated ball
//! and the Cauchy-Hua kernel of the Lie ball.
//!
//! Every kernel here depends on the pair `(x, zeta)` only through
//! `s = x . conj(zeta)`, `q = x^2 conj(zeta^2)` and, for the Poisson
//! numerator, `x^2`. Powers of `|x| |zeta|` always pair up into powers of
//! `q`, so no square root of a complex number is taken except for the
//! `n/2` power of the Poisson denominator when `n` is odd.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gegenbauer::homogeneous_gegenbauer;
use crate::geometry::{ComplexVector, RotatedVector, UNIT_NORM_TOL};
use crate::polyalg::dim_hp;

/// Denominators below this magnitude are reported as singular.
pub const SINGULAR_TOL: f64 = 1e-14;

/// Hard cap on the number of series terms.
pub const SERIES_CAP: usize = 10_000;

/// Evaluation route for zonal polyharmonics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ZonalRoute {
    /// `sum_{k<p} |x|^{2k} |zeta|^{2k} Z_{m-2k}` with the classical zonal harmonics.
    SumOfZonals,
    /// `[C_m^{n/2}(t) - C_{m-2p}^{n/2}(t)] (|x| |zeta|)^m`.
    GegenbauerDiff,
    /// Closed coefficient formula in powers of `x . conj(zeta)` and `q`.
    ExplicitSum,
}

impl ZonalRoute {
    pub const ALL: [ZonalRoute; 3] = [
        ZonalRoute::SumOfZonals,
        ZonalRoute::GegenbauerDiff,
        ZonalRoute::ExplicitSum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ZonalRoute::SumOfZonals => "SUM_OF_ZONALS",
            ZonalRoute::GegenbauerDiff => "GEGENBAUER_DIFF",
            ZonalRoute::ExplicitSum => "EXPLICIT_SUM",
        }
    }
}

impl fmt::Display for ZonalRoute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ZonalRoute {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ZonalRoute::ALL
            .into_iter()
            .find(|r| r.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown zonal route '{s}'")))
    }
}

/// Dimension `n`, order `p` and degree `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelParams {
    pub n: usize,
    pub p: usize,
    pub m: usize,
}

impl KernelParams {
    pub fn new(n: usize, p: usize, m: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension(n));
        }
        if p == 0 {
            return Err(Error::InvalidOrder);
        }
        Ok(Self { n, p, m })
    }
}

/// A kernel value with its truncation contract (series routes only).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelValue {
    pub value: Complex64,
    pub terms_used: usize,
    pub tail_bound: f64,
}

/// `s = x . conj(w)` and `q = x^2 conj(w^2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairInvariants {
    pub s: Complex64,
    pub q: Complex64,
}

impl PairInvariants {
    pub fn new(x: &ComplexVector, w: &ComplexVector) -> Result<Self> {
        Ok(Self {
            s: x.hermitian_dot(w)?,
            q: x.bilinear_square() * w.bilinear_square().conj(),
        })
    }
}

fn check_unit(zeta: &RotatedVector) -> Result<()> {
    let r = zeta.radius();
    if (r - 1.0).abs() > UNIT_NORM_TOL {
        return Err(Error::OffSphere {
            p: 0,
            reason: format!("real part has norm {r}"),
        });
    }
    Ok(())
}

fn check_dims(n: usize, a: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    if a != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: a,
        });
    }
    Ok(())
}

/// Classical zonal harmonics `Z_0 .. Z_max` in the invariants.
///
/// `n >= 3`: `Z_m = (2m + n - 2)/(n - 2) C_m^{(n-2)/2}(t) w^m`;
/// `n = 2`: `Z_0 = 1`, `Z_m = 2 T_m(t) w^m`.
pub fn zonal_harmonics_from_invariants(n: usize, max_m: usize, inv: PairInvariants) -> Result<Vec<Complex64>> {
    let PairInvariants { s, q } = inv;
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    if n == 2 {
        let mut t = vec![Complex64::one()];
        if max_m >= 1 {
            t.push(s);
        }
        for m in 2..=max_m {
            let next = s * 2.0 * t[m - 1] - q * t[m - 2];
            t.push(next);
        }
        return Ok(t
            .into_iter()
            .enumerate()
            .map(|(m, v)| if m == 0 { v } else { v * 2.0 })
            .collect());
    }
    let lambda = (n as f64 - 2.0) / 2.0;
    let h = homogeneous_gegenbauer(lambda, max_m, s, q)?;
    Ok(h.into_iter()
        .enumerate()
        .map(|(m, v)| v * ((2 * m + n - 2) as f64 / (n - 2) as f64))
        .collect())
}

/// Coefficient of `s^{m-2k} q^k` in `Z_m^p` (sign-corrected closed form).
///
/// `(-1)^k n (n+2) ... (n + 2(m-p-k) - 2) / (k! 2^k (m-2k)!)`
/// `x [ (n + 2(m-p-k)) ... (n + 2(m-k-1)) - (-1)^p 2^p (k-p+1) ... k ]`.
pub fn explicit_coefficient(n: usize, p: usize, m: usize, k: usize) -> f64 {
    let nf = n as f64;
    let split = (m as i64 - p as i64 - k as i64).max(0) as usize;
    let mut prefix = 1.0;
    for j in 0..split {
        prefix *= nf + 2.0 * j as f64;
    }
    let mut head = 1.0;
    for j in split..(m - k) {
        head *= nf + 2.0 * j as f64;
    }
    let mut tail = 0.0;
    if k >= p {
        tail = 1.0;
        for j in (k - p + 1)..=k {
            tail *= 2.0 * j as f64;
        }
        if p % 2 == 1 {
            tail = -tail;
        }
    }
    let mut den = 1.0;
    for j in 1..=k {
        den *= 2.0 * j as f64;
    }
    for j in 1..=(m - 2 * k) {
        den *= j as f64;
    }
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * prefix * (head - tail) / den
}

/// `Z_m^p` from the invariants along one route; zero for `m < 0`.
pub fn zonal_from_invariants(
    n: usize,
    p: usize,
    m: i64,
    inv: PairInvariants,
    route: ZonalRoute,
) -> Result<Complex64> {
    KernelParams::new(n, p, 0)?;
    if m < 0 {
        return Ok(Complex64::zero());
    }
    let m = m as usize;
    let PairInvariants { s, q } = inv;
    match route {
        ZonalRoute::SumOfZonals => {
            let z = zonal_harmonics_from_invariants(n, m, inv)?;
            let mut acc = Complex64::zero();
            let mut qk = Complex64::one();
            for k in 0..p {
                if 2 * k > m {
                    break;
                }
                acc += qk * z[m - 2 * k];
                qk *= q;
            }
            Ok(acc)
        }
        ZonalRoute::GegenbauerDiff => {
            let h = homogeneous_gegenbauer(n as f64 / 2.0, m, s, q)?;
            let low = if m >= 2 * p { h[m - 2 * p] } else { Complex64::zero() };
            Ok(h[m] - q.powu(p as u32) * low)
        }
        ZonalRoute::ExplicitSum => {
            let mut acc = Complex64::zero();
            for k in 0..=m / 2 {
                let c = explicit_coefficient(n, p, m, k);
                if c != 0.0 {
                    acc += s.powu((m - 2 * k) as u32) * q.powu(k as u32) * c;
                }
            }
            Ok(acc)
        }
    }
}

/// Zonal harmonic `Z_m(x, zeta)` for `zeta` with unit real part.
pub fn zonal_harmonic(n: usize, m: i64, x: &ComplexVector, zeta: &RotatedVector) -> Result<Complex64> {
    check_dims(n, x.dim())?;
    check_dims(n, zeta.dim())?;
    check_unit(zeta)?;
    if m < 0 {
        return Ok(Complex64::zero());
    }
    let inv = PairInvariants::new(x, &zeta.to_complex())?;
    Ok(zonal_harmonics_from_invariants(n, m as usize, inv)?[m as usize])
}

/// Zonal polyharmonic `Z_m^p(x, zeta)` for `zeta` on the order-`p` rotated sphere.
pub fn zonal_polyharmonic(
    params: KernelParams,
    x: &ComplexVector,
    zeta: &RotatedVector,
    route: ZonalRoute,
) -> Result<Complex64> {
    let KernelParams { n, p, m } = params;
    check_dims(n, x.dim())?;
    check_dims(n, zeta.dim())?;
    zeta.require_on_sphere(p)?;
    let inv = PairInvariants::new(x, &zeta.to_complex())?;
    zonal_from_invariants(n, p, m as i64, inv, route)
}

/// `Z_m^p(x, w)` continued to arbitrary `w` in `C^n` (same polynomial formula).
pub fn zonal_polyharmonic_extended(
    params: KernelParams,
    x: &ComplexVector,
    w: &ComplexVector,
    route: ZonalRoute,
) -> Result<Complex64> {
    let KernelParams { n, p, m } = params;
    check_dims(n, x.dim())?;
    check_dims(n, w.dim())?;
    zonal_from_invariants(n, p, m as i64, PairInvariants::new(x, w)?, route)
}

/// `d^{n/2}`: integer power for even `n`, principal branch for odd `n`.
pub fn half_power(d: Complex64, n: usize) -> Complex64 {
    if n.is_multiple_of(2) {
        d.powu((n / 2) as u32)
    } else {
        d.sqrt() * d.powu((n / 2) as u32)
    }
}

/// `(1 - x2^p) / (q - 2 s + 1)^{n/2}`.
pub fn poisson_from_invariants(n: usize, p: usize, x2: Complex64, inv: PairInvariants) -> Result<Complex64> {
    let d = inv.q - inv.s * 2.0 + 1.0;
    if d.norm() <= SINGULAR_TOL {
        return Err(Error::Singular(d.norm()));
    }
    Ok((Complex64::one() - x2.powu(p as u32)) / half_power(d, n))
}

/// Closed-form Poisson kernel `P_p(x, zeta)` of the order-`p` rotated ball.
pub fn poisson_kernel(n: usize, p: usize, x: &RotatedVector, zeta: &RotatedVector) -> Result<Complex64> {
    check_dims(n, x.dim())?;
    check_dims(n, zeta.dim())?;
    x.require_in_ball(p, 0.0)?;
    zeta.require_on_sphere(p)?;
    let inv = PairInvariants::new(&x.to_complex(), &zeta.to_complex())?;
    poisson_from_invariants(n, p, x.bilinear_square(), inv)
}

/// `P_p(z, w) = (1 - (z^2 conj(w^2))^p) / (conj(w^2) z^2 - 2 conj(w) . z + 1)^{n/2}`
/// for arbitrary `z, w`; on `w` in the rotated sphere this is [`poisson_kernel`].
pub fn poisson_kernel_general(n: usize, p: usize, z: &ComplexVector, w: &ComplexVector) -> Result<Complex64> {
    check_dims(n, z.dim())?;
    check_dims(n, w.dim())?;
    let inv = PairInvariants::new(z, w)?;
    let d = inv.q - inv.s * 2.0 + 1.0;
    if d.norm() <= SINGULAR_TOL {
        return Err(Error::Singular(d.norm()));
    }
    Ok((Complex64::one() - inv.q.powu(p as u32)) / half_power(d, n))
}

/// `Chat * p * sum_{m > big_m} m^{n-2} r^m`, with a geometric bound on the far tail.
fn tail_sums(n: usize, r: f64, cap: usize) -> Vec<f64> {
    // tails[M] = sum_{m > M} m^{n-2} r^m for M = 0..=cap
    let d = (n - 2) as i32;
    let term = |m: usize| (m as f64).powi(d) * r.powi(m as i32);
    let last = cap + 1;
    let ratio = ((last + 1) as f64 / last as f64).powi(d) * r;
    let mut beyond = if ratio < 1.0 {
        term(last + 1) / (1.0 - ratio)
    } else {
        f64::INFINITY
    };
    let mut tails = vec![0.0; cap + 1];
    for big_m in (0..=cap).rev() {
        beyond += term(big_m + 1);
        tails[big_m] = beyond;
    }
    tails
}

fn calibration_cache() -> &'static Mutex<HashMap<(usize, usize), f64>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), f64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Random point `e^{j pi i/p} a` with `|a| = r`.
pub(crate) fn random_rotated(rng: &mut impl Rng, n: usize, p: usize, r: f64) -> RotatedVector {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-3 {
            let j = rng.random_range(0..p);
            let coords = v.into_iter().map(|x| x * r / norm).collect();
            if let Ok(out) = RotatedVector::on_sector(j, p, coords) {
                return out;
            }
        }
    }
}

/// The series tail constant `Chat` for `(n, p)`: the largest observed
/// `|Z_m^p(x, zeta)| / (p m^{n-2} r^m)` over 200 seeded probe pairs and
/// `1 <= m <= 20`, doubled. Cached per `(n, p)`.
pub fn tail_constant(n: usize, p: usize) -> Result<f64> {
    KernelParams::new(n, p, 0)?;
    if let Some(c) = calibration_cache().lock().ok().and_then(|m| m.get(&(n, p)).copied()) {
        return Ok(c);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE ^ ((n as u64) << 8) ^ p as u64);
    let mut best: f64 = 0.0;
    for _ in 0..200 {
        let r = rng.random_range(0.1..0.95);
        let x = random_rotated(&mut rng, n, p, r);
        let zeta = random_rotated(&mut rng, n, p, 1.0);
        let inv = PairInvariants::new(&x.to_complex(), &zeta.to_complex())?;
        let h = homogeneous_gegenbauer(n as f64 / 2.0, 20, inv.s, inv.q)?;
        let qp = inv.q.powu(p as u32);
        for m in 1..=20usize {
            let low = if m >= 2 * p { h[m - 2 * p] } else { Complex64::zero() };
            let z = (h[m] - qp * low).norm();
            let scale = p as f64 * (m as f64).powi(n as i32 - 2) * r.powi(m as i32);
            best = best.max(z / scale);
        }
    }
    let c = 2.0 * best;
    if let Ok(mut m) = calibration_cache().lock() {
        m.insert((n, p), c);
    }
    Ok(c)
}

/// Smallest `M` with calibrated tail `Chat p sum_{m > M} m^{n-2} r^m < tol`,
/// together with that tail bound.
pub fn series_terms(n: usize, p: usize, r: f64, tol: f64) -> Result<(usize, f64)> {
    let c = tail_constant(n, p)?;
    if r == 0.0 {
        return Ok((0, 0.0));
    }
    if !(0.0..1.0).contains(&r) {
        return Err(Error::SeriesCap { cap: SERIES_CAP, radius: r });
    }
    let tails = tail_sums(n, r, SERIES_CAP);
    match tails.iter().position(|t| c * p as f64 * t < tol) {
        Some(m) => Ok((m, c * p as f64 * tails[m])),
        None => Err(Error::SeriesCap { cap: SERIES_CAP, radius: r }),
    }
}

/// Truncated series `sum_{m <= M} Z_m^p(x, zeta)` with `M` chosen so the
/// calibrated tail estimate is below `tol`.
pub fn poisson_kernel_series(
    n: usize,
    p: usize,
    x: &RotatedVector,
    zeta: &RotatedVector,
    tol: f64,
) -> Result<KernelValue> {
    check_dims(n, x.dim())?;
    check_dims(n, zeta.dim())?;
    zeta.require_on_sphere(p)?;
    let r = x.radius();
    if x.sector_index(p).is_none() || r >= 1.0 - 1e-6 {
        return Err(Error::NotInterior {
            p,
            reason: format!("hermitian radius {r} must be below 1 - 1e-6"),
        });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let (big_m, tail) = series_terms(n, p, r, tol)?;
    let inv = PairInvariants::new(&x.to_complex(), &zeta.to_complex())?;
    let h = homogeneous_gegenbauer(n as f64 / 2.0, big_m, inv.s, inv.q)?;
    let qp = inv.q.powu(p as u32);
    let mut acc = crate::quadrature::CompensatedSum::default();
    for m in 0..=big_m {
        let low = if m >= 2 * p { h[m - 2 * p] } else { Complex64::zero() };
        acc.add(h[m] - qp * low);
    }
    Ok(KernelValue {
        value: acc.value(),
        terms_used: big_m + 1,
        tail_bound: tail,
    })
}

/// `(1 - |x|^{2p}) sum_{m <= M} C_m^{n/2}(t) (|x| |zeta|)^m`, the Gegenbauer form of the kernel.
pub fn poisson_kernel_gegenbauer_form(
    n: usize,
    p: usize,
    x: &RotatedVector,
    zeta: &RotatedVector,
    big_m: usize,
) -> Result<Complex64> {
    check_dims(n, x.dim())?;
    check_dims(n, zeta.dim())?;
    zeta.require_on_sphere(p)?;
    let inv = PairInvariants::new(&x.to_complex(), &zeta.to_complex())?;
    let h = homogeneous_gegenbauer(n as f64 / 2.0, big_m, inv.s, inv.q)?;
    let mut acc = crate::quadrature::CompensatedSum::default();
    for v in h {
        acc.add(v);
    }
    Ok((Complex64::one() - x.bilinear_square().powu(p as u32)) * acc.value())
}

/// `(1 - |x|^{2p}) / |e^{-j pi i/p} x - zeta|^n` for interior `x` and a real unit `zeta`,
/// with `|.|` the principal square root of the bilinear square.
///
/// Equals `conj(P_p(e^{j pi i/p} zeta, x))`.
pub fn poisson_boundary_form(
    n: usize,
    p: usize,
    j: usize,
    x: &RotatedVector,
    zeta_real: &[f64],
) -> Result<Complex64> {
    check_dims(n, x.dim())?;
    check_dims(n, zeta_real.len())?;
    if j >= p {
        return Err(Error::InvalidArgument(format!("sector index {j} out of range for p = {p}")));
    }
    x.require_in_ball(p, 0.0)?;
    let zr = zeta_real.iter().map(|v| v * v).sum::<f64>().sqrt();
    if (zr - 1.0).abs() > UNIT_NORM_TOL {
        return Err(Error::OffSphere {
            p,
            reason: format!("boundary point has norm {zr}"),
        });
    }
    boundary_form_unchecked(n, p, j, x, zeta_real)
}

pub(crate) fn boundary_form_unchecked(
    n: usize,
    p: usize,
    j: usize,
    x: &RotatedVector,
    zeta_real: &[f64],
) -> Result<Complex64> {
    let phase = Complex64::from_polar(1.0, x.angle() - j as f64 * std::f64::consts::PI / p as f64);
    let v: Vec<Complex64> = x
        .coords()
        .iter()
        .zip(zeta_real)
        .map(|(&a, &z)| phase * a - z)
        .collect();
    let sq: Complex64 = v.iter().map(|c| c * c).sum();
    let abs = sq.sqrt();
    if abs.norm() <= SINGULAR_TOL {
        return Err(Error::Singular(abs.norm()));
    }
    let num = Complex64::one() - x.bilinear_square().powu(p as u32);
    Ok(num / abs.powu(n as u32))
}

/// Cauchy-Hua kernel `H(z, w) = (conj(w^2) z^2 - 2 conj(w) . z + 1)^{-n/2}`.
///
/// Evaluated on the principal branch for odd `n`. Points outside the Lie
/// domain are evaluated as well (a warning is logged); only a vanishing
/// denominator is an error.
pub fn cauchy_hua(n: usize, z: &ComplexVector, w: &ComplexVector) -> Result<Complex64> {
    check_dims(n, z.dim())?;
    check_dims(n, w.dim())?;
    if z.lie_norm() * w.lie_norm() >= 1.0 {
        log::warn!("Cauchy-Hua kernel evaluated outside the Lie domain");
    }
    let inv = PairInvariants::new(z, w)?;
    let d = inv.q - inv.s * 2.0 + 1.0;
    if d.norm() <= SINGULAR_TOL {
        return Err(Error::Singular(d.norm()));
    }
    Ok(Complex64::one() / half_power(d, n))
}

/// Result of comparing `P_p` against `H` on a sample set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HuaGap {
    pub p: usize,
    /// `max |P_p(z, w) - H(z, w)|`.
    pub gap: f64,
    /// `alpha^{2p} max |H|`.
    pub bound: f64,
    /// `max ||z|| ||w||`.
    pub alpha: f64,
    pub max_h: f64,
}

impl HuaGap {
    pub fn holds(&self) -> bool {
        self.gap <= self.bound * (1.0 + 1e-9)
    }
}

/// `max_E |P_p - H|` against the bound `alpha_E^{2p} max_E |H|`.
pub fn hua_convergence_gap(n: usize, pairs: &[(ComplexVector, ComplexVector)], p: usize) -> Result<HuaGap> {
    if p == 0 {
        return Err(Error::InvalidOrder);
    }
    let mut out = HuaGap {
        p,
        gap: 0.0,
        bound: 0.0,
        alpha: 0.0,
        max_h: 0.0,
    };
    for (i, (z, w)) in pairs.iter().enumerate() {
        if z.lie_norm() * w.lie_norm() >= 1.0 {
            return Err(Error::OutsideLieDomain(i));
        }
        let h = cauchy_hua(n, z, w)?;
        let pp = poisson_kernel_general(n, p, z, w)?;
        out.gap = out.gap.max((pp - h).norm());
        out.max_h = out.max_h.max(h.norm());
        out.alpha = out.alpha.max(z.hermitian_norm() * w.hermitian_norm());
    }
    out.bound = out.alpha.powi(2 * p as i32) * out.max_h;
    Ok(out)
}

/// Scale for route comparisons, `dim_Hp(n,m,p) rho^m` with `rho = max(|s|, |q|^{1/2})`.
///
/// Every monomial `s^{m-2k} q^k` of `Z_m^p` is bounded by `rho^m`, so this is
/// the natural size of the kernel at the pair even where its value cancels.
pub fn route_scale(n: usize, p: usize, m: usize, inv: PairInvariants) -> Result<f64> {
    let dim = dim_hp(n, m, p)? as f64;
    let rho = inv.s.norm().max(inv.q.norm().sqrt());
    Ok((dim * rho.powi(m as i32)).max(f64::MIN_POSITIVE))
}
