//! Poisson integrals and the Dirichlet problem on the rotated ball,
//! spectral components, the Cauchy-Hua reproducing integral and the
//! large-`p` limit experiment.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ComplexVector, RotatedVector};
use crate::kernels::{
    cauchy_hua, poisson_from_invariants, series_terms, zonal_from_invariants, PairInvariants,
    ZonalRoute, SINGULAR_TOL,
};
use crate::polyalg::NumericPoly;
use crate::quadrature::{
    lie_sphere_integral, rotated_integral, CompensatedSum, LieSphereRule, SphereRule,
};

/// Interior margin for evaluation points.
pub const INTERIOR_MARGIN: f64 = 1e-9;

/// Change allowed when an untagged integral is recomputed on a doubled rule.
pub const DOUBLING_TOL: f64 = 1e-8;

/// Evaluator of one sector's data on the real unit sphere.
pub type SectorFn = Arc<dyn Fn(&[f64]) -> Complex64 + Send + Sync>;

/// Boundary data on the rotated sphere: `f_j(zeta) = f(e^{j pi i/p} zeta)`.
#[derive(Clone)]
pub struct BoundaryData {
    n: usize,
    p: usize,
    sectors: Vec<SectorFn>,
    polynomial: Option<NumericPoly>,
}

impl fmt::Debug for BoundaryData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundaryData")
            .field("n", &self.n)
            .field("p", &self.p)
            .field("polynomial", &self.polynomial.as_ref().map(|q| q.to_string()))
            .finish()
    }
}

/// Ten deterministic spot-check nodes on `S^{n-1}`.
fn spot_nodes(n: usize) -> Vec<Vec<f64>> {
    (0..10)
        .map(|k| {
            let v: Vec<f64> = (0..n)
                .map(|i| ((k * n + i) as f64 * 1.618_033_988_75 + 0.3).sin())
                .collect();
            let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.into_iter().map(|x| x / r).collect()
        })
        .collect()
}

impl BoundaryData {
    /// Data given by one evaluator per sector.
    pub fn from_sectors(n: usize, p: usize, sectors: Vec<SectorFn>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension(n));
        }
        if p == 0 {
            return Err(Error::InvalidOrder);
        }
        if sectors.len() != p {
            return Err(Error::BoundaryData(format!(
                "expected {p} sector evaluators, got {}",
                sectors.len()
            )));
        }
        Ok(Self {
            n,
            p,
            sectors,
            polynomial: None,
        })
    }

    /// Sector evaluators carrying a polynomial tag; the tag is spot-checked
    /// against the evaluators at ten nodes per sector.
    pub fn tagged(n: usize, p: usize, sectors: Vec<SectorFn>, poly: NumericPoly) -> Result<Self> {
        let mut out = Self::from_sectors(n, p, sectors)?;
        if poly.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: poly.n(),
            });
        }
        for (j, f) in out.sectors.iter().enumerate() {
            for node in spot_nodes(n) {
                let v = RotatedVector::on_sector(j, p, node.clone())?;
                let want = poly.evaluate_rotated(&v)?;
                let got = f(&node);
                if (got - want).norm() > 1e-12 * want.norm().max(1.0) {
                    return Err(Error::BoundaryData(format!(
                        "sector {j} evaluator disagrees with its polynomial tag ({got} vs {want})"
                    )));
                }
            }
        }
        out.polynomial = Some(poly);
        Ok(out)
    }

    /// The restriction of a polynomial to the rotated sphere of order `p`.
    pub fn from_polynomial(poly: &NumericPoly, p: usize) -> Result<Self> {
        let n = poly.n();
        let sectors: Vec<SectorFn> = (0..p)
            .map(|j| {
                let q = poly.clone();
                let f: SectorFn = Arc::new(move |zeta: &[f64]| {
                    RotatedVector::on_sector(j, p, zeta.to_vec())
                        .and_then(|v| q.evaluate_rotated(&v))
                        .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
                });
                f
            })
            .collect();
        Self::tagged(n, p, sectors, poly.clone())
    }

    pub fn constant(n: usize, p: usize, c: Complex64) -> Result<Self> {
        Self::from_polynomial(&NumericPoly::constant(n, c), p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn polynomial(&self) -> Option<&NumericPoly> {
        self.polynomial.as_ref()
    }

    /// `f(e^{j pi i/p} zeta)` for a real unit `zeta`.
    pub fn evaluate(&self, j: usize, zeta: &[f64]) -> Complex64 {
        (self.sectors[j])(zeta)
    }

    /// Values at every node of `rule`, one vector per sector.
    pub fn sample(&self, rule: &SphereRule) -> Result<Vec<Vec<Complex64>>> {
        if rule.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: rule.n(),
            });
        }
        (0..self.p)
            .map(|j| {
                rule.nodes()
                    .iter()
                    .enumerate()
                    .map(|(i, x)| {
                        let v = self.evaluate(j, x);
                        if v.re.is_finite() && v.im.is_finite() {
                            Ok(v)
                        } else {
                            Err(Error::Integrand { sector: j, node: i })
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

fn require_interior(x: &RotatedVector, p: usize, n: usize) -> Result<usize> {
    if x.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: x.dim(),
        });
    }
    x.require_in_ball(p, INTERIOR_MARGIN)
}

/// Precomputed `w_i P_p(x, e^{j pi i/p} zeta_i) / p` for one interior point.
///
/// Applying it to sampled boundary values gives the Poisson integral at `x`
/// without re-evaluating the kernel.
#[derive(Clone, Debug)]
pub struct PoissonWeights {
    p: usize,
    weights: Vec<Vec<Complex64>>,
}

impl PoissonWeights {
    pub fn new(n: usize, p: usize, x: &RotatedVector, rule: &SphereRule) -> Result<Self> {
        require_interior(x, p, n)?;
        if rule.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: rule.n(),
            });
        }
        let x2 = x.bilinear_square();
        let a = x.coords();
        let weights = (0..p)
            .map(|j| {
                // x . conj(e^{j pi i/p} zeta) = e^{i (phi - j pi/p)} a . zeta
                let rel = Complex64::from_polar(1.0, x.angle() - j as f64 * PI / p as f64);
                let q = x2 * Complex64::from_polar(1.0, -2.0 * j as f64 * PI / p as f64);
                rule.nodes()
                    .iter()
                    .zip(rule.weights())
                    .enumerate()
                    .map(|(i, (zeta, w))| {
                        let dot: f64 = a.iter().zip(zeta).map(|(u, v)| u * v).sum();
                        let inv = PairInvariants { s: rel * dot, q };
                        poisson_from_invariants(n, p, x2, inv)
                            .map(|k| k * (*w / p as f64))
                            .map_err(|_| Error::Integrand { sector: j, node: i })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { p, weights })
    }

    /// `sum_j sum_i W_ji f_j(zeta_i)` for values from [`BoundaryData::sample`].
    pub fn apply(&self, samples: &[Vec<Complex64>]) -> Result<Complex64> {
        if samples.len() != self.p {
            return Err(Error::BoundaryData(format!(
                "expected {} sectors of samples, got {}",
                self.p,
                samples.len()
            )));
        }
        let mut acc = CompensatedSum::default();
        for (w, f) in self.weights.iter().zip(samples) {
            let mut inner = CompensatedSum::default();
            for (a, b) in w.iter().zip(f) {
                inner.add(a * b);
            }
            acc.add(inner.value());
        }
        Ok(acc.value())
    }
}

/// `(1/p) sum_j int_S f(e^{j pi i/p} zeta) P_p(x, e^{j pi i/p} zeta) dsigma(zeta)`.
///
/// The conjugated kernel `conj(P_p(e^{j pi i/p} zeta, x))` is taken in its
/// symmetric form `P_p(x, e^{j pi i/p} zeta)` from the closed formula;
/// [`dirichlet_solve`] uses the boundary form instead, so the two serve as
/// cross-checks of each other.
pub fn poisson_integral(f: &BoundaryData, x: &RotatedVector, rule: &SphereRule) -> Result<Complex64> {
    let (n, p) = (f.n, f.p);
    require_interior(x, p, n)?;
    let x2 = x.bilinear_square();
    let xc = x.to_complex();
    rotated_integral(
        |j, zeta| {
            let inv = PairInvariants::new(&xc, &zeta.to_complex())?;
            Ok(f.evaluate(j, zeta.coords()) * poisson_from_invariants(n, p, x2, inv)?)
        },
        p,
        rule,
    )
}

/// `(1 - |x|^{2p}) / |e^{-k pi i/p} x - zeta|^n` for any complex `x`,
/// with `|.|` the principal square root of the bilinear square.
fn boundary_kernel(n: usize, p: usize, k: usize, x: &ComplexVector, x2p: Complex64, zeta: &[f64]) -> Result<Complex64> {
    let phase = Complex64::from_polar(1.0, -(k as f64) * PI / p as f64);
    let sq: Complex64 = x
        .entries()
        .iter()
        .zip(zeta)
        .map(|(a, b)| {
            let d = phase * a - b;
            d * d
        })
        .sum();
    let abs = sq.sqrt();
    if abs.norm() <= SINGULAR_TOL {
        return Err(Error::Singular(abs.norm()));
    }
    Ok((Complex64::one() - x2p) / abs.powu(n as u32))
}

/// `(1/p) sum_k int_S (1 - |x|^{2p}) / |e^{-k pi i/p} x - zeta|^n f(e^{k pi i/p} zeta) dsigma`.
fn boundary_form_integral(f: &BoundaryData, x: &ComplexVector, rule: &SphereRule) -> Result<Complex64> {
    let (n, p) = (f.n, f.p);
    let x2p = x.bilinear_square().powu(p as u32);
    rotated_integral(
        |k, zeta| Ok(boundary_kernel(n, p, k, x, x2p, zeta.coords())? * f.evaluate(k, zeta.coords())),
        p,
        rule,
    )
}

/// Which resolution policy produced a solution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveDiagnostics {
    /// JSON serialization of the rule used.
    pub rule: String,
    pub exactness_degree: usize,
    pub monte_carlo: bool,
    /// Sector index of every evaluation point.
    pub sectors: Vec<usize>,
    /// Largest change when recomputed on a doubled rule (untagged data only).
    pub doubling_change: Option<f64>,
}

impl SolveDiagnostics {
    /// False only when a doubling check ran and moved the result by more than [`DOUBLING_TOL`].
    pub fn converged(&self) -> bool {
        self.doubling_change.is_none_or(|c| c < DOUBLING_TOL)
    }
}

/// The Poisson-integral solution of the Dirichlet problem for given data.
#[derive(Clone, Debug)]
pub struct DirichletSolution {
    n: usize,
    p: usize,
    data: BoundaryData,
    rule: SphereRule,
    pub diagnostics: SolveDiagnostics,
}

impl DirichletSolution {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn rule(&self) -> &SphereRule {
        &self.rule
    }

    /// `u(x)` for an interior point of the rotated ball.
    pub fn evaluate(&self, x: &RotatedVector) -> Result<Complex64> {
        require_interior(x, self.p, self.n)?;
        boundary_form_integral(&self.data, &x.to_complex(), &self.rule)
    }
}

/// Rule doubling the resolution of `rule`.
pub fn refined_rule(rule: &SphereRule) -> Result<SphereRule> {
    match rule.n() {
        2 => SphereRule::new(2, 2 * rule.len()),
        3 => SphereRule::new(3, rule.exactness_degree() + 1),
        n => SphereRule::with_seed(n, 2 * rule.len(), rule.seed().unwrap_or(crate::quadrature::DEFAULT_SEED)),
    }
}

/// Solves the Dirichlet problem for `f` and evaluates the solution at `points`.
///
/// Tagged polynomial data is trusted to the rule's exactness. Untagged data
/// is also integrated on a doubled rule and the largest change is reported
/// in the diagnostics.
pub fn dirichlet_solve(
    f: &BoundaryData,
    points: &[RotatedVector],
    rule: &SphereRule,
) -> Result<(DirichletSolution, Vec<Complex64>)> {
    let sectors = points
        .iter()
        .map(|x| require_interior(x, f.p, f.n))
        .collect::<Result<Vec<_>>>()?;
    let solution = DirichletSolution {
        n: f.n,
        p: f.p,
        data: f.clone(),
        rule: rule.clone(),
        diagnostics: SolveDiagnostics {
            rule: rule.to_json(),
            exactness_degree: rule.exactness_degree(),
            monte_carlo: rule.is_monte_carlo(),
            sectors,
            doubling_change: None,
        },
    };
    let values = points
        .par_iter()
        .map(|x| solution.evaluate(x))
        .collect::<Result<Vec<_>>>()?;
    let mut solution = solution;
    if f.polynomial.is_none() {
        let fine = refined_rule(rule)?;
        let change = points
            .par_iter()
            .zip(&values)
            .map(|(x, v)| Ok((boundary_form_integral(f, &x.to_complex(), &fine)? - v).norm()))
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        solution.diagnostics.doubling_change = Some(change);
    }
    Ok((solution, values))
}

/// Rule for integrating degree-`degree` data against the Poisson kernel at
/// hermitian radius up to `radius`: the data degree plus the number of series
/// terms needed for `tol`. Exact rules for `n` in `{2, 3}`, seeded Monte
/// Carlo with `mc_samples` nodes otherwise.
pub fn auto_rule(n: usize, p: usize, degree: usize, radius: f64, tol: f64, mc_samples: usize) -> Result<SphereRule> {
    if n >= 4 {
        return SphereRule::new(n, mc_samples);
    }
    let (terms, _) = series_terms(n, p, radius, tol)?;
    SphereRule::for_degree(n, degree + terms)
}

/// `<f, Z_m^p(., eta)>` on the rotated sphere.
pub fn spectral_component(f: &BoundaryData, m: usize, eta: &RotatedVector, rule: &SphereRule) -> Result<Complex64> {
    let (n, p) = (f.n, f.p);
    if eta.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: eta.dim(),
        });
    }
    eta.require_on_sphere(p)?;
    let ec = eta.to_complex();
    rotated_integral(
        |j, zeta| {
            let inv = PairInvariants::new(&zeta.to_complex(), &ec)?;
            let z = zonal_from_invariants(n, p, m as i64, inv, ZonalRoute::GegenbauerDiff)?;
            Ok(f.evaluate(j, zeta.coords()) * z.conj())
        },
        p,
        rule,
    )
}

/// `int_{LS} H(z, w) u(w) dsigma~(w)` for a holomorphic polynomial `u`.
pub fn hua_reproduce(u: &NumericPoly, z: &ComplexVector, rule: &LieSphereRule) -> Result<Complex64> {
    let n = z.dim();
    if u.n() != n || rule.base().n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: u.n(),
        });
    }
    if !(z.lie_norm() < 1.0) {
        return Err(Error::OutsideLieDomain(0));
    }
    lie_sphere_integral(|w| Ok(cauchy_hua(n, z, w)? * u.evaluate(w)?), rule)
}

/// One row of [`polyharmonic_limit_experiment`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitRow {
    pub p: usize,
    pub value: Complex64,
    pub error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitReport {
    pub rows: Vec<LimitRow>,
    /// `u(z)`.
    pub exact: Complex64,
    /// The Cauchy-Hua integral of `u` at `z`.
    pub hua: Complex64,
}

impl LimitReport {
    /// `|u_p(z) - H-integral|` for the last `p`.
    pub fn final_hua_gap(&self) -> f64 {
        self.rows.last().map_or(0.0, |r| (r.value - self.hua).norm())
    }

    /// Errors never increase by more than `slack` along the `p` list.
    pub fn non_increasing(&self, slack: f64) -> bool {
        self.rows.windows(2).all(|w| w[1].error <= w[0].error + slack)
    }
}

/// `u_p(z) = (1/p) sum_k int_S (1 - |z|^{2p}) / |e^{-k pi i/p} z - zeta|^n u(e^{k pi i/p} zeta) dsigma`
/// for each `p`, its error against `u(z)`, and the Cauchy-Hua integral.
pub fn polyharmonic_limit_experiment(
    u: &NumericPoly,
    z: &ComplexVector,
    p_list: &[usize],
    rule: &SphereRule,
    lie_rule: &LieSphereRule,
) -> Result<LimitReport> {
    let n = z.dim();
    if u.n() != n || rule.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: u.n(),
        });
    }
    if !(z.lie_norm() < 1.0) {
        return Err(Error::OutsideLieDomain(0));
    }
    if p_list.is_empty() || p_list.contains(&0) || p_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("p list must be positive and strictly ascending".into()));
    }
    let exact = u.evaluate(z)?;
    let rows = p_list
        .par_iter()
        .map(|&p| {
            let data = BoundaryData::from_polynomial(u, p)?;
            let value = boundary_form_integral(&data, z, rule)?;
            Ok(LimitRow {
                p,
                value,
                error: (value - exact).norm(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let hua = hua_reproduce(u, z, lie_rule)?;
    Ok(LimitReport { rows, exact, hua })
}

/// `int_S P_p(e^{-k pi i/p} x, zeta) dsigma(zeta)` for real interior `x`
/// and its closed value `sum_j e^{-2kj pi i/p} |x|^{2j}`.
pub fn sector_integral(n: usize, p: usize, k: usize, x: &[f64], rule: &SphereRule) -> Result<(Complex64, Complex64)> {
    if k >= p {
        return Err(Error::InvalidArgument(format!("sector index {k} out of range for p = {p}")));
    }
    let xr = RotatedVector::new(-(k as f64) * PI / p as f64, x.to_vec())?;
    require_interior(&xr, p, n)?;
    let x2 = xr.bilinear_square();
    let xc = xr.to_complex();
    let quad = rule.try_integrate(|_, zeta| {
        let inv = PairInvariants::new(&xc, &ComplexVector::from_real(zeta)?)?;
        poisson_from_invariants(n, p, x2, inv)
    })?;
    let r2: f64 = x.iter().map(|v| v * v).sum();
    let mut closed = Complex64::zero();
    for j in 0..p {
        closed += Complex64::from_polar(r2.powi(j as i32), -2.0 * (k * j) as f64 * PI / p as f64);
    }
    Ok((quad, closed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::parse_numeric;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constant_data_gives_one() {
        for n in 2..=3 {
            for p in 1..=3 {
                let f = BoundaryData::constant(n, p, c(1.0, 0.0)).unwrap();
                let rule = auto_rule(n, p, 0, 0.7, 1e-13, 0).unwrap();
                for j in 0..p {
                    let mut coords = vec![0.0; n];
                    coords[0] = 0.5;
                    coords[1] = -0.3;
                    let x = RotatedVector::on_sector(j, p, coords).unwrap();
                    let v = poisson_integral(&f, &x, &rule).unwrap();
                    assert!((v - 1.0).norm() < 1e-11, "n={n} p={p} j={j} {v}");
                }
            }
        }
    }

    #[test]
    fn reproduces_linear_and_radial_data() {
        let x1 = parse_numeric("x1", 2).unwrap();
        let f = BoundaryData::from_polynomial(&x1, 1).unwrap();
        let rule = auto_rule(2, 1, 1, 0.5, 1e-13, 0).unwrap();
        let x = RotatedVector::real(vec![0.3, 0.4]).unwrap();
        assert!((poisson_integral(&f, &x, &rule).unwrap() - 0.3).norm() < 1e-12);
        let r2 = parse_numeric("x1^2 + x2^2", 2).unwrap();
        let f = BoundaryData::from_polynomial(&r2, 2).unwrap();
        let rule = auto_rule(2, 2, 2, 0.5, 1e-13, 0).unwrap();
        let x = RotatedVector::real(vec![0.5, 0.0]).unwrap();
        assert!((poisson_integral(&f, &x, &rule).unwrap() - 0.25).norm() < 1e-12);
        let xs = RotatedVector::on_sector(1, 2, vec![0.5, 0.0]).unwrap();
        assert!((poisson_integral(&f, &xs, &rule).unwrap() + 0.25).norm() < 1e-12);
    }

    #[test]
    fn weights_match_direct_integral() {
        let q = parse_numeric("x1^2 - x2^2 + (0,1) * x1 * x3", 3).unwrap();
        let f = BoundaryData::from_polynomial(&q, 2).unwrap();
        let rule = auto_rule(3, 2, 2, 0.6, 1e-12, 0).unwrap();
        let x = RotatedVector::on_sector(1, 2, vec![0.2, 0.3, -0.4]).unwrap();
        let w = PoissonWeights::new(3, 2, &x, &rule).unwrap();
        let a = w.apply(&f.sample(&rule).unwrap()).unwrap();
        let b = poisson_integral(&f, &x, &rule).unwrap();
        assert!((a - b).norm() < 1e-13);
        assert!((a - q.evaluate_rotated(&x).unwrap()).norm() < 1e-10);
    }

    #[test]
    fn dirichlet_matches_poisson_integral() {
        let q = parse_numeric("x1^3 - 3 * x1 * x2^2 + x1^2", 2).unwrap();
        for p in 1..=3 {
            let f = BoundaryData::from_polynomial(&q, p).unwrap();
            let rule = auto_rule(2, p, 3, 0.7, 1e-13, 0).unwrap();
            let pts: Vec<RotatedVector> = (0..p)
                .map(|j| RotatedVector::on_sector(j, p, vec![0.4, -0.5]).unwrap())
                .collect();
            let (sol, vals) = dirichlet_solve(&f, &pts, &rule).unwrap();
            assert_eq!(sol.diagnostics.sectors, (0..p).collect::<Vec<_>>());
            assert!(sol.diagnostics.doubling_change.is_none());
            for (x, v) in pts.iter().zip(&vals) {
                let pi = poisson_integral(&f, x, &rule).unwrap();
                assert!((pi - v).norm() < 1e-11);
            }
        }
    }

    #[test]
    fn classical_disc_solution() {
        let f = BoundaryData::from_sectors(2, 1, vec![Arc::new(|z: &[f64]| c(z[0], 0.0))]).unwrap();
        let rule = SphereRule::new(2, 64).unwrap();
        let (r, th) = (0.6f64, 1.1f64);
        let x = RotatedVector::real(vec![r * th.cos(), r * th.sin()]).unwrap();
        let (sol, vals) = dirichlet_solve(&f, &[x], &rule).unwrap();
        assert!((vals[0] - r * th.cos()).norm() < 1e-12);
        assert!(sol.diagnostics.converged());
    }

    #[test]
    fn continuous_data_radial_limit() {
        // |cos theta| is continuous but not smooth
        let f = BoundaryData::from_sectors(2, 1, vec![Arc::new(|z: &[f64]| c(z[0].abs(), 0.0))]).unwrap();
        let rule = SphereRule::new(2, 20000).unwrap();
        let th: f64 = 0.4;
        let mut errs = Vec::new();
        for r in [0.9, 0.99, 0.999] {
            let x = RotatedVector::real(vec![r * th.cos(), r * th.sin()]).unwrap();
            let (_, v) = dirichlet_solve(&f, &[x], &rule).unwrap();
            errs.push((v[0] - th.cos()).norm());
        }
        assert!(errs[2] < 1e-2);
        assert!(errs[2] < errs[0]);
    }

    #[test]
    fn rejects_bad_inputs() {
        let f = BoundaryData::constant(2, 2, c(1.0, 0.0)).unwrap();
        let rule = SphereRule::new(2, 16).unwrap();
        let edge = RotatedVector::real(vec![1.0, 0.0]).unwrap();
        assert!(matches!(poisson_integral(&f, &edge, &rule), Err(Error::NotInterior { .. })));
        let off = RotatedVector::new(0.3, vec![0.1, 0.0]).unwrap();
        assert!(matches!(poisson_integral(&f, &off, &rule), Err(Error::NotInterior { .. })));
        let q = parse_numeric("x1", 2).unwrap();
        let wrong: Vec<SectorFn> = vec![Arc::new(|z: &[f64]| c(z[1], 0.0)), Arc::new(|z: &[f64]| c(z[0], 0.0))];
        assert!(matches!(BoundaryData::tagged(2, 2, wrong, q), Err(Error::BoundaryData(_))));
        assert!(BoundaryData::from_sectors(2, 2, vec![]).is_err());
    }

    #[test]
    fn spectral_components_of_polynomial_data() {
        let q = parse_numeric("x1^2 - x2^2", 2).unwrap();
        let p = 2;
        let f = BoundaryData::from_polynomial(&q, p).unwrap();
        let rule = SphereRule::for_degree(2, 8).unwrap();
        let eta = RotatedVector::on_sector(1, p, vec![0.6, 0.8]).unwrap();
        let want = q.evaluate_rotated(&eta).unwrap();
        for m in 0..=4 {
            let v = spectral_component(&f, m, &eta, &rule).unwrap();
            if m == 2 {
                assert!((v - want).norm() < 1e-12);
            } else {
                assert!(v.norm() < 1e-12);
            }
        }
        let g = parse_numeric("1 + x1 - 2 * x1 * x2^2 + x2^4 + (0,1) * x2", 2).unwrap();
        let f = BoundaryData::from_polynomial(&g, 3).unwrap();
        let rule = SphereRule::for_degree(2, 8).unwrap();
        let eta = RotatedVector::on_sector(2, 3, vec![0.8, -0.6]).unwrap();
        let total: Complex64 = (0..=4).map(|m| spectral_component(&f, m, &eta, &rule).unwrap()).sum();
        assert!((total - g.evaluate_rotated(&eta).unwrap()).norm() < 1e-9);
        let one = BoundaryData::constant(2, 3, c(1.0, 0.0)).unwrap();
        assert!((spectral_component(&one, 0, &eta, &rule).unwrap() - 1.0).norm() < 1e-13);
        assert!(spectral_component(&one, 1, &eta, &rule).unwrap().norm() < 1e-13);
    }

    #[test]
    fn sector_integrals() {
        let rule = auto_rule(3, 3, 0, 0.6, 1e-13, 0).unwrap();
        let x = [0.3, -0.2, 0.4];
        for p in 1..=3 {
            let mut avg = Complex64::zero();
            for k in 0..p {
                let (q, closed) = sector_integral(3, p, k, &x, &rule).unwrap();
                assert!((q - closed).norm() < 1e-10);
                avg += q;
            }
            assert!((avg / p as f64 - 1.0).norm() < 1e-10);
        }
    }

    #[test]
    fn hua_reproduction_examples() {
        let lie = LieSphereRule::new(SphereRule::for_degree(2, 40).unwrap(), 48).unwrap();
        let one = NumericPoly::one(2);
        let z = ComplexVector::new(vec![c(0.3, 0.0), c(0.0, 0.2)]).unwrap();
        assert!((hua_reproduce(&one, &z, &lie).unwrap() - 1.0).norm() < 1e-10);
        let w1 = parse_numeric("x1", 2).unwrap();
        assert!((hua_reproduce(&w1, &z, &lie).unwrap() - 0.3).norm() < 1e-10);
        let w11 = parse_numeric("x1^2", 2).unwrap();
        let z = RotatedVector::new(PI / 5.0, vec![0.4, 0.3]).unwrap().to_complex();
        let want = Complex64::from_polar(0.16, 2.0 * PI / 5.0);
        assert!((hua_reproduce(&w11, &z, &lie).unwrap() - want).norm() < 1e-10);
        let far = ComplexVector::new(vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert!(hua_reproduce(&one, &far, &lie).is_err());
    }

    #[test]
    fn limit_experiment() {
        let u = parse_numeric("x1^2", 2).unwrap();
        let z = ComplexVector::from_real(&[0.4, 0.2]).unwrap();
        let rule = SphereRule::new(2, 128).unwrap();
        let lie = LieSphereRule::new(SphereRule::for_degree(2, 40).unwrap(), 48).unwrap();
        let rep = polyharmonic_limit_experiment(&u, &z, &[1, 2, 4, 8, 16, 64], &rule, &lie).unwrap();
        assert!(rep.non_increasing(1e-12));
        assert!((rep.rows[0].error - 0.4).abs() < 1e-12);
        assert!(rep.rows.last().unwrap().error <= 1e-3);
        assert!(rep.final_hua_gap() < 1e-4);
        let one = NumericPoly::one(2);
        let rep = polyharmonic_limit_experiment(&one, &z, &[1, 3, 7], &rule, &lie).unwrap();
        assert!(rep.rows.iter().all(|r| r.error < 1e-13));
        assert!(polyharmonic_limit_experiment(&one, &z, &[2, 1], &rule, &lie).is_err());
    }
}
