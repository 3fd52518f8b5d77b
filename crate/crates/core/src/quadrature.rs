//! Quadrature on the unit sphere with normalized surface measure, the rotated
//! inner product over the sectors of the order-`p` sphere union, and the
//! product measure on the Lie sphere.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ComplexVector, RotatedVector};

/// Seed used by [`sphere_rule`] for Monte Carlo rules.
pub const DEFAULT_SEED: u64 = 20_240_601;

/// Nodes and weights on `S^{n-1}`; weights sum to one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphereRule {
    n: usize,
    nodes: Vec<Vec<f64>>,
    weights: Vec<f64>,
    /// Polynomials of degree `<=` this are integrated exactly; 0 for Monte Carlo.
    exactness_degree: usize,
    monte_carlo: bool,
    seed: Option<u64>,
}

/// Neumaier's variant of Kahan summation, applied to real and imaginary parts.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct CompensatedSum {
    re: f64,
    im: f64,
    c_re: f64,
    c_im: f64,
}

fn neumaier(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

impl CompensatedSum {
    pub fn add(&mut self, z: Complex64) {
        neumaier(&mut self.re, &mut self.c_re, z.re);
        neumaier(&mut self.im, &mut self.c_im, z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re + self.c_re, self.im + self.c_im)
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration.
pub fn gauss_legendre(l: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; l];
    let mut ws = vec![0.0; l];
    for i in 0..l.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (l as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=l {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pl = if l == 0 { 1.0 } else { p1 };
            let plm1 = if l == 0 { 0.0 } else { p0 };
            dp = l as f64 * (x * pl - plm1) / (x * x - 1.0);
            let dx = pl / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        // refresh the derivative at the converged node
        let (mut p0, mut p1) = (1.0, x);
        for k in 2..=l {
            let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
            p0 = p1;
            p1 = p2;
        }
        if l > 0 {
            dp = l as f64 * (x * p1 - p0) / (x * x - 1.0);
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        xs[i] = -x;
        xs[l - 1 - i] = x;
        ws[i] = w;
        ws[l - 1 - i] = w;
    }
    if l % 2 == 1 {
        xs[l / 2] = 0.0;
    }
    (xs, ws)
}

impl SphereRule {
    /// Builds the rule of [`sphere_rule`], with [`DEFAULT_SEED`] for `n >= 4`.
    pub fn new(n: usize, resolution: usize) -> Result<Self> {
        Self::with_seed(n, resolution, DEFAULT_SEED)
    }

    /// As [`SphereRule::new`]; `seed` drives the Monte Carlo samples for `n >= 4`.
    pub fn with_seed(n: usize, resolution: usize, seed: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension(n));
        }
        if resolution < 4 {
            return Err(Error::Resolution(resolution));
        }
        match n {
            2 => Ok(Self::circle(resolution)),
            3 => Ok(Self::product(resolution)),
            _ => Ok(Self::monte_carlo(n, resolution, seed)),
        }
    }

    /// Smallest exact rule covering polynomials of the given degree (`n` in `{2, 3}`).
    pub fn for_degree(n: usize, degree: usize) -> Result<Self> {
        match n {
            2 => Self::new(2, (degree + 1).max(4)),
            3 => Self::new(3, (degree / 2 + 1).max(4)),
            _ if n < 2 => Err(Error::InvalidDimension(n)),
            _ => Err(Error::UnsupportedDimension(n)),
        }
    }

    fn circle(count: usize) -> Self {
        let nodes = (0..count)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / count as f64;
                vec![t.cos(), t.sin()]
            })
            .collect();
        Self {
            n: 2,
            nodes,
            weights: vec![1.0 / count as f64; count],
            exactness_degree: count - 1,
            monte_carlo: false,
            seed: None,
        }
    }

    fn product(l: usize) -> Self {
        let (xs, ws) = gauss_legendre(l);
        let az = 2 * l;
        let mut nodes = Vec::with_capacity(l * az);
        let mut weights = Vec::with_capacity(l * az);
        for (x, w) in xs.iter().zip(&ws) {
            let s = (1.0 - x * x).max(0.0).sqrt();
            for k in 0..az {
                let t = 2.0 * PI * k as f64 / az as f64;
                nodes.push(vec![s * t.cos(), s * t.sin(), *x]);
                weights.push(w / 2.0 / az as f64);
            }
        }
        Self {
            n: 3,
            nodes,
            weights,
            exactness_degree: 2 * l - 1,
            monte_carlo: false,
            seed: None,
        }
    }

    fn monte_carlo(n: usize, count: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut nodes = Vec::with_capacity(count);
        while nodes.len() < count {
            let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
            let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if r > 1e-8 {
                nodes.push(v.into_iter().map(|x| x / r).collect());
            }
        }
        Self {
            n,
            nodes,
            weights: vec![1.0 / count as f64; count],
            exactness_degree: 0,
            monte_carlo: true,
            seed: Some(seed),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> &[Vec<f64>] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn exactness_degree(&self) -> usize {
        self.exactness_degree
    }

    pub fn is_monte_carlo(&self) -> bool {
        self.monte_carlo
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Tolerance for checks run on this rule: `5 / sqrt(N)` for Monte Carlo,
    /// `None` for exact rules.
    pub fn statistical_tolerance(&self) -> Option<f64> {
        self.monte_carlo
            .then(|| 5.0 / (self.nodes.len() as f64).sqrt())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).unwrap_or_default()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidArgument(e.to_string()))
    }

    /// `sum_i w_i f(node_i)` in node order with compensated summation.
    pub fn integrate(&self, f: impl Fn(&[f64]) -> Complex64) -> Result<Complex64> {
        self.try_integrate(|_, x| Ok(f(x)))
    }

    /// As [`SphereRule::integrate`] for a fallible integrand receiving the node index.
    pub fn try_integrate(
        &self,
        f: impl Fn(usize, &[f64]) -> Result<Complex64>,
    ) -> Result<Complex64> {
        let mut acc = CompensatedSum::default();
        for (i, (x, w)) in self.nodes.iter().zip(&self.weights).enumerate() {
            let v = f(i, x).map_err(|_| Error::Integrand { sector: 0, node: i })?;
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::Integrand { sector: 0, node: i });
            }
            acc.add(v * *w);
        }
        Ok(acc.value())
    }
}

/// `n = 2`: `resolution` equispaced angles, exact to degree `resolution - 1`.
/// `n = 3`: Gauss-Legendre in the polar cosine times `2 resolution` azimuths,
/// exact to degree `2 resolution - 1`. `n >= 4`: seeded Monte Carlo.
pub fn sphere_rule(n: usize, resolution: usize) -> Result<SphereRule> {
    SphereRule::new(n, resolution)
}

pub fn sphere_integral(f: impl Fn(&[f64]) -> Complex64, rule: &SphereRule) -> Result<Complex64> {
    rule.integrate(f)
}

/// `<f, g> = (1/p) sum_j int_S f(e^{j pi i/p} zeta) conj(g(e^{j pi i/p} zeta)) dsigma`.
///
/// The closures receive the sector index and the rotated point.
pub fn rotated_inner_product<F, G>(f: F, g: G, p: usize, rule: &SphereRule) -> Result<Complex64>
where
    F: Fn(usize, &RotatedVector) -> Result<Complex64>,
    G: Fn(usize, &RotatedVector) -> Result<Complex64>,
{
    rotated_integral(|j, v| Ok(f(j, v)? * g(j, v)?.conj()), p, rule)
}

/// `(1/p) sum_j int_S F(j, e^{j pi i/p} zeta) dsigma(zeta)`.
pub fn rotated_integral<F>(f: F, p: usize, rule: &SphereRule) -> Result<Complex64>
where
    F: Fn(usize, &RotatedVector) -> Result<Complex64>,
{
    if p == 0 {
        return Err(Error::InvalidOrder);
    }
    let mut total = CompensatedSum::default();
    for j in 0..p {
        let mut acc = CompensatedSum::default();
        for (i, (x, w)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
            let bad = Error::Integrand { sector: j, node: i };
            let v = RotatedVector::on_sector(j, p, x.clone()).map_err(|_| bad.clone())?;
            let y = f(j, &v).map_err(|_| bad.clone())?;
            if !(y.re.is_finite() && y.im.is_finite()) {
                return Err(bad);
            }
            acc.add(y * *w);
        }
        total.add(acc.value());
    }
    Ok(total.value() / p as f64)
}

/// Product rule for the Lie sphere: a [`SphereRule`] times a uniform grid
/// `phi_a = a pi / A` on `[0, pi)` with weights `1/A`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LieSphereRule {
    base: SphereRule,
    angular_nodes: usize,
}

impl LieSphereRule {
    pub fn new(base: SphereRule, angular_nodes: usize) -> Result<Self> {
        if angular_nodes == 0 {
            return Err(Error::Resolution(0));
        }
        Ok(Self {
            base,
            angular_nodes,
        })
    }

    pub fn base(&self) -> &SphereRule {
        &self.base
    }

    pub fn angular_nodes(&self) -> usize {
        self.angular_nodes
    }

    pub fn angles(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.angular_nodes).map(move |a| a as f64 * PI / self.angular_nodes as f64)
    }
}

/// `(1/A) sum_a sum_i w_i F(e^{i phi_a} zeta_i)`, the discrete `(1/pi) int_0^pi int_S`.
///
/// Failures report the angular index as `sector`.
pub fn lie_sphere_integral<F>(f: F, rule: &LieSphereRule) -> Result<Complex64>
where
    F: Fn(&ComplexVector) -> Result<Complex64>,
{
    let mut total = CompensatedSum::default();
    for (a, phi) in rule.angles().enumerate() {
        let phase = Complex64::from_polar(1.0, phi);
        let mut acc = CompensatedSum::default();
        for (i, (x, w)) in rule.base.nodes.iter().zip(&rule.base.weights).enumerate() {
            let bad = Error::Integrand { sector: a, node: i };
            let z = ComplexVector::new(x.iter().map(|&c| phase * c).collect())
                .map_err(|_| bad.clone())?;
            let y = f(&z).map_err(|_| bad.clone())?;
            if !(y.re.is_finite() && y.im.is_finite()) {
                return Err(bad);
            }
            acc.add(y * *w);
        }
        total.add(acc.value());
    }
    Ok(total.value() / rule.angular_nodes as f64)
}
