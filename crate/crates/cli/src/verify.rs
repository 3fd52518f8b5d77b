//! Property suites run by `verify`: one row per suite (or per order for `hua-convergence`).

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use polyharmonic::gegenbauer::{gegenbauer, gegenbauer_exact, generating_closed_form, generating_partial_sum};
use polyharmonic::kernels::{
    hua_convergence_gap, poisson_kernel, poisson_kernel_series, route_scale, zonal_polyharmonic, KernelParams,
    PairInvariants, ZonalRoute,
};
use polyharmonic::polyalg::{
    dim_hp, monomials_of_degree, orthonormal_polyharmonic_basis, parse_numeric, polyharmonic_almansi,
    polyharmonic_basis, polyharmonic_nullity, rational, ExactPoly, NumericPoly,
};
use polyharmonic::quadrature::{rotated_inner_product, LieSphereRule, SphereRule};
use polyharmonic::solver::{
    auto_rule, hua_reproduce, polyharmonic_limit_experiment, sector_integral, BoundaryData, PoissonWeights,
};
use polyharmonic::{ComplexVector, Error, Result, RotatedVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::config::RunConfig;
use crate::table::Row;
use crate::CliError;

pub const SUITES: [&str; 11] = [
    "route-agreement",
    "series",
    "diagonal-dim",
    "reproduction",
    "orthogonality",
    "almansi",
    "sector-integrals",
    "hua-convergence",
    "hua-reproduction",
    "limit",
    "gegenbauer",
];

struct Ctx<'a> {
    cfg: &'a RunConfig,
    rng: ChaCha8Rng,
    samples: usize,
}

impl Ctx<'_> {
    fn unit(&mut self, n: usize) -> Vec<f64> {
        let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut self.rng)).collect();
        let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.into_iter().map(|x| x / r).collect()
    }

    fn ball(&mut self, n: usize, r_max: f64) -> Vec<f64> {
        let r = r_max * self.rng.random::<f64>();
        self.unit(n).into_iter().map(|x| x * r).collect()
    }

    fn complex_ball(&mut self, n: usize, r_max: f64) -> ComplexVector {
        let u = self.unit(2 * n);
        let r = r_max * self.rng.random::<f64>();
        ComplexVector::new((0..n).map(|i| Complex64::new(u[2 * i], u[2 * i + 1]) * r).collect()).expect("finite")
    }

    fn degrees(&self, max: usize) -> Vec<usize> {
        self.cfg.degrees.clone().unwrap_or_else(|| (0..=max).collect())
    }
}

fn measured(name: &str, cfg: &RunConfig, error: f64, default_tol: f64, text: String) -> Row {
    Row::new(name, format!("n={} p={}", cfg.n, cfg.p))
        .checked(error, cfg.tol(name, default_tol))
        .text(text)
}

fn route_agreement(ctx: &mut Ctx) -> Result<Vec<Row>> {
    let (n, p) = (ctx.cfg.n, ctx.cfg.p);
    let mut worst = 0.0f64;
    for m in ctx.degrees(8) {
        let params = KernelParams::new(n, p, m)?;
        for _ in 0..ctx.samples {
            let x = ctx.complex_ball(n, 1.5);
            let j = ctx.rng.random_range(0..p);
            let zeta = RotatedVector::on_sector(j, p, ctx.unit(n))?;
            let vals = ZonalRoute::ALL
                .iter()
                .map(|&r| zonal_polyharmonic(params, &x, &zeta, r))
                .collect::<Result<Vec<_>>>()?;
            let scale = route_scale(n, p, m, PairInvariants::new(&x, &zeta.to_complex())?)?;
            for a in &vals {
                for b in &vals {
                    worst = worst.max((a - b).norm() / scale);
                }
            }
        }
    }
    Ok(vec![measured("route-agreement", ctx.cfg, worst, 1e-10, "max gap relative to dim_Hp * rho^m".into())])
}

fn series(ctx: &mut Ctx) -> Result<Vec<Row>> {
    let (n, p) = (ctx.cfg.n, ctx.cfg.p);
    let (mut worst, mut terms) = (0.0f64, 0usize);
    for _ in 0..ctx.samples {
        let j = ctx.rng.random_range(0..p);
        let x = RotatedVector::on_sector(j, p, ctx.ball(n, 0.8))?;
        let k = ctx.rng.random_range(0..p);
        let zeta = RotatedVector::on_sector(k, p, ctx.unit(n))?;
        let s = poisson_kernel_series(n, p, &x, &zeta, 1e-9)?;
        worst = worst.max((s.value - poisson_kernel(n, p, &x, &zeta)?).norm());
        terms = terms.max(s.terms_used);
    }
    Ok(vec![measured("series", ctx.cfg, worst, 1e-8, format!("radius <= 0.8, max terms {terms}"))])
}

fn diagonal_dim(ctx: &mut Ctx) -> Result<Vec<Row>> {
    let (n, p) = (ctx.cfg.n, ctx.cfg.p);
    let mut worst = 0.0f64;
    for m in ctx.degrees(8) {
        let dim = dim_hp(n, m, p)?;
        worst = worst.max(dim.abs_diff(polyharmonic_nullity(n, m, p)?) as f64);
        for j in 0..p {
            for _ in 0..5 {
                let eta = RotatedVector::on_sector(j, p, ctx.unit(n))?;
                let z = zonal_polyharmonic(KernelParams::new(n, p, m)?, &eta.to_complex(), &eta, ZonalRoute::GegenbauerDiff)?;
                worst = worst.max((z - dim as f64).norm());
            }
        }
    }
    Ok(vec![measured("diagonal-dim", ctx.cfg, worst, 1e-9, "Z(eta,eta) - dim_Hp, and dim_Hp - exact nullity".into())])
}

fn reproduction(ctx: &mut Ctx) -> Result<Vec<Row>> {
    let (n, p) = (ctx.cfg.n, ctx.cfg.p);
    let r_max = 0.6;
    let degrees = ctx.degrees(6);
    let max_m = degrees.iter().copied().max().unwrap_or(0);
    let rule = auto_rule(n, p, max_m, r_max, 1e-13, 0)?;
    let mut points = Vec::new();
    for j in 0..p {
        for _ in 0..20 {
            points.push(RotatedVector::on_sector(j, p, ctx.ball(n, r_max))?);
        }
    }
    let weights = points.iter().map(|x| PoissonWeights::new(n, p, x, &rule)).collect::<Result<Vec<_>>>()?;
    let (mut worst, mut count) = (0.0f64, 0);
    for m in degrees {
        for q in polyharmonic_basis(n, m, p)? {
            let q = q.to_numeric();
            let samples = BoundaryData::from_polynomial(&q, p)?.sample(&rule)?;
            for (x, w) in points.iter().zip(&weights) {
                worst = worst.max((w.apply(&samples)? - q.evaluate_rotated(x)?).norm());
            }
            count += 1;
        }
    }
    Ok(vec![measured("reproduction", ctx.cfg, worst, 1e-9, format!("{count} basis elements, {} points", points.len()))])
}

fn orthogonality(ctx: &mut Ctx) -> Result<Vec<Row>> {
    let (n, p) = (ctx.cfg.n, ctx.cfg.p);
    let degrees = ctx.degrees(6);
    let max_m = degrees.iter().copied().max().unwrap_or(0);
    let rule = SphereRule::for_degree(n, 2 * max_m)?;
    let bases = degrees
        .iter()
        .map(|&m| orthonormal_polyharmonic_basis(n, m, p))
        .collect::<Result<Vec<Vec<NumericPoly>>>>()?;
    let mut worst = 0.0f64;
    for a in 0..degrees.len() {
        for b in (a + 1)..degrees.len() {
            if degrees[a] == degrees[b] {
                continue;
            }
            for u in &bases[a] {
                for v in &bases[b] {
                    let ip = rotated_inner_product(|_, z| u.evaluate_rotated(z), |_, z| v.evaluate_rotated(z), p, &rule)?;
                    worst = worst.max(ip.norm());
                }
            }
        }
    }
    Ok(vec![measured("orthogonality", ctx.cfg, worst, 1e-10, "max cross-degree |<u,v>|".into())])
}

fn almansi(ctx: &mut Ctx) -> Result<Vec<Row>> {
    let (n, p) = (ctx.cfg.n, ctx.cfg.p);
    let degrees = ctx.degrees(8);
    let mut failures = 0;
    let count = 2 * ctx.samples;
    for _ in 0..count {
        let m = degrees[ctx.rng.random_range(0..degrees.len())];
        let mut terms = Vec::new();
        for e in monomials_of_degree(n, m) {
            if ctx.rng.random_bool(0.7) {
                terms.push((e.0, rational(ctx.rng.random_range(-9..=9), ctx.rng.random_range(1..=7))));
            }
        }
        let q = ExactPoly::from_terms(n, terms)?;
        let dec = polyharmonic_almansi(&q, p)?;
        if dec.reassemble() != q || !dec.components_annihilated() {
            failures += 1;
        }
    }
    Ok(vec![measured("almansi", ctx.cfg, failures as f64, 0.0, format!("inexact decompositions out of {count}"))])
}

fn sector_integrals(ctx: &mut Ctx) -> Result<Vec<Row>> {
    let (n, p) = (ctx.cfg.n, ctx.cfg.p);
    let rule = auto_rule(n, p, 0, 0.7, 1e-13, 0)?;
    let (mut worst_d, mut worst_e) = (0.0f64, 0.0f64);
    for _ in 0..20 {
        let x = ctx.ball(n, 0.7);
        let mut avg = Complex64::new(0.0, 0.0);
        for k in 0..p {
            let (quad, closed) = sector_integral(n, p, k, &x, &rule)?;
            worst_d = worst_d.max((quad - closed).norm());
            avg += quad;
        }
        worst_e = worst_e.max((avg / p as f64 - 1.0).norm());
    }
    Ok(vec![measured(
        "sector-integrals",
        ctx.cfg,
        worst_d.max(worst_e),
        1e-10,
        format!("per-sector {worst_d:.3e}, averaged {worst_e:.3e}"),
    )])
}

fn hua_convergence(ctx: &mut Ctx) -> Result<Vec<Row>> {
    let n = ctx.cfg.n;
    let pairs: Vec<(ComplexVector, ComplexVector)> =
        (0..20).map(|_| (ctx.complex_ball(n, 0.7), ctx.complex_ball(n, 0.7))).collect();
    let mut rows = Vec::new();
    let mut last = f64::INFINITY;
    for p in [1, 2, 4, 8] {
        let g = hua_convergence_gap(n, &pairs, p)?;
        let mut row = Row::new("hua-convergence", format!("n={n} p={p}"))
            .checked(g.gap, g.bound * (1.0 + 1e-9))
            .text(format!("alpha {:.4}, max|H| {:.4}", g.alpha, g.max_h));
        if !(g.gap < last) {
            row.status = crate::table::Status::Fail;
            row.text.push_str("; gap did not decrease");
        }
        last = g.gap;
        rows.push(row);
    }
    Ok(rows)
}

fn hua_reproduction(ctx: &mut Ctx) -> Result<Vec<Row>> {
    let n = ctx.cfg.n;
    let lie = LieSphereRule::new(SphereRule::for_degree(n, 48)?, 64)?;
    let mut worst = 0.0f64;
    let mut points = Vec::new();
    while points.len() < 10 {
        let z = ctx.complex_ball(n, 0.6);
        if z.lie_norm() <= 0.6 {
            points.push(z);
        }
    }
    for d in 0..=4 {
        for e in monomials_of_degree(n, d) {
            let u = NumericPoly::monomial(e, Complex64::new(1.0, 0.0));
            for z in &points {
                worst = worst.max((hua_reproduce(&u, z, &lie)? - u.evaluate(z)?).norm());
            }
        }
    }
    Ok(vec![measured("hua-reproduction", ctx.cfg, worst, 1e-6, "monomials of degree <= 4, L(z) <= 0.6".into())])
}

fn limit(ctx: &mut Ctx) -> Result<Vec<Row>> {
    let u = parse_numeric("x1^2", 2)?;
    let z = ComplexVector::from_real(&[0.4, 0.2])?;
    let rule = SphereRule::new(2, 256)?;
    let lie = LieSphereRule::new(SphereRule::for_degree(2, 48)?, 64)?;
    let rep = polyharmonic_limit_experiment(&u, &z, &[1, 2, 4, 8, 16, 64], &rule, &lie)?;
    let slack = ctx.cfg.tol("limit-slack", 1e-12);
    let last = rep.rows.last().map_or(f64::INFINITY, |r| r.error);
    let mut rows = vec![
        Row::new("limit", "n=2 u=x1^2 z=(0.4,0.2) p=64")
            .checked(last, ctx.cfg.tol("limit", 1e-3))
            .text(format!("monotone within slack: {}", rep.non_increasing(slack))),
        Row::new("limit-hua", "p=64").checked(rep.final_hua_gap(), ctx.cfg.tol("limit-hua", 1e-4)),
    ];
    if !rep.non_increasing(slack) {
        rows[0].status = crate::table::Status::Fail;
    }
    Ok(rows)
}

fn gegenbauer_suite(ctx: &mut Ctx) -> Result<Vec<Row>> {
    let ts: Vec<f64> = (0..=40).map(|i| -1.0 + i as f64 / 20.0).collect();
    let mut worst = 0.0f64;
    for lambda in [1.0, 1.5, 2.0, 2.5] {
        let lr = BigRational::from_float(lambda).expect("finite");
        for m in 0..=30 {
            let exact = ts
                .iter()
                .map(|&t| gegenbauer_exact(&lr, m, &BigRational::from_float(t).expect("finite")).map(|v| v.to_f64().unwrap_or(f64::NAN)))
                .collect::<Result<Vec<_>>>()?;
            let scale = exact.iter().fold(0.0f64, |a, b| a.max(b.abs()));
            for (t, e) in ts.iter().zip(&exact) {
                worst = worst.max((gegenbauer(lambda, m, Complex64::new(*t, 0.0))?.re - e).abs() / scale);
            }
        }
    }
    let w = Complex64::from_polar(0.6, 0.7);
    let closed = generating_closed_form(1.5, 0.4, w);
    let gap = (generating_partial_sum(1.5, 0.4, w, 80)? - closed).norm();
    Ok(vec![
        measured("gegenbauer", ctx.cfg, worst, 1e-11, "recurrence vs exact explicit sum, relative to sup".into()),
        measured("generating-function", ctx.cfg, gap, 1e-12, "partial sum M=80, |w|=0.6".into()),
    ])
}

pub fn verify(cfg: &RunConfig) -> std::result::Result<Vec<Row>, CliError> {
    let block = cfg.verify.clone().unwrap_or_default();
    let suites: Vec<String> = if block.suites.is_empty() {
        SUITES.iter().map(|s| s.to_string()).collect()
    } else {
        block.suites.clone()
    };
    if let Some(bad) = suites.iter().find(|s| !SUITES.contains(&s.as_str())) {
        return Err(CliError::Config(format!("unknown suite {bad:?}; known: {}", SUITES.join(", "))));
    }
    let mut ctx = Ctx {
        cfg,
        rng: ChaCha8Rng::seed_from_u64(cfg.seed()),
        samples: block.samples.unwrap_or(100),
    };
    let mut rows = Vec::new();
    for s in &suites {
        let run: fn(&mut Ctx) -> Result<Vec<Row>> = match s.as_str() {
            "route-agreement" => route_agreement,
            "series" => series,
            "diagonal-dim" => diagonal_dim,
            "reproduction" => reproduction,
            "orthogonality" => orthogonality,
            "almansi" => almansi,
            "sector-integrals" => sector_integrals,
            "hua-convergence" => hua_convergence,
            "hua-reproduction" => hua_reproduction,
            "limit" => limit,
            _ => gegenbauer_suite,
        };
        match run(&mut ctx) {
            Ok(r) => rows.extend(r),
            Err(e) => rows.push(suite_error(s, cfg, &e)),
        }
    }
    Ok(rows)
}

fn suite_error(name: &str, cfg: &RunConfig, e: &Error) -> Row {
    Row::failed(name, format!("n={} p={}", cfg.n, cfg.p), e)
}
