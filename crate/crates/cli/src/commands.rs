//! `kernel`, `dirichlet`, `hua-limit`, `almansi` and `dims`.

use num_complex::Complex64;
use polyharmonic::kernels::{
    cauchy_hua, poisson_kernel, poisson_kernel_series, route_scale, series_terms, zonal_polyharmonic,
    KernelParams, PairInvariants, ZonalRoute,
};
use polyharmonic::polyalg::{dim_h, dim_hp, dim_p, parse_exact, parse_numeric, polyharmonic_almansi, polyharmonic_nullity};
use polyharmonic::quadrature::{LieSphereRule, SphereRule};
use polyharmonic::solver::{auto_rule, dirichlet_solve, polyharmonic_limit_experiment, BoundaryData, INTERIOR_MARGIN};
use polyharmonic::{ComplexVector, RotatedVector};
use rayon::prelude::*;

use crate::config::{PairSpec, RunConfig};
use crate::table::Row;
use crate::CliError;

/// Rows plus the serialized quadrature rule, if one was used.
pub type Output = (Vec<Row>, Option<String>);

const DEFAULT_MC_SAMPLES: usize = 20_000;

fn check_dim(cfg: &RunConfig, d: usize) -> polyharmonic::Result<()> {
    if d != cfg.n {
        return Err(polyharmonic::Error::DimensionMismatch { expected: cfg.n, actual: d });
    }
    Ok(())
}

fn kernel_pair(cfg: &RunConfig, i: usize, pair: &PairSpec, degrees: &[usize], series_tol: f64) -> Vec<Row> {
    let (n, p) = (cfg.n, cfg.p);
    let tag = format!("pair={i}");
    let parsed = (|| {
        check_dim(cfg, pair.x.dim())?;
        check_dim(cfg, pair.zeta.dim())?;
        let x = pair.x.complex(p)?;
        let zeta = pair.zeta.rotated(p)?;
        zeta.require_on_sphere(p)?;
        Ok::<_, CliError>((x, zeta))
    })();
    let (x, zeta) = match parsed {
        Ok(v) => v,
        Err(CliError::Library(e)) => return vec![Row::failed("pair", tag, &e)],
        Err(e) => return vec![Row::failed("pair", tag, &polyharmonic::Error::InvalidArgument(e.to_string()))],
    };
    let zc = zeta.to_complex();
    let mut rows = Vec::new();
    let route_tol = cfg.tol("route-gap", 1e-10);
    for &m in degrees {
        let inputs = |route: ZonalRoute| format!("{tag} m={m} route={route}");
        let computed = KernelParams::new(n, p, m).and_then(|params| {
            let reference = zonal_polyharmonic(params, &x, &zeta, ZonalRoute::GegenbauerDiff)?;
            let scale = route_scale(n, p, m, PairInvariants::new(&x, &zc)?)?;
            Ok((params, reference, scale))
        });
        let (params, reference, scale) = match computed {
            Ok(v) => v,
            Err(e) => {
                rows.push(Row::failed("zonal", format!("{tag} m={m}"), &e));
                continue;
            }
        };
        for route in ZonalRoute::ALL {
            rows.push(match zonal_polyharmonic(params, &x, &zeta, route) {
                Ok(v) => Row::new("zonal", inputs(route))
                    .value(v)
                    .reference(reference)
                    .checked((v - reference).norm() / scale, route_tol)
                    .text("error is relative to dim_Hp * rho^m"),
                Err(e) => Row::failed("zonal", inputs(route), &e),
            });
        }
    }
    match pair.x.rotated(p).ok().filter(|xr| xr.require_in_ball(p, 0.0).is_ok()) {
        Some(xr) => rows.push(match poisson_kernel(n, p, &xr, &zeta) {
            Ok(v) => match poisson_kernel_series(n, p, &xr, &zeta, series_tol) {
                Ok(s) => Row::new("poisson", tag.clone())
                    .value(v)
                    .reference(s.value)
                    .checked((v - s.value).norm(), cfg.tol("poisson-series", 1e-8))
                    .text(format!("series terms={}", s.terms_used)),
                Err(e) => Row::new("poisson", tag.clone()).value(v).text(format!("no series reference: {e}")),
            },
            Err(e) => Row::failed("poisson", tag.clone(), &e),
        }),
        None => rows.push(Row::new("poisson", tag.clone()).text("skipped: x is not in the rotated ball")),
    }
    rows.push(match cauchy_hua(n, &x, &zc) {
        Ok(v) => {
            let inside = x.lie_norm() * zc.lie_norm() < 1.0;
            Row::new("cauchy-hua", tag).value(v).text(if inside { "" } else { "outside Lie domain" })
        }
        Err(e) => Row::failed("cauchy-hua", tag, &e),
    });
    rows
}

pub fn kernel(cfg: &RunConfig) -> Result<Output, CliError> {
    let block = cfg.kernel.clone().unwrap_or_default();
    let mut pairs = block.pairs.clone();
    match (&cfg.x, &cfg.zeta) {
        (Some(x), Some(zeta)) => pairs.insert(0, PairSpec { x: x.clone(), zeta: zeta.clone() }),
        (None, None) => {}
        _ => return Err(CliError::Config("top-level x and zeta must be given together".into())),
    }
    if pairs.is_empty() {
        return Err(CliError::Config("kernel needs at least one (x, zeta) pair".into()));
    }
    let degrees = cfg.degrees.clone().unwrap_or_else(|| (0..=4).collect());
    let series_tol = block.series_tolerance.unwrap_or(1e-10);
    let rows = pairs
        .par_iter()
        .enumerate()
        .map(|(i, pair)| kernel_pair(cfg, i, pair, &degrees, series_tol))
        .collect::<Vec<_>>()
        .concat();
    Ok((rows, None))
}

fn explicit_rule(cfg: &RunConfig, nodes: usize) -> Result<SphereRule, CliError> {
    Ok(SphereRule::with_seed(cfg.n, nodes, cfg.seed())?)
}

pub fn dirichlet(cfg: &RunConfig) -> Result<Output, CliError> {
    let block = cfg.dirichlet.as_ref().ok_or_else(|| CliError::Config("missing \"dirichlet\" block".into()))?;
    let (n, p) = (cfg.n, cfg.p);
    let poly = parse_numeric(&block.boundary, n)?;
    let data = BoundaryData::from_polynomial(&poly, p)?;
    let oracle = poly.is_homogeneous() && poly.is_polyharmonic(p)?;
    let parsed: Vec<Result<RotatedVector, polyharmonic::Error>> = block
        .points
        .iter()
        .map(|s| {
            check_dim(cfg, s.dim())?;
            let x = s.rotated(p).map_err(|e| match e {
                CliError::Library(e) => e,
                other => polyharmonic::Error::InvalidArgument(other.to_string()),
            })?;
            x.require_in_ball(p, INTERIOR_MARGIN)?;
            Ok(x)
        })
        .collect();
    let valid: Vec<RotatedVector> = parsed.iter().filter_map(|r| r.as_ref().ok().cloned()).collect();
    let rule = match cfg.resolution.nodes() {
        Some(k) => explicit_rule(cfg, k)?,
        None if n >= 4 => explicit_rule(cfg, block.monte_carlo_samples.unwrap_or(DEFAULT_MC_SAMPLES))?,
        None => {
            let r = valid.iter().map(|x| x.radius()).fold(0.0, f64::max);
            auto_rule(n, p, poly.degree().unwrap_or(0), r, 1e-13, 0)?
        }
    };
    let bound = cfg.tol("dirichlet", rule.statistical_tolerance().unwrap_or(1e-9));
    let (_, values) = dirichlet_solve(&data, &valid, &rule)?;
    let mut values = values.into_iter();
    let rows = parsed
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let tag = format!("point={i}");
            match x {
                Err(e) => Row::failed("dirichlet", tag, e),
                Ok(x) => {
                    let v = values.next().expect("one value per valid point");
                    let sector = x.sector_index(p).unwrap_or(0);
                    let row = Row::new("dirichlet", tag).value(v).text(format!("sector={sector}"));
                    match poly.evaluate_rotated(x) {
                        Ok(r) if oracle => row.reference(r).checked((v - r).norm(), bound),
                        _ => row,
                    }
                }
            }
        })
        .collect();
    Ok((rows, Some(rule.to_json())))
}

pub fn hua_limit(cfg: &RunConfig) -> Result<Output, CliError> {
    let block = cfg.hua_limit.as_ref().ok_or_else(|| CliError::Config("missing \"hua_limit\" block".into()))?;
    let n = cfg.n;
    let u = parse_numeric(&block.u, n)?;
    check_dim(cfg, block.z.dim())?;
    let z: ComplexVector = block.z.complex(cfg.p)?;
    let max_p = block.p_list.iter().copied().max().ok_or_else(|| CliError::Config("p_list is empty".into()))?;
    let rule = match cfg.resolution.nodes() {
        Some(k) => explicit_rule(cfg, k)?,
        None if n >= 4 => explicit_rule(cfg, DEFAULT_MC_SAMPLES)?,
        None => {
            let r = z.hermitian_norm();
            if !(r < 1.0) {
                return Err(CliError::Config("automatic resolution needs |z| < 1; set \"resolution\"".into()));
            }
            let terms = series_terms(n, max_p, r, 1e-13)?.0;
            SphereRule::for_degree(n, u.degree().unwrap_or(0) + terms)?
        }
    };
    let lie = LieSphereRule::new(
        SphereRule::for_degree(n, block.lie_degree.unwrap_or(48))?,
        block.lie_angular_nodes.unwrap_or(64),
    )?;
    let rep = polyharmonic_limit_experiment(&u, &z, &block.p_list, &rule, &lie)?;
    let slack = cfg.tol("limit-slack", 1e-12);
    let mut prev = f64::INFINITY;
    let mut rows: Vec<Row> = rep
        .rows
        .iter()
        .map(|r| {
            let row = Row::new("u_p", format!("p={}", r.p))
                .value(r.value)
                .reference(rep.exact)
                .checked(r.error, prev + slack)
                .text("bound is the previous error plus slack");
            prev = r.error;
            row
        })
        .collect();
    rows.push(
        Row::new("cauchy-hua", "integral")
            .value(rep.hua)
            .reference(rep.exact)
            .checked((rep.hua - rep.exact).norm(), cfg.tol("hua-reproduction", 1e-6)),
    );
    Ok((rows, Some(rule.to_json())))
}

pub fn almansi(cfg: &RunConfig) -> Result<Output, CliError> {
    let block = cfg.almansi.as_ref().ok_or_else(|| CliError::Config("missing \"almansi\" block".into()))?;
    let q = parse_exact(&block.polynomial, cfg.n)?;
    let dec = polyharmonic_almansi(&q, cfg.p)?;
    let mut rows: Vec<Row> = dec
        .components()
        .iter()
        .enumerate()
        .map(|(k, c)| Row::new("component", format!("k={k} radial_power={}", dec.radial_exponent(k))).text(c.to_string()))
        .collect();
    let residual = (&dec.reassemble() - &q).max_magnitude();
    rows.push(Row::new("reassembly", "").checked(residual, 0.0));
    let annihilation = dec
        .components()
        .iter()
        .map(|c| c.laplacian_pow(cfg.p).max_magnitude())
        .fold(0.0, f64::max);
    rows.push(Row::new("annihilation", format!("order={}", cfg.p)).checked(annihilation, 0.0));
    Ok((rows, None))
}

pub fn dims(cfg: &RunConfig) -> Result<Output, CliError> {
    let block = cfg.dims.clone().unwrap_or_default();
    let n = cfg.n;
    let degrees = cfg.degrees.clone().unwrap_or_else(|| (0..=block.max_degree.unwrap_or(8)).collect());
    let mut rows = Vec::new();
    for pp in 1..=block.max_order.unwrap_or(cfg.p.max(3)) {
        for &m in &degrees {
            let tag = format!("n={n} m={m} p={pp}");
            let row = (|| {
                let d = dim_hp(n, m, pp)?;
                let nullity = polyharmonic_nullity(n, m, pp)?;
                Ok::<_, polyharmonic::Error>(
                    Row::new("dim_hp", tag.clone())
                        .value(Complex64::new(d as f64, 0.0))
                        .reference(Complex64::new(nullity as f64, 0.0))
                        .checked(d.abs_diff(nullity) as f64, 0.0)
                        .text(format!("dim_P={} dim_H={}", dim_p(n, m)?, dim_h(n, m)?)),
                )
            })();
            rows.push(row.unwrap_or_else(|e| Row::failed("dim_hp", tag, &e)));
        }
    }
    Ok((rows, None))
}
