use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use polyharmonic::gegenbauer::gegenbauer;
use polyharmonic::kernels::{
    poisson_kernel, poisson_kernel_gegenbauer_form, zonal_polyharmonic, zonal_polyharmonic_extended, KernelParams,
    ZonalRoute,
};
use polyharmonic::polyalg::{
    dim_hp, harmonic_almansi, monomials_of_degree, parse_exact, polyharmonic_almansi, polyharmonic_split, rational, ExactPoly,
    MultiPoly, NumericPoly,
};
use polyharmonic::quadrature::{lie_sphere_integral, rotated_inner_product, LieSphereRule, SphereRule};
use polyharmonic::solver::{dirichlet_solve, poisson_integral, spectral_component, BoundaryData};
use polyharmonic::{ComplexVector, RotatedVector};

fn unit(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
    let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / r).collect()
}

fn random_poly(rng: &mut ChaCha8Rng, n: usize, m: usize) -> ExactPoly {
    let mut terms = Vec::new();
    for e in monomials_of_degree(n, m) {
        if rng.random_bool(0.7) {
            terms.push((e.0, rational(rng.random_range(-9..=9), rng.random_range(1..=5))));
        }
    }
    ExactPoly::from_terms(n, terms).unwrap()
}

fn complex_vec() -> impl Strategy<Value = ComplexVector> {
    (2usize..=4).prop_flat_map(|n| {
        prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), n)
            .prop_map(|v| ComplexVector::new(v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).unwrap())
    })
}

fn real_vec() -> impl Strategy<Value = Vec<f64>> {
    (2usize..=4).prop_flat_map(|n| prop::collection::vec(-10.0f64..10.0, n))
}

proptest! {
    #[test]
    fn complex_abs_squares_to_bilinear_square(z in complex_vec()) {
        let sq = z.bilinear_square();
        let r = z.complex_abs() * z.complex_abs() - sq;
        prop_assert!(r.norm() <= 1e-12 * sq.norm().max(1.0));
    }

    #[test]
    fn real_vectors_have_euclidean_norms(x in real_vec(), phi in 0.0f64..(2.0 * PI)) {
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let z = ComplexVector::from_real(&x).unwrap();
        prop_assert!((z.complex_abs() - norm).norm() <= 1e-12 * norm.max(1.0));
        prop_assert!((z.lie_norm() - norm).abs() <= 1e-12 * norm.max(1.0));
        let rotated = z.scale(Complex64::from_polar(1.0, phi));
        prop_assert!((rotated.lie_norm() - norm).abs() <= 1e-12 * norm.max(1.0));
    }

    #[test]
    fn hermitian_norm_facts(z in complex_vec()) {
        let d = z.hermitian_dot(&z).unwrap();
        let h = z.hermitian_norm();
        prop_assert!(d.im.abs() <= 1e-12 * h * h);
        prop_assert!((d.re - h * h).abs() <= 1e-12 * h * h);
        prop_assert!(h <= z.lie_norm() * (1.0 + 1e-12));
    }

    #[test]
    fn homogeneous_evaluation_rotates(seed in 0u64..10_000, phi in 0.0f64..PI) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(2..=3);
        let m = rng.random_range(0..=6);
        let q = random_poly(&mut rng, n, m).to_numeric();
        let a: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let base = q.evaluate_real(&a).unwrap();
        let rot = q.evaluate_rotated(&RotatedVector::new(phi, a).unwrap()).unwrap();
        let want = base * Complex64::from_polar(1.0, m as f64 * phi);
        prop_assert!((rot - want).norm() <= 1e-12 * want.norm().max(1e-300) + 1e-300);
    }
}

#[test]
fn rotated_set_inclusions() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for p in 1..=4 {
        for _ in 0..50 {
            let n = rng.random_range(2..=5);
            let j = rng.random_range(0..p);
            let s = RotatedVector::on_sector(j, p, unit(&mut rng, n)).unwrap();
            assert!((s.to_complex().lie_norm() - 1.0).abs() <= 1e-12);
            let r = rng.random::<f64>() * 0.999;
            let b: Vec<f64> = unit(&mut rng, n).into_iter().map(|v| v * r).collect();
            let b = RotatedVector::on_sector(j, p, b).unwrap();
            assert!(b.to_complex().lie_norm() < 1.0);
        }
    }
}

#[test]
fn harmonic_almansi_reassembles_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let n = rng.random_range(2..=3);
        let m = rng.random_range(0..=8);
        let q = random_poly(&mut rng, n, m);
        let dec = harmonic_almansi(&q).unwrap();
        assert_eq!(dec.reassemble(), q);
        assert!(dec.components().iter().all(|u| u.laplacian().is_zero()));
    }
}

#[test]
fn perturbed_decomposition_never_reassembles() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let n = rng.random_range(2..=3);
        let p = rng.random_range(1..=3);
        let m = rng.random_range(0..=8);
        let q = random_poly(&mut rng, n, m);
        let dec = polyharmonic_almansi(&q, p).unwrap();
        let mut comps = dec.padded(m / (2 * p) + 1);
        let k = rng.random_range(0..comps.len());
        let deg = m - 2 * k * p;
        // (x1 + i x2)^deg is harmonic, so the perturbed component stays p-harmonic
        let base = parse_exact("x1 + (0,1) * x2", n).unwrap();
        let bump = (0..deg).fold(ExactPoly::one(n), |acc, _| &acc * &base);
        comps[k] = &comps[k] + &bump;
        assert!(comps[k].is_polyharmonic(p).unwrap());
        let rebuilt = comps
            .iter()
            .enumerate()
            .fold(ExactPoly::zero(n), |acc, (i, c)| &acc + &(&MultiPoly::radial(n, i * p) * c));
        assert_ne!(rebuilt, q);
    }
}

#[test]
fn direct_sum_split() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..60 {
        let n = rng.random_range(2..=3);
        let p = rng.random_range(1..=3);
        let m = rng.random_range(2 * p..=8.max(2 * p));
        let q = random_poly(&mut rng, n, m);
        let (h, r) = polyharmonic_split(&q, p).unwrap();
        assert!(h.is_polyharmonic(p).unwrap());
        assert_eq!(&h + &(&MultiPoly::radial(n, p) * &r), q);
    }
}

#[test]
fn gegenbauer_parity_on_grid() {
    for lambda in [1.0, 1.5, 2.0, 2.5] {
        for m in 0..=30 {
            for i in 0..=100 {
                let t = -1.0 + i as f64 / 50.0;
                let a = gegenbauer(lambda, m, Complex64::new(t, 0.0)).unwrap();
                let b = gegenbauer(lambda, m, Complex64::new(-t, 0.0)).unwrap();
                let s = if m % 2 == 0 { 1.0 } else { -1.0 };
                assert!((b - a * s).norm() <= 1e-12 * a.norm().max(1.0));
            }
        }
    }
}

#[test]
fn zonal_symmetry_scaling_and_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 2..=3 {
        for p in 1..=3 {
            for m in 0..=8 {
                let params = KernelParams::new(n, p, m).unwrap();
                let dim = dim_hp(n, m, p).unwrap() as f64;
                for _ in 0..20 {
                    let zeta = RotatedVector::on_sector(rng.random_range(0..p), p, unit(&mut rng, n)).unwrap();
                    let eta = RotatedVector::on_sector(rng.random_range(0..p), p, unit(&mut rng, n)).unwrap();
                    let ze = zonal_polyharmonic(params, &zeta.to_complex(), &eta, ZonalRoute::GegenbauerDiff).unwrap();
                    let ez = zonal_polyharmonic(params, &eta.to_complex(), &zeta, ZonalRoute::GegenbauerDiff).unwrap();
                    assert!((ze.conj() - ez).norm() <= 1e-11 * dim);
                    assert!(ze.norm() <= dim * (1.0 + 1e-9));
                    let a = Complex64::from_polar(2.0 * rng.random::<f64>(), rng.random_range(0.0..2.0 * PI));
                    let lhs = zonal_polyharmonic_extended(params, &zeta.to_complex().scale(a), &eta.to_complex(), ZonalRoute::ExplicitSum).unwrap();
                    let rhs = zonal_polyharmonic_extended(params, &zeta.to_complex(), &eta.to_complex().scale(a.conj()), ZonalRoute::ExplicitSum).unwrap();
                    assert!((lhs - rhs).norm() <= 1e-11 * dim * 2f64.powi(m as i32));
                }
            }
        }
    }
}

#[test]
fn gegenbauer_factorization_matches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for n in 2..=3 {
        for p in 1..=3 {
            for _ in 0..10 {
                let r = 0.7 * rng.random::<f64>();
                let coords: Vec<f64> = unit(&mut rng, n).into_iter().map(|v| v * r).collect();
                let x = RotatedVector::on_sector(rng.random_range(0..p), p, coords).unwrap();
                let zeta = RotatedVector::on_sector(rng.random_range(0..p), p, unit(&mut rng, n)).unwrap();
                let g = poisson_kernel_gegenbauer_form(n, p, &x, &zeta, 150).unwrap();
                let c = poisson_kernel(n, p, &x, &zeta).unwrap();
                assert!((g - c).norm() <= 1e-10 * c.norm().max(1.0), "n={n} p={p}");
            }
        }
    }
}

#[test]
fn inner_product_is_hermitian_and_positive() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 2..=3 {
        let rule = SphereRule::for_degree(n, 10).unwrap();
        for p in 1..=3 {
            for _ in 0..5 {
                let (df, dg) = (rng.random_range(0..=5), rng.random_range(0..=5));
                let f = random_poly(&mut rng, n, df).to_numeric();
                let g = random_poly(&mut rng, n, dg).to_numeric();
                let ef = |_: usize, z: &RotatedVector| f.evaluate_rotated(z);
                let eg = |_: usize, z: &RotatedVector| g.evaluate_rotated(z);
                let fg = rotated_inner_product(ef, eg, p, &rule).unwrap();
                let gf = rotated_inner_product(eg, ef, p, &rule).unwrap();
                assert!((fg - gf.conj()).norm() <= 1e-13 * fg.norm().max(1.0));
                let ff = rotated_inner_product(ef, ef, p, &rule).unwrap();
                assert!(ff.re >= 0.0 && ff.im.abs() <= 1e-13 * ff.re.max(1.0));
            }
        }
    }
}

#[test]
fn lie_integral_stable_under_doubling() {
    let z = ComplexVector::new(vec![Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.25)]).unwrap();
    let f = |w: &ComplexVector| -> polyharmonic::Result<Complex64> {
        Ok(polyharmonic::kernels::cauchy_hua(2, &z, w)? * w.entries()[0] * w.entries()[1])
    };
    let coarse = LieSphereRule::new(SphereRule::for_degree(2, 48).unwrap(), 64).unwrap();
    let fine = LieSphereRule::new(SphereRule::for_degree(2, 96).unwrap(), 128).unwrap();
    let a = lie_sphere_integral(f, &coarse).unwrap();
    let b = lie_sphere_integral(f, &fine).unwrap();
    assert!((a - b).norm() <= 1e-10);
}

#[test]
fn spectral_completeness_and_form_equality() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for n in 2..=3 {
        for p in 1..=3 {
            let d = 4;
            let q: NumericPoly = (0..=d).fold(NumericPoly::zero(n), |acc, m| &acc + &random_poly(&mut rng, n, m).to_numeric());
            let f = BoundaryData::from_polynomial(&q, p).unwrap();
            let rule = SphereRule::for_degree(n, 2 * d).unwrap();
            for _ in 0..20 {
                let eta = RotatedVector::on_sector(rng.random_range(0..p), p, unit(&mut rng, n)).unwrap();
                let total: Complex64 = (0..=d).map(|m| spectral_component(&f, m, &eta, &rule).unwrap()).sum();
                let want = q.evaluate_rotated(&eta).unwrap();
                assert!((total - want).norm() <= 1e-9 * want.norm().max(1.0), "n={n} p={p}");
            }
            let fine = polyharmonic::solver::auto_rule(n, p, d, 0.8, 1e-13, 0).unwrap();
            let points: Vec<RotatedVector> = (0..10)
                .map(|_| {
                    let r = 0.8 * rng.random::<f64>();
                    let c: Vec<f64> = unit(&mut rng, n).into_iter().map(|v| v * r).collect();
                    RotatedVector::on_sector(rng.random_range(0..p), p, c).unwrap()
                })
                .collect();
            let (_, values) = dirichlet_solve(&f, &points, &fine).unwrap();
            for (x, v) in points.iter().zip(values) {
                assert!((poisson_integral(&f, x, &fine).unwrap() - v).norm() <= 1e-11);
            }
        }
    }
}
