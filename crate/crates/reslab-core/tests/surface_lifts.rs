use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reslab_core::algebra::rho_x;
use reslab_core::branch::{c, enumerate_s_nonnegative};
use reslab_core::contour::{g_n, Integrator, ResolventConfig, ResolventEngine};
use reslab_core::surface::{
    chart_kappa, chart_kappa_inverse, is_removable_point, lift_g_at, removable_points, scaled_chart_inverse,
    tilde_g_raw, x_n, zeta_plus, ChartSign, CoverAtlas, LiftedResolvent, SheetSignature, SurfacePoint, BRANCH_CONSTANT,
};
use reslab_core::symbols::{make_gaussian_symbol, phi_zu, PrefactorTerm, SixthRoot, SpectralSymbol};
use reslab_core::CoreError;

const N: usize = 2;

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
}

fn symbol() -> SpectralSymbol {
    make_gaussian_symbol(
        0.5,
        vec![PrefactorTerm { coeff: 1.0, p2: 0, p3: 0 }, PrefactorTerm { coeff: 0.2, p2: 0, p3: 1 }],
    )
    .unwrap()
}

fn on_surface(n: i64, z: Complex64, zeta: Complex64) -> f64 {
    let x = x_n(n, z).unwrap();
    (zeta * zeta - (x * x - 1.0)).norm() / x.norm_sqr().max(1.0)
}

#[test]
fn physical_lift_on_the_negative_imaginary_axis() {
    let z = Complex64::new(0.0, -1.0);
    let zeta0 = zeta_plus(0, z).unwrap();
    assert!((zeta0 - Complex64::new(0.0, 3f64.sqrt() / 2.0)).norm() < 1e-15);
    // Below the branch point the defining product is odd in x and x < −1.
    let zeta1 = zeta_plus(1, z).unwrap();
    assert!((zeta1 - Complex64::new(-(5f64.sqrt()) / 2.0, 0.0)).norm() < 1e-15);
    assert!(matches!(zeta_plus(0, Complex64::new(0.0, 2.0)), Err(CoreError::OnBranchCut(_))));
}

#[test]
fn physical_lift_satisfies_the_defining_equation() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    for _ in 0..100 {
        let z = Complex64::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        let n = rng.random_range(0..4);
        let zeta = zeta_plus(n, z).unwrap();
        assert!(on_surface(n, z, zeta) < 1e-13, "{n} {z}");
        let sheet = -zeta;
        assert!(on_surface(n, z, sheet) < 1e-13);
    }
}

#[test]
fn lifted_g_restricts_to_g_on_the_physical_sheet() {
    let symbol = symbol();
    let z = Complex64::new(0.8, -0.6);
    let lifted = lift_g_at(&symbol, 0, z, zeta_plus(0, z).unwrap()).unwrap();
    assert!(rel(lifted, g_n(&symbol, 0, z).unwrap()) < 1e-11);
    let mut rng = ChaCha8Rng::seed_from_u64(52);
    for _ in 0..50 {
        let z = Complex64::new(rng.random_range(0.05..2.5), rng.random_range(-2.5..2.5));
        let n = rng.random_range(0..3);
        let lifted = lift_g_at(&symbol, n, z, zeta_plus(n, z).unwrap()).unwrap();
        assert!(rel(lifted, g_n(&symbol, n, z).unwrap()) < 1e-11, "{n} {z}");
    }
}

#[test]
fn lifted_g_is_invariant_under_the_antipodal_map() {
    let symbol = symbol();
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    for _ in 0..100 {
        let z = Complex64::new(rng.random_range(-2.5..2.5), rng.random_range(-2.5..2.5));
        let n = rng.random_range(0..3);
        let x = x_n(n, z).unwrap();
        let zeta = (x * x - 1.0).sqrt() * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let (Ok(a), Ok(b)) = (tilde_g_raw(&symbol, n, z, zeta), tilde_g_raw(&symbol, n, -z, -zeta)) else {
            continue;
        };
        assert!(rel(a, b) < 1e-11, "{n} {z}");
    }
}

#[test]
fn cancelling_factor_vanishes_at_the_removable_points() {
    let symbol = symbol();
    for n in 0..2 {
        for m in 0..2 {
            for p in removable_points(n, m) {
                assert!(on_surface(n, p.z, p.zeta) < 1e-13);
                let w = p.w();
                let xi = SixthRoot::XI.value();
                let (pole, cancel) = if p.k == 1 { (xi * w, xi * xi * w) } else { (xi * xi * w, xi * w) };
                // z·c(ξ^k w) sits on the pole lattice: −i(m + 1/2) …
                let v_pole = p.z * c(pole).unwrap();
                assert!((v_pole + Complex64::new(0.0, m as f64 + 0.5)).norm() < 1e-10, "{p:?}: {v_pole}");
                // … and the other factor vanishes: z·c(ξ^{3−k} w) ∈ iZ.
                let v_cancel = p.z * c(cancel).unwrap();
                assert!(v_cancel.re.abs() < 1e-10 && (v_cancel.im - v_cancel.im.round()).abs() < 1e-10, "{p:?}");
                assert!(phi_zu(p.z, SixthRoot::ONE, cancel).unwrap().norm() < 1e-10);
                assert!(is_removable_point(n, p.z, p.zeta).unwrap());
                // The lift is finite there and equals the mean over a wider circle.
                let value = lift_g_at(&symbol, n, p.z, p.zeta).unwrap();
                let mut mean = Complex64::new(0.0, 0.0);
                let mut size = 0.0;
                let points = 32;
                for j in 0..points {
                    let zj = p.z + Complex64::from_polar(4e-3, 2.0 * PI * (j as f64 + 0.5) / points as f64);
                    let x = x_n(n, zj).unwrap();
                    let root = (x * x - 1.0).sqrt();
                    let zeta = if (root - p.zeta).norm() < (root + p.zeta).norm() { root } else { -root };
                    let g = tilde_g_raw(&symbol, n, zj, zeta).unwrap();
                    mean += g;
                    size += g.norm();
                }
                mean /= points as f64;
                // Measured against the size of G̃ nearby: the lift may vanish at the point itself.
                let scale = value.norm().max(size / points as f64);
                assert!((value - mean).norm() < 1e-9 * scale, "{p:?}: {value} vs {mean}");
            }
        }
    }
}

#[test]
fn lifted_g_has_poles_at_the_branch_points() {
    let symbol = symbol();
    let z = Complex64::new(0.0, -0.5);
    assert!(matches!(lift_g_at(&symbol, 0, z, Complex64::new(0.0, 0.0)), Err(CoreError::PoleProximity { .. })));
    // Simple pole in the chart coordinate: ζ·G̃ tends to a finite limit.
    let near = |t: f64| {
        let zeta = Complex64::new(t, 0.0);
        let (z, _) = chart_kappa_inverse(0, ChartSign::Minus, zeta).unwrap();
        lift_g_at(&symbol, 0, z, zeta).unwrap() * zeta
    };
    assert!(rel(near(1e-4), near(1e-5)) < 1e-6);
}

#[test]
fn chart_examples_and_round_trips() {
    let (z, zeta) = chart_kappa_inverse(0, ChartSign::Minus, Complex64::new(0.0, 0.0)).unwrap();
    assert!((z - Complex64::new(0.0, -0.5)).norm() < 1e-15 && zeta.norm() == 0.0);
    let (z, _) = scaled_chart_inverse(1, Complex64::new(0.0, 0.0)).unwrap();
    assert!((z - Complex64::new(0.0, -3.0 * 3f64.sqrt())).norm() < 1e-14);
    assert!(chart_kappa_inverse(0, ChartSign::Plus, Complex64::new(0.0, 1.5)).is_err());
    let mut rng = ChaCha8Rng::seed_from_u64(54);
    for _ in 0..100 {
        let zeta = Complex64::new(rng.random_range(-0.8..0.8), rng.random_range(-0.8..0.8));
        let n = rng.random_range(0..3);
        for sign in [ChartSign::Plus, ChartSign::Minus] {
            let (z, back) = chart_kappa_inverse(n, sign, zeta).unwrap();
            assert!(on_surface(n, z, back) < 1e-13);
            assert!((chart_kappa(n, sign, z, back).unwrap() - zeta).norm() < 1e-13);
            let side = (n as f64 + 0.5) * z.im;
            assert!(if sign == ChartSign::Plus { side > 0.0 } else { side < 0.0 });
        }
        let (zs, zeta_s) = scaled_chart_inverse(n, zeta / rho_x()).unwrap();
        let scaled = SurfacePoint { z: zs, zeta: vec![Complex64::new(0.0, 0.0); n as usize + 1], scaled: true };
        let mut plain = scaled.to_plain();
        plain.zeta[n as usize] = zeta_s * rho_x();
        assert!(on_surface(n, plain.z, plain.zeta[n as usize]) < 1e-13);
    }
}

#[test]
fn sections_charts_and_paths_stay_on_the_surface() {
    let atlas = CoverAtlas::new(N);
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    for _ in 0..50 {
        let z = Complex64::new(rng.random_range(0.02..0.2), -rng.random_range(0.1..3.4));
        let Some(m) = atlas.region_of(z) else { continue };
        for eps in SheetSignature::enumerate(N) {
            let p = atlas.section(z, m, &eps).unwrap();
            assert!(p.defining_residual().unwrap() < 1e-12);
            assert_eq!(atlas.signature(&p, m).unwrap(), eps);
        }
    }
    let eps = SheetSignature::all_plus(N);
    let p = atlas.chart_point(1, Complex64::new(0.05, 0.02), &eps).unwrap();
    assert!(p.defining_residual().unwrap() < 1e-12);
    let path = [Complex64::new(0.3, -1.0), Complex64::new(0.2, -2.2)];
    let trace = atlas.continue_along_path(&atlas.physical(Complex64::new(0.4, -0.2)).unwrap(), &path).unwrap();
    assert!(trace.iter().all(|q| q.defining_residual().unwrap() < 1e-12));
}

#[test]
fn lift_f_on_the_physical_sheet_equals_f() {
    let atlas = CoverAtlas::new(N);
    let integrator = Integrator::sequential();
    let symbol = symbol();
    let z = Complex64::new(0.05, -0.3);
    assert_eq!(atlas.region_of(z), Some(-1));
    let p = atlas.physical(z).unwrap();
    let lifted = atlas.lift_f(&integrator, &symbol, &p, -1).unwrap();
    let direct = integrator.f_unit(&symbol, z).unwrap().value;
    assert!(rel(lifted, direct) < 1e-9, "{lifted} vs {direct}");
}

#[test]
fn f_m_plus_residues_is_independent_of_the_region() {
    let atlas = CoverAtlas::new(N);
    let integrator = Integrator::sequential();
    let symbol = symbol();
    for m in 0..2i64 {
        for z in [Complex64::new(0.05, -(m as f64 + 0.9)), Complex64::new(-0.08, -(m as f64 + 0.7))] {
            assert!(atlas.contains(z, m));
            let mut value = atlas.f_m(&integrator, &symbol, z, m).unwrap();
            for n in 0..=m {
                value += 4.0 * PI * Complex64::i() * g_n(&symbol, n, z).unwrap();
            }
            let direct = integrator.f_unit(&symbol, z).unwrap().value;
            assert!(rel(value, direct) < 1e-9, "m = {m}, z = {z}");
        }
    }
}

fn overlap_points(m: i64) -> Vec<Complex64> {
    let centre = Complex64::new(0.0, -(m as f64 + 1.42));
    [
        Complex64::new(0.0, 0.0),
        Complex64::new(0.03, 0.0),
        Complex64::new(-0.03, 0.01),
        Complex64::new(0.02, -0.02),
        Complex64::new(-0.01, 0.03),
    ]
    .iter()
    .map(|d| centre + d)
    .collect()
}

#[test]
fn lift_f_glues_across_adjacent_regions() {
    let atlas = CoverAtlas::new(N);
    let integrator = Integrator::sequential();
    let symbol = symbol();
    for m in 0..N as i64 {
        for sign in [1i8, -1] {
            let mut signs = vec![1i8; N + 1];
            signs[(m + 1) as usize] = sign;
            let eps = SheetSignature::new(signs).unwrap();
            for z in overlap_points(m) {
                assert!(atlas.contains(z, m) && atlas.contains(z, m + 1), "{z}");
                let p = atlas.section(z, m, &eps).unwrap();
                let a = atlas.lift_f(&integrator, &symbol, &p, m).unwrap();
                let b = atlas.lift_f(&integrator, &symbol, &p, m + 1).unwrap();
                assert!(rel(a, b) < 1e-9, "m = {m}, ε = {eps:?}, z = {z}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn chart_points_do_not_depend_on_the_label_of_their_own_component() {
    let atlas = CoverAtlas::new(N);
    let eps = SheetSignature::all_plus(N);
    let zeta = Complex64::new(0.04, -0.03);
    let a = atlas.chart_point(1, zeta, &eps).unwrap();
    let b = atlas.chart_point(1, zeta, &eps.flipped(1)).unwrap();
    assert_eq!(a, b);
    let c = atlas.chart_point(1, zeta, &eps.flipped(2)).unwrap();
    assert_eq!(a.zeta[2], -c.zeta[2]);
}

#[test]
fn trivial_loops_return_to_the_start_sheet() {
    let atlas = CoverAtlas::new(N);
    let start = atlas.physical(Complex64::new(0.8, -0.3)).unwrap();
    let path =
        [Complex64::new(1.5, -0.3), Complex64::new(1.5, 0.4), Complex64::new(0.8, 0.4), Complex64::new(0.8, -0.3)];
    let trace = atlas.continue_along_path(&start, &path).unwrap();
    let end = trace.last().unwrap();
    for (a, b) in end.zeta.iter().zip(&start.zeta) {
        assert!((a - b).norm() < 1e-12);
    }
}

#[test]
fn a_loop_around_a_branch_point_flips_only_its_component() {
    let atlas = CoverAtlas::new(N);
    let centre = Complex64::new(0.0, 0.5);
    let start_z = centre + 0.1;
    let start = atlas.physical(start_z).unwrap();
    let path: Vec<Complex64> =
        (1..=24).map(|k| centre + Complex64::from_polar(0.1, 2.0 * PI * k as f64 / 24.0)).collect();
    let end = atlas.continue_along_path(&start, &path).unwrap().pop().unwrap();
    assert!((end.z - start_z).norm() < 1e-12);
    assert!((end.zeta[0] + start.zeta[0]).norm() < 1e-12);
    for k in 1..=N {
        assert!((end.zeta[k] - start.zeta[k]).norm() < 1e-12);
    }
}

#[test]
fn paths_through_branch_points_are_rejected() {
    let atlas = CoverAtlas::new(N);
    let start = atlas.physical(Complex64::new(0.0, -0.2)).unwrap();
    let err = atlas.continue_along_path(&start, &[Complex64::new(0.0, -1.0)]).unwrap_err();
    assert!(matches!(err, CoreError::PoleProximity { .. }));
}

#[test]
fn descending_the_imaginary_axis_reproduces_the_fibre_pattern() {
    let atlas = CoverAtlas::new(N);
    let offset = 1e-3;
    let start = atlas.physical(Complex64::new(offset, -0.1)).unwrap();
    let vs = [0.25, 0.75, 1.25, 1.75, 2.25, 2.75, 3.25];
    let path: Vec<Complex64> = vs.iter().map(|v| Complex64::new(offset, -v)).collect();
    let trace = atlas.continue_along_path(&start, &path).unwrap();
    for (point, &v) in trace[1..].iter().zip(&vs) {
        for n in 0..=N {
            let zeta = point.zeta[n];
            let expected = zeta_plus(n as i64, Complex64::new(0.0, -v)).unwrap();
            assert!((zeta - expected).norm() < 0.05, "v = {v}, n = {n}: {zeta} vs {expected}");
            if v < n as f64 + 0.5 {
                assert!(zeta.im.abs() < 0.05 * zeta.re.abs(), "real below the branch point");
            } else {
                assert!(zeta.re.abs() < 0.05 * zeta.im.abs(), "imaginary above the branch point");
            }
        }
    }
}

#[test]
fn fibres_have_full_cardinality_except_over_branch_points() {
    let atlas = CoverAtlas::new(N);
    let distinct = |z: Complex64, m: i64| {
        let mut points: Vec<Vec<Complex64>> = Vec::new();
        for eps in SheetSignature::enumerate(N) {
            let p = atlas.section(z, m, &eps).unwrap();
            if !points.iter().any(|q| q.iter().zip(&p.zeta).all(|(a, b)| (a - b).norm() < 1e-12)) {
                points.push(p.zeta);
            }
        }
        points.len()
    };
    assert_eq!(distinct(Complex64::new(0.3, -0.7), 0), 1 << (N + 1));
    for m in 0..=N as i64 {
        assert_eq!(distinct(Complex64::new(0.0, -(m as f64 + 0.5)), m), 1 << N, "m = {m}");
    }
}

#[test]
fn residue_counts_match_the_region_bounds() {
    let atlas = CoverAtlas::new(N);
    let mut checked = 0;
    for j in 0..300 {
        let v = 0.5 + 0.01 * j as f64 + 0.005;
        let Ok(r) = atlas.r_for(v) else { continue };
        let set = enumerate_s_nonnegative(r, Complex64::new(0.0, -v)).unwrap();
        let fl = v.floor();
        let expected = if fl + 0.5 <= v { fl as i64 } else { fl as i64 - 1 };
        assert_eq!(set, (0..=expected).collect::<Vec<_>>(), "v = {v}, r = {r}");
        checked += 1;
    }
    assert!(checked > 250);
}

#[test]
fn atlas_radii_respect_the_bounds() {
    let atlas = CoverAtlas::new(N);
    for j in 0..300 {
        let v = 0.5 + 0.01 * j as f64 + 0.005;
        let r = atlas.r_for(v).unwrap();
        let cr = 0.5 * (r + 1.0 / r);
        assert!(cr < atlas.c_bound(v) - atlas.margin + 1e-12);
        assert!(cr < 1.0 + 1.0 / (2.0 * N as f64 + 3.0));
    }
    // Neighbouring regions never share a branch point.
    for m in -1..N as i64 {
        for n in 0..=N as i64 + 1 {
            let b = Complex64::new(0.0, -(n as f64 + 0.5));
            assert!(!(atlas.contains(b, m) && atlas.contains(b, m + 1)), "m = {m}, n = {n}");
        }
    }
}

#[test]
fn lifted_resolvent_on_the_physical_sheet() {
    let symbol = symbol();
    let integrator = Integrator::sequential();
    let engine = ResolventEngine::new(&integrator, symbol.clone(), ResolventConfig::for_beta(0.5)).unwrap();
    let lifted = LiftedResolvent::full(CoverAtlas::new(N), integrator, &engine);
    let rho = rho_x();
    for z in [Complex64::new(0.2, -0.4) * rho, Complex64::new(0.05, -0.9) * rho, Complex64::new(-0.06, -1.8) * rho] {
        let a = lifted.physical_value(z).unwrap();
        let b = engine.r_below(z).unwrap().value;
        assert!(rel(a, b) < 1e-7, "{z}: {a} vs {b}");
    }
}

#[test]
fn branch_constants() {
    assert!((BRANCH_CONSTANT - PI * PI / 6.0).abs() < 1e-15);
    assert!((BRANCH_CONSTANT - 12.0 * PI * PI / (rho_x() * rho_x() * 6.0)).abs() < 1e-15);
    for n in 0..2 {
        let (z, _) = scaled_chart_inverse(n, Complex64::new(0.0, 0.0)).unwrap();
        assert!((z - Complex64::new(0.0, -(n as f64 + 0.5) * 2.0 * 3f64.sqrt())).norm() < 1e-14);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chart_round_trip(re in -0.9f64..0.9, im in -0.9f64..0.9, n in 0i64..4) {
        let zeta = Complex64::new(re, im);
        let (z, back) = chart_kappa_inverse(n, ChartSign::Minus, zeta).unwrap();
        prop_assert!((chart_kappa(n, ChartSign::Minus, z, back).unwrap() - zeta).norm() < 1e-13);
        prop_assert!(on_surface(n, z, back) < 1e-13);
    }

    #[test]
    fn signatures_round_trip_through_sections(re in 0.02f64..0.15, v in 0.1f64..3.4, bits in 0usize..8) {
        let atlas = CoverAtlas::new(N);
        let z = Complex64::new(re, -v);
        let eps = SheetSignature::enumerate(N)[bits].clone();
        if let Some(m) = atlas.region_of(z) {
            let p = atlas.section(z, m, &eps).unwrap();
            prop_assert_eq!(atlas.signature(&p, m).unwrap(), eps);
        }
    }
}
