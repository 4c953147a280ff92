use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reslab_core::algebra::rho_x;
use reslab_core::branch::{c, c_inv, enumerate_s, EllipseSpec};
use reslab_core::contour::{
    g_n, radius_for_semi_axis, resolvent_scale, ContourKind, Integrator, ResolventConfig, ResolventEngine,
};
use reslab_core::spherical::BasePoint;
use reslab_core::symbols::{
    integrand, make_gaussian_symbol, make_spherical_symbol, GaussianSymbol, PrefactorTerm, SixthRoot, SpectralSymbol,
};

const BETA: f64 = 0.5;

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
}

fn gaussian() -> SpectralSymbol {
    make_gaussian_symbol(BETA, vec![]).unwrap()
}

fn with_prefactor() -> SpectralSymbol {
    make_gaussian_symbol(
        BETA,
        vec![PrefactorTerm { coeff: 1.0, p2: 0, p3: 0 }, PrefactorTerm { coeff: 0.25, p2: 1, p3: 0 }],
    )
    .unwrap()
}

/// Distance of the ellipse level of every `i(n+1/2)/z` from the boundary;
/// keeps the grid away from residues sitting on the deformed contour.
fn level_margin(z: Complex64, r: f64) -> f64 {
    let e = EllipseSpec::new(r).unwrap();
    (-40..40).map(|n| (e.level(Complex64::new(0.0, n as f64 + 0.5) / z) - 1.0).abs()).fold(f64::INFINITY, f64::min)
}

/// `count` seeded points `(z, r)` with `z ∉ iR`, `|z| ≤ 2.5`, well-separated
/// residues, and at least a third of them crossing residues.
fn admissible_grid(seed: u64, count: usize) -> Vec<(Complex64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let z = Complex64::from_polar(rng.random_range(0.2..2.5), rng.random_range(-PI..PI));
        if z.re.abs() < 0.05 {
            continue;
        }
        let r = rng.random_range(0.3..0.9);
        if level_margin(z, r) < 0.05 {
            continue;
        }
        let crossing = !enumerate_s(r, z).unwrap().is_empty();
        if !crossing && out.len() % 3 == 0 {
            continue;
        }
        out.push((z, r));
    }
    out
}

/// Plain trapezoidal sum of the integrand, assembled here from `c`, `tanh`
/// and the symbol alone.
fn f_oracle(symbol: &SpectralSymbol, z: Complex64, nodes: usize) -> Complex64 {
    let i = Complex64::i();
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..nodes {
        let theta = 2.0 * PI * (j as f64 + 0.25) / nodes as f64;
        let w = Complex64::from_polar(1.0, theta);
        let mut value = symbol.evaluate(z, w).unwrap() * (i * w) * (i * w) / (2.0 * PI);
        for k in [0.0, 1.0, 2.0] {
            let cu = c(Complex64::from_polar(1.0, k * PI / 3.0) * w).unwrap();
            value *= z * cu / (i * w) * (PI * z * cu).tanh();
        }
        acc += value * i * w;
    }
    acc * (2.0 * PI / nodes as f64)
}

#[test]
fn deformation_identity_on_a_seeded_grid() {
    let integrator = Integrator::sequential();
    let symbol = gaussian();
    let grid = admissible_grid(7, 20);
    let mut crossed = 0;
    for (z, r) in grid {
        let report = integrator.check_decomposition(&symbol, z, r).unwrap();
        assert!(report.passed(), "z = {z}, r = {r}: {:e}", report.rel_residual);
        crossed += usize::from(!report.s_set.is_empty());
    }
    assert!(crossed >= 10, "only {crossed} grid points cross residues");
}

#[test]
fn deformation_identity_for_prefactor_and_spherical_symbols() {
    let integrator = Integrator::sequential();
    let h = GaussianSymbol::new(BETA, vec![]).unwrap();
    let spherical = make_spherical_symbol(h, BasePoint::from_diagonal([0.3, -0.1, -0.2]).unwrap(), 12).unwrap();
    for symbol in [with_prefactor(), spherical] {
        for (z, r) in admissible_grid(8, 3) {
            let report = integrator.check_decomposition(&symbol, z, r).unwrap();
            assert!(report.passed(), "{:?} z = {z}: {:e}", symbol.family(), report.rel_residual);
        }
    }
}

#[test]
fn deformation_identity_at_the_reference_point() {
    let z = Complex64::from_polar(0.9, -PI / 6.0);
    let r = radius_for_semi_axis(1.2).unwrap();
    let report = Integrator::sequential().check_decomposition(&gaussian(), z, r).unwrap();
    assert!(report.rel_residual < 1e-8);
    // i/(2z) lies inside z-scaled ellipse: the residues n = 0 and n = −1 are crossed.
    let mut set = report.s_set.clone();
    set.sort_unstable();
    assert_eq!(set, vec![-1, 0]);
}

#[test]
fn deformation_identity_at_the_origin() {
    let report = Integrator::sequential().check_decomposition(&gaussian(), Complex64::new(0.0, 0.0), 0.5).unwrap();
    assert_eq!(report.f, Complex64::new(0.0, 0.0));
    assert_eq!(report.f_r, Complex64::new(0.0, 0.0));
    assert!(report.passed());
}

#[test]
fn f_is_even_and_flat_at_the_origin() {
    let integrator = Integrator::sequential();
    let symbol = with_prefactor();
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..20 {
        let z = Complex64::new(rng.random_range(-1.5..1.5), rng.random_range(-0.45..0.45));
        let a = integrator.f_unit(&symbol, z).unwrap().value;
        let b = integrator.f_unit(&symbol, -z).unwrap().value;
        assert!(rel(a, b) < 1e-11, "{z}");
    }
    let direction = Complex64::from_polar(1.0, 0.4);
    let sixth = |t: f64| {
        let z = direction * t;
        integrator.f_unit(&symbol, z).unwrap().value / z.powi(6)
    };
    let (near, nearer) = (sixth(1e-2), sixth(1e-3));
    let ratio = near.norm() / nearer.norm();
    assert!((0.1..10.0).contains(&ratio), "|F/z⁶| ratio {ratio}");
    assert_eq!(integrator.f_unit(&symbol, Complex64::new(0.0, 0.0)).unwrap().value, Complex64::new(0.0, 0.0));
}

#[test]
fn f_agrees_with_a_plain_trapezoid_sum() {
    let integrator = Integrator::sequential();
    for symbol in [gaussian(), with_prefactor()] {
        for z in [Complex64::new(0.7, -0.2), Complex64::new(1.4, 0.3), Complex64::new(-0.4, 0.1)] {
            let value = integrator.f_unit(&symbol, z).unwrap().value;
            let oracle = f_oracle(&symbol, z, 4096);
            assert!(rel(value, oracle) < 1e-10, "{z}: {value} vs {oracle}");
        }
    }
}

#[test]
fn f_reference_value() {
    // Frozen from the plain trapezoid oracle with 4096 nodes.
    let z = Complex64::new(0.7, -0.2);
    let value = Integrator::sequential().f_unit(&gaussian(), z).unwrap().value;
    let frozen = Complex64::new(F_REF.0, F_REF.1);
    assert!(rel(value, frozen) < 1e-10, "{value:?}");
}

const F_REF: (f64, f64) = (0.014497370002358517, -0.01936782760536414);

#[test]
fn f_rejects_the_excluded_half_lines() {
    let integrator = Integrator::sequential();
    assert!(integrator.f_unit(&gaussian(), Complex64::new(0.0, 0.5)).is_err());
    assert!(integrator.f_unit(&gaussian(), Complex64::new(0.0, -2.0)).is_err());
    assert!(integrator.f_r(&gaussian(), Complex64::new(1.0, 0.0), 0.2).is_ok());
}

#[test]
fn g_n_symmetries() {
    let symbol = with_prefactor();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..30 {
        let z = Complex64::new(rng.random_range(0.1..2.0), rng.random_range(-2.0..2.0));
        for n in 0..3 {
            let g = g_n(&symbol, n, z).unwrap();
            assert!(rel(g, g_n(&symbol, -n - 1, z).unwrap()) < 1e-11);
            assert!(rel(g, g_n(&symbol, n, -z).unwrap()) < 1e-11);
        }
    }
    assert!(g_n(&symbol, 0, Complex64::new(0.0, -1.0)).is_err());
}

#[test]
fn g_n_is_the_residue_sum_over_the_three_rotated_poles() {
    let integrator = Integrator::sequential();
    let symbol = with_prefactor();
    for (n, z) in [(0i64, Complex64::new(0.8, -0.6)), (1, Complex64::new(1.3, 0.4)), (-2, Complex64::new(-0.9, 1.7))] {
        let w0 = c_inv(Complex64::new(0.0, n as f64 + 0.5) / z).unwrap();
        let mut residues = Complex64::new(0.0, 0.0);
        for u in SixthRoot::TRIPLE {
            let center = w0 / u.value();
            let kind = ContourKind::ChartCircle { center, radius: 1e-2 };
            residues += integrator.closed(kind, &|w| integrand(&symbol, z, w)).unwrap().value;
        }
        residues /= Complex64::new(0.0, 2.0 * PI);
        let g = g_n(&symbol, n, z).unwrap();
        assert!(rel(residues, g) < 1e-8, "{n} {z}: {residues} vs {g}");
    }
}

#[test]
fn s_sets_match_a_brute_force_pole_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for _ in 0..200 {
        let z = Complex64::from_polar(rng.random_range(0.1..4.0), rng.random_range(-PI..PI));
        let r = rng.random_range(0.1..0.95);
        if z.re.abs() < 1e-3 || level_margin(z, r) < 1e-9 {
            continue;
        }
        let e = EllipseSpec::new(r).unwrap();
        // Residues of the annulus r < |w| < 1 sit where z·c(w) ∈ i(Z + 1/2);
        // count the half-integers by scanning the image of the annulus.
        let mut brute: Vec<i64> = (-200..200)
            .filter(|&n| {
                let q = Complex64::new(0.0, n as f64 + 0.5) / z;
                c_inv(q).map(|w| w.norm() > r).unwrap_or(false) && e.contains(q)
            })
            .collect();
        brute.sort_unstable();
        let mut set = enumerate_s(r, z).unwrap();
        set.sort_unstable();
        assert_eq!(set, brute, "z = {z}, r = {r}");
    }
}

fn engine(symbol: SpectralSymbol) -> ResolventEngine {
    ResolventEngine::new(&Integrator::sequential(), symbol, ResolventConfig::for_beta(BETA)).unwrap()
}

#[test]
fn resolvent_continuation_agrees_with_the_half_line_formula_on_the_overlap() {
    let engine = engine(gaussian());
    let rho = rho_x();
    for k in 0..10 {
        let z = Complex64::new(0.3 + 0.35 * k as f64, 0.05 + 0.04 * (k % 5) as f64);
        assert!(engine.below_gamma_plus(z), "{z}");
        let upper = engine.r_upper(z * rho).unwrap();
        let below = engine.r_below(z * rho).unwrap();
        assert!(rel(upper.value, below.value) < 1e-7, "{z}: {} vs {}", upper.value, below.value);
    }
}

#[test]
fn resolvent_is_continuous_across_the_positive_axis() {
    let engine = engine(gaussian());
    let rho = rho_x();
    for x in [0.4, 1.0, 2.2] {
        let eps = 1e-7;
        let above = engine.r_below(Complex64::new(x, eps) * rho).unwrap().value;
        let below = engine.r_below(Complex64::new(x, -eps) * rho).unwrap().value;
        assert!(rel(above, below) < 1e-5, "x = {x}");
        let upper = engine.r_upper(Complex64::new(x, eps) * rho).unwrap().value;
        assert!(rel(upper, below) < 1e-5, "x = {x}");
    }
}

#[test]
fn resolvent_upper_half_plane_symmetries() {
    let engine = engine(gaussian());
    let z = Complex64::new(1.1, 0.7);
    let a = engine.r_upper(z).unwrap().value;
    let b = engine.r_upper(-z.conj()).unwrap().value;
    assert!(rel(b, a.conj()) < 1e-12);
    // Moving up a vertical ray away from the spectrum shrinks |R|.
    let lower = engine.r_upper(Complex64::new(2.0, 0.5)).unwrap().value.norm();
    let higher = engine.r_upper(Complex64::new(2.0, 3.0)).unwrap().value.norm();
    assert!(higher < lower);
}

#[test]
fn logarithmic_jump_below_the_axis() {
    let engine = engine(gaussian());
    let coefficient = 2.0 * PI / resolvent_scale();
    for big_z in [
        Complex64::new(0.8, -0.5),
        Complex64::new(2.5, -1.2),
        Complex64::new(-1.7, -0.9),
        Complex64::new(0.3, -2.6),
        Complex64::new(4.0, -0.3),
    ] {
        let principal = engine.r_below(big_z).unwrap().value;
        let rotated = engine.r_rotated(big_z).unwrap().value;
        let f = engine.f_scaled(big_z).unwrap();
        let expected = -Complex64::i() * coefficient * f;
        assert!(rel(rotated - principal, expected) < 1e-6, "{big_z}");
    }
}

#[test]
fn resolvent_rejects_points_outside_its_representations() {
    let engine = engine(gaussian());
    assert!(engine.r_upper(Complex64::new(1.0, -0.1)).is_err());
    assert!(engine.r_below(Complex64::new(0.0, -2.0 * rho_x())).is_err());
    assert!(engine.r_rotated(Complex64::new(1.0, 0.2)).is_err());
    assert!(!engine.below_gamma_plus(Complex64::new(0.1, 0.9)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn f_is_even(re in -1.5f64..1.5, im in -0.45f64..0.45) {
        let integrator = Integrator::sequential();
        let symbol = gaussian();
        let z = Complex64::new(re, im);
        let a = integrator.f_unit(&symbol, z).unwrap().value;
        let b = integrator.f_unit(&symbol, -z).unwrap().value;
        prop_assert!((a - b).norm() <= 1e-11 * a.norm().max(1e-300));
    }
}
