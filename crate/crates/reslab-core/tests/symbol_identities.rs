use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reslab_core::algebra::{polar_param, RootSystemA2, SpectralParam};
use reslab_core::branch::c;
use reslab_core::spherical::BasePoint;
use reslab_core::symbols::{
    check_symbol, gamma_x, gamma_x_cosine, gaussian_envelope, integrand, integrand_assembled, is_reducible,
    make_gaussian_symbol, make_spherical_symbol, plancherel_density, plancherel_density_at, rotation_sum,
    rotation_sum_closed_form, GaussianSymbol, PrefactorTerm, SixthRoot, SpectralSymbol,
};

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
}

/// Deviation measured against the natural size `(1 + |λ|²)³` of the density,
/// which vanishes on the walls.
fn density_gap(a: Complex64, b: Complex64, lambda: &SpectralParam) -> f64 {
    let size = 1.0 + lambda.x1.norm_sqr() + lambda.x2.norm_sqr();
    (a - b).norm() / size.powi(3)
}

fn sample_zw(rng: &mut ChaCha8Rng) -> (Complex64, Complex64) {
    let z = Complex64::new(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5));
    let w = Complex64::from_polar(rng.random_range(0.3..1.7), rng.random_range(-PI..PI));
    (z, w)
}

fn prefactor() -> Vec<PrefactorTerm> {
    vec![
        PrefactorTerm { coeff: 1.0, p2: 0, p3: 0 },
        PrefactorTerm { coeff: 0.3, p2: 1, p3: 0 },
        PrefactorTerm { coeff: -0.2, p2: 0, p3: 1 },
    ]
}

fn families() -> Vec<SpectralSymbol> {
    let h = GaussianSymbol::new(0.4, prefactor()).unwrap();
    vec![
        make_gaussian_symbol(0.4, prefactor()).unwrap(),
        make_spherical_symbol(h, BasePoint::from_diagonal([0.4, -0.1, -0.3]).unwrap(), 12).unwrap(),
    ]
}

#[test]
fn rotation_sum_identity_for_both_families() {
    for symbol in families() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut worst: f64 = 0.0;
        let mut used = 0;
        while used < 100 {
            let (z, w) = sample_zw(&mut rng);
            let (Ok(lhs), Ok(rhs)) = (rotation_sum(&symbol, z, w), rotation_sum_closed_form(&symbol, z, w)) else {
                continue;
            };
            worst = worst.max(rel(lhs, rhs));
            used += 1;
        }
        assert!(worst < 1e-11, "{:?}: {worst:e}", symbol.family());
    }
}

#[test]
fn integrand_assembly_matches_the_product_form() {
    for symbol in families() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..100 {
            let (z, w) = sample_zw(&mut rng);
            let (Ok(a), Ok(b)) = (integrand(&symbol, z, w), integrand_assembled(&symbol, z, w)) else { continue };
            assert!(rel(a, b) < 1e-12, "{z} {w}");
        }
    }
}

#[test]
fn plancherel_density_polar_and_root_forms_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..200 {
        let (z, w) = sample_zw(&mut rng);
        let lambda = polar_param(z, w).unwrap();
        let (Ok(a), Ok(b)) = (plancherel_density(&lambda), plancherel_density_at(z, w)) else { continue };
        assert!(rel(a, b) < 1e-10, "{z} {w}: {a} vs {b}");
    }
    // Real polar point (r, w) = (0.9, e^{0.2i}): the density is r³Π c(uw) th(πr c(uw)).
    let (r, w) = (Complex64::new(0.9, 0.0), Complex64::from_polar(1.0, 0.2));
    let mut expected = r * r * r;
    for u in SixthRoot::TRIPLE {
        let cu = c(u.value() * w).unwrap();
        expected *= cu * (r * cu * PI).tanh();
    }
    let got = plancherel_density(&polar_param(r, w).unwrap()).unwrap();
    assert!(rel(got, expected) < 1e-12);
}

#[test]
fn plancherel_density_is_weyl_invariant() {
    let roots = RootSystemA2::new();
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for _ in 0..50 {
        let lambda = SpectralParam::from_real([rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)]);
        let base = plancherel_density(&lambda).unwrap();
        for image in roots.weyl_orbit(&lambda) {
            assert!(density_gap(plancherel_density(&image).unwrap(), base, &lambda) < 1e-13);
        }
    }
}

#[test]
fn gamma_x_forms_agree_and_equal_eight_pi_sixth_at_the_origin() {
    let origin = SpectralParam::zero();
    let expected = 8.0 * PI.powi(6);
    assert!((gamma_x(&origin).unwrap().re / expected - 1.0).abs() < 1e-10);
    assert!((gamma_x_cosine(&origin).unwrap().re / expected - 1.0).abs() < 1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    for _ in 0..100 {
        let lambda = SpectralParam::new(
            Complex64::new(rng.random_range(-1.2..1.2), rng.random_range(-1.2..1.2)),
            Complex64::new(rng.random_range(-1.2..1.2), rng.random_range(-1.2..1.2)),
        );
        if is_reducible(&lambda, 1e-3) {
            continue;
        }
        let a = gamma_x(&lambda).unwrap();
        let b = gamma_x_cosine(&lambda).unwrap();
        assert!(rel(a, b) < 1e-10, "{lambda:?}");
    }
}

#[test]
fn gamma_x_rejects_rho_and_flags_reducibility() {
    let rho = RootSystemA2::new().rho_param();
    assert!(gamma_x_cosine(&rho).is_err());
    assert!(is_reducible(&rho, 1e-12));
    assert!(!is_reducible(&SpectralParam::zero(), 1e-12));
}

#[test]
fn gaussian_symbol_exponent_is_rotation_free() {
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    for _ in 0..1000 {
        let w = Complex64::from_polar(rng.random_range(0.1..3.0), rng.random_range(-PI..PI));
        let sum: Complex64 = SixthRoot::TRIPLE.iter().map(|u| c(u.value() * w).unwrap().powi(2)).sum();
        assert!((sum - 1.5).norm() < 1e-10 * w.norm_sqr().max(w.norm_sqr().recip()));
    }
    let plain = make_gaussian_symbol(0.7, vec![]).unwrap();
    let z = Complex64::new(0.8, -0.3);
    let expected = (-(1.5 * 0.7) * z * z).exp();
    for k in 0..12 {
        let w = Complex64::from_polar(0.5 + 0.1 * k as f64, 0.37 * k as f64);
        assert!(rel(plain.evaluate(z, w).unwrap(), expected) < 1e-13);
    }
}

#[test]
fn gaussian_symbol_is_even_and_bounded_by_its_envelope() {
    let symbol = make_gaussian_symbol(0.4, prefactor()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(27);
    for _ in 0..200 {
        let (z, w) = sample_zw(&mut rng);
        assert_eq!(symbol.evaluate(-z, w).unwrap(), symbol.evaluate(z, w).unwrap());
    }
    // On rays |arg z| < π/4 the symbol is the envelope times a polynomial in |z|.
    let plain = make_gaussian_symbol(0.4, vec![]).unwrap();
    for k in 1..40 {
        let z = Complex64::from_polar(0.25 * k as f64, 0.6);
        let v = plain.evaluate(z, Complex64::new(1.0, 0.0)).unwrap();
        assert!((v.norm() / gaussian_envelope(0.4, z) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn spherical_symbol_at_the_origin_reduces_to_the_transform() {
    let h = GaussianSymbol::new(0.4, prefactor()).unwrap();
    let symbol = make_spherical_symbol(h.clone(), BasePoint::origin(), 8).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(28);
    for _ in 0..50 {
        let (z, w) = sample_zw(&mut rng);
        let expected = h.transform(&polar_param(z, w).unwrap());
        assert!(rel(symbol.evaluate(z, w).unwrap(), expected) < 1e-12);
        assert!(rel(expected, make_gaussian_symbol(0.4, prefactor()).unwrap().evaluate(z, w).unwrap()) < 1e-12);
    }
}

#[test]
fn shipped_families_pass_the_structural_gate() {
    for symbol in families() {
        let report = check_symbol(&symbol).unwrap();
        assert!(report.passed(), "{:?}: {report:?}", symbol.family());
    }
}

#[test]
fn custom_symbols_must_pass_the_gate() {
    let even = Arc::new(|z: Complex64, _w: Complex64| Ok((-(z * z)).exp()));
    assert!(SpectralSymbol::custom(even).is_ok());
    let odd = Arc::new(|z: Complex64, _w: Complex64| Ok(z * (-(z * z)).exp()));
    assert!(SpectralSymbol::custom(odd).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn symbol_is_even_in_both_variables(zr in -1.5f64..1.5, zi in -1.5f64..1.5, r in 0.3f64..2.0, t in -3.1f64..3.1) {
        let symbol = make_gaussian_symbol(0.4, prefactor()).unwrap();
        let z = Complex64::new(zr, zi);
        let w = Complex64::from_polar(r, t);
        let s = symbol.evaluate(z, w).unwrap();
        prop_assert!(rel(symbol.evaluate(z, -w).unwrap(), s) < 1e-12);
        prop_assert!(rel(symbol.evaluate(z, 1.0 / w).unwrap(), s) < 1e-10);
    }

    #[test]
    fn density_is_weyl_invariant(a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let lambda = SpectralParam::from_real([a, b]);
        let base = plancherel_density(&lambda).unwrap();
        for image in RootSystemA2::new().weyl_orbit(&lambda) {
            prop_assert!(density_gap(plancherel_density(&image).unwrap(), base, &lambda) < 1e-13);
        }
    }
}
