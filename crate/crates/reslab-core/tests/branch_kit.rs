use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reslab_core::branch::{
    c, c_inv, c_inv_side, enumerate_s, residue_condition_holds, s, s_of_c_inv, s_of_c_inv_side, two_sqrt_product,
    two_sqrt_product_side, EllipseSpec, Side,
};

fn random_off_cut(rng: &mut ChaCha8Rng) -> Complex64 {
    loop {
        let z = Complex64::from_polar(
            rng.random_range(0.05..5.0),
            rng.random_range(-std::f64::consts::PI..std::f64::consts::PI),
        );
        if z.im.abs() > 1e-6 || z.re.abs() > 1.0 + 1e-6 {
            return z;
        }
    }
}

#[test]
fn c_inv_inverts_c_on_a_thousand_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let z = random_off_cut(&mut rng);
        let w = c_inv(z).unwrap();
        assert!(w.norm() < 1.0, "c_inv must land in the unit disk: {w}");
        worst = worst.max((c(w).unwrap() - z).norm() / z.norm().max(1.0));
    }
    assert!(worst < 1e-12, "round-trip residual {worst:e}");
}

#[test]
fn two_sqrt_product_is_odd_and_squares_to_z_squared_minus_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..1000 {
        let z = random_off_cut(&mut rng);
        let f = two_sqrt_product(z).unwrap();
        assert_eq!(two_sqrt_product(-z).unwrap(), -f);
        let residual = (f * f - (z * z - 1.0)).norm() / (z.norm_sqr()).max(1.0);
        assert!(residual < 1e-13, "{z}: {residual:e}");
    }
}

#[test]
fn boundary_values_on_the_cut_match_the_closed_form() {
    for k in 0..=40 {
        let x = -0.975 + 0.05 * k as f64 - if k == 40 { 0.05 } else { 0.0 };
        let root = (1.0 - x * x).sqrt();
        let above = c_inv_side(Complex64::new(x, 0.0), Side::Above);
        let below = c_inv_side(Complex64::new(x, 0.0), Side::Below);
        assert!((above - Complex64::new(x, -root)).norm() < 1e-15);
        assert!((below - Complex64::new(x, root)).norm() < 1e-15);
        // The one-sided values are limits of the function off the cut.
        let eps = 1e-10;
        let from_above = c_inv(Complex64::new(x, eps)).unwrap();
        let from_below = c_inv(Complex64::new(x, -eps)).unwrap();
        assert!((from_above - above).norm() < 1e-8, "x = {x}");
        assert!((from_below - below).norm() < 1e-8, "x = {x}");
        let tsp = two_sqrt_product_side(Complex64::new(x, 0.0), Side::Above);
        assert!((tsp - two_sqrt_product(Complex64::new(x, eps)).unwrap()).norm() < 1e-8);
        assert_eq!(
            s_of_c_inv_side(Complex64::new(x, 0.0), Side::Below),
            -two_sqrt_product_side(Complex64::new(x, 0.0), Side::Below)
        );
    }
}

#[test]
fn s_of_c_inv_agrees_with_the_composition() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..500 {
        let z = random_off_cut(&mut rng);
        let direct = s(c_inv(z).unwrap()).unwrap();
        let closed = s_of_c_inv(z).unwrap();
        assert!((direct - closed).norm() < 1e-12 * z.norm().max(1.0));
    }
}

#[test]
fn cut_points_are_rejected() {
    assert!(two_sqrt_product(Complex64::new(0.3, 0.0)).is_err());
    assert!(c_inv(Complex64::new(-1.0, 0.0)).is_err());
    assert!(c(Complex64::new(0.0, 0.0)).is_err());
}

#[test]
fn ellipse_semi_axes_and_membership() {
    let e = EllipseSpec::new(0.5).unwrap();
    assert!((e.semi_major() - 1.25).abs() < 1e-15);
    assert!((e.semi_minor() - 0.75).abs() < 1e-15);
    assert!(e.contains(Complex64::new(1.2, 0.0)));
    assert!(!e.contains(Complex64::new(0.0, 0.8)));
    for k in 0..16 {
        let p = e.boundary_point(k as f64 * 0.4);
        assert!((e.level(p) - 1.0).abs() < 1e-12);
    }
    let back = EllipseSpec::from_semi_axis(1.25).unwrap();
    assert!((back.r() - 0.5).abs() < 1e-14);
}

#[test]
fn s_sets_are_symmetric_under_reflection_of_the_index() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..200 {
        let z = Complex64::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        let r = rng.random_range(0.1..0.95);
        if !residue_condition_holds(z, r).unwrap() {
            continue;
        }
        let set = enumerate_s(r, z).unwrap();
        for n in &set {
            assert!(set.contains(&(-n - 1)), "S({r}, {z}) = {set:?}");
            // Membership by definition of the set.
            let q = Complex64::new(0.0, *n as f64 + 0.5) / z;
            assert!(EllipseSpec::new(r).unwrap().contains(q));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn c_inv_round_trip(re in -4.0f64..4.0, im in -4.0f64..4.0) {
        let z = Complex64::new(re, im);
        prop_assume!(im.abs() > 1e-6 || re.abs() > 1.0 + 1e-6);
        let w = c_inv(z).unwrap();
        prop_assert!((c(w).unwrap() - z).norm() < 1e-12 * z.norm().max(1.0));
    }

    #[test]
    fn two_sqrt_product_parity(re in -4.0f64..4.0, im in -4.0f64..4.0) {
        let z = Complex64::new(re, im);
        prop_assume!(im != 0.0 || re.abs() > 1.0);
        prop_assert_eq!(two_sqrt_product(-z).unwrap(), -two_sqrt_product(z).unwrap());
    }
}
