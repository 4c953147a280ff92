//! Elementary numerics shared by the modules: real functions through `libm`,
//! a guarded `th(π v)`, the complex Gamma function and Gauss–Legendre rules.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{CoreError, Result};

/// Imaginary unit.
pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
/// Complex one.
pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
/// Complex zero.
pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
/// `√3`.
pub const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// Guard band around the poles `i(Z+1/2)` of `th(π v)`.
pub const TH_POLE_GUARD: f64 = 1e-9;

/// Real square root.
#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

/// Real exponential.
#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

/// Real natural logarithm.
#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

/// Real cosine.
#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

/// Real sine.
#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

/// Largest integer not above `x`.
#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

/// Nearest integer (ties away from zero).
#[inline]
pub fn round(x: f64) -> f64 {
    libm::round(x)
}

/// `⌊x⌋` as an integer (saturating for huge inputs).
#[inline]
pub fn floor_i64(x: f64) -> i64 {
    libm::floor(x) as i64
}

/// `⌈x⌉` as an integer (saturating for huge inputs).
#[inline]
pub fn ceil_i64(x: f64) -> i64 {
    libm::ceil(x) as i64
}

/// `e^{iθ}`.
#[inline]
pub fn cis(theta: f64) -> Complex64 {
    Complex64::new(cos(theta), sin(theta))
}

/// Distance from `v` to the nearest point of `i(Z+1/2)`.
pub fn distance_to_half_integer_axis(v: Complex64) -> f64 {
    let nearest = floor(v.im) + 0.5;
    libm::hypot(v.re, v.im - nearest)
}

/// `th(π v)` with the imaginary part reduced modulo 1 (the period of
/// `v ↦ th(π v)`), evaluated through a single exponential of non-positive real
/// part, and with a guard band around the poles `v ∈ i(Z+1/2)`.
pub fn th_pi(v: Complex64) -> Result<Complex64> {
    let dist = distance_to_half_integer_axis(v);
    if dist < TH_POLE_GUARD {
        return Err(CoreError::PoleProximity { location: v, distance: dist });
    }
    let reduced = Complex64::new(v.re, v.im - round(v.im));
    let a = reduced * PI;
    if a.re >= 0.0 {
        let e = (-2.0 * a).exp();
        Ok((ONE - e) / (ONE + e))
    } else {
        let e = (2.0 * a).exp();
        Ok(-(ONE - e) / (ONE + e))
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Complex Gamma function (Lanczos, `g = 7`, with the reflection formula on
/// the left half-plane). Relative accuracy is about `1e-14` for moderate
/// arguments.
pub fn gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let s = (z * PI).sin();
        Complex64::new(PI, 0.0) / (s * gamma(ONE - z))
    } else {
        let z = z - 1.0;
        let mut x = Complex64::new(LANCZOS_COEF[0], 0.0);
        for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
            x += c / (z + i as f64);
        }
        let t = z + LANCZOS_G + 0.5;
        let log_t = t.ln();
        sqrt(2.0 * PI) * ((z + 0.5) * log_t - t).exp() * x
    }
}

/// Gauss–Legendre rule on `[-1, 1]`: returns `(nodes, weights)` with nodes in
/// increasing order. Nodes are computed by Newton iteration on the Legendre
/// recurrence and are accurate to machine precision.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1, "Gauss–Legendre order must be positive");
    let n = order;
    let mut nodes = alloc::vec![0.0; n];
    let mut weights = alloc::vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss–Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_interval(order: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(order);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    (x.iter().map(|t| mid + half * t).collect(), w.iter().map(|v| v * half).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(12);
        for k in 0..24usize {
            let q: f64 = x.iter().zip(&w).map(|(t, v)| v * libm::pow(*t, k as f64)).sum();
            let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
            assert!((q - exact).abs() < 1e-14, "degree {k}: {q} vs {exact}");
        }
    }

    #[test]
    fn gamma_matches_factorials_and_reflection() {
        for n in 1..15 {
            let fact: f64 = (1..n).map(|k| k as f64).product();
            let g = gamma(Complex64::new(n as f64, 0.0));
            assert!((g.re / fact - 1.0).abs() < 1e-13);
        }
        let half = gamma(Complex64::new(0.5, 0.0));
        assert!((half.re - sqrt(PI)).abs() < 1e-14);
        let z = Complex64::new(0.3, 1.7);
        let lhs = gamma(z) * gamma(ONE - z);
        let rhs = Complex64::new(PI, 0.0) / (z * PI).sin();
        assert!((lhs - rhs).norm() / rhs.norm() < 1e-13);
    }

    #[test]
    fn th_pi_is_periodic_and_guarded() {
        let v = Complex64::new(0.37, 0.21);
        let a = th_pi(v).unwrap();
        let b = th_pi(v + I * 3.0).unwrap();
        assert!((a - b).norm() < 1e-15);
        assert!((a - (v * PI).tanh()).norm() < 1e-15);
        assert!(th_pi(Complex64::new(0.0, 2.5)).is_err());
        assert!(th_pi(Complex64::new(40.0, 0.1)).unwrap().re > 0.999_999);
    }
}
