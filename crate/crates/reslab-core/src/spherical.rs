//! Harish-Chandra spherical functions of `SL(3,R)/SO(3)` by quadrature over
//! `K = SO(3)`.
//!
//! Convention: for `g = k·exp(H(g))·n` (Gram–Schmidt on the columns of `g`),
//!
//! ```text
//! φ_μ(exp(H)·o) = ∫_K e^{(μ−ρ)(H(exp(H)k))} dk ,
//! ```
//!
//! so that `φ_{±ρ} ≡ 1`, `φ_{wμ} = φ_μ` for the Weyl group, and purely imaginary
//! `μ` give the bounded (unitary) spherical functions. The spectral symbol of a
//! real parameter `λ` therefore uses `φ_{±𝐢λ}`.
//!
//! The integral is discretised with `ZYZ` Euler angles and a Gauss–Legendre
//! rule per axis (Haar density `sin β/(8π²)`). The Iwasawa data of every node
//! are computed once per base point and order; evaluating `φ_μ` then costs one
//! complex exponential per node, summed in a fixed order.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::algebra::{PositiveRoot, SpectralParam};
use crate::error::{CoreError, Result};
use crate::math::{cos, exp, gauss_legendre_interval, ln, sin, sqrt, ZERO};

/// Real `3×3` matrix, row-major.
pub type Mat3 = [[f64; 3]; 3];

/// Pivot threshold of the Gram–Schmidt orthonormalisation.
pub const PIVOT_GUARD: f64 = 1e-12;
/// Largest Euler-angle order reached by refinement.
pub const MAX_ORDER: usize = 128;

/// A point `y = exp(H)·o` of the symmetric space given by its `a`-part
/// `H = diag(h₁, h₂, h₃)`, `Σ hⱼ = 0`, stored sorted in descending order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasePoint {
    h: [f64; 3],
}

impl BasePoint {
    /// Base point from `(h₁, h₂)` with `h₃ = −h₁ − h₂` (canonicalised by
    /// sorting; every `K`-orbit meets the diagonal, and the Weyl group
    /// permutes the entries).
    pub fn new(h1: f64, h2: f64) -> Result<Self> {
        BasePoint::from_diagonal([h1, h2, -h1 - h2])
    }

    /// Base point from a trace-zero diagonal (checked to `1e-12`).
    pub fn from_diagonal(h: [f64; 3]) -> Result<Self> {
        if !h.iter().all(|v| v.is_finite()) {
            return Err(CoreError::Domain("base point coordinates must be finite"));
        }
        if (h[0] + h[1] + h[2]).abs() > 1e-12 {
            return Err(CoreError::Domain("base point must have trace zero"));
        }
        let mut s = h;
        s.sort_unstable_by(|a, b| b.partial_cmp(a).unwrap_or(core::cmp::Ordering::Equal));
        Ok(BasePoint { h: s })
    }

    /// The origin `o`.
    pub fn origin() -> Self {
        BasePoint { h: [0.0; 3] }
    }

    /// Diagonal entries `(h₁, h₂, h₃)` (descending).
    pub fn diagonal(&self) -> [f64; 3] {
        self.h
    }

    /// Whether this is the origin.
    pub fn is_origin(&self) -> bool {
        self.h == [0.0; 3]
    }
}

/// Logarithm `(t₁, t₂, t₃)` of the `A`-part of the Iwasawa decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IwasawaLog {
    /// Diagonal entries (sum zero for `det g = 1`).
    pub t: [f64; 3],
}

/// Full Iwasawa decomposition `g = k·diag(e^{t})·n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Iwasawa {
    /// Orthogonal factor.
    pub k: Mat3,
    /// Log of the diagonal factor.
    pub log_a: IwasawaLog,
    /// Unit upper-triangular factor.
    pub n: Mat3,
}

fn det3(g: &Mat3) -> f64 {
    g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
        + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0])
}

fn gram_schmidt(g: &Mat3) -> Result<(Mat3, Mat3)> {
    // Columns q_j orthonormal, g = Q R with R upper triangular, R_jj > 0.
    let mut q = [[0.0; 3]; 3];
    let mut r = [[0.0; 3]; 3];
    for j in 0..3 {
        let mut v = [g[0][j], g[1][j], g[2][j]];
        for i in 0..j {
            let proj = q[0][i] * v[0] + q[1][i] * v[1] + q[2][i] * v[2];
            r[i][j] = proj;
            for row in 0..3 {
                v[row] -= proj * q[row][i];
            }
        }
        let norm = sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
        if norm < PIVOT_GUARD {
            return Err(CoreError::SingularPivot(norm));
        }
        r[j][j] = norm;
        for row in 0..3 {
            q[row][j] = v[row] / norm;
        }
    }
    Ok((q, r))
}

/// Iwasawa decomposition `g = k·a·n` by Gram–Schmidt on the columns of `g`.
pub fn iwasawa_decompose(g: &Mat3) -> Result<Iwasawa> {
    let det = det3(g);
    if (det - 1.0).abs() > 1e-10 {
        return Err(CoreError::Domain("matrix must have determinant 1"));
    }
    let (k, r) = gram_schmidt(g)?;
    let mut n = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            n[i][j] = r[i][j] / r[i][i];
        }
    }
    let t = [ln(r[0][0]), ln(r[1][1]), ln(r[2][2])];
    Ok(Iwasawa { k, log_a: IwasawaLog { t }, n })
}

/// `H(g)`: logarithm of the `A`-part of `g`.
pub fn iwasawa_log(g: &Mat3) -> Result<IwasawaLog> {
    Ok(iwasawa_decompose(g)?.log_a)
}

/// Matrix product.
pub fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
        }
    }
    m
}

/// `R_z(a)·R_y(b)·R_z(c)`.
pub fn euler_zyz(a: f64, b: f64, c: f64) -> Mat3 {
    let rz = |t: f64| [[cos(t), -sin(t), 0.0], [sin(t), cos(t), 0.0], [0.0, 0.0, 1.0]];
    let ry = [[cos(b), 0.0, sin(b)], [0.0, 1.0, 0.0], [-sin(b), 0.0, cos(b)]];
    mat_mul(&mat_mul(&rz(a), &ry), &rz(c))
}

#[derive(Debug, Clone, Copy)]
struct Node {
    t1: f64,
    t3: f64,
    /// Haar weight times `e^{−ρ(t)} = e^{t₃ − t₁}`.
    weight: f64,
}

/// Quadrature table of the `K`-integral at one base point and order.
#[derive(Debug, Clone)]
pub struct SphericalTable {
    base: BasePoint,
    order: usize,
    nodes: Vec<Node>,
}

fn mu_on_log(mu: &SpectralParam, t1: f64, t3: f64) -> Complex64 {
    mu.on_diagonal([t1, 0.0, t3])
}

impl SphericalTable {
    /// Precompute the Iwasawa data of the `order³` Euler-angle nodes.
    pub fn new(base: BasePoint, order: usize) -> Result<Self> {
        if order == 0 {
            return Err(CoreError::Domain("quadrature order must be positive"));
        }
        // α and γ are periodic: the equal-weight rule is spectrally accurate there.
        let step = 2.0 * PI / order as f64;
        let ga: Vec<f64> = (0..order).map(|k| (k as f64 + 0.5) * step).collect();
        let wa: Vec<f64> = (0..order).map(|_| step).collect();
        let (gb, wb) = gauss_legendre_interval(order, 0.0, PI);
        let h = base.diagonal();
        let a = [[exp(h[0]), 0.0, 0.0], [0.0, exp(h[1]), 0.0], [0.0, 0.0, exp(h[2])]];
        let mut nodes = Vec::with_capacity(order * order * order);
        let norm = 1.0 / (8.0 * PI * PI);
        for (i, &alpha) in ga.iter().enumerate() {
            for (j, &beta) in gb.iter().enumerate() {
                for (l, &gamma) in ga.iter().enumerate() {
                    let g = mat_mul(&a, &euler_zyz(alpha, beta, gamma));
                    let (_, r) = gram_schmidt(&g)?;
                    let t1 = ln(r[0][0]);
                    let t3 = ln(r[2][2]);
                    let weight = wa[i] * wb[j] * wa[l] * sin(beta) * norm * exp(t3 - t1);
                    nodes.push(Node { t1, t3, weight });
                }
            }
        }
        Ok(SphericalTable { base, order, nodes })
    }

    /// Base point.
    pub fn base_point(&self) -> BasePoint {
        self.base
    }

    /// Euler-angle order per axis.
    pub fn order(&self) -> usize {
        self.order
    }

    /// `φ_μ(y)`.
    pub fn phi(&self, mu: &SpectralParam) -> Complex64 {
        if self.base.is_origin() {
            return Complex64::new(1.0, 0.0);
        }
        let mut acc = ZERO;
        for n in &self.nodes {
            acc += mu_on_log(mu, n.t1, n.t3).exp() * n.weight;
        }
        acc
    }

    /// `(φ_μ(y), φ_{−μ}(y))` from one exponential per node.
    pub fn phi_pair(&self, mu: &SpectralParam) -> (Complex64, Complex64) {
        if self.base.is_origin() {
            return (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
        }
        let mut plus = ZERO;
        let mut minus = ZERO;
        for n in &self.nodes {
            let e = mu_on_log(mu, n.t1, n.t3).exp();
            plus += e * n.weight;
            minus += e.inv() * n.weight;
        }
        (plus, minus)
    }

    /// `Σ_k (φ_{μ_k}(y) + φ_{−μ_k}(y))` over a list of parameters, in one
    /// pass over the nodes.
    pub fn phi_symmetric_sum(&self, mus: &[SpectralParam]) -> Complex64 {
        if self.base.is_origin() {
            return Complex64::new(2.0 * mus.len() as f64, 0.0);
        }
        let mut acc = ZERO;
        for n in &self.nodes {
            let mut local = ZERO;
            for mu in mus {
                let e = mu_on_log(mu, n.t1, n.t3).exp();
                local += e + e.inv();
            }
            acc += local * n.weight;
        }
        acc
    }

    /// Same-node envelope `Σ w·|e^{(μ−ρ)(t)}| ≥ |φ_μ(y)|`.
    pub fn envelope(&self, mu: &SpectralParam) -> f64 {
        if self.base.is_origin() {
            return 1.0;
        }
        self.nodes.iter().map(|n| exp(mu_on_log(mu, n.t1, n.t3).re) * n.weight).sum()
    }

    /// Sum of the quadrature weights of the constant function (should be `1`
    /// up to quadrature error; checks the Haar normalisation).
    pub fn haar_mass(&self) -> f64 {
        self.nodes.iter().map(|n| n.weight * exp(n.t1 - n.t3)).sum()
    }
}

/// A spherical-function value with its refinement error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalValue {
    /// Value at the finest order used.
    pub value: Complex64,
    /// `|φ_{2k} − φ_k|` for the last doubling.
    pub error_estimate: f64,
    /// Finest order used.
    pub order: usize,
}

/// `φ_μ(y)` starting at Euler order `order`, doubling until successive values
/// differ by less than `tol` (absolute) or [`MAX_ORDER`] is exceeded.
pub fn spherical_phi(mu: &SpectralParam, y: BasePoint, order: usize, tol: f64) -> Result<SphericalValue> {
    if y.is_origin() {
        return Ok(SphericalValue { value: Complex64::new(1.0, 0.0), error_estimate: 0.0, order });
    }
    let mut k = order.max(2);
    let mut prev = SphericalTable::new(y, k)?.phi(mu);
    loop {
        let next_order = 2 * k;
        if next_order > MAX_ORDER {
            let estimate = f64::INFINITY;
            return Err(CoreError::NotConverged { estimate, nodes: k * k * k });
        }
        let next = SphericalTable::new(y, next_order)?.phi(mu);
        let estimate = (next - prev).norm();
        if estimate < tol {
            return Ok(SphericalValue { value: next, error_estimate: estimate, order: next_order });
        }
        if 2 * next_order > MAX_ORDER {
            return Err(CoreError::NotConverged { estimate, nodes: next_order * next_order * next_order });
        }
        prev = next;
        k = next_order;
    }
}

/// `h(λ)·φ_λ(y)`: the spectral data of a `K`-invariant function with
/// spherical transform `h`.
pub fn conv_value(h: &crate::symbols::GaussianSymbol, mu: &SpectralParam, table: &SphericalTable) -> Complex64 {
    h.transform(mu) * table.phi(mu)
}

/// `(λ₁₂, λ₂₃)`-coordinates of `ρ`, exposed for callers that assemble
/// `(n+1/2)ρ`.
pub fn rho_multiple(t: f64) -> SpectralParam {
    let rho = crate::algebra::RootSystemA2::new().rho_param();
    debug_assert!((rho.positive_coordinate(PositiveRoot::A13).re - 1.0).abs() < 1e-15);
    rho * t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_zero_log() {
        let id = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        assert_eq!(iwasawa_log(&id).unwrap().t, [0.0, 0.0, 0.0]);
    }

    #[test]
    fn haar_mass_is_one() {
        let t = SphericalTable::new(BasePoint::new(0.4, -0.1).unwrap(), 12).unwrap();
        assert!((t.haar_mass() - 1.0).abs() < 1e-12);
    }
}
