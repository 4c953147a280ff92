//! Root system `A2` of `SL(3,R)/SO(3)`: roots, weights, the Weyl group, and
//! spectral parameters in the `(x₁, x₂)` coordinates of `a* ≅ R²`.
//!
//! The inner product on `a*` is `12` times the Euclidean one, so every root has
//! squared length `ρ_X² = 12`. Root coordinates `λ_α = ⟨λ,α⟩/⟨α,α⟩` are
//! therefore the Euclidean ones and do not see the scaling.

use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::branch::{c, s};
use crate::error::{CoreError, Result};
use crate::math::{sqrt, I, SQRT_3};

/// Squared length of every root under the symmetric-space normalisation.
pub const RHO_X_SQ: f64 = 12.0;
/// Order of the Weyl group `S₃`.
pub const WEYL_ORDER: usize = 6;

/// `ρ_X = √12 = 2√3`.
pub fn rho_x() -> f64 {
    sqrt(RHO_X_SQ)
}

/// Real vector in `a* ≅ R²`.
pub type Vec2 = [f64; 2];

/// One of the three positive roots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PositiveRoot {
    /// `α₁₂ = e₁ − e₂`.
    A12,
    /// `α₂₃ = e₂ − e₃`.
    A23,
    /// `α₁₃ = α₁₂ + α₂₃`.
    A13,
}

impl PositiveRoot {
    /// The three positive roots in canonical order.
    pub const ALL: [PositiveRoot; 3] = [PositiveRoot::A12, PositiveRoot::A23, PositiveRoot::A13];

    /// Coordinates in `R²`.
    pub fn vector(self) -> Vec2 {
        match self {
            PositiveRoot::A12 => [1.0, 0.0],
            PositiveRoot::A23 => [-0.5, 0.5 * SQRT_3],
            PositiveRoot::A13 => [0.5, 0.5 * SQRT_3],
        }
    }
}

/// A root `±α` with `α` positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root {
    /// Underlying positive root.
    pub positive: PositiveRoot,
    /// `false` for `α`, `true` for `−α`.
    pub negated: bool,
}

impl Root {
    /// All six roots: the positive ones followed by their negatives.
    pub fn all() -> [Root; 6] {
        let mut out = [Root { positive: PositiveRoot::A12, negated: false }; 6];
        for (i, p) in PositiveRoot::ALL.iter().enumerate() {
            out[i] = Root { positive: *p, negated: false };
            out[i + 3] = Root { positive: *p, negated: true };
        }
        out
    }

    /// Coordinates in `R²`.
    pub fn vector(self) -> Vec2 {
        let v = self.positive.vector();
        if self.negated {
            [-v[0], -v[1]]
        } else {
            v
        }
    }
}

/// Orthogonal `2×2` map of `a*` (a Weyl group element), row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeylElement(pub [[f64; 2]; 2]);

impl WeylElement {
    /// Identity map.
    pub const IDENTITY: WeylElement = WeylElement([[1.0, 0.0], [0.0, 1.0]]);

    /// Reflection in the hyperplane orthogonal to `alpha`.
    pub fn reflection(alpha: Vec2) -> Self {
        let n = alpha[0] * alpha[0] + alpha[1] * alpha[1];
        let mut m = [[0.0; 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                let delta = if i == j { 1.0 } else { 0.0 };
                *entry = delta - 2.0 * alpha[i] * alpha[j] / n;
            }
        }
        WeylElement(m)
    }

    /// Composition `self ∘ other`.
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        let a = &self.0;
        let b = &other.0;
        let mut m = [[0.0; 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        WeylElement(m)
    }

    /// Apply to a real vector.
    pub fn apply_real(&self, v: Vec2) -> Vec2 {
        let m = &self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    /// Apply (complex-linearly) to a spectral parameter.
    pub fn apply(&self, lambda: &SpectralParam) -> SpectralParam {
        let m = &self.0;
        SpectralParam { x1: lambda.x1 * m[0][0] + lambda.x2 * m[0][1], x2: lambda.x1 * m[1][0] + lambda.x2 * m[1][1] }
    }

    fn max_abs_diff(&self, other: &WeylElement) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                d = d.max((self.0[i][j] - other.0[i][j]).abs());
            }
        }
        d
    }
}

/// Root data of `A2` with its Weyl group generated from the simple reflections.
#[derive(Debug, Clone)]
pub struct RootSystemA2 {
    /// `α₁₂, α₂₃, α₁₃`.
    pub positive_roots: [Vec2; 3],
    /// `w₁₂, w₂₃` with `⟨w_i, α_j⟩/⟨α_j, α_j⟩ = δ_ij`.
    pub fundamental_weights: [Vec2; 2],
    /// Half the sum of the positive roots (equal to `α₁₃`).
    pub rho: Vec2,
    /// `⟨ρ, ρ⟩ = 12`.
    pub rho_x_sq: f64,
    /// The six Weyl group elements, identity first.
    pub weyl_elements: Vec<WeylElement>,
}

impl Default for RootSystemA2 {
    fn default() -> Self {
        Self::new()
    }
}

impl RootSystemA2 {
    /// Build the root data; the Weyl group is the closure of the two simple
    /// reflections under composition (deduplicated to `1e-12`).
    pub fn new() -> Self {
        let positive_roots = PositiveRoot::ALL.map(PositiveRoot::vector);
        let a12 = positive_roots[0];
        let a23 = positive_roots[1];
        let fundamental_weights = [
            [(2.0 / 3.0) * (2.0 * a12[0] + a23[0]), (2.0 / 3.0) * (2.0 * a12[1] + a23[1])],
            [(2.0 / 3.0) * (a12[0] + 2.0 * a23[0]), (2.0 / 3.0) * (a12[1] + 2.0 * a23[1])],
        ];
        let rho = [0.5 * (a12[0] + a23[0] + positive_roots[2][0]), 0.5 * (a12[1] + a23[1] + positive_roots[2][1])];
        let generators = [WeylElement::reflection(a12), WeylElement::reflection(a23)];
        let mut group = alloc::vec![WeylElement::IDENTITY];
        let mut frontier = 0;
        while frontier < group.len() {
            let g = group[frontier];
            for s in &generators {
                let h = s.compose(&g);
                if !group.iter().any(|k| k.max_abs_diff(&h) < 1e-12) {
                    group.push(h);
                }
            }
            frontier += 1;
        }
        RootSystemA2 { positive_roots, fundamental_weights, rho, rho_x_sq: RHO_X_SQ, weyl_elements: group }
    }

    /// Euclidean inner product scaled by `12`.
    pub fn inner(&self, a: Vec2, b: Vec2) -> f64 {
        RHO_X_SQ * (a[0] * b[0] + a[1] * b[1])
    }

    /// `ρ` as a spectral parameter.
    pub fn rho_param(&self) -> SpectralParam {
        SpectralParam::from_real(self.rho)
    }

    /// `{wλ : w ∈ W}` in the order of [`RootSystemA2::weyl_elements`].
    pub fn weyl_orbit(&self, lambda: &SpectralParam) -> Vec<SpectralParam> {
        self.weyl_elements.iter().map(|w| w.apply(lambda)).collect()
    }
}

/// A point of `a*_C` in the coordinates `λ = x₁e₁ + x₂e₂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParam {
    /// First coordinate.
    pub x1: Complex64,
    /// Second coordinate.
    pub x2: Complex64,
}

impl SpectralParam {
    /// Construct from complex coordinates.
    pub fn new(x1: Complex64, x2: Complex64) -> Self {
        SpectralParam { x1, x2 }
    }

    /// Construct from a real vector.
    pub fn from_real(v: Vec2) -> Self {
        SpectralParam { x1: Complex64::new(v[0], 0.0), x2: Complex64::new(v[1], 0.0) }
    }

    /// The origin.
    pub fn zero() -> Self {
        SpectralParam::from_real([0.0, 0.0])
    }

    /// Construct from the root coordinates `(λ₁₂, λ₂₃)`.
    pub fn from_root_coordinates(l12: Complex64, l23: Complex64) -> Self {
        // λ₁₂ = x₁, λ₂₃ = −x₁/2 + (√3/2)x₂.
        let x1 = l12;
        let x2 = (l23 + x1 * 0.5) * (2.0 / SQRT_3);
        SpectralParam { x1, x2 }
    }

    /// Root coordinate of a positive root.
    pub fn positive_coordinate(&self, alpha: PositiveRoot) -> Complex64 {
        let half_sqrt3 = 0.5 * SQRT_3;
        match alpha {
            PositiveRoot::A12 => self.x1,
            PositiveRoot::A23 => -self.x1 * 0.5 + self.x2 * half_sqrt3,
            PositiveRoot::A13 => self.x1 * 0.5 + self.x2 * half_sqrt3,
        }
    }

    /// Root coordinate `λ_α = ⟨λ,α⟩/⟨α,α⟩` for any of the six roots.
    pub fn root_coordinate(&self, alpha: Root) -> Complex64 {
        let v = self.positive_coordinate(alpha.positive);
        if alpha.negated {
            -v
        } else {
            v
        }
    }

    /// The three positive root coordinates `(λ₁₂, λ₂₃, λ₁₃)`.
    pub fn positive_coordinates(&self) -> [Complex64; 3] {
        PositiveRoot::ALL.map(|a| self.positive_coordinate(a))
    }

    /// Bilinear extension of the inner product: `12 (x₁² + x₂²)`.
    pub fn bilinear(&self, other: &SpectralParam) -> Complex64 {
        (self.x1 * other.x1 + self.x2 * other.x2) * RHO_X_SQ
    }

    /// `𝐢λ`: multiplication of both coordinates by `i`.
    pub fn times_i(&self) -> SpectralParam {
        SpectralParam { x1: self.x1 * I, x2: self.x2 * I }
    }

    /// Evaluate `λ` on `H = diag(h₁, h₂, h₃)` (trace zero):
    /// `λ(H) = 2λ₁₂ h₁ − 2λ₂₃ h₃`.
    pub fn on_diagonal(&self, h: [f64; 3]) -> Complex64 {
        let l12 = self.positive_coordinate(PositiveRoot::A12);
        let l23 = self.positive_coordinate(PositiveRoot::A23);
        l12 * (2.0 * h[0]) - l23 * (2.0 * h[2])
    }

    /// Maximum of the coordinate differences (for tolerance checks).
    pub fn distance(&self, other: &SpectralParam) -> f64 {
        (self.x1 - other.x1).norm().max((self.x2 - other.x2).norm())
    }
}

impl Add for SpectralParam {
    type Output = SpectralParam;
    fn add(self, rhs: SpectralParam) -> SpectralParam {
        SpectralParam { x1: self.x1 + rhs.x1, x2: self.x2 + rhs.x2 }
    }
}

impl Sub for SpectralParam {
    type Output = SpectralParam;
    fn sub(self, rhs: SpectralParam) -> SpectralParam {
        SpectralParam { x1: self.x1 - rhs.x1, x2: self.x2 - rhs.x2 }
    }
}

impl Neg for SpectralParam {
    type Output = SpectralParam;
    fn neg(self) -> SpectralParam {
        SpectralParam { x1: -self.x1, x2: -self.x2 }
    }
}

impl Mul<Complex64> for SpectralParam {
    type Output = SpectralParam;
    fn mul(self, rhs: Complex64) -> SpectralParam {
        SpectralParam { x1: self.x1 * rhs, x2: self.x2 * rhs }
    }
}

impl Mul<f64> for SpectralParam {
    type Output = SpectralParam;
    fn mul(self, rhs: f64) -> SpectralParam {
        SpectralParam { x1: self.x1 * rhs, x2: self.x2 * rhs }
    }
}

/// Polar parameter `λ(z, w)`: `x₁ = z·c(w)`, `x₂ = −i z·s(w)`.
///
/// For real `z = r > 0` and `|w| = 1` this is `x₁ + i x₂ = r w`; the formula is
/// the holomorphic extension to `z ∈ C`, `w ∈ C^×` used by the contour
/// arguments. Its root coordinates are `z c(w)`, `−z c(ξw)`, `−z c(ξ²w)`.
pub fn polar_param(z: Complex64, w: Complex64) -> Result<SpectralParam> {
    if w == Complex64::new(0.0, 0.0) {
        return Err(CoreError::ZeroArgument);
    }
    Ok(SpectralParam { x1: z * c(w)?, x2: -I * z * s(w)? })
}

/// Inverse of [`polar_param`] up to the simultaneous sign `(z, w) ↦ (−z, −w)`:
/// returns `(z, w)` with `z² = x₁² + x₂²`, `z w = x₁ + i x₂`.
pub fn polar_decompose(lambda: &SpectralParam) -> Result<(Complex64, Complex64)> {
    let plus = lambda.x1 + I * lambda.x2;
    let minus = lambda.x1 - I * lambda.x2;
    let z = (plus * minus).sqrt();
    if z.norm() == 0.0 {
        return Err(CoreError::ZeroArgument);
    }
    Ok((z, plus / z))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weyl_group_has_six_elements() {
        let rs = RootSystemA2::new();
        assert_eq!(rs.weyl_elements.len(), WEYL_ORDER);
    }

    #[test]
    fn rho_root_coordinates() {
        let rho = RootSystemA2::new().rho_param();
        let c = rho.positive_coordinates();
        assert!((c[0].re - 0.5).abs() < 1e-15);
        assert!((c[1].re - 0.5).abs() < 1e-15);
        assert!((c[2].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn polar_param_unit_point_is_alpha12() {
        let l = polar_param(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)).unwrap();
        assert!(l.distance(&SpectralParam::from_real([1.0, 0.0])) < 1e-15);
    }
}
