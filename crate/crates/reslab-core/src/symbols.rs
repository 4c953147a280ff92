//! Integrand algebra: the factors `φ_{z,u}` and `ψ_z`, the Plancherel density,
//! the Gamma factor `Γ_X`, and the spectral symbols that model the spectral
//! data `(f×φ_{𝐢λ(z,w)})(y)` of a test function.
//!
//! Two symbol families ship with the crate:
//!
//! * [`GaussianSymbol`] — `S(z,w) = P(e₂, e₃)·exp(−(3/2)βz²)` with `e₂, e₃` the
//!   elementary symmetric functions of the squared root coordinates.
//! * [`SphericalSymbol`] — `S = h(λ)·(φ_{𝐢λ}(y) + φ_{−𝐢λ}(y))/2`, backed by the
//!   spherical-function evaluator.
//!
//! Further symbols are admitted through the validation gate
//! [`SpectralSymbol::custom`], which checks evenness, rotation invariance and
//! holomorphy before accepting the model.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use num_complex::Complex64;

use crate::algebra::{polar_param, PositiveRoot, RootSystemA2, SpectralParam, WeylElement};
use crate::branch::c;
use crate::error::{CoreError, Result};
use crate::math::{cis, distance_to_half_integer_axis, exp, gamma, th_pi, I, ONE, SQRT_3, TH_POLE_GUARD, ZERO};
use crate::spherical::{BasePoint, SphericalTable};

/// The sixth roots of unity `e^{ikπ/3}`; `ξ = e^{iπ/3}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SixthRoot(u8);

const SIXTH_ROOTS: [Complex64; 6] = [
    Complex64 { re: 1.0, im: 0.0 },
    Complex64 { re: 0.5, im: 0.5 * SQRT_3 },
    Complex64 { re: -0.5, im: 0.5 * SQRT_3 },
    Complex64 { re: -1.0, im: 0.0 },
    Complex64 { re: -0.5, im: -0.5 * SQRT_3 },
    Complex64 { re: 0.5, im: -0.5 * SQRT_3 },
];

impl SixthRoot {
    /// `1`.
    pub const ONE: SixthRoot = SixthRoot(0);
    /// `ξ = e^{iπ/3}`.
    pub const XI: SixthRoot = SixthRoot(1);
    /// `ξ² = e^{2iπ/3}`.
    pub const XI2: SixthRoot = SixthRoot(2);
    /// The three rotations `1, ξ, ξ²` entering the integrand.
    pub const TRIPLE: [SixthRoot; 3] = [SixthRoot::ONE, SixthRoot::XI, SixthRoot::XI2];

    /// `e^{ikπ/3}` (index taken modulo 6).
    pub fn new(k: u8) -> Self {
        SixthRoot(k % 6)
    }

    /// Exponent `k` in `e^{ikπ/3}`.
    pub fn index(self) -> u8 {
        self.0
    }

    /// Complex value.
    pub fn value(self) -> Complex64 {
        SIXTH_ROOTS[self.0 as usize]
    }

    /// Multiplicative inverse.
    pub fn inverse(self) -> SixthRoot {
        SixthRoot((6 - self.0) % 6)
    }

    /// Product of two sixth roots.
    pub fn times(self, other: SixthRoot) -> SixthRoot {
        SixthRoot((self.0 + other.0) % 6)
    }
}

/// `φ_{z,u}(w) = z c(uw)/(iw) · th(π z c(uw))`.
///
/// Fails with [`CoreError::PoleProximity`] when `z c(uw)` is within the guard
/// band of `i(Z+1/2)`, and with [`CoreError::ZeroArgument`] for `w = 0`.
pub fn phi_zu(z: Complex64, u: SixthRoot, w: Complex64) -> Result<Complex64> {
    let v = z * c(u.value() * w)?;
    Ok(v / (I * w) * th_pi(v)?)
}

/// Evaluator of `φ_{z,u}` for a fixed rotation `u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhiFactor {
    /// Rotation selector.
    pub u: SixthRoot,
}

impl PhiFactor {
    /// Evaluate `φ_{z,u}(w)`.
    pub fn evaluate(&self, z: Complex64, w: Complex64) -> Result<Complex64> {
        phi_zu(z, self.u, w)
    }
}

/// `ψ_z(w) = S(z,w)·(iw)²/(2π)`.
pub fn psi(symbol: &SpectralSymbol, z: Complex64, w: Complex64) -> Result<Complex64> {
    Ok(symbol.evaluate(z, w)? * (I * w) * (I * w) / (2.0 * PI))
}

/// The integrand `ψ_z(w)·Π_{u∈{1,ξ,ξ²}} φ_{z,u}(w)` of `F`.
pub fn integrand(symbol: &SpectralSymbol, z: Complex64, w: Complex64) -> Result<Complex64> {
    let mut value = psi(symbol, z, w)?;
    for u in SixthRoot::TRIPLE {
        value *= phi_zu(z, u, w)?;
    }
    Ok(value)
}

/// The same integrand assembled as `(1/(2πiw))·S(z,w)·z³·Π_u c(uw) th(πz c(uw))`.
pub fn integrand_assembled(symbol: &SpectralSymbol, z: Complex64, w: Complex64) -> Result<Complex64> {
    let s = symbol.evaluate(z, w)?;
    let mut prod = z * z * z;
    for u in SixthRoot::TRIPLE {
        let cu = c(u.value() * w)?;
        prod *= cu * th_pi(z * cu)?;
    }
    Ok(s * prod / (2.0 * PI * I * w))
}

/// Left side of the rotation-sum identity:
/// `Σ_{u∈{1,ξ,ξ²}} ψ_z(w/u)·Π_{u′≠u} φ_{z,u′}(w/u)`.
pub fn rotation_sum(symbol: &SpectralSymbol, z: Complex64, w: Complex64) -> Result<Complex64> {
    let mut total = ZERO;
    for u in SixthRoot::TRIPLE {
        let wu = w / u.value();
        let mut term = psi(symbol, z, wu)?;
        for v in SixthRoot::TRIPLE {
            if v != u {
                term *= phi_zu(z, v, wu)?;
            }
        }
        total += term;
    }
    Ok(total)
}

/// Right side of the rotation-sum identity: `−3ψ_z(w)·φ_{z,1}(ξw)·φ_{z,1}(ξ²w)`.
pub fn rotation_sum_closed_form(symbol: &SpectralSymbol, z: Complex64, w: Complex64) -> Result<Complex64> {
    let xi = SixthRoot::XI.value();
    let xi2 = SixthRoot::XI2.value();
    Ok(psi(symbol, z, w)? * phi_zu(z, SixthRoot::ONE, xi * w)? * phi_zu(z, SixthRoot::ONE, xi2 * w)? * -3.0)
}

/// Plancherel density `Π_{α∈Σ⁺} λ_α th(πλ_α)` (normalising constant `c₀ = 1`).
pub fn plancherel_density(lambda: &SpectralParam) -> Result<Complex64> {
    let mut prod = ONE;
    for a in PositiveRoot::ALL {
        let l = lambda.positive_coordinate(a);
        prod *= l * th_pi(l)?;
    }
    Ok(prod)
}

/// Plancherel density in polar form `z³·Π_u c(uw) th(πz c(uw))`, with `(z, w)`
/// recovered from `λ` by [`crate::algebra::polar_decompose`].
pub fn plancherel_density_polar(lambda: &SpectralParam) -> Result<Complex64> {
    if lambda.x1 == ZERO && lambda.x2 == ZERO {
        return Ok(ZERO);
    }
    let (z, w) = crate::algebra::polar_decompose(lambda)?;
    plancherel_density_at(z, w)
}

/// Polar-form density at polar coordinates `(z, w)`.
pub fn plancherel_density_at(z: Complex64, w: Complex64) -> Result<Complex64> {
    let mut prod = z * z * z;
    for u in SixthRoot::TRIPLE {
        let cu = c(u.value() * w)?;
        prod *= cu * th_pi(z * cu)?;
    }
    Ok(prod)
}

fn check_gamma_x_poles(lambda: &SpectralParam) -> Result<()> {
    for a in PositiveRoot::ALL {
        let l = lambda.positive_coordinate(a);
        // λ_α ∈ Z + 1/2  ⟺  i·λ_α ∈ i(Z+1/2).
        let d = distance_to_half_integer_axis(I * l);
        if d < TH_POLE_GUARD {
            return Err(CoreError::PoleProximity { location: l, distance: d });
        }
    }
    Ok(())
}

/// `Γ_X(λ) = Π_{α∈Σ} Γ(3/4 + λ_α/2)·Γ(1/4 + λ_α/2)` (product over all six roots).
pub fn gamma_x(lambda: &SpectralParam) -> Result<Complex64> {
    check_gamma_x_poles(lambda)?;
    let mut prod = ONE;
    for a in PositiveRoot::ALL {
        let l = lambda.positive_coordinate(a);
        for t in [l, -l] {
            prod *= gamma(t * 0.5 + 0.75) * gamma(t * 0.5 + 0.25);
        }
    }
    Ok(prod)
}

/// `Γ_X(λ) = Π_{α∈Σ⁺} 2π²/cos(πλ_α)`.
pub fn gamma_x_cosine(lambda: &SpectralParam) -> Result<Complex64> {
    check_gamma_x_poles(lambda)?;
    let mut prod = ONE;
    for a in PositiveRoot::ALL {
        let l = lambda.positive_coordinate(a);
        prod *= Complex64::new(2.0 * PI * PI, 0.0) / (l * PI).cos();
    }
    Ok(prod)
}

/// Reducibility predicate: some `λ_α` lies within `tol` of `Z + 1/2`
/// (equivalently, the cosine form of `Γ_X` is infinite).
pub fn is_reducible(lambda: &SpectralParam, tol: f64) -> bool {
    PositiveRoot::ALL.iter().any(|a| distance_to_half_integer_axis(I * lambda.positive_coordinate(*a)) <= tol)
}

/// One monomial `coeff·e₂^{p2}·e₃^{p3}` of the symmetric prefactor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrefactorTerm {
    /// Coefficient.
    pub coeff: f64,
    /// Power of `e₂`.
    pub p2: u32,
    /// Power of `e₃`.
    pub p3: u32,
}

/// Gaussian-symmetric symbol `P(e₂, e₃)·exp(−β e₁)` of the squared root
/// coordinates; on the polar parameter `e₁ = (3/2)z²`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianSymbol {
    beta: f64,
    prefactor: Vec<PrefactorTerm>,
}

impl GaussianSymbol {
    /// Symbol with decay `β > 0` and prefactor `P = Σ coeff·e₂^{p2}e₃^{p3}`; an
    /// empty prefactor means `P ≡ 1`.
    pub fn new(beta: f64, prefactor: Vec<PrefactorTerm>) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(CoreError::Domain("Gaussian decay beta must be positive"));
        }
        let prefactor =
            if prefactor.is_empty() { alloc::vec![PrefactorTerm { coeff: 1.0, p2: 0, p3: 0 }] } else { prefactor };
        Ok(GaussianSymbol { beta, prefactor })
    }

    /// Decay rate `β`.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Prefactor monomials.
    pub fn prefactor(&self) -> &[PrefactorTerm] {
        &self.prefactor
    }

    /// Copy with every coefficient multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        GaussianSymbol {
            beta: self.beta,
            prefactor: self.prefactor.iter().map(|t| PrefactorTerm { coeff: t.coeff * k, ..*t }).collect(),
        }
    }

    fn value_at_squares(&self, t: [Complex64; 3], e1: Complex64) -> Complex64 {
        let e2 = t[0] * t[1] + t[0] * t[2] + t[1] * t[2];
        let e3 = t[0] * t[1] * t[2];
        let mut p = ZERO;
        for term in &self.prefactor {
            p += e2.powu(term.p2) * e3.powu(term.p3) * term.coeff;
        }
        p * (-e1 * self.beta).exp()
    }

    /// `S(z,w)` with the squared root coordinates `(z c(uw))²`; the exponent
    /// uses `Σ_u c(uw)² = 3/2`, so it is `w`-independent.
    pub fn evaluate(&self, z: Complex64, w: Complex64) -> Result<Complex64> {
        let mut t = [ZERO; 3];
        for (k, u) in SixthRoot::TRIPLE.iter().enumerate() {
            let v = z * c(u.value() * w)?;
            t[k] = v * v;
        }
        Ok(self.value_at_squares(t, z * z * 1.5))
    }

    /// The transform `h(λ) = P(e₂, e₃)·exp(−β Σ_{α∈Σ⁺} λ_α²)` on `a*_C`; it is
    /// entire and Weyl invariant, and `S(z,w) = h(λ(z,w))`.
    pub fn transform(&self, lambda: &SpectralParam) -> Complex64 {
        let l = lambda.positive_coordinates();
        let t = [l[0] * l[0], l[1] * l[1], l[2] * l[2]];
        self.value_at_squares(t, t[0] + t[1] + t[2])
    }
}

/// Spherical-backed symbol `S(z,w) = h(λ)·(φ_{𝐢λ}(y) + φ_{−𝐢λ}(y))/2` with
/// `λ = λ(z,w)` and a Gaussian-family transform `h`.
///
/// The spherical values come from a precomputed quadrature table, so
/// evaluation is a pure function of its arguments and may be shared freely
/// across threads. Since `φ` is Weyl invariant, the average is taken over the
/// whole orbit `±W·𝐢λ`; this equals the two-term average exactly, and makes
/// the discretised symbol invariant under `w ↦ w/u` and `(z,w) ↦ (−z,w)` up to
/// rounding instead of up to quadrature error.
#[derive(Debug, Clone)]
pub struct SphericalSymbol {
    transform: GaussianSymbol,
    table: Arc<SphericalTable>,
    weyl: Arc<[WeylElement]>,
}

impl SphericalSymbol {
    /// Symbol for the transform `h` at the base point `y` with Euler-angle
    /// quadrature order `order` per axis.
    pub fn new(transform: GaussianSymbol, y: BasePoint, order: usize) -> Result<Self> {
        let weyl: Arc<[WeylElement]> = RootSystemA2::new().weyl_elements.into();
        Ok(SphericalSymbol { transform, table: Arc::new(SphericalTable::new(y, order)?), weyl })
    }

    /// The transform `h`.
    pub fn transform(&self) -> &GaussianSymbol {
        &self.transform
    }

    /// Base point `y`.
    pub fn base_point(&self) -> BasePoint {
        self.table.base_point()
    }

    /// Quadrature table.
    pub fn table(&self) -> &SphericalTable {
        &self.table
    }

    /// `(φ_{𝐢λ}(y) + φ_{−𝐢λ}(y))/2`, computed as the mean over `±W·𝐢λ`.
    pub fn phi_average(&self, lambda: &SpectralParam) -> Complex64 {
        let mu = lambda.times_i();
        let orbit: Vec<SpectralParam> = self.weyl.iter().map(|w| w.apply(&mu)).collect();
        self.table.phi_symmetric_sum(&orbit) / (2.0 * orbit.len() as f64)
    }

    /// `S(z,w)`.
    pub fn evaluate(&self, z: Complex64, w: Complex64) -> Result<Complex64> {
        let lambda = polar_param(z, w)?;
        Ok(self.transform.transform(&lambda) * self.phi_average(&lambda))
    }

    /// Copy whose transform is scaled by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        SphericalSymbol {
            transform: self.transform.scaled(k),
            table: Arc::clone(&self.table),
            weyl: Arc::clone(&self.weyl),
        }
    }
}

/// User-supplied symbol model `(z, w) ↦ S(z, w)`.
pub trait SymbolModel: Send + Sync {
    /// Evaluate the model.
    fn evaluate(&self, z: Complex64, w: Complex64) -> Result<Complex64>;
}

impl<F> SymbolModel for F
where
    F: Fn(Complex64, Complex64) -> Result<Complex64> + Send + Sync,
{
    fn evaluate(&self, z: Complex64, w: Complex64) -> Result<Complex64> {
        self(z, w)
    }
}

/// Family tag of a [`SpectralSymbol`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymbolFamily {
    /// Gaussian-symmetric family.
    Gaussian,
    /// Spherical-backed family.
    Spherical,
    /// Validated user model.
    Custom,
}

/// A model of the spectral data `(f×φ_{𝐢λ(z,w)})(y)`.
#[derive(Clone)]
pub enum SpectralSymbol {
    /// Gaussian-symmetric family.
    Gaussian(GaussianSymbol),
    /// Spherical-backed family.
    Spherical(SphericalSymbol),
    /// A user model that passed [`SpectralSymbol::custom`].
    Custom(Arc<dyn SymbolModel>),
}

impl fmt::Debug for SpectralSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectralSymbol::Gaussian(g) => f.debug_tuple("Gaussian").field(g).finish(),
            SpectralSymbol::Spherical(s) => f.debug_tuple("Spherical").field(s).finish(),
            SpectralSymbol::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl From<GaussianSymbol> for SpectralSymbol {
    fn from(g: GaussianSymbol) -> Self {
        SpectralSymbol::Gaussian(g)
    }
}

impl From<SphericalSymbol> for SpectralSymbol {
    fn from(s: SphericalSymbol) -> Self {
        SpectralSymbol::Spherical(s)
    }
}

/// `S(z, w) = P(e₂, e₃)·exp(−(3/2)βz²)`.
pub fn make_gaussian_symbol(beta: f64, prefactor: Vec<PrefactorTerm>) -> Result<SpectralSymbol> {
    Ok(SpectralSymbol::Gaussian(GaussianSymbol::new(beta, prefactor)?))
}

/// `S(z, w) = h(λ)·(φ_{𝐢λ}(y) + φ_{−𝐢λ}(y))/2`.
pub fn make_spherical_symbol(h: GaussianSymbol, y: BasePoint, order: usize) -> Result<SpectralSymbol> {
    Ok(SpectralSymbol::Spherical(SphericalSymbol::new(h, y, order)?))
}

impl SpectralSymbol {
    /// Admit a user model after [`check_symbol`] passes.
    pub fn custom(model: Arc<dyn SymbolModel>) -> Result<Self> {
        let candidate = SpectralSymbol::Custom(model);
        let report = check_symbol(&candidate)?;
        if report.passed() {
            Ok(candidate)
        } else {
            Err(CoreError::Domain("symbol failed the evenness/rotation/holomorphy gate"))
        }
    }

    /// Family tag.
    pub fn family(&self) -> SymbolFamily {
        match self {
            SpectralSymbol::Gaussian(_) => SymbolFamily::Gaussian,
            SpectralSymbol::Spherical(_) => SymbolFamily::Spherical,
            SpectralSymbol::Custom(_) => SymbolFamily::Custom,
        }
    }

    /// Evaluate `S(z, w)`.
    pub fn evaluate(&self, z: Complex64, w: Complex64) -> Result<Complex64> {
        match self {
            SpectralSymbol::Gaussian(g) => g.evaluate(z, w),
            SpectralSymbol::Spherical(s) => s.evaluate(z, w),
            SpectralSymbol::Custom(m) => m.evaluate(z, w),
        }
    }

    /// Decay rate `β` of the Gaussian part, when the family has one.
    pub fn beta(&self) -> Option<f64> {
        match self {
            SpectralSymbol::Gaussian(g) => Some(g.beta()),
            SpectralSymbol::Spherical(s) => Some(s.transform().beta()),
            SpectralSymbol::Custom(_) => None,
        }
    }

    /// `k·S` (only for the shipped families).
    pub fn scaled(&self, k: f64) -> Result<Self> {
        match self {
            SpectralSymbol::Gaussian(g) => Ok(SpectralSymbol::Gaussian(g.scaled(k))),
            SpectralSymbol::Spherical(s) => Ok(SpectralSymbol::Spherical(s.scaled(k))),
            SpectralSymbol::Custom(_) => Err(CoreError::Domain("custom symbols cannot be rescaled")),
        }
    }
}

/// Outcome of the structural checks on a symbol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolChecks {
    /// Largest relative deviation of `S(−z,w)`, `S(z,−w)` from `S(z,w)`.
    pub evenness: f64,
    /// Largest relative deviation of `ψ_z(w/u)` from `ψ_z(w)/u²` over the
    /// sixth roots `u`.
    pub rotation: f64,
    /// Largest Cauchy–Riemann finite-difference residual in `z` (relative).
    pub holomorphy: f64,
}

impl SymbolChecks {
    /// Tolerance on evenness and rotation deviations.
    pub const SYMMETRY_TOL: f64 = 1e-10;
    /// Tolerance on the Cauchy–Riemann residual.
    pub const HOLOMORPHY_TOL: f64 = 1e-6;

    /// Whether all three checks are within tolerance.
    pub fn passed(&self) -> bool {
        self.evenness < Self::SYMMETRY_TOL
            && self.rotation < Self::SYMMETRY_TOL
            && self.holomorphy < Self::HOLOMORPHY_TOL
    }
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    let scale = a.norm().max(b.norm()).max(1e-300);
    (a - b).norm() / scale
}

/// Deterministic sample points `(z, w)` (a low-discrepancy sequence in a box
/// around the origin and on an annulus) used by [`check_symbol`].
pub fn check_samples(count: usize) -> Vec<(Complex64, Complex64)> {
    const G1: f64 = 0.754_877_666_246_692_7;
    const G2: f64 = 0.569_840_290_998_053_3;
    (0..count)
        .map(|k| {
            let a = ((k as f64 + 0.5) * G1) % 1.0;
            let b = ((k as f64 + 0.5) * G2) % 1.0;
            let z = Complex64::new(1.6 * a - 0.8, 0.9 * b - 0.45);
            let w = cis(2.0 * PI * b) * (0.7 + 0.6 * a);
            (z, w)
        })
        .collect()
}

/// Run the evenness, rotation-invariance and holomorphy checks on 24 sample
/// points.
pub fn check_symbol(symbol: &SpectralSymbol) -> Result<SymbolChecks> {
    let mut out = SymbolChecks { evenness: 0.0, rotation: 0.0, holomorphy: 0.0 };
    let h = 1e-4;
    for (z, w) in check_samples(24) {
        let s = symbol.evaluate(z, w)?;
        out.evenness = out.evenness.max(rel(symbol.evaluate(-z, w)?, s)).max(rel(symbol.evaluate(z, -w)?, s));
        let p = psi(symbol, z, w)?;
        for k in 1..6 {
            let u = SixthRoot::new(k).value();
            out.rotation = out.rotation.max(rel(psi(symbol, z, w / u)?, p / (u * u)));
        }
        let dx = (symbol.evaluate(z + h, w)? - symbol.evaluate(z - h, w)?) / (2.0 * h);
        let dy = (symbol.evaluate(z + I * h, w)? - symbol.evaluate(z - I * h, w)?) / (2.0 * h);
        let cr = (dy - I * dx).norm() / (dx.norm() + s.norm()).max(1e-300);
        out.holomorphy = out.holomorphy.max(cr);
    }
    Ok(out)
}

/// `exp(−(3/2)β|z|²cos(2 arg z))`, the modulus of the Gaussian factor.
pub fn gaussian_envelope(beta: f64, z: Complex64) -> f64 {
    exp(-1.5 * beta * (z * z).re)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sixth_root_arithmetic() {
        let xi = SixthRoot::XI;
        assert_eq!(xi.times(xi.inverse()), SixthRoot::ONE);
        assert!((xi.value() * xi.value() - SixthRoot::XI2.value()).norm() < 1e-15);
    }

    #[test]
    fn gamma_x_at_origin() {
        let l = SpectralParam::zero();
        let target = 8.0 * PI.powi(6);
        assert!((gamma_x(&l).unwrap().re / target - 1.0).abs() < 1e-12);
        assert!((gamma_x_cosine(&l).unwrap().re / target - 1.0).abs() < 1e-14);
    }
}
