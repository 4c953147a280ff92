//! Contour quadrature and the functions built from it: `F`, `F_r`, `G_(n)`,
//! `G_r`, the deformation identity `F = F_r + 2πi G_r`, and the resolvent on
//! both sides of the continuous spectrum.
//!
//! Closed curves use the nested periodic trapezoidal rule (spectrally accurate
//! for analytic integrands); open paths use composite Gauss–Legendre panels.
//! All node values are produced through an [`Executor`] and reduced in index
//! order.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::algebra::{rho_x, RHO_X_SQ, WEYL_ORDER};
use crate::branch::{c_inv, enumerate_s, residue_condition_holds, s_of_c_inv, EllipseSpec};
use crate::error::{CoreError, Result};
use crate::exec::{ordered_sum, Executor, Sequential};
use crate::math::{cis, gauss_legendre, sqrt, I, ZERO};
use crate::symbols::{integrand, phi_zu, psi, SixthRoot, SpectralSymbol};

/// Settings of the nested periodic trapezoidal rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Nodes on the first level.
    pub base_nodes: usize,
    /// Largest number of nodes before giving up.
    pub max_nodes: usize,
    /// Relative tolerance between successive levels.
    pub rtol: f64,
    /// Parameter origin `θ₀` of the node set `θ₀ + 2πj/M` (a fixed shift that
    /// keeps nodes off the symmetry points of the integrands).
    pub theta0: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { base_nodes: 512, max_nodes: 1 << 14, rtol: 1e-10, theta0: PI / 512.0 }
    }
}

/// A quadrature value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    /// Integral value.
    pub value: Complex64,
    /// Estimated absolute error (difference of the last two levels).
    pub error_estimate: f64,
    /// Nodes on the final level.
    pub nodes: usize,
}

/// Parametrised integration contours.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ContourKind {
    /// `|w| = 1`.
    UnitCircle,
    /// `|w| = r`.
    Circle {
        /// Radius.
        radius: f64,
    },
    /// `z·∂E_{c(r),s(r)}`, traced as `θ ↦ z·c(r e^{iθ})`.
    RotatedEllipse {
        /// Rotation/dilation factor.
        z: Complex64,
        /// Ellipse radius parameter in `(0, 1)`.
        r: f64,
    },
    /// Circle `|ζ − center| = radius` in a local coordinate.
    ChartCircle {
        /// Centre.
        center: Complex64,
        /// Radius.
        radius: f64,
    },
}

/// A closed contour together with its quadrature settings. Orientation is
/// counterclockwise in the parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec {
    /// Curve.
    pub kind: ContourKind,
    /// Quadrature settings.
    pub config: QuadratureConfig,
}

impl ContourSpec {
    /// Contour with default quadrature settings.
    pub fn new(kind: ContourKind) -> Self {
        ContourSpec { kind, config: QuadratureConfig::default() }
    }

    /// Point and derivative `(p(θ), p′(θ))`.
    pub fn point(&self, theta: f64) -> (Complex64, Complex64) {
        match self.kind {
            ContourKind::UnitCircle => {
                let w = cis(theta);
                (w, I * w)
            }
            ContourKind::Circle { radius } => {
                let w = cis(theta) * radius;
                (w, I * w)
            }
            ContourKind::RotatedEllipse { z, r } => {
                let w = cis(theta) * r;
                let winv = w.inv();
                (z * (w + winv) * 0.5, I * z * (w - winv) * 0.5)
            }
            ContourKind::ChartCircle { center, radius } => {
                let d = cis(theta) * radius;
                (center + d, I * d)
            }
        }
    }

    /// `∮ f(p) dp` along the contour.
    pub fn integrate(
        &self,
        exec: &dyn Executor,
        f: &(dyn Fn(Complex64) -> Result<Complex64> + Sync),
    ) -> Result<QuadResult> {
        periodic_trapezoid(exec, &self.config, &|theta| {
            let (p, dp) = self.point(theta);
            Ok(f(p)? * dp)
        })
    }
}

/// `∫₀^{2π} g(θ) dθ` by the nested periodic trapezoidal rule.
///
/// Levels `M = base, 2·base, …` share nodes; the iteration stops once two
/// successive levels differ by at most `rtol·max(|I|, ∫|g|)` (the `L¹` scale
/// keeps cancelling or vanishing integrals from stalling), and fails with
/// [`CoreError::NotConverged`] after `max_nodes`.
pub fn periodic_trapezoid(
    exec: &dyn Executor,
    config: &QuadratureConfig,
    g: &(dyn Fn(f64) -> Result<Complex64> + Sync),
) -> Result<QuadResult> {
    if config.base_nodes == 0 || config.max_nodes < config.base_nodes {
        return Err(CoreError::Domain("invalid trapezoid node counts"));
    }
    let m0 = config.base_nodes;
    let first = exec.map(m0, &|j| g(config.theta0 + 2.0 * PI * j as f64 / m0 as f64))?;
    let mut sum = ordered_sum(&first);
    let mut abs_sum: f64 = first.iter().map(|v| v.norm()).sum();
    let mut m = m0;
    let mut value = sum * (2.0 * PI / m as f64);
    loop {
        let next_m = 2 * m;
        if next_m > config.max_nodes {
            let estimate = f64::INFINITY;
            return Err(CoreError::NotConverged { estimate, nodes: m });
        }
        let fresh = exec.map(m, &|j| g(config.theta0 + 2.0 * PI * (2 * j + 1) as f64 / next_m as f64))?;
        sum += ordered_sum(&fresh);
        abs_sum += fresh.iter().map(|v| v.norm()).sum::<f64>();
        m = next_m;
        let h = 2.0 * PI / m as f64;
        let next = sum * h;
        let estimate = (next - value).norm();
        let scale = next.norm().max(abs_sum * h);
        value = next;
        if estimate <= config.rtol * scale {
            return Ok(QuadResult { value, error_estimate: estimate, nodes: m });
        }
        if 2 * m > config.max_nodes {
            return Err(CoreError::NotConverged { estimate, nodes: m });
        }
    }
}

/// Bundles an executor with quadrature settings; every contour-level function
/// of the crate is a method on it.
#[derive(Clone, Copy)]
pub struct Integrator<'a> {
    /// Node executor.
    pub exec: &'a dyn Executor,
    /// Closed-curve quadrature settings.
    pub config: QuadratureConfig,
}

impl core::fmt::Debug for Integrator<'_> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Integrator").field("config", &self.config).finish_non_exhaustive()
    }
}

static SEQUENTIAL: Sequential = Sequential;

impl Integrator<'static> {
    /// Single-threaded integrator with default settings.
    pub fn sequential() -> Self {
        Integrator { exec: &SEQUENTIAL, config: QuadratureConfig::default() }
    }
}

impl<'a> Integrator<'a> {
    /// Integrator with the given executor and default settings.
    pub fn new(exec: &'a dyn Executor) -> Self {
        Integrator { exec, config: QuadratureConfig::default() }
    }

    /// Same executor, different settings.
    pub fn with_config(self, config: QuadratureConfig) -> Self {
        Integrator { exec: self.exec, config }
    }

    /// Sequential copy (for nesting inside an outer parallel loop).
    pub fn inner(&self) -> Integrator<'static> {
        Integrator { exec: &SEQUENTIAL, config: self.config }
    }

    /// `∮ f` over a closed contour, with this integrator's settings.
    pub fn closed(&self, kind: ContourKind, f: &(dyn Fn(Complex64) -> Result<Complex64> + Sync)) -> Result<QuadResult> {
        ContourSpec { kind, config: self.config }.integrate(self.exec, f)
    }

    /// `F(z) = ∮_{|w|=1} ψ_z(w)·Π_u φ_{z,u}(w) dw`.
    ///
    /// Defined for `z ∉ i((−∞,−1/2] ∪ [1/2,∞))`; even in `z`, with `F(0) = 0`.
    pub fn f_unit(&self, symbol: &SpectralSymbol, z: Complex64) -> Result<QuadResult> {
        if z.re == 0.0 && z.im.abs() >= 0.5 {
            return Err(CoreError::Domain("F is not defined on i((-inf,-1/2] U [1/2,inf))"));
        }
        self.closed(ContourKind::UnitCircle, &|w| integrand(symbol, z, w))
    }

    /// `F_r(z) = ∮_{|w|=r} ψ_z(w)·Π_u φ_{z,u}(w) dw`, requiring the residue
    /// condition `i(Z+1/2) ∩ z·∂E_{c(r),s(r)} = ∅`.
    pub fn f_r(&self, symbol: &SpectralSymbol, z: Complex64, r: f64) -> Result<QuadResult> {
        if !residue_condition_holds(z, r)? {
            return Err(CoreError::ResidueCondition { z, r });
        }
        self.closed(ContourKind::Circle { radius: r }, &|w| integrand(symbol, z, w))
    }

    /// `G_r(z) = Σ_{n∈S_{r,z}} G_(n)(z)` for `z ∉ iR`.
    pub fn g_r(&self, symbol: &SpectralSymbol, z: Complex64, r: f64) -> Result<Complex64> {
        let mut total = ZERO;
        for n in enumerate_s(r, z)? {
            total += g_n(symbol, n, z)?;
        }
        Ok(total)
    }

    /// Evaluate both sides of `F = F_r + 2πi G_r`.
    pub fn check_decomposition(&self, symbol: &SpectralSymbol, z: Complex64, r: f64) -> Result<DecompositionReport> {
        let f = self.f_unit(symbol, z)?;
        let fr = self.f_r(symbol, z, r)?;
        let (g, set) = if z == ZERO { (ZERO, Vec::new()) } else { (self.g_r(symbol, z, r)?, enumerate_s(r, z)?) };
        let rhs = fr.value + 2.0 * PI * I * g;
        let abs_residual = (f.value - rhs).norm();
        let scale = f.value.norm().max(rhs.norm());
        let rel_residual = if scale > 0.0 { abs_residual / scale } else { 0.0 };
        Ok(DecompositionReport { z, r, f: f.value, f_r: fr.value, g_r: g, s_set: set, abs_residual, rel_residual })
    }
}

/// Both sides of the deformation identity at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionReport {
    /// Spectral point.
    pub z: Complex64,
    /// Inner radius.
    pub r: f64,
    /// `F(z)` on the unit circle.
    pub f: Complex64,
    /// `F_r(z)`.
    pub f_r: Complex64,
    /// `G_r(z)`.
    pub g_r: Complex64,
    /// `S_{r,z}`.
    pub s_set: Vec<i64>,
    /// `|F − F_r − 2πi G_r|`.
    pub abs_residual: f64,
    /// Residual relative to `max(|F|, |F_r + 2πi G_r|)`.
    pub rel_residual: f64,
}

impl DecompositionReport {
    /// Tolerance of the identity.
    pub const TOL: f64 = 1e-8;

    /// Whether the relative residual is below [`DecompositionReport::TOL`].
    pub fn passed(&self) -> bool {
        self.rel_residual < Self::TOL || self.abs_residual == 0.0
    }
}

/// `G_(n)(z) = −3ψ_z(w₀)φ_{z,1}(ξw₀)φ_{z,1}(ξ²w₀)·x/(iπ·s(w₀))`, with
/// `x = (i/z)(n+1/2)`, `w₀ = c⁻¹(x)`, `s(w₀) = −√(x+1)√(x−1)`.
///
/// Defined and even on `C∖iR`, with `G_(n) = G_(−n−1)`.
pub fn g_n(symbol: &SpectralSymbol, n: i64, z: Complex64) -> Result<Complex64> {
    if z.re == 0.0 {
        return Err(CoreError::Domain("G_(n) is evaluated off the imaginary axis only"));
    }
    let x = I / z * (n as f64 + 0.5);
    let w0 = c_inv(x)?;
    let s0 = s_of_c_inv(x)?;
    let xi = SixthRoot::XI.value();
    let xi2 = SixthRoot::XI2.value();
    let core = psi(symbol, z, w0)? * phi_zu(z, SixthRoot::ONE, xi * w0)? * phi_zu(z, SixthRoot::ONE, xi2 * w0)?;
    Ok(core * -3.0 * x / (I * PI * s0))
}

/// The real semi-axis `c(r)` of an ellipse, convenience for callers that
/// specify radii through `c(r)`.
pub fn radius_for_semi_axis(a: f64) -> Result<f64> {
    Ok(EllipseSpec::from_semi_axis(a)?.r())
}

/// Geometry and truncation of the half-line and `γ₊` quadratures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolventConfig {
    /// Real part of the corner of `γ₊`.
    pub x_off: f64,
    /// Half the height of `γ₊` (the horizontal leg sits at `Im ζ = 2y₀`).
    pub y0: f64,
    /// Truncation `T` of both legs.
    pub truncation: f64,
    /// Panel length of the composite Gauss–Legendre rule.
    pub panel_length: f64,
    /// Gauss–Legendre order per panel (a rule of half the order supplies the
    /// error estimate).
    pub order: usize,
    /// A leg is cut once a whole panel satisfies `|F| < tail_rtol·max|F|`
    /// beyond `|ζ| > 2`; the neglected tail is Gaussian-small.
    pub tail_rtol: f64,
    /// Largest allowed number of symbol evaluations to tabulate `F`.
    pub cost_cap: f64,
}

impl ResolventConfig {
    /// Defaults for a symbol with Gaussian decay `β`: `T = max(20, 6/√β)`.
    pub fn for_beta(beta: f64) -> Self {
        ResolventConfig {
            x_off: 0.6,
            y0: 0.5,
            truncation: (6.0 / sqrt(beta)).max(20.0),
            panel_length: 0.25,
            order: 16,
            tail_rtol: 1e-17,
            cost_cap: 5e8,
        }
    }
}

#[derive(Debug, Clone)]
struct PanelNodes {
    /// `(ζ, dζ-weight, F(ζ))` of the main rule.
    main: Vec<(Complex64, Complex64, Complex64)>,
    /// Same for the half-order rule.
    check: Vec<(Complex64, Complex64, Complex64)>,
}

/// A tabulated open path: panels with `F` precomputed on their nodes.
#[derive(Debug, Clone)]
struct TabulatedPath {
    panels: Vec<PanelNodes>,
    tail_bound: f64,
    /// Endpoint of the last panel kept.
    end: Complex64,
}

impl TabulatedPath {
    fn integrate(&self, kernel: &dyn Fn(Complex64) -> Complex64) -> (Complex64, f64) {
        self.integrate_values(&|z, f| f * kernel(z))
    }

    /// `∫ g(ζ, F(ζ)) dζ` for an integrand built from the tabulated values.
    fn integrate_values(&self, g: &dyn Fn(Complex64, Complex64) -> Complex64) -> (Complex64, f64) {
        let mut total = ZERO;
        let mut err = self.tail_bound;
        for p in &self.panels {
            let mut a = ZERO;
            for (z, w, f) in &p.main {
                a += *w * g(*z, *f);
            }
            let mut b = ZERO;
            for (z, w, f) in &p.check {
                b += *w * g(*z, *f);
            }
            total += a;
            err += (a - b).norm();
        }
        (total, err)
    }

    fn end(&self) -> Complex64 {
        self.end
    }
}

/// A resolvent value and its quadrature error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolventValue {
    /// Value.
    pub value: Complex64,
    /// Estimated absolute error.
    pub error_estimate: f64,
}

/// Matrix coefficients of the resolvent `R(Z) = (Δ − ρ_X² − Z²)⁻¹` in the
/// spectral variable `Z`, on the upper half-plane and on two sheets below it.
///
/// With `z = Z/ρ_X` and `R̂(z) = |W|ρ_X²·R(ρ_X z)`:
///
/// * upper half-plane: `R̂(z) = ∫₀^∞ F(r)·r/(r² − z²) dr`;
/// * principal continuation below: `R̂(z) = ½[∫₀^∞ F/(r+z) + ∫_{γ₊} F/(ζ−z)] + πiF(z)`;
/// * the sheet reached by one further counterclockwise turn:
///   `R̂(z) = ½[∫₀^∞ F/(r−z) + ∫_{γ₋} F/(ζ+z)] − πiF(z)`, `γ₋ = conj γ₊`.
///
/// `F` is tabulated once on all path nodes; each evaluation is then a sum.
#[derive(Debug, Clone)]
pub struct ResolventEngine {
    symbol: SpectralSymbol,
    config: ResolventConfig,
    quadrature: QuadratureConfig,
    real_leg: TabulatedPath,
    gamma_plus: TabulatedPath,
    gamma_minus: TabulatedPath,
}

/// `|W|ρ_X² = 72`.
pub fn resolvent_scale() -> f64 {
    WEYL_ORDER as f64 * RHO_X_SQ
}

impl ResolventEngine {
    /// Tabulate `F` on `[0, T]`, `γ₊` and `γ₋`.
    pub fn new(integrator: &Integrator<'_>, symbol: SpectralSymbol, config: ResolventConfig) -> Result<Self> {
        let panels_per_leg = (config.truncation / config.panel_length) as usize + 8;
        let evaluations = 3.0 * panels_per_leg as f64 * (1.5 * config.order as f64) * 1536.0;
        let weight = match &symbol {
            SpectralSymbol::Spherical(s) => {
                let k = s.table().order() as f64;
                k * k * k
            }
            _ => 1.0,
        };
        if evaluations * weight > config.cost_cap {
            return Err(CoreError::CostCap("resolvent tabulation of F exceeds the configured cost cap"));
        }
        let corner = Complex64::new(config.x_off, 2.0 * config.y0);
        let far = Complex64::new(config.truncation, 2.0 * config.y0);
        let real_leg = tabulate(integrator, &symbol, &config, &[(ZERO, Complex64::new(config.truncation, 0.0))])?;
        let gamma_plus = tabulate(integrator, &symbol, &config, &[(ZERO, corner), (corner, far)])?;
        let gamma_minus =
            tabulate(integrator, &symbol, &config, &[(ZERO, corner.conj()), (corner.conj(), far.conj())])?;
        Ok(ResolventEngine { symbol, config, quadrature: integrator.config, real_leg, gamma_plus, gamma_minus })
    }

    /// Engine settings.
    pub fn config(&self) -> &ResolventConfig {
        &self.config
    }

    /// The symbol.
    pub fn symbol(&self) -> &SpectralSymbol {
        &self.symbol
    }

    fn f(&self, z: Complex64) -> Result<Complex64> {
        Ok(Integrator::sequential().with_config(self.quadrature).f_unit(&self.symbol, z)?.value)
    }

    /// Whether `z` lies strictly below `γ₊` (and above `−γ₊`'s reflection is
    /// not needed): the region where the principal representation holds.
    pub fn below_gamma_plus(&self, z: Complex64) -> bool {
        let h = 2.0 * self.config.y0;
        if z.im >= h {
            return false;
        }
        if z.im <= 0.0 {
            return true;
        }
        // Left of the slanted leg the curve is at Im = (h/x_off)·Re.
        z.re > 0.0 && z.im < h * (z.re / self.config.x_off).min(1.0)
    }

    /// `R̂(z)` on the upper half-plane from the half-line integral.
    ///
    /// The pole of the kernel at `r = z` is subtracted analytically,
    /// `∫₀^T F(r)·r/(r²−z²) dr = ∫₀^T (F(r)−F(z))·r/(r²−z²) dr + ½F(z)·log((T²−z²)/(−z²))`,
    /// so the panels see a smooth integrand even for `z` close to the axis.
    pub fn rhat_upper(&self, z: Complex64) -> Result<ResolventValue> {
        if z.im <= 0.0 {
            return Err(CoreError::Domain("upper-half-plane formula needs Im z > 0"));
        }
        let z2 = z * z;
        let fz = self.f(z)?;
        let (v, e) = self.real_leg.integrate_values(&|r, f| (f - fz) * r / (r * r - z2));
        let end = self.real_leg.end();
        // Im(r² − z²) is constant along [0, T], so the principal logarithms
        // are continuous along the path.
        let log_part = ((end * end - z2).ln() - (-z2).ln()) * 0.5;
        Ok(ResolventValue { value: v + fz * log_part, error_estimate: e })
    }

    /// `H(z) = (1/(2|W|ρ_X²))[∫₀^∞ F/(r+z) dr + ∫_{γ₊} F/(ζ−z) dζ]`, holomorphic
    /// below `γ₊` off `(−∞, 0]`.
    pub fn holomorphic_part(&self, z: Complex64) -> Result<ResolventValue> {
        if z.im == 0.0 && z.re <= 0.0 {
            return Err(CoreError::Domain("holomorphic part is cut along (-inf, 0]"));
        }
        let (a, ea) = self.real_leg.integrate(&|r| (r + z).inv());
        let (b, eb) = self.gamma_plus.integrate(&|t| (t - z).inv());
        let k = 1.0 / (2.0 * resolvent_scale());
        Ok(ResolventValue { value: (a + b) * k, error_estimate: (ea + eb) * k })
    }

    /// `R̂(z)` by the principal representation (below `γ₊`).
    pub fn rhat_principal(&self, z: Complex64) -> Result<ResolventValue> {
        if !self.below_gamma_plus(z) {
            return Err(CoreError::Domain("principal representation needs z below gamma_plus"));
        }
        let h = self.holomorphic_part(z)?;
        let s = resolvent_scale();
        Ok(ResolventValue { value: h.value * s + PI * I * self.f(z)?, error_estimate: h.error_estimate * s })
    }

    /// `R̂` on the sheet reached from the lower half-plane by one further
    /// counterclockwise turn around `0` (`z e^{2πi}` for `Im z < 0`).
    pub fn rhat_rotated(&self, z: Complex64) -> Result<ResolventValue> {
        if z.im >= 0.0 {
            return Err(CoreError::Domain("rotated-sheet representation needs Im z < 0"));
        }
        let (a, ea) = self.real_leg.integrate(&|r| (r - z).inv());
        let (b, eb) = self.gamma_minus.integrate(&|t| (t + z).inv());
        Ok(ResolventValue { value: (a + b) * 0.5 - PI * I * self.f(z)?, error_estimate: 0.5 * (ea + eb) })
    }

    fn physical(v: ResolventValue) -> ResolventValue {
        let s = resolvent_scale();
        ResolventValue { value: v.value / s, error_estimate: v.error_estimate / s }
    }

    /// `R(Z)` for `Im Z > 0`.
    pub fn r_upper(&self, big_z: Complex64) -> Result<ResolventValue> {
        Ok(Self::physical(self.rhat_upper(big_z / rho_x())?))
    }

    /// Principal continuation `R(Z) = H(Z/ρ_X) + (πi/(|W|ρ_X²))F(Z/ρ_X)` below
    /// `ρ_X γ₊`, off `−i[ρ_X/2, ∞)`.
    pub fn r_below(&self, big_z: Complex64) -> Result<ResolventValue> {
        let z = big_z / rho_x();
        if z.re == 0.0 && z.im <= -0.5 {
            return Err(CoreError::Domain("R is cut along -i[rho_X/2, inf)"));
        }
        Ok(Self::physical(self.rhat_principal(z)?))
    }

    /// `R(Z e^{2πi})` for `Im Z < 0`.
    pub fn r_rotated(&self, big_z: Complex64) -> Result<ResolventValue> {
        Ok(Self::physical(self.rhat_rotated(big_z / rho_x())?))
    }

    /// `F(Z/ρ_X)` (the function entering the jump).
    pub fn f_scaled(&self, big_z: Complex64) -> Result<Complex64> {
        self.f(big_z / rho_x())
    }
}

fn tabulate(
    integrator: &Integrator<'_>,
    symbol: &SpectralSymbol,
    config: &ResolventConfig,
    legs: &[(Complex64, Complex64)],
) -> Result<TabulatedPath> {
    let (x_main, w_main) = gauss_legendre(config.order);
    let (x_check, w_check) = gauss_legendre((config.order / 2).max(2));
    let inner = integrator.inner();
    let mut panels = Vec::new();
    let mut peak: f64 = 0.0;
    let mut tail_bound = 0.0;
    let mut end = ZERO;
    for &(a, b) in legs {
        let length = (b - a).norm();
        let count = (libm::ceil(length / config.panel_length) as usize).max(1);
        let step = (b - a) / count as f64;
        for k in 0..count {
            let pa = a + step * k as f64;
            let half = step * 0.5;
            let mid = pa + half;
            let mut points = Vec::with_capacity(x_main.len() + x_check.len());
            points.extend(x_main.iter().map(|t| mid + half * *t));
            points.extend(x_check.iter().map(|t| mid + half * *t));
            let values = integrator.exec.map(points.len(), &|j| Ok(inner.f_unit(symbol, points[j])?.value))?;
            let (fm, fc) = values.split_at(x_main.len());
            let main: Vec<_> = (0..x_main.len()).map(|j| (points[j], half * w_main[j], fm[j])).collect();
            let check: Vec<_> =
                (0..x_check.len()).map(|j| (points[x_main.len() + j], half * w_check[j], fc[j])).collect();
            let panel_peak = fm.iter().chain(fc.iter()).map(|v| v.norm()).fold(0.0, f64::max);
            peak = peak.max(panel_peak);
            panels.push(PanelNodes { main, check });
            end = pa + step;
            let far_enough = (pa + step).norm() > 2.0;
            if far_enough && panel_peak < config.tail_rtol * peak && k + 1 < count {
                // Gaussian tail: bounded by a geometric continuation of this panel.
                tail_bound += panel_peak * config.panel_length;
                break;
            }
        }
    }
    Ok(TabulatedPath { panels, tail_bound, end })
}
