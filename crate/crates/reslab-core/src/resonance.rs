//! Pole detection and residue extraction for the lifted resolvent `R̃_(N)`,
//! and the residue operator `f ↦ (n+1/2)²(f×φ_{(n+1/2)ρ})` at the level of
//! values.
//!
//! Residues are taken in the scaled chart around `(−iρ_X(n+1/2), 0)`:
//! `Res = (1/2πi)∮ R̃∘κ⁻¹(ζ) dζ` over `|ζ| = radius`, by the periodic
//! trapezoidal rule. The second Laurent coefficient `c₋₂ = (1/2πi)∮ ζ R̃∘κ⁻¹`
//! comes from the same nodes and certifies the pole order.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::algebra::{rho_x, WEYL_ORDER};
use crate::error::{CoreError, Result};
use crate::exec::{ordered_sum, Executor};
use crate::math::{cis, I, SQRT_3, ZERO};
use crate::spherical::{rho_multiple, spherical_phi, BasePoint};
use crate::surface::{LiftedResolvent, SheetSignature};
use crate::symbols::{GaussianSymbol, SpectralSymbol};

/// Name of the chart in which residues are extracted.
pub const CHART_NAME: &str = "scaled kappa_minus: z = -i rho_X (n+1/2) / sqrt(rho_X^2 zeta^2 + 1)";

/// Largest `|c₋₂|/|c₋₁|` accepted for a simple pole.
pub const SIMPLE_POLE_RATIO: f64 = 1e-6;

/// Settings of the Laurent-coefficient quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaurentConfig {
    /// Nodes on the first level.
    pub base_nodes: usize,
    /// Largest number of nodes.
    pub max_nodes: usize,
    /// Relative tolerance between successive levels.
    pub rtol: f64,
}

impl Default for LaurentConfig {
    fn default() -> Self {
        LaurentConfig { base_nodes: 32, max_nodes: 1024, rtol: 1e-12 }
    }
}

/// The coefficients `c₋₁`, `c₋₂` of `f` around a circle, with the scale
/// `radius·max|f|` used to judge whether they vanish.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaurentCoefficients {
    /// `(1/2πi)∮ f`.
    pub c_minus1: Complex64,
    /// `(1/2πi)∮ (ζ − centre) f`.
    pub c_minus2: Complex64,
    /// `radius·max|f|` over the nodes.
    pub local_scale: f64,
    /// Difference of `c₋₁` between the last two levels.
    pub error_estimate: f64,
    /// Nodes on the final level.
    pub nodes: usize,
}

/// `c₋₁` and `c₋₂` of `f` on `|ζ − centre| = radius` by the nested periodic
/// trapezoidal rule.
pub fn laurent_coefficients(
    exec: &dyn Executor,
    centre: Complex64,
    radius: f64,
    config: &LaurentConfig,
    f: &(dyn Fn(Complex64) -> Result<Complex64> + Sync),
) -> Result<LaurentCoefficients> {
    if radius.is_nan() || radius <= 0.0 || config.base_nodes == 0 || config.max_nodes < config.base_nodes {
        return Err(CoreError::Domain("invalid Laurent quadrature settings"));
    }
    // Level M uses the angles θ₀ + 2πj/M with a fixed θ₀ = π/M₀, so each
    // refinement only evaluates the new odd-indexed nodes.
    let theta0 = PI / config.base_nodes as f64;
    let node = |j: usize, m: usize| cis(theta0 + 2.0 * PI * j as f64 / m as f64) * radius;
    let mut m = config.base_nodes;
    let first = exec.map(m, &|j| f(centre + node(j, m)))?;
    let mut pairs: Vec<(Complex64, Complex64)> = (0..m).map(|j| (node(j, m), first[j])).collect();
    let mut previous: Option<Complex64> = None;
    loop {
        let d1: Vec<Complex64> = pairs.iter().map(|(d, v)| d * v).collect();
        let d2: Vec<Complex64> = pairs.iter().map(|(d, v)| d * d * v).collect();
        let c1 = ordered_sum(&d1) / m as f64;
        let c2 = ordered_sum(&d2) / m as f64;
        let peak = pairs.iter().map(|(_, v)| v.norm()).fold(0.0, f64::max);
        let local_scale = radius * peak;
        if let Some(prev) = previous {
            let estimate = (c1 - prev).norm();
            if estimate <= config.rtol * local_scale.max(c1.norm()) {
                return Ok(LaurentCoefficients {
                    c_minus1: c1,
                    c_minus2: c2,
                    local_scale,
                    error_estimate: estimate,
                    nodes: m,
                });
            }
            if 2 * m > config.max_nodes {
                return Err(CoreError::NotConverged { estimate, nodes: m });
            }
        }
        previous = Some(c1);
        let next = 2 * m;
        let fresh = exec.map(m, &|j| f(centre + node(2 * j + 1, next)))?;
        let mut merged = Vec::with_capacity(next);
        for (j, old) in pairs.into_iter().enumerate() {
            merged.push(old);
            merged.push((node(2 * j + 1, next), fresh[j]));
        }
        pairs = merged;
        m = next;
    }
}

/// One extracted residue.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidueRecord {
    /// Resonance index.
    pub n: usize,
    /// Sheet signature (with `ε_n = +1`).
    pub eps: SheetSignature,
    /// `(1/2πi)∮ R̃∘κ⁻¹ dζ`.
    pub extracted: Complex64,
    /// `−(1/(4|W|))(n+1/2)²·S(i(n+1/2), 1)`.
    pub predicted: Complex64,
    /// `|extracted − predicted| / max(|predicted|, 1e−300)`.
    pub rel_error: f64,
    /// `i(n+1/2)²·S(i(n+1/2), 1)/(4ρ_X³)`, the constant obtained by carrying
    /// the `2πi` and chart Jacobian `1/ρ_X` through the chart residue.
    pub predicted_derived: Complex64,
    /// Relative error against [`ResidueRecord::predicted_derived`].
    pub rel_error_derived: f64,
    /// Chart-circle radius.
    pub radius: f64,
    /// Trapezoid nodes on the final level.
    pub nodes: usize,
    /// Chart description.
    pub chart: &'static str,
    /// Second Laurent coefficient.
    pub c_minus2: Complex64,
    /// Detected pole order: `1` if `|c₋₂| < 10⁻⁶|c₋₁|`, `0` if `c₋₁` is
    /// negligible, `2` otherwise (higher order or unresolved).
    pub order: u8,
    /// Whether `H` and `F_(m)` were part of the integrand.
    pub holomorphic_part_included: bool,
}

fn relative_error(value: Complex64, reference: Complex64) -> f64 {
    (value - reference).norm() / reference.norm().max(1e-300)
}

/// `S(i(n+1/2), 1)`.
pub fn symbol_at_resonance(symbol: &SpectralSymbol, n: usize) -> Result<Complex64> {
    symbol.evaluate(I * (n as f64 + 0.5), Complex64::new(1.0, 0.0))
}

/// `−(1/(4|W|))(n+1/2)²·S(i(n+1/2), 1)`.
pub fn predicted_residue(symbol: &SpectralSymbol, n: usize) -> Result<Complex64> {
    let a = n as f64 + 0.5;
    Ok(symbol_at_resonance(symbol, n)? * (-a * a / (4.0 * WEYL_ORDER as f64)))
}

/// `i(n+1/2)²·S(i(n+1/2), 1)/(4ρ_X³) = i(n+1/2)²S/(96√3)`.
pub fn predicted_residue_derived(symbol: &SpectralSymbol, n: usize) -> Result<Complex64> {
    let a = n as f64 + 0.5;
    let r = rho_x();
    Ok(symbol_at_resonance(symbol, n)? * I * (a * a / (4.0 * r * r * r)))
}

/// `C·Res_{ζ=0}(G̃_(X,n)∘κ⁻¹)` assembled symbolically: `C = π²/6`, the chart
/// residue of `G̃_(n)∘κ₋⁻¹` is `(3i/4π)(n+1/2)²ψ_{i(n+1/2)}(1)` with
/// `ψ_{i(n+1/2)}(1) = −S/(2π)`, and the scaled chart adds `−1/(3ρ_X)`.
pub fn chart_residue_closed_form(symbol: &SpectralSymbol, n: usize) -> Result<Complex64> {
    let a = n as f64 + 0.5;
    let psi = symbol_at_resonance(symbol, n)? * (-1.0 / (2.0 * PI));
    let g_res = I * (3.0 / (4.0 * PI)) * a * a * psi;
    let lifted = g_res * (-1.0 / (3.0 * rho_x()));
    Ok(lifted * crate::surface::BRANCH_CONSTANT)
}

/// `(1/2πi)∮ R̃∘κ⁻¹` around `(−iρ_X(n+1/2), 0)` on the sheet `ε ∈ 𝓔_n`.
pub fn extract_residue(
    lifted: &LiftedResolvent<'_>,
    n: usize,
    eps: &SheetSignature,
    radius: f64,
    config: &LaurentConfig,
) -> Result<ResidueRecord> {
    if n > lifted.atlas.n_max {
        return Err(CoreError::Domain("resonance index exceeds N"));
    }
    if !eps.in_chart_set(n) {
        return Err(CoreError::Domain("chart sheets are indexed by signatures with eps_n = +1"));
    }
    // The chart circle must stay well inside the disk around the branch point.
    if radius.is_nan() || radius <= 0.0 || radius * rho_x() > 0.2 {
        return Err(CoreError::Domain("chart radius must lie in (0, 0.2/rho_X]"));
    }
    let inner = LiftedResolvent { integrator: lifted.integrator.inner(), ..*lifted };
    let m = n as i64;
    let coeffs = laurent_coefficients(lifted.integrator.exec, ZERO, radius, config, &|zeta| {
        let p = inner.atlas.scaled_chart_point(n, zeta, eps)?;
        inner.value(&p, m)
    })?;
    let predicted = predicted_residue(lifted.symbol, n)?;
    let predicted_derived = predicted_residue_derived(lifted.symbol, n)?;
    let c1 = coeffs.c_minus1;
    let order = if c1.norm() <= 1e-8 * coeffs.local_scale {
        0
    } else if coeffs.c_minus2.norm() < SIMPLE_POLE_RATIO * c1.norm() {
        1
    } else {
        2
    };
    Ok(ResidueRecord {
        n,
        eps: eps.clone(),
        extracted: c1,
        predicted,
        rel_error: relative_error(c1, predicted),
        predicted_derived,
        rel_error_derived: relative_error(c1, predicted_derived),
        radius,
        nodes: coeffs.nodes,
        chart: CHART_NAME,
        c_minus2: coeffs.c_minus2,
        order,
        holomorphic_part_included: lifted.includes_regular_part(),
    })
}

/// Default chart radius `0.05/ρ_X`.
pub fn default_chart_radius() -> f64 {
    0.05 / rho_x()
}

/// `(n+1/2)²·(f×φ_{(n+1/2)ρ})(y)` for the `K`-invariant `f` with spherical
/// transform `h`, i.e. `(n+1/2)²·h(λ)·φ_{(n+1/2)ρ}(y)` at the parameter `λ`
/// with `𝐢λ = (n+1/2)ρ`.
///
/// The spherical function is computed at Euler order `order` with doubling
/// refinement to `tol`. All roots of A₂ lie in one Weyl orbit, so
/// `±𝐢λ(i(n+1/2), 1)` are both Weyl conjugates of `(n+1/2)ρ`, and this value
/// equals `(n+1/2)²·S(i(n+1/2), 1)` for the spherical symbol family.
pub fn residue_operator_value(h: &GaussianSymbol, n: usize, y: BasePoint, order: usize, tol: f64) -> Result<Complex64> {
    let a = n as f64 + 0.5;
    let mu = rho_multiple(a);
    let lambda = -mu.times_i();
    let phi = spherical_phi(&mu, y, order, tol)?.value;
    Ok(h.transform(&lambda) * phi * (a * a))
}

/// Control parameters of a resonance scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    /// Scanned segment `−i(0, depth·ρ_X)` of the lifted negative imaginary axis.
    pub depth: f64,
    /// Chart radius for the candidate points.
    pub chart_radius: f64,
    /// Radius (in `z/ρ_X`) of the circles around control points.
    pub control_radius: f64,
    /// Offsets (in units of `ρ_X`) applied to each midpoint between resonances.
    pub offsets: Vec<Complex64>,
    /// Vanishing threshold relative to the local scale.
    pub vanishing_tol: f64,
    /// Laurent quadrature settings.
    pub laurent: LaurentConfig,
}

impl ScanConfig {
    /// The scan of `−i(0, 2.5ρ_X)` with control offsets `0`, `±0.1ρ_X`
    /// horizontally and `±0.1ρ_X` vertically.
    pub fn standard() -> Self {
        ScanConfig {
            depth: 2.5,
            chart_radius: default_chart_radius(),
            control_radius: 0.05,
            offsets: alloc::vec![
                ZERO,
                Complex64::new(0.1, 0.0),
                Complex64::new(-0.1, 0.0),
                Complex64::new(0.0, 0.1),
                Complex64::new(0.0, -0.1),
            ],
            vanishing_tol: 1e-8,
            laurent: LaurentConfig::default(),
        }
    }
}

/// Result of a circle integral at a point where no pole is expected.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlPoint {
    /// Centre (scaled variable `Z`).
    pub z: Complex64,
    /// Region in which the sheet is labelled.
    pub region: i64,
    /// Sheet.
    pub eps: SheetSignature,
    /// `|(1/2πi)∮ R̃ dZ|`.
    pub circle_integral: f64,
    /// `radius·max|R̃|` on the circle.
    pub local_scale: f64,
    /// `circle_integral < vanishing_tol·local_scale`.
    pub clean: bool,
}

/// Outcome of a resonance scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanReport {
    /// Residue records at the candidates `−iρ_X(n+1/2)` inside the segment,
    /// ordered by `(n, ε)`.
    pub records: Vec<ResidueRecord>,
    /// Candidate indices at which every record has a simple pole.
    pub detected: Vec<usize>,
    /// Control points between the candidates.
    pub controls: Vec<ControlPoint>,
    /// Circle integral on the physical segment `−i(0, ρ_X/2)`.
    pub physical: ControlPoint,
}

impl ScanReport {
    /// All candidates detected as simple poles, and every control point clean.
    pub fn passed(&self) -> bool {
        let candidates = self.records.iter().map(|r| r.n).max().map_or(0, |k| k + 1);
        self.detected.len() == candidates && self.controls.iter().all(|c| c.clean) && self.physical.clean
    }
}

fn control_integral(
    lifted: &LiftedResolvent<'_>,
    z: Complex64,
    region: i64,
    eps: &SheetSignature,
    config: &ScanConfig,
) -> Result<ControlPoint> {
    let r = rho_x();
    let plain_z = z / r;
    if !lifted.atlas.contains(plain_z, region) {
        return Err(CoreError::AtlasMembership { z: plain_z, region });
    }
    let inner = LiftedResolvent { integrator: lifted.integrator.inner(), ..*lifted };
    let coeffs =
        laurent_coefficients(lifted.integrator.exec, z, config.control_radius * r, &config.laurent, &|big_z| {
            let p = inner.atlas.section(big_z / r, region, eps)?;
            inner.value(&p.to_scaled(), region)
        })?;
    let circle_integral = coeffs.c_minus1.norm();
    Ok(ControlPoint {
        z,
        region,
        eps: eps.clone(),
        circle_integral,
        local_scale: coeffs.local_scale,
        clean: circle_integral < config.vanishing_tol * coeffs.local_scale,
    })
}

/// Scan the lift of `−i(0, depth·ρ_X)`: extract residues at every
/// `−iρ_X(n+1/2)` inside the segment on every chart sheet, test for spurious
/// poles on two sheets at each control point between consecutive candidates,
/// and confirm analyticity on the physical segment above the first candidate.
pub fn resonance_scan(lifted: &LiftedResolvent<'_>, config: &ScanConfig) -> Result<ScanReport> {
    let n_max = lifted.atlas.n_max;
    let candidates: Vec<usize> = (0..=n_max).filter(|&n| (n as f64 + 0.5) < config.depth).collect();
    let mut records = Vec::new();
    let mut detected = Vec::new();
    for &n in &candidates {
        let mut all_simple = true;
        for eps in SheetSignature::enumerate(n_max).into_iter().filter(|e| e.in_chart_set(n)) {
            let rec = extract_residue(lifted, n, &eps, config.chart_radius, &config.laurent)?;
            all_simple &= rec.order == 1;
            records.push(rec);
        }
        if all_simple {
            detected.push(n);
        }
    }
    let r = rho_x();
    let mut controls = Vec::new();
    for k in 1..candidates.len().max(1) + 1 {
        let mid = -I * (k as f64) * r;
        if (k as f64) >= config.depth {
            break;
        }
        let region = k as i64 - 1;
        let base = SheetSignature::all_plus(n_max);
        let sheets = [base.clone(), base.flipped(region as usize)];
        for offset in &config.offsets {
            for eps in &sheets {
                controls.push(control_integral(lifted, mid + offset * r, region, eps, config)?);
            }
        }
    }
    let physical = control_integral(lifted, -I * 0.25 * r, -1, &SheetSignature::all_plus(n_max), config)?;
    Ok(ScanReport { records, detected, controls, physical })
}

/// `|W|`-normalised ratio of the derived and reference residue constants,
/// `predicted_derived/predicted = −i/(4√3)`.
pub fn derived_to_reference_ratio() -> Complex64 {
    -I / (4.0 * SQRT_3)
}
