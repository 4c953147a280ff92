//! The Riemann surfaces `M_n = {(z, ζ) : ζ² = x_n(z)² − 1}`, `x_n(z) = (i/z)(n+1/2)`,
//! their fibre product `M_(N)` over `n = 0..=N`, the `ρ_X`-rescaled surface
//! `M_(X,N)`, and the functions lifted to them.
//!
//! # Sheets
//!
//! The physical section is `ζ_n⁺(z) = √(x_n+1)√(x_n−1)`. It is cut where `x_n`
//! is real in `[−1,1]`, i.e. along `±i[n+1/2, ∞)`. Its continuation from
//! `Re z > 0` across the lower cut is `g(x_n) = i√(1−x_n²)`, which agrees with
//! `ζ_n⁺` wherever `Im x_n > 0` (in particular for `Re z > 0`, `Im z < 0`).
//!
//! Region `m` of the atlas is a neighbourhood of `−i[m+1/2, m+3/2)` (region
//! `−1` covers `−i[0, 1/2)`). There the sheet label `ε` of a point is read
//! against `g(x_k)` for `k ≤ m` and against `ζ_k⁺` for `k > m`, so the point
//! `(z, ε₀b₀(z), …, ε_N b_N(z))` is holomorphic in `z` on the region minus the
//! branch points.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::algebra::rho_x;
use crate::branch::{enumerate_s_nonnegative, two_sqrt_product, EllipseSpec};
use crate::contour::{resolvent_scale, Integrator, ResolventEngine};
use crate::error::{CoreError, Result};
use crate::math::{cis, distance_to_half_integer_axis, floor, sqrt, I, ZERO};
use crate::symbols::{phi_zu, psi, SixthRoot, SpectralSymbol};

/// Guard around the branch points `(±i(n+1/2), 0)` (distance in `|ζ|`).
pub const BRANCH_GUARD: f64 = 1e-9;
/// Distance from the `φ`-pole/zero lattice under which a point is treated
/// as a removable singularity.
pub const REMOVABLE_DETECT: f64 = 1e-6;
/// Radius of the mean-value circle used at removable singularities.
pub const REMOVABLE_RADIUS: f64 = 1e-3;
/// Number of points on the mean-value circle.
pub const REMOVABLE_POINTS: usize = 16;
/// `C = 12π²/(ρ_X²|W|) = π²/6`, the constant in front of `G̃_(X,n)`.
pub const BRANCH_CONSTANT: f64 = PI * PI / 6.0;

/// `x_n(z) = (i/z)(n+1/2)`.
pub fn x_n(n: i64, z: Complex64) -> Result<Complex64> {
    if z == ZERO {
        return Err(CoreError::ZeroArgument);
    }
    Ok(I / z * (n as f64 + 0.5))
}

/// `g(x) = i√(1−x²)`: the branch analytic across `(−1, 1)` that equals
/// `√(x+1)√(x−1)` on `Im x > 0`.
pub fn cut_crossing_branch(x: Complex64) -> Complex64 {
    let t = Complex64::new(1.0, 0.0) - x * x;
    if t.im == 0.0 && t.re < 0.0 {
        // x real with |x| > 1: take the limit from Im x > 0.
        return two_sqrt_product(Complex64::new(x.re, 0.0)).unwrap_or(ZERO);
    }
    I * t.sqrt()
}

/// Physical lift `ζ_n⁺(z) = √(x_n+1)√(x_n−1)`.
///
/// On the lower cut `−i[n+1/2, ∞)` the boundary value from `Re z > 0` is
/// returned (`i√(1 − ((n+1/2)/v)²)` at `z = −iv`); on `−i(0, n+1/2)` the value
/// is the real number `−√(((n+1/2)/v)² − 1)`. The upper cut is rejected.
pub fn zeta_plus(n: i64, z: Complex64) -> Result<Complex64> {
    let x = x_n(n, z)?;
    if x.im == 0.0 && x.re.abs() <= 1.0 {
        if z.im < 0.0 {
            return Ok(Complex64::new(0.0, sqrt(1.0 - x.re * x.re)));
        }
        return Err(CoreError::OnBranchCut(z));
    }
    two_sqrt_product(x)
}

/// Sign vector `ε ∈ {±1}^{N+1}` selecting a sheet of `M_(N)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SheetSignature(Vec<i8>);

impl SheetSignature {
    /// Signature from explicit signs (each must be `±1`).
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.is_empty() || signs.iter().any(|s| *s != 1 && *s != -1) {
            return Err(CoreError::Domain("sheet signature entries must be +1 or -1"));
        }
        Ok(SheetSignature(signs))
    }

    /// `(+1, …, +1)` with `N+1` entries.
    pub fn all_plus(n_max: usize) -> Self {
        SheetSignature(alloc::vec![1; n_max + 1])
    }

    /// All `2^{N+1}` signatures in lexicographic order (`+1` before `−1`).
    pub fn enumerate(n_max: usize) -> Vec<SheetSignature> {
        let len = n_max + 1;
        (0..(1usize << len))
            .map(|bits| SheetSignature((0..len).map(|k| if bits >> (len - 1 - k) & 1 == 1 { -1 } else { 1 }).collect()))
            .collect()
    }

    /// Signs.
    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    /// Number of components `N+1`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false (signatures have at least one component).
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sign of component `k`.
    pub fn get(&self, k: usize) -> i8 {
        self.0[k]
    }

    /// Copy with component `k` flipped.
    pub fn flipped(&self, k: usize) -> Self {
        let mut s = self.0.clone();
        s[k] = -s[k];
        SheetSignature(s)
    }

    /// Membership in `𝓔_n = {ε : ε_n = +1}`.
    pub fn in_chart_set(&self, n: usize) -> bool {
        self.0.get(n) == Some(&1)
    }
}

/// A point of `M_(N)` (plain) or of `M_(X,N)` (scaled).
#[derive(Debug, Clone, PartialEq)]
pub struct SurfacePoint {
    /// Base point.
    pub z: Complex64,
    /// Fibre coordinates `ζ₀, …, ζ_N`.
    pub zeta: Vec<Complex64>,
    /// `true` for `M_(X,N)`: `(z, ζ) ∈ M_(X,N) ⟺ (z/ρ_X, ρ_X ζ) ∈ M_(N)`.
    pub scaled: bool,
}

/// Tolerance on the defining equations when a point is constructed.
pub const SURFACE_TOL: f64 = 1e-10;

impl SurfacePoint {
    /// Plain point, validated against `ζ_n² = x_n² − 1`.
    pub fn plain(z: Complex64, zeta: Vec<Complex64>) -> Result<Self> {
        let p = SurfacePoint { z, zeta, scaled: false };
        p.validate()?;
        Ok(p)
    }

    /// Scaled point, validated through its plain image.
    pub fn scaled(z: Complex64, zeta: Vec<Complex64>) -> Result<Self> {
        let p = SurfacePoint { z, zeta, scaled: true };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        if self.zeta.is_empty() {
            return Err(CoreError::Domain("surface point needs at least one fibre coordinate"));
        }
        if self.defining_residual()? > SURFACE_TOL {
            return Err(CoreError::Domain("point does not satisfy the defining equations"));
        }
        Ok(())
    }

    /// `N` (the largest component index).
    pub fn n_max(&self) -> usize {
        self.zeta.len() - 1
    }

    /// The plain image `(z/ρ_X, ρ_X ζ)` of a scaled point (identity on plain
    /// points).
    pub fn to_plain(&self) -> SurfacePoint {
        if !self.scaled {
            return self.clone();
        }
        let r = rho_x();
        SurfacePoint { z: self.z / r, zeta: self.zeta.iter().map(|v| v * r).collect(), scaled: false }
    }

    /// The scaled image `(ρ_X z, ζ/ρ_X)` of a plain point (identity on scaled
    /// points).
    pub fn to_scaled(&self) -> SurfacePoint {
        if self.scaled {
            return self.clone();
        }
        let r = rho_x();
        SurfacePoint { z: self.z * r, zeta: self.zeta.iter().map(|v| v / r).collect(), scaled: true }
    }

    /// Largest residual `|ζ_n² − (x_n² − 1)| / max(1, |x_n|²)` of the plain image.
    pub fn defining_residual(&self) -> Result<f64> {
        let p = self.to_plain();
        let mut worst: f64 = 0.0;
        for (n, zeta) in p.zeta.iter().enumerate() {
            let x = x_n(n as i64, p.z)?;
            let lhs = zeta * zeta;
            let rhs = x * x - 1.0;
            worst = worst.max((lhs - rhs).norm() / (x.norm_sqr()).max(1.0));
        }
        Ok(worst)
    }
}

/// `G̃_(n)(z, ζ) = −3ψ_z(w)·φ_{z,1}(ξw)·φ_{z,1}(ξ²w)·x/(−iπζ)` with `x = x_n(z)`,
/// `w = x − ζ`, evaluated directly (no removable-singularity handling).
pub fn tilde_g_raw(symbol: &SpectralSymbol, n: i64, z: Complex64, zeta: Complex64) -> Result<Complex64> {
    if zeta.norm() < BRANCH_GUARD {
        return Err(CoreError::PoleProximity { location: z, distance: zeta.norm() });
    }
    let x = x_n(n, z)?;
    let w = x - zeta;
    if w == ZERO {
        return Err(CoreError::ZeroArgument);
    }
    let xi = SixthRoot::XI.value();
    let xi2 = SixthRoot::XI2.value();
    let core = psi(symbol, z, w)? * phi_zu(z, SixthRoot::ONE, xi * w)? * phi_zu(z, SixthRoot::ONE, xi2 * w)?;
    Ok(core * -3.0 * x / (-I * PI * zeta))
}

fn distance_to_integer_axis(v: Complex64) -> f64 {
    let nearest = crate::math::round(v.im);
    libm::hypot(v.re, v.im - nearest)
}

/// Whether `(z, ζ)` sits at a removable singularity of `G̃_(n)`: one of
/// `z c(ξ^k w)` lies on `i(Z+1/2)` while the other lies on `iZ`.
pub fn is_removable_point(n: i64, z: Complex64, zeta: Complex64) -> Result<bool> {
    let w = x_n(n, z)? - zeta;
    if w == ZERO {
        return Ok(false);
    }
    let v1 = z * crate::branch::c(SixthRoot::XI.value() * w)?;
    let v2 = z * crate::branch::c(SixthRoot::XI2.value() * w)?;
    let pole_zero = |p: Complex64, q: Complex64| {
        distance_to_half_integer_axis(p) < REMOVABLE_DETECT && distance_to_integer_axis(q) < REMOVABLE_DETECT
    };
    Ok(pole_zero(v1, v2) || pole_zero(v2, v1))
}

fn nearest_root(x: Complex64, previous: Complex64) -> Complex64 {
    let r = (x * x - 1.0).sqrt();
    if (r - previous).norm() <= (r + previous).norm() {
        r
    } else {
        -r
    }
}

/// `G̃_(n)(z, ζ)`, with removable singularities evaluated by the mean value
/// over a circle of radius [`REMOVABLE_RADIUS`] in the local coordinate `z`.
///
/// The branch points `(±i(n+1/2), 0)` are simple poles and are reported as
/// [`CoreError::PoleProximity`].
pub fn lift_g_at(symbol: &SpectralSymbol, n: i64, z: Complex64, zeta: Complex64) -> Result<Complex64> {
    match tilde_g_raw(symbol, n, z, zeta) {
        Err(CoreError::PoleProximity { location, distance }) if zeta.norm() >= BRANCH_GUARD => {
            if !is_removable_point(n, z, zeta)? {
                return Err(CoreError::PoleProximity { location, distance });
            }
            let mut acc = ZERO;
            for j in 0..REMOVABLE_POINTS {
                let zj = z + cis(2.0 * PI * j as f64 / REMOVABLE_POINTS as f64) * REMOVABLE_RADIUS;
                let zeta_j = nearest_root(x_n(n, zj)?, zeta);
                acc += tilde_g_raw(symbol, n, zj, zeta_j)?;
            }
            Ok(acc / REMOVABLE_POINTS as f64)
        }
        other => other,
    }
}

/// `G̃_(n)` at component `n` of a plain surface point.
pub fn lift_g(symbol: &SpectralSymbol, n: usize, p: &SurfacePoint) -> Result<Complex64> {
    let q = p.to_plain();
    let zeta = *q.zeta.get(n).ok_or(CoreError::Domain("component index exceeds N"))?;
    lift_g_at(symbol, n as i64, q.z, zeta)
}

/// `G̃_(X,n)(z, ζ) = −(1/3)·G̃_(n)(z/ρ_X, ρ_X ζ)` on the scaled surface.
pub fn lift_g_scaled(symbol: &SpectralSymbol, n: i64, z: Complex64, zeta: Complex64) -> Result<Complex64> {
    let r = rho_x();
    Ok(lift_g_at(symbol, n, z / r, zeta * r)? * (-1.0 / 3.0))
}

/// One of the points where a `φ`-pole of `G̃_(n)` meets a zero of the other
/// `φ` factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RemovablePoint {
    /// Component index `n`.
    pub n: i64,
    /// Integer `m` with `z c(ξ^k w) = −i(m+1/2)`.
    pub m: i64,
    /// `δ = 1` (pole at `ξ²w`) or `−1` (pole at `ξw`).
    pub delta: i8,
    /// Sign `ε`.
    pub eps: i8,
    /// `k ∈ {1, 2}` with `ξ^k w` the pole.
    pub k: u8,
    /// Base point.
    pub z: Complex64,
    /// Fibre coordinate.
    pub zeta: Complex64,
}

impl RemovablePoint {
    /// `w = x_n(z) − ζ`.
    pub fn w(&self) -> Complex64 {
        I / self.z * (self.n as f64 + 0.5) - self.zeta
    }
}

/// The four candidate points `(δ, ε) ∈ {±1}²` for given `(n, m)`:
///
/// ```text
/// z = −i(2/√3)·A·√Q/(ε|A|),   ζ = εi·|A|/(2√Q),
/// A = 2(m+1/2) − δ(n+1/2),   Q = (n+1/2)² − δ(n+1/2)(m+1/2) + (m+1/2)².
/// ```
pub fn removable_points(n: i64, m: i64) -> Vec<RemovablePoint> {
    let a_n = n as f64 + 0.5;
    let a_m = m as f64 + 0.5;
    let mut out = Vec::new();
    for delta in [1i8, -1] {
        let d = delta as f64;
        let a = 2.0 * a_m - d * a_n;
        let q = a_n * a_n - d * a_n * a_m + a_m * a_m;
        for eps in [1i8, -1] {
            let e = eps as f64;
            let z = -I * (2.0 / crate::math::SQRT_3) * a * sqrt(q) / (e * a.abs());
            let zeta = I * e * 0.5 * a.abs() / sqrt(q);
            out.push(RemovablePoint { n, m, delta, eps, k: if delta == 1 { 2 } else { 1 }, z, zeta });
        }
    }
    out
}

/// Which chart `κ_±` around `(±i(n+1/2), 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChartSign {
    /// `κ₊`: `z = i(n+1/2)/√(ζ²+1)`, neighbourhood of `+i(n+1/2)`.
    Plus,
    /// `κ₋`: `z = −i(n+1/2)/√(ζ²+1)`, neighbourhood of `−i(n+1/2)`.
    Minus,
}

fn check_chart_domain(zeta: Complex64) -> Result<()> {
    if zeta.re == 0.0 && zeta.im.abs() >= 1.0 {
        return Err(CoreError::Domain("chart coordinate must avoid i((-inf,-1] U [1,inf))"));
    }
    Ok(())
}

/// `κ_±⁻¹(ζ) = (±i(n+1/2)/√(ζ²+1), ζ) ∈ M_n`.
pub fn chart_kappa_inverse(n: i64, sign: ChartSign, zeta: Complex64) -> Result<(Complex64, Complex64)> {
    check_chart_domain(zeta)?;
    let s = match sign {
        ChartSign::Plus => 1.0,
        ChartSign::Minus => -1.0,
    };
    let root = (zeta * zeta + 1.0).sqrt();
    Ok((I * (n as f64 + 0.5) * s / root, zeta))
}

/// `κ_±(z, ζ) = ζ`, after checking that `(z, ζ)` lies in the chart image.
pub fn chart_kappa(n: i64, sign: ChartSign, z: Complex64, zeta: Complex64) -> Result<Complex64> {
    let (z_back, _) = chart_kappa_inverse(n, sign, zeta)?;
    if (z_back - z).norm() > 1e-9 * z.norm().max(1.0) {
        return Err(CoreError::Domain("point is not in the image of this chart"));
    }
    Ok(zeta)
}

/// Scaled chart around `(−iρ_X(n+1/2), 0)` of `M_(X,n)`:
/// `z = −iρ_X(n+1/2)/√(ρ_X²ζ²+1)`.
pub fn scaled_chart_inverse(n: i64, zeta: Complex64) -> Result<(Complex64, Complex64)> {
    let r = rho_x();
    let (z, _) = chart_kappa_inverse(n, ChartSign::Minus, zeta * r)?;
    Ok((z * r, zeta))
}

/// Concrete neighbourhoods `W_(m)` of the atlas, radii `r_v`, and the lifted
/// functions `F̃`, `R̃`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverAtlas {
    /// Largest component index `N`.
    pub n_max: usize,
    /// Radius `R_m` of the disks `W_{m+1/2}` around the branch points.
    pub branch_disk_radius: f64,
    /// Grid step of the `v` and `r` searches.
    pub grid_step: f64,
    /// Margin kept below the upper bounds on `c(r_v)`.
    pub margin: f64,
}

/// Radius data selected for one point of `W_(m)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusChoice {
    /// Region index.
    pub m: i64,
    /// Centre parameter `v` (the disk `W_v` is centred at `−iv`).
    pub v: f64,
    /// Contour radius `r_v`.
    pub r: f64,
    /// Distance of `i(Z+1/2)` from `z·∂E` in the ellipse's quadratic form.
    pub membership_margin: f64,
}

impl CoverAtlas {
    /// Atlas for `M_(N)` with `R_m = 0.2`, a `10⁻³` grid and `10⁻³` margin.
    pub fn new(n_max: usize) -> Self {
        CoverAtlas { n_max, branch_disk_radius: 0.2, grid_step: 1e-3, margin: 1e-3 }
    }

    fn v_range(&self, m: i64) -> (f64, f64) {
        if m < 0 {
            (0.0, 0.5)
        } else {
            (m as f64 + 0.5, m as f64 + 1.5)
        }
    }

    /// Radius of the disk `W_v` in region `m`: `R_m` at the left end of the
    /// range and `min(R_m, distance to both ends)` inside.
    pub fn disk_radius(&self, m: i64, v: f64) -> f64 {
        let (lo, hi) = self.v_range(m);
        if v == lo {
            return self.branch_disk_radius;
        }
        self.branch_disk_radius.min(v - lo).min(hi - v)
    }

    /// Upper bound on `c(r_v)`: always `1 + 1/(2N+3)`, and `(⌊v⌋+1/2)/v`
    /// when `v < ⌊v⌋ + 1/2`.
    pub fn c_bound(&self, v: f64) -> f64 {
        let mut bound = 1.0 + 1.0 / (2.0 * self.n_max as f64 + 3.0);
        let fl = floor(v);
        if v > 0.0 && v < fl + 0.5 {
            bound = bound.min((fl + 0.5) / v);
        }
        bound
    }

    /// `r_v`: the smallest grid radius with `c(r_v) ≤ bound − margin`.
    pub fn r_for(&self, v: f64) -> Result<f64> {
        let target = self.c_bound(v) - self.margin;
        if target <= 1.0 {
            return Err(CoreError::Domain("no admissible radius for this v"));
        }
        let r_star = target - sqrt(target * target - 1.0);
        let mut r = libm::ceil(r_star / self.grid_step - 1e-9) * self.grid_step;
        if 0.5 * (r + 1.0 / r) > target {
            r += self.grid_step;
        }
        if r >= 1.0 {
            return Err(CoreError::Domain("grid radius reached 1"));
        }
        Ok(r)
    }

    /// Whether `z ∈ W_(m)` (without selecting a radius).
    pub fn contains(&self, z: Complex64, m: i64) -> bool {
        self.choose_radius(z, m).is_ok()
    }

    fn region_bounds_ok(&self, m: i64) -> bool {
        m >= -1 && m <= self.n_max as i64
    }

    /// Select `v` (deterministic grid search) and `r_v` for `z ∈ W_(m)`,
    /// maximising the distance of `i(Z+1/2)` from `z·∂E_{c(r_v),s(r_v)}`.
    pub fn choose_radius(&self, z: Complex64, m: i64) -> Result<RadiusChoice> {
        if !self.region_bounds_ok(m) || z == ZERO && m >= 0 {
            return Err(CoreError::AtlasMembership { z, region: m });
        }
        let (lo, hi) = self.v_range(m);
        let steps = libm::round((hi - lo) / self.grid_step) as usize;
        let mut best: Option<RadiusChoice> = None;
        for j in 0..steps {
            let v = lo + j as f64 * self.grid_step;
            let centre = Complex64::new(0.0, -v);
            if (z - centre).norm() >= self.disk_radius(m, v) {
                continue;
            }
            let Ok(r) = self.r_for(v) else { continue };
            let margin = membership_margin(z, r)?;
            if margin <= 1e-9 {
                continue;
            }
            if best.is_none_or(|b| margin > b.membership_margin) {
                best = Some(RadiusChoice { m, v, r, membership_margin: margin });
            }
        }
        best.ok_or(CoreError::AtlasMembership { z, region: m })
    }

    /// Smallest region index whose neighbourhood contains `z`.
    pub fn region_of(&self, z: Complex64) -> Option<i64> {
        (-1..=self.n_max as i64).find(|&m| self.contains(z, m))
    }

    /// Branch used for component `k` in region `m`.
    pub fn reference_branch(&self, k: usize, z: Complex64, m: i64) -> Result<Complex64> {
        let x = x_n(k as i64, z)?;
        if (k as i64) <= m {
            Ok(cut_crossing_branch(x))
        } else {
            two_sqrt_product(x)
        }
    }

    /// The point `(z, ε_k·b_k(z))` of `M_(N)` labelled by `ε` in region `m`.
    pub fn section(&self, z: Complex64, m: i64, eps: &SheetSignature) -> Result<SurfacePoint> {
        if eps.len() != self.n_max + 1 {
            return Err(CoreError::Domain("signature length must be N+1"));
        }
        let zeta = (0..=self.n_max)
            .map(|k| Ok(self.reference_branch(k, z, m)? * eps.get(k) as f64))
            .collect::<Result<Vec<_>>>()?;
        SurfacePoint::plain(z, zeta)
    }

    /// The physical point `σ⁺(z) = (z, ζ₀⁺(z), …, ζ_N⁺(z))`.
    pub fn physical(&self, z: Complex64) -> Result<SurfacePoint> {
        let zeta = (0..=self.n_max).map(|k| zeta_plus(k as i64, z)).collect::<Result<Vec<_>>>()?;
        SurfacePoint::plain(z, zeta)
    }

    /// Sheet label of a plain point in region `m` (components with
    /// `ζ_k = 0` are labelled `+1`).
    pub fn signature(&self, p: &SurfacePoint, m: i64) -> Result<SheetSignature> {
        let q = p.to_plain();
        let signs = q
            .zeta
            .iter()
            .enumerate()
            .map(|(k, zeta)| {
                let b = self.reference_branch(k, q.z, m)?;
                if b.norm() < BRANCH_GUARD {
                    return Ok(1);
                }
                Ok(if (zeta / b).re >= 0.0 { 1 } else { -1 })
            })
            .collect::<Result<Vec<i8>>>()?;
        SheetSignature::new(signs)
    }

    /// Point of `M_(N)` in the chart `κ₋` around `(−i(n+1/2), 0)`: component
    /// `n` is the chart coordinate, the others follow `ε` in region `n`.
    pub fn chart_point(&self, n: usize, zeta: Complex64, eps: &SheetSignature) -> Result<SurfacePoint> {
        let (z, _) = chart_kappa_inverse(n as i64, ChartSign::Minus, zeta)?;
        let mut p = self.section_lenient(z, n as i64, eps)?;
        p.zeta[n] = zeta;
        SurfacePoint::plain(p.z, p.zeta)
    }

    /// Scaled analogue of [`CoverAtlas::chart_point`] on `M_(X,N)`.
    pub fn scaled_chart_point(&self, n: usize, zeta: Complex64, eps: &SheetSignature) -> Result<SurfacePoint> {
        Ok(self.chart_point(n, zeta * rho_x(), eps)?.to_scaled())
    }

    fn section_lenient(&self, z: Complex64, m: i64, eps: &SheetSignature) -> Result<SurfacePoint> {
        if eps.len() != self.n_max + 1 {
            return Err(CoreError::Domain("signature length must be N+1"));
        }
        let zeta = (0..=self.n_max)
            .map(|k| Ok(self.reference_branch(k, z, m)? * eps.get(k) as f64))
            .collect::<Result<Vec<_>>>()?;
        Ok(SurfacePoint { z, zeta, scaled: false })
    }

    /// `F_(m)(z) = F_{r_v}(z) + 4πi[Σ_{n∈S_{r_v,z}∩N} G_(n)(z) − Σ_{0≤n≤m} G_(n)(z)]`.
    ///
    /// Off `iR` this equals `F(z) − 4πi Σ_{n≤m} G_(n)(z)`; the bracket vanishes
    /// wherever `S_{r_v,z} ∩ N = {0, …, m}`, and its terms are evaluated only
    /// away from their cuts.
    pub fn f_m(&self, integrator: &Integrator<'_>, symbol: &SpectralSymbol, z: Complex64, m: i64) -> Result<Complex64> {
        let choice = self.choose_radius(z, m)?;
        let base = integrator.f_r(symbol, z, choice.r)?.value;
        let inside = enumerate_s_nonnegative(choice.r, z)?;
        let mut correction = ZERO;
        for n in 0..=m.max(-1) {
            if n >= 0 && !inside.contains(&n) {
                correction -= g_n_off_cut(symbol, n, z)?;
            }
        }
        for &n in &inside {
            if n > m {
                correction += g_n_off_cut(symbol, n, z)?;
            }
        }
        Ok(base + 4.0 * PI * I * correction)
    }

    /// `F̃(p) = F_(m)(z) + 4πi Σ_{n≤m} G̃_(n)(z, ζ_n)
    ///        + 4πi Σ_{n>m, ε_n=−1} [G̃_(n)(z, ζ_n) − G̃_(n)(z, −ζ_n)]`.
    pub fn lift_f(
        &self,
        integrator: &Integrator<'_>,
        symbol: &SpectralSymbol,
        p: &SurfacePoint,
        m: i64,
    ) -> Result<Complex64> {
        Ok(self.f_m(integrator, symbol, p.to_plain().z, m)? + self.lift_f_singular(symbol, p, m)?)
    }

    /// The `G̃` terms of [`CoverAtlas::lift_f`] (everything except `F_(m)`).
    pub fn lift_f_singular(&self, symbol: &SpectralSymbol, p: &SurfacePoint, m: i64) -> Result<Complex64> {
        let q = p.to_plain();
        if q.zeta.len() != self.n_max + 1 {
            return Err(CoreError::Domain("point has the wrong number of components"));
        }
        let mut total = ZERO;
        for (n, &zeta) in q.zeta.iter().enumerate() {
            let ni = n as i64;
            if ni <= m {
                total += lift_g_at(symbol, ni, q.z, zeta)?;
            } else {
                let plus = two_sqrt_product(x_n(ni, q.z)?)?;
                if (zeta / plus).re < 0.0 {
                    total += lift_g_at(symbol, ni, q.z, zeta)? - lift_g_at(symbol, ni, q.z, -zeta)?;
                }
            }
        }
        Ok(total * (4.0 * PI * I))
    }

    /// Trace a point along a polyline by nearest-root tracking.
    ///
    /// `path` lists the vertices after the start point. Each segment is cut
    /// into steps of at most `0.01` (in `z/ρ_X` for scaled points), halved
    /// until every component moves by less than `0.1|ζ|` (or `0.05` near zero)
    /// and the nearer root is at most half as far as the other one.
    pub fn continue_along_path(&self, start: &SurfacePoint, path: &[Complex64]) -> Result<Vec<SurfacePoint>> {
        let scaled = start.scaled;
        let r = if scaled { rho_x() } else { 1.0 };
        let mut current = start.to_plain();
        let mut trace = alloc::vec![start.clone()];
        for &vertex in path {
            let target = vertex / r;
            self.check_segment(current.z, target)?;
            let steps = libm::ceil((target - current.z).norm() / 0.01).max(1.0) as usize;
            let from = current.z;
            for s in 1..=steps {
                let z_next = from + (target - from) * (s as f64 / steps as f64);
                current = track_step(&current, z_next, 0)?;
            }
            trace.push(if scaled { current.to_scaled() } else { current.clone() });
        }
        Ok(trace)
    }

    fn check_segment(&self, a: Complex64, b: Complex64) -> Result<()> {
        for n in 0..=self.n_max {
            for sgn in [1.0, -1.0] {
                let bp = Complex64::new(0.0, sgn * (n as f64 + 0.5));
                let d = segment_distance(a, b, bp);
                if d < 1e-3 {
                    return Err(CoreError::PoleProximity { location: bp, distance: d });
                }
            }
        }
        if segment_distance(a, b, ZERO) < 1e-3 {
            return Err(CoreError::PoleProximity { location: ZERO, distance: segment_distance(a, b, ZERO) });
        }
        Ok(())
    }
}

fn segment_distance(a: Complex64, b: Complex64, p: Complex64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    (a + d * t - p).norm()
}

fn track_step(p: &SurfacePoint, z_next: Complex64, depth: u32) -> Result<SurfacePoint> {
    let mut zeta = Vec::with_capacity(p.zeta.len());
    let mut ok = true;
    for (n, &old) in p.zeta.iter().enumerate() {
        let x = x_n(n as i64, z_next)?;
        let root = (x * x - 1.0).sqrt();
        let (near, far) = if (root - old).norm() <= (root + old).norm() { (root, -root) } else { (-root, root) };
        let moved = (near - old).norm();
        let limit = (0.1 * old.norm()).max(0.05);
        if moved > limit || (near - old).norm() * 2.0 > (far - old).norm() && old.norm() > 0.05 {
            ok = false;
            break;
        }
        zeta.push(near);
    }
    if ok {
        return Ok(SurfacePoint { z: z_next, zeta, scaled: false });
    }
    if depth >= 24 {
        return Err(CoreError::AmbiguousTracking(z_next));
    }
    let mid = (p.z + z_next) * 0.5;
    let half = track_step(p, mid, depth + 1)?;
    track_step(&half, z_next, depth + 1)
}

/// `G_(n)(z)` at any `z ≠ 0` off the cut `x_n(z) ∈ [−1,1]` (this includes the
/// parts of `iR` where the physical section is analytic).
pub fn g_n_off_cut(symbol: &SpectralSymbol, n: i64, z: Complex64) -> Result<Complex64> {
    let x = x_n(n, z)?;
    let plus = two_sqrt_product(x)?;
    tilde_g_raw(symbol, n, z, plus)
}

/// Distance, in the ellipse's quadratic form, of the nearest `i(n+1/2)/z`
/// from `∂E_{c(r),s(r)}`.
pub fn membership_margin(z: Complex64, r: f64) -> Result<f64> {
    let e = EllipseSpec::new(r)?;
    if z == ZERO {
        return Ok(f64::INFINITY);
    }
    let reach = z.norm() * e.semi_major() + 1.0;
    let lo = floor(-reach - 0.5) as i64;
    let hi = libm::ceil(reach - 0.5) as i64;
    let mut best = f64::INFINITY;
    for n in lo..=hi {
        let q = I * (n as f64 + 0.5) / z;
        best = best.min((e.level(q) - 1.0).abs());
    }
    Ok(best)
}

/// Which part of `R̃` a [`LiftedResolvent`] evaluates.
#[derive(Debug, Clone, Copy)]
pub enum RegularPart<'a> {
    /// The full lift `R̃ = H(z/ρ_X) + (πi/(|W|ρ_X²))·F̃(z/ρ_X, ρ_X ζ)`.
    Full(&'a ResolventEngine),
    /// Only `(πi/(|W|ρ_X²))·4πi·Σ G̃` (the terms of `F̃` built from `G̃`).
    ///
    /// `H` and `F_(m)` are holomorphic on each region, so this part carries
    /// every pole and residue of `R̃` at a fraction of the cost.
    SingularOnly,
}

/// The lift `R̃_(N)` of the resolvent coefficient to `M_(X,N)`.
#[derive(Debug, Clone, Copy)]
pub struct LiftedResolvent<'a> {
    /// Atlas of `M_(N)`.
    pub atlas: CoverAtlas,
    /// Quadrature for `F_(m)`.
    pub integrator: Integrator<'a>,
    /// Spectral symbol.
    pub symbol: &'a SpectralSymbol,
    /// Part of `R̃` to evaluate.
    pub regular: RegularPart<'a>,
}

impl<'a> LiftedResolvent<'a> {
    /// Full lift using the holomorphic part of `engine`.
    pub fn full(atlas: CoverAtlas, integrator: Integrator<'a>, engine: &'a ResolventEngine) -> Self {
        LiftedResolvent { atlas, integrator, symbol: engine.symbol(), regular: RegularPart::Full(engine) }
    }

    /// Singular part only.
    pub fn singular_only(atlas: CoverAtlas, integrator: Integrator<'a>, symbol: &'a SpectralSymbol) -> Self {
        LiftedResolvent { atlas, integrator, symbol, regular: RegularPart::SingularOnly }
    }

    /// Whether the holomorphic part `H` and `F_(m)` are included.
    pub fn includes_regular_part(&self) -> bool {
        matches!(self.regular, RegularPart::Full(_))
    }

    /// `R̃_(N)(p)` at a scaled point `p` presented in region `m`.
    ///
    /// Requires `Im z < 0` and `|Im z| < (N + 3/2)ρ_X`.
    pub fn value(&self, p: &SurfacePoint, m: i64) -> Result<Complex64> {
        if !p.scaled {
            return Err(CoreError::Domain("the lifted resolvent lives on the scaled surface"));
        }
        let r = rho_x();
        if p.z.im >= 0.0 || -p.z.im >= (self.atlas.n_max as f64 + 1.5) * r {
            return Err(CoreError::Domain("lifted resolvent needs -(N+3/2) rho_X < Im z < 0"));
        }
        let plain = p.to_plain();
        let k = PI * I / resolvent_scale();
        match self.regular {
            RegularPart::Full(engine) => {
                let h = engine.holomorphic_part(plain.z)?.value;
                let f = self.atlas.lift_f(&self.integrator, self.symbol, &plain, m)?;
                Ok(h + k * f)
            }
            RegularPart::SingularOnly => Ok(k * self.atlas.lift_f_singular(self.symbol, &plain, m)?),
        }
    }

    /// `R̃_(N)` on the physical sheet over `z` (scaled variable), presented in
    /// the smallest region containing `z/ρ_X`.
    ///
    /// Off the imaginary axis and outside every region the physical sheet
    /// needs no presentation: there `F̃ = F`, evaluated on the unit circle.
    pub fn physical_value(&self, z: Complex64) -> Result<Complex64> {
        let plain_z = z / rho_x();
        let p = self.atlas.physical(plain_z)?;
        if let Some(m) = self.atlas.region_of(plain_z) {
            return self.value(&p.to_scaled(), m);
        }
        if plain_z.re == 0.0 {
            return Err(CoreError::AtlasMembership { z: plain_z, region: -1 });
        }
        let f = self.integrator.f_unit(self.symbol, plain_z)?.value;
        let k = PI * I / resolvent_scale();
        match self.regular {
            RegularPart::Full(engine) => Ok(engine.holomorphic_part(plain_z)?.value + k * f),
            RegularPart::SingularOnly => Ok(ZERO),
        }
    }
}
