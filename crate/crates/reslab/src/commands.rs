//! Single-value and table queries behind the `resolvent`, `continue`,
//! `spherical`, `residues` and `scan` subcommands.

use std::str::FromStr;

use num_complex::Complex64;
use reslab_core::algebra::{rho_x, SpectralParam};
use reslab_core::contour::{ResolventEngine, ResolventValue};
use reslab_core::resonance::{
    default_chart_radius, extract_residue, resonance_scan, LaurentConfig, ResidueRecord, ScanConfig, ScanReport,
};
use reslab_core::spherical::{spherical_phi, BasePoint};
use reslab_core::surface::{zeta_plus, CoverAtlas, SheetSignature, SurfacePoint};
use serde::Serialize;

use crate::error::{AppError, Result};
use crate::format::Cx;
use crate::suites::{residues, SuiteContext};

/// Which presentation of the resolvent to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sheet {
    /// The half-line formula above `γ₊`, the continuation below it.
    Auto,
    /// The continuation from the upper half-plane (principal sheet).
    Principal,
    /// One counterclockwise turn around the logarithmic point `0`.
    Rotated,
}

impl FromStr for Sheet {
    type Err = AppError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Sheet::Auto),
            "principal" => Ok(Sheet::Principal),
            "rotated" => Ok(Sheet::Rotated),
            other => Err(AppError::Usage(format!("unknown sheet {other:?}; use auto, principal or rotated"))),
        }
    }
}

/// `resolvent --z` output.
#[derive(Debug, Clone, Serialize)]
pub struct ResolventPoint {
    /// Spectral point.
    pub z: Cx,
    /// `[R(z)f](y)`.
    pub value: Cx,
    /// Quadrature error estimate.
    pub err_estimate: f64,
    /// Presentation used (`upper`, `principal` or `rotated`).
    pub representation: &'static str,
}

/// One plot row `(Re z, Im z, Re value, Im value)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PlotRow {
    /// Re z.
    pub re_z: f64,
    /// Im z.
    pub im_z: f64,
    /// Re of the value (`NaN` where the evaluation failed).
    pub re_val: f64,
    /// Im of the value (`NaN` where the evaluation failed).
    pub im_val: f64,
}

fn evaluate(engine: &ResolventEngine, z: Complex64, sheet: Sheet) -> Result<(ResolventValue, &'static str)> {
    Ok(match sheet {
        Sheet::Rotated => (engine.r_rotated(z)?, "rotated"),
        Sheet::Principal => (engine.r_below(z)?, "principal"),
        Sheet::Auto => {
            if z.im > 0.0 && !engine.below_gamma_plus(z / rho_x()) {
                (engine.r_upper(z)?, "upper")
            } else {
                (engine.r_below(z)?, "principal")
            }
        }
    })
}

/// `[R(z)f](y)` at one point.
pub fn resolvent_point(ctx: &SuiteContext<'_>, z: Complex64, sheet: Sheet) -> Result<ResolventPoint> {
    let engine = ctx.engine()?;
    let (v, representation) = evaluate(&engine, z, sheet)?;
    Ok(ResolventPoint { z: z.into(), value: v.value.into(), err_estimate: v.error_estimate, representation })
}

/// Rectangle `[re0, re1] × [im0, im1]` sampled on an `nx × ny` grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// `[re0, re1, im0, im1]`.
    pub bounds: [f64; 4],
    /// `[nx, ny]`, both at least 1.
    pub steps: [usize; 2],
}

impl GridSpec {
    /// Grid nodes, row by row (Im outer, Re inner).
    pub fn points(&self) -> Vec<Complex64> {
        let [re0, re1, im0, im1] = self.bounds;
        let at = |a: f64, b: f64, k: usize, n: usize| if n <= 1 { a } else { a + (b - a) * k as f64 / (n - 1) as f64 };
        let [nx, ny] = self.steps;
        (0..ny).flat_map(|j| (0..nx).map(move |i| Complex64::new(at(re0, re1, i, nx), at(im0, im1, j, ny)))).collect()
    }
}

/// Plot data of the resolvent over a grid; failed points carry `NaN` and are
/// counted in the second return value.
pub fn resolvent_grid(ctx: &SuiteContext<'_>, grid: &GridSpec, sheet: Sheet) -> Result<(Vec<PlotRow>, usize)> {
    let engine = ctx.engine()?;
    let mut failed = 0;
    let rows = grid
        .points()
        .into_iter()
        .map(|z| {
            let value = evaluate(&engine, z, sheet).map(|(v, _)| v.value).unwrap_or_else(|_| {
                failed += 1;
                Complex64::new(f64::NAN, f64::NAN)
            });
            PlotRow { re_z: z.re, im_z: z.im, re_val: value.re, im_val: value.im }
        })
        .collect();
    Ok((rows, failed))
}

/// One step of a sheet trace.
#[derive(Debug, Clone, Serialize)]
pub struct TraceStep {
    /// Step index.
    pub step: usize,
    /// Base point.
    pub z: Cx,
    /// Fibre coordinates `(ζ₀, …, ζ_N)`.
    pub zeta: Vec<Cx>,
    /// Sheet relative to the physical section: `ε_k = ±1` with
    /// `ζ_k = ε_k ζ_k⁺(z)`, `0` where `ζ_k⁺` is undefined (on its cut).
    pub eps: Vec<i8>,
}

fn relative_signs(p: &SurfacePoint) -> Vec<i8> {
    p.zeta
        .iter()
        .enumerate()
        .map(|(k, zeta)| match zeta_plus(k as i64, p.z) {
            Ok(plus) if (zeta - plus).norm() <= (zeta + plus).norm() => 1,
            Ok(_) => -1,
            Err(_) => 0,
        })
        .collect()
}

/// Continue the point over `path[0]` with sheet `start_sheet` (relative to
/// the physical section) along the polyline `path`.
pub fn continue_path(atlas: &CoverAtlas, path: &[Complex64], start_sheet: &[i8]) -> Result<Vec<TraceStep>> {
    let (&start_z, rest) =
        path.split_first().ok_or_else(|| AppError::Usage("the path must contain at least one point".into()))?;
    if start_sheet.len() != atlas.n_max + 1 {
        return Err(AppError::Usage(format!(
            "--start-sheet has {} signs but N = {} needs {}",
            start_sheet.len(),
            atlas.n_max,
            atlas.n_max + 1
        )));
    }
    let zeta = start_sheet
        .iter()
        .enumerate()
        .map(|(k, s)| Ok(zeta_plus(k as i64, start_z)? * f64::from(*s)))
        .collect::<Result<Vec<_>>>()?;
    let start = SurfacePoint::plain(start_z, zeta)?;
    let trace = atlas.continue_along_path(&start, rest)?;
    Ok(trace
        .iter()
        .enumerate()
        .map(|(step, p)| TraceStep {
            step,
            z: p.z.into(),
            zeta: p.zeta.iter().map(|&z| z.into()).collect(),
            eps: relative_signs(p),
        })
        .collect())
}

/// `spherical` output.
#[derive(Debug, Clone, Serialize)]
pub struct SphericalPoint {
    /// Spectral parameter `(x₁, x₂)`.
    pub mu: [Cx; 2],
    /// `diag(h₁, h₂, h₃)` of the base point.
    pub y: [f64; 3],
    /// `φ_μ(y)`.
    pub value: Cx,
    /// Difference to the previous order.
    pub err_estimate: f64,
    /// Final quadrature order per Euler angle.
    pub order: usize,
}

/// `φ_μ(y)` with order doubling from `order` until `tol`.
pub fn spherical_point(mu: SpectralParam, y: BasePoint, order: usize, tol: f64) -> Result<SphericalPoint> {
    let v = spherical_phi(&mu, y, order, tol)?;
    Ok(SphericalPoint {
        mu: [mu.x1.into(), mu.x2.into()],
        y: y.diagonal(),
        value: v.value.into(),
        err_estimate: v.error_estimate,
        order: v.order,
    })
}

/// Residue records for `n` (or every `n ≤ min(2, N)`), on the all-plus sheet
/// or on every sheet of each chart set.
pub fn residue_table(ctx: &SuiteContext<'_>, n: Option<usize>, all_sheets: bool) -> Result<Vec<ResidueRecord>> {
    let atlas = ctx.config.atlas.to_core();
    if let Some(n) = n {
        if n > atlas.n_max {
            return Err(AppError::Usage(format!("--n {n} exceeds N = {}", atlas.n_max)));
        }
    }
    let engine = match ctx.spec.family {
        crate::config::Family::Gaussian => Some(ctx.engine()?),
        crate::config::Family::Spherical => None,
    };
    let lifted = residues::lifted(ctx, atlas, engine.as_ref(), &ctx.symbol);
    let indices: Vec<usize> = match n {
        Some(n) => vec![n],
        None => (0..=residues::MAX_INDEX.min(atlas.n_max)).collect(),
    };
    let config = LaurentConfig::default();
    let mut records = Vec::new();
    for n in indices {
        let mut sheets: Vec<SheetSignature> = if all_sheets {
            SheetSignature::enumerate(atlas.n_max).into_iter().filter(|e| e.in_chart_set(n)).collect()
        } else {
            vec![SheetSignature::all_plus(atlas.n_max)]
        };
        sheets.sort_by(|a, b| b.signs().cmp(a.signs()));
        for eps in sheets {
            records.push(extract_residue(&lifted, n, &eps, default_chart_radius(), &config)?);
        }
    }
    Ok(records)
}

/// Pole scan of the lifted negative imaginary axis down to `depth·ρ_X`.
pub fn scan(ctx: &SuiteContext<'_>, depth: f64) -> Result<ScanReport> {
    if !(depth.is_finite() && depth > 0.0) {
        return Err(AppError::Usage(format!("--depth must be positive, got {depth}")));
    }
    let atlas = ctx.config.atlas.to_core();
    let engine = match ctx.spec.family {
        crate::config::Family::Gaussian => Some(ctx.engine()?),
        crate::config::Family::Spherical => None,
    };
    let lifted = residues::lifted(ctx, atlas, engine.as_ref(), &ctx.symbol);
    Ok(resonance_scan(&lifted, &ScanConfig { depth, ..ScanConfig::standard() })?)
}
