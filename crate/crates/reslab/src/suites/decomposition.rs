//! Contour deformation `F = F_r + 2πi G_r`, evenness of `F` and its sixth
//! order zero at the origin.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use reslab_core::contour::radius_for_semi_axis;

use super::{rel, SuiteContext, Worst};
use crate::error::Result;
use crate::grids;
use crate::report::{Check, SuiteReport};

/// Points of the deformation grid.
pub const GRID_POINTS: usize = 20;
const EVENNESS_POINTS: usize = 20;

pub(super) fn run(ctx: &SuiteContext<'_>) -> Result<SuiteReport> {
    let tol = &ctx.config.tolerances;
    let integrator = ctx.integrator();
    let symbol = &ctx.symbol;

    let mut grid = Worst::new();
    let mut crossing = 0;
    for (z, r) in grids::admissible_grid(ctx.config.seed, GRID_POINTS)? {
        let report = integrator.check_decomposition(symbol, z, r)?;
        grid.update(report.rel_residual, z);
        crossing += usize::from(!report.s_set.is_empty());
    }

    let z_ref = Complex64::from_polar(0.9, -PI / 6.0);
    let reference = integrator.check_decomposition(symbol, z_ref, radius_for_semi_axis(1.2)?)?;

    let mut rng = grids::rng(ctx.config.seed, 4);
    let mut evenness = Worst::new();
    for _ in 0..EVENNESS_POINTS {
        let z = Complex64::new(rng.random_range(-1.5..1.5), rng.random_range(-0.45..0.45));
        let a = integrator.f_unit(symbol, z)?.value;
        let b = integrator.f_unit(symbol, -z)?.value;
        evenness.update(rel(a, b), z);
    }

    let direction = Complex64::from_polar(1.0, 0.4);
    let sixth = |t: f64| -> Result<f64> {
        let z = direction * t;
        Ok((integrator.f_unit(symbol, z)?.value / z.powi(6)).norm())
    };
    let ratio = sixth(1e-2)? / sixth(1e-3)?;
    let spread = if ratio.is_finite() && ratio > 0.0 { ratio.max(1.0 / ratio) } else { f64::INFINITY };
    let at_zero = integrator.f_unit(symbol, Complex64::new(0.0, 0.0))?.value.norm();

    let checks = vec![
        Check::new("decomposition.grid", "F = F_r + 2πi·G_r for admissible (z, r)", grid.value, tol.deformation)
            .with_note(format!("{}; {crossing} of {GRID_POINTS} points cross residues", grid.note())),
        Check::new(
            "decomposition.reference_point",
            "F = F_r + 2πi·G_r at z = 0.9e^{−iπ/6}, c(r) = 1.2 (residues n = −1, 0 crossed)",
            reference.rel_residual,
            tol.deformation,
        ),
        Check::new("decomposition.evenness", "F(−z) = F(z)", evenness.value, tol.evenness).with_note(evenness.note()),
        Check::new(
            "decomposition.flatness",
            "F vanishes to sixth order at 0: |F(z)/z⁶| stable between |z| = 10⁻² and 10⁻³",
            spread,
            tol.flatness_ratio,
        )
        .with_note(format!("ratio {ratio:.6}")),
        Check::new("decomposition.origin", "F(0) = 0", at_zero, 0.0),
    ];
    Ok(SuiteReport::new("decomposition", checks))
}
