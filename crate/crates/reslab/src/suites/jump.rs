//! The resolvent `z ↦ [R(z)f](y)`: agreement of its two representations on
//! their overlap and the jump across the logarithmic cut.

use std::f64::consts::PI;

use num_complex::Complex64;
use reslab_core::algebra::rho_x;
use reslab_core::contour::resolvent_scale;

use super::{rel, SuiteContext, Worst};
use crate::error::Result;
use crate::report::{Check, SuiteReport};

/// Points with `Im z < 0` at which the jump is evaluated.
pub fn jump_points() -> [Complex64; 5] {
    [
        Complex64::new(0.8, -0.5),
        Complex64::new(2.5, -1.2),
        Complex64::new(-1.7, -0.9),
        Complex64::new(0.3, -2.6),
        Complex64::new(4.0, -0.3),
    ]
}

pub(super) fn run(ctx: &SuiteContext<'_>) -> Result<SuiteReport> {
    let tol = &ctx.config.tolerances;
    let engine = ctx.engine()?;
    let rho = rho_x();

    let mut overlap = Worst::new();
    for k in 0..10 {
        let z = Complex64::new(0.3 + 0.35 * k as f64, 0.05 + 0.04 * (k % 5) as f64);
        let upper = engine.r_upper(z * rho)?.value;
        let below = engine.r_below(z * rho)?.value;
        overlap.update(rel(upper, below), z * rho);
    }

    // R(ze^{2πi}) − R(z) against ±(2πi/(ρ_X²|W|))·F(z/ρ_X).
    let coefficient = Complex64::new(0.0, 2.0 * PI / resolvent_scale());
    let mut plus_sign = Worst::new();
    let mut measured_sign = Worst::new();
    for z in jump_points() {
        let jump = engine.r_rotated(z)?.value - engine.r_below(z)?.value;
        let expected = coefficient * engine.f_scaled(z)?;
        plus_sign.update(rel(jump, expected), z);
        measured_sign.update(rel(jump, -expected), z);
    }

    let checks = vec![
        Check::new(
            "jump.overlap",
            "the continued resolvent agrees with the half-line formula above the axis",
            overlap.value,
            tol.overlap,
        )
        .with_note(overlap.note()),
        Check::new(
            "jump.log_cover",
            "R(ze^{2πi}) − R(z) = +(2πi/(ρ_X²|W|))·F(z/ρ_X) for Im z < 0",
            plus_sign.value,
            tol.jump,
        )
        .with_note(format!("{}; counterclockwise continuation", plus_sign.note())),
        Check::new(
            "jump.log_cover_orientation",
            "R(ze^{2πi}) − R(z) = −(2πi/(ρ_X²|W|))·F(z/ρ_X) for counterclockwise continuation",
            measured_sign.value,
            tol.jump,
        )
        .with_note(measured_sign.note()),
    ];
    Ok(SuiteReport::new("jump", checks))
}
