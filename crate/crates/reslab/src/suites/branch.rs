//! Branch kit: `c(w) = (w + w⁻¹)/2`, its inverse onto the unit disk, the
//! square-root product and the one-sided values on the cut `[−1, 1]`.

use num_complex::Complex64;
use rand::Rng;
use reslab_core::branch::{c, c_inv, c_inv_side, s, s_of_c_inv, two_sqrt_product, Side};

use super::{SuiteContext, Worst};
use crate::error::Result;
use crate::grids;
use crate::report::{Check, SuiteReport};

const SAMPLES: usize = 1000;
/// Offset from the cut used to approach the one-sided values.
const LIMIT_OFFSET: f64 = 1e-14;

pub(super) fn run(ctx: &SuiteContext<'_>) -> Result<SuiteReport> {
    let tol = ctx.config.tolerances.branch;
    let mut rng = grids::rng(ctx.config.seed, 1);
    let points: Vec<Complex64> = (0..SAMPLES).map(|_| grids::off_cut_point(&mut rng)).collect();

    let mut round_trip = Worst::new();
    let mut outside_disk = 0usize;
    let mut parity = Worst::new();
    let mut square = Worst::new();
    let mut composition = Worst::new();
    for &z in &points {
        let w = c_inv(z)?;
        if w.norm() >= 1.0 {
            outside_disk += 1;
        }
        round_trip.update((c(w)? - z).norm() / z.norm().max(1.0), z);
        let f = two_sqrt_product(z)?;
        parity.update((two_sqrt_product(-z)? + f).norm() / z.norm().max(1.0), z);
        square.update((f * f - (z * z - 1.0)).norm() / z.norm_sqr().max(1.0), z);
        composition.update((s(w)? - s_of_c_inv(z)?).norm() / z.norm().max(1.0), z);
    }

    let mut closed_form = Worst::new();
    let mut limits = Worst::new();
    for _ in 0..SAMPLES {
        let x: f64 = rng.random_range(-0.99..0.99);
        let root = (1.0 - x * x).sqrt();
        let on_cut = Complex64::new(x, 0.0);
        let above = c_inv_side(on_cut, Side::Above);
        let below = c_inv_side(on_cut, Side::Below);
        closed_form
            .update((above - Complex64::new(x, -root)).norm().max((below - Complex64::new(x, root)).norm()), on_cut);
        let from_above = c_inv(Complex64::new(x, LIMIT_OFFSET))?;
        let from_below = c_inv(Complex64::new(x, -LIMIT_OFFSET))?;
        limits.update((from_above - above).norm().max((from_below - below).norm()), on_cut);
    }

    let checks = vec![
        Check::new("branch.c_inv_round_trip", "c(c⁻¹(z)) = z off the cut [−1, 1]", round_trip.value, tol)
            .with_note(round_trip.note()),
        Check::new("branch.c_inv_unit_disk", "c⁻¹ maps C \\ [−1, 1] into the open unit disk", outside_disk as f64, 0.0)
            .with_note(format!("{SAMPLES} samples; count of images with |w| ≥ 1")),
        Check::new("branch.two_sqrt_product_parity", "√(z+1)√(z−1) is odd in z", parity.value, tol)
            .with_note(parity.note()),
        Check::new("branch.two_sqrt_product_square", "(√(z+1)√(z−1))² = z² − 1", square.value, tol)
            .with_note(square.note()),
        Check::new(
            "branch.s_of_c_inv",
            "s(c⁻¹(z)) from the closed form agrees with the composition",
            composition.value,
            tol,
        )
        .with_note(composition.note()),
        Check::new("branch.cut_values", "c⁻¹(x ± i0) = x ∓ i√(1 − x²) on (−1, 1)", closed_form.value, tol)
            .with_note(closed_form.note()),
        Check::new(
            "branch.cut_limits",
            "the one-sided cut values are limits of c⁻¹ from above and below",
            limits.value,
            tol,
        )
        .with_note(format!("{}; offset {LIMIT_OFFSET:e}", limits.note())),
    ];
    Ok(SuiteReport::new("branch", checks))
}
