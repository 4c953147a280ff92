//! The covering surface `M_(N)`: removable points of `G̃_(n)`, agreement of
//! the lifted `F̃` across region seams, and monodromy around branch points.

use std::f64::consts::PI;

use num_complex::Complex64;
use reslab_core::branch::c;
use reslab_core::contour::g_n;
use reslab_core::surface::{removable_points, SheetSignature};
use reslab_core::symbols::{phi_zu, SixthRoot};

use super::{rel, SuiteContext, Worst};
use crate::error::Result;
use crate::report::{Check, SuiteReport};

/// Overlap points of regions `m` and `m + 1` (five per seam).
pub fn seam_points(m: i64) -> Vec<Complex64> {
    let centre = Complex64::new(0.0, -(m as f64 + 1.42));
    [
        Complex64::new(0.0, 0.0),
        Complex64::new(0.03, 0.0),
        Complex64::new(-0.03, 0.01),
        Complex64::new(0.02, -0.02),
        Complex64::new(-0.01, 0.03),
    ]
    .iter()
    .map(|d| centre + d)
    .collect()
}

/// Distance of `v` from the lattice `iZ`.
fn distance_to_i_integers(v: Complex64) -> f64 {
    v.re.abs().max((v.im - v.im.round()).abs())
}

pub(super) fn run(ctx: &SuiteContext<'_>) -> Result<SuiteReport> {
    let tol = &ctx.config.tolerances;
    let atlas = ctx.config.atlas.to_core();
    let n_max = atlas.n_max;
    let integrator = ctx.integrator();
    let symbol = &ctx.symbol;
    let xi = SixthRoot::XI.value();

    // Removable points for (n, m) ∈ {0, 1}²: the pole of φ_{z,1} at ξ^k w is
    // cancelled by the zero of φ_{z,1} at ξ^{3−k} w.
    let mut factor = Worst::new();
    let mut lattice = Worst::new();
    let mut pole = Worst::new();
    for n in 0..2 {
        for m in 0..2 {
            for p in removable_points(n, m) {
                let w = p.w();
                let (at_pole, cancelling) = if p.k == 1 { (xi * w, xi * xi * w) } else { (xi * xi * w, xi * w) };
                factor.update(phi_zu(p.z, SixthRoot::ONE, cancelling)?.norm(), p.z);
                lattice.update(distance_to_i_integers(p.z * c(cancelling)?), p.z);
                pole.update((p.z * c(at_pole)? + Complex64::new(0.0, m as f64 + 0.5)).norm(), p.z);
            }
        }
    }

    let mut seams = Worst::new();
    for m in 0..n_max as i64 {
        for sign in [1i8, -1] {
            let mut signs = vec![1i8; n_max + 1];
            signs[(m + 1) as usize] = sign;
            let eps = SheetSignature::new(signs)?;
            for z in seam_points(m) {
                let p = atlas.section(z, m, &eps)?;
                let a = atlas.lift_f(&integrator, symbol, &p, m)?;
                let b = atlas.lift_f(&integrator, symbol, &p, m + 1)?;
                seams.update(rel(a, b), z);
            }
        }
    }

    let z_phys = Complex64::new(0.05, -0.3);
    let p = atlas.physical(z_phys)?;
    let physical = rel(atlas.lift_f(&integrator, symbol, &p, -1)?, integrator.f_unit(symbol, z_phys)?.value);

    let mut regions = Worst::new();
    for m in 0..(n_max as i64).min(2) {
        for z in [Complex64::new(0.05, -(m as f64 + 0.9)), Complex64::new(-0.08, -(m as f64 + 0.7))] {
            let mut value = atlas.f_m(&integrator, symbol, z, m)?;
            for n in 0..=m {
                value += 4.0 * PI * Complex64::i() * g_n(symbol, n, z)?;
            }
            regions.update(rel(value, integrator.f_unit(symbol, z)?.value), z);
        }
    }

    // A small loop around the branch point of component n flips ζ_n only.
    let mut monodromy = Worst::new();
    for n in 0..=n_max {
        let centre = Complex64::new(0.0, n as f64 + 0.5);
        let start = atlas.physical(centre + 0.1)?;
        let path: Vec<Complex64> =
            (1..=24).map(|k| centre + Complex64::from_polar(0.1, 2.0 * PI * k as f64 / 24.0)).collect();
        let end = atlas.continue_along_path(&start, &path)?.pop().unwrap_or_else(|| start.clone());
        for k in 0..=n_max {
            let expected = if k == n { -start.zeta[k] } else { start.zeta[k] };
            monodromy.update((end.zeta[k] - expected).norm(), centre);
        }
    }

    let checks = vec![
        Check::new(
            "gluing.cancelling_factor",
            "at the candidate singular points of G̃_(n), (n, m) ∈ {0,1}², the cancelling factor φ_{z,1}(ξ^{3−k}w) vanishes",
            factor.value,
            tol.cancellation,
        )
        .with_note(factor.note()),
        Check::new("gluing.cancelling_lattice", "z·c(ξ^{3−k}w) ∈ iZ at the candidate singular points", lattice.value, tol.cancellation)
            .with_note(lattice.note()),
        Check::new("gluing.pole_lattice", "z·c(ξ^k w) = −i(m + 1/2) at the candidate singular points", pole.value, tol.cancellation)
            .with_note(pole.note()),
        Check::new(
            "gluing.seams",
            "F̃ from the presentations of regions m and m+1 agree on their overlap, ε_{m+1} = ±1",
            seams.value,
            tol.gluing,
        )
        .with_note(format!("{}; N = {n_max}", seams.note())),
        Check::new("gluing.physical_sheet", "F̃ restricted to the physical sheet is F", physical, tol.gluing),
        Check::new("gluing.region_independence", "F_(m)(z) + 4πi Σ_{n≤m} G_(n)(z) = F(z)", regions.value, tol.gluing)
            .with_note(regions.note()),
        Check::new(
            "gluing.monodromy",
            "continuing once around the branch point i(n+1/2) flips ζ_n and no other component",
            monodromy.value,
            tol.branch,
        )
        .with_note(format!("N = {n_max}")),
    ];
    Ok(SuiteReport::new("gluing", checks))
}
