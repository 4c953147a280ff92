//! Spherical functions `φ_λ(y) = ∫_K e^{(λ−ρ)(H(a_y k))} dk` by product
//! quadrature on `SO(3)`.

use num_complex::Complex64;
use reslab_core::algebra::{RootSystemA2, SpectralParam};
use reslab_core::spherical::{rho_multiple, spherical_phi, BasePoint, SphericalTable};

use super::SuiteContext;
use crate::error::Result;
use crate::report::{Check, SuiteReport};

/// Spectral parameters covering the tempered axis, real and complex values
/// and half-integer multiples of `ρ`.
pub fn sample_parameters() -> Vec<SpectralParam> {
    vec![
        SpectralParam::from_real([0.7, 0.25]).times_i(),
        SpectralParam::from_real([0.31, -0.52]),
        SpectralParam::new(Complex64::new(0.2, 0.9), Complex64::new(-0.4, 0.3)),
        rho_multiple(0.5),
        rho_multiple(1.5),
    ]
}

pub(super) fn run(ctx: &SuiteContext<'_>) -> Result<SuiteReport> {
    let tol = &ctx.config.tolerances;
    let order = ctx.config.spherical_order;
    let y = ctx.spec.base_point()?;
    let params = sample_parameters();
    let roots = RootSystemA2::new();

    let mut at_origin: f64 = 0.0;
    for mu in &params {
        at_origin =
            at_origin.max((spherical_phi(mu, BasePoint::origin(), order, tol.spherical_unit)?.value - 1.0).norm());
    }

    let coarse = SphericalTable::new(y, order)?;
    let fine = SphericalTable::new(y, 2 * order)?;
    let rho = roots.rho_param();
    let unit = (fine.phi(&rho) - 1.0).norm().max((fine.phi(&-rho) - 1.0).norm()).max((fine.haar_mass() - 1.0).abs());

    let mut weyl: f64 = 0.0;
    let mut doubling: f64 = 0.0;
    for mu in &params {
        let base = fine.phi(mu);
        for image in roots.weyl_orbit(mu) {
            weyl = weyl.max((fine.phi(&image) - base).norm() / base.norm().max(1.0));
        }
        doubling = doubling.max((coarse.phi(mu) - base).norm());
    }

    let [h1, h2, h3] = y.diagonal();
    let where_ = format!("y = exp(diag({h1}, {h2}, {h3}))·o; {} parameters", params.len());
    let checks = vec![
        Check::new("spherical.origin", "φ_λ(o) = 1", at_origin, tol.spherical_unit)
            .with_note(format!("{} parameters, order {order}", params.len())),
        Check::new("spherical.rho", "φ_{±ρ} ≡ 1 and the quadrature has unit Haar mass", unit, tol.spherical_unit)
            .with_note(format!("order {}", 2 * order)),
        Check::new("spherical.weyl_invariance", "φ_{wλ} = φ_λ for all six Weyl group elements", weyl, tol.weyl)
            .with_note(format!("{where_}; order {}", 2 * order)),
        Check::new(
            "spherical.order_doubling",
            "quadrature order doubling changes φ_λ(y) by less than the tolerance",
            doubling,
            tol.doubling,
        )
        .with_note(format!("{where_}; orders {order} and {}", 2 * order)),
    ];
    Ok(SuiteReport::new("spherical", checks))
}
