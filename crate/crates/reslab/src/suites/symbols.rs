//! Pointwise identities of the integrand: the rotation sum, the assembled
//! integrand, the two forms of the Plancherel density and of `Γ_X`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use reslab_core::algebra::{polar_param, SpectralParam};
use reslab_core::symbols::{
    check_symbol, gamma_x, gamma_x_cosine, integrand, integrand_assembled, is_reducible, plancherel_density,
    plancherel_density_at, rotation_sum, rotation_sum_closed_form, SymbolChecks,
};

use super::{rel, SuiteContext, Worst};
use crate::error::Result;
use crate::grids;
use crate::report::{Check, SuiteReport};

const SAMPLES: usize = 100;

pub(super) fn run(ctx: &SuiteContext<'_>) -> Result<SuiteReport> {
    let tol = ctx.config.tolerances.identities;
    let symbol = &ctx.symbol;
    let mut rng = grids::rng(ctx.config.seed, 2);

    // Points where either side hits a pole guard are skipped; the note
    // records how many samples were used.
    let mut rotation = Worst::new();
    let mut assembly = Worst::new();
    let mut density = Worst::new();
    let mut attempts = 0;
    while rotation.samples < SAMPLES && attempts < 10 * SAMPLES {
        attempts += 1;
        let (z, w) = grids::symbol_sample(&mut rng);
        if let (Ok(lhs), Ok(rhs)) = (rotation_sum(symbol, z, w), rotation_sum_closed_form(symbol, z, w)) {
            rotation.update(rel(lhs, rhs), z);
        }
        if let (Ok(a), Ok(b)) = (integrand(symbol, z, w), integrand_assembled(symbol, z, w)) {
            assembly.update(rel(a, b), z);
        }
        let lambda = polar_param(z, w)?;
        if let (Ok(a), Ok(b)) = (plancherel_density(&lambda), plancherel_density_at(z, w)) {
            density.update(rel(a, b), z);
        }
    }

    let expected = 8.0 * PI.powi(6);
    let at_origin = (gamma_x(&SpectralParam::zero())?.re / expected - 1.0)
        .abs()
        .max((gamma_x_cosine(&SpectralParam::zero())?.re / expected - 1.0).abs());
    let mut gamma_forms = Worst::new();
    while gamma_forms.samples < SAMPLES {
        let lambda = SpectralParam::new(
            Complex64::new(rng.random_range(-1.2..1.2), rng.random_range(-1.2..1.2)),
            Complex64::new(rng.random_range(-1.2..1.2), rng.random_range(-1.2..1.2)),
        );
        if is_reducible(&lambda, 1e-3) {
            continue;
        }
        gamma_forms.update(rel(gamma_x(&lambda)?, gamma_x_cosine(&lambda)?), lambda.x1);
    }

    let gate = check_symbol(symbol)?;
    let checks = vec![
        Check::new(
            "symbols.rotation_sum",
            "Σ_{u∈{1,ξ,ξ²}} ψ_z(w/u)·Π_{u′≠u} φ_{z,u′}(w/u) = −3ψ_z(w)·φ_{z,1}(ξw)·φ_{z,1}(ξ²w)",
            rotation.value,
            tol,
        )
        .with_note(rotation.note()),
        Check::new(
            "symbols.integrand_assembly",
            "ψ_z(w)·Π_u φ_{z,u}(w) = S(z,w)·z³·Π_u c(uw)th(πz c(uw)) / (2πiw)",
            assembly.value,
            tol,
        )
        .with_note(assembly.note()),
        Check::new(
            "symbols.plancherel_dual_form",
            "Plancherel density: product over positive roots equals the polar form r³Π_u c(uw)th(πr c(uw))",
            density.value,
            tol,
        )
        .with_note(density.note()),
        Check::new("symbols.gamma_x_origin", "Γ_X(0) = 8π⁶", at_origin, tol),
        Check::new(
            "symbols.gamma_x_dual_form",
            "Γ_X: Gamma-function form equals the cosine-product form",
            gamma_forms.value,
            tol,
        )
        .with_note(gamma_forms.note()),
        Check::new("symbols.even", "the symbol is even in z and in w", gate.evenness, SymbolChecks::SYMMETRY_TOL),
        Check::new(
            "symbols.rotation_covariance",
            "ψ_z(w/u) = ψ_z(w)/u² for sixth roots u",
            gate.rotation,
            SymbolChecks::SYMMETRY_TOL,
        ),
        Check::new(
            "symbols.holomorphy",
            "the symbol is holomorphic in z (Cauchy–Riemann residual)",
            gate.holomorphy,
            SymbolChecks::HOLOMORPHY_TOL,
        ),
    ];
    Ok(SuiteReport::new("symbols", checks))
}
