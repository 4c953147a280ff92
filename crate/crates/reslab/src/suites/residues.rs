//! Residues of the lifted resolvent at `−i(n+1/2)ρ_X` and the pole scan of
//! the lifted negative imaginary axis.

use reslab_core::contour::ResolventEngine;
use reslab_core::resonance::{
    default_chart_radius, extract_residue, resonance_scan, LaurentConfig, ResidueRecord, ScanConfig, ScanReport,
};
use reslab_core::surface::{CoverAtlas, LiftedResolvent, SheetSignature};
use reslab_core::symbols::SpectralSymbol;
use serde_json::json;

use super::{rel, SuiteContext};
use crate::config::Family;
use crate::error::Result;
use crate::report::{Check, ResidueEntry, ScanEntry, SuiteReport};

/// Largest resonance index examined by the suite.
pub const MAX_INDEX: usize = 2;

/// The lifted resolvent appropriate for a family: with the holomorphic part
/// for the Gaussian family, singular part only for the spherical family
/// (the holomorphic part does not change chart residues).
pub fn lifted<'a>(
    ctx: &SuiteContext<'a>,
    atlas: CoverAtlas,
    engine: Option<&'a ResolventEngine>,
    symbol: &'a SpectralSymbol,
) -> LiftedResolvent<'a> {
    match engine {
        Some(engine) => LiftedResolvent::full(atlas, ctx.integrator(), engine),
        None => LiftedResolvent::singular_only(atlas, ctx.integrator(), symbol),
    }
}

/// Records for `n = 0..=min(MAX_INDEX, N)` over every sheet of each chart set,
/// ordered by `(n, ε)`.
pub fn residue_records(lifted: &LiftedResolvent<'_>) -> Result<Vec<ResidueRecord>> {
    let n_max = lifted.atlas.n_max;
    let config = LaurentConfig::default();
    let mut records = Vec::new();
    for n in 0..=MAX_INDEX.min(n_max) {
        let mut sheets: Vec<SheetSignature> =
            SheetSignature::enumerate(n_max).into_iter().filter(|e| e.in_chart_set(n)).collect();
        sheets.sort_by(|a, b| b.signs().cmp(a.signs()));
        for eps in sheets {
            records.push(extract_residue(lifted, n, &eps, default_chart_radius(), &config)?);
        }
    }
    Ok(records)
}

/// Largest relative deviation between sheets of the same `n`.
pub fn chart_spread(records: &[ResidueRecord]) -> f64 {
    records
        .iter()
        .map(|r| {
            let reference = records.iter().find(|q| q.n == r.n).map(|q| q.extracted).unwrap_or(r.extracted);
            rel(r.extracted, reference)
        })
        .fold(0.0, f64::max)
}

/// Checks on a set of records and a scan.
pub fn residue_checks(
    family: Family,
    tolerances: &crate::tolerances::Tolerances,
    records: &[ResidueRecord],
    scan: &ScanReport,
    n_max: usize,
) -> Vec<Check> {
    let value_tol = match family {
        Family::Gaussian => tolerances.residue_gaussian,
        Family::Spherical => tolerances.residue_spherical,
    };
    let max = |f: &dyn Fn(&ResidueRecord) -> f64| records.iter().map(f).fold(0.0, f64::max);
    let reference = max(&|r| r.rel_error);
    let derived = max(&|r| r.rel_error_derived);
    let simple = max(&|r| r.c_minus2.norm() / r.extracted.norm().max(1e-300));
    let scan_simple = scan
        .records
        .iter()
        .filter(|r| scan.detected.contains(&r.n))
        .map(|r| r.c_minus2.norm() / r.extracted.norm().max(1e-300))
        .fold(0.0, f64::max);
    let config = ScanConfig::standard();
    let expected: Vec<usize> = (0..=n_max).filter(|&n| (n as f64 + 0.5) < config.depth).collect();
    let mismatched = expected.iter().filter(|n| !scan.detected.contains(n)).count()
        + scan.detected.iter().filter(|n| !expected.contains(n)).count();
    let unclean = scan.controls.iter().chain([&scan.physical]).filter(|c| !c.clean).count();
    let ratio = records.first().map(|r| r.extracted / r.predicted);
    vec![
        Check::new(
            "residues.reference_constant",
            "Res_n R̃ = −(1/(4|W|))(n+1/2)²·S(i(n+1/2), 1) = −(1/24)(n+1/2)²·S(i(n+1/2), 1)",
            reference,
            value_tol,
        )
        .with_note(match ratio {
            Some(q) => format!("extracted/predicted = ({:.12}, {:.12})", q.re, q.im),
            None => "no records".into(),
        }),
        Check::new(
            "residues.derived_constant",
            "Res_n R̃ = i(n+1/2)²·S(i(n+1/2), 1)/(4ρ_X³) in the scaled chart",
            derived,
            value_tol,
        ),
        Check::new(
            "residues.simple_pole",
            "every residue is a simple pole: |c₋₂|/|c₋₁| below tolerance",
            simple,
            tolerances.simple_pole,
        ),
        Check::new(
            "residues.chart_independence",
            "the chart residue does not depend on the sheets of the other components",
            chart_spread(records),
            tolerances.chart_independence,
        )
        .with_note(format!("{} records", records.len())),
        Check::new(
            "residues.scan_detected",
            "the lift of −i(0, 2.5)ρ_X carries poles exactly at −i(1/2)ρ_X and −i(3/2)ρ_X",
            mismatched as f64,
            0.0,
        )
        .with_note(format!("detected {:?}, expected {expected:?}", scan.detected)),
        Check::new("residues.scan_controls", "no pole at any control point between resonances", unclean as f64, 0.0)
            .with_note(format!("{} control points", scan.controls.len() + 1)),
        Check::new(
            "residues.scan_simple_pole",
            "detected poles are simple: |c₋₂|/|c₋₁| below tolerance",
            scan_simple,
            tolerances.simple_pole,
        ),
    ]
}

pub(super) fn run(ctx: &SuiteContext<'_>) -> Result<SuiteReport> {
    let atlas = ctx.config.atlas.to_core();
    let engine = match ctx.spec.family {
        Family::Gaussian => Some(ctx.engine()?),
        Family::Spherical => None,
    };
    let lifted = lifted(ctx, atlas, engine.as_ref(), &ctx.symbol);
    let records = residue_records(&lifted)?;
    let scan = resonance_scan(&lifted, &ScanConfig::standard())?;
    let checks = residue_checks(ctx.spec.family, &ctx.config.tolerances, &records, &scan, atlas.n_max);
    let data = json!({
        "chart": reslab_core::resonance::CHART_NAME,
        "records": records.iter().map(ResidueEntry::from).collect::<Vec<_>>(),
        "scan": ScanEntry::from(&scan),
    });
    Ok(SuiteReport::new("residues", checks).with_data(data))
}
