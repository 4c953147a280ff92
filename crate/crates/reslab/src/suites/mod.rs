//! Verification suites behind `reslab verify`.
//!
//! Each suite evaluates a fixed list of identities on seeded sample points
//! and reports every check with its statement, residual and tolerance. The
//! reports contain no timings or thread counts, so they are byte-identical
//! for a fixed seed.

mod branch;
pub mod decomposition;
pub mod gluing;
pub mod jump;
pub mod residues;
pub mod spherical;
mod symbols;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use reslab_core::contour::{Integrator, ResolventEngine};
use reslab_core::exec::Executor;
use reslab_core::symbols::SpectralSymbol;

use crate::config::{RunConfig, SymbolSpec};
use crate::error::{AppError, Result};
use crate::report::{SuiteReport, VerifyReport, NORMALIZATION_NOTE};

/// A named suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    /// Branch kit: `c`, `c⁻¹`, the square-root product and cut limits.
    Branch,
    /// Pointwise identities of the integrand factors.
    Symbols,
    /// Spherical function evaluator.
    Spherical,
    /// Contour deformation, evenness and flatness of `F`.
    Decomposition,
    /// Covering surface: removable points, seams, monodromy.
    Gluing,
    /// Resolvent representations and the logarithmic jump.
    Jump,
    /// Residues and the resonance scan.
    Residues,
    /// All of the above in this order.
    All,
}

impl Suite {
    /// The individual suites in execution order.
    pub const EACH: [Suite; 7] = [
        Suite::Branch,
        Suite::Symbols,
        Suite::Spherical,
        Suite::Decomposition,
        Suite::Gluing,
        Suite::Jump,
        Suite::Residues,
    ];

    /// Suite name as used on the command line.
    pub fn name(self) -> &'static str {
        match self {
            Suite::Branch => "branch",
            Suite::Symbols => "symbols",
            Suite::Spherical => "spherical",
            Suite::Decomposition => "decomposition",
            Suite::Gluing => "gluing",
            Suite::Jump => "jump",
            Suite::Residues => "residues",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = AppError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                AppError::Usage(format!(
                    "unknown suite {s:?}; expected one of branch, symbols, spherical, decomposition, gluing, jump, residues, all"
                ))
            })
    }
}

/// Shared inputs of the suites.
pub struct SuiteContext<'a> {
    /// Effective configuration.
    pub config: &'a RunConfig,
    /// Resolved symbol spec.
    pub spec: SymbolSpec,
    /// The symbol built from [`SuiteContext::spec`].
    pub symbol: SpectralSymbol,
    /// Executor for quadrature nodes.
    pub exec: &'a dyn Executor,
}

impl<'a> SuiteContext<'a> {
    /// Resolve and build the configured symbol.
    pub fn new(config: &'a RunConfig, exec: &'a dyn Executor) -> Result<Self> {
        config.validate()?;
        let spec = config.symbol_spec()?;
        let symbol = spec.build()?;
        Ok(SuiteContext { config, spec, symbol, exec })
    }

    /// Closed-contour integrator with the configured quadrature.
    pub fn integrator(&self) -> Integrator<'a> {
        Integrator::new(self.exec).with_config(self.config.quadrature.to_core())
    }

    /// Resolvent engine for the configured symbol.
    pub fn engine(&self) -> Result<ResolventEngine> {
        Ok(ResolventEngine::new(&self.integrator(), self.symbol.clone(), self.spec.resolvent_config())?)
    }
}

/// Run one suite (not `all`).
pub fn run_one(suite: Suite, ctx: &SuiteContext<'_>) -> Result<SuiteReport> {
    match suite {
        Suite::Branch => branch::run(ctx),
        Suite::Symbols => symbols::run(ctx),
        Suite::Spherical => spherical::run(ctx),
        Suite::Decomposition => decomposition::run(ctx),
        Suite::Gluing => gluing::run(ctx),
        Suite::Jump => jump::run(ctx),
        Suite::Residues => residues::run(ctx),
        Suite::All => Err(AppError::Usage("`all` is not a single suite".into())),
    }
}

/// Run a suite (or all of them) and assemble the top-level report.
pub fn verify(suite: Suite, config: &RunConfig, exec: &dyn Executor) -> Result<VerifyReport> {
    let ctx = SuiteContext::new(config, exec)?;
    let selected: Vec<Suite> = if suite == Suite::All { Suite::EACH.to_vec() } else { vec![suite] };
    let suites = selected.into_iter().map(|s| run_one(s, &ctx)).collect::<Result<Vec<_>>>()?;
    let passed = suites.iter().all(|s| s.passed);
    Ok(VerifyReport {
        tool: format!("reslab {}", env!("CARGO_PKG_VERSION")),
        suite: suite.name().to_string(),
        seed: config.seed,
        config: serde_json::to_value(config)?,
        normalization: NORMALIZATION_NOTE,
        suites,
        passed,
    })
}

/// `|a − b| / max(|a|, |b|)`.
pub(crate) fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
}

/// Running maximum that remembers where it was attained.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Worst {
    pub value: f64,
    pub at: Option<Complex64>,
    pub samples: usize,
}

impl Worst {
    pub fn new() -> Self {
        Worst { value: 0.0, at: None, samples: 0 }
    }

    pub fn update(&mut self, value: f64, at: Complex64) {
        self.samples += 1;
        // A NaN is sticky so that it surfaces as a failure.
        if !self.value.is_nan() && (value.is_nan() || value > self.value) {
            self.value = value;
            self.at = Some(at);
        }
    }

    pub fn note(&self) -> String {
        match self.at {
            Some(z) => format!("{} samples; worst at ({:.6}, {:.6})", self.samples, z.re, z.im),
            None => format!("{} samples", self.samples),
        }
    }
}
