//! Run configuration: the symbol, quadrature defaults, atlas parameters,
//! tolerance overrides, output directory and seed.
//!
//! A config is a single JSON object; every field is optional and command-line
//! flags override it.

use std::fs;
use std::path::{Path, PathBuf};

use reslab_core::contour::{QuadratureConfig, ResolventConfig};
use reslab_core::spherical::{BasePoint, MAX_ORDER};
use reslab_core::surface::CoverAtlas;
use reslab_core::symbols::{
    make_gaussian_symbol, make_spherical_symbol, GaussianSymbol, PrefactorTerm, SpectralSymbol,
};
use serde::{Deserialize, Serialize};

use crate::error::{AppError, Result};
use crate::tolerances::Tolerances;

/// Symbol family selector (`A`/`gaussian` or `B`/`spherical`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    /// Gaussian-symmetric family.
    #[serde(rename = "A", alias = "gaussian", alias = "a")]
    Gaussian,
    /// Spherical-backed family.
    #[serde(rename = "B", alias = "spherical", alias = "b")]
    Spherical,
}

impl std::str::FromStr for Family {
    type Err = AppError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" | "gaussian" => Ok(Family::Gaussian),
            "B" | "b" | "spherical" => Ok(Family::Spherical),
            other => Err(AppError::Usage(format!("unknown symbol family {other:?}; use A or B"))),
        }
    }
}

/// One monomial `coeff·e₂^{p2}·e₃^{p3}` of the prefactor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrefactorSpec {
    /// Coefficient.
    pub coeff: f64,
    /// Power of `e₂`.
    #[serde(default)]
    pub p2: u32,
    /// Power of `e₃`.
    #[serde(default)]
    pub p3: u32,
}

/// Declarative description of a spectral symbol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SymbolSpec {
    /// Family.
    pub family: Family,
    /// Gaussian decay `β > 0`.
    pub beta: f64,
    /// Prefactor polynomial; empty means the constant `1`.
    pub prefactor: Vec<PrefactorSpec>,
    /// Base point `y = exp(diag(h₁, h₂, −h₁−h₂))·o` (spherical family).
    pub y: [f64; 2],
    /// Quadrature order per Euler angle of the spherical family.
    pub order: usize,
}

impl Default for SymbolSpec {
    fn default() -> Self {
        SymbolSpec { family: Family::Gaussian, beta: 0.5, prefactor: Vec::new(), y: [0.4, -0.1], order: 32 }
    }
}

impl SymbolSpec {
    /// The Gaussian transform `h` (the whole symbol for family A).
    pub fn transform(&self) -> Result<GaussianSymbol> {
        let terms = self.prefactor.iter().map(|t| PrefactorTerm { coeff: t.coeff, p2: t.p2, p3: t.p3 }).collect();
        Ok(GaussianSymbol::new(self.beta, terms)?)
    }

    /// The base point `y`.
    pub fn base_point(&self) -> Result<BasePoint> {
        Ok(BasePoint::new(self.y[0], self.y[1])?)
    }

    /// Build the symbol.
    pub fn build(&self) -> Result<SpectralSymbol> {
        self.validate()?;
        let h = self.transform()?;
        Ok(match self.family {
            Family::Gaussian => make_gaussian_symbol(h.beta(), h.prefactor().to_vec())?,
            Family::Spherical => make_spherical_symbol(h, self.base_point()?, self.order)?,
        })
    }

    /// Resolvent quadrature geometry matched to the decay `β`.
    pub fn resolvent_config(&self) -> ResolventConfig {
        ResolventConfig::for_beta(self.beta)
    }

    /// Check ranges before any numerics run.
    pub fn validate(&self) -> Result<()> {
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(AppError::Config(format!("symbol beta must be positive, got {}", self.beta)));
        }
        if self.prefactor.iter().any(|t| !t.coeff.is_finite()) {
            return Err(AppError::Config("prefactor coefficients must be finite".into()));
        }
        if !self.y.iter().all(|v| v.is_finite()) {
            return Err(AppError::Config("base point coordinates must be finite".into()));
        }
        if self.order < 2 || self.order > MAX_ORDER {
            return Err(AppError::Config(format!("spherical order must be in 2..={MAX_ORDER}, got {}", self.order)));
        }
        Ok(())
    }

    /// Load a symbol spec from a JSON file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
        let spec: SymbolSpec =
            serde_json::from_str(&text).map_err(|e| AppError::Config(format!("{}: {e}", path.display())))?;
        spec.validate()?;
        Ok(spec)
    }
}

/// A symbol given inline or as a path to a JSON file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SymbolSource {
    /// Inline spec.
    Inline(SymbolSpec),
    /// Path to a spec file (relative to the config file).
    File(PathBuf),
}

impl Default for SymbolSource {
    fn default() -> Self {
        SymbolSource::Inline(SymbolSpec::default())
    }
}

/// Periodic trapezoid settings for the closed contours.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureSettings {
    /// Nodes on the first level.
    pub base_nodes: usize,
    /// Node cap.
    pub max_nodes: usize,
    /// Relative tolerance between levels.
    pub rtol: f64,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        let q = QuadratureConfig::default();
        QuadratureSettings { base_nodes: q.base_nodes, max_nodes: q.max_nodes, rtol: q.rtol }
    }
}

impl QuadratureSettings {
    /// The core configuration.
    pub fn to_core(&self) -> QuadratureConfig {
        QuadratureConfig {
            base_nodes: self.base_nodes,
            max_nodes: self.max_nodes,
            rtol: self.rtol,
            ..QuadratureConfig::default()
        }
    }
}

/// Parameters of the covering-surface atlas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AtlasSettings {
    /// Largest component index `N`.
    pub n_max: usize,
    /// Disk radius `R_m` around the branch points.
    pub branch_disk_radius: f64,
    /// Step of the `r` grid.
    pub grid_step: f64,
    /// Margin below the bounds on `c(r)`.
    pub margin: f64,
}

impl Default for AtlasSettings {
    fn default() -> Self {
        let a = CoverAtlas::new(2);
        AtlasSettings {
            n_max: a.n_max,
            branch_disk_radius: a.branch_disk_radius,
            grid_step: a.grid_step,
            margin: a.margin,
        }
    }
}

impl AtlasSettings {
    /// The core atlas.
    pub fn to_core(&self) -> CoverAtlas {
        CoverAtlas {
            n_max: self.n_max,
            branch_disk_radius: self.branch_disk_radius,
            grid_step: self.grid_step,
            margin: self.margin,
        }
    }
}

/// Everything a command needs besides its own arguments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// The spectral symbol.
    pub symbol: SymbolSource,
    /// Closed-contour quadrature.
    pub quadrature: QuadratureSettings,
    /// Covering-surface atlas.
    pub atlas: AtlasSettings,
    /// Tolerance overrides.
    pub tolerances: Tolerances,
    /// Base quadrature order of the spherical suite (doubled for the
    /// stability check).
    pub spherical_order: usize,
    /// Output directory; reports are also printed to standard output.
    #[serde(skip_serializing)]
    pub out_dir: Option<PathBuf>,
    /// Seed of every random sample grid.
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            symbol: SymbolSource::default(),
            quadrature: QuadratureSettings::default(),
            atlas: AtlasSettings::default(),
            tolerances: Tolerances::default(),
            spherical_order: 32,
            out_dir: None,
            seed: 7,
        }
    }
}

impl RunConfig {
    /// Load a config file; a relative symbol path is resolved against the
    /// config's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
        let mut config: RunConfig =
            serde_json::from_str(&text).map_err(|e| AppError::Config(format!("{}: {e}", path.display())))?;
        if let SymbolSource::File(file) = &config.symbol {
            if file.is_relative() {
                let base = path.parent().unwrap_or(Path::new("."));
                config.symbol = SymbolSource::File(base.join(file));
            }
        }
        config.validate()?;
        Ok(config)
    }

    /// Resolve the symbol source into a spec.
    pub fn symbol_spec(&self) -> Result<SymbolSpec> {
        match &self.symbol {
            SymbolSource::Inline(spec) => {
                spec.validate()?;
                Ok(spec.clone())
            }
            SymbolSource::File(path) => SymbolSpec::load(path),
        }
    }

    /// Check all invariants: positive tolerances, sane quadrature and atlas.
    pub fn validate(&self) -> Result<()> {
        self.tolerances.validate()?;
        let q = &self.quadrature;
        if q.base_nodes < 8 || q.max_nodes < q.base_nodes || !(q.rtol.is_finite() && q.rtol > 0.0) {
            return Err(AppError::Config(format!("invalid quadrature settings {q:?}")));
        }
        let a = &self.atlas;
        if ![a.branch_disk_radius, a.grid_step, a.margin].iter().all(|v| v.is_finite() && *v > 0.0)
            || a.branch_disk_radius >= 0.5
        {
            return Err(AppError::Config(format!("invalid atlas settings {a:?}")));
        }
        if self.spherical_order < 2 || 2 * self.spherical_order > MAX_ORDER {
            return Err(AppError::Config(format!(
                "spherical_order must be in 2..={} (it is doubled), got {}",
                MAX_ORDER / 2,
                self.spherical_order
            )));
        }
        if let SymbolSource::Inline(spec) = &self.symbol {
            spec.validate()?;
        }
        Ok(())
    }
}
