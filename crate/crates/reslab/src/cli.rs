//! Command-line surface. Parsing is done by `clap`; [`run`] turns a parsed
//! command into an [`Outcome`] (bytes for standard output, files to write,
//! verdict) so that the binary only performs IO.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use reslab_core::algebra::SpectralParam;
use reslab_core::exec::Executor;
use reslab_core::spherical::BasePoint;

use crate::commands::{self, GridSpec, Sheet};
use crate::config::{Family, RunConfig, SymbolSource};
use crate::error::{AppError, Result};
use crate::format::{csv_bytes, json_bytes, parse_complex, parse_fixed, parse_reals, parse_signs, Cx};
use crate::report::{ResidueEntry, ResidueRow, ScanEntry};
use crate::suites::{self, Suite, SuiteContext};

/// Numerical laboratory for the continued resolvent on `SL(3,R)/SO(3)`.
#[derive(Debug, Parser)]
#[command(name = "reslab", version, about)]
pub struct Cli {
    /// Subcommand.
    #[command(subcommand)]
    pub command: Command,
}

/// Output encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// JSON.
    Json,
    /// CSV with a header row.
    Csv,
}

/// Flags shared by every subcommand; they override the config file.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Run configuration (JSON).
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Symbol spec (JSON).
    #[arg(long, value_name = "FILE")]
    pub symbol: Option<PathBuf>,
    /// Largest component index N of the covering surface.
    #[arg(long = "N", value_name = "INT")]
    pub n_max: Option<usize>,
    /// Seed of the sample grids.
    #[arg(long, value_name = "INT")]
    pub seed: Option<u64>,
    /// Spherical quadrature order per Euler angle.
    #[arg(long, value_name = "INT")]
    pub order: Option<usize>,
    /// Quadrature tolerance.
    #[arg(long, value_name = "FLOAT")]
    pub tol: Option<f64>,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Output format of tables and reports.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

/// Subcommands.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run an invariant suite: branch, symbols, spherical, decomposition, gluing, jump, residues or all.
    Verify {
        /// Suite name.
        suite: String,
        /// Shared flags.
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate the resolvent at a point (JSON) or over a grid (CSV plot data).
    Resolvent {
        /// Spectral point `re,im`.
        #[arg(long, value_name = "A,B", allow_hyphen_values = true)]
        z: Option<String>,
        /// Grid rectangle `re0,re1,im0,im1`.
        #[arg(long, value_name = "RE0,RE1,IM0,IM1", allow_hyphen_values = true)]
        grid: Option<String>,
        /// Grid resolution `nx,ny`.
        #[arg(long, value_name = "NX,NY", default_value = "41,41")]
        steps: String,
        /// Presentation: auto, principal or rotated.
        #[arg(long, default_value = "auto")]
        sheet: String,
        /// Shared flags.
        #[command(flatten)]
        common: Common,
    },
    /// Continue a point of the covering surface along a path and write the sheet trace.
    Continue {
        /// JSON array of `[re, im]` vertices; the first is the start point.
        #[arg(long, value_name = "FILE")]
        path: PathBuf,
        /// Start sheet relative to the physical section, e.g. `+,-,+` (N+1 signs).
        #[arg(long, value_name = "SIGNS", allow_hyphen_values = true)]
        start_sheet: Option<String>,
        /// Shared flags.
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate a spherical function φ_μ(y).
    Spherical {
        /// Spectral parameter `x1,x2` (real) or `re1,im1,re2,im2`.
        #[arg(long, value_name = "X1,X2", allow_hyphen_values = true)]
        mu: String,
        /// Base point `h1,h2` (default: origin).
        #[arg(long, value_name = "H1,H2", allow_hyphen_values = true)]
        y: Option<String>,
        /// Shared flags.
        #[command(flatten)]
        common: Common,
    },
    /// Extract residues at the resonances −i(n+1/2)ρ_X.
    Residues {
        /// Resonance index (default: every n ≤ min(2, N)).
        #[arg(long)]
        n: Option<usize>,
        /// Symbol family A (Gaussian) or B (spherical).
        #[arg(long)]
        family: Option<String>,
        /// Base point `h1,h2` of the spherical family.
        #[arg(long, value_name = "H1,H2", allow_hyphen_values = true)]
        y: Option<String>,
        /// Extract on every sheet of each chart set instead of the all-plus sheet.
        #[arg(long)]
        all_sheets: bool,
        /// Shared flags.
        #[command(flatten)]
        common: Common,
    },
    /// Scan the lifted negative imaginary axis for poles.
    Scan {
        /// Scan −i(0, depth·ρ_X).
        #[arg(long, default_value_t = 2.5)]
        depth: f64,
        /// Shared flags.
        #[command(flatten)]
        common: Common,
    },
}

/// What a command produced.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    /// Bytes for standard output.
    pub stdout: Vec<u8>,
    /// Files to write atomically.
    pub files: Vec<(PathBuf, Vec<u8>)>,
    /// Whether all assertions held (exit code 0 vs 1).
    pub passed: bool,
    /// Diagnostics for standard error.
    pub warnings: Vec<String>,
}

impl Outcome {
    /// Exit code under the 0/1/2 contract.
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

fn effective_config(common: &Common) -> Result<RunConfig> {
    let mut config = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(path) = &common.symbol {
        config.symbol = SymbolSource::File(path.clone());
    }
    if let Some(n) = common.n_max {
        config.atlas.n_max = n;
    }
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    if let Some(order) = common.order {
        let mut spec = config.symbol_spec()?;
        spec.order = order;
        config.symbol = SymbolSource::Inline(spec);
    }
    if let Some(tol) = common.tol {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(AppError::Usage(format!("--tol must be positive, got {tol}")));
        }
        config.quadrature.rtol = tol;
    }
    if let Some(out) = &common.out {
        config.out_dir = Some(out.clone());
    }
    config.validate()?;
    Ok(config)
}

/// Emit `bytes` to `<out>/<name>` when an output directory is set, and to
/// standard output otherwise (`always_print` prints in both cases).
fn emit(outcome: &mut Outcome, out: Option<&Path>, name: &str, bytes: Vec<u8>, always_print: bool) {
    match out {
        Some(dir) => {
            if always_print {
                outcome.stdout.extend_from_slice(&bytes);
            }
            outcome.files.push((dir.join(name), bytes));
        }
        None => outcome.stdout.extend_from_slice(&bytes),
    }
}

fn base_point(text: Option<&str>) -> Result<Option<BasePoint>> {
    text.map(|t| {
        let [h1, h2] = parse_fixed::<2>(t)?;
        BasePoint::new(h1, h2).map_err(AppError::from)
    })
    .transpose()
}

/// Execute a parsed command.
pub fn run(command: &Command, exec: &dyn Executor) -> Result<Outcome> {
    let mut outcome = Outcome { passed: true, ..Outcome::default() };
    match command {
        Command::Verify { suite, common } => {
            let suite: Suite = suite.parse()?;
            let mut config = effective_config(common)?;
            if let Some(order) = common.order {
                config.spherical_order = order;
                config.validate()?;
            }
            let report = suites::verify(suite, &config, exec)?;
            outcome.passed = report.passed;
            let (name, bytes) = match common.format {
                Format::Json => (format!("verify_{suite}.json"), json_bytes(&report)?),
                Format::Csv => (format!("verify_{suite}.csv"), csv_bytes(&report.rows())?),
            };
            emit(&mut outcome, config.out_dir.as_deref(), &name, bytes, true);
        }
        Command::Resolvent { z, grid, steps, sheet, common } => {
            let config = effective_config(common)?;
            let ctx = SuiteContext::new(&config, exec)?;
            let sheet: Sheet = sheet.parse()?;
            match (z, grid) {
                (Some(z), None) => {
                    let point = commands::resolvent_point(&ctx, parse_complex(z)?, sheet)?;
                    outcome.stdout = json_bytes(&point)?;
                }
                (None, Some(grid)) => {
                    let spec = GridSpec { bounds: parse_fixed::<4>(grid)?, steps: parse_steps(steps)? };
                    let (rows, failed) = commands::resolvent_grid(&ctx, &spec, sheet)?;
                    if failed > 0 {
                        outcome.warnings.push(format!("{failed} grid points could not be evaluated (written as NaN)"));
                    }
                    emit(&mut outcome, config.out_dir.as_deref(), "resolvent_grid.csv", csv_bytes(&rows)?, false);
                }
                _ => return Err(AppError::Usage("give exactly one of --z or --grid".into())),
            }
        }
        Command::Continue { path, start_sheet, common } => {
            let config = effective_config(common)?;
            let atlas = config.atlas.to_core();
            let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
            let vertices: Vec<Cx> = serde_json::from_str(&text).map_err(|e| {
                AppError::Config(format!("{}: expected an array of [re, im] pairs: {e}", path.display()))
            })?;
            let vertices: Vec<Complex64> = vertices.into_iter().map(|c| c.0).collect();
            let signs = match start_sheet {
                Some(s) => parse_signs(s)?,
                None => vec![1; atlas.n_max + 1],
            };
            let trace = commands::continue_path(&atlas, &vertices, &signs)?;
            let bytes = match common.format {
                Format::Json => json_bytes(&trace)?,
                Format::Csv => csv_bytes(&trace_rows(&trace))?,
            };
            let name = match common.format {
                Format::Json => "continue_trace.json",
                Format::Csv => "continue_trace.csv",
            };
            emit(&mut outcome, config.out_dir.as_deref(), name, bytes, false);
        }
        Command::Spherical { mu, y, common } => {
            let config = effective_config(common)?;
            let mu = match parse_reals(mu)?.as_slice() {
                [x1, x2] => SpectralParam::from_real([*x1, *x2]),
                [a, b, c, d] => SpectralParam::new(Complex64::new(*a, *b), Complex64::new(*c, *d)),
                other => return Err(AppError::Usage(format!("--mu needs 2 or 4 numbers, got {}", other.len()))),
            };
            let y = base_point(y.as_deref())?.unwrap_or_else(BasePoint::origin);
            let order = common.order.unwrap_or(config.spherical_order);
            let tol = common.tol.unwrap_or(1e-10);
            outcome.stdout = json_bytes(&commands::spherical_point(mu, y, order, tol)?)?;
        }
        Command::Residues { n, family, y, all_sheets, common } => {
            let mut config = effective_config(common)?;
            let mut spec = config.symbol_spec()?;
            if let Some(family) = family {
                spec.family = family.parse::<Family>()?;
            }
            if let Some(y) = y {
                spec.y = parse_fixed::<2>(y)?;
            }
            config.symbol = SymbolSource::Inline(spec);
            let ctx = SuiteContext::new(&config, exec)?;
            let records = commands::residue_table(&ctx, *n, *all_sheets)?;
            let (name, bytes) = match common.format {
                Format::Json => {
                    ("residues.json", json_bytes(&records.iter().map(ResidueEntry::from).collect::<Vec<_>>())?)
                }
                Format::Csv => ("residues.csv", csv_bytes(&records.iter().map(ResidueRow::from).collect::<Vec<_>>())?),
            };
            emit(&mut outcome, config.out_dir.as_deref(), name, bytes, false);
        }
        Command::Scan { depth, common } => {
            let config = effective_config(common)?;
            let ctx = SuiteContext::new(&config, exec)?;
            let report = commands::scan(&ctx, *depth)?;
            outcome.passed = report.passed();
            let entry = ScanEntry::from(&report);
            let (name, bytes) = match common.format {
                Format::Json => ("scan.json", json_bytes(&entry)?),
                Format::Csv => {
                    ("scan.csv", csv_bytes(&report.records.iter().map(ResidueRow::from).collect::<Vec<_>>())?)
                }
            };
            emit(&mut outcome, config.out_dir.as_deref(), name, bytes, true);
        }
    }
    Ok(outcome)
}

fn parse_steps(text: &str) -> Result<[usize; 2]> {
    let [nx, ny] = parse_fixed::<2>(text)?;
    let valid = |v: f64| v >= 1.0 && v.fract() == 0.0 && v <= 10_000.0;
    if !(valid(nx) && valid(ny)) {
        return Err(AppError::Usage(format!("--steps needs two integers in 1..=10000, got {text:?}")));
    }
    Ok([nx as usize, ny as usize])
}

/// Flat CSV row of a sheet trace (components joined with `;`).
#[derive(Debug, serde::Serialize)]
struct TraceRow {
    step: usize,
    re_z: f64,
    im_z: f64,
    zeta: String,
    eps: String,
}

fn trace_rows(trace: &[commands::TraceStep]) -> Vec<TraceRow> {
    trace
        .iter()
        .map(|s| TraceRow {
            step: s.step,
            re_z: s.z.0.re,
            im_z: s.z.0.im,
            zeta: s.zeta.iter().map(|z| format!("{}{:+}i", z.0.re, z.0.im)).collect::<Vec<_>>().join(";"),
            eps: s.eps.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(";"),
        })
        .collect()
}
