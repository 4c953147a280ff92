//! Report types: individual checks, suite reports and serialisable residue
//! records.

use reslab_core::resonance::{ControlPoint, ResidueRecord, ScanReport};
use serde::Serialize;

use crate::format::{format_signs, Cx};

/// Normalisation note attached to every residue-bearing report.
pub const NORMALIZATION_NOTE: &str = "Plancherel constant c0 := 1; extracted residues scale linearly in c0";

/// One verified statement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    /// Stable identifier, `suite.name`.
    pub id: String,
    /// The statement being checked, in words.
    pub anchor: String,
    /// Measured residual (or count of violations).
    pub measured: f64,
    /// Threshold; the check passes iff `measured ≤ tolerance`.
    pub tolerance: f64,
    /// Outcome.
    pub passed: bool,
    /// Extra context (sample sizes, worst point).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    /// A check that passes iff `measured ≤ tolerance` (`NaN` fails).
    pub fn new(id: impl Into<String>, anchor: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Check { id: id.into(), anchor: anchor.into(), measured, tolerance, passed: measured <= tolerance, note: None }
    }

    /// Attach a note.
    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Result of one verification suite.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    /// Suite name.
    pub suite: String,
    /// All checks, in a fixed order.
    pub checks: Vec<Check>,
    /// Whether every check passed.
    pub passed: bool,
    /// Supporting data (residue records, scan summary).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<serde_json::Value>,
}

impl SuiteReport {
    /// Build from checks.
    pub fn new(suite: &str, checks: Vec<Check>) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        SuiteReport { suite: suite.to_string(), checks, passed, data: None }
    }

    /// Attach supporting data.
    pub fn with_data(mut self, data: serde_json::Value) -> Self {
        self.data = Some(data);
        self
    }

    /// Look up a check by id.
    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }
}

/// Top-level `verify` report.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    /// Tool name and version.
    pub tool: String,
    /// Requested suite.
    pub suite: String,
    /// Seed of the sample grids.
    pub seed: u64,
    /// Effective configuration (without the output directory).
    pub config: serde_json::Value,
    /// Normalisation convention.
    pub normalization: &'static str,
    /// Suite reports in execution order.
    pub suites: Vec<SuiteReport>,
    /// Whether every suite passed.
    pub passed: bool,
}

/// One row of the check table (`verify --format csv`).
#[derive(Debug, Clone, Serialize)]
pub struct CheckRow<'a> {
    /// Suite name.
    pub suite: &'a str,
    /// Check id.
    pub id: &'a str,
    /// Statement.
    pub anchor: &'a str,
    /// Measured residual.
    pub measured: f64,
    /// Threshold.
    pub tolerance: f64,
    /// Outcome.
    pub passed: bool,
}

impl VerifyReport {
    /// Flatten into CSV rows.
    pub fn rows(&self) -> Vec<CheckRow<'_>> {
        self.suites
            .iter()
            .flat_map(|s| {
                s.checks.iter().map(move |c| CheckRow {
                    suite: &s.suite,
                    id: &c.id,
                    anchor: &c.anchor,
                    measured: c.measured,
                    tolerance: c.tolerance,
                    passed: c.passed,
                })
            })
            .collect()
    }
}

/// JSON form of a [`ResidueRecord`].
#[derive(Debug, Clone, Serialize)]
pub struct ResidueEntry {
    /// Resonance index.
    pub n: usize,
    /// Sheet signature, e.g. `+,+,-`.
    pub eps: String,
    /// Extracted residue.
    pub extracted: Cx,
    /// Reference prediction `−(1/24)(n+1/2)²S(i(n+1/2),1)`.
    pub predicted: Cx,
    /// Relative error against the reference prediction.
    pub rel_error: f64,
    /// Prediction with the chart bookkeeping carried through.
    pub predicted_derived: Cx,
    /// Relative error against the derived prediction.
    pub rel_error_derived: f64,
    /// Second Laurent coefficient.
    pub c_minus2: Cx,
    /// Detected pole order.
    pub order: u8,
    /// Chart-circle radius.
    pub radius: f64,
    /// Trapezoid nodes used.
    pub nodes: usize,
    /// Chart description.
    pub chart: &'static str,
    /// Whether the holomorphic part of the resolvent was included.
    pub holomorphic_part_included: bool,
}

impl From<&ResidueRecord> for ResidueEntry {
    fn from(r: &ResidueRecord) -> Self {
        ResidueEntry {
            n: r.n,
            eps: format_signs(r.eps.signs()),
            extracted: r.extracted.into(),
            predicted: r.predicted.into(),
            rel_error: r.rel_error,
            predicted_derived: r.predicted_derived.into(),
            rel_error_derived: r.rel_error_derived,
            c_minus2: r.c_minus2.into(),
            order: r.order,
            radius: r.radius,
            nodes: r.nodes,
            chart: r.chart,
            holomorphic_part_included: r.holomorphic_part_included,
        }
    }
}

/// CSV row of a residue record.
#[derive(Debug, Clone, Serialize)]
pub struct ResidueRow {
    /// Resonance index.
    pub n: usize,
    /// Sheet signature.
    pub eps: String,
    /// Re of the extracted residue.
    pub re_extracted: f64,
    /// Im of the extracted residue.
    pub im_extracted: f64,
    /// Re of the reference prediction.
    pub re_predicted: f64,
    /// Im of the reference prediction.
    pub im_predicted: f64,
    /// Relative error against the reference prediction.
    pub rel_error: f64,
    /// Chart-circle radius.
    pub radius: f64,
    /// Detected pole order.
    pub order: u8,
    /// Re of the derived prediction.
    pub re_predicted_derived: f64,
    /// Im of the derived prediction.
    pub im_predicted_derived: f64,
    /// Relative error against the derived prediction.
    pub rel_error_derived: f64,
}

impl From<&ResidueRecord> for ResidueRow {
    fn from(r: &ResidueRecord) -> Self {
        ResidueRow {
            n: r.n,
            eps: format_signs(r.eps.signs()),
            re_extracted: r.extracted.re,
            im_extracted: r.extracted.im,
            re_predicted: r.predicted.re,
            im_predicted: r.predicted.im,
            rel_error: r.rel_error,
            radius: r.radius,
            order: r.order,
            re_predicted_derived: r.predicted_derived.re,
            im_predicted_derived: r.predicted_derived.im,
            rel_error_derived: r.rel_error_derived,
        }
    }
}

/// JSON form of a scan control point.
#[derive(Debug, Clone, Serialize)]
pub struct ControlEntry {
    /// Centre in the scaled variable.
    pub z: Cx,
    /// Atlas region.
    pub region: i64,
    /// Sheet signature.
    pub eps: String,
    /// `|∮ R̃|` around the point.
    pub circle_integral: f64,
    /// Local size of `R̃`.
    pub local_scale: f64,
    /// Whether the circle integral vanishes.
    pub clean: bool,
}

impl From<&ControlPoint> for ControlEntry {
    fn from(c: &ControlPoint) -> Self {
        ControlEntry {
            z: c.z.into(),
            region: c.region,
            eps: format_signs(c.eps.signs()),
            circle_integral: c.circle_integral,
            local_scale: c.local_scale,
            clean: c.clean,
        }
    }
}

/// JSON form of a [`ScanReport`].
#[derive(Debug, Clone, Serialize)]
pub struct ScanEntry {
    /// Resonance indices with a detected simple pole.
    pub detected: Vec<usize>,
    /// Candidate records.
    pub records: Vec<ResidueEntry>,
    /// Control points between resonances.
    pub controls: Vec<ControlEntry>,
    /// Control on the physical sheet.
    pub physical: ControlEntry,
    /// Scan verdict.
    pub passed: bool,
}

impl From<&ScanReport> for ScanEntry {
    fn from(s: &ScanReport) -> Self {
        ScanEntry {
            detected: s.detected.clone(),
            records: s.records.iter().map(ResidueEntry::from).collect(),
            controls: s.controls.iter().map(ControlEntry::from).collect(),
            physical: (&s.physical).into(),
            passed: s.passed(),
        }
    }
}
