//! Pass/fail thresholds of the verification suites.
//!
//! Every field can be overridden from the `tolerances` object of a run
//! config; overrides must be positive and finite.

use serde::{Deserialize, Serialize};

use crate::error::{AppError, Result};

/// Thresholds used by [`crate::suites`]. A check passes iff its measured
/// residual is at most the tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Branch kit round trips, parity and one-sided limits.
    pub branch: f64,
    /// Pointwise symbol identities (relative).
    pub identities: f64,
    /// `F = F_r + 2πi G_r` (relative).
    pub deformation: f64,
    /// `F(−z) = F(z)` (relative).
    pub evenness: f64,
    /// Allowed factor between `|F(z)/z⁶|` at `|z| = 10⁻²` and `10⁻³`.
    pub flatness_ratio: f64,
    /// Vanishing of the cancelling factor and lattice membership.
    pub cancellation: f64,
    /// Agreement of lifted values across region seams (relative).
    pub gluing: f64,
    /// Jump of the resolvent across the logarithmic cut (relative).
    pub jump: f64,
    /// Agreement of the two resolvent representations on their overlap.
    pub overlap: f64,
    /// `|c₋₂|/|c₋₁|` at a detected pole.
    pub simple_pole: f64,
    /// Residue values, Gaussian family (relative).
    pub residue_gaussian: f64,
    /// Residue values, spherical family (relative).
    pub residue_spherical: f64,
    /// Independence of the residue from the chart (relative).
    pub chart_independence: f64,
    /// `φ_λ(o) = 1` and `φ_{±ρ} ≡ 1`.
    pub spherical_unit: f64,
    /// Weyl invariance of `φ_λ` in `λ`.
    pub weyl: f64,
    /// Change of `φ_λ(y)` when the quadrature order is doubled.
    pub doubling: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            branch: 1e-12,
            identities: 1e-10,
            deformation: 1e-8,
            evenness: 1e-11,
            flatness_ratio: 10.0,
            cancellation: 1e-10,
            gluing: 1e-9,
            jump: 1e-6,
            overlap: 1e-7,
            simple_pole: 1e-6,
            residue_gaussian: 1e-6,
            residue_spherical: 1e-4,
            chart_independence: 1e-8,
            spherical_unit: 1e-10,
            weyl: 1e-8,
            doubling: 1e-9,
        }
    }
}

impl Tolerances {
    fn entries(&self) -> [(&'static str, f64); 16] {
        [
            ("branch", self.branch),
            ("identities", self.identities),
            ("deformation", self.deformation),
            ("evenness", self.evenness),
            ("flatness_ratio", self.flatness_ratio),
            ("cancellation", self.cancellation),
            ("gluing", self.gluing),
            ("jump", self.jump),
            ("overlap", self.overlap),
            ("simple_pole", self.simple_pole),
            ("residue_gaussian", self.residue_gaussian),
            ("residue_spherical", self.residue_spherical),
            ("chart_independence", self.chart_independence),
            ("spherical_unit", self.spherical_unit),
            ("weyl", self.weyl),
            ("doubling", self.doubling),
        ]
    }

    /// Reject non-positive or non-finite thresholds.
    pub fn validate(&self) -> Result<()> {
        for (name, value) in self.entries() {
            if !(value.is_finite() && value > 0.0) {
                return Err(AppError::Config(format!("tolerance `{name}` must be positive and finite, got {value}")));
            }
        }
        if self.flatness_ratio < 1.0 {
            return Err(AppError::Config("tolerance `flatness_ratio` is a factor and must be at least 1".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid_and_overrides_are_checked() {
        Tolerances::default().validate().unwrap();
        let parsed: Tolerances = serde_json::from_str(r#"{"gluing": 1e-8}"#).unwrap();
        assert_eq!(parsed.gluing, 1e-8);
        assert_eq!(parsed.branch, 1e-12);
        let bad: Tolerances = serde_json::from_str(r#"{"jump": -1.0}"#).unwrap();
        assert!(bad.validate().is_err());
        assert!(serde_json::from_str::<Tolerances>(r#"{"unknown": 1.0}"#).is_err());
    }
}
