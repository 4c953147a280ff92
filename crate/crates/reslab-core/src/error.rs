//! Error type shared by every module of the core.

use num_complex::Complex64;
use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, CoreError>;

/// Failures reported by the numerical core.
///
/// Every variant carries enough location data to reproduce the failing
/// evaluation; nothing is ever silently replaced by `NaN`.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoreError {
    /// A function with a pole or removable zero at the origin received `0`.
    #[error("argument must be non-zero")]
    ZeroArgument,
    /// The argument lies on a branch cut and no side was selected.
    #[error("argument {0} lies on a branch cut; choose a side")]
    OnBranchCut(Complex64),
    /// An evaluation point is closer than the guard band to a pole.
    #[error("pole proximity at {location}: distance {distance:e} below guard")]
    PoleProximity {
        /// Offending argument (the value whose image is near a pole).
        location: Complex64,
        /// Distance to the nearest pole.
        distance: f64,
    },
    /// The residue condition `i(Z+1/2) ∩ z·∂E = ∅` fails for the contour radius.
    #[error("residue condition violated at z = {z} for r = {r}")]
    ResidueCondition {
        /// Spectral point.
        z: Complex64,
        /// Contour radius.
        r: f64,
    },
    /// Quadrature did not reach its tolerance within the refinement budget.
    #[error("quadrature did not converge: estimate {estimate:e} after {nodes} nodes")]
    NotConverged {
        /// Last error estimate.
        estimate: f64,
        /// Number of nodes used at the final level.
        nodes: usize,
    },
    /// A precondition on the input domain is violated.
    #[error("domain violation: {0}")]
    Domain(&'static str),
    /// A point of the covering surface is not in the requested atlas region.
    #[error("point {z} is not covered by atlas region {region}")]
    AtlasMembership {
        /// Base point.
        z: Complex64,
        /// Requested region index.
        region: i64,
    },
    /// Sheet tracking could not decide between the two roots of a fibre.
    #[error("ambiguous sheet tracking near z = {0}")]
    AmbiguousTracking(Complex64),
    /// A numerical factorisation met a (near) zero pivot.
    #[error("near-singular pivot {0:e}")]
    SingularPivot(f64),
    /// The requested evaluation exceeds the configured cost cap.
    #[error("cost cap exceeded: {0}")]
    CostCap(&'static str),
}
