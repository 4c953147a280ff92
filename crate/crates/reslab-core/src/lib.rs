//! Numerical core for the meromorphic continuation of the resolvent of the
//! Laplacian on the symmetric space `SL(3,R)/SO(3)`.
//!
//! The crate is `no_std` (it needs `alloc`) and is organised bottom-up:
//!
//! * [`algebra`] — the root system `A2`, spectral parameters, the Weyl group.
//! * [`branch`] — `c`, `s`, principal square roots, `c⁻¹` and the ellipse
//!   bookkeeping that decides which residues a deformed contour crosses.
//! * [`symbols`] — the integrand factors `φ_{z,u}`, `ψ_z`, the Plancherel
//!   density, `Γ_X`, and the two shipped spectral-symbol families.
//! * [`spherical`] — Harish-Chandra spherical functions by quadrature over
//!   `SO(3)` through the Iwasawa projection.
//! * [`contour`] — closed-curve and path quadrature, `F`, `F_r`, `G_(n)`, the
//!   deformation identity and the resolvent on both sides of the spectrum.
//! * [`surface`] — the Riemann surfaces `M_n`, `M_(N)`, their charts and the
//!   lifted functions `G̃`, `F̃`, `R̃`.
//! * [`resonance`] — residue extraction, predicted values and pole scans.
//!
//! Parallelism is abstracted behind [`exec::Executor`]; every reduction is
//! performed in a fixed order, so results are bit-identical for any executor.

#![cfg_attr(not(test), no_std)]
#![warn(missing_docs)]

extern crate alloc;

pub mod algebra;
pub mod branch;
pub mod contour;
pub mod error;
pub mod exec;
pub mod math;
pub mod resonance;
pub mod spherical;
pub mod surface;
pub mod symbols;

pub use error::{CoreError, Result};
pub use num_complex::Complex64;
