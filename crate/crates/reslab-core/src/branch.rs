//! Elementary branch-cut analysis: the Joukowski-type maps `c`, `s`, the
//! principal square root, the product `√(z+1)√(z−1)`, the inverse `c⁻¹`, and
//! the ellipses `E_{c(r),s(r)}` that decide which residues a contour crosses.
//!
//! Boundary values on cuts are requested explicitly through [`Side`], never
//! through signed zeros.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::math::{ceil_i64, floor_i64, sqrt, I, ZERO};

/// Relative band around `1` inside which a point counts as lying on `∂E`.
pub const ELLIPSE_BOUNDARY_TOL: f64 = 1e-9;

/// Side of a horizontal cut from which a boundary value is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// Limit from `Im > 0` (`x + i0`).
    Above,
    /// Limit from `Im < 0` (`x − i0`).
    Below,
}

impl Side {
    /// `+1` above, `−1` below.
    pub fn sign(self) -> f64 {
        match self {
            Side::Above => 1.0,
            Side::Below => -1.0,
        }
    }
}

/// `c(z) = (z + z⁻¹)/2`.
pub fn c(z: Complex64) -> Result<Complex64> {
    if z == ZERO {
        return Err(CoreError::ZeroArgument);
    }
    Ok((z + z.inv()) * 0.5)
}

/// `s(z) = (z − z⁻¹)/2`.
pub fn s(z: Complex64) -> Result<Complex64> {
    if z == ZERO {
        return Err(CoreError::ZeroArgument);
    }
    Ok((z - z.inv()) * 0.5)
}

/// Principal square root `√(R e^{iΘ}) = √R e^{iΘ/2}`, `Θ ∈ (−π, π)`.
///
/// Arguments on `(−∞, 0]` are rejected; use [`sqrt_principal_side`] there.
pub fn sqrt_principal(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && z.re <= 0.0 {
        return Err(CoreError::OnBranchCut(z));
    }
    Ok(z.sqrt())
}

/// Boundary value `√(x ± i0)` for real `x`; off the cut this is the principal
/// root and `side` is ignored.
pub fn sqrt_principal_side(z: Complex64, side: Side) -> Complex64 {
    if z.im == 0.0 && z.re <= 0.0 {
        Complex64::new(0.0, side.sign() * sqrt(-z.re))
    } else {
        z.sqrt()
    }
}

/// `√(z+1)√(z−1)`, extended to the odd holomorphic function on `C∖[−1,1]`.
///
/// The principal product is used on `Re z > 0` (and on the positive imaginary
/// axis); elsewhere the value is `−f(−z)`, which makes the oddness exact in
/// floating point.
pub fn two_sqrt_product(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && z.re.abs() <= 1.0 {
        return Err(CoreError::OnBranchCut(z));
    }
    Ok(two_sqrt_product_unchecked(z))
}

fn two_sqrt_product_unchecked(z: Complex64) -> Complex64 {
    let canonical = z.re > 0.0 || (z.re == 0.0 && z.im > 0.0);
    if canonical {
        (z + 1.0).sqrt() * (z - 1.0).sqrt()
    } else {
        let m = -z;
        -((m + 1.0).sqrt() * (m - 1.0).sqrt())
    }
}

/// Boundary value of [`two_sqrt_product`] at `x ± i0`: `±i√(1−x²)` on
/// `[−1,1]`, the ordinary value elsewhere.
pub fn two_sqrt_product_side(z: Complex64, side: Side) -> Complex64 {
    if z.im == 0.0 && z.re.abs() <= 1.0 {
        Complex64::new(0.0, side.sign() * sqrt(1.0 - z.re * z.re))
    } else {
        two_sqrt_product_unchecked(z)
    }
}

/// `c⁻¹(z) = z − √(z+1)√(z−1)`, the inverse of `c` from the punctured unit
/// disk onto `C∖[−1,1]`; `|c⁻¹(z)| < 1`.
///
/// Evaluated as `1/(z + √(z+1)√(z−1))` to avoid cancellation for large `|z|`.
pub fn c_inv(z: Complex64) -> Result<Complex64> {
    Ok((z + two_sqrt_product(z)?).inv())
}

/// Boundary value `c⁻¹(x ± i0) = x ∓ i√(1−x²)` on `[−1,1]`; the ordinary value
/// elsewhere.
pub fn c_inv_side(z: Complex64, side: Side) -> Complex64 {
    if z.im == 0.0 && z.re.abs() <= 1.0 {
        z - two_sqrt_product_side(z, side)
    } else {
        (z + two_sqrt_product_unchecked(z)).inv()
    }
}

/// `s∘c⁻¹(z) = −√(z+1)√(z−1)`.
pub fn s_of_c_inv(z: Complex64) -> Result<Complex64> {
    Ok(-two_sqrt_product(z)?)
}

/// Boundary value of [`s_of_c_inv`] at `x ± i0`.
pub fn s_of_c_inv_side(z: Complex64, side: Side) -> Complex64 {
    -two_sqrt_product_side(z, side)
}

/// The ellipse `E_{c(r),s(r)} = c(D₁∖D̄_r) ∪ [−1,1]` for `0 < r < 1`, with semi-axes
/// `c(r) > 1` (real direction) and `|s(r)|` (imaginary direction).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipseSpec {
    r: f64,
}

impl EllipseSpec {
    /// Ellipse for radius `r ∈ (0, 1)`.
    pub fn new(r: f64) -> Result<Self> {
        if !(r > 0.0 && r < 1.0) {
            return Err(CoreError::Domain("ellipse radius must lie in (0, 1)"));
        }
        Ok(EllipseSpec { r })
    }

    /// Ellipse whose real semi-axis is `a = c(r) > 1`.
    pub fn from_semi_axis(a: f64) -> Result<Self> {
        if !(a.is_finite() && a > 1.0) {
            return Err(CoreError::Domain("real semi-axis must exceed 1"));
        }
        EllipseSpec::new(a - sqrt(a * a - 1.0))
    }

    /// Radius `r`.
    pub fn r(&self) -> f64 {
        self.r
    }

    /// Real semi-axis `c(r)`.
    pub fn semi_major(&self) -> f64 {
        0.5 * (self.r + 1.0 / self.r)
    }

    /// Imaginary semi-axis `|s(r)|`.
    pub fn semi_minor(&self) -> f64 {
        0.5 * (1.0 / self.r - self.r)
    }

    /// Quadratic form `(Re q/c)² + (Im q/s)²`; `< 1` inside, `= 1` on `∂E`.
    pub fn level(&self, q: Complex64) -> f64 {
        let a = self.semi_major();
        let b = self.semi_minor();
        (q.re / a) * (q.re / a) + (q.im / b) * (q.im / b)
    }

    /// Open-ellipse membership.
    pub fn contains(&self, q: Complex64) -> bool {
        self.level(q) < 1.0
    }

    /// Boundary point `c(r e^{iθ})`.
    pub fn boundary_point(&self, theta: f64) -> Complex64 {
        let w = Complex64::from_polar(self.r, theta);
        (w + w.inv()) * 0.5
    }
}

/// Membership of `p` in the open ellipse `E_{c(r),s(r)}`.
pub fn ellipse_contains(r: f64, p: Complex64) -> Result<bool> {
    Ok(EllipseSpec::new(r)?.contains(p))
}

fn half_integer_candidates(z: Complex64, ellipse: &EllipseSpec) -> core::ops::RangeInclusive<i64> {
    let reach = z.norm() * ellipse.semi_major() + 1.0;
    floor_i64(-reach - 0.5)..=ceil_i64(reach - 0.5)
}

/// Residue condition `i(Z+1/2) ∩ z·∂E_{c(r),s(r)} = ∅`, decided with the band
/// [`ELLIPSE_BOUNDARY_TOL`] around the boundary.
pub fn residue_condition_holds(z: Complex64, r: f64) -> Result<bool> {
    let e = EllipseSpec::new(r)?;
    if z == ZERO {
        return Ok(true);
    }
    for n in half_integer_candidates(z, &e) {
        let q = I * (n as f64 + 0.5) / z;
        if (e.level(q) - 1.0).abs() <= ELLIPSE_BOUNDARY_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The index set `S_{r,z} = {n ∈ Z : i(n+1/2) ∈ z·E_{c(r),s(r)}}` in increasing
/// order.
///
/// Off `iR` no `i(n+1/2)/z` is real, so removing `[−1,1]` from the ellipse
/// changes nothing; on `iR` points of the segment count as members (the
/// closed ellipse interior). The set is symmetric under `n ↦ −n−1`.
pub fn enumerate_s(r: f64, z: Complex64) -> Result<Vec<i64>> {
    if z == ZERO {
        return Err(CoreError::ZeroArgument);
    }
    let e = EllipseSpec::new(r)?;
    Ok(half_integer_candidates(z, &e).filter(|&n| e.contains(I * (n as f64 + 0.5) / z)).collect())
}

/// Non-negative part `S_{r,z} ∩ N`.
pub fn enumerate_s_nonnegative(r: f64, z: Complex64) -> Result<Vec<i64>> {
    Ok(enumerate_s(r, z)?.into_iter().filter(|&n| n >= 0).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c_and_s_basic_values() {
        assert!((c(Complex64::new(2.0, 0.0)).unwrap().re - 1.25).abs() < 1e-15);
        assert!((s(I).unwrap() - I).norm() < 1e-15);
        assert!(c(ZERO).is_err());
    }

    #[test]
    fn two_sqrt_product_sign_on_reals() {
        let v = two_sqrt_product(Complex64::new(-2.0, 0.0)).unwrap();
        assert!((v.re + sqrt(3.0)).abs() < 1e-15 && v.im == 0.0);
        let b = two_sqrt_product_side(ZERO, Side::Above);
        assert_eq!(b, I);
    }
}
