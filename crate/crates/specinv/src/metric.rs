//! Quality measures on iterates.

use crate::error::{Error, Result};
use crate::frame::CoefficientGrid;
use crate::proj::{dist_magnitude, MagnitudeTarget};

/// Spectral signal-to-noise ratio in dB:
/// `-10 * log10(|| |c| - s || / ||s||)`.
///
/// Higher is better; depends on `c` only through its modulus. A zero residual
/// returns `f64::INFINITY`, which serializes as the literal `inf` and
/// compares greater than any finite value.
pub fn ssnr(c: &CoefficientGrid, s: &MagnitudeTarget) -> Result<f64> {
    let s_norm = s.norm();
    if s_norm == 0.0 {
        return Err(Error::InvalidArgument(
            "ssnr undefined for an all-zero magnitude target".into(),
        ));
    }
    let resid = dist_magnitude(c, s)?;
    if resid == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(-10.0 * (resid / s_norm).log10())
}
