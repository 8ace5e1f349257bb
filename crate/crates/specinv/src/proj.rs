//! Projections onto the two constraint sets and the distance/objective they
//! induce.
//!
//! `C1` is the range of the analysis operator (coefficient grids that are
//! actual transforms of some signal); its orthogonal projection is
//! analyze-after-synthesize. `C2` is the set of grids whose entrywise modulus
//! equals a given magnitude target; its projection rescales each entry to the
//! target modulus, keeping the phase.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::frame::{CoefficientGrid, GaborSystem};

/// Entries with modulus below this are treated as exactly zero when
/// projecting onto the magnitude set (subnormal guard; avoids dividing by a
/// denormal while behaving like the exact-zero branch at double precision).
const ZERO_MODULUS: f64 = 1e-300;

/// Nonnegative target magnitudes, same layout as a [`CoefficientGrid`].
#[derive(Clone, Debug, PartialEq)]
pub struct MagnitudeTarget {
    n_channels: usize,
    n_frames: usize,
    values: Vec<f64>,
}

impl MagnitudeTarget {
    pub fn new(n_channels: usize, n_frames: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != n_channels * n_frames {
            return Err(Error::shape(
                "MagnitudeTarget::new",
                n_channels * n_frames,
                values.len(),
            ));
        }
        if values.iter().any(|&v| !v.is_finite() || v < 0.0) {
            return Err(Error::InvalidArgument(
                "magnitude target entries must be finite and nonnegative".into(),
            ));
        }
        Ok(MagnitudeTarget {
            n_channels,
            n_frames,
            values,
        })
    }

    /// Entrywise modulus of a coefficient grid.
    pub fn from_grid(grid: &CoefficientGrid) -> Self {
        MagnitudeTarget {
            n_channels: grid.n_channels(),
            n_frames: grid.n_frames(),
            values: grid.values().iter().map(|c| c.norm()).collect(),
        }
    }

    pub fn n_channels(&self) -> usize {
        self.n_channels
    }

    pub fn n_frames(&self) -> usize {
        self.n_frames
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n_channels, self.n_frames)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

fn check_shapes(context: &'static str, c: &CoefficientGrid, s: &MagnitudeTarget) -> Result<()> {
    if c.shape() != s.shape() {
        return Err(Error::shape(
            context,
            format!("{:?}", s.shape()),
            format!("{:?}", c.shape()),
        ));
    }
    Ok(())
}

/// Orthogonal projection onto the range of the transform:
/// `P_C1(c) = analyze(synthesize(c))`.
pub fn proj_range(c: &CoefficientGrid, sys: &GaborSystem) -> Result<CoefficientGrid> {
    sys.analyze(&sys.synthesize(c)?)
}

/// Projection onto the magnitude set: each entry rescaled to modulus `s_i`
/// with its phase kept; zero entries become the real value `s_i`.
pub fn proj_magnitude(c: &CoefficientGrid, s: &MagnitudeTarget) -> Result<CoefficientGrid> {
    check_shapes("proj_magnitude", c, s)?;
    let values = c
        .values()
        .iter()
        .zip(s.values())
        .map(|(&ci, &si)| {
            let r = ci.norm();
            if r < ZERO_MODULUS {
                Complex64::new(si, 0.0)
            } else {
                ci * (si / r)
            }
        })
        .collect();
    CoefficientGrid::from_values(c.n_channels(), c.n_frames(), values)
}

/// `R_C1 = 2 P_C1 - Id`
pub fn reflect_range(c: &CoefficientGrid, sys: &GaborSystem) -> Result<CoefficientGrid> {
    Ok(&(&proj_range(c, sys)? * 2.0) - c)
}

/// `R_C2 = 2 P_C2 - Id`
pub fn reflect_magnitude(c: &CoefficientGrid, s: &MagnitudeTarget) -> Result<CoefficientGrid> {
    Ok(&(&proj_magnitude(c, s)? * 2.0) - c)
}

/// Euclidean distance from `c` to the magnitude set: `|| |c| - s ||_2`.
pub fn dist_magnitude(c: &CoefficientGrid, s: &MagnitudeTarget) -> Result<f64> {
    check_shapes("dist_magnitude", c, s)?;
    Ok(c.values()
        .iter()
        .zip(s.values())
        .map(|(ci, &si)| {
            let d = ci.norm() - si;
            d * d
        })
        .sum::<f64>()
        .sqrt())
}

/// `1/2 * dist_magnitude^2`. The range-membership indicator of the full
/// objective is enforced structurally (consistent iterates are produced by
/// [`proj_range`]), never numerically.
pub fn objective(c: &CoefficientGrid, s: &MagnitudeTarget) -> Result<f64> {
    let d = dist_magnitude(c, s)?;
    Ok(0.5 * d * d)
}
