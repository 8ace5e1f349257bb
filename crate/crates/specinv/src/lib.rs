//! Magnitude-only spectrogram inversion toolkit.
//!
//! Recovers a time-domain signal from the magnitudes of its discrete Gabor
//! transform coefficients. The transform itself lives in [`frame`], the two
//! constraint-set projections in [`proj`], and the iterative solvers
//! (Griffin-Lim and friends, relaxed reflections, difference map) in [`algo`].
//! [`metric`] scores iterates, [`sig_io`] handles WAV files, synthetic test
//! signals, convergence traces and SVG plots.

pub mod algo;
mod error;
pub mod frame;
pub mod metric;
pub mod proj;
pub mod sig_io;

pub use error::{Error, Result};
pub use frame::{CoefficientGrid, GaborSystem, Signal};
pub use proj::MagnitudeTarget;
