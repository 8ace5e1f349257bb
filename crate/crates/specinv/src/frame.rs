//! Discrete Gabor transform on periodic signals.
//!
//! The analysis operator maps a length-`L` signal to an `M_fft x L/a` grid of
//! complex coefficients (hop `a`, `M_fft` frequency channels, window placed
//! zero-phase, frequency-invariant phase convention):
//!
//! ```text
//! c[m,k] = sum_l x[l] * g[(l - k*a) mod L] * exp(-2*pi*i*m*l / M_fft)
//! ```
//!
//! Under the painless condition (window length <= `M_fft`, both dividing `L`)
//! the frame operator is diagonal, so the pseudo-inverse is an overlap-add
//! synthesis with the canonical dual window, computed pointwise. Analysis and
//! synthesis run one FFT per frame; [`GaborSystem::dense_operator`] builds the
//! explicit matrix for small instances so tests can check both paths against
//! plain linear algebra.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// 4-term Nuttall window with continuous first derivative.
const NUTTALL_COEFFS: [f64; 4] = [0.355768, 0.487396, 0.144232, 0.012604];

/// Frame-operator diagonal entries below this floor mean the window shifts
/// fail to cover some sample and the system is rejected as not a frame.
const FRAME_DIAG_FLOOR: f64 = 1e-12;

/// Entry-count guard for [`GaborSystem::dense_operator`].
const DENSE_MAX_ENTRIES: usize = 1 << 16;

/// Periodic 4-term Nuttall window, rotated so the peak sits at index 0 and
/// L2-normalized.
pub fn nuttall_window(win_len: usize) -> Result<Vec<f64>> {
    if win_len < 2 {
        return Err(Error::InvalidArgument(format!(
            "window length must be >= 2, got {win_len}"
        )));
    }
    let [a0, a1, a2, a3] = NUTTALL_COEFFS;
    let n = win_len as f64;
    // Peak of the periodic form sits at win_len/2; shift it to index 0.
    let half = win_len / 2;
    let mut w: Vec<f64> = (0..win_len)
        .map(|i| {
            let x = 2.0 * PI * (((i + half) % win_len) as f64) / n;
            a0 - a1 * x.cos() + a2 * (2.0 * x).cos() - a3 * (3.0 * x).cos()
        })
        .collect();
    let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
    for v in &mut w {
        *v /= norm;
    }
    Ok(w)
}

/// A (possibly complex) time-domain signal. `sample_rate` is metadata only.
#[derive(Clone, Debug)]
pub struct Signal {
    pub samples: Vec<Complex64>,
    pub sample_rate: u32,
}

impl Signal {
    pub fn new(samples: Vec<Complex64>, sample_rate: u32) -> Self {
        Signal {
            samples,
            sample_rate,
        }
    }

    pub fn from_real(samples: &[f64], sample_rate: u32) -> Self {
        Signal {
            samples: samples.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            sample_rate,
        }
    }

    pub fn zeros(len: usize, sample_rate: u32) -> Self {
        Signal {
            samples: vec![Complex64::new(0.0, 0.0); len],
            sample_rate,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.samples.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Tail-pads with zeros up to `len`.
    pub fn zero_padded(&self, len: usize) -> Signal {
        let mut samples = self.samples.clone();
        samples.resize(len, Complex64::new(0.0, 0.0));
        Signal {
            samples,
            sample_rate: self.sample_rate,
        }
    }
}

/// Complex Gabor coefficients, `n_channels` frequency rows by `n_frames` time
/// columns, stored frame-major (each frame's channels contiguous).
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientGrid {
    n_channels: usize,
    n_frames: usize,
    values: Vec<Complex64>,
}

impl CoefficientGrid {
    pub fn zeros(n_channels: usize, n_frames: usize) -> Self {
        CoefficientGrid {
            n_channels,
            n_frames,
            values: vec![Complex64::new(0.0, 0.0); n_channels * n_frames],
        }
    }

    pub fn from_values(n_channels: usize, n_frames: usize, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != n_channels * n_frames {
            return Err(Error::shape(
                "CoefficientGrid::from_values",
                n_channels * n_frames,
                values.len(),
            ));
        }
        Ok(CoefficientGrid {
            n_channels,
            n_frames,
            values,
        })
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

    /// Total number of coefficients.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn get(&self, channel: usize, frame: usize) -> Complex64 {
        self.values[frame * self.n_channels + channel]
    }

    #[inline]
    pub fn set(&mut self, channel: usize, frame: usize, value: Complex64) {
        self.values[frame * self.n_channels + channel] = value;
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn frame(&self, k: usize) -> &[Complex64] {
        &self.values[k * self.n_channels..(k + 1) * self.n_channels]
    }

    pub fn frame_mut(&mut self, k: usize) -> &mut [Complex64] {
        &mut self.values[k * self.n_channels..(k + 1) * self.n_channels]
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<self, other> = sum_i self_i * conj(other_i)`
    pub fn inner(&self, other: &CoefficientGrid) -> Complex64 {
        debug_assert_eq!(self.shape(), other.shape());
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b.conj())
            .sum()
    }

    pub fn all_finite(&self) -> bool {
        self.values.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn max_abs_diff(&self, other: &CoefficientGrid) -> f64 {
        debug_assert_eq!(self.shape(), other.shape());
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

macro_rules! grid_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for &CoefficientGrid {
            type Output = CoefficientGrid;
            fn $method(self, rhs: &CoefficientGrid) -> CoefficientGrid {
                assert_eq!(self.shape(), rhs.shape(), "grid shape mismatch");
                CoefficientGrid {
                    n_channels: self.n_channels,
                    n_frames: self.n_frames,
                    values: self
                        .values
                        .iter()
                        .zip(&rhs.values)
                        .map(|(a, b)| a $op b)
                        .collect(),
                }
            }
        }
    };
}

grid_binop!(Add, add, +);
grid_binop!(Sub, sub, -);

impl Mul<f64> for &CoefficientGrid {
    type Output = CoefficientGrid;
    fn mul(self, rhs: f64) -> CoefficientGrid {
        CoefficientGrid {
            n_channels: self.n_channels,
            n_frames: self.n_frames,
            values: self.values.iter().map(|a| a * rhs).collect(),
        }
    }
}

/// A fixed Gabor analysis/synthesis system: window, hop, channel count and
/// signal length, plus cached FFT plans and the lazily built canonical dual
/// window. Immutable after construction; cheap to clone and `Send + Sync`.
#[derive(Clone)]
pub struct GaborSystem {
    window: Vec<f64>,
    /// Window periodized to length `L`, zero-phase (peak at index 0, negative
    /// half wrapped to the top end).
    long_window: Vec<f64>,
    /// Indices of `long_window` carrying window samples, in a fixed order, so
    /// folds accumulate deterministically.
    support: Vec<usize>,
    hop: usize,
    n_channels: usize,
    signal_len: usize,
    dual_window: OnceLock<Vec<f64>>,
    fft_fwd: Arc<dyn Fft<f64>>,
    fft_inv: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for GaborSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GaborSystem")
            .field("win_len", &self.window.len())
            .field("hop", &self.hop)
            .field("n_channels", &self.n_channels)
            .field("signal_len", &self.signal_len)
            .finish()
    }
}

impl GaborSystem {
    /// Builds a system from an arbitrary real window.
    ///
    /// Requirements: `hop >= 1`, the window is no longer than `n_channels`
    /// (painless case), `hop` and `n_channels` both divide `signal_len`, the
    /// system is redundant (`n_channels > hop`), and the window shifts cover
    /// every sample (otherwise [`Error::SingularFrame`]).
    pub fn new(
        window: Vec<f64>,
        hop: usize,
        n_channels: usize,
        signal_len: usize,
    ) -> Result<GaborSystem> {
        let win_len = window.len();
        if hop == 0 {
            return Err(Error::InvalidArgument("hop must be positive".into()));
        }
        if win_len == 0 {
            return Err(Error::InvalidArgument("window must be non-empty".into()));
        }
        if window.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(
                "window contains a non-finite value".into(),
            ));
        }
        if win_len > n_channels {
            return Err(Error::InvalidArgument(format!(
                "window length {win_len} exceeds channel count {n_channels} (painless condition)"
            )));
        }
        if n_channels <= hop {
            return Err(Error::InvalidArgument(format!(
                "system must be redundant: n_channels {n_channels} must exceed hop {hop}"
            )));
        }
        if signal_len == 0 || signal_len % hop != 0 || signal_len % n_channels != 0 {
            return Err(Error::InvalidArgument(format!(
                "signal length {signal_len} must be a positive multiple of hop {hop} and channel count {n_channels}"
            )));
        }

        // Zero-phase periodization: first half of the window at the start,
        // second half (negative time) wrapped to the end.
        let mut long_window = vec![0.0; signal_len];
        let mut support = Vec::with_capacity(win_len);
        let pos_half = win_len.div_ceil(2);
        for (i, &v) in window.iter().enumerate() {
            let dst = if i < pos_half {
                i
            } else {
                signal_len - win_len + i
            };
            long_window[dst] = v;
            support.push(dst);
        }

        let mut planner = FftPlanner::new();
        let sys = GaborSystem {
            window,
            long_window,
            support,
            hop,
            n_channels,
            signal_len,
            dual_window: OnceLock::new(),
            fft_fwd: planner.plan_fft_forward(n_channels),
            fft_inv: planner.plan_fft_inverse(n_channels),
        };

        let diag = sys.frame_operator_diagonal();
        for (index, &value) in diag.iter().enumerate() {
            if value < FRAME_DIAG_FLOOR {
                return Err(Error::SingularFrame { index, value });
            }
        }
        Ok(sys)
    }

    /// Paper-style default geometry around a Nuttall window: window length
    /// equals the channel count.
    pub fn with_nuttall(hop: usize, n_channels: usize, signal_len: usize) -> Result<GaborSystem> {
        GaborSystem::new(nuttall_window(n_channels)?, hop, n_channels, signal_len)
    }

    pub fn hop(&self) -> usize {
        self.hop
    }

    pub fn n_channels(&self) -> usize {
        self.n_channels
    }

    pub fn signal_len(&self) -> usize {
        self.signal_len
    }

    pub fn n_frames(&self) -> usize {
        self.signal_len / self.hop
    }

    /// Total coefficient count `n_channels * n_frames`.
    pub fn n_coefficients(&self) -> usize {
        self.n_channels * self.n_frames()
    }

    pub fn window(&self) -> &[f64] {
        &self.window
    }

    pub fn win_len(&self) -> usize {
        self.window.len()
    }

    /// The analysis window periodized to signal length (zero-phase layout).
    pub fn long_window(&self) -> &[f64] {
        &self.long_window
    }

    /// Diagonal of the frame operator. In the painless case this is
    /// `d[l] = n_channels * sum_k g[(l - k*hop) mod L]^2`, which is
    /// hop-periodic in `l`.
    pub fn frame_operator_diagonal(&self) -> Vec<f64> {
        let mut by_residue = vec![0.0; self.hop];
        for (l, &g) in self.long_window.iter().enumerate() {
            by_residue[l % self.hop] += g * g;
        }
        (0..self.signal_len)
            .map(|l| self.n_channels as f64 * by_residue[l % self.hop])
            .collect()
    }

    /// Canonical dual window of length `L`: the analysis window divided by
    /// the frame-operator diagonal. Computed on first use and cached.
    pub fn dual_window(&self) -> &[f64] {
        self.dual_window.get_or_init(|| {
            let diag = self.frame_operator_diagonal();
            self.long_window
                .iter()
                .zip(&diag)
                .map(|(&g, &d)| if g == 0.0 { 0.0 } else { g / d })
                .collect()
        })
    }

    /// Analysis transform `c = T x`, one length-`n_channels` FFT per frame.
    pub fn analyze(&self, x: &Signal) -> Result<CoefficientGrid> {
        if x.len() != self.signal_len {
            return Err(Error::shape("analyze", self.signal_len, x.len()));
        }
        let m = self.n_channels;
        let mut grid = CoefficientGrid::zeros(m, self.n_frames());
        for k in 0..self.n_frames() {
            let off = k * self.hop;
            let buf = grid.frame_mut(k);
            // Fold the windowed frame into n_channels bins (time aliasing),
            // then a single FFT gives all channels at once.
            for &t in &self.support {
                let l = (off + t) % self.signal_len;
                buf[l % m] += x.samples[l] * self.long_window[t];
            }
            self.fft_fwd.process(buf);
        }
        Ok(grid)
    }

    /// Synthesis `x = T^+ c`: dual-window overlap-add, one inverse FFT per
    /// frame. For consistent grids this inverts [`GaborSystem::analyze`]; in
    /// general it is the minimum-norm least-squares pre-image.
    ///
    /// The result's `sample_rate` is 0 (unknown); callers that need one stamp
    /// it afterwards.
    pub fn synthesize(&self, c: &CoefficientGrid) -> Result<Signal> {
        let expected = (self.n_channels, self.n_frames());
        if c.shape() != expected {
            return Err(Error::shape(
                "synthesize",
                format!("{expected:?}"),
                format!("{:?}", c.shape()),
            ));
        }
        let m = self.n_channels;
        let dual = self.dual_window().to_vec();
        let mut x = vec![Complex64::new(0.0, 0.0); self.signal_len];
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        for k in 0..self.n_frames() {
            let off = k * self.hop;
            buf.copy_from_slice(c.frame(k));
            self.fft_inv.process(&mut buf);
            for &t in &self.support {
                let l = (off + t) % self.signal_len;
                x[l] += buf[l % m] * dual[t];
            }
        }
        Ok(Signal {
            samples: x,
            sample_rate: 0,
        })
    }

    /// Explicit analysis matrix, rows indexed like the coefficient layout
    /// (row `k * n_channels + m` is channel `m` of frame `k`). Guarded to
    /// small instances; meant for oracle tests.
    pub fn dense_operator(&self) -> Result<DenseOperator> {
        let n_rows = self.n_coefficients();
        let n_cols = self.signal_len;
        if n_rows * n_cols > DENSE_MAX_ENTRIES {
            return Err(Error::InvalidArgument(format!(
                "dense operator would hold {} entries (max {DENSE_MAX_ENTRIES})",
                n_rows * n_cols
            )));
        }
        let mut entries = Vec::with_capacity(n_rows * n_cols);
        for k in 0..self.n_frames() {
            for m in 0..self.n_channels {
                for l in 0..n_cols {
                    let shifted = (l + self.signal_len - (k * self.hop) % self.signal_len)
                        % self.signal_len;
                    let g = self.long_window[shifted];
                    let phase = -2.0 * PI * (m as f64) * (l as f64) / (self.n_channels as f64);
                    entries.push(Complex64::from_polar(1.0, phase) * g);
                }
            }
        }
        Ok(DenseOperator {
            n_rows,
            n_cols,
            entries,
        })
    }
}

/// Row-major dense analysis matrix for small systems (test oracle).
pub struct DenseOperator {
    pub n_rows: usize,
    pub n_cols: usize,
    pub entries: Vec<Complex64>,
}

impl DenseOperator {
    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.entries[r * self.n_cols..(r + 1) * self.n_cols]
    }

    /// `T x`
    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.n_cols);
        (0..self.n_rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(x)
                    .map(|(a, b)| a * b)
                    .sum::<Complex64>()
            })
            .collect()
    }

    /// `T* c` (conjugate transpose applied to a coefficient vector)
    pub fn adjoint_mul_vec(&self, c: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(c.len(), self.n_rows);
        let mut out = vec![Complex64::new(0.0, 0.0); self.n_cols];
        for r in 0..self.n_rows {
            let row = self.row(r);
            for (o, a) in out.iter_mut().zip(row) {
                *o += a.conj() * c[r];
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_signal(len: usize, seed: u64) -> Signal {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let samples = (0..len)
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        Signal {
            samples,
            sample_rate: 0,
        }
    }

    pub(crate) fn random_grid(sys: &GaborSystem, seed: u64) -> CoefficientGrid {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..sys.n_coefficients())
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        CoefficientGrid::from_values(sys.n_channels(), sys.n_frames(), values).unwrap()
    }

    fn random_window(len: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..len).map(|_| 0.1 + rng.gen::<f64>()).collect()
    }

    /// Tiny valid geometries used throughout the oracle tests.
    pub(crate) const TINY: &[(usize, usize, usize)] = &[
        (12, 2, 4),
        (16, 2, 4),
        (16, 2, 8),
        (16, 4, 8),
        (24, 2, 4),
        (24, 2, 8),
        (24, 4, 8),
    ];

    fn tiny_systems() -> Vec<GaborSystem> {
        TINY.iter()
            .enumerate()
            .map(|(i, &(l, a, m))| {
                GaborSystem::new(random_window(m, 77 + i as u64), a, m, l).unwrap()
            })
            .collect()
    }

    #[test]
    fn nuttall_coefficients_identities() {
        let [a0, a1, a2, a3] = NUTTALL_COEFFS;
        assert!((a0 + a1 + a2 + a3 - 1.0).abs() < 1e-12);
        assert!((a0 - a1 + a2 - a3).abs() < 1e-12);
    }

    #[test]
    fn nuttall_peak_at_zero_and_trough_at_half() {
        let w = nuttall_window(256).unwrap();
        let peak = w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(w[0], peak);
        assert!(w[128].abs() < 1e-15);
    }

    #[test]
    fn nuttall_even_symmetry() {
        for n in [8usize, 64, 256] {
            let w = nuttall_window(n).unwrap();
            for k in 1..n {
                assert!(
                    (w[k] - w[n - k]).abs() < 1e-12,
                    "asymmetry at {k} of {n}"
                );
            }
        }
    }

    #[test]
    fn nuttall_unit_norm() {
        for n in [2usize, 7, 32, 255, 256] {
            let w = nuttall_window(n).unwrap();
            let norm: f64 = w.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn nuttall_rejects_short() {
        assert!(matches!(
            nuttall_window(1),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn rejects_bad_geometry() {
        let w = nuttall_window(8).unwrap();
        // window longer than channels
        assert!(GaborSystem::new(w.clone(), 2, 4, 16).is_err());
        // hop does not divide L
        assert!(GaborSystem::new(w.clone(), 3, 8, 16).is_err());
        // channels do not divide L
        assert!(GaborSystem::new(w.clone(), 2, 8, 20).is_err());
        // not redundant
        assert!(GaborSystem::new(w.clone(), 8, 8, 16).is_err());
        assert!(GaborSystem::new(w, 2, 8, 16).is_ok());
    }

    #[test]
    fn singular_frame_detected() {
        // Window supported on a single sample with hop 2 leaves odd samples
        // uncovered.
        let w = vec![1.0];
        match GaborSystem::new(w, 2, 4, 16) {
            Err(Error::SingularFrame { .. }) => {}
            other => panic!("expected SingularFrame, got {other:?}"),
        }
    }

    #[test]
    fn analyze_zero_is_zero() {
        let sys = GaborSystem::with_nuttall(4, 8, 32).unwrap();
        let c = sys.analyze(&Signal::zeros(32, 0)).unwrap();
        assert!(c.values().iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn analyze_rejects_length_mismatch() {
        let sys = GaborSystem::with_nuttall(4, 8, 32).unwrap();
        assert!(matches!(
            sys.analyze(&Signal::zeros(31, 0)),
            Err(Error::ShapeMismatch { .. })
        ));
        assert!(matches!(
            sys.synthesize(&CoefficientGrid::zeros(8, 7)),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn analyze_is_linear() {
        let sys = GaborSystem::with_nuttall(4, 8, 32).unwrap();
        let x = random_signal(32, 1);
        let y = random_signal(32, 2);
        let (alpha, beta) = (0.7, -1.3);
        let mixed = Signal {
            samples: x
                .samples
                .iter()
                .zip(&y.samples)
                .map(|(a, b)| a * alpha + b * beta)
                .collect(),
            sample_rate: 0,
        };
        let cm = sys.analyze(&mixed).unwrap();
        let cx = sys.analyze(&x).unwrap();
        let cy = sys.analyze(&y).unwrap();
        let lin = &(&cx * alpha) + &(&cy * beta);
        assert!(cm.max_abs_diff(&lin) < 1e-12);
    }

    #[test]
    fn perfect_reconstruction_small() {
        for sys in tiny_systems() {
            let x = random_signal(sys.signal_len(), 11);
            let back = sys.synthesize(&sys.analyze(&x).unwrap()).unwrap();
            let err: f64 = back
                .samples
                .iter()
                .zip(&x.samples)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(err <= 1e-10 * x.norm(), "PR failed: {err:.3e}");
        }
    }

    #[test]
    fn perfect_reconstruction_default_geometry() {
        let sys = GaborSystem::with_nuttall(32, 256, 4096).unwrap();
        let x = random_signal(4096, 3);
        let back = sys.synthesize(&sys.analyze(&x).unwrap()).unwrap();
        let err: f64 = back
            .samples
            .iter()
            .zip(&x.samples)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(err <= 1e-10 * x.norm(), "PR failed: {err:.3e}");
    }

    #[test]
    fn synthesize_zero_grid_is_zero() {
        let sys = GaborSystem::with_nuttall(4, 8, 32).unwrap();
        let x = sys.synthesize(&CoefficientGrid::zeros(8, 8)).unwrap();
        assert!(x.samples.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn rectangular_window_dual_is_scaled_window() {
        // Non-overlapping rectangular frames: the dual is the window divided
        // by the constant diagonal n_channels * ||g||^2 per covered sample.
        let a = 4;
        let m = 8;
        let l = 32;
        let w = vec![1.0; a];
        let sys = GaborSystem::new(w, a, m, l).unwrap();
        let dual = sys.dual_window();
        for (i, &d) in dual.iter().enumerate() {
            let g = sys.long_window()[i];
            let expected = if g != 0.0 { g / (m as f64) } else { 0.0 };
            assert!((d - expected).abs() < 1e-15, "at {i}");
        }
        let x = random_signal(l, 4);
        let back = sys.synthesize(&sys.analyze(&x).unwrap()).unwrap();
        let err: f64 = back
            .samples
            .iter()
            .zip(&x.samples)
            .map(|(p, q)| (p - q).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(err <= 1e-10 * x.norm());
    }

    #[test]
    fn parseval_bound_against_diagonal() {
        for sys in tiny_systems() {
            let diag = sys.frame_operator_diagonal();
            let max_diag = diag.iter().cloned().fold(0.0, f64::max);
            let x = random_signal(sys.signal_len(), 21);
            let c = sys.analyze(&x).unwrap();
            let lhs = c.norm().powi(2);
            let rhs = max_diag * x.norm().powi(2);
            assert!(lhs <= rhs * (1.0 + 1e-12), "{lhs} > {rhs}");
        }
    }

    #[test]
    fn dense_operator_guard() {
        let sys = GaborSystem::with_nuttall(32, 256, 4096).unwrap();
        assert!(matches!(
            sys.dense_operator(),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn dense_matches_fft_analysis() {
        for sys in tiny_systems() {
            let t = sys.dense_operator().unwrap();
            let x = random_signal(sys.signal_len(), 31);
            let via_fft = sys.analyze(&x).unwrap();
            let via_dense = t.mul_vec(&x.samples);
            let max: f64 = via_dense
                .iter()
                .zip(via_fft.values())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(max < 1e-12, "dense/fft mismatch {max:.3e}");
        }
    }

    #[test]
    fn dense_adjoint_identity() {
        let sys = GaborSystem::new(random_window(8, 5), 4, 8, 16).unwrap();
        let t = sys.dense_operator().unwrap();
        let x = random_signal(16, 41);
        let c = random_grid(&sys, 42);
        // <Tx, c> == <x, T*c>
        let tx = t.mul_vec(&x.samples);
        let lhs: Complex64 = tx
            .iter()
            .zip(c.values())
            .map(|(a, b)| a * b.conj())
            .sum();
        let tc = t.adjoint_mul_vec(c.values());
        let rhs: Complex64 = x
            .samples
            .iter()
            .zip(&tc)
            .map(|(a, b)| a * b.conj())
            .sum();
        assert!((lhs - rhs).norm() < 1e-10);
    }

    mod dense_oracle {
        //! Checks against plain linear algebra (SVD pseudo-inverse) on tiny
        //! instances, independent of the FFT path.
        use super::*;
        use nalgebra::{Complex, DMatrix, DVector};

        pub(crate) fn to_na(t: &DenseOperator) -> DMatrix<Complex<f64>> {
            DMatrix::from_fn(t.n_rows, t.n_cols, |r, c| t.entries[r * t.n_cols + c])
        }

        #[test]
        fn full_column_rank() {
            for sys in tiny_systems() {
                let t = to_na(&sys.dense_operator().unwrap());
                let rank = t.rank(1e-9);
                assert_eq!(rank, sys.signal_len());
            }
        }

        #[test]
        fn synthesize_matches_pseudo_inverse() {
            for sys in tiny_systems() {
                let t = to_na(&sys.dense_operator().unwrap());
                let pinv = t.pseudo_inverse(1e-12).expect("pinv");
                let c = random_grid(&sys, 51);
                let via_dual = sys.synthesize(&c).unwrap();
                let cv = DVector::from_column_slice(c.values());
                let via_pinv = &pinv * cv;
                let max: f64 = via_dual
                    .samples
                    .iter()
                    .zip(via_pinv.iter())
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max);
                assert!(max < 1e-10, "synthesize/pinv mismatch {max:.3e}");
            }
        }

        #[test]
        fn dual_window_matches_pinv_reconstruction() {
            // L=16, a=4, M=8, random positive window: reconstruct each basis
            // signal both ways.
            let sys = GaborSystem::new(random_window(8, 9), 4, 8, 16).unwrap();
            let t = to_na(&sys.dense_operator().unwrap());
            let pinv = t.pseudo_inverse(1e-12).expect("pinv");
            for trial in 0..3 {
                let c = random_grid(&sys, 60 + trial);
                let via_dual = sys.synthesize(&c).unwrap();
                let via_pinv = &pinv * DVector::from_column_slice(c.values());
                for (a, b) in via_dual.samples.iter().zip(via_pinv.iter()) {
                    assert!((a - b).norm() < 1e-10);
                }
            }
        }
    }
}
