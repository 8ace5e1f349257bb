//! Seed-deterministic synthetic test signals.

use std::f64::consts::TAU;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::frame::Signal;

const MIN_LEN: usize = 256;
const PEAK: f64 = 0.9;
const SAMPLE_RATE: u32 = 16000;

/// Normalized frequencies (cycles per sample, snapped to DFT bins at
/// generation time) and amplitudes of the multitone components.
const TONE_FREQS: [f64; 5] = [0.03, 0.07, 0.13, 0.19, 0.29];
const TONE_AMPS: [f64; 5] = [1.0, 0.8, 0.6, 0.45, 0.35];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignalKind {
    /// Sum of five fixed-frequency sinusoids on exact DFT bins.
    Multitone,
    /// Linear frequency sweep from 0 up to 0.4 of Nyquist.
    LinearChirp,
    /// Seeded white noise under a sinusoidal amplitude envelope.
    AmNoise,
    /// Downward frequency sweep with exponential amplitude decay.
    DopplerLike,
}

impl SignalKind {
    pub const ALL: [SignalKind; 4] = [
        SignalKind::Multitone,
        SignalKind::LinearChirp,
        SignalKind::AmNoise,
        SignalKind::DopplerLike,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SignalKind::Multitone => "multitone",
            SignalKind::LinearChirp => "linear_chirp",
            SignalKind::AmNoise => "am_noise",
            SignalKind::DopplerLike => "doppler_like",
        }
    }

    /// Bin indices the multitone components land on for signal length `len`.
    pub fn multitone_bins(len: usize) -> [usize; 5] {
        let mut bins = [0usize; 5];
        for (b, f) in bins.iter_mut().zip(TONE_FREQS) {
            *b = (f * len as f64).round() as usize;
        }
        bins
    }
}

impl FromStr for SignalKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<SignalKind> {
        match s {
            "multitone" => Ok(SignalKind::Multitone),
            "linear_chirp" => Ok(SignalKind::LinearChirp),
            "am_noise" => Ok(SignalKind::AmNoise),
            "doppler_like" => Ok(SignalKind::DopplerLike),
            other => Err(Error::InvalidArgument(format!(
                "unknown signal kind '{other}' (expected multitone, linear_chirp, am_noise or doppler_like)"
            ))),
        }
    }
}

/// Generates a real test signal of length `len`, peak-normalized to 0.9.
/// Identical `(kind, len, seed)` produce bitwise-identical output.
pub fn gen_signal(kind: SignalKind, len: usize, seed: u64) -> Result<Signal> {
    if len < MIN_LEN {
        return Err(Error::InvalidArgument(format!(
            "generated signals need at least {MIN_LEN} samples, got {len}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lf = len as f64;
    let mut x = vec![0.0f64; len];
    match kind {
        SignalKind::Multitone => {
            let bins = SignalKind::multitone_bins(len);
            let phases: Vec<f64> = (0..5).map(|_| rng.gen::<f64>() * TAU).collect();
            for (l, v) in x.iter_mut().enumerate() {
                *v = bins
                    .iter()
                    .zip(TONE_AMPS)
                    .zip(&phases)
                    .map(|((&bin, amp), &phi)| amp * (TAU * bin as f64 * l as f64 / lf + phi).cos())
                    .sum();
            }
        }
        SignalKind::LinearChirp => {
            // instantaneous frequency 0.2 * l / len cycles/sample
            let phi0 = rng.gen::<f64>() * TAU;
            for (l, v) in x.iter_mut().enumerate() {
                let l = l as f64;
                *v = (0.2 * std::f64::consts::PI * l * l / lf + phi0).cos();
            }
        }
        SignalKind::AmNoise => {
            let phi0 = rng.gen::<f64>() * TAU;
            for (l, v) in x.iter_mut().enumerate() {
                let noise = rng.gen::<f64>() * 2.0 - 1.0;
                let env = 0.55 + 0.45 * (TAU * 4.0 * l as f64 / lf + phi0).sin();
                *v = env * noise;
            }
        }
        SignalKind::DopplerLike => {
            // frequency falling from 0.35 to 0.10 cycles/sample, amplitude
            // decaying to exp(-2.5)
            let phi0 = rng.gen::<f64>() * TAU;
            for (l, v) in x.iter_mut().enumerate() {
                let l = l as f64;
                let phase = TAU * (0.35 * l - 0.125 * l * l / lf) + phi0;
                *v = (-2.5 * l / lf).exp() * phase.cos();
            }
        }
    }
    let peak = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let scale = PEAK / peak;
    for v in &mut x {
        *v *= scale;
    }
    Ok(Signal::from_real(&x, SAMPLE_RATE))
}
