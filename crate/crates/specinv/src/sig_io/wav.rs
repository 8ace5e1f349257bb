//! Mono WAV input/output, 16-bit integer or 32-bit float PCM.

use std::path::Path;

use hound::{SampleFormat, WavReader, WavSpec, WavWriter};

use crate::error::{Error, Result};
use crate::frame::Signal;

/// Sample encoding used when writing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WavFormat {
    Pcm16,
    Float32,
}

/// Reads a mono WAV file. Integer samples are scaled to `[-1, 1]`; the
/// imaginary parts are zero.
pub fn read_wav(path: impl AsRef<Path>) -> Result<Signal> {
    let path = path.as_ref();
    let mut reader = WavReader::open(path)?;
    let spec = reader.spec();
    if spec.channels != 1 {
        return Err(Error::WavFormat {
            path: path.to_path_buf(),
            detail: format!("expected mono input, got {} channels", spec.channels),
        });
    }
    let samples: Vec<f64> = match (spec.sample_format, spec.bits_per_sample) {
        (SampleFormat::Int, 16) => reader
            .samples::<i16>()
            .map(|s| s.map(|v| f64::from(v) / 32768.0))
            .collect::<std::result::Result<_, _>>()?,
        (SampleFormat::Float, 32) => reader
            .samples::<f32>()
            .map(|s| s.map(f64::from))
            .collect::<std::result::Result<_, _>>()?,
        (format, bits) => {
            return Err(Error::WavFormat {
                path: path.to_path_buf(),
                detail: format!("unsupported sample format {format:?} with {bits} bits"),
            })
        }
    };
    Ok(Signal::from_real(&samples, spec.sample_rate))
}

/// Writes the real part of a signal as a mono WAV file. Samples outside
/// `[-1, 1]` are clipped; the number of clipped samples is returned.
pub fn write_wav(path: impl AsRef<Path>, signal: &Signal, format: WavFormat) -> Result<usize> {
    if signal.sample_rate == 0 {
        return Err(Error::InvalidArgument(
            "cannot write wav with sample rate 0".into(),
        ));
    }
    let spec = WavSpec {
        channels: 1,
        sample_rate: signal.sample_rate,
        bits_per_sample: match format {
            WavFormat::Pcm16 => 16,
            WavFormat::Float32 => 32,
        },
        sample_format: match format {
            WavFormat::Pcm16 => SampleFormat::Int,
            WavFormat::Float32 => SampleFormat::Float,
        },
    };
    let mut writer = WavWriter::create(path, spec)?;
    let mut clipped = 0usize;
    match format {
        WavFormat::Float32 => {
            for c in &signal.samples {
                let mut x = c.re;
                if !(-1.0..=1.0).contains(&x) {
                    clipped += 1;
                    x = x.clamp(-1.0, 1.0);
                }
                writer.write_sample(x as f32)?;
            }
        }
        WavFormat::Pcm16 => {
            for c in &signal.samples {
                let scaled = (c.re * 32768.0).round();
                if !(-32768.0..=32767.0).contains(&scaled) {
                    clipped += 1;
                }
                writer.write_sample(scaled.clamp(-32768.0, 32767.0) as i16)?;
            }
        }
    }
    writer.finalize()?;
    Ok(clipped)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp(n: usize) -> Signal {
        let samples: Vec<f64> = (0..n).map(|i| (i as f64 / n as f64) * 1.8 - 0.9).collect();
        Signal::from_real(&samples, 16000)
    }

    #[test]
    fn float32_round_trip_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f32.wav");
        // values chosen exactly representable in f32
        let samples: Vec<f64> = (0..512).map(|i| (i as f64 - 256.0) / 512.0).collect();
        let sig = Signal::from_real(&samples, 22050);
        let clipped = write_wav(&path, &sig, WavFormat::Float32).unwrap();
        assert_eq!(clipped, 0);
        let back = read_wav(&path).unwrap();
        assert_eq!(back.sample_rate, 22050);
        assert_eq!(back.len(), sig.len());
        for (a, b) in back.samples.iter().zip(&sig.samples) {
            assert_eq!(a.re, b.re);
            assert_eq!(a.im, 0.0);
        }
    }

    #[test]
    fn pcm16_round_trip_within_quantization() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("i16.wav");
        let sig = ramp(1000);
        let clipped = write_wav(&path, &sig, WavFormat::Pcm16).unwrap();
        assert_eq!(clipped, 0);
        let back = read_wav(&path).unwrap();
        let bound = 2.0_f64.powi(-15);
        for (a, b) in back.samples.iter().zip(&sig.samples) {
            assert!((a.re - b.re).abs() <= bound);
        }
    }

    #[test]
    fn clipping_is_counted() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("clip.wav");
        let sig = Signal::from_real(&[0.5, 1.5, -2.0, 0.0], 8000);
        let clipped = write_wav(&path, &sig, WavFormat::Float32).unwrap();
        assert_eq!(clipped, 2);
        let back = read_wav(&path).unwrap();
        assert_eq!(back.samples[1].re, 1.0);
        assert_eq!(back.samples[2].re, -1.0);
    }

    #[test]
    fn stereo_rejected_with_channel_count() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("stereo.wav");
        let spec = WavSpec {
            channels: 2,
            sample_rate: 8000,
            bits_per_sample: 16,
            sample_format: SampleFormat::Int,
        };
        let mut w = WavWriter::create(&path, spec).unwrap();
        for _ in 0..64 {
            w.write_sample(0i16).unwrap();
        }
        w.finalize().unwrap();
        match read_wav(&path) {
            Err(Error::WavFormat { detail, .. }) => assert!(detail.contains('2')),
            other => panic!("expected WavFormat error, got {other:?}"),
        }
    }

    #[test]
    fn unsupported_bit_depth_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("i32.wav");
        let spec = WavSpec {
            channels: 1,
            sample_rate: 8000,
            bits_per_sample: 32,
            sample_format: SampleFormat::Int,
        };
        let mut w = WavWriter::create(&path, spec).unwrap();
        for _ in 0..16 {
            w.write_sample(0i32).unwrap();
        }
        w.finalize().unwrap();
        match read_wav(&path) {
            Err(Error::WavFormat { detail, .. }) => assert!(detail.contains("32")),
            other => panic!("expected WavFormat error, got {other:?}"),
        }
    }

    #[test]
    fn zero_rate_rejected_on_write() {
        let dir = tempfile::tempdir().unwrap();
        let sig = Signal::from_real(&[0.0; 8], 0);
        assert!(write_wav(dir.path().join("bad.wav"), &sig, WavFormat::Float32).is_err());
    }
}
