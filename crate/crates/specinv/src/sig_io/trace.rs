//! Convergence-trace files: `#`-prefixed header lines, a column-header line,
//! then one CSV row per iteration. Floats are written with 17 significant
//! digits so finite values round-trip losslessly; the SSNR infinity sentinel
//! serializes as the literal `inf`.

use std::fs;
use std::path::{Path, PathBuf};

use crate::algo::TraceRecord;
use crate::error::{Error, Result};

const COLUMNS: &str = "iter,ssnr_db,objective,proj_count,elapsed_ns";

/// Run provenance stored ahead of the rows; enough to reproduce the run.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceHeader {
    pub algorithm: String,
    /// Space-separated `k=v` parameter list; empty when the algorithm has
    /// no tunables.
    pub params: String,
    pub hop: usize,
    pub n_channels: usize,
    pub win_len: usize,
    /// Transform length the run actually used (after padding).
    pub signal_len: usize,
    /// Input length before padding.
    pub orig_len: usize,
    /// Input descriptor: a wav path or a `kind:length:seed` generator spec.
    pub signal: String,
    /// `zero` or `random`.
    pub init: String,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceFile {
    pub header: TraceHeader,
    pub rows: Vec<TraceRecord>,
}

impl TraceFile {
    /// Legend label: algorithm name plus its parameter list.
    pub fn label(&self) -> String {
        if self.header.params.is_empty() {
            self.header.algorithm.clone()
        } else {
            format!("{} {}", self.header.algorithm, self.header.params)
        }
    }
}

fn fmt_float(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".to_string() } else { "-inf".to_string() }
    } else {
        format!("{v:.16e}")
    }
}

pub fn trace_to_string(trace: &TraceFile) -> String {
    let h = &trace.header;
    let mut out = String::new();
    out.push_str(&format!("# algorithm: {}\n", h.algorithm));
    out.push_str(&format!("# params: {}\n", h.params));
    out.push_str(&format!("# hop: {}\n", h.hop));
    out.push_str(&format!("# channels: {}\n", h.n_channels));
    out.push_str(&format!("# win_len: {}\n", h.win_len));
    out.push_str(&format!("# signal_len: {}\n", h.signal_len));
    out.push_str(&format!("# orig_len: {}\n", h.orig_len));
    out.push_str(&format!("# signal: {}\n", h.signal));
    out.push_str(&format!("# init: {}\n", h.init));
    out.push_str(&format!("# seed: {}\n", h.seed));
    out.push_str(COLUMNS);
    out.push('\n');
    for r in &trace.rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.iter,
            fmt_float(r.ssnr_db),
            fmt_float(r.objective),
            r.proj_count,
            r.elapsed_ns
        ));
    }
    out
}

pub fn write_trace_csv(path: impl AsRef<Path>, trace: &TraceFile) -> Result<()> {
    fs::write(path, trace_to_string(trace))?;
    Ok(())
}

struct HeaderDraft {
    algorithm: Option<String>,
    params: Option<String>,
    hop: Option<usize>,
    n_channels: Option<usize>,
    win_len: Option<usize>,
    signal_len: Option<usize>,
    orig_len: Option<usize>,
    signal: Option<String>,
    init: Option<String>,
    seed: Option<u64>,
}

/// Parses trace-file contents; `origin` only labels error messages.
pub fn trace_from_str(contents: &str, origin: impl Into<PathBuf>) -> Result<TraceFile> {
    let origin = origin.into();
    let err = |line: usize, detail: String| Error::TraceParse {
        path: origin.clone(),
        line,
        detail,
    };

    let mut draft = HeaderDraft {
        algorithm: None,
        params: None,
        hop: None,
        n_channels: None,
        win_len: None,
        signal_len: None,
        orig_len: None,
        signal: None,
        init: None,
        seed: None,
    };
    let mut rows = Vec::new();
    let mut saw_columns = false;
    let mut last_line = 0usize;

    for (idx, raw) in contents.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim_end();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let (key, value) = rest
                .split_once(':')
                .ok_or_else(|| err(line_no, format!("malformed header line '{line}'")))?;
            let key = key.trim();
            let value = value.trim();
            let parse_usize = || {
                value
                    .parse::<usize>()
                    .map_err(|_| err(line_no, format!("header '{key}' is not an integer: '{value}'")))
            };
            match key {
                "algorithm" => draft.algorithm = Some(value.to_string()),
                "params" => draft.params = Some(value.to_string()),
                "hop" => draft.hop = Some(parse_usize()?),
                "channels" => draft.n_channels = Some(parse_usize()?),
                "win_len" => draft.win_len = Some(parse_usize()?),
                "signal_len" => draft.signal_len = Some(parse_usize()?),
                "orig_len" => draft.orig_len = Some(parse_usize()?),
                "signal" => draft.signal = Some(value.to_string()),
                "init" => draft.init = Some(value.to_string()),
                "seed" => {
                    draft.seed = Some(value.parse::<u64>().map_err(|_| {
                        err(line_no, format!("header 'seed' is not an integer: '{value}'"))
                    })?)
                }
                other => return Err(err(line_no, format!("unknown header key '{other}'"))),
            }
            continue;
        }
        if !saw_columns {
            if line != COLUMNS {
                return Err(err(
                    line_no,
                    format!("expected column header '{COLUMNS}', got '{line}'"),
                ));
            }
            saw_columns = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(err(line_no, format!("expected 5 fields, got {}", fields.len())));
        }
        let parse_f = |name: &str, v: &str| {
            v.parse::<f64>()
                .map_err(|_| err(line_no, format!("field '{name}' is not numeric: '{v}'")))
        };
        rows.push(TraceRecord {
            iter: fields[0]
                .parse()
                .map_err(|_| err(line_no, format!("field 'iter' is not an integer: '{}'", fields[0])))?,
            ssnr_db: parse_f("ssnr_db", fields[1])?,
            objective: parse_f("objective", fields[2])?,
            proj_count: fields[3].parse().map_err(|_| {
                err(line_no, format!("field 'proj_count' is not an integer: '{}'", fields[3]))
            })?,
            elapsed_ns: fields[4].parse().map_err(|_| {
                err(line_no, format!("field 'elapsed_ns' is not an integer: '{}'", fields[4]))
            })?,
        });
    }

    if !saw_columns {
        return Err(err(last_line + 1, "missing column header".to_string()));
    }
    if rows.is_empty() {
        return Err(err(last_line + 1, "empty trace body".to_string()));
    }
    let require = |field: &str, ok: bool| {
        if ok {
            Ok(())
        } else {
            Err(err(1, format!("missing header field '{field}'")))
        }
    };
    require("algorithm", draft.algorithm.is_some())?;
    require("params", draft.params.is_some())?;
    require("hop", draft.hop.is_some())?;
    require("channels", draft.n_channels.is_some())?;
    require("win_len", draft.win_len.is_some())?;
    require("signal_len", draft.signal_len.is_some())?;
    require("orig_len", draft.orig_len.is_some())?;
    require("signal", draft.signal.is_some())?;
    require("init", draft.init.is_some())?;
    require("seed", draft.seed.is_some())?;

    Ok(TraceFile {
        header: TraceHeader {
            algorithm: draft.algorithm.unwrap(),
            params: draft.params.unwrap(),
            hop: draft.hop.unwrap(),
            n_channels: draft.n_channels.unwrap(),
            win_len: draft.win_len.unwrap(),
            signal_len: draft.signal_len.unwrap(),
            orig_len: draft.orig_len.unwrap(),
            signal: draft.signal.unwrap(),
            init: draft.init.unwrap(),
            seed: draft.seed.unwrap(),
        },
        rows,
    })
}

pub fn read_trace_csv(path: impl AsRef<Path>) -> Result<TraceFile> {
    let path = path.as_ref();
    let contents = fs::read_to_string(path)?;
    trace_from_str(&contents, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn header() -> TraceHeader {
        TraceHeader {
            algorithm: "agla".into(),
            params: "alpha=0.99 beta=0.95 gamma=1.2".into(),
            hop: 32,
            n_channels: 256,
            win_len: 256,
            signal_len: 4096,
            orig_len: 4000,
            signal: "multitone:4096:7".into(),
            init: "zero".into(),
            seed: 7,
        }
    }

    fn row(iter: usize, ssnr: f64) -> TraceRecord {
        TraceRecord {
            iter,
            ssnr_db: ssnr,
            objective: 0.5 * ssnr.abs(),
            proj_count: 2 * iter as u64,
            elapsed_ns: 1000 * iter as u64,
        }
    }

    #[test]
    fn round_trip_large_trace() {
        let trace = TraceFile {
            header: header(),
            rows: (1..=1000).map(|i| row(i, 30.0 * (i as f64 / 1000.0).sqrt() - 3.7)).collect(),
        };
        let text = trace_to_string(&trace);
        let back = trace_from_str(&text, "test").unwrap();
        assert_eq!(back, trace);
    }

    #[test]
    fn sentinel_serializes_as_inf_literal() {
        let trace = TraceFile {
            header: header(),
            rows: vec![row(1, f64::INFINITY)],
        };
        let text = trace_to_string(&trace);
        assert!(text.contains("1,inf,"));
        let back = trace_from_str(&text, "test").unwrap();
        assert_eq!(back.rows[0].ssnr_db, f64::INFINITY);
    }

    #[test]
    fn empty_body_is_parse_error() {
        let trace = TraceFile {
            header: header(),
            rows: vec![row(1, 1.0)],
        };
        let mut text = trace_to_string(&trace);
        // drop the data row, keep header + columns
        text = text.lines().take(11).collect::<Vec<_>>().join("\n");
        match trace_from_str(&text, "test") {
            Err(Error::TraceParse { detail, .. }) => assert!(detail.contains("empty")),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_row_reports_line_number() {
        let trace = TraceFile {
            header: header(),
            rows: vec![row(1, 1.0), row(2, 2.0)],
        };
        let text = trace_to_string(&trace).replace("2,", "2;", 1);
        match trace_from_str(&text, "test") {
            Err(Error::TraceParse { line, .. }) => assert_eq!(line, 13),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_header_key_rejected() {
        let text = "# bogus: 1\niter,ssnr_db,objective,proj_count,elapsed_ns\n1,0,0,2,0\n";
        assert!(trace_from_str(text, "test").is_err());
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.trace.csv");
        let trace = TraceFile {
            header: header(),
            rows: (1..=10).map(|i| row(i, i as f64 * 1.5)).collect(),
        };
        write_trace_csv(&path, &trace).unwrap();
        assert_eq!(read_trace_csv(&path).unwrap(), trace);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        /// Finite floats survive the 17-significant-digit round trip exactly.
        #[test]
        fn float_fields_round_trip(bits in any::<i64>()) {
            let v = f64::from_bits(bits as u64);
            prop_assume!(v.is_finite());
            let trace = TraceFile {
                header: header(),
                rows: vec![TraceRecord { iter: 1, ssnr_db: v, objective: v.abs(), proj_count: 2, elapsed_ns: 0 }],
            };
            let back = trace_from_str(&trace_to_string(&trace), "prop").unwrap();
            prop_assert_eq!(back.rows[0].ssnr_db.to_bits(), v.to_bits());
        }
    }
}
