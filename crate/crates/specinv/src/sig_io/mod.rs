//! File I/O and test-signal generation: WAV read/write, seeded synthetic
//! signals, convergence-trace CSV files and SVG comparison plots.

mod gen;
mod plot;
mod trace;
mod wav;

pub use gen::{gen_signal, SignalKind};
pub use plot::{plot_svg_string, write_plot_svg};
pub use trace::{read_trace_csv, trace_from_str, trace_to_string, write_trace_csv, TraceFile, TraceHeader};
pub use wav::{read_wav, write_wav, WavFormat};
