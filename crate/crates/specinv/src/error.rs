use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The window/hop combination leaves some sample uncovered, so the
    /// frame operator is (numerically) singular and no dual window exists.
    #[error("not a frame: frame-operator diagonal is {value:.3e} at sample {index}")]
    SingularFrame { index: usize, value: f64 },

    #[error("shape mismatch in {context}: expected {expected}, got {got}")]
    ShapeMismatch {
        context: &'static str,
        expected: String,
        got: String,
    },

    #[error("diverged at iteration {iter}: iterate contains a non-finite value")]
    Diverged { iter: usize },

    #[error("{path}: unsupported wav: {detail}")]
    WavFormat { path: PathBuf, detail: String },

    #[error("{path}: line {line}: {detail}")]
    TraceParse {
        path: PathBuf,
        line: usize,
        detail: String,
    },

    #[error("wav i/o: {0}")]
    Wav(#[from] hound::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn shape(context: &'static str, expected: impl ToString, got: impl ToString) -> Self {
        Error::ShapeMismatch {
            context,
            expected: expected.to_string(),
            got: got.to_string(),
        }
    }
}
