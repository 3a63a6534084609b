use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("loop at vertex {0} in a simple graph")]
    LoopInSimpleGraph(usize),

    #[error("duplicate edge ({0}, {1}) in a simple graph")]
    DuplicateEdge(usize, usize),

    #[error("graph must be simple for this operation")]
    NotSimple,

    #[error("graph orientation mismatch: expected {expected}")]
    Orientation { expected: &'static str },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("rejection sampler gave up after {attempts} attempts")]
    AttemptsExhausted { attempts: u32 },

    #[error("graph has {n} vertices in a component, exact search supports at most {max}")]
    TooLarge { n: usize, max: usize },

    #[error("edge list parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("invalid config field `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
