use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    Geometry(String),

    #[error("index {index} out of range for surface with {len} elements")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("element {element} of the {surface} surface sits at or behind the RIS plane (cos γ = {cos_gamma})")]
    BehindRisPlane {
        surface: &'static str,
        element: usize,
        cos_gamma: f64,
    },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("matrix is zero; {0} is undefined")]
    ZeroMatrix(&'static str),

    #[error("linear algebra failure: {0}")]
    LinearAlgebra(String),

    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }
}
