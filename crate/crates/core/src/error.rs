use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter `{field}` out of domain: {value} ({reason})")]
    ParameterDomain {
        field: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("missing mandatory key `{0}`")]
    MissingKey(&'static str),

    #[error("numerical domain error: {0}")]
    NumericalDomain(String),

    #[error("numerical consistency error: {0}")]
    NumericalConsistency(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("scenario `{0}` has no closed form; use the Fock oracle")]
    UnsupportedScenario(&'static str),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("Fock cutoff insufficient at N = {cutoff}: {detail}")]
    CutoffInsufficient { cutoff: usize, detail: String },

    #[error("scan point {index} (value {value:e}) failed: {source}")]
    ScanPoint {
        index: usize,
        value: f64,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
