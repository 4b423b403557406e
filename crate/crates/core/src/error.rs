use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("pole at q = {0}")]
    Pole(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("singular matrix")]
    Singular,

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("braid matrix construction failed for {group}: {reason}")]
    Construction { group: String, reason: String },

    #[error("projector {label} missing for {group}")]
    MissingProjector { group: String, label: String },

    #[error("expected a rank-1 projector, got rank {0}")]
    NotRankOne(usize),

    #[error("inadmissible algebra {group} {sign}: {reason}")]
    Inadmissible {
        group: String,
        sign: String,
        reason: String,
    },

    #[error("degenerate presentation: {0}")]
    Degenerate(String),

    #[error("rewrite system is not confluent ({0} unresolved overlaps)")]
    NotConfluent(usize),

    #[error("presentation mismatch in {sector} sector: {detail}")]
    Mismatch { sector: String, detail: String },

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
