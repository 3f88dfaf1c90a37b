use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GossipError {
    #[error("agent count {0} outside supported range 2..=26")]
    AgentCount(usize),

    #[error("agent '{agent}' out of range for {n} agents")]
    AgentOutOfRange { agent: char, n: usize },

    #[error("malformed event: agent '{0}' cannot call itself")]
    SelfCall(char),

    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error("unsupported program: {0}")]
    UnsupportedProgram(String),

    #[error("sequence {sequence} is not permitted: {reason}")]
    ProtocolViolation { sequence: String, reason: String },

    #[error("protocol '{protocol}' rejected: {reason} in `{subformula}`")]
    ProtocolRejected {
        protocol: String,
        reason: String,
        subformula: String,
    },

    #[error("unknown protocol '{0}'")]
    UnknownProtocol(String),

    #[error("pattern {pattern} needs at least {min} agents, got {n}")]
    PatternTooSmall {
        pattern: &'static str,
        n: usize,
        min: usize,
    },

    #[error("invalid option: {0}")]
    InvalidOption(String),
}

pub type Result<T> = std::result::Result<T, GossipError>;
