//! Evaluation contexts: which semantics a judgment is made under.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::agent::check_agent_count;
use crate::error::{GossipError, Result};
use crate::logic::protocol::{validate_protocol, Protocol};

/// The semantic regime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// The protocol is not common knowledge.
    Plain,
    /// The protocol is common knowledge.
    Known,
    /// Known protocol; super experts neither make nor answer calls.
    Engaged,
    /// Engaged agents plus explicit clock ticks once nobody useful can call.
    Skip,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Everyone observes that a call happens.
    Sync,
    /// Agents only observe their own calls. Knowledge queries enumerate
    /// indistinguishable sequences up to `bound` events; `None` means
    /// `|σ| + 2n` for the queried sequence.
    Async { bound: Option<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalContext {
    pub n: usize,
    pub protocol: Protocol,
    pub variant: Variant,
    pub mode: Mode,
}

impl EvalContext {
    pub fn new(n: usize, protocol: Protocol, variant: Variant, mode: Mode) -> Result<Self> {
        check_agent_count(n)?;
        validate_protocol(&protocol)?;
        Ok(EvalContext { n, protocol, variant, mode })
    }

    pub fn sync(n: usize, protocol: Protocol, variant: Variant) -> Result<Self> {
        EvalContext::new(n, protocol, variant, Mode::Sync)
    }

    pub fn asynchronous(n: usize, protocol: Protocol, variant: Variant, bound: Option<usize>) -> Result<Self> {
        EvalContext::new(n, protocol, variant, Mode::Async { bound })
    }

    pub fn is_sync(&self) -> bool {
        self.mode == Mode::Sync
    }

    /// The asynchronous bound for a query about a sequence of length `len`.
    pub fn bound_for(&self, len: usize) -> usize {
        match self.mode {
            Mode::Sync => len,
            Mode::Async { bound: Some(l) } => l,
            Mode::Async { bound: None } => len + 2 * self.n,
        }
    }

    pub fn with_variant(&self, variant: Variant) -> EvalContext {
        EvalContext { variant, ..self.clone() }
    }

    pub fn with_mode(&self, mode: Mode) -> EvalContext {
        EvalContext { mode, ..self.clone() }
    }
}

impl fmt::Display for EvalContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} protocol={} variant={} mode={}", self.n, self.protocol, self.variant, self.mode)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Plain => "plain",
            Variant::Known => "known",
            Variant::Engaged => "engaged",
            Variant::Skip => "skip",
        })
    }
}

impl FromStr for Variant {
    type Err = GossipError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "plain" => Ok(Variant::Plain),
            "known" => Ok(Variant::Known),
            "engaged" => Ok(Variant::Engaged),
            "skip" => Ok(Variant::Skip),
            other => Err(GossipError::Parse { column: 1, message: format!("unknown variant `{other}`") }),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Sync => f.write_str("sync"),
            Mode::Async { bound: Some(l) } => write!(f, "async(bound={l})"),
            Mode::Async { bound: None } => f.write_str("async"),
        }
    }
}
