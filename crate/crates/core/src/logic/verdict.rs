//! Three-valued verdicts with Kleene connectives.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Outcome of a judgment. `Unknown` only arises in asynchronous mode and
/// records the sequence-length bound that was in force.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    True,
    False,
    UnknownAtBound(usize),
}

impl Verdict {
    pub fn from_bool(b: bool) -> Verdict {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }

    pub fn is_true(self) -> bool {
        self == Verdict::True
    }

    pub fn is_false(self) -> bool {
        self == Verdict::False
    }

    pub fn is_unknown(self) -> bool {
        matches!(self, Verdict::UnknownAtBound(_))
    }

    pub fn is_definite(self) -> bool {
        !self.is_unknown()
    }

    /// The definite truth value, if any.
    pub fn definite(self) -> Option<bool> {
        match self {
            Verdict::True => Some(true),
            Verdict::False => Some(false),
            Verdict::UnknownAtBound(_) => None,
        }
    }

    pub fn bound(self) -> Option<usize> {
        match self {
            Verdict::UnknownAtBound(l) => Some(l),
            _ => None,
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Verdict {
        match self {
            Verdict::True => Verdict::False,
            Verdict::False => Verdict::True,
            u => u,
        }
    }

    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::False, _) | (_, Verdict::False) => Verdict::False,
            (Verdict::True, Verdict::True) => Verdict::True,
            (a, b) => Verdict::UnknownAtBound(a.bound().unwrap_or(0).max(b.bound().unwrap_or(0))),
        }
    }

    pub fn or(self, other: Verdict) -> Verdict {
        self.not().and(other.not()).not()
    }

    pub fn implies(self, other: Verdict) -> Verdict {
        self.not().or(other)
    }

    /// Kleene biconditional.
    pub fn iff(self, other: Verdict) -> Verdict {
        self.implies(other).and(other.implies(self))
    }

    /// Weaken a definite `False` to unknown (used when a refutation rests on
    /// an uncertain premise).
    pub fn weaken_false(self, bound: usize) -> Verdict {
        match self {
            Verdict::False => Verdict::UnknownAtBound(bound),
            v => v,
        }
    }

    /// Refinement order: `self` is at least as informative as `other` and
    /// agrees with it wherever `other` is definite.
    pub fn refines(self, other: Verdict) -> bool {
        other.is_unknown() || self == other
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::True => f.write_str("True"),
            Verdict::False => f.write_str("False"),
            Verdict::UnknownAtBound(l) => write!(f, "Unknown(bound={l})"),
        }
    }
}
