//! Closed-form call sequences from the standard constructions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::agent::{check_agent_count, Agent};
use crate::error::{GossipError, Result};
use crate::sequence::{Call, CallSequence};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pattern {
    /// `n - 2 + C(n,2)` calls reaching everyone-super-expert without engaged
    /// agents: `a` collects the secrets of agents beyond `d`, then
    /// `ab;cd;ac;bd`, then every remaining pair once.
    PairwiseQuadratic,
    /// `3n - 4` calls for engaged agents: `a` calls everyone, calls everyone
    /// again except the last, then everyone calls `a`.
    StarEngaged,
    /// `2n - 3` calls after which the hub `a` is a super expert.
    Broadcast2n3,
}

impl Pattern {
    pub const ALL: [Pattern; 3] = [Pattern::PairwiseQuadratic, Pattern::StarEngaged, Pattern::Broadcast2n3];

    pub fn name(self) -> &'static str {
        match self {
            Pattern::PairwiseQuadratic => "pairwise-quadratic",
            Pattern::StarEngaged => "star-engaged",
            Pattern::Broadcast2n3 => "broadcast-2n3",
        }
    }

    pub fn min_agents(self) -> usize {
        match self {
            Pattern::PairwiseQuadratic => 4,
            Pattern::StarEngaged | Pattern::Broadcast2n3 => 2,
        }
    }

    /// Length of the constructed sequence for `n` agents.
    pub fn length(self, n: usize) -> usize {
        match self {
            Pattern::PairwiseQuadratic => n - 2 + n * (n - 1) / 2,
            Pattern::StarEngaged => 3 * n - 4,
            Pattern::Broadcast2n3 => 2 * n - 3,
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Pattern {
    type Err = GossipError;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.to_ascii_lowercase().chars().filter(|c| c.is_ascii_alphanumeric()).collect();
        match key.as_str() {
            "pairwisequadratic" => Ok(Pattern::PairwiseQuadratic),
            "starengaged" => Ok(Pattern::StarEngaged),
            "broadcast2n3" => Ok(Pattern::Broadcast2n3),
            _ => Err(GossipError::Parse { column: 1, message: format!("unknown pattern `{s}`") }),
        }
    }
}

/// Build the pattern's sequence for `n` agents.
pub fn construct(pattern: Pattern, n: usize) -> Result<CallSequence> {
    check_agent_count(n)?;
    if n < pattern.min_agents() {
        return Err(GossipError::PatternTooSmall { pattern: pattern.name(), n, min: pattern.min_agents() });
    }
    let ag = |i: usize| Agent::new(i as u8);
    let call = |x: usize, y: usize| Call { caller: ag(x), callee: ag(y) };
    let mut calls = Vec::with_capacity(pattern.length(n));
    match pattern {
        Pattern::PairwiseQuadratic => {
            calls.extend((4..n).map(|y| call(0, y)));
            calls.extend([call(0, 1), call(2, 3), call(0, 2), call(1, 3)]);
            for x in 0..n {
                for y in x + 1..n {
                    if (x, y) != (0, 2) && (x, y) != (1, 3) {
                        calls.push(call(x, y));
                    }
                }
            }
        }
        Pattern::StarEngaged => {
            calls.extend((1..n).map(|y| call(0, y)));
            calls.extend((1..n - 1).map(|y| call(0, y)));
            calls.extend((1..n).map(|x| call(x, 0)));
        }
        Pattern::Broadcast2n3 => {
            calls.extend((1..n).map(|y| call(0, y)));
            calls.extend((1..n - 1).map(|y| call(0, y)));
        }
    }
    debug_assert_eq!(calls.len(), pattern.length(n));
    Ok(CallSequence::from_calls(calls))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_instances() {
        let s = |p, n| construct(p, n).unwrap().to_string();
        assert_eq!(s(Pattern::Broadcast2n3, 4), "ab;ac;ad;ab;ac");
        assert_eq!(s(Pattern::PairwiseQuadratic, 4), "ab;cd;ac;bd;ab;ad;bc;cd");
        assert_eq!(s(Pattern::PairwiseQuadratic, 5), "ae;ab;cd;ac;bd;ab;ad;ae;bc;be;cd;ce;de");
        assert_eq!(s(Pattern::StarEngaged, 6), "ab;ac;ad;ae;af;ab;ac;ad;ae;ba;ca;da;ea;fa");
    }

    #[test]
    fn lengths_and_minimums() {
        for p in Pattern::ALL {
            for n in p.min_agents()..=8 {
                assert_eq!(construct(p, n).unwrap().len(), p.length(n));
            }
        }
        assert!(matches!(construct(Pattern::PairwiseQuadratic, 3), Err(GossipError::PatternTooSmall { .. })));
        assert_eq!("Star-Engaged".parse::<Pattern>().unwrap(), Pattern::StarEngaged);
    }
}
