//! Agents and agent sets.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GossipError;

/// Maximum number of agents; one lowercase display letter each.
pub const MAX_AGENTS: usize = 26;

/// An agent, identified by a dense id `0..n`. Displayed as `a`, `b`, `c`, ...
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Agent(u8);

impl Agent {
    pub const fn new(id: u8) -> Self {
        Agent(id)
    }

    pub const fn id(self) -> u8 {
        self.0
    }

    pub const fn index(self) -> usize {
        self.0 as usize
    }

    pub fn letter(self) -> char {
        (b'a' + self.0) as char
    }

    pub fn upper(self) -> char {
        (b'A' + self.0) as char
    }

    pub fn from_letter(c: char) -> Option<Self> {
        if c.is_ascii_lowercase() {
            Some(Agent(c as u8 - b'a'))
        } else {
            None
        }
    }

    pub const fn bit(self) -> u32 {
        1 << self.0
    }

    pub fn check(self, n: usize) -> Result<Self, GossipError> {
        if self.index() < n {
            Ok(self)
        } else {
            Err(GossipError::AgentOutOfRange { agent: self.letter(), n })
        }
    }
}

impl fmt::Display for Agent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Iterate over the agents `a..` of an `n`-agent system.
pub fn agents(n: usize) -> impl DoubleEndedIterator<Item = Agent> + Clone {
    (0..n as u8).map(Agent)
}

/// Validate an agent count.
pub fn check_agent_count(n: usize) -> Result<usize, GossipError> {
    if (2..=MAX_AGENTS).contains(&n) {
        Ok(n)
    } else {
        Err(GossipError::AgentCount(n))
    }
}

/// A set of agents as a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AgentSet(u32);

impl AgentSet {
    pub const EMPTY: AgentSet = AgentSet(0);

    pub const fn from_bits(bits: u32) -> Self {
        AgentSet(bits)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    pub fn singleton(a: Agent) -> Self {
        AgentSet(a.bit())
    }

    /// All agents of an `n`-agent system.
    pub fn full(n: usize) -> Self {
        if n >= 32 {
            AgentSet(u32::MAX)
        } else {
            AgentSet((1u32 << n) - 1)
        }
    }

    pub fn contains(self, a: Agent) -> bool {
        self.0 & a.bit() != 0
    }

    pub fn insert(&mut self, a: Agent) {
        self.0 |= a.bit();
    }

    pub fn remove(&mut self, a: Agent) {
        self.0 &= !a.bit();
    }

    pub fn union(self, other: AgentSet) -> AgentSet {
        AgentSet(self.0 | other.0)
    }

    pub fn intersection(self, other: AgentSet) -> AgentSet {
        AgentSet(self.0 & other.0)
    }

    pub fn is_subset(self, other: AgentSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = Agent> {
        let bits = self.0;
        (0..32u8).filter(move |i| bits & (1 << i) != 0).map(Agent)
    }

    /// Lowercase letters of the members, in order (`"abd"`).
    pub fn letters(self) -> String {
        self.iter().map(Agent::letter).collect()
    }
}

impl FromIterator<Agent> for AgentSet {
    fn from_iter<I: IntoIterator<Item = Agent>>(iter: I) -> Self {
        let mut s = AgentSet::EMPTY;
        for a in iter {
            s.insert(a);
        }
        s
    }
}

impl fmt::Debug for AgentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.letters())
    }
}

impl fmt::Display for AgentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letters())
    }
}
