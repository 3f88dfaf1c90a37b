//! Secret relations and the factual content of call sequences.

use std::fmt;

use smallvec::SmallVec;

use crate::agent::{agents, Agent, AgentSet};
use crate::error::Result;
use crate::sequence::{Call, CallSequence, Event};

pub(crate) type Rows = SmallVec<[AgentSet; 8]>;

/// The relation "x knows the secret of y" as one row per agent.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SecretRelation {
    rows: Rows,
}

impl SecretRelation {
    /// The initial relation: everyone knows exactly their own secret.
    pub fn identity(n: usize) -> Self {
        SecretRelation { rows: agents(n).map(AgentSet::singleton).collect() }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    /// `S_x`: the secrets agent `x` knows.
    pub fn row(&self, x: Agent) -> AgentSet {
        self.rows[x.index()]
    }

    pub fn rows(&self) -> &[AgentSet] {
        &self.rows
    }

    pub fn knows(&self, x: Agent, y: Agent) -> bool {
        self.row(x).contains(y)
    }

    pub fn is_expert(&self, x: Agent) -> bool {
        self.row(x) == AgentSet::full(self.n())
    }

    pub fn experts(&self) -> AgentSet {
        agents(self.n()).filter(|&x| self.is_expert(x)).collect()
    }

    pub fn all_experts(&self) -> bool {
        let full = AgentSet::full(self.n());
        self.rows.iter().all(|&r| r == full)
    }

    /// In-place update for one event.
    pub fn apply_mut(&mut self, e: Event) {
        if let Event::Call(c) = e {
            let merged = self.rows[c.caller.index()].union(self.rows[c.callee.index()]);
            self.rows[c.caller.index()] = merged;
            self.rows[c.callee.index()] = merged;
        }
    }

    /// Row-wise containment.
    pub fn is_subset(&self, other: &SecretRelation) -> bool {
        self.rows.iter().zip(other.rows.iter()).all(|(a, b)| a.is_subset(*b))
    }
}

impl fmt::Debug for SecretRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.rows.iter().map(|r| r.letters()).collect();
        write!(f, "{}", cells.join("."))
    }
}

/// Checked single-event update.
pub fn apply_event(s: &SecretRelation, e: Event) -> Result<SecretRelation> {
    let e = e.check(s.n())?;
    let mut next = s.clone();
    next.apply_mut(e);
    Ok(next)
}

/// Fold a sequence over the identity relation.
pub fn secrets_after(n: usize, seq: &CallSequence) -> Result<SecretRelation> {
    crate::agent::check_agent_count(n)?;
    seq.check(n)?;
    let mut s = SecretRelation::identity(n);
    for &e in seq.iter() {
        s.apply_mut(e);
    }
    Ok(s)
}

/// Agents knowing every secret after `seq`.
pub fn experts(n: usize, seq: &CallSequence) -> Result<AgentSet> {
    secrets_after(n, seq).map(|s| s.experts())
}

/// Everything atomic formulas can observe about a sequence: the secret
/// relation and, optionally, which directed calls have happened.
///
/// Untracked call logs are kept empty so that states differing only in call
/// history collapse when no formula can tell them apart.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FactState {
    secrets: Rows,
    calls: Rows,
}

impl FactState {
    pub fn initial(n: usize, track_calls: bool) -> Self {
        let secrets = agents(n).map(AgentSet::singleton).collect();
        let calls = if track_calls { std::iter::repeat_n(AgentSet::EMPTY, n).collect() } else { Rows::new() };
        FactState { secrets, calls }
    }

    pub fn from_sequence(n: usize, seq: &CallSequence, track_calls: bool) -> Self {
        let mut s = FactState::initial(n, track_calls);
        for &e in seq.iter() {
            s.apply_mut(e);
        }
        s
    }

    pub fn n(&self) -> usize {
        self.secrets.len()
    }

    pub fn tracks_calls(&self) -> bool {
        !self.calls.is_empty()
    }

    pub fn secrets(&self) -> SecretRelation {
        SecretRelation { rows: self.secrets.clone() }
    }

    pub fn row(&self, x: Agent) -> AgentSet {
        self.secrets[x.index()]
    }

    pub fn knows(&self, x: Agent, y: Agent) -> bool {
        self.secrets[x.index()].contains(y)
    }

    /// `Cxy`; `None` when the call log is not tracked.
    pub fn called(&self, call: Call) -> Option<bool> {
        if self.calls.is_empty() {
            None
        } else {
            Some(self.calls[call.caller.index()].contains(call.callee))
        }
    }

    pub fn is_expert(&self, x: Agent) -> bool {
        self.secrets[x.index()] == AgentSet::full(self.n())
    }

    pub fn expert_count(&self) -> usize {
        let full = AgentSet::full(self.n());
        self.secrets.iter().filter(|&&r| r == full).count()
    }

    pub fn all_experts(&self) -> bool {
        self.expert_count() == self.n()
    }

    pub fn apply_mut(&mut self, e: Event) {
        if let Event::Call(c) = e {
            let (x, y) = (c.caller.index(), c.callee.index());
            let merged = self.secrets[x].union(self.secrets[y]);
            self.secrets[x] = merged;
            self.secrets[y] = merged;
            if !self.calls.is_empty() {
                self.calls[x].insert(c.callee);
            }
        }
    }

    pub fn applied(&self, e: Event) -> FactState {
        let mut next = self.clone();
        next.apply_mut(e);
        next
    }
}

impl fmt::Debug for FactState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.secrets.iter().map(|r| r.letters()).collect();
        write!(f, "{}", cells.join("."))
    }
}
