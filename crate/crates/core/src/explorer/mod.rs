//! Execution trees of protocols: successors, maximal sequences, searches,
//! classification, constructions, simulation and knowledge tables.

mod classify;
mod construct;
mod search;
mod simulate;
mod table;

use serde::{Deserialize, Serialize};

use crate::error::{GossipError, Result};
use crate::logic::context::EvalContext;
use crate::logic::eval::{Evaluator, Trace};
use crate::logic::verdict::Verdict;
use crate::sequence::{CallSequence, Event};

pub use classify::{classify_protocol, Classification, ClassificationResult, Counterexample};
pub use construct::{construct, Pattern};
pub use search::{search_min_super_successful, SearchOptions, SearchOutcome, SearchResult, SearchStats};
pub use simulate::{simulate_fair, RunResult};
pub use table::{knowledge_table, KnowledgeCell, KnowledgeRow, KnowledgeTable};

/// Events that may follow a sequence.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Children {
    /// Definitely permitted events, in canonical order.
    pub permitted: Vec<Event>,
    /// Events whose permission is undetermined at the bound.
    pub undetermined: Vec<Event>,
}

/// Maximal sequences up to a length.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaximalEnumeration {
    /// Filled by [`Evaluator::enumerate_maximal`]; empty when visiting.
    pub sequences: Vec<CallSequence>,
    /// Permitted sequences at which some event's permission is undetermined.
    pub undetermined: Vec<CallSequence>,
    /// Some permitted sequence of length `max_len` still has successors.
    pub truncated: bool,
    /// Permitted sequences visited.
    pub explored: u64,
}

impl Evaluator {
    pub(crate) fn children_at(&self, t: &Trace) -> Children {
        let mut out = Children::default();
        for e in self.candidate_events() {
            match self.permitted_at(t, e) {
                Verdict::True => out.permitted.push(e),
                Verdict::False => {}
                Verdict::UnknownAtBound(_) => out.undetermined.push(e),
            }
        }
        out
    }

    pub(crate) fn require_permitted(&self, seq: &CallSequence) -> Result<Trace> {
        seq.check(self.n())?;
        let (ok, t) = self.protocol_permitted_trace(seq);
        if ok.is_false() {
            return Err(GossipError::ProtocolViolation {
                sequence: seq.to_string(),
                reason: format!("not permitted under {}", self.ctx),
            });
        }
        Ok(t)
    }

    /// Events the protocol may take after `σ`.
    pub fn children(&self, seq: &CallSequence) -> Result<Children> {
        let _g = self.enter(seq.len());
        let t = self.require_permitted(seq)?;
        Ok(self.children_at(&t))
    }

    /// Depth-first visit of the maximal permitted sequences of length at
    /// most `max_len`, in lexicographic order. Stops early when `visit`
    /// returns false.
    pub fn for_each_maximal(
        &self,
        max_len: usize,
        mut visit: impl FnMut(&Trace) -> bool,
    ) -> MaximalEnumeration {
        let mut out = MaximalEnumeration::default();
        let mut stack = vec![self.root()];
        // Explicit stack in reverse order keeps the emission lexicographic.
        while let Some(t) = stack.pop() {
            out.explored += 1;
            let _g = self.enter(t.len());
            let kids = self.children_at(&t);
            if !kids.undetermined.is_empty() {
                out.undetermined.push(t.seq.clone());
            }
            if kids.permitted.is_empty() {
                if kids.undetermined.is_empty() && !visit(&t) {
                    return out;
                }
                continue;
            }
            if t.len() >= max_len {
                out.truncated = true;
                continue;
            }
            for &e in kids.permitted.iter().rev() {
                stack.push(self.extend(&t, e));
            }
        }
        out
    }

    /// All maximal permitted sequences of length at most `max_len`.
    pub fn enumerate_maximal(&self, max_len: usize) -> MaximalEnumeration {
        let mut sequences = Vec::new();
        let mut out = self.for_each_maximal(max_len, |t| {
            sequences.push(t.seq().clone());
            true
        });
        out.sequences = sequences;
        out
    }
}

/// One-shot `children`.
pub fn children(ctx: &EvalContext, seq: &CallSequence) -> Result<Children> {
    Evaluator::new(ctx.clone())?.children(seq)
}

/// One-shot `enumerate_maximal`.
pub fn enumerate_maximal(ctx: &EvalContext, max_len: usize) -> Result<MaximalEnumeration> {
    Ok(Evaluator::new(ctx.clone())?.enumerate_maximal(max_len))
}
