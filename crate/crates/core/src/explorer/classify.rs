//! Exhaustive classification: is every maximal sequence super-successful?

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::agent::{agents, Agent};
use crate::error::Result;
use crate::logic::context::EvalContext;
use crate::logic::eval::Evaluator;
use crate::logic::verdict::Verdict;
use crate::sequence::CallSequence;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    SuperSuccessful,
    NotSuperSuccessful,
    Inconclusive,
}

/// A maximal sequence at which `agent` is not a super expert.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub sequence: CallSequence,
    pub agent: Agent,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationResult {
    pub verdict: Classification,
    /// The lexicographically first counterexample.
    pub counterexample: Option<Counterexample>,
    /// Every counterexample found, in lexicographic order.
    pub counterexamples: Vec<Counterexample>,
    /// Number of maximal sequences per length.
    pub maximal_lengths: BTreeMap<usize, u64>,
    /// Permitted sequences visited.
    pub explored: u64,
    /// Some sequence of length `max_len` still had successors.
    pub truncated: bool,
    /// Maximal sequences, or sequences with undetermined successors, whose
    /// status could not be decided.
    pub undetermined: Vec<CallSequence>,
}

impl Evaluator {
    /// Scan the maximal sequences of length at most `max_len`.
    pub fn classify_protocol(&self, max_len: usize) -> ClassificationResult {
        let mut counterexamples = Vec::new();
        let mut maximal_lengths = BTreeMap::new();
        let mut undetermined = Vec::new();
        let scan = self.for_each_maximal(max_len, |t| {
            *maximal_lengths.entry(t.len()).or_insert(0) += 1;
            let mut unsure = false;
            for x in agents(self.n()) {
                match self.super_expert(t, x) {
                    Verdict::True => {}
                    Verdict::False => {
                        counterexamples.push(Counterexample { sequence: t.seq().clone(), agent: x });
                        return true;
                    }
                    Verdict::UnknownAtBound(_) => unsure = true,
                }
            }
            if unsure {
                undetermined.push(t.seq().clone());
            }
            true
        });
        undetermined.extend(scan.undetermined);
        let verdict = if !counterexamples.is_empty() {
            Classification::NotSuperSuccessful
        } else if scan.truncated || !undetermined.is_empty() {
            Classification::Inconclusive
        } else {
            Classification::SuperSuccessful
        };
        ClassificationResult {
            verdict,
            counterexample: counterexamples.first().cloned(),
            counterexamples,
            maximal_lengths,
            explored: scan.explored,
            truncated: scan.truncated,
            undetermined,
        }
    }
}

/// One-shot `classify_protocol`.
pub fn classify_protocol(ctx: &EvalContext, max_len: usize) -> Result<ClassificationResult> {
    Ok(Evaluator::new(ctx.clone())?.classify_protocol(max_len))
}
