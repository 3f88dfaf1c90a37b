//! Knowledge tables: per prefix and agent, the secrets held and the agents
//! known to be experts.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::agent::{agents, AgentSet};
use crate::error::Result;
use crate::logic::context::EvalContext;
use crate::logic::eval::Evaluator;
use crate::logic::formula::Formula;
use crate::logic::verdict::Verdict;
use crate::sequence::CallSequence;

/// One agent at one prefix.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnowledgeCell {
    /// Secrets the agent holds.
    pub secrets: AgentSet,
    /// Agents the agent knows to be experts.
    pub known_experts: AgentSet,
    /// Agents whose expertise the agent may or may not know (bounded
    /// asynchronous queries only).
    pub undetermined: AgentSet,
}

impl fmt::Display for KnowledgeCell {
    /// `abcd ABD`, with undetermined agents after a `?`: `abcd AB?CD`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.secrets.letters())?;
        if self.known_experts.is_empty() && self.undetermined.is_empty() {
            return Ok(());
        }
        f.write_str(" ")?;
        f.write_str(&self.known_experts.letters().to_ascii_uppercase())?;
        if !self.undetermined.is_empty() {
            write!(f, "?{}", self.undetermined.letters().to_ascii_uppercase())?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnowledgeRow {
    /// The last event of the prefix; empty for the initial row.
    pub label: String,
    pub cells: Vec<KnowledgeCell>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnowledgeTable {
    pub n: usize,
    pub sequence: CallSequence,
    pub context: String,
    /// One row per prefix, from the empty sequence to the whole one.
    pub rows: Vec<KnowledgeRow>,
}

impl KnowledgeTable {
    pub fn cell(&self, row: usize, agent: usize) -> &KnowledgeCell {
        &self.rows[row].cells[agent]
    }

    pub fn has_undetermined(&self) -> bool {
        self.rows.iter().flat_map(|r| &r.cells).any(|c| !c.undetermined.is_empty())
    }
}

impl Evaluator {
    /// The knowledge table of a permitted sequence.
    pub fn knowledge_table(&self, seq: &CallSequence) -> Result<KnowledgeTable> {
        {
            let _g = self.enter(seq.len());
            self.require_permitted(seq)?;
        }
        let n = self.n();
        let mut rows = Vec::with_capacity(seq.len() + 1);
        let mut t = self.root();
        for i in 0..=seq.len() {
            // Each prefix is its own query, with its own default bound.
            let _g = self.enter(i);
            if i > 0 {
                t = self.extend(&t, seq.events()[i - 1]);
            }
            let cells = agents(n)
                .map(|x| {
                    let mut cell = KnowledgeCell { secrets: t.facts().row(x), ..Default::default() };
                    for y in agents(n) {
                        match self.eval_at(&t, &Formula::knows(x, Formula::exp(y, n))) {
                            Verdict::True => cell.known_experts.insert(y),
                            Verdict::False => {}
                            Verdict::UnknownAtBound(_) => cell.undetermined.insert(y),
                        }
                    }
                    cell
                })
                .collect();
            let label = if i == 0 { String::new() } else { seq.events()[i - 1].to_string() };
            rows.push(KnowledgeRow { label, cells });
        }
        Ok(KnowledgeTable { n, sequence: seq.clone(), context: self.ctx.to_string(), rows })
    }
}

/// One-shot `knowledge_table`.
pub fn knowledge_table(ctx: &EvalContext, seq: &CallSequence) -> Result<KnowledgeTable> {
    Evaluator::new(ctx.clone())?.knowledge_table(seq)
}
