//! Iterative-deepening search for shortest super-successful sequences.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::agent::agents;
use crate::error::{GossipError, Result};
use crate::logic::context::{EvalContext, Variant};
use crate::logic::eval::{Evaluator, Trace};
use crate::logic::verdict::Verdict;
use crate::sequence::{Call, CallSequence, Event};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOptions {
    /// Only consider sequences starting with `ab`. Sound because accepted
    /// protocols never name particular agents, so renaming agents maps
    /// permitted sequences to permitted sequences.
    pub canonical_first_call: bool,
    /// Only consider calls `xy` with `x < y`. Sound when the variant is plain
    /// or known and the protocol cannot tell a call from its dual: flipping
    /// a call then changes neither secrets nor permissions, and maps each
    /// agent's indistinguishable sequences onto those of the flipped one.
    pub undirected: bool,
    /// Worker threads for the first level of the tree; results do not
    /// depend on this.
    pub workers: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { canonical_first_call: false, undirected: false, workers: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchOutcome {
    /// The lexicographically least among the shortest super-successful
    /// permitted sequences.
    FoundMinimal { length: usize, sequence: CallSequence },
    NoneUpTo { max_len: usize },
    /// Undetermined verdicts at these sequences block a definite answer;
    /// `best` is the shortest sequence found anyway, if any.
    Inconclusive { frontier: Vec<CallSequence>, best: Option<CallSequence> },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes_expanded: u64,
    pub cache_hits: u64,
    pub wall_time_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    pub outcome: SearchOutcome,
    /// A found sequence re-checked from scratch by a fresh evaluator.
    pub verified: Option<bool>,
    pub stats: SearchStats,
}

struct Dfs<'e> {
    ev: &'e Evaluator,
    options: SearchOptions,
    nodes: u64,
    undetermined: Vec<CallSequence>,
}

impl Dfs<'_> {
    fn allowed(&self, t: &Trace, e: Event) -> bool {
        match e {
            Event::Call(c) => {
                (!self.options.undirected || c.caller < c.callee)
                    && (!self.options.canonical_first_call || !t.is_empty() || c == Call::ids(0, 1))
            }
            Event::Skip => true,
        }
    }

    fn children(&mut self, t: &Trace) -> Vec<Event> {
        let kids = self.ev.children_at(t);
        if kids.undetermined.iter().any(|&e| self.allowed(t, e)) {
            self.undetermined.push(t.seq().clone());
        }
        kids.permitted.into_iter().filter(|&e| self.allowed(t, e)).collect()
    }

    /// Whether `t` cannot reach the goal within `remaining` more events.
    fn hopeless(&self, t: &Trace, remaining: usize) -> bool {
        let n = self.ev.n();
        // A call creates at most two new experts.
        if n - t.facts().expert_count() > 2 * remaining {
            return true;
        }
        // Asynchronously, an agent's knowledge only changes when it takes
        // part in a call.
        if !self.ev.is_sync() {
            let ignorant = agents(n).filter(|&x| self.ev.super_expert(t, x).is_false()).count();
            return ignorant > 2 * remaining;
        }
        false
    }

    fn run(&mut self, t: &Trace, remaining: usize) -> Option<CallSequence> {
        self.nodes += 1;
        let _g = self.ev.enter(t.len());
        if remaining == 0 {
            return match self.ev.everyone_super_at(t) {
                Verdict::True => Some(t.seq().clone()),
                Verdict::False => None,
                Verdict::UnknownAtBound(_) => {
                    self.undetermined.push(t.seq().clone());
                    None
                }
            };
        }
        if self.hopeless(t, remaining) {
            return None;
        }
        for e in self.children(t) {
            let child = self.ev.extend(t, e);
            if let Some(found) = self.run(&child, remaining - 1) {
                return Some(found);
            }
        }
        None
    }
}

impl Evaluator {
    fn check_search_options(&self, options: &SearchOptions) -> Result<()> {
        if options.undirected
            && (!matches!(self.ctx.variant, Variant::Plain | Variant::Known) || !self.ctx.protocol.direction_blind())
        {
            return Err(GossipError::InvalidOption(format!(
                "undirected search needs the plain or known variant and a direction-blind protocol, got {}",
                self.ctx
            )));
        }
        Ok(())
    }

    /// Shortest permitted sequence at which everyone is a super expert.
    pub fn search_min_super_successful(&self, max_len: usize, options: SearchOptions) -> Result<SearchResult> {
        self.search_extension(&CallSequence::empty(), max_len, options)
    }

    /// Shortest permitted extension of `prefix`, of total length at most
    /// `max_len`, at which everyone is a super expert.
    pub fn search_extension(&self, prefix: &CallSequence, max_len: usize, options: SearchOptions) -> Result<SearchResult> {
        self.check_search_options(&options)?;
        let start = Instant::now();
        let hits_before = self.stats().cache_hits;
        let root = {
            let _g = self.enter(prefix.len());
            self.require_permitted(prefix)?
        };
        let mut nodes = 0;
        let mut undetermined = Vec::new();
        let mut found = None;
        for depth in prefix.len()..=max_len {
            let remaining = depth - prefix.len();
            let (hit, expanded, unsure) = if options.workers > 1 && remaining > 1 {
                self.search_parallel(&root, remaining, options)
            } else {
                let mut dfs = Dfs { ev: self, options, nodes: 0, undetermined: Vec::new() };
                let hit = dfs.run(&root, remaining);
                (hit, dfs.nodes, dfs.undetermined)
            };
            nodes += expanded;
            undetermined.extend(unsure);
            if let Some(seq) = hit {
                found = Some(seq);
                break;
            }
        }
        let mut stats = SearchStats { nodes_expanded: nodes, cache_hits: self.stats().cache_hits - hits_before, wall_time_ms: 0 };
        let (outcome, verified) = match found {
            // A shorter solution may hide behind an undetermined verdict.
            best if !undetermined.is_empty() => {
                undetermined.sort_by(|a, b| a.shortlex_cmp(b));
                undetermined.dedup();
                (SearchOutcome::Inconclusive { frontier: undetermined, best }, None)
            }
            Some(sequence) => {
                let fresh = self.fork();
                let ok = fresh.is_permitted(&sequence)?.is_true() && fresh.everyone_super_expert(&sequence)?.is_true();
                (SearchOutcome::FoundMinimal { length: sequence.len(), sequence }, Some(ok))
            }
            None => (SearchOutcome::NoneUpTo { max_len }, None),
        };
        stats.wall_time_ms = start.elapsed().as_millis() as u64;
        Ok(SearchResult { outcome, verified, stats })
    }

    /// One deepening round with first-level branches spread over workers.
    /// Each worker has its own evaluator; the lexicographically first
    /// branch with a hit wins, so the result matches the sequential one.
    fn search_parallel(
        &self,
        root: &Trace,
        remaining: usize,
        options: SearchOptions,
    ) -> (Option<CallSequence>, u64, Vec<CallSequence>) {
        let mut top = Dfs { ev: self, options, nodes: 1, undetermined: Vec::new() };
        let first = {
            let _g = self.enter(root.len());
            if top.hopeless(root, remaining) {
                return (None, 1, Vec::new());
            }
            top.children(root)
        };
        let workers = options.workers.min(first.len()).max(1);
        let prefix = root.seq().clone();
        let ctx = self.ctx.clone();
        let eval_options = self.options;
        let mut results: Vec<(usize, Option<CallSequence>, u64, Vec<CallSequence>)> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let (ctx, first, prefix) = (ctx.clone(), first.clone(), prefix.clone());
                    scope.spawn(move || {
                        let ev = Evaluator::with_options(ctx, eval_options).expect("context already validated");
                        let base = ev.trace(&prefix).expect("prefix already checked");
                        let mut out = Vec::new();
                        for (i, &e) in first.iter().enumerate().skip(w).step_by(workers) {
                            let mut dfs = Dfs { ev: &ev, options, nodes: 0, undetermined: Vec::new() };
                            let child = {
                                let _g = ev.enter(base.len());
                                ev.extend(&base, e)
                            };
                            let hit = dfs.run(&child, remaining - 1);
                            out.push((i, hit, dfs.nodes, dfs.undetermined));
                        }
                        out
                    })
                })
                .collect();
            handles.into_iter().flat_map(|h| h.join().expect("search worker panicked")).collect()
        });
        results.sort_by_key(|r| r.0);
        let mut nodes = top.nodes;
        let mut unsure = top.undetermined;
        let mut hit = None;
        for (_, h, expanded, u) in results {
            nodes += expanded;
            unsure.extend(u);
            if hit.is_none() {
                hit = h;
            }
        }
        (hit, nodes, unsure)
    }
}

/// One-shot `search_min_super_successful` with default options.
pub fn search_min_super_successful(ctx: &EvalContext, max_len: usize) -> Result<SearchResult> {
    Evaluator::new(ctx.clone())?.search_min_super_successful(max_len, SearchOptions::default())
}
