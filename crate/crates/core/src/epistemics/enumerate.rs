//! Explicit enumeration of indistinguishable sequences.
//!
//! Related sequences are generated stepwise against the agent's recorded
//! observations: in synchronous mode position by position, in asynchronous
//! mode by interleaving other agents' calls between the agent's own calls,
//! up to the length bound and in shortest-then-lexicographic order.

use smallvec::SmallVec;

use crate::agent::Agent;
use crate::epistemics::view::{obs_call, obs_match, obs_prior, Obs, ViewId, OTHER};
use crate::logic::eval::{Evaluator, Rel, Trace};
use crate::logic::formula::Formula;
use crate::logic::verdict::Verdict;
use crate::sequence::Event;

/// Outcome of visiting an enumerated sequence.
pub(crate) enum Flow {
    Continue,
    Stop,
}

pub(crate) struct Walk<'e> {
    ev: &'e Evaluator,
    rel: Rel,
    plain: bool,
    a: Agent,
    expected: Vec<Obs>,
    /// Some related sequence may be longer than the bound.
    pub(crate) truncated: bool,
    /// The node budget ran out; the enumeration is incomplete.
    pub(crate) exhausted: bool,
}

impl<'e> Walk<'e> {
    pub(crate) fn new(ev: &'e Evaluator, rel: Rel, a: Agent, view: ViewId) -> Self {
        let expected = ev.state.borrow().arena.observations(view);
        Walk { ev, rel, plain: rel == Rel::Plain, a, expected, truncated: false, exhausted: false }
    }

    fn candidates(&self, t: &Trace, j: usize, sync: bool) -> SmallVec<[Event; 32]> {
        let mut out = SmallVec::new();
        let skip_ok = self.rel == Rel::Skip;
        if sync {
            match obs_call(self.expected[t.len()]) {
                Some(c) => out.push(Event::Call(c)),
                None => {
                    out.extend(self.ev.calls_without[self.a.index()].iter().map(|&c| Event::Call(c)));
                    if skip_ok {
                        out.push(Event::Skip);
                    }
                }
            }
            return out;
        }
        let own = self.expected.get(j).and_then(|&o| obs_call(o));
        for &c in &self.ev.calls_all {
            if !c.involves(self.a) || own == Some(c) {
                out.push(Event::Call(c));
            }
        }
        if skip_ok && j == self.expected.len() {
            out.push(Event::Skip);
        }
        out
    }

    /// Extend `t` by `e` if the result can still belong to the class.
    /// Returns the child, the next observation index, and whether the step
    /// is certain.
    fn step(&mut self, t: &Trace, j: usize, e: Event, sync: bool) -> Option<(Trace, usize, bool)> {
        if !self.ev.take_budget() {
            self.exhausted = true;
            return None;
        }
        let own = matches!(e, Event::Call(c) if c.involves(self.a));
        if own {
            let c = e.as_call().expect("call");
            let &o = self.expected.get(j)?;
            if obs_call(o) != Some(c) || t.facts.row(c.partner(self.a).expect("own call")) != obs_prior(o) {
                return None;
            }
        } else if sync && self.expected[j] != OTHER {
            return None;
        }
        let t2 = self.ev.extend(t, e);
        let permitted = t2.permitted_for(self.plain);
        if permitted.is_false() {
            return None;
        }
        let mut sure = permitted.is_true();
        if own {
            let actual = self.ev.state.borrow().arena.last(t2.view(self.plain, self.a));
            sure &= obs_match(self.expected[j], actual)?;
        }
        let next = if own || sync { j + 1 } else { j };
        Some((t2, next, sure))
    }

    /// Visit every class member in lexicographic order (synchronous mode).
    pub(crate) fn sync(&mut self, t: &Trace, sure: bool, visit: &mut dyn FnMut(&Trace, bool) -> Flow) -> Flow {
        let j = t.len();
        if j == self.expected.len() {
            return visit(t, sure);
        }
        for e in self.candidates(t, j, true) {
            if let Some((t2, _, s)) = self.step(t, j, e, true) {
                if let Flow::Stop = self.sync(&t2, sure && s, visit) {
                    return Flow::Stop;
                }
            }
            if self.exhausted {
                return Flow::Stop;
            }
        }
        Flow::Continue
    }

    /// Visit class members of exactly `limit` events in lexicographic order
    /// (asynchronous mode). With `edge`, record whether longer members may
    /// exist.
    pub(crate) fn asynchronous(
        &mut self,
        t: &Trace,
        j: usize,
        sure: bool,
        limit: usize,
        edge: bool,
        visit: &mut dyn FnMut(&Trace, bool) -> Flow,
    ) -> Flow {
        let k = self.expected.len();
        if t.len() == limit {
            if j == k {
                if let Flow::Stop = visit(t, sure) {
                    return Flow::Stop;
                }
            }
            if edge && !self.truncated {
                for e in self.candidates(t, j, false) {
                    if self.step(t, j, e, false).is_some() {
                        self.truncated = true;
                        break;
                    }
                }
            }
            return Flow::Continue;
        }
        if limit - t.len() < k - j {
            return Flow::Continue;
        }
        for e in self.candidates(t, j, false) {
            if let Some((t2, j2, s)) = self.step(t, j, e, false) {
                if let Flow::Stop = self.asynchronous(&t2, j2, sure && s, limit, edge, visit) {
                    return Flow::Stop;
                }
            }
            if self.exhausted {
                return Flow::Stop;
            }
        }
        Flow::Continue
    }

    /// Visit members in shortest-then-lexicographic order up to `bound`.
    pub(crate) fn shortlex(&mut self, bound: usize, visit: &mut dyn FnMut(&Trace, bool) -> Flow) -> Flow {
        let root = self.ev.root();
        if self.ev.is_sync() {
            return self.sync(&root, true, visit);
        }
        let k = self.expected.len();
        // Members have at least one event per own observation.
        let bound = bound.max(k);
        for limit in k..=bound {
            if let Flow::Stop = self.asynchronous(&root, 0, true, limit, limit == bound, visit) {
                return Flow::Stop;
            }
        }
        Flow::Continue
    }
}

impl Evaluator {
    /// `K_a φ` by enumerating the class of `view`.
    pub(crate) fn enumerate_knows(&self, rel: Rel, a: Agent, view: ViewId, phi: &Formula) -> Verdict {
        let mut walk = Walk::new(self, rel, a, view);
        let mut found = false;
        let mut undetermined = false;
        walk.shortlex(self.bound.get(), &mut |t, sure| match self.eval_at(t, phi) {
            Verdict::True => Flow::Continue,
            Verdict::False if sure => {
                found = true;
                Flow::Stop
            }
            _ => {
                undetermined = true;
                Flow::Continue
            }
        });
        if found {
            Verdict::False
        } else if undetermined || walk.exhausted || walk.truncated {
            if walk.exhausted {
                self.taint();
            }
            self.unknown()
        } else {
            Verdict::True
        }
    }

    /// First class member of `view` falsifying `φ`, by enumeration.
    pub(crate) fn enumerate_witness(&self, rel: Rel, a: Agent, view: ViewId, phi: &Formula) -> Option<Trace> {
        let mut walk = Walk::new(self, rel, a, view);
        let mut found = None;
        walk.shortlex(self.bound.get(), &mut |t, sure| {
            if sure && self.eval_at(t, phi).is_false() {
                found = Some(t.clone());
                Flow::Stop
            } else {
                Flow::Continue
            }
        });
        found
    }
}
