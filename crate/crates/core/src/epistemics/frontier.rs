//! Exact knowledge for factual relations by tracking factual states.
//!
//! When membership in an agent's class depends only on facts (the plain
//! relation, or a known protocol with a factual condition) and the query is
//! factual, it suffices to know the set of factual states reachable by some
//! related sequence. The set is finite, so this is exact in both modes,
//! whatever the asynchronous bound.

use std::rc::Rc;

use rustc_hash::FxHashSet;

use crate::agent::Agent;
use crate::epistemics::view::{obs_call, obs_prior, Obs, ViewId, ROOT_VIEW};
use crate::logic::eval::{Evaluator, Rel};
use crate::logic::formula::Formula;
use crate::secrets::FactState;
use crate::sequence::{Call, CallSequence, Event};

pub(crate) type Frontier = Rc<Vec<FactState>>;

/// Insertion-ordered set of factual states.
struct StateSet {
    seen: FxHashSet<FactState>,
    order: Vec<FactState>,
}

impl StateSet {
    fn new() -> Self {
        StateSet { seen: FxHashSet::default(), order: Vec::new() }
    }

    fn insert(&mut self, s: FactState) -> bool {
        if self.seen.contains(&s) {
            return false;
        }
        self.seen.insert(s.clone());
        self.order.push(s);
        true
    }
}

impl Evaluator {
    pub(crate) fn rel_is_factual(&self, rel: Rel) -> bool {
        match rel {
            Rel::Plain => true,
            Rel::Known => self.cond_factual,
            Rel::Engaged | Rel::Skip => false,
        }
    }

    /// Whether states must carry the call log for `rel` and `phi`.
    pub(crate) fn frontier_tracks_calls(&self, rel: Rel, phi: &Formula) -> bool {
        self.needs_calls(phi) || (rel == Rel::Known && self.cond_calls)
    }

    /// A factual relation's side condition for call `c` at state `s`.
    fn call_ok(&self, rel: Rel, c: Call, s: &FactState) -> bool {
        rel == Rel::Plain || self.eval_fact(self.condition_formula(c), s)
    }

    fn close(&self, rel: Rel, a: Agent, set: &mut StateSet) {
        let mut next = 0;
        while next < set.order.len() {
            let s = set.order[next].clone();
            next += 1;
            for &c in &self.calls_without[a.index()] {
                if self.call_ok(rel, c, &s) {
                    set.insert(s.applied(Event::Call(c)));
                }
            }
        }
    }

    fn frontier_root(&self, rel: Rel, a: Agent, track: bool) -> Vec<FactState> {
        let mut set = StateSet::new();
        set.insert(FactState::initial(self.ctx.n, track));
        if !self.is_sync() {
            self.close(rel, a, &mut set);
        }
        set.order
    }

    fn frontier_step(&self, rel: Rel, a: Agent, prev: &[FactState], o: Obs) -> Vec<FactState> {
        let mut set = StateSet::new();
        match obs_call(o) {
            None => {
                for s in prev {
                    for &c in &self.calls_without[a.index()] {
                        if self.call_ok(rel, c, s) {
                            set.insert(s.applied(Event::Call(c)));
                        }
                    }
                }
            }
            Some(c) => {
                let partner = c.partner(a).expect("own call");
                let prior = obs_prior(o);
                for s in prev {
                    if s.row(partner) == prior && self.call_ok(rel, c, s) {
                        set.insert(s.applied(Event::Call(c)));
                    }
                }
                if !self.is_sync() {
                    self.close(rel, a, &mut set);
                }
            }
        }
        set.order
    }

    /// Factual states of the sequences `a` cannot tell apart from `view`.
    pub(crate) fn frontier(&self, rel: Rel, a: Agent, view: ViewId, track: bool) -> Frontier {
        let (chain, mut current) = {
            let st = self.state.borrow();
            let mut chain: Vec<(ViewId, Obs)> = Vec::new();
            let mut v = view;
            loop {
                if let Some(f) = st.frontiers.get(&(rel, a, v, track)) {
                    break (chain, Some(f.clone()));
                }
                if v == ROOT_VIEW {
                    break (chain, None);
                }
                chain.push((v, st.arena.last(v)));
                v = st.arena.parent(v);
            }
        };
        let mut current = match current.take() {
            Some(f) => f,
            None => {
                let f = Rc::new(self.frontier_root(rel, a, track));
                self.store_frontier(rel, a, ROOT_VIEW, track, f.clone());
                f
            }
        };
        for (v, o) in chain.into_iter().rev() {
            current = Rc::new(self.frontier_step(rel, a, &current, o));
            self.store_frontier(rel, a, v, track, current.clone());
        }
        current
    }

    fn store_frontier(&self, rel: Rel, a: Agent, v: ViewId, track: bool, f: Frontier) {
        self.stats.borrow_mut().frontier_builds += 1;
        let mut st = self.state.borrow_mut();
        if st.frontier_states + f.len() > self.options.frontier_capacity {
            st.frontiers.clear();
            st.frontier_states = 0;
        }
        st.frontier_states += f.len();
        st.frontiers.insert((rel, a, v, track), f);
    }

    /// `K_a φ` for factual `rel` and factual `φ`: exact.
    pub(crate) fn frontier_knows(&self, rel: Rel, a: Agent, view: ViewId, phi: &Formula) -> bool {
        let track = self.frontier_tracks_calls(rel, phi);
        let f = self.frontier(rel, a, view, track);
        f.iter().all(|s| self.eval_fact(phi, s))
    }

    /// Shortest, then lexicographically least, related sequence falsifying
    /// a factual `φ`, for a factual relation.
    pub(crate) fn frontier_witness(&self, rel: Rel, a: Agent, view: ViewId, phi: &Formula) -> Option<CallSequence> {
        let track = self.frontier_tracks_calls(rel, phi);
        let f = self.frontier(rel, a, view, track);
        if f.iter().all(|s| self.eval_fact(phi, s)) {
            return None;
        }
        let expected = self.state.borrow().arena.observations(view);
        let mut search = WitnessSearch { ev: self, rel, a, phi, expected: &expected, dead: FxHashSet::default(), path: Vec::new() };
        let start = FactState::initial(self.ctx.n, track);
        if self.is_sync() {
            return search.sync(0, &start).then(|| CallSequence::from_events(search.path));
        }
        // A falsifying state is reachable, so some length succeeds; the cap
        // only guards against logic errors.
        let k = expected.len();
        for limit in k..=k + 8 * self.ctx.n * self.ctx.n {
            search.dead.clear();
            if search.asynchronous(0, &start, limit) {
                return Some(CallSequence::from_events(search.path));
            }
        }
        None
    }
}

struct WitnessSearch<'a> {
    ev: &'a Evaluator,
    rel: Rel,
    a: Agent,
    phi: &'a Formula,
    expected: &'a [Obs],
    dead: FxHashSet<(usize, usize, FactState)>,
    path: Vec<Event>,
}

impl WitnessSearch<'_> {
    fn own_ok(&self, j: usize, c: Call, s: &FactState) -> bool {
        let Some(&o) = self.expected.get(j) else { return false };
        obs_call(o) == Some(c)
            && s.row(c.partner(self.a).expect("own call")) == obs_prior(o)
            && self.ev.call_ok(self.rel, c, s)
    }

    fn sync(&mut self, pos: usize, s: &FactState) -> bool {
        if pos == self.expected.len() {
            return !self.ev.eval_fact(self.phi, s);
        }
        if self.dead.contains(&(pos, 0, s.clone())) {
            return false;
        }
        let calls: Vec<Call> = match obs_call(self.expected[pos]) {
            Some(c) => vec![c],
            None => self.ev.calls_without[self.a.index()].clone(),
        };
        for c in calls {
            let ok = if c.involves(self.a) { self.own_ok(pos, c, s) } else { self.ev.call_ok(self.rel, c, s) };
            if !ok {
                continue;
            }
            self.path.push(Event::Call(c));
            if self.sync(pos + 1, &s.applied(Event::Call(c))) {
                return true;
            }
            self.path.pop();
        }
        self.dead.insert((pos, 0, s.clone()));
        false
    }

    fn asynchronous(&mut self, j: usize, s: &FactState, remaining: usize) -> bool {
        let k = self.expected.len();
        if remaining == 0 {
            return j == k && !self.ev.eval_fact(self.phi, s);
        }
        if remaining < k - j || self.dead.contains(&(j, remaining, s.clone())) {
            return false;
        }
        for i in 0..self.ev.calls_all.len() {
            let c = self.ev.calls_all[i];
            let (ok, j2) = if c.involves(self.a) {
                (self.own_ok(j, c, s), j + 1)
            } else {
                (self.ev.call_ok(self.rel, c, s), j)
            };
            if !ok {
                continue;
            }
            self.path.push(Event::Call(c));
            if self.asynchronous(j2, &s.applied(Event::Call(c)), remaining - 1) {
                return true;
            }
            self.path.pop();
        }
        self.dead.insert((j, remaining, s.clone()));
        false
    }
}
