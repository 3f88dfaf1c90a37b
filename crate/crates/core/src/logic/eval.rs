//! The evaluator: satisfaction, program successors, and protocol judgments.
//!
//! All judgments go through [`Trace`]s, which carry a sequence together with
//! its factual state and every agent's view, so that extending a sequence by
//! one event is cheap and knowledge caches can be keyed by view.

use std::cell::{Cell, RefCell};
use std::rc::Rc;

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::agent::{agents, Agent};
use crate::epistemics::view::{own_obs, Status, ViewArena, ViewId, OTHER, ROOT_VIEW};
use crate::error::{GossipError, Result};
use crate::logic::context::{EvalContext, Mode, Variant};
use crate::logic::formula::{check_program, Formula, KnowledgeBase, Program};
use crate::logic::verdict::Verdict;
use crate::secrets::FactState;
use crate::sequence::{Call, CallSequence, Event};

/// Indistinguishability relation family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Rel {
    Plain,
    Known,
    Engaged,
    Skip,
}

impl Rel {
    pub(crate) fn of(v: Variant) -> Rel {
        match v {
            Variant::Plain => Rel::Plain,
            Variant::Known => Rel::Known,
            Variant::Engaged => Rel::Engaged,
            Variant::Skip => Rel::Skip,
        }
    }

    /// Own-call observations record the callee's super-expert status.
    pub(crate) fn has_status(self) -> bool {
        matches!(self, Rel::Engaged | Rel::Skip)
    }
}

/// A sequence with everything needed to keep evaluating it incrementally.
#[derive(Clone, Debug)]
pub struct Trace {
    pub(crate) seq: CallSequence,
    pub(crate) facts: FactState,
    /// Views under the context relation.
    pub(crate) views: SmallVec<[ViewId; 8]>,
    /// Views under the plain relation; empty when identical to `views`.
    pub(crate) plain: SmallVec<[ViewId; 8]>,
    /// Every event satisfies the context relation's side conditions.
    pub(crate) permitted: Verdict,
}

impl Trace {
    pub fn seq(&self) -> &CallSequence {
        &self.seq
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    pub fn facts(&self) -> &FactState {
        &self.facts
    }

    /// Whether the sequence satisfies the conditions the context relation
    /// imposes on related sequences (protocol conditions, engaged guards,
    /// skip placement).
    pub fn relation_permitted(&self) -> Verdict {
        self.permitted
    }

    /// Opaque identifier of what `a` has observed under the context
    /// relation. Two traces built by the same evaluator have equal ids
    /// exactly when `a` made the same observations.
    pub fn view_id(&self, a: Agent) -> u32 {
        self.views[a.index()]
    }

    pub(crate) fn has_skip(&self) -> bool {
        self.seq.has_skip()
    }

    pub(crate) fn view(&self, plain: bool, a: Agent) -> ViewId {
        if plain && !self.plain.is_empty() {
            self.plain[a.index()]
        } else {
            self.views[a.index()]
        }
    }

    pub(crate) fn permitted_for(&self, plain: bool) -> Verdict {
        if plain {
            Verdict::from_bool(!self.has_skip())
        } else {
            self.permitted
        }
    }
}

/// Successor sets of a program; `maybe` holds successors reached through an
/// undetermined test.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Successors {
    pub certain: Vec<CallSequence>,
    pub maybe: Vec<CallSequence>,
}

/// Work counters, cumulative over the evaluator's lifetime.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalStats {
    pub knowledge_queries: u64,
    pub cache_hits: u64,
    pub frontier_builds: u64,
    pub enumeration_nodes: u64,
    pub cycle_cuts: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalOptions {
    /// Node budget for one bounded enumeration of indistinguishable sequences.
    pub enumeration_budget: u64,
    /// Clear the frontier cache once it holds this many states.
    pub frontier_capacity: usize,
    /// Clear the knowledge cache once it holds this many entries.
    pub knowledge_capacity: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { enumeration_budget: 2_000_000, frontier_capacity: 4_000_000, knowledge_capacity: 4_000_000 }
    }
}

pub(crate) type KnowKey = (Rel, Agent, ViewId, u32);

#[derive(Clone, Copy)]
pub(crate) struct Entry {
    pub verdict: Verdict,
    pub bound: usize,
}

pub(crate) struct State {
    pub arena: ViewArena,
    pub knowledge: FxHashMap<KnowKey, Entry>,
    pub formulas: FxHashMap<Formula, u32>,
    pub frontiers: FxHashMap<(Rel, Agent, ViewId, bool), Rc<Vec<FactState>>>,
    pub frontier_states: usize,
    pub in_progress: FxHashSet<KnowKey>,
    /// Incremented whenever a result is cut short (cycle or budget), so
    /// callers can tell whether an unknown verdict is safe to cache.
    pub taints: u64,
}

/// Evaluates formulas and protocol judgments under one context.
///
/// The evaluator memoizes aggressively; it is single-threaded (use one per
/// worker thread). Results do not depend on query order.
pub struct Evaluator {
    pub(crate) ctx: EvalContext,
    pub(crate) rel: Rel,
    conds: Vec<Formula>,
    pub(crate) cond_factual: bool,
    pub(crate) cond_calls: bool,
    pub(crate) exp_all: Formula,
    pub(crate) calls_all: Vec<Call>,
    pub(crate) calls_without: Vec<Vec<Call>>,
    pub(crate) options: EvalOptions,
    pub(crate) state: RefCell<State>,
    pub(crate) stats: RefCell<EvalStats>,
    pub(crate) bound: Cell<usize>,
    budget: Cell<u64>,
    depth: Cell<usize>,
}

pub(crate) struct Entered<'a> {
    depth: &'a Cell<usize>,
}

impl Drop for Entered<'_> {
    fn drop(&mut self) {
        self.depth.set(self.depth.get() - 1);
    }
}

impl Evaluator {
    pub fn new(ctx: EvalContext) -> Result<Self> {
        Evaluator::with_options(ctx, EvalOptions::default())
    }

    pub fn with_options(ctx: EvalContext, options: EvalOptions) -> Result<Self> {
        let ctx = EvalContext::new(ctx.n, ctx.protocol, ctx.variant, ctx.mode)?;
        let n = ctx.n;
        let mut conds = Vec::with_capacity(n * n);
        for x in agents(n) {
            for y in agents(n) {
                conds.push(if x == y { Formula::bot() } else { ctx.protocol.condition(x, y, n)? });
            }
        }
        let calls_all: Vec<Call> = Call::all(n).collect();
        let calls_without = agents(n).map(|a| calls_all.iter().copied().filter(|c| !c.involves(a)).collect()).collect();
        let mut formulas = FxHashMap::default();
        let exp_all = Formula::exp_all(n);
        formulas.insert(exp_all.clone(), 0);
        Ok(Evaluator {
            rel: Rel::of(ctx.variant),
            cond_factual: ctx.protocol.is_factual(),
            cond_calls: ctx.protocol.mentions_calls(),
            ctx,
            conds,
            exp_all,
            calls_all,
            calls_without,
            options,
            state: RefCell::new(State {
                arena: ViewArena::new(),
                knowledge: FxHashMap::default(),
                formulas,
                frontiers: FxHashMap::default(),
                frontier_states: 0,
                in_progress: FxHashSet::default(),
                taints: 0,
            }),
            stats: RefCell::new(EvalStats::default()),
            bound: Cell::new(0),
            budget: Cell::new(options.enumeration_budget),
            depth: Cell::new(0),
        })
    }

    pub fn ctx(&self) -> &EvalContext {
        &self.ctx
    }

    pub fn n(&self) -> usize {
        self.ctx.n
    }

    pub fn stats(&self) -> EvalStats {
        *self.stats.borrow()
    }

    pub fn is_sync(&self) -> bool {
        self.ctx.mode == Mode::Sync
    }

    /// A fresh evaluator for the same context, with empty caches.
    pub fn fork(&self) -> Evaluator {
        Evaluator::with_options(self.ctx.clone(), self.options).expect("context already validated")
    }

    /// Mark entry into a public judgment about a sequence of length `len`;
    /// the outermost entry fixes the asynchronous bound.
    pub(crate) fn enter(&self, len: usize) -> Entered<'_> {
        if self.depth.get() == 0 {
            self.bound.set(self.ctx.bound_for(len));
            self.budget.set(self.options.enumeration_budget);
        }
        self.depth.set(self.depth.get() + 1);
        Entered { depth: &self.depth }
    }

    /// Spend one enumeration node; false once the budget is gone.
    pub(crate) fn take_budget(&self) -> bool {
        let left = self.budget.get();
        if left == 0 {
            return false;
        }
        self.budget.set(left - 1);
        self.stats.borrow_mut().enumeration_nodes += 1;
        true
    }

    pub(crate) fn taint(&self) {
        self.state.borrow_mut().taints += 1;
    }

    pub(crate) fn unknown(&self) -> Verdict {
        Verdict::UnknownAtBound(self.bound.get())
    }

    pub(crate) fn condition_formula(&self, call: Call) -> &Formula {
        &self.conds[call.caller.index() * self.ctx.n + call.callee.index()]
    }

    // ---------------------------------------------------------------- traces

    pub fn root(&self) -> Trace {
        let n = self.ctx.n;
        let views: SmallVec<[ViewId; 8]> = std::iter::repeat_n(ROOT_VIEW, n).collect();
        let plain = if self.rel.has_status() { views.clone() } else { SmallVec::new() };
        Trace { seq: CallSequence::empty(), facts: FactState::initial(n, true), views, plain, permitted: Verdict::True }
    }

    /// Build the trace of a sequence, validating its agents.
    pub fn trace(&self, seq: &CallSequence) -> Result<Trace> {
        seq.check(self.ctx.n)?;
        let _g = self.enter(seq.len());
        let mut t = self.root();
        for &e in seq.iter() {
            t = self.extend(&t, e);
        }
        Ok(t)
    }

    /// Extend a trace by one well-formed event.
    pub fn extend(&self, t: &Trace, e: Event) -> Trace {
        let permitted = if t.permitted.is_false() { Verdict::False } else { t.permitted.and(self.event_related_ok(t, e)) };
        let sync = self.is_sync();
        let mut views = t.views.clone();
        let mut plain = t.plain.clone();
        {
            // Status lookups need the evaluator, so compute them before
            // borrowing the arena.
            let status = match e {
                Event::Call(c) if self.rel.has_status() => {
                    if t.permitted.is_false() {
                        Status::True
                    } else {
                        match self.super_expert(t, c.callee).definite() {
                            Some(true) => Status::True,
                            Some(false) => Status::False,
                            None => Status::Unknown,
                        }
                    }
                }
                _ => Status::Untracked,
            };
            let mut st = self.state.borrow_mut();
            for x in agents(self.ctx.n) {
                let obs = match e {
                    Event::Call(c) if c.caller == x => Some((own_obs(c, t.facts.row(c.callee), status), c)),
                    Event::Call(c) if c.callee == x => Some((own_obs(c, t.facts.row(c.caller), Status::Untracked), c)),
                    _ => None,
                };
                match obs {
                    Some((o, c)) => {
                        views[x.index()] = st.arena.child(views[x.index()], o);
                        if !plain.is_empty() {
                            let p = c.partner(x).expect("participant");
                            let po = own_obs(c, t.facts.row(p), Status::Untracked);
                            plain[x.index()] = st.arena.child(plain[x.index()], po);
                        }
                    }
                    None if sync => {
                        views[x.index()] = st.arena.child(views[x.index()], OTHER);
                        if !plain.is_empty() {
                            plain[x.index()] = st.arena.child(plain[x.index()], OTHER);
                        }
                    }
                    None => {}
                }
            }
        }
        Trace { seq: t.seq.extended(e), facts: t.facts.applied(e), views, plain, permitted }
    }

    /// Side condition the context relation imposes on event `e` after `t`.
    fn event_related_ok(&self, t: &Trace, e: Event) -> Verdict {
        match (self.rel, e) {
            (_, Event::Skip) if self.rel != Rel::Skip => Verdict::False,
            (Rel::Plain, Event::Call(_)) => Verdict::True,
            (Rel::Known, Event::Call(c)) => self.condition_at(t, c),
            (Rel::Engaged, Event::Call(c)) => self.super_expert(t, c.caller).not().and(self.condition_at(t, c)),
            (Rel::Skip, Event::Call(c)) => {
                if t.has_skip() {
                    Verdict::False
                } else {
                    self.super_expert(t, c.caller).not().and(self.condition_at(t, c))
                }
            }
            (Rel::Skip, Event::Skip) => self.middle_test(t),
            _ => unreachable!(),
        }
    }

    // ------------------------------------------------------------ evaluation

    /// `P_c` at `t`.
    pub(crate) fn condition_at(&self, t: &Trace, c: Call) -> Verdict {
        let f = self.condition_formula(c);
        if self.cond_factual {
            Verdict::from_bool(self.eval_fact(f, &t.facts))
        } else {
            self.eval_at(t, f)
        }
    }

    /// Evaluate a factual formula on a factual state.
    pub(crate) fn eval_fact(&self, f: &Formula, s: &FactState) -> bool {
        match f {
            Formula::Top => true,
            Formula::Secret(x, y) => s.knows(*x, *y),
            Formula::Called(x, y) => s.called(Call { caller: *x, callee: *y }).expect("call log tracked"),
            Formula::Condition(x, y) => {
                x != y && self.eval_fact(self.condition_formula(Call { caller: *x, callee: *y }), s)
            }
            Formula::Not(inner) => !self.eval_fact(inner, s),
            Formula::And(parts) => parts.iter().all(|p| self.eval_fact(p, s)),
            Formula::Knows { .. } | Formula::Box(..) => unreachable!("not a factual formula"),
        }
    }

    /// Factual under this context's protocol.
    pub(crate) fn is_factual(&self, f: &Formula) -> bool {
        f.is_factual() && (self.cond_factual || !f.mentions_condition())
    }

    pub(crate) fn needs_calls(&self, f: &Formula) -> bool {
        f.mentions_calls() || (self.cond_calls && f.mentions_condition())
    }

    pub(crate) fn eval_at(&self, t: &Trace, f: &Formula) -> Verdict {
        match f {
            Formula::Top => Verdict::True,
            Formula::Secret(x, y) => Verdict::from_bool(t.facts.knows(*x, *y)),
            Formula::Called(x, y) => Verdict::from_bool(t.seq.contains_call(Call { caller: *x, callee: *y })),
            Formula::Condition(x, y) => {
                if x == y {
                    Verdict::False
                } else {
                    self.condition_at(t, Call { caller: *x, callee: *y })
                }
            }
            Formula::Not(inner) => self.eval_at(t, inner).not(),
            Formula::And(parts) => {
                let mut acc = Verdict::True;
                for p in parts {
                    acc = acc.and(self.eval_at(t, p));
                    if acc.is_false() {
                        break;
                    }
                }
                acc
            }
            Formula::Knows { agent, base, body } => self.knows_at(t, *agent, *base, body),
            Formula::Box(p, body) => {
                let mut acc = Verdict::True;
                for (u, sure) in self.successors(t, p) {
                    let v = self.eval_at(&u, body);
                    let v = if sure.is_true() { v } else { v.or(sure.not()) };
                    acc = acc.and(v);
                    if acc.is_false() {
                        break;
                    }
                }
                acc
            }
        }
    }

    /// Program successors with how surely each is reached.
    pub(crate) fn successors(&self, t: &Trace, p: &Program) -> Vec<(Trace, Verdict)> {
        match p {
            Program::Test(f) => match self.eval_at(t, f) {
                Verdict::False => Vec::new(),
                v => vec![(t.clone(), v)],
            },
            Program::Call(c) => vec![(self.extend(t, Event::Call(*c)), Verdict::True)],
            Program::Skip => vec![(self.extend(t, Event::Skip), Verdict::True)],
            Program::Seq(a, b) => {
                let mut out = Vec::new();
                for (u, s1) in self.successors(t, a) {
                    for (w, s2) in self.successors(&u, b) {
                        out.push((w, s1.and(s2)));
                    }
                }
                out
            }
            Program::Choice(a, b) => {
                let mut out = self.successors(t, a);
                out.extend(self.successors(t, b));
                out
            }
            // Only call-free bodies are accepted; their iteration is the identity.
            Program::Star(_) => vec![(t.clone(), Verdict::True)],
        }
    }

    fn check_formula(&self, f: &Formula) -> Result<()> {
        f.check(self.ctx.n)?;
        fn programs(f: &Formula) -> Result<()> {
            match f {
                Formula::Not(inner) => programs(inner),
                Formula::And(parts) => parts.iter().try_for_each(programs),
                Formula::Knows { body, .. } => programs(body),
                Formula::Box(p, body) => {
                    check_program(p)?;
                    program_tests(p)?;
                    programs(body)
                }
                _ => Ok(()),
            }
        }
        fn program_tests(p: &Program) -> Result<()> {
            match p {
                Program::Test(f) => programs(f),
                Program::Seq(a, b) | Program::Choice(a, b) => {
                    program_tests(a)?;
                    program_tests(b)
                }
                Program::Star(a) => program_tests(a),
                Program::Call(_) | Program::Skip => Ok(()),
            }
        }
        programs(f)
    }

    /// `σ ⊨ φ`.
    pub fn eval(&self, seq: &CallSequence, f: &Formula) -> Result<Verdict> {
        self.check_formula(f)?;
        let t = self.trace(seq)?;
        let _g = self.enter(seq.len());
        Ok(self.eval_at(&t, f))
    }

    /// Evaluate on an existing trace.
    pub fn eval_trace(&self, t: &Trace, f: &Formula) -> Result<Verdict> {
        self.check_formula(f)?;
        let _g = self.enter(t.len());
        Ok(self.eval_at(t, f))
    }

    /// Successor sequences of `σ` under `π`.
    pub fn eval_program(&self, seq: &CallSequence, p: &Program) -> Result<Successors> {
        check_program(p)?;
        self.check_formula(&Formula::boxed(p.clone(), Formula::Top))?;
        let t = self.trace(seq)?;
        let _g = self.enter(seq.len());
        let mut out = Successors::default();
        for (u, sure) in self.successors(&t, p) {
            let bucket = if sure.is_true() { &mut out.certain } else { &mut out.maybe };
            if !bucket.contains(&u.seq) {
                bucket.push(u.seq);
            }
        }
        out.maybe.retain(|s| !out.certain.contains(s));
        Ok(out)
    }

    // ------------------------------------------------------ protocol judgments

    /// `K_x Exp_A` under the context relation.
    pub(crate) fn super_expert(&self, t: &Trace, x: Agent) -> Verdict {
        self.knows_at(t, x, KnowledgeBase::Context, &self.exp_all.clone())
    }

    /// `E Exp_A` under the context relation.
    pub(crate) fn everyone_super_at(&self, t: &Trace) -> Verdict {
        let mut acc = Verdict::True;
        for x in agents(self.ctx.n) {
            acc = acc.and(self.super_expert(t, x));
            if acc.is_false() {
                break;
            }
        }
        acc
    }

    /// `⋀_{c≠d} (P_cd → K_c Exp_A)`: nobody who may still call is ignorant.
    pub(crate) fn middle_test(&self, t: &Trace) -> Verdict {
        let mut acc = Verdict::True;
        for &c in &self.calls_all {
            let p = self.condition_at(t, c);
            if p.is_false() {
                continue;
            }
            acc = acc.and(p.implies(self.super_expert(t, c.caller)));
            if acc.is_false() {
                break;
            }
        }
        acc
    }

    /// Whether the protocol may take event `e` after `t`.
    pub(crate) fn permitted_at(&self, t: &Trace, e: Event) -> Verdict {
        match (self.ctx.variant, e) {
            (Variant::Plain | Variant::Known, Event::Call(c)) => {
                let p = self.condition_at(t, c);
                if p.is_false() {
                    return p;
                }
                p.and(self.everyone_super_at(t).not())
            }
            (Variant::Engaged, Event::Call(c)) => {
                let p = self.condition_at(t, c);
                if p.is_false() {
                    return p;
                }
                p.and(self.super_expert(t, c.caller).not())
            }
            (Variant::Skip, Event::Call(c)) => {
                if t.has_skip() {
                    return Verdict::False;
                }
                let p = self.condition_at(t, c);
                if p.is_false() {
                    return p;
                }
                p.and(self.super_expert(t, c.caller).not())
            }
            (Variant::Skip, Event::Skip) => {
                let m = self.middle_test(t);
                if m.is_false() {
                    return m;
                }
                m.and(self.everyone_super_at(t).not())
            }
            (_, Event::Skip) => {
                log::debug!("skip is never permitted under the {} variant", self.ctx.variant);
                Verdict::False
            }
        }
    }

    /// Events the protocol may take after `t`, in canonical order.
    pub(crate) fn candidate_events(&self) -> impl Iterator<Item = Event> + '_ {
        let skip = (self.ctx.variant == Variant::Skip).then_some(Event::Skip);
        self.calls_all.iter().map(|&c| Event::Call(c)).chain(skip)
    }

    /// Whether every event of `t` was permitted when taken.
    pub(crate) fn protocol_permitted_trace(&self, seq: &CallSequence) -> (Verdict, Trace) {
        let mut t = self.root();
        let mut acc = Verdict::True;
        for &e in seq.iter() {
            if !acc.is_false() {
                acc = acc.and(self.permitted_at(&t, e));
            }
            t = self.extend(&t, e);
        }
        (acc, t)
    }

    /// Whether the protocol may take event `e` after `σ`.
    pub fn call_permitted(&self, seq: &CallSequence, e: Event) -> Result<Verdict> {
        e.check(self.ctx.n)?;
        let t = self.trace(seq)?;
        let _g = self.enter(seq.len());
        Ok(self.permitted_at(&t, e))
    }

    /// Whether `σ` can be produced by the protocol.
    pub fn is_permitted(&self, seq: &CallSequence) -> Result<Verdict> {
        seq.check(self.ctx.n)?;
        let _g = self.enter(seq.len());
        Ok(self.protocol_permitted_trace(seq).0)
    }

    /// True iff no event is permitted after `σ`, which must itself be permitted.
    pub fn is_maximal(&self, seq: &CallSequence) -> Result<Verdict> {
        seq.check(self.ctx.n)?;
        let _g = self.enter(seq.len());
        let (ok, t) = self.protocol_permitted_trace(seq);
        if ok.is_false() {
            return Err(GossipError::ProtocolViolation {
                sequence: seq.to_string(),
                reason: format!("not permitted under {}", self.ctx),
            });
        }
        Ok(self.maximal_at(&t))
    }

    pub(crate) fn maximal_at(&self, t: &Trace) -> Verdict {
        let mut acc = Verdict::True;
        for e in self.candidate_events() {
            acc = acc.and(self.permitted_at(t, e).not());
            if acc.is_false() {
                break;
            }
        }
        acc
    }

    /// `E Exp_A` at `σ`.
    pub fn everyone_super_expert(&self, seq: &CallSequence) -> Result<Verdict> {
        let t = self.trace(seq)?;
        let _g = self.enter(seq.len());
        Ok(self.everyone_super_at(&t))
    }

    /// `P_xy` at `σ`.
    pub fn condition(&self, seq: &CallSequence, call: Call) -> Result<Verdict> {
        let t = self.trace(seq)?;
        let _g = self.enter(seq.len());
        Ok(self.condition_at(&t, call))
    }

    /// The middle test of the skip protocol at `σ`.
    pub fn nobody_useful_can_call(&self, seq: &CallSequence) -> Result<Verdict> {
        let t = self.trace(seq)?;
        let _g = self.enter(seq.len());
        Ok(self.middle_test(&t))
    }
}

/// One-shot `eval`.
pub fn eval(ctx: &EvalContext, seq: &CallSequence, f: &Formula) -> Result<Verdict> {
    Evaluator::new(ctx.clone())?.eval(seq, f)
}

/// One-shot `eval_program`.
pub fn eval_program(ctx: &EvalContext, seq: &CallSequence, p: &Program) -> Result<Successors> {
    Evaluator::new(ctx.clone())?.eval_program(seq, p)
}

/// One-shot `call_permitted`.
pub fn call_permitted(ctx: &EvalContext, seq: &CallSequence, e: Event) -> Result<Verdict> {
    Evaluator::new(ctx.clone())?.call_permitted(seq, e)
}

/// One-shot `is_maximal`.
pub fn is_maximal(ctx: &EvalContext, seq: &CallSequence) -> Result<Verdict> {
    Evaluator::new(ctx.clone())?.is_maximal(seq)
}
