//! Knowledge: indistinguishable sequences, `K_a φ`, super-expert status and
//! ignorance witnesses.
//!
//! Two backends answer `K_a φ`:
//!
//! * for factual relations and factual `φ`, the set of factual states of the
//!   class is computed exactly (see [`frontier`]);
//! * otherwise the class is enumerated explicitly (see [`enumerate`]), which
//!   is exact in synchronous mode and bounded in asynchronous mode.
//!
//! A handful of sound shortcuts decide asynchronous queries definitively
//! before falling back to the bounded enumeration.

pub(crate) mod enumerate;
pub(crate) mod frontier;
pub(crate) mod view;

use serde::{Deserialize, Serialize};

use crate::agent::{Agent, AgentSet};
use crate::epistemics::enumerate::{Flow, Walk};
use crate::epistemics::view::{obs_call, obs_match, obs_prior, obs_status, Status, ViewId};
use crate::error::Result;
use crate::logic::context::EvalContext;
use crate::logic::eval::{Entry, Evaluator, Rel, Trace};
use crate::logic::formula::{Formula, KnowledgeBase};
use crate::logic::verdict::Verdict;
use crate::sequence::{CallSequence, Event};

/// A related sequence at which the queried formula fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub tau: CallSequence,
    /// How each event of `tau` is matched against the agent's observations.
    pub clauses: Vec<String>,
    /// The formula that fails at `tau`.
    pub formula: String,
}

/// The sequences an agent cannot tell apart from a source sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndistEnumeration {
    pub source: CallSequence,
    pub agent: Agent,
    pub context: String,
    /// Members, shortest first, then lexicographic.
    pub sequences: Vec<CallSequence>,
    /// Sequences whose membership hinges on an undetermined verdict.
    pub maybe: Vec<CallSequence>,
    /// Length bound in asynchronous mode.
    pub bound: Option<usize>,
    /// Longer related sequences may exist beyond the bound.
    pub exhausted_at_bound: bool,
    /// The node budget ran out before the enumeration finished.
    pub budget_exhausted: bool,
}

impl Evaluator {
    pub(crate) fn intern(&self, f: &Formula) -> u32 {
        let mut st = self.state.borrow_mut();
        let next = st.formulas.len() as u32;
        *st.formulas.entry(f.clone()).or_insert(next)
    }

    /// `K_a φ` (or the plain-relation `K^P_a φ`) at `t`.
    pub(crate) fn knows_at(&self, t: &Trace, a: Agent, base: KnowledgeBase, phi: &Formula) -> Verdict {
        self.stats.borrow_mut().knowledge_queries += 1;
        let rel = match base {
            KnowledgeBase::Plain => Rel::Plain,
            KnowledgeBase::Context => self.rel,
        };
        let plain = rel == Rel::Plain;
        let permitted = t.permitted_for(plain);
        if permitted.is_false() {
            return Verdict::True;
        }
        let v = self.class_knows(rel, a, t.view(plain, a), phi, permitted.is_true().then_some(t));
        if permitted.is_unknown() {
            v.weaken_false(self.bound.get())
        } else {
            v
        }
    }

    /// `K_a φ` on the class of `view`; `rep`, when given, is a certain member.
    pub(crate) fn class_knows(&self, rel: Rel, a: Agent, view: ViewId, phi: &Formula, rep: Option<&Trace>) -> Verdict {
        let key = (rel, a, view, self.intern(phi));
        let bound = self.bound.get();
        {
            let mut st = self.state.borrow_mut();
            if let Some(e) = st.knowledge.get(&key) {
                if e.verdict.is_definite() || e.bound >= bound {
                    let v = e.verdict;
                    drop(st);
                    self.stats.borrow_mut().cache_hits += 1;
                    return v;
                }
            }
            if st.in_progress.contains(&key) {
                st.taints += 1;
                drop(st);
                self.stats.borrow_mut().cycle_cuts += 1;
                return self.unknown();
            }
            st.in_progress.insert(key);
        }
        let taints_before = self.state.borrow().taints;
        let v = self.compute_knows(rel, a, view, phi, rep);
        let mut st = self.state.borrow_mut();
        st.in_progress.remove(&key);
        if v.is_definite() || st.taints == taints_before {
            if st.knowledge.len() >= self.options.knowledge_capacity {
                st.knowledge.clear();
            }
            st.knowledge.insert(key, Entry { verdict: v, bound });
        }
        v
    }

    fn compute_knows(&self, rel: Rel, a: Agent, view: ViewId, phi: &Formula, rep: Option<&Trace>) -> Verdict {
        let factual = self.is_factual(phi);
        if factual && self.rel_is_factual(rel) {
            return Verdict::from_bool(self.frontier_knows(rel, a, view, phi));
        }
        if phi.is_local_to(a) {
            return Verdict::from_bool(self.eval_local(a, view, phi));
        }
        if let Some(t) = rep {
            if self.eval_at(t, phi).is_false() {
                return Verdict::False;
            }
        }
        // A relation refined by the protocol has smaller classes than the
        // plain one, and the plain one is decided exactly. Synchronous skips
        // are the exception: a skip pairs with a call in the plain relation.
        if factual && rel != Rel::Plain && !(self.is_sync() && rel == Rel::Skip) {
            let plain_view = self.state.borrow_mut().arena.stripped(view);
            if self.class_knows(Rel::Plain, a, plain_view, phi, None).is_true() {
                return Verdict::True;
            }
        }
        // Once `a` has called a super expert everyone is an expert in every
        // member, so secret atoms are all true from then on.
        if phi.is_secret_only() && self.called_super_expert(a, view) {
            return Verdict::from_bool(self.eval_all_known(phi));
        }
        self.enumerate_knows(rel, a, view, phi)
    }

    fn called_super_expert(&self, a: Agent, view: ViewId) -> bool {
        let st = self.state.borrow();
        st.arena
            .observations(view)
            .into_iter()
            .any(|o| obs_status(o) == Status::True && obs_call(o).is_some_and(|c| c.caller == a))
    }

    fn eval_all_known(&self, phi: &Formula) -> bool {
        match phi {
            Formula::Top | Formula::Secret(..) => true,
            Formula::Not(inner) => !self.eval_all_known(inner),
            Formula::And(parts) => parts.iter().all(|p| self.eval_all_known(p)),
            _ => unreachable!("secret-only formula"),
        }
    }

    /// Evaluate an `a`-local formula from `a`'s observations alone.
    fn eval_local(&self, a: Agent, view: ViewId, phi: &Formula) -> bool {
        let obs = self.state.borrow().arena.observations(view);
        let mut row = AgentSet::singleton(a);
        let mut calls = Vec::new();
        for &o in &obs {
            if let Some(c) = obs_call(o) {
                row = row.union(obs_prior(o));
                calls.push(c);
            }
        }
        fn go(f: &Formula, row: AgentSet, calls: &[crate::sequence::Call]) -> bool {
            match f {
                Formula::Top => true,
                Formula::Secret(_, y) => row.contains(*y),
                Formula::Called(x, y) => calls.iter().any(|c| c.caller == *x && c.callee == *y),
                Formula::Not(inner) => !go(inner, row, calls),
                Formula::And(parts) => parts.iter().all(|p| go(p, row, calls)),
                _ => unreachable!("local formula"),
            }
        }
        go(phi, row, &calls)
    }

    // ------------------------------------------------------------ public API

    /// `K_a φ` at `σ`.
    pub fn knows(&self, seq: &CallSequence, a: Agent, phi: &Formula) -> Result<Verdict> {
        a.check(self.ctx.n)?;
        self.eval(seq, &Formula::knows(a, phi.clone()))
    }

    /// `K_a Exp_A` at `σ`.
    pub fn is_super_expert(&self, seq: &CallSequence, a: Agent) -> Result<Verdict> {
        a.check(self.ctx.n)?;
        let t = self.trace(seq)?;
        let _g = self.enter(seq.len());
        Ok(self.super_expert(&t, a))
    }

    /// The first related sequence (shortest, then lexicographic) at which
    /// `φ` fails, if any exists within the enumeration.
    pub fn find_ignorance_witness(&self, seq: &CallSequence, a: Agent, phi: &Formula) -> Result<Option<Witness>> {
        a.check(self.ctx.n)?;
        phi.check(self.ctx.n)?;
        let t = self.trace(seq)?;
        let _g = self.enter(seq.len());
        if t.permitted.is_false() {
            return Ok(None);
        }
        let view = t.view(false, a);
        let tau = if self.rel_is_factual(self.rel) && self.is_factual(phi) {
            self.frontier_witness(self.rel, a, view, phi)
        } else {
            self.enumerate_witness(self.rel, a, view, phi).map(|w| w.seq)
        };
        Ok(tau.map(|tau| Witness { clauses: self.explain(&t, &tau, a), tau, formula: phi.to_string() }))
    }

    /// Whether `σ` and `τ` are indistinguishable for `a`.
    pub fn are_related(&self, sigma: &CallSequence, tau: &CallSequence, a: Agent) -> Result<Verdict> {
        a.check(self.ctx.n)?;
        let _g = self.enter(sigma.len().max(tau.len()));
        let s = self.trace(sigma)?;
        let t = self.trace(tau)?;
        if self.is_sync() && sigma.len() != tau.len() {
            return Ok(Verdict::False);
        }
        let permitted = s.permitted.and(t.permitted);
        if permitted.is_false() {
            return Ok(Verdict::False);
        }
        let st = self.state.borrow();
        let (vs, vt) = (st.arena.observations(s.view(false, a)), st.arena.observations(t.view(false, a)));
        if vs.len() != vt.len() {
            return Ok(Verdict::False);
        }
        let mut acc = permitted;
        for (&x, &y) in vs.iter().zip(&vt) {
            match obs_match(x, y) {
                None => return Ok(Verdict::False),
                Some(false) => acc = acc.and(self.unknown()),
                Some(true) => {}
            }
        }
        Ok(acc)
    }

    /// The sequences `a` cannot tell apart from `σ`.
    pub fn indistinguishable(&self, seq: &CallSequence, a: Agent) -> Result<IndistEnumeration> {
        a.check(self.ctx.n)?;
        let t = self.trace(seq)?;
        let _g = self.enter(seq.len());
        let mut out = IndistEnumeration {
            source: seq.clone(),
            agent: a,
            context: self.ctx.to_string(),
            sequences: Vec::new(),
            maybe: Vec::new(),
            bound: (!self.is_sync()).then(|| self.bound.get()),
            exhausted_at_bound: false,
            budget_exhausted: false,
        };
        if t.permitted.is_false() {
            return Ok(out);
        }
        let mut walk = Walk::new(self, self.rel, a, t.view(false, a));
        let (mut sure, mut maybe) = (Vec::new(), Vec::new());
        walk.shortlex(self.bound.get(), &mut |u, certain| {
            if certain { &mut sure } else { &mut maybe }.push(u.seq.clone());
            Flow::Continue
        });
        out.sequences = sure;
        out.maybe = maybe;
        out.exhausted_at_bound = walk.truncated;
        out.budget_exhausted = walk.exhausted;
        Ok(out)
    }

    /// Human-readable matching of `tau` against `a`'s observations of `t`.
    fn explain(&self, t: &Trace, tau: &CallSequence, a: Agent) -> Vec<String> {
        let mut out = Vec::new();
        let mut facts = crate::secrets::FactState::initial(self.ctx.n, false);
        let mut own = t.seq.iter().enumerate().filter(|(_, e)| e.involves(a));
        for (i, &e) in tau.iter().enumerate() {
            let line = match e {
                Event::Call(c) if c.involves(a) => {
                    let p = c.partner(a).expect("own call");
                    let at = own.next().map_or(0, |(k, _)| k + 1);
                    format!("{}: {c} matches own call {at} ({} held {})", i + 1, p.letter(), facts.row(p))
                }
                _ if self.is_sync() => {
                    format!("{}: {e} in place of {}; {} is not involved", i + 1, t.seq.events()[i], a.letter())
                }
                _ => format!("{}: {e} is not observed by {}", i + 1, a.letter()),
            };
            out.push(line);
            facts.apply_mut(e);
        }
        out
    }
}

/// One-shot `knows`.
pub fn knows(ctx: &EvalContext, seq: &CallSequence, a: Agent, phi: &Formula) -> Result<Verdict> {
    Evaluator::new(ctx.clone())?.knows(seq, a, phi)
}

/// One-shot `is_super_expert`.
pub fn is_super_expert(ctx: &EvalContext, seq: &CallSequence, a: Agent) -> Result<Verdict> {
    Evaluator::new(ctx.clone())?.is_super_expert(seq, a)
}

/// One-shot `find_ignorance_witness`.
pub fn find_ignorance_witness(ctx: &EvalContext, seq: &CallSequence, a: Agent, phi: &Formula) -> Result<Option<Witness>> {
    Evaluator::new(ctx.clone())?.find_ignorance_witness(seq, a, phi)
}

/// One-shot `indistinguishable`.
pub fn indistinguishable(ctx: &EvalContext, seq: &CallSequence, a: Agent) -> Result<IndistEnumeration> {
    Evaluator::new(ctx.clone())?.indistinguishable(seq, a)
}
