//! Formula and program syntax trees.
//!
//! Only the primitive connectives are represented; disjunction, implication,
//! dual knowledge and the expert abbreviations are expanded by the builders
//! below (and therefore by the parser).

use std::fmt;

use crate::agent::{agents, Agent};
use crate::error::{GossipError, Result};
use crate::sequence::Call;

/// Which indistinguishability relation a knowledge operator refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KnowledgeBase {
    /// The relation fixed by the evaluation context.
    Context,
    /// The unrestricted relation, regardless of context. Knowledge inside
    /// protocol conditions is always of this kind.
    Plain,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Top,
    /// `S_x y`: `x` knows the secret of `y`.
    Secret(Agent, Agent),
    /// `Cxy`: the directed call `x→y` has taken place.
    Called(Agent, Agent),
    /// `P_xy`: the condition of the context protocol for call `xy`.
    Condition(Agent, Agent),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Knows {
        agent: Agent,
        base: KnowledgeBase,
        body: Box<Formula>,
    },
    /// `[π]φ`.
    Box(Box<Program>, Box<Formula>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Program {
    Test(Box<Formula>),
    Call(Call),
    Skip,
    Seq(Box<Program>, Box<Program>),
    Choice(Box<Program>, Box<Program>),
    Star(Box<Program>),
}

impl Formula {
    pub fn top() -> Formula {
        Formula::Top
    }

    pub fn bot() -> Formula {
        Formula::not(Formula::Top)
    }

    pub fn secret(x: Agent, y: Agent) -> Formula {
        Formula::Secret(x, y)
    }

    pub fn called(x: Agent, y: Agent) -> Formula {
        Formula::Called(x, y)
    }

    pub fn condition(x: Agent, y: Agent) -> Formula {
        Formula::Condition(x, y)
    }

    /// Negation, cancelling double negations.
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        match f {
            Formula::Not(inner) => *inner,
            other => Formula::Not(Box::new(other)),
        }
    }

    /// N-ary conjunction, flattening nested conjunctions; the empty
    /// conjunction is `⊤`.
    pub fn and<I: IntoIterator<Item = Formula>>(parts: I) -> Formula {
        let mut flat = Vec::new();
        for p in parts {
            match p {
                Formula::And(inner) => flat.extend(inner),
                Formula::Top => {}
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => Formula::Top,
            1 => flat.pop().unwrap(),
            _ => Formula::And(flat),
        }
    }

    pub fn and2(a: Formula, b: Formula) -> Formula {
        Formula::and([a, b])
    }

    /// `φ ∨ ψ := ¬(¬φ ∧ ¬ψ)`; the empty disjunction is `⊥`.
    pub fn or<I: IntoIterator<Item = Formula>>(parts: I) -> Formula {
        Formula::not(Formula::and(parts.into_iter().map(Formula::not)))
    }

    pub fn or2(a: Formula, b: Formula) -> Formula {
        Formula::or([a, b])
    }

    /// `φ → ψ := ¬(φ ∧ ¬ψ)`.
    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::not(Formula::and([a, Formula::not(b)]))
    }

    pub fn knows(agent: Agent, body: Formula) -> Formula {
        Formula::Knows { agent, base: KnowledgeBase::Context, body: Box::new(body) }
    }

    pub fn knows_plain(agent: Agent, body: Formula) -> Formula {
        Formula::Knows { agent, base: KnowledgeBase::Plain, body: Box::new(body) }
    }

    /// `K̂_x φ := ¬K_x ¬φ`.
    pub fn khat(agent: Agent, body: Formula) -> Formula {
        Formula::not(Formula::knows(agent, Formula::not(body)))
    }

    pub fn boxed(program: Program, body: Formula) -> Formula {
        Formula::Box(Box::new(program), Box::new(body))
    }

    /// `Exp_x`: `x` knows every secret.
    pub fn exp(x: Agent, n: usize) -> Formula {
        Formula::And(agents(n).map(|y| Formula::Secret(x, y)).collect())
    }

    /// `Exp_A`: everyone is an expert.
    pub fn exp_all(n: usize) -> Formula {
        Formula::And(agents(n).flat_map(|x| agents(n).map(move |y| Formula::Secret(x, y))).collect())
    }

    /// `K_x Exp_A`: `x` is a super expert.
    pub fn super_expert(x: Agent, n: usize) -> Formula {
        Formula::knows(x, Formula::exp_all(n))
    }

    /// `E Exp_A`: everyone is a super expert.
    pub fn everyone_super(n: usize) -> Formula {
        Formula::And(agents(n).map(|x| Formula::super_expert(x, n)).collect())
    }

    /// Check every agent index against `n`.
    pub fn check(&self, n: usize) -> Result<()> {
        let mut err = None;
        self.visit_agents(&mut |a| {
            if err.is_none() {
                if let Err(e) = a.check(n) {
                    err = Some(e);
                }
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }

    fn visit_agents(&self, f: &mut impl FnMut(Agent)) {
        match self {
            Formula::Top => {}
            Formula::Secret(x, y) | Formula::Called(x, y) | Formula::Condition(x, y) => {
                f(*x);
                f(*y);
            }
            Formula::Not(inner) => inner.visit_agents(f),
            Formula::And(parts) => parts.iter().for_each(|p| p.visit_agents(f)),
            Formula::Knows { agent, body, .. } => {
                f(*agent);
                body.visit_agents(f);
            }
            Formula::Box(p, body) => {
                p.visit_agents(f);
                body.visit_agents(f);
            }
        }
    }

    /// No knowledge operators, no modalities. Protocol conditions count as
    /// factual here; callers decide whether the protocol itself is.
    pub fn is_factual(&self) -> bool {
        match self {
            Formula::Top | Formula::Secret(..) | Formula::Called(..) | Formula::Condition(..) => true,
            Formula::Not(inner) => inner.is_factual(),
            Formula::And(parts) => parts.iter().all(Formula::is_factual),
            Formula::Knows { .. } | Formula::Box(..) => false,
        }
    }

    pub fn mentions_condition(&self) -> bool {
        self.any_node(&|f| matches!(f, Formula::Condition(..)))
    }

    pub fn mentions_calls(&self) -> bool {
        self.any_node(&|f| matches!(f, Formula::Called(..)))
    }

    /// Built from `⊤`, secret atoms and Boolean connectives only.
    pub fn is_secret_only(&self) -> bool {
        match self {
            Formula::Top | Formula::Secret(..) => true,
            Formula::Not(inner) => inner.is_secret_only(),
            Formula::And(parts) => parts.iter().all(Formula::is_secret_only),
            _ => false,
        }
    }

    /// Every atom is determined by what `a` observed directly: its own
    /// secrets and the calls it took part in.
    pub fn is_local_to(&self, a: Agent) -> bool {
        match self {
            Formula::Top => true,
            Formula::Secret(x, _) => *x == a,
            Formula::Called(x, y) => *x == a || *y == a,
            Formula::Not(inner) => inner.is_local_to(a),
            Formula::And(parts) => parts.iter().all(|p| p.is_local_to(a)),
            _ => false,
        }
    }

    fn any_node(&self, pred: &dyn Fn(&Formula) -> bool) -> bool {
        if pred(self) {
            return true;
        }
        match self {
            Formula::Not(inner) => inner.any_node(pred),
            Formula::And(parts) => parts.iter().any(|p| p.any_node(pred)),
            Formula::Knows { body, .. } => body.any_node(pred),
            Formula::Box(p, body) => p.any_formula(pred) || body.any_node(pred),
            _ => false,
        }
    }

    /// Modal depth, used only for diagnostics and test generation.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Top | Formula::Secret(..) | Formula::Called(..) | Formula::Condition(..) => 0,
            Formula::Not(inner) => inner.depth(),
            Formula::And(parts) => parts.iter().map(Formula::depth).max().unwrap_or(0),
            Formula::Knows { body, .. } => 1 + body.depth(),
            Formula::Box(_, body) => 1 + body.depth(),
        }
    }
}

impl Program {
    pub fn test(f: Formula) -> Program {
        Program::Test(Box::new(f))
    }

    pub fn call(c: Call) -> Program {
        Program::Call(c)
    }

    pub fn seq(a: Program, b: Program) -> Program {
        Program::Seq(Box::new(a), Box::new(b))
    }

    pub fn choice(a: Program, b: Program) -> Program {
        Program::Choice(Box::new(a), Box::new(b))
    }

    pub fn star(a: Program) -> Program {
        Program::Star(Box::new(a))
    }

    /// Contains a call or a skip, i.e. can extend a sequence.
    pub fn extends(&self) -> bool {
        match self {
            Program::Test(_) => false,
            Program::Call(_) | Program::Skip => true,
            Program::Seq(a, b) | Program::Choice(a, b) => a.extends() || b.extends(),
            Program::Star(a) => a.extends(),
        }
    }

    fn visit_agents(&self, f: &mut impl FnMut(Agent)) {
        match self {
            Program::Test(t) => t.visit_agents(f),
            Program::Call(c) => {
                f(c.caller);
                f(c.callee);
            }
            Program::Skip => {}
            Program::Seq(a, b) | Program::Choice(a, b) => {
                a.visit_agents(f);
                b.visit_agents(f);
            }
            Program::Star(a) => a.visit_agents(f),
        }
    }

    fn any_formula(&self, pred: &dyn Fn(&Formula) -> bool) -> bool {
        match self {
            Program::Test(t) => t.any_node(pred),
            Program::Call(_) | Program::Skip => false,
            Program::Seq(a, b) | Program::Choice(a, b) => a.any_formula(pred) || b.any_formula(pred),
            Program::Star(a) => a.any_formula(pred),
        }
    }
}

// Printing follows the parser's grammar so that output can be fed back in.
// Negated conjunctions of negations print as disjunctions.

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(self, f, 0)
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_program(self, f, 0)
    }
}

// Binding strength: 0 = implication context, 1 = disjunction, 2 = conjunction, 3 = unary.
fn write_formula(phi: &Formula, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
    match phi {
        Formula::Top => f.write_str("top"),
        Formula::Secret(x, y) => write!(f, "S({x},{y})"),
        Formula::Called(x, y) => write!(f, "C({x},{y})"),
        Formula::Condition(x, y) => write!(f, "P({x},{y})"),
        Formula::And(parts) => {
            if prec > 2 {
                f.write_str("(")?;
            }
            for (i, p) in parts.iter().enumerate() {
                if i > 0 {
                    f.write_str(" & ")?;
                }
                write_formula(p, f, 3)?;
            }
            if prec > 2 {
                f.write_str(")")?;
            }
            Ok(())
        }
        Formula::Not(inner) => match inner.as_ref() {
            Formula::Top => f.write_str("bot"),
            Formula::And(parts) if parts.len() >= 2 && parts.iter().all(|p| matches!(p, Formula::Not(_))) => {
                if prec > 1 {
                    f.write_str("(")?;
                }
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" | ")?;
                    }
                    let Formula::Not(q) = p else { unreachable!() };
                    write_formula(q, f, 2)?;
                }
                if prec > 1 {
                    f.write_str(")")?;
                }
                Ok(())
            }
            Formula::Knows { agent, base: KnowledgeBase::Context, body } if matches!(body.as_ref(), Formula::Not(_)) => {
                let Formula::Not(q) = body.as_ref() else { unreachable!() };
                write!(f, "Khat({agent}, ")?;
                write_formula(q, f, 0)?;
                f.write_str(")")
            }
            other => {
                f.write_str("~")?;
                write_formula(other, f, 3)
            }
        },
        Formula::Knows { agent, base, body } => {
            let op = match base {
                KnowledgeBase::Context => "K",
                KnowledgeBase::Plain => "Kplain",
            };
            write!(f, "{op}({agent}, ")?;
            write_formula(body, f, 0)?;
            f.write_str(")")
        }
        Formula::Box(p, body) => {
            write!(f, "[{p}] ")?;
            write_formula(body, f, 3)
        }
    }
}

// Binding strength: 0 = choice, 1 = sequence, 2 = star operand.
fn write_program(p: &Program, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
    match p {
        Program::Test(t) => {
            f.write_str("?")?;
            write_formula(t, f, 3)
        }
        Program::Call(c) => write!(f, "{c}"),
        Program::Skip => f.write_str("skip"),
        Program::Seq(a, b) => {
            if prec > 1 {
                f.write_str("(")?;
            }
            write_program(a, f, 1)?;
            f.write_str(" ; ")?;
            write_program(b, f, 1)?;
            if prec > 1 {
                f.write_str(")")?;
            }
            Ok(())
        }
        Program::Choice(a, b) => {
            if prec > 0 {
                f.write_str("(")?;
            }
            write_program(a, f, 0)?;
            f.write_str(" + ")?;
            write_program(b, f, 0)?;
            if prec > 0 {
                f.write_str(")")?;
            }
            Ok(())
        }
        Program::Star(a) => {
            write_program(a, f, 2)?;
            f.write_str("*")
        }
    }
}

/// Reject programs the evaluator cannot interpret exactly.
pub(crate) fn check_program(p: &Program) -> Result<()> {
    match p {
        Program::Test(_) | Program::Call(_) | Program::Skip => Ok(()),
        Program::Seq(a, b) | Program::Choice(a, b) => {
            check_program(a)?;
            check_program(b)
        }
        Program::Star(a) => {
            if a.extends() {
                Err(GossipError::UnsupportedProgram(format!(
                    "iteration over `{a}` can extend the sequence without bound"
                )))
            } else {
                check_program(a)
            }
        }
    }
}
