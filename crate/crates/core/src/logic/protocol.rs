//! Protocols as condition schemas over the calling pair.

use std::fmt;

use crate::agent::{agents, Agent};
use crate::error::{GossipError, Result};
use crate::logic::formula::Formula;

/// An agent position inside a condition schema.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    /// The caller of the call being guarded.
    Caller,
    /// The callee of the call being guarded.
    Callee,
    /// An agent bound by an enclosing quantifier.
    Bound(u8),
    /// A fixed agent; makes the schema asymmetric.
    Fixed(Agent),
}

/// A protocol condition with the calling pair left open.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Schema {
    Top,
    Secret(Term, Term),
    Called(Term, Term),
    Not(Box<Schema>),
    And(Vec<Schema>),
    Or(Vec<Schema>),
    /// Knowledge inside a condition; always instantiated with the plain relation.
    Knows(Term, Box<Schema>),
    /// Disjunction over every agent, binding `Bound(var)`.
    Exists(u8, Box<Schema>),
    /// A reference to the condition being defined. Never valid; kept so that
    /// self-referential definitions can be represented and rejected.
    SelfCondition(Term, Term),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Protocol {
    name: String,
    schema: Schema,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuiltinProtocol {
    Any,
    Cmo,
    Pig,
    Lns,
}

impl Schema {
    fn not(s: Schema) -> Schema {
        Schema::Not(Box::new(s))
    }

    fn contains(&self, pred: &dyn Fn(&Schema) -> bool) -> bool {
        if pred(self) {
            return true;
        }
        match self {
            Schema::Not(s) | Schema::Knows(_, s) | Schema::Exists(_, s) => s.contains(pred),
            Schema::And(v) | Schema::Or(v) => v.iter().any(|s| s.contains(pred)),
            _ => false,
        }
    }

    fn instantiate(&self, x: Agent, y: Agent, n: usize, env: &mut Vec<(u8, Agent)>) -> Result<Formula> {
        let term = |t: Term, env: &Vec<(u8, Agent)>| -> Result<Agent> {
            match t {
                Term::Caller => Ok(x),
                Term::Callee => Ok(y),
                Term::Fixed(a) => a.check(n),
                Term::Bound(v) => env
                    .iter()
                    .rev()
                    .find(|(w, _)| *w == v)
                    .map(|(_, a)| *a)
                    .ok_or_else(|| GossipError::UnsupportedProgram(format!("unbound schema variable #{v}"))),
            }
        };
        Ok(match self {
            Schema::Top => Formula::Top,
            Schema::Secret(p, q) => Formula::secret(term(*p, env)?, term(*q, env)?),
            Schema::Called(p, q) => Formula::called(term(*p, env)?, term(*q, env)?),
            Schema::Not(s) => Formula::not(s.instantiate(x, y, n, env)?),
            Schema::And(v) => Formula::and(v.iter().map(|s| s.instantiate(x, y, n, env)).collect::<Result<Vec<_>>>()?),
            Schema::Or(v) => Formula::or(v.iter().map(|s| s.instantiate(x, y, n, env)).collect::<Result<Vec<_>>>()?),
            Schema::Knows(t, s) => Formula::knows_plain(term(*t, env)?, s.instantiate(x, y, n, env)?),
            Schema::Exists(v, s) => {
                let mut parts = Vec::with_capacity(n);
                for c in agents(n) {
                    env.push((*v, c));
                    let part = s.instantiate(x, y, n, env);
                    env.pop();
                    parts.push(part?);
                }
                Formula::or(parts)
            }
            Schema::SelfCondition(p, q) => Formula::condition(term(*p, env)?, term(*q, env)?),
        })
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Caller => f.write_str("x"),
            Term::Callee => f.write_str("y"),
            Term::Bound(v) => write!(f, "v{v}"),
            Term::Fixed(a) => write!(f, "{a}"),
        }
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |f: &mut fmt::Formatter<'_>, v: &[Schema], sep: &str| -> fmt::Result {
            f.write_str("(")?;
            for (i, s) in v.iter().enumerate() {
                if i > 0 {
                    f.write_str(sep)?;
                }
                write!(f, "{s}")?;
            }
            f.write_str(")")
        };
        match self {
            Schema::Top => f.write_str("top"),
            Schema::Secret(p, q) => write!(f, "S({p},{q})"),
            Schema::Called(p, q) => write!(f, "C({p},{q})"),
            Schema::Not(s) => write!(f, "~{s}"),
            Schema::And(v) => join(f, v, " & "),
            Schema::Or(v) => join(f, v, " | "),
            Schema::Knows(t, s) => write!(f, "K({t}, {s})"),
            Schema::Exists(v, s) => write!(f, "OR v{v}. {s}"),
            Schema::SelfCondition(p, q) => write!(f, "P({p},{q})"),
        }
    }
}

impl Protocol {
    pub fn new(name: impl Into<String>, schema: Schema) -> Self {
        Protocol { name: name.into(), schema }
    }

    pub fn builtin(which: BuiltinProtocol) -> Self {
        use Term::{Callee as Y, Caller as X};
        let schema = match which {
            BuiltinProtocol::Any => Schema::Top,
            BuiltinProtocol::Cmo => Schema::And(vec![
                Schema::not(Schema::Called(X, Y)),
                Schema::not(Schema::Called(Y, X)),
            ]),
            BuiltinProtocol::Lns => Schema::not(Schema::Secret(X, Y)),
            BuiltinProtocol::Pig => {
                let c = Term::Bound(0);
                let differ = Schema::Or(vec![
                    Schema::And(vec![Schema::Secret(X, c), Schema::not(Schema::Secret(Y, c))]),
                    Schema::And(vec![Schema::not(Schema::Secret(X, c)), Schema::Secret(Y, c)]),
                ]);
                // K̂_x φ = ¬K_x ¬φ
                Schema::not(Schema::Knows(X, Box::new(Schema::not(Schema::Exists(0, Box::new(differ))))))
            }
        };
        Protocol { name: which.name().to_string(), schema }
    }

    pub fn any() -> Self {
        Protocol::builtin(BuiltinProtocol::Any)
    }

    pub fn cmo() -> Self {
        Protocol::builtin(BuiltinProtocol::Cmo)
    }

    pub fn pig() -> Self {
        Protocol::builtin(BuiltinProtocol::Pig)
    }

    pub fn lns() -> Self {
        Protocol::builtin(BuiltinProtocol::Lns)
    }

    /// Look up a built-in protocol by (case-insensitive) name.
    pub fn by_name(name: &str) -> Result<Self> {
        BuiltinProtocol::from_name(name).map(Protocol::builtin)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    /// `P_xy` for a concrete pair.
    pub fn condition(&self, x: Agent, y: Agent, n: usize) -> Result<Formula> {
        self.schema.instantiate(x, y, n, &mut Vec::new())
    }

    /// The condition does not involve knowledge.
    pub fn is_factual(&self) -> bool {
        !self.schema.contains(&|s| matches!(s, Schema::Knows(..)))
    }

    pub fn mentions_calls(&self) -> bool {
        self.schema.contains(&|s| matches!(s, Schema::Called(..)))
    }

    /// Conditions for `xy` and `yx` coincide up to swapping roles, and
    /// direction of earlier calls never matters: flipping any single call in
    /// a sequence preserves permission. True for protocols whose condition
    /// is `⊤` or a conjunction of `C` atoms in both directions.
    pub(crate) fn direction_blind(&self) -> bool {
        match &self.schema {
            Schema::Top => true,
            Schema::And(parts) => {
                let mut seen = Vec::new();
                for p in parts {
                    match p {
                        Schema::Not(inner) => match inner.as_ref() {
                            Schema::Called(a, b) => seen.push((*a, *b)),
                            _ => return false,
                        },
                        _ => return false,
                    }
                }
                seen.iter().all(|&(a, b)| seen.contains(&(b, a)))
            }
            _ => false,
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl BuiltinProtocol {
    pub const ALL: [BuiltinProtocol; 4] =
        [BuiltinProtocol::Any, BuiltinProtocol::Cmo, BuiltinProtocol::Pig, BuiltinProtocol::Lns];

    pub fn name(self) -> &'static str {
        match self {
            BuiltinProtocol::Any => "ANY",
            BuiltinProtocol::Cmo => "CMO",
            BuiltinProtocol::Pig => "PIG",
            BuiltinProtocol::Lns => "LNS",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        BuiltinProtocol::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(name))
            .ok_or_else(|| GossipError::UnknownProtocol(name.to_string()))
    }
}

/// Check that a protocol is well-founded and symmetric, and that callers can
/// always tell whether they may call.
///
/// Rejected: references to the condition being defined; fixed agents (which
/// break symmetry under renaming); unbound variables; and atoms outside any
/// knowledge operator that the caller cannot observe directly.
pub fn validate_protocol(p: &Protocol) -> Result<()> {
    let reject = |reason: &str, sub: &Schema| GossipError::ProtocolRejected {
        protocol: p.name.clone(),
        reason: reason.to_string(),
        subformula: sub.to_string(),
    };
    fn walk(
        s: &Schema,
        bound: &mut Vec<u8>,
        under_caller_knowledge: bool,
        reject: &dyn Fn(&str, &Schema) -> GossipError,
    ) -> Result<()> {
        let bound_ok = |t: &Term, bound: &Vec<u8>| match t {
            Term::Bound(v) => bound.contains(v),
            _ => true,
        };
        if let Schema::SelfCondition(..) = s {
            return Err(reject("self-referential protocol condition", s));
        }
        match s {
            Schema::Secret(x, y) | Schema::Called(x, y) => {
                for t in [x, y] {
                    if let Term::Fixed(_) = t {
                        return Err(reject("fixed agent breaks symmetry", s));
                    }
                    if !bound_ok(t, bound) {
                        return Err(reject("unbound variable", s));
                    }
                }
                let observable = match s {
                    Schema::Secret(x, _) => *x == Term::Caller,
                    _ => *x == Term::Caller || *y == Term::Caller,
                };
                if !under_caller_knowledge && !observable {
                    return Err(reject("condition not observable by the caller", s));
                }
                Ok(())
            }
            Schema::Knows(t, body) => {
                if let Term::Fixed(_) = t {
                    return Err(reject("fixed agent breaks symmetry", s));
                }
                if !bound_ok(t, bound) {
                    return Err(reject("unbound variable", s));
                }
                walk(body, bound, under_caller_knowledge || *t == Term::Caller, reject)
            }
            Schema::Not(body) => walk(body, bound, under_caller_knowledge, reject),
            Schema::And(v) | Schema::Or(v) => {
                v.iter().try_for_each(|b| walk(b, bound, under_caller_knowledge, reject))
            }
            Schema::Exists(v, body) => {
                bound.push(*v);
                let r = walk(body, bound, under_caller_knowledge, reject);
                bound.pop();
                r
            }
            Schema::Top | Schema::SelfCondition(..) => Ok(()),
        }
    }
    walk(&p.schema, &mut Vec::new(), false, &reject)
}
