//! Model checking for epistemic gossip protocols whose goal is that every
//! agent knows that everyone knows all secrets.
//!
//! The crate is layered:
//!
//! * [`sequence`] and [`secrets`]: call sequences and the secrets they
//!   distribute;
//! * [`logic`]: formulas, protocols, evaluation contexts and the
//!   [`Evaluator`];
//! * [`epistemics`]: knowledge queries and ignorance witnesses;
//! * [`explorer`]: execution trees, searches, classification, constructions,
//!   simulation and knowledge tables.
//!
//! ```
//! use supergossip::{CallSequence, EvalContext, Evaluator, Formula, Protocol, Variant, Verdict};
//!
//! let ctx = EvalContext::sync(4, Protocol::any(), Variant::Plain).unwrap();
//! let ev = Evaluator::new(ctx).unwrap();
//! let seq = CallSequence::parse("ab;cd;ac;bd", 4).unwrap();
//! assert_eq!(ev.eval(&seq, &Formula::exp_all(4)).unwrap(), Verdict::True);
//! ```

pub mod agent;
pub mod epistemics;
pub mod error;
pub mod explorer;
pub mod logic;
pub mod secrets;
pub mod sequence;

pub use agent::{agents, Agent, AgentSet, MAX_AGENTS};
pub use epistemics::{IndistEnumeration, Witness};
pub use error::{GossipError, Result};
pub use logic::context::{EvalContext, Mode, Variant};
pub use logic::eval::{EvalOptions, EvalStats, Evaluator, Successors, Trace};
pub use logic::formula::{Formula, KnowledgeBase, Program};
pub use logic::parse::{parse_formula, parse_program};
pub use logic::protocol::{validate_protocol, BuiltinProtocol, Protocol};
pub use logic::verdict::Verdict;
pub use secrets::{apply_event, experts, secrets_after, FactState, SecretRelation};
pub use sequence::{Call, CallSequence, Event};
