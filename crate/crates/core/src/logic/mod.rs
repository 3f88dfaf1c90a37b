//! The logical language and its evaluation.

pub mod context;
pub mod eval;
pub mod formula;
pub mod parse;
pub mod protocol;
pub mod verdict;

pub use eval::{call_permitted, eval, eval_program, is_maximal};
