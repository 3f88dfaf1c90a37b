//! Random fair scheduling: at every step a uniformly random permitted event.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::logic::context::EvalContext;
use crate::logic::eval::Evaluator;
use crate::logic::verdict::Verdict;
use crate::sequence::CallSequence;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunResult {
    pub seed: u64,
    /// The run up to termination or cutoff.
    pub sequence: CallSequence,
    pub steps: usize,
    /// No event was permitted at the end.
    pub terminated: bool,
    /// The step budget ran out first.
    pub cutoff: bool,
    /// Permission of some event at the last step was undetermined, so the
    /// run stopped without a definite termination.
    pub stalled: bool,
    /// `E Exp_A` at the final sequence.
    pub everyone_super_expert: Verdict,
}

impl Evaluator {
    /// Run the protocol from the empty sequence with a seeded scheduler.
    pub fn simulate_fair(&self, seed: u64, max_steps: usize) -> RunResult {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t = self.root();
        let (mut terminated, mut stalled) = (false, false);
        loop {
            let _g = self.enter(t.len());
            if t.len() >= max_steps {
                break;
            }
            let kids = self.children_at(&t);
            if kids.permitted.is_empty() {
                terminated = kids.undetermined.is_empty();
                stalled = !terminated;
                break;
            }
            let e = kids.permitted[rng.gen_range(0..kids.permitted.len())];
            t = self.extend(&t, e);
        }
        let _g = self.enter(t.len());
        RunResult {
            seed,
            steps: t.len(),
            cutoff: !terminated && !stalled,
            terminated,
            stalled,
            everyone_super_expert: self.everyone_super_at(&t),
            sequence: t.seq().clone(),
        }
    }
}

/// One-shot `simulate_fair`.
pub fn simulate_fair(ctx: &EvalContext, seed: u64, max_steps: usize) -> Result<RunResult> {
    Ok(Evaluator::new(ctx.clone())?.simulate_fair(seed, max_steps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::context::Variant;
    use crate::logic::protocol::Protocol;

    #[test]
    fn runs_are_reproducible_per_seed() {
        let ctx = EvalContext::sync(4, Protocol::cmo(), Variant::Known).unwrap();
        let a = simulate_fair(&ctx, 11, 100).unwrap();
        let b = simulate_fair(&ctx, 11, 100).unwrap();
        assert_eq!(a, b);
        assert!(a.terminated && a.everyone_super_expert.is_true());
        assert!(a.sequence.len() == 5 || a.sequence.len() == 6);
    }
}
