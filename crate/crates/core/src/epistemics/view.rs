//! Per-agent observations and hash-consed views.
//!
//! An agent's view of a sequence is the list of what it observed at each
//! step. Two permitted sequences are indistinguishable for the agent exactly
//! when their views coincide, so views key every knowledge cache.

use rustc_hash::FxHashMap;

use crate::agent::{Agent, AgentSet};
use crate::sequence::Call;

pub(crate) type ViewId = u32;
pub(crate) const ROOT_VIEW: ViewId = 0;

/// A packed observation. `OTHER` is the synchronous "something happened
/// elsewhere" tick; own calls carry the call, the partner's prior secrets
/// and, for engaged semantics, whether the callee was already a super expert.
pub(crate) type Obs = u64;
pub(crate) const OTHER: Obs = 0;

const OWN_FLAG: u64 = 1 << 63;
const STATUS_SHIFT: u32 = 32;
const STATUS_MASK: u64 = 0b11 << STATUS_SHIFT;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Status {
    /// Not recorded by this relation.
    Untracked = 0,
    False = 1,
    True = 2,
    Unknown = 3,
}

pub(crate) fn own_obs(call: Call, prior: AgentSet, status: Status) -> Obs {
    OWN_FLAG
        | (u64::from(call.caller.id()) << 48)
        | (u64::from(call.callee.id()) << 40)
        | ((status as u64) << STATUS_SHIFT)
        | u64::from(prior.bits())
}

pub(crate) fn obs_call(o: Obs) -> Option<Call> {
    if o & OWN_FLAG == 0 {
        return None;
    }
    Some(Call { caller: Agent::new(((o >> 48) & 0xff) as u8), callee: Agent::new(((o >> 40) & 0xff) as u8) })
}

pub(crate) fn obs_prior(o: Obs) -> AgentSet {
    AgentSet::from_bits((o & 0xffff_ffff) as u32)
}

pub(crate) fn obs_status(o: Obs) -> Status {
    match (o & STATUS_MASK) >> STATUS_SHIFT {
        0 => Status::Untracked,
        1 => Status::False,
        2 => Status::True,
        _ => Status::Unknown,
    }
}

pub(crate) fn strip_status(o: Obs) -> Obs {
    o & !STATUS_MASK
}

/// Compare an observation with an expected one: `Some(true)` for a certain
/// match, `Some(false)` when they differ only by an undetermined status.
pub(crate) fn obs_match(expected: Obs, actual: Obs) -> Option<bool> {
    if expected == actual {
        return Some(true);
    }
    if strip_status(expected) == strip_status(actual)
        && (obs_status(expected) == Status::Unknown || obs_status(actual) == Status::Unknown)
    {
        return Some(false);
    }
    None
}

#[derive(Clone, Copy)]
struct Node {
    parent: ViewId,
    obs: Obs,
    len: u32,
}

/// Append-only store of views as parent-linked observation lists.
pub(crate) struct ViewArena {
    nodes: Vec<Node>,
    index: FxHashMap<(ViewId, Obs), ViewId>,
}

impl ViewArena {
    pub(crate) fn new() -> Self {
        ViewArena { nodes: vec![Node { parent: ROOT_VIEW, obs: OTHER, len: 0 }], index: FxHashMap::default() }
    }

    pub(crate) fn child(&mut self, parent: ViewId, obs: Obs) -> ViewId {
        if let Some(&id) = self.index.get(&(parent, obs)) {
            return id;
        }
        let id = self.nodes.len() as ViewId;
        let len = self.nodes[parent as usize].len + 1;
        self.nodes.push(Node { parent, obs, len });
        self.index.insert((parent, obs), id);
        id
    }

    pub(crate) fn parent(&self, v: ViewId) -> ViewId {
        self.nodes[v as usize].parent
    }

    pub(crate) fn last(&self, v: ViewId) -> Obs {
        self.nodes[v as usize].obs
    }

    pub(crate) fn len(&self, v: ViewId) -> usize {
        self.nodes[v as usize].len as usize
    }

    /// Observations from first to last.
    pub(crate) fn observations(&self, mut v: ViewId) -> Vec<Obs> {
        let mut out = Vec::with_capacity(self.len(v));
        while v != ROOT_VIEW {
            out.push(self.last(v));
            v = self.parent(v);
        }
        out.reverse();
        out
    }

    pub(crate) fn intern_observations(&mut self, obs: &[Obs]) -> ViewId {
        obs.iter().fold(ROOT_VIEW, |v, &o| self.child(v, o))
    }

    /// The same view without super-expert status annotations.
    pub(crate) fn stripped(&mut self, v: ViewId) -> ViewId {
        let obs: Vec<Obs> = self.observations(v).into_iter().map(strip_status).collect();
        self.intern_observations(&obs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packing_round_trips() {
        let call = Call::ids(3, 1);
        let prior = AgentSet::from_bits(0b1011);
        for status in [Status::Untracked, Status::False, Status::True, Status::Unknown] {
            let o = own_obs(call, prior, status);
            assert_ne!(o, OTHER);
            assert_eq!(obs_call(o), Some(call));
            assert_eq!(obs_prior(o), prior);
            assert_eq!(obs_status(o), status);
        }
        assert_eq!(obs_call(OTHER), None);
    }

    #[test]
    fn matching_with_unknown_status() {
        let call = Call::ids(0, 1);
        let p = AgentSet::from_bits(0b10);
        let t = own_obs(call, p, Status::True);
        let f = own_obs(call, p, Status::False);
        let u = own_obs(call, p, Status::Unknown);
        assert_eq!(obs_match(t, t), Some(true));
        assert_eq!(obs_match(t, f), None);
        assert_eq!(obs_match(u, f), Some(false));
        assert_eq!(obs_match(t, OTHER), None);
    }

    #[test]
    fn arena_hash_conses() {
        let mut arena = ViewArena::new();
        let a = arena.child(ROOT_VIEW, OTHER);
        let b = arena.child(ROOT_VIEW, OTHER);
        assert_eq!(a, b);
        let o = own_obs(Call::ids(0, 1), AgentSet::from_bits(2), Status::True);
        let c = arena.child(a, o);
        assert_eq!(arena.observations(c), vec![OTHER, o]);
        assert_eq!(arena.len(c), 2);
        let s = arena.stripped(c);
        assert_eq!(arena.observations(s), vec![OTHER, strip_status(o)]);
    }
}
