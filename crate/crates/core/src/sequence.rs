//! Calls, events and call sequences, with the textual sequence grammar.
//!
//! Grammar: an event is two distinct lowercase letters (caller, then callee)
//! or the token `skip`; events are separated by `;` with optional whitespace;
//! the empty string is the empty sequence.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::agent::{Agent, AgentSet};
use crate::error::{GossipError, Result};

/// A directed telephone call.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Call {
    pub caller: Agent,
    pub callee: Agent,
}

impl Call {
    pub fn new(caller: Agent, callee: Agent) -> Result<Self> {
        if caller == callee {
            return Err(GossipError::SelfCall(caller.letter()));
        }
        Ok(Call { caller, callee })
    }

    /// Build from raw ids; panics on a self-call.
    pub fn ids(caller: u8, callee: u8) -> Self {
        Call::new(Agent::new(caller), Agent::new(callee)).expect("caller must differ from callee")
    }

    pub fn dual(self) -> Call {
        Call { caller: self.callee, callee: self.caller }
    }

    pub fn involves(self, a: Agent) -> bool {
        self.caller == a || self.callee == a
    }

    /// The other participant, if `a` is involved.
    pub fn partner(self, a: Agent) -> Option<Agent> {
        if self.caller == a {
            Some(self.callee)
        } else if self.callee == a {
            Some(self.caller)
        } else {
            None
        }
    }

    pub fn participants(self) -> AgentSet {
        AgentSet::from_bits(self.caller.bit() | self.callee.bit())
    }

    /// All directed calls of an `n`-agent system in lexicographic order.
    pub fn all(n: usize) -> impl Iterator<Item = Call> + Clone {
        (0..n as u8).flat_map(move |x| {
            (0..n as u8).filter(move |&y| y != x).map(move |y| Call::ids(x, y))
        })
    }
}

impl fmt::Display for Call {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.caller, self.callee)
    }
}

/// One step of a call sequence: a call, or an explicit clock tick.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Event {
    Call(Call),
    Skip,
}

impl Event {
    pub fn call(caller: Agent, callee: Agent) -> Result<Self> {
        Call::new(caller, callee).map(Event::Call)
    }

    pub fn as_call(self) -> Option<Call> {
        match self {
            Event::Call(c) => Some(c),
            Event::Skip => None,
        }
    }

    pub fn involves(self, a: Agent) -> bool {
        matches!(self, Event::Call(c) if c.involves(a))
    }

    pub fn is_skip(self) -> bool {
        matches!(self, Event::Skip)
    }

    pub fn check(self, n: usize) -> Result<Self> {
        if let Event::Call(c) = self {
            c.caller.check(n)?;
            c.callee.check(n)?;
            if c.caller == c.callee {
                return Err(GossipError::SelfCall(c.caller.letter()));
            }
        }
        Ok(self)
    }
}

impl From<Call> for Event {
    fn from(c: Call) -> Self {
        Event::Call(c)
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::Call(c) => c.fmt(f),
            Event::Skip => f.write_str("skip"),
        }
    }
}

/// A finite sequence of events. Sequences are the identity of gossip states:
/// the initial secret relation is always the identity.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CallSequence {
    events: Vec<Event>,
}

impl CallSequence {
    pub fn empty() -> Self {
        CallSequence { events: Vec::new() }
    }

    pub fn from_events(events: Vec<Event>) -> Self {
        CallSequence { events }
    }

    pub fn from_calls<I: IntoIterator<Item = Call>>(calls: I) -> Self {
        CallSequence { events: calls.into_iter().map(Event::Call).collect() }
    }

    /// Parse, validating every agent against `n`.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let seq: CallSequence = text.parse()?;
        seq.check(n)?;
        Ok(seq)
    }

    pub fn check(&self, n: usize) -> Result<()> {
        for e in &self.events {
            e.check(n)?;
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Event> {
        self.events.iter()
    }

    pub fn last(&self) -> Option<Event> {
        self.events.last().copied()
    }

    /// The `i`-th event, counting from 1.
    pub fn nth(&self, i: usize) -> Option<Event> {
        i.checked_sub(1).and_then(|j| self.events.get(j).copied())
    }

    /// The first `i` events.
    pub fn prefix(&self, i: usize) -> CallSequence {
        CallSequence { events: self.events[..i.min(self.len())].to_vec() }
    }

    pub fn prefixes(&self) -> impl Iterator<Item = CallSequence> + '_ {
        (0..=self.len()).map(move |i| self.prefix(i))
    }

    /// The subsequence of calls involving `a`.
    pub fn agent_subsequence(&self, a: Agent) -> CallSequence {
        CallSequence { events: self.events.iter().copied().filter(|e| e.involves(a)).collect() }
    }

    pub fn extended(&self, e: Event) -> CallSequence {
        let mut events = Vec::with_capacity(self.len() + 1);
        events.extend_from_slice(&self.events);
        events.push(e);
        CallSequence { events }
    }

    pub fn push(&mut self, e: Event) {
        self.events.push(e);
    }

    pub fn pop(&mut self) -> Option<Event> {
        self.events.pop()
    }

    pub fn concat(&self, other: &CallSequence) -> CallSequence {
        let mut events = self.events.clone();
        events.extend_from_slice(&other.events);
        CallSequence { events }
    }

    /// `Cxy`: the directed call `x→y` occurs somewhere in the sequence.
    pub fn contains_call(&self, call: Call) -> bool {
        self.events.contains(&Event::Call(call))
    }

    pub fn has_skip(&self) -> bool {
        self.events.iter().any(|e| e.is_skip())
    }

    /// True when no call follows a skip.
    pub fn is_skip_postfix(&self) -> bool {
        let mut seen_skip = false;
        for e in &self.events {
            match e {
                Event::Skip => seen_skip = true,
                Event::Call(_) if seen_skip => return false,
                Event::Call(_) => {}
            }
        }
        true
    }

    /// The largest agent id mentioned plus one (0 for call-free sequences).
    pub fn span(&self) -> usize {
        self.events
            .iter()
            .filter_map(|e| e.as_call())
            .map(|c| c.caller.index().max(c.callee.index()) + 1)
            .max()
            .unwrap_or(0)
    }

    /// Compare by length first, then lexicographically.
    pub fn shortlex_cmp(&self, other: &CallSequence) -> std::cmp::Ordering {
        self.len().cmp(&other.len()).then_with(|| self.events.cmp(&other.events))
    }
}

impl fmt::Display for CallSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.events.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            e.fmt(f)?;
        }
        Ok(())
    }
}

impl fmt::Debug for CallSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            f.write_str("ε")
        } else {
            fmt::Display::fmt(self, f)
        }
    }
}

impl FromStr for CallSequence {
    type Err = GossipError;

    fn from_str(text: &str) -> Result<Self> {
        if text.trim().is_empty() {
            return Ok(CallSequence::empty());
        }
        let mut events = Vec::new();
        let mut column = 1;
        for piece in text.split(';') {
            let token = piece.trim();
            let start = column + (piece.len() - piece.trim_start().len());
            column += piece.len() + 1;
            if token == "skip" {
                events.push(Event::Skip);
                continue;
            }
            let chars: Vec<char> = token.chars().collect();
            let parse_err = |message: String| GossipError::Parse { column: start, message };
            if chars.len() != 2 {
                return Err(parse_err(format!("malformed event `{token}`")));
            }
            let caller = Agent::from_letter(chars[0])
                .ok_or_else(|| parse_err(format!("unknown agent letter `{}`", chars[0])))?;
            let callee = Agent::from_letter(chars[1])
                .ok_or_else(|| parse_err(format!("unknown agent letter `{}`", chars[1])))?;
            events.push(Event::call(caller, callee)?);
        }
        Ok(CallSequence { events })
    }
}

impl Serialize for CallSequence {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CallSequence {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

impl Serialize for Event {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Event {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        let seq: CallSequence = text.parse().map_err(serde::de::Error::custom)?;
        match seq.events() {
            [e] => Ok(*e),
            _ => Err(serde::de::Error::custom(format!("expected a single event, got `{text}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ab() -> Event {
        Event::Call(Call::ids(0, 1))
    }

    #[test]
    fn parses_four_call_sequence() {
        let seq = CallSequence::parse("ab;cd;ac;bd", 4).unwrap();
        let expected = CallSequence::from_calls([
            Call::ids(0, 1),
            Call::ids(2, 3),
            Call::ids(0, 2),
            Call::ids(1, 3),
        ]);
        assert_eq!(seq, expected);
        assert_eq!(seq.to_string(), "ab;cd;ac;bd");
    }

    #[test]
    fn parses_empty_and_skip() {
        assert_eq!(CallSequence::parse("", 4).unwrap(), CallSequence::empty());
        assert_eq!(CallSequence::parse("   ", 4).unwrap(), CallSequence::empty());
        let seq = CallSequence::parse("ab; skip", 2).unwrap();
        assert_eq!(seq.events(), &[ab(), Event::Skip]);
        assert_eq!(seq.to_string(), "ab;skip");
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!("aa".parse::<CallSequence>(), Err(GossipError::SelfCall('a'))));
        assert!(matches!("abc".parse::<CallSequence>(), Err(GossipError::Parse { .. })));
        assert!(matches!("aB".parse::<CallSequence>(), Err(GossipError::Parse { .. })));
        assert!(matches!("ab;;cd".parse::<CallSequence>(), Err(GossipError::Parse { column: 4, .. })));
        assert!(matches!(
            CallSequence::parse("ae", 4),
            Err(GossipError::AgentOutOfRange { agent: 'e', n: 4 })
        ));
    }

    #[test]
    fn accessors_follow_one_based_indexing() {
        let seq = CallSequence::parse("ab;cd;ac;bd", 4).unwrap();
        assert_eq!(seq.nth(1), Some(ab()));
        assert_eq!(seq.nth(0), None);
        assert_eq!(seq.nth(5), None);
        assert_eq!(seq.prefix(2).to_string(), "ab;cd");
        assert_eq!(seq.agent_subsequence(Agent::new(1)).to_string(), "ab;bd");
        assert!(seq.contains_call(Call::ids(0, 2)));
        assert!(!seq.contains_call(Call::ids(2, 0)));
    }

    #[test]
    fn skip_postfix_shape() {
        assert!(CallSequence::parse("ab;skip;skip", 2).unwrap().is_skip_postfix());
        assert!(!CallSequence::parse("skip;ab", 2).unwrap().is_skip_postfix());
    }

    fn arb_sequence() -> impl Strategy<Value = CallSequence> {
        let event = prop_oneof![
            9 => (0u8..6, 1u8..6).prop_map(|(x, d)| Event::Call(Call::ids(x, (x + d) % 6))),
            1 => Just(Event::Skip),
        ];
        proptest::collection::vec(event, 0..12).prop_map(CallSequence::from_events)
    }

    proptest! {
        #[test]
        fn format_parse_round_trip(seq in arb_sequence()) {
            let text = seq.to_string();
            prop_assert_eq!(CallSequence::parse(&text, 6).unwrap(), seq);
        }
    }
}
