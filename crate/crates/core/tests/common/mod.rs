//! Test-side oracles that share no code with the library's knowledge
//! machinery: secrets from a boolean matrix fold, and indistinguishability
//! classes from a brute-force union-find closure over all sequences.

#![allow(dead_code)]

use std::collections::HashMap;

use supergossip::{Agent, AgentSet, Call, CallSequence, EvalContext, Evaluator, Event, Formula, Protocol, Variant};

/// Parent class plus, for an own call, (caller, callee, partner row, callee status).
type BucketKey = (usize, Option<(usize, usize, u32, Option<bool>)>);

/// `S` as an explicit matrix, `m[x][y]` iff x knows y's secret.
pub fn matrix_secrets(n: usize, seq: &CallSequence) -> Vec<Vec<bool>> {
    let mut m: Vec<Vec<bool>> = (0..n).map(|x| (0..n).map(|y| x == y).collect()).collect();
    for e in seq.iter() {
        if let Event::Call(c) = e {
            let (x, y) = (c.caller.index(), c.callee.index());
            let merged: Vec<bool> = (0..n).map(|z| m[x][z] || m[y][z]).collect();
            m[x] = merged.clone();
            m[y] = merged;
        }
    }
    m
}

pub fn seq(text: &str, n: usize) -> CallSequence {
    CallSequence::parse(text, n).unwrap_or_else(|e| panic!("bad sequence {text:?}: {e}"))
}

pub fn agent(c: char) -> Agent {
    Agent::from_letter(c).unwrap()
}

pub fn evaluator(n: usize, protocol: Protocol, variant: Variant, sync: bool) -> Evaluator {
    let ctx = if sync {
        EvalContext::sync(n, protocol, variant)
    } else {
        EvalContext::asynchronous(n, protocol, variant, None)
    };
    Evaluator::new(ctx.unwrap()).unwrap()
}

/// Every sequence (including non-permitted ones) of length exactly `len`
/// over calls only, in lexicographic order.
pub fn all_call_sequences(n: usize, len: usize) -> Vec<CallSequence> {
    let calls: Vec<Call> = Call::all(n).collect();
    let mut out = vec![CallSequence::empty()];
    for _ in 0..len {
        out = out.into_iter().flat_map(|s| calls.iter().map(move |&c| s.extended(Event::Call(c)))).collect();
    }
    out
}

// ------------------------------------------------------------------ closure

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OracleProtocol {
    Any,
    Cmo,
    Lns,
    Pig,
}

impl OracleProtocol {
    pub fn library(self) -> Protocol {
        match self {
            OracleProtocol::Any => Protocol::any(),
            OracleProtocol::Cmo => Protocol::cmo(),
            OracleProtocol::Lns => Protocol::lns(),
            OracleProtocol::Pig => Protocol::pig(),
        }
    }
}

#[derive(Clone)]
struct Node {
    parent: usize,
    event: Option<Event>,
    rows: Vec<u32>,
    called: Vec<bool>,
    skipped: bool,
    /// Index of the same sequence in the plain tree (all call sequences).
    plain_index: usize,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// The relation's classes for every agent at every level, computed as the
/// closure of the stepwise clauses by union-find.
pub struct ClosureOracle {
    pub n: usize,
    pub variant: Variant,
    pub protocol: OracleProtocol,
    levels: Vec<Vec<Node>>,
    /// classes[level][agent][node] = representative
    classes: Vec<Vec<Vec<usize>>>,
    /// super_expert[level][agent][node]
    super_expert: Vec<Vec<Vec<bool>>>,
    plain: Option<Box<ClosureOracle>>,
    /// differ[level][x][class]: agents y such that some member of x's class
    /// has x and y holding different secrets.
    differ: Vec<Vec<HashMap<usize, u32>>>,
}

impl ClosureOracle {
    pub fn build(n: usize, variant: Variant, protocol: OracleProtocol, max_len: usize) -> ClosureOracle {
        assert!(!(variant == Variant::Skip && protocol == OracleProtocol::Pig), "not modelled");
        let plain = (protocol == OracleProtocol::Pig)
            .then(|| Box::new(ClosureOracle::build(n, Variant::Plain, OracleProtocol::Any, max_len)));
        let root = Node {
            parent: 0,
            event: None,
            rows: (0..n).map(|x| 1u32 << x).collect(),
            called: vec![false; n * n],
            skipped: false,
            plain_index: 0,
        };
        let mut o = ClosureOracle {
            n,
            variant,
            protocol,
            levels: vec![vec![root]],
            classes: vec![vec![vec![0]; n]],
            super_expert: Vec::new(),
            plain,
            differ: Vec::new(),
        };
        o.super_expert.push(o.compute_super_expert(0));
        o.differ.push(o.compute_differ(0));
        for m in 0..max_len {
            o.grow(m);
        }
        o
    }

    pub fn levels(&self) -> usize {
        self.levels.len()
    }

    pub fn sequence(&self, level: usize, i: usize) -> CallSequence {
        let mut events = Vec::new();
        let (mut l, mut j) = (level, i);
        while l > 0 {
            let node = &self.levels[l][j];
            events.push(node.event.unwrap());
            j = node.parent;
            l -= 1;
        }
        events.reverse();
        CallSequence::from_events(events)
    }

    pub fn level_size(&self, level: usize) -> usize {
        self.levels[level].len()
    }

    pub fn parent(&self, level: usize, i: usize) -> usize {
        self.levels[level][i].parent
    }

    pub fn event(&self, level: usize, i: usize) -> Event {
        self.levels[level][i].event.unwrap()
    }

    pub fn class(&self, level: usize, a: usize, i: usize) -> usize {
        self.classes[level][a][i]
    }

    pub fn is_super_expert(&self, level: usize, a: usize, i: usize) -> bool {
        self.super_expert[level][a][i]
    }

    fn full(&self) -> u32 {
        (1u32 << self.n) - 1
    }

    fn condition(&self, level: usize, node: &Node, x: usize, y: usize) -> bool {
        match self.protocol {
            OracleProtocol::Any => true,
            OracleProtocol::Cmo => !node.called[x * self.n + y] && !node.called[y * self.n + x],
            OracleProtocol::Lns => node.rows[x] & (1 << y) == 0,
            OracleProtocol::Pig => {
                // Possibly (for the plain relation of x) some secret held
                // by exactly one of x and y.
                let plain = self.plain.as_ref().unwrap();
                let class = plain.classes[level][x][node.plain_index];
                plain.differ[level][x][&class] & (1 << y) != 0
            }
        }
    }

    fn related_ok(&self, level: usize, i: usize, e: Event) -> bool {
        let node = &self.levels[level][i];
        let se = |x: usize| self.super_expert[level][x][i];
        match (self.variant, e) {
            (Variant::Plain, Event::Call(_)) => true,
            (Variant::Known, Event::Call(c)) => self.condition(level, node, c.caller.index(), c.callee.index()),
            (Variant::Engaged, Event::Call(c)) => {
                !se(c.caller.index()) && self.condition(level, node, c.caller.index(), c.callee.index())
            }
            (Variant::Skip, Event::Call(c)) => {
                !node.skipped && !se(c.caller.index()) && self.condition(level, node, c.caller.index(), c.callee.index())
            }
            (Variant::Skip, Event::Skip) => (0..self.n)
                .flat_map(|x| (0..self.n).map(move |y| (x, y)))
                .filter(|(x, y)| x != y)
                .all(|(x, y)| !self.condition(level, node, x, y) || se(x)),
            (_, Event::Skip) => false,
        }
    }

    pub fn events(&self) -> Vec<Event> {
        let mut ev: Vec<Event> = Call::all(self.n).map(Event::Call).collect();
        if self.variant == Variant::Skip {
            ev.push(Event::Skip);
        }
        ev
    }

    /// Whether the oracle's relation admits `e` after node `i`.
    pub fn admits(&self, level: usize, i: usize, e: Event) -> bool {
        self.related_ok(level, i, e)
    }

    fn grow(&mut self, m: usize) {
        let n = self.n;
        let ncalls = n * (n - 1);
        let events = self.events();
        let mut next = Vec::new();
        for i in 0..self.levels[m].len() {
            for (k, &e) in events.iter().enumerate() {
                if !self.related_ok(m, i, e) {
                    continue;
                }
                let node = &self.levels[m][i];
                let mut child = node.clone();
                child.parent = i;
                child.event = Some(e);
                child.plain_index = node.plain_index * ncalls + k.min(ncalls - 1);
                match e {
                    Event::Call(c) => {
                        let (x, y) = (c.caller.index(), c.callee.index());
                        let u = node.rows[x] | node.rows[y];
                        child.rows[x] = u;
                        child.rows[y] = u;
                        child.called[x * n + y] = true;
                    }
                    Event::Skip => child.skipped = true,
                }
                next.push(child);
            }
        }
        let engaged = matches!(self.variant, Variant::Engaged | Variant::Skip);
        let mut level_classes = Vec::with_capacity(n);
        for a in 0..n {
            // Two children are directly related iff their parents are and
            // their last events match the clause for `a`: the same own
            // call with the same partner row (and, for engaged agents, the
            // same callee status when `a` is the caller), or both events
            // foreign to `a`.
            let mut buckets: HashMap<BucketKey, Vec<usize>> = HashMap::new();
            for (j, child) in next.iter().enumerate() {
                let parent_class = self.classes[m][a][child.parent];
                let key = match child.event.unwrap() {
                    Event::Call(c) if c.involves(Agent::new(a as u8)) => {
                        let (x, y) = (c.caller.index(), c.callee.index());
                        let partner = if x == a { y } else { x };
                        let prior = self.levels[m][child.parent].rows[partner];
                        let status = (engaged && x == a).then(|| self.super_expert[m][y][child.parent]);
                        Some((x, y, prior, status))
                    }
                    _ => None,
                };
                buckets.entry((parent_class, key)).or_default().push(j);
            }
            let mut uf = UnionFind::new(next.len());
            for members in buckets.values() {
                for &v in &members[1..] {
                    uf.union(members[0], v);
                }
            }
            level_classes.push((0..next.len()).map(|j| uf.find(j)).collect());
        }
        self.levels.push(next);
        self.classes.push(level_classes);
        let se = self.compute_super_expert(m + 1);
        self.super_expert.push(se);
        let differ = self.compute_differ(m + 1);
        self.differ.push(differ);
    }

    fn compute_differ(&self, level: usize) -> Vec<HashMap<usize, u32>> {
        (0..self.n)
            .map(|x| {
                let mut out: HashMap<usize, u32> = HashMap::new();
                for (j, node) in self.levels[level].iter().enumerate() {
                    let mask = (0..self.n).filter(|&y| node.rows[x] != node.rows[y]).fold(0, |m, y| m | 1 << y);
                    *out.entry(self.classes[level][x][j]).or_insert(0) |= mask;
                }
                out
            })
            .collect()
    }

    fn compute_super_expert(&self, level: usize) -> Vec<Vec<bool>> {
        let full = self.full();
        let nodes = &self.levels[level];
        (0..self.n)
            .map(|a| {
                let mut all: HashMap<usize, bool> = HashMap::new();
                for (j, node) in nodes.iter().enumerate() {
                    let e = node.rows.iter().all(|&r| r == full);
                    let slot = all.entry(self.classes[level][a][j]).or_insert(true);
                    *slot &= e;
                }
                (0..nodes.len()).map(|j| all[&self.classes[level][a][j]]).collect()
            })
            .collect()
    }
}

/// Compare the oracle against the library evaluator: relation-permitted
/// sequences, partitions into classes, and super-expert status.
pub fn check_against_library(o: &ClosureOracle) -> Result<usize, String> {
    let ctx = EvalContext::sync(o.n, o.protocol.library(), o.variant).map_err(|e| e.to_string())?;
    let ev = Evaluator::new(ctx).map_err(|e| e.to_string())?;
    let exp_all = Formula::exp_all(o.n);
    let mut traces = vec![ev.root()];
    let mut checked = 0;
    for level in 0..o.levels() {
        if level > 0 {
            let mut next = Vec::with_capacity(o.level_size(level));
            for j in 0..o.level_size(level) {
                let t = ev.extend(&traces[o.parent(level, j)], o.event(level, j));
                if !t.relation_permitted().is_true() {
                    return Err(format!("{} admitted by the oracle, not by the library", t.seq()));
                }
                next.push(t);
            }
            // Events the oracle rejects must be rejected by the library.
            for (i, t) in traces.iter().enumerate() {
                for e in o.events() {
                    if !o.admits(level - 1, i, e) {
                        let u = ev.extend(t, e);
                        if !u.relation_permitted().is_false() {
                            return Err(format!("{} rejected by the oracle, not by the library", u.seq()));
                        }
                    }
                }
            }
            traces = next;
        }
        for a in 0..o.n {
            let ag = Agent::new(a as u8);
            let mut to_view: HashMap<usize, u32> = HashMap::new();
            let mut to_class: HashMap<u32, usize> = HashMap::new();
            for (j, t) in traces.iter().enumerate() {
                let (c, v) = (o.class(level, a, j), t.view_id(ag));
                if *to_view.entry(c).or_insert(v) != v || *to_class.entry(v).or_insert(c) != c {
                    return Err(format!("partition mismatch for {} at {}", ag.letter(), t.seq()));
                }
                let se = ev.eval_trace(t, &Formula::knows(ag, exp_all.clone())).map_err(|e| e.to_string())?;
                if se.definite() != Some(o.is_super_expert(level, a, j)) {
                    return Err(format!("super expert {} at {}: library {se}", ag.letter(), t.seq()));
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}

/// Secrets row as an agent set, from the matrix oracle.
pub fn matrix_row(m: &[Vec<bool>], x: usize) -> AgentSet {
    m[x].iter().enumerate().filter(|(_, &b)| b).map(|(y, _)| Agent::new(y as u8)).collect()
}
