//! Query descriptions and their execution against an [`Evaluator`].

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use supergossip::explorer::{Classification, SearchOptions, SearchOutcome};
use supergossip::{
    parse_formula, Agent, CallSequence, EvalContext, EvalStats, Evaluator, Formula, GossipError, KnowledgeBase,
    Mode, Protocol, Variant, Verdict,
};

use crate::report::{
    ContextInfo, CounterexampleReport, QueryInput, QueryReport, StatsReport, TableReport, WitnessReport,
};

/// The evaluation context of a run, as given on the command line or in a
/// scenario header.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Setup {
    pub agents: usize,
    pub protocol: String,
    pub variant: Variant,
    pub asynchronous: bool,
    /// Explicit asynchronous bound; `None` means `|σ| + 2n` per query.
    pub bound: Option<usize>,
}

impl Default for Setup {
    fn default() -> Self {
        Setup { agents: 4, protocol: "any".into(), variant: Variant::Plain, asynchronous: false, bound: None }
    }
}

impl Setup {
    pub fn context(&self) -> supergossip::Result<EvalContext> {
        let protocol = Protocol::by_name(&self.protocol)?;
        if self.bound.is_some() && !self.asynchronous {
            return Err(GossipError::InvalidOption("a bound only applies to the async mode".into()));
        }
        let mode = if self.asynchronous { Mode::Async { bound: self.bound } } else { Mode::Sync };
        EvalContext::new(self.agents, protocol, self.variant, mode)
    }

    pub fn info(&self, ctx: &EvalContext) -> ContextInfo {
        ContextInfo {
            agents: ctx.n,
            protocol: ctx.protocol.to_string(),
            variant: ctx.variant.to_string(),
            mode: if self.asynchronous { "async" } else { "sync" }.into(),
            bound: self.bound,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QueryKind {
    Eval,
    Knows,
    Table,
    Search,
    Classify,
    Simulate,
    Witness,
}

impl QueryKind {
    pub const ALL: [QueryKind; 7] = [
        QueryKind::Eval,
        QueryKind::Knows,
        QueryKind::Table,
        QueryKind::Search,
        QueryKind::Classify,
        QueryKind::Simulate,
        QueryKind::Witness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            QueryKind::Eval => "eval",
            QueryKind::Knows => "knows",
            QueryKind::Table => "table",
            QueryKind::Search => "search",
            QueryKind::Classify => "classify",
            QueryKind::Simulate => "simulate",
            QueryKind::Witness => "witness",
        }
    }

    fn uses_sequence(self) -> bool {
        !matches!(self, QueryKind::Classify | QueryKind::Simulate)
    }
}

impl fmt::Display for QueryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for QueryKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        QueryKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown query kind `{s}`"))
    }
}

/// One query with its raw arguments. Text arguments are parsed when the
/// query runs, against the agent count of the context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuerySpec {
    pub kind: QueryKind,
    pub sequence: String,
    pub agent: Option<char>,
    pub formula: Option<String>,
    pub max_len: Option<usize>,
    pub seed: Option<u64>,
    pub max_steps: Option<usize>,
    pub workers: Option<usize>,
    pub canonical: bool,
    pub undirected: bool,
    pub expect: Option<String>,
}

impl QuerySpec {
    pub fn new(kind: QueryKind) -> Self {
        QuerySpec {
            kind,
            sequence: String::new(),
            agent: None,
            formula: None,
            max_len: None,
            seed: None,
            max_steps: None,
            workers: None,
            canonical: false,
            undirected: false,
            expect: None,
        }
    }

    /// Check that the arguments the kind needs are present. Returns a
    /// message naming the missing argument.
    pub fn missing_argument(&self) -> Option<&'static str> {
        match self.kind {
            QueryKind::Eval if self.formula.is_none() => Some("formula"),
            QueryKind::Knows | QueryKind::Witness if self.agent.is_none() => Some("agent"),
            QueryKind::Knows | QueryKind::Witness if self.formula.is_none() => Some("formula"),
            QueryKind::Search | QueryKind::Classify if self.max_len.is_none() => Some("max_len"),
            _ => None,
        }
    }
}

pub const DEFAULT_MAX_STEPS: usize = 10_000;

fn parse_agent(c: char, n: usize) -> supergossip::Result<Agent> {
    Agent::from_letter(c)
        .ok_or_else(|| GossipError::Parse { column: 1, message: format!("`{c}` is not an agent letter") })?
        .check(n)
}

fn stats_delta(before: EvalStats, after: EvalStats) -> StatsReport {
    StatsReport {
        knowledge_queries: after.knowledge_queries - before.knowledge_queries,
        cache_hits: after.cache_hits - before.cache_hits,
        frontier_builds: after.frontier_builds - before.frontier_builds,
        enumeration_nodes: after.enumeration_nodes - before.enumeration_nodes,
        nodes_expanded: None,
        wall_time_ms: 0,
    }
}

/// Run one query. The evaluator carries the context and its caches, so a
/// scenario reuses one evaluator for all its queries.
pub fn run_query(ev: &Evaluator, spec: &QuerySpec) -> supergossip::Result<QueryReport> {
    if let Some(arg) = spec.missing_argument() {
        return Err(GossipError::InvalidOption(format!("{} needs `{arg}`", spec.kind)));
    }
    let n = ev.n();
    let ctx = ev.ctx();
    let seq = CallSequence::parse(&spec.sequence, n)?;
    let agent = spec.agent.map(|c| parse_agent(c, n)).transpose()?;
    let formula = spec.formula.as_deref().map(|f| parse_formula(f, n)).transpose()?;

    let mut report = QueryReport::new(spec.kind.name());
    report.input = QueryInput {
        sequence: spec.kind.uses_sequence().then(|| seq.to_string()),
        agent: spec.agent.map(String::from),
        formula: spec.formula.clone(),
        max_len: spec.max_len,
        seed: match spec.kind {
            QueryKind::Simulate => Some(spec.seed.unwrap_or(0)),
            _ => None,
        },
        max_steps: match spec.kind {
            QueryKind::Simulate => Some(spec.max_steps.unwrap_or(DEFAULT_MAX_STEPS)),
            _ => None,
        },
        canonical: spec.canonical.then_some(true),
        undirected: spec.undirected.then_some(true),
    };
    report.expect = None;
    let asynchronous = !ctx.is_sync();
    let seq_bound = asynchronous.then(|| ctx.bound_for(seq.len()));

    let before = ev.stats();
    let start = Instant::now();
    let mut nodes = None;
    match spec.kind {
        QueryKind::Eval => {
            let phi = formula.expect("checked");
            let v = ev.eval(&seq, &phi)?;
            report.verdict = v.to_string();
            report.bound = seq_bound;
            // A false top-level knowledge claim comes with its witness.
            if let (Verdict::False, Formula::Knows { agent, base: KnowledgeBase::Context, body }) = (v, &phi) {
                report.witness = ev.find_ignorance_witness(&seq, *agent, body)?.map(WitnessReport::from);
            }
        }
        QueryKind::Knows | QueryKind::Witness => {
            let (a, phi) = (agent.expect("checked"), formula.expect("checked"));
            let v = ev.knows(&seq, a, &phi)?;
            report.verdict = v.to_string();
            report.bound = seq_bound;
            if v.is_false() {
                let w = ev.find_ignorance_witness(&seq, a, &phi)?;
                if w.is_none() {
                    report.details.push("no witness within the bound".into());
                }
                let text = spec.formula.clone().expect("checked");
                report.witness = w.map(|w| WitnessReport { formula: text, ..WitnessReport::from(w) });
                if spec.kind == QueryKind::Knows {
                    if let Some(w) = &mut report.witness {
                        w.clauses.clear();
                    }
                }
            }
        }
        QueryKind::Table => {
            let table = ev.knowledge_table(&seq)?;
            report.verdict = if table.has_undetermined() { "Partial" } else { "Complete" }.into();
            report.bound = seq_bound;
            report.table = Some(TableReport::from(&table));
        }
        QueryKind::Search => {
            let max_len = spec.max_len.expect("checked");
            let options = SearchOptions {
                canonical_first_call: spec.canonical,
                undirected: spec.undirected,
                workers: spec.workers.unwrap_or(1).max(1),
            };
            let result = ev.search_extension(&seq, max_len, options)?;
            report.bound = asynchronous.then(|| ctx.bound_for(max_len));
            match &result.outcome {
                SearchOutcome::FoundMinimal { length, sequence } => {
                    report.verdict = format!("FoundMinimal({length})");
                    report.sequence = Some(sequence.to_string());
                }
                SearchOutcome::NoneUpTo { max_len } => report.verdict = format!("NoneUpTo({max_len})"),
                SearchOutcome::Inconclusive { frontier, best } => {
                    report.verdict = "Inconclusive".into();
                    report.sequence = best.as_ref().map(ToString::to_string);
                    report.details.push(format!("undetermined sequences: {}", frontier.len()));
                    if let Some(first) = frontier.first() {
                        report.details.push(format!("first undetermined: {first}"));
                    }
                }
            }
            if let Some(ok) = result.verified {
                report.details.push(format!("independently verified: {ok}"));
            }
            nodes = Some(result.stats.nodes_expanded);
        }
        QueryKind::Classify => {
            let max_len = spec.max_len.expect("checked");
            let result = ev.classify_protocol(max_len);
            report.bound = asynchronous.then(|| ctx.bound_for(max_len));
            report.verdict = match result.verdict {
                Classification::SuperSuccessful => "SuperSuccessful",
                Classification::NotSuperSuccessful => "NotSuperSuccessful",
                Classification::Inconclusive => "Inconclusive",
            }
            .into();
            report.counterexample = result.counterexample.as_ref().map(|c| CounterexampleReport {
                sequence: c.sequence.to_string(),
                agent: c.agent.to_string(),
            });
            let lengths: Vec<String> = result.maximal_lengths.iter().map(|(l, c)| format!("{l}: {c}")).collect();
            report.details.push(format!("maximal sequences by length: {}", lengths.join(", ")));
            report.details.push(format!("counterexamples: {}", result.counterexamples.len()));
            if result.truncated {
                report.details.push(format!("truncated: some sequence of length {max_len} still has successors"));
            }
            if !result.undetermined.is_empty() {
                report.details.push(format!("undetermined sequences: {}", result.undetermined.len()));
            }
            nodes = Some(result.explored);
        }
        QueryKind::Simulate => {
            let seed = spec.seed.unwrap_or(0);
            let max_steps = spec.max_steps.unwrap_or(DEFAULT_MAX_STEPS);
            let run = ev.simulate_fair(seed, max_steps);
            report.verdict = if run.terminated {
                "Terminated"
            } else if run.stalled {
                "Stalled"
            } else {
                "Cutoff"
            }
            .into();
            report.bound = asynchronous.then(|| ctx.bound_for(run.sequence.len()));
            report.sequence = Some(run.sequence.to_string());
            report.details.push(format!("steps: {}", run.steps));
            report.details.push(format!("everyone super expert: {}", run.everyone_super_expert));
        }
    }
    report.stats = stats_delta(before, ev.stats());
    report.stats.nodes_expanded = nodes;
    report.stats.wall_time_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Check a report against an expected value. Returns a message naming the
/// first divergence.
///
/// Verdicts match case-insensitively, either in full (`Unknown(bound=9)`,
/// `FoundMinimal(7)`) or by name alone (`Unknown`, `FoundMinimal`); a
/// reported sequence also matches. Tables are compared cell by cell against
/// their ascii rendering.
pub fn check_expectation(report: &QueryReport, expected: &str) -> Result<(), String> {
    if let Some(table) = &report.table {
        if expected.contains('\n') {
            return table.compare_ascii(expected);
        }
    }
    let expected = expected.trim();
    let verdict = report.verdict.as_str();
    let name = verdict.split('(').next().unwrap_or(verdict);
    let matches = expected.eq_ignore_ascii_case(verdict)
        || expected.eq_ignore_ascii_case(name)
        || report.sequence.as_deref() == Some(expected);
    if matches {
        Ok(())
    } else {
        Err(format!("expected {expected}, got {verdict}"))
    }
}
