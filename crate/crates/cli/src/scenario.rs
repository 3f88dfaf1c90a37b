//! Scenario files: a header of `key = value` lines fixing the context, then
//! `[query]` blocks run in order. The grammar is described in
//! `docs/scenario.md`.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use supergossip::{parse_formula, Agent, CallSequence, EvalContext, Evaluator, GossipError, Variant};

use crate::query::{check_expectation, run_query, QueryKind, QuerySpec, Setup};
use crate::report::{ExpectReport, Report};
use crate::{CliError, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScenarioQuery {
    /// Line of the `[query]` header, from 1.
    pub line: usize,
    pub spec: QuerySpec,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scenario {
    pub setup: Setup,
    pub queries: Vec<ScenarioQuery>,
}

const HEADER_KEYS: [&str; 6] = ["agents", "protocol", "variant", "mode", "bound", "sequence"];
const QUERY_KEYS: [&str; 11] = [
    "kind",
    "sequence",
    "agent",
    "formula",
    "max_len",
    "seed",
    "max_steps",
    "workers",
    "canonical",
    "undirected",
    "expect",
];

/// A `key = value` line with the columns (from 1) of key and value.
struct Pair<'a> {
    line: usize,
    key: &'a str,
    key_col: usize,
    value: &'a str,
    value_col: usize,
}

impl Pair<'_> {
    fn error(&self, message: impl Into<String>) -> CliError {
        CliError::Parse { line: self.line, column: self.value_col, message: message.into() }
    }

    fn number<T: std::str::FromStr>(&self) -> Result<T> {
        self.value.parse().map_err(|_| self.error(format!("`{}` expects a non-negative integer, got `{}`", self.key, self.value)))
    }

    fn boolean(&self) -> Result<bool> {
        match self.value {
            "true" => Ok(true),
            "false" => Ok(false),
            v => Err(self.error(format!("`{}` expects true or false, got `{v}`", self.key))),
        }
    }

    /// Map an error from parsing the value with a core parser: syntax
    /// errors get an absolute column, everything else is a semantic error
    /// of query `index`.
    fn value_error(&self, e: GossipError, index: usize) -> CliError {
        match e {
            GossipError::Parse { column, message } => {
                CliError::Parse { line: self.line, column: self.value_col + column.saturating_sub(1), message }
            }
            GossipError::SelfCall(_) => self.error(e.to_string()),
            other => CliError::Query { index, source: other },
        }
    }
}

fn split_pair(line: usize, raw: &str) -> Result<Pair<'_>> {
    let key_start = raw.len() - raw.trim_start().len();
    let Some(eq) = raw.find('=') else {
        return Err(CliError::Parse { line, column: key_start + 1, message: "expected `key = value`".into() });
    };
    let key = raw[..eq].trim();
    if key.is_empty() {
        return Err(CliError::Parse { line, column: eq + 1, message: "missing key before `=`".into() });
    }
    let rest = &raw[eq + 1..];
    let value_start = eq + 1 + (rest.len() - rest.trim_start().len());
    Ok(Pair {
        line,
        key,
        key_col: raw[..key_start].chars().count() + 1,
        value: rest.trim(),
        value_col: raw[..value_start].chars().count() + 1,
    })
}

struct Block<'a> {
    line: usize,
    pairs: Vec<Pair<'a>>,
}

fn check_keys(block: &Block<'_>, allowed: &[&str], place: &str) -> Result<()> {
    let mut seen = HashMap::new();
    for p in &block.pairs {
        if !allowed.contains(&p.key) {
            let hint = if place == "a query" && HEADER_KEYS.contains(&p.key) {
                format!("`{}` belongs in the header", p.key)
            } else if place == "the header" && QUERY_KEYS.contains(&p.key) {
                format!("`{}` belongs in a [query] block", p.key)
            } else {
                format!("unknown key `{}` in {place}", p.key)
            };
            return Err(CliError::Parse { line: p.line, column: p.key_col, message: hint });
        }
        if let Some(first) = seen.insert(p.key, p.line) {
            return Err(CliError::Parse {
                line: p.line,
                column: p.key_col,
                message: format!("duplicate key `{}` (first on line {first})", p.key),
            });
        }
    }
    Ok(())
}

fn parse_setup(header: &Block<'_>) -> Result<(Setup, String, EvalContext)> {
    check_keys(header, &HEADER_KEYS, "the header")?;
    let mut setup = Setup::default();
    let mut agents = None;
    let mut sequence = String::new();
    for p in &header.pairs {
        match p.key {
            "agents" => agents = Some(p.number()?),
            "protocol" => setup.protocol = p.value.to_string(),
            "variant" => {
                setup.variant = p.value.parse::<Variant>().map_err(|_| {
                    p.error(format!("unknown variant `{}` (expected plain, known, engaged or skip)", p.value))
                })?
            }
            "mode" => {
                setup.asynchronous = match p.value {
                    "sync" => false,
                    "async" => true,
                    v => return Err(p.error(format!("unknown mode `{v}` (expected sync or async)"))),
                }
            }
            "bound" => setup.bound = Some(p.number()?),
            "sequence" => sequence = p.value.to_string(),
            _ => unreachable!("keys checked"),
        }
    }
    let Some(n) = agents else {
        return Err(CliError::Parse { line: header.line, column: 1, message: "the header must set `agents`".into() });
    };
    setup.agents = n;
    let at = |key: &str| header.pairs.iter().find(|p| p.key == key);
    let ctx = setup.context().map_err(|e| {
        let key = match e {
            GossipError::AgentCount(_) => "agents",
            GossipError::UnknownProtocol(_) | GossipError::ProtocolRejected { .. } => "protocol",
            _ => "bound",
        };
        match at(key) {
            Some(p) => p.error(e.to_string()),
            None => CliError::Parse { line: header.line, column: 1, message: e.to_string() },
        }
    })?;
    if let Some(p) = at("sequence") {
        CallSequence::parse(&sequence, n).map_err(|e| match e {
            GossipError::Parse { column, message } => {
                CliError::Parse { line: p.line, column: p.value_col + column.saturating_sub(1), message }
            }
            other => p.error(other.to_string()),
        })?;
    }
    Ok((setup, sequence, ctx))
}

fn parse_query(block: &Block<'_>, index: usize, n: usize, default_sequence: &str) -> Result<QuerySpec> {
    check_keys(block, &QUERY_KEYS, "a query")?;
    let Some(kind_pair) = block.pairs.iter().find(|p| p.key == "kind") else {
        return Err(CliError::Parse { line: block.line, column: 1, message: "query without `kind`".into() });
    };
    let kind: QueryKind = kind_pair.value.parse().map_err(|m: String| kind_pair.error(m))?;
    let mut spec = QuerySpec::new(kind);
    spec.sequence = default_sequence.to_string();
    for p in &block.pairs {
        match p.key {
            "kind" => {}
            "sequence" => {
                CallSequence::parse(p.value, n).map_err(|e| p.value_error(e, index))?;
                spec.sequence = p.value.to_string();
            }
            "agent" => {
                let mut chars = p.value.chars();
                let (Some(c), None) = (chars.next(), chars.next()) else {
                    return Err(p.error(format!("an agent is a single letter, got `{}`", p.value)));
                };
                let a = Agent::from_letter(c).ok_or_else(|| p.error(format!("`{c}` is not an agent letter")))?;
                a.check(n).map_err(|e| CliError::Query { index, source: e })?;
                spec.agent = Some(c);
            }
            "formula" => {
                parse_formula(p.value, n).map_err(|e| p.value_error(e, index))?;
                spec.formula = Some(p.value.to_string());
            }
            "max_len" => spec.max_len = Some(p.number()?),
            "seed" => spec.seed = Some(p.number()?),
            "max_steps" => spec.max_steps = Some(p.number()?),
            "workers" => spec.workers = Some(p.number()?),
            "canonical" => spec.canonical = p.boolean()?,
            "undirected" => spec.undirected = p.boolean()?,
            "expect" => spec.expect = Some(p.value.to_string()),
            _ => unreachable!("keys checked"),
        }
    }
    if let Some(arg) = spec.missing_argument() {
        return Err(CliError::QueryArgs { index, message: format!("{kind} needs `{arg}`") });
    }
    Ok(spec)
}

/// Parse scenario text. Syntax errors carry line and column; errors that
/// need the context (agent out of range, missing arguments) name the query
/// by its index from 1.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let mut header = Block { line: 1, pairs: Vec::new() };
    let mut blocks: Vec<Block<'_>> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if trimmed.starts_with('[') {
            if trimmed != "[query]" {
                let column = raw.len() - raw.trim_start().len() + 1;
                return Err(CliError::Parse { line, column, message: format!("unknown section `{trimmed}`") });
            }
            blocks.push(Block { line, pairs: Vec::new() });
            continue;
        }
        let pair = split_pair(line, raw)?;
        match blocks.last_mut() {
            Some(b) => b.pairs.push(pair),
            None => header.pairs.push(pair),
        }
    }
    let (setup, sequence, ctx) = parse_setup(&header)?;
    let queries = blocks
        .iter()
        .enumerate()
        .map(|(i, b)| Ok(ScenarioQuery { line: b.line, spec: parse_query(b, i + 1, ctx.n, &sequence)? }))
        .collect::<Result<Vec<_>>>()?;
    Ok(Scenario { setup, queries })
}

/// Read an expected value: `@path` names a file (relative to `base`),
/// anything else is taken literally.
pub fn resolve_expectation(expected: &str, base: &Path) -> Result<String> {
    match expected.strip_prefix('@') {
        Some(file) => {
            let path: PathBuf = base.join(file);
            std::fs::read_to_string(&path).map_err(|source| CliError::Io { path, source })
        }
        None => Ok(expected.to_string()),
    }
}

impl Scenario {
    /// Run every query in order with one shared evaluator. Expectations are
    /// recorded in the report rather than turned into errors.
    pub fn run(&self, base: &Path) -> Result<Report> {
        let ctx = self.setup.context()?;
        let ev = Evaluator::new(ctx.clone())?;
        let mut report = Report { context: self.setup.info(&ctx), queries: Vec::new() };
        for (i, q) in self.queries.iter().enumerate() {
            let mut r = run_query(&ev, &q.spec).map_err(|source| CliError::Query { index: i + 1, source })?;
            if let Some(expected) = &q.spec.expect {
                let text = resolve_expectation(expected, base)?;
                let divergence = check_expectation(&r, &text).err();
                r.expect = Some(ExpectReport { expected: expected.clone(), matched: divergence.is_none(), divergence });
            }
            report.queries.push(r);
        }
        Ok(report)
    }
}

/// Parse and run the scenario file at `path`.
pub fn run_scenario(path: &Path) -> Result<Report> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    let scenario = parse_scenario(&text)?;
    scenario.run(path.parent().unwrap_or(Path::new(".")))
}
