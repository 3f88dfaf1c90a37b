//! Reports: the machine-readable JSON form and its ascii rendering, plus
//! knowledge-table rendering.
//!
//! The ascii rendering is a pure function of the JSON data, so a report read
//! back from JSON renders to the same text. Wall-clock times are kept out of
//! the ascii form to keep it reproducible.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use supergossip::explorer::{KnowledgeCell, KnowledgeTable};
use supergossip::{agents, Witness};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub context: ContextInfo,
    pub queries: Vec<QueryReport>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextInfo {
    pub agents: usize,
    pub protocol: String,
    pub variant: String,
    /// `sync` or `async`.
    pub mode: String,
    /// Explicit asynchronous bound, if one was given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<usize>,
}

impl fmt::Display for ContextInfo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} protocol={} variant={} mode={}", self.agents, self.protocol, self.variant, self.mode)?;
        if let Some(l) = self.bound {
            write!(f, "(bound={l})")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryInput {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequence: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agent: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formula: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_len: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub canonical: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub undirected: Option<bool>,
}

impl fmt::Display for QueryInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(a) = &self.agent {
            parts.push(format!("agent={a}"));
        }
        if let Some(phi) = &self.formula {
            parts.push(format!("formula={phi}"));
        }
        if let Some(s) = &self.sequence {
            parts.push(format!("sequence={}", if s.is_empty() { "ε" } else { s }));
        }
        if let Some(m) = self.max_len {
            parts.push(format!("max_len={m}"));
        }
        if let Some(s) = self.seed {
            parts.push(format!("seed={s}"));
        }
        if let Some(m) = self.max_steps {
            parts.push(format!("max_steps={m}"));
        }
        if self.canonical == Some(true) {
            parts.push("canonical".into());
        }
        if self.undirected == Some(true) {
            parts.push("undirected".into());
        }
        f.write_str(&parts.join(" "))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    /// A sequence the agent cannot tell apart from the queried one.
    pub tau: String,
    /// The formula that fails there.
    pub formula: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub clauses: Vec<String>,
}

impl From<Witness> for WitnessReport {
    fn from(w: Witness) -> Self {
        WitnessReport { tau: w.tau.to_string(), formula: w.formula, clauses: w.clauses }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub sequence: String,
    pub agent: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsReport {
    pub knowledge_queries: u64,
    pub cache_hits: u64,
    pub frontier_builds: u64,
    pub enumeration_nodes: u64,
    /// Tree nodes visited by searches and classifications.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes_expanded: Option<u64>,
    pub wall_time_ms: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectReport {
    pub expected: String,
    pub matched: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divergence: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryReport {
    pub kind: String,
    pub input: QueryInput,
    pub verdict: String,
    /// The asynchronous bound the verdict was computed at. For tree queries
    /// this is the bound at the deepest sequences considered.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<TableReport>,
    /// The sequence found by a search, or the simulated run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequence: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CounterexampleReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub details: Vec<String>,
    pub stats: StatsReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<ExpectReport>,
}

impl QueryReport {
    pub fn new(kind: &str) -> Self {
        QueryReport { kind: kind.into(), ..Default::default() }
    }
}

impl Report {
    /// The first failed expectation, as `(query index from 1, message)`.
    pub fn first_mismatch(&self) -> Option<(usize, String)> {
        self.queries.iter().enumerate().find_map(|(i, q)| match &q.expect {
            Some(e) if !e.matched => Some((i + 1, e.divergence.clone().unwrap_or_default())),
            _ => None,
        })
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    pub fn from_json(text: &str) -> serde_json::Result<Report> {
        serde_json::from_str(text)
    }

    pub fn render_ascii(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "context: {}", self.context);
        for (i, q) in self.queries.iter().enumerate() {
            let _ = writeln!(out, "query {}: {} {}", i + 1, q.kind, q.input);
            let _ = writeln!(out, "  verdict: {}", q.verdict);
            if let Some(l) = q.bound {
                let _ = writeln!(out, "  bound: {l}");
            }
            if let Some(s) = &q.sequence {
                let _ = writeln!(out, "  sequence: {}", if s.is_empty() { "ε" } else { s });
            }
            if let Some(w) = &q.witness {
                let _ = writeln!(out, "  witness: {} (fails: {})", w.tau, w.formula);
                for c in &w.clauses {
                    let _ = writeln!(out, "    {c}");
                }
            }
            if let Some(c) = &q.counterexample {
                let _ = writeln!(out, "  counterexample: {} (agent {})", c.sequence, c.agent);
            }
            for d in &q.details {
                let _ = writeln!(out, "  {d}");
            }
            if let Some(t) = &q.table {
                for line in t.ascii().lines() {
                    let _ = writeln!(out, "  | {line}");
                }
            }
            if let Some(e) = &q.expect {
                match &e.divergence {
                    None => {
                        let _ = writeln!(out, "  expect: ok");
                    }
                    Some(d) => {
                        let _ = writeln!(out, "  expect: MISMATCH: {d}");
                    }
                }
            }
            let s = &q.stats;
            let _ = write!(
                out,
                "  stats: knowledge_queries={} cache_hits={} frontier_builds={} enumeration_nodes={}",
                s.knowledge_queries, s.cache_hits, s.frontier_builds, s.enumeration_nodes
            );
            if let Some(nodes) = s.nodes_expanded {
                let _ = write!(out, " nodes={nodes}");
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Ascii,
    Json,
    Csv,
}

impl FromStr for TableFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "ascii" => Ok(TableFormat::Ascii),
            "json" => Ok(TableFormat::Json),
            "csv" => Ok(TableFormat::Csv),
            other => Err(format!("unknown table format `{other}` (expected ascii, json or csv)")),
        }
    }
}

/// One table cell: lowercase secrets held, uppercase agents known to be
/// experts, and after `?` the agents whose expertise is undetermined.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellReport {
    pub secrets: String,
    pub experts: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub undetermined: String,
}

impl From<&KnowledgeCell> for CellReport {
    fn from(c: &KnowledgeCell) -> Self {
        CellReport {
            secrets: c.secrets.letters(),
            experts: c.known_experts.letters().to_ascii_uppercase(),
            undetermined: c.undetermined.letters().to_ascii_uppercase(),
        }
    }
}

impl fmt::Display for CellReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.secrets)?;
        if !self.experts.is_empty() || !self.undetermined.is_empty() {
            write!(f, " {}", self.experts)?;
        }
        if !self.undetermined.is_empty() {
            write!(f, "?{}", self.undetermined)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRowReport {
    /// The last call of the prefix; empty for the initial row.
    pub label: String,
    pub cells: Vec<CellReport>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableReport {
    pub agents: Vec<String>,
    pub rows: Vec<TableRowReport>,
}

impl From<&KnowledgeTable> for TableReport {
    fn from(t: &KnowledgeTable) -> Self {
        TableReport {
            agents: agents(t.n).map(|a| a.to_string()).collect(),
            rows: t
                .rows
                .iter()
                .map(|r| TableRowReport { label: r.label.clone(), cells: r.cells.iter().map(CellReport::from).collect() })
                .collect(),
        }
    }
}

const GAP: usize = 2;

impl TableReport {
    fn label_width(&self) -> usize {
        self.rows.iter().map(|r| r.label.chars().count()).max().unwrap_or(0)
    }

    fn column_widths(&self) -> Vec<usize> {
        (0..self.agents.len())
            .map(|j| {
                self.rows
                    .iter()
                    .map(|r| r.cells[j].to_string().chars().count())
                    .chain([self.agents[j].chars().count()])
                    .max()
                    .unwrap_or(1)
            })
            .collect()
    }

    fn ascii_line(label: &str, cells: &[String], label_width: usize, widths: &[usize]) -> String {
        let mut line = format!("{label:<label_width$}");
        for (cell, w) in cells.iter().zip(widths) {
            line.push_str(&" ".repeat(GAP));
            let _ = write!(line, "{cell:<w$}");
        }
        line.trim_end().to_string()
    }

    /// Header of agent names, then one row per prefix labeled by its last
    /// call; cells are left-aligned in one column per agent.
    pub fn ascii(&self) -> String {
        let (lw, widths) = (self.label_width(), self.column_widths());
        let mut out = Self::ascii_line("", &self.agents, lw, &widths);
        out.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r.cells.iter().map(ToString::to_string).collect();
            out.push_str(&Self::ascii_line(&r.label, &cells, lw, &widths));
            out.push('\n');
        }
        out
    }

    pub fn csv(&self) -> String {
        let mut out = format!("call,{}\n", self.agents.join(","));
        for r in &self.rows {
            let cells: Vec<String> = r.cells.iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "{},{}", r.label, cells.join(","));
        }
        out
    }

    pub fn render(&self, format: TableFormat) -> String {
        match format {
            TableFormat::Ascii => self.ascii(),
            TableFormat::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("tables serialize");
                s.push('\n');
                s
            }
            TableFormat::Csv => self.csv(),
        }
    }

    /// Compare against an expected ascii rendering, naming the first cell
    /// that differs. Cells of the expected text are read at the column
    /// positions of this table's own rendering.
    pub fn compare_ascii(&self, expected: &str) -> Result<(), String> {
        let actual = self.ascii();
        let (lw, widths) = (self.label_width(), self.column_widths());
        let exp: Vec<&str> = expected.lines().map(str::trim_end).filter(|l| !l.trim().is_empty()).collect();
        let act: Vec<&str> = actual.lines().collect();
        for (i, (e, a)) in exp.iter().zip(&act).enumerate() {
            if e == a {
                continue;
            }
            let row = if i == 0 { "header".to_string() } else { format!("row {} ({})", i - 1, display_label(&self.rows[i - 1].label)) };
            let mut start = lw;
            for (j, w) in widths.iter().enumerate() {
                start += GAP;
                let slice = |s: &str| s.chars().skip(start).take(*w).collect::<String>().trim().to_string();
                let (ec, ac) = (slice(e), slice(a));
                if ec != ac {
                    return Err(format!("{row}, agent {}: expected `{ec}`, got `{ac}`", self.agents[j]));
                }
                start += w;
            }
            return Err(format!("{row}: expected `{e}`, got `{a}`"));
        }
        if exp.len() != act.len() {
            return Err(format!("expected {} table lines, got {}", exp.len(), act.len()));
        }
        Ok(())
    }
}

fn display_label(label: &str) -> &str {
    if label.is_empty() {
        "initial"
    } else {
        label
    }
}

/// Render a knowledge table as ascii, JSON or CSV.
pub fn render_table(table: &KnowledgeTable, format: TableFormat) -> String {
    TableReport::from(table).render(format)
}
