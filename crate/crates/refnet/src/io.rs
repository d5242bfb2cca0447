//! Text formats.
//!
//! Arc list: the first line holds `n`, then one `source target` pair per
//! line, 1-based, in increasing order.
//!
//! ```text
//! 3
//! 1 2
//! 1 3
//! 2 1
//! ```
//!
//! Network: an arc list followed by `p:` and `th:` lines with one value per
//! node, and optionally an `s:` line carrying an initial state. Blank lines
//! and text after `#` are ignored on input.
//!
//! State: node values separated by whitespace on a single line.
//!
//! Summary: a JSON object with `tau`, `alpha` (a decimal string, since it
//! may exceed 64 bits), `capped`, and optionally `per_node_period` and
//! `min_cycling_onset`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use refnet_core::{Digraph, DynamicsSummary, GraphError, Network, NetworkError, State};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Missing(&'static str),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

fn parse_error(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        message: message.into(),
    }
}

pub fn read_file(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), FormatError> {
    fs::write(path, contents).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn format_digraph(g: &Digraph) -> String {
    let mut out = String::new();
    writeln!(out, "{}", g.node_count()).unwrap();
    for (a, b) in g.arcs() {
        writeln!(out, "{} {}", a + 1, b + 1).unwrap();
    }
    out
}

pub fn format_network(net: &Network, state: Option<&State>) -> String {
    let mut out = format_digraph(net.graph());
    writeln!(out, "p: {}", join(net.refractory())).unwrap();
    writeln!(out, "th: {}", join(net.threshold())).unwrap();
    if let Some(s) = state {
        writeln!(out, "s: {}", join(s.as_slice())).unwrap();
    }
    out
}

pub fn format_state(s: &State) -> String {
    format!("{}\n", join(s.as_slice()))
}

fn join<T: ToString>(values: &[T]) -> String {
    values
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Meaningful lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn parse_values<T: std::str::FromStr>(line: usize, text: &str) -> Result<Vec<T>, FormatError> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse()
                .map_err(|_| parse_error(line, format!("invalid value `{tok}`")))
        })
        .collect()
}

struct Parsed {
    graph: Digraph,
    p: Option<Vec<u16>>,
    th: Option<Vec<u32>>,
    s: Option<Vec<u16>>,
}

fn parse(text: &str, allow_attributes: bool) -> Result<Parsed, FormatError> {
    let mut lines = content_lines(text);
    let (first, header) = lines.next().ok_or(FormatError::Missing("missing node count"))?;
    let n: usize = header
        .parse()
        .map_err(|_| parse_error(first, format!("expected a node count, found `{header}`")))?;
    if n == 0 {
        return Err(parse_error(first, "node count must be at least 1"));
    }
    let mut arcs = Vec::new();
    let (mut p, mut th, mut s) = (None, None, None);
    for (line, content) in lines {
        if let Some((key, rest)) = content.split_once(':') {
            if !allow_attributes {
                return Err(parse_error(line, "unexpected attribute line in an arc list"));
            }
            match key.trim() {
                "p" => p = Some(parse_values(line, rest)?),
                "th" => th = Some(parse_values(line, rest)?),
                "s" => s = Some(parse_values(line, rest)?),
                other => return Err(parse_error(line, format!("unknown attribute `{other}`"))),
            }
            continue;
        }
        let pair: Vec<usize> = parse_values(line, content)?;
        let [a, b] = pair[..] else {
            return Err(parse_error(line, "expected `source target`"));
        };
        if a == 0 || b == 0 || a > n || b > n {
            return Err(parse_error(line, format!("node labels must lie in 1..={n}")));
        }
        arcs.push((a - 1, b - 1));
    }
    Ok(Parsed {
        graph: Digraph::from_arcs(n, arcs)?,
        p,
        th,
        s,
    })
}

pub fn parse_digraph(text: &str) -> Result<Digraph, FormatError> {
    Ok(parse(text, false)?.graph)
}

/// A network and the initial state embedded in it, if any.
pub fn parse_network(text: &str) -> Result<(Network, Option<State>), FormatError> {
    let parsed = parse(text, true)?;
    let p = parsed.p.ok_or(FormatError::Missing("missing `p:` line"))?;
    let th = parsed.th.ok_or(FormatError::Missing("missing `th:` line"))?;
    let net = Network::new(parsed.graph, p, th)?;
    let state = match parsed.s {
        Some(values) => {
            let s = State::new(values);
            s.validate(&net)?;
            Some(s)
        }
        None => None,
    };
    Ok((net, state))
}

pub fn parse_state(text: &str) -> Result<State, FormatError> {
    let mut values = Vec::new();
    for (line, content) in content_lines(text) {
        values.extend(parse_values::<u16>(line, content)?);
    }
    if values.is_empty() {
        return Err(FormatError::Missing("empty state"));
    }
    Ok(State::new(values))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryJson {
    pub tau: u64,
    pub alpha: String,
    pub capped: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_node_period: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_cycling_onset: Option<Vec<Option<u64>>>,
}

impl From<&DynamicsSummary> for SummaryJson {
    fn from(s: &DynamicsSummary) -> Self {
        SummaryJson {
            tau: s.tau,
            alpha: s.alpha.to_string(),
            capped: s.capped,
            per_node_period: s.per_node_period.clone(),
            min_cycling_onset: s.min_cycling_onset.clone(),
        }
    }
}

pub fn summary_json(s: &DynamicsSummary) -> String {
    serde_json::to_string_pretty(&SummaryJson::from(s)).expect("summary serializes")
}
