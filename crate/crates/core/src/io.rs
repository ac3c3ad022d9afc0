//! Edge-list and demand file formats.
//!
//! Both are UTF-8 text. Lines whose first non-blank character is `#` are comments and blank
//! lines are skipped. An edge line holds two whitespace-separated node labels; a demand line
//! holds a node label and a nonnegative decimal weight. Labels may be any token. They are
//! numbered in first-appearance order, and the loaded topology is the maximal connected
//! component of the file.

use std::collections::HashMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::graph::{maximal_connected_component, Graph, GraphError, NodeId};
use crate::metrics::{DemandError, DemandVector};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("topology file has no edges")]
    EmptyGraph,
    #[error("no demand given for node {0}")]
    MissingNode(String),
    #[error("line {line}: negative demand {value}")]
    NegativeWeight { line: usize, value: f64 },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Demand(#[from] DemandError),
}

fn read(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::Io {
        path: path.to_owned(),
        source,
    })
}

fn write(path: &Path, contents: &[u8]) -> Result<(), IoError> {
    fs::write(path, contents).map_err(|source| IoError::Io {
        path: path.to_owned(),
        source,
    })
}

/// Non-comment lines with their 1-based line numbers, split into tokens.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            None
        } else {
            Some((i + 1, trimmed.split_whitespace().collect()))
        }
    })
}

fn two_tokens<'a>(line: usize, tokens: &[&'a str]) -> Result<(&'a str, &'a str), IoError> {
    match tokens {
        [a, b] => Ok((a, b)),
        _ => Err(IoError::Parse {
            line,
            message: format!("expected 2 tokens, found {}", tokens.len()),
        }),
    }
}

/// A measured topology reduced to its maximal connected component.
#[derive(Debug, Clone)]
pub struct TopologySnapshot {
    pub name: String,
    pub graph: Graph,
    /// File label of each node of `graph`.
    pub original_ids: Vec<String>,
    /// Component size over the number of distinct labels in the file.
    pub mcc_fraction: f64,
}

impl TopologySnapshot {
    /// Wraps a generated graph, labeling nodes by their integer ids.
    pub fn from_graph(name: impl Into<String>, graph: Graph) -> Self {
        Self {
            name: name.into(),
            original_ids: graph.nodes().map(|u| u.to_string()).collect(),
            graph,
            mcc_fraction: 1.0,
        }
    }

    pub fn label(&self, u: NodeId) -> &str {
        &self.original_ids[u.index()]
    }
}

pub fn parse_edge_list(name: &str, text: &str) -> Result<TopologySnapshot, IoError> {
    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut labels: Vec<&str> = Vec::new();
    let mut edges = Vec::new();
    for (line, tokens) in data_lines(text) {
        let (a, b) = two_tokens(line, &tokens)?;
        if a == b {
            return Err(IoError::Parse {
                line,
                message: format!("self-loop on {a}"),
            });
        }
        let mut id = |label| {
            *index.entry(label).or_insert_with(|| {
                labels.push(label);
                labels.len() - 1
            })
        };
        edges.push((id(a), id(b)));
    }
    if labels.is_empty() {
        return Err(IoError::EmptyGraph);
    }
    let (graph, map) = maximal_connected_component(&edges, labels.len())?;
    let mut original_ids = vec![String::new(); graph.node_count()];
    for (old, new) in map.iter().enumerate() {
        if let Some(new) = new {
            original_ids[new.index()] = labels[old].to_owned();
        }
    }
    Ok(TopologySnapshot {
        name: name.to_owned(),
        mcc_fraction: graph.node_count() as f64 / labels.len() as f64,
        graph,
        original_ids,
    })
}

pub fn load_edge_list(path: impl AsRef<Path>) -> Result<TopologySnapshot, IoError> {
    let path = path.as_ref();
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_edge_list(&name, &read(path)?)
}

pub fn write_edge_list<W: Write>(out: &mut W, snapshot: &TopologySnapshot) -> io::Result<()> {
    writeln!(
        out,
        "# {}: {} nodes, {} edges",
        snapshot.name,
        snapshot.graph.node_count(),
        snapshot.graph.edge_count()
    )?;
    for (u, v) in snapshot.graph.edges() {
        writeln!(out, "{} {}", snapshot.label(u), snapshot.label(v))?;
    }
    Ok(())
}

pub fn save_edge_list(path: impl AsRef<Path>, snapshot: &TopologySnapshot) -> Result<(), IoError> {
    let mut buf = Vec::new();
    write_edge_list(&mut buf, snapshot).expect("writing to memory");
    write(path.as_ref(), &buf)
}

/// Parses a demand file whose labels are resolved through `labels`.
pub fn parse_demand<S: AsRef<str>>(text: &str, labels: &[S]) -> Result<DemandVector, IoError> {
    let index: HashMap<&str, usize> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_ref(), i))
        .collect();
    let mut w: Vec<Option<f64>> = vec![None; labels.len()];
    for (line, tokens) in data_lines(text) {
        let (label, weight) = two_tokens(line, &tokens)?;
        let &node = index.get(label).ok_or_else(|| IoError::Parse {
            line,
            message: format!("unknown node {label}"),
        })?;
        let value: f64 = weight.parse().map_err(|_| IoError::Parse {
            line,
            message: format!("invalid weight {weight:?}"),
        })?;
        if !value.is_finite() {
            return Err(IoError::Parse {
                line,
                message: format!("non-finite weight {weight:?}"),
            });
        }
        if value < 0.0 {
            return Err(IoError::NegativeWeight { line, value });
        }
        if w[node].replace(value).is_some() {
            return Err(IoError::Parse {
                line,
                message: format!("duplicate entry for node {label}"),
            });
        }
    }
    let values = w
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| IoError::MissingNode(labels[i].as_ref().to_owned())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DemandVector::new(values)?)
}

/// Loads a demand file with integer labels `0..node_count`.
pub fn load_demand(path: impl AsRef<Path>, node_count: usize) -> Result<DemandVector, IoError> {
    let labels: Vec<String> = (0..node_count).map(|i| i.to_string()).collect();
    parse_demand(&read(path.as_ref())?, &labels)
}

/// Loads a demand file keyed by the snapshot's original labels.
pub fn load_demand_for(path: impl AsRef<Path>, snapshot: &TopologySnapshot) -> Result<DemandVector, IoError> {
    parse_demand(&read(path.as_ref())?, &snapshot.original_ids)
}

pub fn write_demand<W: Write, S: AsRef<str>>(out: &mut W, w: &DemandVector, labels: &[S]) -> io::Result<()> {
    assert_eq!(labels.len(), w.len());
    for (label, value) in labels.iter().zip(w.as_slice()) {
        // `{}` prints the shortest decimal that parses back to the same f64
        writeln!(out, "{} {}", label.as_ref(), value)?;
    }
    Ok(())
}

/// Saves with integer labels `0..n`.
pub fn save_demand(path: impl AsRef<Path>, w: &DemandVector) -> Result<(), IoError> {
    let labels: Vec<String> = (0..w.len()).map(|i| i.to_string()).collect();
    let mut buf = Vec::new();
    write_demand(&mut buf, w, &labels).expect("writing to memory");
    write(path.as_ref(), &buf)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_numeric_path() {
        let snap = parse_edge_list("p3", "0 1\n1 2\n").unwrap();
        assert_eq!(snap.graph, Graph::from_edges(&[(0, 1), (1, 2)], 3).unwrap());
        assert_eq!(snap.mcc_fraction, 1.0);
    }

    #[test]
    fn extracts_mcc_with_string_labels() {
        let snap = parse_edge_list("abc", "a b\nc d\nb c\nx y\n").unwrap();
        assert_eq!(snap.original_ids, ["a", "b", "c", "d"]);
        assert_eq!(snap.graph, Graph::from_edges(&[(0, 1), (1, 2), (2, 3)], 4).unwrap());
        assert!((snap.mcc_fraction - 4.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn skips_comments_and_blanks() {
        let text = "# header\n\n  10.0.0.1   10.0.0.2 \n   # indented comment\n10.0.0.2 10.0.0.3\n";
        let snap = parse_edge_list("ips", text).unwrap();
        assert_eq!(snap.graph.node_count(), 3);
        assert_eq!(snap.label(NodeId::new(2)), "10.0.0.3");
    }

    #[test]
    fn rejects_bad_edge_lines() {
        assert!(matches!(
            parse_edge_list("x", "0 0\n"),
            Err(IoError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_edge_list("x", "0 1\n1 2 3\n"),
            Err(IoError::Parse { line: 2, .. })
        ));
        assert!(matches!(parse_edge_list("x", "# nothing\n"), Err(IoError::EmptyGraph)));
    }

    #[test]
    fn demand_errors() {
        let labels = ["0", "1", "2", "3"];
        assert!(matches!(
            parse_demand("0 1\n1 1\n2 1\n", &labels),
            Err(IoError::MissingNode(n)) if n == "3"
        ));
        assert!(matches!(
            parse_demand("0 1\n1 -1\n2 1\n3 1\n", &labels),
            Err(IoError::NegativeWeight { line: 2, .. })
        ));
        assert!(matches!(
            parse_demand("0 one\n", &labels),
            Err(IoError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_demand("0 1\n0 2\n", &labels),
            Err(IoError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_demand("0 0\n1 0\n2 0\n3 0\n", &labels),
            Err(IoError::Demand(DemandError::AllZero))
        ));
    }
}
