use std::path::Path;

use ehf_core::{Graph, GraphError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("header announces {expected} edges, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
    #[error("graph6: {0}")]
    Graph6(String),
    #[error("missing header line")]
    MissingHeader,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A parsed input: the graph, the edges in file order, and the name
/// given by the first comment line, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphFile {
    pub name: Option<String>,
    pub graph: Graph,
    pub edges: Vec<(usize, usize)>,
}

impl GraphFile {
    pub fn new(name: Option<String>, graph: Graph) -> Self {
        let edges = graph.edges().collect();
        GraphFile { name, graph, edges }
    }
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        msg: msg.into(),
    }
}

fn numbers(text: &str, line: usize) -> Result<(usize, usize), ParseError> {
    let mut it = text.split_whitespace();
    let mut next = || -> Result<usize, ParseError> {
        let tok = it
            .next()
            .ok_or_else(|| syntax(line, "expected two integers"))?;
        tok.parse()
            .map_err(|_| syntax(line, format!("not an integer: {tok:?}")))
    };
    let pair = (next()?, next()?);
    if it.next().is_some() {
        return Err(syntax(line, "trailing tokens"));
    }
    Ok(pair)
}

/// Parses the edge-list format: an `n m` header, then `m` lines `u v`
/// with `u < v`. Lines starting with `#` are comments; the first names
/// the graph.
pub fn parse_edge_list(text: &str) -> Result<GraphFile, ParseError> {
    let mut name = None;
    let mut header = None;
    let mut graph = Graph::new(0);
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let t = raw.trim();
        if t.is_empty() {
            continue;
        }
        if let Some(c) = t.strip_prefix('#') {
            if name.is_none() && header.is_none() {
                name = Some(c.trim().to_string());
            }
            continue;
        }
        let (a, b) = numbers(t, line)?;
        if header.is_none() {
            header = Some((a, b));
            graph = Graph::new(a);
            continue;
        }
        let n = graph.n();
        if a >= b {
            return Err(syntax(line, format!("edge {a} {b} must have u < v")));
        }
        if b >= n {
            return Err(ParseError::Graph {
                line,
                source: GraphError::VertexOutOfRange { vertex: b, n },
            });
        }
        if graph.has_edge(a, b) {
            return Err(ParseError::Graph {
                line,
                source: GraphError::DuplicateEdge(a, b),
            });
        }
        graph.add_edge(a, b);
        edges.push((a, b));
    }
    let (_, m) = header.ok_or(ParseError::MissingHeader)?;
    if edges.len() != m {
        return Err(ParseError::EdgeCount {
            expected: m,
            found: edges.len(),
        });
    }
    Ok(GraphFile { name, graph, edges })
}

/// Writes `f` in the edge-list format, edges in the stored order.
pub fn write_edge_list(f: &GraphFile) -> String {
    let mut out = String::new();
    if let Some(name) = &f.name {
        out.push_str(&format!("# {name}\n"));
    }
    out.push_str(&format!("{} {}\n", f.graph.n(), f.edges.len()));
    for (u, v) in &f.edges {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Parses a single graph6 line; an optional `>>graph6<<` header is
/// accepted.
pub fn parse_graph6(text: &str) -> Result<GraphFile, ParseError> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let first = lines
        .next()
        .ok_or_else(|| ParseError::Graph6("empty input".into()))?;
    if lines.next().is_some() {
        return Err(ParseError::Graph6("expected exactly one graph".into()));
    }
    let body = first.strip_prefix(">>graph6<<").unwrap_or(first);
    if body == "?" {
        return Ok(GraphFile::new(None, Graph::new(0)));
    }
    let g6 = graph6_rs::Graph::from_g6(body).map_err(|e| ParseError::Graph6(format!("{e:?}")))?;
    let n = g6.n;
    let mut graph = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if g6.bit_vec[u * n + v] == 1 {
                graph.add_edge(u, v);
            }
        }
    }
    Ok(GraphFile::new(None, graph))
}

/// Reads `path`, as graph6 when it ends in `.g6`, else as an edge list.
pub fn read_graph_file(path: &Path) -> Result<GraphFile, ParseError> {
    let text = std::fs::read_to_string(path)?;
    if path.extension().is_some_and(|e| e == "g6") {
        parse_graph6(&text)
    } else {
        parse_edge_list(&text)
    }
}
