//! Plain-text graph files: a header line `graph <n>` or `digraph <n>` followed
//! by one `u v` pair per line. Blank lines and `#` comments are ignored.

use crate::error::{check_cap, LabError, Result};
use crate::graph::{Digraph, Graph};
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphFile {
    Graph(Graph),
    Digraph(Digraph),
}

impl GraphFile {
    pub fn n(&self) -> usize {
        match self {
            GraphFile::Graph(g) => g.n(),
            GraphFile::Digraph(d) => d.n(),
        }
    }

    pub fn as_any(&self) -> crate::graph::AnyGraph<'_> {
        match self {
            GraphFile::Graph(g) => crate::graph::AnyGraph::Graph(g),
            GraphFile::Digraph(d) => crate::graph::AnyGraph::Digraph(d),
        }
    }

    pub fn into_graph(self) -> Result<Graph> {
        match self {
            GraphFile::Graph(g) => Ok(g),
            GraphFile::Digraph(_) => Err(LabError::KindMismatch { expected: "graph", found: "digraph" }),
        }
    }

    pub fn into_digraph(self) -> Result<Digraph> {
        match self {
            GraphFile::Digraph(d) => Ok(d),
            GraphFile::Graph(_) => Err(LabError::KindMismatch { expected: "digraph", found: "graph" }),
        }
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> LabError {
    LabError::Parse { line, message: message.into() }
}

/// Parses a graph file, refusing more than `max_vertices` vertices.
pub fn parse_graph_file(text: &str, max_vertices: usize) -> Result<GraphFile> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let mut parts = header.split_whitespace();
    let kind = parts.next().unwrap_or("");
    let n: usize = parts
        .next()
        .ok_or_else(|| parse_err(hline, "header needs a vertex count"))?
        .parse()
        .map_err(|_| parse_err(hline, "vertex count is not a number"))?;
    if parts.next().is_some() {
        return Err(parse_err(hline, "unexpected token after the vertex count"));
    }
    check_cap("vertex count", n, max_vertices)?;
    let mut pairs = Vec::new();
    for (ln, line) in lines {
        let nums: Vec<&str> = line.split_whitespace().collect();
        if nums.len() != 2 {
            return Err(parse_err(ln, "expected two vertex ids"));
        }
        let u: usize = nums[0].parse().map_err(|_| parse_err(ln, "bad vertex id"))?;
        let v: usize = nums[1].parse().map_err(|_| parse_err(ln, "bad vertex id"))?;
        if u >= n || v >= n {
            return Err(parse_err(ln, format!("vertex out of range 0..{n}")));
        }
        if u == v {
            return Err(parse_err(ln, "self-loop"));
        }
        pairs.push((u, v));
    }
    match kind {
        "graph" => Ok(GraphFile::Graph(Graph::from_edges(n, &pairs)?)),
        "digraph" => Ok(GraphFile::Digraph(Digraph::from_arcs(n, &pairs)?)),
        other => Err(parse_err(hline, format!("unknown header {other:?}; expected graph or digraph"))),
    }
}

pub fn write_graph(g: &Graph) -> String {
    let mut s = format!("graph {}\n", g.n());
    for (u, v) in g.edges() {
        let _ = writeln!(s, "{u} {v}");
    }
    s
}

pub fn write_digraph(d: &Digraph) -> String {
    let mut s = format!("digraph {}\n", d.n());
    for (u, v) in d.arcs() {
        let _ = writeln!(s, "{u} {v}");
    }
    s
}

pub fn write_graph_file(f: &GraphFile) -> String {
    match f {
        GraphFile::Graph(g) => write_graph(g),
        GraphFile::Digraph(d) => write_digraph(d),
    }
}

/// Parses a vertex list such as `0-4,7,9-10` (ranges inclusive).
pub fn parse_vertex_list(text: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let bad = || LabError::Domain(format!("bad vertex range {part:?}"));
        match part.split_once('-') {
            Some((a, b)) => {
                let a: usize = a.trim().parse().map_err(|_| bad())?;
                let b: usize = b.trim().parse().map_err(|_| bad())?;
                if a > b {
                    return Err(bad());
                }
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|_| bad())?),
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::DEFAULT_MAX_VERTICES;

    #[test]
    fn round_trip() {
        let g = crate::constructions::petersen_graph();
        let text = write_graph(&g);
        assert_eq!(parse_graph_file(&text, DEFAULT_MAX_VERTICES).unwrap(), GraphFile::Graph(g));
        let d = crate::constructions::haggkvist_graph(3).unwrap();
        let text = write_digraph(&d);
        assert_eq!(parse_graph_file(&text, DEFAULT_MAX_VERTICES).unwrap(), GraphFile::Digraph(d));
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_graph_file("graph 3\n0 1\n1 5\n", 100).unwrap_err();
        assert_eq!(err, LabError::Parse { line: 3, message: "vertex out of range 0..3".into() });
        assert!(parse_graph_file("digraph 2\n1 1\n", 100).is_err());
        assert!(parse_graph_file("graph 200\n", 100).is_err());
        assert!(parse_graph_file("multigraph 2\n", 100).is_err());
        assert!(parse_graph_file("# only a comment\ngraph 2 # two vertices\n0 1\n", 100).is_ok());
    }

    #[test]
    fn vertex_lists() {
        assert_eq!(parse_vertex_list("0-3,7, 5").unwrap(), vec![0, 1, 2, 3, 5, 7]);
        assert!(parse_vertex_list("4-2").is_err());
    }
}
