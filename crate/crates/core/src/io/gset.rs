//! The rudy / G-set edge-list format.
//!
//! ```text
//! <n_vertices> <n_edges>
//! <u> <v> [<w>]        (n_edges lines, 1-based vertices, integer weight, default 1)
//! ```
//!
//! Blank lines and lines starting with `#` or `%` are ignored.

use std::collections::HashSet;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::model::IsingProblem;

/// An edge with 1-based endpoints as written in the file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GsetEdge {
    pub u: usize,
    pub v: usize,
    pub weight: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GsetGraph {
    pub n_vertices: usize,
    pub edges: Vec<GsetEdge>,
}

impl GsetGraph {
    /// Sum of all edge weights.
    pub fn total_weight(&self) -> i64 {
        self.edges.iter().map(|e| e.weight).sum()
    }
}

fn parse_int<T: std::str::FromStr>(token: &str, line: usize, what: &str) -> Result<T> {
    token.parse().map_err(|_| Error::Parse {
        line,
        message: format!("expected integer {what}, found {token:?}"),
    })
}

pub fn parse_gset<R: BufRead>(reader: R) -> Result<GsetGraph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut seen = HashSet::new();

    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::Parse {
            line: lineno,
            message: e.to_string(),
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();

        let Some((n, m)) = header else {
            if tokens.len() != 2 {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!(
                        "header must hold two integers (vertices, edges), found {} tokens",
                        tokens.len()
                    ),
                });
            }
            let n: usize = parse_int(tokens[0], lineno, "vertex count")?;
            let m: usize = parse_int(tokens[1], lineno, "edge count")?;
            if n == 0 {
                return Err(Error::Structure("graph has no vertices".into()));
            }
            header = Some((n, m));
            edges.reserve(m);
            continue;
        };

        if !(2..=3).contains(&tokens.len()) {
            return Err(Error::Parse {
                line: lineno,
                message: format!("edge line needs 2 or 3 integers, found {}", tokens.len()),
            });
        }
        let u: usize = parse_int(tokens[0], lineno, "vertex")?;
        let v: usize = parse_int(tokens[1], lineno, "vertex")?;
        let weight: i64 = match tokens.get(2) {
            Some(t) => parse_int(t, lineno, "weight")?,
            None => 1,
        };
        if edges.len() == m {
            return Err(Error::Structure(format!(
                "header declares {m} edges but line {lineno} holds another"
            )));
        }
        for x in [u, v] {
            if x == 0 || x > n {
                return Err(Error::Structure(format!(
                    "line {lineno}: vertex {x} outside 1..={n}"
                )));
            }
        }
        if u == v {
            return Err(Error::Structure(format!(
                "line {lineno}: self loop on vertex {u}"
            )));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::Structure(format!(
                "line {lineno}: duplicate edge ({u}, {v})"
            )));
        }
        edges.push(GsetEdge { u, v, weight });
    }

    let Some((n_vertices, m)) = header else {
        return Err(Error::Structure("missing header line".into()));
    };
    if edges.len() != m {
        return Err(Error::Structure(format!(
            "header declares {m} edges, found {}",
            edges.len()
        )));
    }
    Ok(GsetGraph { n_vertices, edges })
}

pub fn parse_gset_str(text: &str) -> Result<GsetGraph> {
    parse_gset(text.as_bytes())
}

pub fn write_gset<W: Write>(graph: &GsetGraph, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{} {}", graph.n_vertices, graph.edges.len())?;
    for e in &graph.edges {
        writeln!(out, "{} {} {}", e.u, e.v, e.weight)?;
    }
    Ok(())
}

/// Couplings `J_uv = J_vu = w` with zero field; the cut value of a spin
/// configuration equals the weight of the graph cut it induces.
pub fn gset_to_problem(graph: &GsetGraph) -> Result<IsingProblem> {
    let edges: Vec<(usize, usize, f64)> = graph
        .edges
        .iter()
        .map(|e| (e.u - 1, e.v - 1, e.weight as f64))
        .collect();
    IsingProblem::from_edges(graph.n_vertices, &edges)
}

/// Edge list of an integer-valued, zero-field problem.
pub fn problem_to_gset(problem: &IsingProblem) -> Result<GsetGraph> {
    if problem.has_field() || !problem.is_integer_valued() {
        return Err(Error::Structure(
            "only integer couplings without a field can be written as a G-set graph".into(),
        ));
    }
    let mut edges = Vec::new();
    for i in 0..problem.n() {
        for (j, w) in problem.neighbors(i) {
            if j > i {
                edges.push(GsetEdge {
                    u: i + 1,
                    v: j + 1,
                    weight: w as i64,
                });
            }
        }
    }
    Ok(GsetGraph {
        n_vertices: problem.n(),
        edges,
    })
}
