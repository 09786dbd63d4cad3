//! Finite simple undirected graphs and the standing hypotheses every
//! computation in this crate relies on: connected, minimum degree at least
//! two, and not a cycle.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};

/// A finite simple undirected graph with dense vertex indices.
///
/// Vertex labels are opaque strings; index `i` is the `i`-th label in
/// first-appearance order. Edges keep their input order, which fixes the
/// orientation alphabet built from them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    edges: Vec<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
    duplicates_dropped: usize,
}

/// Minimum and maximum of `d_u + d_v` over the edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DegreeStats {
    pub min_endpoint_sum: usize,
    pub max_endpoint_sum: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesisCheck {
    pub hypothesis: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub pass: bool,
    pub checks: Vec<HypothesisCheck>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn failures(&self) -> impl Iterator<Item = &HypothesisCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// Parse a whitespace-separated edge list, one `u v` pair per line.
///
/// Blank lines and lines starting with `#` are skipped. Duplicate edges
/// (in either orientation) are dropped and counted.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut pairs: Vec<(String, String)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(Error::MalformedLine {
                line: lineno + 1,
                found: tokens.len(),
            });
        }
        if tokens[0] == tokens[1] {
            return Err(Error::SelfLoop {
                line: lineno + 1,
                vertex: tokens[0].to_string(),
            });
        }
        pairs.push((tokens[0].to_string(), tokens[1].to_string()));
    }
    Graph::from_labeled_edges(pairs.iter().map(|(u, v)| (u.as_str(), v.as_str())))
}

impl Graph {
    pub fn from_labeled_edges<'a, I>(edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut labels = Vec::new();
        let mut dense = Vec::new();
        for (u, v) in edges {
            let mut id = |s: &str| {
                *index.entry(s.to_string()).or_insert_with(|| {
                    labels.push(s.to_string());
                    labels.len() - 1
                })
            };
            let a = id(u);
            let b = id(v);
            dense.push((a, b));
        }
        let n = labels.len();
        let mut g = Self::build(n, &dense)?;
        g.labels = labels;
        Ok(g)
    }

    /// Build from dense index pairs; labels are `"0".."n-1"`.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::build(n, edges)?;
        g.labels = (0..n).map(|i| i.to_string()).collect();
        Ok(g)
    }

    fn build(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::EmptyEdgeSet);
        }
        let mut seen = HashSet::new();
        let mut kept = Vec::with_capacity(edges.len());
        let mut neighbors = vec![Vec::new(); n];
        let mut duplicates_dropped = 0;
        for (line, &(u, v)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) references a vertex outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::SelfLoop {
                    line: line + 1,
                    vertex: u.to_string(),
                });
            }
            if !seen.insert((u.min(v), u.max(v))) {
                duplicates_dropped += 1;
                continue;
            }
            kept.push((u, v));
            neighbors[u].push(v);
            neighbors[v].push(u);
        }
        Ok(Self {
            labels: Vec::new(),
            edges: kept,
            neighbors,
            duplicates_dropped,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.neighbors.iter().map(Vec::len).collect()
    }

    pub fn duplicates_dropped(&self) -> usize {
        self.duplicates_dropped
    }

    /// Dense 0/1 adjacency matrix.
    pub fn adjacency(&self) -> Vec<Vec<i64>> {
        let n = self.vertex_count();
        let mut a = vec![vec![0; n]; n];
        for &(u, v) in &self.edges {
            a[u][v] = 1;
            a[v][u] = 1;
        }
        a
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in &self.neighbors[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    }

    /// Re-serialize as an edge list using the original labels.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for &(u, v) in &self.edges {
            out.push_str(&self.labels[u]);
            out.push(' ');
            out.push_str(&self.labels[v]);
            out.push('\n');
        }
        out
    }

    pub fn validate(&self) -> ValidationReport {
        let degrees = self.degrees();
        let mut checks = Vec::new();

        checks.push(HypothesisCheck {
            hypothesis: "simple".into(),
            pass: true,
            detail: "no self-loops; parallel edges merged".into(),
        });

        let connected = self.is_connected();
        checks.push(HypothesisCheck {
            hypothesis: "connected".into(),
            pass: connected,
            detail: if connected {
                "single component".into()
            } else {
                "graph is disconnected".into()
            },
        });

        let low: Vec<&str> = degrees
            .iter()
            .enumerate()
            .filter(|(_, &d)| d < 2)
            .map(|(i, _)| self.labels[i].as_str())
            .collect();
        checks.push(HypothesisCheck {
            hypothesis: "minimum degree >= 2".into(),
            pass: low.is_empty(),
            detail: if low.is_empty() {
                "every vertex has degree >= 2".into()
            } else {
                format!("vertex of degree one: {}", low.join(", "))
            },
        });

        let max_degree = degrees.iter().copied().max().unwrap_or(0);
        checks.push(HypothesisCheck {
            hypothesis: "not a cycle graph".into(),
            pass: max_degree >= 3,
            detail: if max_degree >= 3 {
                format!("maximum degree {max_degree}")
            } else {
                "is a cycle graph (maximum degree < 3)".into()
            },
        });

        let mut warnings = Vec::new();
        if self.duplicates_dropped > 0 {
            warnings.push(format!(
                "{} duplicate edge record(s) dropped",
                self.duplicates_dropped
            ));
        }
        ValidationReport {
            pass: checks.iter().all(|c| c.pass),
            checks,
            warnings,
        }
    }

    /// Validate and turn failures into an error.
    pub fn require_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.pass {
            return Ok(());
        }
        let msg: Vec<String> = report
            .failures()
            .map(|c| format!("{}: {}", c.hypothesis, c.detail))
            .collect();
        Err(Error::InvalidGraph(msg.join("; ")))
    }

    pub fn degree_stats(&self) -> DegreeStats {
        let sums = self
            .edges
            .iter()
            .map(|&(u, v)| self.degree(u) + self.degree(v));
        let (mut lo, mut hi) = (usize::MAX, 0);
        for s in sums {
            lo = lo.min(s);
            hi = hi.max(s);
        }
        DegreeStats {
            min_endpoint_sum: lo,
            max_endpoint_sum: hi,
        }
    }
}

/// Named graphs used throughout the tests and the CLI demo.
pub mod catalog {
    use super::*;

    pub const BILLIARD_EDGE_LIST: &str = "1 2\n2 4\n4 3\n3 1\n1 5\n2 5\n3 5\n4 5\n";

    /// A 4-cycle with a hub vertex joined to every corner.
    pub fn billiard() -> Graph {
        parse_edge_list(BILLIARD_EDGE_LIST).expect("embedded graph parses")
    }

    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                edges.push((u, v));
            }
        }
        Graph::from_edges(n, &edges).expect("complete graph")
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..a {
            for v in 0..b {
                edges.push((u, a + v));
            }
        }
        Graph::from_edges(a + b, &edges).expect("complete bipartite graph")
    }

    pub fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).expect("cycle graph")
    }
}
