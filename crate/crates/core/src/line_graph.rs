//! Oriented edges, the oriented line graph, and its adjacency matrix `T`
//! (the non-backtracking or Hashimoto operator).

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::series::bigint_json;

/// The `2m` oriented edges of a graph.
///
/// Symbol `k < m` is edge `k` in input orientation and symbol `m + k` is its
/// reverse, so `inverse(k) = (k + m) mod 2m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientedEdgeAlphabet {
    edge_count: usize,
    initial: Vec<usize>,
    terminal: Vec<usize>,
}

impl OrientedEdgeAlphabet {
    pub fn new(g: &Graph) -> Self {
        let m = g.edge_count();
        let mut initial = Vec::with_capacity(2 * m);
        let mut terminal = Vec::with_capacity(2 * m);
        for &(u, v) in g.edges() {
            initial.push(u);
            terminal.push(v);
        }
        for &(u, v) in g.edges() {
            initial.push(v);
            terminal.push(u);
        }
        Self {
            edge_count: m,
            initial,
            terminal,
        }
    }

    pub fn len(&self) -> usize {
        2 * self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.edge_count == 0
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn initial(&self, e: usize) -> usize {
        self.initial[e]
    }

    pub fn terminal(&self, e: usize) -> usize {
        self.terminal[e]
    }

    pub fn inverse(&self, e: usize) -> usize {
        (e + self.edge_count) % self.len()
    }

    /// Symbol for the `k`-th input edge (1-based), optionally reversed.
    pub fn symbol(&self, k: usize, reversed: bool) -> Result<usize> {
        if k == 0 || k > self.edge_count {
            return Err(Error::UnknownSymbol(k));
        }
        Ok(if reversed {
            k - 1 + self.edge_count
        } else {
            k - 1
        })
    }

    pub fn check(&self, e: usize) -> Result<usize> {
        if e < self.len() {
            Ok(e)
        } else {
            Err(Error::UnknownSymbol(e))
        }
    }

    /// `e` then `f` is a legal non-backtracking step.
    pub fn follows(&self, e: usize, f: usize) -> bool {
        self.terminal[e] == self.initial[f] && self.initial[e] != self.terminal[f]
    }

    pub fn to_json(&self, g: &Graph) -> Value {
        let labels = g.labels();
        let symbols: Vec<Value> = (0..self.len())
            .map(|e| {
                json!({
                    "index": e,
                    "initial": labels[self.initial[e]],
                    "terminal": labels[self.terminal[e]],
                    "inverse": self.inverse(e),
                })
            })
            .collect();
        json!({ "edge_count": self.edge_count, "symbols": symbols })
    }
}

/// Dense 0/1 matrix on oriented edges: `T[e][f] = 1` iff `t(e) = i(f)` and
/// `f` does not reverse `e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HashimotoMatrix {
    rows: Vec<Vec<u8>>,
    successors: Vec<Vec<usize>>,
}

impl HashimotoMatrix {
    pub fn new(alph: &OrientedEdgeAlphabet) -> Self {
        let size = alph.len();
        let mut rows = vec![vec![0u8; size]; size];
        let mut successors = vec![Vec::new(); size];
        for (e, row) in rows.iter_mut().enumerate() {
            for (f, entry) in row.iter_mut().enumerate() {
                if alph.follows(e, f) {
                    *entry = 1;
                    successors[e].push(f);
                }
            }
        }
        Self { rows, successors }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn entry(&self, e: usize, f: usize) -> u8 {
        self.rows[e][f]
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn successors(&self, e: usize) -> &[usize] {
        &self.successors[e]
    }

    pub fn row_sum(&self, e: usize) -> usize {
        self.successors[e].len()
    }

    pub fn col_sum(&self, f: usize) -> usize {
        self.rows.iter().filter(|r| r[f] == 1).count()
    }

    /// Number of arcs of the oriented line graph.
    pub fn arc_count(&self) -> usize {
        self.successors.iter().map(Vec::len).sum()
    }

    /// In-degree plus out-degree summed over all vertices.
    pub fn degree_sum(&self) -> usize {
        let out: usize = (0..self.size()).map(|e| self.row_sum(e)).sum();
        let inn: usize = (0..self.size()).map(|f| self.col_sum(f)).sum();
        out + inn
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (0..n).all(|j| self.rows[i][j] == self.rows[j][i]))
    }

    /// Every symbol reaches every other symbol.
    pub fn is_irreducible(&self) -> bool {
        let n = self.size();
        (0..n).all(|start| {
            let mut seen = vec![false; n];
            let mut stack = vec![start];
            seen[start] = true;
            let mut count = 1;
            while let Some(e) = stack.pop() {
                for &f in &self.successors[e] {
                    if !seen[f] {
                        seen[f] = true;
                        count += 1;
                        stack.push(f);
                    }
                }
            }
            count == n
        })
    }

    /// `tr(T^k)` for `k = 1..=max_power`, by exact repeated multiplication.
    pub fn trace_powers(&self, max_power: usize) -> Vec<BigInt> {
        let n = self.size();
        let mut power: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| BigInt::from(self.rows[i][j])).collect())
            .collect();
        let mut traces = Vec::with_capacity(max_power);
        for k in 1..=max_power {
            if k > 1 {
                power = self.right_multiply(&power);
            }
            traces.push((0..n).map(|i| power[i][i].clone()).sum());
        }
        traces
    }

    // P * T using the sparsity of T
    fn right_multiply(&self, p: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        let n = self.size();
        let mut out = vec![vec![BigInt::zero(); n]; n];
        for (i, row) in p.iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                for &j in &self.successors[k] {
                    out[i][j] += v;
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({ "size": self.size(), "rows": self.rows })
    }
}

/// Twice the sum of `d_u + d_v - 2` over the edges of `g`.
pub fn line_graph_degree_sum_formula(g: &Graph) -> usize {
    2 * g
        .edges()
        .iter()
        .map(|&(u, v)| g.degree(u) + g.degree(v) - 2)
        .sum::<usize>()
}

/// Upper limit on DFS steps for brute-force walk counting.
pub const WALK_GUARD: f64 = 5.0e7;

/// Count closed non-backtracking walks of length `k` (with starting point)
/// by depth-first search over the alphabet; never touches `T`.
pub fn count_closed_walks_bruteforce(alph: &OrientedEdgeAlphabet, k: usize) -> Result<BigInt> {
    assert!(k >= 1, "walk length must be positive");
    let size = alph.len();
    let branching = (0..size)
        .map(|e| (0..size).filter(|&f| alph.follows(e, f)).count())
        .max()
        .unwrap_or(0) as f64;
    let estimate = size as f64 * branching.powi(k as i32 - 1);
    if estimate > WALK_GUARD {
        return Err(Error::GuardExceeded {
            estimate,
            limit: WALK_GUARD,
        });
    }

    fn extend(alph: &OrientedEdgeAlphabet, start: usize, last: usize, remaining: usize) -> u64 {
        if remaining == 0 {
            return u64::from(alph.follows(last, start));
        }
        (0..alph.len())
            .filter(|&f| alph.follows(last, f))
            .map(|f| extend(alph, start, f, remaining - 1))
            .sum()
    }

    let total: u64 = (0..size).map(|s| extend(alph, s, s, k - 1)).sum();
    Ok(BigInt::from(total))
}

/// Dense symbol-table and matrix export.
pub fn export_json(g: &Graph, alph: &OrientedEdgeAlphabet, t: &HashimotoMatrix) -> Value {
    let traces: Vec<Value> = t.trace_powers(6).iter().map(bigint_json).collect();
    json!({
        "alphabet": alph.to_json(g),
        "matrix": t.to_json(),
        "traces": traces,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::catalog::*;

    fn build(g: &Graph) -> (OrientedEdgeAlphabet, HashimotoMatrix) {
        let a = OrientedEdgeAlphabet::new(g);
        let t = HashimotoMatrix::new(&a);
        (a, t)
    }

    #[test]
    fn alphabet_sizes_and_inverses() {
        let (a, _) = build(&complete(4));
        assert_eq!(a.len(), 12);
        let b = billiard();
        let (a, _) = build(&b);
        assert_eq!(a.len(), 16);
        let e1 = a.symbol(1, false).unwrap();
        let e9 = a.symbol(1, true).unwrap();
        assert_eq!(e9, 8);
        let label = |v: usize| b.labels()[v].as_str();
        assert_eq!((label(a.initial(e1)), label(a.terminal(e1))), ("1", "2"));
        assert_eq!((label(a.initial(e9)), label(a.terminal(e9))), ("2", "1"));
        for e in 0..a.len() {
            assert_eq!(a.inverse(a.inverse(e)), e);
            assert_eq!(a.initial(a.inverse(e)), a.terminal(e));
        }
    }

    #[test]
    fn k4_row_sums() {
        let (_, t) = build(&complete(4));
        assert!((0..t.size()).all(|e| t.row_sum(e) == 2));
    }

    #[test]
    fn billiard_entries() {
        let (_, t) = build(&billiard());
        assert_eq!(t.arc_count(), 36);
        assert!((0..t.size()).all(|e| matches!(t.row_sum(e), 2 | 3)));
    }

    #[test]
    fn structural_invariants() {
        for g in [
            complete(4),
            complete(5),
            billiard(),
            complete_bipartite(2, 3),
            complete_bipartite(3, 3),
        ] {
            let (a, t) = build(&g);
            for e in 0..t.size() {
                assert_eq!(t.entry(e, e), 0);
                assert_eq!(t.entry(e, a.inverse(e)), 0);
                assert_eq!(t.row_sum(e), g.degree(a.terminal(e)) - 1);
                assert_eq!(t.col_sum(e), g.degree(a.initial(e)) - 1);
            }
            assert!(t.is_irreducible());
            assert!(!t.is_symmetric());
            assert_eq!(t.degree_sum(), line_graph_degree_sum_formula(&g));
        }
    }

    #[test]
    fn degree_sum_formula_examples() {
        assert_eq!(line_graph_degree_sum_formula(&complete(4)), 48);
        assert_eq!(line_graph_degree_sum_formula(&billiard()), 72);
        assert_eq!(line_graph_degree_sum_formula(&complete_bipartite(2, 3)), 36);
    }

    #[test]
    fn low_traces_vanish() {
        for g in [complete(4), billiard(), complete_bipartite(2, 3)] {
            let (_, t) = build(&g);
            let tr = t.trace_powers(2);
            assert!(tr[0].is_zero());
            assert!(tr[1].is_zero());
        }
    }

    #[test]
    fn k4_cubic_trace() {
        let (a, t) = build(&complete(4));
        assert_eq!(t.trace_powers(3)[2], BigInt::from(24));
        assert_eq!(
            count_closed_walks_bruteforce(&a, 3).unwrap(),
            BigInt::from(24)
        );
    }

    #[test]
    fn bruteforce_small_cases() {
        let (a, _) = build(&billiard());
        assert!(count_closed_walks_bruteforce(&a, 2).unwrap().is_zero());
        let (a, _) = build(&complete_bipartite(2, 3));
        assert!(count_closed_walks_bruteforce(&a, 3).unwrap().is_zero());
    }

    #[test]
    fn bruteforce_matches_traces() {
        for g in [complete(4), billiard(), complete_bipartite(2, 3)] {
            let (a, t) = build(&g);
            let tr = t.trace_powers(6);
            for k in 1..=6 {
                assert_eq!(
                    count_closed_walks_bruteforce(&a, k).unwrap(),
                    tr[k - 1],
                    "k={k}"
                );
            }
        }
    }

    #[test]
    fn bruteforce_guard() {
        let (a, _) = build(&complete(8));
        assert!(matches!(
            count_closed_walks_bruteforce(&a, 30),
            Err(Error::GuardExceeded { .. })
        ));
    }

    #[test]
    fn export_has_rows() {
        let g = complete(4);
        let (a, t) = build(&g);
        let v = export_json(&g, &a, &t);
        assert_eq!(v["matrix"]["rows"].as_array().unwrap().len(), 12);
        assert_eq!(v["alphabet"]["symbols"][0]["inverse"], 6);
    }
}
