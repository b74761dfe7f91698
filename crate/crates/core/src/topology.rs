//! Interaction graphs.
//!
//! Nodes are labeled `1..=n` as in the formation literature. Internally the
//! weights are stored densely by zero-based index; a `None` entry means the
//! ordered pair is not an edge. Zero-weight edges of the rotating graph are
//! kept as `Some(0.0)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Directed weighted graph on nodes `1..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedTopology {
    n: usize,
    weights: Vec<Option<f64>>,
}

/// Serializable description of a topology.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TopologySpec {
    Complete { n: usize },
    RotatingTetrahedron { k: usize, p: u8 },
}

impl TopologySpec {
    pub fn build(&self) -> Result<WeightedTopology> {
        match *self {
            TopologySpec::Complete { n } => complete_graph(n),
            TopologySpec::RotatingTetrahedron { k, p } => rotating_tetrahedron_graph(k, p),
        }
    }
}

impl WeightedTopology {
    /// Builds a topology from `(i, j, w)` triples with one-based labels.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        if n < 2 {
            return Err(Error::Topology(format!("need at least 2 nodes, got {n}")));
        }
        let mut weights = vec![None; n * n];
        for (i, j, w) in edges {
            check_label(i, n)?;
            check_label(j, n)?;
            if i == j {
                return Err(Error::Topology(format!("self-edge at node {i}")));
            }
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::Topology(format!("weight W({i},{j}) = {w} must be finite and nonnegative")));
            }
            weights[(i - 1) * n + (j - 1)] = Some(w);
        }
        Ok(Self { n, weights })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `W(i, j)` for one-based labels, `None` when `(i, j)` is not an edge.
    pub fn weight(&self, i: usize, j: usize) -> Option<f64> {
        if i == 0 || j == 0 || i > self.n || j > self.n {
            return None;
        }
        self.weights[(i - 1) * self.n + (j - 1)]
    }

    /// `W` by zero-based index.
    #[inline]
    pub(crate) fn weight_idx(&self, i: usize, j: usize) -> Option<f64> {
        self.weights[i * self.n + j]
    }

    /// Nodes `j` with an edge `(i, j)`, i.e. those agent `i` listens to.
    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        (1..=self.n).filter(|&j| self.weight(i, j).is_some()).collect()
    }

    /// All edges as `(i, j, w)` with one-based labels, in row-major order.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for i in 1..=self.n {
            for j in 1..=self.n {
                if let Some(w) = self.weight(i, j) {
                    out.push((i, j, w));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.weights.iter().filter(|w| w.is_some()).count()
    }

    /// Unordered pairs `{i, j}` (zero-based, `i < j`) joined by an edge in either direction.
    pub fn connected_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.weight_idx(i, j).is_some() || self.weight_idx(j, i).is_some() {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// True when every edge has all weights equal to 1.
    pub fn is_unit_weighted(&self) -> bool {
        self.weights.iter().flatten().all(|&w| w == 1.0)
    }

    /// True when `W(i, j) = W(j, i)` for every ordered pair (including absence).
    pub fn is_weight_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.weight_idx(i, j) == self.weight_idx(j, i)))
    }

    /// True when every off-diagonal pair is an edge.
    pub fn is_complete(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.weight_idx(i, j).is_some()))
    }
}

fn check_label(i: usize, n: usize) -> Result<()> {
    if i == 0 || i > n {
        return Err(Error::Topology(format!("node {i} outside 1..={n}")));
    }
    Ok(())
}

/// Complete graph with unit weights.
pub fn complete_graph(n: usize) -> Result<WeightedTopology> {
    if n < 2 {
        return Err(Error::Topology(format!("complete graph needs n >= 2, got {n}")));
    }
    let edges = (1..=n).flat_map(|i| (1..=n).filter(move |&j| j != i).map(move |j| (i, j, 1.0)));
    WeightedTopology::from_edges(n, edges)
}

/// Maps any integer into `1..=n` by `((x - 1) mod n) + 1`.
fn wrap_label(x: usize, n: usize) -> usize {
    (x - 1) % n + 1
}

/// `Suc^k(i)`: the next node after `i`, cyclically, skipping `k`.
pub fn successor_skipping(i: usize, k: usize, n: usize) -> Result<usize> {
    check_skip_args(i, k, n)?;
    let next = wrap_label(i + 1, n);
    Ok(if next == k { wrap_label(i + 2, n) } else { next })
}

/// `Pre^k(i)`: the unique `j ≠ k` with `Suc^k(j) = i`.
pub fn predecessor_skipping(i: usize, k: usize, n: usize) -> Result<usize> {
    check_skip_args(i, k, n)?;
    // n - 1 is -1 modulo n
    let prev = wrap_label(i + n - 1, n);
    Ok(if prev == k { wrap_label(i + n - 2, n) } else { prev })
}

fn check_skip_args(i: usize, k: usize, n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::Topology(format!("skipping operators need n >= 3, got {n}")));
    }
    check_label(i, n)?;
    check_label(k, n)?;
    if i == k {
        return Err(Error::Topology(format!("node {i} equals the skipped node")));
    }
    Ok(())
}

/// Four-node weighted graph producing a tetrahedron spinning about agent `k`.
///
/// `W(i, j) = 0.5` when `k ∈ {i, j}`, `p` when `j = Suc^k(i)` and `1 - p`
/// when `j = Pre^k(i)`.
pub fn rotating_tetrahedron_graph(k: usize, p: u8) -> Result<WeightedTopology> {
    const N: usize = 4;
    if !(1..=N).contains(&k) {
        return Err(Error::Topology(format!("axis node k = {k} outside 1..=4")));
    }
    if p > 1 {
        return Err(Error::Topology(format!("direction p = {p} must be 0 or 1")));
    }
    let p = f64::from(p);
    let mut edges = Vec::with_capacity(N * (N - 1));
    for i in 1..=N {
        for j in 1..=N {
            if i == j {
                continue;
            }
            let w = if i == k || j == k {
                0.5
            } else if j == successor_skipping(i, k, N)? {
                p
            } else if j == predecessor_skipping(i, k, N)? {
                1.0 - p
            } else {
                unreachable!("on three nodes every other node is a successor or predecessor")
            };
            edges.push((i, j, w));
        }
    }
    WeightedTopology::from_edges(N, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph_shape() {
        let g = complete_graph(4).unwrap();
        assert_eq!(g.edge_count(), 12);
        assert!(g.edges().iter().all(|&(_, _, w)| w == 1.0));
        assert_eq!(g.neighbors(1), vec![2, 3, 4]);
        assert!(g.is_weight_symmetric());

        let g2 = complete_graph(2).unwrap();
        let pairs: Vec<_> = g2.edges().iter().map(|&(i, j, _)| (i, j)).collect();
        assert_eq!(pairs, vec![(1, 2), (2, 1)]);
        assert!(complete_graph(1).is_err());
    }

    #[test]
    fn skipping_operators() {
        assert_eq!(successor_skipping(4, 1, 4).unwrap(), 2);
        assert_eq!(successor_skipping(2, 1, 4).unwrap(), 3);
        assert_eq!(predecessor_skipping(2, 1, 4).unwrap(), 4);
        assert!(successor_skipping(1, 1, 4).is_err());
        assert!(predecessor_skipping(3, 3, 4).is_err());
        assert!(successor_skipping(5, 1, 4).is_err());
    }

    #[test]
    fn skipping_operators_are_inverse_bijections() {
        for n in 3..8 {
            for k in 1..=n {
                let mut seen = vec![false; n + 1];
                for i in (1..=n).filter(|&i| i != k) {
                    let s = successor_skipping(i, k, n).unwrap();
                    assert_ne!(s, k);
                    assert!(!seen[s]);
                    seen[s] = true;
                    assert_eq!(predecessor_skipping(s, k, n).unwrap(), i);
                    assert_eq!(successor_skipping(predecessor_skipping(i, k, n).unwrap(), k, n).unwrap(), i);
                }
            }
        }
    }

    #[test]
    fn rotating_graph_k1_p1() {
        let g = rotating_tetrahedron_graph(1, 1).unwrap();
        assert_eq!(g.weight(1, 2), Some(0.5));
        assert_eq!(g.weight(2, 1), Some(0.5));
        assert_eq!(g.weight(2, 3), Some(1.0));
        assert_eq!(g.weight(3, 2), Some(0.0));
        assert_eq!(g.weight(3, 4), Some(1.0));
        assert_eq!(g.weight(4, 2), Some(1.0));
        assert_eq!(g.weight(2, 4), Some(0.0));
        assert!(!g.is_weight_symmetric());
    }

    #[test]
    fn rotating_graph_k3_p0() {
        let g = rotating_tetrahedron_graph(3, 0).unwrap();
        assert_eq!(g.weight(2, 4), Some(0.0));
        assert_eq!(g.weight(4, 2), Some(1.0));
        assert_eq!(g.weight(3, 1), Some(0.5));
    }

    #[test]
    fn rotating_graph_invariants() {
        for k in 1..=4 {
            for p in 0..=1u8 {
                let g = rotating_tetrahedron_graph(k, p).unwrap();
                assert!(g.is_complete());
                let others: Vec<usize> = (1..=4).filter(|&i| i != k).collect();
                for i in 1..=4 {
                    for j in (1..=4).filter(|&j| j != i) {
                        let w = g.weight(i, j).unwrap();
                        assert!([0.0, 0.5, 1.0].contains(&w));
                        assert_eq!(w + g.weight(j, i).unwrap(), 1.0);
                    }
                }
                // zero-weight and unit-weight edges each form a directed 3-cycle on V \ {k}
                for target in [0.0, 1.0] {
                    let cyc: Vec<(usize, usize)> = g
                        .edges()
                        .into_iter()
                        .filter(|&(i, j, w)| w == target && i != k && j != k)
                        .map(|(i, j, _)| (i, j))
                        .collect();
                    assert_eq!(cyc.len(), 3);
                    for &v in &others {
                        assert_eq!(cyc.iter().filter(|e| e.0 == v).count(), 1);
                        assert_eq!(cyc.iter().filter(|e| e.1 == v).count(), 1);
                    }
                    let mut cur = others[0];
                    for _ in 0..3 {
                        cur = cyc.iter().find(|e| e.0 == cur).unwrap().1;
                    }
                    assert_eq!(cur, others[0]);
                }
            }
        }
        assert!(rotating_tetrahedron_graph(0, 1).is_err());
        assert!(rotating_tetrahedron_graph(5, 1).is_err());
        assert!(rotating_tetrahedron_graph(1, 2).is_err());
    }

    #[test]
    fn spec_roundtrip_through_json() {
        let spec: TopologySpec = serde_json::from_str(r#"{"kind":"rotating_tetrahedron","k":1,"p":1}"#).unwrap();
        assert_eq!(spec.build().unwrap(), rotating_tetrahedron_graph(1, 1).unwrap());
        let spec: TopologySpec = serde_json::from_str(r#"{"kind":"complete","n":4}"#).unwrap();
        assert_eq!(spec.build().unwrap(), complete_graph(4).unwrap());
    }
}
