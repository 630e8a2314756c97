//! Graph-state stabilizers `K_a = X_a ∏_{b ∈ N(a)} Z_b`.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString};

/// Undirected simple graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    /// Builds a graph from an edge list. Each pair is one undirected edge;
    /// duplicates and reversed duplicates collapse.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoQubits);
        }
        let mut set = BTreeSet::new();
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge {a}-{b} references a vertex >= {n}"
                )));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop on vertex {a}")));
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(Self { n, edges: set })
    }

    pub fn path(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::new(n, &edges)
    }

    /// `width × height` grid; vertex `(row, col)` has index `row * width + col`.
    pub fn grid(width: usize, height: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for r in 0..height {
            for c in 0..width {
                let v = r * width + c;
                if c + 1 < width {
                    edges.push((v, v + 1));
                }
                if r + 1 < height {
                    edges.push((v, v + width));
                }
            }
        }
        Self::new(width * height, &edges)
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| match (a == v, b == v) {
                (true, _) => Some(b),
                (_, true) => Some(a),
                _ => None,
            })
            .collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors(v).len()
    }
}

/// One generator per vertex, all with phase `+1`.
pub fn graph_state_generators(graph: &Graph) -> Vec<PauliString> {
    (0..graph.n)
        .map(|a| {
            let mut k = PauliString::single(graph.n, a, Pauli::X);
            for b in graph.neighbors(a) {
                k.set(b, Pauli::Z);
            }
            k
        })
        .collect()
}
