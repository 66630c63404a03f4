//! Undirected simple graphs with labeled edges.
//!
//! Edges carry a label given by their position in the edge list; the clause
//! for label `α` is "cut edge `α`". Pairs are stored with `u < v`. A graph
//! built through [`Graph::new`] is canonical (edge list sorted
//! lexicographically); [`permute_edge_labels`](Graph::permute_edge_labels)
//! and the edge-list text parser preserve the order they are given, so label
//! randomization is an explicit, testable step on top of the canonical form.

mod census;
mod gen;
mod maxcut;

pub use census::{census_p1, classify_edge_p1, neighborhood, qaoa_tree_size, P1Census, P1EdgeType};
pub use gen::{erdos_renyi, regular, regular_with_maxcut};
pub use maxcut::{brute_force_maxcut, CutResult};

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// An undirected simple graph with an indexed edge list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(u32, u32)>,
    adjacency: Vec<Vec<u32>>,
}

impl Graph {
    /// Builds a graph in canonical form: each pair normalized to `u < v` and
    /// the edge list sorted lexicographically.
    pub fn new(n: usize, edges: Vec<(u32, u32)>) -> Result<Self> {
        let mut edges = normalize_pairs(n, edges)?;
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter("duplicate edge".into()));
        }
        Ok(Self::from_checked(n, edges))
    }

    /// Builds a graph keeping the given edge-list order (labels matter).
    /// Pairs are still normalized to `u < v` and duplicates rejected.
    pub fn with_edge_order(n: usize, edges: Vec<(u32, u32)>) -> Result<Self> {
        let edges = normalize_pairs(n, edges)?;
        let mut seen = HashSet::with_capacity(edges.len());
        if !edges.iter().all(|e| seen.insert(*e)) {
            return Err(Error::InvalidParameter("duplicate edge".into()));
        }
        Ok(Self::from_checked(n, edges))
    }

    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Self::from_checked(n, Vec::new())
    }

    fn from_checked(n: usize, edges: Vec<(u32, u32)>) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adjacency[u as usize].push(v);
            adjacency[v as usize].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Self { n, edges, adjacency }
    }

    /// Vertex count.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Edge count.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edge list in label order; every pair satisfies `u < v`.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// Edge with label `index`.
    pub fn edge(&self, index: usize) -> Result<(u32, u32)> {
        self.edges.get(index).copied().ok_or_else(|| {
            Error::InvalidParameter(format!(
                "edge index {index} out of range (m = {})",
                self.m()
            ))
        })
    }

    /// Neighbors of `v`, ascending.
    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adjacency[v as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adjacency[v as usize].len()
    }

    /// True when every vertex has degree exactly `d`.
    pub fn is_regular(&self, d: usize) -> bool {
        self.adjacency.iter().all(|list| list.len() == d)
    }

    /// Same edge set with the labels (list positions) permuted uniformly.
    /// Vertex labels are untouched.
    pub fn permute_edge_labels<R: Rng>(&self, rng: &mut R) -> Self {
        let mut edges = self.edges.clone();
        edges.shuffle(rng);
        Self::from_checked(self.n, edges)
    }

    /// Induced subgraph on the largest connected component, vertices
    /// relabeled `0..n'` preserving relative order. Ties between equally
    /// large components go to the one containing the lowest vertex index.
    pub fn largest_component(&self) -> Self {
        if self.n == 0 {
            return Self::empty(0);
        }
        let mut component = vec![usize::MAX; self.n];
        let mut sizes = Vec::new();
        for start in 0..self.n {
            if component[start] != usize::MAX {
                continue;
            }
            let id = sizes.len();
            let mut size = 0usize;
            let mut queue = vec![start as u32];
            component[start] = id;
            while let Some(v) = queue.pop() {
                size += 1;
                for &w in self.neighbors(v) {
                    if component[w as usize] == usize::MAX {
                        component[w as usize] = id;
                        queue.push(w);
                    }
                }
            }
            sizes.push(size);
        }
        // Components are discovered in order of their lowest vertex, so the
        // first maximum implements the tie-break.
        let best = sizes
            .iter()
            .enumerate()
            .max_by_key(|&(id, &size)| (size, std::cmp::Reverse(id)))
            .map(|(id, _)| id)
            .unwrap();
        let keep: Vec<u32> = (0..self.n as u32)
            .filter(|&v| component[v as usize] == best)
            .collect();
        self.induced(&keep)
    }

    /// Induced subgraph on `keep` (ascending original labels); vertex `i` of
    /// the result is `keep[i]`. Edge order follows the original labels.
    pub(crate) fn induced(&self, keep: &[u32]) -> Self {
        debug_assert!(keep.windows(2).all(|w| w[0] < w[1]));
        let mut relabel = vec![u32::MAX; self.n];
        for (new, &old) in keep.iter().enumerate() {
            relabel[old as usize] = new as u32;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| relabel[u as usize] != u32::MAX && relabel[v as usize] != u32::MAX)
            .map(|&(u, v)| (relabel[u as usize], relabel[v as usize]))
            .collect();
        Self::from_checked(keep.len(), edges)
    }

    /// Serializes to the edge-list text format: first line `n m`, then one
    /// `u v` line per edge in label order. Round-trips bit-exactly.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(8 + 8 * self.m());
        let _ = writeln!(out, "{} {}", self.n, self.m());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Parses the edge-list text format, preserving edge label order.
    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty edge-list document".into()))?;
        let mut fields = header.split_whitespace();
        let n: usize = parse_field(fields.next(), "vertex count")?;
        let m: usize = parse_field(fields.next(), "edge count")?;
        if fields.next().is_some() {
            return Err(Error::Parse("trailing fields on header line".into()));
        }
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("expected {m} edge lines")))?;
            let mut fields = line.split_whitespace();
            let u: u32 = parse_field(fields.next(), "edge endpoint")?;
            let v: u32 = parse_field(fields.next(), "edge endpoint")?;
            if fields.next().is_some() {
                return Err(Error::Parse("trailing fields on edge line".into()));
            }
            if u >= v {
                return Err(Error::Parse(format!("edge {u} {v} not in u < v form")));
            }
            edges.push((u, v));
        }
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(Error::Parse("trailing content after edge list".into()));
        }
        Self::with_edge_order(n, edges)
    }

    pub fn write_edge_list(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_edge_list())?;
        Ok(())
    }

    pub fn read_edge_list(path: &Path) -> Result<Self> {
        Self::from_edge_list(&std::fs::read_to_string(path)?)
    }

    /// Complete graph on `n` vertices.
    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                edges.push((u, v));
            }
        }
        Self::from_checked(n, edges)
    }

    /// Cycle graph on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let edges = (0..n as u32)
            .map(|i| {
                let j = (i + 1) % n as u32;
                (i.min(j), i.max(j))
            })
            .collect();
        Self::new(n, edges).unwrap()
    }

    /// Path graph on `n` vertices.
    pub fn path(n: usize) -> Self {
        let edges = (1..n as u32).map(|i| (i - 1, i)).collect();
        Self::from_checked(n, edges)
    }

    /// The Petersen graph: outer 5-cycle, spokes, inner pentagram.
    pub fn petersen() -> Self {
        let mut edges = Vec::with_capacity(15);
        for i in 0..5u32 {
            let j = (i + 1) % 5;
            edges.push((i.min(j), i.max(j)));
            edges.push((i, i + 5));
            let k = 5 + (i + 2) % 5;
            edges.push(((i + 5).min(k), (i + 5).max(k)));
        }
        Self::new(10, edges).unwrap()
    }

    /// The triangular prism: two triangles joined by a perfect matching.
    pub fn triangular_prism() -> Self {
        Self::new(
            6,
            vec![(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (0, 3), (1, 4), (2, 5)],
        )
        .unwrap()
    }
}

fn normalize_pairs(n: usize, edges: Vec<(u32, u32)>) -> Result<Vec<(u32, u32)>> {
    edges
        .into_iter()
        .map(|(a, b)| {
            if a == b {
                return Err(Error::InvalidParameter(format!("self-loop at vertex {a}")));
            }
            let (u, v) = (a.min(b), a.max(b));
            if v as usize >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge ({a}, {b}) out of range for n = {n}"
                )));
            }
            Ok((u, v))
        })
        .collect()
}

fn parse_field<T: std::str::FromStr>(field: Option<&str>, what: &str) -> Result<T> {
    field
        .ok_or_else(|| Error::Parse(format!("missing {what}")))?
        .parse()
        .map_err(|_| Error::Parse(format!("malformed {what}")))
}
