//! Depth-1 edge neighborhood classification on 3-regular graphs, and
//! edge-centered neighborhood extraction at arbitrary depth.
//!
//! At depth 1 the conjugation around an edge only involves edges incident to
//! its endpoints, so on a 3-regular graph the local picture of an edge is
//! fixed by how many neighbors its endpoints share: 2 (4-vertex picture),
//! 1 (5-vertex picture), or 0 (6-vertex tree picture). Edges between the
//! neighbors themselves do not enter at depth 1.

use std::collections::VecDeque;

use super::Graph;
use crate::error::{Error, Result};

/// Local class of an edge of a 3-regular graph at depth 1, by the number of
/// neighbors shared between its endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum P1EdgeType {
    SharedTwo,
    SharedOne,
    SharedZero,
}

impl P1EdgeType {
    pub fn shared_neighbors(self) -> usize {
        match self {
            P1EdgeType::SharedTwo => 2,
            P1EdgeType::SharedOne => 1,
            P1EdgeType::SharedZero => 0,
        }
    }
}

/// Per-type edge counts of a 3-regular graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct P1Census {
    pub shared_two: u64,
    pub shared_one: u64,
    pub shared_zero: u64,
}

impl P1Census {
    pub fn total(&self) -> u64 {
        self.shared_two + self.shared_one + self.shared_zero
    }

    pub fn fraction_shared_two(&self) -> f64 {
        self.shared_two as f64 / self.total() as f64
    }

    pub fn fraction_shared_one(&self) -> f64 {
        self.shared_one as f64 / self.total() as f64
    }

    pub fn fraction_shared_zero(&self) -> f64 {
        self.shared_zero as f64 / self.total() as f64
    }
}

/// Classifies one edge of a 3-regular graph by shared endpoint neighbors.
pub fn classify_edge_p1(g: &Graph, edge_index: usize) -> Result<P1EdgeType> {
    if !g.is_regular(3) {
        return Err(Error::InvalidParameter(
            "depth-1 edge classification requires a 3-regular graph".into(),
        ));
    }
    let (u, v) = g.edge(edge_index)?;
    let shared = shared_neighbor_count(g, u, v);
    Ok(match shared {
        2 => P1EdgeType::SharedTwo,
        1 => P1EdgeType::SharedOne,
        0 => P1EdgeType::SharedZero,
        _ => unreachable!("endpoints of a 3-regular edge have at most 2 other neighbors"),
    })
}

/// Classifies every edge of a 3-regular graph.
pub fn census_p1(g: &Graph) -> Result<P1Census> {
    if g.m() == 0 {
        return Err(Error::Degenerate(
            "edge-type fractions are undefined on an edgeless graph".into(),
        ));
    }
    let mut census = P1Census { shared_two: 0, shared_one: 0, shared_zero: 0 };
    for index in 0..g.m() {
        match classify_edge_p1(g, index)? {
            P1EdgeType::SharedTwo => census.shared_two += 1,
            P1EdgeType::SharedOne => census.shared_one += 1,
            P1EdgeType::SharedZero => census.shared_zero += 1,
        }
    }
    Ok(census)
}

fn shared_neighbor_count(g: &Graph, u: u32, v: u32) -> usize {
    // Neighbor lists are sorted and never contain u or v themselves.
    let (mut a, mut b) = (g.neighbors(u).iter().peekable(), g.neighbors(v).iter().peekable());
    let mut shared = 0;
    while let (Some(&&x), Some(&&y)) = (a.peek(), b.peek()) {
        match x.cmp(&y) {
            std::cmp::Ordering::Less => {
                a.next();
            }
            std::cmp::Ordering::Greater => {
                b.next();
            }
            std::cmp::Ordering::Equal => {
                shared += 1;
                a.next();
                b.next();
            }
        }
    }
    shared
}

/// Induced subgraph on all vertices within distance `radius` of either
/// endpoint of the given edge, relabeled `0..k` in ascending original order.
/// Returns the subgraph together with the original label of each new vertex.
pub fn neighborhood(g: &Graph, edge_index: usize, radius: usize) -> Result<(Graph, Vec<u32>)> {
    let (u, v) = g.edge(edge_index)?;
    let mut dist = vec![usize::MAX; g.n()];
    let mut queue = VecDeque::from([u, v]);
    dist[u as usize] = 0;
    dist[v as usize] = 0;
    while let Some(w) = queue.pop_front() {
        let d = dist[w as usize];
        if d == radius {
            continue;
        }
        for &x in g.neighbors(w) {
            if dist[x as usize] == usize::MAX {
                dist[x as usize] = d + 1;
                queue.push_back(x);
            }
        }
    }
    let keep: Vec<u32> = (0..g.n() as u32).filter(|&w| dist[w as usize] != usize::MAX).collect();
    Ok((g.induced(&keep), keep))
}

/// Vertex count of the depth-`p` double tree hanging off an edge of a
/// 3-regular graph: `2 * (2^(p+1) - 1)`. This is the largest possible
/// `p`-neighborhood of an edge, attained exactly when that neighborhood is
/// cycle-free.
pub fn qaoa_tree_size(p: u32) -> Result<u64> {
    if p < 1 {
        return Err(Error::InvalidParameter("tree size needs depth p >= 1".into()));
    }
    if p > 62 {
        return Err(Error::InvalidParameter("tree size overflows beyond p = 62".into()));
    }
    Ok(2 * ((1u64 << (p + 1)) - 1))
}
