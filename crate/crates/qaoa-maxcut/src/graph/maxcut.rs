//! Exact MaxCut by exhaustive enumeration.

use super::Graph;
use crate::error::{Error, Result};

/// An optimal cut: its size and a witness assignment (bit `v` = side of
/// vertex `v`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CutResult {
    pub value: u32,
    pub assignment: u64,
}

impl CutResult {
    /// Witness as a 0/1 string, vertex 0 leftmost.
    pub fn assignment_string(&self, n: usize) -> String {
        (0..n).map(|v| if self.assignment >> v & 1 == 1 { '1' } else { '0' }).collect()
    }
}

/// Maximum cut over all `2^n` assignments, found by Gray-code enumeration:
/// consecutive assignments differ in one vertex, so each step updates the cut
/// value in `O(degree)`. Vertex 0 is pinned to side 0 (a cut and its
/// complement are equal), halving the walk.
pub fn brute_force_maxcut(g: &Graph, cap: usize) -> Result<CutResult> {
    let n = g.n();
    if n > cap {
        return Err(Error::ResourceCap(format!(
            "brute-force maxcut on {n} vertices exceeds the cap of {cap}"
        )));
    }
    if n > 62 {
        return Err(Error::ResourceCap(
            "brute-force maxcut is limited to 62 vertices".into(),
        ));
    }
    if n == 0 || g.m() == 0 {
        return Ok(CutResult { value: 0, assignment: 0 });
    }

    let mut mask = 0u64;
    let mut cut = 0i64;
    let mut best = CutResult { value: 0, assignment: 0 };
    for step in 1u64..1 << (n - 1) {
        // Gray code over vertices 1..n; vertex 0 never flips.
        let v = step.trailing_zeros() + 1;
        let side = mask >> v & 1;
        let mut cut_at_v = 0i64;
        for &w in g.neighbors(v) {
            cut_at_v += ((mask >> w & 1) != side) as i64;
        }
        mask ^= 1 << v;
        cut += g.degree(v) as i64 - 2 * cut_at_v;
        if cut > best.value as i64 {
            best = CutResult { value: cut as u32, assignment: mask };
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Direct reference count for one assignment.
    fn cut_of(g: &Graph, mask: u64) -> u32 {
        g.edges()
            .iter()
            .filter(|&&(u, v)| (mask >> u & 1) != (mask >> v & 1))
            .count() as u32
    }

    #[test]
    fn empty_graph() {
        let cut = brute_force_maxcut(&Graph::empty(0), 30).unwrap();
        assert_eq!((cut.value, cut.assignment), (0, 0));
        assert_eq!(cut.assignment_string(0), "");
        let cut = brute_force_maxcut(&Graph::empty(3), 30).unwrap();
        assert_eq!(cut.assignment_string(3), "000");
    }

    #[test]
    fn k4_cuts_four() {
        let cut = brute_force_maxcut(&Graph::complete(4), 30).unwrap();
        assert_eq!(cut.value, 4);
        assert_eq!(cut_of(&Graph::complete(4), cut.assignment), 4);
    }

    #[test]
    fn petersen_cuts_twelve() {
        let g = Graph::petersen();
        let cut = brute_force_maxcut(&g, 30).unwrap();
        assert_eq!(cut.value, 12);
        assert_eq!(cut_of(&g, cut.assignment), 12);
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            brute_force_maxcut(&Graph::empty(10), 8).unwrap_err(),
            Error::ResourceCap(_)
        ));
    }

    proptest! {
        #[test]
        fn prop_cycles_match_closed_form(k in 2usize..9) {
            // Even cycles are bipartite; odd cycles lose exactly one edge.
            let even = brute_force_maxcut(&Graph::cycle(2 * k), 30).unwrap();
            prop_assert_eq!(even.value, 2 * k as u32);
            let odd = brute_force_maxcut(&Graph::cycle(2 * k + 1), 30).unwrap();
            prop_assert_eq!(odd.value, 2 * k as u32);
        }

        #[test]
        fn prop_label_permutation_invariance(seed in 0u64..100) {
            let mut rng = crate::rng::stream(seed, "mc-perm", 0);
            let g = crate::graph::regular(12, 3, &mut rng, 10_000).unwrap();
            let h = g.permute_edge_labels(&mut rng);
            let a = brute_force_maxcut(&g, 30).unwrap();
            let b = brute_force_maxcut(&h, 30).unwrap();
            prop_assert_eq!(a.value, b.value);
        }

        #[test]
        fn prop_witness_attains_value(seed in 0u64..60) {
            let mut rng = crate::rng::stream(seed, "mc-wit", 0);
            let g = crate::graph::erdos_renyi(9, 0.4, &mut rng).unwrap();
            let cut = brute_force_maxcut(&g, 30).unwrap();
            prop_assert_eq!(cut_of(&g, cut.assignment), cut.value);
            // And no assignment beats it (exhaustive check at this size).
            let best = (0u64..1 << g.n()).map(|z| cut_of(&g, z)).max().unwrap_or(0);
            prop_assert_eq!(best, cut.value);
        }
    }
}
