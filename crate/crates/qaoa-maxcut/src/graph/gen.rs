//! Random graph generators.

use std::collections::{BTreeMap, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;

use super::{brute_force_maxcut, Graph};
use crate::error::{Error, Result};

/// Random `d`-regular simple graph on `n` vertices via the configuration
/// (pairing) model: shuffle the `n·d` half-edge stubs, pair them up, and
/// restart from scratch on the first self-loop or multi-edge. Restarting
/// whole graphs keeps the output uniform over simple pairings.
pub fn regular<R: Rng>(n: usize, d: usize, rng: &mut R, max_tries: u64) -> Result<Graph> {
    if d >= n {
        return Err(Error::InvalidParameter(format!(
            "degree {d} needs more than {n} vertices"
        )));
    }
    if n * d % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "n*d = {} is odd; no {d}-regular graph on {n} vertices exists",
            n * d
        )));
    }
    let m = n * d / 2;
    let mut stubs: Vec<u32> = (0..n as u32).flat_map(|v| std::iter::repeat(v).take(d)).collect();
    let mut edges = Vec::with_capacity(m);
    let mut seen = HashSet::with_capacity(m);
    for _ in 0..max_tries {
        stubs.shuffle(rng);
        edges.clear();
        seen.clear();
        let mut simple = true;
        for pair in stubs.chunks_exact(2) {
            let (a, b) = (pair[0], pair[1]);
            if a == b || !seen.insert((a.min(b), a.max(b))) {
                simple = false;
                break;
            }
            edges.push((a, b));
        }
        if simple {
            return Graph::new(n, std::mem::take(&mut edges));
        }
    }
    Err(Error::GenerationFailure { attempts: max_tries, histogram: Vec::new() })
}

/// Random graph where each of the `C(n,2)` possible edges is included
/// independently with probability `p_edge`.
pub fn erdos_renyi<R: Rng>(n: usize, p_edge: f64, rng: &mut R) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p_edge) {
        return Err(Error::InvalidParameter(format!(
            "edge probability {p_edge} outside [0, 1]"
        )));
    }
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            if rng.gen::<f64>() < p_edge {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges)
}

/// Rejection-samples [`regular`] until the brute-force MaxCut value equals
/// `target_cmax`. `max_tries` budgets the filter; `pairing_tries` budgets
/// each inner configuration-model draw. On failure the error carries the
/// histogram of observed values, which usually tells you whether the target
/// is simply rare or unreachable at this size.
pub fn regular_with_maxcut<R: Rng>(
    n: usize,
    d: usize,
    target_cmax: u32,
    rng: &mut R,
    max_tries: u64,
    pairing_tries: u64,
    brute_force_cap: usize,
) -> Result<Graph> {
    let m = n * d / 2;
    if target_cmax as usize > m {
        return Err(Error::InvalidParameter(format!(
            "target maxcut {target_cmax} exceeds edge count {m}"
        )));
    }
    let mut histogram: BTreeMap<u32, u64> = BTreeMap::new();
    for attempt in 1..=max_tries {
        let g = regular(n, d, rng, pairing_tries)?;
        let cut = brute_force_maxcut(&g, brute_force_cap)?;
        if cut.value == target_cmax {
            return Ok(g);
        }
        *histogram.entry(cut.value).or_insert(0) += 1;
        if attempt == max_tries {
            break;
        }
    }
    Err(Error::GenerationFailure {
        attempts: max_tries,
        histogram: histogram.into_iter().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn n4_d3_is_k4() {
        for seed in 0..5 {
            let mut rng = stream(seed, "gen", 0);
            let g = regular(4, 3, &mut rng, 10_000).unwrap();
            assert_eq!(g, Graph::complete(4));
        }
    }

    #[test]
    fn odd_total_degree_is_rejected() {
        let mut rng = stream(1, "gen", 0);
        assert!(matches!(regular(5, 3, &mut rng, 10).unwrap_err(), Error::InvalidParameter(_)));
        assert!(matches!(regular(3, 3, &mut rng, 10).unwrap_err(), Error::InvalidParameter(_)));
    }

    #[test]
    fn generated_regular_graphs_have_exact_degrees() {
        let mut rng = stream(7, "gen", 0);
        let g = regular(20, 3, &mut rng, 10_000).unwrap();
        assert_eq!(g.n(), 20);
        assert_eq!(g.m(), 30);
        assert!(g.is_regular(3));
    }

    #[test]
    fn same_seed_same_graph() {
        let a = regular(30, 3, &mut stream(11, "gen", 4), 10_000).unwrap();
        let b = regular(30, 3, &mut stream(11, "gen", 4), 10_000).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn erdos_renyi_extremes() {
        let mut rng = stream(1, "er", 0);
        assert_eq!(erdos_renyi(10, 0.0, &mut rng).unwrap().m(), 0);
        assert_eq!(erdos_renyi(10, 1.0, &mut rng).unwrap().m(), 45);
        assert!(erdos_renyi(10, 1.5, &mut rng).is_err());
        assert!(erdos_renyi(10, -0.1, &mut rng).is_err());
    }

    #[test]
    fn erdos_renyi_mean_edge_count_matches_binomial() {
        // m ~ Binomial(C(300,2), 3/299): mean 450, per-sample std ~21.1, so
        // the mean of 1000 samples lands within 3*21.1/sqrt(1000) = 2.0.
        let n = 300;
        let p = 3.0 / 299.0;
        let samples = 1000;
        let mut total = 0u64;
        for k in 0..samples {
            let mut rng = stream(42, "er-mean", k);
            total += erdos_renyi(n, p, &mut rng).unwrap().m() as u64;
        }
        let mean = total as f64 / samples as f64;
        assert!((mean - 450.0).abs() < 2.0, "mean edge count {mean} too far from 450");
    }

    #[test]
    fn maxcut_filter_hits_target() {
        let mut rng = stream(3, "gen-mc", 0);
        let g = regular_with_maxcut(4, 3, 4, &mut rng, 100, 10_000, 30).unwrap();
        assert_eq!(g, Graph::complete(4));
    }

    #[test]
    fn maxcut_filter_failure_carries_histogram() {
        // K4 is the only 3-regular graph on 4 vertices and its maxcut is 4.
        let mut rng = stream(3, "gen-mc", 1);
        match regular_with_maxcut(4, 3, 6, &mut rng, 25, 10_000, 30) {
            Err(Error::GenerationFailure { attempts, histogram }) => {
                assert_eq!(attempts, 25);
                assert_eq!(histogram, vec![(4, 25)]);
            }
            other => panic!("expected generation failure, got {other:?}"),
        }
    }
}
