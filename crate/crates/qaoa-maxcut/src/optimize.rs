//! Derivative-free angle search: Nelder–Mead local search, seeded
//! multistart, depth-1 landscape scans, and the small-to-large leapfrog
//! schedule.
//!
//! Searches run in the covering space (raw, unreduced angles) to keep the
//! simplex free of wrap-around seams; results are reduced to canonical
//! schedules on the way out.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph;
use crate::qaoa::{AngleSchedule, Simulator};
use crate::rng::{stream, stream_seed};
use crate::Caps;

/// Which way the search drives the objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Maximize,
    Minimize,
}

impl Direction {
    /// Sign that turns the objective into a minimization target.
    fn sign(self) -> f64 {
        match self {
            Direction::Maximize => -1.0,
            Direction::Minimize => 1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Maximize => "maximize",
            Direction::Minimize => "minimize",
        }
    }
}

impl std::str::FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "maximize" | "max" => Ok(Direction::Maximize),
            "minimize" | "min" => Ok(Direction::Minimize),
            other => Err(Error::Parse(format!("unknown direction `{other}`"))),
        }
    }
}

/// Termination controls for one local search.
#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    /// Stop when the simplex value spread falls below this.
    pub tol: f64,
    /// Iteration budget (simplex steps, not evaluations).
    pub max_iters: usize,
    /// Early stop: finish at the first evaluated point whose objective lies
    /// inside this closed band.
    pub stop_band: Option<(f64, f64)>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { tol: 1e-6, max_iters: 400, stop_band: None }
    }
}

/// Result of one local search.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub angles: AngleSchedule,
    /// Objective at `angles`, re-evaluated after reduction.
    pub value: f64,
    /// Exact number of objective calls made.
    pub evaluations: u64,
}

/// One restart of a multistart run.
#[derive(Debug, Clone)]
pub struct RestartRecord {
    pub start: AngleSchedule,
    pub value: f64,
    pub evaluations: u64,
}

/// Best schedule found across restarts.
#[derive(Debug, Clone)]
pub struct OptimizationResult {
    pub direction: Direction,
    pub best_angles: AngleSchedule,
    pub best_value: f64,
    /// Total objective calls across all restarts.
    pub evaluations: u64,
    pub restart_trace: Vec<RestartRecord>,
}

/// Wraps the raw objective: counts calls, rejects non-finite values, applies
/// the direction sign, and watches the stop band.
struct Evaluator<'a> {
    f: &'a mut dyn FnMut(&[f64]) -> f64,
    sign: f64,
    band: Option<(f64, f64)>,
    band_hit: Option<Vec<f64>>,
    count: u64,
}

impl<'a> Evaluator<'a> {
    fn new(
        f: &'a mut dyn FnMut(&[f64]) -> f64,
        direction: Direction,
        options: &SearchOptions,
    ) -> Self {
        Self { f, sign: direction.sign(), band: options.stop_band, band_hit: None, count: 0 }
    }

    /// Signed value for the minimizer.
    fn eval(&mut self, x: &[f64]) -> Result<f64> {
        let fx = (self.f)(x);
        self.count += 1;
        if !fx.is_finite() {
            return Err(Error::SearchAbort(format!("objective returned {fx}")));
        }
        if let Some((lo, hi)) = self.band {
            if self.band_hit.is_none() && fx >= lo && fx <= hi {
                self.band_hit = Some(x.to_vec());
            }
        }
        Ok(self.sign * fx)
    }
}

/// Nelder–Mead simplex search over the `2p` raw angle coordinates
/// `[gamma.., beta..]`, with the classical coefficients (reflection 1,
/// expansion 2, contraction 0.5, shrink 0.5). The initial simplex is the
/// start point plus one vertex offset by +0.1 rad along each coordinate;
/// the search stops when the simplex value spread drops below `tol`, the
/// iteration budget runs out, or a stop-band point turns up.
pub fn local_search(
    f: &mut dyn FnMut(&[f64]) -> f64,
    start: &AngleSchedule,
    direction: Direction,
    options: &SearchOptions,
) -> Result<SearchOutcome> {
    if options.tol <= 0.0 {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    if options.max_iters < 1 {
        return Err(Error::InvalidParameter("need at least one iteration".into()));
    }
    let mut ev = Evaluator::new(f, direction, options);
    let x0 = start.to_flat();
    let dim = x0.len();

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    let g0 = ev.eval(&x0)?;
    simplex.push((x0.clone(), g0));
    for i in 0..dim {
        if ev.band_hit.is_some() {
            break;
        }
        let mut xi = x0.clone();
        xi[i] += 0.1;
        let gi = ev.eval(&xi)?;
        simplex.push((xi, gi));
    }

    let mut iters = 0;
    'outer: while ev.band_hit.is_none() && iters < options.max_iters && simplex.len() == dim + 1 {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if simplex[dim].1 - simplex[0].1 < options.tol {
            break;
        }
        iters += 1;

        let centroid: Vec<f64> = (0..dim)
            .map(|k| simplex[..dim].iter().map(|(x, _)| x[k]).sum::<f64>() / dim as f64)
            .collect();
        let worst = simplex[dim].clone();
        let towards = |coef: f64| -> Vec<f64> {
            (0..dim).map(|k| centroid[k] + coef * (centroid[k] - worst.0[k])).collect()
        };

        let xr = towards(1.0);
        let gr = ev.eval(&xr)?;
        if ev.band_hit.is_some() {
            break;
        }

        if gr < simplex[0].1 {
            // Try expanding, keep the better of the two points.
            let xe = towards(2.0);
            let ge = ev.eval(&xe)?;
            simplex[dim] = if ge < gr { (xe, ge) } else { (xr, gr) };
        } else if gr < simplex[dim - 1].1 {
            simplex[dim] = (xr, gr);
        } else {
            // Contract outside or inside of the reflection.
            let (xc, accept_vs) =
                if gr < worst.1 { (towards(0.5), gr) } else { (towards(-0.5), worst.1) };
            let gc = ev.eval(&xc)?;
            if ev.band_hit.is_some() {
                break;
            }
            if gc <= accept_vs {
                simplex[dim] = (xc, gc);
            } else {
                // Shrink every vertex toward the best.
                let best = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    for (xk, bk) in vertex.0.iter_mut().zip(&best) {
                        *xk = bk + 0.5 * (*xk - *bk);
                    }
                    vertex.1 = ev.eval(&vertex.0)?;
                    if ev.band_hit.is_some() {
                        break 'outer;
                    }
                }
            }
        }
    }

    // A band hit wins over the best vertex.
    let chosen = match ev.band_hit.take() {
        Some(x) => x,
        None => {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            simplex.swap_remove(0).0
        }
    };
    let angles = AngleSchedule::from_flat(&chosen)?;
    let fx = (ev.f)(&angles.to_flat());
    ev.count += 1;
    if !fx.is_finite() {
        return Err(Error::SearchAbort(format!("objective returned {fx} after reduction")));
    }
    Ok(SearchOutcome { angles, value: fx, evaluations: ev.count })
}

/// Independent local searches from uniform random starts, restart `i` on
/// substream `(seed, "restart", i)`. Restarts run in parallel; the merge is
/// a deterministic argmax with lowest-index tie-break.
pub fn multistart_fn<F>(
    f: &F,
    p: usize,
    restarts: usize,
    direction: Direction,
    seed: u64,
    options: &SearchOptions,
) -> Result<OptimizationResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if restarts < 1 {
        return Err(Error::InvalidParameter("need at least one restart".into()));
    }
    let outcomes: Vec<(AngleSchedule, SearchOutcome)> = (0..restarts as u64)
        .into_par_iter()
        .map(|i| {
            let start = AngleSchedule::random(p, &mut stream(seed, "restart", i));
            let mut call = |x: &[f64]| f(x);
            local_search(&mut call, &start, direction, options).map(|out| (start, out))
        })
        .collect::<Result<_>>()?;
    Ok(merge_restarts(direction, outcomes))
}

fn merge_restarts(
    direction: Direction,
    outcomes: Vec<(AngleSchedule, SearchOutcome)>,
) -> OptimizationResult {
    let mut trace = Vec::with_capacity(outcomes.len());
    let mut evaluations = 0;
    let mut best: Option<(AngleSchedule, f64)> = None;
    for (start, out) in outcomes {
        evaluations += out.evaluations;
        let improved = match &best {
            None => true,
            Some((_, value)) => match direction {
                Direction::Maximize => out.value > *value,
                Direction::Minimize => out.value < *value,
            },
        };
        if improved {
            best = Some((out.angles.clone(), out.value));
        }
        trace.push(RestartRecord { start, value: out.value, evaluations: out.evaluations });
    }
    let (best_angles, best_value) = best.expect("at least one restart");
    OptimizationResult { direction, best_angles, best_value, evaluations, restart_trace: trace }
}

/// [`multistart_fn`] on a simulator's objective, with one reusable
/// statevector buffer per restart.
pub fn multistart(
    sim: &Simulator,
    p: usize,
    restarts: usize,
    direction: Direction,
    seed: u64,
    options: &SearchOptions,
) -> Result<OptimizationResult> {
    if restarts < 1 {
        return Err(Error::InvalidParameter("need at least one restart".into()));
    }
    let outcomes: Vec<(AngleSchedule, SearchOutcome)> = (0..restarts as u64)
        .into_par_iter()
        .map(|i| {
            let start = AngleSchedule::random(p, &mut stream(seed, "restart", i));
            let mut session = sim.session();
            let mut call = |x: &[f64]| {
                session.objective(&AngleSchedule::from_flat(x).expect("search keeps dimensions"))
            };
            local_search(&mut call, &start, direction, options).map(|out| (start, out))
        })
        .collect::<Result<_>>()?;
    Ok(merge_restarts(direction, outcomes))
}

/// Depth-1 objective on the full-period grid: `gamma` in `[0, 2π)`, `beta`
/// in `[0, π)`, `resolution` points per axis, row-major with `gamma` outer.
pub fn landscape_grid(sim: &Simulator, resolution: usize) -> Result<Vec<f64>> {
    if resolution < 2 {
        return Err(Error::InvalidParameter("landscape needs at least 2 points per axis".into()));
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let pi = std::f64::consts::PI;
    (0..resolution * resolution)
        .into_par_iter()
        .map_init(
            || sim.session(),
            |session, index| {
                let gamma = (index / resolution) as f64 * two_pi / resolution as f64;
                let beta = (index % resolution) as f64 * pi / resolution as f64;
                Ok(session.objective(&AngleSchedule::new(vec![gamma], vec![beta])?))
            },
        )
        .collect()
}

/// One rung of a leapfrog run.
#[derive(Debug, Clone)]
pub struct LeapfrogStage {
    pub n: usize,
    pub angles: AngleSchedule,
    /// Objective of the stage instance at the stage's final angles.
    pub value: f64,
    /// Objective of the stage instance at the carried angles, before
    /// refinement. `None` for the first stage.
    pub transferred_value: Option<f64>,
    /// Approximation ratios over the fresh evaluation batch.
    pub ratios: Vec<f64>,
    pub mean_ratio: f64,
}

/// Optimize at the smallest size, then walk up: at each later size, toss a
/// fresh instance and refine the carried angles with a single local search.
/// Each stage reports the mean approximation ratio over `eval_batch` fresh
/// instances of its size.
#[allow(clippy::too_many_arguments)]
pub fn leapfrog(
    sizes: &[usize],
    d: usize,
    p: usize,
    restarts: usize,
    eval_batch: usize,
    seed: u64,
    options: &SearchOptions,
    caps: &Caps,
) -> Result<Vec<LeapfrogStage>> {
    if sizes.is_empty() {
        return Err(Error::InvalidParameter("leapfrog needs at least one size".into()));
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("leapfrog sizes must be strictly increasing".into()));
    }
    for &n in sizes {
        if n > caps.sim_qubits || n > caps.brute_force_qubits {
            return Err(Error::ResourceCap(format!("leapfrog size {n} exceeds a configured cap")));
        }
    }

    let mut stages: Vec<LeapfrogStage> = Vec::with_capacity(sizes.len());
    for (stage, &n) in sizes.iter().enumerate() {
        let mut rng = stream(seed, "leapfrog-stage-graph", stage as u64);
        let g = graph::regular(n, d, &mut rng, caps.generation_retries)?;
        let sim = Simulator::new(&g, caps.sim_qubits)?;

        let (angles, value, transferred_value) = match stages.last() {
            None => {
                let result = multistart(
                    &sim,
                    p,
                    restarts,
                    Direction::Maximize,
                    stream_seed(seed, "leapfrog-opt", stage as u64),
                    options,
                )?;
                (result.best_angles, result.best_value, None)
            }
            Some(prev) => {
                let carried = prev.angles.clone();
                let transferred = sim.objective(&carried);
                let mut session = sim.session();
                let mut call = |x: &[f64]| {
                    session
                        .objective(&AngleSchedule::from_flat(x).expect("search keeps dimensions"))
                };
                let out = local_search(&mut call, &carried, Direction::Maximize, options)?;
                (out.angles, out.value, Some(transferred))
            }
        };

        let ratios: Vec<f64> = (0..eval_batch as u64)
            .into_par_iter()
            .map(|k| {
                let mut rng = stream(seed, "leapfrog-eval-graph", (stage as u64) << 32 | k);
                let g = graph::regular(n, d, &mut rng, caps.generation_retries)?;
                let cut = graph::brute_force_maxcut(&g, caps.brute_force_qubits)?;
                let f = Simulator::new(&g, caps.sim_qubits)?.objective(&angles);
                crate::qaoa::approximation_ratio(f, cut.value)
            })
            .collect::<Result<_>>()?;
        let mean_ratio = ratios.iter().sum::<f64>() / ratios.len().max(1) as f64;

        stages.push(LeapfrogStage { n, angles, value, transferred_value, ratios, mean_ratio });
    }
    Ok(stages)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::rng::stream;
    use std::cell::Cell;

    const CAP: usize = 26;

    #[test]
    fn quadratic_valley_converges() {
        // Maximizing -(x - 1)^2 from the origin lands on all-ones.
        let mut f = |x: &[f64]| -x.iter().map(|v| (v - 1.0).powi(2)).sum::<f64>();
        let start = AngleSchedule::zeros(2);
        let out =
            local_search(&mut f, &start, Direction::Maximize, &SearchOptions::default()).unwrap();
        for v in out.angles.to_flat() {
            assert!((v - 1.0).abs() < 1e-3, "coordinate {v} missed the optimum");
        }
        assert!(out.value > -1e-5);
    }

    #[test]
    fn single_edge_reaches_full_cut() {
        // Grid-scan oracle: the depth-1 optimum of a lone edge is 1.
        let g = Graph::new(2, vec![(0, 1)]).unwrap();
        let sim = Simulator::new(&g, CAP).unwrap();
        let grid_best =
            landscape_grid(&sim, 64).unwrap().into_iter().fold(f64::NEG_INFINITY, f64::max);
        assert!((grid_best - 1.0).abs() < 1e-2);

        let result =
            multistart(&sim, 1, 8, Direction::Maximize, 3, &SearchOptions::default()).unwrap();
        assert!((result.best_value - 1.0).abs() < 1e-4);
    }

    #[test]
    fn evaluations_are_counted_exactly() {
        for max_iters in [1usize, 23, 117] {
            let calls = Cell::new(0u64);
            let mut f = |x: &[f64]| {
                calls.set(calls.get() + 1);
                (x[0] - 0.9).powi(2) + (x[1] - 0.2).powi(2)
            };
            let start = AngleSchedule::new(vec![0.4], vec![0.3]).unwrap();
            let options = SearchOptions { max_iters, ..Default::default() };
            let out = local_search(&mut f, &start, Direction::Minimize, &options).unwrap();
            assert_eq!(out.evaluations, calls.get(), "max_iters = {max_iters}");
        }
    }

    #[test]
    fn non_finite_objective_aborts() {
        let mut f = |_: &[f64]| f64::NAN;
        let start = AngleSchedule::zeros(1);
        let err = local_search(&mut f, &start, Direction::Minimize, &SearchOptions::default())
            .unwrap_err();
        assert!(matches!(err, Error::SearchAbort(_)));
    }

    #[test]
    fn output_angles_are_canonical() {
        // Drive the optimum far outside the fundamental domain.
        let mut f = |x: &[f64]| (x[0] - 9.0).powi(2) + (x[1] - 7.0).powi(2);
        let start = AngleSchedule::new_unreduced(vec![8.5], vec![6.5]);
        let out =
            local_search(&mut f, &start, Direction::Minimize, &SearchOptions::default()).unwrap();
        assert!((0.0..2.0 * std::f64::consts::PI).contains(&out.angles.gamma()[0]));
        assert!((0.0..std::f64::consts::PI).contains(&out.angles.beta()[0]));
    }

    #[test]
    fn stop_band_halts_the_search_early() {
        // Objective decreases by one per call: the band is crossed quickly,
        // long before the iteration budget would run out.
        let calls = Cell::new(0u64);
        let mut f = |_: &[f64]| {
            calls.set(calls.get() + 1);
            20.0 - calls.get() as f64
        };
        let start = AngleSchedule::zeros(2);
        let options =
            SearchOptions { stop_band: Some((13.0, 14.0)), max_iters: 500, ..Default::default() };
        let out = local_search(&mut f, &start, Direction::Minimize, &options).unwrap();
        assert!(out.evaluations <= 8, "stopped after {} evaluations", out.evaluations);
    }

    #[test]
    fn multistart_is_deterministic_and_consistent() {
        let g = Graph::petersen();
        let sim = Simulator::new(&g, CAP).unwrap();
        let options = SearchOptions { max_iters: 60, ..Default::default() };
        let a = multistart(&sim, 2, 6, Direction::Maximize, 11, &options).unwrap();
        let b = multistart(&sim, 2, 6, Direction::Maximize, 11, &options).unwrap();
        assert_eq!(a.best_angles, b.best_angles);
        assert_eq!(a.best_value, b.best_value);
        assert_eq!(a.evaluations, b.evaluations);

        let trace_best = a.restart_trace.iter().map(|r| r.value).fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(a.best_value, trace_best);
        assert!((0.0..=g.m() as f64).contains(&a.best_value));
        assert_eq!(a.evaluations, a.restart_trace.iter().map(|r| r.evaluations).sum::<u64>());
    }

    #[test]
    fn single_restart_matches_local_search() {
        let g = Graph::petersen();
        let sim = Simulator::new(&g, CAP).unwrap();
        let options = SearchOptions { max_iters: 40, ..Default::default() };
        let multi = multistart(&sim, 1, 1, Direction::Minimize, 21, &options).unwrap();

        let start = AngleSchedule::random(1, &mut stream(21, "restart", 0));
        let mut f = |x: &[f64]| sim.objective(&AngleSchedule::from_flat(x).unwrap());
        let single = local_search(&mut f, &start, Direction::Minimize, &options).unwrap();
        assert_eq!(multi.best_value, single.value);
        assert_eq!(multi.best_angles, single.angles);
    }

    #[test]
    fn landscape_grid_shape_and_origin() {
        let g = Graph::petersen();
        let sim = Simulator::new(&g, CAP).unwrap();
        let grid = landscape_grid(&sim, 8).unwrap();
        assert_eq!(grid.len(), 64);
        assert!((grid[0] - g.m() as f64 / 2.0).abs() < 1e-12);
        assert!(landscape_grid(&sim, 1).is_err());
    }

    #[test]
    fn leapfrog_refinement_never_loses_to_the_transfer() {
        let caps = Caps::default();
        let options = SearchOptions { max_iters: 80, ..Default::default() };
        let stages = leapfrog(&[8, 10, 12], 3, 2, 4, 4, 5, &options, &caps).unwrap();
        assert_eq!(stages.len(), 3);
        assert!(stages[0].transferred_value.is_none());
        for stage in &stages[1..] {
            let transferred = stage.transferred_value.unwrap();
            assert!(
                stage.value >= transferred - 1e-9,
                "refined {} fell below transferred {transferred}",
                stage.value
            );
        }
        for stage in &stages {
            assert!(stage.ratios.iter().all(|r| (0.0..=1.0 + 1e-12).contains(r)));
            assert_eq!(stage.ratios.len(), 4);
        }
    }

    #[test]
    fn leapfrog_validates_sizes() {
        let caps = Caps::default();
        let options = SearchOptions::default();
        assert!(leapfrog(&[], 3, 2, 1, 1, 1, &options, &caps).is_err());
        assert!(leapfrog(&[10, 10], 3, 2, 1, 1, 1, &options, &caps).is_err());
        assert!(leapfrog(&[10, 40], 3, 2, 1, 1, 1, &options, &caps).is_err());
    }
}
