//! Packaged experiments: objective concentration across instances at fixed
//! angles, per-edge correlation estimation, small-to-large angle transfer,
//! and the bounded-difference concentration bound.
//!
//! Every experiment draws all of its randomness from named substreams of one
//! root seed and records the derived seeds, so any single cell, instance, or
//! restart can be reproduced in isolation.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{self, Graph};
use crate::optimize::{local_search, multistart, Direction, SearchOptions};
use crate::qaoa::{approximation_ratio, AngleSchedule, Simulator};
use crate::rng::{stream, stream_seed};
use crate::Caps;

/// How the fixed angle set of a cell is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// Full minimize-multistart.
    Low,
    /// Minimize, stopped early inside the configured low band.
    MedLow,
    /// One uniform draw.
    Random,
    /// Maximize, stopped early inside the configured high band.
    MedHigh,
    /// Full maximize-multistart.
    High,
}

impl Regime {
    pub const ALL: [Regime; 5] =
        [Regime::Low, Regime::MedLow, Regime::Random, Regime::MedHigh, Regime::High];

    pub fn label(self) -> &'static str {
        match self {
            Regime::Low => "Low",
            Regime::MedLow => "Med Low",
            Regime::Random => "Random",
            Regime::MedHigh => "Med High",
            Regime::High => "High",
        }
    }

    /// Stable lowercase name, used in CLI flags and seed purposes.
    pub fn key(self) -> &'static str {
        match self {
            Regime::Low => "low",
            Regime::MedLow => "med-low",
            Regime::Random => "random",
            Regime::MedHigh => "med-high",
            Regime::High => "high",
        }
    }
}

impl std::str::FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "low" => Ok(Regime::Low),
            "med-low" | "medlow" => Ok(Regime::MedLow),
            "random" => Ok(Regime::Random),
            "med-high" | "medhigh" => Ok(Regime::MedHigh),
            "high" => Ok(Regime::High),
            other => Err(Error::Parse(format!("unknown regime `{other}`"))),
        }
    }
}

/// The instance distribution an experiment draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InstanceSpec {
    pub n: usize,
    pub d: usize,
    /// When set, rejection-filter instances to this exact MaxCut value.
    pub target_cmax: Option<u32>,
}

impl InstanceSpec {
    pub fn toss<R: Rng>(&self, rng: &mut R, caps: &Caps) -> Result<Graph> {
        match self.target_cmax {
            None => graph::regular(self.n, self.d, rng, caps.generation_retries),
            Some(target) => graph::regular_with_maxcut(
                self.n,
                self.d,
                target,
                rng,
                caps.generation_retries,
                caps.generation_retries,
                caps.brute_force_qubits,
            ),
        }
    }

    /// Tosses until the instance differs from `exclude` (the held-out
    /// angle-finding instance never enters an evaluation set).
    fn toss_excluding<R: Rng>(
        &self,
        rng: &mut R,
        caps: &Caps,
        exclude: Option<&Graph>,
    ) -> Result<Graph> {
        loop {
            let g = self.toss(rng, caps)?;
            if exclude != Some(&g) {
                return Ok(g);
            }
        }
    }
}

/// Search budget for producing regime angle sets.
#[derive(Debug, Clone, Copy)]
pub struct OptBudget {
    pub restarts: usize,
    pub search: SearchOptions,
}

impl Default for OptBudget {
    fn default() -> Self {
        Self { restarts: 8, search: SearchOptions::default() }
    }
}

/// Early-stop bands for the two medium regimes, in objective units.
#[derive(Debug, Clone, Copy)]
pub struct MedBands {
    pub low: (f64, f64),
    pub high: (f64, f64),
}

impl Default for MedBands {
    fn default() -> Self {
        Self { low: (7.0, 8.0), high: (21.0, 22.0) }
    }
}

/// Fixed angles for one regime, produced on a held-out training instance.
/// Returns the schedule and its objective on that instance.
fn regime_angles(
    regime: Regime,
    p: usize,
    train: &Simulator,
    opt_seed: u64,
    budget: &OptBudget,
    bands: &MedBands,
) -> Result<(AngleSchedule, f64)> {
    let full = |direction: Direction| -> Result<(AngleSchedule, f64)> {
        let r = multistart(train, p, budget.restarts, direction, opt_seed, &budget.search)?;
        Ok((r.best_angles, r.best_value))
    };
    let banded = |direction: Direction, band: (f64, f64)| -> Result<(AngleSchedule, f64)> {
        // Restarts run one at a time: almost every search path crosses the
        // band, so the first restart nearly always settles it. If none stops
        // inside, keep the value closest to the band midpoint.
        let options = SearchOptions { stop_band: Some(band), ..budget.search };
        let mid = (band.0 + band.1) / 2.0;
        let mut closest: Option<(AngleSchedule, f64)> = None;
        for i in 0..budget.restarts as u64 {
            let start = AngleSchedule::random(p, &mut stream(opt_seed, "restart", i));
            let mut session = train.session();
            let mut f = |x: &[f64]| {
                session.objective(&AngleSchedule::from_flat(x).expect("search keeps dimensions"))
            };
            let out = local_search(&mut f, &start, direction, &options)?;
            let better = match &closest {
                None => true,
                Some((_, value)) => (out.value - mid).abs() < (value - mid).abs(),
            };
            if better {
                closest = Some((out.angles.clone(), out.value));
            }
            if (band.0..=band.1).contains(&out.value) {
                break;
            }
        }
        Ok(closest.expect("at least one restart"))
    };

    match regime {
        Regime::Low => full(Direction::Minimize),
        Regime::High => full(Direction::Maximize),
        Regime::MedLow => banded(Direction::Minimize, bands.low),
        Regime::MedHigh => banded(Direction::Maximize, bands.high),
        Regime::Random => {
            let angles = AngleSchedule::random(p, &mut stream(opt_seed, "random-angles", 0));
            let value = train.objective(&angles);
            Ok((angles, value))
        }
    }
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample standard deviation with the `N-1` denominator; 0 with a flag for a
/// single sample.
fn sample_std(values: &[f64]) -> (f64, bool) {
    if values.len() < 2 {
        return (0.0, true);
    }
    let m = mean(values);
    let var = values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (values.len() - 1) as f64;
    (var.sqrt(), false)
}

/// One `(p, regime)` cell of a concentration run.
#[derive(Debug, Clone)]
pub struct ConcentrationCell {
    pub p: usize,
    pub regime: Regime,
    pub angles: AngleSchedule,
    /// Objective of the angle set on its held-out training instance.
    pub angle_value: f64,
    pub train_seed: u64,
    pub opt_seed: u64,
    pub instance_seeds: Vec<u64>,
    pub values: Vec<f64>,
    pub mean: f64,
    pub std: f64,
    pub single_sample: bool,
    /// Set when instance generation failed mid-cell.
    pub error: Option<String>,
}

/// Mean/std of the objective across fresh instances at fixed angles, one
/// cell per `(p, regime)`.
#[derive(Debug, Clone)]
pub struct ConcentrationReport {
    pub spec: InstanceSpec,
    pub instances_per_cell: usize,
    pub root_seed: u64,
    pub cells: Vec<ConcentrationCell>,
    /// True when any cell failed to generate its instances.
    pub partial: bool,
}

/// For each depth and regime: fix one angle set on a held-out instance, then
/// evaluate it on `instances_per_cell` freshly tossed instances.
#[allow(clippy::too_many_arguments)]
pub fn concentration_table(
    p_list: &[usize],
    regimes: &[Regime],
    instances_per_cell: usize,
    spec: &InstanceSpec,
    seed: u64,
    budget: &OptBudget,
    bands: &MedBands,
    caps: &Caps,
) -> Result<ConcentrationReport> {
    if p_list.is_empty() || regimes.is_empty() || instances_per_cell == 0 {
        return Err(Error::InvalidParameter(
            "concentration needs depths, regimes, and at least one instance per cell".into(),
        ));
    }
    if spec.n > caps.sim_qubits {
        return Err(Error::ResourceCap(format!(
            "{} qubits exceeds the simulator cap of {}",
            spec.n, caps.sim_qubits
        )));
    }
    let mut cells = Vec::with_capacity(p_list.len() * regimes.len());
    let mut partial = false;
    for (pi, &p) in p_list.iter().enumerate() {
        for (ri, &regime) in regimes.iter().enumerate() {
            let cell_id = (pi * regimes.len() + ri) as u64;
            match run_concentration_cell(
                p,
                regime,
                cell_id,
                instances_per_cell,
                spec,
                seed,
                budget,
                bands,
                caps,
            ) {
                Ok(cell) => cells.push(cell),
                Err(Error::GenerationFailure { attempts, histogram }) => {
                    partial = true;
                    let err = Error::GenerationFailure { attempts, histogram };
                    cells.push(ConcentrationCell {
                        p,
                        regime,
                        angles: AngleSchedule::zeros(p),
                        angle_value: f64::NAN,
                        train_seed: stream_seed(seed, "train-graph", cell_id),
                        opt_seed: stream_seed(seed, "opt", cell_id),
                        instance_seeds: Vec::new(),
                        values: Vec::new(),
                        mean: f64::NAN,
                        std: f64::NAN,
                        single_sample: false,
                        error: Some(err.to_string()),
                    });
                }
                Err(other) => return Err(other),
            }
        }
    }
    Ok(ConcentrationReport { spec: *spec, instances_per_cell, root_seed: seed, cells, partial })
}

#[allow(clippy::too_many_arguments)]
fn run_concentration_cell(
    p: usize,
    regime: Regime,
    cell_id: u64,
    instances_per_cell: usize,
    spec: &InstanceSpec,
    seed: u64,
    budget: &OptBudget,
    bands: &MedBands,
    caps: &Caps,
) -> Result<ConcentrationCell> {
    let train_seed = stream_seed(seed, "train-graph", cell_id);
    let opt_seed = stream_seed(seed, "opt", cell_id);
    let train_graph = spec.toss(&mut stream(seed, "train-graph", cell_id), caps)?;
    let train_sim = Simulator::new(&train_graph, caps.sim_qubits)?;
    let (angles, angle_value) = regime_angles(regime, p, &train_sim, opt_seed, budget, bands)?;

    let instance_seeds: Vec<u64> = (0..instances_per_cell as u64)
        .map(|k| stream_seed(seed, "eval-graph", cell_id << 32 | k))
        .collect();
    let values: Vec<f64> = (0..instances_per_cell as u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = stream(seed, "eval-graph", cell_id << 32 | k);
            let g = spec.toss_excluding(&mut rng, caps, Some(&train_graph))?;
            Ok(Simulator::new(&g, caps.sim_qubits)?.objective(&angles))
        })
        .collect::<Result<_>>()?;
    let (std, single_sample) = sample_std(&values);
    Ok(ConcentrationCell {
        p,
        regime,
        angles,
        angle_value,
        train_seed,
        opt_seed,
        instance_seeds,
        mean: mean(&values),
        std,
        single_sample,
        values,
        error: None,
    })
}

/// Per-edge expectations across instances: entry `(alpha, k)` is the
/// expectation of clause `alpha` on instance `k` after label permutation.
#[derive(Debug, Clone)]
pub struct EdgeExpectationMatrix {
    m: usize,
    /// `columns[k][alpha]`.
    columns: Vec<Vec<f64>>,
    /// Independently accumulated objective of each instance.
    objectives: Vec<f64>,
}

impl EdgeExpectationMatrix {
    /// Builds a matrix directly from columns (hand examples and tests).
    pub fn from_columns(columns: Vec<Vec<f64>>) -> Result<Self> {
        let m = columns.first().map(Vec::len).ok_or_else(|| {
            Error::InvalidParameter("expectation matrix needs at least one column".into())
        })?;
        if columns.iter().any(|c| c.len() != m) {
            return Err(Error::InvalidParameter("ragged expectation matrix".into()));
        }
        let objectives = columns.iter().map(|c| c.iter().sum()).collect();
        Ok(Self { m, columns, objectives })
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn instance_count(&self) -> usize {
        self.columns.len()
    }

    pub fn entry(&self, alpha: usize, k: usize) -> f64 {
        self.columns[k][alpha]
    }

    pub fn column(&self, k: usize) -> &[f64] {
        &self.columns[k]
    }

    pub fn column_sum(&self, k: usize) -> f64 {
        self.columns[k].iter().sum()
    }

    /// Objectives as accumulated by the simulator, one per instance.
    pub fn objectives(&self) -> &[f64] {
        &self.objectives
    }
}

/// Evaluates `angles` on every graph: permute the edge labels on substream
/// `(seed, "perm", k)`, then store the per-edge expectations as column `k`.
pub fn build_expectation_matrix(
    graphs: &[Graph],
    angles: &AngleSchedule,
    seed: u64,
    caps: &Caps,
) -> Result<EdgeExpectationMatrix> {
    let m = match graphs.first() {
        None => return Err(Error::InvalidParameter("need at least one instance".into())),
        Some(g) => g.m(),
    };
    if graphs.iter().any(|g| g.m() != m) {
        return Err(Error::InvalidParameter("instances must share the same edge count".into()));
    }
    let per_instance: Vec<(Vec<f64>, f64)> = graphs
        .par_iter()
        .enumerate()
        .map(|(k, g)| {
            let permuted = g.permute_edge_labels(&mut stream(seed, "perm", k as u64));
            let sim = Simulator::new(&permuted, caps.sim_qubits)?;
            let (objective, edges) = sim.objective_and_edges(angles);
            Ok((edges, objective))
        })
        .collect::<Result<_>>()?;
    let (columns, objectives) = per_instance.into_iter().unzip();
    Ok(EdgeExpectationMatrix { m, columns, objectives })
}

/// The correlation estimate and its ingredients.
#[derive(Debug, Clone, Copy)]
pub struct CorrelationReport {
    pub instances: usize,
    pub m: usize,
    /// Mean of the per-instance objectives.
    pub f_bar: f64,
    /// Sample variance of the objectives (`N-1` denominator).
    pub var_f: f64,
    /// Mean per-clause expectation, `f_bar / m`.
    pub c_bar: f64,
    /// Pooled per-clause variance over all `m*N` samples (`mN-1` denominator).
    pub var_c1: f64,
    /// Estimated pairwise clause correlation.
    pub corr: f64,
}

impl CorrelationReport {
    pub fn std_f(&self) -> f64 {
        self.var_f.sqrt()
    }
}

/// Estimates the pairwise correlation between clause expectations from the
/// spread of the per-instance objectives against the pooled per-clause
/// variance:
///
/// ```text
/// corr = (var_f / (m * var_c1) - 1) / (m - 1)
/// ```
///
/// which is always `>= -1/(m-1)`.
pub fn correlation_stats(matrix: &EdgeExpectationMatrix) -> Result<CorrelationReport> {
    let n = matrix.instance_count();
    let m = matrix.edge_count();
    if n < 2 || m < 2 {
        return Err(Error::InvalidParameter(format!(
            "correlation estimate needs N >= 2 and m >= 2 (got N = {n}, m = {m})"
        )));
    }
    let f_samples: Vec<f64> = (0..n).map(|k| matrix.column_sum(k)).collect();
    let f_bar = mean(&f_samples);
    let var_f = f_samples.iter().map(|f| (f - f_bar).powi(2)).sum::<f64>() / (n - 1) as f64;
    let c_bar = f_bar / m as f64;
    let var_c1 = (0..n)
        .map(|k| matrix.column(k).iter().map(|c| (c - c_bar).powi(2)).sum::<f64>())
        .sum::<f64>()
        / (m * n - 1) as f64;
    if var_c1 == 0.0 {
        return Err(Error::Degenerate("per-clause variance is zero; correlation undefined".into()));
    }
    let corr = (var_f / (m as f64 * var_c1) - 1.0) / (m - 1) as f64;
    Ok(CorrelationReport { instances: n, m, f_bar, var_f, c_bar, var_c1, corr })
}

/// One regime row of a correlation experiment.
#[derive(Debug, Clone)]
pub struct CorrelationRow {
    pub regime: Regime,
    pub angles: AngleSchedule,
    pub angle_value: f64,
    pub stats: CorrelationReport,
    pub train_seed: u64,
    pub opt_seed: u64,
    pub perm_seed: u64,
    pub graph_seeds: Vec<u64>,
}

/// Correlation estimates per regime at fixed depth.
#[derive(Debug, Clone)]
pub struct CorrelationExperiment {
    pub spec: InstanceSpec,
    pub p: usize,
    pub instances: usize,
    pub root_seed: u64,
    pub rows: Vec<CorrelationRow>,
}

/// For each regime: fix angles on a held-out instance, toss `instances`
/// fresh graphs, build the expectation matrix, and estimate the correlation.
#[allow(clippy::too_many_arguments)]
pub fn correlation_experiment(
    spec: &InstanceSpec,
    p: usize,
    regimes: &[Regime],
    instances: usize,
    seed: u64,
    budget: &OptBudget,
    bands: &MedBands,
    caps: &Caps,
) -> Result<CorrelationExperiment> {
    if regimes.is_empty() || instances < 2 {
        return Err(Error::InvalidParameter(
            "correlation experiment needs regimes and at least two instances".into(),
        ));
    }
    let mut rows = Vec::with_capacity(regimes.len());
    for (ri, &regime) in regimes.iter().enumerate() {
        let cell_id = ri as u64;
        let train_seed = stream_seed(seed, "train-graph", cell_id);
        let opt_seed = stream_seed(seed, "opt", cell_id);
        let train_graph = spec.toss(&mut stream(seed, "train-graph", cell_id), caps)?;
        let train_sim = Simulator::new(&train_graph, caps.sim_qubits)?;
        let (angles, angle_value) = regime_angles(regime, p, &train_sim, opt_seed, budget, bands)?;

        let graph_seeds: Vec<u64> = (0..instances as u64)
            .map(|k| stream_seed(seed, "corr-graph", cell_id << 32 | k))
            .collect();
        let graphs: Vec<Graph> = (0..instances as u64)
            .into_par_iter()
            .map(|k| {
                let mut rng = stream(seed, "corr-graph", cell_id << 32 | k);
                spec.toss_excluding(&mut rng, caps, Some(&train_graph))
            })
            .collect::<Result<_>>()?;
        let perm_seed = stream_seed(seed, "corr-perm", cell_id);
        let matrix = build_expectation_matrix(&graphs, &angles, perm_seed, caps)?;
        let stats = correlation_stats(&matrix)?;
        rows.push(CorrelationRow {
            regime,
            angles,
            angle_value,
            stats,
            train_seed,
            opt_seed,
            perm_seed,
            graph_seeds,
        });
    }
    Ok(CorrelationExperiment { spec: *spec, p, instances, root_seed: seed, rows })
}

/// One evaluation instance of a transfer run.
#[derive(Debug, Clone, Copy)]
pub struct TransferEval {
    pub seed: u64,
    pub cmax: u32,
    pub objective: f64,
    pub ratio: f64,
}

/// Angles trained at one size, frozen, and scored at another.
#[derive(Debug, Clone)]
pub struct TransferReport {
    pub n_train: usize,
    pub n_eval: usize,
    pub d: usize,
    pub p: usize,
    pub restarts: usize,
    pub root_seed: u64,
    pub train_seed: u64,
    pub opt_seed: u64,
    pub train_cmax: u32,
    pub train_value: f64,
    pub train_ratio: f64,
    pub angles: AngleSchedule,
    pub evals: Vec<TransferEval>,
    pub mean_ratio: f64,
    pub std_ratio: f64,
}

/// Maximize on one instance at `n_train`, freeze the angles, then score the
/// approximation ratio on `eval_count` fresh instances at `n_eval` with no
/// re-optimization.
#[allow(clippy::too_many_arguments)]
pub fn transfer_experiment(
    n_train: usize,
    n_eval: usize,
    d: usize,
    p: usize,
    restarts: usize,
    eval_count: usize,
    seed: u64,
    options: &SearchOptions,
    caps: &Caps,
) -> Result<TransferReport> {
    for n in [n_train, n_eval] {
        if n > caps.sim_qubits || n > caps.brute_force_qubits {
            return Err(Error::ResourceCap(format!("transfer size {n} exceeds a configured cap")));
        }
    }
    let train_seed = stream_seed(seed, "train-graph", 0);
    let opt_seed = stream_seed(seed, "opt", 0);
    let train_graph =
        graph::regular(n_train, d, &mut stream(seed, "train-graph", 0), caps.generation_retries)?;
    let train_cut = graph::brute_force_maxcut(&train_graph, caps.brute_force_qubits)?;
    let train_sim = Simulator::new(&train_graph, caps.sim_qubits)?;
    let result = multistart(&train_sim, p, restarts, Direction::Maximize, opt_seed, options)?;
    let train_ratio = approximation_ratio(result.best_value, train_cut.value)?;
    let angles = result.best_angles;

    let evals: Vec<TransferEval> = (0..eval_count as u64)
        .into_par_iter()
        .map(|k| {
            let eval_seed = stream_seed(seed, "eval-graph", k);
            let mut rng = stream(seed, "eval-graph", k);
            let g = graph::regular(n_eval, d, &mut rng, caps.generation_retries)?;
            let cut = graph::brute_force_maxcut(&g, caps.brute_force_qubits)?;
            let objective = Simulator::new(&g, caps.sim_qubits)?.objective(&angles);
            Ok(TransferEval {
                seed: eval_seed,
                cmax: cut.value,
                objective,
                ratio: approximation_ratio(objective, cut.value)?,
            })
        })
        .collect::<Result<_>>()?;
    let ratios: Vec<f64> = evals.iter().map(|e| e.ratio).collect();
    let (std_ratio, _) = sample_std(&ratios);
    Ok(TransferReport {
        n_train,
        n_eval,
        d,
        p,
        restarts,
        root_seed: seed,
        train_seed,
        opt_seed,
        train_cmax: train_cut.value,
        train_value: result.best_value,
        train_ratio,
        angles,
        mean_ratio: mean(&ratios),
        std_ratio,
        evals,
    })
}

/// Bounded-difference (Hoeffding/McDiarmid-type) tail bound: the probability
/// that a function of `flips` independent bits, each moving the value by at
/// most `c`, deviates from its mean by more than `t` is below
/// `exp(-2 t^2 / (flips * c^2))`.
pub fn mcdiarmid_bound(t: f64, flips: u64, c: f64) -> Result<f64> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidParameter(format!("deviation t = {t} must be >= 0")));
    }
    if flips < 1 {
        return Err(Error::InvalidParameter("need at least one bit".into()));
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidParameter(format!("sensitivity c = {c} must be > 0")));
    }
    Ok((-2.0 * t * t / (flips as f64 * c * c)).exp().min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    fn caps() -> Caps {
        Caps::default()
    }

    fn small_budget() -> OptBudget {
        OptBudget { restarts: 2, search: SearchOptions { max_iters: 60, ..Default::default() } }
    }

    #[test]
    fn mcdiarmid_bound_values() {
        assert_eq!(mcdiarmid_bound(0.0, 10, 1.0).unwrap(), 1.0);
        // 2 t^2 = L c^2  =>  exp(-1).
        let b = mcdiarmid_bound(2.0, 8, 1.0).unwrap();
        assert!((b - (-1.0f64).exp()).abs() < 1e-15);
        // t = n, L = n(n-1)/2, c = 1 at n = 20: exp(-80/19).
        let b = mcdiarmid_bound(20.0, 190, 1.0).unwrap();
        assert!((b - (-80.0f64 / 19.0).exp()).abs() < 1e-15);
        assert!((b - 0.01484).abs() < 5e-6);
        assert!(mcdiarmid_bound(-1.0, 10, 1.0).is_err());
        assert!(mcdiarmid_bound(1.0, 0, 1.0).is_err());
        assert!(mcdiarmid_bound(1.0, 10, 0.0).is_err());
    }

    #[test]
    fn correlation_hand_example() {
        // Two clauses, two instances, columns (0,0) and (1,1).
        let matrix =
            EdgeExpectationMatrix::from_columns(vec![vec![0.0, 0.0], vec![1.0, 1.0]]).unwrap();
        let stats = correlation_stats(&matrix).unwrap();
        assert_eq!(stats.f_bar, 1.0);
        assert_eq!(stats.var_f, 2.0);
        assert_eq!(stats.c_bar, 0.5);
        assert_eq!(stats.var_c1, 1.0 / 3.0);
        let expected_corr = (2.0 / (2.0 * (1.0 / 3.0)) - 1.0) / 1.0;
        assert_eq!(stats.corr, expected_corr);
        assert!((stats.corr - 2.0).abs() < 1e-12);
    }

    #[test]
    fn zero_correlation_when_variances_balance() {
        // var_f = m * var_c1 by construction: columns (0,0) and (1,0).
        let matrix =
            EdgeExpectationMatrix::from_columns(vec![vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
        let stats = correlation_stats(&matrix).unwrap();
        assert_eq!(stats.var_f, 0.5);
        assert_eq!(stats.var_c1, 0.25);
        assert_eq!(stats.corr, 0.0);
    }

    #[test]
    fn constant_matrix_is_degenerate() {
        let matrix =
            EdgeExpectationMatrix::from_columns(vec![vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        assert!(matches!(correlation_stats(&matrix).unwrap_err(), Error::Degenerate(_)));
    }

    #[test]
    fn correlation_respects_the_lower_bound() {
        for seed in 0..20u64 {
            let mut rng = stream(seed, "corr-lb", 0);
            let m = 3 + (seed % 4) as usize;
            let columns: Vec<Vec<f64>> =
                (0..4).map(|_| (0..m).map(|_| rng.gen::<f64>()).collect()).collect();
            let matrix = EdgeExpectationMatrix::from_columns(columns).unwrap();
            let stats = correlation_stats(&matrix).unwrap();
            assert!(stats.corr >= -1.0 / (m as f64 - 1.0) - 1e-12);
        }
    }

    #[test]
    fn correlation_stats_needs_enough_data() {
        let one_col = EdgeExpectationMatrix::from_columns(vec![vec![0.1, 0.4]]).unwrap();
        assert!(correlation_stats(&one_col).is_err());
        let one_row = EdgeExpectationMatrix::from_columns(vec![vec![0.1], vec![0.4]]).unwrap();
        assert!(correlation_stats(&one_row).is_err());
    }

    #[test]
    fn expectation_matrix_at_zero_angles_is_half_everywhere() {
        let spec = InstanceSpec { n: 8, d: 3, target_cmax: None };
        let graphs: Vec<Graph> = (0..3u64)
            .map(|k| spec.toss(&mut stream(3, "mat-graph", k), &caps()).unwrap())
            .collect();
        let angles = AngleSchedule::zeros(2);
        let matrix = build_expectation_matrix(&graphs, &angles, 5, &caps()).unwrap();
        assert_eq!(matrix.edge_count(), 12);
        assert_eq!(matrix.instance_count(), 3);
        for k in 0..3 {
            for alpha in 0..matrix.edge_count() {
                assert!((matrix.entry(alpha, k) - 0.5).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn expectation_matrix_column_sums_match_objectives() {
        let spec = InstanceSpec { n: 10, d: 3, target_cmax: None };
        let graphs: Vec<Graph> = (0..4u64)
            .map(|k| spec.toss(&mut stream(7, "mat-graph", k), &caps()).unwrap())
            .collect();
        let angles = AngleSchedule::random(3, &mut stream(7, "mat-angles", 0));
        let matrix = build_expectation_matrix(&graphs, &angles, 9, &caps()).unwrap();
        for (k, &objective) in matrix.objectives().iter().enumerate() {
            assert!((matrix.column_sum(k) - objective).abs() < 1e-9);
        }
    }

    #[test]
    fn expectation_matrix_rejects_mismatched_instances() {
        let g1 = Graph::petersen();
        let g2 = Graph::complete(4);
        let angles = AngleSchedule::zeros(1);
        assert!(build_expectation_matrix(&[g1, g2], &angles, 1, &caps()).is_err());
        assert!(build_expectation_matrix(&[], &angles, 1, &caps()).is_err());
    }

    #[test]
    fn concentration_regimes_order_and_concentrate() {
        let spec = InstanceSpec { n: 8, d: 3, target_cmax: None };
        let report = concentration_table(
            &[1],
            &[Regime::Low, Regime::Random, Regime::High],
            4,
            &spec,
            11,
            &small_budget(),
            &MedBands::default(),
            &caps(),
        )
        .unwrap();
        assert!(!report.partial);
        assert_eq!(report.cells.len(), 3);
        let by_regime = |r: Regime| report.cells.iter().find(|c| c.regime == r).unwrap();
        let (low, random, high) =
            (by_regime(Regime::Low), by_regime(Regime::Random), by_regime(Regime::High));
        assert!(low.mean < random.mean && random.mean < high.mean);
        for cell in &report.cells {
            assert_eq!(cell.values.len(), 4);
            assert_eq!(cell.instance_seeds.len(), 4);
            assert!(cell.std >= 0.0 && !cell.single_sample);
            assert!(cell.error.is_none());
        }
    }

    #[test]
    fn concentration_is_deterministic() {
        let spec = InstanceSpec { n: 8, d: 3, target_cmax: None };
        let run = || {
            concentration_table(
                &[1],
                &[Regime::Random],
                3,
                &spec,
                13,
                &small_budget(),
                &MedBands::default(),
                &caps(),
            )
            .unwrap()
        };
        let (a, b) = (run(), run());
        assert_eq!(a.cells[0].values, b.cells[0].values);
        assert_eq!(a.cells[0].angles, b.cells[0].angles);
    }

    #[test]
    fn concentration_single_sample_flag() {
        let spec = InstanceSpec { n: 6, d: 3, target_cmax: None };
        let report = concentration_table(
            &[1],
            &[Regime::Random],
            1,
            &spec,
            17,
            &small_budget(),
            &MedBands::default(),
            &caps(),
        )
        .unwrap();
        assert!(report.cells[0].single_sample);
        assert_eq!(report.cells[0].std, 0.0);
    }

    #[test]
    fn concentration_flags_partial_results_on_generation_failure() {
        // An impossible maxcut target makes the cell fail generation.
        let spec = InstanceSpec { n: 4, d: 3, target_cmax: Some(6) };
        let tight = Caps { generation_retries: 20, ..Caps::default() };
        let report = concentration_table(
            &[1],
            &[Regime::Random],
            2,
            &spec,
            19,
            &small_budget(),
            &MedBands::default(),
            &tight,
        )
        .unwrap();
        assert!(report.partial);
        assert!(report.cells[0].error.is_some());
        assert!(report.cells[0].values.is_empty());
    }

    #[test]
    fn med_regimes_stop_inside_custom_bands() {
        // On an m = 12 instance the objective starts near 6; bands are
        // scaled to this size.
        let spec = InstanceSpec { n: 8, d: 3, target_cmax: None };
        let bands = MedBands { low: (4.0, 5.0), high: (7.5, 8.5) };
        let report = concentration_table(
            &[2],
            &[Regime::MedLow, Regime::MedHigh],
            2,
            &spec,
            23,
            &OptBudget { restarts: 4, search: SearchOptions::default() },
            &bands,
            &caps(),
        )
        .unwrap();
        let med_low = &report.cells[0];
        let med_high = &report.cells[1];
        assert!(
            med_low.angle_value > 3.5 && med_low.angle_value < 5.5,
            "med-low landed at {}",
            med_low.angle_value
        );
        assert!(
            med_high.angle_value > 7.0 && med_high.angle_value < 9.0,
            "med-high landed at {}",
            med_high.angle_value
        );
    }

    #[test]
    fn transfer_scores_fresh_instances() {
        let options = SearchOptions { max_iters: 80, ..Default::default() };
        let report = transfer_experiment(6, 8, 3, 2, 4, 5, 31, &options, &caps()).unwrap();
        assert_eq!(report.evals.len(), 5);
        assert!(report.train_ratio > 0.5 && report.train_ratio <= 1.0);
        for eval in &report.evals {
            assert!(eval.ratio > 0.0 && eval.ratio <= 1.0 + 1e-12);
        }
        assert!(report.std_ratio >= 0.0);

        // Scoring the training instance itself reproduces the training ratio.
        let train_graph =
            graph::regular(6, 3, &mut stream(31, "train-graph", 0), caps().generation_retries)
                .unwrap();
        let sim = Simulator::new(&train_graph, caps().sim_qubits).unwrap();
        let f = sim.objective(&report.angles);
        assert_eq!(f, report.train_value);
        assert_eq!(f / f64::from(report.train_cmax), report.train_ratio);
    }

    #[test]
    fn transfer_respects_caps() {
        let options = SearchOptions::default();
        let tight = Caps { sim_qubits: 10, ..Caps::default() };
        assert!(matches!(
            transfer_experiment(6, 12, 3, 2, 2, 2, 1, &options, &tight).unwrap_err(),
            Error::ResourceCap(_)
        ));
    }
}
