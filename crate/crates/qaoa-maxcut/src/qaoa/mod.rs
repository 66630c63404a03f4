//! Exact statevector simulation of the QAOA circuit for MaxCut.
//!
//! Convention, pinned by tests: bit `j` of a basis index is the value of
//! qubit `j`, so the amplitude at index `z` belongs to the assignment whose
//! vertex `j` sits on side `(z >> j) & 1`.
//!
//! Real and imaginary parts live in separate arrays so the butterfly and
//! phase kernels compile to straight fused-multiply streams. Parallel loops
//! use a fixed tile size and combine partial results in tile order, so every
//! number produced here is bitwise identical for any worker-thread count.

mod angles;

pub use angles::AngleSchedule;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Fixed tile size for deterministic parallel sweeps over the amplitude
/// array. Must be a power of two.
const PAR_CHUNK_BITS: usize = 15;
const PAR_CHUNK: usize = 1 << PAR_CHUNK_BITS;

/// A `2^n`-amplitude state.
#[derive(Debug, Clone)]
pub struct StateVector {
    n: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl StateVector {
    /// Builds a state from explicit amplitudes (diagnostics and tests).
    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1usize << n {
            return Err(Error::InvalidParameter(format!(
                "{} amplitudes do not form an {n}-qubit state",
                amps.len()
            )));
        }
        Ok(Self {
            n,
            re: amps.iter().map(|a| a.re).collect(),
            im: amps.iter().map(|a| a.im).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.re.len()
    }

    pub fn is_empty(&self) -> bool {
        self.re.is_empty()
    }

    pub fn amplitude(&self, z: u64) -> Complex64 {
        Complex64::new(self.re[z as usize], self.im[z as usize])
    }

    /// Materializes the amplitudes (small states; diagnostics and tests).
    pub fn amplitudes(&self) -> Vec<Complex64> {
        self.re.iter().zip(&self.im).map(|(&r, &i)| Complex64::new(r, i)).collect()
    }

    /// Squared-magnitude sum; 1 within 1e-9 after any layer sequence.
    pub fn norm_sqr(&self) -> f64 {
        let partials: Vec<f64> = self
            .re
            .par_chunks(PAR_CHUNK)
            .zip(self.im.par_chunks(PAR_CHUNK))
            .map(|(re, im)| re.iter().zip(im).map(|(r, i)| r * r + i * i).sum())
            .collect();
        partials.into_iter().sum()
    }

    pub fn probability(&self, z: u64) -> f64 {
        let (r, i) = (self.re[z as usize], self.im[z as usize]);
        r * r + i * i
    }
}

/// Number of cut edges per assignment, tabulated once per graph.
#[derive(Debug, Clone)]
pub struct CostTable {
    m: u32,
    values: Vec<u32>,
}

impl CostTable {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, z: u64) -> u32 {
        self.values[z as usize]
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    /// Largest entry, i.e. the MaxCut value.
    pub fn max_value(&self) -> u32 {
        self.values.iter().copied().max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> u32 {
        self.m
    }
}

/// The uniform superposition on `n` qubits.
pub fn uniform_state(n: usize, cap: usize) -> Result<StateVector> {
    check_qubit_count(n, cap)?;
    Ok(uniform_unchecked(n))
}

fn uniform_amp(n: usize) -> f64 {
    // sqrt of an exact power of two: exact for even n, correctly rounded
    // for odd n.
    (1.0 / (1u64 << n) as f64).sqrt()
}

fn uniform_unchecked(n: usize) -> StateVector {
    StateVector { n, re: vec![uniform_amp(n); 1 << n], im: vec![0.0; 1 << n] }
}

/// Tabulates the cut count of every assignment.
pub fn cost_table(g: &Graph, cap: usize) -> Result<CostTable> {
    if g.n() > cap {
        return Err(Error::ResourceCap(format!(
            "cost table on {} qubits exceeds the cap of {cap}",
            g.n()
        )));
    }
    let edges = g.edges();
    let mut values = vec![0u32; 1usize << g.n()];
    values.par_chunks_mut(PAR_CHUNK).enumerate().for_each(|(chunk_index, chunk)| {
        let base = (chunk_index * PAR_CHUNK) as u64;
        for (offset, slot) in chunk.iter_mut().enumerate() {
            let z = base + offset as u64;
            let mut cut = 0u32;
            for &(u, v) in edges {
                cut += ((z >> u ^ z >> v) & 1) as u32;
            }
            *slot = cut;
        }
    });
    Ok(CostTable { m: g.m() as u32, values })
}

/// Per-cost-value phase factors for `exp(-i * gamma * C(z))`.
struct PhaseTable {
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl PhaseTable {
    fn new(gamma: f64, m: u32) -> Self {
        let angles = (0..=m).map(|c| -gamma * f64::from(c));
        let (cos, sin) = angles.map(|a| (a.cos(), a.sin())).unzip();
        Self { cos, sin }
    }
}

#[inline(always)]
fn phase_tile(re: &mut [f64], im: &mut [f64], costs: &[u32], phases: &PhaseTable) {
    for ((r, i), &c) in re.iter_mut().zip(im.iter_mut()).zip(costs) {
        let (pc, ps) = (phases.cos[c as usize], phases.sin[c as usize]);
        let (r0, i0) = (*r, *i);
        *r = r0 * pc - i0 * ps;
        *i = i0 * pc + r0 * ps;
    }
}

/// In-place pair rotation: `(a0, a1) -> (c*a0 - i*s*a1, -i*s*a0 + c*a1)` on
/// four contiguous lanes, the vectorizable core of the mixer.
#[inline(always)]
fn butterfly_slices(
    re_lo: &mut [f64],
    im_lo: &mut [f64],
    re_hi: &mut [f64],
    im_hi: &mut [f64],
    c: f64,
    s: f64,
) {
    for k in 0..re_lo.len() {
        let (r0, i0, r1, i1) = (re_lo[k], im_lo[k], re_hi[k], im_hi[k]);
        re_lo[k] = c * r0 + s * i1;
        im_lo[k] = c * i0 - s * r1;
        re_hi[k] = c * r1 + s * i0;
        im_hi[k] = c * i1 - s * r0;
    }
}

/// Rotates all qubits below `low` inside one cache-resident tile.
#[inline(always)]
fn mixer_tile(re: &mut [f64], im: &mut [f64], low: usize, c: f64, s: f64) {
    for qubit in 0..low {
        let stride = 1usize << qubit;
        for (re_block, im_block) in
            re.chunks_exact_mut(2 * stride).zip(im.chunks_exact_mut(2 * stride))
        {
            let (re_lo, re_hi) = re_block.split_at_mut(stride);
            let (im_lo, im_hi) = im_block.split_at_mut(stride);
            butterfly_slices(re_lo, im_lo, re_hi, im_hi, c, s);
        }
    }
}

/// Shares raw pointers with rayon workers that write disjoint indices.
struct SendPtr(*mut f64);

unsafe impl Send for SendPtr {}
unsafe impl Sync for SendPtr {}

/// Rotates the qubits above the tile boundary. The array is a
/// (rows = 2^high) x (cols = tile size) matrix; every column holds one
/// independent butterfly problem over the high bits, gathered into a small
/// scratch buffer and scattered back.
fn rotate_high_qubits(re: &mut [f64], im: &mut [f64], high: usize, c: f64, s: f64) {
    const COL_BLOCK: usize = 512;
    let cols = PAR_CHUNK;
    let rows = 1usize << high;
    let re_ptr = SendPtr(re.as_mut_ptr());
    let im_ptr = SendPtr(im.as_mut_ptr());
    (0..cols / COL_BLOCK).into_par_iter().for_each(|block| {
        let (re_ptr, im_ptr) = (&re_ptr, &im_ptr);
        let mut buf_re = vec![0.0f64; rows];
        let mut buf_im = vec![0.0f64; rows];
        for col in block * COL_BLOCK..(block + 1) * COL_BLOCK {
            // SAFETY: distinct columns address distinct indices
            // `row * cols + col`, and each column belongs to exactly one
            // rayon task, so writes never overlap.
            unsafe {
                for row in 0..rows {
                    buf_re[row] = *re_ptr.0.add(row * cols + col);
                    buf_im[row] = *im_ptr.0.add(row * cols + col);
                }
            }
            for bit in 0..high {
                let stride = 1usize << bit;
                for (re_block, im_block) in
                    buf_re.chunks_exact_mut(2 * stride).zip(buf_im.chunks_exact_mut(2 * stride))
                {
                    let (re_lo, re_hi) = re_block.split_at_mut(stride);
                    let (im_lo, im_hi) = im_block.split_at_mut(stride);
                    butterfly_slices(re_lo, im_lo, re_hi, im_hi, c, s);
                }
            }
            unsafe {
                for row in 0..rows {
                    *re_ptr.0.add(row * cols + col) = buf_re[row];
                    *im_ptr.0.add(row * cols + col) = buf_im[row];
                }
            }
        }
    });
}

/// Multiplies each amplitude by `exp(-i * gamma * C(z))`.
pub fn apply_cost_layer(state: &mut StateVector, table: &CostTable, gamma: f64) -> Result<()> {
    if state.len() != table.len() {
        return Err(Error::InvalidParameter(format!(
            "state on {} amplitudes does not match cost table on {}",
            state.len(),
            table.len()
        )));
    }
    let phases = PhaseTable::new(gamma, table.m);
    state
        .re
        .par_chunks_mut(PAR_CHUNK)
        .zip(state.im.par_chunks_mut(PAR_CHUNK))
        .zip(table.values.par_chunks(PAR_CHUNK))
        .for_each(|((re, im), costs)| phase_tile(re, im, costs, &phases));
    Ok(())
}

/// Applies `exp(-i * beta * X_j)` on every qubit `j`: each amplitude pair
/// `(a0, a1)` differing in one bit maps to
/// `(cos(beta)*a0 - i*sin(beta)*a1, -i*sin(beta)*a0 + cos(beta)*a1)`.
///
/// The sweep touches memory twice instead of once per qubit: qubits below
/// the tile size rotate inside cache-resident tiles, and all higher qubits
/// rotate together in one gathered pass over tile columns. Qubit order is
/// fixed (the rotations commute), so results are bitwise reproducible.
pub fn apply_mixer_layer(state: &mut StateVector, beta: f64) {
    let (c, s) = (beta.cos(), beta.sin());
    let n = state.n;
    let low = n.min(PAR_CHUNK_BITS);
    state
        .re
        .par_chunks_mut(PAR_CHUNK)
        .zip(state.im.par_chunks_mut(PAR_CHUNK))
        .for_each(|(re, im)| mixer_tile(re, im, low, c, s));
    if n > PAR_CHUNK_BITS {
        rotate_high_qubits(&mut state.re, &mut state.im, n - PAR_CHUNK_BITS, c, s);
    }
}

/// A graph plus its cost table, ready for repeated evaluations at different
/// angles.
#[derive(Debug, Clone)]
pub struct Simulator {
    n: usize,
    edges: Vec<(u32, u32)>,
    table: CostTable,
}

impl Simulator {
    pub fn new(g: &Graph, cap: usize) -> Result<Self> {
        check_qubit_count(g.n(), cap)?;
        Ok(Self { n: g.n(), edges: g.edges().to_vec(), table: cost_table(g, cap)? })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn table(&self) -> &CostTable {
        &self.table
    }

    /// Runs the circuit: cost layer with `gamma_k` then mixer layer with
    /// `beta_k`, for k = 1..p, on the uniform superposition.
    pub fn prepare(&self, angles: &AngleSchedule) -> StateVector {
        let mut state = uniform_unchecked(self.n);
        self.run_circuit(&mut state, angles);
        state
    }

    /// Layer loop on an already-initialized state. The cost phase is folded
    /// into the mixer's tile pass (element-wise, so results are bitwise
    /// identical to separate layer calls) to save one memory sweep per
    /// layer.
    fn run_circuit(&self, state: &mut StateVector, angles: &AngleSchedule) {
        let n = state.n;
        let low = n.min(PAR_CHUNK_BITS);
        for (&gamma, &beta) in angles.gamma().iter().zip(angles.beta()) {
            let phases = PhaseTable::new(gamma, self.table.m);
            let (c, s) = (beta.cos(), beta.sin());
            state
                .re
                .par_chunks_mut(PAR_CHUNK)
                .zip(state.im.par_chunks_mut(PAR_CHUNK))
                .zip(self.table.values.par_chunks(PAR_CHUNK))
                .for_each(|((re, im), costs)| {
                    phase_tile(re, im, costs, &phases);
                    mixer_tile(re, im, low, c, s);
                });
            if n > PAR_CHUNK_BITS {
                rotate_high_qubits(&mut state.re, &mut state.im, n - PAR_CHUNK_BITS, c, s);
            }
        }
    }

    /// The objective `F = sum_z |amp(z)|^2 * C(z)`.
    pub fn objective(&self, angles: &AngleSchedule) -> f64 {
        let state = self.prepare(angles);
        self.objective_of_state(&state)
    }

    pub fn objective_of_state(&self, state: &StateVector) -> f64 {
        let partials: Vec<f64> = state
            .re
            .par_chunks(PAR_CHUNK)
            .zip(state.im.par_chunks(PAR_CHUNK))
            .zip(self.table.values.par_chunks(PAR_CHUNK))
            .map(|((re, im), costs)| {
                re.iter()
                    .zip(im)
                    .zip(costs)
                    .map(|((r, i), &c)| (r * r + i * i) * f64::from(c))
                    .sum()
            })
            .collect();
        partials.into_iter().sum()
    }

    /// Per-edge expectations `<(1 - Z_u Z_v)/2>` in label order; their sum
    /// equals the objective.
    pub fn edge_expectations(&self, angles: &AngleSchedule) -> Vec<f64> {
        let state = self.prepare(angles);
        self.edge_expectations_of_state(&state)
    }

    pub fn edge_expectations_of_state(&self, state: &StateVector) -> Vec<f64> {
        let m = self.edges.len();
        let partials: Vec<Vec<f64>> = state
            .re
            .par_chunks(PAR_CHUNK)
            .zip(state.im.par_chunks(PAR_CHUNK))
            .enumerate()
            .map(|(chunk_index, (res, ims))| {
                let base = (chunk_index * PAR_CHUNK) as u64;
                let mut acc = vec![0.0f64; m];
                for (k, (r, i)) in res.iter().zip(ims).enumerate() {
                    let z = base + k as u64;
                    let p = r * r + i * i;
                    for (slot, &(u, v)) in acc.iter_mut().zip(&self.edges) {
                        *slot += p * ((z >> u ^ z >> v) & 1) as f64;
                    }
                }
                acc
            })
            .collect();
        let mut result = vec![0.0f64; m];
        for acc in partials {
            for (slot, value) in result.iter_mut().zip(acc) {
                *slot += value;
            }
        }
        result
    }

    /// Objective and per-edge expectations from one prepared state. The two
    /// are accumulated independently, so their agreement is a real check.
    pub fn objective_and_edges(&self, angles: &AngleSchedule) -> (f64, Vec<f64>) {
        let state = self.prepare(angles);
        (self.objective_of_state(&state), self.edge_expectations_of_state(&state))
    }
}

/// Reusable evaluation workspace: one statevector buffer shared across many
/// objective calls, for optimizer loops that evaluate thousands of times.
pub struct EvalSession<'a> {
    sim: &'a Simulator,
    state: StateVector,
}

impl Simulator {
    pub fn session(&self) -> EvalSession<'_> {
        EvalSession { sim: self, state: uniform_unchecked(self.n) }
    }
}

impl EvalSession<'_> {
    /// Same value as [`Simulator::objective`], without reallocating.
    pub fn objective(&mut self, angles: &AngleSchedule) -> f64 {
        let amp = uniform_amp(self.state.n);
        self.state.re.par_chunks_mut(PAR_CHUNK).for_each(|tile| tile.fill(amp));
        self.state.im.par_chunks_mut(PAR_CHUNK).for_each(|tile| tile.fill(0.0));
        self.sim.run_circuit(&mut self.state, angles);
        self.sim.objective_of_state(&self.state)
    }
}

/// Convenience wrapper: prepare the state for `g` at `angles`.
pub fn prepare(g: &Graph, angles: &AngleSchedule, cap: usize) -> Result<StateVector> {
    Ok(Simulator::new(g, cap)?.prepare(angles))
}

/// Convenience wrapper: objective value for `g` at `angles`.
pub fn objective(g: &Graph, angles: &AngleSchedule, cap: usize) -> Result<f64> {
    Ok(Simulator::new(g, cap)?.objective(angles))
}

/// Convenience wrapper: per-edge expectations for `g` at `angles`.
pub fn edge_expectations(g: &Graph, angles: &AngleSchedule, cap: usize) -> Result<Vec<f64>> {
    Ok(Simulator::new(g, cap)?.edge_expectations(angles))
}

/// `f / cmax`.
pub fn approximation_ratio(f: f64, cmax: u32) -> Result<f64> {
    if cmax == 0 {
        return Err(Error::Degenerate("approximation ratio undefined for cmax = 0".into()));
    }
    Ok(f / f64::from(cmax))
}

/// Draws `shots` i.i.d. basis indices from the state's probabilities.
pub fn sample_bitstrings<R: Rng>(
    state: &StateVector,
    rng: &mut R,
    shots: usize,
) -> Result<Vec<u64>> {
    if shots == 0 {
        return Err(Error::InvalidParameter("need at least one shot".into()));
    }
    // Two-level lookup: cumulative chunk weights, then a scan inside the
    // selected chunk. Avoids materializing a 2^n prefix array.
    const SAMPLE_CHUNK: usize = 1 << 12;
    let chunk_prefix: Vec<f64> = {
        let mut acc = 0.0;
        state
            .re
            .chunks(SAMPLE_CHUNK)
            .zip(state.im.chunks(SAMPLE_CHUNK))
            .map(|(re, im)| {
                acc += re.iter().zip(im).map(|(r, i)| r * r + i * i).sum::<f64>();
                acc
            })
            .collect()
    };
    let total = *chunk_prefix.last().expect("state is non-empty");
    let mut out = Vec::with_capacity(shots);
    for _ in 0..shots {
        let target = rng.gen::<f64>() * total;
        let chunk_index = chunk_prefix.partition_point(|&acc| acc <= target);
        let chunk_index = chunk_index.min(chunk_prefix.len() - 1);
        let mut acc = if chunk_index == 0 { 0.0 } else { chunk_prefix[chunk_index - 1] };
        let base = chunk_index * SAMPLE_CHUNK;
        let end = state.len().min(base + SAMPLE_CHUNK);
        let mut pick = end - 1;
        for z in base..end {
            acc += state.probability(z as u64);
            if acc > target {
                pick = z;
                break;
            }
        }
        out.push(pick as u64);
    }
    Ok(out)
}

fn check_qubit_count(n: usize, cap: usize) -> Result<()> {
    if n < 1 {
        return Err(Error::InvalidParameter("need at least one qubit".into()));
    }
    if n > cap {
        return Err(Error::ResourceCap(format!("{n} qubits exceeds the cap of {cap}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::rng::stream;
    use std::f64::consts::PI;

    const CAP: usize = 26;

    fn single_edge() -> Graph {
        Graph::new(2, vec![(0, 1)]).unwrap()
    }

    /// Generalized Petersen GP(10, 3): 3-regular, girth 6.
    fn desargues() -> Graph {
        let mut edges = Vec::new();
        for i in 0..10u32 {
            let j = (i + 1) % 10;
            edges.push((i.min(j), i.max(j)));
            edges.push((i, i + 10));
            let k = 10 + (i + 3) % 10;
            edges.push(((i + 10).min(k), (i + 10).max(k)));
        }
        Graph::new(20, edges).unwrap()
    }

    #[test]
    fn uniform_state_amplitudes() {
        let s = uniform_state(2, CAP).unwrap();
        for a in s.amplitudes() {
            assert_eq!(a, Complex64::new(0.5, 0.0));
        }
        assert!((uniform_state(20, CAP).unwrap().norm_sqr() - 1.0).abs() < 1e-12);
        assert!((uniform_state(15, CAP).unwrap().norm_sqr() - 1.0).abs() < 1e-12);
        assert!(uniform_state(0, CAP).is_err());
        assert!(uniform_state(27, CAP).is_err());
    }

    #[test]
    fn cost_table_pins_bit_convention() {
        // Single edge (0,1): index bit j = qubit j, so indices 1 (=01) and
        // 2 (=10) are the cut assignments.
        let t = cost_table(&single_edge(), CAP).unwrap();
        assert_eq!(t.values(), &[0, 1, 1, 0]);
    }

    #[test]
    fn cost_table_counts_k4_split() {
        let t = cost_table(&Graph::complete(4), CAP).unwrap();
        assert_eq!(t.value(0b0011), 4);
        assert_eq!(t.max_value(), 4);
        // Bit-flip symmetry.
        for z in 0..16u64 {
            assert_eq!(t.value(z), t.value(!z & 0xf));
        }
    }

    #[test]
    fn cost_layer_at_zero_and_full_period_is_identity() {
        let g = Graph::petersen();
        let t = cost_table(&g, CAP).unwrap();
        let reference = uniform_state(10, CAP).unwrap();
        for gamma in [0.0, 2.0 * PI] {
            let mut s = reference.clone();
            apply_cost_layer(&mut s, &t, gamma).unwrap();
            for (a, b) in s.amplitudes().into_iter().zip(reference.amplitudes()) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn cost_layer_phase_arithmetic_on_single_edge() {
        let t = cost_table(&single_edge(), CAP).unwrap();
        let mut s = uniform_state(2, CAP).unwrap();
        apply_cost_layer(&mut s, &t, PI).unwrap();
        let expected = [0.5, -0.5, -0.5, 0.5];
        for (a, e) in s.amplitudes().into_iter().zip(expected) {
            assert!((a - Complex64::new(e, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn cost_layer_rejects_mismatched_table() {
        let t = cost_table(&single_edge(), CAP).unwrap();
        let mut s = uniform_state(3, CAP).unwrap();
        assert!(apply_cost_layer(&mut s, &t, 0.3).is_err());
    }

    #[test]
    fn mixer_rotation_on_one_qubit() {
        // (1, 0) at beta = pi/2 maps to (0, -i).
        let mut s = StateVector::from_amplitudes(
            1,
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        )
        .unwrap();
        apply_mixer_layer(&mut s, PI / 2.0);
        assert!((s.amplitude(0) - Complex64::new(0.0, 0.0)).norm() < 1e-12);
        assert!((s.amplitude(1) - Complex64::new(0.0, -1.0)).norm() < 1e-12);
    }

    #[test]
    fn mixer_at_zero_is_identity_and_at_pi_a_global_phase() {
        let g = Graph::petersen();
        let sim = Simulator::new(&g, CAP).unwrap();
        let angles = AngleSchedule::new(vec![0.7], vec![0.3]).unwrap();
        let reference = sim.prepare(&angles);

        let mut s = reference.clone();
        apply_mixer_layer(&mut s, 0.0);
        for (a, b) in s.amplitudes().into_iter().zip(reference.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }

        apply_mixer_layer(&mut s, PI);
        // exp(-i*pi*X) = -I per qubit: pure global phase, so the overlap
        // magnitude stays 1 and expectations are untouched.
        let overlap: Complex64 = s
            .amplitudes()
            .into_iter()
            .zip(reference.amplitudes())
            .map(|(a, b)| a * b.conj())
            .sum();
        assert!((overlap.norm() - 1.0).abs() < 1e-9);
        assert!((sim.objective_of_state(&s) - sim.objective_of_state(&reference)).abs() < 1e-9);
    }

    #[test]
    fn fused_circuit_matches_separate_layer_calls_exactly() {
        let g = desargues();
        let sim = Simulator::new(&g, CAP).unwrap();
        let angles = AngleSchedule::random(3, &mut stream(2, "angles", 9));
        let fused = sim.prepare(&angles);
        let mut manual = uniform_state(g.n(), CAP).unwrap();
        for (&gamma, &beta) in angles.gamma().iter().zip(angles.beta()) {
            apply_cost_layer(&mut manual, sim.table(), gamma).unwrap();
            apply_mixer_layer(&mut manual, beta);
        }
        for (a, b) in fused.amplitudes().into_iter().zip(manual.amplitudes()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn prepare_at_zero_angles_is_uniform() {
        let g = Graph::petersen();
        let sim = Simulator::new(&g, CAP).unwrap();
        let angles = AngleSchedule::new(vec![0.0], vec![0.0]).unwrap();
        let s = sim.prepare(&angles);
        let u = uniform_state(10, CAP).unwrap();
        for (a, b) in s.amplitudes().into_iter().zip(u.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn norm_is_preserved_by_deep_circuits() {
        let g = desargues();
        let sim = Simulator::new(&g, CAP).unwrap();
        let angles = AngleSchedule::random(6, &mut stream(3, "angles", 0));
        let s = sim.prepare(&angles);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn objective_at_zero_is_half_the_edges() {
        for g in [Graph::petersen(), desargues(), Graph::cycle(11)] {
            let sim = Simulator::new(&g, CAP).unwrap();
            let p = 3;
            let zeros = AngleSchedule::new(vec![0.0; p], vec![0.0; p]).unwrap();
            assert!((sim.objective(&zeros) - g.m() as f64 / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn objective_stays_within_edge_count() {
        let g = Graph::petersen();
        let sim = Simulator::new(&g, CAP).unwrap();
        for k in 0..20 {
            let angles = AngleSchedule::random(2, &mut stream(4, "angles", k));
            let f = sim.objective(&angles);
            assert!((0.0..=g.m() as f64).contains(&f));
        }
    }

    #[test]
    fn session_matches_fresh_simulation_bitwise() {
        let g = desargues();
        let sim = Simulator::new(&g, CAP).unwrap();
        let mut session = sim.session();
        for k in 0..4 {
            let angles = AngleSchedule::random(3, &mut stream(11, "angles", k));
            assert_eq!(session.objective(&angles), sim.objective(&angles));
        }
    }

    #[test]
    fn edge_expectations_sum_to_objective() {
        let g = desargues();
        let sim = Simulator::new(&g, CAP).unwrap();
        for k in 0..5 {
            let angles = AngleSchedule::random(3, &mut stream(5, "angles", k));
            let (f, edges) = sim.objective_and_edges(&angles);
            let sum: f64 = edges.iter().sum();
            assert!((sum - f).abs() < 1e-9);
            assert!(edges.iter().all(|&e| (0.0..=1.0 + 1e-12).contains(&e)));
        }
    }

    #[test]
    fn edge_expectations_at_zero_are_half() {
        let g = Graph::petersen();
        let sim = Simulator::new(&g, CAP).unwrap();
        let zeros = AngleSchedule::new(vec![0.0; 2], vec![0.0; 2]).unwrap();
        for e in sim.edge_expectations(&zeros) {
            assert!((e - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn periodicity_in_gamma_and_beta() {
        let g = Graph::petersen();
        let sim = Simulator::new(&g, CAP).unwrap();
        let gamma = vec![0.9, 2.1];
        let beta = vec![0.4, 1.1];
        let f = sim.objective(&AngleSchedule::new_unreduced(gamma.clone(), beta.clone()));
        for k in 0..2 {
            let mut gs = gamma.clone();
            gs[k] += 2.0 * PI;
            let fg = sim.objective(&AngleSchedule::new_unreduced(gs, beta.clone()));
            assert!((fg - f).abs() < 1e-9);
            let mut bs = beta.clone();
            bs[k] += PI;
            let fb = sim.objective(&AngleSchedule::new_unreduced(gamma.clone(), bs));
            assert!((fb - f).abs() < 1e-9);
        }
    }

    #[test]
    fn negating_all_angles_conjugates_the_state() {
        let g = desargues();
        let sim = Simulator::new(&g, CAP).unwrap();
        let angles = AngleSchedule::random(3, &mut stream(6, "angles", 1));
        let f = sim.objective(&angles);
        let f_neg = sim.objective(&angles.negated());
        assert!((f - f_neg).abs() < 1e-9);
    }

    #[test]
    fn label_permutation_permutes_edge_expectations() {
        let g = Graph::petersen();
        let mut rng = stream(7, "perm", 0);
        let h = g.permute_edge_labels(&mut rng);
        let angles = AngleSchedule::random(2, &mut stream(7, "angles", 0));
        let sim_g = Simulator::new(&g, CAP).unwrap();
        let sim_h = Simulator::new(&h, CAP).unwrap();
        let eg = sim_g.edge_expectations(&angles);
        let eh = sim_h.edge_expectations(&angles);
        assert!((sim_g.objective(&angles) - sim_h.objective(&angles)).abs() < 1e-9);
        for (index, edge) in h.edges().iter().enumerate() {
            let original = g.edges().iter().position(|e| e == edge).unwrap();
            assert!((eh[index] - eg[original]).abs() < 1e-9);
        }
    }

    #[test]
    fn depth_one_expectation_depends_only_on_edge_type() {
        // Petersen (girth 5) and GP(10,3) (girth 6): every edge is
        // tree-like at depth 1, within and across the two graphs.
        let angles = AngleSchedule::new(vec![0.8], vec![0.6]).unwrap();
        let pet = Simulator::new(&Graph::petersen(), CAP).unwrap();
        let des = Simulator::new(&desargues(), CAP).unwrap();
        let ep = pet.edge_expectations(&angles);
        let ed = des.edge_expectations(&angles);
        for e in ep.iter().chain(&ed) {
            assert!((e - ep[0]).abs() < 1e-9);
        }
    }

    #[test]
    fn sampling_a_basis_state_is_constant() {
        let mut amps = vec![Complex64::new(0.0, 0.0); 8];
        amps[5] = Complex64::new(0.0, 1.0);
        let s = StateVector::from_amplitudes(3, amps).unwrap();
        let samples = sample_bitstrings(&s, &mut stream(8, "shots", 0), 100).unwrap();
        assert!(samples.iter().all(|&z| z == 5));
    }

    #[test]
    fn sampling_uniform_state_has_flat_marginals() {
        let s = uniform_state(6, CAP).unwrap();
        let shots = 100_000;
        let samples = sample_bitstrings(&s, &mut stream(8, "shots", 1), shots).unwrap();
        for qubit in 0..6 {
            let ones = samples.iter().filter(|&&z| z >> qubit & 1 == 1).count();
            let marginal = ones as f64 / shots as f64;
            assert!((marginal - 0.5).abs() < 0.01, "qubit {qubit} marginal {marginal}");
        }
    }

    #[test]
    fn sampled_cost_mean_tracks_objective() {
        let g = Graph::petersen();
        let sim = Simulator::new(&g, CAP).unwrap();
        let angles = AngleSchedule::random(2, &mut stream(9, "angles", 0));
        let state = sim.prepare(&angles);
        let f = sim.objective_of_state(&state);
        let shots = 20_000;
        let samples = sample_bitstrings(&state, &mut stream(9, "shots", 0), shots).unwrap();
        let mean: f64 =
            samples.iter().map(|&z| f64::from(sim.table().value(z))).sum::<f64>() / shots as f64;
        let slack = 3.0 * (g.m() as f64 / 2.0) / (shots as f64).sqrt();
        assert!((mean - f).abs() < slack, "sampled mean {mean} vs objective {f}");
    }

    #[test]
    fn zero_shots_is_an_error() {
        let s = uniform_state(2, CAP).unwrap();
        assert!(sample_bitstrings(&s, &mut stream(1, "shots", 2), 0).is_err());
    }

    #[test]
    fn approximation_ratio_guards_zero() {
        assert_eq!(approximation_ratio(26.0, 26).unwrap(), 1.0);
        assert!((approximation_ratio(15.0, 26).unwrap() - 0.5769230769230769).abs() < 1e-12);
        assert!(approximation_ratio(1.0, 0).is_err());
    }
}
