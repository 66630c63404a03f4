//! Seeded, config-driven command-line front end.
//!
//! Every subcommand takes a single root seed and derives all of its
//! randomness from named substreams, so identical invocations produce
//! byte-identical structured-text outputs. The `--threads` flag only sizes
//! the worker pool; it is deliberately absent from the echoed configuration
//! because results never depend on it.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::experiments::{
    self, InstanceSpec, MedBands, OptBudget, Regime,
};
use crate::graph::{self, Graph};
use crate::optimize::{self, Direction, SearchOptions};
use crate::qaoa::{self, AngleSchedule, Simulator};
use crate::report::{self, TextDoc};
use crate::rng::{stream, stream_seed};
use crate::Caps;

#[derive(Debug, Parser)]
#[command(
    name = "qaoa-maxcut",
    version,
    about = "Statevector QAOA on MaxCut: instance generation, simulation, angle search, and concentration experiments"
)]
pub struct Cli {
    /// Worker threads (0 = one per core); never affects results.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a random graph and write it as an edge list.
    GenGraph(GenGraphArgs),
    /// Exact MaxCut of a graph by exhaustive enumeration.
    Maxcut(MaxcutArgs),
    /// Depth-1 edge-type census of a 3-regular graph.
    Census(CensusArgs),
    /// Induced subgraph around an edge at a given radius.
    Neighborhood(NeighborhoodArgs),
    /// Objective and per-edge expectations at fixed angles.
    Evaluate(EvaluateArgs),
    /// Sample assignments from the circuit's output distribution.
    Sample(SampleArgs),
    /// Multistart angle search on one instance.
    Optimize(OptimizeArgs),
    /// Depth-1 objective on a full-period angle grid.
    Landscape(LandscapeArgs),
    /// Optimize small, transfer up through increasing sizes with local refinement.
    Leapfrog(LeapfrogArgs),
    /// Objective mean/std across fresh instances at fixed angles.
    Concentration(ConcentrationArgs),
    /// Per-edge correlation estimate across fresh instances.
    Correlation(CorrelationArgs),
    /// Train angles at one size, score them at another.
    Transfer(TransferArgs),
    /// Bounded-difference concentration bound.
    Bound(BoundArgs),
}

/// Maps an error to the documented exit status.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse(_) | Error::InvalidParameter(_) => 2,
        Error::GenerationFailure { .. } => 3,
        Error::ResourceCap(_) => 4,
        _ => 1,
    }
}

/// Runs a parsed invocation on a pool of the requested size.
pub fn run(cli: Cli) -> Result<()> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if cli.threads > 0 {
        builder = builder.num_threads(cli.threads);
    }
    let pool = builder.build().map_err(|e| Error::InvalidParameter(e.to_string()))?;
    pool.install(|| dispatch(cli.command))
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::GenGraph(args) => args.exec(),
        Command::Maxcut(args) => args.exec(),
        Command::Census(args) => args.exec(),
        Command::Neighborhood(args) => args.exec(),
        Command::Evaluate(args) => args.exec(),
        Command::Sample(args) => args.exec(),
        Command::Optimize(args) => args.exec(),
        Command::Landscape(args) => args.exec(),
        Command::Leapfrog(args) => args.exec(),
        Command::Concentration(args) => args.exec(),
        Command::Correlation(args) => args.exec(),
        Command::Transfer(args) => args.exec(),
        Command::Bound(args) => args.exec(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphModel {
    /// Configuration-model d-regular graph.
    Regular,
    /// Independent edges with probability `--p-edge`.
    Er,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    /// Structured text with config, seeds, and full-precision values.
    Text,
    /// Comma-separated table, one row per cell.
    Csv,
}

/// Resource caps, checked before any work starts.
#[derive(Debug, Args)]
pub struct CapsArgs {
    /// Largest statevector simulation, in qubits.
    #[arg(long, default_value_t = 26)]
    pub sim_cap: usize,
    /// Largest brute-force MaxCut enumeration, in vertices.
    #[arg(long, default_value_t = 30)]
    pub brute_cap: usize,
    /// Attempt budget for rejection-sampling generators.
    #[arg(long, default_value_t = 10_000)]
    pub max_tries: u64,
}

impl CapsArgs {
    fn caps(&self) -> Caps {
        Caps {
            sim_qubits: self.sim_cap,
            brute_force_qubits: self.brute_cap,
            generation_retries: self.max_tries,
        }
    }

    fn config(&self) -> Vec<(&'static str, String)> {
        vec![
            ("sim_cap", self.sim_cap.to_string()),
            ("brute_cap", self.brute_cap.to_string()),
            ("max_tries", self.max_tries.to_string()),
        ]
    }
}

fn parse_direction(s: &str) -> Result<Direction> {
    Direction::from_str(s)
}

fn parse_regime(s: &str) -> Result<Regime> {
    Regime::from_str(s)
}

fn parse_band(s: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::Parse(format!("band `{s}` must be `lo,hi`")));
    }
    let lo: f64 =
        parts[0].trim().parse().map_err(|_| Error::Parse(format!("malformed band `{s}`")))?;
    let hi: f64 =
        parts[1].trim().parse().map_err(|_| Error::Parse(format!("malformed band `{s}`")))?;
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(Error::Parse(format!("band `{s}` must satisfy lo <= hi")));
    }
    Ok((lo, hi))
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    std::fs::write(path, content)?;
    Ok(())
}

/// `<path>.meta.txt`, the companion document for outputs whose own format is
/// fixed (edge lists stay exactly `n m` + edge lines).
fn sidecar(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".meta.txt");
    PathBuf::from(name)
}

fn meta_document(title: &str, config: &[(&str, String)], extra: &[(&str, String)]) -> String {
    let mut doc = TextDoc::new(title);
    doc.config(config);
    if !extra.is_empty() {
        doc.section("result");
        for (key, value) in extra {
            doc.kv(key, value);
        }
    }
    doc.finish()
}

#[derive(Debug, Args)]
pub struct GenGraphArgs {
    /// Vertex count.
    #[arg(long)]
    pub n: usize,
    /// Degree for the regular model.
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    #[arg(long, value_enum, default_value_t = GraphModel::Regular)]
    pub model: GraphModel,
    /// Edge probability for the er model (default 3/(n-1)).
    #[arg(long)]
    pub p_edge: Option<f64>,
    /// Keep tossing until the exact MaxCut equals this value.
    #[arg(long)]
    pub maxcut: Option<u32>,
    /// Reduce to the largest connected component before writing.
    #[arg(long)]
    pub largest_component: bool,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Edge-list output path; a `.meta.txt` sidecar records config and seeds.
    #[arg(short, long)]
    pub output: PathBuf,
    #[command(flatten)]
    pub caps: CapsArgs,
}

impl GenGraphArgs {
    fn config(&self) -> Vec<(&'static str, String)> {
        let mut pairs = vec![
            ("command", "gen-graph".to_string()),
            ("n", self.n.to_string()),
            ("d", self.d.to_string()),
            (
                "model",
                match self.model {
                    GraphModel::Regular => "regular".to_string(),
                    GraphModel::Er => "er".to_string(),
                },
            ),
        ];
        if let Some(p) = self.p_edge {
            pairs.push(("p_edge", report::fmt_float(p)));
        }
        if let Some(c) = self.maxcut {
            pairs.push(("maxcut", c.to_string()));
        }
        pairs.push(("largest_component", self.largest_component.to_string()));
        pairs.push(("seed", self.seed.to_string()));
        pairs.push(("output", self.output.display().to_string()));
        pairs.extend(self.caps.config());
        pairs
    }

    fn exec(&self) -> Result<()> {
        let caps = self.caps.caps();
        if self.maxcut.is_some() && self.n > caps.brute_force_qubits {
            return Err(Error::ResourceCap(format!(
                "maxcut filtering at n = {} exceeds the brute-force cap of {}",
                self.n, caps.brute_force_qubits
            )));
        }
        let mut rng = stream(self.seed, "cli-graph", 0);
        let g = match self.model {
            GraphModel::Regular => match self.maxcut {
                None => graph::regular(self.n, self.d, &mut rng, caps.generation_retries)?,
                Some(target) => graph::regular_with_maxcut(
                    self.n,
                    self.d,
                    target,
                    &mut rng,
                    caps.generation_retries,
                    caps.generation_retries,
                    caps.brute_force_qubits,
                )?,
            },
            GraphModel::Er => {
                if self.maxcut.is_some() {
                    return Err(Error::InvalidParameter(
                        "--maxcut filtering applies to the regular model only".into(),
                    ));
                }
                let p = self.p_edge.unwrap_or(3.0 / (self.n as f64 - 1.0));
                graph::erdos_renyi(self.n, p, &mut rng)?
            }
        };
        let g = if self.largest_component { g.largest_component() } else { g };
        g.write_edge_list(&self.output)?;
        let config = self.config();
        let extra = vec![
            ("graph_seed", stream_seed(self.seed, "cli-graph", 0).to_string()),
            ("n", g.n().to_string()),
            ("m", g.m().to_string()),
        ];
        write_file(&sidecar(&self.output), &meta_document("graph metadata", &config, &extra))?;
        println!("wrote graph n={} m={} to {}", g.n(), g.m(), self.output.display());
        Ok(())
    }
}

#[derive(Debug, Args)]
pub struct MaxcutArgs {
    /// Edge-list file.
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, default_value_t = 30)]
    pub brute_cap: usize,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

impl MaxcutArgs {
    fn exec(&self) -> Result<()> {
        let g = Graph::read_edge_list(&self.graph)?;
        let cut = graph::brute_force_maxcut(&g, self.brute_cap)?;
        let witness = cut.assignment_string(g.n());
        println!("cmax={} witness={}", cut.value, witness);
        if let Some(path) = &self.output {
            let config = vec![
                ("command", "maxcut".to_string()),
                ("graph", self.graph.display().to_string()),
                ("brute_cap", self.brute_cap.to_string()),
            ];
            let extra =
                vec![("cmax", cut.value.to_string()), ("witness", witness.clone())];
            write_file(path, &meta_document("maxcut result", &config, &extra))?;
        }
        Ok(())
    }
}

#[derive(Debug, Args)]
pub struct CensusArgs {
    /// Edge-list file of a 3-regular graph.
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

impl CensusArgs {
    fn exec(&self) -> Result<()> {
        let g = Graph::read_edge_list(&self.graph)?;
        let census = graph::census_p1(&g)?;
        println!(
            "m={} shared2={} shared1={} shared0={} fractions=({},{},{})",
            census.total(),
            census.shared_two,
            census.shared_one,
            census.shared_zero,
            report::fmt_table(census.fraction_shared_two()),
            report::fmt_table(census.fraction_shared_one()),
            report::fmt_table(census.fraction_shared_zero()),
        );
        if let Some(path) = &self.output {
            let config = vec![
                ("command", "census".to_string()),
                ("graph", self.graph.display().to_string()),
            ];
            let extra = vec![
                ("m", census.total().to_string()),
                ("shared_two", census.shared_two.to_string()),
                ("shared_one", census.shared_one.to_string()),
                ("shared_zero", census.shared_zero.to_string()),
                ("f_shared_two", report::fmt_float(census.fraction_shared_two())),
                ("f_shared_one", report::fmt_float(census.fraction_shared_one())),
                ("f_shared_zero", report::fmt_float(census.fraction_shared_zero())),
            ];
            write_file(path, &meta_document("depth-1 census", &config, &extra))?;
        }
        Ok(())
    }
}

#[derive(Debug, Args)]
pub struct NeighborhoodArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Edge label (0-based position in the edge list).
    #[arg(long)]
    pub edge: usize,
    /// Include vertices within this distance of the edge's endpoints.
    #[arg(long)]
    pub radius: usize,
    /// Output path for the induced subgraph's edge list.
    #[arg(short, long)]
    pub output: PathBuf,
}

impl NeighborhoodArgs {
    fn exec(&self) -> Result<()> {
        let g = Graph::read_edge_list(&self.graph)?;
        let (sub, labels) = graph::neighborhood(&g, self.edge, self.radius)?;
        sub.write_edge_list(&self.output)?;
        let mapping =
            labels.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
        let config = vec![
            ("command", "neighborhood".to_string()),
            ("graph", self.graph.display().to_string()),
            ("edge", self.edge.to_string()),
            ("radius", self.radius.to_string()),
            ("output", self.output.display().to_string()),
        ];
        let extra = vec![
            ("n", sub.n().to_string()),
            ("m", sub.m().to_string()),
            ("original_labels", mapping.clone()),
        ];
        write_file(&sidecar(&self.output), &meta_document("neighborhood metadata", &config, &extra))?;
        println!(
            "wrote neighborhood n={} m={} to {} (original labels: {mapping})",
            sub.n(),
            sub.m(),
            self.output.display()
        );
        Ok(())
    }
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Angle-schedule file.
    #[arg(long)]
    pub angles: PathBuf,
    #[arg(long, default_value_t = 26)]
    pub sim_cap: usize,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

impl EvaluateArgs {
    fn exec(&self) -> Result<()> {
        let g = Graph::read_edge_list(&self.graph)?;
        let angles = AngleSchedule::read_file(&self.angles)?;
        let sim = Simulator::new(&g, self.sim_cap)?;
        let (objective, edges) = sim.objective_and_edges(&angles);
        println!("F = {}", report::fmt_float(objective));
        for (index, (edge, value)) in g.edges().iter().zip(&edges).enumerate() {
            println!("edge {index} ({},{}) = {}", edge.0, edge.1, report::fmt_float(*value));
        }
        if let Some(path) = &self.output {
            let config = vec![
                ("command", "evaluate".to_string()),
                ("graph", self.graph.display().to_string()),
                ("angles", self.angles.display().to_string()),
                ("sim_cap", self.sim_cap.to_string()),
            ];
            let mut doc = TextDoc::new("evaluation");
            doc.config(&config);
            doc.section("angles");
            doc.angles(&angles);
            doc.section("result");
            doc.kv_float("objective", objective);
            doc.kv_floats("edge_expectations", &edges);
            write_file(path, &doc.finish())?;
        }
        Ok(())
    }
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub angles: PathBuf,
    #[arg(long, default_value_t = 1000)]
    pub shots: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 26)]
    pub sim_cap: usize,
    /// Write one sampled assignment per line.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

impl SampleArgs {
    fn exec(&self) -> Result<()> {
        let g = Graph::read_edge_list(&self.graph)?;
        let angles = AngleSchedule::read_file(&self.angles)?;
        let sim = Simulator::new(&g, self.sim_cap)?;
        let state = sim.prepare(&angles);
        let samples =
            qaoa::sample_bitstrings(&state, &mut stream(self.seed, "shots", 0), self.shots)?;
        let mean_cost = samples.iter().map(|&z| f64::from(sim.table().value(z))).sum::<f64>()
            / samples.len() as f64;
        let best = samples.iter().map(|&z| sim.table().value(z)).max().unwrap_or(0);
        println!(
            "shots={} mean_cost={} best_cost={best}",
            self.shots,
            report::fmt_float(mean_cost)
        );
        if let Some(path) = &self.output {
            let mut buf = String::new();
            for (key, value) in [
                ("command", "sample".to_string()),
                ("graph", self.graph.display().to_string()),
                ("angles", self.angles.display().to_string()),
                ("shots", self.shots.to_string()),
                ("seed", self.seed.to_string()),
                ("shot_seed", stream_seed(self.seed, "shots", 0).to_string()),
            ] {
                buf.push_str(&format!("# {key} = {value}\n"));
            }
            for &z in &samples {
                let bits: String =
                    (0..g.n()).map(|v| if z >> v & 1 == 1 { '1' } else { '0' }).collect();
                buf.push_str(&bits);
                buf.push('\n');
            }
            write_file(path, &buf)?;
        }
        Ok(())
    }
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Circuit depth.
    #[arg(long)]
    pub p: usize,
    #[arg(long, value_parser = parse_direction, default_value = "maximize")]
    pub direction: Direction,
    #[arg(long, default_value_t = 200)]
    pub restarts: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = 400)]
    pub max_iters: usize,
    /// Early-stop band `lo,hi`: finish at the first value inside it.
    #[arg(long, value_parser = parse_band)]
    pub stop_band: Option<(f64, f64)>,
    #[arg(long, default_value_t = 26)]
    pub sim_cap: usize,
    /// Structured-text result report.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Save the best schedule as a loadable angle file.
    #[arg(long)]
    pub angles_out: Option<PathBuf>,
}

impl OptimizeArgs {
    fn config(&self) -> Vec<(&'static str, String)> {
        let mut pairs = vec![
            ("command", "optimize".to_string()),
            ("graph", self.graph.display().to_string()),
            ("p", self.p.to_string()),
            ("direction", self.direction.as_str().to_string()),
            ("restarts", self.restarts.to_string()),
            ("seed", self.seed.to_string()),
            ("tol", report::fmt_float(self.tol)),
            ("max_iters", self.max_iters.to_string()),
        ];
        if let Some((lo, hi)) = self.stop_band {
            pairs.push(("stop_band", format!("{},{}", report::fmt_float(lo), report::fmt_float(hi))));
        }
        pairs.push(("sim_cap", self.sim_cap.to_string()));
        pairs
    }

    fn exec(&self) -> Result<()> {
        let g = Graph::read_edge_list(&self.graph)?;
        let sim = Simulator::new(&g, self.sim_cap)?;
        let options =
            SearchOptions { tol: self.tol, max_iters: self.max_iters, stop_band: self.stop_band };
        let result =
            optimize::multistart(&sim, self.p, self.restarts, self.direction, self.seed, &options)?;
        println!(
            "{} F = {} after {} restarts ({} evaluations)",
            self.direction.as_str(),
            report::fmt_float(result.best_value),
            self.restarts,
            result.evaluations
        );
        let config = self.config();
        if let Some(path) = &self.output {
            write_file(path, &report::optimization_text(&result, &config))?;
        }
        if let Some(path) = &self.angles_out {
            let mut buf = String::new();
            for (key, value) in &config {
                buf.push_str(&format!("# {key} = {value}\n"));
            }
            buf.push_str(&result.best_angles.to_text());
            write_file(path, &buf)?;
        }
        Ok(())
    }
}

#[derive(Debug, Args)]
pub struct LandscapeArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Grid points per axis.
    #[arg(long, default_value_t = 32)]
    pub resolution: usize,
    #[arg(long, default_value_t = 26)]
    pub sim_cap: usize,
    /// CSV output: one row per gamma value.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

impl LandscapeArgs {
    fn exec(&self) -> Result<()> {
        let g = Graph::read_edge_list(&self.graph)?;
        let sim = Simulator::new(&g, self.sim_cap)?;
        let grid = optimize::landscape_grid(&sim, self.resolution)?;
        let min = grid.iter().copied().fold(f64::INFINITY, f64::min);
        let max = grid.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        println!(
            "landscape {}x{}: min={} max={}",
            self.resolution,
            self.resolution,
            report::fmt_table(min),
            report::fmt_table(max)
        );
        if let Some(path) = &self.output {
            let config = vec![
                ("command", "landscape".to_string()),
                ("graph", self.graph.display().to_string()),
                ("resolution", self.resolution.to_string()),
                ("sim_cap", self.sim_cap.to_string()),
            ];
            write_file(path, &report::landscape_csv(&grid, self.resolution, &config))?;
        }
        Ok(())
    }
}

#[derive(Debug, Args)]
pub struct LeapfrogArgs {
    /// Strictly increasing vertex counts, e.g. 10,16,20.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    #[arg(long)]
    pub p: usize,
    /// Restarts for the first-stage multistart.
    #[arg(long, default_value_t = 50)]
    pub restarts: usize,
    /// Fresh instances scored at each stage.
    #[arg(long, default_value_t = 25)]
    pub evals: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = 400)]
    pub max_iters: usize,
    #[command(flatten)]
    pub caps: CapsArgs,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
}

impl LeapfrogArgs {
    fn config(&self) -> Vec<(&'static str, String)> {
        let mut pairs = vec![
            ("command", "leapfrog".to_string()),
            (
                "sizes",
                self.sizes.iter().map(usize::to_string).collect::<Vec<_>>().join(","),
            ),
            ("d", self.d.to_string()),
            ("p", self.p.to_string()),
            ("restarts", self.restarts.to_string()),
            ("evals", self.evals.to_string()),
            ("seed", self.seed.to_string()),
            ("tol", report::fmt_float(self.tol)),
            ("max_iters", self.max_iters.to_string()),
        ];
        pairs.extend(self.caps.config());
        pairs
    }

    fn exec(&self) -> Result<()> {
        let options =
            SearchOptions { tol: self.tol, max_iters: self.max_iters, stop_band: None };
        let stages = optimize::leapfrog(
            &self.sizes,
            self.d,
            self.p,
            self.restarts,
            self.evals,
            self.seed,
            &options,
            &self.caps.caps(),
        )?;
        for (index, stage) in stages.iter().enumerate() {
            println!(
                "stage {index}: n={} value={} mean_ratio={}",
                stage.n,
                report::fmt_table(stage.value),
                report::fmt_table(stage.mean_ratio)
            );
        }
        if let Some(path) = &self.output {
            let config = self.config();
            let content = match self.format {
                OutputFormat::Text => report::leapfrog_text(&stages, &config),
                OutputFormat::Csv => report::leapfrog_csv(&stages, &config),
            };
            write_file(path, &content)?;
        }
        Ok(())
    }
}

#[derive(Debug, Args)]
pub struct ConcentrationArgs {
    #[arg(long, default_value_t = 20)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    /// Filter instances to this exact MaxCut value.
    #[arg(long)]
    pub maxcut: Option<u32>,
    #[arg(long, value_delimiter = ',', default_value = "2,3,4,5,6,7")]
    pub p_list: Vec<usize>,
    #[arg(long, value_delimiter = ',', value_parser = parse_regime, default_value = "low,random,high")]
    pub regimes: Vec<Regime>,
    /// Instances per (p, regime) cell.
    #[arg(long, default_value_t = 25)]
    pub instances: usize,
    /// Restarts per regime angle search.
    #[arg(long, default_value_t = 8)]
    pub restarts: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = 400)]
    pub max_iters: usize,
    /// Early-stop band for the med-low regime.
    #[arg(long, value_parser = parse_band, default_value = "7,8")]
    pub band_low: (f64, f64),
    /// Early-stop band for the med-high regime.
    #[arg(long, value_parser = parse_band, default_value = "21,22")]
    pub band_high: (f64, f64),
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub caps: CapsArgs,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
}

impl ConcentrationArgs {
    fn config(&self) -> Vec<(&'static str, String)> {
        let mut pairs = vec![
            ("command", "concentration".to_string()),
            ("n", self.n.to_string()),
            ("d", self.d.to_string()),
        ];
        if let Some(c) = self.maxcut {
            pairs.push(("maxcut", c.to_string()));
        }
        pairs.push((
            "p_list",
            self.p_list.iter().map(usize::to_string).collect::<Vec<_>>().join(","),
        ));
        pairs.push((
            "regimes",
            self.regimes.iter().map(|r| r.key().to_string()).collect::<Vec<_>>().join(","),
        ));
        pairs.push(("instances", self.instances.to_string()));
        pairs.push(("restarts", self.restarts.to_string()));
        pairs.push(("tol", report::fmt_float(self.tol)));
        pairs.push(("max_iters", self.max_iters.to_string()));
        pairs.push(("band_low", format!("{},{}", self.band_low.0, self.band_low.1)));
        pairs.push(("band_high", format!("{},{}", self.band_high.0, self.band_high.1)));
        pairs.push(("seed", self.seed.to_string()));
        pairs.extend(self.caps.config());
        pairs
    }

    fn exec(&self) -> Result<()> {
        let spec = InstanceSpec { n: self.n, d: self.d, target_cmax: self.maxcut };
        let budget = OptBudget {
            restarts: self.restarts,
            search: SearchOptions { tol: self.tol, max_iters: self.max_iters, stop_band: None },
        };
        let bands = MedBands { low: self.band_low, high: self.band_high };
        let report = experiments::concentration_table(
            &self.p_list,
            &self.regimes,
            self.instances,
            &spec,
            self.seed,
            &budget,
            &bands,
            &self.caps.caps(),
        )?;
        for cell in &report.cells {
            println!(
                "p={} regime={}: mean={} std={}{}",
                cell.p,
                cell.regime.key(),
                report::fmt_table(cell.mean),
                report::fmt_table(cell.std),
                if cell.error.is_some() { " (failed)" } else { "" }
            );
        }
        if let Some(path) = &self.output {
            let config = self.config();
            let content = match self.format {
                OutputFormat::Text => report::concentration_text(&report, &config),
                OutputFormat::Csv => report::concentration_csv(&report, &config),
            };
            write_file(path, &content)?;
        }
        Ok(())
    }
}

#[derive(Debug, Args)]
pub struct CorrelationArgs {
    #[arg(long, default_value_t = 20)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    #[arg(long)]
    pub maxcut: Option<u32>,
    #[arg(long, default_value_t = 8)]
    pub p: usize,
    #[arg(long, value_delimiter = ',', value_parser = parse_regime,
          default_value = "low,med-low,random,med-high,high")]
    pub regimes: Vec<Regime>,
    /// Instances per regime.
    #[arg(long, default_value_t = 100)]
    pub instances: usize,
    #[arg(long, default_value_t = 8)]
    pub restarts: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = 400)]
    pub max_iters: usize,
    #[arg(long, value_parser = parse_band, default_value = "7,8")]
    pub band_low: (f64, f64),
    #[arg(long, value_parser = parse_band, default_value = "21,22")]
    pub band_high: (f64, f64),
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub caps: CapsArgs,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
}

impl CorrelationArgs {
    fn config(&self) -> Vec<(&'static str, String)> {
        let mut pairs = vec![
            ("command", "correlation".to_string()),
            ("n", self.n.to_string()),
            ("d", self.d.to_string()),
        ];
        if let Some(c) = self.maxcut {
            pairs.push(("maxcut", c.to_string()));
        }
        pairs.push(("p", self.p.to_string()));
        pairs.push((
            "regimes",
            self.regimes.iter().map(|r| r.key().to_string()).collect::<Vec<_>>().join(","),
        ));
        pairs.push(("instances", self.instances.to_string()));
        pairs.push(("restarts", self.restarts.to_string()));
        pairs.push(("tol", report::fmt_float(self.tol)));
        pairs.push(("max_iters", self.max_iters.to_string()));
        pairs.push(("band_low", format!("{},{}", self.band_low.0, self.band_low.1)));
        pairs.push(("band_high", format!("{},{}", self.band_high.0, self.band_high.1)));
        pairs.push(("seed", self.seed.to_string()));
        pairs.extend(self.caps.config());
        pairs
    }

    fn exec(&self) -> Result<()> {
        let spec = InstanceSpec { n: self.n, d: self.d, target_cmax: self.maxcut };
        let budget = OptBudget {
            restarts: self.restarts,
            search: SearchOptions { tol: self.tol, max_iters: self.max_iters, stop_band: None },
        };
        let bands = MedBands { low: self.band_low, high: self.band_high };
        let report = experiments::correlation_experiment(
            &spec,
            self.p,
            &self.regimes,
            self.instances,
            self.seed,
            &budget,
            &bands,
            &self.caps.caps(),
        )?;
        for row in &report.rows {
            println!(
                "regime={}: f_bar={} std_f={} corr={}",
                row.regime.key(),
                report::fmt_table(row.stats.f_bar),
                report::fmt_table(row.stats.std_f()),
                report::fmt_table(row.stats.corr)
            );
        }
        if let Some(path) = &self.output {
            let config = self.config();
            let content = match self.format {
                OutputFormat::Text => report::correlation_text(&report, &config),
                OutputFormat::Csv => report::correlation_csv(&report, &config),
            };
            write_file(path, &content)?;
        }
        Ok(())
    }
}

#[derive(Debug, Args)]
pub struct TransferArgs {
    #[arg(long)]
    pub n_train: usize,
    #[arg(long)]
    pub n_eval: usize,
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    #[arg(long, default_value_t = 8)]
    pub p: usize,
    #[arg(long, default_value_t = 200)]
    pub restarts: usize,
    /// Fresh evaluation instances at n_eval.
    #[arg(long, default_value_t = 25)]
    pub evals: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = 400)]
    pub max_iters: usize,
    #[command(flatten)]
    pub caps: CapsArgs,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
}

impl TransferArgs {
    fn config(&self) -> Vec<(&'static str, String)> {
        let mut pairs = vec![
            ("command", "transfer".to_string()),
            ("n_train", self.n_train.to_string()),
            ("n_eval", self.n_eval.to_string()),
            ("d", self.d.to_string()),
            ("p", self.p.to_string()),
            ("restarts", self.restarts.to_string()),
            ("evals", self.evals.to_string()),
            ("seed", self.seed.to_string()),
            ("tol", report::fmt_float(self.tol)),
            ("max_iters", self.max_iters.to_string()),
        ];
        pairs.extend(self.caps.config());
        pairs
    }

    fn exec(&self) -> Result<()> {
        let options =
            SearchOptions { tol: self.tol, max_iters: self.max_iters, stop_band: None };
        let report = experiments::transfer_experiment(
            self.n_train,
            self.n_eval,
            self.d,
            self.p,
            self.restarts,
            self.evals,
            self.seed,
            &options,
            &self.caps.caps(),
        )?;
        println!(
            "train n={} ratio={}; eval n={} mean_ratio={} std={}",
            report.n_train,
            report::fmt_table(report.train_ratio),
            report.n_eval,
            report::fmt_table(report.mean_ratio),
            report::fmt_table(report.std_ratio)
        );
        if let Some(path) = &self.output {
            let config = self.config();
            let content = match self.format {
                OutputFormat::Text => report::transfer_text(&report, &config),
                OutputFormat::Csv => report::transfer_csv(&report, &config),
            };
            write_file(path, &content)?;
        }
        Ok(())
    }
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    /// Deviation from the mean.
    #[arg(long)]
    pub t: f64,
    /// Number of independent bits.
    #[arg(long)]
    pub l: u64,
    /// Per-bit sensitivity of the function.
    #[arg(long)]
    pub c: f64,
}

impl BoundArgs {
    fn exec(&self) -> Result<()> {
        let bound = experiments::mcdiarmid_bound(self.t, self.l, self.c)?;
        println!("bound = {}", report::fmt_float(bound));
        Ok(())
    }
}
