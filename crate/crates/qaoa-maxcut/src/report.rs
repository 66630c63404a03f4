//! Deterministic report documents.
//!
//! Two flavors per experiment: a structured-text document carrying the full
//! configuration, seed ledger, angle schedules, and raw values; and a
//! comma-separated table with one row per cell for spreadsheet use. Floats
//! are written with 17 significant digits in structured text (round-trip
//! exact) and 4 decimals in tables. Identical inputs produce identical
//! bytes.

use std::fmt::Write as _;

use crate::experiments::{ConcentrationReport, CorrelationExperiment, TransferReport};
use crate::optimize::{LeapfrogStage, OptimizationResult};
use crate::qaoa::AngleSchedule;

/// Round-trip-exact float formatting (17 significant digits).
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Table float formatting (4 decimals).
pub fn fmt_table(x: f64) -> String {
    format!("{x:.4}")
}

fn fmt_float_list(values: &[f64]) -> String {
    values.iter().map(|&v| fmt_float(v)).collect::<Vec<_>>().join(" ")
}

fn fmt_seed_list(seeds: &[u64]) -> String {
    seeds.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}

/// Line-oriented `key = value` document builder.
pub struct TextDoc {
    buf: String,
}

impl TextDoc {
    pub fn new(title: &str) -> Self {
        Self { buf: format!("# {title}\n") }
    }

    pub fn section(&mut self, name: &str) {
        let _ = writeln!(self.buf, "\n[{name}]");
    }

    pub fn kv(&mut self, key: &str, value: impl std::fmt::Display) {
        let _ = writeln!(self.buf, "{key} = {value}");
    }

    pub fn kv_float(&mut self, key: &str, value: f64) {
        self.kv(key, fmt_float(value));
    }

    pub fn kv_floats(&mut self, key: &str, values: &[f64]) {
        self.kv(key, fmt_float_list(values));
    }

    pub fn config(&mut self, pairs: &[(&str, String)]) {
        self.section("config");
        for (key, value) in pairs {
            self.kv(key, value);
        }
    }

    pub fn angles(&mut self, angles: &AngleSchedule) {
        self.kv("p", angles.p());
        self.kv_floats("gamma", angles.gamma());
        self.kv_floats("beta", angles.beta());
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

/// Comma-separated table with the configuration echoed as `#` comments.
pub struct CsvDoc {
    buf: String,
}

impl CsvDoc {
    pub fn new(config: &[(&str, String)], header: &str) -> Self {
        let mut buf = String::new();
        for (key, value) in config {
            let _ = writeln!(buf, "# {key} = {value}");
        }
        let _ = writeln!(buf, "{header}");
        Self { buf }
    }

    pub fn row(&mut self, fields: &[String]) {
        let _ = writeln!(self.buf, "{}", fields.join(","));
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

pub fn concentration_text(report: &ConcentrationReport, config: &[(&str, String)]) -> String {
    let mut doc = TextDoc::new("concentration report");
    doc.config(config);
    doc.section("seeds");
    doc.kv("root", report.root_seed);
    doc.section("summary");
    doc.kv("instances_per_cell", report.instances_per_cell);
    doc.kv("cells", report.cells.len());
    doc.kv("partial", report.partial);
    for cell in &report.cells {
        doc.section(&format!("cell p={} regime={}", cell.p, cell.regime.key()));
        doc.kv("train_seed", cell.train_seed);
        doc.kv("opt_seed", cell.opt_seed);
        doc.angles(&cell.angles);
        doc.kv_float("angle_value", cell.angle_value);
        doc.kv("instance_seeds", fmt_seed_list(&cell.instance_seeds));
        doc.kv_floats("values", &cell.values);
        doc.kv_float("mean", cell.mean);
        doc.kv_float("std", cell.std);
        doc.kv("single_sample", cell.single_sample);
        if let Some(error) = &cell.error {
            doc.kv("error", error);
        }
    }
    doc.finish()
}

pub fn concentration_csv(report: &ConcentrationReport, config: &[(&str, String)]) -> String {
    let mut doc = CsvDoc::new(config, "p,regime,mean,std,instances");
    for cell in &report.cells {
        doc.row(&[
            cell.p.to_string(),
            cell.regime.key().to_string(),
            fmt_table(cell.mean),
            fmt_table(cell.std),
            cell.values.len().to_string(),
        ]);
    }
    doc.finish()
}

pub fn correlation_text(report: &CorrelationExperiment, config: &[(&str, String)]) -> String {
    let mut doc = TextDoc::new("correlation report");
    doc.config(config);
    doc.section("seeds");
    doc.kv("root", report.root_seed);
    for row in &report.rows {
        doc.section(&format!("regime {}", row.regime.key()));
        doc.kv("train_seed", row.train_seed);
        doc.kv("opt_seed", row.opt_seed);
        doc.kv("perm_seed", row.perm_seed);
        doc.angles(&row.angles);
        doc.kv_float("angle_value", row.angle_value);
        doc.kv("graph_seeds", fmt_seed_list(&row.graph_seeds));
        doc.kv("instances", row.stats.instances);
        doc.kv("m", row.stats.m);
        doc.kv_float("f_bar", row.stats.f_bar);
        doc.kv_float("var_f", row.stats.var_f);
        doc.kv_float("std_f", row.stats.std_f());
        doc.kv_float("c_bar", row.stats.c_bar);
        doc.kv_float("var_c1", row.stats.var_c1);
        doc.kv_float("corr", row.stats.corr);
    }
    doc.finish()
}

pub fn correlation_csv(report: &CorrelationExperiment, config: &[(&str, String)]) -> String {
    let mut doc = CsvDoc::new(config, "regime,f_bar,std_f,corr,instances,m");
    for row in &report.rows {
        doc.row(&[
            row.regime.key().to_string(),
            fmt_table(row.stats.f_bar),
            fmt_table(row.stats.std_f()),
            fmt_table(row.stats.corr),
            row.stats.instances.to_string(),
            row.stats.m.to_string(),
        ]);
    }
    doc.finish()
}

pub fn transfer_text(report: &TransferReport, config: &[(&str, String)]) -> String {
    let mut doc = TextDoc::new("transfer report");
    doc.config(config);
    doc.section("seeds");
    doc.kv("root", report.root_seed);
    doc.kv("train_seed", report.train_seed);
    doc.kv("opt_seed", report.opt_seed);
    doc.kv("eval_seeds", fmt_seed_list(&report.evals.iter().map(|e| e.seed).collect::<Vec<_>>()));
    doc.section("training");
    doc.kv("n_train", report.n_train);
    doc.kv("restarts", report.restarts);
    doc.kv("train_cmax", report.train_cmax);
    doc.kv_float("train_value", report.train_value);
    doc.kv_float("train_ratio", report.train_ratio);
    doc.angles(&report.angles);
    doc.section("evaluation");
    doc.kv("n_eval", report.n_eval);
    doc.kv("instances", report.evals.len());
    doc.kv_floats("ratios", &report.evals.iter().map(|e| e.ratio).collect::<Vec<_>>());
    doc.kv_float("mean_ratio", report.mean_ratio);
    doc.kv_float("std_ratio", report.std_ratio);
    doc.finish()
}

pub fn transfer_csv(report: &TransferReport, config: &[(&str, String)]) -> String {
    let mut doc = CsvDoc::new(config, "instance,seed,cmax,objective,ratio");
    for (index, eval) in report.evals.iter().enumerate() {
        doc.row(&[
            index.to_string(),
            eval.seed.to_string(),
            eval.cmax.to_string(),
            fmt_table(eval.objective),
            fmt_table(eval.ratio),
        ]);
    }
    doc.finish()
}

pub fn optimization_text(result: &OptimizationResult, config: &[(&str, String)]) -> String {
    let mut doc = TextDoc::new("optimization result");
    doc.config(config);
    doc.section("best");
    doc.kv("direction", result.direction.as_str());
    doc.angles(&result.best_angles);
    doc.kv_float("best_value", result.best_value);
    doc.kv("evaluations", result.evaluations);
    for (index, record) in result.restart_trace.iter().enumerate() {
        doc.section(&format!("restart {index}"));
        doc.kv_floats("start_gamma", record.start.gamma());
        doc.kv_floats("start_beta", record.start.beta());
        doc.kv_float("value", record.value);
        doc.kv("evaluations", record.evaluations);
    }
    doc.finish()
}

pub fn leapfrog_text(stages: &[LeapfrogStage], config: &[(&str, String)]) -> String {
    let mut doc = TextDoc::new("leapfrog report");
    doc.config(config);
    for (index, stage) in stages.iter().enumerate() {
        doc.section(&format!("stage {index} n={}", stage.n));
        doc.angles(&stage.angles);
        doc.kv_float("value", stage.value);
        match stage.transferred_value {
            Some(v) => doc.kv_float("transferred_value", v),
            None => doc.kv("transferred_value", "none"),
        }
        doc.kv_floats("ratios", &stage.ratios);
        doc.kv_float("mean_ratio", stage.mean_ratio);
    }
    doc.finish()
}

pub fn leapfrog_csv(stages: &[LeapfrogStage], config: &[(&str, String)]) -> String {
    let mut doc = CsvDoc::new(config, "stage,n,value,transferred,mean_ratio");
    for (index, stage) in stages.iter().enumerate() {
        doc.row(&[
            index.to_string(),
            stage.n.to_string(),
            fmt_table(stage.value),
            stage.transferred_value.map(fmt_table).unwrap_or_default(),
            fmt_table(stage.mean_ratio),
        ]);
    }
    doc.finish()
}

/// Row-major grid (`gamma` outer), one table row per `gamma` value.
pub fn landscape_csv(grid: &[f64], resolution: usize, config: &[(&str, String)]) -> String {
    let mut buf = String::new();
    for (key, value) in config {
        let _ = writeln!(buf, "# {key} = {value}");
    }
    for row in grid.chunks(resolution) {
        let _ =
            writeln!(buf, "{}", row.iter().map(|&v| fmt_table(v)).collect::<Vec<_>>().join(","));
    }
    buf
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting_round_trips() {
        for x in [0.0, 1.0, -1.5, std::f64::consts::PI, 1.0 / 3.0, 1e-300, 123456.789] {
            let parsed: f64 = fmt_float(x).parse().unwrap();
            assert_eq!(parsed.to_bits(), x.to_bits(), "{x} mangled by formatting");
        }
        assert_eq!(fmt_table(15.19999), "15.2000");
    }

    #[test]
    fn text_doc_layout() {
        let mut doc = TextDoc::new("demo");
        doc.config(&[("command", "demo".into()), ("seed", "1".into())]);
        doc.section("data");
        doc.kv_float("x", 0.5);
        let text = doc.finish();
        assert!(text.starts_with("# demo\n\n[config]\ncommand = demo\nseed = 1\n"));
        assert!(text.contains("\n[data]\nx = 5.0000000000000000e-1\n"));
    }
}
