//! Benchmark protocol: repeated runs over a manifest of instances and a set
//! of named configurations, with aggregation into CSV tables.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hyperflow_core::multilevel::PartitionerConfig;

use crate::io;
use crate::run::{run_partition, RunRecord, RECORD_HEADER};

pub const SCHEMA_LINE: &str = "# hyperflow-bench v1";

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("manifest line {line}: {msg}")]
    Manifest { line: usize, msg: String },
    #[error("configs line {line}: {msg}")]
    Configs { line: usize, msg: String },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub path: PathBuf,
    /// The path as written in the manifest; used as the instance id.
    pub label: String,
    pub k: usize,
    pub eps: f64,
}

/// One "path,k,eps" triple per line; blank lines and '#' comments are
/// skipped. Relative paths resolve against `base`.
pub fn parse_manifest(text: &str, base: &Path) -> Result<Vec<ManifestEntry>, BenchError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: &str| BenchError::Manifest { line: i + 1, msg: msg.to_string() };
        let parts: Vec<&str> = line.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(err("expected path,k,eps"));
        }
        let k: usize = parts[1].parse().map_err(|_| err("k is not an integer"))?;
        let eps: f64 = parts[2].parse().map_err(|_| err("eps is not a number"))?;
        if k == 0 || eps.is_nan() || eps < 0.0 {
            return Err(err("k must be positive and eps non-negative"));
        }
        let p = Path::new(parts[0]);
        let path = if p.is_absolute() { p.to_path_buf() } else { base.join(p) };
        out.push(ManifestEntry { path, label: parts[0].to_string(), k, eps });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedConfig {
    pub name: String,
    pub config: PartitionerConfig,
}

/// "name: flags" per line, flags in command-line syntax.
pub fn parse_configs<F, E>(text: &str, parse_flags: F) -> Result<Vec<NamedConfig>, BenchError>
where
    F: Fn(&str) -> Result<PartitionerConfig, E>,
    E: std::fmt::Display,
{
    let mut out: Vec<NamedConfig> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| BenchError::Configs { line: i + 1, msg };
        let (name, flags) = line.split_once(':').ok_or_else(|| err("expected name: flags".into()))?;
        let name = name.trim();
        if name.is_empty() || name.contains(',') {
            return Err(err("config name must be non-empty and free of commas".into()));
        }
        if out.iter().any(|c| c.name == name) {
            return Err(err(format!("duplicate config {name}")));
        }
        let config = parse_flags(flags.trim()).map_err(|e| err(e.to_string()))?;
        out.push(NamedConfig { name: name.to_string(), config });
    }
    if out.is_empty() {
        return Err(BenchError::Configs { line: 0, msg: "no configurations".into() });
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct BenchOptions {
    pub instances: Vec<ManifestEntry>,
    pub configs: Vec<NamedConfig>,
    pub reps: usize,
    pub seed: u64,
    pub effectiveness: bool,
    /// Seconds; once a run exceeds it, remaining repetitions of that
    /// instance and config are skipped.
    pub time_limit: Option<f64>,
}

const TIME_LIMIT_MARK: &str = "time-limit";

fn is_valid(r: &RunRecord) -> bool {
    r.error.is_empty() || r.error == TIME_LIMIT_MARK
}

/// Runs every configuration on every manifest entry. Missing or malformed
/// instances yield error rows.
pub fn run_bench(opts: &BenchOptions) -> Vec<RunRecord> {
    let mut records = Vec::new();
    for (ii, inst) in opts.instances.iter().enumerate() {
        let h = match io::read_hgr(&inst.path) {
            Ok(h) => h,
            Err(e) => {
                log::warn!("{}: {e}", inst.label);
                for c in &opts.configs {
                    records.push(RunRecord::failed(&inst.label, inst.k, inst.eps, opts.seed, &c.name, e.to_string()));
                }
                continue;
            }
        };
        let mut one = |c: &NamedConfig, seed: u64| -> RunRecord {
            match run_partition(&h, &inst.label, inst.k, inst.eps, &c.config, &c.name, seed) {
                Ok(out) => out.record,
                Err(e) => RunRecord::failed(&inst.label, inst.k, inst.eps, seed, &c.name, e.to_string()),
            }
        };
        if opts.effectiveness {
            records.extend(effectiveness_runs(opts, ii, &mut one));
            continue;
        }
        for c in &opts.configs {
            for r in 0..opts.reps {
                let mut rec = one(c, opts.seed + r as u64);
                let over = opts.time_limit.is_some_and(|l| rec.time_s > l);
                if over {
                    rec.error = TIME_LIMIT_MARK.into();
                }
                records.push(rec);
                if over {
                    break;
                }
            }
        }
    }
    records
}

/// Equal expected time budget per configuration: each gets 3·t_max where
/// t_max is the slowest first run; the last partial run happens with
/// probability remaining/expected, drawn from a seeded stream.
fn effectiveness_runs(
    opts: &BenchOptions,
    instance_index: usize,
    one: &mut dyn FnMut(&NamedConfig, u64) -> RunRecord,
) -> Vec<RunRecord> {
    let firsts: Vec<RunRecord> = opts.configs.iter().map(|c| one(c, opts.seed)).collect();
    let t_max = firsts.iter().map(|r| r.time_s).fold(0.0, f64::max);
    let budget = 3.0 * t_max;
    let cap = 100 * opts.reps.max(1);
    let mut out = Vec::new();
    for (ci, (c, first)) in opts.configs.iter().zip(firsts).enumerate() {
        let mut coin = ChaCha8Rng::seed_from_u64(opts.seed ^ ((instance_index as u64) << 32 | ci as u64));
        let mut spent = first.time_s;
        let mut runs = 1;
        out.push(first);
        while runs < cap {
            let expected = (spent / runs as f64).max(1e-9);
            let remaining = budget - spent;
            let go = if remaining >= expected {
                true
            } else {
                remaining > 0.0 && coin.gen_bool((remaining / expected).clamp(0.0, 1.0))
            };
            if !go {
                break;
            }
            let rec = one(c, opts.seed + runs as u64);
            spent += rec.time_s;
            runs += 1;
            out.push(rec);
            if remaining < expected {
                break;
            }
        }
    }
    out
}

/// exp(mean ln x) with zeros replaced by one.
pub fn geometric_mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let s: f64 = values.iter().map(|&v| if v == 0.0 { 1.0 } else { v }.ln()).sum();
    (s / values.len() as f64).exp()
}

/// 1 − ours/other, zeros replaced by one.
pub fn improvement(ours: f64, other: f64) -> f64 {
    let fix = |v: f64| if v == 0.0 { 1.0 } else { v };
    1.0 - fix(ours) / fix(other)
}

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceSummary {
    pub instance: String,
    pub k: usize,
    pub eps: f64,
    pub config: String,
    pub runs: usize,
    pub best_km1: u64,
    pub mean_km1: f64,
    pub mean_time_s: f64,
    pub mean_flow_time_s: f64,
    pub flow_calls: u64,
    pub balanced_runs: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigSummary {
    pub config: String,
    pub instances: usize,
    pub geomean_best_km1: f64,
    pub geomean_mean_km1: f64,
    pub mean_time_s: f64,
    pub flow_calls: u64,
    pub failed_runs: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Improvement {
    pub instance: String,
    pub k: usize,
    pub eps: f64,
    pub config: String,
    pub baseline: String,
    pub improvement: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub instances: Vec<InstanceSummary>,
    pub configs: Vec<ConfigSummary>,
    pub improvements: Vec<Improvement>,
}

/// Summaries computed only from run rows. Configurations keep their order
/// of first appearance.
pub fn aggregate(records: &[RunRecord]) -> Aggregate {
    let mut config_order: Vec<String> = Vec::new();
    let mut instance_order: Vec<(String, usize, String)> = Vec::new();
    let mut groups: BTreeMap<(usize, usize), Vec<&RunRecord>> = BTreeMap::new();
    let mut failed: BTreeMap<usize, usize> = BTreeMap::new();
    let mut eps_of: Vec<f64> = Vec::new();
    for r in records {
        let ci = match config_order.iter().position(|c| *c == r.config) {
            Some(i) => i,
            None => {
                config_order.push(r.config.clone());
                config_order.len() - 1
            }
        };
        let key = (r.instance.clone(), r.k, r.eps.to_string());
        let ii = match instance_order.iter().position(|x| *x == key) {
            Some(i) => i,
            None => {
                instance_order.push(key);
                eps_of.push(r.eps);
                instance_order.len() - 1
            }
        };
        if is_valid(r) {
            groups.entry((ii, ci)).or_default().push(r);
        } else {
            *failed.entry(ci).or_default() += 1;
        }
    }

    let mut instances = Vec::new();
    let mut best: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for (&(ii, ci), rows) in &groups {
        let n = rows.len() as f64;
        let s = InstanceSummary {
            instance: instance_order[ii].0.clone(),
            k: instance_order[ii].1,
            eps: eps_of[ii],
            config: config_order[ci].clone(),
            runs: rows.len(),
            best_km1: rows.iter().map(|r| r.km1).min().unwrap_or(0),
            mean_km1: rows.iter().map(|r| r.km1 as f64).sum::<f64>() / n,
            mean_time_s: rows.iter().map(|r| r.time_s).sum::<f64>() / n,
            mean_flow_time_s: rows.iter().map(|r| r.flow_time_s).sum::<f64>() / n,
            flow_calls: rows.iter().map(|r| r.flow_calls).sum(),
            balanced_runs: rows.iter().filter(|r| r.balanced).count(),
        };
        best.insert((ii, ci), s.best_km1);
        instances.push(s);
    }

    let configs = (0..config_order.len())
        .map(|ci| {
            let mine: Vec<&InstanceSummary> = instances.iter().filter(|s| s.config == config_order[ci]).collect();
            let bests: Vec<f64> = mine.iter().map(|s| s.best_km1 as f64).collect();
            let means: Vec<f64> = mine.iter().map(|s| s.mean_km1).collect();
            ConfigSummary {
                config: config_order[ci].clone(),
                instances: mine.len(),
                geomean_best_km1: geometric_mean(&bests),
                geomean_mean_km1: geometric_mean(&means),
                mean_time_s: mine.iter().map(|s| s.mean_time_s).sum::<f64>() / mine.len().max(1) as f64,
                flow_calls: mine.iter().map(|s| s.flow_calls).sum(),
                failed_runs: failed.get(&ci).copied().unwrap_or(0),
            }
        })
        .collect();

    let mut improvements = Vec::new();
    for ii in 0..instance_order.len() {
        for a in 0..config_order.len() {
            for b in a + 1..config_order.len() {
                if let (Some(&x), Some(&y)) = (best.get(&(ii, a)), best.get(&(ii, b))) {
                    improvements.push(Improvement {
                        instance: instance_order[ii].0.clone(),
                        k: instance_order[ii].1,
                        eps: eps_of[ii],
                        config: config_order[a].clone(),
                        baseline: config_order[b].clone(),
                        improvement: improvement(x as f64, y as f64),
                    });
                }
            }
        }
    }
    Aggregate { instances, configs, improvements }
}

fn writer(path: &Path) -> Result<csv::Writer<std::fs::File>, BenchError> {
    use std::io::Write;
    let mut f = std::fs::File::create(path).map_err(|source| BenchError::Io { path: path.into(), source })?;
    writeln!(f, "{SCHEMA_LINE}").map_err(|source| BenchError::Io { path: path.into(), source })?;
    Ok(csv::Writer::from_writer(f))
}

pub const RUNS_FILE: &str = "runs.csv";
pub const INSTANCES_FILE: &str = "instances.csv";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const IMPROVEMENTS_FILE: &str = "improvements.csv";

pub fn write_runs(path: &Path, records: &[RunRecord]) -> Result<(), BenchError> {
    let mut w = writer(path)?;
    w.write_record(RECORD_HEADER)?;
    for r in records {
        w.write_record(r.fields())?;
    }
    w.flush().map_err(|source| BenchError::Io { path: path.into(), source })?;
    Ok(())
}

pub fn read_runs(path: &Path) -> Result<Vec<RunRecord>, BenchError> {
    let mut rd = csv::ReaderBuilder::new().comment(Some(b'#')).from_path(path)?;
    let mut out = Vec::new();
    for (i, rec) in rd.records().enumerate() {
        let rec = rec?;
        let r = RunRecord::from_fields(&rec)
            .ok_or_else(|| BenchError::Manifest { line: i + 2, msg: "malformed run row".into() })?;
        out.push(r);
    }
    Ok(out)
}

/// Writes the run rows and the three aggregate tables into `dir`.
pub fn write_all(dir: &Path, records: &[RunRecord], agg: &Aggregate) -> Result<(), BenchError> {
    std::fs::create_dir_all(dir).map_err(|source| BenchError::Io { path: dir.into(), source })?;
    write_runs(&dir.join(RUNS_FILE), records)?;

    let path = dir.join(INSTANCES_FILE);
    let mut w = writer(&path)?;
    w.write_record([
        "instance", "k", "eps", "config", "runs", "best_km1", "mean_km1", "mean_time_s", "mean_flow_time_s",
        "flow_calls", "balanced_runs",
    ])?;
    for s in &agg.instances {
        w.write_record([
            s.instance.clone(),
            s.k.to_string(),
            s.eps.to_string(),
            s.config.clone(),
            s.runs.to_string(),
            s.best_km1.to_string(),
            s.mean_km1.to_string(),
            s.mean_time_s.to_string(),
            s.mean_flow_time_s.to_string(),
            s.flow_calls.to_string(),
            s.balanced_runs.to_string(),
        ])?;
    }
    w.flush().map_err(|source| BenchError::Io { path: path.clone(), source })?;

    let path = dir.join(SUMMARY_FILE);
    let mut w = writer(&path)?;
    w.write_record([
        "config", "instances", "geomean_best_km1", "geomean_mean_km1", "mean_time_s", "flow_calls", "failed_runs",
    ])?;
    for s in &agg.configs {
        w.write_record([
            s.config.clone(),
            s.instances.to_string(),
            s.geomean_best_km1.to_string(),
            s.geomean_mean_km1.to_string(),
            s.mean_time_s.to_string(),
            s.flow_calls.to_string(),
            s.failed_runs.to_string(),
        ])?;
    }
    w.flush().map_err(|source| BenchError::Io { path: path.clone(), source })?;

    let path = dir.join(IMPROVEMENTS_FILE);
    let mut w = writer(&path)?;
    w.write_record(["instance", "k", "eps", "config", "baseline", "improvement"])?;
    for s in &agg.improvements {
        w.write_record([
            s.instance.clone(),
            s.k.to_string(),
            s.eps.to_string(),
            s.config.clone(),
            s.baseline.clone(),
            s.improvement.to_string(),
        ])?;
    }
    w.flush().map_err(|source| BenchError::Io { path, source })?;
    Ok(())
}

/// The CSV text without columns whose name ends in "time_s".
pub fn strip_time_columns(text: &str) -> String {
    let mut rd = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let header = rd.headers().cloned().unwrap_or_default();
    let keep: Vec<usize> = (0..header.len()).filter(|&i| !header[i].ends_with("time_s")).collect();
    let mut out = String::new();
    let mut push = |rec: &csv::StringRecord| {
        let row: Vec<&str> = keep.iter().map(|&i| rec.get(i).unwrap_or("")).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    };
    push(&header);
    for rec in rd.records().flatten() {
        push(&rec);
    }
    out
}
