//! Single partitioning and refinement runs with their CSV records.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use hyperflow_core::multilevel::{partition, PartitionerConfig};
use hyperflow_core::partition::{block_weights, km1_metric};
use hyperflow_core::refine::{refine_kway_with, RefineState};
use hyperflow_core::{Clock, Hypergraph, Partition, RefineStats};

/// Monotonic wall clock since construction.
#[derive(Debug, Clone, Copy)]
pub struct StdClock(Instant);

impl Default for StdClock {
    fn default() -> Self {
        Self(Instant::now())
    }
}

impl Clock for StdClock {
    fn now_nanos(&self) -> u64 {
        self.0.elapsed().as_nanos() as u64
    }
}

/// Short stable hash of a configuration.
pub fn fingerprint(cfg: &PartitionerConfig) -> String {
    let digest = Sha256::digest(format!("{cfg:?}").as_bytes());
    hex::encode(&digest[..6])
}

pub const RECORD_HEADER: [&str; 14] = [
    "instance", "k", "eps", "seed", "config", "fingerprint", "km1", "cut", "imbalance", "balanced",
    "time_s", "flow_time_s", "flow_calls", "error",
];

/// Columns that hold wall-clock measurements.
pub const TIME_COLUMNS: [&str; 2] = ["time_s", "flow_time_s"];

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub instance: String,
    pub k: usize,
    pub eps: f64,
    pub seed: u64,
    pub config: String,
    pub fingerprint: String,
    pub km1: u64,
    pub cut: u64,
    pub imbalance: f64,
    pub balanced: bool,
    pub time_s: f64,
    pub flow_time_s: f64,
    pub flow_calls: u64,
    pub error: String,
}

impl RunRecord {
    pub fn fields(&self) -> Vec<String> {
        vec![
            self.instance.clone(),
            self.k.to_string(),
            self.eps.to_string(),
            self.seed.to_string(),
            self.config.clone(),
            self.fingerprint.clone(),
            self.km1.to_string(),
            self.cut.to_string(),
            self.imbalance.to_string(),
            self.balanced.to_string(),
            self.time_s.to_string(),
            self.flow_time_s.to_string(),
            self.flow_calls.to_string(),
            self.error.clone(),
        ]
    }

    pub fn from_fields(f: &csv::StringRecord) -> Option<Self> {
        Some(Self {
            instance: f.get(0)?.to_string(),
            k: f.get(1)?.parse().ok()?,
            eps: f.get(2)?.parse().ok()?,
            seed: f.get(3)?.parse().ok()?,
            config: f.get(4)?.to_string(),
            fingerprint: f.get(5)?.to_string(),
            km1: f.get(6)?.parse().ok()?,
            cut: f.get(7)?.parse().ok()?,
            imbalance: f.get(8)?.parse().ok()?,
            balanced: f.get(9)?.parse().ok()?,
            time_s: f.get(10)?.parse().ok()?,
            flow_time_s: f.get(11)?.parse().ok()?,
            flow_calls: f.get(12)?.parse().ok()?,
            error: f.get(13)?.to_string(),
        })
    }

    /// Row for an instance that could not be run.
    pub fn failed(instance: &str, k: usize, eps: f64, seed: u64, config: &str, error: String) -> Self {
        Self {
            instance: instance.to_string(),
            k,
            eps,
            seed,
            config: config.to_string(),
            fingerprint: String::new(),
            km1: 0,
            cut: 0,
            imbalance: 0.0,
            balanced: false,
            time_s: 0.0,
            flow_time_s: 0.0,
            flow_calls: 0,
            error,
        }
    }
}

/// Invariant broken by a run; maps to exit code 3.
#[derive(Debug, thiserror::Error)]
#[error("invariant violated: {0}")]
pub struct InvariantViolation(pub String);

pub struct RunOutput {
    pub partition: Partition,
    pub record: RunRecord,
    pub unachievable_balance: bool,
    pub stats: RefineStats,
}

/// Checks cached metrics against a from-scratch evaluation.
pub fn verify(h: &Hypergraph, part: &Partition) -> Result<(), InvariantViolation> {
    if km1_metric(h, part.blocks()) != part.km1() {
        return Err(InvariantViolation("cached km1 differs from recomputation".into()));
    }
    if block_weights(h, part.blocks(), part.k()) != part.block_weights() {
        return Err(InvariantViolation("cached block weights differ from recomputation".into()));
    }
    Ok(())
}

fn record(instance: &str, seed: u64, config: &str, cfg: &PartitionerConfig, part: &Partition) -> RunRecord {
    RunRecord {
        instance: instance.to_string(),
        k: part.k(),
        eps: part.epsilon(),
        seed,
        config: config.to_string(),
        fingerprint: fingerprint(cfg),
        km1: part.km1(),
        cut: part.cut(),
        imbalance: part.imbalance(),
        balanced: part.is_balanced(),
        time_s: 0.0,
        flow_time_s: 0.0,
        flow_calls: 0,
        error: String::new(),
    }
}

/// Full multilevel run.
pub fn run_partition(
    h: &Hypergraph,
    instance: &str,
    k: usize,
    eps: f64,
    cfg: &PartitionerConfig,
    config: &str,
    seed: u64,
) -> Result<RunOutput, anyhow::Error> {
    let clock = StdClock::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let out = partition(h, k, eps, cfg, &mut rng, &clock)?;
    let elapsed = clock.now_nanos();
    verify(h, &out.partition)?;
    if out.stats.violations > 0 {
        return Err(InvariantViolation(format!("{} refinement violations", out.stats.violations)).into());
    }
    let mut rec = record(instance, seed, config, cfg, &out.partition);
    rec.time_s = elapsed as f64 * 1e-9;
    rec.flow_time_s = out.stats.flow_nanos as f64 * 1e-9;
    rec.flow_calls = out.stats.flow_calls;
    Ok(RunOutput {
        partition: out.partition,
        record: rec,
        unachievable_balance: out.unachievable_balance,
        stats: out.stats,
    })
}

/// Flat flow refinement of a given partition.
pub fn run_refine(
    h: &Hypergraph,
    instance: &str,
    mut part: Partition,
    cfg: &PartitionerConfig,
    config: &str,
    seed: u64,
) -> Result<(RunOutput, bool), anyhow::Error> {
    let clock = StdClock::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    cfg.validate()?;
    let before_km1 = part.km1();
    let before_max = part.max_weight();
    let was_balanced = part.is_balanced();
    let mut state = RefineState::new(part.k());
    let improved = refine_kway_with(h, &mut part, &cfg.refiner, &mut state, true, &mut rng, &clock);
    let elapsed = clock.now_nanos();
    verify(h, &part)?;
    if part.km1() > before_km1 {
        return Err(InvariantViolation("refinement increased km1".into()).into());
    }
    if (was_balanced && !part.is_balanced()) || (!was_balanced && part.max_weight() > before_max) {
        return Err(InvariantViolation("refinement worsened balance".into()).into());
    }
    if state.stats.violations > 0 {
        return Err(InvariantViolation(format!("{} refinement violations", state.stats.violations)).into());
    }
    let mut rec = record(instance, seed, config, cfg, &part);
    rec.time_s = elapsed as f64 * 1e-9;
    rec.flow_time_s = state.stats.flow_nanos as f64 * 1e-9;
    rec.flow_calls = state.stats.flow_calls;
    let unachievable = !part.is_balanced();
    Ok((RunOutput { partition: part, record: rec, unachievable_balance: unachievable, stats: state.stats }, improved))
}

pub fn write_records<W: std::io::Write>(out: W, records: &[RunRecord], header: bool) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    if header {
        w.write_record(RECORD_HEADER)?;
    }
    for r in records {
        w.write_record(r.fields())?;
    }
    w.flush()?;
    Ok(())
}
