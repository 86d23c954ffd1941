//! Command-line front end. Exit codes: 0 ok, 1 usage or configuration
//! error, 2 input error, 3 internal invariant violation.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use hyperflow_core::multilevel::PartitionerConfig;
use hyperflow_core::network::{build, BuildOptions};
use hyperflow_core::oracle::{brute_best_partition, brute_min_st_cut, counting_oracle};
use hyperflow_core::{FlowModel, Hypergraph, NetworkVariant, Partition, RefinerConfig, SubHypergraph};

use crate::bench::{self, BenchOptions};
use crate::corpus;
use crate::io::{self, FormatError};
use crate::netstats;
use crate::run::{self, InvariantViolation, RunRecord};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

impl Switch {
    fn on(self) -> bool {
        self == Switch::On
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Graph,
    Hypergraph,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NetworkArg {
    Lawler,
    LiuWong,
    Reduced,
}

/// Partitioner and refiner settings shared by `partition`, `refine` and
/// bench configuration bundles.
#[derive(Debug, Clone, Args)]
pub struct ConfigFlags {
    /// Upper bound on the corridor scaling factor; a power of two.
    #[arg(long, default_value_t = 16)]
    pub alpha_prime: u32,
    #[arg(long, value_enum, default_value = "hypergraph")]
    pub flow_model: ModelArg,
    #[arg(long, value_enum, default_value = "reduced")]
    pub network: NetworkArg,
    /// Most balanced minimum cut selection.
    #[arg(long, value_enum, default_value = "on")]
    pub mbmc: Switch,
    #[arg(long, default_value_t = 8)]
    pub mbmc_reps: usize,
    #[arg(long, value_enum, default_value = "on")]
    pub fm: Switch,
    #[arg(long, value_enum, default_value = "on")]
    pub flows: Switch,
    #[arg(long, value_enum, default_value = "on")]
    pub s1: Switch,
    #[arg(long, value_enum, default_value = "on")]
    pub s2: Switch,
    #[arg(long, value_enum, default_value = "on")]
    pub s3: Switch,
    #[arg(long, default_value_t = 10)]
    pub s2_threshold: u64,
    /// One-bridging-node modeling of single-pin border nets.
    #[arg(long, value_enum, default_value = "on")]
    pub single_pin: Switch,
    /// Run flows only on this many of the finest levels.
    #[arg(long)]
    pub flow_levels: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    pub max_rounds: usize,
    #[arg(long, default_value_t = 16)]
    pub initial_attempts: usize,
    #[arg(long, default_value_t = 10)]
    pub fm_passes: usize,
    /// Coarsening stops at this many vertices.
    #[arg(long)]
    pub coarsen_to: Option<usize>,
}

impl ConfigFlags {
    pub fn to_config(&self) -> PartitionerConfig {
        PartitionerConfig {
            flows: self.flows.on(),
            fm: self.fm.on(),
            refiner: RefinerConfig {
                alpha_prime: self.alpha_prime,
                model: match self.flow_model {
                    ModelArg::Graph => FlowModel::Graph,
                    ModelArg::Hypergraph => FlowModel::Hypergraph,
                },
                variant: match self.network {
                    NetworkArg::Lawler => NetworkVariant::Lawler,
                    NetworkArg::LiuWong => NetworkVariant::LiuWong,
                    NetworkArg::Reduced => NetworkVariant::Reduced,
                },
                single_pin_modeling: self.single_pin.on(),
                most_balanced: self.mbmc.on(),
                mbmc_reps: self.mbmc_reps,
                s1: self.s1.on(),
                s2: self.s2.on(),
                s3: self.s3.on(),
                s2_threshold: self.s2_threshold,
                max_rounds: self.max_rounds,
            },
            coarsening_target: self.coarsen_to,
            initial_attempts: self.initial_attempts,
            fm_passes: self.fm_passes,
            flow_levels: self.flow_levels,
        }
    }
}

#[derive(Parser)]
#[command(no_binary_name = true)]
struct FlagBundle {
    #[command(flatten)]
    flags: ConfigFlags,
}

/// Parses a flag bundle such as "--fm off --alpha-prime 4".
pub fn config_from_flags(text: &str) -> anyhow::Result<PartitionerConfig> {
    let bundle = FlagBundle::try_parse_from(text.split_whitespace()).map_err(|e| anyhow::anyhow!(e.render()))?;
    let cfg = bundle.flags.to_config();
    cfg.validate()?;
    Ok(cfg)
}

#[derive(Parser)]
#[command(name = "hyperflow", version, about = "Hypergraph partitioning with flow-based refinement")]
pub struct Cli {
    /// More log output (repeat for more).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Multilevel k-way partitioning.
    Partition(PartitionArgs),
    /// Flat flow refinement of an existing partition.
    Refine(RefineArgs),
    /// Flow network sizes on a corridor around a bipartition.
    Netstats(NetstatsArgs),
    /// Repeated runs over a manifest with aggregate tables.
    Bench(BenchArgs),
    /// Exact answers for small instances.
    Oracle(OracleArgs),
    /// Convert graphs or matrices to hMetis format.
    Convert(ConvertArgs),
    /// Write generated instances.
    Generate(GenerateArgs),
}

#[derive(Args)]
pub struct PartitionArgs {
    #[arg(long)]
    pub hgr: PathBuf,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub eps: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Partition file to write.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// CSV file the run row is appended to.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    pub flags: ConfigFlags,
}

#[derive(Args)]
pub struct RefineArgs {
    #[arg(long)]
    pub hgr: PathBuf,
    #[arg(long)]
    pub partition: PathBuf,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub eps: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    pub flags: ConfigFlags,
}

#[derive(Args)]
pub struct NetstatsArgs {
    #[arg(long)]
    pub hgr: PathBuf,
    #[arg(long, default_value_t = 25_000)]
    pub corridor_size: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct BenchArgs {
    /// Lines of "path,k,eps".
    #[arg(long)]
    pub manifest: PathBuf,
    /// Lines of "name: flags"; a single default configuration if absent.
    #[arg(long)]
    pub configs: Option<PathBuf>,
    #[arg(long, default_value_t = 10)]
    pub reps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "off")]
    pub effectiveness: Switch,
    /// Seconds per run before further repetitions are skipped.
    #[arg(long)]
    pub time_limit: Option<f64>,
    /// Output directory for runs.csv, instances.csv, summary.csv and
    /// improvements.csv.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleQuery {
    /// Minimum s-t cut weight (vertex ids 1-based).
    StCut,
    /// Minimum km1 over all balanced k-way partitions.
    BestPartition,
    /// Node and arc counts of the three networks on the whole hypergraph.
    Counts,
}

#[derive(Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub hgr: PathBuf,
    #[arg(long, value_enum)]
    pub query: OracleQuery,
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub eps: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    Graph,
    Matrix,
    Hgr,
}

#[derive(Args)]
pub struct ConvertArgs {
    #[arg(long, value_enum)]
    pub from: InputFormat,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Vertex count for graph input; defaults to the largest id.
    #[arg(long)]
    pub vertices: Option<usize>,
    /// Merge parallel graph edges into one weighted net.
    #[arg(long)]
    pub merge_parallel: bool,
}

#[derive(Args)]
pub struct GenerateArgs {
    /// Family name; see `corpus::FAMILIES`.
    #[arg(long, required_unless_present = "desk")]
    pub family: Option<String>,
    #[arg(long, default_value_t = 500)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, required_unless_present = "desk")]
    pub out: Option<PathBuf>,
    /// Write the whole desk corpus and a manifest into this directory.
    #[arg(long, conflicts_with_all = ["family", "out"])]
    pub desk: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Invariant(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Input(_) => EXIT_INPUT,
            CliError::Invariant(_) => EXIT_INVARIANT,
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

/// Sorts a run error into usage, invariant or input failure.
fn classify(e: anyhow::Error) -> CliError {
    if e.downcast_ref::<InvariantViolation>().is_some() {
        return CliError::Invariant(e.to_string());
    }
    match e.downcast_ref::<hyperflow_core::Error>() {
        Some(hyperflow_core::Error::Config(_)) | Some(hyperflow_core::Error::ZeroBlocks) => {
            CliError::Usage(e.to_string())
        }
        _ => CliError::Input(e.to_string()),
    }
}

fn check_k_eps(k: usize, eps: f64) -> Result<(), CliError> {
    if k == 0 {
        return Err(CliError::Usage("--k must be at least 1".into()));
    }
    if !eps.is_finite() || eps < 0.0 {
        return Err(CliError::Usage("--eps must be a finite non-negative number".into()));
    }
    Ok(())
}

fn validated(flags: &ConfigFlags) -> Result<PartitionerConfig, CliError> {
    let cfg = flags.to_config();
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(cfg)
}

fn instance_name(path: &Path) -> String {
    path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| path.display().to_string())
}

fn append_row(path: &Path, record: &RunRecord) -> Result<(), CliError> {
    let fresh = std::fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let mut f = std::fs::OpenOptions::new().create(true).append(true).open(path)?;
    if fresh {
        writeln!(f, "{}", bench::SCHEMA_LINE)?;
    }
    run::write_records(f, std::slice::from_ref(record), fresh)?;
    Ok(())
}

fn report_balance(part: &Partition, err: &mut dyn Write) {
    let _ = writeln!(
        err,
        "unachievable balance: max block weight {} exceeds the limit {}",
        part.max_weight(),
        part.max_allowed_weight()
    );
}

fn cmd_partition(a: &PartitionArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    check_k_eps(a.k, a.eps)?;
    let cfg = validated(&a.flags)?;
    let h = io::read_hgr(&a.hgr)?;
    let name = instance_name(&a.hgr);
    let res = run::run_partition(&h, &name, a.k, a.eps, &cfg, "cli", a.seed).map_err(classify)?;
    if res.unachievable_balance {
        report_balance(&res.partition, err);
    }
    if let Some(p) = &a.out {
        io::write_file(p, &io::write_partition(res.partition.blocks()))?;
    }
    if let Some(p) = &a.csv {
        append_row(p, &res.record)?;
    }
    run::write_records(out, std::slice::from_ref(&res.record), true)?;
    Ok(())
}

fn cmd_refine(a: &RefineArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    check_k_eps(a.k, a.eps)?;
    let cfg = validated(&a.flags)?;
    let h = io::read_hgr(&a.hgr)?;
    let part = io::read_partition(&a.partition, &h, a.k, a.eps)?;
    let name = instance_name(&a.hgr);
    let (res, improved) = run::run_refine(&h, &name, part, &cfg, "cli", a.seed).map_err(classify)?;
    if res.unachievable_balance {
        report_balance(&res.partition, err);
    }
    let _ = writeln!(err, "improved={improved}");
    if let Some(p) = &a.out {
        io::write_file(p, &io::write_partition(res.partition.blocks()))?;
    }
    if let Some(p) = &a.csv {
        append_row(p, &res.record)?;
    }
    run::write_records(out, std::slice::from_ref(&res.record), true)?;
    Ok(())
}

fn cmd_netstats(a: &NetstatsArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let h = io::read_hgr(&a.hgr)?;
    if h.num_vertices() < 2 {
        return Err(CliError::Input("netstats needs at least two vertices".into()));
    }
    let mut size = a.corridor_size;
    if size > h.num_vertices() {
        log::warn!("corridor size {size} exceeds {} vertices; clamped", h.num_vertices());
        size = h.num_vertices();
    }
    let part = netstats::quick_bipartition(&h, a.seed).map_err(classify)?;
    let members = netstats::corridor_of_size(&h, &part, size, a.seed);
    let rows = netstats::netstats(&h, &part, &members).map_err(classify)?;
    let name = instance_name(&a.hgr);
    match &a.out {
        Some(p) => netstats::write_rows(std::fs::File::create(p)?, &name, &rows)?,
        None => netstats::write_rows(out, &name, &rows)?,
    }
    Ok(())
}

fn cmd_bench(a: &BenchArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let text = io::read_file(&a.manifest)?;
    let base = a.manifest.parent().unwrap_or(Path::new("."));
    let instances = bench::parse_manifest(&text, base).map_err(|e| CliError::Input(e.to_string()))?;
    let configs = match &a.configs {
        Some(p) => bench::parse_configs(&io::read_file(p)?, config_from_flags)
            .map_err(|e| CliError::Usage(e.to_string()))?,
        None => vec![bench::NamedConfig { name: "default".into(), config: PartitionerConfig::default() }],
    };
    if a.reps == 0 {
        return Err(CliError::Usage("--reps must be at least 1".into()));
    }
    let opts = BenchOptions {
        instances,
        configs,
        reps: a.reps,
        seed: a.seed,
        effectiveness: a.effectiveness.on(),
        time_limit: a.time_limit,
    };
    let records = bench::run_bench(&opts);
    let agg = bench::aggregate(&records);
    bench::write_all(&a.out, &records, &agg).map_err(|e| CliError::Input(e.to_string()))?;
    writeln!(out, "config,instances,geomean_best_km1,geomean_mean_km1,failed_runs")?;
    for c in &agg.configs {
        writeln!(out, "{},{},{},{},{}", c.config, c.instances, c.geomean_best_km1, c.geomean_mean_km1, c.failed_runs)?;
    }
    Ok(())
}

fn one_based(h: &Hypergraph, v: Option<usize>, flag: &str) -> Result<usize, CliError> {
    match v {
        Some(v) if (1..=h.num_vertices()).contains(&v) => Ok(v - 1),
        Some(v) => Err(CliError::Usage(format!("--{flag} {v} outside 1..={}", h.num_vertices()))),
        None => Err(CliError::Usage(format!("--{flag} is required for this query"))),
    }
}

fn cmd_oracle(a: &OracleArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let h = io::read_hgr(&a.hgr)?;
    let usage = |e: hyperflow_core::Error| CliError::Usage(e.to_string());
    match a.query {
        OracleQuery::StCut => {
            let s = one_based(&h, a.s, "s")?;
            let t = one_based(&h, a.t, "t")?;
            let (w, side) = brute_min_st_cut(&h, s, t).map_err(usage)?;
            let source: Vec<String> = (0..h.num_vertices()).filter(|&v| side[v]).map(|v| (v + 1).to_string()).collect();
            writeln!(out, "cut={w}")?;
            writeln!(out, "source_side={}", source.join(" "))?;
        }
        OracleQuery::BestPartition => {
            let k = a.k.ok_or_else(|| CliError::Usage("--k is required for this query".into()))?;
            let eps = a.eps.ok_or_else(|| CliError::Usage("--eps is required for this query".into()))?;
            check_k_eps(k, eps)?;
            match brute_best_partition(&h, k, eps).map_err(usage)? {
                Some((w, blocks)) => {
                    writeln!(out, "km1={w}")?;
                    let b: Vec<String> = blocks.iter().map(usize::to_string).collect();
                    writeln!(out, "blocks={}", b.join(" "))?;
                }
                None => writeln!(out, "infeasible")?,
            }
        }
        OracleQuery::Counts => {
            let sub = SubHypergraph::whole(&h);
            writeln!(out, "variant,nodes,arcs,infinite_arcs,built_nodes,built_arcs")?;
            for v in NetworkVariant::ALL {
                let s = counting_oracle(&sub, v);
                let b = build(&h, v, BuildOptions::default()).stats();
                writeln!(out, "{},{},{},{},{},{}", v.name(), s.num_nodes, s.num_arcs, s.num_infinite_arcs, b.num_nodes, b.num_arcs)?;
                if s != b {
                    return Err(CliError::Invariant(format!("{} network differs from its closed-form size", v.name())));
                }
            }
        }
    }
    Ok(())
}

fn cmd_convert(a: &ConvertArgs) -> Result<(), CliError> {
    let text = io::read_file(&a.input)?;
    let h = match a.from {
        InputFormat::Graph => io::graph_to_hypergraph(&text, a.vertices, a.merge_parallel)?,
        InputFormat::Matrix => io::matrix_to_hypergraph(&text)?,
        InputFormat::Hgr => io::parse_hgr(&text)?,
    };
    io::write_file(&a.out, &io::write_hgr(&h))?;
    Ok(())
}

/// The desk manifest pairs every instance with k ∈ {2, 4, 8} at ε = 0.03.
pub fn write_desk(dir: &Path) -> Result<usize, CliError> {
    std::fs::create_dir_all(dir)?;
    let mut manifest = String::new();
    let corpus = corpus::desk_corpus();
    for inst in &corpus {
        let file = format!("{}.hgr", inst.name);
        io::write_file(&dir.join(&file), &io::write_hgr(&inst.hypergraph))?;
        for k in [2, 4, 8] {
            manifest.push_str(&format!("{file},{k},0.03\n"));
        }
    }
    io::write_file(&dir.join("manifest.csv"), &manifest)?;
    Ok(corpus.len())
}

fn cmd_generate(a: &GenerateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if let Some(dir) = &a.desk {
        let n = write_desk(dir)?;
        writeln!(out, "wrote {n} instances to {}", dir.display())?;
        return Ok(());
    }
    let family = a.family.as_deref().unwrap_or_default();
    if a.n < 2 {
        return Err(CliError::Usage("--n must be at least 2".into()));
    }
    let h = corpus::generate(family, a.n, a.seed).ok_or_else(|| {
        CliError::Usage(format!("unknown family {family:?}; one of {}", corpus::FAMILIES.join(", ")))
    })?;
    let path = a.out.as_ref().expect("required by clap");
    io::write_file(path, &io::write_hgr(&h))?;
    Ok(())
}

pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Partition(a) => cmd_partition(a, out, err),
        Command::Refine(a) => cmd_refine(a, out, err),
        Command::Netstats(a) => cmd_netstats(a, out),
        Command::Bench(a) => cmd_bench(a, out),
        Command::Oracle(a) => cmd_oracle(a, out),
        Command::Convert(a) => cmd_convert(a),
        Command::Generate(a) => cmd_generate(a, out),
    }
}

/// Parses `args` (without the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv = std::iter::once(OsString::from("hyperflow")).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flag_bundles() {
        let d = config_from_flags("").unwrap();
        assert_eq!(d, PartitionerConfig::default());
        let c = config_from_flags("--fm off --mbmc off --alpha-prime 4 --network lawler").unwrap();
        assert!(!c.fm && !c.refiner.most_balanced);
        assert_eq!(c.refiner.alpha_prime, 4);
        assert_eq!(c.refiner.variant, NetworkVariant::Lawler);
        assert!(config_from_flags("--alpha-prime 3").is_err());
        assert!(config_from_flags("--bogus").is_err());
    }

    #[test]
    fn help_and_usage_codes() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(run(["--help"], &mut o, &mut e), EXIT_OK);
        assert_eq!(run(["partition"], &mut o, &mut e), EXIT_USAGE);
        assert_eq!(run(["nope"], &mut o, &mut e), EXIT_USAGE);
    }
}
