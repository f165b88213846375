//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for usage and configuration errors, 2 for
//! unreadable or malformed input.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::community::{build_communities, extract_partition, Level, Provenance, TideCount};
use crate::error::{Error, Result};
use crate::io::{self, DetectionRecord, InputFormat};
use crate::metrics::partition_stats;
use crate::seed::RngSeed;
use crate::selection::{RandomKind, RankedPairList, SelectionStrategy};
use crate::similarity::build_similarity_matrix;
use crate::sweep::{
    default_del_grid, default_p_grid, default_topn_grid, Experiment, ExperimentConfig, InputSource,
    ReferenceSource, SweepResult,
};
use crate::synthetic::{generate_planted_citation_matrix, SyntheticSpec};

#[derive(Debug, Parser)]
#[command(
    name = "simpair",
    version,
    about = "Community detection by most similar node pairs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Detect core- and real-communities in one network.
    Detect(DetectArgs),
    /// Mix MAX with PSIM/P at increasing probability (counts and NMI).
    SweepProb(SweepArgs),
    /// PSIM restricted to the n most similar partners.
    SweepTopn(SweepArgs),
    /// MAX under random per-row deletion of similarities.
    SweepDel(SweepArgs),
    /// Write a planted-partition citation matrix and its ground truth.
    GenSynth(GenSynthArgs),
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum FormatArg {
    Edges,
    Dense,
}

impl From<FormatArg> for InputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Edges => InputFormat::Edges,
            FormatArg::Dense => InputFormat::Dense,
        }
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum StrategyArg {
    Max,
    Psim,
    P,
}

#[derive(Copy, Clone, Debug, Default, ValueEnum)]
enum TideCountArg {
    #[default]
    Events,
    Merges,
}

impl From<TideCountArg> for TideCount {
    fn from(t: TideCountArg) -> Self {
        match t {
            TideCountArg::Events => TideCount::Events,
            TideCountArg::Merges => TideCount::Merges,
        }
    }
}

#[derive(Copy, Clone, Debug, Default, ValueEnum)]
enum ReferenceArg {
    #[default]
    Max,
    Planted,
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Citation data; a planted synthetic matrix is used when omitted.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Input encoding; inferred from the extension (`.csv` = dense) when omitted.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long, default_value_t = 4)]
    blocks: usize,
    #[arg(long, default_value_t = 25)]
    block_size: usize,
    #[arg(long, default_value_t = 10.0)]
    in_rate: f64,
    #[arg(long, default_value_t = 1.0)]
    cross_rate: f64,
    #[arg(long, default_value_t = 50_000)]
    volume: u64,
    /// Within-block activity decay; 0 gives every node the same expected volume.
    #[arg(long, default_value_t = 1.5)]
    activity_exponent: f64,
    /// Seed of the synthetic matrix (independent of the sweep seed).
    #[arg(long, default_value_t = 0)]
    synth_seed: u64,
}

impl SynthArgs {
    fn spec(&self) -> SyntheticSpec {
        SyntheticSpec {
            block_sizes: vec![self.block_size; self.blocks],
            in_block_rate: self.in_rate,
            cross_block_rate: self.cross_rate,
            volume: self.volume,
            activity_exponent: self.activity_exponent,
            seed: RngSeed(self.synth_seed),
        }
    }
}

#[derive(Debug, Args)]
struct DetectArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Replay a ranked pair list (`selector<TAB>selected<TAB>similarity`) instead of selecting pairs.
    #[arg(long, conflicts_with_all = ["input", "strategy", "topn", "del"])]
    pairs: Option<PathBuf>,
    /// Node count for `--pairs` with numeric ids (default: largest id + 1).
    #[arg(long, requires = "pairs")]
    nodes: Option<usize>,
    #[arg(long, value_enum, default_value = "max")]
    strategy: StrategyArg,
    /// Restrict PSIM to the n most similar partners.
    #[arg(long)]
    topn: Option<usize>,
    /// Delete this fraction of every row before MAX selection.
    #[arg(long)]
    del: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "events")]
    tide_count: TideCountArg,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    synth: SynthArgs,
    /// Randomized strategy for `sweep-prob` (default: both psim and p).
    #[arg(long, value_enum)]
    strategy: Option<StrategyArg>,
    /// Comma list or `start:step:end`.
    #[arg(long)]
    p_grid: Option<String>,
    #[arg(long)]
    topn_grid: Option<String>,
    #[arg(long)]
    del_grid: Option<String>,
    #[arg(long, default_value_t = 20)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "events")]
    tide_count: TideCountArg,
    #[arg(long, value_enum, default_value = "max")]
    reference: ReferenceArg,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct GenSynthArgs {
    #[command(flatten)]
    synth: SynthArgs,
    #[arg(long, value_enum, default_value = "edges")]
    format: FormatArg,
    #[arg(long)]
    out: PathBuf,
}

/// Parses a comma list (`0,0.5,1`) or an inclusive range (`0:0.1:1`).
pub fn parse_f64_list(s: &str) -> Result<Vec<f64>> {
    let bad = |what: &str| Error::Config(format!("invalid list `{s}`: {what}"));
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [single] => single
            .split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|_| bad(v)))
            .collect(),
        [start, step, end] => {
            let num = |v: &str| v.trim().parse::<f64>().map_err(|_| bad(v));
            let (start, step, end) = (num(start)?, num(step)?, num(end)?);
            if step <= 0.0 || end < start {
                return Err(bad("range needs step > 0 and end >= start"));
            }
            let count = ((end - start) / step + 1e-9).floor() as usize;
            // Round away float noise such as 0.30000000000000004.
            Ok((0..=count)
                .map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9)
                .collect())
        }
        _ => Err(bad("expected a comma list or start:step:end")),
    }
}

pub fn parse_usize_list(s: &str) -> Result<Vec<usize>> {
    parse_f64_list(s)?
        .into_iter()
        .map(|v| {
            if v >= 0.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(Error::Config(format!("`{v}` is not a nonnegative integer")))
            }
        })
        .collect()
}

fn input_format(args: &InputArgs, path: &Path) -> InputFormat {
    match args.format {
        Some(f) => f.into(),
        None if path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("csv")) =>
        {
            InputFormat::Dense
        }
        None => InputFormat::Edges,
    }
}

fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn create_out(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn render(f: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) -> Vec<u8> {
    let mut buf = Vec::new();
    f(&mut buf).expect("writing to memory cannot fail");
    buf
}

fn detect(args: DetectArgs) -> Result<()> {
    let (pairs, n_nodes, labels, provenance) = if let Some(path) = &args.pairs {
        let text = fs::File::open(path).map_err(|e| Error::io(path, e))?;
        let input = io::read_pairs_tsv(std::io::BufReader::new(text), &path.display().to_string())?;
        let n = match args.nodes {
            Some(n) if n < input.n_nodes => {
                return Err(Error::NodeOutOfRange {
                    node: input.n_nodes - 1,
                    n_nodes: n,
                })
            }
            Some(n) => n,
            None => input.n_nodes,
        };
        (input.pairs, n, input.labels, Provenance::new("pairs"))
    } else {
        let path = args
            .input
            .input
            .as_ref()
            .ok_or_else(|| Error::Config("detect needs --input or --pairs".into()))?;
        let matrix = io::read_matrix(path, input_format(&args.input, path))?;
        let strategy = match (args.strategy, args.topn, args.del) {
            (_, Some(_), Some(_)) => {
                return Err(Error::Config("--topn and --del cannot be combined".into()))
            }
            (StrategyArg::Max, None, None) => SelectionStrategy::Max,
            (StrategyArg::Max, None, Some(d)) => SelectionStrategy::MaxDeleted(d),
            (StrategyArg::Psim, None, None) => SelectionStrategy::Psim,
            (StrategyArg::Psim, Some(n), None) => SelectionStrategy::PsimTopN(n),
            (StrategyArg::P, None, None) => SelectionStrategy::P,
            _ => {
                return Err(Error::Config(
                    "--topn applies to psim only and --del to max only".into(),
                ))
            }
        };
        strategy.validate()?;
        let mut provenance = Provenance::new(strategy.name());
        match strategy {
            SelectionStrategy::PsimTopN(n) => provenance = provenance.with_param("topn", n as f64),
            SelectionStrategy::MaxDeleted(d) => provenance = provenance.with_param("deletion", d),
            _ => {}
        }
        if !strategy.is_deterministic() {
            provenance = provenance.with_seed(args.seed);
        }
        let s = build_similarity_matrix(&matrix);
        let pairs = strategy.select(&s, RngSeed(args.seed))?;
        (
            pairs,
            matrix.n_nodes(),
            matrix.labels().map(<[String]>::to_vec),
            provenance,
        )
    };

    let result = build_communities(&pairs, n_nodes)?.with_provenance(provenance);
    write_detection(
        &args.out,
        &pairs,
        &result,
        labels.as_deref(),
        args.tide_count.into(),
    )
}

fn write_detection(
    out: &Path,
    pairs: &RankedPairList,
    result: &crate::community::DetectionResult,
    labels: Option<&[String]>,
    tide_count: TideCount,
) -> Result<()> {
    create_out(out)?;
    let record = DetectionRecord::from_result(result, labels);
    write_file(&out.join("result.json"), record.to_json()? + "\n")?;
    for (level, name) in [
        (Level::Core, "partition_core.tsv"),
        (Level::Real, "partition_real.tsv"),
    ] {
        let p = extract_partition(result, level);
        write_file(&out.join(name), render(|w| io::write_partition_tsv(&p, w)))?;
    }
    write_file(
        &out.join("pairs.tsv"),
        render(|w| io::write_pairs_tsv(pairs, w)),
    )?;
    let stats = partition_stats(result, tide_count);
    write_file(
        &out.join("stats.json"),
        serde_json::to_string_pretty(&stats)? + "\n",
    )?;
    if let Some(labels) = labels {
        let text: String = labels
            .iter()
            .enumerate()
            .map(|(i, l)| format!("{i}\t{l}\n"))
            .collect();
        write_file(&out.join("nodes.tsv"), text)?;
    }
    println!(
        "nodes={} cores={} reals={} tides={} unassigned={}",
        stats.n_nodes, stats.cores, stats.reals, stats.tides, stats.unassigned
    );
    Ok(())
}

fn sweep_config(args: &SweepArgs) -> Result<ExperimentConfig> {
    let input = match &args.input.input {
        Some(path) => InputSource::File {
            path: path.clone(),
            format: input_format(&args.input, path),
        },
        None => InputSource::Synthetic(args.synth.spec()),
    };
    let mut cfg = ExperimentConfig::new(input);
    cfg.reference = match args.reference {
        ReferenceArg::Max => ReferenceSource::Max,
        ReferenceArg::Planted => ReferenceSource::Planted,
    };
    cfg.kinds = match args.strategy {
        None => vec![RandomKind::Psim, RandomKind::P],
        Some(StrategyArg::Psim) => vec![RandomKind::Psim],
        Some(StrategyArg::P) => vec![RandomKind::P],
        Some(StrategyArg::Max) => {
            return Err(Error::Config(
                "the probability sweep mixes MAX with psim or p".into(),
            ))
        }
    };
    cfg.p_grid = match &args.p_grid {
        Some(s) => parse_f64_list(s)?,
        None => default_p_grid(),
    };
    cfg.topn_grid = match &args.topn_grid {
        Some(s) => parse_usize_list(s)?,
        None => default_topn_grid(),
    };
    cfg.del_grid = match &args.del_grid {
        Some(s) => parse_f64_list(s)?,
        None => default_del_grid(),
    };
    cfg.repetitions = args.reps;
    cfg.base_seed = RngSeed(args.seed);
    cfg.tide_count = args.tide_count.into();
    cfg.validate()?;
    Ok(cfg)
}

fn sweep(
    args: SweepArgs,
    run: fn(&Experiment, &ExperimentConfig) -> Result<SweepResult>,
) -> Result<SweepResult> {
    let cfg = sweep_config(&args)?;
    let experiment = Experiment::prepare(&cfg)?;
    let result = run(&experiment, &cfg)?;
    create_out(&args.out)?;
    write_file(&args.out.join("sweep.csv"), result.to_csv())?;
    write_file(
        &args.out.join("sweep.json"),
        serde_json::to_string_pretty(&result)? + "\n",
    )?;
    Ok(result)
}

fn gen_synth(args: GenSynthArgs) -> Result<()> {
    let spec = args.synth.spec();
    let (matrix, truth) = generate_planted_citation_matrix(&spec)?;
    create_out(&args.out)?;
    let (name, body) = match args.format {
        FormatArg::Edges => ("matrix.tsv", render(|w| io::write_edge_list(&matrix, w))),
        FormatArg::Dense => ("matrix.csv", render(|w| io::write_dense_csv(&matrix, w))),
    };
    write_file(&args.out.join(name), body)?;
    write_file(
        &args.out.join("planted.tsv"),
        render(|w| io::write_partition_tsv(&truth, w)),
    )?;
    println!(
        "nodes={} blocks={} citations={}",
        matrix.n_nodes(),
        spec.n_blocks(),
        matrix.total()
    );
    Ok(())
}

fn print_crossings(result: &SweepResult, kinds: &[&str]) {
    for kind in kinds {
        for level in [Level::Core, Level::Real] {
            match result.first_below(kind, level, 0.5) {
                Some(v) => println!("{kind}: mean NMI({level}) first below 0.5 at {v}"),
                None => println!("{kind}: mean NMI({level}) stays at or above 0.5"),
            }
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Detect(a) => detect(a),
        Command::SweepProb(a) => {
            let r = sweep(a, Experiment::probability_sweep)?;
            print_crossings(&r, &["psim", "p"]);
            Ok(())
        }
        Command::SweepTopn(a) => {
            let r = sweep(a, Experiment::topn_sweep)?;
            print_crossings(&r, &["psim"]);
            Ok(())
        }
        Command::SweepDel(a) => {
            let r = sweep(a, Experiment::deletion_sweep)?;
            print_crossings(&r, &["max"]);
            Ok(())
        }
        Command::GenSynth(a) => gen_synth(a),
    }
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_input_error() {
                2
            } else {
                1
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_and_ranges() {
        assert_eq!(parse_f64_list("0,0.5,1").unwrap(), vec![0.0, 0.5, 1.0]);
        let r = parse_f64_list("0:0.1:1").unwrap();
        assert_eq!(r.len(), 11);
        assert_eq!(r[3], 0.3);
        assert_eq!(r[10], 1.0);
        assert_eq!(parse_usize_list("1:1:4").unwrap(), vec![1, 2, 3, 4]);
        assert!(parse_usize_list("1.5").is_err());
        assert!(parse_f64_list("1:0:2").is_err());
        assert!(parse_f64_list("a,b").is_err());
    }

    #[test]
    fn usage_errors_exit_with_one() {
        assert_eq!(run(["simpair", "detect"]), 1);
        assert_eq!(run(["simpair", "nonsense"]), 1);
        assert_eq!(run(["simpair", "--help"]), 0);
    }
}
