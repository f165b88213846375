//! Parameter sweeps over the randomized strategies.
//!
//! Every sweep compares repeated randomized detections against a reference
//! partition, by default the deterministic MAX result on the same input.
//! Repetition `r` at grid point `g` is seeded with
//! [`derive_seed`]`(base_seed, g, r)`; grid points of the probability sweep
//! share seeds across PSIM and P, so the two kinds are paired run by run.
//! Repetitions run in parallel and are aggregated in seed order.

use std::fmt::Write as _;
use std::path::PathBuf;

use log::warn;
use rayon::prelude::*;
use serde::Serialize;

use crate::community::{
    build_communities, extract_partition, DetectionResult, Level, Partition, TideCount,
};
use crate::error::{Error, Result};
use crate::io::{read_matrix, InputFormat};
use crate::metrics::{nmi, partition_stats};
use crate::seed::{derive_seed, RngSeed};
use crate::selection::{select_max, RandomKind, SelectionStrategy};
use crate::similarity::{build_similarity_matrix, CitationMatrix, SimilarityMatrix};
use crate::synthetic::{generate_planted_citation_matrix, SyntheticSpec};

#[derive(Clone, Debug, PartialEq)]
pub enum InputSource {
    File { path: PathBuf, format: InputFormat },
    Synthetic(SyntheticSpec),
    Matrix(CitationMatrix),
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub enum ReferenceSource {
    /// The MAX detection on the same input.
    #[default]
    Max,
    /// The planted blocks of a synthetic input.
    Planted,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub input: InputSource,
    pub reference: ReferenceSource,
    /// Randomized strategies compared in the probability sweep.
    pub kinds: Vec<RandomKind>,
    pub p_grid: Vec<f64>,
    pub topn_grid: Vec<usize>,
    pub del_grid: Vec<f64>,
    pub repetitions: usize,
    pub base_seed: RngSeed,
    pub tide_count: TideCount,
}

/// `0.0, 0.1, ..., 1.0`
pub fn default_p_grid() -> Vec<f64> {
    (0..=10).map(|i| i as f64 / 10.0).collect()
}

/// `0.0, 0.1, ..., 0.9`
pub fn default_del_grid() -> Vec<f64> {
    (0..=9).map(|i| i as f64 / 10.0).collect()
}

pub fn default_topn_grid() -> Vec<usize> {
    vec![1, 2, 3, 5, 10, 20, 30, 50, 100]
}

impl ExperimentConfig {
    pub fn new(input: InputSource) -> Self {
        ExperimentConfig {
            input,
            reference: ReferenceSource::Max,
            kinds: vec![RandomKind::Psim, RandomKind::P],
            p_grid: default_p_grid(),
            topn_grid: default_topn_grid(),
            del_grid: default_del_grid(),
            repetitions: 20,
            base_seed: RngSeed(0),
            tide_count: TideCount::Events,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::Config("repetitions must be at least 1".into()));
        }
        if let Some(p) = self.p_grid.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::Config(format!("probability {p} is outside [0, 1]")));
        }
        if let Some(d) = self.del_grid.iter().find(|d| !(0.0..=1.0).contains(*d)) {
            return Err(Error::Config(format!(
                "deletion fraction {d} is outside [0, 1]"
            )));
        }
        if self.topn_grid.contains(&0) {
            return Err(Error::Config("top-n values must be positive".into()));
        }
        if self.reference == ReferenceSource::Planted
            && !matches!(self.input, InputSource::Synthetic(_))
        {
            return Err(Error::Config(
                "a planted reference needs a synthetic input".into(),
            ));
        }
        Ok(())
    }
}

/// Mean and sample standard deviation.
#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub mean: f64,
    pub std: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len();
        if n == 0 {
            return Summary {
                mean: f64::NAN,
                std: f64::NAN,
            };
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let std = if n < 2 {
            0.0
        } else {
            (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64).sqrt()
        };
        Summary { mean, std }
    }
}

/// One randomized detection.
#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct RunRecord {
    pub seed: u64,
    pub cores: usize,
    pub reals: usize,
    pub tides: usize,
    pub nmi_core: f64,
    pub nmi_real: f64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SweepKind {
    Probability,
    TopN,
    Deletion,
}

impl SweepKind {
    pub fn name(self) -> &'static str {
        match self {
            SweepKind::Probability => "prob",
            SweepKind::TopN => "topn",
            SweepKind::Deletion => "del",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub sweep: SweepKind,
    pub param: f64,
    /// Strategy family of the runs: `psim`, `p` or `max`.
    pub kind: String,
    pub runs: Vec<RunRecord>,
    pub cores: Summary,
    pub reals: Summary,
    pub tides: Summary,
    pub nmi_core: Summary,
    pub nmi_real: Summary,
}

impl SweepRow {
    fn from_runs(sweep: SweepKind, param: f64, kind: &str, mut runs: Vec<RunRecord>) -> Self {
        runs.sort_by_key(|r| r.seed);
        let col = |f: fn(&RunRecord) -> f64| -> Summary {
            Summary::of(&runs.iter().map(f).collect::<Vec<_>>())
        };
        SweepRow {
            sweep,
            param,
            kind: kind.to_string(),
            cores: col(|r| r.cores as f64),
            reals: col(|r| r.reals as f64),
            tides: col(|r| r.tides as f64),
            nmi_core: col(|r| r.nmi_core),
            nmi_real: col(|r| r.nmi_real),
            runs,
        }
    }

    pub fn repetitions(&self) -> usize {
        self.runs.len()
    }

    pub fn seeds(&self) -> Vec<u64> {
        self.runs.iter().map(|r| r.seed).collect()
    }

    pub fn nmi(&self, level: Level) -> Summary {
        match level {
            Level::Core => self.nmi_core,
            Level::Real => self.nmi_real,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

pub const CSV_HEADER: &str = "sweep,param,kind,reps,cores_mean,cores_std,reals_mean,reals_std,\
tides_mean,tides_std,nmi_core_mean,nmi_core_std,nmi_real_mean,nmi_real_std";

impl SweepResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = write!(
                out,
                "{},{},{},{}",
                r.sweep.name(),
                r.param,
                r.kind,
                r.repetitions()
            );
            for s in [r.cores, r.reals, r.tides, r.nmi_core, r.nmi_real] {
                let _ = write!(out, ",{:.6},{:.6}", s.mean, s.std);
            }
            out.push('\n');
        }
        out
    }

    /// Rows of one strategy kind, in grid order.
    pub fn rows_of<'a>(&'a self, kind: &'a str) -> impl Iterator<Item = &'a SweepRow> + 'a {
        self.rows.iter().filter(move |r| r.kind == kind)
    }

    pub fn row(&self, kind: &str, param: f64) -> Option<&SweepRow> {
        self.rows
            .iter()
            .find(|r| r.kind == kind && r.param == param)
    }

    /// First grid value (in grid order) where the mean NMI at `level` drops
    /// below `threshold`.
    pub fn first_below(&self, kind: &str, level: Level, threshold: f64) -> Option<f64> {
        self.rows_of(kind)
            .find(|r| r.nmi(level).mean < threshold)
            .map(|r| r.param)
    }
}

/// Input, similarity and reference partitions, prepared once per sweep.
#[derive(Clone, Debug)]
pub struct Experiment {
    pub matrix: CitationMatrix,
    pub similarity: SimilarityMatrix,
    pub reference: DetectionResult,
    pub reference_core: Partition,
    pub reference_real: Partition,
    pub tide_count: TideCount,
}

impl Experiment {
    pub fn prepare(cfg: &ExperimentConfig) -> Result<Self> {
        cfg.validate()?;
        let (matrix, planted) = match &cfg.input {
            InputSource::File { path, format } => (read_matrix(path, *format)?, None),
            InputSource::Synthetic(spec) => {
                let (m, truth) = generate_planted_citation_matrix(spec)?;
                (m, Some(truth))
            }
            InputSource::Matrix(m) => (m.clone(), None),
        };
        if matrix.n_nodes() < 2 {
            return Err(Error::Config("sweeps need at least two nodes".into()));
        }
        let planted = match cfg.reference {
            ReferenceSource::Max => None,
            ReferenceSource::Planted => planted,
        };
        Ok(Experiment::from_matrix(matrix, planted, cfg.tide_count))
    }

    /// Uses `planted` as the reference at both levels when given, otherwise
    /// the MAX detection.
    pub fn from_matrix(
        matrix: CitationMatrix,
        planted: Option<Partition>,
        tide_count: TideCount,
    ) -> Self {
        let similarity = build_similarity_matrix(&matrix);
        let reference = reference_detection(&similarity);
        let (reference_core, reference_real) = match planted {
            Some(p) => (p.clone(), p),
            None => (
                extract_partition(&reference, Level::Core),
                extract_partition(&reference, Level::Real),
            ),
        };
        Experiment {
            matrix,
            similarity,
            reference,
            reference_core,
            reference_real,
            tide_count,
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.similarity.n_nodes()
    }

    /// One detection with `strategy`, scored against the reference.
    pub fn run_once(&self, strategy: &SelectionStrategy, seed: RngSeed) -> Result<RunRecord> {
        let pairs = strategy.select(&self.similarity, seed)?;
        let r = build_communities(&pairs, self.n_nodes())?;
        let stats = partition_stats(&r, self.tide_count);
        Ok(RunRecord {
            seed: seed.0,
            cores: stats.cores,
            reals: stats.reals,
            tides: stats.tides,
            nmi_core: nmi(&extract_partition(&r, Level::Core), &self.reference_core)?,
            nmi_real: nmi(&extract_partition(&r, Level::Real), &self.reference_real)?,
        })
    }

    fn repeat(
        &self,
        cfg: &ExperimentConfig,
        grid: usize,
        strategy: SelectionStrategy,
    ) -> Result<Vec<RunRecord>> {
        (0..cfg.repetitions)
            .into_par_iter()
            .map(|rep| {
                self.run_once(
                    &strategy,
                    derive_seed(cfg.base_seed, grid as u64, rep as u64),
                )
            })
            .collect()
    }

    pub fn probability_sweep(&self, cfg: &ExperimentConfig) -> Result<SweepResult> {
        cfg.validate()?;
        let mut rows = Vec::new();
        for &kind in &cfg.kinds {
            for (g, &p) in cfg.p_grid.iter().enumerate() {
                let runs = self.repeat(
                    cfg,
                    g,
                    SelectionStrategy::Mixed {
                        kind,
                        probability: p,
                    },
                )?;
                rows.push(SweepRow::from_runs(
                    SweepKind::Probability,
                    p,
                    kind.name(),
                    runs,
                ));
            }
        }
        Ok(SweepResult { rows })
    }

    pub fn topn_sweep(&self, cfg: &ExperimentConfig) -> Result<SweepResult> {
        cfg.validate()?;
        let limit = self.n_nodes() - 1;
        let mut grid: Vec<usize> = Vec::new();
        for &t in &cfg.topn_grid {
            let t = if t > limit {
                warn!("top-n {t} exceeds the {limit} available partners; clamped to {limit}");
                limit
            } else {
                t
            };
            if !grid.contains(&t) {
                grid.push(t);
            }
        }
        let mut rows = Vec::new();
        for (g, &t) in grid.iter().enumerate() {
            let runs = self.repeat(cfg, g, SelectionStrategy::PsimTopN(t))?;
            rows.push(SweepRow::from_runs(SweepKind::TopN, t as f64, "psim", runs));
        }
        Ok(SweepResult { rows })
    }

    pub fn deletion_sweep(&self, cfg: &ExperimentConfig) -> Result<SweepResult> {
        cfg.validate()?;
        let mut rows = Vec::new();
        for (g, &d) in cfg.del_grid.iter().enumerate() {
            let runs = self.repeat(cfg, g, SelectionStrategy::MaxDeleted(d))?;
            rows.push(SweepRow::from_runs(SweepKind::Deletion, d, "max", runs));
        }
        Ok(SweepResult { rows })
    }
}

fn reference_detection(s: &SimilarityMatrix) -> DetectionResult {
    build_communities(&select_max(s, None), s.n_nodes())
        .expect("MAX pairs only reference existing nodes")
}

pub fn run_probability_sweep(cfg: &ExperimentConfig) -> Result<SweepResult> {
    Experiment::prepare(cfg)?.probability_sweep(cfg)
}

pub fn run_topn_sweep(cfg: &ExperimentConfig) -> Result<SweepResult> {
    Experiment::prepare(cfg)?.topn_sweep(cfg)
}

pub fn run_deletion_sweep(cfg: &ExperimentConfig) -> Result<SweepResult> {
    Experiment::prepare(cfg)?.deletion_sweep(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg() -> ExperimentConfig {
        let spec = SyntheticSpec {
            volume: 4_000,
            ..SyntheticSpec::uniform(3, 8).with_seed(1)
        };
        ExperimentConfig {
            repetitions: 4,
            ..ExperimentConfig::new(InputSource::Synthetic(spec))
        }
    }

    #[test]
    fn summary_uses_sample_std() {
        let s = Summary::of(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(s.mean, 2.5);
        assert!((s.std - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(Summary::of(&[7.0]).std, 0.0);
    }

    #[test]
    fn invalid_grids_are_config_errors() {
        let mut cfg = small_cfg();
        cfg.p_grid = vec![0.5, 1.5];
        assert!(matches!(run_probability_sweep(&cfg), Err(Error::Config(_))));
        let mut cfg = small_cfg();
        cfg.repetitions = 0;
        assert!(cfg.validate().is_err());
        let mut cfg = small_cfg();
        cfg.topn_grid = vec![0];
        assert!(cfg.validate().is_err());
        let mut cfg = ExperimentConfig::new(InputSource::Matrix(CitationMatrix::new(3)));
        cfg.reference = ReferenceSource::Planted;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn topn_is_clamped_and_deduplicated() {
        let mut cfg = small_cfg();
        cfg.topn_grid = vec![1, 23, 40, 500];
        let r = run_topn_sweep(&cfg).unwrap();
        let params: Vec<f64> = r.rows.iter().map(|r| r.param).collect();
        assert_eq!(params, vec![1.0, 23.0]);
    }

    #[test]
    fn csv_has_header_and_one_row_per_point() {
        let mut cfg = small_cfg();
        cfg.p_grid = vec![0.0, 1.0];
        let csv = run_probability_sweep(&cfg).unwrap().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 1 + 2 * 2);
        assert!(lines[1].starts_with("prob,0,psim,4,"));
    }
}
