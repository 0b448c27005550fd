//! End-to-end pipeline: input → cut metric → profile → covering records.

use std::fs;
use std::path::{Path, PathBuf};

use crate::covering::{covering_at_limited, profile_sweep_limited, Covering, OverlapProfile};
use crate::ensemble::{algorithm1, average_matrices, quasi_algorithm1, uniform_weights, DitherConfig, Input};
use crate::error::{Error, Result};
use crate::graph::DEFAULT_CLIQUE_LIMIT;
use crate::io::{
    format_coverings, load_matrix, load_points, write_dendrogram_csv, write_matrix_csv,
    write_profile_csv, CoveringFile, CoveringRecord, RecordMode, RecordTag,
};
use crate::linkage::{agglomerate, LinkageKind};
use crate::metric::{check_quasi_ultrametric, check_ultrametric, MetricKind, MetricMatrix};
use crate::quasi::{quasi_edge_set, QuasiCovering};

pub const CUT_METRIC_FILE: &str = "cut_metric.csv";
pub const PROFILE_FILE: &str = "profile.csv";
pub const COVERINGS_FILE: &str = "coverings.txt";
pub const DENDROGRAM_FILE: &str = "dendrogram.csv";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Matrix,
    Points,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Symmetric,
    Quasi,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Resolutions {
    /// Every zero-overlap partition and the smallest local minimum of `f_ol`.
    Auto,
    List(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub format: InputFormat,
    pub linkage: LinkageKind,
    pub dither: DitherConfig,
    pub mode: Mode,
    pub resolutions: Resolutions,
    pub out_dir: PathBuf,
    /// Precomputed (quasi-)ultrametrics averaged in place of dithered replicates.
    pub replicate_inputs: Vec<PathBuf>,
    pub write_dendrogram: bool,
    pub clique_limit: usize,
}

impl RunConfig {
    pub fn new(input: impl Into<PathBuf>, out_dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            input: Some(input.into()),
            format: InputFormat::Matrix,
            linkage: LinkageKind::Single,
            dither: DitherConfig::default(),
            mode: Mode::Symmetric,
            resolutions: Resolutions::Auto,
            out_dir: out_dir.into(),
            replicate_inputs: Vec::new(),
            write_dendrogram: true,
            clique_limit: DEFAULT_CLIQUE_LIMIT,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.input.is_none() && self.replicate_inputs.is_empty() {
            return Err(Error::InvalidConfig("no input and no replicate matrices given".into()));
        }
        if self.mode == Mode::Quasi && self.format == InputFormat::Points && self.replicate_inputs.is_empty() {
            return Err(Error::InvalidConfig("quasi mode requires matrix input".into()));
        }
        if let Resolutions::List(v) = &self.resolutions {
            if let Some(d) = v.iter().find(|d| !(d.is_finite() && **d >= 0.0)) {
                return Err(Error::InvalidConfig(format!("invalid resolution {d}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub labels: Vec<String>,
    pub cut_metric: MetricMatrix,
    pub profile: OverlapProfile,
    pub records: Vec<CoveringRecord>,
    pub files: Vec<PathBuf>,
}

fn load_input(cfg: &RunConfig, path: &Path) -> Result<Input> {
    Ok(match cfg.format {
        InputFormat::Matrix => Input::Matrix(load_matrix(path)?),
        InputFormat::Points => Input::Points(load_points(path)?),
    })
}

fn injected(cfg: &RunConfig) -> Result<(Vec<String>, MetricMatrix)> {
    let mut labels = None;
    let mut list = Vec::with_capacity(cfg.replicate_inputs.len());
    for path in &cfg.replicate_inputs {
        let net = load_matrix(path)?;
        let (kind, report) = match cfg.mode {
            Mode::Symmetric => {
                let m = MetricMatrix::new(net.dissim().clone(), MetricKind::Ultrametric)?;
                let r = check_ultrametric(&m);
                (m, r)
            }
            Mode::Quasi => {
                let m = MetricMatrix::new(net.dissim().clone(), MetricKind::QuasiUltrametric)?;
                let r = check_quasi_ultrametric(&m);
                (m, r)
            }
        };
        if !report.holds {
            return Err(Error::AxiomViolation(format!(
                "{} fails the max-triangle inequality by {}",
                path.display(),
                report.worst_slack
            )));
        }
        match &labels {
            None => labels = Some(net.labels().to_vec()),
            Some(l) if l != net.labels() => {
                return Err(Error::Structural(format!(
                    "{} has different labels from the first replicate",
                    path.display()
                )))
            }
            _ => {}
        }
        list.push(kind);
    }
    let avg = average_matrices(&list, &uniform_weights(list.len()))?;
    Ok((labels.expect("at least one replicate"), avg))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn record_at(
    m: &MetricMatrix,
    mode: Mode,
    tag: RecordTag,
    covering: Covering,
) -> Result<CoveringRecord> {
    Ok(match mode {
        Mode::Symmetric => CoveringRecord::symmetric(tag, covering),
        Mode::Quasi => {
            let edges = quasi_edge_set(m, &covering, covering.delta())?;
            CoveringRecord::quasi(tag, &QuasiCovering::new(covering, edges)?)
        }
    })
}

/// Runs the pipeline and writes the cut metric, the overlap profile, the
/// covering records and (symmetric mode) the unperturbed dendrogram into
/// `cfg.out_dir`.
pub fn run(cfg: &RunConfig) -> Result<RunSummary> {
    cfg.validate()?;
    let input = match &cfg.input {
        Some(p) if cfg.replicate_inputs.is_empty() || cfg.write_dendrogram => Some(load_input(cfg, p)?),
        _ => None,
    };

    let (labels, cut_metric) = if !cfg.replicate_inputs.is_empty() {
        injected(cfg)?
    } else {
        let input = input.as_ref().expect("validated");
        cfg.dither.validate(input)?;
        let m = match cfg.mode {
            Mode::Symmetric => algorithm1(input, &cfg.dither, cfg.linkage)?,
            Mode::Quasi => quasi_algorithm1(&input.to_network()?, &cfg.dither)?,
        };
        (input.labels().to_vec(), m)
    };
    if let Some(input) = &input {
        if input.labels() != labels.as_slice() {
            return Err(Error::Structural("replicate labels differ from the input's".into()));
        }
    }

    let sweep = profile_sweep_limited(&cut_metric, cfg.clique_limit)?;
    let mut records = Vec::new();
    match &cfg.resolutions {
        Resolutions::List(deltas) => {
            for &d in deltas {
                let c = covering_at_limited(&cut_metric, d, cfg.clique_limit)?;
                records.push(record_at(&cut_metric, cfg.mode, RecordTag::Requested, c)?);
            }
        }
        Resolutions::Auto => {
            for c in &sweep.partitions {
                records.push(record_at(&cut_metric, cfg.mode, RecordTag::Partition, c.clone())?);
            }
            if let Some((d, _)) = sweep.profile.min_local_min {
                let c = covering_at_limited(&cut_metric, d, cfg.clique_limit)?;
                records.push(record_at(&cut_metric, cfg.mode, RecordTag::MinLocalMin, c)?);
            }
            records.sort_by(|a, b| a.covering.delta().total_cmp(&b.covering.delta()));
        }
    }

    fs::create_dir_all(&cfg.out_dir)
        .map_err(|e| Error::Io(format!("{}: {e}", cfg.out_dir.display())))?;
    let mut files = Vec::new();

    let mut buf = Vec::new();
    write_matrix_csv(&mut buf, &labels, cut_metric.values())?;
    let path = cfg.out_dir.join(CUT_METRIC_FILE);
    write_file(&path, &buf)?;
    files.push(path);

    let mut buf = Vec::new();
    write_profile_csv(&mut buf, &sweep.profile.samples)?;
    let path = cfg.out_dir.join(PROFILE_FILE);
    write_file(&path, &buf)?;
    files.push(path);

    let file = CoveringFile {
        mode: match cfg.mode {
            Mode::Symmetric => RecordMode::Symmetric,
            Mode::Quasi => RecordMode::Quasi,
        },
        labels: labels.clone(),
        records,
    };
    let path = cfg.out_dir.join(COVERINGS_FILE);
    write_file(&path, format_coverings(&file)?.as_bytes())?;
    files.push(path);

    if cfg.mode == Mode::Symmetric && cfg.write_dendrogram {
        if let Some(input) = &input {
            let d = agglomerate(&input.to_network()?, cfg.linkage)?;
            let mut buf = Vec::new();
            write_dendrogram_csv(&mut buf, &d)?;
            let path = cfg.out_dir.join(DENDROGRAM_FILE);
            write_file(&path, &buf)?;
            files.push(path);
        }
    }

    Ok(RunSummary {
        labels,
        cut_metric,
        profile: sweep.profile,
        records: file.records,
        files,
    })
}
