use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use cutcover::ensemble::{DitherConfig, DitherTarget, SigmaRule};
use cutcover::generate::{gen_dumbbell, gen_multiple_resolutions, gen_two_clouds};
use cutcover::graph::DEFAULT_CLIQUE_LIMIT;
use cutcover::io::{load_matrix, write_points_csv};
use cutcover::run::{run, InputFormat, Mode, Resolutions, RunConfig};
use cutcover::{
    check_four_point, check_metric_axioms, check_quasi_ultrametric, check_ultrametric, Error,
    LinkageKind, MetricKind, MetricMatrix,
};

/// Exit status when maximal clique enumeration hits its limit.
const EXIT_CLIQUE_LIMIT: u8 = 3;

#[derive(Parser)]
#[command(name = "cutcover", version, about = "Hierarchical overlapping clustering of networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic point cloud as CSV.
    Generate {
        #[arg(value_enum)]
        which: Geometry,
        #[arg(long)]
        out: PathBuf,
    },
    /// Dithered linkage ensemble on a symmetric network.
    Cluster {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "single")]
        linkage: LinkageKind,
        /// Skip the dendrogram of the unperturbed linkage.
        #[arg(long)]
        no_dendrogram: bool,
    },
    /// Directed single linkage ensemble on a possibly asymmetric network.
    QuasiCluster {
        #[command(flatten)]
        common: Common,
    },
    /// Run every axiom validator on a matrix and print the report.
    Check {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Geometry {
    TwoClouds,
    MultiRes,
    Dumbbell,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Matrix,
    Points,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Coordinates,
    Entries,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "matrix")]
    format: Format,
    #[arg(long, default_value_t = 100)]
    replicates: usize,
    #[arg(long, default_value_t = 0.1)]
    noise_factor: f64,
    /// min-dist, min-entry or abs=VALUE.
    #[arg(long, default_value = "min-dist", value_parser = parse_sigma_rule)]
    sigma_rule: SigmaRule,
    /// Defaults to coordinates for point clouds and entries for matrices.
    #[arg(long, value_enum)]
    target: Option<Target>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `auto` or a comma-separated list of resolutions.
    #[arg(long, default_value = "auto", value_parser = parse_resolutions)]
    resolutions: Resolutions,
    #[arg(long)]
    out_dir: PathBuf,
    /// Average this precomputed (quasi-)ultrametric instead of dithering;
    /// repeat once per replicate.
    #[arg(long = "replicate-input")]
    replicate_inputs: Vec<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_CLIQUE_LIMIT)]
    clique_limit: usize,
}

fn parse_sigma_rule(s: &str) -> Result<SigmaRule, String> {
    match s {
        "min-dist" => Ok(SigmaRule::MinPairwiseDistance),
        "min-entry" => Ok(SigmaRule::MinPositiveEntry),
        _ => match s.strip_prefix("abs=") {
            Some(v) => v
                .parse()
                .map(SigmaRule::Absolute)
                .map_err(|_| format!("invalid sigma value {v:?}")),
            None => Err(format!("unknown sigma rule {s:?}")),
        },
    }
}

fn parse_resolutions(s: &str) -> Result<Resolutions, String> {
    if s == "auto" {
        return Ok(Resolutions::Auto);
    }
    s.split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|_| format!("invalid resolution {v:?}")))
        .collect::<Result<Vec<_>, _>>()
        .map(Resolutions::List)
}

impl Common {
    fn into_config(self, mode: Mode, linkage: LinkageKind, write_dendrogram: bool) -> RunConfig {
        let format = match self.format {
            Format::Matrix => InputFormat::Matrix,
            Format::Points => InputFormat::Points,
        };
        let target = match (self.target, format) {
            (Some(Target::Coordinates), _) => DitherTarget::Coordinates,
            (Some(Target::Entries), _) | (None, InputFormat::Matrix) => DitherTarget::MatrixEntries,
            (None, InputFormat::Points) => DitherTarget::Coordinates,
        };
        RunConfig {
            input: self.input,
            format,
            linkage,
            dither: DitherConfig {
                replicates: self.replicates,
                noise_factor: self.noise_factor,
                sigma_rule: self.sigma_rule,
                target,
                seed: self.seed,
            },
            mode,
            resolutions: self.resolutions,
            out_dir: self.out_dir,
            replicate_inputs: self.replicate_inputs,
            write_dendrogram,
            clique_limit: self.clique_limit,
        }
    }
}

fn flag(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

fn check(input: PathBuf) -> anyhow::Result<()> {
    let net = load_matrix(&input).with_context(|| format!("loading {}", input.display()))?;
    let m = MetricMatrix::new(net.dissim().clone(), MetricKind::General)?;
    let axioms = check_metric_axioms(&m);
    println!("nodes: {}", net.len());
    println!("identity: {}", flag(axioms.identity));
    println!("symmetry: {}", flag(axioms.symmetry));
    println!("triangle: {}", flag(axioms.triangle));
    println!("worst violation: {}", axioms.worst_violation);
    let labels = net.labels();
    let triple = |t: Option<[usize; 3]>| {
        t.map(|[a, b, c]| format!(" ({}, {}, {})", labels[a], labels[b], labels[c]))
            .unwrap_or_default()
    };
    let u = check_ultrametric(&m);
    println!("ultrametric: {} slack {}{}", flag(u.holds), u.worst_slack, triple(u.worst_triple));
    let q = check_quasi_ultrametric(&m);
    println!("quasi-ultrametric: {} slack {}{}", flag(q.holds), q.worst_slack, triple(q.worst_triple));
    let f = check_four_point(&m);
    println!("four-point: {} slack {}", flag(f.holds), f.worst_slack);
    Ok(())
}

fn execute(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Generate { which, out } => {
            let cloud = match which {
                Geometry::TwoClouds => gen_two_clouds(),
                Geometry::MultiRes => gen_multiple_resolutions(),
                Geometry::Dumbbell => gen_dumbbell(),
            };
            let file = std::fs::File::create(&out)
                .with_context(|| format!("creating {}", out.display()))?;
            write_points_csv(std::io::BufWriter::new(file), &cloud)?;
        }
        Command::Cluster {
            common,
            linkage,
            no_dendrogram,
        } => {
            let summary = run(&common.into_config(Mode::Symmetric, linkage, !no_dendrogram))?;
            report(&summary);
        }
        Command::QuasiCluster { common } => {
            if common.format == Format::Points && common.replicate_inputs.is_empty() {
                bail!("quasi-cluster requires --format matrix");
            }
            let summary = run(&common.into_config(Mode::Quasi, LinkageKind::Single, false))?;
            report(&summary);
        }
        Command::Check { input } => check(input)?,
    }
    Ok(())
}

fn report(summary: &cutcover::run::RunSummary) {
    let p = &summary.profile;
    println!("nodes: {}", summary.labels.len());
    println!("breakpoints: {}", p.samples.len());
    match &p.clusterable_at {
        Some(d) => println!("clusterable: yes ({} partition(s))", d.len()),
        None => println!("clusterable: no"),
    }
    if let Some((d, f)) = p.min_local_min {
        println!("min local minimum: delta {d} f_ol {f}");
    }
    for f in &summary.files {
        println!("wrote {}", f.display());
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<Error>() {
                Some(Error::CliqueLimit { .. }) => ExitCode::from(EXIT_CLIQUE_LIMIT),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
