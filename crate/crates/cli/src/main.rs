use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ocel_cluster::clustering::{Algorithm, Linkage};
use ocel_cluster::distance::DistanceWeights;
use ocel_cluster::pipeline::{
    read_clustering, run_cluster, run_discover, run_pipeline, run_profile, run_split, KSelection, PipelineError,
    RunConfig,
};
use ocel_cluster::sublog::Approach;

/// Cluster the objects of an object-centric event log and compare the
/// process models of the resulting sub-logs.
///
/// Set OCEL_CLUSTER_LOG (e.g. `info`) for progress messages.
#[derive(Parser)]
#[command(name = "ocel-cluster", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build object profiles (profiles.csv, profiles.json) from an OCEL.
    Profile {
        #[command(flatten)]
        io: Io,
        #[arg(long = "object-type")]
        object_type: String,
    },
    /// Cluster the profiles written by `profile` (clustering.json).
    Cluster {
        #[command(flatten)]
        io: Io,
        #[arg(long = "object-type")]
        object_type: String,
        #[command(flatten)]
        clustering: ClusterOpts,
    },
    /// Split an OCEL into one sub-log per cluster.
    Split {
        #[command(flatten)]
        io: Io,
        /// Clustering written by `cluster` [default: <out>/clustering.json]
        #[arg(long)]
        clustering: Option<PathBuf>,
        /// Defaults to the type of the clustering.
        #[arg(long = "object-type")]
        object_type: Option<String>,
        #[arg(long, default_value = "existence")]
        approach: Approach,
    },
    /// Discover the OC-DFG of an OCEL and write it as DOT.
    Discover {
        #[command(flatten)]
        io: Io,
    },
    /// Run every stage and write the complexity report.
    Run {
        #[command(flatten)]
        io: Io,
        #[arg(long = "object-type")]
        object_type: String,
        #[command(flatten)]
        clustering: ClusterOpts,
        #[arg(long, default_value = "existence")]
        approach: Approach,
    },
}

#[derive(Args)]
struct Io {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct ClusterOpts {
    /// kmeans, agglomerative or kmedoids
    #[arg(long, default_value = "kmeans")]
    algorithm: Algorithm,
    /// Number of clusters [default: 2]
    #[arg(long, conflicts_with = "k_range")]
    k: Option<usize>,
    /// Pick k by Calinski-Harabasz over LO..HI (inclusive)
    #[arg(long = "k-range", value_parser = parse_range)]
    k_range: Option<(usize, usize)>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// single, complete or average (agglomerative only)
    #[arg(long, default_value = "average")]
    linkage: Linkage,
    /// Distance weights as trace,numeric,categorical
    #[arg(long, default_value = "1,1,1")]
    weights: DistanceWeights,
}

impl ClusterOpts {
    fn apply(&self, cfg: &mut RunConfig) {
        cfg.algorithm = self.algorithm;
        cfg.k = match (self.k, self.k_range) {
            (_, Some((lo, hi))) => KSelection::Range { lo, hi },
            (k, None) => KSelection::Fixed(k.unwrap_or(2)),
        };
        cfg.seed = self.seed;
        cfg.linkage = self.linkage;
        cfg.weights = self.weights;
    }
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (lo, hi) = s
        .split_once("..")
        .or_else(|| s.split_once('-'))
        .ok_or_else(|| format!("expected LO..HI, got `{s}`"))?;
    let num = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("`{v}`: {e}"));
    Ok((num(lo)?, num(hi.trim_start_matches('='))?))
}

fn run(cli: Cli) -> Result<(), PipelineError> {
    match cli.command {
        Command::Profile { io, object_type } => {
            let profiles = run_profile(&RunConfig::new(io.input, object_type, &io.out))?;
            println!("{} profiles written to {}", profiles.len(), io.out.display());
        }
        Command::Cluster {
            io,
            object_type,
            clustering,
        } => {
            let mut cfg = RunConfig::new(io.input, object_type, &io.out);
            clustering.apply(&mut cfg);
            let c = run_cluster(&cfg)?;
            println!("{} clusters written to {}", c.clusters.len(), io.out.join("clustering.json").display());
        }
        Command::Split {
            io,
            clustering,
            object_type,
            approach,
        } => {
            let path = clustering.unwrap_or_else(|| io.out.join("clustering.json"));
            let otype = match object_type {
                Some(t) => t,
                None => read_clustering(&path)?.otype,
            };
            let mut cfg = RunConfig::new(io.input, otype, &io.out);
            cfg.approach = approach;
            let bundle = run_split(&cfg, &path)?;
            println!(
                "{} sub-logs and {} orphan events written to {}",
                bundle.clusters.len(),
                bundle.orphan_events.len(),
                io.out.display()
            );
        }
        Command::Discover { io } => {
            let model = run_discover(&RunConfig::new(io.input, "-", &io.out))?;
            println!(
                "{} activities, {} edges written to {}",
                model.n_nodes(),
                model.n_edges(),
                io.out.display()
            );
        }
        Command::Run {
            io,
            object_type,
            clustering,
            approach,
        } => {
            let mut cfg = RunConfig::new(io.input, object_type, &io.out);
            clustering.apply(&mut cfg);
            cfg.approach = approach;
            let summary = run_pipeline(&cfg)?;
            print!("{}", summary.report.to_text());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("OCEL_CLUSTER_LOG", "warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
