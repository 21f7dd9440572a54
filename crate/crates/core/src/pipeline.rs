//! Staged end-to-end runs: profile, cluster, split, discover, report.
//!
//! Every stage reads the artifact of the previous one, so the stages can
//! be run on their own. Artifacts carry a digest of the configuration and
//! of the input bytes they were produced from. Outputs contain no clock or
//! host data, so equal inputs give byte-identical files.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use log::info;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::clustering::{cluster, sweep_k, Algorithm, ClusterMethod, Clustering, Linkage, SweepEntry};
use crate::distance::DistanceWeights;
use crate::ocdfg::{discover, export_dot_with_comment, ComplexityReport, Ocdfg};
use crate::ocel::{parse_ocel, to_json_value, Ocel};
use crate::profile::{build_profiles, encode, write_profiles_csv, ObjectProfile};
use crate::sublog::{build_bundle, relevant_log, Approach, SubLogBundle};

/// Number of clusters: fixed, or the best Calinski-Harabasz score over an
/// inclusive range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KSelection {
    Fixed(usize),
    Range { lo: usize, hi: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: PathBuf,
    pub otype: String,
    pub algorithm: Algorithm,
    pub k: KSelection,
    pub seed: u64,
    pub linkage: Linkage,
    pub approach: Approach,
    pub weights: DistanceWeights,
    pub out: PathBuf,
}

impl RunConfig {
    /// Defaults for everything but the paths and the object type.
    pub fn new(input: impl Into<PathBuf>, otype: impl Into<String>, out: impl Into<PathBuf>) -> Self {
        RunConfig {
            input: input.into(),
            otype: otype.into(),
            algorithm: Algorithm::KMeans,
            k: KSelection::Fixed(2),
            seed: 0,
            linkage: Linkage::default(),
            approach: Approach::Existence,
            weights: DistanceWeights::default(),
            out: out.into(),
        }
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        let fail = |msg: String| Err(PipelineError::new(Stage::Config, msg));
        if self.otype.is_empty() {
            return fail("object type must not be empty".into());
        }
        match self.k {
            KSelection::Fixed(0) => return fail("k must be at least 1".into()),
            KSelection::Range { lo, hi } if lo > hi => return fail(format!("empty k range {lo}..={hi}")),
            _ => {}
        }
        DistanceWeights::new(self.weights.trace, self.weights.numeric, self.weights.categorical)
            .map_err(|e| PipelineError::new(Stage::Config, e))?;
        Ok(())
    }

    pub fn method(&self) -> ClusterMethod {
        match self.algorithm {
            Algorithm::KMeans => ClusterMethod::KMeans,
            Algorithm::KMedoids => ClusterMethod::KMedoids { weights: self.weights },
            Algorithm::Agglomerative => ClusterMethod::Agglomerative {
                linkage: self.linkage,
                weights: self.weights,
            },
        }
    }

    /// SHA-256 over the settings that shape the results and over the input
    /// bytes. Paths are left out, so moving files keeps the digest.
    pub fn digest(&self, input: &[u8]) -> String {
        let settings = json!({
            "otype": self.otype,
            "algorithm": self.algorithm,
            "k": self.k,
            "seed": self.seed,
            "linkage": self.linkage,
            "approach": self.approach,
            "weights": self.weights,
        });
        let mut h = Sha256::new();
        h.update(settings.to_string().as_bytes());
        h.update([0u8]);
        h.update(input);
        hex::encode(h.finalize())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Config,
    Input,
    Profiling,
    Clustering,
    Splitting,
    Discovery,
    Report,
    Output,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Config => "config",
            Stage::Input => "input",
            Stage::Profiling => "profiling",
            Stage::Clustering => "clustering",
            Stage::Splitting => "splitting",
            Stage::Discovery => "discovery",
            Stage::Report => "report",
            Stage::Output => "output",
        })
    }
}

#[derive(Debug)]
pub struct PipelineError {
    pub stage: Stage,
    pub source: Box<dyn std::error::Error + Send + Sync>,
}

impl PipelineError {
    pub fn new(stage: Stage, source: impl Into<Box<dyn std::error::Error + Send + Sync>>) -> Self {
        PipelineError {
            stage,
            source: source.into(),
        }
    }
}

impl fmt::Display for PipelineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} stage failed: {}", self.stage, self.source)
    }
}

impl std::error::Error for PipelineError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(self.source.as_ref())
    }
}

fn at<E>(stage: Stage) -> impl FnOnce(E) -> PipelineError
where
    E: Into<Box<dyn std::error::Error + Send + Sync>>,
{
    move |e| PipelineError::new(stage, e)
}

/// Profiles as stored between the profile and cluster stages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileSet {
    pub otype: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config_digest: Option<String>,
    pub profiles: Vec<ObjectProfile>,
}

#[derive(Serialize)]
struct SweepDoc<'a> {
    config_digest: &'a str,
    entries: &'a [SweepEntry],
}

#[derive(Debug)]
pub struct RunSummary {
    pub config_digest: String,
    pub clustering: Clustering,
    pub bundle: SubLogBundle,
    pub report: ComplexityReport,
    /// Written files, relative to the output directory, in write order.
    pub files: Vec<PathBuf>,
}

struct Writer<'a> {
    dir: &'a Path,
    files: Vec<PathBuf>,
}

impl<'a> Writer<'a> {
    fn new(dir: &'a Path) -> Result<Self, PipelineError> {
        fs::create_dir_all(dir).map_err(at(Stage::Output))?;
        Ok(Writer { dir, files: Vec::new() })
    }

    fn text(&mut self, name: &str, text: &str) -> Result<(), PipelineError> {
        fs::write(self.dir.join(name), text).map_err(at(Stage::Output))?;
        self.files.push(PathBuf::from(name));
        Ok(())
    }

    fn json(&mut self, name: &str, value: &impl Serialize) -> Result<(), PipelineError> {
        let mut text = serde_json::to_string_pretty(value).map_err(at(Stage::Output))?;
        text.push('\n');
        self.text(name, &text)
    }
}

fn read_input(path: &Path) -> Result<Vec<u8>, PipelineError> {
    fs::read(path).map_err(|e| PipelineError::new(Stage::Input, format!("{}: {e}", path.display())))
}

fn read_log(path: &Path) -> Result<(Ocel, Vec<u8>), PipelineError> {
    let bytes = read_input(path)?;
    let log = parse_ocel(&bytes).map_err(|e| PipelineError::new(Stage::Input, format!("{}: {e}", path.display())))?;
    Ok((log, bytes))
}

fn write_profiles(w: &mut Writer, otype: &str, digest: &str, profiles: &[ObjectProfile]) -> Result<(), PipelineError> {
    let mut csv = Vec::new();
    write_profiles_csv(profiles, &mut csv, Some(&format!("config {digest}"))).map_err(at(Stage::Output))?;
    w.text("profiles.csv", &String::from_utf8(csv).expect("CSV output is UTF-8"))?;
    w.json(
        "profiles.json",
        &ProfileSet {
            otype: otype.to_string(),
            config_digest: Some(digest.to_string()),
            profiles: profiles.to_vec(),
        },
    )
}

fn profile_log(log: &Ocel, otype: &str) -> Result<Vec<ObjectProfile>, PipelineError> {
    info!("profiling objects of type {otype}");
    let profiles = build_profiles(log, otype).map_err(at(Stage::Profiling))?;
    if profiles.is_empty() {
        return Err(PipelineError::new(
            Stage::Profiling,
            format!("no object of type {otype} occurs in any event"),
        ));
    }
    Ok(profiles)
}

fn cluster_profiles(
    cfg: &RunConfig,
    profiles: &[ObjectProfile],
    digest: &str,
    w: &mut Writer,
) -> Result<Clustering, PipelineError> {
    let table = encode(profiles).map_err(at(Stage::Clustering))?;
    let method = cfg.method();
    let mut clustering = match cfg.k {
        KSelection::Fixed(k) => {
            info!("clustering {} objects into {k} clusters with {}", table.len(), cfg.algorithm);
            cluster(&table, k, &method, cfg.seed).map_err(at(Stage::Clustering))?
        }
        KSelection::Range { lo, hi } => {
            info!("sweeping k over {lo}..={hi} with {}", cfg.algorithm);
            let entries = sweep_k(&table, lo..=hi, &method, cfg.seed).map_err(at(Stage::Clustering))?;
            w.json(
                "sweep.json",
                &SweepDoc {
                    config_digest: digest,
                    entries: &entries,
                },
            )?;
            let best = entries.into_iter().find(|e| e.best).expect("a sweep flags one entry");
            info!("best k = {} (score {})", best.k, best.score);
            best.clustering
        }
    };
    clustering.config_digest = Some(digest.to_string());
    w.json("clustering.json", &clustering)?;
    Ok(clustering)
}

fn split_log(
    log: &Ocel,
    clustering: &Clustering,
    approach: Approach,
    digest: &str,
    w: &mut Writer,
) -> Result<SubLogBundle, PipelineError> {
    info!("splitting the log into {} sub-logs ({approach})", clustering.clusters.len());
    let bundle = build_bundle(log, clustering, approach).map_err(at(Stage::Splitting))?;
    for c in &bundle.clusters {
        let extra = [
            ("cluster:config-digest", json!(digest)),
            ("cluster:object-type", json!(bundle.otype)),
            ("cluster:index", json!(c.index)),
            ("cluster:approach", json!(approach)),
            ("cluster:objects", json!(c.objects)),
        ];
        w.json(&format!("cluster_{}.ocel.json", c.index), &to_json_value(&c.log, &extra))?;
    }
    w.json(
        "orphans.json",
        &json!({
            "config_digest": digest,
            "approach": approach,
            "orphan_events": bundle.orphan_events,
        }),
    )?;
    Ok(bundle)
}

fn dot(w: &mut Writer, name: &str, model: &Ocdfg, digest: &str) -> Result<(), PipelineError> {
    w.text(name, &export_dot_with_comment(model, Some(&format!("config {digest}"))))
}

/// Profile stage: OCEL in, `profiles.csv` and `profiles.json` out.
pub fn run_profile(cfg: &RunConfig) -> Result<Vec<ObjectProfile>, PipelineError> {
    cfg.validate()?;
    let (log, bytes) = read_log(&cfg.input)?;
    let digest = cfg.digest(&bytes);
    let profiles = profile_log(&log, &cfg.otype)?;
    let mut w = Writer::new(&cfg.out)?;
    write_profiles(&mut w, &cfg.otype, &digest, &profiles)?;
    Ok(profiles)
}

/// Cluster stage: `profiles.json` in, `clustering.json` (and `sweep.json`
/// for a k range) out.
pub fn run_cluster(cfg: &RunConfig) -> Result<Clustering, PipelineError> {
    cfg.validate()?;
    let bytes = read_input(&cfg.input)?;
    let set: ProfileSet = serde_json::from_slice(&bytes).map_err(at(Stage::Input))?;
    if set.otype != cfg.otype {
        return Err(PipelineError::new(
            Stage::Input,
            format!("profiles are of type {}, not {}", set.otype, cfg.otype),
        ));
    }
    let digest = cfg.digest(&bytes);
    let mut w = Writer::new(&cfg.out)?;
    cluster_profiles(cfg, &set.profiles, &digest, &mut w)
}

fn parse_clustering(path: &Path, bytes: &[u8]) -> Result<Clustering, PipelineError> {
    serde_json::from_slice(bytes).map_err(|e| PipelineError::new(Stage::Input, format!("{}: {e}", path.display())))
}

/// Reads a `clustering.json` artifact.
pub fn read_clustering(path: &Path) -> Result<Clustering, PipelineError> {
    parse_clustering(path, &read_input(path)?)
}

/// Split stage: OCEL and clustering in, one sub-OCEL per cluster and
/// `orphans.json` out.
pub fn run_split(cfg: &RunConfig, clustering_path: &Path) -> Result<SubLogBundle, PipelineError> {
    cfg.validate()?;
    let (log, mut bytes) = read_log(&cfg.input)?;
    let cbytes = read_input(clustering_path)?;
    let clustering = parse_clustering(clustering_path, &cbytes)?;
    if clustering.otype != cfg.otype {
        return Err(PipelineError::new(
            Stage::Input,
            format!("clustering is over type {}, not {}", clustering.otype, cfg.otype),
        ));
    }
    bytes.extend_from_slice(&cbytes);
    let digest = cfg.digest(&bytes);
    let mut w = Writer::new(&cfg.out)?;
    split_log(&log, &clustering, cfg.approach, &digest, &mut w)
}

/// Discover stage: OCEL in, `<stem>.dot` and `<stem>.model.json` out.
pub fn run_discover(cfg: &RunConfig) -> Result<Ocdfg, PipelineError> {
    let (log, bytes) = read_log(&cfg.input)?;
    let digest = cfg.digest(&bytes);
    info!("discovering the model of {} events", log.len());
    let model = discover(&log);
    let stem = cfg
        .input
        .file_name()
        .and_then(|n| n.to_str())
        .map(|n| n.trim_end_matches(".json").trim_end_matches(".ocel"))
        .unwrap_or("model")
        .to_string();
    let mut w = Writer::new(&cfg.out)?;
    dot(&mut w, &format!("{stem}.dot"), &model, &digest)?;
    w.json(
        &format!("{stem}.model.json"),
        &json!({
            "config_digest": digest,
            "activities": model.activities(),
            "object_types": model.object_types(),
            "node_freq": model.node_freq(),
            "edges": model.edges().iter().map(|(e, f)| json!({
                "from": e.from.to_string(),
                "to": e.to.to_string(),
                "otype": e.otype,
                "freq": f,
            })).collect::<Vec<Value>>(),
        }),
    )?;
    Ok(model)
}

/// All stages on one OCEL, writing every artifact into `cfg.out`.
pub fn run_pipeline(cfg: &RunConfig) -> Result<RunSummary, PipelineError> {
    cfg.validate()?;
    let (log, bytes) = read_log(&cfg.input)?;
    let digest = cfg.digest(&bytes);
    let mut w = Writer::new(&cfg.out)?;

    let profiles = profile_log(&log, &cfg.otype)?;
    write_profiles(&mut w, &cfg.otype, &digest, &profiles)?;
    let clustering = cluster_profiles(cfg, &profiles, &digest, &mut w)?;
    let bundle = split_log(&log, &clustering, cfg.approach, &digest, &mut w)?;

    info!("discovering the main model and {} cluster models", bundle.clusters.len());
    let relevant = relevant_log(&log, &cfg.otype).map_err(at(Stage::Discovery))?;
    let main = discover(&relevant);
    let models: Vec<Ocdfg> = bundle.clusters.iter().map(|c| discover(&c.log)).collect();
    dot(&mut w, "main.dot", &main, &digest)?;
    for (c, m) in bundle.clusters.iter().zip(&models) {
        dot(&mut w, &format!("cluster_{}.dot", c.index), m, &digest)?;
    }

    let mut report = ComplexityReport::new(&relevant, &main, &bundle, &models).map_err(at(Stage::Report))?;
    report.config_digest = Some(digest.clone());
    w.json("report.json", &report)?;
    w.text("report.txt", &report.to_text())?;

    Ok(RunSummary {
        config_digest: digest,
        clustering,
        bundle,
        report,
        files: w.files,
    })
}
