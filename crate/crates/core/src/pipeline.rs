//! End-to-end runs: grow, prune, cluster, extract, evaluate, and write
//! per-run artifacts plus an aggregate summary.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::constructor::{grow, GrowthConfig, GrowthLog};
use crate::dataset::{self, DataView, Dataset, Schema, SplitSpec};
use crate::discretizer::{cluster, default_epsilon_grid, discretized_accuracy, ActivationClustering};
use crate::error::{Error, Result};
use crate::eval::{evaluate, fidelity, fidelity_to_network};
use crate::kv::KeyValues;
use crate::network::{Network, TrainConfig, TrainTrace};
use crate::pruner::{prune, AccuracyFloor, PruneConfig, PruneLog};
use crate::rulegen::{extract_rules, Extraction, RulePruneConfig};
use crate::rules::RuleSet;

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub dataset: PathBuf,
    pub schema: PathBuf,
    pub split: SplitSpec,
    pub train: TrainConfig,
    pub growth: GrowthConfig,
    pub prune: PruneConfig,
    pub epsilon_grid: Vec<f64>,
    /// Discretized training accuracy requirement, relative to the pruned network.
    pub cluster_floor: AccuracyFloor,
    pub rules: RulePruneConfig,
    pub runs: usize,
    pub base_seed: u64,
    pub out: PathBuf,
}

impl PipelineConfig {
    /// Reads a config file; relative paths inside it are resolved against
    /// the file's directory.
    pub fn read(path: &Path) -> Result<Self> {
        let kv = KeyValues::read(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_kv(&kv, base)
    }

    pub fn from_kv(kv: &KeyValues, base: &Path) -> Result<Self> {
        const KNOWN: &[&str] = &[
            "dataset",
            "schema",
            "split.train",
            "split.test",
            "train.learning_rate",
            "train.max_epochs",
            "train.target_error",
            "train.init_range",
            "growth.tau",
            "growth.patience_epochs",
            "growth.max_hidden",
            "prune.floor",
            "prune.retrain_epochs",
            "cluster.epsilon_grid",
            "cluster.floor",
            "rules.floor",
            "rules.fidelity",
            "runs",
            "seed",
            "out",
        ];
        if let Some(k) = kv.keys().find(|k| !KNOWN.contains(k)) {
            return Err(Error::InvalidConfig(format!("unknown config key `{k}`")));
        }
        let path = |key: &str| -> Result<PathBuf> { Ok(base.join(kv.require(key)?)) };
        let floats = |key: &str| -> Result<Option<Vec<f64>>> {
            kv.list(key)
                .map(|items| {
                    items?
                        .iter()
                        .map(|v| {
                            v.parse::<f64>()
                                .map_err(|_| Error::InvalidConfig(format!("`{key}`: bad number `{v}`")))
                        })
                        .collect()
                })
                .transpose()
        };
        let floor = |key: &str, default: AccuracyFloor| -> Result<AccuracyFloor> {
            kv.get(key).map_or(Ok(default), AccuracyFloor::parse)
        };

        let td = TrainConfig::default();
        let init_range = match floats("train.init_range")? {
            None => td.init_range,
            Some(v) if v.len() == 2 => (v[0], v[1]),
            Some(_) => return Err(Error::InvalidConfig("`train.init_range`: expected `lo, hi`".into())),
        };
        let gd = GrowthConfig::default();
        let pd = PruneConfig::default();
        let rd = RulePruneConfig::default();
        let cfg = PipelineConfig {
            dataset: path("dataset")?,
            schema: path("schema")?,
            split: SplitSpec {
                train: SplitSpec::parse_range(kv.require("split.train")?)?,
                test: SplitSpec::parse_range(kv.require("split.test")?)?,
            },
            train: TrainConfig {
                learning_rate: kv.parse_or("train.learning_rate", td.learning_rate)?,
                max_epochs: kv.parse_or("train.max_epochs", td.max_epochs)?,
                target_error: kv.parse_or("train.target_error", td.target_error)?,
                init_range,
                seed: 0,
            },
            growth: GrowthConfig {
                tau: kv.parse_or("growth.tau", gd.tau)?,
                patience_epochs: kv.parse_or("growth.patience_epochs", gd.patience_epochs)?,
                max_hidden: kv.parse_or("growth.max_hidden", gd.max_hidden)?,
            },
            prune: PruneConfig {
                floor: floor("prune.floor", pd.floor)?,
                retrain_epochs: kv.parse_or("prune.retrain_epochs", pd.retrain_epochs)?,
            },
            epsilon_grid: floats("cluster.epsilon_grid")?.unwrap_or_else(default_epsilon_grid),
            cluster_floor: floor("cluster.floor", AccuracyFloor::Relative(0.01))?,
            rules: RulePruneConfig {
                floor: floor("rules.floor", rd.floor)?,
                min_fidelity: kv.parse_or("rules.fidelity", rd.min_fidelity)?,
            },
            runs: kv.parse_or("runs", 1)?,
            base_seed: kv.parse_or("seed", 0)?,
            out: base.join(kv.get("out").unwrap_or("out")),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.train.validate()?;
        self.growth.validate()?;
        self.prune.validate()?;
        if self.runs == 0 {
            return Err(Error::InvalidConfig("runs must be >= 1".into()));
        }
        if !(0.0..=1.0).contains(&self.rules.min_fidelity) {
            return Err(Error::InvalidConfig("rules.fidelity must lie in [0, 1]".into()));
        }
        Ok(())
    }

    pub fn seed(&self, run: usize) -> u64 {
        self.base_seed.wrapping_add(run as u64)
    }

    /// Loads and normalizes the dataset, imputing from the training range.
    pub fn load_dataset(&self) -> Result<Dataset> {
        let schema = Schema::read(&self.schema)?;
        let raw = dataset::load(&self.dataset, &schema)?;
        let d = raw.normalize(self.split.train.clone())?;
        dataset::split(&d, &self.split)?;
        Ok(d)
    }
}

/// Everything one run produces.
#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub seed: u64,
    pub grown: Network,
    pub growth: GrowthLog,
    pub pruned: Network,
    pub prune: PruneLog,
    pub clustering: ActivationClustering,
    pub composed_rules: usize,
    pub rules: RuleSet,
    pub report: String,
}

impl RunArtifacts {
    /// Growth curve followed by the retraining epochs of committed prunes.
    pub fn curve(&self) -> TrainTrace {
        let mut t = self.growth.trace.clone();
        t.extend(&self.prune.trace);
        t
    }
}

/// `inputs-hidden-outputs` counting only nodes that still carry a connection.
pub fn architecture(net: &Network) -> String {
    let outputs = (0..net.n_out())
        .filter(|&k| (0..net.n_hidden()).any(|j| net.mask_ho[net.ho(j, k)]))
        .count();
    format!("{}-{}-{}", net.live_inputs().len(), net.live_hidden().len(), outputs)
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

/// Grows the network of run `run`, drawing from that run's generator.
pub fn grow_run(cfg: &PipelineConfig, train: &DataView, run: usize) -> Result<(Network, GrowthLog)> {
    let seed = cfg.seed(run);
    let tcfg = TrainConfig {
        seed,
        ..cfg.train.clone()
    };
    grow(train, &tcfg, &cfg.growth, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Runs every stage on one seed.
pub fn run_once(cfg: &PipelineConfig, data: &Dataset, run: usize) -> Result<RunArtifacts> {
    let seed = cfg.seed(run);
    let (train, test) = dataset::split(data, &cfg.split)?;
    let tcfg = TrainConfig {
        seed,
        ..cfg.train.clone()
    };

    let (grown, growth) = grow_run(cfg, &train, run)?;
    let (pruned, prune_log) = prune(&grown, &train, &tcfg, &cfg.prune)?;
    let clustering = cluster(&pruned, &train, &cfg.epsilon_grid, cfg.cluster_floor)?;

    let Extraction {
        output,
        inputs,
        composed,
        rules,
    } = extract_rules(&clustering, &pruned, &train, &cfg.rules)?;

    let mut r = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(r, "{k} = {v}");
    };
    kv("run", run.to_string());
    kv("seed", seed.to_string());
    kv("status", "ok".into());
    kv("dataset", data.name.clone());
    kv("train.size", train.len().to_string());
    kv("test.size", test.len().to_string());
    if !data.degenerate.is_empty() {
        kv(
            "degenerate_attributes",
            join(&data.degenerate.iter().map(|a| a + 1).collect::<Vec<_>>()),
        );
    }
    kv(
        "arch.initial",
        format!("{}-1-{}", data.n_attributes(), data.n_classes()),
    );
    kv(
        "arch.initial.connections",
        (data.n_attributes() + data.n_classes()).to_string(),
    );
    for (name, net) in [("grown", &grown), ("pruned", &pruned)] {
        kv(&format!("arch.{name}"), architecture(net));
        kv(&format!("arch.{name}.nodes"), net.node_count().to_string());
        kv(&format!("arch.{name}.connections"), net.connection_count().to_string());
    }
    kv(
        "inputs.kept",
        join(&pruned.live_inputs().iter().map(|i| i + 1).collect::<Vec<_>>()),
    );
    kv("growth.steps", growth.steps.len().to_string());
    kv("epochs.growth", growth.epochs_trained.to_string());
    kv("epochs.prune", prune_log.epochs_trained.to_string());
    kv(
        "epochs.total",
        (growth.epochs_trained + prune_log.epochs_trained).to_string(),
    );
    kv(
        "prune.removed",
        prune_log
            .entries
            .iter()
            .filter(|e| e.outcome == crate::pruner::PruneOutcome::Commit)
            .count()
            .to_string(),
    );
    kv("prune.floor", prune_log.floor.to_string());
    kv("network.train_accuracy", grown.accuracy(&train)?.to_string());
    kv("network.test_accuracy", grown.accuracy(&test)?.to_string());
    kv("pruned.train_accuracy", pruned.accuracy(&train)?.to_string());
    kv("pruned.test_accuracy", pruned.accuracy(&test)?.to_string());
    let epsilon = clustering.nodes.first().map_or(0.0, |n| n.epsilon);
    kv("cluster.epsilon", epsilon.to_string());
    for j in pruned.live_hidden() {
        let node = &clustering.nodes[j];
        kv(
            &format!("cluster.node.{}.representatives", j + 1),
            join(&node.representatives),
        );
        kv(&format!("cluster.node.{}.counts", j + 1), join(&node.counts));
    }
    kv(
        "discretized.train_accuracy",
        discretized_accuracy(&pruned, &clustering, &train)?.to_string(),
    );
    kv(
        "discretized.test_accuracy",
        discretized_accuracy(&pruned, &clustering, &test)?.to_string(),
    );
    let inseparable: usize = inputs.iter().map(|n| n.inseparable.len()).sum();
    kv("rules.output", output.rules.len().to_string());
    kv("rules.inseparable", inseparable.to_string());
    kv("rules.composed", composed.rules.len().to_string());
    kv("rules.count", rules.rule_count().to_string());
    kv("rules.average_conditions", rules.average_conditions().to_string());
    let train_eval = evaluate(&rules, &train)?;
    let test_eval = evaluate(&rules, &test)?;
    kv("rules.train_accuracy", train_eval.accuracy.to_string());
    kv("rules.test_accuracy", test_eval.accuracy.to_string());
    kv(
        "rules.fidelity",
        fidelity(&rules, &pruned, &clustering, &train)?.to_string(),
    );
    kv(
        "rules.fidelity_test",
        fidelity(&rules, &pruned, &clustering, &test)?.to_string(),
    );
    kv(
        "rules.fidelity_network",
        fidelity_to_network(&rules, &pruned, &train)?.to_string(),
    );
    r.push_str(&train_eval.to_kv("eval.train"));
    r.push_str(&test_eval.to_kv("eval.test"));
    r.push_str("rules.text <<\n");
    r.push_str(&rules.render(data));
    r.push_str(">>\n");

    Ok(RunArtifacts {
        seed,
        grown,
        growth,
        pruned,
        prune: prune_log,
        clustering,
        composed_rules: composed.rules.len(),
        rules,
        report: r,
    })
}

/// Writes `epoch,sse` rows, one per epoch, under a header.
pub fn emit_error_curve(trace: &TrainTrace, path: &Path) -> Result<()> {
    let mut text = String::from("epoch,sse\n");
    for (e, sse) in trace.epoch_errors.iter().enumerate() {
        let _ = writeln!(text, "{},{}", e + 1, sse);
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn run_dir(out: &Path, run: usize) -> PathBuf {
    out.join(format!("run_{run:02}"))
}

/// Outcome of a multi-run experiment.
#[derive(Debug, Clone)]
pub struct RunReport {
    /// One entry per run; failed runs carry their error message.
    pub runs: Vec<std::result::Result<RunArtifacts, String>>,
    pub summary: String,
}

/// Runs `cfg.runs` seeds concurrently and writes per-run files and
/// `summary.txt` under `cfg.out`. A failing run is recorded in its report and
/// does not stop the others. The dataset is loaded before anything is
/// written, so a bad dataset leaves no output behind.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<RunReport> {
    cfg.validate()?;
    let data = cfg.load_dataset()?;
    fs::create_dir_all(&cfg.out).map_err(|e| Error::io(&cfg.out, e))?;

    let runs: Vec<std::result::Result<RunArtifacts, String>> = (0..cfg.runs)
        .into_par_iter()
        .map(|run| run_once(cfg, &data, run).map_err(|e| e.to_string()))
        .collect();

    let mut reports = Vec::with_capacity(runs.len());
    for (run, outcome) in runs.iter().enumerate() {
        let dir = run_dir(&cfg.out, run);
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        let report = match outcome {
            Ok(a) => {
                a.pruned.save(&dir.join("network.txt"))?;
                write(&dir.join("clusters.txt"), &a.clustering.to_text())?;
                write(&dir.join("rules.txt"), &a.rules.render(&data))?;
                emit_error_curve(&a.curve(), &dir.join("curve.csv"))?;
                a.report.clone()
            }
            Err(msg) => format!(
                "run = {run}\nseed = {}\nstatus = failed: {}\n",
                cfg.seed(run),
                msg.replace('\n', " ")
            ),
        };
        write(&dir.join("report.txt"), &report)?;
        reports.push(report);
    }
    let summary = summarize(&reports)?;
    write(&cfg.out.join("summary.txt"), &summary)?;
    Ok(RunReport { runs, summary })
}

/// Columns of the summary table, all numeric report keys.
pub const SUMMARY_FIELDS: &[&str] = &[
    "arch.pruned.connections",
    "arch.pruned.nodes",
    "epochs.total",
    "network.train_accuracy",
    "network.test_accuracy",
    "pruned.train_accuracy",
    "pruned.test_accuracy",
    "discretized.train_accuracy",
    "rules.count",
    "rules.train_accuracy",
    "rules.test_accuracy",
    "rules.fidelity",
];

/// Key-value pairs of a report, skipping the embedded rule text.
pub fn parse_report(text: &str) -> Result<KeyValues> {
    let mut kept = String::new();
    let mut in_block = false;
    for line in text.lines() {
        if in_block {
            in_block = line != ">>";
            continue;
        }
        if line.ends_with("<<") {
            in_block = true;
            continue;
        }
        kept.push_str(line);
        kept.push('\n');
    }
    KeyValues::parse(&kept)
}

/// Per-run table plus mean/min/max of every column over successful runs.
/// Recomputing from the per-run rows reproduces the aggregates exactly.
pub fn summarize(reports: &[String]) -> Result<String> {
    let parsed = reports.iter().map(|r| parse_report(r)).collect::<Result<Vec<_>>>()?;
    let mut out = String::new();
    let _ = writeln!(out, "runs = {}", parsed.len());
    let ok: Vec<&KeyValues> = parsed.iter().filter(|kv| kv.get("status") == Some("ok")).collect();
    let _ = writeln!(out, "runs.ok = {}", ok.len());
    let _ = writeln!(out, "columns = run,seed,status,{}", SUMMARY_FIELDS.join(","));
    for kv in &parsed {
        let mut row = vec![
            kv.get("run").unwrap_or("?").to_string(),
            kv.get("seed").unwrap_or("?").to_string(),
            kv.get("status").unwrap_or("?").replace(',', ";"),
        ];
        for f in SUMMARY_FIELDS {
            row.push(kv.get(f).unwrap_or("-").to_string());
        }
        let _ = writeln!(out, "row = {}", row.join(","));
    }
    for f in SUMMARY_FIELDS {
        let values = ok
            .iter()
            .map(|kv| {
                kv.require(f)?
                    .parse::<f64>()
                    .map_err(|_| Error::MalformedInput(format!("report field `{f}` is not numeric")))
            })
            .collect::<Result<Vec<f64>>>()?;
        if values.is_empty() {
            continue;
        }
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let _ = writeln!(out, "mean.{f} = {mean}");
        let _ = writeln!(out, "min.{f} = {min}");
        let _ = writeln!(out, "max.{f} = {max}");
    }
    if let Some(best) = best_run(&ok) {
        let _ = writeln!(out, "best_run = {best}");
    }
    Ok(out)
}

/// Highest rule test accuracy, then fewest rules, then lowest run index.
fn best_run(ok: &[&KeyValues]) -> Option<String> {
    let key = |kv: &KeyValues| -> Option<(f64, usize, usize)> {
        Some((
            kv.get("rules.test_accuracy")?.parse().ok()?,
            kv.get("rules.count")?.parse().ok()?,
            kv.get("run")?.parse().ok()?,
        ))
    };
    ok.iter()
        .filter_map(|kv| key(kv))
        .min_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)))
        .map(|k| k.2.to_string())
}

/// Rebuilds `summary.txt` from the `run_NN/report.txt` files under `out`.
pub fn resummarize(out: &Path) -> Result<String> {
    let mut dirs: Vec<PathBuf> = fs::read_dir(out)
        .map_err(|e| Error::io(out, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.is_dir()
                && p.file_name()
                    .and_then(|n| n.to_str())
                    .is_some_and(|n| n.starts_with("run_"))
        })
        .collect();
    dirs.sort();
    let reports = dirs
        .iter()
        .map(|d| {
            let p = d.join("report.txt");
            fs::read_to_string(&p).map_err(|e| Error::io(&p, e))
        })
        .collect::<Result<Vec<_>>>()?;
    let summary = summarize(&reports)?;
    write(&out.join("summary.txt"), &summary)?;
    Ok(summary)
}

/// Training and test views of a loaded dataset.
pub fn views<'a>(cfg: &PipelineConfig, d: &'a Dataset) -> Result<(DataView<'a>, DataView<'a>)> {
    dataset::split(d, &cfg.split)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_file_has_header_and_rows() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.csv");
        emit_error_curve(
            &TrainTrace {
                epoch_errors: vec![3.0, 2.5, 2.0],
            },
            &p,
        )
        .unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "epoch,sse\n1,3\n2,2.5\n3,2\n");
        emit_error_curve(&TrainTrace::default(), &p).unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "epoch,sse\n");
    }

    #[test]
    fn summary_aggregates_successful_runs() {
        let mk = |run: usize, acc: f64, count: usize| {
            let mut r = format!("run = {run}\nseed = {run}\nstatus = ok\n");
            for f in SUMMARY_FIELDS {
                let v = match *f {
                    "rules.test_accuracy" => acc.to_string(),
                    "rules.count" => count.to_string(),
                    _ => "1".into(),
                };
                r.push_str(&format!("{f} = {v}\n"));
            }
            r.push_str("rules.text <<\nDefault Rule: x\n>>\n");
            r
        };
        let reports = vec![
            mk(0, 0.9, 3),
            "run = 1\nseed = 1\nstatus = failed: boom\n".to_string(),
            mk(2, 0.95, 4),
            mk(3, 0.95, 2),
        ];
        let s = summarize(&reports).unwrap();
        let kv = KeyValues::parse(
            &s.lines()
                .filter(|l| !l.starts_with("row"))
                .collect::<Vec<_>>()
                .join("\n"),
        )
        .unwrap();
        assert_eq!(kv.get("runs.ok"), Some("3"));
        assert_eq!(kv.get("max.rules.test_accuracy"), Some("0.95"));
        assert_eq!(kv.get("min.rules.count"), Some("2"));
        assert_eq!(kv.get("mean.rules.count"), Some("3"));
        assert_eq!(kv.get("best_run"), Some("3"));
        assert!(s.contains("row = 1,1,failed: boom,"));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let kv =
            KeyValues::parse("dataset = a\nschema = b\nsplit.train = 0..1\nsplit.test = 0..1\ntrain.lr = 1\n").unwrap();
        assert!(matches!(
            PipelineConfig::from_kv(&kv, Path::new(".")),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn config_defaults_and_paths() {
        let kv = KeyValues::parse(
            "dataset = d.data\nschema = d.schema\nsplit.train = 0..10\nsplit.test = 10..20\nprune.floor = absolute 0.9\nruns = 3\nseed = 7\n",
        )
        .unwrap();
        let cfg = PipelineConfig::from_kv(&kv, Path::new("/tmp/x")).unwrap();
        assert_eq!(cfg.dataset, PathBuf::from("/tmp/x/d.data"));
        assert_eq!(cfg.prune.floor, AccuracyFloor::Absolute(0.9));
        assert_eq!(cfg.seed(2), 9);
        assert_eq!(cfg.epsilon_grid, default_epsilon_grid());
        assert_eq!(cfg.out, PathBuf::from("/tmp/x/out"));
    }
}
