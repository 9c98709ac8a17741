use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use reann::discretizer::{cluster, ActivationClustering};
use reann::eval::{evaluate, fidelity};
use reann::pipeline::{emit_error_curve, grow_run, resummarize, run_pipeline, views, PipelineConfig};
use reann::pruner::prune;
use reann::rulegen::extract_rules;
use reann::{Network, RuleSet, TrainConfig};

#[derive(Parser)]
#[command(
    name = "reann",
    version,
    about = "Extract symbolic rules from pruned neural networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Pipeline config (`key = value` lines)
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides `out`)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Base seed (overrides `seed`)
    #[arg(long)]
    seed: Option<u64>,
}

impl Common {
    fn load(&self) -> Result<PipelineConfig> {
        let mut cfg =
            PipelineConfig::read(&self.config).with_context(|| format!("reading config {}", self.config.display()))?;
        if let Some(out) = &self.out {
            cfg.out = out.clone();
        }
        if let Some(seed) = self.seed {
            cfg.base_seed = seed;
        }
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline over several seeds
    Run {
        #[command(flatten)]
        common: Common,
        /// Number of runs (overrides `runs`)
        #[arg(long)]
        runs: Option<usize>,
    },
    /// Grow a network; writes network.txt and curve.csv
    Train {
        #[command(flatten)]
        common: Common,
    },
    /// Prune a network snapshot; writes network.txt and curve.csv
    Prune {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        network: PathBuf,
    },
    /// Cluster hidden activations; writes clusters.txt
    Cluster {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        network: PathBuf,
    },
    /// Extract rules; writes rules.txt
    Extract {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        network: PathBuf,
        #[arg(long)]
        clusters: PathBuf,
    },
    /// Evaluate a rules file on the training and test ranges
    Eval {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        rules: PathBuf,
        /// With --clusters, also report fidelity to the discretized network
        #[arg(long, requires = "clusters")]
        network: Option<PathBuf>,
        #[arg(long, requires = "network")]
        clusters: Option<PathBuf>,
    },
    /// Rebuild summary.txt from the run reports in a directory
    Report {
        #[arg(long)]
        out: PathBuf,
    },
}

fn out_dir(cfg: &PipelineConfig) -> Result<&Path> {
    fs::create_dir_all(&cfg.out).with_context(|| format!("creating {}", cfg.out.display()))?;
    Ok(&cfg.out)
}

fn read_clusters(path: &Path) -> Result<ActivationClustering> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(ActivationClustering::from_text(&text)?)
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Run { common, runs } => {
            let mut cfg = common.load()?;
            if let Some(n) = runs {
                cfg.runs = n;
            }
            let report = run_pipeline(&cfg)?;
            print!("{}", report.summary);
            let failed = report.runs.iter().filter(|r| r.is_err()).count();
            if failed > 0 {
                eprintln!("{failed} of {} runs failed; see their report.txt", report.runs.len());
            }
        }
        Command::Train { common } => {
            let cfg = common.load()?;
            let data = cfg.load_dataset()?;
            let (train, test) = views(&cfg, &data)?;
            let (net, log) = grow_run(&cfg, &train, 0)?;
            let dir = out_dir(&cfg)?;
            net.save(&dir.join("network.txt"))?;
            emit_error_curve(&log.trace, &dir.join("curve.csv"))?;
            println!("hidden = {}", net.n_hidden());
            println!("epochs = {}", log.epochs_trained);
            println!("train_accuracy = {}", net.accuracy(&train)?);
            println!("test_accuracy = {}", net.accuracy(&test)?);
        }
        Command::Prune { common, network } => {
            let cfg = common.load()?;
            let data = cfg.load_dataset()?;
            let (train, test) = views(&cfg, &data)?;
            let net = Network::load(&network)?;
            let tcfg = TrainConfig {
                seed: cfg.seed(0),
                ..cfg.train.clone()
            };
            let (pruned, log) = prune(&net, &train, &tcfg, &cfg.prune)?;
            let dir = out_dir(&cfg)?;
            pruned.save(&dir.join("network.txt"))?;
            emit_error_curve(&log.trace, &dir.join("curve.csv"))?;
            println!("connections = {}", pruned.connection_count());
            println!(
                "inputs = {:?}",
                pruned.live_inputs().iter().map(|i| i + 1).collect::<Vec<_>>()
            );
            println!("train_accuracy = {}", pruned.accuracy(&train)?);
            println!("test_accuracy = {}", pruned.accuracy(&test)?);
        }
        Command::Cluster { common, network } => {
            let cfg = common.load()?;
            let data = cfg.load_dataset()?;
            let (train, _) = views(&cfg, &data)?;
            let net = Network::load(&network)?;
            let c = cluster(&net, &train, &cfg.epsilon_grid, cfg.cluster_floor)?;
            let dir = out_dir(&cfg)?;
            fs::write(dir.join("clusters.txt"), c.to_text())?;
            print!("{}", c.to_text());
        }
        Command::Extract {
            common,
            network,
            clusters,
        } => {
            let cfg = common.load()?;
            let data = cfg.load_dataset()?;
            let (train, _) = views(&cfg, &data)?;
            let net = Network::load(&network)?;
            let c = read_clusters(&clusters)?;
            let rules = extract_rules(&c, &net, &train, &cfg.rules)?.rules;
            let text = rules.render(&data);
            let dir = out_dir(&cfg)?;
            fs::write(dir.join("rules.txt"), &text)?;
            print!("{text}");
        }
        Command::Eval {
            common,
            rules,
            network,
            clusters,
        } => {
            let cfg = common.load()?;
            let data = cfg.load_dataset()?;
            let (train, test) = views(&cfg, &data)?;
            let text = fs::read_to_string(&rules).with_context(|| format!("reading {}", rules.display()))?;
            let rs = RuleSet::parse(&text, &data)?;
            let mut train_eval = evaluate(&rs, &train)?;
            let mut test_eval = evaluate(&rs, &test)?;
            if let (Some(n), Some(c)) = (network, clusters) {
                let net = Network::load(&n)?;
                let c = read_clusters(&c)?;
                train_eval.fidelity_vs_network = Some(fidelity(&rs, &net, &c, &train)?);
                test_eval.fidelity_vs_network = Some(fidelity(&rs, &net, &c, &test)?);
            }
            print!("{}{}", train_eval.to_kv("train"), test_eval.to_kv("test"));
        }
        Command::Report { out } => {
            print!("{}", resummarize(&out)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
