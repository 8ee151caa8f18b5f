mod input;
mod svg;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use evt_core::config::ModelConfig;
use evt_core::fitpipe::{log_returns, run_pipeline, FitReport, PipelineOptions};
use evt_core::gof::ks_test;
use evt_core::limits::{LimitCdf, LimitMode};
use evt_core::mc::{simulate_maxima, ExperimentConfig};
use evt_core::regimes::{Normalization, RegimeDecision};

const DEFAULT_N: u64 = 1000;
const DEFAULT_REPLICATES: usize = 1000;
/// Below this many replicates the KS band is too wide to say much.
const FEW_REPLICATES: usize = 100;
const MIN_PER_SIGN: usize = 100;

#[derive(Parser)]
#[command(name = "evt", version, about = "Extreme values of Weibull mixtures with a heavy-tailed impurity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide the rate conditions and the limit law of a model.
    Classify {
        #[arg(long)]
        config: PathBuf,
    },
    /// Simulate normalized row maxima and test them against the limit law.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit the mixture model to a price or return series.
    Fit {
        /// Single-column CSV, optionally with a header row.
        data: PathBuf,
        #[arg(long, conflicts_with = "returns")]
        prices: bool,
        #[arg(long)]
        returns: bool,
        #[arg(long)]
        returns_column: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of simulated samples behind the quantile envelopes.
        #[arg(long, default_value_t = 100)]
        replicates: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// KS test of a column of normalized maxima against the model's limit law.
    Gof {
        #[arg(long)]
        config: PathBuf,
        data: PathBuf,
        #[arg(long, default_value = "normalized_max")]
        returns_column: String,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    replicates: Option<usize>,
    #[arg(long)]
    n: Option<u64>,
}

fn main() -> Result<()> {
    if let Ok(t) = std::env::var("EVT_THREADS") {
        let threads: usize = t.parse().with_context(|| format!("EVT_THREADS=`{t}` is not a count"))?;
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    }
    match Cli::parse().command {
        Command::Classify { config } => {
            let cfg = load_config(&config)?;
            emit(&pretty(&classify_report(&cfg)?))?;
        }
        Command::Simulate { config, run, out } => simulate(&load_config(&config)?, &run, &out)?,
        Command::Fit {
            data,
            prices,
            returns,
            returns_column,
            seed,
            replicates,
            out,
        } => {
            if !prices && !returns {
                bail!("say whether the data are --prices or --returns");
            }
            fit(&data, prices, returns_column.as_deref(), seed, replicates, &out)?
        }
        Command::Gof {
            config,
            data,
            returns_column,
            n,
            out,
        } => {
            let report = gof(&load_config(&config)?, &data, &returns_column, n)?;
            match out {
                Some(dir) => write(&dir.join("gof.json"), &pretty(&report))?,
                None => emit(&pretty(&report))?,
            }
        }
    }
    Ok(())
}

fn load_config(path: &Path) -> Result<ModelConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Ok(ModelConfig::from_json(&text)?)
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) -> Result<()> {
    match std::io::stdout().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize") + "\n"
}

fn write(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn law_name(d: &RegimeDecision) -> String {
    match &d.law.kind {
        evt_core::regimes::LawKind::Degenerate { reason } => format!("Degenerate: {reason}"),
        _ => d.law.name().to_string(),
    }
}

fn classify_report(cfg: &ModelConfig) -> Result<Value> {
    let d = cfg.model()?.classify()?;
    Ok(json!({
        "law_name": law_name(&d),
        "a_condition": d.a,
        "m_condition": d.m,
        "law": d.law,
        "normalization": d.law.norm,
        "path": d.path,
        "theta": d.theta,
        "k_exceeds_exp": d.k_exceeds_exp,
    }))
}

fn limit_cdf(d: &RegimeDecision) -> Result<Option<LimitCdf>> {
    if d.law.is_degenerate() {
        return Ok(None);
    }
    Ok(Some(LimitCdf::new(&d.law, LimitMode::RightContinuous)?))
}

fn simulate(cfg: &ModelConfig, run: &RunArgs, out: &Path) -> Result<()> {
    let mut cfg = cfg.clone();
    cfg.n = Some(run.n.or(cfg.n).unwrap_or(DEFAULT_N));
    cfg.replicates = Some(run.replicates.or(cfg.replicates).unwrap_or(DEFAULT_REPLICATES));
    cfg.seed = Some(run.seed.or(cfg.seed).unwrap_or(0));
    let (n, replicates, seed) = (cfg.n.unwrap(), cfg.replicates.unwrap(), cfg.seed.unwrap());

    let model = cfg.model()?;
    let decision = model.classify()?;
    let mut warnings = Vec::new();
    let normalization = match model.normalization(&decision.law) {
        Ok(norm) => norm,
        Err(_) => {
            warnings.push("the limit is degenerate; maxima are reported unnormalized".to_string());
            Normalization::fixed(1.0, 0.0)
        }
    };
    let batch = simulate_maxima(&ExperimentConfig {
        model,
        n,
        replicates,
        seed,
        normalization,
    })?;
    warnings.extend(batch.warnings.iter().cloned());
    if replicates < FEW_REPLICATES {
        warnings.push(format!(
            "only {replicates} replicates: the KS test has little power and confidence bands are wide"
        ));
    }
    let limit = limit_cdf(&decision)?;
    let ks = limit.as_ref().map(|c| ks_test(&batch.normalized, c)).transpose()?;

    fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))?;
    let mut csv = Vec::new();
    batch.write_csv(&mut csv)?;
    fs::write(out.join("maxima.csv"), csv).context("cannot write maxima.csv")?;
    write(&out.join("config.json"), &(cfg.to_json() + "\n"))?;
    let report = json!({
        "law_name": law_name(&decision),
        "law": decision.law,
        "normalization": decision.law.norm,
        "n": n,
        "k_n": batch.k_n,
        "replicates": replicates,
        "seed": seed,
        "s_n": batch.s_n,
        "c_n": batch.c_n,
        "ks": ks,
        "reject_at_5pct": ks.map(|k| k.pvalue < 0.05),
        "warnings": warnings,
    });
    write(&out.join("gof.json"), &pretty(&report))?;
    let overlay = limit.as_ref().map(|c| move |x: f64| c.cdf(x));
    let title = format!("{} maxima, n = {n}, R = {replicates}", law_name(&decision));
    let svg = svg::histogram(
        &batch.normalized,
        overlay.as_ref().map(|f| f as &dyn Fn(f64) -> f64),
        &title,
    );
    write(&out.join("histogram.svg"), &svg)?;
    Ok(())
}

fn gof(cfg: &ModelConfig, data: &Path, column: &str, n: Option<u64>) -> Result<Value> {
    let decision = cfg.model()?.classify()?;
    let Some(limit) = limit_cdf(&decision)? else {
        bail!("the limit law is degenerate; there is nothing to test against");
    };
    let xs = input::read_column(data, Some(column))?;
    let ks = ks_test(&xs, &limit)?;
    Ok(json!({
        "law_name": law_name(&decision),
        "law": decision.law,
        "n": n.or(cfg.n),
        "sample_size": xs.len(),
        "ks": ks,
        "reject_at_5pct": ks.pvalue < 0.05,
    }))
}

fn fit(data: &Path, prices: bool, column: Option<&str>, seed: u64, sims: usize, out: &Path) -> Result<()> {
    let values = input::read_column(data, column)?;
    let (pos, neg) = if prices {
        log_returns(&values)?
    } else {
        (
            values.iter().copied().filter(|&r| r > 0.0).collect(),
            values.iter().filter(|&&r| r < 0.0).map(|r| -r).collect(),
        )
    };
    let opts = PipelineOptions {
        seed,
        n_sims: sims,
        ..PipelineOptions::default()
    };
    let mut reports = serde_json::Map::new();
    for (sign, series) in [("positive", &pos), ("negative", &neg)] {
        if series.len() < MIN_PER_SIGN {
            bail!(
                "{sign} returns: {} observations, at least {MIN_PER_SIGN} are needed",
                series.len()
            );
        }
        let report = run_pipeline(series, &opts).with_context(|| format!("{sign} returns"))?;
        write_ci_csv(&out.join(format!("quantiles_{sign}.csv")), &report)?;
        reports.insert(sign.to_string(), serde_json::to_value(&report)?);
    }
    let doc = json!({
        "input": if prices { "prices" } else { "returns" },
        "seed": seed,
        "simulations": sims,
        "positive": reports["positive"],
        "negative": reports["negative"],
    });
    write(&out.join("fit_report.json"), &pretty(&doc))
}

fn write_ci_csv(path: &Path, report: &FitReport) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let mut w = csv::Writer::from_path(path).with_context(|| format!("cannot write {}", path.display()))?;
    w.write_record(["level", "lower", "estimate", "upper"])?;
    for ci in &report.quantile_cis {
        w.serialize((ci.level, ci.lower, ci.estimate, ci.upper))?;
    }
    w.flush()?;
    Ok(())
}
