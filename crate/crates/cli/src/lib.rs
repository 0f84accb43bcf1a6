//! `cepstex` command line: extract, rank, train/evaluate and synthesize.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 partial success.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::RunConfig;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_PARTIAL: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Data(m) => write!(f, "data error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<cepstex_core::Error> for CliError {
    fn from(e: cepstex_core::Error) -> Self {
        match e {
            cepstex_core::Error::Parameter(m) => CliError::Usage(m),
            other => CliError::Data(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
        }
    }
}

/// Completed, or completed with some inputs skipped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Complete,
    Partial,
}

#[derive(Debug, Parser)]
#[command(name = "cepstex", version, about = "Cepstral texture features for lesion images")]
pub struct Cli {
    /// Flat `key = value` config file; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory; nothing is written outside it.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Raise log verbosity (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extract the 420 cepstral features for every manifest row.
    Extract(ExtractArgs),
    /// Rank feature columns by Pearson r and mutual information.
    Stats(StatsArgs),
    /// Split, optionally select features, train and evaluate.
    Run(RunArgs),
    /// Write a labeled synthetic image set with masks and a manifest.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    /// CSV with image_id,image_path,mask_path,label,lesion_id.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Gray levels for co-occurrence statistics.
    #[arg(long)]
    pub levels: Option<usize>,
    /// Worker threads (0 = all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Labeled feature CSV.
    #[arg(long)]
    pub features: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Labeled feature CSV (cepstral features).
    #[arg(long)]
    pub features: Option<PathBuf>,
    /// Manifest supplying lesion ids; without it every image is its own lesion.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Handcrafted feature family CSV to compare against; repeatable.
    #[arg(long)]
    pub merge: Vec<PathBuf>,
    /// Greedy selection size; 0 trains on every column.
    #[arg(long)]
    pub select_k: Option<usize>,
    /// `fast` or `full` boosting profile while selecting.
    #[arg(long)]
    pub scorer: Option<String>,
    /// `concat` or `select` for the augmented comparison models.
    #[arg(long)]
    pub augment: Option<String>,
    #[arg(long)]
    pub rounds: Option<usize>,
    #[arg(long)]
    pub max_depth: Option<usize>,
    #[arg(long)]
    pub learning_rate: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub min_child_weight: Option<f64>,
    #[arg(long)]
    pub test_fraction: Option<f64>,
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// echo-noise, grating or blob-noise.
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub size: Option<usize>,
    #[arg(long)]
    pub period: Option<usize>,
    #[arg(long)]
    pub contrast: Option<f64>,
}

fn d<T: ToString>(v: Option<T>) -> Option<String> {
    v.map(|v| v.to_string())
}

fn overrides(cli: &Cli) -> Vec<(&'static str, String)> {
    let mut o: Vec<(&'static str, String)> = vec![];
    let mut push = |k: &'static str, v: Option<String>| {
        if let Some(v) = v {
            o.push((k, v));
        }
    };
    let s = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
    push("out", s(&cli.out));
    push("seed", d(cli.seed));
    match &cli.command {
        Command::Extract(a) => {
            push("manifest", s(&a.manifest));
            push("levels", d(a.levels));
            push("jobs", d(a.jobs));
        }
        Command::Stats(a) => push("features", s(&a.features)),
        Command::Run(a) => {
            push("features", s(&a.features));
            push("manifest", s(&a.manifest));
            if !a.merge.is_empty() {
                let joined: Vec<String> = a.merge.iter().map(|m| m.display().to_string()).collect();
                push("merge", Some(joined.join(",")));
            }
            push("select_k", d(a.select_k));
            push("scorer", a.scorer.clone());
            push("augment", a.augment.clone());
            push("rounds", d(a.rounds));
            push("max_depth", d(a.max_depth));
            push("learning_rate", d(a.learning_rate));
            push("lambda", d(a.lambda));
            push("min_child_weight", d(a.min_child_weight));
            push("test_fraction", d(a.test_fraction));
            push("threshold", d(a.threshold));
            push("jobs", d(a.jobs));
        }
        Command::Synth(a) => {
            push("synth_kind", a.kind.clone());
            push("synth_count", d(a.count));
            push("synth_size", d(a.size));
            push("synth_period", d(a.period));
            push("synth_contrast", d(a.contrast));
        }
    }
    o
}

/// Config file values overlaid with command-line flags.
pub fn resolve_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    let cwd = std::env::current_dir()?;
    for (k, v) in overrides(cli) {
        cfg.set(k, &v, &cwd)?;
    }
    Ok(cfg)
}

/// Runs a parsed command and maps the result to an exit code.
pub fn execute(cli: &Cli) -> i32 {
    let result = resolve_config(cli).and_then(|cfg| match &cli.command {
        Command::Extract(_) => commands::extract(&cfg),
        Command::Stats(_) => commands::stats(&cfg),
        Command::Run(_) => commands::run(&cfg),
        Command::Synth(_) => commands::synth(&cfg),
    });
    match result {
        Ok(Outcome::Complete) => EXIT_OK,
        Ok(Outcome::Partial) => EXIT_PARTIAL,
        Err(e) => {
            log::error!("{e}");
            eprintln!("cepstex: {e}");
            e.exit_code()
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            code
        }
    }
}
