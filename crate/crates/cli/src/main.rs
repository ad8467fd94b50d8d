use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use seismotext_core::eval::{ClassifierKind, Direction};
use seismotext_core::{Scheme, Weighting};

mod commands;
mod config;

use config::RunConfig;

#[derive(Debug)]
pub enum CliError {
    /// Bad invocation or configuration; exit code 2.
    Usage(String),
    /// Anything raised while running; exit code 1.
    Run(String),
}

impl From<seismotext_core::Error> for CliError {
    fn from(e: seismotext_core::Error) -> Self {
        CliError::Run(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Run(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "seismotext",
    version,
    about = "Text classification experiments on a labelled article corpus"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// JSON run configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory with metadata.json, labels_binary.json, labels_multiclass.json.
    #[arg(long, global = true, env = "CORPUS_DIR")]
    data_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    scheme: Option<SchemeArg>,
    #[arg(long, global = true, value_enum)]
    classifier: Option<ClassifierArg>,
    #[arg(long, global = true, value_enum)]
    weighting: Option<WeightingArg>,
    /// Scale document vectors to unit length.
    #[arg(long, global = true)]
    normalize: bool,
    /// Last publication year of the training period.
    #[arg(long, global = true)]
    cutoff: Option<i32>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Load the corpus and print counts, class shares and vocabulary size.
    Validate,
    /// Leave-one-out cross-validation on the training period.
    Cv,
    /// Train on the training period and predict the later articles.
    Predict {
        /// Write the trained model here.
        #[arg(long)]
        save_model: Option<PathBuf>,
        /// Predict with a saved model instead of training.
        #[arg(long, conflicts_with = "save_model")]
        model: Option<PathBuf>,
    },
    /// Terms ranked by naive Bayes posterior P(class | term).
    RankTerms {
        #[arg(long)]
        class: usize,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        top: u64,
        #[arg(long, value_enum, default_value_t = DirectionArg::Top)]
        direction: DirectionArg,
    },
    /// Per-year class counts for both schemes and a corpus summary.
    Report,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SchemeArg {
    Binary,
    Multiclass,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ClassifierArg {
    Nb,
    Knn,
    Svm,
    Rf,
    Keyword,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum WeightingArg {
    Tf,
    Tfidf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    Top,
    Bottom,
}

impl From<DirectionArg> for Direction {
    fn from(d: DirectionArg) -> Self {
        match d {
            DirectionArg::Top => Direction::Top,
            DirectionArg::Bottom => Direction::Bottom,
        }
    }
}

impl GlobalArgs {
    fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        if self.data_dir.is_some() {
            cfg.data_dir = self.data_dir.clone();
        }
        if let Some(seed) = self.seed {
            cfg.seed = Some(seed);
        }
        if let Some(out) = &self.out {
            cfg.out = out.clone();
        }
        if let Some(cutoff) = self.cutoff {
            cfg.cutoff = cutoff;
        }
        let spec = &mut cfg.experiment;
        if let Some(s) = self.scheme {
            spec.scheme = match s {
                SchemeArg::Binary => Scheme::Binary,
                SchemeArg::Multiclass => Scheme::Multiclass,
            };
        }
        if let Some(c) = self.classifier {
            spec.classifier = match c {
                ClassifierArg::Nb => ClassifierKind::NaiveBayes,
                ClassifierArg::Knn => ClassifierKind::Knn,
                ClassifierArg::Svm => ClassifierKind::Svm,
                ClassifierArg::Rf => ClassifierKind::RandomForest,
                ClassifierArg::Keyword => ClassifierKind::Keyword,
            };
        }
        if let Some(w) = self.weighting {
            spec.features.weighting = match w {
                WeightingArg::Tf => Weighting::RawTf,
                WeightingArg::Tfidf => Weighting::TfIdf,
            };
        }
        if self.normalize {
            spec.features.normalize = Some(true);
        }
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = cli.global.resolve()?;
    match cli.command {
        Command::Validate => commands::validate(&cfg),
        Command::Cv => commands::cv(&cfg),
        Command::Predict { save_model, model } => commands::predict(&cfg, save_model.as_deref(), model.as_deref()),
        Command::RankTerms { class, top, direction } => {
            commands::rank_terms(&cfg, class, top as usize, direction.into())
        }
        Command::Report => commands::report(&cfg),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
