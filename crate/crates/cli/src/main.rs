//! `bitext` — mine truly parallel sentence pairs from comparable corpora.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand};

/// Exit code for configuration problems.
const EXIT_CONFIG: u8 = 2;
/// Exit code for failures while processing data.
const EXIT_STAGE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "bitext",
    version,
    about = "Mine truly parallel sentence pairs from topic-aligned comparable corpora"
)]
struct Cli {
    /// Pipeline configuration file (pipeline and bootstrap).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,

    /// Worker threads for document-parallel stages.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, global = true, action = ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Crawl topic-related bilingual article pairs from a seed article.
    Crawl(commands::CrawlArgs),
    /// Strip an HTML file down to plain paragraph text.
    Clean(commands::CleanArgs),
    /// Align two sentence files with the two-pass length+dictionary aligner.
    Align(commands::AlignArgs),
    /// Translate a file line by line with a pluggable engine.
    Translate(commands::TranslateArgs),
    /// Filter translation/target line pairs through the tier ladder.
    Filter(commands::FilterArgs),
    /// Score a candidate translation file with BLEU, NIST, METEOR and TER.
    Evaluate(commands::EvaluateArgs),
    /// Symmetrize two directional word alignments (grow-diag-final-and).
    Symmetrize(commands::SymmetrizeArgs),
    /// Run the full mining pipeline from a config file.
    Pipeline,
    /// Run the pipeline repeatedly, feeding mined pairs back into the lexicons.
    Bootstrap(commands::BootstrapArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();

    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
        {
            log::warn!("could not configure {jobs} worker threads: {e}");
        }
    }

    let result = match &cli.command {
        Command::Crawl(args) => commands::crawl(args, &cli.out_dir),
        Command::Clean(args) => commands::clean(args),
        Command::Align(args) => commands::align(args),
        Command::Translate(args) => commands::translate(args),
        Command::Filter(args) => commands::filter(args, &cli.out_dir),
        Command::Evaluate(args) => commands::evaluate(args),
        Command::Symmetrize(args) => commands::symmetrize(args),
        Command::Pipeline => commands::pipeline(cli.config.as_deref(), &cli.out_dir),
        Command::Bootstrap(args) => commands::bootstrap(args, cli.config.as_deref(), &cli.out_dir),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_config() {
                ExitCode::from(EXIT_CONFIG)
            } else {
                ExitCode::from(EXIT_STAGE)
            }
        }
    }
}
