use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use jp_evalb::{normalize_args, run, RunConfig};

/// Scores system parses against gold parses, tolerating differences in
/// tokenization and sentence boundaries.
#[derive(Debug, Parser)]
#[command(name = "jp-evalb", version)]
struct Args {
    /// Gold treebank, one or more bracketed trees
    gold_file: PathBuf,
    /// System parses in the same format
    system_parsed_file: PathBuf,
    /// Score positionally like classic evalb, optionally with a parameter
    /// file (COLLINS.prm settings otherwise). `-evalb` is also accepted.
    #[arg(long, value_name = "PARAM_FILE", num_args = 0..=1)]
    evalb: Option<Option<PathBuf>>,
    /// Tab-separated word pairs to treat as equal during word alignment
    #[arg(long, value_name = "FILE")]
    exceptions: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse_from(normalize_args(std::env::args()));
    let config = RunConfig {
        gold_path: args.gold_file,
        system_path: args.system_parsed_file,
        legacy: args.evalb.is_some(),
        prm_path: args.evalb.flatten(),
        exception_list_path: args.exceptions,
    };
    let status = run(&config, &mut io::stdout().lock(), &mut io::stderr().lock());
    ExitCode::from(status as u8)
}
