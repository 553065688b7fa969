//! Command-line driver: reads a gold and a system treebank, scores them in
//! native (aligned) or legacy evalb mode and prints an evalb-style report.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use jp_evalb_core::{
    evaluate, evaluate_legacy, load_exception_list, parse_bracketed, parse_prm, summarize,
    ExceptionListError, ParamSet, ParseError, PrmError, ScoreError, SentenceScore,
    SimilarityConfig, SyntaxTree, DEFAULT_CUTOFF_LEN,
};
use thiserror::Error;

pub mod report;

pub use report::{format_report, format_row};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub gold_path: PathBuf,
    pub system_path: PathBuf,
    pub legacy: bool,
    /// Only meaningful with `legacy`.
    pub prm_path: Option<PathBuf>,
    pub exception_list_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn native(gold: impl Into<PathBuf>, system: impl Into<PathBuf>) -> Self {
        RunConfig {
            gold_path: gold.into(),
            system_path: system.into(),
            legacy: false,
            prm_path: None,
            exception_list_path: None,
        }
    }

    pub fn legacy(
        gold: impl Into<PathBuf>,
        system: impl Into<PathBuf>,
        prm: Option<PathBuf>,
    ) -> Self {
        RunConfig {
            legacy: true,
            prm_path: prm,
            ..Self::native(gold, system)
        }
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{}: {source}", path.display())]
    Read { path: PathBuf, source: io::Error },
    #[error("{}: {source}", path.display())]
    Parse { path: PathBuf, source: ParseError },
    #[error("{}: {source}", path.display())]
    Params { path: PathBuf, source: PrmError },
    #[error("{}: {source}", path.display())]
    Exceptions {
        path: PathBuf,
        source: ExceptionListError,
    },
    #[error("a parameter file requires legacy mode")]
    ParamsWithoutLegacy,
    #[error(transparent)]
    Score(#[from] ScoreError),
    #[error("too many errors ({errors} error sentences, MAX_ERROR {max_error}); aborting")]
    TooManyErrors { errors: usize, max_error: usize },
    #[error("writing report: {0}")]
    Output(#[source] io::Error),
}

fn read_trees(path: &Path) -> Result<Vec<SyntaxTree>, RunError> {
    let text = fs::read_to_string(path).map_err(|source| RunError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_bracketed(&text).map_err(|source| RunError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

fn load_params(path: Option<&Path>) -> Result<ParamSet, RunError> {
    let Some(path) = path else {
        return Ok(ParamSet::default());
    };
    let text = fs::read_to_string(path).map_err(|source| RunError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_prm(&text).map_err(|source| RunError::Params {
        path: path.to_path_buf(),
        source,
    })
}

fn similarity_config(path: Option<&Path>) -> Result<SimilarityConfig, RunError> {
    match path {
        None => Ok(SimilarityConfig::default()),
        Some(p) => load_exception_list(p)
            .map(SimilarityConfig::with_exceptions)
            .map_err(|source| RunError::Exceptions {
                path: p.to_path_buf(),
                source,
            }),
    }
}

/// Produces the full report text. Per-sentence diagnostics go to `diag`.
/// On a legacy abort, `partial` receives the header and the rows scored so far.
fn build_report(
    config: &RunConfig,
    diag: &mut dyn Write,
    partial: &mut String,
) -> Result<String, RunError> {
    if config.prm_path.is_some() && !config.legacy {
        return Err(RunError::ParamsWithoutLegacy);
    }
    let gold = read_trees(&config.gold_path)?;
    let sys = read_trees(&config.system_path)?;

    if !config.legacy {
        let cfg = similarity_config(config.exception_list_path.as_deref())?;
        let rows = evaluate(&gold, &sys, &cfg)?;
        return Ok(format_report(&rows, &summarize(&rows, DEFAULT_CUTOFF_LEN)));
    }

    if config.exception_list_path.is_some() {
        log::warn!("exception list is ignored in legacy mode");
    }
    let params = load_params(config.prm_path.as_deref())?;
    let (rows, abort) = match evaluate_legacy(&gold, &sys, &params) {
        Ok(rows) => (rows, None),
        Err(a) => (a.rows, Some((a.errors, a.max_error))),
    };
    for r in &rows {
        if let Some(m) = &r.mismatch {
            let _ = writeln!(diag, "{} : {m}", r.score.id);
        }
    }
    let scores: Vec<SentenceScore> = rows.into_iter().map(|r| r.score).collect();
    if let Some((errors, max_error)) = abort {
        *partial = report::format_header();
        for s in &scores {
            partial.push_str(&format_row(s));
            partial.push('\n');
        }
        return Err(RunError::TooManyErrors { errors, max_error });
    }
    Ok(format_report(
        &scores,
        &summarize(&scores, params.cutoff_len),
    ))
}

/// Runs one evaluation and returns the process exit status: 0 on success,
/// 1 on any failure. Nothing is written to `out` when inputs cannot be read.
pub fn run(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let mut partial = String::new();
    let result = build_report(config, err, &mut partial);
    let outcome = match result {
        Ok(text) => out.write_all(text.as_bytes()).map_err(RunError::Output),
        Err(e) => {
            if !partial.is_empty() {
                let _ = out.write_all(partial.as_bytes());
            }
            Err(e)
        }
    };
    let _ = out.flush();
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "jp-evalb: {e}");
            1
        }
    }
}

/// Rewrites the single-dash `-evalb` spelling to `--evalb`.
pub fn normalize_args<I: IntoIterator<Item = String>>(args: I) -> Vec<String> {
    args.into_iter()
        .map(|a| {
            if a == "-evalb" {
                "--evalb".to_string()
            } else {
                a
            }
        })
        .collect()
}
