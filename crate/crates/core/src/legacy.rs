//! evalb-compatible scoring driven by a `.prm` parameter file.
//!
//! Trees are paired by position, never aligned. Labels listed for deletion are
//! removed before counting: a deleted POS tag takes its word with it, a
//! deleted phrase label drops only the bracket. Functional tags are stripped
//! from phrase labels (`NP-SBJ-1` becomes `NP`) and equivalent labels are
//! folded together.

use std::collections::{HashMap, HashSet};
use std::fmt;

use log::warn;
use thiserror::Error;

use crate::constituents::{is_wrapper_label, Constituent, ConstituentSet};
use crate::scoring::{count_crossing, count_matched, SentenceScore, Status};
use crate::treebank::{SyntaxTree, TokenLeaf};

/// The `COLLINS.prm` file shipped with evalb.
pub const COLLINS_PRM: &str = include_str!("../data/COLLINS.prm");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamSet {
    pub delete_labels: HashSet<String>,
    pub delete_labels_for_length: HashSet<String>,
    eq_labels: HashMap<String, String>,
    eq_words: HashMap<String, String>,
    pub labeled: bool,
    pub cutoff_len: usize,
    pub max_error: usize,
    pub debug: u32,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PrmError {
    #[error("line {line}: {key} expects an integer, found `{value}`")]
    NotAnInteger {
        line: usize,
        key: String,
        value: String,
    },
    #[error("line {line}: {key} is missing a value")]
    MissingValue { line: usize, key: String },
    #[error("line {line}: LABELED must be 0 or 1, found {value}")]
    BadLabeled { line: usize, value: i64 },
    #[error("line {line}: CUTOFF_LEN must be positive")]
    BadCutoff { line: usize },
    #[error("line {line}: MAX_ERROR must not be negative")]
    BadMaxError { line: usize },
    #[error("label `{0}` is both deleted and part of an equivalence")]
    Conflict(String),
}

impl Default for ParamSet {
    /// The `COLLINS.prm` settings.
    fn default() -> Self {
        parse_prm(COLLINS_PRM).expect("bundled COLLINS.prm is valid")
    }
}

impl ParamSet {
    /// No deletions or equivalences; labeled matching, cutoff 40, 10 errors.
    /// This is what a parameter file is applied on top of.
    pub fn empty() -> Self {
        ParamSet {
            delete_labels: HashSet::new(),
            delete_labels_for_length: HashSet::new(),
            eq_labels: HashMap::new(),
            eq_words: HashMap::new(),
            labeled: true,
            cutoff_len: 40,
            max_error: 10,
            debug: 0,
        }
    }

    pub fn add_eq_label(&mut self, a: &str, b: &str) {
        join_classes(&mut self.eq_labels, a, b);
    }

    pub fn add_eq_word(&mut self, a: &str, b: &str) {
        join_classes(&mut self.eq_words, a, b);
    }

    pub fn canonical_label<'a>(&'a self, label: &'a str) -> &'a str {
        self.eq_labels.get(label).map_or(label, String::as_str)
    }

    pub fn canonical_word<'a>(&'a self, word: &'a str) -> &'a str {
        self.eq_words.get(word).map_or(word, String::as_str)
    }

    fn deletes(&self, label: &str) -> bool {
        self.delete_labels.contains(label)
    }
}

// Maps every member of the union of the two classes to one representative.
fn join_classes(map: &mut HashMap<String, String>, a: &str, b: &str) {
    let ca = map.get(a).cloned().unwrap_or_else(|| a.to_string());
    let cb = map.get(b).cloned().unwrap_or_else(|| b.to_string());
    for v in map.values_mut() {
        if *v == cb {
            *v = ca.clone();
        }
    }
    map.insert(a.to_string(), ca.clone());
    map.insert(b.to_string(), ca.clone());
    map.insert(cb, ca);
}

/// Parses a parameter file on top of [`ParamSet::empty`].
pub fn parse_prm(input: &str) -> Result<ParamSet, PrmError> {
    let mut params = ParamSet::empty();
    for (n, raw) in input.lines().enumerate() {
        let line = n + 1;
        let text = raw.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let mut fields = text.split_whitespace();
        let key = fields.next().unwrap_or_default();
        let args: Vec<&str> = fields.collect();
        let arg = |k: usize| {
            args.get(k).copied().ok_or_else(|| PrmError::MissingValue {
                line,
                key: key.to_string(),
            })
        };
        let int = |k: usize| -> Result<i64, PrmError> {
            let v = arg(k)?;
            v.parse().map_err(|_| PrmError::NotAnInteger {
                line,
                key: key.to_string(),
                value: v.to_string(),
            })
        };
        match key {
            "DEBUG" => params.debug = int(0)?.max(0) as u32,
            "MAX_ERROR" => {
                let v = int(0)?;
                if v < 0 {
                    return Err(PrmError::BadMaxError { line });
                }
                params.max_error = v as usize;
            }
            "CUTOFF_LEN" => {
                let v = int(0)?;
                if v <= 0 {
                    return Err(PrmError::BadCutoff { line });
                }
                params.cutoff_len = v as usize;
            }
            "LABELED" => {
                params.labeled = match int(0)? {
                    0 => false,
                    1 => true,
                    value => return Err(PrmError::BadLabeled { line, value }),
                }
            }
            "DELETE_LABEL" => {
                params.delete_labels.insert(arg(0)?.to_string());
            }
            "DELETE_LABEL_FOR_LENGTH" => {
                params.delete_labels_for_length.insert(arg(0)?.to_string());
            }
            "EQ_LABEL" => params.add_eq_label(arg(0)?, arg(1)?),
            "EQ_WORD" => params.add_eq_word(arg(0)?, arg(1)?),
            other => warn!("parameter file line {line}: unknown key `{other}` ignored"),
        }
    }
    if let Some(label) = params
        .eq_labels
        .keys()
        .find(|l| params.delete_labels.contains(*l))
    {
        return Err(PrmError::Conflict(label.clone()));
    }
    Ok(params)
}

/// Drops functional annotations from a phrase label: `NP-SBJ=2` → `NP`.
/// Labels that start with `-` (`-NONE-`, `-LRB-`) are left alone.
pub fn strip_functional(label: &str) -> &str {
    if label.starts_with('-') {
        return label;
    }
    match label.find(['-', '=']) {
        Some(k) => &label[..k],
        None => label,
    }
}

/// A tree after parameter filtering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilteredSentence {
    /// Surviving words, reindexed from 0.
    pub leaves: Vec<TokenLeaf>,
    /// Brackets over surviving words, with canonical labels.
    pub constituents: ConstituentSet,
    /// Word count ignoring only `delete_labels_for_length`.
    pub length: usize,
}

pub fn apply_param_filters(tree: &SyntaxTree, params: &ParamSet) -> FilteredSentence {
    let mut out = FilteredSentence {
        leaves: Vec::new(),
        constituents: ConstituentSet::default(),
        length: 0,
    };
    filter_node(tree, params, &mut out);
    out
}

fn filter_node(node: &SyntaxTree, params: &ParamSet, out: &mut FilteredSentence) {
    match node {
        SyntaxTree::Preterminal { tag, word } => {
            if !params.delete_labels_for_length.contains(tag) {
                out.length += 1;
            }
            if !params.deletes(tag) {
                out.leaves.push(TokenLeaf {
                    form: word.clone(),
                    tag: tag.clone(),
                    index: out.leaves.len(),
                });
            }
        }
        SyntaxTree::Phrase { label, children } => {
            let start = out.leaves.len();
            let slot = out.constituents.items.len();
            for c in children {
                filter_node(c, params, out);
            }
            let end = out.leaves.len();
            let stripped = strip_functional(label);
            if end > start && !is_wrapper_label(label) && !params.deletes(stripped) {
                let tokens = out.leaves[start..end]
                    .iter()
                    .map(|l| l.form.clone())
                    .collect();
                // Parents go before their descendants.
                out.constituents.items.insert(
                    slot,
                    Constituent::new(params.canonical_label(stripped), start, end, tokens),
                );
            }
        }
    }
}

/// Why a legacy pair could not be scored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LegacyMismatch {
    Length {
        gold: usize,
        sys: usize,
    },
    Words {
        position: usize,
        gold: String,
        sys: String,
    },
    MissingSystem,
}

impl fmt::Display for LegacyMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LegacyMismatch::Length { gold, sys } => write!(f, "Length unmatch ({gold}|{sys})"),
            LegacyMismatch::Words { gold, sys, .. } => write!(f, "Words unmatch ({gold}|{sys})"),
            LegacyMismatch::MissingSystem => f.write_str("No system tree"),
        }
    }
}

/// A legacy row and, for error rows, the cause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LegacyRow {
    pub score: SentenceScore,
    pub mismatch: Option<LegacyMismatch>,
}

pub fn legacy_score_row(
    id: usize,
    gold: &SyntaxTree,
    sys: &SyntaxTree,
    params: &ParamSet,
) -> LegacyRow {
    let g = apply_param_filters(gold, params);
    let s = apply_param_filters(sys, params);
    let error = |mismatch| LegacyRow {
        score: SentenceScore::unscored(id, g.length, Status::Error),
        mismatch: Some(mismatch),
    };

    if g.leaves.len() != s.leaves.len() {
        return error(LegacyMismatch::Length {
            gold: g.leaves.len(),
            sys: s.leaves.len(),
        });
    }
    if let Some((position, (a, b))) = g
        .leaves
        .iter()
        .zip(&s.leaves)
        .enumerate()
        .find(|(_, (a, b))| params.canonical_word(&a.form) != params.canonical_word(&b.form))
    {
        return error(LegacyMismatch::Words {
            position,
            gold: a.form.clone(),
            sys: b.form.clone(),
        });
    }
    if g.leaves.is_empty() {
        return LegacyRow {
            score: SentenceScore::unscored(id, g.length, Status::Skip),
            mismatch: None,
        };
    }

    let (gc, sc) = if params.labeled {
        (g.constituents, s.constituents)
    } else {
        (unlabel(g.constituents), unlabel(s.constituents))
    };
    let correct = g
        .leaves
        .iter()
        .zip(&s.leaves)
        .filter(|(a, b)| a.tag == b.tag)
        .count();
    LegacyRow {
        score: SentenceScore {
            id,
            length: g.length,
            status: Status::Ok,
            matched: count_matched(&gc, &sc),
            gold_brackets: gc.len(),
            test_brackets: sc.len(),
            crossing: count_crossing(&gc, &sc),
            words: g.leaves.len(),
            correct_tags: correct,
        },
        mismatch: None,
    }
}

fn unlabel(set: ConstituentSet) -> ConstituentSet {
    set.items
        .into_iter()
        .map(|c| Constituent {
            label: String::new(),
            ..c
        })
        .collect()
}

/// Scores one positional pair the way evalb does.
pub fn legacy_score_pair(
    id: usize,
    gold: &SyntaxTree,
    sys: &SyntaxTree,
    params: &ParamSet,
) -> SentenceScore {
    legacy_score_row(id, gold, sys, params).score
}

/// Raised when error rows exceed `MAX_ERROR`. Holds every row produced up to
/// and including the one that crossed the limit.
#[derive(Debug, Clone, Error)]
#[error("too many errors: {errors} error sentences exceed MAX_ERROR {max_error}")]
pub struct LegacyAbort {
    pub rows: Vec<LegacyRow>,
    pub errors: usize,
    pub max_error: usize,
}

/// Scores gold tree k against system tree k for every gold tree.
pub fn evaluate_legacy(
    gold: &[SyntaxTree],
    sys: &[SyntaxTree],
    params: &ParamSet,
) -> Result<Vec<LegacyRow>, LegacyAbort> {
    if sys.len() > gold.len() {
        warn!(
            "system file has {} trees beyond the {} gold trees; ignoring them",
            sys.len() - gold.len(),
            gold.len()
        );
    }
    let mut rows = Vec::with_capacity(gold.len());
    let mut errors = 0;
    for (k, g) in gold.iter().enumerate() {
        let id = k + 1;
        let row = match sys.get(k) {
            Some(s) => legacy_score_row(id, g, s, params),
            None => LegacyRow {
                score: SentenceScore::unscored(
                    id,
                    apply_param_filters(g, params).length,
                    Status::Error,
                ),
                mismatch: Some(LegacyMismatch::MissingSystem),
            },
        };
        errors += usize::from(row.score.status == Status::Error);
        rows.push(row);
        if errors > params.max_error {
            return Err(LegacyAbort {
                rows,
                errors,
                max_error: params.max_error,
            });
        }
    }
    Ok(rows)
}
