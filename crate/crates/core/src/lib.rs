//! PARSEVAL evaluation for constituency parses whose tokenization or sentence
//! boundaries differ from the gold treebank.
//!
//! Gold and system files are aligned sentence by sentence and then word by
//! word; constituents are compared in the coordinates of the resulting
//! alignment units, so parses over differently segmented text can still be
//! scored. A legacy path ([`legacy`]) reproduces classic evalb scoring.
//!
//! ```
//! use jp_evalb_core::{evaluate, parse_bracketed, summarize, SimilarityConfig};
//!
//! let gold = parse_bracketed("(S (NP (DT This)) (VP (MD ca) (RB n't) (VP (VB be) (ADJP (JJ right)))))").unwrap();
//! let sys = parse_bracketed("(S (NP (DT this)) (VP (MD can) (RB not) (VP (VB be) (ADJP (JJ right)))))").unwrap();
//! let rows = evaluate(&gold, &sys, &SimilarityConfig::default()).unwrap();
//! assert_eq!((rows[0].matched, rows[0].gold_brackets, rows[0].test_brackets), (5, 5, 5));
//! let summary = summarize(&rows, 40);
//! assert_eq!(summary.all.f1().as_percent().to_string(), "100.00");
//! ```

pub mod alignment;
pub mod constituents;
pub mod legacy;
pub mod scoring;
pub mod treebank;

pub use alignment::{
    align_sentences, align_sequences, align_words, edit_distance, load_exception_list,
    normalize_nospace, similar, AlignError, AlignRule, AlignmentUnit, ExceptionList,
    ExceptionListError, GroupRelation, SimilarityConfig,
};
pub use constituents::{
    extract_constituents, merge_with_dummy_root, remap_to_alignment_units, Constituent,
    ConstituentError, ConstituentSet, Side, DUMMY_ROOT_LABEL,
};
pub use legacy::{
    apply_param_filters, evaluate_legacy, legacy_score_pair, legacy_score_row, parse_prm,
    LegacyAbort, LegacyMismatch, LegacyRow, ParamSet, PrmError,
};
pub use scoring::{
    count_crossing, count_matched, evaluate, score_group, summarize, tag_accuracy, CorpusSummary,
    GroupEvaluation, Rate, ScoreError, SentenceScore, Status, SummaryBlock, TagCounts,
    DEFAULT_CUTOFF_LEN,
};
pub use treebank::{
    leaves, parse_bracketed, render_bracketed, ParseError, ParseErrorKind, RenderError, SyntaxTree,
    TokenLeaf,
};
