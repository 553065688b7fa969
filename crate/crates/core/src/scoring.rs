//! PARSEVAL quantities per aligned sentence group and over a corpus.

use std::fmt;

use thiserror::Error;

use crate::alignment::{align_sentences, align_words, AlignError, AlignmentUnit, SimilarityConfig};
use crate::constituents::{
    extract_constituents, merge_with_dummy_root, remap_to_alignment_units, ConstituentError,
    ConstituentSet, Side, DUMMY_ROOT_LABEL,
};
use crate::treebank::{SyntaxTree, TokenLeaf};

/// POS tag of empty elements (traces), left out of sentence length.
pub const TRACE_TAG: &str = "-NONE-";

/// Length cutoff for the restricted summary block.
pub const DEFAULT_CUTOFF_LEN: usize = 40;

/// A ratio printed with two decimals, rounding half up.
///
/// Kept as an exact fraction so the printed digits never depend on binary
/// floating point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rate {
    num: u64,
    den: u64,
}

impl Rate {
    pub const ZERO: Rate = Rate { num: 0, den: 1 };
    pub const ONE: Rate = Rate { num: 1, den: 1 };

    /// `num / den`, or `if_empty` when `den` is zero.
    pub fn new(num: u64, den: u64, if_empty: Rate) -> Rate {
        if den == 0 {
            if_empty
        } else {
            Rate { num, den }
        }
    }

    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn percent(self) -> f64 {
        100.0 * self.value()
    }

    /// The rate as a percentage, e.g. `87.50`.
    pub fn as_percent(self) -> Fixed2 {
        Fixed2::of(100 * self.num as u128, self.den as u128)
    }

    /// The plain value, e.g. `0.80`.
    pub fn as_plain(self) -> Fixed2 {
        Fixed2::of(self.num as u128, self.den as u128)
    }
}

/// A nonnegative number rounded half up to hundredths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fixed2 {
    hundredths: u128,
}

impl Fixed2 {
    fn of(num: u128, den: u128) -> Fixed2 {
        Fixed2 {
            hundredths: (200 * num + den) / (2 * den),
        }
    }

    pub fn hundredths(self) -> u128 {
        self.hundredths
    }
}

impl fmt::Display for Fixed2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = format!("{}.{:02}", self.hundredths / 100, self.hundredths % 100);
        f.pad(&s)
    }
}

/// Row status; numeric codes follow evalb.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Status {
    #[default]
    Ok = 0,
    Skip = 1,
    Error = 2,
}

impl Status {
    pub fn code(self) -> u8 {
        self as u8
    }
}

/// One report row.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SentenceScore {
    pub id: usize,
    pub length: usize,
    pub status: Status,
    pub matched: usize,
    pub gold_brackets: usize,
    pub test_brackets: usize,
    pub crossing: usize,
    pub words: usize,
    pub correct_tags: usize,
}

impl SentenceScore {
    /// A row with every metric zeroed, as printed for skipped or failed
    /// sentences.
    pub fn unscored(id: usize, length: usize, status: Status) -> Self {
        SentenceScore {
            id,
            length,
            status,
            ..Default::default()
        }
    }

    pub fn is_ok(&self) -> bool {
        self.status == Status::Ok
    }

    fn rate(&self, num: usize, den: usize) -> Rate {
        if self.is_ok() {
            Rate::new(num as u64, den as u64, Rate::ONE)
        } else {
            Rate::ZERO
        }
    }

    pub fn recall(&self) -> Rate {
        self.rate(self.matched, self.gold_brackets)
    }

    pub fn precision(&self) -> Rate {
        self.rate(self.matched, self.test_brackets)
    }

    pub fn tag_accuracy(&self) -> Rate {
        self.rate(self.correct_tags, self.words)
    }

    pub fn is_complete_match(&self) -> bool {
        self.matched == self.gold_brackets && self.matched == self.test_brackets
    }
}

/// Number of system constituents paired one-to-one with gold constituents of
/// the same label and span. Duplicates count with multiplicity.
pub fn count_matched(gold: &ConstituentSet, sys: &ConstituentSet) -> usize {
    let mut available = gold.bracket_counts();
    let mut matched = 0;
    for c in sys {
        if let Some(n) = available.get_mut(&(c.label.as_str(), c.start, c.end)) {
            if *n > 0 {
                *n -= 1;
                matched += 1;
            }
        }
    }
    matched
}

/// Number of system constituents that cross at least one gold constituent.
pub fn count_crossing(gold: &ConstituentSet, sys: &ConstituentSet) -> usize {
    sys.iter()
        .filter(|s| gold.iter().any(|g| g.crosses(s)))
        .count()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TagCounts {
    pub words: usize,
    pub correct: usize,
}

impl TagCounts {
    pub fn accuracy(self) -> Rate {
        Rate::new(self.correct as u64, self.words as u64, Rate::ONE)
    }
}

/// POS accuracy over all gold leaves, punctuation included. Only leaves in
/// one-to-one word units can be correct.
pub fn tag_accuracy(gold: &[TokenLeaf], sys: &[TokenLeaf], units: &[AlignmentUnit]) -> TagCounts {
    let correct = units
        .iter()
        .filter(|u| u.is_one_to_one())
        .filter(|u| match (gold.get(u.gold.start), sys.get(u.sys.start)) {
            (Some(g), Some(s)) => g.tag == s.tag,
            _ => false,
        })
        .count();
    TagCounts {
        words: gold.len(),
        correct,
    }
}

#[derive(Debug, Error)]
pub enum ScoreError {
    #[error(transparent)]
    Align(#[from] AlignError),
    #[error(transparent)]
    Constituent(#[from] ConstituentError),
}

/// Everything computed for one aligned sentence group.
#[derive(Debug, Clone)]
pub struct GroupEvaluation {
    pub score: SentenceScore,
    pub word_units: Vec<AlignmentUnit>,
    /// Gold constituents in word-unit coordinates.
    pub gold: ConstituentSet,
    /// System constituents in word-unit coordinates.
    pub sys: ConstituentSet,
}

/// Scores one sentence alignment unit: the gold trees and system trees are
/// each merged under a dummy root when there are several, their words are
/// aligned, and constituents are compared in word-unit coordinates.
pub fn score_group(
    id: usize,
    gold_trees: &[SyntaxTree],
    sys_trees: &[SyntaxTree],
    cfg: &SimilarityConfig,
) -> Result<GroupEvaluation, ScoreError> {
    let gold_tree = merge_with_dummy_root(gold_trees.to_vec(), DUMMY_ROOT_LABEL)?;
    let sys_tree = merge_with_dummy_root(sys_trees.to_vec(), DUMMY_ROOT_LABEL)?;
    let gold_leaves = gold_tree.leaves();
    let sys_leaves = sys_tree.leaves();
    let gold_forms: Vec<String> = gold_leaves.iter().map(|l| l.form.clone()).collect();
    let sys_forms: Vec<String> = sys_leaves.iter().map(|l| l.form.clone()).collect();

    let units = align_words(&gold_forms, &sys_forms, cfg)?;
    let gold = remap_to_alignment_units(
        &extract_constituents(&gold_tree, 0),
        &units,
        Side::Gold,
        &gold_forms,
    )?;
    let sys = remap_to_alignment_units(
        &extract_constituents(&sys_tree, 0),
        &units,
        Side::System,
        &sys_forms,
    )?;
    let tags = tag_accuracy(&gold_leaves, &sys_leaves, &units);

    let score = SentenceScore {
        id,
        length: gold_leaves.iter().filter(|l| l.tag != TRACE_TAG).count(),
        status: Status::Ok,
        matched: count_matched(&gold, &sys),
        gold_brackets: gold.len(),
        test_brackets: sys.len(),
        crossing: count_crossing(&gold, &sys),
        words: tags.words,
        correct_tags: tags.correct,
    };
    Ok(GroupEvaluation {
        score,
        word_units: units,
        gold,
        sys,
    })
}

/// Aligns the sentences of two parsed files and scores every resulting group.
/// Rows are numbered from 1 in alignment order.
pub fn evaluate(
    gold: &[SyntaxTree],
    sys: &[SyntaxTree],
    cfg: &SimilarityConfig,
) -> Result<Vec<SentenceScore>, ScoreError> {
    let forms = |trees: &[SyntaxTree]| -> Vec<Vec<String>> {
        trees
            .iter()
            .map(|t| t.words().into_iter().map(str::to_string).collect())
            .collect()
    };
    let units = align_sentences(&forms(gold), &forms(sys), cfg)?;
    units
        .iter()
        .enumerate()
        .map(|(k, u)| {
            score_group(k + 1, &gold[u.gold.clone()], &sys[u.sys.clone()], cfg).map(|g| g.score)
        })
        .collect()
}

/// Corpus statistics over one set of rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SummaryBlock {
    pub sentences: usize,
    pub error_sentences: usize,
    pub skip_sentences: usize,
    pub valid_sentences: usize,
    pub total_gold: usize,
    pub total_test: usize,
    pub total_matched: usize,
    pub total_crossing: usize,
    pub complete_matches: usize,
    pub no_crossing: usize,
    pub two_or_less_crossing: usize,
    pub words: usize,
    pub correct_tags: usize,
}

impl SummaryBlock {
    fn add(&mut self, s: &SentenceScore) {
        self.sentences += 1;
        match s.status {
            Status::Error => self.error_sentences += 1,
            Status::Skip => self.skip_sentences += 1,
            Status::Ok => {
                self.valid_sentences += 1;
                self.total_gold += s.gold_brackets;
                self.total_test += s.test_brackets;
                self.total_matched += s.matched;
                self.total_crossing += s.crossing;
                self.complete_matches += usize::from(s.is_complete_match());
                self.no_crossing += usize::from(s.crossing == 0);
                self.two_or_less_crossing += usize::from(s.crossing <= 2);
                self.words += s.words;
                self.correct_tags += s.correct_tags;
            }
        }
    }

    fn rate(num: usize, den: usize) -> Rate {
        Rate::new(num as u64, den as u64, Rate::ZERO)
    }

    pub fn recall(&self) -> Rate {
        Self::rate(self.total_matched, self.total_gold)
    }

    pub fn precision(&self) -> Rate {
        Self::rate(self.total_matched, self.total_test)
    }

    /// Harmonic mean of precision and recall, `2m / (g + t)` in counts.
    pub fn f1(&self) -> Rate {
        Self::rate(2 * self.total_matched, self.total_gold + self.total_test)
    }

    pub fn complete_match(&self) -> Rate {
        Self::rate(self.complete_matches, self.valid_sentences)
    }

    pub fn average_crossing(&self) -> Rate {
        Self::rate(self.total_crossing, self.valid_sentences)
    }

    pub fn no_crossing_rate(&self) -> Rate {
        Self::rate(self.no_crossing, self.valid_sentences)
    }

    pub fn two_or_less_crossing_rate(&self) -> Rate {
        Self::rate(self.two_or_less_crossing, self.valid_sentences)
    }

    pub fn tagging_accuracy(&self) -> Rate {
        Self::rate(self.correct_tags, self.words)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusSummary {
    pub cutoff: usize,
    pub all: SummaryBlock,
    /// Rows whose length is at most `cutoff`.
    pub within_cutoff: SummaryBlock,
}

/// Micro-averaged corpus statistics. Error and skip rows are counted but
/// contribute no brackets or tags.
pub fn summarize(scores: &[SentenceScore], cutoff: usize) -> CorpusSummary {
    let mut all = SummaryBlock::default();
    let mut within = SummaryBlock::default();
    for s in scores {
        all.add(s);
        if s.length <= cutoff {
            within.add(s);
        }
    }
    CorpusSummary {
        cutoff,
        all,
        within_cutoff: within,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constituents::Constituent;
    use crate::treebank::parse_bracketed;

    fn set(items: &[(&str, usize, usize)]) -> ConstituentSet {
        items
            .iter()
            .map(|&(l, s, e)| Constituent::new(l, s, e, vec![]))
            .collect()
    }

    fn trees(s: &str) -> Vec<SyntaxTree> {
        parse_bracketed(s).unwrap()
    }

    #[test]
    fn rounding_is_half_up_and_exact() {
        assert_eq!(
            Rate::new(7, 8, Rate::ZERO).as_percent().to_string(),
            "87.50"
        );
        assert_eq!(
            Rate::new(5, 7, Rate::ZERO).as_percent().to_string(),
            "71.43"
        );
        assert_eq!(
            Rate::new(2, 3, Rate::ZERO).as_percent().to_string(),
            "66.67"
        );
        // 1/32 = 3.125% exactly; half up gives 3.13.
        assert_eq!(
            Rate::new(1, 32, Rate::ZERO).as_percent().to_string(),
            "3.13"
        );
        assert_eq!(
            Rate::new(1, 1, Rate::ZERO).as_percent().to_string(),
            "100.00"
        );
        assert_eq!(Rate::new(4, 5, Rate::ZERO).as_plain().to_string(), "0.80");
        assert_eq!(format!("{:>6}", Rate::ZERO.as_percent()), "  0.00");
    }

    #[test]
    fn zero_denominators() {
        let s = SentenceScore::default();
        assert_eq!(s.recall(), Rate::ONE);
        assert_eq!(s.precision(), Rate::ONE);
        let e = SentenceScore::unscored(3, 9, Status::Error);
        assert_eq!(e.recall(), Rate::ZERO);
        assert_eq!(e.tag_accuracy(), Rate::ZERO);
    }

    #[test]
    fn matched_respects_multiplicity() {
        let gold = set(&[("NP", 0, 2), ("NP", 0, 2), ("VP", 2, 4)]);
        let sys = set(&[("NP", 0, 2), ("NP", 0, 2), ("NP", 0, 2), ("VP", 2, 3)]);
        assert_eq!(count_matched(&gold, &sys), 2);
        assert_eq!(count_matched(&sys, &gold), 2);
    }

    #[test]
    fn crossing_examples() {
        let a = set(&[("S", 0, 4), ("NP", 0, 2)]);
        assert_eq!(count_crossing(&a, &a), 0);
        assert_eq!(
            count_crossing(&set(&[("A", 0, 3)]), &set(&[("B", 1, 4)])),
            1
        );
        // Counted once per system constituent.
        let gold = set(&[("A", 0, 2), ("B", 2, 4)]);
        let sys = set(&[("C", 1, 3)]);
        assert_eq!(count_crossing(&gold, &sys), 1);
    }

    #[test]
    fn tag_accuracy_skips_grouped_units() {
        let g = trees("(S (NP (DT This)) (VP (MD ca) (RB n't) (VP (VB be) (AdjP (JJ right)))))");
        let s = trees("(S (NP (DT this)) (VP (MD can) (RB not) (VP (VB be) (AdjP (JJ right)))))");
        let units = vec![
            AlignmentUnit::new(0..1, 0..1),
            AlignmentUnit::new(1..3, 1..3),
            AlignmentUnit::new(3..4, 3..4),
            AlignmentUnit::new(4..5, 4..5),
        ];
        let t = tag_accuracy(&g[0].leaves(), &s[0].leaves(), &units);
        assert_eq!(
            t,
            TagCounts {
                words: 5,
                correct: 3
            }
        );
        let same = g[0].leaves();
        let one_to_one: Vec<_> = (0..5)
            .map(|k| AlignmentUnit::new(k..k + 1, k..k + 1))
            .collect();
        assert_eq!(
            tag_accuracy(&same, &same, &one_to_one)
                .accuracy()
                .as_percent()
                .to_string(),
            "100.00"
        );
    }

    #[test]
    fn identical_trees_score_perfectly() {
        let t = trees("(S (NP (DT a) (NN b)) (VP (VB c) (NP (NN d))))");
        let g = score_group(1, &t, &t, &SimilarityConfig::default()).unwrap();
        assert_eq!(g.score.recall().as_percent().to_string(), "100.00");
        assert_eq!(g.score.precision().as_percent().to_string(), "100.00");
        assert_eq!(g.score.crossing, 0);
        assert_eq!(g.score.matched, 4);
    }

    #[test]
    fn trace_excluded_from_length_only() {
        let t = trees("(S (NP (-NONE- *-1)) (VP (VB go)))");
        let g = score_group(1, &t, &t, &SimilarityConfig::default()).unwrap();
        assert_eq!((g.score.length, g.score.words), (1, 2));
    }

    #[test]
    fn summary_examples() {
        let one = SentenceScore {
            id: 1,
            length: 5,
            matched: 5,
            gold_brackets: 5,
            test_brackets: 5,
            words: 5,
            correct_tags: 5,
            ..Default::default()
        };
        let s = summarize(&[one], 40);
        assert_eq!(s.all.recall().as_percent().to_string(), "100.00");
        assert_eq!(s.all.f1().as_percent().to_string(), "100.00");
        assert_eq!(s.all.complete_match().as_percent().to_string(), "100.00");

        let empty = summarize(&[], 40);
        assert_eq!(empty.all, SummaryBlock::default());
        assert_eq!(empty.all.recall(), Rate::ZERO);
        assert_eq!(empty.all.f1(), Rate::ZERO);
    }

    #[test]
    fn summary_sums_three_groups() {
        // (matched, gold, test) for the contraction, morphology and split groups.
        let rows: Vec<SentenceScore> = [(5, 5, 5), (4, 6, 4), (5, 7, 8)]
            .iter()
            .enumerate()
            .map(|(k, &(m, g, t))| SentenceScore {
                id: k + 1,
                matched: m,
                gold_brackets: g,
                test_brackets: t,
                ..Default::default()
            })
            .collect();
        let s = summarize(&rows, 40);
        assert_eq!(
            (s.all.total_matched, s.all.total_gold, s.all.total_test),
            (14, 18, 17)
        );
        assert_eq!(s.all.recall().as_percent().to_string(), "77.78");
        assert_eq!(s.all.precision().as_percent().to_string(), "82.35");
        // 2*14/35
        assert_eq!(s.all.f1().as_percent().to_string(), "80.00");
    }

    #[test]
    fn cutoff_block_filters_by_length() {
        let rows = vec![
            SentenceScore {
                id: 1,
                length: 10,
                matched: 1,
                gold_brackets: 1,
                test_brackets: 1,
                ..Default::default()
            },
            SentenceScore {
                id: 2,
                length: 50,
                matched: 0,
                gold_brackets: 3,
                test_brackets: 3,
                crossing: 3,
                ..Default::default()
            },
            SentenceScore::unscored(3, 12, Status::Error),
        ];
        let s = summarize(&rows, 40);
        assert_eq!(s.all.sentences, 3);
        assert_eq!(s.all.error_sentences, 1);
        assert_eq!(s.all.valid_sentences, 2);
        assert_eq!(s.all.average_crossing().as_plain().to_string(), "1.50");
        assert_eq!(s.within_cutoff.sentences, 2);
        assert_eq!(s.within_cutoff.valid_sentences, 1);
        assert_eq!(s.within_cutoff.recall().as_percent().to_string(), "100.00");
    }
}
