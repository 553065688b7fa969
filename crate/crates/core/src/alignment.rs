//! Greedy monotone alignment of gold and system sequences.
//!
//! The same left-to-right procedure aligns sentences within a file and words
//! within a sentence group. Pairs that match are emitted one-to-one. On a
//! mismatch the procedure opens a group and keeps extending one side at a time
//! until the two sides can be closed off against each other, producing a
//! many-to-many [`AlignmentUnit`].
//!
//! The rules that decide what "matches", when an open group may close, and
//! which side to extend are supplied through [`AlignRule`]; [`align_sentences`]
//! and [`align_words`] are the two specializations used for scoring.

use std::collections::HashSet;
use std::fs;
use std::ops::Range;
use std::path::Path;

use thiserror::Error;

/// Matching group of consecutive gold items and consecutive system items.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlignmentUnit {
    pub gold: Range<usize>,
    pub sys: Range<usize>,
}

impl AlignmentUnit {
    pub fn new(gold: Range<usize>, sys: Range<usize>) -> Self {
        AlignmentUnit { gold, sys }
    }

    pub fn is_one_to_one(&self) -> bool {
        self.gold.len() == 1 && self.sys.len() == 1
    }
}

#[derive(Debug, Error)]
pub enum AlignError {
    #[error("cannot align {gold} gold item(s) against {sys} system item(s)")]
    OneSidedEmpty { gold: usize, sys: usize },
}

#[derive(Debug, Error)]
pub enum ExceptionListError {
    #[error("cannot read exception list {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("exception list line {line}: expected two tab-separated fields, found {fields}")]
    Malformed { line: usize, fields: usize },
}

#[derive(Debug, Error)]
#[error("similarity ratio threshold must lie strictly between 0 and 1, got {0}")]
pub struct InvalidThreshold(pub f64);

/// Removes all whitespace and case-folds.
pub fn normalize_nospace(s: &str) -> String {
    s.chars()
        .filter(|c| !c.is_whitespace())
        .flat_map(char::to_lowercase)
        .collect()
}

/// Levenshtein distance over Unicode scalar values.
pub fn edit_distance(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let prefix = a.iter().zip(&b).take_while(|(x, y)| x == y).count();
    let (a, b) = (&a[prefix..], &b[prefix..]);
    let suffix = a
        .iter()
        .rev()
        .zip(b.iter().rev())
        .take_while(|(x, y)| x == y)
        .count();
    let (a, b) = (&a[..a.len() - suffix], &b[..b.len() - suffix]);
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }

    let mut row: Vec<usize> = (0..=b.len()).collect();
    for (i, ca) in a.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let above = row[j + 1];
            row[j + 1] = if ca == cb {
                diag
            } else {
                1 + diag.min(above).min(row[j])
            };
            diag = above;
        }
    }
    row[b.len()]
}

/// Surface pairs treated as equal during word alignment, such as contractions
/// (`ca n't` / `can not`) or escaped symbols. Stored normalized and
/// non-directional.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExceptionList {
    pairs: HashSet<(String, String)>,
    max_chars: usize,
}

impl ExceptionList {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, gold: &str, sys: &str) {
        let (g, s) = (normalize_nospace(gold), normalize_nospace(sys));
        self.max_chars = self.max_chars.max(g.chars().count()).max(s.chars().count());
        self.pairs.insert((s.clone(), g.clone()));
        self.pairs.insert((g, s));
    }

    pub fn contains(&self, a: &str, b: &str) -> bool {
        !self.pairs.is_empty() && self.pairs.contains(&(a.to_string(), b.to_string()))
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Number of distinct pairs (each direction counted once).
    pub fn len(&self) -> usize {
        let symmetric = self.pairs.iter().filter(|(a, b)| a == b).count();
        (self.pairs.len() + symmetric) / 2
    }

    /// Longest normalized entry, in characters.
    pub fn max_chars(&self) -> usize {
        self.max_chars
    }

    /// Parses `gold<TAB>system` lines. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, ExceptionListError> {
        let mut list = ExceptionList::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 2 || fields.iter().any(|f| f.trim().is_empty()) {
                return Err(ExceptionListError::Malformed {
                    line: n + 1,
                    fields: fields.len(),
                });
            }
            list.insert(fields[0], fields[1]);
        }
        Ok(list)
    }
}

/// Reads an exception list file; see [`ExceptionList::parse`].
pub fn load_exception_list(path: impl AsRef<Path>) -> Result<ExceptionList, ExceptionListError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| ExceptionListError::Io {
        path: path.display().to_string(),
        source,
    })?;
    ExceptionList::parse(&text)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityConfig {
    ratio_threshold: f64,
    pub exceptions: ExceptionList,
}

impl Default for SimilarityConfig {
    fn default() -> Self {
        SimilarityConfig {
            ratio_threshold: 0.1,
            exceptions: ExceptionList::default(),
        }
    }
}

impl SimilarityConfig {
    pub fn new(ratio_threshold: f64, exceptions: ExceptionList) -> Result<Self, InvalidThreshold> {
        if !(ratio_threshold > 0.0 && ratio_threshold < 1.0) {
            return Err(InvalidThreshold(ratio_threshold));
        }
        Ok(SimilarityConfig {
            ratio_threshold,
            exceptions,
        })
    }

    pub fn with_exceptions(exceptions: ExceptionList) -> Self {
        SimilarityConfig {
            exceptions,
            ..Self::default()
        }
    }

    pub fn ratio_threshold(&self) -> f64 {
        self.ratio_threshold
    }
}

/// Whether two normalized strings differ by less than the configured ratio of
/// edit distance to the longer string's length.
pub fn similar(a: &str, b: &str, cfg: &SimilarityConfig) -> bool {
    let (la, lb) = (a.chars().count(), b.chars().count());
    let longest = la.max(lb);
    if longest == 0 {
        return true;
    }
    let ratio = |d: usize| d as f64 / longest as f64;
    // The distance is at least the length difference.
    if ratio(la.abs_diff(lb)) >= cfg.ratio_threshold {
        return false;
    }
    ratio(edit_distance(a, b)) < cfg.ratio_threshold
}

/// How the texts on the two sides of an open group relate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupRelation {
    Equal,
    /// Left text is a proper prefix of the right text.
    LeftPrefix,
    /// Right text is a proper prefix of the left text.
    RightPrefix,
    Diverged,
}

impl GroupRelation {
    pub fn between(left: &str, right: &str) -> Self {
        if left == right {
            GroupRelation::Equal
        } else if right.starts_with(left) {
            GroupRelation::LeftPrefix
        } else if left.starts_with(right) {
            GroupRelation::RightPrefix
        } else {
            GroupRelation::Diverged
        }
    }
}

/// Matching policy for [`align_sequences`].
pub trait AlignRule {
    fn left_len(&self) -> usize;
    fn right_len(&self) -> usize;

    /// If the items at `(i, j)` match outright, the number of left and right
    /// items the resulting unit spans (normally `(1, 1)`).
    fn matched(&self, i: usize, j: usize) -> Option<(usize, usize)>;

    /// Whether an open group ending just before `(i, j)` may close because
    /// alignment resumes at that pair.
    fn resumes_at(&self, i: usize, j: usize) -> bool;

    fn relation(&self, left: Range<usize>, right: Range<usize>) -> GroupRelation;

    /// Tiebreak for a diverged group: `true` extends the left side.
    fn extend_left(&self, left: Range<usize>, right: Range<usize>) -> bool;
}

/// Greedy left-to-right alignment.
///
/// Every returned unit is non-empty on both sides, and the units partition
/// `0..left_len` and `0..right_len` in order. Items left over once one side
/// runs out are attached to the final unit.
pub fn align_sequences<R: AlignRule + ?Sized>(rule: &R) -> Result<Vec<AlignmentUnit>, AlignError> {
    let (n, m) = (rule.left_len(), rule.right_len());
    if (n == 0) != (m == 0) {
        return Err(AlignError::OneSidedEmpty { gold: n, sys: m });
    }

    let mut units: Vec<AlignmentUnit> = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < n && j < m {
        if let Some((w_left, w_right)) = rule.matched(i, j) {
            let (ei, ej) = ((i + w_left).min(n), (j + w_right).min(m));
            units.push(AlignmentUnit::new(i..ei, j..ej));
            i = ei;
            j = ej;
            continue;
        }

        let (gs, hs) = (i, j);
        loop {
            let left_done = i + 1 >= n;
            let right_done = j + 1 >= m;
            if left_done && right_done {
                break;
            }
            let rel = rule.relation(gs..i + 1, hs..j + 1);
            if !left_done && !right_done {
                match rel {
                    GroupRelation::Equal => break,
                    GroupRelation::Diverged if rule.resumes_at(i + 1, j + 1) => break,
                    _ => {}
                }
            }
            let grow_left = if left_done {
                false
            } else if right_done {
                true
            } else {
                match rel {
                    GroupRelation::LeftPrefix => true,
                    GroupRelation::RightPrefix => false,
                    _ => rule.extend_left(gs..i + 1, hs..j + 1),
                }
            };
            if grow_left {
                i += 1;
            } else {
                j += 1;
            }
        }
        units.push(AlignmentUnit::new(gs..i + 1, hs..j + 1));
        i += 1;
        j += 1;
    }

    if i < n || j < m {
        if let Some(last) = units.last_mut() {
            last.gold.end = n;
            last.sys.end = m;
        }
    }
    Ok(units)
}

// Normalized items plus cumulative character counts.
struct Normalized {
    items: Vec<String>,
    // chars[k] = total characters of items[..k]
    chars: Vec<usize>,
}

impl Normalized {
    fn new(items: Vec<String>) -> Self {
        let mut chars = Vec::with_capacity(items.len() + 1);
        chars.push(0);
        for it in &items {
            chars.push(chars.last().unwrap() + it.chars().count());
        }
        Normalized { items, chars }
    }

    fn len(&self) -> usize {
        self.items.len()
    }

    fn mass(&self, r: &Range<usize>) -> usize {
        self.chars[r.end] - self.chars[r.start]
    }

    fn joined(&self, r: Range<usize>) -> String {
        self.items[r].concat()
    }

    // Characters after item `k`.
    fn remaining_after(&self, k: usize) -> usize {
        self.chars[self.items.len()] - self.chars[k + 1]
    }
}

struct SentenceRule<'a> {
    gold: Normalized,
    sys: Normalized,
    cfg: &'a SimilarityConfig,
}

impl SentenceRule<'_> {
    fn equal_or_similar(&self, i: usize, j: usize) -> bool {
        let (a, b) = (&self.gold.items[i], &self.sys.items[j]);
        a == b || similar(a, b, self.cfg)
    }
}

impl AlignRule for SentenceRule<'_> {
    fn left_len(&self) -> usize {
        self.gold.len()
    }

    fn right_len(&self) -> usize {
        self.sys.len()
    }

    fn matched(&self, i: usize, j: usize) -> Option<(usize, usize)> {
        let (a, b) = (&self.gold.items[i], &self.sys.items[j]);
        if a == b {
            return Some((1, 1));
        }
        if !similar(a, b, self.cfg) {
            return None;
        }
        let (ni, nj) = (i + 1, j + 1);
        let (gold_end, sys_end) = (ni == self.gold.len(), nj == self.sys.len());
        let next_ok = if gold_end || sys_end {
            gold_end && sys_end
        } else {
            self.equal_or_similar(ni, nj)
        };
        next_ok.then_some((1, 1))
    }

    fn resumes_at(&self, i: usize, j: usize) -> bool {
        self.matched(i, j).is_some()
    }

    fn relation(&self, left: Range<usize>, right: Range<usize>) -> GroupRelation {
        GroupRelation::between(&self.gold.joined(left), &self.sys.joined(right))
    }

    fn extend_left(&self, left: Range<usize>, right: Range<usize>) -> bool {
        self.gold.mass(&left) < self.sys.mass(&right)
    }
}

/// Aligns gold and system sentences, each given as its token sequence.
///
/// Sentences are compared on their whitespace-free, case-folded text. A pair
/// matches when the texts are identical, or when they are similar and the
/// following pair is identical or similar too (or both pairs are the last in
/// their files). Mismatched runs are grouped into many-to-many units, which
/// is how differing sentence boundaries are resolved.
pub fn align_sentences<G, S>(
    gold: &[G],
    sys: &[S],
    cfg: &SimilarityConfig,
) -> Result<Vec<AlignmentUnit>, AlignError>
where
    G: AsRef<[String]>,
    S: AsRef<[String]>,
{
    let norm = |toks: &[String]| normalize_nospace(&toks.concat());
    let rule = SentenceRule {
        gold: Normalized::new(gold.iter().map(|s| norm(s.as_ref())).collect()),
        sys: Normalized::new(sys.iter().map(|s| norm(s.as_ref())).collect()),
        cfg,
    };
    align_sequences(&rule)
}

struct WordRule<'a> {
    gold: Normalized,
    sys: Normalized,
    exceptions: &'a ExceptionList,
}

impl WordRule<'_> {
    fn equal(&self, i: usize, j: usize) -> bool {
        self.gold.items[i] == self.sys.items[j]
    }

    // Smallest gold/system windows starting at (i, j) whose texts form a
    // listed exception pair.
    fn exception_window(&self, i: usize, j: usize) -> Option<(usize, usize)> {
        if self.exceptions.is_empty() {
            return None;
        }
        let limit = self.exceptions.max_chars();
        let mut g = String::new();
        for gi in i..self.gold.len() {
            g.push_str(&self.gold.items[gi]);
            if g.chars().count() > limit {
                break;
            }
            let mut s = String::new();
            for sj in j..self.sys.len() {
                s.push_str(&self.sys.items[sj]);
                if s.chars().count() > limit {
                    break;
                }
                if self.exceptions.contains(&g, &s) {
                    return Some((gi + 1 - i, sj + 1 - j));
                }
            }
        }
        None
    }
}

impl AlignRule for WordRule<'_> {
    fn left_len(&self) -> usize {
        self.gold.len()
    }

    fn right_len(&self) -> usize {
        self.sys.len()
    }

    fn matched(&self, i: usize, j: usize) -> Option<(usize, usize)> {
        if self.equal(i, j) {
            return Some((1, 1));
        }
        if let Some(w) = self.exception_window(i, j) {
            return Some(w);
        }
        // Substitution: the tokens differ but alignment resumes right after.
        // Tokens where one is a prefix of the other are a segmentation
        // difference, not a substitution.
        let (a, b) = (&self.gold.items[i], &self.sys.items[j]);
        if a.starts_with(b.as_str()) || b.starts_with(a.as_str()) {
            return None;
        }
        let (ni, nj) = (i + 1, j + 1);
        let (gold_end, sys_end) = (ni == self.gold.len(), nj == self.sys.len());
        let resumes = if gold_end || sys_end {
            gold_end && sys_end
        } else {
            self.equal(ni, nj)
        };
        resumes.then_some((1, 1))
    }

    fn resumes_at(&self, i: usize, j: usize) -> bool {
        self.equal(i, j) || self.exception_window(i, j).is_some()
    }

    fn relation(&self, left: Range<usize>, right: Range<usize>) -> GroupRelation {
        GroupRelation::between(&self.gold.joined(left), &self.sys.joined(right))
    }

    // Grow the side with more characters still ahead of it.
    fn extend_left(&self, left: Range<usize>, right: Range<usize>) -> bool {
        self.gold.remaining_after(left.end - 1) > self.sys.remaining_after(right.end - 1)
    }
}

/// Aligns the tokens of one gold sentence group with the tokens of the
/// corresponding system group.
///
/// Tokens match when their normalized forms are equal, when they form an
/// exception pair, or when they differ but the next tokens are equal
/// (a substitution). Other mismatches are grouped; the side with more
/// characters remaining is extended first.
pub fn align_words<G, S>(
    gold: &[G],
    sys: &[S],
    cfg: &SimilarityConfig,
) -> Result<Vec<AlignmentUnit>, AlignError>
where
    G: AsRef<str>,
    S: AsRef<str>,
{
    let rule = WordRule {
        gold: Normalized::new(gold.iter().map(|t| normalize_nospace(t.as_ref())).collect()),
        sys: Normalized::new(sys.iter().map(|t| normalize_nospace(t.as_ref())).collect()),
        exceptions: &cfg.exceptions,
    };
    align_sequences(&rule)
}
