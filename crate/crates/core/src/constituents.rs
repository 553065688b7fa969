//! Constituent extraction and span remapping.

use std::collections::HashMap;

use thiserror::Error;

use crate::alignment::AlignmentUnit;
use crate::treebank::{SyntaxTree, TOP_LABEL};

/// Label of the artificial root placed over several sentences that align to
/// a single sentence on the other side.
pub const DUMMY_ROOT_LABEL: &str = "@S";

/// A phrase node: label and `[start, end)` span, plus the surface text it
/// covers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Constituent {
    pub label: String,
    pub start: usize,
    pub end: usize,
    pub tokens: Vec<String>,
}

impl Constituent {
    pub fn new(label: impl Into<String>, start: usize, end: usize, tokens: Vec<String>) -> Self {
        Constituent {
            label: label.into(),
            start,
            end,
            tokens,
        }
    }

    pub fn span(&self) -> (usize, usize) {
        (self.start, self.end)
    }

    /// Partial overlap with neither span containing the other.
    pub fn crosses(&self, other: &Constituent) -> bool {
        (self.start < other.start && other.start < self.end && self.end < other.end)
            || (other.start < self.start && self.start < other.end && other.end < self.end)
    }
}

/// Multiset of constituents in tree order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConstituentSet {
    pub items: Vec<Constituent>,
}

impl ConstituentSet {
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Constituent> {
        self.items.iter()
    }

    /// Occurrence counts keyed by `(label, start, end)`.
    pub fn bracket_counts(&self) -> HashMap<(&str, usize, usize), usize> {
        let mut counts = HashMap::new();
        for c in &self.items {
            *counts
                .entry((c.label.as_str(), c.start, c.end))
                .or_insert(0) += 1;
        }
        counts
    }
}

impl FromIterator<Constituent> for ConstituentSet {
    fn from_iter<I: IntoIterator<Item = Constituent>>(iter: I) -> Self {
        ConstituentSet {
            items: iter.into_iter().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a ConstituentSet {
    type Item = &'a Constituent;
    type IntoIter = std::slice::Iter<'a, Constituent>;
    fn into_iter(self) -> Self::IntoIter {
        self.items.iter()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstituentError {
    #[error("cannot merge an empty group of trees")]
    EmptyGroup,
    #[error("token {index} is not covered by any alignment unit")]
    Uncovered { index: usize },
}

/// Which side of an [`AlignmentUnit`] a tree belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Gold,
    System,
}

impl Side {
    fn range(self, unit: &AlignmentUnit) -> std::ops::Range<usize> {
        match self {
            Side::Gold => unit.gold.clone(),
            Side::System => unit.sys.clone(),
        }
    }
}

/// Wrapper nodes never counted as constituents.
pub fn is_wrapper_label(label: &str) -> bool {
    label == TOP_LABEL || label == DUMMY_ROOT_LABEL
}

/// Joins several trees under one root labeled `dummy_label`. A single tree is
/// returned unchanged.
pub fn merge_with_dummy_root(
    mut trees: Vec<SyntaxTree>,
    dummy_label: &str,
) -> Result<SyntaxTree, ConstituentError> {
    match trees.len() {
        0 => Err(ConstituentError::EmptyGroup),
        1 => Ok(trees.pop().unwrap()),
        _ => Ok(SyntaxTree::phrase(dummy_label, trees)),
    }
}

/// One constituent per phrase node other than `TOP` and `@S` wrappers, with
/// spans over raw token positions shifted by `offset`. Punctuation tokens are
/// included in spans.
pub fn extract_constituents(tree: &SyntaxTree, offset: usize) -> ConstituentSet {
    let words = tree.words();
    let mut items = Vec::new();
    collect(tree, 0, &words, offset, &mut items);
    ConstituentSet { items }
}

// Returns the number of words under `node`.
fn collect(
    node: &SyntaxTree,
    start: usize,
    words: &[&str],
    offset: usize,
    out: &mut Vec<Constituent>,
) -> usize {
    match node {
        SyntaxTree::Preterminal { .. } => 1,
        SyntaxTree::Phrase { label, children } => {
            let slot = out.len();
            if !is_wrapper_label(label) {
                // Placeholder so parents precede children in the output.
                out.push(Constituent::new(label.as_str(), 0, 0, Vec::new()));
            }
            let mut end = start;
            for c in children {
                end += collect(c, end, words, offset, out);
            }
            if !is_wrapper_label(label) {
                let entry = &mut out[slot];
                entry.start = start + offset;
                entry.end = end + offset;
                entry.tokens = words[start..end].iter().map(|w| w.to_string()).collect();
            }
            end - start
        }
    }
}

/// Re-expresses raw token spans in alignment-unit coordinates.
///
/// A span starts at the unit holding its first token and ends after the unit
/// holding its last token, so a boundary falling inside a unit widens to the
/// unit's edges. `forms` are the side's raw word forms; each constituent's
/// tokens become the covered units' word groups joined with spaces.
pub fn remap_to_alignment_units(
    raw: &ConstituentSet,
    units: &[AlignmentUnit],
    side: Side,
    forms: &[String],
) -> Result<ConstituentSet, ConstituentError> {
    let mut unit_of = vec![usize::MAX; forms.len()];
    for (u, unit) in units.iter().enumerate() {
        for k in side.range(unit) {
            if let Some(slot) = unit_of.get_mut(k) {
                *slot = u;
            }
        }
    }
    let lookup = |index: usize| match unit_of.get(index) {
        Some(&u) if u != usize::MAX => Ok(u),
        _ => Err(ConstituentError::Uncovered { index }),
    };
    let group_text = |u: usize| forms[side.range(&units[u])].join(" ");

    raw.iter()
        .map(|c| {
            let first = lookup(c.start)?;
            let last = lookup(c.end - 1)?;
            Ok(Constituent {
                label: c.label.clone(),
                start: first,
                end: last + 1,
                tokens: (first..=last).map(group_text).collect(),
            })
        })
        .collect::<Result<Vec<_>, _>>()
        .map(|items| ConstituentSet { items })
}
