//! Generators for randomized tests: small labeled trees over a fixed token
//! list, and pairs of token or sentence sequences covering the same text with
//! different boundaries.

use jp_evalb_core::SyntaxTree;
use proptest::collection::vec;
use proptest::prelude::*;
use proptest::test_runner::{RngAlgorithm, TestRng};

pub const LABELS: [&str; 6] = ["S", "NP", "VP", "PP", "ADJP", "SBAR"];
pub const TAGS: [&str; 6] = ["NN", "VB", "DT", "IN", "JJ", "."];
pub const WORDS: [&str; 8] = ["the", "cat", "sat", "on", "a", "mat", "today", "."];

/// Cyclic source of bounded choices.
pub struct Tape<'a> {
    data: &'a [u32],
    pos: usize,
}

impl<'a> Tape<'a> {
    pub fn new(data: &'a [u32]) -> Self {
        Tape { data, pos: 0 }
    }

    /// A value in `0..n`.
    pub fn pick(&mut self, n: usize) -> usize {
        if self.data.is_empty() || n <= 1 {
            return 0;
        }
        let v = self.data[self.pos % self.data.len()];
        self.pos += 1;
        v as usize % n
    }
}

const MAX_DEPTH: usize = 5;

/// A tree whose leaves are `words` in order and whose root is a phrase.
pub fn build_tree(words: &[String], tape: &mut Tape<'_>) -> SyntaxTree {
    assert!(!words.is_empty());
    build(words, 0, words.len(), 0, tape)
}

fn build(words: &[String], lo: usize, hi: usize, depth: usize, tape: &mut Tape<'_>) -> SyntaxTree {
    let n = hi - lo;
    if n == 1 && depth > 0 && (depth >= MAX_DEPTH || tape.pick(3) != 0) {
        return SyntaxTree::preterminal(TAGS[tape.pick(TAGS.len())], words[lo].clone());
    }
    let label = LABELS[tape.pick(LABELS.len())];
    if depth >= MAX_DEPTH {
        let children = (lo..hi)
            .map(|k| SyntaxTree::preterminal(TAGS[tape.pick(TAGS.len())], words[k].clone()))
            .collect();
        return SyntaxTree::phrase(label, children);
    }
    // Split [lo, hi) into 1..=3 nonempty parts.
    let parts = 1 + tape.pick(n.min(3));
    let mut cuts: Vec<usize> = Vec::new();
    while cuts.len() + 1 < parts {
        let c = lo + 1 + tape.pick(n - 1);
        // A cyclic tape can repeat itself, so fall back to the first free cut.
        let c = if cuts.contains(&c) {
            (lo + 1..hi).find(|x| !cuts.contains(x)).unwrap()
        } else {
            c
        };
        cuts.push(c);
    }
    cuts.sort_unstable();
    let mut bounds = vec![lo];
    bounds.extend(cuts);
    bounds.push(hi);
    let children = bounds
        .windows(2)
        .map(|w| build(words, w[0], w[1], depth + 1, tape))
        .collect();
    SyntaxTree::phrase(label, children)
}

fn pick_words(choices: &[u32]) -> Vec<String> {
    choices
        .iter()
        .map(|&c| WORDS[c as usize % WORDS.len()].to_string())
        .collect()
}

/// Two independently shaped trees over one shared token list of at most
/// `max_tokens` words.
pub fn tree_pair(max_tokens: usize) -> impl Strategy<Value = (SyntaxTree, SyntaxTree)> {
    (
        vec(any::<u32>(), 1..=max_tokens),
        vec(any::<u32>(), 48),
        vec(any::<u32>(), 48),
    )
        .prop_map(|(w, a, b)| {
            let words = pick_words(&w);
            (
                build_tree(&words, &mut Tape::new(&a)),
                build_tree(&words, &mut Tape::new(&b)),
            )
        })
}

/// A file of 1..=`max_sentences` trees, each with at most `max_tokens` words.
pub fn treebank(max_sentences: usize, max_tokens: usize) -> impl Strategy<Value = Vec<SyntaxTree>> {
    vec(
        (vec(any::<u32>(), 1..=max_tokens), vec(any::<u32>(), 48)),
        1..=max_sentences,
    )
    .prop_map(|sents| {
        sents
            .iter()
            .map(|(w, t)| build_tree(&pick_words(w), &mut Tape::new(t)))
            .collect()
    })
}

/// Splits `text` before every character whose flag is set. The first flag is
/// ignored, so every piece is nonempty.
pub fn split_at_flags(text: &str, flags: &[bool]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for (k, ch) in text.chars().enumerate() {
        if k == 0 || flags.get(k).copied().unwrap_or(false) {
            out.push(String::new());
        }
        out.last_mut().unwrap().push(ch);
    }
    out
}

/// Groups `items` into consecutive nonempty runs, starting a new run before
/// every item whose flag is set.
pub fn group_at_flags<T: Clone>(items: &[T], flags: &[bool]) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = Vec::new();
    for (k, item) in items.iter().enumerate() {
        if k == 0 || flags.get(k).copied().unwrap_or(false) {
            out.push(Vec::new());
        }
        out.last_mut().unwrap().push(item.clone());
    }
    out
}

fn lowercase_text(max_chars: usize) -> impl Strategy<Value = String> {
    proptest::string::string_regex(&format!("[a-e]{{1,{max_chars}}}")).unwrap()
}

/// Two tokenizations of one lowercase string.
pub fn retokenization(max_chars: usize) -> impl Strategy<Value = (Vec<String>, Vec<String>)> {
    lowercase_text(max_chars).prop_flat_map(|text| {
        let n = text.chars().count();
        (vec(any::<bool>(), n), vec(any::<bool>(), n))
            .prop_map(move |(a, b)| (split_at_flags(&text, &a), split_at_flags(&text, &b)))
    })
}

/// Two sentence segmentations of one text, each side also tokenized
/// differently.
pub fn resegmentation(
    max_chars: usize,
) -> impl Strategy<Value = (Vec<Vec<String>>, Vec<Vec<String>>)> {
    lowercase_text(max_chars).prop_flat_map(|text| {
        let n = text.chars().count();
        (
            vec(any::<bool>(), n),
            vec(any::<bool>(), n),
            vec(prop::bool::weighted(0.25), n),
            vec(prop::bool::weighted(0.25), n),
        )
            .prop_map(move |(ta, tb, sa, sb)| {
                let gold = split_at_flags(&text, &ta);
                let sys = split_at_flags(&text, &tb);
                (group_at_flags(&gold, &sa), group_at_flags(&sys, &sb))
            })
    })
}

const VOCAB: [&str; 40] = [
    "the",
    "a",
    "market",
    "shares",
    "rose",
    "fell",
    "investors",
    "said",
    "company",
    "its",
    "of",
    "in",
    "to",
    "and",
    "for",
    "on",
    "price",
    "year",
    "new",
    "bonds",
    "trading",
    "week",
    "analysts",
    "expected",
    "sales",
    "quarter",
    "profit",
    "billion",
    "million",
    "stock",
    "exchange",
    "rates",
    "bank",
    "federal",
    "last",
    "about",
    "than",
    "more",
    "n't",
    ".",
];

/// Paired gold and system treebank texts, one tree per line.
#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    pub gold: String,
    pub system: String,
    pub gold_sentences: usize,
}

/// A reproducible corpus of `pairs` gold sentences of 5 to 44 words. The
/// system side re-parses every sentence with a different shape, glues some
/// adjacent words together and splits every 40th sentence in two, so both
/// word and sentence alignment are exercised.
pub fn synthetic_corpus(pairs: usize, seed: u8) -> SyntheticCorpus {
    let mut rng = TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]);
    let tape = |rng: &mut TestRng| -> Vec<u32> { (0..64).map(|_| rng.next_u32()).collect() };
    let mut gold = String::new();
    let mut system = String::new();
    for k in 0..pairs {
        let len = 5 + rng.next_u32() as usize % 40;
        let words: Vec<String> = (0..len)
            .map(|_| VOCAB[rng.next_u32() as usize % VOCAB.len()].to_string())
            .collect();
        let g = build_tree(&words, &mut Tape::new(&tape(&mut rng)));
        gold.push_str(&g.to_string());
        gold.push('\n');

        let mut sys_words: Vec<String> = Vec::with_capacity(len);
        for w in &words {
            match sys_words.last_mut() {
                Some(prev) if rng.next_u32().is_multiple_of(15) => prev.push_str(w),
                _ => sys_words.push(w.clone()),
            }
        }
        let parts: Vec<&[String]> = if k % 40 == 39 && sys_words.len() >= 2 {
            let mid = sys_words.len() / 2;
            vec![&sys_words[..mid], &sys_words[mid..]]
        } else {
            vec![&sys_words[..]]
        };
        for part in parts {
            let t = build_tree(part, &mut Tape::new(&tape(&mut rng)));
            system.push_str(&t.to_string());
            system.push('\n');
        }
    }
    SyntheticCorpus {
        gold,
        system,
        gold_sentences: pairs,
    }
}
