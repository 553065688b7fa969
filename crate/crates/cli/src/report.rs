//! evalb-style report text.

use std::fmt::Write as _;

use jp_evalb_core::{CorpusSummary, Rate, SentenceScore, SummaryBlock};

const RULE: &str = "============================================================================";

pub const HEADER: &str =
    "  Sent.                        Matched  Bracket   Cross        Correct Tag\n \
ID  Len.  Stat. Recal  Prec.  Bracket gold test Bracket Words  Tags Accracy\n";

/// One per-sentence line, without the trailing newline.
pub fn format_row(s: &SentenceScore) -> String {
    format!(
        "{:4}  {:3}    {}  {:>6} {:>6}  {:3}    {:3}  {:3}    {:3}  {:4}  {:4}   {:>6}",
        s.id,
        s.length,
        s.status.code(),
        s.recall().as_percent(),
        s.precision().as_percent(),
        s.matched,
        s.gold_brackets,
        s.test_brackets,
        s.crossing,
        s.words,
        s.correct_tags,
        s.tag_accuracy().as_percent(),
    )
}

pub fn format_header() -> String {
    format!("{HEADER}{RULE}\n")
}

/// Column totals line preceded by the closing rule.
pub fn format_totals(all: &SummaryBlock) -> String {
    let mut out = format!("{RULE}\n");
    if all.total_gold > 0 && all.total_test > 0 {
        let _ = write!(
            out,
            "                {:>6} {:>6} {:6} {:5} {:5}  {:5}",
            all.recall().as_percent(),
            all.precision().as_percent(),
            all.total_matched,
            all.total_gold,
            all.total_test,
            all.total_crossing,
        );
    }
    let _ = writeln!(
        out,
        "  {:5} {:5}   {:>6}",
        all.words,
        all.correct_tags,
        all.tagging_accuracy().as_percent()
    );
    out
}

fn count(n: usize) -> String {
    format!("{n:6}")
}

fn pct(r: Rate) -> String {
    format!("{:>6}", r.as_percent())
}

fn format_block(out: &mut String, b: &SummaryBlock) {
    let lines = [
        ("Number of sentence", count(b.sentences)),
        ("Number of Error sentence", count(b.error_sentences)),
        ("Number of Skip  sentence", count(b.skip_sentences)),
        ("Number of Valid sentence", count(b.valid_sentences)),
        ("Bracketing Recall", pct(b.recall())),
        ("Bracketing Precision", pct(b.precision())),
        ("Bracketing FMeasure", pct(b.f1())),
        ("Complete match", pct(b.complete_match())),
        (
            "Average crossing",
            format!("{:>6}", b.average_crossing().as_plain()),
        ),
        ("No crossing", pct(b.no_crossing_rate())),
        ("2 or less crossing", pct(b.two_or_less_crossing_rate())),
        ("Tagging accuracy", pct(b.tagging_accuracy())),
    ];
    for (name, value) in lines {
        let _ = writeln!(out, "{name:<26}= {value}");
    }
}

pub fn format_summary(summary: &CorpusSummary) -> String {
    let mut out = String::from("=== Summary ===\n\n-- All --\n");
    format_block(&mut out, &summary.all);
    let _ = write!(out, "\n-- len<={} --\n", summary.cutoff);
    format_block(&mut out, &summary.within_cutoff);
    out
}

/// Header, rows, totals and summary.
pub fn format_report(rows: &[SentenceScore], summary: &CorpusSummary) -> String {
    let mut out = format_header();
    for r in rows {
        out.push_str(&format_row(r));
        out.push('\n');
    }
    out.push_str(&format_totals(&summary.all));
    out.push_str(&format_summary(summary));
    out
}
