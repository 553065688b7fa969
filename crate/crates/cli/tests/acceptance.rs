//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::fs;
use std::panic;
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use jp_evalb::{run, RunConfig};
use jp_evalb_core::{
    align_sentences, align_words, apply_param_filters, count_crossing, count_matched, evaluate,
    evaluate_legacy, extract_constituents, parse_bracketed, score_group, summarize, AlignmentUnit,
    ConstituentSet, ParamSet, SentenceScore, SimilarityConfig, Status, SyntaxTree,
};
use jp_evalb_testkit::{resegmentation, retokenization, synthetic_corpus, tree_pair, treebank};
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

const PROPERTY_CASES: u32 = 1000;
const PERCENT_TOLERANCE: f64 = 0.01;
const FIXTURE_TIME_LIMIT: Duration = Duration::from_secs(1);
const CORPUS_TIME_LIMIT: Duration = Duration::from_secs(5);
const CORPUS_PAIRS: usize = 2416;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn testdata(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/testdata")
        .join(name)
}

fn trees(name: &str) -> Vec<SyntaxTree> {
    parse_bracketed(&fs::read_to_string(testdata(name)).unwrap()).unwrap()
}

fn native_rows(stem: &str) -> Vec<SentenceScore> {
    let gold = trees(&format!("{stem}.gold"));
    let sys = trees(&format!("{stem}.sys"));
    evaluate(&gold, &sys, &SimilarityConfig::default()).unwrap()
}

fn within(actual: f64, expected: f64) -> bool {
    (actual - expected).abs() <= PERCENT_TOLERANCE
}

fn triples(set: &ConstituentSet) -> Vec<(String, usize, usize)> {
    set.iter()
        .map(|c| (c.label.clone(), c.start, c.end))
        .collect()
}

fn owned(items: &[(&str, usize, usize)]) -> Vec<(String, usize, usize)> {
    items
        .iter()
        .map(|&(l, s, e)| (l.to_string(), s, e))
        .collect()
}

fn runner() -> TestRunner {
    let config = Config {
        cases: PROPERTY_CASES,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn run_cli(args: &[&str]) -> (Option<i32>, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_jp-evalb"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn row_line(report: &str, id: usize) -> Option<String> {
    let prefix = format!("{id:4} ");
    report
        .lines()
        .find(|l| l.starts_with(&prefix))
        .map(str::to_string)
}

fn contraction_fixture() -> Check {
    let (gold, sys) = (testdata("contraction.gold"), testdata("contraction.sys"));
    let start = Instant::now();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let status = run(&RunConfig::native(&gold, &sys), &mut out, &mut err);
    let elapsed = start.elapsed();
    ensure!(status == 0, "exit status {status}");
    let rows = native_rows("contraction");
    let r = &rows[0];
    ensure!(
        (r.matched, r.gold_brackets, r.test_brackets) == (5, 5, 5),
        "counts {}/{}/{}",
        r.matched,
        r.gold_brackets,
        r.test_brackets
    );
    let line = row_line(&String::from_utf8(out).unwrap(), 1).ok_or("no row 1")?;
    let cols: Vec<&str> = line.split_whitespace().collect();
    ensure!(
        cols[3..8] == ["100.00", "100.00", "5", "5", "5"],
        "row `{line}`"
    );
    ensure!(elapsed < FIXTURE_TIME_LIMIT, "took {elapsed:?}");
    Ok(format!(
        "matched 5 gold 5 test 5, P=R=100.00, {elapsed:.2?}"
    ))
}

fn morphology_fixture() -> Check {
    let r = &native_rows("morphology")[0];
    let (p, rc) = (r.precision().percent(), r.recall().percent());
    ensure!(
        (r.matched, r.test_brackets, r.gold_brackets) == (4, 4, 6),
        "counts {r:?}"
    );
    ensure!(
        within(p, 100.0) && r.precision().as_percent().to_string() == "100.00",
        "P {p}"
    );
    ensure!(
        within(rc, 66.67) && r.recall().as_percent().to_string() == "66.67",
        "R {rc}"
    );
    Ok(format!(
        "P 4/4 = {}, R 4/6 = {}",
        r.precision().as_percent(),
        r.recall().as_percent()
    ))
}

fn sentence_split_fixture() -> Check {
    let rows = native_rows("sentence_split");
    ensure!(rows.len() == 1, "{} rows", rows.len());
    let r = &rows[0];
    let (p, rc) = (r.precision().percent(), r.recall().percent());
    ensure!(
        (r.matched, r.test_brackets, r.gold_brackets) == (5, 8, 7),
        "counts {r:?}"
    );
    ensure!(
        within(p, 62.50) && r.precision().as_percent().to_string() == "62.50",
        "P {p}"
    );
    ensure!(
        within(rc, 71.43) && r.recall().as_percent().to_string() == "71.43",
        "R {rc}"
    );
    Ok(format!(
        "P 5/8 = {}, R 5/7 = {}",
        r.precision().as_percent(),
        r.recall().as_percent()
    ))
}

fn constituent_lists() -> Check {
    let gold = trees("one_tag_off.gold").remove(0);
    let native = extract_constituents(&gold, 0);
    let expected_native = owned(&[
        ("S", 0, 8),
        ("INTJ", 0, 1),
        ("NP", 2, 3),
        ("VP", 3, 7),
        ("NP", 5, 7),
    ]);
    ensure!(
        triples(&native) == expected_native,
        "native {:?}",
        triples(&native)
    );
    ensure!(
        gold.word_count() == 8,
        "native tokens {}",
        gold.word_count()
    );

    let filtered = apply_param_filters(&gold, &ParamSet::default());
    let expected_legacy = owned(&[
        ("S", 0, 6),
        ("INTJ", 0, 1),
        ("NP", 1, 2),
        ("VP", 2, 6),
        ("NP", 4, 6),
    ]);
    ensure!(
        triples(&filtered.constituents) == expected_legacy,
        "legacy {:?}",
        triples(&filtered.constituents)
    );
    ensure!(
        filtered.leaves.len() == 6,
        "legacy words {}",
        filtered.leaves.len()
    );
    Ok("5 native over 8 tokens, 5 legacy over 6 words".into())
}

fn one_tag_off_row() -> Check {
    let (g, s) = (testdata("one_tag_off.gold"), testdata("one_tag_off.sys"));
    let (g, s) = (g.to_str().unwrap(), s.to_str().unwrap());

    let (code, native, _) = run_cli(&[g, s]);
    ensure!(code == Some(0), "native exit {code:?}");
    let line = row_line(&native, 1).ok_or("no native row")?;
    let cols: Vec<&str> = line.split_whitespace().collect();
    ensure!(cols[9..12] == ["8", "7", "87.50"], "native row `{line}`");

    let (code, legacy, _) = run_cli(&[g, s, "--evalb"]);
    ensure!(code == Some(0), "legacy exit {code:?}");
    let line = row_line(&legacy, 1).ok_or("no legacy row")?;
    let cols: Vec<&str> = line.split_whitespace().collect();
    ensure!(cols[9..12] == ["6", "5", "83.33"], "legacy row `{line}`");

    let reference_path =
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/one_tag_off.evalb.row");
    let reference = fs::read_to_string(reference_path).unwrap();
    ensure!(
        format!("{line}\n") == reference,
        "legacy row `{line}` differs from reference `{}`",
        reference.trim_end()
    );
    Ok("native 8 7 87.50, legacy 6 5 83.33, legacy row byte-identical".into())
}

fn covers_in_order(units: &[AlignmentUnit], gold_len: usize, sys_len: usize) -> bool {
    let (mut g, mut s) = (0, 0);
    for u in units {
        if u.gold.start != g || u.sys.start != s || u.gold.is_empty() || u.sys.is_empty() {
            return false;
        }
        g = u.gold.end;
        s = u.sys.end;
    }
    g == gold_len && s == sys_len
}

fn rejoined<T: Clone>(items: &[T], units: &[AlignmentUnit], gold: bool) -> Vec<T> {
    units
        .iter()
        .flat_map(|u| items[if gold { u.gold.clone() } else { u.sys.clone() }].to_vec())
        .collect()
}

fn alignment_properties() -> Check {
    let cfg = SimilarityConfig::default();
    runner()
        .run(&retokenization(30), |(gold, sys)| {
            let units =
                align_words(&gold, &sys, &cfg).map_err(|e| TestCaseError::fail(e.to_string()))?;
            if !covers_in_order(&units, gold.len(), sys.len())
                || rejoined(&gold, &units, true) != gold
                || rejoined(&sys, &units, false) != sys
            {
                return Err(TestCaseError::fail(format!("words {gold:?} / {sys:?}")));
            }
            let own = align_words(&gold, &gold, &cfg).unwrap();
            if own.len() != gold.len() || !own.iter().all(AlignmentUnit::is_one_to_one) {
                return Err(TestCaseError::fail(format!("self-alignment of {gold:?}")));
            }
            Ok(())
        })
        .map_err(|e| format!("word alignment: {e}"))?;
    runner()
        .run(&resegmentation(60), |(gold, sys)| {
            let units = align_sentences(&gold, &sys, &cfg)
                .map_err(|e| TestCaseError::fail(e.to_string()))?;
            if !covers_in_order(&units, gold.len(), sys.len())
                || rejoined(&gold, &units, true) != gold
                || rejoined(&sys, &units, false) != sys
            {
                return Err(TestCaseError::fail(format!("sentences {gold:?} / {sys:?}")));
            }
            let own = align_sentences(&gold, &gold, &cfg).unwrap();
            if own.len() != gold.len() || !own.iter().all(AlignmentUnit::is_one_to_one) {
                return Err(TestCaseError::fail(format!("self-alignment of {gold:?}")));
            }
            Ok(())
        })
        .map_err(|e| format!("sentence alignment: {e}"))?;
    Ok(format!(
        "{PROPERTY_CASES} re-tokenizations + {PROPERTY_CASES} re-segmentations, 0 failures"
    ))
}

fn brute_force_matched(gold: &ConstituentSet, sys: &ConstituentSet) -> usize {
    let mut used = vec![false; gold.len()];
    let mut matched = 0;
    for t in sys.iter() {
        let hit = gold.iter().enumerate().position(|(k, g)| {
            !used[k] && (g.label.as_str(), g.start, g.end) == (t.label.as_str(), t.start, t.end)
        });
        if let Some(k) = hit {
            used[k] = true;
            matched += 1;
        }
    }
    matched
}

fn scoring_properties() -> Check {
    let cfg = SimilarityConfig::default();
    runner()
        .run(&tree_pair(8), |(gold, sys)| {
            let g = extract_constituents(&gold, 0);
            let s = extract_constituents(&sys, 0);
            let expected = brute_force_matched(&g, &s);
            let scored = score_group(1, &[gold], &[sys], &cfg).unwrap();
            if count_matched(&g, &s) != expected || scored.score.matched != expected {
                return Err(TestCaseError::fail(format!("{g:?} vs {s:?}")));
            }
            Ok(())
        })
        .map_err(|e| format!("oracle: {e}"))?;
    runner()
        .run(&treebank(6, 8), |file| {
            let rows = evaluate(&file, &file, &cfg).unwrap();
            let all = summarize(&rows, 40).all;
            let crossing: usize = rows.iter().map(|r| r.crossing).sum();
            if all.f1().as_percent().to_string() != "100.00" || crossing != 0 {
                return Err(TestCaseError::fail(format!("self-evaluation of {file:?}")));
            }
            let set = extract_constituents(&file[0], 0);
            if count_crossing(&set, &set) != 0 {
                return Err(TestCaseError::fail("crossing against itself"));
            }
            Ok(())
        })
        .map_err(|e| format!("self-evaluation: {e}"))?;
    Ok(format!(
        "{PROPERTY_CASES} oracle pairs + {PROPERTY_CASES} self-evaluations, 0 failures"
    ))
}

fn legacy_status() -> Check {
    let gold = trees("trace.gold");
    let sys = trees("trace.sys");
    let legacy = evaluate_legacy(&gold, &sys, &ParamSet::default()).map_err(|e| e.to_string())?;
    let row = &legacy[0].score;
    ensure!(
        row.status == Status::Error,
        "legacy status {:?}",
        row.status
    );
    ensure!(
        *row == SentenceScore::unscored(1, row.length, Status::Error),
        "metrics not zeroed: {row:?}"
    );
    let native = evaluate(&gold, &sys, &SimilarityConfig::default()).unwrap();
    let n = &native[0];
    ensure!(n.status == Status::Ok, "native status {:?}", n.status);
    ensure!(
        n.gold_brackets > 0 && n.matched > 0 && n.words > 0,
        "native row {n:?}"
    );

    let (g, s) = (testdata("trace.gold"), testdata("trace.sys"));
    let prm = testdata("max_error_zero.prm");
    let (code, out, err) = run_cli(&[
        g.to_str().unwrap(),
        s.to_str().unwrap(),
        "--evalb",
        prm.to_str().unwrap(),
    ]);
    ensure!(code == Some(1), "abort exit {code:?}");
    ensure!(
        row_line(&out, 1).is_some() && row_line(&out, 2).is_none(),
        "rows after abort:\n{out}"
    );
    ensure!(err.contains("too many errors"), "stderr `{err}`");
    Ok(format!(
        "legacy status 2 with zeroed row, native {}/{}/{}, MAX_ERROR 0 aborts with exit 1",
        n.matched, n.gold_brackets, n.test_brackets
    ))
}

fn corpus_performance() -> Check {
    let corpus = synthetic_corpus(CORPUS_PAIRS, 23);
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (gold, sys) = (dir.path().join("gold.mrg"), dir.path().join("sys.mrg"));
    fs::write(&gold, &corpus.gold).unwrap();
    fs::write(&sys, &corpus.system).unwrap();

    let start = Instant::now();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let status = run(&RunConfig::native(&gold, &sys), &mut out, &mut err);
    let elapsed = start.elapsed();
    ensure!(
        status == 0,
        "exit {status}: {}",
        String::from_utf8_lossy(&err)
    );
    let report = String::from_utf8(out).unwrap();
    let sentences = report
        .lines()
        .find(|l| l.starts_with("Number of sentence"))
        .ok_or("no summary")?;
    ensure!(elapsed < CORPUS_TIME_LIMIT, "took {elapsed:.2?}");
    Ok(format!(
        "{} gold pairs in {elapsed:.2?} ({})",
        corpus.gold_sentences,
        sentences.split_whitespace().collect::<Vec<_>>().join(" ")
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (
            "contraction fixture scores 5/5/5 within 1 s",
            contraction_fixture,
        ),
        ("morphology fixture P 100.00 R 66.67", morphology_fixture),
        (
            "sentence-split fixture P 62.50 R 71.43",
            sentence_split_fixture,
        ),
        ("native and legacy constituent lists", constituent_lists),
        ("one-tag-off row parity", one_tag_off_row),
        ("alignment properties", alignment_properties),
        ("scoring oracle and self-evaluation", scoring_properties),
        ("legacy error status and MAX_ERROR abort", legacy_status),
        ("2416-pair corpus under 5 s", corpus_performance),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(check).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name} [{detail}]", k + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL criterion {}: {name} [{why}]", k + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
