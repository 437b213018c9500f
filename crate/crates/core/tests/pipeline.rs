//! Pipeline and bootstrap behavior over small corpora built on the fly.

use std::path::{Path, PathBuf};

use bitext_core::corpus::{write_pair_dir, CleanDocument, DocumentPair, Origin};
use bitext_core::pipeline::{
    iterate_bootstrap, run_pipeline, EngineConfig, EngineKind, PipelineConfig, Stage,
};
use bitext_core::LangCode;

fn lang(code: &str) -> LangCode {
    LangCode::new(code).unwrap()
}

fn make_pair(id: &str, pl: &str, en: &str) -> DocumentPair {
    DocumentPair::new(
        id.to_string(),
        CleanDocument {
            lang: lang("pl"),
            title: format!("PL {id}"),
            text: pl.to_string(),
        },
        CleanDocument {
            lang: lang("en"),
            title: format!("EN {id}"),
            text: en.to_string(),
        },
        Origin::Fixture,
        format!("fixture://{id}-pl"),
        format!("fixture://{id}-en"),
    )
    .unwrap()
}

fn base_config(corpus_dir: PathBuf, engine: EngineConfig) -> PipelineConfig {
    let json = serde_json::json!({
        "source_lang": "pl",
        "target_lang": "en",
        "corpus_dir": corpus_dir,
        "engine": {"kind": "gloss", "gloss_lexicon": "placeholder"},
        "window": "unbounded",
    });
    let mut config: PipelineConfig = serde_json::from_value(json).unwrap();
    config.engine = engine;
    config
}

fn write_tm(dir: &Path, rows: &[(&str, &str)]) -> PathBuf {
    let path = dir.join("tm.tsv");
    let body: String = rows.iter().map(|(s, t)| format!("{s}\t{t}\n")).collect();
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn empty_corpus_yields_empty_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let corpus = tmp.path().join("corpus");
    std::fs::create_dir_all(&corpus).unwrap();
    let tm = write_tm(tmp.path(), &[("Ala ma kota.", "Ala has a cat.")]);
    let config = base_config(
        corpus,
        EngineConfig {
            kind: EngineKind::Memory,
            translation_memory: Some(tm),
            gloss_lexicon: None,
            command: None,
        },
    );
    let out = tmp.path().join("out");
    let report = run_pipeline(&config, &out).unwrap();
    assert!(report.rows.is_empty());
    assert_eq!(report.totals.accepted, 0);
    assert_eq!(std::fs::read_to_string(out.join("corpus.pl")).unwrap(), "");
    assert_eq!(std::fs::read_to_string(out.join("corpus.en")).unwrap(), "");
}

#[test]
fn skipping_a_stage_without_artifacts_is_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let corpus = tmp.path().join("corpus");
    std::fs::create_dir_all(&corpus).unwrap();
    write_pair_dir(&corpus, &make_pair("0001-doc", "Kot pije.", "Cat drinks.")).unwrap();
    let tm = write_tm(tmp.path(), &[("Kot pije.", "Cat drinks.")]);
    let mut config = base_config(
        corpus,
        EngineConfig {
            kind: EngineKind::Memory,
            translation_memory: Some(tm),
            gloss_lexicon: None,
            command: None,
        },
    );
    config.stages = Some(vec![Stage::Filter, Stage::Report]);
    let err = run_pipeline(&config, &tmp.path().join("out")).unwrap_err();
    assert!(err.is_config(), "expected a config error, got {err}");
}

#[test]
fn rerunning_only_downstream_stages_reproduces_the_report() {
    let tmp = tempfile::tempdir().unwrap();
    let corpus = tmp.path().join("corpus");
    std::fs::create_dir_all(&corpus).unwrap();
    write_pair_dir(
        &corpus,
        &make_pair(
            "0001-doc",
            "Kot pije mleko. Pies widzi dom.",
            "Cat drinks milk. Dog sees home.",
        ),
    )
    .unwrap();
    let tm = write_tm(
        tmp.path(),
        &[
            ("Kot pije mleko.", "Cat drinks milk."),
            ("Pies widzi dom.", "Dog sees home."),
        ],
    );
    let config = base_config(
        corpus,
        EngineConfig {
            kind: EngineKind::Memory,
            translation_memory: Some(tm),
            gloss_lexicon: None,
            command: None,
        },
    );
    let out = tmp.path().join("out");
    let first = run_pipeline(&config, &out).unwrap();
    let report_bytes = std::fs::read(out.join("mining_report.json")).unwrap();

    // Rerun filter and report only, against the existing artifacts.
    let mut partial = config.clone();
    partial.stages = Some(vec![Stage::Filter, Stage::Report]);
    let second = run_pipeline(&partial, &out).unwrap();
    assert_eq!(first.totals, second.totals);
    assert_eq!(
        report_bytes,
        std::fs::read(out.join("mining_report.json")).unwrap()
    );
}

#[test]
fn stage_failure_names_stage_and_document() {
    let tmp = tempfile::tempdir().unwrap();
    let corpus = tmp.path().join("corpus");
    std::fs::create_dir_all(&corpus).unwrap();
    write_pair_dir(&corpus, &make_pair("0001-doc", "Kot pije.", "Cat drinks.")).unwrap();
    let config = base_config(
        corpus,
        EngineConfig {
            kind: EngineKind::External,
            translation_memory: None,
            gloss_lexicon: None,
            command: Some("false".to_string()),
        },
    );
    let err = run_pipeline(&config, &tmp.path().join("out")).unwrap_err();
    let message = err.to_string();
    assert!(
        message.contains("translate") && message.contains("0001-doc"),
        "unhelpful stage error: {message}"
    );
}

/// Builds the two-document corpus used by the bootstrap tests: doc one is
/// covered by the translation memory and teaches the word lexicon, doc two
/// only becomes translatable once that lexicon exists.
fn bootstrap_corpus(dir: &Path) -> (PathBuf, PathBuf) {
    let corpus = dir.join("corpus");
    std::fs::create_dir_all(&corpus).unwrap();
    write_pair_dir(
        &corpus,
        &make_pair(
            "0001-teacher",
            "Kot pije mleko. Kot widzi dom. Pies pije woda. Pies widzi mleko.",
            "Cat drinks milk. Cat sees home. Dog drinks water. Dog sees milk.",
        ),
    )
    .unwrap();
    write_pair_dir(
        &corpus,
        &make_pair(
            "0002-student",
            "Kot widzi mleko. Pies pije mleko.",
            "Cat sees milk. Dog drinks milk.",
        ),
    )
    .unwrap();
    let tm = write_tm(
        dir,
        &[
            ("Kot pije mleko.", "Cat drinks milk."),
            ("Kot widzi dom.", "Cat sees home."),
            ("Pies pije woda.", "Dog drinks water."),
            ("Pies widzi mleko.", "Dog sees milk."),
        ],
    );
    (corpus, tm)
}

#[test]
fn bootstrap_second_round_translates_more() {
    let tmp = tempfile::tempdir().unwrap();
    let (corpus, tm) = bootstrap_corpus(tmp.path());
    let config = base_config(
        corpus,
        EngineConfig {
            kind: EngineKind::Memory,
            translation_memory: Some(tm),
            gloss_lexicon: None, // round one has no word knowledge at all
            command: None,
        },
    );
    let out = tmp.path().join("boot");
    let report = iterate_bootstrap(&config, 2, &out).unwrap();

    let summary: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(out.join("bootstrap_summary.json")).unwrap(),
    )
    .unwrap();
    let per_round: Vec<u64> = summary["accepted_per_round"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .collect();
    assert_eq!(per_round.len(), 2);
    assert!(
        per_round[1] > per_round[0],
        "round two should add the student document: {per_round:?}"
    );
    // Round one covers only the four TM sentences; the learned lexicon
    // glosses the student document's two sentences in round two.
    assert_eq!(per_round[0], 4);
    assert_eq!(per_round[1], 6);
    assert_eq!(report.totals.accepted, 6);
}

#[test]
fn bootstrap_single_round_equals_plain_pipeline() {
    let tmp = tempfile::tempdir().unwrap();
    let (corpus, tm) = bootstrap_corpus(tmp.path());
    let config = base_config(
        corpus,
        EngineConfig {
            kind: EngineKind::Memory,
            translation_memory: Some(tm),
            gloss_lexicon: None,
            command: None,
        },
    );
    let plain = tmp.path().join("plain");
    let boot = tmp.path().join("boot");
    let report_plain = run_pipeline(&config, &plain).unwrap();
    let report_boot = iterate_bootstrap(&config, 1, &boot).unwrap();
    assert_eq!(report_plain.totals, report_boot.totals);
    for name in ["corpus.pl", "corpus.en", "mining_report.tsv"] {
        assert_eq!(
            std::fs::read(plain.join(name)).unwrap(),
            std::fs::read(boot.join(name)).unwrap(),
            "{name} differs between pipeline and one-round bootstrap"
        );
    }
}

#[test]
fn bootstrap_stops_early_on_empty_round() {
    let tmp = tempfile::tempdir().unwrap();
    let corpus = tmp.path().join("corpus");
    std::fs::create_dir_all(&corpus).unwrap();
    write_pair_dir(
        &corpus,
        &make_pair("0001-noise", "Żubr żyrafa wydra.", "Quasar nebula pulsar."),
    )
    .unwrap();
    let tm = write_tm(tmp.path(), &[("Niespotykane zdanie.", "Unseen sentence.")]);
    let config = base_config(
        corpus,
        EngineConfig {
            kind: EngineKind::Memory,
            translation_memory: Some(tm),
            gloss_lexicon: None,
            command: None,
        },
    );
    let out = tmp.path().join("boot");
    let report = iterate_bootstrap(&config, 3, &out).unwrap();
    assert_eq!(report.totals.accepted, 0);
    let summary: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(out.join("bootstrap_summary.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(summary["rounds_run"], 1);
    assert_eq!(summary["stopped_early"], true);
}
