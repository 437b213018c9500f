//! Pipeline orchestration: crawl → segment → align → translate → filter →
//! report, with per-stage artifacts on disk so any stage can be rerun
//! independently, plus the bootstrap loop that feeds mined pairs back into
//! the aligner and gloss lexicons.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Duration;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::align::{
    align_two_pass, alignment_from_tsv, alignment_to_tsv, build_auto_lexicon, AlignerConfig,
    Lexicon, SentenceAlignment,
};
use crate::corpus::{
    read_corpus_dir, to_document_pairs, write_pair_dir, CleanRules, Crawler, FixtureFetcher,
    HttpFetcher, Origin,
};
use crate::error::{Error, Result};
use crate::filter::{
    accepted_to_tsv, filter_corpus, FilterOptions, FilterReport, TierLadder, WindowPolicy,
};
use crate::lang::LangCode;
use crate::text::{segment_sentences, AbbreviationList, Sentence, StopwordSet, SynonymLexicon};
use crate::translate::{
    translate_lines, Engine, GlossEngine, LineTranslator, MemoryEngine, TranslationCache,
    TranslationRequest,
};

/// The pipeline stages, in execution order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Crawl,
    Segment,
    Align,
    Translate,
    Filter,
    Report,
}

impl Stage {
    pub const ALL: [Stage; 6] = [
        Stage::Crawl,
        Stage::Segment,
        Stage::Align,
        Stage::Translate,
        Stage::Filter,
        Stage::Report,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Crawl => "crawl",
            Stage::Segment => "segment",
            Stage::Align => "align",
            Stage::Translate => "translate",
            Stage::Filter => "filter",
            Stage::Report => "report",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EngineKind {
    Memory,
    Gloss,
    External,
}

/// Which translation engine the pipeline drives.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EngineConfig {
    pub kind: EngineKind,
    /// TSV translation memory (memory engine).
    #[serde(default)]
    pub translation_memory: Option<PathBuf>,
    /// Word lexicon for the gloss engine or the memory engine's fallback.
    #[serde(default)]
    pub gloss_lexicon: Option<PathBuf>,
    /// Shell command reading lines on stdin, writing translations on stdout.
    #[serde(default)]
    pub command: Option<String>,
}

/// Optional crawl stage settings.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrawlSettings {
    pub seed: String,
    pub max_articles: usize,
    #[serde(default)]
    pub delay_ms: u64,
    /// Directory behind `fixture://` URLs; live HTTP when absent.
    #[serde(default)]
    pub fixtures_dir: Option<PathBuf>,
}

/// The whole pipeline configuration, deserialized from JSON.
///
/// Relative paths are resolved against the config file's directory at load
/// time. See `configs/pipeline.schema.json` for the shape.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub source_lang: LangCode,
    pub target_lang: LangCode,
    /// Directory of document-pair directories (the crawl stage populates it
    /// when configured).
    pub corpus_dir: PathBuf,
    pub engine: EngineConfig,
    #[serde(default)]
    pub crawl: Option<CrawlSettings>,
    /// HTML cleaning rules for the crawl stage.
    #[serde(default)]
    pub clean_rules: Option<PathBuf>,
    /// Stages to run; omitted means all. Skipped stages must have artifacts
    /// from a previous run with this same config.
    #[serde(default)]
    pub stages: Option<Vec<Stage>>,
    #[serde(default)]
    pub aligner: AlignerConfig,
    /// External lexicon fed to the aligner's first pass.
    #[serde(default)]
    pub aligner_lexicon: Option<PathBuf>,
    /// Tier ladder file; the built-in default ladder when omitted.
    #[serde(default)]
    pub tiers_file: Option<PathBuf>,
    #[serde(default)]
    pub window: WindowPolicy,
    /// Stopwords removed before comparisons (target-language list).
    #[serde(default)]
    pub filter_stopwords: Option<PathBuf>,
    /// Synonym lexicon for the synonym_ratio comparator.
    #[serde(default)]
    pub synonyms: Option<PathBuf>,
    #[serde(default = "default_max_variants")]
    pub max_variants: usize,
    #[serde(default)]
    pub abbreviations_source: Option<PathBuf>,
    #[serde(default)]
    pub abbreviations_target: Option<PathBuf>,
    /// Translation cache directory; `<out_dir>/cache` when omitted.
    #[serde(default)]
    pub cache_dir: Option<PathBuf>,
    /// Reserved for stages that sample; nothing in the current pipeline
    /// draws random numbers.
    #[serde(default)]
    pub seed: u64,
}

fn default_max_variants() -> usize {
    64
}

impl PipelineConfig {
    /// Parses the JSON config and resolves its relative paths against the
    /// config file's directory.
    pub fn from_file(path: &Path) -> Result<Self> {
        let body = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut config: PipelineConfig = serde_json::from_str(&body)
            .map_err(|e| Error::config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        config.resolve_paths(base);
        Ok(config)
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&p);
            }
        };
        fix(&mut self.corpus_dir);
        for opt in [
            &mut self.clean_rules,
            &mut self.aligner_lexicon,
            &mut self.tiers_file,
            &mut self.filter_stopwords,
            &mut self.synonyms,
            &mut self.abbreviations_source,
            &mut self.abbreviations_target,
            &mut self.cache_dir,
            &mut self.engine.translation_memory,
            &mut self.engine.gloss_lexicon,
        ] {
            if let Some(p) = opt.as_mut() {
                fix(p);
            }
        }
        if let Some(crawl) = self.crawl.as_mut() {
            if let Some(p) = crawl.fixtures_dir.as_mut() {
                fix(p);
            }
        }
    }

    /// Checks referenced files, thresholds, and engine coherence.
    pub fn validate(&self) -> Result<()> {
        if self.source_lang == self.target_lang {
            return Err(Error::config("source_lang and target_lang must differ"));
        }
        self.aligner.validate()?;
        if self.max_variants == 0 {
            return Err(Error::config("max_variants must be at least 1"));
        }
        match self.engine.kind {
            EngineKind::Memory => {
                if self.engine.translation_memory.is_none() {
                    return Err(Error::config(
                        "engine.kind = memory requires engine.translation_memory",
                    ));
                }
            }
            EngineKind::Gloss => {
                if self.engine.gloss_lexicon.is_none() {
                    return Err(Error::config(
                        "engine.kind = gloss requires engine.gloss_lexicon",
                    ));
                }
            }
            EngineKind::External => {
                if self.engine.command.is_none() {
                    return Err(Error::config("engine.kind = external requires engine.command"));
                }
            }
        }
        if self.crawl.is_none() && !self.corpus_dir.is_dir() {
            return Err(Error::config(format!(
                "corpus_dir {} does not exist (and no crawl stage is configured)",
                self.corpus_dir.display()
            )));
        }
        for (name, path) in [
            ("clean_rules", &self.clean_rules),
            ("aligner_lexicon", &self.aligner_lexicon),
            ("tiers_file", &self.tiers_file),
            ("filter_stopwords", &self.filter_stopwords),
            ("synonyms", &self.synonyms),
            ("abbreviations_source", &self.abbreviations_source),
            ("abbreviations_target", &self.abbreviations_target),
            ("engine.translation_memory", &self.engine.translation_memory),
            ("engine.gloss_lexicon", &self.engine.gloss_lexicon),
        ] {
            if let Some(path) = path {
                if !path.is_file() {
                    return Err(Error::config(format!(
                        "{name} file {} does not exist",
                        path.display()
                    )));
                }
            }
        }
        if let Some(tiers) = &self.tiers_file {
            TierLadder::from_file(tiers)?;
        }
        Ok(())
    }

    /// Identifies this exact configuration in stage stamps and reports.
    pub fn hash(&self) -> String {
        let body = serde_json::to_string(self).expect("config serializes");
        format!("{:x}", Sha256::digest(body.as_bytes()))[..16].to_string()
    }

    fn runs(&self, stage: Stage) -> bool {
        match &self.stages {
            None => !(stage == Stage::Crawl && self.crawl.is_none()),
            Some(stages) => stages.contains(&stage),
        }
    }
}

/// One row of the mining report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocRow {
    pub doc_id: String,
    pub src_sents: usize,
    pub tgt_sents: usize,
    /// Aligner links with both sides non-empty.
    pub aligned: usize,
    pub accepted: usize,
    pub rejected: usize,
    /// Accepted counts per filter tier, in ladder order.
    pub tiers: Vec<usize>,
}

impl DocRow {
    fn zero(doc_id: String, tier_count: usize) -> Self {
        DocRow {
            doc_id,
            src_sents: 0,
            tgt_sents: 0,
            aligned: 0,
            accepted: 0,
            rejected: 0,
            tiers: vec![0; tier_count],
        }
    }

    fn add(&mut self, other: &DocRow) {
        self.src_sents += other.src_sents;
        self.tgt_sents += other.tgt_sents;
        self.aligned += other.aligned;
        self.accepted += other.accepted;
        self.rejected += other.rejected;
        for (t, o) in self.tiers.iter_mut().zip(&other.tiers) {
            *t += o;
        }
    }
}

/// Per-document rows plus corpus totals.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MiningReport {
    pub config_hash: String,
    pub tier_names: Vec<String>,
    pub rows: Vec<DocRow>,
    pub totals: DocRow,
}

impl MiningReport {
    fn assemble(config_hash: String, tier_names: Vec<String>, mut rows: Vec<DocRow>) -> Result<Self> {
        rows.sort_by(|a, b| a.doc_id.cmp(&b.doc_id));
        let mut totals = DocRow::zero("TOTAL".to_string(), tier_names.len());
        for row in &rows {
            if row.accepted + row.rejected != row.src_sents {
                return Err(Error::invalid(format!(
                    "row {} does not balance: {} accepted + {} rejected != {} sources",
                    row.doc_id, row.accepted, row.rejected, row.src_sents
                )));
            }
            totals.add(row);
        }
        let report = MiningReport {
            config_hash,
            tier_names,
            rows,
            totals,
        };
        report.check_totals()?;
        Ok(report)
    }

    /// Totals must equal column sums; checked on every emit.
    pub fn check_totals(&self) -> Result<()> {
        let mut expect = DocRow::zero("TOTAL".to_string(), self.tier_names.len());
        for row in &self.rows {
            expect.add(row);
        }
        if expect != self.totals {
            return Err(Error::invalid("mining report totals do not match rows"));
        }
        Ok(())
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("doc_id\tsrc_sents\ttgt_sents\taligned\taccepted\trejected");
        for i in 1..=self.tier_names.len() {
            out.push_str(&format!("\ttier{i}"));
        }
        out.push('\n');
        for row in self.rows.iter().chain([&self.totals]) {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}",
                row.doc_id, row.src_sents, row.tgt_sents, row.aligned, row.accepted, row.rejected
            ));
            for t in &row.tiers {
                out.push_str(&format!("\t{t}"));
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct StageStamp {
    stage: String,
    config_hash: String,
    docs: usize,
}

fn write_stamp(out_dir: &Path, stage: Stage, config_hash: &str, docs: usize) -> Result<()> {
    let stamp = StageStamp {
        stage: stage.name().to_string(),
        config_hash: config_hash.to_string(),
        docs,
    };
    let path = out_dir.join(format!("{}.stamp.json", stage.name()));
    let body = serde_json::to_string_pretty(&stamp).expect("stamp serializes");
    std::fs::write(&path, body + "\n").map_err(|e| Error::io(&path, e))
}

fn check_stamp(out_dir: &Path, stage: Stage, config_hash: &str) -> Result<()> {
    let path = out_dir.join(format!("{}.stamp.json", stage.name()));
    let body = std::fs::read_to_string(&path).map_err(|_| {
        Error::config(format!(
            "stage {} is skipped but has no artifacts at {}",
            stage.name(),
            path.display()
        ))
    })?;
    let stamp: StageStamp = serde_json::from_str(&body)
        .map_err(|e| Error::config(format!("{}: {e}", path.display())))?;
    if stamp.config_hash != config_hash {
        return Err(Error::config(format!(
            "stage {} artifacts were built with config {}, current config is {}",
            stage.name(),
            stamp.config_hash,
            config_hash
        )));
    }
    Ok(())
}

/// Loaded, validated resources shared across documents.
struct Prepared {
    config: PipelineConfig,
    config_hash: String,
    tiers: TierLadder,
    stopwords: StopwordSet,
    synonyms: SynonymLexicon,
    abbrev_source: AbbreviationList,
    abbrev_target: AbbreviationList,
    aligner_lexicon: Option<Lexicon>,
    engine: Engine,
}

impl Prepared {
    fn new(config: &PipelineConfig) -> Result<Self> {
        config.validate()?;
        let tiers = match &config.tiers_file {
            Some(path) => TierLadder::from_file(path)?,
            None => TierLadder::default(),
        };
        let stopwords = match &config.filter_stopwords {
            Some(path) => StopwordSet::from_file(config.target_lang.clone(), path)?,
            None => StopwordSet::empty(config.target_lang.clone()),
        };
        let synonyms = match &config.synonyms {
            Some(path) => SynonymLexicon::from_file(path)?,
            None => SynonymLexicon::new(),
        };
        let abbrev = |path: &Option<PathBuf>| -> Result<AbbreviationList> {
            Ok(match path {
                Some(p) => AbbreviationList::from_file(p)?,
                None => AbbreviationList::default(),
            })
        };
        let aligner_lexicon = match &config.aligner_lexicon {
            Some(path) => Some(Lexicon::from_file(path)?),
            None => None,
        };
        let engine = build_engine(&config.engine)?;
        Ok(Prepared {
            config: config.clone(),
            config_hash: config.hash(),
            tiers,
            stopwords,
            synonyms,
            abbrev_source: abbrev(&config.abbreviations_source)?,
            abbrev_target: abbrev(&config.abbreviations_target)?,
            aligner_lexicon,
            engine,
        })
    }

    fn filter_options(&self) -> FilterOptions {
        FilterOptions {
            tiers: self.tiers.clone(),
            stopwords: self.stopwords.clone(),
            synonyms: self.synonyms.clone(),
            max_variants: self.config.max_variants,
        }
    }
}

fn build_engine(config: &EngineConfig) -> Result<Engine> {
    Ok(match config.kind {
        EngineKind::Memory => {
            let tm = config
                .translation_memory
                .as_ref()
                .expect("validated: memory engine has a TM");
            let mut engine = MemoryEngine::from_file(tm)?;
            if let Some(lexicon) = &config.gloss_lexicon {
                engine = engine.with_fallback(GlossEngine::from_file(lexicon)?);
            }
            Engine::Memory(engine)
        }
        EngineKind::Gloss => {
            let lexicon = config
                .gloss_lexicon
                .as_ref()
                .expect("validated: gloss engine has a lexicon");
            Engine::Gloss(GlossEngine::from_file(lexicon)?)
        }
        EngineKind::External => Engine::External(crate::translate::ExternalEngine::new(
            config.command.clone().expect("validated: external engine has a command"),
        )),
    })
}

fn stage_err(stage: Stage, doc_id: &str, e: Error) -> Error {
    match e {
        already @ Error::Stage { .. } => already,
        other => Error::Stage {
            stage: stage.name().to_string(),
            doc_id: doc_id.to_string(),
            msg: other.to_string(),
        },
    }
}

fn read_lines(path: &Path) -> Result<Vec<String>> {
    let body = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(body.lines().map(String::from).collect())
}

fn write_lines(path: &Path, lines: &[String]) -> Result<()> {
    let mut body = lines.join("\n");
    if !lines.is_empty() {
        body.push('\n');
    }
    std::fs::write(path, body).map_err(|e| Error::io(path, e))
}

fn doc_dir(out_dir: &Path, doc_id: &str) -> PathBuf {
    out_dir.join("docs").join(doc_id)
}

/// Document ids present under `<out_dir>/docs`, sorted.
fn doc_ids(out_dir: &Path) -> Result<Vec<String>> {
    let docs = out_dir.join("docs");
    if !docs.is_dir() {
        return Ok(Vec::new());
    }
    let mut ids: Vec<String> = std::fs::read_dir(&docs)
        .map_err(|e| Error::io(&docs, e))?
        .filter_map(|e| e.ok())
        .filter(|e| e.path().is_dir())
        .filter_map(|e| e.file_name().to_str().map(String::from))
        .collect();
    ids.sort();
    Ok(ids)
}

/// Runs the configured stages and returns the mining report.
///
/// Artifacts land in `out_dir`: `docs/<id>/` per document (`src.<sl>`,
/// `src.<tl>`, `src.trans`, `alignment.tsv`, `lexicon.auto.tsv`,
/// `accepted.tsv`, `filter_report.json`), plus `corpus.<sl>`, `corpus.<tl>`,
/// `mining_report.json` and `mining_report.tsv` at the top.
pub fn run_pipeline(config: &PipelineConfig, out_dir: &Path) -> Result<MiningReport> {
    let prepared = Prepared::new(config)?;
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let hash = prepared.config_hash.clone();

    for stage in Stage::ALL {
        let wanted = config.runs(stage);
        let relevant = stage != Stage::Crawl || config.crawl.is_some();
        if !relevant {
            continue;
        }
        if !wanted {
            check_stamp(out_dir, stage, &hash)?;
            continue;
        }
        match stage {
            Stage::Crawl => stage_crawl(&prepared)?,
            Stage::Segment => stage_segment(&prepared, out_dir)?,
            Stage::Align => stage_align(&prepared, out_dir)?,
            Stage::Translate => stage_translate(&prepared, out_dir)?,
            Stage::Filter => stage_filter(&prepared, out_dir)?,
            Stage::Report => {
                return stage_report(&prepared, out_dir);
            }
        }
    }
    // Report stage was skipped: reload the existing report.
    let path = out_dir.join("mining_report.json");
    let body = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    serde_json::from_str(&body).map_err(|e| Error::invalid(format!("{}: {e}", path.display())))
}

fn stage_crawl(prepared: &Prepared) -> Result<()> {
    let settings = prepared
        .config
        .crawl
        .as_ref()
        .expect("crawl stage only runs when configured");
    let rules = match &prepared.config.clean_rules {
        Some(path) => CleanRules::from_file(path)?.compile()?,
        None => CleanRules::default().compile()?,
    };
    let raw_pairs = match &settings.fixtures_dir {
        Some(dir) => {
            let fetcher = FixtureFetcher::new(dir);
            Crawler::new(
                fetcher,
                &rules,
                prepared.config.source_lang.clone(),
                prepared.config.target_lang.clone(),
            )
            .crawl_topic(&settings.seed, settings.max_articles)?
        }
        None => {
            let fetcher = HttpFetcher::new(Duration::from_millis(settings.delay_ms))?;
            Crawler::new(
                fetcher,
                &rules,
                prepared.config.source_lang.clone(),
                prepared.config.target_lang.clone(),
            )
            .crawl_topic(&settings.seed, settings.max_articles)?
        }
    };
    let origin = if settings.fixtures_dir.is_some() {
        Origin::Fixture
    } else {
        Origin::Crawled
    };
    let seed_slug = raw_pairs
        .first()
        .map(|(s, _)| crate::corpus::slugify(&s.title))
        .unwrap_or_else(|| "seed".to_string());
    let pairs = to_document_pairs(raw_pairs, &rules, &seed_slug, origin)?;
    std::fs::create_dir_all(&prepared.config.corpus_dir)
        .map_err(|e| Error::io(&prepared.config.corpus_dir, e))?;
    for pair in &pairs {
        write_pair_dir(&prepared.config.corpus_dir, pair)?;
    }
    log::info!("crawl stage wrote {} document pairs", pairs.len());
    Ok(())
}

fn stage_segment(prepared: &Prepared, out_dir: &Path) -> Result<()> {
    let pairs = read_corpus_dir(&prepared.config.corpus_dir)?;
    let sl = prepared.config.source_lang.as_str();
    let tl = prepared.config.target_lang.as_str();
    pairs
        .par_iter()
        .map(|pair| -> Result<()> {
            let dir = doc_dir(out_dir, &pair.id);
            std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
            let src: Vec<String> = segment_sentences(&pair.source.text, &prepared.abbrev_source)
                .iter()
                .map(Sentence::single_line)
                .collect();
            let tgt: Vec<String> = segment_sentences(&pair.target.text, &prepared.abbrev_target)
                .iter()
                .map(Sentence::single_line)
                .collect();
            write_lines(&dir.join(format!("src.{sl}")), &src)?;
            write_lines(&dir.join(format!("src.{tl}")), &tgt)?;
            Ok(())
        })
        .collect::<Result<Vec<()>>>()
        .map_err(|e| stage_err(Stage::Segment, "-", e))?;
    write_stamp(out_dir, Stage::Segment, &prepared.config_hash, pairs.len())
}

fn load_sentences(path: &Path) -> Result<Vec<Sentence>> {
    Ok(read_lines(path)?.iter().map(Sentence::new).collect())
}

fn stage_align(prepared: &Prepared, out_dir: &Path) -> Result<()> {
    let ids = doc_ids(out_dir)?;
    let sl = prepared.config.source_lang.as_str();
    let tl = prepared.config.target_lang.as_str();
    ids.par_iter()
        .map(|id| -> Result<()> {
            let dir = doc_dir(out_dir, id);
            let src = load_sentences(&dir.join(format!("src.{sl}")))?;
            let tgt = load_sentences(&dir.join(format!("src.{tl}")))?;
            let (alignment, lexicon) = align_two_pass(
                &src,
                &tgt,
                prepared.aligner_lexicon.as_ref(),
                &prepared.config.aligner,
            );
            alignment
                .validate(src.len(), tgt.len())
                .map_err(|e| stage_err(Stage::Align, id, e))?;
            std::fs::write(dir.join("alignment.tsv"), alignment_to_tsv(&alignment))
                .map_err(|e| Error::io(dir.join("alignment.tsv"), e))?;
            lexicon.write_file(&dir.join("lexicon.auto.tsv"))?;
            Ok(())
        })
        .collect::<Result<Vec<()>>>()?;
    write_stamp(out_dir, Stage::Align, &prepared.config_hash, ids.len())
}

fn stage_translate(prepared: &Prepared, out_dir: &Path) -> Result<()> {
    let ids = doc_ids(out_dir)?;
    let sl = prepared.config.source_lang.as_str();
    let cache_dir = prepared
        .config
        .cache_dir
        .clone()
        .unwrap_or_else(|| out_dir.join("cache"));
    let cache = Mutex::new(TranslationCache::open(
        &cache_dir,
        &prepared.engine.identity(),
        &prepared.config.source_lang,
        &prepared.config.target_lang,
    )?);

    ids.par_iter()
        .map(|id| -> Result<()> {
            let dir = doc_dir(out_dir, id);
            let lines = read_lines(&dir.join(format!("src.{sl}")))?;
            let request = TranslationRequest::new(
                lines,
                prepared.config.source_lang.clone(),
                prepared.config.target_lang.clone(),
            )?;
            let result = {
                let mut cache = cache.lock().expect("cache lock");
                translate_lines(&request, &prepared.engine, Some(&mut cache))
                    .map_err(|e| stage_err(Stage::Translate, id, e))?
            };
            write_lines(&dir.join("src.trans"), &result.lines)
        })
        .collect::<Result<Vec<()>>>()?;
    write_stamp(out_dir, Stage::Translate, &prepared.config_hash, ids.len())
}

fn stage_filter(prepared: &Prepared, out_dir: &Path) -> Result<()> {
    let ids = doc_ids(out_dir)?;
    let sl = prepared.config.source_lang.as_str();
    let tl = prepared.config.target_lang.as_str();
    let options = prepared.filter_options();

    ids.par_iter()
        .map(|id| -> Result<()> {
            let dir = doc_dir(out_dir, id);
            let src = read_lines(&dir.join(format!("src.{sl}")))?;
            let trans = read_lines(&dir.join("src.trans"))?;
            let tgt = read_lines(&dir.join(format!("src.{tl}")))?;
            let alignment_body = std::fs::read_to_string(dir.join("alignment.tsv"))
                .map_err(|e| Error::io(dir.join("alignment.tsv"), e))?;
            let alignment = alignment_from_tsv(&alignment_body, &dir.join("alignment.tsv"))?;
            let centers = alignment.suggested_targets(src.len());
            let (accepted, report) = filter_corpus(
                &src,
                &trans,
                &tgt,
                &options,
                prepared.config.window,
                Some(&centers),
            )
            .map_err(|e| stage_err(Stage::Filter, id, e))?;
            std::fs::write(dir.join("accepted.tsv"), accepted_to_tsv(&accepted))
                .map_err(|e| Error::io(dir.join("accepted.tsv"), e))?;
            let body = serde_json::to_string_pretty(&report).expect("report serializes");
            std::fs::write(dir.join("filter_report.json"), body + "\n")
                .map_err(|e| Error::io(dir.join("filter_report.json"), e))?;
            Ok(())
        })
        .collect::<Result<Vec<()>>>()?;
    write_stamp(out_dir, Stage::Filter, &prepared.config_hash, ids.len())
}

fn stage_report(prepared: &Prepared, out_dir: &Path) -> Result<MiningReport> {
    let ids = doc_ids(out_dir)?;
    let sl = prepared.config.source_lang.as_str();
    let tl = prepared.config.target_lang.as_str();

    let mut rows = Vec::new();
    let mut corpus_src: Vec<String> = Vec::new();
    let mut corpus_tgt: Vec<String> = Vec::new();

    for id in &ids {
        let dir = doc_dir(out_dir, id);
        let src = read_lines(&dir.join(format!("src.{sl}")))?;
        let tgt = read_lines(&dir.join(format!("src.{tl}")))?;
        let alignment_body = std::fs::read_to_string(dir.join("alignment.tsv"))
            .map_err(|e| Error::io(dir.join("alignment.tsv"), e))?;
        let alignment: SentenceAlignment =
            alignment_from_tsv(&alignment_body, &dir.join("alignment.tsv"))?;
        let report_body = std::fs::read_to_string(dir.join("filter_report.json"))
            .map_err(|e| Error::io(dir.join("filter_report.json"), e))?;
        let filter_report: FilterReport = serde_json::from_str(&report_body)
            .map_err(|e| Error::invalid(format!("filter_report.json for {id}: {e}")))?;
        let accepted_body = std::fs::read_to_string(dir.join("accepted.tsv"))
            .map_err(|e| Error::io(dir.join("accepted.tsv"), e))?;
        for line in accepted_body.lines() {
            let mut fields = line.split('\t');
            if let (Some(s), Some(t)) = (fields.next(), fields.next()) {
                corpus_src.push(s.to_string());
                corpus_tgt.push(t.to_string());
            }
        }

        let aligned = alignment
            .links
            .iter()
            .filter(|l| !l.src_indices().is_empty() && !l.tgt_indices().is_empty())
            .count();
        rows.push(DocRow {
            doc_id: id.clone(),
            src_sents: src.len(),
            tgt_sents: tgt.len(),
            aligned,
            accepted: filter_report.accepted,
            rejected: filter_report.rejected,
            tiers: filter_report.per_tier.clone(),
        });
    }

    let report = MiningReport::assemble(
        prepared.config_hash.clone(),
        prepared.tiers.names(),
        rows,
    )?;

    write_lines(&out_dir.join(format!("corpus.{sl}")), &corpus_src)?;
    write_lines(&out_dir.join(format!("corpus.{tl}")), &corpus_tgt)?;
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    std::fs::write(out_dir.join("mining_report.json"), json + "\n")
        .map_err(|e| Error::io(out_dir.join("mining_report.json"), e))?;
    std::fs::write(out_dir.join("mining_report.tsv"), report.to_tsv())
        .map_err(|e| Error::io(out_dir.join("mining_report.tsv"), e))?;
    write_stamp(out_dir, Stage::Report, &prepared.config_hash, ids.len())?;
    Ok(report)
}

/// Per-round outcome of [`iterate_bootstrap`].
#[derive(Debug, Clone, Serialize)]
pub struct BootstrapSummary {
    pub rounds_requested: usize,
    pub rounds_run: usize,
    pub accepted_per_round: Vec<usize>,
    pub stopped_early: bool,
}

/// Repeats the pipeline, feeding each round's accepted pairs back in as (a)
/// the aligner's external lexicon and (b) new entries for the gloss
/// lexicon. Stops early with a warning when a round accepts nothing.
/// Artifacts per round live in `round_NN/`; the final round's corpus and
/// reports are copied to `out_dir`.
pub fn iterate_bootstrap(
    config: &PipelineConfig,
    rounds: usize,
    out_dir: &Path,
) -> Result<MiningReport> {
    if rounds == 0 {
        return Err(Error::config("bootstrap needs at least one round"));
    }
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;

    let mut round_config = config.clone();
    let mut last_report: Option<(MiningReport, PathBuf)> = None;
    let mut accepted_per_round = Vec::new();
    let mut stopped_early = false;

    for round in 1..=rounds {
        let round_dir = out_dir.join(format!("round_{round:02}"));
        let report = run_pipeline(&round_config, &round_dir)?;
        accepted_per_round.push(report.totals.accepted);
        let accepted_total = report.totals.accepted;
        last_report = Some((report, round_dir.clone()));

        if accepted_total == 0 {
            log::warn!("bootstrap round {round} accepted nothing; stopping early");
            stopped_early = true;
            break;
        }
        if round == rounds {
            break;
        }

        // Learn a lexicon from this round's accepted pairs (a trivial 1-1
        // alignment over the mined corpus).
        let sl = config.source_lang.as_str();
        let tl = config.target_lang.as_str();
        let src = load_sentences(&round_dir.join(format!("corpus.{sl}")))?;
        let tgt = load_sentences(&round_dir.join(format!("corpus.{tl}")))?;
        let trivial = SentenceAlignment {
            links: (0..src.len())
                .map(|k| crate::align::AlignmentLink {
                    category: crate::align::LinkCategory::OneOne,
                    src_start: k,
                    tgt_start: k,
                    score: 0.0,
                })
                .collect(),
            total_cost: 0.0,
        };
        let learned = build_auto_lexicon(
            &src,
            &tgt,
            &trivial,
            config.aligner.lexicon_min_count,
            config.aligner.lexicon_score_floor,
        );
        log::info!("bootstrap round {round} learned {} lexicon entries", learned.len());

        // Aligner lexicon: configured external entries plus learned ones.
        let mut aligner_lexicon = match &config.aligner_lexicon {
            Some(path) => Lexicon::from_file(path)?,
            None => Lexicon::new(),
        };
        aligner_lexicon.merge(&learned);
        let aligner_path = round_dir.join("learned_lexicon.tsv");
        aligner_lexicon.write_file(&aligner_path)?;

        // Gloss lexicon: configured entries plus learned ones. The external
        // command engine is never touched.
        let mut gloss = match &config.engine.gloss_lexicon {
            Some(path) => Lexicon::from_file(path)?,
            None => Lexicon::new(),
        };
        gloss.merge(&learned);
        let gloss_path = round_dir.join("gloss_lexicon.tsv");
        gloss.write_file(&gloss_path)?;

        round_config = config.clone();
        round_config.aligner_lexicon = Some(aligner_path);
        if round_config.engine.kind != EngineKind::External {
            round_config.engine.gloss_lexicon = Some(gloss_path);
            if round_config.engine.kind == EngineKind::Gloss {
                // stays gloss, now with the merged lexicon
            }
        }
    }

    let (report, final_dir) = last_report.expect("at least one round ran");
    let sl = config.source_lang.as_str();
    let tl = config.target_lang.as_str();
    for name in [
        format!("corpus.{sl}"),
        format!("corpus.{tl}"),
        "mining_report.json".to_string(),
        "mining_report.tsv".to_string(),
    ] {
        let from = final_dir.join(&name);
        let to = out_dir.join(&name);
        std::fs::copy(&from, &to).map_err(|e| Error::io(&from, e))?;
    }
    let summary = BootstrapSummary {
        rounds_requested: rounds,
        rounds_run: accepted_per_round.len(),
        accepted_per_round,
        stopped_early,
    };
    let body = serde_json::to_string_pretty(&summary).expect("summary serializes");
    std::fs::write(out_dir.join("bootstrap_summary.json"), body + "\n")
        .map_err(|e| Error::io(out_dir.join("bootstrap_summary.json"), e))?;
    Ok(report)
}

/// Checks that document ids in a corpus directory are unique and pairs are
/// well-formed; used by `validate`-style CLI paths.
pub fn check_corpus_dir(dir: &Path) -> Result<usize> {
    let pairs = read_corpus_dir(dir)?;
    let ids: BTreeSet<&str> = pairs.iter().map(|p| p.id.as_str()).collect();
    if ids.len() != pairs.len() {
        return Err(Error::invalid("duplicate document ids in corpus"));
    }
    Ok(pairs.len())
}

/// Collects accepted pairs from a pipeline output directory.
pub fn read_mined_corpus(out_dir: &Path, sl: &LangCode, tl: &LangCode) -> Result<Vec<(String, String)>> {
    let src = read_lines(&out_dir.join(format!("corpus.{sl}")))?;
    let tgt = read_lines(&out_dir.join(format!("corpus.{tl}")))?;
    if src.len() != tgt.len() {
        return Err(Error::invalid("mined corpus files are not line-parallel"));
    }
    Ok(src.into_iter().zip(tgt).collect())
}
