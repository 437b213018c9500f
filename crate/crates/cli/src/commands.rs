//! Subcommand implementations.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::Args;

use bitext_core::align::{
    align_length_based, align_two_pass, alignment_to_tsv, AlignerConfig, Lexicon,
};
use bitext_core::corpus::{
    extract_clean_text, to_document_pairs, write_pair_dir, CleanRules, Crawler, FixtureFetcher,
    HttpFetcher, Origin, RawArticle,
};
use bitext_core::error::{Error, Result};
use bitext_core::filter::{
    accepted_to_tsv, filter_corpus, FilterOptions, TierLadder, WindowPolicy,
};
use bitext_core::metrics::{evaluate as run_metrics, EvalPair};
use bitext_core::pipeline::{iterate_bootstrap, run_pipeline, PipelineConfig};
use bitext_core::text::{
    segment_sentences, tokenize, AbbreviationList, Sentence, StopwordSet, SynonymLexicon,
};
use bitext_core::translate::{
    translate_lines, Engine, ExternalEngine, GlossEngine, LineTranslator, MemoryEngine,
    TranslationCache, TranslationRequest,
};
use bitext_core::word_align::{read_pharaoh_file, symmetrize_gdfa};
use bitext_core::LangCode;

fn read_lines(path: &Path) -> Result<Vec<String>> {
    let body = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(body.lines().map(String::from).collect())
}

fn write_output(path: Option<&Path>, body: &str) -> Result<()> {
    match path {
        Some(path) => std::fs::write(path, body).map_err(|e| Error::io(path, e)),
        None => {
            std::io::stdout()
                .write_all(body.as_bytes())
                .map_err(|e| Error::io("stdout", e))
        }
    }
}

#[derive(Args)]
pub struct CrawlArgs {
    /// Seed article URL (`https://...` or `fixture://name`).
    #[arg(long)]
    seed: String,
    /// Stop after this many bilingual pairs.
    #[arg(long, default_value_t = 10)]
    max_articles: usize,
    /// Politeness delay between HTTP requests.
    #[arg(long, default_value_t = 1000)]
    delay_ms: u64,
    #[arg(long)]
    source_lang: LangCode,
    #[arg(long)]
    target_lang: LangCode,
    /// Resolve fixture:// URLs against this directory instead of the network.
    #[arg(long)]
    fixtures_dir: Option<PathBuf>,
    /// HTML cleaning rules (JSON); built-in wiki defaults when omitted.
    #[arg(long)]
    clean_rules: Option<PathBuf>,
}

pub fn crawl(args: &CrawlArgs, out_dir: &Path) -> Result<()> {
    let rules = match &args.clean_rules {
        Some(path) => CleanRules::from_file(path)?.compile()?,
        None => CleanRules::default().compile()?,
    };
    let raw_pairs = match &args.fixtures_dir {
        Some(dir) => Crawler::new(
            FixtureFetcher::new(dir),
            &rules,
            args.source_lang.clone(),
            args.target_lang.clone(),
        )
        .crawl_topic(&args.seed, args.max_articles)?,
        None => Crawler::new(
            HttpFetcher::new(Duration::from_millis(args.delay_ms))?,
            &rules,
            args.source_lang.clone(),
            args.target_lang.clone(),
        )
        .crawl_topic(&args.seed, args.max_articles)?,
    };
    let origin = if args.fixtures_dir.is_some() {
        Origin::Fixture
    } else {
        Origin::Crawled
    };
    let seed_slug = raw_pairs
        .first()
        .map(|(s, _)| bitext_core::corpus::slugify(&s.title))
        .unwrap_or_else(|| "seed".to_string());
    let pairs = to_document_pairs(raw_pairs, &rules, &seed_slug, origin)?;
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    for pair in &pairs {
        write_pair_dir(out_dir, pair)?;
    }
    println!("crawled {} document pairs into {}", pairs.len(), out_dir.display());
    Ok(())
}

#[derive(Args)]
pub struct CleanArgs {
    /// HTML file to clean.
    #[arg(long)]
    html: PathBuf,
    /// Cleaning rules (JSON); built-in defaults when omitted.
    #[arg(long)]
    rules: Option<PathBuf>,
    /// Language recorded on the document.
    #[arg(long, default_value = "en")]
    lang: LangCode,
}

pub fn clean(args: &CleanArgs) -> Result<()> {
    let rules = match &args.rules {
        Some(path) => CleanRules::from_file(path)?.compile()?,
        None => CleanRules::default().compile()?,
    };
    let html = std::fs::read_to_string(&args.html).map_err(|e| Error::io(&args.html, e))?;
    let article = RawArticle::new(
        args.html.display().to_string(),
        args.lang.clone(),
        String::new(),
        html,
    )?;
    let doc = extract_clean_text(&article, &rules)?;
    println!("{}", doc.text);
    Ok(())
}

#[derive(Args)]
pub struct AlignArgs {
    /// Source sentences, one per line (or raw text with --segment).
    #[arg(long)]
    src: PathBuf,
    /// Target sentences, one per line (or raw text with --segment).
    #[arg(long)]
    tgt: PathBuf,
    /// Sentence-segment the inputs first.
    #[arg(long)]
    segment: bool,
    /// Abbreviation list for --segment (applied to both sides).
    #[arg(long)]
    abbrev: Option<PathBuf>,
    /// External lexicon for the first pass.
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Length-only single pass instead of the two-pass procedure.
    #[arg(long)]
    one_pass: bool,
    /// Alignment TSV destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Where to write the automatic lexicon of the second pass.
    #[arg(long)]
    lexicon_out: Option<PathBuf>,
}

pub fn align(args: &AlignArgs) -> Result<()> {
    let load = |path: &Path| -> Result<Vec<Sentence>> {
        if args.segment {
            let abbrev = match &args.abbrev {
                Some(p) => AbbreviationList::from_file(p)?,
                None => AbbreviationList::default(),
            };
            let body = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            Ok(segment_sentences(&body, &abbrev))
        } else {
            Ok(read_lines(path)?.iter().map(Sentence::new).collect())
        }
    };
    let src = load(&args.src)?;
    let tgt = load(&args.tgt)?;
    let config = AlignerConfig::default();
    let external = match &args.lexicon {
        Some(path) => Some(Lexicon::from_file(path)?),
        None => None,
    };

    let alignment = if args.one_pass {
        match &external {
            Some(lex) => bitext_core::align::align_with_lexicon(
                &src,
                &tgt,
                &config.gale_church,
                lex,
                config.lexical_weight,
            ),
            None => align_length_based(&src, &tgt, &config.gale_church),
        }
    } else {
        let (alignment, lexicon) = align_two_pass(&src, &tgt, external.as_ref(), &config);
        if let Some(path) = &args.lexicon_out {
            lexicon.write_file(path)?;
        }
        alignment
    };
    write_output(args.out.as_deref(), &alignment_to_tsv(&alignment))
}

#[derive(Args)]
pub struct TranslateArgs {
    /// Engine: memory, gloss, or external.
    #[arg(long)]
    engine: String,
    /// Lines to translate.
    #[arg(long)]
    input: PathBuf,
    /// Destination; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Translation memory TSV (memory engine; also enables gloss fallback
    /// when --lexicon is given).
    #[arg(long)]
    tm: Option<PathBuf>,
    /// Word lexicon TSV (gloss engine or memory fallback).
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Shell command for the external engine.
    #[arg(long)]
    cmd: Option<String>,
    /// Cache directory; no caching when omitted.
    #[arg(long)]
    cache: Option<PathBuf>,
    #[arg(long)]
    source_lang: LangCode,
    #[arg(long)]
    target_lang: LangCode,
}

pub fn translate(args: &TranslateArgs) -> Result<()> {
    let engine = match args.engine.as_str() {
        "memory" => {
            let tm = args.tm.as_ref().ok_or_else(|| {
                Error::config("--engine memory requires --tm <file>")
            })?;
            let mut engine = MemoryEngine::from_file(tm)?;
            if let Some(lexicon) = &args.lexicon {
                engine = engine.with_fallback(GlossEngine::from_file(lexicon)?);
            }
            Engine::Memory(engine)
        }
        "gloss" => {
            let lexicon = args.lexicon.as_ref().ok_or_else(|| {
                Error::config("--engine gloss requires --lexicon <file>")
            })?;
            Engine::Gloss(GlossEngine::from_file(lexicon)?)
        }
        "external" => {
            let cmd = args.cmd.as_ref().ok_or_else(|| {
                Error::config("--engine external requires --cmd <program>")
            })?;
            Engine::External(ExternalEngine::new(cmd.clone()))
        }
        other => {
            return Err(Error::config(format!(
                "unknown engine {other:?}; expected memory, gloss, or external"
            )))
        }
    };

    let request = TranslationRequest::new(
        read_lines(&args.input)?,
        args.source_lang.clone(),
        args.target_lang.clone(),
    )?;
    let result = match &args.cache {
        Some(dir) => {
            let mut cache = TranslationCache::open(
                dir,
                &engine.identity(),
                &args.source_lang,
                &args.target_lang,
            )?;
            translate_lines(&request, &engine, Some(&mut cache))?
        }
        None => translate_lines(&request, &engine, None)?,
    };
    let mut body = result.lines.join("\n");
    if !result.lines.is_empty() {
        body.push('\n');
    }
    write_output(args.output.as_deref(), &body)
}

#[derive(Args)]
pub struct FilterArgs {
    /// Source sentences (`src.pl` in the file-role naming).
    #[arg(long)]
    src: PathBuf,
    /// Intermediate translations (`src.trans`).
    #[arg(long)]
    trans: PathBuf,
    /// Target sentences (`src.en`).
    #[arg(long)]
    tgt: PathBuf,
    /// Tier ladder config; built-in default ladder when omitted.
    #[arg(long)]
    tiers: Option<PathBuf>,
    /// Candidate window: a radius, `unbounded`, or `auto`.
    #[arg(long, default_value = "auto")]
    window: String,
    /// Stopword list removed before comparisons.
    #[arg(long)]
    stopwords: Option<PathBuf>,
    /// Synonym lexicon for the synonym_ratio comparator.
    #[arg(long)]
    synonyms: Option<PathBuf>,
    /// Cap on synonym-substituted variants per sentence.
    #[arg(long, default_value_t = 64)]
    max_variants: usize,
    /// Language tag recorded on the stopword set.
    #[arg(long, default_value = "en")]
    lang: LangCode,
}

fn parse_window(s: &str) -> Result<WindowPolicy> {
    match s {
        "unbounded" => Ok(WindowPolicy::Unbounded),
        "auto" => Ok(WindowPolicy::Auto),
        n => n
            .parse::<usize>()
            .map(WindowPolicy::Around)
            .map_err(|_| Error::config(format!("bad --window {n:?}: expected a number, `unbounded`, or `auto`"))),
    }
}

pub fn filter(args: &FilterArgs, out_dir: &Path) -> Result<()> {
    let tiers = match &args.tiers {
        Some(path) => TierLadder::from_file(path)?,
        None => TierLadder::default(),
    };
    let stopwords = match &args.stopwords {
        Some(path) => StopwordSet::from_file(args.lang.clone(), path)?,
        None => StopwordSet::empty(args.lang.clone()),
    };
    let synonyms = match &args.synonyms {
        Some(path) => SynonymLexicon::from_file(path)?,
        None => SynonymLexicon::new(),
    };
    let mut options = FilterOptions::new(tiers, stopwords, synonyms);
    options.max_variants = args.max_variants;

    let src = read_lines(&args.src)?;
    let trans = read_lines(&args.trans)?;
    let tgt = read_lines(&args.tgt)?;
    let window = parse_window(&args.window)?;
    let (accepted, report) = filter_corpus(&src, &trans, &tgt, &options, window, None)?;

    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let accepted_path = out_dir.join("accepted.tsv");
    std::fs::write(&accepted_path, accepted_to_tsv(&accepted))
        .map_err(|e| Error::io(&accepted_path, e))?;
    let report_path = out_dir.join("report.json");
    let body = serde_json::to_string_pretty(&report).expect("report serializes");
    std::fs::write(&report_path, body + "\n").map_err(|e| Error::io(&report_path, e))?;
    println!(
        "accepted {} of {} source lines -> {}",
        report.accepted,
        report.considered,
        accepted_path.display()
    );
    Ok(())
}

#[derive(Args)]
pub struct EvaluateArgs {
    /// Candidate translations, one segment per line.
    #[arg(long)]
    cand: PathBuf,
    /// Reference files, comma-separated, line-parallel with the candidate.
    #[arg(long, value_delimiter = ',')]
    refs: Vec<PathBuf>,
    /// Report BLEU/METEOR/TER as percentages.
    #[arg(long)]
    percent: bool,
}

pub fn evaluate(args: &EvaluateArgs) -> Result<()> {
    if args.refs.is_empty() {
        return Err(Error::config("--refs needs at least one reference file"));
    }
    let cand = read_lines(&args.cand)?;
    let mut refs: Vec<Vec<String>> = Vec::new();
    for path in &args.refs {
        let lines = read_lines(path)?;
        if lines.len() != cand.len() {
            return Err(Error::config(format!(
                "{} has {} lines, candidate has {}",
                path.display(),
                lines.len(),
                cand.len()
            )));
        }
        refs.push(lines);
    }

    let corpus: Vec<EvalPair> = cand
        .iter()
        .enumerate()
        .map(|(i, line)| {
            EvalPair::new(
                tokenize(line),
                refs.iter().map(|r| tokenize(&r[i])).collect(),
            )
        })
        .collect::<Result<_>>()?;

    let mut report = run_metrics(&corpus)?;
    if args.percent {
        report = report.as_percent();
    }
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    Ok(())
}

#[derive(Args)]
pub struct SymmetrizeArgs {
    /// Source-to-target alignments, Pharaoh format, one sentence per line.
    #[arg(long)]
    forward: PathBuf,
    /// Target-to-source alignments in the same (source, target) indexing.
    #[arg(long)]
    backward: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Symmetrization method (only grow-diag-final-and is implemented).
    #[arg(long, default_value = "grow-diag-final-and")]
    method: String,
}

pub fn symmetrize(args: &SymmetrizeArgs) -> Result<()> {
    if args.method != "grow-diag-final-and" {
        return Err(Error::config(format!(
            "unsupported --method {:?}; only grow-diag-final-and is implemented",
            args.method
        )));
    }
    let forward = read_pharaoh_file(&args.forward)?;
    let backward = read_pharaoh_file(&args.backward)?;
    if forward.len() != backward.len() {
        return Err(Error::config(format!(
            "{} sentence pairs forward vs {} backward",
            forward.len(),
            backward.len()
        )));
    }
    let mut out = String::new();
    for (f, b) in forward.iter().zip(&backward) {
        // Pharaoh lines carry no lengths; reconcile the inferred ones.
        let src_len = f.src_len.max(b.src_len);
        let tgt_len = f.tgt_len.max(b.tgt_len);
        let f = bitext_core::word_align::WordAlignmentSet::new(f.points(), src_len, tgt_len)?;
        let b = bitext_core::word_align::WordAlignmentSet::new(b.points(), src_len, tgt_len)?;
        out.push_str(&symmetrize_gdfa(&f, &b)?.to_pharaoh());
        out.push('\n');
    }
    write_output(args.out.as_deref(), &out)
}

pub fn pipeline(config: Option<&Path>, out_dir: &Path) -> Result<()> {
    let config_path =
        config.ok_or_else(|| Error::config("pipeline requires --config <file>"))?;
    let config = PipelineConfig::from_file(config_path)?;
    let report = run_pipeline(&config, out_dir)?;
    println!(
        "mined {} pairs from {} documents -> {}",
        report.totals.accepted,
        report.rows.len(),
        out_dir.display()
    );
    Ok(())
}

#[derive(Args)]
pub struct BootstrapArgs {
    /// How many align/translate/filter rounds to run.
    #[arg(long, default_value_t = 2)]
    rounds: usize,
}

pub fn bootstrap(args: &BootstrapArgs, config: Option<&Path>, out_dir: &Path) -> Result<()> {
    let config_path =
        config.ok_or_else(|| Error::config("bootstrap requires --config <file>"))?;
    let config = PipelineConfig::from_file(config_path)?;
    let report = iterate_bootstrap(&config, args.rounds, out_dir)?;
    println!(
        "bootstrap finished with {} mined pairs -> {}",
        report.totals.accepted,
        out_dir.display()
    );
    Ok(())
}
