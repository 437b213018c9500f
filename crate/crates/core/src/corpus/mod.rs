//! Obtaining topic-aligned bilingual document pairs.
//!
//! Articles come either from a live wiki crawl or from bundled fixture
//! files (`fixture://` URLs); both paths share the selector-driven HTML
//! cleaning in [`clean`] and emit uniquely-identified [`DocumentPair`]s,
//! one directory per pair on disk.

mod clean;
mod crawl;

pub use clean::{extract_clean_text, extract_links, extract_title, interlanguage_href, CleanRules, CompiledRules};
pub use crawl::{Crawler, Fetch, FixtureFetcher, HttpFetcher};

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lang::LangCode;

/// A fetched article before cleaning.
#[derive(Debug, Clone)]
pub struct RawArticle {
    pub url: String,
    pub lang: LangCode,
    pub title: String,
    pub html: String,
}

impl RawArticle {
    pub fn new(url: String, lang: LangCode, title: String, html: String) -> Result<Self> {
        if html.is_empty() {
            return Err(Error::invalid(format!("article {url} has empty markup")));
        }
        Ok(RawArticle {
            url,
            lang,
            title,
            html,
        })
    }
}

/// Markup-free article text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CleanDocument {
    pub lang: LangCode,
    pub title: String,
    /// Plain UTF-8; paragraph breaks are blank lines.
    pub text: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    Crawled,
    Fixture,
}

/// A topic-aligned bilingual document pair, the unit of the comparable
/// corpus.
#[derive(Debug, Clone)]
pub struct DocumentPair {
    pub id: String,
    pub source: CleanDocument,
    pub target: CleanDocument,
    pub origin: Origin,
    pub source_url: String,
    pub target_url: String,
}

impl DocumentPair {
    pub fn new(
        id: String,
        source: CleanDocument,
        target: CleanDocument,
        origin: Origin,
        source_url: String,
        target_url: String,
    ) -> Result<Self> {
        if source.lang == target.lang {
            return Err(Error::invalid(format!(
                "document pair {id} has one language on both sides"
            )));
        }
        Ok(DocumentPair {
            id,
            source,
            target,
            origin,
            source_url,
            target_url,
        })
    }
}

/// Lowercase alphanumeric slug with single dashes.
pub fn slugify(title: &str) -> String {
    let mut slug = String::new();
    let mut dash_pending = false;
    for c in title.chars() {
        if c.is_alphanumeric() {
            if dash_pending && !slug.is_empty() {
                slug.push('-');
            }
            dash_pending = false;
            for lc in c.to_lowercase() {
                slug.push(lc);
            }
        } else {
            dash_pending = true;
        }
    }
    if slug.is_empty() {
        "untitled".to_string()
    } else {
        slug
    }
}

/// Document IDs: zero-padded emission number plus the seed's title slug.
pub fn make_id(seq: usize, seed_slug: &str) -> String {
    format!("{seq:04}-{seed_slug}")
}

/// Cleans raw article pairs into [`DocumentPair`]s, assigning IDs in order.
/// Pairs where either side cleans down to nothing are dropped with a log
/// message.
pub fn to_document_pairs(
    raw_pairs: Vec<(RawArticle, RawArticle)>,
    rules: &CompiledRules,
    seed_slug: &str,
    origin: Origin,
) -> Result<Vec<DocumentPair>> {
    let mut pairs = Vec::new();
    let mut seq = 0usize;
    for (src_raw, tgt_raw) in raw_pairs {
        let cleaned = extract_clean_text(&src_raw, rules)
            .and_then(|s| extract_clean_text(&tgt_raw, rules).map(|t| (s, t)));
        match cleaned {
            Ok((source, target)) => {
                seq += 1;
                pairs.push(DocumentPair::new(
                    make_id(seq, seed_slug),
                    source,
                    target,
                    origin,
                    src_raw.url,
                    tgt_raw.url,
                )?);
            }
            Err(Error::EmptyDocument) => {
                log::warn!(
                    "dropping pair ({}, {}): empty after cleaning",
                    src_raw.url,
                    tgt_raw.url
                );
            }
            Err(e) => return Err(e),
        }
    }
    Ok(pairs)
}

#[derive(Debug, Serialize, Deserialize)]
struct PairMetaSide {
    lang: LangCode,
    title: String,
    url: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct PairMeta {
    id: String,
    origin: Origin,
    source: PairMetaSide,
    target: PairMetaSide,
}

/// Writes `<id>/<id>.<lang>.txt` for both sides plus `<id>/<id>.meta.json`.
pub fn write_pair_dir(out_dir: &Path, pair: &DocumentPair) -> Result<PathBuf> {
    let dir = out_dir.join(&pair.id);
    std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    for doc in [&pair.source, &pair.target] {
        let path = dir.join(format!("{}.{}.txt", pair.id, doc.lang));
        std::fs::write(&path, &doc.text).map_err(|e| Error::io(&path, e))?;
    }
    let meta = PairMeta {
        id: pair.id.clone(),
        origin: pair.origin,
        source: PairMetaSide {
            lang: pair.source.lang.clone(),
            title: pair.source.title.clone(),
            url: pair.source_url.clone(),
        },
        target: PairMetaSide {
            lang: pair.target.lang.clone(),
            title: pair.target.title.clone(),
            url: pair.target_url.clone(),
        },
    };
    let path = dir.join(format!("{}.meta.json", pair.id));
    let body = serde_json::to_string_pretty(&meta).expect("meta serializes");
    std::fs::write(&path, body + "\n").map_err(|e| Error::io(&path, e))?;
    Ok(dir)
}

/// Reads every pair directory under `dir`, sorted by id. Duplicate ids are
/// rejected.
pub fn read_corpus_dir(dir: &Path) -> Result<Vec<DocumentPair>> {
    let mut pairs = Vec::new();
    let mut entries: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_dir())
        .collect();
    entries.sort();

    for pair_dir in entries {
        let id = pair_dir
            .file_name()
            .and_then(|n| n.to_str())
            .unwrap_or_default()
            .to_string();
        let meta_path = pair_dir.join(format!("{id}.meta.json"));
        if !meta_path.exists() {
            continue; // not a pair directory
        }
        let body = std::fs::read_to_string(&meta_path).map_err(|e| Error::io(&meta_path, e))?;
        let meta: PairMeta = serde_json::from_str(&body)
            .map_err(|e| Error::invalid(format!("{}: {e}", meta_path.display())))?;
        let read_side = |side: &PairMetaSide| -> Result<CleanDocument> {
            let path = pair_dir.join(format!("{}.{}.txt", meta.id, side.lang));
            let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
            Ok(CleanDocument {
                lang: side.lang.clone(),
                title: side.title.clone(),
                text,
            })
        };
        pairs.push(DocumentPair::new(
            meta.id.clone(),
            read_side(&meta.source)?,
            read_side(&meta.target)?,
            meta.origin,
            meta.source.url.clone(),
            meta.target.url.clone(),
        )?);
    }

    let mut seen = std::collections::BTreeSet::new();
    for pair in &pairs {
        if !seen.insert(&pair.id) {
            return Err(Error::invalid(format!("duplicate document id {}", pair.id)));
        }
    }
    Ok(pairs)
}
