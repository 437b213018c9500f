//! Breadth-first crawl of topic-related article pairs.
//!
//! Starting from a seed article in the source-language wiki, the crawler
//! follows body links breadth-first, fetching each article's target-language
//! counterpart through its interlanguage link. Articles without a
//! counterpart are traversed but emit nothing. `fixture://name` URLs resolve
//! against a local directory so the whole path runs offline.

use std::collections::{HashSet, VecDeque};
use std::path::PathBuf;
use std::time::Duration;

use scraper::Html;

use super::clean::{extract_links, extract_title, interlanguage_href, CompiledRules};
use super::RawArticle;
use crate::error::{Error, Result};
use crate::lang::LangCode;

/// Transport abstraction: returns the markup behind a URL.
pub trait Fetch {
    fn fetch(&mut self, url: &str) -> Result<String>;
}

const FIXTURE_SCHEME: &str = "fixture://";

/// Serves `fixture://name` from `<dir>/name.html`.
pub struct FixtureFetcher {
    dir: PathBuf,
}

impl FixtureFetcher {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        FixtureFetcher { dir: dir.into() }
    }
}

impl Fetch for FixtureFetcher {
    fn fetch(&mut self, url: &str) -> Result<String> {
        let name = url.strip_prefix(FIXTURE_SCHEME).ok_or_else(|| Error::Fetch {
            url: url.to_string(),
            msg: "fixture fetcher only handles fixture:// URLs".to_string(),
        })?;
        if name.contains('/') || name.contains("..") || name.is_empty() {
            return Err(Error::Fetch {
                url: url.to_string(),
                msg: "fixture names cannot contain path separators".to_string(),
            });
        }
        let path = self.dir.join(format!("{name}.html"));
        std::fs::read_to_string(&path).map_err(|e| Error::Fetch {
            url: url.to_string(),
            msg: format!("{}: {e}", path.display()),
        })
    }
}

/// HTTP transport with politeness delay and retry with backoff.
pub struct HttpFetcher {
    client: reqwest::blocking::Client,
    delay: Duration,
    retries: u32,
    last_request: Option<std::time::Instant>,
}

impl HttpFetcher {
    pub fn new(delay: Duration) -> Result<Self> {
        let client = reqwest::blocking::Client::builder()
            .user_agent(concat!("bitext-miner/", env!("CARGO_PKG_VERSION")))
            .build()
            .map_err(|e| Error::config(format!("http client: {e}")))?;
        Ok(HttpFetcher {
            client,
            delay,
            retries: 3,
            last_request: None,
        })
    }
}

impl Fetch for HttpFetcher {
    fn fetch(&mut self, url: &str) -> Result<String> {
        let mut backoff = self.delay.max(Duration::from_millis(100));
        let mut last_err = String::new();
        for attempt in 0..=self.retries {
            if let Some(at) = self.last_request {
                let since = at.elapsed();
                if since < self.delay {
                    std::thread::sleep(self.delay - since);
                }
            }
            self.last_request = Some(std::time::Instant::now());
            match self.client.get(url).send().and_then(|r| r.error_for_status()) {
                Ok(response) => match response.text() {
                    Ok(body) => return Ok(body),
                    Err(e) => last_err = e.to_string(),
                },
                Err(e) => last_err = e.to_string(),
            }
            if attempt < self.retries {
                log::warn!("fetch {url} failed ({last_err}), retrying in {backoff:?}");
                std::thread::sleep(backoff);
                backoff *= 2;
            }
        }
        Err(Error::Fetch {
            url: url.to_string(),
            msg: last_err,
        })
    }
}

/// Is this href an internal article link worth following?
fn resolve_article_link(href: &str, base_url: &str) -> Option<String> {
    if href.starts_with(FIXTURE_SCHEME) {
        return Some(href.to_string());
    }
    if base_url.starts_with(FIXTURE_SCHEME) || href.starts_with('#') {
        return None; // fixtures only follow fixture links; skip self links
    }
    let base = url::Url::parse(base_url).ok()?;
    let resolved = base.join(href).ok()?;
    if resolved.scheme() != "http" && resolved.scheme() != "https" {
        return None;
    }
    let title = resolved.path().strip_prefix("/wiki/")?;
    // Skip non-article namespaces (File:, Category:, Help:, ...).
    if title.is_empty() || title.contains(':') {
        return None;
    }
    let mut clean = resolved.clone();
    clean.set_fragment(None);
    Some(clean.to_string())
}

/// Dedup key for visited articles.
fn normalized_title(url: &str) -> String {
    let name = url
        .strip_prefix(FIXTURE_SCHEME)
        .map(|n| n.to_string())
        .or_else(|| {
            url::Url::parse(url)
                .ok()
                .and_then(|u| u.path().strip_prefix("/wiki/").map(|t| t.to_string()))
        })
        .unwrap_or_else(|| url.to_string());
    name.replace('_', " ").to_lowercase()
}

/// The crawl driver, generic over transport.
pub struct Crawler<'r, F: Fetch> {
    fetcher: F,
    rules: &'r CompiledRules,
    source_lang: LangCode,
    target_lang: LangCode,
}

impl<'r, F: Fetch> Crawler<'r, F> {
    pub fn new(
        fetcher: F,
        rules: &'r CompiledRules,
        source_lang: LangCode,
        target_lang: LangCode,
    ) -> Self {
        Crawler {
            fetcher,
            rules,
            source_lang,
            target_lang,
        }
    }

    /// Breadth-first traversal from `seed_url`, emitting up to
    /// `max_articles` bilingual article pairs in discovery order.
    ///
    /// The seed must resolve and carry an interlanguage link (a fatal
    /// configuration error otherwise); later fetch failures are logged and
    /// skipped.
    pub fn crawl_topic(
        &mut self,
        seed_url: &str,
        max_articles: usize,
    ) -> Result<Vec<(RawArticle, RawArticle)>> {
        let mut queue: VecDeque<String> = VecDeque::new();
        let mut visited: HashSet<String> = HashSet::new();
        let mut pairs = Vec::new();

        queue.push_back(seed_url.to_string());
        visited.insert(normalized_title(seed_url));
        let mut is_seed = true;

        while let Some(url) = queue.pop_front() {
            if pairs.len() >= max_articles {
                break;
            }
            let html_body = match self.fetcher.fetch(&url) {
                Ok(body) => body,
                Err(e) if is_seed => return Err(e),
                Err(e) => {
                    log::warn!("skipping {url}: {e}");
                    continue;
                }
            };
            let html = Html::parse_document(&html_body);
            let title = extract_title(&html, self.rules).unwrap_or_else(|| normalized_title(&url));

            // Enqueue outgoing article links before deciding whether this
            // article itself emits a pair.
            for href in extract_links(&html, self.rules) {
                if let Some(link) = resolve_article_link(&href, &url) {
                    if visited.insert(normalized_title(&link)) {
                        queue.push_back(link);
                    }
                }
            }

            match interlanguage_href(&html, self.rules, &self.target_lang) {
                Some(counterpart_href) => {
                    let counterpart_url = if counterpart_href.starts_with(FIXTURE_SCHEME) {
                        counterpart_href
                    } else {
                        url::Url::parse(&url)
                            .ok()
                            .and_then(|b| b.join(&counterpart_href).ok())
                            .map(|u| u.to_string())
                            .unwrap_or(counterpart_href)
                    };
                    match self.fetch_counterpart(&url, &counterpart_url, title, html_body) {
                        Ok(pair) => pairs.push(pair),
                        Err(e) if is_seed => return Err(e),
                        Err(e) => log::warn!("skipping {url}: {e}"),
                    }
                }
                None if is_seed => return Err(Error::NoInterlanguageLink),
                None => {
                    log::info!("{url} has no {} counterpart", self.target_lang);
                }
            }
            is_seed = false;
        }

        Ok(pairs)
    }

    fn fetch_counterpart(
        &mut self,
        source_url: &str,
        counterpart_url: &str,
        source_title: String,
        source_html: String,
    ) -> Result<(RawArticle, RawArticle)> {
        let counterpart_body = self.fetcher.fetch(counterpart_url)?;
        let counterpart_html = Html::parse_document(&counterpart_body);
        let counterpart_title = extract_title(&counterpart_html, self.rules)
            .unwrap_or_else(|| normalized_title(counterpart_url));
        let source = RawArticle::new(
            source_url.to_string(),
            self.source_lang.clone(),
            source_title,
            source_html,
        )?;
        let target = RawArticle::new(
            counterpart_url.to_string(),
            self.target_lang.clone(),
            counterpart_title,
            counterpart_body,
        )?;
        Ok((source, target))
    }
}
