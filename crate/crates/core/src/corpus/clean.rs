//! Selector-driven HTML cleaning.
//!
//! What counts as content, navigation, or junk varies by wiki skin, so the
//! rules live in a config file rather than in code: CSS selectors for
//! elements to drop, elements whose text is content, the title, body links,
//! and interlanguage links.

use std::collections::HashSet;

use scraper::{ElementRef, Html, Selector};
use serde::{Deserialize, Serialize};

use super::{CleanDocument, RawArticle};
use crate::error::{Error, Result};

/// Selector lists, loadable from JSON.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CleanRules {
    /// Elements removed outright (tables, references, navigation, ...).
    pub remove_selectors: Vec<String>,
    /// Elements whose text becomes one paragraph each.
    pub content_selectors: Vec<String>,
    /// Candidates for the article title, first match wins.
    pub title_selectors: Vec<String>,
    /// Links followed by the crawler.
    pub body_link_selectors: Vec<String>,
    /// Anchor elements carrying `hreflang` interlanguage links.
    pub interlanguage_selector: String,
}

impl Default for CleanRules {
    fn default() -> Self {
        CleanRules {
            remove_selectors: [
                "table",
                "style",
                "script",
                "nav",
                "figure",
                "img",
                "ol.references",
                "ul.references",
                "sup.reference",
                "div.navbox",
                "div.infobox",
                "div.hatnote",
                "div.toc",
                "#toc",
                "#mw-navigation",
                "#p-lang",
                "span.mw-editsection",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect(),
            content_selectors: vec!["p".to_string()],
            title_selectors: vec![
                "h1#firstHeading".to_string(),
                "h1".to_string(),
                "title".to_string(),
            ],
            body_link_selectors: vec!["p a[href]".to_string()],
            interlanguage_selector: "a.interlanguage-link-target, a[hreflang]".to_string(),
        }
    }
}

impl CleanRules {
    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let body = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&body)
            .map_err(|e| Error::config(format!("{}: {e}", path.display())))
    }

    pub fn compile(&self) -> Result<CompiledRules> {
        let compile_list = |list: &[String]| -> Result<Vec<Selector>> {
            list.iter().map(|s| compile_selector(s)).collect()
        };
        Ok(CompiledRules {
            remove: compile_list(&self.remove_selectors)?,
            content: compile_list(&self.content_selectors)?,
            title: compile_list(&self.title_selectors)?,
            body_links: compile_list(&self.body_link_selectors)?,
            interlanguage: compile_selector(&self.interlanguage_selector)?,
        })
    }
}

fn compile_selector(source: &str) -> Result<Selector> {
    Selector::parse(source)
        .map_err(|e| Error::config(format!("invalid CSS selector {source:?}: {e}")))
}

/// Parsed, ready-to-match selector sets.
#[derive(Debug, Clone)]
pub struct CompiledRules {
    remove: Vec<Selector>,
    content: Vec<Selector>,
    title: Vec<Selector>,
    body_links: Vec<Selector>,
    interlanguage: Selector,
}

impl Default for CompiledRules {
    fn default() -> Self {
        CleanRules::default()
            .compile()
            .expect("built-in selectors are valid")
    }
}

fn matched_ids(doc: &Html, selectors: &[Selector]) -> HashSet<ego_tree::NodeId> {
    let mut ids = HashSet::new();
    for sel in selectors {
        for el in doc.select(sel) {
            ids.insert(el.id());
        }
    }
    ids
}

/// Tags that separate words even without whitespace in the markup.
const BLOCK_TAGS: &[&str] = &[
    "p", "div", "br", "li", "ul", "ol", "dl", "dt", "dd", "h1", "h2", "h3", "h4", "h5", "h6",
    "blockquote", "section", "article", "table", "tr", "td", "th", "pre", "hr",
];

fn collect_text(
    node: ego_tree::NodeRef<'_, scraper::Node>,
    removed: &HashSet<ego_tree::NodeId>,
    out: &mut String,
) {
    if removed.contains(&node.id()) {
        return;
    }
    if let Some(text) = node.value().as_text() {
        out.push_str(text);
    }
    let is_block = node
        .value()
        .as_element()
        .map_or(false, |el| BLOCK_TAGS.contains(&el.name()));
    if is_block {
        out.push(' ');
    }
    for child in node.children() {
        collect_text(child, removed, out);
    }
    if is_block {
        out.push(' ');
    }
}

fn strip_urls(text: &str) -> String {
    static URL: std::sync::OnceLock<regex::Regex> = std::sync::OnceLock::new();
    let url = URL.get_or_init(|| {
        regex::Regex::new(r"(?i)\b(?:https?://|www\.)\S+").expect("static regex compiles")
    });
    url.replace_all(text, " ").into_owned()
}

fn normalize_ws(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Strips an article down to its paragraph text.
///
/// Elements matching the removal selectors disappear with their subtrees;
/// each remaining content element becomes one paragraph (bare URLs deleted,
/// whitespace collapsed); paragraphs are joined with blank lines. An
/// article with nothing left is an [`Error::EmptyDocument`].
pub fn extract_clean_text(article: &RawArticle, rules: &CompiledRules) -> Result<CleanDocument> {
    let doc = Html::parse_document(&article.html);
    let removed = matched_ids(&doc, &rules.remove);
    let content = matched_ids(&doc, &rules.content);

    // Walk the whole tree once so paragraphs come out in document order
    // regardless of which selector matched them; nested matches contribute
    // only at the outermost level.
    fn visit(
        node: ego_tree::NodeRef<'_, scraper::Node>,
        content: &HashSet<ego_tree::NodeId>,
        removed: &HashSet<ego_tree::NodeId>,
        inside_content: bool,
        order: &mut Vec<ego_tree::NodeId>,
    ) {
        if removed.contains(&node.id()) {
            return;
        }
        let is_content = content.contains(&node.id());
        if is_content && !inside_content {
            order.push(node.id());
        }
        for child in node.children() {
            visit(child, content, removed, inside_content || is_content, order);
        }
    }
    let mut order: Vec<ego_tree::NodeId> = Vec::new();
    visit(doc.tree.root(), &content, &removed, false, &mut order);

    let mut paragraphs: Vec<String> = Vec::new();

    for id in order {
        if let Some(node) = doc.tree.get(id) {
            let mut raw = String::new();
            collect_text(node, &removed, &mut raw);
            let cleaned = normalize_ws(&strip_urls(&raw));
            if !cleaned.is_empty() {
                paragraphs.push(cleaned);
            }
        }
    }

    if paragraphs.is_empty() {
        return Err(Error::EmptyDocument);
    }
    Ok(CleanDocument {
        lang: article.lang.clone(),
        title: article.title.clone(),
        text: paragraphs.join("\n\n"),
    })
}

/// The first non-empty title according to the title selectors.
pub fn extract_title(html: &Html, rules: &CompiledRules) -> Option<String> {
    for sel in &rules.title {
        if let Some(el) = html.select(sel).next() {
            let title = normalize_ws(&el.text().collect::<String>());
            if !title.is_empty() {
                return Some(title);
            }
        }
    }
    None
}

/// All body link hrefs in document order, deduplicated.
pub fn extract_links(html: &Html, rules: &CompiledRules) -> Vec<String> {
    let mut seen = HashSet::new();
    let mut links = Vec::new();
    for sel in &rules.body_links {
        for el in html.select(sel) {
            if let Some(href) = el.value().attr("href") {
                if seen.insert(href.to_string()) {
                    links.push(href.to_string());
                }
            }
        }
    }
    links
}

/// The interlanguage link pointing at `lang`, if any.
pub fn interlanguage_href(html: &Html, rules: &CompiledRules, lang: &crate::LangCode) -> Option<String> {
    html.select(&rules.interlanguage)
        .filter_map(|el: ElementRef<'_>| {
            let hreflang = el.value().attr("hreflang")?;
            if hreflang == lang.as_str() {
                el.value().attr("href").map(|h| h.to_string())
            } else {
                None
            }
        })
        .next()
}
