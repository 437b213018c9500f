//! Two-pass sentence alignment.
//!
//! Pass one aligns by character-length statistics alone (Gale-Church style
//! dynamic programming over six link shapes). A bilingual lexicon is then
//! built from the co-occurrences in the first pass, and pass two reruns the
//! same dynamic program with link costs discounted by how well the lexicon
//! covers the linked spans. An externally supplied lexicon, when present,
//! participates in both passes.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::Sentence;

/// The six alignment link shapes, in preference order for cost ties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LinkCategory {
    OneOne,
    ZeroOne,
    OneZero,
    OneTwo,
    TwoOne,
    TwoTwo,
}

impl LinkCategory {
    pub const ALL: [LinkCategory; 6] = [
        LinkCategory::OneOne,
        LinkCategory::ZeroOne,
        LinkCategory::OneZero,
        LinkCategory::OneTwo,
        LinkCategory::TwoOne,
        LinkCategory::TwoTwo,
    ];

    /// (source sentences consumed, target sentences consumed).
    pub fn span_sizes(self) -> (usize, usize) {
        match self {
            LinkCategory::ZeroOne => (0, 1),
            LinkCategory::OneZero => (1, 0),
            LinkCategory::OneOne => (1, 1),
            LinkCategory::OneTwo => (1, 2),
            LinkCategory::TwoOne => (2, 1),
            LinkCategory::TwoTwo => (2, 2),
        }
    }

    pub fn from_span_sizes(src: usize, tgt: usize) -> Option<Self> {
        match (src, tgt) {
            (0, 1) => Some(LinkCategory::ZeroOne),
            (1, 0) => Some(LinkCategory::OneZero),
            (1, 1) => Some(LinkCategory::OneOne),
            (1, 2) => Some(LinkCategory::OneTwo),
            (2, 1) => Some(LinkCategory::TwoOne),
            (2, 2) => Some(LinkCategory::TwoTwo),
            _ => None,
        }
    }

    /// The mirror shape under swapping source and target sides.
    pub fn mirrored(self) -> Self {
        match self {
            LinkCategory::ZeroOne => LinkCategory::OneZero,
            LinkCategory::OneZero => LinkCategory::ZeroOne,
            LinkCategory::OneTwo => LinkCategory::TwoOne,
            LinkCategory::TwoOne => LinkCategory::OneTwo,
            other => other,
        }
    }
}

impl fmt::Display for LinkCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (s, t) = self.span_sizes();
        write!(f, "{s}-{t}")
    }
}

/// One alignment link: a contiguous span of source sentences matched to a
/// contiguous span of target sentences. At most one side is empty.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentLink {
    pub category: LinkCategory,
    pub src_start: usize,
    pub tgt_start: usize,
    /// Cost assigned by the aligner; lower is better.
    pub score: f64,
}

impl AlignmentLink {
    pub fn src_indices(&self) -> std::ops::Range<usize> {
        let (n, _) = self.category.span_sizes();
        self.src_start..self.src_start + n
    }

    pub fn tgt_indices(&self) -> std::ops::Range<usize> {
        let (_, m) = self.category.span_sizes();
        self.tgt_start..self.tgt_start + m
    }
}

/// A monotone, non-crossing alignment covering every sentence exactly once.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SentenceAlignment {
    pub links: Vec<AlignmentLink>,
    pub total_cost: f64,
}

impl SentenceAlignment {
    /// Checks the structural invariants against the given document sizes:
    /// monotone links, every index covered exactly once.
    pub fn validate(&self, src_len: usize, tgt_len: usize) -> Result<()> {
        let (mut i, mut j) = (0, 0);
        for link in &self.links {
            if link.src_start != i || link.tgt_start != j {
                return Err(Error::invalid(format!(
                    "link at ({},{}) does not continue from ({i},{j})",
                    link.src_start, link.tgt_start
                )));
            }
            let (n, m) = link.category.span_sizes();
            i += n;
            j += m;
        }
        if i != src_len || j != tgt_len {
            return Err(Error::invalid(format!(
                "alignment covers {i}x{j} of a {src_len}x{tgt_len} document"
            )));
        }
        Ok(())
    }

    /// For each source sentence, the first target index of the link it
    /// belongs to; sentences in target-empty links borrow the nearest
    /// preceding position. Used as the filter's candidate-window centre.
    pub fn suggested_targets(&self, src_len: usize) -> Vec<usize> {
        let mut centers = vec![0usize; src_len];
        let mut last = 0usize;
        for link in &self.links {
            let tgt = link.tgt_indices();
            for s in link.src_indices() {
                if tgt.is_empty() {
                    centers[s] = last;
                } else {
                    centers[s] = tgt.start;
                    last = tgt.end.saturating_sub(1);
                }
            }
        }
        centers
    }
}

/// Gale-Church cost model constants. The priors are the published defaults;
/// the 0.089 mass of the 1-2/2-1 family is split evenly between the two
/// shapes. `mean_ratio` is expected target chars per source char and
/// `variance_per_char` the per-character variance of that ratio.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaleChurchParams {
    pub prior_one_one: f64,
    pub prior_zero_one: f64,
    pub prior_one_zero: f64,
    pub prior_one_two: f64,
    pub prior_two_one: f64,
    pub prior_two_two: f64,
    pub mean_ratio: f64,
    pub variance_per_char: f64,
    /// Cost substituted when the length-match probability underflows.
    pub big_cost: f64,
}

impl Default for GaleChurchParams {
    fn default() -> Self {
        GaleChurchParams {
            prior_one_one: 0.89,
            prior_zero_one: 0.0099,
            prior_one_zero: 0.0099,
            prior_one_two: 0.0445,
            prior_two_one: 0.0445,
            prior_two_two: 0.011,
            mean_ratio: 1.0,
            variance_per_char: 6.8,
            big_cost: 25.0,
        }
    }
}

impl GaleChurchParams {
    pub fn prior(&self, category: LinkCategory) -> f64 {
        match category {
            LinkCategory::OneOne => self.prior_one_one,
            LinkCategory::ZeroOne => self.prior_zero_one,
            LinkCategory::OneZero => self.prior_one_zero,
            LinkCategory::OneTwo => self.prior_one_two,
            LinkCategory::TwoOne => self.prior_two_one,
            LinkCategory::TwoTwo => self.prior_two_two,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [
            ("prior_one_one", self.prior_one_one),
            ("prior_zero_one", self.prior_zero_one),
            ("prior_one_zero", self.prior_one_zero),
            ("prior_one_two", self.prior_one_two),
            ("prior_two_one", self.prior_two_one),
            ("prior_two_two", self.prior_two_two),
        ] {
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::config(format!("{name} must be in (0, 1], got {p}")));
            }
        }
        if !(self.mean_ratio > 0.0) {
            return Err(Error::config("mean_ratio must be positive"));
        }
        if !(self.variance_per_char > 0.0) {
            return Err(Error::config("variance_per_char must be positive"));
        }
        Ok(())
    }
}

/// Standard normal CDF for z >= 0 (Abramowitz & Stegun 26.2.17), the same
/// approximation the original Gale-Church implementation used.
fn pnorm(z: f64) -> f64 {
    let t = 1.0 / (1.0 + 0.2316419 * z);
    1.0 - 0.3989423
        * (-z * z / 2.0).exp()
        * ((((1.330274429 * t - 1.821255978) * t + 1.781477937) * t - 0.356563782) * t
            + 0.319381530)
        * t
}

/// Cost of one candidate link under the length model: the category's prior
/// cost plus the length-mismatch cost of the concatenated spans. This is
/// the exact quantity the dynamic program sums, exposed so external checks
/// can cost arbitrary alignments.
pub fn link_cost(
    category: LinkCategory,
    src_chars: usize,
    tgt_chars: usize,
    params: &GaleChurchParams,
) -> f64 {
    -params.prior(category).ln() + length_cost(src_chars, tgt_chars, params)
}

/// -log probability that spans of `src_chars` and `tgt_chars` characters are
/// translations, under the length model: the mismatch statistic
/// `delta = (l2 - l1*c) / sqrt(s2 * (l1 + l2/c) / 2)` is treated as standard
/// normal and scored by its two-sided tail mass.
fn length_cost(src_chars: usize, tgt_chars: usize, params: &GaleChurchParams) -> f64 {
    if src_chars == 0 && tgt_chars == 0 {
        return 0.0;
    }
    let l1 = src_chars as f64;
    let l2 = tgt_chars as f64;
    let c = params.mean_ratio;
    let mean = (l1 + l2 / c) / 2.0;
    let delta = (l2 - l1 * c) / (params.variance_per_char * mean).sqrt();
    let p = (2.0 * (1.0 - pnorm(delta.abs()))).min(1.0);
    if p > 0.0 {
        -p.ln()
    } else {
        params.big_cost
    }
}

/// Bilingual word-association table with scores in (0, 1].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Lexicon {
    entries: BTreeMap<String, BTreeMap<String, f64>>,
    len: usize,
}

impl Lexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts or replaces an entry. Scores outside (0, 1] are rejected.
    pub fn insert(&mut self, src: &str, tgt: &str, score: f64) -> Result<()> {
        if !(score > 0.0 && score <= 1.0) {
            return Err(Error::invalid(format!(
                "lexicon score must be in (0, 1], got {score} for ({src}, {tgt})"
            )));
        }
        let prev = self
            .entries
            .entry(src.to_string())
            .or_default()
            .insert(tgt.to_string(), score);
        if prev.is_none() {
            self.len += 1;
        }
        Ok(())
    }

    pub fn score(&self, src: &str, tgt: &str) -> Option<f64> {
        self.entries.get(src).and_then(|m| m.get(tgt)).copied()
    }

    pub fn targets(&self, src: &str) -> impl Iterator<Item = (&str, f64)> {
        self.entries
            .get(src)
            .into_iter()
            .flat_map(|m| m.iter().map(|(t, &s)| (t.as_str(), s)))
    }

    /// Highest-scoring target for `src`; ties go to the lexicographically
    /// first target.
    pub fn best_target(&self, src: &str) -> Option<(&str, f64)> {
        let mut best: Option<(&str, f64)> = None;
        for (tgt, score) in self.targets(src) {
            if best.map_or(true, |(_, s)| score > s) {
                best = Some((tgt, score));
            }
        }
        best
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str, f64)> {
        self.entries
            .iter()
            .flat_map(|(s, m)| m.iter().map(move |(t, &sc)| (s.as_str(), t.as_str(), sc)))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Adds every entry of `other`, keeping the higher score on conflicts.
    pub fn merge(&mut self, other: &Lexicon) {
        for (s, t, score) in other.iter() {
            let keep = self.score(s, t).map_or(true, |have| score > have);
            if keep {
                let _ = self.insert(s, t, score);
            }
        }
    }

    /// TSV: `src<TAB>tgt<TAB>score` per line, sorted by source then target.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (s, t, score) in self.iter() {
            out.push_str(&format!("{s}\t{t}\t{score:.6}\n"));
        }
        out
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_tsv()).map_err(|e| Error::io(path, e))
    }

    pub fn from_tsv(body: &str, path: &Path) -> Result<Self> {
        let mut lex = Lexicon::new();
        for (idx, line) in body.lines().enumerate() {
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let mut parts = line.split('\t');
            let (src, tgt, score) = match (parts.next(), parts.next(), parts.next()) {
                (Some(s), Some(t), Some(sc)) => (s, t, sc),
                _ => {
                    return Err(Error::ParseFile {
                        path: path.to_path_buf(),
                        line: idx + 1,
                        msg: "expected `src<TAB>tgt<TAB>score`".to_string(),
                    })
                }
            };
            let score: f64 = score.trim().parse().map_err(|_| Error::ParseFile {
                path: path.to_path_buf(),
                line: idx + 1,
                msg: format!("bad score {score:?}"),
            })?;
            lex.insert(src, tgt, score)?;
        }
        Ok(lex)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let body = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_tsv(&body, path)
    }
}

/// Aligner configuration: the length model plus the lexical discount.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AlignerConfig {
    pub gale_church: GaleChurchParams,
    /// Weight of the lexical-coverage discount applied to link costs.
    pub lexical_weight: f64,
    /// Minimum co-occurrence count for an automatic lexicon entry.
    pub lexicon_min_count: u32,
    /// Minimum association score for an automatic lexicon entry.
    pub lexicon_score_floor: f64,
}

impl Default for AlignerConfig {
    fn default() -> Self {
        AlignerConfig {
            gale_church: GaleChurchParams::default(),
            lexical_weight: 0.5,
            lexicon_min_count: 2,
            lexicon_score_floor: 0.1,
        }
    }
}

impl AlignerConfig {
    pub fn validate(&self) -> Result<()> {
        self.gale_church.validate()?;
        if self.lexical_weight < 0.0 {
            return Err(Error::config("lexical_weight must be non-negative"));
        }
        if self.lexicon_min_count == 0 {
            return Err(Error::config("lexicon_min_count must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.lexicon_score_floor) {
            return Err(Error::config("lexicon_score_floor must be in [0, 1]"));
        }
        Ok(())
    }
}

/// Fraction of span token positions covered by the lexicon: a source token
/// counts when any of its translations occurs in the target span, a target
/// token when any source token translates to it.
fn lexical_coverage(lex: &Lexicon, src_tokens: &[&str], tgt_tokens: &[&str]) -> f64 {
    let total = src_tokens.len() + tgt_tokens.len();
    if total == 0 || lex.is_empty() {
        return 0.0;
    }
    let tgt_set: BTreeSet<&str> = tgt_tokens.iter().copied().collect();
    let mut reachable: BTreeSet<&str> = BTreeSet::new();
    let mut covered = 0usize;
    for s in src_tokens {
        let mut hit = false;
        for (t, _) in lex.targets(s) {
            if tgt_set.contains(t) {
                hit = true;
            }
            reachable.insert(t);
        }
        if hit {
            covered += 1;
        }
    }
    for t in tgt_tokens {
        if reachable.contains(t) {
            covered += 1;
        }
    }
    covered as f64 / total as f64
}

struct DpContext<'a> {
    src: &'a [Sentence],
    tgt: &'a [Sentence],
    params: &'a GaleChurchParams,
    lexical: Option<(&'a Lexicon, f64)>,
}

impl DpContext<'_> {
    fn span_chars(sents: &[Sentence], start: usize, len: usize) -> usize {
        sents[start..start + len].iter().map(|s| s.char_len).sum()
    }

    fn span_tokens<'s>(sents: &'s [Sentence], start: usize, len: usize) -> Vec<&'s str> {
        sents[start..start + len]
            .iter()
            .flat_map(|s| s.tokens.iter().map(|t| t.as_str()))
            .collect()
    }

    fn link_cost(&self, category: LinkCategory, i: usize, j: usize) -> f64 {
        let (n, m) = category.span_sizes();
        let src_chars = Self::span_chars(self.src, i, n);
        let tgt_chars = Self::span_chars(self.tgt, j, m);
        let mut cost = link_cost(category, src_chars, tgt_chars, self.params);
        if let Some((lex, weight)) = self.lexical {
            if n > 0 && m > 0 {
                let src_tokens = Self::span_tokens(self.src, i, n);
                let tgt_tokens = Self::span_tokens(self.tgt, j, m);
                cost -= weight * lexical_coverage(lex, &src_tokens, &tgt_tokens);
            }
        }
        cost
    }
}

/// Minimum-cost monotone alignment by dynamic programming over suffixes.
///
/// Cost ties at a cell are broken by the category preference order (1-1
/// first, then 0-1, 1-0, 1-2, 2-1, 2-2), which makes the reconstruction
/// from the front the lexicographically preferred optimal alignment.
fn align_dp(ctx: &DpContext<'_>) -> SentenceAlignment {
    let n = ctx.src.len();
    let m = ctx.tgt.len();
    let width = m + 1;
    let mut cost = vec![f64::INFINITY; (n + 1) * width];
    let mut choice: Vec<Option<LinkCategory>> = vec![None; (n + 1) * width];
    cost[n * width + m] = 0.0;

    for i in (0..=n).rev() {
        for j in (0..=m).rev() {
            if i == n && j == m {
                continue;
            }
            let mut best = f64::INFINITY;
            let mut best_cat = None;
            for cat in LinkCategory::ALL {
                let (di, dj) = cat.span_sizes();
                if i + di > n || j + dj > m {
                    continue;
                }
                let total = ctx.link_cost(cat, i, j) + cost[(i + di) * width + (j + dj)];
                if total < best {
                    best = total;
                    best_cat = Some(cat);
                }
            }
            cost[i * width + j] = best;
            choice[i * width + j] = best_cat;
        }
    }

    let mut links = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < n || j < m {
        let cat = choice[i * width + j].expect("reachable cell must have a choice");
        links.push(AlignmentLink {
            category: cat,
            src_start: i,
            tgt_start: j,
            score: ctx.link_cost(cat, i, j),
        });
        let (di, dj) = cat.span_sizes();
        i += di;
        j += dj;
    }

    SentenceAlignment {
        links,
        total_cost: cost[0],
    }
}

/// Length-only alignment (first pass).
pub fn align_length_based(
    src: &[Sentence],
    tgt: &[Sentence],
    params: &GaleChurchParams,
) -> SentenceAlignment {
    align_dp(&DpContext {
        src,
        tgt,
        params,
        lexical: None,
    })
}

/// Length + lexicon alignment: link costs are reduced by
/// `weight * lexical_coverage(span pair)`.
pub fn align_with_lexicon(
    src: &[Sentence],
    tgt: &[Sentence],
    params: &GaleChurchParams,
    lexicon: &Lexicon,
    weight: f64,
) -> SentenceAlignment {
    align_dp(&DpContext {
        src,
        tgt,
        params,
        lexical: Some((lexicon, weight)),
    })
}

/// Builds the automatic dictionary from the 1-1 links of an alignment.
///
/// Counting is per link and presence-based: each 1-1 link contributes one
/// count to every (source token, target token) pair of its spans. The
/// association score is `count(s,t) / max(count(s), count(t))`; entries
/// below `min_count` co-occurrences or below `score_floor` are dropped.
pub fn build_auto_lexicon(
    src: &[Sentence],
    tgt: &[Sentence],
    alignment: &SentenceAlignment,
    min_count: u32,
    score_floor: f64,
) -> Lexicon {
    let mut pair_counts: HashMap<(String, String), u32> = HashMap::new();
    let mut src_counts: HashMap<String, u32> = HashMap::new();
    let mut tgt_counts: HashMap<String, u32> = HashMap::new();

    for link in &alignment.links {
        if link.category != LinkCategory::OneOne {
            continue;
        }
        let s_set: BTreeSet<&str> = src[link.src_start].tokens.iter().map(|t| t.as_str()).collect();
        let t_set: BTreeSet<&str> = tgt[link.tgt_start].tokens.iter().map(|t| t.as_str()).collect();
        for s in &s_set {
            *src_counts.entry(s.to_string()).or_insert(0) += 1;
        }
        for t in &t_set {
            *tgt_counts.entry(t.to_string()).or_insert(0) += 1;
        }
        for s in &s_set {
            for t in &t_set {
                *pair_counts
                    .entry((s.to_string(), t.to_string()))
                    .or_insert(0) += 1;
            }
        }
    }

    let mut lexicon = Lexicon::new();
    for ((s, t), count) in pair_counts {
        if count < min_count {
            continue;
        }
        let denom = src_counts[&s].max(tgt_counts[&t]);
        let score = count as f64 / denom as f64;
        if score >= score_floor {
            lexicon
                .insert(&s, &t, score)
                .expect("association score is in (0, 1] by construction");
        }
    }
    lexicon
}

/// The full two-pass procedure. Pass one uses lengths (plus the external
/// lexicon when given), the automatic dictionary is built from it and merged
/// over the external one, and pass two realigns with the merged lexicon.
/// Returns the second-pass alignment and the lexicon it used.
pub fn align_two_pass(
    src: &[Sentence],
    tgt: &[Sentence],
    external_lexicon: Option<&Lexicon>,
    config: &AlignerConfig,
) -> (SentenceAlignment, Lexicon) {
    let params = &config.gale_church;
    let first = match external_lexicon {
        Some(lex) => align_with_lexicon(src, tgt, params, lex, config.lexical_weight),
        None => align_length_based(src, tgt, params),
    };

    let auto = build_auto_lexicon(
        src,
        tgt,
        &first,
        config.lexicon_min_count,
        config.lexicon_score_floor,
    );
    let mut lexicon = external_lexicon.cloned().unwrap_or_default();
    lexicon.merge(&auto);

    let second = align_with_lexicon(src, tgt, params, &lexicon, config.lexical_weight);
    (second, lexicon)
}

fn format_indices(range: std::ops::Range<usize>) -> String {
    if range.is_empty() {
        "-".to_string()
    } else {
        range.map(|i| i.to_string()).collect::<Vec<_>>().join(",")
    }
}

/// Alignment file format: one link per line,
/// `src_indices<TAB>tgt_indices<TAB>score`, indices comma-separated and
/// 0-based, an empty side written as `-`.
pub fn alignment_to_tsv(alignment: &SentenceAlignment) -> String {
    let mut out = String::new();
    for link in &alignment.links {
        out.push_str(&format!(
            "{}\t{}\t{:.6}\n",
            format_indices(link.src_indices()),
            format_indices(link.tgt_indices()),
            link.score
        ));
    }
    out
}

fn parse_indices(field: &str) -> Option<(usize, usize)> {
    if field == "-" {
        return Some((0, 0));
    }
    let mut start = None;
    let mut len = 0usize;
    let mut expect = 0usize;
    for part in field.split(',') {
        let idx: usize = part.trim().parse().ok()?;
        match start {
            None => {
                start = Some(idx);
                expect = idx + 1;
            }
            Some(_) => {
                if idx != expect {
                    return None; // spans must be contiguous
                }
                expect += 1;
            }
        }
        len += 1;
    }
    start.map(|s| (s, len))
}

pub fn alignment_from_tsv(body: &str, path: &Path) -> Result<SentenceAlignment> {
    let mut links = Vec::new();
    let mut total = 0.0;
    for (idx, line) in body.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let bad = |msg: String| Error::ParseFile {
            path: path.to_path_buf(),
            line: idx + 1,
            msg,
        };
        let mut parts = line.split('\t');
        let (src, tgt, score) = match (parts.next(), parts.next(), parts.next()) {
            (Some(a), Some(b), Some(c)) => (a, b, c),
            _ => return Err(bad("expected three tab-separated fields".to_string())),
        };
        let (src_start, src_len) =
            parse_indices(src).ok_or_else(|| bad(format!("bad source indices {src:?}")))?;
        let (tgt_start, tgt_len) =
            parse_indices(tgt).ok_or_else(|| bad(format!("bad target indices {tgt:?}")))?;
        let category = LinkCategory::from_span_sizes(src_len, tgt_len)
            .ok_or_else(|| bad(format!("no link category for spans {src_len}x{tgt_len}")))?;
        let score: f64 = score
            .trim()
            .parse()
            .map_err(|_| bad(format!("bad score {score:?}")))?;
        total += score;
        links.push(AlignmentLink {
            category,
            src_start,
            tgt_start,
            score,
        });
    }
    Ok(SentenceAlignment {
        links,
        total_cost: total,
    })
}
