//! Tiered similarity filtering of translation/target line pairs.
//!
//! Every source line arrives with an intermediate translation (`src.trans`).
//! The filter scores that translation against candidate target lines with a
//! ladder of comparators — cheap ones first, escalating to slower and more
//! accurate ones only when the cheap tier cannot clear its acceptance
//! threshold — and keeps at most one target line per source line. Because
//! candidates may come from anywhere in the document, the filter recovers
//! sentence reorderings the monotone aligner cannot express.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seqmatch;
use crate::text::{expand_synonyms, remove_stopwords, tokenize, StopwordSet, SynonymLexicon};

/// A similarity value, guaranteed to lie in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SimilarityScore(f64);

impl SimilarityScore {
    pub fn new(value: f64) -> Self {
        assert!(
            (0.0..=1.0).contains(&value),
            "similarity {value} outside [0, 1]"
        );
        SimilarityScore(value)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// The comparator functions, cheapest first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparator {
    /// Fraction of translation tokens found in the candidate. This is the
    /// naive word-count measure; it mis-ranks long candidates and is kept
    /// out of the default ladder.
    Overlap,
    /// Word overlap normalized by both lengths: `2·|a ∩ b| / (|a| + |b|)`.
    NormalizedOverlap,
    /// Character-level matching-blocks ratio.
    Ratio,
    /// Matching-blocks ratio maximized over synonym substitutions.
    SynonymRatio,
}

impl Comparator {
    pub fn name(self) -> &'static str {
        match self {
            Comparator::Overlap => "overlap",
            Comparator::NormalizedOverlap => "normalized_overlap",
            Comparator::Ratio => "ratio",
            Comparator::SynonymRatio => "synonym_ratio",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "overlap" => Some(Comparator::Overlap),
            "normalized_overlap" => Some(Comparator::NormalizedOverlap),
            "ratio" => Some(Comparator::Ratio),
            "synonym_ratio" => Some(Comparator::SynonymRatio),
            _ => None,
        }
    }
}

/// One rung of the ladder: a comparator and its acceptance threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterTier {
    pub comparator: Comparator,
    pub threshold: f64,
}

/// The ordered ladder, fast tiers first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TierLadder(Vec<FilterTier>);

impl Default for TierLadder {
    fn default() -> Self {
        TierLadder(vec![
            FilterTier {
                comparator: Comparator::NormalizedOverlap,
                threshold: 0.7,
            },
            FilterTier {
                comparator: Comparator::Ratio,
                threshold: 0.6,
            },
            FilterTier {
                comparator: Comparator::SynonymRatio,
                threshold: 0.6,
            },
        ])
    }
}

impl TierLadder {
    pub fn new(tiers: Vec<FilterTier>) -> Result<Self> {
        if tiers.is_empty() {
            return Err(Error::config("tier ladder must not be empty"));
        }
        for tier in &tiers {
            if !(0.0..=1.0).contains(&tier.threshold) {
                return Err(Error::config(format!(
                    "tier threshold {} outside [0, 1]",
                    tier.threshold
                )));
            }
        }
        Ok(TierLadder(tiers))
    }

    pub fn tiers(&self) -> &[FilterTier] {
        &self.0
    }

    pub fn names(&self) -> Vec<String> {
        self.0.iter().map(|t| t.comparator.name().to_string()).collect()
    }

    pub fn validate(&self) -> Result<()> {
        Self::new(self.0.clone()).map(|_| ())
    }

    /// Config format: one `comparator threshold` per line, in execution
    /// order; blank lines and `#` comments ignored.
    pub fn from_config(body: &str, path: &Path) -> Result<Self> {
        let mut tiers = Vec::new();
        for (idx, line) in body.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |msg: String| Error::ParseFile {
                path: path.to_path_buf(),
                line: idx + 1,
                msg,
            };
            let mut parts = line.split_whitespace();
            let (name, threshold) = match (parts.next(), parts.next(), parts.next()) {
                (Some(n), Some(t), None) => (n, t),
                _ => return Err(bad("expected `comparator threshold`".to_string())),
            };
            let comparator = Comparator::parse(name)
                .ok_or_else(|| bad(format!("unknown comparator {name:?}")))?;
            let threshold: f64 = threshold
                .parse()
                .map_err(|_| bad(format!("bad threshold {threshold:?}")))?;
            tiers.push(FilterTier {
                comparator,
                threshold,
            });
        }
        TierLadder::new(tiers)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let body = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_config(&body, path)
    }
}

/// The outcome for one source line: the chosen target (if any tier accepted
/// one), the best similarity seen, and the accepting tier's index.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchDecision {
    pub src_index: usize,
    pub tgt_index: Option<usize>,
    pub score: SimilarityScore,
    pub tier: Option<usize>,
}

/// `2·|multiset intersection| / (|a| + |b|)`. Both sides empty compare
/// equal (1.0); exactly one side empty scores 0.
pub fn overlap_similarity(a: &[String], b: &[String]) -> SimilarityScore {
    let total = a.len() + b.len();
    if total == 0 {
        return SimilarityScore::new(1.0);
    }
    SimilarityScore::new(2.0 * multiset_intersection(a, b) as f64 / total as f64)
}

/// The naive count-based measure: the fraction of `a`'s tokens found in
/// `b`. Kept for comparison; it over-rewards long candidates.
pub fn containment_similarity(a: &[String], b: &[String]) -> SimilarityScore {
    if a.is_empty() && b.is_empty() {
        return SimilarityScore::new(1.0);
    }
    if a.is_empty() || b.is_empty() {
        return SimilarityScore::new(0.0);
    }
    SimilarityScore::new(multiset_intersection(a, b) as f64 / a.len() as f64)
}

fn multiset_intersection(a: &[String], b: &[String]) -> usize {
    let mut counts = std::collections::HashMap::new();
    for t in b {
        *counts.entry(t.as_str()).or_insert(0usize) += 1;
    }
    let mut shared = 0;
    for t in a {
        if let Some(c) = counts.get_mut(t.as_str()) {
            if *c > 0 {
                *c -= 1;
                shared += 1;
            }
        }
    }
    shared
}

/// Character-level matching-blocks ratio `2·M / T`.
pub fn ratio_similarity(a: &str, b: &str) -> SimilarityScore {
    SimilarityScore::new(seqmatch::ratio(a, b))
}

/// Best matching-blocks ratio over the synonym-substituted variants of both
/// token sequences. The originals are always among the variants, so this is
/// never below the plain ratio.
pub fn synonym_similarity(
    a: &[String],
    b: &[String],
    lex: &SynonymLexicon,
    max_variants: usize,
) -> SimilarityScore {
    let a_variants = expand_synonyms(a, lex, max_variants);
    let b_variants = expand_synonyms(b, lex, max_variants);
    let mut best = 0.0f64;
    for av in &a_variants {
        let a_joined = av.join(" ");
        for bv in &b_variants {
            let r = seqmatch::ratio(&a_joined, &bv.join(" "));
            if r > best {
                best = r;
            }
            if best == 1.0 {
                return SimilarityScore::new(1.0);
            }
        }
    }
    SimilarityScore::new(best)
}

/// Everything the comparators need besides the two lines.
#[derive(Debug, Clone)]
pub struct FilterOptions {
    pub tiers: TierLadder,
    pub stopwords: StopwordSet,
    pub synonyms: SynonymLexicon,
    pub max_variants: usize,
}

impl FilterOptions {
    pub fn new(tiers: TierLadder, stopwords: StopwordSet, synonyms: SynonymLexicon) -> Self {
        FilterOptions {
            tiers,
            stopwords,
            synonyms,
            max_variants: 64,
        }
    }
}

/// Tokenized, stopword-filtered view of a line, with the joined string the
/// character-level comparators run on.
#[derive(Debug, Clone)]
struct PreparedLine {
    tokens: Vec<String>,
    joined: String,
}

impl PreparedLine {
    fn new(line: &str, stopwords: &StopwordSet) -> Self {
        let tokens = remove_stopwords(&tokenize(line), stopwords);
        let joined = tokens.join(" ");
        PreparedLine { tokens, joined }
    }
}

fn score_pair(
    comparator: Comparator,
    a: &PreparedLine,
    b: &PreparedLine,
    opts: &FilterOptions,
) -> SimilarityScore {
    match comparator {
        Comparator::Overlap => containment_similarity(&a.tokens, &b.tokens),
        Comparator::NormalizedOverlap => overlap_similarity(&a.tokens, &b.tokens),
        Comparator::Ratio => ratio_similarity(&a.joined, &b.joined),
        Comparator::SynonymRatio => {
            synonym_similarity(&a.tokens, &b.tokens, &opts.synonyms, opts.max_variants)
        }
    }
}

fn decide(
    src_index: usize,
    trans: &PreparedLine,
    candidates: &[(usize, &PreparedLine)],
    opts: &FilterOptions,
) -> MatchDecision {
    let mut best_seen = 0.0f64;
    for (tier_idx, tier) in opts.tiers.tiers().iter().enumerate() {
        let mut tier_best: Option<(usize, f64)> = None;
        for &(tgt_index, candidate) in candidates {
            let score = score_pair(tier.comparator, trans, candidate, opts).value();
            if score > best_seen {
                best_seen = score;
            }
            let better = tier_best.map_or(true, |(_, s)| score > s);
            if better {
                tier_best = Some((tgt_index, score));
            }
        }
        if let Some((tgt_index, score)) = tier_best {
            if score >= tier.threshold {
                return MatchDecision {
                    src_index,
                    tgt_index: Some(tgt_index),
                    score: SimilarityScore::new(score),
                    tier: Some(tier_idx),
                };
            }
        }
    }
    MatchDecision {
        src_index,
        tgt_index: None,
        score: SimilarityScore::new(best_seen),
        tier: None,
    }
}

/// Scores a translated line against an indexed window of target lines.
///
/// Tiers run in order; the first whose best candidate clears its threshold
/// decides the match (candidate ties go to the lowest target index). When no
/// tier accepts, the decision carries the best score seen and no target.
pub fn match_best_candidate(
    trans_line: &str,
    candidates: &[(usize, &str)],
    opts: &FilterOptions,
) -> MatchDecision {
    let trans = PreparedLine::new(trans_line, &opts.stopwords);
    let prepared: Vec<(usize, PreparedLine)> = candidates
        .iter()
        .map(|&(i, line)| (i, PreparedLine::new(line, &opts.stopwords)))
        .collect();
    let by_ref: Vec<(usize, &PreparedLine)> = prepared.iter().map(|(i, p)| (*i, p)).collect();
    decide(0, &trans, &by_ref, opts)
}

/// Candidate-window policy for [`filter_corpus`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowPolicy {
    /// Whole document; this is what recovers crossing alignments.
    Unbounded,
    /// Only targets within ± the given distance of the suggested position.
    Around(usize),
    /// Unbounded for documents up to 500 lines, otherwise ±50.
    Auto,
}

impl WindowPolicy {
    fn radius(self, tgt_lines: usize) -> Option<usize> {
        match self {
            WindowPolicy::Unbounded => None,
            WindowPolicy::Around(r) => Some(r),
            WindowPolicy::Auto => {
                if tgt_lines <= 500 {
                    None
                } else {
                    Some(50)
                }
            }
        }
    }
}

impl Default for WindowPolicy {
    fn default() -> Self {
        WindowPolicy::Auto
    }
}

/// An accepted sentence pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AcceptedPair {
    pub src_index: usize,
    pub tgt_index: usize,
    pub src: String,
    pub tgt: String,
    pub score: f64,
    pub tier: String,
}

/// Per-document execution counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterReport {
    pub src_lines: usize,
    pub tgt_lines: usize,
    /// Source lines that entered the matching phase.
    pub considered: usize,
    pub accepted: usize,
    pub rejected: usize,
    /// Accepted counts per ladder tier, in ladder order.
    pub per_tier: Vec<usize>,
}

struct QueueEntry {
    score: f64,
    src_index: usize,
    decision: MatchDecision,
}

impl PartialEq for QueueEntry {
    fn eq(&self, other: &Self) -> bool {
        self.score == other.score && self.src_index == other.src_index
    }
}
impl Eq for QueueEntry {}
impl Ord for QueueEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Highest score first; ties by lower source index.
        self.score
            .partial_cmp(&other.score)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.src_index.cmp(&self.src_index))
    }
}
impl PartialOrd for QueueEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Filters a whole document.
///
/// Source lines are matched greedily in order of descending best score, and
/// each target line can be claimed once; a line whose chosen target was
/// already taken is re-scored against the remaining candidates before being
/// given up on. `centers`, when provided, supplies the aligner's suggested
/// target position per source line for bounded windows; otherwise positions
/// are interpolated proportionally.
pub fn filter_corpus(
    src_lines: &[String],
    trans_lines: &[String],
    tgt_lines: &[String],
    opts: &FilterOptions,
    window: WindowPolicy,
    centers: Option<&[usize]>,
) -> Result<(Vec<AcceptedPair>, FilterReport)> {
    if src_lines.len() != trans_lines.len() {
        return Err(Error::LineCountMismatch {
            src: src_lines.len(),
            trans: trans_lines.len(),
        });
    }
    if let Some(centers) = centers {
        if centers.len() != src_lines.len() {
            return Err(Error::invalid(format!(
                "{} window centers for {} source lines",
                centers.len(),
                src_lines.len()
            )));
        }
    }

    let prepared_tgt: Vec<PreparedLine> = tgt_lines
        .iter()
        .map(|l| PreparedLine::new(l, &opts.stopwords))
        .collect();
    let prepared_trans: Vec<PreparedLine> = trans_lines
        .iter()
        .map(|l| PreparedLine::new(l, &opts.stopwords))
        .collect();

    let radius = window.radius(tgt_lines.len());
    let window_of = |src_index: usize| -> (usize, usize) {
        match radius {
            None => (0, tgt_lines.len()),
            Some(r) => {
                if tgt_lines.is_empty() {
                    return (0, 0);
                }
                let center = match centers {
                    Some(c) => c[src_index].min(tgt_lines.len() - 1),
                    None => {
                        // Proportional interpolation of the aligner position.
                        if src_lines.len() <= 1 {
                            0
                        } else {
                            src_index * (tgt_lines.len() - 1) / (src_lines.len() - 1)
                        }
                    }
                };
                (center.saturating_sub(r), (center + r + 1).min(tgt_lines.len()))
            }
        }
    };

    let candidates_of = |src_index: usize, claimed: &[bool]| -> Vec<(usize, &PreparedLine)> {
        let (lo, hi) = window_of(src_index);
        (lo..hi)
            .filter(|&t| !claimed[t])
            .map(|t| (t, &prepared_tgt[t]))
            .collect()
    };

    let claimed = vec![false; tgt_lines.len()];
    let mut heap = BinaryHeap::new();
    for (src_index, trans) in prepared_trans.iter().enumerate() {
        let decision = decide(src_index, trans, &candidates_of(src_index, &claimed), opts);
        heap.push(QueueEntry {
            score: decision.score.value(),
            src_index,
            decision,
        });
    }

    let mut claimed = claimed;
    let mut accepted: Vec<AcceptedPair> = Vec::new();
    let mut per_tier = vec![0usize; opts.tiers.tiers().len()];

    while let Some(entry) = heap.pop() {
        let decision = entry.decision;
        let src_index = entry.src_index;
        match decision.tgt_index {
            Some(tgt_index) if !claimed[tgt_index] => {
                claimed[tgt_index] = true;
                let tier_idx = decision.tier.expect("accepted decision names its tier");
                per_tier[tier_idx] += 1;
                accepted.push(AcceptedPair {
                    src_index,
                    tgt_index,
                    src: src_lines[src_index].clone(),
                    tgt: tgt_lines[tgt_index].clone(),
                    score: decision.score.value(),
                    tier: opts.tiers.tiers()[tier_idx].comparator.name().to_string(),
                });
            }
            Some(_) => {
                // Chosen target was claimed by a higher-scoring line;
                // re-evaluate against what is left.
                let redo = decide(
                    src_index,
                    &prepared_trans[src_index],
                    &candidates_of(src_index, &claimed),
                    opts,
                );
                if redo.tgt_index.is_some() {
                    heap.push(QueueEntry {
                        score: redo.score.value(),
                        src_index,
                        decision: redo,
                    });
                }
            }
            None => {}
        }
    }

    accepted.sort_by_key(|p| p.src_index);
    let report = FilterReport {
        src_lines: src_lines.len(),
        tgt_lines: tgt_lines.len(),
        considered: src_lines.len(),
        accepted: accepted.len(),
        rejected: src_lines.len() - accepted.len(),
        per_tier,
    };
    Ok((accepted, report))
}

/// `accepted.tsv`: `src<TAB>tgt<TAB>score<TAB>tier` per pair. Tabs inside
/// sentences (none survive segmentation) would be written as spaces.
pub fn accepted_to_tsv(pairs: &[AcceptedPair]) -> String {
    let mut out = String::new();
    for p in pairs {
        out.push_str(&format!(
            "{}\t{}\t{:.6}\t{}\n",
            p.src.replace('\t', " "),
            p.tgt.replace('\t', " "),
            p.score,
            p.tier
        ));
    }
    out
}
