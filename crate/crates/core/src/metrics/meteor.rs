//! METEOR restricted to exact unigram matches (no stemming, synonymy, or
//! paraphrase stages).
//!
//! Per segment the best reference contributes its match statistics; the
//! corpus score is computed from the pooled statistics:
//! `F = 10PR / (R + 9P)`, chunk penalty `0.5 * (chunks/matches)^3`,
//! score `F * (1 - penalty)`.

use std::collections::HashMap;

use super::{ensure_non_empty, EvalPair};
use crate::error::Result;

/// Match statistics of one candidate/reference pairing.
#[derive(Debug, Clone, Copy, Default)]
struct AlignStats {
    matches: usize,
    chunks: usize,
    cand_len: usize,
    ref_len: usize,
}

impl AlignStats {
    fn score(&self) -> f64 {
        score_from(
            self.matches as f64,
            self.chunks as f64,
            self.cand_len as f64,
            self.ref_len as f64,
        )
    }
}

fn score_from(matches: f64, chunks: f64, cand_len: f64, ref_len: f64) -> f64 {
    if matches == 0.0 || cand_len == 0.0 || ref_len == 0.0 {
        return 0.0;
    }
    let p = matches / cand_len;
    let r = matches / ref_len;
    let f = 10.0 * p * r / (r + 9.0 * p);
    let penalty = 0.5 * (chunks / matches).powi(3);
    f * (1.0 - penalty)
}

/// Aligns candidate tokens to reference tokens by exact match, walking the
/// candidate left to right and preferring the reference position adjacent
/// to the previous match (which keeps runs together), otherwise the
/// earliest unused occurrence. The match count is maximal for exact
/// matching; the chunk count is a deterministic upper bound on the minimum.
fn align_exact(candidate: &[String], reference: &[String]) -> AlignStats {
    let mut positions: HashMap<&str, Vec<usize>> = HashMap::new();
    for (j, w) in reference.iter().enumerate() {
        positions.entry(w.as_str()).or_default().push(j);
    }
    let mut used = vec![false; reference.len()];
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut prev_ref: Option<usize> = None;

    for (i, w) in candidate.iter().enumerate() {
        let Some(occurrences) = positions.get(w.as_str()) else {
            continue;
        };
        // Adjacent continuation first.
        let adjacent = prev_ref
            .map(|p| p + 1)
            .filter(|&j| j < reference.len() && !used[j] && reference[j] == *w);
        let chosen = adjacent.or_else(|| occurrences.iter().copied().find(|&j| !used[j]));
        if let Some(j) = chosen {
            used[j] = true;
            pairs.push((i, j));
            prev_ref = Some(j);
        }
    }

    let mut chunks = 0;
    for (k, &(ci, rj)) in pairs.iter().enumerate() {
        let continues = k > 0 && {
            let (pci, prj) = pairs[k - 1];
            ci == pci + 1 && rj == prj + 1
        };
        if !continues {
            chunks += 1;
        }
    }

    AlignStats {
        matches: pairs.len(),
        chunks,
        cand_len: candidate.len(),
        ref_len: reference.len(),
    }
}

pub fn meteor(corpus: &[EvalPair]) -> Result<f64> {
    ensure_non_empty(corpus)?;

    let mut matches = 0.0;
    let mut chunks = 0.0;
    let mut cand_len = 0.0;
    let mut ref_len = 0.0;

    for pair in corpus {
        // Best reference by segment-level score; ties keep the first.
        let best = pair
            .references
            .iter()
            .map(|r| align_exact(&pair.candidate, r))
            .max_by(|a, b| {
                a.score()
                    .partial_cmp(&b.score())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("EvalPair guarantees at least one reference");
        matches += best.matches as f64;
        chunks += best.chunks as f64;
        cand_len += best.cand_len as f64;
        ref_len += best.ref_len as f64;
    }

    Ok(score_from(matches, chunks, cand_len, ref_len))
}

#[cfg(test)]
mod tests {
    use super::super::tests::pair;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_identical_token_scores_half() {
        // P = R = F = 1, one chunk over one match: penalty 0.5.
        let corpus = vec![pair("hello", &["hello"])];
        assert!((meteor(&corpus).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn four_identical_tokens() {
        // penalty = 0.5 * (1/4)^3 = 1/128.
        let corpus = vec![pair("a b c d", &["a b c d"])];
        assert!((meteor(&corpus).unwrap() - 127.0 / 128.0).abs() < 1e-12);
    }

    #[test]
    fn identity_matches_closed_form_for_any_length() {
        for m in 1..10usize {
            let words: Vec<String> = (0..m).map(|i| format!("w{i}")).collect();
            let corpus = vec![EvalPair::new(words.clone(), vec![words]).unwrap()];
            let expected = 1.0 - 0.5 / (m as f64).powi(3);
            assert!((meteor(&corpus).unwrap() - expected).abs() < 1e-12, "m={m}");
        }
    }

    #[test]
    fn disjoint_tokens_score_zero() {
        let corpus = vec![pair("a b", &["x y"])];
        assert_eq!(meteor(&corpus).unwrap(), 0.0);
    }

    #[test]
    fn reordering_costs_chunks() {
        let ordered = meteor(&[pair("a b c d", &["a b c d"])]).unwrap();
        let shuffled = meteor(&[pair("c d a b", &["a b c d"])]).unwrap();
        assert!(shuffled < ordered);
        assert!(shuffled > 0.0);
    }

    #[test]
    fn adjacency_preference_keeps_runs_together() {
        // "b a" against "a b a": matching the second "a" keeps one chunk.
        let stats = align_exact(
            &super::super::tests::toks("b a"),
            &super::super::tests::toks("a b a"),
        );
        assert_eq!(stats.matches, 2);
        assert_eq!(stats.chunks, 1);
    }

    #[test]
    fn best_reference_wins() {
        let corpus = vec![pair("a b c", &["x y z", "a b c"])];
        assert!((meteor(&corpus).unwrap() - (1.0 - 0.5 / 27.0)).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn meteor_stays_in_unit_interval(
            cand in proptest::collection::vec("[a-c]{1,2}", 0..10),
            refw in proptest::collection::vec("[a-c]{1,2}", 1..10),
        ) {
            let corpus = vec![EvalPair::new(cand, vec![refw]).unwrap()];
            let score = meteor(&corpus).unwrap();
            prop_assert!((0.0..=1.0).contains(&score));
        }
    }
}
