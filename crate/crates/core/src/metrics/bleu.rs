//! Corpus BLEU: clipped modified n-gram precision, geometric mean over
//! orders 1..=max_n with uniform weights, times the brevity penalty
//! `exp(1 - r/c)` when the candidate is shorter than the reference length.
//! No smoothing: any zero precision zeroes the score.

use std::collections::HashMap;

use super::{ensure_non_empty, ngrams, EvalPair};
use crate::error::Result;

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], usize> {
    let mut counts = HashMap::new();
    for gram in ngrams(tokens, n) {
        *counts.entry(gram).or_insert(0) += 1;
    }
    counts
}

/// The closest reference length to `cand_len`; length ties prefer the
/// shorter reference.
fn closest_ref_len(cand_len: usize, references: &[Vec<String>]) -> usize {
    references
        .iter()
        .map(|r| r.len())
        .min_by_key(|&len| {
            let diff = (len as isize - cand_len as isize).abs();
            (diff, len)
        })
        .expect("EvalPair guarantees at least one reference")
}

pub fn bleu(corpus: &[EvalPair], max_n: usize) -> Result<f64> {
    assert!(max_n >= 1, "max_n must be at least 1");
    ensure_non_empty(corpus)?;

    let mut matched = vec![0usize; max_n];
    let mut total = vec![0usize; max_n];
    let mut cand_len = 0usize;
    let mut ref_len = 0usize;

    for pair in corpus {
        cand_len += pair.candidate.len();
        ref_len += closest_ref_len(pair.candidate.len(), &pair.references);

        for n in 1..=max_n {
            let cand_counts = ngram_counts(&pair.candidate, n);
            // Clip to the maximum count of the n-gram in any single reference.
            let mut max_ref_counts: HashMap<&[String], usize> = HashMap::new();
            for reference in &pair.references {
                for (gram, count) in ngram_counts(reference, n) {
                    let entry = max_ref_counts.entry(gram).or_insert(0);
                    *entry = (*entry).max(count);
                }
            }
            for (gram, count) in &cand_counts {
                let clip = max_ref_counts.get(gram).copied().unwrap_or(0);
                matched[n - 1] += count.min(&clip);
            }
            total[n - 1] += pair.candidate.len().saturating_sub(n - 1);
        }
    }

    if cand_len == 0 {
        return Ok(0.0);
    }

    let mut log_sum = 0.0;
    for n in 0..max_n {
        if matched[n] == 0 || total[n] == 0 {
            return Ok(0.0);
        }
        log_sum += (matched[n] as f64 / total[n] as f64).ln();
    }
    let geo_mean = (log_sum / max_n as f64).exp();

    let bp = if cand_len < ref_len {
        (1.0 - ref_len as f64 / cand_len as f64).exp()
    } else {
        1.0
    };
    Ok(geo_mean * bp)
}

/// Unigram precision before and after clipping, for invariant checks.
#[cfg(test)]
fn unigram_precisions(pair: &EvalPair) -> (f64, f64) {
    let cand_counts = ngram_counts(&pair.candidate, 1);
    let mut max_ref_counts: HashMap<&[String], usize> = HashMap::new();
    for reference in &pair.references {
        for (gram, count) in ngram_counts(reference, 1) {
            let entry = max_ref_counts.entry(gram).or_insert(0);
            *entry = (*entry).max(count);
        }
    }
    let mut clipped = 0usize;
    let mut unclipped = 0usize;
    for (gram, count) in &cand_counts {
        if let Some(&clip) = max_ref_counts.get(gram) {
            clipped += (*count).min(clip);
            unclipped += *count;
        }
    }
    let denom = pair.candidate.len().max(1) as f64;
    (clipped as f64 / denom, unclipped as f64 / denom)
}
