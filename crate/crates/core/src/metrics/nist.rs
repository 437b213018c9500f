//! NIST: information-weighted n-gram matches, summed arithmetically over
//! orders 1..=max_n.
//!
//! The information of an n-gram comes from pooled reference counts:
//! `info(w1..wn) = log2(count(w1..wn-1) / count(w1..wn))`, with the total
//! reference unigram count as the denominator base for n = 1. Rare words
//! therefore carry more weight. The brevity factor is
//! `exp(beta * ln^2(min(c/r̄, 1)))`, with beta fixed so the factor is 0.5
//! when the candidate is two-thirds of the mean reference length.

use std::collections::HashMap;

use super::{ensure_non_empty, ngrams, EvalPair};
use crate::error::Result;

pub fn nist(corpus: &[EvalPair], max_n: usize) -> Result<f64> {
    assert!(max_n >= 1, "max_n must be at least 1");
    ensure_non_empty(corpus)?;

    // Pooled n-gram counts over every reference of every segment.
    let mut ref_counts: Vec<HashMap<Vec<String>, usize>> = vec![HashMap::new(); max_n + 1];
    let mut total_ref_unigrams = 0usize;
    for pair in corpus {
        for reference in &pair.references {
            total_ref_unigrams += reference.len();
            for n in 1..=max_n {
                for gram in ngrams(reference, n) {
                    *ref_counts[n].entry(gram.to_vec()).or_insert(0) += 1;
                }
            }
        }
    }

    let info = |gram: &[String]| -> f64 {
        let n = gram.len();
        let joint = ref_counts[n].get(gram).copied().unwrap_or(0);
        if joint == 0 {
            return 0.0;
        }
        let context = if n == 1 {
            total_ref_unigrams
        } else {
            ref_counts[n - 1].get(&gram[..n - 1]).copied().unwrap_or(joint)
        };
        (context as f64 / joint as f64).log2()
    };

    let mut score = 0.0;
    for n in 1..=max_n {
        let mut matched_info = 0.0;
        let mut cand_ngrams = 0usize;
        for pair in corpus {
            // Candidate n-grams matched against this segment's own
            // references, occurrences clipped per reference maximum.
            let mut seg_ref: HashMap<&[String], usize> = HashMap::new();
            for reference in &pair.references {
                let mut counts: HashMap<&[String], usize> = HashMap::new();
                for gram in ngrams(reference, n) {
                    *counts.entry(gram).or_insert(0) += 1;
                }
                for (gram, count) in counts {
                    let entry = seg_ref.entry(gram).or_insert(0);
                    *entry = (*entry).max(count);
                }
            }
            let mut cand_counts: HashMap<&[String], usize> = HashMap::new();
            for gram in ngrams(&pair.candidate, n) {
                *cand_counts.entry(gram).or_insert(0) += 1;
            }
            for (gram, count) in cand_counts {
                let clip = seg_ref.get(gram).copied().unwrap_or(0);
                matched_info += count.min(clip) as f64 * info(gram);
            }
            cand_ngrams += pair.candidate.len().saturating_sub(n - 1);
        }
        if cand_ngrams > 0 {
            score += matched_info / cand_ngrams as f64;
        }
    }

    // Brevity factor: beta makes it 0.5 at c/r̄ = 2/3.
    let cand_len: usize = corpus.iter().map(|p| p.candidate.len()).sum();
    let mean_ref_len: f64 = corpus
        .iter()
        .map(|p| {
            p.references.iter().map(|r| r.len()).sum::<usize>() as f64 / p.references.len() as f64
        })
        .sum();
    if cand_len == 0 || mean_ref_len == 0.0 {
        return Ok(0.0);
    }
    let beta = 0.5f64.ln() / (2.0f64 / 3.0).ln().powi(2);
    let ratio = (cand_len as f64 / mean_ref_len).min(1.0);
    let brevity = (beta * ratio.ln().powi(2)).exp();

    Ok(score * brevity)
}
