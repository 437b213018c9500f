//! Corpus-level MT evaluation metrics: BLEU, NIST, METEOR (exact matches
//! only), and TER.
//!
//! The definitions and constants are the canonical published ones; see
//! METRICS.md at the repository root for the formulas and worked examples.
//! All four consume lowercase token sequences so that scores reproduce
//! bit-for-bit given the same tokenizer.

mod bleu;
mod meteor;
mod nist;
mod ter;

pub use bleu::bleu;
pub use meteor::meteor;
pub use nist::nist;
pub use ter::ter;

use serde::Serialize;

use crate::error::{Error, Result};

/// One candidate translation with its reference translations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalPair {
    pub candidate: Vec<String>,
    pub references: Vec<Vec<String>>,
}

impl EvalPair {
    pub fn new(candidate: Vec<String>, references: Vec<Vec<String>>) -> Result<Self> {
        if references.is_empty() {
            return Err(Error::invalid("an EvalPair needs at least one reference"));
        }
        Ok(EvalPair {
            candidate,
            references,
        })
    }
}

/// All four scores over one corpus.
#[derive(Debug, Clone, Serialize)]
pub struct MetricReport {
    pub bleu: f64,
    pub nist: f64,
    pub meteor: f64,
    pub ter: f64,
    pub segment_count: usize,
}

impl MetricReport {
    /// Display convention of most MT papers: BLEU, METEOR and TER as
    /// percentages; NIST is already on its natural scale.
    pub fn as_percent(&self) -> MetricReport {
        MetricReport {
            bleu: self.bleu * 100.0,
            nist: self.nist,
            meteor: self.meteor * 100.0,
            ter: self.ter * 100.0,
            segment_count: self.segment_count,
        }
    }
}

/// Runs the full suite with the standard orders (BLEU n ≤ 4, NIST n ≤ 5).
pub fn evaluate(corpus: &[EvalPair]) -> Result<MetricReport> {
    Ok(MetricReport {
        bleu: bleu(corpus, 4)?,
        nist: nist(corpus, 5)?,
        meteor: meteor(corpus)?,
        ter: ter(corpus)?,
        segment_count: corpus.len(),
    })
}

pub(crate) fn ensure_non_empty(corpus: &[EvalPair]) -> Result<()> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    Ok(())
}

/// N-grams of `tokens` as token-slice windows.
pub(crate) fn ngrams(tokens: &[String], n: usize) -> impl Iterator<Item = &[String]> {
    tokens.windows(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn toks(words: &str) -> Vec<String> {
        words.split_whitespace().map(|w| w.to_string()).collect()
    }

    pub(crate) fn pair(candidate: &str, references: &[&str]) -> EvalPair {
        EvalPair::new(
            toks(candidate),
            references.iter().map(|r| toks(r)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn evaluate_reports_identity_values() {
        let corpus = vec![pair("a b c d", &["a b c d"]), pair("e f g h", &["e f g h"])];
        let report = evaluate(&corpus).unwrap();
        assert!((report.bleu - 1.0).abs() < 1e-12);
        assert_eq!(report.ter, 0.0);
        assert!(report.meteor > 0.95 && report.meteor < 1.0);
        assert!(report.nist > 0.0);
        assert_eq!(report.segment_count, 2);
    }

    #[test]
    fn all_metrics_reject_empty_corpus() {
        assert!(matches!(bleu(&[], 4), Err(Error::EmptyCorpus)));
        assert!(matches!(nist(&[], 5), Err(Error::EmptyCorpus)));
        assert!(matches!(meteor(&[]), Err(Error::EmptyCorpus)));
        assert!(matches!(ter(&[]), Err(Error::EmptyCorpus)));
    }

    #[test]
    fn percent_scaling_leaves_nist_alone() {
        let report = MetricReport {
            bleu: 0.2051,
            nist: 5.31,
            meteor: 0.4923,
            ter: 0.6911,
            segment_count: 1000,
        };
        let pct = report.as_percent();
        assert!((pct.bleu - 20.51).abs() < 1e-9);
        assert!((pct.nist - 5.31).abs() < 1e-9);
        assert!((pct.meteor - 49.23).abs() < 1e-9);
        assert!((pct.ter - 69.11).abs() < 1e-9);
    }

    #[test]
    fn eval_pair_requires_references() {
        assert!(EvalPair::new(toks("a"), vec![]).is_err());
    }

    mod relabeling {
        use super::*;
        use proptest::prelude::*;

        /// Bijective token relabeling must not move any score.
        fn relabel(words: &[String]) -> Vec<String> {
            words.iter().map(|w| format!("{w}@")).collect()
        }

        proptest! {
            #[test]
            fn scores_are_alphabet_invariant(
                cand in proptest::collection::vec("[a-d]{1,2}", 1..8),
                refw in proptest::collection::vec("[a-d]{1,2}", 1..8),
            ) {
                let original = vec![EvalPair::new(cand.clone(), vec![refw.clone()]).unwrap()];
                let renamed = vec![EvalPair::new(relabel(&cand), vec![relabel(&refw)]).unwrap()];
                for (a, b) in [
                    (bleu(&original, 4).unwrap(), bleu(&renamed, 4).unwrap()),
                    (nist(&original, 5).unwrap(), nist(&renamed, 5).unwrap()),
                    (meteor(&original).unwrap(), meteor(&renamed).unwrap()),
                    (ter(&original).unwrap(), ter(&renamed).unwrap()),
                ] {
                    prop_assert!((a - b).abs() < 1e-12);
                }
            }
        }
    }
}
