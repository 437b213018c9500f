//! Translation Error Rate with greedy phrase shifts.
//!
//! Per segment: repeatedly apply the single phrase shift that most reduces
//! the word edit distance to the reference (each shift costs one edit), then
//! add the remaining edit distance. Exact shift search is NP-hard, so the
//! greedy loop approximates the true TER from above, with the customary
//! restrictions: only phrases that occur verbatim in the reference may move,
//! capped at 10 words and 50 positions of travel. The corpus score is total
//! edits over total reference words, using each segment's best-scoring
//! reference.

use super::{ensure_non_empty, EvalPair};
use crate::error::Result;

const MAX_SHIFT_SIZE: usize = 10;
const MAX_SHIFT_DIST: usize = 50;

fn word_edit_distance(a: &[String], b: &[String]) -> usize {
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut curr = vec![0usize; b.len() + 1];
    for (i, wa) in a.iter().enumerate() {
        curr[0] = i + 1;
        for (j, wb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(wa != wb);
            curr[j + 1] = sub.min(prev[j + 1] + 1).min(curr[j] + 1);
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    prev[b.len()]
}

/// Moves `hyp[start..start+len]` so that it begins at `dest` (interpreted on
/// the sequence with the phrase removed).
fn apply_shift(hyp: &[String], start: usize, len: usize, dest: usize) -> Vec<String> {
    let mut rest: Vec<String> = Vec::with_capacity(hyp.len());
    rest.extend_from_slice(&hyp[..start]);
    rest.extend_from_slice(&hyp[start + len..]);
    let mut out = Vec::with_capacity(hyp.len());
    out.extend_from_slice(&rest[..dest]);
    out.extend_from_slice(&hyp[start..start + len]);
    out.extend_from_slice(&rest[dest..]);
    out
}

/// Edits for one hypothesis/reference pair: greedy shifts plus final edit
/// distance.
fn segment_edits(hyp: &[String], reference: &[String]) -> usize {
    let mut hyp = hyp.to_vec();
    let mut edits = 0usize;
    let mut current = word_edit_distance(&hyp, reference);

    // Only phrases that occur verbatim in the reference are worth moving;
    // this is the customary pruning that keeps the search tractable.
    let mut ref_phrases: std::collections::HashSet<&[String]> = std::collections::HashSet::new();
    for len in 1..=MAX_SHIFT_SIZE.min(reference.len()) {
        for window in reference.windows(len) {
            ref_phrases.insert(window);
        }
    }

    loop {
        // The best shift: maximal reduction, ties to the smallest
        // (start, len, dest) triple.
        let mut best: Option<(usize, usize, usize, usize)> = None; // (new_dist, start, len, dest)
        for start in 0..hyp.len() {
            for len in 1..=MAX_SHIFT_SIZE.min(hyp.len() - start) {
                if !ref_phrases.contains(&hyp[start..start + len]) {
                    continue;
                }
                for dest in 0..=hyp.len() - len {
                    if dest == start {
                        continue;
                    }
                    let travel = dest.abs_diff(start);
                    if travel > MAX_SHIFT_DIST {
                        continue;
                    }
                    let shifted = apply_shift(&hyp, start, len, dest);
                    let dist = word_edit_distance(&shifted, reference);
                    if dist < current {
                        let candidate = (dist, start, len, dest);
                        if best.map_or(true, |b| candidate < b) {
                            best = Some(candidate);
                        }
                    }
                }
            }
        }
        match best {
            Some((dist, start, len, dest)) => {
                hyp = apply_shift(&hyp, start, len, dest);
                current = dist;
                edits += 1; // the shift itself
            }
            None => break,
        }
    }

    edits + current
}

pub fn ter(corpus: &[EvalPair]) -> Result<f64> {
    ensure_non_empty(corpus)?;

    let mut total_edits = 0usize;
    let mut total_ref_words = 0usize;
    for pair in corpus {
        // Best reference: fewest edits, ties to the first listed.
        let (edits, ref_len) = pair
            .references
            .iter()
            .map(|r| (segment_edits(&pair.candidate, r), r.len()))
            .min_by_key(|&(edits, _)| edits)
            .expect("EvalPair guarantees at least one reference");
        total_edits += edits;
        total_ref_words += ref_len;
    }

    if total_ref_words == 0 {
        return Err(crate::error::Error::invalid(
            "TER reference corpus has zero words",
        ));
    }
    Ok(total_edits as f64 / total_ref_words as f64)
}
