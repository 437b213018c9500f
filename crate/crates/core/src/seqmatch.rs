//! Ratcliff-Obershelp sequence matching over characters.
//!
//! The similarity of two strings is `2·M / T`, where `T` is the combined
//! length of both strings and `M` is the number of matched characters:
//! recursively, the longest common contiguous block plus the matches found
//! in the unmatched regions on each side of it.

/// A common contiguous block: `a[a_start..a_start+len] == b[b_start..b_start+len]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatchBlock {
    pub a_start: usize,
    pub b_start: usize,
    pub len: usize,
}

/// Finds the longest block common to `a[a_lo..a_hi]` and `b[b_lo..b_hi]`.
///
/// Among maximal blocks the one starting earliest in `a` wins, and among
/// those the one starting earliest in `b`. Returns a zero-length block at
/// the window start when nothing matches.
fn longest_block(a: &[char], b: &[char], a_lo: usize, a_hi: usize, b_lo: usize, b_hi: usize) -> MatchBlock {
    let mut best = MatchBlock {
        a_start: a_lo,
        b_start: b_lo,
        len: 0,
    };
    if b_lo >= b_hi {
        return best;
    }

    // Rolling lengths: run_len[j] = length of the common suffix ending at
    // (i, j). Scanning i then j ascending and replacing only on strictly
    // longer runs realizes the earliest-in-a, then earliest-in-b tie-break.
    let width = b_hi - b_lo;
    let mut prev = vec![0usize; width];
    let mut curr = vec![0usize; width];
    for i in a_lo..a_hi {
        for j in b_lo..b_hi {
            let k = j - b_lo;
            if a[i] == b[j] {
                curr[k] = if k > 0 { prev[k - 1] + 1 } else { 1 };
                if curr[k] > best.len {
                    best = MatchBlock {
                        a_start: i + 1 - curr[k],
                        b_start: j + 1 - curr[k],
                        len: curr[k],
                    };
                }
            } else {
                curr[k] = 0;
            }
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    best
}

/// All matching blocks of `a` and `b` in ascending position order.
pub fn matching_blocks(a: &[char], b: &[char]) -> Vec<MatchBlock> {
    let mut blocks = Vec::new();
    // Explicit work stack of unmatched windows, in place of recursion.
    let mut queue = vec![(0usize, a.len(), 0usize, b.len())];
    while let Some((a_lo, a_hi, b_lo, b_hi)) = queue.pop() {
        if a_lo >= a_hi || b_lo >= b_hi {
            continue;
        }
        let block = longest_block(a, b, a_lo, a_hi, b_lo, b_hi);
        if block.len == 0 {
            continue;
        }
        queue.push((a_lo, block.a_start, b_lo, block.b_start));
        queue.push((
            block.a_start + block.len,
            a_hi,
            block.b_start + block.len,
            b_hi,
        ));
        blocks.push(block);
    }
    blocks.sort_by_key(|blk| (blk.a_start, blk.b_start));
    blocks
}

/// The matching-blocks similarity `2·M / T` in `[0, 1]`.
///
/// Two empty strings are identical, hence 1.0.
pub fn ratio(a: &str, b: &str) -> f64 {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let total = a.len() + b.len();
    if total == 0 {
        return 1.0;
    }
    let matched: usize = matching_blocks(&a, &b).iter().map(|blk| blk.len).sum();
    2.0 * matched as f64 / total as f64
}
