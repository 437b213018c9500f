//! Word-alignment utilities: grow-diag-final-and symmetrization of two
//! directional alignments, and monotone/swap/discontinuous orientation
//! classification of adjacent phrase pairs.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};

/// A set of word alignment points over one sentence pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordAlignmentSet {
    points: BTreeSet<(usize, usize)>,
    pub src_len: usize,
    pub tgt_len: usize,
}

impl WordAlignmentSet {
    pub fn new(
        points: impl IntoIterator<Item = (usize, usize)>,
        src_len: usize,
        tgt_len: usize,
    ) -> Result<Self> {
        let points: BTreeSet<(usize, usize)> = points.into_iter().collect();
        for &(s, t) in &points {
            if s >= src_len || t >= tgt_len {
                return Err(Error::invalid(format!(
                    "alignment point ({s},{t}) outside {src_len}x{tgt_len}"
                )));
            }
        }
        Ok(WordAlignmentSet {
            points,
            src_len,
            tgt_len,
        })
    }

    pub fn points(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.points.iter().copied()
    }

    pub fn contains(&self, point: (usize, usize)) -> bool {
        self.points.contains(&point)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Pharaoh format: space-separated `i-j` pairs, 0-based.
    pub fn to_pharaoh(&self) -> String {
        self.points
            .iter()
            .map(|(s, t)| format!("{s}-{t}"))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Parses one Pharaoh line. Lengths are inferred from the points when
    /// not supplied.
    pub fn from_pharaoh(line: &str, lens: Option<(usize, usize)>) -> Result<Self> {
        let mut points = Vec::new();
        for token in line.split_whitespace() {
            let (s, t) = token
                .split_once('-')
                .ok_or_else(|| Error::invalid(format!("bad alignment point {token:?}")))?;
            let s: usize = s
                .parse()
                .map_err(|_| Error::invalid(format!("bad source index in {token:?}")))?;
            let t: usize = t
                .parse()
                .map_err(|_| Error::invalid(format!("bad target index in {token:?}")))?;
            points.push((s, t));
        }
        let (src_len, tgt_len) = lens.unwrap_or_else(|| {
            (
                points.iter().map(|p| p.0 + 1).max().unwrap_or(0),
                points.iter().map(|p| p.1 + 1).max().unwrap_or(0),
            )
        });
        WordAlignmentSet::new(points, src_len, tgt_len)
    }
}

const NEIGHBORS: [(isize, isize); 8] = [
    (-1, -1),
    (-1, 0),
    (-1, 1),
    (0, -1),
    (0, 1),
    (1, -1),
    (1, 0),
    (1, 1),
];

/// Grow-diag-final-and symmetrization.
///
/// Starting from the intersection of the two directional alignments, the
/// grow step repeatedly adopts union points that neighbor an existing point
/// (including diagonally) and whose source or target word is still
/// unaligned, scanning in row-major order until a full pass adds nothing.
/// The final-and step then adopts union points whose source *and* target
/// words are both still unaligned, in the same scan order.
pub fn symmetrize_gdfa(
    forward: &WordAlignmentSet,
    backward: &WordAlignmentSet,
) -> Result<WordAlignmentSet> {
    if forward.src_len != backward.src_len || forward.tgt_len != backward.tgt_len {
        return Err(Error::AlignmentLengthMismatch(format!(
            "{}x{} vs {}x{}",
            forward.src_len, forward.tgt_len, backward.src_len, backward.tgt_len
        )));
    }

    let union: BTreeSet<(usize, usize)> = forward.points().chain(backward.points()).collect();
    let mut result: BTreeSet<(usize, usize)> = forward
        .points()
        .filter(|p| backward.contains(*p))
        .collect();

    let mut src_aligned = vec![false; forward.src_len];
    let mut tgt_aligned = vec![false; forward.tgt_len];
    for &(s, t) in &result {
        src_aligned[s] = true;
        tgt_aligned[t] = true;
    }

    // GROW-DIAG until fixpoint.
    loop {
        let mut changed = false;
        for &(s, t) in &union {
            if result.contains(&(s, t)) {
                continue;
            }
            if src_aligned[s] && tgt_aligned[t] {
                continue;
            }
            let has_neighbor = NEIGHBORS.iter().any(|&(ds, dt)| {
                let ns = s as isize + ds;
                let nt = t as isize + dt;
                ns >= 0
                    && nt >= 0
                    && result.contains(&(ns as usize, nt as usize))
            });
            if has_neighbor {
                result.insert((s, t));
                src_aligned[s] = true;
                tgt_aligned[t] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    // FINAL-AND: both words must be unaligned.
    for &(s, t) in &union {
        if !src_aligned[s] && !tgt_aligned[t] {
            result.insert((s, t));
            src_aligned[s] = true;
            tgt_aligned[t] = true;
        }
    }

    WordAlignmentSet::new(result, forward.src_len, forward.tgt_len)
}

/// An inclusive token span.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhraseSpan {
    pub start: usize,
    pub end: usize,
}

impl PhraseSpan {
    pub fn new(start: usize, end: usize) -> Result<Self> {
        if start > end {
            return Err(Error::invalid(format!("span start {start} > end {end}")));
        }
        Ok(PhraseSpan { start, end })
    }
}

/// A source phrase aligned to a target phrase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhrasePair {
    pub src: PhraseSpan,
    pub tgt: PhraseSpan,
}

/// Mutual ordering of two adjacent phrase pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Monotone,
    Swap,
    Discontinuous,
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::Monotone => "monotone",
            Orientation::Swap => "swap",
            Orientation::Discontinuous => "discontinuous",
        })
    }
}

/// Classifies how `curr` sits relative to `prev`: monotone when both sides
/// continue contiguously, swap when the source advances contiguously while
/// the target immediately precedes the previous phrase, anything else
/// discontinuous.
pub fn classify_orientation(prev: &PhrasePair, curr: &PhrasePair) -> Orientation {
    let src_contiguous = curr.src.start == prev.src.end + 1;
    if src_contiguous && curr.tgt.start == prev.tgt.end + 1 {
        Orientation::Monotone
    } else if src_contiguous && curr.tgt.end + 1 == prev.tgt.start {
        Orientation::Swap
    } else {
        Orientation::Discontinuous
    }
}

/// Reads a Pharaoh alignment file: one sentence pair per line.
pub fn read_pharaoh_file(path: &Path) -> Result<Vec<WordAlignmentSet>> {
    let body = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    body.lines()
        .map(|line| WordAlignmentSet::from_pharaoh(line, None))
        .collect()
}
