//! Cover-index queries answered from a finished [`Cst`].
//!
//! On the edge into an explicit node `v`, the factor of length `j` covers
//! `c(v) - Δ(v)·(|v| - j)` positions. Every edge therefore contributes one
//! line segment in the (length, covered) plane, and the pointwise maximum of
//! those segments at integer lengths gives the best coverage per length.

use std::cmp::Ordering;

use crate::cst_builder::Cst;
use crate::error::{Error, Result};
use crate::suffix_tree::{Locus, NodeId};

/// A factor named by its first occurrence and length; `last` is the start
/// of its last occurrence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FactorRef {
    pub start: usize,
    pub length: usize,
    pub last: usize,
}

impl FactorRef {
    pub fn bytes<'a>(&self, text: &'a [u8]) -> &'a [u8] {
        &text[self.start - 1..self.start - 1 + self.length]
    }

    fn on_edge(cst: &Cst, v: NodeId, length: usize) -> FactorRef {
        FactorRef { start: cst.first_occ(v), length, last: cst.last_occ(v) }
    }
}

/// A factor together with the number of positions its occurrences cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartialCover {
    pub factor: FactorRef,
    pub coverage: usize,
}

/// Edges that carry at least one locus: everything but the root and
/// terminator-only leaf edges.
fn edges(cst: &Cst) -> impl Iterator<Item = NodeId> + '_ {
    let tree = cst.tree();
    tree.nodes().filter(move |&v| v != tree.root() && tree.edge_len(v) > 0)
}

/// `Covered(u, w)` for the factor `u` at `locus`, in O(1).
pub fn covered_index(cst: &Cst, locus: Locus) -> Result<usize> {
    let tree = cst.tree();
    let v = locus.node;
    if v == tree.root() || locus.depth <= tree.parent_depth(v) || locus.depth > tree.depth(v) {
        return Err(Error::EmptyFactor);
    }
    Ok(cst.c(v) - cst.delta(v) * (tree.depth(v) - locus.depth))
}

/// All shortest factors covering at least `alpha` positions, ordered by
/// first occurrence.
pub fn shortest_partial_covers(cst: &Cst, alpha: usize) -> Result<Vec<PartialCover>> {
    let n = cst.len();
    if alpha == 0 || alpha > n {
        return Err(Error::AlphaOutOfRange { alpha, n });
    }
    let tree = cst.tree();
    // Shortest length on each edge reaching `alpha`.
    let shortest = |v: NodeId| -> Option<usize> {
        let c = cst.c(v);
        if c < alpha {
            return None;
        }
        let drop = (c - alpha) / cst.delta(v);
        Some((tree.parent_depth(v) + 1).max(tree.depth(v).saturating_sub(drop)))
    };
    let best = edges(cst).filter_map(shortest).min().expect("the whole word covers n positions");

    let mut out: Vec<(usize, PartialCover)> = edges(cst)
        .filter(|&v| shortest(v) == Some(best))
        .map(|v| {
            let coverage = cst.c(v) - cst.delta(v) * (tree.depth(v) - best);
            (tree.depth(v), PartialCover { factor: FactorRef::on_edge(cst, v, best), coverage })
        })
        .collect();
    out.sort_by_key(|&(depth, pc)| (pc.factor.start, depth));
    Ok(out.into_iter().map(|(_, pc)| pc).collect())
}

/// The coverage function of one edge, restricted to the lengths on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub x1: usize,
    pub y1: usize,
    pub x2: usize,
    pub y2: usize,
    pub slope: usize,
    pub origin: NodeId,
}

impl Segment {
    pub fn value_at(&self, x: usize) -> Option<usize> {
        (self.x1..=self.x2).contains(&x).then(|| self.y2 - self.slope * (self.x2 - x))
    }

    fn line(&self) -> (i64, i64) {
        (self.slope as i64, self.y2 as i64 - (self.slope * self.x2) as i64)
    }
}

/// One segment per edge, in node-id order.
pub fn segments(cst: &Cst) -> Vec<Segment> {
    let tree = cst.tree();
    edges(cst)
        .map(|v| {
            let (x2, y2, slope) = (tree.depth(v), cst.c(v), cst.delta(v));
            let x1 = tree.parent_depth(v) + 1;
            Segment { x1, y1: y2 - slope * (x2 - x1), x2, y2, slope, origin: v }
        })
        .collect()
}

/// Maximal segment over an integer interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Piece {
    lo: usize,
    hi: usize,
    seg: u32,
}

fn push_piece(out: &mut Vec<Piece>, p: Piece) {
    if p.lo > p.hi {
        return;
    }
    if let Some(last) = out.last_mut() {
        if last.seg == p.seg && last.hi + 1 == p.lo {
            last.hi = p.hi;
            return;
        }
    }
    out.push(p);
}

/// Splits `[lo, hi]` between segments `s` and `t`: returns the sub-interval
/// where `s` wins (possibly empty, as `lo > hi`) and whether it is the left part.
/// Ties go to the lower segment index.
fn split(segs: &[Segment], s: u32, t: u32, lo: usize, hi: usize) -> (usize, usize, bool) {
    let (ks, bs) = segs[s as usize].line();
    let (kt, bt) = segs[t as usize].line();
    // s wins at x  <=>  a*x + b > 0
    let a = ks - kt;
    let b = bs - bt + i64::from(s < t);
    let (lo_i, hi_i) = (lo as i64, hi as i64);
    match a.cmp(&0) {
        Ordering::Equal => {
            if b > 0 {
                (lo, hi, true)
            } else {
                (hi + 1, hi, true)
            }
        }
        Ordering::Greater => {
            // x > -b/a
            let from = (-b).div_euclid(a) + 1;
            (from.clamp(lo_i, hi_i + 1) as usize, hi, false)
        }
        Ordering::Less => {
            // x < b/(-a)
            let to = -((-b).div_euclid(-a)) - 1;
            (lo, to.clamp(lo_i - 1, hi_i) as usize, true)
        }
    }
}

fn merge(segs: &[Segment], a: &[Piece], b: &[Piece]) -> Vec<Piece> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut x = match (a.first(), b.first()) {
        (Some(p), Some(q)) => p.lo.min(q.lo),
        (Some(p), None) => p.lo,
        (None, Some(q)) => q.lo,
        (None, None) => return out,
    };
    loop {
        while i < a.len() && a[i].hi < x {
            i += 1;
        }
        while j < b.len() && b[j].hi < x {
            j += 1;
        }
        let pa = a.get(i).filter(|p| p.lo <= x);
        let pb = b.get(j).filter(|q| q.lo <= x);
        match (pa, pb) {
            (None, None) => {
                x = match (a.get(i), b.get(j)) {
                    (Some(p), Some(q)) => p.lo.min(q.lo),
                    (Some(p), None) => p.lo,
                    (None, Some(q)) => q.lo,
                    (None, None) => break,
                };
            }
            (Some(p), None) => {
                let end = b.get(j).map_or(p.hi, |q| p.hi.min(q.lo - 1));
                push_piece(&mut out, Piece { lo: x, hi: end, seg: p.seg });
                x = end + 1;
            }
            (None, Some(q)) => {
                let end = a.get(i).map_or(q.hi, |p| q.hi.min(p.lo - 1));
                push_piece(&mut out, Piece { lo: x, hi: end, seg: q.seg });
                x = end + 1;
            }
            (Some(p), Some(q)) => {
                let end = p.hi.min(q.hi);
                let (wlo, whi, left) = split(segs, p.seg, q.seg, x, end);
                if wlo > whi {
                    push_piece(&mut out, Piece { lo: x, hi: end, seg: q.seg });
                } else if left {
                    push_piece(&mut out, Piece { lo: wlo, hi: whi, seg: p.seg });
                    push_piece(&mut out, Piece { lo: whi + 1, hi: end, seg: q.seg });
                } else {
                    push_piece(&mut out, Piece { lo: x, hi: wlo - 1, seg: q.seg });
                    push_piece(&mut out, Piece { lo: wlo, hi: whi, seg: p.seg });
                }
                x = end + 1;
            }
        }
    }
    out
}

fn envelope_pieces(segs: &[Segment], range: std::ops::Range<usize>) -> Vec<Piece> {
    match range.len() {
        0 => Vec::new(),
        1 => {
            let s = &segs[range.start];
            vec![Piece { lo: s.x1, hi: s.x2, seg: range.start as u32 }]
        }
        len => {
            let mid = range.start + len / 2;
            let left = envelope_pieces(segs, range.start..mid);
            let right = envelope_pieces(segs, mid..range.end);
            merge(segs, &left, &right)
        }
    }
}

/// Best coverage per factor length with witnesses, plus prefix maxima.
#[derive(Debug, Clone)]
pub struct Envelope {
    /// `best[j - 1]` = max coverage of a factor of length `j`.
    best: Vec<usize>,
    witness: Vec<FactorRef>,
    /// `prefix[i]` = max of `best` over lengths `1..=i`; `prefix[0] = 0`.
    prefix: Vec<usize>,
}

/// Upper envelope of all edge segments sampled at lengths `1..=n`.
pub fn build_envelope(cst: &Cst) -> Envelope {
    let n = cst.len();
    let segs = segments(cst);
    let pieces = envelope_pieces(&segs, 0..segs.len());

    let mut best = vec![0; n];
    let mut witness = vec![FactorRef { start: 0, length: 0, last: 0 }; n];
    let mut covered = 0;
    for p in &pieces {
        let s = &segs[p.seg as usize];
        for x in p.lo..=p.hi {
            best[x - 1] = s.value_at(x).unwrap();
            witness[x - 1] = FactorRef::on_edge(cst, s.origin, x);
            covered += 1;
        }
    }
    assert_eq!(covered, n, "every length 1..=n is the length of a prefix");

    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0);
    for (j, &b) in best.iter().enumerate() {
        prefix.push(prefix[j].max(b));
    }
    Envelope { best, witness, prefix }
}

/// Answer for one `alpha` of the all-alphas problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlphaAnswer {
    pub alpha: usize,
    pub length: usize,
    pub factor: FactorRef,
    pub coverage: usize,
}

impl Envelope {
    pub fn len(&self) -> usize {
        self.best.len()
    }

    pub fn is_empty(&self) -> bool {
        self.best.is_empty()
    }

    /// Max coverage of a factor of length `j`, `1 <= j <= n`.
    pub fn value(&self, j: usize) -> usize {
        self.best[j - 1]
    }

    pub fn values(&self) -> &[usize] {
        &self.best
    }

    pub fn witness(&self, j: usize) -> FactorRef {
        self.witness[j - 1]
    }

    /// `μ_i`, `0 <= i <= n`.
    pub fn prefix_max(&self, i: usize) -> usize {
        self.prefix[i]
    }

    /// For each `alpha` in `1..=n`, a shortest factor covering at least `alpha`.
    pub fn all_partial_covers(&self) -> Vec<AlphaAnswer> {
        let n = self.len();
        let mut out = Vec::with_capacity(n);
        let mut len = 1;
        for alpha in 1..=n {
            while self.prefix[len] < alpha {
                len += 1;
            }
            out.push(AlphaAnswer { alpha, length: len, factor: self.witness(len), coverage: self.value(len) });
        }
        out
    }

    /// The length in `[lo, hi]` with maximum coverage (shortest on ties).
    pub fn best_in_range(&self, lo: usize, hi: usize) -> Result<PartialCover> {
        let n = self.len();
        if lo == 0 || lo > hi || hi > n {
            return Err(Error::BadLengthRange { lo, hi, n });
        }
        let mut j = lo;
        for k in lo + 1..=hi {
            if self.value(k) > self.value(j) {
                j = k;
            }
        }
        Ok(PartialCover { factor: self.witness(j), coverage: self.value(j) })
    }
}

pub fn all_partial_covers(cst: &Cst) -> Vec<AlphaAnswer> {
    build_envelope(cst).all_partial_covers()
}

pub fn best_factor_in_length_range(cst: &Cst, lo: usize, hi: usize) -> Result<PartialCover> {
    let n = cst.len();
    if lo == 0 || lo > hi || hi > n {
        return Err(Error::BadLengthRange { lo, hi, n });
    }
    build_envelope(cst).best_in_range(lo, hi)
}
