//! Squares and quasigaps read off a [`Cst`].

use crate::cst_builder::Cst;
use crate::error::{Error, Result};
use crate::suffix_tree::NodeId;

/// One occurrence of the square `u u` with `|u| = half_length`, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SquareRef {
    pub start: usize,
    pub half_length: usize,
}

impl SquareRef {
    pub fn square<'a>(&self, w: &'a [u8]) -> &'a [u8] {
        &w[self.start - 1..self.start - 1 + 2 * self.half_length]
    }

    pub fn half<'a>(&self, w: &'a [u8]) -> &'a [u8] {
        &w[self.start - 1..self.start - 1 + self.half_length]
    }
}

/// The separator used by [`interleave_transform`]: `b'0'` when it does not
/// occur in `w`, otherwise the smallest absent byte.
pub fn interleave_symbol(w: &[u8]) -> Result<u8> {
    let mut seen = [false; 256];
    for &b in w {
        seen[b as usize] = true;
    }
    if !seen[b'0' as usize] {
        return Ok(b'0');
    }
    (0..=255u8).find(|&b| !seen[b as usize]).ok_or(Error::NoFreeSymbol)
}

/// `0 w[1] 0 w[2] ... 0 w[n] 0` for a separator `0` absent from `w`.
pub fn interleave_transform(w: &[u8]) -> Result<Vec<u8>> {
    if w.is_empty() {
        return Err(Error::EmptyInput);
    }
    let sep = interleave_symbol(w)?;
    let mut out = Vec::with_capacity(2 * w.len() + 1);
    for &b in w {
        out.push(sep);
        out.push(b);
    }
    out.push(sep);
    Ok(out)
}

/// Every distinct primitively rooted square of `w`, once each, sorted by
/// `(half_length, start)`.
pub fn distinct_primitively_rooted_squares(w: &[u8]) -> Result<Vec<SquareRef>> {
    let wt = interleave_transform(w)?;
    let sep = wt[0];
    let cst = Cst::build(&wt)?;
    Ok(squares_from_interleaved(&cst, sep))
}

fn squares_from_interleaved(cst: &Cst, sep: u8) -> Vec<SquareRef> {
    let tree = cst.tree();
    let text = cst.text();
    let mut out: Vec<SquareRef> = tree
        .nodes()
        .filter(|&v| v != tree.root() && !tree.is_leaf(v) && tree.child_count(v) == 1)
        .filter(|&v| tree.depth(v) % 2 == 0 && text[tree.occurrence(v) - 1] == sep)
        .map(|v| {
            // Non-branching explicit nodes exist only where a square was seen.
            let p = cst.square_witness(v).expect("non-branching node is an extra node");
            debug_assert_eq!(p % 2, 1);
            SquareRef { start: p.div_ceil(2), half_length: tree.depth(v) / 2 }
        })
        .collect();
    out.sort_by_key(|s| (s.half_length, s.start));
    out
}

/// Quasigap of every explicit node; `None` stands for an empty range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasigapTable {
    gaps: Vec<Option<usize>>,
}

pub fn quasigaps(cst: &Cst) -> QuasigapTable {
    let tree = cst.tree();
    let n = cst.len();
    let gaps = tree
        .nodes()
        .map(|v| {
            if v == tree.root() || tree.edge_len(v) == 0 {
                return None;
            }
            let (c, d) = (cst.c(v), cst.delta(v));
            let (first, last, len) = (cst.first_occ(v), cst.last_occ(v), tree.depth(v));
            // w = xyz with |x|, |z| < |u|: the prefix before the first
            // occurrence has first - 1 symbols.
            if c != last - first + len || first > len || n + 1 - last >= 2 * len {
                return None;
            }
            if d != 1 {
                return Some(len);
            }
            let g = first.max((n - last + 2).div_ceil(2)).max(tree.parent_depth(v) + 1);
            (g <= len).then_some(g)
        })
        .collect();
    QuasigapTable { gaps }
}

impl QuasigapTable {
    pub fn get(&self, v: NodeId) -> Option<usize> {
        self.gaps[v.index()]
    }

    /// A node with a finite quasigap is itself a quasiseed.
    pub fn is_quasiseed(&self, v: NodeId) -> bool {
        self.get(v).is_some()
    }

    /// Quasiseed lengths on the suffix-tree edge ending at each non-extra,
    /// non-root node `v`. The range is the one of `v`, extended upward
    /// through the extra nodes that split the edge as long as it stays
    /// contiguous.
    pub fn merged_ranges(&self, cst: &Cst) -> Vec<(NodeId, Option<(usize, usize)>)> {
        let tree = cst.tree();
        tree.nodes()
            .filter(|&v| v != tree.root() && !cst.is_extra(v))
            .map(|v| {
                let Some(mut lo) = self.get(v) else {
                    return (v, None);
                };
                let hi = tree.depth(v);
                let mut u = v;
                while let Some(p) = tree.parent(u) {
                    if !cst.is_extra(p) || lo != tree.depth(p) + 1 {
                        break;
                    }
                    match self.get(p) {
                        Some(g) => lo = g,
                        None => break,
                    }
                    u = p;
                }
                (v, Some((lo, hi)))
            })
            .collect()
    }
}

/// Quasigap tables of `w` and of `w` reversed, built on two threads.
pub struct SeedTables {
    pub forward: (Cst, QuasigapTable),
    pub reverse: (Cst, QuasigapTable),
}

pub fn seed_tables(w: &[u8]) -> Result<SeedTables> {
    let rev: Vec<u8> = w.iter().rev().copied().collect();
    let build = |t: &[u8]| Cst::build(t).map(|c| {
        let q = quasigaps(&c);
        (c, q)
    });
    let (forward, reverse) = std::thread::scope(|s| {
        let r = s.spawn(|| build(&rev));
        let f = build(w);
        (f, r.join().expect("reverse build panicked"))
    });
    Ok(SeedTables { forward: forward?, reverse: reverse? })
}
