//! Labeled partition of `{1..n}` whose union reports the change list: the
//! pairs `(x, next'(x))` for every element whose in-set successor changed.
//!
//! Each set is kept as an ordered set. A union moves every element of the
//! smaller sets into the largest one; each element moves at most `log2 n`
//! times over any union sequence. Moved elements are inserted in increasing
//! order, so the insertion point of `b` already gives its final predecessor,
//! and its final successor is the smaller of the successor at insertion time
//! and the next moved element. A neighbour pair is part of the change list
//! exactly when it differs from the old successor, which for a moved element
//! is its neighbour in the set it came from.
//!
//! Nothing is stored per element: `find` follows handle forwarding links
//! (a handle is forwarded only into a set at least twice as large), and
//! `next` is a successor query on the set.

use crate::error::{Error, Result};

const FREE: u32 = u32::MAX;
const SINGLETON: u32 = u32::MAX;

/// Blocks hold between `BLOCK` and `2 * BLOCK` elements once a set is large.
const BLOCK: usize = 256;

/// Pairs `(p, q)` with `p < q`, sorted by `p`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ChangeList(pub Vec<(usize, usize)>);

impl ChangeList {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.iter().copied()
    }
}

/// Work counters accumulated over all unions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct UnionStats {
    pub unions: usize,
    pub elements_moved: usize,
    pub change_pairs: usize,
}

/// Sorted set of positions: one vector while small, a list of sorted
/// blocks indexed by their maxima once large.
#[derive(Debug, Clone)]
enum Members {
    Small(Vec<u32>),
    Blocks(Box<Blocks>),
}

#[derive(Debug, Clone, Default)]
struct Blocks {
    maxes: Vec<u32>,
    blocks: Vec<Vec<u32>>,
    len: usize,
}

impl Members {
    fn len(&self) -> usize {
        match self {
            Members::Small(v) => v.len(),
            Members::Blocks(b) => b.len,
        }
    }

    fn first(&self) -> u32 {
        match self {
            Members::Small(v) => v[0],
            Members::Blocks(b) => b.blocks[0][0],
        }
    }

    fn last(&self) -> u32 {
        match self {
            Members::Small(v) => *v.last().unwrap(),
            Members::Blocks(b) => *b.maxes.last().unwrap(),
        }
    }

    /// Smallest member greater than `x`.
    fn successor(&self, x: u32) -> Option<u32> {
        match self {
            Members::Small(v) => v.get(v.partition_point(|&y| y <= x)).copied(),
            Members::Blocks(b) => {
                let k = b.maxes.partition_point(|&m| m <= x);
                let block = b.blocks.get(k)?;
                Some(block[block.partition_point(|&y| y <= x)])
            }
        }
    }

    fn for_each(&self, mut f: impl FnMut(u32)) {
        match self {
            Members::Small(v) => v.iter().for_each(|&x| f(x)),
            Members::Blocks(b) => b.blocks.iter().flatten().for_each(|&x| f(x)),
        }
    }

    /// Inserts the absent, increasing `xs` and calls `visit(x, pred, succ)`
    /// for each, with its neighbours right after its own insertion.
    /// `scratch` is working space; its contents are unspecified afterwards.
    fn insert_sorted(
        &mut self,
        xs: impl Iterator<Item = u32>,
        scratch: &mut Vec<u32>,
        visit: &mut impl FnMut(u32, Option<u32>, Option<u32>),
    ) {
        match self {
            Members::Small(v) => {
                merge(v, xs, None, None, visit, scratch);
                std::mem::swap(v, scratch);
                if v.len() > 2 * BLOCK {
                    *self = Members::from_sorted(std::mem::take(v));
                }
            }
            Members::Blocks(b) => b.insert_sorted(xs.peekable(), scratch, visit),
        }
    }

    fn from_sorted(v: Vec<u32>) -> Members {
        if v.len() <= 2 * BLOCK {
            return Members::Small(v);
        }
        let blocks: Vec<Vec<u32>> = v.chunks(BLOCK).map(<[u32]>::to_vec).collect();
        let maxes = blocks.iter().map(|b| *b.last().unwrap()).collect();
        Members::Blocks(Box::new(Blocks { maxes, blocks, len: v.len() }))
    }
}

/// Merges increasing `xs` and sorted `old` into `out`. `before` and `after`
/// are the neighbours of `old` within a larger set.
fn merge(
    old: &[u32],
    xs: impl Iterator<Item = u32>,
    before: Option<u32>,
    after: Option<u32>,
    visit: &mut impl FnMut(u32, Option<u32>, Option<u32>),
    out: &mut Vec<u32>,
) {
    out.clear();
    let mut i = 0;
    for x in xs {
        let k = i + old[i..].partition_point(|&y| y < x);
        out.extend_from_slice(&old[i..k]);
        i = k;
        visit(x, out.last().copied().or(before), old.get(i).copied().or(after));
        out.push(x);
    }
    out.extend_from_slice(&old[i..]);
}

impl Blocks {
    fn insert_sorted(
        &mut self,
        mut xs: std::iter::Peekable<impl Iterator<Item = u32>>,
        merged: &mut Vec<u32>,
        visit: &mut impl FnMut(u32, Option<u32>, Option<u32>),
    ) {
        while let Some(&x) = xs.peek() {
            let k = self.maxes.partition_point(|&m| m < x).min(self.blocks.len() - 1);
            let last = k + 1 == self.blocks.len();
            let bound = self.maxes[k];
            let group = std::iter::from_fn(|| xs.next_if(|&y| last || y < bound));
            let before = k.checked_sub(1).map(|j| self.maxes[j]);
            let after = self.blocks.get(k + 1).map(|b| b[0]);
            merge(&self.blocks[k], group, before, after, visit, merged);
            self.len += merged.len() - self.blocks[k].len();
            if merged.len() < 2 * BLOCK {
                self.maxes[k] = *merged.last().unwrap();
                std::mem::swap(&mut self.blocks[k], merged);
            } else {
                let parts: Vec<Vec<u32>> = merged.chunks(BLOCK).map(<[u32]>::to_vec).collect();
                self.maxes.splice(k..=k, parts.iter().map(|b| *b.last().unwrap()));
                self.blocks.splice(k..=k, parts);
            }
        }
    }
}

/// One change-list entry `(x, old next, new next)`; `0` stands for none.
pub(crate) type Change = (u32, u32, u32);

/// An active set as the caller already knows it: label, handle and size.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Part {
    pub label: u32,
    pub handle: u32,
    pub size: u32,
}

#[derive(Debug, Clone)]
pub struct LabeledPartition {
    n: usize,
    /// Per handle `0..n`: the handle it was merged into, itself while its
    /// set is live. Element `x` starts with handle `x - 1`, and a union keeps
    /// the handle of its largest part.
    forward: Vec<u32>,
    /// Per handle.
    label: Vec<u32>,
    /// Per handle, index into `sets`, or `SINGLETON` for `{handle + 1}`.
    store: Vec<u32>,
    sets: Vec<Members>,
    free_sets: Vec<u32>,
    /// Label to set handle, `FREE` for free labels. Index 0 is unused.
    owner: Vec<u32>,
    /// Moved elements as `x << 32 | old next`.
    moved: Vec<u64>,
    changes: Vec<Change>,
    parts: Vec<Part>,
    scratch: Vec<u32>,
    stats: UnionStats,
}

impl LabeledPartition {
    /// Singletons `{x}` labeled `x`; labels `n+1..=k` start free.
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        if k < n {
            return Err(Error::LabelCapacity { n, k });
        }
        if k >= FREE as usize {
            return Err(Error::InputTooLong(k));
        }
        let mut owner = vec![FREE; k + 1];
        for x in 1..=n {
            owner[x] = x as u32 - 1;
        }
        Ok(LabeledPartition {
            n,
            forward: (0..n as u32).collect(),
            label: (1..=n as u32).collect(),
            store: vec![SINGLETON; n],
            sets: Vec::new(),
            free_sets: Vec::new(),
            owner,
            moved: Vec::new(),
            changes: Vec::new(),
            parts: Vec::new(),
            scratch: Vec::new(),
            stats: UnionStats::default(),
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn label_capacity(&self) -> usize {
        self.owner.len() - 1
    }

    /// Adds free labels up to `k`.
    pub fn grow_labels(&mut self, k: usize) {
        if k > self.label_capacity() {
            let extra = k + 1 - self.owner.len();
            // Grow by a small fraction at a time: labels for extra nodes
            // arrive one by one and are usually few.
            if self.owner.capacity() < k + 1 {
                self.owner.reserve_exact(extra.max(self.owner.len() / 16));
            }
            self.owner.resize(k + 1, FREE);
        }
    }

    pub fn stats(&self) -> UnionStats {
        self.stats
    }

    /// Label of the set containing `x`.
    pub fn find(&self, x: usize) -> Result<usize> {
        if x == 0 || x > self.n {
            return Err(Error::PositionOutOfRange { pos: x, n: self.n });
        }
        Ok(self.find_fast(x))
    }

    /// `find` for `x` in range. Forwarding chains are at most `log2 n` long.
    pub(crate) fn find_fast(&self, x: usize) -> usize {
        let mut h = x as u32 - 1;
        while self.forward[h as usize] != h {
            h = self.forward[h as usize];
        }
        self.label[h as usize] as usize
    }

    /// `find` that also shortens the forwarding chain it walks.
    pub(crate) fn find_mut(&mut self, x: usize) -> usize {
        let f = &mut self.forward;
        let mut h = x as u32 - 1;
        while f[h as usize] != h {
            let g = f[f[h as usize] as usize];
            f[h as usize] = g;
            h = g;
        }
        self.label[h as usize] as usize
    }

    /// In-set successor of `x`, `None` when `x` is the maximum of its set.
    pub fn next(&self, x: usize) -> Option<usize> {
        if x == 0 || x > self.n {
            return None;
        }
        let h = self.owner[self.find_fast(x)];
        match self.store[h as usize] {
            SINGLETON => None,
            s => self.sets[s as usize].successor(x as u32).map(|y| y as usize),
        }
    }

    pub fn is_active(&self, label: usize) -> bool {
        self.owner.get(label).is_some_and(|&h| h != FREE) && label != 0
    }

    pub fn set_size(&self, label: usize) -> Option<usize> {
        self.is_active(label).then(|| self.size(self.owner[label]))
    }

    /// Members of the set labeled `label`, ascending.
    pub fn members(&self, label: usize) -> Option<Vec<usize>> {
        if !self.is_active(label) {
            return None;
        }
        let h = self.owner[label] as usize;
        Some(match self.store[h] {
            SINGLETON => vec![h + 1],
            s => {
                let mut out = Vec::with_capacity(self.sets[s as usize].len());
                self.sets[s as usize].for_each(|x| out.push(x as usize));
                out
            }
        })
    }

    /// Smallest and largest member of the set labeled `label`.
    pub fn bounds(&self, label: usize) -> Option<(usize, usize)> {
        if !self.is_active(label) {
            return None;
        }
        let h = self.owner[label] as usize;
        Some(match self.store[h] {
            SINGLETON => (h + 1, h + 1),
            s => {
                let m = &self.sets[s as usize];
                (m.first() as usize, m.last() as usize)
            }
        })
    }

    /// Active labels in increasing order.
    pub fn labels(&self) -> impl Iterator<Item = usize> + '_ {
        (1..self.owner.len()).filter(|&l| self.owner[l] != FREE)
    }

    fn size(&self, h: u32) -> usize {
        match self.store[h as usize] {
            SINGLETON => 1,
            s => self.sets[s as usize].len(),
        }
    }

    /// Replaces the sets labeled by `labels` with their union labeled `into`
    /// and returns the change list.
    pub fn union(&mut self, labels: &[usize], into: usize) -> Result<ChangeList> {
        let mut out = Vec::new();
        self.union_into(labels, into, &mut out)?;
        Ok(ChangeList(out))
    }

    /// As [`union`](Self::union), writing the change list into `out`.
    pub fn union_into(&mut self, labels: &[usize], into: usize, out: &mut Vec<(usize, usize)>) -> Result<()> {
        let mut changes = std::mem::take(&mut self.changes);
        let r = self.union_changes(labels, into, &mut changes);
        out.clear();
        out.extend(changes.iter().map(|&(x, _, y)| (x as usize, y as usize)));
        self.changes = changes;
        r
    }

    /// As [`union`](Self::union), also reporting each element's old successor.
    pub(crate) fn union_changes(&mut self, labels: &[usize], into: usize, out: &mut Vec<Change>) -> Result<()> {
        self.check_labels(labels, into)?;
        let mut parts = std::mem::take(&mut self.parts);
        parts.clear();
        parts.extend(labels.iter().map(|&l| {
            let h = self.owner[l];
            Part { label: l as u32, handle: h, size: self.size(h) as u32 }
        }));
        self.union_parts(&parts, into, out);
        self.parts = parts;
        Ok(())
    }

    /// Union of valid `parts` into the free label `into`, without looking
    /// anything up. Returns the handle of the result.
    pub(crate) fn union_parts(&mut self, parts: &[Part], into: usize, out: &mut Vec<Change>) -> u32 {
        debug_assert!(self.check_labels(&parts.iter().map(|p| p.label as usize).collect::<Vec<_>>(), into).is_ok());
        debug_assert!(parts.iter().all(|p| self.owner[p.label as usize] == p.handle && self.size(p.handle) == p.size as usize));
        out.clear();
        self.stats.unions += 1;

        let big = parts.iter().max_by_key(|p| (p.size, std::cmp::Reverse(p.handle))).unwrap().handle;

        if parts.len() > 1 {
            let mut moved = std::mem::take(&mut self.moved);
            moved.clear();
            for p in parts {
                let h = p.handle;
                if h == big {
                    continue;
                }
                if p.size == 1 {
                    moved.push(u64::from(h + 1) << 32);
                } else {
                    self.take_members(h, &mut moved);
                }
                self.forward[h as usize] = big;
            }
            moved.sort_unstable();

            let s = self.store_of(big);
            let mut k = 0;
            let mut prev_moved = None;
            let scratch = &mut self.scratch;
            self.sets[s].insert_sorted(moved.iter().map(|&m| (m >> 32) as u32), scratch, &mut |b, pred, succ| {
                let old = moved[k] as u32;
                if let Some(a) = pred.filter(|&a| Some(a) != prev_moved) {
                    // `a` was already in the big set, where `succ` followed it.
                    out.push((a, succ.unwrap_or(0), b));
                }
                let new = match (succ, moved.get(k + 1)) {
                    (Some(c), Some(&m)) => c.min((m >> 32) as u32),
                    (Some(c), None) => c,
                    (None, Some(&m)) => (m >> 32) as u32,
                    (None, None) => 0,
                };
                if new != old {
                    out.push((b, old, new));
                }
                prev_moved = Some(b);
                k += 1;
            });
            self.stats.elements_moved += moved.len();
            self.stats.change_pairs += out.len();
            self.moved = moved;
        }

        for p in parts {
            self.owner[p.label as usize] = FREE;
        }
        self.label[big as usize] = into as u32;
        self.owner[into] = big;
        big
    }

    /// Appends the members of set `h`, each with its successor in that set,
    /// and releases its storage.
    fn take_members(&mut self, h: u32, out: &mut Vec<u64>) {
        match std::mem::replace(&mut self.store[h as usize], SINGLETON) {
            SINGLETON => out.push(u64::from(h + 1) << 32),
            s => {
                let m = std::mem::replace(&mut self.sets[s as usize], Members::Small(Vec::new()));
                let mut prev: Option<u32> = None;
                m.for_each(|x| {
                    if let Some(p) = prev {
                        out.push(u64::from(p) << 32 | u64::from(x));
                    }
                    prev = Some(x);
                });
                out.push(u64::from(prev.unwrap()) << 32);
                self.free_sets.push(s);
            }
        }
    }

    /// Storage index of set `h`, materializing a singleton.
    fn store_of(&mut self, h: u32) -> usize {
        if self.store[h as usize] == SINGLETON {
            let m = Members::Small(vec![h + 1]);
            let s = match self.free_sets.pop() {
                Some(s) => {
                    self.sets[s as usize] = m;
                    s
                }
                None => {
                    self.sets.push(m);
                    self.sets.len() as u32 - 1
                }
            };
            self.store[h as usize] = s;
        }
        self.store[h as usize] as usize
    }

    fn check_labels(&self, labels: &[usize], into: usize) -> Result<()> {
        if labels.is_empty() {
            return Err(Error::InvalidLabels("no labels to unite".into()));
        }
        for (i, &l) in labels.iter().enumerate() {
            if !self.is_active(l) {
                return Err(Error::InvalidLabels(format!("label {l} is not active")));
            }
            if labels[..i].contains(&l) {
                return Err(Error::InvalidLabels(format!("label {l} repeated")));
            }
        }
        if into == 0 || into > self.label_capacity() {
            return Err(Error::InvalidLabels(format!("target label {into} out of range")));
        }
        if self.is_active(into) {
            return Err(Error::InvalidLabels(format!("target label {into} is active")));
        }
        Ok(())
    }
}
