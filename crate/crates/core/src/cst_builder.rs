//! Construction of the cover suffix tree: the suffix tree augmented with
//! extra nodes (halves of primitively rooted squares whose locus is implicit)
//! and annotated, for every explicit node `v`, with
//!
//! * `c(v)`: number of positions covered by occurrences of `v`,
//! * `Δ(v)`: number of occurrences not overlapping the next occurrence,
//! * first/last occurrence and occurrence count.
//!
//! Nodes are processed bottom-up by decreasing depth `h`. For every current
//! peak node `z` (a maximal processed node) the state keeps
//!
//! * `c′[z] = Σ {δ(i,z) : δ(i,z) < h}` and `Δ′[z] = |{i : δ(i,z) ≥ h}|`,
//! * `dist[i] = δ(i, find(i))` for every position `i`,
//! * buckets `list[d] = {i : dist[i] = d}`, holding only the gaps set while
//!   processing a node deeper than `d` (the others are never lifted),
//!
//! where `δ(i,z)` is the gap from occurrence `i` of `z` to the next one. Going
//! from `h + 1` to `h` ("lift") moves the gaps equal to `h` from `c′` to `Δ′`;
//! each of them witnesses a square of half-length `h`, which is where extra
//! nodes are created. Processing a node unites its children's leaf sets and
//! fixes up `c′`/`Δ′` for every pair in the change list.

use crate::error::Result;
use crate::labeled_dsu::{Change, LabeledPartition, Part};
use crate::suffix_tree::{push_gradual, NodeId, SuffixTree, NONE};

/// Counters collected while building.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildStats {
    pub extra_nodes: usize,
    pub unions: usize,
    pub elements_moved: usize,
    /// Σ |ChangeList(v)| over all processed nodes.
    pub change_pairs: usize,
    /// Total number of bucket entries consumed by lifts.
    pub lifted: usize,
}

/// Hooks for instrumenting a build.
pub trait BuildObserver {
    fn extra_node_created(&mut self, _state: &BuildState, _node: NodeId, _witness: usize) {}
    fn node_processed(&mut self, _state: &BuildState, _node: NodeId) {}
}

impl BuildObserver for () {}

/// Per-node annotations, kept together so that visiting a node touches one
/// cache line. Only inner and extra nodes are stored; a leaf's values follow
/// from its position.
#[derive(Debug, Clone, Copy, Default)]
struct Ann {
    c_part: u32,
    d_part: u32,
    c: u32,
    delta: u32,
    first: u32,
    last: u32,
    occ: u32,
    /// Partition handle of the node's class while it is a peak.
    handle: u32,
}

impl Ann {
    fn leaf(i: u32, n: u32) -> Ann {
        Ann { c_part: 0, d_part: 1, c: n + 1 - i, delta: 1, first: i, last: i, occ: 1, handle: i - 1 }
    }
}

/// Annotations of `v` given the stored ones for node ids `n..`.
fn node_ann(ann: &[Ann], n: usize, v: NodeId) -> Ann {
    match v.index().checked_sub(n) {
        Some(k) => ann[k],
        None => Ann::leaf(v.index() as u32 + 1, n as u32),
    }
}

/// The annotated, augmented suffix tree.
#[derive(Debug, Clone)]
pub struct Cst {
    tree: SuffixTree,
    ann: Vec<Ann>,
    first_extra: usize,
    witness: Vec<u32>,
    stats: BuildStats,
}

impl Cst {
    pub fn build(text: &[u8]) -> Result<Cst> {
        compute_cst(text)
    }

    pub fn tree(&self) -> &SuffixTree {
        &self.tree
    }

    pub fn text(&self) -> &[u8] {
        self.tree.text()
    }

    pub fn len(&self) -> usize {
        self.tree.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tree.is_empty()
    }

    pub fn c(&self, v: NodeId) -> usize {
        self.ann(v).c as usize
    }

    pub fn delta(&self, v: NodeId) -> usize {
        self.ann(v).delta as usize
    }

    pub fn first_occ(&self, v: NodeId) -> usize {
        self.ann(v).first as usize
    }

    pub fn last_occ(&self, v: NodeId) -> usize {
        self.ann(v).last as usize
    }

    pub fn occ_count(&self, v: NodeId) -> usize {
        self.ann(v).occ as usize
    }

    pub fn is_extra(&self, v: NodeId) -> bool {
        v.index() >= self.first_extra
    }

    /// Extra nodes in creation order.
    pub fn extra_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (self.first_extra..self.tree.node_count()).map(NodeId::from_index)
    }

    /// For an extra node `v`, a position where the square `v̂v̂` occurs.
    pub fn square_witness(&self, v: NodeId) -> Option<usize> {
        v.index().checked_sub(self.first_extra).map(|k| self.witness[k] as usize)
    }

    pub fn stats(&self) -> BuildStats {
        self.stats
    }

    fn ann(&self, v: NodeId) -> Ann {
        node_ann(&self.ann, self.tree.len(), v)
    }
}

pub fn compute_cst(text: &[u8]) -> Result<Cst> {
    compute_cst_observed(text, &mut ())
}

pub fn compute_cst_observed<O: BuildObserver>(text: &[u8], observer: &mut O) -> Result<Cst> {
    let tree = SuffixTree::build(text)?;
    let mut state = BuildState::new(tree);
    let n = state.n;

    // Inner nodes (root included) by decreasing depth; `end[h]` closes the
    // run of depth `h`.
    let (order, end) = {
        let tree = &state.tree;
        let mut count = vec![0u32; n + 2];
        let inner = || tree.nodes().filter(|&v| !tree.is_leaf(v));
        for v in inner() {
            count[tree.depth(v)] += 1;
        }
        let mut start = 0u32;
        for d in (0..=n + 1).rev() {
            let k = count[d];
            count[d] = start;
            start += k;
        }
        let mut order = vec![0u32; start as usize];
        for v in inner() {
            let slot = &mut count[tree.depth(v)];
            order[*slot as usize] = v.index() as u32;
            *slot += 1;
        }
        (order, count)
    };
    let (plan, end) = plan_children(&state.tree, order, end);

    let mut at = 0;
    let mut created = Vec::new();
    for h in (0..=n + 1).rev() {
        created.clear();
        state.lift_observed(h, &mut created, observer);
        while at < end[h] as usize {
            let v = NodeId::from_index(plan[at] as usize);
            let k = plan[at + 1] as usize;
            state.unite(v, h as u32, &plan[at + 2..at + 2 + k]);
            observer.node_processed(&state, v);
            at += 2 + k;
        }
        for &e in &created {
            state.process_node(e);
            observer.node_processed(&state, e);
        }
    }
    Ok(state.finish())
}

/// Lays out, for every inner node in processing order, the record
/// `[v, k, child_1, ..., child_k]`, so that processing reads children from
/// one sequential array instead of chasing sibling links. Returns the plan
/// and, per depth `h`, the plan offset where the nodes of depth `h` end.
fn plan_children(tree: &SuffixTree, order: Vec<u32>, mut end: Vec<u32>) -> (Vec<u32>, Vec<u32>) {
    let m = tree.node_count();
    let mut slot = vec![0u32; m];
    for u in tree.nodes() {
        if let Some(p) = tree.parent(u) {
            slot[p.index()] += 1;
        }
    }
    let mut plan = vec![0u32; 2 * order.len() + m - 1];
    let (mut at, mut from) = (0usize, 0usize);
    for h in (0..end.len()).rev() {
        for &v in &order[from..end[h] as usize] {
            let k = slot[v as usize];
            plan[at] = v;
            plan[at + 1] = k;
            slot[v as usize] = at as u32 + 2;
            at += 2 + k as usize;
        }
        from = end[h] as usize;
        end[h] = at as u32;
    }
    drop(order);
    for u in tree.nodes() {
        if let Some(p) = tree.parent(u) {
            let s = &mut slot[p.index()];
            plan[*s as usize] = u.index() as u32;
            *s += 1;
        }
    }
    (plan, end)
}

/// Mutable state of the bottom-up construction.
pub struct BuildState {
    tree: SuffixTree,
    n: usize,
    partition: LabeledPartition,
    ann: Vec<Ann>,
    /// Bucket heads; `0` terminates a list.
    head: Vec<u32>,
    /// `(prev, next)` bucket links per position, valid while listed.
    link: Vec<(u32, u32)>,
    /// Bit per position: currently in a bucket. Few positions ever are, and
    /// the bitset stays in cache where `link` would not.
    listed: Vec<u64>,
    first_extra: usize,
    witness: Vec<u32>,
    lifted: usize,
    parts: Vec<Part>,
    changes: Vec<Change>,
    kids: Vec<u32>,
    /// Bit per original node: an extra node was inserted above it, so the
    /// plan's parent link for it is stale.
    lowered: Vec<u64>,
}

impl BuildState {
    /// Leaves are the initial peaks: `c′ = 0`, `Δ′ = 1`, no successors.
    pub fn new(tree: SuffixTree) -> BuildState {
        let n = tree.len();
        let m = tree.node_count();
        let partition = LabeledPartition::new(n, m).expect("tree has at least one leaf");
        debug_assert!((0..n).all(|k| tree.leaf_label(NodeId::from_index(k)) == Some(k + 1)));
        let ann = vec![Ann::default(); m - n];
        BuildState {
            n,
            partition,
            ann,
            link: vec![(0, 0); n + 1],
            listed: vec![0; (n + 1).div_ceil(64)],
            head: vec![0; n + 1],
            first_extra: m,
            witness: Vec::new(),
            lifted: 0,
            parts: Vec::new(),
            changes: Vec::new(),
            kids: Vec::new(),
            lowered: vec![0; m.div_ceil(64)],
            tree,
        }
    }

    pub fn tree(&self) -> &SuffixTree {
        &self.tree
    }

    pub fn partition(&self) -> &LabeledPartition {
        &self.partition
    }

    /// Partition label of a node.
    pub fn label(v: NodeId) -> usize {
        v.index() + 1
    }

    pub fn node_of_label(label: usize) -> NodeId {
        NodeId::from_index(label - 1)
    }

    /// The peak node whose leaf set contains position `i`.
    pub fn peak_of(&self, i: usize) -> NodeId {
        Self::node_of_label(self.partition.find_fast(i))
    }

    fn ann(&self, v: NodeId) -> Ann {
        node_ann(&self.ann, self.n, v)
    }

    pub fn c_partial(&self, v: NodeId) -> usize {
        self.ann(v).c_part as usize
    }

    pub fn delta_partial(&self, v: NodeId) -> usize {
        self.ann(v).d_part as usize
    }

    /// Final `c`, valid once `v` has been processed.
    pub fn c(&self, v: NodeId) -> usize {
        self.ann(v).c as usize
    }

    pub fn delta(&self, v: NodeId) -> usize {
        self.ann(v).delta as usize
    }

    /// Gap from `i` to the next position of its class, `None` for the last one.
    pub fn dist(&self, i: usize) -> Option<usize> {
        self.partition.next(i).map(|j| j - i)
    }

    fn is_listed(&self, i: usize) -> bool {
        self.listed[i / 64] >> (i % 64) & 1 == 1
    }

    /// Positions currently in bucket `d`.
    pub fn bucket(&self, d: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut i = self.head[d];
        while i != 0 {
            out.push(i as usize);
            i = self.link[i as usize].1;
        }
        out
    }

    pub fn is_extra(&self, v: NodeId) -> bool {
        v.index() >= self.first_extra
    }

    fn bucket_insert(&mut self, i: usize, d: usize) {
        let h = self.head[d];
        self.link[i] = (0, h);
        if h != 0 {
            self.link[h as usize].0 = i as u32;
        }
        self.head[d] = i as u32;
        self.listed[i / 64] |= 1 << (i % 64);
    }

    fn bucket_remove(&mut self, i: usize, d: usize) {
        let (p, q) = self.link[i];
        if p == 0 {
            self.head[d] = q;
        } else {
            self.link[p as usize].1 = q;
        }
        if q != 0 {
            self.link[q as usize].0 = p;
        }
        self.listed[i / 64] &= !(1 << (i % 64));
    }

    /// Moves from height `h + 1` to `h`, creating the extra nodes of depth `h`.
    /// Newly created nodes are appended to `created`.
    pub fn lift(&mut self, h: usize, created: &mut Vec<NodeId>) {
        self.lift_observed(h, created, &mut ())
    }

    fn lift_observed<O: BuildObserver>(&mut self, h: usize, created: &mut Vec<NodeId>, observer: &mut O) {
        if h == 0 || h > self.n {
            return;
        }
        let mut i = self.head[h];
        while i != 0 {
            let pos = i as usize;
            i = self.link[pos].1;
            self.lifted += 1;
            let v = Self::node_of_label(self.partition.find_mut(pos));
            let a = &mut self.ann[v.index() - self.n];
            a.d_part += 1;
            a.c_part -= h as u32;
            if self.tree.parent_depth(v) < h {
                let e = self.create_extra(v, h, pos);
                created.push(e);
                observer.extra_node_created(self, e, pos);
            }
        }
    }

    fn create_extra(&mut self, v: NodeId, h: usize, witness: usize) -> NodeId {
        let k = v.index();
        if k < self.first_extra {
            self.lowered[k / 64] |= 1 << (k % 64);
        }
        let e = self.tree.split_edge(v, h);
        debug_assert_eq!(e.index(), self.n + self.ann.len());
        push_gradual(&mut self.ann, Ann::default());
        push_gradual(&mut self.witness, witness as u32);
        self.partition.grow_labels(Self::label(e));
        e
    }

    /// Corrects `c′[v]`, `Δ′[v]` and the buckets for a pair `(p, q)` of
    /// consecutive occurrences of `v` that were in different child classes;
    /// `old` is the successor `p` had within its child class.
    pub fn local_correct(&mut self, p: usize, old: Option<usize>, q: usize, v: NodeId) {
        self.local_correct_at(p, old, q, v, self.tree.depth(v) as u32);
    }

    fn local_correct_at(&mut self, p: usize, old: Option<usize>, q: usize, v: NodeId, hv: u32) {
        debug_assert!(p < q);
        let d = (q - p) as u32;
        let old = old.map_or(self.n as u32 + 1, |o| (o - p) as u32);
        let Ann { c_part: c, d_part: dl, .. } = &mut self.ann[v.index() - self.n];
        if old < hv {
            *c -= old;
        } else {
            *dl -= 1;
        }
        if d < hv {
            *c += d;
        } else {
            *dl += 1;
        }
        if self.is_listed(p) {
            self.bucket_remove(p, old as usize);
        }
        // Lifts still to come are all below `hv`.
        if d < hv {
            self.bucket_insert(p, d as usize);
        }
    }

    /// Processes inner node `v`: all its children must be peaks.
    pub fn process_node(&mut self, v: NodeId) {
        let mut kids = std::mem::take(&mut self.kids);
        kids.clear();
        kids.extend(self.tree.children(v).map(|u| u.index() as u32));
        self.unite(v, self.tree.depth(v) as u32, &kids);
        self.kids = kids;
    }

    /// `process_node` with the children of `v` as they were in the plain
    /// suffix tree; extra nodes inserted since are found through parent links.
    fn unite(&mut self, v: NodeId, depth: u32, kids: &[u32]) {
        let mut parts = std::mem::take(&mut self.parts);
        parts.clear();
        let (mut cs, mut ds, mut occ) = (0u32, 0u32, 0u32);
        let (mut first, mut last) = (NONE, 0u32);
        for &k in kids {
            let mut u = NodeId::from_index(k as usize);
            if (k as usize) < self.first_extra && self.lowered[k as usize / 64] >> (k % 64) & 1 == 1 {
                while let Some(p) = self.tree.parent(u).filter(|&p| p != v) {
                    u = p;
                }
            }
            let a = node_ann(&self.ann, self.n, u);
            parts.push(Part { label: Self::label(u) as u32, handle: a.handle, size: a.occ });
            cs += a.c_part;
            ds += a.d_part;
            occ += a.occ;
            first = first.min(a.first);
            last = last.max(a.last);
        }
        let k = v.index();
        let mut changes = std::mem::take(&mut self.changes);
        let handle = self.partition.union_parts(&parts, Self::label(v), &mut changes);
        self.ann[k - self.n] = Ann { c_part: cs, d_part: ds, c: 0, delta: 0, first, last, occ, handle };
        for &(p, old, q) in &changes {
            let old = (old != 0).then_some(old as usize);
            self.local_correct_at(p as usize, old, q as usize, v, depth);
        }
        self.changes = changes;
        self.parts = parts;

        let a = &mut self.ann[k - self.n];
        a.c = a.c_part + a.d_part * depth;
        a.delta = a.d_part;
    }

    pub fn stats(&self) -> BuildStats {
        let s = self.partition.stats();
        BuildStats {
            extra_nodes: self.witness.len(),
            unions: s.unions,
            elements_moved: s.elements_moved,
            change_pairs: s.change_pairs,
            lifted: self.lifted,
        }
    }

    pub fn finish(self) -> Cst {
        let stats = self.stats();
        Cst {
            tree: self.tree,
            ann: self.ann,
            first_extra: self.first_extra,
            witness: self.witness,
            stats,
        }
    }
}
