//! Suffix tree of a byte string with a virtual terminator.
//!
//! Positions are 1-based. The terminator `#` is never stored: it compares
//! greater than every byte, so a suffix that is a prefix of another suffix
//! hangs as a leaf with an empty (terminator-only) edge below the node that
//! spells it. The leaf for the lone `#` suffix is elided, which leaves exactly
//! one leaf per position `1..=n`.
//!
//! Node ids are laid out as: leaf for position `i` has id `i - 1`, the root
//! has id `n`, inner nodes follow. Nodes spliced in later (see
//! [`crate::cst_builder`]) are appended after those.

mod suffix_array;

use crate::error::{Error, Result};

pub(crate) const NONE: u32 = u32::MAX;

/// Largest input accepted; keeps every node id and label below `u32::MAX`.
pub const MAX_LEN: usize = (u32::MAX / 8) as usize;

/// Index of a node in the tree arena.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub(crate) fn from_index(i: usize) -> Self {
        debug_assert!(i < NONE as usize);
        NodeId(i as u32)
    }
}

#[derive(Debug, Clone, Copy)]
struct Node {
    parent: u32,
    depth: u32,
    /// 1-based start of the incoming edge label in the text.
    edge_start: u32,
    first_child: u32,
    next_sibling: u32,
}

/// An explicit or implicit node: `depth` lies in `(depth(parent(node)), depth(node)]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Locus {
    pub node: NodeId,
    pub depth: usize,
}

impl Locus {
    pub fn is_explicit(&self, tree: &SuffixTree) -> bool {
        tree.depth(self.node) == self.depth
    }
}

/// Pushes with growth of about 1/16 instead of doubling. Extra nodes are
/// few compared to the base tree, so doubling would mostly waste memory.
pub(crate) fn push_gradual<T>(v: &mut Vec<T>, x: T) {
    if v.len() == v.capacity() {
        v.reserve_exact((v.len() / 16).max(16));
    }
    v.push(x);
}

#[derive(Debug, Clone)]
pub struct SuffixTree {
    text: Vec<u8>,
    nodes: Vec<Node>,
}

impl SuffixTree {
    pub fn build(text: &[u8]) -> Result<SuffixTree> {
        let n = text.len();
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        if n > MAX_LEN {
            return Err(Error::InputTooLong(n));
        }

        // Complemented symbols with a smallest sentinel sort in exactly the
        // reverse order of the text with a greatest terminator.
        let mut symbols: Vec<u32> = text.iter().map(|&b| 256 - b as u32).collect();
        symbols.push(0);
        let mut sa = suffix_array::suffix_array(&symbols, 257);
        sa.reverse();
        let lcp = suffix_array::lcp_array(&symbols, &sa);
        drop(symbols);

        let blank = Node { parent: NONE, depth: 0, edge_start: 0, first_child: NONE, next_sibling: NONE };
        let mut nodes = Vec::with_capacity(2 * n + 1);
        nodes.extend((0..n).map(|p| Node { depth: (n - p) as u32, ..blank }));
        let root = n as u32;
        nodes.push(blank);

        // Stack entries carry (id, depth, start of some occurrence), so the
        // leaves, visited in suffix order, are only ever written.
        let mut last_child = vec![NONE; n + 1];
        let attach = |nodes: &mut Vec<Node>, last_child: &mut Vec<u32>, parent: (u32, u32), child: (u32, u32, u32)| {
            let (pid, pd) = parent;
            let c = &mut nodes[child.0 as usize];
            c.parent = pid;
            c.edge_start = child.2 + pd;
            match std::mem::replace(&mut last_child[pid as usize], child.0) {
                NONE => nodes[pid as usize].first_child = child.0,
                prev => nodes[prev as usize].next_sibling = child.0,
            }
        };

        // The final suffix array entry is the lone terminator; skip it.
        let mut stack = vec![(root, 0u32, 1u32)];
        for r in 0..n {
            let p = sa[r];
            let l = if r == 0 { 0 } else { lcp[r] };
            while stack.last().unwrap().1 > l {
                let popped = stack.pop().unwrap();
                let top = *stack.last().unwrap();
                if top.1 >= l {
                    attach(&mut nodes, &mut last_child, (top.0, top.1), popped);
                } else {
                    let u = nodes.len() as u32;
                    nodes.push(Node { depth: l, ..blank });
                    last_child.push(NONE);
                    stack.push((u, l, popped.2));
                    attach(&mut nodes, &mut last_child, (u, l), popped);
                }
            }
            stack.push((p, n as u32 - p, p + 1));
        }
        while stack.len() > 1 {
            let popped = stack.pop().unwrap();
            let top = *stack.last().unwrap();
            attach(&mut nodes, &mut last_child, (top.0, top.1), popped);
        }
        nodes.shrink_to_fit();

        Ok(SuffixTree { text: text.to_vec(), nodes })
    }

    pub fn text(&self) -> &[u8] {
        &self.text
    }

    /// Length of the indexed word (terminator excluded).
    pub fn len(&self) -> usize {
        self.text.len()
    }

    pub fn is_empty(&self) -> bool {
        self.text.is_empty()
    }

    pub fn root(&self) -> NodeId {
        NodeId(self.text.len() as u32)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (0..self.nodes.len() as u32).map(NodeId)
    }

    pub fn is_leaf(&self, v: NodeId) -> bool {
        v.index() < self.text.len()
    }

    /// Suffix start position of a leaf.
    pub fn leaf_label(&self, v: NodeId) -> Option<usize> {
        self.is_leaf(v).then(|| v.index() + 1)
    }

    /// The leaf whose suffix starts at `pos`.
    pub fn leaf(&self, pos: usize) -> NodeId {
        assert!((1..=self.len()).contains(&pos));
        NodeId(pos as u32 - 1)
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        match self.nodes[v.index()].parent {
            NONE => None,
            p => Some(NodeId(p)),
        }
    }

    /// `|v|` in real symbols.
    pub fn depth(&self, v: NodeId) -> usize {
        self.nodes[v.index()].depth as usize
    }

    pub fn parent_depth(&self, v: NodeId) -> usize {
        self.parent(v).map_or(0, |p| self.depth(p))
    }

    /// Incoming edge label as an inclusive 1-based range `(start, end)` of
    /// real symbols; `end = start - 1` for a terminator-only leaf edge.
    pub fn edge(&self, v: NodeId) -> Option<(usize, usize)> {
        let p = self.parent(v)?;
        let start = self.nodes[v.index()].edge_start as usize;
        Some((start, start + self.depth(v) - self.depth(p) - 1))
    }

    /// Number of real symbols on the incoming edge.
    pub fn edge_len(&self, v: NodeId) -> usize {
        self.depth(v) - self.parent_depth(v)
    }

    /// Start of some occurrence of the factor spelled by `v`.
    pub fn occurrence(&self, v: NodeId) -> usize {
        match self.parent(v) {
            None => 1,
            Some(p) => self.nodes[v.index()].edge_start as usize - self.depth(p),
        }
    }

    /// The factor spelled from the root to `v` (terminator excluded).
    pub fn factor(&self, v: NodeId) -> &[u8] {
        let start = self.occurrence(v) - 1;
        &self.text[start..start + self.depth(v)]
    }

    /// The factor spelled from the root to a locus.
    pub fn locus_factor(&self, locus: Locus) -> &[u8] {
        let start = self.occurrence(locus.node) - 1;
        &self.text[start..start + locus.depth]
    }

    /// First symbol of the incoming edge, `None` when the edge carries only
    /// the terminator.
    pub fn first_symbol(&self, v: NodeId) -> Option<u8> {
        if self.edge_len(v) == 0 {
            None
        } else {
            Some(self.text[self.nodes[v.index()].edge_start as usize - 1])
        }
    }

    /// Children in increasing order of their first edge symbol (terminator last).
    pub fn children(&self, v: NodeId) -> Children<'_> {
        Children { tree: self, next: self.nodes[v.index()].first_child }
    }

    pub fn child_count(&self, v: NodeId) -> usize {
        self.children(v).count()
    }

    fn child_by_symbol(&self, v: NodeId, symbol: u8) -> Option<NodeId> {
        for c in self.children(v) {
            match self.first_symbol(c) {
                Some(s) if s == symbol => return Some(c),
                Some(s) if s > symbol => return None,
                None => return None,
                _ => {}
            }
        }
        None
    }

    /// Finds the locus of `pattern`, or `None` if it is not a factor.
    pub fn locate(&self, pattern: &[u8]) -> Result<Option<Locus>> {
        if pattern.is_empty() {
            return Err(Error::EmptyPattern);
        }
        let mut v = self.root();
        let mut matched = 0;
        loop {
            let Some(c) = self.child_by_symbol(v, pattern[matched]) else {
                return Ok(None);
            };
            let start = self.nodes[c.index()].edge_start as usize - 1;
            let take = self.edge_len(c).min(pattern.len() - matched);
            if self.text[start..start + take] != pattern[matched..matched + take] {
                return Ok(None);
            }
            matched += take;
            if matched == pattern.len() {
                return Ok(Some(Locus { node: c, depth: matched }));
            }
            v = c;
        }
    }

    /// Locus of the factor `w[start .. start + len - 1]`.
    pub fn locate_occurrence(&self, start: usize, len: usize) -> Result<Locus> {
        if len == 0 {
            return Err(Error::EmptyPattern);
        }
        let end = start + len - 1;
        if start == 0 || end > self.len() {
            return Err(Error::PositionOutOfRange { pos: end.max(start), n: self.len() });
        }
        // Walk up from the leaf of `start` to the edge containing depth `len`.
        let mut v = self.leaf(start);
        while self.parent_depth(v) >= len {
            v = self.parent(v).unwrap();
        }
        Ok(Locus { node: v, depth: len })
    }

    /// All nodes in depth-first order with children visited lexicographically.
    pub fn preorder(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![self.root()];
        let mut kids = Vec::new();
        while let Some(v) = stack.pop() {
            out.push(v);
            kids.clear();
            kids.extend(self.children(v));
            stack.extend(kids.iter().rev());
        }
        out
    }

    /// Makes the implicit node of depth `depth` on the edge into `v` explicit.
    pub(crate) fn split_edge(&mut self, v: NodeId, depth: usize) -> NodeId {
        let p = self.nodes[v.index()].parent;
        let pd = self.nodes[p as usize].depth as usize;
        debug_assert!(pd < depth && depth < self.depth(v));
        let e = self.nodes.len() as u32;
        let vn = &mut self.nodes[v.index()];
        let node = Node {
            parent: p,
            depth: depth as u32,
            edge_start: vn.edge_start,
            first_child: v.0,
            next_sibling: vn.next_sibling,
        };
        vn.edge_start += (depth - pd) as u32;
        vn.parent = e;
        vn.next_sibling = NONE;
        push_gradual(&mut self.nodes, node);

        if self.nodes[p as usize].first_child == v.0 {
            self.nodes[p as usize].first_child = e;
        } else {
            let mut s = self.nodes[p as usize].first_child;
            while self.nodes[s as usize].next_sibling != v.0 {
                s = self.nodes[s as usize].next_sibling;
            }
            self.nodes[s as usize].next_sibling = e;
        }
        NodeId(e)
    }
}

pub struct Children<'a> {
    tree: &'a SuffixTree,
    next: u32,
}

impl Iterator for Children<'_> {
    type Item = NodeId;

    fn next(&mut self) -> Option<NodeId> {
        match self.next {
            NONE => None,
            c => {
                self.next = self.tree.nodes[c as usize].next_sibling;
                Some(NodeId(c))
            }
        }
    }
}
