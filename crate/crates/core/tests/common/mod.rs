//! Brute-force reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use partial_covers::LabeledPartition;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const EXAMPLE: &[u8] = b"bcccacccaccaccb";

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_word(rng: &mut impl Rng, n: usize, sigma: u8) -> Vec<u8> {
    (0..n).map(|_| b'a' + rng.gen_range(0..sigma)).collect()
}

/// Every distinct factor of a word with its occurrence list, enumerated
/// once and queried many times.
pub struct Factors<'a> {
    pub w: &'a [u8],
    pub occ: HashMap<&'a [u8], Vec<usize>>,
}

impl<'a> Factors<'a> {
    pub fn new(w: &'a [u8]) -> Self {
        let mut occ: HashMap<&[u8], Vec<usize>> = HashMap::new();
        for i in 0..w.len() {
            for j in i + 1..=w.len() {
                occ.entry(&w[i..j]).or_default().push(i + 1);
            }
        }
        Factors { w, occ }
    }

    pub fn occurrences(&self, u: &[u8]) -> &[usize] {
        self.occ.get(u).map_or(&[], Vec::as_slice)
    }

    /// Positions covered by the occurrences of `u`, by marking.
    pub fn covered(&self, u: &[u8]) -> usize {
        let mut mark = vec![false; self.w.len()];
        for &i in self.occurrences(u) {
            mark[i - 1..i - 1 + u.len()].iter_mut().for_each(|m| *m = true);
        }
        mark.iter().filter(|&&m| m).count()
    }

    pub fn delta(&self, u: &[u8]) -> usize {
        let occ = self.occurrences(u);
        occ.len() - occ.windows(2).filter(|p| p[1] - p[0] < u.len()).count()
    }

    /// Coverage of every distinct factor, sorted by factor.
    pub fn coverage_table(&self) -> Vec<(&'a [u8], usize)> {
        let mut rows: Vec<_> = self.occ.keys().map(|&u| (u, self.covered(u))).collect();
        rows.sort();
        rows
    }
}

/// Shortest length reaching `alpha` and the factors of that length doing so.
pub fn shortest_covers<'a>(table: &[(&'a [u8], usize)], alpha: usize) -> (usize, BTreeSet<&'a [u8]>) {
    let len = table.iter().filter(|(_, c)| *c >= alpha).map(|(u, _)| u.len()).min().unwrap();
    let set = table.iter().filter(|(u, c)| u.len() == len && *c >= alpha).map(|&(u, _)| u).collect();
    (len, set)
}

/// Maximum coverage for each length `1..=n`.
pub fn envelope(n: usize, table: &[(&[u8], usize)]) -> Vec<usize> {
    let mut best = vec![0; n];
    for (u, c) in table {
        best[u.len() - 1] = best[u.len() - 1].max(*c);
    }
    best
}

pub fn smallest_period(u: &[u8]) -> usize {
    (1..=u.len()).find(|&p| u[p..] == u[..u.len() - p]).unwrap()
}

pub fn is_primitive(u: &[u8]) -> bool {
    let p = smallest_period(u);
    p == u.len() || u.len() % p != 0
}

/// Distinct primitively rooted squares, as words.
pub fn squares(w: &[u8]) -> BTreeSet<Vec<u8>> {
    let n = w.len();
    let mut out = BTreeSet::new();
    for i in 0..n {
        for l in 1..=(n - i) / 2 {
            let (a, b) = (&w[i..i + l], &w[i + l..i + 2 * l]);
            if a == b && is_primitive(a) {
                out.insert(w[i..i + 2 * l].to_vec());
            }
        }
    }
    out
}

/// `u` covers `w[first .. last + |u| - 1]`, and the prefix before `first`
/// and the suffix after the last occurrence are shorter than `u`.
pub fn is_quasiseed(n: usize, len: usize, occ: &[usize]) -> bool {
    let (Some(&first), Some(&last)) = (occ.first(), occ.last()) else {
        return false;
    };
    let complete = occ.windows(2).all(|p| p[1] - p[0] <= len);
    complete && first - 1 < len && n + 1 - last < 2 * len
}

/// Smallest quasiseed length among `lo..=hi` for prefixes of `factor`.
pub fn quasigap(f: &Factors, factor: &[u8], lo: usize, hi: usize) -> Option<usize> {
    (lo..=hi).find(|&j| is_quasiseed(f.w.len(), j, f.occurrences(&factor[..j])))
}

/// Partition kept as explicit sets keyed by label.
#[derive(Debug, Clone)]
pub struct NaivePartition {
    pub n: usize,
    pub sets: BTreeMap<usize, BTreeSet<usize>>,
}

impl NaivePartition {
    pub fn new(n: usize) -> Self {
        NaivePartition { n, sets: (1..=n).map(|x| (x, BTreeSet::from([x]))).collect() }
    }

    pub fn next(&self, x: usize) -> Option<usize> {
        let set = self.sets.values().find(|s| s.contains(&x)).unwrap();
        set.range(x + 1..).next().copied()
    }

    pub fn find(&self, x: usize) -> usize {
        *self.sets.iter().find(|(_, s)| s.contains(&x)).unwrap().0
    }

    /// Applies the union and returns `{(x, next'(x)) : next(x) != next'(x)}`.
    pub fn union(&mut self, labels: &[usize], into: usize) -> Vec<(usize, usize)> {
        let before: Vec<_> = (1..=self.n).map(|x| self.next(x)).collect();
        let mut merged = BTreeSet::new();
        for l in labels {
            merged.extend(self.sets.remove(l).unwrap());
        }
        self.sets.insert(into, merged);
        let mut out = Vec::new();
        for x in 1..=self.n {
            let after = self.next(x);
            if after != before[x - 1] {
                out.push((x, after.expect("successors only appear")));
            }
        }
        out
    }
}

/// Plays a random sequence of unions down to a single set, comparing every
/// change list and the whole `next` array with the naive partition.
pub fn replay(n: usize, rng: &mut impl Rng) -> Result<(), String> {
    let k = 3 * n + 1;
    let mut fast = LabeledPartition::new(n, k).map_err(|e| e.to_string())?;
    let mut slow = NaivePartition::new(n);
    let mut free: Vec<usize> = (n + 1..=k).collect();
    let mut total_changes = 0;
    while slow.sets.len() > 1 || rng.gen_bool(0.2) {
        let mut active: Vec<usize> = slow.sets.keys().copied().collect();
        active.shuffle(rng);
        let take = rng.gen_range(1..=active.len().min(4));
        let labels = &active[..take];
        let into = free.swap_remove(rng.gen_range(0..free.len()));
        let got = fast.union(labels, into).map_err(|e| e.to_string())?;
        let want = slow.union(labels, into);
        if got.0 != want {
            return Err(format!("n={n} union {labels:?} -> {into}: {:?} != {want:?}", got.0));
        }
        total_changes += got.len();
        free.extend_from_slice(labels);
        for x in 1..=n {
            if fast.next(x) != slow.next(x) || fast.find(x).unwrap() != slow.find(x) {
                return Err(format!("n={n}: state of {x} diverged after union into {into}"));
            }
        }
        if free.is_empty() {
            break;
        }
    }
    let stats = fast.stats();
    let log = (n.max(2) as f64).log2();
    if stats.elements_moved as f64 > n as f64 * log {
        return Err(format!("n={n}: {} moves exceed n log2 n", stats.elements_moved));
    }
    if total_changes > 2 * stats.elements_moved + n {
        return Err(format!("n={n}: {total_changes} change pairs for {} moves", stats.elements_moved));
    }
    Ok(())
}

pub mod check {
    //! Library-versus-oracle comparisons, one per query family.

    use std::collections::BTreeSet;

    use partial_covers::byproducts::{distinct_primitively_rooted_squares, quasigaps};
    use partial_covers::cover_queries::{build_envelope, covered_index, shortest_partial_covers};
    use partial_covers::{Cst, Locus};
    use rand::Rng;

    use super::Factors;

    pub type Outcome = Result<(), String>;

    fn show(w: &[u8]) -> String {
        String::from_utf8_lossy(w).into_owned()
    }

    /// Annotations of every explicit node that names a factor.
    pub fn annotations(cst: &Cst, f: &Factors) -> Outcome {
        let (w, tree) = (cst.text(), cst.tree());
        for v in tree.nodes() {
            if v == tree.root() || tree.edge_len(v) == 0 {
                continue;
            }
            let u = tree.factor(v);
            let occ = f.occurrences(u);
            let got = (cst.c(v), cst.delta(v), cst.first_occ(v), cst.last_occ(v), cst.occ_count(v));
            let want = (f.covered(u), f.delta(u), occ[0], *occ.last().unwrap(), occ.len());
            if got != want {
                return Err(format!("{}: node {} has (c, Δ, first, last, occ) = {got:?}, expected {want:?}", show(w), show(u)));
            }
        }
        Ok(())
    }

    /// Cover index at `count` random loci.
    pub fn loci(cst: &Cst, f: &Factors, rng: &mut impl Rng, count: usize) -> Outcome {
        let (w, tree) = (cst.text(), cst.tree());
        let n = w.len();
        for _ in 0..count {
            let start = rng.gen_range(1..=n);
            let len = rng.gen_range(1..=n + 1 - start);
            let u = &w[start - 1..start - 1 + len];
            let locus: Locus = tree.locate_occurrence(start, len).map_err(|e| e.to_string())?;
            let by_pattern = tree.locate(u).map_err(|e| e.to_string())?;
            if by_pattern != Some(locus) {
                return Err(format!("{}: locate({}) disagrees with locate_occurrence", show(w), show(u)));
            }
            let got = covered_index(cst, locus).map_err(|e| e.to_string())?;
            let want = f.covered(u);
            if got != want {
                return Err(format!("{}: Covered({}) = {got}, expected {want}", show(w), show(u)));
            }
        }
        Ok(())
    }

    /// Shortest partial covers for every alpha.
    pub fn covers(cst: &Cst, f: &Factors) -> Outcome {
        let w = cst.text();
        let table = f.coverage_table();
        for alpha in 1..=w.len() {
            let got = shortest_partial_covers(cst, alpha).map_err(|e| e.to_string())?;
            let (len, want) = super::shortest_covers(&table, alpha);
            let words: BTreeSet<&[u8]> = got.iter().map(|p| p.factor.bytes(w)).collect();
            if words != want || words.len() != got.len() || got.iter().any(|p| p.factor.length != len) {
                return Err(format!("{}: alpha {alpha} gave {} factors, expected {} of length {len}", show(w), got.len(), want.len()));
            }
            for p in &got {
                let u = p.factor.bytes(w);
                let occ = f.occurrences(u);
                if p.coverage != f.covered(u) || p.factor.start != occ[0] || p.factor.last != *occ.last().unwrap() {
                    return Err(format!("{}: alpha {alpha}, factor {} misreported", show(w), show(u)));
                }
            }
            let starts: Vec<usize> = got.iter().map(|p| p.factor.start).collect();
            if starts.windows(2).any(|s| s[0] > s[1]) {
                return Err(format!("{}: alpha {alpha} answers not ordered by first occurrence", show(w)));
            }
        }
        Ok(())
    }

    /// Best coverage per length, witnesses included.
    pub fn envelope(cst: &Cst, f: &Factors) -> Outcome {
        let w = cst.text();
        let env = build_envelope(cst);
        let want = super::envelope(w.len(), &f.coverage_table());
        if env.values() != want.as_slice() {
            return Err(format!("{}: envelope {:?}, expected {want:?}", show(w), env.values()));
        }
        for j in 1..=w.len() {
            let wit = env.witness(j);
            if wit.length != j || f.covered(wit.bytes(w)) != want[j - 1] {
                return Err(format!("{}: bad witness for length {j}", show(w)));
            }
        }
        Ok(())
    }

    pub fn squares(w: &[u8]) -> Outcome {
        let got = distinct_primitively_rooted_squares(w).map_err(|e| e.to_string())?;
        let mut set = BTreeSet::new();
        for s in &got {
            let sq = s.square(w);
            if sq[..s.half_length] != sq[s.half_length..] || !super::is_primitive(s.half(w)) {
                return Err(format!("{}: reported {} at {} is not a primitively rooted square", show(w), show(sq), s.start));
            }
            set.insert(sq.to_vec());
        }
        let want = super::squares(w);
        if set != want || set.len() != got.len() {
            return Err(format!("{}: {} squares, expected {}", show(w), got.len(), want.len()));
        }
        if got.len() >= 2 * w.len() {
            return Err(format!("{}: {} distinct squares is not below 2n", show(w), got.len()));
        }
        Ok(())
    }

    /// Quasigaps against the definition, including the range shape.
    pub fn quasigaps_match(cst: &Cst, f: &Factors) -> Outcome {
        let (w, tree) = (cst.text(), cst.tree());
        let table = quasigaps(cst);
        for v in tree.nodes() {
            if v == tree.root() {
                continue;
            }
            let (lo, hi) = (tree.parent_depth(v) + 1, tree.depth(v));
            let want = if lo > hi { None } else { super::quasigap(f, tree.factor(v), lo, hi) };
            let got = table.get(v);
            if got != want {
                return Err(format!("{}: quasigap({}) = {got:?}, expected {want:?}", show(w), show(tree.factor(v))));
            }
            if let Some(g) = got {
                let u = tree.factor(v);
                if !(g..=hi).all(|j| super::is_quasiseed(w.len(), j, f.occurrences(&u[..j]))) {
                    return Err(format!("{}: quasiseeds on edge of {} are not a range", show(w), show(u)));
                }
            }
        }
        Ok(())
    }

    /// Every check on one word.
    pub fn all(w: &[u8], rng: &mut impl Rng, loci_count: usize) -> Outcome {
        let cst = Cst::build(w).map_err(|e| e.to_string())?;
        let f = Factors::new(w);
        annotations(&cst, &f)?;
        loci(&cst, &f, rng, loci_count)?;
        covers(&cst, &f)?;
        envelope(&cst, &f)?;
        squares(w)?;
        quasigaps_match(&cst, &f)
    }
}
