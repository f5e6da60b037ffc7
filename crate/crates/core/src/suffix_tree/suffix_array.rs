//! Suffix array and LCP array over a `u32` alphabet.
//!
//! The input is expected to end with a sentinel: a symbol that occurs
//! nowhere else and is smaller than every other symbol.

const EMPTY: u32 = u32::MAX;

/// Sorts the suffixes of `s` by induced sorting (SA-IS), O(n) time.
///
/// `sigma` is an exclusive upper bound on the symbol values.
pub(crate) fn suffix_array(s: &[u32], sigma: usize) -> Vec<u32> {
    let mut sa = vec![EMPTY; s.len()];
    sais(s, sigma, &mut sa);
    sa
}

fn sais(s: &[u32], sigma: usize, sa: &mut [u32]) {
    let n = s.len();
    debug_assert!(n > 0 && s[..n - 1].iter().all(|&c| c > s[n - 1]));
    if n == 1 {
        sa[0] = 0;
        return;
    }

    // `stype[i]`: suffix i is smaller than suffix i + 1.
    let mut stype = vec![false; n];
    stype[n - 1] = true;
    for i in (0..n - 1).rev() {
        stype[i] = s[i] < s[i + 1] || (s[i] == s[i + 1] && stype[i + 1]);
    }
    let is_lms = |i: usize| i > 0 && stype[i] && !stype[i - 1];

    let mut count = vec![0u32; sigma];
    for &c in s {
        count[c as usize] += 1;
    }
    let heads = |count: &[u32]| -> Vec<u32> {
        let mut sum = 0;
        count.iter().map(|&k| { sum += k; sum - k }).collect()
    };
    let tails = |count: &[u32]| -> Vec<u32> {
        let mut sum = 0;
        count.iter().map(|&k| { sum += k; sum }).collect()
    };

    let induce = |sa: &mut [u32]| {
        let mut head = heads(&count);
        for r in 0..n {
            let j = sa[r];
            if j != EMPTY && j > 0 && !stype[j as usize - 1] {
                let c = s[j as usize - 1] as usize;
                sa[head[c] as usize] = j - 1;
                head[c] += 1;
            }
        }
        let mut tail = tails(&count);
        for r in (0..n).rev() {
            let j = sa[r];
            if j != EMPTY && j > 0 && stype[j as usize - 1] {
                let c = s[j as usize - 1] as usize;
                tail[c] -= 1;
                sa[tail[c] as usize] = j - 1;
            }
        }
    };

    // Sort the LMS substrings.
    sa.fill(EMPTY);
    let mut tail = tails(&count);
    for i in (1..n).rev() {
        if is_lms(i) {
            let c = s[i] as usize;
            tail[c] -= 1;
            sa[tail[c] as usize] = i as u32;
        }
    }
    induce(sa);

    // Compact the sorted LMS positions to the front and name the substrings.
    let mut m = 0;
    for r in 0..n {
        if is_lms(sa[r] as usize) {
            sa[m] = sa[r];
            m += 1;
        }
    }
    let (lms, names) = sa.split_at_mut(m);
    names.fill(EMPTY);
    let same = |a: usize, b: usize| -> bool {
        let mut k = 0;
        loop {
            if s[a + k] != s[b + k] || stype[a + k] != stype[b + k] {
                return false;
            }
            if k > 0 && (is_lms(a + k) || is_lms(b + k)) {
                return is_lms(a + k) && is_lms(b + k);
            }
            k += 1;
        }
    };
    let mut name = 0u32;
    let mut prev: Option<usize> = None;
    for &p in lms.iter() {
        let p = p as usize;
        if prev.is_some_and(|q| !same(q, p)) {
            name += 1;
        }
        // LMS positions are at least two apart, so `p / 2` is collision-free.
        names[p / 2] = name;
        prev = Some(p);
    }
    let distinct = name as usize + 1;

    // Reduced string in text order; its sentinel is the LMS suffix at n - 1.
    let mut reduced = Vec::with_capacity(m);
    reduced.extend(names.iter().copied().filter(|&x| x != EMPTY));
    let mut positions: Vec<u32> = Vec::with_capacity(m);
    positions.extend((1..n).filter(|&i| is_lms(i)).map(|i| i as u32));

    let mut order = vec![EMPTY; m];
    if distinct < m {
        sais(&reduced, distinct, &mut order);
    } else {
        for (i, &c) in reduced.iter().enumerate() {
            order[c as usize] = i as u32;
        }
    }
    drop(reduced);

    // Place the LMS suffixes in sorted order at their bucket tails.
    sa.fill(EMPTY);
    let mut tail = tails(&count);
    for &k in order.iter().rev() {
        let i = positions[k as usize] as usize;
        let c = s[i] as usize;
        tail[c] -= 1;
        sa[tail[c] as usize] = i as u32;
    }
    induce(sa);
}

/// Kasai et al.: `lcp[r]` is the longest common prefix of the suffixes at
/// ranks `r - 1` and `r`; `lcp[0] = 0`.
pub(crate) fn lcp_array(s: &[u32], sa: &[u32]) -> Vec<u32> {
    let n = s.len();
    let mut inv = vec![0u32; n];
    for (r, &p) in sa.iter().enumerate() {
        inv[p as usize] = r as u32;
    }
    let mut lcp = vec![0u32; n];
    let mut h = 0usize;
    for i in 0..n {
        let r = inv[i] as usize;
        if r == 0 {
            h = 0;
            continue;
        }
        let j = sa[r - 1] as usize;
        while i + h < n && j + h < n && s[i + h] == s[j + h] {
            h += 1;
        }
        lcp[r] = h as u32;
        h = h.saturating_sub(1);
    }
    lcp
}
