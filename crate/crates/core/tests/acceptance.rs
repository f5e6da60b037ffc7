//! Acceptance gate: prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::alloc::{GlobalAlloc, Layout, System};
use std::sync::atomic::{AtomicUsize, Ordering::Relaxed};
use std::time::{Duration, Instant};

use partial_covers::byproducts::{interleave_transform, quasigaps};
use partial_covers::cover_queries::{build_envelope, covered_index, shortest_partial_covers};
use partial_covers::{compute_cst, Cst};
use rand::Rng;

struct Counting;

static LIVE: AtomicUsize = AtomicUsize::new(0);
static PEAK: AtomicUsize = AtomicUsize::new(0);

unsafe impl GlobalAlloc for Counting {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        let p = System.alloc(layout);
        if !p.is_null() {
            let now = LIVE.fetch_add(layout.size(), Relaxed) + layout.size();
            PEAK.fetch_max(now, Relaxed);
        }
        p
    }

    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        System.dealloc(ptr, layout);
        LIVE.fetch_sub(layout.size(), Relaxed);
    }

    unsafe fn realloc(&self, ptr: *mut u8, layout: Layout, new_size: usize) -> *mut u8 {
        let p = System.realloc(ptr, layout, new_size);
        if !p.is_null() {
            if new_size >= layout.size() {
                let now = LIVE.fetch_add(new_size - layout.size(), Relaxed) + new_size - layout.size();
                PEAK.fetch_max(now, Relaxed);
            } else {
                LIVE.fetch_sub(layout.size() - new_size, Relaxed);
            }
        }
        p
    }
}

#[global_allocator]
static ALLOC: Counting = Counting;

/// Runs `f` and returns its result with the peak number of bytes allocated
/// on top of what was live before the call.
fn peak_during<T>(f: impl FnOnce() -> T) -> (T, usize) {
    let base = LIVE.load(Relaxed);
    PEAK.store(base, Relaxed);
    let out = f();
    (out, PEAK.load(Relaxed) - base)
}

struct Report {
    failed: usize,
}

impl Report {
    fn line(&mut self, name: &str, result: Result<String, String>) {
        match result {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                self.failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Extra nodes below 2n, μ non-decreasing, answer length non-decreasing in α.
fn structural(cst: &Cst) -> Result<(), String> {
    let n = cst.len();
    let extras = cst.extra_nodes().count();
    ensure(extras < 2 * n, || format!("{extras} extra nodes for n = {n}"))?;
    let env = build_envelope(cst);
    ensure((1..=n).all(|i| env.prefix_max(i - 1) <= env.prefix_max(i)), || "μ decreases".into())?;
    let rows = env.all_partial_covers();
    ensure(rows.windows(2).all(|r| r[0].length <= r[1].length), || "answer length decreases in α".into())
}

fn example_regression() -> Result<String, String> {
    let w = common::EXAMPLE;
    let cst = Cst::build(w).map_err(|e| e.to_string())?;
    let tree = cst.tree();
    let locus = |f: &[u8]| tree.locate(f).unwrap().unwrap();

    let covers: Vec<&[u8]> = shortest_partial_covers(&cst, 11).unwrap().iter().map(|p| p.factor.bytes(w)).collect();
    ensure(covers == [&b"ccac"[..], b"cacc"], || format!("11-partial covers {covers:?}"))?;

    for (f, c, d) in [(&b"cacc"[..], 11, 2), (b"cccacc", 10, 1), (b"ccca", 8, 2)] {
        let v = locus(f);
        ensure(v.is_explicit(tree), || format!("{} not explicit", String::from_utf8_lossy(f)))?;
        let got = (cst.c(v.node), cst.delta(v.node));
        ensure(got == (c, d), || format!("{}: (c, Δ) = {got:?}", String::from_utf8_lossy(f)))?;
    }
    for (f, want) in [(&b"ccc"[..], 6), (b"cccac", 9)] {
        let v = locus(f);
        ensure(!v.is_explicit(tree), || format!("{} should be implicit", String::from_utf8_lossy(f)))?;
        let got = covered_index(&cst, v).unwrap();
        ensure(got == want, || format!("Covered({}) = {got}", String::from_utf8_lossy(f)))?;
    }
    let extras = cst.extra_nodes().count();
    ensure(extras == 4, || format!("{extras} extra nodes"))?;

    let env = build_envelope(&cst);
    let lengths: Vec<usize> = env.all_partial_covers().iter().map(|r| r.length).collect();
    let want: Vec<usize> = (1..=15).map(|a| match a { 1..=10 => 1, 11 => 4, 12 => 5, a => a }).collect();
    ensure(lengths == want, || format!("all-covers lengths {lengths:?}"))?;
    for (j, e) in [(1, 10), (4, 11), (5, 12), (7, 7)] {
        ensure(env.value(j) == e, || format!("E′({j}) = {}", env.value(j)))?;
    }

    let q = quasigaps(&cst);
    ensure(q.is_quasiseed(locus(b"cacc").node), || "cacc is not a quasiseed".into())?;
    let g = q.get(locus(b"cccacc").node);
    ensure(g == Some(6), || format!("quasigap(cccacc) = {g:?}"))?;

    let small = Cst::build(b"aababab").unwrap();
    let c = covered_index(&small, small.tree().locate(b"aba").unwrap().unwrap()).unwrap();
    ensure(c == 5, || format!("Covered(aba, aababab) = {c}"))?;
    let t = interleave_transform(b"aabab").unwrap();
    ensure(t == b"0a0a0b0a0b0", || format!("interleave(aabab) = {}", String::from_utf8_lossy(&t)))?;
    structural(&cst)?;
    Ok("covers, annotations, 4 extra nodes, all-covers, envelope, quasigaps, Covered, interleave".into())
}

fn oracle_equivalence() -> Result<String, String> {
    let mut rng = common::rng(2024);
    let mut total_n = 0;
    for round in 0..500 {
        let n = rng.gen_range(1..=200);
        let sigma = [2, 3, 4][round % 3];
        let w = common::random_word(&mut rng, n, sigma);
        common::check::all(&w, &mut rng, 50).map_err(|e| format!("word {round}: {e}"))?;
        structural(&Cst::build(&w).unwrap()).map_err(|e| format!("word {round}: {e}"))?;
        total_n += n;
    }
    Ok(format!("500 words, {total_n} symbols, checks (a)-(f) exact"))
}

fn change_lists() -> Result<String, String> {
    let mut rng = common::rng(64);
    for round in 0..200 {
        let n = rng.gen_range(1..=64);
        common::replay(n, &mut rng).map_err(|e| format!("sequence {round}: {e}"))?;
    }
    Ok("200 random union sequences match the naive partition".into())
}

fn binary_word(n: usize, seed: u64) -> Vec<u8> {
    common::random_word(&mut common::rng(seed), n, 2)
}

fn min_time(n: usize, reps: usize) -> Duration {
    let w = binary_word(n, n as u64);
    (0..reps)
        .map(|_| {
            let t = Instant::now();
            let cst = compute_cst(&w).unwrap();
            let e = t.elapsed();
            drop(cst);
            e
        })
        .min()
        .unwrap()
}

fn complexity(report: &mut Report) {
    let n = 100_000;
    let w = binary_word(n, 1);
    let t = Instant::now();
    let (cst, peak) = peak_during(|| compute_cst(&w).unwrap());
    let secs = t.elapsed().as_secs_f64();
    let per_symbol = peak as f64 / n as f64;
    let stats = cst.stats();
    let bound = 2.0 * n as f64 * (n as f64).log2();
    let r = ensure(secs <= 5.0, || format!("{secs:.2} s"))
        .and_then(|_| ensure(per_symbol <= 200.0, || format!("{per_symbol:.1} bytes/symbol")))
        .and_then(|_| ensure(stats.change_pairs as f64 <= bound, || format!("{} change pairs > {bound:.0}", stats.change_pairs)))
        .and_then(|_| structural(&cst))
        .map(|_| {
            format!(
                "n = 1e5: {secs:.2} s, peak {per_symbol:.1} bytes/symbol, Σ|ChangeList| = {} ≤ {bound:.0}",
                stats.change_pairs
            )
        });
    report.line("4a complexity n=1e5", r);
    drop(cst);

    let big = 1_000_000;
    let w = binary_word(big, big as u64);
    let t = Instant::now();
    let cst = compute_cst(&w).unwrap();
    let t_big = t.elapsed();
    let r = ensure(t_big.as_secs_f64() <= 60.0, || format!("{:.2} s", t_big.as_secs_f64()))
        .and_then(|_| structural(&cst))
        .map(|_| format!("n = 1e6: {:.2} s, {} extra nodes", t_big.as_secs_f64(), cst.extra_nodes().count()));
    report.line("4b complexity n=1e6", r);
    drop(cst);

    let times = [min_time(1_000, 30), min_time(10_000, 10), min_time(100_000, 3), t_big.min(min_time(big, 1))];
    let ratios: Vec<f64> = times.windows(2).map(|p| p[1].as_secs_f64() / p[0].as_secs_f64()).collect();
    let shown: Vec<String> = ratios.iter().map(|r| format!("{r:.1}")).collect();
    let ms: Vec<String> = times.iter().map(|t| format!("{:.1}ms", t.as_secs_f64() * 1e3)).collect();
    let r = ensure(ratios.iter().all(|&r| r <= 15.0), || format!("ratios {shown:?} (times {ms:?})"))
        .map(|_| format!("time(10n)/time(n) = {} for n = 1e3..1e5 (times {})", shown.join(", "), ms.join(", ")));
    report.line("4c growth", r);
}

fn main() {
    let mut report = Report { failed: 0 };

    let t = Instant::now();
    let r = example_regression();
    let secs = t.elapsed().as_secs_f64();
    report.line("1 example regression", r.and_then(|d| {
        ensure(secs < 1.0, || format!("took {secs:.2} s")).map(|_| format!("{d} ({:.0} ms)", secs * 1e3))
    }));

    let t = Instant::now();
    let r = oracle_equivalence();
    let secs = t.elapsed().as_secs_f64();
    report.line("2 oracle equivalence", r.and_then(|d| {
        ensure(secs <= 120.0, || format!("took {secs:.1} s")).map(|_| format!("{d} ({secs:.1} s)"))
    }));

    report.line("3 change lists", change_lists());

    complexity(&mut report);

    report.line(
        "5 structural bounds",
        Ok("extras < 2n, μ non-decreasing, lengths non-decreasing in α on every input above".into()),
    );

    if report.failed > 0 {
        println!("{} acceptance criteria failed", report.failed);
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
