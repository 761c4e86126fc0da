//! Acceptance suite. Each criterion prints one `PASS` or `FAIL` line; the
//! test fails unless the failing criteria are exactly `KNOWN_FAILURES`.
//!
//! Expected values come from brute-force routes (`common`, `kmnub::oracle`)
//! that share nothing with the code under test beyond the matrix entries.

mod common;

use std::collections::{BTreeSet, HashMap};
use std::fmt::Display;
use std::io::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigUint;

use kmnub::nub::{
    infinite_depth_witness, is_closed, nub_on_slice, same_conv, same_nub, trivial_nub,
    ConvComparison, NubOptions,
};
use kmnub::oracle::{oracle_ball, oracle_classify, oracle_conv, oracle_k0_witness, power_words};
use kmnub::orbit::{Dynamics, OrbitClass};
use kmnub::scale::{gallery_count, scale, tidiness_index_audit};
use kmnub::weyl::{is_straight, standardize, StandardForm, StraightVerdict};
use kmnub::{Gcm, RootSlice, RootVector, WeylElement};

use common::*;

/// Straightness is certified up to this power.
const STRAIGHT_N: usize = 8;
/// Orbit-walk and block budget of the main route.
const N_MAX: usize = 50;
/// Slice height of the corpus-wide criteria.
const H: u32 = 15;
/// Oracle iteration bound and divergence height (as a multiple of H).
const ORACLE_N_BIG: usize = 400;
const ORACLE_H_FACTOR: i64 = 40;
/// Powers `|z| ≤ CONV_Z` approximate the hull of `⟨w⟩`; the oracle result is
/// conclusive when `2 CONV_Z` powers give the same hull.
const CONV_Z: usize = 8;
const LIMIT_1: Duration = Duration::from_secs(5);
const LIMIT_2: Duration = Duration::from_secs(5);
const LIMIT_3: Duration = Duration::from_secs(60);
const SCALE_QS: [u64; 5] = [2, 3, 4, 5, 8];
const SCALE_N: usize = 6;

/// 6b asks for different nubs after removing the bridge, but both
/// elements are then supported on affine components of `I`, so both nubs
/// are trivial and the criterion cannot hold.
const KNOWN_FAILURES: &[&str] = &["6b"];

#[derive(Debug)]
struct Fail(String);

impl<E: Display> From<E> for Fail {
    fn from(e: E) -> Self {
        Fail(e.to_string())
    }
}

type Outcome = Result<String, Fail>;

/// Identifier, title and check of one criterion.
type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), Fail> {
    if cond {
        Ok(())
    } else {
        Err(Fail(msg()))
    }
}

fn opts(h: u32) -> NubOptions {
    let mut o = NubOptions::with_height(h);
    o.n_max = N_MAX;
    o.standardize.straight_n = STRAIGHT_N;
    o
}

fn certified(w: &WeylElement) -> Result<(), Fail> {
    let cert = is_straight(w, STRAIGHT_N)?;
    ensure(cert.verdict == StraightVerdict::StraightUpTo(STRAIGHT_N), || {
        format!("{w:?} is not certified straight: {:?}", cert.verdict)
    })
}

fn word_of(x: &WeylElement) -> Result<Vec<usize>, Fail> {
    Ok(x.reduced_word()?.to_vec())
}

fn inverse_word(word: &[usize]) -> Vec<usize> {
    word.iter().rev().copied().collect()
}

fn oracle_class(gcm: &Gcm, r: &RootVector, word: &[usize], h: u32) -> Option<OrbitClass> {
    oracle_classify(gcm, r, word, ORACLE_N_BIG, ORACLE_H_FACTOR * h as i64)
        .ok()
        .map(|v| v.class())
}

/// `K(x)` by brute force: roots in `K₃` for both `x` and `x⁻¹`.
fn oracle_k(gcm: &Gcm, roots: &BTreeSet<RootVector>, word: &[usize], h: u32) -> Result<BTreeSet<RootVector>, Fail> {
    let inv = inverse_word(word);
    let mut out = BTreeSet::new();
    for r in roots {
        let f = oracle_class(gcm, r, word, h).ok_or_else(|| Fail(format!("oracle undecided on {r}")))?;
        let b = oracle_class(gcm, r, &inv, h).ok_or_else(|| Fail(format!("oracle undecided on {r}")))?;
        if f == OrbitClass::K3 && b == OrbitClass::K3 {
            out.insert(r.clone());
        }
    }
    Ok(out)
}

fn all_roots(slice: &RootSlice) -> BTreeSet<RootVector> {
    slice.iter().map(|(r, _)| r.clone()).collect()
}

fn standard(w: &WeylElement, h: u32) -> Result<StandardForm, Fail> {
    let sf = standardize(w, &opts(h).standardize)?;
    Ok(sf)
}

fn check_corpus_shape() -> Result<usize, Fail> {
    let mut gcms = 0;
    for inst in CORPUS {
        let g = load(inst.name);
        ensure((2..=4).contains(&g.rank()), || format!("{} has rank {}", inst.name, g.rank()))?;
        for i in 0..g.rank() {
            for j in 0..g.rank() {
                ensure(i == j || (-3..=0).contains(&g.a(i, j)), || {
                    format!("{} has entry {} at ({i},{j})", inst.name, g.a(i, j))
                })?;
            }
        }
        ensure(inst.words.len() >= 3, || format!("{} has fewer than 3 words", inst.name))?;
        gcms += 1;
    }
    ensure(gcms >= 10, || format!("corpus has {gcms} GCMs"))?;
    Ok(gcms)
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let gcm = load("h2");
    let (_, imaginary) = brute_slice(&gcm, 20);
    let slice = RootSlice::new(&gcm, 20)?;
    let enumerated: BTreeSet<RootVector> = slice.imaginary().iter().cloned().collect();
    ensure(enumerated == imaginary, || "imaginary slice differs from brute force".into())?;
    let words: [&[usize]; 6] = [
        &[1, 2],
        &[2, 1],
        &[1, 2, 1, 2],
        &[2, 1, 2, 1],
        &[1, 2, 1, 2, 1, 2],
        &[2, 1, 2, 1, 2, 1],
    ];
    for word in words {
        let w = element(&gcm, word);
        certified(&w)?;
        let k = nub_on_slice(&w, &slice, &opts(20))?.k.roots;
        ensure(k == imaginary, || {
            format!("K({word:?}) has {} roots, imaginary slice has {}", k.len(), imaginary.len())
        })?;
    }
    let dt = t.elapsed();
    ensure(dt < LIMIT_1, || format!("took {dt:?}"))?;
    Ok(format!("{} words, K = imaginary slice ({} roots) at H=20, {dt:.2?}", words.len(), imaginary.len()))
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let cases: [(&str, &[usize]); 2] = [("a1t", &[1, 2]), ("a2t", &[1, 2, 3])];
    for (name, word) in cases {
        let gcm = load(name);
        let w = element(&gcm, word);
        certified(&w)?;
        ensure(trivial_nub(&w, STRAIGHT_N)?, || format!("{name}: trivial_nub is false"))?;
        for h in [10, 20, 30] {
            let slice = RootSlice::new(&gcm, h)?;
            let d = nub_on_slice(&w, &slice, &opts(h))?;
            ensure(d.k.roots.is_empty() && d.trivial, || {
                format!("{name} H={h}: |K| = {}, trivial = {}", d.k.roots.len(), d.trivial)
            })?;
            let ko = oracle_k(&gcm, &all_roots(&slice), &zero_based(word), h)?;
            ensure(ko.is_empty(), || format!("{name} H={h}: oracle K has {} roots", ko.len()))?;
        }
    }
    let dt = t.elapsed();
    ensure(dt < LIMIT_2, || format!("took {dt:?}"))?;
    Ok(format!("Ã1 and Ã2: K = ∅ at H = 10, 20, 30 and trivial_nub, {dt:.2?}"))
}

fn criterion_3() -> Outcome {
    let t = Instant::now();
    let gcms = check_corpus_shape()?;
    let (mut elements, mut roots) = (0, 0);
    for inst in CORPUS {
        let gcm = load(inst.name);
        let slice = RootSlice::new(&gcm, H)?;
        let (real, imaginary) = brute_slice(&gcm, H as i64);
        ensure(
            slice.real().iter().cloned().collect::<BTreeSet<_>>() == real
                && slice.imaginary().iter().cloned().collect::<BTreeSet<_>>() == imaginary,
            || format!("{}: slice differs from brute force", inst.name),
        )?;
        for word in inst.words {
            let w = element(&gcm, word);
            certified(&w)?;
            let sf = standard(&w, H)?;
            let dynamics = Dynamics::new(&sf, H, N_MAX)?;
            let classes = dynamics.classify_slice(&slice, 2)?;
            let tag = format!("{} {word:?}", inst.name);
            let coords: BTreeSet<RootVector> = classes.iter().map(|c| c.coords.clone()).collect();
            ensure(classes.len() == slice.len() && coords == all_roots(&slice), || {
                format!("{tag}: classes do not partition the slice")
            })?;
            let k3: BTreeSet<RootVector> = classes
                .iter()
                .filter(|c| c.class == OrbitClass::K3)
                .map(|c| c.coords.clone())
                .collect();
            let k3_inv: BTreeSet<RootVector> = dynamics
                .inverse()
                .classify_slice(&slice, 2)?
                .into_iter()
                .filter(|c| c.class == OrbitClass::K3)
                .map(|c| c.coords)
                .collect();
            let k = dynamics.k_set(&slice);
            ensure(k == k3.intersection(&k3_inv).cloned().collect(), || {
                format!("{tag}: K ≠ K3(w) ∩ K3(w⁻¹)")
            })?;
            let minus = &dynamics.delta.minus;
            ensure(
                k.is_disjoint(minus) && k3 == k.union(minus).cloned().collect(),
                || format!("{tag}: K3 ≠ K ⊎ Δ−"),
            )?;
            let xw = word_of(&sf.element)?;
            for c in &classes {
                let o = oracle_class(&gcm, &c.coords, &xw, H);
                ensure(o == Some(c.class), || {
                    format!("{tag}: {} is {:?} but the oracle says {o:?}", c.coords, c.class)
                })?;
            }
            elements += 1;
            roots += classes.len();
        }
    }
    let dt = t.elapsed();
    ensure(dt < LIMIT_3, || format!("took {dt:?}"))?;
    Ok(format!(
        "{gcms} GCMs, {elements} elements, {roots} roots at H={H}: 0 undecided, oracle agrees, {dt:.2?}"
    ))
}

fn criterion_4() -> Outcome {
    let h2 = 2 * H;
    let (mut elements, mut largest) = (0, 0);
    for inst in CORPUS {
        let gcm = load(inst.name);
        let slice = RootSlice::new(&gcm, h2)?;
        for word in inst.words {
            let w = element(&gcm, word);
            let d = nub_on_slice(&w, &slice, &opts(h2))?;
            let r = is_closed(&d.k, &slice);
            ensure(r.closed, || format!("{} {word:?}: {:?}", inst.name, r.violation))?;
            largest = largest.max(d.k.roots.len());
            elements += 1;
        }
    }
    Ok(format!("{elements} elements closed with sums resolved at 2H={h2} (largest |K| = {largest})"))
}

fn criterion_5() -> Outcome {
    let mut checks = 0;
    for inst in CORPUS {
        let gcm = load(inst.name);
        let slice = RootSlice::new(&gcm, H)?;
        for word in inst.words {
            let w = element(&gcm, word);
            let k = nub_on_slice(&w, &slice, &opts(H))?.k.roots;
            for n in [2i64, 3, 5] {
                let wn = w.pow(n)?;
                let kn = nub_on_slice(&wn, &slice, &opts(H))?.k.roots;
                ensure(kn == k, || format!("{} {word:?}: K(w^{n}) ≠ K(w)", inst.name))?;
                ensure(same_nub(&w, &wn, &opts(H))?, || {
                    format!("{} {word:?}: same_nub(w, w^{n}) is false", inst.name)
                })?;
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} (w, wⁿ) pairs with n ∈ {{2,3,5}}: equal K and same_nub"))
}

fn bridge_pair(name: &str, h: u32) -> Result<(bool, BTreeSet<RootVector>, BTreeSet<RootVector>), Fail> {
    let gcm = load(name);
    let w = element(&gcm, &[1, 2]);
    let v = element(&gcm, &[3, 4]);
    let mut o = opts(h);
    o.paranoid = true;
    let same = same_nub(&w, &v, &o)?;
    let slice = RootSlice::new(&gcm, h)?;
    let kw = nub_on_slice(&w, &slice, &o)?.k.roots;
    let kv = nub_on_slice(&v, &slice, &o)?.k.roots;
    let roots = all_roots(&slice);
    ensure(oracle_k(&gcm, &roots, &[0, 1], h)? == kw, || format!("{name}: K(w) disagrees with the oracle"))?;
    ensure(oracle_k(&gcm, &roots, &[2, 3], h)? == kv, || format!("{name}: K(v) disagrees with the oracle"))?;
    if name == "nub5" {
        // J = {1,2} is affine and J⊥ = {3,4}, so only node 5 escapes exclusion
        let with_bridge: BTreeSet<RootVector> = roots.iter().filter(|r| r.coords()[4] != 0).cloned().collect();
        ensure(kw == with_bridge, || format!("K(w) has {} roots, {} roots involve node 5", kw.len(), with_bridge.len()))?;
    }
    Ok((same, kw, kv))
}

fn criterion_6a() -> Outcome {
    let (same, kw, kv) = bridge_pair("nub5", 12)?;
    ensure(same && kw == kv && !kw.is_empty(), || {
        format!("same_nub = {same}, |K(w)| = {}, |K(v)| = {}, equal = {}", kw.len(), kv.len(), kw == kv)
    })?;
    Ok(format!("bridged: same_nub = true, K(w) = K(v) = roots involving node 5 ({}) at H=12", kw.len()))
}

fn criterion_6b() -> Outcome {
    let (same, kw, kv) = bridge_pair("nub5split", 12)?;
    ensure(!same, || {
        format!(
            "bridge removed: expected same_nub = false, got {same}; |K(w)| = {}, |K(v)| = {} (both supports are affine components)",
            kw.len(),
            kv.len()
        )
    })?;
    Ok("bridge removed: same_nub = false".into())
}

/// `ℓ(wⁿ)` for `n = 1..=n_max` from Cayley-graph distances.
fn oracle_power_lengths(gcm: &Gcm, word: &[usize], n_max: usize, radius: usize) -> Result<Vec<Option<usize>>, Fail> {
    let ball = oracle_ball(gcm, gcm.all(), radius)?;
    let by_images: HashMap<&[i64], usize> = ball.iter().map(|e| (e.images.as_slice(), e.length)).collect();
    let mut out = Vec::new();
    for n in 1..=n_max {
        let power = word.repeat(n);
        let mut images = Vec::new();
        for j in 0..gcm.rank() {
            let mut v = vec![0i64; gcm.rank()];
            v[j] = 1;
            for &i in power.iter().rev() {
                let p: i64 = (0..gcm.rank()).map(|k| gcm.a(i, k) * v[k]).sum();
                v[i] -= p;
            }
            images.extend(v);
        }
        out.push(by_images.get(images.as_slice()).copied());
    }
    Ok(out)
}

fn criterion_7() -> Outcome {
    let mut audits = 0;
    for inst in CORPUS {
        let gcm = load(inst.name);
        for word in inst.words {
            let w = element(&gcm, word);
            let l = w.length()? as u32;
            for q in SCALE_QS {
                let panels = vec![q; gcm.rank()];
                let s = scale(&w, q, STRAIGHT_N)?;
                ensure(s == BigUint::from(q).pow(l) && s == gallery_count(&w, &panels)?, || {
                    format!("{} {word:?} q={q}: scale {s} disagrees with gallery count", inst.name)
                })?;
                let r = tidiness_index_audit(&w, q, SCALE_N)?;
                ensure(r.straight_consistent, || format!("{} {word:?} q={q}: audit inconsistent", inst.name))?;
                for (n, idx) in &r.per_n_indices {
                    let count = gallery_count(&w.pow(*n as i64)?, &panels)?;
                    ensure(*idx == s.pow(*n as u32) && *idx == count, || {
                        format!("{} {word:?} q={q} n={n}: index {idx}, gallery count {count}", inst.name)
                    })?;
                }
                audits += 1;
            }
        }
    }
    let mut witnesses = Vec::new();
    for (name, word) in [("a1t", [1usize, 2, 1].as_slice()), ("a2", [1usize, 2].as_slice())] {
        let gcm = load(name);
        let w = element(&gcm, word);
        let l = w.length()?;
        let lengths = oracle_power_lengths(&gcm, &zero_based(word), SCALE_N, SCALE_N * l)?;
        let predicted = lengths
            .iter()
            .enumerate()
            .find(|(k, len)| **len != Some((k + 1) * l))
            .map(|(k, _)| k + 1)
            .ok_or_else(|| Fail(format!("{name} {word:?}: oracle finds no failure")))?;
        for q in SCALE_QS {
            let r = tidiness_index_audit(&w, q, SCALE_N)?;
            let first = r
                .per_n_indices
                .iter()
                .find(|(n, idx)| *idx != r.scale.pow(*n as u32))
                .map(|(n, _)| *n);
            ensure(!r.straight_consistent && first == Some(predicted), || {
                format!("{name} {word:?} q={q}: identity fails at {first:?}, predicted {predicted}")
            })?;
        }
        witnesses.push(format!("{name} {word:?} fails at n={predicted}"));
    }
    Ok(format!("{audits} straight audits hold for n ≤ {SCALE_N}; {}", witnesses.join(", ")))
}

fn criterion_8() -> Outcome {
    let gcm = load("h2");
    let w = element(&gcm, &[1, 2]);
    let o = opts(20);
    let mut betas = Vec::new();
    for n in 1..=20u32 {
        let wit = infinite_depth_witness(&w, n, &o)?;
        let b = &wit.beta;
        ensure(b.height() >= n as i64, || format!("n={n}: height {} < n", b.height()))?;
        ensure(brute_dominant(&gcm, b.coords()) && b.support() == gcm.all(), || {
            format!("n={n}: {b} is not in K₀ with full support")
        })?;
        ensure(brute_root(&gcm, b.coords()) == BruteRoot::Imaginary, || format!("n={n}: {b} is not an imaginary root"))?;
        let expected = oracle_k0_witness(&gcm, gcm.all(), n, 400);
        ensure(expected.as_ref() == Some(b), || format!("n={n}: got {b}, oracle gives {expected:?}"))?;
        betas.push(b.clone());
    }
    let top = betas.iter().map(RootVector::height).max().unwrap_or(1) as u32;
    let slice = RootSlice::new(&gcm, top)?;
    let k = nub_on_slice(&w, &slice, &opts(top))?.k.roots;
    let candidates: BTreeSet<RootVector> = betas.iter().cloned().collect();
    let ko = oracle_k(&gcm, &candidates, &[0, 1], top)?;
    for b in &betas {
        ensure(k.contains(b) && ko.contains(b), || format!("{b} is not in K(w)"))?;
    }
    Ok(format!("20 witnesses, heights {}..{}, all in K₀ ∩ K(w) with support I", betas[0].height(), top))
}

fn criterion_9() -> Outcome {
    let (mut compared, mut equal, mut skipped) = (0, 0, 0);
    for inst in CORPUS {
        let gcm = load(inst.name);
        let (real, _) = brute_slice(&gcm, H as i64);
        let reals: Vec<RootVector> = real.into_iter().collect();
        let mut elems: Vec<(String, WeylElement, Option<BTreeSet<RootVector>>)> = Vec::new();
        for word in inst.words {
            let w = element(&gcm, word);
            for (tag, x) in [(format!("{word:?}"), w.clone()), (format!("{word:?}⁻¹"), w.inverse()?)] {
                let xw = word_of(&x)?;
                // an overflowing far point leaves the oracle inconclusive
                let near = oracle_conv(&gcm, &power_words(&xw, CONV_Z), &reals)?;
                let far = match oracle_conv(&gcm, &power_words(&xw, 2 * CONV_Z), &reals) {
                    Err(kmnub::Error::Overflow(_)) => None,
                    r => Some(r?),
                };
                elems.push((tag, x, far.filter(|f| *f == near)));
            }
        }
        for a in 0..elems.len() {
            for b in a + 1..elems.len() {
                let (ta, wa, ha) = &elems[a];
                let (tb, wb, hb) = &elems[b];
                let got = same_conv(wa, wb, H, &opts(H))?;
                let (Some(ha), Some(hb)) = (ha, hb) else {
                    skipped += 1;
                    continue;
                };
                let oracle_equal = ha == hb;
                match got {
                    ConvComparison::Inconclusive { .. } => skipped += 1,
                    ConvComparison::Equal | ConvComparison::Different => {
                        ensure((got == ConvComparison::Equal) == oracle_equal, || {
                            format!("{} {ta} vs {tb}: same_conv {got:?}, oracle equal = {oracle_equal}", inst.name)
                        })?;
                        compared += 1;
                        equal += oracle_equal as usize;
                    }
                }
            }
        }
    }
    ensure(compared > 0, || "no conclusive pairs".into())?;
    Ok(format!("{compared} conclusive pairs agree ({equal} equal hulls), {skipped} skipped"))
}

fn cli(args: &[&str]) -> Result<String, Fail> {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = kmnub_cli::run(args.iter().copied(), &mut out, &mut err);
    ensure(code == 0, || format!("{args:?} exited {code}: {}", String::from_utf8_lossy(&err)))?;
    Ok(String::from_utf8(out)?)
}

fn corpus_json(threads: &str) -> Result<String, Fail> {
    let mut all = String::new();
    let h = H.to_string();
    for inst in CORPUS {
        let path = corpus_path(inst.name);
        let path = path.to_str().ok_or_else(|| Fail("non-UTF-8 corpus path".into()))?;
        for word in inst.words {
            let word = word_arg(word);
            for cmd in ["nub", "classify"] {
                let out = cli(&[
                    "kmnub", cmd, "--gcm", path, "--word", &word, "--height", &h, "--threads", threads,
                    "--format", "json",
                ])?;
                let parsed: serde_json::Value = serde_json::from_str(&out)?;
                ensure(kmnub_cli::report::canonical(&parsed) == out, || {
                    format!("{cmd} {} {word}: JSON does not round-trip", inst.name)
                })?;
                all.push_str(&out);
            }
        }
    }
    Ok(all)
}

fn criterion_10() -> Outcome {
    let first = corpus_json("1")?;
    let second = corpus_json("1")?;
    let threaded = corpus_json("4")?;
    ensure(first == second, || "two runs differ".into())?;
    ensure(first == threaded, || "threaded run differs".into())?;
    Ok(format!("{} bytes of corpus JSON identical across runs and thread counts", first.len()))
}

#[test]
fn acceptance() {
    let criteria: Vec<Criterion> = vec![
        ("1", "rank-2 indefinite K equals the imaginary slice", criterion_1),
        ("2", "affine nubs are trivial", criterion_2),
        ("3", "trichotomy partition and oracle equivalence", criterion_3),
        ("4", "K(w) is closed", criterion_4),
        ("5", "power stability", criterion_5),
        ("6a", "bridged five-node pair has the same nub", criterion_6a),
        ("6b", "bridge-free five-node pair has different nubs", criterion_6b),
        ("7", "scale identities", criterion_7),
        ("8", "infinite-depth witnesses", criterion_8),
        ("9", "convexity oracle agreement", criterion_9),
        ("10", "determinism", criterion_10),
    ];
    let mut failed = Vec::new();
    let mut stdout = std::io::stdout().lock();
    let _ = writeln!(stdout);
    for (id, title, f) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(f))
            .unwrap_or_else(|p| {
                let msg = p
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                Err(Fail(format!("panicked: {msg}")))
            });
        // written past the harness capture so the report always shows
        let line = match outcome {
            Ok(detail) => format!("PASS {id:>3} {title}: {detail}"),
            Err(Fail(why)) => {
                failed.push(id);
                format!("FAIL {id:>3} {title}: {why}")
            }
        };
        let _ = writeln!(stdout, "{line}");
    }
    let _ = stdout.flush();
    assert_eq!(failed, KNOWN_FAILURES, "unexpected acceptance outcome");
}
