//! Test corpus and brute-force helpers shared by the integration targets.

#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};
use std::path::PathBuf;
use std::sync::Arc;

use kmnub::{Gcm, RootVector, WeylElement};

/// A corpus GCM with straight elements given as 1-based words.
pub struct Instance {
    pub name: &'static str,
    pub words: &'static [&'static [usize]],
}

/// Ranks 2 to 4, off-diagonal entries in `{0, -1, -2, -3}`.
pub const CORPUS: &[Instance] = &[
    Instance { name: "h2", words: &[&[1, 2], &[2, 1], &[1, 2, 1, 2]] },
    Instance { name: "a1t", words: &[&[1, 2], &[2, 1], &[1, 2, 1, 2]] },
    Instance { name: "h33", words: &[&[1, 2], &[2, 1], &[1, 2, 1, 2]] },
    Instance { name: "h32", words: &[&[1, 2], &[2, 1], &[1, 2, 1, 2]] },
    Instance { name: "a2t", words: &[&[1, 2, 3], &[3, 2, 1], &[1, 2, 1, 3]] },
    Instance { name: "chain3", words: &[&[1, 2, 3], &[3, 2, 1], &[1, 2], &[2, 1, 3]] },
    Instance { name: "tri2", words: &[&[1, 2, 3], &[3, 2, 1], &[1, 2], &[2, 3]] },
    Instance { name: "c2t", words: &[&[1, 2, 3], &[3, 2, 1], &[2, 1, 3]] },
    Instance { name: "g2t", words: &[&[1, 2, 3], &[3, 2, 1], &[2, 1, 3]] },
    Instance {
        name: "bridge4",
        words: &[&[1, 2, 3, 4], &[1, 2], &[3, 4], &[1, 2, 3, 4, 3, 2], &[3, 2, 1, 2, 3, 4]],
    },
    Instance { name: "split4", words: &[&[1, 2, 3, 4], &[1, 2], &[3, 4], &[2, 1, 4, 3]] },
    Instance { name: "a3t", words: &[&[1, 2, 3, 4], &[4, 3, 2, 1], &[1, 3, 2, 4]] },
    Instance { name: "k4", words: &[&[1, 2, 3, 4], &[4, 3, 2, 1], &[1, 2, 3]] },
];

pub fn corpus_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/corpus")
        .join(format!("{name}.gcm"))
}

pub fn load(name: &str) -> Arc<Gcm> {
    let text = std::fs::read_to_string(corpus_path(name)).expect("corpus file");
    Arc::new(Gcm::parse(&text).expect("corpus GCM parses"))
}

pub fn zero_based(word: &[usize]) -> Vec<usize> {
    word.iter().map(|i| i - 1).collect()
}

pub fn word_arg(word: &[usize]) -> String {
    word.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

pub fn element(gcm: &Arc<Gcm>, word: &[usize]) -> WeylElement {
    WeylElement::from_word(gcm, &zero_based(word)).expect("valid word")
}

/// Brute-force root test: lower the height by simple reflections with a
/// positive pairing until a simple root (real), a dominant vector with
/// connected support (imaginary) or a sign change (not a root) appears.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BruteRoot {
    Real,
    Imaginary,
    NotARoot,
}

pub fn brute_root(gcm: &Gcm, v: &[i64]) -> BruteRoot {
    let n = gcm.rank();
    let mut v = v.to_vec();
    loop {
        if v.iter().any(|&c| c < 0) || v.iter().all(|&c| c == 0) {
            return BruteRoot::NotARoot;
        }
        if v.iter().sum::<i64>() == 1 {
            return BruteRoot::Real;
        }
        let pairing = |i: usize| (0..n).map(|j| gcm.a(i, j) * v[j]).sum::<i64>();
        match (0..n).find(|&i| pairing(i) > 0) {
            Some(i) => v[i] -= pairing(i),
            None => {
                return if connected(gcm, &v) {
                    BruteRoot::Imaginary
                } else {
                    BruteRoot::NotARoot
                };
            }
        }
    }
}

fn connected(gcm: &Gcm, v: &[i64]) -> bool {
    let supp: Vec<usize> = (0..v.len()).filter(|&i| v[i] != 0).collect();
    let mut seen = vec![false; v.len()];
    let mut queue = VecDeque::from([supp[0]]);
    seen[supp[0]] = true;
    while let Some(i) = queue.pop_front() {
        for &j in &supp {
            if !seen[j] && gcm.a(i, j) != 0 {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    supp.iter().all(|&i| seen[i])
}

/// Every positive vector of height `1..=h`, by brute force.
pub fn brute_vectors(rank: usize, h: i64) -> Vec<Vec<i64>> {
    fn rec(k: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if k == cur.len() {
            if cur.iter().any(|&c| c > 0) {
                out.push(cur.clone());
            }
            return;
        }
        for c in 0..=left {
            cur[k] = c;
            rec(k + 1, left - c, cur, out);
        }
        cur[k] = 0;
    }
    let mut out = Vec::new();
    rec(0, h, &mut vec![0; rank], &mut out);
    out
}

/// Positive real and imaginary roots of height at most `h`, by brute force.
pub fn brute_slice(gcm: &Gcm, h: i64) -> (BTreeSet<RootVector>, BTreeSet<RootVector>) {
    let mut real = BTreeSet::new();
    let mut imaginary = BTreeSet::new();
    for v in brute_vectors(gcm.rank(), h) {
        match brute_root(gcm, &v) {
            BruteRoot::Real => {
                real.insert(RootVector::new(v));
            }
            BruteRoot::Imaginary => {
                imaginary.insert(RootVector::new(v));
            }
            BruteRoot::NotARoot => {}
        }
    }
    (real, imaginary)
}

/// Dominance test `⟨v, α_i^∨⟩ ≤ 0` for every `i`, from the matrix entries.
pub fn brute_dominant(gcm: &Gcm, v: &[i64]) -> bool {
    (0..gcm.rank()).all(|i| (0..gcm.rank()).map(|j| gcm.a(i, j) * v[j]).sum::<i64>() <= 0)
}
