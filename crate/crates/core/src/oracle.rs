//! Brute-force reference computations used to validate the main path.
//!
//! Nothing here calls into the Weyl-element, root-enumeration or orbit code:
//! reflections, group elements and sign tests are reimplemented from the
//! matrix entries alone, so that agreement between the two routes is
//! meaningful.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gcm::Gcm;
use crate::nodeset::NodeSet;
use crate::orbit::OrbitClass;
use crate::vector::RootVector;

/// `s_i` on a coordinate vector, recomputed from the Cartan entries.
fn reflect(gcm: &Gcm, v: &mut [i64], i: usize) -> Result<()> {
    let mut p: i64 = 0;
    for (j, &c) in v.iter().enumerate() {
        p = gcm
            .a(i, j)
            .checked_mul(c)
            .and_then(|t| p.checked_add(t))
            .ok_or(Error::Overflow("oracle reflection"))?;
    }
    v[i] = v[i].checked_sub(p).ok_or(Error::Overflow("oracle reflection"))?;
    Ok(())
}

/// Applies the word `s_{i1} ⋯ s_{ik}` to `v`, rightmost letter first.
fn apply_word(gcm: &Gcm, word: &[usize], v: &mut [i64]) -> Result<()> {
    for &i in word.iter().rev() {
        reflect(gcm, v, i)?;
    }
    Ok(())
}

fn all_nonpos(v: &[i64]) -> bool {
    v.iter().all(|&c| c <= 0)
}

/// Outcome of brute-force orbit inspection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OracleVerdict {
    Periodic { steps: usize },
    ForwardNegative { steps: usize },
    BackwardNegative { steps: usize },
    Divergent { steps: usize },
}

impl OracleVerdict {
    pub fn class(self) -> OrbitClass {
        match self {
            OracleVerdict::Periodic { .. } => OrbitClass::K1,
            OracleVerdict::ForwardNegative { .. } => OrbitClass::K2,
            OracleVerdict::BackwardNegative { .. } | OracleVerdict::Divergent { .. } => {
                OrbitClass::K3
            }
        }
    }
}

/// Inspects `wⁿ α` for `|n| ≤ n_big`, where `w` is given by any word.
///
/// Returns to `α` decide periodic, a negative forward iterate decides
/// `K₂`, a negative backward iterate decides `K₃`, and a forward height
/// above `h_big` without any of these decides `K₃` as divergent.
pub fn oracle_classify(
    gcm: &Gcm,
    alpha: &RootVector,
    word: &[usize],
    n_big: usize,
    h_big: i64,
) -> Result<OracleVerdict> {
    let inverse: Vec<usize> = word.iter().rev().copied().collect();
    let start = alpha.coords().to_vec();
    let mut fwd = start.clone();
    let mut bwd = start.clone();
    let mut fwd_live = true;
    let mut bwd_live = true;
    let mut fwd_peak: Option<usize> = None;
    for n in 1..=n_big {
        if fwd_live {
            apply_word(gcm, word, &mut fwd)?;
            if fwd == start {
                return Ok(OracleVerdict::Periodic { steps: n });
            }
            if all_nonpos(&fwd) {
                return Ok(OracleVerdict::ForwardNegative { steps: n });
            }
            if fwd.iter().sum::<i64>() > h_big {
                fwd_live = false;
                fwd_peak = Some(n);
            }
        }
        if bwd_live {
            apply_word(gcm, &inverse, &mut bwd)?;
            if all_nonpos(&bwd) {
                return Ok(OracleVerdict::BackwardNegative { steps: n });
            }
            if bwd.iter().sum::<i64>() > h_big {
                bwd_live = false;
            }
        }
        if !fwd_live && !bwd_live {
            break;
        }
    }
    match fwd_peak {
        Some(steps) => Ok(OracleVerdict::Divergent { steps }),
        None => Err(Error::OracleUndecided {
            root: alpha.coords().to_vec(),
        }),
    }
}

/// An element found by the Cayley-graph search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallElement {
    /// Images `x(α_j)` of the simple roots, concatenated.
    pub images: Vec<i64>,
    /// A word of minimal length for the element.
    pub word: Vec<usize>,
    /// Distance from the identity in the Cayley graph.
    pub length: usize,
}

fn images_of(gcm: &Gcm, word: &[usize]) -> Result<Vec<i64>> {
    let n = gcm.rank();
    let mut out = Vec::with_capacity(n * n);
    for j in 0..n {
        let mut v = vec![0; n];
        v[j] = 1;
        apply_word(gcm, word, &mut v)?;
        out.extend(v);
    }
    Ok(out)
}

/// All elements of `W_J` at Cayley distance at most `radius`, in
/// breadth-first order.
pub fn oracle_ball(gcm: &Gcm, j: NodeSet, radius: usize) -> Result<Vec<BallElement>> {
    let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    let id = images_of(gcm, &[])?;
    seen.insert(id.clone(), 0);
    queue.push_back(BallElement {
        images: id,
        word: Vec::new(),
        length: 0,
    });
    while let Some(e) = queue.pop_front() {
        if e.length < radius {
            for s in j.iter() {
                let mut word = e.word.clone();
                word.push(s);
                let images = images_of(gcm, &word)?;
                if !seen.contains_key(&images) {
                    seen.insert(images.clone(), e.length + 1);
                    queue.push_back(BallElement {
                        images,
                        word,
                        length: e.length + 1,
                    });
                }
            }
        }
        out.push(e);
    }
    Ok(out)
}

/// The roots `±α` (for `α` in `positive_reals`) that contain every point,
/// a point `x` lying in `α` exactly when `x⁻¹ α > 0`. Coordinates are kept
/// in `i128` because far points of an axis move roots far.
pub fn oracle_conv(
    gcm: &Gcm,
    points: &[Vec<usize>],
    positive_reals: &[RootVector],
) -> Result<BTreeSet<RootVector>> {
    let mut out = BTreeSet::new();
    for alpha in positive_reals {
        for signed in [alpha.clone(), alpha.neg()] {
            let mut contains_all = true;
            for word in points {
                // x⁻¹ = reverse word, applied rightmost first
                let mut v: Vec<i128> = signed.coords().iter().map(|&c| c as i128).collect();
                for &i in word {
                    let mut p: i128 = 0;
                    for (j, &c) in v.iter().enumerate() {
                        p = (gcm.a(i, j) as i128)
                            .checked_mul(c)
                            .and_then(|t| p.checked_add(t))
                            .ok_or(Error::Overflow("oracle reflection"))?;
                    }
                    v[i] = v[i].checked_sub(p).ok_or(Error::Overflow("oracle reflection"))?;
                }
                if v.iter().any(|&c| c < 0) {
                    contains_all = false;
                    break;
                }
            }
            if contains_all {
                out.insert(signed);
            }
        }
    }
    Ok(out)
}

/// Words for `w^z`, `|z| ≤ z_max`, given a word for `w`.
pub fn power_words(word: &[usize], z_max: usize) -> Vec<Vec<usize>> {
    let inverse: Vec<usize> = word.iter().rev().copied().collect();
    let mut out = vec![Vec::new()];
    for z in 1..=z_max {
        out.push(word.repeat(z));
        out.push(inverse.repeat(z));
    }
    out
}

/// Brute-force search for the minimal-height element of `K₀` with support
/// exactly `support` and height at least `n`.
pub fn oracle_k0_witness(gcm: &Gcm, support: NodeSet, n: u32, scan: u32) -> Option<RootVector> {
    let idx: Vec<usize> = support.iter().collect();
    let rank = gcm.rank();
    for h in n.max(idx.len() as u32)..=n + scan {
        let mut best: Option<Vec<i64>> = None;
        let mut v = vec![0i64; rank];
        fill(gcm, &idx, 0, h as i64, &mut v, &mut best);
        if let Some(b) = best {
            return Some(RootVector::new(b));
        }
    }
    None
}

fn fill(gcm: &Gcm, idx: &[usize], k: usize, left: i64, v: &mut Vec<i64>, best: &mut Option<Vec<i64>>) {
    if k + 1 == idx.len() {
        if left < 1 {
            return;
        }
        v[idx[k]] = left;
        let dominant = (0..gcm.rank()).all(|i| {
            (0..gcm.rank()).map(|j| gcm.a(i, j) * v[j]).sum::<i64>() <= 0
        });
        if dominant && best.as_ref().is_none_or(|b| v.as_slice() < b.as_slice()) {
            *best = Some(v.clone());
        }
        v[idx[k]] = 0;
        return;
    }
    let remaining = (idx.len() - k - 1) as i64;
    for c in 1..=left - remaining {
        v[idx[k]] = c;
        fill(gcm, idx, k + 1, left - c, v, best);
    }
    v[idx[k]] = 0;
}
