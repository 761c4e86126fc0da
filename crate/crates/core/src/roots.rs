//! Positive real and imaginary roots up to a height cutoff, the fundamental
//! chamber `K₀`, and the minimal representative of an imaginary root.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gcm::Gcm;
use crate::nodeset::NodeSet;
use crate::vector::RootVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Nature {
    Real,
    Imaginary,
}

/// Answer of a membership query against a truncated slice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Real,
    Imaginary,
    NotARoot,
    BeyondCutoff,
}

/// Positive real roots with support in `j` and height at most `h`.
///
/// Real roots supported in `j` form the `W_J`-orbit of `{α_j : j ∈ j}`, and
/// every such root descends to a simple root through lower heights, so a
/// breadth-first search inside the height bound is complete.
pub fn real_roots(gcm: &Gcm, j: NodeSet, h: u32) -> Result<BTreeSet<RootVector>> {
    let rank = gcm.rank();
    let mut seen: BTreeSet<RootVector> = BTreeSet::new();
    let mut queue = VecDeque::new();
    if h == 0 {
        return Ok(seen);
    }
    for i in j.iter() {
        let s = RootVector::simple(rank, i);
        seen.insert(s.clone());
        queue.push_back(s);
    }
    while let Some(r) = queue.pop_front() {
        for i in j.iter() {
            if r.coords()[i] == 1 && r.support() == NodeSet::singleton(i) {
                continue;
            }
            let t = gcm.reflect(&r, i)?;
            if t.height() <= h as i64 && !seen.contains(&t) {
                seen.insert(t.clone());
                queue.push_back(t);
            }
        }
    }
    Ok(seen)
}

/// `v ∈ K₀`: nonzero, nonnegative, connected support and `⟨v, α_i^∨⟩ ≤ 0`
/// for every `i`.
pub fn in_k0(gcm: &Gcm, v: &RootVector) -> bool {
    v.is_positive()
        && gcm.is_connected(v.support())
        && (0..gcm.rank()).all(|i| gcm.pairing(v.coords(), i) <= 0)
}

/// Calls `f` on every nonnegative vector with support inside `allowed`
/// and height in `lo..=hi`.
pub fn for_each_vector(
    rank: usize,
    allowed: NodeSet,
    lo: u32,
    hi: u32,
    mut f: impl FnMut(&RootVector),
) {
    let idx: Vec<usize> = allowed.iter().collect();
    let mut v = RootVector::zero(rank);
    fn rec(
        idx: &[usize],
        k: usize,
        budget: u32,
        used: u32,
        lo: u32,
        v: &mut RootVector,
        f: &mut dyn FnMut(&RootVector),
    ) {
        if k == idx.len() {
            if used >= lo && used > 0 {
                f(v);
            }
            return;
        }
        for c in 0..=budget {
            v.coords_mut()[idx[k]] = c as i64;
            rec(idx, k + 1, budget - c, used + c, lo, v, f);
        }
        v.coords_mut()[idx[k]] = 0;
    }
    rec(&idx, 0, hi, 0, lo, &mut v, &mut f);
}

/// Elements of `K₀` with support in `j` and height at most `h`.
pub fn k0_vectors(gcm: &Gcm, j: NodeSet, h: u32) -> Vec<RootVector> {
    let mut out = Vec::new();
    for_each_vector(gcm.rank(), j, 1, h, |v| {
        if in_k0(gcm, v) {
            out.push(v.clone());
        }
    });
    out.sort();
    out
}

/// Positive imaginary roots with support in `j` and height at most `h`.
///
/// Every positive imaginary root descends by simple reflections through
/// lower heights to an element of `K₀`, so saturating `K₀` upward within
/// the bound is complete.
pub fn imaginary_roots(gcm: &Gcm, j: NodeSet, h: u32) -> Result<BTreeSet<RootVector>> {
    let mut seen: BTreeSet<RootVector> = BTreeSet::new();
    let mut queue: VecDeque<RootVector> = VecDeque::new();
    for v in k0_vectors(gcm, j, h) {
        if seen.insert(v.clone()) {
            queue.push_back(v);
        }
    }
    while let Some(r) = queue.pop_front() {
        for i in j.iter() {
            let t = gcm.reflect(&r, i)?;
            if t.height() <= h as i64 && !seen.contains(&t) {
                seen.insert(t.clone());
                queue.push_back(t);
            }
        }
    }
    Ok(seen)
}

/// The unique element of `K₀` in the `W`-orbit of a positive imaginary root.
pub fn alpha_min(gcm: &Gcm, v: &RootVector) -> Result<RootVector> {
    alpha_min_by(gcm, v, |candidates| candidates[0])
}

/// [`alpha_min`] with a caller-chosen descent among the indices `i` with
/// `⟨v, α_i^∨⟩ > 0`; the result does not depend on the choices.
pub fn alpha_min_by(
    gcm: &Gcm,
    v: &RootVector,
    mut pick: impl FnMut(&[usize]) -> usize,
) -> Result<RootVector> {
    let not_imaginary = || Error::NotImaginary(v.coords().to_vec());
    if v.rank() != gcm.rank() || !v.is_positive() {
        return Err(not_imaginary());
    }
    let mut cur = v.clone();
    loop {
        let descents: Vec<usize> = (0..gcm.rank())
            .filter(|&i| gcm.pairing(cur.coords(), i) > 0)
            .collect();
        if descents.is_empty() {
            break;
        }
        let i = pick(&descents);
        if !descents.contains(&i) {
            return Err(Error::Internal(format!("descent choice {i} not offered")));
        }
        cur = gcm.reflect(&cur, i)?;
        if !cur.is_positive() {
            return Err(not_imaginary());
        }
    }
    if gcm.is_connected(cur.support()) {
        Ok(cur)
    } else {
        Err(not_imaginary())
    }
}

/// True when `⟨v, α_i^∨⟩ = 0` for every `i` in the support of `v`.
pub fn has_affine_support(gcm: &Gcm, v: &RootVector) -> bool {
    v.support().iter().all(|i| gcm.pairing(v.coords(), i) == 0)
}

/// All positive roots of height at most `cutoff`, tagged real or imaginary.
#[derive(Debug, Clone)]
pub struct RootSlice {
    rank: usize,
    cutoff: u32,
    real: Vec<RootVector>,
    imaginary: Vec<RootVector>,
    index: HashMap<RootVector, Nature>,
}

impl RootSlice {
    pub fn new(gcm: &Gcm, cutoff: u32) -> Result<Self> {
        let real = real_roots(gcm, gcm.all(), cutoff)?;
        let imaginary = imaginary_roots(gcm, gcm.all(), cutoff)?;
        if let Some(r) = real.intersection(&imaginary).next() {
            return Err(Error::Internal(format!("{r:?} is both real and imaginary")));
        }
        let mut index = HashMap::with_capacity(real.len() + imaginary.len());
        index.extend(real.iter().map(|r| (r.clone(), Nature::Real)));
        index.extend(imaginary.iter().map(|r| (r.clone(), Nature::Imaginary)));
        Ok(RootSlice {
            rank: gcm.rank(),
            cutoff,
            real: real.into_iter().collect(),
            imaginary: imaginary.into_iter().collect(),
            index,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    /// Positive real roots in increasing order.
    pub fn real(&self) -> &[RootVector] {
        &self.real
    }

    /// Positive imaginary roots in increasing order.
    pub fn imaginary(&self) -> &[RootVector] {
        &self.imaginary
    }

    /// All positive roots of the slice.
    pub fn iter(&self) -> impl Iterator<Item = (&RootVector, Nature)> {
        self.real
            .iter()
            .map(|r| (r, Nature::Real))
            .chain(self.imaginary.iter().map(|r| (r, Nature::Imaginary)))
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    /// Nature of a positive root of the slice.
    pub fn nature(&self, v: &RootVector) -> Option<Nature> {
        self.index.get(v).copied()
    }

    pub fn contains(&self, v: &RootVector) -> bool {
        self.index.contains_key(v)
    }

    /// Membership of an arbitrary lattice vector; negative roots are
    /// resolved by sign flip.
    pub fn membership(&self, v: &RootVector) -> Membership {
        if v.rank() != self.rank || v.is_zero() {
            return Membership::NotARoot;
        }
        let pos = if v.is_positive() {
            v.clone()
        } else if v.is_negative() {
            v.neg()
        } else {
            return Membership::NotARoot;
        };
        if pos.height() > self.cutoff as i64 {
            return Membership::BeyondCutoff;
        }
        match self.nature(&pos) {
            Some(Nature::Real) => Membership::Real,
            Some(Nature::Imaginary) => Membership::Imaginary,
            None => Membership::NotARoot,
        }
    }

    /// Positive roots of the slice with support in `j`.
    pub fn supported_in(&self, j: NodeSet) -> impl Iterator<Item = (&RootVector, Nature)> {
        self.iter().filter(move |(r, _)| r.support().is_subset(j))
    }
}
