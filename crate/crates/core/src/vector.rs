//! Integer vectors in the root lattice `Q = ⊕ Z α_i`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nodeset::NodeSet;

/// Sign pattern of a lattice vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Zero,
    Positive,
    Negative,
    Mixed,
}

/// A vector of the root lattice in simple-root coordinates.
///
/// Ordered by height first and then lexicographically, so sorted
/// collections list roots from the bottom of the slice upward.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RootVector(Vec<i64>);

impl RootVector {
    pub fn new(coords: Vec<i64>) -> Self {
        RootVector(coords)
    }

    pub fn zero(rank: usize) -> Self {
        RootVector(vec![0; rank])
    }

    pub fn simple(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        RootVector(v)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn coords_mut(&mut self) -> &mut [i64] {
        &mut self.0
    }

    pub fn into_coords(self) -> Vec<i64> {
        self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    /// Sum of the coordinates, saturating at the `i64` bounds; a saturated
    /// height exceeds every cutoff in use.
    pub fn height(&self) -> i64 {
        let h: i128 = self.0.iter().map(|&c| c as i128).sum();
        h.clamp(i64::MIN as i128, i64::MAX as i128) as i64
    }

    pub fn support(&self) -> NodeSet {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn sign(&self) -> Sign {
        let pos = self.0.iter().any(|&c| c > 0);
        let neg = self.0.iter().any(|&c| c < 0);
        match (pos, neg) {
            (false, false) => Sign::Zero,
            (true, false) => Sign::Positive,
            (false, true) => Sign::Negative,
            (true, true) => Sign::Mixed,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Sign::Positive
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Sign::Negative
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn neg(&self) -> Self {
        RootVector(self.0.iter().map(|c| -c).collect())
    }

    pub fn checked_add(&self, other: &RootVector) -> Result<Self> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow("root sum")))
            .collect::<Result<Vec<_>>>()
            .map(RootVector)
    }

    pub fn scaled(&self, k: i64) -> Result<Self> {
        self.0
            .iter()
            .map(|a| a.checked_mul(k).ok_or(Error::Overflow("root scaling")))
            .collect::<Result<Vec<_>>>()
            .map(RootVector)
    }

    /// Restriction to the coordinates in `j`, other entries set to zero.
    pub fn restricted(&self, j: NodeSet) -> Self {
        RootVector(
            self.0
                .iter()
                .enumerate()
                .map(|(i, &c)| if j.contains(i) { c } else { 0 })
                .collect(),
        )
    }
}

impl From<Vec<i64>> for RootVector {
    fn from(v: Vec<i64>) -> Self {
        RootVector(v)
    }
}

impl Ord for RootVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.height()
            .cmp(&other.height())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for RootVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for RootVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for RootVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}
