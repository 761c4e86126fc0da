use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::gcm::Gcm;
use crate::nodeset::NodeSet;
use crate::vector::RootVector;

/// Upper bound on descent-peeling steps before the matrix is declared
/// invalid.
const MAX_PEEL: usize = 1_000_000;

/// An element of the Weyl group, stored as its action on the root lattice.
///
/// Column `j` of the matrix is `w(α_j)`. Equality and hashing use the
/// matrix only; the reduced word is computed on demand and cached.
#[derive(Clone)]
pub struct WeylElement {
    gcm: Arc<Gcm>,
    matrix: Vec<i128>,
    reduced: OnceLock<Vec<usize>>,
}

impl WeylElement {
    pub fn identity(gcm: &Arc<Gcm>) -> Self {
        let n = gcm.rank();
        let mut matrix = vec![0; n * n];
        for i in 0..n {
            matrix[i * n + i] = 1;
        }
        let reduced = OnceLock::new();
        let _ = reduced.set(Vec::new());
        WeylElement {
            gcm: Arc::clone(gcm),
            matrix,
            reduced,
        }
    }

    pub fn simple(gcm: &Arc<Gcm>, i: usize) -> Result<Self> {
        Self::from_word(gcm, &[i])
    }

    /// Product `s_{i1} ⋯ s_{ik}` of a zero-based word.
    pub fn from_word(gcm: &Arc<Gcm>, word: &[usize]) -> Result<Self> {
        let mut w = Self::identity(gcm);
        for &i in word {
            gcm.check_index(i)?;
            w.right_mul_simple_in_place(i)?;
        }
        w.reduced = OnceLock::new();
        Ok(w)
    }

    pub fn gcm(&self) -> &Arc<Gcm> {
        &self.gcm
    }

    pub fn rank(&self) -> usize {
        self.gcm.rank()
    }

    /// Matrix entry in row `r`, column `c`.
    pub fn entry(&self, r: usize, c: usize) -> i128 {
        self.matrix[r * self.rank() + c]
    }

    /// `w(α_j)` as a lattice vector.
    pub fn image_of_simple(&self, j: usize) -> Result<RootVector> {
        let n = self.rank();
        (0..n)
            .map(|r| i64::try_from(self.entry(r, j)).map_err(|_| Error::Overflow("root image")))
            .collect::<Result<Vec<_>>>()
            .map(RootVector::new)
    }

    fn column_height(&self, j: usize) -> i128 {
        (0..self.rank()).map(|r| self.entry(r, j)).sum()
    }

    /// Right descent: `ℓ(w s_i) < ℓ(w)`, equivalently `w(α_i) < 0`.
    pub fn has_right_descent(&self, i: usize) -> bool {
        self.column_height(i) < 0
    }

    /// Left descent: `ℓ(s_i w) < ℓ(w)`.
    pub fn has_left_descent(&self, i: usize) -> Result<bool> {
        let word = self.reduced_word()?;
        if word.is_empty() {
            return Ok(false);
        }
        Ok(self.left_mul_simple(i)?.length()? < word.len())
    }

    pub fn apply(&self, v: &RootVector) -> Result<RootVector> {
        let n = self.rank();
        let mut out = Vec::with_capacity(n);
        for r in 0..n {
            let mut acc: i128 = 0;
            for (c, &x) in v.coords().iter().enumerate() {
                if x != 0 {
                    let term = self
                        .entry(r, c)
                        .checked_mul(x as i128)
                        .ok_or(Error::Overflow("matrix action"))?;
                    acc = acc.checked_add(term).ok_or(Error::Overflow("matrix action"))?;
                }
            }
            out.push(i64::try_from(acc).map_err(|_| Error::Overflow("matrix action"))?);
        }
        Ok(RootVector::new(out))
    }

    fn right_mul_simple_in_place(&mut self, i: usize) -> Result<()> {
        // column j of w s_i is w(α_j - a_ij α_i)
        let n = self.rank();
        let col_i: Vec<i128> = (0..n).map(|r| self.matrix[r * n + i]).collect();
        for j in 0..n {
            let a = self.gcm.a(i, j) as i128;
            if a == 0 {
                continue;
            }
            for (r, &c) in col_i.iter().enumerate() {
                self.matrix[r * n + j] = c
                    .checked_mul(a)
                    .and_then(|t| self.matrix[r * n + j].checked_sub(t))
                    .ok_or(Error::Overflow("Weyl matrix"))?;
            }
        }
        Ok(())
    }

    /// `w · s_i`.
    pub fn right_mul_simple(&self, i: usize) -> Result<Self> {
        self.gcm.check_index(i)?;
        let mut w = WeylElement {
            gcm: Arc::clone(&self.gcm),
            matrix: self.matrix.clone(),
            reduced: OnceLock::new(),
        };
        w.right_mul_simple_in_place(i)?;
        Ok(w)
    }

    /// `s_i · w`.
    pub fn left_mul_simple(&self, i: usize) -> Result<Self> {
        self.gcm.check_index(i)?;
        let n = self.rank();
        let mut matrix = self.matrix.clone();
        for c in 0..n {
            let mut p: i128 = 0;
            for j in 0..n {
                let t = (self.gcm.a(i, j) as i128)
                    .checked_mul(self.entry(j, c))
                    .ok_or(Error::Overflow("Weyl matrix"))?;
                p = p.checked_add(t).ok_or(Error::Overflow("Weyl matrix"))?;
            }
            matrix[i * n + c] = self
                .entry(i, c)
                .checked_sub(p)
                .ok_or(Error::Overflow("Weyl matrix"))?;
        }
        Ok(WeylElement {
            gcm: Arc::clone(&self.gcm),
            matrix,
            reduced: OnceLock::new(),
        })
    }

    pub fn mul(&self, other: &WeylElement) -> Result<Self> {
        let n = self.rank();
        if other.rank() != n {
            return Err(Error::Internal("rank mismatch in product".into()));
        }
        let mut matrix = vec![0i128; n * n];
        for r in 0..n {
            for c in 0..n {
                let mut acc: i128 = 0;
                for k in 0..n {
                    let t = self
                        .entry(r, k)
                        .checked_mul(other.entry(k, c))
                        .ok_or(Error::Overflow("Weyl product"))?;
                    acc = acc.checked_add(t).ok_or(Error::Overflow("Weyl product"))?;
                }
                matrix[r * n + c] = acc;
            }
        }
        Ok(WeylElement {
            gcm: Arc::clone(&self.gcm),
            matrix,
            reduced: OnceLock::new(),
        })
    }

    pub fn inverse(&self) -> Result<Self> {
        let mut word = self.reduced_word()?.to_vec();
        word.reverse();
        let w = Self::from_word(&self.gcm, &word)?;
        let _ = w.reduced.set(word);
        Ok(w)
    }

    /// `w^n` for any integer `n`.
    pub fn pow(&self, n: i64) -> Result<Self> {
        let base = if n < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::identity(&self.gcm);
        let mut sq = base;
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq)?;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq)?;
            }
        }
        Ok(acc)
    }

    /// `v⁻¹ · w · v`.
    pub fn conjugate_by(&self, v: &WeylElement) -> Result<Self> {
        v.inverse()?.mul(self)?.mul(v)
    }

    pub fn is_identity(&self) -> bool {
        let n = self.rank();
        (0..n).all(|r| (0..n).all(|c| self.entry(r, c) == i128::from(r == c)))
    }

    /// Reduced word found by repeatedly peeling the smallest right descent.
    pub fn reduced_word(&self) -> Result<&[usize]> {
        if let Some(w) = self.reduced.get() {
            return Ok(w);
        }
        let word = self.peel()?;
        Ok(self.reduced.get_or_init(|| word))
    }

    fn peel(&self) -> Result<Vec<usize>> {
        let mut cur = WeylElement {
            gcm: Arc::clone(&self.gcm),
            matrix: self.matrix.clone(),
            reduced: OnceLock::new(),
        };
        let mut peeled = Vec::new();
        while let Some(i) = (0..self.rank()).find(|&i| cur.has_right_descent(i)) {
            cur.right_mul_simple_in_place(i)?;
            peeled.push(i);
            if peeled.len() > MAX_PEEL {
                return Err(Error::Internal("descent peeling did not terminate".into()));
            }
        }
        if !cur.is_identity() {
            return Err(Error::Internal(
                "matrix is not an element of the Weyl group".into(),
            ));
        }
        peeled.reverse();
        Ok(peeled)
    }

    pub fn length(&self) -> Result<usize> {
        Ok(self.reduced_word()?.len())
    }

    /// Generators occurring in any (equivalently every) reduced word.
    pub fn support(&self) -> Result<NodeSet> {
        Ok(self.reduced_word()?.iter().copied().collect())
    }

    /// `Δ_w = { α > 0 : w⁻¹ α < 0 }`, listed from a reduced word
    /// `s_{i1} ⋯ s_{ik}` as `s_{i1} ⋯ s_{i(t-1)} α_{it}`.
    pub fn inversion_set(&self) -> Result<BTreeSet<RootVector>> {
        let word = self.reduced_word()?.to_vec();
        let mut prefix = Self::identity(&self.gcm);
        let mut out = BTreeSet::new();
        for i in word {
            let beta = prefix.image_of_simple(i)?;
            if !beta.is_positive() {
                return Err(Error::Internal("inversion root is not positive".into()));
            }
            out.insert(beta);
            prefix.right_mul_simple_in_place(i)?;
        }
        Ok(out)
    }

    /// One-based rendering of the reduced word.
    pub fn word_string(&self) -> Result<String> {
        Ok(self
            .reduced_word()?
            .iter()
            .map(|i| (i + 1).to_string())
            .collect::<Vec<_>>()
            .join(" "))
    }
}

impl PartialEq for WeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl Eq for WeylElement {}

impl Hash for WeylElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.matrix.hash(state);
    }
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.reduced_word() {
            Ok(w) => write!(f, "W{:?}", w.iter().map(|i| i + 1).collect::<Vec<_>>()),
            Err(_) => write!(f, "W<invalid>"),
        }
    }
}
