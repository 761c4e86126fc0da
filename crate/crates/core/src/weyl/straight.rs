use std::collections::{HashSet, VecDeque};

use num_bigint::{BigInt, Sign};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gcm::{Sense, TypeClass};
use crate::nodeset::NodeSet;
use crate::weyl::WeylElement;

/// Largest class of equal-length cyclic shifts explored before giving up on
/// finding a shorter conjugate.
const SHIFT_CLASS_LIMIT: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StraightVerdict {
    /// `ℓ(wⁿ) = n ℓ(w)` for every `n ≤ n_checked`.
    StraightUpTo(usize),
    /// `ℓ(wⁿ) < n ℓ(w)` at the witness `n`.
    NotStraight { witness: usize },
    /// The identity, which is not straight.
    Identity,
}

/// Evidence for or against straightness of an element.
#[derive(Debug, Clone)]
pub struct StraightCertificate {
    pub element: WeylElement,
    pub n_checked: usize,
    pub verdict: StraightVerdict,
    /// `lengths[k] = ℓ(w^(k+1))` for the powers examined.
    pub lengths: Vec<usize>,
}

impl StraightCertificate {
    pub fn is_straight(&self) -> bool {
        matches!(self.verdict, StraightVerdict::StraightUpTo(_))
    }

    /// Fails with `NotStraight` unless the verdict is straight and the
    /// certificate belongs to `w`.
    pub fn require_for(&self, w: &WeylElement) -> Result<()> {
        if &self.element != w {
            return Err(Error::Internal("certificate belongs to another element".into()));
        }
        match self.verdict {
            StraightVerdict::StraightUpTo(_) => Ok(()),
            StraightVerdict::NotStraight { witness } => Err(Error::NotStraight {
                n_checked: self.n_checked,
                witness: Some(witness),
            }),
            StraightVerdict::Identity => Err(Error::NotStraight {
                n_checked: self.n_checked,
                witness: None,
            }),
        }
    }
}

/// Exact lengths `ℓ(wᵏ)`, `k = 1..=n_max`, tracked along the word `rⁿ`
/// for a reduced word `r` of `w`.
///
/// Entries of `wᵏ` grow exponentially outside finite and affine type, so
/// this runs on arbitrary-precision integers: `ℓ(x s) = ℓ(x) ± 1` according
/// to the sign of `x(α_s)`, and only the columns of the running prefix are
/// kept.
fn power_lengths(w: &WeylElement, n_max: usize) -> Result<Vec<usize>> {
    let gcm = w.gcm();
    let n = gcm.rank();
    let word = w.reduced_word()?.to_vec();
    // cols[j] = x(α_j) for the running prefix x
    let mut cols: Vec<Vec<BigInt>> = (0..n)
        .map(|j| (0..n).map(|r| BigInt::from((r == j) as i64)).collect())
        .collect();
    let mut len: usize = 0;
    let mut out = Vec::with_capacity(n_max);
    for _ in 0..n_max {
        for &s in &word {
            let height: BigInt = cols[s].iter().sum();
            if height.sign() == Sign::Minus {
                len -= 1;
            } else {
                len += 1;
            }
            let pivot = cols[s].clone();
            for (j, col) in cols.iter_mut().enumerate() {
                let a = gcm.a(s, j);
                if a != 0 {
                    for (c, p) in col.iter_mut().zip(&pivot) {
                        *c -= p * a;
                    }
                }
            }
        }
        out.push(len);
    }
    Ok(out)
}

/// Checks `ℓ(wⁿ) = n ℓ(w)` for `n = 1..=n_max`.
pub fn is_straight(w: &WeylElement, n_max: usize) -> Result<StraightCertificate> {
    let l = w.length()?;
    if l == 0 {
        return Ok(StraightCertificate {
            element: w.clone(),
            n_checked: 1,
            verdict: StraightVerdict::Identity,
            lengths: vec![0],
        });
    }
    let all = power_lengths(w, n_max.max(1))?;
    let mut lengths = Vec::with_capacity(all.len());
    for (k, &ln) in all.iter().enumerate() {
        let n = k + 1;
        lengths.push(ln);
        if ln != n * l {
            return Ok(StraightCertificate {
                element: w.clone(),
                n_checked: n,
                verdict: StraightVerdict::NotStraight { witness: n },
                lengths,
            });
        }
    }
    Ok(StraightCertificate {
        element: w.clone(),
        n_checked: n_max.max(1),
        verdict: StraightVerdict::StraightUpTo(n_max.max(1)),
        lengths,
    })
}

/// Conjugates `w` by simple reflections that are left or right descents
/// until no shorter conjugate is reachable through equal-length cyclic
/// shifts. Returns `(v, v⁻¹ w v)`.
pub fn cyclically_reduce(w: &WeylElement) -> Result<(WeylElement, WeylElement)> {
    let gcm = w.gcm().clone();
    let mut current = w.clone();
    let mut conj = WeylElement::identity(&gcm);
    'outer: loop {
        let len = current.length()?;
        // Hash and Eq read only the matrix, never the cached word
        #[allow(clippy::mutable_key_type)]
        let mut seen: HashSet<WeylElement> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(current.clone());
        queue.push_back((current.clone(), conj.clone()));
        while let Some((x, v)) = queue.pop_front() {
            for s in 0..gcm.rank() {
                if !x.has_right_descent(s) && !x.has_left_descent(s)? {
                    continue;
                }
                let y = x.left_mul_simple(s)?.right_mul_simple(s)?;
                let vs = v.right_mul_simple(s)?;
                let ly = y.length()?;
                if ly < len {
                    current = y;
                    conj = vs;
                    continue 'outer;
                }
                if ly == len && seen.insert(y.clone()) {
                    if seen.len() > SHIFT_CLASS_LIMIT {
                        break 'outer;
                    }
                    queue.push_back((y, vs));
                }
            }
        }
        break;
    }
    Ok((conj, current))
}

/// Essential support estimate `⋂_{n ≤ N} supp(wⁿ)` with a stabilization
/// check comparing `supp(w^{N!})` and `supp(w^{2·N!})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EssentialSupport {
    pub esupp: NodeSet,
    pub n_bound: usize,
    /// `None` when the large powers overflow.
    pub stabilized: Option<bool>,
}

pub fn essential_support(w: &WeylElement, n_bound: usize) -> Result<EssentialSupport> {
    let mut acc = w.gcm().all();
    let mut p = WeylElement::identity(w.gcm());
    for _ in 1..=n_bound.max(1) {
        p = p.mul(w)?;
        acc = acc.intersection(p.support()?);
    }
    let fact: i64 = (1..=n_bound.max(1) as i64).product();
    let stabilized = match (w.pow(fact), w.pow(2 * fact)) {
        (Ok(a), Ok(b)) => Some(a.support()? == b.support()?),
        (Err(Error::Overflow(_)), _) | (_, Err(Error::Overflow(_))) => None,
        (Err(e), _) | (_, Err(e)) => return Err(e),
    };
    Ok(EssentialSupport {
        esupp: acc,
        n_bound,
        stabilized,
    })
}

/// Support of a straight element, which is its parabolic closure.
///
/// Fails with `EssentialityViolation` when a component of the support is
/// of finite type, which cannot happen for a straight element.
pub fn parabolic_closure_straight(w: &WeylElement, cert: &StraightCertificate) -> Result<NodeSet> {
    cert.require_for(w)?;
    let j = w.support()?;
    for c in w.gcm().classify(j, Sense::Gcm) {
        if c.class == TypeClass::Finite {
            return Err(Error::EssentialityViolation(format!(
                "component {:?} of the support is of finite type",
                c.nodes
            )));
        }
    }
    Ok(j)
}
