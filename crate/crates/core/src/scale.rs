//! Scale of a straight element over a finite field and the audit of the
//! tidiness-index identity by gallery counting.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::weyl::{is_straight, WeylElement};

/// Writes `q = p^e` with `p` prime, or fails with `BadQ`.
pub fn validate_q(q: u64) -> Result<(u64, u32)> {
    if q < 2 {
        return Err(Error::BadQ(q));
    }
    let p = (2..)
        .take_while(|d: &u64| d.saturating_mul(*d) <= q)
        .find(|d| q.is_multiple_of(*d))
        .unwrap_or(q);
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    if rest == 1 {
        Ok((p, e))
    } else {
        Err(Error::BadQ(q))
    }
}

/// Number of chambers at Weyl distance `w` from a fixed chamber: the
/// product of the panel sizes `q_s` along a reduced word.
pub fn gallery_count(w: &WeylElement, panels: &[u64]) -> Result<BigUint> {
    if panels.len() != w.rank() {
        return Err(Error::Internal(format!(
            "{} panel sizes for rank {}",
            panels.len(),
            w.rank()
        )));
    }
    let mut acc = BigUint::from(1u32);
    for &s in w.reduced_word()? {
        acc *= panels[s];
    }
    Ok(acc)
}

/// `s(w̃) = q^{ℓ(w)}` for straight `w`.
pub fn scale(w: &WeylElement, q: u64, straight_n: usize) -> Result<BigUint> {
    validate_q(q)?;
    is_straight(w, straight_n)?.require_for(w)?;
    Ok(BigUint::from(q).pow(w.length()? as u32))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaleReport {
    pub q: u64,
    /// `q^{ℓ(w)}`.
    pub scale: BigUint,
    /// `(n, q^{ℓ(wⁿ)})` for `n = 1..=n_max`.
    pub per_n_indices: Vec<(usize, BigUint)>,
    /// Every index equals `scaleⁿ`.
    pub straight_consistent: bool,
}

/// Indices `[H_c : H_c ∩ H_{wⁿc}] = q^{ℓ(wⁿ)}`, compared against `scaleⁿ`.
pub fn tidiness_index_audit(w: &WeylElement, q: u64, n_max: usize) -> Result<ScaleReport> {
    validate_q(q)?;
    let qb = BigUint::from(q);
    let scale = qb.pow(w.length()? as u32);
    let mut per_n_indices = Vec::with_capacity(n_max);
    let mut consistent = true;
    let mut p = WeylElement::identity(w.gcm());
    for n in 1..=n_max {
        p = p.mul(w)?;
        let idx = qb.pow(p.length()? as u32);
        consistent &= idx == scale.pow(n as u32);
        per_n_indices.push((n, idx));
    }
    Ok(ScaleReport {
        q,
        scale,
        per_n_indices,
        straight_consistent: consistent,
    })
}
