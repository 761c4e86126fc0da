//! The sets `Δ_{w±}` and the classification of positive roots into the
//! periodic class `K₁`, the forward-contracted class `K₂ = Δ_{w+}` and the
//! remaining class `K₃`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gcm::Sense;
use crate::nodeset::NodeSet;
use crate::roots::{Nature, RootSlice};
use crate::vector::RootVector;
use crate::weyl::{StandardForm, StraightCertificate, WeylElement};

/// Consecutive strictly increasing blocks above the cutoff required before
/// the block enumeration of `Δ_{w±}` is declared complete.
const BLOCK_STABILITY: usize = 2;

/// Truncations of `Δ_{w+} = ⊔_{m≥0} w^{-m} Δ_{w⁻¹}` and
/// `Δ_{w-} = ⊔_{m≥0} w^m Δ_w` to heights at most `cutoff`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaSets {
    pub plus: BTreeSet<RootVector>,
    pub minus: BTreeSet<RootVector>,
    pub plus_complete: bool,
    pub minus_complete: bool,
    pub cutoff: u32,
}

impl DeltaSets {
    pub fn is_complete(&self) -> bool {
        self.plus_complete && self.minus_complete
    }

    pub fn union(&self) -> BTreeSet<RootVector> {
        self.plus.union(&self.minus).cloned().collect()
    }

    /// Same sets for `w⁻¹`, whose `Δ_±` are those of `w` swapped.
    pub fn swapped(&self) -> DeltaSets {
        DeltaSets {
            plus: self.minus.clone(),
            minus: self.plus.clone(),
            plus_complete: self.minus_complete,
            minus_complete: self.plus_complete,
            cutoff: self.cutoff,
        }
    }
}

/// Collects `⊔_m u^m Δ_u ∩ {ht ≤ cutoff}` block by block.
///
/// A root whose image leaves `i64` range is saturated to `None`: it lies far
/// above any cutoff and only ever raises a block minimum.
fn blocks(u: &WeylElement, cutoff: u32, n_max: usize) -> Result<(BTreeSet<RootVector>, bool)> {
    let mut block: Vec<Option<RootVector>> = u.inversion_set()?.into_iter().map(Some).collect();
    let mut out = BTreeSet::new();
    let mut mins: Vec<i64> = Vec::new();
    for _ in 0..n_max {
        let mut min = i64::MAX;
        for r in block.iter().flatten() {
            if !r.is_positive() {
                return Err(Error::Internal(format!(
                    "block root {r:?} is not positive; element is not straight"
                )));
            }
            min = min.min(r.height());
            if r.height() <= cutoff as i64 {
                out.insert(r.clone());
            }
        }
        mins.push(min);
        let k = mins.len();
        if k > BLOCK_STABILITY
            && mins[k - BLOCK_STABILITY..].iter().all(|&m| m > cutoff as i64)
            && mins[k - BLOCK_STABILITY - 1..]
                .windows(2)
                .all(|p| p[0] < p[1] || p[1] == i64::MAX)
        {
            return Ok((out, true));
        }
        block = block
            .into_iter()
            .map(|r| match r.map(|r| u.apply(&r)) {
                None | Some(Err(Error::Overflow(_))) => Ok(None),
                Some(Ok(v)) => Ok(Some(v)),
                Some(Err(e)) => Err(e),
            })
            .collect::<Result<Vec<_>>>()?;
    }
    Ok((out, false))
}

/// `Δ_{w±}` truncated at `cutoff`, generated from at most `n_max` blocks.
pub fn delta_sets(
    w: &WeylElement,
    cert: &StraightCertificate,
    cutoff: u32,
    n_max: usize,
) -> Result<DeltaSets> {
    cert.require_for(w)?;
    let (plus, plus_complete) = blocks(&w.inverse()?, cutoff, n_max)?;
    let (minus, minus_complete) = blocks(w, cutoff, n_max)?;
    if let Some(r) = plus.intersection(&minus).next() {
        return Err(Error::Internal(format!("{r:?} lies in both Δ_w+ and Δ_w-")));
    }
    Ok(DeltaSets {
        plus,
        minus,
        plus_complete,
        minus_complete,
        cutoff,
    })
}

/// The mutually orthogonal pieces of the index set attached to a standard
/// straight element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Structure {
    pub j: NodeSet,
    pub j_perp: NodeSet,
    pub j_aff: NodeSet,
    pub j_sph: NodeSet,
}

impl Structure {
    pub fn from_standard(sf: &StandardForm) -> Self {
        let gcm = sf.element.gcm();
        Structure {
            j: sf.support,
            j_perp: gcm.orthogonal_complement(sf.support),
            j_aff: gcm.affine_part(sf.support, Sense::Gcm),
            j_sph: sf.spherical,
        }
    }

    /// `J⊥ ∪ J_aff ∪ J_sph`.
    pub fn excluded(&self) -> NodeSet {
        self.j_perp.union(self.j_aff).union(self.j_sph)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum OrbitClass {
    K1,
    K2,
    K3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StructuralReason {
    Orthogonal,
    Spherical,
    AffineImaginary,
}

/// Why a root received its class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    Structural { reason: StructuralReason },
    /// `wⁿ α = α`.
    Periodic { steps: usize },
    /// `wⁿ α < 0`.
    SignFlipForward { steps: usize },
    /// `w⁻ⁿ α < 0`.
    SignFlipBackward { steps: usize },
    /// Height grew past the escape height for `rank` consecutive steps.
    HeightEscape { steps: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootClassification {
    pub coords: RootVector,
    pub nature: Nature,
    pub class: OrbitClass,
    pub certificate: Certificate,
}

enum Walk {
    Negative(usize),
    Returned(usize),
    Escaped(usize),
    Exhausted,
}

/// `x y` in exact `i128` arithmetic.
fn step(x: &WeylElement, y: &[i128]) -> Result<Vec<i128>> {
    (0..y.len())
        .map(|r| {
            y.iter().enumerate().try_fold(0i128, |acc, (c, &v)| {
                x.entry(r, c)
                    .checked_mul(v)
                    .and_then(|t| acc.checked_add(t))
                    .ok_or(Error::Overflow("orbit walk"))
            })
        })
        .collect()
}

/// Orbit data of a standard straight element on a root slice.
#[derive(Debug, Clone)]
pub struct Dynamics {
    pub w: WeylElement,
    pub w_inv: WeylElement,
    pub structure: Structure,
    pub delta: DeltaSets,
    pub n_max: usize,
    pub escape: i64,
}

impl Dynamics {
    pub fn new(sf: &StandardForm, cutoff: u32, n_max: usize) -> Result<Self> {
        let w = sf.element.clone();
        let delta = delta_sets(&w, &sf.certificate, cutoff, n_max)?;
        let w_inv = w.inverse()?;
        let max_inv = w
            .inversion_set()?
            .iter()
            .chain(w_inv.inversion_set()?.iter())
            .map(RootVector::height)
            .max()
            .unwrap_or(0);
        Ok(Dynamics {
            w,
            w_inv,
            structure: Structure::from_standard(sf),
            delta,
            n_max,
            escape: 2 * cutoff as i64 + max_inv,
        })
    }

    /// The same data for `w⁻¹`.
    pub fn inverse(&self) -> Dynamics {
        Dynamics {
            w: self.w_inv.clone(),
            w_inv: self.w.clone(),
            structure: self.structure,
            delta: self.delta.swapped(),
            n_max: self.n_max,
            escape: self.escape,
        }
    }

    /// Iterates `x` on `α` until a sign flip, a return or an escape. Iterates
    /// are kept in `i128` since escaping orbits grow geometrically.
    fn walk(&self, x: &WeylElement, alpha: &RootVector) -> Result<Walk> {
        let rank = alpha.rank();
        let start: Vec<i128> = alpha.coords().iter().map(|&c| c as i128).collect();
        let mut y = start.clone();
        let mut prev: i128 = y.iter().sum();
        let mut streak = 0;
        for k in 1..=self.n_max {
            y = step(x, &y)?;
            if y.iter().all(|&c| c <= 0) {
                return Ok(Walk::Negative(k));
            }
            if y == start {
                return Ok(Walk::Returned(k));
            }
            let h: i128 = y.iter().sum();
            if h > self.escape as i128 && h > prev {
                streak += 1;
                if streak >= rank {
                    return Ok(Walk::Escaped(k));
                }
            } else {
                streak = 0;
            }
            prev = h;
        }
        Ok(Walk::Exhausted)
    }

    fn undecided(&self, alpha: &RootVector) -> Error {
        Error::Undecided {
            root: alpha.coords().to_vec(),
            n_max: self.n_max,
        }
    }

    /// Classifies a positive root: structural tests first, then forward
    /// iteration, then backward iteration for the `K₃` certificate.
    pub fn classify(&self, alpha: &RootVector, nature: Nature) -> Result<RootClassification> {
        let done = |class, certificate| {
            Ok(RootClassification {
                coords: alpha.clone(),
                nature,
                class,
                certificate,
            })
        };
        let s = &self.structure;
        let supp = alpha.support();
        if supp.is_subset(s.j_perp) {
            return done(
                OrbitClass::K1,
                Certificate::Structural {
                    reason: StructuralReason::Orthogonal,
                },
            );
        }
        if supp.is_subset(s.j_sph) {
            return done(
                OrbitClass::K1,
                Certificate::Structural {
                    reason: StructuralReason::Spherical,
                },
            );
        }
        if supp.is_subset(s.j_aff) {
            if nature == Nature::Imaginary {
                return done(
                    OrbitClass::K1,
                    Certificate::Structural {
                        reason: StructuralReason::AffineImaginary,
                    },
                );
            }
            return match self.walk(&self.w, alpha)? {
                Walk::Negative(k) => done(OrbitClass::K2, Certificate::SignFlipForward { steps: k }),
                Walk::Returned(k) => done(OrbitClass::K1, Certificate::Periodic { steps: k }),
                _ => match self.walk(&self.w_inv, alpha)? {
                    Walk::Negative(k) => {
                        done(OrbitClass::K3, Certificate::SignFlipBackward { steps: k })
                    }
                    _ => Err(self.undecided(alpha)),
                },
            };
        }
        match self.walk(&self.w, alpha)? {
            Walk::Negative(k) => done(OrbitClass::K2, Certificate::SignFlipForward { steps: k }),
            Walk::Returned(k) => done(OrbitClass::K1, Certificate::Periodic { steps: k }),
            Walk::Escaped(k) => match self.walk(&self.w_inv, alpha)? {
                Walk::Negative(b) => done(OrbitClass::K3, Certificate::SignFlipBackward { steps: b }),
                _ => done(OrbitClass::K3, Certificate::HeightEscape { steps: k }),
            },
            Walk::Exhausted => Err(self.undecided(alpha)),
        }
    }

    /// Classifies every root of the slice, in slice order, on up to
    /// `threads` worker threads.
    pub fn classify_slice(&self, slice: &RootSlice, threads: usize) -> Result<Vec<RootClassification>> {
        let roots: Vec<(&RootVector, Nature)> = slice.iter().collect();
        let threads = threads.max(1).min(roots.len().max(1));
        if threads == 1 {
            return roots.iter().map(|(r, n)| self.classify(r, *n)).collect();
        }
        let chunk = roots.len().div_ceil(threads);
        let parts: Vec<Result<Vec<RootClassification>>> = std::thread::scope(|scope| {
            let handles: Vec<_> = roots
                .chunks(chunk)
                .map(|part| {
                    scope.spawn(move || {
                        part.iter()
                            .map(|(r, n)| self.classify(r, *n))
                            .collect::<Result<Vec<_>>>()
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("classifier thread panicked"))
                .collect()
        });
        let mut out = Vec::with_capacity(roots.len());
        for p in parts {
            out.extend(p?);
        }
        Ok(out)
    }

    /// `K(w) = Δ⁺ ∖ (Δ_{w+} ∪ Δ_{w-} ∪ Δ⁺(J⊥ ∪ J_aff ∪ J_sph))` on the slice.
    pub fn k_set(&self, slice: &RootSlice) -> BTreeSet<RootVector> {
        let excluded = self.structure.excluded();
        slice
            .iter()
            .map(|(r, _)| r)
            .filter(|r| {
                !r.support().is_subset(excluded)
                    && !self.delta.plus.contains(*r)
                    && !self.delta.minus.contains(*r)
            })
            .cloned()
            .collect()
    }

    /// `K₃(w) = K(w) ⊔ Δ_{w-}` on the slice.
    pub fn k3_set(&self, slice: &RootSlice) -> BTreeSet<RootVector> {
        let mut out = self.k_set(slice);
        out.extend(
            self.delta
                .minus
                .iter()
                .filter(|r| r.height() <= slice.cutoff() as i64)
                .cloned(),
        );
        out
    }

    /// Least common multiple of the periods of the periodic roots of the
    /// slice, a period of `w` on `K₁`.
    pub fn periodicity_bound(&self, slice: &RootSlice) -> Result<u64> {
        let mut acc: u64 = 1;
        for (r, nature) in slice.iter() {
            let c = self.classify(r, nature)?;
            if let Certificate::Periodic { steps } = c.certificate {
                acc = lcm(acc, steps as u64).ok_or(Error::Overflow("period lcm"))?;
            }
        }
        Ok(acc)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> Option<u64> {
    (a / gcd(a, b)).checked_mul(b)
}

/// Partition of a classified slice by class.
pub fn partition(
    classes: &[RootClassification],
) -> [BTreeSet<RootVector>; 3] {
    let mut out: [BTreeSet<RootVector>; 3] = Default::default();
    for c in classes {
        let k = match c.class {
            OrbitClass::K1 => 0,
            OrbitClass::K2 => 1,
            OrbitClass::K3 => 2,
        };
        out[k].insert(c.coords.clone());
    }
    out
}
