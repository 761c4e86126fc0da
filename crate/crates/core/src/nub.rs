//! Nub descriptors: the root set `K(w)`, the trivial-nub and same-nub
//! criteria, closedness checks and infinite-depth witnesses.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gcm::{Sense, TypeClass};
use crate::nodeset::NodeSet;
use crate::orbit::{delta_sets, DeltaSets, Dynamics, Structure};
use crate::roots::{alpha_min, for_each_vector, in_k0, RootSlice};
use crate::vector::RootVector;
use crate::weyl::{is_straight, standardize, StandardForm, StandardizeOptions, WeylElement};

/// Heights scanned beyond `n` before the witness search gives up.
const WITNESS_SCAN: u32 = 400;

/// Powers `w^z`, `|z| ≤ WITNESS_ORBIT`, sampled for the depth certificate.
const WITNESS_ORBIT: i64 = 10;

#[derive(Debug, Clone)]
pub struct NubOptions {
    pub height: u32,
    /// Iteration budget for orbit walks and block enumeration.
    pub n_max: usize,
    pub standardize: StandardizeOptions,
    /// Cross-check the trivial-nub criterion against emptiness of `K` and
    /// the same-nub criterion against equality of `K`.
    pub paranoid: bool,
}

impl Default for NubOptions {
    fn default() -> Self {
        NubOptions {
            height: 20,
            n_max: 50,
            standardize: StandardizeOptions::default(),
            paranoid: false,
        }
    }
}

impl NubOptions {
    pub fn with_height(height: u32) -> Self {
        NubOptions {
            height,
            standardize: StandardizeOptions {
                height,
                ..Default::default()
            },
            ..Default::default()
        }
    }
}

/// Result of a closedness check up to a height.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosureReport {
    pub closed: bool,
    /// `(α, β, α + β)` with `α + β` a root outside the set.
    pub violation: Option<(RootVector, RootVector, RootVector)>,
    /// Sums of height at most this value were examined.
    pub verified_up_to: u32,
}

/// A set of positive roots known up to `cutoff`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosedRootSet {
    pub roots: BTreeSet<RootVector>,
    pub cutoff: u32,
}

/// Checks `α, β ∈ ψ, α + β ∈ Δ ⇒ α + β ∈ ψ` for all sums of height at most
/// `min(ψ.cutoff, slice.cutoff)`.
pub fn is_closed(psi: &ClosedRootSet, slice: &RootSlice) -> ClosureReport {
    let limit = psi.cutoff.min(slice.cutoff());
    let members: Vec<&RootVector> = psi.roots.iter().collect();
    let lookup: HashSet<&RootVector> = members.iter().copied().collect();
    let heights: Vec<i64> = members.iter().map(|r| r.height()).collect();
    for a in 0..members.len() {
        for b in a..members.len() {
            if heights[a] + heights[b] > limit as i64 {
                break;
            }
            let sum = match members[a].checked_add(members[b]) {
                Ok(s) => s,
                Err(_) => continue,
            };
            if slice.contains(&sum) && !lookup.contains(&sum) {
                return ClosureReport {
                    closed: false,
                    violation: Some((members[a].clone(), members[b].clone(), sum)),
                    verified_up_to: limit,
                };
            }
        }
    }
    ClosureReport {
        closed: true,
        violation: None,
        verified_up_to: limit,
    }
}

/// Everything known about the nub of a straight element on a slice.
#[derive(Debug, Clone)]
pub struct NubDescriptor {
    pub standard: StandardForm,
    pub structure: Structure,
    pub delta: DeltaSets,
    pub k: ClosedRootSet,
    pub trivial: bool,
}

/// `J` is a union of affine components of `I` (GCM sense).
fn trivial_from_support(w: &WeylElement, j: NodeSet) -> bool {
    let gcm = w.gcm();
    gcm.components_of(j).into_iter().all(|c| {
        gcm.components().contains(&c) && gcm.gcm_class(c) == TypeClass::Affine
    })
}

/// The nub of the straight element `w` is trivial exactly when its support
/// is a union of affine components of `I`.
pub fn trivial_nub(w: &WeylElement, straight_n: usize) -> Result<bool> {
    is_straight(w, straight_n)?.require_for(w)?;
    Ok(trivial_from_support(w, w.support()?))
}

pub fn nub(w: &WeylElement, opts: &NubOptions) -> Result<NubDescriptor> {
    let slice = RootSlice::new(w.gcm(), opts.height)?;
    nub_on_slice(w, &slice, opts)
}

/// [`nub`] on a precomputed slice, whose cutoff overrides `opts.height`.
pub fn nub_on_slice(w: &WeylElement, slice: &RootSlice, opts: &NubOptions) -> Result<NubDescriptor> {
    let sf = standardize(w, &opts.standardize)?;
    let dynamics = Dynamics::new(&sf, slice.cutoff(), opts.n_max)?;
    let k = dynamics.k_set(slice);
    let trivial = trivial_from_support(&sf.element, sf.support);
    if opts.paranoid && trivial != k.is_empty() {
        return Err(Error::Internal(format!(
            "trivial-nub criterion gives {trivial} but K has {} roots",
            k.len()
        )));
    }
    Ok(NubDescriptor {
        structure: dynamics.structure,
        delta: dynamics.delta,
        standard: sf,
        k: ClosedRootSet {
            roots: k,
            cutoff: slice.cutoff(),
        },
        trivial,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvComparison {
    Equal,
    Different,
    Inconclusive { height: u32 },
}

/// Compares the convex hulls of `{wⁿ}` and `{vⁿ}` through their supports
/// and the unions `Δ_{w+} ∪ Δ_{w-}`.
pub fn same_conv(
    w: &WeylElement,
    v: &WeylElement,
    height: u32,
    opts: &NubOptions,
) -> Result<ConvComparison> {
    let cw = is_straight(w, opts.standardize.straight_n)?;
    cw.require_for(w)?;
    let cv = is_straight(v, opts.standardize.straight_n)?;
    cv.require_for(v)?;
    if w.support()? != v.support()? {
        return Ok(ConvComparison::Different);
    }
    let dw = delta_sets(w, &cw, height, opts.n_max)?;
    let dv = delta_sets(v, &cv, height, opts.n_max)?;
    if !dw.is_complete() || !dv.is_complete() {
        return Ok(ConvComparison::Inconclusive { height });
    }
    Ok(if dw.union() == dv.union() {
        ConvComparison::Equal
    } else {
        ConvComparison::Different
    })
}

fn standard_form_of(w: &WeylElement, opts: &NubOptions) -> Result<StandardForm> {
    let sf = standardize(w, &opts.standardize)?;
    if !sf.conjugator.is_identity() {
        return Err(Error::NotStandard {
            conjugator_length: sf.conjugator.length()?,
        });
    }
    Ok(sf)
}

/// Decides whether two standard straight elements have the same nub:
/// `J⊥ ∪ J_aff = K⊥ ∪ K_aff`, `J ∖ J_aff = K ∖ K_aff`, and equal hulls on
/// every component of `J ∖ J_aff` with at least three nodes.
pub fn same_nub(w: &WeylElement, v: &WeylElement, opts: &NubOptions) -> Result<bool> {
    let sw = standard_form_of(w, opts)?;
    let sv = standard_form_of(v, opts)?;
    let tw = Structure::from_standard(&sw);
    let tv = Structure::from_standard(&sv);
    let mut same = tw.j_perp.union(tw.j_aff) == tv.j_perp.union(tv.j_aff)
        && tw.j.difference(tw.j_aff) == tv.j.difference(tv.j_aff);
    if same {
        let core = tw.j.difference(tw.j_aff);
        for (c, fw) in &sw.factors {
            if !c.is_subset(core) || c.len() < 3 {
                continue;
            }
            let fv = sv
                .factors
                .iter()
                .find(|(d, _)| d == c)
                .map(|(_, f)| f)
                .ok_or_else(|| Error::Internal("missing component factor".into()))?;
            match same_conv(fw, fv, opts.height, opts)? {
                ConvComparison::Equal => {}
                ConvComparison::Different => {
                    same = false;
                    break;
                }
                ConvComparison::Inconclusive { height } => {
                    return Err(Error::Inconclusive { height })
                }
            }
        }
    }
    if opts.paranoid {
        let slice = RootSlice::new(w.gcm(), opts.height)?;
        let kw = nub_on_slice(w, &slice, opts)?.k.roots;
        let kv = nub_on_slice(v, &slice, opts)?.k.roots;
        if (kw == kv) != same {
            return Err(Error::Internal(format!(
                "same-nub criterion gives {same} but K(w) = K(v) is {}",
                kw == kv
            )));
        }
    }
    Ok(same)
}

/// `(-Δ_{w+}, K₃(w))` on the slice: the negative and positive parts of the
/// root set of the contraction closure.
pub fn contraction_closure(
    dynamics: &Dynamics,
    slice: &RootSlice,
) -> (BTreeSet<RootVector>, ClosedRootSet) {
    let neg = dynamics.delta.plus.iter().map(RootVector::neg).collect();
    let pos = ClosedRootSet {
        roots: dynamics.k3_set(slice),
        cutoff: slice.cutoff(),
    };
    (neg, pos)
}

/// An imaginary root of `K(w)` whose whole `⟨w⟩`-orbit has height at least
/// `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub beta: RootVector,
    /// Indefinite component of `I` equal to the support of `β`.
    pub component: NodeSet,
    pub n: u32,
    /// Smallest height among the sampled `w^z β`.
    pub min_orbit_height: i64,
    pub sampled: usize,
}

/// Minimum-height element of `K₀` with support the indefinite component
/// `I'` and height at least `n`; ties broken lexicographically.
pub fn infinite_depth_witness(w: &WeylElement, n: u32, opts: &NubOptions) -> Result<Witness> {
    let sf = standard_form_of(w, opts)?;
    let gcm = w.gcm().clone();
    if trivial_from_support(&sf.element, sf.support) {
        return Err(Error::TrivialNub);
    }
    let component = gcm
        .components_of(sf.support)
        .into_iter()
        .map(|c| gcm.component_containing(c.first().expect("components are nonempty")))
        .find(|&ip| gcm.gcm_class(ip) == TypeClass::Indefinite)
        .ok_or_else(|| Error::Internal("nontrivial nub without indefinite component".into()))?;
    let mut beta = None;
    for h in n.max(1)..=n.max(1) + WITNESS_SCAN {
        let mut best: Option<RootVector> = None;
        for_each_vector(gcm.rank(), component, h, h, |v| {
            if v.support() == component && in_k0(&gcm, v) && best.as_ref().is_none_or(|b| v < b) {
                best = Some(v.clone());
            }
        });
        if best.is_some() {
            beta = best;
            break;
        }
    }
    let beta = beta.ok_or_else(|| Error::Internal("no witness within the scan range".into()))?;
    if alpha_min(&gcm, &beta)? != beta {
        return Err(Error::Internal("witness is not minimal in its orbit".into()));
    }
    let structure = Structure::from_standard(&sf);
    if beta.support().is_subset(structure.excluded()) {
        return Err(Error::Internal("witness lies outside K(w)".into()));
    }
    let x = &sf.element;
    let mut min_orbit_height = beta.height();
    let mut sampled = 0;
    for z in -WITNESS_ORBIT..=WITNESS_ORBIT {
        let y = x.pow(z)?.apply(&beta)?;
        min_orbit_height = min_orbit_height.min(y.height());
        sampled += 1;
    }
    if min_orbit_height < beta.height() {
        return Err(Error::Internal("witness orbit dips below its height".into()));
    }
    debug_assert!(gcm.classify(component, Sense::Gcm).len() == 1);
    Ok(Witness {
        beta,
        component,
        n,
        min_orbit_height,
        sampled,
    })
}
