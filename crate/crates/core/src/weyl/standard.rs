use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::gcm::Sense;
use crate::nodeset::NodeSet;
use crate::roots::real_roots;
use crate::vector::RootVector;
use crate::weyl::{is_straight, StraightCertificate, WeylElement};

/// Cap on the period searched when detecting periodic roots.
const PERIOD_CAP: usize = 1000;

#[derive(Debug, Clone)]
pub struct StandardizeOptions {
    /// Word-length radius of the ball in `W_J` searched for a conjugator.
    pub radius: usize,
    /// Height cutoff of the real roots tested for periodicity.
    pub height: u32,
    /// Overrides the derived period bound.
    pub period_bound: Option<usize>,
    /// Powers examined by the straightness check.
    pub straight_n: usize,
}

impl Default for StandardizeOptions {
    fn default() -> Self {
        StandardizeOptions {
            radius: 12,
            height: 20,
            period_bound: None,
            straight_n: 8,
        }
    }
}

/// A standard straight conjugate `w₀ = h⁻¹ w h` together with its
/// decomposition data.
#[derive(Debug, Clone)]
pub struct StandardForm {
    /// The conjugator `h`.
    pub conjugator: WeylElement,
    /// The standard element `w₀`.
    pub element: WeylElement,
    /// `J = supp(w₀)`.
    pub support: NodeSet,
    /// Union of the affine components of `J` in the GCM sense.
    pub affine: NodeSet,
    /// Spherical subset whose parabolic subgroup is the maximal finite
    /// `w₀`-stable one.
    pub spherical: NodeSet,
    /// Periodic positive real roots supported in `J ∖ J_aff`, up to `height`.
    pub periodic_roots: BTreeSet<RootVector>,
    /// Factors `w_{J'}` of `w₀` on the components `J'` of `J`.
    pub factors: Vec<(NodeSet, WeylElement)>,
    pub certificate: StraightCertificate,
    pub height: u32,
    pub period_bound: usize,
}

/// Period of `alpha` under `x` if it returns within `bound` steps while its
/// orbit stays within `|height| ≤ escape`.
pub fn root_period(
    x: &WeylElement,
    alpha: &RootVector,
    bound: usize,
    escape: i64,
) -> Result<Option<usize>> {
    let mut y = alpha.clone();
    for k in 1..=bound {
        y = x.apply(&y)?;
        if &y == alpha {
            return Ok(Some(k));
        }
        if y.height().abs() > escape {
            return Ok(None);
        }
    }
    Ok(None)
}

/// `2 · max |Φ⁺(K)|` over spherical `K ⊆ j`, capped; an orbit of a periodic
/// root lies in a finite root subsystem of this size.
fn derived_period_bound(x: &WeylElement, j: NodeSet) -> Result<usize> {
    let gcm = x.gcm();
    let mut best = 1usize;
    for k in j.subsets() {
        if k.is_empty() || k.len() > 8 || !gcm.is_spherical(k) {
            continue;
        }
        best = best.max(real_roots(gcm, k, u32::MAX)?.len());
    }
    Ok((2 * best).min(PERIOD_CAP))
}

struct Tester<'a> {
    opts: &'a StandardizeOptions,
    real_cache: HashMap<NodeSet, BTreeSet<RootVector>>,
}

struct Verdict {
    support: NodeSet,
    affine: NodeSet,
    spherical: NodeSet,
    periodic: BTreeSet<RootVector>,
    period_bound: usize,
}

impl Tester<'_> {
    fn reals(&mut self, x: &WeylElement, j: NodeSet) -> Result<&BTreeSet<RootVector>> {
        if !self.real_cache.contains_key(&j) {
            let r = real_roots(x.gcm(), j, self.opts.height)?;
            self.real_cache.insert(j, r);
        }
        Ok(&self.real_cache[&j])
    }

    /// `Some(data)` when `x` is standard.
    fn test(&mut self, x: &WeylElement) -> Result<Option<Verdict>> {
        let gcm = x.gcm().clone();
        let support = x.support()?;
        let affine = gcm.affine_part(support, Sense::Gcm);
        let rest = support.difference(affine);
        let bound = match self.opts.period_bound {
            Some(b) => b,
            None => derived_period_bound(x, rest)?,
        };
        let escape = 2 * self.opts.height as i64;
        let candidates: Vec<RootVector> = self.reals(x, rest)?.iter().cloned().collect();
        let mut periodic = BTreeSet::new();
        for alpha in candidates {
            if root_period(x, &alpha, bound, escape)?.is_some() {
                periodic.insert(alpha);
            }
        }
        let spherical = periodic
            .iter()
            .fold(NodeSet::EMPTY, |acc, r| acc.union(r.support()));
        let standard = spherical.is_empty()
            || (gcm.is_spherical(spherical)
                && *self.reals(x, spherical)? == periodic);
        Ok(standard.then_some(Verdict {
            support,
            affine,
            spherical,
            periodic,
            period_bound: bound,
        }))
    }
}

/// Finds a standard conjugate of the straight element `w` by a
/// breadth-first search over conjugators in a ball of `W_J`.
pub fn standardize(w: &WeylElement, opts: &StandardizeOptions) -> Result<StandardForm> {
    let cert = is_straight(w, opts.straight_n)?;
    cert.require_for(w)?;
    let gcm = w.gcm().clone();
    let j = w.support()?;
    let len = w.length()?;
    let mut tester = Tester {
        opts,
        real_cache: HashMap::new(),
    };

    let identity = WeylElement::identity(&gcm);
    // Hash and Eq read only the matrix, never the cached word
    #[allow(clippy::mutable_key_type)]
    let mut seen: HashSet<WeylElement> = HashSet::new();
    let mut queue: VecDeque<(WeylElement, usize)> = VecDeque::new();
    seen.insert(identity.clone());
    queue.push_back((identity, 0));
    let mut examined = 0usize;
    while let Some((v, depth)) = queue.pop_front() {
        let x = w.conjugate_by(&v)?;
        examined += 1;
        if x.length()? == len {
            let x_cert = if examined == 1 {
                cert.clone()
            } else {
                is_straight(&x, opts.straight_n)?
            };
            if x_cert.is_straight() {
                if let Some(verdict) = tester.test(&x)? {
                    return Ok(assemble(v, x, verdict, x_cert, opts.height));
                }
            }
        }
        if depth < opts.radius {
            for s in j.iter() {
                let vs = v.right_mul_simple(s)?;
                if seen.insert(vs.clone()) {
                    queue.push_back((vs, depth + 1));
                }
            }
        }
    }
    Err(Error::SearchExhausted {
        radius: opts.radius,
        examined,
    })
}

fn assemble(
    conjugator: WeylElement,
    element: WeylElement,
    v: Verdict,
    certificate: StraightCertificate,
    height: u32,
) -> StandardForm {
    let factors = component_factors(&element, v.support).expect("reduced word already computed");
    StandardForm {
        conjugator,
        element,
        support: v.support,
        affine: v.affine,
        spherical: v.spherical,
        periodic_roots: v.periodic,
        factors,
        certificate,
        height,
        period_bound: v.period_bound,
    }
}

/// Factors of `w` on the components of `j`, read off a reduced word.
pub fn component_factors(w: &WeylElement, j: NodeSet) -> Result<Vec<(NodeSet, WeylElement)>> {
    let word = w.reduced_word()?.to_vec();
    w.gcm()
        .components_of(j)
        .into_iter()
        .map(|c| {
            let letters: Vec<usize> = word.iter().copied().filter(|&i| c.contains(i)).collect();
            Ok((c, WeylElement::from_word(w.gcm(), &letters)?))
        })
        .collect()
}
