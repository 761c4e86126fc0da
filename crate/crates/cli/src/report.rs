//! JSON and text renderings of command results.
//!
//! JSON is assembled as `serde_json::Value`, whose object map is ordered by
//! key, so output is canonical: re-serializing parsed output reproduces it
//! byte for byte. Big integers are emitted as exact JSON numbers.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_bigint::BigUint;
use serde_json::{json, Value};

use kmnub::nub::{NubDescriptor, Witness};
use kmnub::oracle::oracle_classify;
use kmnub::orbit::{OrbitClass, RootClassification};
use kmnub::scale::ScaleReport;
use kmnub::weyl::StandardForm;
use kmnub::{Error, Gcm, RootSlice, RootVector, WeylElement};

use crate::Format;

/// Pretty JSON in json mode, `text()` otherwise.
pub fn render(format: Format, value: Value, text: impl FnOnce() -> String) -> String {
    match format {
        Format::Json => canonical(&value),
        Format::Text => text(),
    }
}

/// Canonical serialization followed by a newline.
pub fn canonical(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("Value always serializes");
    s.push('\n');
    s
}

/// An exact integer as a JSON number.
pub fn big(n: &BigUint) -> Value {
    serde_json::from_str(&n.to_string()).expect("decimal digits form a JSON number")
}

fn roots(set: &BTreeSet<RootVector>) -> Value {
    Value::Array(set.iter().map(|r| json!(r.coords())).collect())
}

fn word(w: &WeylElement) -> Result<Value, Error> {
    Ok(json!(w.reduced_word()?.iter().map(|i| i + 1).collect::<Vec<_>>()))
}

fn gcm_json(gcm: &Gcm) -> Value {
    json!({
        "rank": gcm.rank(),
        "rows": gcm.rows(),
        "labels": gcm.labels(),
    })
}

fn class_name(c: OrbitClass) -> &'static str {
    match c {
        OrbitClass::K1 => "K1",
        OrbitClass::K2 => "K2",
        OrbitClass::K3 => "K3",
    }
}

fn vec_text(set: &BTreeSet<RootVector>) -> String {
    set.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn roots_json(slice: &RootSlice) -> Value {
    json!({
        "H": slice.cutoff(),
        "real": slice.real().iter().map(|r| r.coords()).collect::<Vec<_>>(),
        "imaginary": slice.imaginary().iter().map(|r| r.coords()).collect::<Vec<_>>(),
    })
}

pub fn roots_text(slice: &RootSlice) -> String {
    let mut s = String::new();
    for r in slice.real() {
        let _ = writeln!(s, "real {r} {}", r.height());
    }
    for r in slice.imaginary() {
        let _ = writeln!(s, "imaginary {r} {}", r.height());
    }
    s
}

pub fn classify_json(
    gcm: &Gcm,
    w: &WeylElement,
    standard: &WeylElement,
    height: u32,
    classes: &[RootClassification],
) -> Result<Value, Error> {
    let mut counts = [0usize; 3];
    for c in classes {
        counts[c.class as usize] += 1;
    }
    Ok(json!({
        "gcm": gcm_json(gcm),
        "word": word(w)?,
        "standard_word": word(standard)?,
        "H": height,
        "roots": serde_json::to_value(classes).map_err(|e| Error::Internal(e.to_string()))?,
        "counts": { "K1": counts[0], "K2": counts[1], "K3": counts[2] },
    }))
}

pub fn classify_text(classes: &[RootClassification]) -> String {
    let mut s = String::new();
    for c in classes {
        let nature = match c.nature {
            kmnub::Nature::Real => "real",
            kmnub::Nature::Imaginary => "imaginary",
        };
        let _ = writeln!(s, "{} {nature} {}", c.coords, class_name(c.class));
    }
    s
}

pub fn nub_json(gcm: &Gcm, w: &WeylElement, d: &NubDescriptor) -> Result<Value, Error> {
    let st = &d.structure;
    Ok(json!({
        "gcm": gcm_json(gcm),
        "word": word(w)?,
        "standard_word": word(&d.standard.element)?,
        "conjugator": word(&d.standard.conjugator)?,
        "J": st.j,
        "Jperp": st.j_perp,
        "Jaff": st.j_aff,
        "Jsph": st.j_sph,
        "K": roots(&d.k.roots),
        "deltaPlus": roots(&d.delta.plus),
        "deltaMinus": roots(&d.delta.minus),
        "trivial": d.trivial,
        "truncation": {
            "H": d.k.cutoff,
            "complete_flags": {
                "deltaPlus": d.delta.plus_complete,
                "deltaMinus": d.delta.minus_complete,
            },
        },
    }))
}

pub fn nub_text(d: &NubDescriptor) -> String {
    let st = &d.structure;
    let mut s = String::new();
    let _ = writeln!(s, "J {:?}", st.j);
    let _ = writeln!(s, "Jperp {:?}", st.j_perp);
    let _ = writeln!(s, "Jaff {:?}", st.j_aff);
    let _ = writeln!(s, "Jsph {:?}", st.j_sph);
    let _ = writeln!(s, "trivial {}", d.trivial);
    let _ = writeln!(s, "H {}", d.k.cutoff);
    let _ = writeln!(s, "deltaPlus {}", vec_text(&d.delta.plus));
    let _ = writeln!(s, "deltaMinus {}", vec_text(&d.delta.minus));
    let _ = writeln!(s, "K {}", vec_text(&d.k.roots));
    s
}

pub fn scale_json(q: u64, scale: &BigUint) -> Value {
    json!({ "q": q, "scale": big(scale) })
}

pub fn audit_json(r: &ScaleReport) -> Value {
    json!({
        "q": r.q,
        "scale": big(&r.scale),
        "per_n_indices": r.per_n_indices
            .iter()
            .map(|(n, i)| json!({ "n": n, "index": big(i) }))
            .collect::<Vec<_>>(),
        "straight_consistent": r.straight_consistent,
    })
}

pub fn audit_text(r: &ScaleReport) -> String {
    let mut s = format!("scale {}\n", r.scale);
    for (n, i) in &r.per_n_indices {
        let _ = writeln!(s, "n={n} index={i}");
    }
    let _ = writeln!(s, "straight_consistent {}", r.straight_consistent);
    s
}

pub fn standard_json(sf: &StandardForm) -> Result<Value, Error> {
    Ok(json!({
        "conjugator": word(&sf.conjugator)?,
        "element": word(&sf.element)?,
        "J": sf.support,
        "Jaff": sf.affine,
        "Jsph": sf.spherical,
        "periodic_roots": roots(&sf.periodic_roots),
        "H": sf.height,
    }))
}

pub fn standard_text(sf: &StandardForm) -> Result<String, Error> {
    Ok(format!(
        "conjugator {}\nelement {}\nJ {:?}\nJaff {:?}\nJsph {:?}\n",
        sf.conjugator.word_string()?,
        sf.element.word_string()?,
        sf.support,
        sf.affine,
        sf.spherical
    ))
}

pub fn witness_json(w: &Witness) -> Value {
    json!({
        "beta": w.beta.coords(),
        "height": w.beta.height(),
        "component": w.component,
        "n": w.n,
        "min_orbit_height": w.min_orbit_height,
    })
}

/// Brute-force verdicts for every root of the slice.
pub fn oracle_rows(
    gcm: &Gcm,
    slice: &RootSlice,
    word: &[usize],
    n_big: usize,
    height: u32,
) -> Result<(Value, String), Error> {
    let h_big = 40 * height as i64;
    let mut rows = Vec::new();
    let mut text = String::new();
    for (r, _) in slice.iter() {
        match oracle_classify(gcm, r, word, n_big, h_big) {
            Ok(v) => {
                rows.push(json!({
                    "coords": r.coords(),
                    "class": class_name(v.class()),
                    "verdict": v,
                }));
                let _ = writeln!(text, "{r} {}", class_name(v.class()));
            }
            Err(Error::OracleUndecided { .. }) => {
                rows.push(json!({ "coords": r.coords(), "class": null, "verdict": null }));
                let _ = writeln!(text, "{r} undecided");
            }
            Err(e) => return Err(e),
        }
    }
    Ok((Value::Array(rows), text))
}
