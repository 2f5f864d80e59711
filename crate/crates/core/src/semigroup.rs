//! Predicted Weierstrass semigroups per place class and full per-place
//! verification reports.

use crate::curve::{
    alpha, classify_rationality, enumerate_rational_places, fibre_degree, place_json, Alpha,
};
use crate::curve::{CurveContext, Place, Rationality};
use crate::error::{Error, Result};
use crate::field::Fel;
use crate::numerical::NumericalSemigroup;
use crate::orders::{alpha_profile, order_census, totient, OrderProfile};
use crate::witness::{
    exceptional_gaps, gap_certificate, generic_gaps, rational_membership_witnesses,
};
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;

/// The data that determines `H(P)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum PlaceClass {
    /// `P_inf` or `P_(0,0)`.
    OInf,
    OOrigin,
    /// One of the m places over `x = y = 0` other than the origin.
    OZero,
    RationalSpecial,
    RationalGeneric {
        i: u64,
    },
    /// `k = None` is an infinite Q-order.
    Nonrational {
        i: u64,
        k: Option<u64>,
    },
}

impl PlaceClass {
    pub fn name(&self) -> &'static str {
        match self {
            PlaceClass::OInf => "O_inf",
            PlaceClass::OOrigin => "O_origin",
            PlaceClass::OZero => "O_zero",
            PlaceClass::RationalSpecial => "rational_special",
            PlaceClass::RationalGeneric { .. } => "rational_generic",
            PlaceClass::Nonrational { .. } => "nonrational",
        }
    }

    pub fn i(&self) -> Option<u64> {
        match *self {
            PlaceClass::RationalGeneric { i } | PlaceClass::Nonrational { i, .. } => Some(i),
            _ => None,
        }
    }

    pub fn k(&self) -> Option<u64> {
        match *self {
            PlaceClass::Nonrational { k, .. } => k,
            _ => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        !matches!(self, PlaceClass::Nonrational { .. })
    }
}

/// Class of a place with its order profile (absent for boundary and
/// special places).
pub fn place_class(
    ctx: &CurveContext,
    place: &Place,
) -> Result<(PlaceClass, Option<OrderProfile>)> {
    match place {
        Place::Infinity => Ok((PlaceClass::OInf, None)),
        Place::Origin => Ok((PlaceClass::OOrigin, None)),
        Place::ZeroBranch { .. } => Ok((PlaceClass::OZero, None)),
        Place::Affine { .. } => {
            let al = alpha(ctx, place)
                .finite()
                .expect("affine places have finite alpha");
            alpha_class(ctx, al)
        }
    }
}

fn alpha_class(ctx: &CurveContext, al: Fel) -> Result<(PlaceClass, Option<OrderProfile>)> {
    match classify_rationality(ctx, al)? {
        Rationality::Special => Ok((PlaceClass::RationalSpecial, None)),
        Rationality::RationalGeneric => {
            let pr = alpha_profile(ctx, al, 64)?;
            Ok((PlaceClass::RationalGeneric { i: pr.i }, Some(pr)))
        }
        Rationality::Nonrational => {
            let pr = alpha_profile(ctx, al, 64)?;
            Ok((PlaceClass::Nonrational { i: pr.i, k: pr.k }, Some(pr)))
        }
    }
}

/// Generators `q, q+1, (q-1) + j(q-2)` for `j < count`.
fn rational_list(ctx: &CurveContext, count: u64) -> Vec<u64> {
    let q = ctx.q;
    let mut g = vec![q, q + 1];
    g.extend((0..count).map(|j| (q - 1) + j * (q - 2)));
    g
}

/// The predicted generator list for the rational classes, `None` for the
/// non-rational ones (which are described by gap sets).
pub fn predicted_generators(ctx: &CurveContext, class: PlaceClass) -> Option<Vec<u64>> {
    let q = ctx.q;
    match class {
        PlaceClass::OInf | PlaceClass::OOrigin => Some(vec![ctx.x_pole(), q, q + 1]),
        PlaceClass::OZero => Some(vec![q - 2, q, q + 1]),
        PlaceClass::RationalSpecial => Some(rational_list(ctx, ctx.m)),
        PlaceClass::RationalGeneric { i } if i < ctx.m => {
            let mut g = rational_list(ctx, i);
            g.push((q - 1) + i * (q - 2) - 1);
            Some(g)
        }
        PlaceClass::RationalGeneric { .. } => Some(rational_list(ctx, ctx.m)),
        PlaceClass::Nonrational { .. } => None,
    }
}

/// The semigroup the theory predicts for a class. Descriptors that the
/// order theory rules out are rejected.
pub fn predicted_semigroup(ctx: &CurveContext, class: PlaceClass) -> Result<NumericalSemigroup> {
    let q = ctx.q;
    match class {
        PlaceClass::RationalGeneric { i } if i == 0 || (q + 1) % (i + 1) != 0 => Err(
            Error::ExcludedPoint(format!("rational P-order {i}: i+1 must divide q+1")),
        ),
        PlaceClass::Nonrational { i, k } => {
            if let Some(k) = k {
                let expect = match (i + 1) % 3 {
                    1 => Some(2 * i / 3),
                    2 => Some((i - 1) / 3),
                    _ => None,
                };
                if expect != Some(k) || (q + 1) % (i + 1) == 0 || (i + 1) % ctx.p == 0 {
                    return Err(Error::ExcludedPoint(format!(
                        "no non-rational place has (i, K) = ({i}, {k})"
                    )));
                }
                if k < ctx.m {
                    return NumericalSemigroup::from_gaps(&exceptional_gaps(ctx, i, k));
                }
            }
            NumericalSemigroup::from_gaps(&generic_gaps(ctx))
        }
        _ => NumericalSemigroup::from_generators(&predicted_generators(ctx, class).unwrap()),
    }
}

/// Verification report of one place.
#[derive(Debug, Clone, Serialize)]
pub struct PlaceReport {
    pub place: Value,
    pub class: &'static str,
    pub i: Option<u64>,
    #[serde(rename = "K")]
    pub k: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<u64>>,
    pub gaps: Vec<u64>,
    pub genus: u64,
    pub symmetric: bool,
    pub certificate: Value,
    pub status: &'static str,
}

impl PlaceReport {
    pub fn passed(&self) -> bool {
        self.status == "PASS"
    }
}

/// The alpha-dependent part of a verification: everything except the
/// place itself. Shared by all places of a fibre.
#[derive(Debug, Clone)]
pub struct AlphaVerdict {
    pub class: PlaceClass,
    pub semigroup: Option<NumericalSemigroup>,
    pub certificate: Value,
    pub failures: Vec<String>,
    /// Q-order from the order profile (also for rational places, whose
    /// class does not depend on it).
    pub q_order: Option<u64>,
}

/// Runs every check that depends only on the class of `place` (and on
/// alpha for affine places).
pub fn verdict(ctx: &CurveContext, place: &Place, full_certificate: bool) -> AlphaVerdict {
    let mut failures = Vec::new();
    let (class, profile) = match place_class(ctx, place) {
        Ok(c) => c,
        Err(e) => {
            return AlphaVerdict {
                class: PlaceClass::OInf,
                semigroup: None,
                certificate: json!({"kind": "none", "failures": [e.to_string()]}),
                failures: vec![e.to_string()],
                q_order: None,
            }
        }
    };
    if let Some(pr) = &profile {
        failures.extend(pr.issues.iter().cloned());
    }
    let semigroup = match predicted_semigroup(ctx, class) {
        Ok(s) => Some(s),
        Err(e) => {
            failures.push(e.to_string());
            None
        }
    };
    if let Some(s) = &semigroup {
        if s.genus() != ctx.genus {
            failures.push(format!(
                "predicted genus {} != g = {}",
                s.genus(),
                ctx.genus
            ));
        }
        if class.is_rational() && ctx.q >= 7 && !s.contains(2 * ctx.genus - 1) {
            failures.push("2g-1 is a gap at a rational place".into());
        }
    }
    let certificate = match class {
        PlaceClass::OInf | PlaceClass::OOrigin | PlaceClass::OZero => {
            json!({"kind": "closed_form", "generators": predicted_generators(ctx, class)})
        }
        PlaceClass::RationalSpecial | PlaceClass::RationalGeneric { .. } => {
            membership_certificate(ctx, place, semigroup.as_ref(), &mut failures)
        }
        PlaceClass::Nonrational { .. } => match gap_certificate(ctx, place) {
            Ok(cert) => {
                if !cert.valid() {
                    failures.push("gap certificate invalid".into());
                }
                if let Some(s) = &semigroup {
                    if s.gaps() != cert.claimed.as_slice() {
                        failures.push("certified gaps differ from the predicted gaps".into());
                    }
                }
                if full_certificate {
                    cert.to_json()
                } else {
                    serde_json::to_value(cert.summary()).unwrap()
                }
            }
            Err(e) => {
                failures.push(e.to_string());
                json!({"kind": "none"})
            }
        },
    };
    let q_order = profile.as_ref().and_then(|p| p.k);
    AlphaVerdict {
        class,
        semigroup,
        certificate,
        failures,
        q_order,
    }
}

fn membership_certificate(
    ctx: &CurveContext,
    place: &Place,
    predicted: Option<&NumericalSemigroup>,
    failures: &mut Vec<String>,
) -> Value {
    match rational_membership_witnesses(ctx, place) {
        Ok(ws) => {
            for w in ws.iter().filter(|w| !w.valid()) {
                failures.push(format!("membership witness for {} invalid", w.element));
            }
            let elements: Vec<u64> = ws.iter().map(|w| w.element).collect();
            match (NumericalSemigroup::from_generators(&elements), predicted) {
                (Ok(s), Some(p)) if &s == p => {}
                (Ok(_), Some(_)) => {
                    failures.push("witnessed elements generate a different semigroup".into())
                }
                (Err(e), _) => failures.push(e.to_string()),
                _ => {}
            }
            json!({
                "kind": "membership",
                "witnesses": ws.iter().map(|w| w.to_json()).collect::<Vec<_>>(),
            })
        }
        Err(e) => {
            failures.push(e.to_string());
            json!({"kind": "none"})
        }
    }
}

/// Combines a verdict with the per-place checks into a report.
pub fn report_from(ctx: &CurveContext, place: &Place, v: &AlphaVerdict) -> PlaceReport {
    let mut failures = v.failures.clone();
    if let Place::Affine { a, b } = place {
        if !ctx.curve_value(*a, *b).is_zero() {
            failures.push("place is not on the curve".into());
        }
    }
    let mut certificate = v.certificate.clone();
    certificate["failures"] = json!(failures);
    let s = v.semigroup.as_ref();
    PlaceReport {
        place: place_json(ctx, place),
        class: v.class.name(),
        i: v.class.i(),
        k: v.class.k().or(v.q_order),
        generators: s
            .filter(|_| v.class.is_rational())
            .map(|s| s.generators().to_vec()),
        gaps: s.map(|s| s.gaps().to_vec()).unwrap_or_default(),
        genus: s.map(|s| s.genus()).unwrap_or(0),
        symmetric: s.map(|s| s.is_symmetric()).unwrap_or(false),
        certificate,
        status: if failures.is_empty() { "PASS" } else { "FAIL" },
    }
}

/// Full verification of one place.
pub fn verify_place(ctx: &CurveContext, place: &Place) -> PlaceReport {
    report_from(ctx, place, &verdict(ctx, place, false))
}

/// Verification of a list of places, computing each alpha-dependent
/// verdict once. Places keep their input order.
pub fn verify_places(ctx: &CurveContext, places: &[Place]) -> Vec<PlaceReport> {
    use rayon::prelude::*;
    let mut keys: Vec<Option<Fel>> = places.iter().map(|p| affine_alpha(ctx, p)).collect();
    keys.sort();
    keys.dedup();
    let reps: Vec<(Option<Fel>, &Place)> = keys
        .iter()
        .map(|k| {
            (
                *k,
                places.iter().find(|p| affine_alpha(ctx, p) == *k).unwrap(),
            )
        })
        .collect();
    let verdicts: BTreeMap<Option<Fel>, AlphaVerdict> = reps
        .par_iter()
        .filter(|(k, _)| k.is_some())
        .map(|(k, p)| (*k, verdict(ctx, p, false)))
        .collect();
    places
        .par_iter()
        .map(|p| match affine_alpha(ctx, p) {
            None => verify_place(ctx, p),
            k => report_from(ctx, p, &verdicts[&k]),
        })
        .collect()
}

fn affine_alpha(ctx: &CurveContext, p: &Place) -> Option<Fel> {
    match (p, alpha(ctx, p)) {
        (Place::Affine { .. }, Alpha::Finite(a)) => Some(a),
        _ => None,
    }
}

/// One row of the non-rational Weierstrass census.
#[derive(Debug, Clone, Serialize)]
pub struct WeierstrassRow {
    pub i: u64,
    #[serde(rename = "K")]
    pub k: u64,
    /// `(q^2 - 1) phi(i+1) / 3`.
    pub places: u64,
    /// Degree over GF(q^2) of the alpha values of the class.
    pub alpha_degree: u32,
    /// Number of alpha values found (each carries M places).
    pub alphas: u64,
    /// Fibre degree -> number of places.
    pub by_degree: BTreeMap<u32, u64>,
    pub within_d_max: u64,
    /// Agreement with the abstract order census.
    pub census_agrees: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Weierstrass places: every rational place plus the non-rational classes
/// with finite Q-order at most m-1.
#[derive(Debug, Clone, Serialize)]
pub struct WeierstrassCensus {
    pub q: u64,
    pub d_max: u32,
    pub rational_places: u64,
    pub rational_by_class: BTreeMap<String, u64>,
    pub rows: Vec<WeierstrassRow>,
    pub nonrational_places: u64,
    pub nonrational_within_d_max: u64,
    pub consistent: bool,
}

/// Admissible `(i, K)` pairs for non-rational Weierstrass places.
pub fn weierstrass_classes(ctx: &CurveContext) -> Vec<(u64, u64)> {
    let q = ctx.q;
    (1..=q)
        .filter_map(|i| {
            let n = i + 1;
            if n % ctx.p == 0 || (q + 1) % n == 0 {
                return None;
            }
            let k = match n % 3 {
                1 => 2 * i / 3,
                2 => (i - 1) / 3,
                _ => return None,
            };
            (k >= 1 && k < ctx.m).then_some((i, k))
        })
        .collect()
}

pub fn weierstrass_census(ctx: &CurveContext, d_max: u32) -> Result<WeierstrassCensus> {
    let rational = enumerate_rational_places(ctx);
    let mut by_class: BTreeMap<String, u64> = BTreeMap::new();
    for p in &rational {
        let (c, _) = place_class(ctx, p)?;
        *by_class.entry(c.name().to_string()).or_default() += 1;
    }
    let mut rows = Vec::new();
    let mut consistent = true;
    for (i, k) in weierstrass_classes(ctx) {
        let row = census_row(ctx, i, k, d_max)?;
        consistent &= row.census_agrees;
        rows.push(row);
    }
    let nonrational_places = rows.iter().map(|r| r.places).sum();
    let nonrational_within_d_max = rows.iter().map(|r| r.within_d_max).sum();
    Ok(WeierstrassCensus {
        q: ctx.q,
        d_max,
        rational_places: rational.len() as u64,
        rational_by_class: by_class,
        rows,
        nonrational_places,
        nonrational_within_d_max,
        consistent,
    })
}

/// Smallest `d` with `n | q^(2d) - 1`.
fn splitting_degree(q: u64, n: u64) -> u32 {
    let q2 = (q * q) % n;
    let mut x = q2;
    let mut d = 1;
    while x != 1 % n {
        x = x * q2 % n;
        d += 1;
    }
    d
}

/// The alpha values with orders exactly `(i, K)`, found as
/// `alpha = (zeta - beta zeta^2) / (beta - 1)` for `beta` in the cyclic group
/// of order `3(i+1)`, in the field GF(q^(2d)) where it splits. The flag is
/// the rationality of the alpha (always false for a Weierstrass class).
pub fn class_alphas(ctx: &CurveContext, i: u64, k: u64) -> Result<Vec<(Fel, bool)>> {
    let n = 3 * (i + 1);
    let f = ctx.ext(splitting_degree(ctx.q, n))?;
    // an element of exact order n
    let cof = (f.order() - 1) / n;
    let gamma = (2..f.order())
        .map(|r| f.from_rank(r).pow(cof))
        .find(|g| g.mult_order().ok() == Some(n))
        .ok_or_else(|| Error::Internal(format!("no element of order {n}")))?;
    let z = ctx.zeta_in(f)?;
    let mut out = Vec::new();
    for e in 0..n {
        let beta = gamma.pow(e);
        if beta.is_one() {
            continue;
        }
        // beta = (alpha + zeta) / (alpha + zeta^2)
        let al = (z - beta * z * z) / (beta - 1);
        if al.is_zero() || al.is_one() {
            continue;
        }
        let Ok(pr) = alpha_profile(ctx, al, 0) else {
            continue;
        };
        if pr.i == i && pr.k == Some(k) {
            out.push((al, pr.class.is_rational()));
        }
    }
    out.sort();
    Ok(out)
}

fn census_row(ctx: &CurveContext, i: u64, k: u64, d_max: u32) -> Result<WeierstrassRow> {
    let n = 3 * (i + 1);
    let places = (ctx.q * ctx.q - 1) * totient(i + 1) / 3;
    let census = order_census(ctx, i)?;
    let census_count = census
        .k_values
        .iter()
        .filter(|(kk, _)| *kk == k)
        .map(|(_, c)| *c)
        .sum::<u64>();
    let d = splitting_degree(ctx.q, n);
    let mut row = WeierstrassRow {
        i,
        k,
        places,
        alpha_degree: d,
        alphas: 0,
        by_degree: BTreeMap::new(),
        within_d_max: 0,
        census_agrees: census_count == places,
        note: None,
    };
    let alphas = match class_alphas(ctx, i, k) {
        Ok(a) => a,
        Err(e @ Error::FieldTooLarge { .. }) => {
            row.note = Some(format!("alpha field not constructible: {e}"));
            return Ok(row);
        }
        Err(e) => return Err(e),
    };
    for (al, rational) in alphas {
        if rational {
            row.census_agrees = false;
        }
        row.alphas += 1;
        match fibre_degree(ctx, al) {
            Ok(fd) => {
                *row.by_degree.entry(fd).or_default() += ctx.big_m;
                if fd <= d_max {
                    row.within_d_max += ctx.big_m;
                }
            }
            Err(e) => row.note = Some(format!("fibre degree unavailable: {e}")),
        }
    }
    row.census_agrees &= row.alphas * ctx.big_m == places;
    Ok(row)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::make_context;

    #[test]
    fn predicted_examples() {
        let c13 = make_context(13).unwrap();
        let s = predicted_semigroup(&c13, PlaceClass::OInf).unwrap();
        assert_eq!(s.generators(), &[9, 13, 14]);
        let s = predicted_semigroup(&c13, PlaceClass::RationalGeneric { i: 1 }).unwrap();
        assert_eq!(s.generators(), &[12, 13, 14, 22]);
        assert_eq!(s.genus(), 26);
        let c7 = make_context(7).unwrap();
        let s = predicted_semigroup(&c7, PlaceClass::Nonrational { i: 4, k: Some(1) }).unwrap();
        assert_eq!(s.gaps(), &[1, 2, 3, 4, 6, 8, 9]);
        assert!(predicted_semigroup(&c7, PlaceClass::Nonrational { i: 4, k: Some(2) }).is_err());
        let c4 = make_context(4).unwrap();
        assert!(predicted_semigroup(&c4, PlaceClass::OZero)
            .unwrap()
            .is_symmetric());
    }

    #[test]
    fn rational_reports_q7() {
        let ctx = make_context(7).unwrap();
        let places = enumerate_rational_places(&ctx);
        let reports = verify_places(&ctx, &places);
        assert_eq!(reports.len(), 148);
        for r in &reports {
            assert!(r.passed(), "{}", serde_json::to_string(r).unwrap());
            assert_eq!(r.genus, 7);
        }
    }

    #[test]
    fn weierstrass_classes_q7() {
        let ctx = make_context(7).unwrap();
        assert_eq!(weierstrass_classes(&ctx), vec![(4, 1)]);
        let c = weierstrass_census(&ctx, 2).unwrap();
        assert!(c.consistent, "{c:?}");
        assert_eq!(c.nonrational_places, 64);
        assert_eq!(c.rational_places, 148);
    }
}
