//! The curve `x^q + x y^m - y^((2q+1)/3) = 0` over GF(q^2), its places, and
//! the Hermitian cover `v^(q+1) = u^q + u` with `y = v^3`, `x = u v`.
//!
//! Places are
//! - `Infinity` and `Origin`, the two places totally ramified in the cover,
//! - `ZeroBranch(A)`, the m branches over the singular plane point (0, 0),
//!   keyed by the u-coordinate `A` (with `A^(q-1) = -1`) of a Hermitian point
//!   `(A, 0)`, canonical under `A -> zeta A`,
//! - `Affine(a, b)` with `a, b != 0`, possibly over an extension GF(q^(2d)).
//!
//! Affine places with a common `alpha = b^((q+2)/3) / a` form a fibre: they
//! are the M solutions `b` of `b^M = alpha^(q-1) (alpha - 1)` together with
//! `a = b^((q+2)/3) / alpha`.

use crate::error::{Error, Result};
use crate::field::{embed, gf, prime_power, Fel, Field};
use crate::polyfam::PolyFamily;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

/// Constants of the curve for one admissible q.
pub struct CurveContext {
    pub q: u64,
    pub p: u64,
    pub e: u32,
    /// `(q-1)/3`
    pub m: u64,
    /// `(q^2-1)/3`
    pub big_m: u64,
    /// `(q^2-q)/6`
    pub genus: u64,
    base: Field,
    zeta: Fel,
    families: Mutex<HashMap<usize, PolyFamily>>,
}

impl fmt::Debug for CurveContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CurveContext")
            .field("q", &self.q)
            .field("base", &self.base)
            .field("zeta", &self.zeta)
            .finish()
    }
}

/// Validates q and builds the context.
pub fn make_context(q: u64) -> Result<CurveContext> {
    let (p, e) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    if q < 4 || q % 3 != 1 {
        return Err(Error::BadResidue(
            q,
            "q must satisfy q = 1 (mod 3) and q >= 4".into(),
        ));
    }
    let base = gf(p, 2 * e)?;
    let zeta = base.cube_root_of_unity()?;
    Ok(CurveContext {
        q,
        p,
        e,
        m: (q - 1) / 3,
        big_m: (q * q - 1) / 3,
        genus: (q * q - q) / 6,
        base,
        zeta,
        families: Mutex::new(HashMap::new()),
    })
}

impl CurveContext {
    /// GF(q^2).
    pub fn base(&self) -> Field {
        self.base
    }

    /// GF(q^(2d)) with its canonical modulus.
    pub fn ext(&self, d: u32) -> Result<Field> {
        gf(self.p, 2 * self.e * d)
    }

    /// The degree d with `f = GF(q^(2d))`, if `f` contains GF(q^2).
    pub fn degree_of(&self, f: Field) -> Option<u32> {
        (f.p() == self.p && f.n() % (2 * self.e) == 0).then(|| f.n() / (2 * self.e))
    }

    fn check_field(&self, f: Field) -> Result<u32> {
        self.degree_of(f).ok_or_else(|| {
            Error::FieldMismatch(f.descriptor(), format!("an extension of {}", self.base))
        })
    }

    /// The context's cube root of unity in GF(q^2).
    pub fn zeta(&self) -> Fel {
        self.zeta
    }

    /// The image of the base field's zeta in `f`.
    pub fn zeta_in(&self, f: Field) -> Result<Fel> {
        self.check_field(f)?;
        embed(self.base, f)?.map(self.zeta)
    }

    /// The polynomial families over `f`, using [`Self::zeta_in`].
    pub fn family(&self, f: Field) -> Result<PolyFamily> {
        let key = f as *const _ as usize;
        if let Some(pf) = self.families.lock().unwrap().get(&key) {
            return Ok(*pf);
        }
        let pf = PolyFamily::new(self.zeta_in(f)?)?;
        self.families.lock().unwrap().insert(key, pf);
        Ok(pf)
    }

    /// Maps `x` from its field into `to` (which must contain it) along an
    /// embedding that sends zeta to zeta. The curve has coefficients in the
    /// prime field, so this sends places to places and preserves alpha and
    /// every order invariant.
    pub fn transport(&self, x: Fel, to: Field) -> Result<Fel> {
        let from = x.field();
        if std::ptr::eq(from, to) {
            return Ok(x);
        }
        let emb = embed(from, to)?;
        let (zf, zt) = (self.zeta_in(from)?, self.zeta_in(to)?);
        for k in 0..from.n() {
            if emb.map(zf.frobenius(k))? == zt {
                return emb.map(x.frobenius(k));
            }
        }
        Err(Error::Internal("no zeta-compatible embedding".into()))
    }

    /// Inverse of [`Self::transport`]: the element of `to` (a subfield of
    /// `x`'s field) mapping to `x`, if any.
    pub fn transport_back(&self, x: Fel, to: Field) -> Result<Option<Fel>> {
        let from = x.field();
        if std::ptr::eq(from, to) {
            return Ok(Some(x));
        }
        let emb = embed(to, from)?;
        let (zt, zf) = (self.zeta_in(to)?, self.zeta_in(from)?);
        for k in 0..to.n() {
            if emb.map(zt.frobenius(k))? == zf {
                // emb(frob^k(y)) = x  <=>  y = frob^(-k)(emb^-1(x))
                return Ok(emb.preimage(x).map(|y| y.frobenius((to.n() - k) % to.n())));
            }
        }
        Err(Error::Internal("no zeta-compatible embedding".into()))
    }

    /// The curve polynomial at `(a, b)`.
    pub fn curve_value(&self, a: Fel, b: Fel) -> Fel {
        a.pow(self.q) + a * b.pow(self.m) - b.pow((2 * self.q + 1) / 3)
    }

    /// `b^M = c(alpha)` is the fibre equation.
    pub fn fibre_constant(&self, alpha: Fel) -> Fel {
        alpha.pow(self.q - 1) * (alpha - 1)
    }

    /// `(2q+1)/3` pole order of x at infinity, also the smallest generator at
    /// the two ramified places.
    pub fn x_pole(&self) -> u64 {
        (2 * self.q + 1) / 3
    }

    /// Builds and validates an affine place.
    pub fn affine(&self, a: Fel, b: Fel) -> Result<Place> {
        if !std::ptr::eq(a.field(), b.field()) {
            return Err(Error::FieldMismatch(
                a.field().descriptor(),
                b.field().descriptor(),
            ));
        }
        self.check_field(a.field())?;
        if a.is_zero() || b.is_zero() {
            return Err(Error::ExcludedPoint(
                "affine places need a != 0 and b != 0".into(),
            ));
        }
        if !self.curve_value(a, b).is_zero() {
            return Err(Error::ExcludedPoint(format!(
                "({a}, {b}) is not on the curve"
            )));
        }
        Ok(Place::Affine { a, b })
    }

    /// Builds a branch place from any `A` with `A^(q-1) = -1` in GF(q^2).
    pub fn zero_branch(&self, a: Fel) -> Result<Place> {
        if !std::ptr::eq(a.field(), self.base) || !(a.pow(self.q - 1) + 1).is_zero() {
            return Err(Error::ExcludedPoint(format!(
                "{a} is not a branch representative"
            )));
        }
        Ok(Place::ZeroBranch {
            a: self.canonical_branch(a),
        })
    }

    pub(crate) fn canonical_branch(&self, a: Fel) -> Fel {
        let z = self.zeta;
        *[a, a * z, a * z * z].iter().min().unwrap()
    }

    /// The m canonical branch representatives, sorted.
    pub fn zero_branches(&self) -> Vec<Place> {
        let f = self.base;
        let mut poly = vec![f.zero(); self.q as usize];
        poly[0] = f.one();
        poly[self.q as usize - 1] = f.one();
        let mut reps: Vec<Fel> = f
            .roots_of(&poly)
            .into_iter()
            .map(|a| self.canonical_branch(a))
            .collect();
        reps.sort();
        reps.dedup();
        reps.into_iter().map(|a| Place::ZeroBranch { a }).collect()
    }
}

/// The value of alpha at a place.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Alpha {
    Infinity,
    Finite(Fel),
}

impl Alpha {
    pub fn finite(self) -> Option<Fel> {
        match self {
            Alpha::Finite(a) => Some(a),
            Alpha::Infinity => None,
        }
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alpha::Infinity => f.write_str("inf"),
            Alpha::Finite(a) => write!(f, "{a}"),
        }
    }
}

/// A place of the curve. Ordering is by variant, then coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Infinity,
    Origin,
    ZeroBranch { a: Fel },
    Affine { a: Fel, b: Fel },
}

impl Place {
    pub fn variant(&self) -> &'static str {
        match self {
            Place::Infinity => "infinity",
            Place::Origin => "origin",
            Place::ZeroBranch { .. } => "zero_branch",
            Place::Affine { .. } => "affine",
        }
    }

    /// The field the coordinates live in (GF(q^2) for the boundary places).
    pub fn field(&self, ctx: &CurveContext) -> Field {
        match self {
            Place::Affine { a, .. } => a.field(),
            _ => ctx.base,
        }
    }

    pub fn is_boundary(&self) -> bool {
        !matches!(self, Place::Affine { .. })
    }
}

/// Rationality of an affine place, read off from its alpha.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rationality {
    /// `alpha^2 - alpha + 1 = 0`.
    Special,
    /// `alpha^q - alpha^(q-1) = 1`, not special.
    RationalGeneric,
    Nonrational,
}

impl Rationality {
    pub fn is_rational(self) -> bool {
        self != Rationality::Nonrational
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Rationality::Special => "special",
            Rationality::RationalGeneric => "rational_generic",
            Rationality::Nonrational => "nonrational",
        }
    }
}

/// `b^((q+2)/3) / a` for affine places; 0, 1, infinity on the boundary.
pub fn alpha(ctx: &CurveContext, place: &Place) -> Alpha {
    match place {
        Place::Infinity => Alpha::Infinity,
        Place::Origin => Alpha::Finite(ctx.base.one()),
        Place::ZeroBranch { .. } => Alpha::Finite(ctx.base.zero()),
        Place::Affine { a, b } => Alpha::Finite(b.pow((ctx.q + 2) / 3) / *a),
    }
}

/// Classifies an admissible alpha (not 0 or 1).
pub fn classify_rationality(ctx: &CurveContext, alpha: Fel) -> Result<Rationality> {
    ctx.check_field(alpha.field())?;
    if alpha.is_zero() || alpha.is_one() {
        return Err(Error::ExcludedPoint(format!("alpha = {alpha}")));
    }
    if (alpha * alpha - alpha + 1).is_zero() {
        return Ok(Rationality::Special);
    }
    let aq1 = alpha.pow(ctx.q - 1);
    if (aq1 * alpha - aq1).is_one() {
        Ok(Rationality::RationalGeneric)
    } else {
        Ok(Rationality::Nonrational)
    }
}

/// A point `(A, B)` of the Hermitian cover over an affine place.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HermitianLift {
    pub a_big: Fel,
    pub b_big: Fel,
}

impl HermitianLift {
    pub fn field(&self) -> Field {
        self.b_big.field()
    }

    /// `B^(q+1) = A^q + A`.
    pub fn satisfies(&self, q: u64) -> bool {
        self.b_big.pow(q + 1) == self.a_big.pow(q) + self.a_big
    }

    /// The orbit `(zeta^k A, zeta^(2k) B)`, k = 0, 1, 2.
    pub fn orbit(&self, zeta: Fel) -> [HermitianLift; 3] {
        let z2 = zeta * zeta;
        [
            *self,
            HermitianLift {
                a_big: self.a_big * zeta,
                b_big: self.b_big * z2,
            },
            HermitianLift {
                a_big: self.a_big * z2,
                b_big: self.b_big * zeta,
            },
        ]
    }
}

/// The canonical lift of an affine place: the smallest cube root `B` of `b`,
/// taken in the place's field or, if `b` is not a cube there, in its cubic
/// extension.
pub fn hermitian_lift(ctx: &CurveContext, place: &Place) -> Result<HermitianLift> {
    let Place::Affine { a, b } = *place else {
        return Err(Error::ExcludedPoint(format!(
            "no unramified lift at {}",
            place.variant()
        )));
    };
    let mut roots = b.nth_roots(3);
    let (mut a, mut b) = (a, b);
    if roots.is_empty() {
        let f = b.field();
        let big = ctx.ext(ctx.degree_of(f).unwrap_or(1) * 3)?;
        a = ctx.transport(a, big)?;
        b = ctx.transport(b, big)?;
        roots = b.nth_roots(3);
    }
    let b_big = *roots
        .first()
        .ok_or_else(|| Error::Internal("b has no cube root".into()))?;
    let lift = HermitianLift {
        a_big: a / b_big,
        b_big,
    };
    if !lift.satisfies(ctx.q) {
        return Err(Error::Internal(format!(
            "({a}, {b}) does not lift to the Hermitian curve"
        )));
    }
    Ok(lift)
}

/// All degree-one places, in canonical order, by brute force over GF(q^2)^2.
pub fn enumerate_rational_places(ctx: &CurveContext) -> Vec<Place> {
    let f = ctx.base;
    let mut out = vec![Place::Infinity, Place::Origin];
    out.extend(ctx.zero_branches());
    let affine: Vec<Place> = f
        .elements()
        .skip(1)
        .collect::<Vec<_>>()
        .par_iter()
        .flat_map_iter(|&a| {
            f.elements()
                .skip(1)
                .filter(move |&b| ctx.curve_value(a, b).is_zero())
                .map(move |b| Place::Affine { a, b })
        })
        .collect();
    out.extend(affine);
    out.sort();
    out
}

/// The places sharing one alpha.
#[derive(Debug, Clone)]
pub struct Fibre {
    pub alpha: Fel,
    /// Smallest d with every place of the fibre defined over GF(q^(2d)).
    pub degree: u32,
    pub places: Vec<Place>,
}

/// Smallest `d` such that the fibre over `alpha` is defined over GF(q^(2d)):
/// `d = d_alpha * r` with `d_alpha` the degree of alpha over GF(q^2) and `r`
/// the order of `c^((q^(2 d_alpha) - 1)/M)`.
pub fn fibre_degree(ctx: &CurveContext, alpha: Fel) -> Result<u32> {
    let d = ctx.check_field(alpha.field())?;
    let d_alpha = (1..=d)
        .filter(|k| d % k == 0)
        .find(|&k| alpha.in_subfield(2 * ctx.e * k).unwrap_or(false))
        .expect("alpha lies in its own field");
    let big_q = ctx.q.checked_pow(2 * d_alpha).ok_or(Error::FieldTooLarge {
        p: ctx.p,
        n: 2 * ctx.e * d_alpha,
    })?;
    let w = ctx.fibre_constant(alpha).pow((big_q - 1) / ctx.big_m);
    Ok(d_alpha * w.mult_order()? as u32)
}

/// All places with the given alpha (not 0 or 1), over the smallest field
/// that contains them.
pub fn places_with_alpha(ctx: &CurveContext, alpha: Fel) -> Result<Fibre> {
    ctx.check_field(alpha.field())?;
    if alpha.is_zero() || alpha.is_one() {
        return Err(Error::ExcludedPoint(format!("alpha = {alpha}")));
    }
    let degree = fibre_degree(ctx, alpha)?;
    let target = ctx.ext(degree)?;
    let local = match ctx.transport_back(alpha, target) {
        Ok(Some(x)) => x,
        _ => {
            // target is not a subfield of alpha's field: go through GF(q^(2 d_alpha))
            let d = ctx.degree_of(alpha.field()).unwrap();
            let d_alpha = (1..=d)
                .filter(|k| d % k == 0 && degree % k == 0)
                .find(|&k| {
                    matches!(
                        ctx.ext(k).and_then(|s| ctx.transport_back(alpha, s)),
                        Ok(Some(_))
                    )
                })
                .ok_or_else(|| Error::Internal("alpha has no home subfield".into()))?;
            let small = ctx.transport_back(alpha, ctx.ext(d_alpha)?)?.unwrap();
            ctx.transport(small, target)?
        }
    };
    Ok(fibre_in(ctx, local, degree))
}

/// The fibre over `alpha`, solved inside alpha's own field (assumed to
/// contain it).
fn fibre_in(ctx: &CurveContext, alpha: Fel, degree: u32) -> Fibre {
    let c = ctx.fibre_constant(alpha);
    let e = (ctx.q + 2) / 3;
    let mut places: Vec<Place> = c
        .nth_roots(ctx.big_m)
        .into_iter()
        .map(|b| Place::Affine {
            a: b.pow(e) / alpha,
            b,
        })
        .collect();
    places.sort();
    Fibre {
        alpha,
        degree,
        places,
    }
}

/// Every fibre whose smallest field is exactly GF(q^(2d)), in canonical
/// alpha order. Only the rational classes occur for d = 1.
pub fn fibres_of_degree(ctx: &CurveContext, d: u32) -> Result<Vec<Fibre>> {
    let f = ctx.ext(d)?;
    let order = f.order();
    let exp = (order - 1) / ctx.big_m;
    let sub_pows: Vec<u64> = (1..d)
        .filter(|k| d % k == 0)
        .map(|k| ctx.q.pow(2 * k))
        .collect();
    let mut out: Vec<Fibre> = (2..order)
        .into_par_iter()
        .filter_map(|r| {
            let alpha = f.from_rank(r);
            if alpha.is_one() {
                return None;
            }
            let c = ctx.fibre_constant(alpha);
            if !c.pow(exp).is_one() {
                return None;
            }
            // no proper subfield GF(q^(2k)), k | d, may already hold the fibre
            for &qk in &sub_pows {
                if alpha.pow(qk) == alpha && c.pow((qk - 1) / ctx.big_m).is_one() {
                    return None;
                }
            }
            Some(fibre_in(ctx, alpha, d))
        })
        .collect();
    out.sort_by(|x, y| x.alpha.cmp(&y.alpha));
    Ok(out)
}

/// Rational places grouped by kind and P-order, with the predicted counts.
#[derive(Debug, Clone, Serialize)]
pub struct CurveCensus {
    pub q: u64,
    pub total: u64,
    /// `(q^3 + 2q^2 + 3)/3`
    pub expected_total: u64,
    pub o_inf: u64,
    pub o_zero: u64,
    pub special: u64,
    /// `2M`
    pub expected_special: u64,
    /// `(i, observed, expected)` for rational generic places, where the
    /// expected count is `phi(i+1) M` for every `i >= 1` with `i+1 | q+1`.
    pub by_p_order: Vec<(u64, u64, u64)>,
    pub reconciles: bool,
}

/// Counts the rational places per class and reconciles them with the
/// closed-form totals.
pub fn curve_census(ctx: &CurveContext) -> Result<CurveCensus> {
    use crate::orders::{p_order, totient};
    use std::collections::BTreeMap;
    let places = enumerate_rational_places(ctx);
    let (mut o_inf, mut o_zero, mut special) = (0, 0, 0);
    let mut by_i: BTreeMap<u64, u64> = (2..=ctx.q + 1)
        .filter(|d| (ctx.q + 1) % d == 0)
        .map(|d| (d - 1, 0))
        .collect();
    for p in &places {
        match p {
            Place::Infinity | Place::Origin => o_inf += 1,
            Place::ZeroBranch { .. } => o_zero += 1,
            Place::Affine { .. } => {
                let al = alpha(ctx, p)
                    .finite()
                    .ok_or_else(|| Error::Internal("affine place without alpha".into()))?;
                match classify_rationality(ctx, al)? {
                    Rationality::Special => special += 1,
                    Rationality::RationalGeneric => {
                        *by_i.entry(p_order(ctx, al)?).or_default() += 1
                    }
                    Rationality::Nonrational => {
                        return Err(Error::Internal(format!(
                            "rational place {al} classified nonrational"
                        )))
                    }
                }
            }
        }
    }
    let q = ctx.q;
    let by_p_order: Vec<(u64, u64, u64)> = by_i
        .into_iter()
        .map(|(i, n)| {
            let expected = if (q + 1) % (i + 1) == 0 {
                totient(i + 1) * ctx.big_m
            } else {
                0
            };
            (i, n, expected)
        })
        .collect();
    let expected_total = (q * q * q + 2 * q * q + 3) / 3;
    let expected_special = 2 * ctx.big_m;
    let predicted_sum = 2 + ctx.m + expected_special + by_p_order.iter().map(|r| r.2).sum::<u64>();
    let reconciles = places.len() as u64 == expected_total
        && predicted_sum == expected_total
        && o_inf == 2
        && o_zero == ctx.m
        && special == expected_special
        && by_p_order.iter().all(|r| r.1 == r.2);
    Ok(CurveCensus {
        q,
        total: places.len() as u64,
        expected_total,
        o_inf,
        o_zero,
        special,
        expected_special,
        by_p_order,
        reconciles,
    })
}

/// JSON form of a place: `{variant, a, b, field, alpha, rationality_class}`.
pub fn place_json(ctx: &CurveContext, place: &Place) -> serde_json::Value {
    let lit = |x: Option<Fel>| {
        x.map(|v| serde_json::Value::String(v.literal()))
            .unwrap_or(serde_json::Value::Null)
    };
    let (a, b) = match place {
        Place::Affine { a, b } => (Some(*a), Some(*b)),
        Place::ZeroBranch { a } => (Some(*a), None),
        _ => (None, None),
    };
    let al = alpha(ctx, place);
    let class = match (place, al) {
        (Place::Affine { .. }, Alpha::Finite(x)) => classify_rationality(ctx, x)
            .map(|c| c.as_str())
            .unwrap_or("invalid"),
        _ => "boundary",
    };
    serde_json::json!({
        "variant": place.variant(),
        "a": lit(a),
        "b": lit(b),
        "field": place.field(ctx).descriptor(),
        "alpha": al.to_string(),
        "rationality_class": class,
    })
}

/// Parses the JSON place schema (only `variant`, `a` and `b` are read).
pub fn parse_place(ctx: &CurveContext, v: &serde_json::Value) -> Result<Place> {
    let variant = v
        .get("variant")
        .and_then(|x| x.as_str())
        .ok_or_else(|| Error::Parse("place needs a \"variant\"".into()))?;
    let coord = |k: &str| -> Result<Fel> {
        let s = v
            .get(k)
            .and_then(|x| x.as_str())
            .ok_or_else(|| Error::Parse(format!("place needs \"{k}\"")))?;
        Fel::parse(s)
    };
    match variant {
        "infinity" => Ok(Place::Infinity),
        "origin" => Ok(Place::Origin),
        "zero_branch" => ctx.zero_branch(coord("a")?),
        "affine" => ctx.affine(coord("a")?, coord("b")?),
        other => Err(Error::Parse(format!("unknown place variant {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn context_constants() {
        for (q, m, big_m, g) in [(4, 1, 5, 2), (7, 2, 16, 7), (13, 4, 56, 26)] {
            let c = make_context(q).unwrap();
            assert_eq!((c.m, c.big_m, c.genus), (m, big_m, g));
            assert!(c.zeta().in_subfield(c.e).unwrap());
        }
        assert!(matches!(make_context(10), Err(Error::NotPrimePower(10))));
        assert!(matches!(make_context(5), Err(Error::BadResidue(5, _))));
        assert!(make_context(1).is_err());
    }

    #[test]
    fn census_reconciles() {
        let c = curve_census(&make_context(7).unwrap()).unwrap();
        assert!(c.reconciles, "{c:?}");
        assert_eq!(c.special, 32);
        assert_eq!(c.by_p_order, vec![(1, 16, 16), (3, 32, 32), (7, 64, 64)]);
        let c = curve_census(&make_context(4).unwrap()).unwrap();
        assert!(c.reconciles, "{c:?}");
        assert_eq!((c.o_inf, c.o_zero, c.special), (2, 1, 10));
        assert_eq!(c.by_p_order, vec![(4, 20, 20)]);
    }

    #[test]
    fn rational_counts() {
        for (q, n) in [(4, 33), (7, 148)] {
            let ctx = make_context(q).unwrap();
            assert_eq!(enumerate_rational_places(&ctx).len(), n);
            assert_eq!(ctx.zero_branches().len() as u64, ctx.m);
        }
    }

    #[test]
    fn fibres_partition_rational_places() {
        let ctx = make_context(7).unwrap();
        let fib = fibres_of_degree(&ctx, 1).unwrap();
        let total: usize = fib.iter().map(|f| f.places.len()).sum();
        assert_eq!(total as u64 + 2 + ctx.m, 148);
        assert_eq!(fib.len() as u64, ctx.q + 2);
        for f in &fib {
            assert!(classify_rationality(&ctx, f.alpha).unwrap().is_rational());
            assert_eq!(f.places.len() as u64, ctx.big_m);
        }
    }

    #[test]
    fn lifts_and_alpha() {
        let ctx = make_context(7).unwrap();
        for p in enumerate_rational_places(&ctx)
            .iter()
            .filter(|p| !p.is_boundary())
        {
            let lift = hermitian_lift(&ctx, p).unwrap();
            let z = ctx.zeta_in(lift.field()).unwrap();
            for l in lift.orbit(z) {
                assert!(l.satisfies(ctx.q));
            }
            let al = ctx
                .transport(alpha(&ctx, p).finite().unwrap(), lift.field())
                .unwrap();
            assert_eq!(lift.a_big.pow(ctx.q - 1) + 1, al);
        }
    }

    #[test]
    fn places_with_alpha_moves_to_smallest_field() {
        let ctx = make_context(7).unwrap();
        let f2 = ctx.ext(2).unwrap();
        let two = f2.int(2);
        let fib = places_with_alpha(&ctx, two).unwrap();
        assert_eq!(fib.degree, 1);
        assert_eq!(fib.places.len(), 16);
        assert!(fib
            .places
            .iter()
            .all(|p| std::ptr::eq(p.field(&ctx), ctx.base())));
    }

    #[test]
    fn json_round_trip() {
        let ctx = make_context(7).unwrap();
        for p in enumerate_rational_places(&ctx).iter().step_by(11) {
            let j = place_json(&ctx, p);
            assert_eq!(parse_place(&ctx, &j).unwrap(), *p);
        }
    }
}
