//! The P-order i and Q-order K of an alpha value.
//!
//! With `beta = (alpha + zeta) / (alpha + zeta^2)`, the P-order is
//! `ord(beta^3) - 1` and the Q-order is the smallest `K >= 1` with
//! `beta^(3K+2) = zeta` (infinite if none). Both are also checked against
//! the polynomial families: `P_{i+1}(alpha) = 0` and `Q_{K+1}(1 - alpha) = 0`.

use crate::curve::{alpha, classify_rationality, Alpha, CurveContext, Place, Rationality};
use crate::error::{Error, Result};
use crate::field::Fel;
use num_integer::Integer;
use serde::Serialize;

/// `(alpha + zeta) / (alpha + zeta^2)`.
pub fn beta(ctx: &CurveContext, alpha: Fel) -> Result<Fel> {
    let z = ctx.zeta_in(alpha.field())?;
    admissible(alpha, z)?;
    Ok((alpha + z) / (alpha + z * z))
}

fn admissible(alpha: Fel, z: Fel) -> Result<()> {
    if alpha.is_zero() || alpha.is_one() || (alpha + z).is_zero() || (alpha + z * z).is_zero() {
        return Err(Error::ExcludedPoint(format!(
            "alpha = {alpha} is outside the order domain"
        )));
    }
    Ok(())
}

/// `ord(beta^3) - 1`.
pub fn p_order(ctx: &CurveContext, alpha: Fel) -> Result<u64> {
    Ok(beta(ctx, alpha)?.pow(3).mult_order()? - 1)
}

/// Smallest `K >= 1` with `beta^(3K+2) = zeta`, found by solving the
/// exponent congruence when discrete logarithms are available and by a
/// direct scan over `1..=i+1` otherwise.
pub fn q_order_search(ctx: &CurveContext, alpha: Fel) -> Result<Option<u64>> {
    let b = beta(ctx, alpha)?;
    let z = ctx.zeta_in(alpha.field())?;
    if let (Some(lb), Some(lz)) = (b.log(), z.log()) {
        // lb (3K + 2) = lz  (mod n)
        let n = alpha.field().order() - 1;
        let a = (3 * lb as u128 % n as u128) as u64;
        let rhs = ((lz as i128 - 2 * lb as i128).rem_euclid(n as i128)) as u64;
        return Ok(smallest_positive_solution(a, rhs, n));
    }
    let i = b.pow(3).mult_order()? - 1;
    let b3 = b.pow(3);
    let mut cur = b.pow(5);
    for k in 1..=i + 1 {
        if cur == z {
            return Ok(Some(k));
        }
        cur *= b3;
    }
    Ok(None)
}

/// Smallest `k >= 1` with `a k = r (mod n)`.
fn smallest_positive_solution(a: u64, r: u64, n: u64) -> Option<u64> {
    let g = a.gcd(&n);
    if r % g != 0 {
        return None;
    }
    let (a, r, n) = (a / g, r / g, n / g);
    if n == 1 {
        return Some(1);
    }
    let inv = mod_inverse(a % n, n);
    let k = (r as u128 * inv as u128 % n as u128) as u64;
    Some(if k == 0 { n } else { k })
}

fn mod_inverse(a: u64, n: u64) -> u64 {
    let e = (a as i128).extended_gcd(&(n as i128));
    e.x.rem_euclid(n as i128) as u64
}

/// The closed form: infinite if `3 | i+1`; `2i/3` if `i+1 = 1 (mod 3)` and
/// `beta^(i+1) = zeta^2`; `(i-1)/3` if `i+1 = 2 (mod 3)` and
/// `beta^(i+1) = zeta`; infinite otherwise. The value 0 (alpha = 2 only) is
/// reported as `i+1`, the smallest positive solution.
pub fn q_order_closed(ctx: &CurveContext, alpha: Fel, i: u64) -> Result<Option<u64>> {
    let b = beta(ctx, alpha)?;
    let z = ctx.zeta_in(alpha.field())?;
    let eta = b.pow(i + 1);
    let k = match (i + 1) % 3 {
        1 if eta == z * z => Some(2 * i / 3),
        2 if eta == z => Some((i - 1) / 3),
        _ => None,
    };
    Ok(k.map(|k| if k == 0 { i + 1 } else { k }))
}

/// Order data of one alpha value.
#[derive(Debug, Clone, Serialize)]
pub struct OrderProfile {
    pub alpha: Fel,
    pub beta: Fel,
    pub ord_beta: u64,
    pub i: u64,
    /// `None` is an infinite Q-order.
    #[serde(rename = "K")]
    pub k: Option<u64>,
    #[serde(rename = "K_closed")]
    pub k_closed: Option<u64>,
    pub class: Rationality,
    /// Failed cross-checks, empty when consistent.
    pub issues: Vec<String>,
}

impl OrderProfile {
    pub fn consistent(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Computes both orders and cross-checks them against each other, against
/// the polynomial families, against the range `1 <= K <= i+1`, against the
/// K-to-i correspondence and against the rationality criterion
/// `beta^(q+1) = zeta`. `check_polys` bounds the index up to which the
/// polynomial nonvanishing checks run (they cost O(i) evaluations).
pub fn alpha_profile(ctx: &CurveContext, alpha: Fel, check_polys: u64) -> Result<OrderProfile> {
    let class = classify_rationality(ctx, alpha)?;
    if class == Rationality::Special {
        return Err(Error::ExcludedPoint(format!("alpha = {alpha} is special")));
    }
    let b = beta(ctx, alpha)?;
    let z = ctx.zeta_in(alpha.field())?;
    let ord_beta = b.mult_order()?;
    let i = b.pow(3).mult_order()? - 1;
    let k = q_order_search(ctx, alpha)?;
    let k_closed = q_order_closed(ctx, alpha, i)?;
    let mut issues = Vec::new();
    if k != k_closed {
        issues.push(format!("search K = {k:?} but closed form K = {k_closed:?}"));
    }
    if i == 0 {
        issues.push("P-order 0".into());
    }
    if (i + 1) % ctx.p == 0 {
        issues.push("i+1 is divisible by p".into());
    }
    let pf = ctx.family(alpha.field())?;
    if !pf.eval_p(i as i64 + 1, alpha)?.is_zero() {
        issues.push(format!("P_{}(alpha) != 0", i + 1));
    }
    for j in 2..=i.min(check_polys) {
        if pf.eval_p(j as i64, alpha)?.is_zero() {
            issues.push(format!("P_{j}(alpha) = 0 below the P-order"));
        }
    }
    if let Some(kk) = k {
        if !(1..=i + 1).contains(&kk) {
            issues.push(format!("K = {kk} outside 1..=i+1"));
        }
        if kk != i + 1 || alpha != alpha.field().int(2) {
            if !pf.eval_q1m(kk as i64 + 1, alpha)?.is_zero() {
                issues.push(format!("Q_{}(1-alpha) != 0", kk + 1));
            }
            if pf.eval_r(kk as i64 + 1, alpha)?.is_zero() {
                issues.push(format!("R_{}(alpha) = 0 together with Q", kk + 1));
            }
        }
        for j in 1..kk.min(check_polys) {
            if pf.eval_q1m(j as i64 + 1, alpha)?.is_zero() {
                issues.push(format!("Q_{}(1-alpha) = 0 below the Q-order", j + 1));
            }
        }
        let ok = if kk % 2 == 0 {
            i == 3 * kk / 2 || i == 3 * kk + 1
        } else {
            i == 3 * kk + 1
        };
        if !ok && alpha != alpha.field().int(2) {
            issues.push(format!("K = {kk} does not match i = {i}"));
        }
    }
    let rational_by_beta = b.pow(ctx.q + 1) == z;
    if rational_by_beta != class.is_rational() {
        issues.push("beta^(q+1) = zeta disagrees with the rationality class".into());
    }
    if class.is_rational() && (ctx.q + 1) % (i + 1) != 0 {
        issues.push("rational place with i+1 not dividing q+1".into());
    }
    Ok(OrderProfile {
        alpha,
        beta: b,
        ord_beta,
        i,
        k,
        k_closed,
        class,
        issues,
    })
}

/// Profile of a place, or `None` where the orders are not defined (the
/// boundary places and special alpha).
pub fn profile(ctx: &CurveContext, place: &Place) -> Result<Option<OrderProfile>> {
    match alpha(ctx, place) {
        Alpha::Finite(a) if !place.is_boundary() => {
            if classify_rationality(ctx, a)? == Rationality::Special {
                return Ok(None);
            }
            alpha_profile(ctx, a, 64).map(Some)
        }
        _ => Ok(None),
    }
}

/// Place counts for one P-order, computed abstractly from the admissible
/// beta values `gamma^e` in a cyclic group `<gamma>` of order `3(i+1)` with
/// `zeta = gamma^(i+1)`: beta^3 has order i+1 exactly when gcd(e, i+1) = 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderCensus {
    pub q: u64,
    pub i: u64,
    pub betas: u64,
    pub places: u64,
    pub finite_k_places: u64,
    pub rational_places: u64,
    /// Distinct finite K values with their place counts.
    pub k_values: Vec<(u64, u64)>,
    pub expected_places: u64,
    pub expected_finite_k: u64,
    pub expected_rational: u64,
    /// Every finite K equals the closed form for its residue class.
    pub closed_form_agrees: bool,
}

impl OrderCensus {
    pub fn matches(&self) -> bool {
        self.places == self.expected_places
            && self.finite_k_places == self.expected_finite_k
            && self.rational_places == self.expected_rational
            && self.closed_form_agrees
    }
}

fn phi(n: u64) -> u64 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64
}

pub fn order_census(ctx: &CurveContext, i: u64) -> Result<OrderCensus> {
    if i == 0 || (i + 1).gcd(&ctx.q) != 1 {
        return Err(Error::ExcludedPoint(format!(
            "i = {i} needs i >= 1 and gcd(i+1, q) = 1"
        )));
    }
    let n = 3 * (i + 1);
    let zeta_exp = i + 1;
    let mut betas = 0;
    let mut finite = 0;
    let mut rational = 0;
    let mut ks: std::collections::BTreeMap<u64, u64> = Default::default();
    let mut agrees = true;
    for e in 0..n {
        if e.gcd(&(i + 1)) != 1 {
            continue;
        }
        betas += 1;
        // beta^(3K+2) = zeta  <=>  e(3K+2) = i+1 (mod 3(i+1))
        let k = (1..=i + 1).find(|k| (e * (3 * k + 2)) % n == zeta_exp);
        let eta = (e * (i + 1)) % n;
        let closed = match (i + 1) % 3 {
            1 if eta == 2 * zeta_exp => Some(2 * i / 3),
            2 if eta == zeta_exp => Some((i - 1) / 3),
            _ => None,
        }
        .map(|k| if k == 0 { i + 1 } else { k });
        agrees &= k == closed;
        if let Some(k) = k {
            finite += 1;
            *ks.entry(k).or_default() += 1;
        }
        if (e * (ctx.q + 1)) % n == zeta_exp {
            rational += 1;
        }
    }
    let big_m = ctx.big_m;
    let total = (ctx.q * ctx.q - 1) * phi(i + 1);
    Ok(OrderCensus {
        q: ctx.q,
        i,
        betas,
        places: betas * big_m,
        finite_k_places: finite * big_m,
        rational_places: rational * big_m,
        k_values: ks.into_iter().map(|(k, c)| (k, c * big_m)).collect(),
        expected_places: total,
        expected_finite_k: if (i + 1) % 3 == 0 { 0 } else { total / 3 },
        expected_rational: if (ctx.q + 1) % (i + 1) == 0 {
            total / 3
        } else {
            0
        },
        closed_form_agrees: agrees,
    })
}

/// Euler's totient, exposed for census tables.
pub fn totient(n: u64) -> u64 {
    phi(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::make_context;

    #[test]
    fn congruence_solver() {
        assert_eq!(smallest_positive_solution(3, 2, 7), Some(3));
        assert_eq!(smallest_positive_solution(2, 1, 4), None);
        assert_eq!(smallest_positive_solution(0, 0, 5), Some(1));
    }

    #[test]
    fn alpha_two() {
        let ctx = make_context(7).unwrap();
        let two = ctx.base().int(2);
        let z = ctx.zeta();
        let b = beta(&ctx, two).unwrap();
        assert_eq!(b.pow(ctx.q + 1), z);
        let prof = alpha_profile(&ctx, two, 64).unwrap();
        assert!(prof.consistent(), "{:?}", prof.issues);
        assert_eq!(prof.i, 1);
        assert_eq!(prof.k, Some(2));
    }

    #[test]
    fn census_q7_small_cases() {
        let ctx = make_context(7).unwrap();
        let c2 = order_census(&ctx, 2).unwrap();
        assert_eq!((c2.places, c2.finite_k_places), (96, 0));
        let c4 = order_census(&ctx, 4).unwrap();
        assert_eq!((c4.finite_k_places, c4.rational_places), (64, 0));
        assert_eq!(c4.k_values, vec![(1, 64)]);
        assert!(c4.matches());
    }

    #[test]
    fn profiles_over_gf49_and_gf2401() {
        let ctx = make_context(7).unwrap();
        for d in [1, 2] {
            let f = ctx.ext(d).unwrap();
            let z = ctx.zeta_in(f).unwrap();
            for a in f.elements().step_by(3) {
                if a.is_zero() || a.is_one() || (a * a - a + 1).is_zero() || (a + z).is_zero() {
                    continue;
                }
                let p = alpha_profile(&ctx, a, 64).unwrap();
                assert!(p.consistent(), "{a}: {:?}", p.issues);
            }
        }
    }
}
