//! Power series in the local parameter `T = (v - B)/B` at an affine place,
//! truncated modulo `T^N` (the pipeline uses `N = q`).

use crate::curve::{alpha, hermitian_lift, Alpha, CurveContext, HermitianLift, Place};
use crate::error::{Error, Result};
use crate::field::{Fel, Field};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// `sum c_k T^k mod T^N`, stored densely.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncSeries {
    field: Field,
    coeffs: Vec<Fel>,
}

impl TruncSeries {
    pub fn zero(field: Field, n: usize) -> TruncSeries {
        assert!(n > 0, "truncation order must be positive");
        TruncSeries {
            field,
            coeffs: vec![field.zero(); n],
        }
    }

    pub fn constant(c: Fel, n: usize) -> TruncSeries {
        let mut s = TruncSeries::zero(c.field(), n);
        s.coeffs[0] = c;
        s
    }

    pub fn one(field: Field, n: usize) -> TruncSeries {
        TruncSeries::constant(field.one(), n)
    }

    /// `c T^k` (zero if `k >= n`).
    pub fn monomial(c: Fel, k: usize, n: usize) -> TruncSeries {
        let mut s = TruncSeries::zero(c.field(), n);
        if k < n {
            s.coeffs[k] = c;
        }
        s
    }

    /// From low-order coefficients; extra coefficients beyond `n` are dropped.
    pub fn from_coeffs(field: Field, n: usize, c: &[Fel]) -> TruncSeries {
        let mut s = TruncSeries::zero(field, n);
        for (k, &x) in c.iter().enumerate().take(n) {
            s.coeffs[k] = x;
        }
        s
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// The truncation order N.
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, k: usize) -> Fel {
        self.coeffs.get(k).copied().unwrap_or(self.field.zero())
    }

    pub fn coeffs(&self) -> &[Fel] {
        &self.coeffs
    }

    /// Least exponent with a nonzero coefficient, `None` if the series is
    /// zero modulo `T^N`.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    fn check(&self, o: &TruncSeries) -> Result<()> {
        if !std::ptr::eq(self.field, o.field) {
            return Err(Error::FieldMismatch(
                self.field.descriptor(),
                o.field.descriptor(),
            ));
        }
        if self.order() != o.order() {
            return Err(Error::Series(format!(
                "mixed truncations {} and {}",
                self.order(),
                o.order()
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, o: &TruncSeries) -> Result<TruncSeries> {
        self.check(o)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&o.coeffs)
            .map(|(&a, &b)| a + b)
            .collect();
        Ok(TruncSeries {
            field: self.field,
            coeffs,
        })
    }

    pub fn checked_mul(&self, o: &TruncSeries) -> Result<TruncSeries> {
        self.check(o)?;
        let n = self.order();
        let mut out = vec![self.field.zero(); n];
        let (va, vb) = match (self.valuation(), o.valuation()) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Ok(TruncSeries {
                    field: self.field,
                    coeffs: out,
                })
            }
        };
        for i in va..n {
            let x = self.coeffs[i];
            if x.is_zero() {
                continue;
            }
            for j in vb..n - i {
                out[i + j] += x * o.coeffs[j];
            }
        }
        Ok(TruncSeries {
            field: self.field,
            coeffs: out,
        })
    }

    pub fn scale(&self, c: Fel) -> TruncSeries {
        TruncSeries {
            field: self.field,
            coeffs: self.coeffs.iter().map(|&x| x * c).collect(),
        }
    }

    /// Inverse of a unit (nonzero constant term).
    pub fn inv(&self) -> Result<TruncSeries> {
        let c0 = self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::Series(
                "inverting a series without constant term".into(),
            ));
        }
        let n = self.order();
        let i0 = c0.inv()?;
        let mut out = vec![self.field.zero(); n];
        out[0] = i0;
        for k in 1..n {
            let mut acc = self.field.zero();
            for j in 1..=k {
                acc += self.coeffs[j] * out[k - j];
            }
            out[k] = -acc * i0;
        }
        Ok(TruncSeries {
            field: self.field,
            coeffs: out,
        })
    }

    pub fn pow(&self, mut e: u64) -> TruncSeries {
        let mut acc = TruncSeries::one(self.field, self.order());
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        acc
    }
}

impl fmt::Debug for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("{:?}*T^{k}", c))
            .collect();
        if terms.is_empty() {
            write!(f, "O(T^{})", self.order())
        } else {
            write!(f, "{} + O(T^{})", terms.join(" + "), self.order())
        }
    }
}

impl Add for &TruncSeries {
    type Output = TruncSeries;
    fn add(self, o: &TruncSeries) -> TruncSeries {
        self.checked_add(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for &TruncSeries {
    type Output = TruncSeries;
    fn sub(self, o: &TruncSeries) -> TruncSeries {
        self + &(-o)
    }
}

impl Mul for &TruncSeries {
    type Output = TruncSeries;
    fn mul(self, o: &TruncSeries) -> TruncSeries {
        self.checked_mul(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &TruncSeries {
    type Output = TruncSeries;
    fn neg(self) -> TruncSeries {
        TruncSeries {
            field: self.field,
            coeffs: self.coeffs.iter().map(|&x| -x).collect(),
        }
    }
}

/// The three primitive expansions at an affine place.
#[derive(Debug, Clone)]
pub struct Basics {
    pub alpha: Fel,
    /// `x/a - 1`
    pub x_a: TruncSeries,
    /// `y/b - 1`
    pub y_b: TruncSeries,
    /// `-t_P / a = (1+alpha) y_b - 3 x_a`
    pub f0: TruncSeries,
}

/// Closed-form expansions, which depend only on alpha:
/// `x_a = (alpha+1)T + alpha T^2`, `y_b = 3T + 3T^2 + T^3`,
/// `f0 = 3T^2 + (alpha+1)T^3`.
pub fn basics_for_alpha(alpha: Fel, n: usize) -> Basics {
    let f = alpha.field();
    let x_a = TruncSeries::from_coeffs(f, n, &[f.zero(), alpha + 1, alpha]);
    let y_b = TruncSeries::from_coeffs(f, n, &[f.zero(), f.int(3), f.int(3), f.one()]);
    let f0 = &y_b.scale(alpha + 1) - &x_a.scale(f.int(3));
    Basics {
        alpha,
        x_a,
        y_b,
        f0,
    }
}

/// Expansions at an affine place, truncated at `T^q`.
pub fn expand_basics(ctx: &CurveContext, place: &Place) -> Result<Basics> {
    match alpha(ctx, place) {
        Alpha::Finite(a) if !place.is_boundary() => Ok(basics_for_alpha(a, ctx.q as usize)),
        _ => Err(Error::ExcludedPoint(format!(
            "no local expansion at {}",
            place.variant()
        ))),
    }
}

/// `x_a` and `y_b` from the Hermitian relation at a lift `(A, B)`, without
/// using alpha: with `w = v - B = B T` and `s = u - A`, the cover equation
/// gives `s^q + s = B^q w + B w^q + w^(q+1)`, so `s = B^q w + B w^q + w^(q+1)`
/// modulo `T^q` (`s^q` has valuation at least q). Then
/// `x_a = (A w + B s + s w) / (A B)` and `y_b = (1 + T)^3 - 1`.
pub fn basics_from_lift(q: u64, lift: &HermitianLift) -> (TruncSeries, TruncSeries) {
    let f = lift.field();
    let n = q as usize;
    let (a, b) = (lift.a_big, lift.b_big);
    let w = TruncSeries::monomial(b, 1, n);
    let s = &(&w.scale(b.pow(q)) + &w.pow(q).scale(b)) + &w.pow(q + 1);
    let num = &(&w.scale(a) + &s.scale(b)) + &(&s * &w);
    let x_a = num.scale((a * b).inv().expect("lift coordinates are nonzero"));
    let one_t = TruncSeries::from_coeffs(f, n, &[f.one(), f.one()]);
    let y_b = &one_t.pow(3) - &TruncSeries::one(f, n);
    (x_a, y_b)
}

/// Cross-checks the closed forms against [`basics_from_lift`] at the
/// canonical lift. Returns an error if the lift is unavailable.
pub fn check_basics_against_lift(ctx: &CurveContext, place: &Place) -> Result<bool> {
    let lift = hermitian_lift(ctx, place)?;
    let al = alpha(ctx, place).finite().expect("affine");
    let al = ctx.transport(al, lift.field())?;
    let closed = basics_for_alpha(al, ctx.q as usize);
    let (x_a, y_b) = basics_from_lift(ctx.q, &lift);
    Ok(x_a == closed.x_a && y_b == closed.y_b)
}

/// The curve polynomial evaluated at `x = a(1 + x_a)`, `y = b(1 + y_b)`
/// with the closed-form expansions for the given alpha. Zero exactly when
/// the expansions are consistent with `(a, b)` lying on the curve.
pub fn residual_at(ctx: &CurveContext, a: Fel, b: Fel, alpha: Fel) -> TruncSeries {
    let n = ctx.q as usize;
    let bs = basics_for_alpha(alpha, n);
    let one = TruncSeries::one(a.field(), n);
    let x = (&one + &bs.x_a).scale(a);
    let y = (&one + &bs.y_b).scale(b);
    &(&x.pow(ctx.q) + &(&x * &y.pow(ctx.m))) - &y.pow((2 * ctx.q + 1) / 3)
}

/// [`residual_at`] for an affine place.
pub fn curve_residual(ctx: &CurveContext, place: &Place) -> Result<TruncSeries> {
    match (place, alpha(ctx, place)) {
        (Place::Affine { a, b }, Alpha::Finite(al)) => Ok(residual_at(ctx, *a, *b, al)),
        _ => Err(Error::ExcludedPoint(format!(
            "no local expansion at {}",
            place.variant()
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{enumerate_rational_places, make_context};
    use crate::field::gf;

    #[test]
    fn unit_inverse_and_powers() {
        let f = gf(7, 2).unwrap();
        let one_t = TruncSeries::from_coeffs(f, 7, &[f.one(), f.one()]);
        assert_eq!(&one_t * &one_t.inv().unwrap(), TruncSeries::one(f, 7));
        let y = TruncSeries::from_coeffs(f, 13, &[f.zero(), f.int(3), f.int(3), f.one()]);
        let f13 = gf(13, 2).unwrap();
        let y13 =
            TruncSeries::from_coeffs(f13, 13, &[f13.zero(), f13.int(3), f13.int(3), f13.one()]);
        let want: Vec<Fel> = [0, 0, 9, 18, 15, 6, 1]
            .iter()
            .map(|&k| f13.int(k))
            .collect();
        assert_eq!(&y13 * &y13, TruncSeries::from_coeffs(f13, 13, &want));
        assert_eq!(y.pow(2).valuation(), Some(2));
        assert!(TruncSeries::zero(f, 7).inv().is_err());
    }

    #[test]
    fn rational_places_q7() {
        let ctx = make_context(7).unwrap();
        for p in enumerate_rational_places(&ctx)
            .iter()
            .filter(|p| !p.is_boundary())
        {
            assert!(curve_residual(&ctx, p).unwrap().is_zero());
            assert!(check_basics_against_lift(&ctx, p).unwrap());
            let b = expand_basics(&ctx, p).unwrap();
            assert_eq!(b.f0.valuation(), Some(2));
            assert_eq!(b.f0.coeff(2), ctx.base().int(3));
            assert_eq!(b.f0.coeff(3), b.alpha + 1);
        }
    }
}
