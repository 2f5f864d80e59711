//! The polynomial families P_i, Q_i, Q_i(1-s) and R_i built from a primitive
//! cube root of unity zeta:
//!
//! ```text
//! P_i(s)      = ((s+zeta)^(3i) - (s+zeta^2)^(3i)) / (3(zeta-zeta^2) s (s-1))
//! Q_i(s)      = (((1-zeta)/3)(s+zeta)^(3i-1) + ((1-zeta^2)/3)(s+zeta^2)^(3i-1)) / (s-1)
//! Q_i(1-s)    = (-1)^i (((1-zeta)/3)(s+zeta^2)^(3i-1) + ((1-zeta^2)/3)(s+zeta)^(3i-1)) / s
//! R_i(s)      = (-1)^i ((2zeta+1)/3) ((s+zeta^2)^(3i-2) - (s+zeta)^(3i-2))
//! ```
//!
//! Values always come from these closed formulas. Dense coefficients are
//! only produced by [`interpolate_family`], for degree checks.

use crate::error::{Error, Result};
use crate::field::{Fel, Field};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Which family to evaluate or interpolate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    P,
    Q,
    /// `s -> Q_i(1-s)`.
    Q1m,
    R,
    /// The numerator `(s+zeta)^(3i) - (s+zeta^2)^(3i)` of `P_i`.
    PNum,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::P => "P",
            Family::Q => "Q",
            Family::Q1m => "Q1m",
            Family::R => "R",
            Family::PNum => "Pnum",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Family> {
        match s.to_ascii_lowercase().as_str() {
            "p" => Ok(Family::P),
            "q" => Ok(Family::Q),
            "q1m" => Ok(Family::Q1m),
            "r" => Ok(Family::R),
            "pnum" => Ok(Family::PNum),
            _ => Err(Error::Parse(format!("unknown family {s:?}"))),
        }
    }
}

/// The constants of the families in one field.
#[derive(Debug, Clone, Copy)]
pub struct PolyFamily {
    zeta: Fel,
    zeta2: Fel,
    /// `1 / (3 (zeta - zeta^2))`
    p_scale: Fel,
    /// `(1 - zeta) / 3`
    q_c1: Fel,
    /// `(1 - zeta^2) / 3`
    q_c2: Fel,
    /// `(2 zeta + 1) / 3`
    r_c: Fel,
}

fn sign(i: i64) -> i64 {
    if i.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn excluded(what: &str, s: Fel) -> Error {
    Error::ExcludedPoint(format!("{what} at s = {s}"))
}

impl PolyFamily {
    /// Families over the field of `zeta`, which must be a primitive cube
    /// root of unity in characteristic other than 3.
    pub fn new(zeta: Fel) -> Result<PolyFamily> {
        let f = zeta.field();
        if f.p() == 3 {
            return Err(Error::NoCubeRoot(f.order()));
        }
        if !(zeta * zeta + zeta + 1).is_zero() {
            return Err(Error::Internal(format!(
                "{zeta} is not a primitive cube root of unity"
            )));
        }
        let zeta2 = zeta * zeta;
        let inv3 = f.int(3).inv()?;
        Ok(PolyFamily {
            zeta,
            zeta2,
            p_scale: (f.int(3) * (zeta - zeta2)).inv()?,
            q_c1: (1 - zeta) * inv3,
            q_c2: (1 - zeta2) * inv3,
            r_c: (zeta * 2 + 1) * inv3,
        })
    }

    /// Families over `f` using the canonical cube root of unity of `f`.
    pub fn canonical(f: Field) -> Result<PolyFamily> {
        PolyFamily::new(f.cube_root_of_unity()?)
    }

    pub fn zeta(&self) -> Fel {
        self.zeta
    }

    pub fn field(&self) -> Field {
        self.zeta.field()
    }

    fn check(&self, s: Fel) -> Result<()> {
        if !std::ptr::eq(s.field(), self.field()) {
            return Err(Error::FieldMismatch(
                s.field().descriptor(),
                self.field().descriptor(),
            ));
        }
        Ok(())
    }

    fn shifted(&self, s: Fel, e: i64) -> Result<(Fel, Fel)> {
        let a = (s + self.zeta)
            .powi(e)
            .map_err(|_| excluded("s + zeta = 0", s))?;
        let b = (s + self.zeta2)
            .powi(e)
            .map_err(|_| excluded("s + zeta^2 = 0", s))?;
        Ok((a, b))
    }

    /// `(s+zeta)^(3i) - (s+zeta^2)^(3i)`.
    pub fn eval_pnum(&self, i: i64, s: Fel) -> Result<Fel> {
        self.check(s)?;
        let (a, b) = self.shifted(s, 3 * i)?;
        Ok(a - b)
    }

    /// `P_i(s)`, defined for `s` outside `{0, 1}`.
    pub fn eval_p(&self, i: i64, s: Fel) -> Result<Fel> {
        self.check(s)?;
        let den = s * (s - 1);
        if den.is_zero() {
            return Err(excluded("P needs s not in {0, 1}", s));
        }
        Ok(self.eval_pnum(i, s)? * self.p_scale / den)
    }

    /// `Q_i(s)`, defined for `s != 1`.
    pub fn eval_q(&self, i: i64, s: Fel) -> Result<Fel> {
        self.check(s)?;
        if (s - 1).is_zero() {
            return Err(excluded("Q needs s != 1", s));
        }
        let (a, b) = self.shifted(s, 3 * i - 1)?;
        Ok((self.q_c1 * a + self.q_c2 * b) / (s - 1))
    }

    /// `Q_i(1 - s)` through the reflected formula, defined for `s != 0`.
    pub fn eval_q1m(&self, i: i64, s: Fel) -> Result<Fel> {
        self.check(s)?;
        if s.is_zero() {
            return Err(excluded("Q(1-s) needs s != 0", s));
        }
        let (a, b) = self.shifted(s, 3 * i - 1)?;
        Ok((self.q_c1 * b + self.q_c2 * a) * sign(i) / s)
    }

    /// `R_i(s)`.
    pub fn eval_r(&self, i: i64, s: Fel) -> Result<Fel> {
        self.check(s)?;
        let (a, b) = self.shifted(s, 3 * i - 2)?;
        Ok(self.r_c * (b - a) * sign(i))
    }

    pub fn eval(&self, fam: Family, i: i64, s: Fel) -> Result<Fel> {
        match fam {
            Family::P => self.eval_p(i, s),
            Family::Q => self.eval_q(i, s),
            Family::Q1m => self.eval_q1m(i, s),
            Family::R => self.eval_r(i, s),
            Family::PNum => self.eval_pnum(i, s),
        }
    }

    /// Checks the four product identities at `(i, j, l, s)`:
    ///
    /// ```text
    /// P_i P_{l+j} - P_j P_{l+i} = (s^2-s+1)^(3j) P_{i-j} P_l
    /// P_i Q_{l+j} - P_j Q_{l+i} = (s^2-s+1)^(3j) P_{i-j} Q_l
    /// Q_i(1-s) Q_{j+l}(1-s) - Q_j(1-s) Q_{i+l}(1-s)
    ///     =  9 (-1)^(i+j+l) (s-1)^2 (s^2-s+1)^(3j-1) P_{i-j} P_l
    /// Q_i(1-s) R_{j+l} - Q_j(1-s) R_{i+l}
    ///     = -3 (-1)^(i+j+l) (s-1)^2 (s^2-s+1)^(3j-1) P_{i-j} Q_l
    /// ```
    ///
    /// Returns `Ok(false)` if any of them fails, and an error when `s` is an
    /// excluded point.
    pub fn check_identities(&self, i: i64, j: i64, l: i64, s: Fel) -> Result<bool> {
        let w = s * s - s + 1;
        if w.is_zero() {
            return Err(excluded("s^2 - s + 1 = 0", s));
        }
        let p = |k| self.eval_p(k, s);
        let q = |k| self.eval_q(k, s);
        let qm = |k| self.eval_q1m(k, s);
        let r = |k| self.eval_r(k, s);
        let w3j = w.powi(3 * j)?;
        let w3j1 = w.powi(3 * j - 1)?;
        let sg = sign(i + j + l);
        let s1sq = (s - 1).square();

        let id1 = p(i)? * p(l + j)? - p(j)? * p(l + i)? == w3j * p(i - j)? * p(l)?;
        let id2 = p(i)? * q(l + j)? - p(j)? * q(l + i)? == w3j * p(i - j)? * q(l)?;
        let id3 =
            qm(i)? * qm(j + l)? - qm(j)? * qm(i + l)? == w3j1 * s1sq * p(i - j)? * p(l)? * (9 * sg);
        let id4 =
            qm(i)? * r(j + l)? - qm(j)? * r(i + l)? == w3j1 * s1sq * p(i - j)? * q(l)? * (-3 * sg);
        Ok(id1 && id2 && id3 && id4)
    }
}

/// A polynomial recovered by interpolation, little-endian.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Interpolated {
    pub family: Family,
    pub i: i64,
    pub coeffs: Vec<Fel>,
}

impl Interpolated {
    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn leading(&self) -> Option<Fel> {
        self.degree().map(|d| self.coeffs[d])
    }

    pub fn eval(&self, s: Fel) -> Fel {
        self.coeffs
            .iter()
            .rev()
            .fold(s.field().zero(), |acc, &c| acc * s + c)
    }
}

/// The a priori degree bound of a family at index `i >= 1`.
pub fn degree_bound(fam: Family, i: i64) -> usize {
    let i = i as usize;
    match fam {
        Family::P => 3 * i - 3,
        Family::Q | Family::Q1m | Family::R => 3 * i - 2,
        Family::PNum => 3 * i - 1,
    }
}

/// Recovers the coefficients of a family member by Newton interpolation at
/// the first admissible nodes in canonical order, then confirms the result
/// at one more node.
pub fn interpolate_family(fam: &PolyFamily, which: Family, i: i64) -> Result<Interpolated> {
    if i < 1 {
        return Err(Error::DegreeMismatch(format!(
            "interpolation needs i >= 1, got {i}"
        )));
    }
    let f = fam.field();
    let need = degree_bound(which, i) + 2;
    let mut xs = Vec::with_capacity(need);
    let mut ys = Vec::with_capacity(need);
    for s in f.elements() {
        if xs.len() == need {
            break;
        }
        if let Ok(v) = fam.eval(which, i, s) {
            xs.push(s);
            ys.push(v);
        }
    }
    if xs.len() < need {
        return Err(Error::DegreeMismatch(format!(
            "{f} has only {} admissible nodes, {need} needed",
            xs.len()
        )));
    }
    let (check_x, check_y) = (xs.pop().unwrap(), ys.pop().unwrap());
    let coeffs = newton(&xs, &ys);
    let out = Interpolated {
        family: which,
        i,
        coeffs,
    };
    if out.eval(check_x) != check_y {
        return Err(Error::Internal(format!(
            "{which}_{i} is not a polynomial of degree <= {}",
            degree_bound(which, i)
        )));
    }
    Ok(out)
}

/// Monomial coefficients of the interpolating polynomial through `(xs, ys)`.
fn newton(xs: &[Fel], ys: &[Fel]) -> Vec<Fel> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for k in 1..n {
        for t in (k..n).rev() {
            dd[t] = (dd[t] - dd[t - 1]) / (xs[t] - xs[t - k]);
        }
    }
    // Horner on the Newton form: c(s) = dd[n-1]; c = c*(s - x_k) + dd[k]
    let z = xs[0].field().zero();
    let mut c = vec![z; n];
    for k in (0..n).rev() {
        // c <- c * (s - x_k) + dd[k]
        let mut next = vec![z; n];
        for d in 0..n {
            if c[d].is_zero() {
                continue;
            }
            if d + 1 < n {
                next[d + 1] += c[d];
            }
            next[d] -= c[d] * xs[k];
        }
        next[0] += dd[k];
        c = next;
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::gf;

    fn fam(p: u64, n: u32) -> PolyFamily {
        PolyFamily::canonical(gf(p, n).unwrap()).unwrap()
    }

    #[test]
    fn small_members() {
        let pf = fam(7, 2);
        let f = pf.field();
        for s in f.elements().filter(|s| !s.is_zero() && !s.is_one()) {
            assert!(pf.eval_p(1, s).unwrap().is_one());
            assert!(pf.eval_p(0, s).unwrap().is_zero());
            assert_eq!(pf.eval_q(1, s).unwrap(), s + 1);
            assert_eq!(pf.eval_r(1, s).unwrap(), f.int(-1));
            let r2 = s.pow(3) * 4 - s.square() * 6 + 1;
            assert_eq!(pf.eval_r(2, s).unwrap(), r2);
            let q2m = s.pow(4) - s.pow(3) * 5 + s * 10 - 5;
            assert_eq!(pf.eval_q1m(2, s).unwrap(), q2m);
            assert_eq!(pf.eval_q1m(3, s).unwrap(), pf.eval_q(3, 1 - s).unwrap());
        }
        assert!(pf.eval_q1m(1, f.int(2)).unwrap().is_zero());
        assert!(pf.eval_p(2, f.zero()).is_err());
        assert!(pf.eval_q(2, f.one()).is_err());
    }

    #[test]
    fn p2q1_minus_q2() {
        let pf = fam(13, 2);
        for s in pf.field().elements().skip(2).step_by(7) {
            let w = s * s - s + 1;
            if s.is_one() || w.is_zero() {
                continue;
            }
            let lhs =
                pf.eval_p(2, s).unwrap() * pf.eval_q(1, s).unwrap() - pf.eval_q(2, s).unwrap();
            assert_eq!(lhs, w.square());
            assert_eq!(pf.eval_q(0, s).unwrap(), w.inv().unwrap());
        }
    }

    #[test]
    fn identities_on_a_grid() {
        let pf = fam(7, 2);
        let s = pf.field().from_coeffs(&[3, 5]).unwrap();
        for i in -3..6 {
            for j in -3..6 {
                for l in -2..5 {
                    assert!(pf.check_identities(i, j, l, s).unwrap(), "({i},{j},{l})");
                }
            }
        }
    }

    #[test]
    fn interpolated_leading_coefficients() {
        let pf = fam(7, 2);
        let z = pf.zeta();
        let q1 = interpolate_family(&pf, Family::Q, 1).unwrap();
        assert_eq!(q1.coeffs, vec![pf.field().one(), pf.field().one()]);
        let p2 = interpolate_family(&pf, Family::P, 2).unwrap();
        assert_eq!(p2.degree(), Some(3));
        assert_eq!(p2.leading(), Some(pf.field().int(2)));
        let n2 = interpolate_family(&pf, Family::PNum, 2).unwrap();
        assert_eq!(n2.leading(), Some((z - z * z) * 6));
    }
}
