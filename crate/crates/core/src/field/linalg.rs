//! Subfield embeddings GF(p^s) -> GF(p^n) and their partial inverses.

use super::{gfp, Fel, Field};
use crate::error::{Error, Result};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// Sub fields up to this order get a full lookup table in both directions.
const LOOKUP_LIMIT: u64 = 1 << 16;

/// A ring embedding sending the root `z` of `sub`'s modulus to the smallest
/// root of that modulus in `sup`.
pub struct Embedding {
    sub: Field,
    sup: Field,
    powers: Vec<Fel>,
    forward: Option<Vec<Fel>>,
    backward: Option<HashMap<u64, u64>>,
    pivots: Vec<usize>,
    pivot_inv: Vec<Vec<u64>>,
}

fn registry() -> &'static Mutex<HashMap<(usize, usize), &'static Embedding>> {
    static R: OnceLock<Mutex<HashMap<(usize, usize), &'static Embedding>>> = OnceLock::new();
    R.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The canonical embedding of `sub` into `sup` (cached).
pub fn embed(sub: Field, sup: Field) -> Result<&'static Embedding> {
    if sub.p() != sup.p() || sup.n() % sub.n() != 0 {
        return Err(Error::NoEmbedding(sub.p(), sub.n(), sup.n()));
    }
    let key = (sub as *const _ as usize, sup as *const _ as usize);
    if let Some(e) = registry().lock().unwrap().get(&key) {
        return Ok(e);
    }
    let e: &'static Embedding = Box::leak(Box::new(Embedding::build(sub, sup)?));
    registry().lock().unwrap().insert(key, e);
    Ok(e)
}

impl Embedding {
    fn build(sub: Field, sup: Field) -> Result<Embedding> {
        let s = sub.n() as usize;
        let root = if std::ptr::eq(sub, sup) {
            sup.gen_root()
        } else if s == 1 {
            sup.zero()
        } else {
            let poly: Vec<Fel> = sub.modulus().iter().map(|&c| sup.int(c as i64)).collect();
            *sup.roots_of(&poly)
                .first()
                .ok_or_else(|| Error::Internal("sub-field modulus has no root".into()))?
        };
        let mut powers = Vec::with_capacity(s);
        let mut cur = sup.one();
        for _ in 0..s {
            powers.push(cur);
            cur *= root;
        }
        let (pivots, pivot_inv) = pivot_system(&powers, sup.p())?;
        let mut e = Embedding {
            sub,
            sup,
            powers,
            forward: None,
            backward: None,
            pivots,
            pivot_inv,
        };
        if sub.order() <= LOOKUP_LIMIT {
            let fwd: Vec<Fel> = (0..sub.order())
                .map(|h| e.map_slow(Fel { f: sub, h }))
                .collect();
            let bwd = fwd
                .iter()
                .enumerate()
                .map(|(h, y)| (y.h, h as u64))
                .collect();
            e.forward = Some(fwd);
            e.backward = Some(bwd);
        }
        Ok(e)
    }

    pub fn sub(&self) -> Field {
        self.sub
    }
    pub fn sup(&self) -> Field {
        self.sup
    }

    fn map_slow(&self, x: Fel) -> Fel {
        x.coeffs()
            .iter()
            .zip(&self.powers)
            .fold(self.sup.zero(), |acc, (&c, &r)| {
                acc + r * self.sup.int(c as i64)
            })
    }

    /// Image of an element of `sub`.
    pub fn map(&self, x: Fel) -> Result<Fel> {
        if !std::ptr::eq(x.field(), self.sub) {
            return Err(Error::FieldMismatch(
                x.field().descriptor(),
                self.sub.descriptor(),
            ));
        }
        Ok(match &self.forward {
            Some(t) => t[x.h as usize],
            None => self.map_slow(x),
        })
    }

    /// Image, panicking on a field mismatch.
    pub fn apply(&self, x: Fel) -> Fel {
        self.map(x).unwrap_or_else(|e| panic!("{e}"))
    }

    /// The element of `sub` mapping to `y`, if `y` lies in the image.
    pub fn preimage(&self, y: Fel) -> Option<Fel> {
        if !std::ptr::eq(y.field(), self.sup) {
            return None;
        }
        if let Some(b) = &self.backward {
            return b.get(&y.h).map(|&h| Fel { f: self.sub, h });
        }
        let p = self.sup.p();
        let yc = y.coeffs();
        let rhs: Vec<u64> = self.pivots.iter().map(|&r| yc[r]).collect();
        let c: Vec<u64> = self
            .pivot_inv
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&rhs)
                    .fold(0, |acc, (&a, &b)| (acc + gfp::mulmod(a, b, p)) % p)
            })
            .collect();
        let x = self.sub.from_coeffs(&c).ok()?;
        (self.map_slow(x) == y).then_some(x)
    }
}

/// Picks `s` rows of the `n x s` coefficient matrix of `powers` forming an
/// invertible block and returns them with the block's inverse (mod p).
fn pivot_system(powers: &[Fel], p: u64) -> Result<(Vec<usize>, Vec<Vec<u64>>)> {
    let s = powers.len();
    let cols: Vec<Vec<u64>> = powers.iter().map(|x| x.coeffs()).collect();
    let n = cols[0].len();
    // rows of the matrix: row r = (cols[0][r], ..., cols[s-1][r])
    let rows: Vec<Vec<u64>> = (0..n)
        .map(|r| cols.iter().map(|c| c[r]).collect())
        .collect();
    // greedy independent row selection by elimination
    let mut basis: Vec<Vec<u64>> = Vec::new();
    let mut lead: Vec<usize> = Vec::new();
    let mut pivots = Vec::new();
    for (r, row) in rows.iter().enumerate() {
        let mut v = row.clone();
        for (b, &l) in basis.iter().zip(&lead) {
            if v[l] != 0 {
                let c = v[l];
                for k in 0..s {
                    v[k] = (v[k] + p - gfp::mulmod(c, b[k], p)) % p;
                }
            }
        }
        if let Some(l) = v.iter().position(|&c| c != 0) {
            let inv = gfp::invmod(v[l], p);
            for c in v.iter_mut() {
                *c = gfp::mulmod(*c, inv, p);
            }
            basis.push(v);
            lead.push(l);
            pivots.push(r);
            if pivots.len() == s {
                break;
            }
        }
    }
    if pivots.len() != s {
        return Err(Error::Internal(
            "embedding images are linearly dependent".into(),
        ));
    }
    let block: Vec<Vec<u64>> = pivots.iter().map(|&r| rows[r].clone()).collect();
    Ok((pivots, invert(block, p)?))
}

fn invert(mut a: Vec<Vec<u64>>, p: u64) -> Result<Vec<Vec<u64>>> {
    let s = a.len();
    let mut inv: Vec<Vec<u64>> = (0..s)
        .map(|i| (0..s).map(|j| u64::from(i == j)).collect())
        .collect();
    for col in 0..s {
        let piv = (col..s)
            .find(|&r| a[r][col] != 0)
            .ok_or_else(|| Error::Internal("singular pivot block".into()))?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let iv = gfp::invmod(a[col][col], p);
        for k in 0..s {
            a[col][k] = gfp::mulmod(a[col][k], iv, p);
            inv[col][k] = gfp::mulmod(inv[col][k], iv, p);
        }
        for r in 0..s {
            if r != col && a[r][col] != 0 {
                let c = a[r][col];
                for k in 0..s {
                    a[r][k] = (a[r][k] + p - gfp::mulmod(c, a[col][k], p)) % p;
                    inv[r][k] = (inv[r][k] + p - gfp::mulmod(c, inv[col][k], p)) % p;
                }
            }
        }
    }
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::gf;

    #[test]
    fn gf4_into_gf16() {
        let (s, b) = (gf(2, 2).unwrap(), gf(2, 4).unwrap());
        let e = embed(s, b).unwrap();
        let image: Vec<Fel> = s.elements().map(|x| e.apply(x)).collect();
        let fixed: Vec<Fel> = b.elements().filter(|y| y.pow(4) == *y).collect();
        let mut sorted = image.clone();
        sorted.sort();
        assert_eq!(sorted, fixed);
        for x in s.elements() {
            for y in s.elements() {
                assert_eq!(e.apply(x * y), e.apply(x) * e.apply(y));
                assert_eq!(e.apply(x + y), e.apply(x) + e.apply(y));
            }
            assert_eq!(e.preimage(e.apply(x)), Some(x));
        }
    }

    #[test]
    fn identity_embedding() {
        let f = gf(7, 2).unwrap();
        let e = embed(f, f).unwrap();
        assert!(f.elements().all(|x| e.apply(x) == x));
    }

    #[test]
    fn gf49_into_gf2401() {
        let (s, b) = (gf(7, 2).unwrap(), gf(7, 4).unwrap());
        let e = embed(s, b).unwrap();
        for x in s.elements() {
            let y = e.apply(x);
            assert_eq!(y.pow(49), y);
            assert!(y.in_subfield(2).unwrap());
        }
        assert!(embed(gf(7, 3).unwrap(), b).is_err());
    }

    #[test]
    fn preimage_in_packed_target() {
        let (s, b) = (gf(13, 4).unwrap(), gf(13, 12).unwrap());
        let e = embed(s, b).unwrap();
        let x = s.from_coeffs(&[1, 2, 3, 4]).unwrap();
        let y = e.apply(x);
        // sub is large enough to skip the lookup table only above 2^16
        assert_eq!(e.preimage(y), Some(x));
        let outside = b.gen_root();
        assert_eq!(e.preimage(outside), None);
    }
}
