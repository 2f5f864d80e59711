//! Root finding over GF(p^n) (Cantor–Zassenhaus with a deterministic
//! splitting sequence), used for embeddings, cube roots and roots of unity.

use super::{Fel, FieldSpec};

type P = Vec<Fel>;

fn trim(a: &mut P) {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
}

fn monic(mut a: P) -> P {
    trim(&mut a);
    if let Some(&l) = a.last() {
        let li = l.inv().expect("nonzero leading coefficient");
        for c in a.iter_mut() {
            *c *= li;
        }
    }
    a
}

fn rem(a: &P, f: &P) -> P {
    let mut r = a.clone();
    trim(&mut r);
    let df = f.len() - 1;
    let li = f[df].inv().expect("nonzero leading coefficient");
    while r.len() > df {
        let top = r.len() - 1;
        let c = r[top] * li;
        for (i, &fi) in f.iter().enumerate() {
            r[top - df + i] -= c * fi;
        }
        trim(&mut r);
    }
    r
}

fn mulmod(a: &P, b: &P, f: &P) -> P {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let z = a[0].field().zero();
    let mut r = vec![z; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    rem(&r, f)
}

fn powmod(base: &P, mut e: u64, f: &P) -> P {
    let one = f[0].field().one();
    let mut r = rem(&vec![one], f);
    let mut b = rem(base, f);
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(&r, &b, f);
        }
        b = mulmod(&b, &b, f);
        e >>= 1;
    }
    r
}

fn gcd(mut a: P, mut b: P) -> P {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    monic(a)
}

fn sub(a: &P, b: &P, f: &'static FieldSpec) -> P {
    let z = f.zero();
    let n = a.len().max(b.len());
    let mut r: P = (0..n)
        .map(|i| *a.get(i).unwrap_or(&z) - *b.get(i).unwrap_or(&z))
        .collect();
    trim(&mut r);
    r
}

fn split(g: P, f: &'static FieldSpec, out: &mut Vec<Fel>) {
    let d = g.len() - 1;
    if d == 0 {
        return;
    }
    if d == 1 {
        out.push(-g[0] / g[1]);
        return;
    }
    let one = f.one();
    let q = f.order();
    // In characteristic 2 the trace form is nondegenerate, so some basis
    // element z^j separates any two roots; try those first.
    let basis: Vec<Fel> = if f.p() == 2 {
        let z = f.gen_root();
        (0..f.n())
            .map(|j| if f.n() == 1 { f.one() } else { z.pow(j as u64) })
            .collect()
    } else {
        Vec::new()
    };
    for delta in basis.into_iter().chain((0..q).map(|r| f.from_rank(r))) {
        let h = if f.p() == 2 {
            // trace of delta * x
            let mut t = rem(&vec![f.zero(), delta], &g);
            let mut acc = t.clone();
            for _ in 1..f.n() {
                t = mulmod(&t, &t, &g);
                acc = sub(&acc, &t.iter().map(|c| -*c).collect(), f);
            }
            acc
        } else {
            let e = powmod(&vec![delta, one], (q - 1) / 2, &g);
            sub(&e, &vec![one], f)
        };
        if h.is_empty() {
            continue;
        }
        let c = gcd(g.clone(), h);
        let dc = c.len() - 1;
        if dc > 0 && dc < d {
            let other = div_exact(&g, &c);
            split(c, f, out);
            split(other, f, out);
            return;
        }
    }
    unreachable!("a product of distinct linear factors always splits");
}

fn div_exact(a: &P, b: &P) -> P {
    let mut r = a.clone();
    let db = b.len() - 1;
    let li = b[db].inv().expect("nonzero");
    let z = a[0].field().zero();
    let mut qt = vec![z; a.len() - db];
    while r.len() > db {
        let top = r.len() - 1;
        let c = r[top] * li;
        qt[top - db] = c;
        for (i, &bi) in b.iter().enumerate() {
            r[top - db + i] -= c * bi;
        }
        trim(&mut r);
    }
    debug_assert!(r.is_empty());
    qt
}

impl FieldSpec {
    /// Distinct roots in this field of a polynomial (little-endian
    /// coefficients), sorted in canonical order.
    pub fn roots_of(&'static self, poly: &[Fel]) -> Vec<Fel> {
        let mut f: P = poly.to_vec();
        trim(&mut f);
        assert!(!f.is_empty(), "roots of the zero polynomial");
        assert!(
            f.iter().all(|c| std::ptr::eq(c.field(), self)),
            "coefficients from another field"
        );
        let mut out = Vec::new();
        if f.len() == 1 {
            return out;
        }
        if f[0].is_zero() {
            out.push(self.zero());
            while f[0].is_zero() {
                f.remove(0);
            }
        }
        let f = monic(f);
        if f.len() > 1 {
            let x = vec![self.zero(), self.one()];
            let xq = powmod(&x, self.order(), &f);
            let g = gcd(f.clone(), sub(&xq, &rem(&x, &f), self));
            split(g, self, &mut out);
        }
        out.sort();
        out.dedup();
        out
    }
}

impl Fel {
    /// All `y` in this field with `y^k = self`, in canonical order.
    pub fn nth_roots(&self, k: u64) -> Vec<Fel> {
        let f = self.field();
        assert!(k > 0);
        if self.is_zero() {
            return vec![f.zero()];
        }
        if let Some(l) = self.log() {
            let nm1 = f.order() - 1;
            let g = num_integer::gcd(k % nm1, nm1);
            let g = if g == 0 { nm1 } else { g };
            if l % g != 0 {
                return Vec::new();
            }
            // k*t = l (mod nm1): t0 = (l/g) * (k/g)^{-1} mod nm1/g
            let m = nm1 / g;
            let kk = (k / g) % m.max(1);
            let inv = if m == 1 { 0 } else { inv_mod(kk, m) };
            let t0 = ((l / g) as u128 * inv as u128 % m.max(1) as u128) as u64;
            let mut out: Vec<Fel> = (0..g).map(|j| f.exp(t0 + j * m).unwrap()).collect();
            out.sort();
            return out;
        }
        let mut poly = vec![f.zero(); k as usize + 1];
        poly[0] = -*self;
        poly[k as usize] = f.one();
        f.roots_of(&poly)
    }
}

fn inv_mod(a: u64, m: u64) -> u64 {
    let (mut t, mut nt) = (0i128, 1i128);
    let (mut r, mut nr) = (m as i128, a as i128);
    while nr != 0 {
        let q = r / nr;
        (t, nt) = (nt, t - q * nt);
        (r, nr) = (nr, r - q * nr);
    }
    debug_assert_eq!(r, 1);
    t.rem_euclid(m as i128) as u64
}

#[cfg(test)]
mod tests {
    use crate::field::gf;

    #[test]
    fn nth_roots_match_brute_force() {
        for (p, n) in [(7u64, 2u32), (2, 4), (13, 2)] {
            let f = gf(p, n).unwrap();
            for k in [2u64, 3, 4, 6] {
                for x in f.elements().step_by(5) {
                    let brute: Vec<_> = f.elements().filter(|y| y.pow(k) == x).collect();
                    assert_eq!(x.nth_roots(k), brute, "GF({p}^{n}) k={k} x={x:?}");
                }
            }
        }
    }

    #[test]
    fn cantor_zassenhaus_on_packed_field() {
        let f = gf(13, 12).unwrap();
        let x = f
            .from_coeffs(&[2, 0, 7, 1, 0, 0, 3, 0, 0, 0, 0, 1])
            .unwrap();
        let c = x * x * x;
        let roots = c.nth_roots(3);
        assert_eq!(roots.len(), 3);
        assert!(roots.contains(&x));
        assert!(roots.iter().all(|r| r.pow(3) == c));
    }

    #[test]
    fn cube_roots_of_unity() {
        let f = gf(7, 1).unwrap();
        let z = f.cube_root_of_unity().unwrap();
        assert_eq!(z, f.int(2));
        assert!((z * z + z + 1).is_zero());
        let f4 = gf(2, 2).unwrap();
        let z4 = f4.cube_root_of_unity().unwrap();
        assert_eq!(z4.mult_order().unwrap(), 3);
        assert!(gf(2, 3).unwrap().cube_root_of_unity().is_err());
    }

    #[test]
    fn char_two_packed_roots() {
        let f = gf(2, 40).unwrap();
        let x = f.from_coeffs(&[1, 1, 0, 1]).unwrap();
        let roots = (x * x * x).nth_roots(3);
        assert!(roots.contains(&x));
        assert!(roots.iter().all(|r| r.pow(3) == x.pow(3)));
    }
}
