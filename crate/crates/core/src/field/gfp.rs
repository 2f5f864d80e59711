//! Polynomials over the prime field GF(p), just enough to test and search
//! for irreducible moduli, plus the integer helpers the tower needs.

use num_prime::nt_funcs::{factorize64, is_prime64};

pub(crate) type Poly = Vec<u64>;

#[inline]
pub(crate) fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    r
}

pub(crate) fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

pub fn is_prime(n: u64) -> bool {
    is_prime64(n)
}

/// Prime factorisation as `(prime, exponent)` pairs in increasing order.
pub fn factor(n: u64) -> Vec<(u64, u32)> {
    if n <= 1 {
        return Vec::new();
    }
    factorize64(n)
        .into_iter()
        .map(|(p, e)| (p, e as u32))
        .collect()
}

/// Returns `(p, e)` with `q = p^e` when `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let f = factor(q);
    match f.as_slice() {
        [(p, e)] => Some((*p, *e)),
        _ => None,
    }
}

pub(crate) fn checked_pow(p: u64, n: u32) -> Option<u64> {
    p.checked_pow(n)
}

fn trim(a: &mut Poly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn deg(a: &Poly) -> isize {
    a.len() as isize - 1
}

fn rem(a: &Poly, f: &Poly, p: u64) -> Poly {
    let mut r = a.clone();
    trim(&mut r);
    let df = f.len() - 1;
    let lead_inv = invmod(f[df], p);
    while r.len() > df {
        let top = r.len() - 1;
        let c = mulmod(r[top], lead_inv, p);
        if c != 0 {
            for (i, &fi) in f.iter().enumerate() {
                let idx = top - df + i;
                r[idx] = (r[idx] + p - mulmod(c, fi, p)) % p;
            }
        }
        trim(&mut r);
    }
    r
}

fn mul(a: &Poly, b: &Poly, p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + mulmod(x, y, p)) % p;
        }
    }
    trim(&mut r);
    r
}

fn gcd(mut a: Poly, mut b: Poly, p: u64) -> Poly {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// `x^(p^k) mod f`, by k successive p-th powers.
fn frobenius_x(f: &Poly, p: u64, k: u32) -> Poly {
    let mut cur = rem(&vec![0, 1], f, p);
    for _ in 0..k {
        let mut acc: Poly = vec![1];
        let mut base = cur.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = rem(&mul(&acc, &base, p), f, p);
            }
            base = rem(&mul(&base, &base, p), f, p);
            e >>= 1;
        }
        cur = acc;
    }
    cur
}

fn sub_x(a: &Poly, p: u64) -> Poly {
    let mut r = a.clone();
    if r.len() < 2 {
        r.resize(2, 0);
    }
    r[1] = (r[1] + p - 1) % p;
    trim(&mut r);
    r
}

/// Rabin's test: `f` of degree n is irreducible iff `x^(p^n) = x mod f` and
/// `gcd(x^(p^(n/l)) - x, f) = 1` for every prime `l | n`.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let mut f: Poly = f.iter().map(|c| c % p).collect();
    trim(&mut f);
    if f.len() < 2 {
        return false;
    }
    let n = (f.len() - 1) as u32;
    if n == 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    if !sub_x(&frobenius_x(&f, p, n), p).is_empty() {
        return false;
    }
    for (l, _) in factor(n as u64) {
        let h = sub_x(&frobenius_x(&f, p, n / l as u32), p);
        if deg(&gcd(f.clone(), h, p)) != 0 {
            return false;
        }
    }
    true
}

/// The lexicographically smallest monic irreducible of degree n over GF(p),
/// comparing coefficient lists `[m0, ..., m_{n-1}, 1]` from `m0` upward.
pub fn smallest_irreducible(p: u64, n: u32) -> Poly {
    let total = p.pow(n);
    // ranks below p^(n-1) have m0 = 0, hence the factor x
    let start = if n == 1 { 0 } else { p.pow(n - 1) };
    for r in start..total {
        let mut m = vec![0u64; n as usize + 1];
        let mut v = r;
        for i in (0..n as usize).rev() {
            m[i] = v % p;
            v /= p;
        }
        m[n as usize] = 1;
        if is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_irreducible(f: &[u64], p: u64) -> bool {
        // degree <= 3: irreducible iff no root
        (0..p).all(|x| {
            let mut v = 0;
            for &c in f.iter().rev() {
                v = (mulmod(v, x, p) + c) % p;
            }
            v != 0
        })
    }

    #[test]
    fn rabin_agrees_with_root_test_in_low_degree() {
        for p in [2u64, 3, 5, 7] {
            for n in 2..=3u32 {
                for r in 0..p.pow(n) {
                    let mut f = vec![0u64; n as usize + 1];
                    let mut v = r;
                    for c in f.iter_mut().take(n as usize) {
                        *c = v % p;
                        v /= p;
                    }
                    f[n as usize] = 1;
                    assert_eq!(
                        is_irreducible(&f, p),
                        brute_irreducible(&f, p),
                        "{f:?} mod {p}"
                    );
                }
            }
        }
    }

    #[test]
    fn x2_plus_1_mod_7() {
        let squares: Vec<u64> = (0..7).map(|x| x * x % 7).collect();
        assert!(!squares.contains(&6));
        assert!(is_irreducible(&[1, 0, 1], 7));
        assert_eq!(smallest_irreducible(7, 2), vec![1, 0, 1]);
    }

    #[test]
    fn degree_four_over_two() {
        // x^4+x^2+1 = (x^2+x+1)^2 passes a plain root test but is reducible
        assert!(!is_irreducible(&[1, 0, 1, 0, 1], 2));
        assert_eq!(smallest_irreducible(2, 4), vec![1, 0, 0, 1, 1]);
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(13), Some((13, 1)));
        assert_eq!(prime_power(16), Some((2, 4)));
        assert_eq!(prime_power(10), None);
        assert_eq!(prime_power(1), None);
    }
}
