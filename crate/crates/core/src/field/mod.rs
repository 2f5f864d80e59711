//! Exact arithmetic in GF(p^n).
//!
//! A field is built once per `(p, modulus)` and cached for the lifetime of
//! the process, so a [`Field`] is a `&'static FieldSpec` and a [`Fel`] is a
//! `Copy` pair of that reference and an opaque handle. Small fields (order at
//! most 2^23) are backed by exponent, logarithm and Zech tables; larger ones
//! use packed base-p digits with schoolbook multiplication.
//!
//! Every canonical choice in the crate uses one total order on elements:
//! lexicographic on the little-endian coefficient vector `[c0, ..., c_{n-1}]`,
//! i.e. `c0` is the most significant digit. [`Fel::rank`] exposes it.

mod gfp;
mod linalg;
mod roots;

pub use gfp::{factor, is_irreducible, is_prime, prime_power, smallest_irreducible};
pub use linalg::{embed, Embedding};

use crate::error::{Error, Result};
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

/// Largest order for which log/Zech tables are built.
pub const TABLE_LIMIT: u64 = 1 << 23;

/// Largest supported field order (packed digits must fit in a `u64`).
pub const ORDER_LIMIT: u64 = 1 << 63;

pub type Field = &'static FieldSpec;

struct Tables {
    /// `exp[k]` is the packed value of `g^k`.
    exp: Vec<u64>,
    /// `log[v]` is `k` with `g^k` packed to `v`; `log[0]` is unused.
    log: Vec<u32>,
    /// `zech[k]` is `log(1 + g^k) + 1`, or 0 when `1 + g^k = 0`.
    zech: Vec<u32>,
    neg_one_log: u64,
}

enum Repr {
    Table(Tables),
    Packed,
}

/// A finite field GF(p^n) given by a monic irreducible modulus.
pub struct FieldSpec {
    p: u64,
    n: u32,
    order: u64,
    modulus: Vec<u64>,
    pw: Vec<u64>,
    repr: Repr,
}

fn cache() -> &'static Mutex<HashMap<(u64, Vec<u64>), Field>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, Vec<u64>), Field>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn default_moduli() -> &'static Mutex<HashMap<(u64, u32), Vec<u64>>> {
    static M: OnceLock<Mutex<HashMap<(u64, u32), Vec<u64>>>> = OnceLock::new();
    M.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Builds (or fetches from the cache) GF(p^n).
///
/// Without a modulus the lexicographically smallest monic irreducible of
/// degree `n` is used, so the result is the same on every machine.
///
/// ```
/// use y3_core::field::build_field;
/// let f = build_field(7, 2, Some(&[1, 0, 1])).unwrap();
/// assert_eq!(f.order(), 49);
/// assert!(build_field(7, 2, Some(&[6, 0, 1])).is_err()); // z^2 - 1
/// ```
pub fn build_field(p: u64, n: u32, modulus: Option<&[u64]>) -> Result<Field> {
    if !gfp::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if n == 0 {
        return Err(Error::DegreeMismatch(
            "extension degree must be positive".into(),
        ));
    }
    let order = match gfp::checked_pow(p, n) {
        Some(o) if o < ORDER_LIMIT => o,
        _ => return Err(Error::FieldTooLarge { p, n }),
    };
    let modulus: Vec<u64> = match modulus {
        Some(m) => {
            if m.len() != n as usize + 1 {
                return Err(Error::DegreeMismatch(format!(
                    "modulus has {} coefficients, expected {}",
                    m.len(),
                    n + 1
                )));
            }
            if m.iter().any(|&c| c >= p) || m[n as usize] != 1 {
                return Err(Error::DegreeMismatch(
                    "modulus must be monic with coefficients reduced mod p".into(),
                ));
            }
            if !gfp::is_irreducible(m, p) {
                return Err(Error::ReducibleModulus(m.to_vec(), p));
            }
            m.to_vec()
        }
        None => {
            let mut dm = default_moduli().lock().unwrap();
            dm.entry((p, n))
                .or_insert_with(|| gfp::smallest_irreducible(p, n))
                .clone()
        }
    };
    let mut c = cache().lock().unwrap();
    if let Some(f) = c.get(&(p, modulus.clone())) {
        return Ok(f);
    }
    let spec = FieldSpec::construct(p, n, order, modulus.clone());
    let f: Field = Box::leak(Box::new(spec));
    c.insert((p, modulus), f);
    Ok(f)
}

/// GF(p^n) with the canonical modulus.
pub fn gf(p: u64, n: u32) -> Result<Field> {
    build_field(p, n, None)
}

impl FieldSpec {
    fn construct(p: u64, n: u32, order: u64, modulus: Vec<u64>) -> FieldSpec {
        let pw = (0..=n).map(|i| p.pow(i)).collect();
        let mut spec = FieldSpec {
            p,
            n,
            order,
            modulus,
            pw,
            repr: Repr::Packed,
        };
        if order <= TABLE_LIMIT {
            spec.repr = Repr::Table(spec.build_tables());
        }
        spec
    }

    fn build_tables(&self) -> Tables {
        let nm1 = self.order - 1;
        let g = self.find_generator_packed();
        let mut exp = vec![0u64; nm1 as usize];
        let mut log = vec![0u32; self.order as usize];
        let mut cur = 1u64;
        for k in 0..nm1 {
            exp[k as usize] = cur;
            log[cur as usize] = k as u32;
            cur = self.pmul(cur, g);
        }
        debug_assert_eq!(cur, 1);
        let p = self.p;
        let zech = exp
            .iter()
            .map(|&v| {
                let w = if v % p == p - 1 { v - (p - 1) } else { v + 1 };
                if w == 0 {
                    0
                } else {
                    log[w as usize] + 1
                }
            })
            .collect();
        let neg_one_log = if p == 2 { 0 } else { nm1 / 2 };
        Tables {
            exp,
            log,
            zech,
            neg_one_log,
        }
    }

    /// First element, in rank order, that generates the multiplicative group.
    fn find_generator_packed(&self) -> u64 {
        let nm1 = self.order - 1;
        let primes: Vec<u64> = gfp::factor(nm1).into_iter().map(|(l, _)| l).collect();
        for r in 1..self.order {
            let v = self.rank_to_packed(r);
            if primes.iter().all(|&l| self.ppow(v, nm1 / l) != 1) {
                return v;
            }
        }
        unreachable!("the multiplicative group of a finite field is cyclic")
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn order(&self) -> u64 {
        self.order
    }
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }
    /// Whether arithmetic is table driven (constant-time multiplication and powering).
    pub fn is_tabulated(&self) -> bool {
        matches!(self.repr, Repr::Table(_))
    }

    /// Suffix of the element literal: `p^n : [m0,...,mn]`.
    pub fn descriptor(&self) -> String {
        format!("{}^{} : {}", self.p, self.n, list(&self.modulus))
    }

    // ---- packed digit arithmetic ----

    fn unpack(&self, mut v: u64, out: &mut [u64]) {
        for d in out.iter_mut().take(self.n as usize) {
            *d = v % self.p;
            v /= self.p;
        }
    }

    fn pack(&self, d: &[u64]) -> u64 {
        d[..self.n as usize]
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.p + c)
    }

    fn rank_to_packed(&self, mut r: u64) -> u64 {
        let mut v = 0;
        for _ in 0..self.n {
            v = v * self.p + r % self.p;
            r /= self.p;
        }
        v
    }

    fn packed_to_rank(&self, v: u64) -> u64 {
        self.rank_to_packed(v)
    }

    fn padd(&self, a: u64, b: u64) -> u64 {
        if self.n == 1 {
            let s = a + b;
            return if s >= self.p { s - self.p } else { s };
        }
        let (mut x, mut y) = ([0u64; 64], [0u64; 64]);
        self.unpack(a, &mut x);
        self.unpack(b, &mut y);
        for i in 0..self.n as usize {
            let s = x[i] + y[i];
            x[i] = if s >= self.p { s - self.p } else { s };
        }
        self.pack(&x)
    }

    fn pneg(&self, a: u64) -> u64 {
        let mut x = [0u64; 64];
        self.unpack(a, &mut x);
        for d in x.iter_mut().take(self.n as usize) {
            if *d != 0 {
                *d = self.p - *d;
            }
        }
        self.pack(&x)
    }

    fn pmul(&self, a: u64, b: u64) -> u64 {
        let p = self.p;
        let n = self.n as usize;
        if n == 1 {
            return gfp::mulmod(a, b, p);
        }
        let (mut x, mut y) = ([0u64; 64], [0u64; 64]);
        self.unpack(a, &mut x);
        self.unpack(b, &mut y);
        let mut r = [0u64; 128];
        if p < (1 << 28) {
            for i in 0..n {
                if x[i] == 0 {
                    continue;
                }
                for j in 0..n {
                    r[i + j] += x[i] * y[j];
                }
            }
            for c in r.iter_mut().take(2 * n - 1) {
                *c %= p;
            }
        } else {
            for i in 0..n {
                for j in 0..n {
                    r[i + j] = (r[i + j] + gfp::mulmod(x[i], y[j], p)) % p;
                }
            }
        }
        if p < (1 << 28) {
            // entries stay below 2^62: each receives at most n terms < p^2
            for k in (n..2 * n - 1).rev() {
                let c = r[k] % p;
                r[k] = 0;
                if c == 0 {
                    continue;
                }
                for i in 0..n {
                    r[k - n + i] += c * (p - self.modulus[i]);
                }
            }
            for c in r.iter_mut().take(n) {
                *c %= p;
            }
        } else {
            for k in (n..2 * n - 1).rev() {
                let c = r[k];
                if c == 0 {
                    continue;
                }
                r[k] = 0;
                for i in 0..n {
                    let t = gfp::mulmod(c, self.modulus[i], p);
                    r[k - n + i] = (r[k - n + i] + p - t) % p;
                }
            }
        }
        self.pack(&r)
    }

    fn ppow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = self.pmul(r, a);
            }
            a = self.pmul(a, a);
            e >>= 1;
        }
        r
    }

    // ---- handle arithmetic ----

    #[inline]
    fn to_packed(&self, h: u64) -> u64 {
        match &self.repr {
            Repr::Table(t) => {
                if h == 0 {
                    0
                } else {
                    t.exp[(h - 1) as usize]
                }
            }
            Repr::Packed => h,
        }
    }

    #[inline]
    fn from_packed(&self, v: u64) -> u64 {
        match &self.repr {
            Repr::Table(t) => {
                if v == 0 {
                    0
                } else {
                    t.log[v as usize] as u64 + 1
                }
            }
            Repr::Packed => v,
        }
    }

    #[inline]
    fn add_h(&self, a: u64, b: u64) -> u64 {
        match &self.repr {
            Repr::Table(t) => {
                if a == 0 {
                    return b;
                }
                if b == 0 {
                    return a;
                }
                let nm1 = self.order - 1;
                let (la, lb) = (a - 1, b - 1);
                let k = if lb >= la { lb - la } else { lb + nm1 - la };
                let z = t.zech[k as usize] as u64;
                if z == 0 {
                    0
                } else {
                    let s = la + z - 1;
                    (if s >= nm1 { s - nm1 } else { s }) + 1
                }
            }
            Repr::Packed => self.padd(a, b),
        }
    }

    #[inline]
    fn neg_h(&self, a: u64) -> u64 {
        match &self.repr {
            Repr::Table(t) => {
                if a == 0 {
                    return 0;
                }
                let s = a - 1 + t.neg_one_log;
                let nm1 = self.order - 1;
                (if s >= nm1 { s - nm1 } else { s }) + 1
            }
            Repr::Packed => self.pneg(a),
        }
    }

    #[inline]
    fn mul_h(&self, a: u64, b: u64) -> u64 {
        match &self.repr {
            Repr::Table(_) => {
                if a == 0 || b == 0 {
                    return 0;
                }
                let nm1 = self.order - 1;
                let s = a - 1 + b - 1;
                (if s >= nm1 { s - nm1 } else { s }) + 1
            }
            Repr::Packed => self.pmul(a, b),
        }
    }

    /// Inverse of a nonzero handle.
    #[inline]
    fn inv_h(&self, a: u64) -> u64 {
        debug_assert!(a != 0);
        match &self.repr {
            Repr::Table(_) => {
                let nm1 = self.order - 1;
                (nm1 - (a - 1)) % nm1 + 1
            }
            Repr::Packed => self.ppow(a, self.order - 2),
        }
    }

    #[inline]
    fn pow_h(&self, a: u64, e: u64) -> u64 {
        if e == 0 {
            return self.one_h();
        }
        match &self.repr {
            Repr::Table(_) => {
                if a == 0 {
                    return 0;
                }
                let nm1 = self.order - 1;
                ((a - 1) as u128 * e as u128 % nm1 as u128) as u64 + 1
            }
            Repr::Packed => self.ppow(a, e),
        }
    }

    #[inline]
    fn one_h(&self) -> u64 {
        1
    }

    // ---- element constructors ----

    pub fn zero(&'static self) -> Fel {
        Fel { f: self, h: 0 }
    }

    pub fn one(&'static self) -> Fel {
        Fel {
            f: self,
            h: self.one_h(),
        }
    }

    /// The image of an integer under `Z -> GF(p^n)`.
    pub fn int(&'static self, k: i64) -> Fel {
        let v = k.rem_euclid(self.p as i64) as u64;
        Fel {
            f: self,
            h: self.from_packed(v),
        }
    }

    /// Element from little-endian coefficients (shorter lists are zero padded).
    pub fn from_coeffs(&'static self, c: &[u64]) -> Result<Fel> {
        if c.len() > self.n as usize {
            return Err(Error::DegreeMismatch(format!(
                "{} coefficients for a degree-{} field",
                c.len(),
                self.n
            )));
        }
        let mut d = [0u64; 64];
        for (i, &x) in c.iter().enumerate() {
            if x >= self.p {
                return Err(Error::Parse(format!(
                    "coefficient {x} not reduced mod {}",
                    self.p
                )));
            }
            d[i] = x;
        }
        Ok(Fel {
            f: self,
            h: self.from_packed(self.pack(&d)),
        })
    }

    /// The element of the given rank in the canonical order.
    pub fn from_rank(&'static self, r: u64) -> Fel {
        assert!(r < self.order, "rank out of range");
        Fel {
            f: self,
            h: self.from_packed(self.rank_to_packed(r)),
        }
    }

    /// The class of `z` (the root of the modulus).
    pub fn gen_root(&'static self) -> Fel {
        if self.n == 1 {
            return self.zero();
        }
        self.from_coeffs(&[0, 1]).expect("degree >= 2")
    }

    /// All elements in canonical order.
    pub fn elements(&'static self) -> impl Iterator<Item = Fel> + Clone {
        (0..self.order).map(move |r| self.from_rank(r))
    }

    /// The tabulated primitive element `g` (first primitive element by rank).
    pub fn primitive_element(&'static self) -> Option<Fel> {
        match &self.repr {
            Repr::Table(_) => Some(Fel { f: self, h: 2 }),
            Repr::Packed => None,
        }
    }

    /// `g^k` for the tabulated primitive element.
    pub fn exp(&'static self, k: u64) -> Option<Fel> {
        match &self.repr {
            Repr::Table(_) => Some(Fel {
                f: self,
                h: k % (self.order - 1) + 1,
            }),
            Repr::Packed => None,
        }
    }

    /// Primitive cube root of unity, smallest in the canonical order.
    pub fn cube_root_of_unity(&'static self) -> Result<Fel> {
        if (self.order - 1) % 3 != 0 {
            return Err(Error::NoCubeRoot(self.order));
        }
        let one = self.one();
        let roots = self.roots_of(&[one, one, one]);
        roots
            .into_iter()
            .next()
            .ok_or_else(|| Error::Internal("x^2+x+1 has no roots".into()))
    }

    /// Whether `sub` is (canonically) a subfield: same p and `sub.n | n`.
    pub fn contains_degree(&self, s: u32) -> bool {
        s > 0 && self.n % s == 0
    }
}

// Fields are interned, so identity is equality.
impl PartialEq for FieldSpec {
    fn eq(&self, o: &FieldSpec) -> bool {
        std::ptr::eq(self, o)
    }
}
impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.descriptor())
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.n)
    }
}

fn list(v: &[u64]) -> String {
    let parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
    format!("[{}]", parts.join(","))
}

/// An element of a finite field.
#[derive(Clone, Copy)]
pub struct Fel {
    f: Field,
    h: u64,
}

#[inline]
fn same(a: Field, b: Field) -> bool {
    std::ptr::eq(a, b)
}

impl Fel {
    pub fn field(&self) -> Field {
        self.f
    }
    pub fn is_zero(&self) -> bool {
        self.h == 0
    }
    pub fn is_one(&self) -> bool {
        self.h == self.f.one_h()
    }

    /// Little-endian coefficients in the power basis, length exactly n.
    pub fn coeffs(&self) -> Vec<u64> {
        let mut d = [0u64; 64];
        self.f.unpack(self.f.to_packed(self.h), &mut d);
        d[..self.f.n as usize].to_vec()
    }

    /// Position in the canonical order (lexicographic on coefficients).
    pub fn rank(&self) -> u64 {
        self.f.packed_to_rank(self.f.to_packed(self.h))
    }

    /// Discrete logarithm to the tabulated primitive element, when available.
    pub fn log(&self) -> Option<u64> {
        match &self.f.repr {
            Repr::Table(_) if self.h != 0 => Some(self.h - 1),
            _ => None,
        }
    }

    fn check(&self, o: &Fel) -> Result<()> {
        if same(self.f, o.f) {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.f.descriptor(), o.f.descriptor()))
        }
    }

    pub fn checked_add(self, o: Fel) -> Result<Fel> {
        self.check(&o)?;
        Ok(Fel {
            f: self.f,
            h: self.f.add_h(self.h, o.h),
        })
    }
    pub fn checked_sub(self, o: Fel) -> Result<Fel> {
        self.check(&o)?;
        Ok(Fel {
            f: self.f,
            h: self.f.add_h(self.h, self.f.neg_h(o.h)),
        })
    }
    pub fn checked_mul(self, o: Fel) -> Result<Fel> {
        self.check(&o)?;
        Ok(Fel {
            f: self.f,
            h: self.f.mul_h(self.h, o.h),
        })
    }
    pub fn checked_div(self, o: Fel) -> Result<Fel> {
        self.check(&o)?;
        Ok(self * o.inv()?)
    }

    pub fn inv(self) -> Result<Fel> {
        if self.h == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Fel {
            f: self.f,
            h: self.f.inv_h(self.h),
        })
    }

    pub fn pow(self, e: u64) -> Fel {
        Fel {
            f: self.f,
            h: self.f.pow_h(self.h, e),
        }
    }

    /// Signed power, with `x^(-k) := (x^(-1))^k`.
    pub fn powi(self, e: i64) -> Result<Fel> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs()))
        }
    }

    pub fn square(self) -> Fel {
        self * self
    }

    /// The k-th power of the p-power Frobenius.
    pub fn frobenius(self, k: u32) -> Fel {
        let mut x = self;
        for _ in 0..k % self.f.n {
            x = x.pow(self.f.p);
        }
        x
    }

    /// Smallest `k >= 1` with `x^k = 1`.
    pub fn mult_order(&self) -> Result<u64> {
        if self.h == 0 {
            return Err(Error::ZeroOrder);
        }
        let nm1 = self.f.order - 1;
        if let Some(l) = self.log() {
            return Ok(nm1 / num_integer::gcd(nm1, l));
        }
        let mut ord = nm1;
        for (l, e) in gfp::factor(nm1) {
            for _ in 0..e {
                if self.pow(ord / l).is_one() {
                    ord /= l;
                } else {
                    break;
                }
            }
        }
        Ok(ord)
    }

    /// Whether `x^(p^s) = x`, i.e. `x` lies in the subfield of degree `s`.
    pub fn in_subfield(&self, s: u32) -> Result<bool> {
        if !self.f.contains_degree(s) {
            return Err(Error::NotASubfield(s, self.f.n));
        }
        Ok(self.pow(self.f.pw[s as usize]) == *self)
    }

    /// The element literal `[c0,...,c_{n-1}] @ p^n : [m0,...,mn]`.
    pub fn literal(&self) -> String {
        format!("{} @ {}", list(&self.coeffs()), self.f.descriptor())
    }

    /// Parses an element literal, building its field if needed.
    pub fn parse(s: &str) -> Result<Fel> {
        let err = || Error::Parse(format!("bad element literal {s:?}"));
        let (coeffs, rest) = s.split_once('@').ok_or_else(err)?;
        let (pn, modulus) = rest.split_once(':').ok_or_else(err)?;
        let (p, n) = pn.trim().split_once('^').ok_or_else(err)?;
        let p: u64 = p.trim().parse().map_err(|_| err())?;
        let n: u32 = n.trim().parse().map_err(|_| err())?;
        let c = parse_list(coeffs).ok_or_else(err)?;
        let m = parse_list(modulus).ok_or_else(err)?;
        let f = build_field(p, n, Some(&m))?;
        if c.len() != n as usize {
            return Err(Error::DegreeMismatch(format!(
                "{} coefficients, expected {n}",
                c.len()
            )));
        }
        f.from_coeffs(&c)
    }
}

fn parse_list(s: &str) -> Option<Vec<u64>> {
    let s = s.trim().strip_prefix('[')?.strip_suffix(']')?;
    if s.trim().is_empty() {
        return Some(Vec::new());
    }
    s.split(',').map(|t| t.trim().parse().ok()).collect()
}

impl FromStr for Fel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Fel> {
        Fel::parse(s)
    }
}

impl PartialEq for Fel {
    fn eq(&self, o: &Fel) -> bool {
        same(self.f, o.f) && self.h == o.h
    }
}
impl Eq for Fel {}

impl Hash for Fel {
    fn hash<H: Hasher>(&self, state: &mut H) {
        (self.f as *const FieldSpec as usize).hash(state);
        self.h.hash(state);
    }
}

impl PartialOrd for Fel {
    fn partial_cmp(&self, o: &Fel) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Fel {
    /// Canonical order; elements of different fields compare by field first.
    fn cmp(&self, o: &Fel) -> std::cmp::Ordering {
        (self.f.p, self.f.n, &self.f.modulus, self.rank()).cmp(&(
            o.f.p,
            o.f.n,
            &o.f.modulus,
            o.rank(),
        ))
    }
}

impl fmt::Debug for Fel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", list(&self.coeffs()))
    }
}

impl fmt::Display for Fel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.literal())
    }
}

impl serde::Serialize for Fel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.literal())
    }
}

impl<'de> serde::Deserialize<'de> for Fel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Fel, D::Error> {
        let s = String::deserialize(d)?;
        Fel::parse(&s).map_err(serde::de::Error::custom)
    }
}

// Operators panic on mixed fields and on division by zero; the `checked_*`
// methods return errors instead.

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident, $atr:ident, $am:ident) => {
        impl $tr for Fel {
            type Output = Fel;
            #[inline]
            fn $m(self, o: Fel) -> Fel {
                match self.$checked(o) {
                    Ok(v) => v,
                    Err(e) => panic!("{e}"),
                }
            }
        }
        impl $tr<i64> for Fel {
            type Output = Fel;
            #[inline]
            fn $m(self, o: i64) -> Fel {
                self.$m(self.f.int(o))
            }
        }
        impl $tr<Fel> for i64 {
            type Output = Fel;
            #[inline]
            fn $m(self, o: Fel) -> Fel {
                o.f.int(self).$m(o)
            }
        }
        impl $atr for Fel {
            #[inline]
            fn $am(&mut self, o: Fel) {
                *self = self.$m(o);
            }
        }
    };
}

binop!(Add, add, checked_add, AddAssign, add_assign);
binop!(Sub, sub, checked_sub, SubAssign, sub_assign);
binop!(Mul, mul, checked_mul, MulAssign, mul_assign);

impl Div for Fel {
    type Output = Fel;
    fn div(self, o: Fel) -> Fel {
        match self.checked_div(o) {
            Ok(v) => v,
            Err(e) => panic!("{e}"),
        }
    }
}

impl Div<i64> for Fel {
    type Output = Fel;
    fn div(self, o: i64) -> Fel {
        self / self.f.int(o)
    }
}

impl Neg for Fel {
    type Output = Fel;
    #[inline]
    fn neg(self) -> Fel {
        Fel {
            f: self.f,
            h: self.f.neg_h(self.h),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf7_division() {
        let f = gf(7, 1).unwrap();
        assert_eq!(f.int(3) / f.int(5), f.int(2));
        assert_eq!((f.int(5) * f.int(2)), f.int(3));
    }

    #[test]
    fn gf7_orders() {
        let f = gf(7, 1).unwrap();
        assert_eq!(f.int(2).mult_order().unwrap(), 3);
        assert_eq!(f.int(3).mult_order().unwrap(), 6);
        assert_eq!(f.one().mult_order().unwrap(), 1);
        assert_eq!(f.zero().mult_order(), Err(Error::ZeroOrder));
    }

    #[test]
    fn packed_and_tabulated_agree() {
        // GF(7^3) is tabulated; compare its arithmetic with raw packed arithmetic.
        let f = gf(7, 3).unwrap();
        assert!(f.is_tabulated());
        for r in (0..f.order()).step_by(13) {
            for s in (0..f.order()).step_by(29) {
                let (x, y) = (f.from_rank(r), f.from_rank(s));
                let (px, py) = (f.rank_to_packed(r), f.rank_to_packed(s));
                assert_eq!(f.to_packed((x * y).h), f.pmul(px, py));
                assert_eq!(f.to_packed((x + y).h), f.padd(px, py));
                assert_eq!(f.to_packed((-x).h), f.pneg(px));
            }
        }
    }

    #[test]
    fn large_field_is_packed_and_consistent() {
        let f = gf(13, 12).unwrap();
        assert!(!f.is_tabulated());
        let x = f
            .from_coeffs(&[3, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5, 8])
            .unwrap();
        assert!((x * x.inv().unwrap()).is_one());
        assert_eq!(x.pow(f.order()), x);
        assert_eq!(
            f.order() - 1,
            (f.order() - 1) / x.mult_order().unwrap() * x.mult_order().unwrap()
        );
    }

    #[test]
    fn frobenius_fixes_field() {
        for (p, n) in [(2, 4), (7, 2), (5, 3)] {
            let f = gf(p, n).unwrap();
            for x in f.elements() {
                assert_eq!(x.pow(f.order()), x);
            }
        }
    }

    #[test]
    fn literal_round_trip() {
        let f = gf(7, 2).unwrap();
        let x = f.from_coeffs(&[3, 5]).unwrap();
        assert_eq!(x.literal(), "[3,5] @ 7^2 : [1,0,1]");
        assert_eq!(Fel::parse(&x.literal()).unwrap(), x);
        assert!(Fel::parse("[1] @ 7^2 : [1,0,1]").is_err());
        assert!(Fel::parse("[1,2] @ 7^2 : [6,0,1]").is_err());
    }

    #[test]
    fn mixed_fields_are_errors() {
        let a = gf(7, 1).unwrap().one();
        let b = gf(7, 2).unwrap().one();
        assert!(matches!(a.checked_add(b), Err(Error::FieldMismatch(..))));
    }

    #[test]
    fn canonical_order_is_lexicographic() {
        let f = gf(7, 2).unwrap();
        let v: Vec<Vec<u64>> = f.elements().map(|x| x.coeffs()).collect();
        let mut sorted = v.clone();
        sorted.sort();
        assert_eq!(v, sorted);
        assert_eq!(v[1], vec![0, 1]);
    }

    #[test]
    fn subfield_membership() {
        let f = gf(2, 4).unwrap();
        let count = f.elements().filter(|x| x.in_subfield(2).unwrap()).count();
        assert_eq!(count, 4);
        assert!(f.one().in_subfield(3).is_err());
    }
}
