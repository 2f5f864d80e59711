//! Witness functions at affine places and the certificates built from them.
//!
//! Every function is carried as a [`LedgeredFunction`]: its expansion in
//! the local parameter `T` modulo `T^q`, a formal power `e` of the function
//! `F_P` with divisor `qP + Phi(P) - (q+1)P_inf` (or `(q+1)(P - P_inf)` at a
//! rational place), and upper bounds for the pole orders at `P_inf` and
//! along the branch divisor `D0`. `F_P` itself is never constructed: only
//! its valuation at `P` and its pole at infinity enter the bookkeeping.
//!
//! A gap `gamma` at `P` is certified by a function `h` with
//! `v_P(h) = gamma - 1` whose poles fit in the canonical divisor
//! `(m-1)(q+1)P_inf + 2 D0` of the differential `dy`.

use crate::curve::{
    alpha, classify_rationality, place_json, Alpha, CurveContext, Place, Rationality,
};
use crate::error::{Error, Result};
use crate::field::Fel;
use crate::numerical::closure_failure;
use crate::orders::alpha_profile;
use crate::polyfam::PolyFamily;
use crate::series::{basics_for_alpha, TruncSeries};
use serde::Serialize;
use serde_json::{json, Value};

/// A function known through its local expansion and a pole ledger.
#[derive(Debug, Clone)]
pub struct LedgeredFunction {
    pub series: TruncSeries,
    /// Formal multiplicity of `F_P`.
    pub fp_exponent: i64,
    /// Bound on the pole order at `P_inf`, including `(q+1)` per unit of
    /// `fp_exponent`. Negative values record a guaranteed zero.
    pub pole_inf: i64,
    /// Bound on the pole order at each place of `D0`.
    pub pole_d0: i64,
    /// Whether `F_P` vanishes to order `q+1` (rational place) or `q`.
    pub rational_p: bool,
    /// Human-readable construction, e.g. `F_P^2*g_1*x_a`.
    pub recipe: String,
}

impl LedgeredFunction {
    fn primitive(
        series: TruncSeries,
        pole_inf: i64,
        pole_d0: i64,
        rational_p: bool,
        recipe: &str,
    ) -> Self {
        LedgeredFunction {
            series,
            fp_exponent: 0,
            pole_inf,
            pole_d0,
            rational_p,
            recipe: recipe.into(),
        }
    }

    /// The constant 1.
    pub fn one(like: &LedgeredFunction) -> Self {
        let s = TruncSeries::one(like.series.field(), like.series.order());
        Self::primitive(s, 0, 0, like.rational_p, "1")
    }

    /// `F_P^e`: expansion 1 up to the formal factor.
    pub fn fp_power(like: &LedgeredFunction, e: i64) -> Self {
        let q = like.series.order() as i64;
        let mut f = Self::one(like);
        f.fp_exponent = e;
        f.pole_inf = e * (q + 1);
        f.recipe = if e == 1 {
            "F_P".into()
        } else {
            format!("F_P^{e}")
        };
        f
    }

    /// Product: expansions multiply, exponents and ledgers add.
    pub fn mul(&self, o: &LedgeredFunction) -> Result<LedgeredFunction> {
        if self.rational_p != o.rational_p {
            return Err(Error::Witness(
                "mixing rational and non-rational ledgers".into(),
            ));
        }
        let recipe = match (self.recipe.as_str(), o.recipe.as_str()) {
            ("1", r) | (r, "1") => r.to_string(),
            (a, b) => format!("{a}*{b}"),
        };
        Ok(LedgeredFunction {
            series: self.series.checked_mul(&o.series)?,
            fp_exponent: self.fp_exponent + o.fp_exponent,
            pole_inf: self.pole_inf + o.pole_inf,
            pole_d0: self.pole_d0 + o.pole_d0,
            rational_p: self.rational_p,
            recipe,
        })
    }

    pub fn pow(&self, k: u64) -> Result<LedgeredFunction> {
        let mut acc = Self::one(self);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        if k > 1 {
            acc.recipe = format!("{}^{k}", paren(&self.recipe));
        }
        Ok(acc)
    }

    /// `v_P`: the series valuation plus the contribution of `F_P`. The
    /// series valuation must be visible below the truncation order.
    pub fn valuation(&self) -> Result<i64> {
        let q = self.series.order() as i64;
        let v = self.series.valuation().ok_or_else(|| {
            Error::Witness(format!(
                "{}: valuation not visible below T^{q}",
                self.recipe
            ))
        })?;
        let per = if self.rational_p { q + 1 } else { q };
        Ok(self.fp_exponent * per + v as i64)
    }

    /// Poles bounded by `(pole_inf, pole_d0)`.
    pub fn within(&self, bound: (i64, i64)) -> bool {
        self.pole_inf <= bound.0 && self.pole_d0 <= bound.1
    }

    /// JSON view (the expansion is summarized by its valuation).
    pub fn to_json(&self) -> Value {
        json!({
            "recipe": self.recipe,
            "v_P": self.valuation().ok(),
            "fp_exponent": self.fp_exponent,
            "pole_inf": self.pole_inf,
            "pole_D0": self.pole_d0,
        })
    }
}

fn paren(r: &str) -> String {
    if r.contains('*') {
        format!("({r})")
    } else {
        r.to_string()
    }
}

/// Linear combination; ledgers take the componentwise maximum.
fn lincomb(terms: &[(Fel, &LedgeredFunction)], recipe: String) -> Result<LedgeredFunction> {
    let first = terms[0].1;
    let mut series = TruncSeries::zero(first.series.field(), first.series.order());
    let (mut pi, mut pd) = (i64::MIN, i64::MIN);
    for (c, f) in terms {
        if f.fp_exponent != 0 || f.rational_p != first.rational_p {
            return Err(Error::Witness(
                "linear combinations need F_P-free terms".into(),
            ));
        }
        series = series.checked_add(&f.series.scale(*c))?;
        pi = pi.max(f.pole_inf);
        pd = pd.max(f.pole_d0);
    }
    Ok(LedgeredFunction {
        series,
        fp_exponent: 0,
        pole_inf: pi,
        pole_d0: pd,
        rational_p: first.rational_p,
        recipe,
    })
}

/// `((m-1)(q+1), 2)`: the pole bounds of `dy`.
pub fn canonical_bound(ctx: &CurveContext) -> (i64, i64) {
    (((ctx.m - 1) * (ctx.q + 1)) as i64, 2)
}

/// Checks `s = c0 T^lead + c1 T^(lead+1) + ...` on the coefficients below
/// the truncation order.
fn check_shape(s: &TruncSeries, lead: usize, c0: Fel, c1: Fel, what: &str) -> Result<()> {
    let n = s.order();
    if lead >= n {
        return Err(Error::Witness(format!(
            "{what}: T^{lead} is beyond the truncation T^{n}"
        )));
    }
    for k in 0..lead {
        if !s.coeff(k).is_zero() {
            return Err(Error::Witness(format!(
                "{what}: unexpected term at T^{k} in {s:?}"
            )));
        }
    }
    if s.coeff(lead) != c0 || (lead + 1 < n && s.coeff(lead + 1) != c1) {
        return Err(Error::Witness(format!(
            "{what}: expected {c0:?}*T^{lead} + {c1:?}*T^{} but found {s:?}",
            lead + 1
        )));
    }
    Ok(())
}

/// Lazily built witness families at one affine place.
pub struct Kit {
    q: u64,
    alpha: Fel,
    pf: Option<PolyFamily>,
    special: bool,
    p_order: Option<u64>,
    q_order: Option<u64>,
    pub x_a: LedgeredFunction,
    pub y_b: LedgeredFunction,
    pub f0: LedgeredFunction,
    /// `y/b = (1+T)^3`; `y` vanishes to order 3 along `D0`.
    y_over_b: LedgeredFunction,
    f1_raw: Option<LedgeredFunction>,
    f: Vec<LedgeredFunction>,
    ft: Vec<LedgeredFunction>,
    g: Vec<LedgeredFunction>,
}

impl Kit {
    /// Set-up at an affine place; fails at the boundary places.
    pub fn new(ctx: &CurveContext, place: &Place) -> Result<Kit> {
        let al = match (place.is_boundary(), alpha(ctx, place)) {
            (false, Alpha::Finite(a)) => a,
            _ => {
                return Err(Error::ExcludedPoint(format!(
                    "no witnesses at {}",
                    place.variant()
                )))
            }
        };
        let class = classify_rationality(ctx, al)?;
        Self::for_alpha(ctx, al, class)
    }

    /// Set-up from alpha alone (the expansions depend on nothing else).
    pub fn for_alpha(ctx: &CurveContext, al: Fel, class: Rationality) -> Result<Kit> {
        let q = ctx.q;
        let b = basics_for_alpha(al, q as usize);
        let rational = class.is_rational();
        let special = class == Rationality::Special;
        let (pf, p_order, q_order) = if special {
            (None, None, None)
        } else {
            let pr = alpha_profile(ctx, al, 0)?;
            (Some(ctx.family(al.field())?), Some(pr.i), pr.k)
        };
        let qi = q as i64;
        let f = al.field();
        let one_t = TruncSeries::from_coeffs(f, q as usize, &[f.one(), f.one()]);
        Ok(Kit {
            q,
            alpha: al,
            pf,
            special,
            p_order,
            q_order,
            x_a: LedgeredFunction::primitive(b.x_a, ctx.x_pole() as i64, 0, rational, "x_a"),
            y_b: LedgeredFunction::primitive(b.y_b, qi, 0, rational, "y_b"),
            f0: LedgeredFunction::primitive(b.f0, qi, 0, rational, "f_0"),
            y_over_b: LedgeredFunction::primitive(one_t.pow(3), qi, -3, rational, "y/b"),
            f1_raw: None,
            f: Vec::new(),
            ft: Vec::new(),
            g: Vec::new(),
        })
    }

    pub fn alpha(&self) -> Fel {
        self.alpha
    }

    /// P-order, `None` at special alpha.
    pub fn p_order(&self) -> Option<u64> {
        self.p_order
    }

    /// Q-order, `None` when infinite or at special alpha.
    pub fn q_order(&self) -> Option<u64> {
        self.q_order
    }

    fn pf(&self) -> Result<&PolyFamily> {
        self.pf
            .as_ref()
            .ok_or_else(|| Error::ExcludedPoint("polynomial values at special alpha".into()))
    }

    fn p(&self, i: u64) -> Result<Fel> {
        self.pf()?.eval_p(i as i64, self.alpha)
    }

    fn qv(&self, i: u64) -> Result<Fel> {
        self.pf()?.eval_q(i as i64, self.alpha)
    }

    fn q1m(&self, i: u64) -> Result<Fel> {
        self.pf()?.eval_q1m(i as i64, self.alpha)
    }

    fn r(&self, i: u64) -> Result<Fel> {
        self.pf()?.eval_r(i as i64, self.alpha)
    }

    fn c(&self, k: i64) -> Fel {
        self.alpha.field().int(k)
    }

    /// `f_1 = -9 y_b^2 + 27 f_0 - 3(alpha-5) y_b f_0 + (alpha^2-alpha-5) f_0^2`.
    fn f1_raw(&mut self) -> Result<LedgeredFunction> {
        if let Some(f) = &self.f1_raw {
            return Ok(f.clone());
        }
        let a = self.alpha;
        let yy = self.y_b.mul(&self.y_b)?;
        let yf = self.y_b.mul(&self.f0)?;
        let ff = self.f0.mul(&self.f0)?;
        let f1 = lincomb(
            &[
                (self.c(-9), &yy),
                (self.c(27), &self.f0),
                ((a - 5) * -3, &yf),
                (a * a - a - 5, &ff),
            ],
            "f_1".into(),
        )?;
        self.f1_raw = Some(f1.clone());
        Ok(f1)
    }

    /// `f_j`, building the chain up to `j` on demand. Needs a non-special
    /// alpha with P-order at least `j`.
    pub fn f(&mut self, j: u64) -> Result<LedgeredFunction> {
        let i = self
            .p_order
            .ok_or_else(|| Error::ExcludedPoint("f_j at special alpha".into()))?;
        if j > i {
            return Err(Error::Witness(format!(
                "f_{j} requested beyond the P-order {i}"
            )));
        }
        while (self.f.len() as u64) <= j {
            let k = self.f.len() as u64;
            let next = self.build_f_step(k)?;
            let (c0, c1) = (self.p(k + 1)? * 3, self.qv(k + 1)?);
            check_shape(&next.series, 3 * k as usize + 2, c0, c1, &format!("f_{k}"))?;
            self.f.push(next);
        }
        Ok(self.f[j as usize].clone())
    }

    fn build_f_step(&mut self, k: u64) -> Result<LedgeredFunction> {
        let a = self.alpha;
        match k {
            0 => Ok(self.f0.clone()),
            1 => self.f1_raw(),
            2 => {
                let p2 = self.p(2)?;
                let f1 = self.f1_raw()?;
                let inv = (a + 1)
                    .pow(3)
                    .inv()
                    .map_err(|_| Error::Witness("f_2 needs alpha != -1".into()))?;
                let ffy = self.f0.mul(&self.f0)?.mul(&self.y_b)?;
                let fff = self.f0.pow(3)?;
                let f1f0 = f1.mul(&self.f0)?;
                let poly = a.pow(4) + a.pow(3) - a * a * 4 - a * 4 + 3;
                lincomb(
                    &[
                        (inv * p2 * -27, &f1),
                        (inv * p2 * p2 * 3, &ffy),
                        (inv * p2 * poly * -3, &fff),
                        (a * a * 7 - a * 16 + 7, &f1f0),
                    ],
                    "f_2".into(),
                )
            }
            _ => {
                let w = a * a - a + 1;
                let den = w * w * self.p(k - 2)?;
                let den = den
                    .inv()
                    .map_err(|_| Error::Witness(format!("P_{}(alpha) = 0", k - 2)))?;
                let f1 = self.f1_raw()?;
                let t1 = self.f[k as usize - 2].mul(&f1)?;
                let t2 = self.f[k as usize - 1].mul(&self.f0)?;
                let c1 = -self.p(k)? * den;
                let c2 = self.p(2)? * self.p(k - 1)? * den;
                lincomb(&[(c1, &t1), (c2, &t2)], format!("f_{k}"))
            }
        }
    }

    /// `f~_j` at special alpha.
    pub fn ftilde(&mut self, j: u64) -> Result<LedgeredFunction> {
        if !self.special {
            return Err(Error::ExcludedPoint(
                "f~_j needs alpha^2 - alpha + 1 = 0".into(),
            ));
        }
        let a = self.alpha;
        while (self.ft.len() as u64) <= j {
            let k = self.ft.len() as u64;
            let next = match k {
                0 => {
                    let mut f = self.f0.clone();
                    f.recipe = "f~_0".into();
                    f
                }
                1 => {
                    let f1 = self.f1_raw()?;
                    lincomb(&[((a * 2 - 1) / 9, &f1)], "f~_1".into())?
                }
                _ => {
                    let third = self.c(3).inv()?;
                    let (fa, fb, f0) = (
                        &self.ft[k as usize - 1],
                        &self.ft[k as usize - 2],
                        &self.ft[0],
                    );
                    let t2 = fb.mul(f0)?.mul(&self.y_b)?;
                    let t3 = fb.mul(f0)?.mul(f0)?;
                    let t4 = fa.mul(f0)?;
                    lincomb(
                        &[
                            (a * 6 - 3, fa),
                            (-(a * 2 - 1) * third, &t2),
                            ((a * 3 - 2) * third, &t3),
                            (-(a - 2), &t4),
                        ],
                        format!("f~_{k}"),
                    )?
                }
            };
            check_shape(
                &next.series,
                3 * k as usize + 2,
                self.c(3),
                a + 1,
                &format!("f~_{k}"),
            )?;
            self.ft.push(next);
        }
        Ok(self.ft[j as usize].clone())
    }

    /// `g_l`, defined up to the Q-order at non-special alpha.
    pub fn g(&mut self, l: u64) -> Result<LedgeredFunction> {
        if let Some(k) = self.q_order {
            if l > k {
                return Err(Error::Witness(format!(
                    "g_{l} requested beyond the Q-order {k}"
                )));
            }
        }
        let a = self.alpha;
        let f = a.field();
        let n = self.q as usize;
        let one_t2 = TruncSeries::from_coeffs(f, n, &[f.one(), f.int(2), f.one()]);
        while (self.g.len() as u64) <= l {
            let k = self.g.len() as u64;
            let next = match k {
                0 => {
                    // b (y_b - x_a) / y: the factor b/y has a zero of order q
                    // at infinity and poles of order 3 along D0, while y_b - x_a
                    // vanishes simply along D0.
                    let diff = &self.y_b.series - &self.x_a.series;
                    let series = diff.checked_mul(&self.y_over_b.series.inv()?)?;
                    LedgeredFunction::primitive(series, 0, 2, self.x_a.rational_p, "g_0")
                }
                1 => {
                    let g0 = self.g[0].clone();
                    let t1 = g0.mul(&g0)?.mul(&self.y_over_b)?;
                    let t3 = self.f0.mul(&g0)?;
                    lincomb(
                        &[
                            (self.c(9), &t1),
                            ((a - 2) * (a - 2) * -3, &self.f0),
                            (-(a * a + a * 2 - 2), &t3),
                        ],
                        "g_1".into(),
                    )?
                }
                _ => {
                    let w = a * a - a + 1;
                    let den = (w * w * self.q1m(k - 2)?)
                        .inv()
                        .map_err(|_| Error::Witness(format!("Q_{}(1-alpha) = 0", k - 2)))?;
                    let f1 = self.f1_raw()?;
                    let t1 = self.g[k as usize - 1].mul(&self.f0)?;
                    let t2 = self.g[k as usize - 2].mul(&f1)?;
                    let c1 = self.p(2)? * self.q1m(k - 1)? * den;
                    let c2 = -self.q1m(k)? * den;
                    lincomb(&[(c1, &t1), (c2, &t2)], format!("g_{k}"))?
                }
            };
            let scaled = next.series.checked_mul(&one_t2)?;
            check_shape(
                &scaled,
                3 * k as usize + 1,
                self.q1m(k + 1)?,
                -self.r(k + 1)?,
                &format!("g_{k}"),
            )?;
            self.g.push(next);
        }
        Ok(self.g[l as usize].clone())
    }

    /// A function with a simple zero at `P` and pole order at most `q` at
    /// infinity: `x_a`, except at `alpha = -1` where `x_a = -T^2` and `y_b`
    /// (always `3T + ...`) takes its place.
    pub fn simple_zero(&self) -> &LedgeredFunction {
        if (self.alpha + 1).is_zero() {
            &self.y_b
        } else {
            &self.x_a
        }
    }

    fn fp(&self, e: i64) -> LedgeredFunction {
        LedgeredFunction::fp_power(&self.f0, e)
    }
}

fn kit_for(ctx: &CurveContext, place: &Place) -> Result<Kit> {
    Kit::new(ctx, place)
}

/// `f_0, ..., f_{j_max}` at a non-special place.
pub fn build_f(ctx: &CurveContext, place: &Place, j_max: u64) -> Result<Vec<LedgeredFunction>> {
    let mut kit = kit_for(ctx, place)?;
    (0..=j_max).map(|j| kit.f(j)).collect()
}

/// `f~_0, ..., f~_{i_max}` at a special place.
pub fn build_ftilde(
    ctx: &CurveContext,
    place: &Place,
    i_max: u64,
) -> Result<Vec<LedgeredFunction>> {
    let mut kit = kit_for(ctx, place)?;
    (0..=i_max).map(|j| kit.ftilde(j)).collect()
}

/// `g_0, ..., g_{l_max}` at a non-special place.
pub fn build_g(ctx: &CurveContext, place: &Place, l_max: u64) -> Result<Vec<LedgeredFunction>> {
    let mut kit = kit_for(ctx, place)?;
    (0..=l_max).map(|l| kit.g(l)).collect()
}

/// A semigroup element `n` together with a function whose only pole is at
/// `P`, of order `n`.
#[derive(Debug, Clone)]
pub struct MembershipWitness {
    pub element: u64,
    pub witness: LedgeredFunction,
}

impl MembershipWitness {
    /// `v_P = -n`, no pole at infinity and none along `D0`.
    pub fn valid(&self) -> bool {
        self.witness.valuation().ok() == Some(-(self.element as i64))
            && self.witness.pole_inf <= 0
            && self.witness.pole_d0 <= 0
    }

    pub fn to_json(&self) -> Value {
        json!({"element": self.element, "valid": self.valid(), "witness": self.witness.to_json()})
    }
}

/// Witnesses for the generators at a rational affine place: `q`, `q+1`,
/// `q-1`, the elements `(q-1) + j(q-2)`, and `(q-1) + i(q-2) - 1` when the
/// P-order `i` is below `m`.
pub fn rational_membership_witnesses(
    ctx: &CurveContext,
    place: &Place,
) -> Result<Vec<MembershipWitness>> {
    let mut kit = kit_for(ctx, place)?;
    if !kit.x_a.rational_p {
        return Err(Error::ExcludedPoint(
            "membership witnesses need a rational place".into(),
        ));
    }
    let q = ctx.q;
    let m = ctx.m;
    let mut out = Vec::new();
    let mut push = |n: u64, w: LedgeredFunction| {
        out.push(MembershipWitness {
            element: n,
            witness: w,
        })
    };
    push(q, kit.y_b.mul(&kit.fp(-1))?);
    push(q + 1, kit.fp(-1));
    let (fs, extra): (Vec<LedgeredFunction>, Option<LedgeredFunction>) = if kit.special {
        ((0..m).map(|j| kit.ftilde(j)).collect::<Result<_>>()?, None)
    } else {
        let i = kit.p_order.unwrap();
        if i <= m - 1 {
            (
                (0..i).map(|j| kit.f(j)).collect::<Result<_>>()?,
                Some(kit.f(i)?),
            )
        } else {
            ((0..m).map(|j| kit.f(j)).collect::<Result<_>>()?, None)
        }
    };
    for (j, f) in fs.iter().enumerate() {
        let j = j as u64;
        push((q - 1) + j * (q - 2), f.mul(&kit.fp(-(j as i64 + 1)))?);
    }
    if let Some(fi) = extra {
        let i = kit.p_order.unwrap();
        push((q - 1) + i * (q - 2) - 1, fi.mul(&kit.fp(-(i as i64 + 1)))?);
    }
    Ok(out)
}

/// The generic gap set `{jq + k : 0 <= j < m, 1 <= k <= q-2-3j}`.
pub fn generic_gaps(ctx: &CurveContext) -> Vec<u64> {
    let (q, m) = (ctx.q, ctx.m);
    let mut v: Vec<u64> = (0..m)
        .flat_map(|j| (1..=q - 2 - 3 * j).map(move |k| j * q + k))
        .collect();
    v.sort_unstable();
    v
}

/// The removed gaps `D` and their replacements `U = D + 1` for an
/// exceptional place with orders `(i, K)`.
pub fn exceptional_swap(ctx: &CurveContext, i: u64, k: u64) -> (Vec<u64>, Vec<u64>) {
    let (q, m) = (ctx.q, ctx.m);
    let top = (m - k - 1) / (i + 1);
    let d: Vec<u64> = (0..=top)
        .map(|l| (m - k - 1) * q + 3 * k + 2 - (q - 3) * l * (i + 1))
        .collect();
    let u = d.iter().map(|x| x + 1).collect();
    (d, u)
}

/// The gap set `(G_gen \ D) U U` of an exceptional place.
pub fn exceptional_gaps(ctx: &CurveContext, i: u64, k: u64) -> Vec<u64> {
    let (d, u) = exceptional_swap(ctx, i, k);
    let mut v: Vec<u64> = generic_gaps(ctx)
        .into_iter()
        .filter(|x| !d.contains(x))
        .chain(u)
        .collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// One certified gap.
#[derive(Debug, Clone)]
pub struct GapEntry {
    pub gap: u64,
    pub witness: Option<LedgeredFunction>,
    /// Why no valid witness was produced, if so.
    pub problem: Option<String>,
}

impl GapEntry {
    pub fn valid(&self, bound: (i64, i64)) -> bool {
        match &self.witness {
            Some(w) => {
                self.problem.is_none()
                    && w.fp_exponent >= 0
                    && w.within(bound)
                    && w.valuation().ok() == Some(self.gap as i64 - 1)
            }
            None => false,
        }
    }
}

/// Witnesses for a claimed gap set at a non-rational place.
#[derive(Debug, Clone)]
pub struct GapCertificate {
    pub place: Value,
    /// `generic` or `exceptional`.
    pub kind: &'static str,
    pub i: u64,
    pub k: Option<u64>,
    pub claimed: Vec<u64>,
    pub entries: Vec<GapEntry>,
    pub genus: u64,
    pub bound: (i64, i64),
    /// Deviations from the expected construction, reported as data.
    pub findings: Vec<String>,
}

impl GapCertificate {
    pub fn all_witnessed(&self) -> bool {
        self.entries.iter().all(|e| e.valid(self.bound))
    }

    pub fn count_ok(&self) -> bool {
        self.claimed.len() as u64 == self.genus
    }

    pub fn closed(&self) -> bool {
        closure_failure(&self.claimed).is_none()
    }

    pub fn valid(&self) -> bool {
        self.all_witnessed() && self.count_ok() && self.closed() && self.findings.is_empty()
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|e| {
                json!({
                    "gap": e.gap,
                    "valid": e.valid(self.bound),
                    "witness": e.witness.as_ref().map(|w| w.to_json()),
                    "problem": e.problem,
                })
            })
            .collect();
        json!({
            "place": self.place,
            "kind": self.kind,
            "i": self.i,
            "K": self.k,
            "gaps": self.claimed,
            "bound": {"pole_inf": self.bound.0, "pole_D0": self.bound.1},
            "entries": entries,
            "count_ok": self.count_ok(),
            "closed": self.closed(),
            "findings": self.findings,
            "valid": self.valid(),
        })
    }
}

/// Summary of a certificate without the witness list.
#[derive(Debug, Clone, Serialize)]
pub struct CertificateSummary {
    pub kind: &'static str,
    pub gaps: usize,
    pub witnessed: usize,
    pub count_ok: bool,
    pub closed: bool,
    pub findings: Vec<String>,
    pub valid: bool,
}

impl GapCertificate {
    pub fn summary(&self) -> CertificateSummary {
        CertificateSummary {
            kind: self.kind,
            gaps: self.claimed.len(),
            witnessed: self.entries.iter().filter(|e| e.valid(self.bound)).count(),
            count_ok: self.count_ok(),
            closed: self.closed(),
            findings: self.findings.clone(),
            valid: self.valid(),
        }
    }
}

/// `h_{j,k}` of the generic construction: `F_P^j` for `k = 1`,
/// `F_P^j g_l {1, x_a, f_0}` for `k = 3l + 2, 3l + 3, 3l + 4` below
/// `q-2-3j`, and `F_P^j g_{m-j-1}` for `k = q-2-3j`. At `alpha = -1` the
/// factor `x_a` is replaced by `y_b` (see [`Kit::simple_zero`]).
fn generic_h(kit: &mut Kit, ctx: &CurveContext, j: u64, k: u64) -> Result<LedgeredFunction> {
    let fpj = kit.fp(j as i64);
    if k == 1 {
        return Ok(fpj);
    }
    if k == ctx.q - 2 - 3 * j {
        return fpj.mul(&kit.g(ctx.m - j - 1)?);
    }
    let l = (k - 2) / 3;
    let base = fpj.mul(&kit.g(l)?)?;
    match k - 3 * l {
        2 => Ok(base),
        3 => base.mul(kit.simple_zero()),
        4 => base.mul(&kit.f0),
        _ => unreachable!(),
    }
}

fn nonrational_kit(ctx: &CurveContext, place: &Place) -> Result<Kit> {
    let kit = kit_for(ctx, place)?;
    if kit.x_a.rational_p {
        return Err(Error::ExcludedPoint(
            "gap certificates are for non-rational places".into(),
        ));
    }
    Ok(kit)
}

fn entry(gap: u64, w: Result<LedgeredFunction>) -> GapEntry {
    match w {
        Ok(w) => GapEntry {
            gap,
            witness: Some(w),
            problem: None,
        },
        Err(e) => GapEntry {
            gap,
            witness: None,
            problem: Some(e.to_string()),
        },
    }
}

/// Certificate for `G_gen` at a non-rational place with Q-order at least m.
pub fn gap_witnesses_generic(ctx: &CurveContext, place: &Place) -> Result<GapCertificate> {
    generic_cert(ctx, nonrational_kit(ctx, place)?, place_json(ctx, place))
}

fn generic_cert(ctx: &CurveContext, mut kit: Kit, place: Value) -> Result<GapCertificate> {
    if let Some(k) = kit.q_order {
        if k < ctx.m {
            return Err(Error::ExcludedPoint(format!(
                "Q-order {k} < m: use the exceptional certificate"
            )));
        }
    }
    let claimed = generic_gaps(ctx);
    let entries = claimed
        .iter()
        .map(|&gap| {
            let (j, k) = ((gap - 1) / ctx.q, (gap - 1) % ctx.q + 1);
            entry(gap, generic_h(&mut kit, ctx, j, k))
        })
        .collect();
    Ok(GapCertificate {
        place,
        kind: "generic",
        i: kit.p_order.unwrap(),
        k: kit.q_order,
        claimed,
        entries,
        genus: ctx.genus,
        bound: canonical_bound(ctx),
        findings: Vec::new(),
    })
}

/// Certificate for the swapped gap set at a non-rational place with
/// Q-order `K <= m-1`.
pub fn gap_witnesses_exceptional(ctx: &CurveContext, place: &Place) -> Result<GapCertificate> {
    exceptional_cert(ctx, nonrational_kit(ctx, place)?, place_json(ctx, place))
}

fn exceptional_cert(ctx: &CurveContext, mut kit: Kit, place: Value) -> Result<GapCertificate> {
    let i = kit.p_order.unwrap();
    let big_k = match kit.q_order {
        Some(k) if k < ctx.m => k,
        _ => {
            return Err(Error::ExcludedPoint(
                "Q-order >= m: use the generic certificate".into(),
            ))
        }
    };
    let (q, m) = (ctx.q, ctx.m);
    let claimed = exceptional_gaps(ctx, i, big_k);
    let mut findings = Vec::new();
    let mut entries = Vec::new();
    for &gap in &claimed {
        let (j, k) = ((gap - 1) / q, (gap - 1) % q + 1);
        let w = if k < 3 * big_k + 2 && k <= q - 2 - 3 * j {
            generic_h(&mut kit, ctx, j, k)
        } else if k == 3 * big_k + 2 {
            if j + big_k + 2 <= m {
                let w = kit.fp(j as i64).mul(&kit.g(big_k - 1)?)?;
                w.mul(&kit.f0).and_then(|w| w.mul(&kit.x_a))
            } else {
                Err(Error::Witness(format!(
                    "gap {gap}: k = 3K+2 with j = {j} > m-K-2"
                )))
            }
        } else {
            exceptional_hat(&mut kit, j, k, i, big_k, &mut findings)
                .and_then(|h| kit.fp(j as i64).mul(&kit.g(big_k)?)?.mul(&h))
        };
        entries.push(entry(gap, w));
    }
    Ok(GapCertificate {
        place,
        kind: "exceptional",
        i,
        k: Some(big_k),
        claimed,
        entries,
        genus: ctx.genus,
        bound: canonical_bound(ctx),
        findings,
    })
}

/// `h^_{j,k}` for `k >= 3K+3`, chosen by the decomposition
/// `k - 3K - 2 = 3(i+1)c + 3s + r`.
fn exceptional_hat(
    kit: &mut Kit,
    j: u64,
    k: u64,
    i: u64,
    big_k: u64,
    findings: &mut Vec<String>,
) -> Result<LedgeredFunction> {
    let t = k - 3 * big_k - 2;
    let c = t / (3 * (i + 1));
    let d = t / 3;
    let s = d - c * (i + 1);
    let r = t - 3 * d;
    if s > i || r > 2 {
        findings.push(format!(
            "(j, k) = ({j}, {k}): s = {s}, r = {r} out of range"
        ));
    }
    let one = LedgeredFunction::one(&kit.f0);
    let fic = if c > 0 {
        kit.f(i)?.pow(c)?
    } else {
        one.clone()
    };
    if s > 0 {
        let base = fic.mul(&kit.f(s - 1)?)?;
        return match r {
            0 => Ok(base),
            1 => base.mul(&kit.x_a),
            _ => base.mul(&kit.f0),
        };
    }
    match r {
        0 => {
            if c == 0 {
                findings.push(format!("(j, k) = ({j}, {k}): s = r = 0 with c = 0"));
                return Err(Error::Witness("case s = r = 0 needs c >= 1".into()));
            }
            let base = if c > 1 { kit.f(i)?.pow(c - 1)? } else { one };
            base.mul(&kit.f(i - 1)?)?.mul(&kit.f0)?.mul(&kit.x_a)
        }
        1 => Ok(fic),
        _ => fic.mul(&kit.x_a),
    }
}

/// The certificate matching the place's Q-order.
pub fn gap_certificate(ctx: &CurveContext, place: &Place) -> Result<GapCertificate> {
    dispatch(ctx, nonrational_kit(ctx, place)?, place_json(ctx, place))
}

/// The certificate for every place with the given non-rational alpha.
/// The local expansions depend on alpha only, so this certifies fibres
/// whose field of definition is too large to construct.
pub fn gap_certificate_for_alpha(ctx: &CurveContext, al: Fel) -> Result<GapCertificate> {
    let class = classify_rationality(ctx, al)?;
    if class.is_rational() {
        return Err(Error::ExcludedPoint(
            "gap certificates are for non-rational places".into(),
        ));
    }
    let kit = Kit::for_alpha(ctx, al, class)?;
    dispatch(
        ctx,
        kit,
        json!({"alpha": al.literal(), "rationality_class": class.as_str()}),
    )
}

fn dispatch(ctx: &CurveContext, kit: Kit, place: Value) -> Result<GapCertificate> {
    match kit.q_order {
        Some(k) if k < ctx.m => exceptional_cert(ctx, kit, place),
        _ => generic_cert(ctx, kit, place),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{enumerate_rational_places, fibres_of_degree, make_context};
    use crate::numerical::NumericalSemigroup;

    #[test]
    fn canonical_bounds() {
        for (q, b) in [(7, (8, 2)), (13, (42, 2)), (4, (0, 2))] {
            assert_eq!(canonical_bound(&make_context(q).unwrap()), b);
        }
    }

    #[test]
    fn gap_set_shapes_q7() {
        let ctx = make_context(7).unwrap();
        assert_eq!(generic_gaps(&ctx), vec![1, 2, 3, 4, 5, 8, 9]);
        assert_eq!(exceptional_gaps(&ctx, 4, 1), vec![1, 2, 3, 4, 6, 8, 9]);
    }

    #[test]
    fn rational_witnesses_q7() {
        let ctx = make_context(7).unwrap();
        for place in enumerate_rational_places(&ctx)
            .iter()
            .filter(|p| !p.is_boundary())
        {
            let ws = rational_membership_witnesses(&ctx, place).unwrap();
            assert!(ws.iter().all(|w| w.valid()), "{place:?}");
            let gens: Vec<u64> = ws.iter().map(|w| w.element).collect();
            let s = NumericalSemigroup::from_generators(&gens).unwrap();
            assert_eq!(s.genus(), ctx.genus, "{place:?} {gens:?}");
        }
    }

    #[test]
    fn special_witness_set_q7() {
        let ctx = make_context(7).unwrap();
        let place = enumerate_rational_places(&ctx)
            .into_iter()
            .find(|p| {
                matches!(alpha(&ctx, p), Alpha::Finite(a) if (a * a - a + 1).is_zero())
                    && !p.is_boundary()
            })
            .unwrap();
        let mut els: Vec<u64> = rational_membership_witnesses(&ctx, &place)
            .unwrap()
            .iter()
            .map(|w| w.element)
            .collect();
        els.sort();
        assert_eq!(els, vec![6, 7, 8, 11]);
    }

    #[test]
    fn nonrational_certificates_q7() {
        let ctx = make_context(7).unwrap();
        for fib in fibres_of_degree(&ctx, 2).unwrap() {
            let cert = gap_certificate(&ctx, &fib.places[0]).unwrap();
            assert!(cert.valid(), "{}", cert.to_json());
        }
    }

    #[test]
    fn exceptional_certificates_q7() {
        let ctx = make_context(7).unwrap();
        let f = ctx.ext(2).unwrap();
        let mut places = 0;
        for al in f.elements().skip(2) {
            let Ok(pr) = crate::orders::alpha_profile(&ctx, al, 0) else {
                continue;
            };
            if pr.class.is_rational() || pr.k.map_or(true, |k| k >= ctx.m) {
                continue;
            }
            assert_eq!((pr.i, pr.k), (4, Some(1)));
            let fib = crate::curve::places_with_alpha(&ctx, al).unwrap();
            places += fib.places.len();
            let cert = gap_certificate(&ctx, &fib.places[0]).unwrap();
            assert_eq!(cert.kind, "exceptional");
            assert_eq!(cert.claimed, vec![1, 2, 3, 4, 6, 8, 9]);
            assert!(cert.valid(), "{}", cert.to_json());
        }
        assert_eq!(places, 64);
    }
}
