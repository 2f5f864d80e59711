//! The verify-all orchestration: suites of checks emitted as records, in a
//! canonical order, followed by one summary record.

use crate::aut::{orbits, verify_group};
use crate::curve::{
    alpha, curve_census, enumerate_rational_places, fibres_of_degree, place_json, Alpha,
    CurveContext, Place,
};
use crate::error::{Error, Result};
use crate::field::{Fel, Field};
use crate::orders::{alpha_profile, order_census};
use crate::polyfam::{interpolate_family, Family, PolyFamily};
use crate::semigroup::{
    class_alphas, verdict, verify_places, weierstrass_census, weierstrass_classes,
};
use crate::witness::{gap_certificate_for_alpha, generic_gaps};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 0x5933_0001;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    PolyfamIdentities,
    Census,
    Orders,
    RationalSemigroups,
    NonrationalSemigroups,
    Aut,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::PolyfamIdentities,
        Suite::Census,
        Suite::Orders,
        Suite::RationalSemigroups,
        Suite::NonrationalSemigroups,
        Suite::Aut,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::PolyfamIdentities => "polyfam-identities",
            Suite::Census => "census",
            Suite::Orders => "orders",
            Suite::RationalSemigroups => "rational-semigroups",
            Suite::NonrationalSemigroups => "nonrational-semigroups",
            Suite::Aut => "aut",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

/// Parses `all` or a comma-separated list of suite names.
pub fn parse_suites(s: &str) -> Result<Vec<Suite>> {
    if s == "all" {
        return Ok(Suite::ALL.to_vec());
    }
    let mut v = s
        .split(',')
        .map(|x| x.trim().parse())
        .collect::<Result<Vec<Suite>>>()?;
    v.sort();
    v.dedup();
    Ok(v)
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub q: u64,
    /// Largest extension degree d of GF(q^(2d)) for non-rational places.
    pub d_max: u32,
    pub suites: Vec<Suite>,
    pub seed: u64,
    /// Random identity samples per field.
    pub samples: usize,
}

impl RunConfig {
    pub fn new(q: u64) -> RunConfig {
        RunConfig {
            q,
            d_max: 3,
            suites: Suite::ALL.to_vec(),
            seed: DEFAULT_SEED,
            samples: 1000,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.d_max == 0 {
            return Err(Error::Parse("d_max must be at least 1".into()));
        }
        Ok(())
    }
}

/// One check.
#[derive(Debug, Clone, Serialize)]
pub struct Record {
    pub suite: Suite,
    pub check: String,
    pub subject: String,
    pub status: &'static str,
    pub detail: Value,
}

impl Record {
    fn new(
        suite: Suite,
        check: &str,
        subject: impl Into<String>,
        ok: bool,
        detail: Value,
    ) -> Record {
        Record {
            suite,
            check: check.into(),
            subject: subject.into(),
            status: if ok { "PASS" } else { "FAIL" },
            detail,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == "PASS"
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("records serialize")
    }

    /// `status,suite,check,subject`, quoted where needed.
    pub fn to_csv(&self) -> String {
        [self.status, self.suite.name(), &self.check, &self.subject]
            .map(csv_field)
            .join(",")
    }

    pub fn to_human(&self) -> String {
        format!(
            "{} {:<22} {:<14} {}",
            self.status,
            self.suite.name(),
            self.check,
            self.subject
        )
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Aggregate over all records of a run.
#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub record: &'static str,
    pub q: u64,
    pub d_max: u32,
    pub seed: u64,
    pub suites: Vec<Suite>,
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    /// Suite -> (passed, failed).
    pub by_suite: BTreeMap<String, (usize, usize)>,
    /// Rational places verified, when that suite ran.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rational_places: Option<PlaceTally>,
    /// Failing checks, as `suite/check/subject`.
    pub failures: Vec<String>,
    pub status: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct PlaceTally {
    pub total: usize,
    pub pass: usize,
    pub by_class: BTreeMap<String, usize>,
    /// The per-class counts add up to `(q^3 + 2q^2 + 3)/3`.
    pub reconciles: bool,
}

impl Summary {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("summary serializes")
    }
}

/// Output of [`run`].
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub records: Vec<Record>,
    pub summary: Summary,
}

/// Runs the selected suites in canonical order.
pub fn run(ctx: &CurveContext, cfg: &RunConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let mut suites = cfg.suites.clone();
    suites.sort();
    suites.dedup();
    let mut records = Vec::new();
    let mut tally = None;
    for &s in &suites {
        match s {
            Suite::PolyfamIdentities => records.extend(polyfam_suite(ctx, cfg)?),
            Suite::Census => records.extend(census_suite(ctx, cfg)?),
            Suite::Orders => records.extend(orders_suite(ctx, cfg)?),
            Suite::RationalSemigroups => {
                let (r, t) = rational_suite(ctx);
                records.extend(r);
                tally = Some(t);
            }
            Suite::NonrationalSemigroups => records.extend(nonrational_suite(ctx, cfg)?),
            Suite::Aut => records.extend(aut_suite(ctx)?),
        }
    }
    let mut by_suite: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for r in &records {
        let e = by_suite.entry(r.suite.name().to_string()).or_default();
        if r.passed() {
            e.0 += 1;
        } else {
            e.1 += 1;
        }
    }
    let failures: Vec<String> = records
        .iter()
        .filter(|r| !r.passed())
        .map(|r| format!("{}/{}/{}", r.suite, r.check, r.subject))
        .collect();
    let passed = records.iter().filter(|r| r.passed()).count();
    let summary = Summary {
        record: "summary",
        q: ctx.q,
        d_max: cfg.d_max,
        seed: cfg.seed,
        suites,
        checks: records.len(),
        passed,
        failed: records.len() - passed,
        by_suite,
        rational_places: tally,
        status: if failures.is_empty() { "PASS" } else { "FAIL" },
        failures,
    };
    Ok(RunOutput { records, summary })
}

/// A uniformly random `s` where every family member and identity is
/// defined: `s` outside `{0, 1}` and `s^2 - s + 1 != 0`.
pub fn random_admissible(f: Field, rng: &mut ChaCha8Rng) -> Fel {
    loop {
        let s = f.from_rank(rng.gen_range(0..f.order()));
        if !s.is_zero() && !s.is_one() && !(s * s - s + 1).is_zero() {
            return s;
        }
    }
}

/// Largest index sampled for `(i, j, l)`.
const MAX_INDEX: i64 = 30;

/// Random identity checks over `f`: returns the number of samples and the
/// failing tuples.
pub fn sample_identities(
    pf: &PolyFamily,
    samples: usize,
    seed: u64,
) -> Result<(usize, Vec<(i64, i64, i64, Fel)>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tuples: Vec<(i64, i64, i64, Fel)> = (0..samples)
        .map(|_| {
            let i = rng.gen_range(1..=MAX_INDEX);
            let j = rng.gen_range(1..=MAX_INDEX);
            let l = rng.gen_range(1..=MAX_INDEX);
            (i, j, l, random_admissible(pf.field(), &mut rng))
        })
        .collect();
    let fails: Vec<(i64, i64, i64, Fel)> = tuples
        .par_iter()
        .map(|&(i, j, l, s)| {
            pf.check_identities(i, j, l, s)
                .map(|ok| (!ok).then_some((i, j, l, s)))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok((tuples.len(), fails))
}

/// Interpolation facts about `P_i` and `Q_i`.
#[derive(Debug, Clone, Serialize)]
pub struct InterpolationCheck {
    pub i: i64,
    pub deg_p: Option<usize>,
    pub deg_q: Option<usize>,
    /// Coefficient of `s^(3i-3)` in `P_i`; equals `i`.
    pub p_top: Fel,
    /// Coefficient of `s^(3i-1)` in the numerator of `P_i`; equals
    /// `3i(zeta - zeta^2)`.
    pub numerator_top: Fel,
    /// `p | i`, where the degree of `P_i` drops.
    pub degree_drop: bool,
    pub ok: bool,
}

pub fn interpolation_check(pf: &PolyFamily, i: i64) -> Result<InterpolationCheck> {
    let f = pf.field();
    let z = pf.zeta();
    let p = interpolate_family(pf, Family::P, i)?;
    let q = interpolate_family(pf, Family::Q, i)?;
    let num = interpolate_family(pf, Family::PNum, i)?;
    let top = 3 * i as usize - 3;
    let p_top = p.coeffs.get(top).copied().unwrap_or(f.zero());
    let numerator_top = num.coeffs.get(top + 2).copied().unwrap_or(f.zero());
    let degree_drop = i as u64 % f.p() == 0;
    let deg_p = p.degree();
    let deg_q = q.degree();
    let ok = deg_q == Some(3 * i as usize - 2)
        && q.leading() == Some(f.one())
        && p_top == f.int(i)
        && numerator_top == (z - z * z) * (3 * i)
        && if degree_drop {
            deg_p.map_or(true, |d| d < top)
        } else {
            deg_p == Some(top)
        };
    Ok(InterpolationCheck {
        i,
        deg_p,
        deg_q,
        p_top,
        numerator_top,
        degree_drop,
        ok,
    })
}

fn polyfam_suite(ctx: &CurveContext, cfg: &RunConfig) -> Result<Vec<Record>> {
    let mut out = Vec::new();
    for d in [1u32, 2] {
        let f = ctx.ext(d)?;
        let pf = ctx.family(f)?;
        let (n, fails) = sample_identities(&pf, cfg.samples, cfg.seed.wrapping_add(d as u64))?;
        let shown: Vec<String> = fails
            .iter()
            .take(5)
            .map(|(i, j, l, s)| format!("({i},{j},{l},{s})"))
            .collect();
        out.push(Record::new(
            Suite::PolyfamIdentities,
            "identities",
            f.descriptor(),
            fails.is_empty() && n == cfg.samples,
            json!({"field": f.descriptor(), "samples": n, "failures": fails.len(), "first_failures": shown}),
        ));
    }
    // GF(q^4) has room for every node count needed up to i = 15.
    let pf = ctx.family(ctx.ext(2)?)?;
    let checks: Vec<InterpolationCheck> = (1..=15)
        .into_par_iter()
        .map(|i| interpolation_check(&pf, i))
        .collect::<Result<_>>()?;
    for c in checks {
        out.push(Record::new(
            Suite::PolyfamIdentities,
            "interpolation",
            format!("i={}", c.i),
            c.ok,
            serde_json::to_value(&c).expect("serializes"),
        ));
    }
    Ok(out)
}

fn census_suite(ctx: &CurveContext, cfg: &RunConfig) -> Result<Vec<Record>> {
    let c = curve_census(ctx)?;
    let w = weierstrass_census(ctx, cfg.d_max)?;
    Ok(vec![
        Record::new(
            Suite::Census,
            "rational-places",
            format!("{} places", c.total),
            c.reconciles,
            serde_json::to_value(&c).expect("serializes"),
        ),
        Record::new(
            Suite::Census,
            "weierstrass",
            format!("{} classes", w.rows.len()),
            w.consistent,
            serde_json::to_value(&w).expect("serializes"),
        ),
    ])
}

/// Number of random alpha values over GF(q^4) profiled by the orders suite.
const EXTENSION_ALPHAS: usize = 200;

fn orders_suite(ctx: &CurveContext, cfg: &RunConfig) -> Result<Vec<Record>> {
    let mut out = Vec::new();
    for i in 1..20u64 {
        if num_integer::gcd(i + 1, ctx.q) != 1 {
            continue;
        }
        let c = order_census(ctx, i)?;
        out.push(Record::new(
            Suite::Orders,
            "order-census",
            format!("i={i}"),
            c.matches(),
            serde_json::to_value(&c).expect("serializes"),
        ));
    }
    let base: Vec<Fel> = ctx.base().elements().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(0x0de5));
    let ext = ctx.ext(2)?;
    let extra: Vec<Fel> = (0..EXTENSION_ALPHAS)
        .map(|_| ext.from_rank(rng.gen_range(0..ext.order())))
        .collect();
    for (label, alphas) in [(ctx.base().descriptor(), base), (ext.descriptor(), extra)] {
        let results: Vec<Option<(bool, String)>> = alphas
            .par_iter()
            .map(|&a| match alpha_profile(ctx, a, 64) {
                Ok(p) => Some((p.consistent(), format!("{a}: {:?}", p.issues))),
                // excluded or special alpha
                Err(_) => None,
            })
            .collect();
        let tested = results.iter().flatten().count();
        let bad: Vec<&String> = results
            .iter()
            .flatten()
            .filter(|(ok, _)| !ok)
            .map(|(_, s)| s)
            .collect();
        out.push(Record::new(
            Suite::Orders,
            "profiles",
            label.clone(),
            bad.is_empty() && tested > 0,
            json!({"field": label, "tested": tested, "inconsistent": bad.len(), "first": bad.iter().take(5).collect::<Vec<_>>()}),
        ));
    }
    Ok(out)
}

fn rational_suite(ctx: &CurveContext) -> (Vec<Record>, PlaceTally) {
    let places = enumerate_rational_places(ctx);
    let reports = verify_places(ctx, &places);
    let mut by_class: BTreeMap<String, usize> = BTreeMap::new();
    let mut out = Vec::new();
    for r in &reports {
        *by_class.entry(r.class.to_string()).or_default() += 1;
        let subject = r.place["variant"].as_str().unwrap_or("?").to_string()
            + &r.place["a"]
                .as_str()
                .map(|a| format!(" a={a}"))
                .unwrap_or_default()
            + &r.place["b"]
                .as_str()
                .map(|b| format!(" b={b}"))
                .unwrap_or_default();
        out.push(Record::new(
            Suite::RationalSemigroups,
            "place",
            subject,
            r.passed(),
            serde_json::to_value(r).expect("serializes"),
        ));
    }
    let q = ctx.q;
    let total = reports.len();
    let tally = PlaceTally {
        total,
        pass: reports.iter().filter(|r| r.passed()).count(),
        reconciles: by_class.values().sum::<usize>() as u64 == (q * q * q + 2 * q * q + 3) / 3,
        by_class,
    };
    (out, tally)
}

/// Verification of one alpha-fibre of non-rational places: the verdict is
/// computed once and every place of the fibre is checked against it.
#[derive(Debug, Clone, Serialize)]
pub struct FibreResult {
    pub alpha: Fel,
    pub degree: u32,
    pub places: usize,
    pub class: &'static str,
    pub i: Option<u64>,
    #[serde(rename = "K")]
    pub k: Option<u64>,
    /// The gap set is the generic one.
    pub generic: bool,
    /// Listed only when not generic.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gaps: Option<Vec<u64>>,
    pub genus: u64,
    pub certificate: Value,
    pub failures: Vec<String>,
    /// Places of the fibre off the curve or with a different alpha.
    pub failing_places: usize,
    pub ok: bool,
}

/// Certifies every non-rational fibre of the given degree.
pub fn verify_fibres(ctx: &CurveContext, d: u32) -> Result<Vec<FibreResult>> {
    let fibres = fibres_of_degree(ctx, d)?;
    let generic = generic_gaps(ctx);
    Ok(fibres
        .par_iter()
        .map(|fib| {
            let v = verdict(ctx, &fib.places[0], false);
            let failing = fib
                .places
                .iter()
                .filter(|p| match p {
                    Place::Affine { a, b } => {
                        !ctx.curve_value(*a, *b).is_zero()
                            || alpha(ctx, p) != Alpha::Finite(fib.alpha)
                    }
                    _ => true,
                })
                .count();
            let gaps = v
                .semigroup
                .as_ref()
                .map(|s| s.gaps().to_vec())
                .unwrap_or_default();
            let is_generic = gaps == generic;
            FibreResult {
                alpha: fib.alpha,
                degree: fib.degree,
                places: fib.places.len(),
                class: v.class.name(),
                i: v.class.i(),
                k: v.class.k(),
                generic: is_generic,
                genus: gaps.len() as u64,
                gaps: (!is_generic).then_some(gaps),
                certificate: v.certificate.clone(),
                ok: failing == 0 && v.failures.is_empty() && fib.places.len() as u64 == ctx.big_m,
                failures: v.failures,
                failing_places: failing,
            }
        })
        .collect())
}

fn nonrational_suite(ctx: &CurveContext, cfg: &RunConfig) -> Result<Vec<Record>> {
    let mut out = Vec::new();
    for d in 2..=cfg.d_max {
        let fibres = match verify_fibres(ctx, d) {
            Ok(f) => f,
            Err(e @ Error::FieldTooLarge { .. }) => {
                out.push(Record::new(
                    Suite::NonrationalSemigroups,
                    "degree",
                    format!("d={d}"),
                    false,
                    json!({"error": e.to_string()}),
                ));
                continue;
            }
            Err(e) => return Err(e),
        };
        for fr in fibres {
            let subject = format!("d={} alpha={}", fr.degree, fr.alpha);
            out.push(Record::new(
                Suite::NonrationalSemigroups,
                "fibre",
                subject,
                fr.ok,
                serde_json::to_value(&fr).expect("serializes"),
            ));
        }
    }
    // Every exceptional class, whatever the degree of its fibres: the
    // certificate depends on alpha only.
    for (i, k) in weierstrass_classes(ctx) {
        let alphas = match class_alphas(ctx, i, k) {
            Ok(a) => a,
            Err(e @ Error::FieldTooLarge { .. }) => {
                out.push(Record::new(
                    Suite::NonrationalSemigroups,
                    "exceptional",
                    format!("i={i} K={k}"),
                    false,
                    json!({"error": e.to_string()}),
                ));
                continue;
            }
            Err(e) => return Err(e),
        };
        let certs: Vec<(Fel, Result<Value>)> = alphas
            .par_iter()
            .map(|&(al, _)| (al, gap_certificate_for_alpha(ctx, al).map(|c| c.to_json())))
            .collect();
        for (al, c) in certs {
            let (ok, detail) = match c {
                Ok(c) => (c["valid"].as_bool() == Some(true), c),
                Err(e) => (false, json!({"error": e.to_string()})),
            };
            out.push(Record::new(
                Suite::NonrationalSemigroups,
                "exceptional",
                format!("i={i} K={k} alpha={al}"),
                ok,
                detail,
            ));
        }
    }
    Ok(out)
}

fn aut_suite(ctx: &CurveContext) -> Result<Vec<Record>> {
    let g = verify_group(ctx)?;
    let o = orbits(ctx)?;
    let mut out = vec![Record::new(
        Suite::Aut,
        "group",
        format!("order {}", g.group_order),
        g.ok,
        serde_json::to_value(&g).expect("serializes"),
    )];
    out.push(Record::new(
        Suite::Aut,
        "orbits",
        format!("{} orbits", o.orbits.len()),
        o.ok,
        serde_json::to_value(&o).expect("serializes"),
    ));
    Ok(out)
}

/// JSON form of a place list, for the `places` command.
pub fn places_json(ctx: &CurveContext, places: &[Place]) -> Vec<Value> {
    places.iter().map(|p| place_json(ctx, p)).collect()
}
