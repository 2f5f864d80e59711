//! `y3`: command-line driver for the y3-core checks.
//!
//! Every command prints human-readable lines by default, or with `--json`
//! newline-delimited JSON records followed by one summary record. Exit codes:
//! 0 when every check passes, 1 when a check fails, 2 for usage errors and 3
//! for runtime errors. `Y3_THREADS` sets the worker thread count.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;
use y3_core::aut::{delta, orbits, verify_group};
use y3_core::curve::{
    curve_census, enumerate_rational_places, fibres_of_degree, make_context, parse_place, place_json, CurveContext,
    Place,
};
use y3_core::field::Fel;
use y3_core::orders::{alpha_profile, order_census, profile};
use y3_core::polyfam::{interpolate_family, Family};
use y3_core::report::{self, interpolation_check, parse_suites, sample_identities, RunConfig, DEFAULT_SEED};
use y3_core::semigroup::{verify_place, weierstrass_census};
use y3_core::series::{curve_residual, expand_basics, TruncSeries};
use y3_core::witness::{canonical_bound, gap_certificate, generic_gaps, rational_membership_witnesses};
use y3_core::{Error, Result};

#[derive(Parser)]
#[command(name = "y3", version, about = "Weierstrass semigroups and automorphisms of the curve Y3")]
struct Cli {
    /// Emit newline-delimited JSON followed by a summary record.
    #[arg(long, global = true)]
    json: bool,
    /// Emit CSV (status, suite, check, subject); `verify` only.
    #[arg(long, global = true, conflicts_with = "json")]
    csv: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct QArg {
    /// Field parameter: a prime power with q = 1 (mod 3).
    #[arg(long, value_parser = parse_q)]
    q: u64,
}

fn parse_q(s: &str) -> std::result::Result<u64, String> {
    let q: u64 = s.parse().map_err(|e| format!("{e}"))?;
    make_context(q).map(|_| q).map_err(|e| e.to_string())
}

#[derive(Subcommand)]
enum Command {
    /// Constants of the curve for one q.
    Ctx(QArg),
    /// Rational places, or the places of one extension degree.
    Places {
        #[command(flatten)]
        q: QArg,
        /// Extension degree d: places with coordinates in GF(q^(2d)) but no smaller field.
        #[arg(long, default_value_t = 1)]
        ext: u32,
    },
    /// P-order and Q-order data.
    Orders {
        #[command(flatten)]
        q: QArg,
        /// Order census for P-order i.
        #[arg(long)]
        i: Option<u64>,
        /// Order profile of a place given as JSON.
        #[arg(long)]
        profile: Option<String>,
        /// Order profile of an alpha value given as a field literal.
        #[arg(long)]
        alpha: Option<String>,
    },
    /// The polynomial families.
    Polyfam {
        #[command(subcommand)]
        action: PolyAction,
    },
    /// Local expansions at an affine place.
    Series {
        #[command(flatten)]
        q: QArg,
        #[arg(long)]
        place: String,
        #[arg(long, value_enum, default_value_t = What::Residual)]
        what: What,
    },
    /// Witness certificate at a place.
    Witness {
        #[command(flatten)]
        q: QArg,
        #[arg(long)]
        place: String,
        /// Print every gap witness instead of the certificate summary.
        #[arg(long)]
        all_gaps: bool,
    },
    /// Verification report of one place.
    Semigroup {
        #[command(flatten)]
        q: QArg,
        #[arg(long)]
        place: String,
    },
    /// Rational place census and the non-rational Weierstrass classes.
    Census {
        #[command(flatten)]
        q: QArg,
        #[arg(long, default_value_t = 3)]
        ext: u32,
    },
    /// The automorphism group generated by sigma and iota.
    Aut {
        #[command(flatten)]
        q: QArg,
        /// Also compute the orbits on rational places.
        #[arg(long)]
        orbits: bool,
    },
    /// Runs the verification suites.
    Verify {
        #[command(flatten)]
        q: QArg,
        /// `all` or a comma-separated list of polyfam-identities, census,
        /// orders, rational-semigroups, nonrational-semigroups, aut.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Largest extension degree for non-rational places.
        #[arg(long, default_value_t = 3)]
        ext: u32,
        /// Restrict the semigroup suites.
        #[arg(long, value_enum, default_value_t = ClassFilter::All)]
        class: ClassFilter,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Random identity samples per field.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

#[derive(Subcommand)]
enum PolyAction {
    /// Value of one family member at s.
    Eval {
        #[command(flatten)]
        q: QArg,
        #[arg(long)]
        family: String,
        #[arg(long, allow_hyphen_values = true)]
        i: i64,
        /// Field literal; its field may be any extension of GF(q^2).
        #[arg(long)]
        s: String,
    },
    /// Random checks of the product identities.
    Identities {
        #[command(flatten)]
        q: QArg,
        /// Extension degree of the field over GF(q^2).
        #[arg(long, default_value_t = 1)]
        ext: u32,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Coefficients of a family member by interpolation over GF(q^4).
    Interpolate {
        #[command(flatten)]
        q: QArg,
        #[arg(long)]
        family: String,
        #[arg(long)]
        i: i64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    #[value(name = "x_a")]
    XA,
    #[value(name = "y_b")]
    YB,
    #[value(name = "f0")]
    F0,
    Residual,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ClassFilter {
    All,
    Rational,
    Nonrational,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Format {
    Human,
    Json,
    Csv,
}

/// Collects output lines and the pass/fail state of one command.
struct Out<W: Write> {
    w: W,
    format: Format,
    ok: bool,
}

impl<W: Write> Out<W> {
    /// One record: JSON as is, or its human line.
    fn record(&mut self, v: &Value, human: impl FnOnce() -> String) -> io::Result<()> {
        match self.format {
            Format::Json => writeln!(self.w, "{v}"),
            _ => writeln!(self.w, "{}", human()),
        }
    }

    fn check(&mut self, ok: bool) {
        self.ok &= ok;
    }

    fn summary(&mut self, command: &str, mut extra: Value) -> io::Result<()> {
        let status = if self.ok { "PASS" } else { "FAIL" };
        extra["record"] = json!("summary");
        extra["command"] = json!(command);
        extra["status"] = json!(status);
        match self.format {
            Format::Json => writeln!(self.w, "{extra}"),
            _ => writeln!(self.w, "{status} {command}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Ok(t) = std::env::var("Y3_THREADS") {
        match t.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("error: Y3_THREADS must be a positive integer, got {t:?}");
                return ExitCode::from(2);
            }
        }
    }
    let format = if cli.json {
        Format::Json
    } else if cli.csv {
        Format::Csv
    } else {
        Format::Human
    };
    if format == Format::Csv && !matches!(cli.command, Command::Verify { .. }) {
        eprintln!("error: --csv is only available for verify");
        return ExitCode::from(2);
    }
    let stdout = io::stdout();
    let mut out = Out { w: BufWriter::new(stdout.lock()), format, ok: true };
    let res = dispatch(cli.command, &mut out);
    let flushed = out.w.flush();
    match res {
        Ok(()) if flushed.is_ok() => ExitCode::from(if out.ok { 0 } else { 1 }),
        Ok(()) => ExitCode::from(3),
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Run(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}

enum CliError {
    Usage(String),
    Run(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::ExcludedPoint(_) | Error::BadResidue(..) | Error::NotPrimePower(_) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Run(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Run(e.to_string())
    }
}

type CliResult = std::result::Result<(), CliError>;

fn context(q: QArg) -> Result<CurveContext> {
    make_context(q.q)
}

fn place_arg(ctx: &CurveContext, s: &str) -> Result<Place> {
    let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(format!("place JSON: {e}")))?;
    parse_place(ctx, &v)
}

fn lits(xs: &[Fel]) -> Vec<String> {
    xs.iter().map(|x| x.literal()).collect()
}

fn series_json(s: &TruncSeries) -> Value {
    json!({"order": s.order(), "valuation": s.valuation(), "coeffs": lits(s.coeffs())})
}

fn dispatch<W: Write>(cmd: Command, out: &mut Out<W>) -> CliResult {
    match cmd {
        Command::Ctx(q) => cmd_ctx(q, out),
        Command::Places { q, ext } => cmd_places(q, ext, out),
        Command::Orders { q, i, profile, alpha } => cmd_orders(q, i, profile, alpha, out),
        Command::Polyfam { action } => cmd_polyfam(action, out),
        Command::Series { q, place, what } => cmd_series(q, &place, what, out),
        Command::Witness { q, place, all_gaps } => cmd_witness(q, &place, all_gaps, out),
        Command::Semigroup { q, place } => cmd_semigroup(q, &place, out),
        Command::Census { q, ext } => cmd_census(q, ext, out),
        Command::Aut { q, orbits } => cmd_aut(q, orbits, out),
        Command::Verify { q, suite, ext, class, seed, samples } => cmd_verify(q, &suite, ext, class, seed, samples, out),
    }
}

fn cmd_ctx<W: Write>(q: QArg, out: &mut Out<W>) -> CliResult {
    let ctx = context(q)?;
    let v = json!({
        "q": ctx.q,
        "p": ctx.p,
        "e": ctx.e,
        "m": ctx.m,
        "M": ctx.big_m,
        "genus": ctx.genus,
        "field": ctx.base().descriptor(),
        "zeta": ctx.zeta().literal(),
        "delta": delta(&ctx).literal(),
        "truncation": ctx.q,
        "x_pole": ctx.x_pole(),
        "canonical_bound": canonical_bound(&ctx),
        "rational_places": (ctx.q.pow(3) + 2 * ctx.q.pow(2) + 3) / 3,
        "generic_gaps": generic_gaps(&ctx),
    });
    out.record(&v, || {
        let mut s = String::new();
        for (k, x) in v.as_object().unwrap() {
            s.push_str(&format!("{k:<16} {x}\n"));
        }
        s.trim_end().to_string()
    })?;
    out.summary("ctx", json!({"q": ctx.q}))?;
    Ok(())
}

fn cmd_places<W: Write>(q: QArg, ext: u32, out: &mut Out<W>) -> CliResult {
    let ctx = context(q)?;
    if ext == 0 {
        return Err(CliError::Usage("--ext must be at least 1".into()));
    }
    let places: Vec<Place> = if ext == 1 {
        enumerate_rational_places(&ctx)
    } else {
        fibres_of_degree(&ctx, ext)?.into_iter().flat_map(|f| f.places).collect()
    };
    for p in &places {
        let v = place_json(&ctx, p);
        out.record(&v, || {
            format!(
                "{:<12} a={} b={} alpha={} {}",
                v["variant"].as_str().unwrap_or(""),
                v["a"].as_str().unwrap_or("-"),
                v["b"].as_str().unwrap_or("-"),
                v["alpha"].as_str().unwrap_or(""),
                v["rationality_class"].as_str().unwrap_or("")
            )
        })?;
    }
    let expected = (ext == 1).then(|| (ctx.q.pow(3) + 2 * ctx.q.pow(2) + 3) / 3);
    if let Some(n) = expected {
        out.check(places.len() as u64 == n);
    }
    out.summary("places", json!({"q": ctx.q, "ext": ext, "count": places.len(), "expected": expected}))?;
    Ok(())
}

fn cmd_orders<W: Write>(
    q: QArg,
    i: Option<u64>,
    place: Option<String>,
    alpha: Option<String>,
    out: &mut Out<W>,
) -> CliResult {
    let ctx = context(q)?;
    let mut any = false;
    if let Some(i) = i {
        any = true;
        let c = order_census(&ctx, i)?;
        out.check(c.matches());
        let v = serde_json::to_value(&c).unwrap();
        out.record(&v, || {
            format!(
                "i={} places={} (expected {}) finite-K={} (expected {}) rational={} (expected {}) K-values={:?}",
                c.i,
                c.places,
                c.expected_places,
                c.finite_k_places,
                c.expected_finite_k,
                c.rational_places,
                c.expected_rational,
                c.k_values
            )
        })?;
    }
    let show_profile = |pr: Option<y3_core::orders::OrderProfile>, out: &mut Out<W>| -> io::Result<()> {
        match pr {
            Some(pr) => {
                out.check(pr.consistent());
                let v = serde_json::to_value(&pr).unwrap();
                out.record(&v, || {
                    format!("alpha={} i={} K={:?} class={:?} issues={:?}", pr.alpha, pr.i, pr.k, pr.class, pr.issues)
                })
            }
            None => {
                let v = json!({"orders": "not applicable"});
                out.record(&v, || "orders not applicable at this place".into())
            }
        }
    };
    if let Some(p) = place {
        any = true;
        let p = place_arg(&ctx, &p)?;
        show_profile(profile(&ctx, &p)?, out)?;
    }
    if let Some(a) = alpha {
        any = true;
        let a = Fel::parse(&a)?;
        show_profile(Some(alpha_profile(&ctx, a, 64)?), out)?;
    }
    if !any {
        return Err(CliError::Usage("orders needs --i, --profile or --alpha".into()));
    }
    out.summary("orders", json!({"q": ctx.q}))?;
    Ok(())
}

fn cmd_polyfam<W: Write>(action: PolyAction, out: &mut Out<W>) -> CliResult {
    match action {
        PolyAction::Eval { q, family, i, s } => {
            let ctx = context(q)?;
            let fam: Family = family.parse()?;
            let s = Fel::parse(&s)?;
            let pf = ctx.family(s.field())?;
            let value = pf.eval(fam, i, s)?;
            let v = json!({"family": fam.to_string(), "i": i, "s": s.literal(), "value": value.literal()});
            out.record(&v, || format!("{fam}_{i}({}) = {}", s.literal(), value.literal()))?;
            out.summary("polyfam", json!({"q": ctx.q}))?;
        }
        PolyAction::Identities { q, ext, samples, seed } => {
            let ctx = context(q)?;
            let f = ctx.ext(ext)?;
            let pf = ctx.family(f)?;
            let (n, fails) = sample_identities(&pf, samples, seed)?;
            for (i, j, l, s) in &fails {
                let v = json!({"i": i, "j": j, "l": l, "s": s.literal(), "status": "FAIL"});
                out.record(&v, || format!("FAIL ({i},{j},{l}) at {}", s.literal()))?;
            }
            out.check(fails.is_empty());
            out.summary(
                "polyfam",
                json!({"q": ctx.q, "field": f.descriptor(), "samples": n, "failures": fails.len(), "seed": seed}),
            )?;
        }
        PolyAction::Interpolate { q, family, i } => {
            let ctx = context(q)?;
            let fam: Family = family.parse()?;
            let pf = ctx.family(ctx.ext(2)?)?;
            let poly = interpolate_family(&pf, fam, i)?;
            let v = json!({
                "family": fam.to_string(),
                "i": i,
                "field": pf.field().descriptor(),
                "degree": poly.degree(),
                "coeffs": lits(&poly.coeffs),
            });
            out.record(&v, || format!("{fam}_{i}: degree {:?}, leading {:?}", poly.degree(), poly.leading()))?;
            if matches!(fam, Family::P) && i >= 1 {
                let c = interpolation_check(&pf, i)?;
                out.check(c.ok);
                let v = serde_json::to_value(&c).unwrap();
                out.record(&v, || {
                    format!("check: degree drop {} top coefficient {} ok {}", c.degree_drop, c.p_top, c.ok)
                })?;
            }
            out.summary("polyfam", json!({"q": ctx.q}))?;
        }
    }
    Ok(())
}

fn cmd_series<W: Write>(q: QArg, place: &str, what: What, out: &mut Out<W>) -> CliResult {
    let ctx = context(q)?;
    let p = place_arg(&ctx, place)?;
    let (name, s) = match what {
        What::Residual => ("residual", curve_residual(&ctx, &p)?),
        _ => {
            let b = expand_basics(&ctx, &p)?;
            match what {
                What::XA => ("x_a", b.x_a),
                What::YB => ("y_b", b.y_b),
                _ => ("f0", b.f0),
            }
        }
    };
    if matches!(what, What::Residual) {
        out.check(s.is_zero());
    }
    let mut v = series_json(&s);
    v["what"] = json!(name);
    v["place"] = place_json(&ctx, &p);
    out.record(&v, || format!("{name} = {s:?}"))?;
    out.summary("series", json!({"q": ctx.q}))?;
    Ok(())
}

fn cmd_witness<W: Write>(q: QArg, place: &str, all_gaps: bool, out: &mut Out<W>) -> CliResult {
    let ctx = context(q)?;
    let p = place_arg(&ctx, place)?;
    let rational = enumerate_rational_places(&ctx).contains(&p);
    if rational {
        let ws = rational_membership_witnesses(&ctx, &p)?;
        for w in &ws {
            out.check(w.valid());
            let v = w.to_json();
            out.record(&v, || {
                format!(
                    "{:>4}  {:<8} v_P={:?} {}",
                    w.element,
                    if w.valid() { "valid" } else { "INVALID" },
                    w.witness.valuation().ok(),
                    w.witness.recipe
                )
            })?;
        }
        out.summary("witness", json!({"q": ctx.q, "kind": "membership", "witnesses": ws.len()}))?;
    } else {
        let cert = gap_certificate(&ctx, &p)?;
        out.check(cert.valid());
        if all_gaps {
            let full = cert.to_json();
            for e in full["entries"].as_array().cloned().unwrap_or_default() {
                out.record(&e, || {
                    format!(
                        "{:>4}  {:<8} v_P={} {}",
                        e["gap"],
                        if e["valid"].as_bool() == Some(true) { "valid" } else { "INVALID" },
                        e["witness"]["v_P"],
                        e["witness"]["recipe"].as_str().or(e["problem"].as_str()).unwrap_or("")
                    )
                })?;
            }
        } else {
            let v = serde_json::to_value(cert.summary()).unwrap();
            out.record(&v, || {
                let s = cert.summary();
                format!("{} gaps {} witnessed {} closed {} valid {}", s.kind, s.gaps, s.witnessed, s.closed, s.valid)
            })?;
        }
        out.summary("witness", json!({"q": ctx.q, "kind": cert.kind, "gaps": cert.claimed}))?;
    }
    Ok(())
}

fn cmd_semigroup<W: Write>(q: QArg, place: &str, out: &mut Out<W>) -> CliResult {
    let ctx = context(q)?;
    let p = place_arg(&ctx, place)?;
    let r = verify_place(&ctx, &p);
    out.check(r.passed());
    let v = serde_json::to_value(&r).unwrap();
    out.record(&v, || {
        format!(
            "{} class={} i={:?} K={:?} generators={:?} gaps={:?} genus={} symmetric={}",
            r.status, r.class, r.i, r.k, r.generators, r.gaps, r.genus, r.symmetric
        )
    })?;
    out.summary("semigroup", json!({"q": ctx.q}))?;
    Ok(())
}

fn cmd_census<W: Write>(q: QArg, ext: u32, out: &mut Out<W>) -> CliResult {
    let ctx = context(q)?;
    let c = curve_census(&ctx)?;
    out.check(c.reconciles);
    let v = serde_json::to_value(&c).unwrap();
    out.record(&v, || {
        let rows: Vec<String> = c.by_p_order.iter().map(|(i, n, e)| format!("i={i}:{n}/{e}")).collect();
        format!(
            "rational places {} (expected {}): O_inf {} O_zero {} special {} generic [{}] reconciles {}",
            c.total,
            c.expected_total,
            c.o_inf,
            c.o_zero,
            c.special,
            rows.join(" "),
            c.reconciles
        )
    })?;
    let w = weierstrass_census(&ctx, ext)?;
    out.check(w.consistent);
    for row in &w.rows {
        let v = serde_json::to_value(row).unwrap();
        out.record(&v, || {
            format!(
                "class i={} K={}: {} places, alpha degree {}, fibres by degree {:?}, within d<={} {}{}",
                row.i,
                row.k,
                row.places,
                row.alpha_degree,
                row.by_degree,
                ext,
                row.within_d_max,
                row.note.as_deref().map(|n| format!(" ({n})")).unwrap_or_default()
            )
        })?;
    }
    out.summary(
        "census",
        json!({
            "q": ctx.q,
            "rational_places": c.total,
            "nonrational_weierstrass_places": w.nonrational_places,
            "within_d_max": w.nonrational_within_d_max,
            "d_max": ext,
        }),
    )?;
    Ok(())
}

fn cmd_aut<W: Write>(q: QArg, with_orbits: bool, out: &mut Out<W>) -> CliResult {
    let ctx = context(q)?;
    let g = verify_group(&ctx)?;
    out.check(g.ok);
    let v = serde_json::to_value(&g).unwrap();
    out.record(&v, || {
        format!(
            "|G| = {} (expected {}), ord(sigma) = {}, ord(iota) = {}, iota sigma iota = sigma^{:?} (sigma^-1: {}), faithful {}{}",
            g.group_order,
            g.expected_order,
            g.sigma_order,
            g.iota_order,
            g.conjugation_exponent,
            g.dihedral_relation,
            g.faithful,
            g.full_group_order_annotation.map(|n| format!(", full group order reported as {n}")).unwrap_or_default()
        )
    })?;
    if with_orbits {
        let o = orbits(&ctx)?;
        out.check(o.ok);
        for orb in &o.orbits {
            let v = serde_json::to_value(orb).unwrap();
            out.record(&v, || {
                format!(
                    "orbit size {:>4} classes {:?} semigroup constant {} verified {}",
                    orb.size, orb.classes, orb.semigroup_constant, orb.verified
                )
            })?;
        }
        let v = json!({"o_inf_exact": o.o_inf_exact, "o_zero_exact": o.o_zero_exact, "orbits": o.orbits.len()});
        out.record(&v, || format!("O_inf exact {} O_zero exact {}", o.o_inf_exact, o.o_zero_exact))?;
    }
    out.summary("aut", json!({"q": ctx.q, "group_order": g.group_order}))?;
    Ok(())
}

fn cmd_verify<W: Write>(
    q: QArg,
    suite: &str,
    ext: u32,
    class: ClassFilter,
    seed: u64,
    samples: usize,
    out: &mut Out<W>,
) -> CliResult {
    use y3_core::report::Suite;
    let ctx = context(q)?;
    let mut suites = parse_suites(suite)?;
    match class {
        ClassFilter::All => {}
        ClassFilter::Rational => suites.retain(|s| *s != Suite::NonrationalSemigroups),
        ClassFilter::Nonrational => suites.retain(|s| *s != Suite::RationalSemigroups),
    }
    let cfg = RunConfig { q: ctx.q, d_max: ext, suites, seed, samples };
    let res = report::run(&ctx, &cfg)?;
    if out.format == Format::Csv {
        writeln!(out.w, "status,suite,check,subject")?;
    }
    for r in &res.records {
        match out.format {
            Format::Json => writeln!(out.w, "{}", r.to_json())?,
            Format::Csv => writeln!(out.w, "{}", r.to_csv())?,
            Format::Human => writeln!(out.w, "{}", r.to_human())?,
        }
    }
    let s = &res.summary;
    out.check(s.ok());
    match out.format {
        Format::Json => writeln!(out.w, "{}", s.to_json())?,
        Format::Csv => writeln!(out.w, "{},summary,checks={},failed={}", s.status, s.checks, s.failed)?,
        Format::Human => {
            writeln!(out.w, "{} summary: {} checks, {} passed, {} failed", s.status, s.checks, s.passed, s.failed)?;
            if let Some(t) = &s.rational_places {
                writeln!(out.w, "  rational places: {}/{} PASS {:?}", t.pass, t.total, t.by_class)?;
            }
            for f in &s.failures {
                writeln!(out.w, "  FAIL {f}")?;
            }
        }
    }
    Ok(())
}
