use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rug::{Integer, Rational};
use serde_json::{json, Value};

use bautin_lab::bautin::{
    bautin_determinant, bautin_index, bautin_multiplicity, build_bautin_matrix, max_nonzero_minor,
    symbolic::symbolic_delta, transcendence_index, witness_polynomial, MinorMode, MonomialFamily,
    MultiplicityOutcome,
};
use bautin_lab::bounds::remez::{remez_check, GridSubset, RealPolynomial, RemezVerdict};
use bautin_lab::bounds::{self, delta_arity_degree, floor_ln, BoundReport};
use bautin_lab::diophantine::{scan_graph_points, separation_order, PointStatus};
use bautin_lab::generators::{
    gen_lacunary, gen_recurrence, lacunary_minor_closed_form, lacunary_nu_sandwich, linear_envelope,
    denominator_bound, sample_random, LacunarySpec, RandomSpec, RecurrenceSpec,
};
use bautin_lab::interval::precision_digits;
use bautin_lab::rational::{parse_rational, to_pair};
use bautin_lab::series::{height_profile, ExactSeries, PowerTable};
use bautin_lab::zeros::{empirical_z, Certification, CountOptions, CurvePolynomial, ZeroContext};
use bautin_lab::Error;

use crate::args::*;

/// Text to emit plus whether the result is a structured non-success.
pub struct Outcome {
    pub body: String,
    pub structured: bool,
}

impl Outcome {
    fn json(v: &impl serde::Serialize) -> Result<Self> {
        Ok(Outcome { body: serde_json::to_string_pretty(v)? + "\n", structured: false })
    }

    fn structured(mut self, yes: bool) -> Self {
        self.structured = yes;
        self
    }
}

pub fn load_series(path: &Path) -> Result<ExactSeries> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(ExactSeries::from_json(&text)?)
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| anyhow!(Error::Json(e)))
}

fn from_config<T: serde::de::DeserializeOwned>(config: &Value) -> Result<T> {
    serde_json::from_value(config.clone()).map_err(|e| anyhow!(Error::Json(e)))
}

fn family(f: FamilyArg, degree: usize) -> MonomialFamily {
    match f {
        FamilyArg::Square => MonomialFamily::square(degree),
        FamilyArg::Total => MonomialFamily::total(degree),
    }
}

fn rat(s: &str) -> Result<Rational> {
    Ok(parse_rational(s)?)
}

pub fn check_precision(p: Option<u32>) -> Result<()> {
    if let Some(p) = p {
        if p > precision_digits() {
            return Err(Error::PrecisionInsufficient(format!(
                "{p} digits requested but intervals carry {}",
                precision_digits()
            ))
            .into());
        }
    }
    Ok(())
}

pub fn series(c: &SeriesCmd) -> Result<Outcome> {
    let mut f = load_series(&c.src.series)?;
    if let Some(k) = c.src.trunc {
        f = f.truncated(k)?;
    }
    let mut v = json!({
        "order": f.order(),
        "radius": to_pair(f.radius()),
        "bound": to_pair(f.bound()),
        "origin_value_zero": f.origin_value_zero(),
        "cauchy_violations": f.cauchy_violations(),
    });
    if let Some(l) = c.heights {
        v["height_profile"] = serde_json::to_value(height_profile(&f, l)?)?;
    }
    Outcome::json(&v)
}

pub fn bautin(c: &BautinCmd) -> Result<Outcome> {
    let f = load_series(&c.src.series)?;
    let fam = family(c.family, c.degree);
    let k_max = c.src.trunc.unwrap_or_else(|| fam.default_k_max());
    let report = bautin_index(&f, &fam, k_max)?;
    let mut v = serde_json::to_value(&report)?;
    if let Some(b) = report.index() {
        v["b"] = json!(b);
        if c.minor {
            let table = PowerTable::new(&f, fam.degree, b)?;
            let m = build_bautin_matrix(&table, &fam, b)?.to_qmatrix();
            let mode = match c.mode {
                ModeArg::Exhaustive => MinorMode::ExhaustiveMax,
                ModeArg::Heuristic => MinorMode::HeuristicNonzero,
            };
            let budget = c.budget.unwrap_or(bautin_lab::bautin::minor::DEFAULT_BUDGET);
            v["minor"] = serde_json::to_value(max_nonzero_minor(&m, report.sigma, mode, budget)?)?;
        }
    }
    Ok(Outcome::json(&v)?.structured(report.index().is_none()))
}

pub fn nu(c: &NuCmd) -> Result<Outcome> {
    let f = load_series(&c.src.series)?;
    let fam = MonomialFamily::total(c.degree);
    let report = transcendence_index(&f, c.degree, c.src.trunc.unwrap_or_else(|| fam.default_k_max()).min(f.order()))?;
    let mut v = serde_json::to_value(&report)?;
    if let Some(b) = report.index() {
        v["nu"] = json!(b);
    }
    Ok(Outcome::json(&v)?.structured(report.index().is_none()))
}

pub fn delta(c: &DeltaCmd) -> Result<Outcome> {
    let d = c.degree;
    if d == 0 {
        bail!(Error::Invalid("the Bautin determinant needs d >= 1".into()));
    }
    if c.symbolic {
        let p = symbolic_delta(d);
        let terms: Vec<Value> =
            p.terms().map(|(e, coef)| json!({"exponents": e, "coefficient": coef.to_string()})).collect();
        return Outcome::json(&json!({
            "d": d,
            "variables": d * d + 2 * d,
            "max_variable": p.max_variable(),
            "degrees": p.degrees(),
            "num_terms": p.num_terms(),
            "terms": terms,
        }));
    }
    let path = c.series.as_ref().ok_or_else(|| anyhow!(Error::Invalid("--series is required unless --symbolic".into())))?;
    let f = load_series(path)?;
    let det = bautin_determinant(&f, d)?;
    Outcome::json(&json!({
        "d": d,
        "size": d * d + d,
        "delta": to_pair(&det),
        "nonzero": det != 0,
    }))
}

pub fn eta(c: &EtaCmd) -> Result<Outcome> {
    let f = load_series(&c.src.series)?;
    let r = bautin_multiplicity(&f, c.degree, c.src.trunc)?;
    let stalled = matches!(r.outcome, MultiplicityOutcome::ExceedsKu { .. });
    Ok(Outcome::json(&r)?.structured(stalled))
}

struct KeyValues(BTreeMap<String, String>);

impl KeyValues {
    fn parse(args: &[String]) -> Result<Self> {
        let mut m = BTreeMap::new();
        for a in args {
            let (k, v) = a
                .split_once('=')
                .ok_or_else(|| anyhow!(Error::Invalid(format!("expected NAME=VALUE, got {a:?}"))))?;
            m.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(KeyValues(m))
    }

    fn raw(&self, k: &str) -> Result<&str> {
        self.0
            .get(k)
            .map(String::as_str)
            .ok_or_else(|| anyhow!(Error::Invalid(format!("missing --arg {k}=..."))))
    }

    fn rat(&self, k: &str) -> Result<Rational> {
        rat(self.raw(k)?)
    }

    fn u32(&self, k: &str) -> Result<u32> {
        self.raw(k)?.parse().map_err(|_| anyhow!(Error::Invalid(format!("{k} must be a nonnegative integer"))))
    }

    fn opt_u32(&self, k: &str) -> Result<Option<u32>> {
        self.0.get(k).map(|_| self.u32(k)).transpose()
    }

    fn poly(&self, k: &str) -> Result<Vec<Rational>> {
        self.raw(k)?.split(',').map(rat).collect()
    }
}

pub fn bounds_cmd(c: &BoundsCmd) -> Result<Outcome> {
    let a = KeyValues::parse(&c.args)?;
    let one = Rational::from(1);
    let report: BoundReport = match c.formula.as_str() {
        "zero_bound_disc" => bounds::zero_bound_disc(a.u32("b")?, &a.rat("c")?, &a.rat("B")?, &a.rat("R")?),
        "small_disc_radius" => bounds::small_disc_radius(a.u32("b")?, &a.rat("c")?, &a.rat("B")?, &a.rat("R")?),
        "c_bound" => bounds::c_bound(a.u32("sigma")?, &a.rat("B")?, &a.rat("R")?, a.u32("b")?, &a.rat("delta")?),
        "z_bound_from_minor" => {
            bounds::z_bound_from_minor(a.u32("b")?, a.u32("sigma")?, &a.rat("delta")?, &a.rat("B")?, &a.rat("R")?)
        }
        "z_bound_unit" => bounds::z_bound_unit(a.u32("b")?, a.u32("sigma")?, &a.rat("delta")?),
        "z_bound_general" => bounds::z_bound_general(a.u32("d")?, a.u32("b")?, &a.rat("Delta")?),
        "delta_lower" => {
            let h: Integer = a.raw("h")?.parse().map_err(|_| anyhow!(Error::Invalid("h must be an integer".into())))?;
            bounds::delta_lower_rational(a.u32("d")?, a.u32("nu")?, &h, a.opt_u32("theta")?)
        }
        "composite_t" => bounds::composite_t(a.u32("d")?, &a.poly("R")?, &a.poly("S")?),
        "lacunary" => {
            let p = a.0.get("p").map(|s| rat(s)).transpose()?;
            let reps = bounds::lacunary_bounds(a.u32("d")?, &a.rat("q")?, p.as_ref());
            return Outcome::json(&reps);
        }
        "random_epsilon" => {
            let d = a.u32("d")?;
            let (m, q) = delta_arity_degree(d);
            bounds::random_epsilon(d, &a.rat("p")?, a.opt_u32("m_d")?.unwrap_or(m), a.opt_u32("q_d")?.unwrap_or(q))
        }
        "rational_point" => {
            let l = match a.0.get("T") {
                Some(t) => {
                    let t: Integer =
                        t.parse().map_err(|_| anyhow!(Error::Invalid("T must be an integer".into())))?;
                    if t < 3 {
                        bail!(Error::Invalid("T must be at least 3".into()));
                    }
                    floor_ln(&t)
                }
                None => a.u32("floor_log_T")? as u64,
            };
            let k = a.0.get("K").map(|s| rat(s)).transpose()?.unwrap_or(one.clone());
            let q = if a.0.contains_key("Q") { a.poly("Q")? } else { vec![one] };
            bounds::rational_point_bound(l, &a.poly("Z")?, &k, &q)
        }
        "remez" => return remez_cmd(&a),
        other => bail!(Error::Invalid(format!("unknown formula {other:?}"))),
    };
    Outcome::json(&report)
}

/// Random polynomials against sublevel-style grid subsets.
fn remez_cmd(a: &KeyValues) -> Result<Outcome> {
    let n = a.u32("n")? as usize;
    let d = a.u32("d")?;
    let count = a.opt_u32("count")?.unwrap_or(100) as usize;
    let seed = a.opt_u32("seed")?.unwrap_or(0) as u64;
    let lambda = a.0.get("lambda").map(|s| rat(s)).transpose()?.unwrap_or(Rational::from((1, 4)));
    let g = 8usize;
    let total = g.pow(n as u32);
    let cells = Rational::from(&lambda * Integer::from(total));
    if *cells.denom() != 1 || cells <= 0 {
        bail!(Error::Invalid(format!("lambda * {total} must be a positive integer")));
    }
    let cells = cells.numer().to_usize().unwrap_or(total);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = BTreeMap::from([("holds", 0usize), ("counterexample", 0), ("inconclusive", 0)]);
    for _ in 0..count {
        let p = RealPolynomial::random(n, d, &mut rng);
        let z = GridSubset::lowest_cells(&p, g, cells);
        let key = match remez_check(&p, &z, d, n, 8)?.verdict {
            RemezVerdict::Holds => "holds",
            RemezVerdict::Counterexample => "counterexample",
            RemezVerdict::Inconclusive => "inconclusive",
        };
        *tally.get_mut(key).expect("known verdict") += 1;
    }
    let clean = tally["holds"] == count;
    Ok(Outcome::json(&json!({"n": n, "d": d, "lambda": to_pair(&lambda), "count": count, "verdicts": tally}))?
        .structured(!clean))
}

pub fn lacunary(c: &LacunaryCmd, config: &Value) -> Result<Outcome> {
    let spec: LacunarySpec = from_config(config)?;
    let sandwich = lacunary_nu_sandwich(&spec, c.degree)?;
    let minor = lacunary_minor_closed_form(&spec, c.degree)?;
    let mut v = json!({"d": c.degree, "sandwich": sandwich, "minor": minor});
    let mut structured = false;
    if c.verify {
        let k = *minor.rows.last().expect("nonempty rows");
        let f = gen_lacunary(&spec, k)?;
        let d = c.degree as usize;
        let t = PowerTable::new(&f, d, k)?;
        let m = build_bautin_matrix(&t, &MonomialFamily::square(d), k)?.to_qmatrix();
        let det = m.submatrix(&minor.rows, &minor.cols).determinant().abs();
        v["verified"] = json!(det == minor.value);
        structured |= det != minor.value;
    }
    if c.nu {
        let k = sandwich.upper as usize;
        let f = gen_lacunary(&spec, k)?;
        let r = transcendence_index(&f, c.degree as usize, k)?;
        match r.index() {
            Some(nu) => {
                v["nu"] = json!(nu);
                let inside = sandwich.lower as usize <= nu && nu <= k;
                v["nu_in_sandwich"] = json!(inside);
                structured |= !inside;
            }
            None => {
                v["nu"] = Value::Null;
                structured = true;
            }
        }
    }
    Ok(Outcome::json(&v)?.structured(structured))
}

pub fn recur(c: &RecurCmd, config: &Value) -> Result<Outcome> {
    let spec: RecurrenceSpec = from_config(config)?;
    let out = gen_recurrence(&spec, c.trunc)?;
    let mut v = json!({
        "k_start": spec.k_start(),
        "d1": spec.d1(),
        "d2": spec.d2(),
        "L1": spec.l1().to_string(),
        "L2": spec.l2().to_string(),
        "coeffs": out.series.coeffs().iter().map(to_pair).collect::<Vec<_>>(),
        "denominators": out.denominators.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
    });
    if spec.d1() <= 1 {
        let ok = (0..=c.trunc).all(|k| linear_envelope(&spec, k).is_divisible(&out.denominators[k]));
        v["linear_envelope_divides"] = json!(ok);
    }
    if c.trunc >= 2 && c.trunc + 1 >= spec.r && spec.d1() >= 1 {
        v["bound"] = serde_json::to_value(denominator_bound(&spec, c.trunc)?)?;
    }
    Outcome::json(&v)
}

pub fn random(c: &RandomCmd) -> Result<Outcome> {
    if c.count == 0 {
        bail!(Error::Invalid("--count must be positive".into()));
    }
    let mut body = String::new();
    for seed in c.seed..c.seed + c.count {
        let f = sample_random(&RandomSpec { seed, k: c.trunc, origin_zero: c.origin_zero });
        if c.count == 1 {
            return Ok(Outcome { body: f.to_json() + "\n", structured: false });
        }
        let series: Value = serde_json::from_str(&f.to_json())?;
        body += &serde_json::to_string(&json!({"seed": seed, "series": series}))?;
        body.push('\n');
    }
    Ok(Outcome { body, structured: false })
}

fn parse_terms(s: &str) -> Result<Vec<(usize, usize, Rational)>> {
    s.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let parts: Vec<&str> = t.split(',').map(str::trim).collect();
            if parts.len() != 3 {
                bail!(Error::Invalid(format!("term {t:?} is not i,j,c")));
            }
            let i = parts[0].parse().map_err(|_| anyhow!(Error::Invalid(format!("bad exponent in {t:?}"))))?;
            let j = parts[1].parse().map_err(|_| anyhow!(Error::Invalid(format!("bad exponent in {t:?}"))))?;
            Ok((i, j, rat(parts[2])?))
        })
        .collect()
}

pub fn zeros(c: &ZerosCmd) -> Result<Outcome> {
    let f = load_series(&c.src.series)?;
    let fam = family(c.family, c.degree);
    let r = rat(&c.radius)?;
    if c.empirical {
        if fam.kind != bautin_lab::bautin::FamilyKind::Square {
            bail!(Error::Invalid("the empirical estimate uses the square family".into()));
        }
        let e = empirical_z(&f, c.degree, c.trials, &r, c.seed)?;
        let none = e.certified == 0;
        return Ok(Outcome::json(&e)?.structured(none));
    }
    let p = match (&c.poly, &c.terms, c.witness) {
        (Some(path), None, false) => load_json::<CurvePolynomial>(path)?,
        (None, Some(t), false) => CurvePolynomial::from_terms(fam, &parse_terms(t)?)?,
        (None, None, true) => {
            let w = witness_polynomial(&f, &fam, fam.default_k_max().min(f.order()))?;
            CurvePolynomial::from_witness(&w)?
        }
        _ => bail!(Error::Invalid("give exactly one of --poly, --terms, --witness".into())),
    };
    let ctx = ZeroContext::new(&f, p.family.degree)?;
    let z = ctx.count(&p, &r, CountOptions { n0: c.src.trunc })?;
    let heuristic = z.certified == Certification::Heuristic;
    let mut v = serde_json::to_value(&z)?;
    v["polynomial"] = serde_json::to_value(&p)?;
    Ok(Outcome::json(&v)?.structured(heuristic))
}

pub fn ratpoints(c: &RatpointsCmd) -> Result<Outcome> {
    let f = load_series(&c.src.series)?;
    let n = match c.src.trunc {
        Some(n) => n,
        // The full stored order gives the tightest certificates.
        None => f.order().max(separation_order(&f, c.height)?),
    };
    let rep = scan_graph_points(&f, c.height, n)?;
    if let Some(path) = &c.csv {
        let mut out = String::from("x_num,x_den,status,y_if_any,margin\n");
        for row in &rep.rows {
            let status = match row.status {
                PointStatus::Certified => "certified",
                PointStatus::Excluded => "excluded",
                PointStatus::Unresolved => "unresolved",
            };
            let y = row.y.as_ref().map(|y| y.to_string()).unwrap_or_default();
            let margin = match row.status {
                PointStatus::Excluded => format!("{:e}", row.radius),
                PointStatus::Certified => "exact".to_string(),
                PointStatus::Unresolved => format!("{:e}", row.radius),
            };
            out += &format!("{},{},{status},{y},{margin}\n", row.x.numer(), row.x.denom());
        }
        std::fs::write(path, out).with_context(|| format!("writing {}", path.display()))?;
    }
    let v = json!({
        "T": rep.t,
        "N": rep.n,
        "tail": to_pair(&rep.tail),
        "enumerated": rep.enumerated,
        "certified": rep.certified.len(),
        "certified_points": rep.certified,
        "excluded": rep.excluded,
        "unresolved": rep.unresolved.len(),
        "unresolved_points": rep.unresolved,
    });
    let open = !rep.unresolved.is_empty();
    Ok(Outcome::json(&v)?.structured(open))
}

pub fn sweep(config: &Value) -> Result<(Outcome, String)> {
    let cfg: crate::sweep::SweepConfig = from_config(config)?;
    let out = crate::sweep::run(&cfg)?;
    Ok((Outcome { body: out.csv, structured: false }, out.summary))
}

/// Seeds named by a command, for the run manifest.
pub fn seeds_of(cmd: &Command) -> Vec<u64> {
    match cmd {
        Command::Random(r) => (r.seed..r.seed + r.count).collect(),
        Command::Zeros(z) if z.empirical => vec![z.seed],
        _ => Vec::new(),
    }
}
