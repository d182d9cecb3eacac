//! Check suites for each construction, producing JSON-ready records.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::sample::random_nonzero_ratfun;
use crate::algebra::text::to_text;
use crate::algebra::{factor, FieldCtx, FqElem, Place, Poly, RatFun};
use crate::artin_schreier::{
    below_system_check, classify_version1, getdown_witness, version1_witness, ASExponent,
};
use crate::elliptic::{TwistCurve, TwistPoint};
use crate::error::{Error, Result};
use crate::eval::{eval_arith_with, universe};
use crate::geometry::{
    as_const_kernel, as_const_solvable, genus_lower_bound, genus_params, infinity_ramifies, orbit_constants,
    ramification_bound, ramified_finite_places, ExtensionDatum,
};
use crate::model::{gcd, robinson_formula, robinson_mul, ModelParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckVerdict {
    Pass,
    Fail,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub params: Value,
    pub verdict: CheckVerdict,
    pub witnesses: Value,
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub config: Value,
    pub checks: Vec<CheckRecord>,
    pub status: CheckVerdict,
}

impl Report {
    pub fn new(command: &str, config: Value, checks: Vec<CheckRecord>) -> Report {
        let status = overall(&checks);
        Report { command: command.to_string(), config, checks, status }
    }

    /// The report with timings zeroed, for comparing runs.
    pub fn without_timings(&self) -> Report {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.elapsed_ms = 0.0;
        }
        r
    }
}

pub fn overall(checks: &[CheckRecord]) -> CheckVerdict {
    if checks.iter().any(|c| c.verdict == CheckVerdict::Fail) {
        CheckVerdict::Fail
    } else if checks.iter().any(|c| c.verdict == CheckVerdict::Unknown) {
        CheckVerdict::Unknown
    } else {
        CheckVerdict::Pass
    }
}

/// Runs `body`, which yields pass/fail and witness data; errors count as
/// failures with the message recorded.
pub fn check(name: &str, params: Value, body: impl FnOnce() -> Result<(bool, Value)>) -> CheckRecord {
    let start = Instant::now();
    let (verdict, witnesses) = match body() {
        Ok((ok, w)) => (if ok { CheckVerdict::Pass } else { CheckVerdict::Fail }, w),
        Err(e) => (CheckVerdict::Fail, json!({ "error": e.to_string() })),
    };
    CheckRecord { name: name.to_string(), params, verdict, witnesses, elapsed_ms: start.elapsed().as_secs_f64() * 1000.0 }
}

fn text(x: &RatFun) -> Value {
    serde_json::to_value(to_text(x)).expect("text form serializes")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Lemma {
    Version1,
    Below,
    Getdown,
    Divide,
    Addtriple,
    Robinson,
    Powersoft2,
    Ramify,
    Genus,
    Constsol,
    Orbits,
}

impl Lemma {
    pub const ALL: [Lemma; 11] = [
        Lemma::Version1,
        Lemma::Below,
        Lemma::Getdown,
        Lemma::Divide,
        Lemma::Addtriple,
        Lemma::Robinson,
        Lemma::Powersoft2,
        Lemma::Ramify,
        Lemma::Genus,
        Lemma::Constsol,
        Lemma::Orbits,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Lemma::Version1 => "version1",
            Lemma::Below => "below",
            Lemma::Getdown => "getdown",
            Lemma::Divide => "divide",
            Lemma::Addtriple => "addtriple",
            Lemma::Robinson => "robinson",
            Lemma::Powersoft2 => "powersoft2",
            Lemma::Ramify => "ramify",
            Lemma::Genus => "genus",
            Lemma::Constsol => "constsol",
            Lemma::Orbits => "orbits",
        }
    }
}

impl Lemma {
    /// The twist and the quadratic ramification count need odd
    /// characteristic.
    pub fn applies_to(self, f: &FieldCtx) -> bool {
        !matches!(self, Lemma::Powersoft2 | Lemma::Ramify) || f.p() != 2
    }
}

impl std::str::FromStr for Lemma {
    type Err = Error;

    fn from_str(s: &str) -> Result<Lemma> {
        Lemma::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown check suite {s}")))
    }
}

/// Settings shared by the suites; each suite reads what it needs.
#[derive(Clone, Debug)]
pub struct VerifyParams {
    pub field: FieldCtx,
    pub s_max: u64,
    /// Degree bound for sweeps.
    pub degree: u64,
    /// Largest Frobenius point index.
    pub m: u32,
    /// Cubic for the twist, constant term first.
    pub cubic: Vec<i64>,
    pub g_k: u64,
    /// Number of orbit constants beyond `c_0`.
    pub orbits: usize,
    /// Triples `k, m, n <= robinson_bound` for the formula check.
    pub robinson_bound: u64,
    pub samples: usize,
    pub seed: u64,
}

impl VerifyParams {
    pub fn new(field: &FieldCtx) -> VerifyParams {
        VerifyParams {
            field: field.clone(),
            s_max: 4,
            degree: 2,
            m: 3,
            cubic: vec![1, 1, 0, 1],
            g_k: 2,
            orbits: (field.q() as usize).min(3) - 1,
            robinson_bound: 6,
            samples: 10,
            seed: 1,
        }
    }
}

pub fn run(lemma: Lemma, p: &VerifyParams) -> Vec<CheckRecord> {
    match lemma {
        Lemma::Version1 => version1_suite(p),
        Lemma::Below => below_suite(p),
        Lemma::Getdown => getdown_suite(p),
        Lemma::Divide => divide_suite(p),
        Lemma::Addtriple => addtriple_suite(p),
        Lemma::Robinson => robinson_suite(p),
        Lemma::Powersoft2 => powersoft2_suite(p),
        Lemma::Ramify => ramify_suite(p),
        Lemma::Genus => genus_suite(p),
        Lemma::Constsol => constsol_suite(p),
        Lemma::Orbits => orbits_suite(p),
    }
}

fn default_r(f: &FieldCtx) -> ASExponent {
    ASExponent::for_char(f.p())
}

pub fn version1_suite(p: &VerifyParams) -> Vec<CheckRecord> {
    let f = &p.field;
    let r = default_r(f);
    let mut out = Vec::new();
    for s in 0..=p.s_max {
        out.push(check("version1 witness", json!({ "s": s, "r": r.r() }), || {
            let w = version1_witness(f, s, r)?;
            let ok = classify_version1(&w.w, r)? == Some(s);
            Ok((ok, json!({ "w": text(&w.w), "u": text(&w.u), "v": text(&w.v) })))
        }));
    }
    out.push(check("version1 sweep", json!({ "degree": p.degree, "r": r.r() }), || {
        let mut accepted = Vec::new();
        for w in universe(f, p.degree) {
            if let Some(s) = classify_version1(&w, r)? {
                accepted.push((w, s));
            }
        }
        let base = r.base(f);
        let expected: Vec<u64> = (0..).take_while(|&s| base.pow(s as u32) <= p.degree).collect();
        let ok = accepted.len() == expected.len()
            && accepted.iter().all(|(w, s)| *w == RatFun::t(f).frobenius_power(r.r() * *s as u32));
        let list: Vec<Value> = accepted.iter().map(|(w, s)| json!({ "w": text(w), "s": s })).collect();
        Ok((ok, Value::Array(list)))
    }));
    out
}

pub fn below_suite(p: &VerifyParams) -> Vec<CheckRecord> {
    let f = &p.field;
    let r = default_r(f);
    let oc = match orbit_constants(f, p.orbits) {
        Ok(o) => o,
        Err(e) => return vec![check("below orbits", json!({ "M": p.orbits }), || Err(e))],
    };
    let mut out = Vec::new();
    for s in 0..=p.s_max.min(3) {
        out.push(check("below power", json!({ "s": s, "M": p.orbits }), || {
            let w = RatFun::t(f).checked_frobenius_power(r.r() * s as u32)?;
            Ok((below_system_check(&w, &oc.orbits, r)? == Some(s), json!({ "w": text(&w) })))
        }));
    }
    let t = RatFun::t(f);
    for (label, w) in [("t+1", t.add(&RatFun::one(f))), ("t^2", t.pow(2)), ("2t", t.scale(f.from_int(2)))] {
        if w == t {
            continue;
        }
        out.push(check("below rejects", json!({ "w": label, "M": p.orbits }), || {
            Ok((below_system_check(&w, &oc.orbits, r)?.is_none(), Value::Null))
        }));
    }
    out
}

pub fn getdown_suite(p: &VerifyParams) -> Vec<CheckRecord> {
    let f = &p.field;
    let mut out = Vec::new();
    for a in f.elements() {
        for s in 1..=p.s_max {
            out.push(check("getdown witness", json!({ "a": f.digits(a), "s": s }), || {
                let g = getdown_witness(f, s, a)?;
                Ok((g.b == f.frob_pow(a, s), json!({ "b": f.digits(g.b), "u": text(&g.u) })))
            }));
        }
    }
    out
}

pub fn divide_suite(p: &VerifyParams) -> Vec<CheckRecord> {
    let model = ModelParams::new(&p.field);
    let mut out = Vec::new();
    for s1 in 1..=p.s_max {
        for s2 in 1..=p.s_max {
            out.push(check("divide", json!({ "s1": s1, "s2": s2 }), || {
                let w = model.divides_witness(s1, s2)?;
                let divides = s2 % s1 == 0;
                if divides {
                    return Ok((w.is_some(), w.map(|x| text(&x)).unwrap_or(Value::Null)));
                }
                // no monomial solution, and the valuation at t rules out any other
                let e1 = model.base_pow(s1)? - 1;
                let e2 = model.base_pow(s2)? - 1;
                let none = w.is_none() && (e2 > 100_000 || model.divides_monomial_search(s1, s2)?.is_none());
                Ok((none && e2 % e1 != 0, json!({ "ord_t_target": e2, "ord_multiple_of": e1 })))
            }));
        }
    }
    out
}

pub fn addtriple_suite(p: &VerifyParams) -> Vec<CheckRecord> {
    let model = ModelParams::new(&p.field);
    let mut out = Vec::new();
    for a in 1..=p.s_max {
        for b in 1..=p.s_max {
            out.push(check("addtriple", json!({ "a": a, "b": b }), || {
                let w = model.add_witness(a, b)?;
                let (xa, xb) = (model.encode(a)?.value, model.encode(b)?.value);
                let table = (1..=2 * p.s_max).all(|c| {
                    model.encode(c).is_ok_and(|xc| model.check_add_triple(&xa, &xb, &xc.value) == (c == a + b))
                });
                let system = model.add_system_search(&xa, &xb, a + 1) == Some((a, a + b));
                Ok((table && system && w.j == a + b, json!({ "x": text(&w.x), "z": text(&w.z), "l": w.l })))
            }));
        }
    }
    out
}

pub fn robinson_suite(p: &VerifyParams) -> Vec<CheckRecord> {
    let mut out = vec![check("robinson integer form", json!({ "bound": 30 }), || {
        let bad: Vec<(u64, u64, u64)> = (1..=30u64)
            .flat_map(|k| (1..=30u64).flat_map(move |m| (1..=30u64).map(move |n| (k, m, n))))
            .filter(|&(k, m, n)| robinson_mul(k, m, n) != (k == m * n))
            .collect();
        Ok((bad.is_empty(), json!({ "disagreements": bad })))
    })];
    let l = p.robinson_bound;
    out.push(check("robinson formula", json!({ "bound": l }), || {
        let phi = robinson_formula();
        let n = (2 * l) * (2 * l + 1);
        let mut bad = Vec::new();
        for k in 1..=l {
            for m in 1..=l {
                for nn in 1..=l {
                    let v = eval_arith_with(&phi, n, &[("k", k), ("m", m), ("n", nn)])?;
                    if v != (k == m * nn) {
                        bad.push((k, m, nn));
                    }
                }
            }
        }
        Ok((bad.is_empty(), json!({ "int_bound": n, "disagreements": bad })))
    }));
    out
}

pub fn powersoft2_suite(p: &VerifyParams) -> Vec<CheckRecord> {
    let curve = match TwistCurve::from_ints(&p.field, &p.cubic) {
        Ok(c) => c,
        Err(e) => return vec![check("powersoft2 curve", json!({ "P": p.cubic }), || Err(e))],
    };
    let mut out = Vec::new();
    let mut points = Vec::new();
    for m in 1..=p.m {
        out.push(check("frobenius point", json!({ "m": m }), || {
            let pt = curve.frobenius_point(m)?;
            // higher points make the sampled sums too tall to be quick
            if m == 1 {
                points.push(pt.clone());
            }
            Ok((curve.on_curve(&pt), json!(pt.to_string())))
        }));
    }
    points.push(TwistPoint::Affine { x: RatFun::t(&p.field), y: RatFun::one(&p.field) });
    out.extend(group_law_checks(&curve, &points, 50, p.seed));
    out
}

/// Identity, inverses and commutativity on `points` and `[2]`, `[3]` of
/// them; associativity on `triples` seeded samples.
pub fn group_law_checks(curve: &TwistCurve, points: &[TwistPoint], triples: usize, seed: u64) -> Vec<CheckRecord> {
    use rand::seq::SliceRandom;
    let mut pool: Vec<TwistPoint> = points.to_vec();
    for pt in points {
        for k in [2, 3] {
            if let Ok(q) = curve.mul_small(k, pt) {
                pool.push(q);
            }
        }
    }
    let mut out = Vec::new();
    out.push(check("group identity and inverse", json!({ "points": pool.len() }), || {
        let ok = pool.iter().try_fold(true, |acc, a| {
            Ok::<_, Error>(
                acc && curve.add(a, &TwistPoint::Infinity)? == *a
                    && curve.add(a, &curve.neg(a))? == TwistPoint::Infinity,
            )
        })?;
        Ok((ok, Value::Null))
    }));
    out.push(check("group commutativity", json!({ "points": pool.len() }), || {
        let mut ok = true;
        for a in &pool {
            for b in &pool {
                ok &= curve.add(a, b)? == curve.add(b, a)?;
            }
        }
        Ok((ok, Value::Null))
    }));
    out.push(check("group associativity", json!({ "triples": triples, "seed": seed }), || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut ok = !pool.is_empty();
        for _ in 0..triples {
            let v: Vec<&TwistPoint> = (0..3).map(|_| pool.choose(&mut rng).expect("pool is nonempty")).collect();
            let left = curve.add(&curve.add(v[0], v[1])?, v[2])?;
            let right = curve.add(v[0], &curve.add(v[1], v[2])?)?;
            ok &= left == right && curve.on_curve(&left);
        }
        Ok((ok, Value::Null))
    }));
    out
}

/// Whether `g` is a square in `F_q(t)`.
pub fn is_square(g: &RatFun) -> Result<bool> {
    let f = g.field();
    if g.is_zero() {
        return Ok(true);
    }
    let lc = g.num().lc();
    if !f.elements().any(|c| f.mul(c, c) == lc) {
        return Ok(false);
    }
    for poly in [g.num(), g.den()] {
        if poly.is_constant() {
            continue;
        }
        if factor(poly)?.factors.iter().any(|(_, m)| m % 2 == 1) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn ramify_suite(p: &VerifyParams) -> Vec<CheckRecord> {
    let f = &p.field;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut out = Vec::new();
    let mut made = 0;
    while made < p.samples {
        let g = random_nonzero_ratfun(f, 3, &mut rng);
        if is_square(&g).unwrap_or(true) {
            continue;
        }
        made += 1;
        out.push(check("ramification bound", json!({ "g": text(&g) }), || {
            let d = ExtensionDatum::quadratic(&g)?;
            let b = ramification_bound(&d)?;
            let places = ramified_finite_places(&d)?;
            let total: u64 = places.iter().map(Place::degree).sum();
            Ok((
                total <= b.n_alpha,
                json!({
                    "n_alpha": b.n_alpha,
                    "finite_degree_sum": total,
                    "finite_places": places.iter().map(|pl| pl.to_string()).collect::<Vec<_>>(),
                    "infinity_ramifies": infinity_ramifies(&d)?,
                }),
            ))
        }));
    }
    out
}

pub fn genus_suite(p: &VerifyParams) -> Vec<CheckRecord> {
    let prime = p.field.p() as u64;
    vec![check("genus params", json!({ "p": prime, "g_K": p.g_k }), || {
        let (k, u) = genus_params(p.g_k, prime);
        let holds = genus_lower_bound(k, u, prime) > p.g_k as u128 && gcd(u, prime) == 1 && u >= 3;
        let minimal = (3..u).filter(|&v| gcd(v, prime) == 1).all(|v| genus_lower_bound(1, v, prime) <= p.g_k as u128);
        Ok((holds && minimal && k == 1, json!({ "k": k, "u": u })))
    })]
}

pub fn constsol_suite(p: &VerifyParams) -> Vec<CheckRecord> {
    let f = &p.field;
    [1u64, 2]
        .into_iter()
        .map(|k| {
            check("constant solvability", json!({ "k": k, "q": f.q() }), || {
                let mut solvable = 0usize;
                for c in f.elements() {
                    if let Some(b) = as_const_solvable(f, c, k)? {
                        if f.sub(f.frob_pow(b, k), b) != f.neg(c) {
                            return Ok((false, json!({ "bad_c": f.digits(c) })));
                        }
                        solvable += 1;
                    }
                }
                let kernel = as_const_kernel(f, k).len();
                Ok((solvable * kernel == f.q() as usize, json!({ "solvable": solvable, "kernel": kernel })))
            })
        })
        .collect()
}

pub fn orbits_suite(p: &VerifyParams) -> Vec<CheckRecord> {
    let f = &p.field;
    vec![check("orbit constants", json!({ "M": p.orbits, "q": f.q() }), || {
        let oc = orbit_constants(f, p.orbits)?;
        // orbits of x -> x^p on F_q match monic irreducible factors of t^q - t over F_p
        let fp = FieldCtx::prime(f.p())?;
        let tq = Poly::monomial(&fp, FqElem::ONE, f.q() as u64).sub(&Poly::t(&fp));
        let count = factor(&tq)?.factors.len();
        let all = crate::geometry::frobenius_orbits(f).len();
        let constants: Vec<Vec<u32>> = oc.constants.iter().map(|&c| f.digits(c)).collect();
        Ok((count == all && oc.constants[0] == FqElem::ZERO, json!({ "constants": constants, "orbits": all })))
    })]
}
