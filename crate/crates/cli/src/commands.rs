use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Args, Subcommand};
use ffred::algebra::text::{from_text, to_text, RatFunText};
use ffred::algebra::{FieldCtx, RatFun};
use ffred::artin_schreier::{as_image, getdown_witness, version1_witness, ASExponent};
use ffred::elliptic::TwistCurve;
use ffred::eval::{eval_arith, evaluate, EvalConfig, Mode, RingCtx, Truth, WitnessBundle, WitnessEval};
use ffred::geometry::genus_params;
use ffred::logic::corpus::corpus;
use ffred::logic::{parse, parse_term, print, translate as compile, wrap_parameter_free, Formula, Sig, Term, TranslationEnv};
use ffred::model::ModelParams;
use ffred::verify::{check, run, CheckRecord, CheckVerdict, Lemma, Report, VerifyParams};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::CliError;

fn text(x: &RatFun) -> Value {
    serde_json::to_value(to_text(x)).expect("text form serializes")
}

/// A formula from `--expr`, a file, or `-` for stdin.
#[derive(Args, Debug, Clone)]
pub struct Input {
    /// File holding the formula, or `-` for stdin
    pub input: Option<PathBuf>,
    /// The formula itself
    #[arg(long, conflicts_with = "input")]
    pub expr: Option<String>,
}

impl Input {
    fn read(&self) -> Result<String, CliError> {
        match (&self.expr, &self.input) {
            (Some(e), _) => Ok(e.clone()),
            (None, Some(p)) if p == Path::new("-") => {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Usage(format!("stdin: {e}")))?;
                Ok(s)
            }
            (None, Some(p)) => {
                std::fs::read_to_string(p).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", p.display())))
            }
            (None, None) => Err(CliError::Usage("give a formula file or --expr".into())),
        }
    }
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Suite name, or `all`
    pub lemma: String,
    /// Degree bound for sweeps
    #[arg(long, default_value_t = 2)]
    pub degree: u64,
    /// Largest Frobenius point index
    #[arg(long, default_value_t = 3)]
    pub m: u32,
    /// Cubic of the twisted curve, constant term first
    #[arg(long = "P", value_delimiter = ',', allow_negative_numbers = true, default_value = "1,1,0,1")]
    pub cubic: Vec<i64>,
    /// Genus for the constant-field parameters
    #[arg(long, default_value_t = 2)]
    pub gk: u64,
    /// Orbit constants beyond c_0; defaults to min(q, 3) - 1
    #[arg(long)]
    pub orbits: Option<usize>,
    /// Bound on triples for the multiplication formula
    #[arg(long, default_value_t = 6)]
    pub robinson_bound: u64,
    /// Random samples per suite
    #[arg(long, default_value_t = 10)]
    pub samples: usize,
}

pub fn verify(cfg: &RunConfig, a: &VerifyArgs) -> Result<Report, CliError> {
    let field = cfg.field()?;
    let lemmas: Vec<Lemma> = if a.lemma == "all" {
        Lemma::ALL.into_iter().filter(|l| l.applies_to(&field)).collect()
    } else {
        let l: Lemma = a.lemma.parse()?;
        if !l.applies_to(&field) {
            return Err(CliError::Usage(format!("{} needs odd characteristic", l.name())));
        }
        vec![l]
    };
    let skipped: Vec<&str> = Lemma::ALL.iter().filter(|l| !lemmas.contains(l)).map(|l| l.name()).collect();
    let mut p = VerifyParams::new(&field);
    p.s_max = cfg.s_max;
    p.degree = a.degree;
    p.m = a.m;
    p.cubic = a.cubic.clone();
    p.g_k = a.gk;
    p.orbits = a.orbits.unwrap_or(p.orbits);
    p.robinson_bound = a.robinson_bound;
    p.samples = a.samples;
    p.seed = cfg.seed;
    let checks = lemmas.iter().flat_map(|&l| run(l, &p)).collect();
    let mut config = cfg.echo();
    config["lemmas"] = json!(lemmas.iter().map(|l| l.name()).collect::<Vec<_>>());
    if a.lemma == "all" {
        config["skipped"] = json!(skipped);
    }
    config["degree"] = json!(p.degree);
    config["m"] = json!(p.m);
    config["P"] = json!(p.cubic);
    config["gk"] = json!(p.g_k);
    config["orbits"] = json!(p.orbits);
    config["robinson_bound"] = json!(p.robinson_bound);
    config["samples"] = json!(p.samples);
    Ok(Report::new("verify", config, checks))
}

#[derive(Args, Debug)]
pub struct TranslateArgs {
    #[command(flatten)]
    pub input: Input,
    /// Quantify the parameter away under the translated axioms of Q
    #[arg(long)]
    pub wrap_q: bool,
    /// Also write the ring sentence to this file
    #[arg(long)]
    pub emit: Option<PathBuf>,
}

fn names(s: BTreeSet<String>) -> Vec<String> {
    s.into_iter().collect()
}

pub fn translate(cfg: &RunConfig, a: &TranslateArgs) -> Result<Report, CliError> {
    let phi = parse(&a.input.read()?, Sig::Arith)?;
    let env = TranslationEnv::new(&ModelParams::new(&cfg.field()?));
    let ring = if a.wrap_q { wrap_parameter_free(&phi, &env)? } else { compile(&phi, &env)? };
    let printed = print(&ring);
    if let Some(path) = &a.emit {
        std::fs::write(path, format!("{printed}\n"))
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    let expected: Vec<String> = if a.wrap_q { vec![] } else { vec!["t".into()] };
    let rec = check("translate", json!({ "source": print(&phi), "wrap_q": a.wrap_q }), || {
        let params = names(ring.params());
        let ok = params == expected && ring.is_closed() && ring.check_sort(Sig::Ring).is_ok();
        Ok((
            ok,
            json!({
                "sentence": printed,
                "parameters": params,
                "free_vars": names(ring.free_vars()),
                "size": ring.size(),
            }),
        ))
    });
    Ok(Report::new("translate", cfg.echo(), vec![rec]))
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[command(flatten)]
    pub input: Input,
    #[arg(long, default_value = "ring-witness", value_parser = ["arith", "ring-bounded", "ring-witness"])]
    pub mode: String,
    /// The input is an arithmetic sentence to translate before a ring evaluation
    #[arg(long)]
    pub from_arith: bool,
    /// Integer value for a free variable, `name=value` (arith mode)
    #[arg(long = "bind")]
    pub binds: Vec<String>,
    /// Ring parameter as a term in `(param t)`, `name=term`
    #[arg(long = "param")]
    pub params: Vec<String>,
    /// Witness bundle written by `ffred witness --bundle`
    #[arg(long)]
    pub witnesses: Option<PathBuf>,
}

fn split_assignment(s: &str) -> Result<(&str, &str), CliError> {
    s.split_once('=')
        .map(|(k, v)| (k.trim(), v.trim()))
        .filter(|(k, _)| !k.is_empty())
        .ok_or_else(|| CliError::Usage(format!("expected name=value, got {s:?}")))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct BundleEntry {
    value: RatFunText,
    source: String,
}

type BundleFile = BTreeMap<String, Vec<BundleEntry>>;

fn bundle_to_file(b: &WitnessBundle) -> BundleFile {
    b.values
        .iter()
        .map(|(k, vs)| {
            (k.clone(), vs.iter().map(|(v, s)| BundleEntry { value: to_text(v), source: s.clone() }).collect())
        })
        .collect()
}

fn read_bundle(path: &Path, field: &FieldCtx) -> Result<WitnessBundle, CliError> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let file: BundleFile =
        serde_json::from_str(&raw).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let mut b = WitnessBundle::new();
    for (var, entries) in file {
        for e in entries {
            b.insert(&var, from_text(field, &e.value)?, &e.source);
        }
    }
    Ok(b)
}

pub fn eval(cfg: &RunConfig, a: &EvalArgs) -> Result<Report, CliError> {
    let mode: Mode = a.mode.parse()?;
    let field = cfg.field()?;
    let source = a.input.read()?;
    let mut phi = if mode == Mode::Arith || a.from_arith { parse(&source, Sig::Arith)? } else { parse(&source, Sig::Ring)? };
    if !a.binds.is_empty() {
        if mode != Mode::Arith {
            return Err(CliError::Usage("--bind applies to arith mode; ring formulas take --param".into()));
        }
        let mut bindings = Vec::new();
        for b in &a.binds {
            let (k, v) = split_assignment(b)?;
            let v: u64 = v.parse().ok().filter(|&v| v >= 1).ok_or_else(|| CliError::Usage(format!("{b}: values are positive integers")))?;
            bindings.push((k, Term::Lit(v)));
        }
        phi = phi.subst(&bindings);
    }
    if a.from_arith && mode != Mode::Arith {
        phi = compile(&phi, &TranslationEnv::new(&ModelParams::new(&field)))?;
    }
    let base = RingCtx::new(&field, BTreeMap::new());
    let mut params = BTreeMap::new();
    for p in &a.params {
        let (k, v) = split_assignment(p)?;
        params.insert(k.to_string(), base.term(&parse_term(v, Sig::Ring)?, &Vec::new())?);
    }
    let bundle = a.witnesses.as_ref().map(|p| read_bundle(p, &field)).transpose()?;
    let ecfg = EvalConfig { mode, int_bound: cfg.int_bound, degree_bound: cfg.d, s_max: cfg.s_max };
    let report = evaluate(&phi, &field, &ecfg, &params, bundle)?;
    let verdict = match report.verdict {
        Truth::True => CheckVerdict::Pass,
        Truth::False => CheckVerdict::Fail,
        Truth::Unknown => CheckVerdict::Unknown,
    };
    let rec = CheckRecord {
        name: "eval".into(),
        params: json!({ "formula": print(&phi), "mode": mode, "params": a.params }),
        verdict,
        elapsed_ms: report.wall_time_ms,
        witnesses: serde_json::to_value(&report).expect("reports serialize"),
    };
    Ok(Report::new("eval", cfg.echo(), vec![rec]))
}

#[derive(Args, Debug)]
pub struct WitnessArgs {
    #[command(subcommand)]
    pub kind: WitnessKind,
    /// Write a bundle of existential values for `ffred eval --witnesses`
    #[arg(long)]
    pub bundle: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum WitnessKind {
    /// `u`, `v` for `w = t^(p^(rs))` in the two-equation system
    Version1 {
        #[arg(long)]
        s: u64,
        #[arg(long, default_value_t = 1)]
        r: u32,
    },
    /// `b`, `u` with `1/(t-a) - 1/(w-b) = u^p - u`, `w = t^(p^s)`
    Getdown {
        #[arg(long)]
        s: u64,
        /// Base-p digits of a, low first
        #[arg(long, value_delimiter = ',', default_value = "0")]
        a: Vec<u32>,
    },
    /// Solution of the addition system for `a + b`
    Add {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
    },
    /// Solution of the divisibility equation for `s1 | s2`
    Divides {
        #[arg(long)]
        s1: u64,
        #[arg(long)]
        s2: u64,
    },
}

pub fn witness(cfg: &RunConfig, a: &WitnessArgs) -> Result<Report, CliError> {
    let field = cfg.field()?;
    let model = ModelParams::new(&field);
    let mut bundle = None;
    let rec = match &a.kind {
        WitnessKind::Version1 { s, r } => {
            let r = ASExponent::new(*r)?;
            let w = version1_witness(&field, *s, r)?;
            check("version1 witness", json!({ "s": s, "r": r.r() }), || {
                let t = RatFun::t(&field);
                let ok = as_image(&w.u, r) == t.inv()?.sub(&w.w.inv()?) && as_image(&w.v, r) == t.sub(&w.w);
                Ok((ok, json!({ "w": text(&w.w), "u": text(&w.u), "v": text(&w.v) })))
            })
        }
        WitnessKind::Getdown { s, a: digits } => {
            let c = field.from_digits(digits)?;
            let g = getdown_witness(&field, *s, c)?;
            check("getdown witness", json!({ "s": s, "a": digits }), || {
                let t = RatFun::t(&field);
                let lhs = t.sub(&RatFun::constant(&field, c)).inv()?.sub(&g.w.sub(&RatFun::constant(&field, g.b)).inv()?);
                let ok = as_image(&g.u, ASExponent::new(1)?) == lhs;
                Ok((ok, json!({ "b": field.digits(g.b), "w": text(&g.w), "u": text(&g.u) })))
            })
        }
        WitnessKind::Add { a: x, b: y } => {
            let w = model.add_witness(*x, *y)?;
            bundle = Some(WitnessBundle::addition(&model, *x, *y)?);
            check("addition witness", json!({ "a": x, "b": y }), || {
                let ok = model.check_add_triple(&model.encode(*x)?.value, &model.encode(*y)?.value, &model.encode(x + y)?.value)
                    && w.z.checked_div(&w.x)? == model.encode(w.j)?.value;
                Ok((ok, json!({ "x": text(&w.x), "z": text(&w.z), "l": w.l, "j": w.j })))
            })
        }
        WitnessKind::Divides { s1, s2 } => {
            let found = model.divides_witness(*s1, *s2)?;
            bundle = Some(WitnessBundle::divides(&model, *s1, *s2)?);
            check("divisibility witness", json!({ "s1": s1, "s2": s2 }), || match &found {
                Some(x) => {
                    let lhs = x.pow(model.base_pow(*s1)? - 1);
                    Ok((lhs == model.t().pow(model.base_pow(*s2)? - 1), json!({ "x": text(x) })))
                }
                None => Ok((false, json!({ "x": null, "reason": format!("{s1} does not divide {s2}") }))),
            })
        }
    };
    if let Some(path) = &a.bundle {
        let b = bundle.ok_or_else(|| CliError::Usage("bundles are produced for add and divides".into()))?;
        let body = serde_json::to_string_pretty(&bundle_to_file(&b)).expect("bundles serialize");
        std::fs::write(path, body + "\n").map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(Report::new("witness", cfg.echo(), vec![rec]))
}

#[derive(Args, Debug)]
pub struct CurveArgs {
    /// Cubic P, constant term first
    #[arg(long = "P", value_delimiter = ',', allow_negative_numbers = true, default_value = "1,1,0,1")]
    pub cubic: Vec<i64>,
    /// Largest Frobenius point index
    #[arg(long, default_value_t = 3)]
    pub m: u32,
}

pub fn curve(cfg: &RunConfig, a: &CurveArgs) -> Result<Report, CliError> {
    let field = cfg.field()?;
    let c = TwistCurve::from_ints(&field, &a.cubic)?;
    let mut checks = vec![check("twisted curve", json!({ "P": a.cubic }), || {
        let [a2, a4, a6] = c.weierstrass_coeffs();
        Ok((true, json!({ "P(t)": text(c.twist()), "a2": text(a2), "a4": text(a4), "a6": text(a6) })))
    })];
    let mut p = VerifyParams::new(&field);
    p.cubic = a.cubic.clone();
    p.m = a.m;
    p.seed = cfg.seed;
    checks.extend(run(Lemma::Powersoft2, &p));
    let mut config = cfg.echo();
    config["P"] = json!(a.cubic);
    config["m"] = json!(a.m);
    Ok(Report::new("curve", config, checks))
}

fn demo_translation(field: &FieldCtx, s_max: u64) -> CheckRecord {
    let source = "(divides 2 4)";
    check("translate and evaluate", json!({ "sentence": source }), || {
        let phi: Formula = parse(source, Sig::Arith)?;
        let ev = WitnessEval::new(field, s_max);
        let ring = compile(&phi, &TranslationEnv::new(ev.ctx().model()))?;
        let v = ev.eval(&ring)?;
        let w: Vec<Value> = v.witnesses.iter().map(|w| json!({ "var": w.var, "value": text(&w.value) })).collect();
        Ok((v.is_true() && eval_arith(&phi, 30)?, json!({ "ring_size": ring.size(), "witnesses": w })))
    })
}

fn demo_corpus(field: &FieldCtx, s_max: u64, bound: u64) -> CheckRecord {
    check("corpus agreement", json!({ "N": bound }), || {
        let ev = WitnessEval::new(field, s_max);
        let env = TranslationEnv::new(ev.ctx().model());
        let mut agree = 0;
        let mut bounded = 0;
        let all = corpus();
        for (phi, _) in &all {
            let v = ev.eval(&compile(phi, &env)?)?;
            agree += (v.is_true() == eval_arith(phi, bound)? && (v.is_true() || v.is_false())) as usize;
            bounded += v.bounded as usize;
        }
        Ok((agree == all.len(), json!({ "agree": agree, "total": all.len(), "bounded": bounded })))
    })
}

pub fn demo(cfg: &RunConfig) -> Result<Report, CliError> {
    let field = cfg.field()?;
    let r = ASExponent::for_char(field.p());
    let mut checks = vec![demo_translation(&field, cfg.s_max), demo_corpus(&field, cfg.s_max, cfg.int_bound)];
    checks.push(check("two-equation witness", json!({ "s": 2, "r": r.r() }), || {
        let w = version1_witness(&field, 2, r)?;
        Ok((true, json!({ "w": text(&w.w), "u": text(&w.u), "v": text(&w.v) })))
    }));
    if field.p() > 2 {
        checks.push(check("genus parameters", json!({ "p": field.p(), "gk": 2 }), || {
            let (k, u) = genus_params(2, field.p() as u64);
            Ok((true, json!({ "k": k, "u": u })))
        }));
    }
    Ok(Report::new("demo", cfg.echo(), checks))
}
