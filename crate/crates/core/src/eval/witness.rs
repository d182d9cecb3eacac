//! Witness-guided evaluation of ring sentences in `F_q(t)`.
//!
//! Atoms are decided exactly. An existential is decided exactly when its
//! body pins the variable down to a finite set that can be computed
//! (an equation, a `samepow` link, a root extraction or an Artin-Schreier
//! equation); otherwise candidates come from witness sources and the coded
//! integers `t^(B^s)`, `s <= s_max`, and a negative answer is marked as
//! bounded. Universal quantifiers only range over the coded integers.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::ring::{Env, RingCtx};
use crate::algebra::{FieldCtx, RatFun};
use crate::artin_schreier::{solve_as_all, ASExponent};
use crate::error::Result;
use crate::logic::syntax::{var, Formula, Term};
use crate::logic::TranslationEnv;
use crate::model::ModelParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Truth {
    True,
    False,
    Unknown,
}

impl Truth {
    fn not(self) -> Truth {
        match self {
            Truth::True => Truth::False,
            Truth::False => Truth::True,
            Truth::Unknown => Truth::Unknown,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub var: String,
    pub value: RatFun,
    pub source: String,
}

/// A truth value; `bounded` marks answers that rest on a finite search
/// rather than a complete one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub truth: Truth,
    pub bounded: bool,
    pub witnesses: Vec<Witness>,
}

impl Verdict {
    fn exact(b: bool) -> Verdict {
        Verdict { truth: if b { Truth::True } else { Truth::False }, bounded: false, witnesses: Vec::new() }
    }

    fn unknown() -> Verdict {
        Verdict { truth: Truth::Unknown, bounded: true, witnesses: Vec::new() }
    }

    fn negate(self) -> Verdict {
        Verdict { truth: self.truth.not(), bounded: self.bounded, witnesses: Vec::new() }
    }

    pub fn is_true(&self) -> bool {
        self.truth == Truth::True
    }

    pub fn is_false(&self) -> bool {
        self.truth == Truth::False
    }
}

/// Values proposed for an existential variable, each with where it came
/// from. With `exhaustive` set, no other value can satisfy the body.
#[derive(Clone, Debug)]
pub struct Candidates {
    pub values: Vec<(RatFun, String)>,
    pub exhaustive: bool,
}

impl Candidates {
    fn complete(values: Vec<RatFun>, source: &str) -> Candidates {
        Candidates { values: values.into_iter().map(|v| (v, source.to_string())).collect(), exhaustive: true }
    }
}

pub trait WitnessSource: Send + Sync {
    /// Candidates for `var` given the conjuncts of the quantifier's body.
    fn candidates(&self, ev: &WitnessEval, var: &str, body: &[&Formula], env: &Env) -> Result<Option<Candidates>>;
}

/// Values for named existential variables supplied from outside, such as
/// a generator's output, each with a provenance note.
#[derive(Clone, Debug, Default)]
pub struct WitnessBundle {
    pub values: BTreeMap<String, Vec<(RatFun, String)>>,
}

impl WitnessBundle {
    pub fn new() -> WitnessBundle {
        WitnessBundle::default()
    }

    pub fn insert(&mut self, var: &str, value: RatFun, provenance: &str) {
        self.values.entry(var.to_string()).or_default().push((value, provenance.to_string()));
    }

    /// The solution of the addition system for `a + b`, for the graph's
    /// variables `_X`, `_Z`.
    pub fn addition(model: &ModelParams, a: u64, b: u64) -> Result<WitnessBundle> {
        let w = model.add_witness(a, b)?;
        let note = format!("add_witness({a}, {b})");
        let mut out = WitnessBundle::new();
        out.insert("_X", w.x, &note);
        out.insert("_Z", w.z, &note);
        Ok(out)
    }

    /// The solution of the divisibility equation for `s1 | s2`, for the
    /// graph's variables `_dx`, `_dy`.
    pub fn divides(model: &ModelParams, s1: u64, s2: u64) -> Result<WitnessBundle> {
        let mut out = WitnessBundle::new();
        if let Some(x) = model.divides_witness(s1, s2)? {
            let note = format!("divides_witness({s1}, {s2})");
            out.insert("_dy", model.frob_s(&x, s1)?, &note);
            out.insert("_dx", x, &note);
        }
        Ok(out)
    }

    pub fn merge(mut self, other: WitnessBundle) -> WitnessBundle {
        for (k, v) in other.values {
            self.values.entry(k).or_default().extend(v);
        }
        self
    }
}

impl WitnessSource for WitnessBundle {
    fn candidates(&self, _: &WitnessEval, var: &str, _: &[&Formula], _: &Env) -> Result<Option<Candidates>> {
        Ok(self
            .values
            .get(var)
            .map(|v| Candidates { values: v.clone(), exhaustive: false }))
    }
}

/// Solution sets read off the shape of the body.
#[derive(Clone, Copy, Debug, Default)]
pub struct ModelWitnesses;

fn x_free(t: &Term, x: &str) -> bool {
    !t.has_var(x)
}

impl ModelWitnesses {
    /// `x = e` with `e` free of `x`.
    fn forced(ev: &WitnessEval, x: &str, body: &[&Formula], env: &Env) -> Result<Option<Candidates>> {
        let xv = var(x);
        for c in body {
            if let Formula::Eq(l, r) = c {
                let other = if *l == xv { r } else if *r == xv { l } else { continue };
                if x_free(other, x) {
                    let v = ev.ctx.term(other, env)?;
                    return Ok(Some(Candidates::complete(vec![v], "equation")));
                }
            }
        }
        Ok(None)
    }

    /// `samepow(b, c, x, y)`: `x = y^(B^s)` for the `s` with `c = b^(B^s)`.
    fn samepow(ev: &WitnessEval, x: &str, body: &[&Formula], env: &Env) -> Result<Option<Candidates>> {
        let xv = var(x);
        for c in body {
            if let Formula::SamePow(base, tp, y, w) = c {
                if *y == xv && [base, tp, w].iter().all(|t| x_free(t, x)) {
                    let (base, tp, w) = (ev.ctx.term(base, env)?, ev.ctx.term(tp, env)?, ev.ctx.term(w, env)?);
                    let model = ev.ctx.model();
                    let values = model
                        .frob_exponents(&base, &tp)
                        .into_iter()
                        .filter_map(|s| model.frob_s(&w, s).ok())
                        .collect();
                    return Ok(Some(Candidates::complete(values, "samepow")));
                }
            }
        }
        Ok(None)
    }

    /// `x != 0` and `exists y (samepow(b, c, y, x) and y e1 = x e2)`: the
    /// roots of `x^(B^s - 1) = e2 / e1`.
    fn roots(ev: &WitnessEval, x: &str, body: &[&Formula], env: &Env) -> Result<Option<Candidates>> {
        let xv = var(x);
        let nonzero = body.iter().any(|c| matches!(c, Formula::Not(g) if **g == Formula::Eq(xv.clone(), Term::Const(0))));
        if !nonzero {
            return Ok(None);
        }
        for c in body {
            let Formula::Exists(y, inner) = c else { continue };
            let yv = var(y);
            let inner = conjuncts(inner);
            let link = inner.iter().find_map(|g| match g {
                Formula::SamePow(base, tp, a, b) if *a == yv && *b == xv && x_free(base, x) && x_free(tp, x) => {
                    Some((base, tp))
                }
                _ => None,
            });
            let eqn = inner.iter().find_map(|g| match g {
                Formula::Eq(Term::Mul(l), Term::Mul(r)) if l.len() == 2 && r.len() == 2 && l[0] == yv && r[0] == xv => {
                    Some((&l[1], &r[1]))
                }
                _ => None,
            });
            let (Some((base, tp)), Some((e1, e2))) = (link, eqn) else { continue };
            if [base, tp, e1, e2].iter().any(|t| t.has_var(y) || t.has_var(x)) {
                continue;
            }
            let (base, tp) = (ev.ctx.term(base, env)?, ev.ctx.term(tp, env)?);
            let (e1, e2) = (ev.ctx.term(e1, env)?, ev.ctx.term(e2, env)?);
            if e1.is_zero() {
                if e2.is_zero() {
                    continue;
                }
                return Ok(Some(Candidates::complete(vec![], "roots")));
            }
            let target = e2.checked_div(&e1)?;
            let model = ev.ctx.model();
            let mut values = Vec::new();
            if !target.is_zero() {
                for s in model.frob_exponents(&base, &tp) {
                    let e = model.base_pow(s)? - 1;
                    values.extend(target.nth_roots(e)?);
                }
            }
            return Ok(Some(Candidates::complete(values, "roots")));
        }
        Ok(None)
    }

    /// `c = m (x^(p^k) - x)` with `c`, `m` free of `x`.
    fn artin_schreier(ev: &WitnessEval, x: &str, body: &[&Formula], env: &Env) -> Result<Option<Candidates>> {
        let p = ev.ctx.field().p() as u64;
        let as_power = |t: &Term| -> Option<u32> {
            let Term::Sub(a, b) = t else { return None };
            let Term::Pow(inner, e) = &**a else { return None };
            if **inner != var(x) || **b != var(x) {
                return None;
            }
            let (mut e, mut k) = (*e, 0u32);
            while e > 1 && e % p == 0 {
                e /= p;
                k += 1;
            }
            (e == 1 && k > 0).then_some(k)
        };
        for c in body {
            let Formula::Eq(l, r) = c else { continue };
            for (lhs, rhs) in [(l, r), (r, l)] {
                if !x_free(lhs, x) {
                    continue;
                }
                let (k, factors): (u32, Vec<&Term>) = match rhs {
                    t if as_power(t).is_some() => (as_power(t).unwrap(), vec![]),
                    Term::Mul(fs) => {
                        let hits: Vec<usize> = (0..fs.len()).filter(|&i| as_power(&fs[i]).is_some()).collect();
                        if hits.len() != 1 || fs.iter().enumerate().any(|(i, f)| i != hits[0] && !x_free(f, x)) {
                            continue;
                        }
                        let i = hits[0];
                        (as_power(&fs[i]).unwrap(), fs.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, f)| f).collect())
                    }
                    _ => continue,
                };
                let lhs = ev.ctx.term(lhs, env)?;
                let mut m = RatFun::one(ev.ctx.field());
                for f in factors {
                    m = m.mul(&ev.ctx.term(f, env)?);
                }
                if m.is_zero() {
                    if lhs.is_zero() {
                        continue;
                    }
                    return Ok(Some(Candidates::complete(vec![], "artin-schreier")));
                }
                let a = lhs.checked_div(&m)?;
                let values = solve_as_all(&a, ASExponent::new(k)?);
                return Ok(Some(Candidates::complete(values, "artin-schreier")));
            }
        }
        Ok(None)
    }

    /// Coded sums suggested by addition graphs mentioning `x`.
    fn addition_hints(ev: &WitnessEval, x: &str, body: &[&Formula], env: &Env) -> Vec<RatFun> {
        let xv = var(x);
        let model = ev.ctx.model();
        let mut out = Vec::new();
        for c in body {
            let Some((a, b, s)) = ev.match_add_graph(c) else { continue };
            let dec = |t: &Term| ev.ctx.term(t, env).ok().and_then(|v| model.decode(&v));
            let sum = if s == xv && x_free(&a, x) && x_free(&b, x) {
                dec(&a).zip(dec(&b)).map(|(a, b)| a + b)
            } else if a == xv && x_free(&b, x) && x_free(&s, x) {
                dec(&s).zip(dec(&b)).and_then(|(s, b)| s.checked_sub(b))
            } else if b == xv && x_free(&a, x) && x_free(&s, x) {
                dec(&s).zip(dec(&a)).and_then(|(s, a)| s.checked_sub(a))
            } else {
                None
            };
            if let Some(v) = sum.filter(|&v| v >= 1).and_then(|v| model.encode(v).ok()) {
                out.push(v.value);
            }
        }
        out
    }
}

impl WitnessSource for ModelWitnesses {
    fn candidates(&self, ev: &WitnessEval, x: &str, body: &[&Formula], env: &Env) -> Result<Option<Candidates>> {
        type Solver = fn(&WitnessEval, &str, &[&Formula], &Env) -> Result<Option<Candidates>>;
        let solvers: [Solver; 4] = [Self::forced, Self::samepow, Self::roots, Self::artin_schreier];
        for s in solvers {
            if let Some(c) = s(ev, x, body, env)? {
                return Ok(Some(c));
            }
        }
        let hints = Self::addition_hints(ev, x, body, env);
        Ok((!hints.is_empty()).then(|| Candidates {
            values: hints.into_iter().map(|v| (v, "addition".to_string())).collect(),
            exhaustive: false,
        }))
    }
}

/// Conjuncts of nested `and`s.
fn conjuncts(f: &Formula) -> Vec<&Formula> {
    match f {
        Formula::And(v) => v.iter().flat_map(conjuncts).collect(),
        _ => vec![f],
    }
}

/// Conjuncts that constrain a variable bound outside `f`: those of `f`
/// and, under `exists y`, those of the body not mentioning `y`.
fn constraints(f: &Formula) -> Vec<&Formula> {
    let mut out = Vec::new();
    for c in conjuncts(f) {
        out.push(c);
        if let Formula::Exists(y, g) = c {
            out.extend(constraints(g).into_iter().filter(|h| !h.free_vars().contains(y)));
        }
    }
    out
}

pub struct WitnessEval {
    ctx: RingCtx,
    tenv: TranslationEnv,
    s_max: u64,
    sources: Vec<Box<dyn WitnessSource>>,
    domain_cache: Mutex<HashMap<RatFun, Verdict>>,
}

impl WitnessEval {
    pub fn new(field: &FieldCtx, s_max: u64) -> WitnessEval {
        Self::with_ctx(RingCtx::new(field, BTreeMap::new()), s_max)
    }

    pub fn with_ctx(ctx: RingCtx, s_max: u64) -> WitnessEval {
        let tenv = TranslationEnv::new(ctx.model());
        WitnessEval { ctx, tenv, s_max, sources: vec![Box::new(ModelWitnesses)], domain_cache: Mutex::new(HashMap::new()) }
    }

    /// Adds a source consulted after the structural solvers.
    pub fn with_source(mut self, source: Box<dyn WitnessSource>) -> WitnessEval {
        self.sources.push(source);
        self
    }

    pub fn ctx(&self) -> &RingCtx {
        &self.ctx
    }

    pub fn s_max(&self) -> u64 {
        self.s_max
    }

    pub fn eval(&self, phi: &Formula) -> Result<Verdict> {
        self.eval_with(phi, &Vec::new())
    }

    pub fn eval_with(&self, phi: &Formula, env: &Env) -> Result<Verdict> {
        self.ctx.check(phi, env)?;
        self.formula(phi, &mut env.clone())
    }

    /// `(a, b, c)` when `f` is the addition graph of `a + b = c`.
    fn match_add_graph(&self, f: &Formula) -> Option<(Term, Term, Term)> {
        let Formula::Exists(_, g) = f else { return None };
        let Formula::Exists(_, h) = &**g else { return None };
        let Formula::And(v) = &**h else { return None };
        let [Formula::Eq(_, Term::Add(a)), Formula::Eq(_, Term::Mul(c)), Formula::Frob(Term::Mul(b), _)] = &v[..] else {
            return None;
        };
        let (a, b, c) = (a.first()?.clone(), b.get(1)?.clone(), c.get(1)?.clone());
        (self.tenv.add_graph(&a, &b, &c) == *f).then_some((a, b, c))
    }

    /// The variable `w` when `f` is the domain predicate of `w`.
    fn match_domain(&self, f: &Formula) -> Option<String> {
        let Formula::And(v) = f else { return None };
        let Some(Formula::Not(g)) = v.first() else { return None };
        let Formula::Eq(Term::Var(w), Term::Const(0)) = &**g else { return None };
        (self.tenv.domain_pred(&var(w)) == *f).then(|| w.clone())
    }

    fn domain(&self, w: &str, f: &Formula, env: &mut Env) -> Result<Verdict> {
        let v = self.ctx.term(&var(w), env)?;
        if let Some(hit) = self.domain_cache.lock().unwrap().get(&v) {
            return Ok(hit.clone());
        }
        let mut r = self.connective_or_atom(f, env)?;
        r.witnesses.clear();
        self.domain_cache.lock().unwrap().insert(v, r.clone());
        Ok(r)
    }

    fn formula(&self, f: &Formula, env: &mut Env) -> Result<Verdict> {
        if let Some(w) = self.match_domain(f) {
            return self.domain(&w, f, env);
        }
        self.connective_or_atom(f, env)
    }

    fn connective_or_atom(&self, f: &Formula, env: &mut Env) -> Result<Verdict> {
        Ok(match f {
            Formula::Not(g) => self.formula(g, env)?.negate(),
            Formula::And(v) => self.and(&v.iter().collect::<Vec<_>>(), env)?,
            Formula::Or(v) => self.or(v, env)?,
            Formula::Implies(a, b) => {
                let vb = self.formula(b, env)?;
                if vb.is_true() {
                    return Ok(vb);
                }
                let va = self.formula(a, env)?;
                match (va.truth, vb.truth) {
                    (Truth::False, _) => Verdict { truth: Truth::True, bounded: va.bounded, witnesses: vec![] },
                    (Truth::True, _) => Verdict { bounded: va.bounded || vb.bounded, ..vb },
                    _ => Verdict::unknown(),
                }
            }
            Formula::Exists(x, g) => self.exists(x, g, env)?,
            Formula::Forall(x, g) => self.forall(x, g, env)?,
            atom => Verdict::exact(self.ctx.atom(atom, env)?),
        })
    }

    fn and(&self, v: &[&Formula], env: &mut Env) -> Result<Verdict> {
        let mut out = Verdict::exact(true);
        let mut bounded_false: Option<Verdict> = None;
        for g in v {
            let r = self.formula(g, env)?;
            match r.truth {
                Truth::False if !r.bounded => return Ok(r),
                Truth::False => bounded_false = bounded_false.or(Some(r)),
                Truth::Unknown => out.truth = Truth::Unknown,
                Truth::True => {
                    out.bounded |= r.bounded;
                    out.witnesses.extend(r.witnesses);
                }
            }
        }
        if let Some(r) = bounded_false {
            return Ok(r);
        }
        if out.truth == Truth::Unknown {
            return Ok(Verdict::unknown());
        }
        Ok(out)
    }

    fn or(&self, v: &[Formula], env: &mut Env) -> Result<Verdict> {
        let mut bounded_true: Option<Verdict> = None;
        let mut unknown = false;
        let mut bounded = false;
        for g in v {
            let r = self.formula(g, env)?;
            match r.truth {
                Truth::True if !r.bounded => return Ok(r),
                Truth::True => bounded_true = bounded_true.or(Some(r)),
                Truth::Unknown => unknown = true,
                Truth::False => bounded |= r.bounded,
            }
        }
        Ok(match (bounded_true, unknown) {
            (Some(r), _) => r,
            (None, true) => Verdict::unknown(),
            (None, false) => Verdict { truth: Truth::False, bounded, witnesses: vec![] },
        })
    }

    fn coded(&self) -> Result<Vec<RatFun>> {
        Ok(self.ctx.model().coded_domain(self.s_max)?.into_iter().map(|c| c.value).collect())
    }

    fn exists(&self, x: &str, body: &Formula, env: &mut Env) -> Result<Verdict> {
        let conj = conjuncts(body);
        let visible = constraints(body);
        let mut pool: Vec<(RatFun, String)> = Vec::new();
        let mut exhaustive = false;
        for src in &self.sources {
            if let Some(c) = src.candidates(self, x, &visible, env)? {
                pool.extend(c.values);
                if c.exhaustive {
                    exhaustive = true;
                    break;
                }
            }
        }
        if !exhaustive {
            pool.extend(self.coded()?.into_iter().map(|v| (v, "coded".to_string())));
        }
        let mut seen = std::collections::HashSet::new();
        pool.retain(|(v, _)| seen.insert(v.clone()));

        let mut unknown = false;
        let mut bounded = !exhaustive;
        let mut bounded_true: Option<Verdict> = None;
        for (v, source) in pool {
            env.push((x.to_string(), v.clone()));
            let r = self.and(&conj, env);
            env.pop();
            let mut r = r?;
            match r.truth {
                Truth::True => {
                    r.witnesses.insert(0, Witness { var: x.to_string(), value: v, source });
                    if !r.bounded {
                        return Ok(r);
                    }
                    bounded_true = bounded_true.or(Some(r));
                }
                Truth::Unknown => unknown = true,
                Truth::False => bounded |= r.bounded,
            }
        }
        Ok(match (bounded_true, unknown) {
            (Some(r), _) => r,
            (None, true) => Verdict::unknown(),
            (None, false) => Verdict { truth: Truth::False, bounded, witnesses: vec![] },
        })
    }

    fn forall(&self, x: &str, body: &Formula, env: &mut Env) -> Result<Verdict> {
        let mut unknown = false;
        let mut bounded_false: Option<Verdict> = None;
        for v in self.coded()? {
            env.push((x.to_string(), v));
            let r = self.formula(body, env);
            env.pop();
            let r = r?;
            match r.truth {
                Truth::False if !r.bounded => return Ok(r),
                Truth::False => bounded_false = bounded_false.or(Some(r)),
                Truth::Unknown => unknown = true,
                Truth::True => {}
            }
        }
        Ok(match (bounded_false, unknown) {
            (Some(r), _) => r,
            (None, true) => Verdict::unknown(),
            (None, false) => Verdict { truth: Truth::True, bounded: true, witnesses: vec![] },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse, translate, Sig};

    fn ev3() -> WitnessEval {
        WitnessEval::new(&FieldCtx::prime(3).unwrap(), 6)
    }

    fn tr(ev: &WitnessEval, s: &str) -> Formula {
        translate(&parse(s, Sig::Arith).unwrap(), &TranslationEnv::new(ev.ctx().model())).unwrap()
    }

    #[test]
    fn domain_membership_is_exact() {
        let ev = ev3();
        let f = ev.ctx().field().clone();
        let dom = TranslationEnv::new(ev.ctx().model()).domain_pred(&var("w"));
        let check = |w: RatFun| ev.eval_with(&dom, &vec![("w".into(), w)]).unwrap();
        for s in 1..=4 {
            let r = check(ev.ctx().model().encode(s).unwrap().value);
            assert!(r.is_true() && !r.bounded, "s = {s}");
        }
        for w in [RatFun::t(&f), RatFun::monomial(&f, crate::algebra::FqElem::ONE, 2), RatFun::from_int(&f, 1)] {
            let r = check(w);
            assert!(r.is_false() && !r.bounded);
        }
    }

    #[test]
    fn closed_atoms_are_exact() {
        let ev = ev3();
        for (s, want) in [("(= (+ 1 1) 2)", true), ("(= (+ 1 1) 3)", false), ("(divides 2 4)", true), ("(divides 2 3)", false)]
        {
            let r = ev.eval(&tr(&ev, s)).unwrap();
            assert_eq!(r.truth == Truth::True, want, "{s}");
            assert!(!r.bounded, "{s}");
        }
    }

    #[test]
    fn existential_witnesses_are_reported() {
        let ev = ev3();
        let r = ev.eval(&tr(&ev, "(exists x (= (+ x 1) 3))")).unwrap();
        assert!(r.is_true());
        assert_eq!(r.witnesses[0].var, "x");
        assert_eq!(r.witnesses[0].value, ev.ctx().model().encode(2).unwrap().value);
    }
}
