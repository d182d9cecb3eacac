//! Ring terms and atoms in `F_q(t)`, and the bounded-height evaluator.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::algebra::{FieldCtx, FqElem, Poly, RatFun};
use crate::error::{Error, Result};
use crate::logic::syntax::{Formula, Sig, Term};
use crate::model::ModelParams;

/// Refuse bounded searches over more points than this.
pub const SEARCH_LIMIT: u128 = 10_000_000;

pub type Env = Vec<(String, RatFun)>;

/// Values for parameters and the atomic predicates of the ring language.
#[derive(Clone, Debug)]
pub struct RingCtx {
    model: ModelParams,
    params: BTreeMap<String, RatFun>,
}

impl RingCtx {
    /// Parameter `t` is the variable of `F_q(t)`; others come from `params`.
    pub fn new(field: &FieldCtx, params: BTreeMap<String, RatFun>) -> RingCtx {
        let model = ModelParams::new(field);
        let mut params = params;
        params.entry("t".to_string()).or_insert_with(|| model.t());
        RingCtx { model, params }
    }

    pub fn model(&self) -> &ModelParams {
        &self.model
    }

    pub fn field(&self) -> &FieldCtx {
        self.model.field()
    }

    pub fn check(&self, phi: &Formula, env: &Env) -> Result<()> {
        phi.check_sort(Sig::Ring)?;
        if let Some(x) = phi.free_vars().into_iter().find(|x| !env.iter().any(|(y, _)| y == x)) {
            return Err(Error::Eval(format!("free variable {x} has no value")));
        }
        if let Some(a) = phi.params().into_iter().find(|a| !self.params.contains_key(a)) {
            return Err(Error::Eval(format!("parameter {a} has no value")));
        }
        Ok(())
    }

    pub fn term(&self, t: &Term, env: &Env) -> Result<RatFun> {
        let f = self.field();
        Ok(match t {
            Term::Var(x) => env
                .iter()
                .rev()
                .find(|(y, _)| y == x)
                .map(|(_, v)| v.clone())
                .ok_or_else(|| Error::Eval(format!("unbound variable {x}")))?,
            Term::Const(c) => RatFun::from_int(f, (*c % f.p() as u64) as i64),
            Term::Param(a) => {
                self.params.get(a).cloned().ok_or_else(|| Error::Eval(format!("parameter {a} has no value")))?
            }
            Term::Add(v) => v.iter().try_fold(RatFun::zero(f), |acc, a| Ok::<_, Error>(acc.add(&self.term(a, env)?)))?,
            Term::Mul(v) => v.iter().try_fold(RatFun::one(f), |acc, a| Ok::<_, Error>(acc.mul(&self.term(a, env)?)))?,
            Term::Sub(a, b) => self.term(a, env)?.sub(&self.term(b, env)?),
            Term::Pow(a, e) => power(&self.term(a, env)?, *e)?,
            Term::Lit(k) => return Err(Error::Eval(format!("integer literal {k} in a ring term"))),
        })
    }

    /// Truth of `=`, `frob` and `samepow` on values.
    pub fn atom(&self, f: &Formula, env: &Env) -> Result<bool> {
        Ok(match f {
            Formula::Eq(a, b) => self.term(a, env)? == self.term(b, env)?,
            Formula::Frob(a, b) => self.model.check_x_pair(&self.term(a, env)?, &self.term(b, env)?).is_some(),
            Formula::SamePow(base, tp, y, x) => {
                let v = [base, tp, y, x].map(|t| self.term(t, env));
                let [base, tp, y, x] = v;
                self.model.samepow_exponent(&base?, &tp?, &y?, &x?).is_some()
            }
            _ => return Err(Error::Eval(format!("{f} is not a ring atom"))),
        })
    }
}

/// `x^e`, through the Frobenius when `e` is a power of `p`.
pub fn power(x: &RatFun, e: u64) -> Result<RatFun> {
    let p = x.field().p() as u64;
    let (mut k, mut m) = (0u32, e);
    while m > 1 && m % p == 0 {
        m /= p;
        k += 1;
    }
    if m == 1 && k > 0 {
        return x.checked_frobenius_power(k);
    }
    if e > 1 << 20 && x.height() > 0 {
        return Err(Error::ExponentOverflow(format!("({x})^{e}")));
    }
    Ok(x.pow(e))
}

/// `f/g` in lowest terms with `deg f, deg g <= d` and `g` monic, ordered by
/// denominator degree, numerator degree, then coefficients.
pub fn universe(field: &FieldCtx, d: u64) -> Vec<RatFun> {
    let q = field.q() as u64;
    let polys_of_degree = |k: u64, monic: bool| -> Vec<Poly> {
        if k == 0 {
            let elems: Vec<FqElem> = field.elements().filter(|c| !monic || *c == FqElem::ONE).collect();
            return elems.into_iter().filter(|c| !c.is_zero()).map(|c| Poly::constant(field, c)).collect();
        }
        let lower = q.pow(k as u32);
        let leads: Vec<FqElem> = if monic { vec![FqElem::ONE] } else { field.elements().skip(1).collect() };
        let mut out = Vec::new();
        for lead in leads {
            for idx in 0..lower {
                let mut coeffs = Vec::with_capacity(k as usize + 1);
                let mut r = idx;
                for _ in 0..k {
                    coeffs.push(field.from_index((r % q) as u32).unwrap());
                    r /= q;
                }
                coeffs.push(lead);
                out.push(Poly::from_coeffs(field, &coeffs));
            }
        }
        out
    };
    let mut out = vec![RatFun::zero(field)];
    for dd in 0..=d {
        let dens = polys_of_degree(dd, true);
        for dn in 0..=d {
            let nums = polys_of_degree(dn, false);
            for g in &dens {
                for f in &nums {
                    if f.gcd(g).is_one() {
                        out.push(RatFun::new(f.clone(), g.clone()).expect("nonzero denominator"));
                    }
                }
            }
        }
    }
    out
}

/// Number of points a bounded search may visit: `(q^(2(d+1)))^depth`.
pub fn search_points(field: &FieldCtx, d: u64, depth: usize) -> u128 {
    let per = (field.q() as u128).checked_pow(2 * (d as u32 + 1)).unwrap_or(u128::MAX);
    (0..depth).fold(1u128, |acc, _| acc.saturating_mul(per))
}

struct Bounded<'a> {
    ctx: &'a RingCtx,
    universe: &'a [RatFun],
}

impl Bounded<'_> {
    fn formula(&self, f: &Formula, env: &mut Env) -> Result<bool> {
        Ok(match f {
            Formula::Not(g) => !self.formula(g, env)?,
            Formula::And(v) => {
                for g in v {
                    if !self.formula(g, env)? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Or(v) => {
                for g in v {
                    if self.formula(g, env)? {
                        return Ok(true);
                    }
                }
                false
            }
            Formula::Implies(a, b) => !self.formula(a, env)? || self.formula(b, env)?,
            Formula::Exists(x, g) => self.quantifier(x, g, env, true)?,
            Formula::Forall(x, g) => self.quantifier(x, g, env, false)?,
            atom => self.ctx.atom(atom, env)?,
        })
    }

    /// Sequential scan looking for a value where `body` is `target`.
    fn quantifier(&self, x: &str, body: &Formula, env: &mut Env, target: bool) -> Result<bool> {
        for v in self.universe {
            env.push((x.to_string(), v.clone()));
            let r = self.formula(body, env);
            env.pop();
            if r? == target {
                return Ok(target);
            }
        }
        Ok(!target)
    }

    /// The outermost quantifier in parallel.
    fn top(&self, f: &Formula, env: &Env) -> Result<bool> {
        let (x, body, target) = match f {
            Formula::Exists(x, g) => (x, g, true),
            Formula::Forall(x, g) => (x, g, false),
            _ => return self.formula(f, &mut env.clone()),
        };
        let hit = self.universe.par_iter().map(|v| {
            let mut env = env.clone();
            env.push((x.clone(), v.clone()));
            self.formula(body, &mut env).map(|r| r == target)
        });
        let found = hit.try_fold(|| false, |acc, r| r.map(|r| acc || r)).try_reduce(|| false, |a, b| Ok(a || b))?;
        Ok(if found { target } else { !target })
    }
}

/// Truth of `phi` with every quantifier over [`universe`]`(field, d)`. This
/// answers for the finite universe, not for `F_q(t)`.
pub fn eval_ring_bounded(phi: &Formula, ctx: &RingCtx, d: u64, env: &Env) -> Result<bool> {
    ctx.check(phi, env)?;
    let points = search_points(ctx.field(), d, phi.quantifier_depth());
    if points > SEARCH_LIMIT {
        return Err(Error::SearchSpace { points, limit: SEARCH_LIMIT });
    }
    let universe = universe(ctx.field(), d);
    Bounded { ctx, universe: &universe }.top(phi, env)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse, translate, TranslationEnv};

    #[test]
    fn universe_counts() {
        let f2 = FieldCtx::prime(2).unwrap();
        // deg <= 1 over F2: 0, 1, t, t+1, 1/t, 1/(t+1), t/(t+1), (t+1)/t
        assert_eq!(universe(&f2, 1).len(), 8);
        let f3 = FieldCtx::prime(3).unwrap();
        let u = universe(&f3, 1);
        let set: std::collections::HashSet<_> = u.iter().cloned().collect();
        assert_eq!(set.len(), u.len());
        assert_eq!(u[0], RatFun::zero(&f3));
    }

    #[test]
    fn bounded_examples() {
        let f3 = FieldCtx::prime(3).unwrap();
        let ctx = RingCtx::new(&f3, BTreeMap::new());
        let p = |s| parse(s, Sig::Ring).unwrap();
        assert!(eval_ring_bounded(&p("(exists x (= (* x x) (* (param t) (param t) (param t) (param t))))"), &ctx, 2, &vec![]).unwrap());
        assert!(!eval_ring_bounded(&p("(exists x (= (* x x) (param t)))"), &ctx, 2, &vec![]).unwrap());
        assert!(eval_ring_bounded(&p("(forall x (exists y (= (+ x y) 0)))"), &ctx, 1, &vec![]).unwrap());
    }

    #[test]
    fn guard_refuses_large_searches() {
        let f3 = FieldCtx::prime(3).unwrap();
        let ctx = RingCtx::new(&f3, BTreeMap::new());
        let env = TranslationEnv::new(ctx.model());
        let phi = translate(&parse("(= (+ 1 1) 2)", Sig::Arith).unwrap(), &env).unwrap();
        assert!(matches!(eval_ring_bounded(&phi, &ctx, 27, &vec![]), Err(Error::SearchSpace { .. })));
    }
}
