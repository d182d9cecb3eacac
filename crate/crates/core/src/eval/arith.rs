//! Arithmetic sentences over `{1, ..., N}`.

use crate::error::{Error, Result};
use crate::logic::syntax::{Formula, Term};

struct ArithEval {
    bound: u64,
}

type Env = Vec<(String, u64)>;

fn lookup(env: &Env, x: &str) -> Result<u64> {
    env.iter()
        .rev()
        .find(|(y, _)| y == x)
        .map(|(_, v)| *v)
        .ok_or_else(|| Error::Eval(format!("unbound variable {x}")))
}

fn conjuncts(f: &Formula) -> &[Formula] {
    match f {
        Formula::And(v) => v,
        _ => std::slice::from_ref(f),
    }
}

impl ArithEval {
    fn term(&self, t: &Term, env: &Env) -> Result<u64> {
        let overflow = || Error::Eval(format!("overflow evaluating {t}"));
        Ok(match t {
            Term::Var(x) => lookup(env, x)?,
            Term::Lit(n) => *n,
            Term::Add(v) => v.iter().try_fold(0u64, |acc, a| acc.checked_add(self.term(a, env)?).ok_or_else(overflow))?,
            Term::Mul(v) => v.iter().try_fold(1u64, |acc, a| acc.checked_mul(self.term(a, env)?).ok_or_else(overflow))?,
            Term::Pow(a, k) => {
                let base = self.term(a, env)?;
                u32::try_from(*k).ok().and_then(|k| base.checked_pow(k)).ok_or_else(overflow)?
            }
            other => return Err(Error::Eval(format!("{other} is not an arithmetic term"))),
        })
    }

    /// Values of `x` worth trying: a value pinned by an equation conjunct
    /// (tried even above the bound, since no other value can work), else
    /// the multiples of a divisor conjunct, else the whole range.
    fn candidates(&self, x: &str, body: &Formula, env: &Env) -> Result<Vec<u64>> {
        let xv = Term::Var(x.to_string());
        for c in conjuncts(body) {
            if let Formula::Eq(l, r) = c {
                let other = if *l == xv { r } else if *r == xv { l } else { continue };
                if !other.has_var(x) {
                    let v = self.term(other, env)?;
                    return Ok(if v >= 1 { vec![v] } else { vec![] });
                }
            }
        }
        for c in conjuncts(body) {
            if let Formula::Divides(d, y) = c {
                if *y == xv && !d.has_var(x) {
                    let d = self.term(d, env)?;
                    return Ok((1..=self.bound / d.max(1)).map(|k| k * d).collect());
                }
            }
        }
        Ok((1..=self.bound).collect())
    }

    fn formula(&self, f: &Formula, env: &mut Env) -> Result<bool> {
        Ok(match f {
            Formula::Eq(a, b) => self.term(a, env)? == self.term(b, env)?,
            Formula::Divides(a, b) => {
                let (a, b) = (self.term(a, env)?, self.term(b, env)?);
                if a == 0 {
                    b == 0
                } else {
                    b % a == 0
                }
            }
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
            Formula::Exists(x, g) => {
                for v in self.candidates(x, g, env)? {
                    env.push((x.clone(), v));
                    let r = self.formula(g, env);
                    env.pop();
                    if r? {
                        return Ok(true);
                    }
                }
                false
            }
            Formula::Forall(x, g) => {
                for v in 1..=self.bound {
                    env.push((x.clone(), v));
                    let r = self.formula(g, env);
                    env.pop();
                    if !r? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Frob(..) | Formula::SamePow(..) => {
                return Err(Error::Eval("ring relation in an arithmetic formula".into()))
            }
        })
    }
}

/// Truth of a closed arithmetic sentence with quantifiers over
/// `{1, ..., bound}`.
pub fn eval_arith(phi: &Formula, bound: u64) -> Result<bool> {
    eval_arith_with(phi, bound, &[])
}

/// As [`eval_arith`], with values for the free variables.
pub fn eval_arith_with(phi: &Formula, bound: u64, values: &[(&str, u64)]) -> Result<bool> {
    if bound == 0 {
        return Err(Error::InvalidArgument("the integer bound must be at least 1".into()));
    }
    let mut env: Env = values.iter().map(|(x, v)| (x.to_string(), *v)).collect();
    if let Some(x) = phi.free_vars().into_iter().find(|x| !env.iter().any(|(y, _)| y == x)) {
        return Err(Error::Eval(format!("free variable {x} has no value")));
    }
    ArithEval { bound }.formula(phi, &mut env)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse, Sig};
    use crate::model::robinson_formula;

    #[test]
    fn examples() {
        let p = |s| parse(s, Sig::Arith).unwrap();
        assert!(eval_arith(&p("(exists x (= (+ x x) 4))"), 10).unwrap());
        assert!(eval_arith(&p("(forall x (divides 1 x))"), 20).unwrap());
        assert!(!eval_arith(&p("(exists x (= (+ x x) 5))"), 10).unwrap());
        let f = robinson_formula();
        assert!(eval_arith_with(&f, 30, &[("k", 12), ("m", 3), ("n", 4)]).unwrap());
        assert!(!eval_arith_with(&f, 30, &[("k", 13), ("m", 3), ("n", 4)]).unwrap());
    }
}
