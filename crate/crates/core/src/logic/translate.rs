//! Compiling sentences about `(Z_{>0}, +, |, *)` into ring sentences about
//! `F_q(t)` with the single parameter `t`.

use super::syntax::*;
use crate::error::{Error, Result};
use crate::model::{robinson_formula, ModelParams};

/// Largest integer literal accepted; literal `k` becomes `t^(B^k)`.
pub const MAX_LITERAL: u64 = 12;

/// Name of the variable replacing `t` in parameter-free sentences.
pub const WRAP_VAR: &str = "_w";

#[derive(Clone, Debug)]
pub struct TranslationEnv {
    base: u64,
}

fn t() -> Term {
    param("t")
}

fn one() -> Term {
    Term::Const(1)
}

fn zero() -> Term {
    Term::Const(0)
}

impl TranslationEnv {
    pub fn new(params: &ModelParams) -> TranslationEnv {
        TranslationEnv { base: params.base() }
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    /// `w` is a power `t^(B^s)` with `s >= 1`:
    /// `w != 0`, `w != t`, `1/t - 1/w = u^B - u` (cleared of denominators)
    /// and `t - w = v^B - v`.
    pub fn domain_pred(&self, w: &Term) -> Formula {
        let b = self.base;
        let as_image = |x: &str| sub(pow(var(x), b), var(x));
        and(vec![
            not(eq(w.clone(), zero())),
            not(eq(w.clone(), t())),
            exists("_u", eq(sub(w.clone(), t()), Term::Mul(vec![t(), w.clone(), as_image("_u")]))),
            exists("_v", eq(sub(t(), w.clone()), as_image("_v"))),
        ])
    }

    /// `(a, b, c)` is `(t^(B^x), t^(B^y), t^(B^(x+y)))`, for arguments in the
    /// domain: `X - 1 = a`, `Z = ((t+1) b)^(B^l)` and `Z / X = c`.
    pub fn add_graph(&self, a: &Term, b: &Term, c: &Term) -> Formula {
        exists(
            "_X",
            exists(
                "_Z",
                and(vec![
                    eq(var("_X"), add(a.clone(), one())),
                    eq(var("_Z"), mul(var("_X"), c.clone())),
                    Formula::Frob(mul(add(t(), one()), b.clone()), var("_Z")),
                ]),
            ),
        )
    }

    /// For `a = t^(B^x)`, `b = t^(B^y)`: some nonzero `X` has
    /// `X^(B^x - 1) = t^(B^y - 1)`, written as `Y = X^(B^x)` and
    /// `Y t = X b`.
    pub fn div_graph(&self, a: &Term, b: &Term) -> Formula {
        exists(
            "_dx",
            and(vec![
                not(eq(var("_dx"), zero())),
                exists(
                    "_dy",
                    and(vec![
                        Formula::SamePow(t(), a.clone(), var("_dy"), var("_dx")),
                        eq(mul(var("_dy"), t()), mul(var("_dx"), b.clone())),
                    ]),
                ),
            ]),
        )
    }

    pub fn literal(&self, k: u64) -> Result<Term> {
        if k == 0 || k > MAX_LITERAL {
            return Err(Error::Translate(format!("literal {k} outside 1..={MAX_LITERAL}")));
        }
        Ok(pow(t(), self.base.pow(k as u32)))
    }
}

/// `x^e` as a product; `x^0` is `1`.
fn desugar_pow(t: &Term) -> Term {
    match t {
        Term::Pow(_, 0) => Term::Lit(1),
        Term::Pow(x, 1) => desugar_pow(x),
        Term::Pow(x, e) => Term::Mul(vec![desugar_pow(x); *e as usize]),
        Term::Add(v) => Term::Add(v.iter().map(desugar_pow).collect()),
        Term::Mul(v) => Term::Mul(v.iter().map(desugar_pow).collect()),
        _ => t.clone(),
    }
}

/// Finds an innermost product, replaces its first two factors with `name`
/// and returns the factors.
fn extract_mul(t: &Term, name: &str) -> Option<(Term, Term, Term)> {
    match t {
        Term::Mul(v) => {
            for (i, c) in v.iter().enumerate() {
                if let Some((a, b, c2)) = extract_mul(c, name) {
                    let mut w = v.clone();
                    w[i] = c2;
                    return Some((a, b, Term::Mul(w)));
                }
            }
            let (a, b) = (v[0].clone(), v[1].clone());
            let rest: Vec<Term> = std::iter::once(var(name)).chain(v[2..].iter().cloned()).collect();
            let replaced = if rest.len() == 1 { var(name) } else { Term::Mul(rest) };
            Some((a, b, replaced))
        }
        Term::Add(v) => {
            for (i, c) in v.iter().enumerate() {
                if let Some((a, b, c2)) = extract_mul(c, name) {
                    let mut w = v.clone();
                    w[i] = c2;
                    return Some((a, b, Term::Add(w)));
                }
            }
            None
        }
        _ => None,
    }
}

/// Rewrites an atom so products disappear, each one `a * b` becoming a
/// fresh `_mK` constrained by the multiplication formula.
fn eliminate_mul_atom(atom: &Formula) -> Formula {
    let mut counter = 0;
    let mut constraints: Vec<(String, Formula)> = Vec::new();
    let mut terms: Vec<Term> = atom.terms().into_iter().cloned().collect();
    loop {
        counter += 1;
        let name = format!("_m{counter}");
        let found = terms
            .iter()
            .enumerate()
            .find_map(|(i, t)| extract_mul(t, &name).map(|r| (i, r)));
        let Some((i, (a, b, replaced))) = found else {
            break;
        };
        terms[i] = replaced;
        let f = robinson_formula().subst(&[("k", var(&name)), ("m", a), ("n", b)]);
        constraints.push((name, f));
    }
    let mut out = match atom {
        Formula::Eq(..) => Formula::Eq(terms[0].clone(), terms[1].clone()),
        Formula::Divides(..) => Formula::Divides(terms[0].clone(), terms[1].clone()),
        _ => unreachable!("arithmetic atoms are = and divides"),
    };
    for (name, f) in constraints.into_iter().rev() {
        out = exists(&name, and(vec![f, out]));
    }
    out
}

fn eliminate_mul(f: &Formula) -> Result<Formula> {
    Ok(match f {
        Formula::Eq(..) | Formula::Divides(..) => {
            let g = f.map_terms(&desugar_pow);
            eliminate_mul_atom(&g)
        }
        Formula::Not(g) => not(eliminate_mul(g)?),
        Formula::And(v) => and(v.iter().map(eliminate_mul).collect::<Result<_>>()?),
        Formula::Or(v) => or(v.iter().map(eliminate_mul).collect::<Result<_>>()?),
        Formula::Implies(a, b) => implies(eliminate_mul(a)?, eliminate_mul(b)?),
        Formula::Forall(x, g) => forall(x, eliminate_mul(g)?),
        Formula::Exists(x, g) => exists(x, eliminate_mul(g)?),
        Formula::Frob(..) | Formula::SamePow(..) => {
            return Err(Error::Translate("ring relation in an arithmetic formula".into()))
        }
    })
}

struct AtomCtx<'a> {
    env: &'a TranslationEnv,
    counter: usize,
    /// Fresh variables with their defining formulas, innermost first.
    defs: Vec<(String, Formula)>,
}

impl AtomCtx<'_> {
    fn fresh(&mut self) -> String {
        self.counter += 1;
        format!("_{}", self.counter)
    }

    /// A variable or `t`-power standing for `t`, with definitions recorded
    /// for compound subterms.
    fn simple(&mut self, t: &Term) -> Result<Term> {
        match t {
            Term::Var(x) => Ok(Term::Var(x.clone())),
            Term::Lit(k) => self.env.literal(*k),
            Term::Add(v) => {
                let (a, b) = self.sum_args(v)?;
                let name = self.fresh();
                let g = self.env.add_graph(&a, &b, &var(&name));
                self.defs.push((name.clone(), g));
                Ok(var(&name))
            }
            other => Err(Error::Translate(format!("unsupported arithmetic term {other}"))),
        }
    }

    /// `(a, b)` for the sum `(+ ... a) + b`.
    fn sum_args(&mut self, v: &[Term]) -> Result<(Term, Term)> {
        let (last, init) = v.split_last().expect("sums have at least two terms");
        let a = if init.len() == 1 { self.simple(&init[0])? } else { self.simple(&Term::Add(init.to_vec()))? };
        let b = self.simple(last)?;
        Ok((a, b))
    }

    fn wrap(self, atom: Formula) -> Formula {
        self.defs.into_iter().rev().fold(atom, |acc, (name, def)| {
            let dom = self.env.domain_pred(&var(&name));
            exists(&name, and(vec![dom, def, acc]))
        })
    }
}

fn translate_atom(f: &Formula, env: &TranslationEnv) -> Result<Formula> {
    let mut ctx = AtomCtx { env, counter: 0, defs: Vec::new() };
    let atom = match f {
        Formula::Eq(Term::Add(v), c) | Formula::Eq(c, Term::Add(v)) if !matches!(c, Term::Add(_)) => {
            let (a, b) = ctx.sum_args(v)?;
            let c = ctx.simple(c)?;
            env.add_graph(&a, &b, &c)
        }
        Formula::Eq(l, r) => {
            let l = ctx.simple(l)?;
            let r = ctx.simple(r)?;
            eq(l, r)
        }
        Formula::Divides(a, b) => {
            let a = ctx.simple(a)?;
            let b = ctx.simple(b)?;
            env.div_graph(&a, &b)
        }
        _ => unreachable!(),
    };
    Ok(ctx.wrap(atom))
}

fn translate_core(f: &Formula, env: &TranslationEnv) -> Result<Formula> {
    Ok(match f {
        Formula::Eq(..) | Formula::Divides(..) => translate_atom(f, env)?,
        Formula::Not(g) => not(translate_core(g, env)?),
        Formula::And(v) => and(v.iter().map(|g| translate_core(g, env)).collect::<Result<_>>()?),
        Formula::Or(v) => or(v.iter().map(|g| translate_core(g, env)).collect::<Result<_>>()?),
        Formula::Implies(a, b) => implies(translate_core(a, env)?, translate_core(b, env)?),
        Formula::Forall(x, g) => forall(x, implies(env.domain_pred(&var(x)), translate_core(g, env)?)),
        Formula::Exists(x, g) => exists(x, and(vec![env.domain_pred(&var(x)), translate_core(g, env)?])),
        Formula::Frob(..) | Formula::SamePow(..) => {
            return Err(Error::Translate("ring relation in an arithmetic formula".into()))
        }
    })
}

/// The ring sentence true in `F_q(t)` exactly when `phi` holds in the
/// positive integers. Free variables of `phi` stay free and range over
/// the coded integers.
pub fn translate(phi: &Formula, env: &TranslationEnv) -> Result<Formula> {
    phi.check_sort(Sig::Arith)?;
    if let Some(x) = phi.all_vars().into_iter().find(|x| x.starts_with('_')) {
        return Err(Error::Translate(format!("variable name {x} is reserved")));
    }
    translate_core(&eliminate_mul(phi)?, env)
}

/// The axioms of Robinson's Q, shifted so that the natural number `n` is
/// the positive integer `n + 1`: zero is `1`, the successor is `x + 1`,
/// `x (+) y = w` means `w + 1 = x + y` and `x (*) y = w` means
/// `xy + 2 = w + x + y`.
pub fn q_axioms() -> Vec<Formula> {
    let l = Term::Lit;
    let (x, y, w, v, u) = (|| var("x"), || var("y"), || var("w"), || var("v"), || var("u"));
    let succ = |a: Term| add(a, l(1));
    vec![
        forall("x", not(eq(succ(x()), l(1)))),
        forall("x", forall("y", implies(eq(succ(x()), succ(y())), eq(x(), y())))),
        forall("x", or(vec![eq(x(), l(1)), exists("y", eq(x(), succ(y())))])),
        forall("x", forall("w", implies(eq(succ(w()), add(x(), l(1))), eq(w(), x())))),
        forall(
            "x",
            forall(
                "y",
                forall(
                    "w",
                    forall(
                        "v",
                        implies(
                            and(vec![eq(succ(w()), add(x(), succ(y()))), eq(succ(v()), add(x(), y()))]),
                            eq(w(), succ(v())),
                        ),
                    ),
                ),
            ),
        ),
        forall(
            "x",
            forall("w", implies(eq(add(mul(x(), l(1)), l(2)), Term::Add(vec![w(), x(), l(1)])), eq(w(), l(1)))),
        ),
        forall(
            "x",
            forall(
                "y",
                forall(
                    "w",
                    forall(
                        "v",
                        forall(
                            "u",
                            implies(
                                and(vec![
                                    eq(add(mul(x(), succ(y())), l(2)), Term::Add(vec![w(), x(), succ(y())])),
                                    eq(add(mul(x(), y()), l(2)), Term::Add(vec![v(), x(), y()])),
                                    eq(succ(u()), add(v(), x())),
                                ]),
                                eq(w(), u()),
                            ),
                        ),
                    ),
                ),
            ),
        ),
    ]
}

/// `forall w (phiK(Ax)[t := w] -> phiK(psi)[t := w])`, a sentence with
/// no parameters.
pub fn wrap_parameter_free(psi: &Formula, env: &TranslationEnv) -> Result<Formula> {
    if !psi.is_closed() {
        return Err(Error::Translate("only sentences can be wrapped".into()));
    }
    let ax = translate(&and(q_axioms()), env)?;
    let body = implies(ax, translate(psi, env)?).subst_param("t", &var(WRAP_VAR));
    Ok(forall(WRAP_VAR, body))
}

/// The wrapper's body at `w := t`.
pub fn instantiate_wrapper(phi: &Formula) -> Result<Formula> {
    match phi {
        Formula::Forall(x, body) if x == WRAP_VAR => Ok(body.subst(&[(WRAP_VAR, t())])),
        _ => Err(Error::Translate("not a parameter-free wrapper".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FieldCtx;
    use crate::logic::sexpr::parse;

    fn env3() -> TranslationEnv {
        TranslationEnv::new(&ModelParams::new(&FieldCtx::prime(3).unwrap()))
    }

    #[test]
    fn sentences_translate_to_t_only() {
        let env = env3();
        for s in ["(= (+ 1 1) 2)", "(divides 2 4)", "(forall x (exists y (= (+ x y (* x y)) 3)))"] {
            let phi = parse(s, Sig::Arith).unwrap();
            let r = translate(&phi, &env).unwrap();
            assert!(r.check_sort(Sig::Ring).is_ok());
            assert!(r.is_closed(), "{s}");
            assert_eq!(r.params().into_iter().collect::<Vec<_>>(), vec!["t".to_string()]);
        }
    }

    #[test]
    fn connectives_are_preserved() {
        let env = env3();
        let a = parse("(= (+ 1 x) 2)", Sig::Arith).unwrap();
        let b = parse("(divides x (* 2 x))", Sig::Arith).unwrap();
        let (ta, tb) = (translate(&a, &env).unwrap(), translate(&b, &env).unwrap());
        assert_eq!(translate(&not(a.clone()), &env).unwrap(), not(ta.clone()));
        assert_eq!(translate(&and(vec![a.clone(), b.clone()]), &env).unwrap(), and(vec![ta.clone(), tb.clone()]));
        assert_eq!(translate(&or(vec![a.clone(), b.clone()]), &env).unwrap(), or(vec![ta.clone(), tb.clone()]));
        assert_eq!(translate(&implies(a, b), &env).unwrap(), implies(ta, tb));
    }

    #[test]
    fn rejects_bad_input() {
        let env = env3();
        let big = parse("(= x 13)", Sig::Arith).unwrap();
        assert!(matches!(translate(&big, &env), Err(Error::Translate(_))));
        let reserved = parse("(exists _a (= _a 1))", Sig::Arith).unwrap();
        assert!(matches!(translate(&reserved, &env), Err(Error::Translate(_))));
        let open = parse("(= x 1)", Sig::Arith).unwrap();
        assert!(wrap_parameter_free(&open, &env).is_err());
    }

    #[test]
    fn wrapper_is_parameter_free() {
        let env = env3();
        assert_eq!(q_axioms().len(), 7);
        let psi = parse("(= 1 1)", Sig::Arith).unwrap();
        let w = wrap_parameter_free(&psi, &env).unwrap();
        assert!(w.params().is_empty());
        assert!(w.is_closed());
        let inst = instantiate_wrapper(&w).unwrap();
        assert_eq!(inst, implies(translate(&and(q_axioms()), &env).unwrap(), translate(&psi, &env).unwrap()));
    }

    #[test]
    fn products_become_robinson_instances() {
        let env = env3();
        let phi = parse("(= (* 2 3) x)", Sig::Arith).unwrap();
        let elim = eliminate_mul(&phi).unwrap();
        let expected = exists(
            "_m1",
            and(vec![
                robinson_formula().subst(&[("k", var("_m1")), ("m", Term::Lit(2)), ("n", Term::Lit(3))]),
                eq(var("_m1"), var("x")),
            ]),
        );
        assert_eq!(elim, expected);
        assert!(translate(&phi, &env).is_ok());
    }
}
