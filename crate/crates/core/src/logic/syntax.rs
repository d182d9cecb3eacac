use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// Which language a formula belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sig {
    /// Positive integers with `+`, `*`, `|`.
    Arith,
    /// Fields with parameters.
    Ring,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    /// Positive-integer literal (arithmetic only).
    Lit(u64),
    /// The ring element `n * 1` (ring only).
    Const(u64),
    /// A named parameter (ring only).
    Param(String),
    Add(Vec<Term>),
    Mul(Vec<Term>),
    /// Ring only.
    Sub(Box<Term>, Box<Term>),
    Pow(Box<Term>, u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Eq(Term, Term),
    /// `a | b` (arithmetic only).
    Divides(Term, Term),
    /// `(x, y)` with `y = x^(B^s)` for some `s >= 1` (ring only).
    Frob(Term, Term),
    /// `(base, tp, y, x)` with `tp = base^(B^s)` and `y = x^(B^s)` for one
    /// `s >= 1` (ring only).
    SamePow(Term, Term, Term, Term),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

pub fn var(name: &str) -> Term {
    Term::Var(name.to_string())
}

pub fn param(name: &str) -> Term {
    Term::Param(name.to_string())
}

pub fn add(a: Term, b: Term) -> Term {
    Term::Add(vec![a, b])
}

pub fn mul(a: Term, b: Term) -> Term {
    Term::Mul(vec![a, b])
}

pub fn sub(a: Term, b: Term) -> Term {
    Term::Sub(Box::new(a), Box::new(b))
}

pub fn pow(a: Term, k: u64) -> Term {
    Term::Pow(Box::new(a), k)
}

pub fn eq(a: Term, b: Term) -> Formula {
    Formula::Eq(a, b)
}

pub fn not(f: Formula) -> Formula {
    Formula::Not(Box::new(f))
}

pub fn and(fs: Vec<Formula>) -> Formula {
    Formula::And(fs)
}

pub fn or(fs: Vec<Formula>) -> Formula {
    Formula::Or(fs)
}

pub fn implies(a: Formula, b: Formula) -> Formula {
    Formula::Implies(Box::new(a), Box::new(b))
}

pub fn forall(x: &str, f: Formula) -> Formula {
    Formula::Forall(x.to_string(), Box::new(f))
}

pub fn exists(x: &str, f: Formula) -> Formula {
    Formula::Exists(x.to_string(), Box::new(f))
}

impl Term {
    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Var(_) | Term::Lit(_) | Term::Const(_) | Term::Param(_) => vec![],
            Term::Add(v) | Term::Mul(v) => v.iter().collect(),
            Term::Sub(a, b) => vec![a, b],
            Term::Pow(a, _) => vec![a],
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        if let Term::Var(x) = self {
            out.insert(x.clone());
        }
        for c in self.children() {
            c.collect_vars(out);
        }
    }

    pub fn collect_params(&self, out: &mut BTreeSet<String>) {
        if let Term::Param(x) = self {
            out.insert(x.clone());
        }
        for c in self.children() {
            c.collect_params(out);
        }
    }

    pub fn has_var(&self, x: &str) -> bool {
        match self {
            Term::Var(y) => x == y,
            _ => self.children().into_iter().any(|c| c.has_var(x)),
        }
    }

    pub fn map(&self, f: &impl Fn(&Term) -> Option<Term>) -> Term {
        if let Some(t) = f(self) {
            return t;
        }
        match self {
            Term::Var(_) | Term::Lit(_) | Term::Const(_) | Term::Param(_) => self.clone(),
            Term::Add(v) => Term::Add(v.iter().map(|t| t.map(f)).collect()),
            Term::Mul(v) => Term::Mul(v.iter().map(|t| t.map(f)).collect()),
            Term::Sub(a, b) => Term::Sub(Box::new(a.map(f)), Box::new(b.map(f))),
            Term::Pow(a, k) => Term::Pow(Box::new(a.map(f)), *k),
        }
    }

    fn check_sort(&self, sig: Sig) -> Result<()> {
        match (self, sig) {
            (Term::Lit(_), Sig::Ring) => return Err(Error::Sort("integer literal in a ring term".into())),
            (Term::Const(_), Sig::Arith) => return Err(Error::Sort("ring constant in an arithmetic term".into())),
            (Term::Param(p), Sig::Arith) => {
                return Err(Error::Sort(format!("parameter {p} in an arithmetic term")))
            }
            (Term::Sub(..), Sig::Arith) => return Err(Error::Sort("subtraction in an arithmetic term".into())),
            (Term::Add(v) | Term::Mul(v), _) if v.is_empty() => {
                return Err(Error::Sort("empty sum or product".into()))
            }
            _ => {}
        }
        self.children().into_iter().try_for_each(|c| c.check_sort(sig))
    }
}

impl Formula {
    pub fn check_sort(&self, sig: Sig) -> Result<()> {
        match self {
            Formula::Eq(a, b) => {
                a.check_sort(sig)?;
                b.check_sort(sig)
            }
            Formula::Divides(a, b) => {
                if sig == Sig::Ring {
                    return Err(Error::Sort("divides is not a ring relation".into()));
                }
                a.check_sort(sig)?;
                b.check_sort(sig)
            }
            Formula::Frob(a, b) => {
                if sig == Sig::Arith {
                    return Err(Error::Sort("frob is not an arithmetic relation".into()));
                }
                a.check_sort(sig)?;
                b.check_sort(sig)
            }
            Formula::SamePow(a, b, c, d) => {
                if sig == Sig::Arith {
                    return Err(Error::Sort("samepow is not an arithmetic relation".into()));
                }
                [a, b, c, d].into_iter().try_for_each(|t| t.check_sort(sig))
            }
            Formula::Not(f) | Formula::Forall(_, f) | Formula::Exists(_, f) => f.check_sort(sig),
            Formula::And(v) | Formula::Or(v) => v.iter().try_for_each(|f| f.check_sort(sig)),
            Formula::Implies(a, b) => {
                a.check_sort(sig)?;
                b.check_sort(sig)
            }
        }
    }

    pub fn terms(&self) -> Vec<&Term> {
        match self {
            Formula::Eq(a, b) | Formula::Divides(a, b) | Formula::Frob(a, b) => vec![a, b],
            Formula::SamePow(a, b, c, d) => vec![a, b, c, d],
            _ => vec![],
        }
    }

    pub fn subformulas(&self) -> Vec<&Formula> {
        match self {
            Formula::Not(f) | Formula::Forall(_, f) | Formula::Exists(_, f) => vec![f],
            Formula::And(v) | Formula::Or(v) => v.iter().collect(),
            Formula::Implies(a, b) => vec![a, b],
            _ => vec![],
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        match self {
            Formula::Forall(x, f) | Formula::Exists(x, f) => {
                out = f.free_vars();
                out.remove(x);
            }
            _ => {
                for t in self.terms() {
                    t.collect_vars(&mut out);
                }
                for f in self.subformulas() {
                    out.extend(f.free_vars());
                }
            }
        }
        out
    }

    pub fn params(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for t in self.terms() {
            t.collect_params(&mut out);
        }
        for f in self.subformulas() {
            out.extend(f.params());
        }
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Longest chain of nested quantifiers.
    pub fn quantifier_depth(&self) -> usize {
        let inner = self.subformulas().into_iter().map(|f| f.quantifier_depth()).max().unwrap_or(0);
        match self {
            Formula::Forall(..) | Formula::Exists(..) => inner + 1,
            _ => inner,
        }
    }

    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Forall(x, _) | Formula::Exists(x, _) = f {
                out.insert(x.clone());
            }
            for t in f.terms() {
                t.collect_vars(&mut out);
            }
        });
        out
    }

    pub fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        for g in self.subformulas() {
            g.visit(f);
        }
    }

    /// Applies `f` to every term, leaving binders alone.
    pub fn map_terms(&self, f: &impl Fn(&Term) -> Term) -> Formula {
        match self {
            Formula::Eq(a, b) => Formula::Eq(f(a), f(b)),
            Formula::Divides(a, b) => Formula::Divides(f(a), f(b)),
            Formula::Frob(a, b) => Formula::Frob(f(a), f(b)),
            Formula::SamePow(a, b, c, d) => Formula::SamePow(f(a), f(b), f(c), f(d)),
            Formula::Not(g) => not(g.map_terms(f)),
            Formula::And(v) => and(v.iter().map(|g| g.map_terms(f)).collect()),
            Formula::Or(v) => or(v.iter().map(|g| g.map_terms(f)).collect()),
            Formula::Implies(a, b) => implies(a.map_terms(f), b.map_terms(f)),
            Formula::Forall(x, g) => Formula::Forall(x.clone(), Box::new(g.map_terms(f))),
            Formula::Exists(x, g) => Formula::Exists(x.clone(), Box::new(g.map_terms(f))),
        }
    }

    /// Substitutes terms for free variables. The caller keeps bound names
    /// disjoint from the variables of the substituted terms.
    pub fn subst(&self, bindings: &[(&str, Term)]) -> Formula {
        match self {
            Formula::Forall(x, g) | Formula::Exists(x, g) => {
                let inner: Vec<(&str, Term)> =
                    bindings.iter().filter(|(v, _)| v != x).cloned().collect();
                let body = Box::new(g.subst(&inner));
                if matches!(self, Formula::Forall(..)) {
                    Formula::Forall(x.clone(), body)
                } else {
                    Formula::Exists(x.clone(), body)
                }
            }
            Formula::Not(g) => not(g.subst(bindings)),
            Formula::And(v) => and(v.iter().map(|g| g.subst(bindings)).collect()),
            Formula::Or(v) => or(v.iter().map(|g| g.subst(bindings)).collect()),
            Formula::Implies(a, b) => implies(a.subst(bindings), b.subst(bindings)),
            _ => self.map_terms(&|t| {
                t.map(&|u| match u {
                    Term::Var(x) => bindings.iter().find(|(v, _)| v == x).map(|(_, t)| t.clone()),
                    _ => None,
                })
            }),
        }
    }

    /// Replaces a parameter by a term throughout.
    pub fn subst_param(&self, name: &str, by: &Term) -> Formula {
        self.map_terms(&|t| {
            t.map(&|u| match u {
                Term::Param(p) if p == name => Some(by.clone()),
                _ => None,
            })
        })
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_variables_and_depth() {
        let f = exists("x", and(vec![eq(var("x"), var("y")), forall("y", eq(var("y"), Term::Lit(1)))]));
        assert_eq!(f.free_vars().into_iter().collect::<Vec<_>>(), vec!["y".to_string()]);
        assert_eq!(f.quantifier_depth(), 2);
        let g = f.subst(&[("y", Term::Lit(3))]);
        assert!(g.is_closed());
        assert_eq!(
            g,
            exists("x", and(vec![eq(var("x"), Term::Lit(3)), forall("y", eq(var("y"), Term::Lit(1)))]))
        );
    }

    #[test]
    fn sorts() {
        let d = Formula::Divides(Term::Lit(2), Term::Lit(4));
        assert!(d.check_sort(Sig::Arith).is_ok());
        assert!(matches!(d.check_sort(Sig::Ring), Err(Error::Sort(_))));
        let r = eq(sub(param("t"), Term::Const(1)), Term::Const(0));
        assert!(r.check_sort(Sig::Ring).is_ok());
        assert!(r.check_sort(Sig::Arith).is_err());
    }
}
