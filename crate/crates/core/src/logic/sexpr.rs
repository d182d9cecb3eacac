//! S-expression syntax for formulas.
//!
//! ```text
//! formula := (forall x F) | (exists x F) | (and F...) | (or F...) | (not F)
//!          | (-> F F) | (= T T) | (divides T T) | (frob T T) | (samepow T T T T)
//! term    := symbol | decimal | (+ T T...) | (* T T...) | (- T T)
//!          | (pow T k) | (param name)
//! ```
//!
//! A decimal is an integer literal in arithmetic formulas and the ring
//! numeral `n * 1` in ring formulas.

use std::fmt::Write;

use super::syntax::{Formula, Sig, Term};
use crate::error::{Error, Result};

const RESERVED: &[&str] = &[
    "forall", "exists", "and", "or", "not", "->", "=", "divides", "frob", "samepow", "+", "*", "-", "pow",
    "param",
];

#[derive(Debug, Clone)]
enum Sexp {
    Atom(String, usize),
    List(Vec<Sexp>, usize),
}

impl Sexp {
    fn pos(&self) -> usize {
        match self {
            Sexp::Atom(_, p) | Sexp::List(_, p) => *p,
        }
    }
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { pos, msg: msg.into() }
}

fn read(text: &str) -> Result<Sexp> {
    let bytes = text.as_bytes();
    let mut stack: Vec<(Vec<Sexp>, usize)> = Vec::new();
    let mut done: Option<Sexp> = None;
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if done.is_some() {
            return Err(syntax(i, "trailing input after the formula"));
        }
        let item = match c {
            b'(' => {
                stack.push((Vec::new(), i));
                i += 1;
                continue;
            }
            b')' => {
                let (items, start) = stack.pop().ok_or_else(|| syntax(i, "unmatched ')'"))?;
                i += 1;
                Sexp::List(items, start)
            }
            _ => {
                let start = i;
                while i < bytes.len() && !bytes[i].is_ascii_whitespace() && bytes[i] != b'(' && bytes[i] != b')' {
                    i += 1;
                }
                Sexp::Atom(text[start..i].to_string(), start)
            }
        };
        match stack.last_mut() {
            Some((items, _)) => items.push(item),
            None => done = Some(item),
        }
    }
    if let Some((_, start)) = stack.last() {
        return Err(syntax(*start, "unclosed '('"));
    }
    done.ok_or_else(|| syntax(text.len(), "empty input"))
}

fn is_number(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

fn symbol(e: &Sexp, what: &str) -> Result<String> {
    match e {
        Sexp::Atom(s, _) if !is_number(s) && !RESERVED.contains(&s.as_str()) => Ok(s.clone()),
        _ => Err(syntax(e.pos(), format!("expected {what}"))),
    }
}

fn number(e: &Sexp) -> Result<u64> {
    match e {
        Sexp::Atom(s, p) if is_number(s) => s.parse().map_err(|_| syntax(*p, "number out of range")),
        _ => Err(syntax(e.pos(), "expected a decimal number")),
    }
}

fn head(items: &[Sexp], pos: usize) -> Result<&str> {
    match items.first() {
        Some(Sexp::Atom(s, _)) => Ok(s),
        _ => Err(syntax(pos, "expected an operator")),
    }
}

fn arity(items: &[Sexp], n: usize, pos: usize, op: &str) -> Result<()> {
    if items.len() != n + 1 {
        return Err(syntax(pos, format!("{op} takes {n} argument(s), got {}", items.len() - 1)));
    }
    Ok(())
}

fn term(e: &Sexp, sig: Sig) -> Result<Term> {
    match e {
        Sexp::Atom(s, p) => {
            if is_number(s) {
                let n: u64 = s.parse().map_err(|_| syntax(*p, "number out of range"))?;
                Ok(match sig {
                    Sig::Arith => Term::Lit(n),
                    Sig::Ring => Term::Const(n),
                })
            } else {
                Ok(Term::Var(symbol(e, "a variable")?))
            }
        }
        Sexp::List(items, pos) => {
            let op = head(items, *pos)?;
            let args = &items[1..];
            match op {
                "+" | "*" => {
                    if args.len() < 2 {
                        return Err(syntax(*pos, format!("{op} takes at least 2 arguments")));
                    }
                    let ts = args.iter().map(|a| term(a, sig)).collect::<Result<Vec<_>>>()?;
                    Ok(if op == "+" { Term::Add(ts) } else { Term::Mul(ts) })
                }
                "-" => {
                    arity(items, 2, *pos, op)?;
                    if sig == Sig::Arith {
                        return Err(Error::Sort("subtraction in an arithmetic term".into()));
                    }
                    Ok(Term::Sub(Box::new(term(&args[0], sig)?), Box::new(term(&args[1], sig)?)))
                }
                "pow" => {
                    arity(items, 2, *pos, op)?;
                    Ok(Term::Pow(Box::new(term(&args[0], sig)?), number(&args[1])?))
                }
                "param" => {
                    arity(items, 1, *pos, op)?;
                    if sig == Sig::Arith {
                        return Err(Error::Sort("parameter in an arithmetic term".into()));
                    }
                    Ok(Term::Param(symbol(&args[0], "a parameter name")?))
                }
                _ => Err(syntax(*pos, format!("unknown term operator '{op}'"))),
            }
        }
    }
}

fn formula(e: &Sexp, sig: Sig) -> Result<Formula> {
    let Sexp::List(items, pos) = e else {
        return Err(syntax(e.pos(), "expected a formula"));
    };
    let pos = *pos;
    let op = head(items, pos)?;
    let args = &items[1..];
    let f = match op {
        "forall" | "exists" => {
            arity(items, 2, pos, op)?;
            let x = symbol(&args[0], "a bound variable")?;
            let body = Box::new(formula(&args[1], sig)?);
            if op == "forall" {
                Formula::Forall(x, body)
            } else {
                Formula::Exists(x, body)
            }
        }
        "and" | "or" => {
            let fs = args.iter().map(|a| formula(a, sig)).collect::<Result<Vec<_>>>()?;
            if op == "and" {
                Formula::And(fs)
            } else {
                Formula::Or(fs)
            }
        }
        "not" => {
            arity(items, 1, pos, op)?;
            Formula::Not(Box::new(formula(&args[0], sig)?))
        }
        "->" => {
            arity(items, 2, pos, op)?;
            Formula::Implies(Box::new(formula(&args[0], sig)?), Box::new(formula(&args[1], sig)?))
        }
        "=" => {
            arity(items, 2, pos, op)?;
            Formula::Eq(term(&args[0], sig)?, term(&args[1], sig)?)
        }
        "divides" => {
            arity(items, 2, pos, op)?;
            if sig == Sig::Ring {
                return Err(Error::Sort("divides is not a ring relation".into()));
            }
            Formula::Divides(term(&args[0], sig)?, term(&args[1], sig)?)
        }
        "frob" => {
            arity(items, 2, pos, op)?;
            if sig == Sig::Arith {
                return Err(Error::Sort("frob is not an arithmetic relation".into()));
            }
            Formula::Frob(term(&args[0], sig)?, term(&args[1], sig)?)
        }
        "samepow" => {
            arity(items, 4, pos, op)?;
            if sig == Sig::Arith {
                return Err(Error::Sort("samepow is not an arithmetic relation".into()));
            }
            Formula::SamePow(term(&args[0], sig)?, term(&args[1], sig)?, term(&args[2], sig)?, term(&args[3], sig)?)
        }
        _ => return Err(syntax(pos, format!("unknown formula operator '{op}'"))),
    };
    Ok(f)
}

pub fn parse(text: &str, sig: Sig) -> Result<Formula> {
    let f = formula(&read(text)?, sig)?;
    f.check_sort(sig)?;
    Ok(f)
}

pub fn parse_term(text: &str, sig: Sig) -> Result<Term> {
    term(&read(text)?, sig)
}

fn write_term(out: &mut String, t: &Term) {
    match t {
        Term::Var(x) => out.push_str(x),
        Term::Lit(n) | Term::Const(n) => {
            let _ = write!(out, "{n}");
        }
        Term::Param(p) => {
            let _ = write!(out, "(param {p})");
        }
        Term::Add(v) | Term::Mul(v) => {
            out.push_str(if matches!(t, Term::Add(_)) { "(+" } else { "(*" });
            for a in v {
                out.push(' ');
                write_term(out, a);
            }
            out.push(')');
        }
        Term::Sub(a, b) => {
            out.push_str("(- ");
            write_term(out, a);
            out.push(' ');
            write_term(out, b);
            out.push(')');
        }
        Term::Pow(a, k) => {
            out.push_str("(pow ");
            write_term(out, a);
            let _ = write!(out, " {k})");
        }
    }
}

fn write_formula(out: &mut String, f: &Formula) {
    let app = |out: &mut String, op: &str, ts: &[&Term]| {
        out.push('(');
        out.push_str(op);
        for t in ts {
            out.push(' ');
            write_term(out, t);
        }
        out.push(')');
    };
    match f {
        Formula::Eq(a, b) => app(out, "=", &[a, b]),
        Formula::Divides(a, b) => app(out, "divides", &[a, b]),
        Formula::Frob(a, b) => app(out, "frob", &[a, b]),
        Formula::SamePow(a, b, c, d) => app(out, "samepow", &[a, b, c, d]),
        Formula::Not(g) => {
            out.push_str("(not ");
            write_formula(out, g);
            out.push(')');
        }
        Formula::And(v) | Formula::Or(v) => {
            out.push_str(if matches!(f, Formula::And(_)) { "(and" } else { "(or" });
            for g in v {
                out.push(' ');
                write_formula(out, g);
            }
            out.push(')');
        }
        Formula::Implies(a, b) => {
            out.push_str("(-> ");
            write_formula(out, a);
            out.push(' ');
            write_formula(out, b);
            out.push(')');
        }
        Formula::Forall(x, g) | Formula::Exists(x, g) => {
            let q = if matches!(f, Formula::Forall(..)) { "forall" } else { "exists" };
            let _ = write!(out, "({q} {x} ");
            write_formula(out, g);
            out.push(')');
        }
    }
}

/// Canonical one-line form.
pub fn print(f: &Formula) -> String {
    let mut s = String::new();
    write_formula(&mut s, f);
    s
}

pub fn print_term(t: &Term) -> String {
    let mut s = String::new();
    write_term(&mut s, t);
    s
}

impl std::fmt::Display for Formula {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&print(self))
    }
}

impl std::fmt::Display for Term {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&print_term(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::syntax::*;

    #[test]
    fn parse_examples() {
        let f = parse("(exists x (= (+ x x) (* 2 x)))", Sig::Arith).unwrap();
        assert_eq!(
            f,
            exists("x", eq(add(var("x"), var("x")), Term::Mul(vec![Term::Lit(2), var("x")])))
        );
        assert_eq!(f.quantifier_depth(), 1);
        assert!(matches!(parse("(divides 2 4)", Sig::Ring), Err(Error::Sort(_))));
    }

    #[test]
    fn canonical_printing() {
        let text = "  (forall x\n (->  (divides x 1) (= x 1)))";
        let f = parse(text, Sig::Arith).unwrap();
        assert_eq!(print(&f), "(forall x (-> (divides x 1) (= x 1)))");
        assert_eq!(parse(&print(&f), Sig::Arith).unwrap(), f);
        let r = "(exists u (= (- (pow u 3) u) (param a)))";
        assert_eq!(print(&parse(r, Sig::Ring).unwrap()), r);
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(parse("(= 1 1", Sig::Arith).unwrap_err(), Error::Syntax { pos: 0, msg: "unclosed '('".into() });
        match parse("(and (= 1 1) (foo 2))", Sig::Arith).unwrap_err() {
            Error::Syntax { pos, .. } => assert_eq!(pos, 13),
            e => panic!("{e:?}"),
        }
        assert!(matches!(parse("(= 1 1) x", Sig::Arith), Err(Error::Syntax { pos: 8, .. })));
        assert!(matches!(parse("(exists 3 (= 1 1))", Sig::Arith), Err(Error::Syntax { pos: 8, .. })));
        assert!(matches!(parse("(= (- 2 1) 1)", Sig::Arith), Err(Error::Sort(_))));
    }
}
