//! A fixed set of small arithmetic sentences with known truth values:
//! quantifier depth at most 2, literals at most 3, and every witness at
//! most 6.

use super::sexpr::parse;
use super::syntax::{Formula, Sig};

pub const CORPUS: &[(&str, bool)] = &[
    ("(= (+ 1 1) 2)", true),
    ("(divides 2 2)", true),
    ("(exists x (= (+ x 1) 3))", true),
    ("(forall x (divides 1 x))", true),
    ("(exists x (exists y (= (+ x y) 3)))", true),
    ("(forall x (exists y (= (+ x 1) y)))", true),
    ("(exists x (divides x 3))", true),
    ("(not (divides 2 3))", true),
    ("(forall x (-> (divides x 1) (= x 1)))", true),
    ("(exists x (and (divides 2 x) (= (+ 1 3) x)))", true),
    ("(= (+ 1 1) 3)", false),
    ("(divides 2 3)", false),
    ("(exists x (= (+ x 1) 1))", false),
    ("(forall x (divides 2 x))", false),
    ("(forall x (exists y (= (+ y 1) x)))", false),
    ("(exists x (and (divides 2 x) (divides x 3)))", false),
    ("(not (= 2 2))", false),
    ("(forall x (= x 1))", false),
    ("(exists x (= (+ x x) 3))", false),
    ("(exists x (forall y (divides y x)))", false),
];

pub fn corpus() -> Vec<(Formula, bool)> {
    CORPUS
        .iter()
        .map(|(s, v)| (parse(s, Sig::Arith).expect("corpus sentences parse"), *v))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_shape() {
        let c = corpus();
        assert_eq!(c.len(), 20);
        assert_eq!(c.iter().filter(|(_, v)| *v).count(), 10);
        for (f, _) in &c {
            assert!(f.is_closed());
            assert!(f.quantifier_depth() <= 2);
        }
    }
}
