//! The positive integers with `+` and `|` inside `F_q(t)`: `s` is
//! represented by `t^(B^s)`, where `B = p` for odd `p` and `B = 4` for
//! `p = 2`.

use crate::algebra::{FieldCtx, FqElem, RatFun};
use crate::artin_schreier::{t_power_exponent, ASExponent};
use crate::error::{Error, Result};
use crate::logic::syntax::{add, and, eq, exists, forall, implies, var, Formula, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelParams {
    field: FieldCtx,
    r: ASExponent,
    base: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodedInt {
    pub s: u64,
    pub value: RatFun,
}

/// The solution of the addition system for `(t^(B^a), t^(B^b))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AddWitness {
    pub x: RatFun,
    pub z: RatFun,
    pub l: u64,
    pub j: u64,
}

impl ModelParams {
    pub fn new(field: &FieldCtx) -> ModelParams {
        let r = ASExponent::for_char(field.p());
        ModelParams { field: field.clone(), r, base: r.base(field) }
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn r(&self) -> ASExponent {
        self.r
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn t(&self) -> RatFun {
        RatFun::t(&self.field)
    }

    /// `B^s`, if it fits.
    pub fn base_pow(&self, s: u64) -> Result<u64> {
        u32::try_from(s)
            .ok()
            .and_then(|s| self.base.checked_pow(s))
            .filter(|&v| v <= 1 << 62)
            .ok_or_else(|| Error::ExponentOverflow(format!("{}^{s}", self.base)))
    }

    /// `x^(B^s)`.
    pub fn frob_s(&self, x: &RatFun, s: u64) -> Result<RatFun> {
        let e = u32::try_from(s * self.r.r() as u64)
            .map_err(|_| Error::ExponentOverflow(format!("frobenius power {s}")))?;
        x.checked_frobenius_power(e)
    }

    pub fn encode(&self, s: u64) -> Result<CodedInt> {
        if s == 0 {
            return Err(Error::InvalidArgument("coded integers start at 1".into()));
        }
        let e = self.base_pow(s)?;
        Ok(CodedInt { s, value: RatFun::monomial(&self.field, FqElem::ONE, e as i64) })
    }

    pub fn decode(&self, x: &RatFun) -> Option<u64> {
        t_power_exponent(x, self.base).filter(|&s| s >= 1)
    }

    pub fn add_witness(&self, a: u64, b: u64) -> Result<AddWitness> {
        if a == 0 || b == 0 {
            return Err(Error::InvalidArgument("addition witnesses need a, b >= 1".into()));
        }
        let f = &self.field;
        let t = self.t();
        let tp1 = t.add(&RatFun::one(f));
        let xa = self.encode(a)?.value;
        let xb = self.encode(b)?.value;
        let x = self.frob_s(&tp1, a)?;
        let z = self.frob_s(&tp1.mul(&xb), a)?;
        let j = a + b;
        let xc = self.encode(j)?.value;
        if x.sub(&RatFun::one(f)) != xa || z.checked_div(&x)? != xc {
            return Err(Error::InternalContradiction(format!("addition witness for {a} + {b} does not verify")));
        }
        Ok(AddWitness { x, z, l: a, j })
    }

    /// Decides membership in the addition graph by decoding.
    pub fn check_add_triple(&self, xa: &RatFun, xb: &RatFun, xc: &RatFun) -> bool {
        match (self.decode(xa), self.decode(xb), self.decode(xc)) {
            (Some(a), Some(b), Some(c)) => a + b == c,
            _ => false,
        }
    }

    /// Solves the addition system directly: `x = xa + 1`, then for
    /// `l = 1..=l_max` tries `z = ((t+1) xb)^(B^l)` and asks whether `z/x`
    /// is a coded integer. Returns `(l, j)` for the first hit.
    pub fn add_system_search(&self, xa: &RatFun, xb: &RatFun, l_max: u64) -> Option<(u64, u64)> {
        self.decode(xa)?;
        self.decode(xb)?;
        let f = &self.field;
        let x = xa.add(&RatFun::one(f));
        let base = self.t().add(&RatFun::one(f)).mul(xb);
        (1..=l_max).find_map(|l| {
            let z = self.frob_s(&base, l).ok()?;
            let j = self.decode(&z.checked_div(&x).ok()?)?;
            Some((l, j))
        })
    }

    /// `x = t^l` with `x^(B^s1 - 1) = t^(B^s2 - 1)`, when
    /// `(B^s1 - 1) | (B^s2 - 1)`.
    pub fn divides_witness(&self, s1: u64, s2: u64) -> Result<Option<RatFun>> {
        let (e1, e2) = self.divide_exponents(s1, s2)?;
        if e2 % e1 != 0 {
            return Ok(None);
        }
        let x = RatFun::monomial(&self.field, FqElem::ONE, (e2 / e1) as i64);
        if x.pow(e1) != RatFun::monomial(&self.field, FqElem::ONE, e2 as i64) {
            return Err(Error::InternalContradiction(format!("divisibility witness for {s1} | {s2}")));
        }
        Ok(Some(x))
    }

    fn divide_exponents(&self, s1: u64, s2: u64) -> Result<(u64, u64)> {
        if s1 == 0 || s2 == 0 {
            return Err(Error::InvalidArgument("divisibility is over positive integers".into()));
        }
        Ok((self.base_pow(s1)? - 1, self.base_pow(s2)? - 1))
    }

    /// All solutions `zeta t^l` of the divisibility equation, where
    /// `zeta^(B^s1 - 1) = 1`.
    pub fn divides_solutions(&self, s1: u64, s2: u64) -> Result<Vec<RatFun>> {
        let (e1, _) = self.divide_exponents(s1, s2)?;
        let Some(x) = self.divides_witness(s1, s2)? else {
            return Ok(Vec::new());
        };
        let f = &self.field;
        Ok(f.elements()
            .filter(|&z| !z.is_zero() && f.pow(z, e1) == FqElem::ONE)
            .map(|z| x.scale(z))
            .collect())
    }

    /// Exhaustive search over monomials `t^l`, `0 <= l <= B^s2 - 1`, for a
    /// solution of the divisibility equation.
    pub fn divides_monomial_search(&self, s1: u64, s2: u64) -> Result<Option<u64>> {
        let (e1, e2) = self.divide_exponents(s1, s2)?;
        let target = RatFun::monomial(&self.field, FqElem::ONE, e2 as i64);
        Ok((0..=e2).find(|&l| RatFun::monomial(&self.field, FqElem::ONE, l as i64).pow(e1) == target))
    }

    /// The exponents `s >= 1` with `big = small^(B^s)`, smallest first.
    pub fn frob_exponents(&self, small: &RatFun, big: &RatFun) -> Vec<u64> {
        let f = &self.field;
        if small.is_zero() || big.is_zero() {
            return if small.is_zero() && big.is_zero() { vec![1] } else { vec![] };
        }
        if let Some(c) = small.as_constant() {
            let Some(d) = big.as_constant() else {
                return vec![];
            };
            // Frobenius on F_q has order n
            return (1..=f.n() as u64).filter(|&s| f.frob_pow(c, s * self.r.r() as u64) == d).collect();
        }
        let (h, hb) = (small.height(), big.height());
        if hb % h != 0 {
            return vec![];
        }
        match t_power_exponent(&RatFun::monomial(f, FqElem::ONE, (hb / h) as i64), self.base) {
            Some(s) if s >= 1 => match self.frob_s(small, s) {
                Ok(y) if y == *big => vec![s],
                _ => vec![],
            },
            _ => vec![],
        }
    }

    /// Smallest `s >= 1` with `y = x^(B^s)`.
    pub fn check_x_pair(&self, x: &RatFun, y: &RatFun) -> Option<u64> {
        self.frob_exponents(x, y).first().copied()
    }

    /// Smallest `s >= 1` with `tp = base^(B^s)` and `y = x^(B^s)`.
    pub fn samepow_exponent(&self, base: &RatFun, tp: &RatFun, y: &RatFun, x: &RatFun) -> Option<u64> {
        // for constant `base` the candidates cover one Frobenius period
        self.frob_exponents(base, tp).into_iter().find(|&s| self.frob_s(x, s).is_ok_and(|v| v == *y))
    }

    pub fn check_b_triple(&self, tp: &RatFun, y: &RatFun, x: &RatFun) -> bool {
        self.samepow_exponent(&self.t(), tp, y, x).is_some()
    }

    /// Every `s` up to `s_max`: `(s, t^(B^s))`.
    pub fn coded_domain(&self, s_max: u64) -> Result<Vec<CodedInt>> {
        (1..=s_max).map(|s| self.encode(s)).collect()
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// `lcm(a, a+1) - a`, which is `a^2`.
pub fn robinson_sq(a: u64) -> u64 {
    lcm(a, a + 1) - a
}

/// `k = mn` decided through `sq(m+n) = sq(m) + sq(n) + 2k`.
pub fn robinson_mul(k: u64, m: u64, n: u64) -> bool {
    robinson_sq(m + n) == robinson_sq(m) + robinson_sq(n) + 2 * k
}

fn divides(a: Term, b: Term) -> Formula {
    Formula::Divides(a, b)
}

/// `l` is the least common multiple of `a` and `b` under divisibility.
fn lcm_formula(a: Term, b: Term, l: Term) -> Formula {
    and(vec![
        divides(a.clone(), l.clone()),
        divides(b.clone(), l.clone()),
        forall("_M", implies(and(vec![divides(a, var("_M")), divides(b, var("_M"))]), divides(l, var("_M")))),
    ])
}

/// A formula in `+`, `|`, `=` with free variables `k`, `m`, `n`, true
/// exactly when `k = mn`. The unit is the element dividing everything.
pub fn robinson_formula() -> Formula {
    let one = || var("_one");
    let (k, m, n) = (|| var("k"), || var("m"), || var("n"));
    let mn = || add(m(), n());
    let body = exists(
        "_B",
        and(vec![
            lcm_formula(m(), add(m(), one()), var("_B")),
            exists(
                "_C",
                and(vec![
                    lcm_formula(n(), add(n(), one()), var("_C")),
                    exists(
                        "_A",
                        and(vec![
                            eq(var("_A"), Term::Add(vec![var("_B"), var("_C"), k(), k()])),
                            lcm_formula(mn(), add(mn(), one()), var("_A")),
                        ]),
                    ),
                ]),
            ),
        ]),
    );
    exists("_one", and(vec![forall("_y", divides(one(), var("_y"))), body]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> ModelParams {
        ModelParams::new(&FieldCtx::prime(3).unwrap())
    }

    fn tp(m: &ModelParams, k: i64) -> RatFun {
        RatFun::monomial(m.field(), FqElem::ONE, k)
    }

    #[test]
    fn encode_decode() {
        let m = f3();
        assert_eq!(m.encode(2).unwrap().value, tp(&m, 9));
        assert_eq!(m.decode(&tp(&m, 9)), Some(2));
        assert_eq!(m.decode(&tp(&m, 8)), None);
        assert_eq!(m.decode(&m.t()), None);
        let m2 = ModelParams::new(&FieldCtx::prime(2).unwrap());
        assert_eq!(m2.encode(1).unwrap().value, tp(&m2, 4));
    }

    #[test]
    fn add_witness_examples() {
        let m = f3();
        let w = m.add_witness(1, 1).unwrap();
        assert_eq!(w.x, RatFun::from_ints(m.field(), &[1, 0, 0, 1], &[1]).unwrap());
        assert_eq!(w.z, w.x.mul(&tp(&m, 9)));
        let w12 = m.add_witness(1, 2).unwrap();
        assert_eq!(w12.z.checked_div(&w12.x).unwrap(), tp(&m, 27));
        let m2 = ModelParams::new(&FieldCtx::prime(2).unwrap());
        let w2 = m2.add_witness(1, 1).unwrap();
        assert_eq!(w2.z.checked_div(&w2.x).unwrap(), tp(&m2, 16));
    }

    #[test]
    fn add_triples() {
        let m = f3();
        assert!(m.check_add_triple(&tp(&m, 3), &tp(&m, 3), &tp(&m, 9)));
        assert!(!m.check_add_triple(&tp(&m, 3), &tp(&m, 3), &tp(&m, 27)));
        assert!(!m.check_add_triple(&m.t(), &tp(&m, 3), &tp(&m, 9)));
        assert_eq!(m.add_system_search(&tp(&m, 3), &tp(&m, 9), 4), Some((1, 3)));
    }

    #[test]
    fn divides_examples() {
        let m = f3();
        assert_eq!(m.divides_witness(2, 4).unwrap(), Some(tp(&m, 10)));
        assert_eq!(m.divides_witness(2, 3).unwrap(), None);
        assert_eq!(m.divides_witness(3, 3).unwrap(), Some(m.t()));
        assert_eq!(m.divides_monomial_search(2, 3).unwrap(), None);
        assert_eq!(m.divides_monomial_search(2, 4).unwrap(), Some(10));
        // zeta^8 = 1 holds on all of F_3^*
        assert_eq!(m.divides_solutions(2, 4).unwrap().len(), 2);
    }

    #[test]
    fn b_and_x_examples() {
        let m = f3();
        let f = m.field();
        let tp1 = RatFun::from_ints(f, &[1, 1], &[1]).unwrap();
        let cube = RatFun::from_ints(f, &[1, 0, 0, 1], &[1]).unwrap();
        assert!(m.check_b_triple(&tp(&m, 3), &cube, &tp1));
        assert!(!m.check_b_triple(&tp(&m, 3), &tp1, &tp1));
        assert!(!m.check_b_triple(&tp(&m, 2), &tp1, &tp1));
        let ninth = RatFun::from_ints(f, &[1, 0, 0, 0, 0, 0, 0, 0, 0, 1], &[1]).unwrap();
        assert_eq!(m.check_x_pair(&tp1, &ninth), Some(2));
        for c in f.elements() {
            let c = RatFun::constant(f, c);
            assert_eq!(m.check_x_pair(&c, &c), Some(1));
        }
        assert_eq!(m.check_x_pair(&m.t(), &tp(&m, 2)), None);
    }

    #[test]
    fn constant_frobenius_pairs_in_f9() {
        let m = ModelParams::new(&FieldCtx::new(3, 2).unwrap());
        let f = m.field();
        let a = f.from_digits(&[0, 1]).unwrap();
        let x = RatFun::constant(f, a);
        let y = RatFun::constant(f, f.frob(a));
        assert_eq!(m.check_x_pair(&x, &y), Some(1));
        assert_eq!(m.check_x_pair(&x, &x), Some(2));
    }

    #[test]
    fn robinson_examples() {
        assert!(robinson_mul(12, 3, 4));
        assert!(!robinson_mul(13, 3, 4));
        assert!(robinson_mul(1, 1, 1));
        assert_eq!(robinson_sq(4), 16);
        assert_eq!(lcm(4, 5), 20);
        let f = robinson_formula();
        let fv: Vec<String> = f.free_vars().into_iter().collect();
        assert_eq!(fv, vec!["k", "m", "n"]);
    }
}
