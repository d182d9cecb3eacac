//! Elements of `F_q(t)` in canonical form: coprime numerator and monic
//! denominator, so equality of values is structural equality.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::factor::factor;
use super::field::{FieldCtx, FqElem};
use super::place::Place;
use super::poly::Poly;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// Multiplicity of the irreducible `pi` in the nonzero polynomial `f`.
pub(crate) fn multiplicity(f: &Poly, pi: &Poly) -> u64 {
    if pi.is_monomial() && pi.deg() == 1 {
        return f.low_degree().unwrap_or(0);
    }
    let mut count = 0;
    let mut cur = f.clone();
    loop {
        let (q, r) = cur.div_rem(pi).expect("place polynomial is nonzero");
        if !r.is_zero() {
            return count;
        }
        cur = q;
        count += 1;
    }
}

impl RatFun {
    /// `num / den` reduced to canonical form.
    pub fn new(num: Poly, den: Poly) -> Result<RatFun> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> RatFun {
        let f = num.field().clone();
        if num.is_zero() {
            return Self::zero(&f);
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() { (num, den) } else { (num.div_exact(&g), den.div_exact(&g)) };
        Self::normalize_lc(num, den)
    }

    fn normalize_lc(num: Poly, den: Poly) -> RatFun {
        let f = num.field().clone();
        let lc = den.lc();
        if lc == FqElem::ONE {
            return RatFun { num, den };
        }
        let i = f.inv(lc).expect("nonzero denominator");
        RatFun { num: num.scale(i), den: den.scale(i) }
    }

    pub fn from_poly(p: Poly) -> RatFun {
        let den = Poly::one(p.field());
        RatFun { num: p, den }
    }

    pub fn zero(f: &FieldCtx) -> RatFun {
        Self::from_poly(Poly::zero(f))
    }

    pub fn one(f: &FieldCtx) -> RatFun {
        Self::from_poly(Poly::one(f))
    }

    pub fn t(f: &FieldCtx) -> RatFun {
        Self::from_poly(Poly::t(f))
    }

    pub fn constant(f: &FieldCtx, c: FqElem) -> RatFun {
        Self::from_poly(Poly::constant(f, c))
    }

    pub fn from_int(f: &FieldCtx, i: i64) -> RatFun {
        Self::constant(f, f.from_int(i))
    }

    /// `c * t^k` for any integer `k`.
    pub fn monomial(f: &FieldCtx, c: FqElem, k: i64) -> RatFun {
        if k >= 0 {
            Self::from_poly(Poly::monomial(f, c, k as u64))
        } else {
            Self::new(Poly::constant(f, c), Poly::monomial(f, FqElem::ONE, k.unsigned_abs())).unwrap()
        }
    }

    /// Dense integer coefficient lists for numerator and denominator.
    pub fn from_ints(f: &FieldCtx, num: &[i64], den: &[i64]) -> Result<RatFun> {
        Self::new(Poly::from_ints(f, num), Poly::from_ints(f, den))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn field(&self) -> &FieldCtx {
        self.num.field()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<FqElem> {
        (self.den.is_one() && self.num.is_constant()).then(|| self.num.coeff(0))
    }

    /// `Some((c, k))` when `self = c * t^k` with `c != 0`.
    pub fn as_monomial(&self) -> Option<(FqElem, i64)> {
        if !self.num.is_monomial() || !self.den.is_monomial() {
            return None;
        }
        let (e_num, c) = self.num.terms()[0];
        let (e_den, _) = self.den.terms()[0];
        Some((c, e_num as i64 - e_den as i64))
    }

    /// `max(deg num, deg den)`, the degree of `self` as a map to the line.
    pub fn height(&self) -> u64 {
        self.num.deg().max(self.den.deg())
    }

    pub fn add(&self, other: &RatFun) -> RatFun {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Self::reduce(self.num.add(&other.num), self.den.clone());
        }
        let g = self.den.gcd(&other.den);
        if g.is_one() {
            let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
            return RatFun { num, den: self.den.mul(&other.den) };
        }
        let b1 = self.den.div_exact(&g);
        let d1 = other.den.div_exact(&g);
        let n = self.num.mul(&d1).add(&other.num.mul(&b1));
        if n.is_zero() {
            return Self::zero(self.field());
        }
        let g2 = n.gcd(&g);
        RatFun { num: n.div_exact(&g2), den: b1.mul(&other.den.div_exact(&g2)) }
    }

    pub fn neg(&self) -> RatFun {
        RatFun { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &RatFun) -> RatFun {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFun) -> RatFun {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field());
        }
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let (a, d) = if g1.is_one() {
            (self.num.clone(), other.den.clone())
        } else {
            (self.num.div_exact(&g1), other.den.div_exact(&g1))
        };
        let (c, b) = if g2.is_one() {
            (other.num.clone(), self.den.clone())
        } else {
            (other.num.div_exact(&g2), self.den.div_exact(&g2))
        };
        RatFun { num: a.mul(&c), den: b.mul(&d) }
    }

    pub fn scale(&self, c: FqElem) -> RatFun {
        if c.is_zero() {
            return Self::zero(self.field());
        }
        RatFun { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<RatFun> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize_lc(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, other: &RatFun) -> Result<RatFun> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: u64) -> RatFun {
        RatFun { num: self.num.pow(e), den: self.den.pow(e) }
    }

    pub fn powi(&self, e: i64) -> Result<RatFun> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs()))
        }
    }

    /// Every `r` with `r^e = self`, for nonzero `self` and `e >= 1`.
    pub fn nth_roots(&self, e: u64) -> Result<Vec<RatFun>> {
        if self.is_zero() {
            return Err(Error::ZeroValuation);
        }
        if e == 0 {
            return Err(Error::InvalidArgument("root of order 0".into()));
        }
        let f = self.field().clone();
        let mut root = RatFun::one(&f);
        for (poly, sign) in [(&self.num, 1i64), (&self.den, -1)] {
            if poly.is_constant() {
                continue;
            }
            for (pi, m) in factor(poly)?.factors {
                if m % e != 0 {
                    return Ok(Vec::new());
                }
                let part = RatFun::from_poly(pi.pow(m / e));
                root = if sign > 0 { root.mul(&part) } else { root.checked_div(&part)? };
            }
        }
        let lc = self.num.lc();
        Ok(f.elements()
            .filter(|&z| !z.is_zero() && f.pow(z, e) == lc)
            .map(|z| root.scale(z))
            .collect())
    }

    /// `self^(p^e)`, applied to numerator and denominator coefficient-wise.
    pub fn frobenius_power(&self, e: u32) -> RatFun {
        RatFun { num: self.num.frobenius(e), den: self.den.frobenius(e) }
    }

    pub fn checked_frobenius_power(&self, e: u32) -> Result<RatFun> {
        let err = || Error::ExponentOverflow(format!("({self})^(p^{e})"));
        Ok(RatFun {
            num: self.num.checked_frobenius(e).ok_or_else(err)?,
            den: self.den.checked_frobenius(e).ok_or_else(err)?,
        })
    }

    /// Valuation at a place.
    pub fn ord_at(&self, place: &Place) -> Result<i64> {
        if self.is_zero() {
            return Err(Error::ZeroValuation);
        }
        Ok(match place {
            Place::Infinity => self.den.deg() as i64 - self.num.deg() as i64,
            Place::Finite(pi) => multiplicity(&self.num, pi) as i64 - multiplicity(&self.den, pi) as i64,
        })
    }

    /// `poly(self)`, Horner style.
    pub fn compose(&self, poly: &Poly) -> RatFun {
        let f = self.field();
        let mut acc = Self::zero(f);
        let dense = poly.dense_coeffs();
        for &c in dense.iter().rev() {
            acc = acc.mul(self).add(&Self::constant(f, c));
        }
        acc
    }
}

macro_rules! forward_binop {
    ($Tr:ident, $m:ident, $imp:ident) => {
        impl $Tr<&RatFun> for &RatFun {
            type Output = RatFun;
            fn $m(self, rhs: &RatFun) -> RatFun {
                RatFun::$imp(self, rhs)
            }
        }
        impl $Tr<RatFun> for RatFun {
            type Output = RatFun;
            fn $m(self, rhs: RatFun) -> RatFun {
                RatFun::$imp(&self, &rhs)
            }
        }
        impl $Tr<&RatFun> for RatFun {
            type Output = RatFun;
            fn $m(self, rhs: &RatFun) -> RatFun {
                RatFun::$imp(&self, rhs)
            }
        }
    };
}

forward_binop!(Add, add, add);
forward_binop!(Sub, sub, sub);
forward_binop!(Mul, mul, mul);

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun::neg(self)
    }
}

impl Neg for RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun::neg(&self)
    }
}

/// Panics on division by zero; use [`RatFun::checked_div`] otherwise.
impl Div<&RatFun> for &RatFun {
    type Output = RatFun;
    fn div(self, rhs: &RatFun) -> RatFun {
        self.checked_div(rhs).expect("division by zero in F_q(t)")
    }
}

impl Div<RatFun> for RatFun {
    type Output = RatFun;
    fn div(self, rhs: RatFun) -> RatFun {
        &self / &rhs
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Field arithmetic with division by zero reported as an error.
pub fn arith(a: &RatFun, b: &RatFun, op: ArithOp) -> Result<RatFun> {
    match op {
        ArithOp::Add => Ok(a + b),
        ArithOp::Sub => Ok(a - b),
        ArithOp::Mul => Ok(a * b),
        ArithOp::Div => a.checked_div(b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arith_examples() {
        let f = FieldCtx::prime(3).unwrap();
        let t = RatFun::t(&f);
        assert_eq!(arith(&t, &t, ArithOp::Mul).unwrap(), RatFun::from_ints(&f, &[0, 0, 1], &[1]).unwrap());
        let tp1 = &t + &RatFun::one(&f);
        let cube = &(&tp1 * &tp1) * &tp1;
        assert_eq!(cube, RatFun::from_ints(&f, &[1, 0, 0, 1], &[1]).unwrap());
        let inv_t = t.inv().unwrap();
        assert!(arith(&inv_t, &inv_t, ArithOp::Sub).unwrap().is_zero());
        assert_eq!(arith(&t, &RatFun::zero(&f), ArithOp::Div).unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn canonical_form() {
        let f = FieldCtx::prime(5).unwrap();
        // (2t^2 + 2t) / (2t + 2) = t
        let x = RatFun::from_ints(&f, &[0, 2, 2], &[2, 2]).unwrap();
        assert_eq!(x, RatFun::t(&f));
        // den made monic
        let y = RatFun::from_ints(&f, &[1], &[0, 2]).unwrap();
        assert!(y.den().is_monic());
        assert_eq!(y.num(), &Poly::from_ints(&f, &[3]));
        assert_eq!(RatFun::from_ints(&f, &[0], &[1, 1]).unwrap(), RatFun::zero(&f));
    }

    #[test]
    fn frobenius_examples() {
        let f = FieldCtx::prime(3).unwrap();
        let tp1 = RatFun::from_ints(&f, &[1, 1], &[1]).unwrap();
        assert_eq!(tp1.frobenius_power(1), RatFun::from_ints(&f, &[1, 0, 0, 1], &[1]).unwrap());
        let inv_t = RatFun::t(&f).inv().unwrap();
        assert_eq!(inv_t.frobenius_power(2), RatFun::monomial(&f, FqElem::ONE, -9));
        assert_eq!(tp1.frobenius_power(0), tp1);
    }

    #[test]
    fn valuations() {
        let f3 = FieldCtx::prime(3).unwrap();
        let x = RatFun::from_ints(&f3, &[0, 0, 1], &[1, 1]).unwrap();
        assert_eq!(x.ord_at(&Place::t(&f3)).unwrap(), 2);
        let f5 = FieldCtx::prime(5).unwrap();
        let y = RatFun::from_ints(&f5, &[1, 0, 0, 1], &[1]).unwrap();
        assert_eq!(y.ord_at(&Place::Infinity).unwrap(), -3);
        let t8 = RatFun::monomial(&f3, FqElem::ONE, 8);
        assert_eq!(t8.ord_at(&Place::t(&f3)).unwrap(), 8);
        assert_eq!(RatFun::zero(&f3).ord_at(&Place::Infinity).unwrap_err(), Error::ZeroValuation);
    }

    #[test]
    fn roots() {
        let f = FieldCtx::prime(3).unwrap();
        let t26 = RatFun::monomial(&f, FqElem::ONE, 26);
        let mut r = t26.nth_roots(2).unwrap();
        r.sort_by_key(|x| x.num().lc());
        assert_eq!(r, vec![RatFun::monomial(&f, FqElem::ONE, 13), RatFun::monomial(&f, f.from_int(2), 13)]);
        assert!(t26.nth_roots(8).unwrap().is_empty());
        let x = RatFun::from_ints(&f, &[1, 1], &[0, 1, 1]).unwrap();
        for r in x.pow(4).scale(f.from_int(1)).nth_roots(4).unwrap() {
            assert_eq!(r.pow(4), x.pow(4));
        }
        assert_eq!(x.pow(4).nth_roots(4).unwrap().len(), 2);
        assert!(RatFun::from_int(&f, 2).nth_roots(2).unwrap().is_empty());
    }
}
