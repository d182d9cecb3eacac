//! The twist `P(t) y^2 = P(x)` of `y^2 = P(x)` over `F_q(t)`, `p > 2`.
//!
//! Arithmetic runs on the long Weierstrass model
//! `Y^2 = X^3 + a2 P(t) X^2 + a4 P(t)^2 X + a6 P(t)^3`, reached through
//! `X = P(t) x`, `Y = P(t)^2 y`.

use std::fmt;

use crate::algebra::{discriminant, FieldCtx, FqElem, Poly, RatFun, RatFunPoly};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TwistPoint {
    Infinity,
    Affine { x: RatFun, y: RatFun },
}

impl fmt::Display for TwistPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TwistPoint::Infinity => write!(f, "O"),
            TwistPoint::Affine { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TwistCurve {
    field: FieldCtx,
    /// `P` with ascending coefficients, monic of degree 3.
    cubic: Poly,
    /// `P(t)`.
    pt: RatFun,
    /// `a2 P(t)`, `a4 P(t)^2`, `a6 P(t)^3`.
    weierstrass: [RatFun; 3],
}

impl TwistCurve {
    /// `coeffs` lists `P` from the constant term up.
    pub fn new(field: &FieldCtx, coeffs: &[FqElem]) -> Result<TwistCurve> {
        if field.p() == 2 {
            return Err(Error::Unsupported("the twist needs odd characteristic".into()));
        }
        let cubic = Poly::from_coeffs(field, coeffs);
        if cubic.degree() != Some(3) || !cubic.is_monic() {
            return Err(Error::InvalidArgument("P must be a monic cubic".into()));
        }
        let as_rat: Vec<RatFun> = cubic.dense_coeffs().iter().map(|&c| RatFun::constant(field, c)).collect();
        if discriminant(&RatFunPoly::new(field, as_rat))?.is_zero() {
            return Err(Error::InvalidArgument("P has a repeated root".into()));
        }
        let pt = RatFun::from_poly(cubic.clone());
        let c = |i: u64| RatFun::constant(field, cubic.coeff(i));
        let weierstrass = [c(2).mul(&pt), c(1).mul(&pt.pow(2)), c(0).mul(&pt.pow(3))];
        let curve = TwistCurve { field: field.clone(), cubic, pt, weierstrass };
        curve.check_coordinate_change()?;
        Ok(curve)
    }

    pub fn from_ints(field: &FieldCtx, coeffs: &[i64]) -> Result<TwistCurve> {
        let c: Vec<FqElem> = coeffs.iter().map(|&c| field.from_int(c)).collect();
        Self::new(field, &c)
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn cubic(&self) -> &Poly {
        &self.cubic
    }

    /// `P(t)`.
    pub fn twist(&self) -> &RatFun {
        &self.pt
    }

    pub fn weierstrass_coeffs(&self) -> &[RatFun; 3] {
        &self.weierstrass
    }

    /// `P(t)^3 P(X / P(t))` and the Weierstrass cubic agree at four
    /// distinct `X`, so they agree as cubics in `X`.
    fn check_coordinate_change(&self) -> Result<()> {
        let f = &self.field;
        let t = RatFun::t(f);
        let one = RatFun::one(f);
        for x in [RatFun::zero(f), one.clone(), t.clone(), t.add(&one)] {
            let lhs = self.pt.pow(3).mul(&x.checked_div(&self.pt)?.compose(&self.cubic));
            if lhs != self.weierstrass_rhs(&x) {
                return Err(Error::InternalContradiction("coordinate change does not match".into()));
            }
        }
        Ok(())
    }

    fn weierstrass_rhs(&self, x: &RatFun) -> RatFun {
        let [a2, a4, a6] = &self.weierstrass;
        x.pow(3).add(&a2.mul(&x.pow(2))).add(&a4.mul(x)).add(a6)
    }

    pub fn on_curve(&self, pt: &TwistPoint) -> bool {
        match pt {
            TwistPoint::Infinity => true,
            TwistPoint::Affine { x, y } => self.pt.mul(&y.pow(2)) == x.compose(&self.cubic),
        }
    }

    /// `(x, y) -> (P(t) x, P(t)^2 y)`.
    pub fn to_weierstrass(&self, pt: &TwistPoint) -> TwistPoint {
        match pt {
            TwistPoint::Infinity => TwistPoint::Infinity,
            TwistPoint::Affine { x, y } => TwistPoint::Affine { x: self.pt.mul(x), y: self.pt.pow(2).mul(y) },
        }
    }

    pub fn from_weierstrass(&self, pt: &TwistPoint) -> TwistPoint {
        match pt {
            TwistPoint::Infinity => TwistPoint::Infinity,
            TwistPoint::Affine { x, y } => TwistPoint::Affine {
                x: x.checked_div(&self.pt).expect("P(t) is nonzero"),
                y: y.checked_div(&self.pt.pow(2)).expect("P(t) is nonzero"),
            },
        }
    }

    pub fn on_weierstrass(&self, pt: &TwistPoint) -> bool {
        match pt {
            TwistPoint::Infinity => true,
            TwistPoint::Affine { x, y } => y.pow(2) == self.weierstrass_rhs(x),
        }
    }

    /// `(t^(q^m), P(t)^((q^m - 1)/2))`.
    pub fn frobenius_point(&self, m: u32) -> Result<TwistPoint> {
        if m == 0 {
            return Err(Error::InvalidArgument("m must be at least 1".into()));
        }
        let qm = (self.field.q() as u64)
            .checked_pow(m)
            .ok_or_else(|| Error::ExponentOverflow(format!("q^{m}")))?;
        let pt = TwistPoint::Affine {
            x: RatFun::monomial(&self.field, FqElem::ONE, qm as i64),
            y: self.pt.pow((qm - 1) / 2),
        };
        if !self.on_curve(&pt) {
            return Err(Error::InternalContradiction(format!("Frobenius point for m = {m} is off the curve")));
        }
        Ok(pt)
    }

    pub fn neg(&self, pt: &TwistPoint) -> TwistPoint {
        match pt {
            TwistPoint::Infinity => TwistPoint::Infinity,
            TwistPoint::Affine { x, y } => TwistPoint::Affine { x: x.clone(), y: y.neg() },
        }
    }

    /// Chord and tangent on the Weierstrass model.
    pub fn add(&self, p1: &TwistPoint, p2: &TwistPoint) -> Result<TwistPoint> {
        for p in [p1, p2] {
            if !self.on_curve(p) {
                return Err(Error::InvalidPoint(format!("{p} is not on the curve")));
            }
        }
        let (w1, w2) = (self.to_weierstrass(p1), self.to_weierstrass(p2));
        let (TwistPoint::Affine { x: x1, y: y1 }, TwistPoint::Affine { x: x2, y: y2 }) = (&w1, &w2) else {
            return Ok(if *p1 == TwistPoint::Infinity { p2.clone() } else { p1.clone() });
        };
        let f = &self.field;
        let [a2, a4, _] = &self.weierstrass;
        let lambda = if x1 != x2 {
            y2.sub(y1).checked_div(&x2.sub(x1))?
        } else if y1 == &y2.neg() {
            return Ok(TwistPoint::Infinity);
        } else {
            let three = RatFun::from_int(f, 3);
            let two = RatFun::from_int(f, 2);
            let num = three.mul(&x1.pow(2)).add(&two.mul(a2).mul(x1)).add(a4);
            num.checked_div(&two.mul(y1))?
        };
        let x3 = lambda.pow(2).sub(a2).sub(x1).sub(x2);
        let y3 = lambda.mul(&x1.sub(&x3)).sub(y1);
        let out = self.from_weierstrass(&TwistPoint::Affine { x: x3, y: y3 });
        if !self.on_curve(&out) {
            return Err(Error::InternalContradiction("sum is off the curve".into()));
        }
        Ok(out)
    }

    /// `[k] pt` by double and add.
    pub fn mul_small(&self, k: u64, pt: &TwistPoint) -> Result<TwistPoint> {
        if !self.on_curve(pt) {
            return Err(Error::InvalidPoint(format!("{pt} is not on the curve")));
        }
        let mut acc = TwistPoint::Infinity;
        let mut base = pt.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base)?;
            }
            k >>= 1;
            if k > 0 {
                base = self.add(&base, &base)?;
            }
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve5() -> TwistCurve {
        TwistCurve::from_ints(&FieldCtx::prime(5).unwrap(), &[1, 1, 0, 1]).unwrap()
    }

    #[test]
    fn on_curve_examples() {
        let c = curve5();
        let f = c.field().clone();
        assert!(c.on_curve(&TwistPoint::Infinity));
        assert!(c.on_curve(&TwistPoint::Affine { x: RatFun::t(&f), y: RatFun::one(&f) }));
        let p5 = TwistPoint::Affine { x: RatFun::monomial(&f, FqElem::ONE, 5), y: c.twist().pow(2) };
        assert!(c.on_curve(&p5));
        assert!(!c.on_curve(&TwistPoint::Affine { x: RatFun::t(&f), y: RatFun::t(&f) }));
    }

    #[test]
    fn frobenius_points() {
        let c = curve5();
        let f = c.field().clone();
        assert_eq!(
            c.frobenius_point(1).unwrap(),
            TwistPoint::Affine { x: RatFun::monomial(&f, FqElem::ONE, 5), y: c.twist().pow(2) }
        );
        assert_eq!(
            c.frobenius_point(2).unwrap(),
            TwistPoint::Affine { x: RatFun::monomial(&f, FqElem::ONE, 25), y: c.twist().pow(12) }
        );
        let f3 = FieldCtx::prime(3).unwrap();
        let c3 = TwistCurve::from_ints(&f3, &[1, 2, 0, 1]).unwrap();
        assert_eq!(
            c3.frobenius_point(1).unwrap(),
            TwistPoint::Affine { x: RatFun::monomial(&f3, FqElem::ONE, 3), y: c3.twist().clone() }
        );
    }

    #[test]
    fn group_law_examples() {
        let c = curve5();
        let p1 = c.frobenius_point(1).unwrap();
        let p2 = c.frobenius_point(2).unwrap();
        assert_eq!(c.add(&p1, &TwistPoint::Infinity).unwrap(), p1);
        assert_eq!(c.add(&p1, &c.neg(&p1)).unwrap(), TwistPoint::Infinity);
        assert!(c.on_curve(&c.add(&p1, &p2).unwrap()));
        assert_eq!(c.mul_small(1, &p1).unwrap(), p1);
        assert_eq!(c.mul_small(2, &TwistPoint::Infinity).unwrap(), TwistPoint::Infinity);
        assert!(c.on_curve(&c.mul_small(5, &p1).unwrap()));
    }

    #[test]
    fn rejects_bad_curves() {
        let f5 = FieldCtx::prime(5).unwrap();
        // x^3 has a triple root
        assert!(TwistCurve::from_ints(&f5, &[0, 0, 0, 1]).is_err());
        assert!(TwistCurve::from_ints(&FieldCtx::prime(2).unwrap(), &[1, 1, 0, 1]).is_err());
        assert!(TwistCurve::from_ints(&f5, &[1, 1, 2]).is_err());
    }
}
