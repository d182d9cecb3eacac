use std::fmt;

use super::field::FieldCtx;
use super::ratfun::RatFun;
use crate::error::{Error, Result};

/// A polynomial in `T` with coefficients in `F_q(t)`, dense, lowest degree
/// first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFunPoly {
    field: FieldCtx,
    coeffs: Vec<RatFun>,
}

impl RatFunPoly {
    pub fn new(field: &FieldCtx, mut coeffs: Vec<RatFun>) -> RatFunPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RatFunPoly { field: field.clone(), coeffs }
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn coeffs(&self) -> &[RatFun] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn derivative(&self) -> RatFunPoly {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul(&RatFun::from_int(f, i as i64)))
            .collect();
        Self::new(f, coeffs)
    }

    pub fn eval(&self, x: &RatFun) -> RatFun {
        self.coeffs
            .iter()
            .rev()
            .fold(RatFun::zero(&self.field), |acc, c| acc.mul(x).add(c))
    }
}

impl fmt::Display for RatFunPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("({c})"),
                1 => format!("({c})*T"),
                _ => format!("({c})*T^{i}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Determinant of the Sylvester matrix of `f` and `g`.
pub fn resultant(f: &RatFunPoly, g: &RatFunPoly) -> Result<RatFun> {
    let (Some(m), Some(n)) = (f.degree(), g.degree()) else {
        return Err(Error::ZeroPolynomial);
    };
    let field = f.field();
    let size = m + n;
    if size == 0 {
        return Ok(RatFun::one(field));
    }
    let zero = RatFun::zero(field);
    let mut mat = vec![vec![zero.clone(); size]; size];
    // rows hold coefficients from the top degree down
    for i in 0..n {
        for (j, c) in f.coeffs().iter().rev().enumerate() {
            mat[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in g.coeffs().iter().rev().enumerate() {
            mat[n + i][i + j] = c.clone();
        }
    }
    Ok(determinant(mat))
}

fn determinant(mut mat: Vec<Vec<RatFun>>) -> RatFun {
    let size = mat.len();
    let field = mat[0][0].field().clone();
    let mut det = RatFun::one(&field);
    for col in 0..size {
        let Some(pivot) = (col..size).find(|&r| !mat[r][col].is_zero()) else {
            return RatFun::zero(&field);
        };
        if pivot != col {
            mat.swap(pivot, col);
            det = det.neg();
        }
        let p = mat[col][col].clone();
        det = det.mul(&p);
        let pinv = p.inv().expect("pivot is nonzero");
        for r in col + 1..size {
            if mat[r][col].is_zero() {
                continue;
            }
            let factor = mat[r][col].mul(&pinv);
            let (top, rest) = mat.split_at_mut(r);
            for (v, pivot) in rest[0][col..].iter_mut().zip(&top[col][col..]) {
                *v = v.sub(&factor.mul(pivot));
            }
        }
    }
    det
}

/// `Res(h, h')` for monic `h`, the norm of `h'(alpha)`.
pub fn discriminant(h: &RatFunPoly) -> Result<RatFun> {
    if !h.is_monic() {
        return Err(Error::NotMonic);
    }
    let dh = h.derivative();
    if dh.is_zero() {
        return Err(Error::InseparableInput);
    }
    resultant(h, &dh)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad(f: &FieldCtx, c: RatFun) -> RatFunPoly {
        RatFunPoly::new(f, vec![c, RatFun::zero(f), RatFun::one(f)])
    }

    #[test]
    fn quadratic_discriminants() {
        let f5 = FieldCtx::prime(5).unwrap();
        let g = RatFun::from_ints(&f5, &[1, 0, 0, 1], &[1]).unwrap();
        let d = discriminant(&quad(&f5, g.neg())).unwrap();
        assert_eq!(d, g.mul(&RatFun::from_int(&f5, -4)));
        assert_eq!(d.num().deg(), 3);
        // T^2 + c has Res(h, 2T) = 4c
        let f7 = FieldCtx::prime(7).unwrap();
        let c = RatFun::from_ints(&f7, &[2, 1], &[0, 1]).unwrap();
        assert_eq!(discriminant(&quad(&f7, c.clone())).unwrap(), c.mul(&RatFun::from_int(&f7, 4)));
    }

    #[test]
    fn inseparable() {
        let f3 = FieldCtx::prime(3).unwrap();
        let mut coeffs = vec![RatFun::zero(&f3); 4];
        coeffs[0] = RatFun::t(&f3).neg();
        coeffs[3] = RatFun::one(&f3);
        let h = RatFunPoly::new(&f3, coeffs);
        assert_eq!(discriminant(&h).unwrap_err(), Error::InseparableInput);
    }

    #[test]
    fn resultant_matches_root_product() {
        // monic f = (T - a)(T - b): Res(f, g) = g(a) g(b)
        let f5 = FieldCtx::prime(5).unwrap();
        let a = RatFun::t(&f5);
        let b = RatFun::from_ints(&f5, &[1], &[0, 1]).unwrap();
        let c = RatFun::from_ints(&f5, &[2, 0, 1], &[1]).unwrap();
        let fpoly = RatFunPoly::new(&f5, vec![a.mul(&b), a.add(&b).neg(), RatFun::one(&f5)]);
        let gpoly = RatFunPoly::new(&f5, vec![c.neg(), RatFun::one(&f5)]);
        let expected = a.sub(&c).mul(&b.sub(&c));
        assert_eq!(resultant(&fpoly, &gpoly).unwrap(), expected);
        assert_eq!(gpoly.eval(&a).mul(&gpoly.eval(&b)), expected);
    }
}
