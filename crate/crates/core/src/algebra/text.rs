//! Serializable form of field elements: sparse `(exponent, digits)` lists
//! for numerator and denominator, digits being the base-`p` coefficients
//! of the `F_q` element.

use serde::{Deserialize, Serialize};

use super::field::FieldCtx;
use super::poly::Poly;
use super::ratfun::RatFun;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyText(pub Vec<(u64, Vec<u32>)>);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatFunText {
    pub num: PolyText,
    pub den: PolyText,
    pub display: String,
}

pub fn poly_to_text(p: &Poly) -> PolyText {
    let f = p.field();
    PolyText(p.terms().iter().map(|&(e, c)| (e, f.digits(c))).collect())
}

pub fn poly_from_text(f: &FieldCtx, t: &PolyText) -> Result<Poly> {
    let terms = t
        .0
        .iter()
        .map(|(e, d)| Ok((*e, f.from_digits(d)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Poly::from_terms(f, terms))
}

pub fn to_text(x: &RatFun) -> RatFunText {
    RatFunText { num: poly_to_text(x.num()), den: poly_to_text(x.den()), display: x.to_string() }
}

/// Ignores `display`; the value is built from the digit lists.
pub fn from_text(f: &FieldCtx, t: &RatFunText) -> Result<RatFun> {
    RatFun::new(poly_from_text(f, &t.num)?, poly_from_text(f, &t.den)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let f9 = FieldCtx::new(3, 2).unwrap();
        let a = f9.generator();
        let x = RatFun::new(
            Poly::from_terms(&f9, vec![(0, a), (5, f9.one())]),
            Poly::from_ints(&f9, &[1, 0, 1]),
        )
        .unwrap();
        let t = to_text(&x);
        let json = serde_json::to_string(&t).unwrap();
        let back: RatFunText = serde_json::from_str(&json).unwrap();
        assert_eq!(from_text(&f9, &back).unwrap(), x);
    }
}
