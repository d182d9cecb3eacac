use super::factor::factor;
use super::place::Place;
use super::poly::Poly;
use super::ratfun::RatFun;

/// The principal part `numerator / pi^order` of a function at a finite
/// place, with `deg numerator < order * deg pi` and `pi` not dividing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalPart {
    pub place: Place,
    pub order: u64,
    pub numerator: Poly,
}

impl LocalPart {
    pub fn pi(&self) -> &Poly {
        self.place.poly().expect("local parts live at finite places")
    }

    pub fn as_ratfun(&self) -> RatFun {
        RatFun::new(self.numerator.clone(), self.pi().pow(self.order)).expect("nonzero denominator")
    }

    /// Nonzero digits `(k, b_k)` of the expansion `sum b_k / pi^k`, each
    /// `deg b_k < deg pi`, in increasing `k`.
    pub fn expansion(&self) -> Vec<(u64, Poly)> {
        let pi = self.pi();
        let mut out = Vec::new();
        if pi.is_monomial() {
            for &(e, c) in self.numerator.terms() {
                out.push((self.order - e, Poly::constant(pi.field(), c)));
            }
            out.reverse();
            return out;
        }
        let mut rest = self.numerator.clone();
        let mut j = 0;
        while !rest.is_zero() {
            let (q, r) = rest.div_rem(pi).unwrap();
            if !r.is_zero() {
                out.push((self.order - j, r));
            }
            rest = q;
            j += 1;
        }
        out.reverse();
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialFractions {
    pub poly_part: Poly,
    pub parts: Vec<LocalPart>,
}

impl PartialFractions {
    pub fn recompose(&self) -> RatFun {
        self.parts
            .iter()
            .fold(RatFun::from_poly(self.poly_part.clone()), |acc, lp| acc.add(&lp.as_ratfun()))
    }

    pub fn poles(&self) -> Vec<(Place, u64)> {
        self.parts.iter().map(|lp| (lp.place.clone(), lp.order)).collect()
    }
}

pub fn partial_fractions(f: &RatFun) -> PartialFractions {
    let (q, r) = f.num().div_rem(f.den()).expect("denominator is nonzero");
    let mut parts = Vec::new();
    if r.is_zero() {
        return PartialFractions { poly_part: q, parts };
    }
    let den = f.den();
    let fz = factor(den).expect("denominator is nonzero");
    if fz.factors.len() == 1 {
        let (pi, m) = fz.factors[0].clone();
        parts.push(LocalPart { place: Place::Finite(pi), order: m, numerator: r });
        return PartialFractions { poly_part: q, parts };
    }
    for (pi, m) in fz.factors {
        let di = pi.pow(m);
        let ei = den.div_exact(&di);
        let inv = ei.inv_mod(&di).expect("coprime cofactors");
        let ai = r.mul_mod(&inv, &di);
        parts.push(LocalPart { place: Place::Finite(pi), order: m, numerator: ai });
    }
    PartialFractions { poly_part: q, parts }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::{FieldCtx, FqElem};

    #[test]
    fn spec_examples() {
        let f3 = FieldCtx::prime(3).unwrap();
        let a = RatFun::from_ints(&f3, &[1], &[0, 1]).unwrap();
        let b = RatFun::from_ints(&f3, &[1], &[-1, 1]).unwrap();
        let pf = partial_fractions(&a.add(&b));
        let poles = pf.poles();
        assert_eq!(poles.len(), 2);
        assert!(poles.contains(&(Place::t(&f3), 1)));
        assert!(poles.contains(&(Place::linear(&f3, FqElem::ONE), 1)));
        assert_eq!(pf.recompose(), a.add(&b));

        let t = RatFun::t(&f3);
        let pt = partial_fractions(&t);
        assert_eq!(pt.poly_part, Poly::t(&f3));
        assert!(pt.parts.is_empty());

        let x = RatFun::monomial(&f3, FqElem::ONE, -9);
        let px = partial_fractions(&x);
        assert_eq!(px.poles(), vec![(Place::t(&f3), 9)]);
        assert_eq!(px.parts[0].expansion(), vec![(9, Poly::one(&f3))]);
    }

    #[test]
    fn expansion_digits() {
        let f5 = FieldCtx::prime(5).unwrap();
        // (t^2 + 2t + 3) / (t+1)^3 = 1/(t+1) + 0/(t+1)^2 + 2/(t+1)^3
        let x = RatFun::new(Poly::from_ints(&f5, &[3, 2, 1]), Poly::from_ints(&f5, &[1, 1]).pow(3)).unwrap();
        let pf = partial_fractions(&x);
        assert_eq!(
            pf.parts[0].expansion(),
            vec![(1, Poly::one(&f5)), (3, Poly::from_ints(&f5, &[2]))]
        );
    }
}
