//! Random elements for property checks.

use rand::Rng;

use super::field::{FieldCtx, FqElem};
use super::poly::Poly;
use super::ratfun::RatFun;

pub fn random_elem<R: Rng>(f: &FieldCtx, rng: &mut R) -> FqElem {
    f.from_index(rng.gen_range(0..f.q())).unwrap()
}

pub fn random_nonzero_elem<R: Rng>(f: &FieldCtx, rng: &mut R) -> FqElem {
    f.from_index(rng.gen_range(1..f.q())).unwrap()
}

/// Uniform over polynomials of degree at most `max_deg`, zero included.
pub fn random_poly<R: Rng>(f: &FieldCtx, max_deg: u64, rng: &mut R) -> Poly {
    let coeffs: Vec<FqElem> = (0..=max_deg).map(|_| random_elem(f, rng)).collect();
    Poly::from_coeffs(f, &coeffs)
}

pub fn random_monic<R: Rng>(f: &FieldCtx, deg: u64, rng: &mut R) -> Poly {
    let mut coeffs: Vec<FqElem> = (0..deg).map(|_| random_elem(f, rng)).collect();
    coeffs.push(FqElem::ONE);
    Poly::from_coeffs(f, &coeffs)
}

/// Numerator and denominator of degree at most `max_deg`.
pub fn random_ratfun<R: Rng>(f: &FieldCtx, max_deg: u64, rng: &mut R) -> RatFun {
    let num = random_poly(f, max_deg, rng);
    let dd = rng.gen_range(0..=max_deg);
    let den = random_monic(f, dd, rng);
    RatFun::new(num, den).unwrap()
}

pub fn random_nonzero_ratfun<R: Rng>(f: &FieldCtx, max_deg: u64, rng: &mut R) -> RatFun {
    loop {
        let x = random_ratfun(f, max_deg, rng);
        if !x.is_zero() {
            return x;
        }
    }
}
