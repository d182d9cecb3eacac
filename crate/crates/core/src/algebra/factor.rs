//! Factorization over `F_q`: squarefree decomposition, distinct-degree
//! splitting, then Cantor-Zassenhaus with a fixed-seed generator so the
//! output is reproducible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::{FieldCtx, FqElem};
use super::poly::Poly;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub lc: FqElem,
    /// Monic irreducible factors in canonical order with multiplicities.
    pub factors: Vec<(Poly, u64)>,
}

impl Factorization {
    pub fn expand(&self, f: &FieldCtx) -> Poly {
        self.factors
            .iter()
            .fold(Poly::constant(f, self.lc), |acc, (p, m)| acc.mul(&p.pow(*m)))
    }
}

pub fn factor(f: &Poly) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let lc = f.lc();
    let mut factors = Vec::new();
    let low = f.low_degree().unwrap();
    if low > 0 {
        factors.push((Poly::t(f.field()), low));
    }
    let g = f.shift_down(low).monic();
    for (sq, mult) in squarefree(&g) {
        for (d, part) in distinct_degree(&sq) {
            for irr in equal_degree(&part, d) {
                factors.push((irr, mult));
            }
        }
    }
    factors.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    let mut merged: Vec<(Poly, u64)> = Vec::with_capacity(factors.len());
    for (p, m) in factors {
        match merged.last_mut() {
            Some((q, n)) if *q == p => *n += m,
            _ => merged.push((p, m)),
        }
    }
    Ok(Factorization { lc, factors: merged })
}

/// Monic irreducible factors without multiplicity.
pub fn distinct_irreducible_factors(f: &Poly) -> Result<Vec<Poly>> {
    Ok(factor(f)?.factors.into_iter().map(|(p, _)| p).collect())
}

pub fn is_irreducible(f: &Poly) -> bool {
    if f.is_zero() || f.is_constant() {
        return false;
    }
    match factor(f) {
        Ok(fz) => fz.factors.len() == 1 && fz.factors[0].1 == 1,
        Err(_) => false,
    }
}

/// Squarefree decomposition of a monic polynomial: pairs `(g, m)` with the
/// `g` pairwise coprime and `f = prod g^m`.
fn squarefree(f: &Poly) -> Vec<(Poly, u64)> {
    let p = f.field().p() as u64;
    let mut out = Vec::new();
    if f.is_constant() {
        return out;
    }
    let df = f.derivative();
    if df.is_zero() {
        let root = f.pth_root().expect("zero derivative means p-th power");
        for (g, m) in squarefree(&root) {
            out.push((g, m * p));
        }
        return out;
    }
    let mut c = f.gcd(&df);
    let mut w = f.div_exact(&c);
    let mut i = 1;
    while !w.is_constant() {
        let y = w.gcd(&c);
        let z = w.div_exact(&y);
        if !z.is_constant() {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w);
    }
    if !c.is_constant() {
        let root = c.pth_root().expect("remaining cofactor is a p-th power");
        for (g, m) in squarefree(&root) {
            out.push((g, m * p));
        }
    }
    out
}

/// Splits a squarefree monic polynomial into products of irreducibles of
/// equal degree.
fn distinct_degree(f: &Poly) -> Vec<(u64, Poly)> {
    let field = f.field();
    let q = field.q() as u64;
    let t = Poly::t(field);
    let mut out = Vec::new();
    let mut g = f.clone();
    let mut h = t.clone();
    let mut d = 1;
    while 2 * d <= g.deg() {
        h = h.pow_mod(q, &g);
        let fac = h.sub(&t).gcd(&g);
        if !fac.is_one() {
            g = g.div_exact(&fac);
            h = h.rem(&g).unwrap();
            out.push((d, fac));
        }
        d += 1;
    }
    if !g.is_constant() {
        out.push((g.deg(), g));
    }
    out
}

fn random_poly(f: &FieldCtx, deg_bound: u64, rng: &mut ChaCha8Rng) -> Poly {
    let q = f.q();
    let coeffs: Vec<FqElem> =
        (0..deg_bound).map(|_| f.from_index(rng.gen_range(0..q)).unwrap()).collect();
    Poly::from_coeffs(f, &coeffs)
}

fn equal_degree(f: &Poly, d: u64) -> Vec<Poly> {
    if f.deg() == d {
        return vec![f.clone()];
    }
    let field = f.field();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ f.deg() ^ (d << 32));
    let mut pending = vec![f.clone()];
    let mut done = Vec::new();
    while let Some(g) = pending.pop() {
        if g.deg() == d {
            done.push(g);
            continue;
        }
        loop {
            let a = random_poly(field, g.deg(), &mut rng);
            if a.is_constant() {
                continue;
            }
            let b = splitter(&a, &g, d);
            let s = b.gcd(&g);
            if !s.is_constant() && s.deg() < g.deg() {
                pending.push(g.div_exact(&s));
                pending.push(s);
                break;
            }
        }
    }
    done
}

/// A polynomial whose gcd with `g` is a proper factor with probability
/// about one half.
fn splitter(a: &Poly, g: &Poly, d: u64) -> Poly {
    let field = g.field();
    let q = field.q() as u64;
    if field.p() == 2 {
        // absolute trace from F_{q^d} to F_2
        let steps = field.n() as u64 * d;
        let mut acc = a.rem(g).unwrap();
        let mut x = acc.clone();
        for _ in 1..steps {
            x = x.mul_mod(&x, g);
            acc = acc.add(&x);
        }
        return acc;
    }
    // norm to F_q, then the quadratic character
    let mut x = a.rem(g).unwrap();
    let mut norm = x.clone();
    for _ in 1..d {
        x = x.pow_mod(q, g);
        norm = norm.mul_mod(&x, g);
    }
    norm.pow_mod((q - 1) / 2, g).sub(&Poly::one(field))
}

/// All monic irreducible polynomials of degree exactly `d`, canonical order.
pub fn monic_irreducibles(f: &FieldCtx, d: u64) -> Vec<Poly> {
    let q = f.q() as u64;
    let count = q.checked_pow(d as u32).expect("enumeration too large");
    let mut out = Vec::new();
    for idx in 0..count {
        let mut coeffs = Vec::with_capacity(d as usize + 1);
        let mut rest = idx;
        for _ in 0..d {
            coeffs.push(f.from_index((rest % q) as u32).unwrap());
            rest /= q;
        }
        coeffs.push(FqElem::ONE);
        let p = Poly::from_coeffs(f, &coeffs);
        if is_irreducible(&p) {
            out.push(p);
        }
    }
    out.sort_by(|a, b| a.canonical_cmp(b));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent check: no monic divisor of degree <= deg/2.
    fn brute_irreducible(p: &Poly) -> bool {
        let f = p.field();
        let q = f.q() as u64;
        for d in 1..=p.deg() / 2 {
            for idx in 0..q.pow(d as u32) {
                let mut coeffs = Vec::new();
                let mut rest = idx;
                for _ in 0..d {
                    coeffs.push(f.from_index((rest % q) as u32).unwrap());
                    rest /= q;
                }
                coeffs.push(FqElem::ONE);
                if p.rem(&Poly::from_coeffs(f, &coeffs)).unwrap().is_zero() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn spec_examples() {
        let f3 = FieldCtx::prime(3).unwrap();
        assert!(is_irreducible(&Poly::from_ints(&f3, &[1, 0, 1])));
        let f5 = FieldCtx::prime(5).unwrap();
        let fz = factor(&Poly::from_ints(&f5, &[1, 0, 0, 1])).unwrap();
        assert_eq!(
            fz.factors,
            vec![(Poly::from_ints(&f5, &[1, 1]), 1), (Poly::from_ints(&f5, &[1, -1, 1]), 1)]
        );
        let sq = factor(&Poly::from_ints(&f3, &[0, 0, 1])).unwrap();
        assert_eq!(sq.factors, vec![(Poly::t(&f3), 2)]);
    }

    #[test]
    fn inseparable_powers() {
        let f9 = FieldCtx::new(3, 2).unwrap();
        let a = f9.generator();
        let lin = Poly::from_terms(&f9, vec![(0, a), (1, FqElem::ONE)]);
        let quad = Poly::from_ints(&f9, &[2, 1, 1]);
        let g = lin.pow(27).mul(&quad.pow(4)).scale(a);
        let fz = factor(&g).unwrap();
        assert_eq!(fz.expand(&f9), g);
        assert!(fz.factors.contains(&(lin, 27)));
    }

    #[test]
    fn factors_are_irreducible_and_multiply_back() {
        let fields = [FieldCtx::prime(2).unwrap(), FieldCtx::prime(5).unwrap(), FieldCtx::new(2, 2).unwrap()];
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for f in &fields {
            for _ in 0..40 {
                let mut p = random_poly(f, 9, &mut rng);
                if p.is_zero() {
                    p = Poly::one(f);
                }
                let fz = factor(&p).unwrap();
                assert_eq!(fz.expand(f), p);
                for (g, _) in &fz.factors {
                    assert!(g.is_monic() && brute_irreducible(g), "{g}");
                }
            }
        }
    }

    #[test]
    fn irreducible_counts() {
        // Gauss: 1/d sum_{e|d} mu(d/e) q^e
        let f2 = FieldCtx::prime(2).unwrap();
        let counts: Vec<usize> = (1..=5).map(|d| monic_irreducibles(&f2, d).len()).collect();
        assert_eq!(counts, vec![2, 1, 2, 3, 6]);
        let f4 = FieldCtx::new(2, 2).unwrap();
        assert_eq!(monic_irreducibles(&f4, 2).len(), 6);
    }
}
