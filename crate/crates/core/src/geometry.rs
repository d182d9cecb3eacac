//! Ramification of finite extensions of `F_q(t)`, genus parameters for the
//! constant-field argument, constant Artin-Schreier solvability and
//! Frobenius-orbit constants.

use crate::algebra::{discriminant, factor, FieldCtx, FqElem, Place, Poly, RatFun, RatFunPoly};
use crate::error::{Error, Result};
use crate::model::gcd;

/// A monic separable `h(T)` over `F_q(t)` defining `alpha`.
#[derive(Clone, Debug)]
pub struct ExtensionDatum {
    h: RatFunPoly,
}

impl ExtensionDatum {
    pub fn new(h: RatFunPoly) -> Result<ExtensionDatum> {
        if !h.is_monic() {
            return Err(Error::NotMonic);
        }
        if h.derivative().is_zero() {
            return Err(Error::InseparableInput);
        }
        Ok(ExtensionDatum { h })
    }

    /// `T^2 - g`.
    pub fn quadratic(g: &RatFun) -> Result<ExtensionDatum> {
        let f = g.field();
        Self::new(RatFunPoly::new(f, vec![g.neg(), RatFun::zero(f), RatFun::one(f)]))
    }

    pub fn h(&self) -> &RatFunPoly {
        &self.h
    }

    pub fn degree(&self) -> usize {
        self.h.degree().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamificationBound {
    /// Numerator of the discriminant.
    pub dpoly: Poly,
    /// Finite poles of the product of the nonzero non-leading coefficients,
    /// together with those of the discriminant.
    pub ppoly: Poly,
    pub n_alpha: u64,
}

pub fn ramification_bound(d: &ExtensionDatum) -> Result<RamificationBound> {
    let f = d.h.field();
    let disc = discriminant(&d.h)?;
    let n = d.degree();
    let prod = d.h.coeffs()[..n].iter().filter(|a| !a.is_zero()).fold(RatFun::one(f), |acc, a| acc.mul(a));
    let dpoly = disc.num().monic();
    let (a, b) = (prod.den(), disc.den());
    let ppoly = a.mul(b).div_exact(&a.gcd(b));
    let n_alpha = dpoly.deg() + ppoly.deg();
    Ok(RamificationBound { dpoly, ppoly, n_alpha })
}

/// `(b/2)^2 - c` for `T^2 + b T + c`, so the field is `F_q(t)(sqrt g)`.
fn quadratic_radicand(d: &ExtensionDatum) -> Result<RatFun> {
    let f = d.h.field();
    if d.degree() != 2 {
        return Err(Error::Unsupported("ramification is computed for quadratic extensions".into()));
    }
    if f.p() == 2 {
        return Err(Error::Unsupported("quadratic ramification needs odd characteristic".into()));
    }
    let (c, b) = (&d.h.coeffs()[0], &d.h.coeffs()[1]);
    let half = b.scale(f.inv(f.from_int(2)).expect("p is odd"));
    Ok(half.mul(&half).sub(c))
}

/// Finite places where `ord(g)` is odd.
pub fn ramified_finite_places(d: &ExtensionDatum) -> Result<Vec<Place>> {
    let g = quadratic_radicand(d)?;
    if g.is_zero() {
        return Err(Error::InseparableInput);
    }
    let mut out = Vec::new();
    for poly in [g.num(), g.den()] {
        if poly.is_constant() {
            continue;
        }
        for (pi, m) in factor(poly)?.factors {
            if m % 2 == 1 {
                out.push(Place::finite(pi)?);
            }
        }
    }
    out.sort_by(|a, b| a.poly().unwrap().canonical_cmp(b.poly().unwrap()));
    Ok(out)
}

/// Whether the place at infinity ramifies in the quadratic extension.
pub fn infinity_ramifies(d: &ExtensionDatum) -> Result<bool> {
    let g = quadratic_radicand(d)?;
    Ok(g.ord_at(&Place::Infinity)? % 2 != 0)
}

/// Lexicographically least `(k, u)` with `u >= 3`, `gcd(u, p) = 1` and
/// `(u - 2)(p^k - 1)/2 > g_k`.
pub fn genus_params(g_k: u64, p: u64) -> (u64, u64) {
    admissible_pairs(p).find(|&(k, u)| genus_lower_bound(k, u, p) > g_k as u128).expect("k = 1 always admits some u")
}

/// `(u - 2)(p^k - 1)/2`, exactly; the product is even for odd `p`.
pub fn genus_lower_bound(k: u64, u: u64, p: u64) -> u128 {
    (u as u128 - 2) * ((p as u128).pow(k as u32) - 1) / 2
}

fn admissible_pairs(p: u64) -> impl Iterator<Item = (u64, u64)> {
    (3u64..).filter(move |u| gcd(*u, p) == 1).map(|u| (1, u))
}

/// Some `b` in `F_q` with `b^(p^k) - b = -c`.
pub fn as_const_solvable(f: &FieldCtx, c: FqElem, k: u64) -> Result<Option<FqElem>> {
    let target = f.neg(c);
    let found = f.elements().find(|&b| f.sub(f.frob_pow(b, k), b) == target);
    if found.is_some() != trace_vanishes(f, target, k) {
        return Err(Error::InternalContradiction(format!("trace criterion disagrees at c = {}", f.fmt_elem(c))));
    }
    Ok(found)
}

/// The image of `y -> y^(p^k) - y` is the kernel of the trace from `F_q`
/// to `F_q` intersected with `F_(p^k)`, which is `F_(p^g)`, `g = gcd(k, n)`.
pub fn trace_vanishes(f: &FieldCtx, a: FqElem, k: u64) -> bool {
    let g = gcd(k, f.n() as u64);
    let steps = f.n() as u64 / g;
    let tr = (0..steps).fold(FqElem::ZERO, |acc, i| f.add(acc, f.frob_pow(a, g * i)));
    tr.is_zero()
}

/// Elements `c` of `F_q` with `c^(p^k) = c`.
pub fn as_const_kernel(f: &FieldCtx, k: u64) -> Vec<FqElem> {
    f.elements().filter(|&b| f.frob_pow(b, k) == b).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitConstants {
    /// `c_0 = 0, c_1, ..., c_M`.
    pub constants: Vec<FqElem>,
    /// The orbit of each `c_i` under `x -> x^p`, starting at `c_i`.
    pub orbits: Vec<Vec<FqElem>>,
}

/// All Frobenius orbits of `F_q`, `{0}` first, then by least element.
pub fn frobenius_orbits(f: &FieldCtx) -> Vec<Vec<FqElem>> {
    let mut seen = vec![false; f.q() as usize];
    let mut out = Vec::new();
    for x in f.elements() {
        if seen[x.index() as usize] {
            continue;
        }
        let mut orbit = vec![x];
        seen[x.index() as usize] = true;
        let mut y = f.frob(x);
        while y != x {
            seen[y.index() as usize] = true;
            orbit.push(y);
            y = f.frob(y);
        }
        out.push(orbit);
    }
    out
}

/// Representatives `c_0 = 0, ..., c_M` of distinct Frobenius orbits.
pub fn orbit_constants(f: &FieldCtx, m: usize) -> Result<OrbitConstants> {
    let all = frobenius_orbits(f);
    if all.len() < m + 1 {
        return Err(Error::NotEnoughOrbits { available: all.len(), requested: m + 1 });
    }
    let orbits: Vec<Vec<FqElem>> = all.into_iter().take(m + 1).collect();
    let constants: Vec<FqElem> = orbits.iter().map(|o| o[0]).collect();
    let period = orbits.iter().fold(1u64, |acc, o| crate::model::lcm(acc, o.len() as u64));
    for (i, &ci) in constants.iter().enumerate() {
        for (j, &cj) in constants.iter().enumerate() {
            if i != j && (0..period).any(|k| f.frob_pow(ci, k) == cj) {
                return Err(Error::InternalContradiction(format!("orbits of c_{i} and c_{j} meet")));
            }
        }
    }
    Ok(OrbitConstants { constants, orbits })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(f: &FieldCtx, num: &[i64], den: &[i64]) -> RatFun {
        RatFun::from_ints(f, num, den).unwrap()
    }

    #[test]
    fn ramification_examples() {
        let f5 = FieldCtx::prime(5).unwrap();
        let d = ExtensionDatum::quadratic(&rf(&f5, &[1, 0, 0, 1], &[1])).unwrap();
        let b = ramification_bound(&d).unwrap();
        assert_eq!((b.dpoly.deg(), b.ppoly.deg(), b.n_alpha), (3, 0, 3));
        let places = ramified_finite_places(&d).unwrap();
        assert_eq!(places.iter().map(Place::degree).sum::<u64>(), 3);
        assert!(infinity_ramifies(&d).unwrap());

        let f3 = FieldCtx::prime(3).unwrap();
        let d = ExtensionDatum::quadratic(&rf(&f3, &[1], &[0, 1])).unwrap();
        let b = ramification_bound(&d).unwrap();
        assert_eq!(b.ppoly, Poly::t(&f3));
        assert_eq!(b.n_alpha, b.dpoly.deg() + 1);
        assert_eq!(ramified_finite_places(&d).unwrap(), vec![Place::t(&f3)]);

        let lin = ExtensionDatum::new(RatFunPoly::new(&f3, vec![RatFun::t(&f3).neg(), RatFun::one(&f3)])).unwrap();
        assert_eq!(ramification_bound(&lin).unwrap().n_alpha, 0);

        let sq = ExtensionDatum::quadratic(&rf(&f5, &[0, 0, 1], &[1])).unwrap();
        assert!(ramified_finite_places(&sq).unwrap().is_empty());
        let t = ExtensionDatum::quadratic(&RatFun::t(&f5)).unwrap();
        assert_eq!(ramified_finite_places(&t).unwrap(), vec![Place::t(&f5)]);
    }

    #[test]
    fn genus_examples() {
        assert_eq!(genus_params(2, 3), (1, 5));
        assert_eq!(genus_params(0, 5), (1, 3));
        assert_eq!(genus_params(0, 3), (1, 4));
    }

    #[test]
    fn constant_solvability() {
        let f9 = FieldCtx::new(3, 2).unwrap();
        assert_eq!(as_const_solvable(&f9, FqElem::ZERO, 1).unwrap(), Some(FqElem::ZERO));
        let f3 = FieldCtx::prime(3).unwrap();
        assert_eq!(as_const_solvable(&f3, FqElem::ONE, 1).unwrap(), None);
        let solvable = f9.elements().filter(|&c| as_const_solvable(&f9, c, 1).unwrap().is_some()).count();
        assert_eq!(solvable, 3);
    }

    #[test]
    fn orbit_examples() {
        let f9 = FieldCtx::new(3, 2).unwrap();
        let o = orbit_constants(&f9, 5).unwrap();
        assert_eq!(o.constants.len(), 6);
        assert_eq!(o.constants[0], FqElem::ZERO);
        let f3 = FieldCtx::prime(3).unwrap();
        assert_eq!(orbit_constants(&f3, 3).unwrap_err(), Error::NotEnoughOrbits { available: 3, requested: 4 });
        assert_eq!(orbit_constants(&f3, 0).unwrap().constants, vec![FqElem::ZERO]);
    }
}
