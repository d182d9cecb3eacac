//! Artin-Schreier equations `u^(p^r) - u = a` over `F_q(t)` and the
//! equation systems that single out the powers `t^(p^(rs))`.

use serde::Serialize;

use crate::algebra::partial::partial_fractions;
use crate::algebra::{FieldCtx, FqElem, Place, Poly, RatFun};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ASExponent(u32);

impl ASExponent {
    pub fn new(r: u32) -> Result<ASExponent> {
        if r == 0 {
            return Err(Error::InvalidArgument("Artin-Schreier exponent must be at least 1".into()));
        }
        Ok(ASExponent(r))
    }

    /// `r = 1` for odd `p`, `r = 2` for `p = 2`.
    pub fn for_char(p: u32) -> ASExponent {
        ASExponent(if p == 2 { 2 } else { 1 })
    }

    pub fn r(self) -> u32 {
        self.0
    }

    /// `p^r`.
    pub fn base(self, f: &FieldCtx) -> u64 {
        (f.p() as u64).pow(self.0)
    }
}

/// `u^(p^r) - u`.
pub fn as_image(u: &RatFun, r: ASExponent) -> RatFun {
    u.frobenius_power(r.r()).sub(u)
}

/// The constants `c` with `c^(p^r) = c`.
pub fn as_kernel(f: &FieldCtx, r: ASExponent) -> Vec<FqElem> {
    f.elements().filter(|&c| f.frob_pow(c, r.r() as u64) == c).collect()
}

/// `x^(1/p^r)` in the residue field `F_q[t]/(pi)`.
fn residue_root(x: &Poly, pi: &Poly, r: ASExponent) -> Poly {
    let f = pi.field();
    if pi.deg() == 1 {
        return Poly::constant(f, f.frob_root(x.coeff(0), r.r() as u64));
    }
    let order = f.n() as u64 * pi.deg();
    let e = (order - (r.r() as u64 % order)) % order;
    let mut y = x.clone();
    for _ in 0..e {
        y = y.pow_mod(f.p() as u64, pi);
    }
    y
}

/// Some `u` with `u^(p^r) - u = a`, or `None` if there is none in `F_q(t)`.
///
/// Leading terms of the principal parts are removed one place at a time:
/// a pole of order `m` needs `p^r | m`, and `z = c^(1/p^r) pi^(-m/p^r)`
/// cancels it. The polynomial part is treated the same way at infinity,
/// and what is left is a constant.
pub fn solve_as(a: &RatFun, r: ASExponent) -> Option<RatFun> {
    let f = a.field();
    let b = r.base(f);
    let pf = partial_fractions(a);
    let mut u = RatFun::zero(f);
    for lp in &pf.parts {
        let pi = lp.pi();
        let d = pi.deg();
        let mut cur = lp.as_ratfun();
        while !cur.is_zero() {
            let m = cur.den().deg() / d;
            if m % b != 0 {
                return None;
            }
            let lead = cur.num().rem(pi).unwrap();
            let root = residue_root(&lead, pi, r);
            let z = RatFun::new(root, pi.pow(m / b)).unwrap();
            cur = cur.sub(&as_image(&z, r));
            u = u.add(&z);
        }
    }
    let mut poly = pf.poly_part.clone();
    while poly.deg() > 0 {
        let m = poly.deg();
        if !m.is_multiple_of(b) {
            return None;
        }
        let root = f.frob_root(poly.lc(), r.r() as u64);
        let z = Poly::monomial(f, root, m / b);
        poly = poly.sub(&z.frobenius(r.r()).sub(&z));
        u = u.add(&RatFun::from_poly(z));
    }
    let c0 = poly.coeff(0);
    let u0 = f.elements().find(|&x| f.sub(f.frob_pow(x, r.r() as u64), x) == c0)?;
    let u = u.add(&RatFun::constant(f, u0));
    assert_eq!(as_image(&u, r), *a, "Artin-Schreier solution failed verification");
    Some(u)
}

/// Every solution: one particular solution shifted by the kernel.
pub fn solve_as_all(a: &RatFun, r: ASExponent) -> Vec<RatFun> {
    let Some(u0) = solve_as(a, r) else {
        return Vec::new();
    };
    as_kernel(a.field(), r)
        .into_iter()
        .map(|c| u0.add(&RatFun::constant(a.field(), c)))
        .collect()
}

/// `s` with `w = t^(base^s)`, `s >= 0`.
pub fn t_power_exponent(w: &RatFun, base: u64) -> Option<u64> {
    let (c, k) = w.as_monomial()?;
    if c != FqElem::ONE || k < 1 {
        return None;
    }
    let mut k = k as u64;
    let mut s = 0;
    while k > 1 {
        if !k.is_multiple_of(base) {
            return None;
        }
        k /= base;
        s += 1;
    }
    Some(s)
}

/// `-(x + x^B + ... + x^(B^(s-1)))`, whose image under `y -> y^B - y` is
/// `x - x^(B^s)`.
fn telescoping(x: &RatFun, s: u64, r: ASExponent) -> Result<RatFun> {
    let mut acc = RatFun::zero(x.field());
    let mut cur = x.clone();
    for i in 0..s {
        acc = acc.sub(&cur);
        if i + 1 < s {
            cur = cur.checked_frobenius_power(r.r())?;
        }
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Version1Witness {
    pub w: RatFun,
    pub s: u64,
    pub u: RatFun,
    pub v: RatFun,
}

/// The two sides of `1/t - 1/w = U` and `t - w = V`.
fn version1_targets(w: &RatFun) -> Option<(RatFun, RatFun)> {
    let t = RatFun::t(w.field());
    let a1 = t.inv().unwrap().sub(&w.inv().ok()?);
    Some((a1, t.sub(w)))
}

fn rs_exponent(r: ASExponent, s: u64) -> Result<u32> {
    (r.r() as u64)
        .checked_mul(s)
        .and_then(|e| u32::try_from(e).ok())
        .ok_or_else(|| Error::ExponentOverflow(format!("p^({}*{s})", r.r())))
}

pub fn version1_witness(f: &FieldCtx, s: u64, r: ASExponent) -> Result<Version1Witness> {
    let t = RatFun::t(f);
    let w = t.checked_frobenius_power(rs_exponent(r, s)?)?;
    let u = telescoping(&t.inv().unwrap(), s, r)?;
    let v = telescoping(&t, s, r)?;
    let (a1, a2) = version1_targets(&w).unwrap();
    if as_image(&u, r) != a1 || as_image(&v, r) != a2 {
        return Err(Error::InternalContradiction(format!("version1 witness for s = {s} does not verify")));
    }
    Ok(Version1Witness { w, s, u, v })
}

fn confirm_power(w: &RatFun, r: ASExponent, what: &str) -> Result<u64> {
    let f = w.field();
    let s = t_power_exponent(w, r.base(f)).ok_or_else(|| {
        Error::InternalContradiction(format!("{what} is solvable for w = {w}, which is not t^(p^(rs))"))
    })?;
    let again = RatFun::t(f).checked_frobenius_power(rs_exponent(r, s)?)?;
    if again != *w {
        return Err(Error::InternalContradiction(format!("exponent {s} does not reproduce w = {w}")));
    }
    Ok(s)
}

/// `Some(s)` iff both equations `1/t - 1/w = u^(p^r) - u` and
/// `t - w = v^(p^r) - v` are solvable; then `w = t^(p^(rs))`.
pub fn classify_version1(w: &RatFun, r: ASExponent) -> Result<Option<u64>> {
    let Some((a1, a2)) = version1_targets(w) else {
        return Ok(None);
    };
    if solve_as(&a1, r).is_none() || solve_as(&a2, r).is_none() {
        return Ok(None);
    }
    confirm_power(w, r, "the two-equation system").map(Some)
}

/// Solvability of the pair system for one choice of `c_i, c_j, a, b`.
fn below_pair_solvable(w: &RatFun, ci: FqElem, cj: FqElem, a: FqElem, b: FqElem, r: ASExponent) -> bool {
    let f = w.field();
    let lin = |c: FqElem| RatFun::t(f).sub(&RatFun::constant(f, c));
    let ti = lin(ci);
    let tj = lin(cj);
    let wa = w.sub(&RatFun::constant(f, a));
    let wb = w.sub(&RatFun::constant(f, b));
    let (Ok(x1), Ok(y1), Ok(x2), Ok(y2)) = (ti.checked_div(&tj), wa.checked_div(&wb), tj.checked_div(&ti), wb.checked_div(&wa))
    else {
        return false;
    };
    solve_as(&x1.sub(&y1), r).is_some() && solve_as(&x2.sub(&y2), r).is_some()
}

/// For each ordered pair `i != j` of orbits, looks for `a in V_i`,
/// `b in V_j` making both equations
/// `(t-c_i)/(t-c_j) - (w-a)/(w-b) = u^(p^r) - u` and
/// `(t-c_j)/(t-c_i) - (w-b)/(w-a) = v^(p^r) - v` solvable.
///
/// `orbits[i]` lists `V_i` starting with its representative `c_i`; the
/// pairs range over every index, `c_0 = 0` included.
pub fn below_system_check(w: &RatFun, orbits: &[Vec<FqElem>], r: ASExponent) -> Result<Option<u64>> {
    if w.is_zero() {
        return Ok(None);
    }
    for (i, vi) in orbits.iter().enumerate() {
        for (j, vj) in orbits.iter().enumerate() {
            if i == j {
                continue;
            }
            let found = vi
                .iter()
                .any(|&a| vj.iter().any(|&b| below_pair_solvable(w, vi[0], vj[0], a, b, r)));
            if !found {
                return Ok(None);
            }
        }
    }
    confirm_power(w, r, "the orbit-pair system").map(Some)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GetdownWitness {
    pub a: FqElem,
    pub b: FqElem,
    pub w: RatFun,
    pub u: RatFun,
}

/// For `w = t^(p^s)`: `b = a^(p^s)` and `u` with
/// `1/(t-a) - 1/(w-b) = u^p - u`.
pub fn getdown_witness(f: &FieldCtx, s: u64, a: FqElem) -> Result<GetdownWitness> {
    let r = ASExponent(1);
    let e = rs_exponent(r, s)?;
    let t = RatFun::t(f);
    let w = t.checked_frobenius_power(e)?;
    let b = f.frob_pow(a, s);
    let x = t.sub(&RatFun::constant(f, a)).inv().unwrap();
    let u = telescoping(&x, s, r)?;
    let lhs = x.sub(&w.sub(&RatFun::constant(f, b)).inv()?);
    if as_image(&u, r) != lhs {
        return Err(Error::InternalContradiction(format!("getdown witness for s = {s}, a = {a:?} does not verify")));
    }
    Ok(GetdownWitness { a, b, w, u })
}

/// Poles of `a` whose order is not divisible by `p^r`, any one of which
/// rules out a solution.
pub fn obstructing_poles(a: &RatFun, r: ASExponent) -> Vec<(Place, u64)> {
    let b = r.base(a.field());
    let pf = partial_fractions(a);
    let mut out: Vec<(Place, u64)> = pf.poles().into_iter().filter(|(_, m)| m % b != 0).collect();
    let d = pf.poly_part.deg();
    if d > 0 && !d.is_multiple_of(b) {
        out.push((Place::Infinity, d));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> FieldCtx {
        FieldCtx::prime(3).unwrap()
    }

    fn inv_t_pow(f: &FieldCtx, k: i64) -> RatFun {
        RatFun::monomial(f, FqElem::ONE, -k)
    }

    #[test]
    fn image_examples() {
        let f = f3();
        let r = ASExponent::new(1).unwrap();
        let u = inv_t_pow(&f, 1).add(&inv_t_pow(&f, 3)).neg();
        assert_eq!(as_image(&u, r), inv_t_pow(&f, 1).sub(&inv_t_pow(&f, 9)));
        for c in f.elements() {
            assert!(as_image(&RatFun::constant(&f, c), r).is_zero());
        }
        assert!(as_image(&RatFun::zero(&f), r).is_zero());
    }

    #[test]
    fn solver_examples() {
        let f = f3();
        let r = ASExponent::new(1).unwrap();
        let a = inv_t_pow(&f, 1).sub(&inv_t_pow(&f, 9));
        let u = solve_as(&a, r).unwrap();
        assert_eq!(as_image(&u, r), a);
        let expected = inv_t_pow(&f, 1).add(&inv_t_pow(&f, 3)).neg();
        assert!(solve_as_all(&a, r).contains(&expected));
        assert_eq!(solve_as(&inv_t_pow(&f, 1), r), None);
        assert_eq!(solve_as(&RatFun::one(&f), r), None);
    }

    #[test]
    fn solver_in_higher_degree_residue_fields() {
        // pole at t^2 + 1 over F_3, and at an irreducible cubic over F_4
        for (f, modulus) in [(f3(), vec![1, 0, 1]), (FieldCtx::new(2, 2).unwrap(), vec![1, 1, 0, 1])] {
            for r in [1, 2, 3] {
                let r = ASExponent::new(r).unwrap();
                let pi = Poly::from_ints(&f, &modulus.iter().map(|&x| x as i64).collect::<Vec<_>>());
                let u = RatFun::new(Poly::from_ints(&f, &[1, 1]), pi.pow(2))
                    .unwrap()
                    .add(&RatFun::from_ints(&f, &[0, 1, 1], &[1]).unwrap());
                let a = as_image(&u, r);
                let got = solve_as(&a, r).unwrap();
                assert!(got.sub(&u).as_constant().is_some());
            }
        }
    }

    #[test]
    fn version1_examples() {
        let f = f3();
        let r = ASExponent::new(1).unwrap();
        let w0 = version1_witness(&f, 0, r).unwrap();
        assert_eq!(w0.w, RatFun::t(&f));
        assert!(w0.u.is_zero() && w0.v.is_zero());
        let w2 = version1_witness(&f, 2, r).unwrap();
        assert_eq!(w2.w, RatFun::monomial(&f, FqElem::ONE, 9));
        assert_eq!(w2.u, inv_t_pow(&f, 1).add(&inv_t_pow(&f, 3)).neg());
        assert_eq!(w2.v, RatFun::from_ints(&f, &[0, -1, 0, -1], &[1]).unwrap());
        let f2 = FieldCtx::prime(2).unwrap();
        let w = version1_witness(&f2, 1, ASExponent::new(2).unwrap()).unwrap();
        assert_eq!(w.w, RatFun::monomial(&f2, FqElem::ONE, 4));
        assert_eq!(w.u, inv_t_pow(&f2, 1));
        assert_eq!(w.v, RatFun::t(&f2));
    }

    #[test]
    fn classify_examples() {
        let f = f3();
        let r = ASExponent::new(1).unwrap();
        assert_eq!(classify_version1(&RatFun::monomial(&f, FqElem::ONE, 9), r).unwrap(), Some(2));
        assert_eq!(classify_version1(&RatFun::monomial(&f, FqElem::ONE, 2), r).unwrap(), None);
        assert_eq!(classify_version1(&RatFun::t(&f), r).unwrap(), Some(0));
        assert_eq!(classify_version1(&RatFun::zero(&f), r).unwrap(), None);
    }

    fn orbits_f3() -> Vec<Vec<FqElem>> {
        let f = f3();
        (0..3).map(|i| vec![f.from_index(i).unwrap()]).collect()
    }

    #[test]
    fn below_examples() {
        let f = f3();
        let r = ASExponent::new(1).unwrap();
        let orbits = orbits_f3();
        assert_eq!(below_system_check(&RatFun::monomial(&f, FqElem::ONE, 3), &orbits, r).unwrap(), Some(1));
        assert_eq!(below_system_check(&RatFun::t(&f), &orbits, r).unwrap(), Some(0));
        let tp1 = RatFun::from_ints(&f, &[1, 1], &[1]).unwrap();
        assert_eq!(below_system_check(&tp1, &orbits, r).unwrap(), None);
    }

    #[test]
    fn below_needs_the_zero_constant() {
        // over F_9 with a^2 = -1: the orbits of a and a+1 alone accept t + a
        let f9 = FieldCtx::new(3, 2).unwrap();
        let r = ASExponent::new(1).unwrap();
        let a = f9.from_digits(&[0, 1]).unwrap();
        let orbit = |c: FqElem| {
            let mut v = vec![c];
            let c3 = f9.frob(c);
            if c3 != c {
                v.push(c3);
            }
            v
        };
        let a1 = f9.add(a, f9.one());
        let w = RatFun::from_poly(Poly::from_terms(&f9, vec![(0, a), (1, f9.one())]));
        let without_zero = vec![orbit(a), orbit(a1)];
        assert!(below_system_check(&w, &without_zero, r).is_err());
        let with_zero = vec![vec![FqElem::ZERO], orbit(a), orbit(a1)];
        assert_eq!(below_system_check(&w, &with_zero, r).unwrap(), None);
    }

    #[test]
    fn getdown_examples() {
        let f = f3();
        let g1 = getdown_witness(&f, 1, f.one()).unwrap();
        assert_eq!(g1.b, f.one());
        assert_eq!(g1.u, RatFun::from_ints(&f, &[-1], &[-1, 1]).unwrap());
        let g0 = getdown_witness(&f, 1, FqElem::ZERO).unwrap();
        assert_eq!(g0.b, FqElem::ZERO);
        assert_eq!(g0.u, inv_t_pow(&f, 1).neg());
        for s in 0..5 {
            assert_eq!(getdown_witness(&f, s, FqElem::ZERO).unwrap().b, FqElem::ZERO);
        }
    }

    #[test]
    fn t_power_exponents() {
        let f = f3();
        assert_eq!(t_power_exponent(&RatFun::monomial(&f, FqElem::ONE, 27), 3), Some(3));
        assert_eq!(t_power_exponent(&RatFun::monomial(&f, FqElem::ONE, 8), 3), None);
        assert_eq!(t_power_exponent(&RatFun::monomial(&f, f.from_int(2), 9), 3), None);
        assert_eq!(t_power_exponent(&inv_t_pow(&f, 3), 3), None);
    }
}
