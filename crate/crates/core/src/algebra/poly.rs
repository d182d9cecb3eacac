//! Sparse univariate polynomials over `F_q`.
//!
//! The model of arithmetic lives on elements such as `t^(3^12)`, so terms are
//! stored sparsely; products and long division switch to a dense scratch
//! buffer when the operands are dense enough for it to pay off.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use super::field::{FieldCtx, FqElem};
use crate::error::{Error, Result};

const DENSE_LIMIT: u64 = 1 << 22;

#[derive(Clone)]
pub struct Poly {
    field: FieldCtx,
    // ascending exponents, no zero coefficients
    terms: Vec<(u64, FqElem)>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && self.field == other.field
    }
}

impl Eq for Poly {}

impl Hash for Poly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_var("t"))
    }
}

fn checked_exp(a: u64, b: u64) -> u64 {
    a.checked_add(b).expect("polynomial exponent overflow")
}

impl Poly {
    /// Builds a polynomial from arbitrary `(exponent, coefficient)` pairs;
    /// repeated exponents are summed.
    pub fn from_terms(field: &FieldCtx, mut terms: Vec<(u64, FqElem)>) -> Poly {
        terms.sort_unstable_by_key(|t| t.0);
        let mut out: Vec<(u64, FqElem)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == e => last.1 = field.add(last.1, c),
                _ => out.push((e, c)),
            }
        }
        out.retain(|t| !t.1.is_zero());
        Poly { field: field.clone(), terms: out }
    }

    fn from_sorted(field: &FieldCtx, terms: Vec<(u64, FqElem)>) -> Poly {
        debug_assert!(terms.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(terms.iter().all(|t| !t.1.is_zero()));
        Poly { field: field.clone(), terms }
    }

    pub fn zero(field: &FieldCtx) -> Poly {
        Poly { field: field.clone(), terms: Vec::new() }
    }

    pub fn one(field: &FieldCtx) -> Poly {
        Self::constant(field, FqElem::ONE)
    }

    pub fn constant(field: &FieldCtx, c: FqElem) -> Poly {
        Self::monomial(field, c, 0)
    }

    pub fn monomial(field: &FieldCtx, c: FqElem, e: u64) -> Poly {
        let terms = if c.is_zero() { Vec::new() } else { vec![(e, c)] };
        Poly { field: field.clone(), terms }
    }

    /// The generator `t`.
    pub fn t(field: &FieldCtx) -> Poly {
        Self::monomial(field, FqElem::ONE, 1)
    }

    /// Dense coefficients, low to high.
    pub fn from_coeffs(field: &FieldCtx, coeffs: &[FqElem]) -> Poly {
        let terms = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, &c)| (i as u64, c))
            .collect();
        Self::from_sorted(field, terms)
    }

    /// Dense integer coefficients mapped into the prime subfield, low to high.
    pub fn from_ints(field: &FieldCtx, coeffs: &[i64]) -> Poly {
        let cs: Vec<FqElem> = coeffs.iter().map(|&c| field.from_int(c)).collect();
        Self::from_coeffs(field, &cs)
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn terms(&self) -> &[(u64, FqElem)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0] == (0, FqElem::ONE)
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.last().map(|t| t.0)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> u64 {
        self.degree().unwrap_or(0)
    }

    pub fn lc(&self) -> FqElem {
        self.terms.last().map(|t| t.1).unwrap_or(FqElem::ZERO)
    }

    /// Exponent of the lowest term, i.e. the multiplicity of `t`.
    pub fn low_degree(&self) -> Option<u64> {
        self.terms.first().map(|t| t.0)
    }

    pub fn coeff(&self, e: u64) -> FqElem {
        match self.terms.binary_search_by_key(&e, |t| t.0) {
            Ok(i) => self.terms[i].1,
            Err(_) => FqElem::ZERO,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.degree().unwrap_or(0) == 0
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn is_monic(&self) -> bool {
        self.lc() == FqElem::ONE
    }

    fn same_field(&self, other: &Poly) {
        assert!(self.field == other.field, "polynomials over different fields");
    }

    pub fn dense_coeffs(&self) -> Vec<FqElem> {
        let mut v = vec![FqElem::ZERO; self.degree().map_or(0, |d| d as usize + 1)];
        for &(e, c) in &self.terms {
            v[e as usize] = c;
        }
        v
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.same_field(other);
        let f = &self.field;
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let c = f.add(a[i].1, b[j].1);
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Self::from_sorted(f, out)
    }

    pub fn neg(&self) -> Poly {
        let f = &self.field;
        Self::from_sorted(f, self.terms.iter().map(|&(e, c)| (e, f.neg(c))).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: FqElem) -> Poly {
        self.mul_term(c, 0)
    }

    /// `self * c * t^e`.
    pub fn mul_term(&self, c: FqElem, e: u64) -> Poly {
        if c.is_zero() {
            return Self::zero(&self.field);
        }
        let f = &self.field;
        Self::from_sorted(
            f,
            self.terms.iter().map(|&(k, d)| (checked_exp(k, e), f.mul(c, d))).collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.same_field(other);
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Self::zero(f);
        }
        if self.terms.len() == 1 {
            let (e, c) = self.terms[0];
            return other.mul_term(c, e);
        }
        if other.terms.len() == 1 {
            let (e, c) = other.terms[0];
            return self.mul_term(c, e);
        }
        let deg = checked_exp(self.deg(), other.deg());
        let work = (self.terms.len() * other.terms.len()) as u64;
        if deg < DENSE_LIMIT && deg <= 32 * work {
            let mut acc = vec![FqElem::ZERO; deg as usize + 1];
            for &(ea, ca) in &self.terms {
                for &(eb, cb) in &other.terms {
                    let slot = &mut acc[(ea + eb) as usize];
                    *slot = f.add(*slot, f.mul(ca, cb));
                }
            }
            return Self::from_coeffs(f, &acc);
        }
        let mut prods = Vec::with_capacity(work as usize);
        for &(ea, ca) in &self.terms {
            for &(eb, cb) in &other.terms {
                prods.push((ea + eb, f.mul(ca, cb)));
            }
        }
        Self::from_terms(f, prods)
    }

    pub fn square(&self) -> Poly {
        self.mul(self)
    }

    /// Euclidean division.
    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        self.same_field(d);
        let f = &self.field;
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lc_inv = f.inv(d.lc()).expect("nonzero leading coefficient");
        let n = match self.degree() {
            Some(n) if n >= dd => n,
            _ => return Ok((Self::zero(f), self.clone())),
        };
        if d.terms.len() == 1 {
            let mut q = Vec::new();
            let mut r = Vec::new();
            for &(e, c) in &self.terms {
                if e >= dd {
                    q.push((e - dd, f.mul(c, lc_inv)));
                } else {
                    r.push((e, c));
                }
            }
            return Ok((Self::from_sorted(f, q), Self::from_sorted(f, r)));
        }
        let lower: Vec<(u64, FqElem)> = d.terms[..d.terms.len() - 1].to_vec();
        let mut quot = Vec::new();
        if n < DENSE_LIMIT {
            let mut r = self.dense_coeffs();
            for i in (dd..=n).rev() {
                let c = r[i as usize];
                if c.is_zero() {
                    continue;
                }
                let qc = f.mul(c, lc_inv);
                quot.push((i - dd, qc));
                r[i as usize] = FqElem::ZERO;
                for &(e, dc) in &lower {
                    let slot = &mut r[(i - dd + e) as usize];
                    *slot = f.sub(*slot, f.mul(qc, dc));
                }
            }
            r.truncate(dd as usize);
            quot.reverse();
            return Ok((Self::from_sorted(f, quot), Self::from_coeffs(f, &r)));
        }
        let mut r: BTreeMap<u64, FqElem> = self.terms.iter().copied().collect();
        while let Some((&e, &c)) = r.iter().next_back() {
            if e < dd {
                break;
            }
            r.remove(&e);
            let qc = f.mul(c, lc_inv);
            quot.push((e - dd, qc));
            for &(k, dc) in &lower {
                let key = e - dd + k;
                let v = f.sub(r.get(&key).copied().unwrap_or(FqElem::ZERO), f.mul(qc, dc));
                if v.is_zero() {
                    r.remove(&key);
                } else {
                    r.insert(key, v);
                }
            }
        }
        quot.reverse();
        Ok((Self::from_sorted(f, quot), Self::from_sorted(f, r.into_iter().collect())))
    }

    pub fn rem(&self, d: &Poly) -> Result<Poly> {
        Ok(self.div_rem(d)?.1)
    }

    /// Division known to be exact.
    pub fn div_exact(&self, d: &Poly) -> Poly {
        let (q, r) = self.div_rem(d).expect("exact division by zero");
        debug_assert!(r.is_zero(), "inexact division of {self} by {d}");
        q
    }

    pub fn divides(&self, other: &Poly) -> bool {
        other.rem(self).map(|r| r.is_zero()).unwrap_or(false)
    }

    pub fn monic(&self) -> Poly {
        match self.field.inv(self.lc()) {
            Some(i) if i != FqElem::ONE => self.scale(i),
            _ => self.clone(),
        }
    }

    /// Divides out `t^k`; the caller guarantees `k <= low_degree`.
    pub fn shift_down(&self, k: u64) -> Poly {
        Self::from_sorted(&self.field, self.terms.iter().map(|&(e, c)| (e - k, c)).collect())
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        self.same_field(other);
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        let (la, lb) = (self.low_degree().unwrap(), other.low_degree().unwrap());
        let k = la.min(lb);
        let tk = Self::monomial(&self.field, FqElem::ONE, k);
        let mut a = self.shift_down(la);
        let mut b = other.shift_down(lb);
        if a.is_constant() || b.is_constant() {
            return tk;
        }
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.rem(&b).unwrap();
            a = b;
            b = r;
        }
        a.monic().mul(&tk)
    }

    /// Returns `(g, s, u)` with `s*self + u*other = g`, `g` monic.
    pub fn xgcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        self.same_field(other);
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(f), Self::zero(f));
        let (mut u0, mut u1) = (Self::zero(f), Self::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1).unwrap();
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let u = u0.sub(&q.mul(&u1));
            u0 = std::mem::replace(&mut u1, u);
        }
        match f.inv(r0.lc()) {
            Some(i) => (r0.scale(i), s0.scale(i), u0.scale(i)),
            None => (r0, s0, u0),
        }
    }

    /// Inverse modulo `m`, if it exists.
    pub fn inv_mod(&self, m: &Poly) -> Option<Poly> {
        let (g, s, _) = self.rem(m).ok()?.xgcd(m);
        g.is_one().then(|| s.rem(m).unwrap())
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| *e > 0)
            .map(|&(e, c)| (e - 1, f.mul(f.from_int((e % f.p() as u64) as i64), c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Self::from_sorted(f, terms)
    }

    /// `self^(p^k)`, computed coefficient- and exponent-wise.
    pub fn frobenius(&self, k: u32) -> Poly {
        self.checked_frobenius(k).expect("polynomial exponent overflow")
    }

    /// As [`Poly::frobenius`], `None` when an exponent leaves `u64`.
    pub fn checked_frobenius(&self, k: u32) -> Option<Poly> {
        let f = &self.field;
        let pk = (f.p() as u64).checked_pow(k)?;
        let terms = self
            .terms
            .iter()
            .map(|&(e, c)| Some((e.checked_mul(pk)?, f.frob_pow(c, k as u64))))
            .collect::<Option<Vec<_>>>()?;
        Some(Self::from_sorted(f, terms))
    }

    /// The `p`-th root of a polynomial all of whose exponents are divisible
    /// by `p`.
    pub fn pth_root(&self) -> Option<Poly> {
        let f = &self.field;
        let p = f.p() as u64;
        if self.terms.iter().any(|(e, _)| e % p != 0) {
            return None;
        }
        Some(Self::from_sorted(
            f,
            self.terms.iter().map(|&(e, c)| (e / p, f.frob_root(c, 1))).collect(),
        ))
    }

    pub fn pow(&self, e: u64) -> Poly {
        let f = &self.field;
        if e == 0 {
            return Self::one(f);
        }
        if self.is_zero() {
            return self.clone();
        }
        if self.terms.len() == 1 {
            let (k, c) = self.terms[0];
            return Self::monomial(f, f.pow(c, e), k.checked_mul(e).expect("polynomial exponent overflow"));
        }
        let p = f.p() as u64;
        if e.is_multiple_of(p) {
            return self.pow(e / p).frobenius(1);
        }
        let mut result = Self::one(f);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        result
    }

    pub fn mul_mod(&self, other: &Poly, m: &Poly) -> Poly {
        self.mul(other).rem(m).expect("modulus is nonzero")
    }

    pub fn pow_mod(&self, mut e: u64, m: &Poly) -> Poly {
        let mut result = Self::one(&self.field).rem(m).unwrap();
        let mut base = self.rem(m).unwrap();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_mod(&base, m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_mod(&base, m);
            }
        }
        result
    }

    pub fn eval(&self, x: FqElem) -> FqElem {
        let f = &self.field;
        self.terms
            .iter()
            .fold(FqElem::ZERO, |acc, &(e, c)| f.add(acc, f.mul(c, f.pow(x, e))))
    }

    /// Deterministic total order: by degree, then by coefficients from the
    /// top down.
    pub fn canonical_cmp(&self, other: &Poly) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        let mut a = self.terms.iter().rev();
        let mut b = other.terms.iter().rev();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some(x), Some(y)) => {
                    let o = y.0.cmp(&x.0).then(x.1.cmp(&y.1));
                    if o != Ordering::Equal {
                        return o;
                    }
                }
            }
        }
    }

    pub fn fmt_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let f = &self.field;
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|&(e, c)| {
                let cs = f.fmt_elem(c);
                match (e, c == FqElem::ONE) {
                    (0, _) => cs,
                    (1, true) => var.to_string(),
                    (1, false) => format!("{cs}{var}"),
                    (_, true) => format!("{var}^{e}"),
                    (_, false) => format!("{cs}{var}^{e}"),
                }
            })
            .collect();
        parts.join(" + ")
    }
}
