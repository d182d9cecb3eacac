//! The finite field `F_q`, `q = p^n`, realized as `F_p[a]/(m(a))`.
//!
//! Elements are indices in `0..q` whose base-`p` digits are the coefficients
//! `c_0, ..., c_{n-1}` of the representative `c_0 + c_1 a + ... + c_{n-1} a^{n-1}`.
//! Multiplication goes through discrete-log tables, addition through a
//! table for small `q` and digitwise arithmetic otherwise.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

const MAX_FIELD_SIZE: u64 = 1 << 16;
const ADD_TABLE_LIMIT: u32 = 1024;

/// An element of a [`FieldCtx`]. Carries no reference to its field; all
/// arithmetic goes through the context.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElem(u32);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Inner {
    p: u32,
    n: u32,
    q: u32,
    modulus: Vec<u32>,
    pow_p: Vec<u32>,
    add_table: Option<Vec<u16>>,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
    frob: Vec<u32>,
}

/// Shared handle to a finite field. Cloning is cheap.
#[derive(Clone)]
pub struct FieldCtx {
    inner: Arc<Inner>,
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for FieldCtx {}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.inner.q)?;
        if self.inner.n > 1 {
            write!(f, " (modulus {:?})", self.inner.modulus)?;
        }
        Ok(())
    }
}

pub(crate) fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            out.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

// Dense polynomials over F_p, low to high, used only while building tables.
fn dense_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    let lc_inv = mod_inv(m[dm], p);
    while r.len() > dm {
        let top = *r.last().unwrap();
        if top != 0 {
            let c = (top as u64 * lc_inv as u64 % p as u64) as u32;
            let shift = r.len() - 1 - dm;
            for (i, &mi) in m.iter().enumerate() {
                let sub = (c as u64 * mi as u64 % p as u64) as u32;
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
        }
        r.pop();
    }
    r
}

fn mod_inv(a: u32, p: u32) -> u32 {
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

fn is_irreducible_over_prime(m: &[u32], p: u32) -> bool {
    let n = m.len() - 1;
    if n == 0 {
        return false;
    }
    // try every monic divisor of degree 1..=n/2
    for d in 1..=n / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut cand = Vec::with_capacity(d + 1);
            let mut x = idx;
            for _ in 0..d {
                cand.push((x % p as u64) as u32);
                x /= p as u64;
            }
            cand.push(1);
            if dense_rem(m, &cand, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl FieldCtx {
    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1)
    }

    /// `F_{p^n}` with the default modulus: the monic irreducible of degree
    /// `n` whose coefficient index `c_0 + c_1 p + ... + c_{n-1} p^{n-1}` is
    /// smallest.
    pub fn new(p: u32, n: u32) -> Result<Self> {
        Self::check_size(p, n)?;
        let count = (p as u64).pow(n);
        for idx in 0..count {
            let mut m = Vec::with_capacity(n as usize + 1);
            let mut x = idx;
            for _ in 0..n {
                m.push((x % p as u64) as u32);
                x /= p as u64;
            }
            m.push(1);
            if is_irreducible_over_prime(&m, p) {
                return Self::build(p, m);
            }
        }
        Err(Error::BadModulus(n))
    }

    /// `F_p[a]/(modulus)`, coefficients low to high including the leading 1.
    pub fn with_modulus(p: u32, modulus: &[u32]) -> Result<Self> {
        if modulus.len() < 2 {
            return Err(Error::ZeroDegree);
        }
        let n = (modulus.len() - 1) as u32;
        Self::check_size(p, n)?;
        if *modulus.last().unwrap() != 1
            || modulus.iter().any(|&c| c >= p)
            || !is_irreducible_over_prime(modulus, p)
        {
            return Err(Error::BadModulus(n));
        }
        Self::build(p, modulus.to_vec())
    }

    fn check_size(p: u32, n: u32) -> Result<()> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 {
            return Err(Error::ZeroDegree);
        }
        match (p as u64).checked_pow(n) {
            Some(q) if q <= MAX_FIELD_SIZE => Ok(()),
            _ => Err(Error::FieldTooLarge { p, n }),
        }
    }

    fn build(p: u32, modulus: Vec<u32>) -> Result<Self> {
        let n = (modulus.len() - 1) as u32;
        let q = p.pow(n);
        let pow_p: Vec<u32> = (0..=n).map(|i| p.pow(i)).collect();
        let digits = |x: u32| -> Vec<u32> {
            let mut v = Vec::with_capacity(n as usize);
            let mut x = x;
            for _ in 0..n {
                v.push(x % p);
                x /= p;
            }
            v
        };
        let undigits = |v: &[u32]| -> u32 {
            v.iter().rev().fold(0u32, |acc, &c| acc * p + c)
        };
        let raw_mul = |a: u32, b: u32| -> u32 {
            let da = digits(a);
            let db = digits(b);
            let mut prod = vec![0u32; 2 * n as usize - 1];
            for (i, &x) in da.iter().enumerate() {
                for (j, &y) in db.iter().enumerate() {
                    prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
                }
            }
            let mut r = dense_rem(&prod, &modulus, p);
            r.resize(n as usize, 0);
            undigits(&r)
        };
        let raw_pow = |a: u32, mut e: u64| -> u32 {
            let mut result = 1u32;
            let mut base = a;
            while e > 0 {
                if e & 1 == 1 {
                    result = raw_mul(result, base);
                }
                base = raw_mul(base, base);
                e >>= 1;
            }
            result
        };

        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let generator = (1..q)
            .find(|&g| factors.iter().all(|&l| raw_pow(g, order / l) != 1))
            .ok_or(Error::BadModulus(n))?;

        let mut exp = Vec::with_capacity(2 * order as usize);
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..order as u32 {
            exp.push(x);
            log[x as usize] = i;
            x = raw_mul(x, generator);
        }
        let first = exp.clone();
        exp.extend(first);

        let neg: Vec<u32> = (0..q)
            .map(|x| undigits(&digits(x).iter().map(|&c| (p - c) % p).collect::<Vec<_>>()))
            .collect();
        let mut inv = vec![0u32; q as usize];
        for x in 1..q {
            let l = log[x as usize] as u64;
            inv[x as usize] = exp[((order - l) % order) as usize];
        }
        let frob: Vec<u32> = (0..q)
            .map(|x| {
                if x == 0 {
                    0
                } else {
                    exp[((log[x as usize] as u64 * p as u64) % order) as usize]
                }
            })
            .collect();

        let add_table = if n > 1 && q <= ADD_TABLE_LIMIT {
            let mut t = vec![0u16; (q * q) as usize];
            for a in 0..q {
                let da = digits(a);
                for b in 0..q {
                    let db = digits(b);
                    let s: Vec<u32> = da.iter().zip(&db).map(|(&x, &y)| (x + y) % p).collect();
                    t[(a * q + b) as usize] = undigits(&s) as u16;
                }
            }
            Some(t)
        } else {
            None
        };

        Ok(FieldCtx {
            inner: Arc::new(Inner {
                p,
                n,
                q,
                modulus,
                pow_p,
                add_table,
                exp,
                log,
                neg,
                inv,
                frob,
            }),
        })
    }

    pub fn p(&self) -> u32 {
        self.inner.p
    }

    pub fn n(&self) -> u32 {
        self.inner.n
    }

    pub fn q(&self) -> u32 {
        self.inner.q
    }

    /// Modulus coefficients, low to high, including the leading 1.
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    pub fn zero(&self) -> FqElem {
        FqElem::ZERO
    }

    pub fn one(&self) -> FqElem {
        FqElem::ONE
    }

    pub fn from_index(&self, i: u32) -> Option<FqElem> {
        (i < self.inner.q).then_some(FqElem(i))
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, i: i64) -> FqElem {
        FqElem(i.rem_euclid(self.inner.p as i64) as u32)
    }

    pub fn from_digits(&self, digits: &[u32]) -> Result<FqElem> {
        if digits.len() > self.inner.n as usize || digits.iter().any(|&d| d >= self.inner.p) {
            return Err(Error::InvalidArgument(format!(
                "{digits:?} is not a coefficient vector over F_{}",
                self.inner.p
            )));
        }
        Ok(FqElem(digits.iter().rev().fold(0, |acc, &c| acc * self.inner.p + c)))
    }

    pub fn digits(&self, x: FqElem) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.inner.n as usize);
        let mut i = x.0;
        for _ in 0..self.inner.n {
            v.push(i % self.inner.p);
            i /= self.inner.p;
        }
        v
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.inner.q).map(FqElem)
    }

    /// A generator of the multiplicative group.
    pub fn generator(&self) -> FqElem {
        FqElem(self.inner.exp[1 % self.inner.exp.len()])
    }

    #[inline]
    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        let inner = &*self.inner;
        if inner.n == 1 {
            let s = a.0 + b.0;
            return FqElem(if s >= inner.p { s - inner.p } else { s });
        }
        if let Some(t) = &inner.add_table {
            return FqElem(t[(a.0 * inner.q + b.0) as usize] as u32);
        }
        let (mut x, mut y, mut out) = (a.0, b.0, 0u32);
        for i in 0..inner.n as usize {
            let d = (x % inner.p + y % inner.p) % inner.p;
            out += d * inner.pow_p[i];
            x /= inner.p;
            y /= inner.p;
        }
        FqElem(out)
    }

    #[inline]
    pub fn neg(&self, a: FqElem) -> FqElem {
        FqElem(self.inner.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        if a.0 == 0 || b.0 == 0 {
            return FqElem::ZERO;
        }
        let inner = &*self.inner;
        FqElem(inner.exp[(inner.log[a.0 as usize] + inner.log[b.0 as usize]) as usize])
    }

    pub fn inv(&self, a: FqElem) -> Option<FqElem> {
        (!a.is_zero()).then(|| FqElem(self.inner.inv[a.0 as usize]))
    }

    pub fn div(&self, a: FqElem, b: FqElem) -> Option<FqElem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: FqElem, e: u64) -> FqElem {
        if e == 0 {
            return FqElem::ONE;
        }
        if a.is_zero() {
            return FqElem::ZERO;
        }
        let order = (self.inner.q - 1) as u64;
        let l = self.inner.log[a.0 as usize] as u64;
        let idx = ((l as u128 * (e % order) as u128) % order as u128) as usize;
        FqElem(self.inner.exp[idx])
    }

    /// `a^p`.
    #[inline]
    pub fn frob(&self, a: FqElem) -> FqElem {
        FqElem(self.inner.frob[a.0 as usize])
    }

    /// `a^(p^k)`.
    pub fn frob_pow(&self, a: FqElem, k: u64) -> FqElem {
        let k = k % self.inner.n as u64;
        (0..k).fold(a, |x, _| self.frob(x))
    }

    /// The unique `b` with `b^(p^k) = a`.
    pub fn frob_root(&self, a: FqElem, k: u64) -> FqElem {
        let n = self.inner.n as u64;
        self.frob_pow(a, (n - k % n) % n)
    }

    pub fn in_prime_field(&self, a: FqElem) -> bool {
        a.0 < self.inner.p
    }

    /// Human-readable form: the residue for prime fields, a polynomial in `a`
    /// otherwise.
    pub fn fmt_elem(&self, x: FqElem) -> String {
        if self.inner.n == 1 {
            return x.0.to_string();
        }
        let d = self.digits(x);
        let mut parts = Vec::new();
        for (i, &c) in d.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let s = match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "a".to_string(),
                (1, c) => format!("{c}a"),
                (i, 1) => format!("a^{i}"),
                (i, c) => format!("{c}a^{i}"),
            };
            parts.push(s);
        }
        if parts.is_empty() {
            "0".into()
        } else if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            format!("({})", parts.join("+"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_moduli() {
        assert_eq!(FieldCtx::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(FieldCtx::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(FieldCtx::new(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(FieldCtx::new(5, 2).unwrap().modulus(), &[2, 0, 1]);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(FieldCtx::new(4, 1).unwrap_err(), Error::NotPrime(4));
        assert_eq!(FieldCtx::new(3, 0).unwrap_err(), Error::ZeroDegree);
        assert!(matches!(FieldCtx::new(3, 11), Err(Error::FieldTooLarge { .. })));
        assert_eq!(FieldCtx::with_modulus(3, &[2, 0, 1]).unwrap_err(), Error::BadModulus(2));
    }

    fn check_axioms(f: &FieldCtx) {
        let els: Vec<_> = f.elements().collect();
        for &a in &els {
            assert_eq!(f.add(a, f.neg(a)), FqElem::ZERO);
            if !a.is_zero() {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), FqElem::ONE);
            }
            assert_eq!(f.frob_root(f.frob(a), 1), a);
            assert_eq!(f.pow(a, f.q() as u64), a);
            for &b in &els {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                // Frobenius is additive
                assert_eq!(f.frob(f.add(a, b)), f.add(f.frob(a), f.frob(b)));
                for &c in els.iter().step_by(3) {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn field_axioms_small_fields() {
        for (p, n) in [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2), (5, 2), (2, 3)] {
            check_axioms(&FieldCtx::new(p, n).unwrap());
        }
    }

    #[test]
    fn digitwise_addition_matches_table() {
        // 3^7 = 2187 is above the table limit
        let f = FieldCtx::new(3, 7).unwrap();
        let x = f.from_digits(&[1, 2, 0, 1, 2, 2, 1]).unwrap();
        let y = f.from_digits(&[2, 2, 1, 0, 1, 0, 1]).unwrap();
        assert_eq!(f.digits(f.add(x, y)), vec![0, 1, 1, 1, 0, 2, 2]);
        assert_eq!(f.sub(f.add(x, y), y), x);
    }
}
