//! Exact arithmetic in GF(p^h).
//!
//! Elements are canonical integers in `[0, q)`: the base-p digits of the
//! index are the coefficients of the polynomial residue, lowest degree first.
//! So in GF(4) with modulus x²+x+1 the class of x is `Elem(2)` and
//! x² = x + 1 is `Elem(3)`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

/// Default upper bound on the field order.
pub const DEFAULT_ORDER_BOUND: u64 = 1 << 20;

/// Multiplication and inversion tables are built up to this order.
const TABLE_BOUND: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
#[serde(transparent)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Tables {
    /// exp[i] = g^i for i in [0, 2(q-1)), so products never need a reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
    inv: Vec<u32>,
}

struct Inner {
    p: u32,
    h: u32,
    q: u32,
    /// Lower coefficients c_0..c_{h-1} of the monic modulus x^h + ... + c_0.
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

/// The field GF(p^h) together with its defining modulus.
///
/// Cheap to clone; all clones share the same tables.
#[derive(Clone)]
pub struct FieldSpec(Arc<Inner>);

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.h)
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.h == other.0.h && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FieldSpec {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits a prime power into (p, h).
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    let mut rest = q;
    let mut h = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        h += 1;
    }
    (rest == 1).then_some((p as u32, h))
}

// --- polynomials over GF(p), coefficient vectors lowest degree first ---

fn trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn inv_mod_p(a: u32, p: u32) -> u32 {
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (p as i64, a as i64);
    while new_r != 0 {
        let qt = r / new_r;
        (t, new_t) = (new_t, t - qt * new_t);
        (r, new_r) = (new_r, r - qt * new_r);
    }
    t.rem_euclid(p as i64) as u32
}

/// Remainder of `a` modulo `b` (b non-zero, trimmed).
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    poly_divrem(a, b, p).1
}

fn poly_divrem(a: &[u32], b: &[u32], p: u32) -> (Vec<u32>, Vec<u32>) {
    let mut r: Vec<u32> = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = inv_mod_p(b[db], p) as u64;
    if r.len() < b.len() {
        return (vec![], r);
    }
    let mut quot = vec![0u32; r.len() - db];
    let p64 = p as u64;
    for k in (db..r.len()).rev() {
        let c = r[k] as u64 * lead_inv % p64;
        if c == 0 {
            continue;
        }
        quot[k - db] = c as u32;
        for (i, &bi) in b.iter().enumerate() {
            let idx = k - db + i;
            r[idx] = ((r[idx] as u64 + p64 - c * bi as u64 % p64) % p64) as u32;
        }
    }
    trim(&mut r);
    trim(&mut quot);
    (quot, r)
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let p64 = p as u64;
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p64;
        }
    }
    let mut v: Vec<u32> = out.into_iter().map(|c| c as u32).collect();
    trim(&mut v);
    v
}

fn poly_sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let n = a.len().max(b.len());
    let mut v: Vec<u32> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut v);
    v
}

fn monic_from_index(idx: u64, degree: u32, p: u32) -> Vec<u32> {
    let mut v = digits_of(idx, degree, p);
    v.push(1);
    v
}

fn digits_of(mut idx: u64, len: u32, p: u32) -> Vec<u32> {
    (0..len)
        .map(|_| {
            let d = (idx % p as u64) as u32;
            idx /= p as u64;
            d
        })
        .collect()
}

/// Trial division by every monic polynomial of degree 1..=deg/2.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() as u32 - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d);
        for idx in 0..count {
            let divisor = monic_from_index(idx, d, p);
            if poly_rem(poly, &divisor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl FieldSpec {
    /// GF(p^h) with the default order bound.
    pub fn new(p: u32, h: u32) -> Result<Self> {
        Self::with_bound(p, h, DEFAULT_ORDER_BOUND)
    }

    /// GF(q) for a prime power q.
    pub fn of_order(q: u64) -> Result<Self> {
        let (p, h) = prime_power(q).ok_or(Error::NotPrime(q))?;
        Self::new(p, h)
    }

    pub fn with_bound(p: u32, h: u32, bound: u64) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if h == 0 {
            return Err(Error::ZeroDegree);
        }
        let q = (p as u64)
            .checked_pow(h)
            .filter(|&q| q <= bound && q <= u32::MAX as u64)
            .ok_or(Error::FieldTooLarge {
                p: p as u64,
                h,
                bound,
            })?;

        // Smallest monic irreducible, ordering lower coefficients as a base-p
        // number with c_{h-1} most significant. For h = 1 this is x itself.
        let modulus = (0..q)
            .map(|idx| monic_from_index(idx, h, p))
            .find(|m| is_irreducible(m, p))
            .expect("an irreducible polynomial of every degree exists");
        let modulus = modulus[..h as usize].to_vec();

        let mut inner = Inner {
            p,
            h,
            q: q as u32,
            modulus,
            tables: None,
        };
        if q <= TABLE_BOUND {
            inner.tables = Some(build_tables(&inner));
        }
        Ok(FieldSpec(Arc::new(inner)))
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.0.p
    }

    #[inline]
    pub fn h(&self) -> u32 {
        self.0.h
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.0.q
    }

    #[inline]
    pub fn is_even(&self) -> bool {
        self.0.p == 2
    }

    /// Full coefficient list of the modulus, lowest degree first, including
    /// the leading 1.
    pub fn modulus(&self) -> Vec<u32> {
        let mut m = self.0.modulus.clone();
        m.push(1);
        m
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.0.q).map(Elem)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Elem> + Clone {
        (1..self.0.q).map(Elem)
    }

    pub fn elem(&self, index: u64) -> Result<Elem> {
        if index < self.0.q as u64 {
            Ok(Elem(index as u32))
        } else {
            Err(Error::ElementOutOfRange(index))
        }
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, k: i64) -> Elem {
        Elem(k.rem_euclid(self.0.p as i64) as u32)
    }

    fn digits(&self, a: Elem) -> Vec<u32> {
        digits_of(a.0 as u64, self.0.h, self.0.p)
    }

    fn elem_from_digits(&self, d: &[u32]) -> Elem {
        let mut idx = 0u64;
        for &c in d.iter().rev() {
            idx = idx * self.0.p as u64 + c as u64;
        }
        Elem(idx as u32)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let inner = &*self.0;
        if inner.p == 2 {
            Elem(a.0 ^ b.0)
        } else if inner.h == 1 {
            let s = a.0 + b.0;
            Elem(if s >= inner.p { s - inner.p } else { s })
        } else {
            let (mut x, mut y) = (a.0, b.0);
            let (mut out, mut place) = (0u32, 1u32);
            for _ in 0..inner.h {
                let d = (x % inner.p + y % inner.p) % inner.p;
                out += d * place;
                place = place.wrapping_mul(inner.p);
                x /= inner.p;
                y /= inner.p;
            }
            Elem(out)
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        let inner = &*self.0;
        if inner.p == 2 {
            a
        } else if inner.h == 1 {
            Elem(if a.0 == 0 { 0 } else { inner.p - a.0 })
        } else {
            let d: Vec<u32> = self
                .digits(a)
                .into_iter()
                .map(|c| (inner.p - c) % inner.p)
                .collect();
            self.elem_from_digits(&d)
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        match &self.0.tables {
            Some(t) => Elem(t.exp[(t.log[a.index()] + t.log[b.index()]) as usize]),
            None => self.mul_slow(a, b),
        }
    }

    fn mul_slow(&self, a: Elem, b: Elem) -> Elem {
        let prod = poly_mul(&self.digits(a), &self.digits(b), self.0.p);
        let r = poly_rem(&prod, &self.modulus(), self.0.p);
        self.elem_from_digits(&r)
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.0 == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(match &self.0.tables {
            Some(t) => Elem(t.inv[a.index()]),
            None => self.inv_euclid(a),
        })
    }

    /// Extended Euclid in GF(p)[x] against the modulus.
    fn inv_euclid(&self, a: Elem) -> Elem {
        let p = self.0.p;
        let (mut r0, mut r1) = (self.modulus(), {
            let mut d = self.digits(a);
            trim(&mut d);
            d
        });
        let (mut s0, mut s1): (Vec<u32>, Vec<u32>) = (vec![], vec![1]);
        while !r1.is_empty() {
            let (quot, rem) = poly_divrem(&r0, &r1, p);
            let s2 = poly_sub(&s0, &poly_mul(&quot, &s1, p), p);
            (r0, r1) = (r1, rem);
            (s0, s1) = (s1, s2);
        }
        // r0 is a non-zero constant.
        let c = inv_mod_p(r0[0], p);
        let s: Vec<u32> = s0
            .iter()
            .map(|&x| (x as u64 * c as u64 % p as u64) as u32)
            .collect();
        let s = poly_rem(&s, &self.modulus(), p);
        self.elem_from_digits(&s)
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = Elem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// a + a^p + ... + a^{p^{h-1}}, an element of the prime subfield.
    pub fn absolute_trace(&self, a: Elem) -> Elem {
        let mut acc = a;
        let mut t = a;
        for _ in 1..self.0.h {
            t = self.pow(t, self.0.p as u64);
            acc = self.add(acc, t);
        }
        acc
    }

    pub fn is_square(&self, a: Elem) -> bool {
        a.is_zero() || self.is_even() || self.pow(a, (self.0.q as u64 - 1) / 2) == Elem::ONE
    }

    /// Whether multiplication and inversion run from lookup tables.
    pub fn has_tables(&self) -> bool {
        self.0.tables.is_some()
    }
}

fn build_tables(inner: &Inner) -> Tables {
    let q = inner.q as usize;
    let p = inner.p;
    let mut modulus = inner.modulus.clone();
    modulus.push(1);
    let mul = |a: u32, b: u32| -> u32 {
        let da = digits_of(a as u64, inner.h, p);
        let db = digits_of(b as u64, inner.h, p);
        let r = poly_rem(&poly_mul(&da, &db, p), &modulus, p);
        let mut idx = 0u64;
        for &c in r.iter().rev() {
            idx = idx * p as u64 + c as u64;
        }
        idx as u32
    };
    let order = q - 1;
    let mut exp = vec![0u32; 2 * order.max(1)];
    'search: for g in 1..q as u32 {
        let mut x = 1u32;
        for (i, slot) in exp.iter_mut().take(order).enumerate() {
            if i > 0 && x == 1 {
                continue 'search;
            }
            *slot = x;
            x = mul(x, g);
        }
        if x == 1 {
            break;
        }
    }
    for i in order..2 * order {
        exp[i] = exp[i - order];
    }
    let mut log = vec![0u32; q];
    for (i, &v) in exp.iter().take(order).enumerate() {
        log[v as usize] = i as u32;
    }
    let mut inv = vec![0u32; q];
    for a in 1..q {
        inv[a] = exp[(order - log[a] as usize) % order];
    }
    Tables { exp, log, inv }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_fields() {
        let f = FieldSpec::new(2, 1).unwrap();
        assert_eq!(f.q(), 2);
        assert_eq!(f.modulus(), vec![0, 1]);
        assert_eq!(f.add(Elem(1), Elem(1)), Elem(0));
        let f3 = FieldSpec::new(3, 1).unwrap();
        assert_eq!(f3.q(), 3);
        assert_eq!(f3.inv(Elem(2)).unwrap(), Elem(2));
    }

    #[test]
    fn gf4_modulus_and_products() {
        let f = FieldSpec::new(2, 2).unwrap();
        assert_eq!(f.q(), 4);
        assert_eq!(f.modulus(), vec![1, 1, 1]);
        let g = Elem(2);
        assert_eq!(f.mul(g, g), Elem(3));
        assert_eq!(f.absolute_trace(g), Elem(1));
        assert_eq!(f.absolute_trace(Elem(1)), Elem(0));
    }

    #[test]
    fn gf8_uses_x3_x_1() {
        let f = FieldSpec::new(2, 3).unwrap();
        assert_eq!(f.modulus(), vec![1, 1, 0, 1]);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(FieldSpec::new(4, 1).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(
            FieldSpec::new(2, 21),
            Err(Error::FieldTooLarge { .. })
        ));
        assert!(matches!(
            FieldSpec::with_bound(3, 3, 26),
            Err(Error::FieldTooLarge { .. })
        ));
        let f = FieldSpec::new(5, 1).unwrap();
        assert_eq!(f.inv(Elem::ZERO), Err(Error::ZeroInverse));
        assert!(f.elem(5).is_err());
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }

    fn check_axioms(f: &FieldSpec) {
        let els: Vec<Elem> = f.elements().collect();
        for &a in &els {
            assert_eq!(f.pow(a, f.q() as u64), a, "Frobenius in {f:?}");
            assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
            if !a.is_zero() {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
            }
            for &b in &els {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
            }
        }
        // associativity and distributivity on a strided subset keeps this cheap
        let step = (els.len() / 16).max(1);
        for &a in els.iter().step_by(step) {
            for &b in els.iter().step_by(step) {
                for &c in &els {
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn axioms_small_fields() {
        for (p, h) in [
            (2, 1),
            (2, 2),
            (2, 3),
            (2, 4),
            (3, 1),
            (3, 2),
            (5, 1),
            (5, 2),
            (7, 1),
            (2, 6),
        ] {
            check_axioms(&FieldSpec::new(p, h).unwrap());
        }
    }

    #[test]
    fn slow_path_matches_tables() {
        let f = FieldSpec::new(3, 3).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.mul(a, b), f.mul_slow(a, b));
            }
            if !a.is_zero() {
                assert_eq!(f.inv(a).unwrap(), f.inv_euclid(a));
            }
        }
    }

    #[test]
    fn large_field_without_tables() {
        let f = FieldSpec::new(2, 17).unwrap();
        assert!(!f.has_tables());
        for a in [1u32, 2, 3, 12345, 131071] {
            let a = Elem(a);
            assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
            assert_eq!(f.pow(a, f.q() as u64), a);
        }
        let t = f.absolute_trace(Elem(777));
        assert!(t.0 < 2);
    }

    #[test]
    fn squares_in_odd_fields() {
        let f = FieldSpec::new(3, 1).unwrap();
        assert!(f.is_square(Elem(1)));
        assert!(!f.is_square(Elem(2)));
        let f9 = FieldSpec::new(3, 2).unwrap();
        let squares = f9.nonzero().filter(|&a| f9.is_square(a)).count();
        assert_eq!(squares, 4);
    }
}
