//! Arithmetic in small finite fields `F_q`, `q = p^k <= 16`.
//!
//! An element is stored as a code in `[0, q)` whose base-`p` digits are the
//! coefficients of a polynomial of degree `< k` (least significant digit is
//! the constant term). All four operations go through precomputed `q x q`
//! tables, which is what the matrix layer needs to stay cheap.

use serde::Serialize;
use std::fmt;

use crate::error::{Error, Result};

/// Largest field order handled by the table-driven representation.
pub const MAX_Q: u32 = 16;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct FieldElem(u8);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    #[inline]
    pub const fn from_code(code: u8) -> Self {
        FieldElem(code)
    }

    #[inline]
    pub const fn code(self) -> u8 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A concrete model of `F_q`: characteristic, degree, defining modulus and
/// a multiplicative generator, together with the operation tables.
#[derive(Clone, Debug)]
pub struct Field {
    p: u32,
    k: u32,
    q: u32,
    /// Coefficients `m_0 .. m_{k-1}` of the monic modulus `t^k + ... + m_0`.
    modulus: Vec<u8>,
    generator: FieldElem,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q && self.modulus == other.modulus
    }
}

impl Eq for Field {}

impl Field {
    /// Builds `F_{p^k}` with the smallest monic irreducible modulus (ordered
    /// by the integer whose base-`p` digits are the coefficients, constant
    /// term least significant) and the smallest generator by code.
    pub fn new(p: u32, k: u32) -> Result<Field> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if k == 0 {
            return Err(Error::Precondition("extension degree must be >= 1".into()));
        }
        let q = (p as u64).checked_pow(k).unwrap_or(u64::MAX);
        if q > MAX_Q as u64 {
            return Err(Error::UnsupportedField(q));
        }
        let q = q as u32;
        let modulus = if k == 1 {
            vec![0]
        } else {
            (0..q)
                .map(|code| digits(code, p, k))
                .find(|low| {
                    let mut poly: Vec<u32> = low.iter().map(|&d| d as u32).collect();
                    poly.push(1);
                    is_irreducible_mod_p(&poly, p)
                })
                .ok_or_else(|| Error::Internal(format!("no irreducible polynomial of degree {k} over F_{p}")))?
        };

        let qs = q as usize;
        let mut add = vec![0u8; qs * qs];
        let mut mul = vec![0u8; qs * qs];
        for a in 0..q {
            let da = digits(a, p, k);
            for b in 0..q {
                let db = digits(b, p, k);
                let sum: Vec<u8> = da
                    .iter()
                    .zip(&db)
                    .map(|(&x, &y)| ((x as u32 + y as u32) % p) as u8)
                    .collect();
                add[a as usize * qs + b as usize] = undigits(&sum, p);
                mul[a as usize * qs + b as usize] = undigits(&poly_mulmod(&da, &db, &modulus, p), p);
            }
        }
        let mut neg = vec![0u8; qs];
        let mut inv = vec![0u8; qs];
        for a in 0..qs {
            for b in 0..qs {
                if add[a * qs + b] == 0 {
                    neg[a] = b as u8;
                }
                if mul[a * qs + b] == 1 {
                    inv[a] = b as u8;
                }
            }
        }

        let mut field = Field {
            p,
            k,
            q,
            modulus,
            generator: FieldElem::ONE,
            add,
            mul,
            neg,
            inv,
        };
        let generator = (1..q)
            .map(|c| FieldElem(c as u8))
            .find(|&x| field.mult_order(x).ok() == Some((q - 1) as u64))
            .ok_or_else(|| Error::Internal("multiplicative group has no generator".into()))?;
        field.generator = generator;
        Ok(field)
    }

    /// Builds the field of order `q`, which must be a supported prime power.
    pub fn with_order(q: u32) -> Result<Field> {
        match classify_prime_power(q as u64)? {
            PrimePower::Prime(p) => Field::new(p as u32, 1),
            PrimePower::Power { p, e } => Field::new(p as u32, e),
            PrimePower::NotPrimePower => Err(Error::NotPrimePower(q as u64)),
        }
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.k
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients, constant term first, including the leading 1.
    pub fn modulus(&self) -> Vec<u8> {
        let mut m = self.modulus.clone();
        m.push(1);
        m
    }

    pub fn generator(&self) -> FieldElem {
        self.generator
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + Clone {
        (0..self.q).map(|c| FieldElem(c as u8))
    }

    pub fn nonzero(&self) -> impl Iterator<Item = FieldElem> + Clone {
        (1..self.q).map(|c| FieldElem(c as u8))
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElem {
        FieldElem(n.rem_euclid(self.p as i64) as u8)
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(self.add[a.0 as usize * self.q as usize + b.0 as usize])
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        FieldElem(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(self.mul[a.0 as usize * self.q as usize + b.0 as usize])
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            Err(Error::ZeroInverse)
        } else {
            Ok(FieldElem(self.inv[a.0 as usize]))
        }
    }

    /// Table inverse for callers that have already excluded zero.
    #[inline]
    pub(crate) fn inv_nonzero(&self, a: FieldElem) -> FieldElem {
        debug_assert!(!a.is_zero());
        FieldElem(self.inv[a.0 as usize])
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Square-and-multiply power; `pow(0, 0) = 1`.
    pub fn pow(&self, a: FieldElem, mut e: u64) -> FieldElem {
        let mut base = a;
        let mut acc = FieldElem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Inverse computed as `a^(q-2)`, kept as an independent route to the
    /// table inverse.
    pub fn inv_by_pow(&self, a: FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(a, self.q as u64 - 2))
    }

    pub fn mult_order(&self, a: FieldElem) -> Result<u64> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let mut m = self.q as u64 - 1;
        for (r, _) in factorize(m) {
            while m % r == 0 && self.pow(a, m / r) == FieldElem::ONE {
                m /= r;
            }
        }
        Ok(m)
    }

    /// `generator^((q-1)/m)`, an element of multiplicative order exactly `m`.
    pub fn element_of_order(&self, m: u64) -> Result<FieldElem> {
        let order = self.q as u64 - 1;
        if m == 0 || order % m != 0 {
            return Err(Error::OrderDoesNotDivide { m, order });
        }
        Ok(self.pow(self.generator, order / m))
    }

    /// Smallest `e >= 0` with `base^e = a`, if any.
    pub fn log(&self, base: FieldElem, a: FieldElem) -> Option<u64> {
        let mut acc = FieldElem::ONE;
        for e in 0..self.q as u64 {
            if acc == a {
                return Some(e);
            }
            acc = self.mul(acc, base);
        }
        None
    }

    /// Addition and multiplication tables as rows of codes.
    pub fn tables(&self) -> (Vec<Vec<u8>>, Vec<Vec<u8>>) {
        let qs = self.q as usize;
        let rows = |t: &Vec<u8>| t.chunks(qs).map(|r| r.to_vec()).collect::<Vec<_>>();
        (rows(&self.add), rows(&self.mul))
    }
}

fn digits(code: u32, p: u32, k: u32) -> Vec<u8> {
    let mut c = code;
    (0..k)
        .map(|_| {
            let d = (c % p) as u8;
            c /= p;
            d
        })
        .collect()
}

fn undigits(ds: &[u8], p: u32) -> u8 {
    ds.iter().rev().fold(0u32, |acc, &d| acc * p + d as u32) as u8
}

/// Product of two residues modulo the monic polynomial whose lower
/// coefficients are `low`.
fn poly_mulmod(a: &[u8], b: &[u8], low: &[u8], p: u32) -> Vec<u8> {
    let k = low.len();
    let mut prod = vec![0u32; 2 * k];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u32 * y as u32) % p;
        }
    }
    for deg in (k..2 * k).rev() {
        let c = prod[deg];
        if c != 0 {
            prod[deg] = 0;
            for (i, &m) in low.iter().enumerate() {
                let idx = deg - k + i;
                prod[idx] = (prod[idx] + (p - c) * m as u32) % p;
            }
        }
    }
    prod[..k].iter().map(|&d| d as u8).collect()
}

/// Remainder of `num` by the monic `den`, coefficients constant-first.
fn poly_rem_mod_p(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    while r.len() > dd {
        let lead = *r.last().unwrap() % p;
        let shift = r.len() - 1 - dd;
        if lead != 0 {
            for (i, &d) in den.iter().enumerate() {
                r[shift + i] = (r[shift + i] + (p - lead) * d % p) % p;
            }
        }
        r.pop();
    }
    r
}

/// Irreducibility of a monic polynomial over `F_p` by trial division with
/// every monic polynomial of degree at most half its degree.
pub fn is_irreducible_mod_p(poly: &[u32], p: u32) -> bool {
    let n = poly.len() - 1;
    for d in 1..=n / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut den: Vec<u32> = digits(code as u32, p, d as u32).into_iter().map(u32::from).collect();
            den.push(1);
            if poly_rem_mod_p(poly, &den, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    n >= 1
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PrimePower {
    Prime(u64),
    Power { p: u64, e: u32 },
    NotPrimePower,
}

impl PrimePower {
    pub fn is_prime_power(self) -> bool {
        !matches!(self, PrimePower::NotPrimePower)
    }
}

pub fn classify_prime_power(n: u64) -> Result<PrimePower> {
    if n < 2 {
        return Err(Error::TooSmall(n));
    }
    let f = factorize(n);
    Ok(match f.as_slice() {
        [(p, 1)] => PrimePower::Prime(*p),
        [(p, e)] => PrimePower::Power { p: *p, e: *e },
        _ => PrimePower::NotPrimePower,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn e(c: u8) -> FieldElem {
        FieldElem::from_code(c)
    }

    #[test]
    fn moduli_and_generators() {
        let f4 = Field::new(2, 2).unwrap();
        assert_eq!(f4.modulus(), vec![1, 1, 1]);
        let f3 = Field::new(3, 1).unwrap();
        assert_eq!(f3.modulus(), vec![0, 1]);
        assert_eq!(f3.generator(), e(2));
        let f9 = Field::new(3, 2).unwrap();
        assert_eq!(f9.q(), 9);
        assert_eq!(f9.modulus(), vec![1, 0, 1]);
        assert_eq!(Field::new(2, 3).unwrap().modulus(), vec![1, 1, 0, 1]);
        assert_eq!(Field::new(2, 4).unwrap().modulus(), vec![1, 1, 0, 0, 1]);
    }

    /// Exhaustive scan: the first monic quadratic over F_3 without a root in
    /// code order is t^2 + 1.
    #[test]
    fn f9_modulus_by_root_scan() {
        let first = (0..9u32)
            .map(|c| (c % 3, c / 3))
            .find(|&(c0, c1)| (0..3u32).all(|t| (t * t + c1 * t + c0) % 3 != 0))
            .unwrap();
        assert_eq!(first, (1, 0));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Field::new(4, 1), Err(Error::NotPrime(4)));
        assert_eq!(Field::new(5, 2), Err(Error::UnsupportedField(25)));
        assert_eq!(Field::new(17, 1), Err(Error::UnsupportedField(17)));
        assert!(matches!(Field::with_order(6), Err(Error::NotPrimePower(6))));
    }

    #[test]
    fn small_identities() {
        let f7 = Field::new(7, 1).unwrap();
        assert_eq!(f7.inv(e(3)).unwrap(), e(5));
        assert_eq!(f7.inv(FieldElem::ZERO), Err(Error::ZeroInverse));
        let f4 = Field::new(2, 2).unwrap();
        // t * (t + 1) = 1
        assert_eq!(f4.mul(e(2), e(3)), FieldElem::ONE);
    }

    #[test]
    fn orders() {
        let f5 = Field::new(5, 1).unwrap();
        assert_eq!(f5.mult_order(e(2)).unwrap(), 4);
        assert_eq!(f5.element_of_order(2).unwrap(), e(4));
        assert!(f5.mult_order(FieldElem::ZERO).is_err());
        let f4 = Field::new(2, 2).unwrap();
        assert_eq!(f4.mult_order(e(2)).unwrap(), 3);
        let x = f4.element_of_order(3).unwrap();
        assert!(x == e(2) || x == e(3));
        let f9 = Field::new(3, 2).unwrap();
        assert_eq!(f9.mult_order(f9.generator()).unwrap(), 8);
        let f7 = Field::new(7, 1).unwrap();
        let x = f7.element_of_order(3).unwrap();
        assert!(x == e(2) || x == e(4));
        assert!(matches!(f7.element_of_order(4), Err(Error::OrderDoesNotDivide { .. })));
    }

    #[test]
    fn order_distribution_matches_phi() {
        for q in [2u32, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
            let f = Field::with_order(q).unwrap();
            let n = q as u64 - 1;
            let gens = f.nonzero().filter(|&x| f.mult_order(x).unwrap() == n).count();
            assert_eq!(gens as u64, euler_phi(n), "q = {q}");
            for x in f.nonzero() {
                assert_eq!(n % f.mult_order(x).unwrap(), 0);
                assert_eq!(f.pow(x, n), FieldElem::ONE);
                assert_eq!(f.mul(x, f.inv(x).unwrap()), FieldElem::ONE);
                assert_eq!(f.inv_by_pow(x).unwrap(), f.inv(x).unwrap());
            }
        }
    }

    #[test]
    fn prime_power_classification() {
        assert_eq!(classify_prime_power(8).unwrap(), PrimePower::Power { p: 2, e: 3 });
        assert_eq!(classify_prime_power(6).unwrap(), PrimePower::NotPrimePower);
        assert_eq!(classify_prime_power(7).unwrap(), PrimePower::Prime(7));
        assert_eq!(classify_prime_power(1), Err(Error::TooSmall(1)));
    }

    /// If q and q - 1 are both prime powers then q is a Fermat prime, q - 1
    /// is a Mersenne prime, or q = 9.
    #[test]
    fn consecutive_prime_powers() {
        let is_fermat_prime = |n: u64| is_prime(n) && (n - 1).is_power_of_two();
        let is_mersenne_prime = |n: u64| is_prime(n) && (n + 1).is_power_of_two();
        for q in 3..=(1u64 << 16) {
            let both = classify_prime_power(q).unwrap().is_prime_power()
                && classify_prime_power(q - 1).unwrap().is_prime_power();
            if both {
                assert!(is_fermat_prime(q) || is_mersenne_prime(q - 1) || q == 9, "q = {q}");
            }
        }
    }

    const ORDERS: [u32; 10] = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16];

    proptest! {
        #[test]
        fn field_axioms(qi in 0usize..ORDERS.len(), a in 0u8..16, b in 0u8..16, c in 0u8..16) {
            let f = Field::with_order(ORDERS[qi]).unwrap();
            let q = f.q() as u8;
            let (a, b, c) = (e(a % q), e(b % q), e(c % q));
            prop_assert_eq!(f.add(a, f.add(b, c)), f.add(f.add(a, b), c));
            prop_assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
            prop_assert_eq!(f.add(a, b), f.add(b, a));
            prop_assert_eq!(f.mul(a, b), f.mul(b, a));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.sub(f.add(a, b), b), a);
            prop_assert_eq!(f.mul(a, FieldElem::ONE), a);
        }
    }
}
