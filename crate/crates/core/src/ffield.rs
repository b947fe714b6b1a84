//! Finite fields `F_q`, `q = p^e`, with table-driven arithmetic.
//!
//! Elements are plain integer codes in `[0, q)`. The base-`p` digits of a
//! code are the coefficients of the element in the power basis of the field
//! modulus, constant term first, so `0` and `1` are always the additive and
//! multiplicative identities and a prime field is just arithmetic mod `p`.
//!
//! The modulus for `e > 1` is the first monic irreducible polynomial of
//! degree `e` when the non-leading coefficients are read as a base-`p`
//! integer (constant term least significant). Every run therefore agrees on
//! element codes, which keeps serialized matrices and subset masks portable.

use std::fmt;

use crate::error::{Error, Result};

/// A field element, identified by its canonical code.
pub type FieldElem = u16;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 16;

/// Fields up to this order get full `q x q` addition and multiplication tables.
const FULL_TABLE_ORDER: u32 = 256;

#[derive(Clone)]
enum MulTables {
    Full { add: Vec<u16>, mul: Vec<u16> },
    Log { exp: Vec<u16>, log: Vec<u32> },
}

/// An explicit description of `F_q` together with its arithmetic tables.
///
/// A `FieldSpec` is immutable after construction and is passed by reference
/// to every operation; several fields can coexist freely.
#[derive(Clone)]
pub struct FieldSpec {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    tables: MulTables,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q)
    }
}

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

/// Writes `q` as `p^e` with `p` prime, if possible.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

impl FieldSpec {
    /// Builds `F_{p^e}`.
    pub fn new(p: u64, e: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::ZeroExponent);
        }
        let q = p
            .checked_pow(e)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or_else(|| Error::size("field order", p.saturating_pow(e), MAX_ORDER))?;
        let (p, q) = (p as u32, q as u32);

        let modulus = if e == 1 {
            vec![0, 1]
        } else {
            first_irreducible(p, e as usize)
        };

        let mut field = FieldSpec {
            p,
            e,
            q,
            modulus,
            neg: Vec::new(),
            inv: Vec::new(),
            tables: MulTables::Full {
                add: Vec::new(),
                mul: Vec::new(),
            },
        };
        field.build_tables();
        Ok(field)
    }

    /// Builds the field of order `q`, which must be a prime power.
    pub fn from_order(q: u64) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        Self::new(p, e)
    }

    fn build_tables(&mut self) {
        let q = self.q as usize;
        self.neg = (0..q).map(|a| self.neg_slow(a as u32) as u16).collect();

        if self.q <= FULL_TABLE_ORDER {
            let mut add = vec![0u16; q * q];
            let mut mul = vec![0u16; q * q];
            for a in 0..q {
                for b in 0..q {
                    add[a * q + b] = self.add_slow(a as u32, b as u32) as u16;
                    mul[a * q + b] = self.mul_slow(a as u32, b as u32) as u16;
                }
            }
            let mut inv = vec![0u16; q];
            for a in 1..q {
                inv[a] = (1..q).find(|&b| mul[a * q + b] == 1).expect("field has inverses") as u16;
            }
            self.inv = inv;
            self.tables = MulTables::Full { add, mul };
        } else {
            let g = self.find_generator();
            let mut exp = vec![0u16; 2 * (q - 1)];
            let mut log = vec![0u32; q];
            let mut x = 1u32;
            for (i, slot) in exp.iter_mut().take(q - 1).enumerate() {
                *slot = x as u16;
                log[x as usize] = i as u32;
                x = self.mul_slow(x, g);
            }
            for i in q - 1..2 * (q - 1) {
                exp[i] = exp[i - (q - 1)];
            }
            let mut inv = vec![0u16; q];
            for a in 1..q {
                inv[a] = exp[(q - 1 - log[a] as usize) % (q - 1)];
            }
            self.inv = inv;
            self.tables = MulTables::Log { exp, log };
        }
    }

    fn find_generator(&self) -> u32 {
        let order = self.q - 1;
        let mut primes = Vec::new();
        let mut n = order;
        let mut r = 2;
        while r * r <= n {
            if n.is_multiple_of(r) {
                primes.push(r);
                while n.is_multiple_of(r) {
                    n /= r;
                }
            }
            r += 1;
        }
        if n > 1 {
            primes.push(n);
        }
        let pow = |mut g: u32, mut k: u32| {
            let mut acc = 1;
            while k > 0 {
                if k & 1 == 1 {
                    acc = self.mul_slow(acc, g);
                }
                g = self.mul_slow(g, g);
                k >>= 1;
            }
            acc
        };
        (2..self.q)
            .find(|&g| primes.iter().all(|&r| pow(g, order / r) != 1))
            .expect("multiplicative group is cyclic")
    }

    fn digits(&self, mut a: u32) -> Vec<u32> {
        let mut out = vec![0; self.e as usize];
        for d in out.iter_mut() {
            *d = a % self.p;
            a /= self.p;
        }
        out
    }

    fn pack_digits(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    fn add_slow(&self, a: u32, b: u32) -> u32 {
        if self.e == 1 {
            return (a + b) % self.p;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.pack_digits(&sum)
    }

    fn neg_slow(&self, a: u32) -> u32 {
        let d: Vec<u32> = self.digits(a).iter().map(|&x| (self.p - x) % self.p).collect();
        self.pack_digits(&d)
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        if self.e == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        let prod = poly_mul_mod_p(&self.digits(a), &self.digits(b), self.p);
        let rem = poly_rem_monic(prod, &self.modulus, self.p);
        let mut d = vec![0; self.e as usize];
        for (i, c) in rem.into_iter().enumerate().take(self.e as usize) {
            d[i] = c;
        }
        self.pack_digits(&d)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Coefficients of the defining polynomial, constant term first.
    /// For prime fields this is the unused placeholder `x`.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Field order written as `P` or `P^E`, the form accepted by the parsers.
    pub fn order_label(&self) -> String {
        if self.e == 1 {
            self.p.to_string()
        } else {
            format!("{}^{}", self.p, self.e)
        }
    }

    /// All elements in ascending code order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + Clone {
        (0..self.q).map(|a| a as FieldElem)
    }

    /// Nonzero elements in ascending code order.
    pub fn units(&self) -> impl Iterator<Item = FieldElem> + Clone {
        (1..self.q).map(|a| a as FieldElem)
    }

    pub fn contains(&self, a: u64) -> bool {
        a < self.q as u64
    }

    /// The image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, n: i64) -> FieldElem {
        n.rem_euclid(self.p as i64) as FieldElem
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        match &self.tables {
            MulTables::Full { add, .. } => add[a as usize * self.q as usize + b as usize],
            MulTables::Log { .. } => self.add_slow(a as u32, b as u32) as FieldElem,
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        match &self.tables {
            MulTables::Full { mul, .. } => mul[a as usize * self.q as usize + b as usize],
            MulTables::Log { exp, log } => {
                if a == 0 || b == 0 {
                    0
                } else {
                    exp[(log[a as usize] + log[b as usize]) as usize]
                }
            }
        }
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.inv[a as usize])
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElem, mut n: u64) -> FieldElem {
        let mut base = a;
        let mut acc: FieldElem = 1;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// Sum of `a_i * b_i`.
    #[inline]
    pub fn dot(&self, a: &[FieldElem], b: &[FieldElem]) -> FieldElem {
        a.iter().zip(b).fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }
}

fn poly_mul_mod_p(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

/// Remainder of `a` modulo the monic polynomial `m`, coefficients mod `p`.
fn poly_rem_monic(mut a: Vec<u32>, m: &[u32], p: u32) -> Vec<u32> {
    let dm = m.len() - 1;
    while a.len() > dm {
        let lead = a.pop().unwrap();
        if lead != 0 {
            let shift = a.len() - dm;
            for (k, &c) in m[..dm].iter().enumerate() {
                a[shift + k] = (a[shift + k] + (p - (lead * c) % p)) % p;
            }
        }
    }
    a
}

/// Monic polynomial of degree `deg` whose non-leading coefficients are the
/// base-`p` digits of `code`.
fn monic_from_code(code: u64, deg: usize, p: u32) -> Vec<u32> {
    let mut c = code;
    let mut out = Vec::with_capacity(deg + 1);
    for _ in 0..deg {
        out.push((c % p as u64) as u32);
        c /= p as u64;
    }
    out.push(1);
    out
}

fn is_irreducible_over_prime(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let g = monic_from_code(code, d, p);
            if poly_rem_monic(f.to_vec(), &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn first_irreducible(p: u32, e: usize) -> Vec<u32> {
    let count = (p as u64).pow(e as u32);
    (0..count)
        .map(|code| monic_from_code(code, e, p))
        .find(|f| is_irreducible_over_prime(f, p))
        .expect("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_fields() {
        let f2 = FieldSpec::new(2, 1).unwrap();
        assert_eq!(f2.elements().collect::<Vec<_>>(), vec![0, 1]);
        let f3 = FieldSpec::new(3, 1).unwrap();
        assert_eq!(f3.elements().collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(f3.inv(2).unwrap(), 2);
        assert_eq!(f3.mul(2, 2), 1);
        assert_eq!(f3.add(2, 2), 1);
    }

    #[test]
    fn f4_uses_x2_x_1() {
        let f4 = FieldSpec::new(2, 2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        assert_eq!(f4.elements().collect::<Vec<_>>(), vec![0, 1, 2, 3]);
        // x * x = x + 1
        assert_eq!(f4.mul(2, 2), 3);
        assert_eq!(f4.mul(2, 3), 1);
    }

    #[test]
    fn modulus_is_first_irreducible() {
        // F_9: x^2 + 1 is the first irreducible monic quadratic over F_3.
        assert_eq!(FieldSpec::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
        // F_8: x^3 + x + 1.
        assert_eq!(FieldSpec::new(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
        // F_16: x^4 + x + 1.
        assert_eq!(FieldSpec::new(2, 4).unwrap().modulus(), &[1, 1, 0, 0, 1]);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(FieldSpec::new(4, 1).unwrap_err(), Error::NotPrime(4));
        assert_eq!(FieldSpec::new(1, 1).unwrap_err(), Error::NotPrime(1));
        assert_eq!(FieldSpec::new(2, 0).unwrap_err(), Error::ZeroExponent);
        assert!(matches!(FieldSpec::new(2, 17), Err(Error::SizeExceeded { .. })));
        assert!(matches!(FieldSpec::new(257, 2), Err(Error::SizeExceeded { .. })));
        assert_eq!(FieldSpec::from_order(6).unwrap_err(), Error::NotPrimePower(6));
    }

    #[test]
    fn inverse_of_zero() {
        let f = FieldSpec::new(5, 1).unwrap();
        assert_eq!(f.inv(0), Err(Error::DivisionByZero));
    }

    #[test]
    fn from_order_factors() {
        let f = FieldSpec::from_order(9).unwrap();
        assert_eq!((f.p(), f.e(), f.q()), (3, 2, 9));
        assert_eq!(prime_power(16), Some((2, 4)));
        assert_eq!(prime_power(12), None);
    }

    #[test]
    fn log_tables_for_large_fields() {
        // 2^9 and 2^16 exceed the full-table threshold.
        for (p, e) in [(2, 9), (2, 16), (257, 1), (3, 6)] {
            let f = FieldSpec::new(p, e).unwrap();
            let q = f.q() as u64;
            for a in [1u16, 2, 3, (q - 1) as u16, (q / 2) as u16] {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                assert_eq!(f.pow(a, q - 1), 1);
                assert_eq!(f.add(a, f.neg(a)), 0);
            }
        }
    }

    #[test]
    fn log_and_full_tables_agree_on_shared_arithmetic() {
        // F_2^9 built with log tables; check multiplication against the slow path.
        let f = FieldSpec::new(2, 9).unwrap();
        for a in (0..f.q()).step_by(7) {
            for b in (0..f.q()).step_by(11) {
                assert_eq!(f.mul(a as u16, b as u16) as u32, f.mul_slow(a, b));
            }
        }
    }
}
