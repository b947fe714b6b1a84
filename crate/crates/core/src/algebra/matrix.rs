use std::fmt;

use crate::error::{Error, Result};
use crate::ffield::{FieldElem, FieldSpec};

/// A 2x2 matrix `[[a, b], [c, d]]` over `F_q`.
///
/// The derived ordering is lexicographic in `(a, b, c, d)`, which is the
/// order of the canonical index `((a*q + b)*q + c)*q + d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Mat2 {
    pub a: FieldElem,
    pub b: FieldElem,
    pub c: FieldElem,
    pub d: FieldElem,
}

/// Largest `q` for which whole-ring or whole-group enumeration is allowed.
pub const ENUMERATION_LIMIT: u32 = 16;

impl Mat2 {
    pub const fn new(a: FieldElem, b: FieldElem, c: FieldElem, d: FieldElem) -> Self {
        Mat2 { a, b, c, d }
    }

    pub const fn zero() -> Self {
        Mat2::new(0, 0, 0, 0)
    }

    pub const fn identity() -> Self {
        Mat2::new(1, 0, 0, 1)
    }

    pub const fn scalar(s: FieldElem) -> Self {
        Mat2::new(s, 0, 0, s)
    }

    pub const fn diag(x: FieldElem, y: FieldElem) -> Self {
        Mat2::new(x, 0, 0, y)
    }

    pub fn entries(&self) -> [FieldElem; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn from_entries(e: [FieldElem; 4]) -> Self {
        Mat2::new(e[0], e[1], e[2], e[3])
    }

    /// Entry in row `r`, column `s`.
    #[inline]
    pub fn at(&self, r: usize, s: usize) -> FieldElem {
        match (r, s) {
            (0, 0) => self.a,
            (0, 1) => self.b,
            (1, 0) => self.c,
            (1, 1) => self.d,
            _ => panic!("index ({r}, {s}) out of range for a 2x2 matrix"),
        }
    }

    pub fn row(&self, r: usize) -> [FieldElem; 2] {
        [self.at(r, 0), self.at(r, 1)]
    }

    pub fn is_zero(&self) -> bool {
        *self == Mat2::zero()
    }

    pub fn is_scalar(&self) -> bool {
        self.b == 0 && self.c == 0 && self.a == self.d
    }

    pub fn is_valid(&self, f: &FieldSpec) -> bool {
        self.entries().iter().all(|&x| f.contains(x as u64))
    }

    pub fn index(&self, q: u32) -> u32 {
        self.entries().iter().fold(0u32, |acc, &x| acc * q + x as u32)
    }

    pub fn from_index(q: u32, mut idx: u32) -> Self {
        let mut e = [0 as FieldElem; 4];
        for slot in e.iter_mut().rev() {
            *slot = (idx % q) as FieldElem;
            idx /= q;
        }
        Mat2::from_entries(e)
    }

    pub fn add(&self, f: &FieldSpec, o: &Mat2) -> Mat2 {
        Mat2::new(
            f.add(self.a, o.a),
            f.add(self.b, o.b),
            f.add(self.c, o.c),
            f.add(self.d, o.d),
        )
    }

    pub fn neg(&self, f: &FieldSpec) -> Mat2 {
        Mat2::new(f.neg(self.a), f.neg(self.b), f.neg(self.c), f.neg(self.d))
    }

    pub fn sub(&self, f: &FieldSpec, o: &Mat2) -> Mat2 {
        self.add(f, &o.neg(f))
    }

    pub fn mul(&self, f: &FieldSpec, o: &Mat2) -> Mat2 {
        Mat2::new(
            f.add(f.mul(self.a, o.a), f.mul(self.b, o.c)),
            f.add(f.mul(self.a, o.b), f.mul(self.b, o.d)),
            f.add(f.mul(self.c, o.a), f.mul(self.d, o.c)),
            f.add(f.mul(self.c, o.b), f.mul(self.d, o.d)),
        )
    }

    pub fn scale(&self, f: &FieldSpec, s: FieldElem) -> Mat2 {
        Mat2::new(f.mul(s, self.a), f.mul(s, self.b), f.mul(s, self.c), f.mul(s, self.d))
    }

    pub fn pow(&self, f: &FieldSpec, mut n: u64) -> Mat2 {
        let mut base = *self;
        let mut acc = Mat2::identity();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(f, &base);
            }
            base = base.mul(f, &base);
            n >>= 1;
        }
        acc
    }

    /// `[I, A, A^2, ..., A^(n-1)]`.
    pub fn powers(&self, f: &FieldSpec, n: usize) -> Vec<Mat2> {
        let mut out = Vec::with_capacity(n);
        let mut cur = Mat2::identity();
        for _ in 0..n {
            out.push(cur);
            cur = cur.mul(f, self);
        }
        out
    }

    pub fn det(&self, f: &FieldSpec) -> FieldElem {
        f.sub(f.mul(self.a, self.d), f.mul(self.b, self.c))
    }

    pub fn trace(&self, f: &FieldSpec) -> FieldElem {
        f.add(self.a, self.d)
    }

    pub fn is_invertible(&self, f: &FieldSpec) -> bool {
        self.det(f) != 0
    }

    pub fn inverse(&self, f: &FieldSpec) -> Result<Mat2> {
        let inv_det = f.inv(self.det(f)).map_err(|_| Error::NotInvertible)?;
        Ok(Mat2::new(self.d, f.neg(self.b), f.neg(self.c), self.a).scale(f, inv_det))
    }

    /// `U^-1 A U`.
    pub fn conjugate(&self, f: &FieldSpec, u: &Mat2) -> Result<Mat2> {
        let u_inv = u.inverse(f)?;
        Ok(u_inv.mul(f, self).mul(f, u))
    }

    /// Every matrix over `f` in canonical index order.
    pub fn all(f: &FieldSpec) -> impl Iterator<Item = Mat2> + '_ {
        let q = f.q();
        (0..q.pow(4)).map(move |i| Mat2::from_index(q, i))
    }
}

impl fmt::Display for Mat2 {
    /// The `a,b;c,d` text form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{};{},{}", self.a, self.b, self.c, self.d)
    }
}

/// All invertible matrices in canonical index order.
pub fn enumerate_gl2(f: &FieldSpec) -> Result<Vec<Mat2>> {
    if f.q() > ENUMERATION_LIMIT {
        return Err(Error::size(
            "q for GL2 enumeration",
            f.q() as u64,
            ENUMERATION_LIMIT as u64,
        ));
    }
    Ok(Mat2::all(f).filter(|m| m.is_invertible(f)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> FieldSpec {
        FieldSpec::from_order(q).unwrap()
    }

    #[test]
    fn identity_and_nilpotent() {
        let f2 = f(2);
        let n = Mat2::new(0, 1, 0, 0);
        assert_eq!(n.mul(&f2, &n), Mat2::zero());
        for a in Mat2::all(&f2) {
            assert_eq!(Mat2::identity().mul(&f2, &a), a);
            assert_eq!(a.pow(&f2, 0), Mat2::identity());
        }
    }

    #[test]
    fn det_trace() {
        let f3 = f(3);
        let e = Mat2::new(1, 0, 0, 0);
        assert_eq!((e.det(&f3), e.trace(&f3), e.is_invertible(&f3)), (0, 1, false));
        let m = Mat2::new(0, 1, 2, 1);
        assert_eq!(m.det(&f3), 1);
        assert!(m.is_invertible(&f3));
        let d = Mat2::diag(2, 2);
        assert_eq!((d.det(&f3), d.trace(&f3)), (1, 1));
    }

    #[test]
    fn gl2_sizes() {
        for (q, n) in [(2, 6), (3, 48), (4, 180), (5, 480)] {
            assert_eq!(enumerate_gl2(&f(q)).unwrap().len(), n);
        }
        assert!(matches!(enumerate_gl2(&f(17)), Err(Error::SizeExceeded { .. })));
    }

    #[test]
    fn index_roundtrip_and_order() {
        let f3 = f(3);
        let all: Vec<Mat2> = Mat2::all(&f3).collect();
        assert_eq!(all.len(), 81);
        for (i, m) in all.iter().enumerate() {
            assert_eq!(m.index(3), i as u32);
        }
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn conjugation() {
        let f3 = f(3);
        let gl = enumerate_gl2(&f3).unwrap();
        let a = Mat2::new(0, 1, 2, 1);
        assert_eq!(a.conjugate(&f3, &Mat2::identity()).unwrap(), a);
        for u in &gl {
            let b = a.conjugate(&f3, u).unwrap();
            assert_eq!(b.det(&f3), a.det(&f3));
            assert_eq!(b.trace(&f3), a.trace(&f3));
            assert_eq!(Mat2::scalar(2).conjugate(&f3, u).unwrap(), Mat2::scalar(2));
        }
        assert_eq!(a.conjugate(&f3, &Mat2::new(1, 0, 0, 0)), Err(Error::NotInvertible));
    }
}
