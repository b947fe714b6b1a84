use std::fmt;

use crate::algebra::Mat2;
use crate::error::{Error, Result};
use crate::ffield::{FieldElem, FieldSpec};

/// A polynomial over `F_q`, constant term first, with no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FPoly {
    coeffs: Vec<FieldElem>,
}

/// Factorization type of a monic polynomial of degree at most two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PolyKind {
    /// `x - a`
    Lin,
    /// irreducible quadratic
    Irr,
    /// `(x - a)^2`
    Sqr,
    /// `(x - a)(x - b)`, `a != b`
    Sqd,
}

impl PolyKind {
    pub const ALL: [PolyKind; 4] = [PolyKind::Lin, PolyKind::Irr, PolyKind::Sqr, PolyKind::Sqd];

    pub fn name(&self) -> &'static str {
        match self {
            PolyKind::Lin => "LIN",
            PolyKind::Irr => "IRR",
            PolyKind::Sqr => "SQR",
            PolyKind::Sqd => "SQD",
        }
    }
}

impl fmt::Display for PolyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FPoly {
    pub fn zero() -> Self {
        FPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        FPoly { coeffs: vec![1] }
    }

    pub fn from_coeffs(mut coeffs: Vec<FieldElem>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FPoly { coeffs }
    }

    /// `x - a`
    pub fn linear(f: &FieldSpec, a: FieldElem) -> Self {
        FPoly::from_coeffs(vec![f.neg(a), 1])
    }

    /// The monic polynomial with the given roots, with multiplicity.
    pub fn from_roots(f: &FieldSpec, roots: &[FieldElem]) -> Self {
        roots
            .iter()
            .fold(FPoly::one(), |acc, &r| acc.mul(f, &FPoly::linear(f, r)))
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<FieldElem> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Some(1)
    }

    pub fn is_valid(&self, f: &FieldSpec) -> bool {
        self.coeffs.iter().all(|&c| f.contains(c as u64))
    }

    pub fn add(&self, f: &FieldSpec, o: &FPoly) -> FPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        FPoly::from_coeffs((0..n).map(|i| f.add(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn sub(&self, f: &FieldSpec, o: &FPoly) -> FPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        FPoly::from_coeffs((0..n).map(|i| f.sub(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn scale(&self, f: &FieldSpec, s: FieldElem) -> FPoly {
        FPoly::from_coeffs(self.coeffs.iter().map(|&c| f.mul(s, c)).collect())
    }

    pub fn mul(&self, f: &FieldSpec, o: &FPoly) -> FPoly {
        if self.is_zero() || o.is_zero() {
            return FPoly::zero();
        }
        let mut out = vec![0; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &x) in self.coeffs.iter().enumerate() {
            for (j, &y) in o.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
        FPoly::from_coeffs(out)
    }

    /// Quotient and remainder of Euclidean division.
    pub fn div_rem(&self, f: &FieldSpec, divisor: &FPoly) -> Result<(FPoly, FPoly)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = f.inv(divisor.coeffs[dd])?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((FPoly::zero(), self.clone()));
        }
        let mut quot = vec![0; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = f.mul(rem[k + dd], lead_inv);
            quot[k] = c;
            if c != 0 {
                for (i, &dc) in divisor.coeffs.iter().enumerate() {
                    rem[k + i] = f.sub(rem[k + i], f.mul(c, dc));
                }
            }
        }
        rem.truncate(dd);
        Ok((FPoly::from_coeffs(quot), FPoly::from_coeffs(rem)))
    }

    pub fn monic(&self, f: &FieldSpec) -> FPoly {
        match self.leading() {
            None => FPoly::zero(),
            Some(l) => self.scale(f, f.inv(l).expect("leading coefficient is nonzero")),
        }
    }

    pub fn eval(&self, f: &FieldSpec, x: FieldElem) -> FieldElem {
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Roots in `F_q` by exhaustive evaluation, ascending.
    pub fn roots(&self, f: &FieldSpec) -> Vec<FieldElem> {
        f.elements().filter(|&a| self.eval(f, a) == 0).collect()
    }

    /// Evaluates at a matrix (central coefficients).
    pub fn eval_mat(&self, f: &FieldSpec, a: &Mat2) -> Mat2 {
        self.coeffs
            .iter()
            .rev()
            .fold(Mat2::zero(), |acc, &c| acc.mul(f, a).add(f, &Mat2::scalar(c)))
    }

    /// Whether `self` divides `other`.
    pub fn divides(&self, f: &FieldSpec, other: &FPoly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_rem(f, self).map(|(_, r)| r.is_zero()).unwrap_or(false)
    }
}

/// Monic gcd via the Euclidean algorithm; `gcd(0, 0) = 0`.
pub fn fpoly_gcd(f: &FieldSpec, a: &FPoly, b: &FPoly) -> FPoly {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let (_, r) = x.div_rem(f, &y).expect("divisor is nonzero");
        x = y;
        y = r;
    }
    x.monic(f)
}

/// Monic least common multiple; the empty lcm is `1`.
pub fn fpoly_lcm<'a>(f: &FieldSpec, ms: impl IntoIterator<Item = &'a FPoly>) -> FPoly {
    ms.into_iter().fold(FPoly::one(), |acc, m| {
        if m.is_zero() {
            return FPoly::zero();
        }
        let g = fpoly_gcd(f, &acc, m);
        let (q, _) = acc.mul(f, m).div_rem(f, &g).expect("gcd is nonzero");
        q.monic(f)
    })
}

impl fmt::Display for FPoly {
    /// Descending powers, codes as decimal integers: `x^2+2x+1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str("+")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => f.write_str("x")?,
                (1, _) => write!(f, "{c}x")?,
                (_, 1) => write!(f, "x^{i}")?,
                _ => write!(f, "{c}x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Minimal polynomial of a 2x2 matrix: `x - a` for `aI`, otherwise the
/// characteristic polynomial `x^2 - tr(A) x + det(A)`.
pub fn min_poly(f: &FieldSpec, a: &Mat2) -> FPoly {
    let m = if a.is_scalar() {
        FPoly::linear(f, a.a)
    } else {
        FPoly::from_coeffs(vec![a.det(f), f.neg(a.trace(f)), 1])
    };
    debug_assert!(m.eval_mat(f, a).is_zero());
    m
}

/// Classifies a monic polynomial of degree 1 or 2 by its roots in `F_q`.
pub fn classify_quadratic(f: &FieldSpec, m: &FPoly) -> Result<PolyKind> {
    match m.degree() {
        Some(1 | 2) if !m.is_monic() => Err(Error::NotMonic),
        Some(1) => Ok(PolyKind::Lin),
        Some(2) => {
            let roots = m.roots(f);
            Ok(match roots.len() {
                0 => PolyKind::Irr,
                1 => PolyKind::Sqr,
                _ => PolyKind::Sqd,
            })
        }
        d => Err(Error::DegreeOutOfRange(d.unwrap_or(0))),
    }
}

/// All monic polynomials of degree 1 and 2 over `f`, grouped by kind in the
/// order LIN, IRR, SQR, SQD. LIN/SQR are ordered by root, SQD by root pair,
/// IRR by ascending coefficient encoding.
pub fn monic_polys_by_kind(f: &FieldSpec) -> Vec<(FPoly, PolyKind)> {
    let mut out = Vec::new();
    for a in f.elements() {
        out.push((FPoly::linear(f, a), PolyKind::Lin));
    }
    for c1 in f.elements() {
        for c0 in f.elements() {
            let m = FPoly::from_coeffs(vec![c0, c1, 1]);
            if m.roots(f).is_empty() {
                out.push((m, PolyKind::Irr));
            }
        }
    }
    for a in f.elements() {
        out.push((FPoly::from_roots(f, &[a, a]), PolyKind::Sqr));
    }
    for a in f.elements() {
        for b in f.elements().filter(|&b| b > a) {
            out.push((FPoly::from_roots(f, &[a, b]), PolyKind::Sqd));
        }
    }
    out
}
