use std::fmt;

use crate::algebra::{FPoly, Mat2};
use crate::ffield::FieldSpec;

/// A polynomial with coefficients in `M_2(F_q)`, constant term first.
///
/// The variable `x` is central. Trailing zero coefficients are trimmed on
/// construction, so `degree()` is exact and the zero polynomial has degree
/// `None`, which orders below every `Some(d)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct MatPoly {
    coeffs: Vec<Mat2>,
}

impl MatPoly {
    pub fn zero() -> Self {
        MatPoly { coeffs: Vec::new() }
    }

    pub fn from_coeffs(mut coeffs: Vec<Mat2>) -> Self {
        while coeffs.last().is_some_and(Mat2::is_zero) {
            coeffs.pop();
        }
        MatPoly { coeffs }
    }

    /// `x - A`
    pub fn x_minus(f: &FieldSpec, a: &Mat2) -> Self {
        MatPoly::from_coeffs(vec![a.neg(f), Mat2::identity()])
    }

    pub fn coeffs(&self) -> &[Mat2] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Mat2 {
        self.coeffs.get(i).copied().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, f: &FieldSpec, o: &MatPoly) -> MatPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        MatPoly::from_coeffs((0..n).map(|i| self.coeff(i).add(f, &o.coeff(i))).collect())
    }

    pub fn mul(&self, f: &FieldSpec, o: &MatPoly) -> MatPoly {
        if self.is_zero() || o.is_zero() {
            return MatPoly::zero();
        }
        let mut out = vec![Mat2::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            for (j, y) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(f, &x.mul(f, y));
            }
        }
        MatPoly::from_coeffs(out)
    }

    /// Left-multiplies every coefficient by `alpha`.
    pub fn left_scale(&self, f: &FieldSpec, alpha: &Mat2) -> MatPoly {
        MatPoly::from_coeffs(self.coeffs.iter().map(|c| alpha.mul(f, c)).collect())
    }

    /// Right evaluation `sum_i c_i A^i`: the coefficients stay on the left
    /// of the powers of `A`.
    pub fn eval_right(&self, f: &FieldSpec, a: &Mat2) -> Mat2 {
        let mut acc = Mat2::zero();
        let mut power = Mat2::identity();
        for c in &self.coeffs {
            acc = acc.add(f, &c.mul(f, &power));
            power = power.mul(f, a);
        }
        acc
    }

    /// Embeds a scalar polynomial, each coefficient becoming a scalar matrix.
    pub fn embed(p: &FPoly) -> MatPoly {
        MatPoly::from_coeffs(p.coeffs().iter().map(|&c| Mat2::scalar(c)).collect())
    }
}

/// `embed_fpoly` under its operational name.
pub fn embed_fpoly(p: &FPoly) -> MatPoly {
    MatPoly::embed(p)
}

impl fmt::Display for MatPoly {
    /// Terms in descending degree: `(0,1;0,0)x + (1,0;0,1)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{i}")?,
            }
        }
        Ok(())
    }
}
