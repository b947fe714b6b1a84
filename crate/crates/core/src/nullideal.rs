//! Null ideals of finite sets of matrices, restricted to bounded degree.
//!
//! For `S` a set of 2x2 matrices, the polynomials `f = sum c_i x^i` with
//! `deg f < d` and `f(A) = sum c_i A^i = 0` for every `A` in `S` form an
//! `F_q`-vector space. Its coordinates are the `4d` coefficient entries,
//! flattened coefficient-major and then row-major (`4*i + 2*r + t` is entry
//! `(r, t)` of `c_i`), and it is the nullspace of a `4|S| x 4d` system.
//!
//! `S` is core exactly when this space is zero at `d = deg phi_S`, where
//! `phi_S` is the lcm of the minimal polynomials of `S`.
//!
//! The system is block diagonal in the row index `r`: row `r` of `f(A)`
//! only involves row `r` of each coefficient. The verdict-only routines work
//! with one block, `2|S|` equations in `2d` unknowns, and the full kernel is
//! two copies of the block kernel.

use std::fmt;

use crate::algebra::{classify_quadratic, fpoly_lcm, min_poly, FPoly, Mat2, MatPoly, PolyKind};
use crate::classes::class_of;
use crate::error::{Error, Result};
use crate::ffield::{FieldElem, FieldSpec};
use crate::linalg::Echelon;

/// Basis of the degree-bounded part of a null ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelBasis {
    pub degree_bound: usize,
    /// Reduced row echelon basis, each element of degree `< degree_bound`.
    pub basis: Vec<MatPoly>,
}

impl KernelBasis {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

/// A left ideal of `M_2(F_q)`: zero, a minimal left ideal `L_v`, or the
/// whole ring.
///
/// `L_v` is the set of matrices whose rows are multiples of `v`; `v` is
/// kept in canonical form `[0, 1]` or `[1, l]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LeftIdealDesc {
    Zero,
    Minimal([FieldElem; 2]),
    Full,
}

impl LeftIdealDesc {
    pub fn is_zero(&self) -> bool {
        matches!(self, LeftIdealDesc::Zero)
    }

    /// Position of `v` in the order `[0,1]`, `[1,0]`, `[1,1]`, ... .
    pub fn sort_key(&self) -> u32 {
        match self {
            LeftIdealDesc::Zero => 0,
            LeftIdealDesc::Minimal([0, _]) => 1,
            LeftIdealDesc::Minimal([_, l]) => 2 + *l as u32,
            LeftIdealDesc::Full => u32::MAX,
        }
    }
}

impl fmt::Display for LeftIdealDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LeftIdealDesc::Zero => f.write_str("0"),
            LeftIdealDesc::Minimal([a, b]) => write!(f, "L[{a},{b}]"),
            LeftIdealDesc::Full => f.write_str("M2"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreVerdict {
    pub is_core: bool,
    /// Nonzero element of `N(S)` of degree `< deg phi_S`; present exactly
    /// when `S` is noncore.
    pub witness: Option<MatPoly>,
}

/// Scales a nonzero row vector so its first nonzero entry is `1`.
pub fn canonical_row(f: &FieldSpec, v: [FieldElem; 2]) -> Option<[FieldElem; 2]> {
    let lead = *v.iter().find(|&&x| x != 0)?;
    let inv = f.inv(lead).ok()?;
    Some([f.mul(v[0], inv), f.mul(v[1], inv)])
}

/// Monic lcm of the minimal polynomials of `s`; `1` for the empty set.
pub fn phi(f: &FieldSpec, s: &[Mat2]) -> FPoly {
    let ms: Vec<FPoly> = s.iter().map(|a| min_poly(f, a)).collect();
    fpoly_lcm(f, &ms)
}

/// Degree of `phi_S`.
pub fn phi_degree(f: &FieldSpec, s: &[Mat2]) -> usize {
    phi(f, s).degree().unwrap_or(0)
}

/// The two equations one matrix imposes on a single coefficient row.
///
/// Unknowns are `w_i[t]` at position `2*i + t` for `i < d`; equation `s` is
/// `sum_i sum_t w_i[t] (A^i)[t][s] = 0`.
pub fn row_equations(f: &FieldSpec, a: &Mat2, d: usize) -> [Vec<FieldElem>; 2] {
    let powers = a.powers(f, d);
    let mut eqs = [vec![0; 2 * d], vec![0; 2 * d]];
    for (i, p) in powers.iter().enumerate() {
        for (s, eq) in eqs.iter_mut().enumerate() {
            eq[2 * i] = p.at(0, s);
            eq[2 * i + 1] = p.at(1, s);
        }
    }
    eqs
}

/// Constraint space of `s` on one coefficient row at degree bound `d`.
pub fn row_constraints(f: &FieldSpec, s: &[Mat2], d: usize) -> Echelon {
    let mut e = Echelon::new(2 * d);
    for a in s {
        for eq in row_equations(f, a, d) {
            e.insert(f, &eq);
        }
        if e.is_full() {
            break;
        }
    }
    e
}

/// Basis of `{ f : deg f < d, f(A) = 0 for all A in s }`.
pub fn null_kernel(f: &FieldSpec, s: &[Mat2], d: usize) -> KernelBasis {
    let n = 4 * d;
    let mut system = Echelon::new(n);
    for a in s {
        let powers = a.powers(f, d);
        for r in 0..2 {
            for col in 0..2 {
                let mut eq = vec![0; n];
                for (i, p) in powers.iter().enumerate() {
                    for t in 0..2 {
                        eq[4 * i + 2 * r + t] = p.at(t, col);
                    }
                }
                system.insert(f, &eq);
            }
        }
    }
    let basis = system
        .nullspace(f)
        .into_iter()
        .map(|v| MatPoly::from_coeffs(v.chunks(4).map(|c| Mat2::new(c[0], c[1], c[2], c[3])).collect()))
        .collect();
    KernelBasis { degree_bound: d, basis }
}

/// Core test without a witness.
pub fn is_core_set(f: &FieldSpec, s: &[Mat2]) -> bool {
    let d = phi_degree(f, s);
    row_constraints(f, s, d).is_full()
}

/// Decides whether `N(S)` is two-sided, i.e. has no nonzero element of
/// degree below `deg phi_S`. The empty set is core.
pub fn is_core(f: &FieldSpec, s: &[Mat2]) -> CoreVerdict {
    if is_core_set(f, s) {
        return CoreVerdict {
            is_core: true,
            witness: None,
        };
    }
    let kernel = null_kernel(f, s, phi_degree(f, s));
    let witness = kernel.basis.into_iter().next();
    debug_assert!(witness.is_some());
    CoreVerdict {
        is_core: false,
        witness,
    }
}

/// `{ alpha : alpha (x - a) in N(S) }`, i.e. `alpha (A - aI) = 0` for all
/// `A` in `S`.
pub fn l_module(f: &FieldSpec, s: &[Mat2], a: FieldElem) -> Result<LeftIdealDesc> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut system = Echelon::new(4);
    for m in s {
        let shifted = m.sub(f, &Mat2::scalar(a));
        for r in 0..2 {
            for col in 0..2 {
                let mut eq = [0; 4];
                for t in 0..2 {
                    eq[2 * r + t] = shifted.at(t, col);
                }
                system.insert(f, &eq);
            }
        }
        if system.is_full() {
            break;
        }
    }
    let kernel = system.nullspace(f);
    Ok(match kernel.len() {
        0 => LeftIdealDesc::Zero,
        2 => {
            let alpha = &kernel[0];
            let row = if alpha[0] != 0 || alpha[1] != 0 {
                [alpha[0], alpha[1]]
            } else {
                [alpha[2], alpha[3]]
            };
            LeftIdealDesc::Minimal(canonical_row(f, row).expect("kernel vector is nonzero"))
        }
        4 => LeftIdealDesc::Full,
        d => unreachable!("left ideals of M_2(F_q) have even dimension, got {d}"),
    })
}

/// All matrices whose rows are scalar multiples of `v`.
pub fn l_v_members(f: &FieldSpec, v: [FieldElem; 2]) -> Vec<Mat2> {
    let mut out: Vec<Mat2> = f
        .elements()
        .flat_map(|y| {
            f.elements()
                .map(move |z| Mat2::new(f.mul(y, v[0]), f.mul(y, v[1]), f.mul(z, v[0]), f.mul(z, v[1])))
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Roots `(a, b)` of an SQD minimal polynomial, or the appropriate error.
pub(crate) fn sqd_roots(f: &FieldSpec, m: &FPoly) -> Result<(FieldElem, FieldElem)> {
    let kind = classify_quadratic(f, m)?;
    if kind != PolyKind::Sqd {
        return Err(Error::WrongClassKind {
            expected: "SQD",
            found: kind,
        });
    }
    let r = m.roots(f);
    Ok((r[0], r[1]))
}

/// `B(A, a)`: members `B` of the class of `A` with `L({A, B}, a) != 0`.
///
/// Computed through the equivalent condition `L({B}, a) = L({A}, a)`.
pub fn bset(f: &FieldSpec, a: &Mat2, root: FieldElem) -> Result<Vec<Mat2>> {
    let m = min_poly(f, a);
    let (r0, r1) = sqd_roots(f, &m)?;
    if root != r0 && root != r1 {
        return Err(Error::NotARoot(root));
    }
    let class = class_of(f, &m)?;
    bset_in(f, &class.members, a, root)
}

/// `B(A, a)` restricted to a precomputed list of class members.
pub fn bset_in(f: &FieldSpec, members: &[Mat2], a: &Mat2, root: FieldElem) -> Result<Vec<Mat2>> {
    let target = l_module(f, std::slice::from_ref(a), root)?;
    let mut out = Vec::new();
    for b in members {
        if l_module(f, std::slice::from_ref(b), root)? == target {
            out.push(*b);
        }
    }
    Ok(out)
}
