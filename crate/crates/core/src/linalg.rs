//! Exact linear algebra over `F_q`: reduced row echelon forms built one row
//! at a time, and nullspaces.

use crate::ffield::{FieldElem, FieldSpec};

/// A subspace of `F_q^n` held as the rows of its reduced row echelon form.
///
/// Rows are sorted by pivot column, every pivot is `1`, and every pivot
/// column is zero outside its row. The representation is canonical, so two
/// `Echelon`s compare equal exactly when they span the same subspace.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Echelon {
    ncols: usize,
    pivots: Vec<usize>,
    rows: Vec<Vec<FieldElem>>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon {
            ncols,
            pivots: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn from_rows<'a>(f: &FieldSpec, ncols: usize, rows: impl IntoIterator<Item = &'a [FieldElem]>) -> Self {
        let mut e = Echelon::new(ncols);
        for r in rows {
            e.insert(f, r);
        }
        e
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ncols
    }

    pub fn rows(&self) -> &[Vec<FieldElem>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `row` against the current basis in place.
    fn reduce(&self, f: &FieldSpec, row: &mut [FieldElem]) {
        for (basis, &p) in self.rows.iter().zip(&self.pivots) {
            let c = row[p];
            if c != 0 {
                let nc = f.neg(c);
                for (x, &b) in row.iter_mut().zip(basis).skip(p) {
                    if b != 0 {
                        *x = f.add(*x, f.mul(nc, b));
                    }
                }
            }
        }
    }

    /// Adds `row` to the spanning set. Returns whether the rank grew.
    pub fn insert(&mut self, f: &FieldSpec, row: &[FieldElem]) -> bool {
        debug_assert_eq!(row.len(), self.ncols);
        if self.is_full() {
            return false;
        }
        let mut r = row.to_vec();
        self.reduce(f, &mut r);
        let Some(p) = r.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(r[p]).expect("pivot is nonzero");
        for x in r.iter_mut().skip(p) {
            *x = f.mul(*x, inv);
        }
        for basis in self.rows.iter_mut() {
            let c = basis[p];
            if c != 0 {
                let nc = f.neg(c);
                for (x, &y) in basis.iter_mut().zip(&r).skip(p) {
                    if y != 0 {
                        *x = f.add(*x, f.mul(nc, y));
                    }
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, r);
        true
    }

    /// Sum of two subspaces of the same ambient space.
    pub fn merge(&mut self, f: &FieldSpec, other: &Echelon) {
        debug_assert_eq!(self.ncols, other.ncols);
        for r in &other.rows {
            if self.is_full() {
                break;
            }
            self.insert(f, r);
        }
    }

    pub fn contains(&self, f: &FieldSpec, v: &[FieldElem]) -> bool {
        let mut r = v.to_vec();
        self.reduce(f, &mut r);
        r.iter().all(|&x| x == 0)
    }

    /// Basis of `{ v : row . v = 0 for every row }`, in reduced row echelon
    /// form.
    pub fn nullspace(&self, f: &FieldSpec) -> Vec<Vec<FieldElem>> {
        let mut is_pivot = vec![false; self.ncols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let raw: Vec<Vec<FieldElem>> = (0..self.ncols)
            .filter(|&j| !is_pivot[j])
            .map(|j| {
                let mut v = vec![0; self.ncols];
                v[j] = 1;
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    v[p] = f.neg(row[j]);
                }
                v
            })
            .collect();
        Echelon::from_rows(f, self.ncols, raw.iter().map(Vec::as_slice)).rows
    }
}

/// Nullspace of the matrix whose rows are `rows`, in reduced row echelon form.
pub fn nullspace(f: &FieldSpec, ncols: usize, rows: &[Vec<FieldElem>]) -> Vec<Vec<FieldElem>> {
    Echelon::from_rows(f, ncols, rows.iter().map(Vec::as_slice)).nullspace(f)
}
