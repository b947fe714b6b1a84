//! Minimal-polynomial classes of `M_2(F_q)` and their internal structure.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::algebra::{classify_quadratic, min_poly, monic_polys_by_kind, FPoly, Mat2, PolyKind, ENUMERATION_LIMIT};
use crate::error::{Error, Result};
use crate::ffield::{FieldElem, FieldSpec};
use crate::nullideal::{l_module, sqd_roots, LeftIdealDesc};

/// All matrices with minimal polynomial `m`, in canonical index order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinPolyClass {
    pub m: FPoly,
    pub kind: PolyKind,
    pub members: Vec<Mat2>,
}

impl MinPolyClass {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Roots of `m` in `F_q`, ascending (one root for LIN and SQR).
    pub fn roots(&self, f: &FieldSpec) -> Vec<FieldElem> {
        self.m.roots(f)
    }

    pub fn position(&self, a: &Mat2) -> Option<usize> {
        self.members.binary_search(a).ok()
    }
}

/// Class size for a kind over `F_q`.
pub fn class_size(kind: PolyKind, q: u64) -> u64 {
    match kind {
        PolyKind::Lin => 1,
        PolyKind::Irr => q * q - q,
        PolyKind::Sqr => q * q - 1,
        PolyKind::Sqd => q * q + q,
    }
}

fn check_enumerable(f: &FieldSpec) -> Result<()> {
    if f.q() > ENUMERATION_LIMIT {
        return Err(Error::size(
            "q for class enumeration",
            f.q() as u64,
            ENUMERATION_LIMIT as u64,
        ));
    }
    Ok(())
}

fn checked_class(f: &FieldSpec, m: FPoly, kind: PolyKind, members: Vec<Mat2>) -> Result<MinPolyClass> {
    if members.len() as u64 != class_size(kind, f.q() as u64) {
        return Err(Error::EmptyClass(m.to_string()));
    }
    Ok(MinPolyClass { m, kind, members })
}

/// `C(m)` by filtering all of `M_2(F_q)`.
pub fn class_of(f: &FieldSpec, m: &FPoly) -> Result<MinPolyClass> {
    let kind = classify_quadratic(f, m)?;
    check_enumerable(f)?;
    let members = Mat2::all(f).filter(|a| min_poly(f, a) == *m).collect();
    checked_class(f, m.clone(), kind, members)
}

/// Every class, ordered LIN, IRR, SQR, SQD (see `monic_polys_by_kind`).
/// A class id is its position in this list.
pub fn all_classes(f: &FieldSpec) -> Result<Vec<MinPolyClass>> {
    check_enumerable(f)?;
    let polys = monic_polys_by_kind(f);
    let slot: HashMap<FPoly, usize> = polys.iter().enumerate().map(|(i, (m, _))| (m.clone(), i)).collect();
    let mut buckets = vec![Vec::new(); polys.len()];
    for a in Mat2::all(f) {
        let i = slot[&min_poly(f, &a)];
        buckets[i].push(a);
    }
    let classes = polys
        .into_iter()
        .zip(buckets)
        .map(|((m, kind), members)| checked_class(f, m, kind, members))
        .collect::<Result<Vec<_>>>()?;
    let total: usize = classes.iter().map(MinPolyClass::len).sum();
    if total as u64 != (f.q() as u64).pow(4) {
        return Err(Error::Inconsistent(format!("classes cover {total} matrices")));
    }
    Ok(classes)
}

/// Label of a cell in a [`ClassPartition`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CellKey {
    /// `N = [[0, *], [0, 0]]`
    T0,
    /// `N = [[0, 0], [*, 0]]`
    T0Prime,
    /// `N = [[x, l x], [*, *]]`, `x != 0`
    TLambda(FieldElem),
    /// B-set sharing the singleton L-module `L_v`
    Module([FieldElem; 2]),
}

impl fmt::Display for CellKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CellKey::T0 => f.write_str("T0"),
            CellKey::T0Prime => f.write_str("T0'"),
            CellKey::TLambda(l) => write!(f, "T{l}"),
            CellKey::Module([a, b]) => write!(f, "L[{a},{b}]"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionLabel {
    SqrT,
    BSet { root: FieldElem },
}

/// A partition of a class into cells of member indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassPartition {
    pub label: PartitionLabel,
    pub keys: Vec<CellKey>,
    pub cells: Vec<Vec<usize>>,
}

impl ClassPartition {
    /// Cell index of every member.
    pub fn cell_of(&self) -> Vec<usize> {
        let n = self.cells.iter().map(Vec::len).sum();
        let mut out = vec![usize::MAX; n];
        for (ci, cell) in self.cells.iter().enumerate() {
            for &m in cell {
                out[m] = ci;
            }
        }
        out
    }

    fn from_buckets(label: PartitionLabel, buckets: BTreeMap<(u32, CellKey), Vec<usize>>) -> Self {
        let (keys, cells) = buckets.into_iter().map(|((_, k), c)| (k, c)).unzip();
        ClassPartition { label, keys, cells }
    }
}

fn require_kind(class: &MinPolyClass, kind: PolyKind, name: &'static str) -> Result<()> {
    if class.kind != kind {
        return Err(Error::WrongClassKind {
            expected: name,
            found: class.kind,
        });
    }
    Ok(())
}

/// The `T0, T0', T_l` partition of an SQR class `C((x - a)^2)`.
pub fn sqr_partition(f: &FieldSpec, class: &MinPolyClass) -> Result<ClassPartition> {
    require_kind(class, PolyKind::Sqr, "SQR")?;
    let a = class.roots(f)[0];
    let shift = Mat2::scalar(a);
    let mut buckets: BTreeMap<(u32, CellKey), Vec<usize>> = BTreeMap::new();
    for (i, m) in class.members.iter().enumerate() {
        let n = m.sub(f, &shift);
        let key = if n.a == 0 && n.c == 0 {
            (0, CellKey::T0)
        } else if n.a == 0 && n.b == 0 {
            (1, CellKey::T0Prime)
        } else {
            let l = f.div(n.b, n.a).expect("n00 is nonzero here");
            (2 + l as u32, CellKey::TLambda(l))
        };
        buckets.entry(key).or_default().push(i);
    }
    Ok(ClassPartition::from_buckets(PartitionLabel::SqrT, buckets))
}

/// The partition of an SQD class into the B-sets `B(-, root)`, grouped by
/// their shared singleton L-module.
pub fn bset_partition(f: &FieldSpec, class: &MinPolyClass, root: FieldElem) -> Result<ClassPartition> {
    require_kind(class, PolyKind::Sqd, "SQD")?;
    let (a, b) = sqd_roots(f, &class.m)?;
    if root != a && root != b {
        return Err(Error::NotARoot(root));
    }
    let mut buckets: BTreeMap<(u32, CellKey), Vec<usize>> = BTreeMap::new();
    for (i, m) in class.members.iter().enumerate() {
        let desc = l_module(f, std::slice::from_ref(m), root)?;
        let LeftIdealDesc::Minimal(v) = desc else {
            return Err(Error::Inconsistent(format!(
                "L({{{m}}}, {root}) = {desc}, expected a minimal left ideal"
            )));
        };
        buckets
            .entry((desc.sort_key(), CellKey::Module(v)))
            .or_default()
            .push(i);
    }
    Ok(ClassPartition::from_buckets(PartitionLabel::BSet { root }, buckets))
}

/// An undirected simple graph on `0..n` with bitset rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitGraph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
}

impl BitGraph {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BitGraph {
            n,
            words,
            adj: vec![0; n * words],
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn add_edge(&mut self, i: usize, j: usize) {
        assert!(i != j && i < self.n && j < self.n);
        self.adj[i * self.words + j / 64] |= 1 << (j % 64);
        self.adj[j * self.words + i / 64] |= 1 << (i % 64);
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.adj[i * self.words..(i + 1) * self.words]
    }

    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        bits(self.row(i)).collect()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|i| self.degree(i)).sum::<usize>() / 2
    }

    fn full_set(&self) -> Vec<u64> {
        let mut s = vec![0u64; self.words];
        for i in 0..self.n {
            s[i / 64] |= 1 << (i % 64);
        }
        s
    }

    /// Number of nonempty cliques.
    pub fn count_cliques(&self) -> u128 {
        // Each clique is counted once, from its smallest vertex.
        fn grow(g: &BitGraph, cand: &[u64]) -> u128 {
            let mut total = 0;
            for v in bits(cand) {
                let next: Vec<u64> = cand
                    .iter()
                    .zip(g.row(v))
                    .enumerate()
                    .map(|(w, (c, r))| c & r & above(v, w))
                    .collect();
                total += 1 + grow(g, &next);
            }
            total
        }
        grow(self, &self.full_set())
    }

    /// All maximal cliques (Bron-Kerbosch with pivoting), each sorted, in
    /// ascending lexicographic order.
    pub fn maximal_cliques(&self) -> Vec<Vec<usize>> {
        fn bk(g: &BitGraph, r: &mut Vec<usize>, p: Vec<u64>, mut x: Vec<u64>, out: &mut Vec<Vec<usize>>) {
            if p.iter().all(|&w| w == 0) {
                if x.iter().all(|&w| w == 0) {
                    let mut c = r.clone();
                    c.sort_unstable();
                    out.push(c);
                }
                return;
            }
            let pivot = bits(&p)
                .chain(bits(&x))
                .max_by_key(|&u| p.iter().zip(g.row(u)).map(|(a, b)| (a & b).count_ones()).sum::<u32>());
            let pivot = pivot.expect("p is nonempty");
            let mut p = p;
            let todo: Vec<usize> = bits(&p).filter(|&v| !g.has_edge(pivot, v)).collect();
            for v in todo {
                let row = g.row(v);
                let np = p.iter().zip(row).map(|(a, b)| a & b).collect();
                let nx = x.iter().zip(row).map(|(a, b)| a & b).collect();
                r.push(v);
                bk(g, r, np, nx, out);
                r.pop();
                p[v / 64] &= !(1 << (v % 64));
                x[v / 64] |= 1 << (v % 64);
            }
        }
        let mut out = Vec::new();
        bk(self, &mut Vec::new(), self.full_set(), vec![0; self.words], &mut out);
        out.sort();
        out
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                for u in self.neighbors(comp[i]) {
                    if !seen[u] {
                        seen[u] = true;
                        comp.push(u);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

/// Mask of bit positions strictly above `v` within word `w`.
fn above(v: usize, w: usize) -> u64 {
    match w.cmp(&(v / 64)) {
        std::cmp::Ordering::Less => 0,
        std::cmp::Ordering::Greater => u64::MAX,
        std::cmp::Ordering::Equal => {
            let b = v % 64;
            if b == 63 {
                0
            } else {
                u64::MAX << (b + 1)
            }
        }
    }
}

fn bits(set: &[u64]) -> impl Iterator<Item = usize> + '_ {
    set.iter().enumerate().flat_map(|(w, &word)| {
        let mut rest = word;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let b = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(w * 64 + b)
        })
    })
}

/// Graph on member indices with an edge when the difference is singular.
pub fn singular_difference_graph(f: &FieldSpec, class: &MinPolyClass) -> Result<BitGraph> {
    if class.kind == PolyKind::Lin {
        return Err(Error::WrongClassKind {
            expected: "quadratic",
            found: PolyKind::Lin,
        });
    }
    let n = class.len();
    let mut g = BitGraph::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if !class.members[i].sub(f, &class.members[j]).is_invertible(f) {
                g.add_edge(i, j);
            }
        }
    }
    Ok(g)
}
