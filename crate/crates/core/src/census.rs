//! Counting core and noncore subsets: closed forms, exhaustive oracles, the
//! full sweep of `M_2(F_2)`, unions of classes, and the asymptotic bounds.
//!
//! All counts are `BigUint`, all ratios `BigRational`. The empty set is
//! core and purely core everywhere.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::algebra::{fpoly_lcm, FPoly, Mat2, PolyKind};
use crate::classes::{all_classes, bset_partition, singular_difference_graph, sqr_partition, MinPolyClass};
use crate::error::{Error, Result};
use crate::ffield::{FieldElem, FieldSpec};
use crate::linalg::Echelon;
use crate::nullideal::{is_core_set, l_module, phi, row_equations, sqd_roots, LeftIdealDesc};

/// Largest class (or per-class part of a union) enumerated subset by subset.
pub const BRUTE_FORCE_LIMIT: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CountMethod {
    Formula,
    BruteForce,
    CliqueStructure,
}

impl CountMethod {
    pub fn name(&self) -> &'static str {
        match self {
            CountMethod::Formula => "Formula",
            CountMethod::BruteForce => "BruteForce",
            CountMethod::CliqueStructure => "CliqueStructure",
        }
    }
}

impl fmt::Display for CountMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassCensus {
    pub class_id: usize,
    pub subsets_total: BigUint,
    pub noncore: BigUint,
    pub core: BigUint,
    pub method: CountMethod,
}

impl ClassCensus {
    pub fn new(class_id: usize, size: usize, noncore: BigUint, method: CountMethod) -> Self {
        let subsets_total = pow2(size as u64);
        let core = &subsets_total - &noncore;
        ClassCensus {
            class_id,
            subsets_total,
            noncore,
            core,
            method,
        }
    }
}

pub(crate) fn pow2(n: u64) -> BigUint {
    BigUint::one() << n
}

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

/// Noncore subsets of a class of the given kind.
pub fn noncore_count_formula(kind: PolyKind, q: u64) -> BigUint {
    match kind {
        PolyKind::Lin => BigUint::zero(),
        PolyKind::Irr => big(q * q - q),
        PolyKind::Sqr => big(q + 1) * (pow2(q - 1) - 1u32),
        PolyKind::Sqd => big(q + 1) * (pow2(q + 1) - big(q + 2)),
    }
}

/// Core subsets of a class of the given kind, the empty set included.
pub fn core_count_formula(kind: PolyKind, q: u64) -> BigUint {
    pow2(crate::classes::class_size(kind, q)) - noncore_count_formula(kind, q)
}

fn guard_brute_force(n: usize) -> Result<()> {
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::size(
            "class size for subset enumeration",
            n as u64,
            BRUTE_FORCE_LIMIT as u64,
        ));
    }
    Ok(())
}

/// Row equations of each member at degree bound `d`.
fn member_equations(f: &FieldSpec, members: &[Mat2], d: usize) -> Vec<[Vec<FieldElem>; 2]> {
    members.iter().map(|a| row_equations(f, a, d)).collect()
}

fn with_member(f: &FieldSpec, e: &Echelon, eqs: &[Vec<FieldElem>; 2]) -> Echelon {
    let mut next = e.clone();
    for eq in eqs {
        next.insert(f, eq);
    }
    next
}

/// Subsets of `eqs[i..]` whose union with the current set gives a full-rank
/// system.
fn count_full_extensions(f: &FieldSpec, eqs: &[[Vec<FieldElem>; 2]], i: usize, e: &Echelon) -> u64 {
    if e.is_full() {
        return 1 << (eqs.len() - i);
    }
    if i == eqs.len() {
        return 0;
    }
    count_full_extensions(f, eqs, i + 1, e) + count_full_extensions(f, eqs, i + 1, &with_member(f, e, &eqs[i]))
}

/// Noncore subsets of `class`, decided one subset at a time by the kernel
/// rank test. Subsets are explored depth-first over the canonical member
/// order; a branch whose system already has full rank is counted whole.
pub fn noncore_count_bruteforce(f: &FieldSpec, class: &MinPolyClass) -> Result<BigUint> {
    let n = class.len();
    guard_brute_force(n)?;
    let d = class.m.degree().unwrap_or(0);
    let eqs = member_equations(f, &class.members, d);
    let split = n.min(10);
    let core: u64 = (0u32..1 << split)
        .into_par_iter()
        .map(|prefix| {
            let mut e = Echelon::new(2 * d);
            for (i, eq) in eqs.iter().enumerate().take(split) {
                if prefix >> i & 1 == 1 {
                    e = with_member(f, &e, eq);
                }
            }
            count_full_extensions(f, &eqs, split, &e)
        })
        .sum();
    // The empty system never has full rank, but the empty set is core.
    Ok(pow2(n as u64) - big(core + 1))
}

/// Noncore subsets of a quadratic class counted as nonempty cliques of its
/// singular-difference graph, using the cell structure of that graph.
///
/// The structure (no edges for IRR; disjoint cliques on the T-cells for
/// SQR; the union of the two B-set partitions for SQD, with cells meeting
/// in at most one vertex) is checked against the graph before counting.
pub fn noncore_count_clique(f: &FieldSpec, class: &MinPolyClass) -> Result<BigUint> {
    let g = singular_difference_graph(f, class)?;
    let n = class.len();
    let edge_iff = |same: &dyn Fn(usize, usize) -> bool| -> Result<()> {
        for i in 0..n {
            for j in i + 1..n {
                if g.has_edge(i, j) != same(i, j) {
                    return Err(Error::Inconsistent(format!(
                        "singular-difference graph of C({}) disagrees with its cells at ({i}, {j})",
                        class.m
                    )));
                }
            }
        }
        Ok(())
    };
    // Subsets of a cell with at least `min` elements, summed over cells.
    let cell_cliques = |cells: &[Vec<usize>], min: u64| -> BigUint {
        cells
            .iter()
            .map(|c| {
                let n = c.len() as u64;
                if min == 1 {
                    pow2(n) - 1u32
                } else {
                    pow2(n) - big(1 + n)
                }
            })
            .sum()
    };
    match class.kind {
        PolyKind::Irr => {
            edge_iff(&|_, _| false)?;
            Ok(big(n as u64))
        }
        PolyKind::Sqr => {
            let p = sqr_partition(f, class)?;
            let cell = p.cell_of();
            edge_iff(&|i, j| cell[i] == cell[j])?;
            Ok(cell_cliques(&p.cells, 1))
        }
        PolyKind::Sqd => {
            let (a, b) = sqd_roots(f, &class.m)?;
            let pa = bset_partition(f, class, a)?;
            let pb = bset_partition(f, class, b)?;
            let (ca, cb) = (pa.cell_of(), pb.cell_of());
            for x in &pa.cells {
                for y in &pb.cells {
                    if x.iter().filter(|i| y.contains(i)).count() > 1 {
                        return Err(Error::Inconsistent(format!(
                            "B-set cells of C({}) meet in more than one matrix",
                            class.m
                        )));
                    }
                }
            }
            edge_iff(&|i, j| ca[i] == ca[j] || cb[i] == cb[j])?;
            // A clique with two edges from different partitions would force
            // two cells to share two vertices, so every clique of size >= 2
            // lies in one cell.
            Ok(cell_cliques(&pa.cells, 2) + cell_cliques(&pb.cells, 2) + big(n as u64))
        }
        PolyKind::Lin => unreachable!("rejected by singular_difference_graph"),
    }
}

/// Subsets of each cell of the `root` B-set partition, as bitmasks over the
/// cell.
fn cell_subsets<'a>(cell: &'a [usize], class: &'a MinPolyClass) -> impl Iterator<Item = Vec<Mat2>> + 'a {
    (1u64..1 << cell.len()).map(move |mask| {
        cell.iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &m)| class.members[m])
            .collect()
    })
}

fn other_root(f: &FieldSpec, class: &MinPolyClass, root: FieldElem) -> Result<FieldElem> {
    let (a, b) = sqd_roots(f, &class.m)?;
    match root {
        r if r == a => Ok(b),
        r if r == b => Ok(a),
        r => Err(Error::NotARoot(r)),
    }
}

/// Subsets `T` of an SQD class with `L(T, root) = 0` and `L(T, other) != 0`.
///
/// Every such `T` lies in one cell of the B-set partition for the other
/// root, so only subsets of those cells are examined.
pub fn l_zero_subset_count(f: &FieldSpec, class: &MinPolyClass, root: FieldElem) -> Result<BigUint> {
    let other = other_root(f, class, root)?;
    let p = bset_partition(f, class, other)?;
    let mut count = 0u64;
    for cell in &p.cells {
        for t in cell_subsets(cell, class) {
            if l_module(f, &t, root)?.is_zero() && !l_module(f, &t, other)?.is_zero() {
                count += 1;
            }
        }
    }
    Ok(big(count))
}

/// For each minimal left ideal `L_v`, the number of nonempty `T` in `class`
/// with `L(T, root) = L_v`, optionally also requiring `L(T, other) = 0`.
fn module_profile(
    f: &FieldSpec,
    class: &MinPolyClass,
    root: FieldElem,
    other_zero: bool,
) -> Result<BTreeMap<[FieldElem; 2], u64>> {
    let other = other_root(f, class, root)?;
    let p = bset_partition(f, class, root)?;
    let mut out = BTreeMap::new();
    for cell in &p.cells {
        for t in cell_subsets(cell, class) {
            let LeftIdealDesc::Minimal(v) = l_module(f, &t, root)? else {
                return Err(Error::Inconsistent("B-set subset with non-minimal L-module".into()));
            };
            if !other_zero || l_module(f, &t, other)?.is_zero() {
                *out.entry(v).or_insert(0) += 1;
            }
        }
    }
    Ok(out)
}

/// `sum over v != w of x[v] * y[w]`.
fn distinct_pairs(x: &BTreeMap<[FieldElem; 2], u64>, y: &BTreeMap<[FieldElem; 2], u64>) -> BigUint {
    let mut total = BigUint::zero();
    for (v, a) in x {
        for (w, b) in y {
            if v != w {
                total += big(*a) * big(*b);
            }
        }
    }
    total
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlobalCensus {
    pub q: u64,
    pub purely_core: BigUint,
    pub core_total: Option<BigUint>,
    pub core_not_purely: Option<BigUint>,
    /// `purely_core / 2^(q^4)`
    pub ratio_to_all: BigRational,
}

fn ratio(num: &BigUint, log2_den: u64) -> BigRational {
    BigRational::new(BigInt::from(num.clone()), BigInt::from(pow2(log2_den)))
}

/// `[c1, c2, c3, c4]`: purely core choices on the LIN, IRR, SQR and SQD
/// classes taken together.
pub fn purely_core_factors(q: u64) -> [BigUint; 4] {
    let irr = (q * q - q) / 2;
    [
        pow2(q),
        num_traits::pow(core_count_formula(PolyKind::Irr, q), irr as usize),
        num_traits::pow(core_count_formula(PolyKind::Sqr, q), q as usize),
        num_traits::pow(core_count_formula(PolyKind::Sqd, q), irr as usize),
    ]
}

/// Closed-form count of purely core subsets of `M_2(F_q)`.
pub fn purely_core_count(q: u64) -> GlobalCensus {
    let purely_core: BigUint = purely_core_factors(q).iter().product();
    let ratio_to_all = ratio(&purely_core, q.pow(4));
    GlobalCensus {
        q,
        purely_core,
        core_total: None,
        core_not_purely: None,
        ratio_to_all,
    }
}

/// Core-but-not-purely-core subsets of `M_2(F_2)`, split by which linear
/// factors of `x(x+1)` divide `phi` of the part outside `C(x(x+1))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CaseSplit {
    pub x_only: u64,
    pub x_plus_1_only: u64,
    pub both: u64,
    pub neither: u64,
}

impl CaseSplit {
    pub fn total(&self) -> u64 {
        self.x_only + self.x_plus_1_only + self.both + self.neither
    }

    fn add(self, o: CaseSplit) -> CaseSplit {
        CaseSplit {
            x_only: self.x_only + o.x_only,
            x_plus_1_only: self.x_plus_1_only + o.x_plus_1_only,
            both: self.both + o.both,
            neither: self.neither + o.neither,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct F2Sweep {
    pub census: GlobalCensus,
    pub cases: CaseSplit,
}

/// Runs the core test on all `2^16` subsets of `M_2(F_2)`.
pub fn full_core_sweep_f2() -> F2Sweep {
    let f = FieldSpec::new(2, 1).expect("F_2");
    let classes = all_classes(&f).expect("q = 2 is enumerable");
    let all: Vec<Mat2> = Mat2::all(&f).collect();
    let class_of: Vec<usize> = all
        .iter()
        .map(|a| {
            classes
                .iter()
                .position(|c| c.position(a).is_some())
                .expect("classes cover M_2")
        })
        .collect();
    let sqd = classes
        .iter()
        .position(|c| c.kind == PolyKind::Sqd)
        .expect("one SQD class");
    let x = FPoly::linear(&f, 0);
    let x1 = FPoly::linear(&f, 1);

    #[derive(Default, Clone, Copy)]
    struct Tally {
        core: u64,
        purely: u64,
        cases: CaseSplit,
    }
    let tally = (0u32..1 << 16)
        .into_par_iter()
        .fold(Tally::default, |mut t, mask| {
            let s: Vec<Mat2> = (0..16).filter(|i| mask >> i & 1 == 1).map(|i| all[i]).collect();
            if !is_core_set(&f, &s) {
                return t;
            }
            t.core += 1;
            let mut parts = vec![Vec::new(); classes.len()];
            for (i, a) in all.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    parts[class_of[i]].push(*a);
                }
            }
            if parts.iter().all(|p| is_core_set(&f, p)) {
                t.purely += 1;
                return t;
            }
            let rest: Vec<Mat2> = s.iter().filter(|a| !parts[sqd].contains(a)).copied().collect();
            let phi0 = phi(&f, &rest);
            match (x.divides(&f, &phi0), x1.divides(&f, &phi0)) {
                (true, false) => t.cases.x_only += 1,
                (false, true) => t.cases.x_plus_1_only += 1,
                (true, true) => t.cases.both += 1,
                (false, false) => t.cases.neither += 1,
            }
            t
        })
        .reduce(Tally::default, |a, b| Tally {
            core: a.core + b.core,
            purely: a.purely + b.purely,
            cases: a.cases.add(b.cases),
        });
    let purely_core = big(tally.purely);
    F2Sweep {
        census: GlobalCensus {
            q: 2,
            ratio_to_all: ratio(&purely_core, 16),
            purely_core,
            core_total: Some(big(tally.core)),
            core_not_purely: Some(big(tally.core - tally.purely)),
        },
        cases: tally.cases,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnionMode {
    /// Every subset of the union, grouped by per-class constraint spaces.
    Exhaustive,
    /// Case decompositions driven by L-module counts.
    Structural,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnionCensus {
    pub purely_core: BigUint,
    pub core_not_purely: BigUint,
}

/// Counts core subsets of a union of classes, given by their ids in
/// `all_classes(f)`. Repeated ids are ignored.
pub fn mixed_union_census(f: &FieldSpec, class_ids: &[usize], mode: UnionMode) -> Result<UnionCensus> {
    let classes = all_classes(f)?;
    let mut ids = class_ids.to_vec();
    ids.sort_unstable();
    ids.dedup();
    let chosen = ids
        .iter()
        .map(|&i| classes.get(i).ok_or(Error::UnknownClass(i)))
        .collect::<Result<Vec<_>>>()?;
    match mode {
        UnionMode::Exhaustive => union_exhaustive(f, &chosen),
        UnionMode::Structural => union_structural(f, &chosen),
    }
}

/// Constraint spaces at bound `d` of the nonempty subsets of `class`, with
/// the number of subsets that are core and noncore within the class.
fn subset_groups(f: &FieldSpec, class: &MinPolyClass, d: usize) -> HashMap<Echelon, [u128; 2]> {
    let own_d = class.m.degree().unwrap_or(0);
    let eqs = member_equations(f, &class.members, d);
    let own_eqs = member_equations(f, &class.members, own_d);
    let mut groups = HashMap::new();

    #[allow(clippy::too_many_arguments)]
    fn rec(
        f: &FieldSpec,
        eqs: &[[Vec<FieldElem>; 2]],
        own_eqs: &[[Vec<FieldElem>; 2]],
        i: usize,
        e: &Echelon,
        own: &Echelon,
        nonempty: bool,
        groups: &mut HashMap<Echelon, [u128; 2]>,
    ) {
        let rest = eqs.len() - i;
        if nonempty && e.is_full() && own.is_full() {
            // Every extension keeps both systems full.
            groups.entry(e.clone()).or_insert([0, 0])[0] += 1u128 << rest;
            return;
        }
        if i == eqs.len() {
            if nonempty {
                let slot = if own.is_full() { 0 } else { 1 };
                groups.entry(e.clone()).or_insert([0, 0])[slot] += 1;
            }
            return;
        }
        rec(f, eqs, own_eqs, i + 1, e, own, nonempty, groups);
        let e2 = with_member(f, e, &eqs[i]);
        let own2 = with_member(f, own, &own_eqs[i]);
        rec(f, eqs, own_eqs, i + 1, &e2, &own2, true, groups);
    }
    rec(
        f,
        &eqs,
        &own_eqs,
        0,
        &Echelon::new(2 * d),
        &Echelon::new(2 * own_d),
        false,
        &mut groups,
    );
    groups
}

fn union_exhaustive(f: &FieldSpec, classes: &[&MinPolyClass]) -> Result<UnionCensus> {
    for c in classes {
        guard_brute_force(c.len())?;
    }
    let total: usize = classes.iter().map(|c| c.len()).sum();
    if total > 127 {
        return Err(Error::size("union size for exhaustive census", total as u64, 127));
    }
    let k = classes.len();
    let mut purely = 1u128;
    let mut not_purely = 0u128;
    for pattern in 1u32..1 << k {
        let parts: Vec<&MinPolyClass> = (0..k).filter(|i| pattern >> i & 1 == 1).map(|i| classes[i]).collect();
        let d = fpoly_lcm(f, parts.iter().map(|c| &c.m)).degree().unwrap_or(0);
        // state: constraint space -> [all parts core so far, some part noncore]
        let mut states: HashMap<Echelon, [u128; 2]> = HashMap::from([(Echelon::new(2 * d), [1, 0])]);
        for c in &parts {
            let groups = subset_groups(f, c, d);
            let merged: Vec<HashMap<Echelon, [u128; 2]>> = states
                .par_iter()
                .map(|(se, [p0, p1])| {
                    let mut local: HashMap<Echelon, [u128; 2]> = HashMap::new();
                    for (ge, [g0, g1]) in &groups {
                        let mut e = se.clone();
                        e.merge(f, ge);
                        let slot = local.entry(e).or_insert([0, 0]);
                        slot[0] += p0 * g0;
                        slot[1] += p0 * g1 + p1 * (g0 + g1);
                    }
                    local
                })
                .collect();
            states = HashMap::new();
            for local in merged {
                for (e, [a, b]) in local {
                    let slot = states.entry(e).or_insert([0, 0]);
                    slot[0] += a;
                    slot[1] += b;
                }
            }
        }
        for (e, [p, np]) in states {
            if e.is_full() {
                purely += p;
                not_purely += np;
            }
        }
    }
    Ok(UnionCensus {
        purely_core: BigUint::from(purely),
        core_not_purely: BigUint::from(not_purely),
    })
}

fn core_count(f: &FieldSpec, c: &MinPolyClass) -> BigUint {
    core_count_formula(c.kind, f.q() as u64)
}

type SharedRoot<'a> = (&'a MinPolyClass, &'a MinPolyClass, FieldElem, FieldElem, FieldElem);

/// Two SQD classes `C((x-a)(x-c))`, `C((x-c)(x-b))` sharing the root `c`:
/// returns `(c1, a, c, b)` with `c1` the class containing `a`.
fn shared_root_pair<'a>(f: &FieldSpec, x: &'a MinPolyClass, y: &'a MinPolyClass) -> Result<Option<SharedRoot<'a>>> {
    let (x0, x1) = sqd_roots(f, &x.m)?;
    let (y0, y1) = sqd_roots(f, &y.m)?;
    for (a, c) in [(x0, x1), (x1, x0)] {
        for (c2, b) in [(y0, y1), (y1, y0)] {
            if c == c2 && a != b {
                return Ok(Some((x, y, a, c, b)));
            }
        }
    }
    Ok(None)
}

/// Core-but-not-purely-core subsets of `C1 ∪ C2`, with `C1` having roots
/// `{a, c}` and `C2` roots `{c, b}`.
fn two_sqd_not_purely(
    f: &FieldSpec,
    c1: &MinPolyClass,
    c2: &MinPolyClass,
    a: FieldElem,
    c: FieldElem,
    b: FieldElem,
) -> Result<BigUint> {
    let one_core_one_not = (core_count(f, c1) - 1u32) * l_zero_subset_count(f, c2, c)?
        + (core_count(f, c2) - 1u32) * l_zero_subset_count(f, c1, c)?;
    // Both noncore: L(T1, c) = L(T2, c) = 0 and L(T1, a) != L(T2, b).
    let both = distinct_pairs(&module_profile(f, c1, a, true)?, &module_profile(f, c2, b, true)?);
    Ok(one_core_one_not + both)
}

fn union_structural(f: &FieldSpec, classes: &[&MinPolyClass]) -> Result<UnionCensus> {
    let purely_core: BigUint = classes.iter().map(|c| core_count(f, c)).product();
    let sqd: Vec<&MinPolyClass> = classes.iter().copied().filter(|c| c.kind == PolyKind::Sqd).collect();
    let rest: Vec<&MinPolyClass> = classes.iter().copied().filter(|c| c.kind != PolyKind::Sqd).collect();
    let unsupported = || {
        let names: Vec<String> = classes.iter().map(|c| format!("C({})", c.m)).collect();
        Error::UnsupportedUnion(names.join(" ∪ "))
    };
    let core_not_purely = match (sqd.len(), rest.len()) {
        // Without SQD classes, or with a single class, core means purely core.
        (0, _) | (1, 0) => BigUint::zero(),
        (2, 0) => {
            let (c1, c2, a, c, b) = shared_root_pair(f, sqd[0], sqd[1])?.ok_or_else(unsupported)?;
            two_sqd_not_purely(f, c1, c2, a, c, b)?
        }
        (2, 1) if rest[0].kind == PolyKind::Sqr => {
            let sqr = rest[0];
            let s = sqr.roots(f)[0];
            let (x, y, a, c, b) = shared_root_pair(f, sqd[0], sqd[1])?.ok_or_else(unsupported)?;
            // Orient the path so the SQR root is the end `a` of `C1`.
            let (c1, c2, a, b) = if s == a {
                (x, y, a, b)
            } else if s == b {
                (y, x, b, a)
            } else {
                return Err(unsupported());
            };
            let without_sqr = two_sqd_not_purely(f, c1, c2, a, c, b)?;
            let core0 = core_count(f, sqr) - 1u32;
            let core1 = core_count(f, c1) - 1u32;
            let core2 = core_count(f, c2) - 1u32;
            let noncore1 = noncore_count_formula(PolyKind::Sqd, f.q() as u64);
            let lz1_a = l_zero_subset_count(f, c1, a)?;
            let lz2_c = l_zero_subset_count(f, c2, c)?;
            // T1 core and nonempty, T2 noncore with L(T2, c) = 0.
            let case1 = core1 * &lz2_c;
            // T1 noncore and T2 core: either T2 empty and L(T1, a) = 0, or
            // T2 nonempty and T1 arbitrary noncore.
            let case2 = &lz1_a + noncore1 * core2;
            // Both noncore with L(T2, c) = 0, and L(T1, a) ∩ L(T2, b) = 0.
            let case3 =
                &lz1_a * &lz2_c + distinct_pairs(&module_profile(f, c1, a, false)?, &module_profile(f, c2, b, true)?);
            without_sqr + core0 * (case1 + case2 + case3)
        }
        _ => return Err(unsupported()),
    };
    Ok(UnionCensus {
        purely_core,
        core_not_purely,
    })
}

/// An inequality checked exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundCheck {
    pub name: String,
    pub lhs: BigRational,
    pub rhs: BigRational,
    pub holds: bool,
}

impl BoundCheck {
    fn less(name: impl Into<String>, lhs: BigRational, rhs: BigRational) -> Self {
        let holds = lhs < rhs;
        BoundCheck {
            name: name.into(),
            lhs,
            rhs,
            holds,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsymptoticReport {
    pub q: u64,
    pub k: u64,
    /// Probability that a uniformly random subset of one SQD class is core.
    pub rho: BigRational,
    pub bound_checks: Vec<BoundCheck>,
}

fn r(n: BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn inv_pow2(n: u64) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(pow2(n)))
}

pub fn rho(q: u64) -> BigRational {
    let noncore = noncore_count_formula(PolyKind::Sqd, q);
    BigRational::one() - BigRational::new(BigInt::from(noncore), BigInt::from(pow2(q * q + q)))
}

pub fn asymptotic_report(q: u64) -> AsymptoticReport {
    let k = (q * q - q) / 2;
    let rho = rho(q);
    let one = BigRational::one();
    let mut checks = Vec::new();

    let base = one.clone() - inv_pow2(2 * k);
    checks.push(BoundCheck::less(
        "(1 - 4^-k)^-k < 1 + 2^-k",
        num_traits::pow(base.recip(), k as usize),
        &one + inv_pow2(k),
    ));
    checks.push(BoundCheck::less(
        "1 - 2^-(q^2-q) < rho",
        &one - inv_pow2(q * q - q),
        rho.clone(),
    ));
    checks.push(BoundCheck::less(
        "rho^-k - 1 < 2^-k",
        num_traits::pow(rho.recip(), k as usize) - &one,
        inv_pow2(k),
    ));
    if q == 2 {
        checks.push(BoundCheck::less(
            "core-not-purely < purely/2",
            r(big(2052)),
            r(purely_core_count(2).purely_core) / BigRational::from_integer(BigInt::from(2)),
        ));
    }
    AsymptoticReport {
        q,
        k,
        rho,
        bound_checks: checks,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusRow {
    pub class_id: usize,
    pub poly: FPoly,
    pub kind: PolyKind,
    pub size: usize,
    pub counts: Vec<ClassCensus>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusReport {
    pub q: u64,
    pub rows: Vec<CensusRow>,
    pub global: GlobalCensus,
    pub asymptotics: AsymptoticReport,
    /// Descriptions of classes where two counting methods disagree.
    pub mismatches: Vec<String>,
}

/// Per-class formula counts, optionally checked by brute force, plus the
/// purely core total and the asymptotic checks.
pub fn census_report(f: &FieldSpec, brute_force: bool) -> Result<CensusReport> {
    let q = f.q() as u64;
    if brute_force {
        guard_brute_force((q * q + q) as usize)?;
    }
    let classes = all_classes(f)?;
    let mut rows = Vec::with_capacity(classes.len());
    let mut mismatches = Vec::new();
    for (id, c) in classes.iter().enumerate() {
        let mut counts = vec![ClassCensus::new(
            id,
            c.len(),
            noncore_count_formula(c.kind, q),
            CountMethod::Formula,
        )];
        if brute_force {
            let bf = ClassCensus::new(id, c.len(), noncore_count_bruteforce(f, c)?, CountMethod::BruteForce);
            if bf.noncore != counts[0].noncore {
                mismatches.push(format!(
                    "C({}): formula {} != brute force {}",
                    c.m, counts[0].noncore, bf.noncore
                ));
            }
            counts.push(bf);
        }
        rows.push(CensusRow {
            class_id: id,
            poly: c.m.clone(),
            kind: c.kind,
            size: c.len(),
            counts,
        });
    }
    let mut global = purely_core_count(q);
    let classwise: BigUint = rows.iter().map(|r| r.counts[0].core.clone()).product();
    if classwise != global.purely_core {
        mismatches.push(format!(
            "classwise purely core product {classwise} != closed form {}",
            global.purely_core
        ));
    }
    if q == 2 {
        let sweep = full_core_sweep_f2();
        global.core_total = sweep.census.core_total;
        global.core_not_purely = sweep.census.core_not_purely;
    }
    Ok(CensusReport {
        q,
        rows,
        global,
        asymptotics: asymptotic_report(q),
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::class_of;

    fn f(q: u64) -> FieldSpec {
        FieldSpec::from_order(q).unwrap()
    }

    #[test]
    fn formula_values() {
        assert_eq!(noncore_count_formula(PolyKind::Sqr, 2), big(3));
        assert_eq!(noncore_count_formula(PolyKind::Sqd, 2), big(12));
        assert_eq!(noncore_count_formula(PolyKind::Sqd, 3), big(44));
        assert_eq!(noncore_count_formula(PolyKind::Irr, 4), big(12));
        assert_eq!(noncore_count_formula(PolyKind::Lin, 7), big(0));
        assert_eq!(core_count_formula(PolyKind::Sqd, 3), big(4052));
    }

    #[test]
    fn brute_force_small_classes() {
        let f2 = f(2);
        let sqd = class_of(&f2, &FPoly::from_roots(&f2, &[0, 1])).unwrap();
        assert_eq!(noncore_count_bruteforce(&f2, &sqd).unwrap(), big(12));
        let irr = class_of(&f2, &FPoly::from_coeffs(vec![1, 1, 1])).unwrap();
        assert_eq!(noncore_count_bruteforce(&f2, &irr).unwrap(), big(2));
        let f3 = f(3);
        let sqr = class_of(&f3, &FPoly::from_coeffs(vec![0, 0, 1])).unwrap();
        assert_eq!(noncore_count_bruteforce(&f3, &sqr).unwrap(), big(12));
        let lin = class_of(&f3, &FPoly::linear(&f3, 1)).unwrap();
        assert_eq!(noncore_count_bruteforce(&f3, &lin).unwrap(), big(0));
    }

    #[test]
    fn brute_force_matches_subset_loop() {
        // Plain loop over bitmasks with is_core_set as the oracle.
        let f3 = f(3);
        for c in all_classes(&f3).unwrap() {
            let n = c.len();
            let plain = (0u32..1 << n)
                .filter(|mask| {
                    let s: Vec<Mat2> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| c.members[i]).collect();
                    !is_core_set(&f3, &s)
                })
                .count();
            assert_eq!(noncore_count_bruteforce(&f3, &c).unwrap(), big(plain as u64));
        }
    }

    #[test]
    fn clique_counts_agree() {
        for q in [2, 3, 4] {
            let fq = f(q);
            for c in all_classes(&fq).unwrap().iter().filter(|c| c.kind != PolyKind::Lin) {
                let n = noncore_count_clique(&fq, c).unwrap();
                assert_eq!(n, noncore_count_formula(c.kind, q));
                let g = singular_difference_graph(&fq, c).unwrap();
                assert_eq!(n, BigUint::from(g.count_cliques()));
            }
        }
        let f2 = f(2);
        let lin = class_of(&f2, &FPoly::linear(&f2, 0)).unwrap();
        assert!(matches!(
            noncore_count_clique(&f2, &lin),
            Err(Error::WrongClassKind { .. })
        ));
    }

    #[test]
    fn l_zero_counts() {
        for (q, expect) in [(2, 3), (3, 16), (4, 55)] {
            let fq = f(q);
            for c in all_classes(&fq).unwrap().iter().filter(|c| c.kind == PolyKind::Sqd) {
                for root in c.roots(&fq) {
                    assert_eq!(l_zero_subset_count(&fq, c, root).unwrap(), big(expect));
                }
            }
        }
    }

    #[test]
    fn purely_core_closed_form() {
        let g = purely_core_count(2);
        assert_eq!(g.purely_core, big(10400));
        let factors = purely_core_factors(2);
        assert_eq!(factors, [big(4), big(2), big(25), big(52)]);
        for q in [2, 3, 4] {
            let fq = f(q);
            let classwise: BigUint = all_classes(&fq)
                .unwrap()
                .iter()
                .map(|c| pow2(c.len() as u64) - noncore_count_formula(c.kind, q))
                .product();
            assert_eq!(classwise, purely_core_count(q).purely_core);
        }
    }

    #[test]
    fn f2_sweep() {
        let s = full_core_sweep_f2();
        assert_eq!(s.census.core_total, Some(big(12452)));
        assert_eq!(s.census.purely_core, big(10400));
        assert_eq!(s.census.core_not_purely, Some(big(2052)));
        assert_eq!(
            s.cases,
            CaseSplit {
                x_only: 54,
                x_plus_1_only: 54,
                both: 1944,
                neither: 0
            }
        );
    }

    #[test]
    fn exhaustive_union_of_whole_f2_ring() {
        let f2 = f(2);
        let ids: Vec<usize> = (0..6).collect();
        let u = mixed_union_census(&f2, &ids, UnionMode::Exhaustive).unwrap();
        assert_eq!(u.purely_core, big(10400));
        assert_eq!(u.core_not_purely, big(2052));
    }

    #[test]
    fn exhaustive_union_matches_plain_loop() {
        let f3 = f(3);
        let classes = all_classes(&f3).unwrap();
        // C(x - 1), C(x^2), and an IRR class: 1 + 8 + 6 = 15 matrices.
        let ids = [1, 3, 6];
        let members: Vec<(usize, Mat2)> = ids
            .iter()
            .flat_map(|&i| classes[i].members.iter().map(move |m| (i, *m)))
            .collect();
        let (mut purely, mut not_purely) = (0u64, 0u64);
        for mask in 0u32..1 << members.len() {
            let s: Vec<Mat2> = (0..members.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| members[i].1)
                .collect();
            if !is_core_set(&f3, &s) {
                continue;
            }
            let pure = ids.iter().all(|&id| {
                let part: Vec<Mat2> = (0..members.len())
                    .filter(|&i| mask >> i & 1 == 1 && members[i].0 == id)
                    .map(|i| members[i].1)
                    .collect();
                is_core_set(&f3, &part)
            });
            if pure {
                purely += 1
            } else {
                not_purely += 1
            }
        }
        let u = mixed_union_census(&f3, &ids, UnionMode::Exhaustive).unwrap();
        assert_eq!((u.purely_core, u.core_not_purely), (big(purely), big(not_purely)));
        assert_eq!(not_purely, 0);
    }

    fn f3_ids(f3: &FieldSpec, polys: &[FPoly]) -> Vec<usize> {
        let classes = all_classes(f3).unwrap();
        polys
            .iter()
            .map(|m| classes.iter().position(|c| c.m == *m).unwrap())
            .collect()
    }

    #[test]
    fn two_sqd_union_over_f3() {
        let f3 = f(3);
        let ids = f3_ids(&f3, &[FPoly::from_roots(&f3, &[0, 1]), FPoly::from_roots(&f3, &[1, 2])]);
        let s = mixed_union_census(&f3, &ids, UnionMode::Structural).unwrap();
        let e = mixed_union_census(&f3, &ids, UnionMode::Exhaustive).unwrap();
        assert_eq!(s.core_not_purely, big(2 * 4051 * 16 + 12 * 16));
        assert_eq!(s.purely_core, big(4052 * 4052));
        assert_eq!(s, e);
    }

    #[test]
    fn sqr_and_two_sqd_union_over_f3() {
        let f3 = f(3);
        let ids = f3_ids(
            &f3,
            &[
                FPoly::from_roots(&f3, &[0, 0]),
                FPoly::from_roots(&f3, &[0, 1]),
                FPoly::from_roots(&f3, &[1, 2]),
            ],
        );
        let s = mixed_union_census(&f3, &ids, UnionMode::Structural).unwrap();
        let e = mixed_union_census(&f3, &ids, UnionMode::Exhaustive).unwrap();
        let expect = 243 * (4051 * 16 + 16 + 44 * 4051 + 256 + 336) + 129824u64;
        assert_eq!(s.core_not_purely, big(expect));
        assert_eq!(s.purely_core, big(244 * 4052 * 4052));
        assert_eq!(s, e);
    }

    #[test]
    fn structural_rejects_unknown_shapes() {
        let f4 = f(4);
        let classes = all_classes(&f4).unwrap();
        let sqd: Vec<usize> = (0..classes.len())
            .filter(|&i| classes[i].kind == PolyKind::Sqd)
            .collect();
        let disjoint = sqd
            .iter()
            .flat_map(|&i| sqd.iter().map(move |&j| (i, j)))
            .find(|&(i, j)| {
                let (x, y) = (classes[i].roots(&f4), classes[j].roots(&f4));
                x.iter().all(|r| !y.contains(r))
            })
            .unwrap();
        assert!(matches!(
            mixed_union_census(&f4, &[disjoint.0, disjoint.1], UnionMode::Structural),
            Err(Error::UnsupportedUnion(_))
        ));
        assert_eq!(
            mixed_union_census(&f4, &[999], UnionMode::Structural),
            Err(Error::UnknownClass(999))
        );
    }

    #[test]
    fn asymptotics_small_q() {
        let a = asymptotic_report(2);
        assert_eq!(a.rho, BigRational::new(BigInt::from(13), BigInt::from(16)));
        assert_eq!(a.k, 1);
        assert_eq!(a.bound_checks.len(), 4);
        assert!(a.bound_checks.iter().all(|c| c.holds));
        let a3 = asymptotic_report(3);
        assert_eq!(a3.rho, BigRational::new(BigInt::from(1013), BigInt::from(1024)));
        assert!(a3.bound_checks.iter().all(|c| c.holds));
    }
}
