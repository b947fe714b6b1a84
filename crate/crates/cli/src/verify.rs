//! Recomputes the published counts and compares them with the expected
//! values.

use num_rational::BigRational;
use num_traits::One;
use serde_json::json;

use coreset::census::{
    asymptotic_report, core_count_formula, full_core_sweep_f2, l_zero_subset_count, mixed_union_census,
    noncore_count_bruteforce, noncore_count_clique, noncore_count_formula, purely_core_count, purely_core_factors, rho,
    UnionMode,
};
use coreset::classes::{all_classes, MinPolyClass};
use coreset::nullideal::bset;
use coreset::{FPoly, FieldSpec, Mat2, PolyKind};

use crate::{Level, Output, EXIT_MISMATCH};

struct Check {
    name: String,
    expected: String,
    actual: String,
}

impl Check {
    fn new(name: &str, expected: impl ToString, actual: impl ToString) -> Self {
        Check {
            name: name.to_string(),
            expected: expected.to_string(),
            actual: actual.to_string(),
        }
    }

    fn passed(&self) -> bool {
        self.expected == self.actual
    }
}

fn field(q: u64) -> FieldSpec {
    FieldSpec::from_order(q).expect("small prime power")
}

fn classes(f: &FieldSpec) -> Vec<MinPolyClass> {
    all_classes(f).expect("q <= 16")
}

fn joined<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn class_ids(f: &FieldSpec, polys: &[FPoly]) -> Vec<usize> {
    let cs = classes(f);
    polys
        .iter()
        .map(|m| cs.iter().position(|c| c.m == *m).expect("class exists"))
        .collect()
}

/// The twelve B-sets of `C(x(x+1))` over `F_2`: `(A, root, B(A, root))`.
fn f2_bset_fixtures() -> Vec<(Mat2, u16, Vec<Mat2>)> {
    let a1 = Mat2::new(0, 0, 0, 1);
    let a2 = Mat2::new(0, 1, 0, 1);
    let a3 = Mat2::new(0, 0, 1, 1);
    let a4 = Mat2::new(1, 0, 0, 0);
    let a5 = Mat2::new(1, 1, 0, 0);
    let a6 = Mat2::new(1, 0, 1, 0);
    vec![
        (a1, 0, vec![a1, a3]),
        (a1, 1, vec![a1, a2]),
        (a2, 0, vec![a2, a6]),
        (a2, 1, vec![a2, a1]),
        (a3, 0, vec![a3, a1]),
        (a3, 1, vec![a3, a5]),
        (a4, 0, vec![a4, a5]),
        (a4, 1, vec![a4, a6]),
        (a5, 0, vec![a5, a4]),
        (a5, 1, vec![a5, a3]),
        (a6, 0, vec![a6, a2]),
        (a6, 1, vec![a6, a4]),
    ]
}

fn quick_checks() -> Vec<Check> {
    let mut out = Vec::new();
    let f2 = field(2);
    let f3 = field(3);

    let sweep = full_core_sweep_f2();
    let c = &sweep.census;
    out.push(Check::new(
        "12452 core subsets of M2(F2)",
        12452,
        c.core_total.clone().unwrap_or_default(),
    ));
    out.push(Check::new("10400 purely core subsets of M2(F2)", 10400, &c.purely_core));
    out.push(Check::new(
        "2052 core subsets of M2(F2) that are not purely core",
        2052,
        c.core_not_purely.clone().unwrap_or_default(),
    ));
    let s = sweep.cases;
    out.push(Check::new(
        "not purely core over F2 split 54+54+1944",
        "54,54,1944,0",
        joined([s.x_only, s.x_plus_1_only, s.both, s.neither]),
    ));

    let c2 = classes(&f2);
    out.push(Check::new(
        "class sizes over F2",
        "1,1,2,3,3,6",
        joined(c2.iter().map(|c| c.len())),
    ));
    out.push(Check::new(
        "noncore subsets per class over F2 by enumeration",
        "0,0,2,3,3,12",
        joined(
            c2.iter()
                .map(|c| noncore_count_bruteforce(&f2, c).expect("small class")),
        ),
    ));
    for q in [2, 3] {
        let fq = field(q);
        let cs = classes(&fq);
        out.push(Check::new(
            &format!("noncore subsets per class over F{q}: enumeration == formula"),
            joined(cs.iter().map(|c| noncore_count_formula(c.kind, q))),
            joined(
                cs.iter()
                    .map(|c| noncore_count_bruteforce(&fq, c).expect("small class")),
            ),
        ));
    }

    let mut bad = 0;
    for (a, root, expect) in f2_bset_fixtures() {
        let mut expect = expect;
        expect.sort();
        if bset(&f2, &a, root).ok() != Some(expect) {
            bad += 1;
        }
    }
    out.push(Check::new(
        "B-sets of C(x(x+1)) over F2 (12 fixtures)",
        "0 mismatches",
        format!("{bad} mismatches"),
    ));

    let factors = purely_core_factors(2);
    out.push(Check::new(
        "purely core factors over F2 (2^3*5^2*52)",
        "4,2,25,52",
        joined(factors.iter()),
    ));
    out.push(Check::new(
        "purely core closed form over F2",
        10400,
        purely_core_count(2).purely_core,
    ));
    out.push(Check::new(
        "core subsets of an SQD class over F3",
        4052,
        core_count_formula(PolyKind::Sqd, 3),
    ));
    out.push(Check::new(
        "core subsets of an SQR class over F3",
        244,
        core_count_formula(PolyKind::Sqr, 3),
    ));
    for (q, expect) in [(2, 3), (3, 16)] {
        let fq = field(q);
        let sqd: Vec<MinPolyClass> = classes(&fq).into_iter().filter(|c| c.kind == PolyKind::Sqd).collect();
        let counts: Vec<String> = sqd
            .iter()
            .flat_map(|c| {
                let fq = &fq;
                c.roots(fq)
                    .into_iter()
                    .map(move |r| l_zero_subset_count(fq, c, r).expect("SQD").to_string())
            })
            .collect();
        out.push(Check::new(
            &format!("subsets with one zero L-module per SQD class and root over F{q}"),
            joined(std::iter::repeat_n(expect, counts.len())),
            counts.join(","),
        ));
    }
    out.push(Check::new("rho over F2", "13/16", rho(2)));
    out.push(Check::new("rho over F3", "1013/1024", rho(3)));
    for q in [2, 3] {
        let a = asymptotic_report(q);
        out.push(Check::new(
            &format!("asymptotic bounds at q = {q}"),
            "all hold",
            failing(&a),
        ));
    }

    let ids = class_ids(&f3, &[FPoly::from_roots(&f3, &[0, 1]), FPoly::from_roots(&f3, &[1, 2])]);
    let s = mixed_union_census(&f3, &ids, UnionMode::Structural).expect("supported union");
    out.push(Check::new(
        "two-SQD union over F3, structural (129824)",
        129824,
        &s.core_not_purely,
    ));
    out.push(Check::new(
        "two-SQD union over F3, purely core (4052^2)",
        4052u64 * 4052,
        &s.purely_core,
    ));
    out
}

fn failing(a: &coreset::census::AsymptoticReport) -> String {
    let bad: Vec<&str> = a
        .bound_checks
        .iter()
        .filter(|c| !c.holds)
        .map(|c| c.name.as_str())
        .collect();
    if bad.is_empty() {
        "all hold".into()
    } else {
        format!("failing: {}", bad.join("; "))
    }
}

fn full_checks() -> Vec<Check> {
    let mut out = Vec::new();
    let f4 = field(4);
    let cs = classes(&f4);
    for (kind, expect) in [(PolyKind::Sqd, 130), (PolyKind::Sqr, 35), (PolyKind::Irr, 12)] {
        let counts: Vec<String> = cs
            .iter()
            .filter(|c| c.kind == kind)
            .map(|c| noncore_count_clique(&f4, c).expect("quadratic class").to_string())
            .collect();
        out.push(Check::new(
            &format!("clique-structure noncore counts of {kind} classes over F4"),
            joined(std::iter::repeat_n(expect, counts.len())),
            counts.join(","),
        ));
    }

    let f3 = field(3);
    let two = class_ids(&f3, &[FPoly::from_roots(&f3, &[0, 1]), FPoly::from_roots(&f3, &[1, 2])]);
    let e = mixed_union_census(&f3, &two, UnionMode::Exhaustive).expect("small union");
    out.push(Check::new(
        "two-SQD union over F3, exhaustive == structural (129824)",
        129824,
        &e.core_not_purely,
    ));
    let three = class_ids(
        &f3,
        &[
            FPoly::from_roots(&f3, &[0, 0]),
            FPoly::from_roots(&f3, &[0, 1]),
            FPoly::from_roots(&f3, &[1, 2]),
        ],
    );
    let expected = 243u64 * (4051 * 16 + 16 + 44 * 4051 + 256 + 12 * 7 * 4) + 129824;
    let s = mixed_union_census(&f3, &three, UnionMode::Structural).expect("supported union");
    let e = mixed_union_census(&f3, &three, UnionMode::Exhaustive).expect("small union");
    out.push(Check::new(
        "SQR and two-SQD union over F3, structural",
        expected,
        &s.core_not_purely,
    ));
    out.push(Check::new(
        "SQR and two-SQD union over F3, exhaustive",
        expected,
        &e.core_not_purely,
    ));
    out.push(Check::new(
        "SQR and two-SQD union over F3, purely core (244*4052^2)",
        244u64 * 4052 * 4052,
        &e.purely_core,
    ));

    let bad: Vec<u64> = (2..=16u64)
        .filter(|&q| coreset::ffield::prime_power(q).is_some())
        .filter(|&q| asymptotic_report(q).bound_checks.iter().any(|c| !c.holds))
        .collect();
    let bad = if bad.is_empty() {
        "none".to_string()
    } else {
        joined(bad)
    };
    out.push(Check::new(
        "failing asymptotic bounds for prime powers q <= 16",
        "none",
        bad,
    ));

    let ratios: Vec<BigRational> = (2..=5u64).map(|q| purely_core_count(q).ratio_to_all).collect();
    let increasing = ratios.windows(2).all(|w| w[0] < w[1]);
    let close = ratios[3] > BigRational::one() - BigRational::new(1.into(), 1000.into());
    out.push(Check::new(
        "purely core ratio increases for q = 2..5 and exceeds 0.999 at q = 5",
        "true,true",
        joined([increasing, close]),
    ));
    out
}

pub fn run(level: Level) -> Output {
    let mut checks = quick_checks();
    if level == Level::Full {
        checks.extend(full_checks());
    }
    let mut text = String::new();
    for c in &checks {
        let verdict = if c.passed() { "PASS" } else { "FAIL" };
        text.push_str(&format!(
            "{}: {verdict} (expected {}, actual {})\n",
            c.name, c.expected, c.actual
        ));
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    text.push_str(&format!("{} checks, {failed} failed\n", checks.len()));
    let json = json!({
        "checks": checks.iter().map(|c| json!({
            "name": c.name,
            "expected": c.expected,
            "actual": c.actual,
            "pass": c.passed(),
        })).collect::<Vec<_>>(),
        "failed": failed,
    });
    Output {
        text,
        json,
        status: if failed > 0 { EXIT_MISMATCH } else { 0 },
    }
}
