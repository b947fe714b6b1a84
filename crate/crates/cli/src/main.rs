use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use coreset::census::{census_report, CensusReport};
use coreset::classes::{all_classes, bset_partition, class_of, class_size};
use coreset::nullideal::{bset, is_core, l_module, phi};
use coreset::{algebra, Error, FieldElem, FieldSpec, Mat2};

mod text;
mod verify;

use text::{parse_field, parse_matrix, parse_poly, SetFile};

const EXIT_MISMATCH: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_SIZE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "coreset",
    version,
    about = "Core subsets of 2x2 matrix rings over finite fields"
)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads for census runs (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimal polynomial and kind of each matrix.
    Minpoly {
        #[arg(long)]
        q: Option<String>,
        /// Read matrices from a set file instead.
        #[arg(long)]
        file: Option<PathBuf>,
        /// Matrices as `a,b;c,d`.
        matrices: Vec<String>,
    },
    /// Kind, roots and class size of a monic polynomial of degree 1 or 2.
    Classify {
        #[arg(long)]
        q: String,
        /// Polynomial such as `x^2+2x+1`.
        poly: String,
    },
    /// All minimal-polynomial classes of M_2(F_q).
    Classes {
        #[arg(long)]
        q: String,
    },
    /// Decide whether the set in a set file is core.
    CoreTest { file: PathBuf },
    /// L-module L(S, a) of a set of matrices.
    Lmodule {
        #[arg(long)]
        q: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long)]
        root: FieldElem,
        matrices: Vec<String>,
    },
    /// B-set B(A, a) of an SQD matrix, or the whole B-set partition.
    Bset {
        #[arg(long)]
        q: String,
        #[arg(long)]
        root: FieldElem,
        /// Print the partition of the class of the matrix instead.
        #[arg(long)]
        partition: bool,
        matrix: String,
    },
    /// Noncore counts per class and purely core totals.
    Census {
        #[arg(long)]
        q: String,
        /// Also count every class by subset enumeration.
        #[arg(long)]
        brute_force: bool,
    },
    /// Recompute the published counts and compare.
    VerifyPaper {
        #[arg(long, value_enum, default_value_t = Level::Quick)]
        level: Level,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Level {
    Quick,
    Full,
}

/// What a command prints, in both forms, and its exit status.
struct Output {
    text: String,
    json: Value,
    status: u8,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output { text, json, status: 0 }
    }
}

fn status_of(e: &Error) -> u8 {
    match e {
        Error::SizeExceeded { .. } => EXIT_SIZE,
        _ => EXIT_USAGE,
    }
}

fn read_set(path: &PathBuf) -> coreset::Result<SetFile> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse {
        line: None,
        msg: format!("cannot read {}: {e}", path.display()),
    })?;
    SetFile::parse(&text)
}

/// Matrices either from `--file` or from `--q` plus positional arguments.
fn matrices_arg(q: Option<&str>, file: Option<&PathBuf>, inline: &[String]) -> coreset::Result<(FieldSpec, Vec<Mat2>)> {
    match (file, q) {
        (Some(path), _) => {
            let set = read_set(path)?;
            Ok((set.field, set.matrices))
        }
        (None, Some(q)) => {
            let f = parse_field(q)?;
            let ms = inline
                .iter()
                .map(|m| parse_matrix(&f, m))
                .collect::<coreset::Result<Vec<_>>>()?;
            Ok((f, ms))
        }
        (None, None) => Err(Error::Parse {
            line: None,
            msg: "either --q or --file is required".into(),
        }),
    }
}

fn cmd_minpoly(f: &FieldSpec, ms: &[Mat2]) -> coreset::Result<Output> {
    let mut text = String::new();
    let mut rows = Vec::new();
    for m in ms {
        let p = algebra::min_poly(f, m);
        let kind = algebra::classify_quadratic(f, &p)?;
        text.push_str(&format!("{p} ({kind})\n"));
        rows.push(json!({"matrix": m.to_string(), "poly": p.to_string(), "kind": kind.name()}));
    }
    Ok(Output::ok(text, json!({"q": f.q(), "results": rows})))
}

fn cmd_classify(f: &FieldSpec, poly: &str) -> coreset::Result<Output> {
    let m = parse_poly(f, poly)?;
    let kind = algebra::classify_quadratic(f, &m)?;
    let roots = m.roots(f);
    let size = class_size(kind, f.q() as u64);
    let roots_text: Vec<String> = roots.iter().map(u16::to_string).collect();
    let text = format!(
        "{m} ({kind})\nroots: {}\nclass size: {size}\n",
        if roots.is_empty() {
            "none".to_string()
        } else {
            roots_text.join(" ")
        }
    );
    Ok(Output::ok(
        text,
        json!({"q": f.q(), "poly": m.to_string(), "kind": kind.name(), "roots": roots, "class_size": size}),
    ))
}

/// Left-aligned columns separated by two spaces.
fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in width.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<String>| -> String {
        let padded: Vec<String> = cells.iter().zip(&width).map(|(c, w)| format!("{c:<w$}")).collect();
        format!("{}\n", padded.join("  ").trim_end())
    };
    let mut out = line(header.iter().map(|h| h.to_string()).collect());
    for r in rows {
        out.push_str(&line(r.clone()));
    }
    out
}

fn cmd_classes(f: &FieldSpec) -> coreset::Result<Output> {
    let classes = all_classes(f)?;
    let rows: Vec<Vec<String>> = classes
        .iter()
        .enumerate()
        .map(|(i, c)| vec![i.to_string(), c.m.to_string(), c.kind.to_string(), c.len().to_string()])
        .collect();
    let json_rows: Vec<Value> = classes
        .iter()
        .enumerate()
        .map(|(i, c)| json!({"id": i, "poly": c.m.to_string(), "kind": c.kind.name(), "size": c.len()}))
        .collect();
    Ok(Output::ok(
        table(&["id", "poly", "kind", "size"], &rows),
        json!({"q": f.q(), "classes": json_rows}),
    ))
}

fn cmd_core_test(set: &SetFile) -> coreset::Result<Output> {
    let f = &set.field;
    let mut s = set.matrices.clone();
    s.sort();
    s.dedup();
    let verdict = is_core(f, &s);
    let phi_s = phi(f, &s);
    // Class decomposition, ordered by degree and then coefficients of the
    // minimal polynomial.
    let mut parts: Vec<(coreset::FPoly, Vec<Mat2>)> = Vec::new();
    for a in &s {
        let m = algebra::min_poly(f, a);
        match parts.iter_mut().find(|(p, _)| *p == m) {
            Some((_, v)) => v.push(*a),
            None => parts.push((m, vec![*a])),
        }
    }
    parts.sort_by(|x, y| x.0.degree().cmp(&y.0.degree()).then(x.0.coeffs().cmp(y.0.coeffs())));
    let mut text = format!("field: {f}\nmatrices: {}\nphi: {phi_s}\n", s.len());
    text.push_str(&format!(
        "verdict: {}\n",
        if verdict.is_core { "CORE" } else { "NONCORE" }
    ));
    if let Some(w) = &verdict.witness {
        text.push_str(&format!("witness: {w}\n"));
    }
    let mut part_json = Vec::new();
    let mut purely = true;
    for (m, members) in &parts {
        let kind = algebra::classify_quadratic(f, m)?;
        let core = is_core(f, members).is_core;
        purely &= core;
        text.push_str(&format!(
            "class {m} ({kind}): {} {}, {}\n",
            members.len(),
            if members.len() == 1 { "matrix" } else { "matrices" },
            if core { "CORE" } else { "NONCORE" }
        ));
        part_json.push(json!({
            "poly": m.to_string(),
            "kind": kind.name(),
            "matrices": members.iter().map(Mat2::to_string).collect::<Vec<_>>(),
            "core": core,
        }));
    }
    text.push_str(&format!("purely core: {}\n", if purely { "yes" } else { "no" }));
    Ok(Output::ok(
        text,
        json!({
            "q": f.q(),
            "matrices": s.len(),
            "phi": phi_s.to_string(),
            "core": verdict.is_core,
            "witness": verdict.witness.map(|w| w.to_string()),
            "classes": part_json,
            "purely_core": purely,
        }),
    ))
}

fn cmd_lmodule(f: &FieldSpec, ms: &[Mat2], root: FieldElem) -> coreset::Result<Output> {
    if !f.contains(root as u64) {
        return Err(Error::Parse {
            line: None,
            msg: format!("{root} is not a code of {f}"),
        });
    }
    let desc = l_module(f, ms, root)?;
    Ok(Output::ok(
        format!("{desc}\n"),
        json!({"q": f.q(), "root": root, "module": desc.to_string()}),
    ))
}

fn cmd_bset(f: &FieldSpec, a: &Mat2, root: FieldElem, partition: bool) -> coreset::Result<Output> {
    if !partition {
        let b = bset(f, a, root)?;
        let text: String = b.iter().map(|m| format!("{m}\n")).collect();
        return Ok(Output::ok(
            text,
            json!({"q": f.q(), "matrix": a.to_string(), "root": root,
                   "bset": b.iter().map(Mat2::to_string).collect::<Vec<_>>()}),
        ));
    }
    let class = class_of(f, &algebra::min_poly(f, a))?;
    let p = bset_partition(f, &class, root)?;
    let mut text = String::new();
    let mut cells = Vec::new();
    for (key, cell) in p.keys.iter().zip(&p.cells) {
        let ms: Vec<String> = cell.iter().map(|&i| class.members[i].to_string()).collect();
        text.push_str(&format!("{key}: {}\n", ms.join(" ")));
        cells.push(json!({"module": key.to_string(), "matrices": ms}));
    }
    Ok(Output::ok(
        text,
        json!({"q": f.q(), "poly": class.m.to_string(), "root": root, "cells": cells}),
    ))
}

fn census_output(r: &CensusReport) -> Output {
    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    for row in &r.rows {
        for c in &row.counts {
            rows.push(vec![
                row.class_id.to_string(),
                row.poly.to_string(),
                row.kind.to_string(),
                row.size.to_string(),
                c.method.to_string(),
                c.noncore.to_string(),
                c.core.to_string(),
            ]);
            json_rows.push(json!({
                "id": row.class_id,
                "poly": row.poly.to_string(),
                "kind": row.kind.name(),
                "size": row.size,
                "noncore": c.noncore.to_string(),
                "core": c.core.to_string(),
                "method": c.method.name(),
            }));
        }
    }
    let g = &r.global;
    let mut text = format!("census of M_2(F_{})\n", r.q);
    text.push_str(&table(
        &["id", "poly", "kind", "size", "method", "noncore", "core"],
        &rows,
    ));
    text.push_str(&format!("purely core: {}\n", g.purely_core));
    text.push_str(&format!(
        "ratio to all subsets: {}/{}\n",
        g.ratio_to_all.numer(),
        g.ratio_to_all.denom()
    ));
    if let (Some(total), Some(np)) = (&g.core_total, &g.core_not_purely) {
        text.push_str(&format!("core total: {total}\ncore not purely core: {np}\n"));
    }
    let a = &r.asymptotics;
    text.push_str(&format!("k: {}\nrho: {}/{}\n", a.k, a.rho.numer(), a.rho.denom()));
    for c in &a.bound_checks {
        text.push_str(&format!(
            "bound {}: {}\n",
            c.name,
            if c.holds { "holds" } else { "FAILS" }
        ));
    }
    for m in &r.mismatches {
        text.push_str(&format!("MISMATCH: {m}\n"));
    }
    let mut json = json!({
        "q": r.q,
        "classes": json_rows,
        "purely_core": g.purely_core.to_string(),
        "ratio_to_all": {"num": g.ratio_to_all.numer().to_string(), "den": g.ratio_to_all.denom().to_string()},
        "k": a.k,
        "rho": {"num": a.rho.numer().to_string(), "den": a.rho.denom().to_string()},
        "bound_checks": a.bound_checks.iter().map(|c| json!({"name": c.name, "holds": c.holds})).collect::<Vec<_>>(),
        "mismatches": r.mismatches,
    });
    if let (Some(total), Some(np)) = (&g.core_total, &g.core_not_purely) {
        json["core_total"] = json!(total.to_string());
        json["core_not_purely"] = json!(np.to_string());
    }
    let failed = !r.mismatches.is_empty() || a.bound_checks.iter().any(|c| !c.holds);
    Output {
        text,
        json,
        status: if failed { EXIT_MISMATCH } else { 0 },
    }
}

fn run(cli: &Cli) -> coreset::Result<Output> {
    match &cli.command {
        Command::Minpoly { q, file, matrices } => {
            let (f, ms) = matrices_arg(q.as_deref(), file.as_ref(), matrices)?;
            cmd_minpoly(&f, &ms)
        }
        Command::Classify { q, poly } => cmd_classify(&parse_field(q)?, poly),
        Command::Classes { q } => cmd_classes(&parse_field(q)?),
        Command::CoreTest { file } => cmd_core_test(&read_set(file)?),
        Command::Lmodule {
            q,
            file,
            root,
            matrices,
        } => {
            let (f, ms) = matrices_arg(q.as_deref(), file.as_ref(), matrices)?;
            cmd_lmodule(&f, &ms, *root)
        }
        Command::Bset {
            q,
            root,
            partition,
            matrix,
        } => {
            let f = parse_field(q)?;
            cmd_bset(&f, &parse_matrix(&f, matrix)?, *root, *partition)
        }
        Command::Census { q, brute_force } => {
            let f = parse_field(q)?;
            Ok(census_output(&census_report(&f, *brute_force)?))
        }
        Command::VerifyPaper { level } => Ok(verify::run(*level)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot start {n} worker threads: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&out.json).expect("JSON values serialize")
                );
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.status)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(status_of(&e))
        }
    }
}
