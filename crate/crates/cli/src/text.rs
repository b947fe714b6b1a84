//! Text forms of fields, matrices, polynomials and set files.
//!
//! Field elements are always written as their integer codes.

use coreset::{Error, FPoly, FieldElem, FieldSpec, Mat2, Result};

fn parse_err(line: Option<usize>, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_u64(s: &str, what: &str) -> Result<u64> {
    s.trim()
        .parse()
        .map_err(|_| parse_err(None, format!("invalid {what} `{}`", s.trim())))
}

/// `P`, `P^E`, or any prime power `N`.
pub fn parse_field(s: &str) -> Result<FieldSpec> {
    match s.split_once('^') {
        Some((p, e)) => {
            let p = parse_u64(p, "prime")?;
            let e = parse_u64(e, "exponent")?;
            let e = u32::try_from(e).map_err(|_| parse_err(None, "exponent too large"))?;
            FieldSpec::new(p, e)
        }
        None => FieldSpec::from_order(parse_u64(s, "field order")?),
    }
}

fn parse_code(f: &FieldSpec, s: &str) -> Result<FieldElem> {
    let v = parse_u64(s, "field element")?;
    if !f.contains(v) {
        return Err(parse_err(None, format!("{v} is not a code of {f}")));
    }
    Ok(v as FieldElem)
}

/// `a,b;c,d`
pub fn parse_matrix(f: &FieldSpec, s: &str) -> Result<Mat2> {
    let rows: Vec<&str> = s.split(';').collect();
    if rows.len() != 2 {
        return Err(parse_err(None, format!("expected `a,b;c,d`, got `{}`", s.trim())));
    }
    let mut e = Vec::with_capacity(4);
    for row in rows {
        let cells: Vec<&str> = row.split(',').collect();
        if cells.len() != 2 {
            return Err(parse_err(None, format!("expected `a,b;c,d`, got `{}`", s.trim())));
        }
        for c in cells {
            e.push(parse_code(f, c)?);
        }
    }
    Ok(Mat2::new(e[0], e[1], e[2], e[3]))
}

/// Sum of terms `c`, `cx`, `x`, `cx^k`, `x^k` with integer codes `c`, in
/// any order; the form printed by `FPoly`'s `Display`.
pub fn parse_poly(f: &FieldSpec, s: &str) -> Result<FPoly> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(parse_err(None, "empty polynomial"));
    }
    let mut coeffs: Vec<FieldElem> = Vec::new();
    for term in s.split('+') {
        let (c, deg) = match term.find('x') {
            None => (parse_code(f, term)?, 0usize),
            Some(i) => {
                let c = if i == 0 { 1 } else { parse_code(f, &term[..i])? };
                let rest = &term[i + 1..];
                let deg = if rest.is_empty() {
                    1
                } else {
                    let k = rest
                        .strip_prefix('^')
                        .ok_or_else(|| parse_err(None, format!("bad term `{term}`")))?;
                    parse_u64(k, "exponent")? as usize
                };
                (c, deg)
            }
        };
        if deg > 64 {
            return Err(parse_err(None, format!("degree {deg} is too large")));
        }
        if coeffs.len() <= deg {
            coeffs.resize(deg + 1, 0);
        }
        coeffs[deg] = f.add(coeffs[deg], c);
    }
    Ok(FPoly::from_coeffs(coeffs))
}

/// A field declaration followed by one matrix per line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFile {
    pub field: FieldSpec,
    pub matrices: Vec<Mat2>,
}

impl SetFile {
    pub fn parse(text: &str) -> Result<SetFile> {
        let mut field = None;
        let mut matrices = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line_no = Some(no + 1);
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let with_line = |e: Error| match e {
                Error::Parse { msg, .. } => parse_err(line_no, msg),
                other => other,
            };
            match &field {
                None => {
                    let (_, value) = line
                        .split_once('=')
                        .filter(|(k, _)| k.trim() == "q")
                        .ok_or_else(|| parse_err(line_no, "first line must be `q = P` or `q = P^E`"))?;
                    field = Some(parse_field(value).map_err(with_line)?);
                }
                Some(f) => matrices.push(parse_matrix(f, line).map_err(with_line)?),
            }
        }
        let field = field.ok_or_else(|| parse_err(None, "missing `q = ...` header"))?;
        Ok(SetFile { field, matrices })
    }
}
