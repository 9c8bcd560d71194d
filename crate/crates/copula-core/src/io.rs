//! Grid files. Text layout: optional "denom: D" prefix (matrix entries are
//! then integer multiples of 1/D), one line of x-breakpoints, one line of
//! y-breakpoints, then p+1 rows of q+1 values, row i holding the values at
//! x_i. JSON mirror: object with `xs`, `ys`, `values` and optional `denom`.
//! Everything is exact; reads and writes round-trip bit-identically.

use crate::error::{Error, Result};
use crate::gridfn::GridFunction;
use crate::mesh::Mesh;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use ratlp::Rational;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

/// Largest common denominator the text writer will factor out.
const MAX_AUTO_DENOM: u64 = 1_000_000;

fn bad(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn parse_rational(tok: &str) -> Result<Rational> {
    tok.parse().map_err(|_| bad(format!("invalid rational token {tok:?}")))
}

fn parse_row(line: &str) -> Result<Vec<Rational>> {
    line.split_whitespace().map(parse_rational).collect()
}

fn common_denominator(f: &GridFunction) -> BigInt {
    let mut lcm = BigInt::one();
    for row in f.values() {
        for v in row {
            lcm = lcm.lcm(v.denom());
        }
    }
    lcm
}

fn join(row: &[Rational]) -> String {
    row.iter().map(Rational::to_string).collect::<Vec<_>>().join(" ")
}

pub fn write_text(f: &GridFunction) -> String {
    let mesh = f.mesh();
    let mut out = String::new();
    let denom = common_denominator(f).to_u64().filter(|&d| 1 < d && d <= MAX_AUTO_DENOM);
    if let Some(d) = denom {
        writeln!(out, "denom: {d}").unwrap();
    }
    writeln!(out, "{}", join(mesh.xs())).unwrap();
    writeln!(out, "{}", join(mesh.ys())).unwrap();
    let rendered: Vec<Vec<String>> = f
        .values()
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| match denom {
                    Some(d) => (v * Rational::from_int(d as i64)).numer().to_string(),
                    None => v.to_string(),
                })
                .collect()
        })
        .collect();
    for line in aligned_rows(&rendered) {
        writeln!(out, "{line}").unwrap();
    }
    out
}

/// Right-aligns a matrix of already rendered entries, column by column.
pub fn aligned_rows(rendered: &[Vec<String>]) -> Vec<String> {
    let cols = rendered.first().map_or(0, Vec::len);
    let widths: Vec<usize> = (0..cols)
        .map(|j| rendered.iter().map(|row| row[j].len()).max().unwrap_or(0))
        .collect();
    rendered
        .iter()
        .map(|row| {
            row.iter()
                .zip(&widths)
                .map(|(cell, w)| format!("{cell:>w$}"))
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect()
}

pub fn read_text(s: &str) -> Result<GridFunction> {
    let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
    let mut first = lines.next().ok_or_else(|| bad("empty grid file"))?;
    let mut denom = None;
    if let Some(rest) = first.strip_prefix("denom:") {
        let d: u64 = rest.trim().parse().map_err(|_| bad(format!("invalid denominator {rest:?}")))?;
        if d == 0 {
            return Err(bad("denominator must be positive"));
        }
        denom = Some(Rational::from_int(d as i64));
        first = lines.next().ok_or_else(|| bad("missing breakpoint lines"))?;
    }
    let xs = parse_row(first)?;
    let ys = parse_row(lines.next().ok_or_else(|| bad("missing y-breakpoint line"))?)?;
    let mesh = Mesh::new(xs, ys)?;
    let mut values = Vec::with_capacity(mesh.p() + 1);
    for i in 0..=mesh.p() {
        let line = lines.next().ok_or_else(|| bad(format!("missing value row {i}")))?;
        let mut row = parse_row(line)?;
        if row.len() != mesh.q() + 1 {
            return Err(bad(format!(
                "value row {i} has {} entries, expected {}",
                row.len(),
                mesh.q() + 1
            )));
        }
        if let Some(d) = &denom {
            for v in &mut row {
                *v = &*v / d;
            }
        }
        values.push(row);
    }
    if lines.next().is_some() {
        return Err(bad("trailing content after the value matrix"));
    }
    GridFunction::new(mesh, values)
}

#[derive(Serialize)]
struct DocOut<'a> {
    xs: &'a [Rational],
    ys: &'a [Rational],
    values: &'a Vec<Vec<Rational>>,
}

#[derive(Deserialize)]
struct DocIn {
    xs: Vec<Rational>,
    ys: Vec<Rational>,
    #[serde(default)]
    values: Option<Vec<Vec<Rational>>>,
    #[serde(default)]
    denom: Option<u64>,
}

pub fn write_json(f: &GridFunction) -> String {
    let doc = DocOut { xs: f.mesh().xs(), ys: f.mesh().ys(), values: f.values() };
    let mut s = serde_json::to_string_pretty(&doc).unwrap();
    s.push('\n');
    s
}

fn parse_doc(s: &str) -> Result<DocIn> {
    serde_json::from_str(s).map_err(|e| bad(format!("invalid grid json: {e}")))
}

pub fn read_json(s: &str) -> Result<GridFunction> {
    let doc = parse_doc(s)?;
    let mesh = Mesh::new(doc.xs, doc.ys)?;
    let mut values = doc.values.ok_or_else(|| bad("grid json lacks \"values\""))?;
    if let Some(d) = doc.denom {
        if d == 0 {
            return Err(bad("denominator must be positive"));
        }
        let d = Rational::from_int(d as i64);
        for row in &mut values {
            for v in row.iter_mut() {
                *v = &*v / &d;
            }
        }
    }
    for (i, row) in values.iter().enumerate() {
        if row.len() != mesh.q() + 1 {
            return Err(bad(format!(
                "value row {i} has {} entries, expected {}",
                row.len(),
                mesh.q() + 1
            )));
        }
    }
    if values.len() != mesh.p() + 1 {
        return Err(bad(format!(
            "value matrix has {} rows, expected {}",
            values.len(),
            mesh.p() + 1
        )));
    }
    GridFunction::new(mesh, values)
}

/// Sniffs JSON (leading '{') versus the text layout.
pub fn read_str(s: &str) -> Result<GridFunction> {
    if s.trim_start().starts_with('{') {
        read_json(s)
    } else {
        read_text(s)
    }
}

/// Reads just the breakpoints; accepts a full grid file (values ignored)
/// or a bare two-line / values-free JSON variant.
pub fn read_mesh_str(s: &str) -> Result<Mesh> {
    if s.trim_start().starts_with('{') {
        let doc = parse_doc(s)?;
        return Mesh::new(doc.xs, doc.ys);
    }
    let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
    let mut first = lines.next().ok_or_else(|| bad("empty mesh file"))?;
    if first.strip_prefix("denom:").is_some() {
        first = lines.next().ok_or_else(|| bad("missing breakpoint lines"))?;
    }
    let xs = parse_row(first)?;
    let ys = parse_row(lines.next().ok_or_else(|| bad("missing y-breakpoint line"))?)?;
    Mesh::new(xs, ys)
}
