//! File formats: polynomial coefficient files, JSON with fixed 17-digit
//! numbers, and CSV tables.

use std::io;

use num_complex::Complex64;
use serde::ser::Serialize;
use serde::Deserialize;
use serde_json::ser::Formatter;

use crate::curvature::CurvatureGrid;
use crate::error::{Error, Result};
use crate::poly::ComplexPoly;

/// Formats a double with 17 significant digits, enough to round-trip.
pub fn fmt17(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

/// Compact JSON whose floats are written with 17 significant digits.
struct SigFigFormatter;

impl Formatter for SigFigFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            writer.write_all(fmt17(value).as_bytes())
        } else {
            writer.write_all(b"null")
        }
    }
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigFigFormatter);
    value.serialize(&mut ser).expect("in-memory JSON serialization");
    out.push(b'\n');
    String::from_utf8(out).expect("JSON is UTF-8")
}

#[derive(Deserialize, serde::Serialize)]
struct PolyFile {
    coeffs: Vec<[f64; 2]>,
}

/// Parses `{"coeffs": [[re, im], ...]}` in ascending powers.
pub fn parse_poly(text: &str) -> Result<ComplexPoly> {
    let file: PolyFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if file.coeffs.is_empty() {
        return Err(Error::Parse("coefficient array is empty".into()));
    }
    ComplexPoly::new(file.coeffs.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
}

pub fn poly_to_json(p: &ComplexPoly) -> String {
    let file = PolyFile {
        coeffs: p.coeffs().iter().map(|c| [c.re, c.im]).collect(),
    };
    to_json(&file)
}

/// `x,y,K` rows in lattice order.
pub fn grid_to_csv(grid: &CurvatureGrid) -> String {
    let lattice = grid.lattice();
    let mut out = String::with_capacity(grid.values.len() * 72 + 8);
    out.push_str("x,y,K\n");
    for (k, &v) in grid.values.iter().enumerate() {
        let z = lattice.center(k);
        out.push_str(&fmt17(z.re));
        out.push(',');
        out.push_str(&fmt17(z.im));
        out.push(',');
        out.push_str(&fmt17(v));
        out.push('\n');
    }
    out
}

pub fn grid_to_json(grid: &CurvatureGrid) -> String {
    to_json(grid)
}

/// Minimal CSV writer: header plus rows of already-formatted fields.
pub fn csv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
