//! Matrix Market reader and writer for dense complex matrices.
//!
//! Supported headers: `%%MatrixMarket matrix {array|coordinate}
//! {real|integer|complex} {general|symmetric|hermitian|skew-symmetric}`.

use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::{CMatrix, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layout {
    Array,
    Coordinate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Field {
    Real,
    Integer,
    Complex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
    Hermitian,
    Skew,
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Whitespace-separated tokens of a line with their 1-based columns.
fn tokens(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in s.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(b)) => {
                out.push((b + 1, &s[b..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(b) = start {
        out.push((b + 1, &s[b..]));
    }
    out
}

fn number<T: std::str::FromStr>(line: usize, (col, tok): (usize, &str), what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| parse_err(line, col, format!("expected {what}, found `{tok}`")))
}

pub fn read(reader: impl BufRead) -> Result<CMatrix> {
    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (hline, header) = match lines.next() {
        Some((n, l)) => (n, l?),
        None => return Err(parse_err(1, 1, "empty input")),
    };
    let head = tokens(&header);
    if head.len() != 5 || !head[0].1.eq_ignore_ascii_case("%%MatrixMarket") {
        return Err(parse_err(hline, 1, "expected `%%MatrixMarket matrix <format> <field> <symmetry>`"));
    }
    if !head[1].1.eq_ignore_ascii_case("matrix") {
        return Err(parse_err(hline, head[1].0, format!("unsupported object `{}`", head[1].1)));
    }
    let layout = match head[2].1.to_ascii_lowercase().as_str() {
        "array" => Layout::Array,
        "coordinate" => Layout::Coordinate,
        other => return Err(parse_err(hline, head[2].0, format!("unsupported format `{other}`"))),
    };
    let field = match head[3].1.to_ascii_lowercase().as_str() {
        "real" | "double" => Field::Real,
        "integer" => Field::Integer,
        "complex" => Field::Complex,
        other => return Err(parse_err(hline, head[3].0, format!("unsupported field `{other}`"))),
    };
    let symmetry = match head[4].1.to_ascii_lowercase().as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "hermitian" => Symmetry::Hermitian,
        "skew-symmetric" => Symmetry::Skew,
        other => return Err(parse_err(hline, head[4].0, format!("unsupported symmetry `{other}`"))),
    };
    if symmetry == Symmetry::Hermitian && field != Field::Complex {
        return Err(parse_err(hline, head[4].0, "hermitian requires a complex field"));
    }

    // data lines, comments and blanks skipped
    let mut data = lines.filter_map(|(n, l)| match l {
        Ok(s) if s.trim().is_empty() || s.trim_start().starts_with('%') => None,
        other => Some((n, other)),
    });
    let mut next_line = |what: &str, last: usize| -> Result<(usize, String)> {
        match data.next() {
            Some((n, l)) => Ok((n, l?)),
            None => Err(parse_err(last + 1, 1, format!("unexpected end of input, expected {what}"))),
        }
    };

    let (sline, size) = next_line("size line", hline)?;
    let st = tokens(&size);
    let need = if layout == Layout::Array { 2 } else { 3 };
    if st.len() != need {
        return Err(parse_err(sline, 1, format!("size line needs {need} integers")));
    }
    let rows: usize = number(sline, st[0], "row count")?;
    let cols: usize = number(sline, st[1], "column count")?;
    if symmetry != Symmetry::General && rows != cols {
        return Err(parse_err(sline, 1, "symmetric storage requires a square matrix"));
    }

    let value = |line: usize, t: &[(usize, &str)]| -> Result<C64> {
        let want = if field == Field::Complex { 2 } else { 1 };
        if t.len() != want {
            let col = t.first().map_or(1, |x| x.0);
            return Err(parse_err(line, col, format!("expected {want} value(s), found {}", t.len())));
        }
        let re = match field {
            Field::Integer => number::<i64>(line, t[0], "integer")? as f64,
            _ => number::<f64>(line, t[0], "number")?,
        };
        let im = if want == 2 { number::<f64>(line, t[1], "number")? } else { 0.0 };
        let z = C64::new(re, im);
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(parse_err(line, t[0].0, "non-finite value"));
        }
        Ok(z)
    };

    let mut m = CMatrix::zeros(rows, cols);
    let mut last = sline;
    let place = |m: &mut CMatrix, i: usize, j: usize, z: C64| {
        m[(i, j)] = z;
        if i != j {
            match symmetry {
                Symmetry::General => {}
                Symmetry::Symmetric => m[(j, i)] = z,
                Symmetry::Hermitian => m[(j, i)] = z.conj(),
                Symmetry::Skew => m[(j, i)] = -z,
            }
        }
    };

    match layout {
        Layout::Array => {
            // column-major, lower triangle only for symmetric kinds
            for j in 0..cols {
                let i0 = match symmetry {
                    Symmetry::General => 0,
                    Symmetry::Skew => j + 1,
                    _ => j,
                };
                for i in i0..rows {
                    let (n, l) = next_line("matrix entry", last)?;
                    last = n;
                    let z = value(n, &tokens(&l))?;
                    place(&mut m, i, j, z);
                }
            }
        }
        Layout::Coordinate => {
            let nnz: usize = number(sline, st[2], "entry count")?;
            for _ in 0..nnz {
                let (n, l) = next_line("matrix entry", last)?;
                last = n;
                let t = tokens(&l);
                if t.len() < 2 {
                    return Err(parse_err(n, 1, "expected `row col value`"));
                }
                let i: usize = number(n, t[0], "row index")?;
                let j: usize = number(n, t[1], "column index")?;
                if i == 0 || i > rows {
                    return Err(parse_err(n, t[0].0, format!("row index {i} out of range 1..={rows}")));
                }
                if j == 0 || j > cols {
                    return Err(parse_err(n, t[1].0, format!("column index {j} out of range 1..={cols}")));
                }
                let z = value(n, &t[2..])?;
                place(&mut m, i - 1, j - 1, z);
            }
        }
    }
    if let Some((n, l)) = data.next() {
        let l = l?;
        return Err(parse_err(n, tokens(&l).first().map_or(1, |t| t.0), "trailing data after matrix entries"));
    }
    Ok(m)
}

pub fn read_file(path: impl AsRef<Path>) -> Result<CMatrix> {
    let f = std::fs::File::open(path)?;
    read(std::io::BufReader::new(f))
}

/// Writes `m` as a complex general Matrix Market file. Values use Rust's
/// shortest round-trip formatting, so reading back gives identical bits.
pub fn write(mut w: impl Write, m: &CMatrix, layout: Layout) -> Result<()> {
    let mut out = String::new();
    let kind = match layout {
        Layout::Array => "array",
        Layout::Coordinate => "coordinate",
    };
    writeln!(out, "%%MatrixMarket matrix {kind} complex general").unwrap();
    match layout {
        Layout::Array => {
            writeln!(out, "{} {}", m.rows(), m.cols()).unwrap();
            for j in 0..m.cols() {
                for z in m.col(j) {
                    writeln!(out, "{:e} {:e}", z.re, z.im).unwrap();
                }
            }
        }
        Layout::Coordinate => {
            let nnz = m.as_slice().iter().filter(|z| **z != C64::new(0.0, 0.0)).count();
            writeln!(out, "{} {} {}", m.rows(), m.cols(), nnz).unwrap();
            for j in 0..m.cols() {
                for (i, z) in m.col(j).iter().enumerate() {
                    if *z != C64::new(0.0, 0.0) {
                        writeln!(out, "{} {} {:e} {:e}", i + 1, j + 1, z.re, z.im).unwrap();
                    }
                }
            }
        }
    }
    w.write_all(out.as_bytes())?;
    Ok(())
}

pub fn write_file(path: impl AsRef<Path>, m: &CMatrix, layout: Layout) -> Result<()> {
    let f = std::fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(f);
    write(&mut w, m, layout)?;
    w.flush()?;
    Ok(())
}
