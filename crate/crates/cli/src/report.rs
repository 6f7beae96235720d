//! Plain-text tables, CSV and JSON emitters.

use serde::Serialize;
use singpencil::C64;

/// `x` with six significant digits, `%g` style.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    // rounding can push 9.999995 to the next decade
    let exp = if format!("{:.5e}", x.abs()).contains(&format!("e{}", exp + 1)) { exp + 1 } else { exp };
    if (-4..6).contains(&exp) {
        format!("{:.*}", (5 - exp) as usize, x)
    } else {
        format!("{x:.5e}")
    }
}

/// Six significant digits relative to `|z|`: a part below that resolution
/// prints as zero.
pub fn complex6(z: Option<C64>) -> String {
    let z = z.map(|z| {
        let cut = 5e-7 * z.norm();
        C64::new(if z.re.abs() < cut { 0.0 } else { z.re }, if z.im.abs() < cut { 0.0 } else { z.im })
    });
    match z {
        None => "inf".into(),
        Some(z) if z.im == 0.0 => sig6(z.re),
        Some(z) => {
            let sign = if z.im.is_sign_negative() { '-' } else { '+' };
            format!("{}{sign}{}i", sig6(z.re), sig6(z.im.abs()))
        }
    }
}

/// Right-aligned columns separated by two spaces.
pub fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&width)
            .map(|(c, w)| format!("{}{c}", " ".repeat(w - c.chars().count())))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(headers.to_vec());
    for row in rows {
        out += &line(row.iter().map(String::as_str).collect());
    }
    out
}

pub fn csv<T: Serialize>(rows: &[T]) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn json<T: Serialize>(value: &T) -> Result<String, serde_json::Error> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}
