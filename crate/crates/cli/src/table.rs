//! Plain CSV reading and writing for numbers and matrices.
//!
//! Numbers are written with 12 significant digits in the shortest of fixed
//! or exponent notation, so a rerun reproduces every byte.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use qiham_core::evolution::FeasibilityMask;
use qiham_core::{Complex64, ComplexMatrix};

use crate::error::CliError;

const SIG_DIGITS: usize = 12;

/// `%.12g`-style rendering.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIG_DIGITS as i32).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_fraction(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_fraction(mantissa.to_string()), exp)
    }
}

fn trim_fraction(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

pub fn fmt_list(xs: &[f64]) -> String {
    xs.iter().map(|&x| fmt_num(x)).collect::<Vec<_>>().join(";")
}

/// Header line plus one line per row.
pub fn render_rows(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Real parts, one line per row, no header.
pub fn render_matrix(m: &ComplexMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&fmt_num(m[(i, j)].re));
        }
        out.push('\n');
    }
    out
}

/// Complex matrix as `a+bi` cells.
pub fn render_complex_matrix(m: &ComplexMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if j > 0 {
                out.push(',');
            }
            let z = m[(i, j)];
            let sign = if z.im < 0.0 { '-' } else { '+' };
            write!(out, "{}{}{}i", fmt_num(z.re), sign, fmt_num(z.im.abs())).unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn write_text(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

pub fn ensure_dir(path: &Path) -> Result<(), CliError> {
    fs::create_dir_all(path).map_err(|e| CliError::io(path, e))
}

/// Cells of a comma-separated grid, with 1-based line and column numbers.
/// Blank lines and `#` comments are skipped; rows must have equal length.
fn read_grid<T>(
    path: &Path,
    text: &str,
    mut cell: impl FnMut(&str) -> Result<T, String>,
) -> Result<Vec<Vec<T>>, CliError> {
    let mut rows: Vec<Vec<T>> = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut row = Vec::new();
        for (col, raw) in line.split(',').enumerate() {
            let v = cell(raw.trim()).map_err(|m| CliError::parse(path, ln + 1, col + 1, m))?;
            row.push(v);
        }
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(CliError::parse(
                    path,
                    ln + 1,
                    row.len().min(first.len()) + 1,
                    format!("row has {} cells, expected {}", row.len(), first.len()),
                ));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::parse(path, 1, 1, "no data rows"));
    }
    let n = rows.len();
    if rows[0].len() != n {
        return Err(CliError::parse(
            path,
            1,
            1,
            format!("matrix is {}x{}, expected square", n, rows[0].len()),
        ));
    }
    Ok(rows)
}

fn real_cell(s: &str) -> Result<f64, String> {
    s.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| format!("`{s}` is not a finite number"))
}

fn complex_cell(s: &str) -> Result<Complex64, String> {
    s.parse::<Complex64>()
        .ok()
        .filter(|z| z.re.is_finite() && z.im.is_finite())
        .ok_or_else(|| format!("`{s}` is not a complex number"))
}

fn to_matrix(rows: Vec<Vec<Complex64>>) -> ComplexMatrix {
    let n = rows.len();
    ComplexMatrix::from_vec(n, n, rows.into_iter().flatten().collect()).expect("square grid")
}

/// Square real matrix.
pub fn read_real_matrix(path: &Path) -> Result<ComplexMatrix, CliError> {
    let rows = read_grid(path, &read_text(path)?, real_cell)?;
    Ok(to_matrix(
        rows.into_iter()
            .map(|r| r.into_iter().map(|x| Complex64::new(x, 0.0)).collect())
            .collect(),
    ))
}

/// Square matrix of `a+bi` cells; plain reals are accepted too.
pub fn read_complex_matrix(path: &Path) -> Result<ComplexMatrix, CliError> {
    let rows = read_grid(path, &read_text(path)?, complex_cell)?;
    Ok(to_matrix(rows))
}

/// Real and imaginary parts from two files of the same shape.
pub fn read_split_matrix(re: &Path, im: &Path) -> Result<ComplexMatrix, CliError> {
    let a = read_real_matrix(re)?;
    let b = read_real_matrix(im)?;
    if a.rows() != b.rows() {
        return Err(CliError::parse(
            im,
            1,
            1,
            format!(
                "imaginary part is {0}x{0}, real part is {1}x{1}",
                b.rows(),
                a.rows()
            ),
        ));
    }
    Ok(ComplexMatrix::from_fn(a.rows(), a.cols(), |i, j| {
        Complex64::new(a[(i, j)].re, b[(i, j)].re)
    })?)
}

/// Square 0/1 matrix.
pub fn read_mask(path: &Path) -> Result<FeasibilityMask, CliError> {
    let rows = read_grid(path, &read_text(path)?, |s| match s {
        "0" => Ok(0u8),
        "1" => Ok(1u8),
        other => Err(format!("mask entry `{other}` is not 0 or 1")),
    })?;
    Ok(FeasibilityMask::from_rows(&rows)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(-0.0), "0");
        assert_eq!(fmt_num(1.0), "1");
        assert_eq!(fmt_num(0.5), "0.5");
        assert_eq!(fmt_num(std::f64::consts::LN_2), "0.69314718056");
        assert_eq!(fmt_num(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_num(-2.5e-7), "-2.5e-7");
        assert_eq!(fmt_num(1e-5), "0.00001");
        assert_eq!(fmt_num(123456789012345.0), "1.23456789012e14");
        assert_eq!(fmt_num(9.9999999999999), "10");
        assert_eq!(fmt_num(f64::NAN), "nan");
        assert_eq!(fmt_list(&[0.25, 1.5]), "0.25;1.5");
    }

    #[test]
    fn complex_cells() {
        assert_eq!(complex_cell("1+2i").unwrap(), Complex64::new(1.0, 2.0));
        assert_eq!(complex_cell("0.5").unwrap(), Complex64::new(0.5, 0.0));
        assert_eq!(complex_cell("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(
            complex_cell("1e-3-2e-4i").unwrap(),
            Complex64::new(1e-3, -2e-4)
        );
        assert!(complex_cell("abc").is_err());
    }

    #[test]
    fn grid_errors_carry_position() {
        let p = Path::new("m.csv");
        match read_grid(p, "1,0\n0,x\n", real_cell) {
            Err(CliError::Parse { line, column, .. }) => assert_eq!((line, column), (2, 2)),
            other => panic!("{other:?}"),
        }
        assert!(read_grid(p, "1,0\n0\n", real_cell).is_err());
        assert!(read_grid(p, "1,0\n", real_cell).is_err());
        assert!(read_grid(p, "# only a comment\n", real_cell).is_err());
    }
}
