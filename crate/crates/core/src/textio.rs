//! Text formats: matrices ("rows cols modulus" then entries), multivectors
//! ("{1,2,4} : 3/5" per wedge monomial), and quartic surfaces ("monomial :
//! coefficient" per degree-4 monomial).

use std::fmt::Write as _;

use crate::exterior::{subsets, MultiVector};
use crate::field::{Field, Fp, Rational};
use crate::linalg::Matrix;
use crate::poly::{monomials, DenseForm};

#[derive(Clone, Debug, PartialEq)]
pub enum ParsedMatrix {
    Rational(Matrix<Rational>),
    Fp(Matrix<Fp>),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FormatError(pub &'static str);

impl std::fmt::Display for FormatError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "format error: {}", self.0)
    }
}

impl std::error::Error for FormatError {}

/// First line "rows cols modulus" (0 = ℚ), then one row of entries per line;
/// rational entries as "a/b" or integers.
pub fn parse_matrix(text: &str) -> Result<ParsedMatrix, FormatError> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or(FormatError("empty input"))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() != 3 {
        return Err(FormatError("header must be: rows cols modulus"));
    }
    let rows: usize = head[0].parse().map_err(|_| FormatError("bad row count"))?;
    let cols: usize = head[1].parse().map_err(|_| FormatError("bad col count"))?;
    let modulus: u64 = head[2].parse().map_err(|_| FormatError("bad modulus"))?;
    let mut entries: Vec<Vec<&str>> = Vec::with_capacity(rows);
    for _ in 0..rows {
        let line = lines.next().ok_or(FormatError("missing matrix row"))?;
        let row: Vec<&str> = line.split_whitespace().collect();
        if row.len() != cols {
            return Err(FormatError("row has wrong number of entries"));
        }
        entries.push(row);
    }
    if modulus == 0 {
        let mut out = Vec::with_capacity(rows);
        for row in entries {
            let mut r = Vec::with_capacity(cols);
            for e in row {
                r.push(parse_rational(e)?);
            }
            out.push(r);
        }
        Ok(ParsedMatrix::Rational(Matrix::from_rows(out)))
    } else {
        if !crate::field::is_prime_u64(modulus) {
            return Err(FormatError("modulus must be prime"));
        }
        let mut out = Vec::with_capacity(rows);
        for row in entries {
            let mut r = Vec::with_capacity(cols);
            for e in row {
                let v: i64 = e.parse().map_err(|_| FormatError("bad field entry"))?;
                r.push(Fp::new(v, modulus));
            }
            out.push(r);
        }
        Ok(ParsedMatrix::Fp(Matrix::from_rows(out)))
    }
}

fn parse_rational(s: &str) -> Result<Rational, FormatError> {
    if let Some((n, d)) = s.split_once('/') {
        let num: i64 = n.parse().map_err(|_| FormatError("bad numerator"))?;
        let den: i64 = d.parse().map_err(|_| FormatError("bad denominator"))?;
        if den == 0 {
            return Err(FormatError("zero denominator"));
        }
        Ok(Rational::from_frac(num, den))
    } else {
        let v: i64 = s.parse().map_err(|_| FormatError("bad integer"))?;
        Ok(Rational::from_int(v))
    }
}

pub fn render_matrix_rational(m: &Matrix<Rational>) -> String {
    let mut out = format!("{} {} 0\n", m.nrows(), m.ncols());
    for i in 0..m.nrows() {
        let row: Vec<String> = m.row(i).iter().map(|e| e.to_string()).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

pub fn render_matrix_fp(m: &Matrix<Fp>, p: u64) -> String {
    let mut out = format!("{} {} {p}\n", m.nrows(), m.ncols());
    for i in 0..m.nrows() {
        let row: Vec<String> = m.row(i).iter().map(|e| e.to_string()).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

/// "{i,j,k} : coefficient" per nonzero wedge monomial, 1-based indices.
pub fn render_multivector<K: Field>(mv: &MultiVector<K>) -> String {
    let masks = subsets(mv.n, mv.d);
    let mut out = String::new();
    for (idx, &mask) in masks.iter().enumerate() {
        if mv.coords[idx].is_zero() {
            continue;
        }
        let indices: Vec<String> = (0..mv.n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| (i + 1).to_string())
            .collect();
        let _ = writeln!(out, "{{{}}} : {}", indices.join(","), mv.coords[idx]);
    }
    if out.is_empty() {
        out.push_str("0\n");
    }
    out
}

pub fn parse_multivector_rational(
    text: &str,
    n: usize,
    d: usize,
) -> Result<MultiVector<Rational>, FormatError> {
    let mut mv = MultiVector::zero(n, d);
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        if line.trim() == "0" {
            continue;
        }
        let (lhs, rhs) = line.split_once(':').ok_or(FormatError("expected ':'"))?;
        let lhs = lhs.trim();
        let inner = lhs
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or(FormatError("expected {i,j,...}"))?;
        let mut mask = 0u32;
        let mut count = 0;
        for part in inner.split(',') {
            let i: usize = part.trim().parse().map_err(|_| FormatError("bad index"))?;
            if i == 0 || i > n {
                return Err(FormatError("index out of range"));
            }
            mask |= 1 << (i - 1);
            count += 1;
        }
        if count != d || mask.count_ones() as usize != d {
            return Err(FormatError("wrong monomial degree"));
        }
        let idx = crate::exterior::mask_index(n, d, mask);
        mv.coords[idx] = parse_rational(rhs.trim())?;
    }
    Ok(mv)
}

/// Quartic surfaces: one "x0^e0*x1^e1*x2^e2*x3^e3 : coefficient" line per
/// monomial in lexicographic order (zero-coefficient lines included so the
/// 35-line shape is stable).
pub fn render_quartic<K: Field>(q: &DenseForm<K>) -> String {
    assert!(q.nvars == 4 && q.degree == 4);
    let mons = monomials(4, 4);
    let mut out = String::new();
    for (c, m) in q.coeffs.iter().zip(mons.iter()) {
        let mut name = String::new();
        for (v, &e) in m.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !name.is_empty() {
                name.push('*');
            }
            if e == 1 {
                let _ = write!(name, "x{v}");
            } else {
                let _ = write!(name, "x{v}^{e}");
            }
        }
        if name.is_empty() {
            name.push('1');
        }
        let _ = writeln!(out, "{name} : {c}");
    }
    out
}

pub fn parse_quartic_fp(text: &str, p: u64) -> Result<DenseForm<Fp>, FormatError> {
    let mons = monomials(4, 4);
    let mut q: DenseForm<Fp> = DenseForm::zero(4, 4);
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let (lhs, rhs) = line.split_once(':').ok_or(FormatError("expected ':'"))?;
        let mut expo = [0u8; 4];
        let lhs = lhs.trim();
        if lhs != "1" {
            for factor in lhs.split('*') {
                let f = factor.trim();
                let rest = f.strip_prefix('x').ok_or(FormatError("expected x<i>"))?;
                let (var, e) = match rest.split_once('^') {
                    Some((v, e)) => (
                        v.parse::<usize>().map_err(|_| FormatError("bad variable"))?,
                        e.parse::<u8>().map_err(|_| FormatError("bad exponent"))?,
                    ),
                    None => (
                        rest.parse::<usize>().map_err(|_| FormatError("bad variable"))?,
                        1,
                    ),
                };
                if var >= 4 {
                    return Err(FormatError("variable out of range"));
                }
                expo[var] += e;
            }
        }
        let idx = mons
            .iter()
            .position(|m| m.as_slice() == expo)
            .ok_or(FormatError("monomial is not degree 4"))?;
        let v: i64 = rhs.trim().parse().map_err(|_| FormatError("bad coefficient"))?;
        q.coeffs[idx] = Fp::new(v, p);
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_roundtrip() {
        let text = "2 3 0\n1 -2 3/5\n0 7/2 -1/3\n";
        let ParsedMatrix::Rational(m) = parse_matrix(text).unwrap() else {
            panic!("expected rational matrix");
        };
        assert_eq!(render_matrix_rational(&m), text);
        let text_fp = "2 2 11\n1 10\n3 0\n";
        let ParsedMatrix::Fp(m) = parse_matrix(text_fp).unwrap() else {
            panic!("expected Fp matrix");
        };
        assert_eq!(render_matrix_fp(&m, 11), text_fp);
        assert!(parse_matrix("2 2 4\n1 2\n3 4\n").is_err());
    }

    #[test]
    fn multivector_roundtrip() {
        let text = "{1,2,4} : 3/5\n{2,3,5} : -2\n";
        let mv = parse_multivector_rational(text, 6, 3).unwrap();
        assert_eq!(render_multivector(&mv), text);
    }

    #[test]
    fn quartic_roundtrip() {
        let p = 11;
        let mut q: DenseForm<Fp> = DenseForm::zero(4, 4);
        q.coeffs[0] = Fp::new(3, p);
        q.coeffs[34] = Fp::new(7, p);
        let text = render_quartic(&q);
        assert!(text.starts_with("x0^4 : 3\n"));
        assert!(text.trim_end().ends_with("x3^4 : 7"));
        let q2 = parse_quartic_fp(&text, p).unwrap();
        assert_eq!(q, q2);
    }
}
