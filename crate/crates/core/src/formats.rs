//! Plain-text and JSON file formats for matrices, subspaces and codes.
//!
//! Text forms put a header line first, then one matrix row per line with
//! entries separated by whitespace; `#` starts a comment.
//!
//! ```text
//! 2 2 3            # matrix: q rows cols
//! 1 0 1
//! 0 1 1
//!
//! 2 3 2            # subspace: q n k, then k rows
//! ...
//!
//! grasscode 2 3 1 2
//! mult=2
//! 1 0 0
//!
//! mult=1
//! 0 1 0
//! ```
//!
//! JSON forms are the serde output of [`MatrixFq`], [`Subspace`] and
//! [`GrassCode`]; readers accept either form.

use std::path::Path;

use serde::Deserialize;

use crate::codes::GrassCode;
use crate::error::{Error, Result};
use crate::gfq::{make_field, Elem, MatrixFq};
use crate::grassmann::Subspace;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_nums<T: std::str::FromStr>(line: &str, lineno: usize) -> Result<Vec<T>> {
    line.split_whitespace()
        .map(|t| t.parse::<T>().map_err(|_| Error::Parse(format!("line {lineno}: bad number {t:?}"))))
        .collect()
}

fn header<const N: usize>(line: Option<(usize, &str)>, what: &str) -> Result<[usize; N]> {
    let (no, l) = line.ok_or_else(|| Error::Parse(format!("empty {what} file")))?;
    let v: Vec<usize> = parse_nums(l, no)?;
    v.try_into()
        .map_err(|_| Error::Parse(format!("line {no}: {what} header needs {N} numbers")))
}

fn read_rows<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    count: usize,
    cols: usize,
) -> Result<Vec<Vec<Elem>>> {
    (0..count)
        .map(|_| {
            let (no, l) = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("expected {count} rows, input ended early")))?;
            let row: Vec<Elem> = parse_nums(l, no)?;
            if row.len() != cols {
                return Err(Error::Parse(format!("line {no}: expected {cols} entries, got {}", row.len())));
            }
            Ok(row)
        })
        .collect()
}

fn is_json(text: &str) -> bool {
    text.trim_start().starts_with('{')
}

fn q32(q: usize) -> Result<u32> {
    u32::try_from(q).map_err(|_| Error::Parse(format!("q={q} is out of range")))
}

#[derive(Deserialize)]
struct MatrixJson {
    q: u32,
    rows: usize,
    cols: usize,
    data: Vec<Vec<Elem>>,
}

#[derive(Deserialize)]
struct SubspaceJson {
    q: u32,
    n: usize,
    k: usize,
    basis: Vec<Vec<Elem>>,
}

#[derive(Deserialize)]
struct WordJson {
    mult: u32,
    basis: Vec<Vec<Elem>>,
}

#[derive(Deserialize)]
struct CodeJson {
    format: Option<String>,
    q: u32,
    n: usize,
    k: usize,
    count: Option<usize>,
    words: Vec<WordJson>,
}

fn check_shape(rows: &[Vec<Elem>], r: usize, c: usize) -> Result<()> {
    if rows.len() != r || rows.iter().any(|x| x.len() != c) {
        return Err(Error::Parse(format!("data does not have shape {r}x{c}")));
    }
    Ok(())
}

pub fn parse_matrix(text: &str) -> Result<MatrixFq> {
    if is_json(text) {
        let m: MatrixJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        check_shape(&m.data, m.rows, m.cols)?;
        return MatrixFq::new(&make_field(m.q)?, m.rows, m.cols, m.data.concat());
    }
    let mut lines = content_lines(text);
    let [q, rows, cols] = header::<3>(lines.next(), "matrix")?;
    let data = read_rows(&mut lines, rows, cols)?;
    if let Some((no, _)) = lines.next() {
        return Err(Error::Parse(format!("line {no}: trailing content after {rows} rows")));
    }
    MatrixFq::new(&make_field(q32(q)?)?, rows, cols, data.concat())
}

pub fn format_matrix(m: &MatrixFq) -> String {
    let mut s = format!("{} {} {}\n", m.field().order(), m.rows(), m.cols());
    push_rows(&mut s, &m.row_vecs());
    s
}

fn push_rows(s: &mut String, rows: &[Vec<Elem>]) {
    for r in rows {
        let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
        s.push_str(&cells.join(" "));
        s.push('\n');
    }
}

fn subspace_from(q: u32, n: usize, k: usize, basis: &[Vec<Elem>]) -> Result<Subspace> {
    check_shape(basis, k, n)?;
    let s = Subspace::from_rows(&make_field(q)?, n, basis)?;
    if s.dim() != k {
        return Err(Error::Parse(format!("basis rows span dimension {}, header says {k}", s.dim())));
    }
    Ok(s)
}

pub fn parse_subspace(text: &str) -> Result<Subspace> {
    if is_json(text) {
        let s: SubspaceJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        return subspace_from(s.q, s.n, s.k, &s.basis);
    }
    let mut lines = content_lines(text);
    let [q, n, k] = header::<3>(lines.next(), "subspace")?;
    let basis = read_rows(&mut lines, k, n)?;
    subspace_from(q32(q)?, n, k, &basis)
}

pub fn format_subspace(s: &Subspace) -> String {
    let mut out = format!("{} {} {}\n", s.field().order(), s.ambient_dim(), s.dim());
    push_rows(&mut out, &s.basis().row_vecs());
    out
}

pub fn parse_grasscode(text: &str) -> Result<GrassCode> {
    if is_json(text) {
        let c: CodeJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if c.format.as_deref().is_some_and(|f| f != "grasscode") {
            return Err(Error::Parse(format!("format {:?} is not grasscode", c.format.unwrap())));
        }
        if c.count.is_some_and(|n| n != c.words.len()) {
            return Err(Error::Parse(format!("count {} but {} words", c.count.unwrap(), c.words.len())));
        }
        let f = make_field(c.q)?;
        let mut code = GrassCode::new(&f, c.n, c.k)?;
        for w in &c.words {
            code.push(subspace_from(c.q, c.n, c.k, &w.basis)?, w.mult)?;
        }
        return Ok(code);
    }
    let mut lines = content_lines(text);
    let (no, head) = lines.next().ok_or_else(|| Error::Parse("empty grasscode file".into()))?;
    let rest = head
        .strip_prefix("grasscode")
        .ok_or_else(|| Error::Parse(format!("line {no}: expected 'grasscode q n k count'")))?;
    let [q, n, k, count] = header::<4>(Some((no, rest)), "grasscode")?;
    let q = q32(q)?;
    let f = make_field(q)?;
    let mut code = GrassCode::new(&f, n, k)?;
    for _ in 0..count {
        let (no, l) = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("expected {count} words, input ended early")))?;
        let mult: u32 = l
            .strip_prefix("mult=")
            .and_then(|m| m.trim().parse().ok())
            .ok_or_else(|| Error::Parse(format!("line {no}: expected 'mult=M'")))?;
        let basis = read_rows(&mut lines, k, n)?;
        code.push(subspace_from(q, n, k, &basis)?, mult)?;
    }
    if let Some((no, _)) = lines.next() {
        return Err(Error::Parse(format!("line {no}: trailing content after {count} words")));
    }
    Ok(code)
}

pub fn format_grasscode(c: &GrassCode) -> String {
    let mut s = format!("grasscode {} {} {} {}\n", c.q(), c.n(), c.k(), c.distinct());
    for w in c.words() {
        s.push_str(&format!("\nmult={}\n", w.mult));
        push_rows(&mut s, &w.space.basis().row_vecs());
    }
    s
}

pub fn read_matrix(path: &Path) -> Result<MatrixFq> {
    parse_matrix(&std::fs::read_to_string(path)?)
}

pub fn read_grasscode(path: &Path) -> Result<GrassCode> {
    parse_grasscode(&std::fs::read_to_string(path)?)
}

pub fn read_subspace(path: &Path) -> Result<Subspace> {
    parse_subspace(&std::fs::read_to_string(path)?)
}

/// Strings for a nonlinear network code, one per line in message order.
/// Symbols are whitespace-separated, or single digits when written without
/// spaces.
pub fn parse_strings(text: &str, q: u32) -> Result<Vec<Vec<Elem>>> {
    content_lines(text)
        .map(|(no, l)| {
            let row: Vec<u32> = if l.contains(char::is_whitespace) {
                parse_nums(l, no)?
            } else {
                l.chars()
                    .map(|c| c.to_digit(10).ok_or_else(|| Error::Parse(format!("line {no}: bad symbol {c:?}"))))
                    .collect::<Result<_>>()?
            };
            row.into_iter()
                .map(|x| {
                    if x < q {
                        Ok(x as Elem)
                    } else {
                        Err(Error::Parse(format!("line {no}: symbol {x} not in F_{q}")))
                    }
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_code() -> GrassCode {
        let f = make_field(3).unwrap();
        let mut c = GrassCode::new(&f, 4, 2).unwrap();
        c.push(Subspace::from_rows(&f, 4, &[vec![1, 0, 2, 0], vec![0, 1, 1, 1]]).unwrap(), 2).unwrap();
        c.push(Subspace::from_rows(&f, 4, &[vec![0, 0, 1, 0], vec![0, 0, 0, 1]]).unwrap(), 1).unwrap();
        c
    }

    #[test]
    fn grasscode_round_trips() {
        let c = sample_code();
        let text = format_grasscode(&c);
        assert!(text.starts_with("grasscode 3 4 2 2\n\nmult=2\n1 0 2 0\n"));
        assert_eq!(parse_grasscode(&text).unwrap(), c);
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(parse_grasscode(&json).unwrap(), c);
    }

    #[test]
    fn matrix_and_subspace_round_trip() {
        let f = make_field(4).unwrap();
        let m = MatrixFq::from_rows(&f, 3, &[vec![1, 2, 3], vec![0, 0, 1]]).unwrap();
        assert_eq!(parse_matrix(&format_matrix(&m)).unwrap(), m);
        assert_eq!(parse_matrix(&serde_json::to_string(&m).unwrap()).unwrap(), m);
        let s = Subspace::from_generators(&m);
        assert_eq!(parse_subspace(&format_subspace(&s)).unwrap(), s);
        assert_eq!(parse_subspace(&serde_json::to_string(&s).unwrap()).unwrap(), s);
    }

    #[test]
    fn comments_and_errors() {
        let m = parse_matrix("# parity\n2 1 3  # q rows cols\n1 1 0\n").unwrap();
        assert_eq!(m.row_vecs(), vec![vec![1, 1, 0]]);
        assert!(matches!(parse_matrix("2 1 3\n1 1\n"), Err(Error::Parse(_))));
        assert!(matches!(parse_matrix("2 1 3\n1 1 0\n1 0 0\n"), Err(Error::Parse(_))));
        assert!(parse_matrix("2 1 3\n1 2 0\n").is_err());
        assert!(parse_matrix("6 1 1\n1\n").is_err());
        assert!(matches!(parse_subspace("2 3 2\n1 0 0\n1 0 0\n"), Err(Error::Parse(_))));
        assert!(matches!(parse_grasscode("grasscode 2 3 1 1\n1 0 0\n"), Err(Error::Parse(_))));
        assert!(matches!(parse_grasscode("code 2 3 1 1\n"), Err(Error::Parse(_))));
        assert_eq!(parse_strings("0110\n1 0 0 1\n", 2).unwrap(), vec![vec![0, 1, 1, 0], vec![1, 0, 0, 1]]);
        assert!(parse_strings("012\n", 2).is_err());
    }
}
