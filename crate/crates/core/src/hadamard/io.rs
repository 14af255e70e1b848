//! Text formats for Hadamard matrices.
//!
//! Writing always produces `n` lines of `n` space-separated tokens from
//! `{1, -1}`. Reading auto-detects, per file, one of three row styles:
//! `1 -1 1 ...` tokens, `+-+...` characters, or `010...` characters with
//! `0` meaning -1. Matrices are separated by blank or non-numeric lines, or
//! simply follow each other in blocks of `n` rows.

use super::{HadamardMatrix, SignVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum RowStyle {
    Tokens,
    Signs,
    Binary,
}

/// Outcome of reading a matrix file: the valid matrices in file order and a
/// diagnostic for every rejected block.
#[derive(Debug, Default)]
pub struct ParsedMatrix {
    pub matrices: Vec<HadamardMatrix>,
    /// `(first line number, message)`, line numbers 1-based.
    pub errors: Vec<(usize, String)>,
}

fn is_data_line(line: &str) -> bool {
    let mut any = false;
    for c in line.chars() {
        match c {
            '+' | '-' | '0' | '1' => any = true,
            '2'..='9' | ' ' | '\t' | ',' => {}
            _ => return false,
        }
    }
    any
}

fn detect_style<'a>(lines: impl Iterator<Item = &'a str>) -> RowStyle {
    let mut saw_sign = false;
    let mut saw_zero = false;
    for l in lines {
        if l.split([' ', '\t', ',']).any(|t| t == "-1" || t == "+1") {
            return RowStyle::Tokens;
        }
        saw_sign |= l.contains(['+', '-']);
        saw_zero |= l.contains('0');
    }
    if saw_sign {
        RowStyle::Signs
    } else if saw_zero {
        RowStyle::Binary
    } else {
        RowStyle::Tokens
    }
}

fn parse_row(line: &str, style: RowStyle) -> Result<Vec<i8>, String> {
    match style {
        RowStyle::Tokens => line
            .split([' ', '\t', ','])
            .filter(|t| !t.is_empty())
            .map(|t| match t {
                "1" | "+1" => Ok(1),
                "-1" => Ok(-1),
                _ => Err(format!("unexpected token {t:?}")),
            })
            .collect(),
        RowStyle::Signs => line
            .chars()
            .filter(|c| !c.is_whitespace() && *c != ',')
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                _ => Err(format!("unexpected character {c:?}")),
            })
            .collect(),
        RowStyle::Binary => line
            .chars()
            .filter(|c| !c.is_whitespace() && *c != ',')
            .map(|c| match c {
                '1' => Ok(1),
                '0' => Ok(-1),
                _ => Err(format!("unexpected character {c:?}")),
            })
            .collect(),
    }
}

fn finish_block(block: &[(usize, Vec<i8>)], out: &mut ParsedMatrix) {
    let Some((first_line, first)) = block.first() else {
        return;
    };
    let n = first.len();
    if let Some((ln, r)) = block.iter().find(|(_, r)| r.len() != n) {
        out.errors.push((
            *ln,
            format!("row of length {} in a block of rows of length {n}", r.len()),
        ));
        return;
    }
    if n == 0 || block.len() % n != 0 {
        out.errors.push((
            *first_line,
            format!("{} rows of length {n} do not form square matrices", block.len()),
        ));
        return;
    }
    for chunk in block.chunks(n) {
        let rows: Result<Vec<SignVector>, _> =
            chunk.iter().map(|(_, r)| SignVector::from_entries(r)).collect();
        match rows.and_then(HadamardMatrix::new) {
            Ok(h) => out.matrices.push(h),
            Err(e) => out.errors.push((chunk[0].0, e.to_string())),
        }
    }
}

/// Reads every matrix in `text`. Invalid blocks are reported, not fatal.
pub fn parse_hadamard_file(text: &str) -> ParsedMatrix {
    let style = detect_style(text.lines().filter(|l| is_data_line(l)));
    let mut out = ParsedMatrix::default();
    let mut block: Vec<(usize, Vec<i8>)> = Vec::new();
    let mut bad_block: Option<(usize, String)> = None;
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        if !is_data_line(line) {
            match bad_block.take() {
                Some(err) => out.errors.push(err),
                None => finish_block(&block, &mut out),
            }
            block.clear();
            continue;
        }
        match parse_row(line, style) {
            Ok(r) => block.push((ln, r)),
            Err(e) => {
                bad_block.get_or_insert((ln, e));
            }
        }
    }
    match bad_block {
        Some(err) => out.errors.push(err),
        None => finish_block(&block, &mut out),
    }
    out
}

/// `n` lines of `n` space-separated entries from `{1, -1}`.
pub fn format_hadamard(h: &HadamardMatrix) -> String {
    let mut s = String::new();
    for r in h.rows() {
        let line: Vec<&str> = (0..r.len())
            .map(|j| if r.get(j) == 1 { "1" } else { "-1" })
            .collect();
        s.push_str(&line.join(" "));
        s.push('\n');
    }
    s
}
