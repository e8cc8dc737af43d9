//! Plain-text instance files.
//!
//! ```text
//! lmi 1
//! field 7
//! rows 2 2
//! cols 3
//! m1 3
//! 1 1 1
//! 1 2 1
//! 2 3 1
//! m2 3
//! 1 1 1
//! 2 2 1
//! 2 3 1
//! weights
//! 5
//! 3
//! 7/2
//! ```
//!
//! Triples are 1-based `row col value` with `1 ≤ value < p`. `#` starts a
//! comment and blank lines are ignored. The writer emits triples in
//! column-major order, then by row, so canonical files round-trip byte for
//! byte.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exact::Instance;
use crate::field::Field;
use crate::linalg::SparseMatrix;

pub const FORMAT_TAG: &str = "lmi";
pub const FORMAT_VERSION: u32 = 1;

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            inner: text.lines().enumerate(),
            last: 0,
        }
    }

    /// Next non-empty line with comments stripped, as `(line number, tokens)`.
    fn next(&mut self) -> Option<(usize, Vec<&'a str>)> {
        for (i, raw) in self.inner.by_ref() {
            self.last = i + 1;
            let body = raw.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = body.split_whitespace().collect();
            if !tokens.is_empty() {
                return Some((i + 1, tokens));
            }
        }
        None
    }

    fn expect(&mut self, what: &str) -> Result<(usize, Vec<&'a str>)> {
        self.next().ok_or_else(|| Error::Parse {
            line: self.last + 1,
            message: format!("unexpected end of file, expected {what}"),
        })
    }
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn number<T: FromStr>(line: usize, token: &str, what: &str) -> Result<T> {
    token
        .parse()
        .map_err(|_| err(line, format!("invalid {what} `{token}`")))
}

/// Reads a `keyword v₁ … v_k` line.
fn keyword_line<T: FromStr>(lines: &mut Lines<'_>, keyword: &str, arity: usize) -> Result<(usize, Vec<T>)> {
    let (line, tokens) = lines.expect(&format!("`{keyword}`"))?;
    if tokens[0] != keyword {
        return Err(err(line, format!("expected `{keyword}`, found `{}`", tokens[0])));
    }
    if tokens.len() != arity + 1 {
        return Err(err(line, format!("`{keyword}` takes {arity} value(s)")));
    }
    let values = tokens[1..]
        .iter()
        .map(|t| number(line, t, keyword))
        .collect::<Result<_>>()?;
    Ok((line, values))
}

fn matrix_block(lines: &mut Lines<'_>, name: &str, field: Field, rows: usize, cols: usize) -> Result<SparseMatrix> {
    let (_, nnz) = keyword_line::<usize>(lines, name, 1)?;
    let p = field.modulus();
    let mut seen = HashSet::new();
    let mut triplets = Vec::with_capacity(nnz[0]);
    for _ in 0..nnz[0] {
        let (line, tokens) = lines.expect(&format!("a `{name}` entry"))?;
        if tokens.len() != 3 {
            return Err(err(line, "expected `row col value`"));
        }
        let r: usize = number(line, tokens[0], "row")?;
        let c: usize = number(line, tokens[1], "column")?;
        let v: u64 = number(line, tokens[2], "value")?;
        if r == 0 || r > rows {
            return Err(err(line, format!("row {r} outside 1..={rows}")));
        }
        if c == 0 || c > cols {
            return Err(err(line, format!("column {c} outside 1..={cols}")));
        }
        if v == 0 || v >= p {
            return Err(err(line, format!("value {v} outside 1..{p}")));
        }
        if !seen.insert((r, c)) {
            return Err(err(line, format!("repeated entry ({r}, {c})")));
        }
        triplets.push((r - 1, c - 1, v));
    }
    SparseMatrix::from_triplets(field, rows, cols, triplets)
}

/// Parses an instance from text.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut lines = Lines::new(text);
    let (line, tokens) = lines.expect("the format header")?;
    if tokens != [FORMAT_TAG, "1"] {
        return Err(err(line, format!("expected header `{FORMAT_TAG} {FORMAT_VERSION}`")));
    }
    let (line, p) = keyword_line::<u64>(&mut lines, "field", 1)?;
    let field = Field::new(p[0]).map_err(|e| err(line, e.to_string()))?;
    let (_, rows) = keyword_line::<usize>(&mut lines, "rows", 2)?;
    let (_, cols) = keyword_line::<usize>(&mut lines, "cols", 1)?;
    let n = cols[0];
    let m1 = matrix_block(&mut lines, "m1", field, rows[0], n)?;
    let m2 = matrix_block(&mut lines, "m2", field, rows[1], n)?;
    let mut inst = Instance::new(m1, m2)?;
    if let Some((line, tokens)) = lines.next() {
        if tokens != ["weights"] {
            return Err(err(line, format!("expected `weights` or end of file, found `{}`", tokens.join(" "))));
        }
        let mut weights = Vec::with_capacity(n);
        for _ in 0..n {
            let (line, tokens) = lines.expect("a weight")?;
            if tokens.len() != 1 {
                return Err(err(line, "expected one weight per line"));
            }
            let w = parse_weight(tokens[0]).ok_or_else(|| err(line, format!("invalid weight `{}`", tokens[0])))?;
            weights.push(w);
        }
        if let Some((line, _)) = lines.next() {
            return Err(err(line, "trailing content after the weights"));
        }
        inst = inst.with_weights(weights).map_err(|e| err(line, e.to_string()))?;
    }
    Ok(inst)
}

/// A nonnegative rational written `7` or `7/2`.
pub fn parse_weight(token: &str) -> Option<BigRational> {
    if token.starts_with('-') || token.starts_with('+') {
        return None;
    }
    if let Some((num, den)) = token.split_once('/') {
        let num = num.parse().ok()?;
        let den: num_bigint::BigInt = den.parse().ok()?;
        if den == 0.into() || den < 0.into() {
            return None;
        }
        Some(BigRational::new(num, den))
    } else {
        Some(BigRational::from_integer(token.parse().ok()?))
    }
}

fn write_block(out: &mut String, name: &str, m: &SparseMatrix) {
    let _ = writeln!(out, "{name} {}", m.nnz());
    for (r, c, v) in m.triplets() {
        let _ = writeln!(out, "{} {} {v}", r + 1, c + 1);
    }
}

/// Canonical text form of an instance.
pub fn write_instance(inst: &Instance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{FORMAT_TAG} {FORMAT_VERSION}");
    let _ = writeln!(out, "field {}", inst.field().modulus());
    let _ = writeln!(out, "rows {} {}", inst.m1().rows(), inst.m2().rows());
    let _ = writeln!(out, "cols {}", inst.n());
    write_block(&mut out, "m1", inst.m1());
    write_block(&mut out, "m2", inst.m2());
    if let Some(ws) = inst.weights() {
        out.push_str("weights\n");
        for w in ws {
            let _ = writeln!(out, "{w}");
        }
    }
    out
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<Instance> {
    parse_instance(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const WORKED: &str = "lmi 1\nfield 7\nrows 2 2\ncols 3\nm1 3\n1 1 1\n1 2 1\n2 3 1\nm2 3\n1 1 1\n2 2 1\n2 3 1\nweights\n5\n3\n2\n";

    #[test]
    fn worked_fixture() {
        let inst = parse_instance(WORKED).unwrap();
        assert_eq!(inst.n(), 3);
        assert_eq!(inst.m1().column_dense(1), vec![1, 0]);
        assert_eq!(inst.m2().column_dense(1), vec![0, 1]);
        assert_eq!(inst.weights().unwrap()[0], BigRational::from_integer(5.into()));
        assert_eq!(write_instance(&inst), WORKED);
    }

    #[test]
    fn value_equal_to_p_is_rejected() {
        let bad = WORKED.replace("2 3 1\nm2", "2 3 7\nm2");
        match parse_instance(&bad) {
            Err(Error::Parse { line: 8, .. }) => {}
            other => panic!("expected a parse error on line 8, got {other:?}"),
        }
    }

    #[test]
    fn comments_blank_lines_and_any_triple_order() {
        let text = "# worked\nlmi 1\n\nfield 7 # small\nrows 2 2\ncols 3\nm1 3\n2 3 1\n1 2 1\n1 1 1\nm2 3\n1 1 1\n2 2 1\n2 3 1\n";
        let inst = parse_instance(text).unwrap();
        assert!(inst.weights().is_none());
        assert_eq!(write_instance(&inst), WORKED.split("weights").next().unwrap());
    }

    #[test]
    fn rational_weights_round_trip() {
        let text = WORKED.replace("weights\n5\n3\n2\n", "weights\n7/2\n4/2\n0\n");
        let inst = parse_instance(&text).unwrap();
        let back = write_instance(&inst);
        assert!(back.ends_with("weights\n7/2\n2\n0\n"));
        assert_eq!(parse_instance(&back).unwrap(), inst);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            (WORKED.replace("lmi 1", "lmi 2"), 1),
            (WORKED.replace("field 7", "field 8"), 2),
            (WORKED.replace("m1 3\n1 1 1", "m1 3\n1 1 0"), 6),
            (WORKED.replace("m1 3\n1 1 1", "m1 3\n3 1 1"), 6),
            (WORKED.replace("m1 3\n1 1 1", "m1 3\n1 2 1"), 7),
            (WORKED.replace("m1 3\n1 1 1", "m1 3\n1 x 1"), 6),
            (WORKED.replace("\n2\n", "\n-2\n"), 16),
            (WORKED.replace("\n2\n", "\n1/0\n"), 16),
            (format!("{WORKED}extra\n"), 17),
        ];
        for (text, want) in cases {
            match parse_instance(&text) {
                Err(Error::Parse { line, .. }) => assert_eq!(line, want, "{text}"),
                other => panic!("expected a parse error, got {other:?}"),
            }
        }
        match parse_instance("lmi 1\nfield 7\n") {
            Err(Error::Parse { line: 3, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn weight_tokens() {
        assert_eq!(parse_weight("6/4"), Some(BigRational::new(3.into(), 2.into())));
        assert_eq!(parse_weight("0"), Some(BigRational::from_integer(0.into())));
        assert_eq!(parse_weight("+1"), None);
        assert_eq!(parse_weight("1/-2"), None);
        assert_eq!(parse_weight("a"), None);
    }
}
