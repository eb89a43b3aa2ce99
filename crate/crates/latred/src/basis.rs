//! Basis representation and bit-exact text serialization.
//!
//! A basis is stored as rows of arbitrary-precision integers. The text
//! format is the common `[[a b][c d]]` matrix convention: an outer pair of
//! brackets enclosing one bracketed row per basis vector, whitespace
//! insensitive between tokens.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Exact integer row basis: `n` generators in ambient dimension `m`, n <= m.
///
/// Linear independence is not enforced at construction; rank deficiency is
/// detected by the Gram-Schmidt machinery downstream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntBasis {
    rows: Vec<Vec<BigInt>>,
}

impl IntBasis {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyBasis);
        }
        let m = rows[0].len();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != m {
                return Err(Error::RaggedRows { row: i + 1, got: r.len(), expected: m });
            }
        }
        if rows.len() > m {
            return Err(Error::Shape(format!(
                "rank {} exceeds ambient dimension {}",
                rows.len(),
                m
            )));
        }
        Ok(IntBasis { rows })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        IntBasis::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
        .expect("valid literal basis")
    }

    /// Rank (number of generators).
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Ambient dimension (length of each row).
    pub fn ambient(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.rows[i]
    }

    pub fn into_rows(self) -> Vec<Vec<BigInt>> {
        self.rows
    }

    /// Exact inner product of rows `i` and `j`.
    pub fn inner(&self, i: usize, j: usize) -> BigInt {
        dot(&self.rows[i], &self.rows[j])
    }

    /// Exact Gram matrix (full square form).
    pub fn gram(&self) -> Vec<Vec<BigInt>> {
        let n = self.dim();
        let mut g = vec![vec![BigInt::ZERO; n]; n];
        for i in 0..n {
            for j in 0..=i {
                let v = self.inner(i, j);
                g[j][i] = v.clone();
                g[i][j] = v;
            }
        }
        g
    }

    /// `rows[l] -= q * rows[j]`.
    pub(crate) fn row_sub(&mut self, l: usize, j: usize, q: &BigInt) {
        debug_assert_ne!(l, j);
        let (a, b) = borrow_two(&mut self.rows, l, j);
        for (al, bj) in a.iter_mut().zip(b.iter()) {
            *al -= q * bj;
        }
    }

    /// Applies the deep-insertion permutation: row `l` moves to position `k`,
    /// rows `k..l` shift down by one. `k <= l`.
    pub(crate) fn rotate_insert(&mut self, k: usize, l: usize) {
        debug_assert!(k <= l && l < self.rows.len());
        self.rows[k..=l].rotate_right(1);
    }
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let mut acc = BigInt::ZERO;
    for (x, y) in a.iter().zip(b.iter()) {
        acc += x * y;
    }
    acc
}

/// Mutably borrows rows `l` and `j` at once.
fn borrow_two<T>(rows: &mut [T], l: usize, j: usize) -> (&mut T, &T) {
    if l < j {
        let (head, tail) = rows.split_at_mut(j);
        (&mut head[l], &tail[0])
    } else {
        let (head, tail) = rows.split_at_mut(l);
        (&mut tail[0], &head[j])
    }
}

/// Exact rational row basis; the exact-verification carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalBasis {
    rows: Vec<Vec<BigRational>>,
}

impl RationalBasis {
    pub fn new(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyBasis);
        }
        let m = rows[0].len();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != m {
                return Err(Error::RaggedRows { row: i + 1, got: r.len(), expected: m });
            }
        }
        if rows.len() > m {
            return Err(Error::Shape(format!(
                "rank {} exceeds ambient dimension {}",
                rows.len(),
                m
            )));
        }
        Ok(RationalBasis { rows })
    }

    pub fn from_int(basis: &IntBasis) -> Self {
        RationalBasis {
            rows: basis
                .rows()
                .iter()
                .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<BigRational>] {
        &self.rows
    }

    pub fn inner(&self, i: usize, j: usize) -> BigRational {
        let mut acc = BigRational::zero();
        for (x, y) in self.rows[i].iter().zip(self.rows[j].iter()) {
            acc += x * y;
        }
        acc
    }

    pub fn gram(&self) -> Vec<Vec<BigRational>> {
        let n = self.dim();
        let mut g = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            for j in 0..=i {
                let v = self.inner(i, j);
                g[j][i] = v.clone();
                g[i][j] = v;
            }
        }
        g
    }
}

/// Parses the `[[...] [...]]` basis format.
///
/// Grammar: `[` row+ `]` with row = `[` int (space int)* `]`; integers are
/// base-10 with an optional leading `-`; any whitespace separates tokens.
pub fn parse_basis(text: &str) -> Result<IntBasis> {
    let mut p = Parser::new(text);
    p.skip_ws();
    p.expect('[')?;
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    loop {
        p.skip_ws();
        match p.peek() {
            Some('[') => {
                p.bump();
                rows.push(p.parse_row()?);
            }
            Some(']') => {
                p.bump();
                break;
            }
            Some(c) => return Err(p.err(format!("expected '[' or ']', found {c:?}"))),
            None => return Err(p.err("unexpected end of input, expected ']'".into())),
        }
    }
    p.skip_ws();
    if let Some(c) = p.peek() {
        return Err(p.err(format!("trailing input after basis: {c:?}")));
    }
    if rows.is_empty() {
        return Err(Error::EmptyBasis);
    }
    IntBasis::new(rows)
}

struct Parser<'a> {
    text: &'a str,
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser { text, chars: text.char_indices().peekable(), pos: 0 }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().map(|&(_, c)| c)
    }

    fn bump(&mut self) -> Option<char> {
        let (i, c) = self.chars.next()?;
        self.pos = i + c.len_utf8();
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn expect(&mut self, want: char) -> Result<()> {
        match self.bump() {
            Some(c) if c == want => Ok(()),
            Some(c) => Err(self.err(format!("expected {want:?}, found {c:?}"))),
            None => Err(self.err(format!("expected {want:?}, found end of input"))),
        }
    }

    fn parse_row(&mut self) -> Result<Vec<BigInt>> {
        let mut row = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(']') => {
                    self.bump();
                    if row.is_empty() {
                        return Err(self.err("empty row".into()));
                    }
                    return Ok(row);
                }
                Some(c) if c == '-' || c.is_ascii_digit() => {
                    row.push(self.parse_int()?);
                }
                Some(c) => return Err(self.err(format!("expected integer or ']', found {c:?}"))),
                None => return Err(self.err("unexpected end of input inside row".into())),
            }
        }
    }

    fn parse_int(&mut self) -> Result<BigInt> {
        let start = self.pos;
        if self.peek() == Some('-') {
            self.bump();
        }
        let digits_start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
        }
        if self.pos == digits_start {
            return Err(self.err("expected digits after '-'".into()));
        }
        let s = &self.text[start..self.pos];
        s.parse::<BigInt>()
            .map_err(|e| self.err(format!("invalid integer {s:?}: {e}")))
    }

    fn err(&self, msg: String) -> Error {
        let mut line = 1;
        let mut col = 1;
        for c in self.text[..self.pos].chars() {
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        Error::Parse { line, col, msg }
    }
}

/// Canonical text form: one bracketed row per line inside the outer pair,
/// single spaces between entries. `parse_basis(serialize_basis(b)) == b`.
pub fn serialize_basis(basis: &IntBasis) -> String {
    let mut out = String::from("[");
    for row in basis.rows() {
        out.push('[');
        for (i, x) in row.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(&x.to_string());
        }
        out.push_str("]\n");
    }
    out.push(']');
    out
}

/// Signed magnitude in bits of the largest squared row norm; used for
/// iteration caps.
pub fn max_row_norm_sq_bits(basis: &IntBasis) -> u64 {
    (0..basis.dim())
        .map(|i| basis.inner(i, i).abs().bits())
        .max()
        .unwrap_or(1)
        .max(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_identity() {
        let b = parse_basis("[[1 0][0 1]]").unwrap();
        assert_eq!(b, IntBasis::from_i64(&[&[1, 0], &[0, 1]]));
    }

    #[test]
    fn parse_round_trip() {
        let b = parse_basis("[[2 0][1 1]]").unwrap();
        assert_eq!(b, IntBasis::from_i64(&[&[2, 0], &[1, 1]]));
        let s = serialize_basis(&b);
        assert_eq!(s, "[[2 0]\n[1 1]\n]");
        assert_eq!(parse_basis(&s).unwrap(), b);
    }

    #[test]
    fn parse_dependent_rows_is_fine() {
        // Rank deficiency is a downstream (GSO) concern, not a parse error.
        let b = parse_basis("[[1 2][2 4]]").unwrap();
        assert_eq!(b.dim(), 2);
    }

    #[test]
    fn serialize_identity() {
        let b = IntBasis::from_i64(&[&[1, 0], &[0, 1]]);
        assert_eq!(serialize_basis(&b), "[[1 0]\n[0 1]\n]");
    }

    #[test]
    fn parse_whitespace_insensitive() {
        let b = parse_basis(" [ [ 1   0 ]\n\t[ 0 1 ] ] ").unwrap();
        assert_eq!(b, IntBasis::from_i64(&[&[1, 0], &[0, 1]]));
        let b2 = parse_basis("[[-3 14][7 -2]]").unwrap();
        assert_eq!(b2, IntBasis::from_i64(&[&[-3, 14], &[7, -2]]));
    }

    #[test]
    fn parse_errors_report_position() {
        match parse_basis("[[1 0]\n[0 x]]") {
            Err(Error::Parse { line, col, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(col, 4);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(matches!(parse_basis("[]"), Err(Error::EmptyBasis)));
        assert!(matches!(parse_basis("[[1 2][3]]"), Err(Error::RaggedRows { .. })));
        assert!(parse_basis("[[1 2]] junk").is_err());
    }

    #[test]
    fn ambient_smaller_than_rank_rejected() {
        assert!(parse_basis("[[1][2]]").is_err());
    }

    #[test]
    fn rotate_insert_moves_row_to_front_of_segment() {
        let mut b = IntBasis::from_i64(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        // sigma_{1,3} on rows (a,b,c,d) -> (c,a,b,d), 0-based k=0, l=2
        b.rotate_insert(0, 2);
        assert_eq!(
            b,
            IntBasis::from_i64(&[&[0, 0, 1, 0], &[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 0, 1]])
        );
    }
}
