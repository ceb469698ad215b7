//! Text formats for codes, Gram matrices, vector lists and frames.
//!
//! Blank lines and `#` comments are ignored everywhere. Parsers reject
//! oversized inputs instead of allocating for them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::codes::{BinaryCode, MAX_LENGTH};
use crate::error::{Error, Result};
use crate::lattice::{IntegralLattice, LatticeVector, Scale};

/// Largest rank accepted by the Gram and frame parsers.
pub const MAX_RANK: usize = 256;
/// Largest number of vectors in a vector list.
pub const MAX_VECTORS: usize = 1 << 16;
/// Longest accepted integer literal, in characters.
pub const MAX_DIGITS: usize = 256;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn parse_usize(line: usize, tok: &str, what: &str) -> Result<usize> {
    tok.parse::<usize>()
        .map_err(|_| Error::parse(line, format!("expected {what}, found {tok:?}")))
}

fn parse_int(line: usize, tok: &str) -> Result<BigInt> {
    if tok.len() > MAX_DIGITS {
        return Err(Error::parse(line, "integer literal too long"));
    }
    tok.parse::<BigInt>()
        .map_err(|_| Error::parse(line, format!("expected integer, found {tok:?}")))
}

fn parse_rational(line: usize, tok: &str) -> Result<BigRational> {
    match tok.split_once('/') {
        None => Ok(BigRational::from_integer(parse_int(line, tok)?)),
        Some((p, q)) => {
            let q = parse_int(line, q)?;
            if q.is_zero() {
                return Err(Error::parse(line, "zero denominator"));
            }
            Ok(BigRational::new(parse_int(line, p)?, q))
        }
    }
}

/// `length dim`, then `dim` words of `0`/`1` characters.
pub fn parse_code(text: &str) -> Result<BinaryCode> {
    let mut lines = content_lines(text);
    let (ln, header) = lines.next().ok_or_else(|| Error::parse(0, "empty input"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 2 {
        return Err(Error::parse(ln, "header must be `length dim`"));
    }
    let length = parse_usize(ln, toks[0], "length")?;
    let dim = parse_usize(ln, toks[1], "dimension")?;
    if length > MAX_LENGTH {
        return Err(Error::parse(ln, format!("length {length} exceeds {MAX_LENGTH}")));
    }
    if dim > length {
        return Err(Error::parse(ln, format!("dimension {dim} exceeds length {length}")));
    }
    let mut words = Vec::with_capacity(dim);
    for (ln, l) in lines {
        if words.len() == dim {
            return Err(Error::parse(ln, "more words than the declared dimension"));
        }
        let w: String = l.split_whitespace().collect();
        if w.len() != length {
            return Err(Error::parse(ln, format!("word has {} symbols, expected {length}", w.len())));
        }
        let word = BinaryCode::word_from_str(&w).ok_or_else(|| Error::parse(ln, "word must consist of 0 and 1"))?;
        words.push(word);
    }
    if words.len() != dim {
        return Err(Error::parse(0, format!("expected {dim} words, found {}", words.len())));
    }
    let c = BinaryCode::new(length, &words)?;
    if c.dim() != dim {
        return Err(Error::parse(0, "words are linearly dependent"));
    }
    Ok(c)
}

pub fn format_code(c: &BinaryCode) -> String {
    c.to_string()
}

/// `rank`, an optional `scale 1/2` line, then `rank` rows of integers.
pub fn parse_gram(text: &str) -> Result<IntegralLattice> {
    let mut lines = content_lines(text).peekable();
    let (ln, header) = lines.next().ok_or_else(|| Error::parse(0, "empty input"))?;
    let n = parse_usize(ln, header, "rank")?;
    if n > MAX_RANK {
        return Err(Error::parse(ln, format!("rank {n} exceeds {MAX_RANK}")));
    }
    let mut scale = Scale::One;
    if let Some((ln, l)) = lines.peek().copied() {
        if l.starts_with("scale") {
            let toks: Vec<&str> = l.split_whitespace().collect();
            if toks != ["scale", "1/2"] {
                return Err(Error::parse(ln, "scale line must be `scale 1/2`"));
            }
            scale = Scale::Half;
            lines.next();
        }
    }
    let mut rows = Vec::with_capacity(n);
    for (ln, l) in lines {
        if rows.len() == n {
            return Err(Error::parse(ln, "more rows than the declared rank"));
        }
        let row = l
            .split_whitespace()
            .map(|t| parse_int(ln, t))
            .collect::<Result<Vec<_>>>()?;
        if row.len() != n {
            return Err(Error::parse(ln, format!("row has {} entries, expected {n}", row.len())));
        }
        rows.push(row);
    }
    if rows.len() != n {
        return Err(Error::parse(0, format!("expected {n} rows, found {}", rows.len())));
    }
    IntegralLattice::with_scale(rows, scale)
}

pub fn format_gram(l: &IntegralLattice) -> String {
    let mut out = format!("{}\n", l.rank());
    if l.scale() == Scale::Half {
        out.push_str("scale 1/2\n");
    }
    for row in l.stored_gram() {
        let parts: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        out.push_str(&parts.join(" "));
        out.push('\n');
    }
    out
}

/// One vector per line, entries `p/q` or integers; all of equal length.
pub fn parse_vectors(text: &str) -> Result<Vec<LatticeVector>> {
    let mut out: Vec<LatticeVector> = Vec::new();
    for (ln, l) in content_lines(text) {
        if out.len() == MAX_VECTORS {
            return Err(Error::parse(ln, "too many vectors"));
        }
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() > MAX_RANK {
            return Err(Error::parse(ln, "vector too long"));
        }
        let v = toks
            .iter()
            .map(|t| parse_rational(ln, t))
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = out.first() {
            if first.len() != v.len() {
                return Err(Error::parse(ln, format!("vector has {} entries, expected {}", v.len(), first.len())));
            }
        }
        out.push(LatticeVector::new(v));
    }
    Ok(out)
}

pub fn format_vectors(vs: &[LatticeVector]) -> String {
    vs.iter().map(|v| format!("{v}\n")).collect()
}

/// `n`, then `n` vectors of length `n`, one representative per pair.
pub fn parse_frame(text: &str) -> Result<Vec<LatticeVector>> {
    let mut lines = content_lines(text);
    let (ln, header) = lines.next().ok_or_else(|| Error::parse(0, "empty input"))?;
    let n = parse_usize(ln, header, "frame size")?;
    if n > MAX_RANK {
        return Err(Error::parse(ln, format!("frame size {n} exceeds {MAX_RANK}")));
    }
    let rest: String = lines.map(|(_, l)| format!("{l}\n")).collect();
    let vs = parse_vectors(&rest)?;
    if vs.len() != n {
        return Err(Error::parse(0, format!("expected {n} vectors, found {}", vs.len())));
    }
    if vs.iter().any(|v| v.len() != n) {
        return Err(Error::parse(0, format!("frame vectors must have length {n}")));
    }
    Ok(vs)
}

pub fn format_frame(vs: &[LatticeVector]) -> String {
    format!("{}\n{}", vs.len(), format_vectors(vs))
}
