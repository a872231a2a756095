//! Text formats for colourings and matchings.
//!
//! Colouring file: a header line `n k`, then the `C(2nk, 2)` colours in lexicographic
//! edge order, whitespace separated (written on one line). Matching file: one line
//! `u v` per pair, `u < v`, sorted by `u`. Readers accept any whitespace between tokens
//! and both LF and CRLF line endings.

use std::fs;
use std::path::Path;

use crate::error::{IoError, ParseError};
use crate::model::{edge_count, Colour, ColouredClique, PerfectMatching};

/// A parsed colouring plus whether it is balanced. Unbalanced colourings are accepted;
/// callers decide whether to warn.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColouringFile {
    pub clique: ColouredClique,
    pub balanced: bool,
}

fn tokens(text: &str) -> impl Iterator<Item = (usize, usize, &str)> {
    text.lines().enumerate().flat_map(|(l, line)| {
        line.split_whitespace()
            .enumerate()
            .map(move |(p, tok)| (l + 1, p + 1, tok))
    })
}

fn number<T: std::str::FromStr>(line: usize, pos: usize, tok: &str, what: &str) -> Result<T, ParseError> {
    tok.parse()
        .map_err(|_| ParseError::new(line, pos, format!("expected {what}, found {tok:?}")))
}

pub fn parse_colouring(text: &str) -> Result<ColouringFile, IoError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (header_idx, header) = lines
        .next()
        .ok_or_else(|| ParseError::new(1, 1, "empty file: expected header `n k`"))?;
    let line_no = header_idx + 1;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(ParseError::new(
            line_no,
            1,
            format!("malformed header: expected `n k`, found {} tokens", fields.len()),
        )
        .into());
    }
    let n: usize = number(line_no, 1, fields[0], "positive integer n")?;
    let k: usize = number(line_no, 2, fields[1], "positive integer k")?;
    if n == 0 || k == 0 {
        return Err(ParseError::new(line_no, 1, "n and k must be positive").into());
    }
    let expected = edge_count(2 * n * k);
    let body = text
        .lines()
        .skip(header_idx + 1)
        .collect::<Vec<_>>()
        .join("\n");
    let mut colours: Vec<Colour> = Vec::with_capacity(expected);
    let mut last = (line_no, 2);
    for (l, p, tok) in tokens(&body) {
        let (l, p) = (l + header_idx + 1, p);
        last = (l, p);
        if colours.len() == expected {
            return Err(ParseError::new(
                l,
                p,
                format!("too many colours: expected exactly {expected}"),
            )
            .into());
        }
        let c: Colour = number(l, p, tok, "colour index")?;
        if c == 0 || c as usize > k {
            return Err(ParseError::new(l, p, format!("colour {c} outside 1..={k}")).into());
        }
        colours.push(c);
    }
    if colours.len() != expected {
        return Err(ParseError::new(
            last.0,
            last.1,
            format!(
                "truncated colour list: expected {expected} colours for K_{}, found {}",
                2 * n * k,
                colours.len()
            ),
        )
        .into());
    }
    let clique = ColouredClique::new(n, k, colours)?;
    Ok(ColouringFile {
        balanced: clique.is_balanced(),
        clique,
    })
}

pub fn format_colouring(clique: &ColouredClique) -> String {
    let body = clique
        .colours()
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(" ");
    format!("{} {}\n{}\n", clique.n(), clique.k(), body)
}

pub fn parse_matching(text: &str, num_vertices: usize) -> Result<PerfectMatching, IoError> {
    let mut pairs = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if fields.len() != 2 {
            return Err(ParseError::new(
                idx + 1,
                1,
                format!("expected `u v`, found {} tokens", fields.len()),
            )
            .into());
        }
        let u: usize = number(idx + 1, 1, fields[0], "vertex")?;
        let v: usize = number(idx + 1, 2, fields[1], "vertex")?;
        pairs.push((u, v));
    }
    Ok(PerfectMatching::new(pairs, num_vertices)?)
}

pub fn format_matching(matching: &PerfectMatching) -> String {
    matching
        .canonical_pairs()
        .iter()
        .map(|(u, v)| format!("{u} {v}\n"))
        .collect()
}

fn read(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), IoError> {
    fs::write(path, text).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_colouring(path: impl AsRef<Path>) -> Result<ColouringFile, IoError> {
    parse_colouring(&read(path.as_ref())?)
}

pub fn write_colouring(path: impl AsRef<Path>, clique: &ColouredClique) -> Result<(), IoError> {
    write(path.as_ref(), &format_colouring(clique))
}

pub fn read_matching(path: impl AsRef<Path>, num_vertices: usize) -> Result<PerfectMatching, IoError> {
    parse_matching(&read(path.as_ref())?, num_vertices)
}

pub fn write_matching(path: impl AsRef<Path>, matching: &PerfectMatching) -> Result<(), IoError> {
    write(path.as_ref(), &format_matching(matching))
}
