//! Text format for antichains.
//!
//! Facets are separated by whitespace. A facet is either a comma-separated
//! list of 1-based vertices (`1,2,10`), optionally in braces, or, without
//! commas, a run of single digits (`123`). `{}` denotes the empty facet and
//! `#` starts a comment running to the end of the line.

use thiserror::Error;

use crate::lattice::{Antichain, LatticeError, VertexSet, MAX_N};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("malformed token `{0}`")]
    MalformedToken(String),
    #[error("vertex {0} is outside 1..={MAX_N}")]
    VertexOutOfRange(usize),
    #[error("vertex {vertex} exceeds the declared ground set size {n}")]
    ExceedsGround { vertex: usize, n: usize },
    #[error("facets {0} and {1} are comparable")]
    Comparable(String, String),
    #[error("facet {0} appears twice")]
    Duplicate(String),
    #[error("ground set size {0} exceeds {MAX_N}")]
    GroundTooLarge(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

fn tokens(text: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        let mut start = None;
        for (ci, ch) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
            if ch.is_whitespace() {
                if let Some(s) = start.take() {
                    out.push(Token { text: &line[s..ci], line: li + 1, column: line[..s].chars().count() + 1 });
                }
            } else if start.is_none() {
                start = Some(ci);
            }
        }
    }
    out
}

fn parse_facet(tok: &Token<'_>, compact: bool) -> Result<Vec<usize>, ParseErrorKind> {
    let malformed = || ParseErrorKind::MalformedToken(tok.text.to_string());
    let mut body = tok.text;
    if body == "∅" {
        return Ok(Vec::new());
    }
    if let Some(inner) = body.strip_prefix('{') {
        body = inner.strip_suffix('}').ok_or_else(malformed)?;
        if body.is_empty() {
            return Ok(Vec::new());
        }
    }
    let vertices: Vec<usize> = if body.contains(',') || !compact {
        body.split(',')
            .filter(|p| !p.is_empty())
            .map(|p| p.parse::<usize>().map_err(|_| malformed()))
            .collect::<Result<_, _>>()?
    } else {
        body.chars()
            .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(malformed))
            .collect::<Result<_, _>>()?
    };
    if vertices.is_empty() {
        return Err(malformed());
    }
    if let Some(&v) = vertices.iter().find(|&&v| v == 0 || v > MAX_N) {
        return Err(ParseErrorKind::VertexOutOfRange(v));
    }
    Ok(vertices)
}

/// Parses an antichain. The ground set size is `n` when given, otherwise the
/// largest vertex that appears.
pub fn parse_antichain(text: &str, n: Option<usize>) -> Result<Antichain, ParseError> {
    let toks = tokens(text);
    // digits run together only on small ground sets; otherwise a token
    // without commas is a single vertex
    let compact = match n {
        Some(n) => n <= 9,
        None => !toks.iter().any(|t| t.text.contains(',')),
    };
    let mut facets = Vec::with_capacity(toks.len());
    for tok in &toks {
        let vs = parse_facet(tok, compact).map_err(|kind| ParseError { line: tok.line, column: tok.column, kind })?;
        facets.push(vs);
    }
    let inferred = facets.iter().flatten().copied().max().unwrap_or(0);
    let ground = n.unwrap_or(inferred);
    if ground > MAX_N {
        return Err(ParseError { line: 1, column: 1, kind: ParseErrorKind::GroundTooLarge(ground) });
    }
    let mut sets = Vec::with_capacity(facets.len());
    for (tok, vs) in toks.iter().zip(&facets) {
        let at = |kind| ParseError { line: tok.line, column: tok.column, kind };
        let set = VertexSet::from_vertices(vs, ground).map_err(|e| match e {
            LatticeError::VertexOutOfRange { vertex, n } => at(ParseErrorKind::ExceedsGround { vertex, n }),
            other => at(ParseErrorKind::MalformedToken(other.to_string())),
        })?;
        sets.push((tok, set));
    }
    // report problems at the later of the two offending tokens
    for (i, (tok, a)) in sets.iter().enumerate() {
        for (_, b) in &sets[..i] {
            let at = |kind| ParseError { line: tok.line, column: tok.column, kind };
            if a == b {
                return Err(at(ParseErrorKind::Duplicate(a.to_string())));
            }
            if a.is_comparable(*b) {
                return Err(at(ParseErrorKind::Comparable(b.to_string(), a.to_string())));
            }
        }
    }
    Ok(Antichain::new(ground, sets.into_iter().map(|(_, s)| s)).expect("validated above"))
}

/// Formats one facet: compact digits when `n <= 9`, commas otherwise.
pub fn format_facet(set: VertexSet) -> String {
    if set.is_empty() {
        return "{}".to_string();
    }
    let parts: Vec<String> = set.vertices().map(|v| v.to_string()).collect();
    if set.n() <= 9 {
        parts.concat()
    } else {
        parts.join(",")
    }
}

pub fn format_antichain(a: &Antichain) -> String {
    a.iter().map(format_facet).collect::<Vec<_>>().join(" ")
}
