//! Expected census tables, read from a plain text data file.

use std::collections::BTreeMap;

use thiserror::Error;

pub const BUILTIN: &str = include_str!("../data/expected_tables.txt");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusRow {
    pub n: usize,
    pub k: usize,
    pub include_empty: bool,
    pub long_running: bool,
    /// `[total, bad degree, fail SCC, splits, sdepth ok, counterexamples]`.
    pub expected: [u64; 6],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapRow {
    pub n: usize,
    pub k: usize,
    pub long_running: bool,
    pub cells: BTreeMap<(usize, usize), u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Tables {
    pub census: Vec<CensusRow>,
    pub gap: Vec<GapRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("table data line {line}: {message}")]
pub struct TableError {
    pub line: usize,
    pub message: String,
}

fn flag(s: &str) -> Result<bool, String> {
    match s {
        "0" => Ok(false),
        "1" => Ok(true),
        other => Err(format!("expected 0 or 1, found `{other}`")),
    }
}

fn number<T: std::str::FromStr>(s: &str) -> Result<T, String> {
    s.parse().map_err(|_| format!("expected a number, found `{s}`"))
}

fn cell(s: &str) -> Result<((usize, usize), u64), String> {
    let bad = || format!("expected q:i=count, found `{s}`");
    let (key, count) = s.split_once('=').ok_or_else(bad)?;
    let (q, i) = key.split_once(':').ok_or_else(bad)?;
    Ok(((number(q)?, number(i)?), number(count)?))
}

fn parse_line(fields: &[&str], tables: &mut Tables) -> Result<(), String> {
    match fields[0] {
        "census" => {
            if fields.len() != 11 {
                return Err(format!("census rows have 10 fields, found {}", fields.len() - 1));
            }
            let mut expected = [0u64; 6];
            for (slot, f) in expected.iter_mut().zip(&fields[5..]) {
                *slot = number(f)?;
            }
            tables.census.push(CensusRow {
                n: number(fields[1])?,
                k: number(fields[2])?,
                include_empty: flag(fields[3])?,
                long_running: flag(fields[4])?,
                expected,
            });
        }
        "gap" => {
            if fields.len() < 4 {
                return Err("gap rows need n, k and the long flag".into());
            }
            let cells = fields[4..].iter().map(|f| cell(f)).collect::<Result<_, _>>()?;
            tables.gap.push(GapRow {
                n: number(fields[1])?,
                k: number(fields[2])?,
                long_running: flag(fields[3])?,
                cells,
            });
        }
        other => return Err(format!("unknown row kind `{other}`")),
    }
    Ok(())
}

pub fn parse_tables(text: &str) -> Result<Tables, TableError> {
    let mut tables = Tables::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        parse_line(&fields, &mut tables).map_err(|message| TableError { line: i + 1, message })?;
    }
    Ok(tables)
}
