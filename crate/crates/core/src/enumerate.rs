//! Exhaustive enumeration of small semigroups, canonical forms up to
//! relabeling, and the Cayley table corpus format.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{Semigroup, TableError};

/// Orders above this need an explicit opt-in; the counts explode.
pub const SOFT_MAX_ORDER: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Every associative table.
    #[default]
    Raw,
    /// One table per isomorphism class.
    UpToIso,
    /// One table per class under isomorphism and anti-isomorphism.
    UpToIsoAndAnti,
}

impl Mode {
    pub fn cli_name(&self) -> &'static str {
        match self {
            Mode::Raw => "raw",
            Mode::UpToIso => "iso",
            Mode::UpToIsoAndAnti => "iso-anti",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.cli_name())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "raw" => Ok(Mode::Raw),
            "iso" | "up_to_iso" => Ok(Mode::UpToIso),
            "iso-anti" | "up_to_iso_and_anti" => Ok(Mode::UpToIsoAndAnti),
            other => Err(format!("unknown mode {other:?} (expected raw, iso or iso-anti)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalForm {
    pub table: Semigroup,
    pub mode: Mode,
}

/// Least relabeled table in row-major lexicographic order.
///
/// A bijection `σ` maps `T` to `T'` with `T'[σx][σy] = σ(T[x][y])`; in
/// [`Mode::UpToIsoAndAnti`] the transpose's relabelings compete as well.
pub fn canonicalize(s: &Semigroup, mode: Mode) -> CanonicalForm {
    let table = match mode {
        Mode::Raw => s.clone(),
        Mode::UpToIso => least_relabeling(s),
        Mode::UpToIsoAndAnti => {
            let a = least_relabeling(s);
            let b = least_relabeling(&s.transpose());
            if b.cells() < a.cells() {
                b
            } else {
                a
            }
        }
    };
    CanonicalForm { table, mode }
}

fn least_relabeling(s: &Semigroup) -> Semigroup {
    let n = s.order();
    let cells = s.cells();
    let mut best: Option<Vec<u8>> = None;
    let mut candidate = vec![0u8; n * n];
    for sigma in (0..n).permutations(n) {
        for x in 0..n {
            for y in 0..n {
                candidate[sigma[x] * n + sigma[y]] = sigma[cells[x * n + y] as usize] as u8;
            }
        }
        if best.as_ref().is_none_or(|b| candidate < *b) {
            best = Some(candidate.clone());
        }
    }
    Semigroup::from_cells_unchecked(n, best.expect("at least one permutation"))
}

pub fn is_canonical(s: &Semigroup, mode: Mode) -> bool {
    mode == Mode::Raw || canonicalize(s, mode).table == *s
}

const UNSET: u8 = u8::MAX;

/// Depth-first enumeration of associative tables, filling cells in row-major
/// order and rejecting any partial table with a fully-defined violating
/// triple. Tables come out in lexicographic order.
#[derive(Debug, Clone)]
pub struct RawTables {
    order: usize,
    cells: Vec<u8>,
    pos: usize,
    done: bool,
}

impl RawTables {
    pub fn new(order: usize) -> Self {
        assert!((1..=u8::MAX as usize - 1).contains(&order), "order out of range");
        Self { order, cells: vec![UNSET; order * order], pos: 0, done: false }
    }

    /// Checks every triple whose four products are already assigned and that
    /// involves the cell at `pos`.
    fn consistent(&self, pos: usize) -> bool {
        let n = self.order;
        let cells = &self.cells;
        let get = |x: usize, y: usize| cells[x * n + y];
        let (i, j) = (pos / n, pos % n);
        let check = |x: usize, y: usize, z: usize| {
            let xy = get(x, y);
            let yz = get(y, z);
            if xy == UNSET || yz == UNSET {
                return true;
            }
            let left = get(xy as usize, z);
            let right = get(x, yz as usize);
            left == UNSET || right == UNSET || left == right
        };
        for t in 0..n {
            // cell is xy, yz, (xy)z or x(yz)
            if !check(i, j, t) || !check(t, i, j) {
                return false;
            }
            for u in 0..n {
                if (get(t, u) as usize == i && !check(t, u, j)) || (get(u, t) as usize == j && !check(i, u, t)) {
                    return false;
                }
            }
        }
        true
    }
}

impl Iterator for RawTables {
    type Item = Semigroup;

    fn next(&mut self) -> Option<Semigroup> {
        if self.done {
            return None;
        }
        let len = self.cells.len();
        let mut pos = self.pos;
        loop {
            let next = if self.cells[pos] == UNSET { 0 } else { self.cells[pos] + 1 };
            if next as usize >= self.order {
                self.cells[pos] = UNSET;
                if pos == 0 {
                    self.done = true;
                    return None;
                }
                pos -= 1;
                continue;
            }
            self.cells[pos] = next;
            if !self.consistent(pos) {
                continue;
            }
            if pos + 1 == len {
                self.pos = pos;
                return Some(Semigroup::from_cells_unchecked(self.order, self.cells.clone()));
            }
            pos += 1;
        }
    }
}

/// All semigroups of the given order, filtered to canonical representatives
/// in the reduced modes.
pub fn enumerate_tables(order: usize, mode: Mode) -> impl Iterator<Item = Semigroup> {
    RawTables::new(order).filter(move |s| is_canonical(s, mode))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("table {index} (line {line}): {source}")]
    Invalid {
        index: usize,
        line: usize,
        #[source]
        source: TableError,
    },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

/// Parses Cayley tables: the order on its own line, then that many rows.
/// Blank lines separate tables; `#` starts a comment.
///
/// Each table yields `Ok` or the error that invalidated it. A syntax error
/// ends parsing, since table boundaries can no longer be trusted.
pub fn parse_corpus(text: &str) -> Vec<Result<Semigroup, CorpusError>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let mut out = Vec::new();
    let parse_err = |line: usize, message: String| CorpusError::Parse { line, message };
    while let Some((header_line, header)) = lines.next() {
        let order = match header.parse::<usize>() {
            Ok(n) if n >= 1 => n,
            _ => {
                out.push(Err(parse_err(header_line, format!("expected a positive table order, found {header:?}"))));
                return out;
            }
        };
        let mut rows: Vec<Vec<i64>> = Vec::with_capacity(order);
        for r in 0..order {
            let Some((line, text)) = lines.next() else {
                out.push(Err(parse_err(header_line, format!("table ends after {r} of {order} rows"))));
                return out;
            };
            let row: Result<Vec<i64>, _> = text.split_whitespace().map(str::parse::<i64>).collect();
            match row {
                Ok(row) if row.len() == order => rows.push(row),
                Ok(row) => {
                    out.push(Err(parse_err(line, format!("expected {order} entries, found {}", row.len()))));
                    return out;
                }
                Err(e) => {
                    out.push(Err(parse_err(line, format!("bad entry: {e}"))));
                    return out;
                }
            }
        }
        let index = out.len();
        out.push(Semigroup::new(&rows).map_err(|source| CorpusError::Invalid { index, line: header_line, source }));
    }
    out
}

/// Reads a corpus file. With `strict`, the first invalid table is an error;
/// otherwise invalid tables are returned alongside the valid ones.
pub fn read_corpus(path: &Path, strict: bool) -> Result<(Vec<Semigroup>, Vec<CorpusError>), CorpusError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CorpusError::Io { path: path.display().to_string(), message: e.to_string() })?;
    let mut valid = Vec::new();
    let mut rejected = Vec::new();
    for entry in parse_corpus(&text) {
        match entry {
            Ok(s) => valid.push(s),
            Err(e @ CorpusError::Parse { .. }) => return Err(e),
            Err(e) if strict => return Err(e),
            Err(e) => rejected.push(e),
        }
    }
    Ok((valid, rejected))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Every `n×n` table, filtered by the full associativity check.
    fn brute_force(n: usize) -> Vec<Semigroup> {
        let cells = n * n;
        (0..n.pow(cells as u32))
            .filter_map(|mut code| {
                let mut table = vec![0u8; cells];
                for slot in table.iter_mut().rev() {
                    *slot = (code % n) as u8;
                    code /= n;
                }
                Semigroup::from_cells(n, table).ok()
            })
            .collect()
    }

    #[test]
    fn raw_counts_match_brute_force() {
        for n in 1..=3 {
            let fast: Vec<_> = RawTables::new(n).collect();
            assert_eq!(fast, brute_force(n), "order {n}");
        }
        assert_eq!(brute_force(2).len(), 8);
        assert_eq!(brute_force(3).len(), 113);
    }

    #[test]
    fn reduced_counts() {
        let count = |n, mode| enumerate_tables(n, mode).count();
        assert_eq!(count(1, Mode::UpToIso), 1);
        assert_eq!((count(2, Mode::UpToIso), count(2, Mode::UpToIsoAndAnti)), (5, 4));
        assert_eq!((count(3, Mode::UpToIso), count(3, Mode::UpToIsoAndAnti)), (24, 18));
    }

    #[test]
    fn reduced_streams_have_no_related_pairs() {
        for n in 1..=3 {
            for mode in [Mode::UpToIso, Mode::UpToIsoAndAnti] {
                let reps: Vec<_> = enumerate_tables(n, mode).collect();
                for (i, a) in reps.iter().enumerate() {
                    for b in &reps[i + 1..] {
                        assert_ne!(canonicalize(a, mode), canonicalize(b, mode));
                    }
                }
            }
        }
    }

    #[test]
    fn transpose_pairs() {
        let left_zero = Semigroup::new(&[&[0i64, 0][..], &[1, 1][..]]).unwrap();
        let right_zero = left_zero.transpose();
        assert_ne!(canonicalize(&left_zero, Mode::UpToIso), canonicalize(&right_zero, Mode::UpToIso));
        assert_eq!(
            canonicalize(&left_zero, Mode::UpToIsoAndAnti),
            canonicalize(&right_zero, Mode::UpToIsoAndAnti)
        );
    }

    #[test]
    fn canonicalize_is_idempotent_and_relabeling_invariant() {
        let z2 = Semigroup::new(&[&[0i64, 1][..], &[1, 0][..]]).unwrap();
        let swapped = Semigroup::new(&[&[1i64, 0][..], &[0, 1][..]]).unwrap();
        let c = canonicalize(&z2, Mode::UpToIso);
        assert_eq!(c, canonicalize(&swapped, Mode::UpToIso));
        assert_eq!(canonicalize(&c.table, Mode::UpToIso), c);
    }

    #[test]
    fn corpus_parsing() {
        let text = "# bands\n2\n0 0\n1 1\n\n2\n0 0\n0 1\n";
        let parsed = parse_corpus(text);
        assert_eq!(parsed.len(), 2);
        assert!(parsed.iter().all(|r| r.is_ok()));
        assert!(parse_corpus("").is_empty());

        let bad = parse_corpus("2\n1 1\n0 0\n");
        assert!(matches!(
            bad[0],
            Err(CorpusError::Invalid { index: 0, line: 1, source: TableError::AssociativityViolation { .. } })
        ));
        let truncated = parse_corpus("3\n0 0 0\n");
        assert!(matches!(truncated[0], Err(CorpusError::Parse { line: 1, .. })));
        let junk = parse_corpus("2\n0 x\n0 0\n");
        assert!(matches!(junk[0], Err(CorpusError::Parse { line: 2, .. })));
    }
}
