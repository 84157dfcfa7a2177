//! Finite semigroups given by Cayley tables, element-level invariants and
//! the case split used by the equational-domain witnesses.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Largest order a [`Semigroup`] may have; elements are stored as `u8`.
pub const MAX_ORDER: usize = 255;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("table is empty")]
    Empty,
    #[error("order {0} exceeds the supported maximum of {MAX_ORDER}")]
    OrderTooLarge(usize),
    #[error("row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("entry {value} at ({row}, {col}) is out of range")]
    OutOfRangeEntry { row: usize, col: usize, value: i64 },
    #[error("associativity fails for ({x}, {y}, {z}): (xy)z != x(yz)")]
    AssociativityViolation { x: usize, y: usize, z: usize },
}

/// A validated finite semigroup on `0..order`, row-major with `table[x][y] = x·y`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Semigroup {
    order: usize,
    cells: Vec<u8>,
}

impl Semigroup {
    /// Validates closure and associativity of a square table.
    ///
    /// The first violating triple in lexicographic `(x, y, z)` order is reported.
    pub fn new<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, TableError> {
        let n = rows.len();
        if n == 0 {
            return Err(TableError::Empty);
        }
        if n > MAX_ORDER {
            return Err(TableError::OrderTooLarge(n));
        }
        let mut cells = Vec::with_capacity(n * n);
        for (row, entries) in rows.iter().enumerate() {
            let entries = entries.as_ref();
            if entries.len() != n {
                return Err(TableError::NotSquare { row, len: entries.len(), expected: n });
            }
            for (col, &value) in entries.iter().enumerate() {
                if value < 0 || value >= n as i64 {
                    return Err(TableError::OutOfRangeEntry { row, col, value });
                }
                cells.push(value as u8);
            }
        }
        Self::from_cells(n, cells)
    }

    /// Validates a flat row-major table of length `order²`.
    pub fn from_cells(order: usize, cells: Vec<u8>) -> Result<Self, TableError> {
        if order == 0 {
            return Err(TableError::Empty);
        }
        if order > MAX_ORDER {
            return Err(TableError::OrderTooLarge(order));
        }
        if cells.len() != order * order {
            return Err(TableError::NotSquare {
                row: cells.len() / order,
                len: cells.len() % order,
                expected: order,
            });
        }
        if let Some(pos) = cells.iter().position(|&v| v as usize >= order) {
            return Err(TableError::OutOfRangeEntry {
                row: pos / order,
                col: pos % order,
                value: cells[pos] as i64,
            });
        }
        if let Some((x, y, z)) = first_associativity_violation(order, &cells) {
            return Err(TableError::AssociativityViolation { x, y, z });
        }
        Ok(Self { order, cells })
    }

    /// Wraps a table already known to be an associative, closed table.
    pub(crate) fn from_cells_unchecked(order: usize, cells: Vec<u8>) -> Self {
        debug_assert_eq!(cells.len(), order * order);
        debug_assert!(first_associativity_violation(order, &cells).is_none());
        Self { order, cells }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.cells[x * self.order + y] as usize
    }

    /// Flat row-major table.
    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.cells
            .chunks(self.order)
            .map(|row| row.iter().map(|&v| v as usize).collect())
            .collect()
    }

    /// The opposite semigroup, `x ∘ y = y·x`.
    pub fn transpose(&self) -> Self {
        let n = self.order;
        let mut cells = vec![0u8; n * n];
        for x in 0..n {
            for y in 0..n {
                cells[y * n + x] = self.cells[x * n + y];
            }
        }
        Self { order: n, cells }
    }

    /// `a^p` for `p ≥ 1`.
    pub fn power(&self, a: usize, p: usize) -> usize {
        assert!(p >= 1, "powers start at 1");
        let mut acc = a;
        for _ in 1..p {
            acc = self.mul(acc, a);
        }
        acc
    }

    pub fn commutes(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn is_idempotent_element(&self, a: usize) -> bool {
        self.mul(a, a) == a
    }

    /// Whether `elements` is closed under multiplication.
    pub fn is_closed_subset(&self, elements: &[usize]) -> bool {
        elements
            .iter()
            .all(|&x| elements.iter().all(|&y| elements.contains(&self.mul(x, y))))
    }

    pub fn element_profile(&self, a: usize) -> ElementProfile {
        assert!(a < self.order, "element {a} out of range");
        let mut seen: Vec<Option<usize>> = vec![None; self.order];
        let mut cycle_powers = Vec::new();
        let mut current = a;
        let mut exponent = 1;
        loop {
            if let Some(first) = seen[current] {
                return ElementProfile {
                    element: a,
                    monogenic: Monogenic { index: first, period: exponent - first },
                    cycle_powers,
                };
            }
            seen[current] = Some(exponent);
            cycle_powers.push(current);
            current = self.mul(current, a);
            exponent += 1;
        }
    }

    pub fn is_idempotent(&self) -> bool {
        (0..self.order).all(|a| self.is_idempotent_element(a))
    }

    /// Whether `x² = x³` holds identically.
    pub fn satisfies_x2_x3(&self) -> bool {
        (0..self.order).all(|a| {
            let sq = self.mul(a, a);
            sq == self.mul(sq, a)
        })
    }

    /// No two distinct elements commute.
    pub fn is_nowhere_commutative(&self) -> bool {
        (0..self.order).all(|a| ((a + 1)..self.order).all(|b| !self.commutes(a, b)))
    }

    /// A band satisfying `xyz = xz`.
    pub fn is_rectangular_band(&self) -> bool {
        let n = self.order;
        self.is_idempotent()
            && (0..n).all(|x| {
                (0..n).all(|y| {
                    let xy = self.mul(x, y);
                    (0..n).all(|z| self.mul(xy, z) == self.mul(x, z))
                })
            })
    }

    pub fn classify(&self) -> Classification {
        let n = self.order;
        if n == 1 {
            return Classification::Trivial;
        }
        if self.is_idempotent() {
            let pair = (0..n)
                .flat_map(|a| ((a + 1)..n).map(move |b| (a, b)))
                .find(|&(a, b)| self.commutes(a, b));
            return match pair {
                None => Classification::IdempotentNowhereCommutative,
                Some((a, b)) => Classification::IdempotentCommutingPair { a, b },
            };
        }
        if self.satisfies_x2_x3() {
            let a = (0..n)
                .find(|&a| !self.is_idempotent_element(a))
                .expect("a non-idempotent semigroup has a non-idempotent element");
            return Classification::BoundedNonIdempotent { a };
        }
        let a = (0..n)
            .find(|&a| {
                let sq = self.mul(a, a);
                sq != self.mul(sq, a)
            })
            .expect("x^2 = x^3 fails somewhere");
        Classification::Unbounded { a }
    }
}

impl fmt::Debug for Semigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Semigroup").field("order", &self.order).field("table", &self.rows()).finish()
    }
}

/// Renders the Cayley table text format: the order, then one row per line.
impl fmt::Display for Semigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.order)?;
        for row in self.cells.chunks(self.order) {
            let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

fn first_associativity_violation(n: usize, cells: &[u8]) -> Option<(usize, usize, usize)> {
    let at = |x: usize, y: usize| cells[x * n + y] as usize;
    for x in 0..n {
        for y in 0..n {
            let xy = at(x, y);
            for z in 0..n {
                if at(xy, z) != at(x, at(y, z)) {
                    return Some((x, y, z));
                }
            }
        }
    }
    None
}

/// Shape of a monogenic semigroup: `a^p = a^q` iff `p = q`, or both are at
/// least `index` and congruent modulo `period`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Monogenic {
    pub index: usize,
    pub period: usize,
}

impl Monogenic {
    pub fn new(index: usize, period: usize) -> Self {
        assert!(index >= 1 && period >= 1, "index and period are positive");
        Self { index, period }
    }

    /// Number of distinct powers.
    pub fn size(&self) -> usize {
        self.index + self.period - 1
    }

    pub fn powers_equal(&self, p: u64, q: u64) -> bool {
        monogenic_equal(self.index as u64, self.period as u64, p, q)
    }

    /// Reduces an exponent to the least equal one, in `1..=size()`.
    pub fn reduce(&self, p: u64) -> u64 {
        let (m, r) = (self.index as u64, self.period as u64);
        if p < m {
            p
        } else {
            m + (p - m) % r
        }
    }
}

/// Whether `a^p = a^q` in a monogenic semigroup of the given index and period.
pub fn monogenic_equal(index: u64, period: u64, p: u64, q: u64) -> bool {
    debug_assert!(index >= 1 && period >= 1 && p >= 1 && q >= 1);
    p == q || (p >= index && q >= index && p.abs_diff(q).is_multiple_of(period))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElementProfile {
    pub element: usize,
    pub monogenic: Monogenic,
    /// `a¹, a², …` up to (excluding) the first repeated power.
    pub cycle_powers: Vec<usize>,
}

impl ElementProfile {
    pub fn index(&self) -> usize {
        self.monogenic.index
    }

    pub fn period(&self) -> usize {
        self.monogenic.period
    }

    /// `a^p` looked up from the recorded powers.
    pub fn power(&self, p: u64) -> usize {
        assert!(p >= 1);
        self.cycle_powers[(self.monogenic.reduce(p) - 1) as usize]
    }
}

/// Which of the three proof branches applies, with the witnesses it needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Classification {
    Trivial,
    IdempotentNowhereCommutative,
    /// Least distinct commuting pair `a < b` of a band.
    IdempotentCommutingPair { a: usize, b: usize },
    /// `x² = x³` holds, and `a` is the least element with `a ≠ a²`.
    BoundedNonIdempotent { a: usize },
    /// `a` is the least element with `a² ≠ a³`.
    Unbounded { a: usize },
}

impl Classification {
    pub fn tag(&self) -> &'static str {
        match self {
            Classification::Trivial => "trivial",
            Classification::IdempotentNowhereCommutative => "idempotent_nowhere_commutative",
            Classification::IdempotentCommutingPair { .. } => "idempotent_commuting_pair",
            Classification::BoundedNonIdempotent { .. } => "bounded_non_idempotent",
            Classification::Unbounded { .. } => "unbounded",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}
