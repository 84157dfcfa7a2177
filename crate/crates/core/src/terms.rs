//! Terms of the constant-free semigroup language, their text syntax, and the
//! finite clone of term functions a semigroup realizes in `k` variables.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::algebra::Semigroup;
use crate::geometry::PointSpace;

/// Exponents above this are rejected by the parser.
pub const MAX_EXPONENT: u32 = 64;

/// Default cap on the number of distinct term functions in a closure.
pub const DEFAULT_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("variable {name} is out of range for arity {arity}")]
    VariableOutOfRange { name: String, arity: usize },
    #[error("exponent at byte {position} must be between 1 and {MAX_EXPONENT}")]
    InvalidExponent { position: usize },
    #[error("empty term")]
    EmptyTerm,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosureError {
    #[error("term-function closure exceeded the budget ({size} functions)")]
    BudgetExceeded { size: usize },
    #[error("point space {order}^{arity} is too large")]
    PointSpaceTooLarge { order: usize, arity: usize },
    #[error("arity must be at least 1")]
    ZeroArity,
}

/// A nonempty product of variables `x1..xk`, stored as 0-based indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    word: Vec<usize>,
    arity: usize,
}

impl Term {
    pub fn new(word: Vec<usize>, arity: usize) -> Result<Self, ParseError> {
        if word.is_empty() {
            return Err(ParseError::EmptyTerm);
        }
        if let Some(&v) = word.iter().find(|&&v| v >= arity) {
            return Err(ParseError::VariableOutOfRange { name: format!("x{}", v + 1), arity });
        }
        Ok(Self { word, arity })
    }

    pub fn variable(index: usize, arity: usize) -> Self {
        assert!(index < arity);
        Self { word: vec![index], arity }
    }

    pub fn parse(text: &str, arity: usize) -> Result<Self, ParseError> {
        parse_term_at(text, 0, arity)
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The term `self · other`.
    pub fn concat(&self, other: &Term) -> Term {
        assert_eq!(self.arity, other.arity);
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        Term { word, arity: self.arity }
    }

    /// Left-to-right product of the substituted letters.
    pub fn eval(&self, s: &Semigroup, point: &[usize]) -> usize {
        assert_eq!(point.len(), self.arity, "point arity mismatch");
        let mut letters = self.word.iter().map(|&v| point[v]);
        let first = letters.next().expect("terms are nonempty");
        letters.fold(first, |acc, x| s.mul(acc, x))
    }

    pub fn exponent_vector(&self) -> ExponentVector {
        let mut counts = vec![0u64; self.arity];
        for &v in &self.word {
            counts[v] += 1;
        }
        ExponentVector { counts }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut i = 0;
        while i < self.word.len() {
            let v = self.word[i];
            let mut run = 1;
            while i + run < self.word.len() && self.word[i + run] == v {
                run += 1;
            }
            i += run;
            while run > 0 {
                let chunk = run.min(MAX_EXPONENT as usize);
                run -= chunk;
                if !first {
                    f.write_str(" ")?;
                }
                first = false;
                if chunk == 1 {
                    write!(f, "x{}", v + 1)?;
                } else {
                    write!(f, "x{}^{}", v + 1, chunk)?;
                }
            }
        }
        Ok(())
    }
}

fn parse_term_at(text: &str, offset: usize, arity: usize) -> Result<Term, ParseError> {
    let bytes = text.as_bytes();
    let mut word = Vec::new();
    let mut i = 0;
    let read_number = |i: &mut usize| -> Option<u64> {
        let start = *i;
        while *i < bytes.len() && bytes[*i].is_ascii_digit() {
            *i += 1;
        }
        if start == *i {
            None
        } else {
            // Saturate absurdly long digit strings; they fail range checks anyway.
            Some(text[start..*i].parse::<u64>().unwrap_or(u64::MAX))
        }
    };
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c != b'x' {
            return Err(ParseError::Syntax {
                position: offset + i,
                message: format!("expected a variable, found {:?}", text[i..].chars().next().unwrap()),
            });
        }
        let name_start = i;
        i += 1;
        let index = read_number(&mut i).ok_or(ParseError::Syntax {
            position: offset + i,
            message: "expected a variable number after 'x'".into(),
        })?;
        let name = text[name_start..i].to_string();
        if index == 0 || index > arity as u64 {
            return Err(ParseError::VariableOutOfRange { name, arity });
        }
        let mut exponent = 1u64;
        if i < bytes.len() && bytes[i] == b'^' {
            i += 1;
            let exp_start = i;
            exponent = read_number(&mut i).ok_or(ParseError::Syntax {
                position: offset + i,
                message: "expected an exponent after '^'".into(),
            })?;
            if exponent == 0 || exponent > MAX_EXPONENT as u64 {
                return Err(ParseError::InvalidExponent { position: offset + exp_start });
            }
        }
        word.extend(std::iter::repeat_n(index as usize - 1, exponent as usize));
    }
    if word.is_empty() {
        return Err(ParseError::EmptyTerm);
    }
    Ok(Term { word, arity })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
}

impl Equation {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        assert_eq!(lhs.arity, rhs.arity, "equation sides must share an arity");
        Self { lhs, rhs }
    }

    pub fn parse(text: &str, arity: usize) -> Result<Self, ParseError> {
        let mut parts = text.match_indices('=');
        let (eq, _) = parts.next().ok_or(ParseError::Syntax {
            position: text.len(),
            message: "expected '='".into(),
        })?;
        if let Some((second, _)) = parts.next() {
            return Err(ParseError::Syntax { position: second, message: "more than one '='".into() });
        }
        let lhs = parse_term_at(&text[..eq], 0, arity)?;
        let rhs = parse_term_at(&text[eq + 1..], eq + 1, arity)?;
        Ok(Self { lhs, rhs })
    }

    pub fn arity(&self) -> usize {
        self.lhs.arity
    }

    pub fn holds_at(&self, s: &Semigroup, point: &[usize]) -> bool {
        self.lhs.eval(s, point) == self.rhs.eval(s, point)
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// A finite set of equations in a common arity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct System {
    arity: usize,
    equations: Vec<Equation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {source}")]
pub struct SystemParseError {
    pub line: usize,
    #[source]
    pub source: ParseError,
}

impl System {
    pub fn new(arity: usize, equations: Vec<Equation>) -> Self {
        assert!(equations.iter().all(|e| e.arity() == arity), "mixed arities in system");
        Self { arity, equations }
    }

    /// One equation per line; `#` starts a comment.
    pub fn parse(text: &str, arity: usize) -> Result<Self, SystemParseError> {
        let mut equations = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let body = line.split('#').next().unwrap_or("");
            if body.trim().is_empty() {
                continue;
            }
            let eq = Equation::parse(body, arity)
                .map_err(|source| SystemParseError { line: n + 1, source })?;
            equations.push(eq);
        }
        Ok(Self { arity, equations })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }
}

/// Occurrence counts of each variable in a term.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExponentVector {
    pub counts: Vec<u64>,
}

impl ExponentVector {
    pub fn new(counts: Vec<u64>) -> Self {
        Self { counts }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Exponent of `a` in `t(a^{e₁}, …, a^{e_k})`.
    pub fn power_eval(&self, powers: &[u64]) -> u64 {
        assert_eq!(powers.len(), self.counts.len());
        self.counts.iter().zip(powers).map(|(c, e)| c * e).sum()
    }
}

/// A map `S^k → S` realized by a term, tabulated over big-endian encoded points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermFunction {
    pub values: Vec<u8>,
    pub witness: Term,
}

impl TermFunction {
    pub fn value(&self, code: usize) -> usize {
        self.values[code] as usize
    }
}

/// The full set of term functions of a semigroup in a fixed arity.
#[derive(Debug, Clone)]
pub struct TermFunctions {
    space: PointSpace,
    functions: Vec<TermFunction>,
}

impl TermFunctions {
    /// Least set containing the projections and closed under pointwise
    /// product.
    ///
    /// Every word is a projection followed by right multiplications by
    /// projections, so a FIFO search that only appends single letters
    /// reaches every function and records a shortest witness for each.
    pub fn compute(s: &Semigroup, arity: usize, budget: usize) -> Result<Self, ClosureError> {
        let space = PointSpace::new(s.order(), arity)?;
        let projections: Vec<Vec<u8>> =
            (0..arity).map(|i| space.codes().map(|c| space.coordinate(c, i) as u8).collect()).collect();

        let mut clone = CloneBuilder { index: HashMap::new(), functions: Vec::new(), queue: VecDeque::new(), budget };
        for (i, p) in projections.iter().enumerate() {
            clone.admit(p.clone(), Term::variable(i, arity))?;
        }
        let cells = s.cells();
        let n = s.order();
        while let Some(f) = clone.queue.pop_front() {
            for (i, p) in projections.iter().enumerate() {
                let product: Vec<u8> = clone.functions[f]
                    .values
                    .iter()
                    .zip(p)
                    .map(|(&x, &y)| cells[x as usize * n + y as usize])
                    .collect();
                let mut word = clone.functions[f].witness.word.clone();
                word.push(i);
                clone.admit(product, Term { word, arity })?;
            }
        }
        let functions = clone.functions;
        Ok(Self { space, functions })
    }

    pub fn space(&self) -> PointSpace {
        self.space
    }

    pub fn arity(&self) -> usize {
        self.space.arity()
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn functions(&self) -> &[TermFunction] {
        &self.functions
    }

    pub fn iter(&self) -> std::slice::Iter<'_, TermFunction> {
        self.functions.iter()
    }

    pub fn contains_values(&self, values: &[u8]) -> bool {
        self.functions.iter().any(|f| f.values == values)
    }
}

struct CloneBuilder {
    index: HashMap<Vec<u8>, usize>,
    functions: Vec<TermFunction>,
    queue: VecDeque<usize>,
    budget: usize,
}

impl CloneBuilder {
    fn admit(&mut self, values: Vec<u8>, witness: Term) -> Result<(), ClosureError> {
        match self.index.entry(values) {
            Entry::Occupied(_) => Ok(()),
            Entry::Vacant(slot) => {
                if self.functions.len() >= self.budget {
                    return Err(ClosureError::BudgetExceeded { size: self.functions.len() + 1 });
                }
                let values = slot.key().clone();
                slot.insert(self.functions.len());
                self.queue.push_back(self.functions.len());
                self.functions.push(TermFunction { values, witness });
                Ok(())
            }
        }
    }
}

/// Tabulates a single term over all points.
pub fn tabulate(s: &Semigroup, term: &Term) -> Result<Vec<u8>, ClosureError> {
    let space = PointSpace::new(s.order(), term.arity())?;
    let mut point = vec![0; term.arity()];
    Ok(space
        .codes()
        .map(|c| {
            space.decode_into(c, &mut point);
            term.eval(s, &point) as u8
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sg(rows: &[&[i64]]) -> Semigroup {
        Semigroup::new(rows).unwrap()
    }

    #[test]
    fn parse_expands_exponents() {
        assert_eq!(Term::parse("x1 x2^2", 3).unwrap().word(), &[0, 1, 1]);
        assert_eq!(Term::parse("x1", 1).unwrap().word(), &[0]);
        assert_eq!(Term::parse("  x1x2^2x3 ", 3).unwrap().word(), &[0, 1, 1, 2]);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Term::parse("x1^0", 1), Err(ParseError::InvalidExponent { position: 3 })));
        assert!(matches!(Term::parse("x1^65", 1), Err(ParseError::InvalidExponent { .. })));
        assert!(matches!(Term::parse("x4", 3), Err(ParseError::VariableOutOfRange { .. })));
        assert!(matches!(Term::parse("x0", 3), Err(ParseError::VariableOutOfRange { .. })));
        assert_eq!(Term::parse("   ", 3), Err(ParseError::EmptyTerm));
        assert!(matches!(Term::parse("x1 y", 3), Err(ParseError::Syntax { position: 3, .. })));
        assert!(matches!(Term::parse("x^2", 3), Err(ParseError::Syntax { .. })));
        assert!(matches!(Term::new(vec![], 2), Err(ParseError::EmptyTerm)));
    }

    #[test]
    fn parse_equations() {
        let eq = Equation::parse("x1x2^2=x3x1", 3).unwrap();
        assert_eq!(eq.lhs.word(), &[0, 1, 1]);
        assert_eq!(eq.rhs.word(), &[2, 0]);
        assert_eq!(eq.to_string(), "x1 x2^2 = x3 x1");
        assert!(matches!(Equation::parse("x1 x2", 2), Err(ParseError::Syntax { .. })));
        assert!(matches!(Equation::parse("x1=x2=x1", 2), Err(ParseError::Syntax { position: 5, .. })));
        assert!(matches!(Equation::parse("x1 = x9", 2), Err(ParseError::VariableOutOfRange { .. })));
    }

    #[test]
    fn parse_system_with_comments() {
        let sys = System::parse("# diagonal\nx1 = x2\n\nx1^2 = x3 # tail\n", 3).unwrap();
        assert_eq!(sys.equations().len(), 2);
        let err = System::parse("x1 = x2\nx1 =\n", 2).unwrap_err();
        assert_eq!(err.line, 2);
    }

    #[test]
    fn display_splits_long_runs() {
        let t = Term::new(vec![0; 70], 1).unwrap();
        assert_eq!(t.to_string(), "x1^64 x1^6");
        assert_eq!(Term::parse(&t.to_string(), 1).unwrap(), t);
    }

    #[test]
    fn eval_examples() {
        let left_zero = sg(&[&[0, 0], &[1, 1]]);
        let t = Term::parse("x2 x1 x3", 3).unwrap();
        assert_eq!(t.eval(&left_zero, &[0, 1, 0]), 1);
        let z2 = sg(&[&[0, 1], &[1, 0]]);
        assert_eq!(Term::new(vec![0, 0], 1).unwrap().eval(&z2, &[1]), 0);
        assert_eq!(Term::variable(0, 2).eval(&z2, &[1, 0]), 1);
    }

    #[test]
    fn exponent_vectors() {
        let t = Term::new(vec![0, 1, 1, 0], 4).unwrap();
        let ev = t.exponent_vector();
        assert_eq!(ev.counts, vec![2, 2, 0, 0]);
        assert_eq!(ev.power_eval(&[2, 1, 1, 1]), 6);
        let ev = ExponentVector::new(vec![1, 2, 3, 4]);
        assert_eq!(ev.power_eval(&[3, 2, 3, 2]), 3 + 4 + 9 + 8);
    }

    #[test]
    fn clone_sizes() {
        let left_zero = sg(&[&[0, 0], &[1, 1]]);
        assert_eq!(TermFunctions::compute(&left_zero, 3, DEFAULT_BUDGET).unwrap().len(), 3);
        let semilattice = sg(&[&[0, 0], &[0, 1]]);
        let fs = TermFunctions::compute(&semilattice, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(fs.len(), 3);
        assert_eq!(fs.functions()[2].witness.word(), &[0, 1]);
        let idempotent = TermFunctions::compute(&semilattice, 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(idempotent.len(), 1);
    }

    #[test]
    fn trivial_semigroup_projections_collapse() {
        let t = sg(&[&[0]]);
        assert_eq!(TermFunctions::compute(&t, 3, DEFAULT_BUDGET).unwrap().len(), 1);
    }

    #[test]
    fn budget_is_enforced() {
        let z3 = sg(&[&[0, 1, 2], &[1, 2, 0], &[2, 0, 1]]);
        // Z3 in two variables realizes x1^i x2^j for all (i, j) ≠ (0, 0) mod 3: 9 functions.
        assert_eq!(TermFunctions::compute(&z3, 2, DEFAULT_BUDGET).unwrap().len(), 9);
        assert_eq!(
            TermFunctions::compute(&z3, 2, 5).unwrap_err(),
            ClosureError::BudgetExceeded { size: 6 }
        );
    }

    #[test]
    fn tabulate_matches_witnesses() {
        let z3 = sg(&[&[0, 1, 2], &[1, 2, 0], &[2, 0, 1]]);
        let fs = TermFunctions::compute(&z3, 2, DEFAULT_BUDGET).unwrap();
        for f in fs.iter() {
            assert_eq!(tabulate(&z3, &f.witness).unwrap(), f.values);
        }
    }
}
