//! Subsets of `S^k`, solution sets, and the algebraic closure operator.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::Semigroup;
use crate::terms::{ClosureError, Equation, System, Term, TermFunction, TermFunctions};

/// Upper bound on `order^arity`.
pub const MAX_POINTS: usize = 1 << 24;

/// Name of the point encoding written into serialized sets.
pub const ENCODING: &str = "big-endian";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PointSetError {
    #[error("point {0:?} has the wrong arity or an out-of-range coordinate")]
    BadPoint(Vec<usize>),
    #[error("bitmap header ({order}, {arity}) does not match the expected ({expected_order}, {expected_arity})")]
    ShapeMismatch { order: usize, arity: usize, expected_order: usize, expected_arity: usize },
    #[error("unsupported point encoding {0:?}")]
    Encoding(String),
    #[error("malformed hex bitmap")]
    BadHex,
    #[error(transparent)]
    Space(#[from] ClosureError),
}

/// `S^k` for `|S| = order`, with points encoded big-endian as
/// `Σ pᵢ·n^{k−1−i}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PointSpace {
    order: usize,
    arity: usize,
    size: usize,
}

impl PointSpace {
    pub fn new(order: usize, arity: usize) -> Result<Self, ClosureError> {
        if arity == 0 {
            return Err(ClosureError::ZeroArity);
        }
        let too_large = ClosureError::PointSpaceTooLarge { order, arity };
        let size = u32::try_from(arity)
            .ok()
            .and_then(|k| order.checked_pow(k))
            .filter(|&s| s <= MAX_POINTS)
            .ok_or(too_large)?;
        Ok(Self { order, arity, size })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn codes(&self) -> std::ops::Range<usize> {
        0..self.size
    }

    pub fn encode(&self, point: &[usize]) -> Option<usize> {
        if point.len() != self.arity || point.iter().any(|&p| p >= self.order) {
            return None;
        }
        Some(point.iter().fold(0, |acc, &p| acc * self.order + p))
    }

    pub fn decode(&self, code: usize) -> Vec<usize> {
        let mut point = vec![0; self.arity];
        self.decode_into(code, &mut point);
        point
    }

    pub fn decode_into(&self, mut code: usize, point: &mut [usize]) {
        for slot in point.iter_mut().rev() {
            *slot = code % self.order;
            code /= self.order;
        }
    }

    /// The `i`-th coordinate of an encoded point.
    pub fn coordinate(&self, code: usize, i: usize) -> usize {
        let shift = self.order.pow((self.arity - 1 - i) as u32);
        (code / shift) % self.order
    }
}

/// A subset of a [`PointSpace`], one bit per encoded point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointSet {
    space: PointSpace,
    words: Vec<u64>,
}

impl PointSet {
    pub fn empty(space: PointSpace) -> Self {
        Self { space, words: vec![0; space.size.div_ceil(64)] }
    }

    pub fn full(space: PointSpace) -> Self {
        let mut set = Self { space, words: vec![u64::MAX; space.size.div_ceil(64)] };
        set.clear_tail();
        set
    }

    pub fn from_predicate(space: PointSpace, mut pred: impl FnMut(&[usize]) -> bool) -> Self {
        let mut set = Self::empty(space);
        let mut point = vec![0; space.arity];
        for code in space.codes() {
            space.decode_into(code, &mut point);
            if pred(&point) {
                set.insert_code(code);
            }
        }
        set
    }

    pub fn from_codes(space: PointSpace, codes: impl IntoIterator<Item = usize>) -> Self {
        let mut set = Self::empty(space);
        for c in codes {
            set.insert_code(c);
        }
        set
    }

    pub fn from_points<P: AsRef<[usize]>>(
        space: PointSpace,
        points: impl IntoIterator<Item = P>,
    ) -> Result<Self, PointSetError> {
        let mut set = Self::empty(space);
        for p in points {
            let p = p.as_ref();
            let code = space.encode(p).ok_or_else(|| PointSetError::BadPoint(p.to_vec()))?;
            set.insert_code(code);
        }
        Ok(set)
    }

    fn clear_tail(&mut self) {
        let rem = self.space.size % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn space(&self) -> PointSpace {
        self.space
    }

    pub fn contains_code(&self, code: usize) -> bool {
        code < self.space.size && self.words[code / 64] >> (code % 64) & 1 == 1
    }

    pub fn contains(&self, point: &[usize]) -> bool {
        self.space.encode(point).is_some_and(|c| self.contains_code(c))
    }

    pub fn insert_code(&mut self, code: usize) {
        assert!(code < self.space.size, "code {code} outside the point space");
        self.words[code / 64] |= 1 << (code % 64);
    }

    pub fn remove_code(&mut self, code: usize) {
        assert!(code < self.space.size, "code {code} outside the point space");
        self.words[code / 64] &= !(1 << (code % 64));
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Encoded members in increasing order.
    pub fn codes(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + bit)
            })
        })
    }

    pub fn first_code(&self) -> Option<usize> {
        self.codes().next()
    }

    pub fn points(&self) -> Vec<Vec<usize>> {
        self.codes().map(|c| self.space.decode(c)).collect()
    }

    fn check_shape(&self, other: &PointSet) {
        assert_eq!(self.space, other.space, "point sets over different spaces");
    }

    fn zip_with(&self, other: &PointSet, op: impl Fn(u64, u64) -> u64) -> PointSet {
        self.check_shape(other);
        let words = self.words.iter().zip(&other.words).map(|(&a, &b)| op(a, b)).collect();
        PointSet { space: self.space, words }
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &PointSet) -> PointSet {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> PointSet {
        let mut set =
            PointSet { space: self.space, words: self.words.iter().map(|w| !w).collect() };
        set.clear_tail();
        set
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.check_shape(other);
        self.words.iter().zip(&other.words).all(|(&a, &b)| a & !b == 0)
    }

    /// Bitmap as lowercase hex, one byte per 8 points, least significant
    /// bit first within each byte.
    pub fn to_hex(&self) -> String {
        let bytes = self.space.size.div_ceil(8);
        let mut out = String::with_capacity(bytes * 2);
        for i in 0..bytes {
            let byte = (self.words[i / 8] >> ((i % 8) * 8)) as u8;
            write!(out, "{byte:02x}").unwrap();
        }
        out
    }

    pub fn from_hex(space: PointSpace, hex: &str) -> Result<Self, PointSetError> {
        let hex = hex.trim();
        if hex.len() != space.size.div_ceil(8) * 2 || !hex.is_ascii() {
            return Err(PointSetError::BadHex);
        }
        let mut set = Self::empty(space);
        for i in 0..hex.len() / 2 {
            let byte = u8::from_str_radix(&hex[2 * i..2 * i + 2], 16).map_err(|_| PointSetError::BadHex)?;
            set.words[i / 8] |= (byte as u64) << ((i % 8) * 8);
        }
        let before = set.clone();
        set.clear_tail();
        if set != before {
            return Err(PointSetError::BadHex);
        }
        Ok(set)
    }

    pub fn to_bitmap(&self) -> Bitmap {
        Bitmap {
            order: self.space.order,
            arity: self.space.arity,
            encoding: ENCODING.to_string(),
            bitmap: self.to_hex(),
        }
    }

    pub fn from_bitmap(bitmap: &Bitmap) -> Result<Self, PointSetError> {
        if bitmap.encoding != ENCODING {
            return Err(PointSetError::Encoding(bitmap.encoding.clone()));
        }
        let space = PointSpace::new(bitmap.order, bitmap.arity)?;
        Self::from_hex(space, &bitmap.bitmap)
    }
}

/// Compact serialized form of a [`PointSet`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bitmap {
    pub order: usize,
    pub arity: usize,
    pub encoding: String,
    pub bitmap: String,
}

/// Points where two tabulated functions agree.
pub fn equality_set(space: PointSpace, lhs: &[u8], rhs: &[u8]) -> PointSet {
    PointSet::from_codes(space, space.codes().filter(|&c| lhs[c] == rhs[c]))
}

pub fn solution_set(s: &Semigroup, equation: &Equation) -> Result<PointSet, ClosureError> {
    let space = PointSpace::new(s.order(), equation.arity())?;
    Ok(PointSet::from_predicate(space, |p| equation.holds_at(s, p)))
}

pub fn system_solution_set(s: &Semigroup, system: &System) -> Result<PointSet, ClosureError> {
    let space = PointSpace::new(s.order(), system.arity())?;
    Ok(PointSet::from_predicate(space, |p| system.equations().iter().all(|e| e.holds_at(s, p))))
}

pub fn in_m3(p: &[usize]) -> bool {
    p.len() == 3 && (p[0] == p[1] || p[0] == p[2])
}

pub fn in_m4(p: &[usize]) -> bool {
    p.len() == 4 && (p[0] == p[1] || p[2] == p[3])
}

/// `V(x₁ = x₂) ∪ V(x₁ = x₃)` in `S³`.
pub fn union_target_m3(s: &Semigroup) -> Result<PointSet, ClosureError> {
    Ok(PointSet::from_predicate(PointSpace::new(s.order(), 3)?, in_m3))
}

/// `V(x₁ = x₂) ∪ V(x₃ = x₄)` in `S⁴`.
pub fn union_target_m4(s: &Semigroup) -> Result<PointSet, ClosureError> {
    Ok(PointSet::from_predicate(PointSpace::new(s.order(), 4)?, in_m4))
}

/// The closure of a set together with the equations that cut it out.
#[derive(Debug, Clone)]
pub struct ClosureCertificate {
    pub functions: TermFunctions,
    /// Indices into `functions`; each pair agrees on the input set.
    pub agreeing_pairs: Vec<(usize, usize)>,
    pub closure: PointSet,
}

impl ClosureCertificate {
    pub fn pair(&self, i: usize) -> (&TermFunction, &TermFunction) {
        let (a, b) = self.agreeing_pairs[i];
        (&self.functions.functions()[a], &self.functions.functions()[b])
    }

    /// The certifying system, as equations between witness terms.
    pub fn equations(&self) -> impl Iterator<Item = Equation> + '_ {
        (0..self.agreeing_pairs.len()).map(|i| {
            let (a, b) = self.pair(i);
            Equation::new(a.witness.clone(), b.witness.clone())
        })
    }
}

/// Intersection of the solution sets of every equation that holds on `set`.
///
/// Functions are grouped by their restriction to `set`; each group member is
/// paired with the group's first member, which by transitivity spans all
/// agreements within the group.
pub fn algebraic_closure(
    s: &Semigroup,
    set: &PointSet,
    budget: usize,
) -> Result<ClosureCertificate, ClosureError> {
    let space = set.space();
    assert_eq!(space.order(), s.order(), "point set over a different semigroup");
    let functions = TermFunctions::compute(s, space.arity(), budget)?;
    let members: Vec<usize> = set.codes().collect();
    let mut representatives: HashMap<Vec<u8>, usize> = HashMap::new();
    let mut agreeing_pairs = Vec::new();
    let mut agree = vec![true; space.size()];
    for (i, f) in functions.iter().enumerate() {
        let key: Vec<u8> = members.iter().map(|&c| f.values[c]).collect();
        match representatives.get(&key) {
            None => {
                representatives.insert(key, i);
            }
            Some(&r) => {
                agreeing_pairs.push((r, i));
                let rep = &functions.functions()[r].values;
                for (slot, (x, y)) in agree.iter_mut().zip(rep.iter().zip(&f.values)) {
                    *slot &= x == y;
                }
            }
        }
    }
    let closure = PointSet::from_codes(space, space.codes().filter(|&c| agree[c]));
    debug_assert!(set.is_subset(&closure));
    Ok(ClosureCertificate { functions, agreeing_pairs, closure })
}

#[derive(Debug, Clone)]
pub struct AlgebraicVerdict {
    pub algebraic: bool,
    /// Least encoded point of `closure \ set`, when the set is not algebraic.
    pub separating_point: Option<Vec<usize>>,
    pub certificate: ClosureCertificate,
}

pub fn is_algebraic(s: &Semigroup, set: &PointSet, budget: usize) -> Result<AlgebraicVerdict, ClosureError> {
    let certificate = algebraic_closure(s, set, budget)?;
    let extra = certificate.closure.difference(set);
    let separating_point = extra.first_code().map(|c| set.space().decode(c));
    Ok(AlgebraicVerdict { algebraic: separating_point.is_none(), separating_point, certificate })
}

/// An equation that holds on the closed set but fails at `point_code`.
/// `None` exactly when the point lies in the closure.
pub fn violated_equation(certificate: &ClosureCertificate, point_code: usize) -> Option<(Term, Term)> {
    certificate.agreeing_pairs.iter().find_map(|&(a, b)| {
        let fs = certificate.functions.functions();
        (fs[a].values[point_code] != fs[b].values[point_code])
            .then(|| (fs[a].witness.clone(), fs[b].witness.clone()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::DEFAULT_BUDGET;

    fn sg(rows: &[&[i64]]) -> Semigroup {
        Semigroup::new(rows).unwrap()
    }

    #[test]
    fn encoding_is_big_endian() {
        let space = PointSpace::new(3, 3).unwrap();
        assert_eq!(space.encode(&[1, 0, 2]), Some(11));
        assert_eq!(space.decode(11), vec![1, 0, 2]);
        assert_eq!(space.coordinate(11, 0), 1);
        assert_eq!(space.coordinate(11, 2), 2);
        assert_eq!(space.encode(&[3, 0, 0]), None);
        assert!(PointSpace::new(2, 0).is_err());
        assert!(PointSpace::new(255, 8).is_err());
    }

    #[test]
    fn set_algebra() {
        let space = PointSpace::new(2, 7).unwrap(); // 128 points, two words
        let a = PointSet::from_codes(space, [0, 5, 64, 127]);
        let b = PointSet::from_codes(space, [5, 100]);
        assert_eq!(a.union(&b).len(), 5);
        assert_eq!(a.intersection(&b).codes().collect::<Vec<_>>(), vec![5]);
        assert_eq!(a.difference(&b).len(), 3);
        assert_eq!(a.complement().len(), 124);
        assert_eq!(PointSet::full(PointSpace::new(3, 2).unwrap()).len(), 9);
        assert!(a.intersection(&b).is_subset(&a));
    }

    #[test]
    fn hex_round_trip() {
        let space = PointSpace::new(2, 3).unwrap();
        let set = PointSet::from_codes(space, [0, 3, 7]);
        assert_eq!(set.to_hex(), "89");
        assert_eq!(PointSet::from_hex(space, "89").unwrap(), set);
        assert_eq!(PointSet::from_bitmap(&set.to_bitmap()).unwrap(), set);
        let odd = PointSpace::new(3, 2).unwrap();
        assert_eq!(PointSet::from_hex(odd, "ff03"), Err(PointSetError::BadHex));
        assert_eq!(PointSet::from_hex(odd, "ff01").unwrap().len(), 9);
    }

    #[test]
    fn solution_set_examples() {
        let left_zero = sg(&[&[0, 0], &[1, 1]]);
        let diag = solution_set(&left_zero, &Equation::parse("x1 = x2", 2).unwrap()).unwrap();
        assert_eq!(diag.points(), vec![vec![0, 0], vec![1, 1]]);
        let taut = solution_set(&left_zero, &Equation::parse("x1 = x1", 2).unwrap()).unwrap();
        assert_eq!(taut.len(), 4);
        let comm = solution_set(&left_zero, &Equation::parse("x1x2 = x2x1", 2).unwrap()).unwrap();
        assert_eq!(comm, diag);
    }

    #[test]
    fn union_targets() {
        let s2 = sg(&[&[0, 0], &[1, 1]]);
        assert_eq!(union_target_m3(&s2).unwrap().len(), 6);
        assert_eq!(union_target_m4(&s2).unwrap().len(), 12);
        let t = sg(&[&[0]]);
        assert_eq!(union_target_m3(&t).unwrap().len(), 1);
        assert_eq!(union_target_m3(&t).unwrap(), PointSet::full(union_target_m3(&t).unwrap().space()));
    }

    #[test]
    fn closure_examples() {
        let left_zero = sg(&[&[0, 0], &[1, 1]]);
        let m3 = union_target_m3(&left_zero).unwrap();
        let verdict = is_algebraic(&left_zero, &m3, DEFAULT_BUDGET).unwrap();
        assert_eq!(verdict.certificate.closure.len(), 8);
        assert!(!verdict.algebraic);
        assert_eq!(verdict.separating_point, Some(vec![0, 1, 1]));

        let diag = solution_set(&left_zero, &Equation::parse("x1 = x2", 2).unwrap()).unwrap();
        let verdict = is_algebraic(&left_zero, &diag, DEFAULT_BUDGET).unwrap();
        assert!(verdict.algebraic);
        assert_eq!(verdict.certificate.closure, diag);

        let full = PointSet::full(diag.space());
        assert_eq!(algebraic_closure(&left_zero, &full, DEFAULT_BUDGET).unwrap().closure, full);
    }

    #[test]
    fn z2_m4_closure_contains_q() {
        let z2 = sg(&[&[0, 1], &[1, 0]]);
        let m4 = union_target_m4(&z2).unwrap();
        let verdict = is_algebraic(&z2, &m4, DEFAULT_BUDGET).unwrap();
        assert!(!verdict.algebraic);
        assert!(verdict.certificate.closure.contains(&[1, 0, 1, 0]));
        assert!(!m4.contains(&[1, 0, 1, 0]));
    }

    #[test]
    fn empty_set_closure_is_where_all_functions_agree() {
        let semilattice = sg(&[&[0, 0], &[0, 1]]);
        let space = PointSpace::new(2, 2).unwrap();
        let cl = algebraic_closure(&semilattice, &PointSet::empty(space), DEFAULT_BUDGET).unwrap();
        // x1, x2 and min(x1, x2) agree exactly on the diagonal.
        assert_eq!(cl.closure.points(), vec![vec![0, 0], vec![1, 1]]);
    }

    #[test]
    fn certificate_equations_hold_on_the_set() {
        let semilattice = sg(&[&[0, 0], &[0, 1]]);
        let m3 = union_target_m3(&semilattice).unwrap();
        let cert = algebraic_closure(&semilattice, &m3, DEFAULT_BUDGET).unwrap();
        for eq in cert.equations() {
            for p in m3.points() {
                assert!(eq.holds_at(&semilattice, &p), "{eq} fails at {p:?}");
            }
        }
    }
}
