//! Witness constructions showing that a nontrivial finite semigroup is not an
//! equational domain, and the report that certifies each one.
//!
//! Every nontrivial semigroup falls in one of three classes: bands (split by
//! whether two distinct elements commute), semigroups satisfying `x² = x³`
//! that are not bands, and semigroups with some `a² ≠ a³`. The first two use
//! the union `M₃ = V(x₁=x₂) ∪ V(x₁=x₃)`, the last `M₄ = V(x₁=x₂) ∪ V(x₃=x₄)`.
//! In each case a point outside the union is exhibited and shown to lie in
//! the algebraic closure of the union.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::algebra::{Classification, Monogenic, Semigroup};
use crate::geometry::{algebraic_closure, in_m3, in_m4, union_target_m3, union_target_m4, PointSet};
use crate::terms::{ClosureError, ExponentVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofError {
    #[error(transparent)]
    Closure(#[from] ClosureError),
    /// The construction found nothing where one must exist; always a bug.
    #[error("no witness found for lemma {lemma}: {reason}")]
    WitnessNotFound { lemma: Lemma, reason: String },
    #[error("lemma {lemma} does not apply to a semigroup classified as {found}")]
    WrongCase { lemma: Lemma, found: Classification },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Lemma {
    /// Bands in which no two distinct elements commute.
    BandNowhereCommutative,
    /// Bands with a distinct commuting pair.
    BandCommutingPair,
    /// `x² = x³` holds but some `a ≠ a²`.
    Bounded,
    /// Some `a² ≠ a³`.
    Unbounded,
}

impl Lemma {
    pub const ALL: [Lemma; 4] =
        [Lemma::BandNowhereCommutative, Lemma::BandCommutingPair, Lemma::Bounded, Lemma::Unbounded];

    pub fn label(&self) -> &'static str {
        match self {
            Lemma::BandNowhereCommutative => "1.1",
            Lemma::BandCommutingPair => "1.2",
            Lemma::Bounded => "2",
            Lemma::Unbounded => "3",
        }
    }

    pub fn target(&self) -> Target {
        match self {
            Lemma::Unbounded => Target::M4,
            _ => Target::M3,
        }
    }
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl Serialize for Lemma {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    M3,
    M4,
}

impl Target {
    pub fn name(&self) -> &'static str {
        match self {
            Target::M3 => "m3",
            Target::M4 => "m4",
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Target::M3 => 3,
            Target::M4 => 4,
        }
    }

    pub fn contains(&self, point: &[usize]) -> bool {
        match self {
            Target::M3 => in_m3(point),
            Target::M4 => in_m4(point),
        }
    }

    pub fn point_set(&self, s: &Semigroup) -> Result<PointSet, ClosureError> {
        match self {
            Target::M3 => union_target_m3(s),
            Target::M4 => union_target_m4(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifiedIdentity {
    pub name: String,
    pub holds: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ProbePoints {
    pub inside: Vec<Vec<usize>>,
    pub outside: Vec<Vec<usize>>,
}

/// The lemma-specific part of a report, before any closure is computed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaWitness {
    pub lemma: Lemma,
    pub elements: BTreeMap<String, usize>,
    /// The two-element subsemigroup, or the powers of `a`, that every probe
    /// point lives in.
    pub subsemigroup: Vec<usize>,
    pub verified_identities: Vec<VerifiedIdentity>,
    pub probe_points: ProbePoints,
}

impl LemmaWitness {
    fn new(lemma: Lemma) -> Self {
        Self {
            lemma,
            elements: BTreeMap::new(),
            subsemigroup: Vec::new(),
            verified_identities: Vec::new(),
            probe_points: ProbePoints::default(),
        }
    }

    fn element(&mut self, name: &str, value: usize) {
        self.elements.insert(name.to_string(), value);
    }

    fn identity(&mut self, name: impl Into<String>, holds: bool) {
        self.verified_identities.push(VerifiedIdentity { name: name.into(), holds });
    }

    /// Records the probe points and the identities stating their membership.
    fn probes(&mut self, inside: Vec<(&str, Vec<usize>)>, outside: (&str, Vec<usize>)) {
        let target = self.lemma.target();
        for (name, p) in inside {
            let holds = target.contains(&p);
            self.identity(format!("{name} in {}", target.name()), holds);
            self.probe_points.inside.push(p);
        }
        let (name, p) = outside;
        let holds = !target.contains(&p);
        self.identity(format!("{name} not in {}", target.name()), holds);
        self.probe_points.outside.push(p);
    }

    pub fn all_hold(&self) -> bool {
        self.verified_identities.iter().all(|i| i.holds)
    }
}

fn wrong_case(lemma: Lemma, s: &Semigroup) -> ProofError {
    ProofError::WrongCase { lemma, found: s.classify() }
}

/// Nowhere-commutative bands (rectangular bands).
///
/// Takes the lexicographically least pair with `c = ab ≠ a`, so that `{a, c}`
/// is a right-zero subsemigroup (`ac = c`, `ca = a`). If no such pair exists
/// the band is left-zero; then `a = 0`, `c = ba = 1` spans a left-zero
/// subsemigroup (`ac = a`, `ca = c`) and the mirrored argument (terms are
/// determined by their first letter instead of their last) applies.
pub fn witness_lemma1_case1(s: &Semigroup) -> Result<LemmaWitness, ProofError> {
    let lemma = Lemma::BandNowhereCommutative;
    if s.classify() != Classification::IdempotentNowhereCommutative {
        return Err(wrong_case(lemma, s));
    }
    let n = s.order();
    let mut w = LemmaWitness::new(lemma);
    let right_zero = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .find(|&(a, b)| a != b && s.mul(a, b) != a);
    let (a, b, c) = match right_zero {
        Some((a, b)) => {
            let c = s.mul(a, b);
            w.identity("ac = c", s.mul(a, c) == c);
            w.identity("ca = a", s.mul(c, a) == a);
            (a, b, c)
        }
        None => {
            let (a, b) = (0, 1);
            let c = s.mul(b, a);
            if c == a {
                return Err(ProofError::WitnessNotFound {
                    lemma,
                    reason: "band is neither left-zero nor has ab != a".into(),
                });
            }
            w.identity("ac = a", s.mul(a, c) == a);
            w.identity("ca = c", s.mul(c, a) == c);
            (a, b, c)
        }
    };
    w.element("a", a);
    w.element("b", b);
    w.element("c", c);
    w.subsemigroup = vec![a, c];
    w.identity("xx = x", s.is_idempotent());
    w.identity("xyz = xz", s.is_rectangular_band());
    w.identity("a != c", a != c);
    w.identity("{a, c} is a subsemigroup", s.is_closed_subset(&[a, c]));
    w.probes(vec![("(a, a, c)", vec![a, a, c]), ("(a, c, a)", vec![a, c, a])], ("(a, c, c)", vec![a, c, c]));
    Ok(w)
}

/// Bands with a commuting pair, using the least such pair.
pub fn witness_lemma1_case2(s: &Semigroup) -> Result<LemmaWitness, ProofError> {
    match s.classify() {
        Classification::IdempotentCommutingPair { a, b } => witness_lemma1_case2_from_pair(s, a, b),
        _ => Err(wrong_case(Lemma::BandCommutingPair, s)),
    }
}

/// With `c = ab = ba`, picks `d ∈ {a, b}` different from `c` (preferring `a`);
/// `{d, c}` is then a subsemigroup with `dc = cd = c`.
pub fn witness_lemma1_case2_from_pair(s: &Semigroup, a: usize, b: usize) -> Result<LemmaWitness, ProofError> {
    let lemma = Lemma::BandCommutingPair;
    let c = s.mul(a, b);
    let d = [a, b].into_iter().find(|&d| d != c).ok_or_else(|| ProofError::WitnessNotFound {
        lemma,
        reason: format!("ab = a = b for the pair ({a}, {b})"),
    })?;
    let mut w = LemmaWitness::new(lemma);
    w.element("a", a);
    w.element("b", b);
    w.element("c", c);
    w.element("d", d);
    w.subsemigroup = vec![d, c];
    w.identity("xx = x", s.is_idempotent());
    w.identity("a != b", a != b);
    w.identity("ab = ba", s.commutes(a, b));
    w.identity("dc = c", s.mul(d, c) == c);
    w.identity("cd = c", s.mul(c, d) == c);
    w.identity("d != c", d != c);
    w.identity("{d, c} is a subsemigroup", s.is_closed_subset(&[d, c]));
    w.probes(vec![("(d, d, c)", vec![d, d, c]), ("(d, c, d)", vec![d, c, d])], ("(d, c, c)", vec![d, c, c]));
    Ok(w)
}

/// `x² = x³` holds and `a ≠ a²`; the probes live in `{a, a²}`.
pub fn witness_lemma2(s: &Semigroup) -> Result<LemmaWitness, ProofError> {
    let lemma = Lemma::Bounded;
    let a = match s.classify() {
        Classification::BoundedNonIdempotent { a } => a,
        _ => return Err(wrong_case(lemma, s)),
    };
    let a2 = s.mul(a, a);
    let a3 = s.mul(a2, a);
    let mut w = LemmaWitness::new(lemma);
    w.element("a", a);
    w.element("a^2", a2);
    w.subsemigroup = vec![a, a2];
    w.identity("x^2 = x^3", s.satisfies_x2_x3());
    w.identity("a != a^2", a != a2);
    w.identity("a^2 = a^3", a2 == a3);
    w.identity("{a, a^2} is a subsemigroup", s.is_closed_subset(&[a, a2]));
    w.probes(
        vec![("(a, a, a^2)", vec![a, a, a2]), ("(a, a^2, a)", vec![a, a2, a])],
        ("(a, a^2, a^2)", vec![a, a2, a2]),
    );
    Ok(w)
}

/// Some `a² ≠ a³`; the probes `P₁ = (a², a, a, a)`, `P₂ = (a, a, a², a)` lie in
/// `M₄` while `Q = (a³, a², a³, a²)` does not.
pub fn witness_lemma3(s: &Semigroup) -> Result<LemmaWitness, ProofError> {
    let lemma = Lemma::Unbounded;
    let a = match s.classify() {
        Classification::Unbounded { a } => a,
        _ => return Err(wrong_case(lemma, s)),
    };
    let profile = s.element_profile(a);
    let (a1, a2, a3) = (profile.power(1), profile.power(2), profile.power(3));
    let mut w = LemmaWitness::new(lemma);
    w.element("a", a1);
    w.element("a^2", a2);
    w.element("a^3", a3);
    w.subsemigroup = profile.cycle_powers.clone();
    w.identity("a^2 != a^3", a2 != a3);
    w.identity("a != a^2", a1 != a2);
    w.probes(
        vec![("P1 = (a^2, a, a, a)", vec![a2, a1, a1, a1]), ("P2 = (a, a, a^2, a)", vec![a1, a1, a2, a1])],
        ("Q = (a^3, a^2, a^3, a^2)", vec![a3, a2, a3, a2]),
    );
    Ok(w)
}

pub const P1_POWERS: [u64; 4] = [2, 1, 1, 1];
pub const P2_POWERS: [u64; 4] = [1, 1, 2, 1];
pub const Q_POWERS: [u64; 4] = [3, 2, 3, 2];

/// The exponent argument behind the unbounded case: if an equation with the
/// given occurrence counts holds at `P₁` and `P₂` inside `⟨a⟩`, it holds at
/// `Q`, whose exponents are the sums of theirs.
pub fn verify_eq1_argument(shape: Monogenic, lhs: &ExponentVector, rhs: &ExponentVector) -> bool {
    assert_eq!(lhs.counts.len(), 4);
    assert_eq!(rhs.counts.len(), 4);
    if lhs.total() == 0 || rhs.total() == 0 {
        return true;
    }
    let holds = |powers: &[u64; 4]| shape.powers_equal(lhs.power_eval(powers), rhs.power_eval(powers));
    !(holds(&P1_POWERS) && holds(&P2_POWERS)) || holds(&Q_POWERS)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    pub classification: &'static str,
    pub lemma: Option<Lemma>,
    pub elements: BTreeMap<String, usize>,
    pub target: Option<Target>,
    pub verified_identities: Vec<VerifiedIdentity>,
    pub probe_points: ProbePoints,
    pub separating_point: Option<Vec<usize>>,
    pub is_equational_domain: bool,
}

impl WitnessReport {
    /// Every identity holds and, for nontrivial semigroups, a separating point
    /// was found.
    pub fn is_consistent(&self) -> bool {
        self.verified_identities.iter().all(|i| i.holds)
            && (self.is_equational_domain || self.separating_point.is_some())
            && self.is_equational_domain == (self.order == 1)
    }

    pub fn failed_identities(&self) -> impl Iterator<Item = &VerifiedIdentity> {
        self.verified_identities.iter().filter(|i| !i.holds)
    }
}

pub fn lemma_witness(s: &Semigroup) -> Result<Option<LemmaWitness>, ProofError> {
    Ok(Some(match s.classify() {
        Classification::Trivial => return Ok(None),
        Classification::IdempotentNowhereCommutative => witness_lemma1_case1(s)?,
        Classification::IdempotentCommutingPair { .. } => witness_lemma1_case2(s)?,
        Classification::BoundedNonIdempotent { .. } => witness_lemma2(s)?,
        Classification::Unbounded { .. } => witness_lemma3(s)?,
    }))
}

/// Classifies, builds the matching witness, and confirms through the closure
/// operator that the target union is not algebraic.
///
/// The separating point is the outside probe point when it lies in the
/// closure, else the least encoded point of `closure \ target`. A report with
/// a failing identity or no separating point is returned as is; callers
/// check [`WitnessReport::is_consistent`].
pub fn check_semigroup(s: &Semigroup, budget: usize) -> Result<WitnessReport, ProofError> {
    let classification = s.classify();
    let mut report = WitnessReport {
        order: s.order(),
        table: s.rows(),
        classification: classification.tag(),
        lemma: None,
        elements: BTreeMap::new(),
        target: None,
        verified_identities: Vec::new(),
        probe_points: ProbePoints::default(),
        separating_point: None,
        is_equational_domain: true,
    };
    let Some(mut witness) = lemma_witness(s)? else {
        return Ok(report);
    };
    let target = witness.lemma.target();
    let target_set = target.point_set(s)?;
    let closure = algebraic_closure(s, &target_set, budget)?.closure;
    let outside = witness.probe_points.outside[0].clone();
    let probe_in_closure = closure.contains(&outside);
    witness.identity(format!("outside probe in closure({})", target.name()), probe_in_closure);
    let separating = if probe_in_closure {
        Some(outside)
    } else {
        closure.difference(&target_set).first_code().map(|c| closure.space().decode(c))
    };
    if let Some(p) = &separating {
        witness.identity("separating point in closure", closure.contains(p));
        witness.identity(format!("separating point not in {}", target.name()), !target_set.contains(p));
        let in_sub = p.iter().all(|x| witness.subsemigroup.contains(x));
        witness.identity("separating point inside the witness subsemigroup", in_sub);
    }
    let LemmaWitness { lemma, elements, verified_identities, probe_points, .. } = witness;
    report.lemma = Some(lemma);
    report.elements = elements;
    report.target = Some(target);
    report.verified_identities = verified_identities;
    report.probe_points = probe_points;
    report.separating_point = separating;
    report.is_equational_domain = false;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::DEFAULT_BUDGET;

    fn sg(rows: &[&[i64]]) -> Semigroup {
        Semigroup::new(rows).unwrap()
    }

    fn rows(n: usize, f: impl Fn(usize, usize) -> usize) -> Semigroup {
        let rows: Vec<Vec<i64>> = (0..n).map(|x| (0..n).map(|y| f(x, y) as i64).collect()).collect();
        Semigroup::new(&rows).unwrap()
    }

    #[test]
    fn nowhere_commutative_left_zero_uses_mirrored_pair() {
        let left_zero = sg(&[&[0, 0], &[1, 1]]);
        let w = witness_lemma1_case1(&left_zero).unwrap();
        assert_eq!((w.elements["a"], w.elements["c"]), (0, 1));
        assert!(w.all_hold(), "{:?}", w.verified_identities);
        assert!(w.verified_identities.iter().any(|i| i.name == "ac = a"));
        assert_eq!(w.probe_points.outside, vec![vec![0, 1, 1]]);
    }

    #[test]
    fn nowhere_commutative_right_zero() {
        let right_zero = sg(&[&[0, 1], &[0, 1]]);
        let w = witness_lemma1_case1(&right_zero).unwrap();
        assert_eq!((w.elements["a"], w.elements["b"], w.elements["c"]), (0, 1, 1));
        assert!(w.verified_identities.iter().any(|i| i.name == "ac = c" && i.holds));
        assert!(w.all_hold());
    }

    #[test]
    fn nowhere_commutative_rectangular_2x2() {
        // (i, j) ↦ 2i + j with (i, j)(i', j') = (i, j').
        let band = rows(4, |x, y| (x / 2) * 2 + y % 2);
        let w = witness_lemma1_case1(&band).unwrap();
        assert_eq!(w.elements["a"], 0);
        assert_eq!(w.elements["c"], 1);
        assert!(w.all_hold());
    }

    #[test]
    fn commuting_pair_examples() {
        let semilattice = sg(&[&[0, 0], &[0, 1]]);
        let w = witness_lemma1_case2(&semilattice).unwrap();
        assert_eq!((w.elements["c"], w.elements["d"]), (0, 1));
        assert!(w.all_hold());

        let chain = rows(3, |x, y| x.min(y));
        let w = witness_lemma1_case2_from_pair(&chain, 1, 2).unwrap();
        assert_eq!((w.elements["c"], w.elements["d"]), (1, 2));
        assert!(w.all_hold());

        // {0, 1, 2} with 0 as zero and 1·2 = 2·1 = 0: ab ∉ {a, b}, so d = a.
        let flat = rows(3, |x, y| if x == y { x } else { 0 });
        let w = witness_lemma1_case2_from_pair(&flat, 1, 2).unwrap();
        assert_eq!(w.elements["d"], 1);
        assert!(w.all_hold());
    }

    #[test]
    fn bounded_null_semigroup() {
        let null = sg(&[&[1, 1], &[1, 1]]);
        let w = witness_lemma2(&null).unwrap();
        assert_eq!((w.elements["a"], w.elements["a^2"]), (0, 1));
        assert_eq!(w.probe_points.outside, vec![vec![0, 1, 1]]);
        assert!(w.all_hold());
    }

    #[test]
    fn unbounded_z2() {
        let z2 = sg(&[&[0, 1], &[1, 0]]);
        let w = witness_lemma3(&z2).unwrap();
        assert_eq!(w.probe_points.inside, vec![vec![0, 1, 1, 1], vec![1, 1, 0, 1]]);
        assert_eq!(w.probe_points.outside, vec![vec![1, 0, 1, 0]]);
        assert!(w.all_hold());
    }

    #[test]
    fn unbounded_nilpotent_index_three() {
        // {a, a², a³} with a³ absorbing: element e ↦ exponent e + 1.
        let shape = Monogenic::new(3, 1);
        let s = rows(3, |x, y| shape.reduce((x + 1 + y + 1) as u64) as usize - 1);
        let w = witness_lemma3(&s).unwrap();
        assert_eq!((w.elements["a"], w.elements["a^2"], w.elements["a^3"]), (0, 1, 2));
        assert!(w.all_hold());
    }

    #[test]
    fn wrong_case_is_rejected() {
        let z2 = sg(&[&[0, 1], &[1, 0]]);
        assert!(matches!(witness_lemma2(&z2), Err(ProofError::WrongCase { .. })));
    }

    #[test]
    fn exponent_argument_examples() {
        let t = ExponentVector::new(vec![1, 2, 0, 3]);
        assert!(verify_eq1_argument(Monogenic::new(2, 3), &t, &t));
        let lhs = ExponentVector::new(vec![1, 0, 0, 0]);
        let rhs = ExponentVector::new(vec![0, 0, 1, 0]);
        assert!(verify_eq1_argument(Monogenic::new(1, 2), &lhs, &rhs));
    }

    #[test]
    fn check_reports() {
        let trivial = check_semigroup(&sg(&[&[0]]), DEFAULT_BUDGET).unwrap();
        assert!(trivial.is_equational_domain);
        assert!(trivial.lemma.is_none() && trivial.is_consistent());

        let lz = check_semigroup(&sg(&[&[0, 0], &[1, 1]]), DEFAULT_BUDGET).unwrap();
        assert_eq!(lz.lemma, Some(Lemma::BandNowhereCommutative));
        assert_eq!(lz.separating_point, Some(vec![0, 1, 1]));
        assert!(!lz.is_equational_domain && lz.is_consistent());

        let z2 = check_semigroup(&sg(&[&[0, 1], &[1, 0]]), DEFAULT_BUDGET).unwrap();
        assert_eq!(z2.lemma, Some(Lemma::Unbounded));
        assert_eq!(z2.target, Some(Target::M4));
        assert_eq!(z2.separating_point, Some(vec![1, 0, 1, 0]));
        assert!(z2.is_consistent());
    }

    #[test]
    fn report_json_shape() {
        let z2 = check_semigroup(&sg(&[&[0, 1], &[1, 0]]), DEFAULT_BUDGET).unwrap();
        let v = serde_json::to_value(&z2).unwrap();
        assert_eq!(v["lemma"], "3");
        assert_eq!(v["target"], "m4");
        assert_eq!(v["classification"], "unbounded");
        assert_eq!(v["probe_points"]["outside"][0], serde_json::json!([1, 0, 1, 0]));
        assert_eq!(v["elements"]["a"], 1);
    }
}
