//! Algebraic geometry over finite semigroups in the language `{·}`, and an
//! exhaustive checker that no nontrivial finite semigroup is an equational
//! domain.
//!
//! - [`algebra`]: validated Cayley tables, element profiles, classification.
//! - [`terms`]: terms, equations, and the clone of term functions.
//! - [`geometry`]: point sets, solution sets, the algebraic closure.
//! - [`proof`]: per-class witnesses and [`proof::check_semigroup`].
//! - [`enumerate`]: all semigroups of a small order, canonical forms, corpora.
//! - [`verify`]: batch runs over enumerated or supplied tables.

pub mod algebra;
pub mod enumerate;
pub mod geometry;
pub mod proof;
pub mod terms;
pub mod verify;

pub use algebra::{monogenic_equal, Classification, ElementProfile, Monogenic, Semigroup, TableError};
pub use enumerate::{canonicalize, enumerate_tables, read_corpus, CanonicalForm, Mode};
pub use geometry::{algebraic_closure, is_algebraic, solution_set, PointSet, PointSpace};
pub use proof::{check_semigroup, verify_eq1_argument, Lemma, Target, WitnessReport};
pub use terms::{Equation, ExponentVector, System, Term, TermFunction, TermFunctions, DEFAULT_BUDGET};
