//! Batch checking over enumerated or supplied tables.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::Semigroup;
use crate::enumerate::{enumerate_tables, Mode};
use crate::proof::{check_semigroup, Lemma, ProofError, WitnessReport};
use crate::terms::ClosureError;

/// Outcome of checking one table within a batch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum TableOutcome {
    Report(WitnessReport),
    Error { order: usize, index: usize, table: Vec<Vec<usize>>, error: String, budget_exceeded: bool },
}

impl TableOutcome {
    /// The table was checked, the report is internally consistent, and it is
    /// an equational domain only if trivial.
    pub fn is_success(&self) -> bool {
        matches!(self, TableOutcome::Report(r) if r.is_consistent())
    }
}

/// Checks every table, in order, on a pool of `jobs` threads (0 = default).
/// Output order is the input order regardless of the pool size.
pub fn check_all(tables: &[Semigroup], budget: usize, jobs: usize) -> Vec<TableOutcome> {
    let run = || {
        tables
            .par_iter()
            .enumerate()
            .map(|(index, s)| match check_semigroup(s, budget) {
                Ok(report) => TableOutcome::Report(report),
                Err(e) => TableOutcome::Error {
                    order: s.order(),
                    index,
                    table: s.rows(),
                    budget_exceeded: matches!(e, ProofError::Closure(ClosureError::BudgetExceeded { .. })),
                    error: e.to_string(),
                },
            })
            .collect()
    };
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(run),
        Err(_) => run(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderSummary {
    pub order: usize,
    pub tables: usize,
    pub by_lemma: BTreeMap<String, usize>,
    pub equational_domains: usize,
    /// Indices (within this order) of tables with a failed identity or no
    /// separating point.
    pub inconsistent: Vec<usize>,
    pub budget_exceeded: Vec<usize>,
    pub errors: Vec<usize>,
}

impl OrderSummary {
    pub fn from_outcomes(order: usize, outcomes: &[TableOutcome]) -> Self {
        let mut by_lemma: BTreeMap<String, usize> =
            Lemma::ALL.iter().map(|l| (l.label().to_string(), 0)).collect();
        let mut summary = OrderSummary {
            order,
            tables: outcomes.len(),
            by_lemma: BTreeMap::new(),
            equational_domains: 0,
            inconsistent: Vec::new(),
            budget_exceeded: Vec::new(),
            errors: Vec::new(),
        };
        for (i, outcome) in outcomes.iter().enumerate() {
            match outcome {
                TableOutcome::Report(r) => {
                    if let Some(l) = r.lemma {
                        *by_lemma.entry(l.label().to_string()).or_default() += 1;
                    }
                    if r.is_equational_domain && r.order > 1 {
                        summary.equational_domains += 1;
                    }
                    if !r.is_consistent() {
                        summary.inconsistent.push(i);
                    }
                }
                TableOutcome::Error { budget_exceeded: true, .. } => summary.budget_exceeded.push(i),
                TableOutcome::Error { .. } => summary.errors.push(i),
            }
        }
        summary.by_lemma = by_lemma;
        summary
    }

    pub fn is_success(&self) -> bool {
        self.equational_domains == 0
            && self.inconsistent.is_empty()
            && self.budget_exceeded.is_empty()
            && self.errors.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremSummary {
    pub max_order: usize,
    pub mode: Mode,
    pub orders: Vec<OrderSummary>,
    pub tables_checked: usize,
    pub equational_domains: usize,
    pub success: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone)]
pub struct TheoremRun {
    /// Per checked order, the outcomes in enumeration order.
    pub outcomes: Vec<(usize, Vec<TableOutcome>)>,
    pub summary: TheoremSummary,
}

/// Checks every enumerated semigroup of order `2..=max_order`.
pub fn verify_theorem(max_order: usize, mode: Mode, budget: usize, jobs: usize) -> TheoremRun {
    let mut outcomes = Vec::new();
    let mut orders = Vec::new();
    for order in 2..=max_order {
        let tables: Vec<Semigroup> = enumerate_tables(order, mode).collect();
        let results = check_all(&tables, budget, jobs);
        orders.push(OrderSummary::from_outcomes(order, &results));
        outcomes.push((order, results));
    }
    let note = (max_order < 2)
        .then(|| "no nontrivial orders requested; the one-element semigroup is excluded".to_string());
    let summary = TheoremSummary {
        max_order,
        mode,
        tables_checked: orders.iter().map(|o| o.tables).sum(),
        equational_domains: orders.iter().map(|o| o.equational_domains).sum(),
        success: orders.iter().all(OrderSummary::is_success),
        orders,
        note,
    };
    TheoremRun { outcomes, summary }
}
