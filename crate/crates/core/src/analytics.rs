//! Per-step sender/receiver counts without simulating.
//!
//! The previous schedule has a closed form: in round `r`, step `d`,
//! `6d·N^(r-1)` nodes receive and `6(d-1)·N^(r-1)` send, except that the
//! `N^(r-1)` round roots send at `d = 1`.
//!
//! The improved schedule is counted by rewriting a multiset of symbolic
//! terms. `O2A(k)` is a node launching all six sectors on dimensions
//! `1..=k`; `S(k, x, y)` is a node that just received the sector packet
//! `(x, y)` on dimension `k`:
//!
//! ```text
//! O2A(1) = 6 S(1, D-1, D-1)
//! O2A(k) = O2A(k-1) + 6 S(k, D-1, D-1)
//! S(k, x, y) -> S(k, x-1, 0)        if x > 0
//!             + S(k, x-1, y-1)      if y > 0
//!             + O2A(k-1)            if k > 1
//! ```
//!
//! `O2A` terms unroll within the step that spawned them, and `S(1, 0, 0)`
//! is a leaf. The receivers of a step are the S-terms it creates; its
//! senders are the terms that expanded out of the previous step.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::broadcast::Algorithm;
use crate::error::{Error, Result};
use crate::residue::Modulus;

pub const ANALYTIC_MAX_DIMS: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    O2a { dim: u32 },
    S { dim: u32, x: u32, y: u32 },
}

impl Term {
    fn is_leaf(self) -> bool {
        matches!(self, Term::S { dim: 1, x: 0, y: 0 })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TermMultiset {
    counts: BTreeMap<Term, BigUint>,
}

impl TermMultiset {
    pub fn add(&mut self, term: Term, count: &BigUint) {
        if count.is_zero() {
            return;
        }
        *self.counts.entry(term).or_default() += count;
    }

    pub fn count(&self, term: Term) -> BigUint {
        self.counts.get(&term).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Term, &BigUint)> {
        self.counts.iter().map(|(t, c)| (*t, c))
    }

    /// Number of terms, with multiplicity.
    pub fn len(&self) -> BigUint {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn contains_o2a(&self) -> bool {
        self.counts.keys().any(|t| matches!(t, Term::O2a { .. }))
    }

    /// Replaces every `O2A(k)` by its S-terms.
    fn unroll(&mut self, diameter: u32) {
        let pending: Vec<(u32, BigUint)> = self
            .counts
            .iter()
            .filter_map(|(t, c)| match t {
                Term::O2a { dim } => Some((*dim, c.clone())),
                Term::S { .. } => None,
            })
            .collect();
        self.counts.retain(|t, _| matches!(t, Term::S { .. }));
        let six = BigUint::from(6u32);
        for (k, c) in pending {
            let launched = &c * &six;
            for dim in 1..=k {
                self.add(
                    Term::S {
                        dim,
                        x: diameter - 1,
                        y: diameter - 1,
                    },
                    &launched,
                );
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnalyticStepRow {
    pub step: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub round: Option<u32>,
    #[serde(serialize_with = "crate::report::serialize_big")]
    pub senders: BigUint,
    #[serde(serialize_with = "crate::report::serialize_big")]
    pub receivers: BigUint,
}

fn check(m: &Modulus, n: u32) -> Result<()> {
    m.require_broadcast_shape()?;
    if n == 0 || n > ANALYTIC_MAX_DIMS {
        return Err(Error::DimsOutOfRange {
            dims: n,
            max: ANALYTIC_MAX_DIMS,
        });
    }
    Ok(())
}

/// Closed-form rows of the previous schedule.
pub fn analytic_prev(m: &Modulus, n: u32) -> Result<Vec<AnalyticStepRow>> {
    check(m, n)?;
    let norm = BigUint::from(m.norm());
    let diameter = m.diameter();
    let mut rows = Vec::with_capacity((n * diameter) as usize);
    let mut roots = BigUint::one();
    for round in 1..=n {
        for d in 1..=diameter {
            let senders = if d == 1 {
                roots.clone()
            } else {
                &roots * BigUint::from(6 * (d - 1))
            };
            rows.push(AnalyticStepRow {
                step: (round - 1) * diameter + d,
                round: Some(round),
                senders,
                receivers: &roots * BigUint::from(6 * d),
            });
        }
        roots *= &norm;
    }
    Ok(rows)
}

/// The term multiset after each step of the improved schedule; entry 0 is
/// step 1.
pub fn o2a_expansion(m: &Modulus, n: u32) -> Result<Vec<TermMultiset>> {
    check(m, n)?;
    let diameter = m.diameter();
    let mut current = TermMultiset::default();
    current.add(Term::O2a { dim: n }, &BigUint::one());
    current.unroll(diameter);
    let mut out = Vec::new();
    while !current.is_empty() {
        let mut next = TermMultiset::default();
        for (term, c) in current.iter() {
            let Term::S { dim, x, y } = term else {
                unreachable!("multiset is unrolled after every step")
            };
            if term.is_leaf() {
                continue;
            }
            if x > 0 {
                next.add(
                    Term::S {
                        dim,
                        x: x - 1,
                        y: 0,
                    },
                    c,
                );
            }
            if y > 0 {
                next.add(
                    Term::S {
                        dim,
                        x: x - 1,
                        y: y - 1,
                    },
                    c,
                );
            }
            if dim > 1 {
                next.add(Term::O2a { dim: dim - 1 }, c);
            }
        }
        next.unroll(diameter);
        out.push(current);
        current = next;
    }
    Ok(out)
}

/// Rows of the improved schedule, counted by term rewriting.
pub fn expand_o2a(m: &Modulus, n: u32) -> Result<Vec<AnalyticStepRow>> {
    let expansion = o2a_expansion(m, n)?;
    let mut rows = Vec::with_capacity(expansion.len());
    let mut senders = BigUint::one();
    for (i, terms) in expansion.iter().enumerate() {
        rows.push(AnalyticStepRow {
            step: i as u32 + 1,
            round: None,
            senders: std::mem::take(&mut senders),
            receivers: terms.len(),
        });
        senders = terms
            .iter()
            .filter(|(t, _)| !t.is_leaf())
            .map(|(_, c)| c)
            .sum();
    }
    Ok(rows)
}

pub fn analytic_rows(m: &Modulus, n: u32, algorithm: Algorithm) -> Result<Vec<AnalyticStepRow>> {
    match algorithm {
        Algorithm::Previous => analytic_prev(m, n),
        Algorithm::Improved => expand_o2a(m, n),
    }
}

pub fn total_senders(m: &Modulus, n: u32, algorithm: Algorithm) -> Result<BigUint> {
    Ok(analytic_rows(m, n, algorithm)?
        .into_iter()
        .map(|r| r.senders)
        .sum())
}

/// Total senders of the previous schedule over those of the improved one.
pub fn sender_ratio(m: &Modulus, n: u32) -> Result<BigRational> {
    let prev = total_senders(m, n, Algorithm::Previous)?;
    let imp = total_senders(m, n, Algorithm::Improved)?;
    Ok(BigRational::new(BigInt::from(prev), BigInt::from(imp)))
}

/// Mean first-receive step implied by a set of rows.
pub fn mean_receive_step(rows: &[AnalyticStepRow]) -> BigRational {
    let weighted: BigUint = rows
        .iter()
        .map(|r| &r.receivers * BigUint::from(r.step))
        .sum();
    let receivers: BigUint = rows.iter().map(|r| &r.receivers).sum();
    BigRational::new(BigInt::from(weighted), BigInt::from(receivers))
}

/// One column of the total-senders comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SenderComparison {
    pub dims: u32,
    #[serde(serialize_with = "crate::report::serialize_big")]
    pub previous: BigUint,
    #[serde(serialize_with = "crate::report::serialize_big")]
    pub improved: BigUint,
    #[serde(serialize_with = "crate::report::serialize_big")]
    pub difference: BigUint,
    #[serde(serialize_with = "crate::report::serialize_ratio")]
    pub ratio: BigRational,
}

pub fn compare_senders(m: &Modulus, n: u32) -> Result<SenderComparison> {
    let previous = total_senders(m, n, Algorithm::Previous)?;
    let improved = total_senders(m, n, Algorithm::Improved)?;
    Ok(SenderComparison {
        dims: n,
        difference: &previous - &improved,
        ratio: BigRational::new(
            BigInt::from(previous.clone()),
            BigInt::from(improved.clone()),
        ),
        previous,
        improved,
    })
}
