//! Generators that encode classic hard decision problems as destructive
//! bribery instances, together with tiny self-contained decision
//! procedures for those source problems (see [`source_oracles`]).
//!
//! Every generator produces an instance whose bribery answer equals the
//! source problem's answer, so a solver can be cross-checked against the
//! independent source oracle on randomly drawn inputs.

mod knapsack;
mod nae;
mod sat_ok;
pub mod source_oracles;

pub use knapsack::{reduce_knapsack_op, reduce_knapsack_ov, reduce_knapsack_sm};
pub use nae::reduce_nae3sat;
pub use sat_ok::reduce_3sat_ok_eval;

use num_bigint::BigUint;
use thiserror::Error;

/// One literal of a three-literal clause: a variable index and an optional
/// negation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lit {
    pub var: usize,
    pub negated: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Self {
        Lit {
            var,
            negated: false,
        }
    }

    pub fn neg(var: usize) -> Self {
        Lit { var, negated: true }
    }

    /// The literal's value under an assignment given as a bit mask
    /// (bit `i` = variable `i`).
    fn value_under(&self, mask: u64) -> bool {
        ((mask >> self.var) & 1 == 1) != self.negated
    }
}

/// A conjunction of three-literal clauses over `var_count` boolean
/// variables. In not-all-equal mode every literal must be positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    pub var_count: usize,
    pub clauses: Vec<[Lit; 3]>,
}

impl CnfFormula {
    pub fn new(var_count: usize, clauses: Vec<[Lit; 3]>) -> Self {
        CnfFormula { var_count, clauses }
    }

    /// Convenience constructor from positive-variable index triples.
    pub fn positive(var_count: usize, clauses: &[[usize; 3]]) -> Self {
        CnfFormula {
            var_count,
            clauses: clauses
                .iter()
                .map(|c| [Lit::pos(c[0]), Lit::pos(c[1]), Lit::pos(c[2])])
                .collect(),
        }
    }

    /// Structural checks shared by both clause interpretations: at least
    /// three variables, at least one clause, and three distinct in-range
    /// variables per clause.
    pub fn validate(&self) -> Result<(), ReduceError> {
        if self.var_count < 3 {
            return Err(ReduceError::MalformedFormula(format!(
                "need at least 3 variables, got {}",
                self.var_count
            )));
        }
        if self.var_count >= u64::BITS as usize {
            return Err(ReduceError::MalformedFormula(format!(
                "too many variables for exhaustive checking: {}",
                self.var_count
            )));
        }
        if self.clauses.is_empty() {
            return Err(ReduceError::MalformedFormula(
                "need at least one clause".into(),
            ));
        }
        for (ci, clause) in self.clauses.iter().enumerate() {
            for lit in clause {
                if lit.var >= self.var_count {
                    return Err(ReduceError::MalformedFormula(format!(
                        "clause {ci} uses variable {} of {}",
                        lit.var, self.var_count
                    )));
                }
            }
            if clause[0].var == clause[1].var
                || clause[0].var == clause[2].var
                || clause[1].var == clause[2].var
            {
                return Err(ReduceError::MalformedFormula(format!(
                    "clause {ci} repeats a variable"
                )));
            }
        }
        Ok(())
    }

    /// Validation for not-all-equal mode, which additionally forbids
    /// negated literals.
    pub fn validate_nae(&self) -> Result<(), ReduceError> {
        self.validate()?;
        if self
            .clauses
            .iter()
            .any(|c| c.iter().any(|lit| lit.negated))
        {
            return Err(ReduceError::NegatedNaeLiteral);
        }
        Ok(())
    }

    /// The clause's variables sorted ascending, each paired with the bit
    /// value that makes its literal true.
    fn sorted_vars(clause: &[Lit; 3]) -> [(usize, bool); 3] {
        let mut vars = [
            (clause[0].var, !clause[0].negated),
            (clause[1].var, !clause[1].negated),
            (clause[2].var, !clause[2].negated),
        ];
        vars.sort();
        vars
    }
}

/// A knapsack question: is there a subset of `objects` (given as
/// `(weight, value)` pairs) with total value at least `k` and total weight
/// at most `b`?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnapsackInstance {
    pub objects: Vec<(BigUint, BigUint)>,
    pub k: BigUint,
    pub b: BigUint,
}

impl KnapsackInstance {
    pub fn new(objects: Vec<(BigUint, BigUint)>, k: BigUint, b: BigUint) -> Self {
        KnapsackInstance { objects, k, b }
    }

    pub fn from_u64(objects: &[(u64, u64)], k: u64, b: u64) -> Self {
        KnapsackInstance {
            objects: objects
                .iter()
                .map(|&(w, v)| (BigUint::from(w), BigUint::from(v)))
                .collect(),
            k: BigUint::from(k),
            b: BigUint::from(b),
        }
    }
}

/// Which top-choice rule a generated plurality-style instance should use:
/// plain plurality, or approval of exactly the top candidate, which scores
/// identically but exercises the approval machinery.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TopChoiceRule {
    Plurality,
    OneApproval,
}

/// Why a generator refused to produce an instance.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("malformed formula: {0}")]
    MalformedFormula(String),
    #[error("not-all-equal clauses must use positive literals")]
    NegatedNaeLiteral,
    #[error("no generator exists for this rule/action/scheme combination")]
    UncoveredCell,
}
