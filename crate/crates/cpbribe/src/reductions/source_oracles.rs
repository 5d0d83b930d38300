//! Independent decision procedures for the source problems behind the
//! generators. These are deliberately direct — exhaustive search over
//! assignments or subsets — and share no code with the bribery solvers, so
//! a bug in one side cannot hide a matching bug in the other.

use super::{CnfFormula, KnapsackInstance};
use num_bigint::BigUint;
use num_traits::Zero;

/// Is there an assignment under which every clause has at least one true
/// and at least one false literal?
pub fn nae3sat_satisfiable(formula: &CnfFormula) -> bool {
    assert!(
        formula.var_count < u64::BITS as usize,
        "exhaustive check is sized for small formulas"
    );
    (0u64..1 << formula.var_count).any(|mask| {
        formula.clauses.iter().all(|clause| {
            let values = clause.map(|lit| lit.value_under(mask));
            values.iter().any(|&b| b) && values.iter().any(|&b| !b)
        })
    })
}

/// Is there an assignment under which every clause has at least one true
/// literal?
pub fn sat3_satisfiable(formula: &CnfFormula) -> bool {
    assert!(
        formula.var_count < u64::BITS as usize,
        "exhaustive check is sized for small formulas"
    );
    (0u64..1 << formula.var_count).any(|mask| {
        formula
            .clauses
            .iter()
            .all(|clause| clause.iter().any(|lit| lit.value_under(mask)))
    })
}

/// Is there a subset of the objects with total value at least `k` and
/// total weight at most `b`?
pub fn knapsack_feasible(inst: &KnapsackInstance) -> bool {
    assert!(
        inst.objects.len() < u32::BITS as usize,
        "exhaustive check is sized for small object lists"
    );
    (0u32..1 << inst.objects.len()).any(|mask| {
        let mut weight = BigUint::zero();
        let mut value = BigUint::zero();
        for (i, (w, v)) in inst.objects.iter().enumerate() {
            if (mask >> i) & 1 == 1 {
                weight += w;
                value += v;
            }
        }
        value >= inst.k && weight <= inst.b
    })
}
