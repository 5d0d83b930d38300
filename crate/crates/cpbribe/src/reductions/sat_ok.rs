//! Encodes 3SAT as k-approval score evaluation over preferences with no
//! dependencies: one voter per clause, with the clause's variables placed
//! first in that voter's importance order.
//!
//! With the threshold fixed at `7 * 2^(m-3)`, a voter approves exactly
//! the candidates that do not falsify its clause: missing all three
//! leading issues already costs the full threshold, while any candidate
//! that matches at least one leading issue stays below it no matter what
//! the trailing issues do. A candidate approved by every voter is then
//! precisely a satisfying assignment.

use super::{CnfFormula, ReduceError};
use crate::cpnet::{CpNet, CpTable, IssueSet, Profile, Voter};
use num_bigint::BigUint;

/// Builds the profile and approval threshold for a formula. The returned
/// profile has one unit-weight voter per clause; the formula is
/// satisfiable exactly when some candidate gets approved by all of them.
pub fn reduce_3sat_ok_eval(formula: &CnfFormula) -> Result<(Profile, BigUint), ReduceError> {
    formula.validate()?;
    let m = formula.var_count;
    let voters = formula
        .clauses
        .iter()
        .map(|clause| {
            let leading = CnfFormula::sorted_vars(clause);
            let tables = (0..m)
                .map(|v| {
                    let pref = leading
                        .iter()
                        .find(|(cv, _)| *cv == v)
                        .map(|(_, satisfying)| *satisfying)
                        .unwrap_or(true);
                    CpTable::independent(v, pref)
                })
                .collect();
            let mut order: Vec<usize> = leading.iter().map(|(cv, _)| *cv).collect();
            order.extend((0..m).filter(|v| leading.iter().all(|(cv, _)| cv != v)));
            Voter::new(CpNet::new(tables, Some(order)))
        })
        .collect();
    let threshold = BigUint::from(7u8) << (m - 3);
    Ok((Profile::new(IssueSet::anonymous(m), voters), threshold))
}
