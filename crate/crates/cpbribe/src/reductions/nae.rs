//! Encodes positive not-all-equal satisfiability as destructive bribery
//! under a top-choice rule (plurality, or approval of the single top
//! candidate).
//!
//! One issue per variable, plus a cell-specific block of guard issues.
//! For every clause there are six voters, one per mixed assignment of the
//! clause's variables; each tops the candidate carrying its assignment on
//! those variables and ones everywhere else. Another clause-count-minus-one
//! voters top the all-ones candidate, which is the disliked one. A rival
//! candidate can only overtake it by collecting one vote from every
//! clause, and the guards and budget are arranged so that an affordable
//! bribe can retarget a voter's filler issues but never its clause
//! issues: an affordable winning bribe exists exactly when some global
//! assignment is mixed on every clause.

use super::{CnfFormula, ReduceError, TopChoiceRule};
use crate::bribery::{BriberyAction, BriberyInstance, CostKind, CostScheme};
use crate::cpnet::{Candidate, CpNet, CpTable, IssueSet, Profile, Voter};
use crate::voting::{KApprovalMode, VotingRule};
use num_bigint::BigUint;
use num_traits::{One, Zero};

/// How the guard issues protect the clause issues in one action/scheme
/// cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Layout {
    /// One shared guard; each voter's clause issues read it, so they are
    /// out of reach when only independent issues may be bribed.
    ClauseReadsGuard,
    /// One shared guard; each voter's filler issues read it, making them
    /// (and nothing else) editable when only dependent issues may be
    /// bribed.
    FillerReadsGuard,
    /// Per clause, a budget-sized block of guards that read the clause's
    /// issues; retargeting clause bits strands or overprices the block.
    PerClauseBlocks,
    /// A chain of guards between the clause issues and the filler issues;
    /// the chain's depth makes shallow issues unaffordable.
    Chain,
    /// Independent guards placed between clause and filler issues in the
    /// order, stretching the rank distance of any clause-bit change
    /// beyond the budget.
    Spacers,
    /// No guards; per-row prices alone protect the clause issues.
    Bare,
}

/// Builds a bribery instance whose answer is "yes" exactly when the
/// formula has an assignment making every clause mixed. The formula must
/// use positive literals only. The `Both + Equal` cell has no
/// construction and is refused.
pub fn reduce_nae3sat(
    formula: &CnfFormula,
    rule: TopChoiceRule,
    action: BriberyAction,
    kind: CostKind,
    negative: bool,
) -> Result<BriberyInstance, ReduceError> {
    formula.validate_nae()?;
    let nv = formula.var_count;
    let nc = formula.clauses.len();
    let extra = nv - 3;

    let layout = match (action, kind) {
        (BriberyAction::Both, CostKind::Equal) => return Err(ReduceError::UncoveredCell),
        (BriberyAction::IndependentOnly, _) => Layout::ClauseReadsGuard,
        (BriberyAction::DependentOnly, _) => Layout::FillerReadsGuard,
        (BriberyAction::Both, CostKind::Flip) => Layout::PerClauseBlocks,
        (BriberyAction::Both, CostKind::Level) => Layout::Chain,
        (BriberyAction::Both, CostKind::Dist) => Layout::Spacers,
        (BriberyAction::Both, CostKind::Any) => Layout::Bare,
    };
    let guard_count = match layout {
        Layout::ClauseReadsGuard | Layout::FillerReadsGuard => 1,
        Layout::PerClauseBlocks => nc * nc * extra,
        Layout::Chain => nc * nv,
        Layout::Spacers => ceil_log2(nc) + 1,
        Layout::Bare => 0,
    };
    let budget = match kind {
        // One unit per bribed voter, one voter per clause.
        CostKind::Equal => BigUint::from(nc),
        // One flip per filler issue a bribed voter must move.
        CostKind::Flip => BigUint::from(nc * extra),
        // Filler issues sit at depth two of a two-level net when they
        // read the guard, at depth one otherwise; their price is one
        // or two units accordingly.
        CostKind::Level => match layout {
            Layout::ClauseReadsGuard => BigUint::from(2 * nc * extra),
            _ => BigUint::from(nc * extra),
        },
        // Filler rows are affordable at unit price (or free in the
        // unguarded layout, where the budget is zero).
        CostKind::Any => match layout {
            Layout::Bare => BigUint::zero(),
            _ => BigUint::from(nc * extra),
        },
        // A retargeted voter's new top deviates only on filler issues,
        // which occupy the cheapest rank positions: strictly less than
        // 2^extra per voter.
        CostKind::Dist => (BigUint::from(nc) << extra) - BigUint::one(),
    };

    let total = nv + guard_count;
    let mut voters = Vec::with_capacity(7 * nc - 1);
    let mut prices: Vec<Vec<Vec<BigUint>>> = Vec::new();
    for (ci, clause) in formula.clauses.iter().enumerate() {
        let vars = CnfFormula::sorted_vars(clause);
        let cvars = [vars[0].0, vars[1].0, vars[2].0];
        for pattern in 1u8..7 {
            let assign = [pattern & 1 == 1, pattern & 2 == 2, pattern & 4 == 4];
            let voter = clause_voter(layout, nv, nc, guard_count, ci, &cvars, assign);
            if kind == CostKind::Any {
                let clause_priced = match layout {
                    Layout::Bare => Some(&cvars),
                    _ => None,
                };
                prices.push(row_prices(&voter.net, clause_priced));
            }
            voters.push(voter);
        }
    }
    let protect = &budget + BigUint::one();
    for _ in 0..nc - 1 {
        let mut voter = ones_voter(total);
        if !negative {
            voter.cost_factor = protect.clone();
        }
        if kind == CostKind::Any {
            prices.push(row_prices(&voter.net, None));
        }
        voters.push(voter);
    }

    let scheme = match kind {
        CostKind::Equal => CostScheme::Equal,
        CostKind::Flip => CostScheme::Flip,
        CostKind::Level => CostScheme::Level,
        CostKind::Any => CostScheme::Any(prices),
        CostKind::Dist => CostScheme::Dist,
    };
    let rule = match rule {
        TopChoiceRule::Plurality => VotingRule::Plurality,
        TopChoiceRule::OneApproval => VotingRule::KApproval(KApprovalMode::Listed {
            k: BigUint::one(),
        }),
    };
    Ok(BriberyInstance {
        profile: Profile::new(IssueSet::anonymous(total), voters),
        rule,
        action,
        scheme,
        budget,
        hated: Candidate::new(vec![true; total]),
        negative,
        global_order: None,
    })
}

/// Bits needed to index `x` things: the smallest `e` with `2^e >= x`.
fn ceil_log2(x: usize) -> usize {
    assert!(x >= 1);
    (usize::BITS - (x - 1).leading_zeros()) as usize
}

/// One voter for a clause/assignment pair. `cvars` are the clause's
/// variables sorted ascending and `assign[t]` is the bit the voter's top
/// carries on `cvars[t]`; every other issue of its top is one.
fn clause_voter(
    layout: Layout,
    nv: usize,
    nc: usize,
    guard_count: usize,
    ci: usize,
    cvars: &[usize; 3],
    assign: [bool; 3],
) -> Voter {
    let is_clause = |v: usize| cvars.contains(&v);
    let assign_of =
        |v: usize| assign[cvars.iter().position(|&c| c == v).expect("clause var")];
    let own_row: usize = (0..3).map(|t| (assign[t] as usize) << t).sum();

    let total = nv + guard_count;
    let mut tables = Vec::with_capacity(total);
    for v in 0..nv {
        let table = match layout {
            Layout::ClauseReadsGuard if is_clause(v) => {
                // The guard's value selects between the voter's own
                // assignment bit and its inverse.
                CpTable::new(v, vec![nv], vec![!assign_of(v), assign_of(v)])
            }
            Layout::FillerReadsGuard if !is_clause(v) => {
                CpTable::new(v, vec![nv], vec![false, true])
            }
            Layout::Chain if !is_clause(v) => {
                CpTable::new(v, vec![nv + guard_count - 1], vec![false, true])
            }
            _ if is_clause(v) => CpTable::independent(v, assign_of(v)),
            _ => CpTable::independent(v, true),
        };
        tables.push(table);
    }
    for g in 0..guard_count {
        let issue = nv + g;
        let table = match layout {
            Layout::PerClauseBlocks if g / (guard_count / nc) == ci => {
                clause_keyed_guard(issue, cvars, own_row)
            }
            Layout::Chain if g == 0 => clause_keyed_guard(issue, cvars, own_row),
            Layout::Chain => CpTable::new(issue, vec![issue - 1], vec![false, true]),
            _ => CpTable::independent(issue, true),
        };
        tables.push(table);
    }

    let mut order = Vec::with_capacity(total);
    match layout {
        Layout::ClauseReadsGuard => {
            order.push(nv);
            order.extend(*cvars);
        }
        Layout::FillerReadsGuard => {
            order.extend(*cvars);
            order.push(nv);
        }
        _ => {
            order.extend(*cvars);
            order.extend(nv..nv + guard_count);
        }
    }
    order.extend((0..nv).filter(|v| !is_clause(*v)));
    debug_assert_eq!(order.len(), total);

    Voter::new(CpNet::new(tables, Some(order)))
}

/// A guard table reading the clause's three variables, preferring one
/// exactly at the voter's own assignment row.
fn clause_keyed_guard(issue: usize, cvars: &[usize; 3], own_row: usize) -> CpTable {
    CpTable::new(
        issue,
        cvars.to_vec(),
        (0..8).map(|row| row == own_row).collect(),
    )
}

/// A voter topping the all-ones candidate, with every issue independent.
fn ones_voter(total: usize) -> Voter {
    let tables = (0..total).map(|v| CpTable::independent(v, true)).collect();
    Voter::new(CpNet::new(tables, Some((0..total).collect())))
}

/// Per-row prices for one voter. With `clause_priced` set, rows of those
/// issues cost one and every other row is free; otherwise all rows cost
/// one.
fn row_prices(net: &CpNet, clause_priced: Option<&[usize; 3]>) -> Vec<Vec<BigUint>> {
    net.tables
        .iter()
        .map(|t| {
            let price = match clause_priced {
                Some(cvars) if !cvars.contains(&t.issue) => BigUint::zero(),
                _ => BigUint::one(),
            };
            vec![price; t.row_count()]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::source_oracles::nae3sat_satisfiable;
    use crate::solvers::{brute_force_solve, BruteForceLimits};

    fn all_cells() -> Vec<(BriberyAction, CostKind)> {
        let actions = [
            BriberyAction::IndependentOnly,
            BriberyAction::DependentOnly,
            BriberyAction::Both,
        ];
        let kinds = [
            CostKind::Equal,
            CostKind::Flip,
            CostKind::Level,
            CostKind::Any,
            CostKind::Dist,
        ];
        actions
            .iter()
            .flat_map(|&a| kinds.iter().map(move |&k| (a, k)))
            .filter(|&(a, k)| !(a == BriberyAction::Both && k == CostKind::Equal))
            .collect()
    }

    #[test]
    fn instances_have_documented_shape_and_validate() {
        let formula = CnfFormula::positive(4, &[[0, 1, 2], [1, 2, 3]]);
        for (action, kind) in all_cells() {
            for negative in [false, true] {
                let inst = reduce_nae3sat(
                    &formula,
                    TopChoiceRule::Plurality,
                    action,
                    kind,
                    negative,
                )
                .unwrap();
                let guards = match (action, kind) {
                    (BriberyAction::Both, CostKind::Flip) => 4,
                    (BriberyAction::Both, CostKind::Level) => 8,
                    (BriberyAction::Both, CostKind::Dist) => 2,
                    (BriberyAction::Both, CostKind::Any) => 0,
                    _ => 1,
                };
                assert_eq!(inst.m(), 4 + guards, "{action:?} {kind:?}");
                assert_eq!(inst.n(), 7 * 2 - 1);
                assert_eq!(inst.negative, negative);
                assert_eq!(inst.validate(), vec![], "{action:?} {kind:?}");
            }
        }
    }

    #[test]
    fn refuses_uncovered_cell_and_bad_formulas() {
        let formula = CnfFormula::positive(4, &[[0, 1, 2]]);
        assert_eq!(
            reduce_nae3sat(
                &formula,
                TopChoiceRule::Plurality,
                BriberyAction::Both,
                CostKind::Equal,
                false,
            ),
            Err(ReduceError::UncoveredCell)
        );

        let negated = CnfFormula::new(
            4,
            vec![[
                super::super::Lit::neg(0),
                super::super::Lit::pos(1),
                super::super::Lit::pos(2),
            ]],
        );
        assert_eq!(
            reduce_nae3sat(
                &negated,
                TopChoiceRule::Plurality,
                BriberyAction::IndependentOnly,
                CostKind::Flip,
                false,
            ),
            Err(ReduceError::NegatedNaeLiteral)
        );

        let tiny = CnfFormula::positive(2, &[[0, 1, 1]]);
        assert!(matches!(
            reduce_nae3sat(
                &tiny,
                TopChoiceRule::Plurality,
                BriberyAction::IndependentOnly,
                CostKind::Flip,
                false,
            ),
            Err(ReduceError::MalformedFormula(_))
        ));
    }

    #[test]
    fn satisfiable_formula_yields_bribable_instance() {
        // Disjoint clauses: no two voters share a top, so the all-ones
        // candidate starts as a co-winner and an actual bribe is needed.
        let formula = CnfFormula::positive(6, &[[0, 1, 2], [3, 4, 5]]);
        assert!(nae3sat_satisfiable(&formula));
        let limits = BruteForceLimits {
            max_issues: 13,
            max_rows: 64,
            max_voters: 50,
        };
        for negative in [false, true] {
            let inst = reduce_nae3sat(
                &formula,
                TopChoiceRule::Plurality,
                BriberyAction::IndependentOnly,
                CostKind::Flip,
                negative,
            )
            .unwrap();
            let result = brute_force_solve(&inst, &limits).unwrap();
            assert!(result.decision, "negative={negative}");
            // A winning rival needs a vote from each clause, and no
            // candidate matches both contributing voters' tops at once,
            // so at least two flips are spent; two suffice.
            assert_eq!(result.cost, Some(BigUint::from(2u8)), "negative={negative}");
        }
    }

    #[test]
    fn unsatisfiable_formula_yields_unbribable_instance() {
        // The seven lines of the smallest point/line design on seven
        // points: no two-coloring leaves every line mixed, so no
        // assignment makes every clause not-all-equal.
        let fano = CnfFormula::positive(
            7,
            &[
                [0, 1, 2],
                [0, 3, 4],
                [0, 5, 6],
                [1, 3, 5],
                [1, 4, 6],
                [2, 3, 6],
                [2, 4, 5],
            ],
        );
        assert!(!nae3sat_satisfiable(&fano));
        let limits = BruteForceLimits {
            max_issues: 13,
            max_rows: 64,
            max_voters: 50,
        };
        let inst = reduce_nae3sat(
            &fano,
            TopChoiceRule::OneApproval,
            BriberyAction::DependentOnly,
            CostKind::Equal,
            false,
        )
        .unwrap();
        let result = brute_force_solve(&inst, &limits).unwrap();
        assert!(!result.decision);
    }
}
