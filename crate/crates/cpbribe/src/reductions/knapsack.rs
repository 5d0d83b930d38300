//! Encodes knapsack feasibility — a subset of `(weight, value)` objects
//! with value at least `k` and weight at most `b` — as weighted
//! destructive bribery under plurality, veto, or sequential majority.
//!
//! The shared idea: one weighted voter per object, whose voting weight is
//! the object's value and whose price factor is the object's weight, plus
//! a few unbribable anchor voters whose weights put the disliked
//! candidate ahead by a margin of `k`. Each object voter has exactly one
//! useful bribe, priced at a fixed multiple of its price factor, and that
//! bribe moves the object's value from the disliked candidate's margin to
//! a rival's. An affordable winning bribe then exists exactly when some
//! object subset reaches value `k` within weight `b`.

use super::{KnapsackInstance, ReduceError};
use crate::bribery::{BriberyAction, BriberyInstance, CostKind, CostScheme, FlipCosts};
use crate::cpnet::{Candidate, CpNet, CpTable, IssueSet, Profile, Voter};
use crate::voting::VotingRule;
use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Plurality over two issues. The disliked candidate is `(0,0)`; object
/// voters top `(1,0)` and a single affordable flip retargets them to the
/// rival `(1,1)`. Never refuses an input.
pub fn reduce_knapsack_op(
    inst: &KnapsackInstance,
    action: BriberyAction,
    kind: CostKind,
    negative: bool,
) -> BriberyInstance {
    let objects = useful_objects(inst);
    let l = total_value(&objects);
    if let Some(yes) = degenerate_decision(&inst.k, &l) {
        return pinned(VotingRule::Plurality, action, kind, negative, yes);
    }
    let budget = inst.b.clone();
    let protect = &budget + BigUint::one();

    let mut voters = vec![
        // Outweighs every rival by k - 1 before bribery.
        anchor(&[false, false], &l + &inst.k - BigUint::one(), &protect),
        // Seeds the rival so one moved value unit per missing margin
        // point suffices.
        anchor(&[true, true], l, &protect),
    ];
    for (w, v) in objects {
        let net = match action {
            // Only dependent issues may be bribed, so the second issue
            // reads the first; flipping its satisfied row retargets the
            // top from (1,0) to (1,1).
            BriberyAction::DependentOnly => CpNet::new(
                vec![
                    CpTable::independent(0, true),
                    CpTable::new(1, vec![0], vec![true, false]),
                ],
                Some(vec![0, 1]),
            ),
            _ => CpNet::new(
                vec![
                    CpTable::independent(0, true),
                    CpTable::independent(1, false),
                ],
                Some(vec![0, 1]),
            ),
        };
        voters.push(Voter::new(net).with_weight(v).with_cost_factor(w));
    }

    let profile = Profile::new(IssueSet::anonymous(2), voters);
    let scheme = match kind {
        CostKind::Any => CostScheme::Any(unit_prices(&profile)),
        _ => plain_scheme(kind),
    };
    BriberyInstance {
        profile,
        rule: VotingRule::Plurality,
        action,
        scheme,
        budget,
        hated: Candidate::new(vec![false, false]),
        negative,
        global_order: None,
    }
}

/// Veto over two issues. Object voters start by vetoing a sacrificial
/// rival; the useful bribe moves their veto onto the disliked candidate
/// (or, in negative mode, onto a protected bystander), raising the rival
/// past it. Refuses the dependent-issues + rank-distance cell, where
/// every veto move is free.
pub fn reduce_knapsack_ov(
    inst: &KnapsackInstance,
    action: BriberyAction,
    kind: CostKind,
    negative: bool,
) -> Result<BriberyInstance, ReduceError> {
    if action == BriberyAction::DependentOnly && kind == CostKind::Dist {
        return Err(ReduceError::UncoveredCell);
    }
    let objects = useful_objects(inst);
    let l = total_value(&objects);
    if let Some(yes) = degenerate_decision(&inst.k, &l) {
        return Ok(pinned(VotingRule::Veto, action, kind, negative, yes));
    }

    // Which candidate the object voters sacrifice their veto to, how
    // their net is wired, and what one useful bribe costs before the
    // price factor.
    let (object_net, cstar, base_cost, priced_rows) = ov_object_layout(action, kind, negative);
    let budget = &inst.b * BigUint::from(base_cost);
    let protect = &budget + BigUint::one();

    let h = [false, false];
    let others: Vec<[bool; 2]> = [[false, true], [true, false], [true, true]]
        .into_iter()
        .filter(|c| *c != cstar)
        .collect();
    let mut voters = Vec::new();
    if negative {
        // veto h: weight l - k + 1; veto each bystander: weight l.
        voters.push(vetoer(&h, &l - &inst.k + BigUint::one(), &protect));
        for c in &others {
            voters.push(vetoer(c, l.clone(), &protect));
        }
    } else {
        // veto h: 2l - 2k + 1; veto bystanders: 2l each; veto the
        // sacrificial rival: l.
        voters.push(vetoer(
            &h,
            BigUint::from(2u8) * &l - BigUint::from(2u8) * &inst.k + BigUint::one(),
            &protect,
        ));
        for c in &others {
            voters.push(vetoer(c, BigUint::from(2u8) * &l, &protect));
        }
        voters.push(vetoer(&cstar, l.clone(), &protect));
    }
    for (w, v) in objects {
        voters.push(Voter::new(object_net.clone()).with_weight(v).with_cost_factor(w));
    }

    let anchor_count = if negative { 3 } else { 4 };
    let profile = Profile::new(IssueSet::anonymous(2), voters);
    let scheme = match kind {
        CostKind::Any => CostScheme::Any(ov_prices(&profile, anchor_count, priced_rows)),
        _ => plain_scheme(kind),
    };
    Ok(BriberyInstance {
        profile,
        rule: VotingRule::Veto,
        action,
        scheme,
        budget,
        hated: Candidate::new(h.to_vec()),
        negative,
        global_order: None,
    })
}

/// The object voter's net for one veto cell: `(net, sacrificial veto
/// target, base cost of the useful bribe, special row prices)`. The
/// special prices only matter for the priced-rows scheme and mark rows
/// whose flips must not undercut the useful bribe.
#[allow(clippy::type_complexity)]
fn ov_object_layout(
    action: BriberyAction,
    kind: CostKind,
    negative: bool,
) -> (CpNet, [bool; 2], u8, Option<(usize, BigUint)>) {
    // Independent pair: top is the preference vector, veto its
    // complement, so vetoes only move together with tops.
    let indep = |p0: bool, p1: bool| {
        CpNet::new(
            vec![CpTable::independent(0, p0), CpTable::independent(1, p1)],
            Some(vec![0, 1]),
        )
    };
    // Second issue reads the first.
    let chained = |p0: bool, rows: [bool; 2]| {
        CpNet::new(
            vec![
                CpTable::independent(0, p0),
                CpTable::new(1, vec![0], rows.to_vec()),
            ],
            Some(vec![0, 1]),
        )
    };

    if negative {
        return match action {
            // Veto starts on (1,1); flipping the second issue moves it to
            // (1,0) at unit cost under every scheme (one flip, one level,
            // rank one).
            BriberyAction::IndependentOnly | BriberyAction::Both => {
                (indep(false, false), [true, true], 1, None)
            }
            // Veto starts on (1,0); flipping the second issue's satisfied
            // row moves it to (1,1) without touching the top.
            BriberyAction::DependentOnly => {
                (chained(false, [true, true]), [true, false], 1, None)
            }
        };
    }
    match (action, kind) {
        // Full move needs both flips but costs one unit.
        (_, CostKind::Equal) if action != BriberyAction::DependentOnly => {
            (indep(false, false), [true, true], 1, None)
        }
        // One independent flip carries the veto from (1,1) to (0,0).
        (BriberyAction::IndependentOnly, CostKind::Flip)
        | (BriberyAction::Both, CostKind::Flip)
        | (BriberyAction::IndependentOnly, CostKind::Any)
        | (BriberyAction::Both, CostKind::Any) => {
            let prices = match action {
                // Dependent rows must not be cheaper than the
                // independent one they would undercut.
                BriberyAction::Both => Some((1, BigUint::from(2u8))),
                _ => None,
            };
            (chained(false, [true, false]), [true, true], 1, prices)
        }
        // The same single flip, priced at depth one of a two-level net.
        (BriberyAction::IndependentOnly, CostKind::Level) => {
            (chained(false, [true, false]), [true, true], 2, None)
        }
        // The flip moves the top from (0,1) to (1,0): rank two.
        (BriberyAction::IndependentOnly, CostKind::Dist) => {
            (chained(false, [true, false]), [true, true], 2, None)
        }
        // Root-swapped pair: the first issue reads the second, so the
        // veto-carrying row sits at depth two (price one) while the
        // independent issue costs two.
        (BriberyAction::Both, CostKind::Level) => {
            let net = CpNet::new(
                vec![
                    CpTable::new(0, vec![1], vec![false, true]),
                    CpTable::independent(1, true),
                ],
                Some(vec![1, 0]),
            );
            (net, [true, false], 1, None)
        }
        // Independent pair topping (1,0): flipping the second issue moves
        // the veto from (0,1) to (0,0) at rank one.
        (BriberyAction::Both, CostKind::Dist) => (indep(true, false), [false, true], 1, None),
        // Dependent cells: the second issue's unsatisfied row carries the
        // veto; flipping it moves the veto from (0,1) to (0,0).
        (BriberyAction::DependentOnly, _) => (chained(true, [false, true]), [false, true], 1, None),
        (_, _) => unreachable!("all veto cells are mapped"),
    }
}

/// Sequential majority over two issues (three for the dependent-issues +
/// rank-distance cell, where a trailing issue separates the object
/// voters' tops from their bribed tops). Never refuses an input.
pub fn reduce_knapsack_sm(
    inst: &KnapsackInstance,
    action: BriberyAction,
    kind: CostKind,
    negative: bool,
) -> BriberyInstance {
    let objects = useful_objects(inst);
    let l = total_value(&objects);
    if let Some(yes) = degenerate_decision(&inst.k, &l) {
        return pinned(VotingRule::SequentialMajority, action, kind, negative, yes);
    }
    let spaced = action == BriberyAction::DependentOnly && kind == CostKind::Dist;
    let m = if spaced { 3 } else { 2 };
    let base_cost: u8 = if spaced { 2 } else { 1 };
    let budget = &inst.b * BigUint::from(base_cost);
    let protect = BigUint::from(2u8) * &budget + BigUint::one();

    let two = BigUint::from(2u8);
    let anchor_bits: [([bool; 2], BigUint); 4] = [
        ([false, false], &two * &l),
        ([false, true], &two * &l),
        ([true, false], l.clone()),
        ([true, true], &two * &l - &two * &inst.k + BigUint::one()),
    ];
    let mut voters = Vec::new();
    for (bits, weight) in anchor_bits {
        let mut tables = vec![
            CpTable::independent(0, bits[0]),
            CpTable::independent(1, bits[1]),
        ];
        if spaced {
            tables.push(CpTable::independent(2, false));
        }
        let net = CpNet::new(tables, Some((0..m).collect()));
        voters.push(Voter::new(net).with_weight(weight).with_cost_factor(protect.clone()));
    }
    for (w, v) in objects {
        let mut tables = match action {
            BriberyAction::DependentOnly => vec![
                CpTable::independent(0, !spaced),
                CpTable::new(1, vec![0], vec![false, false]),
            ],
            _ => vec![
                CpTable::independent(0, true),
                CpTable::independent(1, false),
            ],
        };
        if spaced {
            tables.push(CpTable::independent(2, true));
        }
        let net = CpNet::new(tables, Some((0..m).collect()));
        voters.push(Voter::new(net).with_weight(v).with_cost_factor(w));
    }

    let profile = Profile::new(IssueSet::anonymous(m), voters);
    let scheme = match kind {
        CostKind::Any => CostScheme::Any(unit_prices(&profile)),
        _ => plain_scheme(kind),
    };
    BriberyInstance {
        profile,
        rule: VotingRule::SequentialMajority,
        action,
        scheme,
        budget,
        hated: Candidate::new(vec![false; m]),
        negative,
        global_order: Some((0..m).collect()),
    }
}

/// Objects that can contribute to the target; zero-value ones cannot, and
/// they would become zero-weight voters.
fn useful_objects(inst: &KnapsackInstance) -> Vec<(BigUint, BigUint)> {
    inst.objects
        .iter()
        .filter(|(_, v)| !v.is_zero())
        .cloned()
        .collect()
}

fn total_value(objects: &[(BigUint, BigUint)]) -> BigUint {
    objects.iter().map(|(_, v)| v).sum()
}

/// Decides inputs the full construction cannot express: a zero target is
/// reachable by taking nothing, and a target above the total value is
/// never reachable. Otherwise `1 <= k <= l`, which keeps every anchor
/// weight positive.
fn degenerate_decision(k: &BigUint, l: &BigUint) -> Option<bool> {
    if k.is_zero() {
        Some(true)
    } else if k > l {
        Some(false)
    } else {
        None
    }
}

/// A single-issue instance with the requested decision: the lone voter
/// prefers one, and the disliked candidate is its top for "no" (the voter
/// is priced out of reach) or the loser for "yes".
fn pinned(
    rule: VotingRule,
    action: BriberyAction,
    kind: CostKind,
    negative: bool,
    yes: bool,
) -> BriberyInstance {
    let net = CpNet::new(vec![CpTable::independent(0, true)], Some(vec![0]));
    let voter = Voter::new(net).with_cost_factor(BigUint::from(2u8));
    let global = matches!(rule, VotingRule::SequentialMajority).then(|| vec![0]);
    let profile = Profile::new(IssueSet::anonymous(1), vec![voter]);
    let scheme = match kind {
        CostKind::Any => CostScheme::Any(unit_prices(&profile)),
        _ => plain_scheme(kind),
    };
    BriberyInstance {
        profile,
        rule,
        action,
        scheme,
        budget: BigUint::one(),
        hated: Candidate::new(vec![!yes]),
        negative,
        global_order: global,
    }
}

fn plain_scheme(kind: CostKind) -> CostScheme {
    match kind {
        CostKind::Equal => CostScheme::Equal,
        CostKind::Flip => CostScheme::Flip,
        CostKind::Level => CostScheme::Level,
        CostKind::Dist => CostScheme::Dist,
        CostKind::Any => unreachable!("priced scheme needs a price table"),
    }
}

/// An unbribable anchor topping `bits`.
fn anchor(bits: &[bool; 2], weight: BigUint, protect: &BigUint) -> Voter {
    let net = CpNet::new(
        vec![
            CpTable::independent(0, bits[0]),
            CpTable::independent(1, bits[1]),
        ],
        Some(vec![0, 1]),
    );
    Voter::new(net)
        .with_weight(weight)
        .with_cost_factor(protect.clone())
}

/// An unbribable anchor vetoing `bits` (its preferences are the
/// complement, so its worst candidate is exactly `bits`).
fn vetoer(bits: &[bool; 2], weight: BigUint, protect: &BigUint) -> Voter {
    anchor(&[!bits[0], !bits[1]], weight, protect)
}

/// Every row costs one unit.
fn unit_prices(profile: &Profile) -> FlipCosts {
    profile
        .voters
        .iter()
        .map(|v| {
            v.net
                .tables
                .iter()
                .map(|t| vec![BigUint::one(); t.row_count()])
                .collect()
        })
        .collect()
}

/// Unit prices, except that object voters (everyone after the leading
/// anchors) charge `price` on every row of `issue`.
fn ov_prices(profile: &Profile, anchor_count: usize, special: Option<(usize, BigUint)>) -> FlipCosts {
    let mut prices = unit_prices(profile);
    if let Some((issue, price)) = special {
        for row_prices in prices.iter_mut().skip(anchor_count) {
            for slot in row_prices[issue].iter_mut() {
                *slot = price.clone();
            }
        }
    }
    prices
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::source_oracles::knapsack_feasible;
    use crate::solvers::{brute_force_solve, BruteForceLimits};

    fn limits() -> BruteForceLimits {
        BruteForceLimits {
            max_issues: 5,
            max_rows: 40,
            max_voters: 12,
        }
    }

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
            .collect()
    }

    #[test]
    fn single_object_exactly_affording_the_target_is_a_yes() {
        let inst = KnapsackInstance::from_u64(&[(1, 1)], 1, 1);
        assert!(knapsack_feasible(&inst));
        for (action, kind) in all_cells() {
            for negative in [false, true] {
                let op = reduce_knapsack_op(&inst, action, kind, negative);
                assert_eq!(op.validate(), vec![], "op {action:?} {kind:?}");
                let got = brute_force_solve(&op, &limits()).unwrap();
                assert!(got.decision, "op {action:?} {kind:?} negative={negative}");

                let sm = reduce_knapsack_sm(&inst, action, kind, negative);
                assert_eq!(sm.validate(), vec![], "sm {action:?} {kind:?}");
                let got = brute_force_solve(&sm, &limits()).unwrap();
                assert!(got.decision, "sm {action:?} {kind:?} negative={negative}");

                match reduce_knapsack_ov(&inst, action, kind, negative) {
                    Ok(ov) => {
                        assert_eq!(ov.validate(), vec![], "ov {action:?} {kind:?}");
                        let got = brute_force_solve(&ov, &limits()).unwrap();
                        assert!(got.decision, "ov {action:?} {kind:?} negative={negative}");
                    }
                    Err(e) => {
                        assert_eq!(e, ReduceError::UncoveredCell);
                        assert_eq!((action, kind), (BriberyAction::DependentOnly, CostKind::Dist));
                    }
                }
            }
        }
    }

    #[test]
    fn overweight_object_is_a_no() {
        // Value reaches the target but only over budget.
        let inst = KnapsackInstance::from_u64(&[(3, 2), (2, 1)], 3, 4);
        assert!(!knapsack_feasible(&inst));
        for negative in [false, true] {
            let op = reduce_knapsack_op(&inst, BriberyAction::Both, CostKind::Flip, negative);
            let got = brute_force_solve(&op, &limits()).unwrap();
            assert!(!got.decision, "op negative={negative}");

            let ov = reduce_knapsack_ov(&inst, BriberyAction::IndependentOnly, CostKind::Dist, negative)
                .unwrap();
            let got = brute_force_solve(&ov, &limits()).unwrap();
            assert!(!got.decision, "ov negative={negative}");

            let sm = reduce_knapsack_sm(&inst, BriberyAction::DependentOnly, CostKind::Dist, negative);
            let got = brute_force_solve(&sm, &limits()).unwrap();
            assert!(!got.decision, "sm negative={negative}");
        }
    }

    #[test]
    fn unreachable_target_pins_a_no_and_zero_target_pins_a_yes() {
        let high = KnapsackInstance::from_u64(&[(1, 1)], 5, 100);
        let op = reduce_knapsack_op(&high, BriberyAction::Both, CostKind::Flip, false);
        assert_eq!(op.m(), 1);
        assert!(!brute_force_solve(&op, &limits()).unwrap().decision);

        let zero = KnapsackInstance::from_u64(&[], 0, 0);
        let sm = reduce_knapsack_sm(&zero, BriberyAction::IndependentOnly, CostKind::Dist, true);
        assert_eq!(sm.m(), 1);
        assert!(brute_force_solve(&sm, &limits()).unwrap().decision);
    }

    #[test]
    fn zero_value_objects_do_not_become_voters() {
        let inst = KnapsackInstance::from_u64(&[(1, 1), (7, 0), (2, 2)], 2, 3);
        let op = reduce_knapsack_op(&inst, BriberyAction::Both, CostKind::Equal, false);
        // Two anchors plus the two useful objects.
        assert_eq!(op.n(), 4);
        let ov = reduce_knapsack_ov(&inst, BriberyAction::Both, CostKind::Equal, false).unwrap();
        // Four anchors plus the two useful objects.
        assert_eq!(ov.n(), 6);
        let sm = reduce_knapsack_sm(&inst, BriberyAction::Both, CostKind::Equal, true);
        assert_eq!(sm.n(), 6);
    }
}
