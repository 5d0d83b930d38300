//! Helpers shared by the bribery solvers.

use crate::bribery::{BriberyAction, BriberyInstance, FlipPlan, FlipRef};
use crate::cpnet::{pow2, Candidate, CpNet};
use crate::solvers::{SolveError, SolveResult};
use num_bigint::BigUint;
use num_traits::Zero;
use std::collections::BTreeSet;

/// The flips that are mandatory, minimal, and sufficient to make `c` the
/// voter's top candidate: at every issue, the row `c` itself selects must
/// prefer `c`'s value.
pub(crate) fn make_top_flips(net: &CpNet, c: &Candidate) -> BTreeSet<FlipRef> {
    net.tables
        .iter()
        .enumerate()
        .filter_map(|(issue, table)| {
            let row = table.row_for(c);
            (table.prefs[row] != c.get(issue)).then_some(FlipRef { issue, row })
        })
        .collect()
}

/// The flips that are mandatory, minimal, and sufficient to make `d` the
/// voter's bottom candidate: at every issue, the row `d` selects must
/// prefer the opposite of `d`'s value.
pub(crate) fn make_bottom_flips(net: &CpNet, d: &Candidate) -> BTreeSet<FlipRef> {
    net.tables
        .iter()
        .enumerate()
        .filter_map(|(issue, table)| {
            let row = table.row_for(d);
            (table.prefs[row] == d.get(issue)).then_some(FlipRef { issue, row })
        })
        .collect()
}

/// May every flip in the set be performed under the action restriction?
pub(crate) fn flips_action_legal(
    net: &CpNet,
    action: BriberyAction,
    flips: &BTreeSet<FlipRef>,
) -> bool {
    flips
        .iter()
        .all(|flip| action.allows(net.tables[flip.issue].parents.len()))
}

/// Rank of `c` under explicit order positions (`positions[issue]` = how
/// important the issue is, zero first): sum of 2^(m-1-position) over the
/// issues where `c` deviates from its own conditional preference.
#[allow(dead_code)]
pub(crate) fn rank_in_positions(net: &CpNet, c: &Candidate, positions: &[usize]) -> BigUint {
    let m = net.m();
    let mut rank = BigUint::zero();
    for (issue, table) in net.tables.iter().enumerate() {
        if table.pref_given(c) != c.get(issue) {
            rank += pow2(m - 1 - positions[issue]);
        }
    }
    rank
}

/// When the hated candidate already loses, the empty plan succeeds at
/// cost zero. Returns `Ok(Some(..))` in that case.
pub(crate) fn already_lost(inst: &BriberyInstance) -> Result<Option<SolveResult>, SolveError> {
    match inst.hated_wins(&inst.profile) {
        Ok(true) => Ok(None),
        Ok(false) => Ok(Some(SolveResult::yes(
            FlipPlan::default(),
            BigUint::zero(),
            "already_lost",
        ))),
        Err(e) => Err(SolveError::LimitsExceeded(e.to_string())),
    }
}

/// One way to bribe one voter: `gain` units of score-deficit coverage at
/// `cost`, realized by `flips`.
#[derive(Debug, Clone)]
pub(crate) struct MoveOption {
    pub gain: usize,
    pub cost: BigUint,
    pub flips: BTreeSet<FlipRef>,
}

/// Cheapest way to pick at most one option per voter so the gains sum to
/// at least `deficit`. Returns the total cost and, per voter, the chosen
/// option index. Deterministic: earlier options win cost ties.
pub(crate) fn min_cost_cover(
    options: &[Vec<MoveOption>],
    deficit: usize,
) -> Option<(BigUint, Vec<Option<usize>>)> {
    let cap = deficit;
    // dp[d] = cheapest cost reaching d units (clamped at cap).
    let mut dp: Vec<Option<BigUint>> = vec![None; cap + 1];
    dp[0] = Some(BigUint::zero());
    // back[vi][d] = (chosen option index, previous d) for the best way to
    // be at d after considering voter vi.
    let mut back: Vec<Vec<Option<(Option<usize>, usize)>>> = Vec::with_capacity(options.len());
    for voter_options in options {
        let mut next: Vec<Option<BigUint>> = dp.clone();
        let mut choices: Vec<Option<(Option<usize>, usize)>> =
            (0..=cap).map(|d| dp[d].as_ref().map(|_| (None, d))).collect();
        for (oi, option) in voter_options.iter().enumerate() {
            if option.gain == 0 {
                continue;
            }
            for d in 0..=cap {
                let Some(cost) = &dp[d] else { continue };
                let d2 = (d + option.gain).min(cap);
                let candidate = cost + &option.cost;
                let better = match &next[d2] {
                    None => true,
                    Some(existing) => candidate < *existing,
                };
                if better {
                    next[d2] = Some(candidate);
                    choices[d2] = Some((Some(oi), d));
                }
            }
        }
        dp = next;
        back.push(choices);
    }
    dp[cap].clone().map(|total| {
        let mut picks = vec![None; options.len()];
        let mut d = cap;
        for vi in (0..options.len()).rev() {
            let (choice, prev) = back[vi][d].expect("cover DP backpointer");
            picks[vi] = choice;
            d = prev;
        }
        (total, picks)
    })
}

/// Assemble a plan from per-voter option picks.
pub(crate) fn plan_from_picks(options: &[Vec<MoveOption>], picks: &[Option<usize>]) -> FlipPlan {
    let mut plan = FlipPlan::default();
    for (vi, pick) in picks.iter().enumerate() {
        if let Some(oi) = pick {
            let flips = options[vi][*oi].flips.clone();
            if !flips.is_empty() {
                plan.flips.insert(vi, flips);
            }
        }
    }
    plan
}

/// Keep the lexicographically better (cost, plan) witness.
pub(crate) fn better_witness(
    best: &mut Option<(BigUint, FlipPlan)>,
    candidate: (BigUint, FlipPlan),
) {
    match best {
        None => *best = Some(candidate),
        Some(current) => {
            if candidate.0 < current.0 || (candidate.0 == current.0 && candidate.1 < current.1) {
                *best = Some(candidate);
            }
        }
    }
}

/// Turn the best-witness result into a final yes/no against the budget.
pub(crate) fn conclude(
    inst: &BriberyInstance,
    best: Option<(BigUint, FlipPlan)>,
    method: &'static str,
) -> SolveResult {
    match best {
        Some((cost, plan)) if cost <= inst.budget => {
            debug_assert!(inst.bribery_succeeds(&plan));
            SolveResult::yes(plan, cost, method)
        }
        _ => SolveResult::no(method),
    }
}
