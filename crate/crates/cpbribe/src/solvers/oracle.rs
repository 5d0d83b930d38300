//! Exhaustive reference solver.
//!
//! This module answers any valid bribery instance exactly, as long as the
//! instance fits the configured size limits. It is deliberately written as
//! a search over complete move menus rather than reusing the closed forms
//! of the fast solvers, so the two can check each other.
//!
//! Three engines cover the rule families:
//!
//! * top-choice rules (plurality, 1-approval): enumerate the target
//!   candidate, then assemble per-voter moves that either re-land a voter
//!   on the target or pull a supporter off the hated candidate;
//! * approval-style rules (veto, k-approval in both regimes): enumerate
//!   every subset of each voter's editable rows, reduce each subset to the
//!   approval set it produces, and search the per-voter menus;
//! * the sequential rule: break one elimination step by flipping the
//!   hated-context row at that issue for enough agreeing voters.
//!
//! Each engine is exact for its rules: the moves it considers dominate all
//! others under every cost scheme, which is argued inline where it is not
//! obvious.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::Zero;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::bribery::{apply_flips, BriberyInstance, FlipPlan, FlipRef};
use crate::cpnet::{pow2, Candidate, CpNet};
use crate::voting::{self, KApprovalMode, VotingRule};

use super::util;
use super::{BruteForceLimits, SolveError, SolveResult};

const METHOD: &str = "brute_force";

/// Solve `inst` exactly, using all cores when the `parallel` feature is on.
pub fn brute_force_solve(
    inst: &BriberyInstance,
    limits: &BruteForceLimits,
) -> Result<SolveResult, SolveError> {
    solve_inner(inst, limits, true)
}

/// Single-threaded variant of [`brute_force_solve`]; same answers.
pub fn brute_force_solve_seq(
    inst: &BriberyInstance,
    limits: &BruteForceLimits,
) -> Result<SolveResult, SolveError> {
    solve_inner(inst, limits, false)
}

fn solve_inner(
    inst: &BriberyInstance,
    limits: &BruteForceLimits,
    par: bool,
) -> Result<SolveResult, SolveError> {
    let problems = inst.validate();
    if !problems.is_empty() {
        return Err(SolveError::InvalidInstance(problems));
    }
    if let Some(result) = util::already_lost(inst)? {
        return Ok(result);
    }
    match &inst.rule {
        VotingRule::Plurality => engine_top(inst, limits, par),
        VotingRule::KApproval(KApprovalMode::Listed { k })
            if voting::try_to_usize(k) == Some(1) =>
        {
            engine_top(inst, limits, par)
        }
        VotingRule::Veto | VotingRule::KApproval(_) => engine_approval(inst, limits, par),
        VotingRule::SequentialMajority => engine_steps(inst, limits, par),
    }
}

/// Best `(cost, plan)` over `count` independent targets. The parallel path
/// relies on the natural ordering of the pair, which matches
/// [`util::better_witness`], so both paths pick the same witness.
fn best_over_targets<F>(count: usize, par: bool, eval: F) -> Option<(BigUint, FlipPlan)>
where
    F: Fn(usize) -> Option<(BigUint, FlipPlan)> + Sync,
{
    #[cfg(feature = "parallel")]
    {
        if par {
            return (0..count).into_par_iter().filter_map(|i| eval(i)).min();
        }
    }
    let _ = par;
    let mut best = None;
    for i in 0..count {
        if let Some(candidate) = eval(i) {
            util::better_witness(&mut best, candidate);
        }
    }
    best
}

/// One way a voter can act in a weighted search: a priced set of flips
/// together with its effect on the margin of the target over the hated
/// candidate (per unit of the voter's weight).
#[derive(Debug, Clone)]
struct WeightedChoice {
    cost: BigUint,
    delta: i8,
    flips: BTreeSet<FlipRef>,
}

/// Cheapest way to pick one choice per voter so that the weighted margin
/// ends up strictly positive, without exceeding the budget. Exhaustive
/// with cost-based pruning; voter counts are capped by the callers.
fn weighted_best(
    choices: &[Vec<WeightedChoice>],
    weights: &[BigUint],
    budget: &BigUint,
) -> Option<(BigUint, FlipPlan)> {
    let mut best: Option<(BigUint, FlipPlan)> = None;
    let mut picks = vec![0usize; choices.len()];
    weighted_search(
        choices,
        weights,
        budget,
        0,
        BigUint::zero(),
        BigUint::zero(),
        BigUint::zero(),
        &mut picks,
        &mut best,
    );
    best
}

#[allow(clippy::too_many_arguments)]
fn weighted_search(
    choices: &[Vec<WeightedChoice>],
    weights: &[BigUint],
    budget: &BigUint,
    vi: usize,
    cost: BigUint,
    pos: BigUint,
    neg: BigUint,
    picks: &mut Vec<usize>,
    best: &mut Option<(BigUint, FlipPlan)>,
) {
    if &cost > budget {
        return;
    }
    if let Some((best_cost, _)) = best {
        // Equal cost is still explored so the lexicographically smallest
        // plan wins, keeping the answer deterministic.
        if cost > *best_cost {
            return;
        }
    }
    if vi == choices.len() {
        if pos > neg {
            let mut plan = FlipPlan::default();
            for (v, &pick) in picks.iter().enumerate() {
                let flips = &choices[v][pick].flips;
                if !flips.is_empty() {
                    plan.flips.insert(v, flips.clone());
                }
            }
            util::better_witness(best, (cost, plan));
        }
        return;
    }
    for (ci, choice) in choices[vi].iter().enumerate() {
        picks[vi] = ci;
        let mut next_pos = pos.clone();
        let mut next_neg = neg.clone();
        match choice.delta {
            1 => next_pos += &weights[vi],
            -1 => next_neg += &weights[vi],
            _ => {}
        }
        weighted_search(
            choices,
            weights,
            budget,
            vi + 1,
            &cost + &choice.cost,
            next_pos,
            next_neg,
            picks,
            best,
        );
    }
}

/// Plurality and 1-approval: only tops matter. For a fixed target, the
/// optimal plan gives each bribed voter either the target as new top
/// (cheapest such flip set is forced row by row) or, for supporters of the
/// hated candidate, some other new top. Re-landing a bribed voter on the
/// cheapest useful top never raises the cost under any scheme — the forced
/// rows are mandatory and every scheme prices supersets at least as high,
/// while the rank-distance price depends only on the landing itself — so
/// these menus are complete.
fn engine_top(
    inst: &BriberyInstance,
    limits: &BruteForceLimits,
    par: bool,
) -> Result<SolveResult, SolveError> {
    let m = inst.m();
    let n = inst.n();
    if m > limits.max_issues {
        return Err(SolveError::LimitsExceeded(format!(
            "{m} issues exceed the cap of {}",
            limits.max_issues
        )));
    }
    if m >= usize::BITS as usize || (1usize << m) > (1 << 14) {
        return Err(SolveError::LimitsExceeded(format!(
            "cannot enumerate 2^{m} candidates"
        )));
    }
    if n > limits.max_voters {
        return Err(SolveError::LimitsExceeded(format!(
            "{n} voters exceed the cap of {}",
            limits.max_voters
        )));
    }
    let weighted = !inst.profile.is_unweighted();
    let space = 1usize << m;
    if weighted && space > 64 {
        return Err(SolveError::LimitsExceeded(
            "weighted top-choice search supports at most 6 issues".into(),
        ));
    }
    if weighted && n > limits.max_voters.min(12) {
        return Err(SolveError::LimitsExceeded(format!(
            "{n} weighted voters exceed the cap of {}",
            limits.max_voters.min(12)
        )));
    }

    let voters = &inst.profile.voters;
    let h_index = inst.hated.index();
    let tops: Vec<usize> = voters
        .iter()
        .map(|v| v.net.top_candidate().index())
        .collect();
    // Supporters of the hated candidate may be moved anywhere. Under the
    // negative restriction they may not be bribed at all: any useful flip
    // for this engine changes a voter's top, and a supporter's top must
    // stay put. Other voters are unconstrained (they never approved the
    // hated candidate under a top-choice rule).
    let bribable: Vec<bool> = (0..n)
        .map(|vi| !(inst.negative && tops[vi] == h_index))
        .collect();

    // For each supporter of the hated candidate, the cheapest few new
    // tops. Three suffice: at most one entry is the current target and at
    // most one is the hated candidate itself (none is, in fact), so the
    // cheapest usable entry survives truncation for every target.
    let away: Vec<Vec<(BigUint, usize, BTreeSet<FlipRef>)>> = (0..n)
        .map(|vi| {
            if tops[vi] != h_index || !bribable[vi] {
                return Vec::new();
            }
            let voter = &voters[vi];
            let mut list: Vec<(BigUint, usize, BTreeSet<FlipRef>)> = (0..space)
                .filter(|&t| t != h_index)
                .filter_map(|t| {
                    let target = Candidate::from_index(m, t);
                    let flips = util::make_top_flips(&voter.net, &target);
                    util::flips_action_legal(&voter.net, inst.action, &flips).then(|| {
                        (
                            inst.voter_base_cost(vi, &flips) * &voter.cost_factor,
                            t,
                            flips,
                        )
                    })
                })
                .collect();
            list.sort();
            list.truncate(3);
            list
        })
        .collect();

    let weights: Vec<BigUint> = voters.iter().map(|v| v.weight.clone()).collect();
    let mut scores = vec![0usize; space];
    for &top in &tops {
        scores[top] += 1;
    }
    debug_assert!(weighted || scores.iter().all(|&s| s <= scores[h_index]));

    let eval = |c_index: usize| -> Option<(BigUint, FlipPlan)> {
        if c_index == h_index {
            return None;
        }
        let c = Candidate::from_index(m, c_index);
        let to_c: Vec<Option<(BigUint, BTreeSet<FlipRef>)>> = (0..n)
            .map(|vi| {
                if !bribable[vi] || tops[vi] == c_index {
                    return None;
                }
                let voter = &voters[vi];
                let flips = util::make_top_flips(&voter.net, &c);
                util::flips_action_legal(&voter.net, inst.action, &flips)
                    .then(|| (inst.voter_base_cost(vi, &flips) * &voter.cost_factor, flips))
            })
            .collect();
        let away_pick: Vec<Option<&(BigUint, usize, BTreeSet<FlipRef>)>> = (0..n)
            .map(|vi| away[vi].iter().find(|(_, t, _)| *t != c_index))
            .collect();
        if weighted {
            let choices: Vec<Vec<WeightedChoice>> = (0..n)
                .map(|vi| {
                    let keep_delta = (tops[vi] == c_index) as i8 - (tops[vi] == h_index) as i8;
                    let mut list = vec![WeightedChoice {
                        cost: BigUint::zero(),
                        delta: keep_delta,
                        flips: BTreeSet::new(),
                    }];
                    if let Some((cost, flips)) = &to_c[vi] {
                        list.push(WeightedChoice {
                            cost: cost.clone(),
                            delta: 1,
                            flips: flips.clone(),
                        });
                    }
                    if let Some((cost, _, flips)) = away_pick[vi] {
                        list.push(WeightedChoice {
                            cost: cost.clone(),
                            delta: 0,
                            flips: flips.clone(),
                        });
                    }
                    list
                })
                .collect();
            weighted_best(&choices, &weights, &inst.budget)
        } else {
            let deficit = scores[h_index] - scores[c_index] + 1;
            let options: Vec<Vec<util::MoveOption>> = (0..n)
                .map(|vi| {
                    let mut opts = Vec::new();
                    if let Some((cost, flips)) = &to_c[vi] {
                        opts.push(util::MoveOption {
                            gain: 1 + (tops[vi] == h_index) as usize,
                            cost: cost.clone(),
                            flips: flips.clone(),
                        });
                    }
                    if let Some((cost, _, flips)) = away_pick[vi] {
                        opts.push(util::MoveOption {
                            gain: 1,
                            cost: cost.clone(),
                            flips: flips.clone(),
                        });
                    }
                    opts
                })
                .collect();
            let (cost, picks) = util::min_cost_cover(&options, deficit)?;
            Some((cost, util::plan_from_picks(&options, &picks)))
        }
    };
    let best = best_over_targets(space, par, eval);
    Ok(util::conclude(inst, best, METHOD))
}

/// Veto and k-approval (listed or prefix regime): a voter's ballot is its
/// approval set, and the approval set is a function of the voter's net
/// alone. Enumerating every subset of a voter's editable rows therefore
/// yields that voter's complete move menu; each entry is reduced to a
/// candidate-set bitmask plus its price, and targets are searched over the
/// menus.
fn engine_approval(
    inst: &BriberyInstance,
    limits: &BruteForceLimits,
    par: bool,
) -> Result<SolveResult, SolveError> {
    let m = inst.m();
    let n = inst.n();
    if m > limits.max_issues {
        return Err(SolveError::LimitsExceeded(format!(
            "{m} issues exceed the cap of {}",
            limits.max_issues
        )));
    }
    if m > 7 {
        return Err(SolveError::LimitsExceeded(
            "approval-set search supports at most 7 issues".into(),
        ));
    }
    if n > limits.max_voters {
        return Err(SolveError::LimitsExceeded(format!(
            "{n} voters exceed the cap of {}",
            limits.max_voters
        )));
    }
    let weighted = !inst.profile.is_unweighted();
    if weighted && n > limits.max_voters.min(12) {
        return Err(SolveError::LimitsExceeded(format!(
            "{n} weighted voters exceed the cap of {}",
            limits.max_voters.min(12)
        )));
    }
    let space = 1usize << m;
    let voters = &inst.profile.voters;
    let h_index = inst.hated.index();

    let editable: Vec<Vec<FlipRef>> = voters
        .iter()
        .map(|voter| {
            voter
                .net
                .tables
                .iter()
                .enumerate()
                .filter(|(_, table)| inst.action.allows(table.parents.len()))
                .flat_map(|(issue, table)| {
                    (0..table.row_count()).map(move |row| FlipRef { issue, row })
                })
                .collect()
        })
        .collect();
    let total_rows: usize = editable.iter().map(Vec::len).sum();
    if total_rows > limits.max_rows {
        return Err(SolveError::LimitsExceeded(format!(
            "{total_rows} editable rows exceed the cap of {}",
            limits.max_rows
        )));
    }
    let work: u64 = editable
        .iter()
        .map(|rows| (1u64 << rows.len().min(63)).saturating_mul(space as u64))
        .sum();
    if work > (1 << 22) {
        return Err(SolveError::LimitsExceeded(
            "per-voter flip subsets are too numerous to enumerate".into(),
        ));
    }

    let global_order = inst.global_order.as_deref();
    let base_masks: Vec<u128> = voters
        .iter()
        .map(|voter| approval_mask(&voter.net, &inst.rule, m, global_order))
        .collect();

    // Per-voter menus: every subset of editable rows, reduced to the
    // approval mask it produces. Entries priced over the budget can never
    // be part of a within-budget plan and are dropped; under the negative
    // restriction, entries that withdraw an existing approval of the hated
    // candidate are forbidden outright.
    let menus: Vec<Vec<(u128, BigUint, BTreeSet<FlipRef>)>> = (0..n)
        .map(|vi| {
            let rows = &editable[vi];
            let orig_h = base_masks[vi] >> h_index & 1 == 1;
            let mut menu = Vec::with_capacity(1 << rows.len());
            for bits in 0..(1usize << rows.len()) {
                let flips: BTreeSet<FlipRef> = rows
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| bits >> i & 1 == 1)
                    .map(|(_, &flip)| flip)
                    .collect();
                let (mask, cost) = if flips.is_empty() {
                    (base_masks[vi], BigUint::zero())
                } else {
                    let bribed = apply_flips(&voters[vi].net, &flips);
                    let mask = approval_mask(&bribed, &inst.rule, m, global_order);
                    let cost = inst.voter_base_cost(vi, &flips) * &voters[vi].cost_factor;
                    (mask, cost)
                };
                if !flips.is_empty() && cost > inst.budget {
                    continue;
                }
                if inst.negative && orig_h && mask >> h_index & 1 == 0 {
                    continue;
                }
                menu.push((mask, cost, flips));
            }
            menu
        })
        .collect();

    let weights: Vec<BigUint> = voters.iter().map(|v| v.weight.clone()).collect();
    let scores: Vec<usize> = (0..space)
        .map(|t| {
            base_masks
                .iter()
                .filter(|&&mask| mask >> t & 1 == 1)
                .count()
        })
        .collect();
    debug_assert!(weighted || scores.iter().all(|&s| s <= scores[h_index]));

    let delta_of = |mask: u128, c_index: usize| -> i8 {
        (mask >> c_index & 1) as i8 - (mask >> h_index & 1) as i8
    };

    let eval = |c_index: usize| -> Option<(BigUint, FlipPlan)> {
        if c_index == h_index {
            return None;
        }
        // For each voter, only the cheapest menu entry per achievable
        // margin improvement matters.
        let mut improvements: Vec<[Option<(&BigUint, &BTreeSet<FlipRef>)>; 2]> = Vec::new();
        for vi in 0..n {
            let d0 = delta_of(base_masks[vi], c_index);
            let mut best: [Option<(&BigUint, &BTreeSet<FlipRef>)>; 2] = [None, None];
            for (mask, cost, flips) in &menus[vi] {
                let gain = delta_of(*mask, c_index) - d0;
                if gain != 1 && gain != 2 {
                    continue;
                }
                let slot = &mut best[(gain - 1) as usize];
                let candidate = (cost, flips);
                if slot.map_or(true, |held| candidate < held) {
                    *slot = Some(candidate);
                }
            }
            improvements.push(best);
        }
        if weighted {
            let choices: Vec<Vec<WeightedChoice>> = (0..n)
                .map(|vi| {
                    let d0 = delta_of(base_masks[vi], c_index);
                    let mut list = vec![WeightedChoice {
                        cost: BigUint::zero(),
                        delta: d0,
                        flips: BTreeSet::new(),
                    }];
                    for (gain, slot) in improvements[vi].iter().enumerate() {
                        if let Some((cost, flips)) = slot {
                            list.push(WeightedChoice {
                                cost: (*cost).clone(),
                                delta: d0 + gain as i8 + 1,
                                flips: (*flips).clone(),
                            });
                        }
                    }
                    list
                })
                .collect();
            weighted_best(&choices, &weights, &inst.budget)
        } else {
            let deficit = scores[h_index] - scores[c_index] + 1;
            let options: Vec<Vec<util::MoveOption>> = (0..n)
                .map(|vi| {
                    improvements[vi]
                        .iter()
                        .enumerate()
                        .filter_map(|(gain, slot)| {
                            slot.map(|(cost, flips)| util::MoveOption {
                                gain: gain + 1,
                                cost: cost.clone(),
                                flips: flips.clone(),
                            })
                        })
                        .collect()
                })
                .collect();
            let (cost, picks) = util::min_cost_cover(&options, deficit)?;
            Some((cost, util::plan_from_picks(&options, &picks)))
        }
    };
    let best = best_over_targets(space, par, eval);
    Ok(util::conclude(inst, best, METHOD))
}

/// The candidates `net` approves of under `rule`, as a bitmask indexed by
/// candidate index. Matches the scoring carve-outs of the voting module:
/// ranks are a bijection, so "rank below k" reproduces the top-only,
/// all-but-worst, and everyone cases exactly.
fn approval_mask(net: &CpNet, rule: &VotingRule, m: usize, global_order: Option<&[usize]>) -> u128 {
    let space = 1usize << m;
    let full: u128 = if space == 128 {
        u128::MAX
    } else {
        (1u128 << space) - 1
    };
    match rule {
        VotingRule::Veto => full & !(1u128 << net.worst_candidate().index()),
        VotingRule::KApproval(KApprovalMode::Listed { k }) => {
            if *k >= pow2(m) {
                return full;
            }
            let mut mask = 0u128;
            for t in 0..space {
                if net.rank_of(&Candidate::from_index(m, t)) < *k {
                    mask |= 1u128 << t;
                }
            }
            mask
        }
        VotingRule::KApproval(KApprovalMode::PrefixBlock { free_issues }) => {
            let order = global_order.expect("validated instance has a global order");
            let fixed = m - free_issues;
            let top = net.top_candidate();
            let mut mask = 0u128;
            for t in 0..space {
                let c = Candidate::from_index(m, t);
                if order[..fixed].iter().all(|&issue| c.get(issue) == top.get(issue)) {
                    mask |= 1u128 << t;
                }
            }
            mask
        }
        VotingRule::Plurality | VotingRule::SequentialMajority => {
            unreachable!("approval engine only handles approval-style rules")
        }
    }
}

/// Sequential majority: the hated candidate survives exactly as long as it
/// wins every issue-by-issue step in its own context, so a successful plan
/// must overturn some step, and overturning step `j` only needs flips of
/// the hated-context row at that issue. A single such flip is also the
/// cheapest way to switch a voter under every scheme: the row is mandatory,
/// and any flip set containing it lands the voter's new top either on the
/// overturned bit (paying at least that issue's rank weight) or on an
/// earlier deviation that weighs even more.
fn engine_steps(
    inst: &BriberyInstance,
    limits: &BruteForceLimits,
    par: bool,
) -> Result<SolveResult, SolveError> {
    let order = inst
        .global_order
        .clone()
        .expect("validated instance has a global order");
    let m = inst.m();
    let n = inst.n();
    if n > limits.max_voters {
        return Err(SolveError::LimitsExceeded(format!(
            "{n} voters exceed the cap of {}",
            limits.max_voters
        )));
    }
    let weighted = !inst.profile.is_unweighted();
    let voters = &inst.profile.voters;
    let h = &inst.hated;
    let h_tops: Vec<bool> = voters
        .iter()
        .map(|v| v.net.top_candidate() == *h)
        .collect();

    struct Step {
        h_bit: bool,
        lead: BigUint,
        // (cost, voter, flip) for each voter whose vote at this step can
        // legally be switched away from the hated candidate's bit.
        switchable: Vec<(BigUint, usize, FlipRef)>,
    }

    let mut steps = Vec::with_capacity(m);
    for &issue in &order {
        let h_bit = h.get(issue);
        let mut agree = BigUint::zero();
        let mut disagree = BigUint::zero();
        let mut switchable = Vec::new();
        for (vi, voter) in voters.iter().enumerate() {
            let table = &voter.net.tables[issue];
            if table.pref_given(h) == h_bit {
                agree += &voter.weight;
                let allowed = inst.action.allows(table.parents.len())
                    && !(inst.negative && h_tops[vi]);
                if allowed {
                    let flip = FlipRef {
                        issue,
                        row: table.row_for(h),
                    };
                    let cost =
                        inst.voter_base_cost(vi, &BTreeSet::from([flip])) * &voter.cost_factor;
                    switchable.push((cost, vi, flip));
                }
            } else {
                disagree += &voter.weight;
            }
        }
        // The hated candidate wins every step before any bribery; ties go
        // to the bit it holds only when that bit is the tie-break value.
        debug_assert!(if h_bit {
            agree >= disagree
        } else {
            agree > disagree
        });
        switchable.sort();
        if weighted && switchable.len() > 12 {
            return Err(SolveError::LimitsExceeded(format!(
                "{} switchable voters at one step exceed the weighted cap of 12",
                switchable.len()
            )));
        }
        steps.push(Step {
            h_bit,
            lead: agree - disagree,
            switchable,
        });
    }

    let weights: Vec<BigUint> = voters.iter().map(|v| v.weight.clone()).collect();
    let eval = |j: usize| -> Option<(BigUint, FlipPlan)> {
        let step = &steps[j];
        if weighted {
            let s = step.switchable.len();
            let mut best: Option<(BigUint, u32)> = None;
            for subset in 0..(1u32 << s) {
                let mut cost = BigUint::zero();
                let mut moved = BigUint::zero();
                for (i, entry) in step.switchable.iter().enumerate() {
                    if subset >> i & 1 == 1 {
                        cost += &entry.0;
                        moved += &weights[entry.1];
                    }
                }
                // Switching weight W turns the step tally from
                // lead to lead - 2W; the hated bit keeps winning a tie
                // only where it is the tie-break value.
                let doubled = &moved * 2u8;
                let enough = if step.h_bit {
                    doubled > step.lead
                } else {
                    doubled >= step.lead
                };
                if enough {
                    let candidate = (cost, subset);
                    if best.as_ref().map_or(true, |held| candidate < *held) {
                        best = Some(candidate);
                    }
                }
            }
            let (cost, subset) = best?;
            let mut plan = FlipPlan::default();
            for (i, (_, vi, flip)) in step.switchable.iter().enumerate() {
                if subset >> i & 1 == 1 {
                    plan.flips.insert(*vi, BTreeSet::from([*flip]));
                }
            }
            Some((cost, plan))
        } else {
            let lead = voting::try_to_usize(&step.lead).expect("unweighted leads fit in usize");
            let needed = if step.h_bit {
                lead / 2 + 1
            } else {
                (lead + 1) / 2
            };
            if step.switchable.len() < needed {
                return None;
            }
            let mut cost = BigUint::zero();
            let mut plan = FlipPlan::default();
            for (entry_cost, vi, flip) in step.switchable.iter().take(needed) {
                cost += entry_cost;
                plan.flips.insert(*vi, BTreeSet::from([*flip]));
            }
            Some((cost, plan))
        }
    };
    let best = best_over_targets(m, par, eval);
    Ok(util::conclude(inst, best, METHOD))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bribery::{BriberyAction, CostScheme, PlanOutcome};
    use crate::cpnet::{CpNet, CpTable, IssueSet, Profile, Voter};
    use crate::testutil::*;
    use crate::voting::winner_sm;
    use num_traits::One;

    fn limits() -> BruteForceLimits {
        BruteForceLimits::default()
    }

    fn meal_instance(rule: VotingRule, scheme: CostScheme, budget: u32) -> BriberyInstance {
        BriberyInstance {
            profile: table2_profile(),
            rule,
            action: BriberyAction::Both,
            scheme,
            budget: BigUint::from(budget),
            hated: cand(&[1, 0, 0]),
            negative: false,
            global_order: Some(meal_global_order()),
        }
    }

    fn unit_issue_profile(prefs: &[bool]) -> Profile {
        let voters = prefs
            .iter()
            .map(|&p| Voter::new(CpNet::new(vec![CpTable::independent(0, p)], Some(vec![0]))))
            .collect();
        Profile::new(IssueSet::anonymous(1), voters)
    }

    #[test]
    fn plurality_flip_bribery_of_the_meal_profile_costs_one() {
        let inst = meal_instance(VotingRule::Plurality, CostScheme::Flip, 1);
        let yes = brute_force_solve(&inst, &limits()).unwrap();
        assert!(yes.decision);
        assert_eq!(yes.cost, Some(BigUint::one()));
        assert_eq!(
            inst.plan_outcome(yes.plan.as_ref().unwrap()),
            PlanOutcome::Success
        );

        let broke = meal_instance(VotingRule::Plurality, CostScheme::Flip, 0);
        assert!(!brute_force_solve(&broke, &limits()).unwrap().decision);
    }

    #[test]
    fn parallel_and_sequential_runs_agree() {
        let cases = [
            (VotingRule::Plurality, CostScheme::Flip, 1u32),
            (VotingRule::Veto, CostScheme::Equal, 2),
            (
                VotingRule::KApproval(KApprovalMode::Listed {
                    k: BigUint::from(3u32),
                }),
                CostScheme::Level,
                3,
            ),
            (VotingRule::SequentialMajority, CostScheme::Dist, 2),
        ];
        for (rule, scheme, budget) in cases {
            let inst = meal_instance(rule, scheme, budget);
            assert_eq!(
                brute_force_solve(&inst, &limits()).unwrap(),
                brute_force_solve_seq(&inst, &limits()).unwrap(),
            );
        }
    }

    #[test]
    fn veto_retargeting_pays_for_two_bribes() {
        let inst = BriberyInstance {
            profile: unit_issue_profile(&[true, true, true, false]),
            rule: VotingRule::Veto,
            action: BriberyAction::Both,
            scheme: CostScheme::Equal,
            budget: BigUint::from(2u32),
            hated: cand(&[1]),
            negative: false,
            global_order: None,
        };
        let result = brute_force_solve(&inst, &limits()).unwrap();
        assert!(result.decision);
        assert_eq!(result.cost, Some(BigUint::from(2u32)));
        assert_eq!(
            inst.plan_outcome(result.plan.as_ref().unwrap()),
            PlanOutcome::Success
        );

        let tight = BriberyInstance {
            budget: BigUint::one(),
            ..inst
        };
        assert!(!brute_force_solve(&tight, &limits()).unwrap().decision);
    }

    #[test]
    fn sequential_majority_bribery_costs_one_on_the_meal_profile() {
        let profile = table2_profile();
        let order = meal_global_order();
        let hated = winner_sm(&profile, &order).unwrap();
        let inst = BriberyInstance {
            profile,
            rule: VotingRule::SequentialMajority,
            action: BriberyAction::Both,
            scheme: CostScheme::Equal,
            budget: BigUint::one(),
            hated,
            negative: false,
            global_order: Some(order),
        };
        let result = brute_force_solve(&inst, &limits()).unwrap();
        assert!(result.decision);
        assert_eq!(result.cost, Some(BigUint::one()));
        assert_eq!(
            inst.plan_outcome(result.plan.as_ref().unwrap()),
            PlanOutcome::Success
        );
    }

    #[test]
    fn negative_rules_out_bribing_unanimous_supporters() {
        let inst = BriberyInstance {
            profile: unit_issue_profile(&[true, true]),
            rule: VotingRule::Plurality,
            action: BriberyAction::Both,
            scheme: CostScheme::Equal,
            budget: BigUint::from(100u32),
            hated: cand(&[1]),
            negative: true,
            global_order: None,
        };
        assert!(!brute_force_solve(&inst, &limits()).unwrap().decision);

        let relaxed = BriberyInstance {
            negative: false,
            ..inst
        };
        let result = brute_force_solve(&relaxed, &limits()).unwrap();
        assert!(result.decision);
        assert_eq!(result.cost, Some(BigUint::from(2u32)));
    }

    #[test]
    fn oversized_instances_are_refused() {
        let m = 6;
        let tables = (0..m).map(|i| CpTable::independent(i, true)).collect();
        let net = CpNet::new(tables, Some((0..m).collect()));
        let inst = BriberyInstance {
            profile: Profile::new(IssueSet::anonymous(m), vec![Voter::new(net)]),
            rule: VotingRule::Plurality,
            action: BriberyAction::Both,
            scheme: CostScheme::Equal,
            budget: BigUint::one(),
            hated: cand(&[1, 1, 1, 1, 1, 1]),
            negative: false,
            global_order: None,
        };
        assert!(matches!(
            brute_force_solve(&inst, &limits()),
            Err(SolveError::LimitsExceeded(_))
        ));
    }

    #[test]
    fn invalid_instances_are_rejected() {
        let inst = BriberyInstance {
            profile: table2_profile(),
            rule: VotingRule::Plurality,
            action: BriberyAction::Both,
            scheme: CostScheme::Equal,
            budget: BigUint::one(),
            hated: cand(&[1]),
            negative: false,
            global_order: None,
        };
        assert!(matches!(
            brute_force_solve(&inst, &limits()),
            Err(SolveError::InvalidInstance(_))
        ));
    }
}
