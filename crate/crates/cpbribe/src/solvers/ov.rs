//! Polynomial solver for veto voting with unweighted voters, all bribery
//! actions, and all cost schemes.
//!
//! A voter's veto is their bottom candidate, and the winners veto-count
//! minimum. Making a candidate someone's bottom has a mandatory, minimal
//! flip set (one row per issue), so every way of retargeting one voter's
//! veto has a closed-form price. With fewer voters than candidates the
//! hated candidate `h` only wins with zero vetoes, and then giving it a
//! single veto both suffices and is unavoidable. Otherwise the solver
//! tries every candidate `c` as the overtaking rival and covers the veto
//! deficit with per-voter retargeting options.

use crate::bribery::{BriberyInstance, FlipPlan};
use crate::cpnet::{pow2, Candidate};
use crate::solvers::{util, SolveError, SolveResult};
use num_bigint::BigUint;
use std::collections::BTreeMap;

const METHOD: &str = "ov_retarget";

pub(crate) fn solve(inst: &BriberyInstance) -> Result<SolveResult, SolveError> {
    debug_assert!(inst.profile.is_unweighted());
    if let Some(result) = util::already_lost(inst)? {
        return Ok(result);
    }
    let m = inst.m();
    let n = inst.n();
    let h = &inst.hated;

    let worsts: Vec<Candidate> = inst
        .profile
        .voters
        .iter()
        .map(|voter| voter.net.worst_candidate())
        .collect();
    let mut veto_counts: BTreeMap<&Candidate, usize> = BTreeMap::new();
    for worst in &worsts {
        *veto_counts.entry(worst).or_default() += 1;
    }
    let vetoes_h = veto_counts.get(h).copied().unwrap_or(0);

    if inst.negative && vetoes_h == 0 {
        // Every voter approves h, so no legal bribe may turn h into a
        // veto; h keeps the minimum count and co-wins forever.
        return Ok(SolveResult::no(METHOD));
    }

    if BigUint::from(n) < pow2(m) {
        // h wins with zero vetoes (otherwise some candidate with no veto
        // would already beat it), and after any successful bribery some
        // voter must veto h — which requires that voter's full mandatory
        // flip set. One such voter also suffices: afterwards some
        // candidate still has no veto.
        debug_assert_eq!(vetoes_h, 0);
        let mut best: Option<(BigUint, FlipPlan)> = None;
        for (vi, voter) in inst.profile.voters.iter().enumerate() {
            let flips = util::make_bottom_flips(&voter.net, h);
            if !util::flips_action_legal(&voter.net, inst.action, &flips) {
                continue;
            }
            let price = inst.voter_base_cost(vi, &flips) * &voter.cost_factor;
            let mut plan = FlipPlan::default();
            plan.flips.insert(vi, flips);
            util::better_witness(&mut best, (price, plan));
        }
        return Ok(util::conclude(inst, best, METHOD));
    }

    if m > 20 {
        return Err(SolveError::LimitsExceeded(
            "veto solver enumerates the candidate space, which needs at most 2^20 candidates"
                .into(),
        ));
    }
    let space = 1usize << m;

    // Per voter: price of retargeting the veto to each candidate (None
    // when the action forbids it), and the three cheapest distinct
    // landing candidates — enough to pick a landing outside {c, h} for
    // any target c.
    let mut price_to: Vec<Vec<Option<BigUint>>> = Vec::with_capacity(n);
    let mut cheapest_landings: Vec<Vec<(BigUint, usize)>> = Vec::with_capacity(n);
    for (vi, voter) in inst.profile.voters.iter().enumerate() {
        let mut row = Vec::with_capacity(space);
        for index in 0..space {
            let target = Candidate::from_index(m, index);
            let flips = util::make_bottom_flips(&voter.net, &target);
            if util::flips_action_legal(&voter.net, inst.action, &flips) {
                row.push(Some(inst.voter_base_cost(vi, &flips) * &voter.cost_factor));
            } else {
                row.push(None);
            }
        }
        let mut ranked: Vec<(BigUint, usize)> = row
            .iter()
            .enumerate()
            .filter_map(|(index, price)| price.clone().map(|p| (p, index)))
            .collect();
        ranked.sort();
        ranked.truncate(3);
        price_to.push(row);
        cheapest_landings.push(ranked);
    }

    let h_index = h.index();
    let mut best: Option<(BigUint, FlipPlan)> = None;
    for c_index in 0..space {
        if c_index == h_index {
            continue;
        }
        let c = Candidate::from_index(m, c_index);
        let vetoes_c = veto_counts.get(&c).copied().unwrap_or(0);
        debug_assert!(vetoes_h <= vetoes_c);
        let deficit = vetoes_c - vetoes_h + 1;

        let options: Vec<Vec<util::MoveOption>> = inst
            .profile
            .voters
            .iter()
            .enumerate()
            .map(|(vi, voter)| {
                let mut opts = Vec::new();
                let worst_index = worsts[vi].index();
                if worst_index == c_index {
                    if !inst.negative {
                        if let Some(price) = &price_to[vi][h_index] {
                            opts.push(util::MoveOption {
                                gain: 2,
                                cost: price.clone(),
                                flips: util::make_bottom_flips(&voter.net, h),
                            });
                        }
                    }
                    if let Some((price, landing)) = cheapest_landings[vi]
                        .iter()
                        .find(|(_, landing)| *landing != c_index && *landing != h_index)
                    {
                        opts.push(util::MoveOption {
                            gain: 1,
                            cost: price.clone(),
                            flips: util::make_bottom_flips(
                                &voter.net,
                                &Candidate::from_index(m, *landing),
                            ),
                        });
                    }
                } else if worst_index != h_index && !inst.negative {
                    if let Some(price) = &price_to[vi][h_index] {
                        opts.push(util::MoveOption {
                            gain: 1,
                            cost: price.clone(),
                            flips: util::make_bottom_flips(&voter.net, h),
                        });
                    }
                }
                opts
            })
            .collect();

        if let Some((cost, picks)) = util::min_cost_cover(&options, deficit) {
            let plan = util::plan_from_picks(&options, &picks);
            util::better_witness(&mut best, (cost, plan));
        }
    }
    Ok(util::conclude(inst, best, METHOD))
}
