//! Exact special-case solver for veto voting with weighted voters,
//! dependent-row flips only, and rank-distance costs.
//!
//! Under this combination a legal veto retarget is very often free: the
//! mandatory flips sit on the new bottom's context rows, and when those
//! rows avoid the voter's top path the top — and with it the rank-
//! distance price — does not move. The solver answers exactly whenever
//! free moves alone decide the instance (always the case with two
//! issues), and hands anything that would need priced moves back to the
//! caller as `None`.
//!
//! Within the free regime the decision is exact because voters choose
//! landings independently. Fix a rival `c`: a voter with a free legal
//! landing on the hated candidate best sits there (raising its veto count
//! while staying off `c`); any other voter avoids `c` whenever its free
//! set holds an alternative; only voters whose entire free set is `{c}`
//! must stay. The hated candidate can therefore be dethroned freely iff
//! for some rival the stuck weight is strictly below the weight that can
//! pile onto the hated candidate.

use crate::bribery::{BriberyInstance, FlipPlan};
use crate::cpnet::Candidate;
use crate::solvers::{util, SolveResult};
use num_bigint::BigUint;
use num_traits::Zero;

const METHOD: &str = "weighted_ov_free_moves";

pub(crate) fn solve(inst: &BriberyInstance) -> Option<SolveResult> {
    match util::already_lost(inst) {
        Ok(Some(result)) => return Some(result),
        Ok(None) => {}
        Err(_) => return None,
    }
    let m = inst.m();
    if m > 12 {
        return None;
    }
    let space = 1usize << m;
    let h_index = inst.hated.index();

    let worst_indices: Vec<usize> = inst
        .profile
        .voters
        .iter()
        .map(|voter| voter.net.worst_candidate().index())
        .collect();
    let mut veto_weight: Vec<BigUint> = vec![BigUint::zero(); space];
    for (vi, voter) in inst.profile.voters.iter().enumerate() {
        veto_weight[worst_indices[vi]] += &voter.weight;
    }

    // Per voter and landing candidate: cost of legally retargeting the
    // veto there (None when the dependent-only action cannot do it).
    let mut landing_cost: Vec<Vec<Option<BigUint>>> = Vec::with_capacity(inst.n());
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
        landing_cost.push(row);
    }
    if inst.negative && veto_weight[h_index].is_zero() {
        // Every voter approves h and must keep doing so, which pins
        // h's veto weight at zero — the guaranteed minimum.
        return Some(SolveResult::no(METHOD));
    }

    // A landing on h is illegal in negative mode for voters not already
    // vetoing h, at any price.
    let legal = |vi: usize, index: usize| -> bool {
        !(inst.negative && index == h_index && worst_indices[vi] != h_index)
    };
    // Free landing sets. Staying put is always free, so none is empty.
    let free_sets: Vec<Vec<usize>> = (0..inst.n())
        .map(|vi| {
            (0..space)
                .filter(|&index| {
                    legal(vi, index)
                        && matches!(&landing_cost[vi][index], Some(cost) if cost.is_zero())
                })
                .collect()
        })
        .collect();
    // Any affordable priced landing leaves the free regime: hand the
    // instance back rather than answer no.
    let priced_useful = (0..inst.n()).any(|vi| {
        (0..space).any(|index| {
            legal(vi, index)
                && matches!(&landing_cost[vi][index],
                    Some(cost) if !cost.is_zero() && *cost <= inst.budget)
        })
    });

    for c_index in 0..space {
        if c_index == h_index {
            continue;
        }
        // Best free configuration against rival c: everyone who can sit
        // on h does; everyone else dodges c if their free set allows it.
        let mut gain_h = BigUint::zero();
        let mut forced_c = BigUint::zero();
        for (vi, voter) in inst.profile.voters.iter().enumerate() {
            if free_sets[vi].contains(&h_index) {
                gain_h += &voter.weight;
            } else if free_sets[vi].iter().all(|&d| d == c_index) {
                forced_c += &voter.weight;
            }
        }
        if forced_c >= gain_h {
            continue;
        }
        let mut plan = FlipPlan::default();
        for (vi, voter) in inst.profile.voters.iter().enumerate() {
            let landing = if free_sets[vi].contains(&h_index) {
                h_index
            } else if worst_indices[vi] == c_index {
                match free_sets[vi].iter().find(|&&d| d != c_index) {
                    Some(&dodge) => dodge,
                    None => continue, // stuck on c
                }
            } else {
                continue; // already off both c and h; staying is fine
            };
            let flips = util::make_bottom_flips(&voter.net, &Candidate::from_index(m, landing));
            if !flips.is_empty() {
                plan.flips.insert(vi, flips);
            }
        }
        debug_assert!(inst.bribery_succeeds(&plan));
        return Some(SolveResult::yes(plan, BigUint::zero(), METHOD));
    }

    if priced_useful {
        None
    } else {
        Some(SolveResult::no(METHOD))
    }
}
