//! Polynomial solver for sequential majority voting with unweighted
//! voters, all bribery actions, and all cost schemes.
//!
//! The hated candidate `h` wins iff at every step of the global order the
//! majority vote, taken in the context of `h`'s earlier values, equals
//! `h`'s value there (ties defer to the first-listed value). So a bribery
//! succeeds iff it breaks one step: the solver tries every step, and at a
//! step it suffices to flip single rows — the row each switched voter's
//! table reads in `h`'s context — because any costlier way of changing
//! that vote prices at least as much under every scheme.

use crate::bribery::{BriberyInstance, FlipRef};
use crate::solvers::{util, SolveError, SolveResult};
use num_bigint::BigUint;
use std::collections::BTreeSet;

const METHOD: &str = "sm_step_break";

pub(crate) fn solve(inst: &BriberyInstance) -> Result<SolveResult, SolveError> {
    debug_assert!(inst.profile.is_unweighted());
    if let Some(result) = util::already_lost(inst)? {
        return Ok(result);
    }
    let order = inst
        .global_order
        .as_ref()
        .expect("validation requires a global order for sequential majority");
    let h = &inst.hated;

    let mut best: Option<(BigUint, crate::bribery::FlipPlan)> = None;
    for &issue in order {
        let h_bit = h.get(issue);
        // Votes at this step, in h's context.
        let votes: Vec<bool> = inst
            .profile
            .voters
            .iter()
            .map(|voter| voter.net.tables[issue].pref_given(h))
            .collect();
        let agree = votes.iter().filter(|&&b| b == h_bit).count();
        let disagree = votes.len() - agree;
        // h survives this step right now (it wins overall), so:
        //   h_bit = 1: agree >= disagree; break needs final ones < zeros.
        //   h_bit = 0: agree >  disagree; break needs final ones >= zeros.
        let lead = agree - disagree;
        let switches_needed = if h_bit { (lead + 2) / 2 } else { (lead + 1) / 2 };
        debug_assert!(switches_needed >= 1);

        // Who can be switched away from h_bit at this step, and at what
        // price? Flipping exactly the row the voter reads in h's context
        // is optimal under every cost scheme.
        let mut candidates: Vec<(BigUint, usize, FlipRef)> = Vec::new();
        for (vi, voter) in inst.profile.voters.iter().enumerate() {
            if votes[vi] != h_bit {
                continue;
            }
            let table = &voter.net.tables[issue];
            if !inst.action.allows(table.parents.len()) {
                continue;
            }
            let flip = FlipRef {
                issue,
                row: table.row_for(h),
            };
            if inst.negative && inst.supports_hated(&voter.net) {
                // Supporters' tops agree with h everywhere along h's
                // context, so this row lies on their top path: flipping
                // it changes their top away from h, which negative
                // bribery forbids.
                continue;
            }
            let flips: BTreeSet<FlipRef> = [flip].into_iter().collect();
            let price = inst.voter_base_cost(vi, &flips) * &voter.cost_factor;
            candidates.push((price, vi, flip));
        }
        if candidates.len() < switches_needed {
            continue;
        }
        candidates.sort();
        let mut plan = crate::bribery::FlipPlan::default();
        let mut total = BigUint::default();
        for (price, vi, flip) in candidates.into_iter().take(switches_needed) {
            total += price;
            plan.add(vi, flip.issue, flip.row);
        }
        util::better_witness(&mut best, (total, plan));
    }
    Ok(util::conclude(inst, best, METHOD))
}
