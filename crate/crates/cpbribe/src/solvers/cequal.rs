//! Polynomial solver for plurality and k-approval with unweighted voters,
//! unrestricted flips, and equal costs.
//!
//! Every bribed voter costs exactly their cost factor, so only the
//! *effect* of a bribe matters: how the voter's approvals of a target
//! rival `c` and the hated candidate `h` change. Which effect pairs a
//! voter can reach has a closed form over the issues where `c` and `h`
//! share or split the voter's table rows, and a score deficit is then
//! covered by a small dynamic program over per-voter best effects.

use crate::bribery::{BriberyInstance, FlipPlan, FlipRef};
use crate::cpnet::{pow2, Candidate, CpNet};
use crate::solvers::{util, SolveError, SolveResult};
use crate::voting::{self, KApprovalMode, VotingRule, DEFAULT_K_ENUM_CAP};
use num_bigint::BigUint;
use num_traits::One;
use std::collections::{BTreeMap, BTreeSet};

const METHOD: &str = "equal_cost_cover";

/// Candidate spaces up to this size are enumerated outright as targets.
const FULL_TARGET_ENUM: usize = 1 << 14;

pub(crate) fn solve(inst: &BriberyInstance) -> Result<SolveResult, SolveError> {
    debug_assert!(inst.profile.is_unweighted());
    if let Some(result) = util::already_lost(inst)? {
        return Ok(result);
    }
    match &inst.rule {
        VotingRule::Plurality => listed(inst, 1),
        VotingRule::KApproval(KApprovalMode::Listed { k }) => {
            if *k >= pow2(inst.m()) {
                // Everyone approves every candidate no matter what, so
                // the hated candidate co-wins under any bribery.
                return Ok(SolveResult::no(METHOD));
            }
            match voting::try_to_usize(k) {
                Some(k) if k <= DEFAULT_K_ENUM_CAP => listed(inst, k),
                _ => Err(SolveError::LimitsExceeded(format!(
                    "approval count above the enumeration cap {DEFAULT_K_ENUM_CAP}"
                ))),
            }
        }
        VotingRule::KApproval(KApprovalMode::PrefixBlock { free_issues }) => {
            prefix(inst, *free_issues)
        }
        _ => unreachable!("dispatch routes only approval-style rules here"),
    }
}

/// Issues split by how `c` and `h` read the voter's table: same row with
/// different values, same row with the same value, or different rows.
struct Geometry {
    split: Vec<usize>,
    shared: Vec<usize>,
    apart: Vec<usize>,
    /// The voter's most important issue where `c` and `h` differ; its
    /// parents all agree, so it always sits in `split`.
    lead: usize,
}

fn geometry(net: &CpNet, positions: &[usize], c: &Candidate, h: &Candidate) -> Geometry {
    let mut split = Vec::new();
    let mut shared = Vec::new();
    let mut apart = Vec::new();
    let mut lead = None;
    for (issue, table) in net.tables.iter().enumerate() {
        let differs = c.get(issue) != h.get(issue);
        if differs {
            lead = match lead {
                Some(best) if positions[best] <= positions[issue] => Some(best),
                _ => Some(issue),
            };
        }
        if table.row_for(c) == table.row_for(h) {
            if differs {
                split.push(issue);
            } else {
                shared.push(issue);
            }
        } else {
            apart.push(issue);
        }
    }
    let lead = lead.expect("targets differ from the hated candidate somewhere");
    debug_assert!(split.contains(&lead));
    Geometry {
        split,
        shared,
        apart,
        lead,
    }
}

/// Which (approves-c, approves-h) outcomes one bribed voter can reach.
struct Reachable {
    both: bool,
    only_c: bool,
    neither: bool,
}

fn reachable(net: &CpNet, positions: &[usize], geo: &Geometry, k: &BigUint) -> Reachable {
    let m = net.m();
    let weight = |issue: usize| pow2(m - 1 - positions[issue]);
    let w_lead = weight(geo.lead);
    let w_split: BigUint = geo.split.iter().map(|&t| weight(t)).sum();
    let w_apart: BigUint = geo.apart.iter().map(|&t| weight(t)).sum();
    let w_shared: BigUint = geo.shared.iter().map(|&t| weight(t)).sum();
    let both = w_lead < *k;
    let only_c = &w_split + &w_apart + &shared_fill(positions, geo, m, k) >= *k;
    let neither = w_shared + w_apart + w_split - w_lead >= *k;
    Reachable {
        both,
        only_c,
        neither,
    }
}

/// Largest sum of shared-issue weights not exceeding k-1; weights are
/// distinct powers of two, so the descending greedy is exact.
fn shared_fill(positions: &[usize], geo: &Geometry, m: usize, k: &BigUint) -> BigUint {
    let cap = k - BigUint::one();
    let mut issues: Vec<usize> = geo.shared.clone();
    issues.sort_by_key(|&t| positions[t]);
    let mut sum = BigUint::default();
    for &t in &issues {
        let w = pow2(m - 1 - positions[t]);
        if &sum + &w <= cap {
            sum += w;
        }
    }
    sum
}

/// The shared-issue subset the greedy picks (same order as
/// [`shared_fill`]), for realizing the only-c outcome.
fn shared_fill_set(positions: &[usize], geo: &Geometry, m: usize, k: &BigUint) -> BTreeSet<usize> {
    let cap = k - BigUint::one();
    let mut issues: Vec<usize> = geo.shared.clone();
    issues.sort_by_key(|&t| positions[t]);
    let mut sum = BigUint::default();
    let mut set = BTreeSet::new();
    for &t in &issues {
        let w = pow2(m - 1 - positions[t]);
        if &sum + &w <= cap {
            sum += w;
            set.insert(t);
        }
    }
    set
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Both,
    OnlyC,
    Neither,
}

/// Table rewrites that land the voter on the requested approval outcome,
/// returned as the flips against the current tables.
fn realize(
    net: &CpNet,
    positions: &[usize],
    geo: &Geometry,
    c: &Candidate,
    h: &Candidate,
    k: &BigUint,
    outcome: Outcome,
) -> BTreeSet<FlipRef> {
    let m = net.m();
    let mut flips = BTreeSet::new();
    let mut want = |issue: usize, row: usize, bit: bool| {
        if net.tables[issue].prefs[row] != bit {
            flips.insert(FlipRef { issue, row });
        }
    };
    match outcome {
        Outcome::Both => {
            for &t in &geo.split {
                let row = net.tables[t].row_for(c);
                let bit = if t == geo.lead { c.get(t) } else { h.get(t) };
                want(t, row, bit);
            }
            for &t in &geo.shared {
                want(t, net.tables[t].row_for(c), c.get(t));
            }
            for &t in &geo.apart {
                want(t, net.tables[t].row_for(c), c.get(t));
                want(t, net.tables[t].row_for(h), h.get(t));
            }
        }
        Outcome::OnlyC => {
            let fill = shared_fill_set(positions, geo, m, k);
            for &t in &geo.split {
                want(t, net.tables[t].row_for(c), c.get(t));
            }
            for &t in &geo.shared {
                let bit = c.get(t) != fill.contains(&t);
                want(t, net.tables[t].row_for(c), bit);
            }
            for &t in &geo.apart {
                want(t, net.tables[t].row_for(c), c.get(t));
                want(t, net.tables[t].row_for(h), !h.get(t));
            }
        }
        Outcome::Neither => {
            for &t in &geo.split {
                let row = net.tables[t].row_for(c);
                let bit = if t == geo.lead { h.get(t) } else { c.get(t) };
                want(t, row, bit);
            }
            for &t in &geo.shared {
                want(t, net.tables[t].row_for(c), !c.get(t));
            }
            for &t in &geo.apart {
                want(t, net.tables[t].row_for(c), !c.get(t));
                want(t, net.tables[t].row_for(h), !h.get(t));
            }
        }
    }
    flips
}

fn listed(inst: &BriberyInstance, k: usize) -> Result<SolveResult, SolveError> {
    let h = &inst.hated;
    let k_big = BigUint::from(k);
    let n = inst.n();

    // Approved set per voter: the top-k chain of their order.
    let approved: Vec<BTreeSet<Candidate>> = inst
        .profile
        .voters
        .iter()
        .map(|voter| {
            let mut set = BTreeSet::new();
            let mut cursor = Some(voter.net.top_candidate());
            while set.len() < k {
                let Some(current) = cursor else { break };
                cursor = voter.net.next_best(&current);
                set.insert(current);
            }
            set
        })
        .collect();
    let positions: Vec<Vec<usize>> = inst
        .profile
        .voters
        .iter()
        .map(|voter| voter.net.order_positions())
        .collect();

    let mut scores: BTreeMap<&Candidate, usize> = BTreeMap::new();
    for set in &approved {
        for candidate in set {
            *scores.entry(candidate).or_default() += 1;
        }
    }
    let s_h = scores.get(h).copied().unwrap_or(0);

    let pool = target_pool(inst, &k_big, &approved, &positions)?;

    let mut best: Option<(BigUint, FlipPlan)> = None;
    for c in &pool {
        let s_c = scores.get(c).copied().unwrap_or(0);
        debug_assert!(s_c <= s_h, "h wins, so no rival outscores it");
        let deficit = s_h - s_c + 1;

        let options: Vec<Vec<util::MoveOption>> = (0..n)
            .map(|vi| {
                let voter = &inst.profile.voters[vi];
                let a_c = approved[vi].contains(c);
                let a_h = approved[vi].contains(h);
                let geo = geometry(&voter.net, &positions[vi], c, h);
                let reach = reachable(&voter.net, &positions[vi], &geo, &k_big);
                let start = (a_c as i32) - (a_h as i32);
                let pick = if inst.negative && a_h {
                    // Approval of h must survive the bribe, so the only
                    // useful landing is approving both.
                    (reach.both && !a_c).then_some((Outcome::Both, 1i32))
                } else if reach.only_c && start < 1 {
                    Some((Outcome::OnlyC, 1 - start))
                } else if (reach.both || reach.neither) && start < 0 {
                    let outcome = if reach.both {
                        Outcome::Both
                    } else {
                        Outcome::Neither
                    };
                    Some((outcome, -start))
                } else {
                    None
                };
                match pick {
                    Some((outcome, gain)) => {
                        let flips =
                            realize(&voter.net, &positions[vi], &geo, c, h, &k_big, outcome);
                        debug_assert!(!flips.is_empty());
                        vec![util::MoveOption {
                            gain: gain as usize,
                            cost: voter.cost_factor.clone(),
                            flips,
                        }]
                    }
                    None => Vec::new(),
                }
            })
            .collect();

        if let Some((cost, picks)) = util::min_cost_cover(&options, deficit) {
            let plan = util::plan_from_picks(&options, &picks);
            util::better_witness(&mut best, (cost, plan));
        }
    }
    Ok(util::conclude(inst, best, METHOD))
}

/// Rival candidates worth pricing. Small spaces are enumerated whole;
/// otherwise the pool is every approved candidate, the light-issue
/// approval blocks around `h` of each h-approving voter (the only
/// candidates an h-approver can come to approve alongside h), plus one
/// unapproved candidate far from `h` in Hamming distance — far enough
/// that every voter can be steered to approve it alone, which makes it
/// dominate all other unapproved rivals.
fn target_pool(
    inst: &BriberyInstance,
    k_big: &BigUint,
    approved: &[BTreeSet<Candidate>],
    positions: &[Vec<usize>],
) -> Result<BTreeSet<Candidate>, SolveError> {
    let m = inst.m();
    let h = &inst.hated;
    let mut pool: BTreeSet<Candidate> = BTreeSet::new();
    if m < usize::BITS as usize && (1usize << m) <= FULL_TARGET_ENUM {
        for index in 0..(1usize << m) {
            pool.insert(Candidate::from_index(m, index));
        }
        pool.remove(h);
        return Ok(pool);
    }

    for set in approved {
        pool.extend(set.iter().cloned());
    }
    for vi in 0..inst.n() {
        if !approved[vi].contains(h) {
            continue;
        }
        let light: Vec<usize> = (0..m)
            .filter(|&t| pow2(m - 1 - positions[vi][t]) < *k_big)
            .collect();
        debug_assert!(light.len() <= 12, "k is capped at 4096");
        for mask in 0..(1usize << light.len()) {
            let mut c = h.clone();
            for (j, &t) in light.iter().enumerate() {
                if (mask >> j) & 1 == 1 {
                    c = c.with_bit(t, !h.get(t));
                }
            }
            pool.insert(c);
        }
    }

    // One unapproved rival at Hamming distance >= ceil(log2(k+1)) from h:
    // any d issues carry weight at least 2^d - 1 in every voter order, so
    // such a rival can always be pushed into a voter's approved set with
    // h pushed out.
    let mut distance = 0usize;
    while pow2(distance) < k_big + BigUint::one() {
        distance += 1;
    }
    let flipped_base: Vec<usize> = (0..distance).collect();
    let variants = m - distance;
    let attempts = approved.iter().map(|s| s.len()).sum::<usize>() + 2;
    let mut found = false;
    'scan: for x in 0..attempts {
        if variants < usize::BITS as usize && x >= (1usize << variants) {
            break;
        }
        let mut c = h.clone();
        for &t in &flipped_base {
            c = c.with_bit(t, !h.get(t));
        }
        for j in 0..variants {
            if (x >> j) & 1 == 1 {
                let t = distance + j;
                c = c.with_bit(t, !h.get(t));
            }
        }
        if approved.iter().all(|set| !set.contains(&c)) {
            pool.insert(c);
            found = true;
            break 'scan;
        }
    }
    if !found {
        return Err(SolveError::LimitsExceeded(
            "could not construct an unapproved rival candidate".into(),
        ));
    }
    pool.remove(h);
    Ok(pool)
}

fn prefix(inst: &BriberyInstance, free_issues: usize) -> Result<SolveResult, SolveError> {
    let order = inst
        .global_order
        .as_ref()
        .expect("validation requires a global order for the prefix regime");
    let m = inst.m();
    let h = &inst.hated;
    let mp = m - free_issues;
    if mp == 0 {
        // Every candidate is approved by everyone whatever the tables
        // say, so the hated candidate co-wins under any bribery.
        return Ok(SolveResult::no(METHOD));
    }
    let prefix_of = |c: &Candidate| -> Vec<bool> {
        order[..mp].iter().map(|&t| c.get(t)).collect()
    };
    let h_pre = prefix_of(h);
    let tops: Vec<Vec<bool>> = inst
        .profile
        .voters
        .iter()
        .map(|voter| prefix_of(&voter.net.top_candidate()))
        .collect();
    let mut scores: BTreeMap<&Vec<bool>, usize> = BTreeMap::new();
    for top in &tops {
        *scores.entry(top).or_default() += 1;
    }
    let s_h = scores.get(&h_pre).copied().unwrap_or(0);

    // Target prefixes: all of them when few, else voter tops plus one
    // never-topped representative (all score-zero targets build the same
    // options, so one stands for all).
    let mut pool: BTreeSet<Vec<bool>> = BTreeSet::new();
    if mp < usize::BITS as usize && (1usize << mp) <= FULL_TARGET_ENUM {
        for index in 0..(1usize << mp) {
            pool.insert((0..mp).map(|j| (index >> (mp - 1 - j)) & 1 == 1).collect());
        }
    } else {
        pool.extend(tops.iter().cloned());
        pool.insert(h_pre.iter().map(|b| !b).collect());
        let bit_at = |index: usize, j: usize| -> bool {
            let shift = mp - 1 - j;
            shift < usize::BITS as usize && (index >> shift) & 1 == 1
        };
        for index in 0..=(tops.len() + 1) {
            let candidate: Vec<bool> = (0..mp).map(|j| bit_at(index, j)).collect();
            if candidate != h_pre && !tops.contains(&candidate) {
                pool.insert(candidate);
                break;
            }
        }
    }
    pool.remove(&h_pre);

    let mut best: Option<(BigUint, FlipPlan)> = None;
    for target in &pool {
        let s_c = scores.get(target).copied().unwrap_or(0);
        debug_assert!(s_c <= s_h);
        let deficit = s_h - s_c + 1;
        let options: Vec<Vec<util::MoveOption>> = inst
            .profile
            .voters
            .iter()
            .enumerate()
            .map(|(vi, voter)| {
                let a_c = tops[vi] == *target;
                let a_h = tops[vi] == h_pre;
                if a_c || (inst.negative && a_h) {
                    // Approving both c and h at once is impossible here,
                    // so negative mode freezes h's supporters.
                    return Vec::new();
                }
                let flips = steer_prefix(&voter.net, order, mp, target);
                debug_assert!(!flips.is_empty());
                vec![util::MoveOption {
                    gain: 1 + a_h as usize,
                    cost: voter.cost_factor.clone(),
                    flips,
                }]
            })
            .collect();
        if let Some((cost, picks)) = util::min_cost_cover(&options, deficit) {
            let plan = util::plan_from_picks(&options, &picks);
            util::better_witness(&mut best, (cost, plan));
        }
    }
    Ok(util::conclude(inst, best, METHOD))
}

/// Flips that give the voter a top candidate whose first `mp` global
/// issues spell `target`, touching only rows along the new top's own
/// context (so the flip count is minimal).
fn steer_prefix(
    net: &CpNet,
    order: &[usize],
    mp: usize,
    target: &[bool],
) -> BTreeSet<FlipRef> {
    let m = net.m();
    let mut slot = vec![None::<usize>; m];
    for (position, &issue) in order[..mp].iter().enumerate() {
        slot[issue] = Some(position);
    }
    let topo = net.topo_order().expect("validated nets are acyclic");
    let mut bits = vec![false; m];
    let mut flips = BTreeSet::new();
    for &issue in &topo {
        let table = &net.tables[issue];
        let pref = table.pref_with(|parent| bits[parent]);
        let want = match slot[issue] {
            Some(position) => target[position],
            None => pref,
        };
        if want != pref {
            let row = crate::cpnet::CpTable::row_code(
                &table.parents.iter().map(|&p| bits[p]).collect::<Vec<bool>>(),
            );
            flips.insert(FlipRef { issue, row });
        }
        bits[issue] = want;
    }
    flips
}
