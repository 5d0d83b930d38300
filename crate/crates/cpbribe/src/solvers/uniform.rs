//! Special-case solvers for unweighted, non-negative bribery. Each
//! covered rule/action/scheme cell either answers exactly or returns
//! `None`, letting the caller fall back to the exhaustive solver; no
//! answer produced here is ever a guess.
//!
//! Covered cells:
//! * plurality (and 1-approval) under the equal, per-flip, per-level, and
//!   rank-distance schemes — an exact target-enumeration engine that
//!   steers voters toward a rival or away from the hated candidate, with
//!   both kinds of moves priced in closed form;
//! * k-approval for `k = 2^j` when all voters share one issue order, and
//!   the prefix-block regime over the global order — projected onto the
//!   most important issues, where the rule *is* plurality (rank-distance
//!   prices scale by exactly `2^j`);
//! * other k-approval cells with equal or per-flip prices — answered only
//!   when matching lower/upper-bound certificates pin the optimum;
//! * other k-approval cells with rank-distance prices — answered only
//!   when free flips (rows off every top path) already dethrone the
//!   hated candidate at cost zero.

use crate::bribery::{BriberyAction, BriberyInstance, CostKind, FlipPlan, FlipRef};
use crate::cpnet::{pow2, Candidate, CpNet, CpTable, IssueSet, Profile, Voter};
use crate::solvers::{util, SolveResult};
use crate::voting::{self, KApprovalMode, VotingRule, DEFAULT_K_ENUM_CAP};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};

const METHOD_ENGINE: &str = "uniform_target_engine";
const METHOD_CERT: &str = "uniform_flip_certificate";
const METHOD_FREE: &str = "uniform_free_drops";

/// Candidate spaces up to this size are fully enumerated.
const SPACE_CAP: usize = 4096;

pub(crate) fn solve(inst: &BriberyInstance) -> Option<SolveResult> {
    debug_assert!(inst.profile.is_unweighted());
    debug_assert!(!inst.negative);
    match util::already_lost(inst) {
        Ok(Some(result)) => return Some(result),
        Ok(None) => {}
        Err(_) => return None,
    }
    let kind = inst.scheme.kind();
    match &inst.rule {
        VotingRule::Plurality => plurality_cell(inst),
        VotingRule::KApproval(KApprovalMode::PrefixBlock { free_issues }) => {
            let order = inst.global_order.clone()?;
            let mp = inst.m() - free_issues;
            match kind {
                CostKind::Equal | CostKind::Flip => {
                    projected_engine(inst, &order, mp, false)
                }
                CostKind::Dist if all_orders_equal(inst, &order) => {
                    projected_engine(inst, &order, mp, true)
                }
                _ => None,
            }
        }
        VotingRule::KApproval(KApprovalMode::Listed { k }) => {
            if *k >= pow2(inst.m()) {
                // Everyone approves every candidate no matter the tables,
                // so the hated candidate co-wins under any bribery.
                return Some(SolveResult::no(METHOD_ENGINE));
            }
            let k = voting::try_to_usize(k).filter(|&k| k <= DEFAULT_K_ENUM_CAP)?;
            if k == 1 {
                return plurality_cell(inst);
            }
            if k.is_power_of_two() {
                if let Some(order) = shared_order(inst) {
                    let mp = inst.m() - k.trailing_zeros() as usize;
                    match kind {
                        CostKind::Equal | CostKind::Flip => {
                            return projected_engine(inst, &order, mp, false);
                        }
                        CostKind::Dist => {
                            return projected_engine(inst, &order, mp, true);
                        }
                        _ => {}
                    }
                }
            }
            match kind {
                CostKind::Equal | CostKind::Flip => flip_certificate(inst, k),
                CostKind::Dist if inst.action != BriberyAction::IndependentOnly => {
                    free_drops(inst, k)
                }
                _ => None,
            }
        }
        VotingRule::Veto | VotingRule::SequentialMajority => None,
    }
}

/// The target engine is exact whenever a voter's price depends only on
/// which issues are touched (equal, per-flip, per-level) or only on the
/// new top (rank-distance). Per-row prices break the single-deviation
/// argument behind its "away" moves, so those fall through.
fn plurality_cell(inst: &BriberyInstance) -> Option<SolveResult> {
    match inst.scheme.kind() {
        CostKind::Equal | CostKind::Flip | CostKind::Level | CostKind::Dist => {
            plurality_engine(inst)
        }
        CostKind::Any => None,
    }
}

/// All voters share one issue order. (It is then automatically legal for
/// each of them, since every copy respects its own net's edges.)
fn shared_order(inst: &BriberyInstance) -> Option<Vec<usize>> {
    let mut voters = inst.profile.voters.iter();
    let first = voters.next()?.net.issue_order.clone()?;
    for voter in voters {
        if voter.net.issue_order.as_ref() != Some(&first) {
            return None;
        }
    }
    Some(first)
}

fn all_orders_equal(inst: &BriberyInstance, order: &[usize]) -> bool {
    inst.profile
        .voters
        .iter()
        .all(|voter| voter.net.issue_order.as_deref() == Some(order))
}

/// Exact engine for plurality: enumerate every rival `c`, price each
/// voter's cheapest useful moves (to `c`, or — for supporters of the
/// hated candidate — away to any third candidate), and cover the score
/// deficit.
///
/// Moving a voter to `c` costs exactly the mandatory flips on `c`'s
/// context path. For away moves it suffices to consider the candidates
/// reachable by a single deviation: any multi-deviation landing pays for
/// a superset of touched issues (equal/flip/level) or a strictly larger
/// rank (distance), and among its component single deviations at most one
/// can coincide with `c`.
fn plurality_engine(inst: &BriberyInstance) -> Option<SolveResult> {
    let m = inst.m();
    if m >= usize::BITS as usize || (1usize << m) > SPACE_CAP {
        return None;
    }
    let space = 1usize << m;
    let h_index = inst.hated.index();
    let n = inst.n();

    let tops: Vec<usize> = inst
        .profile
        .voters
        .iter()
        .map(|voter| voter.net.top_candidate().index())
        .collect();
    let mut scores = vec![0usize; space];
    for &top in &tops {
        scores[top] += 1;
    }
    debug_assert!(scores.iter().all(|&s| s <= scores[h_index]));

    // Per supporter of the hated candidate: all legal single deviations
    // from the top, cheapest first.
    let deviations: Vec<Vec<(BigUint, usize, BTreeSet<FlipRef>)>> = (0..n)
        .map(|vi| {
            if tops[vi] != h_index {
                return Vec::new();
            }
            let voter = &inst.profile.voters[vi];
            let mut list: Vec<(BigUint, usize, BTreeSet<FlipRef>)> =
                single_deviations(&voter.net, inst.action)
                    .into_iter()
                    .map(|landing| {
                        let flips = util::make_top_flips(&voter.net, &landing);
                        let cost = inst.voter_base_cost(vi, &flips) * &voter.cost_factor;
                        (cost, landing.index(), flips)
                    })
                    .collect();
            list.sort();
            list
        })
        .collect();

    let mut best: Option<(BigUint, FlipPlan)> = None;
    for c_index in 0..space {
        if c_index == h_index {
            continue;
        }
        let c = Candidate::from_index(m, c_index);
        let deficit = scores[h_index] - scores[c_index] + 1;
        let options: Vec<Vec<util::MoveOption>> = (0..n)
            .map(|vi| {
                let voter = &inst.profile.voters[vi];
                let mut opts = Vec::new();
                if tops[vi] != c_index {
                    let flips = util::make_top_flips(&voter.net, &c);
                    if util::flips_action_legal(&voter.net, inst.action, &flips) {
                        opts.push(util::MoveOption {
                            gain: 1 + (tops[vi] == h_index) as usize,
                            cost: inst.voter_base_cost(vi, &flips) * &voter.cost_factor,
                            flips,
                        });
                    }
                }
                if tops[vi] == h_index {
                    if let Some((cost, _, flips)) = deviations[vi]
                        .iter()
                        .find(|(_, landing, _)| *landing != c_index)
                    {
                        opts.push(util::MoveOption {
                            gain: 1,
                            cost: cost.clone(),
                            flips: flips.clone(),
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
    Some(util::conclude(inst, best, METHOD_ENGINE))
}

/// All candidates reachable by deviating from the voter's top at exactly
/// one action-legal issue (everything downstream re-follows the tables).
fn single_deviations(net: &CpNet, action: BriberyAction) -> Vec<Candidate> {
    let m = net.m();
    let topo = net.topo_order().expect("validated nets are acyclic");
    let mut out = Vec::new();
    for pivot in 0..m {
        if !action.allows(net.tables[pivot].parents.len()) {
            continue;
        }
        let mut bits = vec![false; m];
        for &issue in &topo {
            let pref = net.tables[issue].pref_with(|parent| bits[parent]);
            bits[issue] = if issue == pivot { !pref } else { pref };
        }
        out.push(Candidate::new(bits));
    }
    out
}

/// Solve a power-of-two k-approval (or prefix-block) cell by projecting
/// onto the `mp` most important issues of the shared order, where the
/// rule becomes plurality: a candidate is approved exactly when it agrees
/// with the (bribed) top on those issues, so scores only count prefix
/// classes. Flips outside the prefix never help and flip counts carry
/// over unchanged; under rank-distance costs every projected rank unit is
/// worth `2^(m - mp)` full units, absorbed into the projected cost
/// factors.
fn projected_engine(
    inst: &BriberyInstance,
    order: &[usize],
    mp: usize,
    dist_scaled: bool,
) -> Option<SolveResult> {
    let m = inst.m();
    if mp == 0 {
        // Rank below 2^m is vacuous: everyone approves everyone.
        return Some(SolveResult::no(METHOD_ENGINE));
    }
    let kept = &order[..mp];
    let mut back = vec![usize::MAX; m];
    for (position, &issue) in kept.iter().enumerate() {
        back[issue] = position;
    }
    let scale = if dist_scaled {
        pow2(m - mp)
    } else {
        BigUint::one()
    };

    let mut voters = Vec::with_capacity(inst.n());
    for voter in &inst.profile.voters {
        let mut tables = Vec::with_capacity(mp);
        for (position, &issue) in kept.iter().enumerate() {
            let table = &voter.net.tables[issue];
            let mut parents = Vec::with_capacity(table.parents.len());
            for &parent in &table.parents {
                if back[parent] == usize::MAX {
                    // A kept issue depends on a dropped one, so the order
                    // is not legal for this net; leave it to the caller.
                    return None;
                }
                parents.push(back[parent]);
            }
            tables.push(CpTable::new(position, parents, table.prefs.clone()));
        }
        let net = CpNet::new(tables, Some((0..mp).collect()));
        let mut projected = Voter::new(net);
        projected.cost_factor = &voter.cost_factor * &scale;
        voters.push(projected);
    }
    let hated = Candidate::new(kept.iter().map(|&issue| inst.hated.get(issue)).collect());
    let projected = BriberyInstance {
        profile: Profile::new(IssueSet::anonymous(mp), voters),
        rule: VotingRule::Plurality,
        action: inst.action,
        scheme: inst.scheme.clone(),
        budget: inst.budget.clone(),
        hated,
        negative: false,
        global_order: None,
    };
    let result = plurality_engine(&projected)?;
    // Lift the plan back: projected issue `i` is original issue `kept[i]`,
    // and row codes agree because parent lists kept their order.
    let plan = result.plan.map(|plan| {
        let mut lifted = FlipPlan::default();
        for (vi, flips) in plan.flips {
            let flips: BTreeSet<FlipRef> = flips
                .into_iter()
                .map(|flip| FlipRef {
                    issue: kept[flip.issue],
                    row: flip.row,
                })
                .collect();
            lifted.flips.insert(vi, flips);
        }
        lifted
    });
    if let (Some(plan), Some(cost)) = (&plan, &result.cost) {
        debug_assert_eq!(&inst.plan_cost(plan), cost);
        debug_assert!(inst.bribery_succeeds(plan));
    }
    Some(SolveResult {
        decision: result.decision,
        plan,
        cost: result.cost,
        method: result.method,
    })
}

/// Approved set (the top-k chain) of one voter.
fn approved_set(net: &CpNet, k: usize) -> BTreeSet<Candidate> {
    let mut set = BTreeSet::new();
    let mut cursor = Some(net.top_candidate());
    while set.len() < k {
        let Some(current) = cursor else { break };
        cursor = net.next_best(&current);
        set.insert(current);
    }
    set
}

/// Certificate solver for k-approval with equal or per-flip prices. Any
/// successful plan must bribe at least `ceil((s_h - s_second + 1) / 2)`
/// voters — one bribe moves the margin against a fixed rival by at most
/// two — and each bribed voter costs at least one price unit. When that
/// already exceeds the budget the answer is a certified no; when a
/// single-flip plan meets the bound exactly (or all prices are zero) the
/// optimum is pinned and the answer is yes. Anything in between stays
/// undecided.
fn flip_certificate(inst: &BriberyInstance, k: usize) -> Option<SolveResult> {
    let h = &inst.hated;
    let q = inst.profile.uniform_cost_factor()?;
    let n = inst.n();

    let approved: Vec<BTreeSet<Candidate>> = inst
        .profile
        .voters
        .iter()
        .map(|voter| approved_set(&voter.net, k))
        .collect();
    let mut scores: BTreeMap<&Candidate, usize> = BTreeMap::new();
    for set in &approved {
        for candidate in set {
            *scores.entry(candidate).or_default() += 1;
        }
    }
    let s_h = scores.get(h).copied().unwrap_or(0);
    let s_second = scores
        .iter()
        .filter(|(c, _)| ***c != *h)
        .map(|(_, &score)| score)
        .max()
        .unwrap_or(0);
    debug_assert!(s_h >= s_second);
    let lower_bound = (s_h - s_second + 2) / 2;

    if !q.is_zero() && BigUint::from(lower_bound) * &q > inst.budget {
        return Some(SolveResult::no(METHOD_CERT));
    }

    // Legal single flips per voter and the approval sets they produce.
    let mut flip_effects: Vec<Vec<(FlipRef, BTreeSet<Candidate>)>> = Vec::with_capacity(n);
    for voter in &inst.profile.voters {
        let net = &voter.net;
        let rows: usize = net
            .tables
            .iter()
            .filter(|table| inst.action.allows(table.parents.len()))
            .map(|table| table.row_count())
            .sum();
        if rows * k > 1 << 16 {
            return None;
        }
        let mut effects = Vec::new();
        for (issue, table) in net.tables.iter().enumerate() {
            if !inst.action.allows(table.parents.len()) {
                continue;
            }
            for row in 0..table.row_count() {
                let flip = FlipRef { issue, row };
                let flipped = crate::bribery::apply_flips(net, &BTreeSet::from([flip]));
                effects.push((flip, approved_set(&flipped, k)));
            }
        }
        flip_effects.push(effects);
    }

    let mut pool: BTreeSet<Candidate> = BTreeSet::new();
    for set in &approved {
        pool.extend(set.iter().cloned());
    }
    for effects in &flip_effects {
        for (_, set) in effects {
            pool.extend(set.iter().cloned());
        }
    }
    pool.remove(h);

    let mut best: Option<(usize, FlipPlan)> = None;
    for c in &pool {
        let s_c = scores.get(c).copied().unwrap_or(0);
        let deficit = s_h - s_c + 1;
        let options: Vec<Vec<util::MoveOption>> = (0..n)
            .map(|vi| {
                let start =
                    (approved[vi].contains(c) as i32) - (approved[vi].contains(h) as i32);
                let mut best_flip: Option<(usize, FlipRef)> = None;
                for (flip, result_set) in &flip_effects[vi] {
                    let outcome =
                        (result_set.contains(c) as i32) - (result_set.contains(h) as i32);
                    let gain = outcome - start;
                    if gain > 0 {
                        let gain = gain as usize;
                        if best_flip.as_ref().map_or(true, |(g, _)| gain > *g) {
                            best_flip = Some((gain, *flip));
                        }
                    }
                }
                match best_flip {
                    Some((gain, flip)) => vec![util::MoveOption {
                        gain,
                        cost: BigUint::one(),
                        flips: BTreeSet::from([flip]),
                    }],
                    None => Vec::new(),
                }
            })
            .collect();
        if let Some((count, picks)) = util::min_cost_cover(&options, deficit) {
            let count = voting::try_to_usize(&count).expect("bribe counts fit usize");
            let plan = util::plan_from_picks(&options, &picks);
            match &best {
                Some((bc, bp)) if (*bc, bp) <= (count, &plan) => {}
                _ => best = Some((count, plan)),
            }
        }
    }

    match best {
        Some((_, plan)) if q.is_zero() => {
            // Everything is free, so existence settles the decision.
            debug_assert!(inst.bribery_succeeds(&plan));
            Some(SolveResult::yes(plan, BigUint::zero(), METHOD_CERT))
        }
        Some((count, plan)) if count == lower_bound => {
            let cost = BigUint::from(count) * &q;
            debug_assert!(cost <= inst.budget);
            debug_assert!(inst.bribery_succeeds(&plan));
            Some(SolveResult::yes(plan, cost, METHOD_CERT))
        }
        _ => None,
    }
}

/// Zero-cost solver for k-approval with rank-distance prices: flipping a
/// row that the hated candidate reads but the voter's top does not is
/// free (the top stays put) and pushes the hated candidate's rank up by
/// that issue's weight. When enough approvals can be shed this way to
/// dethrone it, the optimum is zero. Anything else stays undecided.
fn free_drops(inst: &BriberyInstance, k: usize) -> Option<SolveResult> {
    let h = &inst.hated;
    let k_big = BigUint::from(k);
    let mut plan = FlipPlan::default();
    for (vi, voter) in inst.profile.voters.iter().enumerate() {
        let net = &voter.net;
        let rank_h = net.rank_of(h);
        if rank_h >= k_big {
            continue;
        }
        let top = net.top_candidate();
        let positions = net.order_positions();
        let m = net.m();
        let mut push = BigUint::zero();
        let mut flips = BTreeSet::new();
        for (issue, table) in net.tables.iter().enumerate() {
            let row_h = table.row_for(h);
            if row_h == table.row_for(&top) {
                continue;
            }
            if table.prefs[row_h] == h.get(issue) {
                push += pow2(m - 1 - positions[issue]);
                flips.insert(FlipRef { issue, row: row_h });
            }
        }
        if &rank_h + &push >= k_big && !flips.is_empty() {
            plan.flips.insert(vi, flips);
        }
    }
    if !plan.flips.is_empty() && inst.bribery_succeeds(&plan) {
        return Some(SolveResult::yes(plan, BigUint::zero(), METHOD_FREE));
    }
    None
}
