//! Decision procedures for destructive bribery.
//!
//! The entry point is [`dispatch_solve`]: it validates the instance, then
//! routes it to the cheapest sound method — a dedicated polynomial solver
//! for the tractable rule/action/scheme combinations, an exact
//! special-case solver with an honest fallback where only parts of a
//! combination are easy, or the exhaustive reference solver
//! [`brute_force_solve`] otherwise.

mod cequal;
mod oracle;
mod ov;
mod sm;
mod uniform;
pub(crate) mod util;
mod weighted_ov;

pub use oracle::{brute_force_solve, brute_force_solve_seq};

use crate::bribery::{
    BriberyAction, BriberyInstance, CostKind, CostScheme, FlipPlan, InstanceProblem,
};
use crate::cpnet::{pow2, Candidate, Profile, DEFAULT_P_MAX};
use crate::voting::{self, VotingRule, WinnerSet};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

/// Outcome of a bribery decision. `decision` answers "can the briber make
/// the hated candidate lose within budget?"; on a yes, `plan` is a
/// minimum-cost witness and `cost` its price.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub decision: bool,
    pub plan: Option<FlipPlan>,
    pub cost: Option<BigUint>,
    /// Which procedure produced the answer.
    pub method: &'static str,
}

impl SolveResult {
    pub(crate) fn yes(plan: FlipPlan, cost: BigUint, method: &'static str) -> Self {
        SolveResult {
            decision: true,
            plan: Some(plan),
            cost: Some(cost),
            method,
        }
    }

    pub(crate) fn no(method: &'static str) -> Self {
        SolveResult {
            decision: false,
            plan: None,
            cost: None,
            method,
        }
    }
}

/// Size caps for the exhaustive solver. Fields mirror the CLI environment
/// overrides `CPB_MAX_ISSUES`, `CPB_MAX_ROWS` and `CPB_MAX_VOTERS`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BruteForceLimits {
    /// Maximum number of issues.
    pub max_issues: usize,
    /// Maximum total number of editable cp-table rows per voter
    /// (enforced by the per-voter subset-enumeration engines).
    pub max_rows: usize,
    /// Maximum number of voters for the weighted assignment enumerations.
    pub max_voters: usize,
}

impl Default for BruteForceLimits {
    fn default() -> Self {
        BruteForceLimits {
            max_issues: 5,
            max_rows: 24,
            max_voters: 10,
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("invalid instance: {0:?}")]
    InvalidInstance(Vec<InstanceProblem>),
    #[error("instance exceeds solver limits: {0}")]
    LimitsExceeded(String),
}

/// Solve a destructive bribery instance with default exhaustive-solver
/// limits. See [`dispatch_solve_with_limits`].
pub fn dispatch_solve(inst: &BriberyInstance) -> Result<SolveResult, SolveError> {
    dispatch_solve_with_limits(inst, &BruteForceLimits::default())
}

/// Solve a destructive bribery instance, routing by rule, weights, action
/// and cost scheme. Polynomial combinations never reach the exhaustive
/// solver; everything else falls back to it, subject to `limits`.
pub fn dispatch_solve_with_limits(
    inst: &BriberyInstance,
    limits: &BruteForceLimits,
) -> Result<SolveResult, SolveError> {
    let problems = inst.validate();
    if !problems.is_empty() {
        return Err(SolveError::InvalidInstance(problems));
    }
    let unweighted = inst.profile.is_unweighted();
    match &inst.rule {
        VotingRule::SequentialMajority => {
            if unweighted {
                sm::solve(inst)
            } else {
                brute_force_solve(inst, limits)
            }
        }
        VotingRule::Veto => {
            if unweighted {
                ov::solve(inst)
            } else if inst.action == BriberyAction::DependentOnly
                && inst.scheme.kind() == CostKind::Dist
                && !inst.negative
            {
                match weighted_ov::solve(inst) {
                    Some(result) => Ok(result),
                    None => brute_force_solve(inst, limits),
                }
            } else {
                brute_force_solve(inst, limits)
            }
        }
        VotingRule::Plurality | VotingRule::KApproval(_) => {
            if unweighted
                && inst.action == BriberyAction::Both
                && inst.scheme.kind() == CostKind::Equal
            {
                cequal::solve(inst)
            } else if unweighted
                && !inst.negative
                && inst.profile.uniform_cost_factor().is_some()
            {
                match uniform::solve(inst) {
                    Some(result) => Ok(result),
                    None => brute_force_solve(inst, limits),
                }
            } else {
                brute_force_solve(inst, limits)
            }
        }
    }
}

/// Smallest bribery budget that can dethrone the current unique winner
/// under unit cost factors, equal costs, and unrestricted flips; zero when
/// the winner is already not unique.
pub fn margin_of_victory(
    profile: &Profile,
    rule: &VotingRule,
    global_order: Option<&[usize]>,
) -> Result<BigUint, SolveError> {
    let problems: Vec<InstanceProblem> = profile
        .validate(DEFAULT_P_MAX)
        .into_iter()
        .map(|(voter, problem)| InstanceProblem::Net { voter, problem })
        .collect();
    if !problems.is_empty() {
        return Err(SolveError::InvalidInstance(problems));
    }

    let winner = match unique_winner(profile, rule, global_order)? {
        Some(candidate) => candidate,
        None => return Ok(BigUint::zero()),
    };

    // Probe instances: all cost factors one, unrestricted action, equal
    // costs, non-negative bribery against the unique winner.
    let mut probe_profile = profile.clone();
    for voter in &mut probe_profile.voters {
        voter.cost_factor = BigUint::one();
    }
    let probe = |budget: BigUint| -> Result<bool, SolveError> {
        let inst = BriberyInstance {
            profile: probe_profile.clone(),
            rule: rule.clone(),
            action: BriberyAction::Both,
            scheme: CostScheme::Equal,
            budget,
            hated: winner.clone(),
            negative: false,
            global_order: global_order.map(|order| order.to_vec()),
        };
        Ok(dispatch_solve(&inst)?.decision)
    };

    let n = BigUint::from(profile.n());
    if !probe(n.clone())? {
        return Err(SolveError::LimitsExceeded(
            "no dethroning budget found up to the number of voters".into(),
        ));
    }
    // Binary search for the smallest yes-budget in [0, n].
    let mut lo = BigUint::zero(); // largest known no, once lo > 0
    let mut hi = n; // known yes
    if probe(lo.clone())? {
        return Ok(lo);
    }
    while &lo + BigUint::one() < hi {
        let mid = (&lo + &hi) / 2u32;
        if probe(mid.clone())? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// The unique winner of the profile under the rule, or `None` when the
/// co-winner set is not a singleton.
fn unique_winner(
    profile: &Profile,
    rule: &VotingRule,
    global_order: Option<&[usize]>,
) -> Result<Option<Candidate>, SolveError> {
    let m = profile.m();
    if let VotingRule::SequentialMajority = rule {
        let order = global_order.ok_or_else(|| {
            SolveError::InvalidInstance(vec![InstanceProblem::MissingGlobalOrder])
        })?;
        let winner = voting::winner_sm(profile, order)
            .map_err(|e| SolveError::LimitsExceeded(e.to_string()))?;
        return Ok(Some(winner));
    }
    let winner_set = voting::winners(profile, rule, global_order)
        .map_err(|e| SolveError::LimitsExceeded(e.to_string()))?;
    match &winner_set {
        WinnerSet::Explicit { winners, .. } => match winners {
            voting::CandidateSelection::Listed(list) => {
                Ok((list.len() == 1).then(|| list[0].clone()))
            }
            voting::CandidateSelection::AllExcept { excluded, .. } => {
                let total = pow2(m);
                let kept = &total - BigUint::from(excluded.len());
                if kept != BigUint::one() {
                    return Ok(None);
                }
                if m > 20 {
                    return Err(SolveError::LimitsExceeded(
                        "cannot extract a unique winner from a complement set this large".into(),
                    ));
                }
                let excluded: std::collections::BTreeSet<&Candidate> = excluded.iter().collect();
                for index in 0..(1usize << m) {
                    let candidate = Candidate::from_index(m, index);
                    if !excluded.contains(&candidate) {
                        return Ok(Some(candidate));
                    }
                }
                unreachable!("complement set of size one must contain a candidate");
            }
        },
        WinnerSet::Prefix {
            order,
            free_issues,
            winners,
            ..
        } => {
            if *free_issues > 0 || winners.len() != 1 {
                return Ok(None);
            }
            let mut bits = vec![false; m];
            for (position, &issue) in order.iter().enumerate() {
                bits[issue] = winners[0][position];
            }
            Ok(Some(Candidate::new(bits)))
        }
    }
}
