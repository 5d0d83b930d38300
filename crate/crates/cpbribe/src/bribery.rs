//! The bribery model: which table rows a briber may flip, what a set of
//! flips costs under each cost scheme, and when a flip plan succeeds in
//! keeping a hated candidate out of the winner set.

use crate::cpnet::{Candidate, CpNet, NetProblem, Profile, DEFAULT_P_MAX};
use crate::voting::{
    approves, winner_sm, winners, KApprovalMode, VotingError, VotingRule,
};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// Which issues a briber may touch: only issues without parents, only
/// issues with parents, or all of them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BriberyAction {
    IndependentOnly,
    DependentOnly,
    Both,
}

impl BriberyAction {
    /// May a table with this parent count be edited?
    pub fn allows(&self, parent_count: usize) -> bool {
        match self {
            BriberyAction::IndependentOnly => parent_count == 0,
            BriberyAction::DependentOnly => parent_count > 0,
            BriberyAction::Both => true,
        }
    }
}

/// Per-row prices for the priced-flips scheme:
/// `costs[voter][issue][row]`.
pub type FlipCosts = Vec<Vec<Vec<BigUint>>>;

/// How a bribed voter's price is computed from their flip set. The
/// per-voter result is always multiplied by that voter's cost factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CostScheme {
    /// Any nonempty change costs one unit.
    Equal,
    /// One unit per flipped row.
    Flip,
    /// Per distinct flipped issue: levels in the net plus one, minus the
    /// issue's depth (shallow issues are expensive).
    Level,
    /// Each row has its own price.
    Any(FlipCosts),
    /// The rank, in the voter's original order, of the voter's new top
    /// candidate.
    Dist,
}

/// Payload-free discriminant of [`CostScheme`], for matching and for APIs
/// that pick a scheme without supplying per-row prices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CostKind {
    Equal,
    Flip,
    Level,
    Any,
    Dist,
}

impl CostScheme {
    pub fn tag(&self) -> &'static str {
        match self {
            CostScheme::Equal => "equal",
            CostScheme::Flip => "flip",
            CostScheme::Level => "level",
            CostScheme::Any(_) => "any",
            CostScheme::Dist => "dist",
        }
    }

    pub fn kind(&self) -> CostKind {
        match self {
            CostScheme::Equal => CostKind::Equal,
            CostScheme::Flip => CostKind::Flip,
            CostScheme::Level => CostKind::Level,
            CostScheme::Any(_) => CostKind::Any,
            CostScheme::Dist => CostKind::Dist,
        }
    }

    /// Does this scheme need per-voter issue orders to be evaluated?
    pub fn needs_orders(&self) -> bool {
        matches!(self, CostScheme::Dist)
    }
}

/// One cp-statement flip: invert the preferred bit of `issue`'s table at
/// `row`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FlipRef {
    pub issue: usize,
    pub row: usize,
}

/// A set of flips per voter. Rows are sets, so a row cannot be flipped
/// twice; voters without an entry (or with an empty set) are not bribed.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct FlipPlan {
    pub flips: BTreeMap<usize, BTreeSet<FlipRef>>,
}

impl FlipPlan {
    pub fn empty() -> Self {
        FlipPlan::default()
    }

    pub fn single(voter: usize, issue: usize, row: usize) -> Self {
        let mut plan = FlipPlan::empty();
        plan.add(voter, issue, row);
        plan
    }

    pub fn add(&mut self, voter: usize, issue: usize, row: usize) {
        self.flips
            .entry(voter)
            .or_default()
            .insert(FlipRef { issue, row });
    }

    pub fn is_empty(&self) -> bool {
        self.flips.values().all(|f| f.is_empty())
    }

    /// Voters with at least one flip.
    pub fn bribed_voters(&self) -> impl Iterator<Item = usize> + '_ {
        self.flips
            .iter()
            .filter(|(_, f)| !f.is_empty())
            .map(|(&v, _)| v)
    }

    pub fn flips_of(&self, voter: usize) -> Option<&BTreeSet<FlipRef>> {
        self.flips.get(&voter).filter(|f| !f.is_empty())
    }

    /// Total number of flipped rows.
    pub fn flip_count(&self) -> usize {
        self.flips.values().map(|f| f.len()).sum()
    }
}

/// A full destructive-bribery question: can the hated candidate be pushed
/// out of the winner set by flips of the permitted kind, at total price at
/// most the budget?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BriberyInstance {
    pub profile: Profile,
    pub rule: VotingRule,
    pub action: BriberyAction,
    pub scheme: CostScheme,
    pub budget: BigUint,
    pub hated: Candidate,
    /// When set, no voter may be newly turned against the hated candidate.
    pub negative: bool,
    /// Shared issue order, required by sequential majority and the
    /// power-of-two approval regime.
    pub global_order: Option<Vec<usize>>,
}

/// Problems found when validating a bribery instance.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceProblem {
    #[error("voter {voter:?}: {problem}")]
    Net {
        voter: Option<usize>,
        problem: NetProblem,
    },
    #[error("hated candidate has {got} bits, expected {expected}")]
    HatedWrongLength { expected: usize, got: usize },
    #[error("voter {0} has zero voting weight")]
    ZeroWeight(usize),
    #[error("voter {0} needs an issue order for this rule or cost scheme")]
    MissingVoterOrder(usize),
    #[error("a global issue order is required for this rule")]
    MissingGlobalOrder,
    #[error("the global order is not a permutation of the issues")]
    BadGlobalOrder,
    #[error("the profile is not legal for the global order")]
    NotOLegal,
    #[error("priced-flip table shape mismatch at voter {voter}: {detail}")]
    FlipCostShape { voter: usize, detail: String },
    #[error("k-approval needs k >= 1")]
    ZeroK,
    #[error("free-issue count {free} exceeds issue count {m}")]
    BadFreeIssues { free: usize, m: usize },
}

/// Reason codes for plan evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlanOutcome {
    /// Legal, within budget, and the hated candidate no longer wins.
    Success,
    /// The plan names a voter, issue or row that does not exist.
    MalformedPlan { voter: usize },
    /// Some flip touches an issue the action forbids.
    ActionIllegal,
    /// Some voter is newly turned against the hated candidate.
    NegativeIllegal,
    /// Legal but the price exceeds the budget.
    OverBudget,
    /// Legal and affordable, but the hated candidate still wins.
    HatedStillWins,
}

impl BriberyInstance {
    pub fn m(&self) -> usize {
        self.profile.m()
    }

    pub fn n(&self) -> usize {
        self.profile.n()
    }

    /// Full structural validation; an empty list means the instance is
    /// well-formed and every rule/scheme prerequisite is met.
    pub fn validate(&self) -> Vec<InstanceProblem> {
        let mut out: Vec<InstanceProblem> = self
            .profile
            .validate(DEFAULT_P_MAX)
            .into_iter()
            .map(|(voter, problem)| InstanceProblem::Net { voter, problem })
            .collect();
        let m = self.m();
        if self.hated.m() != m {
            out.push(InstanceProblem::HatedWrongLength {
                expected: m,
                got: self.hated.m(),
            });
        }
        for (vi, v) in self.profile.voters.iter().enumerate() {
            if v.weight.is_zero() {
                out.push(InstanceProblem::ZeroWeight(vi));
            }
        }

        // Per-voter order requirements: veto and listed k-approval locate
        // ranks in each voter's own order; the rank-based cost scheme does
        // too.
        let needs_voter_orders = matches!(self.rule, VotingRule::Veto)
            || matches!(self.rule, VotingRule::KApproval(KApprovalMode::Listed { .. }))
            || self.scheme.needs_orders();
        if needs_voter_orders {
            for (vi, v) in self.profile.voters.iter().enumerate() {
                if v.net.issue_order.is_none() {
                    out.push(InstanceProblem::MissingVoterOrder(vi));
                }
            }
        }

        if let VotingRule::KApproval(KApprovalMode::Listed { k }) = &self.rule {
            if k.is_zero() {
                out.push(InstanceProblem::ZeroK);
            }
        }
        if let VotingRule::KApproval(KApprovalMode::PrefixBlock { free_issues }) = &self.rule {
            if *free_issues > m {
                out.push(InstanceProblem::BadFreeIssues {
                    free: *free_issues,
                    m,
                });
            }
        }

        // Global-order requirements.
        let needs_global = matches!(self.rule, VotingRule::SequentialMajority)
            || matches!(
                self.rule,
                VotingRule::KApproval(KApprovalMode::PrefixBlock { .. })
            );
        if needs_global {
            match &self.global_order {
                None => out.push(InstanceProblem::MissingGlobalOrder),
                Some(order) => {
                    if !crate::cpnet::is_permutation(order, m) {
                        out.push(InstanceProblem::BadGlobalOrder);
                    } else if !self.profile.is_o_legal(order) {
                        out.push(InstanceProblem::NotOLegal);
                    }
                }
            }
        }

        if let CostScheme::Any(costs) = &self.scheme {
            if costs.len() != self.n() {
                out.push(InstanceProblem::FlipCostShape {
                    voter: costs.len().min(self.n()),
                    detail: format!(
                        "expected {} voter entries, found {}",
                        self.n(),
                        costs.len()
                    ),
                });
            } else {
                for (vi, per_issue) in costs.iter().enumerate() {
                    if per_issue.len() != m {
                        out.push(InstanceProblem::FlipCostShape {
                            voter: vi,
                            detail: format!(
                                "expected {m} issue entries, found {}",
                                per_issue.len()
                            ),
                        });
                        continue;
                    }
                    for (issue, rows) in per_issue.iter().enumerate() {
                        let expect =
                            self.profile.voters[vi].net.tables[issue].row_count();
                        if rows.len() != expect {
                            out.push(InstanceProblem::FlipCostShape {
                                voter: vi,
                                detail: format!(
                                    "issue {issue}: expected {expect} row prices, found {}",
                                    rows.len()
                                ),
                            });
                        }
                    }
                }
            }
        }
        out
    }

    /// Does this voter currently count as "for" the hated candidate under
    /// the instance's rule? For approval rules this is approval of the
    /// hated candidate; for sequential majority it is having it as top.
    pub fn supports_hated(&self, net: &CpNet) -> bool {
        self.rule_approves(net, &self.hated)
    }

    fn rule_approves(&self, net: &CpNet, c: &Candidate) -> bool {
        match &self.rule {
            VotingRule::Plurality => net.top_candidate() == *c,
            VotingRule::Veto => net.worst_candidate() != *c,
            VotingRule::KApproval(KApprovalMode::Listed { k }) => approves(net, k, c),
            VotingRule::KApproval(KApprovalMode::PrefixBlock { free_issues }) => {
                let order = self
                    .global_order
                    .as_ref()
                    .expect("validated instance has a global order");
                let fixed = self.m() - free_issues;
                let top = net.top_candidate();
                order[..fixed].iter().all(|&i| top.get(i) == c.get(i))
            }
            VotingRule::SequentialMajority => net.top_candidate() == *c,
        }
    }

    /// Rows in the plan all exist in the profile.
    pub fn plan_shape_ok(&self, plan: &FlipPlan) -> Result<(), PlanOutcome> {
        for (&vi, flips) in &plan.flips {
            if vi >= self.n() {
                return Err(PlanOutcome::MalformedPlan { voter: vi });
            }
            let net = &self.profile.voters[vi].net;
            for f in flips {
                if f.issue >= net.m() || f.row >= net.tables[f.issue].row_count() {
                    return Err(PlanOutcome::MalformedPlan { voter: vi });
                }
            }
        }
        Ok(())
    }

    /// Every flip touches an issue of the permitted kind. Plans with
    /// nonexistent rows are not legal.
    pub fn plan_is_action_legal(&self, plan: &FlipPlan) -> bool {
        if self.plan_shape_ok(plan).is_err() {
            return false;
        }
        plan.flips.iter().all(|(&vi, flips)| {
            let net = &self.profile.voters[vi].net;
            flips
                .iter()
                .all(|f| self.action.allows(net.tables[f.issue].parents.len()))
        })
    }

    /// No voter who was for the hated candidate is turned against it:
    /// for approval rules, approval of the hated candidate must be
    /// preserved per voter; for sequential majority, voters whose top was
    /// the hated candidate must keep it as top.
    pub fn plan_is_negative_legal(&self, plan: &FlipPlan) -> bool {
        if self.plan_shape_ok(plan).is_err() {
            return false;
        }
        plan.flips.iter().all(|(&vi, flips)| {
            if flips.is_empty() {
                return true;
            }
            let net = &self.profile.voters[vi].net;
            match &self.rule {
                VotingRule::SequentialMajority => {
                    if net.top_candidate() == self.hated {
                        apply_flips(net, flips).top_candidate() == self.hated
                    } else {
                        true
                    }
                }
                _ => {
                    if self.rule_approves(net, &self.hated) {
                        self.rule_approves(&apply_flips(net, flips), &self.hated)
                    } else {
                        true
                    }
                }
            }
        })
    }

    /// Price of one voter's flip set (before the cost-factor multiplier).
    /// Empty sets are free.
    pub fn voter_base_cost(&self, voter: usize, flips: &BTreeSet<FlipRef>) -> BigUint {
        if flips.is_empty() {
            return BigUint::zero();
        }
        let net = &self.profile.voters[voter].net;
        match &self.scheme {
            CostScheme::Equal => BigUint::one(),
            CostScheme::Flip => BigUint::from(flips.len()),
            CostScheme::Level => {
                let levels = net.levels();
                let count = net.levels_count();
                let issues: BTreeSet<usize> = flips.iter().map(|f| f.issue).collect();
                issues
                    .iter()
                    .map(|&i| BigUint::from(count + 1 - levels[i]))
                    .sum()
            }
            CostScheme::Any(costs) => flips
                .iter()
                .map(|f| costs[voter][f.issue][f.row].clone())
                .sum(),
            CostScheme::Dist => {
                let new_top = apply_flips(net, flips).top_candidate();
                net.rank_of(&new_top)
            }
        }
    }

    /// Total plan price: per-voter scheme cost times that voter's cost
    /// factor, summed.
    pub fn plan_cost(&self, plan: &FlipPlan) -> BigUint {
        plan.flips
            .iter()
            .filter(|(_, flips)| !flips.is_empty())
            .map(|(&vi, flips)| {
                self.voter_base_cost(vi, flips) * &self.profile.voters[vi].cost_factor
            })
            .sum()
    }

    /// The profile with all flips applied; the original is untouched.
    pub fn apply_plan(&self, plan: &FlipPlan) -> Profile {
        let mut out = self.profile.clone();
        for (&vi, flips) in &plan.flips {
            out.voters[vi].net = apply_flips(&out.voters[vi].net, flips);
        }
        out
    }

    /// Does the hated candidate win the (possibly bribed) profile?
    pub fn hated_wins(&self, profile: &Profile) -> Result<bool, VotingError> {
        match &self.rule {
            VotingRule::SequentialMajority => {
                let order = self
                    .global_order
                    .as_ref()
                    .ok_or(VotingError::MissingGlobalOrder)?;
                Ok(winner_sm(profile, order)? == self.hated)
            }
            rule => Ok(winners(profile, rule, self.global_order.as_deref())?
                .contains(&self.hated)),
        }
    }

    /// Full evaluation of a plan with a reason code.
    pub fn plan_outcome(&self, plan: &FlipPlan) -> PlanOutcome {
        if let Err(bad) = self.plan_shape_ok(plan) {
            return bad;
        }
        if !self.plan_is_action_legal(plan) {
            return PlanOutcome::ActionIllegal;
        }
        if self.negative && !self.plan_is_negative_legal(plan) {
            return PlanOutcome::NegativeIllegal;
        }
        if self.plan_cost(plan) > self.budget {
            return PlanOutcome::OverBudget;
        }
        let bribed = self.apply_plan(plan);
        match self.hated_wins(&bribed) {
            Ok(true) => PlanOutcome::HatedStillWins,
            Ok(false) => PlanOutcome::Success,
            Err(_) => PlanOutcome::HatedStillWins,
        }
    }

    /// True iff the plan is legal, affordable, and dethrones the hated
    /// candidate.
    pub fn bribery_succeeds(&self, plan: &FlipPlan) -> bool {
        self.plan_outcome(plan) == PlanOutcome::Success
    }
}

/// A copy of `net` with the given rows' preferences inverted.
pub fn apply_flips(net: &CpNet, flips: &BTreeSet<FlipRef>) -> CpNet {
    let mut out = net.clone();
    for f in flips {
        let pref = &mut out.tables[f.issue].prefs[f.row];
        *pref = !*pref;
    }
    out
}
