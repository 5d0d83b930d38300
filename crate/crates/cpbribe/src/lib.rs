//! Election winner determination and bribery optimization over combinatorial
//! candidate domains described by conditional preference networks.
//!
//! Candidates are assignments to `m` binary issues. Each voter ranks the
//! 2^m candidates implicitly through an acyclic network of per-issue
//! preference tables, optionally refined by an importance order over issues.
//! On top of that this crate provides:
//!
//! * positional voting rules (plurality, veto, k-approval) evaluated on the
//!   induced rankings, plus a sequential majority rule that fixes issues one
//!   at a time along a shared agenda;
//! * a family of bribery problems: given a budget, per-voter price factors
//!   and a cost scheme for preference edits, can the briber make a chosen
//!   candidate lose?
//! * exact solvers for the polynomial cases, an exhaustive oracle for small
//!   instances, and reductions that map classic NP-hard problems into the
//!   intractable bribery variants;
//! * margin-of-victory computation driven by the bribery machinery.
//!
//! The score-based rules here are *optimistic*: a voter is assumed to
//! approve the k highest-ranked candidates of their own order, and scoring
//! asks only how many voters approve each candidate.

pub mod bribery;
pub mod cpnet;
pub mod reductions;
pub mod solvers;
#[cfg(test)]
pub(crate) mod testutil;
pub mod voting;

pub use bribery::{BriberyAction, BriberyInstance, CostKind, CostScheme, FlipPlan, FlipRef};
pub use cpnet::{Candidate, CpNet, CpTable, IssueSet, Profile, Voter};
pub use solvers::{dispatch_solve, margin_of_victory, BruteForceLimits, SolveResult};
pub use voting::{KApprovalMode, VotingRule, WinnerSet};
