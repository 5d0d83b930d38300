//! Shared fixtures and seeded random generators for the integration
//! suites. Everything here goes through the crate's public API only.

#![allow(dead_code)]

use cpbribe::bribery::CostKind;
use cpbribe::reductions::{CnfFormula, KnapsackInstance, Lit};
use cpbribe::voting::KApprovalMode;
use cpbribe::{
    BriberyAction, BriberyInstance, Candidate, CostScheme, CpNet, CpTable, IssueSet, Profile,
    Voter, VotingRule,
};
use num_bigint::BigUint;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn cand(bits: &[u8]) -> Candidate {
    Candidate::new(bits.iter().map(|&b| b != 0).collect())
}

// ---------------------------------------------------------------------
// The three-voter meal-choice fixture: main {fish=1, meat=0},
// side {rice=1, chips=0}, drink {wine=1, beer=0}.
// ---------------------------------------------------------------------

pub const MAIN: usize = 0;
pub const SIDE: usize = 1;
pub const DRINK: usize = 2;

pub fn meal_issues() -> IssueSet {
    IssueSet::new(
        vec!["main".into(), "side".into(), "drink".into()],
        vec![
            ["fish".into(), "meat".into()],
            ["rice".into(), "chips".into()],
            ["wine".into(), "beer".into()],
        ],
    )
}

/// Alice: fish; rice; drink follows main (fish: wine). Order
/// main > drink > side.
pub fn alice() -> CpNet {
    CpNet::new(
        vec![
            CpTable::independent(MAIN, true),
            CpTable::independent(SIDE, true),
            CpTable::new(DRINK, vec![MAIN], vec![false, true]),
        ],
        Some(vec![MAIN, DRINK, SIDE]),
    )
}

/// Bob: fish; chips; wine only with (fish, rice). Order
/// main > side > drink.
pub fn bob() -> CpNet {
    CpNet::new(
        vec![
            CpTable::independent(MAIN, true),
            CpTable::independent(SIDE, false),
            CpTable::new(DRINK, vec![MAIN, SIDE], vec![false, false, false, true]),
        ],
        Some(vec![MAIN, SIDE, DRINK]),
    )
}

/// Charlie: chips; main and drink follow side (chips: fish and beer).
/// Order side > drink > main.
pub fn charlie() -> CpNet {
    CpNet::new(
        vec![
            CpTable::new(MAIN, vec![SIDE], vec![true, false]),
            CpTable::independent(SIDE, false),
            CpTable::new(DRINK, vec![SIDE], vec![false, true]),
        ],
        Some(vec![SIDE, DRINK, MAIN]),
    )
}

pub fn meal_profile() -> Profile {
    Profile::new(
        meal_issues(),
        vec![Voter::new(alice()), Voter::new(bob()), Voter::new(charlie())],
    )
}

/// The shared order every meal net respects: side > main > drink.
pub fn meal_global_order() -> Vec<usize> {
    vec![SIDE, MAIN, DRINK]
}

// ---------------------------------------------------------------------
// Random instance generation.
// ---------------------------------------------------------------------

#[derive(Clone)]
pub struct GenOptions {
    pub m: (usize, usize),
    pub n: (usize, usize),
    /// Probability that a non-root issue depends on earlier issues.
    pub dep_prob: f64,
    pub max_parents: usize,
    pub weighted: bool,
    /// All voters share one price factor (vs. a per-voter one).
    pub uniform_factor: bool,
    /// All voters carry the same issue order (the spine).
    pub shared_order: bool,
}

impl Default for GenOptions {
    fn default() -> Self {
        GenOptions {
            m: (2, 3),
            n: (1, 5),
            dep_prob: 0.5,
            max_parents: 2,
            weighted: false,
            uniform_factor: false,
            shared_order: false,
        }
    }
}

/// A random profile plus the spine order every voter's net respects
/// (usable as a global order for the sequential and prefix rules).
pub fn gen_profile(rng: &mut ChaCha8Rng, opt: &GenOptions) -> (Profile, Vec<usize>) {
    let m = rng.gen_range(opt.m.0..=opt.m.1);
    let n = rng.gen_range(opt.n.0..=opt.n.1);
    let mut spine: Vec<usize> = (0..m).collect();
    spine.shuffle(rng);
    let shared_factor = BigUint::from(rng.gen_range(1u32..=5));
    let voters = (0..n)
        .map(|_| {
            let mut tables: Vec<Option<CpTable>> = vec![None; m];
            for (pos, &issue) in spine.iter().enumerate() {
                let parent_pool = &spine[..pos];
                let table = if pos > 0 && rng.gen_bool(opt.dep_prob) {
                    let count = rng.gen_range(1..=opt.max_parents.min(pos));
                    let mut parents: Vec<usize> =
                        parent_pool.choose_multiple(rng, count).copied().collect();
                    parents.sort();
                    let prefs = (0..1usize << count).map(|_| rng.gen()).collect();
                    CpTable::new(issue, parents, prefs)
                } else {
                    CpTable::independent(issue, rng.gen())
                };
                tables[issue] = Some(table);
            }
            let tables: Vec<CpTable> = tables.into_iter().map(Option::unwrap).collect();
            let order = if opt.shared_order {
                spine.clone()
            } else {
                random_topo(rng, &tables)
            };
            let mut voter = Voter::new(CpNet::new(tables, Some(order)));
            if opt.weighted {
                voter = voter.with_weight(BigUint::from(rng.gen_range(1u32..=5)));
            }
            let factor = if opt.uniform_factor {
                shared_factor.clone()
            } else {
                BigUint::from(rng.gen_range(1u32..=5))
            };
            voter.with_cost_factor(factor)
        })
        .collect();
    (Profile::new(IssueSet::anonymous(m), voters), spine)
}

/// A uniformly random linear extension of the net's dependency graph.
fn random_topo(rng: &mut ChaCha8Rng, tables: &[CpTable]) -> Vec<usize> {
    let m = tables.len();
    let mut placed = vec![false; m];
    let mut order = Vec::with_capacity(m);
    while order.len() < m {
        let ready: Vec<usize> = (0..m)
            .filter(|&i| !placed[i] && tables[i].parents.iter().all(|&p| placed[p]))
            .collect();
        let &pick = ready.choose(rng).expect("acyclic by construction");
        placed[pick] = true;
        order.push(pick);
    }
    order
}

pub fn gen_candidate(rng: &mut ChaCha8Rng, m: usize) -> Candidate {
    Candidate::new((0..m).map(|_| rng.gen()).collect())
}

/// A scheme of the requested kind; priced schemes get random per-row
/// prices in 0..=5.
pub fn gen_scheme(rng: &mut ChaCha8Rng, kind: CostKind, profile: &Profile) -> CostScheme {
    match kind {
        CostKind::Equal => CostScheme::Equal,
        CostKind::Flip => CostScheme::Flip,
        CostKind::Level => CostScheme::Level,
        CostKind::Dist => CostScheme::Dist,
        CostKind::Any => CostScheme::Any(
            profile
                .voters
                .iter()
                .map(|v| {
                    v.net
                        .tables
                        .iter()
                        .map(|t| {
                            (0..t.row_count())
                                .map(|_| BigUint::from(rng.gen_range(0u32..=5)))
                                .collect()
                        })
                        .collect()
                })
                .collect(),
        ),
    }
}

pub fn gen_budget(rng: &mut ChaCha8Rng, cap: u32) -> BigUint {
    BigUint::from(rng.gen_range(0..=cap))
}

// ---------------------------------------------------------------------
// Random sources for the reduction suites.
// ---------------------------------------------------------------------

pub fn gen_positive_cnf(rng: &mut ChaCha8Rng, nv: usize, nc: usize) -> CnfFormula {
    let clauses = (0..nc)
        .map(|_| {
            let vars: Vec<usize> = (0..nv).collect::<Vec<_>>().choose_multiple(rng, 3).copied().collect();
            [vars[0], vars[1], vars[2]]
        })
        .collect::<Vec<_>>();
    CnfFormula::positive(nv, &clauses)
}

pub fn gen_signed_cnf(rng: &mut ChaCha8Rng, nv: usize, nc: usize) -> CnfFormula {
    let clauses = (0..nc)
        .map(|_| {
            let vars: Vec<usize> = (0..nv).collect::<Vec<_>>().choose_multiple(rng, 3).copied().collect();
            let mut lit = |v: usize| if rng.gen() { Lit::pos(v) } else { Lit::neg(v) };
            [lit(vars[0]), lit(vars[1]), lit(vars[2])]
        })
        .collect();
    CnfFormula::new(nv, clauses)
}

/// The seven triples of the Fano plane over seven variables: the smallest
/// positive formula with no not-all-equal assignment. Every strict
/// subformula is satisfiable.
pub fn fano_formula() -> CnfFormula {
    CnfFormula::positive(
        7,
        &[
            [0, 1, 2],
            [0, 3, 4],
            [0, 5, 6],
            [1, 3, 5],
            [1, 4, 6],
            [2, 3, 6],
            [2, 4, 5],
        ],
    )
}

pub fn gen_knapsack(rng: &mut ChaCha8Rng) -> KnapsackInstance {
    let count = rng.gen_range(0..=5);
    let objects: Vec<(u64, u64)> = (0..count)
        .map(|_| (rng.gen_range(1..=5), rng.gen_range(0..=4)))
        .collect();
    let total: u64 = objects.iter().map(|&(_, v)| v).sum();
    KnapsackInstance::from_u64(&objects, rng.gen_range(0..=total + 2), rng.gen_range(0..=10))
}

// ---------------------------------------------------------------------
// Instance assembly helpers shared by the acceptance criteria.
// ---------------------------------------------------------------------

pub fn all_actions() -> [BriberyAction; 3] {
    [
        BriberyAction::IndependentOnly,
        BriberyAction::DependentOnly,
        BriberyAction::Both,
    ]
}

pub fn all_kinds() -> [CostKind; 5] {
    [
        CostKind::Equal,
        CostKind::Flip,
        CostKind::Level,
        CostKind::Any,
        CostKind::Dist,
    ]
}

/// Builds a full instance around a generated profile.
pub struct InstanceSpec {
    pub rule: VotingRule,
    pub action: BriberyAction,
    pub kind: CostKind,
    pub negative: bool,
    pub needs_global: bool,
    pub budget_cap: u32,
}

pub fn assemble(
    rng: &mut ChaCha8Rng,
    opt: &GenOptions,
    spec: &InstanceSpec,
) -> BriberyInstance {
    let (profile, spine) = gen_profile(rng, opt);
    let m = profile.m();
    let scheme = gen_scheme(rng, spec.kind, &profile);
    let hated = gen_candidate(rng, m);
    BriberyInstance {
        profile,
        rule: spec.rule.clone(),
        action: spec.action,
        scheme,
        budget: gen_budget(rng, spec.budget_cap),
        hated,
        negative: spec.negative,
        global_order: spec.needs_global.then_some(spine),
    }
}

/// A listed-k rule with a small k.
pub fn listed(k: u32) -> VotingRule {
    VotingRule::KApproval(KApprovalMode::Listed {
        k: BigUint::from(k),
    })
}

pub fn prefix(free_issues: usize) -> VotingRule {
    VotingRule::KApproval(KApprovalMode::PrefixBlock { free_issues })
}
