//! Shared fixtures for unit tests: the three-voter meal-choice profile used
//! across the documentation examples, plus small exhaustive net generators.

use crate::cpnet::{Candidate, CpNet, CpTable, IssueSet, Profile, Voter};

pub const ALICE: usize = 0;
pub const BOB: usize = 1;
pub const CHARLIE: usize = 2;

/// Issue indices of the meal profile.
pub const MAIN: usize = 0;
pub const SIDE: usize = 1;
pub const DRINK: usize = 2;

/// Candidate from 0/1 literals, issue 0 first.
pub fn cand(bits: &[u8]) -> Candidate {
    Candidate::new(bits.iter().map(|&b| b != 0).collect())
}

/// The meal-choice issue set: main {fish=1, meat=0}, side {rice=1, chips=0},
/// drink {wine=1, beer=0}.
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

/// Alice: fish; rice; drink depends on main (meat: beer, fish: wine).
/// Importance order main > drink > side.
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

/// Bob: fish; chips; drink depends on (main, side) and is wine only for
/// (fish, rice). Importance order main > side > drink.
pub fn bob() -> CpNet {
    CpNet::new(
        vec![
            CpTable::independent(MAIN, true),
            CpTable::independent(SIDE, false),
            // Row code: bit 0 = main, bit 1 = side.
            CpTable::new(DRINK, vec![MAIN, SIDE], vec![false, false, false, true]),
        ],
        Some(vec![MAIN, SIDE, DRINK]),
    )
}

/// Charlie: chips; main and drink both depend on side
/// (chips: fish, beer; rice: meat, wine). Importance order
/// side > drink > main.
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

/// The full three-voter meal profile, unweighted, unit cost factors.
pub fn table2_profile() -> Profile {
    Profile::new(
        meal_issues(),
        vec![
            Voter::new(alice()),
            Voter::new(bob()),
            Voter::new(charlie()),
        ],
    )
}

/// The shared order for which the meal profile is legal:
/// side > main > drink.
pub fn meal_global_order() -> Vec<usize> {
    vec![SIDE, MAIN, DRINK]
}

/// Every CP-net over 3 issues with at most one parent per issue, each
/// equipped with its canonical topological order as the importance order.
/// Used for exhaustive structural tests.
pub fn all_nets_m3_one_parent() -> Vec<CpNet> {
    let m = 3;
    let mut nets = Vec::new();
    // Parent choice per issue: none (encoded m) or one other issue.
    let choices: Vec<Vec<usize>> = (0..m)
        .map(|i| {
            let mut c = vec![m];
            c.extend((0..m).filter(|&j| j != i));
            c
        })
        .collect();
    for &p0 in &choices[0] {
        for &p1 in &choices[1] {
            for &p2 in &choices[2] {
                let parents: Vec<Vec<usize>> = [p0, p1, p2]
                    .iter()
                    .map(|&p| if p == m { vec![] } else { vec![p] })
                    .collect();
                let skeleton = CpNet::new(
                    (0..m)
                        .map(|i| CpTable::new(i, parents[i].clone(), vec![false; 1 << parents[i].len()]))
                        .collect(),
                    None,
                );
                let Some(topo) = skeleton.topo_order() else {
                    continue;
                };
                let total_rows: usize = parents.iter().map(|p| 1usize << p.len()).sum();
                for pattern in 0..(1usize << total_rows) {
                    let mut net = skeleton.clone();
                    let mut bit = 0;
                    for t in &mut net.tables {
                        for pref in &mut t.prefs {
                            *pref = (pattern >> bit) & 1 == 1;
                            bit += 1;
                        }
                    }
                    net.issue_order = Some(topo.clone());
                    nets.push(net);
                }
            }
        }
    }
    nets
}
