//! Core preference-network model: binary issues, per-issue conditional
//! preference tables, induced candidate rankings, and profiles of voters.
//!
//! Conventions used throughout the crate:
//!
//! * Issues are identified by index `0..m`. Human-readable names live in
//!   [`IssueSet`] and matter only at the I/O boundary.
//! * Each issue is binary. Bit `1` stands for the issue's first-listed
//!   value, bit `0` for the second.
//! * A [`Candidate`] is a full bit assignment, one bit per issue.
//! * A [`CpTable`] row is selected by the values of the table's parent
//!   issues: row code bit `j` is the candidate's bit at `parents[j]`.
//! * An importance order (`issue_order`), when present, lists issues from
//!   most to least important and must place every issue after all of its
//!   parents. All rank queries require it.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::fmt;

/// Returns `2^k` as an arbitrary-precision integer.
pub(crate) fn pow2(k: usize) -> BigUint {
    BigUint::one() << k
}

/// The shared set of binary issues an election is about.
///
/// `value_names[i][0]` names the value encoded by bit `1`,
/// `value_names[i][1]` the value encoded by bit `0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IssueSet {
    pub names: Vec<String>,
    pub value_names: Vec<[String; 2]>,
}

impl IssueSet {
    /// Builds an issue set with explicit value names per issue.
    pub fn new(names: Vec<String>, value_names: Vec<[String; 2]>) -> Self {
        assert_eq!(names.len(), value_names.len(), "one value pair per issue");
        IssueSet { names, value_names }
    }

    /// Builds an issue set with generated value names `X{i}` / `not-X{i}`.
    pub fn with_default_values(names: Vec<String>) -> Self {
        let value_names = names
            .iter()
            .map(|n| [n.clone(), format!("not-{n}")])
            .collect();
        IssueSet { names, value_names }
    }

    /// Convenience constructor for anonymous issue sets `X0..X{m-1}`.
    pub fn anonymous(m: usize) -> Self {
        Self::with_default_values((0..m).map(|i| format!("X{i}")).collect())
    }

    pub fn m(&self) -> usize {
        self.names.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Structural problems: empty set or duplicate names.
    pub fn problems(&self) -> Vec<NetProblem> {
        let mut out = Vec::new();
        if self.names.is_empty() {
            out.push(NetProblem::NoIssues);
        }
        for i in 0..self.names.len() {
            for j in (i + 1)..self.names.len() {
                if self.names[i] == self.names[j] {
                    out.push(NetProblem::DuplicateIssueName {
                        name: self.names[i].clone(),
                    });
                }
            }
        }
        out
    }
}

/// A full assignment of one bit per issue. Bit `i` lives at `bits[i]`;
/// when an integer encoding is needed, issue 0 is the least significant bit.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Candidate {
    pub bits: Vec<bool>,
}

impl Candidate {
    pub fn new(bits: Vec<bool>) -> Self {
        Candidate { bits }
    }

    /// Decodes `index` (issue 0 = least significant bit) into a candidate.
    pub fn from_index(m: usize, index: usize) -> Self {
        assert!(m < usize::BITS as usize, "issue count too large to index");
        assert!(index < (1usize << m), "candidate index out of range");
        Candidate {
            bits: (0..m).map(|i| (index >> i) & 1 == 1).collect(),
        }
    }

    /// Integer encoding of the assignment (issue 0 = least significant bit).
    pub fn index(&self) -> usize {
        assert!(self.bits.len() < usize::BITS as usize);
        self.bits
            .iter()
            .enumerate()
            .fold(0usize, |acc, (i, &b)| acc | ((b as usize) << i))
    }

    pub fn m(&self) -> usize {
        self.bits.len()
    }

    pub fn get(&self, issue: usize) -> bool {
        self.bits[issue]
    }

    /// Copy with one issue's bit replaced.
    pub fn with_bit(&self, issue: usize, value: bool) -> Candidate {
        let mut bits = self.bits.clone();
        bits[issue] = value;
        Candidate { bits }
    }

    /// The opposite assignment on every issue.
    pub fn complement(&self) -> Candidate {
        Candidate {
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }
}

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// Conditional preference table of a single issue.
///
/// `prefs` holds one preferred bit per parent assignment; the row for a
/// candidate `c` has code `Σ_j c[parents[j]] << j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CpTable {
    pub issue: usize,
    pub parents: Vec<usize>,
    pub prefs: Vec<bool>,
}

impl CpTable {
    /// Table for an issue that depends on nothing.
    pub fn independent(issue: usize, pref: bool) -> Self {
        CpTable {
            issue,
            parents: Vec::new(),
            prefs: vec![pref],
        }
    }

    pub fn new(issue: usize, parents: Vec<usize>, prefs: Vec<bool>) -> Self {
        CpTable {
            issue,
            parents,
            prefs,
        }
    }

    pub fn row_count(&self) -> usize {
        self.prefs.len()
    }

    pub fn is_independent(&self) -> bool {
        self.parents.is_empty()
    }

    /// Row code selected by explicit parent bits (`parent_bits[j]` is the
    /// value of `parents[j]`).
    pub fn row_code(parent_bits: &[bool]) -> usize {
        parent_bits
            .iter()
            .enumerate()
            .fold(0usize, |acc, (j, &b)| acc | ((b as usize) << j))
    }

    /// Row read by a candidate: its own bits at the parent issues.
    pub fn row_for(&self, c: &Candidate) -> usize {
        self.parents
            .iter()
            .enumerate()
            .fold(0usize, |acc, (j, &p)| acc | ((c.get(p) as usize) << j))
    }

    /// Preferred bit of this issue given the candidate's parent bits.
    pub fn pref_given(&self, c: &Candidate) -> bool {
        self.prefs[self.row_for(c)]
    }

    /// Preferred bit with parent values supplied by a lookup function
    /// (used when only part of an assignment is fixed).
    pub fn pref_with(&self, value_of: impl Fn(usize) -> bool) -> bool {
        let row = self
            .parents
            .iter()
            .enumerate()
            .fold(0usize, |acc, (j, &p)| acc | ((value_of(p) as usize) << j));
        self.prefs[row]
    }
}

/// One voter's preference structure: a table per issue plus an optional
/// importance order (most important first, parents before children).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CpNet {
    pub tables: Vec<CpTable>,
    pub issue_order: Option<Vec<usize>>,
}

/// A finding produced by structural validation. An empty finding list means
/// the object is well-formed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NetProblem {
    NoIssues,
    DuplicateIssueName { name: String },
    TableIndexMismatch { position: usize, issue: usize },
    TableCountMismatch { expected: usize, got: usize },
    SelfParent { issue: usize },
    ParentOutOfRange { issue: usize, parent: usize },
    DuplicateParent { issue: usize, parent: usize },
    TooManyParents { issue: usize, got: usize, p_max: usize },
    WrongRowCount { issue: usize, expected: usize, got: usize },
    CyclicDependencies,
    OrderNotPermutation,
    OrderParentAfterChild { issue: usize, parent: usize },
}

impl fmt::Display for NetProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NetProblem::NoIssues => write!(f, "issue set is empty"),
            NetProblem::DuplicateIssueName { name } => {
                write!(f, "duplicate issue name `{name}`")
            }
            NetProblem::TableIndexMismatch { position, issue } => write!(
                f,
                "table at position {position} claims to describe issue {issue}"
            ),
            NetProblem::TableCountMismatch { expected, got } => {
                write!(f, "expected {expected} tables, found {got}")
            }
            NetProblem::SelfParent { issue } => {
                write!(f, "issue {issue} lists itself as a parent")
            }
            NetProblem::ParentOutOfRange { issue, parent } => {
                write!(f, "issue {issue} has out-of-range parent {parent}")
            }
            NetProblem::DuplicateParent { issue, parent } => {
                write!(f, "issue {issue} lists parent {parent} twice")
            }
            NetProblem::TooManyParents { issue, got, p_max } => write!(
                f,
                "issue {issue} has {got} parents, exceeding the bound {p_max}"
            ),
            NetProblem::WrongRowCount {
                issue,
                expected,
                got,
            } => write!(
                f,
                "issue {issue} needs {expected} table rows, found {got}"
            ),
            NetProblem::CyclicDependencies => {
                write!(f, "dependency graph contains a cycle")
            }
            NetProblem::OrderNotPermutation => {
                write!(f, "issue order is not a permutation of all issues")
            }
            NetProblem::OrderParentAfterChild { issue, parent } => write!(
                f,
                "issue order places issue {issue} before its parent {parent}"
            ),
        }
    }
}

/// Default bound on parents per issue, keeping every table at or below 32
/// rows.
pub const DEFAULT_P_MAX: usize = 5;

impl CpNet {
    pub fn new(tables: Vec<CpTable>, issue_order: Option<Vec<usize>>) -> Self {
        CpNet {
            tables,
            issue_order,
        }
    }

    pub fn m(&self) -> usize {
        self.tables.len()
    }

    /// Structural validation against an expected issue count and a parent
    /// bound. Returns all findings; an empty list means the net is valid.
    pub fn validate(&self, m: usize, p_max: usize) -> Vec<NetProblem> {
        let mut out = Vec::new();
        if self.tables.len() != m {
            out.push(NetProblem::TableCountMismatch {
                expected: m,
                got: self.tables.len(),
            });
            return out;
        }
        for (pos, t) in self.tables.iter().enumerate() {
            if t.issue != pos {
                out.push(NetProblem::TableIndexMismatch {
                    position: pos,
                    issue: t.issue,
                });
            }
            let mut seen = vec![false; m];
            for &p in &t.parents {
                if p == pos {
                    out.push(NetProblem::SelfParent { issue: pos });
                } else if p >= m {
                    out.push(NetProblem::ParentOutOfRange {
                        issue: pos,
                        parent: p,
                    });
                } else if seen[p] {
                    out.push(NetProblem::DuplicateParent {
                        issue: pos,
                        parent: p,
                    });
                } else {
                    seen[p] = true;
                }
            }
            if t.parents.len() > p_max {
                out.push(NetProblem::TooManyParents {
                    issue: pos,
                    got: t.parents.len(),
                    p_max,
                });
            }
            // Only meaningful when the parent list itself is sane.
            if t.parents.len() < usize::BITS as usize {
                let expected = 1usize << t.parents.len();
                if t.prefs.len() != expected {
                    out.push(NetProblem::WrongRowCount {
                        issue: pos,
                        expected,
                        got: t.prefs.len(),
                    });
                }
            }
        }
        if !out.iter().any(|p| {
            matches!(
                p,
                NetProblem::ParentOutOfRange { .. } | NetProblem::SelfParent { .. }
            )
        }) && self.topo_order().is_none()
        {
            out.push(NetProblem::CyclicDependencies);
        }
        if let Some(order) = &self.issue_order {
            if !is_permutation(order, m) {
                out.push(NetProblem::OrderNotPermutation);
            } else {
                let mut pos_of = vec![0usize; m];
                for (p, &i) in order.iter().enumerate() {
                    pos_of[i] = p;
                }
                for t in &self.tables {
                    for &par in &t.parents {
                        if par < m && pos_of[par] > pos_of[t.issue] {
                            out.push(NetProblem::OrderParentAfterChild {
                                issue: t.issue,
                                parent: par,
                            });
                        }
                    }
                }
            }
        }
        out
    }

    /// A topological order of the dependency graph (smallest ready index
    /// first), or `None` when the graph is cyclic. Parents out of range are
    /// ignored here; `validate` reports them separately.
    pub fn topo_order(&self) -> Option<Vec<usize>> {
        let m = self.m();
        let mut indeg = vec![0usize; m];
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); m];
        for t in &self.tables {
            for &p in &t.parents {
                if p < m && p != t.issue {
                    indeg[t.issue] += 1;
                    children[p].push(t.issue);
                }
            }
        }
        let mut ready: std::collections::BinaryHeap<std::cmp::Reverse<usize>> =
            (0..m).filter(|&i| indeg[i] == 0).map(std::cmp::Reverse).collect();
        let mut out = Vec::with_capacity(m);
        while let Some(std::cmp::Reverse(i)) = ready.pop() {
            out.push(i);
            for &c in &children[i] {
                indeg[c] -= 1;
                if indeg[c] == 0 {
                    ready.push(std::cmp::Reverse(c));
                }
            }
        }
        if out.len() == m {
            Some(out)
        } else {
            None
        }
    }

    /// Position of each issue in the importance order. Panics when the net
    /// has no order; rank queries call this.
    pub fn order_positions(&self) -> Vec<usize> {
        let order = self
            .issue_order
            .as_ref()
            .expect("operation requires an issue order");
        let mut pos = vec![0usize; order.len()];
        for (p, &i) in order.iter().enumerate() {
            pos[i] = p;
        }
        pos
    }

    /// Most preferred candidate: a forward sweep assigning each issue its
    /// preferred bit given the already-fixed parents.
    pub fn top_candidate(&self) -> Candidate {
        self.sweep(true)
    }

    /// Least preferred candidate: the sweep that always takes the
    /// dispreferred bit. It is the unique candidate of maximal rank under
    /// every admissible importance order.
    pub fn worst_candidate(&self) -> Candidate {
        self.sweep(false)
    }

    fn sweep(&self, preferred: bool) -> Candidate {
        let topo = self.topo_order().expect("net must be acyclic");
        let mut bits = vec![false; self.m()];
        for &i in &topo {
            let t = &self.tables[i];
            let row = t
                .parents
                .iter()
                .enumerate()
                .fold(0usize, |acc, (j, &p)| acc | ((bits[p] as usize) << j));
            bits[i] = t.prefs[row] == preferred;
        }
        Candidate::new(bits)
    }

    /// Number of candidates ranked strictly better than `c` in the total
    /// order induced by the importance order: the sum of `2^(m-1-pos(i))`
    /// over issues where `c` deviates from its conditionally preferred bit.
    /// Rank 0 is the top candidate. Requires an issue order.
    pub fn rank_of(&self, c: &Candidate) -> BigUint {
        let m = self.m();
        let pos = self.order_positions();
        let mut rank = BigUint::zero();
        for (i, t) in self.tables.iter().enumerate() {
            if c.get(i) != t.pref_given(c) {
                rank += pow2(m - 1 - pos[i]);
            }
        }
        rank
    }

    /// Inverse of `rank_of`: decodes a rank back into a candidate by
    /// walking the importance order most-important-first and deviating from
    /// the conditional preference exactly where the rank's binary expansion
    /// says so. Requires an order in which parents precede children.
    pub fn candidate_at_rank(&self, r: &BigUint) -> Candidate {
        let m = self.m();
        assert!(
            r < &pow2(m),
            "rank {r} out of range for {m} issues"
        );
        let order = self
            .issue_order
            .as_ref()
            .expect("operation requires an issue order");
        let mut bits = vec![false; m];
        for (p, &i) in order.iter().enumerate() {
            let t = &self.tables[i];
            let row = t
                .parents
                .iter()
                .enumerate()
                .fold(0usize, |acc, (j, &par)| acc | ((bits[par] as usize) << j));
            let deviate = r.bit((m - 1 - p) as u64);
            bits[i] = t.prefs[row] != deviate;
        }
        Candidate::new(bits)
    }

    /// Successor in the induced total order, or `None` for the last
    /// candidate. Requires an issue order.
    pub fn next_best(&self, c: &Candidate) -> Option<Candidate> {
        let next = self.rank_of(c) + BigUint::one();
        if next >= pow2(self.m()) {
            None
        } else {
            Some(self.candidate_at_rank(&next))
        }
    }

    /// Dependency depth of one issue: 1 for independent issues, otherwise
    /// one more than the deepest parent.
    pub fn level_of(&self, issue: usize) -> usize {
        self.levels()[issue]
    }

    /// Depth of every issue, computed in one topological pass.
    pub fn levels(&self) -> Vec<usize> {
        let topo = self.topo_order().expect("net must be acyclic");
        let mut level = vec![1usize; self.m()];
        for &i in &topo {
            let t = &self.tables[i];
            if !t.parents.is_empty() {
                level[i] = 1 + t.parents.iter().map(|&p| level[p]).max().unwrap();
            }
        }
        level
    }

    /// Number of dependency levels in the net (depth of the deepest issue).
    pub fn levels_count(&self) -> usize {
        self.levels().into_iter().max().unwrap_or(1)
    }

    /// True when every parent precedes its child under `order`.
    pub fn respects_order(&self, order: &[usize]) -> bool {
        let m = self.m();
        if !is_permutation(order, m) {
            return false;
        }
        let mut pos = vec![0usize; m];
        for (p, &i) in order.iter().enumerate() {
            pos[i] = p;
        }
        self.tables
            .iter()
            .all(|t| t.parents.iter().all(|&par| pos[par] < pos[t.issue]))
    }
}

pub(crate) fn is_permutation(order: &[usize], m: usize) -> bool {
    if order.len() != m {
        return false;
    }
    let mut seen = vec![false; m];
    for &i in order {
        if i >= m || seen[i] {
            return false;
        }
        seen[i] = true;
    }
    true
}

/// One voter: a preference net, a voting weight, and the per-voter price
/// multiplier a briber must pay (the cost-vector entry).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Voter {
    pub net: CpNet,
    pub weight: BigUint,
    pub cost_factor: BigUint,
}

impl Voter {
    pub fn new(net: CpNet) -> Self {
        Voter {
            net,
            weight: BigUint::one(),
            cost_factor: BigUint::one(),
        }
    }

    pub fn with_weight(mut self, w: BigUint) -> Self {
        self.weight = w;
        self
    }

    pub fn with_cost_factor(mut self, q: BigUint) -> Self {
        self.cost_factor = q;
        self
    }
}

/// An election: a shared issue set and a sequence of voters over it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    pub issues: IssueSet,
    pub voters: Vec<Voter>,
}

impl Profile {
    pub fn new(issues: IssueSet, voters: Vec<Voter>) -> Self {
        Profile { issues, voters }
    }

    pub fn m(&self) -> usize {
        self.issues.m()
    }

    pub fn n(&self) -> usize {
        self.voters.len()
    }

    /// All voters carry voting weight exactly 1.
    pub fn is_unweighted(&self) -> bool {
        self.voters.iter().all(|v| v.weight.is_one())
    }

    /// The shared cost-vector entry when all voters have the same one.
    pub fn uniform_cost_factor(&self) -> Option<BigUint> {
        let first = self.voters.first()?.cost_factor.clone();
        if self.voters.iter().all(|v| v.cost_factor == first) {
            Some(first)
        } else {
            None
        }
    }

    pub fn total_weight(&self) -> BigUint {
        self.voters.iter().map(|v| &v.weight).sum()
    }

    /// Structural validation of the issue set, every net, weight
    /// positivity, and per-net order constraints.
    pub fn validate(&self, p_max: usize) -> Vec<(Option<usize>, NetProblem)> {
        let mut out: Vec<(Option<usize>, NetProblem)> = self
            .issues
            .problems()
            .into_iter()
            .map(|p| (None, p))
            .collect();
        for (vi, v) in self.voters.iter().enumerate() {
            for p in v.net.validate(self.m(), p_max) {
                out.push((Some(vi), p));
            }
        }
        out
    }

    /// True when every voter's dependencies respect the given global issue
    /// order (parents precede children), i.e. the profile is legal for it.
    pub fn is_o_legal(&self, order: &[usize]) -> bool {
        is_permutation(order, self.m())
            && self.voters.iter().all(|v| v.net.respects_order(order))
    }
}

/// Profile-level check that a single shared order is compatible with every
/// voter's dependency structure.
pub fn check_o_legal(profile: &Profile, order: &[usize]) -> bool {
    profile.is_o_legal(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{cand, table2_profile, ALICE, BOB, CHARLIE};
    use num_traits::ToPrimitive;

    fn rank_u(net: &CpNet, c: &Candidate) -> u64 {
        net.rank_of(c).to_u64().unwrap()
    }

    #[test]
    fn table2_tops() {
        let p = table2_profile();
        // (fish, rice, wine) = bits (1,1,1); (fish, chips, beer) = (1,0,0).
        assert_eq!(p.voters[ALICE].net.top_candidate(), cand(&[1, 1, 1]));
        assert_eq!(p.voters[BOB].net.top_candidate(), cand(&[1, 0, 0]));
        assert_eq!(p.voters[CHARLIE].net.top_candidate(), cand(&[1, 0, 0]));
    }

    #[test]
    fn table2_worsts() {
        let p = table2_profile();
        // Alice bottoms at (meat, chips, wine), Bob at (meat, rice, wine),
        // Charlie at (fish, rice, beer).
        assert_eq!(p.voters[ALICE].net.worst_candidate(), cand(&[0, 0, 1]));
        assert_eq!(p.voters[BOB].net.worst_candidate(), cand(&[0, 1, 1]));
        assert_eq!(p.voters[CHARLIE].net.worst_candidate(), cand(&[1, 1, 0]));
    }

    #[test]
    fn table2_validates() {
        let p = table2_profile();
        assert!(p.validate(DEFAULT_P_MAX).is_empty());
        assert!(p.is_o_legal(&[1, 0, 2])); // side > main > drink
        assert!(!p.is_o_legal(&[2, 0, 1])); // drink first breaks Alice
    }

    #[test]
    fn table2_bob_ranks() {
        let p = table2_profile();
        let bob = &p.voters[BOB].net;
        // Bob's order main > side > drink; two candidates beat
        // (fish, rice, wine).
        assert_eq!(rank_u(bob, &cand(&[1, 1, 1])), 2);
        assert_eq!(rank_u(bob, &bob.top_candidate()), 0);
        // Rank 1 is (fish, chips, wine).
        assert_eq!(bob.candidate_at_rank(&BigUint::from(1u8)), cand(&[1, 0, 1]));
    }

    #[test]
    fn table2_alice_ranking_prefix() {
        let p = table2_profile();
        let alice = &p.voters[ALICE].net;
        let expect = [
            cand(&[1, 1, 1]), // (fish, rice, wine)
            cand(&[1, 0, 1]), // (fish, chips, wine)
            cand(&[1, 1, 0]), // (fish, rice, beer)
            cand(&[1, 0, 0]), // (fish, chips, beer)
        ];
        let mut c = alice.top_candidate();
        for (r, want) in expect.iter().enumerate() {
            assert_eq!(&c, want, "mismatch at rank {r}");
            if r + 1 < expect.len() {
                c = alice.next_best(&c).unwrap();
            }
        }
    }

    #[test]
    fn table2_levels() {
        let p = table2_profile();
        let bob = &p.voters[BOB].net;
        assert_eq!(bob.level_of(1), 1); // side
        assert_eq!(bob.level_of(2), 2); // drink
        assert_eq!(bob.levels_count(), 2);
        let alice = &p.voters[ALICE].net;
        assert_eq!(alice.levels_count(), 2);
    }

    #[test]
    fn chain_levels() {
        // X0 -> X1 -> X2 gives depths 1, 2, 3.
        let net = CpNet::new(
            vec![
                CpTable::independent(0, true),
                CpTable::new(1, vec![0], vec![false, true]),
                CpTable::new(2, vec![1], vec![true, false]),
            ],
            None,
        );
        assert_eq!(net.levels(), vec![1, 2, 3]);
        assert_eq!(net.levels_count(), 3);
    }

    #[test]
    fn validation_findings() {
        // Two-cycle.
        let cyclic = CpNet::new(
            vec![
                CpTable::new(0, vec![1], vec![true, true]),
                CpTable::new(1, vec![0], vec![false, false]),
            ],
            None,
        );
        assert!(cyclic
            .validate(2, DEFAULT_P_MAX)
            .contains(&NetProblem::CyclicDependencies));

        // Three rows for two parents.
        let short = CpNet::new(
            vec![
                CpTable::independent(0, true),
                CpTable::independent(1, true),
                CpTable::new(2, vec![0, 1], vec![true, true, false]),
            ],
            None,
        );
        assert!(short.validate(3, DEFAULT_P_MAX).contains(
            &NetProblem::WrongRowCount {
                issue: 2,
                expected: 4,
                got: 3
            }
        ));

        // Order placing a parent after its child.
        let bad_order = CpNet::new(
            vec![
                CpTable::independent(0, true),
                CpTable::new(1, vec![0], vec![true, false]),
            ],
            Some(vec![1, 0]),
        );
        assert!(bad_order.validate(2, DEFAULT_P_MAX).contains(
            &NetProblem::OrderParentAfterChild { issue: 1, parent: 0 }
        ));
    }

    #[test]
    fn rank_bijection_small_nets() {
        // Every one-parent-per-issue net over 3 issues: rank_of is a
        // bijection and next_best enumerates all candidates exactly once.
        for net in crate::testutil::all_nets_m3_one_parent() {
            let m = net.m();
            let mut seen = vec![false; 1 << m];
            for idx in 0..(1usize << m) {
                let c = Candidate::from_index(m, idx);
                let r = net.rank_of(&c).to_usize().unwrap();
                assert!(!seen[r], "rank collision in {net:?}");
                seen[r] = true;
                assert_eq!(net.candidate_at_rank(&BigUint::from(r)), c);
            }
            assert!(seen.into_iter().all(|s| s));

            let mut c = net.top_candidate();
            assert_eq!(net.rank_of(&c), BigUint::zero());
            let mut count = 1usize;
            while let Some(next) = net.next_best(&c) {
                assert_eq!(
                    net.rank_of(&next),
                    net.rank_of(&c) + BigUint::one(),
                    "successor rank must increment"
                );
                c = next;
                count += 1;
            }
            assert_eq!(count, 1 << m);
            assert_eq!(c, net.worst_candidate());
        }
    }

    #[test]
    fn rank_comparator_equivalence() {
        // rank_of(c) < rank_of(c') iff at the most important issue where
        // the deviation bits differ, c is the one that follows its
        // conditional preference.
        for net in crate::testutil::all_nets_m3_one_parent() {
            let m = net.m();
            let pos = net.order_positions();
            for a in 0..(1usize << m) {
                for b in 0..(1usize << m) {
                    if a == b {
                        continue;
                    }
                    let ca = Candidate::from_index(m, a);
                    let cb = Candidate::from_index(m, b);
                    let da: Vec<bool> = (0..m)
                        .map(|i| ca.get(i) != net.tables[i].pref_given(&ca))
                        .collect();
                    let db: Vec<bool> = (0..m)
                        .map(|i| cb.get(i) != net.tables[i].pref_given(&cb))
                        .collect();
                    let first = (0..m)
                        .filter(|&i| da[i] != db[i])
                        .min_by_key(|&i| pos[i]);
                    if let Some(i) = first {
                        let a_better = !da[i];
                        assert_eq!(
                            net.rank_of(&ca) < net.rank_of(&cb),
                            a_better,
                            "comparator mismatch"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn levels_invariant_under_row_flips() {
        for net in crate::testutil::all_nets_m3_one_parent().into_iter().take(64) {
            let base = net.levels();
            let mut flipped = net.clone();
            for t in &mut flipped.tables {
                for p in &mut t.prefs {
                    *p = !*p;
                }
            }
            assert_eq!(base, flipped.levels());
        }
    }
}
