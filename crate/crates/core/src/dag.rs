//! Labeled DAGs, structural relations between node pairs, and enumeration of
//! all DAGs on `n` unlabeled nodes up to isomorphism.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nodeset::NodeSet;

/// Largest node count supported by the packed canonical encoding.
pub const MAX_CANONICAL_NODES: usize = 8;

/// A directed acyclic graph over nodes `0..n` with presentation labels.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dag {
    n: usize,
    edges: Vec<(usize, usize)>,
    parents: Vec<NodeSet>,
    children: Vec<NodeSet>,
    names: Vec<String>,
}

/// Default variable labels: `A, B, C, ...`.
pub fn default_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            if i < 26 {
                ((b'A' + i as u8) as char).to_string()
            } else {
                format!("X{i}")
            }
        })
        .collect()
}

impl Dag {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Dag> {
        Dag::with_names(n, edges, default_names(n))
    }

    pub fn with_names(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        names: Vec<String>,
    ) -> Result<Dag> {
        if n == 0 || n > 64 {
            return Err(Error::InvalidArgument(format!("node count {n} must be in 1..=64")));
        }
        if names.len() != n {
            return Err(Error::NameCount { expected: n, got: names.len() });
        }
        let mut parents = vec![NodeSet::EMPTY; n];
        let mut children = vec![NodeSet::EMPTY; n];
        let mut list = Vec::new();
        for (i, j) in edges {
            for k in [i, j] {
                if k >= n {
                    return Err(Error::NodeOutOfRange { index: k, n });
                }
            }
            if i == j {
                return Err(Error::SelfLoop(i));
            }
            if children[i].contains(j) {
                return Err(Error::DuplicateEdge(i, j));
            }
            children[i].insert(j);
            parents[j].insert(i);
            list.push((i, j));
        }
        list.sort_unstable();
        let dag = Dag { n, edges: list, parents, children, names };
        if dag.topological_order().is_none() {
            return Err(Error::Cyclic);
        }
        Ok(dag)
    }

    /// Builds from an upper-triangular edge mask: bit `k` stands for the
    /// `k`-th pair `(i, j)`, `i < j`, in row-major order.
    pub fn from_upper_mask(n: usize, mask: u64) -> Dag {
        let edges = upper_pairs(n)
            .into_iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, e)| e);
        Dag::new(n, edges).expect("upper-triangular graphs are acyclic")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges sorted lexicographically.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|s| s == name)
    }

    pub fn renamed(&self, names: Vec<String>) -> Result<Dag> {
        Dag::with_names(self.n, self.edges.iter().copied(), names)
    }

    pub fn parents(&self, i: usize) -> NodeSet {
        self.parents[i]
    }

    pub fn children(&self, i: usize) -> NodeSet {
        self.children[i]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.children[i].contains(j)
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.has_edge(i, j) || self.has_edge(j, i)
    }

    /// Proper descendants of `i`.
    pub fn descendants(&self, i: usize) -> NodeSet {
        let mut seen = NodeSet::EMPTY;
        let mut frontier = self.children[i];
        while !frontier.is_empty() {
            seen = seen.union(frontier);
            let mut next = NodeSet::EMPTY;
            for k in frontier.iter() {
                next = next.union(self.children[k]);
            }
            frontier = next.difference(seen);
        }
        seen
    }

    /// Proper ancestors of `i`.
    pub fn ancestors(&self, i: usize) -> NodeSet {
        let mut seen = NodeSet::EMPTY;
        let mut frontier = self.parents[i];
        while !frontier.is_empty() {
            seen = seen.union(frontier);
            let mut next = NodeSet::EMPTY;
            for k in frontier.iter() {
                next = next.union(self.parents[k]);
            }
            frontier = next.difference(seen);
        }
        seen
    }

    /// Kahn's algorithm, smallest index first. `None` when cyclic.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let mut indeg: Vec<usize> = self.parents.iter().map(|p| p.len()).collect();
        let mut order = Vec::with_capacity(self.n);
        let mut ready: NodeSet = (0..self.n).filter(|&i| indeg[i] == 0).collect();
        while let Some(i) = ready.iter().next() {
            ready.remove(i);
            order.push(i);
            for c in self.children[i].iter() {
                indeg[c] -= 1;
                if indeg[c] == 0 {
                    ready.insert(c);
                }
            }
        }
        (order.len() == self.n).then_some(order)
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.edges.iter().all(|&(i, j)| i < j)
    }

    /// Relabels node `i` as `perm[i]`; names travel with their nodes.
    pub fn permuted(&self, perm: &[usize]) -> Dag {
        let mut names = vec![String::new(); self.n];
        for (i, name) in self.names.iter().enumerate() {
            names[perm[i]] = name.clone();
        }
        Dag::with_names(self.n, self.edges.iter().map(|&(i, j)| (perm[i], perm[j])), names)
            .expect("permutation preserves acyclicity")
    }

    /// Same graph with `i`'s outgoing edges removed.
    pub fn without_outgoing(&self, i: usize) -> Dag {
        let edges = self.edges.iter().copied().filter(|&(a, _)| a != i);
        Dag::with_names(self.n, edges, self.names.clone()).expect("subgraph of a DAG")
    }

    /// Same graph with all edges into `targets` removed.
    pub fn without_incoming(&self, targets: NodeSet) -> Dag {
        let edges = self.edges.iter().copied().filter(|&(_, b)| !targets.contains(b));
        Dag::with_names(self.n, edges, self.names.clone()).expect("subgraph of a DAG")
    }

    /// Undirected edges as pairs `(i, j)` with `i < j`.
    pub fn skeleton(&self) -> Vec<(usize, usize)> {
        let mut s: Vec<_> = self.edges.iter().map(|&(i, j)| (i.min(j), i.max(j))).collect();
        s.sort_unstable();
        s
    }

    /// Unshielded colliders `(i, k, j)` with `i < j` and `i -> k <- j`.
    pub fn v_structures(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for k in 0..self.n {
            let pa: Vec<_> = self.parents[k].iter().collect();
            for (a, &i) in pa.iter().enumerate() {
                for &j in &pa[a + 1..] {
                    if !self.adjacent(i, j) {
                        out.push((i, k, j));
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    fn check_pair(&self, i: usize, j: usize) -> Result<()> {
        for k in [i, j] {
            if k >= self.n {
                return Err(Error::NodeOutOfRange { index: k, n: self.n });
            }
        }
        if i == j {
            return Err(Error::InvalidArgument(format!("relation needs two distinct nodes, got {i} twice")));
        }
        Ok(())
    }

    /// Whether `rel` holds from `i` to `j` in this labeled graph.
    pub fn relation_holds(&self, rel: RelationKind, i: usize, j: usize) -> Result<bool> {
        self.check_pair(i, j)?;
        Ok(match rel {
            RelationKind::IsParent => self.has_edge(i, j),
            RelationKind::IsChild => self.has_edge(j, i),
            RelationKind::IsAncestor => !self.has_edge(i, j) && self.ancestors(j).contains(i),
            RelationKind::IsDescendant => !self.has_edge(j, i) && self.ancestors(i).contains(j),
            RelationKind::HasCollider => !self.children[i].intersection(self.children[j]).is_empty(),
            RelationKind::HasConfounder => !self.parents[i].intersection(self.parents[j]).is_empty(),
        })
    }

    /// Row-major adjacency matrix as a `0`/`1` string.
    pub fn adjacency_string(&self) -> String {
        let mut s = vec![b'0'; self.n * self.n];
        for &(i, j) in &self.edges {
            s[i * self.n + j] = b'1';
        }
        String::from_utf8(s).expect("ascii")
    }

    /// Edge mask in the upper-triangular encoding; `None` if some edge points
    /// backwards.
    pub fn upper_mask(&self) -> Option<u64> {
        let pairs = upper_pairs(self.n);
        let mut mask = 0;
        for e in &self.edges {
            let k = pairs.iter().position(|p| p == e)?;
            mask |= 1 << k;
        }
        Some(mask)
    }
}

impl fmt::Debug for Dag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dag(")?;
        let edges: Vec<String> = self
            .edges
            .iter()
            .map(|&(i, j)| format!("{}->{}", self.names[i], self.names[j]))
            .collect();
        write!(f, "{})", edges.join(", "))
    }
}

/// Pairwise structural relations used as hypotheses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationKind {
    IsParent,
    IsAncestor,
    IsChild,
    IsDescendant,
    HasCollider,
    HasConfounder,
}

impl RelationKind {
    pub const ALL: [RelationKind; 6] = [
        RelationKind::IsParent,
        RelationKind::IsAncestor,
        RelationKind::IsChild,
        RelationKind::IsDescendant,
        RelationKind::HasCollider,
        RelationKind::HasConfounder,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RelationKind::IsParent => "is_parent",
            RelationKind::IsAncestor => "is_ancestor",
            RelationKind::IsChild => "is_child",
            RelationKind::IsDescendant => "is_descendant",
            RelationKind::HasCollider => "has_collider",
            RelationKind::HasConfounder => "has_confounder",
        }
    }

    pub fn parse(s: &str) -> Option<RelationKind> {
        RelationKind::ALL.into_iter().find(|r| r.as_str() == s)
    }
}

/// Pairs `(i, j)`, `i < j`, in row-major order.
pub fn upper_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            v.push((i, j));
        }
    }
    v
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(k) = (0..n.saturating_sub(1)).rev().find(|&k| cur[k] < cur[k + 1]) else {
            break;
        };
        let l = (k + 1..n).rev().find(|&l| cur[k] < cur[l]).expect("exists");
        cur.swap(k, l);
        cur[k + 1..].reverse();
    }
    out
}

/// Packs an edge list into a word whose numeric order equals the
/// lexicographic order of the row-major adjacency string.
fn pack(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> u64 {
    let top = n * n - 1;
    edges.fold(0u64, |acc, (i, j)| acc | 1 << (top - (i * n + j)))
}

fn unpack_string(n: usize, code: u64) -> String {
    let top = n * n - 1;
    (0..n * n)
        .map(|k| if code >> (top - k) & 1 == 1 { '1' } else { '0' })
        .collect()
}

fn min_code(n: usize, edges: &[(usize, usize)], perms: &[Vec<usize>]) -> u64 {
    perms
        .iter()
        .map(|p| pack(n, edges.iter().map(|&(i, j)| (p[i], p[j]))))
        .min()
        .unwrap_or(0)
}

/// Isomorphism-invariant string: the minimum row-major adjacency string over
/// all relabelings of the nodes.
pub fn canonical_form(dag: &Dag) -> String {
    let n = dag.n();
    if n <= MAX_CANONICAL_NODES {
        let perms = permutations(n);
        return unpack_string(n, min_code(n, dag.edges(), &perms));
    }
    // Slow path for larger graphs: compare strings directly.
    permutations(n)
        .iter()
        .map(|p| dag.permuted(p).adjacency_string())
        .min()
        .expect("at least one permutation")
}

/// An enumerated DAG together with its canonical string.
#[derive(Debug, Clone)]
pub struct EnumeratedDag {
    pub dag: Dag,
    pub canonical: String,
}

/// All DAGs on `n` unlabeled nodes, one per isomorphism class, each in
/// upper-triangular form, sorted by canonical string.
///
/// Within a class the representative is the upper-triangular labeling with
/// the smallest edge mask.
pub fn enumerate_dags(n: usize) -> Vec<EnumeratedDag> {
    assert!(
        (1..=MAX_CANONICAL_NODES).contains(&n),
        "enumeration supports 1..={MAX_CANONICAL_NODES} nodes"
    );
    let pairs = upper_pairs(n);
    let perms = permutations(n);
    let total: u64 = 1 << pairs.len();
    let mut first_seen: HashMap<u64, u64> = HashMap::new();
    let mut edges = Vec::with_capacity(pairs.len());
    for mask in 0..total {
        edges.clear();
        edges.extend(pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &e)| e));
        let code = min_code(n, &edges, &perms);
        first_seen.entry(code).or_insert(mask);
    }
    let mut out: Vec<(u64, u64)> = first_seen.into_iter().collect();
    out.sort_unstable();
    out.into_iter()
        .map(|(code, mask)| EnumeratedDag {
            dag: Dag::from_upper_mask(n, mask),
            canonical: unpack_string(n, code),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain() -> Dag {
        Dag::new(3, [(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn relation_examples() {
        let c = chain();
        assert!(c.relation_holds(RelationKind::IsAncestor, 0, 2).unwrap());
        assert!(!c.relation_holds(RelationKind::IsAncestor, 0, 1).unwrap());
        assert!(c.relation_holds(RelationKind::IsDescendant, 2, 0).unwrap());
        let collider = Dag::new(3, [(0, 2), (1, 2)]).unwrap();
        assert!(collider.relation_holds(RelationKind::HasCollider, 0, 1).unwrap());
        let fork = Dag::new(3, [(0, 1), (0, 2)]).unwrap();
        assert!(fork.relation_holds(RelationKind::HasConfounder, 1, 2).unwrap());
        assert!(!fork.relation_holds(RelationKind::HasCollider, 1, 2).unwrap());
    }

    #[test]
    fn ancestor_excludes_parent_even_with_longer_path() {
        // A->B->C plus A->C: A is a parent of C, so not an ancestor-only.
        let g = Dag::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(!g.relation_holds(RelationKind::IsAncestor, 0, 2).unwrap());
        assert!(g.relation_holds(RelationKind::IsParent, 0, 2).unwrap());
    }

    #[test]
    fn relation_errors() {
        let c = chain();
        assert_eq!(
            c.relation_holds(RelationKind::IsParent, 0, 3),
            Err(Error::NodeOutOfRange { index: 3, n: 3 })
        );
        assert!(c.relation_holds(RelationKind::IsParent, 1, 1).is_err());
    }

    #[test]
    fn construction_rejects_bad_graphs() {
        assert_eq!(Dag::new(2, [(0, 1), (1, 0)]), Err(Error::Cyclic));
        assert_eq!(Dag::new(2, [(0, 0)]), Err(Error::SelfLoop(0)));
        assert_eq!(Dag::new(2, [(0, 1), (0, 1)]), Err(Error::DuplicateEdge(0, 1)));
        assert!(matches!(Dag::new(2, [(0, 5)]), Err(Error::NodeOutOfRange { .. })));
    }

    #[test]
    fn canonical_form_examples() {
        let ab = Dag::new(3, [(0, 1)]).unwrap();
        let bc = Dag::new(3, [(1, 2)]).unwrap();
        assert_eq!(canonical_form(&ab), canonical_form(&bc));
        let empty = Dag::new(3, []).unwrap();
        assert_eq!(canonical_form(&empty), "000000000");
        let fork = Dag::new(3, [(0, 1), (0, 2)]).unwrap();
        assert_ne!(canonical_form(&chain()), canonical_form(&fork));
    }

    #[test]
    fn small_enumeration_counts() {
        assert_eq!(enumerate_dags(1).len(), 1);
        assert_eq!(enumerate_dags(2).len(), 2);
        assert_eq!(enumerate_dags(3).len(), 6);
        assert_eq!(enumerate_dags(4).len(), 31);
    }

    #[test]
    fn enumeration_is_sorted_and_upper_triangular() {
        let all = enumerate_dags(4);
        assert!(all.windows(2).all(|w| w[0].canonical < w[1].canonical));
        assert!(all.iter().all(|e| e.dag.is_upper_triangular()));
        assert!(all.iter().all(|e| canonical_form(&e.dag) == e.canonical));
    }

    #[test]
    fn permutations_are_lexicographic() {
        let p = permutations(3);
        assert_eq!(p.len(), 6);
        assert_eq!(p[0], vec![0, 1, 2]);
        assert_eq!(p[5], vec![2, 1, 0]);
    }
}
