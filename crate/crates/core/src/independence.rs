//! d-separation, all-pairs independence structures, and Markov equivalence
//! classes.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::dag::{permutations, upper_pairs, Dag};
use crate::error::{Error, Result};
use crate::nodeset::NodeSet;

/// Largest node count for which structures are compared up to relabeling.
pub const MAX_STRUCTURE_NODES: usize = 6;

/// Whether `i` and `j` are d-separated by `z` in `dag`.
///
/// Reachability search over (node, direction) states: a trail may pass a
/// non-collider only if it is unobserved, and a collider only if it or one of
/// its descendants is in `z`.
pub fn is_d_separated(dag: &Dag, i: usize, j: usize, z: NodeSet) -> Result<bool> {
    let n = dag.n();
    for k in [i, j] {
        if k >= n {
            return Err(Error::NodeOutOfRange { index: k, n });
        }
    }
    if i == j {
        return Err(Error::InvalidArgument("d-separation needs two distinct nodes".into()));
    }
    if z.contains(i) || z.contains(j) {
        return Err(Error::InvalidArgument("endpoints must not be in the conditioning set".into()));
    }
    if !z.is_subset(NodeSet::full(n)) {
        return Err(Error::InvalidArgument("conditioning set has out-of-range nodes".into()));
    }
    Ok(!reachable(dag, i, z).contains(j))
}

/// Nodes d-connected to `source` given `z`.
fn reachable(dag: &Dag, source: usize, z: NodeSet) -> NodeSet {
    // Ancestors of the conditioning set, inclusive.
    let mut anc = z;
    for k in z.iter() {
        anc = anc.union(dag.ancestors(k));
    }
    // visited[dir] holds nodes visited travelling up (0) or down (1).
    let mut visited = [NodeSet::EMPTY; 2];
    let mut stack = vec![(source, 0usize)];
    let mut result = NodeSet::EMPTY;
    while let Some((v, dir)) = stack.pop() {
        if visited[dir].contains(v) {
            continue;
        }
        visited[dir].insert(v);
        let observed = z.contains(v);
        if !observed {
            result.insert(v);
        }
        if dir == 0 {
            if !observed {
                stack.extend(dag.parents(v).iter().map(|p| (p, 0)));
                stack.extend(dag.children(v).iter().map(|c| (c, 1)));
            }
        } else {
            if !observed {
                stack.extend(dag.children(v).iter().map(|c| (c, 1)));
            }
            if anc.contains(v) {
                stack.extend(dag.parents(v).iter().map(|p| (p, 0)));
            }
        }
    }
    result.remove(source);
    result
}

/// The statistical relation reported for one pair of variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairFact {
    DirectlyCorrelated,
    /// Independent given the witness set (possibly empty).
    Separated(NodeSet),
}

/// All d-separation facts of a labeled DAG.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndependenceStructure {
    n: usize,
    /// Per pair `(i, j)`, `i < j`, in row-major order: every separating set,
    /// sorted by size then lexicographically.
    separating: Vec<Vec<NodeSet>>,
}

impl IndependenceStructure {
    pub fn n(&self) -> usize {
        self.n
    }

    fn pair_index(&self, i: usize, j: usize) -> usize {
        let (a, b) = (i.min(j), i.max(j));
        // offset of row a plus column within it
        a * (2 * self.n - a - 1) / 2 + (b - a - 1)
    }

    /// Every separating set for the pair.
    pub fn separating_sets(&self, i: usize, j: usize) -> &[NodeSet] {
        &self.separating[self.pair_index(i, j)]
    }

    /// The reported fact; the witness is the smallest separating set,
    /// ties broken lexicographically.
    pub fn fact(&self, i: usize, j: usize) -> PairFact {
        match self.separating_sets(i, j).first() {
            None => PairFact::DirectlyCorrelated,
            Some(&w) => PairFact::Separated(w),
        }
    }

    /// Facts for all pairs `(i, j)`, `i < j`, in lexicographic order.
    pub fn facts(&self) -> Vec<((usize, usize), PairFact)> {
        upper_pairs(self.n).into_iter().map(|(i, j)| ((i, j), self.fact(i, j))).collect()
    }

    /// Builds a structure from explicitly listed separating sets. Pairs not
    /// mentioned are directly correlated.
    pub fn from_separating_sets(
        n: usize,
        sets: impl IntoIterator<Item = ((usize, usize), Vec<NodeSet>)>,
    ) -> Result<IndependenceStructure> {
        let mut s = IndependenceStructure { n, separating: vec![Vec::new(); n * (n - 1) / 2] };
        for ((i, j), mut fam) in sets {
            if i >= n || j >= n || i == j {
                return Err(Error::InvalidArgument(format!("bad pair ({i}, {j})")));
            }
            fam.sort_by(|a, b| a.cmp_by_size_then_lex(*b));
            fam.dedup();
            let k = s.pair_index(i, j);
            s.separating[k] = fam;
        }
        Ok(s)
    }

    /// Skeleton implied by the facts: the directly correlated pairs.
    pub fn skeleton(&self) -> Vec<(usize, usize)> {
        upper_pairs(self.n)
            .into_iter()
            .filter(|&(i, j)| self.separating_sets(i, j).is_empty())
            .collect()
    }

    /// Each pair's family of separating sets packed as a bitmask over subset
    /// codes. Needs `n <= 6`.
    fn packed(&self) -> Vec<u64> {
        self.separating
            .iter()
            .map(|fam| fam.iter().fold(0u64, |acc, s| acc | 1 << s.bits()))
            .collect()
    }

    /// Relabels node `i` as `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> IndependenceStructure {
        let sets = upper_pairs(self.n).into_iter().map(|(i, j)| {
            let fam = self
                .separating_sets(i, j)
                .iter()
                .map(|s| s.iter().map(|k| perm[k]).collect())
                .collect();
            ((perm[i], perm[j]), fam)
        });
        IndependenceStructure::from_separating_sets(self.n, sets).expect("valid relabeling")
    }
}

/// For every pair, tries every subset of the remaining nodes.
pub fn independence_structure(dag: &Dag) -> IndependenceStructure {
    let n = dag.n();
    let all = NodeSet::full(n);
    let separating = upper_pairs(n)
        .into_iter()
        .map(|(i, j)| {
            let rest = all.without(i).without(j);
            let mut fam: Vec<NodeSet> = rest
                .subsets()
                .filter(|&z| is_d_separated(dag, i, j, z).expect("valid pair"))
                .collect();
            fam.sort_by(|a, b| a.cmp_by_size_then_lex(*b));
            fam
        })
        .collect();
    IndependenceStructure { n, separating }
}

/// Per-permutation lookup from a subset code to its relabeled code.
struct SubsetPermutations {
    perms: Vec<Vec<usize>>,
    tables: Vec<[u8; 64]>,
}

impl SubsetPermutations {
    fn new(n: usize) -> Self {
        let perms = permutations(n);
        let tables = perms
            .iter()
            .map(|p| {
                let mut t = [0u8; 64];
                for (code, slot) in t.iter_mut().enumerate().take(1 << n) {
                    let s = NodeSet::from_bits(code as u64);
                    *slot = s.iter().map(|k| p[k]).collect::<NodeSet>().bits() as u8;
                }
                t
            })
            .collect();
        SubsetPermutations { perms, tables }
    }
}

/// Lexicographically smallest packed encoding over all relabelings, with the
/// permutation achieving it.
fn relabel_minimum(s: &IndependenceStructure, sp: &SubsetPermutations) -> (Vec<u64>, usize) {
    let n = s.n;
    let pairs = upper_pairs(n);
    let packed = s.packed();
    let mut index = vec![vec![0usize; n]; n];
    for (k, &(i, j)) in pairs.iter().enumerate() {
        index[i][j] = k;
        index[j][i] = k;
    }
    let mut best: Option<Vec<u64>> = None;
    let mut best_perm = 0;
    let mut cand = vec![0u64; pairs.len()];
    'perm: for (pi, perm) in sp.perms.iter().enumerate() {
        // inverse: which source pair lands on target pair k
        let mut inv = vec![0usize; n];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let table = &sp.tables[pi];
        let mut smaller = false;
        for (k, &(a, b)) in pairs.iter().enumerate() {
            let mut fam = packed[index[inv[a]][inv[b]]];
            let mut mapped = 0u64;
            while fam != 0 {
                let code = fam.trailing_zeros() as usize;
                fam &= fam - 1;
                mapped |= 1 << table[code];
            }
            cand[k] = mapped;
            if !smaller {
                if let Some(b) = &best {
                    match mapped.cmp(&b[k]) {
                        std::cmp::Ordering::Greater => continue 'perm,
                        std::cmp::Ordering::Less => smaller = true,
                        std::cmp::Ordering::Equal => {}
                    }
                }
            }
        }
        if best.is_none() || smaller {
            best = Some(cand.clone());
            best_perm = pi;
        }
    }
    (best.unwrap_or_default(), best_perm)
}

/// Relabeling-invariant identity of a structure (`n <= 6`).
pub fn structure_key(s: &IndependenceStructure) -> Result<Vec<u64>> {
    if s.n > MAX_STRUCTURE_NODES {
        return Err(Error::TooManyNodes(s.n));
    }
    Ok(relabel_minimum(s, &SubsetPermutations::new(s.n)).0)
}

/// A Markov equivalence class of DAGs, identified up to relabeling.
#[derive(Debug, Clone)]
pub struct Mec {
    pub id: usize,
    /// Facts under the representative labeling.
    pub structure: IndependenceStructure,
    /// A labeled DAG realizing `structure`.
    pub representative: Dag,
    /// Enumerated (unlabeled) DAGs falling into this class.
    pub source_dags: Vec<Dag>,
    /// Every labeled DAG whose structure equals `structure`.
    pub members: Vec<Dag>,
}

/// Groups DAGs whose independence structures agree up to node relabeling.
/// Classes are ordered by their minimal packed encoding.
pub fn cluster_mecs(dags: &[Dag]) -> Result<Vec<Mec>> {
    let Some(first) = dags.first() else {
        return Ok(Vec::new());
    };
    let n = first.n();
    if let Some(d) = dags.iter().find(|d| d.n() != n) {
        return Err(Error::MixedNodeCounts(n, d.n()));
    }
    if n > MAX_STRUCTURE_NODES {
        return Err(Error::TooManyNodes(n));
    }
    let sp = SubsetPermutations::new(n);
    let keyed: Vec<(Vec<u64>, usize)> = dags
        .par_iter()
        .map(|d| relabel_minimum(&independence_structure(d), &sp))
        .collect();

    let mut groups: BTreeMap<Vec<u64>, Vec<usize>> = BTreeMap::new();
    for (idx, (key, _)) in keyed.iter().enumerate() {
        groups.entry(key.clone()).or_default().push(idx);
    }
    let groups: Vec<Vec<usize>> = groups.into_values().collect();
    groups
        .into_par_iter()
        .enumerate()
        .map(|(id, idxs)| {
            let lead = idxs[0];
            let perm = &sp.perms[keyed[lead].1];
            let representative = dags[lead].permuted(perm).renamed(dags[lead].names().to_vec())?;
            let structure = independence_structure(&representative);
            let members = mec_members(&structure)?;
            Ok(Mec {
                id,
                structure,
                representative,
                source_dags: idxs.iter().map(|&k| dags[k].clone()).collect(),
                members,
            })
        })
        .collect()
}

/// Every labeled DAG whose independence structure equals `structure`.
///
/// Orients the skeleton: edges of unshielded colliders are forced, the rest
/// are tried both ways, and orientations that are cyclic or create extra
/// colliders are dropped.
pub fn mec_members(structure: &IndependenceStructure) -> Result<Vec<Dag>> {
    let n = structure.n();
    let skeleton = structure.skeleton();
    let mut adj = vec![NodeSet::EMPTY; n];
    for &(i, j) in &skeleton {
        adj[i].insert(j);
        adj[j].insert(i);
    }
    // Target unshielded colliders, from the witness sets.
    let mut forced = vec![NodeSet::EMPTY; n]; // forced[k] = parents forced into k
    let mut targets = Vec::new();
    for (i, j) in upper_pairs(n) {
        if adj[i].contains(j) {
            continue;
        }
        let PairFact::Separated(w) = structure.fact(i, j) else { unreachable!() };
        for k in adj[i].intersection(adj[j]).iter() {
            if !w.contains(k) {
                forced[k].insert(i);
                forced[k].insert(j);
                targets.push((i, k, j));
            }
        }
    }
    targets.sort_unstable();
    let mut fixed = Vec::new();
    let mut free = Vec::new();
    for &(i, j) in &skeleton {
        match (forced[j].contains(i), forced[i].contains(j)) {
            (true, true) => return Err(Error::Unrealizable),
            (true, false) => fixed.push((i, j)),
            (false, true) => fixed.push((j, i)),
            (false, false) => free.push((i, j)),
        }
    }
    if free.len() > 40 {
        return Err(Error::TooManyNodes(n));
    }
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << free.len()) {
        let edges = fixed.iter().copied().chain(
            free.iter()
                .enumerate()
                .map(|(k, &(i, j))| if mask >> k & 1 == 1 { (j, i) } else { (i, j) }),
        );
        let Ok(dag) = Dag::new(n, edges) else { continue };
        if dag.v_structures() == targets && independence_structure(&dag) == *structure {
            out.push(dag);
        }
    }
    if out.is_empty() {
        return Err(Error::Unrealizable);
    }
    out.sort_by(|a, b| a.edges().cmp(b.edges()));
    Ok(out)
}
