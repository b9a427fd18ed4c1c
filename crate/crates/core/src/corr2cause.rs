//! Correlation-to-causation inference records.
//!
//! Each record pairs a verbalized set of (conditional) independence facts
//! with a hypothesis about one pairwise causal relation. The label says
//! whether the relation holds in every DAG consistent with the facts.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::sync::OnceLock;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::dag::{default_names, enumerate_dags, upper_pairs, Dag, RelationKind};
use crate::error::{Error, Result};
use crate::independence::{cluster_mecs, mec_members, IndependenceStructure, PairFact};

pub const MIN_NODES: usize = 2;
pub const MAX_NODES: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TemplateVariant {
    Original,
    Paraphrased,
}

/// A causal claim about the pair `(i, j)`, always with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Hypothesis {
    pub rel: RelationKind,
    pub i: usize,
    pub j: usize,
    pub variant: TemplateVariant,
}

impl Hypothesis {
    pub fn new(rel: RelationKind, i: usize, j: usize) -> Result<Hypothesis> {
        if i >= j {
            return Err(Error::InvalidArgument(format!(
                "hypothesis pair must satisfy i < j, got ({i}, {j})"
            )));
        }
        Ok(Hypothesis { rel, i, j, variant: TemplateVariant::Original })
    }
}

/// All `3n(n-1)` hypotheses on `n` nodes, relation-major then pair order.
pub fn hypotheses(n: usize) -> Vec<Hypothesis> {
    let pairs = upper_pairs(n);
    RelationKind::ALL
        .iter()
        .flat_map(|&rel| {
            pairs.iter().map(move |&(i, j)| Hypothesis {
                rel,
                i,
                j,
                variant: TemplateVariant::Original,
            })
        })
        .collect()
}

/// Whether `rel(i, j)` holds in every DAG realizing `structure`.
pub fn label_validity(
    structure: &IndependenceStructure,
    rel: RelationKind,
    i: usize,
    j: usize,
) -> Result<bool> {
    if i >= j || j >= structure.n() {
        return Err(Error::InvalidArgument(format!(
            "pair ({i}, {j}) is not an ordered pair of nodes 0..{}",
            structure.n()
        )));
    }
    let members = mec_members(structure)?;
    holds_in_all(&members, rel, i, j)
}

fn holds_in_all(members: &[Dag], rel: RelationKind, i: usize, j: usize) -> Result<bool> {
    for m in members {
        if !m.relation_holds(rel, i, j)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn join_names(names: &[String]) -> String {
    match names {
        [] => String::new(),
        [only] => only.clone(),
        [init @ .., last] => format!("{} and {}", init.join(", "), last),
    }
}

/// Renders the facts of `structure` as a premise paragraph.
pub fn verbalize_premise(structure: &IndependenceStructure, names: &[String]) -> Result<String> {
    let n = structure.n();
    if names.len() != n {
        return Err(Error::NameCount { expected: n, got: names.len() });
    }
    let mut out = format!(
        "Suppose there is a closed system of {n} variables, {}. \
         All the statistical relations among these {n} variables are as follows:",
        join_names(names)
    );
    for ((i, j), fact) in structure.facts() {
        let (a, b) = (&names[i], &names[j]);
        match fact {
            PairFact::DirectlyCorrelated => out.push_str(&format!(" {a} correlates with {b}.")),
            PairFact::Separated(z) if z.is_empty() => {
                out.push_str(&format!(" {a} is independent of {b}."))
            }
            PairFact::Separated(z) => {
                let given: Vec<String> = z.iter().map(|k| names[k].clone()).collect();
                out.push_str(&format!(" {a} is independent of {b} given {}.", given.join(", ")));
            }
        }
    }
    Ok(out)
}

fn template(rel: RelationKind, variant: TemplateVariant) -> &'static str {
    use RelationKind::*;
    use TemplateVariant::*;
    match (rel, variant) {
        (IsParent, Original) => "{i} directly causes {j}.",
        (IsAncestor, Original) => "{i} causes something else which causes {j}.",
        (IsChild, Original) => "{j} directly causes {i}.",
        (IsDescendant, Original) => "{j} is a cause for {i}, but not a direct one.",
        (HasCollider, Original) => {
            "There exists at least one collider (i.e., common effect) of {i} and {j}."
        }
        (HasConfounder, Original) => {
            "There exists at least one confounder (i.e., common cause) of {i} and {j}."
        }
        (IsParent, Paraphrased) => "{i} directly affects {j}.",
        (IsAncestor, Paraphrased) => "{i} influences {j} through some mediator(s).",
        (IsChild, Paraphrased) => "{j} directly affects {i}.",
        (IsDescendant, Paraphrased) => "{j} influences {i} through some mediator(s).",
        (HasCollider, Paraphrased) => "{i} and {j} together cause some other variable(s).",
        (HasConfounder, Paraphrased) => "Some variable(s) cause(s) both {i} and {j}.",
    }
}

fn fill(rel: RelationKind, variant: TemplateVariant, a: &str, b: &str) -> String {
    template(rel, variant).replace("{i}", a).replace("{j}", b)
}

pub fn verbalize_hypothesis(h: &Hypothesis, names: &[String]) -> String {
    fill(h.rel, h.variant, &names[h.i], &names[h.j])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Split {
    Train,
    Dev,
    Test,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::Dev, Split::Test];

    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Dev => "dev",
            Split::Test => "test",
        }
    }
}

/// One premise/hypothesis pair with its validity label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub premise: String,
    pub hypothesis: String,
    pub label: u8,
    pub n: usize,
    pub mec_id: usize,
    pub relation: RelationKind,
    pub pair: [usize; 2],
    pub variant: TemplateVariant,
    pub split: Split,
}

/// How records of each node count are divided between test, dev and train.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SplitPolicy {
    /// Per-n test/dev sizes of the released benchmark.
    #[default]
    Published,
    /// `min(1000, 10%)` each for test and dev when `n >= 4`; small graphs
    /// are halved between test and dev.
    Rule,
}

impl SplitPolicy {
    /// `(test, dev)` sizes for a subset of `total` records on `n` nodes.
    pub fn quota(self, n: usize, total: usize) -> (usize, usize) {
        match self {
            SplitPolicy::Published => {
                let (t, d) = match n {
                    2 => (6, 6),
                    3 => (48, 42),
                    4 => (72, 72),
                    5 => (514, 482),
                    6 => (522, 474),
                    _ => return SplitPolicy::Rule.quota(n, total),
                };
                (t.min(total), d.min(total - t.min(total)))
            }
            SplitPolicy::Rule => {
                if n <= 3 {
                    (total - total / 2, total / 2)
                } else {
                    let q = (total / 10).min(1000);
                    (q, q)
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildConfig {
    pub max_n: usize,
    pub seed: u64,
    pub split: SplitPolicy,
}

impl BuildConfig {
    pub fn new(max_n: usize, seed: u64) -> Self {
        BuildConfig { max_n, seed, split: SplitPolicy::default() }
    }
}

/// Records for every node count `2..=max_n`.
pub fn build_dataset(config: &BuildConfig) -> Result<Vec<Record>> {
    if !(MIN_NODES..=MAX_NODES).contains(&config.max_n) {
        return Err(Error::InvalidArgument(format!(
            "max_n must lie in {MIN_NODES}..={MAX_NODES}, got {}",
            config.max_n
        )));
    }
    let mut all = Vec::new();
    for n in MIN_NODES..=config.max_n {
        all.extend(build_subset(n, config.seed, config.split)?);
    }
    Ok(all)
}

/// Records for graphs on exactly `n` nodes, with split tags assigned.
pub fn build_subset(n: usize, seed: u64, policy: SplitPolicy) -> Result<Vec<Record>> {
    let dags: Vec<Dag> = enumerate_dags(n).into_iter().map(|e| e.dag).collect();
    let mecs = cluster_mecs(&dags)?;
    let names = default_names(n);
    let hyps = hypotheses(n);
    log::info!("n={n}: {} DAGs in {} classes", dags.len(), mecs.len());

    let per_mec: Vec<Vec<Record>> = mecs
        .par_iter()
        .map(|mec| {
            let premise = verbalize_premise(&mec.structure, &names)?;
            hyps.iter()
                .map(|h| {
                    let label = holds_in_all(&mec.members, h.rel, h.i, h.j)?;
                    Ok(Record {
                        premise: premise.clone(),
                        hypothesis: verbalize_hypothesis(h, &names),
                        label: label as u8,
                        n,
                        mec_id: mec.id,
                        relation: h.rel,
                        pair: [h.i, h.j],
                        variant: h.variant,
                        split: Split::Train,
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut records: Vec<Record> = per_mec.into_iter().flatten().collect();

    let (test, dev) = policy.quota(n, records.len());
    let mut order: Vec<usize> = (0..records.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    order.shuffle(&mut rng);
    for (rank, &idx) in order.iter().enumerate() {
        records[idx].split = if rank < test {
            Split::Test
        } else if rank < test + dev {
            Split::Dev
        } else {
            Split::Train
        };
    }
    Ok(records)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerturbMode {
    Paraphrase,
    Refactor,
}

fn capital_token() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"\b[A-Z]\b").expect("valid regex"))
}

/// Maps `A <-> Z`, `B <-> Y`, ... on every standalone capital letter.
///
/// Tokens outside the first `n` letters and their mirrors are rejected, so
/// the map is an involution on any text this crate produces.
pub fn refactor_variables(text: &str, n: usize) -> Result<String> {
    let mut bad = None;
    let out = capital_token().replace_all(text, |caps: &regex::Captures| {
        let c = caps[0].as_bytes()[0];
        let idx = (c - b'A') as usize;
        if idx >= n && 25 - idx >= n {
            bad.get_or_insert_with(|| caps[0].to_string());
        }
        ((b'Z' - (c - b'A')) as char).to_string()
    });
    match bad {
        Some(tok) => Err(Error::UnknownVariable(tok)),
        None => Ok(out.into_owned()),
    }
}

fn hypothesis_pattern(rel: RelationKind, variant: TemplateVariant) -> Regex {
    let t = regex::escape(template(rel, variant));
    let t = t
        .replace(r"\{i\}", r"(?P<i>\w+)")
        .replace(r"\{j\}", r"(?P<j>\w+)");
    Regex::new(&format!("^{t}$")).expect("template pattern")
}

/// Applies a robustness perturbation; the label is left untouched.
pub fn perturb(record: &Record, mode: PerturbMode) -> Result<Record> {
    let mut out = record.clone();
    match mode {
        PerturbMode::Paraphrase => {
            let re = hypothesis_pattern(record.relation, record.variant);
            let caps = re.captures(&record.hypothesis).ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "hypothesis does not match the {:?} template: {}",
                    record.relation, record.hypothesis
                ))
            })?;
            out.hypothesis = fill(record.relation, TemplateVariant::Paraphrased, &caps["i"], &caps["j"]);
            out.variant = TemplateVariant::Paraphrased;
        }
        PerturbMode::Refactor => {
            out.premise = refactor_variables(&record.premise, record.n)?;
            out.hypothesis = refactor_variables(&record.hypothesis, record.n)?;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SubsetStats {
    pub samples: usize,
    pub positives: usize,
    pub positive_pct: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub samples: usize,
    pub positives: usize,
    pub positive_pct: f64,
    pub per_n: BTreeMap<usize, SubsetStats>,
    pub splits: BTreeMap<String, usize>,
    pub mecs_per_n: BTreeMap<usize, usize>,
    pub tokens_per_premise: f64,
    pub tokens_per_hypothesis: f64,
    pub vocab_size: usize,
}

fn pct(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        100.0 * num as f64 / den as f64
    }
}

fn tokens(text: &str) -> impl Iterator<Item = &str> {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"\w+|[^\w\s]").expect("valid regex"))
        .find_iter(text)
        .map(|m| m.as_str())
}

pub fn dataset_stats(records: &[Record]) -> DatasetStats {
    let mut s = DatasetStats::default();
    let mut vocab = BTreeSet::new();
    let mut mecs: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    let (mut premise_tokens, mut hyp_tokens) = (0usize, 0usize);
    for r in records {
        s.samples += 1;
        s.positives += r.label as usize;
        let e = s.per_n.entry(r.n).or_default();
        e.samples += 1;
        e.positives += r.label as usize;
        *s.splits.entry(r.split.as_str().to_string()).or_default() += 1;
        mecs.entry(r.n).or_default().insert(r.mec_id);
        for t in tokens(&r.premise) {
            premise_tokens += 1;
            vocab.insert(t.to_string());
        }
        for t in tokens(&r.hypothesis) {
            hyp_tokens += 1;
            vocab.insert(t.to_string());
        }
    }
    s.positive_pct = pct(s.positives, s.samples);
    for e in s.per_n.values_mut() {
        e.positive_pct = pct(e.positives, e.samples);
    }
    s.mecs_per_n = mecs.into_iter().map(|(n, ids)| (n, ids.len())).collect();
    if s.samples > 0 {
        s.tokens_per_premise = premise_tokens as f64 / s.samples as f64;
        s.tokens_per_hypothesis = hyp_tokens as f64 / s.samples as f64;
    }
    s.vocab_size = vocab.len();
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::independence::independence_structure;

    fn names(n: usize) -> Vec<String> {
        default_names(n)
    }

    #[test]
    fn two_node_correlation_does_not_fix_direction() {
        let s = independence_structure(&Dag::new(2, [(0, 1)]).unwrap());
        assert!(!label_validity(&s, RelationKind::IsParent, 0, 1).unwrap());
    }

    #[test]
    fn v_structure_collider_is_valid() {
        let s = independence_structure(&Dag::new(3, [(0, 2), (1, 2)]).unwrap());
        assert!(label_validity(&s, RelationKind::HasCollider, 0, 1).unwrap());
    }

    #[test]
    fn chain_facts_do_not_imply_parent() {
        let s = independence_structure(&Dag::new(3, [(0, 1), (1, 2)]).unwrap());
        assert!(!label_validity(&s, RelationKind::IsParent, 0, 1).unwrap());
    }

    #[test]
    fn premise_text_for_chain() {
        let s = independence_structure(&Dag::new(3, [(0, 1), (1, 2)]).unwrap());
        assert_eq!(
            verbalize_premise(&s, &names(3)).unwrap(),
            "Suppose there is a closed system of 3 variables, A, B and C. All the statistical \
             relations among these 3 variables are as follows: A correlates with B. \
             A is independent of C given B. B correlates with C."
        );
    }

    #[test]
    fn premise_for_empty_pair() {
        let s = independence_structure(&Dag::new(2, []).unwrap());
        let p = verbalize_premise(&s, &names(2)).unwrap();
        assert!(p.starts_with("Suppose there is a closed system of 2 variables, A and B."));
        assert!(p.ends_with(" A is independent of B."));
    }

    #[test]
    fn premise_rejects_wrong_name_count() {
        let s = independence_structure(&Dag::new(2, []).unwrap());
        assert_eq!(
            verbalize_premise(&s, &names(3)),
            Err(Error::NameCount { expected: 2, got: 3 })
        );
    }

    #[test]
    fn hypothesis_templates() {
        let nm = names(2);
        let mut h = Hypothesis::new(RelationKind::IsParent, 0, 1).unwrap();
        assert_eq!(verbalize_hypothesis(&h, &nm), "A directly causes B.");
        h.variant = TemplateVariant::Paraphrased;
        assert_eq!(verbalize_hypothesis(&h, &nm), "A directly affects B.");
        let h = Hypothesis::new(RelationKind::IsDescendant, 0, 1).unwrap();
        assert_eq!(verbalize_hypothesis(&h, &nm), "B is a cause for A, but not a direct one.");
        assert!(Hypothesis::new(RelationKind::IsParent, 1, 0).is_err());
    }

    #[test]
    fn small_subsets_have_published_sizes() {
        let two = build_subset(2, 7, SplitPolicy::Published).unwrap();
        assert_eq!(two.len(), 12);
        assert!(two.iter().all(|r| r.label == 0));
        let three = build_subset(3, 7, SplitPolicy::Published).unwrap();
        assert_eq!(three.len(), 90);
        assert_eq!(three.iter().filter(|r| r.label == 1).count(), 3);
        assert!(three.iter().all(|r| r.split != Split::Train));
        assert_eq!(three.iter().filter(|r| r.split == Split::Test).count(), 48);
    }

    #[test]
    fn refactor_is_an_involution() {
        let text = "Suppose there is a closed system of 3 variables, A, B and C. A correlates with C.";
        let once = refactor_variables(text, 3).unwrap();
        assert!(once.contains("Z, Y and X"));
        assert_eq!(refactor_variables(&once, 3).unwrap(), text);
        assert_eq!(refactor_variables("M causes A.", 3), Err(Error::UnknownVariable("M".into())));
    }

    #[test]
    fn paraphrase_keeps_label_and_premise() {
        let recs = build_subset(3, 1, SplitPolicy::Published).unwrap();
        for r in &recs {
            let p = perturb(r, PerturbMode::Paraphrase).unwrap();
            assert_eq!(p.label, r.label);
            assert_eq!(p.premise, r.premise);
            assert_eq!(p.variant, TemplateVariant::Paraphrased);
        }
        let first = perturb(&recs[0], PerturbMode::Paraphrase).unwrap();
        assert_eq!(first.hypothesis, "A directly affects B.");
    }

    #[test]
    fn stats_of_nothing_are_zero() {
        let s = dataset_stats(&[]);
        assert_eq!(s.samples, 0);
        assert_eq!(s.positive_pct, 0.0);
        assert_eq!(s.vocab_size, 0);
    }

    #[test]
    fn rule_policy_quota() {
        assert_eq!(SplitPolicy::Rule.quota(5, 8520), (852, 852));
        assert_eq!(SplitPolicy::Rule.quota(6, 198630), (1000, 1000));
        assert_eq!(SplitPolicy::Published.quota(5, 8520), (514, 482));
    }
}
