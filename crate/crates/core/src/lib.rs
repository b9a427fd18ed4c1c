//! Generators for two families of synthetic causal-reasoning benchmarks.
//!
//! The first half of the crate turns graph theory into labeled data: it
//! enumerates every DAG on a handful of nodes, computes all d-separation
//! facts, groups graphs into Markov equivalence classes, and asks which
//! causal relations are implied by a set of correlations alone.
//!
//! The second half is an exact causal inference engine over Bernoulli
//! causal Bayesian networks. It derives closed-form estimands for
//! associational, interventional, and counterfactual queries on a bank of
//! small textbook graphs, evaluates them, and verbalizes the result as
//! yes/no questions with step-by-step explanations.

pub mod cbn;
pub mod cladder;
pub mod cli;
pub mod corr2cause;
pub mod dag;
pub mod engine;
pub mod error;
pub mod independence;
pub mod nodeset;

pub use dag::{canonical_form, enumerate_dags, Dag, RelationKind};
pub use error::{Error, Result};
pub use independence::{
    cluster_mecs, independence_structure, is_d_separated, mec_members, IndependenceStructure, Mec,
    PairFact,
};
pub use nodeset::NodeSet;
