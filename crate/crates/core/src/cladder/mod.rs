//! Ladder-of-causation question generator.
//!
//! Each record pairs a bank graph and query with a story, samples a
//! Bernoulli network whose answer is unambiguous, verbalizes everything as
//! text and attaches a six-step worked explanation. The network is stored
//! in the record so the answer can always be re-derived.

pub mod story;
pub mod text;

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cbn::BernoulliCbn;
use crate::engine::expr::{data_value, DataTerm, Expr};
use crate::engine::{
    answer, coverage, derive_estimand, ground_truth, scm_invariant, Answer, GraphId, Polarity, Query,
    QueryKind,
};
use crate::error::{Error, Result};

pub use story::{Forms, Sense, Story};

/// Parameter draws allowed per record before giving up.
pub const RESAMPLE_BUDGET: usize = 1000;

/// Draws every CPD entry as a whole percent in `[5%, 95%]`.
///
/// On the IV graph the treatment's first stage is additive in the
/// instrument and the hidden confounder, so the instrument shifts
/// treatment by the same amount in every stratum.
pub fn sample_cbn<R: Rng + ?Sized>(graph: GraphId, rng: &mut R) -> BernoulliCbn {
    let g = graph.graph();
    let dag = &g.dag;
    let pct = |k: i64| k as f64 / 100.0;
    let mut cpds: Vec<Vec<f64>> = (0..dag.n())
        .map(|i| (0..1usize << dag.parents(i).len()).map(|_| pct(rng.gen_range(5..=95))).collect())
        .collect();
    if graph == GraphId::Iv {
        let (v1, v2) = (g.node("V1"), g.node("V2"));
        debug_assert!(v1 < v2, "config bit 0 is V1, bit 1 is V2");
        let a = rng.gen_range(5..=90);
        let b = rng.gen_range(5..=95 - a);
        let c = rng.gen_range(5 - a..=95 - a - b);
        cpds[g.x] = vec![pct(a), pct(a + c), pct(a + b), pct(a + b + c)];
    }
    BernoulliCbn::new(dag.clone(), cpds).expect("sampled cpds are valid")
}

/// A parameter draw that passed the ambiguity gate.
#[derive(Debug, Clone)]
pub struct Sample {
    pub cbn: BernoulliCbn,
    pub estimand: Expr,
    /// Data terms at the whole-percent precision the question states.
    pub data: Vec<(DataTerm, f64)>,
    /// Estimand on the exact network.
    pub value: f64,
    /// Estimand on the stated data.
    pub data_value: f64,
    /// Answer under positive phrasing.
    pub answer: Answer,
}

fn try_sample(graph: GraphId, query: &Query, cbn: BernoulliCbn, estimand: &Expr) -> Result<Sample> {
    let positive = query.with_polarity(Polarity::Positive);
    let value = estimand.evaluate(&cbn)?;
    let exact = answer(&positive, value)?;
    let data = estimand
        .required_data()
        .into_iter()
        .map(|t| Ok((t.clone(), text::rounded(data_value(&cbn, &t)?))))
        .collect::<Result<Vec<_>>>()?;
    let data_value = estimand.evaluate_table(&data)?;
    if answer(&positive, data_value)? != exact {
        return Err(Error::Ambiguous(data_value));
    }
    if !scm_invariant(graph, query, &cbn)? {
        return Err(Error::Unrealizable);
    }
    Ok(Sample { cbn, estimand: estimand.clone(), data, value, data_value, answer: exact })
}

/// Samples until the answer is clear both on the exact network and on the
/// rounded data, and for counterfactual queries does not depend on how
/// the response functions are coupled.
pub fn sample_accepted<R: Rng + ?Sized>(graph: GraphId, query: &Query, rng: &mut R) -> Result<Sample> {
    let estimand = derive_estimand(graph, query)?;
    for _ in 0..RESAMPLE_BUDGET {
        match try_sample(graph, query, sample_cbn(graph, rng), &estimand) {
            Ok(s) => return Ok(s),
            Err(Error::Ambiguous(_) | Error::Degenerate | Error::Unrealizable) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::BudgetExhausted(RESAMPLE_BUDGET))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub graph: GraphId,
    pub query: QueryKind,
    pub rung: u8,
    pub story: String,
    pub sense: Sense,
    pub cpds: Vec<Vec<f64>>,
    pub estimand: String,
    pub value: f64,
    pub polarity: Polarity,
    pub collider_value: bool,
    pub adjustment: Option<String>,
}

impl Meta {
    pub fn query(&self) -> Result<Query> {
        let g = self.graph.graph();
        let adjustment = match &self.adjustment {
            Some(name) => Some(g.dag.index_of(name).ok_or_else(|| Error::UnknownVariable(name.clone()))?),
            None => None,
        };
        Ok(Query { kind: self.query, polarity: self.polarity, collider_value: self.collider_value, adjustment })
    }

    pub fn cbn(&self) -> Result<BernoulliCbn> {
        BernoulliCbn::new(self.graph.graph().dag.clone(), self.cpds.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub question: String,
    pub answer: Answer,
    pub explanation: String,
    pub meta: Meta,
}

/// Builds one record whose answer is `target`, flipping the question's
/// phrasing when the sampled network points the other way.
pub fn generate_record<R: Rng + ?Sized>(
    graph: GraphId,
    query: Query,
    story: &Story,
    target: Answer,
    rng: &mut R,
) -> Result<Record> {
    let g = graph.graph();
    let sample = sample_accepted(graph, &query, rng)?;
    let polarity = if sample.answer == target { Polarity::Positive } else { Polarity::Negative };
    let query = query.with_polarity(polarity);
    let ans = answer(&query, sample.value)?;
    debug_assert_eq!(ans, target);
    let question = text::verbalize_question(g, story, &sample.data, &query)?;
    let explanation =
        text::generate_explanation(g, &query, &sample.estimand, &sample.data, sample.data_value, ans)?;
    Ok(Record {
        question,
        answer: ans,
        explanation,
        meta: Meta {
            graph,
            query: query.kind,
            rung: query.kind.rung(),
            story: story.id.clone(),
            sense: story.sense,
            cpds: sample.cbn.cpds().to_vec(),
            estimand: sample.estimand.render(g.dag.names()),
            value: sample.value,
            polarity,
            collider_value: query.collider_value,
            adjustment: query.adjustment.map(|s| g.dag.name(s).to_string()),
        },
    })
}

/// Re-derives the answer from the network stored in the record, both via
/// the estimand and via the interventional or counterfactual oracle.
pub fn round_trip(record: &Record) -> Result<bool> {
    let m = &record.meta;
    let query = m.query()?;
    let cbn = m.cbn()?;
    let via_estimand = answer(&query, derive_estimand(m.graph, &query)?.evaluate(&cbn)?)?;
    let via_oracle = answer(&query, ground_truth(m.graph, &query, &cbn)?)?;
    Ok(via_estimand == record.answer && via_oracle == record.answer)
}

/// Records per rung: five sixteenths each for rungs 1 and 2, the rest for
/// rung 3.
pub fn rung_quotas(size: usize) -> [usize; 3] {
    let r = size * 5 / 16;
    [r, r, size - 2 * r]
}

struct Slot {
    graph: GraphId,
    query: Query,
    story: &'static Story,
    sense: Sense,
    target: Answer,
}

fn plan(size: usize, seed: u64) -> Vec<Slot> {
    let cells = coverage();
    let quotas = rung_quotas(size);
    let mut slots = Vec::with_capacity(size);
    let mut yes_left = size / 2;
    for (r, &quota) in quotas.iter().enumerate() {
        let rung_cells: Vec<&(GraphId, Query)> =
            cells.iter().filter(|(_, q)| q.kind.rung() as usize == r + 1).collect();
        // Odd rung sizes alternate the spare answer so the total stays even.
        let yes = if r == 2 { yes_left } else { quota / 2 + (quota % 2) * (r == 0) as usize };
        yes_left -= yes;
        let mut targets: Vec<Answer> =
            (0..quota).map(|k| if k < yes { Answer::Yes } else { Answer::No }).collect();
        targets.shuffle(&mut ChaCha8Rng::seed_from_u64(seed ^ (0xA5A5_0000 + r as u64)));
        for (j, target) in targets.into_iter().enumerate() {
            let (graph, query) = *rung_cells[j % rung_cells.len()];
            let round = j / rung_cells.len();
            let stories = story::stories_for(graph);
            slots.push(Slot {
                graph,
                query,
                story: stories[(round / Sense::ALL.len()) % stories.len()],
                sense: Sense::ALL[round % Sense::ALL.len()],
                target,
            });
        }
    }
    slots
}

/// Generates a balanced dataset: exactly half "yes", rungs split
/// 5/16 : 5/16 : 6/16, cells and stories cycled in coverage order. Odd
/// sizes round down to keep the yes/no split exact.
pub fn assemble_dataset(size: usize, seed: u64) -> Result<Vec<Record>> {
    let even = size - size % 2;
    if even == 0 {
        return Err(Error::InvalidArgument(format!("dataset size {size} is too small to balance")));
    }
    if even != size {
        log::warn!("rounding dataset size down from {size} to {even} for an exact yes/no split");
    }
    plan(even, seed)
        .into_par_iter()
        .enumerate()
        .map(|(i, slot)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64 + 1);
            let story = slot.story.with_sense(slot.sense, &mut rng);
            let mut query = slot.query;
            if query.kind == QueryKind::ExplainingAway {
                query.collider_value = rng.gen_bool(0.5);
            }
            generate_record(slot.graph, query, &story, slot.target, &mut rng)
        })
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CladderStats {
    pub samples: usize,
    pub yes: usize,
    pub yes_pct: f64,
    pub per_rung: BTreeMap<u8, usize>,
    pub per_query: BTreeMap<String, usize>,
    pub per_sense: BTreeMap<String, usize>,
    /// Records whose stored answer does not re-derive from their network.
    pub mismatches: usize,
}

pub fn dataset_stats(records: &[Record]) -> CladderStats {
    let mut s = CladderStats::default();
    for r in records {
        s.samples += 1;
        s.yes += (r.answer == Answer::Yes) as usize;
        *s.per_rung.entry(r.meta.rung).or_default() += 1;
        *s.per_query.entry(r.meta.query.as_str().to_string()).or_default() += 1;
        *s.per_sense.entry(r.meta.sense.as_str().to_string()).or_default() += 1;
        s.mismatches += !round_trip(r).unwrap_or(false) as usize;
    }
    if s.samples > 0 {
        s.yes_pct = 100.0 * s.yes as f64 / s.samples as f64;
    }
    s
}
