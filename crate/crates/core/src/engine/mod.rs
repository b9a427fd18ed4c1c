//! Causal inference engine over a fixed bank of small graphs.
//!
//! Every covered (graph, query) pair maps to a closed-form estimand built
//! from observational terms only. The estimand is evaluated on a Bernoulli
//! network and turned into a yes/no answer. An independent oracle computes
//! the same quantity by intervention or by twin-world simulation, so the
//! two can be checked against each other.

pub mod expr;

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::cbn::{BernoulliCbn, ResponseFunctionScm, Unit};
use crate::dag::Dag;
use crate::error::{Error, Result};
use crate::independence::is_d_separated;
use crate::nodeset::NodeSet;

use expr::{bound, fixed, p, p1, sum, Expr, Val};

/// Effects closer to their decision boundary than this are rejected.
pub const AMBIGUITY_EPSILON: f64 = 0.005;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphId {
    Chain,
    Collision,
    Confounding,
    Mediation,
    Diamond,
    #[serde(rename = "diamondcut")]
    DiamondCut,
    Iv,
    Arrowhead,
    Frontdoor,
    Fork,
}

impl GraphId {
    pub const ALL: [GraphId; 10] = [
        GraphId::Chain,
        GraphId::Collision,
        GraphId::Confounding,
        GraphId::Mediation,
        GraphId::Diamond,
        GraphId::DiamondCut,
        GraphId::Iv,
        GraphId::Arrowhead,
        GraphId::Frontdoor,
        GraphId::Fork,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GraphId::Chain => "chain",
            GraphId::Collision => "collision",
            GraphId::Confounding => "confounding",
            GraphId::Mediation => "mediation",
            GraphId::Diamond => "diamond",
            GraphId::DiamondCut => "diamondcut",
            GraphId::Iv => "iv",
            GraphId::Arrowhead => "arrowhead",
            GraphId::Frontdoor => "frontdoor",
            GraphId::Fork => "fork",
        }
    }

    pub fn parse(s: &str) -> Option<GraphId> {
        GraphId::ALL.into_iter().find(|g| g.as_str() == s)
    }

    pub fn graph(self) -> &'static CausalGraph {
        static BANK: OnceLock<Vec<CausalGraph>> = OnceLock::new();
        let bank = BANK.get_or_init(|| GraphId::ALL.iter().map(|&g| CausalGraph::build(g)).collect());
        &bank[self as usize]
    }
}

/// A bank graph with its treatment, outcome and role annotations.
#[derive(Debug, Clone)]
pub struct CausalGraph {
    pub id: GraphId,
    pub dag: Dag,
    pub x: usize,
    pub y: usize,
    /// Nodes never mentioned in the available data.
    pub unobserved: NodeSet,
    /// Nodes on directed paths from `x` to `y`.
    pub mediators: NodeSet,
}

impl CausalGraph {
    fn build(id: GraphId) -> CausalGraph {
        let (names, edges, unobserved): (&[&str], &[(usize, usize)], &[usize]) = match id {
            GraphId::Chain => (&["X", "V2", "Y"], &[(0, 1), (1, 2)], &[]),
            GraphId::Collision => (&["X", "Y", "V3"], &[(0, 2), (1, 2)], &[]),
            GraphId::Confounding => (&["V1", "X", "Y"], &[(0, 1), (0, 2), (1, 2)], &[]),
            GraphId::Mediation => (&["X", "V2", "Y"], &[(0, 1), (0, 2), (1, 2)], &[]),
            GraphId::Diamond => (&["X", "V2", "V3", "Y"], &[(0, 1), (0, 2), (1, 3), (2, 3)], &[]),
            GraphId::DiamondCut => {
                (&["V1", "V3", "X", "Y"], &[(0, 1), (0, 2), (2, 3), (1, 3)], &[])
            }
            GraphId::Iv => (&["V1", "V2", "X", "Y"], &[(0, 2), (0, 3), (1, 2), (2, 3)], &[0]),
            GraphId::Arrowhead => (
                &["X", "V2", "V3", "Y"],
                &[(0, 2), (1, 2), (0, 3), (1, 3), (2, 3)],
                &[],
            ),
            GraphId::Frontdoor => {
                (&["V1", "X", "V3", "Y"], &[(0, 1), (0, 3), (1, 2), (2, 3)], &[0])
            }
            GraphId::Fork => (&["X", "V2", "Y"], &[(0, 2), (1, 2)], &[]),
        };
        let dag = Dag::with_names(
            names.len(),
            edges.iter().copied(),
            names.iter().map(|s| s.to_string()).collect(),
        )
        .expect("bank graphs are valid");
        let x = dag.index_of("X").expect("treatment");
        let y = dag.index_of("Y").expect("outcome");
        let mediators = dag.descendants(x).intersection(dag.ancestors(y));
        CausalGraph { id, x, y, unobserved: unobserved.iter().copied().collect(), mediators, dag }
    }

    pub fn node(&self, name: &str) -> usize {
        self.dag.index_of(name).unwrap_or_else(|| panic!("{name} not in {:?}", self.id))
    }

    /// The collider of the Collision graph.
    pub fn collider(&self) -> Option<usize> {
        (self.id == GraphId::Collision).then(|| self.node("V3"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QueryKind {
    MarginalProb,
    ConditionalProb,
    ExplainingAway,
    BackdoorAdjustmentSet,
    Ate,
    ColliderBias,
    CounterfactualProb,
    Att,
    Nde,
    Nie,
}

impl QueryKind {
    pub const ALL: [QueryKind; 10] = [
        QueryKind::MarginalProb,
        QueryKind::ConditionalProb,
        QueryKind::ExplainingAway,
        QueryKind::BackdoorAdjustmentSet,
        QueryKind::Ate,
        QueryKind::ColliderBias,
        QueryKind::CounterfactualProb,
        QueryKind::Att,
        QueryKind::Nde,
        QueryKind::Nie,
    ];

    pub fn rung(self) -> u8 {
        use QueryKind::*;
        match self {
            MarginalProb | ConditionalProb | ExplainingAway => 1,
            BackdoorAdjustmentSet | Ate | ColliderBias => 2,
            CounterfactualProb | Att | Nde | Nie => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        use QueryKind::*;
        match self {
            MarginalProb => "marginal_prob",
            ConditionalProb => "conditional_prob",
            ExplainingAway => "explaining_away",
            BackdoorAdjustmentSet => "backdoor_adjustment_set",
            Ate => "ate",
            ColliderBias => "collider_bias",
            CounterfactualProb => "counterfactual_prob",
            Att => "att",
            Nde => "nde",
            Nie => "nie",
        }
    }

    pub fn parse(s: &str) -> Option<QueryKind> {
        QueryKind::ALL.into_iter().find(|k| k.as_str() == s)
    }

    /// Human-readable query type name used in explanations.
    pub fn type_name(self) -> &'static str {
        use QueryKind::*;
        match self {
            MarginalProb => "marginal probability",
            ConditionalProb => "conditional probability",
            ExplainingAway => "explaining away effect",
            BackdoorAdjustmentSet => "backdoor adjustment set",
            Ate => "average treatment effect",
            ColliderBias => "collider bias",
            CounterfactualProb => "normal counterfactual question",
            Att => "average treatment effect on treated",
            Nde => "natural direct effect",
            Nie => "natural indirect effect",
        }
    }

    /// Where the yes/no decision flips. Probabilities and 0/1 indicators
    /// are compared to one half, effects to zero.
    pub fn threshold(self) -> f64 {
        match self {
            QueryKind::MarginalProb | QueryKind::CounterfactualProb | QueryKind::BackdoorAdjustmentSet => 0.5,
            _ => 0.0,
        }
    }
}

/// Which way the question is phrased. `Positive` asks about an increase
/// (or "greater than", or "case by case"); `Negative` asks the mirror.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarity {
    #[default]
    Positive,
    Negative,
}

impl Polarity {
    pub fn flipped(self) -> Polarity {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Query {
    pub kind: QueryKind,
    #[serde(default)]
    pub polarity: Polarity,
    /// Observed value of the collider for explaining-away questions.
    #[serde(default = "default_true")]
    pub collider_value: bool,
    /// Candidate adjustment node for backdoor-set questions.
    #[serde(default)]
    pub adjustment: Option<usize>,
}

fn default_true() -> bool {
    true
}

impl Query {
    pub fn new(kind: QueryKind) -> Query {
        Query { kind, polarity: Polarity::Positive, collider_value: true, adjustment: None }
    }

    pub fn with_polarity(mut self, polarity: Polarity) -> Query {
        self.polarity = polarity;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Answer {
    Yes,
    No,
}

impl Answer {
    pub fn as_str(self) -> &'static str {
        match self {
            Answer::Yes => "yes",
            Answer::No => "no",
        }
    }
}

/// Backdoor criterion: no member of `z` descends from `x`, and `z` blocks
/// every path from `x` to `y` that starts with an edge into `x`.
pub fn check_backdoor_set(dag: &Dag, x: usize, y: usize, z: NodeSet) -> Result<bool> {
    if x == y || z.contains(x) || z.contains(y) {
        return Err(Error::InvalidArgument("backdoor set must exclude treatment and outcome".into()));
    }
    if !z.intersection(dag.descendants(x)).is_empty() {
        return Ok(false);
    }
    is_d_separated(&dag.without_outgoing(x), x, y, z)
}

/// Candidate backdoor questions on `graph`: observed single nodes `s` for
/// which exactly one of the empty set and `{s}` is a valid adjustment set.
pub fn backdoor_candidates(graph: &CausalGraph) -> Vec<usize> {
    let g = graph;
    let empty_ok = check_backdoor_set(&g.dag, g.x, g.y, NodeSet::EMPTY).expect("valid query");
    (0..g.dag.n())
        .filter(|&s| s != g.x && s != g.y && !g.unobserved.contains(s))
        .filter(|&s| {
            check_backdoor_set(&g.dag, g.x, g.y, NodeSet::single(s)).expect("valid query") != empty_ok
        })
        .collect()
}

/// Whether `kind` is asked on `graph` at all.
pub fn covers(graph: GraphId, kind: QueryKind) -> bool {
    use GraphId::*;
    use QueryKind::*;
    match kind {
        MarginalProb => true,
        ConditionalProb | Ate => graph != Collision,
        ExplainingAway | ColliderBias => graph == Collision,
        BackdoorAdjustmentSet => !backdoor_candidates(graph.graph()).is_empty(),
        // The counterfactual on IV needs the unobserved confounder.
        CounterfactualProb | Att => !matches!(graph, Collision | Iv),
        Nde => matches!(graph, Iv | Arrowhead | Confounding | Mediation | DiamondCut),
        Nie => matches!(graph, Mediation | Frontdoor | Arrowhead | Diamond | Chain),
    }
}

fn uncovered(graph: GraphId, kind: QueryKind) -> Error {
    Error::Uncovered { graph: graph.as_str().into(), query: kind.as_str().into() }
}

fn cond_diff(y: usize, x: usize) -> Expr {
    p1(y, &[fixed(x, true)]) - p1(y, &[fixed(x, false)])
}

fn backdoor_ate(y: usize, x: usize, z: usize) -> Expr {
    sum(
        z,
        z,
        p(z, Val::Bound(z), &[])
            * (p1(y, &[fixed(x, true), bound(z, z)]) - p1(y, &[fixed(x, false), bound(z, z)])),
    )
}

fn backdoor_att(y: usize, x: usize, z: usize) -> Expr {
    sum(
        z,
        z,
        p(z, Val::Bound(z), &[fixed(x, true)])
            * (p1(y, &[fixed(x, true), bound(z, z)]) - p1(y, &[fixed(x, false), bound(z, z)])),
    )
}

/// `P(Y_{X=1} = 1 | X = 0)` by adjusting for `z`.
fn backdoor_cf(y: usize, x: usize, z: usize) -> Expr {
    sum(z, z, p(z, Val::Bound(z), &[fixed(x, false)]) * p1(y, &[fixed(x, true), bound(z, z)]))
}

fn frontdoor_ate(y: usize, x: usize, m: usize) -> Expr {
    let inner = sum(
        x,
        x,
        p(x, Val::Bound(x), &[]) * p1(y, &[bound(x, x), bound(m, m)]),
    );
    sum(
        m,
        m,
        (p(m, Val::Bound(m), &[fixed(x, true)]) - p(m, Val::Bound(m), &[fixed(x, false)])) * inner,
    )
}

fn frontdoor_att(y: usize, x: usize, m: usize) -> Expr {
    p1(y, &[fixed(x, true)])
        - sum(m, m, p(m, Val::Bound(m), &[fixed(x, false)]) * p1(y, &[fixed(x, true), bound(m, m)]))
}

fn frontdoor_cf(y: usize, x: usize, m: usize) -> Expr {
    sum(m, m, p(m, Val::Bound(m), &[fixed(x, true)]) * p1(y, &[fixed(x, false), bound(m, m)]))
}

fn wald(y: usize, x: usize, z: usize) -> Expr {
    (p1(y, &[fixed(z, true)]) - p1(y, &[fixed(z, false)]))
        / (p1(x, &[fixed(z, true)]) - p1(x, &[fixed(z, false)]))
}

fn with_context(w: Option<usize>, extra: &[(usize, Val)], mut given: Vec<(usize, Val)>) -> Vec<(usize, Val)> {
    given.extend_from_slice(extra);
    if let Some(w) = w {
        given.push(bound(w, w));
    }
    given
}

fn over_context(w: Option<usize>, body: Expr) -> Expr {
    match w {
        Some(w) => sum(w, w, p(w, Val::Bound(w), &[]) * body),
        None => body,
    }
}

/// Mediation formula for the natural direct effect; `w` is an optional
/// pre-treatment confounder of mediator and outcome.
fn mediation_nde(y: usize, x: usize, m: usize, w: Option<usize>) -> Expr {
    let mb = [bound(m, m)];
    let body = sum(
        m,
        m,
        p(m, Val::Bound(m), &with_context(w, &[], vec![fixed(x, false)]))
            * (p1(y, &with_context(w, &mb, vec![fixed(x, true)]))
                - p1(y, &with_context(w, &mb, vec![fixed(x, false)]))),
    );
    over_context(w, body)
}

/// Natural indirect effect of moving the mediator from its `X=0` to its
/// `X=1` distribution while holding treatment at `baseline`.
fn mediation_nie(y: usize, x: usize, m: usize, w: Option<usize>, baseline: bool) -> Expr {
    let mb = [bound(m, m)];
    let body = sum(
        m,
        m,
        (p(m, Val::Bound(m), &with_context(w, &[], vec![fixed(x, true)]))
            - p(m, Val::Bound(m), &with_context(w, &[], vec![fixed(x, false)])))
            * p1(y, &with_context(w, &mb, vec![fixed(x, baseline)])),
    );
    over_context(w, body)
}

/// `(mediator, pre-treatment confounder)` for graphs with a mediation formula.
fn mediation_roles(g: &CausalGraph) -> Option<(usize, Option<usize>)> {
    match g.id {
        GraphId::Mediation => Some((g.node("V2"), None)),
        GraphId::Arrowhead => Some((g.node("V3"), Some(g.node("V2")))),
        _ => None,
    }
}

/// Closed-form estimand for `query` on `graph`.
pub fn derive_estimand(graph: GraphId, query: &Query) -> Result<Expr> {
    use GraphId::*;
    use QueryKind::*;
    let kind = query.kind;
    if !covers(graph, kind) {
        return Err(uncovered(graph, kind));
    }
    let g = graph.graph();
    let (x, y) = (g.x, g.y);
    let v = |name: &str| g.node(name);
    let ate = || -> Expr {
        match graph {
            Confounding | DiamondCut => backdoor_ate(y, x, v("V1")),
            Iv => wald(y, x, v("V2")),
            Frontdoor => frontdoor_ate(y, x, v("V3")),
            _ => cond_diff(y, x),
        }
    };
    Ok(match kind {
        MarginalProb => p1(y, &[]),
        ConditionalProb => p1(y, &[fixed(x, true)]) - p1(y, &[]),
        ExplainingAway => {
            let c = g.collider().expect("collision graph");
            let z = query.collider_value;
            p1(y, &[fixed(x, true), fixed(c, z)]) - p1(y, &[fixed(c, z)])
        }
        BackdoorAdjustmentSet => {
            let s = query
                .adjustment
                .filter(|s| backdoor_candidates(g).contains(s))
                .ok_or_else(|| uncovered(graph, kind))?;
            let valid = check_backdoor_set(&g.dag, x, y, NodeSet::single(s))?;
            Expr::Const(if valid { 1.0 } else { 0.0 })
        }
        Ate => ate(),
        ColliderBias => Expr::Const(0.0),
        CounterfactualProb => match graph {
            Confounding | DiamondCut => backdoor_cf(y, x, v("V1")),
            Frontdoor => frontdoor_cf(y, x, v("V3")),
            _ => p1(y, &[fixed(x, true)]),
        },
        Att => match graph {
            Confounding | DiamondCut => backdoor_att(y, x, v("V1")),
            Frontdoor => frontdoor_att(y, x, v("V3")),
            _ => cond_diff(y, x),
        },
        Nde => match mediation_roles(g) {
            Some((m, w)) => mediation_nde(y, x, m, w),
            None => ate(),
        },
        Nie => match mediation_roles(g) {
            Some((m, w)) => mediation_nie(y, x, m, w, false),
            None => ate(),
        },
    })
}

/// Indirect effect with treatment held at 1 instead of 0; together with the
/// natural direct effect it telescopes to the total effect.
pub fn complementary_nie_estimand(graph: GraphId) -> Result<Expr> {
    let g = graph.graph();
    let (m, w) = mediation_roles(g).ok_or_else(|| uncovered(graph, QueryKind::Nie))?;
    Ok(mediation_nie(g.y, g.x, m, w, true))
}

/// Signed distance from the decision boundary.
pub fn margin(kind: QueryKind, value: f64) -> f64 {
    value - kind.threshold()
}

/// Yes/no for `query` given the estimand value. Values within
/// [`AMBIGUITY_EPSILON`] of the boundary are rejected; collider bias is
/// always "no" under positive phrasing.
pub fn answer(query: &Query, value: f64) -> Result<Answer> {
    if !value.is_finite() {
        return Err(Error::InvalidArgument(format!("non-finite value {value}")));
    }
    let positive = match query.kind {
        QueryKind::ColliderBias => false,
        kind => {
            let m = margin(kind, value);
            if m.abs() < AMBIGUITY_EPSILON {
                return Err(Error::Ambiguous(value));
            }
            m > 0.0
        }
    };
    let yes = match query.polarity {
        Polarity::Positive => positive,
        Polarity::Negative => !positive,
    };
    Ok(if yes { Answer::Yes } else { Answer::No })
}

/// `P(Y=1 | X=1, Z=z) - P(Y=1 | Z=z)` on a collider `Z`.
pub fn explaining_away_delta(cbn: &BernoulliCbn, z: bool) -> Result<f64> {
    let g = GraphId::Collision.graph();
    if cbn.dag().edges() != g.dag.edges() {
        return Err(Error::InvalidArgument("explaining away needs the collision graph".into()));
    }
    let c = g.collider().expect("collider");
    Ok(cbn.query_prob(&[(g.y, true)], &[(g.x, true), (c, z)])?
        - cbn.query_prob(&[(g.y, true)], &[(c, z)])?)
}

fn y_in(state: u64, y: usize) -> f64 {
    if ResponseFunctionScm::value(state, y) { 1.0 } else { 0.0 }
}

/// Ground truth by intervention on the network, or by simulating both
/// worlds of a response-function model for rung-3 queries.
pub fn ground_truth(graph: GraphId, query: &Query, cbn: &BernoulliCbn) -> Result<f64> {
    ground_truth_with(graph, query, cbn, &ResponseFunctionScm::comonotone(cbn))
}

pub fn ground_truth_with(
    graph: GraphId,
    query: &Query,
    cbn: &BernoulliCbn,
    scm: &ResponseFunctionScm,
) -> Result<f64> {
    use QueryKind::*;
    if !covers(graph, query.kind) {
        return Err(uncovered(graph, query.kind));
    }
    let g = graph.graph();
    let (x, y) = (g.x, g.y);
    let do_ = |v: bool| cbn.interventional_prob(&[(y, true)], &[(x, v)]);
    let world = |u: &Unit, action: &[(usize, bool)]| scm.world(u, action);
    let nested = |u: &Unit, xv: bool, mediator_x: bool| {
        let reference = world(u, &[(x, mediator_x)]);
        let mut action = vec![(x, xv)];
        action.extend(g.mediators.iter().map(|m| (m, ResponseFunctionScm::value(reference, m))));
        y_in(world(u, &action), y)
    };
    match query.kind {
        MarginalProb => cbn.query_prob(&[(y, true)], &[]),
        ConditionalProb => {
            Ok(cbn.query_prob(&[(y, true)], &[(x, true)])? - cbn.query_prob(&[(y, true)], &[])?)
        }
        ExplainingAway => explaining_away_delta(cbn, query.collider_value),
        BackdoorAdjustmentSet => {
            let s = query.adjustment.ok_or_else(|| uncovered(graph, query.kind))?;
            Ok(if check_backdoor_set(&g.dag, x, y, NodeSet::single(s))? { 1.0 } else { 0.0 })
        }
        Ate | ColliderBias => Ok(do_(true)? - do_(false)?),
        CounterfactualProb => scm.counterfactual_prob(&[(x, true)], &[(y, true)], &[(x, false)]),
        Att => scm.expectation(&[(x, true)], |u| {
            y_in(world(u, &[(x, true)]), y) - y_in(world(u, &[(x, false)]), y)
        }),
        Nde => scm.expectation(&[], |u| nested(u, true, false) - nested(u, false, false)),
        Nie => scm.expectation(&[], |u| nested(u, false, true) - nested(u, false, false)),
    }
}

/// Whether a rung-3 answer is the same under two different response
/// models consistent with `cbn`. Lower rungs are always invariant.
pub fn scm_invariant(graph: GraphId, query: &Query, cbn: &BernoulliCbn) -> Result<bool> {
    if query.kind.rung() < 3 {
        return Ok(true);
    }
    let a = ground_truth_with(graph, query, cbn, &ResponseFunctionScm::comonotone(cbn))?;
    let b = ground_truth_with(graph, query, cbn, &ResponseFunctionScm::independent(cbn))?;
    Ok((a - b).abs() < 1e-10)
}

/// Every `(graph, query)` cell that can be asked, with positive phrasing.
pub fn coverage() -> Vec<(GraphId, Query)> {
    let mut out = Vec::new();
    for kind in QueryKind::ALL {
        for graph in GraphId::ALL {
            if !covers(graph, kind) {
                continue;
            }
            if kind == QueryKind::BackdoorAdjustmentSet {
                for s in backdoor_candidates(graph.graph()) {
                    out.push((graph, Query { adjustment: Some(s), ..Query::new(kind) }));
                }
            } else {
                out.push((graph, Query::new(kind)));
            }
        }
    }
    out
}
