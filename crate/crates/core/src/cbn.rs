//! Exact inference on Bernoulli causal Bayesian networks, and response-function
//! structural models for counterfactuals.
//!
//! Networks in this crate have at most a handful of nodes, so every query is
//! answered by enumerating all `2^n` joint states.

use crate::dag::Dag;
use crate::error::{Error, Result};
use crate::nodeset::NodeSet;

/// A partial assignment of binary values to nodes.
pub type Event = [(usize, bool)];

/// Largest network handled by joint enumeration.
pub const MAX_CBN_NODES: usize = 20;

/// Index of the parent configuration of `node` within the joint state `state`.
/// Bit `k` of the index holds the value of the `k`-th parent in increasing
/// node order.
fn parent_config(parents: NodeSet, state: u64) -> usize {
    parents
        .iter()
        .enumerate()
        .fold(0usize, |acc, (k, p)| acc | ((state >> p & 1) as usize) << k)
}

fn holds(event: &Event, state: u64) -> bool {
    event.iter().all(|&(i, v)| (state >> i & 1 == 1) == v)
}

fn check_event(n: usize, event: &Event) -> Result<()> {
    for &(i, _) in event {
        if i >= n {
            return Err(Error::NodeOutOfRange { index: i, n });
        }
    }
    Ok(())
}

/// A DAG with one Bernoulli table per node: `cpds[i][c] = P(X_i = 1 | parents
/// in configuration c)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliCbn {
    dag: Dag,
    cpds: Vec<Vec<f64>>,
}

impl BernoulliCbn {
    pub fn new(dag: Dag, cpds: Vec<Vec<f64>>) -> Result<BernoulliCbn> {
        let n = dag.n();
        if n > MAX_CBN_NODES {
            return Err(Error::TooManyNodes(n));
        }
        if cpds.len() != n {
            return Err(Error::InvalidArgument(format!("expected {n} tables, got {}", cpds.len())));
        }
        for (i, table) in cpds.iter().enumerate() {
            let rows = 1usize << dag.parents(i).len();
            if table.len() != rows {
                return Err(Error::InvalidArgument(format!(
                    "node {} needs {rows} rows, got {}",
                    dag.name(i),
                    table.len()
                )));
            }
            if let Some(p) = table.iter().find(|p| !(0.0..=1.0).contains(*p)) {
                return Err(Error::InvalidArgument(format!("probability {p} outside [0, 1]")));
            }
        }
        Ok(BernoulliCbn { dag, cpds })
    }

    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    pub fn n(&self) -> usize {
        self.dag.n()
    }

    pub fn cpds(&self) -> &[Vec<f64>] {
        &self.cpds
    }

    pub fn cpd(&self, node: usize) -> &[f64] {
        &self.cpds[node]
    }

    /// `P(node = 1 | parents as in state)`.
    pub fn p_one(&self, node: usize, state: u64) -> f64 {
        self.cpds[node][parent_config(self.dag.parents(node), state)]
    }

    /// Probability of a full joint state given as a bitmask.
    pub fn joint_prob_state(&self, state: u64) -> f64 {
        (0..self.n())
            .map(|i| {
                let p = self.p_one(i, state);
                if state >> i & 1 == 1 {
                    p
                } else {
                    1.0 - p
                }
            })
            .product()
    }

    /// Markov factorization of a full assignment.
    pub fn joint_prob(&self, assignment: &[bool]) -> Result<f64> {
        if assignment.len() != self.n() {
            return Err(Error::InvalidArgument(format!(
                "assignment covers {} of {} nodes",
                assignment.len(),
                self.n()
            )));
        }
        let state = assignment
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &v)| acc | (v as u64) << i);
        Ok(self.joint_prob_state(state))
    }

    /// Sum of the joint over states consistent with `event`.
    pub fn event_prob(&self, event: &Event) -> Result<f64> {
        check_event(self.n(), event)?;
        Ok((0..1u64 << self.n())
            .filter(|&s| holds(event, s))
            .map(|s| self.joint_prob_state(s))
            .sum())
    }

    /// `P(target | given)` by enumeration.
    pub fn query_prob(&self, target: &Event, given: &Event) -> Result<f64> {
        check_event(self.n(), target)?;
        check_event(self.n(), given)?;
        if target.iter().any(|(i, _)| given.iter().any(|(j, _)| i == j)) {
            return Err(Error::InvalidArgument("target and condition overlap".into()));
        }
        let mut num = 0.0;
        let mut den = 0.0;
        for s in 0..1u64 << self.n() {
            if !holds(given, s) {
                continue;
            }
            let p = self.joint_prob_state(s);
            den += p;
            if holds(target, s) {
                num += p;
            }
        }
        if den <= 0.0 {
            return Err(Error::ZeroProbabilityCondition);
        }
        Ok(num / den)
    }

    /// Mutilated network: intervened nodes lose their parents and become
    /// constants; all other tables are kept.
    pub fn intervene(&self, assignment: &Event) -> Result<BernoulliCbn> {
        check_event(self.n(), assignment)?;
        let targets: NodeSet = assignment.iter().map(|&(i, _)| i).collect();
        let dag = self.dag.without_incoming(targets);
        let mut cpds = self.cpds.clone();
        for &(i, v) in assignment {
            cpds[i] = vec![if v { 1.0 } else { 0.0 }];
        }
        BernoulliCbn::new(dag, cpds)
    }

    /// `P(target | do(action))`.
    pub fn interventional_prob(&self, target: &Event, action: &Event) -> Result<f64> {
        self.intervene(action)?.event_prob(target)
    }
}

/// A deterministic map from a node's parent configuration to its value,
/// stored as a truth table (bit `c` is the output for configuration `c`),
/// together with its probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Response {
    pub table: u64,
    pub weight: f64,
}

/// A structural model whose exogenous noise selects, independently per node,
/// one response function.
#[derive(Debug, Clone)]
pub struct ResponseFunctionScm {
    dag: Dag,
    order: Vec<usize>,
    responses: Vec<Vec<Response>>,
}

/// One setting of the exogenous variables: the chosen response index per node.
#[derive(Debug, Clone, PartialEq)]
pub struct Unit {
    pub choice: Vec<usize>,
    pub prob: f64,
}

impl ResponseFunctionScm {
    pub fn new(dag: Dag, responses: Vec<Vec<Response>>) -> Result<ResponseFunctionScm> {
        if responses.len() != dag.n() {
            return Err(Error::InvalidArgument("one response list per node".into()));
        }
        for (i, list) in responses.iter().enumerate() {
            let k = dag.parents(i).len();
            if k > 6 {
                return Err(Error::TooManyNodes(k));
            }
            let rows = 1u32 << k;
            let total: f64 = list.iter().map(|r| r.weight).sum();
            if (total - 1.0).abs() > 1e-9 || list.iter().any(|r| r.weight < 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "response weights of node {} do not form a distribution",
                    dag.name(i)
                )));
            }
            if rows < 64 && list.iter().any(|r| r.table >> rows != 0) {
                return Err(Error::InvalidArgument("truth table wider than parent configurations".into()));
            }
        }
        let order = dag.topological_order().expect("dag");
        Ok(ResponseFunctionScm { dag, order, responses })
    }

    /// Comonotone coupling: a single uniform draw `u` per node sets the node
    /// to 1 under configuration `c` exactly when `u < P(1 | c)`. For one
    /// binary parent this puts mass on always-1, follow-parent (or its
    /// negation), and always-0.
    pub fn comonotone(cbn: &BernoulliCbn) -> ResponseFunctionScm {
        let responses = (0..cbn.n())
            .map(|i| {
                let ps = cbn.cpd(i);
                let mut cuts: Vec<f64> = ps.iter().copied().chain([0.0, 1.0]).collect();
                cuts.sort_by(f64::total_cmp);
                cuts.dedup();
                cuts.windows(2)
                    .filter(|w| w[1] > w[0])
                    .map(|w| Response {
                        table: ps
                            .iter()
                            .enumerate()
                            .filter(|(_, &p)| p > w[0])
                            .fold(0u64, |acc, (c, _)| acc | 1 << c),
                        weight: w[1] - w[0],
                    })
                    .collect()
            })
            .collect();
        ResponseFunctionScm::new(cbn.dag().clone(), responses).expect("valid by construction")
    }

    /// Independent coupling: the output under each parent configuration is
    /// its own independent coin.
    pub fn independent(cbn: &BernoulliCbn) -> ResponseFunctionScm {
        let responses = (0..cbn.n())
            .map(|i| {
                let ps = cbn.cpd(i);
                let rows = ps.len();
                (0..1u64 << rows)
                    .map(|table| Response {
                        table,
                        weight: ps
                            .iter()
                            .enumerate()
                            .map(|(c, &p)| if table >> c & 1 == 1 { p } else { 1.0 - p })
                            .product(),
                    })
                    .filter(|r| r.weight > 0.0)
                    .collect()
            })
            .collect();
        ResponseFunctionScm::new(cbn.dag().clone(), responses).expect("valid by construction")
    }

    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    pub fn responses(&self, node: usize) -> &[Response] {
        &self.responses[node]
    }

    /// The Bernoulli network this model marginalizes to.
    pub fn induced_cbn(&self) -> BernoulliCbn {
        let cpds = (0..self.dag.n())
            .map(|i| {
                let rows = 1usize << self.dag.parents(i).len();
                (0..rows)
                    .map(|c| {
                        self.responses[i]
                            .iter()
                            .filter(|r| r.table >> c & 1 == 1)
                            .map(|r| r.weight)
                            .sum()
                    })
                    .collect()
            })
            .collect();
        BernoulliCbn::new(self.dag.clone(), cpds).expect("valid by construction")
    }

    /// Every exogenous setting with nonzero probability.
    pub fn units(&self) -> Vec<Unit> {
        let n = self.dag.n();
        let mut out = Vec::new();
        let mut choice = vec![0usize; n];
        loop {
            let prob: f64 = (0..n).map(|i| self.responses[i][choice[i]].weight).product();
            if prob > 0.0 {
                out.push(Unit { choice: choice.clone(), prob });
            }
            // odometer
            let mut k = 0;
            loop {
                if k == n {
                    return out;
                }
                choice[k] += 1;
                if choice[k] < self.responses[k].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
        }
    }

    /// Values of all nodes for `unit` in the model modified by `action`.
    pub fn world(&self, unit: &Unit, action: &Event) -> u64 {
        let mut state = 0u64;
        for &i in &self.order {
            let v = match action.iter().find(|(j, _)| *j == i) {
                Some(&(_, v)) => v,
                None => {
                    let c = parent_config(self.dag.parents(i), state);
                    self.responses[i][unit.choice[i]].table >> c & 1 == 1
                }
            };
            if v {
                state |= 1 << i;
            }
        }
        state
    }

    /// Abduction: the exogenous distribution conditioned on factual evidence.
    pub fn posterior(&self, evidence: &Event) -> Result<Vec<Unit>> {
        check_event(self.dag.n(), evidence)?;
        let mut kept: Vec<Unit> = self
            .units()
            .into_iter()
            .filter(|u| holds(evidence, self.world(u, &[])))
            .collect();
        let total: f64 = kept.iter().map(|u| u.prob).sum();
        if total <= 0.0 {
            return Err(Error::ZeroProbabilityCondition);
        }
        for u in &mut kept {
            u.prob /= total;
        }
        Ok(kept)
    }

    /// `P(target_{action} | evidence)` by abduction, action, and prediction.
    pub fn counterfactual_prob(&self, action: &Event, target: &Event, evidence: &Event) -> Result<f64> {
        check_event(self.dag.n(), action)?;
        check_event(self.dag.n(), target)?;
        let posterior = self.posterior(evidence)?;
        Ok(posterior
            .iter()
            .filter(|u| holds(target, self.world(u, action)))
            .map(|u| u.prob)
            .sum())
    }

    /// `E[f(unit) | evidence]` for arbitrary (possibly nested) counterfactual
    /// functionals of a unit.
    pub fn expectation(&self, evidence: &Event, f: impl Fn(&Unit) -> f64) -> Result<f64> {
        Ok(self.posterior(evidence)?.iter().map(|u| u.prob * f(u)).sum())
    }

    /// Value of `node` in `state`.
    pub fn value(state: u64, node: usize) -> bool {
        state >> node & 1 == 1
    }
}
