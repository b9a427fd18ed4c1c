//! Estimand expressions over observational probability terms.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::cbn::BernoulliCbn;
use crate::error::{Error, Result};

/// Value slot inside a probability term: either a fixed bit or a variable
/// bound by an enclosing [`Expr::Sum`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Val {
    Fixed(bool),
    Bound(usize),
}

/// `P(node = value | given)` with possibly bound values.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub node: usize,
    pub value: Val,
    pub given: Vec<(usize, Val)>,
}

/// A probability term with every value fixed and the target set to 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DataTerm {
    pub node: usize,
    pub given: Vec<(usize, bool)>,
}

impl DataTerm {
    fn sort_key(&self) -> (usize, usize, Vec<(usize, bool)>) {
        (self.given.len(), self.node, self.given.clone())
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.given.is_empty() {
            format!("P({}=1)", names[self.node])
        } else {
            let g: Vec<String> =
                self.given.iter().map(|&(k, v)| format!("{}={}", names[k], v as u8)).collect();
            format!("P({}=1|{})", names[self.node], g.join(","))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Prob(Term),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// Sum of `body` over both values of the bound variable `var`, which
    /// ranges over the node `node`.
    Sum { var: usize, node: usize, body: Box<Expr> },
}

/// `P(node = value | given)`.
pub fn p(node: usize, value: Val, given: &[(usize, Val)]) -> Expr {
    Expr::Prob(Term { node, value, given: given.to_vec() })
}

/// `P(node = 1 | given)`.
pub fn p1(node: usize, given: &[(usize, Val)]) -> Expr {
    p(node, Val::Fixed(true), given)
}

pub fn fixed(node: usize, v: bool) -> (usize, Val) {
    (node, Val::Fixed(v))
}

pub fn bound(node: usize, var: usize) -> (usize, Val) {
    (node, Val::Bound(var))
}

pub fn sum(var: usize, node: usize, body: Expr) -> Expr {
    Expr::Sum { var, node, body: Box::new(body) }
}

impl std::ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::Sub(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::Mul(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        Expr::Div(Box::new(self), Box::new(rhs))
    }
}

type Env = BTreeMap<usize, bool>;

fn resolve(v: Val, env: &Env) -> bool {
    match v {
        Val::Fixed(b) => b,
        Val::Bound(k) => *env.get(&k).expect("bound variable in scope"),
    }
}

fn concrete(t: &Term, env: &Env) -> (DataTerm, bool) {
    let mut given: Vec<(usize, bool)> = t.given.iter().map(|&(k, v)| (k, resolve(v, env))).collect();
    given.sort();
    (DataTerm { node: t.node, given }, resolve(t.value, env))
}

impl Expr {
    fn walk_terms(&self, env: &mut Env, out: &mut Vec<DataTerm>) {
        match self {
            Expr::Const(_) => {}
            Expr::Prob(t) => out.push(concrete(t, env).0),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.walk_terms(env, out);
                b.walk_terms(env, out);
            }
            Expr::Sum { var, body, .. } => {
                for v in [false, true] {
                    env.insert(*var, v);
                    body.walk_terms(env, out);
                }
                env.remove(var);
            }
        }
    }

    /// The distinct leaf terms, normalized to target value 1: marginals
    /// first, then by target node and conditioning values.
    pub fn required_data(&self) -> Vec<DataTerm> {
        let mut out = Vec::new();
        self.walk_terms(&mut Env::new(), &mut out);
        out.sort_by_key(DataTerm::sort_key);
        out.dedup();
        out
    }

    fn eval_in(&self, env: &mut Env, lookup: &dyn Fn(&DataTerm) -> Result<f64>) -> Result<f64> {
        Ok(match self {
            Expr::Const(c) => *c,
            Expr::Prob(t) => {
                let (dt, value) = concrete(t, env);
                let p1 = lookup(&dt)?;
                if value {
                    p1
                } else {
                    1.0 - p1
                }
            }
            Expr::Add(a, b) => a.eval_in(env, lookup)? + b.eval_in(env, lookup)?,
            Expr::Sub(a, b) => a.eval_in(env, lookup)? - b.eval_in(env, lookup)?,
            Expr::Mul(a, b) => a.eval_in(env, lookup)? * b.eval_in(env, lookup)?,
            Expr::Div(a, b) => {
                let den = b.eval_in(env, lookup)?;
                if den.abs() < 1e-12 {
                    return Err(Error::Degenerate);
                }
                a.eval_in(env, lookup)? / den
            }
            Expr::Sum { var, body, .. } => {
                let mut acc = 0.0;
                for v in [false, true] {
                    env.insert(*var, v);
                    acc += body.eval_in(env, lookup)?;
                }
                env.remove(var);
                acc
            }
        })
    }

    /// Evaluates with leaf values supplied by `lookup`.
    pub fn evaluate_with(&self, lookup: &dyn Fn(&DataTerm) -> Result<f64>) -> Result<f64> {
        self.eval_in(&mut Env::new(), lookup)
    }

    /// Evaluates against the exact probabilities of `cbn`.
    pub fn evaluate(&self, cbn: &BernoulliCbn) -> Result<f64> {
        self.evaluate_with(&|t| data_value(cbn, t))
    }

    /// Evaluates against a table of data values.
    pub fn evaluate_table(&self, table: &[(DataTerm, f64)]) -> Result<f64> {
        self.evaluate_with(&|t| {
            table
                .iter()
                .find(|(k, _)| k == t)
                .map(|(_, v)| *v)
                .ok_or_else(|| Error::InvalidArgument(format!("missing data term {t:?}")))
        })
    }

    /// Symbolic rendering with node names; bound variables print as the
    /// lower-cased node name.
    pub fn render(&self, names: &[String]) -> String {
        let mut vars = BTreeMap::new();
        self.render_in(names, &mut vars)
    }

    fn render_in(&self, names: &[String], vars: &mut BTreeMap<usize, String>) -> String {
        let val = |v: Val, vars: &BTreeMap<usize, String>| match v {
            Val::Fixed(b) => (b as u8).to_string(),
            Val::Bound(k) => vars.get(&k).cloned().unwrap_or_else(|| format!("v{k}")),
        };
        match self {
            Expr::Const(c) => format!("{c}"),
            Expr::Prob(t) => {
                let head = format!("{}={}", names[t.node], val(t.value, vars));
                if t.given.is_empty() {
                    format!("P({head})")
                } else {
                    let g: Vec<String> =
                        t.given.iter().map(|&(k, v)| format!("{}={}", names[k], val(v, vars))).collect();
                    format!("P({head}|{})", g.join(","))
                }
            }
            Expr::Add(a, b) => format!("{}+{}", a.render_in(names, vars), b.render_in(names, vars)),
            Expr::Sub(a, b) => {
                format!("{}-{}", a.render_in(names, vars), wrap_sum(b, names, vars))
            }
            Expr::Mul(a, b) => {
                format!("{}*{}", wrap(a, names, vars), wrap(b, names, vars))
            }
            Expr::Div(a, b) => format!("{}/{}", wrap(a, names, vars), wrap(b, names, vars)),
            Expr::Sum { var, node, body } => {
                let v = names[*node].to_lowercase();
                vars.insert(*var, v.clone());
                let s = format!("\\sum_{{{}={v}}} {}", names[*node], body.render_in(names, vars));
                vars.remove(var);
                s
            }
        }
    }

    /// Numeric rendering: sums expanded and every leaf replaced by its
    /// value from `lookup`, shown with two decimals.
    pub fn substitute(&self, lookup: &dyn Fn(&DataTerm) -> Result<f64>) -> Result<String> {
        let mut out = String::new();
        self.subst_in(&mut Env::new(), lookup, &mut out)?;
        Ok(out)
    }

    fn subst_in(
        &self,
        env: &mut Env,
        lookup: &dyn Fn(&DataTerm) -> Result<f64>,
        out: &mut String,
    ) -> Result<()> {
        match self {
            Expr::Const(c) => {
                let _ = write!(out, "{c}");
            }
            Expr::Prob(t) => {
                let (dt, value) = concrete(t, env);
                let v = lookup(&dt)?;
                let _ = write!(out, "{:.2}", if value { v } else { 1.0 - v });
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                let op = match self {
                    Expr::Add(..) => " + ",
                    Expr::Sub(..) => " - ",
                    Expr::Mul(..) => " * ",
                    _ => " / ",
                };
                let paren_a = matches!(self, Expr::Mul(..) | Expr::Div(..)) && is_compound(a);
                let paren_b = !matches!(self, Expr::Add(..)) && is_compound(b);
                paren(out, paren_a, |o| a.subst_in(env, lookup, o))?;
                out.push_str(op);
                paren(out, paren_b, |o| b.subst_in(env, lookup, o))?;
            }
            Expr::Sum { var, body, .. } => {
                out.push('(');
                for (k, v) in [false, true].into_iter().enumerate() {
                    if k > 0 {
                        out.push_str(" + ");
                    }
                    env.insert(*var, v);
                    body.subst_in(env, lookup, out)?;
                }
                env.remove(var);
                out.push(')');
            }
        }
        Ok(())
    }
}

fn is_compound(e: &Expr) -> bool {
    matches!(e, Expr::Add(..) | Expr::Sub(..) | Expr::Mul(..) | Expr::Div(..))
}

fn paren(
    out: &mut String,
    on: bool,
    f: impl FnOnce(&mut String) -> Result<()>,
) -> Result<()> {
    if on {
        out.push('(');
    }
    f(out)?;
    if on {
        out.push(')');
    }
    Ok(())
}

fn wrap(e: &Expr, names: &[String], vars: &mut BTreeMap<usize, String>) -> String {
    let s = e.render_in(names, vars);
    if is_compound(e) || matches!(e, Expr::Sum { .. }) {
        format!("[{s}]")
    } else {
        s
    }
}

fn wrap_sum(e: &Expr, names: &[String], vars: &mut BTreeMap<usize, String>) -> String {
    let s = e.render_in(names, vars);
    if matches!(e, Expr::Add(..) | Expr::Sub(..) | Expr::Sum { .. }) {
        format!("[{s}]")
    } else {
        s
    }
}

/// Exact value of a data term under `cbn`.
pub fn data_value(cbn: &BernoulliCbn, t: &DataTerm) -> Result<f64> {
    cbn.query_prob(&[(t.node, true)], &t.given)
}
