//! Question and explanation text.

use crate::engine::expr::{DataTerm, Expr};
use crate::engine::{Answer, CausalGraph, Polarity, Query, QueryKind};
use crate::error::Result;

use super::story::Story;

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

/// "a", "a and b", "a, b and c".
fn join_list(items: &[String]) -> String {
    match items {
        [] => String::new(),
        [one] => one.clone(),
        [init @ .., last] => format!("{} and {last}", init.join(", ")),
    }
}

/// Whole-percent rendering of a probability.
pub fn percent(p: f64) -> String {
    format!("{}%", (p * 100.0).round() as i64)
}

/// The value a reader recovers from [`percent`].
pub fn rounded(p: f64) -> f64 {
    (p * 100.0).round() / 100.0
}

/// One sentence per node with children, then one per hidden node.
pub fn verbalize_graph(graph: &CausalGraph, story: &Story) -> Result<String> {
    let dag = &graph.dag;
    let mut out = Vec::new();
    for t in 0..dag.n() {
        let children: Vec<usize> = dag.children(t).iter().collect();
        if children.is_empty() {
            continue;
        }
        let names = children
            .iter()
            .map(|&c| Ok(story.forms(dag.name(c))?.overall.clone()))
            .collect::<Result<Vec<_>>>()?;
        let head = capitalize(&story.forms(dag.name(t))?.overall);
        out.push(format!("{head} has a direct effect on {}.", join_list(&names)));
    }
    for h in graph.unobserved.iter() {
        out.push(format!("{} is unobserved.", capitalize(&story.forms(dag.name(h))?.overall)));
    }
    Ok(out.join(" "))
}

/// One sentence per data term, with the probability as a whole percent.
pub fn verbalize_data(graph: &CausalGraph, story: &Story, data: &[(DataTerm, f64)]) -> Result<String> {
    let dag = &graph.dag;
    let mut out = Vec::new();
    for (t, v) in data {
        let noun = &story.forms(dag.name(t.node))?.noun[1];
        if t.given.is_empty() {
            out.push(format!("The overall probability of {noun} is {}.", percent(*v)));
        } else {
            let attrs = t
                .given
                .iter()
                .map(|&(k, b)| Ok(story.forms(dag.name(k))?.attr[b as usize].clone()))
                .collect::<Result<Vec<_>>>()?;
            out.push(format!("For {}, the probability of {noun} is {}.", join_list(&attrs), percent(*v)));
        }
    }
    Ok(out.join(" "))
}

/// The yes/no question sentence. Positive phrasing is answered "yes" when
/// the estimand lies above its threshold.
pub fn verbalize_query(graph: &CausalGraph, story: &Story, query: &Query) -> Result<String> {
    let dag = &graph.dag;
    let f = |i: usize| story.forms(dag.name(i));
    let (x, y) = (f(graph.x)?, f(graph.y)?);
    let pos = query.polarity == Polarity::Positive;
    let pick = |a: &'static str, b: &'static str| if pos { a } else { b };
    let mediators = graph
        .mediators
        .iter()
        .map(|m| Ok(f(m)?.overall.clone()))
        .collect::<Result<Vec<_>>>()?;
    Ok(match query.kind {
        QueryKind::MarginalProb => format!(
            "Is {} {} than {} overall?",
            y.noun[1],
            pick("more likely", "less likely"),
            y.noun[0]
        ),
        QueryKind::ConditionalProb => format!(
            "Is the chance of {} {} when observing {}?",
            y.noun[1],
            pick("larger", "smaller"),
            x.noun[1]
        ),
        QueryKind::ExplainingAway => {
            let c = f(graph.collider().expect("collider graph"))?;
            format!(
                "If we look at {}, does the chance of {} {} when {}?",
                c.attr[query.collider_value as usize],
                y.noun[1],
                pick("increase", "decrease"),
                x.sent[1]
            )
        }
        QueryKind::BackdoorAdjustmentSet => {
            let s = f(query.adjustment.expect("adjustment candidate"))?;
            let how = if pos { format!("case by case according to {}", s.overall) } else { "in general".into() };
            format!(
                "To understand how {} affects {}, should we look directly at how {} correlates with {} {how}?",
                x.overall, y.overall, x.overall, y.overall
            )
        }
        QueryKind::Ate => format!(
            "Will {} {} the chance of {}?",
            x.noun[1],
            pick("increase", "decrease"),
            y.noun[1]
        ),
        QueryKind::ColliderBias => {
            let c = f(graph.collider().expect("collider graph"))?;
            format!(
                "If we look at {}, does it mean that {} {} {}?",
                c.attr[1],
                x.overall,
                pick("affects", "does not affect"),
                y.overall
            )
        }
        QueryKind::CounterfactualProb => format!(
            "For {}, would {} be {} than not {}?",
            x.attr[0],
            y.noun[1],
            pick("more likely", "less likely"),
            x.cond[1]
        ),
        // "Less likely to see Y had X been 0" is the positive-effect reading.
        QueryKind::Att => format!(
            "For {}, would it be {} to see {} {}?",
            x.attr[1],
            pick("less likely", "more likely"),
            y.noun[1],
            x.cond[0]
        ),
        QueryKind::Nde => {
            let lead = if mediators.is_empty() {
                "If we disregard any mediation effect".to_string()
            } else {
                format!("If we disregard the mediation effect through {}", join_list(&mediators))
            };
            format!(
                "{lead}, would {} still {} affect {}?",
                x.noun[1],
                pick("positively", "negatively"),
                y.noun[1]
            )
        }
        QueryKind::Nie => format!(
            "Does {} {} affect {} through {}?",
            x.overall,
            pick("positively", "negatively"),
            y.overall,
            join_list(&mediators)
        ),
    })
}

/// Full question text: graph, data, then the question sentence.
pub fn verbalize_question(
    graph: &CausalGraph,
    story: &Story,
    data: &[(DataTerm, f64)],
    query: &Query,
) -> Result<String> {
    story.validate(graph)?;
    let mut parts = vec![verbalize_graph(graph, story)?];
    let d = verbalize_data(graph, story, data)?;
    if !d.is_empty() {
        parts.push(d);
    }
    parts.push(verbalize_query(graph, story, query)?);
    Ok(parts.join(" "))
}

/// Formal query in do/counterfactual notation.
pub fn symbolic_form(graph: &CausalGraph, query: &Query) -> String {
    let name = |i: usize| graph.dag.name(i).to_string();
    match query.kind {
        QueryKind::MarginalProb => "P(Y)".into(),
        QueryKind::ConditionalProb => "P(Y|X)".into(),
        QueryKind::ExplainingAway => {
            let c = name(graph.collider().expect("collider graph"));
            format!("P(Y|X,{c}={})", query.collider_value as u8)
        }
        QueryKind::BackdoorAdjustmentSet => {
            format!("Is {{{}}} a backdoor adjustment set for X->Y?", name(query.adjustment.expect("candidate")))
        }
        QueryKind::Ate => "E[Y|do(X=1)]-E[Y|do(X=0)]".into(),
        QueryKind::ColliderBias => {
            let c = name(graph.collider().expect("collider graph"));
            format!("E[Y|do(X=1),{c}=1]-E[Y|do(X=0),{c}=1]")
        }
        QueryKind::CounterfactualProb => "P(Y_{X=1}=1|X=0)".into(),
        QueryKind::Att => "E[Y_{X=1}-Y_{X=0}|X=1]".into(),
        QueryKind::Nde => "E[Y_{X=1,M_{X=0}}-Y_{X=0,M_{X=0}}]".into(),
        QueryKind::Nie => "E[Y_{X=0,M_{X=1}}-Y_{X=0,M_{X=0}}]".into(),
    }
}

/// Edge list in `var1->var2` form.
pub fn edge_list(graph: &CausalGraph) -> String {
    let dag = &graph.dag;
    let edges: Vec<String> =
        dag.edges().iter().map(|&(a, b)| format!("{}->{}", dag.name(a), dag.name(b))).collect();
    edges.join(",")
}

/// `P(...)=0.45` items joined by semicolons.
pub fn data_list(graph: &CausalGraph, data: &[(DataTerm, f64)]) -> String {
    let items: Vec<String> =
        data.iter().map(|(t, v)| format!("{}={:.2}", t.render(graph.dag.names()), v)).collect();
    items.join("; ")
}

/// The six-step worked solution. `data` holds the values as the question
/// states them, and `value` is the estimand evaluated on exactly those.
pub fn generate_explanation(
    graph: &CausalGraph,
    query: &Query,
    estimand: &Expr,
    data: &[(DataTerm, f64)],
    value: f64,
    answer: Answer,
) -> Result<String> {
    let d = data_list(graph, data);
    let est = estimand.render(graph.dag.names());
    let lookup = |t: &DataTerm| {
        data.iter().find(|(k, _)| k == t).map(|(_, v)| *v).ok_or_else(|| {
            crate::error::Error::InvalidArgument(format!("missing data term {t:?}"))
        })
    };
    let plugged = estimand.substitute(&lookup)?;
    Ok(format!(
        "Step 1) Extract the causal graph: The causal graph expressed in the context is: \"{}\".\n\
         Step 2) Identify the query type: The query type of the above question is \"{}\".\n\
         Step 3) Formulate the query to its symbolic form: The formal form of the query is \"{}\".\n\
         Step 4) Collect all the available data: The available data are: \"{d}\".\n\
         Step 5) Derive the estimand: Based on the graph structure and causal query, the question can be simplified into estimand \"{est}\".\n\
         Step 6) Solve for the estimand: Plug in the available data \"{d}\" into \"{est}\".\n\
         {plugged}\n\
         \u{2248} {value:.4}\n\
         Since the estimate for the estimand is {value:.4}, the overall answer to the question is {}.",
        edge_list(graph),
        query.kind.type_name(),
        symbolic_form(graph, query),
        answer.as_str(),
    ))
}
