// The engine as a JSON service: graph, parameters and query in, estimand,
// data, value and answer out.

use causalgen::cli::{evaluate_request, EvalRequest};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let request: EvalRequest = serde_json::from_str(
        r#"{
            "graph": "frontdoor",
            "cpds": [[0.5], [0.2, 0.7], [0.1, 0.8], [0.3, 0.4, 0.6, 0.9]],
            "query": {"kind": "ate", "polarity": "positive"}
        }"#,
    )?;
    let response = evaluate_request(&request)?;
    println!("{}", serde_json::to_string_pretty(&response)?);
    assert!(response.data.iter().all(|d| !d.term.contains("V1")), "the confounder is hidden");

    let backdoor: EvalRequest = serde_json::from_str(
        r#"{"graph": "confounding", "cpds": [[0.5], [0.3, 0.8], [0.1, 0.5, 0.4, 0.9]],
            "query": {"kind": "backdoor_adjustment_set", "adjustment": "V1"}}"#,
    )?;
    let r = evaluate_request(&backdoor)?;
    assert_eq!(r.answer.map(|a| a.as_str()), Some("yes"));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
