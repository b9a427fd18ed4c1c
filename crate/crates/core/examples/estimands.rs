// Derives the estimand of every covered (graph, query) cell, evaluates it
// on a sampled network and checks it against the oracle.

use causalgen::cladder::sample_cbn;
use causalgen::engine::{coverage, derive_estimand, ground_truth};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (graph, query) in coverage() {
        let g = graph.graph();
        let e = derive_estimand(graph, &query)?;
        let cbn = sample_cbn(graph, &mut rng);
        let value = e.evaluate(&cbn)?;
        let truth = ground_truth(graph, &query, &cbn)?;
        println!("{:<12} {:<24} {:>8.4}  {}", graph.as_str(), query.kind.as_str(), value, e.render(g.dag.names()));
        assert!((value - truth).abs() < 1e-9, "{graph:?} {query:?}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
