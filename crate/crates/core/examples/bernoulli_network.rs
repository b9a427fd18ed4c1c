// Observation versus intervention on a confounded Bernoulli network.

use causalgen::cbn::BernoulliCbn;
use causalgen::Dag;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    // Z -> X, Z -> Y, X -> Y. Parent configuration bit k is the k-th parent
    // in index order, so Y's table is indexed by z + 2x.
    let names = ["Z", "X", "Y"].map(String::from).to_vec();
    let dag = Dag::with_names(3, [(0, 1), (0, 2), (1, 2)], names)?;
    let cbn = BernoulliCbn::new(dag, vec![vec![0.5], vec![0.2, 0.8], vec![0.1, 0.6, 0.3, 0.8]])?;

    let total: f64 = (0..8u64).map(|s| cbn.joint_prob_state(s)).sum();
    assert!((total - 1.0).abs() < 1e-12);

    let seen = cbn.query_prob(&[(2, true)], &[(1, true)])? - cbn.query_prob(&[(2, true)], &[(1, false)])?;
    let done = cbn.interventional_prob(&[(2, true)], &[(1, true)])?
        - cbn.interventional_prob(&[(2, true)], &[(1, false)])?;
    println!("observed difference {seen:.4}, causal effect {done:.4}");
    assert!((done - 0.2).abs() < 1e-12);
    assert!(seen > done, "confounding inflates the association");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
