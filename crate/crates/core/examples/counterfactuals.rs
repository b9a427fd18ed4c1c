// Abduction, action and prediction on a response-function model.

use causalgen::cbn::{BernoulliCbn, ResponseFunctionScm};
use causalgen::Dag;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dag = Dag::new(2, [(0, 1)])?;
    let cbn = BernoulliCbn::new(dag, vec![vec![0.4], vec![0.3, 0.9]])?;

    // Two models with the same observational distribution.
    let co = ResponseFunctionScm::comonotone(&cbn);
    let ind = ResponseFunctionScm::independent(&cbn);
    for (a, b) in co.induced_cbn().cpds().iter().flatten().zip(cbn.cpds().iter().flatten()) {
        assert!((a - b).abs() < 1e-12);
    }

    // Would Y have been 1 had X been 1, for a unit observed with X=0, Y=0?
    let evidence = [(0, false), (1, false)];
    let p_co = co.counterfactual_prob(&[(0, true)], &[(1, true)], &evidence)?;
    let p_ind = ind.counterfactual_prob(&[(0, true)], &[(1, true)], &evidence)?;
    println!("P(Y_x=1 | X=0, Y=0): comonotone {p_co:.4}, independent {p_ind:.4}");
    // Probability of sufficiency is not identified: the two models disagree.
    assert!((p_co - p_ind).abs() > 0.01);

    // Without evidence on Y the answer is identified and both agree.
    let a = co.counterfactual_prob(&[(0, true)], &[(1, true)], &[(0, false)])?;
    let b = ind.counterfactual_prob(&[(0, true)], &[(1, true)], &[(0, false)])?;
    assert!((a - b).abs() < 1e-12 && (a - 0.9).abs() < 1e-12);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
