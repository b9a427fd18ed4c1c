// Total effect splits into a direct and an indirect part.

use causalgen::cladder::sample_cbn;
use causalgen::engine::{complementary_nie_estimand, derive_estimand, GraphId, Query, QueryKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let g = GraphId::Mediation;
    let names = g.graph().dag.names();
    let ate = derive_estimand(g, &Query::new(QueryKind::Ate))?;
    let nde = derive_estimand(g, &Query::new(QueryKind::Nde))?;
    let nie = derive_estimand(g, &Query::new(QueryKind::Nie))?;
    let nie1 = complementary_nie_estimand(g)?;
    println!("NDE = {}", nde.render(names));
    println!("NIE = {}", nie.render(names));

    let cbn = sample_cbn(g, &mut ChaCha8Rng::seed_from_u64(1));
    let (t, d, i, i1) = (ate.evaluate(&cbn)?, nde.evaluate(&cbn)?, nie.evaluate(&cbn)?, nie1.evaluate(&cbn)?);
    println!("ATE {t:.4} = NDE {d:.4} + NIE(x=1) {i1:.4}; NIE(x=0) {i:.4}");
    assert!((t - d - i1).abs() < 1e-12);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
