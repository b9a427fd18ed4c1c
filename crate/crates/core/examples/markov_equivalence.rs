// Groups the three-node DAGs into Markov equivalence classes.

use causalgen::{cluster_mecs, enumerate_dags, independence_structure, mec_members, Dag};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dags: Vec<Dag> = enumerate_dags(3).into_iter().map(|e| e.dag).collect();
    let mecs = cluster_mecs(&dags)?;
    println!("{} DAGs fall into {} classes", dags.len(), mecs.len());
    assert_eq!(mecs.len(), 5);
    for m in &mecs {
        println!("class {}: {} unlabeled graphs, {} labeled members", m.id, m.source_dags.len(), m.members.len());
        for d in &m.members {
            println!("    {d:?}");
        }
    }

    // A chain, its reversal and the fork share one class; the collider is alone.
    let chain = Dag::new(3, [(0, 1), (1, 2)])?;
    let members = mec_members(&independence_structure(&chain))?;
    assert_eq!(members.len(), 3);
    let collider = Dag::new(3, [(0, 1), (2, 1)])?;
    assert_eq!(mec_members(&independence_structure(&collider))?.len(), 1);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
