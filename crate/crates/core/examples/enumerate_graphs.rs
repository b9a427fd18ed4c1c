// Counts DAGs on a few unlabeled nodes and shows the canonical codes of
// the three-node graphs.

use causalgen::{canonical_form, enumerate_dags, Dag};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let counts: Vec<usize> = (2..=5).map(|n| enumerate_dags(n).len()).collect();
    println!("DAGs on 2..=5 nodes: {counts:?}");
    assert_eq!(counts, [2, 6, 31, 302]);

    for e in enumerate_dags(3) {
        println!("{:<12} {:?}", e.canonical, e.dag);
    }

    // Relabeling never changes the canonical code.
    let chain = Dag::new(3, [(0, 1), (1, 2)])?;
    let relabeled = Dag::new(3, [(2, 0), (0, 1)])?;
    assert_eq!(canonical_form(&chain), canonical_form(&relabeled));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
