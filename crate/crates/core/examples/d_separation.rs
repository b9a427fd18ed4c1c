// The three elementary path shapes and what conditioning does to them.

use causalgen::{is_d_separated, Dag, NodeSet};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let names = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let chain = Dag::with_names(3, [(0, 1), (1, 2)], names(&["A", "B", "C"]))?;
    let fork = Dag::with_names(3, [(1, 0), (1, 2)], names(&["A", "B", "C"]))?;
    let collider = Dag::with_names(3, [(0, 1), (2, 1)], names(&["A", "B", "C"]))?;
    let b = NodeSet::single(1);

    for (label, dag) in [("chain", &chain), ("fork", &fork), ("collider", &collider)] {
        let marginal = is_d_separated(dag, 0, 2, NodeSet::EMPTY)?;
        let given_b = is_d_separated(dag, 0, 2, b)?;
        println!("{label:<9} A _||_ C: {marginal:<5}  A _||_ C | B: {given_b}");
    }
    assert!(!is_d_separated(&chain, 0, 2, NodeSet::EMPTY)? && is_d_separated(&chain, 0, 2, b)?);
    assert!(!is_d_separated(&fork, 0, 2, NodeSet::EMPTY)? && is_d_separated(&fork, 0, 2, b)?);
    assert!(is_d_separated(&collider, 0, 2, NodeSet::EMPTY)? && !is_d_separated(&collider, 0, 2, b)?);

    // Conditioning on a descendant of a collider also opens it.
    let deep = Dag::new(4, [(0, 1), (2, 1), (1, 3)])?;
    assert!(!is_d_separated(&deep, 0, 2, NodeSet::single(3))?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
