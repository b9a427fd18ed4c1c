// Paraphrasing and variable refactorization leave labels untouched.

use causalgen::corr2cause::{build_subset, perturb, refactor_variables, PerturbMode, SplitPolicy};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let records = build_subset(3, 7, SplitPolicy::Published)?;
    let r = &records[5];
    let para = perturb(r, PerturbMode::Paraphrase)?;
    let refac = perturb(r, PerturbMode::Refactor)?;
    println!("original:   {}", r.hypothesis);
    println!("paraphrase: {}", para.hypothesis);
    println!("refactor:   {}", refac.premise);

    for rec in &records {
        for mode in [PerturbMode::Paraphrase, PerturbMode::Refactor] {
            assert_eq!(perturb(rec, mode)?.label, rec.label);
        }
        let twice = refactor_variables(&refactor_variables(&rec.premise, rec.n)?, rec.n)?;
        assert_eq!(twice, rec.premise);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
