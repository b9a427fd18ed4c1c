// Builds the correlation-to-causation records for two and three variables
// and prints one positive example.

use causalgen::corr2cause::{build_dataset, dataset_stats, BuildConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let records = build_dataset(&BuildConfig::new(3, 42))?;
    let stats = dataset_stats(&records);
    println!("{} records, {} valid ({:.2}%)", stats.samples, stats.positives, stats.positive_pct);
    println!("splits: {:?}", stats.splits);
    assert_eq!(records.len(), 12 + 90);

    let positive = records.iter().find(|r| r.label == 1).expect("n=3 has valid hypotheses");
    println!("\n{}\n  => {} [{}]", positive.premise, positive.hypothesis, positive.label);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
