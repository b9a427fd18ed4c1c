// Generates a small balanced set of ladder questions and re-derives each
// answer from the network stored alongside it.

use causalgen::cladder::{assemble_dataset, dataset_stats, round_trip};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let records = assemble_dataset(64, 2024)?;
    let stats = dataset_stats(&records);
    println!("{} questions, {:.1}% yes, per rung {:?}", stats.samples, stats.yes_pct, stats.per_rung);
    assert_eq!(stats.yes * 2, stats.samples);

    let r = records.iter().find(|r| r.meta.rung == 3).expect("rung 3 present");
    println!("\n{}\nanswer: {}\n\n{}", r.question, r.answer.as_str(), r.explanation);
    for r in &records {
        assert!(round_trip(r)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
