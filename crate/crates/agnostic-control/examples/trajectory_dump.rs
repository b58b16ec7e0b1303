//! Simulate one path of a composite strategy and dump it as CSV, together
//! with the recorded phase-entry events.
//!
//! Run with: cargo run --example trajectory_dump

use agnostic_control::brownian::BrownianPath;
use agnostic_control::composite::toolkit;
use agnostic_control::config::ExperimentConfig;
use agnostic_control::sim::simulate;

fn main() -> agnostic_control::SimResult<()> {
    let cfg = ExperimentConfig::for_start(5.0);
    let las = toolkit::las_from_config(&cfg)?;
    let path = BrownianPath::generate(1.0, 1e-3, 424_242)?;
    let tr = simulate(&las, 12.0, 5.0, 1.0, &path)?;

    println!("large-drift strategy at a = 12 from q0 = 5:");
    println!("  total cost: {:.4}", tr.cost);
    println!("  events:");
    for e in &tr.stops {
        println!(
            "    {:<18} t = {:.4}  level = {}",
            e.label,
            e.time,
            e.level.map(|l| l.to_string()).unwrap_or_default()
        );
    }
    let out = std::env::temp_dir().join("trajectory.csv");
    tr.write_csv(std::fs::File::create(&out)?)?;
    println!("  wrote {} rows to {}", tr.times.len(), out.display());
    Ok(())
}
