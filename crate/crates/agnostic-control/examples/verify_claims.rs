//! Run a few of the fast registered verification claims in-process; the
//! full suite (including the slow near-optimality instances) runs via
//! `agctl verify all` or the acceptance tests.
//!
//! Run with: cargo run --example verify_claims

use agnostic_control::claims::{claim_ids, verify_claim, ClaimOverrides};

fn main() -> agnostic_control::SimResult<()> {
    println!("registered claims: {}", claim_ids().join(", "));
    println!();
    for id in ["asymptotics", "decay", "two-side-pro", "one-side-pro"] {
        let rep = verify_claim(id, &ClaimOverrides::default())?;
        println!("{}: {}", rep.id, if rep.pass { "PASS" } else { "FAIL" });
        for row in &rep.rows {
            println!(
                "   {} a={} observed={:.6} bound={:.6}",
                row.label, row.a, row.observed, row.bound
            );
        }
    }
    Ok(())
}
