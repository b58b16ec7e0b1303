//! Tour of the closed-form oracles: the Riccati gain, its time integral,
//! the optimal cost J0, constant-gain costs, and the large-drift asymptotes.
//!
//! Run with: cargo run --example oracle_tour

use agnostic_control::analytics::{cg_cost, j0, j0_asymptote, k_integral, kappa};

fn main() -> agnostic_control::SimResult<()> {
    let (horizon, q0) = (1.0, 1.0);

    println!("gain and optimal cost at T = {horizon}, q0 = {q0}:");
    println!(
        "{:>8} {:>12} {:>12} {:>12}",
        "a", "kappa(T,a)", "K(T,a)", "j0"
    );
    for a in [-100.0, -5.0, -1.0, 0.0, 1.0, 5.0, 100.0] {
        println!(
            "{:>8} {:>12.6} {:>12.6} {:>12.6}",
            a,
            kappa(horizon, a)?,
            k_integral(horizon, a)?,
            j0(a, horizon, q0)?
        );
    }

    println!("\nconstant-gain costs (rows: gain alpha, cols: drift a):");
    print!("{:>8}", "");
    for a in [-5.0, -1.0, 0.0, 1.0, 3.0] {
        print!("{a:>12}");
    }
    println!();
    for alpha in [0.0, 1.0, 3.0] {
        print!("{alpha:>8}");
        for a in [-5.0, -1.0, 0.0, 1.0, 3.0] {
            print!("{:>12.4}", cg_cost(alpha, a, horizon, q0)?);
        }
        println!();
    }
    println!("(CG(1) at a = 1 is exactly (1+1)*T*(q0^2+T/2) = 3)");

    println!("\nlarge-drift asymptotes:");
    for a in [10.0, 30.0, 100.0, 300.0, -100.0] {
        let exact = j0(a, horizon, q0)?;
        let asym = j0_asymptote(a, horizon, q0)?;
        println!(
            "  a = {a:>6}: j0 = {exact:>12.6}  asymptote = {asym:>12.6}  rel err = {:.4}",
            (exact - asym).abs() / asym
        );
    }
    Ok(())
}
