//! Monte-Carlo verification of the detection closed forms: empirical
//! false-alarm and miss probabilities against the analytic expressions,
//! with the error falling as 1/sqrt(n).
//!
//! ```text
//! cargo run --release --example monte_carlo_check
//! ```

use pabsc::detection::{dep_false_alarm, dep_miss, monte_carlo_dep, NoiseUncertainty};
use pabsc::units::dbm_to_watts;

fn main() -> pabsc::Result<()> {
    let model = NoiseUncertainty::from_db(dbm_to_watts(-90.0), 3.0)?;
    let delta1 = 2.0e-13;
    let delta2 = 9.0e-13;

    println!("closed forms vs seeded Monte-Carlo (seed 42)");
    println!();
    println!("threshold (pW)        n    P_f analytic  P_f empirical   P_m analytic  P_m empirical");
    for gamma in [8.0e-13, 1.2e-12, 1.6e-12, 2.4e-12] {
        for n in [1_000usize, 10_000, 100_000, 1_000_000] {
            let (pf, pm) = monte_carlo_dep(gamma, delta1, delta2, &model, n, 42);
            println!(
                "{:>14.3} {:>8}  {:>12.5}  {:>13.5}  {:>13.5}  {:>13.5}",
                gamma * 1e12,
                n,
                dep_false_alarm(gamma, delta1, &model),
                pf,
                dep_miss(gamma, delta2, &model),
                pm
            );
        }
        println!();
    }

    // Convergence: worst absolute gap over a threshold grid, per sample size.
    println!("worst |empirical - analytic| over 21 thresholds:");
    for n in [1_000usize, 10_000, 100_000, 1_000_000] {
        let mut worst = 0.0f64;
        for i in 0..=20 {
            let gamma = model.x_lo + delta1
                + (model.x_hi + delta2 - model.x_lo - delta1) * i as f64 / 20.0;
            let (pf, pm) = monte_carlo_dep(gamma, delta1, delta2, &model, n, 7);
            worst = worst
                .max((pf - dep_false_alarm(gamma, delta1, &model)).abs())
                .max((pm - dep_miss(gamma, delta2, &model)).abs());
        }
        println!("  n = {n:>8}: {worst:.5}   (3/sqrt(n) = {:.5})", 3.0 / (n as f64).sqrt());
    }
    Ok(())
}
