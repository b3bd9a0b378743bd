//! Maximize the covert uplink rate by alternating the closed-form power and
//! TPA-position subproblems, then compare against fixed-position baselines.
//!
//! ```text
//! cargo run --release --example covert_rate_solve
//! ```

use pabsc::config::ScenarioConfig;
use pabsc::optimizer::{solve_ao, solve_baseline};
use pabsc::units::watts_to_dbm;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Indoor defaults: 20 m room, device centered, warden estimated 5 m
    // away with a 2 m location error bound and 30% CSI error, 95% covertness.
    let cfg = ScenarioConfig::default();
    let problem = cfg.to_problem()?;
    let result = solve_ao(&problem, &cfg.ao_params())?;

    println!("alternating solve:");
    println!("  feasible   : {}", result.feasible);
    println!("  power      : {:.3} dBm", watts_to_dbm(result.p0_opt));
    println!("  TPA x      : {:.4} m (device at x = {} m)", result.tpa_x_opt, cfg.bd_x);
    println!("  rate       : {:.1} bits/s", result.rate);
    println!("  binding    : {}", result.binding_constraint);
    println!("  iterations : {}", result.iterations);
    println!();
    println!("  iteration trace (power dBm, TPA x, rate bits/s):");
    for (i, (p0, x, rate)) in result.trace.iter().enumerate() {
        println!("    {:>2}: {:>8.3}  {:>8.4}  {:>10.1}", i + 1, watts_to_dbm(*p0), x, rate);
    }

    // With the default bounds the covertness cap limits every position
    // equally; a well-localized warden separates the solver from the
    // fixed-position baselines.
    let sharp = ScenarioConfig {
        chi: 0.0,
        delta: 0.1,
        ..ScenarioConfig::default()
    };
    let sharp_problem = sharp.to_problem()?;
    let sharp_ao = solve_ao(&sharp_problem, &sharp.ao_params())?;
    println!();
    println!("well-localized warden (chi = 0, delta = 0.1):");
    println!("  solver : {:.1} bits/s ({})", sharp_ao.rate, sharp_ao.binding_constraint);
    for (name, x) in [("x = 0", 0.0), ("x = L/4", cfg.length / 4.0), ("x = L/2", cfg.length / 2.0)] {
        let base = solve_baseline(&sharp_problem, x)?;
        if base.feasible {
            println!(
                "  {name:<7}: {:.1} bits/s at {:.3} dBm ({})",
                base.rate,
                watts_to_dbm(base.p0_opt),
                base.binding_constraint
            );
        } else {
            println!("  {name:<7}: infeasible (rate 0)");
        }
    }

    // A scenario where covertness cannot be met at any power: the warden
    // may be standing within one meter of the device.
    let tight = ScenarioConfig {
        d_b_e: 3.0,
        chi: 2.9,
        ..ScenarioConfig::default()
    };
    let blocked = solve_ao(&tight.to_problem()?, &tight.ao_params())?;
    println!();
    println!(
        "warden possibly {:.1} m from the device: feasible = {}, rate = {}",
        tight.d_b_e - tight.chi,
        blocked.feasible,
        blocked.rate
    );
    Ok(())
}
