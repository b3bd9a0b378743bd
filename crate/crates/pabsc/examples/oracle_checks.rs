//! Certify the closed forms against brute-force grids: the optimal
//! detection threshold against a dense threshold grid, the joint
//! power/position optimum against an exhaustive 2-D grid, and the
//! position-bound offset term against the exact feasibility boundary.
//!
//! ```text
//! cargo run --release --example oracle_checks
//! ```

use pabsc::config::ScenarioConfig;
use pabsc::detection::hypothesis_powers;
use pabsc::oracle::{verify_delta3_variants, verify_lemma1, verify_p1, GridSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = ScenarioConfig::default();
    let problem = cfg.to_problem()?;
    let params = cfg.ao_params();

    // 1. Optimal threshold and minimum detection error vs a 1e6-point grid.
    let eve_gain =
        pabsc::channel::channel_gain_eve_ground(cfg.d_b_e, cfg.g_est, &problem.scenario.rf)?;
    let (d1, d2) = hypothesis_powers(
        cfg.p0,
        problem
            .scenario
            .d_pt_to(cfg.ao_init_tpa_x, problem.scenario.layout.eve_estimate),
        problem.scenario.d_pt_b_at(cfg.ao_init_tpa_x),
        eve_gain,
        &problem.power,
        &problem.scenario.rf,
    )?;
    let grid = GridSpec::new(problem.noise.x_lo + d1, problem.noise.x_hi + d2, 1_000_000)?;
    let lemma = verify_lemma1(d1, d2, &problem.noise, &grid, 1e-6);
    println!("threshold oracle      : {}", if lemma.pass { "PASS" } else { "FAIL" });
    println!("  closed-form minimum : {:.8}", lemma.closed_form_value);
    println!("  grid minimum        : {:.8}", lemma.grid_value);
    println!("  value gap           : {:.2e} (tolerance 1e-6)", lemma.abs_gap);
    println!(
        "  argmin gap          : {:.2e} W (grid step {:.2e} W)",
        (lemma.arg_closed.unwrap() - lemma.arg_grid.unwrap()).abs(),
        lemma.grid_resolution
    );

    // 2. Joint optimum vs an exhaustive 500 x 500 grid with exact
    //    constraint evaluation at every node.
    let power_grid = GridSpec::new(0.0, cfg.p_max, 500)?;
    let pos_grid = GridSpec::new(0.0, cfg.length, 500)?;
    let p1 = verify_p1(&problem, &params, &power_grid, &pos_grid)?;
    println!();
    println!("joint-optimum oracle  : {}", if p1.pass { "PASS" } else { "FAIL" });
    println!("  solver rate         : {:.3} bits/s", p1.closed_form_value);
    println!("  grid best rate      : {:.3} bits/s", p1.grid_value);

    // 3. Which offset term reproduces the exact position-feasibility
    //    boundary: the derived (y_wt - y_b)^2 + H^2 or the sign-flipped
    //    (y_wt + y_b)^2 - H^2.
    let scan = GridSpec::new(0.0, cfg.length, 100_000)?;
    let rep = verify_delta3_variants(&problem, &params, &scan)?;
    println!();
    println!("position-bound forms at P0 = {:.2} W:", rep.p0);
    println!("  exact boundary scan : {:?}", rep.scan_transitions);
    println!(
        "  derived form        : {:?} (worst gap {:.2e} m) -> {}",
        rep.derived.transitions,
        rep.derived.worst_gap,
        if rep.derived.matches_grid { "matches" } else { "MISMATCH" }
    );
    println!(
        "  sign-flipped form   : {:?} (worst gap {:.2e} m) -> {}",
        rep.printed.transitions,
        rep.printed.worst_gap,
        if rep.printed.matches_grid { "matches" } else { "MISMATCH" }
    );
    println!("  radicand shift      : {:.3} m^2", rep.radicand_shift);
    Ok(())
}
