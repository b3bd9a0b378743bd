//! Reproduce the three study families with the shipped sweep files: rate
//! versus warden distance, versus power budget, and versus covertness
//! slack. Writes one CSV and one SVG per family into `out/`.
//!
//! ```text
//! cargo run --release --example figure_sweeps
//! ```

use std::path::Path;

use pabsc::commands::cmd_sweep;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let out = Path::new("out");

    let families = [
        (Some("default.cfg"), "rate_vs_eve_distance.sweep"),
        (Some("budget.cfg"), "rate_vs_power_budget.sweep"),
        (Some("epsilon.cfg"), "rate_vs_epsilon.sweep"),
    ];
    for (cfg, sweep) in families {
        let cfg_path = cfg.map(|c| configs.join(c));
        let (csv, svg) = cmd_sweep(cfg_path.as_deref(), &configs.join(sweep), out, true)
            .map_err(|e| e.message())?;
        println!("{sweep}:");
        println!("  {}", csv.display());
        println!("  {}", svg.display());
    }
    println!();
    println!("open the SVGs in a browser; solver curves are red, baselines blue.");
    Ok(())
}
