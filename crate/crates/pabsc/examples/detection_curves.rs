//! The warden's detection-error landscape: false alarm, miss and total
//! error probability versus the energy threshold, the closed-form optimal
//! threshold, and the worst case under location/CSI uncertainty.
//!
//! ```text
//! cargo run --release --example detection_curves
//! ```

use pabsc::channel::{channel_gain_eve_ground, PowerConfig, RfConstants};
use pabsc::detection::{
    dep_false_alarm, dep_miss, dep_total, hypothesis_powers, optimal_detection,
    worst_case_dep, worst_case_eve_gain, EveUncertainty, NoiseUncertainty,
};
use pabsc::units::dbm_to_watts;

fn main() -> pabsc::Result<()> {
    let rf = RfConstants::new(28e9, 1.4, 2.0)?;
    let cfg = PowerConfig {
        p0: dbm_to_watts(50.0),
        p_max: dbm_to_watts(50.0),
        kappa: 0.375,
        zeta: 1.0,
        noise_rpa: dbm_to_watts(-116.0),
        bandwidth: 10e3,
    };
    // -90 dBm nominal warden noise, 3 dB uncertainty band.
    let model = NoiseUncertainty::from_db(dbm_to_watts(-90.0), 3.0)?;

    // Warden 5 m from the device on the floor; TPA 5 m along the waveguide.
    let bd = [10.0, 0.0, 0.0];
    let eve = [15.0, 0.0, 0.0];
    let d_pt_b = (25.0f64 + 0.25 + 9.0).sqrt();
    let d_pt_e = (100.0f64 + 0.25 + 9.0).sqrt();
    let eve_gain = channel_gain_eve_ground(5.0, 1.278, &rf)?;
    let (delta1, delta2) = hypothesis_powers(cfg.p0, d_pt_e, d_pt_b, eve_gain, &cfg, &rf)?;
    println!("direct TPA->warden power   delta1 = {delta1:.3e} W");
    println!("backscatter excess  delta2-delta1 = {:.3e} W", delta2 - delta1);
    println!("noise support: [{:.3e}, {:.3e}] W", model.x_lo, model.x_hi);
    println!();

    // The direct term is microwatts while the noise band and the excess are
    // picowatts, so tabulate thresholds as offsets above delta1.
    println!("gamma - delta1 (pW)   P_false_alarm   P_miss   P_total");
    let lo = model.x_lo + delta1;
    let hi = model.x_hi + delta2;
    for i in 0..=12 {
        let gamma = lo + (hi - lo) * i as f64 / 12.0;
        println!(
            "{:>19.4}  {:>14.4}  {:>7.4}  {:>8.4}",
            (gamma - delta1) * 1e12,
            dep_false_alarm(gamma, delta1, &model),
            dep_miss(gamma, delta2, &model),
            dep_total(gamma, delta1, delta2, &model)
        );
    }

    let opt = optimal_detection(delta1, delta2, &model);
    println!();
    println!(
        "optimal threshold at delta1 + {:.4} pW -> minimum total error {:.4}",
        (opt.threshold - delta1) * 1e12,
        opt.dep_min
    );

    // Robust view: the warden may be up to 2 m from its estimate and the
    // channel estimate may be 30% off.
    let unc = EveUncertainty { chi: 2.0, delta: 0.3, g_est: 1.278 };
    let worst_gain = worst_case_eve_gain(bd, eve, &unc, &rf)?;
    let worst = worst_case_dep(cfg.p0, d_pt_b, worst_gain, &cfg, &rf, &model)?;
    println!(
        "worst case under location/CSI uncertainty: {:.4} (raw {:.4})",
        worst.value, worst.raw
    );
    println!("a covertness target of 0.95 {} at this power",
        if worst.raw >= 0.95 { "holds" } else { "fails" });
    Ok(())
}
