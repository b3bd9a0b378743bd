//! The warden's energy-detection analysis.
//!
//! The warden measures received power and compares it against a threshold
//! `Gamma` to decide whether the backscatter device is transmitting. Its
//! noise power is only known within a multiplicative band (uniform in the dB
//! domain), which is what creates a detection-error floor. This module
//! implements the resulting false-alarm / miss-detection probabilities, the
//! total detection error probability (DEP) and its minimizing threshold in
//! closed form, the worst-case DEP under bounded location and CSI estimation
//! errors, and a seeded Monte-Carlo estimator used as an independent oracle
//! for all of the above.
//!
//! With `x_lo = nominal / rho` and `x_hi = rho * nominal`, the received
//! power is `delta1 + noise` when the device is silent and `delta2 + noise`
//! when it transmits, so the analytic DEP pieces are driven entirely by
//! where `Gamma` falls relative to `[x_lo, x_hi]` shifted by `delta1` and
//! `delta2`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::{channel_gain_downlink, PowerConfig, RfConstants};
use crate::geometry::{distance, Point3};
use crate::{Error, Result};

/// Bounded multiplicative noise-uncertainty model at the warden.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseUncertainty {
    /// Nominal noise power, watts.
    pub nominal: f64,
    /// Uncertainty ratio, dimensionless, > 1.
    pub rho: f64,
    /// Lower support edge `nominal / rho`, watts (derived).
    pub x_lo: f64,
    /// Upper support edge `rho * nominal`, watts (derived).
    pub x_hi: f64,
}

impl NoiseUncertainty {
    pub fn new(nominal: f64, rho: f64) -> Result<Self> {
        if !(nominal > 0.0) || !nominal.is_finite() {
            return Err(Error::InvalidParameter {
                name: "sigma_e_nominal",
                reason: format!("nominal noise power must be positive, got {nominal}"),
            });
        }
        if !(rho > 1.0) || !rho.is_finite() {
            return Err(Error::InvalidParameter {
                name: "rho",
                reason: format!("noise-uncertainty ratio must exceed 1, got {rho}"),
            });
        }
        Ok(Self {
            nominal,
            rho,
            x_lo: nominal / rho,
            x_hi: rho * nominal,
        })
    }

    /// Build from a dB-domain uncertainty, `rho = 10^(rho_db / 10)`.
    pub fn from_db(nominal: f64, rho_db: f64) -> Result<Self> {
        if !(rho_db > 0.0) {
            return Err(Error::InvalidParameter {
                name: "rho_db",
                reason: format!("dB uncertainty must be positive, got {rho_db}"),
            });
        }
        Self::new(nominal, crate::units::db_to_linear(rho_db))
    }

    /// Width of the noise-power support, `x_hi - x_lo`.
    pub fn support_width(&self) -> f64 {
        self.x_hi - self.x_lo
    }
}

/// Bounded estimation errors for the warden's location and channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EveUncertainty {
    /// Maximum location estimation error, meters.
    pub chi: f64,
    /// Maximum CSI estimation error, dimensionless.
    pub delta: f64,
    /// Estimated small-scale channel magnitude of the device-to-warden link.
    pub g_est: f64,
}

impl EveUncertainty {
    pub fn validate(&self) -> Result<()> {
        if !(self.chi >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "chi",
                reason: format!("location error bound must be >= 0, got {}", self.chi),
            });
        }
        if !(self.delta >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "delta",
                reason: format!("CSI error bound must be >= 0, got {}", self.delta),
            });
        }
        if !(self.g_est > 0.0) {
            return Err(Error::InvalidParameter {
                name: "g_est",
                reason: format!("estimated channel magnitude must be positive, got {}", self.g_est),
            });
        }
        Ok(())
    }
}

/// A probability clamped to `[0, 1]` with the raw closed-form value kept for
/// diagnostics; constraint algebra in the optimizer runs on `raw`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClampedProb {
    pub value: f64,
    pub raw: f64,
}

impl ClampedProb {
    fn from_raw(raw: f64) -> Self {
        Self {
            value: raw.clamp(0.0, 1.0),
            raw,
        }
    }
}

/// Result of minimizing the total DEP over the detection threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalDetection {
    /// Minimizing threshold `x_lo + delta2`, watts.
    pub threshold: f64,
    /// Minimum total DEP, clamped to [0, 1].
    pub dep_min: f64,
    /// Unclamped closed-form value.
    pub dep_min_raw: f64,
    /// The backscatter excess power exceeds the noise-support width, so a
    /// threshold band separates the hypotheses exactly and the warden
    /// detects with certainty.
    pub certain_detection: bool,
}

/// Full detection summary for one operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionReport {
    /// Warden received power under the silent hypothesis (noise excluded), watts.
    pub delta1: f64,
    /// Warden received power under the transmitting hypothesis (noise excluded), watts.
    pub delta2: f64,
    /// Optimal detection threshold, watts.
    pub threshold_opt: f64,
    /// Minimum total DEP at the true channel.
    pub dep_min: f64,
    /// Worst-case minimum total DEP under location/CSI uncertainty.
    pub dep_worst_case: f64,
    /// Unclamped worst-case value (can be negative when the warden can
    /// detect with certainty).
    pub dep_worst_case_raw: f64,
    /// See [`OptimalDetection::certain_detection`].
    pub certain_detection: bool,
}

/// PDF of the warden's noise power, `1 / (2 x ln rho)` on `[x_lo, x_hi]`.
pub fn noise_pdf(x: f64, model: &NoiseUncertainty) -> f64 {
    if x < model.x_lo || x > model.x_hi {
        0.0
    } else {
        1.0 / (2.0 * x * model.rho.ln())
    }
}

/// Noise-free received powers at the warden under the two hypotheses.
///
/// `eve_gain` is the squared device-to-warden channel magnitude and already
/// contains its own `eta * d^-alpha * |g|^2` factor.
pub fn hypothesis_powers(
    p0: f64,
    d_pt_e: f64,
    d_pt_b: f64,
    eve_gain: f64,
    cfg: &PowerConfig,
    constants: &RfConstants,
) -> Result<(f64, f64)> {
    if d_pt_e <= 0.0 {
        return Err(Error::ZeroDistance { link: "TPA-to-warden" });
    }
    let delta1 = p0 * channel_gain_downlink(d_pt_e, constants)?;
    let delta2 = delta1 + cfg.zeta * cfg.kappa * p0 * channel_gain_downlink(d_pt_b, constants)? * eve_gain;
    Ok((delta1, delta2))
}

/// False-alarm probability at threshold `gamma`.
pub fn dep_false_alarm(gamma: f64, delta1: f64, model: &NoiseUncertainty) -> f64 {
    if gamma < model.x_lo + delta1 {
        1.0
    } else if gamma <= model.x_hi + delta1 {
        (model.x_hi / (gamma - delta1)).ln() / (2.0 * model.rho.ln())
    } else {
        0.0
    }
}

/// Miss-detection probability at threshold `gamma`.
pub fn dep_miss(gamma: f64, delta2: f64, model: &NoiseUncertainty) -> f64 {
    if gamma < model.x_lo + delta2 {
        0.0
    } else if gamma <= model.x_hi + delta2 {
        ((gamma - delta2) / model.x_lo).ln() / (2.0 * model.rho.ln())
    } else {
        1.0
    }
}

/// Total DEP `P_f + P_m` at threshold `gamma` (equal hypothesis priors).
pub fn dep_total(gamma: f64, delta1: f64, delta2: f64, model: &NoiseUncertainty) -> f64 {
    dep_false_alarm(gamma, delta1, model) + dep_miss(gamma, delta2, model)
}

/// Minimize the total DEP over the threshold.
///
/// The minimizer is `x_lo + delta2`; the minimum is
/// `ln(x_hi / (x_lo + G)) / (2 ln rho)` with `G = delta2 - delta1` the
/// backscatter excess power at the warden. When `G` exceeds the
/// noise-support width the raw value goes negative and the warden can
/// separate the hypotheses exactly; the clamped minimum is 0.
pub fn optimal_detection(delta1: f64, delta2: f64, model: &NoiseUncertainty) -> OptimalDetection {
    debug_assert!(delta2 >= delta1, "delta2 must dominate delta1");
    let excess = delta2 - delta1;
    let raw = (model.x_hi / (model.x_lo + excess)).ln() / (2.0 * model.rho.ln());
    OptimalDetection {
        threshold: model.x_lo + delta2,
        dep_min: raw.clamp(0.0, 1.0),
        dep_min_raw: raw,
        certain_detection: excess > model.support_width(),
    }
}

/// Largest squared device-to-warden channel gain consistent with the bounded
/// location and CSI errors.
///
/// The worst-case warden location is the boundary point of the uncertainty
/// ball closest to the device, `eve_est + chi * (bd - eve_est) / |bd - eve_est|`,
/// giving distance `|bd - eve_est| - chi`; the worst-case small-scale
/// magnitude is `(1 + delta) * g_est`.
pub fn worst_case_eve_gain(
    bd: Point3,
    eve_est: Point3,
    unc: &EveUncertainty,
    constants: &RfConstants,
) -> Result<f64> {
    let d = distance(bd, eve_est);
    if d <= unc.chi {
        return Err(Error::UncertaintyBallContainsDevice {
            distance: d,
            chi: unc.chi,
        });
    }
    let worst_d = d - unc.chi;
    let worst_g = (1.0 + unc.delta) * unc.g_est;
    crate::channel::channel_gain_eve_ground(worst_d, worst_g, constants)
}

/// Worst-case minimum total DEP at transmit power `p0` and TPA-to-device
/// distance `d_pt_b`.
pub fn worst_case_dep(
    p0: f64,
    d_pt_b: f64,
    worst_gain: f64,
    cfg: &PowerConfig,
    constants: &RfConstants,
    model: &NoiseUncertainty,
) -> Result<ClampedProb> {
    let excess = cfg.zeta * cfg.kappa * p0 * channel_gain_downlink(d_pt_b, constants)? * worst_gain;
    let raw = (model.x_hi / (model.x_lo + excess)).ln() / (2.0 * model.rho.ln());
    Ok(ClampedProb::from_raw(raw))
}

/// Empirical false-alarm and miss-detection probabilities from `n` draws of
/// the warden's noise power (uniform in the dB domain).
///
/// Deterministic for a fixed seed.
pub fn monte_carlo_dep(
    gamma: f64,
    delta1: f64,
    delta2: f64,
    model: &NoiseUncertainty,
    n: usize,
    seed: u64,
) -> (f64, f64) {
    assert!(n >= 1, "need at least one sample");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut false_alarms = 0usize;
    let mut misses = 0usize;
    for _ in 0..n {
        // sigma^2 = nominal * rho^u with u ~ U[-1, 1] is exactly the
        // dB-domain uniform draw.
        let u: f64 = rng.gen_range(-1.0..=1.0);
        let noise = model.nominal * model.rho.powf(u);
        if delta1 + noise >= gamma {
            false_alarms += 1;
        }
        if delta2 + noise <= gamma {
            misses += 1;
        }
    }
    (
        false_alarms as f64 / n as f64,
        misses as f64 / n as f64,
    )
}

/// Build a full detection summary at one operating point.
///
/// `eve_true` and `g_true` describe the warden's actual position and channel
/// (used for the true-channel DEP); the worst case comes from the scenario's
/// estimated warden location and the uncertainty bounds.
pub fn report(
    scenario: &crate::geometry::Scenario,
    tpa_x: f64,
    eve_true: Point3,
    g_true: f64,
    cfg: &PowerConfig,
    model: &NoiseUncertainty,
    unc: &EveUncertainty,
) -> Result<DetectionReport> {
    let d_be = distance(scenario.layout.bd, eve_true);
    let eve_gain = crate::channel::channel_gain_eve_ground(d_be, g_true, &scenario.rf)?;
    let (delta1, delta2) = hypothesis_powers(
        cfg.p0,
        scenario.d_pt_to(tpa_x, eve_true),
        scenario.d_pt_b_at(tpa_x),
        eve_gain,
        cfg,
        &scenario.rf,
    )?;
    let opt = optimal_detection(delta1, delta2, model);
    let worst_gain = worst_case_eve_gain(scenario.layout.bd, scenario.layout.eve_estimate, unc, &scenario.rf)?;
    let worst = worst_case_dep(cfg.p0, scenario.d_pt_b_at(tpa_x), worst_gain, cfg, &scenario.rf, model)?;
    Ok(DetectionReport {
        delta1,
        delta2,
        threshold_opt: opt.threshold,
        dep_min: opt.dep_min,
        dep_worst_case: worst.value,
        dep_worst_case_raw: worst.raw,
        certain_detection: opt.certain_detection,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn model() -> NoiseUncertainty {
        // -90 dBm nominal, 3 dB uncertainty.
        NoiseUncertainty::from_db(1e-12, 3.0).unwrap()
    }

    fn rf() -> RfConstants {
        RfConstants::new(28e9, 1.4, 2.0).unwrap()
    }

    fn cfg() -> PowerConfig {
        PowerConfig {
            p0: 100.0,
            p_max: 100.0,
            kappa: 0.375,
            zeta: 1.0,
            noise_rpa: 2.511886431509582e-15,
            bandwidth: 10e3,
        }
    }

    #[test]
    fn support_edges_in_dbm() {
        // -90 dBm nominal with 3 dB band: edges at -93 dBm and -87 dBm.
        let m = model();
        assert!(((m.x_lo - 5.011872336272715e-13) / m.x_lo).abs() < 1e-13);
        assert!(((m.x_hi - 1.9952623149688827e-12) / m.x_hi).abs() < 1e-13);
        assert!(((m.x_hi / m.x_lo - m.rho * m.rho) / (m.rho * m.rho)).abs() < 1e-14);
        assert!(m.x_lo < m.nominal && m.nominal < m.x_hi);
    }

    #[test]
    fn pdf_support_and_normalization() {
        let m = model();
        assert_eq!(noise_pdf(m.x_lo * 0.999, &m), 0.0);
        assert_eq!(noise_pdf(m.x_hi * 1.001, &m), 0.0);
        assert!(noise_pdf(m.nominal, &m) > 0.0);
        // Midpoint-rule quadrature over the support must integrate to 1.
        let n = 200_000;
        let h = m.support_width() / n as f64;
        let integral: f64 = (0..n)
            .map(|i| noise_pdf(m.x_lo + (i as f64 + 0.5) * h, &m) * h)
            .sum();
        assert!((integral - 1.0).abs() < 1e-6, "integral = {integral}");
    }

    #[test]
    fn false_alarm_boundaries_and_midpoint() {
        let m = model();
        let d1 = 3.0e-13;
        assert!((dep_false_alarm(m.x_lo + d1, d1, &m) - 1.0).abs() < 1e-12);
        assert!(dep_false_alarm(m.x_hi + d1, d1, &m).abs() < 1e-12);
        assert!((dep_false_alarm(m.nominal + d1, d1, &m) - 0.5).abs() < 1e-12);
        assert_eq!(dep_false_alarm(0.0, d1, &m), 1.0);
    }

    #[test]
    fn miss_boundaries_and_midpoint() {
        let m = model();
        let d2 = 8.0e-13;
        assert!(dep_miss(m.x_lo + d2, d2, &m).abs() < 1e-12);
        assert!((dep_miss(m.x_hi + d2, d2, &m) - 1.0).abs() < 1e-12);
        assert!((dep_miss(m.nominal + d2, d2, &m) - 0.5).abs() < 1e-12);
        assert_eq!(dep_miss(0.0, d2, &m), 0.0);
    }

    #[test]
    fn total_extreme_branches() {
        let m = model();
        let (d1, d2) = (3.0e-13, 9.0e-13);
        assert_eq!(dep_total(0.5 * (m.x_lo + d1), d1, d2, &m), 1.0);
        assert_eq!(dep_total(2.0 * (m.x_hi + d2), d1, d2, &m), 1.0);
        // Silent device: total error is 1 for every threshold inside the
        // overlap (the warden cannot do better than guessing).
        let g_star = m.x_lo + d1;
        assert!((dep_total(g_star, d1, d1, &m) - 1.0).abs() < 1e-12);
        assert!((dep_total(m.nominal + d1, d1, d1, &m) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn total_matches_lemma_value_at_optimal_threshold() {
        let m = model();
        let (d1, d2) = (3.0e-13, 9.0e-13);
        let opt = optimal_detection(d1, d2, &m);
        let at_opt = dep_total(opt.threshold, d1, d2, &m);
        assert!(
            ((at_opt - opt.dep_min) / opt.dep_min).abs() < 1e-12,
            "piecewise {at_opt} vs closed form {}",
            opt.dep_min
        );
    }

    #[test]
    fn optimal_detection_edge_cases() {
        let m = model();
        // Blind warden at zero excess power.
        let blind = optimal_detection(2e-13, 2e-13, &m);
        assert_eq!(blind.dep_min, 1.0);
        assert!(!blind.certain_detection);
        // Excess equal to the support width: log of 1.
        let zero = optimal_detection(0.0, m.support_width(), &m);
        assert!(zero.dep_min.abs() < 1e-12);
        assert!(!zero.certain_detection);
        // Beyond the support width: raw negative, clamped to 0, flagged.
        let beyond = optimal_detection(0.0, 2.0 * m.support_width(), &m);
        assert_eq!(beyond.dep_min, 0.0);
        assert!(beyond.dep_min_raw < 0.0);
        assert!(beyond.certain_detection);
    }

    #[test]
    fn optimal_detection_matches_dense_grid() {
        // 1-D grid oracle over the full threshold range. The grid min sits
        // above the true min by at most one step times the local slope, and
        // the steeper of the two branches meeting at the minimizer has
        // slope 1 / (2 ln(rho) (x_lo + excess)).
        let m = model();
        for (d1, g_frac) in [(0.0, 0.3), (4.0e-13, 0.8), (1.0e-12, 0.05)] {
            let d2 = d1 + g_frac * m.support_width();
            let opt = optimal_detection(d1, d2, &m);
            let (lo, hi) = (m.x_lo + d1, m.x_hi + d2);
            let n = 200_000;
            let mut best = f64::INFINITY;
            let mut best_g = lo;
            for i in 0..=n {
                let g = lo + (hi - lo) * i as f64 / n as f64;
                let v = dep_total(g, d1, d2, &m);
                if v < best {
                    best = v;
                    best_g = g;
                }
            }
            let step = (hi - lo) / n as f64;
            assert!(
                (best_g - opt.threshold).abs() <= step,
                "argmin off by more than one step: {best_g} vs {}",
                opt.threshold
            );
            let slope = 1.0 / (2.0 * m.rho.ln() * (m.x_lo + (d2 - d1)));
            assert!(best >= opt.dep_min - 1e-12);
            assert!(
                best - opt.dep_min <= slope * step + 1e-12,
                "grid min {best} too far above closed form {}",
                opt.dep_min
            );
        }
    }

    #[test]
    fn worst_case_gain_reference_points() {
        let c = rf();
        let bd = [10.0, 0.0, 0.0];
        let eve = [15.0, 0.0, 0.0];
        // No uncertainty: identical to the plain ground-link gain.
        let unc0 = EveUncertainty { chi: 0.0, delta: 0.0, g_est: 1.278 };
        let g0 = worst_case_eve_gain(bd, eve, &unc0, &c).unwrap();
        let direct = crate::channel::channel_gain_eve_ground(5.0, 1.278, &c).unwrap();
        assert_eq!(g0, direct);
        // CSI bound scales the gain by (1 + delta)^2.
        let unc_d = EveUncertainty { delta: 0.3, ..unc0 };
        let gd = worst_case_eve_gain(bd, eve, &unc_d, &c).unwrap();
        assert!(((gd / g0) - 1.69) / 1.69 < 1e-13);
        // Frozen joint case: eta * (1.3 * 1.278)^2 / 9.
        let unc = EveUncertainty { chi: 2.0, delta: 0.3, g_est: 1.278 };
        let g = worst_case_eve_gain(bd, eve, &unc, &c).unwrap();
        assert!(((g - 2.2264426763708708e-7) / g).abs() < 1e-13, "got {g}");
        // Device inside the uncertainty ball is an error.
        let tight = EveUncertainty { chi: 5.0, delta: 0.0, g_est: 1.278 };
        assert!(matches!(
            worst_case_eve_gain(bd, eve, &tight, &c),
            Err(Error::UncertaintyBallContainsDevice { .. })
        ));
    }

    #[test]
    fn worst_case_dep_trivial_cases() {
        let m = model();
        let c = rf();
        let cfg = cfg();
        assert_eq!(worst_case_dep(0.0, 3.0, 1e-7, &cfg, &c, &m).unwrap().value, 1.0);
        assert_eq!(worst_case_dep(10.0, 3.0, 0.0, &cfg, &c, &m).unwrap().value, 1.0);
    }

    #[test]
    fn worst_case_dep_agrees_with_lemma_route() {
        // The dedicated worst-case closed form and optimal_detection fed
        // with the worst-case backscatter excess must agree to 1e-12
        // relative: the direct TPA-to-warden term is common to both
        // hypotheses and cancels from the minimum DEP.
        let m = model();
        let c = rf();
        let cfg = cfg();
        let bd = [10.0, 0.0, 0.0];
        let eve = [15.0, 0.0, 0.0];
        let unc = EveUncertainty { chi: 2.0, delta: 0.3, g_est: 1.278 };
        let worst_gain = worst_case_eve_gain(bd, eve, &unc, &c).unwrap();
        let d_pt_b = 9.25f64.sqrt();
        for p0 in [0.1, 2.0, 21.0, 100.0] {
            let direct = worst_case_dep(p0, d_pt_b, worst_gain, &cfg, &c, &m).unwrap();
            let (d1, d2) = hypothesis_powers(p0, 6.0, d_pt_b, worst_gain, &cfg, &c).unwrap();
            let excess = d2 - d1;
            let via_lemma = optimal_detection(0.0, excess, &m);
            assert!(
                ((direct.raw - via_lemma.dep_min_raw) / via_lemma.dep_min_raw).abs() < 1e-8,
                "routes disagree at p0 = {p0}: {} vs {}",
                direct.raw,
                via_lemma.dep_min_raw
            );
            // Recomputing the excess without the cancellation-prone
            // subtraction tightens the agreement to full precision.
            let exact_excess =
                cfg.zeta * cfg.kappa * p0 * channel_gain_downlink(d_pt_b, &c).unwrap() * worst_gain;
            let via_lemma_exact = optimal_detection(0.0, exact_excess, &m);
            assert!(
                ((direct.raw - via_lemma_exact.dep_min_raw) / via_lemma_exact.dep_min_raw).abs()
                    < 1e-12,
                "exact routes disagree at p0 = {p0}"
            );
        }
    }

    #[test]
    fn monte_carlo_complementary_events() {
        let m = model();
        let d = 4.0e-13;
        let n = 100_000;
        let (pf, pm) = monte_carlo_dep(m.nominal + d, d, d, &m, n, 7);
        let bound = 3.0 / (n as f64).sqrt();
        assert!(
            (pf + pm - 1.0).abs() <= bound,
            "pf + pm = {} not within {bound} of 1",
            pf + pm
        );
    }

    #[test]
    fn monte_carlo_deterministic_for_fixed_seed() {
        let m = model();
        let a = monte_carlo_dep(1.2e-12, 2e-13, 6e-13, &m, 50_000, 42);
        let b = monte_carlo_dep(1.2e-12, 2e-13, 6e-13, &m, 50_000, 42);
        assert_eq!(a, b);
        let c = monte_carlo_dep(1.2e-12, 2e-13, 6e-13, &m, 50_000, 43);
        assert_ne!(a, c);
    }

    #[test]
    fn monte_carlo_error_shrinks_with_sample_count() {
        // Worst gap over a threshold grid stays inside the 3-sigma binomial
        // envelope at every sample count, so the error scales as 1/sqrt(n).
        let m = model();
        let (d1, d2) = (2.0e-13, 9.0e-13);
        let span = (m.x_lo + d1, m.x_hi + d2);
        for n in [1_000usize, 10_000, 100_000, 1_000_000] {
            let mut worst = 0.0f64;
            for i in 0..=20 {
                let gamma = span.0 + (span.1 - span.0) * i as f64 / 20.0;
                let (pf, pm) = monte_carlo_dep(gamma, d1, d2, &m, n, 7);
                worst = worst
                    .max((pf - dep_false_alarm(gamma, d1, &m)).abs())
                    .max((pm - dep_miss(gamma, d2, &m)).abs());
            }
            let bound = 3.0 / (n as f64).sqrt();
            assert!(worst <= bound, "worst gap {worst} above {bound} at n = {n}");
        }
    }

    #[test]
    fn monte_carlo_tracks_closed_forms() {
        let m = model();
        let (d1, d2) = (2.0e-13, 8.0e-13);
        for gamma in [9e-13, 1.3e-12, 2.2e-12] {
            let (pf, pm) = monte_carlo_dep(gamma, d1, d2, &m, 200_000, 11);
            assert!(
                (pf - dep_false_alarm(gamma, d1, &m)).abs() < 0.01,
                "pf off at gamma = {gamma}"
            );
            assert!(
                (pm - dep_miss(gamma, d2, &m)).abs() < 0.01,
                "pm off at gamma = {gamma}"
            );
        }
    }

    #[test]
    fn report_is_internally_consistent() {
        let s = crate::geometry::Scenario::new(
            crate::geometry::Room::new(20.0, 20.0, 3.0).unwrap(),
            crate::geometry::WaveguidePair { y_t: -0.5, y_r: 0.5 },
            crate::geometry::NodeLayout {
                bd: [10.0, 0.0, 0.0],
                eve_estimate: [15.0, 0.0, 0.0],
                tpa_x: 5.0,
                rpa_x: 10.0,
            },
            rf(),
        )
        .unwrap();
        let m = model();
        let unc = EveUncertainty { chi: 2.0, delta: 0.3, g_est: 1.278 };
        let rep = report(&s, 5.0, [15.0, 0.0, 0.0], 1.278, &cfg(), &m, &unc).unwrap();
        assert!(rep.delta2 >= rep.delta1 && rep.delta1 >= 0.0);
        assert!((rep.threshold_opt - (m.x_lo + rep.delta2)).abs() < 1e-25);
        // Worst case can never look better for the transmitter than the
        // true channel when the true gain is below the worst-case gain.
        assert!(rep.dep_worst_case <= rep.dep_min);
    }

    proptest! {
        #[test]
        fn dep_pieces_are_monotone_and_bounded(
            g_lo in 0.0f64..2.0,
            g_hi in 0.0f64..2.0,
            d1 in 0.0f64..1.0,
            excess in 0.0f64..1.5,
        ) {
            let m = model();
            let span = m.x_hi + 2.0 * m.nominal;
            let (a, b) = if g_lo <= g_hi { (g_lo, g_hi) } else { (g_hi, g_lo) };
            let (ga, gb) = (a * span, b * span);
            let d1 = d1 * m.nominal;
            let d2 = d1 + excess * m.support_width();
            let (fa, fb) = (dep_false_alarm(ga, d1, &m), dep_false_alarm(gb, d1, &m));
            let (ma, mb) = (dep_miss(ga, d2, &m), dep_miss(gb, d2, &m));
            prop_assert!((0.0..=1.0).contains(&fa) && (0.0..=1.0).contains(&fb));
            prop_assert!((0.0..=1.0).contains(&ma) && (0.0..=1.0).contains(&mb));
            prop_assert!(fb <= fa + 1e-12, "false alarm must not increase");
            prop_assert!(mb + 1e-12 >= ma, "miss must not decrease");
        }

        #[test]
        fn worst_case_dep_monotonicities(
            p0 in 0.01f64..100.0,
            d_be in 4.0f64..12.0,
            chi in 0.0f64..2.0,
            delta in 0.0f64..0.5,
        ) {
            let m = model();
            let c = rf();
            let cfg = cfg();
            let bd = [10.0, 0.0, 0.0];
            let eve = [10.0 + d_be, 0.0, 0.0];
            let unc = EveUncertainty { chi, delta, g_est: 1.278 };
            let gain = worst_case_eve_gain(bd, eve, &unc, &c).unwrap();
            let dep = worst_case_dep(p0, 3.1, gain, &cfg, &c, &m).unwrap().raw;

            // Non-increasing in transmit power.
            let dep_hi_p = worst_case_dep(p0 * 2.0, 3.1, gain, &cfg, &c, &m).unwrap().raw;
            prop_assert!(dep_hi_p <= dep + 1e-12);

            // Non-increasing in the CSI error bound.
            let unc_d = EveUncertainty { delta: delta + 0.2, ..unc };
            let gain_d = worst_case_eve_gain(bd, eve, &unc_d, &c).unwrap();
            let dep_d = worst_case_dep(p0, 3.1, gain_d, &cfg, &c, &m).unwrap().raw;
            prop_assert!(dep_d <= dep + 1e-12);

            // Non-increasing in the location error bound.
            let unc_c = EveUncertainty { chi: chi + 0.5, ..unc };
            let gain_c = worst_case_eve_gain(bd, eve, &unc_c, &c).unwrap();
            let dep_c = worst_case_dep(p0, 3.1, gain_c, &cfg, &c, &m).unwrap().raw;
            prop_assert!(dep_c <= dep + 1e-12);

            // Non-decreasing in the device-to-warden distance.
            let eve_far = [10.0 + d_be + 1.0, 0.0, 0.0];
            let gain_far = worst_case_eve_gain(bd, eve_far, &unc, &c).unwrap();
            let dep_far = worst_case_dep(p0, 3.1, gain_far, &cfg, &c, &m).unwrap().raw;
            prop_assert!(dep_far + 1e-12 >= dep);
        }
    }
}
