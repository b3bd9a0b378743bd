//! Covert uplink rate maximization: alternating optimization of the transmit
//! power and the TPA position, both subproblems in closed form.
//!
//! The joint problem maximizes the backscatter rate subject to
//!
//! - a reliability floor: SNR at the RPA at least `gamma_th`,
//! - a covertness floor: worst-case minimum DEP at the warden at least
//!   `1 - epsilon` (evaluated on the unclamped closed form),
//! - the power budget `0 <= P0 <= p_max`,
//! - the waveguide box `0 <= x <= L`.
//!
//! At fixed position the feasible powers form an interval
//! `[p_snr_min, min(p_max, p_covert_max)]` and the rate is increasing in
//! power, so the optimal power is the interval's upper end. At fixed power
//! the rate is maximized by moving the TPA as close to the device as the
//! covertness exclusion zone allows; the feasible positions are an interval
//! centered on the device's `x` minus an open exclusion interval with the
//! same center, so the optimum is the device `x` itself or an exclusion-zone
//! boundary.

use crate::channel::{backscatter_budget, PowerConfig};
use crate::detection::{worst_case_dep, worst_case_eve_gain, EveUncertainty, NoiseUncertainty};
use crate::geometry::Scenario;
use crate::{Error, Result};

/// Covertness target and the derived power-cap coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovertnessSpec {
    /// Maximum tolerated drop of the warden's DEP below 1.
    pub epsilon: f64,
    /// Largest admissible backscatter excess power at the warden, watts
    /// (derived: `x_hi * rho^(-2 (1 - eps)) - x_lo = x_lo * (rho^(2 eps) - 1)`).
    pub xi: f64,
}

impl CovertnessSpec {
    pub fn new(epsilon: f64, noise: &NoiseUncertainty) -> Result<Self> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                reason: format!("covertness slack outside [0, 1]: {epsilon}"),
            });
        }
        // The product form is exact at epsilon = 0 and free of cancellation;
        // it is algebraically identical to x_hi * rho^(-2(1-eps)) - x_lo.
        let xi = noise.x_lo * (noise.rho.powf(2.0 * epsilon) - 1.0);
        Ok(Self { epsilon, xi })
    }
}

/// Reliability floor on the uplink SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReliabilitySpec {
    /// Minimum SNR at the RPA, dimensionless.
    pub gamma_th: f64,
}

impl ReliabilitySpec {
    pub fn new(gamma_th: f64) -> Result<Self> {
        if !(gamma_th >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "gamma_th",
                reason: format!("SNR threshold must be >= 0, got {gamma_th}"),
            });
        }
        Ok(Self { gamma_th })
    }
}

/// Which form of the position-bound offset term to use.
///
/// `Derived` is the correct expansion of the TPA-to-device distance,
/// `(y_wt - y_b)^2 + H^2`. `Printed` is the sign-flipped variant
/// `(y_wt + y_b)^2 - H^2`, kept only so the grid oracle can demonstrate
/// that it does not reproduce the true feasibility boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Delta3Form {
    #[default]
    Derived,
    Printed,
}

/// One fully-specified optimization instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub scenario: Scenario,
    pub power: PowerConfig,
    pub noise: NoiseUncertainty,
    pub eve: EveUncertainty,
    pub covertness: CovertnessSpec,
    pub reliability: ReliabilitySpec,
    pub delta3_form: Delta3Form,
    /// Worst-case squared device-to-warden gain; `None` when the location
    /// uncertainty ball contains the device.
    worst_gain: Option<f64>,
}

impl Problem {
    pub fn new(
        scenario: Scenario,
        power: PowerConfig,
        noise: NoiseUncertainty,
        eve: EveUncertainty,
        epsilon: f64,
        gamma_th: f64,
    ) -> Result<Self> {
        power.validate()?;
        eve.validate()?;
        let covertness = CovertnessSpec::new(epsilon, &noise)?;
        let reliability = ReliabilitySpec::new(gamma_th)?;
        let worst_gain =
            match worst_case_eve_gain(scenario.layout.bd, scenario.layout.eve_estimate, &eve, &scenario.rf) {
                Ok(g) => Some(g),
                Err(Error::UncertaintyBallContainsDevice { .. }) => None,
                Err(e) => return Err(e),
            };
        Ok(Self {
            scenario,
            power,
            noise,
            eve,
            covertness,
            reliability,
            delta3_form: Delta3Form::Derived,
            worst_gain,
        })
    }

    /// Worst-case squared device-to-warden gain, if defined.
    pub fn worst_gain(&self) -> Option<f64> {
        self.worst_gain
    }

    /// Achievable rate at an operating point, bits/s.
    pub fn rate_at(&self, p0: f64, tpa_x: f64) -> Result<f64> {
        Ok(backscatter_budget(
            p0,
            self.scenario.d_pt_b_at(tpa_x),
            self.scenario.d_b_pr(),
            &self.power,
            &self.scenario.rf,
        )?
        .rate)
    }

    /// Offset term of the position-bound radicands for the selected form.
    pub fn delta3(&self) -> f64 {
        let y_wt = self.scenario.waveguides.y_t;
        let y_b = self.scenario.layout.bd[1];
        let h = self.scenario.room.height;
        match self.delta3_form {
            Delta3Form::Derived => (y_wt - y_b).powi(2) + h * h,
            Delta3Form::Printed => (y_wt + y_b).powi(2) - h * h,
        }
    }

    /// Exact constraint check at an operating point, with relative
    /// tolerance `rel_tol` on each inequality. The covertness constraint is
    /// evaluated on the unclamped worst-case DEP.
    pub fn constraints_satisfied(&self, p0: f64, tpa_x: f64, rel_tol: f64) -> Result<bool> {
        let budget = backscatter_budget(
            p0,
            self.scenario.d_pt_b_at(tpa_x),
            self.scenario.d_b_pr(),
            &self.power,
            &self.scenario.rf,
        )?;
        let snr_ok = budget.snr >= self.reliability.gamma_th * (1.0 - rel_tol);
        let covert_ok = match self.worst_gain {
            Some(g) => {
                let dep = worst_case_dep(
                    p0,
                    self.scenario.d_pt_b_at(tpa_x),
                    g,
                    &self.power,
                    &self.scenario.rf,
                    &self.noise,
                )?;
                let target = 1.0 - self.covertness.epsilon;
                dep.raw >= target - rel_tol * target.abs().max(1.0)
            }
            None => false,
        };
        let power_ok = p0 >= -rel_tol && p0 <= self.power.p_max * (1.0 + rel_tol);
        let box_ok = tpa_x >= -rel_tol && tpa_x <= self.scenario.room.length * (1.0 + rel_tol);
        Ok(snr_ok && covert_ok && power_ok && box_ok)
    }
}

/// Feasible power interval at a fixed TPA position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerBounds {
    /// Smallest power meeting the SNR floor, watts.
    pub p_snr_min: f64,
    /// Largest power meeting the covertness floor, watts.
    pub p_covert_max: f64,
}

/// Feasible power interval at `tpa_x`.
///
/// Errors when the covertness target admits no positive power (`xi <= 0`)
/// or when the worst-case warden gain is undefined because the uncertainty
/// ball contains the device.
pub fn power_bounds(problem: &Problem, tpa_x: f64) -> Result<PowerBounds> {
    let xi = problem.covertness.xi;
    if xi <= 0.0 {
        return Err(Error::CovertnessInfeasible { xi });
    }
    let worst_gain = problem.worst_gain.ok_or(Error::UncertaintyBallContainsDevice {
        distance: crate::geometry::distance(
            problem.scenario.layout.bd,
            problem.scenario.layout.eve_estimate,
        ),
        chi: problem.eve.chi,
    })?;
    let eta = problem.scenario.rf.eta;
    let zk = problem.power.zeta * problem.power.kappa;
    let d_pt_b = problem.scenario.d_pt_b_at(tpa_x);
    let d_b_pr = problem.scenario.d_b_pr();
    if zk <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "kappa",
            reason: "zeta * kappa must be positive for a backscatter link".into(),
        });
    }
    let p_snr_min = problem.reliability.gamma_th * problem.power.noise_rpa
        * (d_pt_b * d_b_pr).powi(2)
        / (zk * eta * eta);
    let p_covert_max = xi * d_pt_b * d_pt_b / (zk * eta * worst_gain);
    Ok(PowerBounds {
        p_snr_min,
        p_covert_max,
    })
}

/// Optimal transmit power at a fixed TPA position: the top of the feasible
/// interval, `min(p_max, p_covert_max)`, or `None` when the SNR floor
/// exceeds it.
pub fn solve_power(problem: &Problem, tpa_x: f64) -> Result<Option<f64>> {
    let bounds = power_bounds(problem, tpa_x)?;
    let top = problem.power.p_max.min(bounds.p_covert_max);
    if bounds.p_snr_min <= top {
        Ok(Some(top))
    } else {
        Ok(None)
    }
}

/// Position-constraint intervals at a fixed power; both are centered on the
/// device's `x` coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositionBounds {
    /// Closed interval of positions meeting the SNR floor; `None` when the
    /// radicand is negative (no position can meet the floor).
    pub snr: Option<(f64, f64)>,
    /// Open exclusion interval of positions violating covertness; `None`
    /// when the radicand is negative (covertness holds everywhere).
    pub exclusion: Option<(f64, f64)>,
}

/// Compute the position-constraint intervals at power `p0`.
pub fn position_bounds(problem: &Problem, p0: f64) -> Result<PositionBounds> {
    let xi = problem.covertness.xi;
    if xi <= 0.0 {
        return Err(Error::CovertnessInfeasible { xi });
    }
    let worst_gain = problem.worst_gain.ok_or(Error::UncertaintyBallContainsDevice {
        distance: crate::geometry::distance(
            problem.scenario.layout.bd,
            problem.scenario.layout.eve_estimate,
        ),
        chi: problem.eve.chi,
    })?;
    let eta = problem.scenario.rf.eta;
    let zk = problem.power.zeta * problem.power.kappa;
    let x_b = problem.scenario.layout.bd[0];
    let d_b_pr = problem.scenario.d_b_pr();
    let delta3 = problem.delta3();

    let snr_scale = problem.reliability.gamma_th * problem.power.noise_rpa * d_b_pr * d_b_pr;
    let snr = if snr_scale <= 0.0 {
        // No reliability floor: every position qualifies.
        Some((f64::NEG_INFINITY, f64::INFINITY))
    } else {
        let rad = zk * p0 * eta * eta / snr_scale - delta3;
        (rad >= 0.0).then(|| {
            let w = rad.sqrt();
            (x_b - w, x_b + w)
        })
    };

    let excl_rad = zk * eta * p0 * worst_gain / xi - delta3;
    let exclusion = (excl_rad > 0.0).then(|| {
        let w = excl_rad.sqrt();
        (x_b - w, x_b + w)
    });

    Ok(PositionBounds { snr, exclusion })
}

/// Optimal TPA position at a fixed power: the admissible point closest to
/// the device's `x`. Returns `None` when the feasible set is empty.
///
/// When both exclusion-zone boundaries are admissible they are equidistant
/// from the device, and the lower one is chosen deterministically.
pub fn solve_position(problem: &Problem, p0: f64) -> Result<Option<f64>> {
    let bounds = position_bounds(problem, p0)?;
    let length = problem.scenario.room.length;
    let x_b = problem.scenario.layout.bd[0];
    let (snr_lo, snr_hi) = match bounds.snr {
        Some(iv) => iv,
        None => return Ok(None),
    };
    let lo = snr_lo.max(0.0);
    let hi = snr_hi.min(length);
    if lo > hi {
        return Ok(None);
    }
    match bounds.exclusion {
        None => Ok(Some(x_b.clamp(lo, hi))),
        Some((excl_lo, excl_hi)) => {
            if excl_lo >= lo {
                // excl_lo <= x_b <= hi holds automatically.
                Ok(Some(excl_lo))
            } else if excl_hi <= hi {
                Ok(Some(excl_hi))
            } else {
                // Both boundaries fall outside the admissible interval.
                // Since every interval here is centered on x_b this implies
                // an empty feasible set; scan a dense grid as a safety net
                // before declaring infeasibility.
                Ok(grid_position_fallback(lo, hi, excl_lo, excl_hi, x_b))
            }
        }
    }
}

fn grid_position_fallback(lo: f64, hi: f64, excl_lo: f64, excl_hi: f64, x_b: f64) -> Option<f64> {
    const POINTS: usize = 100_000;
    let mut best: Option<(f64, f64)> = None;
    for i in 0..=POINTS {
        let x = lo + (hi - lo) * i as f64 / POINTS as f64;
        if x > excl_lo && x < excl_hi {
            continue;
        }
        let obj = (x - x_b).powi(2);
        if best.map_or(true, |(b, _)| obj < b) {
            best = Some((obj, x));
        }
    }
    best.map(|(_, x)| x)
}

/// Which constraint pins the returned operating point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BindingConstraint {
    Covertness,
    PowerBudget,
    Reliability,
    PositionBox,
    Infeasible,
}

impl std::fmt::Display for BindingConstraint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Self::Covertness => "covertness",
            Self::PowerBudget => "power_budget",
            Self::Reliability => "reliability",
            Self::PositionBox => "position_box",
            Self::Infeasible => "infeasible",
        };
        f.write_str(s)
    }
}

/// Outcome of a solve: optimal operating point, achieved rate, iteration
/// trace, and the constraint that pins the solution.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    /// Optimal transmit power, watts (0 when infeasible).
    pub p0_opt: f64,
    /// Optimal TPA position, meters (last iterate when infeasible).
    pub tpa_x_opt: f64,
    /// Achieved rate, bits/s (0 when infeasible).
    pub rate: f64,
    pub feasible: bool,
    /// Completed alternating iterations.
    pub iterations: usize,
    /// `(p0, tpa_x, rate)` after each completed iteration.
    pub trace: Vec<(f64, f64, f64)>,
    pub binding_constraint: BindingConstraint,
}

impl SolveResult {
    fn infeasible(tpa_x: f64, iterations: usize, trace: Vec<(f64, f64, f64)>) -> Self {
        Self {
            p0_opt: 0.0,
            tpa_x_opt: tpa_x,
            rate: 0.0,
            feasible: false,
            iterations,
            trace,
            binding_constraint: BindingConstraint::Infeasible,
        }
    }
}

/// Alternating-optimization controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AoParams {
    /// Initial transmit power, watts; defaults to `p_max / 4`.
    pub init_p0: Option<f64>,
    /// Initial TPA position, meters; defaults to `L / 4`.
    pub init_tpa_x: Option<f64>,
    /// Rate-change convergence tolerance, bits/s.
    pub tol: f64,
    /// Iteration cap.
    pub max_iter: usize,
}

impl Default for AoParams {
    fn default() -> Self {
        Self {
            init_p0: None,
            init_tpa_x: None,
            tol: 1e-3,
            max_iter: 50,
        }
    }
}

fn is_feasibility_signal(e: &Error) -> bool {
    matches!(
        e,
        Error::CovertnessInfeasible { .. } | Error::UncertaintyBallContainsDevice { .. }
    )
}

/// Solve the joint power/position problem by alternating the two closed-form
/// subproblems until the rate change falls below `params.tol`.
pub fn solve_ao(problem: &Problem, params: &AoParams) -> Result<SolveResult> {
    if !(params.tol > 0.0) {
        return Err(Error::InvalidParameter {
            name: "ao_tol",
            reason: format!("convergence tolerance must be positive, got {}", params.tol),
        });
    }
    if params.max_iter == 0 {
        return Err(Error::InvalidParameter {
            name: "ao_max_iter",
            reason: "need at least one iteration".into(),
        });
    }
    let init_p0 = params.init_p0.unwrap_or(problem.power.p_max / 4.0);
    let init_x = params
        .init_tpa_x
        .unwrap_or(problem.scenario.room.length / 4.0);

    let mut x = init_x;
    let mut p0 = init_p0;
    let mut rate_prev = match problem.constraints_satisfied(p0, x, 1e-12) {
        Ok(true) => problem.rate_at(p0, x)?,
        _ => 0.0,
    };
    let mut trace: Vec<(f64, f64, f64)> = Vec::new();

    // A tight budget can put the SNR floor at the initial position above the
    // feasible power interval even though positions nearer the device are
    // fine. One position step at the largest covert-safe power for the
    // initial position recovers every feasible instance: that power admits a
    // nonempty position set whenever the joint problem is feasible, and the
    // subsequent power step is then feasible at the returned position.
    match solve_power(problem, x) {
        Ok(Some(_)) => {}
        Ok(None) => {
            let bounds = match power_bounds(problem, x) {
                Ok(b) => b,
                Err(e) if is_feasibility_signal(&e) => {
                    return Ok(SolveResult::infeasible(x, 0, trace))
                }
                Err(e) => return Err(e),
            };
            let p_start = problem.power.p_max.min(bounds.p_covert_max);
            match solve_position(problem, p_start)? {
                Some(recovered) => x = recovered,
                None => return Ok(SolveResult::infeasible(x, 0, trace)),
            }
        }
        Err(e) if is_feasibility_signal(&e) => {
            return Ok(SolveResult::infeasible(x, 0, trace))
        }
        Err(e) => return Err(e),
    }

    for iter in 1..=params.max_iter {
        p0 = match solve_power(problem, x) {
            Ok(Some(p)) => p,
            Ok(None) => return Ok(SolveResult::infeasible(x, iter, trace)),
            Err(e) if is_feasibility_signal(&e) => {
                return Ok(SolveResult::infeasible(x, iter, trace))
            }
            Err(e) => return Err(e),
        };
        x = match solve_position(problem, p0) {
            Ok(Some(x)) => x,
            Ok(None) => return Ok(SolveResult::infeasible(x, iter, trace)),
            Err(e) if is_feasibility_signal(&e) => {
                return Ok(SolveResult::infeasible(x, iter, trace))
            }
            Err(e) => return Err(e),
        };
        let rate = problem.rate_at(p0, x)?;
        trace.push((p0, x, rate));
        if (rate - rate_prev).abs() < params.tol {
            rate_prev = rate;
            break;
        }
        rate_prev = rate;
    }

    // The returned point must satisfy every constraint; a violation here
    // would mean the closed forms are wrong, so downgrade honestly.
    if !problem.constraints_satisfied(p0, x, 1e-9)? {
        return Ok(SolveResult::infeasible(x, trace.len(), trace));
    }
    let binding = classify_binding(problem, p0, x)?;
    Ok(SolveResult {
        p0_opt: p0,
        tpa_x_opt: x,
        rate: rate_prev,
        feasible: true,
        iterations: trace.len(),
        trace,
        binding_constraint: binding,
    })
}

/// Optimize the power only, with the TPA fixed at `fixed_x`.
pub fn solve_baseline(problem: &Problem, fixed_x: f64) -> Result<SolveResult> {
    let length = problem.scenario.room.length;
    if !(0.0..=length).contains(&fixed_x) {
        return Err(Error::InvalidParameter {
            name: "fixed_x",
            reason: format!("baseline position {fixed_x} outside [0, {length}]"),
        });
    }
    let p0 = match solve_power(problem, fixed_x) {
        Ok(Some(p)) => p,
        Ok(None) => return Ok(SolveResult::infeasible(fixed_x, 1, Vec::new())),
        Err(e) if is_feasibility_signal(&e) => {
            return Ok(SolveResult::infeasible(fixed_x, 1, Vec::new()))
        }
        Err(e) => return Err(e),
    };
    let rate = problem.rate_at(p0, fixed_x)?;
    let binding = classify_binding(problem, p0, fixed_x)?;
    Ok(SolveResult {
        p0_opt: p0,
        tpa_x_opt: fixed_x,
        rate,
        feasible: true,
        iterations: 1,
        trace: vec![(p0, fixed_x, rate)],
        binding_constraint: binding,
    })
}

fn classify_binding(problem: &Problem, p0: f64, tpa_x: f64) -> Result<BindingConstraint> {
    let bounds = power_bounds(problem, tpa_x)?;
    let rel = 1e-9;
    if bounds.p_snr_min >= p0 * (1.0 - rel) {
        Ok(BindingConstraint::Reliability)
    } else if bounds.p_covert_max <= problem.power.p_max * (1.0 + rel) {
        Ok(BindingConstraint::Covertness)
    } else {
        // The remaining case is the power budget: the solved power is
        // min(p_max, p_covert_max) and the covert cap is slack. The
        // feasible-position intervals are centered on the device's x, which
        // lies inside the room, so the waveguide box never pins a feasible
        // optimum on its own.
        Ok(BindingConstraint::PowerBudget)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::RfConstants;
    use crate::geometry::{NodeLayout, Room, WaveguidePair};

    /// Indoor defaults used throughout: 20 m square room, device at the
    /// center, RPA at mid-waveguide, 50 dBm budget, -116 dBm receiver noise,
    /// -90 dBm nominal warden noise with a 3 dB band.
    fn problem(d_b_e: f64, chi: f64, delta: f64, epsilon: f64) -> Problem {
        let scenario = Scenario::new(
            Room::new(20.0, 20.0, 3.0).unwrap(),
            WaveguidePair { y_t: -0.5, y_r: 0.5 },
            NodeLayout {
                bd: [10.0, 0.0, 0.0],
                eve_estimate: [10.0 + d_b_e, 0.0, 0.0],
                tpa_x: 5.0,
                rpa_x: 10.0,
            },
            RfConstants::new(28e9, 1.4, 2.0).unwrap(),
        )
        .unwrap();
        let power = PowerConfig {
            p0: 100.0,
            p_max: 100.0,
            kappa: 0.375,
            zeta: 1.0,
            noise_rpa: 2.511886431509582e-15,
            bandwidth: 10e3,
        };
        let noise = NoiseUncertainty::from_db(1e-12, 3.0).unwrap();
        let eve = EveUncertainty { chi, delta, g_est: 1.278 };
        Problem::new(scenario, power, noise, eve, epsilon, 1.0).unwrap()
    }

    #[test]
    fn xi_product_form_matches_direct_form() {
        let noise = NoiseUncertainty::from_db(1e-12, 3.0).unwrap();
        for eps in [0.01, 0.05, 0.3, 1.0] {
            let spec = CovertnessSpec::new(eps, &noise).unwrap();
            let direct = noise.x_hi * noise.rho.powf(-2.0 * (1.0 - eps)) - noise.x_lo;
            assert!(
                ((spec.xi - direct) / direct).abs() < 1e-12,
                "xi forms disagree at eps = {eps}"
            );
        }
        // At eps = 1 the cap is exactly the support width.
        let full = CovertnessSpec::new(1.0, &noise).unwrap();
        assert!(((full.xi - noise.support_width()) / full.xi).abs() < 1e-12);
        // At eps = 0 there is no slack at all.
        let none = CovertnessSpec::new(0.0, &noise).unwrap();
        assert_eq!(none.xi, 0.0);
    }

    #[test]
    fn power_bounds_reference_cases() {
        let mut p = problem(5.0, 2.0, 0.3, 0.05);
        // No reliability floor: the SNR bound vanishes.
        p.reliability.gamma_th = 0.0;
        let b = power_bounds(&p, 5.0).unwrap();
        assert_eq!(b.p_snr_min, 0.0);
        assert!(b.p_covert_max > 0.0);
    }

    #[test]
    fn power_bounds_hold_with_equality_on_plugback() {
        let p = problem(5.0, 2.0, 0.3, 0.05);
        let x = 6.0;
        let b = power_bounds(&p, x).unwrap();
        // SNR equals the floor at p_snr_min.
        let budget = backscatter_budget(
            b.p_snr_min,
            p.scenario.d_pt_b_at(x),
            p.scenario.d_b_pr(),
            &p.power,
            &p.scenario.rf,
        )
        .unwrap();
        assert!(
            ((budget.snr - p.reliability.gamma_th) / p.reliability.gamma_th).abs() < 1e-9,
            "snr at the floor: {}",
            budget.snr
        );
        // Worst-case DEP equals the covertness floor at p_covert_max.
        let dep = worst_case_dep(
            b.p_covert_max,
            p.scenario.d_pt_b_at(x),
            p.worst_gain().unwrap(),
            &p.power,
            &p.scenario.rf,
            &p.noise,
        )
        .unwrap();
        let target = 1.0 - p.covertness.epsilon;
        assert!(
            ((dep.raw - target) / target).abs() < 1e-9,
            "dep at the cap: {} vs {}",
            dep.raw,
            target
        );
    }

    #[test]
    fn power_bounds_error_paths() {
        let p = problem(5.0, 2.0, 0.3, 0.0);
        assert!(matches!(
            power_bounds(&p, 5.0),
            Err(Error::CovertnessInfeasible { .. })
        ));
        let p = problem(1.0, 2.0, 0.3, 0.05); // warden ball contains the device
        assert!(matches!(
            power_bounds(&p, 5.0),
            Err(Error::UncertaintyBallContainsDevice { .. })
        ));
    }

    #[test]
    fn solve_power_budget_limited_and_infeasible() {
        // Far warden, loose covertness: budget binds.
        let p = problem(8.0, 0.0, 0.1, 0.2);
        let b = power_bounds(&p, 10.0).unwrap();
        assert!(b.p_covert_max > p.power.p_max && b.p_snr_min <= p.power.p_max);
        assert_eq!(solve_power(&p, 10.0).unwrap(), Some(p.power.p_max));

        // SNR floor above the covert cap: infeasible at any power.
        let mut tight = problem(5.0, 2.0, 0.3, 0.05);
        tight.reliability.gamma_th = 100.0;
        assert_eq!(solve_power(&tight, 10.0).unwrap(), None);
    }

    #[test]
    fn solve_power_over_device_infeasible_when_warden_close() {
        // TPA right over the device with a close, poorly-localized warden:
        // the covert cap falls below the SNR floor.
        let p = problem(3.0, 2.0, 0.3, 0.05);
        let b = power_bounds(&p, 10.0).unwrap();
        assert!(b.p_covert_max < b.p_snr_min, "{b:?}");
        assert_eq!(solve_power(&p, 10.0).unwrap(), None);
        let r = solve_baseline(&p, 10.0).unwrap();
        assert!(!r.feasible);
        assert_eq!(r.rate, 0.0);
    }

    #[test]
    fn position_bounds_symmetric_about_device() {
        let p = problem(5.0, 2.0, 0.3, 0.05);
        let x_b = p.scenario.layout.bd[0];
        let b = position_bounds(&p, 20.0).unwrap();
        let (lo, hi) = b.snr.unwrap();
        assert!(((hi - x_b) - (x_b - lo)).abs() < 1e-9);
        let (el, eh) = b.exclusion.unwrap();
        assert!(((eh - x_b) - (x_b - el)).abs() < 1e-9);
        assert!(el > lo && eh < hi);
    }

    #[test]
    fn position_bounds_vacuous_exclusion_at_low_power() {
        let p = problem(5.0, 2.0, 0.3, 0.05);
        // Below the power that makes the exclusion radicand positive the
        // whole SNR interval is admissible.
        let b = position_bounds(&p, 1e-3).unwrap();
        assert!(b.exclusion.is_none());
    }

    #[test]
    fn solve_position_unconstrained_returns_device_x() {
        let mut p = problem(8.0, 0.0, 0.1, 1.0);
        p.reliability.gamma_th = 0.0;
        // Loosest covertness and no SNR floor: sit right over the device.
        let x = solve_position(&p, 1.0).unwrap().unwrap();
        assert_eq!(x, p.scenario.layout.bd[0]);
    }

    #[test]
    fn solve_position_tie_breaks_to_lower_boundary() {
        let p = problem(5.0, 2.0, 0.3, 0.05);
        let b = position_bounds(&p, 20.0).unwrap();
        let (el, eh) = b.exclusion.unwrap();
        let x = solve_position(&p, 20.0).unwrap().unwrap();
        assert_eq!(x, el);
        assert!(x < eh);
    }

    #[test]
    fn solve_position_matches_dense_grid_argmin() {
        // 1-D grid oracle on the position subproblem.
        let p = problem(5.0, 2.0, 0.3, 0.05);
        let x_b = p.scenario.layout.bd[0];
        for p0 in [0.5, 2.0, 8.0, 20.0, 60.0] {
            let closed = solve_position(&p, p0).unwrap();
            let b = position_bounds(&p, p0).unwrap();
            let n = 100_000;
            let length = p.scenario.room.length;
            let mut best: Option<(f64, f64)> = None;
            for i in 0..=n {
                let x = length * i as f64 / n as f64;
                if let Some((lo, hi)) = b.snr {
                    if x < lo || x > hi {
                        continue;
                    }
                } else {
                    continue;
                }
                if let Some((el, eh)) = b.exclusion {
                    if x > el && x < eh {
                        continue;
                    }
                }
                let obj = (x - x_b).powi(2);
                if best.map_or(true, |(bo, _)| obj < bo) {
                    best = Some((obj, x));
                }
            }
            let step = length / n as f64;
            match (closed, best) {
                // The two exclusion-zone boundaries are equidistant from the
                // device, so the grid may land on either side of a tie;
                // compare distances to the device rather than locations.
                (Some(xc), Some((_, xg))) => assert!(
                    ((xc - x_b).abs() - (xg - x_b).abs()).abs() <= step,
                    "closed {xc} vs grid {xg} at p0 = {p0}"
                ),
                (None, None) => {}
                (c, g) => panic!("feasibility mismatch at p0 = {p0}: closed {c:?} grid {g:?}"),
            }
        }
    }

    #[test]
    fn ao_converges_and_plugs_back() {
        let p = problem(5.0, 2.0, 0.3, 0.05);
        let r = solve_ao(&p, &AoParams::default()).unwrap();
        assert!(r.feasible);
        assert!(r.rate > 0.0);
        assert!(p.constraints_satisfied(r.p0_opt, r.tpa_x_opt, 1e-9).unwrap());
        // Monotone trace.
        for w in r.trace.windows(2) {
            assert!(w[1].2 >= w[0].2 - 1e-9, "rate decreased: {:?}", r.trace);
        }
        // Rate equals the budget at the returned point.
        let direct = p.rate_at(r.p0_opt, r.tpa_x_opt).unwrap();
        assert!(((r.rate - direct) / direct).abs() < 1e-12);
    }

    #[test]
    fn ao_fixed_point_converges_fast() {
        let p = problem(5.0, 2.0, 0.3, 0.05);
        let first = solve_ao(&p, &AoParams::default()).unwrap();
        let restart = AoParams {
            init_p0: Some(first.p0_opt),
            init_tpa_x: Some(first.tpa_x_opt),
            ..AoParams::default()
        };
        let second = solve_ao(&p, &restart).unwrap();
        assert!(second.iterations <= 2, "took {} iterations", second.iterations);
        assert!(((second.rate - first.rate) / first.rate).abs() < 1e-12);
    }

    #[test]
    fn ao_slack_constraints_full_power_over_device() {
        let mut p = problem(8.0, 0.0, 0.1, 1.0);
        p.reliability.gamma_th = 0.0;
        let r = solve_ao(&p, &AoParams::default()).unwrap();
        assert!(r.feasible);
        assert_eq!(r.p0_opt, p.power.p_max);
        assert_eq!(r.tpa_x_opt, p.scenario.layout.bd[0]);
        assert_eq!(r.binding_constraint, BindingConstraint::PowerBudget);
    }

    #[test]
    fn ao_recovers_from_snr_blocked_init() {
        // Budget too small to meet the SNR floor from the quarter-room init
        // position, but feasible directly over the device: the solver must
        // recover instead of reporting infeasibility.
        let mut p = problem(5.0, 2.0, 0.3, 0.02);
        p.power.p_max = 1.585;
        p.power.p0 = 1.585;
        assert_eq!(solve_power(&p, 5.0).unwrap(), None, "init not blocked");
        let r = solve_ao(&p, &AoParams::default()).unwrap();
        assert!(r.feasible, "{r:?}");
        let base = solve_baseline(&p, p.scenario.layout.bd[0]).unwrap();
        assert!(base.feasible);
        assert!(r.rate >= base.rate * (1.0 - 1e-12));
    }

    #[test]
    fn ao_infeasible_cases_report_zero_rate() {
        // Zero covertness slack.
        let p = problem(5.0, 2.0, 0.3, 0.0);
        let r = solve_ao(&p, &AoParams::default()).unwrap();
        assert!(!r.feasible);
        assert_eq!(r.rate, 0.0);
        assert_eq!(r.binding_constraint, BindingConstraint::Infeasible);
        // Warden ball contains the device.
        let p = problem(1.5, 2.0, 0.3, 0.05);
        let r = solve_ao(&p, &AoParams::default()).unwrap();
        assert!(!r.feasible);
    }

    #[test]
    fn baseline_at_ao_position_matches_ao() {
        let p = problem(5.0, 2.0, 0.3, 0.05);
        let ao = solve_ao(&p, &AoParams::default()).unwrap();
        let base = solve_baseline(&p, ao.tpa_x_opt).unwrap();
        assert!(base.feasible);
        assert!(((base.rate - ao.rate) / ao.rate).abs() < 1e-12);
        assert!(((base.p0_opt - ao.p0_opt) / ao.p0_opt).abs() < 1e-12);
    }

    #[test]
    fn baseline_far_position_is_budget_limited_and_worse() {
        let p = problem(5.0, 0.0, 0.1, 0.05);
        let ao = solve_ao(&p, &AoParams::default()).unwrap();
        let base = solve_baseline(&p, 0.0).unwrap();
        assert!(base.feasible);
        assert_eq!(base.p0_opt, p.power.p_max);
        assert!(base.rate < ao.rate);
        assert_eq!(base.binding_constraint, BindingConstraint::PowerBudget);
    }

    #[test]
    fn baseline_rejects_out_of_room_position() {
        let p = problem(5.0, 0.0, 0.1, 0.05);
        assert!(solve_baseline(&p, -1.0).is_err());
        assert!(solve_baseline(&p, 25.0).is_err());
    }

    #[test]
    fn snr_scaling_invariance() {
        // Scaling sigma_p^2 and gamma_th * sigma_p^2 consistently leaves
        // p_snr_min, hence the power solution, unchanged.
        let p = problem(5.0, 2.0, 0.3, 0.05);
        let mut scaled = p.clone();
        scaled.power.noise_rpa *= 10.0;
        scaled.reliability.gamma_th /= 10.0;
        let a = power_bounds(&p, 6.0).unwrap();
        let b = power_bounds(&scaled, 6.0).unwrap();
        assert!(((a.p_snr_min - b.p_snr_min) / a.p_snr_min).abs() < 1e-12);
        assert_eq!(
            solve_power(&p, 6.0).unwrap(),
            solve_power(&scaled, 6.0).unwrap()
        );
    }

    #[test]
    fn rate_directional_sensitivities() {
        // Weak monotonicity over swept grids: rate non-decreasing in the
        // warden distance and the covertness slack, non-increasing in the
        // error bounds and the receiver noise.
        let base = problem(5.0, 1.0, 0.2, 0.05);
        let rate = |p: &Problem| solve_ao(p, &AoParams::default()).unwrap().rate;

        let mut prev = 0.0;
        for d in [3.0, 4.0, 5.0, 7.0, 9.0] {
            let r = rate(&problem(d, 1.0, 0.2, 0.05));
            assert!(r + 1e-9 >= prev, "rate not monotone in d_b_e at {d}");
            prev = r;
        }
        let mut prev = 0.0;
        for eps in [0.01, 0.05, 0.1, 0.2] {
            let r = rate(&problem(5.0, 1.0, 0.2, eps));
            assert!(r + 1e-9 >= prev, "rate not monotone in epsilon at {eps}");
            prev = r;
        }
        let mut prev = f64::INFINITY;
        for chi in [0.0, 0.5, 1.0, 2.0] {
            let r = rate(&problem(5.0, chi, 0.2, 0.05));
            assert!(r <= prev + 1e-9, "rate not monotone in chi at {chi}");
            prev = r;
        }
        let mut prev = f64::INFINITY;
        for delta in [0.0, 0.1, 0.3, 0.5] {
            let r = rate(&problem(5.0, 1.0, delta, 0.05));
            assert!(r <= prev + 1e-9, "rate not monotone in delta at {delta}");
            prev = r;
        }
        let mut prev = f64::INFINITY;
        for scale in [0.5, 1.0, 4.0, 16.0] {
            let mut p = base.clone();
            p.power.noise_rpa *= scale;
            let r = rate(&p);
            assert!(r <= prev + 1e-9, "rate not monotone in sigma_p at {scale}");
            prev = r;
        }
    }
}
