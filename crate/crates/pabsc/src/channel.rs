//! Channel magnitudes, harvested power, backscatter received power, SNR and
//! achievable rate.
//!
//! Every downstream quantity uses squared channel magnitudes only; the two
//! unit-modulus phase factors of the waveguide and free-space propagation
//! drop out of all power expressions and are never represented.

use crate::{Error, Result};

/// Speed of light, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Carrier-dependent RF constants.
///
/// `eta` is the reference path loss at 1 m, `lambda^2 / (16 pi^2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RfConstants {
    /// Carrier frequency, hertz.
    pub carrier_frequency: f64,
    /// Effective refractive index of the dielectric waveguide.
    pub effective_index: f64,
    /// Free-space wavelength, meters (derived).
    pub wavelength: f64,
    /// In-waveguide guided wavelength, meters (derived).
    pub guided_wavelength: f64,
    /// Reference path-loss gain at 1 m, dimensionless (derived).
    pub eta: f64,
    /// Path-loss exponent of the device-to-warden ground link.
    pub path_loss_exponent: f64,
}

impl RfConstants {
    pub fn new(carrier_frequency: f64, effective_index: f64, path_loss_exponent: f64) -> Result<Self> {
        if !(carrier_frequency > 0.0) || !carrier_frequency.is_finite() {
            return Err(Error::InvalidParameter {
                name: "f_c",
                reason: format!("carrier frequency must be positive, got {carrier_frequency}"),
            });
        }
        if !(effective_index >= 1.0) {
            return Err(Error::InvalidParameter {
                name: "n_eff",
                reason: format!("effective index must be >= 1, got {effective_index}"),
            });
        }
        if !(path_loss_exponent > 0.0) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                reason: format!("path-loss exponent must be positive, got {path_loss_exponent}"),
            });
        }
        let wavelength = SPEED_OF_LIGHT / carrier_frequency;
        Ok(Self {
            carrier_frequency,
            effective_index,
            wavelength,
            guided_wavelength: wavelength / effective_index,
            eta: wavelength * wavelength / (16.0 * std::f64::consts::PI.powi(2)),
            path_loss_exponent,
        })
    }
}

/// Transmit power, backscatter fractions, receiver noise and bandwidth.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerConfig {
    /// Current transmit power, watts.
    pub p0: f64,
    /// Transmit power budget, watts.
    pub p_max: f64,
    /// Fraction of the incident power the device reflects, in [0, 1].
    pub kappa: f64,
    /// Backscattering efficiency, in [0, 1].
    pub zeta: f64,
    /// Noise power at the receive antenna, watts.
    pub noise_rpa: f64,
    /// Allocated bandwidth, hertz.
    pub bandwidth: f64,
}

impl PowerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.p0 >= 0.0 && self.p0 <= self.p_max) {
            return Err(Error::InvalidParameter {
                name: "p0",
                reason: format!("need 0 <= p0 <= p_max, got p0 = {}, p_max = {}", self.p0, self.p_max),
            });
        }
        for (name, v) in [("kappa", self.kappa), ("zeta", self.zeta)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("fraction outside [0, 1]: {v}"),
                });
            }
        }
        if !(self.noise_rpa > 0.0) {
            return Err(Error::InvalidParameter {
                name: "sigma_p",
                reason: format!("receiver noise power must be positive, got {}", self.noise_rpa),
            });
        }
        if !(self.bandwidth > 0.0) {
            return Err(Error::InvalidParameter {
                name: "bandwidth",
                reason: format!("bandwidth must be positive, got {}", self.bandwidth),
            });
        }
        Ok(())
    }
}

/// Link budget for one (power, TPA position) operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    /// Power harvested by the device, watts.
    pub harvested_power: f64,
    /// Backscatter power received at the RPA, watts.
    pub received_power: f64,
    /// SNR at the RPA, dimensionless.
    pub snr: f64,
    /// Achievable rate, bits/s.
    pub rate: f64,
}

/// Squared channel magnitude of the in-room downlink, `eta / d^2`.
pub fn channel_gain_downlink(d_pt_i: f64, constants: &RfConstants) -> Result<f64> {
    if d_pt_i <= 0.0 {
        return Err(Error::ZeroDistance { link: "TPA downlink" });
    }
    Ok(constants.eta / (d_pt_i * d_pt_i))
}

/// Squared channel magnitude of the device-to-warden ground link,
/// `eta * d^-alpha * |g|^2`.
pub fn channel_gain_eve_ground(d_b_e: f64, g: f64, constants: &RfConstants) -> Result<f64> {
    if d_b_e <= 0.0 {
        return Err(Error::ZeroDistance { link: "device-to-warden ground" });
    }
    Ok(constants.eta * d_b_e.powf(-constants.path_loss_exponent) * g * g)
}

/// Power harvested by the device, `P0 * eta / d^2`.
///
/// The device is passive; thermal noise at the device is neglected.
pub fn harvested_power(p0: f64, d_pt_b: f64, constants: &RfConstants) -> Result<f64> {
    if p0 < 0.0 {
        return Err(Error::InvalidParameter {
            name: "p0",
            reason: format!("transmit power must be non-negative, got {p0}"),
        });
    }
    Ok(p0 * channel_gain_downlink(d_pt_b, constants)?)
}

/// Full uplink budget: received backscatter power, SNR and rate.
///
/// `P_a = zeta * kappa * P0 * eta^2 / (d_pt_b * d_b_pr)^2`.
pub fn backscatter_budget(
    p0: f64,
    d_pt_b: f64,
    d_b_pr: f64,
    cfg: &PowerConfig,
    constants: &RfConstants,
) -> Result<LinkBudget> {
    let harvested = harvested_power(p0, d_pt_b, constants)?;
    if d_b_pr <= 0.0 {
        return Err(Error::ZeroDistance { link: "device-to-RPA" });
    }
    let received = cfg.zeta * cfg.kappa * harvested * constants.eta / (d_b_pr * d_b_pr);
    let snr = received / cfg.noise_rpa;
    Ok(LinkBudget {
        harvested_power: harvested,
        received_power: received,
        snr,
        rate: cfg.bandwidth * (1.0 + snr).log2(),
    })
}
