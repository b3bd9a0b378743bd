//! Scenario configuration files.
//!
//! The format is a flat UTF-8 `key = value` document with `#` comments.
//! Powers are written like `p_max = 50 dBm`, frequencies like `f_c = 28 GHz`,
//! lengths in meters. Unknown keys are rejected with the offending line;
//! missing keys fall back to the indoor defaults (20 m square room, 3 m
//! ceiling, device at the room center, RPA at mid-waveguide, 28 GHz carrier,
//! 50 dBm budget, -116 dBm receiver noise, -90 dBm nominal warden noise with
//! a 3 dB band).
//!
//! All internal math is linear SI; the canonical rendering therefore writes
//! base units at full precision (with dB-domain comments for readability) so
//! that a rendered file re-parses to the identical configuration.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use crate::channel::{PowerConfig, RfConstants};
use crate::detection::{EveUncertainty, NoiseUncertainty};
use crate::geometry::{NodeLayout, Room, Scenario, WaveguidePair};
use crate::optimizer::{AoParams, Problem};
use crate::units::{db_to_linear, watts_to_dbm};

/// A configuration problem: what went wrong, where.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub key: Option<String>,
    pub reason: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error")?;
        if let Some(line) = self.line {
            write!(f, " at line {line}")?;
        }
        if let Some(key) = &self.key {
            write!(f, ", key `{key}`")?;
        }
        write!(f, ": {}", self.reason)
    }
}

impl std::error::Error for ConfigError {}

impl ConfigError {
    fn new(line: Option<usize>, key: Option<&str>, reason: impl Into<String>) -> Self {
        Self {
            line,
            key: key.map(str::to_owned),
            reason: reason.into(),
        }
    }
}

/// Physical dimension of a config value, which decides the accepted unit
/// suffixes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Dim {
    /// Meters; optional `m` suffix.
    Length,
    /// Watts; plain, `W`, `mW` or `dBm`.
    Power,
    /// Hertz; plain, `Hz`, `kHz`, `MHz`, `GHz`.
    Frequency,
    /// Dimensionless; plain only.
    Ratio,
    /// Dimensionless; plain (linear) or `dB`.
    RatioOrDb,
    /// A value that lives in the dB domain itself; plain or `dB`.
    Decibels,
    /// Non-negative integer.
    Integer,
    /// Bits per second; plain.
    Rate,
}

/// Every recognized key with its dimension.
const KEYS: &[(&str, Dim)] = &[
    ("length", Dim::Length),
    ("width", Dim::Length),
    ("height", Dim::Length),
    ("y_wt", Dim::Length),
    ("y_wr", Dim::Length),
    ("bd_x", Dim::Length),
    ("bd_y", Dim::Length),
    ("rpa_x", Dim::Length),
    ("d_b_e", Dim::Length),
    ("f_c", Dim::Frequency),
    ("n_eff", Dim::Ratio),
    ("alpha", Dim::Ratio),
    ("p_max", Dim::Power),
    ("p0", Dim::Power),
    ("kappa", Dim::Ratio),
    ("zeta", Dim::Ratio),
    ("sigma_p", Dim::Power),
    ("bandwidth", Dim::Frequency),
    ("gamma_th", Dim::RatioOrDb),
    ("epsilon", Dim::Ratio),
    ("sigma_e_nominal", Dim::Power),
    ("rho_db", Dim::Decibels),
    ("chi", Dim::Length),
    ("delta", Dim::Ratio),
    ("g_est", Dim::Ratio),
    ("ao_init_p0", Dim::Power),
    ("ao_init_tpa_x", Dim::Length),
    ("ao_tol", Dim::Rate),
    ("ao_max_iter", Dim::Integer),
    ("mc_seed", Dim::Integer),
    ("mc_samples", Dim::Integer),
    ("oracle_grid_1d", Dim::Integer),
    ("oracle_grid_2d", Dim::Integer),
];

fn key_dim(key: &str) -> Option<Dim> {
    KEYS.iter().find(|(k, _)| *k == key).map(|(_, d)| *d)
}

/// Parse `value [unit]` for one dimension; returns the base-unit value.
fn parse_value(dim: Dim, raw: &str) -> Result<f64, String> {
    let raw = raw.trim();
    let (num_str, unit) = match raw.split_once(char::is_whitespace) {
        Some((n, u)) => (n.trim(), Some(u.trim())),
        None => (raw, None),
    };
    let num: f64 = num_str
        .parse()
        .map_err(|_| format!("`{num_str}` is not a number"))?;
    if !num.is_finite() {
        return Err(format!("`{num_str}` is not finite"));
    }
    match (dim, unit) {
        (Dim::Length, None | Some("m")) => Ok(num),
        (Dim::Power, None | Some("W")) => Ok(num),
        (Dim::Power, Some("mW")) => Ok(num * 1e-3),
        (Dim::Power, Some("dBm")) => Ok(crate::units::dbm_to_watts(num)),
        (Dim::Frequency, None | Some("Hz")) => Ok(num),
        (Dim::Frequency, Some("kHz")) => Ok(num * 1e3),
        (Dim::Frequency, Some("MHz")) => Ok(num * 1e6),
        (Dim::Frequency, Some("GHz")) => Ok(num * 1e9),
        (Dim::Ratio, None) => Ok(num),
        (Dim::RatioOrDb, None) => Ok(num),
        (Dim::RatioOrDb, Some("dB")) => Ok(db_to_linear(num)),
        (Dim::Decibels, None | Some("dB")) => Ok(num),
        (Dim::Rate, None) => Ok(num),
        (Dim::Integer, None) => {
            if num < 0.0 || num.fract() != 0.0 || num > u64::MAX as f64 {
                Err(format!("`{num_str}` is not a non-negative integer"))
            } else {
                Ok(num)
            }
        }
        (_, Some(u)) => Err(format!("unit `{u}` not valid here")),
    }
}

/// Raw key/value entries, before defaults are applied.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<String, (String, Option<usize>)>,
}

impl RawConfig {
    /// Parse a config document. Rejects unknown and duplicate keys with the
    /// offending line number.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw_line.split_once('#') {
                Some((before, _)) => before,
                None => raw_line,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| ConfigError::new(Some(line_no), None, "expected `key = value`"))?;
            let key = key.trim();
            let value = value.trim();
            if key_dim(key).is_none() {
                return Err(ConfigError::new(Some(line_no), Some(key), "unknown key"));
            }
            if value.is_empty() {
                return Err(ConfigError::new(Some(line_no), Some(key), "empty value"));
            }
            if cfg
                .entries
                .insert(key.to_owned(), (value.to_owned(), Some(line_no)))
                .is_some()
            {
                return Err(ConfigError::new(Some(line_no), Some(key), "duplicate key"));
            }
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            ConfigError::new(None, None, format!("cannot read {}: {e}", path.display()))
        })?;
        Self::parse(&text)
    }

    /// Insert or replace one entry (used by sweep overrides). The key must
    /// be a recognized config key.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        if key_dim(key).is_none() {
            return Err(ConfigError::new(None, Some(key), "unknown key"));
        }
        self.entries.insert(key.to_owned(), (value.to_owned(), None));
        Ok(())
    }

    fn get(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.entries.get(key) {
            None => Ok(None),
            Some((raw, line)) => {
                let dim = key_dim(key).expect("entries only hold known keys");
                parse_value(dim, raw)
                    .map(Some)
                    .map_err(|reason| ConfigError::new(*line, Some(key), reason))
            }
        }
    }

    /// Apply defaults (including the derived ones: device and RPA at `L/2`,
    /// solver inits at `p_max/4` and `L/4`, nominal power at the budget) and
    /// produce a fully-specified configuration.
    pub fn resolve(&self) -> Result<ScenarioConfig, ConfigError> {
        let get = |key: &str| self.get(key);
        let length = get("length")?.unwrap_or(20.0);
        let p_max = get("p_max")?.unwrap_or(100.0); // 50 dBm
        Ok(ScenarioConfig {
            length,
            width: get("width")?.unwrap_or(20.0),
            height: get("height")?.unwrap_or(3.0),
            y_wt: get("y_wt")?.unwrap_or(-0.5),
            y_wr: get("y_wr")?.unwrap_or(0.5),
            bd_x: get("bd_x")?.unwrap_or(length / 2.0),
            bd_y: get("bd_y")?.unwrap_or(0.0),
            rpa_x: get("rpa_x")?.unwrap_or(length / 2.0),
            d_b_e: get("d_b_e")?.unwrap_or(5.0),
            f_c: get("f_c")?.unwrap_or(28e9),
            n_eff: get("n_eff")?.unwrap_or(1.4),
            alpha: get("alpha")?.unwrap_or(2.0),
            p_max,
            p0: get("p0")?.unwrap_or(p_max),
            kappa: get("kappa")?.unwrap_or(0.375),
            zeta: get("zeta")?.unwrap_or(1.0),
            sigma_p: get("sigma_p")?.unwrap_or(2.511886431509582e-15), // -116 dBm
            bandwidth: get("bandwidth")?.unwrap_or(10e3),
            gamma_th: get("gamma_th")?.unwrap_or(1.0), // 0 dB
            epsilon: get("epsilon")?.unwrap_or(0.05),
            sigma_e_nominal: get("sigma_e_nominal")?.unwrap_or(1e-12), // -90 dBm
            rho_db: get("rho_db")?.unwrap_or(3.0),
            chi: get("chi")?.unwrap_or(2.0),
            delta: get("delta")?.unwrap_or(0.3),
            g_est: get("g_est")?.unwrap_or(1.278),
            ao_init_p0: get("ao_init_p0")?.unwrap_or(p_max / 4.0),
            ao_init_tpa_x: get("ao_init_tpa_x")?.unwrap_or(length / 4.0),
            ao_tol: get("ao_tol")?.unwrap_or(1e-3),
            ao_max_iter: get("ao_max_iter")?.unwrap_or(50.0) as usize,
            mc_seed: get("mc_seed")?.unwrap_or(42.0) as u64,
            mc_samples: get("mc_samples")?.unwrap_or(1_000_000.0) as usize,
            oracle_grid_1d: get("oracle_grid_1d")?.unwrap_or(1_000_000.0) as usize,
            oracle_grid_2d: get("oracle_grid_2d")?.unwrap_or(500.0) as usize,
        })
    }
}

/// A fully-resolved scenario configuration in base SI units.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub length: f64,
    pub width: f64,
    pub height: f64,
    pub y_wt: f64,
    pub y_wr: f64,
    pub bd_x: f64,
    pub bd_y: f64,
    pub rpa_x: f64,
    pub d_b_e: f64,
    pub f_c: f64,
    pub n_eff: f64,
    pub alpha: f64,
    pub p_max: f64,
    pub p0: f64,
    pub kappa: f64,
    pub zeta: f64,
    pub sigma_p: f64,
    pub bandwidth: f64,
    pub gamma_th: f64,
    pub epsilon: f64,
    pub sigma_e_nominal: f64,
    pub rho_db: f64,
    pub chi: f64,
    pub delta: f64,
    pub g_est: f64,
    pub ao_init_p0: f64,
    pub ao_init_tpa_x: f64,
    pub ao_tol: f64,
    pub ao_max_iter: usize,
    pub mc_seed: u64,
    pub mc_samples: usize,
    pub oracle_grid_1d: usize,
    pub oracle_grid_2d: usize,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        RawConfig::default()
            .resolve()
            .expect("empty config resolves to defaults")
    }
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        RawConfig::parse(text)?.resolve()
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        RawConfig::from_file(path)?.resolve()
    }

    /// Estimated warden location: `d_b_e` meters from the device along +x.
    pub fn eve_estimate(&self) -> [f64; 3] {
        [self.bd_x + self.d_b_e, self.bd_y, 0.0]
    }

    /// Build the optimization problem this configuration describes.
    pub fn to_problem(&self) -> crate::Result<Problem> {
        let scenario = Scenario::new(
            Room::new(self.length, self.width, self.height)?,
            WaveguidePair {
                y_t: self.y_wt,
                y_r: self.y_wr,
            },
            NodeLayout {
                bd: [self.bd_x, self.bd_y, 0.0],
                eve_estimate: self.eve_estimate(),
                tpa_x: self.ao_init_tpa_x.clamp(0.0, self.length),
                rpa_x: self.rpa_x,
            },
            RfConstants::new(self.f_c, self.n_eff, self.alpha)?,
        )?;
        let power = PowerConfig {
            p0: self.p0,
            p_max: self.p_max,
            kappa: self.kappa,
            zeta: self.zeta,
            noise_rpa: self.sigma_p,
            bandwidth: self.bandwidth,
        };
        let noise = NoiseUncertainty::from_db(self.sigma_e_nominal, self.rho_db)?;
        let eve = EveUncertainty {
            chi: self.chi,
            delta: self.delta,
            g_est: self.g_est,
        };
        Problem::new(scenario, power, noise, eve, self.epsilon, self.gamma_th)
    }

    /// Solver controls from this configuration.
    pub fn ao_params(&self) -> AoParams {
        AoParams {
            init_p0: Some(self.ao_init_p0),
            init_tpa_x: Some(self.ao_init_tpa_x),
            tol: self.ao_tol,
            max_iter: self.ao_max_iter,
        }
    }

    /// Canonical rendering: every key explicit, base SI units at full
    /// precision, dB-domain values in comments. Re-parsing the output
    /// reproduces this configuration field for field.
    pub fn render(&self) -> String {
        let dbm = |w: f64| {
            if w > 0.0 {
                format!(" # {:.6} dBm", watts_to_dbm(w))
            } else {
                String::new()
            }
        };
        let mut s = String::new();
        s.push_str("# room geometry (meters)\n");
        s.push_str(&format!("length = {}\n", self.length));
        s.push_str(&format!("width = {}\n", self.width));
        s.push_str(&format!("height = {}\n", self.height));
        s.push_str(&format!("y_wt = {}\n", self.y_wt));
        s.push_str(&format!("y_wr = {}\n", self.y_wr));
        s.push_str(&format!("bd_x = {}\n", self.bd_x));
        s.push_str(&format!("bd_y = {}\n", self.bd_y));
        s.push_str(&format!("rpa_x = {}\n", self.rpa_x));
        s.push_str(&format!("d_b_e = {}\n", self.d_b_e));
        s.push_str("\n# RF constants\n");
        s.push_str(&format!("f_c = {} # Hz\n", self.f_c));
        s.push_str(&format!("n_eff = {}\n", self.n_eff));
        s.push_str(&format!("alpha = {}\n", self.alpha));
        s.push_str("\n# powers (watts)\n");
        s.push_str(&format!("p_max = {}{}\n", self.p_max, dbm(self.p_max)));
        s.push_str(&format!("p0 = {}{}\n", self.p0, dbm(self.p0)));
        s.push_str(&format!("kappa = {}\n", self.kappa));
        s.push_str(&format!("zeta = {}\n", self.zeta));
        s.push_str(&format!("sigma_p = {}{}\n", self.sigma_p, dbm(self.sigma_p)));
        s.push_str(&format!("bandwidth = {} # Hz\n", self.bandwidth));
        s.push_str("\n# constraints\n");
        s.push_str(&format!("gamma_th = {} # linear SNR\n", self.gamma_th));
        s.push_str(&format!("epsilon = {}\n", self.epsilon));
        s.push_str("\n# warden model\n");
        s.push_str(&format!(
            "sigma_e_nominal = {}{}\n",
            self.sigma_e_nominal,
            dbm(self.sigma_e_nominal)
        ));
        s.push_str(&format!("rho_db = {} # dB\n", self.rho_db));
        s.push_str(&format!("chi = {}\n", self.chi));
        s.push_str(&format!("delta = {}\n", self.delta));
        s.push_str(&format!("g_est = {}\n", self.g_est));
        s.push_str("\n# solver\n");
        s.push_str(&format!("ao_init_p0 = {}\n", self.ao_init_p0));
        s.push_str(&format!("ao_init_tpa_x = {}\n", self.ao_init_tpa_x));
        s.push_str(&format!("ao_tol = {}\n", self.ao_tol));
        s.push_str(&format!("ao_max_iter = {}\n", self.ao_max_iter));
        s.push_str("\n# verification\n");
        s.push_str(&format!("mc_seed = {}\n", self.mc_seed));
        s.push_str(&format!("mc_samples = {}\n", self.mc_samples));
        s.push_str(&format!("oracle_grid_1d = {}\n", self.oracle_grid_1d));
        s.push_str(&format!("oracle_grid_2d = {}\n", self.oracle_grid_2d));
        s
    }
}
