//! Parameter sweeps: one swept variable, a family of per-curve overrides,
//! four algorithms per point (the alternating solver plus the three
//! fixed-TPA baselines), deterministic CSV output.
//!
//! A sweep file uses the same `key = value` syntax as scenario files:
//!
//! ```text
//! variable = d_b_e
//! values = 1, 2, 3, 4, 5, 6, 7, 8, 9, 10
//! curve = chi = 0; delta = 0.1
//! curve = chi = 2; delta = 0.3
//! ```
//!
//! `values` entries accept the swept key's unit suffixes (`values = 32 dBm,
//! 36 dBm, ...`); the CSV reports them in the unit they were written in.

use std::fmt;
use std::path::Path;

use rayon::prelude::*;

use crate::config::{ConfigError, RawConfig};
use crate::optimizer::{solve_ao, solve_baseline, SolveResult};
use crate::units::watts_to_dbm;

/// The variables a sweep may drive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    DeviceEveDistance,
    Chi,
    Delta,
    PMax,
    SigmaENominal,
    Epsilon,
    SigmaP,
}

impl SweepVariable {
    pub fn key(&self) -> &'static str {
        match self {
            Self::DeviceEveDistance => "d_b_e",
            Self::Chi => "chi",
            Self::Delta => "delta",
            Self::PMax => "p_max",
            Self::SigmaENominal => "sigma_e_nominal",
            Self::Epsilon => "epsilon",
            Self::SigmaP => "sigma_p",
        }
    }

    pub fn from_key(key: &str) -> Option<Self> {
        match key {
            "d_b_e" => Some(Self::DeviceEveDistance),
            "chi" => Some(Self::Chi),
            "delta" => Some(Self::Delta),
            "p_max" => Some(Self::PMax),
            "sigma_e_nominal" => Some(Self::SigmaENominal),
            "epsilon" => Some(Self::Epsilon),
            "sigma_p" => Some(Self::SigmaP),
            _ => None,
        }
    }
}

/// One swept value: the number as written (for reporting) and its raw text
/// (re-parsed with the variable's unit rules when applied).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepValue {
    pub display: f64,
    pub raw: String,
    pub base: f64,
}

/// One curve of the family: a label and the config overrides that define it.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub id: String,
    pub overrides: Vec<(String, String)>,
}

/// A parsed sweep specification.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub values: Vec<SweepValue>,
    pub curves: Vec<Curve>,
}

impl SweepSpec {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut variable: Option<SweepVariable> = None;
        let mut values: Option<Vec<SweepValue>> = None;
        let mut curves: Vec<Curve> = Vec::new();

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
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError {
                line: Some(line_no),
                key: None,
                reason: "expected `key = value`".into(),
            })?;
            let key = key.trim();
            let value = value.trim();
            match key {
                "variable" => {
                    let var = SweepVariable::from_key(value).ok_or_else(|| ConfigError {
                        line: Some(line_no),
                        key: Some("variable".into()),
                        reason: format!("`{value}` is not a sweepable key"),
                    })?;
                    variable = Some(var);
                }
                "values" => {
                    let var = variable.ok_or_else(|| ConfigError {
                        line: Some(line_no),
                        key: Some("values".into()),
                        reason: "`variable` must come before `values`".into(),
                    })?;
                    values = Some(parse_values(var, value, line_no)?);
                }
                "curve" => {
                    curves.push(parse_curve(value, line_no)?);
                }
                other => {
                    return Err(ConfigError {
                        line: Some(line_no),
                        key: Some(other.into()),
                        reason: "unknown sweep key (expected variable, values, curve)".into(),
                    })
                }
            }
        }

        let variable = variable.ok_or_else(|| ConfigError {
            line: None,
            key: Some("variable".into()),
            reason: "missing".into(),
        })?;
        let values = values.ok_or_else(|| ConfigError {
            line: None,
            key: Some("values".into()),
            reason: "missing".into(),
        })?;
        if curves.is_empty() {
            curves.push(Curve {
                id: "default".into(),
                overrides: Vec::new(),
            });
        }
        Ok(Self {
            variable,
            values,
            curves,
        })
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
            line: None,
            key: None,
            reason: format!("cannot read {}: {e}", path.display()),
        })?;
        Self::parse(&text)
    }
}

fn parse_values(
    var: SweepVariable,
    text: &str,
    line_no: usize,
) -> Result<Vec<SweepValue>, ConfigError> {
    let err = |reason: String| ConfigError {
        line: Some(line_no),
        key: Some("values".into()),
        reason,
    };
    let mut out = Vec::new();
    for piece in text.split(',') {
        let raw = piece.trim();
        if raw.is_empty() {
            return Err(err("empty entry in values list".into()));
        }
        // Probe the entry through the swept key's unit rules.
        let mut probe = RawConfig::default();
        probe
            .set(var.key(), raw)
            .map_err(|e| err(e.reason.clone()))?;
        let resolved = probe.resolve().map_err(|e| err(e.reason.clone()))?;
        let base = match var {
            SweepVariable::DeviceEveDistance => resolved.d_b_e,
            SweepVariable::Chi => resolved.chi,
            SweepVariable::Delta => resolved.delta,
            SweepVariable::PMax => resolved.p_max,
            SweepVariable::SigmaENominal => resolved.sigma_e_nominal,
            SweepVariable::Epsilon => resolved.epsilon,
            SweepVariable::SigmaP => resolved.sigma_p,
        };
        let display: f64 = raw
            .split_whitespace()
            .next()
            .unwrap_or(raw)
            .parse()
            .map_err(|_| err(format!("`{raw}` is not a number")))?;
        out.push(SweepValue {
            display,
            raw: raw.to_owned(),
            base,
        });
    }
    if out.is_empty() {
        return Err(err("values list is empty".into()));
    }
    for pair in out.windows(2) {
        if pair[1].base <= pair[0].base {
            return Err(err(format!(
                "values must be strictly increasing ({} then {})",
                pair[0].raw, pair[1].raw
            )));
        }
    }
    Ok(out)
}

fn parse_curve(text: &str, line_no: usize) -> Result<Curve, ConfigError> {
    let mut overrides = Vec::new();
    let mut id_parts = Vec::new();
    for piece in text.split(';') {
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        let (key, value) = piece.split_once('=').ok_or_else(|| ConfigError {
            line: Some(line_no),
            key: Some("curve".into()),
            reason: format!("override `{piece}` is not `key = value`"),
        })?;
        let key = key.trim();
        let value = value.trim();
        // Validate the key and the value's units right away.
        let mut probe = RawConfig::default();
        probe.set(key, value).map_err(|mut e| {
            e.line = Some(line_no);
            e
        })?;
        probe.resolve().map_err(|mut e| {
            e.line = Some(line_no);
            e
        })?;
        id_parts.push(format!("{key}={value}"));
        overrides.push((key.to_owned(), value.to_owned()));
    }
    if overrides.is_empty() {
        return Err(ConfigError {
            line: Some(line_no),
            key: Some("curve".into()),
            reason: "curve has no overrides".into(),
        });
    }
    Ok(Curve {
        id: id_parts.join(";"),
        overrides,
    })
}

/// The algorithms evaluated at every sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Algo {
    Ao,
    BaselineX0,
    BaselineXL4,
    BaselineXL2,
}

impl Algo {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Ao => "ao",
            Self::BaselineX0 => "baseline_x0",
            Self::BaselineXL4 => "baseline_xL4",
            Self::BaselineXL2 => "baseline_xL2",
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One CSV row of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub sweep_value: f64,
    pub curve_id: String,
    pub algo: Algo,
    /// Optimal power in watts; `None` when infeasible.
    pub p0_opt: Option<f64>,
    pub tpa_x: f64,
    pub rate: f64,
    pub feasible: bool,
}

fn row_from(result: &SolveResult, sweep_value: f64, curve_id: &str, algo: Algo) -> SweepRow {
    SweepRow {
        sweep_value,
        curve_id: curve_id.to_owned(),
        algo,
        p0_opt: result.feasible.then_some(result.p0_opt),
        tpa_x: result.tpa_x_opt,
        rate: result.rate,
        feasible: result.feasible,
    }
}

/// Run a sweep against a base configuration.
///
/// Points are evaluated concurrently; rows come back ordered by
/// `(curve_id, algo, sweep_value)` regardless of completion order.
pub fn run_sweep(base: &RawConfig, spec: &SweepSpec) -> Result<Vec<SweepRow>, ConfigError> {
    let mut curves = spec.curves.clone();
    curves.sort_by(|a, b| a.id.cmp(&b.id));

    let mut rows = Vec::with_capacity(curves.len() * spec.values.len() * 4);
    for curve in &curves {
        let mut curve_cfg = base.clone();
        for (key, value) in &curve.overrides {
            curve_cfg.set(key, value)?;
        }
        let points: Vec<Result<[SweepRow; 4], ConfigError>> = spec
            .values
            .par_iter()
            .map(|value| {
                let mut point_cfg = curve_cfg.clone();
                point_cfg.set(spec.variable.key(), &value.raw)?;
                let resolved = point_cfg.resolve()?;
                let solve_err = |e: crate::Error| ConfigError {
                    line: None,
                    key: Some(spec.variable.key().into()),
                    reason: format!("at {} = {}: {e}", spec.variable.key(), value.raw),
                };
                let problem = resolved.to_problem().map_err(solve_err)?;
                let params = resolved.ao_params();
                let length = resolved.length;
                let ao = solve_ao(&problem, &params).map_err(solve_err)?;
                let b0 = solve_baseline(&problem, 0.0).map_err(solve_err)?;
                let bl4 = solve_baseline(&problem, length / 4.0).map_err(solve_err)?;
                let bl2 = solve_baseline(&problem, length / 2.0).map_err(solve_err)?;
                Ok([
                    row_from(&ao, value.display, &curve.id, Algo::Ao),
                    row_from(&b0, value.display, &curve.id, Algo::BaselineX0),
                    row_from(&bl4, value.display, &curve.id, Algo::BaselineXL4),
                    row_from(&bl2, value.display, &curve.id, Algo::BaselineXL2),
                ])
            })
            .collect();

        let mut per_point = Vec::with_capacity(points.len());
        for p in points {
            per_point.push(p?);
        }
        // Rows are emitted algo-major within a curve so the final order is
        // (curve_id, algo, sweep_value) with algos sorted lexicographically:
        // ao, baseline_x0, baseline_xL2, baseline_xL4.
        for algo_idx in [0usize, 1, 3, 2] {
            for point in &per_point {
                rows.push(point[algo_idx].clone());
            }
        }
    }
    Ok(rows)
}

/// CSV field quoting per RFC 4180 (only needed for curve ids).
fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

/// Render sweep rows as CSV. Floats use shortest round-trip formatting, so
/// identical inputs produce byte-identical output.
pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("sweep_value,curve_id,algo,p0_opt_dbm,tpa_x_m,rate_bps,feasible\n");
    for row in rows {
        let p0_dbm = match row.p0_opt {
            Some(w) if w > 0.0 => format!("{}", watts_to_dbm(w)),
            Some(_) => "-inf".to_owned(),
            None => String::new(),
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            row.sweep_value,
            csv_field(&row.curve_id),
            row.algo,
            p0_dbm,
            row.tpa_x,
            row.rate,
            row.feasible
        ));
    }
    out
}
