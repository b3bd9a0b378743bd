//! Subcommand entry points for the `pabsc` binary.
//!
//! Everything here is ordinary library code so the behaviors (output
//! formats, exit classification) are testable without spawning a process.
//! Exit codes: 0 success, 1 infeasible, 2 config/validation error,
//! 3 oracle failure, 4 I/O error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::config::{ConfigError, RawConfig, ScenarioConfig};
use crate::detection::{
    dep_false_alarm, dep_miss, dep_total, hypothesis_powers, monte_carlo_dep, optimal_detection,
    worst_case_dep,
};
use crate::optimizer::solve_ao;
use crate::oracle::{verify_delta3_variants, verify_lemma1, verify_p1, GridSpec};
use crate::sweep::{rows_to_csv, run_sweep, SweepSpec};
use crate::units::watts_to_dbm;

/// Command failure carrying its process exit code.
#[derive(Debug)]
pub enum CmdError {
    /// The scenario admits no feasible operating point (exit 1).
    Infeasible,
    /// Bad configuration or invalid request (exit 2).
    Config(String),
    /// A closed form failed its brute-force or Monte-Carlo check (exit 3).
    Oracle(String),
    /// Filesystem problem (exit 4).
    Io(String),
}

impl CmdError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Infeasible => 1,
            Self::Config(_) => 2,
            Self::Oracle(_) => 3,
            Self::Io(_) => 4,
        }
    }

    pub fn message(&self) -> String {
        match self {
            Self::Infeasible => "infeasible: no operating point satisfies the constraints".into(),
            Self::Config(m) | Self::Oracle(m) | Self::Io(m) => m.clone(),
        }
    }
}

impl From<ConfigError> for CmdError {
    fn from(e: ConfigError) -> Self {
        Self::Config(e.to_string())
    }
}

impl From<crate::Error> for CmdError {
    fn from(e: crate::Error) -> Self {
        Self::Config(e.to_string())
    }
}

fn load_config(path: Option<&Path>) -> Result<ScenarioConfig, CmdError> {
    match path {
        Some(p) => Ok(ScenarioConfig::from_file(p)?),
        None => Ok(ScenarioConfig::default()),
    }
}

fn load_raw(path: Option<&Path>) -> Result<RawConfig, CmdError> {
    match path {
        Some(p) => Ok(RawConfig::from_file(p)?),
        None => Ok(RawConfig::default()),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CmdError> {
    std::fs::write(path, contents)
        .map_err(|e| CmdError::Io(format!("cannot write {}: {e}", path.display())))
}

/// Solve one scenario and print the operating point.
pub fn cmd_solve(config: Option<&Path>, out: Option<&Path>, quiet: bool) -> Result<(), CmdError> {
    let cfg = load_config(config)?;
    let problem = cfg.to_problem()?;
    let result = solve_ao(&problem, &cfg.ao_params())?;

    let p0_dbm = if result.feasible {
        format!("{:.4}", watts_to_dbm(result.p0_opt))
    } else {
        "n/a".into()
    };
    if !quiet {
        println!("feasible           : {}", result.feasible);
        println!("p0_opt             : {} dBm", p0_dbm);
        println!("tpa_x_opt          : {:.6} m", result.tpa_x_opt);
        println!("rate               : {:.6} bits/s", result.rate);
        println!("binding_constraint : {}", result.binding_constraint);
        println!("iterations         : {}", result.iterations);
    }
    if let Some(out) = out {
        let mut csv =
            String::from("p0_opt_dbm,tpa_x_m,rate_bps,feasible,binding_constraint,iterations\n");
        let p0_field = if result.feasible {
            format!("{}", watts_to_dbm(result.p0_opt))
        } else {
            String::new()
        };
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{}",
            p0_field,
            result.tpa_x_opt,
            result.rate,
            result.feasible,
            result.binding_constraint,
            result.iterations
        );
        write_file(out, &csv)?;
    }
    if result.feasible {
        Ok(())
    } else {
        Err(CmdError::Infeasible)
    }
}

/// Run a sweep, writing one CSV and one SVG into `out_dir`.
pub fn cmd_sweep(
    config: Option<&Path>,
    sweep_file: &Path,
    out_dir: &Path,
    quiet: bool,
) -> Result<(PathBuf, PathBuf), CmdError> {
    // Fail on an unwritable output directory before any computation.
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CmdError::Io(format!("cannot create {}: {e}", out_dir.display())))?;
    let probe = out_dir.join(".pabsc_write_probe");
    std::fs::write(&probe, b"")
        .map_err(|e| CmdError::Io(format!("cannot write into {}: {e}", out_dir.display())))?;
    let _ = std::fs::remove_file(&probe);

    let base = load_raw(config)?;
    let spec = SweepSpec::from_file(sweep_file)?;
    let rows = run_sweep(&base, &spec)?;

    let csv_path = out_dir.join(format!("sweep_{}.csv", spec.variable.key()));
    let svg_path = out_dir.join(format!("sweep_{}.svg", spec.variable.key()));
    write_file(&csv_path, &rows_to_csv(&rows))?;
    let svg = crate::plot::sweep_plot_svg(
        &rows,
        spec.variable.key(),
        &format!("achievable covert rate vs {}", spec.variable.key()),
    );
    write_file(&svg_path, &svg)?;
    if !quiet {
        println!("wrote {}", csv_path.display());
        println!("wrote {}", svg_path.display());
    }
    Ok((csv_path, svg_path))
}

/// Run the oracle suite against the configured scenario.
pub fn cmd_verify(
    config: Option<&Path>,
    seed_override: Option<u64>,
    quiet: bool,
) -> Result<(), CmdError> {
    let cfg = load_config(config)?;
    if cfg.mc_samples == 0 {
        return Err(CmdError::Config(
            "mc_samples must be at least 1 for verification".into(),
        ));
    }
    let problem = cfg.to_problem()?;
    let params = cfg.ao_params();
    let seed = seed_override.unwrap_or(cfg.mc_seed);
    let mut failures = Vec::new();
    let mut say = |name: &str, pass: bool, detail: String| {
        if !quiet {
            println!("{name}: {} ({detail})", if pass { "PASS" } else { "FAIL" });
        }
        if !pass {
            failures.push(name.to_owned());
        }
    };

    // Optimal-threshold closed form versus a dense threshold grid.
    let eve_gain = crate::channel::channel_gain_eve_ground(
        cfg.d_b_e,
        cfg.g_est,
        &problem.scenario.rf,
    )?;
    let tpa_x = cfg.ao_init_tpa_x.clamp(0.0, cfg.length);
    let (d1, d2) = hypothesis_powers(
        cfg.p0,
        problem.scenario.d_pt_to(tpa_x, problem.scenario.layout.eve_estimate),
        problem.scenario.d_pt_b_at(tpa_x),
        eve_gain,
        &problem.power,
        &problem.scenario.rf,
    )?;
    let noise = &problem.noise;
    let grid = GridSpec::new(noise.x_lo + d1, noise.x_hi + d2, cfg.oracle_grid_1d.max(2))
        .map_err(|e| CmdError::Config(e.to_string()))?;
    let lemma = verify_lemma1(d1, d2, noise, &grid, 1e-6);
    say(
        "threshold-oracle",
        lemma.pass,
        format!(
            "closed {:.6e} grid {:.6e} gap {:.2e}",
            lemma.closed_form_value, lemma.grid_value, lemma.abs_gap
        ),
    );

    // Monte-Carlo check of the false-alarm / miss closed forms at the
    // optimal threshold and at two off-optimal thresholds.
    let opt = optimal_detection(d1, d2, noise);
    let tol = (4.0 / (cfg.mc_samples as f64).sqrt()).max(0.005);
    for (tag, gamma) in [
        ("mc-at-threshold", opt.threshold),
        ("mc-low", noise.x_lo + d1 + 0.25 * (noise.x_hi - noise.x_lo)),
        ("mc-high", noise.x_lo + d2 + 0.75 * (noise.x_hi - noise.x_lo)),
    ] {
        let (pf, pm) = monte_carlo_dep(gamma, d1, d2, noise, cfg.mc_samples, seed);
        let fa_gap = (pf - dep_false_alarm(gamma, d1, noise)).abs();
        let md_gap = (pm - dep_miss(gamma, d2, noise)).abs();
        say(
            tag,
            fa_gap <= tol && md_gap <= tol,
            format!("fa gap {fa_gap:.2e}, md gap {md_gap:.2e}, tol {tol:.2e}"),
        );
    }

    // Joint problem versus the 2-D grid.
    let n2 = cfg.oracle_grid_2d.max(2);
    let power_grid =
        GridSpec::new(0.0, cfg.p_max, n2).map_err(|e| CmdError::Config(e.to_string()))?;
    let pos_grid =
        GridSpec::new(0.0, cfg.length, n2).map_err(|e| CmdError::Config(e.to_string()))?;
    let p1 = verify_p1(&problem, &params, &power_grid, &pos_grid)?;
    say(
        "joint-optimum-oracle",
        p1.pass,
        format!(
            "solver {:.3} bits/s, grid best {:.3} bits/s",
            p1.closed_form_value, p1.grid_value
        ),
    );

    // Position-bound offset-term adjudication.
    let scan_points = cfg.oracle_grid_1d.clamp(1_000, 200_000);
    let scan_grid =
        GridSpec::new(0.0, cfg.length, scan_points).map_err(|e| CmdError::Config(e.to_string()))?;
    let d3 = verify_delta3_variants(&problem, &params, &scan_grid)?;
    say(
        "position-bound-form",
        d3.derived.matches_grid && !d3.printed.matches_grid,
        format!(
            "derived gap {:.2e} m, sign-flipped gap {:.2e} m, radicand shift {:.3}",
            d3.derived.worst_gap, d3.printed.worst_gap, d3.radicand_shift
        ),
    );

    if failures.is_empty() {
        Ok(())
    } else {
        Err(CmdError::Oracle(format!(
            "verification failed: {}",
            failures.join(", ")
        )))
    }
}

/// Tabulate the detection-error probabilities against the threshold.
pub fn cmd_detect(
    config: Option<&Path>,
    out: Option<&Path>,
    points: usize,
    quiet: bool,
) -> Result<(), CmdError> {
    if points < 2 {
        return Err(CmdError::Config("need at least 2 table points".into()));
    }
    let cfg = load_config(config)?;
    let problem = cfg.to_problem()?;
    let noise = &problem.noise;
    let tpa_x = cfg.ao_init_tpa_x.clamp(0.0, cfg.length);
    let eve_gain =
        crate::channel::channel_gain_eve_ground(cfg.d_b_e, cfg.g_est, &problem.scenario.rf)?;
    let (d1, d2) = hypothesis_powers(
        cfg.p0,
        problem.scenario.d_pt_to(tpa_x, problem.scenario.layout.eve_estimate),
        problem.scenario.d_pt_b_at(tpa_x),
        eve_gain,
        &problem.power,
        &problem.scenario.rf,
    )?;
    let opt = optimal_detection(d1, d2, noise);

    let lo = noise.x_lo + d1;
    let hi = noise.x_hi + d2;
    let span = hi - lo;
    let (lo, hi) = (lo - 0.05 * span, hi + 0.05 * span);
    let mut csv = String::from("gamma_w,p_false_alarm,p_miss,p_total\n");
    for i in 0..points {
        let gamma = lo + (hi - lo) * i as f64 / (points - 1) as f64;
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            gamma,
            dep_false_alarm(gamma, d1, noise),
            dep_miss(gamma, d2, noise),
            dep_total(gamma, d1, d2, noise)
        );
    }

    if !quiet {
        println!("delta1             : {:.6e} W", d1);
        println!("delta2             : {:.6e} W", d2);
        println!("threshold_opt      : {:.6e} W", opt.threshold);
        println!("dep_min            : {:.6}", opt.dep_min);
        if let Some(worst_gain) = problem.worst_gain() {
            let worst = worst_case_dep(
                cfg.p0,
                problem.scenario.d_pt_b_at(tpa_x),
                worst_gain,
                &problem.power,
                &problem.scenario.rf,
                noise,
            )?;
            println!("dep_worst_case     : {:.6} (raw {:.6})", worst.value, worst.raw);
        } else {
            println!("dep_worst_case     : undefined (uncertainty ball contains the device)");
        }
        if opt.certain_detection {
            println!("note               : excess power exceeds the noise band; the warden can detect with certainty");
        }
        if out.is_none() {
            print!("{csv}");
        }
    }
    if let Some(out) = out {
        write_file(out, &csv)?;
        if !quiet {
            println!("wrote {}", out.display());
        }
    }
    Ok(())
}
