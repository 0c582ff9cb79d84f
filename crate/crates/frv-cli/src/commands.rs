//! The three subcommands. Each returns the process exit code; all file
//! output is deterministic in (config, seed).

use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use frv_core::lln::{convergence_study, decomposition_diagnostic};
use frv_core::models::cov_report_csv;
use frv_core::{Direction, OmegaSeed};

use crate::config::{ConfigError, ExperimentConfig};

pub enum CommandError {
    Config(ConfigError),
    Io { path: PathBuf, source: io::Error },
}

impl fmt::Display for CommandError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CommandError::Config(e) => e.fmt(f),
            CommandError::Io { path, source } => {
                write!(f, "cannot write {}: {source}", path.display())
            }
        }
    }
}

impl From<ConfigError> for CommandError {
    fn from(e: ConfigError) -> Self {
        CommandError::Config(e)
    }
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CommandError> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|source| CommandError::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

fn ensure_dir(dir: &Path) -> Result<(), CommandError> {
    fs::create_dir_all(dir).map_err(|source| CommandError::Io {
        path: dir.to_path_buf(),
        source,
    })
}

/// Runs the convergence study, writes the CSV and both plot files, and
/// reports convergence through the exit code (0 converged, 2 not).
pub fn study(config: &ExperimentConfig, out_dir: &Path, quiet: bool) -> Result<u8, CommandError> {
    let model = config.build_model()?;
    let s = &config.study;
    let study = convergence_study(&model, &s.schedule, s.eps, s.replications, s.master_seed);

    ensure_dir(out_dir)?;
    let csv_path = write_file(out_dir, &config.output.study_csv, &study.to_csv())?;
    let plot_path = write_file(out_dir, &config.output.study_plot, &study.plot_data())?;
    let distance_lines: String = study
        .rows
        .iter()
        .map(|r| format!("{} {}\n", r.n, r.mean_distance))
        .collect();
    let distance_path = write_file(out_dir, &config.output.distance_plot, &distance_lines)?;

    let converged = study.converged(s.target_p, s.decrease_factor);
    if !quiet {
        println!(
            "{:>8}  {:>8}  {:>19}  {:>13}  {:>10}",
            "n", "p_hat", "wilson 95%", "mean_distance", "bound"
        );
        for r in &study.rows {
            println!(
                "{:>8}  {:>8.4}  [{:>7.4}, {:>7.4}]  {:>13.6}  {:>10.4}",
                r.n, r.p_hat, r.ci_lo, r.ci_hi, r.mean_distance, r.chebyshev_bound
            );
        }
        println!(
            "converged: {} (target_p = {}, decrease_factor = {})",
            if converged { "yes" } else { "no" },
            s.target_p,
            s.decrease_factor
        );
        println!(
            "wrote {}, {}, {}",
            csv_path.display(),
            plot_path.display(),
            distance_path.display()
        );
    }
    Ok(if converged { 0 } else { 2 })
}

/// Runs the uncorrelatedness report plus a variance-condition sweep over
/// the study schedule; exit 0 when no cell is flagged, 2 otherwise.
pub fn check_model(
    config: &ExperimentConfig,
    out_dir: &Path,
    quiet: bool,
) -> Result<u8, CommandError> {
    let model = config.build_model()?;
    let c = &config.check;
    let rows = model.uncorrelatedness_report_with_z(
        c.max_k,
        &c.alpha_grid,
        c.n_draws,
        config.study.master_seed,
        c.z,
    );
    let flagged = rows.iter().filter(|r| r.flagged).count();

    ensure_dir(out_dir)?;
    let cov_path = write_file(out_dir, &config.output.cov_csv, &cov_report_csv(&rows))?;
    let sweep_lines: String = config
        .study
        .schedule
        .iter()
        .map(|&n| {
            let worst = c
                .alpha_grid
                .iter()
                .flat_map(|&alpha| {
                    Direction::BOTH.map(|dir| model.variance_condition(n, alpha, dir))
                })
                .fold(0.0f64, f64::max);
            format!("{n} {worst}\n")
        })
        .collect();
    let sweep_path = write_file(out_dir, &config.output.varcond_plot, &sweep_lines)?;

    if !quiet {
        println!(
            "{flagged} of {} covariance cells flagged at z = {}",
            rows.len(),
            c.z
        );
        println!("wrote {}, {}", cov_path.display(), sweep_path.display());
    }
    Ok(if flagged == 0 { 0 } else { 2 })
}

/// Replays one trial and prints its three-term distance decomposition;
/// exit 3 marks the never-expected bound violation.
pub fn diagnose(
    config: &ExperimentConfig,
    n: Option<usize>,
    seed: Option<u64>,
    quiet: bool,
) -> Result<u8, CommandError> {
    let model = config.build_model()?;
    let s = &config.study;
    let n = n.unwrap_or_else(|| *s.schedule.last().expect("schedule is never empty"));
    if n == 0 {
        return Err(ConfigError {
            line: 0,
            msg: "diagnose needs n >= 1".into(),
        }
        .into());
    }
    let omega = OmegaSeed(seed.unwrap_or(s.master_seed));
    let report = decomposition_diagnostic(&model, n, omega, s.eps);
    if !quiet {
        println!("n           = {}", report.n);
        println!("eps         = {}", report.eps);
        println!("cells       = {}", report.cells);
        println!("cut term    = {}", report.cut_term);
        println!("limit term  = {}", report.limit_term);
        println!("drift term  = {}", report.drift_term);
        println!("bound       = {}", report.bound());
        println!("distance    = {}", report.distance);
        println!("dominant    = {}", report.dominant_term());
        println!("bound holds = {}", if report.holds { "yes" } else { "no" });
    }
    Ok(if report.holds { 0 } else { 3 })
}
