//! `foilvpp` command-line front end.
//!
//! Exit codes: 0 success, 1 output failure, 2 parse or domain error,
//! 3 rank-deficient fit, 4 non-monotone convergence study,
//! 5 no vertical balance, 6 not converged, 7 mismatched speed grids.

mod config;

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thiserror::Error;

use foilvpp::hull::{fit_surfaces, parse_hull_samples, HullError};
use foilvpp::sweep::{comparison_csv, format_sig9, sweep_csv, SweepError};
use foilvpp::units::{knots_to_ms, ms_to_knots};
use foilvpp::wing::{fit_ratio_curve, parse_ar_samples, richardson_extrapolate, WingError};
use foilvpp::{
    bare_hull_resistance, compare, run_sweep, solve_equilibrium, EquilibriumError,
    EquilibriumState, StateFlags, SweepRequest,
};

use config::{read_file, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    RankDeficient(String),
    #[error("{0}")]
    NonMonotone(String),
    #[error("{0}")]
    MismatchedGrids(String),
    #[error("{0}")]
    Output(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Output(_) => 1,
            CliError::Input(_) => 2,
            CliError::RankDeficient(_) => 3,
            CliError::NonMonotone(_) => 4,
            CliError::MismatchedGrids(_) => 7,
        }
    }
}

impl From<HullError> for CliError {
    fn from(e: HullError) -> Self {
        match e {
            HullError::RankDeficient => CliError::RankDeficient(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<WingError> for CliError {
    fn from(e: WingError) -> Self {
        match e {
            WingError::RankDeficient { .. } => CliError::RankDeficient(e.to_string()),
            WingError::NonMonotoneSequence
            | WingError::ZeroDifference
            | WingError::NoConvergence => CliError::NonMonotone(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<SweepError> for CliError {
    fn from(e: SweepError) -> Self {
        match e {
            SweepError::MismatchedSpeedGrids => CliError::MismatchedGrids(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "foilvpp",
    version,
    about = "Resistance prediction for hull-plus-foil sailing yachts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit quadratic response surfaces to bare-hull samples.
    FitHull {
        /// Sample file: speed_kn displacement_kg rx_n fz_n my_nm per row.
        samples: PathBuf,
        /// Waterline length, m.
        #[arg(long)]
        lwl: f64,
        /// Write the fitted surfaces here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extrapolate finite-wing data to infinite AR and fit a ratio curve.
    ArStudy {
        /// Sample file: ar value per row.
        samples: PathBuf,
        /// Polynomial degree in 1/AR; defaults to min(6, samples).
        #[arg(long)]
        degree: Option<usize>,
        /// Write the fitted ratio curve here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the equilibrium at one speed.
    Solve {
        config: PathBuf,
        /// Boat speed, knots.
        #[arg(long)]
        speed: f64,
    },
    /// Solve over the configured speed range and write a CSV table.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep several configurations and report the best at each speed.
    Compare {
        #[arg(required = true)]
        configs: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Writes through a sibling temporary file and a rename, so readers never
/// see a partial file. Without a path the text goes to stdout.
fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    let Some(path) = out else {
        return io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Output(e.to_string()));
    };
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(format!(".tmp{}", std::process::id()));
    let tmp = PathBuf::from(tmp);
    let fail = |e: io::Error| CliError::Output(format!("{}: {e}", path.display()));
    fs::write(&tmp, text).map_err(fail)?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        fail(e)
    })
}

fn fit_hull(samples: &Path, lwl: f64, out: Option<&Path>) -> Result<u8, CliError> {
    let text = read_file(samples)?;
    let samples = parse_hull_samples(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", samples.display())))?;
    let set = fit_surfaces(&samples, lwl)?;
    let d = set.domain();
    let mut report = format!("samples {}\n", samples.len());
    let _ = writeln!(
        report,
        "domain speed_kn [{}, {}] displacement_kg [{}, {}] lwl_m {}",
        format_sig9(ms_to_knots(d.speed_min)),
        format_sig9(ms_to_knots(d.speed_max)),
        format_sig9(d.displacement_min),
        format_sig9(d.displacement_max),
        format_sig9(set.lwl),
    );
    for (name, s) in [("rx", &set.rx), ("fz", &set.fz), ("my", &set.my)] {
        let coeffs: Vec<String> = s.coefficients.iter().map(|c| format_sig9(*c)).collect();
        let _ = writeln!(
            report,
            "{name} coefficients {} rms {}",
            coeffs.join(" "),
            format_sig9(s.rms_residual)
        );
    }
    match out {
        Some(path) => {
            emit(Some(path), &set.to_text())?;
            eprint!("{report}");
        }
        None => {
            emit(None, &report)?;
        }
    }
    Ok(0)
}

fn ar_study(samples: &Path, degree: Option<usize>, out: Option<&Path>) -> Result<u8, CliError> {
    let mut data = parse_ar_samples(&read_file(samples)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", samples.display())))?;
    data.sort_by(|a, b| a.ar.total_cmp(&b.ar));
    if data.len() < 3 {
        return Err(CliError::Input(format!(
            "need at least 3 samples, found {}",
            data.len()
        )));
    }
    let [c, m, f] = [
        &data[data.len() - 3],
        &data[data.len() - 2],
        &data[data.len() - 1],
    ];
    let ratio = m.ar / c.ar;
    if ((f.ar / m.ar) / ratio - 1.0).abs() > 1e-9 {
        return Err(CliError::Input(format!(
            "the three largest aspect ratios ({}, {}, {}) are not geometrically spaced",
            c.ar, m.ar, f.ar
        )));
    }
    let ex = richardson_extrapolate(c.value, m.value, f.value, ratio)?;
    let degree = degree.unwrap_or(data.len().min(6));
    let curve = fit_ratio_curve(&data, ex.asymptote, degree)?;
    let coeffs: Vec<String> = curve
        .coefficients()
        .iter()
        .map(|c| format_sig9(*c))
        .collect();
    let report = format!(
        "samples {}\nrefinement_ratio {}\norder {}\nasymptote {}\ndegree {degree}\ncoefficients {}\n",
        data.len(),
        format_sig9(ratio),
        format_sig9(ex.order),
        format_sig9(ex.asymptote),
        coeffs.join(" "),
    );
    emit(None, &report)?;
    if let Some(path) = out {
        emit(Some(path), &curve.to_text())?;
    }
    Ok(0)
}

fn state_report(label: &str, state: &EquilibriumState, bare: f64) -> String {
    let rows = [
        ("speed_kn", ms_to_knots(state.speed)),
        ("bare_rx_n", bare),
        ("total_rx_n", state.total_resistance),
        (
            "delta_percent",
            foilvpp::sweep::delta_percent(state.total_resistance, bare),
        ),
        ("residual_displacement_kg", state.residual_displacement),
        ("alpha_main_deg", state.alpha_main),
        ("alpha_rudder_deg", state.alpha_rudder),
        ("hull_rx_n", state.hull_rx),
        ("main_drag_n", state.main_drag),
        ("rudder_drag_n", state.rudder_drag),
        ("main_lift_n", state.main_lift),
        ("rudder_lift_n", state.rudder_lift),
        ("vertical_residual_n", state.vertical_residual),
        ("moment_residual_nm", state.moment_residual),
    ];
    let mut out = format!("label {label}\n");
    for (k, v) in rows {
        let _ = writeln!(out, "{k} {}", format_sig9(v));
    }
    let flags = state.flags.label();
    let _ = writeln!(
        out,
        "flags {}",
        if flags.is_empty() { "none" } else { &flags }
    );
    let _ = writeln!(out, "iterations {}", state.iterations);
    out
}

fn solve(config: &Path, speed_kn: f64) -> Result<u8, CliError> {
    let run = RunConfig::load(config)?;
    let speed = knots_to_ms(speed_kn);
    let domain_err = |e: EquilibriumError| CliError::Input(e.to_string());
    let bare = bare_hull_resistance(&run.yacht, speed).map_err(domain_err)?;
    let (state, code) = match solve_equilibrium(&run.yacht, speed, &run.tolerances) {
        Ok(s) => {
            let code = if s.flags.contains(StateFlags::NOT_CONVERGED) {
                6
            } else {
                0
            };
            (s, code)
        }
        Err(EquilibriumError::NoVerticalBalance(s)) => {
            let mut s = *s;
            s.flags.insert(StateFlags::NO_VERTICAL_BALANCE);
            (s, 5)
        }
        Err(e) => return Err(domain_err(e)),
    };
    emit(None, &state_report(&run.label, &state, bare))?;
    Ok(code)
}

fn sweep_request(run: RunConfig, source: &Path) -> Result<SweepRequest, CliError> {
    let range = run.speed.ok_or_else(|| {
        CliError::Input(format!(
            "{}: sweep needs speed.min_kn, speed.max_kn and speed.step_kn",
            source.display()
        ))
    })?;
    Ok(SweepRequest {
        speeds: range.speeds()?,
        config: run.yacht,
        label: run.label,
        tolerances: run.tolerances,
    })
}

fn sweep(config: &Path, out: Option<&Path>) -> Result<u8, CliError> {
    let request = sweep_request(RunConfig::load(config)?, config)?;
    let result = run_sweep(&request)?;
    emit(out, &sweep_csv(&result))?;
    Ok(0)
}

fn compare_configs(configs: &[PathBuf], out: Option<&Path>) -> Result<u8, CliError> {
    let mut results = Vec::with_capacity(configs.len());
    for path in configs {
        let request = sweep_request(RunConfig::load(path)?, path)?;
        if results
            .iter()
            .any(|r: &foilvpp::SweepResult| r.label == request.label)
        {
            return Err(CliError::Input(format!(
                "duplicate label `{}`",
                request.label
            )));
        }
        results.push(run_sweep(&request)?);
    }
    emit(out, &comparison_csv(&compare(&results)?))?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::FitHull { samples, lwl, out } => fit_hull(samples, *lwl, out.as_deref()),
        Command::ArStudy {
            samples,
            degree,
            out,
        } => ar_study(samples, *degree, out.as_deref()),
        Command::Solve { config, speed } => solve(config, *speed),
        Command::Sweep { config, out } => sweep(config, out.as_deref()),
        Command::Compare { configs, out } => compare_configs(configs, out.as_deref()),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
