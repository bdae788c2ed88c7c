//! Resistance curves over a speed range, with and without foils.

use std::fmt::Write as _;

use rayon::prelude::*;
use thiserror::Error;

use crate::equilibrium::{
    bare_hull_resistance, solve_equilibrium, EquilibriumError, EquilibriumState, SolverTolerances,
    StateFlags, YachtConfig,
};
use crate::units::{knots_to_ms, ms_to_knots};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SweepError {
    #[error("speeds must be finite and strictly increasing")]
    UnorderedSpeeds,
    #[error("empty speed list")]
    NoSpeeds,
    #[error("speed grid needs min <= max and step > 0")]
    InvalidRange,
    #[error("results do not share the same speed grid")]
    MismatchedSpeedGrids,
    #[error(transparent)]
    Equilibrium(#[from] EquilibriumError),
}

/// Speeds `min, min + step, ...` up to `max` inclusive, in knots, returned in m/s.
pub fn speeds_from_knots(min_kn: f64, max_kn: f64, step_kn: f64) -> Result<Vec<f64>, SweepError> {
    if !(step_kn > 0.0 && min_kn <= max_kn && min_kn.is_finite() && max_kn.is_finite()) {
        return Err(SweepError::InvalidRange);
    }
    // Index-based so rounding never drops the last point.
    let n = ((max_kn - min_kn) / step_kn + 1e-9).floor() as usize;
    Ok((0..=n)
        .map(|i| knots_to_ms(min_kn + i as f64 * step_kn))
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRequest {
    pub config: YachtConfig,
    /// m/s, strictly increasing.
    pub speeds: Vec<f64>,
    pub label: String,
    pub tolerances: SolverTolerances,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    /// m/s
    pub speed: f64,
    pub state: EquilibriumState,
    /// Hull alone at full displacement, N.
    pub bare_rx: f64,
    /// `100 (total - bare) / bare`; negative means the foils pay off.
    pub delta_percent: f64,
}

impl SweepRecord {
    fn new(speed: f64, state: EquilibriumState, bare_rx: f64) -> Self {
        Self {
            speed,
            delta_percent: delta_percent(state.total_resistance, bare_rx),
            state,
            bare_rx,
        }
    }
}

pub fn delta_percent(total: f64, bare: f64) -> f64 {
    100.0 * (total - bare) / bare
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub label: String,
    pub records: Vec<SweepRecord>,
    /// m/s
    pub crossover_speeds: Vec<f64>,
}

/// Solves every speed in the request. Failed points are kept, flagged, and
/// left out of crossover detection.
pub fn run_sweep(request: &SweepRequest) -> Result<SweepResult, SweepError> {
    if request.speeds.is_empty() {
        return Err(SweepError::NoSpeeds);
    }
    let ordered = request.speeds.iter().all(|v| v.is_finite())
        && request.speeds.windows(2).all(|w| w[0] < w[1]);
    if !ordered {
        return Err(SweepError::UnorderedSpeeds);
    }
    let records = request
        .speeds
        .par_iter()
        .map(|&speed| solve_point(&request.config, speed, &request.tolerances))
        .collect::<Result<Vec<_>, _>>()?;
    let mut result = SweepResult {
        label: request.label.clone(),
        records,
        crossover_speeds: Vec::new(),
    };
    result.crossover_speeds = crossover(&result);
    Ok(result)
}

fn solve_point(
    config: &YachtConfig,
    speed: f64,
    tol: &SolverTolerances,
) -> Result<SweepRecord, SweepError> {
    let bare = bare_hull_resistance(config, speed)?;
    let state = match solve_equilibrium(config, speed, tol) {
        Ok(s) => s,
        Err(EquilibriumError::NoVerticalBalance(s)) => {
            let mut s = *s;
            s.flags.insert(StateFlags::NO_VERTICAL_BALANCE);
            s
        }
        Err(e) => return Err(e.into()),
    };
    Ok(SweepRecord::new(speed, state, bare))
}

/// Speeds (m/s) where `delta_percent` changes sign, linearly interpolated
/// between neighbouring usable records.
pub fn crossover(result: &SweepResult) -> Vec<f64> {
    let usable = result
        .records
        .iter()
        .filter(|r| !r.state.flags.is_failure() && r.delta_percent.is_finite());
    let mut out = Vec::new();
    let mut last_nonzero: Option<(f64, f64)> = None;
    for r in usable {
        let d = r.delta_percent;
        if d == 0.0 {
            continue;
        }
        if let Some((v0, d0)) = last_nonzero {
            if d0.signum() != d.signum() {
                out.push(v0 + (r.speed - v0) * d0 / (d0 - d));
            }
        }
        last_nonzero = Some((r.speed, d));
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    /// m/s
    pub speed: f64,
    /// Total resistance per input, N, in input order.
    pub totals: Vec<f64>,
    /// Index of the lowest total; ties go to the earliest input.
    pub best: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub labels: Vec<String>,
    pub rows: Vec<ComparisonRow>,
}

impl Comparison {
    pub fn best_label(&self, row: usize) -> &str {
        &self.labels[self.rows[row].best]
    }
}

/// Tabulates total resistance per configuration on a shared speed grid.
pub fn compare(results: &[SweepResult]) -> Result<Comparison, SweepError> {
    let first = results.first().ok_or(SweepError::NoSpeeds)?;
    let same_grid = results.iter().all(|r| {
        r.records.len() == first.records.len()
            && r.records
                .iter()
                .zip(&first.records)
                .all(|(a, b)| a.speed == b.speed)
    });
    if !same_grid {
        return Err(SweepError::MismatchedSpeedGrids);
    }
    let rows = (0..first.records.len())
        .map(|i| {
            let totals: Vec<f64> = results
                .iter()
                .map(|r| r.records[i].state.total_resistance)
                .collect();
            let best = totals
                .iter()
                .enumerate()
                .fold(0, |best, (j, &t)| if t < totals[best] { j } else { best });
            ComparisonRow {
                speed: first.records[i].speed,
                totals,
                best,
            }
        })
        .collect();
    Ok(Comparison {
        labels: results.iter().map(|r| r.label.clone()).collect(),
        rows,
    })
}

/// Nine significant digits, fixed notation for magnitudes in `[1e-5, 1e9)`
/// and scientific otherwise. Trailing zeros are kept.
pub fn format_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0.00000000".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.8e}");
    let exp: i32 = sci
        .rsplit('e')
        .next()
        .and_then(|e| e.parse().ok())
        .unwrap_or(0);
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}

pub const SWEEP_CSV_HEADER: &str = "speed_kn,bare_rx_n,total_rx_n,delta_percent,residual_displacement_kg,alpha_main_deg,alpha_rudder_deg,hull_rx_n,main_drag_n,rudder_drag_n,flags";

/// Sweep table, one row per speed, followed by `# crossover_kn` comment
/// lines for each detected crossover.
pub fn sweep_csv(result: &SweepResult) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in &result.records {
        let s = &r.state;
        let cells = [
            ms_to_knots(r.speed),
            r.bare_rx,
            s.total_resistance,
            r.delta_percent,
            s.residual_displacement,
            s.alpha_main,
            s.alpha_rudder,
            s.hull_rx,
            s.main_drag,
            s.rudder_drag,
        ]
        .map(format_sig9);
        let _ = writeln!(out, "{},{}", cells.join(","), s.flags.label());
    }
    for v in &result.crossover_speeds {
        let _ = writeln!(out, "# crossover_kn,{}", format_sig9(ms_to_knots(*v)));
    }
    out
}

pub fn comparison_csv(cmp: &Comparison) -> String {
    let mut out = String::from("speed_kn");
    for l in &cmp.labels {
        let _ = write!(out, ",{l}_rx_n");
    }
    out.push_str(",best_label\n");
    for row in &cmp.rows {
        out.push_str(&format_sig9(ms_to_knots(row.speed)));
        for t in &row.totals {
            out.push(',');
            out.push_str(&format_sig9(*t));
        }
        let _ = writeln!(out, ",{}", cmp.labels[row.best]);
    }
    out
}
