//! Convergence-study utilities for deriving aspect-ratio corrections from
//! finite-wing force data: Richardson extrapolation to AR = infinity and a
//! least-squares refit of the ratio polynomial.

use super::{RatioCurve, WingError};
use crate::lsq;

/// One finite-wing result: a force divided by the wing area, at some AR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArSample {
    pub ar: f64,
    /// Force per unit area, N/m^2.
    pub value: f64,
}

impl ArSample {
    pub fn new(ar: f64, value: f64) -> Self {
        Self { ar, value }
    }
}

/// Asymptote and observed order from three geometrically spaced samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrapolation {
    pub asymptote: f64,
    pub order: f64,
}

/// Generalized Richardson extrapolation.
///
/// With `r` the refinement ratio between successive samples,
/// `p = ln(|f1 - f2| / |f2 - f3|) / ln r` and
/// `f_inf = f3 + (f3 - f2) / (r^p - 1)`.
pub fn richardson_extrapolate(
    coarse: f64,
    medium: f64,
    fine: f64,
    refinement_ratio: f64,
) -> Result<Extrapolation, WingError> {
    if !(refinement_ratio > 1.0) || !refinement_ratio.is_finite() {
        return Err(WingError::InvalidRefinementRatio(refinement_ratio));
    }
    let d_coarse = medium - coarse;
    let d_fine = fine - medium;
    if d_coarse == 0.0 || d_fine == 0.0 {
        return Err(WingError::ZeroDifference);
    }
    if d_coarse.signum() != d_fine.signum() {
        return Err(WingError::NonMonotoneSequence);
    }
    let order = (d_coarse.abs() / d_fine.abs()).ln() / refinement_ratio.ln();
    let gain = refinement_ratio.powf(order) - 1.0;
    if gain == 0.0 || !order.is_finite() {
        return Err(WingError::NoConvergence);
    }
    Ok(Extrapolation {
        asymptote: fine + d_fine / gain,
        order,
    })
}

/// Fits `value / asymptote - 1` against `{1/ar, ..., 1/ar^degree}` with the
/// constant term pinned to 1.
pub fn fit_ratio_curve(
    samples: &[ArSample],
    asymptote: f64,
    degree: usize,
) -> Result<RatioCurve, WingError> {
    if asymptote == 0.0 || !asymptote.is_finite() {
        return Err(WingError::ZeroAsymptote);
    }
    if degree == 0 {
        return Ok(RatioCurve::identity());
    }
    if let Some(s) = samples.iter().find(|s| !(s.ar > 0.0 && s.ar.is_finite())) {
        return Err(WingError::NonPositiveAspectRatio(s.ar));
    }
    let rows: Vec<Vec<f64>> = samples
        .iter()
        .map(|s| {
            let x = s.ar.recip();
            (1..=degree as i32).map(|k| x.powi(k)).collect()
        })
        .collect();
    let rhs: Vec<f64> = samples.iter().map(|s| s.value / asymptote - 1.0).collect();
    let sol = lsq::solve(&rows, &rhs).ok_or(WingError::RankDeficient {
        samples: samples.len(),
        degree,
    })?;
    Ok(RatioCurve::new(sol.coefficients))
}

/// Parses the AR-sample format: `#` comments, rows of `ar value`.
pub fn parse_ar_samples(text: &str) -> Result<Vec<ArSample>, WingError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if out.is_empty() && fields.len() >= 2 && fields[0].eq_ignore_ascii_case("ar") {
            continue;
        }
        let parsed: Option<Vec<f64>> = fields.iter().take(2).map(|f| f.parse().ok()).collect();
        match parsed {
            Some(v) if v.len() == 2 => {
                if !(v[0] > 0.0) || !v[1].is_finite() {
                    return Err(WingError::Parse(format!(
                        "line {}: need ar > 0 and a finite value",
                        idx + 1
                    )));
                }
                out.push(ArSample::new(v[0], v[1]));
            }
            _ => {
                return Err(WingError::Parse(format!(
                    "line {}: expected `ar value`",
                    idx + 1
                )))
            }
        }
    }
    Ok(out)
}
