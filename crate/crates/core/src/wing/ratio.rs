//! Aspect-ratio correction curves `1 + c1/AR + c2/AR^2 + ...`.

use std::fmt::Write as _;

use super::WingError;

/// Published drag-ratio coefficients `Cd/Cd_inf` for a NACA 4412 wing.
pub const DRAG_RATIO_COEFFICIENTS: [f64; 6] =
    [-0.110, 217.261, -2742.862, 16343.289, -51940.417, 83982.370];

/// Published lift-ratio coefficients `Cl/Cl_inf` for a NACA 4412 wing.
pub const LIFT_RATIO_COEFFICIENTS: [f64; 6] =
    [-0.239, -35.349, 340.353, -1461.250, 2927.150, -2191.410];

/// Multiplier applied to 2D coefficients for a wing of finite aspect ratio.
///
/// The constant term is fixed at 1, so every curve tends to 1 (the 2D value)
/// as the aspect ratio grows.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioCurve {
    coefficients: Vec<f64>,
}

impl RatioCurve {
    /// `coefficients[k]` multiplies `1/AR^(k+1)`.
    pub fn new(coefficients: Vec<f64>) -> Self {
        Self { coefficients }
    }

    /// The curve that leaves coefficients unchanged.
    pub fn identity() -> Self {
        Self::new(Vec::new())
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len()
    }

    pub fn evaluate(&self, ar: f64) -> Result<f64, WingError> {
        if !(ar > 0.0) || !ar.is_finite() {
            return Err(WingError::NonPositiveAspectRatio(ar));
        }
        let x = ar.recip();
        // Horner in 1/AR, constant term 1.
        let tail = self
            .coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, &c| (acc + c) * x);
        Ok(1.0 + tail)
    }

    /// Single line `1.0 c1 c2 ...`.
    pub fn to_text(&self) -> String {
        let mut out = String::from("1.0");
        for c in &self.coefficients {
            let _ = write!(out, " {c:?}");
        }
        out.push('\n');
        out
    }

    /// Parses the single-line form written by [`RatioCurve::to_text`].
    /// `#` comment lines and blank lines are skipped; the leading value must be 1.
    pub fn parse(text: &str) -> Result<Self, WingError> {
        let line = text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty() && !l.starts_with('#'))
            .ok_or_else(|| WingError::Parse("ratio curve file has no data line".into()))?;
        let values = line
            .split_whitespace()
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|_| WingError::Parse(format!("non-numeric field `{f}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        match values.split_first() {
            Some((&1.0, rest)) => Ok(Self::new(rest.to_vec())),
            _ => Err(WingError::Parse(
                "ratio curve line must start with the constant term 1.0".into(),
            )),
        }
    }
}

pub fn builtin_drag_ratio() -> RatioCurve {
    RatioCurve::new(DRAG_RATIO_COEFFICIENTS.to_vec())
}

pub fn builtin_lift_ratio() -> RatioCurve {
    RatioCurve::new(LIFT_RATIO_COEFFICIENTS.to_vec())
}

/// `1 + sum c_k / ar^k`.
pub fn evaluate_ratio(curve: &RatioCurve, ar: f64) -> Result<f64, WingError> {
    curve.evaluate(ar)
}
