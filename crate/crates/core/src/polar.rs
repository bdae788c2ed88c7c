//! 2D foil-section polars: lift and drag coefficient versus angle of attack.
//!
//! A [`PolarTable`] is the tabulated output of a 2D section solver. Angles are
//! in degrees everywhere. Lookups between knots are piecewise linear and
//! lookups outside the tabulated range are errors, never extrapolations.

use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolarError {
    #[error("line {line}: {reason}")]
    MalformedRow { line: usize, reason: String },
    #[error("duplicate angle of attack {0} deg")]
    DuplicateAlpha(f64),
    #[error("polar needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("invalid polar point at alpha = {alpha} deg: {reason}")]
    InvalidPoint { alpha: f64, reason: &'static str },
    #[error("alpha = {alpha} deg outside polar range [{min}, {max}]")]
    OutOfRange { alpha: f64, min: f64, max: f64 },
}

/// Lift and drag coefficient pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub cl: f64,
    pub cd: f64,
}

impl Coefficients {
    /// Lift-to-drag ratio.
    pub fn efficiency(&self) -> f64 {
        self.cl / self.cd
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarPoint {
    /// Angle of attack, degrees.
    pub alpha: f64,
    pub cl: f64,
    pub cd: f64,
}

impl PolarPoint {
    pub fn new(alpha: f64, cl: f64, cd: f64) -> Self {
        Self { alpha, cl, cd }
    }

    fn validate(&self) -> Result<(), PolarError> {
        let reason = if !self.alpha.is_finite() || self.alpha.abs() > 90.0 {
            "alpha must be finite with |alpha| <= 90"
        } else if !self.cl.is_finite() {
            "cl must be finite"
        } else if !(self.cd.is_finite() && self.cd > 0.0) {
            "cd must be finite and positive"
        } else {
            return Ok(());
        };
        Err(PolarError::InvalidPoint {
            alpha: self.alpha,
            reason,
        })
    }
}

/// Validated polar: at least three points, strictly increasing in alpha.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarTable {
    section_name: String,
    points: Vec<PolarPoint>,
}

impl PolarTable {
    /// Builds a table from points in any order. Points are sorted by alpha.
    pub fn new(
        section_name: impl Into<String>,
        mut points: Vec<PolarPoint>,
    ) -> Result<Self, PolarError> {
        for p in &points {
            p.validate()?;
        }
        if points.len() < 3 {
            return Err(PolarError::TooFewPoints(points.len()));
        }
        points.sort_by(|a, b| a.alpha.total_cmp(&b.alpha));
        if let Some(w) = points.windows(2).find(|w| w[0].alpha == w[1].alpha) {
            return Err(PolarError::DuplicateAlpha(w[0].alpha));
        }
        Ok(Self {
            section_name: section_name.into(),
            points,
        })
    }

    /// Parses the plain-text polar format.
    ///
    /// Lines starting with `#` are comments; a comment of the form
    /// `# section: NAME` sets the section label. The first non-comment line
    /// may be the header `alpha cl cd`. Data rows hold whitespace-separated
    /// `alpha cl cd`; extra columns are ignored.
    pub fn parse(text: &str) -> Result<Self, PolarError> {
        let mut section_name = String::new();
        let mut points = Vec::new();
        let mut seen_data = false;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some(name) = comment.trim().strip_prefix("section:") {
                    section_name = name.trim().to_string();
                }
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if !seen_data && is_header(&fields) {
                seen_data = true;
                continue;
            }
            seen_data = true;
            if fields.len() < 3 {
                return Err(PolarError::MalformedRow {
                    line: idx + 1,
                    reason: format!("expected 3 columns (alpha cl cd), found {}", fields.len()),
                });
            }
            let mut vals = [0.0; 3];
            for (v, f) in vals.iter_mut().zip(&fields) {
                *v = f.parse().map_err(|_| PolarError::MalformedRow {
                    line: idx + 1,
                    reason: format!("non-numeric field `{f}`"),
                })?;
            }
            points.push(PolarPoint::new(vals[0], vals[1], vals[2]));
        }
        Self::new(section_name, points)
    }

    /// Writes the table in the format accepted by [`PolarTable::parse`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if !self.section_name.is_empty() {
            let _ = writeln!(out, "# section: {}", self.section_name);
        }
        out.push_str("alpha cl cd\n");
        for p in &self.points {
            let _ = writeln!(out, "{:?} {:?} {:?}", p.alpha, p.cl, p.cd);
        }
        out
    }

    pub fn section_name(&self) -> &str {
        &self.section_name
    }

    pub fn points(&self) -> &[PolarPoint] {
        &self.points
    }

    /// Smallest and largest tabulated alpha.
    pub fn alpha_range(&self) -> (f64, f64) {
        (
            self.points[0].alpha,
            self.points[self.points.len() - 1].alpha,
        )
    }

    /// Piecewise-linear lookup of `(cl, cd)`, exact at knots.
    pub fn interpolate(&self, alpha: f64) -> Result<Coefficients, PolarError> {
        let (min, max) = self.alpha_range();
        if !(alpha >= min && alpha <= max) {
            return Err(PolarError::OutOfRange { alpha, min, max });
        }
        let idx = self.points.partition_point(|p| p.alpha < alpha);
        let hi = &self.points[idx];
        if hi.alpha == alpha {
            return Ok(Coefficients {
                cl: hi.cl,
                cd: hi.cd,
            });
        }
        let lo = &self.points[idx - 1];
        let t = (alpha - lo.alpha) / (hi.alpha - lo.alpha);
        Ok(Coefficients {
            cl: lo.cl + t * (hi.cl - lo.cl),
            cd: lo.cd + t * (hi.cd - lo.cd),
        })
    }

    /// `cl / cd` at `alpha`.
    pub fn efficiency(&self, alpha: f64) -> Result<f64, PolarError> {
        self.interpolate(alpha).map(|c| c.efficiency())
    }

    /// Angle of minimum cd within `[lo, hi]`.
    ///
    /// Since cd is piecewise linear the minimum sits on a knot or an end of
    /// the interval. Ties go to the smallest |alpha|, then the smaller alpha.
    pub fn min_drag_alpha(&self, lo: f64, hi: f64) -> Result<f64, PolarError> {
        let inner = self
            .points
            .iter()
            .map(|p| p.alpha)
            .filter(|&a| a > lo && a < hi);
        let mut best: Option<(f64, f64)> = None;
        for a in [lo, hi].into_iter().chain(inner) {
            let cd = self.interpolate(a)?.cd;
            let better = match best {
                None => true,
                Some((ba, bcd)) => {
                    cd < bcd
                        || (cd == bcd && (a.abs() < ba.abs() || (a.abs() == ba.abs() && a < ba)))
                }
            };
            if better {
                best = Some((a, cd));
            }
        }
        Ok(best.map(|(a, _)| a).unwrap_or(lo))
    }
}

fn is_header(fields: &[&str]) -> bool {
    fields.len() >= 3
        && fields[0].eq_ignore_ascii_case("alpha")
        && fields[1].eq_ignore_ascii_case("cl")
        && fields[2].eq_ignore_ascii_case("cd")
}

/// Convenience wrapper for [`PolarTable::parse`].
pub fn parse_polar(text: &str) -> Result<PolarTable, PolarError> {
    PolarTable::parse(text)
}
