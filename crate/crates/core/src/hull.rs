//! Bare-hull forces at fixed horizontal attitude and their quadratic
//! response surfaces over speed and displacement.
//!
//! Each surface is `f(V, D) = a0 + a1 V + a2 D + a3 V^2 + a4 V D + a5 D^2`
//! with `V` in m/s and `D` in kg. Moments are about the centre of gravity,
//! positive bow-up; vertical force is positive up and excludes hydrostatics.

use std::fmt::Write as _;

use thiserror::Error;

use crate::lsq;
use crate::units::{GRAVITY, KNOT};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HullError {
    #[error("need at least 6 samples for a quadratic surface, got {0}")]
    TooFewSamples(usize),
    #[error("samples do not span speed and displacement well enough for a quadratic fit")]
    RankDeficient,
    #[error("speed {speed} m/s outside fitted range [{min}, {max}]")]
    SpeedOutOfDomain { speed: f64, min: f64, max: f64 },
    #[error("displacement {displacement} kg outside [0, {max}]")]
    DisplacementOutOfDomain { displacement: f64, max: f64 },
    #[error("invalid hull sample: {0}")]
    InvalidSample(String),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// One bare-hull CFD result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HullSample {
    /// m/s
    pub speed: f64,
    /// kg
    pub displacement: f64,
    /// Resistance, N, positive aft.
    pub rx: f64,
    /// Vertical force, N, positive up.
    pub fz: f64,
    /// Pitch moment about the CG, N m, positive bow-up.
    pub my: f64,
}

impl HullSample {
    fn validate(&self) -> Result<(), HullError> {
        let all_finite = [self.speed, self.displacement, self.rx, self.fz, self.my]
            .iter()
            .all(|v| v.is_finite());
        if !all_finite || self.speed < 0.0 || self.displacement < 0.0 {
            return Err(HullError::InvalidSample(format!("{self:?}")));
        }
        Ok(())
    }
}

/// Bounding box of the fitted samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitDomain {
    pub speed_min: f64,
    pub speed_max: f64,
    pub displacement_min: f64,
    pub displacement_max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HullSurface {
    pub coefficients: [f64; 6],
    pub domain: FitDomain,
    pub rms_residual: f64,
}

impl HullSurface {
    /// Raw polynomial value, with no domain handling.
    pub fn polynomial(&self, speed: f64, displacement: f64) -> f64 {
        let b = basis(speed, displacement);
        self.coefficients.iter().zip(b).map(|(a, x)| a * x).sum()
    }
}

fn basis(v: f64, d: f64) -> [f64; 6] {
    [1.0, v, d, v * v, v * d, d * d]
}

/// Hull forces at one operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HullForces {
    pub rx: f64,
    pub fz: f64,
    pub my: f64,
    /// Displacement lay below the fitted range and the polynomials were extrapolated.
    pub extrapolated: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HullSurfaceSet {
    pub rx: HullSurface,
    pub fz: HullSurface,
    pub my: HullSurface,
    /// Waterline length, m.
    pub lwl: f64,
}

impl HullSurfaceSet {
    pub fn domain(&self) -> FitDomain {
        self.rx.domain
    }

    /// Forces at `speed` (m/s) and `displacement` (kg).
    ///
    /// Zero displacement means the hull is clear of the water and all forces
    /// vanish. Displacements between zero and the fitted minimum extrapolate
    /// and are flagged. Speeds outside the fitted range and displacements
    /// above it are errors.
    pub fn evaluate(&self, speed: f64, displacement: f64) -> Result<HullForces, HullError> {
        let d = self.domain();
        if !(speed >= d.speed_min && speed <= d.speed_max) {
            return Err(HullError::SpeedOutOfDomain {
                speed,
                min: d.speed_min,
                max: d.speed_max,
            });
        }
        if !(displacement >= 0.0 && displacement <= d.displacement_max) {
            return Err(HullError::DisplacementOutOfDomain {
                displacement,
                max: d.displacement_max,
            });
        }
        if displacement == 0.0 {
            return Ok(HullForces {
                rx: 0.0,
                fz: 0.0,
                my: 0.0,
                extrapolated: false,
            });
        }
        Ok(HullForces {
            rx: self.rx.polynomial(speed, displacement),
            fz: self.fz.polynomial(speed, displacement),
            my: self.my.polynomial(speed, displacement),
            extrapolated: displacement < d.displacement_min,
        })
    }

    /// `V / sqrt(g L)` on the waterline length.
    pub fn froude_number(&self, speed: f64) -> f64 {
        speed / (GRAVITY * self.lwl).sqrt()
    }

    /// Three coefficient lines (six coefficients, then the fit rms), then the
    /// domain line `v_min v_max d_min d_max lwl`. Speeds in m/s.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("# f(V,D) = a0 + a1 V + a2 D + a3 V^2 + a4 V D + a5 D^2; V m/s, D kg\n");
        out.push_str("# rows rx, fz, my: a0 a1 a2 a3 a4 a5 rms\n");
        for s in [&self.rx, &self.fz, &self.my] {
            let cells: Vec<String> = s.coefficients.iter().map(|c| format!("{c:?}")).collect();
            let _ = writeln!(out, "{} {:?}", cells.join(" "), s.rms_residual);
        }
        let d = self.domain();
        out.push_str("# domain: v_min v_max d_min d_max lwl\n");
        let _ = writeln!(
            out,
            "{:?} {:?} {:?} {:?} {:?}",
            d.speed_min, d.speed_max, d.displacement_min, d.displacement_max, self.lwl
        );
        out
    }

    pub fn parse(text: &str) -> Result<Self, HullError> {
        let mut rows = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            rows.push((idx + 1, parse_numbers(line, idx + 1)?));
        }
        if rows.len() != 4 {
            return Err(HullError::Parse {
                line: rows.last().map_or(0, |r| r.0),
                reason: format!(
                    "expected 3 coefficient lines and 1 domain line, found {}",
                    rows.len()
                ),
            });
        }
        let (dline, dom) = &rows[3];
        if dom.len() != 5 {
            return Err(HullError::Parse {
                line: *dline,
                reason: "domain line needs v_min v_max d_min d_max lwl".into(),
            });
        }
        let domain = FitDomain {
            speed_min: dom[0],
            speed_max: dom[1],
            displacement_min: dom[2],
            displacement_max: dom[3],
        };
        if !(domain.speed_min < domain.speed_max
            && domain.displacement_min < domain.displacement_max
            && dom[4] > 0.0)
        {
            return Err(HullError::Parse {
                line: *dline,
                reason: "degenerate domain or non-positive lwl".into(),
            });
        }
        let mut surfaces = Vec::with_capacity(3);
        for (line, vals) in &rows[..3] {
            if vals.len() != 6 && vals.len() != 7 {
                return Err(HullError::Parse {
                    line: *line,
                    reason: format!(
                        "expected 6 coefficients (+ optional rms), found {}",
                        vals.len()
                    ),
                });
            }
            let mut coefficients = [0.0; 6];
            coefficients.copy_from_slice(&vals[..6]);
            surfaces.push(HullSurface {
                coefficients,
                domain,
                rms_residual: vals.get(6).copied().unwrap_or(0.0),
            });
        }
        let [rx, fz, my]: [HullSurface; 3] =
            surfaces.try_into().expect("exactly three coefficient rows");
        Ok(Self {
            rx,
            fz,
            my,
            lwl: dom[4],
        })
    }
}

fn parse_numbers(line: &str, line_no: usize) -> Result<Vec<f64>, HullError> {
    line.split_whitespace()
        .map(|f| {
            f.parse::<f64>().map_err(|_| HullError::Parse {
                line: line_no,
                reason: format!("non-numeric field `{f}`"),
            })
        })
        .collect()
}

/// Least-squares quadratic surfaces for rx, fz and my.
pub fn fit_surfaces(samples: &[HullSample], lwl: f64) -> Result<HullSurfaceSet, HullError> {
    if samples.len() < 6 {
        return Err(HullError::TooFewSamples(samples.len()));
    }
    if !(lwl > 0.0 && lwl.is_finite()) {
        return Err(HullError::InvalidSample(format!(
            "lwl must be positive, got {lwl}"
        )));
    }
    for s in samples {
        s.validate()?;
    }
    let domain = FitDomain {
        speed_min: samples
            .iter()
            .map(|s| s.speed)
            .fold(f64::INFINITY, f64::min),
        speed_max: samples
            .iter()
            .map(|s| s.speed)
            .fold(f64::NEG_INFINITY, f64::max),
        displacement_min: samples
            .iter()
            .map(|s| s.displacement)
            .fold(f64::INFINITY, f64::min),
        displacement_max: samples
            .iter()
            .map(|s| s.displacement)
            .fold(f64::NEG_INFINITY, f64::max),
    };
    if !(domain.speed_min < domain.speed_max && domain.displacement_min < domain.displacement_max) {
        return Err(HullError::RankDeficient);
    }
    let rows: Vec<Vec<f64>> = samples
        .iter()
        .map(|s| basis(s.speed, s.displacement).to_vec())
        .collect();
    let fit = |pick: fn(&HullSample) -> f64| -> Result<HullSurface, HullError> {
        let rhs: Vec<f64> = samples.iter().map(pick).collect();
        let sol = lsq::solve(&rows, &rhs).ok_or(HullError::RankDeficient)?;
        let mut coefficients = [0.0; 6];
        coefficients.copy_from_slice(&sol.coefficients);
        Ok(HullSurface {
            coefficients,
            domain,
            rms_residual: sol.rms_residual,
        })
    };
    Ok(HullSurfaceSet {
        rx: fit(|s| s.rx)?,
        fz: fit(|s| s.fz)?,
        my: fit(|s| s.my)?,
        lwl,
    })
}

/// Parses the hull sample format: `#` comments, optional header
/// `speed_kn displacement_kg rx_n fz_n my_nm`, then five columns per row.
/// Speeds are read in knots and stored in m/s.
pub fn parse_hull_samples(text: &str) -> Result<Vec<HullSample>, HullError> {
    let mut out = Vec::new();
    let mut seen_data = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !seen_data && line.starts_with("speed_kn") {
            seen_data = true;
            continue;
        }
        seen_data = true;
        let vals = parse_numbers(line, idx + 1)?;
        if vals.len() != 5 {
            return Err(HullError::Parse {
                line: idx + 1,
                reason: format!("expected 5 columns, found {}", vals.len()),
            });
        }
        let s = HullSample {
            speed: vals[0] * KNOT,
            displacement: vals[1],
            rx: vals[2],
            fz: vals[3],
            my: vals[4],
        };
        s.validate().map_err(|e| HullError::Parse {
            line: idx + 1,
            reason: e.to_string(),
        })?;
        out.push(s);
    }
    Ok(out)
}
