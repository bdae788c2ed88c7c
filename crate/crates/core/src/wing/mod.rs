//! Finite-span foil model.
//!
//! 2D section coefficients are multiplied by aspect-ratio correction curves
//! ([`RatioCurve`]) and then knocked down by an interference efficiency that
//! accounts for the struts and fittings the foil is mounted on.
//!
//! The knockdown `eta` is split evenly between lift and drag:
//! `cl <- cl * sqrt(eta)` and `cd <- cd / sqrt(eta)`, so the lift-to-drag
//! ratio drops by exactly the factor `eta`.

mod ratio;
mod study;

use std::sync::Arc;

use thiserror::Error;

use crate::polar::{Coefficients, PolarError, PolarTable};

pub use ratio::{
    builtin_drag_ratio, builtin_lift_ratio, evaluate_ratio, RatioCurve, DRAG_RATIO_COEFFICIENTS,
    LIFT_RATIO_COEFFICIENTS,
};
pub use study::{
    fit_ratio_curve, parse_ar_samples, richardson_extrapolate, ArSample, Extrapolation,
};

/// Interference efficiency used when none is configured.
pub const DEFAULT_INTERFERENCE_EFFICIENCY: f64 = 0.9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WingError {
    #[error("aspect ratio must be positive and finite, got {0}")]
    NonPositiveAspectRatio(f64),
    #[error("invalid foil geometry: {0}")]
    InvalidGeometry(String),
    #[error("interference efficiency must lie in (0, 1], got {0}")]
    InvalidInterference(f64),
    #[error("refinement ratio must exceed 1, got {0}")]
    InvalidRefinementRatio(f64),
    #[error("samples are not monotone: oscillatory convergence has no order")]
    NonMonotoneSequence,
    #[error("two successive samples are equal")]
    ZeroDifference,
    #[error("sample differences do not shrink: no convergence")]
    NoConvergence,
    #[error("asymptote must be non-zero")]
    ZeroAsymptote,
    #[error("rank-deficient ratio fit: {samples} samples for degree {degree}")]
    RankDeficient { samples: usize, degree: usize },
    #[error("{0}")]
    Parse(String),
    #[error(transparent)]
    Polar(#[from] PolarError),
}

/// Lift and drag ratio curves applied to a section polar.
#[derive(Debug, Clone, PartialEq)]
pub struct ArCorrection {
    pub lift: RatioCurve,
    pub drag: RatioCurve,
}

impl ArCorrection {
    /// No aspect-ratio penalty at all.
    pub fn identity() -> Self {
        Self {
            lift: RatioCurve::identity(),
            drag: RatioCurve::identity(),
        }
    }
}

impl Default for ArCorrection {
    /// The NACA 4412 curves.
    fn default() -> Self {
        Self {
            lift: builtin_lift_ratio(),
            drag: builtin_drag_ratio(),
        }
    }
}

/// One foil assembly: `element_count` identical surfaces sharing a section,
/// chord, span and pitch setting.
///
/// An assembly with `element_count == 0` has no area and produces no force;
/// it stands in for "no foil fitted".
#[derive(Debug, Clone, PartialEq)]
pub struct FoilGeometry {
    /// m
    pub chord: f64,
    /// Span of a single element, m.
    pub span: f64,
    pub element_count: u32,
    /// Longitudinal position relative to the centre of gravity, m, positive forward.
    pub x_position: f64,
    /// Pitch-angle limits, degrees.
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub section: Arc<PolarTable>,
}

impl FoilGeometry {
    pub fn new(
        chord: f64,
        span: f64,
        element_count: u32,
        x_position: f64,
        alpha_limits: (f64, f64),
        section: Arc<PolarTable>,
    ) -> Result<Self, WingError> {
        let g = Self {
            chord,
            span,
            element_count,
            x_position,
            alpha_min: alpha_limits.0,
            alpha_max: alpha_limits.1,
            section,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), WingError> {
        let bad = |m: String| Err(WingError::InvalidGeometry(m));
        if !(self.chord > 0.0 && self.chord.is_finite()) {
            return bad(format!("chord must be positive, got {}", self.chord));
        }
        if !(self.span > 0.0 && self.span.is_finite()) {
            return bad(format!("span must be positive, got {}", self.span));
        }
        if !self.x_position.is_finite() {
            return bad("x_position must be finite".into());
        }
        if !(self.alpha_min < self.alpha_max) {
            return bad(format!(
                "alpha_min ({}) must be below alpha_max ({})",
                self.alpha_min, self.alpha_max
            ));
        }
        let (lo, hi) = self.section.alpha_range();
        if self.alpha_min < lo || self.alpha_max > hi {
            return bad(format!(
                "pitch limits [{}, {}] exceed the polar range [{lo}, {hi}]",
                self.alpha_min, self.alpha_max
            ));
        }
        Ok(())
    }

    /// Span over chord of one element.
    pub fn aspect_ratio(&self) -> f64 {
        self.span / self.chord
    }

    /// Planform area of the whole assembly, m^2.
    pub fn area(&self) -> f64 {
        self.chord * self.span * f64::from(self.element_count)
    }
}

fn check_interference(eta: f64) -> Result<(), WingError> {
    if eta > 0.0 && eta <= 1.0 {
        Ok(())
    } else {
        Err(WingError::InvalidInterference(eta))
    }
}

/// Finite-span coefficients of one element at `alpha` (degrees).
///
/// `alpha` is expected inside the geometry's pitch limits; only the polar
/// range is enforced.
pub fn corrected_coefficients(
    geom: &FoilGeometry,
    correction: &ArCorrection,
    alpha: f64,
    interference_efficiency: f64,
) -> Result<Coefficients, WingError> {
    check_interference(interference_efficiency)?;
    let ar = geom.aspect_ratio();
    let lift_ratio = correction.lift.evaluate(ar)?;
    let drag_ratio = correction.drag.evaluate(ar)?;
    let split = interference_efficiency.sqrt();
    let raw = geom.section.interpolate(alpha)?;
    Ok(Coefficients {
        cl: raw.cl * lift_ratio * split,
        cd: raw.cd * drag_ratio / split,
    })
}

/// Lift and drag of a foil assembly, N.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FoilForces {
    pub lift: f64,
    pub drag: f64,
}

/// Forces on the whole assembly at `alpha` (degrees) and `speed` (m/s).
pub fn foil_forces(
    geom: &FoilGeometry,
    correction: &ArCorrection,
    alpha: f64,
    speed: f64,
    rho: f64,
    interference_efficiency: f64,
) -> Result<FoilForces, WingError> {
    if !(speed >= 0.0) || !(rho > 0.0) {
        return Err(WingError::InvalidGeometry(format!(
            "need speed >= 0 and rho > 0, got speed = {speed}, rho = {rho}"
        )));
    }
    let c = corrected_coefficients(geom, correction, alpha, interference_efficiency)?;
    let qs = 0.5 * rho * speed * speed * geom.area();
    Ok(FoilForces {
        lift: qs * c.cl,
        drag: qs * c.cd,
    })
}

/// A foil assembly frozen at one speed: the AR ratios and dynamic pressure
/// are evaluated once so repeated angle lookups only touch the polar.
#[derive(Debug, Clone)]
pub(crate) struct FoilAtSpeed<'a> {
    geom: &'a FoilGeometry,
    lift_scale: f64,
    drag_scale: f64,
}

impl<'a> FoilAtSpeed<'a> {
    pub fn new(
        geom: &'a FoilGeometry,
        correction: &ArCorrection,
        speed: f64,
        rho: f64,
        interference_efficiency: f64,
    ) -> Result<Self, WingError> {
        check_interference(interference_efficiency)?;
        let ar = geom.aspect_ratio();
        let split = interference_efficiency.sqrt();
        let qs = 0.5 * rho * speed * speed * geom.area();
        Ok(Self {
            geom,
            lift_scale: qs * correction.lift.evaluate(ar)? * split,
            drag_scale: qs * correction.drag.evaluate(ar)? / split,
        })
    }

    pub fn geometry(&self) -> &FoilGeometry {
        self.geom
    }

    pub fn lift(&self, alpha: f64) -> Result<f64, WingError> {
        Ok(self.lift_scale * self.geom.section.interpolate(alpha)?.cl)
    }

    pub fn drag(&self, alpha: f64) -> Result<f64, WingError> {
        Ok(self.drag_scale * self.geom.section.interpolate(alpha)?.cd)
    }

    /// Minimum-drag pitch inside the geometry limits.
    pub fn min_drag_alpha(&self) -> Result<f64, WingError> {
        Ok(self
            .geom
            .section
            .min_drag_alpha(self.geom.alpha_min, self.geom.alpha_max)?)
    }
}
