//! Vertical-force and pitch-moment equilibrium of a foiling yacht at one speed.
//!
//! The yacht carries a main foil at the centre of gravity (pure lift, no
//! pitch moment) and a rudder foil aft of it. At each speed:
//!
//! 1. Hull forces are read from the response surfaces at the working
//!    residual displacement, hull fixed level.
//! 2. The rudder pitch is chosen so its lift cancels the hull pitch moment.
//! 3. The main-foil pitch is chosen so the foils carry the part of the weight
//!    that buoyancy no longer carries at the target displacement.
//! 4. If the main foil cannot lift that much inside its pitch limits it is
//!    pinned at the limit and the residual displacement is re-solved from the
//!    vertical balance instead.
//! 5. Foil drags at the final angles are added to the hull resistance.
//!
//! Steps 1 to 4 repeat until the residual displacement stops moving, since
//! the rudder lift enters the vertical balance and the hull moment depends
//! on displacement. Lift acts vertically and drag horizontally regardless of
//! pitch (small-angle model).

use std::fmt;
use std::sync::Arc;

use bitflags::bitflags;
use thiserror::Error;

use crate::hull::{HullError, HullSurfaceSet};
use crate::roots::{Bisection, RootSearch};
use crate::units::{GRAVITY, SEA_WATER_DENSITY};
use crate::wing::{
    ArCorrection, FoilAtSpeed, FoilGeometry, WingError, DEFAULT_INTERFERENCE_EFFICIENCY,
};

bitflags! {
    /// Conditions attached to a solved state.
    #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
    pub struct StateFlags: u8 {
        const MAIN_FOIL_SATURATED = 1;
        const RUDDER_SATURATED = 1 << 1;
        const EXTRAPOLATED = 1 << 2;
        const NOT_CONVERGED = 1 << 3;
        /// Set by sweeps on states recovered from a `NoVerticalBalance` error.
        const NO_VERTICAL_BALANCE = 1 << 4;
    }
}

impl StateFlags {
    /// Names in declaration order, e.g. `MainFoilSaturated|Extrapolated`.
    pub fn label(&self) -> String {
        const NAMES: [(StateFlags, &str); 5] = [
            (StateFlags::MAIN_FOIL_SATURATED, "MainFoilSaturated"),
            (StateFlags::RUDDER_SATURATED, "RudderSaturated"),
            (StateFlags::EXTRAPOLATED, "Extrapolated"),
            (StateFlags::NOT_CONVERGED, "NotConverged"),
            (StateFlags::NO_VERTICAL_BALANCE, "NoVerticalBalance"),
        ];
        NAMES
            .iter()
            .filter(|(f, _)| self.contains(*f))
            .map(|(_, n)| *n)
            .collect::<Vec<_>>()
            .join("|")
    }

    /// The state is unusable for comparisons.
    pub fn is_failure(&self) -> bool {
        self.intersects(StateFlags::NOT_CONVERGED | StateFlags::NO_VERTICAL_BALANCE)
    }
}

impl fmt::Display for StateFlags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverTolerances {
    /// Bracket width on pitch angles, degrees.
    pub angle_deg: f64,
    /// Bracket width on displacement and outer-loop convergence, kg.
    pub displacement_kg: f64,
    /// Vertical force residual, N.
    pub force_n: f64,
    /// Pitch moment residual, N m.
    pub moment_nm: f64,
    pub max_outer_iterations: usize,
}

impl Default for SolverTolerances {
    fn default() -> Self {
        Self {
            angle_deg: 1e-3,
            displacement_kg: 0.01,
            force_n: 0.5,
            moment_nm: 0.5,
            max_outer_iterations: 50,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct YachtConfig {
    /// Full displacement of the yacht, kg.
    pub total_displacement: f64,
    /// Residual displacement to aim for, kg; 0 means fully foiling.
    pub target_displacement: f64,
    /// Must sit at the centre of gravity (`x_position == 0`).
    pub main_foil: FoilGeometry,
    /// Must sit away from the centre of gravity, normally aft (`x_position < 0`).
    pub rudder_foil: FoilGeometry,
    /// kg/m^3
    pub water_density: f64,
    /// m/s^2
    pub gravity: f64,
    pub interference_efficiency: f64,
    pub correction: ArCorrection,
    pub surfaces: Arc<HullSurfaceSet>,
}

impl YachtConfig {
    /// Config with sea water, standard gravity, the NACA 4412 ratio curves
    /// and 0.9 interference efficiency.
    pub fn new(
        surfaces: Arc<HullSurfaceSet>,
        main_foil: FoilGeometry,
        rudder_foil: FoilGeometry,
        total_displacement: f64,
        target_displacement: f64,
    ) -> Self {
        Self {
            total_displacement,
            target_displacement,
            main_foil,
            rudder_foil,
            water_density: SEA_WATER_DENSITY,
            gravity: GRAVITY,
            interference_efficiency: DEFAULT_INTERFERENCE_EFFICIENCY,
            correction: ArCorrection::default(),
            surfaces,
        }
    }

    pub fn validate(&self) -> Result<(), EquilibriumError> {
        let bad = |m: String| Err(EquilibriumError::InvalidConfig(m));
        if !(self.target_displacement >= 0.0
            && self.target_displacement <= self.total_displacement
            && self.total_displacement.is_finite())
        {
            return bad(format!(
                "need 0 <= target ({}) <= total ({}) displacement",
                self.target_displacement, self.total_displacement
            ));
        }
        if self.total_displacement > self.surfaces.domain().displacement_max {
            return bad(format!(
                "total displacement {} kg exceeds the hull data range (max {} kg)",
                self.total_displacement,
                self.surfaces.domain().displacement_max
            ));
        }
        if self.main_foil.x_position != 0.0 {
            return bad("main foil must sit at the centre of gravity (x = 0)".into());
        }
        if self.rudder_foil.x_position == 0.0 {
            return bad("rudder foil needs a non-zero lever arm".into());
        }
        if !(self.water_density > 0.0 && self.gravity > 0.0) {
            return bad("water density and gravity must be positive".into());
        }
        self.main_foil.validate()?;
        self.rudder_foil.validate()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumState {
    /// m/s
    pub speed: f64,
    /// Pitch angles, degrees.
    pub alpha_main: f64,
    pub alpha_rudder: f64,
    /// kg
    pub residual_displacement: f64,
    /// N
    pub hull_rx: f64,
    pub main_drag: f64,
    pub rudder_drag: f64,
    pub total_resistance: f64,
    pub main_lift: f64,
    pub rudder_lift: f64,
    /// Weight not carried by buoyancy, minus hull and foil vertical forces, N.
    pub vertical_residual: f64,
    /// Rudder moment plus hull moment, N m.
    pub moment_residual: f64,
    pub flags: StateFlags,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EquilibriumError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Hull(#[from] HullError),
    #[error(transparent)]
    Foil(#[from] WingError),
    /// Even with the foils at their limits no displacement in
    /// `[target, total]` balances the vertical forces. The best-effort state
    /// is attached.
    #[error("no vertical balance at {:.4} m/s: residual {:.3} N", .0.speed, .0.vertical_residual)]
    NoVerticalBalance(Box<EquilibriumState>),
}

struct RudderStep {
    alpha: f64,
    lift: f64,
    saturated: bool,
}

struct MainStep {
    alpha: f64,
    lift: f64,
    displacement: f64,
    saturated: bool,
    balanced: bool,
}

struct Solver<'a> {
    cfg: &'a YachtConfig,
    speed: f64,
    tol: SolverTolerances,
    main: FoilAtSpeed<'a>,
    rudder: FoilAtSpeed<'a>,
}

impl<'a> Solver<'a> {
    fn weight_unsupported(&self, displacement: f64) -> f64 {
        self.cfg.gravity * (self.cfg.total_displacement - displacement)
    }

    fn rudder_step(&self, hull_moment: f64) -> Result<RudderStep, EquilibriumError> {
        let g = self.rudder.geometry();
        let arm = g.x_position;
        let search = Bisection::new(self.tol.angle_deg, self.tol.moment_nm);
        let outcome = search.solve(g.alpha_min, g.alpha_max, |a| {
            Ok::<_, WingError>(self.rudder.lift(a)? * arm + hull_moment)
        })?;
        let (alpha, saturated) = match outcome {
            RootSearch::Found(a) => (a, false),
            RootSearch::Flat => (self.rudder.min_drag_alpha()?, false),
            RootSearch::NoSignChange { f_lo, f_hi } => {
                let a = if f_lo.abs() < f_hi.abs() {
                    g.alpha_min
                } else if f_hi.abs() < f_lo.abs() {
                    g.alpha_max
                } else {
                    self.rudder.min_drag_alpha()?
                };
                (a, true)
            }
        };
        Ok(RudderStep {
            alpha,
            lift: self.rudder.lift(alpha)?,
            saturated,
        })
    }

    fn main_step(&self, rudder_lift: f64) -> Result<MainStep, EquilibriumError> {
        let cfg = self.cfg;
        let g = self.main.geometry();
        let target = cfg.target_displacement;
        let hull = cfg.surfaces.evaluate(self.speed, target)?;
        let required = self.weight_unsupported(target) - hull.fz - rudder_lift;

        let search = Bisection::new(self.tol.angle_deg, self.tol.force_n);
        let outcome = search.solve(g.alpha_min, g.alpha_max, |a| {
            Ok::<_, WingError>(self.main.lift(a)? - required)
        })?;
        let pinned = match outcome {
            RootSearch::Found(a) => {
                return Ok(MainStep {
                    alpha: a,
                    lift: self.main.lift(a)?,
                    displacement: target,
                    saturated: false,
                    balanced: true,
                })
            }
            RootSearch::Flat => {
                let a = self.main.min_drag_alpha()?;
                return Ok(MainStep {
                    alpha: a,
                    lift: self.main.lift(a)?,
                    displacement: target,
                    saturated: false,
                    balanced: true,
                });
            }
            // Short of lift: pin at whichever limit lifts more.
            RootSearch::NoSignChange { f_lo, f_hi } if f_lo < 0.0 => {
                if f_hi >= f_lo {
                    g.alpha_max
                } else {
                    g.alpha_min
                }
            }
            // Too much lift even at the lower-lifting limit.
            RootSearch::NoSignChange { f_lo, f_hi } => {
                if f_lo <= f_hi {
                    g.alpha_min
                } else {
                    g.alpha_max
                }
            }
        };

        let lift = self.main.lift(pinned)?;
        let balance = |d: f64| -> Result<f64, EquilibriumError> {
            let hull = cfg.surfaces.evaluate(self.speed, d)?;
            Ok(self.weight_unsupported(d) - hull.fz - rudder_lift - lift)
        };
        let search = Bisection::new(self.tol.displacement_kg, self.tol.force_n);
        let total = cfg.total_displacement;
        let (displacement, balanced) = match search.solve(target, total, balance)? {
            RootSearch::Found(d) => (d, true),
            RootSearch::Flat => (target, true),
            RootSearch::NoSignChange { f_lo, f_hi } => (
                if f_lo.abs() < f_hi.abs() {
                    target
                } else {
                    total
                },
                false,
            ),
        };
        Ok(MainStep {
            alpha: pinned,
            lift,
            displacement,
            saturated: true,
            balanced,
        })
    }

    fn run(&self) -> Result<EquilibriumState, EquilibriumError> {
        let cfg = self.cfg;
        let mut displacement = cfg.target_displacement;
        let mut converged = false;
        let mut iterations = 0;
        let mut last = None;
        for _ in 0..self.tol.max_outer_iterations.max(1) {
            iterations += 1;
            let hull = cfg.surfaces.evaluate(self.speed, displacement)?;
            let rudder = self.rudder_step(hull.my)?;
            let main = self.main_step(rudder.lift)?;
            let change = (main.displacement - displacement).abs();
            displacement = main.displacement;
            last = Some((rudder, main));
            if change < self.tol.displacement_kg {
                converged = true;
                break;
            }
        }
        let (rudder, main) = last.expect("at least one outer iteration");

        let hull = cfg.surfaces.evaluate(self.speed, displacement)?;
        let main_drag = self.main.drag(main.alpha)?;
        let rudder_drag = self.rudder.drag(rudder.alpha)?;
        let vertical_residual =
            self.weight_unsupported(displacement) - hull.fz - rudder.lift - main.lift;
        let moment_residual = rudder.lift * cfg.rudder_foil.x_position + hull.my;

        let mut flags = StateFlags::empty();
        flags.set(StateFlags::MAIN_FOIL_SATURATED, main.saturated);
        flags.set(StateFlags::RUDDER_SATURATED, rudder.saturated);
        flags.set(StateFlags::EXTRAPOLATED, hull.extrapolated);
        let closed = vertical_residual.abs() <= self.tol.force_n
            && (rudder.saturated || moment_residual.abs() <= self.tol.moment_nm);
        if main.balanced && (!converged || !closed) {
            flags.insert(StateFlags::NOT_CONVERGED);
        }

        let state = EquilibriumState {
            speed: self.speed,
            alpha_main: main.alpha,
            alpha_rudder: rudder.alpha,
            residual_displacement: displacement,
            hull_rx: hull.rx,
            main_drag,
            rudder_drag,
            total_resistance: hull.rx + main_drag + rudder_drag,
            main_lift: main.lift,
            rudder_lift: rudder.lift,
            vertical_residual,
            moment_residual,
            flags,
            iterations,
        };
        if main.balanced {
            Ok(state)
        } else {
            Err(EquilibriumError::NoVerticalBalance(Box::new(state)))
        }
    }
}

/// Solves the foil trim at `speed` (m/s).
///
/// Hitting the outer iteration cap, or ending with residuals above
/// tolerance, returns the state with [`StateFlags::NOT_CONVERGED`] set rather
/// than an error.
pub fn solve_equilibrium(
    config: &YachtConfig,
    speed: f64,
    tolerances: &SolverTolerances,
) -> Result<EquilibriumState, EquilibriumError> {
    config.validate()?;
    // Speed domain check up front so it is reported as such.
    config.surfaces.evaluate(speed, config.total_displacement)?;
    let solver = Solver {
        cfg: config,
        speed,
        tol: *tolerances,
        main: FoilAtSpeed::new(
            &config.main_foil,
            &config.correction,
            speed,
            config.water_density,
            config.interference_efficiency,
        )?,
        rudder: FoilAtSpeed::new(
            &config.rudder_foil,
            &config.correction,
            speed,
            config.water_density,
            config.interference_efficiency,
        )?,
    };
    solver.run()
}

/// Resistance of the hull without foils at full displacement, N.
pub fn bare_hull_resistance(config: &YachtConfig, speed: f64) -> Result<f64, EquilibriumError> {
    Ok(config
        .surfaces
        .evaluate(speed, config.total_displacement)?
        .rx)
}
