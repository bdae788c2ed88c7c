//! Resistance prediction for a sailing yacht fitted with lifting foils.
//!
//! The crate chains four pieces:
//!
//! * [`polar`]: 2D section polars (cl, cd versus angle of attack).
//! * [`wing`]: finite-aspect-ratio correction of those polars, foil forces,
//!   and the convergence-study tools used to derive the correction.
//! * [`hull`]: quadratic response surfaces for bare-hull resistance,
//!   vertical force and pitch moment over speed and displacement.
//! * [`equilibrium`] and [`sweep`]: foil trim at one speed, and resistance
//!   curves with and without foils over a speed range.
//!
//! Speeds are m/s and angles degrees throughout the API; the text formats
//! and the command-line tool take speeds in knots.
//!
//! ```
//! use foilvpp::wing::{builtin_lift_ratio, richardson_extrapolate};
//!
//! let e = richardson_extrapolate(3034.37, 2539.55, 2175.41, 2.0).unwrap();
//! assert!((e.order - 0.44).abs() < 0.01);
//! let cl_ratio = builtin_lift_ratio().evaluate(3.0).unwrap();
//! assert!(cl_ratio > 0.5 && cl_ratio < 0.7);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN.

pub mod equilibrium;
pub mod hull;
pub mod polar;
pub mod sweep;
pub mod units;
pub mod wing;

mod lsq;
mod roots;

pub use equilibrium::{
    bare_hull_resistance, solve_equilibrium, EquilibriumError, EquilibriumState, SolverTolerances,
    StateFlags, YachtConfig,
};
pub use hull::{fit_surfaces, HullSample, HullSurface, HullSurfaceSet};
pub use polar::{parse_polar, PolarPoint, PolarTable};
pub use sweep::{compare, crossover, run_sweep, SweepRequest, SweepResult};
pub use wing::{ArCorrection, FoilGeometry, RatioCurve};

// The guide under book/ is compiled and run as doctests.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $file:literal) => {
            #[doc = include_str!(concat!("../../../book/src/", $file))]
            mod $name {}
        };
    }

    chapter!(introduction, "introduction.md");
    chapter!(polars, "polars.md");
    chapter!(finite_wing, "finite-wing.md");
    chapter!(convergence, "convergence.md");
    chapter!(hull, "hull.md");
    chapter!(equilibrium, "equilibrium.md");
    chapter!(sweeps, "sweeps.md");
    chapter!(cli, "cli.md");
}
