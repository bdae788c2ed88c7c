//! Synthetic fixtures and closed-form oracles shared by the integration tests.
//!
//! The oracles evaluate ratio curves, foil forces and the trim solution in
//! closed form for a linear-lift polar (`cl = 0.1 alpha`,
//! `cd = 0.008 + 1e-4 alpha^2`) and constant hull fz/my. They do not call
//! into the crate's evaluation paths.

#![allow(dead_code)]

use std::sync::Arc;

use foilvpp::hull::{fit_surfaces, HullSample, HullSurfaceSet};
use foilvpp::polar::{PolarPoint, PolarTable};
use foilvpp::units::KNOT;
use foilvpp::wing::FoilGeometry;
use foilvpp::YachtConfig;

pub const G: f64 = 9.80665;
pub const RHO: f64 = 1025.0;
pub const ETA: f64 = 0.9;
pub const CD0: f64 = 0.008;
pub const CD2: f64 = 1e-4;
pub const LIFT_SLOPE: f64 = 0.1;

pub const DRAG_RATIO: [f64; 6] = [-0.110, 217.261, -2742.862, 16343.289, -51940.417, 83982.370];
pub const LIFT_RATIO: [f64; 6] = [-0.239, -35.349, 340.353, -1461.250, 2927.150, -2191.410];

pub fn ratio(coeffs: &[f64], ar: f64) -> f64 {
    1.0 + coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| c / ar.powi(k as i32 + 1))
        .sum::<f64>()
}

/// Linear-lift polar tabulated every `step` degrees on [-15, 15].
pub fn linear_polar(step: f64) -> Arc<PolarTable> {
    let n = (30.0 / step).round() as i32;
    let pts = (0..=n)
        .map(|i| {
            let a = -15.0 + i as f64 * step;
            PolarPoint::new(a, LIFT_SLOPE * a, CD0 + CD2 * a * a)
        })
        .collect();
    Arc::new(PolarTable::new("linear", pts).unwrap())
}

/// Hull data on a (speed, displacement) grid with
/// `rx = 20 + 30 V^2 + c4 V D` and constant fz, my.
pub fn constant_force_hull(c4: f64, fz: f64, my: f64, disp: [f64; 3]) -> Arc<HullSurfaceSet> {
    let mut samples = Vec::new();
    for kn in [2.0, 4.0, 6.0, 8.0, 10.0, 12.0] {
        let v = kn * KNOT;
        for d in disp {
            samples.push(HullSample {
                speed: v,
                displacement: d,
                rx: 20.0 + 30.0 * v * v + c4 * v * d,
                fz,
                my,
            });
        }
    }
    Arc::new(fit_surfaces(&samples, 8.5).unwrap())
}

pub fn bare_rx(c4: f64, v: f64, d: f64) -> f64 {
    20.0 + 30.0 * v * v + c4 * v * d
}

/// Planform and placement of one fixture foil.
#[derive(Debug, Clone, Copy)]
pub struct Foil {
    pub chord: f64,
    pub span: f64,
    pub elements: u32,
    pub x: f64,
    pub alpha_min: f64,
    pub alpha_max: f64,
}

impl Foil {
    pub fn area(&self) -> f64 {
        self.chord * self.span * self.elements as f64
    }

    fn ar(&self) -> f64 {
        self.span / self.chord
    }

    /// Lift per degree of pitch at dynamic pressure `q`.
    pub fn lift_per_deg(&self, q: f64) -> f64 {
        q * self.area() * ratio(&LIFT_RATIO, self.ar()) * ETA.sqrt() * LIFT_SLOPE
    }

    pub fn drag(&self, q: f64, alpha: f64) -> f64 {
        q * self.area() * ratio(&DRAG_RATIO, self.ar()) / ETA.sqrt() * (CD0 + CD2 * alpha * alpha)
    }

    pub fn geometry(&self, polar: Arc<PolarTable>) -> FoilGeometry {
        FoilGeometry::new(
            self.chord,
            self.span,
            self.elements,
            self.x,
            (self.alpha_min, self.alpha_max),
            polar,
        )
        .unwrap()
    }
}

/// Constant-force trim problem.
#[derive(Debug, Clone, Copy)]
pub struct Fixture {
    pub total: f64,
    pub target: f64,
    pub fz: f64,
    pub my: f64,
    pub c4: f64,
    pub main: Foil,
    pub rudder: Foil,
}

/// Closed-form trim at one speed.
#[derive(Debug, Clone, Copy)]
pub struct Trim {
    pub alpha_main: f64,
    pub alpha_rudder: f64,
    pub displacement: f64,
    pub foil_drag: f64,
    pub total: f64,
    pub bare: f64,
}

impl Trim {
    pub fn delta_percent(&self) -> f64 {
        100.0 * (self.total - self.bare) / self.bare
    }
}

pub fn dynamic_pressure(v: f64) -> f64 {
    0.5 * RHO * v * v
}

impl Fixture {
    pub fn standard() -> Self {
        Self {
            total: 600.0,
            target: 150.0,
            fz: -100.0,
            my: 60.0,
            c4: 0.2,
            main: Foil {
                chord: 0.25,
                span: 1.5,
                elements: 2,
                x: 0.0,
                alpha_min: -4.0,
                alpha_max: 12.0,
            },
            rudder: Foil {
                chord: 0.08,
                span: 0.5,
                elements: 2,
                x: -4.0,
                alpha_min: -10.0,
                alpha_max: 10.0,
            },
        }
    }

    pub fn trim(&self, v: f64) -> Trim {
        let q = dynamic_pressure(v);
        let rudder_lift = -self.my / self.rudder.x;
        let alpha_rudder = rudder_lift / self.rudder.lift_per_deg(q);
        let required = G * (self.total - self.target) - self.fz - rudder_lift;
        let lmax = self.main.lift_per_deg(q) * self.main.alpha_max;
        let (alpha_main, displacement) = if required <= lmax {
            (required / self.main.lift_per_deg(q), self.target)
        } else {
            (
                self.main.alpha_max,
                self.total - (self.fz + rudder_lift + lmax) / G,
            )
        };
        let foil_drag = self.main.drag(q, alpha_main) + self.rudder.drag(q, alpha_rudder);
        Trim {
            alpha_main,
            alpha_rudder,
            displacement,
            foil_drag,
            total: bare_rx(self.c4, v, displacement) + foil_drag,
            bare: bare_rx(self.c4, v, self.total),
        }
    }

    /// Picks the hull V·D coefficient so foiled and bare resistance are equal
    /// at `v_star` (m/s).
    pub fn with_crossover_at(mut self, v_star: f64) -> Self {
        let t = self.trim(v_star);
        self.c4 = t.foil_drag / (v_star * (self.total - t.displacement));
        self
    }

    pub fn config(&self, polar_step: f64) -> YachtConfig {
        let polar = linear_polar(polar_step);
        let surfaces = constant_force_hull(
            self.c4,
            self.fz,
            self.my,
            [self.target, 0.5 * (self.target + self.total), self.total],
        );
        YachtConfig::new(
            surfaces,
            self.main.geometry(polar.clone()),
            self.rudder.geometry(polar),
            self.total,
            self.target,
        )
    }
}

/// Brute-force grid search for the trim, independent of the solver.
///
/// The rudder angle minimises the moment residual on a 0.01 deg grid. Then
/// displacements are scanned upward from target in 0.1 kg steps; at each,
/// the main angle minimising the vertical residual on a 0.01 deg grid is
/// found, and the first displacement whose best residual is within half a
/// grid cell of zero is taken.
pub fn grid_search(f: &Fixture, v: f64) -> (f64, f64, f64) {
    const DA: f64 = 0.01;
    const DD: f64 = 0.1;
    let q = dynamic_pressure(v);
    let grid = |lo: f64, hi: f64, step: f64| {
        let n = ((hi - lo) / step).round() as usize;
        (0..=n).map(move |i| lo + i as f64 * step)
    };

    let rudder_k = f.rudder.lift_per_deg(q);
    let mut alpha_rudder = f.rudder.alpha_min;
    let mut best = f64::INFINITY;
    for a in grid(f.rudder.alpha_min, f.rudder.alpha_max, DA) {
        let m = (rudder_k * a * f.rudder.x + f.my).abs();
        if m < best {
            best = m;
            alpha_rudder = a;
        }
    }
    let rudder_lift = rudder_k * alpha_rudder;

    let main_k = f.main.lift_per_deg(q);
    let cell = 0.5 * (main_k * DA + G * DD);
    for d in grid(f.target, f.total, DD) {
        let mut best = f64::INFINITY;
        let mut best_a = f.main.alpha_min;
        for a in grid(f.main.alpha_min, f.main.alpha_max, DA) {
            let r = (G * (f.total - d) - f.fz - rudder_lift - main_k * a).abs();
            if r < best {
                best = r;
                best_a = a;
            }
        }
        if best <= cell {
            return (alpha_rudder, best_a, d);
        }
    }
    (alpha_rudder, f.main.alpha_max, f.total)
}
