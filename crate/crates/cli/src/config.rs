//! Run configuration: flat `key = value` text with `#` comments and dotted
//! keys for the foil and speed sections. Relative file paths resolve against
//! the directory holding the config file.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use foilvpp::hull::{fit_surfaces, parse_hull_samples, HullSurfaceSet};
use foilvpp::polar::PolarTable;
use foilvpp::sweep::speeds_from_knots;
use foilvpp::wing::{ArCorrection, FoilGeometry, RatioCurve};
use foilvpp::{SolverTolerances, YachtConfig};

use crate::CliError;

const KEYS: &[&str] = &[
    "label",
    "hull_file",
    "surfaces_file",
    "lwl_m",
    "total_displacement_kg",
    "target_displacement_kg",
    "water_density",
    "gravity",
    "interference_efficiency",
    "lift_ratio_file",
    "drag_ratio_file",
    "speed.min_kn",
    "speed.max_kn",
    "speed.step_kn",
    "tolerance.angle_deg",
    "tolerance.displacement_kg",
    "tolerance.force_n",
    "tolerance.moment_nm",
    "tolerance.max_outer_iterations",
];

const FOIL_KEYS: &[&str] = &[
    "polar_file",
    "chord_m",
    "span_m",
    "elements",
    "x_m",
    "alpha_min_deg",
    "alpha_max_deg",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedRange {
    pub min_kn: f64,
    pub max_kn: f64,
    pub step_kn: f64,
}

impl SpeedRange {
    pub fn speeds(&self) -> Result<Vec<f64>, CliError> {
        speeds_from_knots(self.min_kn, self.max_kn, self.step_kn)
            .map_err(|e| CliError::Input(e.to_string()))
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub label: String,
    pub yacht: YachtConfig,
    pub speed: Option<SpeedRange>,
    pub tolerances: SolverTolerances,
}

struct Entries {
    source: PathBuf,
    base: PathBuf,
    values: BTreeMap<String, (usize, String)>,
}

impl Entries {
    fn parse(path: &Path, text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |reason: String| {
                CliError::Input(format!("{}:{}: {reason}", path.display(), idx + 1))
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err("expected `key = value`".into()))?;
            let key = key.trim();
            let known = KEYS.contains(&key)
                || ["main_foil.", "rudder_foil."]
                    .iter()
                    .any(|p| key.strip_prefix(p).is_some_and(|k| FOIL_KEYS.contains(&k)));
            if !known {
                return Err(err(format!("unknown key `{key}`")));
            }
            if values
                .insert(key.to_string(), (idx + 1, value.trim().to_string()))
                .is_some()
            {
                return Err(err(format!("duplicate key `{key}`")));
            }
        }
        Ok(Self {
            source: path.to_path_buf(),
            base: path.parent().map(Path::to_path_buf).unwrap_or_default(),
            values,
        })
    }

    fn text(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|(_, v)| v.as_str())
    }

    fn required(&self, key: &str) -> Result<&str, CliError> {
        self.text(key).ok_or_else(|| {
            CliError::Input(format!("{}: missing key `{key}`", self.source.display()))
        })
    }

    fn number<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        let Some((line, v)) = self.values.get(key) else {
            return Ok(None);
        };
        v.parse().map(Some).map_err(|_| {
            CliError::Input(format!(
                "{}:{line}: `{key}` is not a valid number: `{v}`",
                self.source.display()
            ))
        })
    }

    fn required_number<T: std::str::FromStr>(&self, key: &str) -> Result<T, CliError> {
        self.required(key)?;
        Ok(self.number(key)?.expect("key present"))
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.text(key).map(|p| self.base.join(p))
    }
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn foil(e: &Entries, prefix: &str) -> Result<FoilGeometry, CliError> {
    let key = |k: &str| format!("{prefix}.{k}");
    let polar_path = e
        .path(&key("polar_file"))
        .ok_or_else(|| CliError::Input(format!("missing key `{}`", key("polar_file"))))?;
    let polar = PolarTable::parse(&read_file(&polar_path)?)
        .map_err(|err| CliError::Input(format!("{}: {err}", polar_path.display())))?;
    FoilGeometry::new(
        e.required_number(&key("chord_m"))?,
        e.required_number(&key("span_m"))?,
        e.required_number(&key("elements"))?,
        e.required_number(&key("x_m"))?,
        (
            e.required_number(&key("alpha_min_deg"))?,
            e.required_number(&key("alpha_max_deg"))?,
        ),
        Arc::new(polar),
    )
    .map_err(|err| CliError::Input(format!("{prefix}: {err}")))
}

fn surfaces(e: &Entries) -> Result<HullSurfaceSet, CliError> {
    match (e.path("hull_file"), e.path("surfaces_file")) {
        (Some(hull), None) => {
            let lwl = e.required_number("lwl_m")?;
            let samples = parse_hull_samples(&read_file(&hull)?)
                .map_err(|err| CliError::Input(format!("{}: {err}", hull.display())))?;
            fit_surfaces(&samples, lwl).map_err(CliError::from)
        }
        (None, Some(path)) => HullSurfaceSet::parse(&read_file(&path)?)
            .map_err(|err| CliError::Input(format!("{}: {err}", path.display()))),
        _ => Err(CliError::Input(
            "exactly one of `hull_file` and `surfaces_file` must be set".into(),
        )),
    }
}

fn ratio_curve(e: &Entries, key: &str, default: RatioCurve) -> Result<RatioCurve, CliError> {
    match e.path(key) {
        Some(path) => RatioCurve::parse(&read_file(&path)?)
            .map_err(|err| CliError::Input(format!("{}: {err}", path.display()))),
        None => Ok(default),
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let e = Entries::parse(path, &read_file(path)?)?;

        let mut yacht = YachtConfig::new(
            Arc::new(surfaces(&e)?),
            foil(&e, "main_foil")?,
            foil(&e, "rudder_foil")?,
            e.required_number("total_displacement_kg")?,
            e.required_number("target_displacement_kg")?,
        );
        if let Some(rho) = e.number("water_density")? {
            yacht.water_density = rho;
        }
        if let Some(g) = e.number("gravity")? {
            yacht.gravity = g;
        }
        if let Some(eta) = e.number("interference_efficiency")? {
            yacht.interference_efficiency = eta;
        }
        let builtin = ArCorrection::default();
        yacht.correction = ArCorrection {
            lift: ratio_curve(&e, "lift_ratio_file", builtin.lift)?,
            drag: ratio_curve(&e, "drag_ratio_file", builtin.drag)?,
        };
        yacht
            .validate()
            .map_err(|err| CliError::Input(format!("{}: {err}", path.display())))?;

        let speed = match (
            e.number("speed.min_kn")?,
            e.number("speed.max_kn")?,
            e.number("speed.step_kn")?,
        ) {
            (Some(min_kn), Some(max_kn), Some(step_kn)) => Some(SpeedRange {
                min_kn,
                max_kn,
                step_kn,
            }),
            (None, None, None) => None,
            _ => {
                return Err(CliError::Input(
                    "speed.min_kn, speed.max_kn and speed.step_kn go together".into(),
                ))
            }
        };

        let mut tolerances = SolverTolerances::default();
        if let Some(v) = e.number("tolerance.angle_deg")? {
            tolerances.angle_deg = v;
        }
        if let Some(v) = e.number("tolerance.displacement_kg")? {
            tolerances.displacement_kg = v;
        }
        if let Some(v) = e.number("tolerance.force_n")? {
            tolerances.force_n = v;
        }
        if let Some(v) = e.number("tolerance.moment_nm")? {
            tolerances.moment_nm = v;
        }
        if let Some(v) = e.number("tolerance.max_outer_iterations")? {
            tolerances.max_outer_iterations = v;
        }

        let label = match e.text("label") {
            Some(l) => l.to_string(),
            None => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "run".into()),
        };
        if label.is_empty() || label.contains([',', '\n']) {
            return Err(CliError::Input(format!(
                "label `{label}` must be non-empty and free of commas"
            )));
        }

        Ok(Self {
            label,
            yacht,
            speed,
            tolerances,
        })
    }
}
