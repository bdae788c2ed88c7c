#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use common::{bare_rx, Fixture, CD0, CD2, LIFT_SLOPE};
use foilvpp::hull::HullSurfaceSet;
use foilvpp::units::{knots_to_ms, KNOT};
use tempfile::TempDir;

fn foilvpp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_foilvpp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// `key value` report lines.
fn field(report: &str, key: &str) -> String {
    report
        .lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(' ')))
        .unwrap_or_else(|| panic!("no `{key}` in\n{report}"))
        .to_string()
}

fn num(report: &str, key: &str) -> f64 {
    field(report, key).parse().unwrap()
}

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        let ws = Self {
            dir: TempDir::new().unwrap(),
        };
        let mut polar = String::from("# section: linear\nalpha cl cd\n");
        for i in -60..=60 {
            let a = i as f64 * 0.25;
            let _ = writeln!(polar, "{a:?} {:?} {:?}", LIFT_SLOPE * a, CD0 + CD2 * a * a);
        }
        ws.write("data/linear.polar", &polar);
        ws
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let p = self.path(name);
        fs::create_dir_all(p.parent().unwrap()).unwrap();
        fs::write(&p, text).unwrap();
        p
    }

    fn hull(&self, name: &str, f: &Fixture) -> PathBuf {
        let mut text = String::from("speed_kn displacement_kg rx_n fz_n my_nm\n");
        for kn in [2.0, 4.0, 6.0, 8.0, 10.0, 12.0] {
            for d in [f.target, 0.5 * (f.target + f.total), f.total] {
                let rx = bare_rx(f.c4, kn * KNOT, d);
                let _ = writeln!(text, "{kn:?} {d:?} {rx:?} {:?} {:?}", f.fz, f.my);
            }
        }
        self.write(name, &text)
    }

    /// Config for `f`, with `extra` lines appended.
    fn config(&self, name: &str, f: &Fixture, extra: &str) -> PathBuf {
        self.hull("data/hull.txt", f);
        let mut text = format!(
            "# fixture\nhull_file = data/hull.txt\nlwl_m = 8.5\ntotal_displacement_kg = {:?}\n",
            f.total
        );
        if !extra.contains("target_displacement_kg") {
            let _ = writeln!(text, "target_displacement_kg = {:?}", f.target);
        }
        for (prefix, foil) in [("main_foil", f.main), ("rudder_foil", f.rudder)] {
            let _ = write!(
                text,
                "{prefix}.polar_file = data/linear.polar\n{prefix}.chord_m = {:?}\n{prefix}.span_m = {:?}\n\
                 {prefix}.elements = {}\n{prefix}.x_m = {:?}\n{prefix}.alpha_min_deg = {:?}\n{prefix}.alpha_max_deg = {:?}\n",
                foil.chord, foil.span, foil.elements, foil.x, foil.alpha_min, foil.alpha_max
            );
        }
        text.push_str(extra);
        self.write(name, &text)
    }
}

fn crossover_fixture() -> Fixture {
    Fixture::standard().with_crossover_at(knots_to_ms(5.0))
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn fit_hull_recovers_grid() {
    let ws = Workspace::new();
    let mut text = String::new();
    for kn in [3.0, 6.0, 9.0] {
        for d in [900.0, 1200.0, 1500.0] {
            let v = kn * KNOT;
            let f = 2.0 + 3.0 * v + 0.5 * d + 0.1 * v * v - 0.02 * v * d + 0.004 * d * d;
            let _ = writeln!(text, "{kn} {d} {f:?} {:?} {:?}", 0.5 * f, -f);
        }
    }
    let samples = ws.write("grid.txt", &text);
    let out = foilvpp(&["fit-hull", s(&samples), "--lwl", "9.15"]);
    assert_eq!(code(&out), 0);
    let report = stdout(&out);
    for name in ["rx", "fz", "my"] {
        let rms: f64 = field(&report, name)
            .rsplit(' ')
            .next()
            .unwrap()
            .parse()
            .unwrap();
        assert!(rms < 1e-9, "{name} rms {rms}");
    }

    let surfaces = ws.path("hull.surf");
    let out = foilvpp(&[
        "fit-hull",
        s(&samples),
        "--lwl",
        "9.15",
        "--out",
        s(&surfaces),
    ]);
    assert_eq!(code(&out), 0);
    let set = HullSurfaceSet::parse(&fs::read_to_string(&surfaces).unwrap()).unwrap();
    assert_eq!(set.lwl, 9.15);
}

#[test]
fn fit_hull_error_codes() {
    let ws = Workspace::new();
    let empty = ws.write("empty.txt", "# nothing here\n");
    assert_eq!(code(&foilvpp(&["fit-hull", s(&empty), "--lwl", "9"])), 2);
    let mut collinear = String::new();
    for kn in [2.0, 4.0, 6.0, 8.0, 10.0, 12.0] {
        let _ = writeln!(collinear, "{kn} 1000 {} 0 0", 10.0 * kn);
    }
    let collinear = ws.write("collinear.txt", &collinear);
    assert_eq!(
        code(&foilvpp(&["fit-hull", s(&collinear), "--lwl", "9"])),
        3
    );
    assert_eq!(
        code(&foilvpp(&[
            "fit-hull",
            s(&ws.path("missing.txt")),
            "--lwl",
            "9"
        ])),
        2
    );
}

#[test]
fn ar_study_orders() {
    let ws = Workspace::new();
    let drag = ws.write("drag.txt", "ar drag\n12 3034.37\n24 2539.55\n48 2175.41\n");
    let out = foilvpp(&["ar-study", s(&drag)]);
    assert_eq!(code(&out), 0);
    assert!((num(&stdout(&out), "order") - 0.44).abs() <= 0.01);

    let first = ws.write("first.txt", "3 140\n6 120\n12 110\n24 105\n");
    let ratio = ws.path("ratio.txt");
    let out = foilvpp(&["ar-study", s(&first), "--degree", "1", "--out", s(&ratio)]);
    assert_eq!(code(&out), 0);
    let report = stdout(&out);
    assert_eq!(num(&report, "order"), 1.0);
    assert_eq!(num(&report, "asymptote"), 100.0);
    assert!(fs::read_to_string(&ratio).unwrap().starts_with("1.0 "));

    let oscillating = ws.write("osc.txt", "12 100\n24 90\n48 95\n");
    assert_eq!(code(&foilvpp(&["ar-study", s(&oscillating)])), 4);
    let uneven = ws.write("uneven.txt", "12 100\n24 90\n36 85\n");
    assert_eq!(code(&foilvpp(&["ar-study", s(&uneven)])), 2);
}

#[test]
fn solve_matches_closed_form() {
    let ws = Workspace::new();
    let f = crossover_fixture();
    let cfg = ws.config("run.cfg", &f, "");
    for kn in [3.0, 9.0] {
        let out = foilvpp(&["solve", s(&cfg), "--speed", &kn.to_string()]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        let report = stdout(&out);
        let t = f.trim(knots_to_ms(kn));
        assert!((num(&report, "alpha_main_deg") - t.alpha_main).abs() < 0.01);
        assert!((num(&report, "alpha_rudder_deg") - t.alpha_rudder).abs() < 0.01);
        assert!((num(&report, "residual_displacement_kg") - t.displacement).abs() < 0.1);
        assert_eq!(field(&report, "label"), "run");
    }
}

#[test]
fn solve_exit_codes() {
    let ws = Workspace::new();
    let f = crossover_fixture();
    let cfg = ws.config("run.cfg", &f, "");
    assert_eq!(code(&foilvpp(&["solve", s(&cfg), "--speed", "20"])), 2);

    let mut bare = f;
    bare.main.elements = 0;
    bare.rudder.elements = 0;
    let cfg = ws.config("bare.cfg", &bare, "");
    let out = foilvpp(&["solve", s(&cfg), "--speed", "6"]);
    assert_eq!(code(&out), 5);
    let report = stdout(&out);
    assert!(field(&report, "flags").ends_with("NoVerticalBalance"));
    assert_eq!(field(&report, "total_rx_n"), field(&report, "bare_rx_n"));

    bare.fz = 0.0;
    bare.my = 0.0;
    let cfg = ws.config(
        "level.cfg",
        &bare,
        &format!("target_displacement_kg = {:?}\n", f.total),
    );
    let out = foilvpp(&["solve", s(&cfg), "--speed", "6"]);
    assert_eq!(code(&out), 0);
    let report = stdout(&out);
    assert_eq!(field(&report, "total_rx_n"), field(&report, "bare_rx_n"));
    assert_eq!(num(&report, "delta_percent"), 0.0);

    let cfg = ws.config("capped.cfg", &f, "tolerance.max_outer_iterations = 1\n");
    let out = foilvpp(&["solve", s(&cfg), "--speed", "3"]);
    assert_eq!(code(&out), 6);
    assert!(field(&stdout(&out), "flags").contains("NotConverged"));
}

#[test]
fn config_errors_exit_2() {
    let ws = Workspace::new();
    let f = crossover_fixture();
    let unknown = ws.config("unknown.cfg", &f, "keel.depth_m = 2\n");
    assert_eq!(code(&foilvpp(&["solve", s(&unknown), "--speed", "5"])), 2);
    let no_speed = ws.config("nospeed.cfg", &f, "");
    assert_eq!(code(&foilvpp(&["sweep", s(&no_speed)])), 2);
    let bad = ws.config("bad.cfg", &f, "interference_efficiency = 1.5\n");
    assert_eq!(code(&foilvpp(&["solve", s(&bad), "--speed", "5"])), 2);
}

#[test]
fn sweep_reports_crossover_deterministically() {
    let ws = Workspace::new();
    let f = crossover_fixture();
    let cfg = ws.config(
        "run.cfg",
        &f,
        "speed.min_kn = 3\nspeed.max_kn = 12\nspeed.step_kn = 0.25\n",
    );
    let a = ws.path("a.csv");
    let b = ws.path("b.csv");
    assert_eq!(code(&foilvpp(&["sweep", s(&cfg), "--out", s(&a)])), 0);
    assert_eq!(code(&foilvpp(&["sweep", s(&cfg), "--out", s(&b)])), 0);
    let csv = fs::read_to_string(&a).unwrap();
    assert_eq!(csv, fs::read_to_string(&b).unwrap());
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 1 + 37);
    let crossings: Vec<f64> = csv
        .lines()
        .filter_map(|l| l.strip_prefix("# crossover_kn,"))
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!(crossings.len(), 1);
    assert!((4.9..=5.1).contains(&crossings[0]), "{crossings:?}");
    let leftovers: Vec<_> = fs::read_dir(ws.dir.path())
        .unwrap()
        .filter_map(|e| {
            let n = e.unwrap().file_name().into_string().unwrap();
            n.contains(".tmp").then_some(n)
        })
        .collect();
    assert!(leftovers.is_empty(), "{leftovers:?}");
}

#[test]
fn singleton_sweep_equals_solve() {
    let ws = Workspace::new();
    let f = crossover_fixture();
    let cfg = ws.config(
        "run.cfg",
        &f,
        "speed.min_kn = 7\nspeed.max_kn = 7\nspeed.step_kn = 1\n",
    );
    let sweep = stdout(&foilvpp(&["sweep", s(&cfg)]));
    let header: Vec<&str> = sweep.lines().next().unwrap().split(',').collect();
    let row: Vec<&str> = sweep.lines().nth(1).unwrap().split(',').collect();
    let report = stdout(&foilvpp(&["solve", s(&cfg), "--speed", "7"]));
    for (k, v) in header.iter().zip(&row) {
        let expected = if *k == "flags" && v.is_empty() {
            "none".to_string()
        } else {
            v.to_string()
        };
        assert_eq!(field(&report, k), expected, "{k}");
    }
}

#[test]
fn compare_single_and_pair() {
    let ws = Workspace::new();
    let f = crossover_fixture();
    let grid = "speed.min_kn = 3\nspeed.max_kn = 12\nspeed.step_kn = 0.25\n";
    let narrow = ws.config("narrow.cfg", &f, grid);
    let sweep = stdout(&foilvpp(&["sweep", s(&narrow)]));
    let out = foilvpp(&["compare", s(&narrow)]);
    assert_eq!(code(&out), 0);
    let cmp = stdout(&out);
    assert_eq!(cmp.lines().next(), Some("speed_kn,narrow_rx_n,best_label"));
    for (c, w) in cmp.lines().skip(1).zip(sweep.lines().skip(1)) {
        let w: Vec<&str> = w.split(',').collect();
        assert_eq!(c, format!("{},{},narrow", w[0], w[2]));
    }

    let mut wide = f;
    wide.main.span = 2.0;
    let wide = ws.config("wide.cfg", &wide, &format!("label = wide\n{grid}"));
    let out = foilvpp(&["compare", s(&narrow), s(&wide)]);
    assert_eq!(code(&out), 0);
    let best: Vec<String> = stdout(&out)
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().to_string())
        .collect();
    assert_eq!(best.windows(2).filter(|w| w[0] != w[1]).count(), 1);

    let coarse = ws.config(
        "coarse.cfg",
        &f,
        "label = coarse\nspeed.min_kn = 3\nspeed.max_kn = 12\nspeed.step_kn = 0.5\n",
    );
    assert_eq!(code(&foilvpp(&["compare", s(&narrow), s(&coarse)])), 7);
}
