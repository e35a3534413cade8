use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use kleinscatter::analysis::{evaluate_point, WidthRule};
use kleinscatter::{Geometry, Model, Particle64};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kleinscatter"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn field(text: &str, key: &str) -> f64 {
    let line = text.lines().find(|l| l.starts_with(key)).unwrap();
    line.split_whitespace().nth(1).unwrap().parse().unwrap()
}

#[test]
fn scatter_prints_coefficients() {
    let o = run(&["scatter", "--model", "dirac", "--geometry", "step", "--energy", "1.3", "--v0", "2.6"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(field(&stdout(&o), "R ") < 1e-30);
    let o = run(&["scatter", "--model", "kg", "--geometry", "step", "--energy", "1.3", "--v0", "1.0"]);
    assert_eq!(field(&stdout(&o), "R "), 1.0);
    let o = run(&[
        "scatter", "--model", "dirac", "--geometry", "barrier", "--energy", "1.3", "--v0", "3", "--width", "0.7",
    ]);
    let text = stdout(&o);
    assert!((field(&text, "R ") + field(&text, "T ") - 1.0).abs() < 1e-12);
    assert_eq!(text.lines().filter(|l| l.starts_with("region")).count(), 3);
}

#[test]
fn invalid_input_exits_2_with_one_line() {
    for args in [
        vec!["scatter", "--model", "dirac", "--geometry", "step", "--energy", "0.5", "--v0", "1"],
        vec!["scatter", "--model", "spinor", "--geometry", "step", "--energy", "1.3", "--v0", "1"],
        vec!["scatter", "--model", "dirac", "--geometry", "barrier", "--energy", "1.3", "--v0", "1"],
        vec!["scatter", "--model", "dirac", "--geometry", "step", "--energy", "2", "--mass", "0", "--v0", "1"],
        vec!["sweep", "--model", "dirac", "--geometry", "step", "--energy", "1.3", "--v0-range", "0:4:1"],
        vec!["sweep", "--model", "dirac", "--geometry", "step", "--energy", "1.3", "--v0-range", "4:0:10"],
        vec!["verify", "--samples", "0"],
        vec!["figures", "--fig", "4"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert_eq!(stderr(&o).lines().count(), 1, "{args:?}: {}", stderr(&o));
    }
    let o = run(&["scatter", "--model", "dirac", "--geometry", "step", "--energy", "0.5", "--v0", "1"]);
    assert!(stderr(&o).contains("incident energy inside gap"));
}

#[test]
fn unwritable_output_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("out.csv");
    let o = run(&[
        "sweep", "--model", "kg", "--geometry", "step", "--energy", "1.3", "--v0-range", "0:4:5", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
}

fn read_rows(path: &Path) -> Vec<(f64, f64, String, String)> {
    let mut r = csv::Reader::from_path(path).unwrap();
    assert_eq!(r.headers().unwrap().iter().collect::<Vec<_>>(), ["V0", "R", "regime", "annotation"]);
    r.records()
        .map(|rec| {
            let rec = rec.unwrap();
            (
                rec[0].parse().unwrap(),
                rec[1].parse().unwrap(),
                rec[2].to_string(),
                rec[3].to_string(),
            )
        })
        .collect()
}

#[test]
fn csv_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("barrier.csv");
    let o = run(&[
        "sweep",
        "--model",
        "dirac",
        "--geometry",
        "barrier",
        "--energy",
        "1.3",
        "--width",
        "fig",
        "--v0-range",
        "-2:6:301",
        "--special-points",
        "true",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = read_rows(&path);
    let spec = Particle64::in_rest_units(1.3).unwrap();
    let mut i = 0;
    let mut jumps = 0;
    while i < rows.len() {
        let v0 = rows[i].0;
        let again =
            evaluate_point(Model::Dirac, Geometry::Barrier, &spec, Some(WidthRule::FigureConvention), v0).unwrap();
        for s in &again {
            let row = &rows[i];
            assert_eq!(row.0, s.v0);
            assert!((row.1 - s.r).abs() <= 1e-15, "V0={v0}: {} vs {}", row.1, s.r);
            assert_eq!(row.2, s.regime.name());
            assert_eq!(row.3, s.annotation);
            i += 1;
        }
        jumps += usize::from(again.len() == 2);
    }
    assert_eq!(jumps, 1);
    assert!(rows.iter().any(|r| r.3.ends_with("jump-")) && rows.iter().any(|r| r.3.ends_with("jump+")));
}

#[test]
fn massless_sweep_is_all_zero() {
    let o = run(&[
        "sweep", "--model", "dirac", "--geometry", "barrier", "--units", "raw", "--mass", "0", "--energy", "2",
        "--width", "0.5", "--v0-range", "-4:10:57", "--special-points", "true",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    for line in text.lines().skip(1) {
        let r: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(r, 0.0, "{line}");
    }
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "model = dirac\ngeometry = step\nenergy = 1.3\nv0 = 1.0\n").unwrap();
    let o = run(&["scatter", "--config", cfg.to_str().unwrap()]);
    assert_eq!(field(&stdout(&o), "R "), 1.0);
    let o = run(&["scatter", "--config", cfg.to_str().unwrap(), "--v0", "2.6"]);
    assert!(field(&stdout(&o), "R ") < 1e-30);
    fs::write(&cfg, "flavour = up\n").unwrap();
    assert_eq!(run(&["scatter", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn profile_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("twin.csv");
    fs::write(&p, "left,right,height\n-inf,0,0\n0,1,3\n1,2.5,0\n2.5,3.5,3\n3.5,inf,0\n").unwrap();
    let o = run(&["scatter", "--model", "kg", "--geometry", "profile", "--profile", p.to_str().unwrap(), "--energy", "1.3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("region")).count(), 5);
    assert!((field(&text, "R ") + field(&text, "T ") - 1.0).abs() < 1e-10);
    fs::write(&p, "left,right,height\n-inf,0,0\n1,inf,0\n").unwrap();
    let o = run(&["scatter", "--model", "kg", "--geometry", "profile", "--profile", p.to_str().unwrap(), "--energy", "1.3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_passes_and_catches_mutation() {
    let o = run(&["verify", "--seed", "42", "--samples", "1000"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).lines().filter(|l| l.starts_with("PASS")).count() >= 10);
    let o = run(&["verify", "--seed", "42", "--samples", "300", "--inject-mutation", "flip-ev-sign"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    let failed: Vec<&str> = text.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert_eq!(failed.len(), 1);
    assert!(failed[0].starts_with("FAIL oracle-equivalence") && failed[0].contains("V0="));
}

#[test]
fn figures_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = run(&["figures", "--out", d.path().to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let mut names: Vec<String> = fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names.len(), 8);
    for n in &names {
        assert_eq!(fs::read(a.path().join(n)).unwrap(), fs::read(b.path().join(n)).unwrap(), "{n}");
    }
    // figure 2 features: platform and alley
    let rows = read_rows(&a.path().join("fig2_E1.3.csv"));
    assert!(rows.iter().filter(|r| r.0 >= 0.3 && r.0 <= 2.3).all(|r| r.1 == 1.0));
    assert!(rows.iter().find(|r| r.3.contains("alley")).unwrap().1 < 1e-12);
    let fig5 = read_rows(&a.path().join("fig5_E3.csv"));
    assert_eq!(fig5.iter().filter(|r| r.0 == 3.0).count(), 2);
    let fig6 = read_rows(&a.path().join("fig6_E3.csv"));
    assert_eq!(fig6.iter().filter(|r| r.0 == 3.0).count(), 1);
}
