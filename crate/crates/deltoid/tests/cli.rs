use std::process::Command;

use deltoid::algebra::rat;
use deltoid::hypergroup::{block_norms, markov_matrix_exact};
use deltoid::models::ThetaPair;
use deltoid::quadrature::TorusGrid;
use deltoid::report::*;
use deltoid::spectral::EigenTable;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_deltoid"))
}

fn quick_small() -> Config {
    let mut c = Config::quick();
    c.degree_max = 3;
    c.gram_degree_max = 3;
    c.scan_degree_max = 3;
    c.grid = 48;
    c.torus_samples = 4000;
    c.su3_samples = 4000;
    c.omega1_samples = 4000;
    c.theta_grid = 1;
    c
}

#[test]
fn report_is_deterministic_and_matches_manifest() {
    let a = run_verify(&quick_small()).unwrap();
    let b = run_verify(&quick_small()).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());

    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/docs/identities.json")).unwrap();
    let shipped: Vec<ManifestEntry> = serde_json::from_str(&text).unwrap();
    let got = manifest_of(&a);
    for e in &got {
        assert!(shipped.contains(e), "reported but not in the manifest: {}", e.name);
    }
    for e in &shipped {
        assert!(got.contains(e), "in the manifest but not reported: {}", e.name);
    }
    let mut names: Vec<_> = got.iter().map(|e| &e.name).collect();
    names.sort();
    names.dedup();
    assert_eq!(names.len(), got.len(), "duplicate identity names");
}

#[test]
fn corrupted_gamma_fails_exactly_with_witness() {
    let mut c = quick_small();
    c.fixture_corrupt_gamma = true;
    let r = run_verify(&c).unwrap();
    assert_eq!(r.exit_code(), EXIT_EXACT);
    match &r.entry("deltoid metric determinant").unwrap().status {
        Status::ExactFail { witness } => assert!(witness.contains("det =")),
        s => panic!("unexpected {s:?}"),
    }
}

#[test]
fn cli_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let st = bin()
        .args(["verify", "--quick", "--set", "fixture_corrupt_gamma=true", "--set", "omega1_samples=3000"])
        .args(["--set", "torus_samples=3000", "--set", "su3_samples=3000", "--set", "theta_grid=1", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(EXIT_EXACT));
    assert!(String::from_utf8_lossy(&st.stdout).contains("witness:"));
    let r: VerificationReport = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(r.config["fixture_corrupt_gamma"], "true");

    assert_eq!(bin().args(["gram", "--lambda", "x", "--out", "a"]).output().unwrap().status.code(), Some(EXIT_USAGE));
    assert_eq!(bin().arg("nonsense").output().unwrap().status.code(), Some(EXIT_USAGE));
    let bad = bin().args(["verify", "--set", "colour=red"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_USAGE));
}

#[test]
fn cli_outputs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let p = |s: &str| dir.path().join(s);
    for name in ["a", "b"] {
        let run = |args: &[&str], file: String| {
            let st = bin().args(args).arg("--out").arg(p(&file)).status().unwrap();
            assert!(st.success(), "{args:?}");
        };
        run(&["eigen", "--lambda", "5/2", "--degree-max", "3"], format!("{name}.eigen.json"));
        run(&["gram", "--lambda", "4", "--degree-max", "3", "--grid", "48"], format!("{name}.gram.json"));
        run(&["sample", "--n", "500", "--seed", "9"], format!("{name}.sample.csv"));
        run(&["sample", "--n", "500", "--seed", "9"], format!("{name}.sample.bin"));
        run(
            &["markov", "--n", "2", "--k", "1", "--samples", "3000", "--theta-grid", "2"],
            format!("{name}.markov.csv"),
        );
        run(&["plot", "eigen", "--cells", "40"], format!("{name}.plot.svg"));
    }
    for f in ["eigen.json", "gram.json", "sample.csv", "sample.bin", "markov.csv", "markov.json", "plot.svg"] {
        assert_eq!(std::fs::read(p(&format!("a.{f}"))).unwrap(), std::fs::read(p(&format!("b.{f}"))).unwrap(), "{f}");
    }
    let pts = read_batch_binary(&p("a.sample.bin")).unwrap();
    assert_eq!(pts.len(), 500);
    let csv = std::fs::read_to_string(p("a.sample.csv")).unwrap();
    let first: Vec<f64> = csv.lines().nth(1).unwrap().split(',').map(|t| t.parse().unwrap()).collect();
    assert_eq!(first, vec![pts[0][0].re, pts[0][0].im, pts[0][1].re, pts[0][1].im, pts[0][2].re, pts[0][2].im]);
}

#[test]
fn markov_csv_round_trip() {
    let l = rat(11, 2);
    let table = EigenTable::build(&l, 3).unwrap();
    let norms = block_norms(&table, &TorusGrid::new(&l, 64).unwrap()).unwrap();
    let th = ThetaPair::new(0.7, 0.2);
    let rows: Vec<MarkovRow> = table
        .blocks()
        .iter()
        .zip(&norms)
        .map(|(b, n)| markov_row("exact", &markov_matrix_exact(b, n, &th).unwrap()))
        .collect();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.csv");
    write_markov_csv(&rows, &path).unwrap();
    assert_eq!(read_markov_csv(&path).unwrap(), rows);
    let head = std::fs::read_to_string(&path).unwrap();
    assert!(head.starts_with("source,n,k,theta1,theta2,alpha,alpha_se,beta,beta_se,gamma,gamma_se,delta,delta_se\n"));
}

#[test]
fn boundary_svg_samples_the_curve() {
    let a = plot_svg(PlotKind::Boundary).unwrap();
    assert_eq!(a, plot_svg(PlotKind::Boundary).unwrap());
    assert!(a.starts_with("<?xml") || a.starts_with("<svg"));
    assert!(a.contains("version=\"1.1\""));
    // 721 vertices: t = 2 pi k / 720 for k = 0..=720, closing at the cusp Z = 1.
    let poly = a.lines().find(|l| l.starts_with("<polyline")).unwrap();
    let pts = poly.split("points=\"").nth(1).unwrap().split('"').next().unwrap();
    let v: Vec<&str> = pts.split(' ').collect();
    assert_eq!(v.len(), 721);
    assert_eq!(v[0], v[720]);
}
