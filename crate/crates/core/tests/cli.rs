//! End-to-end runs of the command-line interface through `cli::run`.

use std::fs;
use std::io::Write;

use bellcorr::bell::BellSpectrum;
use bellcorr::correlations::bell_report;
use bellcorr::trajectory::Table;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("bellcorr").chain(args.iter().copied());
    let code = bellcorr::cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn figure2_is_byte_identical_across_runs() {
    let a = run(&["figure2", "--steps", "400"]);
    let b = run(&["figure2", "--steps", "400"]);
    assert_eq!(a.0, 0, "{}", a.2);
    assert_eq!(a.1, b.1);
    assert!(a.1.starts_with("tau,f,lambda_1p,lambda_1m,lambda_2p,lambda_2m,c1,c2,c3,T,D,C,E\n"));
    assert!(!a.1.contains('\r'));
    assert_eq!(a.1.lines().count(), 402);
}

#[test]
fn small_grid_golden_output() {
    let (code, out, _) = run(&["evolve", "--steps", "2", "--tau-max", "0.7853981633974483"]);
    assert_eq!(code, 0);
    let expected = "\
tau,f,lambda_1p,lambda_1m,lambda_2p,lambda_2m,c1,c2,c3,T,D,C,E
0,0,0.9,0.1,0,0,0.8,0.8,-1,1.53100440641,0.531004406411,1,0.531004406411
0.392699081699,0.25,0.675,0.075,0.025,0.225,0.4,0.8,-0.5,0.719726281952,0.188721875541,0.531004406411,0.0902638774688
0.785398163397,0.5,0.45,0.05,0.05,0.45,0,0.8,0,0.531004406411,0,0.531004406411,0
";
    assert_eq!(out, expected);
}

#[test]
fn csv_round_trip_reproduces_quantifiers() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("traj.csv");
    let (code, _, err) = run(&[
        "evolve",
        "--initial",
        "0.4,0.3,0.2,0.1",
        "--steps",
        "300",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let table = Table::read_csv(fs::File::open(&path).map(std::io::BufReader::new).unwrap()).unwrap();
    let cols = |n: &str| table.column(n).unwrap();
    let (l1p, l1m, l2p, l2m) = (cols("lambda_1p"), cols("lambda_1m"), cols("lambda_2p"), cols("lambda_2m"));
    for k in 0..table.rows.len() {
        let spec = BellSpectrum::normalized([l1p[k], l1m[k], l2p[k], l2m[k]], 1e-9).unwrap();
        let r = bell_report(&spec);
        assert!((r.total - cols("T")[k]).abs() < 1e-9);
        assert!((r.discord - cols("D")[k]).abs() < 1e-9);
        assert!((r.classical - cols("C")[k]).abs() < 1e-9);
        assert!((r.entanglement.unwrap() - cols("E")[k]).abs() < 1e-9);
    }
}

#[test]
fn json_format_mirrors_columns() {
    let (code, out, _) = run(&["figure3", "--steps", "8", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys.first().unwrap().as_str(), "tau");
    assert_eq!(keys.last().unwrap().as_str(), "I_E");
    assert_eq!(v["E_anc"].as_array().unwrap().len(), 9);
}

#[test]
fn time_column_appears_off_unit_coupling() {
    let (code, out, _) = run(&["nonmarkov", "--g", "2", "--steps", "4", "--tau-max", "2"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "tau,t,E_anc,I_E");
    assert_eq!(lines.nth(4).unwrap().split(',').nth(1).unwrap(), "1");
}

#[test]
fn literal_convention_is_selectable() {
    let (a, rhp, _) = run(&["nonmarkov", "--steps", "100", "--tau-max", "1.2"]);
    let (b, lit, _) = run(&["nonmarkov", "--steps", "100", "--tau-max", "1.2", "--convention", "literal"]);
    assert_eq!((a, b), (0, 0));
    assert_ne!(rhp, lit);
}

#[test]
fn initial_state_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("state.json");
    fs::File::create(&path)
        .unwrap()
        .write_all(br#"{"bell": [0.9, 0.1, 0.0, 0.0]}"#)
        .unwrap();
    let from_file = run(&["evolve", "--steps", "10", "--initial", path.to_str().unwrap()]);
    let default = run(&["evolve", "--steps", "10"]);
    assert_eq!(from_file.0, 0);
    assert_eq!(from_file.1, default.1);
}

#[test]
fn composition_report() {
    let (code, out, _) = run(&["composition", "--tau1", "0.7853981633974483", "--tau2", "1.5707963267948966"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!((v["trace_distance"].as_f64().unwrap() - 0.5).abs() < 1e-12);

    let (code, out, _) = run(&["composition", "--tau1", "0.3", "--tau2", "1.1", "--initial", "0.25,0.25,0.25,0.25"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["trace_distance"].as_f64().unwrap() < 1e-12);
}

#[test]
fn verify_single_state() {
    let (code, out, err) = run(&["verify", "--initial", "0.6,0.2,0.15,0.05"]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["states"], 1);
    assert_eq!(v["passed"], true);
}

#[test]
fn bad_input_exit_codes() {
    assert_eq!(run(&["evolve", "--initial", "0.5,0.2,0.1,0.1"]).0, 2);
    assert_eq!(run(&["evolve", "--initial", "/no/such/file.json"]).0, 2);
    assert_eq!(run(&["evolve", "--steps", "1"]).0, 2);
    assert_eq!(run(&["evolve", "--tau-max", "-1"]).0, 2);
    assert_eq!(run(&["evolve", "--g", "0"]).0, 2);
    assert_eq!(run(&["evolve", "--convention", "other"]).0, 2);
    assert_eq!(run(&["composition", "--tau1", "1", "--tau2", "0.5"]).0, 2);
    assert_eq!(run(&["figure2", "--initial", "0.25,0.25,0.25,0.25"]).0, 2);
    assert_eq!(run(&["unknown"]).0, 2);
}

#[test]
fn non_bell_diagonal_initial_exits_3() {
    let m = r#"{"matrix": [[[0.5,0],[0,0],[0,0],[0.5,0]],[[0,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]],[[0.5,0],[0,0],[0,0],[0.5,0]]]}"#;
    // |2+> is Bell-diagonal and accepted.
    assert_eq!(run(&["evolve", "--steps", "4", "--initial", m]).0, 0);
    let product = r#"{"matrix": [[[1,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]]]}"#;
    let (code, _, err) = run(&["evolve", "--steps", "4", "--initial", product]);
    assert_eq!(code, 3);
    assert!(err.contains("not Bell-diagonal"));
}

#[test]
fn help_lists_subcommands_and_rotating_frame() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    for cmd in ["evolve", "figure2", "figure3", "verify", "nonmarkov", "composition"] {
        assert!(out.contains(cmd));
    }
    let (_, out, _) = run(&["evolve", "--help"]);
    assert!(out.contains("--omega") && out.contains("rotating frame"));
}
