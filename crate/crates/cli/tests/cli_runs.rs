use std::path::Path;
use std::process::{Command, Output};

use ditsim::{execute, parse_config, Format, ResultTable};

fn ditsim(args: &[&str], config: &str, dir: &Path) -> Output {
    let cfg = dir.join("run.toml");
    std::fs::write(&cfg, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_ditsim"))
        .args(args)
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.join("out"))
        .output()
        .unwrap()
}

const NODE: &str = "gamma = 1.0\ng = 0.33\ntau = 0.001\n";

#[test]
fn default_spectrum_has_2001_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = ditsim(&["spectrum", "--plot"], &format!("name = \"s\"\n{NODE}"), dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.path().join("out/s.csv")).unwrap();
    let t = ResultTable::from_csv(&text).unwrap();
    assert_eq!(t.columns, ["delta_omega_THz", "through", "drop"]);
    assert_eq!(t.rows.len(), 2001);
    assert!(!text.contains('\r'));
    let svg = std::fs::read_to_string(dir.path().join("out/s.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("probe detuning (THz)"));
}

#[test]
fn ideal_bell_json_classifies_every_input() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = format!("name = \"b\"\nideal = true\n{NODE}");
    let out = ditsim(&["bell", "--format", "json"], &cfg, dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.path().join("out/b.json")).unwrap();
    let t = ResultTable::from_json(&text).unwrap();
    assert_eq!(t.rows.len(), 4);
    let correct = t.numeric_column("correct").unwrap();
    assert!(correct.iter().all(|c| *c == Some(1.0)));
    let input = t.column("input").unwrap();
    let outcome = t.column("outcome").unwrap();
    assert_eq!(input, outcome);
}

#[test]
fn tradeoff_table_is_monotone() {
    let cfg =
        parse_config(&format!("command = \"tradeoff\"\n{NODE}gamma = 4.0\n").replacen("gamma = 1.0\n", "", 1)).unwrap();
    let t = execute(&cfg).unwrap().table;
    assert_eq!(t.rows.len(), 5);
    let f: Vec<f64> = t
        .numeric_column("fidelity")
        .unwrap()
        .into_iter()
        .map(Option::unwrap)
        .collect();
    let s: Vec<f64> = t
        .numeric_column("success_probability")
        .unwrap()
        .into_iter()
        .map(Option::unwrap)
        .collect();
    assert!(f.windows(2).all(|w| w[1] <= w[0]));
    assert!(s.windows(2).all(|w| w[1] >= w[0]));
}

#[test]
fn config_errors_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = ditsim(&["spectrum"], "gamma = -1.0\ng = -0.33\ntau = 0.001\n", dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("gamma") && err.contains("g "), "{err}");

    let out = ditsim(&["spectrum"], "gama = 1.0\ng = 0.33\ntau = 0.001\n", dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("gamma"));

    let out = ditsim(&["entangle"], &format!("{NODE}mean_photons = 1.0\n"), dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn command_mismatch_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = ditsim(&["bell"], &format!("command = \"spectrum\"\n{NODE}"), dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failing_sweep_row_is_annotated_and_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = format!("name = \"sw\"\naxis = \"tau\"\nvalues = [0.001, 0.0, 0.01]\n{NODE}");
    let out = ditsim(&["sweep"], &cfg, dir.path());
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("row 1"));
    let t = ResultTable::from_csv(&std::fs::read_to_string(dir.path().join("out/sw.csv")).unwrap()).unwrap();
    assert_eq!(t.rows.len(), 3);
    let errors = t.column("error").unwrap();
    assert!(errors[0].as_str().unwrap_or("").is_empty());
    assert!(!errors[1].as_str().unwrap_or("").is_empty());
    let totals = t.numeric_column("total").unwrap();
    assert!((totals[2].unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn every_table_round_trips_in_both_formats() {
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    for entry in std::fs::read_dir(configs).unwrap() {
        let path = entry.unwrap().path();
        let cfg = parse_config(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let t = execute(&cfg).unwrap().table;
        assert!(t.is_rectangular(), "{}", path.display());
        for format in [Format::Csv, Format::Json] {
            let back = ResultTable::decode(&t.encode(format).unwrap(), format).unwrap();
            assert_eq!(back, t, "{} via {format:?}", path.display());
        }
    }
}

#[test]
fn seed_changes_only_the_sampled_columns() {
    let base = format!("command = \"bell\"\nideal = true\nsamples = 2000\n{NODE}");
    let a = execute(&parse_config(&format!("{base}seed = 1\n")).unwrap())
        .unwrap()
        .table;
    let b = execute(&parse_config(&format!("{base}seed = 2\n")).unwrap())
        .unwrap()
        .table;
    assert_eq!(a.column("probability"), b.column("probability"));
    assert_ne!(a.column("mc_correct_fraction"), b.column("mc_correct_fraction"));
}
