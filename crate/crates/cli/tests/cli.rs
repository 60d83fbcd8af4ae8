use std::process::{Command, Output};

use tausys::{Family, Poly, VarId};

fn tausys(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tausys")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

#[test]
fn gl2_table_has_one_row_per_k_and_alpha() {
    let o = tausys(&["tau", "--n", "2", "--kmax", "3", "--alpha", "-1..1", "--window", "-4..4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,alpha,tau"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 15);
    assert!(rows.contains(&"1,-1,c[-1]"));
    assert!(rows.contains(&"-1,0,0"));
}

#[test]
fn gl3_table_contains_the_mixed_tau() {
    let o = tausys(&["tau", "--n", "3", "--kmax", "1", "--lmax", "1", "--window", "-2..2", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 9);
    let row = rows.iter().find(|r| r["k"] == 1 && r["l"] == 1).unwrap();
    // Σ_{i≥0} e_i c_{-i-1} - d_0 over the window [-2, 2]
    let x = |f, i| Poly::var(VarId::new(f, i));
    let mut expected = -x(Family::D, 0);
    for i in 0..=2i64 {
        if (-2..=2).contains(&(-i - 1)) {
            expected = &expected + &(&x(Family::E, i) * &x(Family::C, -i - 1));
        }
    }
    assert_eq!(row["tau"].as_str().unwrap(), expected.to_string());
}

#[test]
fn empty_window_kills_every_positive_tau() {
    let o = tausys(&["tau", "--n", "2", "--kmax", "3", "--alpha", "-1..1", "--window", "1..0"]);
    assert!(o.status.success());
    for line in stdout(&o).lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let k: i64 = f[0].parse().unwrap();
        let expected = if k == 0 { "1" } else { "0" };
        assert_eq!(f[2], expected, "{line}");
    }
}

#[test]
fn passing_suite_exits_zero() {
    let o = tausys(&["verify", "q-system", "--kmax", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["passed"], true);
    assert_eq!(v["failed"], 0);
}

#[test]
fn seeded_reports_are_byte_identical() {
    let args = ["verify", "det-identities", "--max", "5", "--seed", "7"];
    let a = tausys(&args);
    let b = tausys(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let other = tausys(&["verify", "det-identities", "--max", "5", "--seed", "8"]);
    assert_eq!(other.status.code(), Some(0));
}

#[test]
fn failing_case_exits_one() {
    // on [-2, 2] the tau function at this lattice point vanishes, so the case cannot pass
    let o = tausys(&["verify", "birkhoff-3", "--kmax", "1", "--lmax", "0", "--alpha", "1", "--beta", "-1"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], false);
}

#[test]
fn configuration_errors_exit_two() {
    for args in [
        &["verify", "q-system", "--kmax", "9"][..],
        &["verify", "no-such-suite"],
        &["verify", "q-system", "--window", "-20..20"],
        &["tau", "--n", "2", "--alpha", "2..-2"],
        &["tau", "--n", "4"],
    ] {
        assert_eq!(tausys(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn timings_are_opt_in() {
    let plain = stdout(&tausys(&["verify", "correlations", "--max", "1"]));
    assert!(!plain.contains("wall_ms"));
    let timed = stdout(&tausys(&["verify", "correlations", "--max", "1", "--timings"]));
    assert!(timed.contains("wall_ms"));
}
