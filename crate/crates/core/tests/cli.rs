use std::process::Command;

use fgrigid::connection::FormalConnection;
use fgrigid::exact::{int, rat, LaurentSeries, Scalar};
use fgrigid::lie::{CartanType, RepKind};
use fgrigid::oper::OperForm;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fgrigid"))
}

fn write_fg(dir: &std::path::Path) -> std::path::PathBuf {
    let fg = FormalConnection::frenkel_gross_for(CartanType::A, 1, RepKind::Defining, &Scalar::Rat(int(2))).unwrap();
    let path = dir.join("fg.json");
    std::fs::write(&path, serde_json::to_string(&fg).unwrap()).unwrap();
    path
}

#[test]
fn canonicalize_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fg(dir.path());
    let out = dir.path().join("oper.json");
    let status = bin().args(["canonicalize", "--in"]).arg(&input).arg("--out").arg(&out).status().unwrap();
    assert!(status.success());
    let oper: OperForm = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(oper.v()[0], LaurentSeries::laurent_polynomial(&[(-2, rat(-1, 4)), (-1, int(2))]));
}

#[test]
fn invariants_of_fg() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fg(dir.path());
    let out = bin().args(["invariants", "--in"]).arg(&input).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["at_0"]["monodromy"], "unipotent_regular");
    assert_eq!(v["at_0"]["slope"], "0");
    assert_eq!(v["at_infinity"]["slope"], "1/2");
    assert_eq!(v["at_infinity"]["irregularity"], "1");
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let ok = bin()
        .args(["verify", "--claim", "irreducibility_at_infinity", "--type", "B", "--rank", "2", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(ok.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["reports"].as_array().unwrap().len(), 1);

    let bad = bin()
        .args(["verify", "--claim", "fg_local_structure", "--type", "A", "--rank", "1", "--lambda", "0"])
        .output()
        .unwrap();
    assert!(!bad.status.success());
    assert!(String::from_utf8_lossy(&bad.stderr).contains("ERROR"));

    let unknown = bin().args(["verify", "--claim", "no_such_claim"]).status().unwrap();
    assert!(!unknown.success());
}

#[test]
fn negative_values_on_the_command_line() {
    let neg = bin()
        .args(["verify", "--claim", "oper_route", "--type", "A", "--rank", "1", "--lambda", "-2/3"])
        .output()
        .unwrap();
    assert!(neg.status.success());
    assert!(String::from_utf8_lossy(&neg.stderr).contains(r#""lambda":"-2/3"} PASS"#));

    let pts = bin()
        .args(["verify", "--claim", "hitchin_iota", "--type", "A", "--rank", "2", "--points", "-3,1/2"])
        .output()
        .unwrap();
    assert!(pts.status.success());
    assert!(String::from_utf8_lossy(&pts.stderr).contains(r#""points":["-3","1/2"]"#));
}
