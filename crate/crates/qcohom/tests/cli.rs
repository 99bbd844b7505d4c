use std::process::Command;

use qcohom::cli::{run, SpaceSpec};
use serde_json::Value;

fn json(args: &[&str]) -> (i32, Value) {
    let mut argv = vec!["qcohom"];
    argv.extend_from_slice(args);
    let out = run(argv);
    assert!(out.stderr.is_empty(), "{}", out.stderr);
    (out.code, serde_json::from_str(&out.stdout).unwrap())
}

fn stderr_of(args: &[&str]) -> (i32, String) {
    let mut argv = vec!["qcohom"];
    argv.extend_from_slice(args);
    let out = run(argv);
    (out.code, out.stderr)
}

#[test]
fn space_names() {
    assert_eq!(SpaceSpec::parse("P3").unwrap(), SpaceSpec::Projective(3));
    assert_eq!(SpaceSpec::parse("P1xP2").unwrap(), SpaceSpec::Product(vec![1, 2]));
    assert_eq!(
        SpaceSpec::parse("Hyp(4, 3)").unwrap(),
        SpaceSpec::Hypersurface { n: 4, d: 3 }
    );
    assert_eq!(
        SpaceSpec::parse("Gr(2,5)").unwrap(),
        SpaceSpec::Grassmannian { r: 2, n: 5 }
    );
    for bad in ["P0", "Q2", "P1x", "Hyp(3,4)", "Gr(5,5)", "Gr(2)"] {
        assert!(SpaceSpec::parse(bad).is_err(), "{bad}");
    }
    assert_eq!(SpaceSpec::parse("P1xP1").unwrap().to_string(), "P1xP1");
}

#[test]
fn qperiod_csv_and_json() {
    let out = run(["qcohom", "qperiod", "--space", "P1", "-N", "10"]);
    assert_eq!(out.code, 0);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[0], "d,G_d,float");
    assert!(lines.contains(&"2,1,1e0"));
    assert!(lines.iter().any(|l| l.starts_with("4,1/4,")));
    assert!(lines.iter().any(|l| l.starts_with("6,1/36,")));

    let (code, v) = json(&["qperiod", "--space", "P1xP1", "-N", "4", "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(v["value"]["coefficients"][1]["G_d"], "2");
    assert_eq!(v["value"]["coefficients"][2]["G_d"], "3/2");
    for key in ["tool_version", "config_echo", "value", "error_estimates"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["qcohom", "spectrum", "--space", "Gr(2,4)"];
    assert_eq!(run(args).stdout, run(args).stdout);
}

#[test]
fn spectrum_of_gr25() {
    let (code, v) = json(&["spectrum", "--space", "Gr(2,5)"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "pass");
    assert!(v["value"]["T"].as_str().unwrap().starts_with("8.09016994"));
    assert_eq!(v["value"]["property_O"], true);
}

#[test]
fn check_gamma1_on_p2() {
    let (code, v) = json(&[
        "check-gamma1",
        "--space",
        "P2",
        "--digits",
        "50",
        "--order",
        "600",
        "--tmax",
        "40",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["config_echo"]["order"], 600);
    let (code, v) = json(&["check-gamma1", "--space", "P2", "--order", "600", "--tol", "1e-70"]);
    assert_eq!(code, 1);
    assert_eq!(v["verdict"], "fail");
}

#[test]
fn conifold_reports_condition_a_unverified() {
    let (code, v) = json(&["conifold", "--space", "Hyp(3,3)"]);
    assert_eq!(code, 0);
    assert_eq!(v["value"]["condition_a"], "not verified");
    assert_eq!(v["value"]["c0_shift"], "6");
    assert!(v["value"]["T_con"].as_str().unwrap().starts_with("21"));
    let (_, v) = json(&["conifold", "--space", "P2"]);
    assert!(v["value"]["T_con"].as_str().unwrap().starts_with('3'));
}

#[test]
fn mirror_side_commands() {
    let (code, v) = json(&["oscillatory", "--space", "P1", "--t", "1"]);
    assert_eq!((code, v["verdict"].as_str()), (0, Some("pass")));
    let (code, _) = json(&["lefschetz", "--space", "Hyp(3,2)", "--u", "0.05"]);
    assert_eq!(code, 0);
    let (code, v) = json(&["fekete", "--space", "Gr(2,4)", "-N", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["value"]["verdict_detail"], "Supermultiplicative");
    let (code, v) = json(&["apery", "--space", "Gr(2,5)", "-N", "20"]);
    assert_eq!(code, 0);
    let fits: Vec<&Value> = v["value"].as_array().unwrap().iter().map(|x| &x["zeta2_fit"]).collect();
    assert!(fits.iter().any(|f| f["b"] != "0"));
}

#[test]
fn exceptional_commands() {
    let out = run(["qcohom", "gram", "--space", "P2", "--format", "csv"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("i,j,exact,float\n"));
    assert!(out.stdout.contains("\n0,2,6,"));
    let (code, v) = json(&["gram", "--space", "P2", "--bundles", "-1,0,1"]);
    assert_eq!(code, 0);
    assert_eq!(v["value"]["exact"][0][2], "6");
    let (code, v) = json(&["mutate", "--space", "P3", "--sequence", "R1,L2,R3", "--phi", "0.1"]);
    assert_eq!(code, 0);
    assert_eq!(v["value"]["basis"].as_array().unwrap().len(), 4);
    assert!(v["value"]["phase"].is_object());
    assert_eq!(stderr_of(&["mutate", "--space", "P3", "--sequence", "X1"]).0, 2);
    assert_eq!(stderr_of(&["mutate", "--space", "P3", "--sequence", "R4"]).0, 2);
}

#[test]
fn rays_input() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("p1p1.json");
    std::fs::write(&good, "[[1,0],[0,1],[-1,0],[0,-1]]").unwrap();
    let out = run(["qcohom", "qperiod", "-N", "4", "--rays", good.to_str().unwrap()]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("\n2,2,") && out.stdout.contains("\n4,3/2,"));
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "[[2,0],[0,1],[-1,-1]]").unwrap();
    let (code, err) = stderr_of(&["qperiod", "--rays", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("not primitive"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(stderr_of(&["qperiod", "--space", "Q7"]).0, 2);
    assert_eq!(stderr_of(&["check-gamma1", "--space", "P2", "--digits", "10"]).0, 2);
    assert_eq!(stderr_of(&["frobnicate"]).0, 2);
    assert_eq!(stderr_of(&["ring"]).0, 2);
    assert_eq!(stderr_of(&["lefschetz", "--space", "P2"]).0, 2);
    assert_eq!(stderr_of(&["oscillatory", "--space", "Gr(2,5)"]).0, 2);
    assert_eq!(run(["qcohom", "--help"]).code, 0);
}

#[test]
fn config_file_and_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let out_path = dir.path().join("out.json");
    std::fs::write(
        &cfg,
        format!(
            "# defaults\ndigits = 30\norder = 12\nformat = json\noutput = {}\n",
            out_path.display()
        ),
    )
    .unwrap();
    let out = run([
        "qcohom",
        "jseries",
        "--space",
        "P2",
        "--config",
        cfg.to_str().unwrap(),
        "--order",
        "9",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(v["config_echo"]["digits"], 30);
    assert_eq!(v["config_echo"]["order"], 9);

    std::fs::write(&cfg, "precision = 30\n").unwrap();
    let (code, err) = stderr_of(&["ring", "--space", "P1", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown key"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_qcohom");
    let ok = Command::new(bin).args(["ring", "--space", "P1"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(serde_json::from_slice::<Value>(&ok.stdout).is_ok());
    let bad = Command::new(bin).args(["ring", "--space", "nope"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let fail = Command::new(bin)
        .args(["spectrum", "--space", "P2", "--tol", "-1"])
        .output()
        .unwrap();
    assert_eq!(fail.status.code(), Some(2));
}
