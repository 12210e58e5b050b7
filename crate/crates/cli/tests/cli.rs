use std::process::{Command, Output};

use mocktheta::VerifyReport;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mocktheta"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_single_identity_passes() {
    let o = run(&["verify", "thm1-nu", "--q-order", "60", "--z-order", "30"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS"));
}

#[test]
fn unknown_identity_is_a_usage_error() {
    let o = run(&["verify", "no-such-id"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no-such-id"));
    assert_eq!(run(&["verify"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "pnt-nu", "--q-order", "0"]).status.code(), Some(2));
    assert_eq!(run(&["coeffs", "nope", "--q-order", "3"]).status.code(), Some(2));
    assert_eq!(
        run(&["verify", "pnt-nu", "--perturb", "garbage"]).status.code(),
        Some(2)
    );
}

#[test]
fn injected_fault_exits_one_with_witness() {
    let o = run(&[
        "verify",
        "thm1-omega",
        "--q-order",
        "20",
        "--z-order",
        "5",
        "--perturb",
        "thm1-omega-rhs:1:5:1",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["status"], "fail");
    assert_eq!(v["first_mismatch"]["z_degree"], 1);
    assert_eq!(v["first_mismatch"]["q_exponent"], 5);
    assert!(v["first_mismatch"]["lhs"].is_string());
    let report: VerifyReport = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(serde_json::to_string(&report).unwrap(), stdout(&o).trim());

    let o = run(&["verify", "pnt-nu", "--q-order", "40", "--skip-term", "pnt-nu-rhs:1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("first mismatch at z^0 q^5"));
}

#[test]
fn json_lines_round_trip_byte_identical() {
    let o = run(&["verify", "--all", "--q-order", "40", "--z-order", "10", "--n-max", "4", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines.len() > 20);
    let mut ids = Vec::new();
    for line in &lines {
        let report: VerifyReport = serde_json::from_str(line).unwrap();
        assert_eq!(serde_json::to_string(&report).unwrap(), *line);
        let positions: Vec<usize> = ["identity", "status", "q_order", "z_order", "first_mismatch", "elapsed_ms"]
            .iter()
            .map(|k| line.find(&format!("\"{k}\":")).unwrap())
            .collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]), "{line}");
        ids.push(report.identity);
        assert!(!line.contains('.'));
    }
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
}

#[test]
fn csv_report_has_header() {
    let o = run(&["verify", "eq13", "--n-max", "5", "--csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("identity,status,q_order,z_order,z_degree,q_exponent,lhs,rhs,elapsed_ms")
    );
    assert!(lines.next().unwrap().starts_with("eq13,pass,"));
}

#[test]
fn coefficient_listings() {
    let o = run(&["coeffs", "pnt-omega-rhs", "--q-order", "50"]);
    assert_eq!(stdout(&o), "1 1\n3 1\n11 -1\n17 -1\n33 1\n43 1\n");
    let o = run(&["coeffs", "q-omega", "--q-order", "6"]);
    assert_eq!(stdout(&o), "1 1\n2 2\n3 3\n4 4\n5 6\n6 8\n");
    let o = run(&["coeffs", "q-omega", "--q-order", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "");
    let o = run(&["coeffs", "omega-z-simple", "--q-order", "3", "--z-degree", "1"]);
    assert_eq!(stdout(&o), "1 1\n2 1\n3 1\n");
}

#[test]
fn partition_tables() {
    let o = run(&["table", "pomega", "--max", "5", "--csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "n,count,series_coeff,agree\n1,1,1,true\n2,2,2,true\n3,3,3,true\n4,4,4,true\n5,6,6,true\n"
    );
    let o = run(&["table", "pnu", "--max", "3", "--csv"]);
    assert_eq!(
        stdout(&o),
        "n,count,series_coeff,agree\n0,1,1,true\n1,1,1,true\n2,2,2,true\n3,2,2,true\n"
    );
    let o = run(&["table", "pomega", "--max", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "");
    let o = run(&["table", "pnu", "--max", "12"]);
    assert!(stdout(&o).lines().all(|l| l.ends_with("OK")));
}
