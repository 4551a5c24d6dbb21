use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hk4-verify"))
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf8")
}

#[test]
fn verify_all_passes_with_enough_records() {
    let o = run(&["verify", "all", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let records = &lines[1..];
    assert_eq!(lines[0]["records"].as_u64().unwrap() as usize, records.len());
    assert!(records.len() >= 40);
    assert!(records.iter().all(|r| r["status"] == "pass"));
    for key in ["check_id", "anchor", "expected", "computed"] {
        assert!(records.iter().all(|r| r[key].is_string()), "{key}");
    }
    let ids: Vec<&str> = records.iter().map(|r| r["check_id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
}

#[test]
fn verify_sym2_includes_named_checks() {
    let o = run(&["verify", "sym2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("qdualint-575"));
    assert!(text.contains("smalldisc-704"));
}

#[test]
fn unknown_scope_is_usage_error() {
    assert_eq!(run(&["verify", "bogus"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn reports_are_deterministic() {
    let a = run(&["verify", "cubic", "--json", "--seed", "7"]);
    let b = run(&["verify", "cubic", "--json", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn adapt_prints_f_and_g() {
    let o = run(&[
        "cubic",
        "adapt",
        "--point",
        "0,0,0,0,0,1",
        data("adapted.txt").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("F: X0*X1 + X2*X3 + X4^2"));
    assert!(text.contains("G: X0*X1*X2 + X1^3 + X2^3 + X3^3 + X4^3"));
    assert!(text.contains("reconstructs: true"));
}

#[test]
fn lines_surface_matches_adapt() {
    let o = run(&["cubic", "lines-surface", data("adapted.txt").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 2);
}

#[test]
fn precondition_and_parse_failures() {
    let o = run(&["cubic", "adapt", data("fermat.txt").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not a singular point"));
    assert_eq!(
        run(&["cubic", "adapt", data("garbage.txt").to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&[
            "cubic",
            "adapt",
            "--point",
            "1,2",
            data("adapted.txt").to_str().unwrap()
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        run(&["cubic", "adapt", "/nonexistent/cubic.txt"]).status.code(),
        Some(2)
    );
}

#[test]
fn two_node_quartic_identities() {
    let o = run(&[
        "cubic",
        "two-node-quartic",
        "--json",
        data("two_node.txt").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let fields: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let get = |name: &str| fields.iter().find(|f| f["field"] == name).unwrap()["value"].clone();
    assert_eq!(get("f"), "X1 + 2*X3");
    assert_eq!(get("det_M_eq_fP"), "true");
    assert_eq!(get("gradient_identity"), "true");
}

#[test]
fn duval_verdicts() {
    let cusp = run(&["cubic", "duval-check", data("cusp.txt").to_str().unwrap()]);
    assert!(stdout(&cusp).contains("verdict: accepted"));
    let triple = run(&[
        "cubic",
        "duval-check",
        "--point",
        "0,0,1",
        data("triple.txt").to_str().unwrap(),
    ]);
    assert!(stdout(&triple).contains("verdict: rejected"));
    assert_eq!(triple.status.code(), Some(0));
}

#[test]
fn yg_fit_hash_is_stable() {
    let path = data("net.txt");
    let a = run(&["cubic", "yg-fit", path.to_str().unwrap()]);
    let b = run(&["cubic", "yg-fit", path.to_str().unwrap()]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let hash = stdout(&a)
        .lines()
        .find_map(|l| l.strip_prefix("sha256: ").map(str::to_string))
        .unwrap();
    assert_eq!(hash, "d45ca621b488d02db3ec65d57f6fbdb740f4689bd751415a00eafedffae79f52");
}

#[test]
fn lattice_expression_invariants() {
    let o = run(&["lattice", "--json", "3*U + 2*E8(-1) + <-2>"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains(r#""field":"signature","value":"(3, 20)""#));
    assert_eq!(run(&["lattice", "U + Q"]).status.code(), Some(2));
}
