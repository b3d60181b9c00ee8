use std::process::{Command, Output};

use serde_json::Value;

fn nilgeo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilgeo")).args(args).env_remove("NILGEO_SEED").output().expect("spawn nilgeo")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 stdout")
}

fn last_line(o: &Output) -> String {
    stdout(o).lines().last().unwrap_or_default().to_string()
}

#[test]
fn validate_builtin_and_file() {
    let o = nilgeo(&["validate", "iwasawa"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("valid structure equations, complex dimension 3"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.nil");
    std::fs::write(&path, "# heisenberg times an elliptic curve\ndim 2\nd phi1 = 0\nd phi2 = phi1 ^ conj(phi1)\n").unwrap();
    let o = nilgeo(&["validate", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("complex dimension 2"));
}

#[test]
fn input_errors_exit_with_one() {
    let o = nilgeo(&["validate", "no_such_manifold"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("iwasawa_ab(t)"), "{err}");

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.nil");
    std::fs::write(&path, "dim 3\nd phi1 = 0\nd phi2 = 0\nd phi3 = phi1 ^^ phi2\n").unwrap();
    let o = nilgeo(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("[structeq]") && err.contains('4') && err.contains("16"), "{err}");

    assert_eq!(nilgeo(&["cohomology", "iwasawa", "--theory", "nonsense"]).status.code(), Some(1));
}

#[test]
fn iwasawa_report_summary() {
    let o = nilgeo(&["report", "iwasawa"]);
    assert!(o.status.success());
    assert_eq!(
        last_line(&o),
        "Kähler: NO (certificate verified) | balanced: YES (witness verified) | sG: YES (witness verified) | \
         Gauduchon: YES (witness verified) | ∂∂̄: NO | E1-degeneration: NO"
    );
}

#[test]
fn deformed_fibre_report_summary() {
    let o = nilgeo(&["report", "iwasawa_ab(1/10)"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let line = last_line(&o);
    assert!(line.contains("balanced: NO (certificate verified)"), "{line}");
    assert!(line.contains("sG: YES (witness verified)"), "{line}");
    assert!(line.contains("∂∂̄: NO"), "{line}");
}

#[test]
fn json_output_is_stable() {
    let a = nilgeo(&["--json", "metrics", "iwasawa", "--budget", "2000"]);
    let b = nilgeo(&["--json", "metrics", "iwasawa", "--budget", "2000"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "metrics");
    assert_eq!(v["invariant_level"], true);

    let c: Value = serde_json::from_slice(&nilgeo(&["--json", "cohomology", "iwasawa", "--theory", "derham"]).stdout).unwrap();
    assert_eq!(c["schema"], 1);
}

#[test]
fn deform_emits_parseable_equations() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fibre.nil");
    let o = nilgeo(&["deform", "iwasawa", "--psi", "builtin:iwasawa", "--at", "t12=1/10", "--emit", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("d phi3 = -phi1 ^ phi2 - 1/10 * phi2 ^ conj(phi2)"), "{text}");
    let o = nilgeo(&["validate", path.to_str().unwrap()]);
    assert!(o.status.success());

    let o = nilgeo(&["deform", "iwasawa", "--psi", "builtin:iwasawa", "--at", "t11=1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn kuranishi_family() {
    let o = nilgeo(&["kuranishi", "iwasawa"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("r = 2"), "{out}");
    assert!(out.contains("- t11 * t22 * theta3 (x) conj(phi3) + t12 * t21 * theta3 (x) conj(phi3)"), "{out}");
}

#[test]
fn example_listing() {
    let o = nilgeo(&["example"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().collect::<Vec<_>>(), ["iwasawa", "torus2", "torus3", "iwasawa_ab(t)"]);
    let o = nilgeo(&["example", "torus2"]);
    assert!(stdout(&o).starts_with("dim 2"));
}
