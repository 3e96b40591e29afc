use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use morita_core::workspace::{Document, Workspace};

fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn morita(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_morita"))
        .current_dir(manifest_dir())
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

/// Compares against `tests/golden/<name>`; `UPDATE_GOLDEN=1` rewrites.
fn golden(name: &str, args: &[&str]) {
    let out = morita(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let path = manifest_dir().join("tests/golden").join(name);
    let actual = stdout(&out);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, &actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(actual, expected, "output of {args:?} differs from {name}");
}

#[test]
fn golden_matrix_algebra() {
    golden("matrix_algebra_3.txt", &["check", "matrix-algebra", "--n", "3", "--format", "text"]);
}

#[test]
fn golden_serre_swan_z2() {
    golden(
        "serre_swan_z2.json",
        &["check", "serre-swan", "--groupoid", "z2", "--reps", "trivial,sign,regular"],
    );
}

#[test]
fn golden_morita_certificate() {
    golden("morita_point_vs_pair.json", &["check", "morita", "--bibundle", "point_vs_pair"]);
}

#[test]
fn golden_gamma_sign() {
    golden("gamma_sign.json", &["compute", "gamma", "--rep", "sign", "--groupoid", "z2"]);
}

#[test]
fn golden_reconstruct_regular() {
    golden(
        "reconstruct_regular_mod.json",
        &["--workspace", "fixtures/workspace.json", "compute", "reconstruct", "--module", "regular_mod"],
    );
}

#[test]
fn golden_compose() {
    golden(
        "compose_point_vs_pair.json",
        &["compute", "compose", "--left", "pair_vs_point", "--right", "point_vs_pair"],
    );
}

#[test]
fn golden_convolve() {
    golden(
        "convolve_delta_s.json",
        &[
            "-i",
            "fixtures/z2.json",
            "compute",
            "convolve",
            "--a",
            "fixtures/z2_delta_s.json",
            "--b",
            "fixtures/z2_unit.json",
        ],
    );
}

#[test]
fn golden_modfunctor() {
    golden(
        "modfunctor_s3_to_z2.json",
        &[
            "--workspace",
            "fixtures/workspace.json",
            "compute",
            "modfunctor",
            "--bibundle",
            "s3_to_z2",
            "--module",
            "regular_mod",
        ],
    );
}

#[test]
fn validate_fixture_workspace() {
    let out = morita(&["validate", "--workspace", "fixtures/workspace.json", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).ends_with("checks passed\n"));
}

#[test]
fn broken_inverse_exits_one_with_named_violation() {
    let out = morita(&["validate", "fixtures/invalid/bad_inverse.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("inverse axiom"));
}

#[test]
fn broken_bibundle_reports_principality() {
    let out = morita(&["validate", "fixtures/invalid/broken_bibundle.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("principality"));
}

#[test]
fn malformed_scalar_exits_two() {
    let out = morita(&["validate", "-i", "fixtures/z2.json", "fixtures/invalid/bad_scalar.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("3/"));
}

#[test]
fn unknown_names_exit_two() {
    assert_eq!(morita(&["check", "morita", "--bibundle", "nope"]).status.code(), Some(2));
    assert_eq!(
        morita(&["check", "sigma", "--bibundle", "point_vs_pair", "--reps", "nope"]).status.code(),
        Some(2)
    );
    assert_eq!(morita(&["check", "no-such-check"]).status.code(), Some(2));
}

#[test]
fn non_constant_rank_exits_one() {
    let out = morita(&[
        "--workspace",
        "fixtures/workspace.json",
        "compute",
        "reconstruct",
        "--module",
        "blocks_1_2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("(\"1\", 2)"));
}

#[test]
fn non_equivalence_fails_morita_check() {
    let out = morita(&["check", "morita", "--bibundle", "unit_into_pair"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("\"pass\": false"));
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gamma.json");
    let out = morita(&[
        "compute",
        "gamma",
        "--rep",
        "sign",
        "--groupoid",
        "z2",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(matches!(Document::parse(&text).unwrap(), Document::Module(_)));
}

/// Every fixture document re-emits byte-identically.
#[test]
fn fixtures_round_trip() {
    let dir = manifest_dir().join("fixtures");
    let mut ws = Workspace::new();
    let names = ws.load_path(&dir.join("workspace.json")).unwrap();
    assert!(!names.is_empty());
    for name in names {
        let text = std::fs::read_to_string(dir.join(format!("{name}.json"))).unwrap();
        assert_eq!(ws.get(&name).unwrap().to_json(&name), text, "{name}");
    }
}

/// The checked-in fixtures match a fresh export.
#[test]
fn fixtures_are_current() {
    let tmp = tempfile::tempdir().unwrap();
    let out = morita(&["fixtures", "--dir", tmp.path().to_str().unwrap()]);
    assert!(out.status.success());
    let fixtures = manifest_dir().join("fixtures");
    for entry in std::fs::read_dir(tmp.path()).unwrap() {
        let entry = entry.unwrap();
        let name = entry.file_name();
        let fresh = std::fs::read_to_string(entry.path()).unwrap();
        let stored = std::fs::read_to_string(Path::new(&fixtures).join(&name)).unwrap();
        assert_eq!(fresh, stored, "{name:?}");
    }
}
