use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const MODEL: &str = r#"{"t": 2, "blocks": [{"algebra": {"dim": 1, "constants": [[["1"]]], "unit": ["1"]},
    "l": 2, "e": 1, "r": 1, "r_prime": 1}], "eta": [[[[["1"], ["0"]], [["0"], ["1"]]]]]}"#;

fn sak(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sak"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn chow_example() {
    let o = sak(&["chow", "--matrix", "[[2,3]]", "--s", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "{\"degree\": 20}\n");
    let o = sak(&["chow", "--matrix", "[[2,3]]", "--s", "1", "--by-ring"]);
    assert_eq!(stdout(&o), "{\"degree\": 20}\n");
}

#[test]
fn realize_two_generator_family() {
    let dir = TempDir::new().unwrap();
    let model = write(dir.path(), "model.json", MODEL);
    for n in 1..=3 {
        let pair = write(
            dir.path(),
            "pair.json",
            &format!(r#"{{"phi_tor": [[{n}, 1]], "phi_ab": [[[1]]]}}"#),
        );
        let o = sak(&["realize", "--model", s(&model), "--pair", s(&pair)]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(
            stdout(&o),
            format!("{{\"realizable\": true, \"witness\": [[[[[\"{n}\"], [\"1\"]]]]]}}\n")
        );
    }
    let pair = write(dir.path(), "zero.json", r#"{"phi_tor": [[1, 0]], "phi_ab": [[[0]]]}"#);
    let o = sak(&["realize", "--model", s(&model), "--pair", s(&pair)]);
    assert_eq!(stdout(&o), "{\"realizable\": false, \"witness\": null}\n");
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let model = write(dir.path(), "model.json", MODEL);
    let bad_pair = write(
        dir.path(),
        "bad.json",
        r#"{"phi_tor": [["1/0", 1]], "phi_ab": [[[1]]]}"#,
    );
    let o = sak(&["realize", "--model", s(&model), "--pair", s(&bad_pair)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));

    let pair = write(dir.path(), "pair.json", r#"{"phi_tor": [[1, 1]], "phi_ab": [[[1]]]}"#);
    let wrong_t = write(dir.path(), "wrong.json", &MODEL.replace("\"t\": 2", "\"t\": 3"));
    assert_eq!(
        sak(&["realize", "--model", s(&wrong_t), "--pair", s(&pair)])
            .status
            .code(),
        Some(3)
    );

    let missing = dir.path().join("missing.json");
    assert_eq!(
        sak(&["realize", "--model", s(&missing), "--pair", s(&pair)])
            .status
            .code(),
        Some(4)
    );
    assert_eq!(sak(&["chow", "--matrix", "[[1]]", "--s", "2"]).status.code(), Some(12));
    assert_eq!(sak(&["chow", "--matrix", "[[1]]"]).status.code(), Some(2));
    assert_eq!(
        sak(&["alpha", "--deg1", "-1", "--deg2", "0", "--r", "1"]).status.code(),
        Some(12)
    );
}

#[test]
fn bhc_writes_csv_and_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let curve = write(
        dir.path(),
        "curve.json",
        r#"{"coords": [{"num": [0, 1]}, {"num": [1, -1]}]}"#,
    );
    let csv = dir.path().join("out.csv");
    let first = sak(&["bhc", "--curve", s(&curve), "--bound", "3", "--out", s(&csv)]);
    assert_eq!(first.status.code(), Some(0));
    let table = std::fs::read(&csv).unwrap();
    let text = String::from_utf8(table.clone()).unwrap();
    assert!(text.starts_with("a_vector,factor_poly,degree,height,root_of_unity_flag\n"));
    assert!(text.contains("\"[1,-1]\",2*x - 1,1,2.772588722240,false"));

    let again = sak(&["bhc", "--curve", s(&curve), "--bound", "3", "--out", s(&csv)]);
    assert_eq!(first.stdout, again.stdout);
    assert_eq!(table, std::fs::read(&csv).unwrap());
}

#[test]
fn output_flag_writes_file() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("r.json");
    let o = sak(&["--output", s(&out), "chow", "--matrix", "[[2]]", "--s", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "{\"degree\": 4}\n");
}

#[test]
fn form_samples_are_seeded() {
    let dir = TempDir::new().unwrap();
    let input = write(
        dir.path(),
        "form.json",
        r#"{"phi_tor": [[1, 2]], "z": [[1.0, 0.5], [0.3, -0.2]], "scale": "degree", "toric_weight": 1.0}"#,
    );
    let run = |seed: &str| sak(&["--seed", seed, "form", "--input", s(&input), "--samples", "5"]);
    let a = run("7");
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, run("7").stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["kernel_rank"], 1);
    assert_eq!(v["samples"], serde_json::json!([1, 1, 1, 1, 1]));
}

#[test]
fn help_lists_documented_flags() {
    let top = stdout(&sak(&["--help"]));
    for cmd in [
        "realize",
        "hom-check",
        "chow",
        "beta-gamma",
        "alpha",
        "height",
        "cone",
        "cover",
        "form",
        "quadrature",
        "bhc",
    ] {
        assert!(top.contains(cmd), "missing subcommand {cmd}");
    }
    for flag in ["--output", "--seed"] {
        assert!(top.contains(flag), "missing {flag}");
    }
    let flags: &[(&str, &[&str])] = &[
        ("realize", &["--model", "--pair", "--t-prime"]),
        ("hom-check", &["--model", "--target", "--pair"]),
        ("chow", &["--matrix", "--s", "--by-ring"]),
        ("beta-gamma", &["--input", "--i", "--which"]),
        ("alpha", &["--deg1", "--deg2", "--r"]),
        ("height", &["--input"]),
        ("cone", &["--input"]),
        ("cover", &["--input"]),
        ("form", &["--input", "--tol", "--samples"]),
        ("quadrature", &["--input", "--tol"]),
        ("bhc", &["--curve", "--bound", "--out"]),
    ];
    for (cmd, expected) in flags {
        let o = sak(&[cmd, "--help"]);
        assert_eq!(o.status.code(), Some(0));
        let text = stdout(&o);
        for flag in *expected {
            assert!(text.contains(flag), "{cmd} --help lacks {flag}");
        }
    }
}
