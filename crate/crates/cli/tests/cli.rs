use std::path::{Path, PathBuf};
use std::process::Command;

use gframe_core::scenarios::{
    load_scenario, noncommuting_fixture, partially_commuting_fixture, random_scenario, rank_deficient_fixture,
    save_scenario, RandomSpec,
};
use gframe_lab::{exit, run};
use tempfile::TempDir;

fn lab(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["gframe-lab"];
    full.extend_from_slice(args);
    let code = run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write_fixture(dir: &TempDir, name: &str, s: &gframe_core::Scenario) -> PathBuf {
    let path = dir.path().join(name);
    save_scenario(s, &path).unwrap();
    path
}

fn json(text: &str) -> serde_json::Value {
    serde_json::from_str(text).unwrap()
}

#[test]
fn example15_check_is_tight_frame() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("e.json");
    let (code, out, _) = lab(&[
        "gen",
        "--preset",
        "example15",
        "--nodes",
        "1024",
        "--out",
        path_str(&file),
    ]);
    assert_eq!(code, exit::PASS);
    assert!(out.contains("example15-n1024"));
    let (code, out, _) = lab(&["check", path_str(&file), "--format", "json"]);
    assert_eq!(code, exit::PASS);
    let r = json(&out);
    assert_eq!(r["verdicts"]["plain_tight"]["passed"], true);
    let a = r["metrics"]["plain_lower"]["value"].as_f64().unwrap();
    assert!((a - std::f64::consts::PI).abs() < 1e-6);
}

#[test]
fn rank_deficient_check_is_bessel_only() {
    let dir = TempDir::new().unwrap();
    let file = write_fixture(&dir, "rd.json", &rank_deficient_fixture().unwrap());
    let (code, _, _) = lab(&["check", path_str(&file)]);
    assert_eq!(code, exit::BESSEL_ONLY);
}

#[test]
fn indefinite_controlled_form_is_not_a_frame() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("r.json");
    let args = ["gen", "--preset", "random", "--n", "2", "--blocks", "1", "--seed", "1"];
    let (code, _, _) = lab(&[&args[..], &["--out", path_str(&file)]].concat());
    assert_eq!(code, exit::PASS);
    let (code, out, _) = lab(&["check", path_str(&file), "--format", "json"]);
    assert_eq!(code, exit::NOT_FRAME);
    assert!(json(&out)["metrics"]["controlled_lower"]["value"].as_f64().unwrap() < 0.0);
}

#[test]
fn dual_on_singular_frame_operator() {
    let dir = TempDir::new().unwrap();
    let file = write_fixture(&dir, "rd.json", &rank_deficient_fixture().unwrap());
    let out = dir.path().join("dual.json");
    let (code, _, _) = lab(&["dual", path_str(&file), "--mode", "general", "--out", path_str(&out)]);
    assert_eq!(code, exit::SINGULAR);
    assert!(!out.exists());
}

#[test]
fn symmetric_mode_on_noncommuting_fixture_fails() {
    let dir = TempDir::new().unwrap();
    let file = write_fixture(&dir, "nc.json", &noncommuting_fixture().unwrap());
    let (code, out, _) = lab(&[
        "audit",
        path_str(&file),
        "--theorem",
        "3.7",
        "--mode",
        "paper",
        "--format",
        "json",
    ]);
    assert_eq!(code, exit::AUDIT_FAIL);
    assert!(json(&out)["metrics"]["dual_residual"]["value"].as_f64().unwrap() > 1e-3);

    let dual = dir.path().join("d.json");
    let (code, _, _) = lab(&["dual", path_str(&file), "--mode", "paper", "--out", path_str(&dual)]);
    assert_eq!(code, exit::AUDIT_FAIL);
    let (code, _, _) = lab(&["dual", path_str(&file), "--mode", "general", "--out", path_str(&dual)]);
    assert_eq!(code, exit::PASS);
}

#[test]
fn missing_gamma_is_incomplete() {
    let dir = TempDir::new().unwrap();
    let file = write_fixture(&dir, "nc.json", &noncommuting_fixture().unwrap());
    for t in ["3.3", "3.4", "3.6"] {
        let (code, _, _) = lab(&["audit", path_str(&file), "--theorem", t]);
        assert_eq!(code, exit::INCOMPLETE, "theorem {t}");
    }
}

#[test]
fn file_and_format_errors() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("absent.json");
    let (code, _, err) = lab(&["check", path_str(&missing)]);
    assert_eq!(code, exit::IO_FORMAT);
    assert!(!err.is_empty());

    let garbage = dir.path().join("bad.json");
    std::fs::write(&garbage, "{\"format\": \"gframe-lab-scenario\"").unwrap();
    let (code, _, _) = lab(&["audit", path_str(&garbage), "--theorem", "2.1"]);
    assert_eq!(code, exit::IO_FORMAT);
}

#[test]
fn usage_errors() {
    assert_eq!(lab(&[]).0, exit::USAGE);
    assert_eq!(lab(&["check"]).0, exit::USAGE);
    assert_eq!(lab(&["audit", "x.json", "--theorem", "9.9"]).0, exit::USAGE);
    assert_eq!(lab(&["check", "x.json", "--dual-tol", "-1"]).0, exit::USAGE);
    assert_eq!(lab(&["--help"]).0, exit::PASS);

    let dir = TempDir::new().unwrap();
    let out = dir.path().join("g.json");
    let o = path_str(&out);
    assert_eq!(
        lab(&["gen", "--preset", "example15", "--nodes", "0", "--out", o]).0,
        exit::USAGE
    );
    assert_eq!(
        lab(&["gen", "--preset", "random", "--cond", "0.5", "--out", o]).0,
        exit::USAGE
    );
    assert_eq!(
        lab(&["gen", "--preset", "example15", "--p-diag", "1,-1", "--out", o]).0,
        exit::USAGE
    );
}

#[test]
fn commuting_scenario_passes_every_audit() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("c.json");
    let (code, _, _) = lab(&[
        "gen",
        "--preset",
        "random",
        "--n",
        "4",
        "--blocks",
        "2,2,3",
        "--seed",
        "7",
        "--commuting",
        "--out",
        path_str(&file),
    ]);
    assert_eq!(code, exit::PASS);
    for t in ["2.1", "2.2", "2.5", "2.6", "2.7", "3.5", "3.7"] {
        for mode in ["paper", "general"] {
            let (code, out, _) = lab(&["audit", path_str(&file), "--theorem", t, "--mode", mode]);
            assert_eq!(code, exit::PASS, "theorem {t} mode {mode}\n{out}");
        }
    }
    let dual = dir.path().join("d.json");
    let (code, _, _) = lab(&[
        "dual",
        path_str(&file),
        "--mode",
        "general",
        "--kernel-seed",
        "3",
        "--out",
        path_str(&dual),
    ]);
    assert_eq!(code, exit::PASS);
    for t in ["3.3", "3.4", "3.6"] {
        let (code, out, _) = lab(&["audit", path_str(&dual), "--theorem", t]);
        assert_eq!(code, exit::PASS, "theorem {t}\n{out}");
    }
}

#[test]
fn canonical_pair_reconstruction_residuals() {
    let dir = TempDir::new().unwrap();
    let s = random_scenario(&RandomSpec {
        n: 3,
        blocks: vec![2, 1, 2],
        condition: 20.0,
        commuting: false,
        seed: 11,
    })
    .unwrap();
    let file = write_fixture(&dir, "g.json", &s);
    let dual = dir.path().join("d.json");
    let (code, out, _) = lab(&[
        "dual",
        path_str(&file),
        "--mode",
        "general",
        "--out",
        path_str(&dual),
        "--format",
        "json",
    ]);
    assert_eq!(code, exit::PASS);
    assert!(json(&out)["metrics"]["residual"]["value"].as_f64().unwrap() <= 1e-10);
    let (code, out, _) = lab(&["audit", path_str(&dual), "--theorem", "3.4", "--format", "json"]);
    assert_eq!(code, exit::PASS);
    let r = json(&out);
    for k in 1..=4 {
        assert!(r["metrics"][format!("condition_{k}")]["value"].as_f64().unwrap() <= 1e-10);
    }
}

#[test]
fn symmetric_mode_matches_general_for_identity_controller() {
    let dir = TempDir::new().unwrap();
    let src = dir.path().join("e.json");
    lab(&["gen", "--preset", "example15", "--nodes", "64", "--out", path_str(&src)]);
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    assert_eq!(
        lab(&["dual", path_str(&src), "--mode", "paper", "--out", path_str(&a)]).0,
        exit::PASS
    );
    assert_eq!(
        lab(&["dual", path_str(&src), "--mode", "general", "--out", path_str(&b)]).0,
        exit::PASS
    );
    let ga = load_scenario(&a).unwrap().gamma.unwrap();
    let gb = load_scenario(&b).unwrap().gamma.unwrap();
    let diff = (&ga.stacked_blocks() - &gb.stacked_blocks()).max_abs();
    assert!(diff <= 1e-12, "{diff}");
}

#[test]
fn gen_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let flags = [
        "gen", "--preset", "random", "--n", "4", "--blocks", "2,2,3", "--seed", "7",
    ];
    lab(&[&flags[..], &["--out", path_str(&a)]].concat());
    lab(&[&flags[..], &["--out", path_str(&b)]].concat());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn reports_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let file = write_fixture(&dir, "nc.json", &noncommuting_fixture().unwrap());
    for args in [
        vec!["check", path_str(&file), "--format", "json"],
        vec![
            "audit",
            path_str(&file),
            "--theorem",
            "2.7",
            "--format",
            "json",
            "--samples",
            "16",
            "--seed",
            "3",
        ],
        vec!["audit", path_str(&file), "--theorem", "3.7", "--format", "text"],
    ] {
        let first = lab(&args);
        let second = lab(&args);
        assert_eq!(first, second);
    }
}

#[test]
fn report_written_to_out_path() {
    let dir = TempDir::new().unwrap();
    let file = write_fixture(&dir, "nc.json", &noncommuting_fixture().unwrap());
    let report = dir.path().join("report.json");
    let (code, out, _) = lab(&["check", path_str(&file), "--format", "json", "--out", path_str(&report)]);
    assert!(out.is_empty());
    let r = json(&std::fs::read_to_string(&report).unwrap());
    assert_eq!(r["exit_code"], code);
    assert!(r["tolerances"]["dual_tol"].is_number());
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_gframe-lab");
    let dir = TempDir::new().unwrap();
    let file = write_fixture(&dir, "rd.json", &rank_deficient_fixture().unwrap());
    let status = Command::new(bin).args(["check", path_str(&file)]).output().unwrap();
    assert_eq!(status.status.code(), Some(exit::BESSEL_ONLY));
    let status = Command::new(bin).arg("frobnicate").output().unwrap();
    assert_eq!(status.status.code(), Some(exit::USAGE));
}

#[test]
fn synthesis_norm_fails_when_controllers_skip_the_frame_operator() {
    let dir = TempDir::new().unwrap();
    let file = write_fixture(&dir, "pc.json", &partially_commuting_fixture().unwrap());
    let (code, out, _) = lab(&["audit", path_str(&file), "--theorem", "3.5", "--format", "json"]);
    assert_eq!(code, exit::AUDIT_FAIL);
    assert!(json(&out)["metrics"]["relative_gap"]["value"].as_f64().unwrap() > 1e-3);
}
