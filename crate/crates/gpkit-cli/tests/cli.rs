use std::path::PathBuf;
use std::process::{Command, Output};

fn config(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "configs", name].iter().collect();
    p.display().to_string()
}

fn gpkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gpkit")).args(args).env_remove("GPKIT_THREADS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn dist_on_the_pentagon() {
    let o = gpkit(&["dist", "--config", &config("c5.gp"), "--x", "v1 v3 v1", "--y", ""]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "d=3 d_v1=2 d_v3=1 delta=3\n");
}

#[test]
fn raag_verdict_on_the_path() {
    let o = gpkit(&["verdict", "--config", &config("p4.gp"), "--target", "raag"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("yes"));
    assert!(lines.count() >= 3);
}

#[test]
fn dihedral_and_direct_sum_verdicts() {
    let o = gpkit(&["verdict", "--config", &config("dinf.gp"), "--target", "aut"]);
    assert!(stdout(&o).starts_with("dihedral-exception\n"));
    let o = gpkit(&["verdict", "--config", &config("z-z3-z2.gp"), "--target", "aut"]);
    assert!(stdout(&o).starts_with("yes\n"));
    let o = gpkit(&["verdict", "--config", &config("z-z3-z2.gp"), "--target", "structure"]);
    assert!(stdout(&o).starts_with("Hom(ℤ3∗ℤ2 → Z(ℤ)) ⋊ (Aut(ℤ) ⊕ Aut(ℤ3∗ℤ2))\n"), "{}", stdout(&o));
}

#[test]
fn suite_passes_and_is_deterministic() {
    let args = ["suite", "--config", &config("fp.gp"), "--radius", "3"];
    let a = gpkit(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    let text = stdout(&a);
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        for key in ["check", "instance", "status", "value", "expected"] {
            assert!(v.get(key).is_some(), "{line}");
        }
        assert_eq!(v["instance"], "fp");
        assert_ne!(v["status"], "fail", "{line}");
    }
    assert_eq!(stdout(&gpkit(&args)), text);
    let threaded = Command::new(env!("CARGO_BIN_EXE_gpkit")).args(args).env("GPKIT_THREADS", "3").output().unwrap();
    assert_eq!(stdout(&threaded), text);
}

#[test]
fn suite_output_is_fixed_by_the_seed() {
    let run = |seed: &str| {
        let o = gpkit(&["suite", "--config", &config("c5.gp"), "--radius", "3", "--samples", "300", "--seed", seed]);
        assert_eq!(o.status.code(), Some(0));
        stdout(&o)
    };
    assert_eq!(run("4"), run("4"));
}

#[test]
fn positioned_config_errors_exit_2() {
    let dir = std::env::temp_dir().join(format!("gpkit-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.gp");
    std::fs::write(&bad, "vertices a b\nedge a c\ngroup * cyclic 2\n").unwrap();
    let o = gpkit(&["genset", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("bad.gp:2:8: unknown vertex `c`"), "{err}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(gpkit(&["dist", "--config", &config("c5.gp")]).status.code(), Some(2));
    assert_eq!(gpkit(&["frobnicate"]).status.code(), Some(2));
    let o = gpkit(&["reduce", "--config", &config("c5.gp"), "--word", "v9"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn contracting_axes() {
    let w0 = gpkit(&["crossing", "--config", &config("c5.gp"), "--axis", "v1 v3 v5 v2 v4"]);
    assert_eq!(w0.status.code(), Some(0));
    assert!(stdout(&w0).ends_with("refuted=0 certified=true\n"));
    // v1 v3 lies in star(v2): rejected by the gate, refuted without it
    let gated = gpkit(&["crossing", "--config", &config("c5.gp"), "--axis", "v1 v3"]);
    assert_eq!(gated.status.code(), Some(2));
    let ungated = gpkit(&["crossing", "--config", &config("c5.gp"), "--axis", "v1 v3", "--ungated"]);
    assert_eq!(ungated.status.code(), Some(1));
    assert!(stdout(&ungated).contains("refuted=10"));
}

#[test]
fn window_audit_and_dot() {
    let o = gpkit(&["crossing", "--config", &config("c5.gp"), "--radius", "3", "--audit"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("violations=0\n"));
    let dot = stdout(&gpkit(&["export-dot", "--config", &config("c5.gp")]));
    assert!(dot.starts_with("graph gamma {"));
    assert_eq!(dot.matches(" -- ").count(), 5);
    let w = stdout(&gpkit(&["export-dot", "--config", &config("c5.gp"), "--window", "2"]));
    assert!(w.starts_with("graph crossing {") && w.trim_end().ends_with('}'));
}

#[test]
fn word_commands() {
    let c5 = config("c5.gp");
    let o = gpkit(&["reduce", "--config", &c5, "--word", "v1 v3 v1 v1 v2 v2"]);
    assert_eq!(stdout(&o), "v1 v3\n");
    let o = gpkit(&["reduce", "--config", &config("s3-edge.gp"), "--word", "s:1 s:1 c s:4"]);
    assert_eq!(stdout(&o), "s:4 c\n");
    let o = gpkit(&["hyperplanes", "--config", &config("fp.gp"), "--x", "1", "--y", "u v u^2"]);
    assert!(stdout(&o).ends_with("count=3\n"));
    let o = gpkit(&["median", "--config", &config("fp.gp"), "--x", "1", "--y", "u", "--z", "u^2"]);
    assert!(stdout(&o).starts_with("corners: 1 | u | u^2\n"));
    let o = gpkit(&["coneoff", "--config", &c5, "--x", "1", "--y", "v1 v3 v5 v2 v4"]);
    assert!(stdout(&o).ends_with("d_Y=2 N=1 lower_bound=2\n"));
    let o = gpkit(&["trees", "--config", &config("fp.gp"), "--x", "1", "--y", "u v u^2"]);
    assert!(stdout(&o).starts_with("u: T=4 TS=7\n"));
    let o = gpkit(&["genset", "--config", &c5]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("count=10 complete=true commuting-pairs=0\n"));
}
