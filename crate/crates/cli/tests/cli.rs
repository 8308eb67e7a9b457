use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_adiashort"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn adiashort")
}

fn golden(name: &str) -> Vec<u8> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn propagate_matches_golden() {
    let out = run(&["propagate"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(out.stdout, golden("propagate_default.csv"));
}

#[test]
fn sweep_matches_golden() {
    let out = run(&["sweep", "--a", "1,2,5,10", "--delta", "0,1", "--steps", "4000"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(out.stdout, golden("sweep_small.csv"));
}

#[test]
fn profile_matches_golden() {
    let out = run(&["profile", "--schedule", "tr", "--a", "10"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(out.stdout, golden("profile_tr_a10.csv"));
}

#[test]
fn file_output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for i in 0..2 {
        let stem = dir.path().join(format!("run{i}"));
        let status = bin()
            .args(["propagate", "--schedule", "approx", "--a", "4", "--delta", "1", "--format", "both", "--out"])
            .arg(&stem)
            .output()
            .unwrap()
            .status;
        assert!(status.success());
        outputs.push((
            std::fs::read(stem.with_extension("csv")).unwrap(),
            std::fs::read(stem.with_extension("svg")).unwrap(),
        ));
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# reference sweep, trimmed\nschedule = approx\na = 1, 10\ndelta = 0\nsteps = 1000\n").unwrap();
    let out = bin().arg("sweep").arg("--config").arg(&cfg).args(["--delta", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.split(',').nth(1) == Some("1.0000000000000000e0")));
}

#[test]
fn usage_and_validation_errors_exit_2() {
    for args in [
        &["frobnicate"][..],
        &["propagate", "--no-such-flag"],
        &["propagate", "--a", "0.5"],
        &["propagate", "--kappa0", "-1"],
        &["propagate", "--steps", "10"],
        &["propagate", "--a", "1,2"],
        &["propagate", "--format", "svg"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn unknown_config_key_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "kappa = 3\n").unwrap();
    let out = bin().arg("propagate").arg("--config").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn io_failures_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("no/such/dir/out");
    let out = bin().args(["profile", "--out"]).arg(&missing).output().unwrap();
    assert_eq!(out.status.code(), Some(1));

    let out = bin().arg("profile").arg("--config").arg(dir.path().join("absent.cfg")).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_0() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("sweep"));
}

#[test]
fn every_command_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    for (cmd, extra) in [
        ("profile", &[][..]),
        ("propagate", &["--schedule", "tr", "--a", "3"]),
        ("sweep", &["--a", "1,3", "--steps", "1000"]),
        ("waves", &["--kappa0", "10"]),
        ("compare", &["--kappa0", "10"]),
    ] {
        let stem = dir.path().join(cmd);
        let status = bin().arg(cmd).args(extra).args(["--format", "both", "--out"]).arg(&stem).output().unwrap().status;
        assert!(status.success(), "{cmd}");
        let csv = std::fs::read_to_string(stem.with_extension("csv")).unwrap();
        let svg = std::fs::read_to_string(stem.with_extension("svg")).unwrap();
        assert!(csv.lines().count() > 2, "{cmd}");
        assert!(svg.starts_with("<svg") && svg.contains("<polyline"), "{cmd}");
    }
}
