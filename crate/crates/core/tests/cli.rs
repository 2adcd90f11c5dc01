use std::fs;
use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_osg-bell"))
}

fn config() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs/reference.conf")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("osg-bell-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn scan_to(path: &PathBuf, method: &str) {
    let status = bin()
        .args(["scan", "--config"])
        .arg(config())
        .args([
            "--var",
            "T",
            "--from",
            "0",
            "--to",
            "6.283185307179586",
            "--steps",
            "9",
            "--eps-units",
        ])
        .args(["--method", method, "--out"])
        .arg(path)
        .status()
        .unwrap();
    assert!(status.success());
}

#[test]
fn scan_output_is_byte_identical_across_runs() {
    let (a, b) = (scratch("a.csv"), scratch("b.csv"));
    scan_to(&a, "both");
    scan_to(&b, "both");
    let (ta, tb) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let text = String::from_utf8(ta).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), osg_bell::scan::CSV_HEADER);
    assert_eq!(lines.count(), 18);
    let rows = osg_bell::scan::parse_csv(&text).unwrap();
    assert!(rows.iter().step_by(2).all(|r| r.cutoff.is_none()));
    assert!(rows
        .iter()
        .skip(1)
        .step_by(2)
        .all(|r| r.cutoff == Some(128)));
}

#[test]
fn stdout_matches_file_output() {
    let path = scratch("closed.csv");
    scan_to(&path, "closed");
    let out = bin()
        .args(["scan", "--config"])
        .arg(config())
        .args([
            "--var",
            "T",
            "--from",
            "0",
            "--to",
            "6.283185307179586",
            "--steps",
            "9",
            "--eps-units",
        ])
        .args(["--method", "closed"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(out.stdout, fs::read(&path).unwrap());
}

#[test]
fn compare_exit_status_tracks_convention() {
    let run = |convention: &str| {
        bin()
            .args(["compare", "--config"])
            .arg(config())
            .args([
                "--override",
                "T2=1.3e-8",
                "--var",
                "T1",
                "--from",
                "0.7",
                "--to",
                "0.7",
            ])
            .args(["--steps", "1", "--eps-units", "--convention", convention])
            .output()
            .unwrap()
    };
    let good = run("second-atom");
    assert_eq!(
        good.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&good.stdout)
    );
    let bad = run("first-atom");
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stdout).contains("FAIL"));
}

#[test]
fn run_reports_both_methods() {
    let out = bin()
        .args(["run", "--config"])
        .arg(config())
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("closed-form ρ"));
    assert!(text.contains("oracle ρ, N = 128"));
    assert!(text.contains("max |ρ_closed − ρ_oracle|"));
}

#[test]
fn configuration_errors_exit_with_two() {
    let bad = scratch("bad.conf");
    fs::write(&bad, "mass = 1e-26\nepsilon = 1e8\nlamda = 1e-5\n").unwrap();
    let out = bin().args(["run", "--config"]).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3"), "{err}");

    let out = bin()
        .args(["run", "--config"])
        .arg(config())
        .args(["--override", "mass=-1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oversized_packet_reports_cutoff() {
    let out = bin()
        .args(["run", "--config"])
        .arg(config())
        .args(["--override", "x0_1=3.6e-6", "--method", "oracle"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cutoff"));
}
