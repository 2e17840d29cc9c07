//! End-to-end tests of the `fraclap` binary: generator counts, the exit
//! code contract (0 success / 1 validation failure / 2 input error) and
//! byte-reproducible scan output.

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fraclap"))
}

fn out_arg(dir: &Path) -> String {
    dir.to_str().unwrap().to_string()
}

#[test]
fn gen_lattice_counts() {
    let dir = tempfile::tempdir().unwrap();
    let output = bin()
        .args(["--out", &out_arg(dir.path()), "gen", "--graph", "lattice", "--dim", "2", "--radius", "40"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.contains("6561 vertices"), "{stdout}");
}

#[test]
fn gen_gasket_counts() {
    let dir = tempfile::tempdir().unwrap();
    let output = bin()
        .args(["--out", &out_arg(dir.path()), "gen", "--graph", "gasket", "--level", "7"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.contains("3282 vertices"), "{stdout}");
}

#[test]
fn gen_vicsek_header_names_generator() {
    let dir = tempfile::tempdir().unwrap();
    let output = bin()
        .args(["--out", &out_arg(dir.path()), "gen", "--graph", "vicsek", "--level", "3"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = std::fs::read_to_string(dir.path().join("graph.txt")).unwrap();
    assert!(text.starts_with("# vicsek level=3"), "header: {}", text.lines().next().unwrap());
    // 4·5^3 + 1 vertices
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 501);
}

#[test]
fn verify_default_suite_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let output = bin().args(["--out", &out_arg(dir.path()), "verify"]).output().unwrap();
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert_eq!(output.status.code(), Some(0), "stdout: {stdout}");
    assert!(stdout.contains("pass"));
    assert!(dir.path().join("pencil.csv").exists());
    assert!(dir.path().join("verify.txt").exists());
}

#[test]
fn verify_fault_injection_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let output = bin()
        .args(["--out", &out_arg(dir.path()), "verify", "--inject-fault"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("FAIL"), "{stdout}");
}

#[test]
fn scan_alpha_below_sigma_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let output = bin()
        .args([
            "--out",
            &out_arg(dir.path()),
            "scan",
            "--graph",
            "lattice",
            "--dim",
            "2",
            "--radius",
            "6",
            "--sigma",
            "0.5",
            "--alphas",
            "0.3",
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("alpha"), "{stderr}");
}

#[test]
fn unknown_graph_file_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let output = bin()
        .args([
            "--out",
            &out_arg(dir.path()),
            "spectrum",
            "--graph",
            "file",
            "--file",
            "/nonexistent/graph.txt",
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn scan_runs_from_config_file_and_reproduces() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("exp.cfg");
    std::fs::write(
        &cfg_path,
        "graph = lattice\ndim = 2\nradius = 8\nsigma = 0.5\nalphas = 0.6,0.75\nradii = 1..4\n",
    )
    .unwrap();
    let run = |out: &Path| {
        let output = bin()
            .args(["--config", cfg_path.to_str().unwrap(), "--out", &out_arg(out), "scan"])
            .output()
            .unwrap();
        assert_eq!(output.status.code(), Some(0), "{}", String::from_utf8_lossy(&output.stderr));
        std::fs::read(out.join("scan.csv")).unwrap()
    };
    let a = run(&dir.path().join("a"));
    let b = run(&dir.path().join("b"));
    assert_eq!(a, b);
}

#[test]
fn spectrum_csv_schema() {
    let dir = tempfile::tempdir().unwrap();
    let output = bin()
        .args([
            "--out",
            &out_arg(dir.path()),
            "spectrum",
            "--graph",
            "lattice",
            "--dim",
            "1",
            "--radius",
            "3",
            "--boundary",
            "dirichlet",
        ])
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = std::fs::read_to_string(dir.path().join("spectrum.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("index,lambda"));
    assert_eq!(lines.count(), 7);
}
