use std::path::Path;
use std::process::{Command, Output};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubicfields")).args(args).env_remove("CUBICFIELDS_CACHE").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn summary(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&cli(&["no-such-command"])), 2);
    assert_eq!(code(&cli(&["count", "--bound", "1e4", "--split", "7:xyz"])), 2);
    assert_eq!(code(&cli(&["count", "--bound", "1e4", "--split", "8:111"])), 2);
    assert_eq!(code(&cli(&["invariants", "--disc", "5", "--form", "1,0,0,-2"])), 2);
    let o = cli(&["count", "--alpha", "1", "--beta", "1.3", "--fit-secondary", "--samples", "1e4,1e5,1e6,1e7"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("7/5"));
}

#[test]
fn capacity_errors_exit_three() {
    let o = cli(&["independence", "--p", "5", "--alpha", "1", "--beta", "1", "--bound", "1e6"]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn invariants_of_a_form() {
    let o = cli(&["invariants", "--form", "1,0,-3,-1"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    for line in ["disc=81", "D=1", "F=9", "radical=3", "maximal=true"] {
        assert!(s.lines().any(|l| l == line), "{line} missing from\n{s}");
    }
}

#[test]
fn phi_verify_passes_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let sum = dir.path().join("s.txt");
    let o = cli(&["phi-verify", "--d", "-23", "--zmax", "60", "--summary", sum.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let s = summary(&sum);
    assert!(s.contains("mismatches=0") && s.contains("status=PASS") && s.contains("acceptance_version=1.0.0"), "{s}");
}

#[test]
fn enumerate_then_count_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let c = cache.to_str().unwrap();
    let o = cli(&["--cache", c, "enumerate", "--bound", "300000", "--shard-width", "100000"]);
    assert_eq!(code(&o), 0);
    let sha = stdout(&o).lines().find_map(|l| l.strip_prefix("cache_manifest_sha256=").map(String::from)).unwrap();

    let run = |name: &str| {
        let p = dir.path().join(name);
        let o = cli(&[
            "--cache",
            c,
            "--summary",
            p.to_str().unwrap(),
            "count",
            "--alpha",
            "1",
            "--beta",
            "2",
            "--bound",
            "3e5",
            "--inf",
            "complex",
        ]);
        assert_eq!(code(&o), 0);
        (o.stdout, summary(&p))
    };
    let (a, sa) = run("a.txt");
    let (b, sb) = run("b.txt");
    assert_eq!(a, b);
    assert_eq!(sa, sb);
    assert!(sa.contains(&format!("cache_manifest_sha256={sha}")));
    assert!(sa.lines().any(|l| l.starts_with("count=") && l != "count=0"));

    let o = cli(&["--cache", c, "validate"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn validate_flags_external_differences() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let c = cache.to_str().unwrap();
    assert_eq!(code(&cli(&["--cache", c, "enumerate", "--bound", "1000"])), 0);
    let ext = dir.path().join("ext.txt");
    std::fs::write(&ext, "# bound: 100\nx^3 - x^2 - 2x + 1, 49\nx^3 + x + 1, -31\n").unwrap();
    let o = cli(&["--cache", c, "validate", "--external", ext.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("missing [-87, -83, -76, -59, -44, -23, 81]"), "{}", stdout(&o));
}

#[test]
fn report_subset_runs_without_census() {
    let o = cli(&["report", "--only", "5,6"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("PASS [5]") && s.contains("PASS [6]"), "{s}");
}
