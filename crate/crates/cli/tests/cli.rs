use std::process::Command;

fn evoqmarl() -> Command {
    Command::new(env!("CARGO_BIN_EXE_evoqmarl"))
}

#[test]
fn small_run_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let status = evoqmarl()
        .args(["--agent", "nn", "--hidden", "3,4", "--population", "10", "--generations", "3"])
        .args(["--tau", "2", "--seeds", "0,1", "--trace", "--out"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    for name in ["seed_0.csv", "seed_1.csv", "aggregate.csv", "manifest.json", "trace_seed_0.txt"] {
        assert!(dir.path().join(name).exists(), "{name} missing");
    }
    let trace = std::fs::read_to_string(dir.path().join("trace_seed_1.txt")).unwrap();
    assert_eq!(trace.lines().count(), 1 + 50);
}

#[test]
fn usage_errors_exit_nonzero() {
    for args in [
        vec!["--agent", "dqn"],
        vec!["--strategy", "nope"],
        vec!["--tau", "300"],
        vec!["--sigma", "-0.5"],
    ] {
        let out = evoqmarl().args(&args).output().unwrap();
        assert!(!out.status.success(), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}
