use std::path::Path;
use std::process::{Command, Output};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spectrum-game"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn dir_arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_writes_a_loadable_topology() {
    let dir = tempfile::tempdir().unwrap();
    let out = cli(&[
        "generate",
        "--cells",
        "25",
        "--seed",
        "3",
        "--out-dir",
        dir_arg(dir.path()),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stdout).contains("generated 25 cells"));
    let t = spectrum_game::NetworkTopology::load_file(dir.path().join("topology.txt")).unwrap();
    assert_eq!(t.n_cells(), 25);
}

#[test]
fn run_writes_trace_and_replays_byte_identically() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let out = cli(&[
        "run",
        "--algorithm",
        "standard",
        "--seed",
        "9",
        "--out-dir",
        dir_arg(a.path()),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let trace = a.path().join("trace.txt");
    let replay = cli(&[
        "run",
        "--replay",
        trace.to_str().unwrap(),
        "--out-dir",
        dir_arg(b.path()),
    ]);
    assert!(replay.status.success());
    for f in ["trace.txt", "topology.txt"] {
        assert_eq!(
            std::fs::read(a.path().join(f)).unwrap(),
            std::fs::read(b.path().join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn sweep_output_does_not_depend_on_workers() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let common = [
        "sweep",
        "--preset",
        "convergence",
        "--topologies",
        "2",
        "--trials",
        "15",
    ];
    let mut one = common.to_vec();
    one.extend(["--workers", "1", "--out-dir", dir_arg(a.path())]);
    let mut four = common.to_vec();
    four.extend(["--workers", "4", "--out-dir", dir_arg(b.path())]);
    assert!(cli(&one).status.success());
    assert!(cli(&four).status.success());
    for f in [
        "convergence.summary.csv",
        "convergence.cdf.csv",
        "convergence.trials.csv",
        "convergence.result.json",
    ] {
        assert_eq!(
            std::fs::read(a.path().join(f)).unwrap(),
            std::fs::read(b.path().join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir_arg(dir.path());
    assert_eq!(
        cli(&["run", "--preset", "nope", "--out-dir", d])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        cli(&["run", "--channels", "2", "--out-dir", d])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(cli(&["sweep", "--out-dir", d]).status.code(), Some(2));
    assert_eq!(
        cli(&[
            "run",
            "--algorithm",
            "standard",
            "--max-rounds",
            "1",
            "--out-dir",
            d
        ])
        .status
        .code(),
        Some(3)
    );

    let config = dir.path().join("cap.toml");
    let mut text = spectrum_game::config::RunConfig::preset("tiny-oracle")
        .unwrap()
        .to_toml();
    text = text.replace("oracle_cap = 10000000", "oracle_cap = 1");
    std::fs::write(&config, text).unwrap();
    let out = cli(&[
        "sweep",
        "--config",
        config.to_str().unwrap(),
        "--topologies",
        "2",
        "--out-dir",
        d,
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("warning: instance 0 skipped"));
}

#[test]
fn bad_config_file_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, "schema_version = 1\nunknown_key = 3\n").unwrap();
    let out = cli(&["run", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: "));
}
