//! End-to-end checks of the command-line interface: subcommands, exit
//! codes, config-file overrides, and the snapshot round trip.

use std::path::PathBuf;
use std::process::Command;

fn popmaj() -> Command {
    Command::new(env!("CARGO_BIN_EXE_popmaj"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("popmaj-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn run_emits_one_csv_row() {
    let out = popmaj()
        .args(["run", "--n", "8", "--num-a", "5", "--init", "all_unsettled", "--seed", "7"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = stdout.trim().lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("n,seed,trial,num_A,init_kind,interactions"));
    assert!(lines[1].starts_with("8,7,0,5,all_unsettled,"));
    assert!(lines[1].ends_with(",true"));
}

#[test]
fn run_emits_json_when_asked() {
    let out = popmaj()
        .args(["run", "--n", "5", "--init", "wrong_answers", "--seed", "3", "--out", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let parsed: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("valid json on stdout");
    assert_eq!(parsed[0]["n"], 5);
    assert_eq!(parsed[0]["correct"], true);
}

#[test]
fn run_overflow_exits_2() {
    let out = popmaj()
        .args(["run", "--n", "8", "--init", "all_unsettled", "--max-interactions", "5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_arguments_exit_3() {
    for args in [
        vec!["run", "--n", "8", "--init", "no_such_kind"],
        vec!["run"], // missing --n
        vec!["sweep", "--n", "8", "--kinds", "bogus"],
        vec!["verify", "--n", "2", "--inputs", "AX"],
        vec!["frobnicate"],
    ] {
        let out = popmaj().args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(3), "args {args:?}");
    }
}

#[test]
fn sweep_writes_csv_and_summary() {
    let csv_path = scratch("sweep.csv");
    let summary_path = scratch("summary.json");
    let out = popmaj()
        .args([
            "sweep",
            "--n", "4,5",
            "--trials", "2",
            "--seed", "11",
            "--kinds", "all_unsettled,wrong_answers",
            "--num-a-policy", "list:2",
            "--workers", "2",
        ])
        .arg("--out").arg(&csv_path)
        .arg("--summary").arg(&summary_path)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert_eq!(csv.trim().lines().count(), 1 + 2 * 2 * 2);
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&summary_path).unwrap()).unwrap();
    assert!(summary["groups"].as_array().unwrap().len() >= 2);

    // byte-identical rerun
    let csv2_path = scratch("sweep2.csv");
    popmaj()
        .args([
            "sweep",
            "--n", "4,5",
            "--trials", "2",
            "--seed", "11",
            "--kinds", "all_unsettled,wrong_answers",
            "--num-a-policy", "list:2",
            "--workers", "7",
        ])
        .arg("--out").arg(&csv2_path)
        .output()
        .unwrap();
    assert_eq!(csv, std::fs::read_to_string(&csv2_path).unwrap());
}

#[test]
fn verify_writes_report_and_exit_codes() {
    let report_path = scratch("verify.txt");
    let out = popmaj()
        .args(["verify", "--n", "2", "--inputs", "AB"])
        .arg("--report").arg(&report_path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let report = std::fs::read_to_string(&report_path).unwrap();
    assert!(report.contains("all_terminal_silent_correct=true"));
    assert!(report.contains("state_count=112"));

    // an infeasible space exits 2
    let out = popmaj()
        .args(["verify", "--n", "4", "--inputs", "AABB", "--cap-reset", "300",
               "--cap-wait", "500", "--cap-timer", "140"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn census_emits_per_n_counts() {
    let out = popmaj()
        .args(["census", "--n", "6", "--trials", "2", "--seed", "5",
               "--num-a-policy", "list:3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("n,distinct_states\n6,"));
}

#[test]
fn config_file_supplies_defaults_and_cli_overrides() {
    let cfg = scratch("run.cfg");
    std::fs::write(&cfg, "n=8\nnum-a=3\ninit=wrong_answers\nseed=21\n# comment\n").unwrap();
    let out = popmaj().arg("run").arg("--config").arg(&cfg).output().unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.lines().nth(1).unwrap().starts_with("8,21,0,3,wrong_answers,"));

    // the command line wins over the file
    let out = popmaj()
        .arg("run").arg("--config").arg(&cfg)
        .args(["--num-a", "6", "--seed", "22"])
        .output()
        .unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.lines().nth(1).unwrap().starts_with("8,22,0,6,wrong_answers,"));
}

#[test]
fn snapshot_file_feeds_run() {
    // build a silent snapshot through the library, feed it back via the CLI
    let path = scratch("silent.cfg");
    let config = popmaj::harness::silent_configuration(3, 6).unwrap();
    popmaj::engine::snapshot::save_snapshot(&config, &path).unwrap();
    let out = popmaj()
        .args(["run", "--n", "6"])
        .arg("--init").arg(format!("file:{}", path.display()))
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let row = stdout.lines().nth(1).unwrap();
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields[5], "0", "already silent: zero interactions");
    assert_eq!(fields[13], "true");
}
