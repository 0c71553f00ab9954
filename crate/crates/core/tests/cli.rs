use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_rising-bandits");

fn sample_config() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/configs/cash.cfg")
}

fn rb(args: &[&str], seed_env: Option<&str>) -> Output {
    let mut cmd = Command::new(BIN);
    cmd.args(args).env_remove("RB_SEED");
    if let Some(seed) = seed_env {
        cmd.env("RB_SEED", seed);
    }
    cmd.output().expect("binary runs")
}

fn small_config(dir: &Path, policy: &str) -> PathBuf {
    let path = dir.join("small.cfg");
    let text = format!(
        "name = small\nhorizon = trials 20\nbase_seed = 5\n\n[arm]\ncurve = exponential 0.9 0.5 0.5\n\n[arm]\nkind = noisy\ncurve = exponential 0.95 0.3 0.8\nnoise = 0.02\n\n[policy]\nname = {policy}\n"
    );
    std::fs::write(&path, text).unwrap();
    path
}

fn manifest_seed(dir: &Path) -> u64 {
    let text = std::fs::read_to_string(dir.join("manifest.json")).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    value["base_seed"].as_u64().unwrap()
}

#[test]
fn run_writes_three_files_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let config = small_config(dir.path(), "rising_bandit");
    let result = rb(&["run", config.to_str().unwrap(), "--output", out.to_str().unwrap()], None);
    assert_eq!(result.status.code(), Some(0), "{}", String::from_utf8_lossy(&result.stderr));
    for file in ["trace.csv", "report.json", "manifest.json"] {
        assert!(out.join(file).is_file(), "{file} missing");
    }
    let csv = std::fs::read_to_string(out.join("trace.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("step,policy,replication,arm,reward,cost,candidate_set_size,best_so_far"));
    assert_eq!(lines.count(), 20);
}

#[test]
fn unknown_policy_exits_one_and_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_config(dir.path(), "smacx");
    let result = rb(&["run", config.to_str().unwrap(), "--output", dir.path().to_str().unwrap()], None);
    assert_eq!(result.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(stderr.contains("policy.name") && stderr.contains("smacx"), "{stderr}");
    assert!(stderr.contains(":14:"), "{stderr}");
}

#[test]
fn seed_precedence_is_flag_then_env_then_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_config(dir.path(), "average");
    let config = config.to_str().unwrap();
    let out = |name: &str| dir.path().join(name);

    rb(&["run", config, "--output", out("a").to_str().unwrap()], None);
    assert_eq!(manifest_seed(&out("a")), 5);
    rb(&["run", config, "--output", out("b").to_str().unwrap()], Some("77"));
    assert_eq!(manifest_seed(&out("b")), 77);
    rb(&["run", config, "--output", out("c").to_str().unwrap(), "--seed", "99"], Some("77"));
    assert_eq!(manifest_seed(&out("c")), 99);

    let bad = rb(&["run", config, "--output", out("d").to_str().unwrap()], Some("lots"));
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn reruns_are_byte_identical_whatever_the_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let config = sample_config();
    let config = config.to_str().unwrap();
    for (name, jobs) in [("one", "1"), ("four", "4")] {
        let out = dir.path().join(name);
        let result = rb(&["run", config, "--jobs", jobs, "--output", out.to_str().unwrap()], None);
        assert_eq!(result.status.code(), Some(0), "{}", String::from_utf8_lossy(&result.stderr));
    }
    for file in ["trace.csv", "report.json"] {
        let a = std::fs::read(dir.path().join("one").join(file)).unwrap();
        let b = std::fs::read(dir.path().join("four").join(file)).unwrap();
        assert!(a == b, "{file} differs");
    }
}

#[test]
fn report_numbers_are_finite_and_documented_keys_present() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let config = small_config(dir.path(), "rising_bandit_smooth");
    rb(&["run", config.to_str().unwrap(), "--output", out.to_str().unwrap()], None);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    let rep = &report["replications"][0]["report"];
    for key in ["j_oracle", "oracle_arm", "policies", "gamma", "theorem1", "corollary1", "theorem2_condition_holds"] {
        assert!(!rep[key].is_null(), "missing {key}");
    }
    assert!(report["summary"][0]["mean_regret"].as_f64().unwrap().is_finite());
}

#[test]
fn verify_exit_codes() {
    assert_eq!(rb(&["verify", "lemma1"], None).status.code(), Some(0));
    assert_eq!(rb(&["verify", "corollary1"], None).status.code(), Some(0));
    let bogus = rb(&["verify", "bogus"], None);
    assert_eq!(bogus.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bogus.stderr).contains("unknown suite"));
}
