use std::process::{Command, Output};

fn lrising(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lrising")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

#[test]
fn hamiltonian_pair() {
    let out = lrising(&["hamiltonian", "\u{2011}1,1", "--alpha", "2", "--tol", "1e-10"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema_version"], 1);
    assert!((v["result"]["value"].as_f64().unwrap() - 6.579736).abs() < 1e-6);
    assert!(v["result"]["error_bound"].as_f64().unwrap() <= 1e-10);
    assert_eq!(v["config"]["command"]["hamiltonian"]["alpha"].as_f64(), Some(2.0));
}

#[test]
fn census_rows() {
    let out = lrising(&["census", "--rmax", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = json(&out)["result"].as_array().unwrap().clone();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0]["R"], 2);
    assert_eq!(rows[0]["count_exact"], 1);
    let csv = lrising(&["census", "--rmax", "4", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("R,count_exact,bound,ratio\n2,1,"));
}

#[test]
fn verify_energy_estimate_passes() {
    let out = lrising(&["verify", "energy-estimate", "--L", "6", "--alpha", "2", "--M", "64", "--a", "1.5"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["result"]["violations"], 0);
    assert!(v["result"]["instances_checked"].as_u64().unwrap() >= 8191);
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = ["stability", "--alpha", "1.5", "--delta", "0.5", "--hstar", "0.3"];
    let a = lrising(&args);
    let b = lrising(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["result"]["decision"], "stable");
}

#[test]
fn exit_codes() {
    assert_eq!(lrising(&["hamiltonian", "1,2", "--alpha", "2"]).status.code(), Some(2));
    assert_eq!(lrising(&["hamiltonian", "-1,1", "--alpha", "3"]).status.code(), Some(2));
    assert_eq!(lrising(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(lrising(&["census", "--rmax", "40"]).status.code(), Some(3));
    assert_eq!(lrising(&["verify", "cover-relation", "--M", "4", "--a", "1.5"]).status.code(), Some(2));
    assert_eq!(lrising(&["hamiltonian", "-1,1", "--alpha", "2", "--format", "csv"]).status.code(), Some(2));
}

#[test]
fn outside_theorem_and_mc() {
    let v = json(&lrising(&["stability", "--alpha", "1.5", "--delta", "0.3", "--hstar", "0.2"]));
    assert_eq!(v["result"]["decision"], "outside_theorem");
    assert!(v["result"]["eta"].is_null());

    let args = ["mc", "--L", "2", "--alpha", "2", "--beta", "1", "--boundary", "-", "--steps", "20000", "--seed", "7"];
    let out = lrising(&args);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["result"]["mean_sigma0"].as_f64().unwrap() < 0.0);
    assert_eq!(v["config"]["command"]["mc"]["boundary"], "-");
    let mut csv_args = args.to_vec();
    csv_args.extend(["--format", "csv"]);
    let text = String::from_utf8(lrising(&csv_args).stdout).unwrap();
    assert!(text.starts_with("step,magnetization\n"));
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("lrising-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("covers.json");
    let out = lrising(&["covers", "1,9", "--M", "2", "--a", "1.5", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(v["result"]["cover"][2], serde_json::json!([[0, 4], [4, 8]]));
    std::fs::remove_dir_all(dir).unwrap();
}
