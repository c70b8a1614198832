use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn netepi(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_netepi"))
        .args(args)
        .current_dir(dir)
        .env_remove("NETEPI_THREADS")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

const CONFIG: &str = r#"{
  "network": {"ba": {"n": 300, "m": 3}},
  "rates": {"beta": 0.4, "gamma": 1.0, "alpha": 0.1},
  "init": {"fraction": 0.02, "seed": 11},
  "t_max": 15,
  "interventions": [{"t": 2.0, "action": "degree_cap", "cap": 4}]
}"#;

#[test]
fn metrics_on_triangle() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("tri.txt"), "# triangle\n0 1\n1 2\n2 0\n").unwrap();
    let out = netepi(dir.path(), &["metrics", "tri.txt"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["density"], 1.0);
    assert_eq!(report["avg_degree"], 2.0);
    assert_eq!(report["nodes"], 3);
    assert_eq!(report["scale_free"], false);
}

#[test]
fn generate_then_measure() {
    let dir = tempfile::tempdir().unwrap();
    let out = netepi(
        dir.path(),
        &[
            "generate", "ba", "--n", "1000", "--m", "5", "--seed", "3", "-o", "ba.txt",
        ],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("ba.txt.manifest.json").exists());
    let out = netepi(dir.path(), &["metrics", "ba.txt"]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["edges"], 4975);
    assert_eq!(report["scale_free"], true);
    let out = netepi(dir.path(), &["metrics", "ba.txt", "--k-min", "5"]);
    assert!(serde_json::from_slice::<serde_json::Value>(&out.stdout).unwrap()["power_law_exponent"].is_f64());
}

#[test]
fn simulate_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("run.json"), CONFIG).unwrap();
    let a = netepi(
        dir.path(),
        &[
            "simulate",
            "-c",
            "run.json",
            "--trajectory",
            "a.csv",
            "--summary",
            "a.json",
        ],
    );
    let b = netepi(
        dir.path(),
        &[
            "simulate",
            "-c",
            "run.json",
            "--trajectory",
            "b.csv",
            "--summary",
            "b.json",
        ],
    );
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(code(&b), 0);
    let ta = fs::read(dir.path().join("a.csv")).unwrap();
    assert_eq!(ta, fs::read(dir.path().join("b.csv")).unwrap());
    assert!(ta.starts_with(b"t,S,I,R\n"));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("a.json")).unwrap()).unwrap();
    for key in [
        "peak_infected_fraction",
        "peak_time",
        "final_recovered_fraction",
        "seed",
    ] {
        assert!(summary.get(key).is_some(), "missing {key}");
    }
    assert_eq!(summary["seed"], 11);
    assert_eq!(summary["interventions_applied"], serde_json::json!([2.0]));
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("a.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["parameters"]["network"]["ba"]["seed"], 11);
    assert_eq!(manifest["parameters"]["rates"]["alpha"], 0.1);
}

#[test]
fn auto_seed_is_printed_and_replayable() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("run.json"), CONFIG).unwrap();
    let out = netepi(
        dir.path(),
        &[
            "simulate",
            "-c",
            "run.json",
            "--seed",
            "auto",
            "--trajectory",
            "auto.csv",
        ],
    );
    assert_eq!(code(&out), 0);
    let stdout = String::from_utf8(out.stdout).unwrap();
    let seed = stdout.trim().strip_prefix("seed: ").expect("seed printed");
    let out = netepi(
        dir.path(),
        &[
            "simulate",
            "-c",
            "run.json",
            "--seed",
            seed,
            "--trajectory",
            "again.csv",
        ],
    );
    assert_eq!(code(&out), 0);
    assert_eq!(
        fs::read(dir.path().join("auto.csv")).unwrap(),
        fs::read(dir.path().join("again.csv")).unwrap()
    );
}

#[test]
fn ode_and_abm_engines() {
    let dir = tempfile::tempdir().unwrap();
    let ode = r#"{"network":{"well_mixed":{"n":1000,"k_avg":10}},"rates":{"beta":0.2,"gamma":1},
        "init":{"fraction":0.01,"seed":1},"t_max":20,"engine":"ode","output":{"trajectory":"ode.csv","summary":"ode.json"}}"#;
    fs::write(dir.path().join("ode.json.in"), ode).unwrap();
    let out = netepi(dir.path(), &["simulate", "-c", "ode.json.in"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("ode.json")).unwrap()).unwrap();
    // R0 = 2: final size solves r = 1 - 0.99 exp(-2 r), r ~ 0.7997
    assert!((summary["final_recovered_fraction"].as_f64().unwrap() - 0.7997).abs() < 0.01);

    let abm = ode
        .replace(r#""engine":"ode""#, r#""engine":"abm""#)
        .replace("ode.", "abm.");
    fs::write(dir.path().join("abm.json.in"), abm).unwrap();
    let out = netepi(dir.path(), &["simulate", "-c", "abm.json.in"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("abm.csv")).unwrap();
    assert_eq!(csv.lines().count(), 22);
}

#[test]
fn exp01_ba_exceeds_er_at_low_beta() {
    let dir = tempfile::tempdir().unwrap();
    let out = netepi(
        dir.path(),
        &[
            "exp01",
            "--network",
            "ba",
            "--beta-max",
            "0.05",
            "--beta-step",
            "0.05",
            "--replicates",
            "30",
            "-o",
            "t.csv",
        ],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("t.csv")).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    let mut scope = std::collections::HashMap::new();
    for rec in rdr.records() {
        let rec = rec.unwrap();
        if rec[col("beta")].parse::<f64>().unwrap() == 0.05 {
            scope.insert(
                rec[col("network")].to_string(),
                rec[col("scope_mean")].parse::<f64>().unwrap(),
            );
        }
    }
    assert!(scope["BA"] > scope["ER"], "{scope:?}");
    assert!(dir.path().join("t.csv.manifest.json").exists());
}

#[test]
fn sweep_from_spec() {
    let dir = tempfile::tempdir().unwrap();
    let spec = r#"{"network":{"er":{"n":200,"p":0.05}},"betas":[0.0,0.5],"gamma":1.0,"t_max":20,"replicates":4}"#;
    fs::write(dir.path().join("spec.json"), spec).unwrap();
    let out = netepi(dir.path(), &["sweep", "--spec", "spec.json", "-o", "s.csv"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("s.csv")).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().nth(1).unwrap().starts_with("sweep,ER,0,"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&netepi(dir.path(), &["--help"])), 0);
    assert_eq!(code(&netepi(dir.path(), &["--version"])), 0);
    assert_eq!(code(&netepi(dir.path(), &["frobnicate"])), 1);
    assert_eq!(code(&netepi(dir.path(), &["generate", "er", "--n", "ten"])), 1);
    assert_eq!(code(&netepi(dir.path(), &["simulate", "-c", "missing.json"])), 2);

    fs::write(
        dir.path().join("bad.json"),
        CONFIG.replace(r#""t_max": 15"#, r#""t_max": 15, "horizon": 3"#),
    )
    .unwrap();
    let out = netepi(dir.path(), &["simulate", "-c", "bad.json"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("horizon"));

    let bad_iv = CONFIG.replace(r#""cap": 4}"#, r#""cap": 4, "when": 1}"#);
    fs::write(dir.path().join("bad_iv.json"), bad_iv).unwrap();
    assert_eq!(code(&netepi(dir.path(), &["simulate", "-c", "bad_iv.json"])), 2);

    fs::write(dir.path().join("bad_edges.txt"), "0 1\n1 x\n").unwrap();
    let out = netepi(dir.path(), &["metrics", "bad_edges.txt"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    // beta k_avg = 10 makes the per-step infection probability exceed 1
    let overflow = r#"{"network":{"well_mixed":{"n":100,"k_avg":10}},"rates":{"beta":1,"gamma":0.5},
        "init":{"fraction":0.5,"seed":1},"t_max":5,"engine":"abm"}"#;
    fs::write(dir.path().join("overflow.json"), overflow).unwrap();
    assert_eq!(code(&netepi(dir.path(), &["simulate", "-c", "overflow.json"])), 3);
}
