use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn default_model() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models/default.json")
}

fn kam(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kam"))
        .args(args)
        .output()
        .expect("kam runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn model_arg() -> String {
    default_model().to_str().unwrap().to_owned()
}

#[test]
fn help_and_version_succeed() {
    for args in [
        &["--help"][..],
        &["--version"],
        &["toy", "simulate", "--help"],
    ] {
        let out = kam(args);
        assert_eq!(code(&out), 0, "{args:?}");
        assert!(!out.stdout.is_empty());
    }
}

#[test]
fn usage_errors_exit_1() {
    let cases: &[&[&str]] = &[
        &[],
        &["frobnicate"],
        &["context", "profile", "--n", "1"],
        &[
            "context",
            "profile",
            "--hamiltonian",
            "--reversible",
            "--n",
            "1",
            "--p",
            "1",
        ],
        &["context", "profile", "--hamiltonian", "--n", "1"],
        &["context", "profile", "--reversible", "--n", "1", "--a", "1"],
        &["context", "profile", "--volume", "--n", "2", "--p", "0"],
        &[
            "context",
            "destroy",
            "--hamiltonian",
            "--n",
            "3",
            "--p",
            "1",
        ],
        &[
            "dioph", "quality", "--omega", "1,2", "--tau", "1", "--kmax", "5",
        ],
        &[
            "dioph", "quality", "--omega", "1,x", "--tau", "2", "--kmax", "5",
        ],
        &[
            "dioph",
            "measure",
            "--box",
            "1,2,1,2",
            "--gamma",
            "0.05",
            "--tau",
            "1.5",
            "--kmax",
            "20",
            "--samples",
            "10",
        ],
        &[
            "dioph",
            "measure",
            "--box",
            "1,2,1",
            "--gamma",
            "0.05",
            "--tau",
            "1.5",
            "--kmax",
            "20",
            "--samples",
            "10",
            "--seed",
            "1",
        ],
        &[
            "toy",
            "equilibria",
            "--model",
            "/nonexistent/model.json",
            "--rho-lo",
            "0.01",
            "--rho-hi",
            "2",
        ],
        &["toy", "equilibria", "--rho-lo", "0.01", "--rho-hi", "2"],
    ];
    for args in cases {
        let out = kam(args);
        assert_eq!(
            code(&out),
            1,
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn malformed_model_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in [
        ("syntax.json", "{\"s\":1,"),
        (
            "unknown.json",
            r#"{"s":1,"mu":[0.5],"u":[[0,1],[-1,0]],"v":[[1,0]],"w":[[1,0],[1,0]],"x":1}"#,
        ),
        (
            "shape.json",
            r#"{"s":2,"mu":[0.5],"u":[[0,1],[-1,0]],"v":[[1,0]],"w":[[1,0],[1,0]]}"#,
        ),
        (
            "wneg.json",
            r#"{"s":1,"mu":[0.5],"u":[[0,1],[-1,0]],"v":[[1,0]],"w":[[-1,0]]}"#,
        ),
    ] {
        let path = dir.path().join(name);
        std::fs::write(&path, text).unwrap();
        let out = kam(&[
            "toy",
            "equilibria",
            "--model",
            path.to_str().unwrap(),
            "--rho-lo",
            "0.01",
            "--rho-hi",
            "2",
        ]);
        assert_eq!(
            code(&out),
            1,
            "{name}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn context_examples() {
    let out = kam(&[
        "context",
        "profile",
        "--reversible",
        "--n",
        "0",
        "--a",
        "1",
        "--b",
        "2",
        "--s",
        "2",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(
        (v["c"].as_i64(), v["g"].as_u64(), v["m"].as_u64()),
        (Some(1), Some(2), Some(3))
    );
    assert_eq!(v["class"], "Context2");

    let out = kam(&[
        "context",
        "excite",
        "--reversible",
        "--n",
        "0",
        "--a",
        "1",
        "--b",
        "2",
        "--s",
        "2",
        "--r",
        "1",
    ]);
    assert_eq!(code(&out), 0);
    let t = &json(&out)["target"];
    assert_eq!(
        (
            t["n"].as_u64(),
            t["a"].as_u64(),
            t["b"].as_u64(),
            t["s"].as_u64()
        ),
        (Some(1), Some(1), Some(1), Some(2))
    );

    let out = kam(&[
        "context",
        "diagnose",
        "--reversible",
        "--n",
        "0",
        "--a",
        "1",
        "--b",
        "2",
        "--s",
        "2",
        "--r",
        "1",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["defect"], 2);
}

#[test]
fn structural_infeasibility_exits_2() {
    let out = kam(&[
        "context",
        "destroy",
        "--dissipative",
        "--n",
        "3",
        "--p",
        "1",
        "--s",
        "2",
        "--r",
        "1",
    ]);
    assert_eq!(code(&out), 2);
    assert_eq!(json(&out)["error"], "Impossible");

    let out = kam(&[
        "context",
        "destroy",
        "--reversible",
        "--n",
        "3",
        "--a",
        "0",
        "--b",
        "0",
        "--s",
        "0",
        "--r",
        "1",
    ]);
    assert_eq!(code(&out), 2);
    assert_eq!(json(&out)["error"], "InfeasibleParameters");

    let out = kam(&[
        "context",
        "excite",
        "--hamiltonian",
        "--n",
        "1",
        "--p",
        "0",
        "--r",
        "1",
    ]);
    assert_eq!(code(&out), 2);
    assert_eq!(json(&out)["error"], "BadOrder");

    let out = kam(&[
        "context",
        "diagnose",
        "--reversible",
        "--n",
        "1",
        "--a",
        "2",
        "--b",
        "1",
        "--r",
        "1",
    ]);
    assert_eq!(code(&out), 2);
    assert_eq!(json(&out)["error"], "NotContext2");
}

#[test]
fn dioph_examples() {
    let out = kam(&[
        "dioph", "check", "--omega", "1,2", "--gamma", "0.1", "--tau", "1.5", "--kmax", "3",
    ]);
    assert_eq!(code(&out), 3);
    let v = json(&out);
    assert_eq!(v["pass"], false);
    assert_eq!(v["witness"], "2,-1");

    let out = kam(&[
        "dioph", "quality", "--omega", "0.7", "--tau", "0.5", "--kmax", "100",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["min_quality"].as_f64(), Some(0.7));

    let out = kam(&[
        "dioph", "affine", "--omega", "1", "--beta", "1", "--gamma", "0.1", "--tau", "0.5",
        "--kmax", "5",
    ]);
    assert_eq!(code(&out), 3);
    let v = json(&out);
    assert_eq!(
        (v["witness"].as_str(), v["witness_l"].as_str()),
        (Some("1"), Some("-1"))
    );

    let out = kam(&[
        "dioph",
        "measure",
        "--box",
        "1,2,1,2",
        "--gamma",
        "0.05",
        "--tau",
        "1.5",
        "--kmax",
        "20",
        "--samples",
        "10000",
        "--seed",
        "1",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["fraction"].as_f64(), Some(0.9534));

    let out = kam(&[
        "dioph", "check", "--omega", "-1.5", "--gamma", "0.1", "--tau", "0.5", "--kmax", "3",
    ]);
    assert_eq!(code(&out), 0);
}

#[test]
fn toy_examples() {
    let model = model_arg();
    let out = kam(&[
        "toy",
        "equilibria",
        "--model",
        &model,
        "--rho-lo",
        "0.01",
        "--rho-hi",
        "2",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["equilibria"], serde_json::json!([0.5]));

    let out = kam(&["toy", "classify", "--model", &model, "--rho0", "0.5"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["kind"], "Center");
    assert_eq!(v["exponents"], "±1i");
    assert_eq!(v["cycle_frequency"].as_f64(), Some(1.5));

    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("orbit.csv");
    let out = kam(&[
        "toy",
        "simulate",
        "--model",
        &model,
        "--y0",
        "0.1",
        "--rho0",
        "0.4",
        "--phi0",
        "0",
        "--dt",
        "1e-3",
        "--t",
        "50",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,y,rho,phi,E"));
    let energies: Vec<f64> = lines
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(energies.len(), 50_001);
    let drift = energies
        .iter()
        .map(|e| (e - energies[0]).abs())
        .fold(0.0, f64::max);
    assert!(drift < 1e-8, "{drift}");
    assert!(!text.contains('\r'));
}

#[test]
fn numerical_failures_exit_4() {
    let model = model_arg();
    let out = kam(&["toy", "classify", "--model", &model, "--rho0", "0.3"]);
    assert_eq!(code(&out), 4);
    assert_eq!(json(&out)["error"], "NotAnEquilibrium");

    let out = kam(&[
        "toy", "torus", "--model", &model, "--y0", "0", "--rho0", "0.5", "--dt", "1e-3", "--t",
        "10",
    ]);
    assert_eq!(code(&out), 4);
    assert_eq!(json(&out)["error"], "NotACenterOrbit");

    let out = kam(&[
        "toy", "simulate", "--model", &model, "--y0", "0", "--rho0", "0.4", "--dt", "5", "--t",
        "50",
    ]);
    assert_eq!(code(&out), 4);
    assert_eq!(json(&out)["error"], "StepFailure");
}

#[test]
fn sweep_output_independent_of_jobs() {
    let model = model_arg();
    let run = |jobs: &str, format: &str| {
        let out = kam(&[
            "toy",
            "sweep",
            "--model",
            &model,
            "--axis",
            "-1,-0.5,0,0.25,0.5,0.75,1",
            "--rho-lo",
            "0.01",
            "--rho-hi",
            "2",
            "--jobs",
            jobs,
            "--format",
            format,
        ]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        out.stdout
    };
    assert_eq!(run("1", "json"), run("4", "json"));
    assert_eq!(run("1", "csv"), run("3", "csv"));
    let records: Value = serde_json::from_slice(&run("2", "json")).unwrap();
    assert_eq!(records.as_array().unwrap().len(), 7);
    assert_eq!(records[2]["origin_equilibrium"], true);
    assert_eq!(records[4]["equilibria"][0]["kind"], "Center");
}

#[test]
fn perturb_reports_reversible_residual() {
    let model = model_arg();
    let out = kam(&[
        "toy", "perturb", "--model", &model, "--eps", "1e-3", "--y0", "0", "--rho0", "0.55",
        "--dt", "1e-2", "--t", "20", "--seed", "5",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert!(v["reversibility_residual"].as_f64().unwrap() < 1e-13);
    assert_eq!(v["seed"], 5);
}

#[test]
fn in_process_runner_matches_binary() {
    let args = [
        "kam",
        "context",
        "profile",
        "--hamiltonian",
        "--n",
        "2",
        "--p",
        "1",
        "--s",
        "0",
    ];
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let c = kam::cli::run(args, &mut out, &mut err);
    let bin = kam(&args[1..]);
    assert_eq!(c, code(&bin));
    assert_eq!(out, bin.stdout);
}
