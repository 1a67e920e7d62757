use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_padic-potts"))
        .args(args)
        .env_remove("PADIC_PRECISION")
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

#[test]
fn fixed_points_at_seven() {
    let out = run(&["fixed-points", "--prime", "7", "--theta", "1+7^3", "--q", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = report(&out);
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["status"], "ok");
    assert_eq!(doc["regime"]["tag"], "p=1 mod 3, full shift");
    assert!(doc["regime"]["inequality_chain"].as_str().unwrap().contains("|q|^2"));
    let pts = doc["results"]["fixed_points"].as_array().unwrap();
    assert_eq!(pts.len(), 4);
    let classes: Vec<&str> = pts.iter().map(|f| f["class"].as_str().unwrap()).collect();
    assert_eq!(classes, ["attracting", "repelling", "repelling", "repelling"]);
    let norms: Vec<&str> = pts.iter().map(|f| f["multiplier_norm"].as_str().unwrap()).collect();
    assert_eq!(norms, ["7^-2", "7^2", "7^4", "7^4"]);
    for f in pts {
        assert!(f["point"].as_str().unwrap().ends_with("+ O(7^64)"));
    }
}

#[test]
fn count_bound_for_seven_states() {
    let out = run(&["count-bound", "--m", "1", "--q-states", "7", "--prime", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["results"]["bound"], "192");
}

#[test]
fn small_prime_has_no_nontrivial_fixed_points() {
    let out = run(&["small-prime", "--prime", "3", "--theta", "1+9", "--q", "3", "--samples", "200"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = report(&out);
    assert_eq!(doc["results"]["summary"], "no non-trivial fixed points; sampled orbits converge");
    assert_eq!(doc["results"]["cubic_roots"], 0);
    assert_eq!(doc["results"]["samples"]["converged"], 200);
}

#[test]
fn same_seed_gives_identical_bytes() {
    let args = ["small-prime", "--prime", "3", "--theta", "1+9", "--q", "3", "--samples", "100", "--seed", "99"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["small-prime", "--prime", "3", "--theta", "1+9", "--q", "3", "--samples", "100", "--seed", "100"]);
    assert_eq!(report(&a)["results"]["summary"], report(&c)["results"]["summary"]);
}

#[test]
fn undecided_exits_with_two() {
    let out = run(&["small-prime", "--prime", "3", "--theta", "1+9", "--q", "3", "--samples", "10", "--max-iter", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(report(&out)["status"], "undecided");
}

#[test]
fn bad_literal_is_a_field_error() {
    let out = run(&["fixed-points", "--theta", "7/0"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("theta") && err.contains("position 1"), "{err}");
}

#[test]
fn computation_errors_land_in_the_report() {
    let out = run(&["count-bound", "--q-states", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let doc = report(&out);
    assert_eq!(doc["status"], "error");
    assert_eq!(doc["error"]["kind"], "computation");
    assert!(doc.get("results").is_none());
}

#[test]
fn out_of_regime_parameters_are_reported() {
    let out = run(&["fixed-points", "--theta", "2", "--q", "7"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["regime"]["tag"], "none");
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# count the bound\nexperiment = count-bound\nq_states = 7\nm = 1\n").unwrap();
    let path = cfg.to_str().unwrap();
    assert_eq!(report(&run(&["--config", path]))["results"]["bound"], "192");
    let out = run(&["--config", path, "--m", "2"]);
    assert_eq!(report(&out)["results"]["m"], 2);
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "experiment = count-bound\ncolour = blue\n").unwrap();
    let out = run(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("colour"));
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("r.json");
    let out = run(&["count-bound", "--q-states", "7", "--out", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(doc["results"]["bound"], "192");
    assert!(doc.get("timing_ms").is_none());
}

#[test]
fn timing_is_opt_in() {
    let doc = report(&run(&["count-bound", "--q-states", "7", "--timing"]));
    assert!(doc["timing_ms"].is_u64());
}

#[test]
fn precision_env_sets_the_default() {
    let out = Command::new(env!("CARGO_BIN_EXE_padic-potts"))
        .args(["classify", "--x", "1+p^5"])
        .env("PADIC_PRECISION", "20")
        .output()
        .unwrap();
    let doc = report(&out);
    assert_eq!(doc["inputs"]["precision"], 20);
    assert!(doc["results"]["x"].as_str().unwrap().ends_with("+ O(7^20)"));
    let out = Command::new(env!("CARGO_BIN_EXE_padic-potts"))
        .args(["classify", "--x", "1+p^5", "--precision", "30"])
        .env("PADIC_PRECISION", "20")
        .output()
        .unwrap();
    assert_eq!(report(&out)["inputs"]["precision"], 30);
}

#[test]
fn classify_reports_the_region() {
    let doc = report(&run(&["classify", "--x", "1+p^5"]));
    assert_eq!(doc["results"]["region"], "A0");
    assert_eq!(doc["results"]["ord_x_minus_1"], "5");
}

#[test]
fn full_shift_partition_and_periodic_points() {
    let doc = report(&run(&["incidence"]));
    assert_eq!(doc["results"]["matrix"], serde_json::json!([[1, 1, 1], [1, 1, 1], [1, 1, 1]]));
    let counts: Vec<String> = (1..=8).map(|n| 3u64.pow(n).to_string()).collect();
    assert_eq!(doc["results"]["periodic_point_counts"], serde_json::json!(counts));

    let doc = report(&run(&["periodic", "--length", "2"]));
    assert_eq!(doc["results"]["count"], 9);
    assert_eq!(doc["results"]["pairwise_distinct"], true);
    for pt in doc["results"]["points"].as_array().unwrap() {
        let r: i64 = pt["residual_ord"].as_str().unwrap().trim_start_matches(">=").parse().unwrap();
        assert!(r >= 64 - 8, "{pt}");
    }
}

#[test]
fn chain_regime_conjugacy() {
    let out = run(&["conjugacy", "--theta", "1+p^3", "--q", "p^2", "--length", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = report(&out);
    assert_eq!(doc["results"]["m"], 2);
    assert_eq!(doc["results"]["conjugacy_holds"], true);
}

#[test]
fn hm_construction_yields_a_periodic_measure() {
    let doc = report(&run(&["hm-construct", "--q-states", "7", "--word", "C2,C3"]));
    assert_eq!(doc["status"], "ok");
    assert_eq!(doc["results"]["period"], 2);
    assert_eq!(doc["results"]["satisfies_recursion"], true);
    assert_eq!(doc["results"]["compatibility"]["passed"], true);
}

#[test]
fn ti_solve_and_compatibility() {
    let doc = report(&run(&["ti-solve", "--q-states", "7", "--form", "a", "--m1", "1", "--m2", "6"]));
    let sols = doc["results"]["solutions"].as_array().unwrap();
    assert!(!sols.is_empty());
    assert!(sols.iter().all(|s| s["satisfies_recursion"] == true));
    let doc = report(&run(&["gibbs-compat", "--q-states", "7", "--form", "A", "--m1", "1", "--m2", "6"]));
    assert_eq!(doc["results"]["compatibility"]["passed"], true);
}

#[test]
fn unknown_experiment_is_rejected_by_the_parser() {
    let out = run(&["fixed-point"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("fixed-points"));
}
