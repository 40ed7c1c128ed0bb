use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flagcoh")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn e3_base_example() {
    let o = run(&["e3-base", "--group", "PSU", "--n", "4", "--max-degree", "10", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(j["schema"], "flagcoh/1");
    let got: Vec<(u64, &str)> = j["result"]["groups"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| (g["degree"].as_u64().unwrap(), g["order"].as_str().unwrap()))
        .collect();
    assert_eq!(got, [(2, "4"), (4, "2"), (6, "2")]);
}

#[test]
fn theta_example() {
    let o = run(&["theta", "--n", "8", "--set", "1,2,4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).trim_end().ends_with("= 2·ρ3·ρ7"), "{}", stdout(&o));
}

#[test]
fn modp_latex_example() {
    let o = run(&["modp", "--group", "PE6", "--prime", "3", "--format", "latex"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("\\omega_{1}^{9}") && s.contains("x_{4}^{3}"), "{s}");
    assert!(s.contains("\\Lambda(\\iota, \\zeta_{3}, \\zeta_{7}, \\zeta_{9}, \\zeta_{11}, \\zeta_{15})"), "{s}");
}

#[test]
fn usage_errors_exit_2() {
    for args in [&["frobnicate"][..], &["modp", "--group", "PE6"], &["theta", "--n", "x", "--set", "1"], &["verify", "--check", "10"]] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn domain_errors_exit_1_with_one_line() {
    for (args, kind) in [
        (&["modp", "--group", "PSU", "--n", "5", "--prime", "2"][..], "precondition"),
        (&["cartan", "--group", "G2"], "unsupported"),
        (&["theta", "--n", "12", "--set", "1"], "precondition"),
        (&["bockstein", "--group", "PSp", "--n", "3", "--prime", "4"], "precondition"),
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        let s = stdout(&o);
        assert_eq!(s.lines().count(), 1, "{s}");
        assert!(s.starts_with(&format!("error kind={kind} ")), "{s}");
    }
}

#[test]
fn dimension_budget_env_var() {
    let o = Command::new(env!("CARGO_BIN_EXE_flagcoh"))
        .args(["koszul", "--group", "SU", "--n", "4", "--max-degree", "10"])
        .env("FLAGCOH_MAX_DIM", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("error kind=dimension-budget"));
}

#[test]
fn byte_for_byte_deterministic() {
    for args in [
        &["integral", "--group", "PE7", "--format", "json"][..],
        &["charpolys", "--group", "PSU", "--n", "12", "--prime", "2", "--format", "json"],
        &["binomial", "--n", "72", "--prime", "3", "--format", "json"],
    ] {
        let (a, b) = (run(args), run(args));
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("flagcoh-cli-{}.txt", std::process::id()));
    let o = run(&["cartan", "--group", "Sp", "--n", "3", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let s = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert!(s.contains("[0, -2, 2]"), "{s}");
}

#[test]
fn verify_single_check() {
    let o = run(&["verify", "--check", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(j["result"]["passed"], true);
}
