use carlitz_units::cli::dispatch;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, Value, String) {
    let mut argv = vec!["carlitz-units"];
    argv.extend_from_slice(args);
    let o = dispatch(argv);
    let v = serde_json::from_str(&o.stdout).unwrap_or(Value::Null);
    (o.code, v, o.stderr)
}

#[test]
fn wieferich_search_q4() {
    let (code, v, _) = run(&["--q", "4", "search", "wieferich", "--d", "2", "--seed", "7"]);
    assert_eq!(code, 0);
    assert_eq!(v["command"], "search wieferich");
    assert_eq!(v["header"]["p"], 2);
    assert_eq!(v["header"]["e"], 2);
    assert_eq!(v["header"]["seed"], 7);
    assert_eq!(v["result"]["M"], 2);
    assert_eq!(v["result"]["primes"].as_array().unwrap().len(), 2);
}

#[test]
fn q_as_prime_power() {
    let (_, a, _) = run(&["--q", "9", "field"]);
    let (_, b, _) = run(&["--q", "3^2", "field"]);
    assert_eq!(a, b);
    assert_eq!(a["result"]["base"]["size"], 9);
}

#[test]
fn reports_are_deterministic() {
    let args = ["--q", "8", "search", "wieferich", "--d", "2", "--seed", "3"];
    let a = dispatch(std::iter::once("carlitz-units").chain(args));
    let b = dispatch(std::iter::once("carlitz-units").chain(args));
    assert_eq!(a, b);
    assert_eq!(a.code, 0);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--help"]).0, 0);
    assert_eq!(run(&["--version"]).0, 0);
    assert_eq!(run(&["nonsense"]).0, 2);
    assert_eq!(run(&["--q", "10", "field"]).0, 2);
    assert_eq!(run(&["--q", "4^2", "field"]).0, 2);
    assert_eq!(run(&["poly", "factor", "--f", "T^^2"]).0, 2);
    let (code, _, err) = run(&["carlitz", "phi", "--a", "0"]);
    assert_eq!(code, 2);
    let rec: Value = serde_json::from_str(err.trim()).unwrap();
    assert_eq!(rec["error"], "InvalidArgument");
    let (code, _, err) = run(&["padic", "cor3", "--P", "T^2 + 2"]);
    assert_eq!(code, 3);
    assert!(err.contains("NotPrime"));
    assert_eq!(run(&["--budget-candidates", "10", "poly", "primes", "--d", "4"]).0, 3);
}

#[test]
fn verify_all_passes() {
    let (code, v, _) = run(&["verify", "all", "--dmax", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["pass"], true);
    for row in v["result"]["rows"].as_array().unwrap() {
        assert_eq!(row["pass"], true, "{row}");
    }
}

#[test]
fn counts_table_csv() {
    let o = dispatch(["carlitz-units", "--format", "csv", "table", "counts", "--dmax", "2"]);
    assert_eq!(o.code, 0);
    let lines: Vec<&str> = o.stdout.lines().collect();
    assert_eq!(lines[0], "d,Nq,M,N,bound");
    assert_eq!(lines.len(), 3);
    assert!(lines[2].starts_with("2,3,0,3,"));
}

#[test]
fn phi_and_reductions() {
    let (_, v, _) = run(&["carlitz", "phi", "--a", "T^2"]);
    assert_eq!(v["result"]["coeffs"].as_array().unwrap().len(), 3);
    let (_, v, _) = run(&["carlitz", "phi", "--a", "T", "--at", "T"]);
    assert_eq!(v["result"]["value"], "T^2 + T^3");
    let (_, v, _) = run(&["carlitz", "phi", "--a", "T^2", "--mod", "T^2 + 1"]);
    assert!(v["result"]["value"].is_string());
}

#[test]
fn zeta_commands() {
    let (code, v, _) = run(&["zeta", "check", "--prec", "30"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["agree"], true);
    let (code, v, _) = run(&["zeta", "an", "--n", "2", "--cap", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["agree"], true);
}

#[test]
fn lemma4_outcomes() {
    let (code, v, _) = run(&["--q", "4", "padic", "lemma4", "--P", "T^2 + T + [0,1]"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["kind"], "Solution", "{v}");
    let (code, v, _) = run(&["padic", "lemma4", "--P", "T^2 + 1"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["kind"], "Obstruction", "{v}");
}

#[test]
fn out_file() {
    let dir = std::env::temp_dir().join(format!("carlitz-units-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("field.json");
    let o = dispatch(["carlitz-units", "field", "--out", path.to_str().unwrap()]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "field");
    std::fs::remove_dir_all(&dir).unwrap();
}
