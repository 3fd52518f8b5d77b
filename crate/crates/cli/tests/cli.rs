use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str], config: &str) -> Output {
    let mut file = tempfile();
    file.1.write_all(config.as_bytes()).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_polyharm"))
        .args(args)
        .arg("--config")
        .arg(&file.0)
        .output()
        .unwrap();
    std::fs::remove_file(&file.0).ok();
    out
}

fn tempfile() -> (std::path::PathBuf, std::fs::File) {
    use std::sync::atomic::{AtomicUsize, Ordering};
    static COUNTER: AtomicUsize = AtomicUsize::new(0);
    let path = std::env::temp_dir().join(format!(
        "polyharm-test-{}-{}.json",
        std::process::id(),
        COUNTER.fetch_add(1, Ordering::SeqCst)
    ));
    let f = std::fs::File::create(&path).unwrap();
    (path, f)
}

/// Data rows as column-name maps.
fn table(out: &Output) -> Vec<std::collections::HashMap<String, String>> {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(&out.stdout[..]);
    let header: Vec<String> = r.headers().unwrap().iter().map(String::from).collect();
    r.records()
        .map(|rec| header.iter().cloned().zip(rec.unwrap().iter().map(String::from)).collect())
        .collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn kernel_closed_form_value() {
    let out = run(&["kernel"], r#"{"n":2,"p":1,"x":[0.5,0],"zeta":[1,0]}"#);
    assert_eq!(code(&out), 0);
    let rows = table(&out);
    let p = rows.iter().find(|r| r["kind"] == "poisson").unwrap();
    assert_eq!(num(&p["value_re"]), 3.0);
    assert_eq!(p["status"], "ok");
}

#[test]
fn kernel_at_origin_is_one() {
    let out = run(&["kernel"], r#"{"n":3,"p":2,"degrees":[0],"x":[0,0,0],"zeta":{"sector":1,"coords":[0,1,0]}}"#);
    assert_eq!(code(&out), 0);
    for r in table(&out) {
        assert_eq!(num(&r["value_re"]), 1.0, "{r:?}");
        assert_eq!(num(&r["value_im"]), 0.0);
    }
}

#[test]
fn kernel_route_gaps_on_stock_config() {
    let cfg = r#"{"n":3,"p":2,"degrees":[0,1,2,3,4,5,6,7,8],"kernel":{"pairs":[
        {"x":[0.2,-0.4,0.1],"zeta":[0.6,0,0.8]},
        {"x":{"re":[0.3,0.1,-0.2],"im":[0.1,0.5,0.0]},"zeta":{"sector":1,"coords":[0,0.6,0.8]}},
        {"x":{"angle":0.4,"coords":[0.5,0.5,0.1]},"zeta":[1,0,0]}]}}"#;
    let out = run(&["kernel"], cfg);
    assert_eq!(code(&out), 0);
    let zonal: Vec<_> = table(&out).into_iter().filter(|r| r["kind"] == "zonal").collect();
    assert_eq!(zonal.len(), 3 * 9 * 3);
    assert!(zonal.iter().all(|r| num(&r["abs_error"]) < 1e-10));
}

#[test]
fn kernel_singularity_exit_code() {
    let out = run(&["kernel"], r#"{"n":2,"p":1,"degrees":[1],"x":[1,0],"zeta":[1,0]}"#);
    assert_eq!(code(&out), 3);
    let rows = table(&out);
    assert!(rows.iter().any(|r| r["status"] == "singular"));
    assert!(rows.iter().any(|r| r["kind"] == "zonal" && r["status"] == "ok"));
}

#[test]
fn dirichlet_examples() {
    let out = run(&["dirichlet"], r#"{"n":2,"p":1,"dirichlet":{"boundary":"x1","points":[[0.3,0.4]]}}"#);
    assert_eq!(code(&out), 0);
    assert!((num(&table(&out)[0]["value_re"]) - 0.3).abs() < 1e-12);

    let out = run(&["dirichlet"], r#"{"n":3,"p":3,"dirichlet":{"boundary":"1","points":[[0.1,0.2,0.3],{"sector":2,"coords":[0.5,0,0]}]}}"#);
    assert_eq!(code(&out), 0);
    for r in table(&out) {
        assert!((num(&r["value_re"]) - 1.0).abs() < 1e-12);
    }

    let cfg = r#"{"n":2,"p":2,"dirichlet":{"boundary":"x1^2+x2^2","points":[[0.3,0.1],{"sector":1,"coords":[0.2,0.5]},[0,0.7]]}}"#;
    let out = run(&["dirichlet"], cfg);
    assert_eq!(code(&out), 0);
    for r in table(&out) {
        assert!(num(&r["abs_error"]) <= 1e-9);
        assert_eq!(r["status"], "ok");
    }
}

#[test]
fn dirichlet_rejections() {
    let out = run(&["dirichlet"], r#"{"n":2,"dirichlet":{"boundary":"x1 + ","points":[[0,0]]}}"#);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("byte"));

    let out = run(&["dirichlet"], r#"{"n":2,"dirichlet":{"boundary":"x1","points":[[0.1,0],[2,0]]}}"#);
    assert_eq!(code(&out), 2);
    let rows = table(&out);
    assert_eq!(rows[0]["status"], "ok");
    assert_eq!(rows[1]["status"], "rejected");
}

#[test]
fn verify_suites() {
    let out = run(&["verify"], r#"{"n":2,"p":2,"verify":{"suites":["orthogonality","diagonal-dim","hua-convergence"]}}"#);
    assert_eq!(code(&out), 0);
    let rows = table(&out);
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r["status"] == "ok"));
    let orth = rows.iter().find(|r| r["kind"] == "orthogonality").unwrap();
    assert!(num(&orth["abs_error"]) <= 1e-10);

    let out = run(&["verify"], r#"{"n":2,"verify":{"suites":["nope"]}}"#);
    assert_eq!(code(&out), 2);

    let out = run(&["verify", "--tolerance", "0"], r#"{"n":2,"verify":{"suites":["series"],"samples":10}}"#);
    assert_eq!(code(&out), 1);
}

#[test]
fn hua_limit_tables() {
    let out = run(&["hua-limit"], r#"{"n":2,"hua_limit":{"u":"1","z":[0.4,0.2],"p_list":[1,2,5]}}"#);
    assert_eq!(code(&out), 0);
    let rows = table(&out);
    assert!(rows.iter().filter(|r| r["kind"] == "u_p").all(|r| num(&r["abs_error"]) < 1e-13));

    let out = run(&["hua-limit"], r#"{"n":2,"hua_limit":{"u":"x1^2","z":[0.4,0.2],"p_list":[1,2,4,8]}}"#);
    assert_eq!(code(&out), 0);
    let rows = table(&out);
    let errs: Vec<f64> = rows.iter().filter(|r| r["kind"] == "u_p").map(|r| num(&r["abs_error"])).collect();
    assert_eq!(errs.len(), 4);
    assert!(errs.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    let last = rows.last().unwrap();
    assert_eq!(last["kind"], "cauchy-hua");
    assert!(num(&last["abs_error"]) < 1e-6);
}

#[test]
fn almansi_and_dims() {
    let out = run(&["almansi"], r#"{"n":2,"p":2,"almansi":{"polynomial":"x1^4"}}"#);
    assert_eq!(code(&out), 0);
    let rows = table(&out);
    assert_eq!(rows[0]["text"], "5/8 * x1^4 - 3/4 * x1^2 * x2^2 - 3/8 * x2^4");
    assert_eq!(rows[1]["text"], "3/8");
    let out = run(&["almansi"], r#"{"n":2,"almansi":{"polynomial":"x1^2 + x2"}}"#);
    assert_eq!(code(&out), 2);

    let out = run(&["dims"], r#"{"n":4,"dims":{"max_degree":5,"max_order":2}}"#);
    assert_eq!(code(&out), 0);
    assert_eq!(table(&out).len(), 12);
}

#[test]
fn config_errors() {
    assert_eq!(code(&run(&["dims"], r#"{"n":2,"typo":1}"#)), 2);
    assert_eq!(code(&run(&["dims"], r#"{"n":1}"#)), 2);
    assert_eq!(code(&run(&["dims"], r#"{"n":2,"resolution":2}"#)), 2);
    assert_eq!(code(&run(&["kernel"], r#"{"n":2}"#)), 2);
}

#[test]
fn csv_and_json_payloads_match() {
    let cfg = r#"{"n":2,"p":2,"dirichlet":{"boundary":"x1^2 - x2^2 + (0,1) * x1","points":[[0.3,0.1],{"sector":1,"coords":[0.2,0.5]},[3,0]]}}"#;
    let csv_out = run(&["dirichlet", "--format", "csv"], cfg);
    let json_out = run(&["dirichlet", "--format", "json"], cfg);
    let csv_rows: Vec<Vec<String>> = {
        let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(&csv_out.stdout[..]);
        r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect()
    };
    let v: Value = serde_json::from_slice(&json_out.stdout).unwrap();
    // numbers are compared as emitted text, not re-formatted
    let raw = String::from_utf8(json_out.stdout.clone()).unwrap();
    for row in &csv_rows {
        for cell in row.iter().filter(|c| c.contains('e') && c.parse::<f64>().is_ok()) {
            assert!(raw.contains(cell.as_str()), "{cell} missing from JSON");
        }
    }
    let json_rows: Vec<Vec<String>> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            r.as_array()
                .unwrap()
                .iter()
                .map(|c| match c {
                    Value::Null => String::new(),
                    Value::String(s) => s.clone(),
                    n => n.as_f64().unwrap().to_string(),
                })
                .collect()
        })
        .collect();
    assert_eq!(csv_rows.len(), json_rows.len());
    for (a, b) in csv_rows.iter().zip(&json_rows) {
        for (x, y) in a.iter().zip(b) {
            match (x.parse::<f64>(), y.parse::<f64>()) {
                (Ok(p), Ok(q)) => assert_eq!(p.to_bits(), q.to_bits()),
                _ => assert_eq!(x, y),
            }
        }
    }
    assert_eq!(code(&csv_out), code(&json_out));
}

#[test]
fn metadata_reproduces_run() {
    let cfg = r#"{"n":3,"p":2,"seed":99,"verify":{"suites":["route-agreement","series"],"samples":10}}"#;
    let first = run(&["verify", "--format", "json", "--tolerance", "1e-7"], cfg);
    let v: Value = serde_json::from_slice(&first.stdout).unwrap();
    let meta = &v["metadata"];
    assert_eq!(meta["seed"], 99);
    assert_eq!(meta["config"]["tolerance"], 1e-7);
    let again = run(&["verify", "--format", "json"], &meta["config"].to_string());
    assert_eq!(first.stdout, again.stdout);
    let other = run(&["verify", "--format", "json", "--seed", "100"], cfg);
    let w: Value = serde_json::from_slice(&other.stdout).unwrap();
    assert_ne!(w["metadata"]["config_hash"], meta["config_hash"]);
    assert_ne!(w["rows"], v["rows"]);
}

#[test]
fn writes_to_out_file() {
    let path = std::env::temp_dir().join(format!("polyharm-out-{}.csv", std::process::id()));
    let out = run(&["dims", "--out", path.to_str().unwrap()], r#"{"n":2,"degrees":[0,1]}"#);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert!(text.starts_with("# command: dims"));
}
