use std::process::Command;

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn qwcalc(args: &[&str]) -> Output {
    let out = Command::new(env!("CARGO_BIN_EXE_qwcalc")).args(args).output().expect("binary runs");
    Output {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

struct Csv {
    meta: Vec<(String, String)>,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    fn parse(text: &str) -> Csv {
        let mut meta = Vec::new();
        let mut lines = text.lines();
        let header = loop {
            let line = lines.next().expect("header line");
            match line.strip_prefix("# ") {
                Some(kv) => {
                    let (k, v) = kv.split_once('=').unwrap();
                    meta.push((k.to_string(), v.to_string()));
                }
                None => break line.split(',').map(String::from).collect(),
            }
        };
        let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
        Csv { meta, header, rows }
    }

    fn meta(&self, key: &str) -> &str {
        &self.meta.iter().find(|(k, _)| k == key).unwrap_or_else(|| panic!("no {key}")).1
    }

    fn column(&self, name: &str) -> Vec<f64> {
        let j = self.header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
        self.rows.iter().map(|r| r[j].parse().unwrap()).collect()
    }
}

fn ok_csv(args: &[&str]) -> Csv {
    let out = qwcalc(args);
    assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
    Csv::parse(&out.stdout)
}

#[test]
fn kinematics_at_rest_is_constant() {
    let csv =
        ok_csv(&["kinematics", "--a", "0", "--v0", "0", "--x0", "1.25", "--routes", "closed,iterative,second-order"]);
    for route in ["closed", "iterative", "second-order", "classical"] {
        assert!(csv.column(route).iter().all(|&x| (x - 1.25).abs() < 1e-12), "{route}");
    }
}

#[test]
fn kinematics_routes_agree_in_summary() {
    let csv = ok_csv(&["kinematics", "--routes", "closed,iterative", "--q", "0.9", "--w", "1"]);
    assert_eq!(csv.header, ["t", "closed", "iterative", "classical", "flag"]);
    let diff: f64 = csv.meta("max_abs_diff.closed:iterative").parse().unwrap();
    assert!(diff < 1e-9, "{diff}");
}

#[test]
fn drag_at_rest_without_gravity_is_zero() {
    let csv = ok_csv(&["drag", "--g", "0", "--v0", "0", "--routes", "closed,series,iterative,classical"]);
    for route in ["closed", "series", "iterative", "classical"] {
        assert!(csv.column(route).iter().all(|&v| v == 0.0), "{route}");
    }
}

#[test]
fn drag_routes_agree_on_defaults() {
    let csv = ok_csv(&["drag", "--t-end", "2"]);
    for pair in ["closed:series", "closed:iterative", "series:iterative"] {
        let diff: f64 = csv.meta(&format!("max_abs_diff.{pair}")).parse().unwrap();
        assert!(diff < 1e-6, "{pair}: {diff}");
    }
}

#[test]
fn drag_near_classical_limit() {
    let csv = ok_csv(&["drag", "--q", "0.999", "--w", "1e-6", "--g", "9.8", "--v0", "0", "--routes", "closed"]);
    let t = csv.column("t");
    let last = t.len() - 1;
    assert_eq!(t[last], 1.0);
    assert!((csv.column("closed")[last] - csv.column("classical")[last]).abs() < 5e-2);
}

#[test]
fn verify_defaults_pass() {
    let out = qwcalc(&["verify"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(!out.stdout.contains("FAIL"));
}

#[test]
fn verify_lists_every_q() {
    let out = qwcalc(&["verify", "--q-grid", "0.3,0.5,0.9", "--cases", "20"]);
    for q in ["q=0.3 ", "q=0.5 ", "q=0.9 "] {
        assert!(out.stdout.lines().any(|l| l.starts_with("leibniz") && l.contains(q)), "{q}");
    }
}

#[test]
fn verify_unsatisfiable_tolerance() {
    let out = qwcalc(&["verify", "--tol", "1e-30"]);
    assert_ne!(out.code, 0);
    assert_eq!(out.code, 2);
}

#[test]
fn single_point_sweep_matches_base() {
    let base = ok_csv(&["kinematics", "--q", "0.7", "--w", "0.3"]);
    let sweep = ok_csv(&["sweep", "--sweep", "q=0.7:0.7:1", "--sweep", "w=0.3:0.3:1", "kinematics"]);
    assert_eq!(&sweep.header[..2], ["q", "w"]);
    assert_eq!(sweep.header[2..], base.header[..]);
    let stripped: Vec<Vec<String>> = sweep.rows.iter().map(|r| r[2..].to_vec()).collect();
    assert_eq!(stripped, base.rows);
}

#[test]
fn sweep_over_q_scales_quadratic_term() {
    // x(t) - x0 - v0 t = a t (t - w) / (1 + q)
    let (x0, v0, a, w) = (0.5, -1.0, 3.0, 0.2);
    let csv = ok_csv(&[
        "sweep",
        "--sweep",
        "q=0.1:0.9:9",
        "kinematics",
        "--w",
        "0.2",
        "--x0",
        "0.5",
        "--v0",
        "-1",
        "--a",
        "3",
        "--routes",
        "closed",
        "--samples",
        "3",
        "--t-end",
        "2",
    ]);
    let (q, t, x) = (csv.column("q"), csv.column("t"), csv.column("closed"));
    assert_eq!(q.len(), 27);
    for i in 0..q.len() {
        let quad = (x[i] - x0 - v0 * t[i]) * (1.0 + q[i]);
        assert!((quad - a * t[i] * (t[i] - w)).abs() < 1e-12, "row {i}");
    }
    assert!(q.windows(2).all(|p| p[0] <= p[1]), "q-major order");
}

#[test]
fn sweep_row_order_is_q_then_w_then_t() {
    let csv = ok_csv(&["sweep", "--sweep", "w=0:1:3", "--sweep", "q=0.3:0.5:2", "drag", "--samples", "2"]);
    let keys: Vec<(f64, f64, f64)> =
        csv.column("q").into_iter().zip(csv.column("w")).zip(csv.column("t")).map(|((q, w), t)| (q, w, t)).collect();
    let mut sorted = keys.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(keys, sorted);
    assert_eq!(keys.len(), 12);
}

#[test]
fn outputs_are_deterministic() {
    for args in [
        &["kinematics", "--format", "json"][..],
        &["drag", "--q", "0.3", "--w", "0.01"],
        &["sweep", "--sweep", "q=0.2:0.8:4", "--sweep", "w=0:0.5:3", "drag"],
        &["verify", "--seed", "7", "--cases", "30"],
    ] {
        let a = qwcalc(args);
        let b = qwcalc(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.code, b.code);
    }
}

#[test]
fn json_schema() {
    let out = qwcalc(&["drag", "--format", "json", "--routes", "series"]);
    assert_eq!(out.code, 0);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["columns"].as_object().unwrap().len(), 3);
    let body = &out.stdout[out.stdout.find("\"columns\"").unwrap()..];
    let at = |key: &str| body.find(&format!("\"{key}\": [")).unwrap();
    assert!(at("t") < at("series") && at("series") < at("classical"));
    assert_eq!(v["metadata"]["command"], "drag");
    assert_eq!(v["flags"].as_array().unwrap().len(), 11);
    assert!(v["max_abs_diff"]["series:classical"].is_number());
}

#[test]
fn poles_are_flagged_not_printed() {
    // kappa (q - 1) t + kappa w = -1 at t = 3 for q = 0.5, w = 0, k = 1, m = 1
    let out = qwcalc(&[
        "drag",
        "--q",
        "0.5",
        "--w",
        "0",
        "--k",
        "1",
        "--g",
        "0",
        "--v0",
        "1",
        "--t-start",
        "2",
        "--t-end",
        "4",
        "--samples",
        "5",
        "--routes",
        "closed",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let pole_row = out.stdout.lines().find(|l| l.starts_with("3.0,")).unwrap();
    assert_eq!(pole_row, "3.0,,0.049787068367863944,pole");
    assert!(!out.stdout.contains("NaN") && !out.stdout.contains("inf"));
    assert!(out.stderr.contains("flagged"));
}

#[test]
fn usage_errors_exit_1() {
    for args in [
        &["kinematics", "--q", "1"][..],
        &["kinematics", "--q", "0"],
        &["drag", "--w", "-1"],
        &["drag", "--k", "-0.5"],
        &["sweep", "drag"],
        &["sweep", "--sweep", "q=0.5:1.5:3", "kinematics"],
        &["kinematics", "--samples", "0"],
        &["kinematics", "--format", "xml"],
    ] {
        let out = qwcalc(args);
        assert_eq!(out.code, 1, "{args:?}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn exhausted_budget_empties_column() {
    let out = qwcalc(&["kinematics", "--routes", "closed,second-order", "--max-terms", "10"]);
    assert_eq!(out.code, 3);
    let csv = Csv::parse(&out.stdout);
    assert!(csv.rows.iter().all(|r| r[2].is_empty()));
    assert!(csv.rows.iter().skip(1).all(|r| r.last().unwrap() == "nonconvergent"));
}
