use std::process::{Command, Output};

use hypstab::cli::output::{parse_json, Table};

fn hypstab(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hypstab"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("HYPSTAB_THREADS", t),
        None => cmd.env_remove("HYPSTAB_THREADS"),
    };
    cmd.output().expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = hypstab(args, None);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn find_c0_json_shape() {
    let v = parse_json(&stdout_of(&[
        "find-c0", "--tol", "1e-4", "--format", "json",
    ]))
    .unwrap();
    let c0 = v["c0"].as_f64().unwrap();
    assert!((0.72..=0.74).contains(&c0));
    let lo = v["bracket"][0].as_f64().unwrap();
    let hi = v["bracket"][1].as_f64().unwrap();
    assert!(lo <= c0 && c0 <= hi && hi - lo <= 1e-4);
    assert_eq!(v["tol"], 1e-4);
    assert_eq!(v["header"]["command"], "find-c0");
    assert_eq!(v["header"]["version"], hypstab::VERSION);
}

#[test]
fn sweep_signs_flip_once() {
    let t = Table::parse_csv(&stdout_of(&[
        "sweep-f", "--a-min", "0.55", "--a-max", "1.5", "--step", "0.05",
    ]))
    .unwrap();
    let a = t.numbers("a").unwrap();
    let f = t.numbers("F").unwrap();
    assert_eq!(a.len(), 20);
    assert!((a[19] - 1.5).abs() < 1e-12);
    let flips = f
        .windows(2)
        .filter(|w| (w[0] < 0.0) != (w[1] < 0.0))
        .count();
    assert_eq!(flips, 1);
    assert!(f[0] < 0.0 && f[19] > 0.0);
    assert!(t
        .numbers("err")
        .unwrap()
        .iter()
        .all(|&e| (0.0..1e-6).contains(&e)));
    assert_eq!(t.header_value("sign_change"), Some("[0.7,0.75]"));
}

#[test]
fn index_csv_and_json_agree() {
    let csv = Table::parse_csv(&stdout_of(&["index", "--a", "0.6", "--n", "1000"])).unwrap();
    let json = parse_json(&stdout_of(&[
        "index", "--a", "0.6", "--n", "1000", "--format", "json",
    ]))
    .unwrap();
    assert_eq!(csv.header_value("total_index"), Some("1"));
    assert_eq!(json["total_index"], 1);
    assert_eq!(json["converged"], true);
    let counts = csv.numbers("negative_count").unwrap();
    assert_eq!(counts, [1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    let first = csv.numbers("lambda_1").map(|_| ()).err();
    assert!(
        first.is_some(),
        "screened modes leave eigenvalue cells empty"
    );
    let l1 = json["rows"][0][6].as_f64().unwrap();
    let l1_csv: f64 = csv.rows[0][6].parse().unwrap();
    assert_eq!(l1, l1_csv);
}

#[test]
fn embed_exports_have_expected_shape() {
    let t = Table::parse_csv(&stdout_of(&[
        "embed-export",
        "--family",
        "spherical",
        "--a",
        "1",
    ]))
    .unwrap();
    assert_eq!(t.rows.len(), 2500);
    assert_eq!(t.columns, ["s", "theta", "x1", "x2", "x3", "x4"]);
    let t = Table::parse_csv(&stdout_of(&[
        "embed-export",
        "--family",
        "helicoid",
        "--alpha",
        "1",
        "--s-count",
        "5",
        "--v-count",
        "7",
    ]))
    .unwrap();
    assert_eq!(t.rows.len(), 35);
    let h = hypstab::Helicoid::new(1.0).unwrap();
    let (s, v, x2) = (
        t.numbers("s").unwrap(),
        t.numbers("t").unwrap(),
        t.numbers("x2").unwrap(),
    );
    for i in 0..t.rows.len() {
        assert!((h.embed(s[i], v[i]).coords()[1] - x2[i]).abs() <= 1e-14 * x2[i].abs().max(1.0));
    }
    let t = Table::parse_csv(&stdout_of(&[
        "embed-export",
        "--family",
        "hyperbolic",
        "--n",
        "3",
        "--t",
        "1.2",
        "--s-min",
        "-4",
    ]))
    .unwrap();
    assert_eq!(t.columns, ["s", "x", "y", "z"]);
    let y = t.numbers("y").unwrap();
    assert!(y[0] < 0.0 && y[49] > 0.0, "curve is odd in s");
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let args = ["helicoid", "--alpha", "0.7", "--t-grid", "11"];
    let direct = stdout_of(&args);
    let mut with_file: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap();
    with_file.extend(["--output", p]);
    assert!(stdout_of(&with_file).is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), direct);
}

#[test]
fn header_records_config_and_version() {
    let t = Table::parse_csv(&stdout_of(&[
        "hyperbolic-window",
        "--n",
        "2",
        "--t-count",
        "4",
    ]))
    .unwrap();
    assert_eq!(
        t.header_value("program"),
        Some(format!("hypstab {}", hypstab::VERSION).as_str())
    );
    let config = parse_json(t.header_value("config").unwrap()).unwrap();
    assert_eq!(config["t_count"], 4);
    assert_eq!(config["n"][0], 2);
    assert!(t.header_value("tolerances").is_some());
    assert_eq!(t.rows.len(), 4);
    assert!(t
        .text("slope_bracket_holds")
        .unwrap()
        .iter()
        .all(|&b| b == "true"));
}

#[test]
fn criteria_report_rows() {
    let t = Table::parse_csv(&stdout_of(&[
        "criteria", "--family", "helicoid", "--alpha", "1.2",
    ]))
    .unwrap();
    assert_eq!(
        t.text("criterion").unwrap(),
        ["helicoid-pitch", "pointwise-curvature"]
    );
    assert_eq!(t.text("verdict").unwrap(), ["inconclusive", "inconclusive"]);
    let t = Table::parse_csv(&stdout_of(&["criteria", "--mass", "1", "--grad", "5"])).unwrap();
    assert_eq!(t.text("verdict").unwrap(), ["unstable-certified"]);
    let v = parse_json(&stdout_of(&["criteria", "--n", "4", "--format", "json"])).unwrap();
    assert_eq!(v["lambda1_bounds"][0], 2.25);
    assert_eq!(v["lambda1_bounds"][1], 16.0);
}

#[test]
fn exit_codes_and_single_line_diagnostics() {
    for (args, threads) in [
        (&["index", "--a", "0.5"][..], None),
        (&["sweep-f", "--step", "0"][..], None),
        (
            &["embed-export", "--family", "hyperbolic", "--n", "2"][..],
            None,
        ),
        (&["criteria", "--pinch-a", "2", "--pinch-b", "1"][..], None),
        (
            &[
                "criteria",
                "--n",
                "2",
                "--sobolev-const",
                "1",
                "--a-norm-pow-n",
                "1",
            ][..],
            None,
        ),
        (&["no-such-command"][..], None),
        (&["helicoid", "--alpha", "1"][..], Some("zero")),
    ] {
        let out = hypstab(args, threads);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert_eq!(err.lines().count(), 1, "{args:?}: {err}");
        assert!(err.starts_with("hypstab: "));
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn numerical_failure_exits_three() {
    // Far along the profile x grows like e^s and the hyperboloid residual of
    // the generating curve exceeds the export tolerance.
    let out = hypstab(
        &[
            "embed-export",
            "--family",
            "hyperbolic",
            "--n",
            "2",
            "--t",
            "1.5",
            "--s-max",
            "40",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("numerical failure"), "{err}");
    assert_eq!(err.lines().count(), 1);
}

#[test]
fn thread_cap_does_not_change_output() {
    let args = [
        "sweep-f", "--a-min", "0.6", "--a-max", "1.2", "--step", "0.1", "--format", "json",
    ];
    let one = hypstab(&args, Some("1"));
    let four = hypstab(&args, Some("4"));
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
}
