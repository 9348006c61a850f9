use std::path::PathBuf;
use std::process::Command as Proc;

use affsurf::ConvexBody;
use affsurf_cli::config::{Command, Density, Format, Mode, Suite};
use affsurf_cli::{parse_body, CliError, ExperimentConfig};

fn bin() -> Proc {
    Proc::new(env!("CARGO_BIN_EXE_affsurf"))
}

fn write_json(dir: &tempfile::TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn parse_body_examples() {
    match parse_body("bpn:1.5", Some(3)).unwrap() {
        ConvexBody::Smooth(b) => assert_eq!(b.dim(), 3),
        other => panic!("{other:?}"),
    }
    let e = parse_body("ellipsoid:2,1", None).unwrap();
    assert!(matches!(e, ConvexBody::Smooth(_)) && e.dim() == 2);
    assert_eq!(parse_body("cube", Some(3)).unwrap().volume().unwrap(), 8.0);
    assert!((parse_body("simplex", None).unwrap().volume().unwrap() - 0.5).abs() < 1e-15);

    let dir = tempfile::tempdir().unwrap();
    let tri = write_json(&dir, "tri.json", r#"{"dim": 2, "vertices": [[0,0],[1,0],[0,1]]}"#);
    let k = parse_body(&format!("poly:@{}", tri.display()), None).unwrap();
    assert!(matches!(k, ConvexBody::V(_)));
    assert!((k.volume().unwrap() - 0.5).abs() < 1e-15);

    let sq = write_json(
        &dir,
        "sq.json",
        r#"{"dim": 2, "halfspaces": [{"normal":[1,0],"offset":1},{"normal":[-1,0],"offset":1},
            {"normal":[0,1],"offset":1},{"normal":[0,-1],"offset":1}]}"#,
    );
    let k = parse_body(&format!("poly:@{}", sq.display()), None).unwrap();
    assert!(matches!(k, ConvexBody::H(_)));
    assert!((k.volume().unwrap() - 4.0).abs() < 1e-12);
}

#[test]
fn parse_body_errors() {
    assert!(matches!(parse_body("bpn:abc", None), Err(CliError::Parse { pos: 4, .. })));
    assert!(matches!(parse_body("ball:2", None), Err(CliError::Parse { .. })));
    assert!(matches!(parse_body("ellipsoid:2,1", Some(3)), Err(CliError::Usage(_))));
    assert!(matches!(parse_body("bpn:0.5", None), Err(CliError::Body(_))));
    assert!(matches!(parse_body("ellipsoid:1,-1", None), Err(CliError::Body(_))));

    let dir = tempfile::tempdir().unwrap();
    let bad = write_json(&dir, "bad.json", r#"{"dim": 2, "points": []}"#);
    assert!(matches!(parse_body(&format!("poly:@{}", bad.display()), None), Err(CliError::Json { .. })));
    let flat = write_json(&dir, "flat.json", r#"{"dim": 2, "vertices": [[0,0],[1,0],[2,0]]}"#);
    assert!(matches!(parse_body(&format!("poly:@{}", flat.display()), None), Err(CliError::Body(_))));
    let mixed = write_json(&dir, "mixed.json", r#"{"dim": 2, "vertices": [[0,0],[1,0,0],[0,1]]}"#);
    assert!(matches!(parse_body(&format!("poly:@{}", mixed.display()), None), Err(CliError::Body(_))));
    assert!(matches!(parse_body("poly:@/nonexistent/x.json", None), Err(CliError::Io { .. })));
}

#[test]
fn config_round_trips_through_flags() {
    let base = ExperimentConfig {
        command: Command::Asa { closed_form: false },
        body: Some("bpn:3".into()),
        dim: Some(2),
        grid: None,
        seed: 7,
        out: None,
        format: Format::Csv,
    };
    let configs = vec![
        base.clone(),
        ExperimentConfig { command: Command::Asa { closed_form: true }, grid: Some(512), ..base.clone() },
        ExperimentConfig { command: Command::Curvature { point: vec![-0.25, 1.0 / 3.0] }, ..base.clone() },
        ExperimentConfig {
            command: Command::Floating { t: vec![1e-2, 1e-4, 3.3e-7] },
            out: Some("report.json".into()),
            format: Format::Json,
            ..base.clone()
        },
        ExperimentConfig { command: Command::Rolling { tgrid: 7, samples: 1234 }, ..base.clone() },
        ExperimentConfig {
            command: Command::Randpoly { mode: Mode::Boundary(Density::Asa), n: vec![10, 20], reps: 3 },
            dim: None,
            ..base.clone()
        },
        ExperimentConfig { command: Command::Randpoly { mode: Mode::Interior, n: vec![5], reps: 1 }, ..base.clone() },
        ExperimentConfig { command: Command::Bestapprox { n: vec![3, 4, 1000] }, body: None, ..base.clone() },
        ExperimentConfig { command: Command::Check { suite: Suite::Inequalities }, body: None, dim: None, ..base.clone() },
        ExperimentConfig { command: Command::Check { suite: Suite::All }, body: None, seed: u64::MAX, ..base },
    ];
    for c in configs {
        let args = c.to_args();
        let back = ExperimentConfig::try_parse_from(&args).unwrap_or_else(|e| panic!("{args:?}: {e}"));
        assert_eq!(back, c, "{args:?}");
    }
}

#[test]
fn flags_may_precede_the_subcommand_values() {
    let c = ExperimentConfig::try_parse_from(["affsurf", "--seed", "3", "check", "inequalities"]).unwrap();
    assert_eq!(c.command, Command::Check { suite: Suite::Inequalities });
    assert_eq!(c.seed, 3);
}

fn code(args: &[&str]) -> (i32, String) {
    let out = bin().args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn exit_codes() {
    let (c, out) = code(&["asa", "--body", "bpn:3", "--dim", "2"]);
    assert_eq!(c, 0, "{out}");
    assert!(out.lines().nth(2).unwrap().starts_with("asa,bpn:3,2,quadrature,"));
    assert!(out.contains(",closed_form,1e-4,rel,true,"));

    let (c, out) = code(&["asa", "--body", "blob"]);
    assert_eq!(c, 2);
    assert!(out.contains("error[parse]"));
    assert_eq!(code(&["asa", "--body", "ellipsoid:2,1", "--dim", "3"]).0, 2);
    assert_eq!(code(&["asa"]).0, 2);
    assert_eq!(code(&["nonsense"]).0, 2);
    assert_eq!(code(&["floating", "--body", "ball"]).0, 2);
    assert_eq!(code(&["randpoly", "--body", "ball", "--N", "10", "--mode", "sideways"]).0, 2);

    let (c, out) = code(&["rolling", "--body", "bpn:1.5", "--samples", "100"]);
    assert_eq!(c, 1);
    assert!(out.contains("error[numeric.ContainmentViolation]"));

    // Increasing cut volumes are rejected by the library: numeric error row.
    let (c, out) = code(&["floating", "--body", "ball", "--t", "1e-4,1e-2"]);
    assert_eq!(c, 1);
    assert!(out.contains("error[numeric.InvalidBody]"));
}

fn strip_timestamp(s: &str) -> String {
    s.lines().filter(|l| !l.contains("timestamp")).collect::<Vec<_>>().join("\n")
}

#[test]
fn reports_are_reproducible() {
    for format in ["csv", "json"] {
        let args =
            ["randpoly", "--body", "ellipsoid:2,1", "--N", "20,40", "--reps", "30", "--seed", "9", "--format", format];
        let (c1, a) = code(&args);
        let (c2, b) = code(&args);
        assert_eq!(c1, c2);
        assert!(a.contains("timestamp"));
        assert_eq!(strip_timestamp(&a), strip_timestamp(&b));
    }
    let (_, a) = code(&["randpoly", "--body", "ball", "--N", "20,40", "--reps", "30", "--seed", "1"]);
    let (_, b) = code(&["randpoly", "--body", "ball", "--N", "20,40", "--reps", "30", "--seed", "2"]);
    assert_ne!(strip_timestamp(&a), strip_timestamp(&b));
}

#[test]
fn json_rows_match_csv_rows() {
    let (_, csv_out) = code(&["bestapprox", "--N", "3,6,12"]);
    let (_, json_out) = code(&["bestapprox", "--N", "3,6,12", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json_out).unwrap();
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(csv_out.as_bytes());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    let cols: Vec<String> = v["columns"].as_array().unwrap().iter().map(|c| c.as_str().unwrap().to_string()).collect();
    assert_eq!(header, cols);
    let rows = v["rows"].as_array().unwrap();
    for (rec, row) in rdr.records().zip(rows) {
        let rec = rec.unwrap();
        let row = row.as_array().unwrap();
        assert_eq!(rec.len(), row.len());
        assert_eq!(rec[1].parse::<u64>().unwrap(), row[1].as_u64().unwrap());
        assert_eq!(rec[3].parse::<f64>().unwrap(), row[3].as_f64().unwrap());
        assert_eq!(&rec[8], "le");
        assert_eq!(row[9], serde_json::Value::Bool(true));
    }
    assert_eq!(v["seed"], 0);
}

#[test]
fn writes_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("asa.json");
    let (c, stdout) =
        code(&["asa", "--body", "ellipsoid:2,1", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(c, 0);
    assert!(stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "asa");
    let row = v["rows"][0].as_array().unwrap();
    assert_eq!(row[3], "quadrature");
    assert!((row[5].as_f64().unwrap() - 2.0 * std::f64::consts::PI * 2f64.cbrt()).abs() < 1e-8);
    let leftovers: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(leftovers.len(), 1);
}

#[test]
fn curvature_rows() {
    let (c, out) = code(&["curvature", "--body", "bpn:3", "--point", "-1,0.5"]);
    assert_eq!(c, 0, "{out}");
    for m in ["implicit", "bordered", "graph", "dupin"] {
        assert!(out.contains(&format!(",{m},")), "{m}");
    }
    let (c, _) = code(&["curvature", "--body", "ball", "--point", "0,0"]);
    assert_eq!(c, 2);
    let (c, out) = code(&["curvature", "--body", "cube", "--point", "1,1"]);
    assert_eq!(c, 1);
    assert!(out.contains("error[numeric.NoUniqueNormal]"), "{out}");
}

#[test]
fn check_suite_passes() {
    let (c, out) = code(&["check", "all", "--seed", "7"]);
    assert_eq!(c, 0, "{out}");
    assert!(!out.contains(",false,"));
    let (c, ineq) = code(&["check", "inequalities", "--seed", "7"]);
    assert_eq!(c, 0);
    assert!(ineq.lines().count() < out.lines().count());
}
