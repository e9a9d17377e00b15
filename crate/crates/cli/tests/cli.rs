use std::path::Path;
use std::process::Command;

use hetnet::radio::{TABLE_LAMBDA0, TABLE_LAMBDA2};
use hetnet_cli::{
    emit_csv, parse_config, parse_workers, run_single, run_sweep, to_csv_string, CliError, Mode,
    Row, RunConfig, RunOptions, SweepParameter, SweepSpec, HEADER,
};

const REFERENCE_P_C: f64 = 0.275946660051359;

fn hetnet() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hetnet"))
}

#[test]
fn empty_config_is_reference_scenario() {
    let cfg = parse_config("").unwrap();
    let p = cfg.params;
    assert_eq!(p.lambda2, TABLE_LAMBDA2);
    assert_eq!(p.lambda0, TABLE_LAMBDA0);
    assert_eq!((p.t1, p.t2), (1.0, 1.0));
    assert_eq!(p.d, 50.0 / 3f64.sqrt());
    assert_eq!(p.p1 / p.p2, 100.0);
    assert_eq!((p.alpha, p.delta, p.p0, p.noise), (4.0, 100.0, 1.0, 0.0));
    assert!(cfg.sweep.is_none());
    assert_eq!(cfg, RunConfig::default());
}

#[test]
fn config_errors() {
    let e = parse_config("alpha = 2").unwrap_err();
    assert!(e.to_string().contains("alpha must exceed 2"), "{e}");
    let e = parse_config("lambda0 = 1.0\nbogus = 3").unwrap_err();
    assert!(
        matches!(e, CliError::Parse(ref m) if m.contains("line 2")),
        "{e}"
    );
    assert!(parse_config("schema_version = 2").is_err());
    assert!(parse_config("[sweep]\nparameter = \"delta_db\"\nvalues = []").is_err());
    assert!(parse_config("[sweep]\nparameter = \"gain\"\nvalues = [1.0]").is_err());
    assert!(parse_config(
        "[sweep]\nparameter = \"t1\"\nvalues = [1.0]\nmode = \"both\"\nn_trials = 0"
    )
    .is_err());
    assert!(parse_config("[quadrature]\nrel_tol = 0.0").is_err());
    assert!(parse_config("[quadrature]\nextra = 1").is_err());
}

#[test]
fn config_values() {
    let cfg = parse_config("delta_db = 20").unwrap();
    assert!((cfg.params.delta - 100.0).abs() < 1e-12);
    let cfg = parse_config("delta_db = -inf").unwrap();
    assert_eq!(cfg.params.delta, 0.0);
    let cfg = parse_config(
        "schema_version = 1\noutput = \"x.csv\"\nlambda2 = 0.01\n\
         [sweep]\nparameter = \"lambda2_scale\"\nvalues = [0.5, 2.0]\nmode = \"mc\"\nn_trials = 10\nseed = 4\n\
         [quadrature]\nrel_tol = 1e-9\nmax_subdiv = 50",
    )
    .unwrap();
    let s = cfg.sweep.as_ref().unwrap();
    assert_eq!(s.parameter, SweepParameter::Lambda2Scale);
    assert_eq!(s.mode, Mode::Montecarlo);
    assert_eq!((s.n_trials, s.seed), (10, 4));
    assert_eq!(cfg.output.as_deref(), Some(Path::new("x.csv")));
    assert_eq!(cfg.quadrature.max_subdiv, 50);
    // scales multiply the configured intensity
    assert_eq!(
        SweepParameter::Lambda2Scale.apply(&cfg.params, 2.0).lambda2,
        0.02
    );
}

#[test]
fn mode_and_workers_parsing() {
    assert_eq!("mc".parse::<Mode>().unwrap(), Mode::Montecarlo);
    assert_eq!("both".parse::<Mode>().unwrap(), Mode::Both);
    assert!("fast".parse::<Mode>().is_err());
    assert_eq!(parse_workers(None).unwrap(), None);
    assert_eq!(parse_workers(Some("8")).unwrap(), Some(8));
    assert!(parse_workers(Some("0")).is_err());
    assert!(parse_workers(Some("many")).is_err());
}

#[test]
fn default_row_is_frozen() {
    let row = run_single(
        &RunConfig::default(),
        Mode::Analytic,
        1,
        1,
        RunOptions::default(),
    );
    let a = row.analytic.unwrap();
    assert!((a.p_c - REFERENCE_P_C).abs() < 1e-12, "{}", a.p_c);
    assert!(row.mc.is_none());
}

#[test]
fn empty_table_is_header_only() {
    let text = to_csv_string(&[]);
    assert_eq!(text, format!("{}\n", HEADER.join(",")));
}

#[test]
fn analytic_row_leaves_mc_cells_empty() {
    let spec = SweepSpec {
        parameter: SweepParameter::DeltaDb,
        values: vec![20.0],
        ..SweepSpec::default()
    };
    let rows = run_sweep(&RunConfig::default(), &spec, RunOptions::default());
    let text = to_csv_string(&rows);
    let line = text.lines().nth(1).unwrap();
    assert!(line.starts_with("delta_db,20,"));
    assert!(line.ends_with(",,,,"), "{line}");
}

#[test]
fn csv_round_trip_is_exact() {
    let spec = SweepSpec {
        parameter: SweepParameter::T2,
        values: vec![0.1, 1.0 / 3.0, 7.25],
        mode: Mode::Both,
        n_trials: 500,
        seed: 3,
    };
    let rows = run_sweep(&RunConfig::default(), &spec, RunOptions::default());
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    emit_csv(&rows, &path).unwrap();

    let mut reader = csv::Reader::from_path(&path).unwrap();
    assert_eq!(reader.headers().unwrap().iter().collect::<Vec<_>>(), HEADER);
    let parsed: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(parsed.len(), rows.len());
    for (rec, row) in parsed.iter().zip(&rows) {
        let f = |i: usize| rec[i].parse::<f64>().unwrap();
        let a = row.analytic.unwrap();
        let m = row.mc.unwrap();
        assert_eq!(&rec[0], "t2");
        assert_eq!(f(1).to_bits(), row.sweep_value.unwrap().to_bits());
        assert_eq!(f(2).to_bits(), a.p_msuc.to_bits());
        assert_eq!(f(3).to_bits(), a.p_psuc.to_bits());
        assert_eq!(f(4).to_bits(), a.p_c.to_bits());
        assert_eq!(f(5).to_bits(), m.p_c_hat.to_bits());
        assert_eq!(f(6).to_bits(), m.stderr.to_bits());
        assert_eq!(rec[7].parse::<u64>().unwrap(), 500);
        assert_eq!(f(8).to_bits(), m.macro_fraction.to_bits());
    }
}

#[test]
fn failed_row_does_not_abort_sweep() {
    let spec = SweepSpec {
        parameter: SweepParameter::Alpha,
        values: vec![3.0, 1.5, 4.0],
        ..SweepSpec::default()
    };
    let rows: Vec<Row> = run_sweep(&RunConfig::default(), &spec, RunOptions::default());
    assert_eq!(
        rows.iter().map(Row::failed).collect::<Vec<_>>(),
        [false, true, false]
    );
    assert!(rows[1].analytic.is_none());
    let text = to_csv_string(&rows);
    assert_eq!(text.lines().nth(2).unwrap(), "alpha,1.5,,,,,,,");
}

#[test]
fn emit_to_missing_directory_names_path() {
    let e = emit_csv(&[], Path::new("/nonexistent-dir/out.csv")).unwrap_err();
    assert!(e.to_string().contains("/nonexistent-dir/out.csv"));
}

#[test]
fn binary_sweep_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    let out = dir.path().join("rows.csv");
    std::fs::write(
        &cfg,
        "[sweep]\nparameter = \"alpha\"\nvalues = [4.0, 2.0]\n",
    )
    .unwrap();
    let status = hetnet()
        .args(["sweep", "--config"])
        .arg(&cfg)
        .arg("--output")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&status.stderr);
    assert!(stderr.contains("alpha=2"), "{stderr}");
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 3);

    let ok = hetnet().args(["analytic"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let stdout = String::from_utf8(ok.stdout).unwrap();
    assert!(stdout.lines().nth(1).unwrap().starts_with("none,,"));

    std::fs::write(&cfg, "alpha = 1.0\n").unwrap();
    let bad = hetnet()
        .args(["analytic", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("alpha must exceed 2"));

    let bad = hetnet()
        .args(["simulate", "--trials", "10"])
        .env("HETNET_WORKERS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn binary_simulate_honours_flags() {
    let run = || {
        hetnet()
            .args([
                "simulate", "--trials", "300", "--seed", "5", "--mode", "both",
            ])
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let cells: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(cells[7], "300");
    assert!(!cells[4].is_empty() && !cells[5].is_empty());
}
