use std::process::{Command, Output};

fn cps(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cps")).args(args).output().unwrap()
}

fn cps_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cps"))
        .args(args)
        .env(key, value)
        .output()
        .unwrap()
}

/// Header columns and parsed rows of a CSV table.
fn parse(out: &Output) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().strip_prefix("# ").unwrap();
    let columns = header.split(',').map(str::to_owned).collect();
    let rows = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    (columns, rows)
}

fn column(columns: &[String], name: &str) -> usize {
    columns.iter().position(|c| c == name).unwrap()
}

#[test]
fn vacuum_row() {
    let out = cps(&["stats", "--eps", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let (cols, rows) = parse(&out);
    let r = &rows[0];
    let get = |n| r[column(&cols, n)];
    assert_eq!(
        (get("var_x"), get("var_p"), get("cov_xp"), get("rs_product")),
        (0.5, 0.5, 0.0, 0.25)
    );
    assert_eq!(get("converged"), 1.0);
}

#[test]
fn squeezed_row_at_quarter_turn() {
    for phi in ["pi/2", "1.5707963"] {
        let out = cps(&["stats", "--nbar", "25", "--phi", phi]);
        assert_eq!(out.status.code(), Some(0));
        let (cols, rows) = parse(&out);
        let r = &rows[0];
        assert!(r[column(&cols, "mean_x")].abs() < 1e-6);
        assert!((r[column(&cols, "var_x")] - 0.0324130055689).abs() < 1e-12);
        assert!((r[column(&cols, "rs_product")] - 0.358403750058).abs() < 1e-11);
    }
    let (cols, rows) = parse(&cps(&["stats", "--nbar", "25", "--phi", "pi/2"]));
    assert_eq!(rows[0][column(&cols, "mean_x")], 0.0);
}

#[test]
fn seventeen_significant_digits() {
    let text = String::from_utf8(cps(&["stats", "--nbar", "3"]).stdout).unwrap();
    let row = text.lines().nth(1).unwrap();
    let mantissa = row.split(',').nth(5).unwrap().split('e').next().unwrap();
    assert_eq!(mantissa.replace(['.', '-'], "").len(), 17);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let args = |p: &std::path::Path| {
        vec![
            "sweep".to_owned(),
            "--param".into(),
            "nbar".into(),
            "--from".into(),
            "0".into(),
            "--to".into(),
            "50".into(),
            "--points".into(),
            "26".into(),
            "-o".into(),
            p.to_str().unwrap().to_owned(),
        ]
    };
    let run = |p: &std::path::Path, threads: &str| {
        let a: Vec<String> = args(p);
        let a: Vec<&str> = a.iter().map(String::as_str).collect();
        assert_eq!(cps_env(&a, "CPS_THREADS", threads).status.code(), Some(0));
        std::fs::read(p).unwrap()
    };
    let first = run(&a, "1");
    let second = run(&b, "3");
    assert!(!first.is_empty());
    assert_eq!(first, second);
}

#[test]
fn sweep_rows_ascend() {
    let (cols, rows) = parse(&cps(&[
        "sweep", "--param", "eps", "--from", "0", "--to", "0.9", "--points", "10",
    ]));
    let k = column(&cols, "eps_abs");
    assert_eq!(rows.len(), 10);
    assert!(rows.windows(2).all(|w| w[0][k] < w[1][k]));
}

#[test]
fn invalid_arguments_exit_one() {
    for args in [
        vec!["stats"],
        vec!["stats", "--eps", "0.5", "--nbar", "1"],
        vec!["stats", "--eps", "1.0"],
        vec!["stats", "--nbar", "-2"],
        vec!["stats", "--eps", "0.5", "--phi", "half"],
        vec!["figure", "nope"],
        vec!["wigner", "--nbar", "1", "--nq", "0"],
        vec!["wigner", "--nbar", "1", "--q-min", "2", "--q-max", "1"],
        vec!["sweep", "--from", "3", "--to", "1"],
        vec!["fit-eta", "--points", "1"],
        vec!["stats", "--eps", "0.5", "--tail-tol", "0"],
    ] {
        let out = cps(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
    assert_eq!(
        cps_env(&["stats", "--eps", "0"], "CPS_THREADS", "zero").status.code(),
        Some(1)
    );
}

#[test]
fn help_exits_zero() {
    assert_eq!(cps(&["--help"]).status.code(), Some(0));
    assert_eq!(cps(&["figure", "--help"]).status.code(), Some(0));
}

#[test]
fn non_converged_rows_are_emitted_and_exit_two() {
    let out = cps(&[
        "sweep",
        "--from",
        "1",
        "--to",
        "100",
        "--points",
        "4",
        "--fixed-n",
        "100",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let (cols, rows) = parse(&out);
    let k = column(&cols, "converged");
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0][k], 1.0);
    assert_eq!(rows[3][k], 0.0);
    assert!(rows.iter().all(|r| r[column(&cols, "terms_used")] == 100.0));
}

#[test]
fn figure_sigmin() {
    let out = cps(&["figure", "sigmin"]);
    assert_eq!(out.status.code(), Some(0));
    let (cols, rows) = parse(&out);
    assert_eq!(
        cols,
        [
            "eps_sq",
            "n_bar",
            "sigma_x",
            "sigma_x_approx",
            "half_one_minus_eps_sq",
            "sigma_x_sqzvac",
            "terms_used",
            "converged"
        ]
    );
    assert_eq!(rows.len(), 201);
    assert_eq!(&rows[0][..6], [0.0, 0.0, 0.5, 0.5, 0.5, 0.5]);
    let last = rows.last().unwrap();
    assert_eq!(last[0], 0.9999);
    assert!(last[2] > 0.0 && last[2] < 0.002);
    assert!(rows[1..].iter().all(|r| r[2] > r[4] && r[2] < 0.5));
}

#[test]
fn figure_sigmin_with_fixed_terms() {
    // 1000 terms are not enough as |eps|² → 1; those rows are flagged.
    let out = cps(&["figure", "sigmin", "--reference-terms", "--points", "11"]);
    assert_eq!(out.status.code(), Some(2));
    let (cols, rows) = parse(&out);
    assert!(rows.iter().all(|r| r[column(&cols, "terms_used")] == 1000.0));
    assert_eq!(rows[0][column(&cols, "converged")], 1.0);
    assert_eq!(rows[10][column(&cols, "converged")], 0.0);
}

#[test]
fn figure_d_reaches_large_photon_numbers() {
    let out = cps(&["figure", "D", "--reference-terms", "--points", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let (_, rows) = parse(&out);
    assert_eq!(rows[0][..2], [0.0, 0.25]);
    assert_eq!(rows[2][0], 9999.0);
    assert!((rows[2][1] - 0.6772625).abs() < 1e-6);
    assert!((rows[2][3] - 0.677).abs() < 1e-3);
}

#[test]
fn wigner_grid_output() {
    let out = cps(&["wigner", "--nbar", "1", "--nq", "5", "--np", "3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 15);
    assert_eq!(doc["columns"][2], "w");
    // p outer, q inner.
    assert_eq!(rows[0][0], -4.0);
    assert_eq!(rows[1][1], -4.0);
    assert_eq!(rows[5][1], 0.0);
}

#[test]
fn wigner_reference_cut_offs_are_flagged_at_thirty_photons() {
    let out = cps(&["figure", "wig", "--reference-terms", "--points", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let (cols, rows) = parse(&out);
    assert_eq!(rows.len(), 30);
    let k = column(&cols, "converged");
    assert!(rows[..15].iter().all(|r| r[k] == 1.0));
    assert!(rows[15..].iter().all(|r| r[k] == 0.0));
    assert!(rows.iter().all(|r| r[column(&cols, "mu_max")] == 110.0));
}

#[test]
fn gaussianity_and_eta_rows() {
    let (cols, rows) = parse(&cps(&["gaussianity", "--eps", "0.1"]));
    let g = rows[0][column(&cols, "g")];
    assert!(((g - 1.0) / 1e-4 - 0.0178).abs() < 1e-4);
    let (cols, rows) = parse(&cps(&["fit-eta"]));
    let eta = rows[0][column(&cols, "eta")];
    assert!((1.55..=1.63).contains(&eta));
}

#[test]
fn wavefunction_output_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("psi.csv");
    let out = cps(&[
        "wavefunction",
        "--nbar",
        "1",
        "--points",
        "7",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(path).unwrap();
    assert!(text.starts_with("# x,psi_re,psi_im,density,terms_used,converged\n"));
    assert_eq!(text.lines().count(), 8);
}
