use std::process::Command;

use nlosc_cli::{run, EXIT_COMPUTATION, EXIT_CONFIG, EXIT_OK};

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("nlosc").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

/// Column name to values, from the CSV body below the `#` header.
fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<Option<f64>>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let cols = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|c| if c.is_empty() { None } else { Some(c.parse().unwrap()) }).collect())
        .collect();
    (cols, rows)
}

fn column(text: &str, name: &str) -> Vec<Option<f64>> {
    let (cols, rows) = parse_csv(text);
    let i = cols.iter().position(|c| c == name).unwrap_or_else(|| panic!("no column {name} in {cols:?}"));
    rows.iter().map(|r| r[i]).collect()
}

#[test]
fn harmonic_spectrum_columns_agree() {
    let (code, out, _) = call(&["spectrum", "--kappa", "0", "--n-max", "3"]);
    assert_eq!(code, EXIT_OK);
    let (cols, rows) = parse_csv(&out);
    assert_eq!(cols, ["n", "e_pert", "e_sc", "e_oracle", "delta_pert_oracle", "delta_sc_oracle"]);
    for (n, r) in rows.iter().enumerate() {
        let want = n as f64 + 0.5;
        for v in &r[1..4] {
            assert_eq!(v.unwrap(), want);
        }
    }
}

#[test]
fn quartic_spectrum_values() {
    let (code, out, _) = call(&["spectrum", "--kappa", "1/100", "--n-max", "2"]);
    assert_eq!(code, EXIT_OK);
    let pert = column(&out, "e_pert");
    assert!((pert[1].unwrap() - 1.5354375).abs() < 1e-12);
    let oracle = column(&out, "e_oracle");
    assert!((oracle[0].unwrap() - 0.5072375).abs() < 5e-5);
    let delta = column(&out, "delta_pert_oracle");
    assert!((delta[0].unwrap() - (pert[0].unwrap() - oracle[0].unwrap())).abs() < 1e-15);
}

#[test]
fn method_selection_drops_columns() {
    let (code, out, _) = call(&["spectrum", "--kappa", "0.01", "--method", "pert"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(parse_csv(&out).0, ["n", "e_pert"]);
    let (code, out, _) = call(&["spectrum", "--kappa", "0.01", "--method", "sc-quadrature", "--n-max", "2"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(parse_csv(&out).0, ["n", "e_sc"]);
}

#[test]
fn header_records_version_hash_and_warnings() {
    let (_, out, _) = call(&["spectrum", "--kappa", "0.05", "--n-max", "5", "--method", "pert"]);
    assert!(out.starts_with(&format!("# nlosc {}\n# command: spectrum\n# config-sha256: ", env!("CARGO_PKG_VERSION"))));
    assert!(out.lines().any(|l| l.starts_with("# warning: perturbative")));
    let hash = out.lines().nth(2).unwrap().trim_start_matches("# config-sha256: ");
    assert_eq!(hash.len(), 64);
}

#[test]
fn negative_coupling_terminates_the_semiclassical_column() {
    let (code, out, _) = call(&["spectrum", "--kappa", "-0.01", "--n-max", "10", "--method", "sc-closed"]);
    assert_eq!(code, EXIT_OK);
    let sc = column(&out, "e_sc");
    assert!(sc[7].is_some() && sc[8].is_none());
    assert!(sc[7].unwrap() < 0.5 + 1.0 / 0.16);
    assert!(out.contains("# warning: bounded spectrum"));
}

#[test]
fn lambda_columns() {
    let (code, out, _) = call(&["lambda", "--kappa", "0", "--e", "1,10,100"]);
    assert_eq!(code, EXIT_OK);
    for name in ["lambda_closed", "lambda_quadrature", "lambda_pert"] {
        assert!(column(&out, name).iter().all(|v| (v.unwrap() - 1.0).abs() < 1e-12), "{name}");
    }
    let k = 0.01;
    let (_, out, _) = call(&["lambda", "--kappa", "0.01", "--e", "1,10"]);
    let (c, q, p) = (column(&out, "lambda_closed"), column(&out, "lambda_quadrature"), column(&out, "lambda_pert"));
    assert!(((c[1].unwrap() - q[1].unwrap()) / c[1].unwrap()).abs() < 1e-8);
    assert!(((c[0].unwrap() - q[0].unwrap()) / c[0].unwrap()).abs() < 1e-8);
    // the perturbative series counts from e + 1/2, the closed form from e - 1/2
    let shift = p[0].unwrap() - c[0].unwrap();
    assert!((shift - 3.0 * k).abs() < 50.0 * k * k, "{shift}");
}

#[test]
fn lambda_below_the_floor_is_empty() {
    let (code, out, _) = call(&["lambda", "--kappa", "0.01", "--e", "0.25"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(parse_csv(&out).0, ["e", "lambda_pert"]);
}

#[test]
fn thermal_harmonic_closed_forms() {
    let (code, out, _) = call(&["thermal", "--kappa", "0", "--beta", "1", "--method", "sc-closed"]);
    assert_eq!(code, EXIT_OK);
    let z = column(&out, "Z")[0].unwrap();
    let want = (-0.5f64).exp() / (1.0 - (-1.0f64).exp());
    assert!((z - want).abs() < 1e-12 * want);
    let n = column(&out, "avg_number")[0].unwrap();
    assert!((n - 1.0 / (1f64.exp() - 1.0)).abs() < 1e-12);
}

#[test]
fn thermal_quartic_residuals_and_classical_ratio() {
    let (code, out, _) = call(&["thermal", "--kappa", "0.01", "--beta", "0.02,0.5,1,2", "--classical"]);
    assert_eq!(code, EXIT_OK);
    for name in ["res_t3", "res_t6", "res_t10"] {
        assert!(column(&out, name).iter().all(|v| v.unwrap() <= 1e-6), "{name}");
    }
    let ratio = column(&out, "ratio_quantum_classical")[0].unwrap();
    assert!((ratio - 1.0).abs() < 0.02, "{ratio}");
}

#[test]
fn thermal_perturbative_ladder() {
    let (code, out, _) = call(&["thermal", "--kappa", "0.001", "--beta", "1", "--method", "pert"]);
    assert_eq!(code, EXIT_OK);
    assert!(column(&out, "res_t3")[0].unwrap() <= 1e-6);
}

#[test]
fn oracle_table_and_refusal() {
    let (code, out, _) = call(&["oracle", "--kappa", "0.01", "--n-max", "3"]);
    assert_eq!(code, EXIT_OK);
    let e = column(&out, "e_oracle");
    assert_eq!(e.len(), 4);
    assert!(e.windows(2).all(|w| w[0] < w[1]));
    let (code, _, err) = call(&["oracle", "--kappa", "-0.01"]);
    assert_eq!(code, EXIT_CONFIG);
    assert_eq!(err.lines().count(), 1);
    let (code, out, _) = call(&["oracle", "--kappa", "-0.01", "--allow-negative-oracle", "--n-max", "1"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("# warning: negative coupling"));
}

#[test]
fn fdlie_table() {
    let (code, out, _) = call(&["fdlie", "--kappa", "0", "--e", "1,2"]);
    assert_eq!(code, EXIT_OK);
    assert!(column(&out, "kernel_residual").iter().all(|v| v.unwrap() == 0.0));
    assert!(column(&out, "commutator").iter().all(|v| v.unwrap().abs() < 1e-15));
    let (_, out, _) = call(&["fdlie", "--kappa", "0.01", "--e", "1", "--method", "pert"]);
    let r = column(&out, "kernel_residual")[0].unwrap();
    assert!(r > 0.0 && (r - 0.03).abs() < 0.01);
    for name in ["linearity", "product_rule"] {
        assert!(column(&out, name)[0].unwrap().abs() < 1e-12);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(call(&["bogus"]).0, EXIT_CONFIG);
    assert_eq!(call(&["spectrum", "--kappa", "x"]).0, EXIT_CONFIG);
    assert_eq!(call(&["spectrum", "--config", "/nonexistent/run.toml"]).0, EXIT_CONFIG);
    assert_eq!(call(&["thermal", "--method", "oracle"]).0, EXIT_CONFIG);
    assert_eq!(call(&["thermal", "--beta", "-1"]).0, EXIT_CONFIG);
    assert_eq!(call(&["--version"]).0, EXIT_OK);
    let (code, _, err) = call(&["spectrum", "--out", "/nonexistent/dir/out.csv"]);
    assert_eq!(code, EXIT_COMPUTATION);
    assert!(err.starts_with("error: "));
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    let out = dir.path().join("out.csv");
    let ladder = dir.path().join("ladder.csv");
    std::fs::write(
        &cfg,
        "method = \"sc-closed\"\nn_max = 4\n[oscillator]\npotential = \"quartic\"\nkappa = \"1/100\"\n",
    )
    .unwrap();
    let c = cfg.to_str().unwrap();
    let (code, stdout, _) = call(&[
        "spectrum",
        "--config",
        c,
        "--out",
        out.to_str().unwrap(),
        "--ladder-out",
        ladder.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(stdout.is_empty());
    let table = std::fs::read_to_string(&out).unwrap();
    assert_eq!(column(&table, "e_sc").len(), 5);
    let lad = std::fs::read_to_string(&ladder).unwrap();
    assert!(lad.starts_with("n,e_n,lambda_at_prev,A_log\n0,0.5,,0\n"));

    let (_, a, _) = call(&["spectrum", "--config", c]);
    let (_, b, _) = call(&["spectrum", "--config", c, "--n-max", "2"]);
    assert_ne!(a.lines().nth(2), b.lines().nth(2));
    assert_eq!(parse_csv(&b).1.len(), 3);

    std::fs::write(&cfg, "unknown_key = 1\n").unwrap();
    assert_eq!(call(&["spectrum", "--config", c]).0, EXIT_CONFIG);
}

#[test]
fn verify_algebra_prints_coefficients() {
    let (code, out, _) = call(&["verify", "algebra"]);
    assert_eq!(code, EXIT_OK);
    for needle in ["PASS g1: 75/4", "PASS g5: -153/8", "PASS e_g: 1/2 + 3/4 k - 21/8 k^2"] {
        assert!(out.contains(needle), "{needle}");
    }
    assert!(!out.contains("FAIL"));
}

#[test]
fn verify_semiclassical_has_the_cross_check_table() {
    let (code, out, _) = call(&["verify", "semiclassical"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.matches("PASS closed vs quadrature").count(), 4);
}

#[test]
fn binary_is_deterministic() {
    let bin = env!("CARGO_BIN_EXE_nlosc");
    let runs: Vec<_> = (0..2)
        .map(|_| Command::new(bin).args(["verify", "all"]).output().unwrap())
        .collect();
    assert_eq!(runs[0].status.code(), Some(EXIT_OK));
    assert_eq!(runs[0].stdout, runs[1].stdout);
    let tables: Vec<_> = (0..2)
        .map(|_| Command::new(bin).args(["thermal", "--kappa", "0.01"]).output().unwrap().stdout)
        .collect();
    assert_eq!(tables[0], tables[1]);
    let bad = Command::new(bin).args(["oracle", "--kappa", "-1"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_CONFIG));
}
