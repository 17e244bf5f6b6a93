//! End-to-end behavior of the binary: exit codes, output schemas, and the
//! whole-file determinism contract.

use std::path::Path;
use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_spintransfer")
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(bin()).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn write(dir: &Path, name: &str, content: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, content).unwrap();
    p.to_str().unwrap().to_string()
}

/// Value of a `key = v` or `# key = v` line.
fn meta(text: &str, key: &str) -> Option<String> {
    text.lines().find_map(|line| {
        let line = line.strip_prefix("# ").unwrap_or(line);
        let (k, v) = line.split_once(" = ")?;
        (k == key).then(|| v.to_string())
    })
}

#[test]
fn engineered_spectrum_lists_formula_and_residuals() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.ini", "[model]\ntype = engineered\nn = 4\nk = 1\n");
    let (code, out, _) = run(&["spectrum", "--config", &cfg]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("level,eigenvalue,parity,formula,residual"));
    let mut formulas = Vec::new();
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells.len(), 5);
        formulas.push(cells[3].parse::<f64>().unwrap());
        assert!(cells[4].parse::<f64>().unwrap() <= 1e-9);
    }
    assert_eq!(formulas, vec![-5.0, -3.0, 3.0, 5.0]);
}

#[test]
fn non_symmetric_custom_chain_has_indefinite_parity() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "d.txt", "1 0.0\n2 1.0\n3 0.0\n");
    write(dir.path(), "j.txt", "1 1.0\n2 0.5\n");
    let cfg = write(
        dir.path(),
        "run.ini",
        "[model]\ntype = custom\ndiagonal = d.txt\noffdiagonal = j.txt\n",
    );
    let (code, out, _) = run(&["spectrum", "--config", &cfg]);
    assert_eq!(code, 0);
    assert!(out.lines().skip(1).all(|l| l.ends_with(",none")), "{out}");
}

#[test]
fn empty_offdiagonal_file_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "j.txt", "# no couplings\n");
    let cfg = write(dir.path(), "run.ini", "[model]\ntype = custom\noffdiagonal = j.txt\n");
    let out_path = dir.path().join("spec.csv");
    let (code, _, err) =
        run(&["spectrum", "--config", &cfg, "--out", out_path.to_str().unwrap()]);
    assert_eq!(code, 3, "stderr: {err}");
    assert!(!out_path.exists(), "failed run must not leave partial output");
}

#[test]
fn certification_pass_and_fail_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    for k in [0, 2] {
        let cfg = write(
            dir.path(),
            &format!("eng{k}.ini"),
            &format!("[model]\ntype = engineered\nn = 10\nk = {k}\n"),
        );
        let (code, out, _) = run(&["check-spmc", "--config", &cfg, "--format", "text"]);
        assert_eq!(code, 0, "n=10 k={k} should certify");
        assert_eq!(meta(&out, "passes").as_deref(), Some("true"));
        if k == 0 {
            let t: f64 = meta(&out, "predicted_transfer_time").unwrap().parse().unwrap();
            assert!((t - std::f64::consts::FRAC_PI_2).abs() <= 1e-9);
        }
    }

    write(dir.path(), "j.txt", "1 1.0\n2 1.0\n3 1.0\n");
    let cfg = write(dir.path(), "uni.ini", "[model]\ntype = custom\noffdiagonal = j.txt\n");
    let (code, out, _) = run(&["check-spmc", "--config", &cfg, "--format", "text"]);
    assert_eq!(code, 2, "uniform 4-site chain must fail certification");
    assert_eq!(meta(&out, "failure").as_deref(), Some("incommensurate"));
}

#[test]
fn two_site_toy_transfer_peaks_at_half_pi() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "run.ini",
        "[model]\ntype = engineered\nn = 2\n\n[curve]\nt_max = 3.0\nsamples = 1500\n",
    );
    let (code, out, _) = run(&["transfer", "--config", &cfg]);
    assert_eq!(code, 0);
    assert!(out.starts_with("time,fidelity\n"));
    let peak: f64 = meta(&out, "peak_fidelity").unwrap().parse().unwrap();
    let at: f64 = meta(&out, "peak_time").unwrap().parse().unwrap();
    assert!(peak >= 1.0 - 1e-8);
    assert!((at - std::f64::consts::FRAC_PI_2).abs() <= 1e-6);
}

#[test]
fn centered_packet_at_time_zero_has_unit_fidelity() {
    // Distance 0: the mirror target is the packet itself.
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "run.ini",
        "[model]\ntype = parabolic\ndistance = 0\nmargin = 10\nwidth = 2.0\nlambda = 0.4\n\n\
         [curve]\nt_max = 1.0\nsamples = 1\n",
    );
    let (code, out, _) = run(&["transfer", "--config", &cfg]);
    assert_eq!(code, 0);
    let rows: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), 1);
    let cells: Vec<&str> = rows[0].split(',').collect();
    assert_eq!(cells[0].parse::<f64>().unwrap(), 0.0);
    assert!((cells[1].parse::<f64>().unwrap() - 1.0).abs() <= 1e-12);
}

#[test]
fn single_point_sweep_reports_itself_as_best() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "run.ini",
        "[model]\ntype = parabolic\ndistance = 10\nmargin = 5\nwidth = 2.0\n\n\
         [sweep]\nlambda_min = 0.3\nlambda_max = 0.3\npoints = 1\nsamples = 500\nrefine = false\n",
    );
    let (code, out, _) = run(&["sweep", "--config", &cfg]);
    assert_eq!(code, 0);
    let rows: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), 1);
    let best: f64 = meta(&out, "best_lambda").unwrap().parse().unwrap();
    assert_eq!(best, 0.3);
}

#[test]
fn window_too_short_for_arrival_flags_rows_and_leaves_no_best() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "run.ini",
        "[model]\ntype = parabolic\ndistance = 10\nmargin = 5\nwidth = 2.0\n\n\
         [sweep]\nlambda_min = 0.03\nlambda_max = 0.05\npoints = 2\nsamples = 300\n\
         refine = false\nt_max = 0.5\n",
    );
    let (code, out, _) = run(&["sweep", "--config", &cfg]);
    assert_eq!(code, 0);
    let rows: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert!(rows.iter().all(|r| r.ends_with(",1")), "all rows boundary-flagged: {out}");
    assert_eq!(meta(&out, "best").as_deref(), Some("none"));
}

#[test]
fn usage_and_io_failures_have_distinct_exit_codes() {
    let (code, _, _) = run(&["spectrum", "--no-such-flag"]);
    assert_eq!(code, 3);
    let (code, _, _) = run(&["no-such-command"]);
    assert_eq!(code, 3);
    let (code, _, _) = run(&["--help"]);
    assert_eq!(code, 0);
    // Missing config file is an I/O failure, not a validation failure.
    let (code, _, _) = run(&["spectrum", "--config", "/nonexistent/run.ini"]);
    assert_eq!(code, 4);

    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.ini", "[model]\ntype = engineered\nn = 4\nbogus = 1\n");
    let (code, _, err) = run(&["spectrum", "--config", &cfg]);
    assert_eq!(code, 3);
    assert!(err.contains("bogus"), "error names the offending key: {err}");
}

#[test]
fn margin_flag_overrides_model_margin() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "run.ini",
        "[model]\ntype = parabolic\ndistance = 4\nmargin = 3\nwidth = 2.0\nlambda = 0.5\n",
    );
    // M = 4/2 + margin; spectrum row count is 2M + 1.
    let (_, out, _) = run(&["spectrum", "--config", &cfg]);
    assert_eq!(out.lines().count() - 1, 11);
    let (_, out, _) = run(&["spectrum", "--config", &cfg, "--margin", "6"]);
    assert_eq!(out.lines().count() - 1, 17);
}

#[test]
fn every_command_rerun_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "d.txt", "1 0.2\n2 -0.1\n3 0.2\n");
    write(dir.path(), "j.txt", "1 0.8\n2 0.8\n");
    let custom = write(
        dir.path(),
        "custom.ini",
        "[model]\ntype = custom\ndiagonal = d.txt\noffdiagonal = j.txt\n\n[evolve]\ntime = 2.5\n",
    );
    let eng = write(dir.path(), "eng.ini", "[model]\ntype = engineered\nn = 8\nk = 1\n");
    let par = write(
        dir.path(),
        "par.ini",
        "[model]\ntype = parabolic\ndistance = 10\nmargin = 5\nwidth = 2.0\nlambda = 0.1\n\n\
         [curve]\nsamples = 400\n\n\
         [sweep]\nlambda_min = 0.02\nlambda_max = 0.4\npoints = 4\nsamples = 300\n",
    );

    let runs: &[(&str, &str, &[&str])] = &[
        ("spectrum", &eng, &[]),
        ("spectrum", &custom, &[]),
        ("check-spmc", &eng, &["--format", "text"]),
        ("evolve", &custom, &[]),
        ("transfer", &par, &[]),
        ("transfer", &eng, &["--tmax", "3.0"]),
        ("sweep", &par, &[]),
    ];
    for (i, (cmd, cfg, extra)) in runs.iter().enumerate() {
        let a = dir.path().join(format!("a{i}.out"));
        let b = dir.path().join(format!("b{i}.out"));
        for out in [&a, &b] {
            let mut args = vec![*cmd, "--config", cfg, "--out", out.to_str().unwrap()];
            args.extend_from_slice(extra);
            let (code, _, err) = run(&args);
            assert!(code == 0, "{cmd} failed (exit {code}): {err}");
        }
        let bytes_a = std::fs::read(&a).unwrap();
        let bytes_b = std::fs::read(&b).unwrap();
        assert_eq!(bytes_a, bytes_b, "{cmd} rerun differs");
        assert!(!bytes_a.is_empty());
    }
}
