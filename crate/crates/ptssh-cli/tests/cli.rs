//! End-to-end tests of the `ptssh` binary: exit codes, file handling, config
//! diagnostics and the documented CSV shapes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ptssh"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn ptssh")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ptssh-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn spectrum_sweep_shape_and_midgap_reality() {
    // 12 rows per gamma; below the critical contrast every eigenvalue is
    // real at solver precision.
    let out = run(&[
        "spectrum-sweep",
        "--set",
        "m=12",
        "--set",
        "u=1.5",
        "--set",
        "gamma_min=0",
        "--set",
        "gamma_max=0.04",
        "--set",
        "gamma_steps=9",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data[0], "gamma,index,re_E,im_E,edge_flag");
    assert_eq!(data.len() - 1, 9 * 12);
    let mut edge_rows = 0;
    for row in &data[1..] {
        let cols: Vec<&str> = row.split(',').collect();
        let im: f64 = cols[3].parse().unwrap();
        assert!(im.abs() <= 1e-8, "unexpected imaginary part {im}");
        edge_rows += usize::from(cols[4] == "1");
    }
    assert_eq!(edge_rows, 2 * 9, "two flagged edge rows per gamma");
}

#[test]
fn spectrum_sweep_empty_grid_is_header_only() {
    let out = run(&[
        "spectrum-sweep",
        "--set",
        "m=8",
        "--set",
        "u=2",
        "--set",
        "gamma_min=0",
        "--set",
        "gamma_max=1",
        "--set",
        "gamma_steps=0",
    ]);
    assert!(out.status.success());
    let data: Vec<String> = stdout(&out)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(String::from)
        .collect();
    assert_eq!(data, vec!["gamma,index,re_E,im_E,edge_flag".to_string()]);
}

#[test]
fn ep_sweep_records_row_errors_and_exits_nonzero() {
    // u = 0.9 is topologically trivial: that row must fail while the grid
    // keeps going, and the exit code must flag it.
    let out = run(&[
        "ep-sweep",
        "--set",
        "m_list=8",
        "--set",
        "u_list=0.9,2",
        "--set",
        "tol=1e-4",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[1].contains("error:"), "trivial-phase row: {}", rows[1]);
    assert!(rows[2].ends_with(",ok"), "nontrivial row: {}", rows[2]);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("rows_failed=1") && err.contains("rows_total=2"), "{err}");
}

#[test]
fn fatal_errors_use_exit_code_two() {
    // Unknown config key.
    let out = run(&["ep-find", "--set", "bogus=1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("status=fatal"), "{err}");
    assert!(err.contains("bogus"), "{err}");

    // Sitting exactly on the exceptional point is rejected with guidance.
    let out = run(&[
        "wavefunction-compare",
        "--set",
        "m=8",
        "--set",
        "u=2",
        "--set",
        "gamma=0.047058823529411764",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("exceptional point"), "{err}");

    // Command mismatch between config file and subcommand.
    let cfg = scratch("mismatch.cfg");
    std::fs::write(&cfg, "command = ep-sweep\n").unwrap();
    let out = run(&["ep-find", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_plus_overrides_and_out_file() {
    let cfg = scratch("find.cfg");
    std::fs::write(
        &cfg,
        "command = ep-find\nm = 10\nu = 2 # ratio w/v\ntol = 1e-5\n",
    )
    .unwrap();
    let out_path = scratch("find.csv");
    let out = run(&[
        "ep-find",
        "--config",
        cfg.to_str().unwrap(),
        "--set",
        "m=12",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty(), "file output suppresses stdout");
    let written = std::fs::read_to_string(&out_path).unwrap();
    // The --set override wins and is what the header records.
    assert!(written.contains("# m = 12"), "{written}");
    // Identical run to stdout produces identical bytes.
    let again = run(&[
        "ep-find",
        "--config",
        cfg.to_str().unwrap(),
        "--set",
        "m=12",
    ]);
    assert_eq!(stdout(&again), written);
}

#[test]
fn custom_profile_file_flow() {
    let profile = scratch("profile.txt");
    std::fs::write(&profile, "# site magnitudes\n0.1\n0.2\n0.3\n0.3\n0.2\n0.1\n0\n0\n").unwrap();
    // Mirror violation: 8 sites, gamma_1 != gamma_8.
    let bad = run(&[
        "spectrum-sweep",
        "--set",
        "m=8",
        "--set",
        "u=2",
        "--set",
        "profile=custom",
        "--set",
        &format!("profile_file={}", profile.display()),
        "--set",
        "gamma_min=0",
        "--set",
        "gamma_max=0.01",
        "--set",
        "gamma_steps=2",
    ]);
    assert_eq!(bad.status.code(), Some(2));

    std::fs::write(&profile, "0.1\n0.2\n0.3\n0.3\n0.3\n0.3\n0.2\n0.1\n").unwrap();
    let ok = run(&[
        "spectrum-sweep",
        "--set",
        "m=8",
        "--set",
        "u=2",
        "--set",
        "profile=custom",
        "--set",
        &format!("profile_file={}", profile.display()),
        "--set",
        "gamma_min=0",
        "--set",
        "gamma_max=0.01",
        "--set",
        "gamma_steps=2",
    ]);
    assert!(ok.status.success(), "{}", String::from_utf8(ok.stderr).unwrap());
    assert_eq!(
        stdout(&ok).lines().filter(|l| !l.starts_with('#')).count(),
        1 + 2 * 8
    );
}

#[test]
fn svg_flag_never_changes_csv() {
    let svg_path = scratch("plot.svg");
    let base = run(&["ansatz-profile", "--set", "m=8", "--set", "u=2"]);
    let with_svg = run(&[
        "ansatz-profile",
        "--set",
        "m=8",
        "--set",
        "u=2",
        "--svg",
        svg_path.to_str().unwrap(),
    ]);
    assert!(with_svg.status.success());
    assert_eq!(stdout(&base), stdout(&with_svg));
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
}

#[test]
fn bulk_phase_gap_closing_blanks_winding() {
    let out = run(&[
        "bulk-phase",
        "--set",
        "u_min=1",
        "--set",
        "u_max=1",
        "--set",
        "u_steps=1",
        "--set",
        "gamma_min=0.2",
        "--set",
        "gamma_max=0.2",
        "--set",
        "gamma_steps=1",
        "--set",
        "nk=1024",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let row = text.lines().filter(|l| !l.starts_with('#')).nth(1).unwrap();
    let cols: Vec<&str> = row.split(',').collect();
    assert_eq!(cols[3], "", "winding must be blank at the gap closing");
    let gap: f64 = cols[4].parse().unwrap();
    assert_eq!(gap, 0.0);
}

#[test]
fn csv_header_reproduces_the_file() {
    // The comment header carries the resolved config; feeding it back as a
    // config file regenerates the CSV byte for byte.
    let first = run(&[
        "ep-sweep",
        "--set",
        "m_list=8,10",
        "--set",
        "u_list=1.5",
        "--set",
        "profile=random",
        "--set",
        "seed=9",
        "--set",
        "tol=1e-4",
    ]);
    assert!(first.status.success());
    let text = stdout(&first);
    let header_cfg: String = text
        .lines()
        .filter(|l| l.starts_with("# ") && l.contains(" = "))
        .map(|l| format!("{}\n", &l[2..]))
        .collect();
    let cfg_path = scratch("from-header.cfg");
    std::fs::write(&cfg_path, header_cfg).unwrap();
    let second = run(&["ep-sweep", "--config", cfg_path.to_str().unwrap()]);
    assert!(second.status.success());
    assert_eq!(text, stdout(&second));
}

#[test]
fn seed_flag_changes_random_rows_reproducibly() {
    let args = |seed: &str| {
        vec![
            "ep-sweep".to_string(),
            "--set".into(),
            "m_list=8".into(),
            "--set".into(),
            "u_list=2".into(),
            "--set".into(),
            "profile=random".into(),
            "--set".into(),
            "tol=1e-4".into(),
            "--seed".into(),
            seed.to_string(),
        ]
    };
    let a1 = run(&args("5").iter().map(String::as_str).collect::<Vec<_>>());
    let a2 = run(&args("5").iter().map(String::as_str).collect::<Vec<_>>());
    let b = run(&args("6").iter().map(String::as_str).collect::<Vec<_>>());
    assert!(a1.status.success());
    assert_eq!(stdout(&a1), stdout(&a2));
    assert_ne!(stdout(&a1), stdout(&b));
    assert!(stdout(&a1).contains("# seed = 5"));
}
