//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! with its measured numbers (run with `--nocapture` to see them).
//!
//! Criteria 1 and 2 pin the agreement between the bisected exceptional
//! points of the full chain and the closed-form predictions at 2% / 5%
//! across their whole grids. The short-chain end of those grids genuinely
//! exceeds the stated tolerances (the two-state description degrades as the
//! ansatz residual approaches the coupling), so those assertions fail today;
//! the printed tables carry the measured deviations.

use std::process::Command;

use ptssh::bulk::winding_number;
use ptssh::edge::{ansatz_states, coupling_c, gamma_bar, gamma_cr_analytic};
use ptssh::eig::{eig_dense, spectrum_symmetry_residuals, SymmetryMode};
use ptssh::ep::{effective_edge_vectors, find_ep, identify_edge_pair, ep_sweep, EpProblem, SweepGrid};
use ptssh::matrix::inner;
use ptssh::model::{
    build_hamiltonian, make_gain_profile, symmetry_residuals, LatticeSpec, ProfileKind,
};
use ptssh::rng::SplitMix64;

fn report(name: &str, failures: &[String], detail: &str) {
    if failures.is_empty() {
        println!("{name}: PASS ({detail})");
    } else {
        println!("{name}: FAIL ({detail})");
        for f in failures {
            println!("  - {f}");
        }
        panic!("{name} failed: {}", failures.join(" | "));
    }
}

fn m_grid() -> Vec<usize> {
    (4..=15).map(|c| 2 * c).collect() // 8, 10, ..., 30
}

fn sweep_errors(kind: ProfileKind, u: f64, base_seed: Option<u64>) -> Vec<(usize, f64, String)> {
    let grid = SweepGrid {
        m_list: m_grid(),
        u_list: vec![u],
        w: 1.0,
        kind,
        base_seed,
        rel_tol: 1e-6,
    };
    ep_sweep(&grid)
        .into_iter()
        .map(|row| match row.outcome {
            Ok(r) => (row.m, r.relative_error, String::new()),
            Err(e) => (row.m, f64::NAN, format!("{e}")),
        })
        .collect()
}

#[test]
fn criterion_1_uniform_gamma_cr_agreement() {
    let mut failures = Vec::new();
    let mut max_err: f64 = 0.0;
    for &u in &[1.5, 2.0] {
        for (m, err, diag) in sweep_errors(ProfileKind::Uniform, u, None) {
            if !diag.is_empty() {
                failures.push(format!("u={u} M={m}: {diag}"));
                continue;
            }
            max_err = max_err.max(err);
            if err > 0.02 {
                failures.push(format!("u={u} M={m}: relative error {err:.4} > 0.02"));
            }
        }
    }
    let u12 = sweep_errors(ProfileKind::Uniform, 1.2, None);
    for (m, err, diag) in &u12 {
        if !diag.is_empty() {
            failures.push(format!("u=1.2 M={m}: {diag}"));
        } else if *err > 0.2 {
            failures.push(format!("u=1.2 M={m}: relative error {err:.4} > 0.2"));
        }
    }
    for pair in u12.windows(2) {
        if pair[0].0 >= 14 && pair[1].1 >= pair[0].1 {
            failures.push(format!(
                "u=1.2: error not decreasing from M={} ({:.4}) to M={} ({:.4})",
                pair[0].0, pair[0].1, pair[1].0, pair[1].1
            ));
        }
    }
    report(
        "criterion 1",
        &failures,
        &format!("max relative error over u in {{1.5, 2.0}}: {max_err:.4}, tolerance 0.02"),
    );
}

#[test]
fn criterion_2_profile_families_gamma_bar_cr() {
    let mut failures = Vec::new();
    // (error, family label, u, M) for the ordering claim.
    let mut worst: (f64, String, f64, usize) = (0.0, String::new(), 0.0, 0);
    let mut observe = |label: &str, u: f64, rows: &[(usize, f64, String)], failures: &mut Vec<String>| {
        for (m, err, diag) in rows {
            if !diag.is_empty() {
                failures.push(format!("{label} u={u} M={m}: {diag}"));
                continue;
            }
            if *err > worst.0 {
                worst = (*err, label.to_string(), u, *m);
            }
            if *err > 0.05 {
                failures.push(format!(
                    "{label} u={u} M={m}: relative error {err:.4} > 0.05"
                ));
            }
        }
    };
    for &u in &[1.5, 2.0] {
        let a = sweep_errors(ProfileKind::LinearDecreasing, u, None);
        observe("linear-decreasing", u, &a, &mut failures);
        let b = sweep_errors(ProfileKind::LinearIncreasing, u, None);
        observe("linear-increasing", u, &b, &mut failures);
        for base_seed in [1u64, 2, 3] {
            let c = sweep_errors(ProfileKind::Random, u, Some(base_seed));
            observe(&format!("random(seed {base_seed})"), u, &c, &mut failures);
        }
    }
    if !(worst.1 == "linear-increasing" && worst.2 == 1.5 && worst.3 == 8) {
        failures.push(format!(
            "largest error {:.4} observed for {} at (u={}, M={}), expected \
             linear-increasing at (u=1.5, M=8)",
            worst.0, worst.1, worst.2, worst.3
        ));
    }
    report(
        "criterion 2",
        &failures,
        &format!(
            "largest error {:.4} for {} at (u={}, M={}), tolerance 0.05",
            worst.0, worst.1, worst.2, worst.3
        ),
    );
}

#[test]
fn criterion_3_specific_gamma_cr_value() {
    let mut failures = Vec::new();
    let analytic = gamma_cr_analytic(12usize, 1.5f64, 1.0 / 1.5).unwrap();
    if (analytic - 0.04915).abs() > 0.0005 {
        failures.push(format!("closed form {analytic:.6} outside 0.04915 +/- 0.0005"));
    }
    let problem = EpProblem::uniform(12usize, 1.0 / 1.5, 1.0f64);
    let ep = find_ep(&problem, None, 1e-8).unwrap();
    if ep.relative_error > 0.02 {
        failures.push(format!(
            "numeric {:.6} deviates from closed form {analytic:.6} by {:.4} > 0.02",
            ep.gamma_cr_numeric, ep.relative_error
        ));
    }
    report(
        "criterion 3",
        &failures,
        &format!(
            "closed form {analytic:.6}, numeric {:.6}, deviation {:.4}",
            ep.gamma_cr_numeric, ep.relative_error
        ),
    );
}

#[test]
fn criterion_4_exponential_coupling_law() {
    let mut failures = Vec::new();
    let grid = SweepGrid::<f64> {
        m_list: m_grid(),
        u_list: vec![2.0],
        w: 1.0,
        kind: ProfileKind::Uniform,
        base_seed: None,
        rel_tol: 1e-8,
    };
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for row in ep_sweep(&grid) {
        match row.outcome {
            Ok(r) => {
                xs.push(row.m as f64);
                ys.push(r.gamma_cr_numeric.ln());
            }
            Err(e) => failures.push(format!("M={}: {e}", row.m)),
        }
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let slope_target = -0.5 * 2f64.ln();
    let intercept_target = 0.75f64.ln(); // (w^2 - v^2)/w at u = 2, w = 1
    if (slope - slope_target).abs() > 0.02 * slope_target.abs() {
        failures.push(format!(
            "slope {slope:.6} outside {slope_target:.6} +/- 2%"
        ));
    }
    if (intercept - intercept_target).abs() > 0.05 * intercept_target.abs() {
        failures.push(format!(
            "intercept {intercept:.6} outside {intercept_target:.6} +/- 5%"
        ));
    }
    report(
        "criterion 4",
        &failures,
        &format!(
            "slope {slope:.6} (target {slope_target:.6}), intercept {intercept:.6} \
             (target {intercept_target:.6})"
        ),
    );
}

#[test]
fn criterion_5_randomized_symmetry_suite() {
    let mut failures = Vec::new();
    let mut rng = SplitMix64::new(0x5542_2026);
    let kinds = [
        ProfileKind::Uniform,
        ProfileKind::LinearDecreasing,
        ProfileKind::LinearIncreasing,
        ProfileKind::Random,
    ];
    let mut worst_build: f64 = 0.0;
    let mut worst_spec: f64 = 0.0;
    for case in 0..200 {
        let m = 2 * (2 + (rng.next_u64() % 19) as usize); // 4..=40
        let u = 1.0 + 2.0 * rng.next_unit::<f64>().max(1e-3); // (1, 3]
        let w = 1.0;
        let v = w / u;
        let kind = kinds[(rng.next_u64() % 4) as usize];
        let amplitude = 0.95 * rng.next_unit::<f64>() * (v - w).abs();
        let seed = (kind == ProfileKind::Random).then(|| rng.next_u64());
        let profile = make_gain_profile(kind, amplitude, m, seed).unwrap();
        let spec = LatticeSpec::new(m, v, w, profile).unwrap();
        let h = build_hamiltonian(&spec);
        let r = symmetry_residuals(&h).unwrap();
        worst_build = worst_build.max(r.pt_commutator).max(r.pseudo_anti_hermitian);
        if r.pt_commutator > 1e-13 || r.pseudo_anti_hermitian > 1e-13 {
            failures.push(format!(
                "case {case} (M={m}, u={u:.3}, {kind}): construction residuals \
                 {:.2e}/{:.2e} > 1e-13",
                r.pt_commutator, r.pseudo_anti_hermitian
            ));
        }
        let s = eig_dense(&h).unwrap();
        let pt = spectrum_symmetry_residuals(&s, SymmetryMode::Pt);
        // The indexed +/-E pairing is a statement about real spectra, so it
        // is checked on the Hermitian counterpart of each chain.
        let h0 = build_hamiltonian(&LatticeSpec::hermitian(m, v, w).unwrap());
        let herm = spectrum_symmetry_residuals(&eig_dense(&h0).unwrap(), SymmetryMode::Hermitian);
        worst_spec = worst_spec.max(pt).max(herm);
        if pt > 1e-10 || herm > 1e-10 {
            failures.push(format!(
                "case {case} (M={m}, u={u:.3}, {kind}): spectrum residuals \
                 pt={pt:.2e} herm={herm:.2e} > 1e-10"
            ));
        }
    }
    report(
        "criterion 5",
        &failures,
        &format!(
            "200 chains: worst construction residual {worst_build:.2e} (tol 1e-13), \
             worst spectrum residual {worst_spec:.2e} (tol 1e-10)"
        ),
    );
}

#[test]
fn criterion_6_winding_number_samples() {
    let mut failures = Vec::new();
    let mut worst_residual: f64 = 0.0;
    for i in 1..=20 {
        let u = 1.05 + (10.0 - 1.05) * i as f64 / 20.0;
        match winding_number(1.0, u, 4096) {
            Ok(wn) => {
                worst_residual = worst_residual.max(wn.quadrature_residual);
                if wn.value != 1 || wn.quadrature_residual >= 1e-6 {
                    failures.push(format!(
                        "u={u:.3}: W={} residual {:.2e}",
                        wn.value, wn.quadrature_residual
                    ));
                }
            }
            Err(e) => failures.push(format!("u={u:.3}: {e}")),
        }
        let u_trivial = 0.1 + (0.95 - 0.1) * i as f64 / 21.0;
        match winding_number(1.0, u_trivial, 4096) {
            Ok(wn) => {
                worst_residual = worst_residual.max(wn.quadrature_residual);
                if wn.value != 0 || wn.quadrature_residual >= 1e-6 {
                    failures.push(format!(
                        "u={u_trivial:.3}: W={} residual {:.2e}",
                        wn.value, wn.quadrature_residual
                    ));
                }
            }
            Err(e) => failures.push(format!("u={u_trivial:.3}: {e}")),
        }
    }
    report(
        "criterion 6",
        &failures,
        &format!("40 ratios at Nk=4096, worst quadrature residual {worst_residual:.2e}"),
    );
}

#[test]
fn criterion_7_effective_model_exactness() {
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for &u in &[1.2f64, 1.5, 2.0, 5.0] {
        for &m in &[8usize, 12, 20, 60, 120, 200] {
            let v = 1.0 / u;
            let a = ansatz_states(m, u).unwrap();
            let l: Vec<ptssh::C64> = a.c_left().iter().map(|&x| ptssh::C64::new(x, 0.0)).collect();
            let r: Vec<ptssh::C64> = a.c_right().iter().map(|&x| ptssh::C64::new(x, 0.0)).collect();

            // <L|H|R> against the closed form, Hermitian chain.
            let spec = LatticeSpec::hermitian(m, v, 1.0).unwrap();
            let h = build_hamiltonian(&spec);
            let lhr = inner(&l, &h.mul_vec(&r));
            let closed = coupling_c(m, u, v).unwrap();
            let d1 = (lhr - ptssh::C64::new(closed, 0.0)).norm();

            // <L|H_PT|L> = i gamma for the uniform chain.
            let gamma = 0.3 * (v - 1.0f64).abs();
            let profile = make_gain_profile(ProfileKind::Uniform, gamma, m, None).unwrap();
            let hpt = build_hamiltonian(&LatticeSpec::new(m, v, 1.0, profile).unwrap());
            let lhl = inner(&l, &hpt.mul_vec(&l));
            let d2 = (lhl - ptssh::C64::new(0.0, gamma)).norm();

            // gbar: closed form vs the direct weighted sum, per family.
            let mut d3: f64 = 0.0;
            for kind in [
                ProfileKind::LinearDecreasing,
                ProfileKind::LinearIncreasing,
                ProfileKind::Random,
            ] {
                let seed = (kind == ProfileKind::Random).then_some(11u64);
                let p = make_gain_profile(kind, 0.7, m, seed).unwrap();
                let direct: f64 = (0..m)
                    .map(|i| {
                        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                        sign * p.magnitudes()[i] * a.c_left()[i] * a.c_left()[i]
                    })
                    .sum();
                d3 = d3.max((gamma_bar(&p, u).unwrap() - direct).abs());
            }

            worst = worst.max(d1).max(d2).max(d3);
            if d1 > 1e-13 || d2 > 1e-13 || d3 > 1e-13 {
                failures.push(format!(
                    "M={m} u={u}: deviations coupling={d1:.2e} diagonal={d2:.2e} \
                     gbar={d3:.2e} > 1e-13"
                ));
            }
        }
    }
    report(
        "criterion 7",
        &failures,
        &format!("worst matrix-element deviation {worst:.2e} over M <= 200, tol 1e-13"),
    );
}

#[test]
fn criterion_8_wavefunction_reproduction() {
    let mut failures = Vec::new();
    // Odd-site ansatz amplitudes at M = 8, u = 2 to three decimals.
    let a8 = ansatz_states(8usize, 2.0f64).unwrap();
    for (site, want) in [(1usize, 0.868), (3, 0.434), (5, 0.217), (7, 0.108)] {
        let got = a8.c_left()[site - 1].abs();
        if (got - want).abs() >= 5e-4 {
            failures.push(format!("ansatz site {site}: {got:.5} vs {want:.3}"));
        }
    }
    // Exact vs effective eigenvectors at half and twice the critical
    // contrast, M = 12, u = 1.5.
    let (m, u) = (12usize, 1.5f64);
    let v = 1.0 / u;
    let gcr = gamma_cr_analytic(m, u, v).unwrap();
    let ansatz = ansatz_states(m, u).unwrap();
    let coupling = coupling_c(m, u, v).unwrap();
    let mut min_overlap: f64 = 1.0;
    for factor in [0.5, 2.0] {
        let gamma = factor * gcr;
        let profile = make_gain_profile(ProfileKind::Uniform, gamma, m, None).unwrap();
        let spec = LatticeSpec::new(m, v, 1.0, profile).unwrap();
        let spectrum = eig_dense(&build_hamiltonian(&spec)).unwrap();
        let pair = identify_edge_pair(&spectrum, &ansatz).unwrap();
        let (pred_plus, pred_minus) = effective_edge_vectors(&ansatz, gamma, coupling).unwrap();
        for pred in [&pred_plus, &pred_minus] {
            let best = [pair.indices.0, pair.indices.1]
                .iter()
                .map(|&i| inner(pred, spectrum.eigenvector(i)).norm())
                .fold(0.0f64, f64::max);
            min_overlap = min_overlap.min(best);
            if best < 0.99 {
                failures.push(format!(
                    "gamma = {factor} gamma_cr: exact/effective overlap {best:.4} < 0.99"
                ));
            }
        }
    }
    report(
        "criterion 8",
        &failures,
        &format!("ansatz profile to 3 decimals; minimum eigenvector overlap {min_overlap:.4}"),
    );
}

#[test]
fn criterion_9_cli_determinism() {
    let mut failures = Vec::new();
    let bin = env!("CARGO_BIN_EXE_ptssh");
    let run = |args: &[&str]| -> (Vec<u8>, bool) {
        let out = Command::new(bin).args(args).output().expect("spawn ptssh");
        (out.stdout, out.status.success())
    };
    let cases: Vec<(&str, Vec<String>)> = vec![
        (
            "spectrum-sweep",
            ["m=12", "u=1.5", "gamma_min=0", "gamma_max=0.1", "gamma_steps=11"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
        ),
        (
            "ep-find",
            ["m=10", "u=2", "tol=1e-6"].iter().map(|s| s.to_string()).collect(),
        ),
        (
            "ep-sweep",
            ["m_list=8,10", "u_list=1.5,2", "profile=random", "seed=3", "tol=1e-5"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
        ),
        (
            "bulk-phase",
            [
                "u_min=0.5",
                "u_max=2.5",
                "u_steps=5",
                "gamma_min=0",
                "gamma_max=2",
                "gamma_steps=5",
                "nk=1024",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        ),
        (
            "ansatz-profile",
            ["m=8", "u=2"].iter().map(|s| s.to_string()).collect(),
        ),
        (
            "wavefunction-compare",
            ["m=12", "u=1.5", "gamma=0.02"].iter().map(|s| s.to_string()).collect(),
        ),
    ];
    for (cmd, sets) in &cases {
        let mut args: Vec<String> = vec![cmd.to_string()];
        for s in sets {
            args.push("--set".into());
            args.push(s.clone());
        }
        let argrefs: Vec<&str> = args.iter().map(String::as_str).collect();
        let (first, ok1) = run(&argrefs);
        let (second, ok2) = run(&argrefs);
        if !(ok1 && ok2) {
            failures.push(format!("{cmd}: nonzero exit"));
            continue;
        }
        if first != second {
            failures.push(format!("{cmd}: re-run differs"));
        }
        // Thread-count variations must not change a single byte.
        for threads in ["1", "4"] {
            let mut targs = argrefs.clone();
            targs.push("--threads");
            targs.push(threads);
            let (third, ok3) = run(&targs);
            if !ok3 || third != first {
                failures.push(format!("{cmd}: --threads {threads} changed the output"));
            }
        }
    }
    report(
        "criterion 9",
        &failures,
        "6 commands x {re-run, --threads 1, --threads 4} all bitwise identical",
    );
}
