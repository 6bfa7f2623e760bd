//! The six experiment commands, each mapping a resolved config to one CSV.

use ptssh::bulk::{band_gap, pt_phase, winding_number};
use ptssh::edge::{ansatz_states, coupling_c, effective_model, gamma_bar};
use ptssh::eig::eig_dense;
use ptssh::ep::{effective_edge_vectors, find_ep, identify_edge_pair, EpProblem, SweepGrid};
use ptssh::matrix::inner;
use ptssh::model::{build_hamiltonian, make_gain_profile, GainProfile, LatticeSpec, ProfileKind};

use crate::config::{ConfigError, ExperimentConfig};
use crate::output::{Cell, Csv, Series};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Core(#[from] ptssh::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

/// A finished command: the CSV, an optional plot, and the row-failure tally
/// that drives the exit code.
pub struct CommandResult {
    pub csv: Csv,
    pub svg_title: String,
    pub svg_series: Vec<Series>,
    pub failed_rows: usize,
    pub total_rows: usize,
}

impl CommandResult {
    fn new(csv: Csv, svg_title: impl Into<String>) -> Self {
        Self {
            csv,
            svg_title: svg_title.into(),
            svg_series: Vec::new(),
            failed_rows: 0,
            total_rows: 0,
        }
    }
}

pub fn run(command: &str, cfg: &ExperimentConfig) -> Result<CommandResult, CliError> {
    match command {
        "spectrum-sweep" => spectrum_sweep(cfg),
        "ep-find" => ep_find(cfg),
        "ep-sweep" => ep_sweep_cmd(cfg),
        "bulk-phase" => bulk_phase(cfg),
        "ansatz-profile" => ansatz_profile(cfg),
        "wavefunction-compare" => wavefunction_compare(cfg),
        other => Err(ConfigError::Invalid(format!("unknown command `{other}`")).into()),
    }
}

fn uniform_grid(min: f64, max: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![min],
        n => (0..n)
            .map(|j| min + (max - min) * j as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// Base profile shape for the custom kind, from `profile_file`.
fn custom_shape(cfg: &ExperimentConfig, m: usize) -> Result<Vec<f64>, CliError> {
    let path = cfg
        .profile_file
        .as_ref()
        .ok_or(ConfigError::MissingKey {
            key: "profile_file",
            command: cfg.command.clone().unwrap_or_default(),
        })?;
    let text = std::fs::read_to_string(path)?;
    let profile = GainProfile::<f64>::parse_custom(&text, m)?;
    Ok(profile.magnitudes().to_vec())
}

fn ep_problem(cfg: &ExperimentConfig) -> Result<EpProblem<f64>, CliError> {
    let m = cfg.require(cfg.m, "m")?;
    let (v, w) = cfg.hoppings()?;
    let kind = cfg.profile_kind();
    let custom = match kind {
        ProfileKind::Custom => Some(custom_shape(cfg, m)?),
        _ => None,
    };
    if kind == ProfileKind::Random && cfg.seed.is_none() {
        return Err(ConfigError::MissingKey {
            key: "seed",
            command: cfg.command.clone().unwrap_or_default(),
        }
        .into());
    }
    Ok(EpProblem {
        m,
        v,
        w,
        kind,
        seed: cfg.seed,
        custom_shape: custom,
    })
}

/// Swept amplitude -> effective contrast conversion factor: `gbar` of the
/// unit-amplitude profile (1 for the uniform kind).
fn gbar_per_unit(problem: &EpProblem<f64>) -> Result<f64, CliError> {
    if problem.kind == ProfileKind::Uniform {
        return Ok(1.0);
    }
    let unit = problem.spec_at(1.0)?;
    Ok(gamma_bar(unit.profile(), problem.ratio())?)
}

// ---------------------------------------------------------------------------
// spectrum-sweep: full eigenvalue set vs the swept gain/loss amplitude
// ---------------------------------------------------------------------------

fn spectrum_sweep(cfg: &ExperimentConfig) -> Result<CommandResult, CliError> {
    let m = cfg.require(cfg.m, "m")?;
    let (v, w) = cfg.hoppings()?;
    let grid = uniform_grid(
        cfg.require(cfg.gamma_min, "gamma_min")?,
        cfg.require(cfg.gamma_max, "gamma_max")?,
        cfg.require(cfg.gamma_steps, "gamma_steps")?,
    );
    let problem = ep_problem(cfg)?;

    let mut csv = Csv::new(
        "spectrum-sweep",
        cfg,
        vec!["gamma", "index", "re_E", "im_E", "edge_flag"],
    );
    // No edge pair to flag in the trivial phase (u <= 1) or when the
    // eigenvectors hybridize; rows then carry edge_flag = 0.
    let ansatz = ansatz_states(m, w / v).ok();
    let mut re_pts = Vec::new();
    let mut im_pts = Vec::new();
    for &g in &grid {
        let spec = problem.spec_at(g)?;
        let spectrum = eig_dense(&build_hamiltonian(&spec))?;
        let pair = ansatz
            .as_ref()
            .and_then(|a| identify_edge_pair(&spectrum, a).ok());
        for i in 0..spectrum.len() {
            let e = spectrum.eigenvalue(i);
            let flagged = pair
                .map(|p| p.indices.0 == i || p.indices.1 == i)
                .unwrap_or(false);
            csv.push(vec![
                Cell::Float(g),
                Cell::UInt(i as u64),
                Cell::Float(e.re),
                Cell::Float(e.im),
                Cell::UInt(u64::from(flagged)),
            ]);
            re_pts.push((g, e.re));
            im_pts.push((g, e.im));
        }
    }

    let mut result = CommandResult::new(csv, format!("spectrum vs gamma (M={m})"));
    result.svg_series = vec![
        Series {
            name: "Re E",
            points: re_pts,
        },
        Series {
            name: "Im E",
            points: im_pts,
        },
    ];
    result.total_rows = grid.len();
    Ok(result)
}

// ---------------------------------------------------------------------------
// ep-find: one exceptional point
// ---------------------------------------------------------------------------

const EP_COLUMNS: [&str; 10] = [
    "M",
    "u",
    "profile",
    "seed",
    "gamma_cr_numeric",
    "gamma_cr_analytic",
    "relative_error",
    "U_cr_numeric",
    "U_cr_analytic",
    "status",
];

fn ep_row(
    m: usize,
    u: f64,
    kind: ProfileKind,
    seed: Option<u64>,
    gbar_unit: f64,
    outcome: &Result<ptssh::ep::EpResult<f64>, ptssh::Error>,
) -> Vec<Cell> {
    let mut row = vec![
        Cell::UInt(m as u64),
        Cell::Float(u),
        Cell::Text(kind.to_string()),
        seed.map_or(Cell::Empty, Cell::UInt),
    ];
    match outcome {
        Ok(r) => {
            row.extend([
                Cell::Float(r.gamma_cr_numeric * gbar_unit),
                Cell::Float(r.gamma_cr_analytic * gbar_unit),
                Cell::Float(r.relative_error),
                Cell::Float(r.gamma_cr_numeric),
                Cell::Float(r.gamma_cr_analytic),
                Cell::Text("ok".into()),
            ]);
        }
        Err(e) => {
            row.extend([
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                Cell::Text(format!("error: {e}")),
            ]);
        }
    }
    row
}

fn ep_find(cfg: &ExperimentConfig) -> Result<CommandResult, CliError> {
    let problem = ep_problem(cfg)?;
    let bracket = match (cfg.bracket_lo, cfg.bracket_hi) {
        (Some(lo), Some(hi)) => Some((lo, hi)),
        (None, None) => None,
        _ => {
            return Err(ConfigError::Invalid(
                "bracket_lo and bracket_hi must be given together".into(),
            )
            .into())
        }
    };
    let result = find_ep(&problem, bracket, cfg.tolerance())?;
    let gbar_unit = gbar_per_unit(&problem)?;

    let mut columns = EP_COLUMNS.to_vec();
    columns.extend(["iterations", "bracket_width"]);
    let mut csv = Csv::new("ep-find", cfg, columns);
    let mut row = ep_row(
        problem.m,
        problem.ratio(),
        problem.kind,
        problem.seed,
        gbar_unit,
        &Ok(result),
    );
    row.push(Cell::UInt(result.bisection_iterations as u64));
    row.push(Cell::Float(result.bracket_width));
    csv.push(row);

    let mut out = CommandResult::new(csv, "exceptional point");
    out.total_rows = 1;
    out.svg_series = vec![
        Series {
            name: "numeric",
            points: vec![(problem.m as f64, result.gamma_cr_numeric)],
        },
        Series {
            name: "analytic",
            points: vec![(problem.m as f64, result.gamma_cr_analytic)],
        },
    ];
    Ok(out)
}

// ---------------------------------------------------------------------------
// ep-sweep: exceptional points over an (M, u) grid
// ---------------------------------------------------------------------------

fn ep_sweep_cmd(cfg: &ExperimentConfig) -> Result<CommandResult, CliError> {
    let m_list = cfg
        .m_list
        .clone()
        .ok_or(ConfigError::MissingKey {
            key: "m_list",
            command: cfg.command.clone().unwrap_or_default(),
        })?;
    let u_list = cfg
        .u_list
        .clone()
        .ok_or(ConfigError::MissingKey {
            key: "u_list",
            command: cfg.command.clone().unwrap_or_default(),
        })?;
    let kind = cfg.profile_kind();
    if kind == ProfileKind::Custom {
        return Err(ConfigError::Invalid(
            "ep-sweep supports the generated profile kinds, not custom".into(),
        )
        .into());
    }
    if kind == ProfileKind::Random && cfg.seed.is_none() {
        return Err(ConfigError::MissingKey {
            key: "seed",
            command: cfg.command.clone().unwrap_or_default(),
        }
        .into());
    }
    let w = cfg.w.unwrap_or(1.0);
    let grid = SweepGrid {
        m_list,
        u_list,
        w,
        kind,
        base_seed: cfg.seed,
        rel_tol: cfg.tolerance(),
    };
    let rows = ptssh::ep::ep_sweep(&grid);

    let mut csv = Csv::new("ep-sweep", cfg, EP_COLUMNS.to_vec());
    let mut failed = 0usize;
    let mut numeric_pts = Vec::new();
    let mut analytic_pts = Vec::new();
    for row in &rows {
        let gbar_unit = match kind {
            ProfileKind::Uniform => 1.0,
            _ => {
                let unit = make_gain_profile(kind, 1.0, row.m, row.seed)?;
                gamma_bar(&unit, row.u)?
            }
        };
        if let Ok(r) = &row.outcome {
            numeric_pts.push((row.m as f64, r.gamma_cr_numeric * gbar_unit));
            analytic_pts.push((row.m as f64, r.gamma_cr_analytic * gbar_unit));
        } else {
            failed += 1;
        }
        csv.push(ep_row(row.m, row.u, kind, row.seed, gbar_unit, &row.outcome));
    }

    let mut out = CommandResult::new(csv, format!("gamma_cr vs M ({kind})"));
    out.total_rows = rows.len();
    out.failed_rows = failed;
    out.svg_series = vec![
        Series {
            name: "numeric",
            points: numeric_pts,
        },
        Series {
            name: "analytic",
            points: analytic_pts,
        },
    ];
    Ok(out)
}

// ---------------------------------------------------------------------------
// bulk-phase: PT classification, winding and gap over a (u, gamma) grid
// ---------------------------------------------------------------------------

const GAP_FLOOR: f64 = 1e-9;

fn bulk_phase(cfg: &ExperimentConfig) -> Result<CommandResult, CliError> {
    let w = cfg.w.unwrap_or(1.0);
    let nk = cfg.nk.unwrap_or(4096);
    let u_grid = uniform_grid(
        cfg.require(cfg.u_min, "u_min")?,
        cfg.require(cfg.u_max, "u_max")?,
        cfg.require(cfg.u_steps, "u_steps")?,
    );
    let g_grid = uniform_grid(
        cfg.require(cfg.gamma_min, "gamma_min")?,
        cfg.require(cfg.gamma_max, "gamma_max")?,
        cfg.require(cfg.gamma_steps, "gamma_steps")?,
    );

    let mut csv = Csv::new("bulk-phase", cfg, vec!["u", "gamma", "phase", "winding", "gap"]);
    let mut phase_pts: [Vec<(f64, f64)>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for &u in &u_grid {
        let v = w / u;
        let gap = band_gap(v, w);
        let winding = if gap > GAP_FLOOR {
            Some(winding_number(v, w, nk)?.value)
        } else {
            None
        };
        for &g in &g_grid {
            let phase = pt_phase(v, w, g);
            let label = if phase.at_boundary {
                format!("{}(boundary)", phase.region.as_str())
            } else {
                phase.region.as_str().to_string()
            };
            phase_pts[phase.region as usize].push((u, g));
            csv.push(vec![
                Cell::Float(u),
                Cell::Float(g),
                Cell::Text(label),
                winding.map_or(Cell::Empty, |wn| Cell::Int(wn.into())),
                Cell::Float(gap),
            ]);
        }
    }

    let mut out = CommandResult::new(csv, "bulk PT phases");
    out.total_rows = u_grid.len() * g_grid.len();
    out.svg_series = vec![
        Series {
            name: "unbroken",
            points: phase_pts[0].clone(),
        },
        Series {
            name: "partially-broken",
            points: phase_pts[1].clone(),
        },
        Series {
            name: "fully-broken",
            points: phase_pts[2].clone(),
        },
    ];
    Ok(out)
}

// ---------------------------------------------------------------------------
// ansatz-profile: the closed-form edge wavefunctions
// ---------------------------------------------------------------------------

fn ansatz_profile(cfg: &ExperimentConfig) -> Result<CommandResult, CliError> {
    let m = cfg.require(cfg.m, "m")?;
    let (v, w) = cfg.hoppings()?;
    let u = w / v;
    let a = ansatz_states(m, u)?;
    let mut csv = Csv::new(
        "ansatz-profile",
        cfg,
        vec!["m", "c_L", "c_R", "abs_L", "abs_R"],
    );
    csv.comment(format!(
        "xi = {} ; c_L = {} ; coupling(w-units) = {}",
        crate::config::format_float(a.xi()),
        crate::config::format_float(a.normalization()),
        crate::config::format_float(coupling_c(m, u, v / w)?),
    ));
    let mut left = Vec::new();
    let mut right = Vec::new();
    for site in 1..=m {
        let (cl, cr) = (a.c_left()[site - 1], a.c_right()[site - 1]);
        csv.push(vec![
            Cell::UInt(site as u64),
            Cell::Float(cl),
            Cell::Float(cr),
            Cell::Float(cl.abs()),
            Cell::Float(cr.abs()),
        ]);
        left.push((site as f64, cl.abs()));
        right.push((site as f64, cr.abs()));
    }
    let mut out = CommandResult::new(csv, format!("edge ansatz (M={m}, u={u})"));
    out.total_rows = m;
    out.svg_series = vec![
        Series {
            name: "|L|",
            points: left,
        },
        Series {
            name: "|R|",
            points: right,
        },
    ];
    Ok(out)
}

// ---------------------------------------------------------------------------
// wavefunction-compare: exact edge eigenvector vs the two-state prediction
// ---------------------------------------------------------------------------

fn wavefunction_compare(cfg: &ExperimentConfig) -> Result<CommandResult, CliError> {
    let m = cfg.require(cfg.m, "m")?;
    let (v, w) = cfg.hoppings()?;
    let u = w / v;
    let gamma = cfg.require(cfg.gamma, "gamma")?;
    if cfg.profile_kind() != ProfileKind::Uniform {
        return Err(ConfigError::Invalid(
            "wavefunction-compare uses uniform gain/loss; set gamma directly".into(),
        )
        .into());
    }

    let coupling = coupling_c(m, u, v)?;
    let model = effective_model(gamma, coupling);
    if model.at_ep {
        return Err(ConfigError::Invalid(format!(
            "gamma = {gamma} sits at the edge-state exceptional point; offset it \
             (analytic gamma_cr = {})",
            coupling.abs()
        ))
        .into());
    }

    let ansatz = ansatz_states(m, u)?;
    let profile = make_gain_profile(ProfileKind::Uniform, gamma, m, None)?;
    let spec = LatticeSpec::new(m, v, w, profile)?;
    let spectrum = eig_dense(&build_hamiltonian(&spec))?;
    let pair = identify_edge_pair(&spectrum, &ansatz)?;
    let (pred_plus, _pred_minus) =
        effective_edge_vectors(&ansatz, gamma, coupling).expect("not at EP");

    // The exact counterpart of psi_plus is the edge eigenvector that
    // overlaps it most.
    let cand = [pair.indices.0, pair.indices.1];
    let overlaps: Vec<f64> = cand
        .iter()
        .map(|&i| inner(&pred_plus, spectrum.eigenvector(i)).norm())
        .collect();
    let pick = if overlaps[0] >= overlaps[1] { 0 } else { 1 };
    let exact = spectrum.eigenvector(cand[pick]);

    let mut csv = Csv::new(
        "wavefunction-compare",
        cfg,
        vec!["m", "abs_exact", "abs_effective", "abs_L", "abs_R"],
    );
    csv.comment(format!(
        "edge pair indices = {},{} ; overlap = {} ; E_exact = {} + {}i ; E_effective = {} + {}i",
        pair.indices.0,
        pair.indices.1,
        crate::config::format_float(overlaps[pick]),
        crate::config::format_float(spectrum.eigenvalue(cand[pick]).re),
        crate::config::format_float(spectrum.eigenvalue(cand[pick]).im),
        crate::config::format_float(model.e_plus.re),
        crate::config::format_float(model.e_plus.im),
    ));
    let mut series: [Vec<(f64, f64)>; 4] = Default::default();
    for site in 1..=m {
        let row = [
            exact[site - 1].norm(),
            pred_plus[site - 1].norm(),
            ansatz.c_left()[site - 1].abs(),
            ansatz.c_right()[site - 1].abs(),
        ];
        csv.push(vec![
            Cell::UInt(site as u64),
            Cell::Float(row[0]),
            Cell::Float(row[1]),
            Cell::Float(row[2]),
            Cell::Float(row[3]),
        ]);
        for (k, val) in row.iter().enumerate() {
            series[k].push((site as f64, *val));
        }
    }
    let mut out = CommandResult::new(csv, format!("edge state (M={m}, gamma={gamma})"));
    out.total_rows = m;
    let names = ["exact", "effective", "|L|", "|R|"];
    out.svg_series = series
        .into_iter()
        .zip(names)
        .map(|(points, name)| Series { name, points })
        .collect();
    Ok(out)
}
