//! Numerical location of the edge-state exceptional point.
//!
//! Below the critical gain-loss contrast the two edge-dominated eigenvalues
//! of the full chain are real; above it they are purely imaginary. The search
//! bisects on that boolean indicator — "does the identified edge pair carry
//! imaginary parts above `1e-8 w`?" — which switches cleanly at the
//! eigenvalue collision, where a distance-based criterion would be noisy on a
//! defective matrix.

use num_complex::Complex;
use rayon::prelude::*;

use crate::edge::{ansatz_states, amplitude_cr_analytic, gamma_cr_analytic, EdgeAnsatz};
use crate::eig::{eig_dense, Spectrum};
use crate::model::{build_hamiltonian, make_gain_profile, GainProfile, LatticeSpec, ProfileKind};
use crate::{Error, Float, Result};

/// Minimum edge-subspace projection for an eigenvector to count as an edge
/// state.
pub const EDGE_PROJECTION_THRESHOLD: f64 = 0.8;

/// Imaginary-part threshold of the PT-breaking indicator, in units of `w`.
pub const IM_INDICATOR_SCALE: f64 = 1e-8;

/// Default relative bisection tolerance.
pub const DEFAULT_REL_TOL: f64 = 1e-6;

const MAX_BISECTIONS: usize = 300;
const LOWER_EXPANSION: f64 = 0.1;
const UPPER_EXPANSION: f64 = 1.5;
const UPPER_CAP_IN_W: f64 = 100.0;

/// The two eigenpairs identified as the edge states.
#[derive(Debug, Clone, Copy)]
pub struct EdgePair<T> {
    /// Indices into the spectrum, ascending.
    pub indices: (usize, usize),
    /// Edge-subspace projection norms of the two eigenvectors.
    pub projections: (T, T),
}

/// Pick the two eigenvectors with the largest projection onto
/// span{|L>, |R>}; both must exceed [`EDGE_PROJECTION_THRESHOLD`].
pub fn identify_edge_pair<T: Float>(
    spectrum: &Spectrum<T>,
    ansatz: &EdgeAnsatz<T>,
) -> Result<EdgePair<T>> {
    let mut scored: Vec<(T, usize)> = (0..spectrum.len())
        .map(|i| (ansatz.projection_norm(spectrum.eigenvector(i)), i))
        .collect();
    scored.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
    let threshold = T::from_f64(EDGE_PROJECTION_THRESHOLD).unwrap();
    let best = scored.first().copied().unwrap_or((T::zero(), 0));
    let second = scored.get(1).copied().unwrap_or((T::zero(), 0));
    let found = scored.iter().take_while(|(p, _)| *p >= threshold).count().min(2);
    if found < 2 {
        return Err(Error::EdgeHybridized {
            found,
            threshold: EDGE_PROJECTION_THRESHOLD,
            best: (
                best.0.to_f64().unwrap_or(f64::NAN),
                second.0.to_f64().unwrap_or(f64::NAN),
            ),
        });
    }
    let (i, j) = (best.1.min(second.1), best.1.max(second.1));
    Ok(EdgePair {
        indices: (i, j),
        projections: (best.0, second.0),
    })
}

/// A one-parameter family of chains swept through the exceptional point: the
/// profile of the given kind scaled to amplitude `lambda` (for the uniform
/// kind `lambda` is the gain-loss contrast itself).
#[derive(Debug, Clone)]
pub struct EpProblem<T> {
    pub m: usize,
    pub v: T,
    pub w: T,
    pub kind: ProfileKind,
    /// Required for the random family; part of the experiment identity.
    pub seed: Option<u64>,
    /// Base magnitudes for the custom kind, rescaled linearly by `lambda`.
    pub custom_shape: Option<Vec<T>>,
}

impl<T: Float> EpProblem<T> {
    pub fn uniform(m: usize, v: T, w: T) -> Self {
        Self {
            m,
            v,
            w,
            kind: ProfileKind::Uniform,
            seed: None,
            custom_shape: None,
        }
    }

    /// Hopping ratio `u = w/v`.
    pub fn ratio(&self) -> T {
        self.w / self.v
    }

    fn profile_at(&self, lambda: T) -> Result<GainProfile<T>> {
        match self.kind {
            ProfileKind::Custom => {
                let shape = self
                    .custom_shape
                    .as_ref()
                    .ok_or_else(|| Error::UnknownProfileKind("custom shape missing".into()))?;
                GainProfile::custom(shape.clone())?.with_amplitude(lambda)
            }
            kind => make_gain_profile(kind, lambda, self.m, self.seed),
        }
    }

    pub fn spec_at(&self, lambda: T) -> Result<LatticeSpec<T>> {
        LatticeSpec::new(self.m, self.v, self.w, self.profile_at(lambda)?)
    }

    /// Closed-form prediction for the swept parameter at the exceptional
    /// point: the critical contrast for the uniform kind, the critical
    /// amplitude otherwise.
    pub fn analytic_prediction(&self) -> Result<T> {
        match self.kind {
            ProfileKind::Uniform => gamma_cr_analytic(self.m, self.ratio(), self.v),
            _ => {
                let unit = self.profile_at(T::one())?;
                amplitude_cr_analytic(&unit, self.ratio(), self.v)
            }
        }
    }
}

/// Numerically located exceptional point with its analytic counterpart.
///
/// `gamma_cr_numeric`/`gamma_cr_analytic` carry the swept parameter: the
/// contrast `gamma` for uniform gain/loss, the amplitude `U` for the profile
/// families.
#[derive(Debug, Clone, Copy)]
pub struct EpResult<T> {
    pub gamma_cr_numeric: T,
    pub gamma_cr_analytic: T,
    /// `|numeric - analytic| / analytic`.
    pub relative_error: T,
    pub bisection_iterations: u32,
    /// Final bracket width (at most `tol * midpoint`).
    pub bracket_width: T,
}

struct Indicator<'a, T> {
    problem: &'a EpProblem<T>,
    ansatz: EdgeAnsatz<T>,
    im_threshold: T,
}

impl<'a, T: Float> Indicator<'a, T> {
    fn new(problem: &'a EpProblem<T>) -> Result<Self> {
        let ansatz = ansatz_states(problem.m, problem.ratio())?;
        Ok(Self {
            problem,
            ansatz,
            im_threshold: T::from_f64(IM_INDICATOR_SCALE).unwrap() * problem.w,
        })
    }

    /// `true` once the edge pair has acquired imaginary parts.
    fn broken(&self, lambda: T) -> Result<bool> {
        let spec = self.problem.spec_at(lambda)?;
        let spectrum = eig_dense(&build_hamiltonian(&spec))?;
        let pair = identify_edge_pair(&spectrum, &self.ansatz)?;
        let im = spectrum
            .eigenvalue(pair.indices.0)
            .im
            .abs()
            .max(spectrum.eigenvalue(pair.indices.1).im.abs());
        Ok(im > self.im_threshold)
    }
}

/// Locate the exceptional point of `problem` by bisection.
///
/// With `bracket = None` the search starts from `[1e-6 w, 0.9 |v - w|]` and
/// expands geometrically on whichever end fails to bracket the transition
/// (profile families routinely have critical amplitudes beyond the bulk-gap
/// scale). An explicit `bracket` is used as given and must straddle the
/// transition. `rel_tol` bounds the final bracket width relative to its
/// midpoint.
pub fn find_ep<T: Float>(
    problem: &EpProblem<T>,
    bracket: Option<(T, T)>,
    rel_tol: T,
) -> Result<EpResult<T>> {
    let indicator = Indicator::new(problem)?;
    let analytic = problem.analytic_prediction()?;

    let (mut lo, mut hi, expansions_allowed) = match bracket {
        Some((lo, hi)) => (lo, hi, false),
        None => (
            T::from_f64(1e-6).unwrap() * problem.w,
            T::from_f64(0.9).unwrap() * (problem.v - problem.w).abs(),
            true,
        ),
    };

    let mut iterations = 0u32;
    let mut lo_state = indicator.broken(lo)?;
    let mut hi_state = indicator.broken(hi)?;
    if expansions_allowed {
        let floor = T::from_f64(1e-14).unwrap() * problem.w;
        while lo_state && lo > floor {
            lo = lo * T::from_f64(LOWER_EXPANSION).unwrap();
            lo_state = indicator.broken(lo)?;
            iterations += 1;
        }
        let cap = T::from_f64(UPPER_CAP_IN_W).unwrap() * problem.w;
        while !hi_state && hi < cap {
            hi = hi * T::from_f64(UPPER_EXPANSION).unwrap();
            hi_state = indicator.broken(hi)?;
            iterations += 1;
        }
    }
    if lo_state || !hi_state {
        return Err(Error::Bracketing {
            lo: lo.to_f64().unwrap_or(f64::NAN),
            hi: hi.to_f64().unwrap_or(f64::NAN),
            state: if lo_state { "broken" } else { "unbroken" },
        });
    }

    let half = T::from_f64(0.5).unwrap();
    loop {
        let mid = half * (lo + hi);
        if hi - lo <= rel_tol * mid || iterations as usize >= MAX_BISECTIONS {
            let numeric = mid;
            return Ok(EpResult {
                gamma_cr_numeric: numeric,
                gamma_cr_analytic: analytic,
                relative_error: (numeric - analytic).abs() / analytic,
                bisection_iterations: iterations,
                bracket_width: hi - lo,
            });
        }
        if indicator.broken(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
    }
}

/// Sweep grid for [`ep_sweep`]: the cartesian product `m_list x u_list` in
/// row-major `(M, u)` order, all in fixed `w` units.
#[derive(Debug, Clone)]
pub struct SweepGrid<T> {
    pub m_list: Vec<usize>,
    pub u_list: Vec<T>,
    pub w: T,
    pub kind: ProfileKind,
    /// Base seed for the random family; row `i` draws from
    /// `base_seed + i` so rows stay independent yet reproducible.
    pub base_seed: Option<u64>,
    pub rel_tol: T,
}

/// One row of an exceptional-point sweep; failures are recorded, not fatal.
#[derive(Debug, Clone)]
pub struct SweepRow<T> {
    pub m: usize,
    pub u: T,
    pub seed: Option<u64>,
    pub outcome: Result<EpResult<T>>,
}

/// Run the sweep. Rows are independent and evaluated in parallel; the output
/// order is the deterministic grid order regardless of scheduling.
pub fn ep_sweep<T: Float>(grid: &SweepGrid<T>) -> Vec<SweepRow<T>> {
    let rows: Vec<(usize, usize, T)> = grid
        .m_list
        .iter()
        .flat_map(|&m| grid.u_list.iter().map(move |&u| (m, u)))
        .enumerate()
        .map(|(i, (m, u))| (i, m, u))
        .collect();
    rows.into_par_iter()
        .map(|(index, m, u)| {
            let seed = match grid.kind {
                ProfileKind::Random => {
                    Some(grid.base_seed.unwrap_or(0).wrapping_add(index as u64))
                }
                _ => None,
            };
            let problem = EpProblem {
                m,
                v: grid.w / u,
                w: grid.w,
                kind: grid.kind,
                seed,
                custom_shape: None,
            };
            let outcome = find_ep(&problem, None, grid.rel_tol);
            SweepRow {
                m,
                u,
                seed,
                outcome,
            }
        })
        .collect()
}

/// Effective-model prediction for the full-chain edge eigenvectors at
/// contrast `gbar`, in site space: `psi = alpha |L> + beta |R>`, renormalized.
/// Returns the pair for `E_plus` and `E_minus`, or `None` at the EP.
pub fn effective_edge_vectors<T: Float>(
    ansatz: &EdgeAnsatz<T>,
    gbar: T,
    coupling: T,
) -> Option<(Vec<Complex<T>>, Vec<Complex<T>>)> {
    let model = crate::edge::effective_model(gbar, coupling);
    let plus = model.psi_plus()?;
    let minus = model.psi_minus()?;
    let blend = |coef: [Complex<T>; 2]| {
        let mut x: Vec<Complex<T>> = (0..ansatz.sites())
            .map(|i| {
                coef[0] * ansatz.c_left()[i] + coef[1] * ansatz.c_right()[i]
            })
            .collect();
        let n = crate::matrix::vec_norm(&x);
        if n > T::zero() {
            let inv = Complex::new(T::one() / n, T::zero());
            for z in x.iter_mut() {
                *z = *z * inv;
            }
        }
        x
    };
    Some((blend(plus), blend(minus)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identifies_midgap_pair_at_zero_contrast() {
        let problem = EpProblem::uniform(12usize, 2.0 / 3.0, 1.0f64);
        let spec = problem.spec_at(0.0).unwrap();
        let spectrum = eig_dense(&build_hamiltonian(&spec)).unwrap();
        let ansatz = ansatz_states(12, 1.5).unwrap();
        let pair = identify_edge_pair(&spectrum, &ansatz).unwrap();
        assert!(pair.projections.0 > 0.99 && pair.projections.1 > 0.99);
        // The selected eigenvalues are the mid-gap pair near +/- |C|.
        let c = gamma_cr_analytic(12usize, 1.5f64, 2.0 / 3.0).unwrap();
        for idx in [pair.indices.0, pair.indices.1] {
            let e = spectrum.eigenvalue(idx);
            assert!(e.norm() < 2.0 * c + 0.02, "eigenvalue {e} not mid-gap");
        }
    }

    #[test]
    fn hybridized_edges_are_rejected() {
        // Center-peaked potential far beyond the bulk gap on a short, weakly
        // dimerized chain: the mid-gap states mix with the bulk and no
        // eigenvector projects 0.8 onto the ansatz span.
        let u = 1.2f64;
        let profile =
            make_gain_profile(ProfileKind::LinearIncreasing, 1.5, 8, None).unwrap();
        let spec = LatticeSpec::new(8usize, 1.0 / u, 1.0, profile).unwrap();
        let spectrum = eig_dense(&build_hamiltonian(&spec)).unwrap();
        let ansatz = ansatz_states(8, u).unwrap();
        match identify_edge_pair(&spectrum, &ansatz) {
            Err(Error::EdgeHybridized { .. }) => {}
            other => panic!("expected hybridization error, got {other:?}"),
        }
    }

    #[test]
    fn locates_uniform_ep_within_two_percent() {
        let problem = EpProblem::uniform(12usize, 2.0 / 3.0, 1.0f64);
        let r = find_ep(&problem, None, 1e-8).unwrap();
        // Independent scan with an external solver puts the transition at
        // 0.0499307; the closed form gives 0.0491519.
        assert!((r.gamma_cr_numeric - 0.0499307).abs() < 1e-4);
        assert!(r.relative_error <= 0.02, "rel err {}", r.relative_error);
        assert!(r.bracket_width <= 1e-8 * r.gamma_cr_numeric * 1.01);
        assert!(r.gamma_cr_numeric > 0.0);
    }

    #[test]
    fn explicit_bracket_must_straddle() {
        let problem = EpProblem::uniform(12usize, 2.0 / 3.0, 1.0f64);
        let r = find_ep(&problem, Some((0.2, 0.3)), 1e-6);
        assert!(matches!(r, Err(Error::Bracketing { .. })));
        // A valid user bracket converges to the same point as the default.
        let tight = find_ep(&problem, Some((0.04, 0.06)), 1e-8).unwrap();
        let auto = find_ep(&problem, None, 1e-8).unwrap();
        assert!((tight.gamma_cr_numeric - auto.gamma_cr_numeric).abs() < 1e-8);
    }

    #[test]
    fn sweep_preserves_grid_order_and_records_seeds() {
        let grid = SweepGrid {
            m_list: vec![8usize, 10],
            u_list: vec![1.5f64, 2.0],
            w: 1.0,
            kind: ProfileKind::Random,
            base_seed: Some(7),
            rel_tol: 1e-4,
        };
        let rows = ep_sweep(&grid);
        assert_eq!(rows.len(), 4);
        let expect = [(8, 1.5, 7u64), (8, 2.0, 8), (10, 1.5, 9), (10, 2.0, 10)];
        for (row, (m, u, seed)) in rows.iter().zip(expect) {
            assert_eq!(row.m, m);
            assert_eq!(row.u, u);
            assert_eq!(row.seed, Some(seed));
            assert!(row.outcome.is_ok());
        }
    }

    #[test]
    fn empty_grid_is_empty() {
        let grid = SweepGrid {
            m_list: vec![8usize],
            u_list: Vec::<f64>::new(),
            w: 1.0,
            kind: ProfileKind::Uniform,
            base_seed: None,
            rel_tol: 1e-6,
        };
        assert!(ep_sweep(&grid).is_empty());
    }
}
