//! Analytic edge-state machinery for the topologically nontrivial chain
//! (`u = w/v > 1`).
//!
//! The left edge state lives on odd sites with amplitudes
//! `c_m^L = c_L (-u)^{-(m-1)/2}`, the right edge state on even sites with
//! `c_m^R = c_R (-u)^{-(M-m)/2}`, both normalized by
//! `c_L^2 = c_R^2 = (1 - u^-2) / (1 - u^-M)`. On a finite chain the two
//! hybridize through an exponentially small coupling
//!
//! ```text
//! C = v (1 - u^-2) / (1 - u^-M) * (-u)^{-(M/2 - 1)},   |C| ~ C0 e^{-M/xi}
//! ```
//!
//! with `C0 = (w^2 - v^2)/w` and localization length `xi = 2 / ln u`. With
//! gain/loss the pair is governed by the effective two-state Hamiltonian
//! `[[i gbar, C], [C, -i gbar]]`, whose eigenvalues `+/- sqrt(C^2 - gbar^2)`
//! collide at the edge-state exceptional point `gbar = |C|`.

use num_complex::Complex;

use crate::model::GainProfile;
use crate::{Error, Float, Result};

/// Analytic edge-state pair on a finite chain, with derived quantities.
#[derive(Debug, Clone)]
pub struct EdgeAnsatz<T> {
    m: usize,
    u: T,
    c_left: Vec<T>,
    c_right: Vec<T>,
    normalization: T,
    xi: T,
    coupling: T,
}

impl<T: Float> EdgeAnsatz<T> {
    pub fn sites(&self) -> usize {
        self.m
    }

    pub fn ratio(&self) -> T {
        self.u
    }

    /// Amplitudes of the left edge state (zero on even sites).
    pub fn c_left(&self) -> &[T] {
        &self.c_left
    }

    /// Amplitudes of the right edge state (zero on odd sites).
    pub fn c_right(&self) -> &[T] {
        &self.c_right
    }

    /// Leading amplitude `c_L = c_1^L > 0`.
    pub fn normalization(&self) -> T {
        self.normalization
    }

    /// Localization length `xi = 2 / ln u` in units of the lattice spacing.
    pub fn xi(&self) -> T {
        self.xi
    }

    /// Effective coupling between the two edge states in `w = 1` units
    /// (`v = 1/u`); signed, with the sign alternating in the parity of
    /// `M/2 - 1`. Use [`coupling_c`] for other hopping scales.
    pub fn coupling(&self) -> T {
        self.coupling
    }

    /// Norm of the projection of a complex vector onto span{|L>, |R>}.
    /// The two ansatz states are exactly orthogonal (disjoint sublattices).
    pub fn projection_norm(&self, x: &[Complex<T>]) -> T {
        debug_assert_eq!(x.len(), self.m);
        let mut l = Complex::new(T::zero(), T::zero());
        let mut r = Complex::new(T::zero(), T::zero());
        for i in 0..self.m {
            l = l + x[i] * self.c_left[i];
            r = r + x[i] * self.c_right[i];
        }
        (l.norm_sqr() + r.norm_sqr()).sqrt()
    }
}

fn require_nontrivial<T: Float>(u: T) -> Result<()> {
    if u > T::one() && u.is_finite() {
        Ok(())
    } else {
        Err(Error::TrivialPhase {
            u: u.to_f64().unwrap_or(f64::NAN),
        })
    }
}

fn require_chain<T: Float>(m: usize, u: T) -> Result<()> {
    if m < 4 || m % 2 != 0 {
        return Err(Error::BadSiteCount { m });
    }
    require_nontrivial(u)
}

/// `(-u)^(-p)` for integer `p >= 0`.
fn neg_u_inv_pow<T: Float>(u: T, p: usize) -> T {
    let mag = u.powi(-(p as i32));
    if p % 2 == 0 {
        mag
    } else {
        -mag
    }
}

/// Normalization constant `c_L = c_R = sqrt((1 - u^-2)/(1 - u^-M))`.
fn edge_normalization<T: Float>(m: usize, u: T) -> T {
    let one = T::one();
    ((one - u.powi(-2)) / (one - u.powi(-(m as i32)))).sqrt()
}

/// Construct the edge-state ansatz pair for an `m`-site chain.
pub fn ansatz_states<T: Float>(m: usize, u: T) -> Result<EdgeAnsatz<T>> {
    require_chain(m, u)?;
    let c = edge_normalization(m, u);
    let mut c_left = vec![T::zero(); m];
    let mut c_right = vec![T::zero(); m];
    for site in 1..=m {
        if site % 2 == 1 {
            c_left[site - 1] = c * neg_u_inv_pow(u, (site - 1) / 2);
        } else {
            c_right[site - 1] = c * neg_u_inv_pow(u, (m - site) / 2);
        }
    }
    let two = T::one() + T::one();
    Ok(EdgeAnsatz {
        m,
        u,
        c_left,
        c_right,
        normalization: c,
        xi: two / u.ln(),
        coupling: coupling_c(m, u, u.recip())?,
    })
}

/// Signed effective coupling `<L|H|R>` evaluated in closed form.
pub fn coupling_c<T: Float>(m: usize, u: T, v: T) -> Result<T> {
    require_chain(m, u)?;
    let one = T::one();
    let ratio = (one - u.powi(-2)) / (one - u.powi(-(m as i32)));
    Ok(v * ratio * neg_u_inv_pow(u, m / 2 - 1))
}

/// Large-`M` approximation `|C| ~ C0 e^{-M/xi}` with `C0 = (w^2 - v^2)/w`
/// and `w = u v`.
pub fn coupling_asymptotic<T: Float>(m: usize, u: T, v: T) -> Result<T> {
    require_nontrivial(u)?;
    let w = u * v;
    let c0 = (w * w - v * v) / w;
    // e^{-M/xi} = u^{-M/2}
    Ok(c0 * u.powi(-(m as i32) / 2))
}

/// Effective gain-loss rate seen by the edge states: the odd-site magnitudes
/// averaged with the left edge state's weight `u^{-2(n-1)}`.
pub fn gamma_bar<T: Float>(profile: &GainProfile<T>, u: T) -> Result<T> {
    require_chain(profile.len(), u)?;
    let cells = profile.len() / 2;
    let weight_step = u.powi(-2);
    let mut weight = T::one();
    let mut num = T::zero();
    let mut den = T::zero();
    for n in 0..cells {
        num += profile.magnitudes()[2 * n] * weight;
        den += weight;
        weight *= weight_step;
    }
    Ok(num / den)
}

/// Critical gain-loss contrast of the uniform chain, `gamma_cr = |C|`.
pub fn gamma_cr_analytic<T: Float>(m: usize, u: T, v: T) -> Result<T> {
    Ok(coupling_c(m, u, v)?.abs())
}

/// Critical profile amplitude `U_cr = |C| / gbar(profile at U = 1)`;
/// valid because every generated family is proportional to `U`.
pub fn amplitude_cr_analytic<T: Float>(unit_profile: &GainProfile<T>, u: T, v: T) -> Result<T> {
    let c = coupling_c(unit_profile.len(), u, v)?.abs();
    let gbar = gamma_bar(unit_profile, u)?;
    if gbar <= T::zero() {
        if c > T::zero() {
            return Err(Error::EdgeDecoupled);
        }
        return Ok(T::zero());
    }
    Ok(c / gbar)
}

/// Finite-size defect of the ansatz: `||H |L>||_2` for the Hermitian chain,
/// computed by explicit matrix-vector product (the only surviving term is
/// the single leftover amplitude `v c_L u^{-(M/2-1)}` at the last site).
pub fn ansatz_residual<T: Float>(m: usize, u: T, v: T) -> Result<T> {
    let ansatz = ansatz_states(m, u)?;
    let spec = crate::model::LatticeSpec::hermitian(m, v, u * v)?;
    let h = crate::model::build_hamiltonian(&spec);
    let l: Vec<Complex<T>> = ansatz
        .c_left()
        .iter()
        .map(|&a| Complex::new(a, T::zero()))
        .collect();
    Ok(crate::matrix::vec_norm(&h.mul_vec(&l)))
}

/// Effective two-state edge Hamiltonian `[[i gbar, C], [C, -i gbar]]`:
/// eigenvalues, mixing angle and eigenvectors in the `{|L>, |R>}` basis.
#[derive(Debug, Clone)]
pub struct EffectiveModel<T> {
    pub gamma_bar: T,
    pub coupling: T,
    pub e_plus: Complex<T>,
    pub e_minus: Complex<T>,
    /// Complex mixing angle; `None` exactly at the exceptional point, where
    /// the eigenvectors coalesce.
    pub theta: Option<Complex<T>>,
    pub at_ep: bool,
    psi_plus: Option<[Complex<T>; 2]>,
    psi_minus: Option<[Complex<T>; 2]>,
}

impl<T: Float> EffectiveModel<T> {
    /// Unit-norm eigenvector of `e_plus` in the `{|L>, |R>}` basis.
    pub fn psi_plus(&self) -> Option<[Complex<T>; 2]> {
        self.psi_plus
    }

    /// Unit-norm eigenvector of `e_minus`.
    pub fn psi_minus(&self) -> Option<[Complex<T>; 2]> {
        self.psi_minus
    }
}

/// Relative width of the window flagged as "at the exceptional point":
/// below eigensolver noise, above double rounding.
const EP_FLAG_TOL: f64 = 1e-12;

/// Diagonalize the effective model for given `gbar >= 0` and signed `C`.
///
/// `E_+/- = +/- sqrt(C^2 - gbar^2)` with the principal branch, and
/// `theta = -(i/4) ln[(gbar + C)/(gbar - C)]` with the principal logarithm,
/// which reduces to `theta = pi/4` at `gbar = 0` (equal symmetric and
/// antisymmetric superpositions) and keeps `Re theta = pi/4` everywhere
/// below the exceptional point.
pub fn effective_model<T: Float>(gbar: T, coupling: T) -> EffectiveModel<T> {
    let disc = coupling * coupling - gbar * gbar;
    let e_plus = if disc >= T::zero() {
        Complex::new(disc.sqrt(), T::zero())
    } else {
        Complex::new(T::zero(), (-disc).sqrt())
    };
    let scale = coupling.abs().max(gbar.abs()).max(T::one());
    let at_ep = (gbar.abs() - coupling.abs()).abs() < T::from_f64(EP_FLAG_TOL).unwrap() * scale;

    let (theta, psi_plus, psi_minus) = if at_ep {
        (None, None, None)
    } else {
        let ratio = Complex::new((gbar + coupling) / (gbar - coupling), T::zero());
        let quarter = T::from_f64(0.25).unwrap();
        let th = -Complex::new(T::zero(), quarter) * ratio.ln();
        let (sin, cos) = (th.sin(), th.cos());
        let mut plus = [cos, sin];
        let mut minus = [sin, -cos];
        // The principal branch fixes theta only up to the pi/2 ambiguity of
        // the defining relation; pick the labeling that actually pairs
        // psi_plus with e_plus.
        let h = [
            [Complex::new(T::zero(), gbar), Complex::new(coupling, T::zero())],
            [Complex::new(coupling, T::zero()), Complex::new(T::zero(), -gbar)],
        ];
        let resid = |psi: &[Complex<T>; 2], e: Complex<T>| {
            let r0 = h[0][0] * psi[0] + h[0][1] * psi[1] - e * psi[0];
            let r1 = h[1][0] * psi[0] + h[1][1] * psi[1] - e * psi[1];
            (r0.norm_sqr() + r1.norm_sqr()).sqrt()
        };
        if resid(&minus, e_plus) < resid(&plus, e_plus) {
            core::mem::swap(&mut plus, &mut minus);
        }
        for psi in [&mut plus, &mut minus] {
            let n = (psi[0].norm_sqr() + psi[1].norm_sqr()).sqrt();
            let inv = Complex::new(T::one() / n, T::zero());
            psi[0] = psi[0] * inv;
            psi[1] = psi[1] * inv;
        }
        (Some(th), Some(plus), Some(minus))
    };

    EffectiveModel {
        gamma_bar: gbar,
        coupling,
        e_plus,
        e_minus: -e_plus,
        theta,
        at_ep,
        psi_plus,
        psi_minus,
    }
}
