//! Bulk-band analytics of the infinite chain: dispersion, gap, winding
//! number and PT phase classification.
//!
//! All quantities derive from the two-band Bloch Hamiltonian with
//! off-diagonal `h(k) = v + w e^{-ik}` and on-site `+/- i gamma`:
//!
//! ```text
//! E(k) = +/- sqrt(v^2 + w^2 + 2 v w cos k - gamma^2)
//! ```
//!
//! with the principal square root (non-negative real part, and non-negative
//! imaginary part on the cut).

use num_complex::Complex;

use crate::{Error, Float, Result};

/// PT classification regions of the bulk spectrum (thermodynamic limit).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PtRegion {
    /// `gamma < |v - w|`: every Bloch eigenvalue is real.
    Unbroken,
    /// `|v - w| < gamma < v + w`: part of the band turns imaginary.
    PartiallyBroken,
    /// `gamma > v + w`: the whole spectrum is imaginary.
    FullyBroken,
}

impl PtRegion {
    pub fn as_str(&self) -> &'static str {
        match self {
            PtRegion::Unbroken => "unbroken",
            PtRegion::PartiallyBroken => "partially-broken",
            PtRegion::FullyBroken => "fully-broken",
        }
    }
}

/// PT phase with a marker for sitting exactly on a transition line.
///
/// The classification uses strict inequalities; exact equality is reported as
/// the more-broken side with `at_boundary` set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PtPhase {
    pub region: PtRegion,
    pub at_boundary: bool,
}

/// One point of the two-band dispersion; the branches satisfy
/// `E_minus = -E_plus`.
#[derive(Debug, Clone, Copy)]
pub struct BandPoint<T> {
    pub k: T,
    pub e_plus: Complex<T>,
    pub e_minus: Complex<T>,
}

/// Evaluate the bulk dispersion at momentum `k` (the Hermitian chain is
/// `gamma = 0`).
pub fn dispersion<T: Float>(k: T, v: T, w: T, gamma: T) -> BandPoint<T> {
    let two = T::one() + T::one();
    let d = v * v + w * w + two * v * w * k.cos() - gamma * gamma;
    let e_plus = if d >= T::zero() {
        Complex::new(d.sqrt(), T::zero())
    } else {
        Complex::new(T::zero(), (-d).sqrt())
    };
    BandPoint {
        k,
        e_plus,
        e_minus: -e_plus,
    }
}

/// Bulk band gap `E_g = 2 |v - w|`.
pub fn band_gap<T: Float>(v: T, w: T) -> T {
    let two = T::one() + T::one();
    two * (v - w).abs()
}

/// Winding number with its quadrature diagnostic.
#[derive(Debug, Clone, Copy)]
pub struct WindingNumber<T> {
    pub value: i32,
    /// Distance of the raw accumulated winding from the nearest integer.
    pub quadrature_residual: T,
}

const WINDING_MIN_POINTS: usize = 64;
const WINDING_RESIDUAL_TOL: f64 = 1e-6;

/// Winding number of `h(k) = v + w e^{-ik}` around the origin, accumulated
/// as unwrapped phase increments over `nk` uniform points on `[-pi, pi]`.
///
/// The contour is traversed with the orientation that makes the
/// topologically nontrivial phase (`w > v`) come out as `+1`. Requires an
/// open gap (`v != w`) and errors if the accumulated phase does not settle
/// on an integer multiple of `2 pi`.
pub fn winding_number<T: Float>(v: T, w: T, nk: usize) -> Result<WindingNumber<T>> {
    if nk < WINDING_MIN_POINTS {
        return Err(Error::KGridTooCoarse {
            min: WINDING_MIN_POINTS,
            got: nk,
        });
    }
    if v == w {
        return Err(Error::GapClosed);
    }
    let pi = T::PI();
    let two = T::one() + T::one();
    let step = two * pi / T::from_usize(nk - 1).unwrap();
    let h_at = |k: T| {
        // h(k) = v + w e^{-ik}
        Complex::new(v + w * k.cos(), -w * k.sin())
    };
    let mut total = T::zero();
    let mut prev = h_at(-pi);
    for j in 1..nk {
        let k = -pi + step * T::from_usize(j).unwrap();
        let cur = h_at(k);
        // Principal-value increment of arg h between consecutive k points.
        total += (cur * prev.conj()).arg();
        prev = cur;
    }
    // e^{-ik} runs clockwise as k increases, so negate to count
    // counterclockwise encirclements.
    let raw = -total / (two * pi);
    let nearest = raw.round();
    let residual = (raw - nearest).abs();
    if residual > T::from_f64(WINDING_RESIDUAL_TOL).unwrap() {
        return Err(Error::WindingQuadrature {
            residual: residual.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(WindingNumber {
        value: nearest.to_i32().expect("winding fits i32"),
        quadrature_residual: residual,
    })
}

/// Classify the bulk PT phase of the infinite chain at gain-loss contrast
/// `gamma`. Finite chains shift these boundaries; this is the
/// thermodynamic-limit formula only.
pub fn pt_phase<T: Float>(v: T, w: T, gamma: T) -> PtPhase {
    let inner = (v - w).abs();
    let outer = v + w;
    if gamma == inner {
        PtPhase {
            region: PtRegion::PartiallyBroken,
            at_boundary: true,
        }
    } else if gamma == outer {
        PtPhase {
            region: PtRegion::FullyBroken,
            at_boundary: true,
        }
    } else if gamma < inner {
        PtPhase {
            region: PtRegion::Unbroken,
            at_boundary: false,
        }
    } else if gamma < outer {
        PtPhase {
            region: PtRegion::PartiallyBroken,
            at_boundary: false,
        }
    } else {
        PtPhase {
            region: PtRegion::FullyBroken,
            at_boundary: false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dispersion_band_edges() {
        let p = dispersion(std::f64::consts::PI, 1.0f64, 2.0, 0.0);
        assert!((p.e_plus.re - 1.0).abs() < 1e-14, "|v - w| at k = pi");
        let q = dispersion(0.0f64, 1.0, 2.0, 0.0);
        assert!((q.e_plus.re - 3.0).abs() < 1e-14, "v + w at k = 0");
        assert_eq!(q.e_minus, -q.e_plus);
    }

    #[test]
    fn dispersion_imaginary_branch() {
        // k = pi, v = 1, w = 1.5, gamma = 1: E^2 = 0.25 - 1 = -0.75.
        let p = dispersion(std::f64::consts::PI, 1.0, 1.5, 1.0);
        assert!(p.e_plus.re.abs() < 1e-14);
        assert!((p.e_plus.im - 0.75f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn gap_values() {
        assert!((band_gap(1.0f64, 2.0) - 2.0).abs() < 1e-15);
        assert_eq!(band_gap(1.3f64, 1.3), 0.0);
        assert!((band_gap(2.0f64 / 3.0, 1.0) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn winding_trivial_and_nontrivial() {
        let topo = winding_number(1.0, 2.0, 1024).unwrap();
        assert_eq!(topo.value, 1);
        assert!(topo.quadrature_residual < 1e-6);
        let triv = winding_number(2.0, 1.0, 1024).unwrap();
        assert_eq!(triv.value, 0);
        assert!(triv.quadrature_residual < 1e-6);
    }

    #[test]
    fn winding_near_gap_closing_needs_fine_grid() {
        // u = 1.001: the locus of h(k) passes close to the origin; a dense
        // grid still resolves one full turn.
        let wn = winding_number(1.0, 1.001, 16384).unwrap();
        assert_eq!(wn.value, 1);
        assert!(wn.quadrature_residual < 1e-6);
    }

    #[test]
    fn winding_rejects_degenerate_input() {
        assert!(matches!(
            winding_number(1.0, 1.0, 1024),
            Err(Error::GapClosed)
        ));
        assert!(matches!(
            winding_number(1.0, 2.0, 10),
            Err(Error::KGridTooCoarse { .. })
        ));
    }

    #[test]
    fn phase_classification() {
        assert_eq!(
            pt_phase(1.0, 1.5, 0.2).region,
            PtRegion::Unbroken
        );
        assert_eq!(
            pt_phase(1.0, 1.5, 1.0).region,
            PtRegion::PartiallyBroken
        );
        assert_eq!(
            pt_phase(1.0, 1.5, 3.0).region,
            PtRegion::FullyBroken
        );
        let b = pt_phase(1.0, 1.5, 0.5);
        assert!(b.at_boundary);
        assert_eq!(b.region, PtRegion::PartiallyBroken);
        let b2 = pt_phase(1.0, 1.5, 2.5);
        assert!(b2.at_boundary);
        assert_eq!(b2.region, PtRegion::FullyBroken);
        assert_eq!(pt_phase(1.0, 1.4, 0.0).region, PtRegion::Unbroken);
    }
}
