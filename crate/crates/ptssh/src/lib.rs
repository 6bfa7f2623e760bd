//! Spectral laboratory for the PT-symmetric Su-Schrieffer-Heeger (SSH) chain.
//!
//! The crate builds finite non-Hermitian tight-binding Hamiltonians with
//! staggered hoppings `v, w` and alternating on-site gain/loss `+/- i gamma_m`,
//! diagonalizes them exactly, and compares the results against a closed-form
//! two-state description of the topological edge states:
//!
//! - [`model`] — lattice specification, gain/loss profiles, Hamiltonian
//!   construction and symmetry diagnostics (PT, pseudo-anti-Hermiticity,
//!   chiral),
//! - [`eig`] — dense complex eigensolver (Hessenberg reduction + shifted QR)
//!   with eigenpair bookkeeping, spectrum-symmetry residuals and eigenvalue
//!   tracking along parameter sweeps,
//! - [`bulk`] — two-band dispersion, band gap, winding number and PT phase
//!   classification of the infinite chain,
//! - [`edge`] — analytic edge-state ansatz, effective 2x2 edge Hamiltonian,
//!   critical gain-loss contrast,
//! - [`ep`] — numerical location of the edge-state exceptional point by
//!   bisection over exact diagonalization, plus parameter sweeps.
//!
//! All numerics are generic over the scalar type through the [`Float`] trait;
//! the `*64` aliases at the crate root fix `f64`, which is what the `ptssh`
//! command-line tool and every quoted tolerance use.

pub mod bulk;
pub mod edge;
pub mod eig;
pub mod ep;
mod error;
pub mod matrix;
pub mod model;
pub mod rng;

pub use error::Error;

/// Floating-point scalar the solvers are generic over (`f32` or `f64`).
pub trait Float:
    num_traits::Float
    + num_traits::FloatConst
    + num_traits::NumAssign
    + num_traits::FromPrimitive
    + num_traits::ToPrimitive
    + core::fmt::Debug
    + core::fmt::Display
    + Send
    + Sync
    + 'static
{
}

impl<T> Float for T where
    T: num_traits::Float
        + num_traits::FloatConst
        + num_traits::NumAssign
        + num_traits::FromPrimitive
        + num_traits::ToPrimitive
        + core::fmt::Debug
        + core::fmt::Display
        + Send
        + Sync
        + 'static
{
}

/// Complex double-precision scalar.
pub type C64 = num_complex::Complex<f64>;

pub type Matrix64 = matrix::ComplexMatrix<f64>;
pub type Spectrum64 = eig::Spectrum<f64>;
pub type GainProfile64 = model::GainProfile<f64>;
pub type LatticeSpec64 = model::LatticeSpec<f64>;
pub type EdgeAnsatz64 = edge::EdgeAnsatz<f64>;
pub type EffectiveModel64 = edge::EffectiveModel<f64>;
pub type EpResult64 = ep::EpResult<f64>;

/// Result alias used throughout the crate.
pub type Result<T, E = Error> = core::result::Result<T, E>;
