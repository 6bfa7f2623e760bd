//! Finite SSH chains with optional PT-symmetric gain/loss.
//!
//! A chain of `M = 2N` sites carries staggered hoppings `v` (intra-cell, odd
//! bonds) and `w` (inter-cell, even bonds) plus an imaginary on-site
//! potential `+i (-1)^(m-1) gamma_m` — gain on odd sites, loss on even sites.
//! The magnitudes `gamma_m >= 0` are stored without the alternating sign and
//! must satisfy the global PT mirror constraint `gamma_m = gamma_(M-m+1)`.
//!
//! Energies are conventionally quoted in units of `w`; the types accept any
//! positive `(v, w)` pair and leave the normalization to the caller.

use num_complex::Complex;

use crate::matrix::ComplexMatrix;
use crate::rng::SplitMix64;
use crate::{Error, Float, Result};

/// Spatial shape of the gain/loss magnitudes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    /// `gamma_m = U` everywhere.
    Uniform,
    /// Linear ramp from `U` at the edges down to zero at the chain center.
    LinearDecreasing,
    /// Linear ramp from zero at the edges up to `U` at the chain center.
    LinearIncreasing,
    /// `gamma_m = U * r_m` with `r_m` i.i.d. uniform on `[0, 1)`.
    Random,
    /// Magnitudes supplied by the user.
    Custom,
}

impl ProfileKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ProfileKind::Uniform => "uniform",
            ProfileKind::LinearDecreasing => "linear-decreasing",
            ProfileKind::LinearIncreasing => "linear-increasing",
            ProfileKind::Random => "random",
            ProfileKind::Custom => "custom",
        }
    }
}

impl core::str::FromStr for ProfileKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(ProfileKind::Uniform),
            "linear-decreasing" => Ok(ProfileKind::LinearDecreasing),
            "linear-increasing" => Ok(ProfileKind::LinearIncreasing),
            "random" => Ok(ProfileKind::Random),
            "custom" => Ok(ProfileKind::Custom),
            other => Err(Error::UnknownProfileKind(other.to_string())),
        }
    }
}

impl core::fmt::Display for ProfileKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Per-site gain/loss magnitudes with the PT mirror constraint.
///
/// The alternating sign `(-1)^(m-1)` is applied when the Hamiltonian is
/// built, never stored here.
#[derive(Debug, Clone, PartialEq)]
pub struct GainProfile<T> {
    magnitudes: Vec<T>,
    kind: ProfileKind,
    amplitude: T,
    seed: Option<u64>,
}

/// Mirror tolerance for user-supplied profiles; generated halves are mirrored
/// by copy and therefore exact.
const CUSTOM_MIRROR_TOL: f64 = 1e-12;

impl<T: Float> GainProfile<T> {
    /// The all-zero profile (Hermitian chain).
    pub fn zero(m: usize) -> Result<Self> {
        make_gain_profile(ProfileKind::Uniform, T::zero(), m, None)
    }

    /// Validate user-supplied magnitudes: non-negative, even length >= 4,
    /// mirror-symmetric within `1e-12`.
    pub fn custom(magnitudes: Vec<T>) -> Result<Self> {
        let m = magnitudes.len();
        if m < 4 || m % 2 != 0 {
            return Err(Error::BadSiteCount { m });
        }
        let tol = T::from_f64(CUSTOM_MIRROR_TOL).unwrap();
        for (i, &g) in magnitudes.iter().enumerate() {
            if !(g >= T::zero()) || !g.is_finite() {
                return Err(Error::NegativeGain {
                    site: i + 1,
                    value: g.to_f64().unwrap_or(f64::NAN),
                });
            }
            let j = m - 1 - i;
            if (g - magnitudes[j]).abs() > tol {
                return Err(Error::MirrorViolation {
                    site: i + 1,
                    lhs: g.to_f64().unwrap_or(f64::NAN),
                    rhs: magnitudes[j].to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        let amplitude = magnitudes
            .iter()
            .fold(T::zero(), |a, &b| if b > a { b } else { a });
        Ok(Self {
            magnitudes,
            kind: ProfileKind::Custom,
            amplitude,
            seed: None,
        })
    }

    /// Parse the plain-text profile format: one non-negative real per line,
    /// exactly `m` lines in site order; `#` starts a comment.
    pub fn parse_custom(text: &str, m: usize) -> Result<Self> {
        let mut values = Vec::with_capacity(m);
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(p) => &raw[..p],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let value: f64 = line.parse().map_err(|_| Error::ProfileFile {
                line: lineno + 1,
                reason: format!("not a number: `{line}`"),
            })?;
            values.push(T::from_f64(value).unwrap());
        }
        if values.len() != m {
            return Err(Error::ProfileFile {
                line: text.lines().count(),
                reason: format!("expected {m} values, found {}", values.len()),
            });
        }
        Self::custom(values)
    }

    pub fn magnitudes(&self) -> &[T] {
        &self.magnitudes
    }

    pub fn len(&self) -> usize {
        self.magnitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.magnitudes.is_empty()
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn amplitude(&self) -> T {
        self.amplitude
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Same spatial shape rescaled to amplitude `u_new` (linear in `U`).
    /// For custom profiles the magnitudes are scaled by `u_new / amplitude`.
    pub fn with_amplitude(&self, u_new: T) -> Result<Self> {
        if !(u_new >= T::zero()) || !u_new.is_finite() {
            return Err(Error::BadAmplitude {
                amplitude: u_new.to_f64().unwrap_or(f64::NAN),
            });
        }
        if self.amplitude == T::zero() {
            return Ok(self.clone());
        }
        let scale = u_new / self.amplitude;
        Ok(Self {
            magnitudes: self.magnitudes.iter().map(|&g| g * scale).collect(),
            kind: self.kind,
            amplitude: u_new,
            seed: self.seed,
        })
    }
}

/// Generate a profile of the given family on `m` sites.
///
/// The left half `m = 1..M/2` is filled first (random draws in site order),
/// then mirrored onto the right half, so the PT constraint holds exactly.
pub fn make_gain_profile<T: Float>(
    kind: ProfileKind,
    amplitude: T,
    m: usize,
    seed: Option<u64>,
) -> Result<GainProfile<T>> {
    if m < 4 || m % 2 != 0 {
        return Err(Error::BadSiteCount { m });
    }
    if !(amplitude >= T::zero()) || !amplitude.is_finite() {
        return Err(Error::BadAmplitude {
            amplitude: amplitude.to_f64().unwrap_or(f64::NAN),
        });
    }
    let half = m / 2;
    let denom = T::from_usize(half - 1).unwrap();
    let mut magnitudes = vec![T::zero(); m];
    let mut rng = match kind {
        ProfileKind::Random => Some(SplitMix64::new(seed.ok_or(Error::MissingSeed)?)),
        ProfileKind::Custom => {
            return Err(Error::UnknownProfileKind(
                "custom profiles are built from explicit magnitudes".into(),
            ))
        }
        _ => None,
    };
    for site in 1..=half {
        let s = T::from_usize(site).unwrap();
        magnitudes[site - 1] = match kind {
            ProfileKind::Uniform => amplitude,
            ProfileKind::LinearDecreasing => {
                amplitude * (T::from_usize(half).unwrap() - s) / denom
            }
            ProfileKind::LinearIncreasing => amplitude * (s - T::one()) / denom,
            ProfileKind::Random => amplitude * rng.as_mut().unwrap().next_unit(),
            ProfileKind::Custom => unreachable!(),
        };
    }
    for site in half + 1..=m {
        magnitudes[site - 1] = magnitudes[m - site];
    }
    Ok(GainProfile {
        magnitudes,
        kind,
        amplitude,
        seed: if kind == ProfileKind::Random { seed } else { None },
    })
}

/// Full description of a finite chain: the single source of truth for
/// building a Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSpec<T> {
    m: usize,
    v: T,
    w: T,
    profile: GainProfile<T>,
}

impl<T: Float> LatticeSpec<T> {
    pub fn new(m: usize, v: T, w: T, profile: GainProfile<T>) -> Result<Self> {
        if m < 4 || m % 2 != 0 {
            return Err(Error::BadSiteCount { m });
        }
        if !(v > T::zero()) || !(w > T::zero()) || !v.is_finite() || !w.is_finite() {
            return Err(Error::BadHoppings {
                v: v.to_f64().unwrap_or(f64::NAN),
                w: w.to_f64().unwrap_or(f64::NAN),
            });
        }
        if profile.len() != m {
            return Err(Error::ProfileLength {
                expected: m,
                got: profile.len(),
            });
        }
        Ok(Self { m, v, w, profile })
    }

    /// `w`-units convention: fixes `w` and takes the ratio `u = w/v`, so
    /// `v = w/u`.
    pub fn from_ratio(m: usize, w: T, u: T, profile: GainProfile<T>) -> Result<Self> {
        if !(u > T::zero()) || !u.is_finite() {
            return Err(Error::BadHoppings {
                v: f64::NAN,
                w: w.to_f64().unwrap_or(f64::NAN),
            });
        }
        Self::new(m, w / u, w, profile)
    }

    /// Hermitian chain (all `gamma_m = 0`).
    pub fn hermitian(m: usize, v: T, w: T) -> Result<Self> {
        Self::new(m, v, w, GainProfile::zero(m)?)
    }

    pub fn sites(&self) -> usize {
        self.m
    }

    pub fn v(&self) -> T {
        self.v
    }

    pub fn w(&self) -> T {
        self.w
    }

    /// Hopping ratio `u = w/v`.
    pub fn ratio(&self) -> T {
        self.w / self.v
    }

    pub fn profile(&self) -> &GainProfile<T> {
        &self.profile
    }
}

/// Assemble the dense `M x M` chain Hamiltonian.
///
/// Off-diagonals alternate `v, w, v, ...` starting with `v`; the diagonal is
/// `i (-1)^(m-1) gamma_m`. The Hermitian chain is the special case of an
/// all-zero profile. Validation lives in the `LatticeSpec`/`GainProfile`
/// constructors, so building is total and bitwise deterministic.
pub fn build_hamiltonian<T: Float>(spec: &LatticeSpec<T>) -> ComplexMatrix<T> {
    let m = spec.sites();
    let mut h = ComplexMatrix::zeros(m);
    for bond in 1..m {
        // 1-based site index of the bond's left end
        let hop = if bond % 2 == 1 { spec.v() } else { spec.w() };
        h[(bond - 1, bond)] = Complex::new(hop, T::zero());
        h[(bond, bond - 1)] = Complex::new(hop, T::zero());
    }
    for (i, &g) in spec.profile().magnitudes().iter().enumerate() {
        let sign = if i % 2 == 0 { T::one() } else { -T::one() };
        h[(i, i)] = Complex::new(T::zero(), sign * g);
    }
    h
}

/// Max-norm residuals of the chain's defining (anti-)symmetries.
#[derive(Debug, Clone, Copy)]
pub struct SymmetryResiduals<T> {
    /// `||{Sigma_z, H}||_max` with `Sigma_z = diag(+1, -1, ...)`. Diagnostic
    /// only: nonzero whenever any `gamma_m > 0`.
    pub chiral: T,
    /// `||P conj(H) P - H||_max` with `P` the backward identity; zero for a
    /// PT-symmetric chain.
    pub pt_commutator: T,
    /// `||Sigma_z conj(H) Sigma_z + H||_max`; zero when the Hamiltonian is
    /// pseudo-anti-Hermitian.
    pub pseudo_anti_hermitian: T,
}

/// Evaluate all three residuals for a square, even-dimension matrix.
pub fn symmetry_residuals<T: Float>(h: &ComplexMatrix<T>) -> Result<SymmetryResiduals<T>> {
    h.require_even_dim()?;
    let n = h.dim();
    let sign = |i: usize| if i % 2 == 0 { T::one() } else { -T::one() };
    let mut chiral = T::zero();
    let mut pt = T::zero();
    let mut pah = T::zero();
    for i in 0..n {
        for j in 0..n {
            let hij = h[(i, j)];
            // {Sigma_z, H}_ij = (s_i + s_j) H_ij
            let c = hij * Complex::new(sign(i) + sign(j), T::zero());
            // (P conj(H) P)_ij = conj(H)_(n-1-i, n-1-j)
            let p = h[(n - 1 - i, n - 1 - j)].conj() - hij;
            // (Sigma_z conj(H) Sigma_z)_ij = s_i s_j conj(H_ij)
            let a = hij.conj() * Complex::new(sign(i) * sign(j), T::zero()) + hij;
            chiral = chiral.max(c.norm());
            pt = pt.max(p.norm());
            pah = pah.max(a.norm());
        }
    }
    Ok(SymmetryResiduals {
        chiral,
        pt_commutator: pt,
        pseudo_anti_hermitian: pah,
    })
}
