//! Dense complex non-Hermitian eigensolver and eigenpair bookkeeping.
//!
//! The solver follows the classical dense path: unitary Householder reduction
//! to upper Hessenberg form, single-shift QR iteration with Wilkinson shifts
//! accumulating the Schur vectors, then back-substitution on the triangular
//! factor for right eigenvectors. Everything is straight-line floating-point
//! code, so repeated runs on the same matrix are bitwise identical.
//!
//! Scope is desk-scale exact diagonalization (dimension <= 4096); there is no
//! balancing step and no left-eigenvector machinery.

use num_complex::Complex;

use crate::matrix::{inner, vec_norm, ComplexMatrix};
use crate::{Error, Float, Result};

/// Hard cap on the matrix dimension accepted by [`eig_dense`].
pub const DENSE_DIM_LIMIT: usize = 4096;

const MAX_SWEEPS_PER_EIGENVALUE: usize = 30;

/// Eigenvalues and right eigenvectors of a dense complex matrix.
///
/// Pairs are sorted by `(Re E, Im E)` ascending. Every eigenvector has unit
/// Euclidean norm and a fixed global phase: its largest-modulus component is
/// real and positive.
#[derive(Debug, Clone)]
pub struct Spectrum<T> {
    eigenvalues: Vec<Complex<T>>,
    eigenvectors: Vec<Vec<Complex<T>>>,
}

impl<T: Float> Spectrum<T> {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn eigenvalues(&self) -> &[Complex<T>] {
        &self.eigenvalues
    }

    pub fn eigenvalue(&self, i: usize) -> Complex<T> {
        self.eigenvalues[i]
    }

    pub fn eigenvector(&self, i: usize) -> &[Complex<T>] {
        &self.eigenvectors[i]
    }

    /// `||H x_i - E_i x_i||_2` for pair `i`.
    pub fn residual(&self, h: &ComplexMatrix<T>, i: usize) -> T {
        let x = &self.eigenvectors[i];
        let hx = h.mul_vec(x);
        let e = self.eigenvalues[i];
        let diff: Vec<Complex<T>> = hx.iter().zip(x).map(|(a, b)| a - b * e).collect();
        vec_norm(&diff)
    }
}

/// Diagonalize a dense complex matrix, returning all eigenpairs.
pub fn eig_dense<T: Float>(h: &ComplexMatrix<T>) -> Result<Spectrum<T>> {
    let n = h.dim();
    if n > DENSE_DIM_LIMIT {
        return Err(Error::DimensionLimit {
            dim: n,
            limit: DENSE_DIM_LIMIT,
        });
    }
    if n == 0 {
        return Ok(Spectrum {
            eigenvalues: vec![],
            eigenvectors: vec![],
        });
    }

    let mut t = h.clone();
    let mut q = identity(n);
    hessenberg(&mut t, &mut q);
    schur(&mut t, &mut q, n)?;

    let mut pairs: Vec<(Complex<T>, Vec<Complex<T>>)> = (0..n)
        .map(|j| (t[(j, j)], triangular_eigenvector(&t, &q, j)))
        .collect();
    pairs.sort_by(|a, b| {
        (a.0.re, a.0.im)
            .partial_cmp(&(b.0.re, b.0.im))
            .expect("eigenvalues are finite")
    });

    let (eigenvalues, eigenvectors) = pairs.into_iter().unzip();
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

fn identity<T: Float>(n: usize) -> ComplexMatrix<T> {
    let mut q = ComplexMatrix::zeros(n);
    for i in 0..n {
        q[(i, i)] = Complex::new(T::one(), T::zero());
    }
    q
}

/// Unitary reduction to upper Hessenberg form: `A <- P A P`, `Q <- Q P` for a
/// chain of Householder reflectors `P = I - tau v v^H`.
fn hessenberg<T: Float>(a: &mut ComplexMatrix<T>, q: &mut ComplexMatrix<T>) {
    let n = a.dim();
    if n < 3 {
        return;
    }
    let zero = Complex::new(T::zero(), T::zero());
    let mut v = vec![zero; n];
    for k in 0..n - 2 {
        let mut norm_sq = T::zero();
        for i in k + 1..n {
            norm_sq += a[(i, k)].norm_sqr();
        }
        let norm = norm_sq.sqrt();
        if norm == T::zero() {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let phase = if x0.norm() > T::zero() {
            x0 / Complex::new(x0.norm(), T::zero())
        } else {
            Complex::new(T::one(), T::zero())
        };
        let alpha = -phase * Complex::new(norm, T::zero());
        // v = x - alpha e1 lives on rows k+1..n
        v[k + 1] = x0 - alpha;
        for i in k + 2..n {
            v[i] = a[(i, k)];
        }
        let vtv = (k + 1..n).fold(T::zero(), |s, i| s + v[i].norm_sqr());
        if vtv == T::zero() {
            continue;
        }
        let tau = (T::one() + T::one()) / vtv;

        // A <- P A, rows k+1..n
        for j in k..n {
            let mut s = zero;
            for i in k + 1..n {
                s = s + v[i].conj() * a[(i, j)];
            }
            s = s * Complex::new(tau, T::zero());
            for i in k + 1..n {
                a[(i, j)] = a[(i, j)] - v[i] * s;
            }
        }
        // A <- A P, columns k+1..n
        for i in 0..n {
            let mut s = zero;
            for j in k + 1..n {
                s = s + a[(i, j)] * v[j];
            }
            s = s * Complex::new(tau, T::zero());
            for j in k + 1..n {
                a[(i, j)] = a[(i, j)] - s * v[j].conj();
            }
        }
        // Q <- Q P
        for i in 0..n {
            let mut s = zero;
            for j in k + 1..n {
                s = s + q[(i, j)] * v[j];
            }
            s = s * Complex::new(tau, T::zero());
            for j in k + 1..n {
                q[(i, j)] = q[(i, j)] - s * v[j].conj();
            }
        }
        a[(k + 1, k)] = alpha;
        for i in k + 2..n {
            a[(i, k)] = zero;
        }
    }
}

/// Complex Givens rotation `G = [[c, s], [-conj(s), c]]` with real `c >= 0`
/// and `c^2 + |s|^2 = 1` such that `G [a; b] = [r; 0]`.
fn givens<T: Float>(a: Complex<T>, b: Complex<T>) -> (T, Complex<T>) {
    let an = a.norm();
    let bn = b.norm();
    if bn == T::zero() {
        return (T::one(), Complex::new(T::zero(), T::zero()));
    }
    if an == T::zero() {
        return (T::zero(), (b / Complex::new(bn, T::zero())).conj());
    }
    let norm = (an * an + bn * bn).sqrt();
    let c = an / norm;
    let s = (a / Complex::new(an, T::zero())) * b.conj() / Complex::new(norm, T::zero());
    (c, s)
}

/// Shifted QR iteration on the Hessenberg matrix, deflating eigenvalues until
/// `a` is upper triangular (the Schur form). `q` accumulates the unitary
/// similarity so that the input satisfies `A = Q T Q^H`.
fn schur<T: Float>(a: &mut ComplexMatrix<T>, q: &mut ComplexMatrix<T>, dim: usize) -> Result<()> {
    let n = a.dim();
    if n < 2 {
        return Ok(());
    }
    let eps = T::epsilon();
    let scale_floor = a.max_abs() * eps;
    let budget = MAX_SWEEPS_PER_EIGENVALUE * n;
    let mut sweeps = 0usize;
    let mut stalls = 0usize;
    let mut hi = n - 1;

    'deflate: loop {
        // Zero out negligible subdiagonals, then find the active block.
        let mut lo = hi;
        while lo > 0 {
            let sub = a[(lo, lo - 1)].norm();
            let local = a[(lo - 1, lo - 1)].norm() + a[(lo, lo)].norm();
            let thresh = if local > T::zero() {
                eps * local
            } else {
                scale_floor
            };
            if sub <= thresh {
                a[(lo, lo - 1)] = Complex::new(T::zero(), T::zero());
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            // 1x1 block converged.
            if hi == 0 {
                return Ok(());
            }
            hi -= 1;
            stalls = 0;
            continue 'deflate;
        }

        if sweeps >= budget {
            let mut worst = T::zero();
            for i in 1..=hi {
                worst = worst.max(a[(i, i - 1)].norm());
            }
            return Err(Error::NonConvergence {
                dim,
                residual: worst.to_f64().unwrap_or(f64::NAN),
            });
        }

        let mu = if stalls > 0 && stalls % 10 == 0 {
            // Exceptional shift to break rare limit cycles.
            let bump = a[(hi, hi - 1)].norm()
                + if hi >= 2 { a[(hi - 1, hi - 2)].norm() } else { T::zero() };
            a[(hi, hi)] + Complex::new(bump, T::zero())
        } else {
            wilkinson_shift(
                a[(hi - 1, hi - 1)],
                a[(hi - 1, hi)],
                a[(hi, hi - 1)],
                a[(hi, hi)],
            )
        };

        qr_step(a, q, lo, hi, mu);
        sweeps += 1;
        stalls += 1;

        // Deflate at the bottom of the block if the last subdiagonal died.
        let sub = a[(hi, hi - 1)].norm();
        let local = a[(hi - 1, hi - 1)].norm() + a[(hi, hi)].norm();
        let thresh = if local > T::zero() { eps * local } else { scale_floor };
        if sub <= thresh {
            a[(hi, hi - 1)] = Complex::new(T::zero(), T::zero());
            if hi == 1 {
                return Ok(());
            }
            hi -= 1;
            stalls = 0;
        }
    }
}

/// Eigenvalue of `[[a, b], [c, d]]` closer to `d`.
fn wilkinson_shift<T: Float>(
    a: Complex<T>,
    b: Complex<T>,
    c: Complex<T>,
    d: Complex<T>,
) -> Complex<T> {
    let half = T::from_f64(0.5).unwrap();
    let mid = (a + d) * Complex::new(half, T::zero());
    let off = (a - d) * Complex::new(half, T::zero());
    let disc = (off * off + b * c).sqrt();
    let l1 = mid + disc;
    let l2 = mid - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// One explicit single-shift QR sweep on the active block `lo..=hi`:
/// `A - mu I = G^H R`, `A <- R G + mu I`, applied across the full matrix so
/// the Schur form stays consistent, with `Q <- Q G^H`.
fn qr_step<T: Float>(
    a: &mut ComplexMatrix<T>,
    q: &mut ComplexMatrix<T>,
    lo: usize,
    hi: usize,
    mu: Complex<T>,
) {
    let n = a.dim();
    for i in lo..=hi {
        a[(i, i)] = a[(i, i)] - mu;
    }
    let mut rots: Vec<(T, Complex<T>)> = Vec::with_capacity(hi - lo);
    for i in lo..hi {
        let (c, s) = givens(a[(i, i)], a[(i + 1, i)]);
        let cc = Complex::new(c, T::zero());
        for j in i..n {
            let x = a[(i, j)];
            let y = a[(i + 1, j)];
            a[(i, j)] = cc * x + s * y;
            a[(i + 1, j)] = -s.conj() * x + cc * y;
        }
        rots.push((c, s));
    }
    for (k, &(c, s)) in rots.iter().enumerate() {
        let i = lo + k;
        let cc = Complex::new(c, T::zero());
        // Columns i, i+1 from the right with G^H; R is upper triangular, so
        // only rows 0..=i+1 carry nonzeros in these columns.
        for r in 0..=i + 1 {
            let x = a[(r, i)];
            let y = a[(r, i + 1)];
            a[(r, i)] = cc * x + s.conj() * y;
            a[(r, i + 1)] = -s * x + cc * y;
        }
        for r in 0..n {
            let x = q[(r, i)];
            let y = q[(r, i + 1)];
            q[(r, i)] = cc * x + s.conj() * y;
            q[(r, i + 1)] = -s * x + cc * y;
        }
    }
    for i in lo..=hi {
        a[(i, i)] = a[(i, i)] + mu;
    }
}

/// Right eigenvector of the triangular factor for eigenvalue `t[j][j]`,
/// rotated back to the original basis and normalized with a fixed phase.
fn triangular_eigenvector<T: Float>(
    t: &ComplexMatrix<T>,
    q: &ComplexMatrix<T>,
    j: usize,
) -> Vec<Complex<T>> {
    let n = t.dim();
    let zero = Complex::new(T::zero(), T::zero());
    let lambda = t[(j, j)];
    let tnorm = t.max_abs().max(T::one());
    let small = T::epsilon() * tnorm;
    let big = T::one() / T::epsilon();

    let mut y = vec![zero; n];
    y[j] = Complex::new(T::one(), T::zero());
    for i in (0..j).rev() {
        let mut num = zero;
        for k in i + 1..=j {
            num = num + t[(i, k)] * y[k];
        }
        let mut den = t[(i, i)] - lambda;
        if den.norm() < small {
            // Perturb a (numerically) repeated diagonal entry so the
            // back-substitution stays finite; accuracy degrades only for
            // defective clusters.
            den = Complex::new(small, T::zero());
        }
        y[i] = -num / den;
        let mag = y[i].norm();
        if mag > big {
            let rescale = Complex::new(T::one() / mag, T::zero());
            for yk in y.iter_mut().take(j + 1) {
                *yk = *yk * rescale;
            }
        }
    }

    // x = Q y (columns 0..=j contribute)
    let mut x = vec![zero; n];
    for (k, &yk) in y.iter().enumerate().take(j + 1) {
        if yk == zero {
            continue;
        }
        for r in 0..n {
            x[r] = x[r] + q[(r, k)] * yk;
        }
    }

    let norm = vec_norm(&x);
    if norm > T::zero() {
        let inv = Complex::new(T::one() / norm, T::zero());
        for xi in x.iter_mut() {
            *xi = *xi * inv;
        }
    }
    fix_phase(&mut x);
    x
}

/// Rotate the global phase so the largest-modulus component (first one on
/// ties) is real and positive.
fn fix_phase<T: Float>(x: &mut [Complex<T>]) {
    let mut imax = 0;
    let mut best = T::zero();
    for (i, z) in x.iter().enumerate() {
        let m = z.norm();
        if m > best {
            best = m;
            imax = i;
        }
    }
    if best == T::zero() {
        return;
    }
    let rot = x[imax].conj() / Complex::new(best, T::zero());
    for z in x.iter_mut() {
        *z = *z * rot;
    }
    // Kill the rounding-level imaginary remnant on the pivot component.
    x[imax] = Complex::new(x[imax].re, T::zero());
}

/// Which spectral mirror symmetry to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryMode {
    /// Chiral pairing: spectrum symmetric under `E -> -E`.
    Hermitian,
    /// PT pairing: spectrum symmetric under both `E -> conj(E)` and
    /// `E -> -conj(E)`.
    Pt,
}

/// Deviation of a spectrum from its ideal mirror symmetry.
///
/// `Hermitian` mode pairs the sorted list head-to-tail and returns
/// `max |E_i + E_(n-1-i)|`. `Pt` mode returns the larger of the Hausdorff
/// distances between the eigenvalue multiset and its two mirror images.
pub fn spectrum_symmetry_residuals<T: Float>(s: &Spectrum<T>, mode: SymmetryMode) -> T {
    match mode {
        SymmetryMode::Hermitian => {
            let n = s.len();
            let mut worst = T::zero();
            for i in 0..n {
                let r = (s.eigenvalue(i) + s.eigenvalue(n - 1 - i)).norm();
                worst = worst.max(r);
            }
            worst
        }
        SymmetryMode::Pt => {
            let conj: Vec<Complex<T>> = s.eigenvalues.iter().map(|z| z.conj()).collect();
            let neg_conj: Vec<Complex<T>> = s.eigenvalues.iter().map(|z| -z.conj()).collect();
            hausdorff(&s.eigenvalues, &conj).max(hausdorff(&s.eigenvalues, &neg_conj))
        }
    }
}

fn hausdorff<T: Float>(a: &[Complex<T>], b: &[Complex<T>]) -> T {
    let directed = |from: &[Complex<T>], to: &[Complex<T>]| {
        let mut worst = T::zero();
        for x in from {
            let mut nearest = T::infinity();
            for y in to {
                nearest = nearest.min((x - y).norm());
            }
            worst = worst.max(nearest);
        }
        worst
    };
    directed(a, b).max(directed(b, a))
}

/// A tracked pair of eigenvalues at one grid point.
#[derive(Debug, Clone, Copy)]
pub struct TrackedPair<T> {
    /// Indices into the spectrum at this grid point.
    pub indices: (usize, usize),
    pub values: (Complex<T>, Complex<T>),
}

const TRACK_TIE_TOL: f64 = 1e-6;
const TRACK_AMBIGUITY_TOL: f64 = 1e-9;

/// Follow two eigenpairs through a sequence of spectra along a parameter
/// grid, matching by eigenvector continuity.
///
/// At every step the two eigenvectors maximizing the projection onto the
/// previous pair's span are selected. When the selection is nearly degenerate
/// with a third level the match falls back to nearest-eigenvalue pairing
/// (score gap below `1e-6`) or fails as ambiguous (gap below `1e-9`, the
/// signature of a level crossing the grid cannot resolve).
pub fn track_pair<T: Float>(
    spectra: &[Spectrum<T>],
    seed_indices: (usize, usize),
) -> Result<Vec<TrackedPair<T>>> {
    let first = spectra.first().ok_or(Error::TrackingInput)?;
    let (ia, ib) = seed_indices;
    if ia == ib || ia >= first.len() || ib >= first.len() {
        return Err(Error::TrackingInput);
    }
    let tie = T::from_f64(TRACK_TIE_TOL).unwrap();
    let ambiguous = T::from_f64(TRACK_AMBIGUITY_TOL).unwrap();

    let mut out = Vec::with_capacity(spectra.len());
    out.push(TrackedPair {
        indices: (ia, ib),
        values: (first.eigenvalue(ia), first.eigenvalue(ib)),
    });

    for (step, s) in spectra.iter().enumerate().skip(1) {
        let prev_s = &spectra[step - 1];
        let prev = out[step - 1].indices;
        let pa = prev_s.eigenvector(prev.0);
        let pb = prev_s.eigenvector(prev.1);

        // Orthonormal basis of span{pa, pb}; near an exceptional point the
        // two coalesce and the span degrades gracefully to one dimension.
        let mut basis: Vec<Vec<Complex<T>>> = vec![pa.to_vec()];
        let overlap = inner(pa, pb);
        let mut perp: Vec<Complex<T>> =
            pb.iter().zip(pa).map(|(b, a)| b - a * overlap).collect();
        let pnorm = vec_norm(&perp);
        if pnorm > T::from_f64(1e-8).unwrap() {
            let inv = Complex::new(T::one() / pnorm, T::zero());
            for z in perp.iter_mut() {
                *z = *z * inv;
            }
            basis.push(perp);
        }

        let mut scores: Vec<(T, usize)> = (0..s.len())
            .map(|i| {
                let x = s.eigenvector(i);
                let mut p = T::zero();
                for b in &basis {
                    p += inner(b, x).norm_sqr();
                }
                (p.sqrt(), i)
            })
            .collect();
        scores.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));

        let (mut i0, mut i1) = (scores[0].1, scores[1].1);
        if scores.len() > 2 {
            let gap = scores[1].0 - scores[2].0;
            if gap < ambiguous {
                return Err(Error::TrackingAmbiguity {
                    step,
                    gap: gap.to_f64().unwrap_or(f64::NAN),
                });
            }
            if gap < tie {
                // Overlaps tie: fall back to nearest-eigenvalue matching.
                let ea = out[step - 1].values.0;
                let eb = out[step - 1].values.1;
                i0 = nearest_index(s, ea, usize::MAX);
                i1 = nearest_index(s, eb, i0);
            }
        }

        // Order the pair to minimize total eigenvalue motion.
        let (ea, eb) = out[step - 1].values;
        let d_keep = (s.eigenvalue(i0) - ea).norm() + (s.eigenvalue(i1) - eb).norm();
        let d_swap = (s.eigenvalue(i1) - ea).norm() + (s.eigenvalue(i0) - eb).norm();
        if d_swap < d_keep {
            core::mem::swap(&mut i0, &mut i1);
        }
        out.push(TrackedPair {
            indices: (i0, i1),
            values: (s.eigenvalue(i0), s.eigenvalue(i1)),
        });
    }
    Ok(out)
}

fn nearest_index<T: Float>(s: &Spectrum<T>, target: Complex<T>, skip: usize) -> usize {
    let mut best = T::infinity();
    let mut arg = 0;
    for i in 0..s.len() {
        if i == skip {
            continue;
        }
        let d = (s.eigenvalue(i) - target).norm();
        if d < best {
            best = d;
            arg = i;
        }
    }
    arg
}
