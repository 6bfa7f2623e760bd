use thiserror::Error;

/// Errors raised by lattice construction, diagonalization and the
/// exceptional-point search.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("site count must be even and >= 4, got M = {m}")]
    BadSiteCount { m: usize },

    #[error("hopping amplitudes must be positive and finite, got v = {v}, w = {w}")]
    BadHoppings { v: f64, w: f64 },

    #[error("gain/loss magnitude at site {site} is negative ({value})")]
    NegativeGain { site: usize, value: f64 },

    #[error("gain/loss profile has {got} entries but the chain has {expected} sites")]
    ProfileLength { expected: usize, got: usize },

    #[error(
        "profile violates the PT mirror constraint gamma_m = gamma_(M-m+1) at site {site}: \
         {lhs} vs {rhs}"
    )]
    MirrorViolation { site: usize, lhs: f64, rhs: f64 },

    #[error("profile amplitude must be non-negative and finite, got {amplitude}")]
    BadAmplitude { amplitude: f64 },

    #[error("random profile requires a seed")]
    MissingSeed,

    #[error("unknown profile kind `{0}`")]
    UnknownProfileKind(String),

    #[error("profile file, line {line}: {reason}")]
    ProfileFile { line: usize, reason: String },

    #[error("matrix must be square, got {rows} x {cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("operation requires an even matrix dimension, got {dim}")]
    OddDimension { dim: usize },

    #[error("matrix dimension {dim} exceeds the dense-solver limit {limit}")]
    DimensionLimit { dim: usize, limit: usize },

    #[error(
        "QR iteration failed to converge for a {dim} x {dim} matrix \
         (largest remaining subdiagonal {residual:e})"
    )]
    NonConvergence { dim: usize, residual: f64 },

    #[error(
        "eigenvalue tracking is ambiguous at grid step {step}: continuity scores \
         differ by {gap:e} (likely level crossing); refine the parameter grid"
    )]
    TrackingAmbiguity { step: usize, gap: f64 },

    #[error("tracking needs at least one spectrum and valid seed indices")]
    TrackingInput,

    #[error("winding-number quadrature did not settle on an integer (off by {residual:e}); \
             increase the k-grid or move away from the gap closing")]
    WindingQuadrature { residual: f64 },

    #[error("k-grid must have at least {min} points, got {got}")]
    KGridTooCoarse { min: usize, got: usize },

    #[error("winding number is undefined at the gap closing v = w")]
    GapClosed,

    #[error("edge ansatz undefined in trivial phase (requires u > 1, got u = {u})")]
    TrivialPhase { u: f64 },

    #[error("edge states decoupled from potential: effective gain-loss rate vanishes \
             while the edge coupling does not")]
    EdgeDecoupled,

    #[error(
        "edge states hybridized with bulk: only {found} eigenvectors project onto the \
         edge subspace above {threshold} (best projections {best:?})"
    )]
    EdgeHybridized {
        found: usize,
        threshold: f64,
        best: (f64, f64),
    },

    #[error(
        "exceptional point not bracketed on [{lo}, {hi}] (indicator is `{state}` at both \
         ends); widen or refine the initial scan"
    )]
    Bracketing { lo: f64, hi: f64, state: &'static str },
}
