//! Error type shared by every module of the library.

use crate::ode::{Frame, ProfileKind};

/// Library-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in the library.
///
/// Numerical *outcomes* (a shot that cannot be classified, an integration that
/// exhausts its budget) are not errors — they are reported through result
/// types such as termination reasons and classification tags. `Error` is
/// reserved for contract violations: invalid parameters, unsupported
/// combinations, and data that cannot support the requested computation.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Spatial dimension outside the supported range.
    #[error("invalid spatial dimension n = {0}; need a finite n >= 1")]
    InvalidDimension(f64),

    /// Nonlinearity exponent outside the supported range.
    #[error("invalid nonlinearity exponent p = {0}; need a finite p > 1")]
    InvalidExponent(f64),

    /// The singular amplitude `L = gamma^{1/(p-1)}` only exists when
    /// `gamma > 0`, i.e. for `p > p_sg = n/(n-2)` with `n > 2`.
    #[error("singular amplitude L is undefined at (n, p) = ({n}, {p}); it requires gamma > 0, i.e. p > n/(n-2) with n > 2")]
    SingularAmplitudeUndefined { n: f64, p: f64 },

    /// The comparison-root shift must keep the radicand `(n-2)^2 - 4*eps`
    /// nonnegative.
    #[error(
        "comparison shift eps = {eps} out of range at n = {n}; need 0 <= eps <= (n-2)^2/4 = {max}"
    )]
    ComparisonShiftOutOfRange { n: f64, eps: f64, max: f64 },

    /// The indicial discriminant has no zero in `p` for this dimension
    /// (it stays negative for all `p > p_S` when `n <= 10`).
    #[error("the indicial discriminant has no root in p for n = {n}; it only vanishes at finite p when n > 10")]
    NoDiscriminantRoot { n: f64 },

    /// Raising a negative value to a non-integer power is a hard error:
    /// positivity is structural for these profiles and silently producing
    /// NaN would corrupt every downstream diagnostic.
    #[error("cannot raise negative value {base} to non-integer power {exponent}")]
    NegativePower { base: f64, exponent: f64 },

    /// The requested frame/kind pair has no exact ODE (the log-radius phase
    /// frame is autonomous only for the steady equation).
    #[error("frame {frame:?} does not support kind {kind:?}; the log-phase system is exact only for the steady equation")]
    UnsupportedFrameKind { frame: Frame, kind: ProfileKind },

    /// A state or trajectory was handed to an operation expecting a
    /// different frame.
    #[error("frame mismatch: expected {expected:?}, got {got:?}")]
    FrameMismatch { expected: Frame, got: Frame },

    /// A state or trajectory was handed to an operation expecting a
    /// different equation kind.
    #[error("kind mismatch: expected {expected}, got {got:?}")]
    KindMismatch { expected: String, got: ProfileKind },

    /// Malformed integration or search options.
    #[error("invalid options: {0}")]
    InvalidOptions(String),

    /// A state violates the frame's coordinate/value invariants.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// Series starts need a positive center value.
    #[error("start value must be positive, got {0}")]
    NonPositiveStart(f64),

    /// The series start radius could not be shrunk enough to meet the
    /// remainder tolerance.
    #[error("no start radius at or below {eps_max} meets the series remainder tolerance {tol}")]
    StartRadiusUnderflow { eps_max: f64, tol: f64 },

    /// A single-mode singular start was requested where the indicial roots
    /// are a complex pair.
    #[error("indicial roots at (n, p) = ({n}, {p}) are complex; use a spiral start with amplitude and phase")]
    ComplexIndicialRoots { n: f64, p: f64 },

    /// A spiral start was requested where the indicial roots are real.
    #[error("indicial roots at (n, p) = ({n}, {p}) are real; use a single-mode singular start")]
    RealIndicialRoots { n: f64, p: f64 },

    /// Too few samples for the requested computation.
    #[error("insufficient samples: got {got}, need at least {need}")]
    InsufficientSamples { got: usize, need: usize },

    /// A sub-span fell outside the trajectory's coordinate range.
    #[error("span [{lo}, {hi}] not contained in trajectory span [{traj_lo}, {traj_hi}]")]
    SpanOutOfRange {
        lo: f64,
        hi: f64,
        traj_lo: f64,
        traj_hi: f64,
    },

    /// Two trajectories have no overlapping coordinates to compare on.
    #[error("trajectory spans [{lo1}, {hi1}] and [{lo2}, {hi2}] do not overlap")]
    DisjointSpans {
        lo1: f64,
        hi1: f64,
        lo2: f64,
        hi2: f64,
    },

    /// The trajectory does not reach close enough to the origin for an
    /// origin-limit classification.
    #[error(
        "insufficient depth near the origin: trajectory reaches r = {reached}, need r <= {need}"
    )]
    InsufficientDepth { reached: f64, need: f64 },

    /// The trajectory does not extend far enough outward for a tail estimate.
    #[error(
        "insufficient span for a tail estimate: trajectory ends at r = {reached}, need r >= {need}"
    )]
    InsufficientSpan { reached: f64, need: f64 },

    /// Both bisection bracket endpoints classify identically, so there is no
    /// boundary to locate between them.
    #[error(
        "bracket endpoints a = {a_lo} and a = {a_hi} both classify as {tag}; no boundary to bisect"
    )]
    SameTagBracket { a_lo: f64, a_hi: f64, tag: String },

    /// The bracket endpoints carry two distinct tags, but not the pair the
    /// caller asked to separate.
    #[error(
        "bracket tags ({lo_tag}, {hi_tag}) do not match the requested pair ({want_lo}, {want_hi})"
    )]
    BracketTagMismatch {
        lo_tag: String,
        hi_tag: String,
        want_lo: String,
        want_hi: String,
    },

    /// Bisection could not step past undetermined classifications even after
    /// nudging the probe point.
    #[error("bisection stalled on undetermined classifications inside [{a_lo}, {a_hi}] after {attempts} probe attempts")]
    UndeterminedBracket {
        a_lo: f64,
        a_hi: f64,
        attempts: usize,
    },

    /// A parameter grid was empty or not strictly increasing.
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// Unknown verification suite name.
    #[error("unknown verification suite {0:?}; expected one of identities, exponents, lemma21, dichotomy, uniqueness-probe, all")]
    UnknownSuite(String),

    /// Malformed CSV during parsing.
    #[error("csv parse error at line {line}: {msg}")]
    CsvParse { line: usize, msg: String },
}
