//! Closed-form arithmetic for the critical exponents of `u_t = Δu + u^p`,
//! the derived profile constants, regime classification, and the indicial
//! and comparison roots used by the singular-solution analysis.
//!
//! The exponent ladder for spatial dimension `n`:
//!
//! * Fujita exponent `p_F = 1 + 2/n`,
//! * singular exponent `p_sg = n/(n−2)` (unbounded for `n ≤ 2`),
//! * Sobolev exponent `p_S = (n+2)/(n−2)` (unbounded for `n ≤ 2`),
//! * Joseph–Lundgren exponent `p_JL = 1 + 4/(n−4−2√(n−1))` (unbounded for
//!   `n ≤ 10`),
//! * its dual `p_JL* = 1 + 4/(n−4+2√(n−1))` (unbounded for `n ≤ 2`),
//! * Lepin exponent `p_L = (n−4)/(n−10)` (unbounded for `n ≤ 10`).
//!
//! For `n > 2` the ladder is ordered `p_F < p_sg < p_S < p_JL` with
//! `p_JL* ∈ (p_sg, p_S)`, and `p_JL < p_L` for `n > 10`.

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A critical exponent that may be genuinely infinite.
///
/// Unbounded exponents are a dedicated variant, never a large float, so that
/// comparisons against them are total and serialization is unambiguous: a
/// finite exponent serializes as a JSON number, an unbounded one as the
/// string `"inf"`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    /// A finite exponent value.
    Finite(f64),
    /// `+∞` by convention (the threshold never occurs in this dimension).
    Unbounded,
}

impl Exponent {
    /// The finite value, if any.
    pub fn finite(self) -> Option<f64> {
        match self {
            Exponent::Finite(v) => Some(v),
            Exponent::Unbounded => None,
        }
    }

    /// Whether this exponent is the `+∞` convention.
    pub fn is_unbounded(self) -> bool {
        matches!(self, Exponent::Unbounded)
    }

    /// Total comparison against a finite number: `Unbounded` exceeds every
    /// finite value.
    pub fn gt(self, x: f64) -> bool {
        match self {
            Exponent::Finite(v) => v > x,
            Exponent::Unbounded => true,
        }
    }

    /// `self ≤ x` with `Unbounded` exceeding every finite value.
    pub fn le(self, x: f64) -> bool {
        !self.gt(x)
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        use std::cmp::Ordering;
        match (self, other) {
            (Exponent::Unbounded, Exponent::Unbounded) => Some(Ordering::Equal),
            (Exponent::Unbounded, Exponent::Finite(_)) => Some(Ordering::Greater),
            (Exponent::Finite(_), Exponent::Unbounded) => Some(Ordering::Less),
            (Exponent::Finite(a), Exponent::Finite(b)) => a.partial_cmp(b),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Unbounded => serializer.serialize_str("inf"),
            Exponent::Finite(v) => {
                // Integral exponents print as JSON integers (`7`, not `7.0`)
                // for stable, minimal output.
                if v.fract() == 0.0 && v.abs() < 9.0e15 {
                    serializer.serialize_i64(*v as i64)
                } else {
                    serializer.serialize_f64(*v)
                }
            }
        }
    }
}

struct ExponentVisitor;

impl Visitor<'_> for ExponentVisitor {
    type Value = Exponent;

    fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
        write!(f, "a number or the string \"inf\"")
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Exponent, E> {
        Ok(Exponent::Finite(v))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Exponent, E> {
        Ok(Exponent::Finite(v as f64))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Exponent, E> {
        Ok(Exponent::Finite(v as f64))
    }

    fn visit_str<E: de::Error>(self, s: &str) -> std::result::Result<Exponent, E> {
        if s == "inf" {
            Ok(Exponent::Unbounded)
        } else {
            Err(E::invalid_value(de::Unexpected::Str(s), &self))
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        d.deserialize_any(ExponentVisitor)
    }
}

/// The six critical exponents for one spatial dimension.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentTable {
    /// Spatial dimension the table was computed for.
    pub n: f64,
    /// Fujita exponent `1 + 2/n`.
    #[serde(rename = "p_F")]
    pub fujita: Exponent,
    /// Singular exponent `n/(n−2)`; threshold for the singular steady state.
    #[serde(rename = "p_sg")]
    pub singular: Exponent,
    /// Sobolev exponent `(n+2)/(n−2)`; sign change of `β`.
    #[serde(rename = "p_S")]
    pub sobolev: Exponent,
    /// Joseph–Lundgren exponent; the indicial discriminant vanishes here.
    #[serde(rename = "p_JL")]
    pub joseph_lundgren: Exponent,
    /// Dual Joseph–Lundgren exponent `1 + 4/(n−4+2√(n−1))`.
    #[serde(rename = "p_JL_star")]
    pub joseph_lundgren_dual: Exponent,
    /// Lepin exponent `(n−4)/(n−10)`.
    #[serde(rename = "p_L")]
    pub lepin: Exponent,
}

fn check_dimension(n: f64) -> Result<()> {
    if !n.is_finite() || n < 1.0 {
        return Err(Error::InvalidDimension(n));
    }
    Ok(())
}

fn check_exponent(p: f64) -> Result<()> {
    if !p.is_finite() || p <= 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    Ok(())
}

/// Computes the full critical-exponent ladder for dimension `n ≥ 1`.
///
/// `n` is accepted as a real parameter: every formula is closed-form in `n`,
/// which allows root-finding in continuous `(n, p)`. Integer dimensions are
/// the common case and the CLI restricts to them by default.
pub fn exponent_table(n: f64) -> Result<ExponentTable> {
    check_dimension(n)?;
    let fujita = Exponent::Finite(1.0 + 2.0 / n);
    let (singular, sobolev) = if n > 2.0 {
        (
            Exponent::Finite(n / (n - 2.0)),
            Exponent::Finite((n + 2.0) / (n - 2.0)),
        )
    } else {
        (Exponent::Unbounded, Exponent::Unbounded)
    };
    let joseph_lundgren = if n > 10.0 {
        Exponent::Finite(1.0 + 4.0 / (n - 4.0 - 2.0 * (n - 1.0).sqrt()))
    } else {
        Exponent::Unbounded
    };
    let joseph_lundgren_dual = if n > 2.0 {
        Exponent::Finite(1.0 + 4.0 / (n - 4.0 + 2.0 * (n - 1.0).sqrt()))
    } else {
        // The defining denominator is ≤ 0 for n ≤ 2; the threshold never
        // occurs, matching the convention for the other exponents.
        Exponent::Unbounded
    };
    let lepin = if n > 10.0 {
        Exponent::Finite((n - 4.0) / (n - 10.0))
    } else {
        Exponent::Unbounded
    };
    Ok(ExponentTable {
        n,
        fujita,
        singular,
        sobolev,
        joseph_lundgren,
        joseph_lundgren_dual,
        lepin,
    })
}

/// The parameter pair `(n, p)` with every derived profile constant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Params {
    /// Spatial dimension.
    pub n: f64,
    /// Nonlinearity exponent, `p > 1`.
    pub p: f64,
    /// Decay rate `α = 2/(p−1)` of the singular solution.
    pub alpha: f64,
    /// Drift coefficient `β = ((n−2)p − (n+2))/(p−1) = n − 2 − 2α`.
    pub beta: f64,
    /// Potential coefficient `γ = 2((n−2)p − n)/(p−1)² = α(n−2−α)`.
    pub gamma: f64,
    /// Singular amplitude `L = γ^{1/(p−1)}`, defined only when `γ > 0`.
    #[serde(rename = "L")]
    pub singular_amplitude: Option<f64>,
    /// The constant backward profile `κ = (p−1)^{−1/(p−1)}`.
    pub kappa: f64,
}

impl Params {
    /// Builds the derived constants for `(n, p)`; see [`derived_constants`].
    pub fn new(n: f64, p: f64) -> Result<Self> {
        check_dimension(n)?;
        check_exponent(p)?;
        let alpha = 2.0 / (p - 1.0);
        let beta = ((n - 2.0) * p - (n + 2.0)) / (p - 1.0);
        let gamma = 2.0 * ((n - 2.0) * p - n) / ((p - 1.0) * (p - 1.0));
        let singular_amplitude = (gamma > 0.0).then(|| gamma.powf(1.0 / (p - 1.0)));
        let kappa = (p - 1.0).powf(-1.0 / (p - 1.0));
        Ok(Params {
            n,
            p,
            alpha,
            beta,
            gamma,
            singular_amplitude,
            kappa,
        })
    }

    /// The singular amplitude `L`, or an error when it is undefined
    /// (`p ≤ p_sg`, i.e. `γ ≤ 0`).
    pub fn singular_amplitude_checked(&self) -> Result<f64> {
        self.singular_amplitude
            .ok_or(Error::SingularAmplitudeUndefined {
                n: self.n,
                p: self.p,
            })
    }

    /// Whether the singular amplitude exists (`γ > 0`).
    pub fn has_singular_amplitude(&self) -> bool {
        self.singular_amplitude.is_some()
    }
}

/// Computes `α`, `β`, `γ`, `L`, `κ` for `(n, p)` with `n ≥ 1`, `p > 1`.
///
/// `L` is present iff `γ > 0` (equivalently `p > p_sg` with `n > 2`); `κ` is
/// always present. The algebraic identities `β = n − 2 − 2α` and
/// `γ = L^{p−1}` hold to floating-point accuracy and are enforced by tests.
pub fn derived_constants(n: f64, p: f64) -> Result<Params> {
    Params::new(n, p)
}

/// Sign of the drift coefficient `β`, reported with the regime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    /// `β < 0` (`p < p_S`).
    #[serde(rename = "-")]
    Negative,
    /// `β = 0` (`p = p_S`).
    #[serde(rename = "0")]
    Zero,
    /// `β > 0` (`p > p_S`).
    #[serde(rename = "+")]
    Positive,
}

impl Sign {
    fn of(x: f64) -> Sign {
        if x < 0.0 {
            Sign::Negative
        } else if x > 0.0 {
            Sign::Positive
        } else {
            Sign::Zero
        }
    }
}

/// Position of `p` in the exponent ladder.
///
/// The classification is total and mutually exclusive. A `p` exactly equal
/// to a critical exponent belongs to the regime **above** it, with one
/// exception: `p = p_S` gets its own [`RegimeTag::SobolevCritical`] tag,
/// because the Sobolev-critical case is structurally special (β = 0).
/// Equality is exact floating-point equality against the computed table
/// entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegimeTag {
    /// `p < p_F`.
    SubFujita,
    /// `p_F ≤ p < p_sg`.
    FujitaToSingular,
    /// `p_sg ≤ p < p_S`.
    SingularToSobolev,
    /// `p = p_S` exactly.
    SobolevCritical,
    /// `p_S < p < p_JL`.
    SobolevToJosephLundgren,
    /// `p_JL ≤ p < p_L`.
    JosephLundgrenToLepin,
    /// `p ≥ p_L`.
    AboveLepin,
}

/// Regime classification of `(n, p)` with the derived flags.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Regime {
    /// Where `p` sits in the ladder.
    pub tag: RegimeTag,
    /// Whether the singular amplitude `L` exists (`γ > 0`).
    pub has_singular_amplitude: bool,
    /// Sign of the drift coefficient `β`.
    pub beta_sign: Sign,
}

/// Classifies `p` against the exponent ladder for dimension `n`.
pub fn classify_regime(n: f64, p: f64) -> Result<Regime> {
    let table = exponent_table(n)?;
    check_exponent(p)?;
    let params = Params::new(n, p)?;
    let tag = if table.fujita.gt(p) {
        RegimeTag::SubFujita
    } else if table.singular.gt(p) {
        RegimeTag::FujitaToSingular
    } else if table.sobolev == Exponent::Finite(p) {
        RegimeTag::SobolevCritical
    } else if table.sobolev.gt(p) {
        RegimeTag::SingularToSobolev
    } else if table.joseph_lundgren.gt(p) {
        RegimeTag::SobolevToJosephLundgren
    } else if table.lepin.gt(p) {
        RegimeTag::JosephLundgrenToLepin
    } else {
        RegimeTag::AboveLepin
    };
    Ok(Regime {
        tag,
        has_singular_amplitude: params.has_singular_amplitude(),
        beta_sign: Sign::of(params.beta),
    })
}

/// Roots of the indicial polynomial `μ² + βμ + 2(n−2−α) = 0` of the
/// linearization around the singular solution in scaled variables.
///
/// The constant term `2(n−2−α)` equals `(p−1)γ` (enforced internally).
/// Solutions of the linearized equation behave like `r^μ` near `r = 0` and
/// the roots are expansion exponents of perturbations of `v ≡ L`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum IndicialRoots {
    /// Two real roots, sorted by value descending (`slow ≥ fast`); both are
    /// negative exactly when `p ≥ p_JL` (for `n > 10`).
    Real {
        /// The larger root `(−β + √disc)/2` (slower decay toward `r = 0`).
        slow: f64,
        /// The smaller root `(−β − √disc)/2`.
        fast: f64,
    },
    /// A complex-conjugate pair `real ± i·imag` (`imag > 0`), occurring for
    /// `p_JL* < p < p_JL`.
    Complex {
        /// Common real part `−β/2`.
        real: f64,
        /// Positive imaginary part `√(−disc)/2`.
        imag: f64,
    },
}

/// The indicial discriminant `β² − 8(n−2−α)` whose zeros in `p` are
/// exactly `p_JL*` and `p_JL`.
pub fn indicial_discriminant(n: f64, p: f64) -> Result<f64> {
    let params = Params::new(n, p)?;
    params.singular_amplitude_checked()?;
    Ok(params.beta * params.beta - 8.0 * (n - 2.0 - params.alpha))
}

/// Solves the indicial polynomial `μ² + βμ + 2(n−2−α) = 0`.
///
/// Requires `p > p_sg` so the singular solution (and hence the linearization
/// around it) exists.
pub fn indicial_roots(n: f64, p: f64) -> Result<IndicialRoots> {
    let params = Params::new(n, p)?;
    params.singular_amplitude_checked()?;
    let beta = params.beta;
    let c0 = 2.0 * (n - 2.0 - params.alpha);
    // Internal cross-check: the constant term has the equivalent closed form
    // (p−1)γ; both are evaluated and must agree to rounding error.
    let c0_alt = (p - 1.0) * params.gamma;
    assert!(
        (c0 - c0_alt).abs() <= 1e-12 * c0.abs().max(1.0),
        "indicial constant-term forms disagree: {c0} vs {c0_alt}"
    );
    let disc = beta * beta - 4.0 * c0;
    if disc >= 0.0 {
        let sq = disc.sqrt();
        Ok(IndicialRoots::Real {
            slow: (-beta + sq) / 2.0,
            fast: (-beta - sq) / 2.0,
        })
    } else {
        Ok(IndicialRoots::Complex {
            real: -beta / 2.0,
            imag: (-disc).sqrt() / 2.0,
        })
    }
}

/// Recovers the Joseph–Lundgren exponent as the zero of the indicial
/// discriminant on `(p_S, ∞)`, by deterministic bisection.
///
/// This is an independent route to `p_JL`: the closed form never enters.
/// Only `n > 10` has such a zero; smaller dimensions return
/// [`Error::NoDiscriminantRoot`].
pub fn joseph_lundgren_by_discriminant(n: f64) -> Result<f64> {
    check_dimension(n)?;
    if n <= 10.0 {
        return Err(Error::NoDiscriminantRoot { n });
    }
    let p_s = (n + 2.0) / (n - 2.0);
    // disc(p_S) = −4(n−2) < 0; disc → (n−2)(n−10) > 0 as p → ∞.
    let mut lo = p_s * (1.0 + 1e-9);
    let mut hi = p_s * 2.0;
    let mut expand = 0;
    while indicial_discriminant(n, hi)? <= 0.0 {
        hi *= 2.0;
        expand += 1;
        assert!(expand < 60, "discriminant failed to turn positive");
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if indicial_discriminant(n, mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The four comparison roots used to sandwich scaled profiles between
/// sub- and supersolutions `r^a`:
///
/// `a_1^± = α − ((n−2) − √((n−2)² ∓ 4ε))/2`,
/// `a_2^± = α − ((n−2) + √((n−2)² ∓ 4ε))/2`.
///
/// As `ε → 0`, `a_1^± → α` and `a_2^± → α − (n−2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRoots {
    /// `a_1^+`: slightly below `α` for `ε > 0`.
    pub a1_plus: f64,
    /// `a_1^−`: slightly above `α` for `ε > 0`.
    pub a1_minus: f64,
    /// `a_2^+`: near `α − (n−2)`.
    pub a2_plus: f64,
    /// `a_2^−`: near `α − (n−2)`.
    pub a2_minus: f64,
}

/// Computes the comparison roots for a shift `0 ≤ eps ≤ (n−2)²/4`.
pub fn comparison_roots(n: f64, p: f64, eps: f64) -> Result<ComparisonRoots> {
    let params = Params::new(n, p)?;
    let alpha = params.alpha;
    let max = (n - 2.0) * (n - 2.0) / 4.0;
    if !eps.is_finite() || eps < 0.0 || 4.0 * eps > (n - 2.0) * (n - 2.0) {
        return Err(Error::ComparisonShiftOutOfRange { n, eps, max });
    }
    let sq_plus = ((n - 2.0) * (n - 2.0) - 4.0 * eps).sqrt();
    let sq_minus = ((n - 2.0) * (n - 2.0) + 4.0 * eps).sqrt();
    Ok(ComparisonRoots {
        a1_plus: alpha - ((n - 2.0) - sq_plus) / 2.0,
        a1_minus: alpha - ((n - 2.0) - sq_minus) / 2.0,
        a2_plus: alpha - ((n - 2.0) + sq_plus) / 2.0,
        a2_minus: alpha - ((n - 2.0) + sq_minus) / 2.0,
    })
}
