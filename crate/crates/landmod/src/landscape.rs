//! The landscape transform `psi`, its closed forms, and the derived
//! acceptance and reweighting factors.
//!
//! For a penalty function `f` (non-negative, non-decreasing, `f(0) = 0`),
//! threshold `c`, and penalty strength `alpha >= 0`, the transform of an
//! energy value `v` relative to a reference floor `h_min` is
//!
//! ```text
//! psi(v) = ∫_{h_min}^{v} du / (alpha * f((u - c)+) + 1).
//! ```
//!
//! Below the threshold the integrand is 1, so `psi` is the identity shifted
//! by `h_min`; above it the integrand drops below 1 and energies are damped.
//! `psi` is strictly increasing, `psi(h_min) = 0`, and `psi(v) <= v - h_min`
//! with equality iff `v <= c` or `alpha = 0`.
//!
//! Three penalties admit closed-form tails (the integral from `c` up):
//! logarithmic growth for `f(x) = x`, an arctangent for `f(x) = x^2`
//! (bounded by `pi / (2 sqrt(alpha))`, which is what caps barrier heights
//! independently of the model), and a log-of-exponentials expression for
//! `f(x) = e^x - 1`. Everything here is arbitrated by [`quadrature_oracle`],
//! an adaptive-Simpson integration of the defining integrand.
//!
//! Energy *differences* of the transform do not need `h_min`:
//!
//! ```text
//! psi(h_y) - psi(h_x) = ∫_{h_x}^{h_y} du / (alpha * f((u - c)+) + 1),
//! ```
//!
//! which is why simulation ([`energy_delta`], [`acceptance_factor`]) and
//! bias correction ([`weight`]) work without knowing the global minimum.

use crate::math;

/// Absolute tolerance of the arbitration quadrature.
pub const ORACLE_TOL: f64 = 1e-12;

/// Recursion cap for adaptive Simpson refinement.
pub const QUAD_MAX_DEPTH: u32 = 60;

// Width of the series branch around alpha = 1 in the exponential tail. The
// cubic series truncates below 1e-12 inside this window while the direct
// formula keeps its cancellation error below ~5e-12 outside it.
const EXP_SERIES_CUT: f64 = 1e-3;

/// Errors from the landscape operations.
#[derive(Debug, Clone, PartialEq)]
pub enum LandscapeError {
    /// Energy argument below the reference floor `h_min`.
    BelowReference { value: f64, h_min: f64 },
    /// Adaptive quadrature failed to meet its tolerance before the depth cap.
    Quadrature { residual: f64 },
    /// Penalty strength must satisfy `alpha >= 0` and be finite.
    InvalidAlpha(f64),
    /// A penalty function violating `f(0) = 0`, non-negativity, or
    /// monotonicity on the sampled grid.
    InvalidPenalty(&'static str),
    /// Threshold outside `[h_min, h_max]` of the attached model.
    ThresholdOutOfRange { c: f64, h_min: f64, h_max: f64 },
    /// Operation specific to the exponential penalty called with another
    /// variant.
    NotExponential,
    /// The unshifted exponential form has a pole where
    /// `alpha * (e^u - 1) + 1 <= 0`; its integrand is undefined there.
    UnshiftedPole { at: f64 },
}

impl core::fmt::Display for LandscapeError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Self::BelowReference { value, h_min } => {
                write!(f, "energy {value} below reference floor {h_min}")
            }
            Self::Quadrature { residual } => {
                write!(f, "quadrature did not converge (residual estimate {residual:e})")
            }
            Self::InvalidAlpha(a) => write!(f, "penalty strength alpha = {a} must be finite and >= 0"),
            Self::InvalidPenalty(why) => write!(f, "invalid penalty function: {why}"),
            Self::ThresholdOutOfRange { c, h_min, h_max } => {
                write!(f, "threshold c = {c} outside energy range [{h_min}, {h_max}]")
            }
            Self::NotExponential => write!(f, "operation requires the exp-minus-one penalty"),
            Self::UnshiftedPole { at } => {
                write!(f, "unshifted exponential integrand has a pole at u = {at}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for LandscapeError {}

/// Penalty function `f` applied to the energy excess above the threshold.
#[derive(Debug, Clone, Copy)]
pub enum PenaltyFunction {
    /// `f = 0`: every quantity coincides with the classical chain.
    Zero,
    /// `f(x) = x`.
    Linear,
    /// `f(x) = x^2`.
    Quadratic,
    /// `f(x) = e^x - 1`.
    ExpMinusOne,
    /// User-supplied pointwise evaluator, integrated by adaptive quadrature
    /// to the given absolute tolerance.
    Custom { f: fn(f64) -> f64, tol: f64 },
}

impl PenaltyFunction {
    /// Build a custom penalty, checking `f(0) = 0`, non-negativity, and
    /// monotonicity on a coarse sample of `[0, 8]`.
    pub fn custom(f: fn(f64) -> f64, tol: f64) -> Result<Self, LandscapeError> {
        if !(tol > 0.0) {
            return Err(LandscapeError::InvalidPenalty("quadrature tolerance must be positive"));
        }
        let pf = Self::Custom { f, tol };
        pf.validate(8.0)?;
        Ok(pf)
    }

    /// Evaluate `f(x)` for `x >= 0`.
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::Linear => x,
            Self::Quadratic => x * x,
            Self::ExpMinusOne => math::exp_m1(x),
            Self::Custom { f, .. } => f(x),
        }
    }

    /// Check `f(0) = 0`, `f >= 0`, and monotonicity on a sampled grid over
    /// `[0, max_excess]`. Built-in variants satisfy this by construction;
    /// the grid check matters for `Custom`.
    pub fn validate(&self, max_excess: f64) -> Result<(), LandscapeError> {
        if !matches!(self, Self::Custom { .. }) {
            return Ok(());
        }
        if math::abs(self.eval(0.0)) > 1e-12 {
            return Err(LandscapeError::InvalidPenalty("f(0) must be 0"));
        }
        let hi = math::max(max_excess, 1e-6);
        let samples = 64;
        let mut prev = 0.0;
        for k in 0..=samples {
            let x = hi * (k as f64) / (samples as f64);
            let y = self.eval(x);
            if !y.is_finite() || y < 0.0 {
                return Err(LandscapeError::InvalidPenalty("f must be finite and non-negative"));
            }
            if y < prev - 1e-12 * math::max(1.0, prev) {
                return Err(LandscapeError::InvalidPenalty("f must be non-decreasing"));
            }
            prev = y;
        }
        Ok(())
    }

    fn is_zero(&self) -> bool {
        matches!(self, Self::Zero)
    }
}

/// Provenance of a reference floor energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyProvenance {
    /// Minimum over an exhaustive state enumeration.
    ExactEnumeration,
    /// Analytically known ground-state energy of a built-in model.
    KnownGroundState,
    /// Caller-supplied value.
    UserSupplied,
}

/// The reference floor `h_min` together with where it came from.
///
/// Only the absolute form of the transform ([`psi`]) needs it; differences
/// and weights do not.
#[derive(Debug, Clone, Copy)]
pub struct EnergyRef {
    pub h_min: f64,
    pub provenance: EnergyProvenance,
}

impl EnergyRef {
    pub fn new(h_min: f64, provenance: EnergyProvenance) -> Self {
        Self { h_min, provenance }
    }

    pub fn user(h_min: f64) -> Self {
        Self::new(h_min, EnergyProvenance::UserSupplied)
    }
}

/// Threshold given either absolutely or as an offset above a reference
/// energy (typically the ground-state energy of the attached model).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold {
    Absolute(f64),
    GroundOffset(f64),
}

impl Threshold {
    /// Resolve to an absolute threshold given the reference energy.
    pub fn resolve(&self, reference: f64) -> f64 {
        match *self {
            Self::Absolute(c) => c,
            Self::GroundOffset(delta) => reference + delta,
        }
    }
}

/// Parameter bundle `(alpha, c, f)` of the modified landscape.
///
/// The temperature field is carried for completeness but is fixed at 1;
/// all supported dynamics run at unit temperature.
#[derive(Debug, Clone, Copy)]
pub struct LandscapeParams {
    /// Penalty strength; `alpha = 0` recovers the classical chain.
    pub alpha: f64,
    /// Threshold energy above which damping activates.
    pub c: f64,
    /// Penalty function applied to the excess above `c`.
    pub f: PenaltyFunction,
    /// Fixed at 1.
    pub epsilon: f64,
}

impl LandscapeParams {
    pub fn new(alpha: f64, c: f64, f: PenaltyFunction) -> Result<Self, LandscapeError> {
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(LandscapeError::InvalidAlpha(alpha));
        }
        Ok(Self { alpha, c, f, epsilon: 1.0 })
    }

    /// Classical parameters: `alpha = 0`, penalty off.
    pub fn classical() -> Self {
        Self { alpha: 0.0, c: 0.0, f: PenaltyFunction::Zero, epsilon: 1.0 }
    }

    /// Same parameters with a different penalty strength.
    pub fn with_alpha(&self, alpha: f64) -> Self {
        Self { alpha, ..*self }
    }

    /// Whether the modification is inert (`alpha = 0` or `f = 0`).
    pub fn is_classical(&self) -> bool {
        self.alpha == 0.0 || self.f.is_zero()
    }

    /// Validate the threshold assumption `h_min <= c <= h_max` against an
    /// attached model's energy range, and re-check a custom penalty on the
    /// actual excess range. Deferred to this point because `c` is often
    /// specified as an offset above a model-dependent reference.
    pub fn validate_for_range(&self, h_min: f64, h_max: f64) -> Result<(), LandscapeError> {
        if !(self.c >= h_min && self.c <= h_max) {
            return Err(LandscapeError::ThresholdOutOfRange { c: self.c, h_min, h_max });
        }
        self.f.validate(math::max(h_max - self.c, 0.0))
    }
}

/// Integral of `1 / (alpha f(s) + 1)` over `[0, excess]`, in closed form
/// for the built-in penalties and by quadrature for custom ones.
///
/// This is the only place the penalty variants are distinguished; `psi`,
/// `energy_delta`, and `weight` are all assembled from it.
fn tail(excess: f64, params: &LandscapeParams) -> Result<f64, LandscapeError> {
    debug_assert!(excess >= 0.0);
    if excess == 0.0 {
        return Ok(0.0);
    }
    if params.is_classical() {
        return Ok(excess);
    }
    let a = params.alpha;
    match params.f {
        PenaltyFunction::Zero => Ok(excess),
        PenaltyFunction::Linear => Ok(math::ln_1p(a * excess) / a),
        PenaltyFunction::Quadratic => {
            let r = math::sqrt(a);
            Ok(math::atan(r * excess) / r)
        }
        PenaltyFunction::ExpMinusOne => Ok(exp_tail(excess, a)),
        PenaltyFunction::Custom { f, tol } => {
            let integrand = |s: f64| 1.0 / (a * f(s) + 1.0);
            let (value, residual, ok) = adaptive_simpson(&integrand, 0.0, excess, tol, QUAD_MAX_DEPTH);
            if ok {
                Ok(value)
            } else {
                Err(LandscapeError::Quadrature { residual })
            }
        }
    }
}

/// Like [`tail`] but infallible: custom-penalty quadrature returns its best
/// estimate at the depth cap instead of erroring. Used by the acceptance
/// and weight factors, which are total functions.
fn tail_lossy(excess: f64, params: &LandscapeParams) -> f64 {
    match tail(excess, params) {
        Ok(v) => v,
        Err(_) => {
            let a = params.alpha;
            if let PenaltyFunction::Custom { f, tol } = params.f {
                let integrand = |s: f64| 1.0 / (a * f(s) + 1.0);
                adaptive_simpson(&integrand, 0.0, excess, tol, QUAD_MAX_DEPTH).0
            } else {
                unreachable!("closed forms are total")
            }
        }
    }
}

/// Closed-form exponential-penalty tail `∫_0^x ds / (alpha e^s + 1 - alpha)`.
///
/// The direct expression `[ln(alpha e^x + 1 - alpha) - x] / (alpha - 1)` has
/// a removable singularity at `alpha = 1`; inside a window around it we use
/// the cubic expansion in `alpha - 1`, whose coefficients come from
/// differentiating the integral under the integral sign.
fn exp_tail(x: f64, alpha: f64) -> f64 {
    let eps = alpha - 1.0;
    if math::abs(eps) < EXP_SERIES_CUT {
        // E_m = (1 - e^{-m x}) / m
        let e1 = -math::exp_m1(-x);
        let e2 = -math::exp_m1(-2.0 * x) / 2.0;
        let e3 = -math::exp_m1(-3.0 * x) / 3.0;
        let e4 = -math::exp_m1(-4.0 * x) / 4.0;
        let t0 = e1;
        let t1 = -e1 + e2;
        let t2 = e1 - 2.0 * e2 + e3;
        let t3 = -e1 + 3.0 * e2 - 3.0 * e3 + e4;
        t0 + eps * (t1 + eps * (t2 + eps * t3))
    } else {
        (math::ln_1p(alpha * math::exp_m1(x)) - x) / eps
    }
}

/// The landscape transform `psi(v)` relative to `reference.h_min`.
///
/// Piecewise: the identity below the threshold, the damped tail above it.
/// Errors if `v` lies below the reference floor or if a custom-penalty
/// quadrature fails.
pub fn psi(v: f64, params: &LandscapeParams, reference: &EnergyRef) -> Result<f64, LandscapeError> {
    let h_min = reference.h_min;
    if v < h_min {
        return Err(LandscapeError::BelowReference { value: v, h_min });
    }
    let identity_part = math::max(0.0, math::min(v, params.c) - h_min);
    let above = tail(math::max(v - params.c, 0.0), params)?;
    let below_floor = tail(math::max(h_min - params.c, 0.0), params)?;
    Ok(identity_part + above - below_floor)
}

/// `psi(h_y) - psi(h_x)` computed without any reference floor.
///
/// Antisymmetric in its arguments and additive along chains of energies.
pub fn energy_delta(h_x: f64, h_y: f64, params: &LandscapeParams) -> Result<f64, LandscapeError> {
    Ok(anchored(h_y, params)? - anchored(h_x, params)?)
}

// min(h, c) + tail((h - c)+): an antiderivative of the damped integrand,
// anchored so that differences telescope without h_min.
fn anchored(h: f64, params: &LandscapeParams) -> Result<f64, LandscapeError> {
    Ok(math::min(h, params.c) + tail(math::max(h - params.c, 0.0), params)?)
}

fn anchored_lossy(h: f64, params: &LandscapeParams) -> f64 {
    math::min(h, params.c) + tail_lossy(math::max(h - params.c, 0.0), params)
}

/// Metropolis rate multiplier `exp(-(psi(h_y) - psi(h_x))+)` on the
/// modified landscape. Equals 1 whenever the move does not increase the
/// transformed energy.
pub fn acceptance_factor(h_x: f64, h_y: f64, params: &LandscapeParams) -> f64 {
    let delta = anchored_lossy(h_y, params) - anchored_lossy(h_x, params);
    math::exp(-math::max(delta, 0.0))
}

/// Reweighting factor `w(x) = exp(-(H(x) - H_min)) / exp(-psi(H(x)))`,
/// computed in the reference-free form
/// `exp(tail((h - c)+) - (h - c)+) <= 1`.
///
/// Exactly 1 when `h_x <= c` or the parameters are classical.
pub fn weight(h_x: f64, params: &LandscapeParams) -> f64 {
    let excess = math::max(h_x - params.c, 0.0);
    if excess == 0.0 || params.is_classical() {
        return 1.0;
    }
    math::exp(tail_lossy(excess, params) - excess)
}

/// Independent arbitration of the closed forms: adaptive Simpson
/// integration of the defining integrand from `reference.h_min` to `v`
/// with absolute tolerance [`ORACLE_TOL`].
pub fn quadrature_oracle(
    v: f64,
    params: &LandscapeParams,
    reference: &EnergyRef,
) -> Result<f64, LandscapeError> {
    let h_min = reference.h_min;
    if v < h_min {
        return Err(LandscapeError::BelowReference { value: v, h_min });
    }
    let a = params.alpha;
    let f = params.f;
    let integrand = |u: f64| 1.0 / (a * f.eval(math::max(u - params.c, 0.0)) + 1.0);
    // Split at the threshold: the integrand has a kink there.
    integrate_split(&integrand, h_min, v, params.c)
}

/// Variant transform where the exponential penalty takes the absolute
/// energy `u` as its argument instead of the excess `u - c`:
///
/// ```text
/// tail = ∫_c^v du / (alpha (e^u - 1) + 1).
/// ```
///
/// Kept opt-in for cross-checking against the default (shifted) form. Only
/// defined where the denominator stays positive on `[min(h_min, c), v]`,
/// which fails for sufficiently negative energies once `alpha >= 1`.
pub fn psi_unshifted_exp(
    v: f64,
    params: &LandscapeParams,
    reference: &EnergyRef,
) -> Result<f64, LandscapeError> {
    if !matches!(params.f, PenaltyFunction::ExpMinusOne) {
        return Err(LandscapeError::NotExponential);
    }
    let h_min = reference.h_min;
    if v < h_min {
        return Err(LandscapeError::BelowReference { value: v, h_min });
    }
    let identity_part = math::max(0.0, math::min(v, params.c) - h_min);
    let lo = math::max(h_min, params.c);
    if v <= params.c {
        return Ok(identity_part);
    }
    Ok(identity_part + unshifted_exp_tail(lo, v, params.alpha)?)
}

/// Quadrature arbitration of [`psi_unshifted_exp`].
pub fn quadrature_oracle_unshifted_exp(
    v: f64,
    params: &LandscapeParams,
    reference: &EnergyRef,
) -> Result<f64, LandscapeError> {
    if !matches!(params.f, PenaltyFunction::ExpMinusOne) {
        return Err(LandscapeError::NotExponential);
    }
    let h_min = reference.h_min;
    if v < h_min {
        return Err(LandscapeError::BelowReference { value: v, h_min });
    }
    let a = params.alpha;
    check_unshifted_domain(math::max(h_min, params.c), v, a)?;
    let c = params.c;
    let integrand = move |u: f64| {
        if u <= c {
            1.0
        } else {
            1.0 / (a * math::exp_m1(u) + 1.0)
        }
    };
    integrate_split(&integrand, h_min, v, c)
}

fn unshifted_exp_tail(lo: f64, hi: f64, alpha: f64) -> Result<f64, LandscapeError> {
    check_unshifted_domain(lo, hi, alpha)?;
    if alpha == 0.0 {
        return Ok(hi - lo);
    }
    let eps = alpha - 1.0;
    if math::abs(eps) < 1e-9 {
        // alpha -> 1 limit: ∫ e^{-u} du = e^{-lo} - e^{-hi}.
        return Ok(math::exp(-lo) - math::exp(-hi));
    }
    let g = |u: f64| (math::ln_1p(alpha * math::exp_m1(u)) - u) / eps;
    Ok(g(hi) - g(lo))
}

fn check_unshifted_domain(lo: f64, hi: f64, alpha: f64) -> Result<(), LandscapeError> {
    // Denominator 1 + alpha (e^u - 1) is increasing in u, so the infimum
    // over [lo, hi] sits at lo.
    let at = math::min(lo, hi);
    if 1.0 + alpha * math::exp_m1(at) <= 0.0 {
        return Err(LandscapeError::UnshiftedPole { at });
    }
    Ok(())
}

fn integrate_split(
    integrand: &impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    split: f64,
) -> Result<f64, LandscapeError> {
    let mid = math::min(math::max(split, lo), hi);
    let mut total = 0.0;
    let mut residual = 0.0;
    let mut ok = true;
    for (a, b) in [(lo, mid), (mid, hi)] {
        if b > a {
            let (v, r, piece_ok) = adaptive_simpson(integrand, a, b, ORACLE_TOL, QUAD_MAX_DEPTH);
            total += v;
            residual += r;
            ok &= piece_ok;
        }
    }
    if ok {
        Ok(total)
    } else {
        Err(LandscapeError::Quadrature { residual })
    }
}

/// Recursive adaptive Simpson with Richardson correction. Returns the
/// estimate, the accumulated residual estimate (sum of `|delta| / 15`
/// over accepted panels), and whether the requested absolute tolerance
/// was reached: panels that exhaust the depth cap — a kink pinned between
/// adjacent floats, say — feed the residual instead of failing outright,
/// and the verdict compares the total residual against `tol`.
fn adaptive_simpson(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
    max_depth: u32,
) -> (f64, f64, bool) {
    if a == b {
        return (0.0, 0.0, true);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let (value, residual, finite) = simpson_step(f, a, b, fa, fb, fm, whole, tol, max_depth);
    (value, residual, finite && residual <= tol)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> (f64, f64, bool) {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    let accept = math::abs(delta) <= 15.0 * tol      // Richardson budget met
        || !delta.is_finite()                         // poisoned; stop refining
        || depth == 0                                 // depth cap: report, don't fail
        || lm <= a || rm <= m;                        // below float resolution
    if accept {
        return (left + right + delta / 15.0, math::abs(delta) / 15.0, delta.is_finite());
    }
    let (lv, lr, lok) = simpson_step(f, a, m, fa, fm, flm, left, 0.5 * tol, depth - 1);
    let (rv, rr, rok) = simpson_step(f, m, b, fm, fb, frm, right, 0.5 * tol, depth - 1);
    (lv + rv, lr + rr, lok && rok)
}
