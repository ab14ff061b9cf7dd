//! Decay schedules for the penalty strength in annealed runs.

use crate::math;

/// Time profile of the penalty strength `alpha_t`.
///
/// The non-constant variants decrease strictly to 0 with derivative tending
/// to 0, which is what the ergodicity of the annealed chain needs. The
/// logarithmic schedule is normalized so that `alpha_0 = 1` exactly:
///
/// ```text
/// alpha_t = (3 pi / 2) / ln(e^{3 pi / 2} + p t),
/// ```
///
/// and its reciprocal `beta_t = 1 / alpha_t` grows logarithmically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Schedule {
    Constant(f64),
    /// `alpha_t = scale * exp(-rate * t)`.
    Exponential { scale: f64, rate: f64 },
    /// Logarithmic decay with speed knob `p > 0`.
    Logarithmic { p: f64 },
}

/// `3 pi / 2`, the exponent scale of the logarithmic schedule.
pub const LOG_SCHEDULE_EXPONENT: f64 = 3.0 * core::f64::consts::PI / 2.0;

impl Schedule {
    /// Validate the parameter ranges (`alpha >= 0`, decay rates positive).
    pub fn validate(&self) -> Result<(), &'static str> {
        match *self {
            Self::Constant(a) if a.is_finite() && a >= 0.0 => Ok(()),
            Self::Constant(_) => Err("constant schedule needs alpha >= 0"),
            Self::Exponential { scale, rate } if scale >= 0.0 && rate > 0.0 => Ok(()),
            Self::Exponential { .. } => Err("exponential schedule needs scale >= 0 and rate > 0"),
            Self::Logarithmic { p } if p > 0.0 => Ok(()),
            Self::Logarithmic { .. } => Err("logarithmic schedule needs p > 0"),
        }
    }

    /// Penalty strength at time `t >= 0`.
    pub fn alpha(&self, t: f64) -> f64 {
        match *self {
            Self::Constant(a) => a,
            Self::Exponential { scale, rate } => scale * math::exp(-rate * t),
            Self::Logarithmic { p } => {
                LOG_SCHEDULE_EXPONENT / math::ln(math::exp(LOG_SCHEDULE_EXPONENT) + p * t)
            }
        }
    }

    /// Reciprocal strength `beta_t = 1 / alpha_t`.
    pub fn beta(&self, t: f64) -> f64 {
        1.0 / self.alpha(t)
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Self::Constant(_))
    }
}

/// Speed knob for the logarithmic schedule derived from model scale:
/// `p = pi K / M` with `M = C * max(ln(states), energy_range)`.
///
/// `K` is the model's gap-decay constant and `C` an unspecified universal
/// constant kept explicit as a caller knob (default 1). Returns `(p, M)`.
pub fn schedule_p_from_model(k: f64, energy_range: f64, state_count: u64, c_const: f64) -> (f64, f64) {
    let m = c_const * math::max(math::ln(state_count as f64), energy_range);
    (core::f64::consts::PI * k / m, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn logarithmic_starts_at_one() {
        let s = Schedule::Logarithmic { p: 3.7 };
        assert!((s.alpha(0.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn exponential_starts_at_scale() {
        let s = Schedule::Exponential { scale: 1.0, rate: 1.0 };
        assert_eq!(s.alpha(0.0), 1.0);
    }

    #[test]
    fn logarithmic_beta_doubles_at_closed_form_time() {
        // At t = e^{3 pi} - e^{3 pi / 2} with p = 1 the log doubles, so
        // beta = 2 and alpha = 1/2.
        let s = Schedule::Logarithmic { p: 1.0 };
        let t = (3.0 * PI).exp() - (1.5 * PI).exp();
        assert!((s.beta(t) - 2.0).abs() < 1e-12);
        assert!((s.alpha(t) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn schedules_decrease_to_zero() {
        for s in [
            Schedule::Exponential { scale: 2.0, rate: 0.01 },
            Schedule::Logarithmic { p: 0.3 },
        ] {
            let mut prev = f64::INFINITY;
            for k in 0..60 {
                let a = s.alpha((k as f64) * 50.0);
                assert!(a >= 0.0 && a < prev);
                prev = a;
            }
        }
        let exp = Schedule::Exponential { scale: 2.0, rate: 0.01 };
        assert!(exp.alpha(1e6) < 1e-12);
    }

    #[test]
    fn p_from_model_examples() {
        let (p, m) = schedule_p_from_model(1.0, 1.0, 2, 1.0);
        assert_eq!(m, 1.0); // max(ln 2, 1) = 1
        assert!((p - PI).abs() < 1e-15);

        // Doubling C halves p.
        let (p2, _) = schedule_p_from_model(1.0, 1.0, 2, 2.0);
        assert!((p2 - p / 2.0).abs() < 1e-15);

        // Large energy range takes the max branch.
        let (_, m3) = schedule_p_from_model(1.0, 100.0, 2, 1.0);
        assert_eq!(m3, 100.0);
    }

    #[test]
    fn validation() {
        assert!(Schedule::Constant(0.0).validate().is_ok());
        assert!(Schedule::Constant(-1.0).validate().is_err());
        assert!(Schedule::Exponential { scale: 1.0, rate: 0.0 }.validate().is_err());
        assert!(Schedule::Logarithmic { p: 0.0 }.validate().is_err());
    }
}
