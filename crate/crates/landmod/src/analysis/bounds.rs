//! Closed-form spectral and mixing bounds.

use alloc::vec::Vec;

use super::{build_generator, spectral_gap, AnalysisError};
use crate::landscape::{LandscapeParams, PenaltyFunction};
use crate::math;
use crate::models::ModelSpec;
use crate::sim::LOG_SCHEDULE_EXPONENT;

/// Spectral-gap lower bound by measure-perturbation stability:
/// `proposal_gap * e^{-3 * max_mod_energy}`, where `max_mod_energy` is the
/// maximum of the transformed energy (whose minimum is 0).
pub fn holley_stroock_bound(proposal_gap: f64, max_mod_energy: f64) -> f64 {
    proposal_gap * math::exp(-3.0 * max_mod_energy)
}

/// Specialization for spin models with the quadratic penalty and threshold
/// `delta` above the ground energy: the transform is capped by
/// `delta + pi / (2 sqrt(alpha))`, giving
/// `proposal_gap * e^{-3 delta - 3 pi / (2 sqrt(alpha))}` independently of
/// the system size.
pub fn spin_gap_bound_quadratic(proposal_gap: f64, delta: f64, alpha: f64) -> f64 {
    holley_stroock_bound(proposal_gap, delta + core::f64::consts::PI / (2.0 * math::sqrt(alpha)))
}

/// Mixing-time bound of the logarithmically annealed chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixingBound {
    /// Scale constant `M = C * max(ln |X|, H_max - H_min)`.
    pub m_value: f64,
    /// Schedule speed `p = pi K / M`.
    pub p: f64,
    /// The bracketed factor `exp{..} - e^{3 pi / 2}`, before dividing by `p`.
    pub bracket: f64,
    /// The bound itself (up to the universal constant kept inside `M`).
    pub value: f64,
}

/// Evaluate the annealed mixing-time bound
///
/// ```text
/// (1/p) * (exp{3 pi (ln |X| + M + ln(1/eps)) / (2 M)} - e^{3 pi / 2})
/// ```
///
/// with `M = c_const * max(ln |X|, h_range)` and `p = pi K / M`. The
/// unspecified universal constant stays explicit as `c_const`.
pub fn annealed_mixing_time_bound(
    state_count: u64,
    h_range: f64,
    k: f64,
    c_const: f64,
    eps: f64,
) -> MixingBound {
    let ln_states = math::ln(state_count as f64);
    let m_value = c_const * math::max(ln_states, h_range);
    let p = core::f64::consts::PI * k / m_value;
    let exponent = LOG_SCHEDULE_EXPONENT * (ln_states + m_value + math::ln(1.0 / eps)) / m_value;
    let bracket = math::exp(exponent) - math::exp(LOG_SCHEDULE_EXPONENT);
    MixingBound { m_value, p, bracket, value: bracket / p }
}

/// Gap-decay certificate of a model under the quadratic penalty.
#[derive(Debug, Clone, PartialEq)]
pub struct GapDecay {
    /// Largest `K` with `gap(beta) >= K e^{-(3 pi / 2) sqrt(beta)}` at
    /// every grid point.
    pub k: f64,
    /// Per-point data `(beta, gap, gap * e^{(3 pi / 2) sqrt(beta)})`.
    pub per_beta: Vec<(f64, f64, f64)>,
}

/// Sweep `beta = 1 / alpha` over a grid, computing the exact spectral gap
/// of the quadratic-penalty chain and the largest constant `K` certified
/// on the grid.
pub fn gap_decay_constant(
    model: &(impl ModelSpec + ?Sized),
    c: f64,
    beta_grid: &[f64],
    cap: u64,
) -> Result<GapDecay, AnalysisError> {
    let mut per_beta = Vec::with_capacity(beta_grid.len());
    let mut k = f64::INFINITY;
    for &beta in beta_grid {
        let params = LandscapeParams::new(1.0 / beta, c, PenaltyFunction::Quadratic)
            .map_err(AnalysisError::Landscape)?;
        let g = build_generator(model, &params, cap)?;
        let gap = spectral_gap(&g)?;
        let k_beta = gap * math::exp(LOG_SCHEDULE_EXPONENT * math::sqrt(beta));
        k = math::min(k, k_beta);
        per_beta.push((beta, gap, k_beta));
    }
    Ok(GapDecay { k, per_beta })
}

/// Exact ingredients of the Chernoff stopping time for an enumerable
/// model: the spectral gap of the modified chain, the partition-function
/// ratio `Z_f / Z_0 >= 1`, and the minimum of the modified stationary law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChernoffInputs {
    pub gap: f64,
    pub z_ratio: f64,
    pub min_pi_f: f64,
}

pub fn chernoff_inputs(
    model: &(impl ModelSpec + ?Sized),
    params: &LandscapeParams,
    cap: u64,
) -> Result<ChernoffInputs, AnalysisError> {
    let g = build_generator(model, params, cap)?;
    let gap = spectral_gap(&g)?;
    // Z_f / Z_0 over the common reference: sums of e^{-psi} vs
    // e^{-(H - H_min)}.
    let (h_min, _) = g.energy_range();
    let zf: f64 = g.mod_energies().iter().map(|&e| math::exp(-e)).sum();
    let z0: f64 = g.energies().iter().map(|&h| math::exp(-(h - h_min))).sum();
    Ok(ChernoffInputs { gap, z_ratio: zf / z0, min_pi_f: g.stationary().min() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{reference, IsingModel, DENSE_CAP};

    #[test]
    fn holley_stroock_example() {
        // proposal gap 2/4, delta 0.1, alpha = 9 pi^2 / 4 so the cap term is 1.
        let alpha = 9.0 * core::f64::consts::PI * core::f64::consts::PI / 4.0;
        let bound = spin_gap_bound_quadratic(0.5, 0.1, alpha);
        assert!((bound - 0.5 * (-1.3f64).exp()).abs() < 1e-12);
        assert!((bound - 0.13627).abs() < 5e-6);
    }

    #[test]
    fn spin_bound_approaches_proposal_gap() {
        let b = spin_gap_bound_quadratic(0.5, 1e-12, 1e18);
        assert!((b - 0.5).abs() < 1e-6);
    }

    #[test]
    fn exact_gap_dominates_bound_on_small_ising() {
        let m = IsingModel::hypercube(2, 1.0, 1.0).unwrap();
        let ground = m.ground().unwrap().1;
        let delta = 0.5;
        let alpha = 1.0;
        let params =
            LandscapeParams::new(alpha, ground + delta, PenaltyFunction::Quadratic).unwrap();
        let g = build_generator(&m, &params, DENSE_CAP).unwrap();
        let gap = spectral_gap(&g).unwrap();
        let bound = spin_gap_bound_quadratic(m.proposal_gap(), delta, alpha);
        assert!(gap >= bound, "gap {gap} below bound {bound}");
        // The generic form with the exact max transformed energy also holds
        // and is at least as sharp.
        let max_mod = g.mod_energies().iter().fold(0.0f64, |a, &b| a.max(b));
        let generic = holley_stroock_bound(m.proposal_gap(), max_mod);
        assert!(gap >= generic && generic >= bound);
    }

    #[test]
    fn quadratic_bound_uniform_over_penalty_strengths() {
        // With c = ground + delta the bound stays positive uniformly in
        // alpha and increases toward proposal_gap * e^{-3 delta} as
        // alpha -> infinity; the exact gap dominates it on the whole grid.
        let m = IsingModel::hypercube(2, 1.0, 1.0).unwrap();
        let ground = m.ground().unwrap().1;
        let delta = 0.3;
        let mut prev_bound = 0.0;
        for alpha in [0.5, 1.0, 10.0, 100.0, 1e4] {
            let params =
                LandscapeParams::new(alpha, ground + delta, PenaltyFunction::Quadratic).unwrap();
            let gap = spectral_gap(&build_generator(&m, &params, DENSE_CAP).unwrap()).unwrap();
            let bound = spin_gap_bound_quadratic(m.proposal_gap(), delta, alpha);
            assert!(bound > prev_bound);
            assert!(gap >= bound, "alpha {alpha}: gap {gap} < bound {bound}");
            prev_bound = bound;
        }
        let limit = m.proposal_gap() * (-3.0 * delta).exp();
        assert!(prev_bound < limit && prev_bound > 0.95 * limit);
    }

    #[test]
    fn mixing_bound_limits() {
        // Huge M: the exponent tends to 3 pi / 2 and the bracket to 0+.
        let b = annealed_mixing_time_bound(2, 1e9, 1.0, 1.0, 0.1);
        assert!(b.bracket > 0.0 && b.bracket < 1e-2);

        // Doubling K halves the bound.
        let b1 = annealed_mixing_time_bound(32, 4.0, 1.0, 1.0, 0.05);
        let b2 = annealed_mixing_time_bound(32, 4.0, 2.0, 1.0, 0.05);
        assert!((b1.value / b2.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn mixing_bound_matches_schedule_inversion() {
        // Independent route: the bound is the time at which the annealed
        // TV expression |X| e^{M} e^{-M beta_t} crosses eps, found by
        // bisection on t.
        let (states, h_range, k, c_const, eps) = (2u64, 1.0, 1.0, 1.0, 0.1);
        let b = annealed_mixing_time_bound(states, h_range, k, c_const, eps);
        let schedule = crate::sim::Schedule::Logarithmic { p: b.p };
        let target =
            |t: f64| (states as f64) * (b.m_value - b.m_value * schedule.beta(t)).exp() - eps;
        let (mut lo, mut hi) = (0.0f64, 1e12f64);
        assert!(target(lo) > 0.0 && target(hi) < 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if target(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let crossing = 0.5 * (lo + hi);
        assert!(
            (crossing - b.value).abs() < 1e-6 * b.value.max(1.0),
            "bisection {crossing} vs closed form {}",
            b.value
        );
    }

    #[test]
    fn gap_decay_on_reference_models() {
        let m = reference::three_state_path();
        let grid = [1.0, 2.0, 4.0, 10.0];
        let gd = gap_decay_constant(&m, 0.5, &grid, DENSE_CAP).unwrap();
        assert!(gd.k > 0.0);
        // Certification: every grid point satisfies the inequality.
        for &(beta, gap, _) in &gd.per_beta {
            assert!(gap >= gd.k * (-LOG_SCHEDULE_EXPONENT * beta.sqrt()).exp() - 1e-15);
        }
        // Singleton grid returns that point's constant.
        let single = gap_decay_constant(&m, 0.5, &[4.0], DENSE_CAP).unwrap();
        assert_eq!(single.k, single.per_beta[0].2);
    }

    #[test]
    fn chernoff_inputs_sane() {
        let m = reference::double_well_five();
        let params = LandscapeParams::new(1.0, 1.0, PenaltyFunction::Quadratic).unwrap();
        let ci = chernoff_inputs(&m, &params, DENSE_CAP).unwrap();
        assert!(ci.gap > 0.0);
        assert!(ci.z_ratio >= 1.0); // psi <= H - H_min pointwise
        assert!(ci.min_pi_f > 0.0 && ci.min_pi_f < 1.0);
    }
}
