//! Exact linear-algebra and combinatorial analysis for enumerable models:
//! dense generators, stationary laws, spectral gaps, total-variation
//! curves, critical heights, and the closed-form bounds connecting them.
//!
//! Everything here is deterministic and exact up to floating point; the
//! simulation module is never consulted except by the replica experiment
//! at the bottom, whose randomness is seed-split and documented.

mod bounds;
mod eigen;
mod experiments;
mod heights;

pub use bounds::{
    annealed_mixing_time_bound, chernoff_inputs, gap_decay_constant, holley_stroock_bound,
    spin_gap_bound_quadratic, ChernoffInputs, GapDecay, MixingBound,
};
pub use experiments::{annealed_tv_experiment, AnnealedTv, AnnealedTvPoint};
pub use heights::{
    bottleneck_elevation, bottleneck_elevation_with, critical_height, critical_height_by_paths,
    minimax_elevation_by_paths, CriticalHeight,
};

pub(crate) use eigen::Mat;

use alloc::vec::Vec;

use crate::landscape::{acceptance_factor, psi, EnergyProvenance, EnergyRef, LandscapeError, LandscapeParams};
use crate::math;
use crate::models::{enumerate_states, ModelError, ModelSpec, StateId};

/// Errors from the analysis operations.
#[derive(Debug, Clone, PartialEq)]
pub enum AnalysisError {
    Model(ModelError),
    Landscape(LandscapeError),
    /// Symmetrization residual above tolerance: the generator is not
    /// reversible with respect to the attached stationary law.
    NotReversible { residual: f64 },
    /// QL iteration failed to converge.
    Eigen { index: usize },
    /// The zero eigenvalue of the negated generator was not found where
    /// expected.
    MissingZeroMode { smallest: f64 },
    /// Operation needs at least two states.
    Degenerate,
    /// Exact total-variation curves must be non-increasing in time; a
    /// violation beyond slack indicates numerical failure.
    NotMonotone { t: f64 },
    /// Exhaustive path enumeration refused above its tiny-model cap.
    PathEnumerationTooLarge { states: u64 },
}

impl From<ModelError> for AnalysisError {
    fn from(e: ModelError) -> Self {
        Self::Model(e)
    }
}

impl From<LandscapeError> for AnalysisError {
    fn from(e: LandscapeError) -> Self {
        Self::Landscape(e)
    }
}

impl core::fmt::Display for AnalysisError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Self::Model(e) => write!(f, "{e}"),
            Self::Landscape(e) => write!(f, "{e}"),
            Self::NotReversible { residual } => {
                write!(f, "generator not reversible (symmetrization residual {residual:e})")
            }
            Self::Eigen { index } => write!(f, "eigensolver stalled at index {index}"),
            Self::MissingZeroMode { smallest } => {
                write!(f, "no zero eigenvalue: smallest is {smallest:e}")
            }
            Self::Degenerate => write!(f, "operation needs at least two states"),
            Self::NotMonotone { t } => {
                write!(f, "exact TV curve increased at t = {t}; numerical failure")
            }
            Self::PathEnumerationTooLarge { states } => {
                write!(f, "exhaustive path enumeration capped at 12 states, got {states}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for AnalysisError {}

/// Probability vector over the states of one model.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    /// Normalize non-negative weights into a distribution.
    pub fn from_weights(weights: Vec<f64>) -> Self {
        let total: f64 = weights.iter().sum();
        debug_assert!(total > 0.0 && total.is_finite());
        let mut probs = weights;
        for p in &mut probs {
            *p /= total;
        }
        Distribution { probs }
    }

    /// Point mass at one state.
    pub fn point_mass(n: usize, at: StateId) -> Self {
        let mut probs = alloc::vec![0.0; n];
        probs[at.index()] = 1.0;
        Distribution { probs }
    }

    /// Empirical law from counts.
    pub fn from_counts(counts: &[u64]) -> Self {
        Self::from_weights(counts.iter().map(|&c| c as f64).collect())
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn get(&self, s: StateId) -> f64 {
        self.probs[s.index()]
    }

    pub fn min(&self) -> f64 {
        self.probs.iter().copied().fold(f64::INFINITY, math::min)
    }

    pub fn max(&self) -> f64 {
        self.probs.iter().copied().fold(f64::NEG_INFINITY, math::max)
    }

    /// Mean of an observable under this law.
    pub fn mean(&self, g: impl Fn(StateId) -> f64) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(i, &p)| p * g(StateId(i as u64)))
            .sum()
    }
}

/// Total variation distance `0.5 * sum |a - b|`.
pub fn tv_distance(a: &Distribution, b: &Distribution) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    0.5 * a
        .probs
        .iter()
        .zip(&b.probs)
        .map(|(&x, &y)| math::abs(x - y))
        .sum::<f64>()
}

/// Dense rate matrix of the (possibly modified) Metropolis chain on an
/// enumerable model, with its stationary law and the energy data the
/// bounds need.
#[derive(Debug, Clone)]
pub struct GeneratorMatrix {
    n: usize,
    rates: Vec<f64>,
    stationary: Distribution,
    energies: Vec<f64>,
    mod_energies: Vec<f64>,
    h_min: f64,
    h_max: f64,
}

impl GeneratorMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn rate(&self, x: usize, y: usize) -> f64 {
        self.rates[x * self.n + y]
    }

    /// Stationary law of this generator.
    pub fn stationary(&self) -> &Distribution {
        &self.stationary
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Transformed energies `psi(H(x))`, floored at 0.
    pub fn mod_energies(&self) -> &[f64] {
        &self.mod_energies
    }

    /// Range of the original energy function.
    pub fn energy_range(&self) -> (f64, f64) {
        (self.h_min, self.h_max)
    }

    /// Row sums, which must vanish for a generator.
    pub fn max_abs_row_sum(&self) -> f64 {
        (0..self.n)
            .map(|x| math::abs((0..self.n).map(|y| self.rate(x, y)).sum::<f64>()))
            .fold(0.0, math::max)
    }

    /// Detailed-balance residual `max |pi(x) M(x,y) - pi(y) M(y,x)|`
    /// relative to the largest flow.
    pub fn detailed_balance_residual(&self) -> f64 {
        let pi = self.stationary.probs();
        let mut worst = 0.0;
        let mut scale = 0.0;
        for x in 0..self.n {
            for y in (x + 1)..self.n {
                let fwd = pi[x] * self.rate(x, y);
                let bwd = pi[y] * self.rate(y, x);
                worst = math::max(worst, math::abs(fwd - bwd));
                scale = math::max(scale, math::max(fwd, bwd));
            }
        }
        if scale > 0.0 {
            worst / scale
        } else {
            0.0
        }
    }

    /// Similarity transform `D^{1/2} (-M) D^{-1/2}` with `D = diag(pi)`,
    /// which is symmetric exactly when the chain is reversible. Errors if
    /// the asymmetry residual exceeds 1e-8; otherwise returns the averaged
    /// symmetric matrix.
    pub(crate) fn symmetrized(&self) -> Result<Mat, AnalysisError> {
        let n = self.n;
        let pi = self.stationary.probs();
        let mut s = Mat::zeros(n);
        let mut residual = 0.0;
        let mut scale = 0.0;
        for x in 0..n {
            s.set(x, x, -self.rate(x, x));
            for y in (x + 1)..n {
                let a = -self.rate(x, y) * math::sqrt(pi[x] / pi[y]);
                let b = -self.rate(y, x) * math::sqrt(pi[y] / pi[x]);
                residual = math::max(residual, math::abs(a - b));
                scale = math::max(scale, math::max(math::abs(a), math::abs(b)));
                let avg = 0.5 * (a + b);
                s.set(x, y, avg);
                s.set(y, x, avg);
            }
        }
        if scale > 0.0 && residual / scale > 1e-8 {
            return Err(AnalysisError::NotReversible { residual: residual / scale });
        }
        Ok(s)
    }
}

/// Build the dense generator `M(x, y) = q(x, y) exp(-(dpsi)+)` of the
/// modified chain (the classical one at `alpha = 0`).
pub fn build_generator(
    model: &(impl ModelSpec + ?Sized),
    params: &LandscapeParams,
    cap: u64,
) -> Result<GeneratorMatrix, AnalysisError> {
    let states: Vec<StateId> = enumerate_states(model, cap)?.collect();
    let n = states.len();
    let energies: Vec<f64> = states.iter().map(|&s| model.energy(s)).collect();
    let h_min = energies.iter().copied().fold(f64::INFINITY, math::min);
    let h_max = energies.iter().copied().fold(f64::NEG_INFINITY, math::max);
    let reference = EnergyRef::new(h_min, EnergyProvenance::ExactEnumeration);

    let mut mod_energies = Vec::with_capacity(n);
    for &h in &energies {
        mod_energies.push(psi(h, params, &reference)?);
    }
    let stationary = Distribution::from_weights(mod_energies.iter().map(|&e| math::exp(-e)).collect());

    let mut rates = alloc::vec![0.0; n * n];
    for (x, &sx) in states.iter().enumerate() {
        let mut out = 0.0;
        for (sy, q) in model.neighbors(sx) {
            let y = sy.index();
            let m = q * acceptance_factor(energies[x], energies[y], params);
            rates[x * n + y] = m;
            out += m;
        }
        rates[x * n + x] = -out;
    }

    Ok(GeneratorMatrix { n, rates, stationary, energies, mod_energies, h_min, h_max })
}

/// Stationary laws `(mu_f, mu)` of the modified and classical chains.
pub fn stationary(
    model: &(impl ModelSpec + ?Sized),
    params: &LandscapeParams,
    cap: u64,
) -> Result<(Distribution, Distribution), AnalysisError> {
    let energies: Vec<f64> = enumerate_states(model, cap)?
        .map(|s| model.energy(s))
        .collect();
    let h_min = energies.iter().copied().fold(f64::INFINITY, math::min);
    let reference = EnergyRef::new(h_min, EnergyProvenance::ExactEnumeration);
    let mut mod_w = Vec::with_capacity(energies.len());
    for &h in &energies {
        mod_w.push(math::exp(-psi(h, params, &reference)?));
    }
    let classical_w = energies.iter().map(|&h| math::exp(-(h - h_min))).collect();
    Ok((Distribution::from_weights(mod_w), Distribution::from_weights(classical_w)))
}

/// Spectral gap: the second-smallest eigenvalue of `-M`, computed on the
/// symmetrized generator.
pub fn spectral_gap(generator: &GeneratorMatrix) -> Result<f64, AnalysisError> {
    if generator.n < 2 {
        return Err(AnalysisError::Degenerate);
    }
    let s = generator.symmetrized()?;
    let scale = (0..generator.n).fold(1.0, |acc, x| math::max(acc, -generator.rate(x, x)));
    let values = eigen::symmetric_eigenvalues(s).map_err(|e| AnalysisError::Eigen { index: e.index })?;
    if math::abs(values[0]) > 1e-10 * scale {
        return Err(AnalysisError::MissingZeroMode { smallest: values[0] });
    }
    Ok(values[1])
}

/// Exact total-variation curve `t -> TV(P^t(x0, .), pi)` via the
/// eigendecomposition of the symmetrized generator. `times` must be
/// non-decreasing; the curve is checked to be non-increasing within 1e-10
/// slack.
pub fn tv_curve(
    generator: &GeneratorMatrix,
    x0: StateId,
    times: &[f64],
) -> Result<Vec<(f64, f64)>, AnalysisError> {
    TvSolver::new(generator)?.curve(x0, times)
}

/// Reusable exact-TV evaluator: one eigendecomposition serving every
/// starting state and time.
pub struct TvSolver<'a> {
    generator: &'a GeneratorMatrix,
    spectral: Spectral,
}

impl<'a> TvSolver<'a> {
    pub fn new(generator: &'a GeneratorMatrix) -> Result<Self, AnalysisError> {
        Ok(Self { generator, spectral: decompose(generator)? })
    }

    /// `TV(P^t(x0, .), pi)`.
    pub fn tv(&self, x0: StateId, t: f64) -> f64 {
        self.spectral.tv_at(self.generator, x0, t)
    }

    pub fn curve(&self, x0: StateId, times: &[f64]) -> Result<Vec<(f64, f64)>, AnalysisError> {
        let mut out = Vec::with_capacity(times.len());
        let mut prev: Option<(f64, f64)> = None;
        for &t in times {
            let tv = self.tv(x0, t);
            if let Some((pt, ptv)) = prev {
                if t >= pt && tv > ptv + 1e-10 {
                    return Err(AnalysisError::NotMonotone { t });
                }
            }
            prev = Some((t, tv));
            out.push((t, tv));
        }
        Ok(out)
    }
}

/// Convergence envelope at one time: the universal lower bound
/// `0.5 e^{-gap t}` (valid for the max over starting states), the exact
/// TV from `x0`, and the upper bound `(e^{H_max - H_min} |X| / 2) e^{-gap t}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    pub t: f64,
    /// Lower bound on the max-over-starts TV, not per-start.
    pub lower: f64,
    pub exact: f64,
    pub upper: f64,
}

/// Envelope along a whole time grid (one eigendecomposition for all times).
pub fn convergence_envelope_curve(
    generator: &GeneratorMatrix,
    x0: StateId,
    times: &[f64],
) -> Result<Vec<Envelope>, AnalysisError> {
    let gap = spectral_gap(generator)?;
    let curve = tv_curve(generator, x0, times)?;
    let (h_min, h_max) = generator.energy_range();
    let amp = math::exp(h_max - h_min) * generator.n() as f64 / 2.0;
    Ok(curve
        .into_iter()
        .map(|(t, exact)| {
            let decay = math::exp(-gap * t);
            Envelope { t, lower: 0.5 * decay, exact, upper: amp * decay }
        })
        .collect())
}

/// Single-time convenience form of [`convergence_envelope_curve`].
pub fn convergence_envelope(
    generator: &GeneratorMatrix,
    x0: StateId,
    t: f64,
) -> Result<Envelope, AnalysisError> {
    Ok(convergence_envelope_curve(generator, x0, &[t])?[0])
}

/// The closed-form bias bound `alpha * xi * e^{H_max - H_min} / |X|`
/// together with the exact `TV(mu_f, mu)` it dominates, where
/// `xi = #{x : H(x) > c} * (H_max - H_min) * f((H_max - c)+)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiasBound {
    pub bound: f64,
    pub exact_tv: f64,
    pub xi: f64,
    pub states_above_threshold: usize,
}

pub fn bias_bound(
    model: &(impl ModelSpec + ?Sized),
    params: &LandscapeParams,
    cap: u64,
) -> Result<BiasBound, AnalysisError> {
    let (mu_f, mu) = stationary(model, params, cap)?;
    let energies: Vec<f64> = enumerate_states(model, cap)?
        .map(|s| model.energy(s))
        .collect();
    let h_min = energies.iter().copied().fold(f64::INFINITY, math::min);
    let h_max = energies.iter().copied().fold(f64::NEG_INFINITY, math::max);
    let above = energies.iter().filter(|&&h| h > params.c).count();
    let xi = above as f64 * (h_max - h_min) * params.f.eval(math::max(h_max - params.c, 0.0));
    let bound = params.alpha * xi * math::exp(h_max - h_min) / energies.len() as f64;
    Ok(BiasBound { bound, exact_tv: tv_distance(&mu_f, &mu), xi, states_above_threshold: above })
}

// Eigendecomposition of the symmetrized generator, reused across times.
struct Spectral {
    values: Vec<f64>,
    vectors: Mat,
}

impl Spectral {
    fn tv_at(&self, generator: &GeneratorMatrix, x0: StateId, t: f64) -> f64 {
        let n = generator.n();
        let pi = generator.stationary().probs();
        let x = x0.index();
        let mut tv = 0.0;
        for y in 0..n {
            // P^t(x, y) = sqrt(pi_y / pi_x) sum_k V[x,k] V[y,k] e^{-lambda_k t}
            let mut sum = 0.0;
            for k in 0..n {
                sum += self.vectors.at(x, k) * self.vectors.at(y, k) * math::exp(-self.values[k] * t);
            }
            let p = math::sqrt(pi[y] / pi[x]) * sum;
            tv += math::abs(p - pi[y]);
        }
        0.5 * tv
    }
}

fn decompose(generator: &GeneratorMatrix) -> Result<Spectral, AnalysisError> {
    if generator.n < 2 {
        return Err(AnalysisError::Degenerate);
    }
    let s = generator.symmetrized()?;
    let (values, vectors) =
        eigen::symmetric_eigen(s).map_err(|e| AnalysisError::Eigen { index: e.index })?;
    Ok(Spectral { values, vectors })
}

/// Spectral gap straight from a model, building the symmetrized matrix
/// directly from energies (no dense generator materialized). Same result
/// as [`spectral_gap`] after [`build_generator`].
pub fn spectral_gap_of_model(
    model: &(impl ModelSpec + ?Sized),
    params: &LandscapeParams,
    cap: u64,
) -> Result<f64, AnalysisError> {
    let states: Vec<StateId> = enumerate_states(model, cap)?.collect();
    let n = states.len();
    if n < 2 {
        return Err(AnalysisError::Degenerate);
    }
    let energies: Vec<f64> = states.iter().map(|&s| model.energy(s)).collect();
    let h_min = energies.iter().copied().fold(f64::INFINITY, math::min);
    let reference = EnergyRef::new(h_min, EnergyProvenance::ExactEnumeration);
    let mut mod_energies = Vec::with_capacity(n);
    for &h in &energies {
        mod_energies.push(psi(h, params, &reference)?);
    }
    // S(x, y) = -q(x, y) e^{-|psi_y - psi_x| / 2}: symmetric by
    // construction, equal to the similarity transform by detailed balance.
    let mut s = Mat::zeros(n);
    let mut scale: f64 = 1.0;
    for (x, &sx) in states.iter().enumerate() {
        let mut exit = 0.0;
        for (sy, q) in model.neighbors(sx) {
            let y = sy.index();
            exit += q * math::exp(-math::max(mod_energies[y] - mod_energies[x], 0.0));
            if y > x {
                let v = -q * math::exp(-0.5 * math::abs(mod_energies[y] - mod_energies[x]));
                s.set(x, y, v);
                s.set(y, x, v);
            }
        }
        s.set(x, x, exit);
        scale = math::max(scale, exit);
    }
    let values = eigen::symmetric_eigenvalues(s).map_err(|e| AnalysisError::Eigen { index: e.index })?;
    if math::abs(values[0]) > 1e-10 * scale {
        return Err(AnalysisError::MissingZeroMode { smallest: values[0] });
    }
    Ok(values[1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landscape::PenaltyFunction;
    use crate::models::{reference, TabularModel, DENSE_CAP};

    fn quad(alpha: f64, c: f64) -> LandscapeParams {
        LandscapeParams::new(alpha, c, PenaltyFunction::Quadratic).unwrap()
    }

    #[test]
    fn two_state_classical_rates() {
        let m = reference::two_state();
        let g = build_generator(&m, &LandscapeParams::classical(), DENSE_CAP).unwrap();
        assert!((g.rate(0, 1) - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(g.rate(1, 0), 1.0);
        assert!(g.max_abs_row_sum() < 1e-15);
    }

    #[test]
    fn rates_never_exceed_proposals() {
        let m = reference::double_well_five();
        let g = build_generator(&m, &quad(3.0, 1.0), DENSE_CAP).unwrap();
        for x in 0..g.n() {
            for (y, q) in m.neighbors(StateId(x as u64)) {
                assert!(g.rate(x, y.index()) <= q + 1e-15);
            }
        }
    }

    #[test]
    fn detailed_balance_on_random_tabular() {
        let mut rng = crate::sim::Rng::new(3, 0);
        for trial in 0..20 {
            let n = 3 + (rng.next_u64() % 6) as usize;
            let energies: Vec<f64> = (0..n).map(|_| rng.next_f64() * 4.0 - 1.0).collect();
            let mut edges: Vec<(usize, usize, f64)> =
                (1..n).map(|i| (i - 1, i, 0.2 + rng.next_f64())).collect();
            // A few chords.
            for _ in 0..n / 2 {
                let i = (rng.next_u64() % n as u64) as usize;
                let j = (rng.next_u64() % n as u64) as usize;
                if i != j && !edges.iter().any(|&(a, b, _)| (a, b) == (i.min(j), i.max(j))) {
                    edges.push((i.min(j), i.max(j), 0.2 + rng.next_f64()));
                }
            }
            let m = TabularModel::new("rand", energies, &edges).unwrap();
            let g = build_generator(&m, &quad(1.0 + trial as f64 / 7.0, 0.5), DENSE_CAP).unwrap();
            assert!(g.detailed_balance_residual() < 1e-10, "trial {trial}");
            assert!(g.max_abs_row_sum() < 1e-12);
        }
    }

    #[test]
    fn stationary_examples() {
        // Constant energies: uniform.
        let flat = TabularModel::path("flat", alloc::vec![1.0, 1.0, 1.0], 1.0).unwrap();
        let (mu_f, mu) = stationary(&flat, &quad(1.0, 1.0), DENSE_CAP).unwrap();
        for &p in mu_f.probs() {
            assert!((p - 1.0 / 3.0).abs() < 1e-15);
        }
        for &p in mu.probs() {
            assert!((p - 1.0 / 3.0).abs() < 1e-15);
        }

        // Three states, quadratic penalty: proportions (1, e^{-arctan 2}, e^{-pi/4}).
        let m = reference::three_state_path();
        let (mu_f, _) = stationary(&m, &quad(1.0, 0.0), DENSE_CAP).unwrap();
        let w = [1.0, (-(2.0f64.atan())).exp(), (-core::f64::consts::FRAC_PI_4).exp()];
        let z: f64 = w.iter().sum();
        for (i, &wi) in w.iter().enumerate() {
            assert!((mu_f.probs()[i] - wi / z).abs() < 1e-14);
        }
    }

    #[test]
    fn tv_distance_examples() {
        let a = Distribution::from_weights(alloc::vec![0.5, 0.5]);
        let b = Distribution::from_weights(alloc::vec![1.0, 0.0]);
        assert_eq!(tv_distance(&a, &a), 0.0);
        assert_eq!(tv_distance(&b, &Distribution::point_mass(2, StateId(1))), 1.0);
        assert!((tv_distance(&a, &b) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn two_state_gap_closed_form() {
        let m = reference::two_state();
        let g = build_generator(&m, &LandscapeParams::classical(), DENSE_CAP).unwrap();
        let gap = spectral_gap(&g).unwrap();
        assert!((gap - (1.0 + (-1.0f64).exp())).abs() < 1e-12);
    }

    #[test]
    fn flat_landscape_gap_is_proposal_gap() {
        // Complete graph, uniform proposal, flat energies: acceptance is 1
        // everywhere, so the chain is the proposal itself (gap 1 here).
        let n = 5;
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                edges.push((i, j, 1.0 / n as f64));
            }
        }
        let m = TabularModel::new("flat-complete", alloc::vec![0.0; n], &edges).unwrap();
        let g = build_generator(&m, &quad(2.0, 0.0), DENSE_CAP).unwrap();
        let gap = spectral_gap(&g).unwrap();
        assert!((gap - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gap_invariant_under_relabeling() {
        let energies = alloc::vec![0.0, 2.0, 1.0, 0.5];
        let edges = [(0usize, 1usize, 1.0), (1, 2, 0.5), (2, 3, 0.7), (3, 0, 0.3)];
        let m1 = TabularModel::new("a", energies.clone(), &edges).unwrap();
        // Relabel with permutation (0 1 2 3) -> (2 0 3 1).
        let perm = [2usize, 0, 3, 1];
        let mut perm_energies = alloc::vec![0.0; 4];
        for (old, &new) in perm.iter().enumerate() {
            perm_energies[new] = energies[old];
        }
        let perm_edges: Vec<_> = edges
            .iter()
            .map(|&(i, j, r)| (perm[i].min(perm[j]), perm[i].max(perm[j]), r))
            .collect();
        let m2 = TabularModel::new("b", perm_energies, &perm_edges).unwrap();
        let p = quad(1.0, 0.4);
        let g1 = spectral_gap(&build_generator(&m1, &p, DENSE_CAP).unwrap()).unwrap();
        let g2 = spectral_gap(&build_generator(&m2, &p, DENSE_CAP).unwrap()).unwrap();
        assert!((g1 - g2).abs() < 1e-11);
    }

    #[test]
    fn direct_symmetrized_gap_agrees_with_generator_path() {
        for model in reference::corpus() {
            if model.state_count().unwrap() > 600 {
                continue;
            }
            let p = quad(1.0, model.ground().unwrap().1 + 0.5);
            let g = build_generator(model.as_ref(), &p, DENSE_CAP).unwrap();
            let a = spectral_gap(&g).unwrap();
            let b = spectral_gap_of_model(model.as_ref(), &p, DENSE_CAP).unwrap();
            assert!((a - b).abs() < 1e-10, "{}: {a} vs {b}", model.name());
        }
    }

    #[test]
    fn tv_curve_two_state_closed_form() {
        let m = reference::two_state();
        let g = build_generator(&m, &LandscapeParams::classical(), DENSE_CAP).unwrap();
        let pi = g.stationary().clone();
        let rate_sum = 1.0 + (-1.0f64).exp();
        let times = [0.0, 0.3, 1.0, 2.5, 7.0];
        let curve = tv_curve(&g, StateId(0), &times).unwrap();
        for &(t, tv) in &curve {
            // TV(t) = (1 - pi(x0)) e^{-(a+b) t} for the two-state chain.
            let expected = (1.0 - pi.get(StateId(0))) * (-rate_sum * t).exp();
            assert!((tv - expected).abs() < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn tv_curve_endpoints() {
        let m = reference::three_state_path();
        let g = build_generator(&m, &quad(1.0, 0.5), DENSE_CAP).unwrap();
        let curve = tv_curve(&g, StateId(1), &[0.0, 500.0]).unwrap();
        let pi = g.stationary();
        assert!((curve[0].1 - (1.0 - pi.get(StateId(1)))).abs() < 1e-10);
        assert!(curve[1].1 < 1e-9);
    }

    #[test]
    fn envelope_properties() {
        let m = reference::three_state_path();
        let g = build_generator(&m, &quad(1.0, 0.5), DENSE_CAP).unwrap();
        let envs = convergence_envelope_curve(&g, StateId(0), &[0.0, 0.5, 1.0, 4.0]).unwrap();
        let (h_min, h_max) = g.energy_range();
        let ratio = (h_max - h_min).exp() * g.n() as f64;
        for e in &envs {
            assert!(e.upper >= e.exact - 1e-12, "upper fails at t = {}", e.t);
            // Envelope ratio constant in t.
            assert!((e.upper / e.lower - ratio).abs() < 1e-9 * ratio);
        }
        // t = 0: upper bound dominates the point-mass TV.
        assert!(envs[0].upper >= 1.0 - g.stationary().get(StateId(0)));
    }

    #[test]
    fn bias_bound_cases() {
        let m = reference::three_state_path();
        // alpha = 0: both sides vanish exactly.
        let b0 = bias_bound(&m, &quad(0.0, 0.5), DENSE_CAP).unwrap();
        assert_eq!(b0.bound, 0.0);
        assert_eq!(b0.exact_tv, 0.0);
        // c >= H_max: modification inactive.
        let bc = bias_bound(&m, &quad(1.0, 2.0), DENSE_CAP).unwrap();
        assert_eq!(bc.xi, 0.0);
        assert_eq!(bc.bound, 0.0);
        assert!(bc.exact_tv < 1e-15);
        // Active case: exact TV below the bound.
        let ba = bias_bound(&m, &quad(0.1, 0.0), DENSE_CAP).unwrap();
        assert!(ba.exact_tv > 0.0);
        assert!(ba.exact_tv <= ba.bound, "{} > {}", ba.exact_tv, ba.bound);
    }

    #[test]
    fn bias_ratio_halves_with_alpha() {
        let m = reference::double_well_five();
        let c = 2.0;
        let tv_at = |alpha: f64| {
            bias_bound(&m, &quad(alpha, c), DENSE_CAP).unwrap().exact_tv
        };
        for alpha in [0.01, 0.005] {
            let ratio = tv_at(alpha) / tv_at(alpha / 2.0);
            assert!((1.8..2.2).contains(&ratio), "ratio {ratio} at alpha {alpha}");
        }
    }

    #[test]
    fn tv_decay_slope_matches_gap() {
        // The asymptotic slope of ln TV(t) equals minus the spectral gap;
        // fit over a late window and demand 1% agreement.
        let m = reference::three_state_path();
        let g = build_generator(&m, &LandscapeParams::classical(), DENSE_CAP).unwrap();
        let gap = spectral_gap(&g).unwrap();
        let times: Vec<f64> = (0..10).map(|k| 4.0 / gap + k as f64 * 0.4 / gap).collect();
        let curve = tv_curve(&g, StateId(2), &times).unwrap();
        let pts: Vec<(f64, f64)> = curve.iter().map(|&(t, tv)| (t, tv.ln())).collect();
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
            / pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum::<f64>();
        assert!(
            (slope + gap).abs() <= 0.01 * gap,
            "slope {slope} vs -gap {}",
            -gap
        );
    }

    #[test]
    fn classical_reduction_is_exact() {
        for model in reference::corpus() {
            let p0 = LandscapeParams::new(0.0, 0.3, PenaltyFunction::Quadratic).unwrap();
            let g_mod = build_generator(model.as_ref(), &p0, DENSE_CAP).unwrap();
            let g_classical =
                build_generator(model.as_ref(), &LandscapeParams::classical(), DENSE_CAP).unwrap();
            assert_eq!(g_mod.rates, g_classical.rates, "{}", model.name());
            assert_eq!(
                g_mod.stationary().probs(),
                g_classical.stationary().probs(),
                "{}",
                model.name()
            );
        }
    }
}
