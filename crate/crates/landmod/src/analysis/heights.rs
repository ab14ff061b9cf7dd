//! Critical heights and bottleneck elevations.
//!
//! The bottleneck elevation `H(x, y)` is the lowest possible highest
//! energy along proposal paths from `x` to `y` (endpoints included). It is
//! computed by a threshold sweep: activate states in increasing energy
//! order and union components across proposal edges; the elevation of a
//! pair is the energy at which their components first meet — the same
//! construction Kruskal's algorithm uses for minimax paths.
//!
//! The critical height maximizes `g(H(x, y)) - g(H(x)) - g(H(y))` over
//! pairs, where `g` shifts energies by the global minimum for the
//! classical chain and applies the landscape transform for the modified
//! one. Because the transform is increasing, both use the same sweep and
//! the same bottleneck pairs; only the evaluated heights differ, which is
//! why the modified critical height never exceeds the classical one.

use alloc::vec;
use alloc::vec::Vec;

use super::AnalysisError;
use crate::landscape::{psi, EnergyProvenance, EnergyRef, LandscapeParams};
use crate::models::{enumerate_states, ModelSpec, StateId};
use crate::unionfind::UnionFind;

/// A critical height with the pair attaining it and the energy level of
/// the saddle between them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalHeight {
    pub value: f64,
    /// Pair attaining the maximum; `(ground, ground)` when no barrier
    /// exceeds zero.
    pub witness: (StateId, StateId),
    /// Original-energy level of the witness pair's bottleneck.
    pub bottleneck_energy: f64,
}

// Shared candidate expression so the sweep and the brute-force oracle
// perform bit-identical arithmetic.
#[inline]
fn candidate(g_elev: f64, g_x: f64, g_y: f64) -> f64 {
    g_elev - g_x - g_y
}

fn transformed_energies(
    energies: &[f64],
    params: Option<&LandscapeParams>,
) -> Result<(Vec<f64>, f64), AnalysisError> {
    let h_min = energies.iter().copied().fold(f64::INFINITY, crate::math::min);
    let reference = EnergyRef::new(h_min, EnergyProvenance::ExactEnumeration);
    let mut g = Vec::with_capacity(energies.len());
    match params {
        None => {
            for &h in energies {
                g.push(h - h_min);
            }
        }
        Some(p) => {
            for &h in energies {
                g.push(psi(h, p, &reference)?);
            }
        }
    }
    Ok((g, h_min))
}

/// Critical height of the classical chain (`params = None`) or of the
/// modified chain (`params = Some(..)`), with its witness pair.
///
/// Sorting ties break by state index, making the witness deterministic;
/// the height value itself is tie-independent.
pub fn critical_height(
    model: &(impl ModelSpec + ?Sized),
    params: Option<&LandscapeParams>,
    cap: u64,
) -> Result<CriticalHeight, AnalysisError> {
    let states: Vec<StateId> = enumerate_states(model, cap)?.collect();
    let n = states.len();
    let energies: Vec<f64> = states.iter().map(|&s| model.energy(s)).collect();
    let (g, _) = transformed_energies(&energies, params)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| energies[a].partial_cmp(&energies[b]).unwrap().then(a.cmp(&b)));

    // Per-component representative of minimal (energy, index).
    let mut uf = UnionFind::new(n);
    let mut min_state: Vec<usize> = (0..n).collect();
    let mut active = vec![false; n];

    let ground = order[0];
    let mut best = CriticalHeight {
        value: 0.0,
        witness: (StateId(ground as u64), StateId(ground as u64)),
        bottleneck_energy: energies[ground],
    };

    for &s in &order {
        active[s] = true;
        for (nb, _) in model.neighbors(StateId(s as u64)) {
            let t = nb.index();
            if !active[t] {
                continue;
            }
            let (ra, rb) = (uf.find(s), uf.find(t));
            if ra == rb {
                continue;
            }
            let (ma, mb) = (min_state[ra], min_state[rb]);
            // The elevation of every pair joined here is the energy of the
            // state being activated.
            let value = candidate(g[s], g[ma], g[mb]);
            if value > best.value {
                let (lo, hi) = if ma <= mb { (ma, mb) } else { (mb, ma) };
                best = CriticalHeight {
                    value,
                    witness: (StateId(lo as u64), StateId(hi as u64)),
                    bottleneck_energy: energies[s],
                };
            }
            if let Some(root) = uf.union(ra, rb) {
                let keep = better_min(&energies, ma, mb);
                min_state[root] = keep;
            }
        }
    }

    if uf.components() > 1 {
        return Err(AnalysisError::Model(crate::models::ModelError::Disconnected {
            components: uf.components(),
        }));
    }
    Ok(best)
}

fn better_min(energies: &[f64], a: usize, b: usize) -> usize {
    if energies[a] < energies[b] || (energies[a] == energies[b] && a < b) {
        a
    } else {
        b
    }
}

/// Bottleneck elevation `H(x, y)` under a caller-supplied energy table.
pub fn bottleneck_elevation_with(
    model: &(impl ModelSpec + ?Sized),
    x: StateId,
    y: StateId,
    energies: &[f64],
) -> Result<f64, AnalysisError> {
    let n = energies.len();
    if x == y {
        return Ok(energies[x.index()]);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| energies[a].partial_cmp(&energies[b]).unwrap().then(a.cmp(&b)));
    let mut uf = UnionFind::new(n);
    let mut active = vec![false; n];
    for &s in &order {
        active[s] = true;
        for (nb, _) in model.neighbors(StateId(s as u64)) {
            let t = nb.index();
            if active[t] {
                uf.union(s, t);
            }
        }
        if active[x.index()] && active[y.index()] && uf.same(x.index(), y.index()) {
            return Ok(energies[s]);
        }
    }
    Err(AnalysisError::Model(crate::models::ModelError::Disconnected {
        components: uf.components(),
    }))
}

/// Bottleneck elevation under the model's own energy function.
pub fn bottleneck_elevation(
    model: &(impl ModelSpec + ?Sized),
    x: StateId,
    y: StateId,
    cap: u64,
) -> Result<f64, AnalysisError> {
    let energies: Vec<f64> = enumerate_states(model, cap)?
        .map(|s| model.energy(s))
        .collect();
    bottleneck_elevation_with(model, x, y, &energies)
}

const PATH_ENUM_CAP: u64 = 12;

/// Independent oracle: minimax elevation over *all simple paths* by
/// exhaustive depth-first enumeration. Exponential; refuses models above
/// 12 states.
pub fn minimax_elevation_by_paths(
    model: &(impl ModelSpec + ?Sized),
    x: StateId,
    y: StateId,
    cap: u64,
) -> Result<f64, AnalysisError> {
    let states: Vec<StateId> = enumerate_states(model, cap)?.collect();
    let n = states.len() as u64;
    if n > PATH_ENUM_CAP {
        return Err(AnalysisError::PathEnumerationTooLarge { states: n });
    }
    let energies: Vec<f64> = states.iter().map(|&s| model.energy(s)).collect();
    if x == y {
        return Ok(energies[x.index()]);
    }
    let mut visited = vec![false; energies.len()];
    visited[x.index()] = true;
    let mut best = f64::INFINITY;
    dfs(model, &energies, x.index(), y.index(), energies[x.index()], &mut visited, &mut best);
    if best.is_finite() {
        Ok(best)
    } else {
        Err(AnalysisError::Model(crate::models::ModelError::Disconnected { components: 2 }))
    }
}

fn dfs(
    model: &(impl ModelSpec + ?Sized),
    energies: &[f64],
    at: usize,
    goal: usize,
    elev: f64,
    visited: &mut [bool],
    best: &mut f64,
) {
    if elev >= *best {
        return; // cannot improve along this prefix
    }
    if at == goal {
        *best = elev;
        return;
    }
    for (nb, _) in model.neighbors(StateId(at as u64)) {
        let t = nb.index();
        if !visited[t] {
            visited[t] = true;
            dfs(model, energies, t, goal, crate::math::max(elev, energies[t]), visited, best);
            visited[t] = false;
        }
    }
}

/// Critical height by the exhaustive-path oracle: same maximization as
/// [`critical_height`] but with every `H(x, y)` obtained from
/// [`minimax_elevation_by_paths`]. For cross-checks on tiny models.
pub fn critical_height_by_paths(
    model: &(impl ModelSpec + ?Sized),
    params: Option<&LandscapeParams>,
    cap: u64,
) -> Result<f64, AnalysisError> {
    let states: Vec<StateId> = enumerate_states(model, cap)?.collect();
    let energies: Vec<f64> = states.iter().map(|&s| model.energy(s)).collect();
    let (g, h_min) = transformed_energies(&energies, params)?;
    let reference = EnergyRef::new(h_min, EnergyProvenance::ExactEnumeration);
    let mut best = 0.0f64;
    for (i, &x) in states.iter().enumerate() {
        for &y in &states[i + 1..] {
            let elev = minimax_elevation_by_paths(model, x, y, cap)?;
            let g_elev = match params {
                None => elev - h_min,
                Some(p) => psi(elev, p, &reference)?,
            };
            let value = candidate(g_elev, g[x.index()], g[y.index()]);
            if value > best {
                best = value;
            }
        }
    }
    Ok(best)
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
    fn three_state_classical_height() {
        let m = reference::three_state_path();
        let ch = critical_height(&m, None, DENSE_CAP).unwrap();
        assert_eq!(ch.value, 1.0);
        assert_eq!(ch.witness, (StateId(0), StateId(2)));
        assert_eq!(ch.bottleneck_energy, 2.0);
    }

    #[test]
    fn three_state_modified_height() {
        let m = reference::three_state_path();
        let p = quad(1.0, 0.0);
        let ch = critical_height(&m, Some(&p), DENSE_CAP).unwrap();
        let expected = 2.0f64.atan() - 1.0f64.atan();
        assert!((ch.value - expected).abs() < 1e-14);
        assert_eq!(ch.witness, (StateId(0), StateId(2)));
    }

    #[test]
    fn single_well_has_zero_height() {
        let m = reference::single_well_four();
        let ch = critical_height(&m, None, DENSE_CAP).unwrap();
        assert_eq!(ch.value, 0.0);
        assert_eq!(ch.witness, (StateId(0), StateId(0)));
    }

    #[test]
    fn bottleneck_examples() {
        let m = reference::three_state_path();
        // Adjacent states: max of the endpoints.
        assert_eq!(bottleneck_elevation(&m, StateId(0), StateId(1), DENSE_CAP).unwrap(), 2.0);
        // Across the barrier.
        assert_eq!(bottleneck_elevation(&m, StateId(0), StateId(2), DENSE_CAP).unwrap(), 2.0);
        // Self-elevation is the state's own energy.
        assert_eq!(bottleneck_elevation(&m, StateId(2), StateId(2), DENSE_CAP).unwrap(), 1.0);
    }

    #[test]
    fn sweep_equals_path_enumeration() {
        let m = reference::three_state_path();
        for x in 0..3u64 {
            for y in 0..3u64 {
                let sweep = bottleneck_elevation(&m, StateId(x), StateId(y), DENSE_CAP).unwrap();
                let dfs = minimax_elevation_by_paths(&m, StateId(x), StateId(y), DENSE_CAP).unwrap();
                assert_eq!(sweep, dfs);
            }
        }
    }

    #[test]
    fn sweep_height_equals_path_height_on_random_small_models() {
        let mut rng = crate::sim::Rng::new(41, 0);
        for trial in 0..30 {
            let n = 3 + (rng.next_u64() % 6) as usize; // up to 8 states
            let energies: Vec<f64> = (0..n).map(|_| rng.next_f64() * 5.0).collect();
            let mut edges: Vec<(usize, usize, f64)> =
                (1..n).map(|i| (i - 1, i, 1.0)).collect();
            for _ in 0..n {
                let i = (rng.next_u64() % n as u64) as usize;
                let j = (rng.next_u64() % n as u64) as usize;
                if i != j && !edges.iter().any(|&(a, b, _)| (a, b) == (i.min(j), i.max(j))) {
                    edges.push((i.min(j), i.max(j), 1.0));
                }
            }
            let m = TabularModel::new("rand", energies, &edges).unwrap();
            for params in [None, Some(quad(1.5, 1.0))] {
                let sweep = critical_height(&m, params.as_ref(), DENSE_CAP).unwrap().value;
                let paths = critical_height_by_paths(&m, params.as_ref(), DENSE_CAP).unwrap();
                assert_eq!(sweep, paths, "trial {trial}");
            }
        }
    }

    #[test]
    fn modified_height_never_exceeds_classical() {
        for model in reference::corpus() {
            if model.state_count().unwrap() > 600 {
                continue;
            }
            let ground = model.ground().unwrap().1;
            let m0 = critical_height(model.as_ref(), None, DENSE_CAP).unwrap().value;
            for alpha in [0.1, 1.0, 10.0] {
                for delta in [0.1, 1.0] {
                    let p = quad(alpha, ground + delta);
                    let mf = critical_height(model.as_ref(), Some(&p), DENSE_CAP).unwrap().value;
                    assert!(
                        mf <= m0 + 1e-12,
                        "{}: mf {mf} > m0 {m0} (alpha {alpha}, delta {delta})",
                        model.name()
                    );
                }
            }
        }
    }

    #[test]
    fn transform_commutes_with_bottleneck() {
        // H_f(x, y) = psi(H(x, y)) for all pairs on a small model.
        let m = reference::double_well_five();
        let p = quad(2.0, 1.0);
        let energies: Vec<f64> = (0..5).map(|i| m.energy(StateId(i))).collect();
        let h_min = energies.iter().fold(f64::INFINITY, |a, &b| a.min(b));
        let reference_e = EnergyRef::new(h_min, EnergyProvenance::ExactEnumeration);
        let mod_energies: Vec<f64> =
            energies.iter().map(|&h| psi(h, &p, &reference_e).unwrap()).collect();
        for x in 0..5u64 {
            for y in 0..5u64 {
                let raw = bottleneck_elevation(&m, StateId(x), StateId(y), DENSE_CAP).unwrap();
                let transformed =
                    bottleneck_elevation_with(&m, StateId(x), StateId(y), &mod_energies).unwrap();
                let expected = psi(raw, &p, &reference_e).unwrap();
                assert!((transformed - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn modified_height_is_integral_over_witness_energies() {
        // m_f decomposes into damped integrals determined by the witness:
        // m_f = delta(H(x*), E*) - delta(H_min, H(y*)) with E* the
        // bottleneck energy, x* the lower-energy witness.
        use crate::landscape::energy_delta;
        let m = reference::double_well_five();
        let p = quad(1.3, 0.8);
        let ch = critical_height(&m, Some(&p), DENSE_CAP).unwrap();
        let (wx, wy) = ch.witness;
        let hx = m.energy(wx);
        let hy = m.energy(wy);
        let up = energy_delta(hx, ch.bottleneck_energy, &p).unwrap();
        let down = energy_delta(0.0, hy, &p).unwrap(); // h_min = 0 here
        assert!((ch.value - (up - down)).abs() < 1e-12);
    }
}
