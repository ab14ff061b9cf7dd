//! Seeded statistical checks of the exact simulation against exact
//! linear-algebra ground truth.

use landmod::analysis::{
    annealed_tv_experiment, build_generator, stationary, tv_distance, Distribution,
};
use landmod::landscape::{LandscapeParams, PenaltyFunction};
use landmod::models::{reference, ModelSpec, DENSE_CAP};
use landmod::sim::{schedule_p_from_model, simulate_homogeneous, RngKey, Schedule};
use landmod::StateId;

fn quad(alpha: f64, c: f64) -> LandscapeParams {
    LandscapeParams::new(alpha, c, PenaltyFunction::Quadratic).unwrap()
}

/// Thinning correctness: observed jump destinations match the exact jump
/// probabilities `M(x, y) / sum_z M(x, z)` within three standard errors.
#[test]
fn thinning_matches_exact_jump_probabilities() {
    let m = reference::three_state_path();
    let params = quad(1.0, 0.5);
    let g = build_generator(&m, &params, DENSE_CAP).unwrap();
    let traj = simulate_homogeneous(&m, &params, StateId(0), 200_000.0, RngKey::new(77, 0));

    let n = 3;
    let mut jumps = vec![vec![0u64; n]; n];
    let mut from = traj.x0;
    for &(_, to) in &traj.events {
        jumps[from.index()][to.index()] += 1;
        from = to;
    }
    for x in 0..n {
        let total: u64 = jumps[x].iter().sum();
        assert!(total > 500, "state {x} visited too rarely ({total})");
        let exit: f64 = (0..n).filter(|&y| y != x).map(|y| g.rate(x, y)).sum();
        for y in 0..n {
            if y == x || g.rate(x, y) == 0.0 {
                continue;
            }
            let p = g.rate(x, y) / exit;
            let observed = jumps[x][y] as f64 / total as f64;
            let se = (p * (1.0 - p) / total as f64).sqrt();
            assert!(
                (observed - p).abs() <= 3.0 * se,
                "jump {x}->{y}: observed {observed:.4} expected {p:.4} (se {se:.4})"
            );
        }
    }
}

/// Occupation-measure consistency: the time-average occupation of a long
/// run sits within TV 0.02 of the exact stationary law. At these
/// parameters the chain's gap is ~2.3e-2, so over T = 1e6 the per-state
/// occupation error scale sqrt(2 / (gap T)) is ~9e-3; 0.02 in TV leaves
/// three-sigma-ish room.
#[test]
fn occupation_measure_matches_stationary() {
    let m = reference::double_well_five();
    let alpha = 9.0 * std::f64::consts::PI * std::f64::consts::PI / 4.0;
    let params = quad(alpha, 0.5);
    let (mu_f, _) = stationary(&m, &params, DENSE_CAP).unwrap();

    let traj = simulate_homogeneous(&m, &params, StateId(2), 1e6, RngKey::new(31, 0));
    let mut occupation = vec![0.0f64; 5];
    for (x, dur) in traj.holdings() {
        occupation[x.index()] += dur;
    }
    let empirical = Distribution::from_weights(occupation);
    let tv = tv_distance(&empirical, &mu_f);
    assert!(tv <= 0.02, "occupation TV {tv}");
}

/// Two-state chain: occupation fractions converge to the modified
/// stationary law.
#[test]
fn two_state_occupation() {
    let m = reference::two_state();
    let params = quad(2.0, 0.0);
    let (mu_f, _) = stationary(&m, &params, DENSE_CAP).unwrap();
    let traj = simulate_homogeneous(&m, &params, StateId(1), 100_000.0, RngKey::new(13, 5));
    let mut occupation = vec![0.0f64; 2];
    for (x, dur) in traj.holdings() {
        occupation[x.index()] += dur;
    }
    let empirical = Distribution::from_weights(occupation);
    assert!(tv_distance(&empirical, &mu_f) < 0.01);
}

/// Annealed replica laws drift toward the target: TV at the horizon is
/// below TV at a quarter of it.
#[test]
fn annealed_law_improves_with_time() {
    let m = reference::double_well_five();
    let ground = m.ground().unwrap().1;
    let (h_min, h_max) = landmod::models::energy_range(&m, DENSE_CAP).unwrap();
    let (p, _) = schedule_p_from_model(1.0, h_max - h_min, 5, 1.0);
    let schedule = Schedule::Logarithmic { p };
    let horizon = 4000.0;
    let out = annealed_tv_experiment(
        &m,
        PenaltyFunction::Quadratic,
        ground + 2.5,
        &schedule,
        &[horizon / 4.0, horizon],
        StateId(4),
        3000,
        2024,
        DENSE_CAP,
    )
    .unwrap();
    let early = out.points[0].tv;
    let late = out.points[1].tv;
    assert!(
        late < early - 2.0 * out.inflation.max(0.01),
        "no improvement: TV({}) = {early:.4} vs TV({horizon}) = {late:.4}",
        horizon / 4.0
    );
}
