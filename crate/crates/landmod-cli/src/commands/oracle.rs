//! `oracle`: randomized sweep arbitrating every closed-form transform
//! against adaptive quadrature of the defining integrand.

use serde::Serialize;

use landmod::landscape::{
    psi, psi_unshifted_exp, quadrature_oracle, quadrature_oracle_unshifted_exp, EnergyRef,
    LandscapeParams, PenaltyFunction,
};
use landmod::sim::Rng;

use crate::config::Config;
use crate::error::CliError;
use crate::report::OutputDir;

/// Closed forms must sit within this of the quadrature everywhere.
pub const SWEEP_TOL: f64 = 1e-10;

/// The removable-singularity branch of the exponential tail gets a
/// slightly looser budget.
pub const ALPHA_ONE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub penalty: String,
    pub triples: usize,
    pub max_residual: f64,
    pub tol: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub seed: u64,
    pub sweeps: Vec<SweepResult>,
    pub all_ok: bool,
}

/// Run the sweep: `triples` random `(alpha, c, v)` points per closed-form
/// penalty with `alpha` in `[0, 100]` and `v - c` in `[0, 50]`, plus a
/// dedicated pass at `alpha = 1` for the exponential branch and, on
/// request, the unshifted exponential variant on its valid domain.
pub fn run_oracle_sweep(
    triples: usize,
    seed: u64,
    include_unshifted: bool,
) -> Result<OracleReport, CliError> {
    let mut sweeps = Vec::new();
    let penalties = [
        ("linear", PenaltyFunction::Linear),
        ("quadratic", PenaltyFunction::Quadratic),
        ("exp-minus-one", PenaltyFunction::ExpMinusOne),
    ];
    for (stream, (name, f)) in penalties.into_iter().enumerate() {
        let mut rng = Rng::new(seed, stream as u64);
        let mut max_residual = 0.0f64;
        for _ in 0..triples {
            let alpha = 100.0 * rng.next_f64();
            let c = -10.0 + 20.0 * rng.next_f64();
            let excess = 50.0 * rng.next_f64();
            let h_min = c - 10.0 * rng.next_f64();
            let v = c + excess;
            let params = LandscapeParams::new(alpha, c, f)?;
            let reference = EnergyRef::user(h_min);
            let closed = psi(v, &params, &reference)?;
            let quad = quadrature_oracle(v, &params, &reference)?;
            max_residual = max_residual.max((closed - quad).abs());
        }
        sweeps.push(SweepResult {
            penalty: name.to_string(),
            triples,
            max_residual,
            tol: SWEEP_TOL,
            ok: max_residual <= SWEEP_TOL,
        });
    }

    // alpha = 1 exactly: the exponential closed form switches to its
    // series branch.
    {
        let mut rng = Rng::new(seed, 100);
        let mut max_residual = 0.0f64;
        let n = triples.min(200).max(50);
        for _ in 0..n {
            let c = -5.0 + 10.0 * rng.next_f64();
            let v = c + 50.0 * rng.next_f64();
            let params = LandscapeParams::new(1.0, c, PenaltyFunction::ExpMinusOne)?;
            let reference = EnergyRef::user(c - 5.0 * rng.next_f64());
            let closed = psi(v, &params, &reference)?;
            let quad = quadrature_oracle(v, &params, &reference)?;
            max_residual = max_residual.max((closed - quad).abs());
        }
        sweeps.push(SweepResult {
            penalty: "exp-minus-one (alpha = 1 branch)".to_string(),
            triples: n,
            max_residual,
            tol: ALPHA_ONE_TOL,
            ok: max_residual <= ALPHA_ONE_TOL,
        });
    }

    if include_unshifted {
        // The variant form evaluates the penalty at absolute energies; it
        // is only defined where its denominator stays positive, so sweep
        // non-negative thresholds.
        let mut rng = Rng::new(seed, 200);
        let mut max_residual = 0.0f64;
        for _ in 0..triples {
            let alpha = 100.0 * rng.next_f64();
            let c = 10.0 * rng.next_f64();
            let v = c + 50.0 * rng.next_f64();
            let params = LandscapeParams::new(alpha, c, PenaltyFunction::ExpMinusOne)?;
            let reference = EnergyRef::user(0.0);
            let closed = psi_unshifted_exp(v, &params, &reference)?;
            let quad = quadrature_oracle_unshifted_exp(v, &params, &reference)?;
            max_residual = max_residual.max((closed - quad).abs());
        }
        sweeps.push(SweepResult {
            penalty: "exp-minus-one (unshifted variant)".to_string(),
            triples,
            max_residual,
            tol: SWEEP_TOL,
            ok: max_residual <= SWEEP_TOL,
        });
    }

    let all_ok = sweeps.iter().all(|s| s.ok);
    Ok(OracleReport { seed, sweeps, all_ok })
}

pub fn cmd_oracle(config: &Config, seed: u64, out: &mut OutputDir) -> Result<(), CliError> {
    let report = run_oracle_sweep(config.oracle.triples, seed, config.oracle.unshifted_exp)?;
    out.write_json("oracle.json", &report)?;
    for s in &report.sweeps {
        println!("{}: max residual {:.3e} (tol {:.0e}) {}", s.penalty, s.max_residual, s.tol, if s.ok { "ok" } else { "FAILED" });
    }
    if !report.all_ok {
        return Err(CliError::assertion("closed form drifted from the quadrature oracle".to_string()));
    }
    Ok(())
}
