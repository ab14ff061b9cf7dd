//! `bench`: desk-scale scaling tables for the spin-model suites.
//!
//! One CSV row per system size with exact classical and modified gaps,
//! critical heights, and the closed-form gap bound. The qualitative
//! contrast shows up as the classical height growing with size while the
//! modified one stays under its size-independent cap.
//!
//! Per-row assertions: `m_f <= m_0`, `m_f <= delta + pi / (2 sqrt(alpha))`,
//! exact modified gap at or above the closed-form bound, and (on rows
//! small enough for eigenvectors) the convergence envelope.

use serde::Serialize;

use landmod::analysis::{
    build_generator, critical_height, spectral_gap_of_model, spin_gap_bound_quadratic, TvSolver,
};
use landmod::landscape::{LandscapeParams, PenaltyFunction};
use landmod::models::{IsingModel, ModelSpec, PottsModel};
use landmod::StateId;

use super::CAP;
use crate::config::{BenchSection, Config};
use crate::error::CliError;
use crate::report::{OutputDir, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchSuite {
    IsingHypercube,
    IsingComplete,
    Potts,
}

impl BenchSuite {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "ising-hypercube" => Self::IsingHypercube,
            "ising-complete" => Self::IsingComplete,
            "potts" => Self::Potts,
            other => {
                return Err(CliError::config(format!(
                    "unknown suite `{other}` (ising-hypercube|ising-complete|potts)"
                )))
            }
        })
    }

    fn default_sizes(self) -> Vec<u32> {
        match self {
            Self::IsingHypercube => vec![2, 3],
            Self::IsingComplete => (4..=12).collect(),
            Self::Potts => vec![3],
        }
    }

    fn name(self) -> &'static str {
        match self {
            Self::IsingHypercube => "ising-hypercube",
            Self::IsingComplete => "ising-complete",
            Self::Potts => "potts",
        }
    }

    fn build(self, size: u32, bench: &BenchSection) -> Result<(Box<dyn ModelSpec>, f64), CliError> {
        Ok(match self {
            Self::IsingHypercube => {
                let m = IsingModel::hypercube(size, bench.j.unwrap_or(0.25), bench.h.unwrap_or(0.25))?;
                let gap = m.proposal_gap();
                (Box::new(m), gap)
            }
            Self::IsingComplete => {
                let m = IsingModel::complete(size, bench.j.unwrap_or(0.25), bench.h.unwrap_or(0.25))?;
                let gap = m.proposal_gap();
                (Box::new(m), gap)
            }
            Self::Potts => {
                let m = PottsModel::new(size, bench.colors, bench.j.unwrap_or(1.0))?;
                let gap = m.proposal_gap();
                (Box::new(m), gap)
            }
        })
    }
}

#[derive(Serialize)]
struct BenchReport {
    suite: &'static str,
    delta: f64,
    alpha: f64,
    rows: usize,
    all_heights_reduced: bool,
    all_heights_capped: bool,
    all_gaps_above_bound: bool,
    all_envelopes_hold: bool,
}

pub fn cmd_bench(config: &Config, suite: BenchSuite, out: &mut OutputDir) -> Result<(), CliError> {
    let bench = &config.bench;
    let sizes = bench.sizes.clone().unwrap_or_else(|| suite.default_sizes());
    let delta = bench.delta;
    let alpha = bench.alpha;
    let cap_mf = delta + core::f64::consts::PI / (2.0 * alpha.sqrt());

    let mut table = Table::new(vec![
        "suite",
        "size",
        "states",
        "delta",
        "alpha",
        "m0",
        "mf",
        "mf_cap",
        "gap0",
        "gapf",
        "gap_ratio",
        "hs_bound",
        "heights_reduced",
        "gap_above_bound",
        "envelope_checked",
        "envelope_ok",
    ]);

    let mut all_reduced = true;
    let mut all_capped = true;
    let mut all_bounded = true;
    let mut all_envelopes = true;

    for &size in &sizes {
        let (model, proposal_gap) = suite.build(size, bench)?;
        let model = model.as_ref();
        let states = model
            .state_count()
            .ok_or_else(|| CliError::config("bench model not enumerable"))?;
        if states > CAP {
            return Err(CliError::config(format!(
                "suite {} size {size} has {states} states, above the dense cap {CAP}",
                suite.name()
            )));
        }
        let ground = model.ground().expect("spin models have ground states").1;
        let params = LandscapeParams::new(alpha, ground + delta, PenaltyFunction::Quadratic)?;

        let m0 = critical_height(model, None, CAP)?.value;
        let mf = critical_height(model, Some(&params), CAP)?.value;
        let gap0 = spectral_gap_of_model(model, &LandscapeParams::classical(), CAP)?;
        let gapf = if params.is_classical() {
            gap0
        } else {
            spectral_gap_of_model(model, &params, CAP)?
        };
        let hs = if alpha > 0.0 {
            spin_gap_bound_quadratic(proposal_gap, delta, alpha)
        } else {
            0.0
        };

        let reduced = mf <= m0 + 1e-12;
        let capped = alpha == 0.0 || mf <= cap_mf + 1e-12;
        let bounded = gapf >= hs - 1e-15;
        let (env_checked, env_ok) = if states <= bench.envelope_cap {
            (true, envelope_holds(model, &params)?)
        } else {
            (false, true)
        };
        all_reduced &= reduced;
        all_capped &= capped;
        all_bounded &= bounded;
        all_envelopes &= env_ok;

        table.push(vec![
            suite.name().into(),
            u64::from(size).into(),
            states.into(),
            delta.into(),
            alpha.into(),
            m0.into(),
            mf.into(),
            cap_mf.into(),
            gap0.into(),
            gapf.into(),
            (gapf / gap0).into(),
            hs.into(),
            reduced.into(),
            bounded.into(),
            env_checked.into(),
            env_ok.into(),
        ]);
    }

    out.write_table(&format!("bench_{}", suite.name()), &table)?;
    out.write_json(
        &format!("bench_{}_summary.json", suite.name()),
        &BenchReport {
            suite: suite.name(),
            delta,
            alpha,
            rows: sizes.len(),
            all_heights_reduced: all_reduced,
            all_heights_capped: all_capped,
            all_gaps_above_bound: all_bounded,
            all_envelopes_hold: all_envelopes,
        },
    )?;

    if !(all_reduced && all_capped && all_bounded && all_envelopes) {
        return Err(CliError::assertion(format!(
            "bench {}: reduced={all_reduced} capped={all_capped} bounded={all_bounded} envelopes={all_envelopes}",
            suite.name()
        )));
    }
    Ok(())
}

// Convergence envelope on a 10-point grid over three gap timescales, with
// the lower bound applied to the max over starting states.
fn envelope_holds(model: &dyn ModelSpec, params: &LandscapeParams) -> Result<bool, CliError> {
    let g = build_generator(model, params, CAP)?;
    let gap = landmod::analysis::spectral_gap(&g)?;
    let times: Vec<f64> = (1..=10).map(|k| 3.0 / gap * k as f64 / 10.0).collect();
    let n = g.n();
    let (h_min, h_max) = g.energy_range();
    let amp = (h_max - h_min).exp() * n as f64 / 2.0;
    let solver = TvSolver::new(&g)?;
    let mut max_exact = vec![0.0f64; times.len()];
    for x in 0..n {
        let curve = solver.curve(StateId(x as u64), &times)?;
        for (k, &(t, tv)) in curve.iter().enumerate() {
            if tv > amp * (-gap * t).exp() + 1e-12 {
                return Ok(false);
            }
            max_exact[k] = max_exact[k].max(tv);
        }
    }
    for (k, &t) in times.iter().enumerate() {
        if max_exact[k] < 0.5 * (-gap * t).exp() - 1e-12 {
            return Ok(false);
        }
    }
    Ok(true)
}
