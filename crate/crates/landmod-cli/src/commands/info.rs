//! `info`: model inspection.

use serde::Serialize;

use landmod::analysis::{spectral_gap_of_model, AnalysisError};
use landmod::landscape::LandscapeParams;
use landmod::models::{energy_range, IsingModel, ModelSpec, PottsModel, TabularModel};

use super::CAP;
use crate::config::Config;
use crate::error::CliError;
use crate::report::OutputDir;

#[derive(Serialize)]
struct InfoReport {
    name: String,
    states: Option<u64>,
    ground_state: Option<u64>,
    ground_energy: Option<f64>,
    h_min: Option<f64>,
    h_max: Option<f64>,
    h_range: Option<f64>,
    proposal_gap: Option<f64>,
    threshold_c: f64,
    alpha: f64,
}

pub fn cmd_info(config: &Config, out: &mut OutputDir) -> Result<(), CliError> {
    let model = config.build_model()?;
    let params = config.params(model.as_ref())?;
    let states = model.state_count();
    let (h_min, h_max) = match states {
        Some(n) if n <= CAP => {
            let (lo, hi) = energy_range(model.as_ref(), CAP)?;
            (Some(lo), Some(hi))
        }
        _ => (None, None),
    };
    let gap = exact_proposal_gap(&config.model.kind, model.as_ref(), config)?;
    let report = InfoReport {
        name: model.name().to_string(),
        states,
        ground_state: model.ground().map(|(s, _)| s.0),
        ground_energy: model.ground().map(|(_, e)| e),
        h_min,
        h_max,
        h_range: h_min.zip(h_max).map(|(lo, hi)| hi - lo),
        proposal_gap: gap,
        threshold_c: params.c,
        alpha: params.alpha,
    };
    out.write_json("info.json", &report)?;
    Ok(())
}

/// Exact proposal-chain gap: closed form for the spin kernels, exact
/// eigensolve of the flattened chain for enumerable tabular models.

fn exact_proposal_gap(
    kind: &str,
    model: &dyn ModelSpec,
    config: &Config,
) -> Result<Option<f64>, CliError> {
    match kind {
        "ising-hypercube" | "ising-complete" => {
            // 2 / |V|, straight from the flip kernel.
            let m = rebuild_ising(config)?;
            Ok(Some(m.proposal_gap()))
        }
        "potts" => {
            let m = rebuild_potts(config)?;
            Ok(Some(m.proposal_gap()))
        }
        _ => {
            // Exact gap of the proposal chain itself: flatten the
            // energies, keep the edges.
            let Some(n) = model.state_count().filter(|&n| n <= CAP) else {
                return Ok(None);
            };
            let mut edges = Vec::new();
            for i in 0..n {
                for (j, rate) in model.neighbors(landmod::StateId(i)) {
                    if j.0 > i {
                        edges.push((i as usize, j.index(), rate));
                    }
                }
            }
            if edges.is_empty() {
                return Ok(None);
            }
            let flat = TabularModel::new("flat", vec![0.0; n as usize], &edges)?;
            match spectral_gap_of_model(&flat, &LandscapeParams::classical(), CAP) {
                Ok(g) => Ok(Some(g)),
                Err(AnalysisError::Degenerate) => Ok(None),
                Err(e) => Err(e.into()),
            }
        }
    }
}

fn rebuild_ising(config: &Config) -> Result<IsingModel, CliError> {
    let m = &config.model;
    let j = m.j.unwrap_or(1.0);
    let h = m.h.unwrap_or(1.0);
    Ok(match m.kind.as_str() {
        "ising-hypercube" => IsingModel::hypercube(
            m.dim.ok_or_else(|| CliError::config("model.dim required"))?,
            j,
            h,
        )?,
        _ => IsingModel::complete(
            m.n.ok_or_else(|| CliError::config("model.n required"))?,
            j,
            h,
        )?,
    })
}

fn rebuild_potts(config: &Config) -> Result<PottsModel, CliError> {
    let m = &config.model;
    Ok(PottsModel::new(
        m.side.ok_or_else(|| CliError::config("model.side required"))?,
        m.colors.ok_or_else(|| CliError::config("model.colors required"))?,
        m.j.unwrap_or(1.0),
    )?)
}
