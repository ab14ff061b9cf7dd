//! `analyze`: exact spectral, height, bias, envelope, bound, and
//! gap-decay reports. Exit code 0 only if every asserted inequality holds.

use serde::Serialize;

use landmod::analysis::{
    annealed_mixing_time_bound, bias_bound, build_generator, chernoff_inputs,
    convergence_envelope_curve, critical_height, gap_decay_constant, holley_stroock_bound,
    spectral_gap, TvSolver,
};
use landmod::estimator::chernoff_time;
use landmod::landscape::LandscapeParams;
use landmod::models::ModelSpec;
use landmod::sim::schedule_p_from_model;
use landmod::StateId;

use super::CAP;
use crate::config::Config;
use crate::error::CliError;
use crate::report::{OutputDir, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnalyzeKind {
    Gap,
    Heights,
    Bias,
    Envelope,
    Bounds,
    ConditionK,
}

impl AnalyzeKind {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "gap" => Self::Gap,
            "heights" => Self::Heights,
            "bias" => Self::Bias,
            "envelope" => Self::Envelope,
            "bounds" => Self::Bounds,
            "condition-k" => Self::ConditionK,
            other => {
                return Err(CliError::config(format!(
                    "unknown analysis `{other}` (gap|heights|bias|envelope|bounds|condition-k)"
                )))
            }
        })
    }
}

pub fn cmd_analyze(config: &Config, kind: AnalyzeKind, out: &mut OutputDir) -> Result<(), CliError> {
    let model = config.build_model()?;
    let params = config.params(model.as_ref())?;
    match kind {
        AnalyzeKind::Gap => analyze_gap(config, model.as_ref(), &params, out),
        AnalyzeKind::Heights => analyze_heights(config, model.as_ref(), &params, out),
        AnalyzeKind::Bias => analyze_bias(model.as_ref(), &params, out),
        AnalyzeKind::Envelope => analyze_envelope(config, model.as_ref(), &params, out),
        AnalyzeKind::Bounds => analyze_bounds(config, model.as_ref(), &params, out),
        AnalyzeKind::ConditionK => analyze_condition_k(config, model.as_ref(), &params, out),
    }
}

#[derive(Serialize)]
struct GapReport {
    model: String,
    alpha: f64,
    c: f64,
    gap_classical: f64,
    gap_modified: f64,
    speedup: f64,
}

fn analyze_gap(
    _config: &Config,
    model: &dyn ModelSpec,
    params: &LandscapeParams,
    out: &mut OutputDir,
) -> Result<(), CliError> {
    let g0 = build_generator(model, &LandscapeParams::classical(), CAP)?;
    let gf = build_generator(model, params, CAP)?;
    let gap0 = spectral_gap(&g0)?;
    let gapf = spectral_gap(&gf)?;
    out.write_json(
        "analyze_gap.json",
        &GapReport {
            model: model.name().to_string(),
            alpha: params.alpha,
            c: params.c,
            gap_classical: gap0,
            gap_modified: gapf,
            speedup: gapf / gap0,
        },
    )?;
    Ok(())
}

#[derive(Serialize)]
struct HeightsReport {
    model: String,
    alpha: f64,
    c: f64,
    classical_height: f64,
    classical_witness: (u64, u64),
    classical_bottleneck_energy: f64,
    modified_height: f64,
    modified_witness: (u64, u64),
    modified_bottleneck_energy: f64,
    reduced: bool,
}

fn analyze_heights(
    _config: &Config,
    model: &dyn ModelSpec,
    params: &LandscapeParams,
    out: &mut OutputDir,
) -> Result<(), CliError> {
    let m0 = critical_height(model, None, CAP)?;
    let mf = critical_height(model, Some(params), CAP)?;
    let reduced = mf.value <= m0.value + 1e-12;
    out.write_json(
        "analyze_heights.json",
        &HeightsReport {
            model: model.name().to_string(),
            alpha: params.alpha,
            c: params.c,
            classical_height: m0.value,
            classical_witness: (m0.witness.0 .0, m0.witness.1 .0),
            classical_bottleneck_energy: m0.bottleneck_energy,
            modified_height: mf.value,
            modified_witness: (mf.witness.0 .0, mf.witness.1 .0),
            modified_bottleneck_energy: mf.bottleneck_energy,
            reduced,
        },
    )?;
    if !reduced {
        return Err(CliError::assertion(format!(
            "modified critical height {} exceeds classical {}",
            mf.value, m0.value
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct BiasReport {
    model: String,
    alpha: f64,
    c: f64,
    bound: f64,
    exact_tv: f64,
    xi: f64,
    states_above_threshold: usize,
    within_bound: bool,
}

fn analyze_bias(
    model: &dyn ModelSpec,
    params: &LandscapeParams,
    out: &mut OutputDir,
) -> Result<(), CliError> {
    let b = bias_bound(model, params, CAP)?;
    let within = b.exact_tv <= b.bound + 1e-12;
    out.write_json(
        "analyze_bias.json",
        &BiasReport {
            model: model.name().to_string(),
            alpha: params.alpha,
            c: params.c,
            bound: b.bound,
            exact_tv: b.exact_tv,
            xi: b.xi,
            states_above_threshold: b.states_above_threshold,
            within_bound: within,
        },
    )?;
    if !within {
        return Err(CliError::assertion(format!(
            "exact bias TV {} above the closed-form bound {}",
            b.exact_tv, b.bound
        )));
    }
    Ok(())
}

fn auto_time_grid(gap: f64, points: usize) -> Vec<f64> {
    let horizon = 3.0 / gap;
    (1..=points).map(|k| horizon * k as f64 / points as f64).collect()
}

#[derive(Serialize)]
struct EnvelopeReport {
    model: String,
    alpha: f64,
    c: f64,
    gap: f64,
    states: usize,
    holds: bool,
}

fn analyze_envelope(
    config: &Config,
    model: &dyn ModelSpec,
    params: &LandscapeParams,
    out: &mut OutputDir,
) -> Result<(), CliError> {
    let g = build_generator(model, params, CAP)?;
    let gap = spectral_gap(&g)?;
    let times = if config.analyze.t_grid.is_empty() {
        auto_time_grid(gap, 20)
    } else {
        config.analyze.t_grid.clone()
    };
    let n = g.n();

    // Exact curves from every start: the lower bound applies to the max.
    let solver = TvSolver::new(&g)?;
    let mut per_start = Vec::with_capacity(n);
    for x in 0..n {
        per_start.push(solver.curve(StateId(x as u64), &times)?);
    }
    let envelopes = convergence_envelope_curve(&g, config.x0(), &times)?;

    let mut table = Table::new(vec!["t", "lower", "exact_x0", "max_exact", "upper"]);
    let mut holds = true;
    for (k, env) in envelopes.iter().enumerate() {
        let max_exact = per_start.iter().map(|c| c[k].1).fold(0.0, f64::max);
        holds &= max_exact >= env.lower - 1e-12;
        holds &= per_start.iter().all(|c| c[k].1 <= env.upper + 1e-12);
        table.push(vec![
            env.t.into(),
            env.lower.into(),
            env.exact.into(),
            max_exact.into(),
            env.upper.into(),
        ]);
    }
    out.write_table("envelope", &table)?;
    out.write_json(
        "analyze_envelope.json",
        &EnvelopeReport {
            model: model.name().to_string(),
            alpha: params.alpha,
            c: params.c,
            gap,
            states: n,
            holds,
        },
    )?;
    if !holds {
        return Err(CliError::assertion("exact TV escaped the convergence envelope".to_string()));
    }
    Ok(())
}

#[derive(Serialize)]
struct BoundsReport {
    model: String,
    alpha: f64,
    c: f64,
    gap_modified: f64,
    max_mod_energy: f64,
    proposal_exit_bound: f64,
    holley_stroock: f64,
    gap_dominates_bound: bool,
    z_ratio: f64,
    min_pi_f: f64,
    chernoff_eta: f64,
    chernoff_eps: f64,
    chernoff_time: f64,
    schedule_k: f64,
    c_const: f64,
    m_value: f64,
    schedule_p: f64,
    mixing_bound: f64,
}

fn analyze_bounds(
    config: &Config,
    model: &dyn ModelSpec,
    params: &LandscapeParams,
    out: &mut OutputDir,
) -> Result<(), CliError> {
    let g = build_generator(model, params, CAP)?;
    let ci = chernoff_inputs(model, params, CAP)?;
    let max_mod = g.mod_energies().iter().fold(0.0f64, |a, &b| a.max(b));
    let proposal_gap = proposal_gap_for(config, model)?;
    let hs = holley_stroock_bound(proposal_gap, max_mod);
    let dominates = ci.gap >= hs - 1e-15;

    let eta = config.estimate.eta;
    let eps = config.analyze.eps;
    let t_chernoff = chernoff_time(eta, eps, observable_bound(config), ci.gap, ci.z_ratio, ci.min_pi_f);

    let (h_min, h_max) = g.energy_range();
    let states = model.state_count().unwrap_or(g.n() as u64);
    let (p, m_value) = schedule_p_from_model(config.analyze.k, h_max - h_min, states, config.analyze.c_const);
    let mixing =
        annealed_mixing_time_bound(states, h_max - h_min, config.analyze.k, config.analyze.c_const, eps);

    out.write_json(
        "analyze_bounds.json",
        &BoundsReport {
            model: model.name().to_string(),
            alpha: params.alpha,
            c: params.c,
            gap_modified: ci.gap,
            max_mod_energy: max_mod,
            proposal_exit_bound: proposal_gap,
            holley_stroock: hs,
            gap_dominates_bound: dominates,
            z_ratio: ci.z_ratio,
            min_pi_f: ci.min_pi_f,
            chernoff_eta: eta,
            chernoff_eps: eps,
            chernoff_time: t_chernoff,
            schedule_k: config.analyze.k,
            c_const: config.analyze.c_const,
            m_value,
            schedule_p: p,
            mixing_bound: mixing.value,
        },
    )?;
    if !dominates {
        return Err(CliError::assertion(format!(
            "exact gap {} below the stability bound {hs}",
            ci.gap
        )));
    }
    Ok(())
}

fn observable_bound(config: &Config) -> f64 {
    config
        .observable
        .as_ref()
        .and_then(|o| o.sup_bound)
        .unwrap_or(1.0)
}

fn proposal_gap_for(config: &Config, model: &dyn ModelSpec) -> Result<f64, CliError> {
    match config.model.kind.as_str() {
        "ising-hypercube" => {
            let dim = config.model.dim.ok_or_else(|| CliError::config("model.dim required"))?;
            Ok(2.0 / f64::from(1u32 << dim))
        }
        "ising-complete" => {
            let n = config.model.n.ok_or_else(|| CliError::config("model.n required"))?;
            Ok(2.0 / f64::from(n))
        }
        "potts" => {
            let colors = f64::from(config.model.colors.unwrap_or(2));
            let side = f64::from(config.model.side.unwrap_or(3));
            Ok(colors / ((colors - 1.0) * side * side))
        }
        _ => {
            // Exact gap of the proposal chain: flatten the landscape.
            let n = model
                .state_count()
                .ok_or_else(|| CliError::config("proposal gap needs an enumerable model"))?;
            let mut edges = Vec::new();
            for i in 0..n {
                for (j, rate) in model.neighbors(StateId(i)) {
                    if j.0 > i {
                        edges.push((i as usize, j.index(), rate));
                    }
                }
            }
            let flat = landmod::models::TabularModel::new("flat", vec![0.0; n as usize], &edges)?;
            Ok(landmod::analysis::spectral_gap_of_model(
                &flat,
                &LandscapeParams::classical(),
                CAP,
            )?)
        }
    }
}

#[derive(Serialize)]
struct ConditionKReport {
    model: String,
    c: f64,
    k: f64,
    positive: bool,
}

fn analyze_condition_k(
    config: &Config,
    model: &dyn ModelSpec,
    params: &LandscapeParams,
    out: &mut OutputDir,
) -> Result<(), CliError> {
    let gd = gap_decay_constant(model, params.c, &config.analyze.beta_grid, CAP)?;
    let mut table = Table::new(vec!["beta", "gap", "k_beta"]);
    for &(beta, gap, k_beta) in &gd.per_beta {
        table.push(vec![beta.into(), gap.into(), k_beta.into()]);
    }
    out.write_table("condition_k", &table)?;
    let positive = gd.k > 0.0;
    out.write_json(
        "analyze_condition_k.json",
        &ConditionKReport { model: model.name().to_string(), c: params.c, k: gd.k, positive },
    )?;
    if !positive {
        return Err(CliError::assertion("gap-decay constant is not positive".to_string()));
    }
    Ok(())
}
