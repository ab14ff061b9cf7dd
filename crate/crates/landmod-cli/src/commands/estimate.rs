//! `estimate`: replica experiments for the self-normalized estimator, and
//! `anneal`: empirical annealed-law TV curves against the exact target.

use serde::Serialize;

use landmod::analysis::annealed_tv_experiment;
use landmod::estimator::{
    chernoff_time, exact_mean, plain_time_average, self_normalized, Observable,
};
use landmod::models::ModelSpec;
use landmod::sim::{simulate_homogeneous, RngKey};
use landmod::StateId;

use super::CAP;
use crate::config::Config;
use crate::error::CliError;
use crate::report::{OutputDir, Table};

fn build_observable(config: &Config, model: &dyn ModelSpec) -> Result<Observable, CliError> {
    let Some(section) = &config.observable else {
        return Ok(Observable::indicator(config.x0()));
    };
    let obs = match section.kind.as_str() {
        "indicator" => {
            let state = section
                .state
                .ok_or_else(|| CliError::config("observable.state required for indicator"))?;
            Observable::indicator(StateId(state))
        }
        "constant" => Observable::constant(
            section.value.ok_or_else(|| CliError::config("observable.value required"))?,
        ),
        "energy" => {
            let energies: Vec<f64> = (0..model
                .state_count()
                .ok_or_else(|| CliError::config("energy observable needs an enumerable model"))?)
                .map(|i| model.energy(StateId(i)))
                .collect();
            let bound = energies.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
            Observable::new(bound, move |s: StateId| energies[s.index()])
        }
        other => return Err(CliError::config(format!("unknown observable kind `{other}`"))),
    };
    let obs = match section.sup_bound {
        Some(a) => Observable::new(a, move |s| obs.eval(s)),
        None => obs,
    };
    obs.validate_sup(model, CAP)?;
    Ok(obs)
}

#[derive(Serialize)]
struct EstimateSummary {
    model: String,
    alpha: f64,
    c: f64,
    exact_mean: f64,
    eta: f64,
    replicas: usize,
    chernoff_gap: f64,
    chernoff_z_ratio: f64,
    chernoff_min_pi_f: f64,
    chernoff_time: f64,
}

pub fn cmd_estimate(config: &Config, seed: u64, out: &mut OutputDir) -> Result<(), CliError> {
    let model = config.build_model()?;
    let params = config.params(model.as_ref())?;
    let g = build_observable(config, model.as_ref())?;
    let target = exact_mean(model.as_ref(), &g, CAP)?;
    let eta = config.estimate.eta;
    let replicas = config.run.replicas.max(1);

    let t_grid = if config.run.t_grid.is_empty() {
        vec![config.run.horizon]
    } else {
        config.run.t_grid.clone()
    };
    let starts: Vec<StateId> = config
        .estimate
        .starts
        .clone()
        .unwrap_or_else(|| vec![config.run.x0])
        .into_iter()
        .map(StateId)
        .collect();

    let mut table = Table::new(vec![
        "t",
        "start",
        "estimate-mean",
        "estimate-var",
        "exceedance",
        "half-width",
    ]);
    for (ti, &t) in t_grid.iter().enumerate() {
        for (si, &x0) in starts.iter().enumerate() {
            let mut estimates = Vec::with_capacity(replicas);
            let mut exceed = 0u64;
            for r in 0..replicas {
                let stream = ((ti * starts.len() + si) * replicas + r) as u64;
                let traj =
                    simulate_homogeneous(model.as_ref(), &params, x0, t, RngKey::new(seed, stream));
                let est = if params.is_classical() {
                    plain_time_average(&traj, &g)
                } else {
                    self_normalized(model.as_ref(), &traj, &g, &params)
                };
                if est - target >= eta {
                    exceed += 1;
                }
                estimates.push(est);
            }
            let mean: f64 = estimates.iter().sum::<f64>() / replicas as f64;
            let var: f64 = if replicas > 1 {
                estimates.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>()
                    / (replicas - 1) as f64
            } else {
                0.0
            };
            let p = exceed as f64 / replicas as f64;
            let half_width = (p * (1.0 - p) / replicas as f64).sqrt();
            table.push(vec![
                t.into(),
                x0.0.into(),
                mean.into(),
                var.into(),
                p.into(),
                half_width.into(),
            ]);
        }
    }
    out.write_table("estimate", &table)?;

    let ci = landmod::analysis::chernoff_inputs(model.as_ref(), &params, CAP)?;
    out.write_json(
        "estimate_summary.json",
        &EstimateSummary {
            model: model.name().to_string(),
            alpha: params.alpha,
            c: params.c,
            exact_mean: target,
            eta,
            replicas,
            chernoff_gap: ci.gap,
            chernoff_z_ratio: ci.z_ratio,
            chernoff_min_pi_f: ci.min_pi_f,
            chernoff_time: chernoff_time(eta, config.analyze.eps, g.sup_bound, ci.gap, ci.z_ratio, ci.min_pi_f),
        },
    )?;
    Ok(())
}

#[derive(Serialize)]
struct AnnealSummary {
    model: String,
    schedule: String,
    replicas: usize,
    x0: u64,
    /// Sampling-noise scale of the empirical TV values.
    inflation: f64,
}

pub fn cmd_anneal(config: &Config, seed: u64, out: &mut OutputDir) -> Result<(), CliError> {
    let model = config.build_model()?;
    let params = config.params(model.as_ref())?;
    let schedule = config
        .schedule()?
        .ok_or_else(|| CliError::config("anneal requires a [schedule] section"))?;
    let t_grid = if config.run.t_grid.is_empty() {
        let t = config.run.horizon;
        vec![t / 100.0, t / 10.0, t]
    } else {
        config.run.t_grid.clone()
    };
    let replicas = config.run.replicas.max(1);

    let result = annealed_tv_experiment(
        model.as_ref(),
        params.f,
        params.c,
        &schedule,
        &t_grid,
        config.x0(),
        replicas,
        seed,
        CAP,
    )?;

    let mut table = Table::new(vec!["t", "tv", "alpha"]);
    for p in &result.points {
        table.push(vec![p.t.into(), p.tv.into(), schedule.alpha(p.t).into()]);
    }
    out.write_table("anneal_tv", &table)?;
    out.write_json(
        "anneal.json",
        &AnnealSummary {
            model: model.name().to_string(),
            schedule: format!("{schedule:?}"),
            replicas,
            x0: config.run.x0,
            inflation: result.inflation,
        },
    )?;
    Ok(())
}
