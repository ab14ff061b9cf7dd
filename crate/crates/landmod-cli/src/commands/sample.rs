//! `sample`: dump one trajectory, homogeneous at the configured strength
//! or annealed when a schedule section is present.

use landmod::sim::{simulate_annealed, simulate_homogeneous, RngKey};

use super::params_desc;
use crate::config::Config;
use crate::error::CliError;
use crate::report::{trajectory_csv, OutputDir};

pub fn cmd_sample(config: &Config, seed: u64, out: &mut OutputDir) -> Result<(), CliError> {
    let model = config.build_model()?;
    let params = config.params(model.as_ref())?;
    let x0 = config.x0();
    let horizon = config.run.horizon;
    let key = RngKey::root(seed);

    let (traj, desc) = match config.schedule()? {
        Some(schedule) => {
            let traj = simulate_annealed(
                model.as_ref(),
                params.f,
                params.c,
                &schedule,
                x0,
                horizon,
                key,
            );
            (traj, format!("{} schedule={schedule:?}", params_desc(&params)))
        }
        None => {
            let traj = simulate_homogeneous(model.as_ref(), &params, x0, horizon, key);
            (traj, params_desc(&params))
        }
    };

    out.write_text("trajectory.csv", &trajectory_csv(model.name(), &desc, &traj))?;
    Ok(())
}
