//! `influence evolve`: continuum trajectory under a constant net rate.

use std::fs::File;
use std::io::{self, BufWriter};

use influence_core::{evolve_ode, DynamicState, InfluenceRates};

use crate::args::EvolveArgs;
use crate::{CmdResult, Failure, EXIT_OK};

pub fn run(args: EvolveArgs) -> CmdResult {
    let start = DynamicState::from_rapidity(args.tau0, args.phi0, 1.0).map_err(Failure::from_args)?;
    let traj = evolve_ode(start, |_, _| InfluenceRates::net(args.r), args.tau_end - args.tau0, args.dtau)
        .map_err(Failure::from_args)?;
    match &args.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| Failure::io(path, e))?;
            traj.write_csv(BufWriter::new(file)).map_err(|e| Failure::io(path, e))?;
        }
        None => traj
            .write_csv(io::stdout().lock())
            .map_err(|e| Failure::runtime(e.to_string()))?,
    }
    Ok(EXIT_OK)
}
