// Finds the stretches of time where the discord or the classical
// correlations of the reference state stop changing, and the instants where
// the closest classical state jumps between axes.

use std::error::Error;
use std::f64::consts::FRAC_PI_2;

use bellcorr::bell::BellSpectrum;
use bellcorr::dynamics::Tau;
use bellcorr::nonmarkov::{detect_frozen_intervals, detect_switching_times, IntervalSet};
use bellcorr::trajectory::{bell_trajectory, tau_grid};

pub struct Frozen {
    pub discord: IntervalSet,
    pub classical: IntervalSet,
    pub switching_times: Vec<f64>,
    pub frozen_discord_value: f64,
}

pub fn run_example() -> Result<Frozen, Box<dyn Error>> {
    let initial = BellSpectrum::new([0.9, 0.1, 0.0, 0.0])?;
    let grid = tau_grid(FRAC_PI_2, 2000)?;
    let points = bell_trajectory(&initial, &grid)?;
    let d: Vec<f64> = points.iter().map(|p| p.discord).collect();
    let c: Vec<f64> = points.iter().map(|p| p.classical).collect();

    // D also flattens to zero quartically around pi/4; keep only the
    // plateaus at the initial discord.
    let d0 = d[0];
    let mut discord = detect_frozen_intervals(&grid, &d, 1e-6)?;
    discord.0.retain(|iv| {
        let k = grid.iter().position(|&t| t >= iv.start).unwrap_or(0);
        (d[k] - d0).abs() < 1e-6
    });

    Ok(Frozen {
        discord,
        classical: detect_frozen_intervals(&grid, &c, 1e-6)?,
        switching_times: detect_switching_times(&initial, Tau::new(FRAC_PI_2)?, 2000)?,
        frozen_discord_value: d0,
    })
}

fn main() -> Result<(), Box<dyn Error>> {
    let r = run_example()?;
    println!("discord frozen at {:.4} bits on:", r.frozen_discord_value);
    for iv in r.discord.iter() {
        println!("  [{:.4}, {:.4}]", iv.start, iv.end);
    }
    println!("classical correlations frozen on:");
    for iv in r.classical.iter() {
        println!("  [{:.4}, {:.4}]", iv.start, iv.end);
    }
    println!("closest classical state switches at tau = {:?}", r.switching_times);
    Ok(())
}
