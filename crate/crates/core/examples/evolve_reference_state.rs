// Correlation trajectory of `0.9 |1+><1+| + 0.1 |1-><1-|` over one period
// of the general dynamics, written as CSV to standard output.
//
// Run with `cargo run --example evolve_reference_state`.

use std::error::Error;
use std::f64::consts::PI;

use bellcorr::bell::BellSpectrum;
use bellcorr::dynamics::FieldChannel;
use bellcorr::trajectory::{tau_grid, trajectory_table, Table};

pub fn run_example() -> Result<Table, Box<dyn Error>> {
    let initial = BellSpectrum::new([0.9, 0.1, 0.0, 0.0])?;
    let grid = tau_grid(PI, 200)?;
    Ok(trajectory_table(&initial, &FieldChannel::default(), &grid, None)?)
}

fn main() -> Result<(), Box<dyn Error>> {
    let table = run_example()?;
    table.write_csv(std::io::stdout().lock())?;
    Ok(())
}
