// Entanglement between one qubit and an untouched ancilla, and the
// non-Markovianity accumulated from its revivals under both conventions.

use std::error::Error;
use std::f64::consts::PI;

use bellcorr::nonmarkov::{nonmarkovianity_measure, Convention};
use bellcorr::trajectory::tau_grid;

pub fn run_example() -> Result<[(Convention, f64); 2], Box<dyn Error>> {
    let grid = tau_grid(PI, 2000)?;
    let mut out = [(Convention::IncreaseCounting, 0.0), (Convention::Literal, 0.0)];
    for (conv, total) in out.iter_mut() {
        let trace = nonmarkovianity_measure(&grid, *conv)?;
        *total = *trace.i_e.last().expect("non-empty grid");
    }
    Ok(out)
}

fn main() -> Result<(), Box<dyn Error>> {
    for (conv, total) in run_example()? {
        println!("I_E over [0, pi] with the {conv} convention: {total:.6}");
    }
    Ok(())
}
