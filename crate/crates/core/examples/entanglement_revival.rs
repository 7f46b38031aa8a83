// Sudden death and revival of the relative entropy of entanglement.

use std::error::Error;
use std::f64::consts::PI;

use bellcorr::bell::BellSpectrum;
use bellcorr::nonmarkov::{bell_entanglement_closed_form, detect_death_revival, IntervalSet};
use bellcorr::trajectory::{bell_trajectory, tau_grid};

pub fn run_example() -> Result<IntervalSet, Box<dyn Error>> {
    let initial = BellSpectrum::new([0.9, 0.1, 0.0, 0.0])?;
    let grid = tau_grid(PI, 4000)?;
    let e: Vec<f64> = bell_trajectory(&initial, &grid)?
        .iter()
        .map(|p| p.entanglement)
        .collect();
    let exact = |t: f64| bell_entanglement_closed_form(&initial, t);
    Ok(detect_death_revival(&grid, &e, 1e-12, Some(&exact))?)
}

fn main() -> Result<(), Box<dyn Error>> {
    for iv in run_example()?.iter() {
        println!("entanglement dead on [{:.4}, {:.4}], revives afterwards", iv.start, iv.end);
    }
    Ok(())
}
