// The averaged map is not divisible: evolving to tau2 directly differs from
// evolving to tau1 and restarting the field average from there.

use std::error::Error;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use bellcorr::bell::BellSpectrum;
use bellcorr::dynamics::Tau;
use bellcorr::nonmarkov::composition_violation;

pub struct Violation {
    pub tau1: f64,
    pub tau2: f64,
    pub distance: f64,
}

pub fn run_example() -> Result<Vec<Violation>, Box<dyn Error>> {
    let initial = BellSpectrum::new([0.9, 0.1, 0.0, 0.0])?;
    let pairs = [(0.1, 0.3), (FRAC_PI_4, FRAC_PI_2), (0.5, 1.2)];
    pairs
        .iter()
        .map(|&(t1, t2)| {
            let distance = composition_violation(&initial, Tau::new(t1)?, Tau::new(t2)?)?;
            Ok(Violation { tau1: t1, tau2: t2, distance })
        })
        .collect()
}

fn main() -> Result<(), Box<dyn Error>> {
    for v in run_example()? {
        println!("tau1 = {:.4}, tau2 = {:.4}: trace distance {:.6}", v.tau1, v.tau2, v.distance);
    }
    Ok(())
}
