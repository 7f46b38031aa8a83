// Quantifiers for a state with coherences outside the Bell basis. The
// closest classical state comes from the oracle here, and no entanglement
// value is reported.

use std::error::Error;

use bellcorr::bell::{bell_spectrum_of, BellLabel};
use bellcorr::correlations::{quantifier_report, CorrelationReport};
use bellcorr::linalg::{ket2, TwoQubitState};

pub fn run_example() -> Result<CorrelationReport, Box<dyn Error>> {
    // Equal mixture of |1+> and the product state |00>.
    let bell = BellLabel::OnePlus.projector();
    let product = TwoQubitState::pure(&ket2(0, 0));
    let rho = TwoQubitState::new((bell.matrix() + product.matrix()).scale(0.5))?;
    assert!(!bell_spectrum_of(&rho).is_bell_diagonal());
    Ok(quantifier_report(&rho))
}

fn main() -> Result<(), Box<dyn Error>> {
    let r = run_example()?;
    println!("total correlations     T = {:.6} bits", r.total);
    println!("quantum discord        D = {:.6} bits", r.discord);
    println!("classical correlations C = {:.6} bits", r.classical);
    println!("negativity               = {:.6} (PPT: {})", r.negativity, r.ppt);
    println!("c-vector                 = {:?}", r.c_vector.to_array());
    Ok(())
}
