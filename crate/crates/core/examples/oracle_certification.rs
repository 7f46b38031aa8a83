// Checks the closed-form closest classical, separable and product states
// against seeded grid-plus-compass searches on a few random states.

use std::error::Error;

use bellcorr::certify::{certify, random_spectra, CertificationReport};
use bellcorr::oracle::SearchConfig;

pub fn run_example() -> Result<CertificationReport, Box<dyn Error>> {
    let cfg = SearchConfig::default();
    let spectra = random_spectra(5, cfg.seed);
    Ok(certify(&spectra, &cfg))
}

fn main() -> Result<(), Box<dyn Error>> {
    let report = run_example()?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}
