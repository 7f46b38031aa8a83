//! Oracle-versus-analytic certification of the closed-form closest states.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bell::BellSpectrum;
use crate::correlations::{
    binary_entropy, closest_classical_bd, closest_product, closest_separable_bd,
};
use crate::linalg::relative_entropy;
use crate::oracle::{
    oracle_closest_classical, oracle_closest_product, oracle_closest_separable_bd, SearchConfig,
};

/// Agreement required between the oracle and the analytic closest states.
pub const CERTIFICATION_TOL: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Classical,
    Separable,
    Product,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Classical, Family::Separable, Family::Product];
}

/// Analytic and oracle relative entropies for one state and family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FamilyCheck {
    pub family: Family,
    pub analytic: f64,
    pub oracle: f64,
}

impl FamilyCheck {
    pub fn discrepancy(&self) -> f64 {
        (self.analytic - self.oracle).abs()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StateCheck {
    pub spectrum: BellSpectrum,
    pub checks: [FamilyCheck; 3],
    /// `|max(0, 1 − h(λ_max)) − oracle REE|`.
    pub ree_closed_form_discrepancy: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilySummary {
    pub family: Family,
    pub max_discrepancy: f64,
    /// Largest `oracle − analytic`; positive values mean the search stopped
    /// above the analytic minimum.
    pub max_oracle_excess: f64,
    /// Largest `analytic − oracle`; positive values mean the search beat the
    /// analytic candidate.
    pub max_analytic_excess: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificationReport {
    pub states: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub families: Vec<FamilySummary>,
    pub ree_closed_form_max_discrepancy: f64,
    pub passed: bool,
    /// States with any discrepancy at or above the tolerance.
    pub failures: Vec<StateCheck>,
}

// NaN counts as a failure.
fn within_tolerance(x: f64) -> bool {
    x < CERTIFICATION_TOL
}

/// `n` Bell spectra drawn uniformly from the simplex.
pub fn random_spectra(n: usize, seed: u64) -> Vec<BellSpectrum> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| BellSpectrum::random(&mut rng)).collect()
}

pub fn check_state(spectrum: &BellSpectrum, cfg: &SearchConfig) -> StateCheck {
    let rho = spectrum.to_density();

    let classical = FamilyCheck {
        family: Family::Classical,
        analytic: relative_entropy(&rho, &closest_classical_bd(spectrum)),
        oracle: oracle_closest_classical(&rho, cfg).value,
    };
    let separable_oracle = oracle_closest_separable_bd(spectrum, cfg).value;
    let separable = FamilyCheck {
        family: Family::Separable,
        analytic: relative_entropy(&rho, &closest_separable_bd(spectrum)),
        oracle: separable_oracle,
    };
    let product = FamilyCheck {
        family: Family::Product,
        analytic: relative_entropy(&rho, &closest_product(&rho)),
        oracle: oracle_closest_product(&rho, cfg).value,
    };
    let top = spectrum.max_weight();
    let closed = if top > 0.5 { 1.0 - binary_entropy(top) } else { 0.0 };

    StateCheck {
        spectrum: *spectrum,
        checks: [classical, separable, product],
        ree_closed_form_discrepancy: (closed - separable_oracle).abs(),
    }
}

/// Runs all three oracles on every state and summarises the worst
/// discrepancies per family.
pub fn certify(spectra: &[BellSpectrum], cfg: &SearchConfig) -> CertificationReport {
    let results: Vec<StateCheck> = spectra
        .par_iter()
        .map(|s| check_state(s, cfg))
        .collect();

    let families = Family::ALL
        .iter()
        .enumerate()
        .map(|(k, &family)| {
            let mut summary = FamilySummary {
                family,
                max_discrepancy: 0.0,
                max_oracle_excess: f64::NEG_INFINITY,
                max_analytic_excess: f64::NEG_INFINITY,
            };
            for r in &results {
                let c = r.checks[k];
                summary.max_discrepancy = summary.max_discrepancy.max(c.discrepancy());
                summary.max_oracle_excess = summary.max_oracle_excess.max(c.oracle - c.analytic);
                summary.max_analytic_excess =
                    summary.max_analytic_excess.max(c.analytic - c.oracle);
            }
            summary
        })
        .collect::<Vec<_>>();

    let ree = results
        .iter()
        .map(|r| r.ree_closed_form_discrepancy)
        .fold(0.0, f64::max);
    let failures: Vec<StateCheck> = results
        .into_iter()
        .filter(|r| {
            r.checks.iter().any(|c| !within_tolerance(c.discrepancy()))
                || !within_tolerance(r.ree_closed_form_discrepancy)
        })
        .collect();

    CertificationReport {
        states: spectra.len(),
        seed: cfg.seed,
        tolerance: CERTIFICATION_TOL,
        families,
        ree_closed_form_max_discrepancy: ree,
        passed: failures.is_empty(),
        failures,
    }
}
