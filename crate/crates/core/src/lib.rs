//! Correlation dynamics of two qubits coupled to local random external fields.
//!
//! Each qubit sees a field whose phase is `0` or `π` with equal probability.
//! Averaging over the field turns Bell-diagonal states into Bell-diagonal
//! states, so the total correlations, quantum discord, classical correlations
//! and relative entropy of entanglement all have closed forms along the
//! trajectory. Every closed-form closest state is cross-checked by a seeded
//! brute-force search in [`oracle`].
//!
//! The runnable programs in `examples/` cover one capability each:
//!
//! | example | shows |
//! |---|---|
//! | `evolve_reference_state` | a full `T, D, C, E` trajectory as CSV |
//! | `frozen_correlations` | intervals where discord or classical correlations stay constant |
//! | `entanglement_revival` | sudden death and revival of entanglement |
//! | `ancilla_nonmarkovianity` | the ancilla protocol and the accumulated `I_E` |
//! | `composition_law` | the failure of the divisibility law for the averaged map |
//! | `oracle_certification` | analytic closest states checked against the searches |
//! | `general_state_report` | quantifiers for a state outside the Bell-diagonal family |
//!
//! ```
//! use bellcorr::bell::BellSpectrum;
//! use bellcorr::correlations::bell_report;
//!
//! let rho = BellSpectrum::new([0.9, 0.1, 0.0, 0.0]).unwrap();
//! let r = bell_report(&rho);
//! assert!((r.total - 1.5310).abs() < 1e-4);
//! assert!((r.discord - 0.5310).abs() < 1e-4);
//! ```

mod error;

pub mod bell;
pub mod certify;
pub mod cli;
pub mod correlations;
pub mod dynamics;
pub mod linalg;
pub mod nonmarkov;
pub mod oracle;
pub mod trajectory;

pub use error::{Error, Result};
