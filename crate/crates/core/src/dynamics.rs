//! Random-external-fields channel.
//!
//! Each qubit is driven by a classical resonant field whose phase is 0 or π
//! with probability ½. In the rotating frame the branch evolution is
//!
//! ```text
//!            |1>                  |0>
//! |1>  [  cos τ          -e^{-iφ} sin τ ]
//! |0>  [  e^{iφ} sin τ    cos τ         ]
//! ```
//!
//! with `τ = g t`. Internally the matrix is reordered into the computational
//! ordering `{|0>, |1>}`, which swaps both rows and columns.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bell::{BellLabel, BellSpectrum};
use crate::error::{Error, Result};
use crate::linalg::{kron, re, CMatrix, QubitState, TwoQubitState};
use num_complex::Complex64;

/// Field phases of the two branches.
pub const PHASES: [f64; 2] = [0.0, PI];
/// Probability of each branch.
pub const BRANCH_PROBABILITY: f64 = 0.5;

const PHASE_TOL: f64 = 1e-12;

/// Dimensionless time `τ = g t`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Tau(pub(crate) f64);

impl Tau {
    pub const ZERO: Tau = Tau(0.0);

    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::NegativeTime(value));
        }
        Ok(Self(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Coupling and (documentation-only) qubit frequency of the local fields.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldChannel {
    g: f64,
    /// The dynamics is written in the frame rotating at `omega`, so it never
    /// enters the evolution.
    omega: Option<f64>,
}

impl Default for FieldChannel {
    fn default() -> Self {
        Self { g: 1.0, omega: None }
    }
}

impl FieldChannel {
    pub fn new(g: f64) -> Result<Self> {
        if !g.is_finite() || g <= 0.0 {
            return Err(Error::InvalidArgument(format!("coupling g must be positive, got {g}")));
        }
        Ok(Self { g, omega: None })
    }

    pub fn with_omega(mut self, omega: f64) -> Self {
        self.omega = Some(omega);
        self
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn omega(&self) -> Option<f64> {
        self.omega
    }

    pub fn phases(&self) -> [f64; 2] {
        PHASES
    }

    pub fn branch_probabilities(&self) -> [f64; 2] {
        [BRANCH_PROBABILITY; 2]
    }

    pub fn tau_at(&self, t: f64) -> Result<Tau> {
        Tau::new(self.g * t)
    }

    pub fn time_at(&self, tau: Tau) -> f64 {
        tau.value() / self.g
    }

    pub fn evolve_state(&self, rho: &TwoQubitState, t: f64) -> Result<TwoQubitState> {
        Ok(two_qubit_map(rho, self.tau_at(t)?))
    }

    pub fn evolve_spectrum(&self, spectrum: &BellSpectrum, t: f64) -> Result<BellSpectrum> {
        Ok(evolve_bell_spectrum(spectrum, self.tau_at(t)?))
    }
}

fn check_phase(phase: f64) -> Result<()> {
    if PHASES.iter().any(|p| (phase - p).abs() <= PHASE_TOL) {
        Ok(())
    } else {
        Err(Error::UnsupportedPhase(phase))
    }
}

/// Branch unitary in the `{|1>, |0>}` ordering used when the model is
/// written down.
pub fn branch_unitary(phase: f64, tau: Tau) -> Result<CMatrix<2>> {
    check_phase(phase)?;
    let (s, cs) = tau.value().sin_cos();
    let e = Complex64::from_polar(1.0, phase);
    Ok(CMatrix::<2>::new(re(cs), -e.conj() * s, e * s, re(cs)))
}

/// Branch unitary in the computational `{|0>, |1>}` ordering.
pub fn branch_unitary_computational(phase: f64, tau: Tau) -> Result<CMatrix<2>> {
    let u = branch_unitary(phase, tau)?;
    Ok(CMatrix::<2>::new(u[(1, 1)], u[(1, 0)], u[(0, 1)], u[(0, 0)]))
}

fn computational_branches(tau: Tau) -> [CMatrix<2>; 2] {
    PHASES.map(|phase| branch_unitary_computational(phase, tau).expect("model phase"))
}

/// `Λ_S(ρ) = ½ Σ_i U_i ρ U_i†`.
pub fn single_qubit_map(rho: &QubitState, tau: Tau) -> QubitState {
    let mut out = CMatrix::<2>::zeros();
    for u in computational_branches(tau) {
        out += u * rho.matrix() * u.adjoint() * re(BRANCH_PROBABILITY);
    }
    QubitState::from_channel_output(out)
}

/// `Λ(ρ) = ¼ Σ_{i,j} (U_i ⊗ U_j) ρ (U_i ⊗ U_j)†`.
pub fn two_qubit_map(rho: &TwoQubitState, tau: Tau) -> TwoQubitState {
    let branches = computational_branches(tau);
    let mut out = CMatrix::<4>::zeros();
    for ua in &branches {
        for ub in &branches {
            let w = kron(ua, ub);
            out += w * rho.matrix() * w.adjoint() * re(BRANCH_PROBABILITY * BRANCH_PROBABILITY);
        }
    }
    TwoQubitState::from_channel_output(out)
}

/// Identity on qubit A (the ancilla), the single-qubit channel on B.
pub fn ancilla_evolve(rho: &TwoQubitState, tau: Tau) -> TwoQubitState {
    let id = CMatrix::<2>::identity();
    let mut out = CMatrix::<4>::zeros();
    for u in computational_branches(tau) {
        let w = kron(&id, &u);
        out += w * rho.matrix() * w.adjoint() * re(BRANCH_PROBABILITY);
    }
    TwoQubitState::from_channel_output(out)
}

/// Fraction of each Bell weight transferred to its partner, `sin²(2τ)/2`.
pub fn mixing_fraction(tau: Tau) -> f64 {
    let s = (2.0 * tau.value()).sin();
    0.5 * s * s
}

/// `λ_k(τ) = λ_k(0)(1 - f) + λ_partner(k)(0) f`.
pub fn evolve_bell_spectrum(spectrum: &BellSpectrum, tau: Tau) -> BellSpectrum {
    let f = mixing_fraction(tau);
    let w = spectrum.weights();
    let evolved = BellLabel::ALL.map(|k| w[k.index()] * (1.0 - f) + w[k.partner().index()] * f);
    // Convex combination of a normalised vector and its permutation.
    BellSpectrum::normalized(evolved, 1e-9).expect("partner mixing preserves normalisation")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bell::bell_spectrum_of;
    use crate::linalg::{ket2, CVector};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, FRAC_PI_8};

    fn tau(x: f64) -> Tau {
        Tau::new(x).unwrap()
    }

    fn max_abs<const D: usize>(m: &CMatrix<D>) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn tau_rejects_negative() {
        assert!(Tau::new(-1e-3).is_err());
        assert!(Tau::new(f64::NAN).is_err());
        assert!(FieldChannel::new(0.0).is_err());
        let ch = FieldChannel::new(2.0).unwrap();
        assert_eq!(ch.tau_at(0.5).unwrap(), tau(1.0));
        assert_eq!(ch.time_at(tau(1.0)), 0.5);
    }

    #[test]
    fn branch_unitary_examples() {
        for phase in PHASES {
            let u = branch_unitary(phase, Tau::ZERO).unwrap();
            assert!(max_abs(&(u - CMatrix::<2>::identity())) < 1e-15);
        }
        let u = branch_unitary(0.0, tau(FRAC_PI_2)).unwrap();
        let want = CMatrix::<2>::new(re(0.0), re(-1.0), re(1.0), re(0.0));
        assert!(max_abs(&(u - want)) < 1e-15);

        let h = FRAC_1_SQRT_2;
        let u = branch_unitary(PI, tau(FRAC_PI_4)).unwrap();
        let want = CMatrix::<2>::new(re(h), re(h), re(-h), re(h));
        assert!(max_abs(&(u - want)) < 1e-15);
    }

    #[test]
    fn branch_unitary_rejects_other_phases() {
        assert!(matches!(
            branch_unitary(FRAC_PI_2, Tau::ZERO),
            Err(Error::UnsupportedPhase(_))
        ));
    }

    #[test]
    fn branch_unitaries_are_unitary() {
        for phase in PHASES {
            for k in 0..50 {
                let u = branch_unitary_computational(phase, tau(0.13 * k as f64)).unwrap();
                assert!(max_abs(&(u * u.adjoint() - CMatrix::<2>::identity())) < 1e-12);
            }
        }
    }

    #[test]
    fn single_qubit_examples() {
        let half = QubitState::maximally_mixed();
        assert!(single_qubit_map(&half, tau(0.7)).max_abs_diff(&half) < 1e-15);

        let zero = QubitState::pure(&CVector::<2>::new(re(1.0), re(0.0)));
        let t = 0.37;
        let out = single_qubit_map(&zero, tau(t));
        let want = QubitState::diagonal([t.cos().powi(2), t.sin().powi(2)]).unwrap();
        assert!(out.max_abs_diff(&want) < 1e-15);

        let plus = QubitState::pure(&CVector::<2>::new(re(0.6), Complex64::new(0.0, 0.8)));
        assert!(single_qubit_map(&plus, Tau::ZERO).max_abs_diff(&plus) < 1e-15);
    }

    #[test]
    fn two_qubit_examples() {
        let mixed = TwoQubitState::maximally_mixed();
        assert!(two_qubit_map(&mixed, tau(1.3)).max_abs_diff(&mixed) < 1e-15);

        let rho = BellSpectrum::new([0.9, 0.1, 0.0, 0.0]).unwrap().to_density();
        let out = two_qubit_map(&rho, tau(FRAC_PI_4));
        let want = BellSpectrum::new([0.45, 0.05, 0.05, 0.45]).unwrap().to_density();
        assert!(out.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn full_period_for_bell_diagonal_but_not_general_states() {
        let rho = BellSpectrum::new([0.3, 0.2, 0.4, 0.1]).unwrap().to_density();
        assert!(two_qubit_map(&rho, tau(FRAC_PI_2)).max_abs_diff(&rho) < 1e-15);

        // At τ = π/2 every branch is a spin flip, so |00> goes to |11>.
        let corner = TwoQubitState::pure(&ket2(0, 0));
        let flipped = two_qubit_map(&corner, tau(FRAC_PI_2));
        assert!(flipped.max_abs_diff(&TwoQubitState::pure(&ket2(1, 1))) < 1e-15);
        assert!(two_qubit_map(&corner, tau(PI)).max_abs_diff(&corner) < 1e-15);
    }

    #[test]
    fn mixing_fraction_examples() {
        assert_eq!(mixing_fraction(Tau::ZERO), 0.0);
        assert!((mixing_fraction(tau(FRAC_PI_4)) - 0.5).abs() < 1e-15);
        assert!((mixing_fraction(tau(FRAC_PI_8)) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn spectrum_examples() {
        let s = BellSpectrum::new([0.9, 0.1, 0.0, 0.0]).unwrap();
        assert_eq!(evolve_bell_spectrum(&s, Tau::ZERO), s);
        let out = evolve_bell_spectrum(&s, tau(FRAC_PI_4));
        let want = BellSpectrum::new([0.45, 0.05, 0.05, 0.45]).unwrap();
        assert!(out.max_abs_diff(&want) < 1e-15);

        let mixed = BellSpectrum::maximally_mixed();
        assert!(evolve_bell_spectrum(&mixed, tau(0.77)).max_abs_diff(&mixed) < 1e-15);
    }

    #[test]
    fn each_bell_state_feeds_its_partner() {
        let t = tau(0.3);
        let f = mixing_fraction(t);
        for label in BellLabel::ALL {
            let out = bell_spectrum_of(&two_qubit_map(&label.projector(), t));
            assert!(out.residual < 1e-14);
            for other in BellLabel::ALL {
                let want = if other == label {
                    1.0 - f
                } else if other == label.partner() {
                    f
                } else {
                    0.0
                };
                assert!((out.spectrum.get(other) - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn ancilla_examples() {
        let t = 0.61;
        let out = ancilla_evolve(&BellLabel::TwoPlus.projector(), tau(t));
        let want = BellSpectrum::new([0.0, t.sin().powi(2), t.cos().powi(2), 0.0])
            .unwrap()
            .to_density();
        assert!(out.max_abs_diff(&want) < 1e-15);

        let mixed = TwoQubitState::maximally_mixed();
        assert!(ancilla_evolve(&mixed, tau(t)).max_abs_diff(&mixed) < 1e-15);
        let rho = TwoQubitState::pure(&ket2(0, 1));
        assert!(ancilla_evolve(&rho, Tau::ZERO).max_abs_diff(&rho) < 1e-15);
    }
}
