//! Relative-entropy correlation quantifiers.
//!
//! For a state ρ with closest product state π_ρ, closest classical state χ_ρ
//! and closest separable state σ_ρ:
//!
//! * total correlations `T = S(ρ‖π_ρ) = S(π_ρ) − S(ρ)`
//! * discord `D = S(ρ‖χ_ρ) = S(χ_ρ) − S(ρ)`
//! * classical correlations `C = S(π_{χ_ρ}) − S(χ_ρ)`
//! * entanglement `E = S(ρ‖σ_ρ)`
//!
//! Bell-diagonal states have closed-form closest states. Other states get T
//! exactly, D and C from the brute-force classical-state search in
//! [`crate::oracle`], and only a PPT witness in place of E.

use serde::Serialize;

use crate::bell::{bell_spectrum_of, BellLabel, BellSpectrum};
use crate::linalg::{
    entropy_bits, hermitian_eig, kron, partial_trace, partial_transpose, pauli_x, pauli_y,
    pauli_z, product_state, re, relative_entropy, von_neumann_entropy, CMatrix, Subsystem,
    TwoQubitState,
};
use crate::oracle::{oracle_closest_classical, SearchConfig};

/// Binary entropy in bits, `h(x) = −x log₂x − (1−x) log₂(1−x)`.
pub fn binary_entropy(x: f64) -> f64 {
    entropy_bits(&[x, 1.0 - x]).unwrap_or(f64::NAN)
}

/// `c_k = Tr[ρ (σ_k ⊗ σ_k)]` for k = x, y, z.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CorrelationVector {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl CorrelationVector {
    pub fn to_array(self) -> [f64; 3] {
        [self.c1, self.c2, self.c3]
    }

    pub fn from_array(c: [f64; 3]) -> Self {
        Self {
            c1: c[0],
            c2: c[1],
            c3: c[2],
        }
    }

    /// `c = Σ_k λ_k s_k` with `s_k` the correlation signs of each Bell state.
    pub fn from_spectrum(spectrum: &BellSpectrum) -> Self {
        let mut c = [0.0; 3];
        for label in BellLabel::ALL {
            let w = spectrum.get(label);
            for (ck, sk) in c.iter_mut().zip(label.correlation_signs()) {
                *ck += w * sk;
            }
        }
        Self::from_array(c)
    }

    /// Inverse of [`Self::from_spectrum`]: `λ_k = (1 + s_k·c)/4`.
    pub fn to_spectrum(self) -> crate::Result<BellSpectrum> {
        let c = self.to_array();
        let w = BellLabel::ALL.map(|label| {
            let dot: f64 = label
                .correlation_signs()
                .iter()
                .zip(c.iter())
                .map(|(s, x)| s * x)
                .sum();
            let v = 0.25 * (1.0 + dot);
            // rounding can push an exactly-zero weight a hair below zero
            if v < 0.0 && v > -1e-14 {
                0.0
            } else {
                v
            }
        });
        BellSpectrum::normalized(w, 1e-12)
    }

    /// Index (0-based) of the largest `|c_k|`, ties to the lowest index.
    pub fn dominant_axis(self) -> usize {
        let c = self.to_array();
        let mut m = 0;
        for k in 1..3 {
            if c[k].abs() > c[m].abs() {
                m = k;
            }
        }
        m
    }
}

fn pauli_pairs() -> [CMatrix<4>; 3] {
    [pauli_x(), pauli_y(), pauli_z()].map(|p| kron(&p, &p))
}

pub fn correlation_c_vector(rho: &TwoQubitState) -> CorrelationVector {
    CorrelationVector::from_array(pauli_pairs().map(|op| rho.expect_operator(&op)))
}

/// Product of the two marginals, the closest product state in relative
/// entropy.
pub fn closest_product(rho: &TwoQubitState) -> TwoQubitState {
    product_state(
        &partial_trace(rho, Subsystem::A),
        &partial_trace(rho, Subsystem::B),
    )
}

/// `χ = (I⊗I + c_m σ_m⊗σ_m)/4` keeping only the dominant correlation axis.
pub fn closest_classical_bd(spectrum: &BellSpectrum) -> TwoQubitState {
    let c = CorrelationVector::from_spectrum(spectrum);
    let m = c.dominant_axis();
    let op = CMatrix::<4>::identity() + pauli_pairs()[m] * re(c.to_array()[m]);
    TwoQubitState::from_channel_output(op * re(0.25))
}

/// Spectrum of the closest separable Bell-diagonal state: unchanged when
/// `λ_max ≤ ½`, otherwise the dominant weight is cut to ½ and the other three
/// are rescaled to fill the remaining ½.
pub fn closest_separable_spectrum(spectrum: &BellSpectrum) -> BellSpectrum {
    let top = spectrum.dominant();
    if spectrum.get(top) <= 0.5 {
        return *spectrum;
    }
    let rest: f64 = BellLabel::ALL
        .iter()
        .filter(|&&l| l != top)
        .map(|&l| spectrum.get(l))
        .sum();
    let mut w = [0.0; 4];
    w[top.index()] = 0.5;
    if rest > 0.0 {
        for label in BellLabel::ALL.into_iter().filter(|&l| l != top) {
            w[label.index()] = 0.5 * spectrum.get(label) / rest;
        }
    } else {
        // Pure Bell state: the REE minimiser is degenerate; pick the first other label.
        let other = BellLabel::ALL.into_iter().find(|&l| l != top).unwrap();
        w[other.index()] = 0.5;
    }
    BellSpectrum::normalized(w, 1e-9).expect("rescaled weights sum to one")
}

pub fn closest_separable_bd(spectrum: &BellSpectrum) -> TwoQubitState {
    closest_separable_spectrum(spectrum).to_density()
}

/// Sum of the magnitudes of the negative eigenvalues of ρ^{T_B}.
pub fn negativity(rho: &TwoQubitState) -> f64 {
    let pt = partial_transpose(rho.matrix());
    hermitian_eig(&pt)
        .expect("partial transpose of a Hermitian matrix is Hermitian")
        .eigenvalues
        .iter()
        .filter(|&&x| x < 0.0)
        .map(|x| -x)
        .sum()
}

const PPT_TOL: f64 = 1e-12;

/// Quantifiers in bits plus the closest states that realise them.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationReport {
    pub total: f64,
    pub discord: f64,
    pub classical: f64,
    /// Absent for states outside the Bell-diagonal family.
    pub entanglement: Option<f64>,
    pub c_vector: CorrelationVector,
    pub closest_product: TwoQubitState,
    pub closest_classical: TwoQubitState,
    pub closest_separable: Option<TwoQubitState>,
    pub bell_diagonal: bool,
    pub ppt: bool,
    pub negativity: f64,
}

fn nonneg(x: f64) -> f64 {
    x.max(0.0)
}

/// Quantifiers of a Bell-diagonal state from its spectrum alone.
pub fn bell_report(spectrum: &BellSpectrum) -> CorrelationReport {
    bell_diagonal_report(&spectrum.to_density(), spectrum)
}

fn bell_diagonal_report(rho: &TwoQubitState, spectrum: &BellSpectrum) -> CorrelationReport {
    let s_rho = von_neumann_entropy(rho);
    let pi = closest_product(rho);
    let chi = closest_classical_bd(spectrum);
    let s_chi = von_neumann_entropy(&chi);
    let pi_chi = closest_product(&chi);
    let entangled = spectrum.max_weight() > 0.5;
    let sigma = closest_separable_bd(spectrum);
    let entanglement = if entangled {
        nonneg(relative_entropy(rho, &sigma))
    } else {
        0.0
    };
    let neg = negativity(rho);
    CorrelationReport {
        total: nonneg(von_neumann_entropy(&pi) - s_rho),
        discord: nonneg(s_chi - s_rho),
        classical: nonneg(von_neumann_entropy(&pi_chi) - s_chi),
        entanglement: Some(entanglement),
        c_vector: CorrelationVector::from_spectrum(spectrum),
        closest_product: pi,
        closest_classical: chi,
        closest_separable: Some(sigma),
        bell_diagonal: true,
        ppt: neg <= PPT_TOL,
        negativity: neg,
    }
}

/// Quantifiers of an arbitrary two-qubit state, using the default search
/// configuration for the classical-state search off the Bell-diagonal family.
pub fn quantifier_report(rho: &TwoQubitState) -> CorrelationReport {
    quantifier_report_with(rho, &SearchConfig::default())
}

pub fn quantifier_report_with(rho: &TwoQubitState, cfg: &SearchConfig) -> CorrelationReport {
    let decomposition = bell_spectrum_of(rho);
    if decomposition.is_bell_diagonal() {
        return bell_diagonal_report(rho, &decomposition.spectrum);
    }

    let s_rho = von_neumann_entropy(rho);
    let pi = closest_product(rho);
    let chi = oracle_closest_classical(rho, cfg).minimizer;
    let s_chi = von_neumann_entropy(&chi);
    let pi_chi = closest_product(&chi);
    let neg = negativity(rho);
    CorrelationReport {
        total: nonneg(von_neumann_entropy(&pi) - s_rho),
        discord: nonneg(s_chi - s_rho),
        classical: nonneg(von_neumann_entropy(&pi_chi) - s_chi),
        entanglement: None,
        c_vector: correlation_c_vector(rho),
        closest_product: pi,
        closest_classical: chi,
        closest_separable: None,
        bell_diagonal: false,
        ppt: neg <= PPT_TOL,
        negativity: neg,
    }
}
