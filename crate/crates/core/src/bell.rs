//! Bell basis and Bell-diagonal spectra.
//!
//! `|1±> = (|01> ± |10>)/√2` are the one-excitation Bell states and
//! `|2±> = (|00> ± |11>)/√2` the two-excitation ones.

use std::fmt;
use std::f64::consts::FRAC_1_SQRT_2;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{re, CMatrix, CVector, TwoQubitState};

/// Tolerance on the normalisation of a Bell spectrum.
pub const SPECTRUM_SUM_TOL: f64 = 1e-12;
/// Largest off-diagonal Bell-basis element for which a state counts as
/// Bell-diagonal.
pub const BELL_RESIDUAL_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BellLabel {
    OnePlus,
    OneMinus,
    TwoPlus,
    TwoMinus,
}

impl BellLabel {
    pub const ALL: [BellLabel; 4] = [
        BellLabel::OnePlus,
        BellLabel::OneMinus,
        BellLabel::TwoPlus,
        BellLabel::TwoMinus,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// The Bell state this one exchanges population with under the field
    /// channel: `1+ <-> 2-` and `1- <-> 2+`.
    pub fn partner(self) -> BellLabel {
        match self {
            BellLabel::OnePlus => BellLabel::TwoMinus,
            BellLabel::OneMinus => BellLabel::TwoPlus,
            BellLabel::TwoPlus => BellLabel::OneMinus,
            BellLabel::TwoMinus => BellLabel::OnePlus,
        }
    }

    pub fn ket(self) -> CVector<4> {
        let s = FRAC_1_SQRT_2;
        let v = match self {
            BellLabel::OnePlus => [0.0, s, s, 0.0],
            BellLabel::OneMinus => [0.0, s, -s, 0.0],
            BellLabel::TwoPlus => [s, 0.0, 0.0, s],
            BellLabel::TwoMinus => [s, 0.0, 0.0, -s],
        };
        CVector::<4>::from_fn(|i, _| re(v[i]))
    }

    pub fn projector(self) -> TwoQubitState {
        TwoQubitState::pure(&self.ket())
    }

    /// `(<σx⊗σx>, <σy⊗σy>, <σz⊗σz>)` in this Bell state.
    pub fn correlation_signs(self) -> [f64; 3] {
        match self {
            BellLabel::OnePlus => [1.0, 1.0, -1.0],
            BellLabel::OneMinus => [-1.0, -1.0, -1.0],
            BellLabel::TwoPlus => [1.0, -1.0, 1.0],
            BellLabel::TwoMinus => [-1.0, 1.0, 1.0],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BellLabel::OnePlus => "1p",
            BellLabel::OneMinus => "1m",
            BellLabel::TwoPlus => "2p",
            BellLabel::TwoMinus => "2m",
        }
    }
}

impl fmt::Display for BellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Unitary whose columns are the Bell kets in `BellLabel::ALL` order.
pub fn bell_basis() -> CMatrix<4> {
    let mut b = CMatrix::<4>::zeros();
    for label in BellLabel::ALL {
        b.set_column(label.index(), &label.ket());
    }
    b
}

/// Weights `(λ1+, λ1-, λ2+, λ2-)` of a Bell-diagonal state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct BellSpectrum([f64; 4]);

impl BellSpectrum {
    pub fn new(weights: [f64; 4]) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::BadSpectrum(format!(
                "weights must be finite and non-negative: {weights:?}"
            )));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > SPECTRUM_SUM_TOL {
            return Err(Error::BadSpectrum(format!("weights sum to {sum}, expected 1")));
        }
        Ok(Self(weights))
    }

    /// Accepts weights whose sum is within `tol` of one and rescales them.
    pub fn normalized(weights: [f64; 4], tol: f64) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::BadSpectrum(format!(
                "weights must be finite and non-negative: {weights:?}"
            )));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > tol {
            return Err(Error::BadSpectrum(format!("weights sum to {sum}, expected 1")));
        }
        Ok(Self(weights.map(|w| w / sum)))
    }

    pub fn maximally_mixed() -> Self {
        Self([0.25; 4])
    }

    pub fn pure(label: BellLabel) -> Self {
        let mut w = [0.0; 4];
        w[label.index()] = 1.0;
        Self(w)
    }

    /// Uniform sample from the probability simplex.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut w = [0.0; 4];
        for x in w.iter_mut() {
            let u: f64 = rng.random();
            *x = -(1.0 - u).ln();
        }
        let sum: f64 = w.iter().sum();
        Self(w.map(|x| x / sum))
    }

    pub fn weights(&self) -> [f64; 4] {
        self.0
    }

    pub fn get(&self, label: BellLabel) -> f64 {
        self.0[label.index()]
    }

    /// Dominant label; ties resolve to the lowest index.
    pub fn dominant(&self) -> BellLabel {
        let mut best = BellLabel::OnePlus;
        for label in BellLabel::ALL {
            if self.get(label) > self.get(best) {
                best = label;
            }
        }
        best
    }

    pub fn max_weight(&self) -> f64 {
        self.get(self.dominant())
    }

    pub fn to_density(&self) -> TwoQubitState {
        bell_spectrum_to_density(self)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl TryFrom<[f64; 4]> for BellSpectrum {
    type Error = Error;

    fn try_from(w: [f64; 4]) -> Result<Self> {
        Self::new(w)
    }
}

impl From<BellSpectrum> for [f64; 4] {
    fn from(s: BellSpectrum) -> Self {
        s.0
    }
}

/// `sum_k λ_k |B_k><B_k|` in the computational basis.
pub fn bell_spectrum_to_density(spectrum: &BellSpectrum) -> TwoQubitState {
    let b = bell_basis();
    let mut diag = CMatrix::<4>::zeros();
    for k in 0..4 {
        diag[(k, k)] = re(spectrum.0[k]);
    }
    TwoQubitState::from_channel_output(b * diag * b.adjoint())
}

/// Bell-basis diagonal of a state together with its largest off-diagonal
/// Bell-basis element.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BellDecomposition {
    pub spectrum: BellSpectrum,
    pub residual: f64,
}

impl BellDecomposition {
    pub fn is_bell_diagonal(&self) -> bool {
        self.residual <= BELL_RESIDUAL_TOL
    }
}

pub fn bell_spectrum_of(rho: &TwoQubitState) -> BellDecomposition {
    let b = bell_basis();
    let in_bell = b.adjoint() * rho.matrix() * b;
    let mut residual = 0.0_f64;
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                residual = residual.max(in_bell[(i, j)].norm());
            }
        }
    }
    let diag: [f64; 4] = std::array::from_fn(|k| in_bell[(k, k)].re.max(0.0));
    let sum: f64 = diag.iter().sum();
    BellDecomposition {
        spectrum: BellSpectrum(diag.map(|x| x / sum)),
        residual,
    }
}
