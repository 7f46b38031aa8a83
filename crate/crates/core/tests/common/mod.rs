#![allow(dead_code)]

use bellcorr::linalg::{kron, CMatrix, TwoQubitState};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn random_hermitian<R: Rng, const D: usize>(rng: &mut R) -> CMatrix<D> {
    let g = CMatrix::<D>::from_fn(|_, _| random_complex(rng));
    (g + g.adjoint()).scale(0.5)
}

/// Full-rank state `G G† / Tr` from a complex Gaussian-like matrix.
pub fn random_state<R: Rng>(rng: &mut R) -> TwoQubitState {
    let g = CMatrix::<4>::from_fn(|_, _| random_complex(rng));
    let m = g * g.adjoint();
    let tr = m.trace().re;
    TwoQubitState::new(m.unscale(tr)).expect("G G† is a state")
}

/// Random SU(2) element from Euler angles.
pub fn random_qubit_unitary<R: Rng>(rng: &mut R) -> CMatrix<2> {
    let a = rng.random_range(0.0..std::f64::consts::TAU);
    let b = rng.random_range(0.0..std::f64::consts::TAU);
    let t = rng.random_range(0.0..std::f64::consts::PI);
    let (s, c) = (t / 2.0).sin_cos();
    let e = |x: f64| Complex64::from_polar(1.0, x);
    CMatrix::<2>::new(e(a) * c, -e(-b) * s, e(b) * s, e(-a) * c)
}

pub fn random_unitary4<R: Rng>(rng: &mut R) -> CMatrix<4> {
    // Product of local unitaries and an entangling phase gate mixes all entries.
    let local = |rng: &mut R| kron(&random_qubit_unitary(rng), &random_qubit_unitary(rng));
    let phase = CMatrix::<4>::from_diagonal(&nalgebra::SVector::<Complex64, 4>::from_fn(|k, _| {
        Complex64::from_polar(1.0, 0.7 * k as f64)
    }));
    local(rng) * phase * local(rng) * phase * local(rng)
}
