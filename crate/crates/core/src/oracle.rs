//! Brute-force relative-entropy minimisers over product, classical and
//! Bell-diagonal separable states.
//!
//! Each search evaluates a coarse grid exhaustively, then polishes the best
//! grid point and a few seeded random starts with a compass (pattern)
//! search whose step shrinks whenever no move improves. None of these
//! searches use the closed-form closest states in [`crate::correlations`],
//! which they exist to check.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::bell::BellSpectrum;
use crate::error::{Error, Result};
use crate::linalg::{
    entropy_bits, product_basis, qubit_basis, re, von_neumann_entropy, CMatrix, CVector,
    LocalAngles, QubitState, TwoQubitState, SUPPORT_CUTOFF, SUPPORT_OVERLAP,
};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchConfig {
    pub coarse_grid_points_per_angle: usize,
    pub refinement_iterations: usize,
    pub refinement_shrink: f64,
    pub simplex_grid_step: f64,
    pub seed: u64,
    /// Extra random starting points for the local refinement.
    pub restarts: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            coarse_grid_points_per_angle: 24,
            refinement_iterations: 200,
            refinement_shrink: 0.5,
            simplex_grid_step: 0.01,
            seed: 2011,
            restarts: 4,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.coarse_grid_points_per_angle < 2 {
            return Err(Error::InvalidArgument(
                "coarse grid needs at least 2 points per angle".into(),
            ));
        }
        if self.refinement_iterations == 0 {
            return Err(Error::InvalidArgument("refinement_iterations must be positive".into()));
        }
        if !(self.refinement_shrink > 0.0 && self.refinement_shrink < 1.0) {
            return Err(Error::InvalidArgument("refinement_shrink must lie in (0, 1)".into()));
        }
        if !(self.simplex_grid_step > 0.0 && self.simplex_grid_step <= 0.5) {
            return Err(Error::InvalidArgument("simplex_grid_step must lie in (0, 0.5]".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleResult {
    pub minimizer: TwoQubitState,
    /// Minimum relative entropy found, in bits.
    pub value: f64,
    pub evaluations: usize,
    /// Incumbent value after the coarse grid and after every refinement
    /// iteration.
    pub history: Vec<f64>,
}

/// Lowest value, ties to the lowest grid index so parallel reduction stays
/// deterministic.
fn better(a: (f64, usize), b: (f64, usize)) -> (f64, usize) {
    match a.0.total_cmp(&b.0) {
        std::cmp::Ordering::Less => a,
        std::cmp::Ordering::Greater => b,
        std::cmp::Ordering::Equal => {
            if a.1 <= b.1 {
                a
            } else {
                b
            }
        }
    }
}

struct Refinement<const N: usize> {
    point: [f64; N],
    value: f64,
}

/// Compass search: try ±step along each move direction, accept any
/// improvement, shrink the step after a sweep without one.
#[allow(clippy::too_many_arguments)]
fn compass_search<const N: usize, F>(
    objective: &F,
    directions: &[[f64; N]],
    start: [f64; N],
    initial_step: f64,
    cfg: &SearchConfig,
    evaluations: &mut usize,
    incumbent: &mut f64,
    history: &mut Vec<f64>,
) -> Refinement<N>
where
    F: Fn(&[f64; N]) -> f64,
{
    let mut x = start;
    let mut fx = objective(&x);
    *evaluations += 1;
    let mut step = initial_step;
    for _ in 0..cfg.refinement_iterations {
        let mut improved = false;
        for d in directions {
            for sign in [1.0, -1.0] {
                let trial: [f64; N] = std::array::from_fn(|k| x[k] + sign * step * d[k]);
                let ft = objective(&trial);
                *evaluations += 1;
                if ft < fx {
                    x = trial;
                    fx = ft;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= cfg.refinement_shrink;
        }
        *incumbent = incumbent.min(fx);
        history.push(*incumbent);
        if step < 1e-13 {
            break;
        }
    }
    Refinement { point: x, value: fx }
}

fn unit_directions<const N: usize>() -> Vec<[f64; N]> {
    (0..N)
        .map(|k| std::array::from_fn(|j| if j == k { 1.0 } else { 0.0 }))
        .collect()
}

/// `<a|_A ρ |a>_A` as an operator on qubit B.
fn contract_a(rho: &CMatrix<4>, a: &CVector<2>) -> CMatrix<2> {
    let mut out = CMatrix::<2>::zeros();
    for b in 0..2 {
        for b2 in 0..2 {
            let mut acc = re(0.0);
            for x in 0..2 {
                for x2 in 0..2 {
                    acc += a[x].conj() * rho[(2 * x + b, 2 * x2 + b2)] * a[x2];
                }
            }
            out[(b, b2)] = acc;
        }
    }
    out
}

fn quad(m: &CMatrix<2>, v: &CVector<2>) -> f64 {
    (v.adjoint() * m * v)[(0, 0)].re
}

fn shannon(p: &[f64]) -> f64 {
    entropy_bits(p).unwrap_or(f64::INFINITY)
}

/// Closest classical (product-basis diagonal) state. For a fixed product
/// basis the best classical state is the dephased `ρ`, so the search runs
/// over the four local basis angles only and
/// `S(ρ‖χ) = H(diag) − S(ρ)`.
pub fn oracle_closest_classical(rho: &TwoQubitState, cfg: &SearchConfig) -> OracleResult {
    let s_rho = von_neumann_entropy(rho);
    let m = rho.matrix();
    let objective = |x: &[f64; 4]| -> f64 {
        let p = product_basis(LocalAngles::from_array(*x)).map(|v| rho.expectation(&v));
        shannon(&p) - s_rho
    };

    let n = cfg.coarse_grid_points_per_angle;
    let thetas: Vec<f64> = (0..n).map(|i| PI * i as f64 / (n - 1) as f64).collect();
    let phis: Vec<f64> = (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect();
    let local: Vec<(f64, f64, [CVector<2>; 2])> = thetas
        .iter()
        .flat_map(|&t| phis.iter().map(move |&p| (t, p, qubit_basis(t, p))))
        .collect();
    let nl = local.len();

    let (best_value, best_index) = (0..nl)
        .into_par_iter()
        .map(|ia| {
            let a = &local[ia].2;
            let blocks = [contract_a(m, &a[0]), contract_a(m, &a[1])];
            let mut best = (f64::INFINITY, usize::MAX);
            for (ib, (_, _, b)) in local.iter().enumerate() {
                let p = [
                    quad(&blocks[0], &b[0]),
                    quad(&blocks[0], &b[1]),
                    quad(&blocks[1], &b[0]),
                    quad(&blocks[1], &b[1]),
                ];
                best = better(best, (shannon(&p) - s_rho, ia * nl + ib));
            }
            best
        })
        .reduce(|| (f64::INFINITY, usize::MAX), better);

    let mut evaluations = nl * nl;
    let (ia, ib) = (best_index / nl, best_index % nl);
    let grid_best = [local[ia].0, local[ia].1, local[ib].0, local[ib].1];
    let mut incumbent = best_value;
    let mut history = vec![incumbent];

    let directions = unit_directions::<4>();
    let step = (PI / (n - 1) as f64).max(2.0 * PI / n as f64);
    let mut starts = vec![grid_best];
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.restarts {
        starts.push([
            rng.random::<f64>() * PI,
            rng.random::<f64>() * 2.0 * PI,
            rng.random::<f64>() * PI,
            rng.random::<f64>() * 2.0 * PI,
        ]);
    }

    let mut best = Refinement {
        point: grid_best,
        value: best_value,
    };
    for start in starts {
        let r = compass_search(
            &objective,
            &directions,
            start,
            step,
            cfg,
            &mut evaluations,
            &mut incumbent,
            &mut history,
        );
        if r.value < best.value {
            best = r;
        }
    }

    let minimizer = crate::linalg::dephase_in_basis(rho, LocalAngles::from_array(best.point));
    OracleResult {
        minimizer,
        value: best.value,
        evaluations,
        history,
    }
}

/// Weights on a grid of the Bell simplex with every coordinate at most ½.
fn separable_simplex_grid(step: f64) -> Vec<[f64; 4]> {
    let n = (1.0 / step).round().max(2.0) as usize;
    let cap = n / 2;
    let mut out = Vec::new();
    for i in 0..=cap {
        for j in 0..=cap.min(n - i) {
            for k in 0..=cap.min(n - i - j) {
                let l = n - i - j - k;
                if l <= cap {
                    out.push([i, j, k, l].map(|x| x as f64 / n as f64));
                }
            }
        }
    }
    out
}

/// `S(ρ‖σ)` for two states diagonal in the same basis.
fn commuting_relative_entropy(p: &[f64; 4], q: &[f64; 4]) -> f64 {
    let mut s = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if pi <= 0.0 {
            continue;
        }
        if qi <= 0.0 {
            return f64::INFINITY;
        }
        s += pi * (pi / qi).log2();
    }
    s
}

/// Closest separable state within the Bell-diagonal family, i.e. Bell
/// weights all at most ½.
pub fn oracle_closest_separable_bd(spectrum: &BellSpectrum, cfg: &SearchConfig) -> OracleResult {
    let lambda = spectrum.weights();
    let objective = |mu: &[f64; 4]| -> f64 {
        if mu.iter().any(|&x| !(-1e-15..=0.5 + 1e-15).contains(&x)) {
            return f64::INFINITY;
        }
        commuting_relative_entropy(&lambda, &mu.map(|x| x.max(0.0)))
    };

    let grid = separable_simplex_grid(cfg.simplex_grid_step);
    let (best_value, best_index) = grid
        .par_iter()
        .enumerate()
        .map(|(i, mu)| (objective(mu), i))
        .reduce(|| (f64::INFINITY, usize::MAX), better);
    let mut evaluations = grid.len();
    let mut incumbent = best_value;
    let mut history = vec![incumbent];

    // Mass transfers between pairs of weights keep the sum fixed.
    let mut directions = Vec::new();
    for i in 0..4 {
        for j in (i + 1)..4 {
            let mut d = [0.0; 4];
            d[i] = 1.0;
            d[j] = -1.0;
            directions.push(d);
        }
    }

    let mut starts = vec![grid[best_index]];
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    while starts.len() < cfg.restarts + 1 {
        let s = BellSpectrum::random(&mut rng).weights();
        if s.iter().all(|&x| x <= 0.5) {
            starts.push(s);
        }
    }

    let mut best = Refinement {
        point: grid[best_index],
        value: best_value,
    };
    for start in starts {
        let r = compass_search(
            &objective,
            &directions,
            start,
            cfg.simplex_grid_step,
            cfg,
            &mut evaluations,
            &mut incumbent,
            &mut history,
        );
        if r.value < best.value {
            best = r;
        }
    }

    let mu = BellSpectrum::normalized(best.point.map(|x| x.max(0.0)), 1e-9)
        .expect("compass moves conserve total weight");
    OracleResult {
        minimizer: mu.to_density(),
        value: best.value,
        evaluations,
        history,
    }
}

/// Eigen-data of a qubit state given by its Bloch vector.
#[derive(Clone, Copy)]
struct BlochState {
    eigenvalues: [f64; 2],
    basis: [CVector<2>; 2],
}

impl BlochState {
    fn new(v: [f64; 3]) -> Option<Self> {
        let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if r > 1.0 + 1e-15 {
            return None;
        }
        let r = r.min(1.0);
        let (theta, phi) = if r == 0.0 {
            (0.0, 0.0)
        } else {
            ((v[2] / r).clamp(-1.0, 1.0).acos(), v[1].atan2(v[0]))
        };
        Some(Self {
            eigenvalues: [0.5 * (1.0 + r), 0.5 * (1.0 - r)],
            basis: qubit_basis(theta, phi),
        })
    }

    fn state(&self) -> QubitState {
        let mut m = CMatrix::<2>::zeros();
        for k in 0..2 {
            m += self.basis[k] * self.basis[k].adjoint() * re(self.eigenvalues[k]);
        }
        QubitState::from_channel_output(m)
    }
}

/// `−Tr ρ log₂(σ_A ⊗ σ_B)` from the product eigenbasis of the candidate.
fn product_cross_entropy(blocks: &[CMatrix<2>; 2], a: &BlochState, b: &BlochState) -> f64 {
    let mut cross = 0.0;
    for (block, pa) in blocks.iter().zip(a.eigenvalues) {
        for l in 0..2 {
            let w = quad(block, &b.basis[l]);
            let mu = pa * b.eigenvalues[l];
            if mu < SUPPORT_CUTOFF {
                if w > SUPPORT_OVERLAP {
                    return f64::INFINITY;
                }
                continue;
            }
            cross -= w * mu.log2();
        }
    }
    cross
}

fn bloch_grid(n: usize) -> Vec<[f64; 3]> {
    let n_theta = (n / 3).max(3);
    let n_phi = (2 * n / 3).max(4);
    let radii = [0.2, 0.4, 0.6, 0.8, 1.0];
    let mut out = vec![[0.0; 3]];
    for &r in &radii {
        for i in 0..n_theta {
            let theta = PI * i as f64 / (n_theta - 1) as f64;
            let phis = if i == 0 || i == n_theta - 1 { 1 } else { n_phi };
            for j in 0..phis {
                let phi = 2.0 * PI * j as f64 / n_phi as f64;
                out.push([
                    r * theta.sin() * phi.cos(),
                    r * theta.sin() * phi.sin(),
                    r * theta.cos(),
                ]);
            }
        }
    }
    out
}

/// Closest product state over pairs of Bloch vectors in the unit ball.
pub fn oracle_closest_product(rho: &TwoQubitState, cfg: &SearchConfig) -> OracleResult {
    let s_rho = von_neumann_entropy(rho);
    let m = rho.matrix();
    let objective = |x: &[f64; 6]| -> f64 {
        let (Some(a), Some(b)) = (
            BlochState::new([x[0], x[1], x[2]]),
            BlochState::new([x[3], x[4], x[5]]),
        ) else {
            return f64::INFINITY;
        };
        let blocks = [contract_a(m, &a.basis[0]), contract_a(m, &a.basis[1])];
        product_cross_entropy(&blocks, &a, &b) - s_rho
    };

    let points = bloch_grid(cfg.coarse_grid_points_per_angle);
    let states: Vec<BlochState> = points
        .iter()
        .map(|&p| BlochState::new(p).expect("grid inside the ball"))
        .collect();
    let np = points.len();

    let (best_value, best_index) = (0..np)
        .into_par_iter()
        .map(|ia| {
            let a = &states[ia];
            let blocks = [contract_a(m, &a.basis[0]), contract_a(m, &a.basis[1])];
            let mut best = (f64::INFINITY, usize::MAX);
            for (ib, b) in states.iter().enumerate() {
                let v = product_cross_entropy(&blocks, a, b) - s_rho;
                best = better(best, (v, ia * np + ib));
            }
            best
        })
        .reduce(|| (f64::INFINITY, usize::MAX), better);

    let mut evaluations = np * np;
    let (ia, ib) = (best_index / np, best_index % np);
    let grid_best = [
        points[ia][0], points[ia][1], points[ia][2], points[ib][0], points[ib][1], points[ib][2],
    ];
    let mut incumbent = best_value;
    let mut history = vec![incumbent];

    let directions = unit_directions::<6>();
    let mut starts = vec![grid_best];
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    while starts.len() < cfg.restarts + 1 {
        let x: [f64; 6] = std::array::from_fn(|_| 2.0 * rng.random::<f64>() - 1.0);
        if x[..3].iter().map(|v| v * v).sum::<f64>() <= 1.0
            && x[3..].iter().map(|v| v * v).sum::<f64>() <= 1.0
        {
            starts.push(x);
        }
    }

    let mut best = Refinement {
        point: grid_best,
        value: best_value,
    };
    for start in starts {
        let r = compass_search(
            &objective,
            &directions,
            start,
            0.2,
            cfg,
            &mut evaluations,
            &mut incumbent,
            &mut history,
        );
        if r.value < best.value {
            best = r;
        }
    }

    let x = best.point;
    let a = BlochState::new([x[0], x[1], x[2]]).expect("finite optimum lies in the ball");
    let b = BlochState::new([x[3], x[4], x[5]]).expect("finite optimum lies in the ball");
    OracleResult {
        minimizer: crate::linalg::product_state(&a.state(), &b.state()),
        value: best.value,
        evaluations,
        history,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlations::binary_entropy;
    use crate::linalg::{ket2, trace_distance};

    fn reference() -> BellSpectrum {
        BellSpectrum::new([0.9, 0.1, 0.0, 0.0]).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(SearchConfig::default().validate().is_ok());
        let bad = SearchConfig {
            simplex_grid_step: 0.7,
            ..SearchConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = SearchConfig {
            refinement_shrink: 1.0,
            ..SearchConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn simplex_grid_respects_cap() {
        let grid = separable_simplex_grid(0.25);
        assert!(grid.iter().all(|w| w.iter().all(|&x| x <= 0.5)));
        assert!(grid.iter().all(|w| (w.iter().sum::<f64>() - 1.0).abs() < 1e-12));
        assert!(grid.contains(&[0.5, 0.5, 0.0, 0.0]));
        assert!(grid.contains(&[0.25, 0.25, 0.25, 0.25]));
    }

    #[test]
    fn classical_oracle_examples() {
        let cfg = SearchConfig::default();
        let diag = TwoQubitState::diagonal([0.4, 0.3, 0.2, 0.1]).unwrap();
        assert!(oracle_closest_classical(&diag, &cfg).value.abs() < 1e-9);

        let mixed = TwoQubitState::maximally_mixed();
        assert!(oracle_closest_classical(&mixed, &cfg).value.abs() < 1e-9);

        let r = oracle_closest_classical(&reference().to_density(), &cfg);
        assert!((r.value - (1.0 - binary_entropy(0.9))).abs() < 1e-3);
        let want = TwoQubitState::diagonal([0.0, 0.5, 0.5, 0.0]).unwrap();
        assert!(trace_distance(&r.minimizer, &want) < 1e-3);
    }

    #[test]
    fn separable_oracle_examples() {
        let cfg = SearchConfig::default();
        let sep = BellSpectrum::new([0.4, 0.3, 0.2, 0.1]).unwrap();
        let r = oracle_closest_separable_bd(&sep, &cfg);
        assert!(r.value < 1e-9);
        assert!(trace_distance(&r.minimizer, &sep.to_density()) < 1e-4);

        let r = oracle_closest_separable_bd(&reference(), &cfg);
        assert!((r.value - (1.0 - binary_entropy(0.9))).abs() < 1e-3);

        let pure = BellSpectrum::new([1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!((oracle_closest_separable_bd(&pure, &cfg).value - 1.0).abs() < 1e-3);
    }

    #[test]
    fn product_oracle_examples() {
        let cfg = SearchConfig::default();
        let prod = TwoQubitState::pure(&ket2(0, 1));
        let r = oracle_closest_product(&prod, &cfg);
        assert!(r.value.abs() < 1e-9);
        assert!(trace_distance(&r.minimizer, &prod) < 1e-6);

        let r = oracle_closest_product(&reference().to_density(), &cfg);
        assert!(trace_distance(&r.minimizer, &TwoQubitState::maximally_mixed()) < 1e-2);
        assert!((r.value - (2.0 - binary_entropy(0.9))).abs() < 1e-3);

        let bell = crate::bell::BellLabel::TwoPlus.projector();
        assert!((oracle_closest_product(&bell, &cfg).value - 2.0).abs() < 1e-3);
    }

    #[test]
    fn mixed_product_input_is_found() {
        let a = QubitState::diagonal([0.8, 0.2]).unwrap();
        let b = BlochState::new([0.3, -0.1, 0.25]).unwrap().state();
        let rho = crate::linalg::product_state(&a, &b);
        let r = oracle_closest_product(&rho, &SearchConfig::default());
        assert!(r.value.abs() < 1e-8);
    }

    #[test]
    fn searches_are_deterministic_and_monotone() {
        let cfg = SearchConfig {
            seed: 7,
            ..SearchConfig::default()
        };
        let rho = BellSpectrum::new([0.1, 0.6, 0.2, 0.1]).unwrap().to_density();
        let first = oracle_closest_classical(&rho, &cfg);
        assert_eq!(first, oracle_closest_classical(&rho, &cfg));
        assert!(first.history.windows(2).all(|w| w[1] <= w[0]));

        let p = oracle_closest_product(&rho, &cfg);
        assert_eq!(p, oracle_closest_product(&rho, &cfg));
        assert!(p.history.windows(2).all(|w| w[1] <= w[0]));

        let s = BellSpectrum::new([0.1, 0.6, 0.2, 0.1]).unwrap();
        let sep = oracle_closest_separable_bd(&s, &cfg);
        assert_eq!(sep, oracle_closest_separable_bd(&s, &cfg));
        assert!(sep.history.windows(2).all(|w| w[1] <= w[0]));
    }
}
