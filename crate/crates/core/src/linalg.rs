//! Dense complex primitives for one- and two-qubit operators.
//!
//! Two-qubit matrices use the computational ordering `|00>, |01>, |10>, |11>`
//! with qubit A as the most significant index, i.e. `|a b>` sits at `2a + b`.

use nalgebra::{SMatrix, SVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix<const D: usize> = SMatrix<Complex64, D, D>;
pub type CVector<const D: usize> = SVector<Complex64, D>;

/// Maximum `|m_ij - conj(m_ji)|` accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Trace tolerance for density matrices.
pub const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues down to `-POSITIVITY_TOL` are treated as numerical zero.
pub const POSITIVITY_TOL: f64 = 1e-10;
/// Entropy evaluation rejects eigenvalues below `-ENTROPY_REJECT_TOL`.
pub const ENTROPY_REJECT_TOL: f64 = 1e-8;
/// Eigenvalues of the second argument of a relative entropy below this are
/// treated as outside its support.
pub const SUPPORT_CUTOFF: f64 = 1e-12;
/// Weight of the first argument on a null direction that makes a relative
/// entropy infinite.
pub const SUPPORT_OVERLAP: f64 = 1e-8;

const JACOBI_MAX_SWEEPS: usize = 64;

#[inline]
pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub(crate) fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn hermitian_deviation<const D: usize>(m: &CMatrix<D>) -> f64 {
    let mut dev = 0.0_f64;
    for i in 0..D {
        for j in i..D {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

fn hermitize<const D: usize>(m: &CMatrix<D>) -> CMatrix<D> {
    (m + m.adjoint()) * re(0.5)
}

/// A complex Hermitian operator of fixed dimension.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HermitianMatrix<const D: usize> {
    m: CMatrix<D>,
}

impl<const D: usize> HermitianMatrix<D> {
    pub fn new(m: CMatrix<D>) -> Result<Self> {
        let deviation = hermitian_deviation(&m);
        if deviation > HERMITIAN_TOL || !deviation.is_finite() {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self { m: hermitize(&m) })
    }

    pub fn matrix(&self) -> &CMatrix<D> {
        &self.m
    }

    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    pub fn eig(&self) -> Spectrum<D> {
        jacobi_eig(&self.m)
    }
}

/// Eigendecomposition with eigenvalues in descending order; column `k` of
/// `eigenvectors` belongs to `eigenvalues[k]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Spectrum<const D: usize> {
    pub eigenvalues: [f64; D],
    pub eigenvectors: CMatrix<D>,
}

impl<const D: usize> Spectrum<D> {
    pub fn eigenvector(&self, k: usize) -> CVector<D> {
        self.eigenvectors.column(k).into_owned()
    }

    /// `V diag(lambda) V^dagger`.
    pub fn reconstruct(&self) -> CMatrix<D> {
        let mut diag = CMatrix::<D>::zeros();
        for k in 0..D {
            diag[(k, k)] = re(self.eigenvalues[k]);
        }
        self.eigenvectors * diag * self.eigenvectors.adjoint()
    }
}

/// Eigendecomposition of a Hermitian matrix, rejecting non-Hermitian input.
pub fn hermitian_eig<const D: usize>(m: &CMatrix<D>) -> Result<Spectrum<D>> {
    Ok(HermitianMatrix::new(*m)?.eig())
}

/// Cyclic Jacobi sweeps with complex rotations. Each rotation first removes
/// the phase of the pivot, then applies the real symmetric Jacobi rotation.
fn jacobi_eig<const D: usize>(input: &CMatrix<D>) -> Spectrum<D> {
    let mut a = *input;
    let mut v = CMatrix::<D>::identity();
    let scale = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();

    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..D {
            for q in (p + 1)..D {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= f64::EPSILON * 1e-2 * scale.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..D {
            for q in (p + 1)..D {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let phase = apq / r;
                let zeta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * r);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * cs;
                // J = diag(1, e^{-i alpha}) on (p, q) followed by the real rotation.
                let j_pp = re(cs);
                let j_pq = re(sn);
                let j_qp = -phase.conj() * sn;
                let j_qq = phase.conj() * cs;

                for k in 0..D {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * j_pp + akq * j_qp;
                    a[(k, q)] = akp * j_pq + akq * j_qq;
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * j_pp + vkq * j_qp;
                    v[(k, q)] = vkp * j_pq + vkq * j_qq;
                }
                for k in 0..D {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = j_pp.conj() * apk + j_qp.conj() * aqk;
                    a[(q, k)] = j_pq.conj() * apk + j_qq.conj() * aqk;
                }
                a[(p, q)] = Complex64::default();
                a[(q, p)] = Complex64::default();
                a[(p, p)] = re(a[(p, p)].re);
                a[(q, q)] = re(a[(q, q)].re);
            }
        }
    }

    let mut order: [usize; D] = std::array::from_fn(|i| i);
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let eigenvalues = order.map(|i| a[(i, i)].re);
    let mut eigenvectors = CMatrix::<D>::zeros();
    for (col, &src) in order.iter().enumerate() {
        eigenvectors.set_column(col, &v.column(src));
    }
    Spectrum {
        eigenvalues,
        eigenvectors,
    }
}

/// A Hermitian, unit-trace, positive semidefinite operator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix<const D: usize> {
    m: CMatrix<D>,
}

pub type QubitState = DensityMatrix<2>;
pub type TwoQubitState = DensityMatrix<4>;

impl<const D: usize> DensityMatrix<D> {
    pub fn new(m: CMatrix<D>) -> Result<Self> {
        let h = HermitianMatrix::new(m)?;
        let trace = h.trace();
        if (trace - 1.0).abs() > TRACE_TOL || !trace.is_finite() {
            return Err(Error::BadTrace { trace });
        }
        let lowest = h.eig().eigenvalues[D - 1];
        if lowest < -POSITIVITY_TOL {
            return Err(Error::NegativeEigenvalue { eigenvalue: lowest });
        }
        Ok(Self { m: h.m })
    }

    /// Wraps the output of a trace-preserving positive map. Hermiticity is
    /// restored exactly; callers guarantee the rest.
    pub(crate) fn from_channel_output(m: CMatrix<D>) -> Self {
        Self { m: hermitize(&m) }
    }

    /// `|psi><psi|` for the normalised `psi`.
    pub fn pure(psi: &CVector<D>) -> Self {
        let psi = psi.normalize();
        Self::from_channel_output(psi * psi.adjoint())
    }

    pub fn maximally_mixed() -> Self {
        Self {
            m: CMatrix::<D>::identity() * re(1.0 / D as f64),
        }
    }

    /// Diagonal state in the computational basis.
    pub fn diagonal(p: [f64; D]) -> Result<Self> {
        let mut m = CMatrix::<D>::zeros();
        for (k, &pk) in p.iter().enumerate() {
            m[(k, k)] = re(pk);
        }
        Self::new(m)
    }

    pub fn matrix(&self) -> &CMatrix<D> {
        &self.m
    }

    pub fn spectrum(&self) -> Spectrum<D> {
        jacobi_eig(&self.m)
    }

    pub fn eigenvalues(&self) -> [f64; D] {
        self.spectrum().eigenvalues
    }

    /// `<v|rho|v>`.
    pub fn expectation(&self, v: &CVector<D>) -> f64 {
        (v.adjoint() * self.m * v)[(0, 0)].re
    }

    /// `Tr(rho O)` for a Hermitian observable.
    pub fn expect_operator(&self, op: &CMatrix<D>) -> f64 {
        (self.m * op).trace().re
    }

    /// `U rho U^dagger`.
    pub fn conjugated(&self, u: &CMatrix<D>) -> Self {
        Self::from_channel_output(u * self.m * u.adjoint())
    }

    /// Max-abs entry difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.m - other.m)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// Shannon entropy in bits of an eigenvalue list; `0 log 0 = 0`, values in
/// `[-1e-8, 0)` are clamped to zero and anything lower is rejected.
pub fn entropy_bits(eigenvalues: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &x in eigenvalues {
        if x < -ENTROPY_REJECT_TOL {
            return Err(Error::NegativeEigenvalue { eigenvalue: x });
        }
        if x > 0.0 {
            s -= x * x.log2();
        }
    }
    Ok(s.max(0.0))
}

/// von Neumann entropy `-Tr(rho log2 rho)` in bits.
pub fn von_neumann_entropy<const D: usize>(rho: &DensityMatrix<D>) -> f64 {
    // Density matrices hold eigenvalues >= -1e-10, so the reject path is unreachable.
    entropy_bits(&rho.eigenvalues()).unwrap_or(f64::NAN)
}

/// `S(rho || sigma) = -Tr(rho log2 sigma) - S(rho)` in bits, `+inf` when the
/// support of `rho` is not contained in the support of `sigma`.
pub fn relative_entropy<const D: usize>(rho: &DensityMatrix<D>, sigma: &DensityMatrix<D>) -> f64 {
    let spec = sigma.spectrum();
    let mut cross = 0.0;
    for k in 0..D {
        let mu = spec.eigenvalues[k];
        let weight = rho.expectation(&spec.eigenvector(k));
        if mu < SUPPORT_CUTOFF {
            if weight > SUPPORT_OVERLAP {
                return f64::INFINITY;
            }
            continue;
        }
        cross -= weight * mu.log2();
    }
    cross - von_neumann_entropy(rho)
}

/// Trace distance `1/2 sum |eig(rho - sigma)|`.
pub fn trace_distance<const D: usize>(rho: &DensityMatrix<D>, sigma: &DensityMatrix<D>) -> f64 {
    let diff = rho.matrix() - sigma.matrix();
    0.5 * jacobi_eig(&diff)
        .eigenvalues
        .iter()
        .map(|x| x.abs())
        .sum::<f64>()
}

/// Kronecker product `A (x) B` with A as the most significant factor.
pub fn tensor(a: &HermitianMatrix<2>, b: &HermitianMatrix<2>) -> HermitianMatrix<4> {
    HermitianMatrix {
        m: kron(a.matrix(), b.matrix()),
    }
}

/// Kronecker product `a ⊗ b` in the `|00>, |01>, |10>, |11>` ordering.
pub fn kron(a: &CMatrix<2>, b: &CMatrix<2>) -> CMatrix<4> {
    let mut out = CMatrix::<4>::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

pub(crate) fn kron_vec(a: &CVector<2>, b: &CVector<2>) -> CVector<4> {
    CVector::<4>::new(a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
}

/// `rho_A (x) rho_B`.
pub fn product_state(a: &QubitState, b: &QubitState) -> TwoQubitState {
    TwoQubitState::from_channel_output(kron(a.matrix(), b.matrix()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Reduced state of the kept qubit.
pub fn partial_trace(rho: &TwoQubitState, keep: Subsystem) -> QubitState {
    let m = rho.matrix();
    let mut out = CMatrix::<2>::zeros();
    for x in 0..2 {
        for y in 0..2 {
            out[(x, y)] = match keep {
                Subsystem::A => m[(2 * x, 2 * y)] + m[(2 * x + 1, 2 * y + 1)],
                Subsystem::B => m[(x, y)] + m[(2 + x, 2 + y)],
            };
        }
    }
    QubitState::from_channel_output(out)
}

/// Transpose of qubit B's indices.
pub fn partial_transpose(m: &CMatrix<4>) -> CMatrix<4> {
    let mut out = CMatrix::<4>::zeros();
    for a in 0..2 {
        for b in 0..2 {
            for a2 in 0..2 {
                for b2 in 0..2 {
                    out[(2 * a + b, 2 * a2 + b2)] = m[(2 * a + b2, 2 * a2 + b)];
                }
            }
        }
    }
    out
}

/// Local measurement directions for a product basis, as Bloch angles.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct LocalAngles {
    pub theta_a: f64,
    pub phi_a: f64,
    pub theta_b: f64,
    pub phi_b: f64,
}

impl LocalAngles {
    pub fn new(theta_a: f64, phi_a: f64, theta_b: f64, phi_b: f64) -> Self {
        Self {
            theta_a,
            phi_a,
            theta_b,
            phi_b,
        }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.theta_a, self.phi_a, self.theta_b, self.phi_b]
    }

    pub fn from_array(x: [f64; 4]) -> Self {
        Self::new(x[0], x[1], x[2], x[3])
    }
}

/// Orthonormal qubit basis `{|n+>, |n->}` along the Bloch direction
/// `(theta, phi)`; `theta = 0` gives the computational basis.
pub fn qubit_basis(theta: f64, phi: f64) -> [CVector<2>; 2] {
    let (s, cs) = (0.5 * theta).sin_cos();
    let e = Complex64::from_polar(1.0, phi);
    [
        CVector::<2>::new(re(cs), e * s),
        CVector::<2>::new(-e.conj() * s, re(cs)),
    ]
}

/// Product basis `|a_i> (x) |b_j>` at index `2i + j`.
pub fn product_basis(angles: LocalAngles) -> [CVector<4>; 4] {
    let a = qubit_basis(angles.theta_a, angles.phi_a);
    let b = qubit_basis(angles.theta_b, angles.phi_b);
    [
        kron_vec(&a[0], &b[0]),
        kron_vec(&a[0], &b[1]),
        kron_vec(&a[1], &b[0]),
        kron_vec(&a[1], &b[1]),
    ]
}

/// Removes all coherences of `rho` in the given product basis.
pub fn dephase_in_basis(rho: &TwoQubitState, angles: LocalAngles) -> TwoQubitState {
    let mut out = CMatrix::<4>::zeros();
    for v in product_basis(angles) {
        let p = rho.expectation(&v);
        out += v * v.adjoint() * re(p);
    }
    TwoQubitState::from_channel_output(out)
}

pub fn pauli_x() -> CMatrix<2> {
    CMatrix::<2>::new(re(0.0), re(1.0), re(1.0), re(0.0))
}

pub fn pauli_y() -> CMatrix<2> {
    CMatrix::<2>::new(re(0.0), c(0.0, -1.0), c(0.0, 1.0), re(0.0))
}

pub fn pauli_z() -> CMatrix<2> {
    CMatrix::<2>::new(re(1.0), re(0.0), re(0.0), re(-1.0))
}

/// Computational basis ket `|a b>`.
pub fn ket2(a: usize, b: usize) -> CVector<4> {
    let mut v = CVector::<4>::zeros();
    v[2 * a + b] = re(1.0);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn ket1(k: usize) -> CVector<2> {
        let mut v = CVector::<2>::zeros();
        v[k] = re(1.0);
        v
    }

    fn bell_2p() -> CVector<4> {
        (ket2(0, 0) + ket2(1, 1)) * re(std::f64::consts::FRAC_1_SQRT_2)
    }

    #[test]
    fn eig_identity_and_diagonal() {
        let s = hermitian_eig(&CMatrix::<4>::identity()).unwrap();
        assert_eq!(s.eigenvalues, [1.0; 4]);

        let d = CMatrix::<2>::new(re(0.1), re(0.0), re(0.0), re(0.9));
        let s = hermitian_eig(&d).unwrap();
        assert_abs_diff_eq!(s.eigenvalues[0], 0.9, epsilon = 1e-15);
        assert_abs_diff_eq!(s.eigenvalues[1], 0.1, epsilon = 1e-15);
    }

    #[test]
    fn eig_pauli_x() {
        let s = hermitian_eig(&pauli_x()).unwrap();
        assert_abs_diff_eq!(s.eigenvalues[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.eigenvalues[1], -1.0, epsilon = 1e-14);
        assert!((s.reconstruct() - pauli_x()).iter().all(|z| z.norm() < 1e-14));
    }

    #[test]
    fn eig_complex_entries() {
        let m = CMatrix::<2>::new(re(0.3), c(0.2, -0.4), c(0.2, 0.4), re(-1.1));
        let s = hermitian_eig(&m).unwrap();
        // trace and determinant of the 2x2 fix the pair
        let tr = -0.8;
        let det: f64 = 0.3 * -1.1 - (0.04 + 0.16);
        let disc = (tr * tr / 4.0 - det).sqrt();
        assert_abs_diff_eq!(s.eigenvalues[0], tr / 2.0 + disc, epsilon = 1e-14);
        assert_abs_diff_eq!(s.eigenvalues[1], tr / 2.0 - disc, epsilon = 1e-14);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = CMatrix::<2>::new(re(0.0), re(1.0), re(0.5), re(0.0));
        assert!(matches!(hermitian_eig(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn density_validation() {
        assert!(matches!(
            QubitState::diagonal([0.6, 0.6]),
            Err(Error::BadTrace { .. })
        ));
        assert!(matches!(
            QubitState::diagonal([1.2, -0.2]),
            Err(Error::NegativeEigenvalue { .. })
        ));
        assert!(QubitState::diagonal([1.0 + 5e-11, -5e-11]).is_ok());
    }

    #[test]
    fn entropy_values() {
        let pure = TwoQubitState::pure(&bell_2p());
        assert_abs_diff_eq!(von_neumann_entropy(&pure), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            von_neumann_entropy(&TwoQubitState::maximally_mixed()),
            2.0,
            epsilon = 1e-14
        );
        let rho = QubitState::diagonal([0.9, 0.1]).unwrap();
        assert_abs_diff_eq!(von_neumann_entropy(&rho), 0.46900, epsilon = 1e-5);
    }

    #[test]
    fn entropy_clamps_and_rejects() {
        assert_eq!(entropy_bits(&[1.0, -5e-9]).unwrap(), 0.0);
        assert!(entropy_bits(&[1.0, -2e-8]).is_err());
    }

    #[test]
    fn relative_entropy_cases() {
        let rho = TwoQubitState::diagonal([0.7, 0.2, 0.1, 0.0]).unwrap();
        assert_abs_diff_eq!(relative_entropy(&rho, &rho), 0.0, epsilon = 1e-12);
        let mixed = TwoQubitState::maximally_mixed();
        assert_abs_diff_eq!(
            relative_entropy(&rho, &mixed),
            2.0 - von_neumann_entropy(&rho),
            epsilon = 1e-12
        );
        let zero = QubitState::pure(&ket1(0));
        let one = QubitState::pure(&ket1(1));
        assert_eq!(relative_entropy(&zero, &one), f64::INFINITY);
    }

    #[test]
    fn tensor_products() {
        let i2 = HermitianMatrix::new(CMatrix::<2>::identity()).unwrap();
        assert_eq!(*tensor(&i2, &i2).matrix(), CMatrix::<4>::identity());

        let p0 = HermitianMatrix::new(ket1(0) * ket1(0).adjoint()).unwrap();
        let p1 = HermitianMatrix::new(ket1(1) * ket1(1).adjoint()).unwrap();
        let v = ket2(0, 1);
        assert_eq!(*tensor(&p0, &p1).matrix(), v * v.adjoint());

        let half = QubitState::maximally_mixed();
        assert_eq!(
            product_state(&half, &half),
            TwoQubitState::maximally_mixed()
        );
    }

    #[test]
    fn partial_traces() {
        let bell = TwoQubitState::pure(&bell_2p());
        let red = partial_trace(&bell, Subsystem::A);
        assert!(red.max_abs_diff(&QubitState::maximally_mixed()) < 1e-15);

        let prod = TwoQubitState::pure(&ket2(0, 1));
        assert_eq!(partial_trace(&prod, Subsystem::A), QubitState::pure(&ket1(0)));
        assert_eq!(partial_trace(&prod, Subsystem::B), QubitState::pure(&ket1(1)));
    }

    #[test]
    fn dephasing_examples() {
        let comp = LocalAngles::default();
        let diag = TwoQubitState::diagonal([0.1, 0.2, 0.3, 0.4]).unwrap();
        assert!(dephase_in_basis(&diag, comp).max_abs_diff(&diag) < 1e-15);

        let bell = TwoQubitState::pure(&bell_2p());
        let expect = TwoQubitState::diagonal([0.5, 0.0, 0.0, 0.5]).unwrap();
        assert!(dephase_in_basis(&bell, comp).max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn product_basis_is_orthonormal() {
        let basis = product_basis(LocalAngles::new(0.3, 1.1, 2.0, -0.4));
        for i in 0..4 {
            for j in 0..4 {
                let ip = (basis[i].adjoint() * basis[j])[(0, 0)];
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((ip - re(want)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn trace_distance_cases() {
        let rho = TwoQubitState::diagonal([0.9, 0.1, 0.0, 0.0]).unwrap();
        assert_abs_diff_eq!(trace_distance(&rho, &rho), 0.0, epsilon = 1e-15);
        let zero = QubitState::pure(&ket1(0));
        let one = QubitState::pure(&ket1(1));
        assert_abs_diff_eq!(trace_distance(&zero, &one), 1.0, epsilon = 1e-15);
        let sigma = TwoQubitState::diagonal([0.45, 0.05, 0.05, 0.45]).unwrap();
        assert_abs_diff_eq!(trace_distance(&rho, &sigma), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn partial_transpose_of_bell_state() {
        let bell = TwoQubitState::pure(&bell_2p());
        let pt = partial_transpose(bell.matrix());
        let s = hermitian_eig(&pt).unwrap();
        assert_abs_diff_eq!(s.eigenvalues[3], -0.5, epsilon = 1e-14);
    }
}
