//! Exact constants of the Dirac algebra: the Minkowski metric, the Dirac
//! representation of the gamma matrices built from Pauli blocks, the
//! commutator bilinears `sigma^{kl}`, and index raising/lowering.
//!
//! Everything here is a physical constant: values are constructed once from
//! exact `0 / ±1 / ±i` entries and never mutated, so all the algebraic
//! identities (anticommutators, hermiticity patterns) hold exactly in double
//! precision.

use nalgebra::{Matrix2, Matrix4};
use thiserror::Error;

use crate::Complex64;

/// 2x2 complex matrix (Pauli block).
pub type CMatrix2 = Matrix2<Complex64>;
/// 4x4 complex matrix (gamma / sigma).
pub type CMatrix4 = Matrix4<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    /// Spacetime index outside `0..=3`.
    #[error("spacetime index {0} out of range 0..=3")]
    IndexOutOfRange(usize),
}

/// Flat spacetime metric, fixed to `diag(+1, -1, -1, -1)`.
///
/// The metric is diagonal and involutive (`g·g = 1`), so the components of
/// `g_{ik}` and `g^{ik}` coincide and one accessor serves both.
#[derive(Debug, Clone, PartialEq)]
pub struct Metric {
    components: [[f64; 4]; 4],
}

impl Metric {
    pub fn minkowski() -> Self {
        let mut components = [[0.0; 4]; 4];
        components[0][0] = 1.0;
        for (alpha, row) in components.iter_mut().enumerate().skip(1) {
            row[alpha] = -1.0;
        }
        Self { components }
    }

    /// `g_{ik}` (numerically equal to `g^{ik}`).
    pub fn component(&self, i: usize, k: usize) -> f64 {
        self.components[i][k]
    }

    /// Diagonal entry `g_{kk}` without summation.
    pub fn diag(&self, k: usize) -> f64 {
        self.components[k][k]
    }

    pub fn as_matrix(&self) -> Matrix4<f64> {
        Matrix4::from_fn(|i, k| self.components[i][k])
    }
}

impl Default for Metric {
    fn default() -> Self {
        Self::minkowski()
    }
}

/// The four contravariant gamma matrices in the Dirac representation,
/// together with the Pauli blocks they are assembled from.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaBasis {
    gamma_upper: [CMatrix4; 4],
    pauli: [CMatrix2; 3],
    identity2: CMatrix2,
}

fn pauli_matrices() -> [CMatrix2; 3] {
    [
        CMatrix2::new(ZERO, ONE, ONE, ZERO),
        CMatrix2::new(ZERO, -I, I, ZERO),
        CMatrix2::new(ONE, ZERO, ZERO, -ONE),
    ]
}

/// Assembles `[[a, b], [c, d]]` from 2x2 blocks.
fn from_blocks(a: &CMatrix2, b: &CMatrix2, c: &CMatrix2, d: &CMatrix2) -> CMatrix4 {
    let mut m = CMatrix4::zeros();
    for r in 0..2 {
        for s in 0..2 {
            m[(r, s)] = a[(r, s)];
            m[(r, s + 2)] = b[(r, s)];
            m[(r + 2, s)] = c[(r, s)];
            m[(r + 2, s + 2)] = d[(r, s)];
        }
    }
    m
}

impl GammaBasis {
    /// Builds the Dirac representation:
    /// `gamma^(0) = [[I, 0], [0, -I]]`, `gamma^(a) = [[0, s_a], [-s_a, 0]]`
    /// with `s_a` the Pauli matrices.
    pub fn dirac() -> Self {
        let pauli = pauli_matrices();
        let id2 = CMatrix2::identity();
        let zero2 = CMatrix2::zeros();
        let gamma0 = from_blocks(&id2, &zero2, &zero2, &(-id2));
        let gamma = |a: usize| from_blocks(&zero2, &pauli[a], &(-pauli[a]), &zero2);
        Self {
            gamma_upper: [gamma0, gamma(0), gamma(1), gamma(2)],
            pauli,
            identity2: id2,
        }
    }

    /// Builds a basis from arbitrary matrices. The result need not satisfy
    /// the Clifford relations; pair with [`clifford_residual`] to find out.
    pub fn from_gammas(gamma_upper: [CMatrix4; 4]) -> Self {
        Self {
            gamma_upper,
            pauli: pauli_matrices(),
            identity2: CMatrix2::identity(),
        }
    }

    /// `gamma^(k)` with the index upstairs.
    pub fn gamma(&self, k: usize) -> &CMatrix4 {
        &self.gamma_upper[k]
    }

    pub fn pauli(&self, a: usize) -> &CMatrix2 {
        &self.pauli[a]
    }

    pub fn identity2(&self) -> &CMatrix2 {
        &self.identity2
    }

    /// `gamma_i = g_{ij} gamma^(j)`: identity on the time index, a sign flip
    /// on the spatial ones.
    pub fn lower_gamma(&self, i: usize) -> Result<CMatrix4, AlgebraError> {
        if i > 3 {
            return Err(AlgebraError::IndexOutOfRange(i));
        }
        let g = Metric::minkowski();
        Ok(self.gamma_upper[i].map(|z| z * Complex64::new(g.diag(i), 0.0)))
    }
}

impl Default for GammaBasis {
    fn default() -> Self {
        Self::dirac()
    }
}

/// The antisymmetric tensor of commutator bilinears, entry `(k, l)` holding
/// `sigma^{kl} = (i/2) [gamma^k, gamma^l]` with both indices upstairs.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaTensor {
    components: [[CMatrix4; 4]; 4],
}

impl SigmaTensor {
    /// Builds `sigma^{kl}` from the lower-index commutators
    /// `sigma_{ik} = (i/2) [gamma_i, gamma_k]`, raising both indices with the
    /// metric. For the diagonal metric this is a per-entry sign.
    pub fn new(basis: &GammaBasis, metric: &Metric) -> Self {
        let half_i = Complex64::new(0.0, 0.5);
        let lower: Vec<CMatrix4> = (0..4).map(|i| basis.lower_gamma(i).unwrap()).collect();
        let mut components = [[CMatrix4::zeros(); 4]; 4];
        for k in 0..4 {
            for l in 0..4 {
                let commutator = lower[k] * lower[l] - lower[l] * lower[k];
                let raise = Complex64::new(metric.diag(k) * metric.diag(l), 0.0);
                components[k][l] = (commutator * half_i).map(|z| z * raise);
            }
        }
        Self { components }
    }

    /// `sigma^{kl}`.
    pub fn component(&self, k: usize, l: usize) -> Result<&CMatrix4, AlgebraError> {
        if k > 3 {
            return Err(AlgebraError::IndexOutOfRange(k));
        }
        if l > 3 {
            return Err(AlgebraError::IndexOutOfRange(l));
        }
        Ok(&self.components[k][l])
    }

    pub(crate) fn get(&self, k: usize, l: usize) -> &CMatrix4 {
        &self.components[k][l]
    }
}

/// Sup-entry norm of a complex matrix: `max |m_ij|`.
pub fn sup_entry_norm(m: &CMatrix4) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

/// Constants shared by the field and observable evaluators, with the matrix
/// products that appear in every bilinear precomputed once.
pub(crate) struct Precomputed {
    pub basis: GammaBasis,
    pub metric: Metric,
    pub gamma0: CMatrix4,
    /// `gamma^0 gamma^(k)` (Dirac current kernels; `alpha` matrices for k>0).
    pub gamma0_gamma: [CMatrix4; 4],
    /// `gamma^0 gamma_i` (stress-energy kernels).
    pub gamma0_gamma_lower: [CMatrix4; 4],
    /// `gamma^0 sigma^{kl}` (spin-current kernels).
    pub gamma0_sigma: [[CMatrix4; 4]; 4],
}

pub(crate) static PRECOMPUTED: std::sync::LazyLock<Precomputed> = std::sync::LazyLock::new(|| {
    let basis = GammaBasis::dirac();
    let metric = Metric::minkowski();
    let sigma = SigmaTensor::new(&basis, &metric);
    let gamma0 = *basis.gamma(0);
    let gamma0_gamma = std::array::from_fn(|k| gamma0 * basis.gamma(k));
    let gamma0_gamma_lower = std::array::from_fn(|i| gamma0 * basis.lower_gamma(i).unwrap());
    let gamma0_sigma = std::array::from_fn(|k| std::array::from_fn(|l| gamma0 * sigma.get(k, l)));
    Precomputed {
        basis,
        metric,
        gamma0,
        gamma0_gamma,
        gamma0_gamma_lower,
        gamma0_sigma,
    }
});

/// Self-check of the Clifford relations: the largest entry, over all index
/// pairs, of `{gamma^i, gamma^k} - 2 g^{ik} I`. Zero for the built-in basis.
pub fn clifford_residual(basis: &GammaBasis, metric: &Metric) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..4 {
        for k in 0..4 {
            let gi = basis.gamma(i);
            let gk = basis.gamma(k);
            let anticommutator = gi * gk + gk * gi;
            let expected = CMatrix4::identity()
                .map(|z| z * Complex64::new(2.0 * metric.component(i, k), 0.0));
            worst = worst.max(sup_entry_norm(&(anticommutator - expected)));
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Plain-loop matrix product, independent of nalgebra's `Mul`.
    fn mul_raw(a: &CMatrix4, b: &CMatrix4) -> CMatrix4 {
        let mut out = CMatrix4::zeros();
        for r in 0..4 {
            for c in 0..4 {
                let mut acc = ZERO;
                for t in 0..4 {
                    acc += a[(r, t)] * b[(t, c)];
                }
                out[(r, c)] = acc;
            }
        }
        out
    }

    fn assert_matrix_eq(a: &CMatrix4, b: &CMatrix4, tol: f64) {
        assert!(
            sup_entry_norm(&(a - b)) <= tol,
            "matrices differ by {}",
            sup_entry_norm(&(a - b))
        );
    }

    #[test]
    fn metric_is_diagonal_symmetric_involutive() {
        let g = Metric::minkowski();
        for i in 0..4 {
            for k in 0..4 {
                assert_eq!(g.component(i, k), g.component(k, i));
                if i != k {
                    assert_eq!(g.component(i, k), 0.0);
                }
            }
        }
        let gg = g.as_matrix() * g.as_matrix();
        assert_eq!(gg, Matrix4::identity());
    }

    #[test]
    fn gamma0_is_diag_1_1_m1_m1() {
        let basis = GammaBasis::dirac();
        let g0 = basis.gamma(0);
        let expected = CMatrix4::from_diagonal(&nalgebra::Vector4::new(ONE, ONE, -ONE, -ONE));
        assert_eq!(g0, &expected);
    }

    #[test]
    fn gamma2_corner_entries() {
        // Expanding the sigma_2 block by hand: entry (0,3) is the (0,1) entry
        // of sigma_2, entry (3,0) is the negated (1,0) entry.
        let basis = GammaBasis::dirac();
        let g2 = basis.gamma(2);
        assert_eq!(g2[(0, 3)], -I);
        assert_eq!(g2[(3, 0)], -I);
    }

    #[test]
    fn distinct_gammas_anticommute() {
        let basis = GammaBasis::dirac();
        let g1 = basis.gamma(1);
        let g2 = basis.gamma(2);
        let anti = g1 * g2 + g2 * g1;
        assert_eq!(sup_entry_norm(&anti), 0.0);
    }

    #[test]
    fn clifford_relations_hold_exactly() {
        let basis = GammaBasis::dirac();
        let g = Metric::minkowski();
        assert_eq!(clifford_residual(&basis, &g), 0.0);
    }

    #[test]
    fn hermiticity_pattern() {
        let basis = GammaBasis::dirac();
        assert_eq!(sup_entry_norm(&(basis.gamma(0).adjoint() - basis.gamma(0))), 0.0);
        for alpha in 1..4 {
            let g = basis.gamma(alpha);
            assert_eq!(sup_entry_norm(&(g.adjoint() + g)), 0.0);
        }
    }

    #[test]
    fn gamma_squares() {
        let basis = GammaBasis::dirac();
        let id = CMatrix4::identity();
        assert_eq!(sup_entry_norm(&(basis.gamma(0) * basis.gamma(0) - id)), 0.0);
        for alpha in 1..4 {
            let sq = basis.gamma(alpha) * basis.gamma(alpha);
            assert_eq!(sup_entry_norm(&(sq + id)), 0.0);
        }
    }

    #[test]
    fn lower_gamma_signs() {
        let basis = GammaBasis::dirac();
        assert_eq!(&basis.lower_gamma(0).unwrap(), basis.gamma(0));
        assert_eq!(basis.lower_gamma(3).unwrap(), -basis.gamma(3));
        // Negating the sigma_1 block puts -1 at entry (0,3).
        assert_eq!(basis.lower_gamma(1).unwrap()[(0, 3)], -ONE);
    }

    #[test]
    fn lower_gamma_rejects_bad_index() {
        let basis = GammaBasis::dirac();
        assert_eq!(basis.lower_gamma(4).unwrap_err(), AlgebraError::IndexOutOfRange(4));
    }

    #[test]
    fn index_round_trip_is_identity() {
        let basis = GammaBasis::dirac();
        let g = Metric::minkowski();
        for i in 0..4 {
            let lowered = basis.lower_gamma(i).unwrap();
            let raised = lowered.map(|z| z * Complex64::new(g.diag(i), 0.0));
            assert_eq!(&raised, basis.gamma(i));
        }
    }

    #[test]
    fn sigma_matches_direct_upper_commutator() {
        // Independent route: (i/2)[gamma^k, gamma^l] with raw-loop products.
        let basis = GammaBasis::dirac();
        let sigma = SigmaTensor::new(&basis, &Metric::minkowski());
        let half_i = Complex64::new(0.0, 0.5);
        for k in 0..4 {
            for l in 0..4 {
                let direct = (mul_raw(basis.gamma(k), basis.gamma(l))
                    - mul_raw(basis.gamma(l), basis.gamma(k)))
                    * half_i;
                assert_matrix_eq(sigma.component(k, l).unwrap(), &direct, 0.0);
            }
        }
    }

    #[test]
    fn sigma_12_is_sigma3_blocks() {
        let basis = GammaBasis::dirac();
        let sigma = SigmaTensor::new(&basis, &Metric::minkowski());
        let s3 = basis.pauli(2);
        let expected = from_blocks(s3, &CMatrix2::zeros(), &CMatrix2::zeros(), s3);
        assert_eq!(sigma.component(1, 2).unwrap(), &expected);
    }

    #[test]
    fn sigma_antisymmetry_and_zero_diagonal() {
        let basis = GammaBasis::dirac();
        let sigma = SigmaTensor::new(&basis, &Metric::minkowski());
        for k in 0..4 {
            assert_eq!(sup_entry_norm(sigma.component(k, k).unwrap()), 0.0);
            for l in 0..4 {
                let skl = sigma.component(k, l).unwrap();
                let slk = sigma.component(l, k).unwrap();
                assert_eq!(sup_entry_norm(&(skl + slk)), 0.0);
            }
        }
    }

    #[test]
    fn sigma_dirac_adjoint_hermiticity() {
        // gamma^0 (sigma^{kl})^dagger gamma^0 = sigma^{kl}, which makes the
        // tensor bilinear real.
        let basis = GammaBasis::dirac();
        let sigma = SigmaTensor::new(&basis, &Metric::minkowski());
        let g0 = basis.gamma(0);
        for k in 0..4 {
            for l in 0..4 {
                let skl = sigma.component(k, l).unwrap();
                let conjugated = g0 * skl.adjoint() * g0;
                assert_matrix_eq(&conjugated, skl, 1e-15);
            }
        }
    }

    #[test]
    fn sigma_component_rejects_bad_index() {
        let basis = GammaBasis::dirac();
        let sigma = SigmaTensor::new(&basis, &Metric::minkowski());
        assert_eq!(sigma.component(0, 5).unwrap_err(), AlgebraError::IndexOutOfRange(5));
    }

    #[test]
    fn residual_detects_zeroed_gamma() {
        // {gamma^1, gamma^1} loses its -2I: residual entry 2.
        let basis = GammaBasis::dirac();
        let mut gammas = basis.gamma_upper;
        gammas[1] = CMatrix4::zeros();
        let broken = GammaBasis::from_gammas(gammas);
        assert_eq!(clifford_residual(&broken, &Metric::minkowski()), 2.0);
    }

    #[test]
    fn residual_detects_scaled_gamma() {
        // (2 gamma^0)^2 = 4I against the required 2I: residual entry 6.
        let basis = GammaBasis::dirac();
        let mut gammas = basis.gamma_upper;
        gammas[0] *= Complex64::new(2.0, 0.0);
        let broken = GammaBasis::from_gammas(gammas);
        assert_eq!(clifford_residual(&broken, &Metric::minkowski()), 6.0);
    }
}
