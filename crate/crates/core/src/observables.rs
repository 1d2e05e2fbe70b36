//! Bilinear observables of a spinor jet: scalar bilinear, Dirac current,
//! convection bracket, displacement and spin currents, the Gordon split of
//! the current, the stress-energy tensor with its trace identity, and the
//! two-field interference current.
//!
//! Index conventions: currents carry an upper index; coordinate derivatives
//! are lower. The displacement current raises its index with the metric,
//! `j^k_p = (i hbar / 2m) g^{km} [bracket_m]`, while the spin term contracts
//! `d_l` directly against the `l` of `sigma^{kl}`. With those placements the
//! Gordon identity `j = j_p + j_s` holds to rounding for every massive
//! solution, which is the arbiter test pinning the convention.

use serde::Serialize;
use thiserror::Error;

use crate::algebra::PRECOMPUTED;
use crate::fields::{PhysicalParams, SpinorJet, SpinorValue};
use crate::Complex64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ObservableError {
    #[error("spacetime index {0} out of range 0..=3")]
    IndexOutOfRange(usize),
    #[error("decomposition undefined for m = 0 (1/2m prefactor)")]
    MasslessDecomposition,
}

/// Real four-current, plus the largest imaginary part that was discarded
/// when taking real components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FourCurrent {
    /// `j^(0..3)`, units of `c` times probability density.
    pub components: [f64; 4],
    pub imag_residue: f64,
}

impl FourCurrent {
    pub fn zero() -> Self {
        Self { components: [0.0; 4], imag_residue: 0.0 }
    }

    fn from_complex(values: [Complex64; 4]) -> Self {
        Self {
            components: std::array::from_fn(|k| values[k].re),
            imag_residue: values.iter().map(|z| z.im.abs()).fold(0.0, f64::max),
        }
    }

    /// Largest component magnitude.
    pub fn magnitude(&self) -> f64 {
        self.components.iter().map(|c| c.abs()).fold(0.0, f64::max)
    }
}

/// Gordon split of the Dirac current. The residual is always computed from
/// the three parts, never assumed zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurrentDecomposition {
    pub total: FourCurrent,
    pub convection: FourCurrent,
    pub spin: FourCurrent,
    /// `sup_k |total - convection - spin|`.
    pub residual: f64,
}

/// Symmetrized stress-energy tensor `T_{ik}` with reality and symmetry
/// diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StressEnergyTensor {
    pub components: [[f64; 4]; 4],
    pub imag_residue: f64,
    /// `max |T_{ik} - T_{ki}|`; every entry is computed independently, so
    /// this measures how well the symmetrization survives rounding.
    pub asym_residue: f64,
}

impl StressEnergyTensor {
    /// `T^i_i = g^{ik} T_{ik}` for the diagonal metric.
    pub fn trace(&self) -> f64 {
        let g = &PRECOMPUTED.metric;
        (0..4).map(|i| g.diag(i) * self.components[i][i]).sum()
    }

    /// Largest entry magnitude.
    pub fn magnitude(&self) -> f64 {
        self.components
            .iter()
            .flatten()
            .map(|t| t.abs())
            .fold(0.0, f64::max)
    }
}

/// `a^dagger M b`.
#[inline]
fn bilinear(m: &crate::algebra::CMatrix4, a: &SpinorValue, b: &SpinorValue) -> Complex64 {
    a.dotc(&(m * b))
}

/// Scalar bilinear `psi^+ psi = psi^* gamma^(0) psi`. Real for any spinor;
/// it must vanish for every ghost (the necessity condition).
pub fn scalar_bilinear(jet: &SpinorJet) -> Complex64 {
    bilinear(&PRECOMPUTED.gamma0, &jet.value, &jet.value)
}

/// Dirac current `j^(k) = c psi^* gamma^(0) gamma^(k) psi`.
pub fn dirac_current(jet: &SpinorJet, params: &PhysicalParams) -> FourCurrent {
    let alg = &*PRECOMPUTED;
    let c = Complex64::new(params.c, 0.0);
    FourCurrent::from_complex(std::array::from_fn(|k| {
        bilinear(&alg.gamma0_gamma[k], &jet.value, &jet.value) * c
    }))
}

/// The convection bracket for coordinate index `k`:
/// `psi^* gamma^(0) d_k psi - d_k psi^* gamma^(0) psi`.
///
/// No metric factor and no prefactor; purely imaginary (up to rounding) for
/// any jet. This mass-free bracket is what the ghost theorems are really
/// statements about.
pub fn convection_bracket(jet: &SpinorJet, k: usize) -> Result<Complex64, ObservableError> {
    if k > 3 {
        return Err(ObservableError::IndexOutOfRange(k));
    }
    Ok(convection_bracket_mixed(jet, jet, k))
}

/// Two-field convection bracket `psi_2^* gamma^0 d_k psi_1 - d_k psi_2^* gamma^0 psi_1`.
fn convection_bracket_mixed(jet2: &SpinorJet, jet1: &SpinorJet, k: usize) -> Complex64 {
    let g0 = &PRECOMPUTED.gamma0;
    bilinear(g0, &jet2.value, &jet1.partials[k]) - bilinear(g0, &jet2.partials[k], &jet1.value)
}

fn require_mass(params: &PhysicalParams) -> Result<(), ObservableError> {
    if params.m > 0.0 {
        Ok(())
    } else {
        Err(ObservableError::MasslessDecomposition)
    }
}

/// Displacement (convection) current
/// `j^k_p = (i hbar / 2m) g^{km} [bracket_m]`, the relativistic analog of
/// the Schroedinger probability current.
pub fn displacement_current(
    jet: &SpinorJet,
    params: &PhysicalParams,
) -> Result<FourCurrent, ObservableError> {
    require_mass(params)?;
    let prefactor = Complex64::new(0.0, params.hbar / (2.0 * params.m));
    let g = &PRECOMPUTED.metric;
    Ok(FourCurrent::from_complex(std::array::from_fn(|k| {
        convection_bracket_mixed(jet, jet, k) * prefactor * g.diag(k)
    })))
}

/// Spin current `j^k_s = (hbar / 2m) d_l [psi^* gamma^(0) sigma^{kl} psi]`,
/// with the outer derivative expanded by the product rule onto the jet
/// partials so only first derivatives are needed.
pub fn spin_current(
    jet: &SpinorJet,
    params: &PhysicalParams,
) -> Result<FourCurrent, ObservableError> {
    require_mass(params)?;
    let alg = &*PRECOMPUTED;
    let prefactor = params.hbar / (2.0 * params.m);
    Ok(FourCurrent::from_complex(std::array::from_fn(|k| {
        let mut sum = Complex64::new(0.0, 0.0);
        for l in 0..4 {
            let kernel = &alg.gamma0_sigma[k][l];
            sum += bilinear(kernel, &jet.partials[l], &jet.value)
                + bilinear(kernel, &jet.value, &jet.partials[l]);
        }
        sum * prefactor
    })))
}

/// Full Gordon split of the Dirac current at one jet.
///
/// The identity `total = convection + spin` only holds when the jet comes
/// from a Dirac solution of mass `params.m`; the residual field reports by
/// how much it fails otherwise.
pub fn gordon_decomposition(
    jet: &SpinorJet,
    params: &PhysicalParams,
) -> Result<CurrentDecomposition, ObservableError> {
    require_mass(params)?;
    let total = dirac_current(jet, params);
    let convection = displacement_current(jet, params)?;
    let spin = spin_current(jet, params)?;
    let residual = (0..4)
        .map(|k| (total.components[k] - convection.components[k] - spin.components[k]).abs())
        .fold(0.0, f64::max);
    Ok(CurrentDecomposition { total, convection, spin, residual })
}

/// Residual of the two-solution Gordon identity:
/// `sup_k | c psi_2^* gamma^0 gamma^(k) psi_1 - (convection + spin terms) |`.
///
/// The two jets must come from solutions of the same mass `params.m`;
/// taking `jet1 = jet2` reduces this to the single-field identity.
pub fn mixed_gordon_residual(
    jet1: &SpinorJet,
    jet2: &SpinorJet,
    params: &PhysicalParams,
) -> Result<f64, ObservableError> {
    require_mass(params)?;
    let alg = &*PRECOMPUTED;
    let c = Complex64::new(params.c, 0.0);
    let conv_prefactor = Complex64::new(0.0, params.hbar / (2.0 * params.m));
    let spin_prefactor = params.hbar / (2.0 * params.m);
    let mut worst = 0.0f64;
    for k in 0..4 {
        let lhs = bilinear(&alg.gamma0_gamma[k], &jet2.value, &jet1.value) * c;
        let convection =
            convection_bracket_mixed(jet2, jet1, k) * conv_prefactor * alg.metric.diag(k);
        let mut spin = Complex64::new(0.0, 0.0);
        for l in 0..4 {
            let kernel = &alg.gamma0_sigma[k][l];
            spin += bilinear(kernel, &jet2.partials[l], &jet1.value)
                + bilinear(kernel, &jet2.value, &jet1.partials[l]);
        }
        worst = worst.max((lhs - convection - spin * spin_prefactor).norm());
    }
    Ok(worst)
}

/// Symmetrized stress-energy tensor
/// `T_{ik} = (i hbar c / 4) { psi^+ gamma_i d_k psi - d_k psi^+ gamma_i psi + (i <-> k) }`.
#[allow(clippy::needless_range_loop)] // i, k are tensor indices
pub fn stress_energy(jet: &SpinorJet, params: &PhysicalParams) -> StressEnergyTensor {
    let alg = &*PRECOMPUTED;
    let prefactor = Complex64::new(0.0, params.hbar * params.c / 4.0);
    let mut components = [[0.0; 4]; 4];
    let mut imag_residue = 0.0f64;
    for i in 0..4 {
        for k in 0..4 {
            let ki = &alg.gamma0_gamma_lower[i];
            let kk = &alg.gamma0_gamma_lower[k];
            let entry = (bilinear(ki, &jet.value, &jet.partials[k])
                - bilinear(ki, &jet.partials[k], &jet.value)
                + bilinear(kk, &jet.value, &jet.partials[i])
                - bilinear(kk, &jet.partials[i], &jet.value))
                * prefactor;
            components[i][k] = entry.re;
            imag_residue = imag_residue.max(entry.im.abs());
        }
    }
    let mut asym_residue = 0.0f64;
    for i in 0..4 {
        for k in 0..4 {
            asym_residue = asym_residue.max((components[i][k] - components[k][i]).abs());
        }
    }
    StressEnergyTensor { components, imag_residue, asym_residue }
}

/// Residual of the trace identity `T^i_i = m c^2 psi^+ psi`, which holds for
/// every Dirac solution of mass `params.m` and forces the scalar bilinear of
/// a ghost to vanish.
pub fn trace_identity_residual(jet: &SpinorJet, params: &PhysicalParams) -> f64 {
    let tensor = stress_energy(jet, params);
    let expected = params.m * params.c * params.c * scalar_bilinear(jet).re;
    (tensor.trace() - expected).abs()
}

/// Interference displacement current of two fields, the cross term in the
/// split `j_p(psi_1 + psi_2) = j_p(psi_1) + j_p(psi_2) + j_{12p}`. The split
/// is exact bilinear algebra, no equation of motion assumed.
pub fn interference_displacement(
    jet1: &SpinorJet,
    jet2: &SpinorJet,
    params: &PhysicalParams,
) -> Result<FourCurrent, ObservableError> {
    require_mass(params)?;
    let prefactor = Complex64::new(0.0, params.hbar / (2.0 * params.m));
    let g = &PRECOMPUTED.metric;
    Ok(FourCurrent::from_complex(std::array::from_fn(|k| {
        (convection_bracket_mixed(jet1, jet2, k) + convection_bracket_mixed(jet2, jet1, k))
            * prefactor
            * g.diag(k)
    })))
}
