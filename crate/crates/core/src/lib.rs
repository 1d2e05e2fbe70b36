//! Dirac spinor fields on flat (Minkowski) spacetime.
//!
//! The crate builds the Dirac-representation gamma algebra, a small zoo of
//! exact solution families of the free Dirac equation (plane waves,
//! light-front waves, an exponential ghost), and the bilinear observables
//! derived from them: the Dirac current, its Gordon split into convection
//! and spin parts, the stress-energy tensor, and the two-field interference
//! current. On top of that sit grid-sweep scenarios that classify fields as
//! ghost spinors (vanishing stress-energy, non-vanishing current) and verify
//! the decomposition identities with sup-norm evidence.
//!
//! Conventions: metric signature `(+,-,-,-)`, coordinates `x^0 = c t`,
//! spinors are 4-component complex column vectors, and every field carries
//! its value together with its four first partial derivatives (a "jet") so
//! all observables are pointwise algebra.

pub mod algebra;
pub mod fields;
pub mod observables;
pub mod scenarios;

pub use algebra::{AlgebraError, CMatrix2, CMatrix4, GammaBasis, Metric, SigmaTensor};
pub use fields::{
    dirac_adjoint, dirac_residual, ScalarProfile, FieldError, Grid, PhysicalParams,
    SpacetimePoint, SpinorField, SpinorJet, SpinorValue,
};
pub use observables::{
    CurrentDecomposition, FourCurrent, ObservableError, StressEnergyTensor,
};
pub use scenarios::{
    GhostVerdict, MetricOp, MetricRow, ScenarioError, ScenarioReport, Tolerances,
};

/// Complex scalar used throughout: a double-precision pair.
pub type Complex64 = num_complex::Complex<f64>;
