//! Spinor fields: a field is an evaluator from a spacetime point to a
//! [`SpinorJet`] (value plus four first partials) with a declared mass.
//!
//! The built-in families are exact solutions of the free Dirac equation and
//! carry analytic jets; arbitrary sampled fields enter through the central
//! finite-difference provider. Jets stop at first derivatives: every
//! observable downstream needs nothing deeper once the spin term's outer
//! derivative is expanded by the product rule.

use std::fmt;
use std::sync::Arc;

use nalgebra::{RowVector4, Vector4};
use thiserror::Error;

use crate::algebra::PRECOMPUTED;
use crate::Complex64;

/// 4-component complex spinor value.
pub type SpinorValue = Vector4<Complex64>;
/// Row spinor, the shape of Dirac adjoints and adjoint-equation residuals.
pub type SpinorRow = RowVector4<Complex64>;

#[derive(Debug, Error)]
pub enum FieldError {
    #[error("physical parameters out of range: {0}")]
    InvalidParams(String),
    #[error("this family requires a strictly positive mass")]
    MassRequired,
    #[error("spinor projects to zero on the positive-energy subspace")]
    ZeroProjection,
    #[error("constant spinor violates the light-front constraint (residual {residual:.3e})")]
    ConstraintViolated { residual: f64 },
    #[error("light-front family requires a real constant spinor")]
    ComplexSpinor,
    #[error("finite-difference step must be positive and finite, got {0}")]
    InvalidStep(f64),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("non-finite spinor sample at x = {at:?}")]
    NonFiniteSample { at: [f64; 4] },
}

/// Spacetime point with `x^0 = c t`; all coordinates in units of length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacetimePoint(pub [f64; 4]);

impl SpacetimePoint {
    pub fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Self([x0, x1, x2, x3])
    }

    pub fn origin() -> Self {
        Self([0.0; 4])
    }

    pub fn coord(&self, k: usize) -> f64 {
        self.0[k]
    }

    /// The point displaced by `delta` along coordinate axis `axis`.
    pub fn shifted(&self, axis: usize, delta: f64) -> Self {
        let mut x = self.0;
        x[axis] += delta;
        Self(x)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }
}

impl std::ops::Index<usize> for SpacetimePoint {
    type Output = f64;
    fn index(&self, k: usize) -> &f64 {
        &self.0[k]
    }
}

/// Fundamental constants plus the mass of the field under study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub hbar: f64,
    pub c: f64,
    pub m: f64,
}

impl PhysicalParams {
    pub fn new(hbar: f64, c: f64, m: f64) -> Result<Self, FieldError> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(FieldError::InvalidParams(format!("hbar = {hbar}")));
        }
        if !(c > 0.0 && c.is_finite()) {
            return Err(FieldError::InvalidParams(format!("c = {c}")));
        }
        if !(m >= 0.0 && m.is_finite()) {
            return Err(FieldError::InvalidParams(format!("m = {m}")));
        }
        Ok(Self { hbar, c, m })
    }

    /// Natural units `hbar = c = 1` with the given mass.
    pub fn natural(m: f64) -> Self {
        Self { hbar: 1.0, c: 1.0, m }
    }

    pub fn with_mass(&self, m: f64) -> Self {
        Self { m, ..*self }
    }
}

/// Spinor value together with its four first partial derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorJet {
    pub value: SpinorValue,
    /// `partials[k]` is the derivative along `x^k`, units 1/length
    /// relative to `value`.
    pub partials: [SpinorValue; 4],
}

impl SpinorJet {
    pub fn zero() -> Self {
        Self {
            value: SpinorValue::zeros(),
            partials: [SpinorValue::zeros(); 4],
        }
    }

    pub fn is_finite(&self) -> bool {
        let finite = |v: &SpinorValue| v.iter().all(|z| z.re.is_finite() && z.im.is_finite());
        finite(&self.value) && self.partials.iter().all(finite)
    }

    /// Euclidean norm of the value.
    pub fn value_norm(&self) -> f64 {
        self.value.norm()
    }

    /// Largest Euclidean norm among the four partials.
    pub fn sup_partial_norm(&self) -> f64 {
        self.partials.iter().map(|p| p.norm()).fold(0.0, f64::max)
    }
}

impl Default for SpinorJet {
    fn default() -> Self {
        Self::zero()
    }
}

/// A smooth real function of one variable supplied with its derivative,
/// used as the scalar profile of the light-front families.
#[derive(Clone)]
pub struct ScalarProfile {
    value: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    deriv: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    label: String,
}

impl ScalarProfile {
    pub fn new(
        label: impl Into<String>,
        value: impl Fn(f64) -> f64 + Send + Sync + 'static,
        deriv: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            value: Arc::new(value),
            deriv: Arc::new(deriv),
            label: label.into(),
        }
    }

    pub fn value(&self, phi: f64) -> f64 {
        (self.value)(phi)
    }

    pub fn deriv(&self, phi: f64) -> f64 {
        (self.deriv)(phi)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn cosine() -> Self {
        Self::new("cos", f64::cos, |phi| -phi.sin())
    }

    pub fn sine() -> Self {
        Self::new("sin", f64::sin, f64::cos)
    }

    /// `exp(-phi^2)`, a non-periodic localized profile.
    pub fn gaussian() -> Self {
        Self::new(
            "gaussian",
            |phi: f64| (-phi * phi).exp(),
            |phi: f64| -2.0 * phi * (-phi * phi).exp(),
        )
    }

    pub fn zero() -> Self {
        Self::new("0", |_| 0.0, |_| 0.0)
    }

    /// The profile multiplied by the constant `a`.
    pub fn scaled(&self, a: f64) -> Self {
        let value = Arc::clone(&self.value);
        let deriv = Arc::clone(&self.deriv);
        Self {
            value: Arc::new(move |phi| a * value(phi)),
            deriv: Arc::new(move |phi| a * deriv(phi)),
            label: format!("{a}*{}", self.label),
        }
    }
}

impl fmt::Debug for ScalarProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarProfile").field("label", &self.label).finish()
    }
}

/// How a field's partial derivatives are produced.
#[derive(Debug, Clone, PartialEq)]
pub enum DerivativeProvider {
    Analytic,
    FiniteDifference { steps: [f64; 4] },
}

type JetFn = dyn Fn(&SpacetimePoint) -> SpinorJet + Send + Sync;

/// A spinor field: jet evaluator, declared mass, derivative provider, and
/// the coordinate box on which evaluation is trustworthy.
#[derive(Clone)]
pub struct SpinorField {
    eval: Arc<JetFn>,
    mass: f64,
    provider: DerivativeProvider,
    label: String,
    domain: [(f64, f64); 4],
}

impl fmt::Debug for SpinorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpinorField")
            .field("label", &self.label)
            .field("mass", &self.mass)
            .field("provider", &self.provider)
            .finish()
    }
}

const UNBOUNDED: [(f64, f64); 4] = [(f64::NEG_INFINITY, f64::INFINITY); 4];

impl SpinorField {
    /// Wraps an arbitrary analytic jet evaluator.
    pub fn analytic(
        eval: impl Fn(&SpacetimePoint) -> SpinorJet + Send + Sync + 'static,
        mass: f64,
        label: impl Into<String>,
    ) -> Self {
        Self {
            eval: Arc::new(eval),
            mass,
            provider: DerivativeProvider::Analytic,
            label: label.into(),
            domain: UNBOUNDED,
        }
    }

    /// The identically zero field.
    pub fn zero() -> Self {
        Self::analytic(|_| SpinorJet::zero(), 0.0, "zero")
    }

    /// Positive-energy plane wave `psi(x) = u exp(-i (E t - p.x) / hbar)`
    /// with `E = +sqrt((|p| c)^2 + (m c^2)^2)`.
    ///
    /// The supplied spinor is projected onto the positive-energy subspace for
    /// `(p, m)`, so the result always solves the Dirac equation; a spinor
    /// orthogonal to that subspace is rejected.
    pub fn plane_wave(
        u: SpinorValue,
        p: [f64; 3],
        params: &PhysicalParams,
    ) -> Result<Self, FieldError> {
        if params.m <= 0.0 {
            return Err(FieldError::MassRequired);
        }
        let alg = &*PRECOMPUTED;
        let p_norm2: f64 = p.iter().map(|pi| pi * pi).sum();
        let rest_energy = params.m * params.c * params.c;
        let energy = (p_norm2 * params.c * params.c + rest_energy * rest_energy).sqrt();

        // Momentum-space Dirac Hamiltonian H = c alpha.p + gamma^0 m c^2;
        // H^2 = E^2, so (1 + H/E)/2 projects onto the +E eigenspace.
        let mut hamiltonian = alg.gamma0 * Complex64::new(rest_energy, 0.0);
        for (a, pa) in p.iter().enumerate() {
            hamiltonian += alg.gamma0_gamma[a + 1] * Complex64::new(params.c * pa, 0.0);
        }
        let u_proj: SpinorValue = (u + (hamiltonian * u).unscale(energy)).unscale(2.0);
        if u_proj.norm() <= 1e-12 * u.norm() || u_proj.norm() == 0.0 {
            return Err(FieldError::ZeroProjection);
        }

        let phase_grad = [
            -energy / (params.c * params.hbar),
            p[0] / params.hbar,
            p[1] / params.hbar,
            p[2] / params.hbar,
        ];
        let label = format!("plane-wave(p=({},{},{}), m={})", p[0], p[1], p[2], params.m);
        let mass = params.m;
        Ok(Self {
            eval: Arc::new(move |x: &SpacetimePoint| {
                let phase: f64 = (0..4).map(|k| phase_grad[k] * x[k]).sum();
                let value = u_proj * Complex64::from_polar(1.0, phase);
                let partials =
                    std::array::from_fn(|k| value * Complex64::new(0.0, phase_grad[k]));
                SpinorJet { value, partials }
            }),
            mass,
            provider: DerivativeProvider::Analytic,
            label,
            domain: UNBOUNDED,
        })
    }

    /// Massless light-front wave `psi(x) = u (f(phi) + i g(phi))` with
    /// `phi = x^0 - x^3`, for a real constant spinor `u` satisfying
    /// `(gamma^0 - gamma^3) u = 0`.
    ///
    /// This is the minimal constructive family with real `u` that solves the
    /// massless Dirac equation: the constraint kills the kinetic term for
    /// any profile of `phi` alone.
    pub fn lightfront(
        u: SpinorValue,
        f: ScalarProfile,
        g: ScalarProfile,
    ) -> Result<Self, FieldError> {
        let scale = u.norm();
        let max_imag = u.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        if max_imag > 1e-12 * scale {
            return Err(FieldError::ComplexSpinor);
        }
        let alg = &*PRECOMPUTED;
        let residual = ((alg.basis.gamma(0) - alg.basis.gamma(3)) * u).norm();
        if residual > 1e-12 * scale {
            return Err(FieldError::ConstraintViolated { residual });
        }
        let label = format!("lightfront(f={}, g={})", f.label(), g.label());
        Ok(Self {
            eval: Arc::new(move |x: &SpacetimePoint| {
                let phi = x[0] - x[3];
                let wave = Complex64::new(f.value(phi), g.value(phi));
                let slope = Complex64::new(f.deriv(phi), g.deriv(phi));
                let value = u * wave;
                let along = u * slope;
                SpinorJet {
                    value,
                    partials: [along, SpinorValue::zeros(), SpinorValue::zeros(), -along],
                }
            }),
            mass: 0.0,
            provider: DerivativeProvider::Analytic,
            label,
            domain: UNBOUNDED,
        })
    }

    /// Massive ghost `psi(x) = (1, 0, -i, 0) exp(kappa x^3)` with
    /// `kappa = m c / hbar`: an exact Dirac solution whose partials satisfy
    /// `d_k psi = g_k psi` with real `g = (0, 0, 0, kappa)`.
    ///
    /// The profile grows without bound in `x^3`; the evaluation domain is
    /// capped at `|x^3| <= 20 / kappa` to stay far from overflow.
    pub fn massive_exponential_ghost(params: &PhysicalParams) -> Result<Self, FieldError> {
        if params.m <= 0.0 {
            return Err(FieldError::MassRequired);
        }
        let kappa = params.m * params.c / params.hbar;
        let u = SpinorValue::new(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 0.0),
        );
        let mut domain = UNBOUNDED;
        domain[3] = (-20.0 / kappa, 20.0 / kappa);
        Ok(Self {
            eval: Arc::new(move |x: &SpacetimePoint| {
                let value = u.scale((kappa * x[3]).exp());
                SpinorJet {
                    value,
                    partials: [
                        SpinorValue::zeros(),
                        SpinorValue::zeros(),
                        SpinorValue::zeros(),
                        value.scale(kappa),
                    ],
                }
            }),
            mass: params.m,
            provider: DerivativeProvider::Analytic,
            label: format!("massive-exponential-ghost(m={})", params.m),
            domain,
        })
    }

    /// Pointwise sum of two fields; jets add componentwise.
    ///
    /// Masses may differ, in which case the sum is not a single-mass Dirac
    /// solution; the label records that and the first field's mass is kept
    /// as the declared one.
    pub fn superpose(&self, other: &Self) -> Self {
        let e1 = Arc::clone(&self.eval);
        let e2 = Arc::clone(&other.eval);
        let mixed = self.mass != other.mass;
        let label = if mixed {
            format!("superpose({} + {}) [mixed-mass]", self.label, other.label)
        } else {
            format!("superpose({} + {})", self.label, other.label)
        };
        let provider = match (&self.provider, &other.provider) {
            (DerivativeProvider::Analytic, DerivativeProvider::Analytic) => {
                DerivativeProvider::Analytic
            }
            (DerivativeProvider::FiniteDifference { steps }, DerivativeProvider::Analytic)
            | (DerivativeProvider::Analytic, DerivativeProvider::FiniteDifference { steps }) => {
                DerivativeProvider::FiniteDifference { steps: *steps }
            }
            (
                DerivativeProvider::FiniteDifference { steps: a },
                DerivativeProvider::FiniteDifference { steps: b },
            ) => DerivativeProvider::FiniteDifference {
                steps: std::array::from_fn(|k| a[k].max(b[k])),
            },
        };
        let domain =
            std::array::from_fn(|k| (self.domain[k].0.max(other.domain[k].0),
                                     self.domain[k].1.min(other.domain[k].1)));
        Self {
            eval: Arc::new(move |x: &SpacetimePoint| {
                let a = e1(x);
                let b = e2(x);
                SpinorJet {
                    value: a.value + b.value,
                    partials: std::array::from_fn(|k| a.partials[k] + b.partials[k]),
                }
            }),
            mass: self.mass,
            provider,
            label,
            domain,
        }
    }

    /// Wraps a value-only sampler with second-order central differences,
    /// step `steps[k]` along axis `k`.
    pub fn finite_difference(
        values: impl Fn(&SpacetimePoint) -> SpinorValue + Send + Sync + 'static,
        steps: [f64; 4],
        mass: f64,
        label: impl Into<String>,
    ) -> Result<Self, FieldError> {
        for &h in &steps {
            if !(h > 0.0 && h.is_finite()) {
                return Err(FieldError::InvalidStep(h));
            }
        }
        if !(mass >= 0.0 && mass.is_finite()) {
            return Err(FieldError::InvalidParams(format!("mass = {mass}")));
        }
        Ok(Self {
            eval: Arc::new(move |x: &SpacetimePoint| {
                let value = values(x);
                let partials = std::array::from_fn(|k| {
                    let fwd = values(&x.shifted(k, steps[k]));
                    let bwd = values(&x.shifted(k, -steps[k]));
                    (fwd - bwd).unscale(2.0 * steps[k])
                });
                SpinorJet { value, partials }
            }),
            mass,
            provider: DerivativeProvider::FiniteDifference { steps },
            label: label.into(),
            domain: UNBOUNDED,
        })
    }

    /// [`Self::finite_difference`] with the same step on all four axes.
    pub fn finite_difference_uniform(
        values: impl Fn(&SpacetimePoint) -> SpinorValue + Send + Sync + 'static,
        h: f64,
        mass: f64,
        label: impl Into<String>,
    ) -> Result<Self, FieldError> {
        Self::finite_difference(values, [h; 4], mass, label)
    }

    pub fn jet(&self, x: &SpacetimePoint) -> SpinorJet {
        (self.eval)(x)
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn provider(&self) -> &DerivativeProvider {
        &self.provider
    }

    /// Coordinate box on which the field may be evaluated.
    pub fn domain(&self) -> &[(f64, f64); 4] {
        &self.domain
    }

    /// Restricts the evaluation domain, e.g. to the interior of a sampled box.
    pub fn with_domain(mut self, domain: [(f64, f64); 4]) -> Self {
        self.domain = domain;
        self
    }

    /// Dirac-equation residual of this field at `x` for mass `params.m`.
    pub fn dirac_residual_at(&self, x: &SpacetimePoint, params: &PhysicalParams) -> SpinorValue {
        dirac_residual(&self.jet(x), params)
    }
}

/// Dirac adjoint `psi^+ = psi^* gamma^(0)` as a row spinor.
pub fn dirac_adjoint(psi: &SpinorValue) -> SpinorRow {
    psi.adjoint() * PRECOMPUTED.gamma0
}

/// Residual of the Dirac equation evaluated from a jet:
/// `i hbar gamma^(k) d_k psi - m c psi`. Vanishes exactly when the jet comes
/// from a solution of mass `params.m`.
pub fn dirac_residual(jet: &SpinorJet, params: &PhysicalParams) -> SpinorValue {
    let alg = &*PRECOMPUTED;
    let mut kinetic = SpinorValue::zeros();
    for k in 0..4 {
        kinetic += alg.basis.gamma(k) * jet.partials[k];
    }
    kinetic * Complex64::new(0.0, params.hbar) - jet.value * Complex64::new(params.m * params.c, 0.0)
}

/// Residual of the conjugated Dirac equation as a row spinor, with the sign
/// fixed so that it equals the Dirac adjoint of [`dirac_residual`].
pub fn adjoint_residual(jet: &SpinorJet, params: &PhysicalParams) -> SpinorRow {
    let alg = &*PRECOMPUTED;
    let mut kinetic = SpinorRow::zeros();
    for k in 0..4 {
        kinetic += jet.partials[k].adjoint() * alg.gamma0_gamma[k];
    }
    kinetic * Complex64::new(0.0, -params.hbar)
        - jet.value.adjoint() * alg.gamma0 * Complex64::new(params.m * params.c, 0.0)
}

/// Rectangular sampling grid: corner points and per-axis counts, iterated in
/// row-major order with `x^0` slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    lo: SpacetimePoint,
    hi: SpacetimePoint,
    counts: [usize; 4],
}

impl Grid {
    pub fn new(lo: SpacetimePoint, hi: SpacetimePoint, counts: [usize; 4]) -> Result<Self, FieldError> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(FieldError::InvalidGrid("corners must be finite".into()));
        }
        for k in 0..4 {
            if hi[k] < lo[k] {
                return Err(FieldError::InvalidGrid(format!(
                    "upper corner below lower corner on axis {k}: {} < {}",
                    hi[k], lo[k]
                )));
            }
            if counts[k] == 0 {
                return Err(FieldError::InvalidGrid(format!("count on axis {k} is zero")));
            }
            if counts[k] == 1 && hi[k] != lo[k] {
                return Err(FieldError::InvalidGrid(format!(
                    "axis {k} spans an interval but has a single sample"
                )));
            }
        }
        Ok(Self { lo, hi, counts })
    }

    /// The default probe: 9x5x5x9 points over `[-2, 2]^4`, small enough to
    /// sweep in milliseconds and dense enough to catch per-axis sign errors.
    pub fn default_probe() -> Self {
        Self::new(
            SpacetimePoint::new(-2.0, -2.0, -2.0, -2.0),
            SpacetimePoint::new(2.0, 2.0, 2.0, 2.0),
            [9, 5, 5, 9],
        )
        .expect("default grid is valid")
    }

    pub fn lo(&self) -> SpacetimePoint {
        self.lo
    }

    pub fn hi(&self) -> SpacetimePoint {
        self.hi
    }

    pub fn counts(&self) -> [usize; 4] {
        self.counts
    }

    /// Total number of points.
    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Node spacing along `axis` (zero for single-sample axes).
    pub fn spacing(&self, axis: usize) -> f64 {
        if self.counts[axis] < 2 {
            0.0
        } else {
            (self.hi[axis] - self.lo[axis]) / (self.counts[axis] - 1) as f64
        }
    }

    pub fn spacings(&self) -> [f64; 4] {
        std::array::from_fn(|k| self.spacing(k))
    }

    /// Point at a linear index, row-major with `x^0` slowest.
    pub fn point(&self, linear: usize) -> SpacetimePoint {
        let [n0, n1, n2, n3] = self.counts;
        let i3 = linear % n3;
        let rest = linear / n3;
        let i2 = rest % n2;
        let rest = rest / n2;
        let i1 = rest % n1;
        let i0 = rest / n1;
        debug_assert!(i0 < n0);
        self.node([i0, i1, i2, i3])
    }

    /// Point at per-axis indices.
    pub fn node(&self, idx: [usize; 4]) -> SpacetimePoint {
        SpacetimePoint(std::array::from_fn(|k| {
            if self.counts[k] < 2 {
                self.lo[k]
            } else {
                self.lo[k] + idx[k] as f64 * self.spacing(k)
            }
        }))
    }

    pub fn points(&self) -> impl Iterator<Item = SpacetimePoint> + '_ {
        (0..self.len()).map(|i| self.point(i))
    }

    /// The grid shrunk by one cell on each side of every axis, so central
    /// differences at its nodes stay inside the original box.
    pub fn interior(&self) -> Result<Self, FieldError> {
        for k in 0..4 {
            if self.counts[k] < 3 {
                return Err(FieldError::InvalidGrid(format!(
                    "axis {k} needs at least 3 samples for an interior, has {}",
                    self.counts[k]
                )));
            }
        }
        let lo = SpacetimePoint(std::array::from_fn(|k| self.lo[k] + self.spacing(k)));
        let hi = SpacetimePoint(std::array::from_fn(|k| self.hi[k] - self.spacing(k)));
        Grid::new(lo, hi, std::array::from_fn(|k| self.counts[k] - 2))
    }

    /// Whether every grid point lies inside the field's evaluation domain.
    pub fn within_domain(&self, field: &SpinorField) -> bool {
        let dom = field.domain();
        (0..4).all(|k| self.lo[k] >= dom[k].0 && self.hi[k] <= dom[k].1)
    }
}
