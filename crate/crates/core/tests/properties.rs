//! Property tests over arbitrary jets: the algebraic invariants of the
//! observables hold for any spinor data, not just Dirac solutions.

use nalgebra::Vector4;
use proptest::prelude::*;

use spinor_gordon::fields::{adjoint_residual, dirac_adjoint, dirac_residual};
use spinor_gordon::observables::{
    convection_bracket, dirac_current, displacement_current, interference_displacement,
    scalar_bilinear, stress_energy,
};
use spinor_gordon::{Complex64, PhysicalParams, SpinorJet, SpinorValue};

fn jet_from(values: &[f64]) -> SpinorJet {
    assert_eq!(values.len(), 40);
    let spinor = |chunk: &[f64]| -> SpinorValue {
        Vector4::new(
            Complex64::new(chunk[0], chunk[1]),
            Complex64::new(chunk[2], chunk[3]),
            Complex64::new(chunk[4], chunk[5]),
            Complex64::new(chunk[6], chunk[7]),
        )
    };
    SpinorJet {
        value: spinor(&values[0..8]),
        partials: [
            spinor(&values[8..16]),
            spinor(&values[16..24]),
            spinor(&values[24..32]),
            spinor(&values[32..40]),
        ],
    }
}

fn arb_jet() -> impl Strategy<Value = SpinorJet> {
    prop::collection::vec(-3.0..3.0f64, 40).prop_map(|v| jet_from(&v))
}

fn arb_params() -> impl Strategy<Value = PhysicalParams> {
    (0.5..2.0f64, 0.5..2.0f64, 0.25..4.0f64)
        .prop_map(|(hbar, c, m)| PhysicalParams::new(hbar, c, m).unwrap())
}

fn sum_jet(a: &SpinorJet, b: &SpinorJet) -> SpinorJet {
    SpinorJet {
        value: a.value + b.value,
        partials: std::array::from_fn(|k| a.partials[k] + b.partials[k]),
    }
}

proptest! {
    #[test]
    fn scalar_bilinear_is_real(jet in arb_jet()) {
        let b = scalar_bilinear(&jet);
        prop_assert!(b.im.abs() <= 1e-15 * (1.0 + b.re.abs()));
    }

    #[test]
    fn dirac_current_is_real_with_nonnegative_density(jet in arb_jet(), params in arb_params()) {
        let j = dirac_current(&jet, &params);
        prop_assert!(j.imag_residue <= 1e-12 * (1.0 + j.magnitude()));
        prop_assert!(j.components[0] >= 0.0);
    }

    #[test]
    fn convection_bracket_is_purely_imaginary(jet in arb_jet()) {
        for k in 0..4 {
            let b = convection_bracket(&jet, k).unwrap();
            prop_assert!(b.re.abs() <= 1e-12 * (1.0 + b.norm()));
        }
    }

    #[test]
    fn stress_energy_is_real_and_symmetric(jet in arb_jet(), params in arb_params()) {
        let t = stress_energy(&jet, &params);
        let scale = 1.0 + t.magnitude();
        prop_assert!(t.imag_residue <= 1e-12 * scale);
        prop_assert!(t.asym_residue <= 1e-12 * scale);
    }

    #[test]
    fn displacement_split_is_exact_for_any_jets(
        a in arb_jet(),
        b in arb_jet(),
        params in arb_params(),
    ) {
        let j_sum = displacement_current(&sum_jet(&a, &b), &params).unwrap();
        let ja = displacement_current(&a, &params).unwrap();
        let jb = displacement_current(&b, &params).unwrap();
        let jab = interference_displacement(&a, &b, &params).unwrap();
        let scale = 1.0
            + j_sum.magnitude().max(ja.magnitude()).max(jb.magnitude()).max(jab.magnitude());
        for k in 0..4 {
            let gap = j_sum.components[k] - ja.components[k] - jb.components[k]
                - jab.components[k];
            prop_assert!(gap.abs() <= 1e-13 * scale, "gap {gap} at k={k}");
        }
    }

    #[test]
    fn interference_with_itself_is_twice_displacement(jet in arb_jet(), params in arb_params()) {
        let cross = interference_displacement(&jet, &jet, &params).unwrap();
        let single = displacement_current(&jet, &params).unwrap();
        let scale = 1.0 + single.magnitude();
        for k in 0..4 {
            prop_assert!(
                (cross.components[k] - 2.0 * single.components[k]).abs() <= 1e-13 * scale
            );
        }
    }

    #[test]
    fn conjugate_equation_residual_is_adjoint_of_direct(jet in arb_jet(), params in arb_params()) {
        let direct = dirac_residual(&jet, &params);
        let adj = adjoint_residual(&jet, &params);
        let diff = (adj - dirac_adjoint(&direct)).norm();
        prop_assert!(diff <= 1e-12 * (1.0 + direct.norm()));
    }

    #[test]
    fn interference_is_symmetric_in_its_arguments(
        a in arb_jet(),
        b in arb_jet(),
        params in arb_params(),
    ) {
        let ab = interference_displacement(&a, &b, &params).unwrap();
        let ba = interference_displacement(&b, &a, &params).unwrap();
        let scale = 1.0 + ab.magnitude();
        for k in 0..4 {
            prop_assert!((ab.components[k] - ba.components[k]).abs() <= 1e-13 * scale);
        }
    }
}
