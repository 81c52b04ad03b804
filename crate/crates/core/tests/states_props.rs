mod common;

use fockcomm::states::{
    average_photon_number, build_noon, phase_encode, CutoffPolicy, Parity, SingleModeSpec, SingleModeState,
};
use num_complex::Complex64 as C64;
use proptest::prelude::*;

fn source() -> impl Strategy<Value = SingleModeState> {
    let amp = (0.05..2.0f64, 0.0..std::f64::consts::TAU).prop_map(|(m, p)| C64::from_polar(m, p));
    prop_oneof![
        amp.clone().prop_map(SingleModeSpec::coherent),
        amp.clone().prop_map(SingleModeSpec::even_cat),
        amp.clone().prop_map(SingleModeSpec::odd_cat),
        amp.prop_map(|alpha| SingleModeSpec::PhotonAddedCoherent { alpha }),
        (0.05..1.2f64, 0.0..3.0f64).prop_map(|(r, theta)| SingleModeSpec::SqueezedVacuum { r, theta }),
        (1usize..6).prop_map(|n| SingleModeSpec::Fock { n }),
        common::coeffs(6).prop_map(|coeffs| SingleModeSpec::FiniteSuperposition { coeffs }),
    ]
    .prop_filter_map("vacuum", |spec| {
        let s = spec.realize(&CutoffPolicy::default()).ok()?;
        (!s.is_vacuum()).then_some(s)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn noon_has_no_joint_occupation(src in source(), x in 0u8..2, y in 0u8..2) {
        let noon = phase_encode(&build_noon(&src).unwrap(), x, y);
        for (occ, amp) in noon.state().iter() {
            prop_assert!(occ[0] == 0 || occ[1] == 0 || amp.norm() == 0.0, "{:?}", occ);
        }
        prop_assert!(noon.state().is_normalized());
    }

    #[test]
    fn encoding_is_an_involution(src in source(), x in 0u8..2, y in 0u8..2) {
        let noon = build_noon(&src).unwrap();
        let back = phase_encode(&phase_encode(&noon, x, y), x, y);
        prop_assert!(common::max_amplitude_error(noon.state(), back.state()) < 1e-12);
        prop_assert_eq!(back.encoding(), noon.encoding());
    }

    #[test]
    fn mean_photon_number_is_a_scalar_multiple(src in source()) {
        // constant within each x xor y class: <N> = 2 <n>_xi / N_xy
        let noon = build_noon(&src).unwrap();
        let n_xi = src.mean_photon_number();
        for (x, y) in [(0u8, 0u8), (0, 1), (1, 0), (1, 1)] {
            let enc = phase_encode(&noon, x, y);
            let ratio = average_photon_number(&enc).unwrap() / n_xi;
            prop_assert!((ratio * enc.encoded_normalization() / 2.0 - 1.0).abs() < 1e-9, "{} vs {}", ratio, 2.0 / enc.encoded_normalization());
        }
    }

    #[test]
    fn cats_and_squeezing_have_definite_parity(m in 0.05..2.5f64, p in 0.0..std::f64::consts::TAU, r in 0.05..1.2f64, t in 0.0..std::f64::consts::TAU) {
        let alpha = C64::from_polar(m, p);
        let policy = CutoffPolicy::default();
        for (spec, odd) in [
            (SingleModeSpec::Cat { alpha, parity: Parity::Even }, false),
            (SingleModeSpec::Cat { alpha, parity: Parity::Odd }, true),
            (SingleModeSpec::SqueezedVacuum { r, theta: t }, false),
        ] {
            let s = spec.realize(&policy).unwrap();
            for (n, c) in s.coeffs().iter().enumerate() {
                if (n % 2 == 1) != odd {
                    prop_assert_eq!(c.norm(), 0.0);
                }
            }
        }
    }
}
