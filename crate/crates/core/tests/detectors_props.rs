use fockcomm::detectors::{
    sva_click_probabilities, sva_click_probabilities_literal, sva_effects, tke_effects, Grouping,
};
use fockcomm::gyni::{run_protocol, single_photon_labelings};
use fockcomm::optics::BeamSplitterModel;
use fockcomm::states::{CutoffPolicy, SingleModeSpec};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Saturation `s` as the TKE parameter and grouping.
fn tke_params(s: usize) -> (usize, Grouping) {
    if s % 2 == 0 {
        (s / 2, Grouping::Even)
    } else {
        ((s + 1) / 2, Grouping::Odd)
    }
}

fn single_photon_tke(kappa: f64, saturation: usize) -> f64 {
    let src = SingleModeSpec::Fock { n: 1 }.realize(&CutoffPolicy::default()).unwrap();
    let (n, grouping) = tke_params(saturation);
    let (la, lb) = single_photon_labelings();
    let a = tke_effects(1, kappa, n, grouping).unwrap().with_labeling(la);
    let b = tke_effects(1, kappa, n, grouping).unwrap().with_labeling(lb);
    run_protocol(&src, &BeamSplitterModel::Lossless5050, &a, &b).unwrap().j
}

#[test]
fn tke_single_photon_value_is_kappa() {
    for saturation in 2..=6 {
        for k in 0..=10 {
            let kappa = k as f64 / 10.0;
            let j = single_photon_tke(kappa, saturation);
            assert!((j - kappa).abs() < 1e-9, "S={saturation} kappa={kappa}: {j}");
        }
    }
}

#[test]
fn tke_on_off_detector_halves_kappa() {
    // saturation 1: the only click outcome is saturated and split between labels
    for k in 0..=10 {
        let kappa = k as f64 / 10.0;
        assert!((single_photon_tke(kappa, 1) - kappa / 2.0).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn models_are_complete(cutoff in 1usize..30, kappa in 0.0..=1.0f64, n in 1usize..12, bins in 1usize..40, nu in 0.0..0.5f64) {
        for g in [Grouping::Even, Grouping::Odd] {
            let m = tke_effects(cutoff, kappa, n, g).unwrap();
            prop_assert!(m.completeness_defect() < 1e-10);
        }
        let m = sva_effects(cutoff, bins, kappa, nu).unwrap();
        prop_assert!(m.completeness_defect() < 1e-10);
        prop_assert!(m.effects().iter().all(|e| e.is_effect()));
    }

    #[test]
    fn sva_routes_agree(bins in 1usize..=12, kappa in 0.0..=1.0f64, nu in 0.0..0.3f64, n in 0usize..10) {
        let a = sva_click_probabilities(bins, kappa, nu, n);
        let b = sva_click_probabilities_literal(bins, kappa, nu, n);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-9);
        }
        prop_assert!((a.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}

/// Click-count histogram from photon survival, uniform bin assignment and
/// independent dark clicks.
fn sample_clicks(rng: &mut ChaCha8Rng, bins: usize, kappa: f64, nu: f64, n: usize, samples: usize) -> Vec<f64> {
    let dark = 1.0 - (-nu).exp();
    let mut counts = vec![0usize; bins + 1];
    let mut hit = vec![false; bins];
    for _ in 0..samples {
        hit.iter_mut().for_each(|h| *h = false);
        for _ in 0..n {
            if rng.random::<f64>() < kappa {
                hit[rng.random_range(0..bins)] = true;
            }
        }
        if dark > 0.0 {
            for h in hit.iter_mut() {
                if rng.random::<f64>() < dark {
                    *h = true;
                }
            }
        }
        counts[hit.iter().filter(|&&h| h).count()] += 1;
    }
    counts.into_iter().map(|c| c as f64 / samples as f64).collect()
}

#[test]
fn sva_matches_monte_carlo() {
    let samples = 1_000_000;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for bins in [4, 8] {
        for kappa in [0.3, 0.7] {
            for nu in [0.0, 0.05] {
                for n in 0..=3 {
                    let p: f64 = sva_click_probabilities(bins, kappa, nu, n).iter().step_by(2).sum();
                    let q: f64 = sample_clicks(&mut rng, bins, kappa, nu, n, samples).iter().step_by(2).sum();
                    let sigma = (p * (1.0 - p) / samples as f64).sqrt();
                    if sigma == 0.0 {
                        assert_eq!(p, q);
                    } else {
                        assert!((p - q).abs() < 3.0 * sigma, "N={bins} kappa={kappa} nu={nu} n={n}: {p} vs {q}");
                    }
                }
            }
        }
    }
}

#[test]
fn sva_resolves_few_photons_with_many_bins() {
    for n in 0..=3 {
        let p = sva_click_probabilities(64, 1.0, 0.0, n);
        assert!(p[n] > 0.9, "n={n}: {}", p[n]);
    }
}
