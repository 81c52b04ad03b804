#![allow(dead_code)]

use fockcomm::fock::MultiModeState;
use num_complex::Complex64 as C64;
use proptest::prelude::*;

/// Normalized state on `modes` modes with every occupation total at most `cutoff`.
pub fn state(modes: usize, cutoff: usize) -> impl Strategy<Value = MultiModeState> {
    let entry = (prop::collection::vec(0..=cutoff as u16, modes), -1.0..1.0f64, -1.0..1.0f64);
    prop::collection::vec(entry, 1..8).prop_filter_map("zero or over cutoff", move |entries| {
        let entries: Vec<(Vec<u16>, C64)> = entries
            .into_iter()
            .filter(|(occ, _, _)| occ.iter().map(|&n| n as usize).sum::<usize>() <= cutoff)
            .map(|(occ, re, im)| (occ, C64::new(re, im)))
            .collect();
        MultiModeState::from_amplitudes(modes, cutoff, entries).ok()?.normalize().ok()
    })
}

/// Normalized single-mode coefficient vector of length 2..=max_len.
pub fn coeffs(max_len: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 2..=max_len).prop_filter_map("zero", |v| {
        let c: Vec<C64> = v.into_iter().map(|(a, b)| C64::new(a, b)).collect();
        let n: f64 = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        (n > 1e-3).then(|| c.iter().map(|z| z / n).collect())
    })
}

pub fn max_amplitude_error(a: &MultiModeState, b: &MultiModeState) -> f64 {
    let mut d: f64 = 0.0;
    for (k, v) in a.iter() {
        d = d.max((b.amplitude(k) - v).norm());
    }
    for (k, v) in b.iter() {
        d = d.max((a.amplitude(k) - v).norm());
    }
    d
}
