//! Displacement-based Bell test on two-mode states.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{self, ModeOperator, MultiModeState};
use crate::states::{CutoffPolicy, SingleModeSpec};

/// Largest coherent tail tolerated when building `2|b><b| - I`.
pub const DISPLACEMENT_TAIL_TOL: f64 = 1e-12;
pub const DEFAULT_GRID_POINTS: usize = 64;
/// Grid values within this distance of the maximum count as ties.
pub const TIE_TOL: f64 = 1e-12;

/// Shared displacement amplitude `r` and the two phases; `M_1` uses
/// `beta_k = r e^{i phi_k}` and `M_0` uses `beta = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BellSettings {
    pub r: f64,
    pub phi1: f64,
    pub phi2: f64,
}

impl BellSettings {
    pub fn new(r: f64, phi1: f64, phi2: f64) -> Result<Self> {
        if !(r >= 0.0 && r.is_finite()) {
            return Err(Error::invalid("r", r, "must be finite and non-negative"));
        }
        for (name, phi) in [("phi1", phi1), ("phi2", phi2)] {
            if !(0.0..2.0 * PI).contains(&phi) {
                return Err(Error::invalid(name, phi, "must lie in [0, 2pi)"));
            }
        }
        Ok(Self { r, phi1, phi2 })
    }

    pub fn beta1(&self) -> C64 {
        C64::from_polar(self.r, self.phi1)
    }

    pub fn beta2(&self) -> C64 {
        C64::from_polar(self.r, self.phi2)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BellResult {
    pub settings: BellSettings,
    /// `xi(v)` for `v = 00, 01, 10, 11`.
    pub correlators: [f64; 4],
    pub value: f64,
}

/// `2|beta><beta| - I` on the `cutoff + 1` dimensional space.
pub fn displacement_operator(beta: C64, cutoff: usize) -> Result<ModeOperator> {
    let policy = CutoffPolicy { tail_tol: DISPLACEMENT_TAIL_TOL, ..CutoffPolicy::fixed(cutoff) };
    let coherent = SingleModeSpec::coherent(beta).realize(&policy)?;
    let v = DVector::from_column_slice(coherent.coeffs());
    let m = (&v * v.adjoint()).scale(2.0) - DMatrix::<C64>::identity(cutoff + 1, cutoff + 1);
    let m = (&m + m.adjoint()).scale(0.5);
    ModeOperator::new(m)
}

/// Smallest cutoff at which `|beta|` with `|beta| = r` has a tail below
/// `DISPLACEMENT_TAIL_TOL`.
pub fn displacement_cutoff(r: f64) -> Result<usize> {
    let policy = CutoffPolicy::default().with_tail_tol(DISPLACEMENT_TAIL_TOL);
    Ok(SingleModeSpec::coherent(C64::new(r, 0.0)).realize(&policy)?.cutoff())
}

/// Re-embeds the state with a cutoff large enough for the displacements.
fn lifted(state: &MultiModeState, r: f64) -> Result<MultiModeState> {
    if state.num_modes() != 2 {
        return Err(Error::ModeMismatch { left: state.num_modes(), right: 2 });
    }
    let cutoff = displacement_cutoff(r)?;
    if cutoff <= state.cutoff() {
        return Ok(state.clone());
    }
    MultiModeState::from_amplitudes(2, cutoff, state.iter().map(|(k, v)| (k.clone(), *v)))
}

/// The four operators `(M^A_0, M^A_1, M^B_0, M^B_1)`.
fn operators(settings: &BellSettings, cutoff: usize) -> Result<[ModeOperator; 4]> {
    let m0 = displacement_operator(C64::new(0.0, 0.0), cutoff)?;
    let a1 = displacement_operator(settings.beta1(), cutoff)?;
    let b1 = displacement_operator(settings.beta2(), cutoff)?;
    Ok([m0.clone(), a1, m0, b1])
}

fn correlators_with(state: &MultiModeState, alice: [&ModeOperator; 2], bob: [&ModeOperator; 2]) -> Result<[f64; 4]> {
    let mut xi = [0.0; 4];
    for v1 in 0..2 {
        for v2 in 0..2 {
            xi[2 * v1 + v2] = fock::expectation(state, &[Some(alice[v1]), Some(bob[v2])])?.re;
        }
    }
    Ok(xi)
}

/// `xi(v) = <M^A_{v1} M^B_{v2}>` for `v = 00, 01, 10, 11`.
/// States whose cutoff is too small for the displacement are re-embedded
/// in a larger space.
pub fn correlators(state: &MultiModeState, settings: &BellSettings) -> Result<[f64; 4]> {
    let state = &lifted(state, settings.r)?;
    let [a0, a1, b0, b1] = operators(settings, state.cutoff())?;
    correlators_with(state, [&a0, &a1], [&b0, &b1])
}

/// `I = 1/4 sum_u |sum_v (-1)^{u.v} xi(v)|`.
pub fn bell_value(xi: &[f64; 4]) -> f64 {
    let mut total = 0.0;
    for u in 0..4usize {
        let (u1, u2) = (u >> 1, u & 1);
        let s: f64 = (0..4usize)
            .map(|v| {
                let sign = if (u1 * (v >> 1) + u2 * (v & 1)) % 2 == 0 { 1.0 } else { -1.0 };
                sign * xi[v]
            })
            .sum();
        total += s.abs();
    }
    0.25 * total
}

pub fn bell_test(state: &MultiModeState, settings: &BellSettings) -> Result<BellResult> {
    let correlators = correlators(state, settings)?;
    Ok(BellResult { settings: *settings, correlators, value: bell_value(&correlators) })
}

/// `n` equally spaced phases on `[0, 2pi)`.
pub fn phase_grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| 2.0 * PI * i as f64 / n as f64).collect()
}

/// `I` over a square `(phi1, phi2)` grid at fixed `r`.
#[derive(Clone, Debug, PartialEq)]
pub struct BellScan {
    pub r: f64,
    pub phases: Vec<f64>,
    /// `values[i][k]` at `(phases[i], phases[k])`.
    pub values: Vec<Vec<f64>>,
    pub max: f64,
    pub min: f64,
    /// Every grid index within `TIE_TOL` of the maximum.
    pub argmax: Vec<(usize, usize)>,
}

impl BellScan {
    /// Fraction of grid points with `I > 1 + tol`.
    pub fn violating_fraction(&self, tol: f64) -> f64 {
        let n: usize = self.values.iter().map(Vec::len).sum();
        let k = self.values.iter().flatten().filter(|&&v| v > 1.0 + tol).count();
        k as f64 / n as f64
    }
}

pub fn bell_scan(state: &MultiModeState, r: f64, n: usize) -> Result<BellScan> {
    if n == 0 {
        return Err(Error::invalid("grid_points", 0.0, "must be positive"));
    }
    let state = &lifted(state, r)?;
    let phases = phase_grid(n);
    let cutoff = state.cutoff();
    let m0 = displacement_operator(C64::new(0.0, 0.0), cutoff)?;
    let m1: Vec<ModeOperator> = phases
        .iter()
        .map(|&p| displacement_operator(C64::from_polar(r, p), cutoff))
        .collect::<Result<_>>()?;
    // the M0 M0 correlator and the single-sided ones do not depend on both phases
    let x00 = fock::expectation(state, &[Some(&m0), Some(&m0)])?.re;
    let x01: Vec<f64> =
        m1.iter().map(|b| fock::expectation(state, &[Some(&m0), Some(b)]).map(|z| z.re)).collect::<Result<_>>()?;
    let x10: Vec<f64> =
        m1.iter().map(|a| fock::expectation(state, &[Some(a), Some(&m0)]).map(|z| z.re)).collect::<Result<_>>()?;
    let mut values = vec![vec![0.0; n]; n];
    for i in 0..n {
        for k in 0..n {
            let x11 = fock::expectation(state, &[Some(&m1[i]), Some(&m1[k])])?.re;
            values[i][k] = bell_value(&[x00, x01[k], x10[i], x11]);
        }
    }
    let max = values.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().flatten().copied().fold(f64::INFINITY, f64::min);
    let argmax = (0..n)
        .flat_map(|i| (0..n).map(move |k| (i, k)))
        .filter(|&(i, k)| values[i][k] >= max - TIE_TOL)
        .collect();
    Ok(BellScan { r, phases, values, max, min, argmax })
}
