//! Two-outcome measurement models acting on one truncated mode.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::combinatorics::binomial;
use crate::error::{Error, Result};
use crate::fock::ModeOperator;

const COMPLETENESS_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grouping {
    /// Saturation 2N.
    Even,
    /// Saturation 2N - 1.
    Odd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Party {
    Alice,
    Bob,
}

/// Which effect each outcome bit refers to. `Standard` maps bit b to effect
/// b, `Swapped` to effect 1 - b.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Labeling {
    Standard,
    Swapped,
}

#[derive(Clone, Debug, PartialEq)]
pub enum DetectorKind {
    Parity,
    Presence,
    Qubit { theta: f64, eps: f64 },
    Tke { kappa: f64, n: usize, grouping: Grouping },
    Sva { bins: usize, kappa: f64, nu: f64 },
    Custom { name: String },
}

impl DetectorKind {
    pub fn label(&self) -> String {
        match self {
            Self::Parity => "parity".into(),
            Self::Presence => "presence".into(),
            Self::Qubit { theta, eps } => format!("qubit(theta={theta}, eps={eps})"),
            Self::Tke { kappa, n, grouping } => {
                let g = match grouping {
                    Grouping::Even => "even",
                    Grouping::Odd => "odd",
                };
                format!("tke(kappa={kappa}, n={n}, grouping={g})")
            }
            Self::Sva { bins, kappa, nu } => format!("sva(n={bins}, kappa={kappa}, nu={nu})"),
            Self::Custom { name } => name.clone(),
        }
    }

    /// Labeling used for `party` when none is given: photon-present outcome
    /// on effect 1 for the presence and qubit models, with Alice reading it
    /// as a = 0.
    pub fn default_labeling(&self, party: Party) -> Labeling {
        match (self, party) {
            (Self::Presence | Self::Qubit { .. }, Party::Alice) => Labeling::Swapped,
            _ => Labeling::Standard,
        }
    }
}

/// A pair of effects `[Pi_0, Pi_1]` with an outcome labeling.
#[derive(Clone, Debug, PartialEq)]
pub struct DetectorModel {
    kind: DetectorKind,
    effects: [ModeOperator; 2],
    labeling: Labeling,
}

impl DetectorModel {
    pub fn new(kind: DetectorKind, cutoff: usize, labeling: Labeling) -> Result<Self> {
        let effects = match &kind {
            DetectorKind::Parity => parity_pair(cutoff),
            DetectorKind::Presence => presence_pair(cutoff),
            DetectorKind::Qubit { theta, eps } => qubit_pair(cutoff, *theta, *eps)?,
            DetectorKind::Tke { kappa, n, grouping } => tke_pair(cutoff, *kappa, *n, *grouping)?,
            DetectorKind::Sva { bins, kappa, nu } => sva_pair(cutoff, *bins, *kappa, *nu)?,
            DetectorKind::Custom { .. } => {
                return Err(Error::invalid("detector", f64::NAN, "custom detectors need explicit effects"))
            }
        };
        Self::from_effects(kind, effects, labeling)
    }

    /// Checks positivity and completeness of an explicit pair.
    pub fn from_effects(kind: DetectorKind, effects: [ModeOperator; 2], labeling: Labeling) -> Result<Self> {
        let [e0, e1] = effects;
        if e0.dim() != e1.dim() {
            return Err(Error::DimensionMismatch { expected: e0.dim(), found: e1.dim() });
        }
        let e0 = e0.into_effect()?;
        let e1 = e1.into_effect()?;
        let model = Self { kind, effects: [e0, e1], labeling };
        let d = model.completeness_defect();
        if d > COMPLETENESS_TOL {
            return Err(Error::Incomplete(d));
        }
        Ok(model)
    }

    pub fn kind(&self) -> &DetectorKind {
        &self.kind
    }

    pub fn labeling(&self) -> Labeling {
        self.labeling
    }

    pub fn with_labeling(mut self, labeling: Labeling) -> Self {
        self.labeling = labeling;
        self
    }

    pub fn cutoff(&self) -> usize {
        self.effects[0].cutoff()
    }

    pub fn effects(&self) -> &[ModeOperator; 2] {
        &self.effects
    }

    /// The effect measured when the party reports `bit`.
    pub fn effect_for(&self, bit: usize) -> &ModeOperator {
        let idx = match self.labeling {
            Labeling::Standard => bit,
            Labeling::Swapped => 1 - bit,
        };
        &self.effects[idx]
    }

    pub fn completeness_defect(&self) -> f64 {
        let sum = self.effects[0].entries() + self.effects[1].entries();
        let id = DMatrix::<C64>::identity(sum.nrows(), sum.ncols());
        (sum - id).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

pub fn parity_effects(cutoff: usize) -> DetectorModel {
    DetectorModel::new(DetectorKind::Parity, cutoff, Labeling::Standard).expect("parity projectors are valid")
}

pub fn presence_effects(cutoff: usize, party: Party) -> DetectorModel {
    let kind = DetectorKind::Presence;
    let labeling = kind.default_labeling(party);
    DetectorModel::new(kind, cutoff, labeling).expect("presence projectors are valid")
}

pub fn qubit_effects(cutoff: usize, theta: f64, eps: f64, party: Party) -> Result<DetectorModel> {
    let kind = DetectorKind::Qubit { theta, eps };
    let labeling = kind.default_labeling(party);
    DetectorModel::new(kind, cutoff, labeling)
}

pub fn tke_effects(cutoff: usize, kappa: f64, n: usize, grouping: Grouping) -> Result<DetectorModel> {
    DetectorModel::new(DetectorKind::Tke { kappa, n, grouping }, cutoff, Labeling::Standard)
}

pub fn sva_effects(cutoff: usize, bins: usize, kappa: f64, nu: f64) -> Result<DetectorModel> {
    DetectorModel::new(DetectorKind::Sva { bins, kappa, nu }, cutoff, Labeling::Standard)
}

fn diag_pair(even: Vec<f64>, odd: Vec<f64>) -> [ModeOperator; 2] {
    [ModeOperator::diagonal(&even), ModeOperator::diagonal(&odd)]
}

fn parity_pair(cutoff: usize) -> [ModeOperator; 2] {
    let even: Vec<f64> = (0..=cutoff).map(|n| if n % 2 == 0 { 1.0 } else { 0.0 }).collect();
    let odd = even.iter().map(|v| 1.0 - v).collect();
    diag_pair(even, odd)
}

fn presence_pair(cutoff: usize) -> [ModeOperator; 2] {
    let vac: Vec<f64> = (0..=cutoff).map(|n| if n == 0 { 1.0 } else { 0.0 }).collect();
    let rest = vac.iter().map(|v| 1.0 - v).collect();
    diag_pair(vac, rest)
}

/// `|chi><chi|` and its complement, where the complement also carries all
/// support on two or more photons.
fn qubit_pair(cutoff: usize, theta: f64, eps: f64) -> Result<[ModeOperator; 2]> {
    if !(0.0..=std::f64::consts::PI).contains(&theta) {
        return Err(Error::invalid("theta", theta, "must lie in [0, pi]"));
    }
    if !eps.is_finite() {
        return Err(Error::invalid("eps", eps, "must be finite"));
    }
    if cutoff < 1 {
        return Err(Error::DimensionMismatch { expected: 2, found: cutoff + 1 });
    }
    let mut chi = DVector::<C64>::zeros(cutoff + 1);
    chi[0] = C64::new((theta / 2.0).cos(), 0.0);
    chi[1] = C64::from_polar((theta / 2.0).sin(), eps);
    let p = ModeOperator::outer(&chi);
    let rest = ModeOperator::identity(cutoff).difference(&p)?;
    Ok([p, rest])
}

/// `w_{m,n} = C(n, m) kappa^m (1 - kappa)^(n - m)`.
pub fn tke_weight(m: usize, n: usize, kappa: f64) -> f64 {
    if m > n {
        return 0.0;
    }
    binomial(n, m) * kappa.powi(m as i32) * (1.0 - kappa).powi((n - m) as i32)
}

/// Outcome probabilities `[P(0), ..., P(S-1), P(saturated)]` for `n`
/// incident photons and saturation `s`.
pub fn tke_outcome_probabilities(kappa: f64, saturation: usize, n: usize) -> Vec<f64> {
    let mut p: Vec<f64> = (0..saturation).map(|m| tke_weight(m, n, kappa)).collect();
    let resolved: f64 = p.iter().sum();
    p.push((1.0 - resolved).max(0.0));
    p
}

pub fn tke_saturation(n: usize, grouping: Grouping) -> usize {
    match grouping {
        Grouping::Even => 2 * n,
        Grouping::Odd => 2 * n - 1,
    }
}

fn tke_pair(cutoff: usize, kappa: f64, n: usize, grouping: Grouping) -> Result<[ModeOperator; 2]> {
    if !(0.0..=1.0).contains(&kappa) {
        return Err(Error::invalid("kappa", kappa, "must lie in [0, 1]"));
    }
    if n < 1 {
        return Err(Error::invalid("n", n as f64, "saturation parameter must be at least 1"));
    }
    let s = tke_saturation(n, grouping);
    let mut even = vec![0.0; cutoff + 1];
    let mut odd = vec![0.0; cutoff + 1];
    for photons in 0..=cutoff {
        let p = tke_outcome_probabilities(kappa, s, photons);
        for (m, w) in p[..s].iter().enumerate() {
            if m % 2 == 0 {
                even[photons] += w;
            } else {
                odd[photons] += w;
            }
        }
        even[photons] += 0.5 * p[s];
        odd[photons] += 0.5 * p[s];
    }
    Ok(diag_pair(even, odd))
}

fn check_sva(bins: usize, kappa: f64, nu: f64) -> Result<()> {
    if bins < 1 {
        return Err(Error::invalid("n", bins as f64, "at least one bin is required"));
    }
    if !(0.0..=1.0).contains(&kappa) {
        return Err(Error::invalid("kappa", kappa, "must lie in [0, 1]"));
    }
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(Error::invalid("nu", nu, "must be finite and non-negative"));
    }
    Ok(())
}

/// Click-count distribution `[P(k = 0), ..., P(k = bins)]` for `n` photons:
/// each photon survives with probability kappa and lands in a uniformly
/// random bin; every bin also fires on its own with probability
/// 1 - e^{-nu}.
pub fn sva_click_probabilities(bins: usize, kappa: f64, nu: f64, n: usize) -> Vec<f64> {
    // distribution of the number of distinct bins hit by surviving photons
    let mut hit = vec![0.0; bins + 1];
    hit[0] = 1.0;
    let nb = bins as f64;
    for _ in 0..n {
        let mut next = vec![0.0; bins + 1];
        for (j, &p) in hit.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let fresh = kappa * (nb - j as f64) / nb;
            next[j] += p * (1.0 - fresh);
            if j < bins {
                next[j + 1] += p * fresh;
            }
        }
        hit = next;
    }
    let dark = 1.0 - (-nu).exp();
    let mut out = vec![0.0; bins + 1];
    for (j, &p) in hit.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        let free = bins - j;
        for extra in 0..=free {
            out[j + extra] += p * binomial(free, extra) * dark.powi(extra as i32) * (1.0 - dark).powi((free - extra) as i32);
        }
    }
    out
}

/// The same distribution from the normal-ordered effect,
/// `C(N,k) sum_l (-1)^l C(k,l) e^{-nu (N-k+l)} (1 - kappa (N-k+l)/N)^n`.
/// The alternating sum cancels badly for large N.
pub fn sva_click_probabilities_literal(bins: usize, kappa: f64, nu: f64, n: usize) -> Vec<f64> {
    let nb = bins as f64;
    (0..=bins)
        .map(|k| {
            let inner: f64 = (0..=k)
                .map(|l| {
                    let quiet = (bins - k + l) as f64;
                    let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
                    sign * binomial(k, l) * (-nu * quiet).exp() * (1.0 - kappa * quiet / nb).powi(n as i32)
                })
                .sum();
            binomial(bins, k) * inner
        })
        .collect()
}

fn sva_pair(cutoff: usize, bins: usize, kappa: f64, nu: f64) -> Result<[ModeOperator; 2]> {
    check_sva(bins, kappa, nu)?;
    let mut even = vec![0.0; cutoff + 1];
    let mut odd = vec![0.0; cutoff + 1];
    for n in 0..=cutoff {
        for (k, p) in sva_click_probabilities(bins, kappa, nu, n).into_iter().enumerate() {
            if k % 2 == 0 {
                even[n] += p;
            } else {
                odd[n] += p;
            }
        }
    }
    Ok(diag_pair(even, odd))
}
