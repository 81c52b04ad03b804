//! Single-mode state constructors and the generalized NOON builder.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{self, ModeOperator, MultiModeState};

pub const DEFAULT_TAIL_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_CUTOFF: usize = 400;
pub const TAIL_TOL_ENV: &str = "FOCKCOMM_CUTOFF_TOL";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SingleModeSpec {
    Coherent { alpha: C64 },
    Cat { alpha: C64, parity: Parity },
    SqueezedVacuum { r: f64, theta: f64 },
    PhotonAddedCoherent { alpha: C64 },
    Fock { n: usize },
    FiniteSuperposition { coeffs: Vec<C64> },
}

/// How the photon-number cutoff of a realized state is chosen.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CutoffPolicy {
    pub tail_tol: f64,
    /// Use exactly this cutoff; realization fails if the tail exceeds `tail_tol`.
    pub fixed: Option<usize>,
    pub max_cutoff: usize,
}

impl Default for CutoffPolicy {
    fn default() -> Self {
        Self { tail_tol: DEFAULT_TAIL_TOL, fixed: None, max_cutoff: DEFAULT_MAX_CUTOFF }
    }
}

impl CutoffPolicy {
    pub fn fixed(cutoff: usize) -> Self {
        Self { fixed: Some(cutoff), ..Self::default() }
    }

    pub fn with_tail_tol(self, tail_tol: f64) -> Self {
        Self { tail_tol, ..self }
    }

    /// Default policy with the tail tolerance taken from the environment
    /// when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(TAIL_TOL_ENV) {
            Ok(v) => {
                let tol: f64 = v.trim().parse().map_err(|_| Error::invalid("tail_tol", f64::NAN, "not a number"))?;
                Self::default().with_tail_tol(tol).validated()
            }
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn validated(self) -> Result<Self> {
        if !(self.tail_tol > 0.0 && self.tail_tol <= 1e-6) {
            return Err(Error::invalid("tail_tol", self.tail_tol, "must lie in (0, 1e-6]"));
        }
        Ok(self)
    }
}

/// A realized single-mode state: truncated, renormalized coefficients plus
/// the analytic mass that fell beyond the cutoff.
#[derive(Clone, Debug, PartialEq)]
pub struct SingleModeState {
    pub spec: SingleModeSpec,
    coeffs: Vec<C64>,
    tail_mass: f64,
}

impl SingleModeState {
    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn cutoff(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn to_state(&self) -> MultiModeState {
        fock::single_mode_from_coeffs(&self.coeffs, self.cutoff()).expect("realized coefficients are valid")
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.coeffs.iter().enumerate().map(|(n, c)| n as f64 * c.norm_sqr()).sum()
    }

    pub fn is_vacuum(&self) -> bool {
        1.0 - self.coeffs[0].norm_sqr() < 1e-12
    }
}

impl SingleModeSpec {
    pub fn coherent(alpha: C64) -> Self {
        Self::Coherent { alpha }
    }

    pub fn even_cat(alpha: C64) -> Self {
        Self::Cat { alpha, parity: Parity::Even }
    }

    pub fn odd_cat(alpha: C64) -> Self {
        Self::Cat { alpha, parity: Parity::Odd }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::Coherent { .. } => "coherent",
            Self::Cat { parity: Parity::Even, .. } => "cat_even",
            Self::Cat { parity: Parity::Odd, .. } => "cat_odd",
            Self::SqueezedVacuum { .. } => "squeezed_vacuum",
            Self::PhotonAddedCoherent { .. } => "photon_added_coherent",
            Self::Fock { .. } => "fock",
            Self::FiniteSuperposition { .. } => "finite_superposition",
        }
    }

    fn validate(&self) -> Result<()> {
        let finite = |z: &C64| z.re.is_finite() && z.im.is_finite();
        match self {
            Self::Coherent { alpha } | Self::PhotonAddedCoherent { alpha } => {
                if !finite(alpha) {
                    return Err(Error::invalid("alpha", f64::NAN, "must be finite"));
                }
            }
            Self::Cat { alpha, parity } => {
                if !finite(alpha) {
                    return Err(Error::invalid("alpha", f64::NAN, "must be finite"));
                }
                if *parity == Parity::Odd && alpha.norm() == 0.0 {
                    return Err(Error::Degenerate("odd cat state with alpha = 0 has zero norm".into()));
                }
            }
            Self::SqueezedVacuum { r, theta } => {
                if !(*r >= 0.0) || !r.is_finite() {
                    return Err(Error::invalid("r", *r, "must be finite and non-negative"));
                }
                if !theta.is_finite() {
                    return Err(Error::invalid("theta", *theta, "must be finite"));
                }
            }
            Self::Fock { .. } => {}
            Self::FiniteSuperposition { coeffs } => {
                if coeffs.iter().any(|z| !finite(z)) {
                    return Err(Error::Degenerate("non-finite coefficient".into()));
                }
                if coeffs.iter().all(|z| z.norm() == 0.0) {
                    return Err(Error::Degenerate("all-zero coefficient vector".into()));
                }
            }
        }
        Ok(())
    }

    /// Analytic coefficients up to the point where the remaining terms are
    /// negligible, or `None` if `limit` is reached first.
    fn analytic_coeffs(&self, limit: usize) -> Option<Vec<C64>> {
        let zero = C64::new(0.0, 0.0);
        match self {
            Self::Fock { n } => {
                let mut v = vec![zero; n + 1];
                v[*n] = C64::new(1.0, 0.0);
                return Some(v);
            }
            Self::FiniteSuperposition { coeffs } => {
                let last = coeffs.iter().rposition(|z| z.norm() != 0.0).unwrap_or(0);
                let norm: f64 = coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                return Some(coeffs[..=last].iter().map(|z| z / norm).collect());
            }
            _ => {}
        }
        let mut out: Vec<C64> = Vec::new();
        let mut last_mag = f64::INFINITY;
        let mut n = 0usize;
        loop {
            if n > limit {
                return None;
            }
            let c = self.term(n, out.as_slice());
            out.push(c);
            let mag = c.norm_sqr();
            if c != zero || self.parity_allows(n) {
                // past the peak and far below any tolerance of interest
                if mag < 1e-40 && mag <= last_mag && n > 0 {
                    return Some(out);
                }
                last_mag = mag;
            }
            n += 1;
        }
    }

    fn parity_allows(&self, n: usize) -> bool {
        match self {
            Self::Cat { parity: Parity::Even, .. } | Self::SqueezedVacuum { .. } => n.is_multiple_of(2),
            Self::Cat { parity: Parity::Odd, .. } => n % 2 == 1,
            _ => true,
        }
    }

    /// The n-th coefficient given all previous ones.
    fn term(&self, n: usize, prev: &[C64]) -> C64 {
        let zero = C64::new(0.0, 0.0);
        let nf = n as f64;
        match self {
            Self::Coherent { alpha } => {
                if n == 0 {
                    C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0)
                } else {
                    prev[n - 1] * alpha / nf.sqrt()
                }
            }
            Self::Cat { alpha, parity } => {
                let x = alpha.norm_sqr();
                match (parity, n) {
                    (Parity::Even, 0) => C64::new(1.0 / x.cosh().sqrt(), 0.0),
                    (Parity::Odd, 1) => alpha / x.sinh().sqrt(),
                    (Parity::Even, _) if n.is_multiple_of(2) => prev[n - 2] * alpha * alpha / (nf * (nf - 1.0)).sqrt(),
                    (Parity::Odd, _) if n % 2 == 1 => prev[n - 2] * alpha * alpha / (nf * (nf - 1.0)).sqrt(),
                    _ => zero,
                }
            }
            Self::SqueezedVacuum { r, theta } => {
                if n % 2 == 1 {
                    zero
                } else if n == 0 {
                    C64::new(1.0 / r.cosh().sqrt(), 0.0)
                } else {
                    let m = (n / 2) as f64;
                    let ratio = -C64::from_polar(r.tanh(), *theta) * ((2.0 * m - 1.0) / (2.0 * m)).sqrt();
                    prev[n - 2] * ratio
                }
            }
            Self::PhotonAddedCoherent { alpha } => {
                // sqrt(n) <n-1|alpha> / sqrt(1 + |alpha|^2)
                let x = alpha.norm_sqr();
                match n {
                    0 => zero,
                    1 => C64::new((-x / 2.0).exp() / (1.0 + x).sqrt(), 0.0),
                    _ => prev[n - 1] * alpha * nf.sqrt() / (nf - 1.0),
                }
            }
            Self::Fock { .. } | Self::FiniteSuperposition { .. } => unreachable!(),
        }
    }

    /// Realizes the state under a cutoff policy.
    pub fn realize(&self, policy: &CutoffPolicy) -> Result<SingleModeState> {
        self.validate()?;
        let limit = policy.max_cutoff.max(policy.fixed.unwrap_or(0)) * 2 + 64;
        let full = self.analytic_coeffs(limit).ok_or(Error::CutoffUnreachable {
            max: policy.max_cutoff,
            tol: policy.tail_tol,
        })?;
        // tails summed from the far end: tail[l] = sum_{n > l} |c_n|^2
        let mut tail = vec![0.0; full.len()];
        for l in (0..full.len().saturating_sub(1)).rev() {
            tail[l] = tail[l + 1] + full[l + 1].norm_sqr();
        }
        let tail_at = |l: usize| if l < tail.len() { tail[l] } else { 0.0 };

        let cutoff = match policy.fixed {
            Some(l) => {
                if tail_at(l) >= policy.tail_tol {
                    return Err(Error::CutoffTooSmall { cutoff: l, tail: tail_at(l), tol: policy.tail_tol });
                }
                l
            }
            None => {
                let l = (0..full.len()).find(|&l| tail_at(l) < policy.tail_tol).unwrap_or(full.len() - 1);
                if l > policy.max_cutoff {
                    return Err(Error::CutoffUnreachable { max: policy.max_cutoff, tol: policy.tail_tol });
                }
                l
            }
        };
        let mut coeffs: Vec<C64> = full.iter().take(cutoff + 1).copied().collect();
        coeffs.resize(cutoff + 1, C64::new(0.0, 0.0));
        let norm: f64 = coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(Error::Degenerate("state has no weight below the cutoff".into()));
        }
        for z in &mut coeffs {
            *z /= norm;
        }
        Ok(SingleModeState { spec: self.clone(), coeffs, tail_mass: tail_at(cutoff) })
    }
}

/// The two-mode state (|xi,0> (-1)^x + |0,xi> (-1)^y) / sqrt(N_xy).
#[derive(Clone, Debug, PartialEq)]
pub struct NoonState {
    state: MultiModeState,
    source: SingleModeState,
    encoding: (u8, u8),
    normalization: f64,
    encoded_normalization: f64,
}

impl NoonState {
    pub fn state(&self) -> &MultiModeState {
        &self.state
    }

    pub fn source(&self) -> &SingleModeState {
        &self.source
    }

    pub fn encoding(&self) -> (u8, u8) {
        self.encoding
    }

    /// 2 (1 + |lambda_0|^2), the normalization of the unencoded state.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// 2 (1 + (-1)^(x+y) |lambda_0|^2).
    pub fn encoded_normalization(&self) -> f64 {
        self.encoded_normalization
    }
}

pub fn build_noon(source: &SingleModeState) -> Result<NoonState> {
    if source.is_vacuum() {
        return Err(Error::Degenerate("NOON state of the vacuum is the product |0,0>".into()));
    }
    assemble(source, (0, 0))
}

pub fn phase_encode(noon: &NoonState, x: u8, y: u8) -> NoonState {
    let enc = ((noon.encoding.0 ^ x) & 1, (noon.encoding.1 ^ y) & 1);
    assemble(&noon.source, enc).expect("source already validated")
}

pub(crate) fn assemble(source: &SingleModeState, (x, y): (u8, u8)) -> Result<NoonState> {
    let sa = if x == 0 { 1.0 } else { -1.0 };
    let sb = if y == 0 { 1.0 } else { -1.0 };
    let l0 = source.coeffs[0].norm_sqr();
    let normalization = 2.0 * (1.0 + l0);
    let encoded_normalization = 2.0 * (1.0 + sa * sb * l0);
    if encoded_normalization < 1e-12 {
        return Err(Error::Degenerate("encoded NOON state has zero norm".into()));
    }
    let k = 1.0 / encoded_normalization.sqrt();
    let cutoff = source.cutoff();
    let mut entries = Vec::with_capacity(2 * cutoff + 1);
    let vac = source.coeffs[0] * (sa + sb) * k;
    if vac.norm() > 0.0 {
        entries.push(([0u16, 0], vac));
    }
    for (n, c) in source.coeffs.iter().enumerate().skip(1) {
        if c.norm() == 0.0 {
            continue;
        }
        entries.push(([n as u16, 0], c * sa * k));
        entries.push(([0, n as u16], c * sb * k));
    }
    let state = MultiModeState::from_amplitudes(2, cutoff, entries)?.normalize()?;
    Ok(NoonState { state, source: source.clone(), encoding: (x, y), normalization, encoded_normalization })
}

/// <N_A (x) I + I (x) N_B>.
pub fn average_photon_number(noon: &NoonState) -> Result<f64> {
    let n = ModeOperator::number(noon.state.cutoff());
    let a = fock::expectation(&noon.state, &[Some(&n), None])?;
    let b = fock::expectation(&noon.state, &[None, Some(&n)])?;
    Ok(a.re + b.re)
}

/// The closed form x / (1 + e^{-x})^2 printed for the even-cat NOON mean
/// photon number; reported next to the numeric value, which it does not
/// match under normalized-cat conventions.
pub fn cat_noon_mean_photon_printed(alpha_sq: f64) -> f64 {
    alpha_sq / (1.0 + (-alpha_sq).exp()).powi(2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn realize(spec: SingleModeSpec) -> SingleModeState {
        spec.realize(&CutoffPolicy::default()).unwrap()
    }

    #[test]
    fn coherent_examples() {
        let s = realize(SingleModeSpec::coherent(re(0.0)));
        assert_eq!(s.coeffs(), &[re(1.0)]);
        let s = realize(SingleModeSpec::coherent(re(1.0)));
        assert!((s.mean_photon_number() - 1.0).abs() < 1e-10);
        let c = s.coeffs();
        assert!((c[2] / c[1] - re(0.5f64.sqrt())).norm() < 1e-14);
        assert!(s.tail_mass() < 1e-12);
    }

    #[test]
    fn coherent_against_factorial_formula() {
        let alpha = C64::new(0.8, -0.6);
        let s = realize(SingleModeSpec::coherent(alpha));
        let mut fact = 1.0;
        for (n, c) in s.coeffs().iter().enumerate() {
            if n > 0 {
                fact *= n as f64;
            }
            let want = (-0.5f64).exp() * alpha.powu(n as u32) / fact.sqrt();
            assert!((c - want).norm() < 1e-12);
        }
    }

    #[test]
    fn cat_examples() {
        let s = realize(SingleModeSpec::even_cat(re(1e-9)));
        assert!((s.coeffs()[0].norm() - 1.0).abs() < 1e-12);
        let s = realize(SingleModeSpec::even_cat(re(1.0)));
        assert!((s.mean_photon_number() - 1f64.tanh()).abs() < 1e-10);
        let s = realize(SingleModeSpec::odd_cat(C64::new(0.3, 1.1)));
        for (n, c) in s.coeffs().iter().enumerate() {
            if n % 2 == 0 {
                assert_eq!(*c, re(0.0));
            }
        }
        // odd cat mean is x coth x
        let x = 0.3f64.powi(2) + 1.1f64.powi(2);
        assert!((s.mean_photon_number() - x / x.tanh()).abs() < 1e-10);
        assert!(matches!(
            SingleModeSpec::odd_cat(re(0.0)).realize(&CutoffPolicy::default()),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn cat_matches_superposition_of_coherent_states() {
        let alpha = C64::new(0.9, 0.4);
        let p = realize(SingleModeSpec::coherent(alpha));
        let m = realize(SingleModeSpec::coherent(-alpha));
        let even = realize(SingleModeSpec::even_cat(alpha));
        let sum: Vec<C64> = p.coeffs().iter().zip(m.coeffs()).map(|(a, b)| a + b).collect();
        let norm: f64 = sum.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for (n, c) in even.coeffs().iter().enumerate() {
            assert!((c - sum[n] / norm).norm() < 1e-10);
        }
    }

    #[test]
    fn squeezed_examples() {
        let s = realize(SingleModeSpec::SqueezedVacuum { r: 0.0, theta: 0.0 });
        assert_eq!(s.coeffs(), &[re(1.0)]);
        let s = realize(SingleModeSpec::SqueezedVacuum { r: 0.7, theta: 1.3 });
        assert!((s.mean_photon_number() - 0.7f64.sinh().powi(2)).abs() < 1e-10);
        assert!(s.coeffs().iter().skip(1).step_by(2).all(|c| *c == re(0.0)));
    }

    #[test]
    fn squeezed_against_closed_form() {
        // (-1)^m sqrt((2m)!)/(2^m m!) e^{i m theta} tanh^m r / sqrt(cosh r)
        let (r, theta) = (0.5f64, 0.4f64);
        let s = realize(SingleModeSpec::SqueezedVacuum { r, theta });
        for m in 0..(s.cutoff() / 2) {
            let f2m: f64 = (1..=2 * m).map(|k| k as f64).product();
            let fm: f64 = (1..=m).map(|k| k as f64).product();
            let mag = f2m.sqrt() / (2f64.powi(m as i32) * fm) * r.tanh().powi(m as i32) / r.cosh().sqrt();
            let want = C64::from_polar(mag, m as f64 * theta) * if m % 2 == 0 { 1.0 } else { -1.0 };
            assert!((s.coeffs()[2 * m] - want).norm() < 1e-12);
        }
    }

    #[test]
    fn photon_added_examples() {
        let s = realize(SingleModeSpec::PhotonAddedCoherent { alpha: re(0.0) });
        assert_eq!(s.coeffs()[1], re(1.0));
        let s = realize(SingleModeSpec::PhotonAddedCoherent { alpha: re(1.0) });
        assert_eq!(s.coeffs()[0], re(0.0));
        // brute-force sum of n |sqrt(n) <n-1|alpha>|^2 / (1 + x)
        let x: f64 = 1.0;
        let mut brute = 0.0;
        let mut p = (-x).exp();
        for n in 1..60 {
            if n > 1 {
                p *= x / (n - 1) as f64;
            }
            brute += n as f64 * n as f64 * p / (1.0 + x);
        }
        assert!((s.mean_photon_number() - brute).abs() < 1e-10);
        assert!((brute - (x * x + 3.0 * x + 1.0) / (1.0 + x)).abs() < 1e-12);
    }

    #[test]
    fn cutoff_policy() {
        let spec = SingleModeSpec::coherent(re(2.0));
        let auto = spec.realize(&CutoffPolicy::default()).unwrap();
        let l = auto.cutoff();
        assert!(auto.tail_mass() < 1e-12);
        // one below is insufficient
        assert!(matches!(
            spec.realize(&CutoffPolicy::fixed(l - 1)),
            Err(Error::CutoffTooSmall { .. })
        ));
        let wide = spec.realize(&CutoffPolicy::fixed(l + 10)).unwrap();
        assert_eq!(wide.cutoff(), l + 10);
        assert!(CutoffPolicy::default().with_tail_tol(1e-3).validated().is_err());
        assert!(CutoffPolicy::default().with_tail_tol(0.0).validated().is_err());
    }

    #[test]
    fn noon_single_photon() {
        let noon = build_noon(&realize(SingleModeSpec::Fock { n: 1 })).unwrap();
        let h = 0.5f64.sqrt();
        assert!((noon.state().amplitude(&[1, 0]) - re(h)).norm() < 1e-15);
        assert!((noon.state().amplitude(&[0, 1]) - re(h)).norm() < 1e-15);
        assert_eq!(noon.state().len(), 2);
        assert!((average_photon_number(&noon).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn noon_finite_superposition() {
        let phi = 0.9;
        let h = 0.5f64.sqrt();
        let src = realize(SingleModeSpec::FiniteSuperposition { coeffs: vec![re(h), C64::from_polar(h, phi)] });
        let noon = build_noon(&src).unwrap();
        let k = 1.0 / 3f64.sqrt();
        assert!((noon.state().amplitude(&[0, 0]) - re(2.0 * h * k)).norm() < 1e-14);
        assert!((noon.state().amplitude(&[1, 0]) - C64::from_polar(h * k, phi)).norm() < 1e-14);
        assert!((noon.state().amplitude(&[0, 1]) - C64::from_polar(h * k, phi)).norm() < 1e-14);
    }

    #[test]
    fn noon_rejects_vacuum() {
        let v = realize(SingleModeSpec::even_cat(re(0.0)));
        assert!(matches!(build_noon(&v), Err(Error::Degenerate(_))));
    }

    #[test]
    fn encoded_cat_matches_printed_form() {
        // e^{-x/2} / (1 + (-1)^{x+y} e^{-x}) sum a^{2n}/sqrt((2n)!) [(-1)^x |2n,0> + (-1)^y |0,2n>]
        let alpha = C64::new(0.6, 0.8);
        let x = alpha.norm_sqr();
        let noon = build_noon(&realize(SingleModeSpec::even_cat(alpha))).unwrap();
        assert!((noon.normalization() - 2.0 * (1.0 + 1.0 / x.cosh())).abs() < 1e-12);
        for (ex, ey) in [(0u8, 0u8), (0, 1), (1, 0), (1, 1)] {
            let enc = phase_encode(&noon, ex, ey);
            let (sa, sb) = (1.0 - 2.0 * ex as f64, 1.0 - 2.0 * ey as f64);
            let pre = (-x / 2.0).exp() / (1.0 + sa * sb * (-x).exp());
            let mut term = re(1.0);
            for n in 0..enc.state().cutoff() / 2 {
                if n > 0 {
                    let k = 2.0 * n as f64;
                    term *= alpha * alpha / (k * (k - 1.0)).sqrt();
                }
                let (a, b) = ((2 * n) as u16, 0u16);
                if n == 0 {
                    assert!((enc.state().amplitude(&[0, 0]) - term * pre * (sa + sb)).norm() < 1e-12);
                } else {
                    assert!((enc.state().amplitude(&[a, b]) - term * pre * sa).norm() < 1e-12);
                    assert!((enc.state().amplitude(&[b, a]) - term * pre * sb).norm() < 1e-12);
                }
            }
            let l0 = 1.0 / x.cosh();
            assert!((enc.encoded_normalization() - 2.0 * (1.0 + sa * sb * l0)).abs() < 1e-12);
        }
    }

    #[test]
    fn encoding_signs() {
        let src = realize(SingleModeSpec::even_cat(re(0.7)));
        let noon = build_noon(&src).unwrap();
        assert_eq!(phase_encode(&noon, 0, 0), noon);
        let flipped = phase_encode(&noon, 1, 1);
        for (k, v) in noon.state().iter() {
            assert!((flipped.state().amplitude(k) + v).norm() < 1e-15);
        }
        assert_eq!(phase_encode(&flipped, 1, 1), noon);
    }

    #[test]
    fn cat_noon_mean_photon_side_by_side() {
        let noon = build_noon(&realize(SingleModeSpec::even_cat(re(1.0)))).unwrap();
        let numeric = average_photon_number(&noon).unwrap();
        // 2 <n>_cat / N with <n> = tanh 1 and N = 2 (1 + 1/cosh 1)
        let oracle = 1f64.tanh() / (1.0 + 1.0 / 1f64.cosh());
        assert!((numeric - oracle).abs() < 1e-10);
        assert!((numeric - 0.462).abs() < 1e-3);
        assert!((cat_noon_mean_photon_printed(1.0) - 0.534).abs() < 1e-3);
    }
}
