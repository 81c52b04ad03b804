//! Sparse multimode states in a truncated Fock space and dense per-mode
//! operators.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub type Occupation = SmallVec<[u16; 4]>;

pub const DEFAULT_PRUNE: f64 = 1e-15;
pub const NORM_TOL: f64 = 1e-10;
const HERMITIAN_TOL: f64 = 1e-12;
const EFFECT_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct MultiModeState {
    num_modes: usize,
    cutoff: usize,
    amps: BTreeMap<Occupation, C64>,
}

/// A state together with the squared norm lost to truncation while
/// producing it.
#[derive(Clone, Debug)]
pub struct Truncated {
    pub state: MultiModeState,
    pub dropped_mass: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ladder {
    Annihilate,
    Create,
}

impl MultiModeState {
    /// The zero vector.
    pub fn zero(num_modes: usize, cutoff: usize) -> Self {
        assert!(num_modes > 0, "a state needs at least one mode");
        Self { num_modes, cutoff, amps: BTreeMap::new() }
    }

    pub fn vacuum(num_modes: usize, cutoff: usize) -> Self {
        let mut s = Self::zero(num_modes, cutoff);
        s.amps.insert(SmallVec::from_elem(0, num_modes), C64::new(1.0, 0.0));
        s
    }

    /// Builds a state from explicit tuples. Repeated tuples are summed.
    pub fn from_amplitudes<I, T>(num_modes: usize, cutoff: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (T, C64)>,
        T: AsRef<[u16]>,
    {
        let mut s = Self::zero(num_modes, cutoff);
        for (occ, amp) in entries {
            let occ = occ.as_ref();
            if occ.len() != num_modes {
                return Err(Error::ModeMismatch { left: num_modes, right: occ.len() });
            }
            let total: usize = occ.iter().map(|&n| n as usize).sum();
            if total > cutoff {
                return Err(Error::CutoffExceeded { max_index: total, cutoff });
            }
            s.accumulate(SmallVec::from_slice(occ), amp);
        }
        Ok(s)
    }

    pub(crate) fn from_map(num_modes: usize, cutoff: usize, amps: BTreeMap<Occupation, C64>) -> Self {
        Self { num_modes, cutoff, amps }
    }

    pub(crate) fn accumulate(&mut self, occ: Occupation, amp: C64) {
        *self.amps.entry(occ).or_insert(C64::new(0.0, 0.0)) += amp;
    }

    pub fn num_modes(&self) -> usize {
        self.num_modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Number of stored tuples.
    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn amplitude(&self, occ: &[u16]) -> C64 {
        self.amps.get(occ).copied().unwrap_or(C64::new(0.0, 0.0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Occupation, &C64)> {
        self.amps.iter()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() < NORM_TOL
    }

    pub fn ensure_normalized(&self) -> Result<()> {
        let n = self.norm_sqr();
        if (n - 1.0).abs() < NORM_TOL {
            Ok(())
        } else {
            Err(Error::NotNormalized(n))
        }
    }

    pub fn normalize(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::Degenerate(format!("cannot normalize a state with squared norm {n}")));
        }
        Ok(self.scale(C64::new(1.0 / n.sqrt(), 0.0)))
    }

    pub fn scale(&self, c: C64) -> Self {
        let amps = self.amps.iter().map(|(k, v)| (k.clone(), v * c)).collect();
        Self { amps, ..*self }
    }

    /// Drops amplitudes with magnitude below `threshold`; returns the
    /// removed squared norm alongside.
    pub fn prune(&self, threshold: f64) -> (Self, f64) {
        let mut removed = 0.0;
        let mut amps = BTreeMap::new();
        for (k, v) in &self.amps {
            if v.norm() < threshold {
                removed += v.norm_sqr();
            } else {
                amps.insert(k.clone(), *v);
            }
        }
        (Self { amps, ..*self }, removed)
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: C64, other: &Self) -> Result<Self> {
        if self.num_modes != other.num_modes {
            return Err(Error::ModeMismatch { left: self.num_modes, right: other.num_modes });
        }
        let mut out = Self { cutoff: self.cutoff.max(other.cutoff), ..self.clone() };
        for (k, v) in &other.amps {
            out.accumulate(k.clone(), v * c);
        }
        Ok(out)
    }

    /// Appends `extra` vacuum modes after the existing ones.
    pub fn with_vacuum_modes(&self, extra: usize) -> Self {
        let amps = self
            .amps
            .iter()
            .map(|(k, v)| {
                let mut k = k.clone();
                k.extend(std::iter::repeat_n(0, extra));
                (k, *v)
            })
            .collect();
        Self { num_modes: self.num_modes + extra, cutoff: self.cutoff, amps }
    }

    /// Largest total photon number carrying a stored amplitude.
    pub fn max_total_photons(&self) -> usize {
        self.amps.keys().map(|k| total(k)).max().unwrap_or(0)
    }

    /// Dense coefficient vector of a one-mode state, length cutoff + 1.
    pub fn single_mode_coeffs(&self) -> Result<DVector<C64>> {
        if self.num_modes != 1 {
            return Err(Error::ModeMismatch { left: 1, right: self.num_modes });
        }
        let mut v = DVector::zeros(self.cutoff + 1);
        for (k, a) in &self.amps {
            v[k[0] as usize] = *a;
        }
        Ok(v)
    }

    /// Squared norm carried by tuples whose photon count in `mode` satisfies
    /// `pred`.
    pub fn mass_where(&self, mode: usize, pred: impl Fn(usize) -> bool) -> f64 {
        self.amps
            .iter()
            .filter(|(k, _)| pred(k[mode] as usize))
            .map(|(_, v)| v.norm_sqr())
            .sum()
    }
}

fn total(occ: &[u16]) -> usize {
    occ.iter().map(|&n| n as usize).sum()
}

/// One-mode state with amplitude `coeffs[n]` on `|n>`, normalized.
pub fn single_mode_from_coeffs(coeffs: &[C64], cutoff: usize) -> Result<MultiModeState> {
    let last = coeffs.iter().rposition(|c| *c != C64::new(0.0, 0.0));
    let Some(last) = last else {
        return Err(Error::Degenerate("all-zero coefficient vector".into()));
    };
    if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::Degenerate("non-finite coefficient".into()));
    }
    if last > cutoff {
        return Err(Error::CutoffExceeded { max_index: last, cutoff });
    }
    let mut s = MultiModeState::zero(1, cutoff);
    for (n, c) in coeffs.iter().enumerate().take(last + 1) {
        if *c != C64::new(0.0, 0.0) {
            s.amps.insert(SmallVec::from_elem(n as u16, 1), *c);
        }
    }
    s.normalize()
}

/// Tensor product of states sharing one cutoff. The result keeps that total
/// cutoff and reports the mass of the tuples that exceed it.
pub fn tensor_product(states: &[MultiModeState]) -> Result<Truncated> {
    let Some(first) = states.first() else {
        return Err(Error::Degenerate("empty tensor product".into()));
    };
    let cutoff = first.cutoff;
    for s in states {
        if s.cutoff != cutoff {
            return Err(Error::CutoffMismatch { left: cutoff, right: s.cutoff });
        }
    }
    let mut acc: Vec<(Occupation, C64)> = first.amps.iter().map(|(k, v)| (k.clone(), *v)).collect();
    let mut dropped = 0.0;
    for s in &states[1..] {
        let mut next = Vec::with_capacity(acc.len() * s.len());
        for (ka, va) in &acc {
            let ta = total(ka);
            for (kb, vb) in &s.amps {
                let amp = va * vb;
                if ta + total(kb) > cutoff {
                    dropped += amp.norm_sqr();
                    continue;
                }
                let mut k = ka.clone();
                k.extend_from_slice(kb);
                next.push((k, amp));
            }
        }
        acc = next;
    }
    let num_modes = states.iter().map(|s| s.num_modes).sum();
    let state = MultiModeState::from_map(num_modes, cutoff, acc.into_iter().collect());
    Ok(Truncated { state, dropped_mass: dropped })
}

/// `<a|b>`, conjugate-linear in `a`.
pub fn inner_product(a: &MultiModeState, b: &MultiModeState) -> Result<C64> {
    if a.num_modes != b.num_modes {
        return Err(Error::ModeMismatch { left: a.num_modes, right: b.num_modes });
    }
    let (small, large, flip) = if a.len() <= b.len() { (a, b, false) } else { (b, a, true) };
    let mut acc = C64::new(0.0, 0.0);
    for (k, v) in &small.amps {
        if let Some(w) = large.amps.get(k) {
            acc += if flip { w.conj() * v } else { v.conj() * w };
        }
    }
    Ok(acc)
}

/// `a^p` or `(a^dagger)^p` on one mode. The result is unnormalized; creation
/// beyond the cutoff is dropped and its mass reported.
pub fn apply_ladder(state: &MultiModeState, mode: usize, kind: Ladder, power: u16) -> Result<Truncated> {
    if mode >= state.num_modes {
        return Err(Error::ModeOutOfRange { mode, num_modes: state.num_modes });
    }
    let mut out = MultiModeState::zero(state.num_modes, state.cutoff);
    let mut dropped = 0.0;
    for (k, v) in &state.amps {
        let n = k[mode];
        match kind {
            Ladder::Annihilate => {
                if n < power {
                    continue;
                }
                let f: f64 = ((n - power + 1)..=n).map(|j| (j as f64).sqrt()).product();
                let mut k2 = k.clone();
                k2[mode] = n - power;
                out.accumulate(k2, v * f);
            }
            Ladder::Create => {
                let f: f64 = ((n + 1)..=(n + power)).map(|j| (j as f64).sqrt()).product();
                if total(k) + power as usize > state.cutoff {
                    dropped += (v * f).norm_sqr();
                    continue;
                }
                let mut k2 = k.clone();
                k2[mode] = n + power;
                out.accumulate(k2, v * f);
            }
        }
    }
    Ok(Truncated { state: out, dropped_mass: dropped })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Structure {
    Identity,
    Diagonal,
    Dense,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModeOperator {
    entries: DMatrix<C64>,
    structure: Structure,
    hermitian: bool,
    effect: bool,
}

impl ModeOperator {
    pub fn new(entries: DMatrix<C64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() || entries.nrows() == 0 {
            return Err(Error::DimensionMismatch { expected: entries.nrows(), found: entries.ncols() });
        }
        let structure = classify(&entries);
        let hermitian = hermiticity_defect(&entries) < HERMITIAN_TOL;
        Ok(Self { entries, structure, hermitian, effect: false })
    }

    pub fn identity(cutoff: usize) -> Self {
        Self {
            entries: DMatrix::identity(cutoff + 1, cutoff + 1),
            structure: Structure::Identity,
            hermitian: true,
            effect: true,
        }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let entries = DMatrix::from_diagonal(&DVector::from_iterator(
            values.len(),
            values.iter().map(|&v| C64::new(v, 0.0)),
        ));
        let structure = classify(&entries);
        Self { entries, structure, hermitian: true, effect: false }
    }

    pub fn number(cutoff: usize) -> Self {
        let v: Vec<f64> = (0..=cutoff).map(|n| n as f64).collect();
        Self::diagonal(&v)
    }

    /// `|v><v|` for the given (not necessarily normalized) vector.
    pub fn outer(v: &DVector<C64>) -> Self {
        let entries = v * v.adjoint();
        // make exactly Hermitian
        let entries = (&entries + entries.adjoint()).scale(0.5);
        Self::new(entries).expect("square by construction")
    }

    pub fn hermitian(entries: DMatrix<C64>) -> Result<Self> {
        let d = hermiticity_defect(&entries);
        if d >= HERMITIAN_TOL {
            return Err(Error::NotHermitian(d));
        }
        Self::new(entries)
    }

    /// Marks the operator as a POVM effect after checking its spectrum.
    pub fn into_effect(mut self) -> Result<Self> {
        if !self.hermitian {
            return Err(Error::NotHermitian(hermiticity_defect(&self.entries)));
        }
        for e in self.eigenvalues() {
            if !(-EFFECT_TOL..=1.0 + EFFECT_TOL).contains(&e) {
                return Err(Error::NotEffect(e));
            }
        }
        self.effect = true;
        Ok(self)
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn cutoff(&self) -> usize {
        self.dim() - 1
    }

    pub fn structure(&self) -> Structure {
        self.structure
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn is_effect(&self) -> bool {
        self.effect
    }

    /// Real diagonal, meaningful when the structure is not dense.
    pub fn diag_real(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.entries[(i, i)].re).collect()
    }

    /// Spectrum of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let h = (&self.entries + self.entries.adjoint()).scale(0.5);
        let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut out = Self::new(self.entries.scale(c)).expect("square");
        out.hermitian = self.hermitian;
        out
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Self::new(&self.entries + &other.entries)
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Self::new(&self.entries - &other.entries)
    }

    pub fn hermiticity_defect(&self) -> f64 {
        hermiticity_defect(&self.entries)
    }
}

fn hermiticity_defect(m: &DMatrix<C64>) -> f64 {
    let d = m - m.adjoint();
    d.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn classify(m: &DMatrix<C64>) -> Structure {
    let n = m.nrows();
    let mut diagonal = true;
    let mut identity = true;
    for j in 0..n {
        for i in 0..n {
            let z = m[(i, j)];
            if i == j {
                if z.im != 0.0 {
                    diagonal = false;
                    identity = false;
                } else if z.re != 1.0 {
                    identity = false;
                }
            } else if z != C64::new(0.0, 0.0) {
                diagonal = false;
                identity = false;
            }
        }
    }
    if identity {
        Structure::Identity
    } else if diagonal {
        Structure::Diagonal
    } else {
        Structure::Dense
    }
}

/// `<psi| op_1 (x) ... (x) op_M |psi>`; `None` entries act as the identity.
pub fn expectation(state: &MultiModeState, ops: &[Option<&ModeOperator>]) -> Result<C64> {
    if ops.len() != state.num_modes {
        return Err(Error::ModeMismatch { left: state.num_modes, right: ops.len() });
    }
    for op in ops.iter().flatten() {
        if op.dim() != state.cutoff + 1 {
            return Err(Error::DimensionMismatch { expected: state.cutoff + 1, found: op.dim() });
        }
    }
    state.ensure_normalized()?;
    Ok(expectation_unchecked(state, ops))
}

/// Same contraction without the normalization check; used for
/// unnormalized intermediate vectors.
pub fn expectation_unchecked(state: &MultiModeState, ops: &[Option<&ModeOperator>]) -> C64 {
    let diag: Vec<Option<Vec<f64>>> = ops
        .iter()
        .map(|op| match op {
            Some(op) if op.structure == Structure::Diagonal => Some(op.diag_real()),
            _ => None,
        })
        .collect();
    let dense: Vec<usize> = ops
        .iter()
        .enumerate()
        .filter(|(_, op)| matches!(op, Some(op) if op.structure == Structure::Dense))
        .map(|(m, _)| m)
        .collect();

    let weight = |k: &Occupation| -> f64 {
        diag.iter()
            .enumerate()
            .filter_map(|(m, d)| d.as_ref().map(|d| d[k[m] as usize]))
            .product()
    };

    if dense.is_empty() {
        let s: f64 = state.amps.iter().map(|(k, v)| v.norm_sqr() * weight(k)).sum();
        return C64::new(s, 0.0);
    }

    // Group tuples by their non-dense part; each group is a small dense
    // tensor over the dense modes.
    let mut groups: BTreeMap<Occupation, Vec<(Occupation, C64)>> = BTreeMap::new();
    for (k, v) in &state.amps {
        let mut rest = k.clone();
        let mut sub = Occupation::new();
        for &m in &dense {
            sub.push(k[m]);
            rest[m] = 0;
        }
        groups.entry(rest).or_default().push((sub, *v));
    }

    let dims: Vec<usize> = dense.iter().map(|&m| ops[m].unwrap().dim()).collect();
    let size: usize = dims.iter().product();
    let mut acc = C64::new(0.0, 0.0);
    for (rest, members) in &groups {
        let w = weight(rest);
        if w == 0.0 {
            continue;
        }
        let mut psi = vec![C64::new(0.0, 0.0); size];
        for (sub, v) in members {
            psi[flat_index(sub, &dims)] = *v;
        }
        let mut phi = psi.clone();
        for (axis, &m) in dense.iter().enumerate() {
            phi = apply_axis(&phi, &dims, axis, ops[m].unwrap().entries());
        }
        let overlap: C64 = psi.iter().zip(&phi).map(|(a, b)| a.conj() * b).sum();
        acc += overlap * w;
    }
    acc
}

fn flat_index(sub: &[u16], dims: &[usize]) -> usize {
    sub.iter().zip(dims).fold(0, |idx, (&n, &d)| idx * d + n as usize)
}

fn apply_axis(data: &[C64], dims: &[usize], axis: usize, op: &DMatrix<C64>) -> Vec<C64> {
    let d = dims[axis];
    let inner: usize = dims[axis + 1..].iter().product();
    let outer: usize = dims[..axis].iter().product();
    let mut out = vec![C64::new(0.0, 0.0); data.len()];
    for o in 0..outer {
        for i in 0..inner {
            let base = o * d * inner + i;
            for r in 0..d {
                let mut s = C64::new(0.0, 0.0);
                for c in 0..d {
                    let x = data[base + c * inner];
                    if x != C64::new(0.0, 0.0) {
                        s += op[(r, c)] * x;
                    }
                }
                out[base + r * inner] = s;
            }
        }
    }
    out
}

/// Schmidt coefficients (descending singular values) of a two-mode state.
pub fn schmidt_coefficients(state: &MultiModeState) -> Result<Vec<f64>> {
    if state.num_modes != 2 {
        return Err(Error::ModeMismatch { left: 2, right: state.num_modes });
    }
    let d = state.cutoff + 1;
    let mut m = DMatrix::<C64>::zeros(d, d);
    for (k, v) in &state.amps {
        m[(k[0] as usize, k[1] as usize)] = *v;
    }
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn coherent(alpha: C64, cutoff: usize) -> MultiModeState {
        let mut coeffs = vec![C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0)];
        for n in 1..=cutoff {
            let prev = coeffs[n - 1];
            coeffs.push(prev * alpha / (n as f64).sqrt());
        }
        single_mode_from_coeffs(&coeffs, cutoff).unwrap()
    }

    #[test]
    fn vacuum_from_unit_vector() {
        let s = single_mode_from_coeffs(&[c(1.0), c(0.0), c(0.0)], 4).unwrap();
        assert_eq!(s, MultiModeState::vacuum(1, 4));
    }

    #[test]
    fn qubit_superposition_from_coeffs() {
        let phi = 0.7;
        let h = 0.5f64.sqrt();
        let s = single_mode_from_coeffs(&[c(h), C64::from_polar(h, phi)], 1).unwrap();
        assert!((s.amplitude(&[0]) - c(h)).norm() < 1e-15);
        assert!((s.amplitude(&[1]) - C64::from_polar(h, phi)).norm() < 1e-15);
    }

    #[test]
    fn uniform_three_level_mean_is_one() {
        let s = single_mode_from_coeffs(&[c(1.0), c(1.0), c(1.0)], 2).unwrap();
        let n = expectation(&s, &[Some(&ModeOperator::number(2))]).unwrap();
        assert!((n.re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn coeff_errors() {
        assert!(matches!(single_mode_from_coeffs(&[c(0.0); 3], 3), Err(Error::Degenerate(_))));
        assert!(matches!(
            single_mode_from_coeffs(&[c(0.0), c(0.0), c(1.0)], 1),
            Err(Error::CutoffExceeded { max_index: 2, cutoff: 1 })
        ));
    }

    #[test]
    fn tensor_products() {
        let v = MultiModeState::vacuum(1, 3);
        let t = tensor_product(&[v.clone(), v]).unwrap();
        assert_eq!(t.state, MultiModeState::vacuum(2, 3));

        let plus = single_mode_from_coeffs(&[c(1.0), c(1.0)], 2).unwrap();
        let t = tensor_product(&[plus.clone(), plus]).unwrap();
        assert_eq!(t.state.len(), 4);
        for k in [[0, 0], [0, 1], [1, 0], [1, 1]] {
            assert!((t.state.amplitude(&k) - c(0.5)).norm() < 1e-15);
        }
        assert_eq!(t.dropped_mass, 0.0);

        // total cutoff 1 truncates |1,1>
        let plus = single_mode_from_coeffs(&[c(1.0), c(1.0)], 1).unwrap();
        let t = tensor_product(&[plus.clone(), plus]).unwrap();
        assert_eq!(t.state.len(), 3);
        assert!((t.dropped_mass - 0.25).abs() < 1e-15);
    }

    #[test]
    fn inner_products() {
        let zero = MultiModeState::vacuum(1, 5);
        assert_eq!(inner_product(&zero, &zero).unwrap(), c(1.0));
        let two = MultiModeState::from_amplitudes(1, 5, [([2u16], c(1.0))]).unwrap();
        assert_eq!(inner_product(&zero, &two).unwrap(), c(0.0));
        let alpha = coherent(c(1.0), 30);
        assert!((inner_product(&zero, &alpha).unwrap() - c((-0.5f64).exp())).norm() < 1e-12);
        let pair = MultiModeState::vacuum(2, 5);
        assert!(matches!(inner_product(&zero, &pair), Err(Error::ModeMismatch { .. })));
    }

    #[test]
    fn inner_product_is_conjugate_linear_in_first() {
        let a = single_mode_from_coeffs(&[c(1.0), C64::new(0.0, 1.0)], 1).unwrap();
        let b = single_mode_from_coeffs(&[c(1.0), c(1.0)], 1).unwrap();
        let ab = inner_product(&a, &b).unwrap();
        let ba = inner_product(&b, &a).unwrap();
        assert!((ab - ba.conj()).norm() < 1e-15);
        assert!((ab - C64::new(0.5, -0.5)).norm() < 1e-15);
    }

    #[test]
    fn ladder_actions() {
        let zero = MultiModeState::vacuum(1, 4);
        let a0 = apply_ladder(&zero, 0, Ladder::Annihilate, 1).unwrap();
        assert!(a0.state.is_empty());
        let ad0 = apply_ladder(&zero, 0, Ladder::Create, 1).unwrap();
        assert_eq!(ad0.state.amplitude(&[1]), c(1.0));
        assert_eq!(ad0.state.len(), 1);

        let alpha = C64::new(0.5, 0.0);
        let s = coherent(alpha, 30);
        let a = apply_ladder(&s, 0, Ladder::Annihilate, 1).unwrap().state;
        for n in 0..30u16 {
            let want = s.amplitude(&[n]) * alpha;
            assert!((a.amplitude(&[n]) - want).norm() < 1e-10);
        }

        let top = MultiModeState::from_amplitudes(1, 2, [([2u16], c(1.0))]).unwrap();
        let t = apply_ladder(&top, 0, Ladder::Create, 1).unwrap();
        assert!(t.state.is_empty());
        assert!((t.dropped_mass - 3.0).abs() < 1e-12);
        assert!(matches!(
            apply_ladder(&top, 1, Ladder::Create, 1),
            Err(Error::ModeOutOfRange { .. })
        ));
    }

    #[test]
    fn expectation_examples() {
        let s = coherent(c(1.0), 30);
        let id = ModeOperator::identity(30);
        assert!((expectation(&s, &[Some(&id)]).unwrap() - c(1.0)).norm() < 1e-12);
        assert!((expectation(&s, &[None]).unwrap() - c(1.0)).norm() < 1e-12);
        let n = expectation(&s, &[Some(&ModeOperator::number(30))]).unwrap();
        assert!((n.re - 1.0).abs() < 1e-10);

        let h = 0.5f64.sqrt();
        let s = MultiModeState::from_amplitudes(2, 2, [([2u16, 0], c(h)), ([0, 2], c(h))]).unwrap();
        let even = ModeOperator::diagonal(&[1.0, 0.0, 1.0]);
        let e = expectation(&s, &[Some(&even), Some(&even)]).unwrap();
        assert!((e - c(1.0)).norm() < 1e-14);
    }

    #[test]
    fn expectation_errors() {
        let s = MultiModeState::vacuum(2, 2);
        let wrong = ModeOperator::identity(3);
        assert!(matches!(expectation(&s, &[Some(&wrong), None]), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(expectation(&s, &[None]), Err(Error::ModeMismatch { .. })));
        let half = s.scale(c(0.5));
        assert!(matches!(expectation(&half, &[None, None]), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn dense_path_matches_direct_contraction() {
        // a 3-mode state against a dense, a diagonal and an identity operator
        let s = MultiModeState::from_amplitudes(
            3,
            3,
            [
                ([0u16, 0, 0], C64::new(0.3, 0.1)),
                ([1, 0, 1], C64::new(-0.2, 0.4)),
                ([0, 1, 1], C64::new(0.5, 0.0)),
                ([2, 1, 0], C64::new(0.1, -0.3)),
                ([1, 1, 1], C64::new(0.0, 0.2)),
            ],
        )
        .unwrap()
        .normalize()
        .unwrap();
        let mut m = DMatrix::<C64>::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] = C64::new((i + 2 * j) as f64 * 0.1, (i as f64 - j as f64) * 0.05);
            }
        }
        let dense = ModeOperator::new(m.clone()).unwrap();
        let diag = ModeOperator::diagonal(&[0.5, -1.0, 2.0, 0.25]);
        let got = expectation(&s, &[Some(&dense), Some(&diag), None]).unwrap();

        let mut want = C64::new(0.0, 0.0);
        for (k, v) in s.iter() {
            for (k2, v2) in s.iter() {
                if k[1] != k2[1] || k[2] != k2[2] {
                    continue;
                }
                want += v.conj() * m[(k[0] as usize, k2[0] as usize)] * diag.diag_real()[k[1] as usize] * v2;
            }
        }
        assert!((got - want).norm() < 1e-14);
    }

    #[test]
    fn pruning_is_bounded() {
        let s = MultiModeState::from_amplitudes(1, 3, [([0u16], c(1.0)), ([3], c(1e-16))]).unwrap();
        let (p, removed) = s.prune(DEFAULT_PRUNE);
        assert_eq!(p.len(), 1);
        assert!(removed < 1e-30);
    }

    #[test]
    fn schmidt_of_product_and_bell_pair() {
        let h = 0.5f64.sqrt();
        let s = MultiModeState::from_amplitudes(2, 1, [([1u16, 0], c(h)), ([0, 1], c(h))]).unwrap();
        let sv = schmidt_coefficients(&s).unwrap();
        assert!((sv[0] - h).abs() < 1e-14 && (sv[1] - h).abs() < 1e-14);
        let p = MultiModeState::vacuum(2, 1);
        let sv = schmidt_coefficients(&p).unwrap();
        assert!((sv[0] - 1.0).abs() < 1e-14 && sv[1].abs() < 1e-14);
    }

    #[test]
    fn effect_check() {
        assert!(ModeOperator::diagonal(&[0.0, 1.0]).into_effect().is_ok());
        assert!(matches!(ModeOperator::diagonal(&[0.0, 1.5]).into_effect(), Err(Error::NotEffect(_))));
        let mut m = DMatrix::<C64>::zeros(2, 2);
        m[(0, 1)] = c(1.0);
        assert!(matches!(ModeOperator::hermitian(m), Err(Error::NotHermitian(_))));
    }
}
