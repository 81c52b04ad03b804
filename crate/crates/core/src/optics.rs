//! Beam splitters as linear maps on creation operators.
//!
//! A matrix `U` acts as `a_nu^dagger -> sum_mu U[mu, nu] a_mu^dagger`, so the
//! columns are the images of the input modes.

use std::collections::{BTreeMap, HashMap};

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::combinatorics::{binomial, compositions, multinomial};
use crate::error::{Error, Result};
use crate::fock::{self, MultiModeState, Occupation, DEFAULT_PRUNE};
use crate::states::{self, CutoffPolicy, SingleModeSpec};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BeamSplitterModel {
    Lossless5050,
    Lossy { eta: f64 },
}

impl BeamSplitterModel {
    pub fn lossy(eta: f64) -> Result<Self> {
        check_eta(eta)?;
        Ok(Self::Lossy { eta })
    }

    /// Field modes plus device modes after the splitter.
    pub fn output_modes(&self) -> usize {
        match self {
            Self::Lossless5050 => 2,
            Self::Lossy { .. } => 4,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Self::Lossless5050 => "lossless_5050".into(),
            Self::Lossy { eta } => format!("lossy(eta={eta})"),
        }
    }

    pub fn apply(&self, state2: &MultiModeState) -> Result<MultiModeState> {
        match *self {
            Self::Lossless5050 => apply_lossless_bs(state2, (0, 1)),
            Self::Lossy { eta } => apply_lossy_bs(state2, eta),
        }
    }
}

fn check_eta(eta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::invalid("eta", eta, "must lie in [0, 1]"));
    }
    Ok(())
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn lossless_5050_matrix() -> DMatrix<C64> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    DMatrix::from_row_slice(2, 2, &[re(h), re(h), re(h), re(-h)])
}

/// The 4x4 lossy splitter on (a1, a2, g1, g2): transmission block `T`,
/// absorption block `A`.
pub fn lossy_lambda(eta: f64) -> Result<DMatrix<C64>> {
    check_eta(eta)?;
    let s = eta.sqrt();
    let c = (1.0 - eta).sqrt();
    #[rustfmt::skip]
    let rows = [
         s,  s,  c, c,
         s, -s, -c, c,
        -c, -c,  s, s,
        -c,  c, -s, s,
    ];
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Ok(DMatrix::from_row_slice(4, 4, &rows.map(|v| re(v * h))))
}

/// max |M^dagger M - I|.
pub fn unitarity_defect(m: &DMatrix<C64>) -> f64 {
    let p = m.adjoint() * m;
    let id = DMatrix::<C64>::identity(m.nrows(), m.ncols());
    (p - id).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// max |T T^dagger + A A^dagger - I| for the field rows of the lossy splitter.
pub fn absorption_defect(eta: f64) -> Result<f64> {
    let l = lossy_lambda(eta)?;
    let t = l.view((0, 0), (2, 2));
    let a = l.view((0, 2), (2, 2));
    let sum = t * t.adjoint() + a * a.adjoint();
    let id = DMatrix::<C64>::identity(2, 2);
    Ok((sum - id).iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// Applies `matrix` to the listed modes of `state`. Each input mode is
/// expanded by the multinomial theorem; coefficients use exact integer
/// binomials.
pub fn apply_linear_transform(state: &MultiModeState, modes: &[usize], matrix: &DMatrix<C64>) -> Result<MultiModeState> {
    let k = modes.len();
    if matrix.nrows() != k || matrix.ncols() != k {
        return Err(Error::DimensionMismatch { expected: k, found: matrix.nrows() });
    }
    for (i, &m) in modes.iter().enumerate() {
        if m >= state.num_modes() {
            return Err(Error::ModeOutOfRange { mode: m, num_modes: state.num_modes() });
        }
        if modes[..i].contains(&m) {
            return Err(Error::invalid("mode", m as f64, "repeated mode index"));
        }
    }
    let cutoff = state.cutoff();
    let sqrt_binom: Vec<Vec<f64>> = (0..=cutoff).map(|n| (0..=n).map(|j| binomial(n, j).sqrt()).collect()).collect();
    let mut expander = Expander { matrix, sqrt_binom: &sqrt_binom, terms: HashMap::new() };

    let mut cache: HashMap<Vec<u16>, Vec<(Vec<u16>, C64)>> = HashMap::new();
    let mut out: BTreeMap<Occupation, C64> = BTreeMap::new();
    for (occ, amp) in state.iter() {
        let sub: Vec<u16> = modes.iter().map(|&m| occ[m]).collect();
        let image = cache.entry(sub.clone()).or_insert_with(|| expander.expand(&sub));
        for (m_sub, coef) in image.iter() {
            let mut key = occ.clone();
            for (i, &m) in modes.iter().enumerate() {
                key[m] = m_sub[i];
            }
            *out.entry(key).or_insert(C64::new(0.0, 0.0)) += amp * coef;
        }
    }
    let result = MultiModeState::from_map(state.num_modes(), cutoff, out);
    Ok(result.prune(DEFAULT_PRUNE).0)
}

struct Expander<'a> {
    matrix: &'a DMatrix<C64>,
    sqrt_binom: &'a [Vec<f64>],
    /// (input mode, photons) -> [(composition, sqrt(multinomial) prod U^k)]
    terms: HashMap<(usize, u16), Vec<(Vec<usize>, C64)>>,
}

impl Expander<'_> {
    /// Image of the basis state `|n_1 ... n_k>` on the transformed modes.
    fn expand(&mut self, n: &[u16]) -> Vec<(Vec<u16>, C64)> {
        let k = n.len();
        let mut poly: BTreeMap<Vec<u16>, C64> = BTreeMap::new();
        poly.insert(vec![0; k], re(1.0));
        for (nu, &count) in n.iter().enumerate() {
            if count == 0 {
                continue;
            }
            let terms = self.terms_for(nu, count).clone();
            let mut next: BTreeMap<Vec<u16>, C64> = BTreeMap::new();
            for (m, a) in &poly {
                for (comp, w) in &terms {
                    let mut key = m.clone();
                    let mut f = 1.0;
                    for mu in 0..k {
                        let add = comp[mu];
                        let old = m[mu] as usize;
                        f *= self.sqrt_binom[old + add][add];
                        key[mu] = (old + add) as u16;
                    }
                    *next.entry(key).or_insert(C64::new(0.0, 0.0)) += a * w * f;
                }
            }
            poly = next;
        }
        poly.into_iter().filter(|(_, v)| v.norm() > 0.0).collect()
    }

    fn terms_for(&mut self, nu: usize, count: u16) -> &Vec<(Vec<usize>, C64)> {
        let matrix = self.matrix;
        self.terms.entry((nu, count)).or_insert_with(|| {
            let k = matrix.nrows();
            let col: Vec<C64> = (0..k).map(|mu| matrix[(mu, nu)]).collect();
            compositions(count as usize, k)
                .into_iter()
                .filter_map(|comp| {
                    let mut w = re(multinomial(&comp).sqrt());
                    for (mu, &e) in comp.iter().enumerate() {
                        if e > 0 {
                            w *= col[mu].powu(e as u32);
                        }
                    }
                    (w.norm() > 0.0).then_some((comp, w))
                })
                .collect()
        })
    }
}

/// 50:50 splitter on modes (i, j): a_i^dagger -> (a_i^dagger + a_j^dagger)/sqrt 2,
/// a_j^dagger -> (a_i^dagger - a_j^dagger)/sqrt 2.
pub fn apply_lossless_bs(state: &MultiModeState, (i, j): (usize, usize)) -> Result<MultiModeState> {
    if i == j {
        return Err(Error::invalid("mode", i as f64, "beam splitter needs two distinct modes"));
    }
    apply_linear_transform(state, &[i, j], &lossless_5050_matrix())
}

/// Lossy splitter on a two-mode field state; two vacuum device modes are
/// appended as modes 2 and 3.
pub fn apply_lossy_bs(state2: &MultiModeState, eta: f64) -> Result<MultiModeState> {
    if state2.num_modes() != 2 {
        return Err(Error::ModeMismatch { left: 2, right: state2.num_modes() });
    }
    apply_lossy_lambda(&state2.with_vacuum_modes(2), eta)
}

/// The lossy splitter on an explicit four-mode (field, field, device, device)
/// state.
pub fn apply_lossy_lambda(state4: &MultiModeState, eta: f64) -> Result<MultiModeState> {
    if state4.num_modes() != 4 {
        return Err(Error::ModeMismatch { left: 4, right: state4.num_modes() });
    }
    apply_linear_transform(state4, &[0, 1, 2, 3], &lossy_lambda(eta)?)
}

/// The same map built from elementary splitters: 50:50 on the field pair and
/// on the device pair, then eta:(1-eta) mixers between (b'1, h'1) and
/// (b'2, h'2).
pub fn apply_lossy_network(state4: &MultiModeState, eta: f64) -> Result<MultiModeState> {
    check_eta(eta)?;
    if state4.num_modes() != 4 {
        return Err(Error::ModeMismatch { left: 4, right: state4.num_modes() });
    }
    let s = re(eta.sqrt());
    let c = re((1.0 - eta).sqrt());
    let first = apply_lossless_bs(&apply_lossless_bs(state4, (0, 1))?, (2, 3))?;
    let mix1 = DMatrix::from_row_slice(2, 2, &[s, c, -c, s]);
    let mix2 = DMatrix::from_row_slice(2, 2, &[s, -c, -c, -s]);
    let second = apply_linear_transform(&first, &[0, 2], &mix1)?;
    apply_linear_transform(&second, &[1, 3], &mix2)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PreparationCheck {
    pub fidelity: f64,
    pub passed: bool,
    pub truncated_mass: f64,
    pub cutoff: usize,
}

/// Mixes two even cats of amplitude alpha/sqrt 2 on a 50:50 splitter and
/// compares with the even-cat NOON state of amplitude alpha.
pub fn verify_cat_noon_preparation(alpha: C64, policy: &CutoffPolicy) -> Result<PreparationCheck> {
    let target_src = SingleModeSpec::even_cat(alpha).realize(policy)?;
    let cutoff = target_src.cutoff();
    let target = states::assemble(&target_src, (0, 0))?;
    let half = alpha / 2f64.sqrt();
    let factor_policy = CutoffPolicy { fixed: Some(cutoff), ..*policy };
    let factor = SingleModeSpec::even_cat(half).realize(&factor_policy)?.to_state();
    let prod = fock::tensor_product(&[factor.clone(), factor])?;
    let mixed = apply_lossless_bs(&prod.state, (0, 1))?.normalize()?;
    let overlap = fock::inner_product(target.state(), &mixed)?;
    let fidelity = overlap.norm_sqr();
    Ok(PreparationCheck { fidelity, passed: fidelity > 1.0 - 1e-9, truncated_mass: prod.dropped_mass, cutoff })
}
