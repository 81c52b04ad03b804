//! The two-way communication protocol: encode, mix, detect, score.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::combinatorics::binomial;
use crate::detectors::{parity_effects, qubit_effects, DetectorKind, DetectorModel, Labeling, Party};
use crate::error::{Error, Result};
use crate::fock::{self, ModeOperator, MultiModeState};
use crate::optics::BeamSplitterModel;
use crate::states::{build_noon, phase_encode, CutoffPolicy, SingleModeSpec, SingleModeState};

const PROB_TOL: f64 = 1e-10;
const SUM_TOL: f64 = 1e-9;
const SYMMETRY_TOL: f64 = 1e-10;
const LADDER_NORM_TOL: f64 = 1e-12;
const RANK_TOL: f64 = 1e-10;
/// Smallest F - 1 reported as a violation.
pub const VIOLATION_TOL: f64 = 1e-10;

/// `P(a, b | x, y)` indexed `[x][y][a][b]`.
pub type ProbTable = [[[[f64; 2]; 2]; 2]; 2];

pub fn gyni_value(t: &ProbTable) -> f64 {
    0.25 * (t[0][0][0][0] + t[1][1][0][0] + t[0][1][1][1] + t[1][0][1][1])
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolMetadata {
    pub state: SingleModeSpec,
    pub beam_splitter: BeamSplitterModel,
    pub alice: DetectorKind,
    pub bob: DetectorKind,
    pub alice_labeling: Labeling,
    pub bob_labeling: Labeling,
    pub cutoff: usize,
    pub tail_mass: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GyniResult {
    pub table: ProbTable,
    pub j: f64,
    pub metadata: ProtocolMetadata,
}

impl GyniResult {
    pub fn p(&self, a: usize, b: usize, x: usize, y: usize) -> f64 {
        self.table[x][y][a][b]
    }

    /// max(|P(00|00) - P(00|11)|, |P(11|01) - P(11|10)|).
    pub fn symmetry_defect(&self) -> f64 {
        let t = &self.table;
        (t[0][0][0][0] - t[1][1][0][0]).abs().max((t[0][1][1][1] - t[1][0][1][1]).abs())
    }

    /// `(P(00|00), P(11|01))`, the two terms of F.
    pub fn f_terms(&self) -> (f64, f64) {
        (self.table[0][0][0][0], self.table[0][1][1][1])
    }
}

/// Output states for the four encodings of one source through one splitter.
#[derive(Clone, Debug)]
pub struct ProtocolOutputs {
    source: SingleModeState,
    beam_splitter: BeamSplitterModel,
    outputs: [[MultiModeState; 2]; 2],
}

pub fn prepare_outputs(source: &SingleModeState, bs: &BeamSplitterModel) -> Result<ProtocolOutputs> {
    let noon = build_noon(source)?;
    let out = |x: u8, y: u8| bs.apply(phase_encode(&noon, x, y).state());
    let outputs = [[out(0, 0)?, out(0, 1)?], [out(1, 0)?, out(1, 1)?]];
    Ok(ProtocolOutputs { source: source.clone(), beam_splitter: *bs, outputs })
}

impl ProtocolOutputs {
    pub fn output(&self, x: usize, y: usize) -> &MultiModeState {
        &self.outputs[x][y]
    }

    pub fn cutoff(&self) -> usize {
        self.source.cutoff()
    }

    pub fn evaluate(&self, alice: &DetectorModel, bob: &DetectorModel) -> Result<GyniResult> {
        let res = self.evaluate_unchecked(alice, bob)?;
        for (x, row) in res.table.iter().enumerate() {
            for (y, cell) in row.iter().enumerate() {
                for (a, pa) in cell.iter().enumerate() {
                    for (b, &v) in pa.iter().enumerate() {
                        if !(-PROB_TOL..=1.0 + PROB_TOL).contains(&v) {
                            return Err(Error::Invariant(format!("P({a},{b}|{x},{y}) = {v} outside [0, 1]")));
                        }
                    }
                }
                let sum: f64 = cell.iter().flatten().sum();
                if (sum - 1.0).abs() > SUM_TOL {
                    return Err(Error::Invariant(format!("probabilities for (x, y) = ({x}, {y}) sum to {sum}")));
                }
            }
        }
        Ok(res)
    }

    /// The probability table without range or normalization checks.
    pub fn evaluate_unchecked(&self, alice: &DetectorModel, bob: &DetectorModel) -> Result<GyniResult> {
        let cutoff = self.cutoff();
        for det in [alice, bob] {
            if det.cutoff() != cutoff {
                return Err(Error::CutoffMismatch { left: cutoff, right: det.cutoff() });
            }
        }
        let mut table = [[[[0.0; 2]; 2]; 2]; 2];
        for (x, row) in table.iter_mut().enumerate() {
            for (y, cell) in row.iter_mut().enumerate() {
                let state = &self.outputs[x][y];
                for (a, pa) in cell.iter_mut().enumerate() {
                    for (b, p) in pa.iter_mut().enumerate() {
                        let mut ops: Vec<Option<&ModeOperator>> = vec![None; state.num_modes()];
                        ops[0] = Some(alice.effect_for(a));
                        ops[1] = Some(bob.effect_for(b));
                        *p = fock::expectation(state, &ops)?.re;
                    }
                }
            }
        }
        let metadata = ProtocolMetadata {
            state: self.source.spec.clone(),
            beam_splitter: self.beam_splitter,
            alice: alice.kind().clone(),
            bob: bob.kind().clone(),
            alice_labeling: alice.labeling(),
            bob_labeling: bob.labeling(),
            cutoff,
            tail_mass: self.source.tail_mass(),
        };
        Ok(GyniResult { j: gyni_value(&table), table, metadata })
    }
}

pub fn run_protocol(
    source: &SingleModeState,
    bs: &BeamSplitterModel,
    alice: &DetectorModel,
    bob: &DetectorModel,
) -> Result<GyniResult> {
    prepare_outputs(source, bs)?.evaluate(alice, bob)
}

/// Labelings used with the single-photon NOON state: Alice reads the
/// photon-present (odd) effect as a = 0, Bob as b = 1.
pub fn single_photon_labelings() -> (Labeling, Labeling) {
    (Labeling::Swapped, Labeling::Standard)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessKind {
    /// Best single vector orthogonal to the even ladder family.
    RankOne,
    /// The whole orthogonal complement of the even ladder family.
    Full,
    /// Positive eigenspace of the difference of odd and even Gram forms.
    Optimal,
}

#[derive(Clone, Debug)]
pub struct WitnessConstruction {
    pub kind: WitnessKind,
    pub phi: DVector<C64>,
    /// Retained vectors proportional to a^{2k}|phi>.
    pub even_ladder: Vec<DVector<C64>>,
    /// Retained vectors proportional to a^{2k+1}|phi>.
    pub odd_ladder: Vec<DVector<C64>>,
    /// Orthonormal vectors spanning Alice's a = 1 effect.
    pub witness: Vec<DVector<C64>>,
    pub projector: DMatrix<C64>,
    pub f: f64,
    pub j: f64,
    pub violation: bool,
    /// J from running the full protocol with the constructed projector.
    pub protocol_j: f64,
    pub protocol: GyniResult,
}

impl WitnessConstruction {
    pub fn rank(&self) -> usize {
        self.witness.len()
    }

    /// Largest |<eta|a^{2k} phi>| over witness vectors and retained k, with
    /// the ladder vectors normalized.
    pub fn max_even_overlap(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for eta in &self.witness {
            for v in &self.even_ladder {
                worst = worst.max(eta.dotc(v).norm() / v.norm());
            }
        }
        worst
    }
}

/// Ladder vectors `eta~_j[n] = lambda_{n+j} 2^{-(n+j)/2} sqrt(C(n+j, j))`.
pub fn ladder_vectors(coeffs: &[C64]) -> Vec<DVector<C64>> {
    let dim = coeffs.len();
    (0..dim)
        .map(|j| {
            DVector::from_iterator(
                dim,
                (0..dim).map(|n| {
                    if n + j < dim {
                        let m = n + j;
                        coeffs[m] * 2f64.powf(-(m as f64) / 2.0) * binomial(m, j).sqrt()
                    } else {
                        C64::new(0.0, 0.0)
                    }
                }),
            )
        })
        .collect()
}

fn gram(vectors: &[DVector<C64>], dim: usize) -> DMatrix<C64> {
    let mut g = DMatrix::<C64>::zeros(dim, dim);
    for v in vectors {
        g += v * v.adjoint();
    }
    g
}

fn hermitian_eigen(m: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let h = (m + m.adjoint()).scale(0.5);
    let eig = h.symmetric_eigen();
    (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

/// Orthonormal basis of the complement of span(vectors).
fn complement_basis(vectors: &[DVector<C64>], dim: usize) -> Vec<DVector<C64>> {
    let normalized: Vec<DVector<C64>> = vectors.iter().map(|v| v.normalize()).collect();
    let (vals, vecs) = hermitian_eigen(&gram(&normalized, dim));
    (0..dim).filter(|&i| vals[i] <= RANK_TOL).map(|i| vecs.column(i).into_owned()).collect()
}

/// Builds Alice's effect from the ladder structure of `coeffs` and scores
/// it both from the closed expression for F and by running the protocol.
pub fn theorem_witness(coeffs: &[C64], kind: WitnessKind) -> Result<WitnessConstruction> {
    if coeffs.is_empty() {
        return Err(Error::Degenerate("empty coefficient vector".into()));
    }
    let norm: f64 = coeffs.iter().map(|z| z.norm_sqr()).sum();
    if (norm - 1.0).abs() > fock::NORM_TOL {
        return Err(Error::NotNormalized(norm));
    }
    let l0 = coeffs[0].norm_sqr();
    if 1.0 - l0 < 1e-12 {
        return Err(Error::Degenerate("vacuum input".into()));
    }
    let dim = coeffs.len();
    let n00 = 2.0 * (1.0 + l0);
    let n01 = 2.0 * (1.0 - l0);

    let np: f64 = coeffs.iter().enumerate().map(|(n, z)| z.norm_sqr() / 2f64.powi(n as i32)).sum();
    let phi = DVector::from_iterator(
        dim,
        coeffs.iter().enumerate().map(|(n, z)| z * 2f64.powf(-(n as f64) / 2.0) / np.sqrt()),
    );

    let ladder = ladder_vectors(coeffs);
    let keep = |j: usize| ladder[j].norm() >= LADDER_NORM_TOL;
    let even_ladder: Vec<DVector<C64>> = (0..dim).step_by(2).filter(|&j| keep(j)).map(|j| ladder[j].clone()).collect();
    let odd_ladder: Vec<DVector<C64>> = (1..dim).step_by(2).filter(|&j| keep(j)).map(|j| ladder[j].clone()).collect();
    let g_odd = gram(&odd_ladder, dim);
    let g_even = gram(&even_ladder, dim);

    let (mut witness, mut f) = match kind {
        WitnessKind::RankOne | WitnessKind::Full => {
            let basis = complement_basis(&even_ladder, dim);
            if basis.is_empty() {
                (Vec::new(), 1.0)
            } else {
                let c = DMatrix::from_columns(&basis);
                let q = c.adjoint() * &g_odd * &c;
                if kind == WitnessKind::Full {
                    let tr: f64 = (0..q.nrows()).map(|i| q[(i, i)].re).sum();
                    (basis, 1.0 + 4.0 / n01 * tr)
                } else {
                    let (vals, vecs) = hermitian_eigen(&q);
                    let (top, &val) =
                        vals.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).expect("non-empty complement");
                    let eta = (&c * vecs.column(top)).normalize();
                    (vec![eta], 1.0 + 4.0 / n01 * val)
                }
            }
        }
        WitnessKind::Optimal => {
            let d = g_odd.scale(4.0 / n01) - g_even.scale(4.0 / n00);
            let (vals, vecs) = hermitian_eigen(&d);
            let pos: Vec<usize> = (0..dim).filter(|&i| vals[i] > VIOLATION_TOL).collect();
            let gain: f64 = pos.iter().map(|&i| vals[i]).sum();
            (pos.iter().map(|&i| vecs.column(i).into_owned()).collect(), 1.0 + gain)
        }
    };
    let violation = f - 1.0 > VIOLATION_TOL;
    if !violation {
        witness.clear();
        f = 1.0;
    }

    let projector = if witness.is_empty() {
        DMatrix::zeros(dim, dim)
    } else {
        let w = DMatrix::from_columns(&witness);
        let p = &w * w.adjoint();
        (&p + p.adjoint()).scale(0.5)
    };

    // cross-check with the protocol engine
    let source = SingleModeSpec::FiniteSuperposition { coeffs: coeffs.to_vec() }.realize(&CutoffPolicy::fixed(dim - 1))?;
    let pi1 = ModeOperator::hermitian(projector.clone())?;
    let pi0 = ModeOperator::identity(dim - 1).difference(&pi1)?;
    let alice = DetectorModel::from_effects(DetectorKind::Custom { name: "witness".into() }, [pi0, pi1], Labeling::Standard)?;
    let protocol = run_protocol(&source, &BeamSplitterModel::Lossless5050, &alice, &parity_effects(dim - 1))?;
    if protocol.symmetry_defect() > SYMMETRY_TOL {
        return Err(Error::Invariant(format!("protocol symmetry broken by {:.3e}", protocol.symmetry_defect())));
    }
    let (p00, p11) = protocol.f_terms();
    if (p00 + p11 - f).abs() > 1e-9 {
        return Err(Error::Invariant(format!("F = {f} but the protocol gives {}", p00 + p11)));
    }

    Ok(WitnessConstruction {
        kind,
        phi,
        even_ladder,
        odd_ladder,
        witness,
        projector,
        f,
        j: f / 2.0,
        violation,
        protocol_j: protocol.j,
        protocol,
    })
}

/// J for the photon-added coherent NOON state under the explicit
/// two-vector measurement, `(1 + e^{-x}/(1 + x)) / 2`.
pub fn photon_added_reference_j(alpha_sq: f64) -> f64 {
    0.5 * (1.0 + (-alpha_sq).exp() / (1.0 + alpha_sq))
}

/// J with presence detectors on sqrt(l)|0> + e^{i phi} sqrt(1-l)|1>.
pub fn qubit_j1(lambda: f64) -> f64 {
    1.0 / (1.0 + lambda)
}

/// J with qubit projectors at polar angles theta (Alice) and theta' (Bob).
pub fn qubit_j2(lambda: f64, theta: f64, theta_p: f64) -> f64 {
    let (s, c) = ((theta / 2.0).sin(), (theta / 2.0).cos());
    (theta_p / 2.0).cos().powi(2) / (1.0 + lambda)
        * (lambda * s * s + c * c + theta.sin() * (lambda * (1.0 - lambda) / 2.0).sqrt())
}

#[derive(Clone, Debug)]
pub struct QubitScan {
    pub lambda: f64,
    pub phi: f64,
    pub thetas: Vec<f64>,
    pub theta_primes: Vec<f64>,
    /// Row-major over (theta, theta').
    pub closed_form: Vec<f64>,
    pub protocol: Vec<f64>,
    pub j1: f64,
    pub j1_protocol: f64,
    pub max: f64,
    pub argmax: (f64, f64),
    pub max_disagreement: f64,
}

impl QubitScan {
    pub fn at(&self, i: usize, k: usize) -> (f64, f64) {
        let idx = i * self.theta_primes.len() + k;
        (self.closed_form[idx], self.protocol[idx])
    }
}

/// Scans J over a uniform (theta, theta') grid on [0, pi]^2. Alice's qubit
/// phase is phi + pi, Bob's is phi.
pub fn qubit_scan(lambda: f64, phi: f64, n_theta: usize, n_theta_p: usize) -> Result<QubitScan> {
    if !(0.0..1.0).contains(&lambda) {
        return Err(Error::invalid("lambda", lambda, "must lie in [0, 1)"));
    }
    if n_theta < 2 || n_theta_p < 2 {
        return Err(Error::invalid("grid", n_theta.min(n_theta_p) as f64, "at least two points per axis"));
    }
    let pi = std::f64::consts::PI;
    let grid = |n: usize| -> Vec<f64> { (0..n).map(|i| pi * i as f64 / (n - 1) as f64).collect() };
    let thetas = grid(n_theta);
    let theta_primes = grid(n_theta_p);

    let coeffs = vec![C64::new(lambda.sqrt(), 0.0), C64::from_polar((1.0 - lambda).sqrt(), phi)];
    let source = SingleModeSpec::FiniteSuperposition { coeffs }.realize(&CutoffPolicy::fixed(1))?;
    let outputs = prepare_outputs(&source, &BeamSplitterModel::Lossless5050)?;
    let alices: Vec<DetectorModel> =
        thetas.iter().map(|&t| qubit_effects(1, t, phi + pi, Party::Alice)).collect::<Result<_>>()?;
    let bobs: Vec<DetectorModel> =
        theta_primes.iter().map(|&t| qubit_effects(1, t, phi, Party::Bob)).collect::<Result<_>>()?;

    let mut closed_form = Vec::with_capacity(n_theta * n_theta_p);
    let mut protocol = Vec::with_capacity(n_theta * n_theta_p);
    let mut max = f64::NEG_INFINITY;
    let mut argmax = (0.0, 0.0);
    let mut max_disagreement: f64 = 0.0;
    for (i, &t) in thetas.iter().enumerate() {
        for (k, &tp) in theta_primes.iter().enumerate() {
            let c = qubit_j2(lambda, t, tp);
            let p = outputs.evaluate(&alices[i], &bobs[k])?.j;
            max_disagreement = max_disagreement.max((c - p).abs());
            if p > max {
                max = p;
                argmax = (t, tp);
            }
            closed_form.push(c);
            protocol.push(p);
        }
    }
    let presence_a = crate::detectors::presence_effects(1, Party::Alice);
    let presence_b = crate::detectors::presence_effects(1, Party::Bob);
    let j1_protocol = outputs.evaluate(&presence_a, &presence_b)?.j;
    Ok(QubitScan {
        lambda,
        phi,
        thetas,
        theta_primes,
        closed_form,
        protocol,
        j1: qubit_j1(lambda),
        j1_protocol,
        max,
        argmax,
        max_disagreement,
    })
}
