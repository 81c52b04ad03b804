//! Property suites across all modules, reported as a pass/fail matrix.

use std::f64::consts::TAU;
use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fockcomm::bell::{bell_scan, bell_test, correlators, BellSettings};
use fockcomm::detectors::{
    parity_effects, sva_click_probabilities, sva_click_probabilities_literal, sva_effects, tke_effects, Grouping,
};
use fockcomm::fock::{self, apply_ladder, expectation, Ladder, ModeOperator, MultiModeState, DEFAULT_PRUNE};
use fockcomm::gyni::{prepare_outputs, run_protocol, single_photon_labelings, theorem_witness, WitnessKind};
use fockcomm::optics::{
    apply_lossless_bs, apply_lossy_bs, apply_lossy_lambda, apply_lossy_network, lossless_5050_matrix, lossy_lambda,
    unitarity_defect, BeamSplitterModel,
};
use fockcomm::states::{
    average_photon_number, build_noon, phase_encode, CutoffPolicy, SingleModeSpec, SingleModeState,
};

use crate::error::{CliError, CliResult};

pub const SUITES: [&str; 9] = ["fock", "states", "optics", "unitarity", "detectors", "sva", "gyni", "bell", "fig1"];

/// Builds `Lambda(eta)`; replaceable so a broken matrix can be injected.
pub type LambdaFn = fn(f64) -> fockcomm::Result<DMatrix<C64>>;

#[derive(Clone, Debug)]
pub struct ValidateOptions {
    pub only: Vec<String>,
    pub seed: u64,
    pub samples: usize,
    pub lambda: LambdaFn,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        Self { only: Vec::new(), seed: 0, samples: 1_000_000, lambda: lossy_lambda }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub suite: &'static str,
    pub check: String,
    pub pass: bool,
    pub observed: f64,
    /// How `observed` is judged, e.g. `< 1e-10`.
    pub criterion: String,
}

struct Suite {
    name: &'static str,
    out: Vec<CheckResult>,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Self { name, out: Vec::new() }
    }

    fn below(&mut self, check: &str, observed: f64, tol: f64) {
        self.push(check, observed <= tol, observed, format!("<= {tol:e}"));
    }

    fn above(&mut self, check: &str, observed: f64, bound: f64) {
        self.push(check, observed > bound, observed, format!("> {bound}"));
    }

    fn push(&mut self, check: &str, pass: bool, observed: f64, criterion: String) {
        self.out.push(CheckResult { suite: self.name, check: check.to_string(), pass, observed, criterion });
    }
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn realize(spec: SingleModeSpec) -> fockcomm::Result<SingleModeState> {
    spec.realize(&CutoffPolicy::default())
}

fn random_state(rng: &mut ChaCha8Rng, modes: usize, cutoff: usize) -> fockcomm::Result<MultiModeState> {
    let mut entries = Vec::new();
    for _ in 0..rng.random_range(1..=6) {
        let mut occ = vec![0u16; modes];
        for _ in 0..rng.random_range(0..=cutoff) {
            occ[rng.random_range(0..modes)] += 1;
        }
        entries.push((occ, C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)));
    }
    MultiModeState::from_amplitudes(modes, cutoff, entries)?.normalize()
}

fn random_operator(rng: &mut ChaCha8Rng, cutoff: usize) -> ModeOperator {
    let d = cutoff + 1;
    let m = DMatrix::from_fn(d, d, |_, _| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
    ModeOperator::new(m).expect("square")
}

fn amplitude_error(a: &MultiModeState, b: &MultiModeState) -> f64 {
    let mut d: f64 = 0.0;
    for (k, v) in a.iter() {
        d = d.max((b.amplitude(k) - v).norm());
    }
    for (k, v) in b.iter() {
        d = d.max((a.amplitude(k) - v).norm());
    }
    d
}

fn totals(s: &MultiModeState) -> Vec<usize> {
    s.iter().map(|(k, _)| k.iter().map(|&n| n as usize).sum()).collect()
}

fn fock_suite(rng: &mut ChaCha8Rng) -> fockcomm::Result<Suite> {
    let mut s = Suite::new("fock");
    let mut lin: f64 = 0.0;
    for _ in 0..20 {
        let st = random_state(rng, 2, 3)?;
        let [a, b, c] = [0, 1, 2].map(|_| random_operator(rng, 3));
        let (x, y) = (rng.random::<f64>() * 4.0 - 2.0, rng.random::<f64>() * 4.0 - 2.0);
        let mix = a.scaled(x).sum(&b.scaled(y))?;
        let lhs = expectation(&st, &[Some(&mix), Some(&c)])?;
        let rhs = expectation(&st, &[Some(&a), Some(&c)])? * x + expectation(&st, &[Some(&b), Some(&c)])? * y;
        lin = lin.max((lhs - rhs).norm());
    }
    s.below("expectation linearity", lin, 1e-10);

    let mut ladder: f64 = 0.0;
    let n = ModeOperator::number(5);
    for _ in 0..50 {
        let st = random_state(rng, 2, 5)?;
        let mean = expectation(&st, &[Some(&n), None])?.re;
        let lowered = apply_ladder(&st, 0, Ladder::Annihilate, 1)?;
        ladder = ladder.max((mean - lowered.state.norm_sqr()).abs());
    }
    s.below("number vs annihilated norm", ladder, 1e-10);

    let mut prune: f64 = 0.0;
    for _ in 0..20 {
        let st = random_state(rng, 2, 4)?;
        let tiny = MultiModeState::from_amplitudes(2, 4, [([1u16, 1], re(3e-16)), ([0, 4], re(5e-17))])?;
        let noisy = st.add_scaled(re(1.0), &tiny)?;
        let (pruned, _) = noisy.prune(DEFAULT_PRUNE);
        let (a, b) = (random_operator(rng, 4), random_operator(rng, 4));
        let d = expectation(&noisy, &[Some(&a), Some(&b)])? - expectation(&pruned, &[Some(&a), Some(&b)])?;
        prune = prune.max(d.norm());
    }
    s.below("pruning safety", prune, 1e-9);
    Ok(s)
}

fn sources(rng: &mut ChaCha8Rng) -> fockcomm::Result<Vec<SingleModeState>> {
    let mut out = Vec::new();
    for _ in 0..6 {
        let alpha = C64::from_polar(0.1 + 1.5 * rng.random::<f64>(), TAU * rng.random::<f64>());
        out.push(realize(SingleModeSpec::coherent(alpha))?);
        out.push(realize(SingleModeSpec::even_cat(alpha))?);
        out.push(realize(SingleModeSpec::odd_cat(alpha))?);
        out.push(realize(SingleModeSpec::PhotonAddedCoherent { alpha })?);
        out.push(realize(SingleModeSpec::SqueezedVacuum { r: 0.1 + rng.random::<f64>(), theta: rng.random::<f64>() })?);
    }
    out.push(realize(SingleModeSpec::Fock { n: 1 })?);
    out.push(realize(SingleModeSpec::Fock { n: 3 })?);
    Ok(out)
}

fn states_suite(rng: &mut ChaCha8Rng) -> fockcomm::Result<Suite> {
    let mut s = Suite::new("states");
    let mut joint: f64 = 0.0;
    let mut involution: f64 = 0.0;
    let mut scalar: f64 = 0.0;
    let mut parity: f64 = 0.0;
    for src in sources(rng)? {
        let noon = build_noon(&src)?;
        let n_xi = src.mean_photon_number();
        for (x, y) in [(0u8, 0u8), (0, 1), (1, 0), (1, 1)] {
            let enc = phase_encode(&noon, x, y);
            for (occ, amp) in enc.state().iter() {
                if occ[0] > 0 && occ[1] > 0 {
                    joint = joint.max(amp.norm());
                }
            }
            involution = involution.max(amplitude_error(noon.state(), phase_encode(&enc, x, y).state()));
            let ratio = average_photon_number(&enc)? / n_xi;
            scalar = scalar.max((ratio * enc.encoded_normalization() / 2.0 - 1.0).abs());
        }
        let odd = match src.spec {
            SingleModeSpec::Cat { parity: fockcomm::states::Parity::Odd, .. } => Some(true),
            SingleModeSpec::Cat { .. } | SingleModeSpec::SqueezedVacuum { .. } => Some(false),
            _ => None,
        };
        if let Some(odd) = odd {
            for (n, c) in src.coeffs().iter().enumerate() {
                if (n % 2 == 1) != odd {
                    parity = parity.max(c.norm());
                }
            }
        }
    }
    s.below("NOON support", joint, 0.0);
    s.below("encoding involution", involution, 1e-12);
    s.below("mean photon scalar multiple", scalar, 1e-9);
    s.below("parity purity", parity, 0.0);
    Ok(s)
}

fn optics_suite(rng: &mut ChaCha8Rng) -> fockcomm::Result<Suite> {
    let mut s = Suite::new("optics");
    let mut inv: f64 = 0.0;
    let mut norm: f64 = 0.0;
    let mut photons = 0.0;
    let mut parity = 0.0;
    for _ in 0..20 {
        let st = random_state(rng, 2, 6)?;
        let once = apply_lossless_bs(&st, (0, 1))?;
        inv = inv.max(amplitude_error(&st, &apply_lossless_bs(&once, (0, 1))?));
        let eta = rng.random::<f64>();
        let lossy = apply_lossy_bs(&st, eta)?;
        norm = norm.max((once.norm_sqr() - 1.0).abs()).max((lossy.norm_sqr() - 1.0).abs());
        let input = totals(&st);
        for out in [&once, &lossy] {
            if totals(out).iter().any(|t| !input.contains(t)) {
                photons = 1.0;
            }
        }
        let even: Vec<(Vec<u16>, C64)> =
            st.iter().filter(|(k, _)| (k[0] + k[1]) % 2 == 0).map(|(k, v)| (k.to_vec(), *v)).collect();
        if !even.is_empty() {
            let e = MultiModeState::from_amplitudes(2, 6, even)?.normalize()?;
            for out in [apply_lossless_bs(&e, (0, 1))?, apply_lossy_bs(&e, eta)?] {
                if totals(&out).iter().any(|t| t % 2 == 1) {
                    parity = 1.0;
                }
            }
        }
    }
    let mut net: f64 = 0.0;
    for _ in 0..20 {
        let st = random_state(rng, 4, 4)?;
        let eta = rng.random::<f64>();
        net = net.max(amplitude_error(&apply_lossy_lambda(&st, eta)?, &apply_lossy_network(&st, eta)?));
    }
    s.below("lossless BS involution", inv, 1e-10);
    s.below("norm conservation", norm, 1e-10);
    s.below("photon number conservation", photons, 0.0);
    s.below("network decomposition", net, 1e-10);
    s.below("parity conservation", parity, 0.0);
    Ok(s)
}

fn unitarity_suite(lambda: LambdaFn) -> fockcomm::Result<Suite> {
    let mut s = Suite::new("unitarity");
    let mut d: f64 = 0.0;
    for i in 0..=20 {
        d = d.max(unitarity_defect(&lambda(i as f64 / 20.0)?));
    }
    s.below("Lambda(eta) unitary", d, 1e-12);
    s.below("50:50 unitary", unitarity_defect(&lossless_5050_matrix()), 1e-12);
    Ok(s)
}

fn tke_single_photon(kappa: f64, saturation: usize) -> fockcomm::Result<f64> {
    let src = realize(SingleModeSpec::Fock { n: 1 })?;
    let (n, g) = if saturation.is_multiple_of(2) { (saturation / 2, Grouping::Even) } else { (saturation.div_ceil(2), Grouping::Odd) };
    let (la, lb) = single_photon_labelings();
    let a = tke_effects(1, kappa, n, g)?.with_labeling(la);
    let b = tke_effects(1, kappa, n, g)?.with_labeling(lb);
    Ok(run_protocol(&src, &BeamSplitterModel::Lossless5050, &a, &b)?.j)
}

fn detectors_suite() -> fockcomm::Result<Suite> {
    let mut s = Suite::new("detectors");
    let mut complete: f64 = 0.0;
    for cutoff in [1, 5, 20] {
        for kappa in [0.0, 0.4, 1.0] {
            for n in [1, 3, 10] {
                for g in [Grouping::Even, Grouping::Odd] {
                    complete = complete.max(tke_effects(cutoff, kappa, n, g)?.completeness_defect());
                }
                complete = complete.max(sva_effects(cutoff, 4 * n, kappa, 0.01)?.completeness_defect());
            }
        }
    }
    s.below("completeness", complete, 1e-10);
    for saturation in 1..=6 {
        let mut dev: f64 = 0.0;
        for k in 0..=10 {
            let kappa = k as f64 / 10.0;
            dev = dev.max((tke_single_photon(kappa, saturation)? - kappa).abs());
        }
        s.below(&format!("TKE single photon J = kappa, saturation {saturation}"), dev, 1e-9);
    }
    let mut routes: f64 = 0.0;
    for bins in [2, 5, 12] {
        for n in 0..8 {
            let a = sva_click_probabilities(bins, 0.6, 0.02, n);
            let b = sva_click_probabilities_literal(bins, 0.6, 0.02, n);
            routes = routes.max(a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max));
        }
    }
    s.below("SVA recursion vs alternating sum", routes, 1e-9);
    let conc = (0..=3).map(|n| sva_click_probabilities(64, 1.0, 0.0, n)[n]).fold(1.0, f64::min);
    s.above("SVA N=64 resolves n <= 3", conc, 0.9);
    Ok(s)
}

/// Largest |z| of the even-click probability against sampled click counts.
pub fn sva_monte_carlo(rng: &mut ChaCha8Rng, samples: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for bins in [4usize, 8] {
        for kappa in [0.3, 0.7] {
            for nu in [0.0, 0.05] {
                let dark = 1.0 - f64::exp(-nu);
                for n in 0..=3 {
                    let p: f64 = sva_click_probabilities(bins, kappa, nu, n).iter().step_by(2).sum();
                    let mut hit = vec![false; bins];
                    let mut even = 0usize;
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
                        if hit.iter().filter(|&&h| h).count() % 2 == 0 {
                            even += 1;
                        }
                    }
                    let q = even as f64 / samples as f64;
                    let sigma = (p * (1.0 - p) / samples as f64).sqrt();
                    let z = if sigma > 0.0 {
                        (q - p).abs() / sigma
                    } else if q == p {
                        0.0
                    } else {
                        f64::INFINITY
                    };
                    worst = worst.max(z);
                }
            }
        }
    }
    worst
}

fn sva_suite(rng: &mut ChaCha8Rng, samples: usize) -> Suite {
    let mut s = Suite::new("sva");
    s.below("Monte Carlo oracle |z|", sva_monte_carlo(rng, samples), 3.0);
    s
}

fn parity_j(spec: SingleModeSpec, bs: BeamSplitterModel, odd: bool) -> fockcomm::Result<f64> {
    let src = realize(spec)?;
    let mut a = parity_effects(src.cutoff());
    let mut b = a.clone();
    if odd {
        let (la, lb) = single_photon_labelings();
        a = a.with_labeling(la);
        b = b.with_labeling(lb);
    }
    Ok(run_protocol(&src, &bs, &a, &b)?.j)
}

fn gyni_suite(rng: &mut ChaCha8Rng) -> fockcomm::Result<Suite> {
    let mut s = Suite::new("gyni");
    let mut min_j = f64::INFINITY;
    let mut count = 0;
    while count < 200 {
        let len = rng.random_range(2..=7);
        let c: Vec<C64> = (0..len).map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
        let n: f64 = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let c: Vec<C64> = c.iter().map(|z| z / n).collect();
        if 1.0 - c[0].norm_sqr() < 1e-6 {
            continue;
        }
        let w = theorem_witness(&c, WitnessKind::RankOne)?;
        min_j = min_j.min(w.j.min(w.protocol_j));
        count += 1;
    }
    s.above("random finite states J", min_j, 0.5 + 1e-12);
    let mut coh: f64 = 0.0;
    for m in [0.1, 0.5, 1.0, 2.0] {
        for p in [0.0, 1.3, 4.0] {
            let src = realize(SingleModeSpec::coherent(C64::from_polar(m, p)))?;
            let w = theorem_witness(src.coeffs(), WitnessKind::RankOne)?;
            coh = coh.max((w.j - 0.5).abs()).max((w.protocol_j - 0.5).abs());
        }
    }
    s.below("coherent |J - 1/2|", coh, 1e-9);
    let mut maximal: f64 = 0.0;
    for i in 0..=10 {
        let r = 0.2 + 0.1 * i as f64;
        let j = parity_j(SingleModeSpec::SqueezedVacuum { r, theta: 0.0 }, BeamSplitterModel::Lossless5050, false)?;
        maximal = maximal.max((j - 1.0).abs());
    }
    for x in [0.2, 1.0, 4.0] {
        let a = re(f64::sqrt(x));
        maximal = maximal.max((parity_j(SingleModeSpec::even_cat(a), BeamSplitterModel::Lossless5050, false)? - 1.0).abs());
        maximal = maximal.max((parity_j(SingleModeSpec::odd_cat(a), BeamSplitterModel::Lossless5050, true)? - 1.0).abs());
    }
    s.below("squeezed and cat NOON |J - 1|", maximal, 1e-9);
    let mut leak: f64 = 0.0;
    for x in [0.2, 1.0, 4.0] {
        let outputs = prepare_outputs(&realize(SingleModeSpec::even_cat(re(f64::sqrt(x))))?, &BeamSplitterModel::Lossless5050)?;
        for xx in 0..2 {
            for yy in 0..2 {
                let out = outputs.output(xx, yy);
                let wrong = |n: usize| n % 2 != (xx ^ yy);
                leak = leak.max(out.mass_where(0, wrong)).max(out.mass_where(1, wrong));
            }
        }
    }
    s.below("BS output parity support", leak.abs(), 0.0);
    s.above(
        "lossy even cat J at eta = 0.3, |a|^2 = 0.2",
        parity_j(SingleModeSpec::even_cat(re(f64::sqrt(0.2))), BeamSplitterModel::lossy(0.3)?, false)?,
        0.5,
    );
    let single = realize(SingleModeSpec::Fock { n: 1 })?;
    let cat = realize(SingleModeSpec::even_cat(re(f64::sqrt(0.2))))?;
    let mut gap = f64::NEG_INFINITY;
    for k in 0..=20 {
        let kappa = 0.4 + 0.01 * k as f64;
        let (la, lb) = single_photon_labelings();
        let d1 = sva_effects(1, 8, kappa, 1e-4)?;
        let j1 = run_protocol(&single, &BeamSplitterModel::Lossless5050, &d1.clone().with_labeling(la), &d1.with_labeling(lb))?.j;
        let dc = sva_effects(cat.cutoff(), 8, kappa, 1e-4)?;
        let jc = run_protocol(&cat, &BeamSplitterModel::Lossless5050, &dc, &dc)?.j;
        gap = gap.max(jc - j1);
    }
    s.above("SVA N=8: max_kappa J(cat) - J(single photon)", gap, 0.0);
    Ok(s)
}

fn overlap(a: C64, b: C64) -> C64 {
    (-0.5 * a.norm_sqr() - 0.5 * b.norm_sqr() + a.conj() * b).exp()
}

fn bell_suite(rng: &mut ChaCha8Rng) -> fockcomm::Result<Suite> {
    let mut s = Suite::new("bell");
    let mut max_i = f64::NEG_INFINITY;
    for _ in 0..500 {
        let mut local = || -> fockcomm::Result<MultiModeState> {
            let alpha = C64::from_polar(1.2 * rng.random::<f64>(), TAU * rng.random::<f64>());
            let spec = match rng.random_range(0..3) {
                0 => SingleModeSpec::coherent(alpha),
                1 => SingleModeSpec::even_cat(alpha),
                _ => SingleModeSpec::Fock { n: rng.random_range(0..3) },
            };
            let st = realize(spec)?;
            fock::single_mode_from_coeffs(st.coeffs(), 24)
        };
        let (a, b) = (local()?, local()?);
        let prod = fock::tensor_product(&[a, b])?;
        let settings = BellSettings::new(rng.random::<f64>(), TAU * rng.random::<f64>(), TAU * rng.random::<f64>())?;
        max_i = max_i.max(bell_test(&prod.state, &settings)?.value);
    }
    s.below("product states max I", max_i, 1.0 + 1e-9);

    let mut cat_dev: f64 = 0.0;
    let mut added_dev: f64 = 0.0;
    for _ in 0..10 {
        let x = 0.1 + 1.9 * rng.random::<f64>();
        let settings = BellSettings::new(0.05 + 0.5 * rng.random::<f64>(), TAU * rng.random::<f64>(), TAU * rng.random::<f64>())?;
        let cat = build_noon(&realize(SingleModeSpec::even_cat(re(x.sqrt())))?)?;
        let xi = correlators(cat.state(), &settings)?;
        let n = 1.0 / (1.0 + (-x).exp()).powi(2);
        cat_dev = cat_dev.max((xi[0] - n * (6.0 * (-x).exp() - (1.0 + (-2.0 * x).exp()))).abs());

        let alpha = C64::from_polar(x.sqrt(), TAU * rng.random::<f64>());
        let added = build_noon(&realize(SingleModeSpec::PhotonAddedCoherent { alpha })?)?;
        let xi = correlators(added.state(), &settings)?;
        let single_sided = |b: C64| {
            let r2 = b.norm_sqr();
            (-(x + r2)).exp() / (1.0 + x) * r2 * (2.0 * (alpha.conj() * b).re).exp() - (-r2).exp()
        };
        added_dev = added_dev
            .max((xi[0] + 1.0).abs())
            .max((xi[1] - single_sided(settings.beta2())).abs())
            .max((xi[2] - single_sided(settings.beta1())).abs());
        // full M1 M1 against coherent-state overlaps
        let proj = |b: C64| b.conj() * overlap(b, alpha) / (1.0 + x).sqrt();
        let (b1, b2) = (settings.beta1(), settings.beta2());
        let zero = C64::new(0.0, 0.0);
        let m_xx = |b: C64| 2.0 * proj(b).norm_sqr() - 1.0;
        let m_00 = |b: C64| 2.0 * overlap(zero, b).norm_sqr() - 1.0;
        let m_x0 = |b: C64| 2.0 * proj(b).conj() * overlap(b, zero);
        let m_0x = |b: C64| 2.0 * overlap(zero, b) * proj(b);
        let exact = 0.5 * (m_xx(b1) * m_00(b2) + m_00(b1) * m_xx(b2) + (m_x0(b1) * m_0x(b2) + m_0x(b1) * m_x0(b2)).re);
        added_dev = added_dev.max((xi[3] - exact).abs());
    }
    s.below("even cat <M0 M0> closed form", cat_dev, 1e-8);
    s.below("photon-added correlators vs closed forms", added_dev, 1e-8);
    Ok(s)
}

fn noon(spec: SingleModeSpec) -> fockcomm::Result<MultiModeState> {
    Ok(build_noon(&realize(spec)?)?.state().clone())
}

fn fig1_suite() -> fockcomm::Result<Suite> {
    let mut s = Suite::new("fig1");
    let r = 0.1;
    let n = 64;
    let single = bell_scan(&noon(SingleModeSpec::Fock { n: 1 })?, r, n)?;
    let f = single.violating_fraction(1e-9);
    s.push("(a) single photon violating fraction in (0, 1)", f > 0.0 && f < 1.0, f, "in (0, 1)".into());
    let cat = bell_scan(&noon(SingleModeSpec::even_cat(re(0.8)))?, r, n)?;
    s.above("(b) even cat min I over grid", cat.min, 1.0);
    let figure = bell_scan(&noon(SingleModeSpec::coherent(re(0.1)))?, r, n)?;
    s.push(
        "(c) coherent max I at r = 0.1, |a'|^2 = 0.01",
        figure.max > 0.98 && figure.max <= 1.0,
        figure.max,
        "in (0.98, 1]".into(),
    );
    let mut wide = f64::NEG_INFINITY;
    for rr in [0.1, 0.3, 0.5, 1.0] {
        for x in [0.01, 0.1, 0.3, 1.0, 2.0] {
            wide = wide.max(bell_scan(&noon(SingleModeSpec::coherent(re(f64::sqrt(x))))?, rr, 16)?.max);
        }
    }
    s.below("(c) coherent max I over (r, |a'|^2) grid", wide, 1.0);
    let mut added = f64::INFINITY;
    for x in [0.25, 1.0, 2.0] {
        added = added.min(bell_scan(&noon(SingleModeSpec::PhotonAddedCoherent { alpha: re(f64::sqrt(x)) })?, r, 32)?.min);
    }
    s.above("(d) photon-added min I over grid", added, 1.0);
    Ok(s)
}

pub fn validate(opts: &ValidateOptions) -> CliResult<Vec<CheckResult>> {
    for name in &opts.only {
        if !SUITES.contains(&name.as_str()) {
            return Err(CliError::config("only", format!("unknown suite `{name}`; known: {}", SUITES.join(", "))));
        }
    }
    let selected = |name: &str| opts.only.is_empty() || opts.only.iter().any(|o| o == name);
    let mut out = Vec::new();
    for (i, name) in SUITES.iter().enumerate() {
        if !selected(name) {
            continue;
        }
        // one stream per suite so a filter does not change the others
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(i as u64));
        let suite = match *name {
            "fock" => fock_suite(&mut rng),
            "states" => states_suite(&mut rng),
            "optics" => optics_suite(&mut rng),
            "unitarity" => unitarity_suite(opts.lambda),
            "detectors" => detectors_suite(),
            "sva" => Ok(sva_suite(&mut rng, opts.samples)),
            "gyni" => gyni_suite(&mut rng),
            "bell" => bell_suite(&mut rng),
            "fig1" => fig1_suite(),
            _ => unreachable!(),
        };
        match suite {
            Ok(s) => out.extend(s.out),
            Err(e) => out.push(CheckResult {
                suite: SUITES[i],
                check: format!("suite error: {e}"),
                pass: false,
                observed: f64::NAN,
                criterion: "no error".into(),
            }),
        }
    }
    Ok(out)
}

pub fn print_matrix(results: &[CheckResult], w: &mut impl Write) -> std::io::Result<()> {
    let width = results.iter().map(|r| r.check.len()).max().unwrap_or(5).max(5);
    writeln!(w, "{:<10} {:<width$} {:<6} {:>14}  criterion", "suite", "check", "result", "observed")?;
    for r in results {
        writeln!(
            w,
            "{:<10} {:<width$} {:<6} {:>14.6e}  {}",
            r.suite,
            r.check,
            if r.pass { "PASS" } else { "FAIL" },
            r.observed,
            r.criterion
        )?;
    }
    let failed = results.iter().filter(|r| !r.pass).count();
    writeln!(w, "{} checks, {} passed, {failed} failed", results.len(), results.len() - failed)
}
