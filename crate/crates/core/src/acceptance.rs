//! Built-in acceptance suite: twelve numbered criteria, each returning a
//! pass/fail outcome with a one-line summary of the measured quantities.

use std::fmt;
use std::time::Instant;

use once_cell::sync::OnceCell;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::elliptic::{limit_variance_src, solve_exact, solve_homogenized, SourceTerm};
use crate::error::{Error, Result};
use crate::harness::{
    amplification_from_samples, collect_samples, mean_square_sup, summarize, AmplificationReport, EnsembleSamples, ExperimentPlan,
    GaussianityStatus, SchemeSummary,
};
use crate::kernels::{covariance_lrc, covariance_src, lrc_cell_pair, lrc_integral, sigma_h, sup_gap, KernelContext, KernelId};
use crate::quadrature::{adaptive, gauss_legendre, gauss_legendre_integrate};
use crate::random_media::{correlation_facts, empirical_oscillatory_bound, MediumModel, MediumSampler, MediumSpec};
use crate::schemes::{assemble_b, error_norms, solve, SchemeConfig, SchemeKind};
use crate::stats::mean;

pub const CRITERIA: [(u8, &str); 12] = [
    (1, "exactness and scheme coincidence"),
    (2, "MsFEM super-convergence"),
    (3, "MsFEM error bounds"),
    (4, "analytic SRC covariance value"),
    (5, "SRC corrector test for MsFEM"),
    (6, "discrete kernel convergence"),
    (7, "HMM variance amplification"),
    (8, "LRC: no amplification for HMM"),
    (9, "hybrid corrector test"),
    (10, "epsilon rate fits"),
    (11, "oscillatory integral bound"),
    (12, "LRC quadrature oracle and fBm identity"),
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "criterion {:>2} [{tag}] {}: {} ({:.1}s)", self.id, self.name, self.detail, self.seconds)
    }
}

const SRC_NU: f64 = 0.25;
const LRC_NU: f64 = 0.3;
const LRC_ALPHA: f64 = 0.5;
const EPS_MAIN: f64 = 1.0 / 1024.0;
const N_MAIN: usize = 16;
const M_MAIN: usize = 5000;
const M_RATES: usize = 2000;
const EXACT_REALIZATIONS: u64 = 100;
const BOUND_REALIZATIONS: usize = 10_000;

fn default_probes() -> Vec<f64> {
    (1..=9).map(|i| i as f64 / 10.0).collect()
}

fn medium(model: MediumModel, epsilon: f64, seed: u64) -> MediumSpec {
    let (nu, alpha) = if model.is_long_range() { (LRC_NU, LRC_ALPHA) } else { (SRC_NU, 1.0) };
    MediumSpec { model, a_star: 1.0, nu, alpha, epsilon, micro_points_per_eps: 16, seed }
}

fn outcome(id: u8, passed: bool, detail: String, started: Instant) -> CriterionOutcome {
    let name = CRITERIA.iter().find(|c| c.0 == id).map_or("", |c| c.1).to_string();
    CriterionOutcome { id, name, passed, detail, seconds: started.elapsed().as_secs_f64() }
}

/// Lazily built ensembles shared by several criteria.
pub struct Acceptance {
    seed: u64,
    src: OnceCell<(EnsembleSamples, MediumSpec)>,
    lrc: OnceCell<(EnsembleSamples, MediumSpec)>,
}

/// The SRC ensemble lists MsFEM, HMM(δ = h/4) and Hybrid(M = 4) in this order.
const SRC_MSFEM: usize = 0;
const SRC_HMM: usize = 1;
const SRC_HYBRID: usize = 2;

impl Acceptance {
    pub fn new(seed: u64) -> Self {
        Acceptance { seed, src: OnceCell::new(), lrc: OnceCell::new() }
    }

    fn ensemble(&self, model: MediumModel, schemes: Vec<SchemeConfig>) -> Result<(EnsembleSamples, MediumSpec)> {
        let spec = medium(model, EPS_MAIN, self.seed);
        let plan = ExperimentPlan {
            medium: spec.clone(),
            schemes,
            source: SourceTerm::ConstantOne,
            probes: default_probes(),
            realizations: M_MAIN,
            epsilons: vec![EPS_MAIN],
            meshes: vec![N_MAIN],
            first_index: 0,
        };
        plan.validate()?;
        Ok((collect_samples(&plan, EPS_MAIN, N_MAIN)?, spec))
    }

    fn src(&self) -> Result<&(EnsembleSamples, MediumSpec)> {
        self.src.get_or_try_init(|| {
            self.ensemble(
                MediumModel::IidCell,
                vec![
                    SchemeConfig::new(SchemeKind::Msfem, N_MAIN),
                    SchemeConfig::new(SchemeKind::Hmm { delta_over_h: 0.25 }, N_MAIN),
                    SchemeConfig::new(SchemeKind::Hybrid { m_patches: 4 }, N_MAIN),
                ],
            )
        })
    }

    fn lrc(&self) -> Result<&(EnsembleSamples, MediumSpec)> {
        self.lrc.get_or_try_init(|| {
            self.ensemble(
                MediumModel::TransformedLrc,
                vec![SchemeConfig::new(SchemeKind::Msfem, N_MAIN), SchemeConfig::new(SchemeKind::Hmm { delta_over_h: 0.25 }, N_MAIN)],
            )
        })
    }

    fn src_summary(&self, scheme: usize) -> Result<SchemeSummary> {
        let (samples, spec) = self.src()?;
        summarize(samples, scheme, spec, &SourceTerm::ConstantOne)
    }

    pub fn run(&self, id: u8) -> Result<CriterionOutcome> {
        let started = Instant::now();
        let (passed, detail) = match id {
            1 => self.exactness()?,
            2 => self.super_convergence()?,
            3 => self.error_bounds()?,
            4 => analytic_value()?,
            5 => self.src_corrector_test()?,
            6 => kernel_convergence()?,
            7 => self.amplification()?,
            8 => self.lrc_no_amplification()?,
            9 => self.hybrid()?,
            10 => self.rates()?,
            11 => self.oscillatory_bound()?,
            12 => self.lrc_oracle()?,
            other => return Err(Error::Argument(format!("no acceptance criterion {other}; valid ids are 1..=12"))),
        };
        Ok(outcome(id, passed, detail, started))
    }

    /// Runs the selected criteria (all when `ids` is empty), in order.
    pub fn run_all(&self, ids: &[u8]) -> Result<Vec<CriterionOutcome>> {
        let ids: Vec<u8> = if ids.is_empty() { CRITERIA.iter().map(|c| c.0).collect() } else { ids.to_vec() };
        ids.into_iter().map(|i| self.run(i)).collect()
    }

    fn exactness(&self) -> Result<(bool, String)> {
        let f = SourceTerm::ConstantOne;
        let u0 = solve_homogenized(1.0, &f)?;
        let mut zero_gap = 0.0f64;
        let (mut b_gap, mut hybrid_gap, mut msfem_gap) = (0.0f64, 0.0f64, 0.0f64);
        for n in [4usize, 16, 64] {
            let kinds = |n| {
                [
                    SchemeConfig::new(SchemeKind::Fem, n),
                    SchemeConfig::new(SchemeKind::Msfem, n),
                    SchemeConfig::new(SchemeKind::Hmm { delta_over_h: 0.25 }, n),
                    SchemeConfig::new(SchemeKind::Hmm { delta_over_h: 1.0 }, n),
                    SchemeConfig::new(SchemeKind::Hybrid { m_patches: 4 }, n),
                    SchemeConfig::new(SchemeKind::Hybrid { m_patches: 1 }, n),
                ]
            };
            let flat = MediumSampler::new(&MediumSpec { nu: 0.0, ..medium(MediumModel::IidCell, EPS_MAIN, self.seed) })?.sample(0)?;
            for cfg in kinds(n) {
                let sol = solve(&flat, &cfg, &f)?;
                for k in 0..=n {
                    zero_gap = zero_gap.max((sol.node(k) - u0.value(k as f64 / n as f64)?).abs());
                }
            }
            let sampler = MediumSampler::new(&medium(MediumModel::IidCell, EPS_MAIN, self.seed))?;
            for idx in 0..EXACT_REALIZATIONS {
                let s = sampler.sample(idx)?;
                let ms = SchemeConfig::new(SchemeKind::Msfem, n);
                let hmm = SchemeConfig::new(SchemeKind::Hmm { delta_over_h: 1.0 }, n);
                let hyb = SchemeConfig::new(SchemeKind::Hybrid { m_patches: 1 }, n);
                let (bm, bh) = (assemble_b(&s, &ms)?, assemble_b(&s, &hmm)?);
                for (x, y) in bm.b.iter().zip(&bh.b) {
                    b_gap = b_gap.max((x - y).abs() / x.abs());
                }
                let (um, uh, uy) = (solve(&s, &ms, &f)?, solve(&s, &hmm, &f)?, solve(&s, &hyb, &f)?);
                for k in 0..=n {
                    hybrid_gap = hybrid_gap.max((uh.node(k) - uy.node(k)).abs());
                    msfem_gap = msfem_gap.max((uh.node(k) - um.node(k)).abs());
                }
            }
        }
        let tol = 1e-12;
        let passed = zero_gap <= tol && b_gap <= tol && hybrid_gap <= tol && msfem_gap <= tol;
        Ok((
            passed,
            format!(
                "nu=0 max nodal gap to u0 {zero_gap:.2e}; b(HMM d=h) vs b(MsFEM) rel {b_gap:.2e}; nodal HMM(d=h) vs Hybrid(M=1) {hybrid_gap:.2e}; nodal HMM(d=h) vs MsFEM {msfem_gap:.2e} (tol {tol:.0e})"
            ),
        ))
    }

    fn super_convergence(&self) -> Result<(bool, String)> {
        let f = SourceTerm::ConstantOne;
        let mut gap = 0.0f64;
        for model in [MediumModel::IidCell, MediumModel::TransformedOu] {
            let sampler = MediumSampler::new(&medium(model, EPS_MAIN, self.seed))?;
            for idx in 0..EXACT_REALIZATIONS / 2 {
                let s = sampler.sample(idx)?;
                let sol = solve(&s, &SchemeConfig::new(SchemeKind::Msfem, N_MAIN), &f)?;
                let exact = solve_exact(&s, &f)?;
                for k in 0..=N_MAIN {
                    gap = gap.max((sol.node(k) - exact.value(k as f64 / N_MAIN as f64)?).abs());
                }
            }
        }
        Ok((gap <= 1e-10, format!("max |U_k - u_eps(x_k)| = {gap:.2e} over 100 realizations (tol 1e-10)")))
    }

    fn error_bounds(&self) -> Result<(bool, String)> {
        let f = SourceTerm::ConstantOne;
        let spec = medium(MediumModel::IidCell, EPS_MAIN, self.seed);
        let sampler = MediumSampler::new(&spec)?;
        let lambda = spec.lambda();
        let fnorm = f.l2_norm();
        let pi = std::f64::consts::PI;
        let (mut worst_h1, mut worst_l2) = (0.0f64, 0.0f64);
        for n in [8usize, 16, 32] {
            let h = 1.0 / n as f64;
            for idx in 0..EXACT_REALIZATIONS {
                let s = sampler.sample(idx)?;
                let sol = solve(&s, &SchemeConfig::new(SchemeKind::Msfem, n), &f)?;
                let e = error_norms(&sol, &solve_exact(&s, &f)?)?;
                worst_h1 = worst_h1.max(e.h1_seminorm / (h * fnorm / (lambda * pi)));
                worst_l2 = worst_l2.max(e.l2 / (h * h * fnorm / (lambda * pi * pi)));
            }
        }
        Ok((
            worst_h1 <= 1.0 && worst_l2 <= 1.0,
            format!("worst error/bound: H1 {worst_h1:.3}, L2 {worst_l2:.3} (N in 8,16,32; 100 realizations each)"),
        ))
    }

    fn src_corrector_test(&self) -> Result<(bool, String)> {
        let s = self.src_summary(SRC_MSFEM)?;
        let z = s.variance_z();
        let worst = z.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let centre = s.probes.iter().position(|&x| x == 0.5).map(|i| (s.variance()[i], s.theory_variance()[i], s.variance_se()[i]));
        let gauss = s.gaussianity.status == GaussianityStatus::Pass;
        let mut detail = format!("max |variance z| = {worst:.2} over 9 probes; gaussianity max |z| = {:.2}", s.gaussianity.max_abs_z);
        if let Some((e, t, se)) = centre {
            detail.push_str(&format!("; x=0.5 empirical {e:.5e} vs theory {t:.5e} (SE {se:.1e})"));
        }
        Ok((s.variances_within(3.0) && gauss, detail))
    }

    fn amplification(&self) -> Result<(bool, String)> {
        let mut identity_gap = 0.0f64;
        let probes = default_probes();
        for (n, d) in [(16usize, 0.25), (16, 0.5), (32, 0.125)] {
            let hmm = KernelContext::new(1.0, &SourceTerm::ConstantOne, n, d)?;
            for &x in &probes {
                for &y in &probes {
                    let a = covariance_src(&hmm, KernelId::Lhdelta, 1.0, x, y)?;
                    let b = covariance_src(&hmm, KernelId::Lh11, 1.0, x, y)?;
                    identity_gap = identity_gap.max((a - b / d).abs());
                }
            }
        }
        let (samples, spec) = self.src()?;
        let r: AmplificationReport = amplification_from_samples(samples, SRC_HMM, SRC_MSFEM, spec, &SourceTerm::ConstantOne)?;
        let ok = identity_gap <= 1e-12 && (r.mean_ratio - 4.0).abs() <= 0.15 * 4.0;
        Ok((
            ok,
            format!(
                "identity gap {identity_gap:.2e} (tol 1e-12); HMM(d=h/4)/MsFEM variance ratio {:.3} +- {:.3} (target 4 +- 15%; limit-covariance ratio {:.3})",
                r.mean_ratio, r.mean_ratio_se, r.theory_mean_ratio
            ),
        ))
    }

    fn lrc_no_amplification(&self) -> Result<(bool, String)> {
        let (samples, spec) = self.lrc()?;
        let r = amplification_from_samples(samples, 1, 0, spec, &SourceTerm::ConstantOne)?;
        let hmm = summarize(samples, 1, spec, &SourceTerm::ConstantOne)?;
        let worst_z = hmm.covariance_z.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let facts = correlation_facts(spec)?;
        let fine = KernelContext::new(1.0, &SourceTerm::ConstantOne, 64, 0.25)?;
        let mut gap = 0.0f64;
        for &x in &default_probes() {
            let a = covariance_lrc(&fine, KernelId::Lhdelta, facts.kappa, facts.alpha, x, x)?;
            let b = covariance_lrc(&fine, KernelId::L, facts.kappa, facts.alpha, x, x)?;
            gap = gap.max((a - b).abs() / b.abs());
        }
        let ratio_ok = (r.mean_ratio - 1.0).abs() <= 0.15;
        let cov_ok = hmm.covariances_within(3.0);
        let gap_ok = gap < 0.10;
        Ok((
            ratio_ok && cov_ok && gap_ok,
            format!(
                "HMM/MsFEM variance ratio {:.3} +- {:.3} (target 1 +- 15%; limit-covariance ratio {:.3}); max |covariance z| {worst_z:.2} (max rel gap {:.3}); N=64 rel gap Lhdelta vs L {gap:.3} (tol 0.10)",
                r.mean_ratio, r.mean_ratio_se, r.theory_mean_ratio, hmm.max_relative_gap
            ),
        ))
    }

    fn hybrid(&self) -> Result<(bool, String)> {
        let s = self.src_summary(SRC_HYBRID)?;
        let worst = s.variance_z().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        Ok((s.variances_within(3.0), format!("Hybrid(M=4) vs Lh11 covariance: max |variance z| = {worst:.2} over 9 probes")))
    }

    fn rates(&self) -> Result<(bool, String)> {
        let ladder: Vec<f64> = (8..=12).map(|k| 2f64.powi(-k)).collect();
        let fit = |model: MediumModel| -> Result<f64> {
            let plan = ExperimentPlan {
                medium: medium(model, ladder[0], self.seed),
                schemes: vec![SchemeConfig::new(SchemeKind::Msfem, N_MAIN)],
                source: SourceTerm::ConstantOne,
                probes: default_probes(),
                realizations: M_RATES,
                epsilons: ladder.clone(),
                meshes: vec![N_MAIN],
                first_index: 0,
            };
            mean_square_sup(&plan)?.slope.ok_or_else(|| Error::Numeric("rate fit undefined".into()))
        };
        let src = fit(MediumModel::IidCell)?;
        let lrc = fit(MediumModel::TransformedLrc)?;
        Ok((
            (0.85..=1.15).contains(&src) && (0.4..=0.6).contains(&lrc),
            format!("SRC slope {src:.3} (target [0.85, 1.15]); LRC slope {lrc:.3} (target [0.4, 0.6])"),
        ))
    }

    fn oscillatory_bound(&self) -> Result<(bool, String)> {
        let mut ok = true;
        let mut parts = Vec::new();
        for model in [MediumModel::IidCell, MediumModel::TransformedOu] {
            for eps in [1.0 / 256.0, 1.0 / 1024.0] {
                let b = empirical_oscillatory_bound(&medium(model, eps, self.seed), (0.0, 1.0), BOUND_REALIZATIONS)?;
                ok &= b.holds();
                parts.push(format!("{model:?} eps=2^{}: {:.3}+-{:.3}", eps.log2(), b.ratio, b.ratio_se));
            }
        }
        Ok((ok, format!("ratio to eps(b-a)|R|_1: {}", parts.join(", "))))
    }

    fn lrc_oracle(&self) -> Result<(bool, String)> {
        let mut rng = ChaCha12Rng::seed_from_u64(self.seed);
        let mut worst = 0.0f64;
        for _ in 0..50 {
            let alpha = rng.random_range(0.2..0.8);
            let cell = |rng: &mut ChaCha12Rng| {
                let l: f64 = rng.random_range(0.0..0.9);
                (l, l + rng.random_range(0.01..(1.0 - l).min(0.3)))
            };
            let (c1, c2) = (cell(&mut rng), cell(&mut rng));
            let closed = lrc_cell_pair(alpha, c1, c2);
            let brute = lrc_cell_pair_quadrature(alpha, c1, c2)?;
            worst = worst.max((closed - brute).abs());
        }
        let kappa = correlation_facts(&medium(MediumModel::TransformedLrc, EPS_MAIN, self.seed))?.kappa;
        let hurst = 1.0 - LRC_ALPHA / 2.0;
        let sh = sigma_h(kappa, LRC_ALPHA)?;
        let mut identity = 0.0f64;
        for (id, d) in [(KernelId::L, 1.0), (KernelId::Lhdelta, 0.25), (KernelId::Lh, 1.0)] {
            let ctx = KernelContext::new(1.0, &SourceTerm::ConstantOne, N_MAIN, d)?;
            for (x, y) in [(0.5, 0.5), (0.2, 0.7), (0.9, 0.3)] {
                let lhs = covariance_lrc(&ctx, id, kappa, LRC_ALPHA, x, y)?;
                let unit = lrc_integral(&ctx.pieces(id, x)?, &ctx.pieces(id, y)?, 2.0 - 2.0 * hurst)?;
                let rhs = sh * sh * hurst * (2.0 * hurst - 1.0) * unit;
                identity = identity.max((lhs - rhs).abs() / lhs.abs());
            }
        }
        Ok((
            worst <= 1e-6 && identity <= 1e-10,
            format!("max |closed form - 2-D quadrature| = {worst:.2e} over 50 cell pairs (tol 1e-6); sigma_H identity rel gap {identity:.2e} (tol 1e-10)"),
        ))
    }
}

fn analytic_value() -> Result<(bool, String)> {
    let v = limit_variance_src(1.0, &SourceTerm::ConstantOne, 1.0, 0.5, 0.5)?;
    let gap = (v - 1.0 / 48.0).abs();
    Ok((gap <= 1e-10, format!("sigma^2 int L(1/2,t)^2 dt = {v:.16} vs 1/48, gap {gap:.1e}")))
}

/// `∫ diag(x) dx` over [0, 1] for the covariance of kernel `id`; the diagonal
/// is a polynomial of degree ≤ 4 in `x` on each element, so four Gauss points
/// per element are exact.
fn integrated_diagonal(n: usize, id: KernelId) -> Result<f64> {
    let ctx = KernelContext::new(1.0, &SourceTerm::ConstantOne, n, 1.0)?;
    let rule = gauss_legendre(4);
    let mut total = 0.0;
    for k in 0..n {
        let (a, b) = (k as f64 / n as f64, (k + 1) as f64 / n as f64);
        let mut err = None;
        total += gauss_legendre_integrate(&rule, a, b, |x| match covariance_src(&ctx, id, 1.0, x, x) {
            Ok(v) => v,
            Err(e) => {
                err = Some(e);
                0.0
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
    }
    Ok(total)
}

fn kernel_convergence() -> Result<(bool, String)> {
    let meshes = [8usize, 16, 32, 64];
    let mut gaps = Vec::new();
    let mut d12 = Vec::new();
    let mut d2 = Vec::new();
    for &n in &meshes {
        let ctx = KernelContext::new(1.0, &SourceTerm::ConstantOne, n, 1.0)?;
        gaps.push(sup_gap(&ctx.pieces(KernelId::Lh11, 0.5)?, &ctx.pieces(KernelId::L, 0.5)?, 16));
        d12.push(integrated_diagonal(n, KernelId::Lh12)?);
        d2.push(integrated_diagonal(n, KernelId::Lh2)?);
    }
    let ratios = |v: &[f64]| v.windows(2).map(|w| w[1] / w[0]).collect::<Vec<_>>();
    let (rg, r12, r2) = (ratios(&gaps), ratios(&d12), ratios(&d2));
    let gap_ok = rg.iter().all(|r| (0.5 / 1.2..=0.5 / 0.8).contains(r));
    let halves = |r: &[f64]| r.iter().all(|&x| x <= 0.5);
    let fmt = |r: &[f64]| r.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join(", ");
    Ok((
        gap_ok && halves(&r12) && halves(&r2),
        format!(
            "successive ratios over N=8..64: sup-gap [{}] (target 0.5 +-20%); int diag Lh12 [{}], Lh2 [{}] (target <= 0.5)",
            fmt(&rg),
            fmt(&r12),
            fmt(&r2)
        ),
    ))
}

/// `∫_{c1} ∫_{c2} |t - s|^{-α} ds dt` by nested adaptive Gauss–Kronrod.
///
/// The inner integral is split at `t` and each side is mapped by
/// `s = t ∓ u²`, which removes the singularity; the outer integral is split
/// where `t` crosses the ends of `c2`.
pub fn lrc_cell_pair_quadrature(alpha: f64, c1: (f64, f64), c2: (f64, f64)) -> Result<f64> {
    let inner = |t: f64| -> f64 {
        let (l, r) = c2;
        let kernel = |u: f64| 2.0 * u.powf(1.0 - 2.0 * alpha);
        let mut acc = 0.0;
        if t > l {
            let (ua, ub) = ((t - l).sqrt(), (t - r.min(t)).sqrt());
            acc += adaptive(kernel, ub, ua, 1e-13, 1e-12).map(|e| e.value).unwrap_or(f64::NAN);
        }
        if r > t {
            let (ua, ub) = ((l.max(t) - t).sqrt(), (r - t).sqrt());
            acc += adaptive(kernel, ua, ub, 1e-13, 1e-12).map(|e| e.value).unwrap_or(f64::NAN);
        }
        acc
    };
    let mut pts = vec![c1.0, c1.1];
    pts.extend([c2.0, c2.1].into_iter().filter(|&p| p > c1.0 && p < c1.1));
    pts.sort_by(f64::total_cmp);
    let mut total = 0.0;
    for w in pts.windows(2) {
        total += adaptive(inner, w[0], w[1], 1e-11, 1e-10)?.value;
    }
    if !total.is_finite() {
        return Err(Error::Numeric("inner quadrature failed to converge".into()));
    }
    Ok(total)
}

/// Mean of the nine default probes' empirical variances, for quick summaries.
pub fn mean_variance(s: &SchemeSummary) -> f64 {
    mean(&s.variance())
}
