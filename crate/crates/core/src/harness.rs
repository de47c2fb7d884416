//! Monte Carlo ensembles of discrete correctors, their statistics, and the
//! comparison against the limiting Gaussian covariances.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::elliptic::SourceTerm;
use crate::error::{Error, Result};
use crate::kernels::{covariance_lrc_matrix, covariance_src_matrix, CovarianceMatrix, KernelContext, KernelId};
use crate::random_media::{correlation_facts, MediumSampler, MediumSpec};
use crate::schemes::{corrector_samples_multi, SchemeConfig, SchemeKind};
use crate::stats::{linear_fit, pairwise_sum, Moments};

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "CORRECTOR_LAB_THREADS";

/// Minimum ensemble size for the moment z-tests.
pub const GAUSSIANITY_MIN_REALIZATIONS: usize = 500;

/// Runs `f` on a pool sized by `threads`, else by `CORRECTOR_LAB_THREADS`,
/// else by rayon's default.
pub fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R> {
    let n = match threads {
        Some(n) => Some(n),
        None => match std::env::var(THREADS_ENV) {
            Ok(v) if !v.trim().is_empty() => Some(
                v.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::config(THREADS_ENV, format!("expected a positive integer, got {v:?}")))?,
            ),
            _ => None,
        },
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = n {
        if n == 0 {
            return Err(Error::config("threads", "must be at least 1"));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPlan {
    /// Medium template; `epsilon` is replaced by each ladder entry.
    pub medium: MediumSpec,
    /// Scheme templates; `n_elements` is replaced by each mesh entry.
    pub schemes: Vec<SchemeConfig>,
    pub source: SourceTerm,
    pub probes: Vec<f64>,
    pub realizations: usize,
    pub epsilons: Vec<f64>,
    pub meshes: Vec<usize>,
    /// Index of the first realization.
    #[serde(default)]
    pub first_index: u64,
}

impl ExperimentPlan {
    pub fn validate(&self) -> Result<()> {
        if self.realizations < 2 {
            return Err(Error::config("ensemble.realizations", format!("need at least 2, got {}", self.realizations)));
        }
        if self.schemes.is_empty() {
            return Err(Error::config("scheme", "at least one scheme is required"));
        }
        if self.probes.is_empty() || self.probes.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::config("probes", "need at least one probe, all inside [0, 1]"));
        }
        if self.epsilons.is_empty() {
            return Err(Error::config("ensemble.epsilons", "ladder is empty"));
        }
        if self.meshes.is_empty() {
            return Err(Error::config("ensemble.meshes", "ladder is empty"));
        }
        self.source.validate()?;
        for &eps in &self.epsilons {
            let spec = self.medium.with_epsilon(eps);
            spec.validate()?;
            let micro = spec.micro_h();
            for &n in &self.meshes {
                let h = 1.0 / n as f64;
                if eps > h / 8.0 * (1.0 + 1e-12) {
                    return Err(Error::config(
                        "ensemble.epsilons",
                        format!("scale separation needs epsilon <= h/8; epsilon = {eps} with N = {n}"),
                    ));
                }
                let ratio = h / micro;
                if (ratio - ratio.round()).abs() > 1e-9 * ratio {
                    return Err(Error::config(
                        "ensemble.meshes",
                        format!("h = 1/{n} is not a multiple of the micro-cell width {micro}"),
                    ));
                }
                for s in &self.schemes {
                    s.with_n(n).validate()?;
                }
            }
        }
        Ok(())
    }
}

/// Raw corrector samples for one `(ε, N)`: `samples[scheme][realization][probe]`.
#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleSamples {
    pub epsilon: f64,
    pub n_elements: usize,
    pub schemes: Vec<SchemeConfig>,
    pub probes: Vec<f64>,
    pub samples: Vec<Vec<Vec<f64>>>,
}

impl EnsembleSamples {
    /// Samples of one scheme at one probe, in realization order.
    pub fn column(&self, scheme: usize, probe: usize) -> Vec<f64> {
        self.samples[scheme].iter().map(|r| r[probe]).collect()
    }
}

/// Draws the ensemble for one `(ε, N)`; all schemes share each medium
/// realization, and results are ordered by realization index.
pub fn collect_samples(plan: &ExperimentPlan, epsilon: f64, n_elements: usize) -> Result<EnsembleSamples> {
    let spec = plan.medium.with_epsilon(epsilon);
    let sampler = MediumSampler::new(&spec)?;
    let schemes: Vec<SchemeConfig> = plan.schemes.iter().map(|s| s.with_n(n_elements)).collect();
    let per_realization: Vec<Vec<Vec<f64>>> = (0..plan.realizations as u64)
        .into_par_iter()
        .map(|i| {
            let idx = plan.first_index + i;
            corrector_samples_multi(&schemes, &sampler, &plan.source, &plan.probes, idx)
                .map_err(|e| Error::Realization { index: idx, source: Box::new(e) })
        })
        .collect::<Result<_>>()?;
    let mut samples = vec![Vec::with_capacity(plan.realizations); schemes.len()];
    for r in per_realization {
        for (s, row) in r.into_iter().enumerate() {
            samples[s].push(row);
        }
    }
    Ok(EnsembleSamples { epsilon, n_elements, schemes, probes: plan.probes.clone(), samples })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GaussianityStatus {
    Pass,
    Fail,
    Insufficient,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianityReport {
    pub status: GaussianityStatus,
    pub realizations: usize,
    pub z_skew: Vec<f64>,
    pub z_kurt: Vec<f64>,
    /// Bivariate Mardia kurtosis z-score per probe pair `(i, j, z)`.
    pub mardia: Vec<(usize, usize, f64)>,
    pub max_abs_z: f64,
}

/// Moment z-tests under the normal null, per probe and per probe pair.
///
/// `columns[p]` holds the samples at probe `p`. Probes with zero variance are
/// skipped. Pass means every `|z| < 4`.
pub fn gaussianity_report(columns: &[Vec<f64>]) -> GaussianityReport {
    let m = columns.first().map_or(0, Vec::len);
    let mf = m as f64;
    let moments: Vec<Moments> = columns.iter().map(|c| Moments::of(c)).collect();
    let live = |p: usize| moments[p].m2 > 0.0;
    let z_skew: Vec<f64> = (0..columns.len())
        .map(|p| if live(p) { moments[p].skewness() / (6.0 / mf).sqrt() } else { 0.0 })
        .collect();
    let z_kurt: Vec<f64> = (0..columns.len())
        .map(|p| if live(p) { moments[p].excess_kurtosis() / (24.0 / mf).sqrt() } else { 0.0 })
        .collect();
    let mut mardia = Vec::new();
    for i in 0..columns.len() {
        for j in i + 1..columns.len() {
            if !(live(i) && live(j)) {
                continue;
            }
            let (mi, mj) = (moments[i].mean, moments[j].mean);
            let (sii, sjj) = (moments[i].m2, moments[j].m2);
            let prods: Vec<f64> = columns[i].iter().zip(&columns[j]).map(|(a, b)| (a - mi) * (b - mj)).collect();
            let sij = pairwise_sum(&prods) / mf;
            let det = sii * sjj - sij * sij;
            if !(det > 1e-12 * sii * sjj) {
                continue;
            }
            let d2: Vec<f64> = columns[i]
                .iter()
                .zip(&columns[j])
                .map(|(a, b)| {
                    let (u, v) = (a - mi, b - mj);
                    let q = (sjj * u * u - 2.0 * sij * u * v + sii * v * v) / det;
                    q * q
                })
                .collect();
            let b22 = pairwise_sum(&d2) / mf;
            mardia.push((i, j, (b22 - 8.0) / (64.0 / mf).sqrt()));
        }
    }
    let max_abs_z = z_skew
        .iter()
        .chain(&z_kurt)
        .chain(mardia.iter().map(|t| &t.2))
        .fold(0.0f64, |a, z| a.max(z.abs()));
    let status = if m < GAUSSIANITY_MIN_REALIZATIONS {
        GaussianityStatus::Insufficient
    } else if max_abs_z < 4.0 {
        GaussianityStatus::Pass
    } else {
        GaussianityStatus::Fail
    };
    GaussianityReport { status, realizations: m, z_skew, z_kurt, mardia, max_abs_z }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// No fluctuation to compare (zero theory and zero samples).
    Degenerate,
}

/// Limit kernel whose covariance a scheme's corrector converges to.
pub fn theory_kernel(kind: SchemeKind) -> Option<(KernelId, f64)> {
    match kind {
        SchemeKind::Fem => None,
        SchemeKind::Msfem => Some((KernelId::Lh, 1.0)),
        SchemeKind::Hmm { delta_over_h } => Some((KernelId::Lhdelta, delta_over_h)),
        SchemeKind::Hybrid { .. } => Some((KernelId::Lh11, 1.0)),
    }
}

/// Limit covariance of the rescaled corrector of `scheme` at `probes`.
pub fn theory_covariance(spec: &MediumSpec, scheme: &SchemeConfig, source: &SourceTerm, probes: &[f64]) -> Result<CovarianceMatrix> {
    let Some((id, d)) = theory_kernel(scheme.kind) else {
        return Ok(CovarianceMatrix::zeros(probes));
    };
    if spec.nu == 0.0 {
        return Ok(CovarianceMatrix::zeros(probes));
    }
    let facts = correlation_facts(spec)?;
    let ctx = KernelContext::new(spec.a_star, source, scheme.n_elements, d)?;
    if spec.model.is_long_range() {
        covariance_lrc_matrix(&ctx, id, facts.kappa, facts.alpha, probes)
    } else {
        covariance_src_matrix(&ctx, id, facts.sigma2, probes)
    }
}

/// Statistics of one scheme at one `(ε, N)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchemeSummary {
    pub epsilon: f64,
    pub n_elements: usize,
    pub scheme: SchemeConfig,
    pub label: String,
    pub probes: Vec<f64>,
    pub realizations: usize,
    pub mean: Vec<f64>,
    pub mean_se: Vec<f64>,
    /// Unbiased empirical covariance.
    pub covariance: CovarianceMatrix,
    /// Asymptotic standard error of each covariance entry, row-major.
    pub covariance_se: Vec<f64>,
    pub theory_kernel: Option<KernelId>,
    pub theory: CovarianceMatrix,
    /// `(empirical - theory)/SE` per covariance entry, row-major; zero where SE vanishes.
    pub covariance_z: Vec<f64>,
    /// `max |empirical - theory| / max theory diagonal`.
    pub max_relative_gap: f64,
    pub gaussianity: GaussianityReport,
    pub verdict: Verdict,
}

impl SchemeSummary {
    pub fn variance(&self) -> Vec<f64> {
        self.covariance.diag()
    }

    pub fn variance_se(&self) -> Vec<f64> {
        let p = self.probes.len();
        (0..p).map(|i| self.covariance_se[i * p + i]).collect()
    }

    pub fn theory_variance(&self) -> Vec<f64> {
        self.theory.diag()
    }

    pub fn variance_z(&self) -> Vec<f64> {
        let p = self.probes.len();
        (0..p).map(|i| self.covariance_z[i * p + i]).collect()
    }

    /// Every variance within `k` standard errors of theory.
    pub fn variances_within(&self, k: f64) -> bool {
        self.variance_z().iter().all(|z| z.abs() <= k)
    }

    /// Every covariance entry within `k` standard errors of theory.
    pub fn covariances_within(&self, k: f64) -> bool {
        self.covariance_z.iter().all(|z| z.abs() <= k)
    }
}

/// Empirical covariance with per-entry standard errors.
pub fn empirical_covariance(columns: &[Vec<f64>], probes: &[f64]) -> (CovarianceMatrix, Vec<f64>) {
    let p = columns.len();
    let m = columns.first().map_or(0, Vec::len) as f64;
    let means: Vec<f64> = columns.iter().map(|c| crate::stats::mean(c)).collect();
    let mut cov = CovarianceMatrix::zeros(probes);
    let mut se = vec![0.0; p * p];
    for i in 0..p {
        for j in i..p {
            let prods: Vec<f64> = columns[i].iter().zip(&columns[j]).map(|(a, b)| (a - means[i]) * (b - means[j])).collect();
            let mo = Moments::of(&prods);
            let c = mo.mean * m / (m - 1.0);
            let s = mo.se_mean();
            cov.values[i * p + j] = c;
            cov.values[j * p + i] = c;
            se[i * p + j] = s;
            se[j * p + i] = s;
        }
    }
    (cov, se)
}

pub fn summarize(samples: &EnsembleSamples, scheme: usize, spec: &MediumSpec, source: &SourceTerm) -> Result<SchemeSummary> {
    let cfg = samples.schemes[scheme];
    let probes = &samples.probes;
    let p = probes.len();
    let columns: Vec<Vec<f64>> = (0..p).map(|i| samples.column(scheme, i)).collect();
    let moments: Vec<Moments> = columns.iter().map(|c| Moments::of(c)).collect();
    let (covariance, covariance_se) = empirical_covariance(&columns, probes);
    let theory = theory_covariance(spec, &cfg, source, probes)?;
    let covariance_z: Vec<f64> = (0..p * p)
        .map(|k| {
            let d = covariance.values[k] - theory.values[k];
            if covariance_se[k] > 0.0 {
                d / covariance_se[k]
            } else if d == 0.0 {
                0.0
            } else {
                f64::INFINITY.copysign(d)
            }
        })
        .collect();
    let scale = theory.diag().into_iter().fold(0.0f64, f64::max);
    let worst = covariance.values.iter().zip(&theory.values).map(|(a, b)| (a - b).abs()).fold(0.0f64, f64::max);
    let max_relative_gap = if scale > 0.0 { worst / scale } else if worst == 0.0 { 0.0 } else { f64::INFINITY };
    let gaussianity = gaussianity_report(&columns);
    let all_zero = covariance.values.iter().all(|&v| v == 0.0);
    let verdict = if scale == 0.0 && all_zero {
        Verdict::Degenerate
    } else {
        let moments_ok = covariance_z.iter().enumerate().filter(|(k, _)| k / p == k % p).all(|(_, z)| z.abs() <= 3.0);
        let gauss_ok = gaussianity.status != GaussianityStatus::Fail;
        if moments_ok && gauss_ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    };
    Ok(SchemeSummary {
        epsilon: samples.epsilon,
        n_elements: samples.n_elements,
        scheme: cfg,
        label: cfg.label(),
        probes: probes.clone(),
        realizations: columns.first().map_or(0, Vec::len),
        mean: moments.iter().map(|m| m.mean).collect(),
        mean_se: moments.iter().map(Moments::se_mean).collect(),
        covariance,
        covariance_se,
        theory_kernel: theory_kernel(cfg.kind).map(|k| k.0),
        theory,
        covariance_z,
        max_relative_gap,
        gaussianity,
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub plan: ExperimentPlan,
    pub entries: Vec<SchemeSummary>,
}

impl ExperimentReport {
    pub fn find(&self, epsilon: f64, n_elements: usize, label: &str) -> Option<&SchemeSummary> {
        self.entries.iter().find(|e| e.epsilon == epsilon && e.n_elements == n_elements && e.label == label)
    }

    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.verdict != Verdict::Fail)
    }
}

/// Runs every `(ε, N)` of the plan and compares each scheme against its limit.
pub fn run_ensemble(plan: &ExperimentPlan) -> Result<ExperimentReport> {
    plan.validate()?;
    let mut entries = Vec::new();
    for &eps in &plan.epsilons {
        let spec = plan.medium.with_epsilon(eps);
        for &n in &plan.meshes {
            let samples = collect_samples(plan, eps, n)?;
            for s in 0..samples.schemes.len() {
                entries.push(summarize(&samples, s, &spec, &plan.source)?);
            }
        }
    }
    Ok(ExperimentReport { plan: plan.clone(), entries })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub label: String,
    pub n_elements: usize,
    pub epsilons: Vec<f64>,
    /// `sup_x E[(u^h_ε - u^h_0)²]` over the probes, unrescaled.
    pub estimates: Vec<f64>,
    pub estimate_se: Vec<f64>,
    /// Slope of `log sup E[·²]` against `log ε`; absent when undefined.
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    /// Set when some estimate is zero and no slope can be fitted.
    pub flagged: bool,
}

/// Fits the ε-exponent of the unrescaled mean-square corrector for the first
/// scheme and mesh of the plan.
pub fn mean_square_sup(plan: &ExperimentPlan) -> Result<RateFit> {
    if plan.epsilons.len() < 3 {
        return Err(Error::config("ensemble.epsilons", format!("rate fits need at least 3 entries, got {}", plan.epsilons.len())));
    }
    let single = ExperimentPlan { schemes: vec![plan.schemes[0]], meshes: vec![plan.meshes[0]], ..plan.clone() };
    single.validate()?;
    let n = single.meshes[0];
    let mut estimates = Vec::new();
    let mut estimate_se = Vec::new();
    for &eps in &single.epsilons {
        let samples = collect_samples(&single, eps, n)?;
        let unscale = eps.powf(2.0 * single.medium.with_epsilon(eps).rescale_exponent());
        let (best, se) = (0..single.probes.len())
            .map(|p| {
                let sq: Vec<f64> = samples.column(0, p).iter().map(|v| v * v * unscale).collect();
                let m = Moments::of(&sq);
                (m.mean, m.se_mean())
            })
            .fold((0.0f64, 0.0f64), |acc, v| if v.0 > acc.0 { v } else { acc });
        estimates.push(best);
        estimate_se.push(se);
    }
    let flagged = estimates.iter().any(|&e| !(e > 0.0));
    let (slope, intercept) = if flagged {
        (None, None)
    } else {
        let lx: Vec<f64> = single.epsilons.iter().map(|e| e.ln()).collect();
        let ly: Vec<f64> = estimates.iter().map(|e| e.ln()).collect();
        let (s, i) = linear_fit(&lx, &ly);
        (Some(s), Some(i))
    };
    Ok(RateFit { label: single.schemes[0].label(), n_elements: n, epsilons: single.epsilons.clone(), estimates, estimate_se, slope, intercept, flagged })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmplificationReport {
    pub epsilon: f64,
    pub n_elements: usize,
    pub probes: Vec<f64>,
    /// `Var(HMM)/Var(MsFEM)` per probe; probes with zero MsFEM variance are skipped.
    pub ratios: Vec<f64>,
    pub mean_ratio: f64,
    /// Batch-means standard error of `mean_ratio`.
    pub mean_ratio_se: f64,
    /// Same ratio of the limit variances.
    pub theory_mean_ratio: f64,
}

const AMPLIFICATION_BATCHES: usize = 20;

fn mean_variance_ratio(a: &[Vec<f64>], b: &[Vec<f64>], range: std::ops::Range<usize>) -> (Vec<f64>, f64) {
    let p = a.first().map_or(0, Vec::len);
    let ratios: Vec<f64> = (0..p)
        .filter_map(|i| {
            let ca: Vec<f64> = a[range.clone()].iter().map(|r| r[i]).collect();
            let cb: Vec<f64> = b[range.clone()].iter().map(|r| r[i]).collect();
            let (va, vb) = (Moments::of(&ca).variance, Moments::of(&cb).variance);
            (vb > 0.0).then_some(va / vb)
        })
        .collect();
    let mean = if ratios.is_empty() { f64::NAN } else { crate::stats::mean(&ratios) };
    (ratios, mean)
}

/// HMM/MsFEM variance ratio under common random numbers, for the first
/// `(ε, N)` of the plan. The plan must list exactly one HMM and one MsFEM scheme.
pub fn amplification_ratio(plan: &ExperimentPlan) -> Result<AmplificationReport> {
    let pick = |pred: fn(&SchemeKind) -> bool, what: &str| {
        plan.schemes
            .iter()
            .copied()
            .find(|s| pred(&s.kind))
            .ok_or_else(|| Error::config("scheme", format!("amplification needs an {what} scheme")))
    };
    let hmm = pick(|k| matches!(k, SchemeKind::Hmm { .. }), "HMM")?;
    let msfem = pick(|k| matches!(k, SchemeKind::Msfem), "MsFEM")?;
    let pair = ExperimentPlan { schemes: vec![hmm, msfem], epsilons: vec![plan.epsilons[0]], meshes: vec![plan.meshes[0]], ..plan.clone() };
    pair.validate()?;
    let samples = collect_samples(&pair, pair.epsilons[0], pair.meshes[0])?;
    amplification_from_samples(&samples, 0, 1, &pair.medium.with_epsilon(pair.epsilons[0]), &pair.source)
}

/// HMM/MsFEM variance ratio from an ensemble that already holds both schemes
/// (indices `hmm` and `msfem` into `samples.schemes`).
pub fn amplification_from_samples(
    samples: &EnsembleSamples,
    hmm: usize,
    msfem: usize,
    spec: &MediumSpec,
    source: &SourceTerm,
) -> Result<AmplificationReport> {
    let m = samples.samples[hmm].len();
    let (ratios, mean_ratio) = mean_variance_ratio(&samples.samples[hmm], &samples.samples[msfem], 0..m);
    let batch = m / AMPLIFICATION_BATCHES;
    let mean_ratio_se = if batch >= 2 {
        let means: Vec<f64> = (0..AMPLIFICATION_BATCHES)
            .map(|b| mean_variance_ratio(&samples.samples[hmm], &samples.samples[msfem], b * batch..(b + 1) * batch).1)
            .collect();
        (Moments::of(&means).variance / AMPLIFICATION_BATCHES as f64).sqrt()
    } else {
        f64::NAN
    };
    let th = theory_covariance(spec, &samples.schemes[hmm], source, &samples.probes)?.diag();
    let tm = theory_covariance(spec, &samples.schemes[msfem], source, &samples.probes)?.diag();
    let tr: Vec<f64> = th.iter().zip(&tm).filter(|(_, b)| **b > 0.0).map(|(a, b)| a / b).collect();
    let theory_mean_ratio = if tr.is_empty() { f64::NAN } else { crate::stats::mean(&tr) };
    Ok(AmplificationReport {
        epsilon: samples.epsilon,
        n_elements: samples.n_elements,
        probes: samples.probes.clone(),
        ratios,
        mean_ratio,
        mean_ratio_se,
        theory_mean_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random_media::MediumModel;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;
    use rand_distr::{Distribution, Exp, StandardNormal};

    fn plan(nu: f64, m: usize) -> ExperimentPlan {
        ExperimentPlan {
            medium: MediumSpec { model: MediumModel::IidCell, a_star: 1.0, nu, alpha: 1.0, epsilon: 1.0 / 256.0, micro_points_per_eps: 16, seed: 7 },
            schemes: vec![
                SchemeConfig::new(SchemeKind::Msfem, 8),
                SchemeConfig::new(SchemeKind::Hmm { delta_over_h: 1.0 }, 8),
                SchemeConfig::new(SchemeKind::Hybrid { m_patches: 1 }, 8),
                SchemeConfig::new(SchemeKind::Fem, 8),
            ],
            source: SourceTerm::ConstantOne,
            probes: vec![0.0, 0.25, 0.5, 0.7, 1.0],
            realizations: m,
            epsilons: vec![1.0 / 256.0],
            meshes: vec![8],
            first_index: 0,
        }
    }

    #[test]
    fn zero_fluctuation_is_degenerate() {
        let r = run_ensemble(&plan(0.0, 4)).unwrap();
        for e in &r.entries {
            assert!(e.covariance.values.iter().all(|&v| v == 0.0));
            assert_eq!(e.verdict, Verdict::Degenerate);
        }
    }

    #[test]
    fn reports_are_reproducible_and_thread_independent() {
        let p = plan(0.25, 40);
        let a = with_threads(Some(1), || run_ensemble(&p)).unwrap().unwrap();
        let b = with_threads(Some(3), || run_ensemble(&p)).unwrap().unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        // HMM with full patches and the one-patch hybrid share stiffness, load and basis
        assert_eq!(a.entries[1].covariance, a.entries[2].covariance);
        assert_ne!(a.entries[0].covariance, a.entries[1].covariance);
        assert_eq!(a.entries[3].verdict, Verdict::Degenerate);
    }

    #[test]
    fn plan_validation() {
        let mut p = plan(0.25, 1);
        assert!(matches!(p.validate(), Err(Error::Config { .. })));
        p.realizations = 2;
        p.epsilons = vec![1.0 / 32.0];
        assert!(matches!(p.validate(), Err(Error::Config { .. })));
        p.epsilons = vec![1.0 / 256.0];
        p.meshes = vec![3];
        assert!(matches!(p.validate(), Err(Error::Config { .. })));
        p.meshes = vec![8];
        assert!(p.validate().is_ok());
        assert!(matches!(mean_square_sup(&p), Err(Error::Config { .. })));
    }

    #[test]
    fn gaussianity_null_and_alternative() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let normal: Vec<Vec<f64>> = (0..3).map(|_| (0..10_000).map(|_| StandardNormal.sample(&mut rng)).collect()).collect();
        let r = gaussianity_report(&normal);
        assert_eq!(r.status, GaussianityStatus::Pass, "{r:?}");
        let exp = Exp::new(1.0).unwrap();
        let skewed: Vec<Vec<f64>> = (0..2).map(|_| (0..10_000).map(|_| exp.sample(&mut rng)).collect()).collect();
        let r = gaussianity_report(&skewed);
        assert_eq!(r.status, GaussianityStatus::Fail);
        assert!(r.z_skew.iter().all(|z| *z > 4.0));
        assert_eq!(gaussianity_report(&normal.iter().map(|c| c[..100].to_vec()).collect::<Vec<_>>()).status, GaussianityStatus::Insufficient);
    }

    #[test]
    fn amplification_ratio_under_common_random_numbers() {
        let mut p = plan(0.25, 400);
        p.probes = vec![0.25, 0.5, 0.75];
        p.schemes = vec![SchemeConfig::new(SchemeKind::Msfem, 8), SchemeConfig::new(SchemeKind::Hmm { delta_over_h: 0.25 }, 8)];
        let a = amplification_ratio(&p).unwrap();
        assert_eq!(a.ratios.len(), 3);
        assert!(a.mean_ratio_se > 0.0);
        assert!((a.mean_ratio - a.theory_mean_ratio).abs() < 5.0 * a.mean_ratio_se + 0.1 * a.theory_mean_ratio, "{a:?}");
        p.schemes.pop();
        assert!(matches!(amplification_ratio(&p), Err(Error::Config { .. })));
    }

    #[test]
    fn empirical_covariance_matches_direct_formula() {
        let cols = vec![vec![1.0, 2.0, 4.0, 7.0], vec![0.0, 1.0, 1.0, 3.0]];
        let (c, se) = empirical_covariance(&cols, &[0.1, 0.2]);
        // unbiased: Σ(x - x̄)(y - ȳ)/(n - 1)
        assert!((c.get(0, 0) - 7.0).abs() < 1e-12);
        assert!((c.get(0, 1) - 9.5 / 3.0).abs() < 1e-12);
        assert_eq!(c.get(0, 1), c.get(1, 0));
        assert!(se.iter().all(|s| *s > 0.0));
    }
}
