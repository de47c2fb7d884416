//! Stationary random coefficients `1/a_ε` on a micro-grid.
//!
//! Three families are provided: an iid two-point medium constant on cells
//! of length ε, and two transformed Gaussian media `q = ν tanh(g)` with
//! exponential (short-range) or algebraic (long-range) correlation of `g`.

use std::io::Write;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{adaptive, gauss_hermite, normal_expectation};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MediumModel {
    /// `q = ±ν` with equal probability, independently on each cell of length ε.
    IidCell,
    /// `q = ν tanh(g)`, `g` Gaussian with covariance `exp(-|τ|)`.
    TransformedOu,
    /// `q = ν tanh(g)`, `g` Gaussian with covariance `(1 + τ²)^(-α/2)`.
    TransformedLrc,
}

impl MediumModel {
    pub fn is_long_range(self) -> bool {
        matches!(self, MediumModel::TransformedLrc)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MediumSpec {
    pub model: MediumModel,
    /// Harmonic mean `a*`; the mean of `1/a` is `1/a*`.
    pub a_star: f64,
    /// Bound on `|1/a - 1/a*|`.
    pub nu: f64,
    /// Decay exponent of the correlation; 1 for short-range media.
    pub alpha: f64,
    pub epsilon: f64,
    pub micro_points_per_eps: u32,
    pub seed: u64,
}

impl MediumSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.a_star > 0.0 && self.a_star.is_finite()) {
            return Err(Error::config("medium.a_star", "must be positive and finite"));
        }
        if !(self.nu >= 0.0) {
            return Err(Error::config("medium.nu", "must be non-negative"));
        }
        if self.nu >= 1.0 / self.a_star {
            return Err(Error::config(
                "medium.nu",
                format!(
                    "uniform ellipticity requires nu < 1/a_star = {}, got {}",
                    1.0 / self.a_star,
                    self.nu
                ),
            ));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::config("medium.epsilon", "must lie in (0, 1)"));
        }
        if self.micro_points_per_eps < 4 {
            return Err(Error::config(
                "medium.micro_points_per_eps",
                format!("grid too coarse: need at least 4, got {}", self.micro_points_per_eps),
            ));
        }
        if self.model.is_long_range() {
            if !(self.alpha > 0.0 && self.alpha < 1.0) {
                return Err(Error::config("medium.alpha", "long-range media need alpha in (0, 1)"));
            }
        } else if self.alpha != 1.0 {
            return Err(Error::config("medium.alpha", "short-range media use alpha = 1"));
        }
        Ok(())
    }

    pub fn micro_h(&self) -> f64 {
        match self.model {
            MediumModel::IidCell => self.epsilon,
            _ => self.epsilon / self.micro_points_per_eps as f64,
        }
    }

    pub fn cell_count(&self) -> usize {
        (1.0 / self.micro_h() - 1e-9).ceil() as usize
    }

    /// Lower ellipticity constant `λ = (1/a* + ν)^-1`.
    pub fn lambda(&self) -> f64 {
        1.0 / (1.0 / self.a_star + self.nu)
    }

    /// Upper ellipticity constant `Λ = (1/a* - ν)^-1`.
    pub fn big_lambda(&self) -> f64 {
        1.0 / (1.0 / self.a_star - self.nu)
    }

    /// Exponent `(α ∧ 1)/2` of the corrector rescaling.
    pub fn rescale_exponent(&self) -> f64 {
        self.alpha.min(1.0) / 2.0
    }

    pub fn with_epsilon(&self, epsilon: f64) -> MediumSpec {
        MediumSpec { epsilon, ..self.clone() }
    }
}

/// One realization of `1/a_ε`, piecewise constant on cells of width `micro_h`
/// (the last cell may be shorter so that the cells tile [0, 1]).
#[derive(Clone, Debug, PartialEq)]
pub struct MediumSample<T = f64> {
    cells: Vec<T>,
    micro_h: T,
    a_star: T,
    prefix: Vec<T>,
}

impl<T: Real> MediumSample<T> {
    pub fn new(cells: Vec<T>, micro_h: T, a_star: T) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::Argument("medium sample needs at least one cell".into()));
        }
        let n = cells.len();
        let covered = micro_h * T::from_usize_exact(n);
        let full = micro_h * T::from_usize_exact(n - 1);
        if !(covered >= T::one() - T::lit(1e-9) && full < T::one()) {
            return Err(Error::Argument(format!(
                "{n} cells of width {micro_h} do not tile [0, 1]"
            )));
        }
        if let Some(i) = cells.iter().position(|&c| !(c > T::zero() && c.is_finite())) {
            return Err(Error::Domain(format!("cell {i} has non-positive 1/a = {}", cells[i])));
        }
        let mut prefix = Vec::with_capacity(n + 1);
        let mut acc = T::zero();
        prefix.push(acc);
        for (i, &c) in cells.iter().enumerate() {
            let (l, r) = (full.min(micro_h * T::from_usize_exact(i)), T::one().min(micro_h * T::from_usize_exact(i + 1)));
            acc += c * (r - l);
            prefix.push(acc);
        }
        Ok(MediumSample { cells, micro_h, a_star, prefix })
    }

    /// The deterministic medium `a ≡ a*`.
    pub fn constant(a_star: T, micro_h: T) -> Result<Self> {
        let n = (T::one() / micro_h - T::lit(1e-9)).ceil().to_usize().unwrap_or(0);
        Self::new(vec![T::one() / a_star; n.max(1)], micro_h, a_star)
    }

    pub fn cells(&self) -> &[T] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn micro_h(&self) -> T {
        self.micro_h
    }

    pub fn a_star(&self) -> T {
        self.a_star
    }

    pub fn cell_left(&self, i: usize) -> T {
        self.micro_h * T::from_usize_exact(i)
    }

    pub fn cell_right(&self, i: usize) -> T {
        if i + 1 == self.cells.len() {
            T::one()
        } else {
            self.micro_h * T::from_usize_exact(i + 1)
        }
    }

    /// Index of the cell containing `x` (left-closed; x = 1 maps to the last cell).
    pub fn cell_index(&self, x: T) -> usize {
        let i = (x / self.micro_h).floor().to_usize().unwrap_or(0);
        i.min(self.cells.len() - 1)
    }

    /// `∫_0^x a_ε^{-1}`, exact for the piecewise-constant representation.
    pub fn primitive(&self, x: T) -> T {
        let i = self.cell_index(x);
        self.prefix[i] + self.cells[i] * (x - self.cell_left(i))
    }

    /// Cumulative integrals of `1/a` at the cell boundaries.
    pub fn prefix(&self) -> &[T] {
        &self.prefix
    }

    pub fn cast<U: Real>(&self) -> MediumSample<U> {
        MediumSample {
            cells: self.cells.iter().map(|c| U::lit(c.as_f64())).collect(),
            micro_h: U::lit(self.micro_h.as_f64()),
            a_star: U::lit(self.a_star.as_f64()),
            prefix: self.prefix.iter().map(|c| U::lit(c.as_f64())).collect(),
        }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let res: std::result::Result<(), csv::Error> = (|| {
            w.write_record(["cell_index", "x_left", "inv_a"])?;
            for (i, c) in self.cells.iter().enumerate() {
                w.write_record([
                    i.to_string(),
                    format!("{:.16e}", self.cell_left(i).as_f64()),
                    format!("{:.16e}", c.as_f64()),
                ])?;
            }
            w.flush()?;
            Ok(())
        })();
        res.map_err(|e| Error::Io { path: "medium csv".into(), source: e.into() })
    }
}

/// `∫_lo^up a_ε^{-1}(t) dt`, exact for the piecewise-constant sample.
pub fn quadrature_inverse_a<T: Real>(sample: &MediumSample<T>, lo: T, up: T) -> Result<T> {
    if !(lo >= T::zero() && up <= T::one()) {
        return Err(Error::Argument(format!("interval [{lo}, {up}] not inside [0, 1]")));
    }
    if lo > up {
        return Err(Error::Argument(format!("reversed bounds: lo = {lo} > up = {up}")));
    }
    if lo == up {
        return Ok(T::zero());
    }
    Ok(sample.primitive(up) - sample.primitive(lo))
}

/// Covariance of the long-range Gaussian field at fast lag `tau`.
pub fn lrc_gaussian_covariance(alpha: f64, tau: f64) -> f64 {
    (1.0 + tau * tau).powf(-alpha / 2.0)
}

enum LrcGenerator {
    Circulant {
        sqrt_eig: Vec<f64>,
        fft: Arc<dyn Fft<f64>>,
    },
    Dense {
        n: usize,
        chol: Vec<f64>,
    },
}

/// Draws realizations for a fixed spec; caches the long-range factorization.
pub struct MediumSampler {
    spec: MediumSpec,
    lrc: Option<LrcGenerator>,
    clipped: f64,
}

const CLIP_TOLERANCE: f64 = 1e-10;
const DENSE_LIMIT: usize = 4096;
/// Embeddings are doubled at least this far before giving up, so short
/// grids of a very smooth covariance still get a usable padding.
const MIN_EMBEDDING_CAP: usize = 1 << 20;

impl MediumSampler {
    pub fn new(spec: &MediumSpec) -> Result<Self> {
        spec.validate()?;
        let mut sampler = MediumSampler { spec: spec.clone(), lrc: None, clipped: 0.0 };
        if spec.model.is_long_range() && spec.nu > 0.0 {
            let n = spec.cell_count();
            let dt = 1.0 / spec.micro_points_per_eps as f64;
            let (gen, clipped) = build_lrc_generator(n, |k| lrc_gaussian_covariance(spec.alpha, k as f64 * dt), 32)?;
            sampler.lrc = Some(gen);
            sampler.clipped = clipped;
        }
        Ok(sampler)
    }

    pub fn spec(&self) -> &MediumSpec {
        &self.spec
    }

    /// Largest eigenvalue magnitude clipped to zero in the circulant embedding,
    /// relative to the largest eigenvalue.
    pub fn clipped_eigenvalue(&self) -> f64 {
        self.clipped
    }

    pub fn rng(&self, realization_index: u64) -> ChaCha12Rng {
        let mut rng = ChaCha12Rng::seed_from_u64(self.spec.seed);
        rng.set_stream(realization_index);
        rng
    }

    pub fn sample(&self, realization_index: u64) -> Result<MediumSample> {
        let spec = &self.spec;
        let n = spec.cell_count();
        let base = 1.0 / spec.a_star;
        let nu = spec.nu;
        if nu == 0.0 {
            return MediumSample::new(vec![base; n], spec.micro_h(), spec.a_star);
        }
        let mut rng = self.rng(realization_index);
        let cells: Vec<f64> = match spec.model {
            MediumModel::IidCell => (0..n)
                .map(|_| if rng.random::<bool>() { base + nu } else { base - nu })
                .collect(),
            MediumModel::TransformedOu => {
                let rho = (-1.0 / spec.micro_points_per_eps as f64).exp();
                let innov = (1.0 - rho * rho).sqrt();
                let mut g: f64 = rng.sample(StandardNormal);
                let mut out = Vec::with_capacity(n);
                for _ in 0..n {
                    out.push(base + nu * g.tanh());
                    let z: f64 = rng.sample(StandardNormal);
                    g = rho * g + innov * z;
                }
                out
            }
            MediumModel::TransformedLrc => {
                let gen = self.lrc.as_ref().expect("generator built for long-range media");
                gaussian_field(gen, n, &mut rng)
                    .into_iter()
                    .map(|g| base + nu * g.tanh())
                    .collect()
            }
        };
        MediumSample::new(cells, spec.micro_h(), spec.a_star)
    }
}

/// One realization, building the sampler on the fly.
pub fn sample_medium(spec: &MediumSpec, realization_index: u64) -> Result<MediumSample> {
    MediumSampler::new(spec)?.sample(realization_index)
}

fn build_lrc_generator<F: Fn(usize) -> f64>(n: usize, cov: F, max_growth: usize) -> Result<(LrcGenerator, f64)> {
    if n < 2 {
        return Ok((LrcGenerator::Dense { n, chol: vec![cov(0).sqrt(); n] }, 0.0));
    }
    let m0 = (2 * (n - 1)).next_power_of_two();
    let mut planner = FftPlanner::new();
    let mut worst = f64::NEG_INFINITY;
    let mut m = m0;
    let cap = if max_growth == 0 { 0 } else { (m0 * max_growth).max(MIN_EMBEDDING_CAP) };
    while m <= cap {
        let fft = planner.plan_fft_forward(m);
        let mut c: Vec<Complex<f64>> = (0..m).map(|j| Complex::new(cov(j.min(m - j)), 0.0)).collect();
        fft.process(&mut c);
        let max = c.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
        let min = c.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
        worst = min / max;
        if min >= -CLIP_TOLERANCE * max {
            let sqrt_eig = c.iter().map(|z| (z.re.max(0.0) / m as f64).sqrt()).collect();
            return Ok((LrcGenerator::Circulant { sqrt_eig, fft }, (-min / max).max(0.0)));
        }
        m *= 2;
    }
    if n <= DENSE_LIMIT {
        return Ok((LrcGenerator::Dense { n, chol: dense_cholesky(n, &cov)? }, 0.0));
    }
    Err(Error::Generation(format!(
        "circulant embedding not positive semi-definite: most negative eigenvalue is {worst:.3e} of the largest"
    )))
}

/// Cholesky factor of the Toeplitz covariance; pivots below
/// the clipping tolerance are set to zero (rank-deficient directions).
fn dense_cholesky<F: Fn(usize) -> f64>(n: usize, cov: &F) -> Result<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    let floor = CLIP_TOLERANCE * cov(0);
    for i in 0..n {
        for j in 0..=i {
            let mut s = cov(i - j);
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if s < -floor {
                    return Err(Error::Generation(format!(
                        "dense covariance factorization failed at row {i}: pivot {s:.3e}"
                    )));
                }
                l[i * n + i] = if s > floor { s.sqrt() } else { 0.0 };
            } else if l[j * n + j] > 0.0 {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    Ok(l)
}

fn gaussian_field<R: Rng>(gen: &LrcGenerator, n: usize, rng: &mut R) -> Vec<f64> {
    match gen {
        LrcGenerator::Circulant { sqrt_eig, fft } => {
            let mut buf: Vec<Complex<f64>> = sqrt_eig
                .iter()
                .map(|s| {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    Complex::new(s * re, s * im)
                })
                .collect();
            fft.process(&mut buf);
            buf.truncate(n);
            buf.into_iter().map(|z| z.re).collect()
        }
        LrcGenerator::Dense { n: dim, chol } => {
            let z: Vec<f64> = (0..*dim).map(|_| rng.sample(StandardNormal)).collect();
            (0..*dim)
                .map(|i| (0..=i).map(|k| chol[i * dim + k] * z[k]).sum())
                .collect()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationFacts {
    /// `σ² = ∫ R`; infinite for long-range media.
    pub sigma2: f64,
    /// Prefactor of `R(τ) ~ κ τ^-α`; zero for short-range media.
    pub kappa: f64,
    pub alpha: f64,
}

const HERMITE_NODES: usize = 64;

fn hermite_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: once_cell::sync::Lazy<(Vec<f64>, Vec<f64>)> = once_cell::sync::Lazy::new(|| gauss_hermite(HERMITE_NODES));
    &RULE
}

/// `E[Φ(X) Φ(ρX + √(1-ρ²) Z)]` for `Φ = ν tanh` and independent standard normals.
pub fn transformed_covariance(nu: f64, rho: f64) -> f64 {
    let rule = hermite_rule();
    let c = (1.0 - rho * rho).max(0.0).sqrt();
    normal_expectation(rule, |x| {
        nu * x.tanh() * normal_expectation(rule, |z| nu * (rho * x + c * z).tanh())
    })
}

/// `E[g Φ(g)]` for `Φ = ν tanh`.
pub fn hermite_first_coefficient(nu: f64) -> f64 {
    normal_expectation(hermite_rule(), |g| g * nu * g.tanh())
}

/// Covariance `R(τ)` of `q` at fast lag `τ`.
pub fn medium_covariance(spec: &MediumSpec, tau: f64) -> f64 {
    let tau = tau.abs();
    match spec.model {
        MediumModel::IidCell => spec.nu * spec.nu * (1.0 - tau).max(0.0),
        MediumModel::TransformedOu => transformed_covariance(spec.nu, (-tau).exp()),
        MediumModel::TransformedLrc => transformed_covariance(spec.nu, lrc_gaussian_covariance(spec.alpha, tau)),
    }
}

pub fn correlation_facts(spec: &MediumSpec) -> Result<CorrelationFacts> {
    spec.validate()?;
    if spec.nu == 0.0 {
        return Err(Error::Domain("nu = 0 gives sigma^2 = 0; the medium has no fluctuation".into()));
    }
    match spec.model {
        MediumModel::IidCell => Ok(CorrelationFacts { sigma2: spec.nu * spec.nu, kappa: 0.0, alpha: 1.0 }),
        MediumModel::TransformedOu => {
            let nu = spec.nu;
            // ∫_R R(τ)dτ = 2 ∫_0^1 R̃(ρ)/ρ dρ with ρ = e^{-τ}
            let est = adaptive(|rho| transformed_covariance(nu, rho) / rho, 0.0, 1.0, 1e-13, 1e-11)?;
            let sigma2 = 2.0 * est.value;
            if !(sigma2 > 0.0) {
                return Err(Error::Numeric(format!("sigma^2 quadrature gave {sigma2}")));
            }
            Ok(CorrelationFacts { sigma2, kappa: 0.0, alpha: 1.0 })
        }
        MediumModel::TransformedLrc => {
            let c1 = hermite_first_coefficient(spec.nu);
            let kappa = c1 * c1;
            if !(kappa > 0.0) {
                return Err(Error::Numeric(format!("kappa = {kappa} must be positive")));
            }
            Ok(CorrelationFacts { sigma2: f64::INFINITY, kappa, alpha: spec.alpha })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    /// Monte Carlo estimate of `E[(∫_a^b q_ε)²]`.
    pub second_moment: f64,
    pub second_moment_se: f64,
    /// `ε (b - a) ‖R‖₁`.
    pub bound: f64,
    pub ratio: f64,
    pub ratio_se: f64,
    pub realizations: usize,
}

impl BoundCheck {
    pub fn holds(&self) -> bool {
        self.ratio <= 1.0 + 3.0 * self.ratio_se
    }
}

/// Monte Carlo check of `E[(∫_a^b q_ε)²] ≤ ε (b - a) ‖R‖₁` for short-range media.
pub fn empirical_oscillatory_bound(spec: &MediumSpec, interval: (f64, f64), realizations: usize) -> Result<BoundCheck> {
    spec.validate()?;
    if spec.model.is_long_range() {
        return Err(Error::Unsupported(
            "the oscillatory-integral bound needs an integrable correlation; long-range media do not have one".into(),
        ));
    }
    if realizations < 100 {
        return Err(Error::config("realizations", "need at least 100 realizations"));
    }
    let (a, b) = interval;
    if !(0.0 <= a && a <= b && b <= 1.0) {
        return Err(Error::Argument(format!("interval [{a}, {b}] not inside [0, 1]")));
    }
    if spec.nu == 0.0 {
        return Ok(BoundCheck {
            second_moment: 0.0,
            second_moment_se: 0.0,
            bound: 0.0,
            ratio: 0.0,
            ratio_se: 0.0,
            realizations,
        });
    }
    let norm = correlation_facts(spec)?.sigma2;
    let sampler = MediumSampler::new(spec)?;
    use rayon::prelude::*;
    let squares: Vec<f64> = (0..realizations as u64)
        .into_par_iter()
        .map(|i| {
            let s = sampler.sample(i)?;
            let v = quadrature_inverse_a(&s, a, b)? - (b - a) / spec.a_star;
            Ok(v * v)
        })
        .collect::<Result<_>>()?;
    let m = realizations as f64;
    let mean = crate::stats::pairwise_sum(&squares) / m;
    let dev: Vec<f64> = squares.iter().map(|s| (s - mean) * (s - mean)).collect();
    let var = crate::stats::pairwise_sum(&dev) / (m - 1.0);
    let se = (var / m).sqrt();
    let bound = spec.epsilon * (b - a) * norm;
    Ok(BoundCheck {
        second_moment: mean,
        second_moment_se: se,
        bound,
        ratio: mean / bound,
        ratio_se: se / bound,
        realizations,
    })
}
