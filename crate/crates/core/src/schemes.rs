//! FEM, MsFEM, HMM and hybrid discretizations in conservation form.
//!
//! Every scheme produces a stiffness vector `b` (one entry per element) and
//! the tridiagonal system `(A U)_i = -D⁺(b_i D⁻U_i) = F_i` on the interior nodes.

use serde::{Deserialize, Serialize};

use crate::elliptic::{ContinuumSolution, SourceTerm};
use crate::quadrature::{gauss_legendre, gauss_legendre_integrate};
use crate::stats::pairwise_sum;
use crate::error::{Error, Result};
use crate::random_media::{quadrature_inverse_a, MediumSample, MediumSampler};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SchemeKind {
    Fem,
    Msfem,
    /// Micro-problem on a centered patch of length `delta_over_h · h`.
    Hmm { delta_over_h: f64 },
    /// Sum of `m_patches` patch stiffnesses tiling each element.
    Hybrid { m_patches: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchemeConfig {
    pub kind: SchemeKind,
    pub n_elements: usize,
}

impl SchemeConfig {
    pub fn new(kind: SchemeKind, n_elements: usize) -> Self {
        SchemeConfig { kind, n_elements }
    }

    pub fn h(&self) -> f64 {
        1.0 / self.n_elements as f64
    }

    /// Patch length δ; equals `h` for schemes without patches.
    pub fn delta(&self) -> f64 {
        match self.kind {
            SchemeKind::Hmm { delta_over_h } => delta_over_h * self.h(),
            SchemeKind::Hybrid { m_patches } => self.h() / m_patches as f64,
            _ => self.h(),
        }
    }

    pub fn with_n(&self, n_elements: usize) -> Self {
        SchemeConfig { n_elements, ..*self }
    }

    pub fn label(&self) -> String {
        match self.kind {
            SchemeKind::Fem => "fem".into(),
            SchemeKind::Msfem => "msfem".into(),
            SchemeKind::Hmm { delta_over_h } => format!("hmm_d{delta_over_h}"),
            SchemeKind::Hybrid { m_patches } => format!("hybrid_m{m_patches}"),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_elements < 2 {
            return Err(Error::config("scheme.n_elements", "need at least 2 elements"));
        }
        match self.kind {
            SchemeKind::Hmm { delta_over_h } => {
                if !(delta_over_h > 0.0) {
                    return Err(Error::config("scheme.delta", "patch length must be positive"));
                }
                if delta_over_h > 1.0 {
                    return Err(Error::config("scheme.delta", "patch exceeds the element: need delta <= h"));
                }
            }
            SchemeKind::Hybrid { m_patches: 0 } => {
                return Err(Error::config("scheme.m_patches", "need at least one patch"));
            }
            _ => {}
        }
        Ok(())
    }

    /// Checks mesh/micro-grid compatibility: `h ≥ 4 micro_h` and element
    /// boundaries on micro-cell boundaries.
    pub fn validate_for<T: Real>(&self, sample: &MediumSample<T>) -> Result<()> {
        self.validate()?;
        let micro = sample.micro_h().as_f64();
        let h = self.h();
        if h < 4.0 * micro {
            return Err(Error::config(
                "scheme.n_elements",
                format!("h = {h} must be at least 4 micro cells ({micro})"),
            ));
        }
        let ratio = h / micro;
        if (ratio - ratio.round()).abs() > 1e-9 * ratio || sample.len() != self.n_elements * ratio.round() as usize {
            return Err(Error::config(
                "scheme.n_elements",
                format!("element boundaries must fall on micro-cell boundaries (h / micro_h = {ratio})"),
            ));
        }
        Ok(())
    }
}

/// `b^k` for `k = 1..N` (stored zero-based).
#[derive(Clone, Debug, PartialEq)]
pub struct StiffnessVector<T = f64> {
    pub b: Vec<T>,
    pub a_star_reference: T,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    Hat,
    Oscillatory,
}

#[derive(Clone, Debug)]
pub struct DiscreteSolution<T = f64> {
    /// Interior values `U_1..U_{N-1}`.
    pub nodal: Vec<T>,
    pub basis: Basis,
    pub scheme: SchemeConfig,
    pub stiffness: StiffnessVector<T>,
    /// `‖A U - F‖∞`.
    pub residual: T,
}

impl<T: Real> DiscreteSolution<T> {
    /// Nodal value `U_k` for `k = 0..=N`, including the boundary zeros.
    pub fn node(&self, k: usize) -> T {
        if k == 0 || k == self.scheme.n_elements {
            T::zero()
        } else {
            self.nodal[k - 1]
        }
    }
}

/// Node coordinate `x_k = k/N`.
pub fn node<T: Real>(k: usize, n: usize) -> T {
    T::from_usize_exact(k) / T::from_usize_exact(n)
}

/// Element index `j(x) ∈ 1..=N` with `x_{j-1} < x ≤ x_j`; `x = 0` maps to 1.
pub fn element_of<T: Real>(x: T, n: usize) -> usize {
    let j = (x * T::from_usize_exact(n)).ceil().to_usize().unwrap_or(1);
    j.clamp(1, n)
}

fn element_integral<T: Real>(sample: &MediumSample<T>, n: usize, k: usize) -> Result<T> {
    quadrature_inverse_a(sample, node(k - 1, n), node(k, n))
}

pub fn assemble_b<T: Real>(sample: &MediumSample<T>, config: &SchemeConfig) -> Result<StiffnessVector<T>> {
    config.validate_for(sample)?;
    let n = config.n_elements;
    let h = T::one() / T::from_usize_exact(n);
    let a_star = sample.a_star();
    let mut b = Vec::with_capacity(n);
    for k in 1..=n {
        let bk = match config.kind {
            SchemeKind::Fem => a_star / h,
            SchemeKind::Msfem => T::one() / element_integral(sample, n, k)?,
            SchemeKind::Hmm { delta_over_h } => {
                if delta_over_h == 1.0 {
                    T::one() / element_integral(sample, n, k)?
                } else {
                    let ratio = T::lit(delta_over_h);
                    let mid = (node::<T>(k - 1, n) + node::<T>(k, n)) / T::lit(2.0);
                    let half = ratio * h / T::lit(2.0);
                    ratio / quadrature_inverse_a(sample, mid - half, mid + half)?
                }
            }
            SchemeKind::Hybrid { m_patches } => {
                let m = m_patches as usize;
                let w = T::one() / T::from_usize_exact(m);
                let left: T = node(k - 1, n);
                let mut acc = T::zero();
                for l in 0..m {
                    let lo = if l == 0 { left } else { left + h * T::from_usize_exact(l) * w };
                    let hi = if l + 1 == m { node(k, n) } else { left + h * T::from_usize_exact(l + 1) * w };
                    acc += w * w / quadrature_inverse_a(sample, lo, hi)?;
                }
                acc
            }
        };
        b.push(bk);
    }
    Ok(StiffnessVector { b, a_star_reference: a_star })
}

/// Load vector `F_j = ∫ f φ^j`, `j = 1..N-1`.
pub fn assemble_load<T: Real>(sample: &MediumSample<T>, config: &SchemeConfig, f: &SourceTerm) -> Result<Vec<T>> {
    config.validate_for(sample)?;
    f.validate()?;
    let n = config.n_elements;
    let big_f: Vec<f64> = (0..=n).map(|k| f.big_f(node(k, n))).collect();
    // half-basis integrals F̃_k = ∫_{I_k} f φ̃^k
    let tilde: Vec<T> = match config.kind {
        SchemeKind::Msfem => {
            let q = element_q_integrals(sample, n, f);
            (1..=n)
                .map(|k| -> Result<T> {
                    let bk = T::one() / element_integral(sample, n, k)?;
                    Ok(T::lit(big_f[k]) - bk * q[k - 1])
                })
                .collect::<Result<_>>()?
        }
        _ => {
            let h = 1.0 / n as f64;
            (1..=n)
                .map(|k| {
                    let dg = f.big_g(node(k, n)) - f.big_g(node(k - 1, n));
                    T::lit(big_f[k] - dg / h)
                })
                .collect()
        }
    };
    Ok((1..n)
        .map(|j| tilde[j - 1] + T::lit(big_f[j + 1] - big_f[j]) - tilde[j])
        .collect())
}

/// `∫_{I_k} F a^{-1}` for every element, exact on the micro-grid.
fn element_q_integrals<T: Real>(sample: &MediumSample<T>, n: usize, f: &SourceTerm) -> Vec<T> {
    let per = sample.len() / n;
    let mut out = Vec::with_capacity(n);
    let mut g_left = f.big_g(0.0);
    for k in 0..n {
        let mut acc = T::zero();
        for i in k * per..(k + 1) * per {
            let g_right = f.big_g(sample.cell_right(i).as_f64());
            acc += sample.cells()[i] * T::lit(g_right - g_left);
            g_left = g_right;
        }
        out.push(acc);
    }
    out
}

fn residual_tolerance<T: Real>(n: usize) -> T {
    T::lit(1e-10).max(T::epsilon() * T::from_usize_exact(64 * n))
}

/// Solves the conservation-form tridiagonal system by the Thomas algorithm.
///
/// Returns the interior nodal values and the residual `‖A U - F‖∞`.
pub fn solve_tridiagonal<T: Real>(b: &StiffnessVector<T>, load: &[T]) -> Result<(Vec<T>, T)> {
    let n = b.b.len();
    if load.len() + 1 != n {
        return Err(Error::Argument(format!(
            "load has {} entries but {} elements need {}",
            load.len(),
            n,
            n - 1
        )));
    }
    let m = n - 1;
    if m == 0 {
        return Ok((Vec::new(), T::zero()));
    }
    let bb = &b.b;
    let diag = |i: usize| bb[i] + bb[i + 1];
    let mut c = vec![T::zero(); m];
    let mut d = vec![T::zero(); m];
    let mut pivot = diag(0);
    if !(pivot > T::zero()) {
        return Err(Error::Internal(format!("non-positive pivot {pivot} at row 1")));
    }
    c[0] = -bb[1] / pivot;
    d[0] = load[0] / pivot;
    for i in 1..m {
        let lower = -bb[i];
        pivot = diag(i) - lower * c[i - 1];
        if !(pivot > T::zero()) {
            return Err(Error::Internal(format!("non-positive pivot {pivot} at row {}", i + 1)));
        }
        c[i] = if i + 1 < m { -bb[i + 1] / pivot } else { T::zero() };
        d[i] = (load[i] - lower * d[i - 1]) / pivot;
    }
    let mut u = d;
    for i in (0..m - 1).rev() {
        let next = u[i + 1];
        u[i] -= c[i] * next;
    }
    let at = |k: usize| if k == 0 || k == n { T::zero() } else { u[k - 1] };
    let mut res = T::zero();
    let mut scale = T::zero();
    for j in 1..n {
        let au = bb[j - 1] * (at(j) - at(j - 1)) - bb[j] * (at(j + 1) - at(j));
        res = res.max((au - load[j - 1]).abs());
        scale = scale.max(load[j - 1].abs());
    }
    if res > residual_tolerance::<T>(n) * scale {
        return Err(Error::Numeric(format!("tridiagonal residual {res} exceeds tolerance for |F| = {scale}")));
    }
    Ok((u, res))
}

pub fn solve<T: Real>(sample: &MediumSample<T>, config: &SchemeConfig, f: &SourceTerm) -> Result<DiscreteSolution<T>> {
    let stiffness = assemble_b(sample, config)?;
    let load = assemble_load(sample, config, f)?;
    let (nodal, residual) = solve_tridiagonal(&stiffness, &load)?;
    let basis = if config.kind == SchemeKind::Msfem { Basis::Oscillatory } else { Basis::Hat };
    Ok(DiscreteSolution { nodal, basis, scheme: *config, stiffness, residual })
}

/// Standard FEM for the homogenized problem, independent of any medium.
pub fn solve_fem_homogenized<T: Real>(a_star: T, n_elements: usize, f: &SourceTerm) -> Result<DiscreteSolution<T>> {
    let medium = MediumSample::constant(a_star, T::one() / T::from_usize_exact(4 * n_elements))?;
    solve(&medium, &SchemeConfig::new(SchemeKind::Fem, n_elements), f)
}

/// `u^h(x)`: hat interpolation, or the oscillatory MsFEM basis on `I_{j(x)}`.
pub fn evaluate<T: Real>(sol: &DiscreteSolution<T>, sample: &MediumSample<T>, x: T) -> Result<T> {
    if !(x >= T::zero() && x <= T::one()) {
        return Err(Error::Argument(format!("x = {x} outside [0, 1]")));
    }
    let n = sol.scheme.n_elements;
    let j = element_of(x, n);
    let (ul, ur) = (sol.node(j - 1), sol.node(j));
    let phi = match sol.basis {
        Basis::Hat => (x * T::from_usize_exact(n) - T::from_usize_exact(j - 1)).max(T::zero()).min(T::one()),
        Basis::Oscillatory => sol.stiffness.b[j - 1] * (sample.primitive(x) - sample.primitive(node(j - 1, n))),
    };
    Ok(ul + (ur - ul) * phi)
}

/// `(u^h)'(x)` inside a micro-cell (the cell containing `x`).
pub fn evaluate_derivative<T: Real>(sol: &DiscreteSolution<T>, sample: &MediumSample<T>, x: T) -> Result<T> {
    if !(x >= T::zero() && x <= T::one()) {
        return Err(Error::Argument(format!("x = {x} outside [0, 1]")));
    }
    let n = sol.scheme.n_elements;
    let j = element_of(x, n);
    let du = sol.node(j) - sol.node(j - 1);
    Ok(match sol.basis {
        Basis::Hat => du * T::from_usize_exact(n),
        Basis::Oscillatory => du * sol.stiffness.b[j - 1] * sample.cells()[sample.cell_index(x)],
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorNorms {
    /// `|u^h - u|_{H¹}`.
    pub h1_seminorm: f64,
    /// `‖u^h - u‖₂`.
    pub l2: f64,
}

/// Error of a discrete solution against the exact solution on the same
/// medium, by Gauss–Legendre per micro-cell (exact for polynomial sources).
pub fn error_norms(sol: &DiscreteSolution<f64>, exact: &ContinuumSolution<f64>) -> Result<ErrorNorms> {
    let sample = exact.medium();
    let rule = gauss_legendre(exact.source().big_f_degree() + 3);
    let mut h1 = Vec::with_capacity(sample.len());
    let mut l2 = Vec::with_capacity(sample.len());
    for i in 0..sample.len() {
        let (l, r) = (sample.cell_left(i), sample.cell_right(i));
        let mut err = None;
        let d = gauss_legendre_integrate(&rule, l, r, |x| match (evaluate_derivative(sol, sample, x), exact.derivative(x)) {
            (Ok(a), Ok(b)) => (a - b) * (a - b),
            (Err(e), _) | (_, Err(e)) => {
                err = Some(e);
                0.0
            }
        });
        let v = gauss_legendre_integrate(&rule, l, r, |x| match (evaluate(sol, sample, x), exact.value(x)) {
            (Ok(a), Ok(b)) => (a - b) * (a - b),
            _ => f64::NAN,
        });
        if let Some(e) = err {
            return Err(e);
        }
        h1.push(d);
        l2.push(v);
    }
    let (h1, l2) = (pairwise_sum(&h1), pairwise_sum(&l2));
    if !(h1.is_finite() && l2.is_finite()) {
        return Err(Error::Numeric("error norm quadrature produced a non-finite value".into()));
    }
    Ok(ErrorNorms { h1_seminorm: h1.sqrt(), l2: l2.sqrt() })
}

/// Rescaled correctors `ε^{-(α∧1)/2} (u^h_ε - u^h_0)(x)` for several schemes
/// sharing one medium realization.
pub fn corrector_samples_multi(
    schemes: &[SchemeConfig],
    sampler: &MediumSampler,
    f: &SourceTerm,
    probes: &[f64],
    realization_index: u64,
) -> Result<Vec<Vec<f64>>> {
    let spec = sampler.spec();
    let sample = sampler.sample(realization_index)?;
    let scale = spec.epsilon.powf(-spec.rescale_exponent());
    schemes
        .iter()
        .map(|cfg| {
            let reference = solve_fem_homogenized(spec.a_star, cfg.n_elements, f)?;
            let sol = solve(&sample, cfg, f)?;
            let flat = MediumSample::constant(spec.a_star, 1.0 / (4 * cfg.n_elements) as f64)?;
            probes
                .iter()
                .map(|&x| Ok(scale * (evaluate(&sol, &sample, x)? - evaluate(&reference, &flat, x)?)))
                .collect()
        })
        .collect()
}

pub fn corrector_samples(
    scheme: &SchemeConfig,
    sampler: &MediumSampler,
    f: &SourceTerm,
    probes: &[f64],
    realization_index: u64,
) -> Result<Vec<f64>> {
    Ok(corrector_samples_multi(std::slice::from_ref(scheme), sampler, f, probes, realization_index)?
        .pop()
        .expect("one scheme"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::{solve_exact, solve_homogenized};
    use crate::random_media::{sample_medium, MediumModel, MediumSpec};

    fn iid(eps: f64, seed: u64) -> MediumSpec {
        MediumSpec { model: MediumModel::IidCell, a_star: 1.0, nu: 0.25, alpha: 1.0, epsilon: eps, micro_points_per_eps: 16, seed }
    }

    #[test]
    fn constant_medium_collapses_all_b() {
        let s = MediumSample::<f64>::constant(2.0, 1.0 / 160.0).unwrap();
        for kind in [SchemeKind::Fem, SchemeKind::Msfem, SchemeKind::Hmm { delta_over_h: 0.3 }, SchemeKind::Hybrid { m_patches: 4 }] {
            let b = assemble_b(&s, &SchemeConfig::new(kind, 10)).unwrap();
            for bk in b.b {
                assert!((bk - 20.0).abs() < 1e-12, "{kind:?}: {bk}");
            }
        }
    }

    #[test]
    fn hmm_full_patch_equals_msfem_b() {
        let s = sample_medium(&iid(1.0 / 256.0, 4), 0).unwrap();
        let ms = assemble_b(&s, &SchemeConfig::new(SchemeKind::Msfem, 16)).unwrap();
        let hmm = assemble_b(&s, &SchemeConfig::new(SchemeKind::Hmm { delta_over_h: 1.0 }, 16)).unwrap();
        let hyb = assemble_b(&s, &SchemeConfig::new(SchemeKind::Hybrid { m_patches: 1 }, 16)).unwrap();
        assert_eq!(ms.b, hmm.b);
        assert_eq!(ms.b, hyb.b);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let s = sample_medium(&iid(1.0 / 256.0, 4), 0).unwrap();
        assert!(assemble_b(&s, &SchemeConfig::new(SchemeKind::Hmm { delta_over_h: 1.5 }, 16)).is_err());
        assert!(assemble_b(&s, &SchemeConfig::new(SchemeKind::Hmm { delta_over_h: 0.0 }, 16)).is_err());
        assert!(assemble_b(&s, &SchemeConfig::new(SchemeKind::Msfem, 128)).is_err());
        assert!(assemble_b(&s, &SchemeConfig::new(SchemeKind::Msfem, 24)).is_err());
    }

    #[test]
    fn hat_load_for_unit_source() {
        let s = MediumSample::<f64>::constant(1.0, 1.0 / 64.0).unwrap();
        let load = assemble_load(&s, &SchemeConfig::new(SchemeKind::Fem, 8), &SourceTerm::ConstantOne).unwrap();
        assert!(load.iter().all(|v| (v - 0.125).abs() < 1e-15));
        let ms = assemble_load(&s, &SchemeConfig::new(SchemeKind::Msfem, 8), &SourceTerm::ConstantOne).unwrap();
        for (a, b) in load.iter().zip(&ms) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn msfem_load_matches_refined_quadrature() {
        let s = sample_medium(&iid(1.0 / 128.0, 9), 0).unwrap();
        let cfg = SchemeConfig::new(SchemeKind::Msfem, 8);
        let f = SourceTerm::ConstantOne;
        let load = assemble_load(&s, &cfg, &f).unwrap();
        let b = assemble_b(&s, &cfg).unwrap();
        // brute force: midpoint rule of f φ^j on cells refined 10x
        let fine = s.micro_h() / 10.0;
        for j in 1..8 {
            let mut acc = 0.0;
            for k in 0..(10 * s.len()) {
                let t = (k as f64 + 0.5) * fine;
                let e = element_of(t, 8);
                let phi = if e == j {
                    b.b[j - 1] * (s.primitive(t) - s.primitive(node(j - 1, 8)))
                } else if e == j + 1 {
                    1.0 - b.b[j] * (s.primitive(t) - s.primitive(node(j, 8)))
                } else {
                    0.0
                };
                acc += f.f(t) * phi * fine;
            }
            assert!((acc - load[j - 1]).abs() < 1e-8, "j = {j}: {acc} vs {}", load[j - 1]);
        }
    }

    #[test]
    fn fem_is_nodally_exact() {
        let f = SourceTerm::ConstantOne;
        let sol = solve_fem_homogenized(1.0, 4, &f).unwrap();
        for k in 1..4 {
            let x = k as f64 / 4.0;
            assert!((sol.node(k) - x * (1.0 - x) / 2.0).abs() < 1e-15);
        }
        let zero = solve_tridiagonal(&sol.stiffness, &[0.0; 3]).unwrap();
        assert!(zero.0.iter().all(|&u| u == 0.0));
    }

    #[test]
    fn thomas_matches_dense_inverse() {
        let b = StiffnessVector::<f64> { b: vec![3.0, 1.5, 4.2], a_star_reference: 1.0 };
        let load = [0.7, -1.1];
        let (u, _) = solve_tridiagonal(&b, &load).unwrap();
        // 2x2 Cramer's rule
        let (a11, a12, a22) = (b.b[0] + b.b[1], -b.b[1], b.b[1] + b.b[2]);
        let det = a11 * a22 - a12 * a12;
        let x1 = (load[0] * a22 - a12 * load[1]) / det;
        let x2 = (a11 * load[1] - a12 * load[0]) / det;
        assert!((u[0] - x1).abs() < 1e-12 && (u[1] - x2).abs() < 1e-12);
    }

    #[test]
    fn evaluation_at_nodes_and_on_constant_media() {
        let s = sample_medium(&iid(1.0 / 256.0, 2), 0).unwrap();
        let f = SourceTerm::ConstantOne;
        for kind in [SchemeKind::Msfem, SchemeKind::Hmm { delta_over_h: 0.5 }] {
            let sol = solve(&s, &SchemeConfig::new(kind, 16), &f).unwrap();
            for k in 0..=16 {
                assert_eq!(evaluate(&sol, &s, node(k, 16)).unwrap(), sol.node(k));
            }
        }
        let c = MediumSample::<f64>::constant(1.0, 1.0 / 256.0).unwrap();
        let ms = solve(&c, &SchemeConfig::new(SchemeKind::Msfem, 16), &f).unwrap();
        let fem = solve(&c, &SchemeConfig::new(SchemeKind::Fem, 16), &f).unwrap();
        for k in 0..50 {
            let x = k as f64 / 49.0;
            assert!((evaluate(&ms, &c, x).unwrap() - evaluate(&fem, &c, x).unwrap()).abs() < 1e-14);
        }
        assert!(evaluate(&ms, &c, 1.5).is_err());
    }

    #[test]
    fn msfem_is_nodally_exact_on_random_media() {
        let f = SourceTerm::Polynomial { coeffs: vec![1.0, 2.0] };
        for seed in 0..5 {
            let s = sample_medium(&iid(1.0 / 512.0, seed), 0).unwrap();
            let exact = solve_exact(&s, &f).unwrap();
            let sol = solve(&s, &SchemeConfig::new(SchemeKind::Msfem, 16), &f).unwrap();
            for k in 1..16 {
                let x = node::<f64>(k, 16);
                assert!((sol.node(k) - exact.value(x).unwrap()).abs() < 1e-12);
                assert!((evaluate(&sol, &s, x).unwrap() - exact.value(x).unwrap()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn error_norms_of_the_interpolant() {
        // FEM on a ≡ 1, f ≡ 1 interpolates x(1-x)/2: |e|_{H¹} = h/√12, ‖e‖₂ = h²/√120
        let flat = MediumSample::<f64>::constant(1.0, 1.0 / 64.0).unwrap();
        let sol = solve(&flat, &SchemeConfig::new(SchemeKind::Fem, 4), &SourceTerm::ConstantOne).unwrap();
        let exact = solve_exact(&flat, &SourceTerm::ConstantOne).unwrap();
        let e = error_norms(&sol, &exact).unwrap();
        let h: f64 = 0.25;
        assert!((e.h1_seminorm - h / 12f64.sqrt()).abs() < 1e-14, "{e:?}");
        assert!((e.l2 - h * h / 120f64.sqrt()).abs() < 1e-14, "{e:?}");
        let sample = sample_medium(&iid(1.0 / 256.0, 5), 0).unwrap();
        let ms = solve(&sample, &SchemeConfig::new(SchemeKind::Msfem, 8), &SourceTerm::ConstantOne).unwrap();
        let exact = solve_exact(&sample, &SourceTerm::ConstantOne).unwrap();
        let e = error_norms(&ms, &exact).unwrap();
        assert!(e.h1_seminorm > 0.0 && e.h1_seminorm <= 0.125 / (0.8 * std::f64::consts::PI));
    }

    #[test]
    fn element_convention() {
        assert_eq!(element_of(0.0, 4), 1);
        assert_eq!(element_of(0.25, 4), 1);
        assert_eq!(element_of(0.2500001, 4), 2);
        assert_eq!(element_of(1.0, 4), 4);
    }

    #[test]
    fn single_precision_solve() {
        let s = sample_medium(&iid(1.0 / 256.0, 1), 0).unwrap();
        let s32: MediumSample<f32> = s.cast();
        let f = SourceTerm::ConstantOne;
        let cfg = SchemeConfig::new(SchemeKind::Msfem, 16);
        let a = solve(&s, &cfg, &f).unwrap();
        let b = solve(&s32, &cfg, &f).unwrap();
        for (x, y) in a.nodal.iter().zip(&b.nodal) {
            assert!((x - *y as f64).abs() < 1e-5);
        }
        let u0 = solve_homogenized(1.0f32, &f).unwrap();
        assert!((u0.value(0.5).unwrap() - 0.125).abs() < 1e-7);
    }

    #[test]
    fn correctors_vanish_without_fluctuation() {
        let spec = MediumSpec { nu: 0.0, ..iid(1.0 / 256.0, 1) };
        let sampler = MediumSampler::new(&spec).unwrap();
        let probes = [0.0, 0.3, 0.5, 1.0];
        let schemes = [
            SchemeConfig::new(SchemeKind::Msfem, 16),
            SchemeConfig::new(SchemeKind::Hmm { delta_over_h: 0.25 }, 16),
            SchemeConfig::new(SchemeKind::Hybrid { m_patches: 4 }, 16),
        ];
        for row in corrector_samples_multi(&schemes, &sampler, &SourceTerm::ConstantOne, &probes, 0).unwrap() {
            assert!(row.iter().all(|v| v.abs() < 1e-13), "{row:?}");
        }
    }

    #[test]
    fn correctors_are_deterministic_and_vanish_at_boundary() {
        let sampler = MediumSampler::new(&iid(1.0 / 256.0, 1)).unwrap();
        let cfg = SchemeConfig::new(SchemeKind::Msfem, 16);
        let f = SourceTerm::ConstantOne;
        let a = corrector_samples(&cfg, &sampler, &f, &[0.0, 0.4, 1.0], 17).unwrap();
        let b = corrector_samples(&cfg, &sampler, &f, &[0.0, 0.4, 1.0], 17).unwrap();
        assert_eq!(a, b);
        assert_eq!(a[0], 0.0);
        assert_eq!(a[2], 0.0);
        assert!(a[1] != 0.0);
    }
}
