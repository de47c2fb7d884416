//! Discrete limit kernels `L^h`, its pieces, the HMM kernel `L^{h,δ}`,
//! and the Gaussian covariances they induce for short- and long-range media.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::elliptic::{kernel_l, SourceTerm};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::quadrature::TanhSinh;
use crate::schemes::{element_of, node, solve_fem_homogenized, solve_tridiagonal, StiffnessVector};

/// Nodal inverse of the FEM stiffness matrix with `b = a*/h`.
#[derive(Clone, Debug)]
pub struct DiscreteGreen {
    n: usize,
    nodal: Vec<f64>,
}

impl DiscreteGreen {
    /// Solves the `N - 1` unit-load systems.
    pub fn new(a_star: f64, n: usize) -> Result<Self> {
        if !(a_star > 0.0) || n < 2 {
            return Err(Error::Domain(format!("need a_star > 0 and N >= 2, got {a_star}, {n}")));
        }
        let b = StiffnessVector { b: vec![a_star * n as f64; n], a_star_reference: a_star };
        let mut nodal = vec![0.0; (n + 1) * (n + 1)];
        for k in 1..n {
            let mut load = vec![0.0; n - 1];
            load[k - 1] = 1.0;
            let (col, _) = solve_tridiagonal(&b, &load)?;
            for j in 1..n {
                nodal[j * (n + 1) + k] = col[j - 1];
            }
        }
        Ok(DiscreteGreen { n, nodal })
    }

    /// `G^h_0(x_j, x_k)` for `j, k = 0..=N`.
    pub fn nodal(&self, j: usize, k: usize) -> f64 {
        self.nodal[j * (self.n + 1) + k]
    }

    /// `G^h_0(x, x_k)`, hat interpolation in `x`.
    pub fn eval(&self, x: f64, k: usize) -> f64 {
        let j = element_of(x, self.n);
        let theta = (x * self.n as f64 - (j - 1) as f64).clamp(0.0, 1.0);
        (1.0 - theta) * self.nodal(j - 1, k) + theta * self.nodal(j, k)
    }

    /// `D⁻_k G^h_0(x, x_k) = G^h_0(x, x_k) - G^h_0(x, x_{k-1})`.
    pub fn d_minus(&self, x: f64, k: usize) -> f64 {
        self.eval(x, k) - self.eval(x, k - 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelId {
    L,
    Lh,
    Lh11,
    Lh12,
    Lh2,
    Lhdelta,
}

impl KernelId {
    pub const ALL: [KernelId; 6] = [KernelId::L, KernelId::Lh, KernelId::Lh11, KernelId::Lh12, KernelId::Lh2, KernelId::Lhdelta];

    pub fn name(self) -> &'static str {
        match self {
            KernelId::L => "L",
            KernelId::Lh => "Lh",
            KernelId::Lh11 => "Lh11",
            KernelId::Lh12 => "Lh12",
            KernelId::Lh2 => "Lh2",
            KernelId::Lhdelta => "Lhdelta",
        }
    }

    pub fn parse(s: &str) -> Option<KernelId> {
        KernelId::ALL.into_iter().find(|k| k.name().eq_ignore_ascii_case(s))
    }
}

/// A function of `t` that is a polynomial on each `[breaks[i], breaks[i+1]]`,
/// stored in the local variable `t - breaks[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewisePoly {
    pub breaks: Vec<f64>,
    pub polys: Vec<Poly>,
}

impl PiecewisePoly {
    pub fn from_fn<F: FnMut(f64, f64) -> Poly>(mut breaks: Vec<f64>, mut piece: F) -> Self {
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let polys = breaks.windows(2).map(|w| piece(w[0], w[1])).collect();
        PiecewisePoly { breaks, polys }
    }

    /// Indicator-weighted constants `Σ v_i 1_{[l_i, r_i]}` on disjoint cells.
    pub fn from_cells(cells: &[(f64, f64, f64)]) -> Self {
        let mut breaks = vec![0.0, 1.0];
        for &(l, r, _) in cells {
            breaks.push(l);
            breaks.push(r);
        }
        Self::from_fn(breaks, |lo, hi| {
            let mid = 0.5 * (lo + hi);
            let v = cells.iter().find(|(l, r, _)| *l <= mid && mid <= *r).map(|c| c.2).unwrap_or(0.0);
            Poly::constant(v)
        })
    }

    pub fn eval(&self, t: f64) -> f64 {
        let i = match self.breaks.binary_search_by(|b| b.total_cmp(&t)) {
            Ok(i) => i.saturating_sub(1),
            Err(i) => i.saturating_sub(1),
        }
        .min(self.polys.len() - 1);
        self.polys[i].eval(t - self.breaks[i])
    }

    pub fn is_piecewise_constant(&self) -> bool {
        self.polys.iter().all(Poly::is_constant)
    }

    fn pieces(&self) -> impl Iterator<Item = (f64, f64, &Poly)> {
        self.breaks.windows(2).zip(&self.polys).map(|(w, p)| (w[0], w[1], p))
    }
}

fn merged_breaks(a: &PiecewisePoly, b: &PiecewisePoly) -> Vec<f64> {
    let mut m: Vec<f64> = a.breaks.iter().chain(&b.breaks).copied().collect();
    m.sort_by(f64::total_cmp);
    m.dedup();
    m
}

/// Local polynomial of `k` on `[lo, ·)`, where `lo` lies inside one of its pieces.
fn local_at(k: &PiecewisePoly, lo: f64, hi: f64) -> Poly {
    let mid = 0.5 * (lo + hi);
    let i = match k.breaks.binary_search_by(|b| b.total_cmp(&mid)) {
        Ok(i) | Err(i) => i.saturating_sub(1),
    }
    .min(k.polys.len() - 1);
    k.polys[i].shift(lo - k.breaks[i])
}

/// `∫_0^1 K₁ K₂ dt`, exact piecewise polynomial integration.
pub fn src_integral(k1: &PiecewisePoly, k2: &PiecewisePoly) -> f64 {
    merged_breaks(k1, k2)
        .windows(2)
        .map(|w| local_at(k1, w[0], w[1]).mul(&local_at(k2, w[0], w[1])).integral().eval(w[1] - w[0]))
        .sum()
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("alpha must lie in (0, 1), got {alpha}")))
    }
}

/// `|r|^{2-α} / ((1-α)(2-α))`, whose second derivative is `|r|^{-α}`.
fn phi(alpha: f64, r: f64) -> f64 {
    r.abs().powf(2.0 - alpha) / ((1.0 - alpha) * (2.0 - alpha))
}

/// `∫_{l1}^{r1} ∫_{l2}^{r2} |t - s|^{-α} ds dt` in closed form.
pub fn lrc_cell_pair(alpha: f64, (l1, r1): (f64, f64), (l2, r2): (f64, f64)) -> f64 {
    -(phi(alpha, r1 - r2) - phi(alpha, r1 - l2) - phi(alpha, l1 - r2) + phi(alpha, l1 - l2))
}

/// `Ψ_m(u) = sgn(u)^{m+1} |u|^{m+1-α} / (m+1-α)`, an antiderivative of `u^m |u|^{-α}`.
fn psi(m: usize, alpha: f64, u: f64) -> f64 {
    let e = m as f64 + 1.0 - alpha;
    let mag = u.abs().powf(e) / e;
    if u < 0.0 && m.is_multiple_of(2) {
        -mag
    } else {
        mag
    }
}

/// `∫_0^1 K(s) |t - s|^{-α} ds`, analytic per polynomial piece.
fn riesz_potential(k: &PiecewisePoly, alpha: f64, t: f64) -> f64 {
    let mut acc = 0.0;
    for (c, d, p) in k.pieces() {
        if p.0.iter().all(|&v| v == 0.0) {
            continue;
        }
        let q = p.shift(t - c);
        for (m, &bm) in q.0.iter().enumerate() {
            if bm != 0.0 {
                acc += bm * (psi(m, alpha, d - t) - psi(m, alpha, c - t));
            }
        }
    }
    acc
}

/// `∫∫ K₁(t) K₂(s) |t - s|^{-α} ds dt` (unit κ).
///
/// Piecewise-constant pairs use the closed form; otherwise the inner integral
/// is analytic and the outer one uses tanh-sinh on every smooth piece.
pub fn lrc_integral(k1: &PiecewisePoly, k2: &PiecewisePoly, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if k1.is_piecewise_constant() && k2.is_piecewise_constant() {
        let mut acc = 0.0;
        for (l1, r1, p1) in k1.pieces() {
            let v1 = p1.0[0];
            if v1 == 0.0 {
                continue;
            }
            for (l2, r2, p2) in k2.pieces() {
                let v2 = p2.0[0];
                if v2 != 0.0 {
                    acc += v1 * v2 * lrc_cell_pair(alpha, (l1, r1), (l2, r2));
                }
            }
        }
        return Ok(acc);
    }
    let rule = TanhSinh::standard();
    let mut acc = 0.0;
    for w in merged_breaks(k1, k2).windows(2) {
        let p = local_at(k1, w[0], w[1]);
        if p.0.iter().all(|&v| v == 0.0) {
            continue;
        }
        acc += rule.integrate(w[0], w[1], |t| p.eval(t - w[0]) * riesz_potential(k2, alpha, t));
    }
    Ok(acc)
}

/// `sup_t |K₁(t) - K₂(t)|`, from one-sided limits at every breakpoint plus
/// `interior` evenly spaced points per piece.
pub fn sup_gap(k1: &PiecewisePoly, k2: &PiecewisePoly, interior: usize) -> f64 {
    merged_breaks(k1, k2)
        .windows(2)
        .map(|w| {
            let d = local_at(k1, w[0], w[1]).add(&local_at(k2, w[0], w[1]).scale(-1.0));
            let len = w[1] - w[0];
            (0..=interior + 1).map(|i| d.eval(len * i as f64 / (interior + 1) as f64).abs()).fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

/// Precomputed discrete objects shared by all kernels on one mesh.
#[derive(Clone, Debug)]
pub struct KernelContext {
    pub a_star: f64,
    pub source: SourceTerm,
    pub n: usize,
    /// Patch length over `h` for `L^{h,δ}`.
    pub delta_over_h: f64,
    green: DiscreteGreen,
    /// `U⁰_k`, `k = 0..=N`.
    u0: Vec<f64>,
    /// `F(x_k)`, `k = 0..=N`.
    f_nodes: Vec<f64>,
    /// `F̃⁰_k = ∫_{I_k} f φ̃⁰_k`, `k = 1..=N`.
    f_tilde0: Vec<f64>,
}

impl KernelContext {
    pub fn new(a_star: f64, source: &SourceTerm, n: usize, delta_over_h: f64) -> Result<Self> {
        source.validate()?;
        if !(delta_over_h > 0.0 && delta_over_h <= 1.0) {
            return Err(Error::config("scheme.delta", "patch length must lie in (0, h]"));
        }
        let green = DiscreteGreen::new(a_star, n)?;
        let fem = solve_fem_homogenized(a_star, n, source)?;
        let u0 = (0..=n).map(|k| fem.node(k)).collect();
        let f_nodes: Vec<f64> = (0..=n).map(|k| source.big_f(node(k, n))).collect();
        let h = 1.0 / n as f64;
        let f_tilde0 = (1..=n)
            .map(|k| f_nodes[k] - (source.big_g(node(k, n)) - source.big_g(node(k - 1, n))) / h)
            .collect();
        Ok(KernelContext { a_star, source: source.clone(), n, delta_over_h, green, u0, f_nodes, f_tilde0 })
    }

    pub fn h(&self) -> f64 {
        1.0 / self.n as f64
    }

    pub fn green(&self) -> &DiscreteGreen {
        &self.green
    }

    /// `a* D⁻U⁰_k / h`.
    pub fn flux0(&self, k: usize) -> f64 {
        self.a_star * (self.u0[k] - self.u0[k - 1]) / self.h()
    }

    /// `a* D⁻G^h_0(x, x_k)` for `k = 1..=N` (zero-based).
    fn green_weights(&self, x: f64) -> Vec<f64> {
        (1..=self.n).map(|k| self.a_star * self.green.d_minus(x, k)).collect()
    }

    /// `J_k(x) = (a* D⁻G^h_0(x, x_k)/h)(a* D⁻U⁰_k/h)`, the value of `L^h_11` on `I_k`.
    pub fn j_values(&self, x: f64) -> Vec<f64> {
        let h = self.h();
        self.green_weights(x)
            .iter()
            .enumerate()
            .map(|(i, g)| g / h * self.flux0(i + 1))
            .collect()
    }

    /// Centered patch `I^δ_k`.
    pub fn patch(&self, k: usize) -> (f64, f64) {
        if self.delta_over_h == 1.0 {
            return (node(k - 1, self.n), node(k, self.n));
        }
        let mid = 0.5 * (node::<f64>(k - 1, self.n) + node::<f64>(k, self.n));
        let half = 0.5 * self.delta_over_h * self.h();
        (mid - half, mid + half)
    }

    fn check(&self, x: f64, t: f64) -> Result<()> {
        if (0.0..=1.0).contains(&x) && (0.0..=1.0).contains(&t) {
            Ok(())
        } else {
            Err(Error::Argument(format!("(x, t) = ({x}, {t}) outside the unit square")))
        }
    }

    /// Pointwise evaluation of a kernel.
    pub fn eval(&self, id: KernelId, x: f64, t: f64) -> Result<f64> {
        self.check(x, t)?;
        let k = element_of(t, self.n);
        let h = self.h();
        let weight = |k: usize| self.a_star * self.green.d_minus(x, k);
        Ok(match id {
            KernelId::L => kernel_l(self.a_star, &self.source, x, t)?,
            KernelId::Lh11 => weight(k) / h * self.flux0(k),
            KernelId::Lh12 => weight(k) / h * (self.f_nodes[k] - self.source.big_f(t) - self.f_tilde0[k - 1]),
            KernelId::Lh2 => {
                let j = element_of(x, self.n);
                if k != j || x == 0.0 {
                    0.0
                } else {
                    let theta = (x - node::<f64>(j - 1, self.n)) / h;
                    let ind = if t <= x { 1.0 } else { 0.0 };
                    self.flux0(j) * (ind - theta)
                }
            }
            KernelId::Lh => self.eval(KernelId::Lh11, x, t)? + self.eval(KernelId::Lh12, x, t)? + self.eval(KernelId::Lh2, x, t)?,
            KernelId::Lhdelta => {
                let (lo, hi) = self.patch(k);
                if t >= lo && t <= hi {
                    weight(k) / h * self.flux0(k) / self.delta_over_h
                } else {
                    0.0
                }
            }
        })
    }

    /// `t ↦ K(x, t)` as a piecewise polynomial.
    pub fn pieces(&self, id: KernelId, x: f64) -> Result<PiecewisePoly> {
        self.check(x, 0.0)?;
        let n = self.n;
        let h = self.h();
        let mut breaks: Vec<f64> = (0..=n).map(|k| node(k, n)).collect();
        if matches!(id, KernelId::L | KernelId::Lh | KernelId::Lh2) {
            breaks.push(x);
        }
        if matches!(id, KernelId::L | KernelId::Lh | KernelId::Lh12) {
            breaks.extend(self.source.breakpoints());
        }
        if id == KernelId::Lhdelta {
            for k in 1..=n {
                let (lo, hi) = self.patch(k);
                breaks.push(lo);
                breaks.push(hi);
            }
        }
        let j_vals = self.j_values(x);
        let weights = self.green_weights(x);
        let fbar = self.source.mean_big_f();
        let jx = element_of(x, n);
        let theta = (x - node::<f64>(jx - 1, n)) / h;
        let piece = |id: KernelId, lo: f64, hi: f64| -> Poly {
            let mid = 0.5 * (lo + hi);
            let k = element_of(mid, n);
            match id {
                KernelId::L => {
                    let big_f = self.source.big_f_poly_at(lo).add_constant(-fbar);
                    if mid <= x { big_f.scale(x - 1.0) } else { big_f.scale(x) }
                }
                KernelId::Lh11 => Poly::constant(j_vals[k - 1]),
                KernelId::Lh12 => self
                    .source
                    .big_f_poly_at(lo)
                    .scale(-1.0)
                    .add_constant(self.f_nodes[k] - self.f_tilde0[k - 1])
                    .scale(weights[k - 1] / h),
                KernelId::Lh2 => {
                    if k != jx || x == 0.0 {
                        Poly::zero()
                    } else {
                        let ind = if mid <= x { 1.0 } else { 0.0 };
                        Poly::constant(self.flux0(jx) * (ind - theta))
                    }
                }
                KernelId::Lhdelta => {
                    let (plo, phi) = self.patch(k);
                    if mid >= plo && mid <= phi {
                        Poly::constant(j_vals[k - 1] / self.delta_over_h)
                    } else {
                        Poly::zero()
                    }
                }
                KernelId::Lh => unreachable!(),
            }
        };
        Ok(PiecewisePoly::from_fn(breaks, |lo, hi| match id {
            KernelId::Lh => piece(KernelId::Lh11, lo, hi)
                .add(&piece(KernelId::Lh12, lo, hi))
                .add(&piece(KernelId::Lh2, lo, hi)),
            other => piece(other, lo, hi),
        }))
    }
}

pub fn kernel_lh(ctx: &KernelContext, x: f64, t: f64) -> Result<f64> {
    ctx.eval(KernelId::Lh, x, t)
}

pub fn kernel_lh_delta(ctx: &KernelContext, x: f64, t: f64) -> Result<f64> {
    ctx.eval(KernelId::Lhdelta, x, t)
}

/// Symmetric covariance over a probe set, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CovarianceMatrix {
    pub probes: Vec<f64>,
    pub values: Vec<f64>,
}

impl CovarianceMatrix {
    pub fn zeros(probes: &[f64]) -> Self {
        CovarianceMatrix { probes: probes.to_vec(), values: vec![0.0; probes.len() * probes.len()] }
    }

    pub fn dim(&self) -> usize {
        self.probes.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.dim() + j]
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.get(i, i)).collect()
    }

    pub fn scaled(&self, s: f64) -> Self {
        CovarianceMatrix { probes: self.probes.clone(), values: self.values.iter().map(|v| v * s).collect() }
    }

    /// Smallest eigenvalue.
    pub fn min_eigenvalue(&self) -> f64 {
        symmetric_eigenvalues(&self.values, self.dim()).into_iter().fold(f64::INFINITY, f64::min)
    }

    pub fn is_psd(&self) -> bool {
        let scale = self.diag().iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
        self.dim() == 0 || self.min_eigenvalue() >= -1e-10 * scale
    }

    fn from_pairs<F: Fn(usize, usize) -> Result<f64> + Sync>(probes: &[f64], entry: F) -> Result<Self> {
        let p = probes.len();
        let pairs: Vec<(usize, usize)> = (0..p).flat_map(|i| (i..p).map(move |j| (i, j))).collect();
        let vals: Vec<f64> = pairs.par_iter().map(|&(i, j)| entry(i, j)).collect::<Result<_>>()?;
        let mut m = CovarianceMatrix::zeros(probes);
        for (&(i, j), v) in pairs.iter().zip(vals) {
            m.values[i * p + j] = v;
            m.values[j * p + i] = v;
        }
        Ok(m)
    }
}

pub fn symmetric_eigenvalues(values: &[f64], n: usize) -> Vec<f64> {
    nalgebra::DMatrix::from_row_slice(n, n, values).symmetric_eigenvalues().iter().copied().collect()
}

/// `σ² ∫ K(x, t) K(y, t) dt`.
pub fn covariance_src(ctx: &KernelContext, id: KernelId, sigma2: f64, x: f64, y: f64) -> Result<f64> {
    if sigma2 == 0.0 {
        return Ok(0.0);
    }
    Ok(sigma2 * src_integral(&ctx.pieces(id, x)?, &ctx.pieces(id, y)?))
}

pub fn covariance_src_matrix(ctx: &KernelContext, id: KernelId, sigma2: f64, probes: &[f64]) -> Result<CovarianceMatrix> {
    let pieces: Vec<PiecewisePoly> = probes.iter().map(|&x| ctx.pieces(id, x)).collect::<Result<_>>()?;
    CovarianceMatrix::from_pairs(probes, |i, j| Ok(sigma2 * src_integral(&pieces[i], &pieces[j])))
}

/// `κ ∫∫ K(x, t) K(y, s) |t - s|^{-α} ds dt`.
pub fn covariance_lrc(ctx: &KernelContext, id: KernelId, kappa: f64, alpha: f64, x: f64, y: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(kappa * lrc_integral(&ctx.pieces(id, x)?, &ctx.pieces(id, y)?, alpha)?)
}

pub fn covariance_lrc_matrix(ctx: &KernelContext, id: KernelId, kappa: f64, alpha: f64, probes: &[f64]) -> Result<CovarianceMatrix> {
    check_alpha(alpha)?;
    let pieces: Vec<PiecewisePoly> = probes.iter().map(|&x| ctx.pieces(id, x)).collect::<Result<_>>()?;
    CovarianceMatrix::from_pairs(probes, |i, j| Ok(kappa * lrc_integral(&pieces[i], &pieces[j], alpha)?))
}

/// `σ_H = √(κ / (H(2H - 1)))` with `H = 1 - α/2`.
pub fn sigma_h(kappa: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(kappa >= 0.0) {
        return Err(Error::Domain(format!("kappa must be non-negative, got {kappa}")));
    }
    let hurst = 1.0 - alpha / 2.0;
    Ok((kappa / (hurst * (2.0 * hurst - 1.0))).sqrt())
}

/// Covariance of standard fractional Brownian motion.
pub fn fbm_covariance(hurst: f64, t: f64, s: f64) -> Result<f64> {
    if !(hurst > 0.5 && hurst < 1.0) {
        return Err(Error::Domain(format!("Hurst index must lie in (1/2, 1), got {hurst}")));
    }
    if t < 0.0 || s < 0.0 {
        return Err(Error::Argument(format!("times must be non-negative, got ({t}, {s})")));
    }
    let e = 2.0 * hurst;
    Ok(0.5 * (t.powf(e) + s.powf(e) - (t - s).abs().powf(e)))
}

/// Kernel values on a probe × t grid, for export.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelTable {
    pub id: KernelId,
    pub probes: Vec<f64>,
    pub t_grid: Vec<f64>,
    /// `values[i][j] = K(probes[i], t_grid[j])`.
    pub values: Vec<Vec<f64>>,
}

impl KernelTable {
    pub fn build(ctx: &KernelContext, id: KernelId, probes: &[f64], t_grid: &[f64]) -> Result<Self> {
        let values = probes
            .iter()
            .map(|&x| t_grid.iter().map(|&t| ctx.eval(id, x, t)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        Ok(KernelTable { id, probes: probes.to_vec(), t_grid: t_grid.to_vec(), values })
    }

    pub fn write_csv<W: Write>(tables: &[KernelTable], out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let res: std::result::Result<(), csv::Error> = (|| {
            w.write_record(["kernel", "x", "t", "value"])?;
            for tab in tables {
                for (x, row) in tab.probes.iter().zip(&tab.values) {
                    for (t, v) in tab.t_grid.iter().zip(row) {
                        w.write_record([tab.id.name().to_string(), format!("{x:.16e}"), format!("{t:.16e}"), format!("{v:.16e}")])?;
                    }
                }
            }
            w.flush()?;
            Ok(())
        })();
        res.map_err(|e| Error::Io { path: "kernel csv".into(), source: e.into() })
    }
}
