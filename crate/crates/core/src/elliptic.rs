//! Continuum objects for `-(a u')' = f` on (0, 1) with homogeneous Dirichlet data.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::quadrature::{gauss_legendre, gauss_legendre_integrate};
use crate::random_media::MediumSample;
use crate::scalar::Real;

/// Right-hand side `f`. Tabulated sources are piecewise-linear interpolants,
/// so their primitives `F` and `G` are exact piecewise polynomials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
#[derive(Default)]
pub enum SourceTerm {
    #[default]
    ConstantOne,
    /// `f(t) = Σ coeffs[i] t^i`.
    Polynomial { coeffs: Vec<f64> },
    Tabulated { grid: Vec<f64>, values: Vec<f64> },
}


impl SourceTerm {
    pub fn validate(&self) -> Result<()> {
        match self {
            SourceTerm::ConstantOne => Ok(()),
            SourceTerm::Polynomial { coeffs } => {
                if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
                    return Err(Error::config("source.coeffs", "need at least one finite coefficient"));
                }
                Ok(())
            }
            SourceTerm::Tabulated { grid, values } => {
                if grid.len() < 2 || grid.len() != values.len() {
                    return Err(Error::config("source.grid", "grid and values need equal length >= 2"));
                }
                if grid[0] != 0.0 || *grid.last().unwrap() != 1.0 {
                    return Err(Error::config("source.grid", "grid must start at 0 and end at 1"));
                }
                if grid.windows(2).any(|w| !(w[1] > w[0])) {
                    return Err(Error::config("source.grid", "grid must be strictly increasing"));
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::config("source.values", "values must be finite"));
                }
                Ok(())
            }
        }
    }

    fn local_f(&self, lo: f64) -> Poly {
        match self {
            SourceTerm::ConstantOne => Poly::constant(1.0),
            SourceTerm::Polynomial { coeffs } => Poly(coeffs.clone()).shift(lo),
            SourceTerm::Tabulated { grid, values } => {
                let i = tab_index(grid, lo);
                let slope = (values[i + 1] - values[i]) / (grid[i + 1] - grid[i]);
                Poly(vec![values[i] + slope * (lo - grid[i]), slope])
            }
        }
    }

    /// `f` near `lo` as a polynomial in `t - lo`, valid up to the next breakpoint.
    pub fn f_poly_at(&self, lo: f64) -> Poly {
        self.local_f(lo)
    }

    /// `F(t) = ∫_0^t f` as a polynomial in `t - lo`, valid up to the next breakpoint.
    pub fn big_f_poly_at(&self, lo: f64) -> Poly {
        self.local_f(lo).integral().add_constant(self.big_f(lo))
    }

    pub fn f(&self, t: f64) -> f64 {
        self.local_f(t).0[0]
    }

    pub fn big_f(&self, t: f64) -> f64 {
        match self {
            SourceTerm::ConstantOne => t,
            SourceTerm::Polynomial { coeffs } => Poly(coeffs.clone()).integral().eval(t),
            SourceTerm::Tabulated { grid, values } => {
                let i = tab_index(grid, t);
                let mut acc = 0.0;
                for k in 0..i {
                    acc += 0.5 * (values[k] + values[k + 1]) * (grid[k + 1] - grid[k]);
                }
                acc + self.local_f(grid[i]).integral().eval(t - grid[i])
            }
        }
    }

    /// `G(t) = ∫_0^t F`.
    pub fn big_g(&self, t: f64) -> f64 {
        match self {
            SourceTerm::ConstantOne => 0.5 * t * t,
            SourceTerm::Polynomial { coeffs } => Poly(coeffs.clone()).integral().integral().eval(t),
            SourceTerm::Tabulated { grid, .. } => {
                let i = tab_index(grid, t);
                let mut acc = 0.0;
                for k in 0..i {
                    let w = grid[k + 1] - grid[k];
                    acc += self.big_f_poly_at(grid[k]).integral().eval(w);
                }
                acc + self.big_f_poly_at(grid[i]).integral().eval(t - grid[i])
            }
        }
    }

    /// `∫_0^1 F`.
    pub fn mean_big_f(&self) -> f64 {
        self.big_g(1.0)
    }

    /// Interior breakpoints where `f` may lose smoothness.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            SourceTerm::Tabulated { grid, .. } => grid[1..grid.len() - 1].to_vec(),
            _ => Vec::new(),
        }
    }

    /// Polynomial degree of `F` on each smooth piece.
    pub fn big_f_degree(&self) -> usize {
        match self {
            SourceTerm::ConstantOne => 1,
            SourceTerm::Polynomial { coeffs } => coeffs.len(),
            SourceTerm::Tabulated { .. } => 2,
        }
    }

    /// `‖f‖₂` on (0, 1).
    pub fn l2_norm(&self) -> f64 {
        let mut breaks = vec![0.0];
        breaks.extend(self.breakpoints());
        breaks.push(1.0);
        let mut acc = 0.0;
        for w in breaks.windows(2) {
            let p = self.local_f(w[0]);
            acc += p.mul(&p).integral().eval(w[1] - w[0]);
        }
        acc.sqrt()
    }
}

fn tab_index(grid: &[f64], t: f64) -> usize {
    let n = grid.len();
    match grid.binary_search_by(|g| g.total_cmp(&t)) {
        Ok(i) => i.min(n - 2),
        Err(i) => i.saturating_sub(1).min(n - 2),
    }
}

/// A continuum solution `u(x) = c P(x) - Q(x)` with `P = ∫_0^x a^{-1}`
/// and `Q = ∫_0^x F a^{-1}`, so that the flux is `a u' = c - F`.
#[derive(Clone, Debug)]
pub struct ContinuumSolution<T = f64> {
    flux: T,
    medium: MediumSample<T>,
    prefix_q: Vec<T>,
    source: SourceTerm,
}

impl<T: Real> ContinuumSolution<T> {
    /// Flux constant `c` with `a u' = c - F`.
    pub fn flux(&self) -> T {
        self.flux
    }

    fn q_at(&self, x: T) -> T {
        let m = &self.medium;
        let i = m.cell_index(x);
        let xl = m.cell_left(i);
        let dg = T::lit(self.source.big_g(x.as_f64()) - self.source.big_g(xl.as_f64()));
        self.prefix_q[i] + m.cells()[i] * dg
    }

    pub fn value(&self, x: T) -> Result<T> {
        check_unit(x, "x")?;
        Ok(self.flux * self.medium.primitive(x) - self.q_at(x))
    }

    /// `u'(x)`, taking `a^{-1}` from the cell containing `x`.
    pub fn derivative(&self, x: T) -> Result<T> {
        check_unit(x, "x")?;
        let i = self.medium.cell_index(x);
        Ok(self.medium.cells()[i] * (self.flux - T::lit(self.source.big_f(x.as_f64()))))
    }

    pub fn medium(&self) -> &MediumSample<T> {
        &self.medium
    }

    pub fn source(&self) -> &SourceTerm {
        &self.source
    }

    /// `|u(1)|`, which vanishes up to rounding.
    pub fn boundary_residual(&self) -> T {
        self.value(T::one()).map(|v| v.abs()).unwrap_or(T::infinity())
    }
}

fn check_unit<T: Real>(x: T, name: &str) -> Result<()> {
    if x >= T::zero() && x <= T::one() {
        Ok(())
    } else {
        Err(Error::Argument(format!("{name} = {x} outside [0, 1]")))
    }
}

/// Exact solution on a piecewise-constant medium.
pub fn solve_exact<T: Real>(sample: &MediumSample<T>, f: &SourceTerm) -> Result<ContinuumSolution<T>> {
    f.validate()?;
    if sample.cells().iter().any(|&c| !(c > T::zero())) {
        return Err(Error::Domain("medium sample is not elliptic".into()));
    }
    let n = sample.len();
    let mut prefix_q = Vec::with_capacity(n + 1);
    let mut acc = T::zero();
    prefix_q.push(acc);
    let mut g_left = f.big_g(0.0);
    for i in 0..n {
        let g_right = f.big_g(sample.cell_right(i).as_f64());
        acc += sample.cells()[i] * T::lit(g_right - g_left);
        prefix_q.push(acc);
        g_left = g_right;
    }
    let total_p = sample.prefix()[n];
    let flux = acc / total_p;
    Ok(ContinuumSolution { flux, medium: sample.clone(), prefix_q, source: f.clone() })
}

/// Homogenized solution with the constant coefficient `a*`.
pub fn solve_homogenized<T: Real>(a_star: T, f: &SourceTerm) -> Result<ContinuumSolution<T>> {
    if !(a_star > T::zero()) {
        return Err(Error::Domain(format!("a_star must be positive, got {a_star}")));
    }
    let medium = MediumSample::new(vec![T::one() / a_star], T::one(), a_star)?;
    solve_exact(&medium, f)
}

/// Green's function of `-a* d²/dx²` with Dirichlet conditions.
pub fn green_function<T: Real>(a_star: T, x: T, y: T) -> Result<T> {
    check_unit(x, "x")?;
    check_unit(y, "y")?;
    Ok(if x <= y { x * (T::one() - y) / a_star } else { (T::one() - x) * y / a_star })
}

/// Limit kernel `L(x, t) = 1_{t ≤ x}(∫F - F(t)) + x (F(t) - ∫F)`.
///
/// `L` does not depend on `a*`; the argument is kept so the signature matches
/// the Green's-function form in [`kernel_l_via_green`].
pub fn kernel_l(_a_star: f64, f: &SourceTerm, x: f64, t: f64) -> Result<f64> {
    check_unit(x, "x")?;
    check_unit(t, "t")?;
    let fbar = f.mean_big_f();
    let ft = f.big_f(t);
    // 1_{[0,x]} is closed on the right; at x = 0 it is a null set
    let ind = if t <= x && x > 0.0 { 1.0 } else { 0.0 };
    Ok(ind * (fbar - ft) + x * (ft - fbar))
}

/// `a* ∂_y G₀(x, t) · a* u₀'(t)`, equal to [`kernel_l`] for `t ≠ x`.
pub fn kernel_l_via_green(a_star: f64, f: &SourceTerm, x: f64, t: f64) -> Result<f64> {
    check_unit(x, "x")?;
    check_unit(t, "t")?;
    let dy_green = if t < x { (1.0 - x) / a_star } else { -x / a_star };
    let u0 = solve_homogenized(a_star, f)?;
    Ok(a_star * dy_green * a_star * u0.derivative(t)?)
}

/// `L(x, ·)` as local polynomials on the pieces cut by `x` and the source breakpoints.
pub fn kernel_l_pieces(f: &SourceTerm, x: f64) -> (Vec<f64>, Vec<Poly>) {
    let mut breaks = vec![0.0, 1.0, x];
    breaks.extend(f.breakpoints());
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let fbar = f.mean_big_f();
    let polys = breaks
        .windows(2)
        .map(|w| {
            let big_f = f.big_f_poly_at(w[0]);
            if 0.5 * (w[0] + w[1]) <= x {
                big_f.add_constant(-fbar).scale(x - 1.0)
            } else {
                big_f.add_constant(-fbar).scale(x)
            }
        })
        .collect();
    (breaks, polys)
}

/// `σ² ∫_0^1 L(x, t) L(y, t) dt`, exact piecewise Gauss–Legendre quadrature.
pub fn limit_variance_src(a_star: f64, f: &SourceTerm, sigma2: f64, x: f64, y: f64) -> Result<f64> {
    check_unit(x, "x")?;
    check_unit(y, "y")?;
    if !(sigma2 >= 0.0) {
        return Err(Error::Domain(format!("sigma2 must be non-negative, got {sigma2}")));
    }
    if sigma2 == 0.0 {
        return Ok(0.0);
    }
    let mut breaks = vec![0.0, 1.0, x, y];
    breaks.extend(f.breakpoints());
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let rule = gauss_legendre(f.big_f_degree() + 1);
    let mut acc = 0.0;
    for w in breaks.windows(2) {
        acc += gauss_legendre_integrate(&rule, w[0], w[1], |t| {
            kernel_l(a_star, f, x, t).unwrap() * kernel_l(a_star, f, y, t).unwrap()
        });
    }
    Ok(sigma2 * acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random_media::{sample_medium, MediumModel, MediumSpec};

    fn random_sample(seed: u64) -> MediumSample {
        let spec = MediumSpec {
            model: MediumModel::IidCell,
            a_star: 1.0,
            nu: 0.25,
            alpha: 1.0,
            epsilon: 1.0 / 64.0,
            micro_points_per_eps: 16,
            seed,
        };
        sample_medium(&spec, 0).unwrap()
    }

    #[test]
    fn constant_coefficient_closed_forms() {
        let f = SourceTerm::ConstantOne;
        let one = MediumSample::<f64>::constant(1.0, 1.0 / 16.0).unwrap();
        let u = solve_exact(&one, &f).unwrap();
        assert!((u.value(0.5).unwrap() - 0.125).abs() < 1e-15);
        for &x in &[0.1, 0.3, 0.77] {
            assert!((u.value(x).unwrap() - x * (1.0 - x) / 2.0).abs() < 1e-15);
        }
        let two = MediumSample::<f64>::constant(2.0, 1.0 / 16.0).unwrap();
        assert!((solve_exact(&two, &f).unwrap().value(0.5).unwrap() - 0.0625).abs() < 1e-15);
        let u0 = solve_homogenized(4.0f64, &f).unwrap();
        assert!((u0.value(0.5).unwrap() - 0.03125).abs() < 1e-15);
        assert!(u0.value(0.0).unwrap().abs() < 1e-15 && u0.boundary_residual() < 1e-15);
        assert!(solve_homogenized(0.0f64, &f).is_err());
    }

    #[test]
    fn homogenized_linear_source() {
        let f = SourceTerm::Polynomial { coeffs: vec![0.0, 1.0] };
        for &a in &[1.0, 2.5] {
            let u0 = solve_homogenized::<f64>(a, &f).unwrap();
            for &x in &[0.2, 0.5, 0.9] {
                let expect = (x - x * x * x) / (6.0 * a);
                assert!((u0.value(x).unwrap() - expect).abs() < 1e-15);
            }
        }
    }

    /// Shooting on a 10x refined grid for u' = (c - F)/a (Simpson steps),
    /// with `c` chosen so that u(1) = 0.
    fn shooting_oracle(sample: &MediumSample, f: &SourceTerm, xs: &[f64]) -> Vec<f64> {
        let steps = sample.len() * 10;
        let h = 1.0 / steps as f64;
        let run = |c: f64| -> Vec<f64> {
            let mut u = vec![0.0; steps + 1];
            for k in 0..steps {
                let (t0, t1) = (k as f64 * h, (k + 1) as f64 * h);
                let ia = sample.cells()[sample.cell_index(0.5 * (t0 + t1))];
                let d0 = (c - f.big_f(t0)) * ia;
                let dm = (c - f.big_f(0.5 * (t0 + t1))) * ia;
                let d1 = (c - f.big_f(t1)) * ia;
                u[k + 1] = u[k] + h * (d0 + 4.0 * dm + d1) / 6.0;
            }
            u
        };
        let u_a = run(0.0);
        let u_b = run(1.0);
        let c = -u_a[steps] / (u_b[steps] - u_a[steps]);
        let u = run(c);
        xs.iter().map(|x| u[(x / h).round() as usize]).collect()
    }

    #[test]
    fn exact_solution_matches_shooting_oracle() {
        let s = random_sample(3);
        let xs = [0.125, 0.25, 0.5, 0.75, 0.875];
        for f in [SourceTerm::ConstantOne, SourceTerm::Polynomial { coeffs: vec![1.0, -2.0, 3.0] }] {
            let u = solve_exact(&s, &f).unwrap();
            let oracle = shooting_oracle(&s, &f, &xs);
            for (x, o) in xs.iter().zip(oracle) {
                assert!((u.value(*x).unwrap() - o).abs() < 1e-8, "x = {x}");
            }
            assert!(u.boundary_residual() < 1e-12);
        }
    }

    #[test]
    fn flux_is_constant_across_cells() {
        let s = random_sample(5);
        let f = SourceTerm::Polynomial { coeffs: vec![0.5, 1.0] };
        let u = solve_exact(&s, &f).unwrap();
        for i in (0..s.len()).step_by(7) {
            let x = 0.5 * (s.cell_left(i) + s.cell_right(i));
            let flux = u.derivative(x).unwrap() / s.cells()[i] + f.big_f(x);
            assert!((flux - u.flux()).abs() < 1e-10);
        }
    }

    #[test]
    fn zero_fluctuation_reproduces_homogenized() {
        let s = MediumSample::<f64>::constant(1.5, 1.0 / 128.0).unwrap();
        let f = SourceTerm::Polynomial { coeffs: vec![1.0, 1.0] };
        let u = solve_exact(&s, &f).unwrap();
        let u0 = solve_homogenized(1.5, &f).unwrap();
        for k in 0..=20 {
            let x = k as f64 / 20.0;
            assert!((u.value(x).unwrap() - u0.value(x).unwrap()).abs() < 1e-15);
        }
    }

    #[test]
    fn green_function_examples() {
        assert!((green_function(1.0f64, 0.25, 0.75).unwrap() - 0.0625).abs() < 1e-16);
        assert_eq!(green_function(1.0f64, 0.0, 0.4).unwrap(), 0.0);
        assert!(green_function(1.0f64, 1.2, 0.4).is_err());
    }

    #[test]
    fn kernel_examples() {
        let f = SourceTerm::ConstantOne;
        assert!((kernel_l(1.0, &f, 0.5, 0.25).unwrap() - 0.125).abs() < 1e-16);
        for &t in &[0.0, 0.3, 1.0] {
            assert_eq!(kernel_l(1.0, &f, 0.0, t).unwrap().abs(), 0.0);
            assert!(kernel_l(1.0, &f, 1.0, t).unwrap().abs() < 1e-16);
        }
        let v = limit_variance_src(1.0, &f, 1.0, 0.5, 0.5).unwrap();
        assert!((v - 1.0 / 48.0).abs() < 1e-15);
        assert_eq!(limit_variance_src(1.0, &f, 1.0, 0.0, 0.3).unwrap(), 0.0);
        assert_eq!(limit_variance_src(1.0, &f, 0.0, 0.5, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn kernel_pieces_agree_with_pointwise() {
        let f = SourceTerm::Tabulated { grid: vec![0.0, 0.3, 1.0], values: vec![1.0, 2.0, -1.0] };
        let (breaks, polys) = kernel_l_pieces(&f, 0.45);
        for (w, p) in breaks.windows(2).zip(&polys) {
            for s in [0.1, 0.5, 0.9] {
                let t = w[0] + s * (w[1] - w[0]);
                assert!((p.eval(t - w[0]) - kernel_l(1.0, &f, 0.45, t).unwrap()).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn tabulated_primitives() {
        let f = SourceTerm::Tabulated { grid: vec![0.0, 0.5, 1.0], values: vec![0.0, 1.0, 1.0] };
        assert!((f.big_f(0.5) - 0.25).abs() < 1e-15);
        assert!((f.big_f(1.0) - 0.75).abs() < 1e-15);
        // G(1) = ∫_0^.5 t² dt + ∫_.5^1 (0.25 + t - 0.5) dt
        assert!((f.big_g(1.0) - (1.0 / 24.0 + 0.125 + 0.375 - 0.25)).abs() < 1e-15);
        assert!((f.l2_norm() - (1.0f64 / 6.0 + 0.5).sqrt()).abs() < 1e-15);
    }
}
