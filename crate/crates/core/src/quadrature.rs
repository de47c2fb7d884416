//! Quadrature rules: Gauss–Legendre, Gauss–Hermite, adaptive Gauss–Kronrod
//! and a fixed tanh-sinh rule for integrands with endpoint singularities.

use std::collections::BinaryHeap;
use std::f64::consts::PI;

use once_cell::sync::Lazy;

use crate::error::{Error, Result};

/// Nodes and weights of the `n`-point Gauss–Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, 0.0);
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Integrates `f` over `[a, b]` with the `n`-point Gauss–Legendre rule.
pub fn gauss_legendre_integrate<F: FnMut(f64) -> f64>(rule: &(Vec<f64>, Vec<f64>), a: f64, b: f64, mut f: F) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    rule.0
        .iter()
        .zip(&rule.1)
        .map(|(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

/// Nodes and weights of the `n`-point Gauss–Hermite rule for weight `exp(-x²)`.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let pim4 = PI.powf(-0.25);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    let nf = n as f64;
    let mut z = 0.0;
    for i in 0..m {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..200 {
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Expectation `E[h(g)]` for a standard normal `g`, by Gauss–Hermite.
pub fn normal_expectation<F: Fn(f64) -> f64>(rule: &(Vec<f64>, Vec<f64>), h: F) -> f64 {
    let s2 = std::f64::consts::SQRT_2;
    rule.0
        .iter()
        .zip(&rule.1)
        .map(|(x, w)| w * h(s2 * x))
        .sum::<f64>()
        / PI.sqrt()
}

// Published 21-point Gauss–Kronrod nodes and weights, digits kept as tabulated.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let hl = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = hl * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * hl, ((kron - gauss) * hl).abs())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive Gauss–Kronrod (7/15) integration of `f` over `[a, b]`.
///
/// Converges when the summed error estimate drops below
/// `max(abs_tol, rel_tol * |value|)`.
pub fn adaptive<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<Estimate> {
    if a == b {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    const MAX_SEGMENTS: usize = 50_000;
    let mut heap = BinaryHeap::new();
    let (v, e) = gk15(&mut f, a, b);
    heap.push(Segment { a, b, value: v, error: e });
    let (mut total, mut err) = (v, e);
    while err > abs_tol.max(rel_tol * total.abs()) {
        if heap.len() >= MAX_SEGMENTS {
            return Err(Error::Numeric(format!(
                "adaptive quadrature on [{a}, {b}] stopped at error {err:.3e} after {MAX_SEGMENTS} segments"
            )));
        }
        let s = heap.pop().expect("heap never empty");
        let m = 0.5 * (s.a + s.b);
        if m <= s.a || m >= s.b {
            return Err(Error::Numeric(format!(
                "adaptive quadrature on [{a}, {b}] hit machine resolution at error {err:.3e}"
            )));
        }
        let (v1, e1) = gk15(&mut f, s.a, m);
        let (v2, e2) = gk15(&mut f, m, s.b);
        total += v1 + v2 - s.value;
        err += e1 + e2 - s.error;
        heap.push(Segment { a: s.a, b: m, value: v1, error: e1 });
        heap.push(Segment { a: m, b: s.b, value: v2, error: e2 });
    }
    // re-sum to shed accumulated cancellation in the running totals
    let value = heap.iter().map(|s| s.value).sum();
    let error = heap.iter().map(|s| s.error).sum();
    Ok(Estimate { value, error })
}

/// Fixed-step tanh-sinh rule on [-1, 1].
///
/// Each node stores `1 - |x|` separately so points crowding the endpoints
/// keep full relative precision after mapping.
pub struct TanhSinh {
    nodes: Vec<(f64, f64, f64)>,
}

impl TanhSinh {
    pub fn new(step: f64, t_max: f64) -> Self {
        let mut nodes = Vec::new();
        let kmax = (t_max / step).ceil() as i64;
        for k in -kmax..=kmax {
            let t = k as f64 * step;
            let u = 0.5 * PI * t.sinh();
            let x = u.tanh();
            let one_minus = 2.0 / (1.0 + (2.0 * u.abs()).exp());
            let ch = u.cosh();
            let w = step * 0.5 * PI * t.cosh() / (ch * ch);
            if w < 1e-300 || one_minus == 0.0 {
                continue;
            }
            nodes.push((x, one_minus, w));
        }
        TanhSinh { nodes }
    }

    pub fn standard() -> &'static TanhSinh {
        static RULE: Lazy<TanhSinh> = Lazy::new(|| TanhSinh::new(1.0 / 32.0, 3.6));
        &RULE
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        if a == b {
            return 0.0;
        }
        let half = 0.5 * (b - a);
        let mut acc = 0.0;
        for &(x, one_minus, w) in &self.nodes {
            let t = if x >= 0.0 { b - half * one_minus } else { a + half * one_minus };
            if t > a && t < b {
                acc += w * f(t);
            }
        }
        acc * half
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials_exactly() {
        let rule = gauss_legendre(5);
        let v = gauss_legendre_integrate(&rule, 0.0, 2.0, |x| x.powi(9));
        assert!((v - 2f64.powi(10) / 10.0).abs() < 1e-11);
        let w: f64 = rule.1.iter().sum();
        assert!((w - 2.0).abs() < 1e-14);
    }

    #[test]
    fn hermite_moments() {
        let rule = gauss_hermite(40);
        assert!((normal_expectation(&rule, |_| 1.0) - 1.0).abs() < 1e-13);
        assert!((normal_expectation(&rule, |g| g * g) - 1.0).abs() < 1e-12);
        assert!((normal_expectation(&rule, |g| g.powi(4)) - 3.0).abs() < 1e-11);
        assert!(normal_expectation(&rule, |g| g.powi(3)).abs() < 1e-12);
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        let est = adaptive(|x| x.powf(-0.5), 0.0, 1.0, 1e-11, 1e-12).unwrap();
        assert!((est.value - 2.0).abs() < 1e-9, "{est:?}");
    }

    #[test]
    fn tanh_sinh_on_algebraic_singularities() {
        let rule = TanhSinh::standard();
        let v = rule.integrate(0.0, 1.0, |x| x.powf(0.5) * (1.0 - x).powf(0.5));
        assert!((v - PI / 8.0).abs() < 1e-13, "{v}");
        let v = rule.integrate(0.0, 2.0, |x| x.powf(0.3));
        assert!((v - 2f64.powf(1.3) / 1.3).abs() < 1e-13, "{v}");
        let v = rule.integrate(-1.0, 3.0, |x| x * x);
        assert!((v - 28.0 / 3.0).abs() < 1e-12);
    }
}
