//! Dense univariate polynomials in a local variable `u = t - origin`.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn constant(c: f64) -> Self {
        Poly(vec![c])
    }

    pub fn zero() -> Self {
        Poly(vec![0.0])
    }

    pub fn degree(&self) -> usize {
        self.0
            .iter()
            .rposition(|&c| c != 0.0)
            .unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    pub fn eval(&self, u: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * u + c)
    }

    /// Re-expands around a new origin: returns `q` with `q(v) = self(v + d)`.
    pub fn shift(&self, d: f64) -> Poly {
        let mut c = self.0.clone();
        let n = c.len();
        // repeated synthetic division (Taylor shift)
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                c[j] += d * c[j + 1];
            }
        }
        Poly(c)
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly(self.0.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly(
            (0..n)
                .map(|i| self.0.get(i).copied().unwrap_or(0.0) + other.0.get(i).copied().unwrap_or(0.0))
                .collect(),
        )
    }

    pub fn add_constant(&self, c: f64) -> Poly {
        let mut p = self.clone();
        if p.0.is_empty() {
            p.0.push(0.0);
        }
        p.0[0] += c;
        p
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.0.is_empty() || other.0.is_empty() {
            return Poly::zero();
        }
        let mut out = vec![0.0; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }

    /// Antiderivative vanishing at `u = 0`.
    pub fn integral(&self) -> Poly {
        let mut out = vec![0.0; self.0.len() + 1];
        for (i, c) in self.0.iter().enumerate() {
            out[i + 1] = c / (i as f64 + 1.0);
        }
        Poly(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_matches_direct_evaluation() {
        let p = Poly(vec![1.0, -2.0, 0.5, 3.0]);
        let q = p.shift(0.7);
        for &v in &[-1.0, 0.0, 0.3, 2.0] {
            assert!((q.eval(v) - p.eval(v + 0.7)).abs() < 1e-12);
        }
    }

    #[test]
    fn integral_and_product() {
        let p = Poly(vec![1.0, 1.0]);
        let sq = p.mul(&p);
        assert_eq!(sq.0, vec![1.0, 2.0, 1.0]);
        assert!((sq.integral().eval(1.0) - 7.0 / 3.0).abs() < 1e-15);
        assert_eq!(Poly(vec![2.0, 0.0, 0.0]).degree(), 0);
    }
}
