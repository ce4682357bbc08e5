//! Uniform periodic 1-D mesh with second-order difference operators.
//!
//! Node `i` sits at `x0 + i * dx`; indices wrap modulo `n`. All integrals over
//! the real line become periodic rectangle-rule sums, which are spectrally
//! accurate for smooth periodic (or rapidly decaying) integrands.

use crate::error::{check_len, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    n: usize,
    length: f64,
    x0: f64,
    dx: f64,
    x: Vec<f64>,
}

impl Grid {
    /// Builds an `n`-node periodic grid on `[x0, x0 + length)`.
    pub fn new(n: usize, length: f64, x0: f64) -> Result<Self> {
        if n < 8 {
            return Err(Error::GridTooSmall(n));
        }
        if !n.is_multiple_of(2) {
            return Err(Error::GridOdd(n));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::GridLength(length));
        }
        if !x0.is_finite() {
            return Err(Error::InvalidParameter {
                name: "x0",
                reason: format!("must be finite, got {x0}"),
            });
        }
        let dx = length / n as f64;
        let x = (0..n).map(|i| x0 + i as f64 * dx).collect();
        Ok(Self {
            n,
            length,
            x0,
            dx,
            x,
        })
    }

    /// Grid centred on the origin: `x0 = -length / 2`.
    pub fn centered(n: usize, length: f64) -> Result<Self> {
        Self::new(n, length, -0.5 * length)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    /// Samples `f` at every node.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.x.iter().map(|&x| f(x)).collect()
    }

    /// Maps `x - center` into the periodic window `[-L/2, L/2)`.
    pub fn wrap_offset(&self, x: f64, center: f64) -> f64 {
        let half = 0.5 * self.length;
        (x - center + half).rem_euclid(self.length) - half
    }

    pub fn check(&self, f: &[f64]) -> Result<()> {
        check_len(self.n, f.len())
    }

    /// Centred first difference `(f[i+1] - f[i-1]) / (2 dx)`.
    pub fn diff1(&self, f: &[f64]) -> Result<Vec<f64>> {
        self.check(f)?;
        let n = self.n;
        let scale = 0.5 / self.dx;
        Ok((0..n)
            .map(|i| (f[(i + 1) % n] - f[(i + n - 1) % n]) * scale)
            .collect())
    }

    /// Centred second difference `(f[i+1] - 2 f[i] + f[i-1]) / dx²`.
    pub fn diff2(&self, f: &[f64]) -> Result<Vec<f64>> {
        self.check(f)?;
        let n = self.n;
        let scale = 1.0 / (self.dx * self.dx);
        Ok((0..n)
            .map(|i| (f[(i + 1) % n] - 2.0 * f[i] + f[(i + n - 1) % n]) * scale)
            .collect())
    }

    /// Forward difference `(f[i+1] - f[i]) / dx`, a second-order derivative
    /// at the midpoint `x_{i+1/2}`.
    pub fn diff_forward(&self, f: &[f64]) -> Result<Vec<f64>> {
        self.check(f)?;
        let n = self.n;
        Ok((0..n).map(|i| (f[(i + 1) % n] - f[i]) / self.dx).collect())
    }

    /// Midpoint average `(f[i] + f[i+1]) / 2`.
    pub fn midpoint(&self, f: &[f64]) -> Result<Vec<f64>> {
        self.check(f)?;
        let n = self.n;
        Ok((0..n).map(|i| 0.5 * (f[i] + f[(i + 1) % n])).collect())
    }

    /// Periodic rectangle rule `dx * Σ f[i]`.
    pub fn integrate(&self, f: &[f64]) -> Result<f64> {
        self.check(f)?;
        Ok(self.dx * f.iter().sum::<f64>())
    }

    /// Discrete inner product `dx * Σ f[i] g[i]`.
    pub fn inner(&self, f: &[f64], g: &[f64]) -> Result<f64> {
        self.check(f)?;
        self.check(g)?;
        Ok(self.dx * f.iter().zip(g).map(|(a, b)| a * b).sum::<f64>())
    }
}

pub(crate) fn max_abs(f: &[f64]) -> f64 {
    f.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}
