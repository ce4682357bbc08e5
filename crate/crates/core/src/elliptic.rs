//! Momentum operators and their inversion.
//!
//! Both dispersive models relate velocity `u` to momentum density `m` through
//! a linear elliptic operator in divergence form:
//!
//! ```text
//! new system:     m = u   - (H² u_x)_x
//! Green-Naghdi:   m = H u - (H³ u_x)_x / 3
//! ```
//!
//! The flux form with midpoint-averaged coefficients yields a symmetric cyclic
//! tridiagonal matrix, positive definite whenever `H > 0`. Inversion is a direct
//! O(n) solve: tridiagonal elimination plus a Sherman-Morrison correction for
//! the periodic corner entries.

use crate::error::{check_depth, check_len, Error, Result};
use crate::grid::Grid;

/// Operator family for the two dispersive models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DispersiveKind {
    NewSystem,
    GreenNaghdi,
}

impl DispersiveKind {
    /// Dispersive coefficient `a(H)` multiplying `u_x` inside the divergence.
    pub fn flux_coefficient(self, h: f64) -> f64 {
        match self {
            DispersiveKind::NewSystem => h * h,
            DispersiveKind::GreenNaghdi => h * h * h / 3.0,
        }
    }

    /// Zeroth-order coefficient `b(H)` multiplying `u`.
    pub fn mass_coefficient(self, h: f64) -> f64 {
        match self {
            DispersiveKind::NewSystem => 1.0,
            DispersiveKind::GreenNaghdi => h,
        }
    }
}

/// Symmetric cyclic tridiagonal operator.
///
/// `off[i]` couples nodes `i` and `i + 1 (mod n)`, so symmetry holds by layout.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedOperator {
    kind: DispersiveKind,
    diag: Vec<f64>,
    off: Vec<f64>,
    dx: f64,
}

impl BandedOperator {
    /// Assembles the momentum operator for depth profile `h`.
    pub fn assemble(h: &[f64], grid: &Grid, kind: DispersiveKind) -> Result<Self> {
        grid.check(h)?;
        check_depth(h)?;
        let n = grid.n();
        let inv_dx2 = 1.0 / (grid.dx() * grid.dx());
        // a[i] lives at x_{i+1/2}
        let a: Vec<f64> = (0..n)
            .map(|i| kind.flux_coefficient(0.5 * (h[i] + h[(i + 1) % n])))
            .collect();
        let diag = (0..n)
            .map(|i| kind.mass_coefficient(h[i]) + (a[i] + a[(i + n - 1) % n]) * inv_dx2)
            .collect();
        let off = a.iter().map(|ai| -ai * inv_dx2).collect();
        Ok(Self {
            kind,
            diag,
            off,
            dx: grid.dx(),
        })
    }

    pub fn kind(&self) -> DispersiveKind {
        self.kind
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off(&self) -> &[f64] {
        &self.off
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Matrix-vector product `T u`.
    pub fn apply(&self, u: &[f64]) -> Result<Vec<f64>> {
        let n = self.len();
        check_len(n, u.len())?;
        Ok((0..n)
            .map(|i| {
                let prev = (i + n - 1) % n;
                let next = (i + 1) % n;
                self.diag[i] * u[i] + self.off[i] * u[next] + self.off[prev] * u[prev]
            })
            .collect())
    }

    /// Solves `T u = m`.
    ///
    /// Writes `T = B - w wᵀ / b₀` with `w = (b₀, 0, …, 0, -α)`, `α` the corner
    /// coupling and `b₀ = T₀₀`. Then `B = T + w wᵀ / b₀` is an SPD tridiagonal
    /// matrix, so plain elimination needs no pivoting, and Sherman-Morrison
    /// restores the rank-one term.
    pub fn solve(&self, m: &[f64]) -> Result<Vec<f64>> {
        let n = self.len();
        check_len(n, m.len())?;
        let b0 = self.diag[0];
        let alpha = self.off[n - 1];
        if !(b0 > 0.0) {
            return Err(Error::Singular { row: 0, pivot: b0 });
        }

        let mut diag = self.diag.clone();
        diag[0] += b0;
        diag[n - 1] += alpha * alpha / b0;
        let sub = &self.off[..n - 1];

        let mut w = vec![0.0; n];
        w[0] = b0;
        w[n - 1] = -alpha;

        let (y, z) = thomas_pair(sub, &diag, m, &w)?;
        let wy = w[0] * y[0] + w[n - 1] * y[n - 1];
        let wz = w[0] * z[0] + w[n - 1] * z[n - 1];
        let denom = 1.0 - wz / b0;
        if !(denom > 0.0) {
            return Err(Error::Singular {
                row: n - 1,
                pivot: denom,
            });
        }
        let factor = wy / (b0 * denom);
        Ok(y.iter().zip(&z).map(|(yi, zi)| yi + factor * zi).collect())
    }

    /// Relative residual `‖T u - m‖∞ / ‖m‖∞` (absolute when `m = 0`).
    pub fn relative_residual(&self, u: &[f64], m: &[f64]) -> Result<f64> {
        let tu = self.apply(u)?;
        let res = tu
            .iter()
            .zip(m)
            .fold(0.0_f64, |acc, (a, b)| acc.max((a - b).abs()));
        let scale = crate::grid::max_abs(m);
        Ok(if scale > 0.0 { res / scale } else { res })
    }
}

/// Thomas elimination for symmetric tridiagonal `B` against two right-hand
/// sides at once. `sub[i]` couples rows `i` and `i + 1`.
fn thomas_pair(sub: &[f64], diag: &[f64], r1: &[f64], r2: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut x1 = vec![0.0; n];
    let mut x2 = vec![0.0; n];

    let mut pivot = diag[0];
    if !(pivot > 0.0) {
        return Err(Error::Singular { row: 0, pivot });
    }
    x1[0] = r1[0] / pivot;
    x2[0] = r2[0] / pivot;
    for i in 1..n {
        c[i - 1] = sub[i - 1] / pivot;
        pivot = diag[i] - sub[i - 1] * c[i - 1];
        if !(pivot > 0.0) {
            return Err(Error::Singular { row: i, pivot });
        }
        x1[i] = (r1[i] - sub[i - 1] * x1[i - 1]) / pivot;
        x2[i] = (r2[i] - sub[i - 1] * x2[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        x1[i] -= c[i] * x1[i + 1];
        x2[i] -= c[i] * x2[i + 1];
    }
    Ok((x1, x2))
}
