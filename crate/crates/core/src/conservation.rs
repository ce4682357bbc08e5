//! Conserved functionals, variational derivatives and the momentum flux.
//!
//! The discrete energy uses the same staggered difference as the momentum
//! operator, `E = ½ Σ dx [b(H) u² + a(H_{i+1/2}) (D⁺u)² + (H - 1)²]`, so that
//! its exact gradients are `∂E/∂u = dx · T_H u` and, with `m` held fixed,
//! `∂E/∂H = dx · δE/δH` as returned by [`delta_h_delta_h`].

use crate::elliptic::{BandedOperator, DispersiveKind};
use crate::error::{check_len, Result};
use crate::grid::{max_abs, Grid};
use crate::models::{self, ModelKind, MomentumState, State};

/// Conserved-quantity record at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub t: f64,
    pub mass: f64,
    pub energy: f64,
    pub total_momentum: f64,
    pub max_h: f64,
    pub max_u: f64,
}

impl Diagnostics {
    /// `m` is the momentum density for dispersive models and `H u` for the
    /// classical shallow-water equations.
    pub fn capture(t: f64, state: &State, m: &[f64], grid: &Grid, kind: ModelKind) -> Result<Self> {
        check_len(state.len(), m.len())?;
        Ok(Self {
            t,
            mass: mass(state, grid)?,
            energy: energy(state, grid, kind)?,
            total_momentum: grid.integrate(m)?,
            max_h: state.h.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            max_u: max_abs(&state.u),
        })
    }
}

/// Largest drift of each invariant relative to `max(1, |q(0)|)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Drift {
    pub mass: f64,
    pub energy: f64,
    pub total_momentum: f64,
}

impl Drift {
    pub fn of(records: &[Diagnostics]) -> Self {
        let Some(first) = records.first() else {
            return Self::default();
        };
        let rel = |q0: f64, q: f64| (q - q0).abs() / q0.abs().max(1.0);
        records.iter().fold(Self::default(), |acc, r| Self {
            mass: acc.mass.max(rel(first.mass, r.mass)),
            energy: acc.energy.max(rel(first.energy, r.energy)),
            total_momentum: acc
                .total_momentum
                .max(rel(first.total_momentum, r.total_momentum)),
        })
    }
}

/// Excess mass `∫ (H - 1) dx`.
pub fn mass(state: &State, grid: &Grid) -> Result<f64> {
    let excess: Vec<f64> = state.h.iter().map(|h| h - 1.0).collect();
    grid.integrate(&excess)
}

/// Total energy of the state.
///
/// - new system: `½∫ [u² + H² u_x² + (H-1)²]`
/// - Green-Naghdi: `½∫ [H u² + H³ u_x² / 3 + (H-1)²]`
/// - classical shallow water: `½∫ [H u² + (H-1)²]`
pub fn energy(state: &State, grid: &Grid, kind: ModelKind) -> Result<f64> {
    grid.check(&state.u)?;
    grid.check(&state.h)?;
    let (u, h) = (&state.u, &state.h);
    let density: Vec<f64> = match kind.dispersive() {
        Some(dk) => {
            let hm = grid.midpoint(h)?;
            let du = grid.diff_forward(u)?;
            (0..grid.n())
                .map(|i| {
                    dk.mass_coefficient(h[i]) * u[i] * u[i]
                        + dk.flux_coefficient(hm[i]) * du[i] * du[i]
                        + (h[i] - 1.0).powi(2)
                })
                .collect()
        }
        None => (0..grid.n())
            .map(|i| h[i] * u[i] * u[i] + (h[i] - 1.0).powi(2))
            .collect(),
    };
    Ok(0.5 * grid.integrate(&density)?)
}

/// Energy written in Hamiltonian variables, `½∫ [m T_H⁻¹ m + (H-1)²]`.
pub fn energy_of_momentum(ms: &MomentumState, grid: &Grid, kind: DispersiveKind) -> Result<f64> {
    grid.check(&ms.m)?;
    let op = BandedOperator::assemble(&ms.h, grid, kind)?;
    let u = op.solve(&ms.m)?;
    let density: Vec<f64> = (0..grid.n())
        .map(|i| ms.m[i] * u[i] + (ms.h[i] - 1.0).powi(2))
        .collect();
    Ok(0.5 * grid.integrate(&density)?)
}

/// Variational derivative of the energy with respect to `H` at fixed `m`.
///
/// Continuum forms: `-H u_x² + H - 1` (new system) and
/// `-u²/2 - H² u_x²/2 + H - 1` (Green-Naghdi). The discrete version averages
/// the two staggered `u_x` terms adjacent to each node, which makes it the
/// exact gradient of the discrete energy.
pub fn delta_h_delta_h(state: &State, grid: &Grid, kind: DispersiveKind) -> Result<Vec<f64>> {
    grid.check(&state.u)?;
    grid.check(&state.h)?;
    let (u, h) = (&state.u, &state.h);
    let n = grid.n();
    let hm = grid.midpoint(h)?;
    let du = grid.diff_forward(u)?;
    // half of d a/dH at each midpoint times (D⁺u)²
    let stag: Vec<f64> = (0..n)
        .map(|i| {
            let da = match kind {
                DispersiveKind::NewSystem => 2.0 * hm[i],
                DispersiveKind::GreenNaghdi => hm[i] * hm[i],
            };
            0.5 * da * du[i] * du[i]
        })
        .collect();
    Ok((0..n)
        .map(|i| {
            let db = match kind {
                DispersiveKind::NewSystem => 0.0,
                DispersiveKind::GreenNaghdi => 1.0,
            };
            -0.5 * (db * u[i] * u[i] + stag[i] + stag[(i + n - 1) % n]) + h[i] - 1.0
        })
        .collect())
}

/// Local momentum flux of the new system, `m u + u²/2 + H²/2 - 3 H² u_x²/2`.
///
/// `m_t + ∂x F = 0` holds for smooth solutions, with `u_x` taken as the
/// centred difference.
pub fn momentum_flux(state: &State, grid: &Grid) -> Result<Vec<f64>> {
    momentum_flux_for(state, grid, DispersiveKind::NewSystem)
}

/// Momentum flux for either dispersive model. The Green-Naghdi flux is
/// `m u + H²/2 - 2 H³ u_x²/3`.
pub fn momentum_flux_for(state: &State, grid: &Grid, kind: DispersiveKind) -> Result<Vec<f64>> {
    let ms = models::m_from_u(state, grid, kind.into())?;
    flux_with_momentum(state, &ms.m, grid, kind)
}

pub(crate) fn flux_with_momentum(
    state: &State,
    m: &[f64],
    grid: &Grid,
    kind: DispersiveKind,
) -> Result<Vec<f64>> {
    grid.check(m)?;
    let (u, h) = (&state.u, &state.h);
    let ux = grid.diff1(u)?;
    Ok((0..grid.n())
        .map(|i| {
            let slope2 = ux[i] * ux[i];
            match kind {
                DispersiveKind::NewSystem => {
                    m[i] * u[i] + 0.5 * u[i] * u[i] + 0.5 * h[i] * h[i] - 1.5 * h[i] * h[i] * slope2
                }
                DispersiveKind::GreenNaghdi => {
                    m[i] * u[i] + 0.5 * h[i] * h[i] - (2.0 / 3.0) * h[i].powi(3) * slope2
                }
            }
        })
        .collect())
}
