//! Model right-hand sides, variable conversions and scaling.
//!
//! The dispersive models are advanced in Hamiltonian variables:
//!
//! ```text
//! m_t = -(∂x m + m ∂x) u - H ∂x (δE/δH)
//! H_t = -∂x (H u)
//! ```
//!
//! with `u = T_H⁻¹ m`. The skew-adjoint form above is discretised with the
//! centred difference everywhere and the exact discrete gradient of the
//! discrete energy, so the semi-discrete flow conserves that energy exactly.
//! The conservative form instead writes `m_t = -∂x F` with the local momentum
//! flux `F`, which makes `∫ m dx` an exact discrete invariant.

use std::fmt;
use std::str::FromStr;

use crate::conservation;
use crate::elliptic::{BandedOperator, DispersiveKind};
use crate::error::{check_depth, check_len, Error, Result};
use crate::grid::Grid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    NewSystem,
    GreenNaghdi,
    ClassicalShallowWater,
}

impl ModelKind {
    pub const ALL: [ModelKind; 3] = [
        ModelKind::NewSystem,
        ModelKind::GreenNaghdi,
        ModelKind::ClassicalShallowWater,
    ];

    /// Momentum-operator family, `None` for the hyperbolic model.
    pub fn dispersive(self) -> Option<DispersiveKind> {
        match self {
            ModelKind::NewSystem => Some(DispersiveKind::NewSystem),
            ModelKind::GreenNaghdi => Some(DispersiveKind::GreenNaghdi),
            ModelKind::ClassicalShallowWater => None,
        }
    }

    pub(crate) fn require_dispersive(self) -> Result<DispersiveKind> {
        self.dispersive()
            .ok_or(Error::NoMomentumOperator(self.name()))
    }

    /// Short name used in configs and file output.
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::NewSystem => "new",
            ModelKind::GreenNaghdi => "gn",
            ModelKind::ClassicalShallowWater => "swe",
        }
    }
}

impl From<DispersiveKind> for ModelKind {
    fn from(kind: DispersiveKind) -> Self {
        match kind {
            DispersiveKind::NewSystem => ModelKind::NewSystem,
            DispersiveKind::GreenNaghdi => ModelKind::GreenNaghdi,
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "new" | "new_system" => Ok(ModelKind::NewSystem),
            "gn" | "green_naghdi" | "serre" => Ok(ModelKind::GreenNaghdi),
            "swe" | "shallow_water" | "classical" => Ok(ModelKind::ClassicalShallowWater),
            other => Err(format!(
                "unknown model {other:?} (expected \"new\", \"gn\" or \"swe\")"
            )),
        }
    }
}

/// How the momentum row of the Hamiltonian system is discretised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MomentumForm {
    /// `-(D m + m D) u - H D φ`: exact semi-discrete energy conservation.
    SkewAdjoint,
    /// `-D F` with the local momentum flux: exact momentum conservation.
    #[default]
    Conservative,
}

impl MomentumForm {
    pub fn name(self) -> &'static str {
        match self {
            MomentumForm::SkewAdjoint => "skew",
            MomentumForm::Conservative => "conservative",
        }
    }
}

impl FromStr for MomentumForm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "skew" | "skew_adjoint" => Ok(MomentumForm::SkewAdjoint),
            "conservative" | "flux" => Ok(MomentumForm::Conservative),
            other => Err(format!(
                "unknown momentum form {other:?} (expected \"skew\" or \"conservative\")"
            )),
        }
    }
}

/// Primitive variables: velocity `u` and total depth `H = 1 + εη`.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub u: Vec<f64>,
    pub h: Vec<f64>,
}

impl State {
    pub fn new(u: Vec<f64>, h: Vec<f64>) -> Result<Self> {
        check_len(u.len(), h.len())?;
        check_depth(&h)?;
        Ok(Self { u, h })
    }

    /// Quiescent water `u = 0`, `H = 1`.
    pub fn rest(n: usize) -> Self {
        Self {
            u: vec![0.0; n],
            h: vec![1.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }
}

/// Hamiltonian variables: momentum density `m` and depth `H`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumState {
    pub m: Vec<f64>,
    pub h: Vec<f64>,
}

impl MomentumState {
    pub fn new(m: Vec<f64>, h: Vec<f64>) -> Result<Self> {
        check_len(m.len(), h.len())?;
        check_depth(&h)?;
        Ok(Self { m, h })
    }

    pub fn rest(n: usize) -> Self {
        Self {
            m: vec![0.0; n],
            h: vec![1.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }
}

/// `m = T_H u`.
pub fn m_from_u(state: &State, grid: &Grid, kind: ModelKind) -> Result<MomentumState> {
    let kind = kind.require_dispersive()?;
    grid.check(&state.u)?;
    let op = BandedOperator::assemble(&state.h, grid, kind)?;
    Ok(MomentumState {
        m: op.apply(&state.u)?,
        h: state.h.clone(),
    })
}

/// `u = T_H⁻¹ m`.
pub fn u_from_m(ms: &MomentumState, grid: &Grid, kind: ModelKind) -> Result<State> {
    let kind = kind.require_dispersive()?;
    grid.check(&ms.m)?;
    let op = BandedOperator::assemble(&ms.h, grid, kind)?;
    Ok(State {
        u: op.solve(&ms.m)?,
        h: ms.h.clone(),
    })
}

/// Time derivatives of `(m, H)` together with the recovered velocity.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianRhs {
    pub dm_dt: Vec<f64>,
    pub dh_dt: Vec<f64>,
    pub u: Vec<f64>,
}

pub fn rhs_hamiltonian(
    ms: &MomentumState,
    grid: &Grid,
    kind: ModelKind,
    form: MomentumForm,
) -> Result<HamiltonianRhs> {
    let dkind = kind.require_dispersive()?;
    grid.check(&ms.m)?;
    let state = u_from_m(ms, grid, kind)?;
    let (m, u, h) = (&ms.m, &state.u, &ms.h);
    let n = grid.n();

    let hu: Vec<f64> = h.iter().zip(u).map(|(a, b)| a * b).collect();
    let dh_dt: Vec<f64> = grid.diff1(&hu)?.into_iter().map(|v| -v).collect();

    let dm_dt = match form {
        MomentumForm::SkewAdjoint => {
            let phi = conservation::delta_h_delta_h(&state, grid, dkind)?;
            let mu: Vec<f64> = m.iter().zip(u).map(|(a, b)| a * b).collect();
            let d_mu = grid.diff1(&mu)?;
            let d_u = grid.diff1(u)?;
            let d_phi = grid.diff1(&phi)?;
            (0..n)
                .map(|i| -(d_mu[i] + m[i] * d_u[i]) - h[i] * d_phi[i])
                .collect()
        }
        MomentumForm::Conservative => {
            let flux = conservation::flux_with_momentum(&state, m, grid, dkind)?;
            grid.diff1(&flux)?.into_iter().map(|v| -v).collect()
        }
    };

    Ok(HamiltonianRhs {
        dm_dt,
        dh_dt,
        u: state.u,
    })
}

/// Classical shallow-water tendencies `u_t = -(u u_x + H_x) + ν u_xx`,
/// `H_t = -(H u)_x`.
pub fn rhs_primitive_swe(
    state: &State,
    grid: &Grid,
    viscosity: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    grid.check(&state.u)?;
    grid.check(&state.h)?;
    check_depth(&state.h)?;
    let d_u = grid.diff1(&state.u)?;
    let d_h = grid.diff1(&state.h)?;
    let hu: Vec<f64> = state.h.iter().zip(&state.u).map(|(a, b)| a * b).collect();
    let d_hu = grid.diff1(&hu)?;
    let mut du_dt: Vec<f64> = (0..grid.n())
        .map(|i| -(state.u[i] * d_u[i] + d_h[i]))
        .collect();
    if viscosity != 0.0 {
        let lap = grid.diff2(&state.u)?;
        for (d, l) in du_dt.iter_mut().zip(lap) {
            *d += viscosity * l;
        }
    }
    let dh_dt = d_hu.into_iter().map(|v| -v).collect();
    Ok((du_dt, dh_dt))
}

/// Leading-order vertical structure of the flow.
#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    /// `vertical[k][i] = v(x_i, z_k) = -z_k u_x(x_i)`.
    pub vertical: Vec<Vec<f64>>,
    /// Pressure `p = εη = H - 1`, independent of depth.
    pub pressure: Vec<f64>,
}

pub fn reconstruct_fields(state: &State, grid: &Grid, z_levels: &[f64]) -> Result<Reconstruction> {
    grid.check(&state.u)?;
    grid.check(&state.h)?;
    if let Some(z) = z_levels.iter().find(|z| !(**z >= 0.0)) {
        return Err(Error::InvalidParameter {
            name: "z_levels",
            reason: format!("levels must be nonnegative, got {z}"),
        });
    }
    let u_x = grid.diff1(&state.u)?;
    let vertical = z_levels
        .iter()
        .map(|&z| u_x.iter().map(|d| -z * d).collect())
        .collect();
    let pressure = state.h.iter().map(|h| h - 1.0).collect();
    Ok(Reconstruction { vertical, pressure })
}

/// Physical scales of a wave problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingParams {
    /// Undisturbed depth.
    pub h0: f64,
    /// Typical wavelength.
    pub lambda: f64,
    /// Wave amplitude.
    pub a: f64,
    /// Gravitational acceleration.
    pub gravity: f64,
}

/// Fields in either dimensional or scaled units.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFields {
    pub x: Vec<f64>,
    pub t: f64,
    pub u: Vec<f64>,
    pub eta: Vec<f64>,
}

impl ScalingParams {
    pub fn new(h0: f64, lambda: f64, a: f64, gravity: f64) -> Result<Self> {
        for (name, v) in [
            ("h0", h0),
            ("lambda", lambda),
            ("a", a),
            ("gravity", gravity),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be positive and finite, got {v}"),
                });
            }
        }
        Ok(Self {
            h0,
            lambda,
            a,
            gravity,
        })
    }

    /// Amplitude parameter `a / h0`.
    pub fn epsilon(&self) -> f64 {
        self.a / self.h0
    }

    /// Long-wave parameter `h0 / λ`.
    pub fn delta(&self) -> f64 {
        self.h0 / self.lambda
    }

    /// Linear long-wave speed `√(g h0)`.
    pub fn wave_speed(&self) -> f64 {
        (self.gravity * self.h0).sqrt()
    }

    pub fn nondimensionalize(&self, f: &WaveFields) -> WaveFields {
        let c0 = self.wave_speed();
        WaveFields {
            x: f.x.iter().map(|x| x / self.lambda).collect(),
            t: f.t * c0 / self.lambda,
            u: f.u.iter().map(|u| u / c0).collect(),
            eta: f.eta.iter().map(|e| e / self.a).collect(),
        }
    }

    pub fn dimensionalize(&self, f: &WaveFields) -> WaveFields {
        let c0 = self.wave_speed();
        WaveFields {
            x: f.x.iter().map(|x| x * self.lambda).collect(),
            t: f.t * self.lambda / c0,
            u: f.u.iter().map(|u| u * c0).collect(),
            eta: f.eta.iter().map(|e| e * self.a).collect(),
        }
    }

    /// Vertical coordinate scaled by the undisturbed depth.
    pub fn scale_z(&self, z: f64) -> f64 {
        z / self.h0
    }

    /// Vertical velocity scaled by `h0 √(g h0) / λ`.
    pub fn scale_v(&self, v: f64) -> f64 {
        v * self.lambda / (self.h0 * self.wave_speed())
    }

    /// Scaled depth `H = 1 + ε η̄` from scaled elevation.
    pub fn depth(&self, eta: &[f64]) -> Vec<f64> {
        let eps = self.epsilon();
        eta.iter().map(|e| 1.0 + eps * e).collect()
    }
}
