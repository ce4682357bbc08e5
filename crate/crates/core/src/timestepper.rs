//! Method-of-lines time integration and run orchestration.
//!
//! Dispersive models advance `(m, H)` jointly with classical four-stage
//! Runge-Kutta; each stage performs one elliptic solve to recover `u`. The
//! classical shallow-water model advances `(u, H)` directly.

use crate::conservation::Diagnostics;
use crate::error::{Error, Result};
use crate::grid::{max_abs, Grid};
use crate::models::{self, ModelKind, MomentumForm, MomentumState, State};
use crate::solitons;

/// Gradient limit for classical shallow-water runs.
pub const DEFAULT_GRADIENT_LIMIT: f64 = 1e3;
pub const DEFAULT_CFL: f64 = 0.4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeStep {
    /// Recompute [`suggest_dt`] from the current state every step.
    Auto,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialCondition {
    Rest,
    Soliton {
        c: f64,
        center: f64,
    },
    Gaussian {
        amplitude: f64,
        width: f64,
        center: f64,
    },
}

impl InitialCondition {
    pub fn sample(&self, grid: &Grid, model: ModelKind) -> Result<State> {
        match *self {
            InitialCondition::Rest => Ok(State::rest(grid.n())),
            InitialCondition::Soliton { c, center } => {
                solitons::sample_state(grid, model, c, center, 0.0)
            }
            InitialCondition::Gaussian {
                amplitude,
                width,
                center,
            } => {
                let h = grid.sample(|x| {
                    let r = grid.wrap_offset(x, center) / width;
                    1.0 + amplitude * (-r * r).exp()
                });
                State::new(vec![0.0; grid.n()], h)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: ModelKind,
    pub n: usize,
    pub length: f64,
    pub x0: f64,
    pub dt: TimeStep,
    pub t_end: f64,
    pub snapshot_every: f64,
    pub initial: InitialCondition,
    pub cfl: f64,
    /// Artificial viscosity, classical shallow water only.
    pub viscosity: f64,
    pub momentum_form: MomentumForm,
    /// Abort threshold on `max |u_x|`, classical shallow water only.
    pub gradient_limit: f64,
}

impl RunConfig {
    /// Config with every optional field at its default: centred domain,
    /// automatic time step, one snapshot at each end, rest initial data.
    pub fn new(model: ModelKind, n: usize, length: f64, t_end: f64) -> Self {
        Self {
            model,
            n,
            length,
            x0: -0.5 * length,
            dt: TimeStep::Auto,
            t_end,
            snapshot_every: t_end,
            initial: InitialCondition::Rest,
            cfl: DEFAULT_CFL,
            viscosity: 0.0,
            momentum_form: MomentumForm::default(),
            gradient_limit: DEFAULT_GRADIENT_LIMIT,
        }
    }

    pub fn with_initial(mut self, initial: InitialCondition) -> Self {
        self.initial = initial;
        self
    }

    pub fn with_dt(mut self, dt: TimeStep) -> Self {
        self.dt = dt;
        self
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.n, self.length, self.x0)
    }

    pub fn validate(&self) -> Result<()> {
        let bad =
            |name: &'static str, reason: String| Err(Error::InvalidParameter { name, reason });
        self.grid()?;
        if !(self.t_end > 0.0) || !self.t_end.is_finite() {
            return bad("t_end", format!("must be positive, got {}", self.t_end));
        }
        if !(self.snapshot_every > 0.0) || !self.snapshot_every.is_finite() {
            return bad(
                "snapshot_every",
                format!("must be positive, got {}", self.snapshot_every),
            );
        }
        if let TimeStep::Fixed(dt) = self.dt {
            if !(dt > 0.0) || !dt.is_finite() {
                return bad("dt", format!("must be positive, got {dt}"));
            }
        }
        if !(self.cfl > 0.0) || !self.cfl.is_finite() {
            return bad("cfl", format!("must be positive, got {}", self.cfl));
        }
        if !(self.viscosity >= 0.0) || !self.viscosity.is_finite() {
            return bad(
                "viscosity",
                format!("must be nonnegative, got {}", self.viscosity),
            );
        }
        if !(self.gradient_limit > 0.0) {
            return bad(
                "gradient_limit",
                format!("must be positive, got {}", self.gradient_limit),
            );
        }
        match self.initial {
            InitialCondition::Soliton { c, center } => {
                solitons::validate_speed(c)?;
                if !center.is_finite() {
                    return bad("initial.center", format!("must be finite, got {center}"));
                }
            }
            InitialCondition::Gaussian {
                amplitude,
                width,
                center,
            } => {
                if !(amplitude > -1.0) || !amplitude.is_finite() {
                    return bad(
                        "initial.amplitude",
                        format!("must exceed -1 to keep depth positive, got {amplitude}"),
                    );
                }
                if !(width > 0.0) || !width.is_finite() {
                    return bad("initial.width", format!("must be positive, got {width}"));
                }
                if !center.is_finite() {
                    return bad("initial.center", format!("must be finite, got {center}"));
                }
            }
            InitialCondition::Rest => {}
        }
        Ok(())
    }
}

/// `cfl · dx / max(|u| + √H)`; falls back to `cfl · dx` if the speed bound
/// vanishes.
pub fn suggest_dt(state: &State, grid: &Grid, cfl: f64) -> Result<f64> {
    grid.check(&state.u)?;
    grid.check(&state.h)?;
    crate::error::check_depth(&state.h)?;
    let speed = state
        .u
        .iter()
        .zip(&state.h)
        .map(|(u, h)| u.abs() + h.sqrt())
        .fold(0.0, f64::max);
    let base = cfl * grid.dx();
    Ok(if speed > 0.0 && speed.is_finite() {
        base / speed
    } else {
        base
    })
}

fn axpy(y: &[f64], a: f64, x: &[f64]) -> Vec<f64> {
    y.iter().zip(x).map(|(yi, xi)| yi + a * xi).collect()
}

fn check_stage(h: &[f64], stage: usize) -> Result<()> {
    if h.iter().all(|v| *v > 0.0) {
        Ok(())
    } else {
        let min_h = h.iter().copied().fold(f64::INFINITY, f64::min);
        Err(Error::PositivityLost { stage, min_h })
    }
}

fn rk4_combine(y: &[f64], dt: f64, k: [&[f64]; 4]) -> Vec<f64> {
    (0..y.len())
        .map(|i| y[i] + dt / 6.0 * (k[0][i] + 2.0 * k[1][i] + 2.0 * k[2][i] + k[3][i]))
        .collect()
}

/// One classical RK4 step of the Hamiltonian system. `dt` may be negative.
pub fn rk4_step(
    ms: &MomentumState,
    dt: f64,
    grid: &Grid,
    kind: ModelKind,
    form: MomentumForm,
) -> Result<MomentumState> {
    if dt == 0.0 || !dt.is_finite() {
        return Err(Error::InvalidParameter {
            name: "dt",
            reason: format!("must be nonzero and finite, got {dt}"),
        });
    }
    let rhs = |s: &MomentumState, stage: usize| {
        check_stage(&s.h, stage)?;
        models::rhs_hamiltonian(s, grid, kind, form)
    };
    let k1 = rhs(ms, 1)?;
    let s2 = MomentumState {
        m: axpy(&ms.m, 0.5 * dt, &k1.dm_dt),
        h: axpy(&ms.h, 0.5 * dt, &k1.dh_dt),
    };
    let k2 = rhs(&s2, 2)?;
    let s3 = MomentumState {
        m: axpy(&ms.m, 0.5 * dt, &k2.dm_dt),
        h: axpy(&ms.h, 0.5 * dt, &k2.dh_dt),
    };
    let k3 = rhs(&s3, 3)?;
    let s4 = MomentumState {
        m: axpy(&ms.m, dt, &k3.dm_dt),
        h: axpy(&ms.h, dt, &k3.dh_dt),
    };
    let k4 = rhs(&s4, 4)?;
    let out = MomentumState {
        m: rk4_combine(&ms.m, dt, [&k1.dm_dt, &k2.dm_dt, &k3.dm_dt, &k4.dm_dt]),
        h: rk4_combine(&ms.h, dt, [&k1.dh_dt, &k2.dh_dt, &k3.dh_dt, &k4.dh_dt]),
    };
    check_stage(&out.h, 5)?;
    Ok(out)
}

/// One RK4 step of the classical shallow-water equations.
pub fn rk4_step_swe(state: &State, dt: f64, grid: &Grid, viscosity: f64) -> Result<State> {
    if dt == 0.0 || !dt.is_finite() {
        return Err(Error::InvalidParameter {
            name: "dt",
            reason: format!("must be nonzero and finite, got {dt}"),
        });
    }
    let rhs = |s: &State, stage: usize| {
        check_stage(&s.h, stage)?;
        models::rhs_primitive_swe(s, grid, viscosity)
    };
    let stage = |base: &State, a: f64, k: &(Vec<f64>, Vec<f64>)| State {
        u: axpy(&base.u, a, &k.0),
        h: axpy(&base.h, a, &k.1),
    };
    let k1 = rhs(state, 1)?;
    let k2 = rhs(&stage(state, 0.5 * dt, &k1), 2)?;
    let k3 = rhs(&stage(state, 0.5 * dt, &k2), 3)?;
    let k4 = rhs(&stage(state, dt, &k3), 4)?;
    let out = State {
        u: rk4_combine(&state.u, dt, [&k1.0, &k2.0, &k3.0, &k4.0]),
        h: rk4_combine(&state.h, dt, [&k1.1, &k2.1, &k3.1, &k4.1]),
    };
    check_stage(&out.h, 5)?;
    Ok(out)
}

/// Primitive state plus the momentum density at one output time.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub state: State,
    /// Momentum density (`H u` for classical shallow water).
    pub m: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub grid: Grid,
    pub snapshots: Vec<Snapshot>,
    pub diagnostics: Vec<Diagnostics>,
    pub steps: usize,
}

impl RunOutput {
    pub fn final_snapshot(&self) -> &Snapshot {
        self.snapshots
            .last()
            .expect("run always records a snapshot")
    }
}

/// Internal model state, either Hamiltonian or primitive.
enum Evolving {
    Hamiltonian(MomentumState),
    Primitive(State),
}

/// Advances `cfg` to `t_end`, recording diagnostics every step and snapshots
/// at multiples of `snapshot_every` (and always at `t_end`).
pub fn run(cfg: &RunConfig) -> Result<RunOutput> {
    run_with(cfg, |_| {})
}

/// As [`run`], invoking `observe` on each snapshot as it is captured.
pub fn run_with(cfg: &RunConfig, mut observe: impl FnMut(&Snapshot)) -> Result<RunOutput> {
    cfg.validate()?;
    let grid = cfg.grid()?;
    let initial = cfg.initial.sample(&grid, cfg.model)?;
    let mut evolving = match cfg.model.dispersive() {
        Some(_) => Evolving::Hamiltonian(models::m_from_u(&initial, &grid, cfg.model)?),
        None => Evolving::Primitive(initial),
    };

    let mut t = 0.0;
    let mut steps = 0usize;
    let mut next_snapshot = 1usize;
    let mut snapshots = Vec::new();
    let mut diagnostics = Vec::new();

    let (state, m) = primitive_view(&evolving, &grid, cfg.model)?;
    diagnostics.push(Diagnostics::capture(t, &state, &m, &grid, cfg.model)?);
    let snap = Snapshot { t, state, m };
    observe(&snap);
    snapshots.push(snap);
    let mut current = snapshots[0].state.clone();

    while t < cfg.t_end {
        let target = (next_snapshot as f64 * cfg.snapshot_every).min(cfg.t_end);
        let mut dt = match cfg.dt {
            TimeStep::Fixed(dt) => dt,
            TimeStep::Auto => suggest_dt(&current, &grid, cfg.cfl)?,
        };
        let mut hits_target = false;
        if t + dt >= target - 1e-9 * dt {
            dt = target - t;
            hits_target = true;
        }

        evolving = match evolving {
            Evolving::Hamiltonian(ms) => {
                Evolving::Hamiltonian(rk4_step(&ms, dt, &grid, cfg.model, cfg.momentum_form)?)
            }
            Evolving::Primitive(s) => {
                Evolving::Primitive(rk4_step_swe(&s, dt, &grid, cfg.viscosity)?)
            }
        };
        t = if hits_target { target } else { t + dt };
        steps += 1;

        let (state, m) = primitive_view(&evolving, &grid, cfg.model)?;
        if state.u.iter().chain(&state.h).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { t });
        }
        if cfg.model == ModelKind::ClassicalShallowWater {
            let max_slope = max_abs(&grid.diff1(&state.u)?);
            if max_slope > cfg.gradient_limit {
                return Err(Error::GradientBlowup {
                    t,
                    max_slope,
                    limit: cfg.gradient_limit,
                });
            }
        }
        diagnostics.push(Diagnostics::capture(t, &state, &m, &grid, cfg.model)?);
        if hits_target {
            while (next_snapshot as f64) * cfg.snapshot_every <= t * (1.0 + 1e-12) {
                next_snapshot += 1;
            }
            let snap = Snapshot {
                t,
                state: state.clone(),
                m,
            };
            observe(&snap);
            snapshots.push(snap);
        }
        current = state;
    }

    Ok(RunOutput {
        grid,
        snapshots,
        diagnostics,
        steps,
    })
}

fn primitive_view(evolving: &Evolving, grid: &Grid, model: ModelKind) -> Result<(State, Vec<f64>)> {
    match evolving {
        Evolving::Hamiltonian(ms) => Ok((models::u_from_m(ms, grid, model)?, ms.m.clone())),
        Evolving::Primitive(s) => {
            let hu = s.h.iter().zip(&s.u).map(|(h, u)| h * u).collect();
            Ok((s.clone(), hu))
        }
    }
}
