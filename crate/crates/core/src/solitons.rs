//! Closed-form solitary waves and residual checks.
//!
//! New system, with `θ = k ξ`, `k = √(c²-1)/c`:
//!
//! ```text
//! H = 1 + (c²-1) / [1 + ((c²+1)/2) cosh θ + ((c²-1)/2) sinh θ]
//! ```
//!
//! Green-Naghdi: `H = 1 + (c²-1) sech²[(√3/2) k ξ]`. Both families share
//! `u = c (1 - 1/H)` and exist only for `c > 1`.
//!
//! In the raw coordinate the new-system crest sits at `θ = -ln c`, where
//! `H = c`. With `recenter` set, profiles are shifted so the crest is at `ξ = 0`.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::models::{ModelKind, State};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolitonParams {
    c: f64,
    recenter: bool,
}

impl SolitonParams {
    pub fn new(c: f64, recenter: bool) -> Result<Self> {
        validate_speed(c)?;
        Ok(Self { c, recenter })
    }

    /// Crest placed at `ξ = 0`.
    pub fn centered(c: f64) -> Result<Self> {
        Self::new(c, true)
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn recenter(&self) -> bool {
        self.recenter
    }
}

/// Accepts only right-moving admissible speeds, `c > 1`.
pub fn validate_speed(c: f64) -> Result<()> {
    if c > 1.0 && c.is_finite() {
        Ok(())
    } else {
        Err(Error::InadmissibleSpeed(c))
    }
}

/// Decay rate `√(c²-1)/c` of the new-system wave.
pub fn decay_rate_new(c: f64) -> f64 {
    (c * c - 1.0).sqrt() / c
}

/// Decay rate `(√3/2) √(c²-1)/c` of the Green-Naghdi wave.
pub fn decay_rate_gn(c: f64) -> f64 {
    0.5 * 3f64.sqrt() * decay_rate_new(c)
}

/// Raw-coordinate position of the new-system crest, `-c ln c / √(c²-1)`.
pub fn crest_offset(c: f64) -> f64 {
    -c * c.ln() / (c * c - 1.0).sqrt()
}

/// `H - 1` for the new system in the raw coordinate, accurate in the tails.
fn excess_new_raw(c: f64, xi: f64) -> f64 {
    let th = decay_rate_new(c) * xi;
    let denom = 1.0 + 0.5 * c * c * th.exp() + 0.5 * (-th).exp();
    (c * c - 1.0) / denom
}

fn excess_gn(c: f64, xi: f64) -> f64 {
    let s = 1.0 / (decay_rate_gn(c) * xi).cosh();
    (c * c - 1.0) * s * s
}

fn lock_velocity(c: f64, excess: f64) -> f64 {
    c * excess / (1.0 + excess)
}

/// `H - 1` of the new-system wave, without cancellation in the tails.
pub fn excess_new(p: &SolitonParams, xi: f64) -> f64 {
    let raw = if p.recenter {
        xi + crest_offset(p.c)
    } else {
        xi
    };
    excess_new_raw(p.c, raw)
}

/// New-system solitary wave `(H, u)` at `ξ = x - c t`.
pub fn soliton_new(p: &SolitonParams, xi: f64) -> (f64, f64) {
    let e = excess_new(p, xi);
    (1.0 + e, lock_velocity(p.c, e))
}

/// Green-Naghdi solitary wave `(H, u)`; symmetric about `ξ = 0`.
pub fn soliton_gn(p: &SolitonParams, xi: f64) -> (f64, f64) {
    let e = excess_gn(p.c, xi);
    (1.0 + e, lock_velocity(p.c, e))
}

/// Residual of the implicit solution curve in the raw coordinate:
///
/// ```text
/// [±√(c²-1) √(c²-H²) + c² - H] / (H - 1) - exp(-k ξ)
/// ```
///
/// The `+` root holds on the flank ahead of the crest (`ξ` below the crest
/// position); behind it the root changes sign. Zero iff `(H, ξ)` lies on the
/// wave. Requires `1 < H < c`.
pub fn check_implicit(h: f64, xi: f64, c: f64) -> Result<f64> {
    validate_speed(c)?;
    if !(h > 1.0 && h < c) {
        return Err(Error::OutsideImplicitRange { h, c });
    }
    let sign = if xi <= crest_offset(c) { 1.0 } else { -1.0 };
    let root = (c * c - 1.0).sqrt() * (c * c - h * h).sqrt();
    let lhs = (sign * root + c * c - h) / (h - 1.0);
    Ok(lhs - (-decay_rate_new(c) * xi).exp())
}

/// First integral of the new-system traveling-wave equation,
/// `c² (H')² - (H-1)² (c² - H²)`.
pub fn ode_residual_new(h: f64, dh: f64, c: f64) -> f64 {
    c * c * dh * dh - (h - 1.0).powi(2) * (c * c - h * h)
}

/// Green-Naghdi counterpart, `c² (H')² - 3 (H-1)² (c² - H)`.
pub fn ode_residual_gn(h: f64, dh: f64, c: f64) -> f64 {
    c * c * dh * dh - 3.0 * (h - 1.0).powi(2) * (c * c - h)
}

/// [`ode_residual_new`] at every node, with `H'` the centred difference.
pub fn check_traveling_ode(h: &[f64], grid: &Grid, c: f64) -> Result<Vec<f64>> {
    let dh = grid.diff1(h)?;
    Ok(h.iter()
        .zip(&dh)
        .map(|(&hv, &d)| ode_residual_new(hv, d, c))
        .collect())
}

/// Exact solitary wave of `model` on a periodic grid, crest at
/// `center + c t`. The classical shallow-water model uses the new-system
/// profile as initial data.
pub fn sample_state(grid: &Grid, model: ModelKind, c: f64, center: f64, t: f64) -> Result<State> {
    let p = SolitonParams::centered(c)?;
    let crest = center + c * t;
    let (h, u): (Vec<f64>, Vec<f64>) = grid
        .x()
        .iter()
        .map(|&x| {
            let xi = grid.wrap_offset(x, crest);
            match model {
                ModelKind::GreenNaghdi => soliton_gn(&p, xi),
                _ => soliton_new(&p, xi),
            }
        })
        .unzip();
    State::new(u, h)
}

/// Distance between a computed state and the exact translated wave.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorNorms {
    /// `‖(H, u) - (H_e, u_e)‖₂ / ‖(H_e - 1, u_e)‖₂`
    pub rel_l2: f64,
    /// Largest pointwise error over both fields.
    pub max_abs: f64,
}

pub fn propagation_error(
    state: &State,
    grid: &Grid,
    model: ModelKind,
    c: f64,
    center: f64,
    t: f64,
) -> Result<ErrorNorms> {
    grid.check(&state.u)?;
    grid.check(&state.h)?;
    let exact = sample_state(grid, model, c, center, t)?;
    let mut num = 0.0;
    let mut den = 0.0;
    let mut max_abs = 0.0_f64;
    for i in 0..grid.n() {
        let dh = state.h[i] - exact.h[i];
        let du = state.u[i] - exact.u[i];
        num += dh * dh + du * du;
        den += (exact.h[i] - 1.0).powi(2) + exact.u[i] * exact.u[i];
        max_abs = max_abs.max(dh.abs()).max(du.abs());
    }
    Ok(ErrorNorms {
        rel_l2: (num / den).sqrt(),
        max_abs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(c: f64) -> SolitonParams {
        SolitonParams::new(c, false).unwrap()
    }

    #[test]
    fn speed_gate() {
        assert!(validate_speed(2.0).is_ok());
        assert_eq!(validate_speed(1.0), Err(Error::InadmissibleSpeed(1.0)));
        assert!(validate_speed(0.5).is_err());
        assert!(validate_speed(-3.0).is_err());
        assert!(validate_speed(f64::NAN).is_err());
        assert!(SolitonParams::centered(0.9).is_err());
        let g = Grid::centered(16, 16.0).unwrap();
        assert!(sample_state(&g, ModelKind::NewSystem, 1.0, 0.0, 0.0).is_err());
        assert!(check_implicit(1.5, 0.0, 1.0).is_err());
        assert!(Error::InadmissibleSpeed(0.9)
            .to_string()
            .contains("c must exceed 1"));
    }

    #[test]
    fn new_system_at_origin() {
        let (h, u) = soliton_new(&raw(2.0), 0.0);
        assert!((h - 13.0 / 7.0).abs() < 1e-15);
        assert!((u - 12.0 / 13.0).abs() < 1e-15);
    }

    #[test]
    fn new_system_crest_after_recentering() {
        let (h, u) = soliton_new(&SolitonParams::centered(2.0).unwrap(), 0.0);
        assert!((h - 2.0).abs() < 1e-14);
        assert!((u - 1.0).abs() < 1e-14);
    }

    #[test]
    fn decay_limits() {
        for c in [1.1, 2.0, 3.0] {
            let xi = 60.0 / decay_rate_new(c);
            for x in [xi, -xi] {
                let (h, u) = soliton_new(&raw(c), x);
                assert!(h - 1.0 <= 1e-12 && h >= 1.0);
                assert!(u.abs() <= 1e-12);
                let (h, u) = soliton_gn(&raw(c), x);
                assert!(h - 1.0 <= 1e-12);
                assert!(u.abs() <= 1e-12);
            }
            // far outside the exp range
            assert_eq!(soliton_new(&raw(c), 1e6).0, 1.0);
            assert_eq!(soliton_new(&raw(c), -1e6).0, 1.0);
        }
    }

    #[test]
    fn gn_crest_and_symmetry() {
        let (h, u) = soliton_gn(&raw(2.0), 0.0);
        assert_eq!(h, 4.0);
        assert_eq!(u, 1.5);
        for xi in [0.1, 1.0, 3.7, 12.0] {
            assert_eq!(soliton_gn(&raw(1.4), xi), soliton_gn(&raw(1.4), -xi));
        }
    }

    #[test]
    fn velocity_is_locked_to_depth() {
        for c in [1.1, 1.5, 2.0, 3.0] {
            for i in -50..50 {
                let xi = i as f64 * 0.3;
                for (h, u) in [soliton_new(&raw(c), xi), soliton_gn(&raw(c), xi)] {
                    assert!((u - c * (1.0 - 1.0 / h)).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn implicit_relation_edges() {
        assert!(matches!(
            check_implicit(1.0, 0.0, 2.0),
            Err(Error::OutsideImplicitRange { .. })
        ));
        assert!(matches!(
            check_implicit(2.0, 0.0, 2.0),
            Err(Error::OutsideImplicitRange { .. })
        ));
        assert!(check_implicit(2.5, 0.0, 2.0).is_err());
    }

    #[test]
    fn implicit_relation_on_both_flanks() {
        let c = 2.0;
        let crest = crest_offset(c);
        for i in 0..40 {
            let xi = crest - 6.0 + i as f64 * 0.31;
            if (xi - crest).abs() < 1e-3 {
                continue;
            }
            let (h, _) = soliton_new(&raw(c), xi);
            assert!(check_implicit(h, xi, c).unwrap().abs() < 1e-9, "xi = {xi}");
        }
    }

    #[test]
    fn exponential_tail_ratio() {
        for c in [2.0, 3.0] {
            let target = (-decay_rate_new(c)).exp();
            for xi in [20.0, 25.0, 30.0] {
                let p = raw(c);
                let r = excess_new(&p, xi + 1.0) / excess_new(&p, xi);
                assert!((r - target).abs() < 1e-6, "c={c} xi={xi}: {r} vs {target}");
            }
        }
    }

    #[test]
    fn traveling_ode_vanishes_on_rest() {
        let g = Grid::centered(32, 10.0).unwrap();
        let r = check_traveling_ode(&vec![1.0; 32], &g, 2.0).unwrap();
        assert!(r.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn sampled_state_is_translated() {
        let g = Grid::centered(400, 40.0).unwrap();
        let s0 = sample_state(&g, ModelKind::NewSystem, 1.5, 0.0, 0.0).unwrap();
        let s1 = sample_state(&g, ModelKind::NewSystem, 1.5, 0.0, 2.0).unwrap();
        // shift by c t = 3 = 30 cells
        for i in 0..400 {
            assert!((s1.h[(i + 30) % 400] - s0.h[i]).abs() < 1e-12);
        }
        let peak = s0.h.iter().copied().fold(0.0, f64::max);
        assert!((peak - 1.5).abs() < 1e-12);
        let gn = sample_state(&g, ModelKind::GreenNaghdi, 1.5, 0.0, 0.0).unwrap();
        assert!((gn.h[200] - 2.25).abs() < 1e-14);
    }

    #[test]
    fn gn_profile_solves_its_own_first_integral() {
        let p = SolitonParams::centered(2.0).unwrap();
        for xi in [-3.0, -0.7, 0.4, 2.5] {
            let step = 1e-5;
            let (h, _) = soliton_gn(&p, xi);
            let dh = (soliton_gn(&p, xi + step).0 - soliton_gn(&p, xi - step).0) / (2.0 * step);
            assert!(ode_residual_gn(h, dh, 2.0).abs() < 1e-8);
            assert!(ode_residual_new(h, dh, 2.0).abs() > 1e-2);
        }
    }
}
