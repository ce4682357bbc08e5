//! Acceptance criteria 1-10, one PASS/FAIL line each.
//!
//! Run with `cargo test -p shallow-verify --test acceptance -- --nocapture`
//! to see the report when everything passes.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use shallow_cli::commands::{self, ExactParams};
use shallow_cli::parse_config;
use shallow_core::conservation::{
    delta_h_delta_h, energy, energy_of_momentum, momentum_flux, Drift,
};
use shallow_core::models::{m_from_u, rhs_hamiltonian};
use shallow_core::solitons::{
    check_implicit, check_traveling_ode, propagation_error, sample_state, soliton_gn, soliton_new,
    validate_speed,
};
use shallow_core::timestepper::run;
use shallow_core::{
    BandedOperator, DispersiveKind, Grid, InitialCondition, ModelKind, MomentumForm, MomentumState,
    RunConfig, SolitonParams, State,
};
use shallow_verify::{golden_max, max_abs_diff, orders, sci, Report};

const DISPERSIVE: [DispersiveKind; 2] = [DispersiveKind::NewSystem, DispersiveKind::GreenNaghdi];

fn crest_identities(report: &mut Report) {
    let mut worst_new = 0.0_f64;
    let mut worst_gn = 0.0_f64;
    let mut at_two = (0.0, 0.0, 0.0);
    for c in [1.1, 1.5, 2.0, 3.0] {
        let raw = SolitonParams::new(c, false).unwrap();
        let (xmax, hmax) = golden_max(-20.0, 20.0, |xi| soliton_new(&raw, xi).0);
        let (_, gmax) = golden_max(-20.0, 20.0, |xi| soliton_gn(&raw, xi).0);
        worst_new = worst_new.max((hmax - c).abs());
        worst_gn = worst_gn.max((gmax - c * c).abs());
        if c == 2.0 {
            at_two = (hmax, gmax, soliton_new(&raw, xmax).1);
        }
    }
    let pass = worst_new <= 1e-10
        && worst_gn <= 1e-12
        && (at_two.0 - 2.0).abs() <= 1e-10
        && (at_two.1 - 4.0).abs() <= 1e-12
        && (at_two.2 - 1.0).abs() <= 1e-10;
    report.record(
        1,
        "crest identities",
        pass,
        format!(
            "max |crest - c| = {worst_new:.2e}, max |gn crest - c^2| = {worst_gn:.2e}; c = 2: H = {:.12}, H_gn = {:.12}, u = {:.12}",
            at_two.0, at_two.1, at_two.2
        ),
    );
}

fn implicit_form(report: &mut Report) {
    let c = 2.0;
    let raw = SolitonParams::new(c, false).unwrap();
    let mut worst = 0.0_f64;
    let mut count = 0;
    let mut i = 0;
    while count < 100 {
        let xi = -10.0 + 20.0 * (i as f64 + 0.5) / 100.0;
        i += 1;
        let (h, _) = soliton_new(&raw, xi);
        // the relation is undefined at the crest and in the H = 1 limit
        let Ok(r) = check_implicit(h, xi, c) else {
            continue;
        };
        worst = worst.max(r.abs());
        count += 1;
    }
    report.record(
        2,
        "implicit-form consistency",
        worst <= 1e-9,
        format!("max |residual| = {worst:.2e} over {count} points, c = 2, xi in [-10, 10]"),
    );
}

fn traveling_ode(report: &mut Report) {
    let c = 2.0;
    let res: Vec<f64> = [512, 1024, 2048]
        .iter()
        .map(|&n| {
            let g = Grid::centered(n, 80.0).unwrap();
            let s = sample_state(&g, ModelKind::NewSystem, c, 0.0, 0.0).unwrap();
            check_traveling_ode(&s.h, &g, c)
                .unwrap()
                .iter()
                .fold(0.0_f64, |a, r| a.max(r.abs()))
        })
        .collect();
    let ratios = [res[0] / res[1], res[1] / res[2]];
    report.record(
        3,
        "traveling-wave ODE residual",
        ratios.iter().all(|r| (3.5..=4.5).contains(r)),
        format!("max residuals {}, ratios {ratios:.3?}", sci(&res)),
    );
}

const C_RUN: f64 = 1.2;
const CENTER: f64 = -20.0;

fn soliton_config(model: ModelKind, n: usize) -> RunConfig {
    RunConfig::new(model, n, 80.0, 10.0).with_initial(InitialCondition::Soliton {
        c: C_RUN,
        center: CENTER,
    })
}

fn final_error(cfg: &RunConfig) -> f64 {
    let out = run(cfg).unwrap();
    let last = out.final_snapshot();
    assert_eq!(last.t, cfg.t_end);
    propagation_error(&last.state, &out.grid, cfg.model, C_RUN, CENTER, last.t)
        .unwrap()
        .rel_l2
}

fn propagation(report: &mut Report) {
    let mut pass = true;
    let mut details = Vec::new();
    for model in [ModelKind::NewSystem, ModelKind::GreenNaghdi] {
        let errs: Vec<f64> = [512, 1024, 2048]
            .iter()
            .map(|&n| final_error(&soliton_config(model, n)))
            .collect();
        let ord = orders(&errs);
        pass &= errs[1] <= 5e-3 && ord.iter().all(|p| (p - 2.0).abs() <= 0.3);
        details.push(format!("{model}: L2 {}, orders {ord:.3?}", sci(&errs)));
    }
    report.record(4, "soliton propagation", pass, details.join("; "));
}

fn drift_with(form: MomentumForm, cfl: f64) -> Drift {
    let mut cfg = soliton_config(ModelKind::NewSystem, 1024);
    cfg.momentum_form = form;
    cfg.cfl = cfl;
    Drift::of(&run(&cfg).unwrap().diagnostics)
}

fn conservation(report: &mut Report) {
    let base = soliton_config(ModelKind::NewSystem, 1024);
    let d = drift_with(base.momentum_form, base.cfl);
    let half = drift_with(base.momentum_form, 0.5 * base.cfl);
    let ratio = d.energy / half.energy;
    let pass = d.mass <= 1e-10
        && d.total_momentum <= 1e-10
        && d.energy <= 1e-6
        && (ratio - 16.0).abs() <= 0.3 * 16.0;
    report.record(
        5,
        "conservation drift",
        pass,
        format!(
            "{} form: mass {:.2e}, momentum {:.2e}, energy {:.2e}, energy ratio on halving dt {ratio:.2}",
            base.momentum_form.name(),
            d.mass,
            d.total_momentum,
            d.energy
        ),
    );
    let other = match base.momentum_form {
        MomentumForm::Conservative => MomentumForm::SkewAdjoint,
        MomentumForm::SkewAdjoint => MomentumForm::Conservative,
    };
    let s = drift_with(other, base.cfl);
    let s_half = drift_with(other, 0.5 * base.cfl);
    report.note(
        5,
        &format!(
            "{} form: mass {:.2e}, momentum {:.2e}, energy {:.2e} -> {:.2e}, ratio {:.2}",
            other.name(),
            s.mass,
            s.total_momentum,
            s.energy,
            s_half.energy,
            s.energy / s_half.energy
        ),
    );
}

fn operator_properties(report: &mut Report) {
    let mut rng = StdRng::seed_from_u64(20240611);
    let g = Grid::centered(256, 30.0).unwrap();
    let mut sym = 0.0_f64;
    let mut min_quad = f64::INFINITY;
    let mut round = 0.0_f64;
    for kind in DISPERSIVE {
        for _ in 0..50 {
            let h: Vec<f64> = (0..g.n()).map(|_| rng.random_range(0.2..3.0)).collect();
            let op = BandedOperator::assemble(&h, &g, kind).unwrap();
            let u: Vec<f64> = (0..g.n()).map(|_| rng.random_range(-1.0..1.0)).collect();
            let v: Vec<f64> = (0..g.n()).map(|_| rng.random_range(-1.0..1.0)).collect();
            let (tu, tv) = (op.apply(&u).unwrap(), op.apply(&v).unwrap());
            let norm = |a: &[f64]| g.inner(a, a).unwrap().sqrt();
            let defect = (g.inner(&tu, &v).unwrap() - g.inner(&u, &tv).unwrap()).abs()
                / (norm(&tu) * norm(&v));
            sym = sym.max(defect);
            min_quad = min_quad.min(g.inner(&tu, &u).unwrap() / g.inner(&u, &u).unwrap());
            round = round.max(max_abs_diff(&op.solve(&tu).unwrap(), &u));
        }
    }
    report.record(
        6,
        "operator properties",
        sym <= 1e-12 && min_quad > 0.0 && round <= 1e-10,
        format!(
            "symmetry defect {sym:.2e}, min <Tu,u>/<u,u> = {min_quad:.3e} over 100 draws, roundtrip {round:.2e}"
        ),
    );
}

/// Best relative error over a step ladder between a central-difference
/// gradient of `f` (divided by `dx`) and `analytic`.
fn fd_error(base: &[f64], dx: f64, analytic: &[f64], f: impl Fn(&[f64]) -> f64) -> f64 {
    let scale = analytic.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    [1e-4, 1e-5, 1e-6]
        .iter()
        .map(|&step| {
            let mut x = base.to_vec();
            let mut worst = 0.0_f64;
            for j in 0..base.len() {
                x[j] = base[j] + step;
                let plus = f(&x);
                x[j] = base[j] - step;
                let minus = f(&x);
                x[j] = base[j];
                worst = worst.max(((plus - minus) / (2.0 * step * dx) - analytic[j]).abs());
            }
            worst / scale
        })
        .fold(f64::INFINITY, f64::min)
}

fn variational(report: &mut Report) {
    let g = Grid::centered(64, 16.0).unwrap();
    let s = State::new(
        g.sample(|x| 0.5 * (-(x - 1.0) * (x - 1.0) / 2.0).exp() - 0.1 * (0.4 * x).cos()),
        g.sample(|x| 1.0 + 0.7 * (-x * x / 5.0).exp() + 0.1 * (0.8 * x).sin()),
    )
    .unwrap();
    let mut details = Vec::new();
    let mut worst = 0.0_f64;
    for kind in DISPERSIVE {
        let ms = m_from_u(&s, &g, kind.into()).unwrap();
        let e_m = fd_error(&s.u, g.dx(), &ms.m, |u| {
            energy(
                &State {
                    u: u.to_vec(),
                    h: s.h.clone(),
                },
                &g,
                kind.into(),
            )
            .unwrap()
        });
        let phi = delta_h_delta_h(&s, &g, kind).unwrap();
        let e_h = fd_error(&ms.h, g.dx(), &phi, |h| {
            energy_of_momentum(
                &MomentumState {
                    m: ms.m.clone(),
                    h: h.to_vec(),
                },
                &g,
                kind,
            )
            .unwrap()
        });
        worst = worst.max(e_m).max(e_h);
        details.push(format!(
            "{}: m {e_m:.2e}, dE/dH {e_h:.2e}",
            ModelKind::from(kind)
        ));
    }
    report.record(
        7,
        "variational-derivative oracle",
        worst <= 1e-6,
        details.join("; "),
    );
}

/// Max of `dm/dt + ∂x F` on the exact c = 2 soliton, with `dm/dt` from the
/// Hamiltonian tendencies and `F` from `flux`.
fn flux_residual(n: usize, flux: impl Fn(&State, &Grid) -> Vec<f64>) -> f64 {
    let g = Grid::centered(n, 80.0).unwrap();
    let s = sample_state(&g, ModelKind::NewSystem, 2.0, 0.0, 0.0).unwrap();
    let ms = m_from_u(&s, &g, ModelKind::NewSystem).unwrap();
    let rhs = rhs_hamiltonian(&ms, &g, ModelKind::NewSystem, MomentumForm::SkewAdjoint).unwrap();
    let df = g.diff1(&flux(&s, &g)).unwrap();
    rhs.dm_dt
        .iter()
        .zip(&df)
        .map(|(a, b)| (a + b).abs())
        .fold(0.0, f64::max)
}

fn momentum_flux_law(report: &mut Report) {
    let ladder = [512, 1024, 2048];
    // plus sign on the dispersive term: m u + u²/2 + H²/2 + 3 H² u_x²/2
    let plus_sign = |s: &State, g: &Grid| {
        let m = m_from_u(s, g, ModelKind::NewSystem).unwrap().m;
        let ux = g.diff1(&s.u).unwrap();
        (0..g.n())
            .map(|i| {
                let (u, h) = (s.u[i], s.h[i]);
                m[i] * u + 0.5 * u * u + 0.5 * h * h + 1.5 * h * h * ux[i] * ux[i]
            })
            .collect::<Vec<f64>>()
    };
    let res: Vec<f64> = ladder
        .iter()
        .map(|&n| flux_residual(n, plus_sign))
        .collect();
    let ord = orders(&res);
    report.record(
        8,
        "local momentum flux",
        ord.iter().all(|p| (p - 2.0).abs() <= 0.3),
        format!(
            "with +3 H² u_x²/2: max residuals {}, orders {ord:.3?}",
            sci(&res)
        ),
    );
    let fixed: Vec<f64> = ladder
        .iter()
        .map(|&n| flux_residual(n, |s, g| momentum_flux(s, g).unwrap()))
        .collect();
    report.note(
        8,
        &format!(
            "with -3 H² u_x²/2: max residuals {}, orders {:.3?}",
            sci(&fixed),
            orders(&fixed)
        ),
    );
}

fn equilibrium(report: &mut Report) {
    let mut worst = 0.0_f64;
    for model in ModelKind::ALL {
        let out = run(&RunConfig::new(model, 256, 40.0, 5.0)).unwrap();
        for snap in &out.snapshots {
            let du = snap.state.u.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
            let dh = snap
                .state
                .h
                .iter()
                .fold(0.0_f64, |a, v| a.max((v - 1.0).abs()));
            worst = worst.max(du).max(dh);
        }
        assert_eq!(out.final_snapshot().t, 5.0);
    }
    report.record(
        9,
        "equilibrium exactness",
        worst <= f64::EPSILON,
        format!("max deviation from rest over t in [0, 5], all three models: {worst:.2e}"),
    );
}

fn speed_gate(report: &mut Report) {
    let tmp = tempfile::TempDir::new().unwrap();
    let g = Grid::centered(64, 20.0).unwrap();
    let mut leaks = Vec::new();
    for c in [1.0, 0.999, 0.5, 0.0, -0.5, -1.0, -2.0, f64::NAN] {
        let mut check = |site: &str, rejected: bool| {
            if !rejected {
                leaks.push(format!("{site} accepted c = {c}"));
            }
        };
        check("validate_speed", validate_speed(c).is_err());
        check("SolitonParams", SolitonParams::new(c, true).is_err());
        for model in ModelKind::ALL {
            check(
                "sample_state",
                sample_state(&g, model, c, 0.0, 0.0).is_err(),
            );
            let cfg = RunConfig::new(model, 64, 20.0, 1.0)
                .with_initial(InitialCondition::Soliton { c, center: 0.0 });
            check("RunConfig::validate", cfg.validate().is_err());
            check("run", run(&cfg).is_err());
            let text = format!(
                r#"{{"model":"{}","n":64,"length":20,"t_end":1,"initial":{{"type":"soliton","c":{}}}}}"#,
                model.name(),
                if c.is_nan() {
                    "null".to_string()
                } else {
                    c.to_string()
                }
            );
            check("parse_config", parse_config(&text).is_err());
        }
        let params = ExactParams {
            c,
            samples: 5,
            range: 2.0,
            recenter: false,
        };
        check("exact", commands::exact_rows(&params).is_err());
        check(
            "compare",
            commands::compare(&g, &[1.5, c], tmp.path()).is_err(),
        );
    }
    let admitted = validate_speed(1.0 + 1e-9).is_ok()
        && commands::exact_rows(&ExactParams {
            c: 1.01,
            samples: 5,
            range: 2.0,
            recenter: true,
        })
        .is_ok();
    report.record(
        10,
        "speed gate",
        leaks.is_empty() && admitted,
        if leaks.is_empty() {
            "c <= 1 rejected by validate_speed, SolitonParams, sample_state, run config, run, parse_config, exact, compare".to_string()
        } else {
            leaks.join("; ")
        },
    );
}

#[test]
fn acceptance_criteria() {
    let mut report = Report::default();
    crest_identities(&mut report);
    implicit_form(&mut report);
    traveling_ode(&mut report);
    propagation(&mut report);
    conservation(&mut report);
    operator_properties(&mut report);
    variational(&mut report);
    momentum_flux_law(&mut report);
    equilibrium(&mut report);
    speed_gate(&mut report);

    assert_eq!(report.outcomes().len(), 10);
    let failed: Vec<u32> = report.failures().iter().map(|o| o.id).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
