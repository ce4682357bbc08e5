//! Experiment subcommands. Each one writes its files into an output
//! directory and returns a summary for printing.

use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde_json::{json, Value};
use shallow_core::conservation::{energy, mass, Drift};
use shallow_core::solitons::{
    check_implicit, crest_offset, ode_residual_gn, ode_residual_new, propagation_error,
    sample_state, soliton_gn, soliton_new, validate_speed, ErrorNorms,
};
use shallow_core::timestepper::{run, suggest_dt};
use shallow_core::{
    Grid, InitialCondition, ModelKind, RunConfig, RunOutput, SolitonParams, TimeStep,
};

use crate::config::config_to_json;
use crate::error::CliError;
use crate::output::{
    fmt_f64, snapshot_file_name, write_diagnostics, write_metadata, write_snapshot,
    write_snapshot_index, write_table, DIAGNOSTICS_FILE, METADATA_FILE, SNAPSHOT_INDEX_FILE,
};

type Result<T> = std::result::Result<T, CliError>;

pub const DEFAULT_SPEEDS: [f64; 4] = [1.1, 1.5, 2.0, 3.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Propagate,
    Conserve,
    Convergence,
    Compare,
    Exact,
    Simulate,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        ExperimentKind::Propagate,
        ExperimentKind::Conserve,
        ExperimentKind::Convergence,
        ExperimentKind::Compare,
        ExperimentKind::Exact,
        ExperimentKind::Simulate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Propagate => "propagate",
            ExperimentKind::Conserve => "conserve",
            ExperimentKind::Convergence => "convergence",
            ExperimentKind::Compare => "compare",
            ExperimentKind::Exact => "exact",
            ExperimentKind::Simulate => "simulate",
        }
    }
}

fn prepare(out: &Path) -> Result<()> {
    fs::create_dir_all(out).map_err(CliError::io(out))
}

fn config_inputs(cfg: &RunConfig) -> Value {
    json!({ "config": config_to_json(cfg) })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulateSummary {
    pub steps: usize,
    pub t_end: f64,
    pub snapshots: usize,
    pub drift: Drift,
}

fn write_run(out: &Path, result: &RunOutput) -> Result<()> {
    for (i, snap) in result.snapshots.iter().enumerate() {
        write_snapshot(
            out.join(snapshot_file_name(i)),
            &result.grid,
            &snap.state,
            &snap.m,
        )?;
    }
    let times: Vec<f64> = result.snapshots.iter().map(|s| s.t).collect();
    write_snapshot_index(out.join(SNAPSHOT_INDEX_FILE), &times)?;
    write_diagnostics(out.join(DIAGNOSTICS_FILE), &result.diagnostics)
}

fn summarize(result: &RunOutput) -> SimulateSummary {
    SimulateSummary {
        steps: result.steps,
        t_end: result.final_snapshot().t,
        snapshots: result.snapshots.len(),
        drift: Drift::of(&result.diagnostics),
    }
}

/// Runs `cfg` and writes snapshots, their index, diagnostics and metadata.
pub fn simulate(cfg: &RunConfig, out: &Path) -> Result<SimulateSummary> {
    prepare(out)?;
    let result = run(cfg)?;
    write_run(out, &result)?;
    write_metadata(
        out.join(METADATA_FILE),
        ExperimentKind::Simulate.name(),
        config_inputs(cfg),
    )?;
    Ok(summarize(&result))
}

fn soliton_of(cfg: &RunConfig, command: &str) -> Result<(f64, f64)> {
    if cfg.model.dispersive().is_none() {
        return Err(CliError::Usage(format!(
            "{command} needs a dispersive model (new or gn), got {}",
            cfg.model
        )));
    }
    match cfg.initial {
        InitialCondition::Soliton { c, center } => Ok((c, center)),
        _ => Err(CliError::Usage(format!(
            "{command} needs a soliton initial condition"
        ))),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropagateSummary {
    pub run: SimulateSummary,
    /// `(t, error)` for every snapshot.
    pub errors: Vec<(f64, ErrorNorms)>,
}

impl PropagateSummary {
    pub fn final_error(&self) -> ErrorNorms {
        self.errors.last().expect("at least the initial snapshot").1
    }
}

/// Simulates a soliton and measures it against the translated exact wave.
pub fn propagate(cfg: &RunConfig, out: &Path) -> Result<PropagateSummary> {
    let (c, center) = soliton_of(cfg, "propagate")?;
    prepare(out)?;
    let result = run(cfg)?;
    let errors = result
        .snapshots
        .iter()
        .map(|s| {
            Ok((
                s.t,
                propagation_error(&s.state, &result.grid, cfg.model, c, center, s.t)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    write_run(out, &result)?;
    let rows: Vec<Vec<String>> = errors
        .iter()
        .map(|(t, e)| vec![fmt_f64(*t), fmt_f64(e.rel_l2), fmt_f64(e.max_abs)])
        .collect();
    write_table(out.join("errors.csv"), &["t", "rel_l2", "max_abs"], &rows)?;
    write_metadata(
        out.join(METADATA_FILE),
        ExperimentKind::Propagate.name(),
        config_inputs(cfg),
    )?;
    Ok(PropagateSummary {
        run: summarize(&result),
        errors,
    })
}

/// Diagnostics-only run; returns the largest relative drifts.
pub fn conserve(cfg: &RunConfig, out: &Path) -> Result<Drift> {
    prepare(out)?;
    let result = run(cfg)?;
    let drift = Drift::of(&result.diagnostics);
    write_diagnostics(out.join(DIAGNOSTICS_FILE), &result.diagnostics)?;
    let rows = vec![
        vec!["mass".to_string(), fmt_f64(drift.mass)],
        vec!["energy".to_string(), fmt_f64(drift.energy)],
        vec!["total_momentum".to_string(), fmt_f64(drift.total_momentum)],
    ];
    write_table(
        out.join("drift.csv"),
        &["quantity", "max_relative_drift"],
        &rows,
    )?;
    write_metadata(
        out.join(METADATA_FILE),
        ExperimentKind::Conserve.name(),
        config_inputs(cfg),
    )?;
    Ok(drift)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LadderRow {
    pub n: usize,
    pub steps: usize,
    pub error: f64,
    /// Observed order against the previous row, `NaN` on the first.
    pub order: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceSummary {
    pub spatial: Vec<LadderRow>,
    pub temporal: Vec<LadderRow>,
}

impl ConvergenceSummary {
    pub fn spatial_order(&self) -> f64 {
        self.spatial.last().map_or(f64::NAN, |r| r.order)
    }

    pub fn temporal_order(&self) -> f64 {
        self.temporal.last().map_or(f64::NAN, |r| r.order)
    }
}

fn with_orders(rows: &mut [LadderRow]) {
    for i in 1..rows.len() {
        rows[i].order = (rows[i - 1].error / rows[i].error).log2();
    }
}

fn state_distance(a: &RunOutput, b: &RunOutput) -> f64 {
    let (sa, sb) = (&a.final_snapshot().state, &b.final_snapshot().state);
    sa.u.iter()
        .zip(&sb.u)
        .chain(sa.h.iter().zip(&sb.h))
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Spatial ladder `n, 2n, 4n` against the exact wave, and a temporal
/// self-convergence ladder `dt, dt/2, dt/4` at the base resolution.
pub fn convergence(cfg: &RunConfig, out: &Path) -> Result<ConvergenceSummary> {
    let (c, center) = soliton_of(cfg, "convergence")?;
    prepare(out)?;

    let dt0 = match cfg.dt {
        TimeStep::Fixed(dt) => dt,
        TimeStep::Auto => {
            let grid = cfg.grid()?;
            let initial = sample_state(&grid, cfg.model, c, center, 0.0)?;
            suggest_dt(&initial, &grid, cfg.cfl)?
        }
    };
    // whole number of steps so the final step is never clipped
    let base_steps = (cfg.t_end / dt0).ceil().max(1.0) as usize;

    let mut jobs: Vec<RunConfig> = (0..3)
        .map(|k| RunConfig {
            n: cfg.n << k,
            snapshot_every: cfg.t_end,
            ..cfg.clone()
        })
        .collect();
    jobs.extend((0..3).map(|k| RunConfig {
        dt: TimeStep::Fixed(cfg.t_end / (base_steps << k) as f64),
        snapshot_every: cfg.t_end,
        ..cfg.clone()
    }));
    let results = jobs
        .par_iter()
        .map(run)
        .collect::<std::result::Result<Vec<_>, _>>()?;

    let mut spatial = results[..3]
        .iter()
        .map(|r| {
            let last = r.final_snapshot();
            let err = propagation_error(&last.state, &r.grid, cfg.model, c, center, last.t)?;
            Ok(LadderRow {
                n: r.grid.n(),
                steps: r.steps,
                error: err.rel_l2,
                order: f64::NAN,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    with_orders(&mut spatial);

    let mut temporal: Vec<LadderRow> = (0..2)
        .map(|k| LadderRow {
            n: cfg.n,
            steps: results[3 + k].steps,
            error: state_distance(&results[3 + k], &results[4 + k]),
            order: f64::NAN,
        })
        .collect();
    with_orders(&mut temporal);

    let rows: Vec<Vec<String>> = spatial
        .iter()
        .map(|r| ("spatial", r))
        .chain(temporal.iter().map(|r| ("temporal", r)))
        .map(|(study, r)| {
            vec![
                study.to_string(),
                r.n.to_string(),
                r.steps.to_string(),
                fmt_f64(r.error),
                fmt_f64(r.order),
            ]
        })
        .collect();
    write_table(
        out.join("convergence.csv"),
        &["study", "n", "steps", "error", "order"],
        &rows,
    )?;
    write_metadata(
        out.join(METADATA_FILE),
        ExperimentKind::Convergence.name(),
        config_inputs(cfg),
    )?;
    Ok(ConvergenceSummary { spatial, temporal })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareRow {
    pub c: f64,
    pub new_crest: f64,
    pub gn_crest: f64,
    pub new_mass: f64,
    pub gn_mass: f64,
    pub new_energy: f64,
    pub gn_energy: f64,
}

pub const COMPARE_HEADER: [&str; 7] = [
    "c",
    "new_crest",
    "gn_crest",
    "new_mass",
    "gn_mass",
    "new_energy",
    "gn_energy",
];

fn compare_row(grid: &Grid, c: f64) -> Result<CompareRow> {
    let p = SolitonParams::centered(c)?;
    let new = sample_state(grid, ModelKind::NewSystem, c, 0.0, 0.0)?;
    let gn = sample_state(grid, ModelKind::GreenNaghdi, c, 0.0, 0.0)?;
    Ok(CompareRow {
        c,
        new_crest: soliton_new(&p, 0.0).0,
        gn_crest: soliton_gn(&p, 0.0).0,
        new_mass: mass(&new, grid)?,
        gn_mass: mass(&gn, grid)?,
        new_energy: energy(&new, grid, ModelKind::NewSystem)?,
        gn_energy: energy(&gn, grid, ModelKind::GreenNaghdi)?,
    })
}

/// Crest height, excess mass and energy of both solitary waves on `grid`.
pub fn compare(grid: &Grid, speeds: &[f64], out: &Path) -> Result<Vec<CompareRow>> {
    for &c in speeds {
        validate_speed(c)?;
    }
    prepare(out)?;
    let rows = speeds
        .par_iter()
        .map(|&c| compare_row(grid, c))
        .collect::<Result<Vec<_>>>()?;
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            [
                r.c,
                r.new_crest,
                r.gn_crest,
                r.new_mass,
                r.gn_mass,
                r.new_energy,
                r.gn_energy,
            ]
            .into_iter()
            .map(fmt_f64)
            .collect()
        })
        .collect();
    write_table(out.join("compare.csv"), &COMPARE_HEADER, &table)?;
    let inputs = json!({
        "n": grid.n(),
        "length": grid.length(),
        "speeds": speeds,
    });
    write_metadata(
        out.join(METADATA_FILE),
        ExperimentKind::Compare.name(),
        inputs,
    )?;
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactParams {
    pub c: f64,
    pub samples: usize,
    /// Samples cover `[-range, range]`.
    pub range: f64,
    pub recenter: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactRow {
    pub xi: f64,
    pub h_new: f64,
    pub u_new: f64,
    pub h_gn: f64,
    pub u_gn: f64,
    /// `NaN` where the implicit relation is undefined (crest, far tails).
    pub implicit_residual: f64,
    pub ode_residual_new: f64,
    pub ode_residual_gn: f64,
}

pub const EXACT_HEADER: [&str; 8] = [
    "xi",
    "H_new",
    "u_new",
    "H_gn",
    "u_gn",
    "implicit_residual",
    "ode_residual_new",
    "ode_residual_gn",
];

/// Step of the centred difference used for `H'` in the ODE residuals.
const PROFILE_STEP: f64 = 1e-5;

pub fn exact_rows(params: &ExactParams) -> Result<Vec<ExactRow>> {
    let ExactParams {
        c,
        samples,
        range,
        recenter,
    } = *params;
    validate_speed(c)?;
    if samples < 2 {
        return Err(CliError::Usage(format!(
            "--samples must be at least 2, got {samples}"
        )));
    }
    if !(range > 0.0) || !range.is_finite() {
        return Err(CliError::Usage(format!(
            "--range must be positive, got {range}"
        )));
    }
    let p = SolitonParams::new(c, recenter)?;
    let raw_shift = if recenter { crest_offset(c) } else { 0.0 };
    let slope = |f: &dyn Fn(f64) -> f64, xi: f64| {
        (f(xi + PROFILE_STEP) - f(xi - PROFILE_STEP)) / (2.0 * PROFILE_STEP)
    };
    let h_new = |xi: f64| soliton_new(&p, xi).0;
    let h_gn = |xi: f64| soliton_gn(&p, xi).0;

    Ok((0..samples)
        .map(|i| {
            let xi = -range + 2.0 * range * i as f64 / (samples - 1) as f64;
            let (hn, un) = soliton_new(&p, xi);
            let (hg, ug) = soliton_gn(&p, xi);
            ExactRow {
                xi,
                h_new: hn,
                u_new: un,
                h_gn: hg,
                u_gn: ug,
                implicit_residual: check_implicit(hn, xi + raw_shift, c).unwrap_or(f64::NAN),
                ode_residual_new: ode_residual_new(hn, slope(&h_new, xi), c),
                ode_residual_gn: ode_residual_gn(hg, slope(&h_gn, xi), c),
            }
        })
        .collect())
}

/// Samples both closed-form waves with their residuals into `exact.csv`.
pub fn exact(params: &ExactParams, out: &Path) -> Result<Vec<ExactRow>> {
    let rows = exact_rows(params)?;
    prepare(out)?;
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            [
                r.xi,
                r.h_new,
                r.u_new,
                r.h_gn,
                r.u_gn,
                r.implicit_residual,
                r.ode_residual_new,
                r.ode_residual_gn,
            ]
            .into_iter()
            .map(fmt_f64)
            .collect()
        })
        .collect();
    write_table(out.join("exact.csv"), &EXACT_HEADER, &table)?;
    let inputs = json!({
        "c": params.c,
        "samples": params.samples,
        "range": params.range,
        "recenter": params.recenter,
    });
    write_metadata(
        out.join(METADATA_FILE),
        ExperimentKind::Exact.name(),
        inputs,
    )?;
    Ok(rows)
}
