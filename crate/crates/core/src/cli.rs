//! Scenario-driven command front end. The binary only parses arguments and
//! forwards to [`run`].

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::algebra::{LocalOperator, Pauli};
use crate::config::{prefix_volume, PairsSpec, Scenario};
use crate::dynamics::{self, fit_velocity, verify_lr, LrReport, LrScenario};
use crate::error::Error;
use crate::gsphase::{self, FlowParams, QuadParams, WeightFunction};
use crate::output::{to_json_pretty, Csv};

/// Exit status: contract holds.
pub const EXIT_PASS: i32 = 0;
/// Exit status: a bound, gap or fidelity contract failed.
pub const EXIT_VIOLATION: i32 = 1;
/// Exit status: unusable arguments or scenario.
pub const EXIT_CONFIG: i32 = 2;

/// Margin tolerated in the transported gap inequality.
pub const TRANSPORT_TOL: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(name = "qll", version, about = "Finite-volume quasi-locality verification runs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// ‖F‖₁, C_F and the decay checks of an F-function on a graph.
    CertifyFfunc(RunArgs),
    /// Commutator sweep against both Lieb-Robinson right-hand sides.
    LrScan(RunArgs),
    /// LR sweep from one site plus the empirical light-cone velocity.
    Lightcone(RunArgs),
    /// Dependence of the dynamics on the interaction.
    Continuity(RunArgs),
    /// Spectral gaps along an interaction path.
    GapScan(RunArgs),
    /// Quasi-adiabatic ground-state transport along a path.
    Flow(RunArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::CertifyFfunc(_) => "certify-ffunc",
            Command::LrScan(_) => "lr-scan",
            Command::Lightcone(_) => "lightcone",
            Command::Continuity(_) => "continuity",
            Command::GapScan(_) => "gap-scan",
            Command::Flow(_) => "flow",
        }
    }

    pub fn args(&self) -> &RunArgs {
        match self {
            Command::CertifyFfunc(a)
            | Command::LrScan(a)
            | Command::Lightcone(a)
            | Command::Continuity(a)
            | Command::GapScan(a)
            | Command::Flow(a) => a,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Scenario JSON (`"schema": 1`).
    #[arg(long)]
    pub config: PathBuf,
    /// Main artifact. For `gap-scan` this is the gap table (CSV).
    #[arg(long)]
    pub out: PathBuf,
    /// Plot-ready cell table.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Worker thread cap.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Overrides the scenario seed.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub scenario_hash: Option<String>,
    pub versions: serde_json::Value,
    pub wall_time_s: f64,
    pub verdict: String,
    pub exit_code: i32,
    pub artifacts: Vec<String>,
    pub summary: serde_json::Value,
    pub message: Option<String>,
}

struct Outcome {
    pass: bool,
    artifacts: Vec<String>,
    summary: serde_json::Value,
    message: Option<String>,
}

/// Scenario errors and unusable parameters are usage errors; everything a
/// valid scenario can trip over at run time is a contract violation.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Config(_)
        | Error::InvalidSize(_)
        | Error::UnknownSite { .. }
        | Error::InvalidFFunction(_)
        | Error::Capacity { .. }
        | Error::Parameter(_)
        | Error::Form(_)
        | Error::Embedding(_)
        | Error::Algebra(_)
        | Error::Schedule(_) => EXIT_CONFIG,
        Error::Precondition(_)
        | Error::Integration(_)
        | Error::InsufficientData(_)
        | Error::GapClosing { .. }
        | Error::Numerical(_) => EXIT_VIOLATION,
    }
}

/// Runs one command and returns its report; the exit code is inside.
pub fn run(cmd: &Command) -> RunReport {
    let start = Instant::now();
    let args = cmd.args();
    let seed = args.seed;
    let loaded = std::fs::read_to_string(&args.config)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", args.config.display())))
        .and_then(|text| Scenario::from_json(&text));
    let (hash, result) = match loaded {
        Err(e) => (None, Err(e)),
        Ok(sc) => {
            let hash = sc.hash(seed);
            let pool = rayon::ThreadPoolBuilder::new().num_threads(args.jobs.unwrap_or(0)).build();
            let result = match pool {
                Ok(pool) => pool.install(|| dispatch(cmd, &sc, args)),
                Err(e) => Err(Error::Config(format!("thread pool: {e}"))),
            };
            (Some(hash), result)
        }
    };
    let (exit_code, outcome) = match result {
        Ok(o) => (if o.pass { EXIT_PASS } else { EXIT_VIOLATION }, o),
        Err(e) => (
            exit_code_for(&e),
            Outcome { pass: false, artifacts: vec![], summary: serde_json::Value::Null, message: Some(e.to_string()) },
        ),
    };
    RunReport {
        command: cmd.name().to_owned(),
        scenario_hash: hash,
        versions: json!({ "qll": env!("CARGO_PKG_VERSION"), "schema": crate::config::SCHEMA_VERSION }),
        wall_time_s: start.elapsed().as_secs_f64(),
        verdict: if exit_code == EXIT_PASS { "pass" } else { "fail" }.to_owned(),
        exit_code,
        artifacts: outcome.artifacts,
        summary: outcome.summary,
        message: outcome.message,
    }
}

fn dispatch(cmd: &Command, sc: &Scenario, args: &RunArgs) -> crate::Result<Outcome> {
    match cmd {
        Command::CertifyFfunc(_) => certify(sc, args),
        Command::LrScan(_) => lr_scan(sc, args, false),
        Command::Lightcone(_) => lr_scan(sc, args, true),
        Command::Continuity(_) => continuity(sc, args),
        Command::GapScan(_) => gap_scan(sc, args),
        Command::Flow(_) => flow(sc, args),
    }
}

fn write_text(path: &Path, text: &str) -> crate::Result<String> {
    std::fs::write(path, text).map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?;
    Ok(path.display().to_string())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> crate::Result<String> {
    let text = to_json_pretty(value).map_err(|e| Error::Numerical(format!("serialization: {e}")))?;
    write_text(path, &text)
}

fn certify(sc: &Scenario, args: &RunArgs) -> crate::Result<Outcome> {
    let g = sc.graph()?;
    let f = sc.ffunction()?;
    let cert = f.certify(&g)?;
    let table = f.table(&g);
    let body = json!({
        "n_sites": g.n_sites(),
        "diameter": g.diameter(),
        "ffunction": f,
        "norm1": cert.norm1,
        "c_f": cert.c_f,
        "checks": {
            "positive_finite": true,
            "non_increasing": cert.non_increasing,
            "metric": g.metric_violation().is_none(),
        },
        "table": table,
    });
    let mut artifacts = vec![write_json(&args.out, &body)?];
    if let Some(p) = &args.csv {
        let mut csv = Csv::new(&["d", "F"]);
        for (d, v) in table.iter().enumerate() {
            csv.row(vec![d.into(), (*v).into()]);
        }
        artifacts.push(write_text(p, csv.as_str())?);
    }
    Ok(Outcome {
        pass: cert.non_increasing && g.metric_violation().is_none(),
        artifacts,
        summary: json!({ "norm1": cert.norm1, "c_f": cert.c_f }),
        message: None,
    })
}

fn lr_cells_csv(report: &LrReport) -> Csv {
    let mut csv = Csv::new(&["pair_id", "d", "t", "lhs", "rhs_general", "rhs_exp", "violation"]);
    for (k, info) in report.pairs.iter().enumerate() {
        for (i, &t) in report.times.iter().enumerate() {
            let exp = report.rhs_exp.as_ref().map_or(f64::NAN, |r| r[k][i]);
            let bad = report.violations.iter().any(|v| v.pair == k && v.time_index == i);
            csv.row(vec![k.into(), info.distance.into(), t.into(), report.lhs[k][i].into(), report.rhs_general[k][i].into(), exp.into(), bad.into()]);
        }
    }
    csv
}

fn lr_scan(sc: &Scenario, args: &RunArgs, lightcone: bool) -> crate::Result<Outcome> {
    let graph = sc.graph()?;
    let f = sc.ffunction()?;
    let phi = sc.interaction(&graph)?;
    let volume = sc.volume(&graph)?;
    let pairs_spec = match (&sc.pairs, lightcone) {
        (Some(p), _) => p.clone(),
        (None, true) => PairsSpec::FromSite { site: volume.as_slice()[0], pauli: 'Z' },
        (None, false) => return Err(Error::Config("scenario is missing the `pairs` section".into())),
    };
    let pairs = pairs_spec.build(&volume)?;
    let times = sc.times()?;
    let scenario = LrScenario { graph, f, phi, volume, pairs, times };
    let mut report = verify_lr(&scenario)?;

    let mut messages = Vec::new();
    let mut pass = report.violations.is_empty() && report.exp_dominance_failures.is_empty();
    if let Some(v) = report.violations.first() {
        messages.push(format!(
            "{} LR violation(s); first at pair {} t = {}: lhs {:e} > rhs {:e}",
            report.violations.len(),
            v.pair,
            v.t,
            v.lhs,
            v.rhs
        ));
    }
    if !report.exp_dominance_failures.is_empty() {
        messages.push(format!("{} cell(s) exceed the exponential form", report.exp_dominance_failures.len()));
    }
    if lightcone || sc.lightcone.is_some() {
        let v_lr = report.v_lr.ok_or_else(|| {
            Error::Config("light-cone velocity needs an F-function of the form e^(-a r) F0".into())
        })?;
        let threshold = match sc.lightcone.as_ref().and_then(|l| l.threshold) {
            Some(t) => t,
            None => {
                let (a, b) = &scenario.pairs[0];
                1e-3 * a.norm() * b.norm()
            }
        };
        let fit = fit_velocity(&report, threshold)?;
        if fit.upper() > v_lr {
            pass = false;
            messages.push(format!("v_emp + se = {:e} exceeds v_LR = {v_lr:e}", fit.upper()));
        }
        report.v_emp = Some(fit);
    }
    let mut artifacts = vec![write_json(&args.out, &report)?];
    if let Some(p) = &args.csv {
        artifacts.push(write_text(p, lr_cells_csv(&report).as_str())?);
    }
    Ok(Outcome {
        pass,
        artifacts,
        summary: json!({
            "cells": report.pairs.len() * report.times.len(),
            "violations": report.violations.len(),
            "max_lhs": report.max_lhs(),
            "v_lr": report.v_lr,
            "v_emp": report.v_emp.as_ref().map(|f| f.slope),
            "v_emp_se": report.v_emp.as_ref().map(|f| f.stderr),
        }),
        message: (!messages.is_empty()).then(|| messages.join("; ")),
    })
}

fn continuity(sc: &Scenario, args: &RunArgs) -> crate::Result<Outcome> {
    let graph = sc.graph()?;
    let f = sc.ffunction()?;
    let phi = sc.interaction(&graph)?;
    let psi = sc.perturbed(&graph)?;
    let volume = sc.volume(&graph)?;
    let a = match &sc.observable {
        Some(o) => o.build()?,
        None => LocalOperator::pauli(volume.as_slice()[0], Pauli::Z),
    };
    let times = match (&sc.continuity, &sc.times) {
        (Some(c), _) => c.times.clone(),
        (None, Some(t)) => t.build()?,
        (None, None) => return Err(Error::Config("scenario needs `continuity.times` or `times`".into())),
    };
    let points = dynamics::dynamics_difference(&phi, &psi, &f, &graph, &volume, &a, &times)?;
    let pass = points.iter().all(|p| p.holds());
    let mut artifacts = vec![write_json(&args.out, &json!({ "points": points }))?];
    if let Some(p) = &args.csv {
        let mut csv = Csv::new(&["t", "lhs", "rhs", "holds"]);
        for q in &points {
            csv.row(vec![q.t.into(), q.lhs.into(), q.rhs.into(), q.holds().into()]);
        }
        artifacts.push(write_text(p, csv.as_str())?);
    }
    let failing: Vec<f64> = points.iter().filter(|p| !p.holds()).map(|p| p.t).collect();
    Ok(Outcome {
        pass,
        artifacts,
        summary: json!({ "points": points.len(), "failing_times": failing }),
        message: (!pass).then(|| format!("continuity estimate fails at t = {failing:?}")),
    })
}

fn gap_scan(sc: &Scenario, args: &RunArgs) -> crate::Result<Outcome> {
    let graph = sc.graph()?;
    let path = sc.path(&graph)?;
    let spec = sc.gap.as_ref().ok_or_else(|| Error::Config("scenario is missing the `gap` section".into()))?;
    let volumes: Vec<_> = spec.sizes.iter().map(|&n| prefix_volume(&graph, n)).collect::<crate::Result<_>>()?;
    let grid = spec.s_grid.build()?;
    let curves = gsphase::gap_scan(&path, &volumes, &grid, spec.floor, spec.deg_tol)?;
    let mut csv = Csv::new(&["n", "s", "E0", "E1", "gap"]);
    for c in &curves {
        for p in &c.points {
            csv.row(vec![c.volume.len().into(), p.s.into(), p.e0.into(), p.e1.into(), p.gap.into()]);
        }
    }
    let mut artifacts = vec![write_text(&args.out, csv.as_str())?];
    if let Some(p) = &args.csv {
        artifacts.push(write_text(p, csv.as_str())?);
    }
    let pass = curves.iter().all(|c| c.min_gap > spec.floor);
    let closing: Vec<_> = curves
        .iter()
        .filter(|c| c.min_gap <= spec.floor)
        .map(|c| format!("n = {}: gap {:e} at s = {}", c.volume.len(), c.min_gap, c.argmin_s))
        .collect();
    Ok(Outcome {
        pass,
        artifacts,
        summary: json!(curves
            .iter()
            .map(|c| json!({ "n": c.volume.len(), "min_gap": c.min_gap, "argmin_s": c.argmin_s, "near_closings": c.near_closings }))
            .collect::<Vec<_>>()),
        message: (!pass).then(|| format!("gap below floor {}: {}", spec.floor, closing.join("; "))),
    })
}

fn flow(sc: &Scenario, args: &RunArgs) -> crate::Result<Outcome> {
    let graph = sc.graph()?;
    let path = sc.path(&graph)?;
    let spec = sc.flow.as_ref().ok_or_else(|| Error::Config("scenario is missing the `flow` section".into()))?;
    let lambda = prefix_volume(&graph, spec.n)?;
    let params = FlowParams {
        steps: spec.steps,
        quad: QuadParams { panels: spec.quad_panels, nodes_per_panel: spec.quad_nodes, tol: spec.quad_tol, ..QuadParams::default() },
        gap_floor: spec.gap_floor,
        deg_tol: gsphase::DEFAULT_DEG_TOL,
    };
    // the scan covers step midpoints too, where the generator is evaluated
    let fine = gsphase::uniform_grid(2 * spec.steps.max(1));
    let gamma_min = gsphase::min_gap(&path, &lambda, &fine, params.deg_tol)?;
    if gamma_min <= spec.gap_floor {
        let curves = gsphase::gap_scan(&path, std::slice::from_ref(&lambda), &fine, spec.gap_floor, params.deg_tol)?;
        return Err(Error::GapClosing { s: curves[0].argmin_s, gap: gamma_min, floor: spec.gap_floor });
    }
    let xi = spec.xi.unwrap_or(gamma_min / 2.0);
    let w = WeightFunction::gaussian(xi)?;
    let result = gsphase::spectral_flow(&path, &w, &lambda, &params)?;
    let observables: Vec<LocalOperator> = match &spec.observables {
        Some(list) => list.iter().map(|o| o.build()).collect::<crate::Result<_>>()?,
        None => lambda.iter().map(|x| LocalOperator::pauli(x, Pauli::Z)).collect(),
    };
    let transport = gsphase::gap_transport_check(&path, &result, &observables, params.deg_tol)?;
    let min_fid = result.min_fidelity();
    let pass = min_fid >= spec.fidelity_target && transport.min_margin >= -TRANSPORT_TOL;
    let body = json!({
        "s_grid": result.s_grid,
        "fidelities": result.fidelities,
        "gap_curve": result.gap_curve,
        "min_fidelity": min_fid,
        "gamma_min": gamma_min,
        "parameters": { "n": spec.n, "steps": spec.steps, "xi": xi, "weight": w, "quad": params.quad, "fidelity_target": spec.fidelity_target, "gap_floor": spec.gap_floor },
        "max_unitarity_defect": result.max_unitarity_defect,
        "max_quadrature_nodes": result.max_nodes,
        "transport": transport,
    });
    let mut artifacts = vec![write_json(&args.out, &body)?];
    if let Some(p) = &args.csv {
        let mut csv = Csv::new(&["s", "fidelity", "gap"]);
        for k in 0..result.s_grid.len() {
            csv.row(vec![result.s_grid[k].into(), result.fidelities[k].into(), result.gap_curve[k].into()]);
        }
        artifacts.push(write_text(p, csv.as_str())?);
    }
    let mut messages = Vec::new();
    if min_fid < spec.fidelity_target {
        messages.push(format!("min fidelity {min_fid:.6} below target {}", spec.fidelity_target));
    }
    if transport.min_margin < -TRANSPORT_TOL {
        messages.push(format!("transported gap inequality margin {:e}", transport.min_margin));
    }
    Ok(Outcome {
        pass,
        artifacts,
        summary: json!({ "min_fidelity": min_fid, "gamma_min": gamma_min, "xi": xi, "transport_min_margin": transport.min_margin }),
        message: (!messages.is_empty()).then(|| messages.join("; ")),
    })
}
