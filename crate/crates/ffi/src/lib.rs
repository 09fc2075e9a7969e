//! C ABI over `qll-core`.
//!
//! Objects cross the boundary as opaque heap handles created by a
//! `*_from_json` constructor and released with the matching `*_free`.
//! Every fallible call returns a [`QllStatus`]; on failure the message is
//! available from [`qll_last_error_message`] on the same thread until the
//! next failing call. Strings handed out by the library are released with
//! [`qll_string_free`].
//!
//! Pointer arguments must be null or valid for the access the function
//! makes; handles must come from this library and not be used after free.
#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use qll_core::algebra::{LocalOperator, Pauli};
use qll_core::cli::{self, Command, RunArgs};
use qll_core::config::{FSpec, LatticeSpec};
use qll_core::dynamics::{commutator_curve, Propagator};
use qll_core::ffunc::FFunction;
use qll_core::gsphase;
use qll_core::interactions::{preset, Interaction, Model};
use qll_core::lattice::MetricGraph;

/// Result of every fallible call. The first three values match the
/// command-line exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QllStatus {
    Ok = 0,
    /// A contract or precondition of the computation failed.
    Violation = 1,
    /// Invalid configuration, descriptor or parameter.
    Config = 2,
    NullArgument = 3,
    InvalidUtf8 = 4,
    /// Internal panic caught at the boundary.
    Panic = 5,
}

pub struct QllGraph(MetricGraph);

pub struct QllFFunction(FFunction);

pub struct QllInteraction(Interaction);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

type Failure = (QllStatus, String);

fn core_err(e: qll_core::Error) -> Failure {
    let status = match cli::exit_code_for(&e) {
        cli::EXIT_VIOLATION => QllStatus::Violation,
        _ => QllStatus::Config,
    };
    (status, e.to_string())
}

fn guard(f: impl FnOnce() -> Result<QllStatus, Failure>) -> QllStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            QllStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err((QllStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (QllStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| (QllStatus::NullArgument, format!("{what} is null")))
}

unsafe fn store<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err((QllStatus::NullArgument, format!("{what} is null")));
    }
    out.write(value);
    Ok(())
}

fn bad_json(what: &'static str) -> impl Fn(serde_json::Error) -> Failure {
    move |e| (QllStatus::Config, format!("{what}: {e}"))
}

fn pauli(c: c_char) -> Result<Pauli, Failure> {
    Pauli::from_char(c as u8 as char).map_err(core_err)
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qll_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failure on this thread, or null. Owned by the
/// library.
#[no_mangle]
pub extern "C" fn qll_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned through an out-parameter. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn qll_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Graph from a lattice descriptor such as `{"kind": "chain", "n": 8}`.
#[no_mangle]
pub unsafe extern "C" fn qll_graph_from_json(json: *const c_char, out: *mut *mut QllGraph) -> QllStatus {
    guard(|| {
        let spec: LatticeSpec = serde_json::from_str(text(json, "json")?).map_err(bad_json("lattice"))?;
        let g = spec.build().map_err(core_err)?;
        store(out, Box::into_raw(Box::new(QllGraph(g))), "out")?;
        Ok(QllStatus::Ok)
    })
}

/// Number of sites, 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn qll_graph_n_sites(g: *const QllGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.n_sites())
}

#[no_mangle]
pub unsafe extern "C" fn qll_graph_free(g: *mut QllGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// F-function from a descriptor such as
/// `{"family": "weighted", "a": 1, "theta": 1, "nu": 1, "eps": 1}`.
#[no_mangle]
pub unsafe extern "C" fn qll_ffunction_from_json(json: *const c_char, out: *mut *mut QllFFunction) -> QllStatus {
    guard(|| {
        let spec: FSpec = serde_json::from_str(text(json, "json")?).map_err(bad_json("ffunction"))?;
        let f = spec.build().map_err(core_err)?;
        store(out, Box::into_raw(Box::new(QllFFunction(f))), "out")?;
        Ok(QllStatus::Ok)
    })
}

#[no_mangle]
pub unsafe extern "C" fn qll_ffunction_free(f: *mut QllFFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// `‖F‖₁` and `C_F` of `f` on `g`.
#[no_mangle]
pub unsafe extern "C" fn qll_ffunction_certify(
    f: *const QllFFunction,
    g: *const QllGraph,
    norm1: *mut f64,
    c_f: *mut f64,
) -> QllStatus {
    guard(|| {
        let (f, g) = (handle(f, "f")?, handle(g, "graph")?);
        let cert = f.0.certify(&g.0).map_err(core_err)?;
        store(norm1, cert.norm1, "norm1")?;
        store(c_f, cert.c_f, "c_f")?;
        Ok(QllStatus::Ok)
    })
}

/// Preset interaction on `g` from a model descriptor such as
/// `{"model": "tfim", "J": 1, "g": 1}`.
#[no_mangle]
pub unsafe extern "C" fn qll_interaction_from_json(
    g: *const QllGraph,
    json: *const c_char,
    out: *mut *mut QllInteraction,
) -> QllStatus {
    guard(|| {
        let g = handle(g, "graph")?;
        let model: Model = serde_json::from_str(text(json, "json")?).map_err(bad_json("model"))?;
        let phi = preset(&model, &g.0).map_err(core_err)?;
        store(out, Box::into_raw(Box::new(QllInteraction(phi))), "out")?;
        Ok(QllStatus::Ok)
    })
}

#[no_mangle]
pub unsafe extern "C" fn qll_interaction_free(phi: *mut QllInteraction) {
    if !phi.is_null() {
        drop(Box::from_raw(phi));
    }
}

/// `‖Φ‖_F` on `g`.
#[no_mangle]
pub unsafe extern "C" fn qll_interaction_norm_f(
    phi: *const QllInteraction,
    f: *const QllFFunction,
    g: *const QllGraph,
    out: *mut f64,
) -> QllStatus {
    guard(|| {
        let (phi, f, g) = (handle(phi, "interaction")?, handle(f, "f")?, handle(g, "graph")?);
        let v = phi.0.norm_f(&f.0, &g.0, 0.0).map_err(core_err)?;
        store(out, v, "out")?;
        Ok(QllStatus::Ok)
    })
}

/// Ground energy and spectral gap of `H_Λ` with Λ the whole graph.
#[no_mangle]
pub unsafe extern "C" fn qll_ground_gap(
    phi: *const QllInteraction,
    g: *const QllGraph,
    e0: *mut f64,
    gap: *mut f64,
) -> QllStatus {
    guard(|| {
        let (phi, g) = (handle(phi, "interaction")?, handle(g, "graph")?);
        let data = gsphase::ground_data(&phi.0, &g.0.sites(), 2, gsphase::DEFAULT_DEG_TOL).map_err(core_err)?;
        store(e0, data.ground_energy(), "e0")?;
        store(gap, data.gap, "gap")?;
        Ok(QllStatus::Ok)
    })
}

/// `‖[τ_t(P_a), Q_b]‖` on the whole graph for single-site Paulis given as
/// `'X'`, `'Y'` or `'Z'`.
#[no_mangle]
pub unsafe extern "C" fn qll_commutator_norm(
    phi: *const QllInteraction,
    g: *const QllGraph,
    site_a: usize,
    pauli_a: c_char,
    site_b: usize,
    pauli_b: c_char,
    t: f64,
    out: *mut f64,
) -> QllStatus {
    guard(|| {
        let (phi, g) = (handle(phi, "interaction")?, handle(g, "graph")?);
        g.0.check_site(site_a).map_err(core_err)?;
        g.0.check_site(site_b).map_err(core_err)?;
        let a = LocalOperator::pauli(site_a, pauli(pauli_a)?);
        let b = LocalOperator::pauli(site_b, pauli(pauli_b)?);
        let prop = Propagator::new(&phi.0, &g.0.sites()).map_err(core_err)?;
        let v = commutator_curve(&prop, &a, &b, &[t]).map_err(core_err)?;
        store(out, v[0], "out")?;
        Ok(QllStatus::Ok)
    })
}

/// Runs one command-line command (`"lr-scan"`, `"flow"`, ...) on a scenario
/// file. The run report JSON is returned through `report` (free it with
/// [`qll_string_free`]); the status mirrors the report's exit code.
/// `csv_path` may be null and `jobs = 0` uses every core.
#[no_mangle]
pub unsafe extern "C" fn qll_run(
    command: *const c_char,
    config_path: *const c_char,
    out_path: *const c_char,
    csv_path: *const c_char,
    jobs: usize,
    report: *mut *mut c_char,
) -> QllStatus {
    guard(|| {
        if report.is_null() {
            return Err((QllStatus::NullArgument, "report is null".into()));
        }
        let args = RunArgs {
            config: PathBuf::from(text(config_path, "config_path")?),
            out: PathBuf::from(text(out_path, "out_path")?),
            csv: if csv_path.is_null() { None } else { Some(PathBuf::from(text(csv_path, "csv_path")?)) },
            jobs: (jobs > 0).then_some(jobs),
            seed: None,
        };
        let cmd = match text(command, "command")? {
            "certify-ffunc" => Command::CertifyFfunc(args),
            "lr-scan" => Command::LrScan(args),
            "lightcone" => Command::Lightcone(args),
            "continuity" => Command::Continuity(args),
            "gap-scan" => Command::GapScan(args),
            "flow" => Command::Flow(args),
            other => return Err((QllStatus::Config, format!("unknown command '{other}'"))),
        };
        let rep = cli::run(&cmd);
        let json = qll_core::output::to_json_pretty(&rep).map_err(|e| (QllStatus::Panic, e.to_string()))?;
        report.write(CString::new(json).expect("JSON has no NUL").into_raw());
        match rep.exit_code {
            cli::EXIT_PASS => Ok(QllStatus::Ok),
            code => {
                let status = if code == cli::EXIT_VIOLATION { QllStatus::Violation } else { QllStatus::Config };
                Err((status, rep.message.unwrap_or_else(|| "run failed".into())))
            }
        }
    })
}
