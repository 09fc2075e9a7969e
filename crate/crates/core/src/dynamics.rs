//! Heisenberg dynamics on finite volumes, commutator curves and the
//! Lieb-Robinson right-hand sides, empirical light-cone velocities, and the
//! interaction-continuity estimate.

use faer::{c64, Mat};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::LocalOperator;
use crate::capacity;
use crate::error::{Error, Result};
use crate::ffunc::{FCertificate, FFunction};
use crate::interactions::{HamiltonianParts, Interaction};
use crate::lattice::{MetricGraph, SiteSet};
use crate::linalg::{self, CMat, Spectrum};

/// Relative tolerance above which a cell counts as a bound violation.
pub const VIOLATION_RTOL: f64 = 1e-9;

/// Autonomous propagator `U(t) = exp(−itH_Λ)` held in spectral form.
#[derive(Debug, Clone)]
pub struct Propagator {
    volume: SiteSet,
    dims: Vec<usize>,
    spectrum: Spectrum,
}

impl Propagator {
    pub fn new(phi: &Interaction, lambda: &SiteSet) -> Result<Self> {
        if phi.is_time_dependent() {
            return Err(Error::Precondition(
                "autonomous propagator needs a time-independent interaction".into(),
            ));
        }
        let dims = phi.site_dims(lambda);
        capacity::check_dim(dims.iter().product())?;
        let h = phi.local_hamiltonian(lambda, 0.0)?;
        let spectrum = linalg::hermitian_eigen(h.matrix())?;
        Ok(Self { volume: lambda.clone(), dims, spectrum })
    }

    pub fn volume(&self) -> &SiteSet {
        &self.volume
    }

    pub fn site_dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    /// `U(t) = exp(−itH_Λ)`
    pub fn unitary(&self, t: f64) -> CMat {
        self.spectrum.propagator(t)
    }

    fn embed(&self, a: &LocalOperator) -> Result<LocalOperator> {
        if !a.support().is_subset(&self.volume) {
            return Err(Error::Precondition(format!(
                "supp A = {} is not inside Λ = {}",
                a.support(),
                self.volume
            )));
        }
        a.embed_with_dims(&self.volume, &self.dims)
    }

    /// Reusable orbit `t ↦ τ_t(A)`.
    pub fn orbit(&self, a: &LocalOperator) -> Result<Orbit<'_>> {
        let full = self.embed(a)?;
        let tilde = self.spectrum.to_eigenbasis(full.matrix());
        Ok(Orbit { prop: self, initial: full.into_matrix(), tilde })
    }

    /// `τ_t(A) = U(t)* A U(t)` on Λ.
    pub fn evolve(&self, a: &LocalOperator, t: f64) -> Result<LocalOperator> {
        let m = self.orbit(a)?.at(t);
        LocalOperator::new(self.volume.clone(), self.dims.clone(), m)
    }
}

/// `τ_t(A)` for one observable, stored in the eigenbasis of `H_Λ`.
pub struct Orbit<'a> {
    prop: &'a Propagator,
    initial: CMat,
    tilde: CMat,
}

impl Orbit<'_> {
    /// Dense `τ_t(A)` on Λ: `(V* τ_t(A) V)_{mn} = e^{it(E_m − E_n)} Ã_{mn}`.
    pub fn at(&self, t: f64) -> CMat {
        if t == 0.0 {
            return self.initial.clone();
        }
        let e = &self.prop.spectrum.values;
        let phases: Vec<c64> = e.iter().map(|&x| c64::cis(t * x)).collect();
        let n = e.len();
        let rotated = Mat::from_fn(n, n, |i, j| phases[i] * self.tilde[(i, j)] * phases[j].conj());
        self.prop.spectrum.from_eigenbasis(rotated.as_ref())
    }
}

/// `τ_t^Λ(A)` for a time-independent interaction.
pub fn evolve(phi: &Interaction, lambda: &SiteSet, a: &LocalOperator, t: f64) -> Result<LocalOperator> {
    Propagator::new(phi, lambda)?.evolve(a, t)
}

/// Step-refinement controls for driven evolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    /// Operator-norm change between successive halvings that counts as converged.
    pub tol: f64,
    pub max_halvings: u32,
    pub initial_steps: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        Self { tol: 1e-8, max_halvings: 20, initial_steps: 8 }
    }
}

/// Converged co-cycle unitary `U(t, s)` of a driven Hamiltonian.
#[derive(Debug, Clone)]
pub struct DrivenUnitary {
    pub unitary: CMat,
    pub steps: usize,
    pub step: f64,
    pub volume: SiteSet,
    pub dims: Vec<usize>,
}

/// Product of midpoint steps `exp(−ih H(t_{k−1/2}))`, later times on the left.
fn midpoint_product(parts: &HamiltonianParts, dim: usize, s: f64, t: f64, steps: usize) -> Result<CMat> {
    let h = (t - s) / steps as f64;
    let mut u = linalg::identity(dim);
    for k in 0..steps {
        let mid = s + (k as f64 + 0.5) * h;
        let step = linalg::hermitian_eigen(parts.at(mid).as_ref())?.propagator(h);
        u = linalg::mul(step.as_ref(), u.as_ref());
    }
    Ok(u)
}

/// `U(t, s)` with `dU/dt = −iH_Λ(t)U`, `U(s, s) = 1`, refined by step halving.
pub fn driven_unitary(
    phi: &Interaction,
    lambda: &SiteSet,
    s: f64,
    t: f64,
    ctl: &StepControl,
) -> Result<DrivenUnitary> {
    let dims = phi.site_dims(lambda);
    let dim: usize = dims.iter().product();
    capacity::check_dim(dim)?;
    if s == t {
        return Ok(DrivenUnitary { unitary: linalg::identity(dim), steps: 0, step: 0.0, volume: lambda.clone(), dims });
    }
    if !phi.is_time_dependent() {
        let prop = Propagator::new(phi, lambda)?;
        return Ok(DrivenUnitary { unitary: prop.unitary(t - s), steps: 1, step: t - s, volume: lambda.clone(), dims });
    }
    // Profiles are only piecewise smooth. A kink inside a step spoils the
    // second-order error and, sitting near a coarse node, leaves successive
    // halvings with the same error, so each smooth piece is refined alone.
    let (lo, hi) = (s.min(t), s.max(t));
    let mut cuts: Vec<f64> = phi.knot_times().into_iter().filter(|&k| k > lo && k < hi).collect();
    if t < s {
        cuts.reverse();
    }
    let mut ends = vec![s];
    ends.extend(cuts);
    ends.push(t);
    let seg_tol = ctl.tol / (ends.len() - 1) as f64;
    let parts = phi.hamiltonian_parts(lambda)?;
    let mut unitary = linalg::identity(dim);
    let mut total_steps = 0;
    let mut min_step = f64::INFINITY;
    for w in ends.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mut steps = ctl.initial_steps.max(1);
        let mut prev = midpoint_product(&parts, dim, a, b, steps)?;
        let mut done = None;
        for _ in 0..ctl.max_halvings {
            steps *= 2;
            let next = midpoint_product(&parts, dim, a, b, steps)?;
            if linalg::spectral_norm((&next - &prev).as_ref()) < seg_tol {
                done = Some(next);
                break;
            }
            prev = next;
        }
        let Some(piece) = done else {
            return Err(Error::Integration(format!(
                "driven evolution on [{a}, {b}] not converged to {seg_tol:e} after {} halvings",
                ctl.max_halvings
            )));
        };
        unitary = linalg::mul(piece.as_ref(), unitary.as_ref());
        total_steps += steps;
        min_step = min_step.min((b - a).abs() / steps as f64);
    }
    Ok(DrivenUnitary { unitary, steps: total_steps, step: min_step, volume: lambda.clone(), dims })
}

impl DrivenUnitary {
    /// `τ_{t,s}(A) = U(t,s)* A U(t,s)`
    pub fn conjugate(&self, a: &LocalOperator) -> Result<LocalOperator> {
        if !a.support().is_subset(&self.volume) {
            return Err(Error::Precondition(format!(
                "supp A = {} is not inside Λ = {}",
                a.support(),
                self.volume
            )));
        }
        let full = a.embed_with_dims(&self.volume, &self.dims)?;
        let u = self.unitary.as_ref();
        let m = linalg::mul(linalg::mul(u.adjoint(), full.matrix()).as_ref(), u);
        LocalOperator::new(self.volume.clone(), self.dims.clone(), m)
    }
}

/// `τ_{t,s}^Λ(A)` for a possibly driven interaction.
pub fn evolve_driven(
    phi: &Interaction,
    lambda: &SiteSet,
    a: &LocalOperator,
    t_from: f64,
    t_to: f64,
) -> Result<LocalOperator> {
    driven_unitary(phi, lambda, t_from, t_to, &StepControl::default())?.conjugate(a)
}

fn check_disjoint(a: &LocalOperator, b: &LocalOperator) -> Result<()> {
    if a.support().intersects(b.support()) {
        return Err(Error::Precondition(format!(
            "supports {} and {} overlap",
            a.support(),
            b.support()
        )));
    }
    Ok(())
}

/// `‖[τ_t(A), B]‖` at each time of the grid.
pub fn commutator_curve(prop: &Propagator, a: &LocalOperator, b: &LocalOperator, times: &[f64]) -> Result<Vec<f64>> {
    check_disjoint(a, b)?;
    if !b.support().is_subset(prop.volume()) {
        return Err(Error::Precondition(format!("supp B = {} is not inside Λ = {}", b.support(), prop.volume())));
    }
    let orbit = prop.orbit(a)?;
    times
        .iter()
        .map(|&t| {
            let c = b.commutator_from_left(orbit.at(t).as_ref(), prop.volume(), prop.site_dims())?;
            Ok(linalg::spectral_norm(c.as_ref()))
        })
        .collect()
}

/// `Σ_{x ∈ X, y ∈ Y} F(d(x, y))`
pub fn pair_sum(f: &FFunction, g: &MetricGraph, xs: &SiteSet, ys: &SiteSet) -> Result<f64> {
    g.check_sites(xs)?;
    g.check_sites(ys)?;
    Ok(xs.iter().flat_map(|x| ys.iter().map(move |y| (x, y))).map(|(x, y)| f.at(g.dist(x, y))).sum())
}

/// `C_F⁻¹ 2‖A‖‖B‖ (e^{2I} − 1) Σ F(d(x,y))` with `I = ∫_s^t ‖Φ(r)‖_F dr`.
pub fn lr_rhs_general(
    f: &FFunction,
    g: &MetricGraph,
    cert: &FCertificate,
    phi: &Interaction,
    a: &LocalOperator,
    b: &LocalOperator,
    t: f64,
    s: f64,
) -> Result<f64> {
    check_disjoint(a, b)?;
    let integral = phi.norm_f_integral(f, g, s, t)?;
    let sum = pair_sum(f, g, a.support(), b.support())?;
    Ok(general_formula(cert.c_f, a.norm(), b.norm(), integral, sum))
}

fn general_formula(c_f: f64, na: f64, nb: f64, integral: f64, pair_sum: f64) -> f64 {
    2.0 * na * nb * (2.0 * integral).exp_m1() * pair_sum / c_f
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpBound {
    pub value: f64,
    pub v_lr: f64,
    /// `2 C_F⁻¹ ‖F₀‖₁`
    pub c: f64,
    pub a: f64,
}

/// Constants of the exponential form for `F = e^{−ar} F₀` on `g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpConstants {
    pub a: f64,
    pub c: f64,
    pub v_lr: f64,
    pub phi_norm_f: f64,
}

pub fn exp_constants(f: &FFunction, g: &MetricGraph, cert: &FCertificate, phi: &Interaction) -> Result<ExpConstants> {
    let (a, f0) = f.exponential_split().ok_or_else(|| {
        Error::Form(format!("exponential form needs F = e^(-a r) F0 with θ = 1, got {f:?}"))
    })?;
    if phi.is_time_dependent() {
        return Err(Error::Form("exponential form needs a time-independent interaction".into()));
    }
    let phi_norm_f = phi.norm_f(f, g, 0.0)?;
    Ok(ExpConstants { a, c: 2.0 * f0.norm_1(g) / cert.c_f, v_lr: 2.0 * phi_norm_f / a, phi_norm_f })
}

fn exp_formula(k: &ExpConstants, na: f64, nb: f64, min_len: usize, d: u32, t: f64) -> f64 {
    k.c * na * nb * min_len as f64 * (k.a * (k.v_lr * t.abs() - d as f64)).exp()
}

/// `C‖A‖‖B‖ min(|X|,|Y|) e^{a(v_LR|t| − d(X,Y))}`
pub fn lr_rhs_exponential(
    f: &FFunction,
    g: &MetricGraph,
    cert: &FCertificate,
    phi: &Interaction,
    a: &LocalOperator,
    b: &LocalOperator,
    t: f64,
) -> Result<ExpBound> {
    check_disjoint(a, b)?;
    let k = exp_constants(f, g, cert, phi)?;
    let d = set_distance(g, a.support(), b.support())?;
    let min_len = a.support().len().min(b.support().len());
    Ok(ExpBound { value: exp_formula(&k, a.norm(), b.norm(), min_len, d, t), v_lr: k.v_lr, c: k.c, a: k.a })
}

fn set_distance(g: &MetricGraph, xs: &SiteSet, ys: &SiteSet) -> Result<u32> {
    g.check_sites(xs)?;
    g.check_sites(ys)?;
    g.set_distance(xs, ys).ok_or_else(|| Error::Precondition("empty support".into()))
}

/// One LR sweep: observables, times and the bound data.
#[derive(Debug, Clone)]
pub struct LrScenario {
    pub graph: MetricGraph,
    pub f: FFunction,
    pub phi: Interaction,
    pub volume: SiteSet,
    pub pairs: Vec<(LocalOperator, LocalOperator)>,
    pub times: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairInfo {
    pub a_support: SiteSet,
    pub b_support: SiteSet,
    pub distance: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub pair: usize,
    pub time_index: usize,
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LrReport {
    pub pairs: Vec<PairInfo>,
    pub times: Vec<f64>,
    /// `lhs[pair][time]`
    pub lhs: Vec<Vec<f64>>,
    pub rhs_general: Vec<Vec<f64>>,
    pub rhs_exp: Option<Vec<Vec<f64>>>,
    pub violations: Vec<Violation>,
    /// Cells with `rhs_general > rhs_exp·(1 + tol)`; empty when the
    /// exponential form is unavailable.
    pub exp_dominance_failures: Vec<Violation>,
    pub certificate: FCertificate,
    pub phi_norm_f: f64,
    pub exp_constants: Option<ExpConstants>,
    pub v_lr: Option<f64>,
    pub v_emp: Option<VelocityFit>,
}

impl LrReport {
    pub fn max_lhs(&self) -> f64 {
        self.lhs.iter().flatten().copied().fold(0.0, f64::max)
    }
}

/// Sweeps every (pair, time) cell, grouping pairs that share the same `A`
/// so each Heisenberg orbit is computed once per time.
pub fn verify_lr(sc: &LrScenario) -> Result<LrReport> {
    if sc.times.is_empty() {
        return Err(Error::Config("time grid is empty".into()));
    }
    if sc.times.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(Error::Config("times must be finite and non-negative".into()));
    }
    sc.graph.check_sites(&sc.volume)?;
    let cert = sc.f.certify(&sc.graph)?;
    let phi_norm_f = sc.phi.norm_f(&sc.f, &sc.graph, 0.0)?;
    let exp = match sc.f.exponential_split() {
        Some(_) => Some(exp_constants(&sc.f, &sc.graph, &cert, &sc.phi)?),
        None => None,
    };

    let mut infos = Vec::with_capacity(sc.pairs.len());
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for (k, (a, b)) in sc.pairs.iter().enumerate() {
        check_disjoint(a, b).map_err(|e| Error::Precondition(format!("pair {k}: {e}")))?;
        for op in [a, b] {
            if !op.support().is_subset(&sc.volume) {
                return Err(Error::Precondition(format!(
                    "pair {k}: support {} is not inside Λ = {}",
                    op.support(),
                    sc.volume
                )));
            }
        }
        infos.push(PairInfo {
            a_support: a.support().clone(),
            b_support: b.support().clone(),
            distance: set_distance(&sc.graph, a.support(), b.support())?,
        });
        match groups.iter_mut().find(|(rep, _)| sc.pairs[*rep].0 == *a) {
            Some((_, members)) => members.push(k),
            None => groups.push((k, vec![k])),
        }
    }

    let prop = Propagator::new(&sc.phi, &sc.volume)?;
    let group_lhs: Vec<Vec<(usize, Vec<f64>)>> = groups
        .par_iter()
        .map(|(rep, members)| -> Result<Vec<(usize, Vec<f64>)>> {
            let orbit = prop.orbit(&sc.pairs[*rep].0)?;
            let mut rows: Vec<Vec<f64>> = vec![Vec::with_capacity(sc.times.len()); members.len()];
            for &t in &sc.times {
                let x = orbit.at(t);
                for (row, &k) in rows.iter_mut().zip(members) {
                    let c = sc.pairs[k].1.commutator_from_left(x.as_ref(), prop.volume(), prop.site_dims())?;
                    row.push(linalg::spectral_norm(c.as_ref()));
                }
            }
            Ok(members.iter().copied().zip(rows).collect())
        })
        .collect::<Result<_>>()?;
    let mut lhs = vec![Vec::new(); sc.pairs.len()];
    for (k, row) in group_lhs.into_iter().flatten() {
        lhs[k] = row;
    }

    let mut rhs_general = Vec::with_capacity(sc.pairs.len());
    let mut rhs_exp = exp.map(|_| Vec::with_capacity(sc.pairs.len()));
    let mut violations = Vec::new();
    let mut dominance = Vec::new();
    for (k, (a, b)) in sc.pairs.iter().enumerate() {
        let (na, nb) = (a.norm(), b.norm());
        let sum = pair_sum(&sc.f, &sc.graph, a.support(), b.support())?;
        let min_len = a.support().len().min(b.support().len());
        let gen_row: Vec<f64> =
            sc.times.iter().map(|&t| general_formula(cert.c_f, na, nb, t * phi_norm_f, sum)).collect();
        for (i, &t) in sc.times.iter().enumerate() {
            if lhs[k][i] > gen_row[i] * (1.0 + VIOLATION_RTOL) {
                violations.push(Violation { pair: k, time_index: i, t, lhs: lhs[k][i], rhs: gen_row[i] });
            }
        }
        if let (Some(kc), Some(rows)) = (exp.as_ref(), rhs_exp.as_mut()) {
            let row: Vec<f64> =
                sc.times.iter().map(|&t| exp_formula(kc, na, nb, min_len, infos[k].distance, t)).collect();
            for (i, &t) in sc.times.iter().enumerate() {
                if gen_row[i] > row[i] * (1.0 + VIOLATION_RTOL) || lhs[k][i] > row[i] * (1.0 + VIOLATION_RTOL) {
                    dominance.push(Violation { pair: k, time_index: i, t, lhs: gen_row[i].max(lhs[k][i]), rhs: row[i] });
                }
            }
            rows.push(row);
        }
        rhs_general.push(gen_row);
    }

    Ok(LrReport {
        pairs: infos,
        times: sc.times.clone(),
        lhs,
        rhs_general,
        rhs_exp,
        violations,
        exp_dominance_failures: dominance,
        certificate: cert,
        phi_norm_f,
        exp_constants: exp,
        v_lr: exp.map(|k| k.v_lr),
        v_emp: None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VelocityFit {
    pub slope: f64,
    pub stderr: f64,
    pub threshold: f64,
    /// `(d, t*(d))`, ascending in `d`.
    pub arrivals: Vec<(u32, f64)>,
}

impl VelocityFit {
    /// Slope plus one standard error.
    pub fn upper(&self) -> f64 {
        self.slope + self.stderr
    }
}

/// First time the curve reaches `threshold`, linearly interpolated between
/// grid points.
fn first_crossing(times: &[f64], values: &[f64], threshold: f64) -> Option<f64> {
    let i = values.iter().position(|&v| v >= threshold)?;
    if i == 0 {
        return Some(times[0]);
    }
    let (t0, t1, v0, v1) = (times[i - 1], times[i], values[i - 1], values[i]);
    Some(t0 + (threshold - v0) / (v1 - v0) * (t1 - t0))
}

/// Least-squares slope of `d` against the arrival time `t*(d)`.
pub fn fit_velocity(report: &LrReport, threshold: f64) -> Result<VelocityFit> {
    let max = report.max_lhs();
    if !(threshold > 0.0 && threshold < max) {
        return Err(Error::InsufficientData(format!(
            "threshold {threshold:e} must lie in (0, max lhs = {max:e})"
        )));
    }
    let mut earliest: std::collections::BTreeMap<u32, f64> = std::collections::BTreeMap::new();
    for (info, row) in report.pairs.iter().zip(&report.lhs) {
        if let Some(t) = first_crossing(&report.times, row, threshold) {
            let e = earliest.entry(info.distance).or_insert(t);
            *e = e.min(t);
        }
    }
    if earliest.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "threshold {threshold:e} is crossed at {} distance(s), need at least 3",
            earliest.len()
        )));
    }
    let arrivals: Vec<(u32, f64)> = earliest.into_iter().collect();
    let n = arrivals.len() as f64;
    let tm = arrivals.iter().map(|p| p.1).sum::<f64>() / n;
    let dm = arrivals.iter().map(|p| p.0 as f64).sum::<f64>() / n;
    let stt: f64 = arrivals.iter().map(|p| (p.1 - tm).powi(2)).sum();
    if stt == 0.0 {
        return Err(Error::InsufficientData("all arrival times coincide".into()));
    }
    let std_: f64 = arrivals.iter().map(|p| (p.1 - tm) * (p.0 as f64 - dm)).sum();
    let slope = std_ / stt;
    let intercept = dm - slope * tm;
    let rss: f64 = arrivals.iter().map(|p| (p.0 as f64 - intercept - slope * p.1).powi(2)).sum();
    let stderr = if arrivals.len() > 2 { (rss / (n - 2.0) / stt).sqrt() } else { 0.0 };
    Ok(VelocityFit { slope, stderr, threshold, arrivals })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContinuityPoint {
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
}

impl ContinuityPoint {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs * (1.0 + VIOLATION_RTOL)
    }
}

/// `‖τ_t^Φ(A) − τ_t^Ψ(A)‖` against
/// `2‖F‖₁ C_F⁻¹ |X| ‖A‖ |t| e^{2|t| min(‖Φ‖_F, ‖Ψ‖_F)} ‖Φ − Ψ‖_F`.
pub fn dynamics_difference(
    phi: &Interaction,
    psi: &Interaction,
    f: &FFunction,
    g: &MetricGraph,
    lambda: &SiteSet,
    a: &LocalOperator,
    times: &[f64],
) -> Result<Vec<ContinuityPoint>> {
    let cert = f.certify(g)?;
    let p_phi = Propagator::new(phi, lambda)?;
    let p_psi = Propagator::new(psi, lambda)?;
    if p_phi.site_dims() != p_psi.site_dims() {
        return Err(Error::Precondition("Φ and Ψ disagree on site dimensions".into()));
    }
    let n_phi = phi.norm_f(f, g, 0.0)?;
    let n_psi = psi.norm_f(f, g, 0.0)?;
    let n_diff = Interaction::linear_combination(1.0, phi, -1.0, psi)?.norm_f(f, g, 0.0)?;
    let (o_phi, o_psi) = (p_phi.orbit(a)?, p_psi.orbit(a)?);
    let x_len = a.support().len() as f64;
    let norm_a = a.norm();
    Ok(times
        .iter()
        .map(|&t| {
            let diff = &o_phi.at(t) - &o_psi.at(t);
            let lhs = linalg::spectral_norm(diff.as_ref());
            let rhs = 2.0 * cert.norm1 / cert.c_f * x_len * norm_a * t.abs()
                * (2.0 * t.abs() * n_phi.min(n_psi)).exp()
                * n_diff;
            ContinuityPoint { t, lhs, rhs }
        })
        .collect())
}

/// Single-site Pauli-`Z` pairs `(σᶻ_x, σᶻ_y)` over all ordered `x ≠ y` in Λ.
pub fn all_site_pairs(lambda: &SiteSet, p: crate::algebra::Pauli) -> Vec<(LocalOperator, LocalOperator)> {
    let mut out = Vec::new();
    for x in lambda.iter() {
        for y in lambda.iter() {
            if x != y {
                out.push((LocalOperator::pauli(x, p), LocalOperator::pauli(y, p)));
            }
        }
    }
    out
}
