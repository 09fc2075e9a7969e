//! Ground states along interaction paths: spectra and gaps, the gap
//! condition, gap scans, the quasi-adiabatic weight, the Hastings generator
//! and finite-volume spectral flow.

use std::num::NonZeroUsize;

use faer::{c64, Mat};
use gauss_quad::legendre::GaussLegendre;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::LocalOperator;
use crate::capacity;
use crate::error::{Error, Result};
use crate::interactions::{Interaction, InteractionPath};
use crate::lattice::SiteSet;
use crate::linalg::{self, CMat, Spectrum, ZERO};

pub const DEFAULT_DEG_TOL: f64 = 1e-8;

/// Lowest eigenpairs of `H_Λ` and the gap above the ground space.
#[derive(Debug, Clone, Serialize)]
pub struct GroundStateData {
    pub volume: SiteSet,
    pub energies: Vec<f64>,
    /// Column `k` is the eigenvector for `energies[k]`.
    #[serde(skip)]
    pub vectors: CMat,
    pub deg_tol: f64,
    /// Dimension of the ground space.
    pub degeneracy: usize,
    /// `E_k − E₀` for the first `k` with `E_k − E₀ > deg_tol`; zero when
    /// the whole spectrum is degenerate.
    pub gap: f64,
    pub gapped: bool,
}

impl GroundStateData {
    pub fn ground_energy(&self) -> f64 {
        self.energies[0]
    }

    pub fn ground_vector(&self) -> Vec<c64> {
        self.vectors.col(0).iter().copied().collect()
    }

    pub fn is_unique(&self) -> bool {
        self.degeneracy == 1
    }

    fn from_spectrum(volume: SiteSet, spec: &Spectrum, k: usize, deg_tol: f64) -> Self {
        let e0 = spec.values[0];
        let degeneracy = spec.values.iter().take_while(|e| **e - e0 <= deg_tol).count();
        let gap = spec.values.get(degeneracy).map_or(0.0, |e| e - e0);
        let k = k.min(spec.dim());
        let vectors = spec.vectors.subcols(0, k).to_owned();
        Self {
            volume,
            energies: spec.values[..k].to_vec(),
            vectors,
            deg_tol,
            degeneracy,
            gap,
            gapped: gap > 0.0,
        }
    }
}

fn hamiltonian_spectrum(h: &LocalOperator) -> Result<Spectrum> {
    capacity::check_dim(h.dim())?;
    linalg::hermitian_eigen(h.matrix())
}

/// Lowest `k` eigenpairs of `H_Λ` by dense diagonalization.
pub fn ground_data(phi: &Interaction, lambda: &SiteSet, k: usize, deg_tol: f64) -> Result<GroundStateData> {
    if k < 2 {
        return Err(Error::Parameter(format!("need at least 2 eigenpairs, got k = {k}")));
    }
    if !(deg_tol >= 0.0) {
        return Err(Error::Parameter(format!("degeneracy tolerance must be non-negative, got {deg_tol}")));
    }
    let h = phi.local_hamiltonian(lambda, 0.0)?;
    let spec = hamiltonian_spectrum(&h)?;
    if k > spec.dim() {
        log::warn!("requested {k} eigenpairs but dim H_Λ = {}; clipping", spec.dim());
    }
    Ok(GroundStateData::from_spectrum(lambda.clone(), &spec, k, deg_tol))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapConditionEntry {
    pub observable: usize,
    /// Ground vector the entry refers to.
    pub vector: usize,
    /// `⟨ψ|Ā* δ(Ā)|ψ⟩` (real part; the imaginary part vanishes for exact data)
    pub lhs: f64,
    /// `γ ⟨ψ|Ā*Ā|ψ⟩`
    pub rhs: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapConditionReport {
    pub gap: f64,
    pub degenerate: bool,
    pub entries: Vec<GapConditionEntry>,
    /// Single verdict for a unique ground state; `None` when degenerate.
    pub verdict: Option<bool>,
}

pub const GAP_CONDITION_TOL: f64 = 1e-9;

fn inner(x: &[c64], y: &[c64]) -> c64 {
    x.iter().zip(y).fold(ZERO, |acc, (a, b)| acc + a.conj() * b)
}

/// Checks `ω(Ā* δ(Ā)) ≥ γ ω(Ā*Ā)` with `Ā = A − ω(A)`.
pub fn check_gap_condition(
    data: &GroundStateData,
    phi: &Interaction,
    observables: &[LocalOperator],
) -> Result<GapConditionReport> {
    let lambda = &data.volume;
    let dims = phi.site_dims(lambda);
    let dim = data.vectors.nrows();
    let degenerate = !data.is_unique();
    let n_vec = if degenerate { data.degeneracy.min(data.vectors.ncols()) } else { 1 };
    let mut entries = Vec::new();
    for (oi, a) in observables.iter().enumerate() {
        let a_full = a.embed_with_dims(lambda, &dims)?;
        // δ(Ā) = δ(A) since the derivation kills multiples of the identity
        let da = phi.derivation(a, lambda, 0.0)?;
        for v in 0..n_vec {
            let psi: Vec<c64> = data.vectors.col(v).iter().copied().collect();
            let mut apsi = vec![ZERO; dim];
            linalg::matvec(a_full.matrix(), &psi, &mut apsi);
            let mean = inner(&psi, &apsi);
            // Āψ = Aψ − ω(A)ψ
            let abar: Vec<c64> = apsi.iter().zip(&psi).map(|(x, p)| x - mean * p).collect();
            let mut dpsi = vec![ZERO; dim];
            linalg::matvec(da.matrix(), &psi, &mut dpsi);
            let lhs = inner(&abar, &dpsi).re;
            let rhs = data.gap * inner(&abar, &abar).re;
            entries.push(GapConditionEntry { observable: oi, vector: v, lhs, rhs, margin: lhs - rhs });
        }
    }
    let verdict = (!degenerate).then(|| entries.iter().all(|e| e.margin >= -GAP_CONDITION_TOL));
    Ok(GapConditionReport { gap: data.gap, degenerate, entries, verdict })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapPoint {
    pub s: f64,
    pub e0: f64,
    pub e1: f64,
    pub gap: f64,
    pub degeneracy: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapCurve {
    pub volume: SiteSet,
    pub points: Vec<GapPoint>,
    pub min_gap: f64,
    pub argmin_s: f64,
    /// Grid points where the gap falls below the floor.
    pub near_closings: Vec<f64>,
}

/// Gaps `γ(s; Λ)` along the path for each volume.
pub fn gap_scan(
    path: &InteractionPath,
    volumes: &[SiteSet],
    s_grid: &[f64],
    floor: f64,
    deg_tol: f64,
) -> Result<Vec<GapCurve>> {
    if volumes.is_empty() || s_grid.is_empty() {
        return Err(Error::Config("gap scan needs non-empty volume and s grids".into()));
    }
    volumes
        .iter()
        .map(|lambda| {
            let points: Vec<GapPoint> = s_grid
                .par_iter()
                .map(|&s| {
                    let h = path.hamiltonian(lambda, s)?;
                    let spec = hamiltonian_spectrum(&h)?;
                    let d = GroundStateData::from_spectrum(lambda.clone(), &spec, 2, deg_tol);
                    Ok(GapPoint { s, e0: d.energies[0], e1: d.energies[0] + d.gap, gap: d.gap, degeneracy: d.degeneracy })
                })
                .collect::<Result<_>>()?;
            let (argmin_s, min_gap) = points
                .iter()
                .map(|p| (p.s, p.gap))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .expect("grid is non-empty");
            let near_closings = points.iter().filter(|p| p.gap < floor).map(|p| p.s).collect();
            Ok(GapCurve { volume: lambda.clone(), points, min_gap, argmin_s, near_closings })
        })
        .collect()
}

/// Weight functions admitted as quasi-adiabatic filters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum WeightForm {
    /// Normalized Gaussian with standard deviation `1/ξ`.
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeightFunction {
    pub xi: f64,
    pub form: WeightForm,
    /// Envelope constants of `c ξ|t| e^{−η ξ|t| / ln(ξ|t|)²}`.
    pub c: f64,
    pub eta: f64,
}

/// Truncation level of the weight for the outer integral.
pub const WEIGHT_CUTOFF: f64 = 1e-10;

impl WeightFunction {
    pub fn gaussian(xi: f64) -> Result<Self> {
        if !(xi > 0.0 && xi.is_finite()) {
            return Err(Error::Parameter(format!("ξ must be positive and finite, got {xi}")));
        }
        Ok(Self { xi, form: WeightForm::Gaussian, c: 1.0, eta: 2.0 / 7.0 + 0.01 })
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self.form {
            WeightForm::Gaussian => {
                let u = self.xi * t;
                self.xi * (-0.5 * u * u).exp() / (2.0 * std::f64::consts::PI).sqrt()
            }
        }
    }

    /// `ŵ(ω) = ∫ w(t) e^{iωt} dt`
    pub fn fourier(&self, omega: f64) -> f64 {
        match self.form {
            WeightForm::Gaussian => (-0.5 * (omega / self.xi).powi(2)).exp(),
        }
    }

    /// Smallest `T` with `w(t) < WEIGHT_CUTOFF` for `|t| ≥ T`.
    pub fn t_max(&self) -> f64 {
        match self.form {
            WeightForm::Gaussian => {
                let peak = self.xi / (2.0 * std::f64::consts::PI).sqrt();
                if peak <= WEIGHT_CUTOFF {
                    return 0.0;
                }
                (2.0 * (peak / WEIGHT_CUTOFF).ln()).sqrt() / self.xi
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeightBound {
    pub t: f64,
    pub value: f64,
    /// `None` where `ξ|t| ≤ e` and the envelope is not a decay statement.
    pub bound: Option<f64>,
}

impl WeightBound {
    pub fn holds(&self) -> Option<bool> {
        self.bound.map(|b| self.value <= b)
    }
}

pub fn weight_bound(w: &WeightFunction, t: f64) -> WeightBound {
    let u = w.xi * t.abs();
    let bound = (u > std::f64::consts::E).then(|| {
        let l = u.ln();
        w.c * u * (-w.eta * u / (l * l)).exp()
    });
    WeightBound { t, value: w.eval(t), bound }
}

/// Composite Gauss-Legendre rule on `[−T, T]` with node doubling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadParams {
    pub panels: usize,
    pub nodes_per_panel: usize,
    /// Convergence target for the generator in operator norm.
    pub tol: f64,
    pub max_doublings: u32,
}

impl Default for QuadParams {
    fn default() -> Self {
        Self { panels: 8, nodes_per_panel: 16, tol: 1e-6, max_doublings: 12 }
    }
}

impl QuadParams {
    pub fn doubled(&self) -> Self {
        Self { panels: self.panels * 2, ..*self }
    }
}

struct CompositeRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl CompositeRule {
    fn new(t_max: f64, panels: usize, per_panel: usize) -> Self {
        let base = GaussLegendre::new(NonZeroUsize::new(per_panel.max(1)).expect("non-zero"));
        let h = 2.0 * t_max / panels as f64;
        let mut nodes = Vec::with_capacity(panels * per_panel);
        let mut weights = Vec::with_capacity(panels * per_panel);
        for p in 0..panels {
            let mid = -t_max + (p as f64 + 0.5) * h;
            for &(x, wt) in base.as_node_weight_pairs() {
                nodes.push(mid + 0.5 * h * x);
                weights.push(0.5 * h * wt);
            }
        }
        Self { nodes, weights }
    }

    fn len(&self) -> usize {
        self.nodes.len()
    }
}

/// `K(ω) = ∫ w(t) ∫₀ᵗ e^{iωu} du dt`. For even `w` the real part vanishes
/// and `K(ω) = i ∫ w(t) t sin(ωt/2) sinc(ωt/2) dt`.
fn filter_kernel(w: &WeightFunction, rule: &CompositeRule, omega: f64) -> c64 {
    let mut acc = 0.0;
    for (&t, &wt) in rule.nodes.iter().zip(&rule.weights) {
        let x = 0.5 * omega * t;
        let sinc = if x.abs() < 1e-8 { 1.0 - x * x / 6.0 } else { x.sin() / x };
        acc += wt * w.eval(t) * t * x.sin() * sinc;
    }
    c64::new(0.0, acc)
}

/// Closed form of the filter kernel, `K(ω) = i (1 − ŵ(ω)) / ω`.
pub fn filter_kernel_exact(w: &WeightFunction, omega: f64) -> c64 {
    if omega == 0.0 {
        return ZERO;
    }
    c64::new(0.0, (1.0 - w.fourier(omega)) / omega)
}

/// `D̃_{mn} = H̃′_{mn} K(E_m − E_n)` in the eigenbasis of `H(s)`.
fn generator_in_eigenbasis(spec: &Spectrum, dprime: &CMat, w: &WeightFunction, rule: &CompositeRule) -> CMat {
    let n = spec.dim();
    let e = &spec.values;
    let mut k = Mat::<c64>::zeros(n, n);
    for j in 0..n {
        for i in (j + 1)..n {
            let v = filter_kernel(w, rule, e[i] - e[j]);
            k[(i, j)] = v;
            // K is odd in ω
            k[(j, i)] = -v;
        }
    }
    Mat::from_fn(n, n, |i, j| dprime[(i, j)] * k[(i, j)])
}

#[derive(Debug, Clone)]
pub struct Generator {
    pub d: LocalOperator,
    /// Quadrature that met the tolerance.
    pub quad: QuadParams,
    pub nodes: usize,
    /// Operator-norm change at the last doubling.
    pub last_change: f64,
    pub gap: f64,
}

/// Hastings generator `D(s) = Σ_X ∫ w(t) ∫₀ᵗ τ_u^{(s)}(Φ′(X, s)) du dt` on Λ.
pub fn hastings_generator(
    path: &InteractionPath,
    s: f64,
    w: &WeightFunction,
    lambda: &SiteSet,
    quad: &QuadParams,
) -> Result<Generator> {
    let h = path.hamiltonian(lambda, s)?;
    let spec = hamiltonian_spectrum(&h)?;
    let data = GroundStateData::from_spectrum(lambda.clone(), &spec, 2, DEFAULT_DEG_TOL);
    if !(w.xi > 0.0 && w.xi < data.gap) {
        return Err(Error::Parameter(format!(
            "ξ = {} must lie in (0, γ(s)) = (0, {}) at s = {s}",
            w.xi, data.gap
        )));
    }
    generator_from_spectrum(path, &spec, lambda, w, quad, data.gap)
}

fn generator_from_spectrum(
    path: &InteractionPath,
    spec: &Spectrum,
    lambda: &SiteSet,
    w: &WeightFunction,
    quad: &QuadParams,
    gap: f64,
) -> Result<Generator> {
    let dims = path.start().site_dims(lambda);
    let hprime = path.derivative(0.0).local_hamiltonian(lambda, 0.0)?;
    let dprime = spec.to_eigenbasis(hprime.matrix());
    let t_max = w.t_max();
    let mut q = *quad;
    let rule = CompositeRule::new(t_max, q.panels, q.nodes_per_panel);
    let mut prev = generator_in_eigenbasis(spec, &dprime, w, &rule);
    for _ in 0..quad.max_doublings {
        let next_q = q.doubled();
        let rule = CompositeRule::new(t_max, next_q.panels, next_q.nodes_per_panel);
        let next = generator_in_eigenbasis(spec, &dprime, w, &rule);
        // the eigenbasis change is unitary, so the norm is basis independent
        let change = linalg::spectral_norm((&next - &prev).as_ref());
        q = next_q;
        if change < quad.tol {
            let d = spec.from_eigenbasis(next.as_ref());
            let d = symmetrize(d);
            return Ok(Generator {
                d: LocalOperator::new(lambda.clone(), dims, d)?,
                quad: q,
                nodes: rule.len(),
                last_change: change,
                gap,
            });
        }
        prev = next;
    }
    Err(Error::Integration(format!(
        "generator quadrature not converged to {:e} after {} node doublings",
        quad.tol, quad.max_doublings
    )))
}

/// `(M + M*) / 2`, removing rounding-level anti-Hermitian parts.
fn symmetrize(m: CMat) -> CMat {
    let n = m.nrows();
    Mat::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlowParams {
    pub steps: usize,
    pub quad: QuadParams,
    pub gap_floor: f64,
    pub deg_tol: f64,
}

impl Default for FlowParams {
    fn default() -> Self {
        Self { steps: 50, quad: QuadParams::default(), gap_floor: 0.0, deg_tol: DEFAULT_DEG_TOL }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FlowResult {
    pub s_grid: Vec<f64>,
    pub fidelities: Vec<f64>,
    pub gap_curve: Vec<f64>,
    pub xi: f64,
    pub max_unitarity_defect: f64,
    /// Largest quadrature node count used by any step.
    pub max_nodes: usize,
    #[serde(skip)]
    pub transported_states: Vec<Vec<c64>>,
    #[serde(skip)]
    pub exact_states: Vec<Vec<c64>>,
    /// `V(s)` at each grid point.
    #[serde(skip)]
    pub unitaries: Vec<CMat>,
    #[serde(skip)]
    pub volume: SiteSet,
}

impl FlowResult {
    pub fn min_fidelity(&self) -> f64 {
        self.fidelities.iter().copied().fold(1.0, f64::min)
    }
}

/// Uniform grid `s_k = k/steps`, `k = 0..=steps`.
pub fn uniform_grid(steps: usize) -> Vec<f64> {
    (0..=steps).map(|k| k as f64 / steps as f64).collect()
}

fn unique_ground(path: &InteractionPath, lambda: &SiteSet, s: f64, params: &FlowParams) -> Result<(Spectrum, GroundStateData)> {
    let spec = hamiltonian_spectrum(&path.hamiltonian(lambda, s)?)?;
    let data = GroundStateData::from_spectrum(lambda.clone(), &spec, 2, params.deg_tol);
    if !data.is_unique() {
        return Err(Error::Precondition(format!(
            "ground space at s = {s} is {}-fold degenerate; spectral flow needs a unique ground state",
            data.degeneracy
        )));
    }
    if data.gap <= params.gap_floor {
        return Err(Error::GapClosing { s, gap: data.gap, floor: params.gap_floor });
    }
    Ok((spec, data))
}

/// Transports the ground state of `H(0)` along the path with
/// `V_k = exp(i h D(s_{k−1/2}))` and compares with exact ground states.
pub fn spectral_flow(path: &InteractionPath, w: &WeightFunction, lambda: &SiteSet, params: &FlowParams) -> Result<FlowResult> {
    if params.steps == 0 {
        return Err(Error::Parameter("spectral flow needs at least one step".into()));
    }
    let s_grid = uniform_grid(params.steps);
    let h = 1.0 / params.steps as f64;
    let grid_data: Vec<(Spectrum, GroundStateData)> =
        s_grid.par_iter().map(|&s| unique_ground(path, lambda, s, params)).collect::<Result<_>>()?;
    let mids: Vec<f64> = (0..params.steps).map(|k| (k as f64 + 0.5) * h).collect();
    let steps: Vec<(CMat, usize)> = mids
        .par_iter()
        .map(|&s| {
            let (spec, data) = unique_ground(path, lambda, s, params)?;
            if !(w.xi > 0.0 && w.xi < data.gap) {
                return Err(Error::Parameter(format!("ξ = {} must lie in (0, γ(s)) = (0, {}) at s = {s}", w.xi, data.gap)));
            }
            let gen = generator_from_spectrum(path, &spec, lambda, w, &params.quad, data.gap)?;
            let dspec = linalg::hermitian_eigen(gen.d.matrix())?;
            // exp(i h D)
            Ok((dspec.propagator(-h), gen.nodes))
        })
        .collect::<Result<_>>()?;

    let psi0 = grid_data[0].1.ground_vector();
    let dim = psi0.len();
    let mut v = linalg::identity(dim);
    let mut unitaries = vec![v.clone()];
    for (step, _) in &steps {
        v = linalg::mul(step.as_ref(), v.as_ref());
        unitaries.push(v.clone());
    }
    let mut fidelities = Vec::with_capacity(s_grid.len());
    let mut transported = Vec::with_capacity(s_grid.len());
    let mut exact = Vec::with_capacity(s_grid.len());
    let mut max_defect: f64 = 0.0;
    for (u, (_, data)) in unitaries.iter().zip(&grid_data) {
        let mut phi = vec![ZERO; dim];
        linalg::matvec(u.as_ref(), &psi0, &mut phi);
        let ex = data.ground_vector();
        fidelities.push(inner(&ex, &phi).norm().min(1.0));
        max_defect = max_defect.max(linalg::unitarity_defect(u.as_ref()));
        transported.push(phi);
        exact.push(ex);
    }
    Ok(FlowResult {
        gap_curve: grid_data.iter().map(|(_, d)| d.gap).collect(),
        s_grid,
        fidelities,
        xi: w.xi,
        max_unitarity_defect: max_defect,
        max_nodes: steps.iter().map(|s| s.1).max().unwrap_or(0),
        transported_states: transported,
        exact_states: exact,
        unitaries,
        volume: lambda.clone(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransportEntry {
    pub s: f64,
    pub observable: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransportReport {
    pub gap0: f64,
    pub entries: Vec<TransportEntry>,
    pub min_margin: f64,
}

/// Transported-state gap inequality `ω_s(Ā* δ_s(Ā)) ≥ γ₀ ω_s(Ā*Ā)` with
/// `ω_s = ⟨V(s)ψ₀| · |V(s)ψ₀⟩` and `δ_s(B) = [V(s) H(0) V(s)*, B]`.
pub fn gap_transport_check(
    path: &InteractionPath,
    flow: &FlowResult,
    observables: &[LocalOperator],
    deg_tol: f64,
) -> Result<TransportReport> {
    let lambda = &flow.volume;
    let h0 = path.hamiltonian(lambda, 0.0)?;
    let spec0 = hamiltonian_spectrum(&h0)?;
    let data0 = GroundStateData::from_spectrum(lambda.clone(), &spec0, 2, deg_tol);
    if !data0.is_unique() {
        return Err(Error::Precondition("initial ground state is degenerate".into()));
    }
    let dims = path.start().site_dims(lambda);
    let fulls: Vec<LocalOperator> =
        observables.iter().map(|a| a.embed_with_dims(lambda, &dims)).collect::<Result<_>>()?;
    let dim = h0.dim();
    let mut entries = Vec::new();
    for (k, (&s, u)) in flow.s_grid.iter().zip(&flow.unitaries).enumerate() {
        let phi = &flow.transported_states[k];
        // H_s x = V H(0) V* x
        let hs = |x: &[c64]| {
            let mut a = vec![ZERO; dim];
            let mut b = vec![ZERO; dim];
            linalg::matvec(u.as_ref().adjoint(), x, &mut a);
            linalg::matvec(h0.matrix(), &a, &mut b);
            linalg::matvec(u.as_ref(), &b, &mut a);
            a
        };
        let hphi = hs(phi);
        for (oi, a) in fulls.iter().enumerate() {
            let mut aphi = vec![ZERO; dim];
            linalg::matvec(a.matrix(), phi, &mut aphi);
            let mean = inner(phi, &aphi);
            let chi: Vec<c64> = aphi.iter().zip(phi).map(|(x, p)| x - mean * p).collect();
            // ⟨χ|[H_s, Ā]|φ⟩ = ⟨χ|H_s χ⟩ − ⟨Ā*χ|H_s φ⟩
            let mut adag_chi = vec![ZERO; dim];
            linalg::matvec(a.matrix().adjoint(), &chi, &mut adag_chi);
            adag_chi.iter_mut().zip(&chi).for_each(|(x, c)| *x -= mean.conj() * c);
            let lhs = (inner(&chi, &hs(&chi)) - inner(&adag_chi, &hphi)).re;
            let rhs = data0.gap * inner(&chi, &chi).re;
            entries.push(TransportEntry { s, observable: oi, lhs, rhs, margin: lhs - rhs });
        }
    }
    let min_margin = entries.iter().map(|e| e.margin).fold(f64::INFINITY, f64::min);
    Ok(TransportReport { gap0: data0.gap, entries, min_margin })
}

/// `min_s γ(s)` over the grid on one volume.
pub fn min_gap(path: &InteractionPath, lambda: &SiteSet, s_grid: &[f64], deg_tol: f64) -> Result<f64> {
    let curves = gap_scan(path, std::slice::from_ref(lambda), s_grid, 0.0, deg_tol)?;
    Ok(curves[0].min_gap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Pauli;
    use crate::interactions::{preset, Model};
    use crate::lattice::MetricGraph;

    fn tfim(n: usize, g: f64) -> Interaction {
        preset(&Model::Tfim { j: 1.0, g }, &MetricGraph::chain(n).unwrap()).unwrap()
    }

    #[test]
    fn single_site_field() {
        let mut phi = Interaction::new();
        phi.add_term(LocalOperator::pauli(0, Pauli::X).scale(c64::new(-0.7, 0.0))).unwrap();
        let d = ground_data(&phi, &SiteSet::single(0), 2, DEFAULT_DEG_TOL).unwrap();
        assert!((d.energies[0] + 0.7).abs() < 1e-14 && (d.energies[1] - 0.7).abs() < 1e-14);
        assert!((d.gap - 1.4).abs() < 1e-14);
    }

    #[test]
    fn ising_pair_is_doubly_degenerate() {
        let d = ground_data(&tfim(2, 0.0), &SiteSet::range(2), 4, 1e-8).unwrap();
        assert_eq!(d.degeneracy, 2);
        assert!((d.gap - 2.0).abs() < 1e-12);
    }

    #[test]
    fn zero_interaction_is_gapless() {
        let d = ground_data(&Interaction::new(), &SiteSet::range(2), 2, 1e-8).unwrap();
        assert!(!d.gapped);
        assert_eq!(d.degeneracy, 4);
        assert!(ground_data(&Interaction::new(), &SiteSet::range(2), 1, 1e-8).is_err());
    }

    #[test]
    fn eigen_residuals_are_small() {
        let phi = tfim(4, 1.3);
        let lam = SiteSet::range(4);
        let d = ground_data(&phi, &lam, 5, 1e-8).unwrap();
        let h = phi.local_hamiltonian(&lam, 0.0).unwrap();
        for k in 0..5 {
            let v: Vec<c64> = d.vectors.col(k).iter().copied().collect();
            let mut hv = vec![ZERO; v.len()];
            linalg::matvec(h.matrix(), &v, &mut hv);
            let r = hv.iter().zip(&v).map(|(a, b)| (a - b * d.energies[k]).norm_sqr()).sum::<f64>().sqrt();
            assert!(r < 1e-9);
        }
    }

    #[test]
    fn identity_observable_gives_zero() {
        let phi = tfim(3, 2.0);
        let lam = SiteSet::range(3);
        let d = ground_data(&phi, &lam, 2, 1e-8).unwrap();
        let one = LocalOperator::identity(SiteSet::single(0), vec![2]).unwrap();
        let r = check_gap_condition(&d, &phi, &[one]).unwrap();
        assert!(r.entries[0].lhs.abs() < 1e-12 && r.entries[0].rhs.abs() < 1e-12);
        assert_eq!(r.verdict, Some(true));
    }

    #[test]
    fn kernel_quadrature_matches_closed_form() {
        let w = WeightFunction::gaussian(0.8).unwrap();
        let rule = CompositeRule::new(w.t_max(), 64, 16);
        for omega in [-7.0, -1.0, 1e-9, 0.3, 2.0, 25.0] {
            let k = filter_kernel(&w, &rule, omega);
            let e = filter_kernel_exact(&w, omega);
            assert!((k - e).norm() < 1e-9, "ω = {omega}: {k} vs {e}");
        }
    }

    #[test]
    fn weight_is_normalized_and_even() {
        let w = WeightFunction::gaussian(1.3).unwrap();
        let rule = CompositeRule::new(w.t_max(), 32, 16);
        let total: f64 = rule.nodes.iter().zip(&rule.weights).map(|(t, wt)| wt * w.eval(*t)).sum();
        assert!((total - 1.0).abs() < 1e-8);
        for t in [0.1, 1.0, 3.7] {
            assert_eq!(w.eval(t), w.eval(-t));
        }
        assert_eq!(weight_bound(&w, 0.0).bound, None);
    }

    #[test]
    fn constant_path_has_zero_generator() {
        let path = InteractionPath::constant(tfim(3, 2.0)).unwrap();
        let w = WeightFunction::gaussian(0.5).unwrap();
        let g = hastings_generator(&path, 0.5, &w, &SiteSet::range(3), &QuadParams::default()).unwrap();
        assert_eq!(g.d.norm(), 0.0);
    }

    #[test]
    fn xi_must_stay_below_the_gap() {
        let path = InteractionPath::linear(tfim(3, 2.0), tfim(3, 3.0)).unwrap();
        let w = WeightFunction::gaussian(100.0).unwrap();
        let r = hastings_generator(&path, 0.5, &w, &SiteSet::range(3), &QuadParams::default());
        assert!(matches!(r, Err(Error::Parameter(_))));
    }
}
