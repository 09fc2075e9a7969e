//! Interactions `X ↦ Φ(X)`, local Hamiltonians, the F-weighted interaction
//! norm, the derivation `δ`, and linear interaction paths.

use std::collections::BTreeMap;

use faer::c64;
use serde::{Deserialize, Serialize};

use crate::algebra::{LocalOperator, Pauli, QUBIT};
use crate::error::{Error, Result};
use crate::ffunc::FFunction;
use crate::lattice::{MetricGraph, SiteSet};
use crate::linalg::{self, CMat};

/// Terms must be Hermitian to this absolute tolerance.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Piecewise-linear scalar profile through `(t, value)` knots, constant
/// outside the knot range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseLinear {
    knots: Vec<(f64, f64)>,
}

impl PiecewiseLinear {
    pub fn new(mut knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::Config("time profile needs at least one knot".into()));
        }
        if knots.iter().any(|(t, v)| !t.is_finite() || !v.is_finite()) {
            return Err(Error::Config("time profile knots must be finite".into()));
        }
        knots.sort_by(|a, b| a.0.total_cmp(&b.0));
        if knots.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Config("time profile has repeated knot times".into()));
        }
        Ok(Self { knots })
    }

    pub fn constant(v: f64) -> Self {
        Self { knots: vec![(0.0, v)] }
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    pub fn eval(&self, t: f64) -> f64 {
        let k = &self.knots;
        if t <= k[0].0 {
            return k[0].1;
        }
        if t >= k[k.len() - 1].0 {
            return k[k.len() - 1].1;
        }
        let i = k.partition_point(|(tk, _)| *tk <= t);
        let (t0, v0) = k[i - 1];
        let (t1, v1) = k[i];
        v0 + (v1 - v0) * (t - t0) / (t1 - t0)
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Component {
    op: LocalOperator,
    profile: Option<PiecewiseLinear>,
}

/// Finite-range interaction stored term by term on explicit site sets.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Interaction {
    terms: BTreeMap<SiteSet, Vec<Component>>,
}

impl Interaction {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a time-independent Hermitian term keyed by its support.
    pub fn add_term(&mut self, op: LocalOperator) -> Result<()> {
        self.insert(op, None)
    }

    /// Adds `c(t) · op` with a piecewise-linear coefficient.
    pub fn add_driven_term(&mut self, op: LocalOperator, profile: PiecewiseLinear) -> Result<()> {
        self.insert(op, Some(profile))
    }

    fn insert(&mut self, op: LocalOperator, profile: Option<PiecewiseLinear>) -> Result<()> {
        if op.support().is_empty() {
            return Err(Error::Config("interaction terms need a non-empty support".into()));
        }
        let defect = op.hermiticity_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::Config(format!(
                "term on {} is not Hermitian (defect {defect:.3e})",
                op.support()
            )));
        }
        let slot = self.terms.entry(op.support().clone()).or_default();
        if let Some(first) = slot.first() {
            if first.op.site_dims() != op.site_dims() {
                return Err(Error::Algebra(format!(
                    "terms on {} disagree on site dimensions",
                    op.support()
                )));
            }
        }
        if profile.is_none() {
            if let Some(c) = slot.iter_mut().find(|c| c.profile.is_none()) {
                c.op = c.op.add(&op)?;
                return Ok(());
            }
        }
        slot.push(Component { op, profile });
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn supports(&self) -> impl Iterator<Item = &SiteSet> {
        self.terms.keys()
    }

    pub fn is_time_dependent(&self) -> bool {
        self.terms.values().flatten().any(|c| c.profile.is_some())
    }

    /// Sorted, deduplicated knot times of all profiles.
    pub fn knot_times(&self) -> Vec<f64> {
        let mut ts: Vec<f64> = self
            .terms
            .values()
            .flatten()
            .filter_map(|c| c.profile.as_ref())
            .flat_map(|p| p.knots().iter().map(|k| k.0))
            .collect();
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        ts
    }

    /// `Φ(X, t)`
    pub fn term(&self, x: &SiteSet, t: f64) -> Option<LocalOperator> {
        self.terms.get(x).map(|comps| sum_components(comps, t))
    }

    /// `(X, Φ(X, t))` for every stored support.
    pub fn terms_at(&self, t: f64) -> impl Iterator<Item = (&SiteSet, LocalOperator)> + '_ {
        self.terms.iter().map(move |(x, comps)| (x, sum_components(comps, t)))
    }

    /// Time-independent snapshot `Φ(·, t)`.
    pub fn frozen(&self, t: f64) -> Interaction {
        let terms = self
            .terms_at(t)
            .map(|(x, op)| (x.clone(), vec![Component { op, profile: None }]))
            .collect();
        Interaction { terms }
    }

    /// `a Φ + b Ψ` term-wise; both must be time-independent.
    pub fn linear_combination(a: f64, phi: &Interaction, b: f64, psi: &Interaction) -> Result<Interaction> {
        if phi.is_time_dependent() || psi.is_time_dependent() {
            return Err(Error::Config("linear combinations need time-independent interactions".into()));
        }
        let mut out = Interaction::new();
        let keys: std::collections::BTreeSet<&SiteSet> = phi.terms.keys().chain(psi.terms.keys()).collect();
        for x in keys {
            let pa = phi.term(x, 0.0);
            let pb = psi.term(x, 0.0);
            let op = match (pa, pb) {
                (Some(p), Some(q)) => p.scale(c64::new(a, 0.0)).add(&q.scale(c64::new(b, 0.0)))?,
                (Some(p), None) => p.scale(c64::new(a, 0.0)),
                (None, Some(q)) => q.scale(c64::new(b, 0.0)),
                (None, None) => unreachable!(),
            };
            out.terms.insert(x.clone(), vec![Component { op, profile: None }]);
        }
        Ok(out)
    }

    pub fn scaled(&self, lambda: f64) -> Interaction {
        let terms = self
            .terms
            .iter()
            .map(|(x, comps)| {
                let comps = comps
                    .iter()
                    .map(|c| Component { op: c.op.scale(c64::new(lambda, 0.0)), profile: c.profile.clone() })
                    .collect();
                (x.clone(), comps)
            })
            .collect();
        Interaction { terms }
    }

    /// Per-site Hilbert dimensions on `lambda` (qubits where no term says
    /// otherwise).
    pub fn site_dims(&self, lambda: &SiteSet) -> Vec<usize> {
        lambda
            .iter()
            .map(|x| {
                self.terms
                    .iter()
                    .find(|(k, _)| k.contains(x))
                    .and_then(|(_, c)| c[0].op.dim_of(x))
                    .unwrap_or(QUBIT)
            })
            .collect()
    }

    /// `H_Λ(t) = Σ_{X ⊆ Λ} Φ(X, t)` embedded in `Λ`.
    pub fn local_hamiltonian(&self, lambda: &SiteSet, t: f64) -> Result<LocalOperator> {
        let dims = self.site_dims(lambda);
        let mut h = LocalOperator::zero(lambda.clone(), dims.clone())?.into_matrix();
        for (x, comps) in &self.terms {
            if !x.is_subset(lambda) {
                continue;
            }
            let term = sum_components(comps, t).embed_with_dims(lambda, &dims)?;
            h += term.matrix();
        }
        LocalOperator::new(lambda.clone(), dims, h)
    }

    /// `H_Λ(t)` split as `H₀ + Σ_k f_k(t) M_k` with every piece embedded
    /// once, for repeated evaluation along a time grid.
    pub fn hamiltonian_parts(&self, lambda: &SiteSet) -> Result<HamiltonianParts> {
        let dims = self.site_dims(lambda);
        let mut fixed = LocalOperator::zero(lambda.clone(), dims.clone())?.into_matrix();
        let mut driven = Vec::new();
        for (x, comps) in &self.terms {
            if !x.is_subset(lambda) {
                continue;
            }
            for c in comps {
                let m = c.op.embed_with_dims(lambda, &dims)?.into_matrix();
                match &c.profile {
                    None => fixed += &m,
                    Some(p) => driven.push((p.clone(), m)),
                }
            }
        }
        Ok(HamiltonianParts { fixed, driven })
    }

    /// Sum of the terms inside `lambda` that meet `region`, embedded in `lambda`.
    pub fn boundary_terms(&self, lambda: &SiteSet, region: &SiteSet, t: f64) -> Result<LocalOperator> {
        let dims = self.site_dims(lambda);
        let mut h = LocalOperator::zero(lambda.clone(), dims.clone())?.into_matrix();
        for (x, comps) in &self.terms {
            if x.is_subset(lambda) && x.intersects(region) {
                h += sum_components(comps, t).embed_with_dims(lambda, &dims)?.matrix();
            }
        }
        LocalOperator::new(lambda.clone(), dims, h)
    }

    /// `δ(A) = Σ_{X ⊆ Λ, X ∩ supp A ≠ ∅} [Φ(X), A]`, embedded in `Λ`.
    pub fn derivation(&self, a: &LocalOperator, lambda: &SiteSet, t: f64) -> Result<LocalOperator> {
        if !a.support().is_subset(lambda) {
            return Err(Error::Precondition(format!(
                "supp A = {} is not inside Λ = {lambda}",
                a.support()
            )));
        }
        let h = self.boundary_terms(lambda, a.support(), t)?;
        let a_full = a.embed_with_dims(lambda, h.site_dims())?;
        h.commutator(&a_full)
    }

    /// `‖Φ(t)‖_F = max_{x,y} F(d(x,y))⁻¹ Σ_{X ∋ x,y} ‖Φ(X,t)‖`, pairs with
    /// `x = y` included.
    pub fn norm_f(&self, f: &FFunction, g: &MetricGraph, t: f64) -> Result<f64> {
        let norms: Vec<(&SiteSet, f64)> = self.terms_at(t).map(|(x, op)| (x, op.norm())).collect();
        weighted_pair_sup(g, f, norms.iter().map(|(x, v)| (*x, *v)))
    }

    /// `∫_s^t ‖Φ(r)‖_F dr`.
    ///
    /// Between knots every coefficient is affine in `r`, so `‖Φ(r)‖_F` is
    /// convex there and the trapezoid rule on each knot interval
    /// over-estimates the integral; the result is a valid upper bound.
    pub fn norm_f_integral(&self, f: &FFunction, g: &MetricGraph, s: f64, t: f64) -> Result<f64> {
        let (lo, hi) = if s <= t { (s, t) } else { (t, s) };
        if !self.is_time_dependent() {
            return Ok((hi - lo) * self.norm_f(f, g, lo)?);
        }
        const PANELS_PER_INTERVAL: usize = 64;
        let mut cuts = vec![lo];
        cuts.extend(self.knot_times().into_iter().filter(|k| *k > lo && *k < hi));
        cuts.push(hi);
        let mut total = 0.0;
        for w in cuts.windows(2) {
            let h = (w[1] - w[0]) / PANELS_PER_INTERVAL as f64;
            let mut prev = self.norm_f(f, g, w[0])?;
            for k in 1..=PANELS_PER_INTERVAL {
                let next = self.norm_f(f, g, w[0] + h * k as f64)?;
                total += 0.5 * h * (prev + next);
                prev = next;
            }
        }
        Ok(total)
    }

    /// Diagnostic regrouping by enclosing balls: for each radius `n`, the
    /// largest `‖Φ(X)‖` among terms whose smallest enclosing ball `b_x(n)`
    /// has radius `n`, together with the summed norm per centre.
    pub fn ball_profile(&self, g: &MetricGraph, t: f64) -> Vec<BallBin> {
        let mut bins: BTreeMap<u32, BallBin> = BTreeMap::new();
        let mut per_centre: BTreeMap<(u32, usize), f64> = BTreeMap::new();
        for (x, op) in self.terms_at(t) {
            let (centre, radius) = (0..g.n_sites())
                .map(|c| (c, x.iter().map(|y| g.dist(c, y)).max().unwrap_or(0)))
                .min_by_key(|&(c, r)| (r, c))
                .expect("graph has sites");
            let norm = op.norm();
            let bin = bins.entry(radius).or_insert(BallBin { radius, max_term_norm: 0.0, max_centre_sum: 0.0, terms: 0 });
            bin.max_term_norm = bin.max_term_norm.max(norm);
            bin.terms += 1;
            *per_centre.entry((radius, centre)).or_default() += norm;
        }
        for ((radius, _), sum) in per_centre {
            let bin = bins.get_mut(&radius).expect("bin exists");
            bin.max_centre_sum = bin.max_centre_sum.max(sum);
        }
        bins.into_values().collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BallBin {
    pub radius: u32,
    pub max_term_norm: f64,
    /// Largest `‖Φ_x(n)‖`-style sum over a single centre.
    pub max_centre_sum: f64,
    pub terms: usize,
}

/// Pre-embedded pieces of a driven local Hamiltonian.
#[derive(Debug, Clone)]
pub struct HamiltonianParts {
    fixed: CMat,
    driven: Vec<(PiecewiseLinear, CMat)>,
}

impl HamiltonianParts {
    pub fn at(&self, t: f64) -> CMat {
        let mut h = self.fixed.clone();
        for (p, m) in &self.driven {
            let v = p.eval(t);
            if v != 0.0 {
                h += m * faer::Scale(c64::new(v, 0.0));
            }
        }
        h
    }
}

fn sum_components(comps: &[Component], t: f64) -> LocalOperator {
    let mut it = comps.iter().map(|c| match &c.profile {
        None => c.op.clone(),
        Some(p) => c.op.scale(c64::new(p.eval(t), 0.0)),
    });
    let first = it.next().expect("terms are never empty");
    it.fold(first, |acc, op| acc.add(&op).expect("same support and dims"))
}

/// `max_{x,y} F(d(x,y))⁻¹ Σ_{X ∋ x,y} w(X)` over all ordered pairs including
/// the diagonal.
fn weighted_pair_sup<'a>(
    g: &MetricGraph,
    f: &FFunction,
    weights: impl Iterator<Item = (&'a SiteSet, f64)>,
) -> Result<f64> {
    let n = g.n_sites();
    let mut acc = vec![0.0; n * n];
    for (x, w) in weights {
        g.check_sites(x)?;
        for a in x.iter() {
            for b in x.iter() {
                acc[a * n + b] += w;
            }
        }
    }
    let table = f.table(g);
    let mut best: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            let v = acc[a * n + b];
            if v != 0.0 {
                best = best.max(v / table[g.dist(a, b) as usize]);
            }
        }
    }
    Ok(best)
}

/// Preset spin models on a metric graph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum Model {
    /// `Φ = 0`
    Zero,
    /// `−J σᶻσᶻ` on edges.
    Ising {
        #[serde(rename = "J")]
        j: f64,
    },
    /// `−J σᶻσᶻ` on edges, `−g σˣ` on sites.
    Tfim {
        #[serde(rename = "J")]
        j: f64,
        g: f64,
    },
    /// `J (σˣσˣ + σʸσʸ + Δ σᶻσᶻ)` on edges, `−h σᶻ` on sites.
    Xxz {
        #[serde(rename = "J")]
        j: f64,
        #[serde(rename = "Delta")]
        delta: f64,
        h: f64,
    },
    /// `−J d(x,y)^{−α} σᶻσᶻ` on every pair.
    LongrangeIsing {
        #[serde(rename = "J")]
        j: f64,
        alpha: f64,
    },
}

pub fn preset(model: &Model, g: &MetricGraph) -> Result<Interaction> {
    let finite = |name: &str, v: f64| {
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Config(format!("coupling {name} must be finite, got {v}")))
        }
    };
    let zz = |x: usize, y: usize, c: f64| {
        LocalOperator::pauli_string(c64::new(c, 0.0), &[(x, Pauli::Z), (y, Pauli::Z)])
    };
    let mut phi = Interaction::new();
    match *model {
        Model::Zero => {}
        Model::Ising { j } => {
            let j = finite("J", j)?;
            for (x, y) in g.edges() {
                phi.add_term(zz(x, y, -j)?)?;
            }
        }
        Model::Tfim { j, g: field } => {
            let (j, field) = (finite("J", j)?, finite("g", field)?);
            for (x, y) in g.edges() {
                phi.add_term(zz(x, y, -j)?)?;
            }
            for x in 0..g.n_sites() {
                phi.add_term(LocalOperator::pauli(x, Pauli::X).scale(c64::new(-field, 0.0)))?;
            }
        }
        Model::Xxz { j, delta, h } => {
            let (j, delta, h) = (finite("J", j)?, finite("Delta", delta)?, finite("h", h)?);
            for (x, y) in g.edges() {
                let mut bond = LocalOperator::pauli_string(c64::new(j, 0.0), &[(x, Pauli::X), (y, Pauli::X)])?;
                bond = bond.add(&LocalOperator::pauli_string(c64::new(j, 0.0), &[(x, Pauli::Y), (y, Pauli::Y)])?)?;
                bond = bond.add(&zz(x, y, j * delta)?)?;
                phi.add_term(bond)?;
            }
            for x in 0..g.n_sites() {
                phi.add_term(LocalOperator::pauli(x, Pauli::Z).scale(c64::new(-h, 0.0)))?;
            }
        }
        Model::LongrangeIsing { j, alpha } => {
            let j = finite("J", j)?;
            if !(alpha > 0.0 && alpha.is_finite()) {
                return Err(Error::Config(format!("decay exponent α must be positive, got {alpha}")));
            }
            if let Some(nu) = g.lattice_dimension() {
                if alpha <= nu as f64 {
                    return Err(Error::Config(format!(
                        "long-range decay α = {alpha} must exceed the lattice dimension {nu}"
                    )));
                }
            }
            for x in 0..g.n_sites() {
                for y in x + 1..g.n_sites() {
                    let d = g.dist(x, y) as f64;
                    phi.add_term(zz(x, y, -j * d.powf(-alpha))?)?;
                }
            }
        }
    }
    Ok(phi)
}

/// Linear path `Φ(s) = (1 − s) Φ₀ + s Φ₁`, `s ∈ [0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionPath {
    start: Interaction,
    end: Interaction,
    derivative: Interaction,
}

impl InteractionPath {
    pub fn linear(start: Interaction, end: Interaction) -> Result<Self> {
        let derivative = Interaction::linear_combination(-1.0, &start, 1.0, &end)?;
        Ok(Self { start, end, derivative })
    }

    pub fn constant(phi: Interaction) -> Result<Self> {
        Self::linear(phi.clone(), phi)
    }

    pub fn start(&self) -> &Interaction {
        &self.start
    }

    pub fn end(&self) -> &Interaction {
        &self.end
    }

    pub fn reversed(&self) -> Result<Self> {
        Self::linear(self.end.clone(), self.start.clone())
    }

    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        Self::linear(self.start.scaled(lambda), self.end.scaled(lambda))
    }

    /// `Φ(s)`
    pub fn at(&self, s: f64) -> Interaction {
        Interaction::linear_combination(1.0 - s, &self.start, s, &self.end)
            .expect("endpoints are time-independent")
    }

    /// `Φ′(s)`; constant along a linear path.
    pub fn derivative(&self, _s: f64) -> &Interaction {
        &self.derivative
    }

    /// `H_Λ(s)`
    pub fn hamiltonian(&self, lambda: &SiteSet, s: f64) -> Result<LocalOperator> {
        self.at(s).local_hamiltonian(lambda, 0.0)
    }

    /// `max_s max_{x,y} F(d(x,y))⁻¹ Σ_{X ∋ x,y} (‖Φ(X,s)‖ + |X| ‖Φ′(X,s)‖)`
    /// over the grid.
    pub fn b1_norm(&self, f: &FFunction, g: &MetricGraph, s_grid: &[f64]) -> Result<f64> {
        if s_grid.is_empty() {
            return Err(Error::Config("s-grid must be non-empty".into()));
        }
        let deriv: BTreeMap<&SiteSet, f64> =
            self.derivative.terms_at(0.0).map(|(x, op)| (x, op.norm() * x.len() as f64)).collect();
        let mut best: f64 = 0.0;
        for &s in s_grid {
            let phi_s = self.at(s);
            let mut weights: BTreeMap<&SiteSet, f64> = deriv.clone();
            let norms: Vec<(SiteSet, f64)> = phi_s.terms_at(0.0).map(|(x, op)| (x.clone(), op.norm())).collect();
            for (x, v) in &norms {
                *weights.entry(x).or_default() += v;
            }
            best = best.max(weighted_pair_sup(g, f, weights.into_iter())?);
        }
        Ok(best)
    }
}

/// Identity on `lambda` with the interaction's site dimensions.
pub fn identity_on(phi: &Interaction, lambda: &SiteSet) -> Result<LocalOperator> {
    let dims = phi.site_dims(lambda);
    let dim = dims.iter().product();
    LocalOperator::new(lambda.clone(), dims, linalg::identity(dim))
}
