//! Finite-dimensional local observables with explicit supports.
//!
//! A [`LocalOperator`] stores a dense matrix on the tensor product of the
//! on-site spaces of its support, factors ordered by ascending site index
//! (the first site is the most significant tensor factor). Every operation
//! that combines operators with different supports embeds them into the
//! union first, so operator equality is plain matrix equality.

use std::fmt;

use faer::{c64, Mat, MatRef};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{MetricGraph, SiteSet};
use crate::linalg::{self, CMat, I, ONE, ZERO};

pub const QUBIT: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> CMat {
        let m = |a: c64, b: c64, c: c64, d: c64| {
            let mut out = Mat::zeros(2, 2);
            out[(0, 0)] = a;
            out[(0, 1)] = b;
            out[(1, 0)] = c;
            out[(1, 1)] = d;
            out
        };
        match self {
            Pauli::I => m(ONE, ZERO, ZERO, ONE),
            Pauli::X => m(ZERO, ONE, ONE, ZERO),
            Pauli::Y => m(ZERO, -I, I, ZERO),
            Pauli::Z => m(ONE, ZERO, ZERO, -ONE),
        }
    }

    pub fn from_char(c: char) -> Result<Self> {
        match c.to_ascii_uppercase() {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            _ => Err(Error::Config(format!("unknown Pauli letter '{c}'"))),
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        };
        write!(f, "{c}")
    }
}

#[derive(Clone, PartialEq)]
pub struct LocalOperator {
    support: SiteSet,
    dims: Vec<usize>,
    matrix: CMat,
}

impl fmt::Debug for LocalOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LocalOperator")
            .field("support", &self.support)
            .field("dims", &self.dims)
            .field("dim", &self.matrix.nrows())
            .finish()
    }
}

impl LocalOperator {
    pub fn new(support: SiteSet, dims: Vec<usize>, matrix: CMat) -> Result<Self> {
        if dims.len() != support.len() {
            return Err(Error::Algebra(format!(
                "{} site dimensions given for support {support}",
                dims.len()
            )));
        }
        if dims.contains(&0) {
            return Err(Error::Algebra("on-site dimension must be positive".into()));
        }
        let dim: usize = dims.iter().product();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::Algebra(format!(
                "matrix is {}x{} but support {support} has dimension {dim}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { support, dims, matrix })
    }

    /// Operator on qubit sites.
    pub fn qubits(support: SiteSet, matrix: CMat) -> Result<Self> {
        let dims = vec![QUBIT; support.len()];
        Self::new(support, dims, matrix)
    }

    pub fn identity(support: SiteSet, dims: Vec<usize>) -> Result<Self> {
        let dim = dims.iter().product();
        Self::new(support, dims, linalg::identity(dim))
    }

    pub fn zero(support: SiteSet, dims: Vec<usize>) -> Result<Self> {
        let dim = dims.iter().product();
        Self::new(support, dims, linalg::zeros(dim))
    }

    /// Scalar multiple of the identity on the empty support.
    pub fn scalar(value: c64) -> Self {
        let mut m = Mat::zeros(1, 1);
        m[(0, 0)] = value;
        Self { support: SiteSet::empty(), dims: vec![], matrix: m }
    }

    pub fn pauli(site: usize, p: Pauli) -> Self {
        Self { support: SiteSet::single(site), dims: vec![QUBIT], matrix: p.matrix() }
    }

    /// `coeff · ⊗_x P_x`; identity letters are dropped from the support.
    pub fn pauli_string(coeff: c64, letters: &[(usize, Pauli)]) -> Result<Self> {
        let mut sorted: Vec<(usize, Pauli)> =
            letters.iter().copied().filter(|(_, p)| *p != Pauli::I).collect();
        sorted.sort_by_key(|(x, _)| *x);
        if sorted.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Config("Pauli string repeats a site".into()));
        }
        let mut m = Mat::zeros(1, 1);
        m[(0, 0)] = coeff;
        for (_, p) in &sorted {
            m = linalg::kron(m.as_ref(), p.matrix().as_ref());
        }
        Self::qubits(SiteSet::new(sorted.iter().map(|(x, _)| *x)), m)
    }

    pub fn support(&self) -> &SiteSet {
        &self.support
    }

    pub fn site_dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> MatRef<'_, c64> {
        self.matrix.as_ref()
    }

    pub fn into_matrix(self) -> CMat {
        self.matrix
    }

    /// On-site dimension of `x`, if `x` is in the support.
    pub fn dim_of(&self, x: usize) -> Option<usize> {
        self.support.position(x).map(|k| self.dims[k])
    }

    /// Largest singular value.
    pub fn norm(&self) -> f64 {
        linalg::spectral_norm(self.matrix.as_ref())
    }

    pub fn adjoint(&self) -> Self {
        Self { support: self.support.clone(), dims: self.dims.clone(), matrix: linalg::adjoint(self.matrix.as_ref()) }
    }

    pub fn scale(&self, s: c64) -> Self {
        let matrix = Mat::from_fn(self.dim(), self.dim(), |i, j| self.matrix[(i, j)] * s);
        Self { support: self.support.clone(), dims: self.dims.clone(), matrix }
    }

    pub fn hermiticity_defect(&self) -> f64 {
        linalg::hermiticity_defect(self.matrix.as_ref())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// Normalized trace `tr(A) / dim`.
    pub fn normalized_trace(&self) -> c64 {
        let d = self.dim();
        (0..d).fold(ZERO, |acc, i| acc + self.matrix[(i, i)]) / d as f64
    }

    /// Site dimensions for `target`, taking known dimensions from `self` and
    /// `other`, qubits elsewhere.
    fn merged_dims(&self, other: Option<&LocalOperator>, target: &SiteSet) -> Result<Vec<usize>> {
        target
            .iter()
            .map(|x| {
                let a = self.dim_of(x);
                let b = other.and_then(|o| o.dim_of(x));
                match (a, b) {
                    (Some(a), Some(b)) if a != b => Err(Error::Algebra(format!(
                        "site {x} has dimension {a} in one operator and {b} in the other"
                    ))),
                    (Some(a), _) => Ok(a),
                    (None, Some(b)) => Ok(b),
                    (None, None) => Ok(QUBIT),
                }
            })
            .collect()
    }

    /// `A ⊗ 1` on `target`, new sites taken as qubits.
    pub fn embed(&self, target: &SiteSet) -> Result<Self> {
        let dims = self.merged_dims(None, target)?;
        self.embed_with_dims(target, &dims)
    }

    pub fn embed_with_dims(&self, target: &SiteSet, target_dims: &[usize]) -> Result<Self> {
        if !self.support.is_subset(target) {
            return Err(Error::Embedding(format!(
                "support {} is not contained in {target}",
                self.support
            )));
        }
        if target_dims.len() != target.len() {
            return Err(Error::Embedding("target dimensions do not match target sites".into()));
        }
        for (k, x) in target.iter().enumerate() {
            if let Some(d) = self.dim_of(x) {
                if d != target_dims[k] {
                    return Err(Error::Algebra(format!(
                        "site {x} has dimension {d}, target expects {}",
                        target_dims[k]
                    )));
                }
            }
        }
        if target == &self.support {
            return Ok(self.clone());
        }
        let layout = SplitLayout::new(target, target_dims, &self.support);
        let mut out = linalg::zeros(layout.total);
        for r in 0..layout.rest_dim {
            for sj in 0..layout.kept_dim {
                let col = layout.index(sj, r);
                for si in 0..layout.kept_dim {
                    out[(layout.index(si, r), col)] = self.matrix[(si, sj)];
                }
            }
        }
        Self::new(target.clone(), target_dims.to_vec(), out)
    }

    /// Both operators embedded into the union of their supports.
    pub fn align(&self, other: &LocalOperator) -> Result<(LocalOperator, LocalOperator)> {
        let union = self.support.union(&other.support);
        let dims = self.merged_dims(Some(other), &union)?;
        Ok((self.embed_with_dims(&union, &dims)?, other.embed_with_dims(&union, &dims)?))
    }

    pub fn add(&self, other: &LocalOperator) -> Result<Self> {
        let (a, b) = self.align(other)?;
        let m = &a.matrix + &b.matrix;
        Ok(Self { matrix: m, ..a })
    }

    pub fn sub(&self, other: &LocalOperator) -> Result<Self> {
        let (a, b) = self.align(other)?;
        let m = &a.matrix - &b.matrix;
        Ok(Self { matrix: m, ..a })
    }

    pub fn mul(&self, other: &LocalOperator) -> Result<Self> {
        let (a, b) = self.align(other)?;
        let m = linalg::mul(a.matrix.as_ref(), b.matrix.as_ref());
        Ok(Self { matrix: m, ..a })
    }

    /// `[A, B] = AB − BA` on the union of supports.
    pub fn commutator(&self, other: &LocalOperator) -> Result<Self> {
        let (a, b) = self.align(other)?;
        let mut m = linalg::mul(a.matrix.as_ref(), b.matrix.as_ref());
        linalg::mul_into(m.as_mut(), true, b.matrix.as_ref(), a.matrix.as_ref(), -ONE);
        Ok(Self { matrix: m, ..a })
    }

    /// `Π_Λ(A)`: identity on `Λ ∩ supp A`, normalized trace on the rest of
    /// the support. The result is supported in `Λ ∩ supp A`.
    pub fn conditional_expectation(&self, lambda: &SiteSet) -> Self {
        let kept = self.support.intersection(lambda);
        if kept == self.support {
            return self.clone();
        }
        let layout = SplitLayout::new(&self.support, &self.dims, &kept);
        let norm = 1.0 / layout.rest_dim as f64;
        let out = Mat::from_fn(layout.kept_dim, layout.kept_dim, |i, j| {
            let mut acc = ZERO;
            for r in 0..layout.rest_dim {
                acc += self.matrix[(layout.index(i, r), layout.index(j, r))];
            }
            acc * norm
        });
        let kept_dims = kept.iter().map(|x| self.dim_of(x).unwrap()).collect();
        Self { support: kept, dims: kept_dims, matrix: out }
    }

    /// `‖A − Π_Λ(A)‖`
    pub fn local_approx_error(&self, lambda: &SiteSet) -> f64 {
        let pi = self.conditional_expectation(lambda);
        let back = pi
            .embed_with_dims(&self.support, &self.dims)
            .expect("conditional expectation stays inside the support");
        let diff = &self.matrix - &back.matrix;
        linalg::spectral_norm(diff.as_ref())
    }

    /// `[M, 1 ⊗ A]` for a dense `M` on `target`, without forming the
    /// embedding. Costs `O(dim(M)² · dim(A))`.
    pub fn commutator_from_left(
        &self,
        m: MatRef<'_, c64>,
        target: &SiteSet,
        target_dims: &[usize],
    ) -> Result<CMat> {
        if !self.support.is_subset(target) {
            return Err(Error::Embedding(format!(
                "support {} is not contained in {target}",
                self.support
            )));
        }
        let layout = SplitLayout::new(target, target_dims, &self.support);
        if m.nrows() != layout.total || m.ncols() != layout.total {
            return Err(Error::Algebra(format!(
                "matrix of size {}×{} does not act on {target}",
                m.nrows(),
                m.ncols()
            )));
        }
        let owned;
        let m = if m.row_stride() == 1 {
            m
        } else {
            owned = m.to_owned();
            owned.as_ref()
        };
        let col = |j: usize| m.col(j).try_as_col_major().expect("unit row stride").as_slice();
        let k = layout.kept_dim;
        let entries: Vec<(usize, usize, c64)> = (0..k)
            .flat_map(|si| (0..k).map(move |sj| (si, sj)))
            .map(|(si, sj)| (si, sj, self.matrix[(si, sj)]))
            .filter(|e| e.2 != ZERO)
            .collect();
        let mut out = linalg::zeros(layout.total);
        // M · (1⊗A): column (sj, r) collects A[si, sj] · M[:, (si, r)]
        for r in 0..layout.rest_dim {
            for &(si, sj, w) in &entries {
                let src = col(layout.index(si, r));
                let dst = out.col_as_slice_mut(layout.index(sj, r));
                for (o, x) in dst.iter_mut().zip(src) {
                    *o += x * w;
                }
            }
        }
        // − (1⊗A) · M, column by column
        for c in 0..layout.total {
            let src = col(c);
            let dst = out.col_as_slice_mut(c);
            for r in 0..layout.rest_dim {
                for &(si, sj, w) in &entries {
                    dst[layout.index(si, r)] -= w * src[layout.index(sj, r)];
                }
            }
        }
        Ok(out)
    }
}

/// Index bookkeeping for splitting a tensor product over `all` into the
/// factors on `kept` and the complementary factors.
struct SplitLayout {
    total: usize,
    kept_dim: usize,
    rest_dim: usize,
    table: Vec<usize>,
}

impl SplitLayout {
    fn new(all: &SiteSet, all_dims: &[usize], kept: &SiteSet) -> Self {
        let kept_dims: Vec<usize> =
            all.iter().zip(all_dims).filter(|(x, _)| kept.contains(*x)).map(|(_, d)| *d).collect();
        let rest_dims: Vec<usize> =
            all.iter().zip(all_dims).filter(|(x, _)| !kept.contains(*x)).map(|(_, d)| *d).collect();
        let kept_dim: usize = kept_dims.iter().product();
        let rest_dim: usize = rest_dims.iter().product();
        let total = kept_dim * rest_dim;
        let mut table = vec![0; total];
        for (full, slot) in (0..total).map(|f| (f, split(f, all, all_dims, kept))) {
            table[slot.0 * rest_dim + slot.1] = full;
        }
        Self { total, kept_dim, rest_dim, table }
    }

    #[inline]
    fn index(&self, kept_idx: usize, rest_idx: usize) -> usize {
        self.table[kept_idx * self.rest_dim + rest_idx]
    }
}

/// Split a full multi-index into (kept, rest) indices, each in the global
/// site order.
fn split(mut full: usize, all: &SiteSet, dims: &[usize], kept: &SiteSet) -> (usize, usize) {
    let n = dims.len();
    let mut digits = vec![0; n];
    for k in (0..n).rev() {
        digits[k] = full % dims[k];
        full /= dims[k];
    }
    let (mut ki, mut ri) = (0, 0);
    for (k, x) in all.iter().enumerate() {
        if kept.contains(x) {
            ki = ki * dims[k] + digits[k];
        } else {
            ri = ri * dims[k] + digits[k];
        }
    }
    (ki, ri)
}

/// How `commutator_locality` obtained its supremum estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeMode {
    /// All normalized Pauli strings on the complement.
    ExhaustivePauli,
    /// Seeded Haar-random unitaries plus Pauli strings of weight ≤ 2.
    RandomProbes,
    EmptyComplement,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocalityEstimate {
    /// Lower estimate of `sup_{B ∈ A_{ambient∖Λ}, ‖B‖=1} ‖[A, B]‖`.
    pub value: f64,
    pub mode: ProbeMode,
    pub probes_used: usize,
}

/// Complements with at most this many qubits get the exhaustive Pauli sup.
pub const EXHAUSTIVE_PAULI_MAX_QUBITS: usize = 3;

/// Supremum estimate of `‖[A, B]‖` over unit-norm `B` supported on
/// `ambient ∖ Λ`. Always a lower bound of the true supremum.
pub fn commutator_locality(
    a: &LocalOperator,
    lambda: &SiteSet,
    ambient: &SiteSet,
    probes: usize,
    seed: u64,
) -> Result<LocalityEstimate> {
    if !lambda.is_subset(ambient) || !a.support().is_subset(ambient) {
        return Err(Error::Precondition(format!(
            "Λ = {lambda} and supp A = {} must lie in the ambient set {ambient}",
            a.support()
        )));
    }
    let complement = ambient.difference(lambda);
    if complement.is_empty() {
        return Ok(LocalityEstimate { value: 0.0, mode: ProbeMode::EmptyComplement, probes_used: 0 });
    }
    let comp_dims = a.merged_dims(None, &complement)?;
    let all_qubits = comp_dims.iter().all(|&d| d == QUBIT);
    // only the part of the complement that meets supp A can fail to commute
    let work = a.support().union(&complement);
    let work_dims = a.merged_dims(None, &work)?;
    let a_work = a.embed_with_dims(&work, &work_dims)?;

    let comm_norm = |b: &LocalOperator| -> Result<f64> {
        let b = b.embed_with_dims(&work, &work_dims)?;
        let mut m = linalg::mul(a_work.matrix(), b.matrix());
        linalg::mul_into(m.as_mut(), true, b.matrix(), a_work.matrix(), -ONE);
        Ok(linalg::spectral_norm(m.as_ref()))
    };

    if all_qubits && complement.len() <= EXHAUSTIVE_PAULI_MAX_QUBITS {
        let mut best: f64 = 0.0;
        let strings = pauli_strings(&complement, complement.len());
        for s in &strings {
            best = best.max(comm_norm(s)?);
        }
        return Ok(LocalityEstimate {
            value: best,
            mode: ProbeMode::ExhaustivePauli,
            probes_used: strings.len(),
        });
    }

    let mut best: f64 = 0.0;
    let mut used = 0;
    if all_qubits {
        for s in pauli_strings(&complement, 2) {
            best = best.max(comm_norm(&s)?);
            used += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let comp_dim: usize = comp_dims.iter().product();
    for _ in 0..probes {
        let u = linalg::haar_unitary(comp_dim, &mut rng);
        let b = LocalOperator::new(complement.clone(), comp_dims.clone(), u)?;
        best = best.max(comm_norm(&b)?);
        used += 1;
    }
    Ok(LocalityEstimate { value: best, mode: ProbeMode::RandomProbes, probes_used: used })
}

/// Non-identity Pauli strings on `sites` with weight ≤ `max_weight`, in
/// order of increasing weight.
pub fn pauli_strings(sites: &SiteSet, max_weight: usize) -> Vec<LocalOperator> {
    let all: Vec<usize> = sites.iter().collect();
    let mut out = Vec::new();
    for weight in 1..=max_weight.min(all.len()) {
        for_each_subset(&all, weight, &mut |subset| {
            for code in 0..3usize.pow(weight as u32) {
                let mut c = code;
                let letters: Vec<(usize, Pauli)> = subset
                    .iter()
                    .map(|&x| {
                        let p = Pauli::ALL[1 + c % 3];
                        c /= 3;
                        (x, p)
                    })
                    .collect();
                out.push(LocalOperator::pauli_string(ONE, &letters).expect("distinct sites"));
            }
        });
    }
    out
}

fn for_each_subset(items: &[usize], k: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, k, i + 1, cur, f);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut Vec::with_capacity(k), f);
}

/// Increasing volumes `Λ₀ ⊂ Λ₁ ⊂ …` with decay values `f(n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecaySchedule {
    volumes: Vec<SiteSet>,
    f: Vec<f64>,
}

impl DecaySchedule {
    pub fn new(volumes: Vec<SiteSet>, f: Vec<f64>) -> Result<Self> {
        if volumes.is_empty() || volumes.len() != f.len() {
            return Err(Error::Schedule(format!(
                "{} volumes but {} decay values",
                volumes.len(),
                f.len()
            )));
        }
        for w in volumes.windows(2) {
            if !(w[0].is_subset(&w[1]) && w[0].len() < w[1].len()) {
                return Err(Error::Schedule(format!("{} is not strictly inside {}", w[0], w[1])));
            }
        }
        if let Some(v) = f.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
            return Err(Error::Schedule(format!("decay value {v} must be positive")));
        }
        if f.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::Schedule("decay values must be non-increasing".into()));
        }
        Ok(Self { volumes, f })
    }

    /// Balls `B_center(n)` for `n = 0, 1, …` until the ball covers `cover`,
    /// skipping radii that do not enlarge the ball.
    pub fn balls(
        g: &MetricGraph,
        center: usize,
        cover: &SiteSet,
        f: impl Fn(u32) -> f64,
    ) -> Result<Self> {
        let mut volumes: Vec<SiteSet> = Vec::new();
        let mut vals = Vec::new();
        for r in 0..=g.diameter() {
            let ball = g.ball(center, r)?;
            if volumes.last().is_some_and(|b| b.len() == ball.len()) {
                continue;
            }
            let done = cover.is_subset(&ball);
            volumes.push(ball);
            vals.push(f(r));
            if done {
                break;
            }
        }
        Self::new(volumes, vals)
    }

    pub fn volumes(&self) -> &[SiteSet] {
        &self.volumes
    }

    pub fn decay(&self) -> &[f64] {
        &self.f
    }
}

/// `‖A‖ + max_n f(n)⁻¹ ‖A − Π_{Λ_n}(A)‖` over the schedule.
pub fn f_norm(a: &LocalOperator, sched: &DecaySchedule) -> Result<f64> {
    let last = sched.volumes.last().expect("schedule is non-empty");
    if !a.support().is_subset(last) {
        return Err(Error::Schedule(format!(
            "schedule ends at {last}, which does not cover supp A = {}",
            a.support()
        )));
    }
    let tail = sched
        .volumes
        .iter()
        .zip(&sched.f)
        .map(|(vol, f)| a.local_approx_error(vol) / f)
        .fold(0.0, f64::max);
    Ok(a.norm() + tail)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zz01() -> LocalOperator {
        LocalOperator::pauli_string(ONE, &[(0, Pauli::Z), (1, Pauli::Z)]).unwrap()
    }

    #[test]
    fn embed_examples() {
        let x0 = LocalOperator::pauli(0, Pauli::X);
        assert_eq!(x0.embed(&SiteSet::single(0)).unwrap(), x0);
        let e = x0.embed(&SiteSet::new([0, 1])).unwrap();
        let expect = linalg::kron(Pauli::X.matrix().as_ref(), linalg::identity(2).as_ref());
        assert_eq!(linalg::max_abs_diff(e.matrix(), expect.as_ref()), 0.0);
        assert!((e.norm() - 1.0).abs() < 1e-14);
        // identity inserted in the middle of the tensor order
        let x0z2 = LocalOperator::pauli_string(ONE, &[(0, Pauli::X), (2, Pauli::Z)]).unwrap();
        let e = x0z2.embed(&SiteSet::new([0, 1, 2])).unwrap();
        let expect = linalg::kron(
            linalg::kron(Pauli::X.matrix().as_ref(), linalg::identity(2).as_ref()).as_ref(),
            Pauli::Z.matrix().as_ref(),
        );
        assert_eq!(linalg::max_abs_diff(e.matrix(), expect.as_ref()), 0.0);
    }

    #[test]
    fn embed_outside_target_fails() {
        let x3 = LocalOperator::pauli(3, Pauli::X);
        assert!(matches!(x3.embed(&SiteSet::new([0, 1])), Err(Error::Embedding(_))));
    }

    #[test]
    fn norm_examples() {
        assert!((LocalOperator::pauli(0, Pauli::X).norm() - 1.0).abs() < 1e-14);
        assert_eq!(LocalOperator::zero(SiteSet::single(0), vec![2]).unwrap().norm(), 0.0);
    }

    #[test]
    fn commutator_examples() {
        let x = LocalOperator::pauli(0, Pauli::X);
        let y = LocalOperator::pauli(0, Pauli::Y);
        let c = x.commutator(&y).unwrap();
        let z2i = LocalOperator::pauli(0, Pauli::Z).scale(c64::new(0.0, 2.0));
        assert!(linalg::max_abs_diff(c.matrix(), z2i.matrix()) < 1e-15);
        assert!((c.norm() - 2.0).abs() < 1e-14);

        let far = LocalOperator::pauli(3, Pauli::Y);
        assert_eq!(x.commutator(&far).unwrap().norm(), 0.0);
    }

    #[test]
    fn commutator_dimension_mismatch() {
        let a = LocalOperator::identity(SiteSet::single(0), vec![3]).unwrap();
        let b = LocalOperator::pauli(0, Pauli::X);
        assert!(matches!(a.commutator(&b), Err(Error::Algebra(_))));
    }

    #[test]
    fn conditional_expectation_examples() {
        let zz = zz01();
        let pi = zz.conditional_expectation(&SiteSet::single(0));
        assert_eq!(pi.norm(), 0.0);
        assert_eq!(zz.conditional_expectation(&SiteSet::new([0, 1, 2])), zz);
        assert!((zz.local_approx_error(&SiteSet::single(0)) - 1.0).abs() < 1e-14);
        assert_eq!(zz.local_approx_error(&SiteSet::new([0, 1])), 0.0);
    }

    #[test]
    fn commutator_locality_trivial_cases() {
        let zz = zz01();
        let lam = SiteSet::new([0, 1]);
        let est = commutator_locality(&zz, &lam, &lam, 4, 1).unwrap();
        assert_eq!(est.value, 0.0);
        assert_eq!(est.mode, ProbeMode::EmptyComplement);
        let est = commutator_locality(&zz, &SiteSet::new([0, 1]), &SiteSet::new([0, 1, 2]), 4, 1).unwrap();
        assert_eq!(est.value, 0.0);
    }

    #[test]
    fn pauli_string_count() {
        assert_eq!(pauli_strings(&SiteSet::new([0, 1, 2]), 3).len(), 63);
        assert_eq!(pauli_strings(&SiteSet::new([0, 1, 2]), 1).len(), 9);
    }

    #[test]
    fn decay_schedule_validation() {
        let v = vec![SiteSet::new([0]), SiteSet::new([0, 1])];
        assert!(DecaySchedule::new(v.clone(), vec![1.0, 0.0]).is_err());
        assert!(DecaySchedule::new(v.clone(), vec![0.5, 1.0]).is_err());
        assert!(DecaySchedule::new(vec![SiteSet::new([0, 1]), SiteSet::new([0])], vec![1.0, 0.5]).is_err());
        assert!(DecaySchedule::new(v, vec![1.0, 0.5]).is_ok());
    }

    #[test]
    fn f_norm_trivial_cases() {
        let g = MetricGraph::chain(3).unwrap();
        let x0 = LocalOperator::pauli(0, Pauli::X);
        let sched = DecaySchedule::balls(&g, 0, &g.sites(), |n| (-(n as f64)).exp()).unwrap();
        assert!((f_norm(&x0, &sched).unwrap() - 1.0).abs() < 1e-14);
        let zero = LocalOperator::zero(SiteSet::new([0, 2]), vec![2, 2]).unwrap();
        assert_eq!(f_norm(&zero, &sched).unwrap(), 0.0);
        let short = DecaySchedule::new(vec![SiteSet::single(0)], vec![1.0]).unwrap();
        assert!(matches!(f_norm(&zz01(), &short), Err(Error::Schedule(_))));
    }
}
