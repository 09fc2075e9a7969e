//! Dense complex linear-algebra kernels shared by the operator and dynamics
//! modules.
//!
//! Everything is column-major `faer::Mat<c64>`. Hermitian spectra come from
//! faer's dense solver; operator norms of large matrices are computed with a
//! fully reorthogonalized Lanczos iteration so that sweeps never pay for a
//! dense SVD per cell.

use faer::linalg::matmul::matmul;
use faer::traits::Conjugate;
use faer::{c64, Accum, Mat, MatMut, MatRef, Par, Side};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type CMat = Mat<c64>;

pub const ZERO: c64 = c64 { re: 0.0, im: 0.0 };
pub const ONE: c64 = c64 { re: 1.0, im: 0.0 };
pub const I: c64 = c64 { re: 0.0, im: 1.0 };

/// Matrices up to this dimension get their norm from a dense SVD.
const DENSE_NORM_MAX_DIM: usize = 96;

pub fn identity(n: usize) -> CMat {
    Mat::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
}

pub fn zeros(n: usize) -> CMat {
    Mat::zeros(n, n)
}

/// Kronecker product `a ⊗ b` (first factor most significant).
pub fn kron(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> CMat {
    let (ar, ac) = (a.nrows(), a.ncols());
    let (br, bc) = (b.nrows(), b.ncols());
    Mat::from_fn(ar * br, ac * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

pub fn mul<A, B>(a: MatRef<'_, A>, b: MatRef<'_, B>) -> CMat
where
    A: Conjugate<Canonical = c64>,
    B: Conjugate<Canonical = c64>,
{
    let mut out = Mat::zeros(a.nrows(), b.ncols());
    matmul(out.as_mut(), Accum::Replace, a, b, ONE, Par::Seq);
    out
}

/// `dst = alpha * a * b + beta_flag * dst`
pub fn mul_into(
    dst: MatMut<'_, c64>,
    accumulate: bool,
    a: MatRef<'_, c64>,
    b: MatRef<'_, c64>,
    alpha: c64,
) {
    let beta = if accumulate { Accum::Add } else { Accum::Replace };
    matmul(dst, beta, a, b, alpha, Par::Seq);
}

pub fn matvec<A: Conjugate<Canonical = c64>>(a: MatRef<'_, A>, x: &[c64], y: &mut [c64]) {
    let xv = MatRef::from_column_major_slice(x, x.len(), 1);
    let yv = MatMut::from_column_major_slice_mut(y, a.nrows(), 1);
    matmul(yv, Accum::Replace, a, xv, ONE, Par::Seq);
}

pub fn adjoint(a: MatRef<'_, c64>) -> CMat {
    a.adjoint().to_owned()
}

pub fn max_abs_diff(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> f64 {
    assert_eq!(a.shape(), b.shape());
    let mut m: f64 = 0.0;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            m = m.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    m
}

pub fn max_abs(a: MatRef<'_, c64>) -> f64 {
    let mut m: f64 = 0.0;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            m = m.max(a[(i, j)].norm());
        }
    }
    m
}

/// Largest entry of `|a - a^*|`.
pub fn hermiticity_defect(a: MatRef<'_, c64>) -> f64 {
    let n = a.nrows();
    let mut m: f64 = 0.0;
    for j in 0..n {
        for i in 0..=j {
            m = m.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    m
}

fn anti_hermiticity_defect(a: MatRef<'_, c64>) -> f64 {
    let n = a.nrows();
    let mut m: f64 = 0.0;
    for j in 0..n {
        for i in 0..=j {
            m = m.max((a[(i, j)] + a[(j, i)].conj()).norm());
        }
    }
    m
}

/// `‖U*U − 1‖` in operator norm.
pub fn unitarity_defect(u: MatRef<'_, c64>) -> f64 {
    let mut g = mul(u.adjoint(), u);
    for i in 0..g.nrows() {
        g[(i, i)] -= ONE;
    }
    spectral_norm(g.as_ref())
}

/// Eigen-decomposition of a Hermitian matrix; eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `exp(-i t H)` reconstructed from the spectral data.
    pub fn propagator(&self, t: f64) -> CMat {
        self.phase_conjugated(|e| c64::cis(-t * e))
    }

    /// `V diag(f(λ)) V*`
    pub fn phase_conjugated(&self, f: impl Fn(f64) -> c64) -> CMat {
        let n = self.dim();
        let v = self.vectors.as_ref();
        let scaled = Mat::from_fn(n, n, |i, j| v[(i, j)] * f(self.values[j]));
        mul(scaled.as_ref(), v.adjoint())
    }

    /// `V* A V`
    pub fn to_eigenbasis(&self, a: MatRef<'_, c64>) -> CMat {
        let v = self.vectors.as_ref();
        mul(mul(v.adjoint(), a).as_ref(), v)
    }

    /// `V A V*`
    pub fn from_eigenbasis(&self, a: MatRef<'_, c64>) -> CMat {
        let v = self.vectors.as_ref();
        mul(mul(v, a).as_ref(), v.adjoint())
    }
}

pub fn hermitian_eigen(h: MatRef<'_, c64>) -> Result<Spectrum> {
    let evd = h
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Numerical(format!("self-adjoint eigensolver failed: {e:?}")))?;
    let values = evd.S().column_vector().iter().map(|x| x.re).collect();
    Ok(Spectrum { values, vectors: evd.U().to_owned() })
}

pub fn hermitian_eigenvalues(h: MatRef<'_, c64>) -> Result<Vec<f64>> {
    h.self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Numerical(format!("self-adjoint eigensolver failed: {e:?}")))
}

/// Largest singular value.
pub fn spectral_norm(a: MatRef<'_, c64>) -> f64 {
    let n = a.nrows();
    if n == 0 || a.ncols() == 0 {
        return 0.0;
    }
    let scale = max_abs(a);
    if scale == 0.0 {
        return 0.0;
    }
    if n <= DENSE_NORM_MAX_DIM || n != a.ncols() {
        return dense_spectral_norm(a);
    }
    let tol = 1e-14 * scale;
    if hermiticity_defect(a) <= tol {
        let op = |x: &[c64], y: &mut [c64]| matvec(a, x, y);
        return lanczos_max_abs_eigenvalue(n, op, &LanczosParams::default());
    }
    if anti_hermiticity_defect(a) <= tol {
        // -i·A is Hermitian with the same singular values
        let op = |x: &[c64], y: &mut [c64]| {
            matvec(a, x, y);
            y.iter_mut().for_each(|v| *v *= -I);
        };
        return lanczos_max_abs_eigenvalue(n, op, &LanczosParams::default());
    }
    let mut tmp = vec![ZERO; n];
    let gram = |x: &[c64], y: &mut [c64]| {
        matvec(a, x, &mut tmp);
        matvec(a.adjoint(), &tmp, y);
    };
    lanczos_max_abs_eigenvalue(n, gram, &LanczosParams::default()).sqrt()
}

pub fn dense_spectral_norm(a: MatRef<'_, c64>) -> f64 {
    match a.singular_values() {
        Ok(s) => s.first().copied().unwrap_or(0.0),
        // fall back to the Gram matrix if the SVD iteration gives up
        Err(_) => {
            let g = mul(a.adjoint(), a);
            hermitian_eigenvalues(g.as_ref())
                .ok()
                .and_then(|v| v.last().copied())
                .unwrap_or(f64::NAN)
                .max(0.0)
                .sqrt()
        }
    }
}

#[derive(Debug, Clone)]
pub struct LanczosParams {
    pub max_steps: usize,
    /// Stop once the residual `β_k |s_k|` of the top Ritz pair falls below
    /// `rel_tol · |θ|`; for Hermitian operators this bounds the eigenvalue
    /// error by the same amount.
    pub rel_tol: f64,
    pub seed: u64,
}

impl Default for LanczosParams {
    fn default() -> Self {
        Self { max_steps: 400, rel_tol: 1e-10, seed: 0x051e_c7a1 }
    }
}

/// Largest `|λ|` of a Hermitian operator given only through its action.
pub fn lanczos_max_abs_eigenvalue(
    n: usize,
    mut op: impl FnMut(&[c64], &mut [c64]),
    params: &LanczosParams,
) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut q: Vec<c64> = (0..n)
        .map(|_| c64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    normalize(&mut q);

    let max_steps = params.max_steps.min(n);
    let mut basis: Vec<Vec<c64>> = Vec::with_capacity(max_steps);
    // columns of the projected (tridiagonal up to rounding) matrix
    let mut proj: Vec<Vec<c64>> = Vec::with_capacity(max_steps);
    let mut w = vec![ZERO; n];
    let mut best = 0.0;

    for k in 0..max_steps {
        op(&q, &mut w);
        basis.push(q.clone());
        let mut col = vec![ZERO; k + 2];
        // two passes of classical Gram-Schmidt against the whole basis
        for _ in 0..2 {
            for (i, b) in basis.iter().enumerate() {
                let h = dot(b, &w);
                col[i] += h;
                axpy(-h, b, &mut w);
            }
        }
        let beta = norm(&w);
        col[k + 1] = c64::new(beta, 0.0);
        proj.push(col);

        let check = k + 1 == max_steps || beta <= 1e-300 || k % 4 == 3 || k < 4;
        if check {
            let (ritz, resid) = top_ritz(&proj, k + 1);
            best = ritz;
            let converged = resid <= params.rel_tol * ritz.max(f64::MIN_POSITIVE);
            if converged || beta <= params.rel_tol * ritz.max(f64::MIN_POSITIVE) {
                break;
            }
        }
        if beta == 0.0 {
            break;
        }
        for (qi, wi) in q.iter_mut().zip(w.iter()) {
            *qi = *wi / beta;
        }
    }
    best
}

/// Ritz value of largest modulus and its residual estimate.
fn top_ritz(proj: &[Vec<c64>], k: usize) -> (f64, f64) {
    // H[i][j] = proj[j][i]; symmetrize from the lower triangle, which holds
    // the diagonal and the real β entries
    let lower = |i: usize, j: usize| if i < proj[j].len() { proj[j][i] } else { ZERO };
    let sym = Mat::from_fn(k, k, |i, j| {
        if i >= j {
            lower(i, j)
        } else {
            lower(j, i).conj()
        }
    });
    let evd = match sym.self_adjoint_eigen(Side::Lower) {
        Ok(e) => e,
        Err(_) => return (f64::NAN, f64::INFINITY),
    };
    let vals: Vec<f64> = evd.S().column_vector().iter().map(|x| x.re).collect();
    let (idx, val) = vals
        .iter()
        .enumerate()
        .map(|(i, v)| (i, v.abs()))
        .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
    let beta_k = proj[k - 1].get(k).map(|b| b.norm()).unwrap_or(0.0);
    let resid = beta_k * evd.U()[(k - 1, idx)].norm();
    (val, resid)
}

fn dot(a: &[c64], b: &[c64]) -> c64 {
    a.iter().zip(b).fold(ZERO, |acc, (x, y)| acc + x.conj() * y)
}

fn axpy(alpha: c64, x: &[c64], y: &mut [c64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn norm(a: &[c64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize(a: &mut [c64]) {
    let n = norm(a);
    for x in a.iter_mut() {
        *x /= n;
    }
}

/// Haar-distributed unitary via QR of a complex Ginibre matrix with the
/// diagonal phases of R divided out.
pub fn haar_unitary<R: Rng>(dim: usize, rng: &mut R) -> CMat {
    let g = Mat::from_fn(dim, dim, |_, _| {
        c64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    });
    let qr = g.qr();
    let q = qr.compute_Q();
    let r = qr.R();
    let phases: Vec<c64> = (0..dim)
        .map(|i| {
            let d = r[(i, i)];
            if d.norm() == 0.0 {
                ONE
            } else {
                d / d.norm()
            }
        })
        .collect();
    Mat::from_fn(dim, dim, |i, j| q[(i, j)] * phases[j])
}

/// Random dense complex matrix with standard-normal entries.
pub fn ginibre<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    Mat::from_fn(rows, cols, |_, _| {
        c64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    })
}
