//! Finite metric graphs with integer distances.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default upper bound on the number of sites a constructor will accept.
pub const DEFAULT_MAX_SITES: usize = 4096;

/// Sorted, duplicate-free set of site indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SiteSet(Vec<usize>);

impl SiteSet {
    pub fn new(sites: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = sites.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        SiteSet(v)
    }

    pub fn empty() -> Self {
        SiteSet(Vec::new())
    }

    pub fn single(x: usize) -> Self {
        SiteSet(vec![x])
    }

    pub fn range(n: usize) -> Self {
        SiteSet((0..n).collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    /// Position of `x` inside the ordered set.
    pub fn position(&self, x: usize) -> Option<usize> {
        self.0.binary_search(&x).ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn is_subset(&self, other: &SiteSet) -> bool {
        self.0.iter().all(|x| other.contains(*x))
    }

    pub fn intersects(&self, other: &SiteSet) -> bool {
        self.0.iter().any(|x| other.contains(*x))
    }

    pub fn union(&self, other: &SiteSet) -> SiteSet {
        SiteSet::new(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn intersection(&self, other: &SiteSet) -> SiteSet {
        SiteSet(self.0.iter().copied().filter(|x| other.contains(*x)).collect())
    }

    pub fn difference(&self, other: &SiteSet) -> SiteSet {
        SiteSet(self.0.iter().copied().filter(|x| !other.contains(*x)).collect())
    }

    pub fn max(&self) -> Option<usize> {
        self.0.last().copied()
    }
}

impl fmt::Display for SiteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<usize> for SiteSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        SiteSet::new(iter)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphKind {
    Chain,
    Ring,
    Grid { dims: Vec<usize>, periodic: bool },
    Explicit,
}

/// Finite site set `0..n` with a precomputed integer distance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricGraph {
    n: usize,
    dist: Vec<u32>,
    kind: GraphKind,
}

/// Claimed bound `|B_x(r)| ≤ 1 + c r^ν`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthCertificate {
    pub c: f64,
    pub nu: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthCheck {
    pub holds: bool,
    /// First violating `(site, radius)`, scanning radii outermost.
    pub witness: Option<(usize, u32)>,
    /// Largest `|B_x(r)| / (1 + c r^ν)` seen; ≤ 1 iff the certificate holds.
    pub worst_ratio: f64,
    pub worst_at: (usize, u32),
}

impl MetricGraph {
    pub fn chain(n: usize) -> Result<Self> {
        Self::check_size(n, DEFAULT_MAX_SITES)?;
        let dist = (0..n * n).map(|k| (k / n).abs_diff(k % n) as u32).collect();
        Ok(Self { n, dist, kind: GraphKind::Chain })
    }

    pub fn ring(n: usize) -> Result<Self> {
        Self::check_size(n, DEFAULT_MAX_SITES)?;
        let dist = (0..n * n)
            .map(|k| {
                let d = (k / n).abs_diff(k % n);
                d.min(n - d) as u32
            })
            .collect();
        Ok(Self { n, dist, kind: GraphKind::Ring })
    }

    pub fn grid(dims: &[usize], periodic: bool) -> Result<Self> {
        Self::grid_with_limit(dims, periodic, DEFAULT_MAX_SITES)
    }

    /// Row-major grid: the last coordinate varies fastest.
    pub fn grid_with_limit(dims: &[usize], periodic: bool, max_sites: usize) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidSize(format!("grid dimensions must be positive, got {dims:?}")));
        }
        let n = dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .filter(|&n| n <= max_sites)
            .ok_or_else(|| {
                Error::InvalidSize(format!("grid {dims:?} exceeds the {max_sites}-site limit"))
            })?;
        let coords: Vec<Vec<usize>> = (0..n).map(|k| unravel(k, dims)).collect();
        let mut dist = vec![0u32; n * n];
        for x in 0..n {
            for y in 0..n {
                let mut d = 0usize;
                for (axis, &len) in dims.iter().enumerate() {
                    let delta = coords[x][axis].abs_diff(coords[y][axis]);
                    d += if periodic { delta.min(len - delta) } else { delta };
                }
                dist[x * n + y] = d as u32;
            }
        }
        Ok(Self { n, dist, kind: GraphKind::Grid { dims: dims.to_vec(), periodic } })
    }

    /// Graph from an explicit symmetric distance matrix; metric axioms are
    /// checked exhaustively.
    pub fn explicit(dist: Vec<Vec<u32>>) -> Result<Self> {
        let n = dist.len();
        Self::check_size(n, DEFAULT_MAX_SITES)?;
        if dist.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidSize("distance matrix is not square".into()));
        }
        let flat: Vec<u32> = dist.into_iter().flatten().collect();
        let g = Self { n, dist: flat, kind: GraphKind::Explicit };
        if let Some(msg) = g.metric_violation() {
            return Err(Error::InvalidSize(format!("not a metric: {msg}")));
        }
        Ok(g)
    }

    fn check_size(n: usize, max_sites: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::InvalidSize("graph needs at least one site".into()));
        }
        if n > max_sites {
            return Err(Error::InvalidSize(format!("{n} sites exceeds the {max_sites}-site limit")));
        }
        Ok(())
    }

    pub fn n_sites(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &GraphKind {
        &self.kind
    }

    pub fn sites(&self) -> SiteSet {
        SiteSet::range(self.n)
    }

    /// Dimension `ν` of the underlying lattice when the kind determines it.
    pub fn lattice_dimension(&self) -> Option<usize> {
        match &self.kind {
            GraphKind::Chain | GraphKind::Ring => Some(1),
            GraphKind::Grid { dims, .. } => Some(dims.len()),
            GraphKind::Explicit => None,
        }
    }

    #[inline]
    pub fn dist(&self, x: usize, y: usize) -> u32 {
        self.dist[x * self.n + y]
    }

    pub fn checked_dist(&self, x: usize, y: usize) -> Result<u32> {
        self.check_site(x)?;
        self.check_site(y)?;
        Ok(self.dist(x, y))
    }

    pub fn check_site(&self, x: usize) -> Result<()> {
        if x < self.n {
            Ok(())
        } else {
            Err(Error::UnknownSite { site: x, n_sites: self.n })
        }
    }

    pub fn check_sites(&self, set: &SiteSet) -> Result<()> {
        set.iter().try_for_each(|x| self.check_site(x))
    }

    /// `min_{x∈X, y∈Y} d(x, y)`; `None` if either set is empty.
    pub fn set_distance(&self, xs: &SiteSet, ys: &SiteSet) -> Option<u32> {
        xs.iter().flat_map(|x| ys.iter().map(move |y| (x, y))).map(|(x, y)| self.dist(x, y)).min()
    }

    pub fn diameter(&self) -> u32 {
        self.dist.iter().copied().max().unwrap_or(0)
    }

    pub fn ball(&self, x: usize, r: u32) -> Result<SiteSet> {
        self.check_site(x)?;
        Ok(SiteSet((0..self.n).filter(|&y| self.dist(x, y) <= r).collect()))
    }

    fn ball_size(&self, x: usize, r: u32) -> usize {
        (0..self.n).filter(|&y| self.dist(x, y) <= r).count()
    }

    /// Pairs of sites at distance one.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.n {
            for y in x + 1..self.n {
                if self.dist(x, y) == 1 {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Exhaustive check of the growth certificate over every site and every
    /// radius in `[1, diameter]`.
    pub fn check_growth(&self, cert: &GrowthCertificate) -> GrowthCheck {
        let diam = self.diameter();
        let mut witness = None;
        let mut worst_ratio = 0.0;
        let mut worst_at = (0, 0);
        for r in 1..=diam {
            let allowed = 1.0 + cert.c * (r as f64).powf(cert.nu);
            for x in 0..self.n {
                let size = self.ball_size(x, r) as f64;
                let ratio = size / allowed;
                if ratio > worst_ratio {
                    worst_ratio = ratio;
                    worst_at = (x, r);
                }
                if size > allowed && witness.is_none() {
                    witness = Some((x, r));
                }
            }
        }
        GrowthCheck { holds: witness.is_none(), witness, worst_ratio, worst_at }
    }

    /// Describes the first metric-axiom failure, if any.
    pub fn metric_violation(&self) -> Option<String> {
        let n = self.n;
        for x in 0..n {
            if self.dist(x, x) != 0 {
                return Some(format!("d({x},{x}) != 0"));
            }
            for y in 0..n {
                if x != y && self.dist(x, y) == 0 {
                    return Some(format!("d({x},{y}) = 0"));
                }
                if self.dist(x, y) != self.dist(y, x) {
                    return Some(format!("d({x},{y}) != d({y},{x})"));
                }
                for z in 0..n {
                    if self.dist(x, z) > self.dist(x, y) + self.dist(y, z) {
                        return Some(format!("triangle inequality fails at ({x},{y},{z})"));
                    }
                }
            }
        }
        None
    }
}

fn unravel(mut k: usize, dims: &[usize]) -> Vec<usize> {
    let mut c = vec![0; dims.len()];
    for axis in (0..dims.len()).rev() {
        c[axis] = k % dims[axis];
        k /= dims[axis];
    }
    c
}
