//! Decay functions `F` on a finite metric graph, their uniform ℓ¹ norm and
//! the least convolution constant `C_F` valid on the graph.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::MetricGraph;

/// `F₀(r) = (1 + r)^{-(ν + ε)}`
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLaw {
    pub nu: f64,
    pub eps: f64,
}

impl PowerLaw {
    pub fn new(nu: f64, eps: f64) -> Result<Self> {
        if !(nu > 0.0 && nu.is_finite()) || !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::InvalidFFunction(format!(
                "power law needs ν > 0 and ε > 0, got ν = {nu}, ε = {eps}"
            )));
        }
        Ok(Self { nu, eps })
    }

    pub fn eval(&self, r: f64) -> f64 {
        (1.0 + r).powf(-(self.nu + self.eps))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FFunction {
    /// `(1 + r)^{-(ν+ε)}`
    PowerLaw(PowerLaw),
    /// `e^{-a r^θ} F₀(r)`
    Weighted { a: f64, theta: f64, base: PowerLaw },
    /// `e^{-a r / ln(1+r)²} F₀(r)`, with value `F₀(0)` at `r = 0`
    LogWeighted { a: f64, base: PowerLaw },
}

/// Sub-additive exponent `g(r) = r^θ`.
pub fn stretched_exponent(r: f64, theta: f64) -> f64 {
    r.powf(theta)
}

/// Sub-additive exponent `g(r) = r / ln(1+r)²`, set to 0 at `r = 0`.
pub fn log_exponent(r: f64) -> f64 {
    if r == 0.0 {
        0.0
    } else {
        let l = r.ln_1p();
        r / (l * l)
    }
}

impl FFunction {
    pub fn power_law(nu: f64, eps: f64) -> Result<Self> {
        Ok(Self::PowerLaw(PowerLaw::new(nu, eps)?))
    }

    pub fn weighted(a: f64, theta: f64, base: PowerLaw) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidFFunction(format!("weight rate a must be positive, got {a}")));
        }
        if !(theta > 0.0 && theta <= 1.0) {
            return Err(Error::InvalidFFunction(format!("θ must lie in (0, 1], got {theta}")));
        }
        Ok(Self::Weighted { a, theta, base })
    }

    pub fn log_weighted(a: f64, base: PowerLaw) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidFFunction(format!("weight rate a must be positive, got {a}")));
        }
        Ok(Self::LogWeighted { a, base })
    }

    pub fn base(&self) -> PowerLaw {
        match *self {
            FFunction::PowerLaw(p) => p,
            FFunction::Weighted { base, .. } | FFunction::LogWeighted { base, .. } => base,
        }
    }

    /// `(a, F₀)` when `F = e^{-a r} F₀`, i.e. the exponential form applies.
    pub fn exponential_split(&self) -> Option<(f64, FFunction)> {
        match *self {
            FFunction::Weighted { a, theta: 1.0, base } => {
                Some((a, FFunction::PowerLaw(base)))
            }
            _ => None,
        }
    }

    pub fn eval(&self, r: f64) -> f64 {
        match *self {
            FFunction::PowerLaw(p) => p.eval(r),
            FFunction::Weighted { a, theta, base } => {
                (-a * stretched_exponent(r, theta)).exp() * base.eval(r)
            }
            FFunction::LogWeighted { a, base } => (-a * log_exponent(r)).exp() * base.eval(r),
        }
    }

    #[inline]
    pub fn at(&self, d: u32) -> f64 {
        self.eval(d as f64)
    }

    /// `F(d)` for every integer distance `0..=diameter`.
    pub fn table(&self, g: &MetricGraph) -> Vec<f64> {
        (0..=g.diameter()).map(|d| self.at(d)).collect()
    }

    /// `sup_y Σ_x F(d(x, y))` on the finite graph.
    pub fn norm_1(&self, g: &MetricGraph) -> f64 {
        let table = self.table(g);
        let n = g.n_sites();
        (0..n)
            .map(|y| (0..n).map(|x| table[g.dist(x, y) as usize]).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Least `C_F` with `Σ_z F(d(x,z)) F(d(z,y)) ≤ C_F F(d(x,y))` for all
    /// pairs on the graph.
    pub fn convolution_constant(&self, g: &MetricGraph) -> f64 {
        let table = self.table(g);
        let n = g.n_sites();
        let mut best: f64 = 0.0;
        for x in 0..n {
            for y in x..n {
                let conv: f64 = (0..n)
                    .map(|z| table[g.dist(x, z) as usize] * table[g.dist(z, y) as usize])
                    .sum();
                best = best.max(conv / table[g.dist(x, y) as usize]);
            }
        }
        best
    }

    /// Whether `F` is non-increasing on the integer distances of `g`.
    pub fn is_non_increasing_on(&self, g: &MetricGraph) -> bool {
        self.table(g).windows(2).all(|w| w[1] <= w[0])
    }

    pub fn certify(&self, g: &MetricGraph) -> Result<FCertificate> {
        let table = self.table(g);
        if let Some((d, v)) = table.iter().enumerate().find(|(_, v)| !(**v > 0.0 && v.is_finite())) {
            return Err(Error::InvalidFFunction(format!(
                "F({d}) = {v:e} is not a positive finite number"
            )));
        }
        let norm1 = self.norm_1(g);
        let c_f = self.convolution_constant(g);
        if !(norm1.is_finite() && c_f.is_finite() && norm1 > 0.0 && c_f > 0.0) {
            return Err(Error::InvalidFFunction(format!(
                "certificate not finite: ‖F‖₁ = {norm1:e}, C_F = {c_f:e}"
            )));
        }
        Ok(FCertificate { norm1, c_f, non_increasing: self.is_non_increasing_on(g) })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FCertificate {
    pub norm1: f64,
    pub c_f: f64,
    /// Monotone decay on the graph's distance range; reported, not enforced.
    pub non_increasing: bool,
}
