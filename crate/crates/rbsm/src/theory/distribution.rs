//! Orientation distributions of the contact angle `chi`.
//!
//! In 2D the angle lives on `[-π, π]` and its density must be symmetric
//! around zero; in 3D it lives on `[0, π]` with the solid-angle weight
//! already folded into the density.

use super::TheoryError;
use rand::Rng;
use std::f64::consts::PI;

#[derive(Clone, Debug)]
pub enum ChiVariant {
    /// All directions within `|chi| <= gamma` equally probable.
    Cone { gamma: f64 },
    /// Piecewise linear density tabulated on a uniform grid.
    Tabulated { grid: Vec<f64>, density: Vec<f64> },
    /// Contact vector parallel to the normal (`chi = 0`).
    DiracParallel,
    /// Contact vector perpendicular to the normal (`chi = ±π/2`).
    DiracPerpendicular,
}

#[derive(Clone, Debug)]
pub struct OrientationDistribution {
    pub variant: ChiVariant,
    pub dim: usize,
}

impl OrientationDistribution {
    pub fn cone(gamma: f64, dim: usize) -> Result<Self, TheoryError> {
        if !(0.0..=PI).contains(&gamma) {
            return Err(TheoryError::InvalidDistribution(format!(
                "cone half-width must lie in [0, pi], got {gamma}"
            )));
        }
        if dim != 2 && dim != 3 {
            return Err(TheoryError::InvalidDistribution(format!(
                "dimension must be 2 or 3, got {dim}"
            )));
        }
        Ok(OrientationDistribution {
            variant: ChiVariant::Cone { gamma },
            dim,
        })
    }

    pub fn dirac_parallel(dim: usize) -> Self {
        OrientationDistribution {
            variant: ChiVariant::DiracParallel,
            dim,
        }
    }

    pub fn dirac_perpendicular(dim: usize) -> Self {
        OrientationDistribution {
            variant: ChiVariant::DiracPerpendicular,
            dim,
        }
    }

    /// A tabulated density on a uniform grid. The trapezoid integral must be
    /// 1 within 1e-9 and the values non-negative.
    pub fn tabulated(grid: Vec<f64>, density: Vec<f64>, dim: usize) -> Result<Self, TheoryError> {
        if grid.len() != density.len() || grid.len() < 2 {
            return Err(TheoryError::InvalidDistribution(
                "table needs at least two matching grid/density entries".into(),
            ));
        }
        let h = grid[1] - grid[0];
        if h <= 0.0 {
            return Err(TheoryError::InvalidDistribution(
                "grid must be strictly increasing".into(),
            ));
        }
        for w in grid.windows(2) {
            if ((w[1] - w[0]) - h).abs() > 1e-9 * h.abs().max(1.0) {
                return Err(TheoryError::InvalidDistribution(
                    "grid must be uniform".into(),
                ));
            }
        }
        if density.iter().any(|&d| d < 0.0 || !d.is_finite()) {
            return Err(TheoryError::InvalidDistribution(
                "density must be non-negative and finite".into(),
            ));
        }
        let integral = trapezoid(&grid, &density);
        if (integral - 1.0).abs() > 1e-9 {
            return Err(TheoryError::InvalidDistribution(format!(
                "density integrates to {integral}, expected 1"
            )));
        }
        Ok(OrientationDistribution {
            variant: ChiVariant::Tabulated { grid, density },
            dim,
        })
    }

    /// Like [`Self::tabulated`] but rescales the density to unit integral.
    pub fn tabulated_normalized(
        grid: Vec<f64>,
        mut density: Vec<f64>,
        dim: usize,
    ) -> Result<Self, TheoryError> {
        let integral = trapezoid(&grid, &density);
        if !(integral > 0.0) {
            return Err(TheoryError::InvalidDistribution(
                "density integrates to zero".into(),
            ));
        }
        for d in &mut density {
            *d /= integral;
        }
        Self::tabulated(grid, density, dim)
    }

    /// Draw one `chi` sample.
    pub fn sample_chi(&self, rng: &mut impl Rng) -> f64 {
        match &self.variant {
            ChiVariant::Cone { gamma } => {
                if self.dim == 2 {
                    rng.random_range(-1.0..1.0) * gamma
                } else {
                    // inverse CDF of sin(chi)/(1 - cos(gamma)) on [0, gamma]
                    let u: f64 = rng.random();
                    (1.0 - u * (1.0 - gamma.cos())).clamp(-1.0, 1.0).acos()
                }
            }
            ChiVariant::DiracParallel => 0.0,
            ChiVariant::DiracPerpendicular => {
                if self.dim == 2 {
                    if rng.random::<bool>() {
                        PI / 2.0
                    } else {
                        -PI / 2.0
                    }
                } else {
                    PI / 2.0
                }
            }
            ChiVariant::Tabulated { grid, density } => {
                sample_piecewise_linear(grid, density, rng.random())
            }
        }
    }

    /// `I1 = E[cos chi]`.
    pub fn i1(&self) -> f64 {
        match &self.variant {
            ChiVariant::Cone { gamma } => super::predict::cone_i1(*gamma, self.dim),
            ChiVariant::DiracParallel => 1.0,
            ChiVariant::DiracPerpendicular => 0.0,
            ChiVariant::Tabulated { grid, density } => simpson_weighted(grid, density, |x| x.cos()),
        }
    }

    /// `I2 = E[cos 2chi]`.
    pub fn i2(&self) -> f64 {
        match &self.variant {
            ChiVariant::Cone { gamma } => super::predict::cone_i2(*gamma, self.dim),
            ChiVariant::DiracParallel => 1.0,
            ChiVariant::DiracPerpendicular => -1.0,
            ChiVariant::Tabulated { grid, density } => {
                simpson_weighted(grid, density, |x| (2.0 * x).cos())
            }
        }
    }
}

pub(crate) fn trapezoid(grid: &[f64], values: &[f64]) -> f64 {
    grid.windows(2)
        .zip(values.windows(2))
        .map(|(x, v)| 0.5 * (x[1] - x[0]) * (v[0] + v[1]))
        .sum()
}

/// Composite Simpson integral of `f(x) * density(x)` on the table grid.
/// Handles an odd panel count with a trailing trapezoid panel.
fn simpson_weighted(grid: &[f64], density: &[f64], f: impl Fn(f64) -> f64) -> f64 {
    let n = grid.len() - 1; // panels
    let h = grid[1] - grid[0];
    let g = |i: usize| f(grid[i]) * density[i];
    let even_panels = n - (n % 2);
    let mut total = 0.0;
    let mut i = 0;
    while i < even_panels {
        total += h / 3.0 * (g(i) + 4.0 * g(i + 1) + g(i + 2));
        i += 2;
    }
    if n % 2 == 1 {
        total += 0.5 * h * (g(n - 1) + g(n));
    }
    total
}

/// Inverse-CDF sampling of a piecewise linear density on a uniform grid.
fn sample_piecewise_linear(grid: &[f64], density: &[f64], u: f64) -> f64 {
    let h = grid[1] - grid[0];
    let mut cum = 0.0;
    for i in 0..grid.len() - 1 {
        let panel = 0.5 * h * (density[i] + density[i + 1]);
        if u <= cum + panel || i == grid.len() - 2 {
            let rem = (u - cum).max(0.0);
            let d0 = density[i];
            let d1 = density[i + 1];
            let slope = (d1 - d0) / h;
            // Solve d0 t + slope t²/2 = rem for t in [0, h].
            let t = if slope.abs() < 1e-14 * (d0.abs() + 1e-300) || slope.abs() < 1e-300 {
                if d0 > 0.0 {
                    rem / d0
                } else {
                    0.5 * h
                }
            } else {
                let disc = (d0 * d0 + 2.0 * slope * rem).max(0.0);
                (-d0 + disc.sqrt()) / slope
            };
            return grid[i] + t.clamp(0.0, h);
        }
        cum += panel;
    }
    *grid.last().unwrap()
}
