use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;

/// Analytic or tabulated bed elevation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum TopographySpec {
    Flat {
        elevation: f64,
    },
    /// `Z(x) = at_origin + slope * x`.
    Linear {
        at_origin: f64,
        slope: f64,
    },
    /// Continuous interpolation through `(x, Z)` points with strictly
    /// increasing `x`; constant beyond the end points.
    PiecewiseLinear {
        points: Vec<[f64; 2]>,
    },
    /// `base + amplitude * exp(-((x - center) / width)^2)`.
    Gaussian {
        base: f64,
        amplitude: f64,
        center: f64,
        width: f64,
    },
    /// One value per cell.
    Cells {
        values: Vec<f64>,
    },
}

impl TopographySpec {
    fn validate(&self) -> Result<()> {
        match self {
            TopographySpec::PiecewiseLinear { points } => {
                if points.len() < 2 {
                    return Err(Error::Topography("piecewise table needs two points".into()));
                }
                if points.iter().flatten().any(|v| !v.is_finite()) {
                    return Err(Error::Topography("non-finite breakpoint".into()));
                }
                if let Some(w) = points.windows(2).find(|w| w[1][0] <= w[0][0]) {
                    return Err(Error::Topography(format!(
                        "breakpoints must increase strictly: {} then {}",
                        w[0][0], w[1][0]
                    )));
                }
            }
            TopographySpec::Gaussian { width, .. } if !(*width > 0.0) => {
                return Err(Error::Topography(format!(
                    "gaussian width must be positive, got {width}"
                )));
            }
            _ => {}
        }
        Ok(())
    }

    /// Evaluates the descriptor at `x`. `Cells` has no pointwise meaning and returns `None`.
    pub fn eval(&self, x: f64) -> Option<f64> {
        Some(match self {
            TopographySpec::Flat { elevation } => *elevation,
            TopographySpec::Linear { at_origin, slope } => at_origin + slope * x,
            TopographySpec::PiecewiseLinear { points } => {
                let first = points.first()?;
                let last = points.last()?;
                if x <= first[0] {
                    first[1]
                } else if x >= last[0] {
                    last[1]
                } else {
                    let k = points.partition_point(|p| p[0] <= x);
                    let (a, b) = (points[k - 1], points[k]);
                    a[1] + (b[1] - a[1]) * (x - a[0]) / (b[0] - a[0])
                }
            }
            TopographySpec::Gaussian {
                base,
                amplitude,
                center,
                width,
            } => {
                let s = (x - center) / width;
                base + amplitude * (-s * s).exp()
            }
            TopographySpec::Cells { .. } => return None,
        })
    }
}

/// Bed elevation sampled at cell centres.
#[derive(Debug, Clone, PartialEq)]
pub struct Topography {
    z: Vec<f64>,
}

impl Topography {
    pub fn from_values(z: Vec<f64>) -> Result<Self> {
        if let Some(i) = z.iter().position(|v| !v.is_finite()) {
            return Err(Error::Topography(format!(
                "non-finite elevation in cell {i}"
            )));
        }
        Ok(Self { z })
    }

    pub fn values(&self) -> &[f64] {
        &self.z
    }

    /// Centred difference of `Z`, one-sided in the first and last cell.
    pub fn slope(&self, dx: f64) -> Vec<f64> {
        let n = self.z.len();
        (0..n)
            .map(|i| {
                if i == 0 {
                    (self.z[1] - self.z[0]) / dx
                } else if i == n - 1 {
                    (self.z[n - 1] - self.z[n - 2]) / dx
                } else {
                    (self.z[i + 1] - self.z[i - 1]) / (2.0 * dx)
                }
            })
            .collect()
    }
}

/// Samples `Z` at every cell centre.
pub fn sample_topography(spec: &TopographySpec, grid: &Grid) -> Result<Topography> {
    spec.validate()?;
    let z = match spec {
        TopographySpec::Cells { values } => {
            if values.len() != grid.cells() {
                return Err(Error::Topography(format!(
                    "{} cell values for a {}-cell grid",
                    values.len(),
                    grid.cells()
                )));
            }
            values.clone()
        }
        _ => grid
            .centers()
            .iter()
            .map(|&x| spec.eval(x).expect("analytic descriptor"))
            .collect(),
    };
    Topography::from_values(z)
}
