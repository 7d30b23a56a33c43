use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform cell decomposition of `[0, L]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    length: f64,
    dx: f64,
    centers: Vec<f64>,
}

/// Serializable grid description.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub length: f64,
    pub cells: usize,
}

impl GridSpec {
    pub fn build(&self) -> Result<Grid> {
        build_grid(self.length, self.cells)
    }
}

/// Builds `N` cells of width `L/N`; cell `i` is centred at `(i + 1/2) dx`.
pub fn build_grid(length: f64, cells: usize) -> Result<Grid> {
    if !(length.is_finite() && length > 0.0) {
        return Err(Error::invalid(
            "grid.length",
            format!("must be positive, got {length}"),
        ));
    }
    if cells < 2 {
        return Err(Error::invalid(
            "grid.cells",
            format!("need at least 2 cells, got {cells}"),
        ));
    }
    let dx = length / cells as f64;
    let centers = (0..cells).map(|i| (i as f64 + 0.5) * dx).collect();
    Ok(Grid {
        length,
        dx,
        centers,
    })
}

impl Grid {
    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn cells(&self) -> usize {
        self.centers.len()
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    pub fn center(&self, i: usize) -> f64 {
        self.centers[i]
    }

    /// Index of the cell containing `x`; points on the right end map to the last cell.
    pub fn locate(&self, x: f64) -> Option<usize> {
        if !(0.0..=self.length).contains(&x) {
            return None;
        }
        Some(((x / self.dx) as usize).min(self.cells() - 1))
    }

    pub fn spec(&self) -> GridSpec {
        GridSpec {
            length: self.length,
            cells: self.cells(),
        }
    }
}
