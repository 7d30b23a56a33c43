use crate::error::{Error, Result};

/// Heights and discharges at one time level.
///
/// Heights are never negative and a cell at or below the dry threshold
/// carries no discharge.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    h: Vec<f64>,
    q: Vec<f64>,
    h_dry: f64,
}

impl State {
    /// Validates and normalises `(h, q)`: dry cells get `q = 0`.
    pub fn new(h: Vec<f64>, mut q: Vec<f64>, h_dry: f64) -> Result<Self> {
        if h.len() != q.len() {
            return Err(Error::invalid(
                "state",
                format!("height has {} cells, discharge {}", h.len(), q.len()),
            ));
        }
        if !(h_dry > 0.0) {
            return Err(Error::invalid(
                "run.h_dry",
                format!("must be positive, got {h_dry}"),
            ));
        }
        for (i, (&hi, qi)) in h.iter().zip(q.iter_mut()).enumerate() {
            if !(hi >= 0.0 && hi.is_finite()) || !qi.is_finite() {
                return Err(Error::invalid(
                    "state",
                    format!("cell {i} has h = {hi}, q = {qi}"),
                ));
            }
            if hi <= h_dry {
                *qi = 0.0;
            }
        }
        Ok(Self { h, q, h_dry })
    }

    /// Builds a state from already-normalised vectors (the stepper's output).
    pub(crate) fn from_parts(h: Vec<f64>, q: Vec<f64>, h_dry: f64) -> Self {
        debug_assert_eq!(h.len(), q.len());
        Self { h, q, h_dry }
    }

    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }

    pub fn heights(&self) -> &[f64] {
        &self.h
    }

    pub fn discharges(&self) -> &[f64] {
        &self.q
    }

    pub fn h_dry(&self) -> f64 {
        self.h_dry
    }

    pub fn is_wet(&self, i: usize) -> bool {
        self.h[i] > self.h_dry
    }

    /// `q / h` on wet cells, zero on dry ones.
    pub fn velocity(&self, i: usize) -> f64 {
        if self.is_wet(i) {
            self.q[i] / self.h[i]
        } else {
            0.0
        }
    }

    pub fn velocities(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.velocity(i)).collect()
    }

    /// Free surface `h + Z`.
    pub fn free_surface(&self, z: &[f64]) -> Vec<f64> {
        self.h.iter().zip(z).map(|(h, z)| h + z).collect()
    }

    /// `sum h_i dx` in natural cell order.
    pub fn total_mass(&self, dx: f64) -> f64 {
        self.h.iter().sum::<f64>() * dx
    }

    pub fn all_dry(&self) -> bool {
        (0..self.len()).all(|i| !self.is_wet(i))
    }
}
