//! Interface fluxes from upwinded kinetic densities.
//!
//! At an interface with left state `L`, right state `R` and potential jump
//! `dW = W_R - W_L`, let `J = 2 g dW`. Particles of `L` moving right leave
//! freely; particles of `R` moving left cross the jump if their kinetic
//! energy allows, otherwise the left cell sees its own reflected density.
//! Seen from either side this gives
//!
//! ```text
//! mass     = int_{xi > sqrt(J+)} xi M_L - int_{xi > sqrt((-J)+)} xi M_R(-xi)
//! mom_left = int_{xi > 0} xi^2 M_L + int_0^{sqrt(J+)} xi^2 M_L + T2(M_R(-.), J)
//! ```
//!
//! and `mom_right` by the mirrored construction with `J -> -J`. The mass flux
//! is the same from both sides; the momentum fluxes differ by the hydrostatic
//! reaction of the jump.

use rayon::prelude::*;

use crate::kinetic::{transmitted_positive, upper_tail, KineticDensity};
use crate::potential::PotentialField;
use crate::scenario::{Boundary, BoundaryKind};
use crate::state::State;

/// Flux through one interface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceFlux {
    /// Mass flux, shared by both neighbours.
    pub mass: f64,
    /// Momentum flux seen by the left cell.
    pub momentum_left: f64,
    /// Momentum flux seen by the right cell.
    pub momentum_right: f64,
}

impl InterfaceFlux {
    pub const ZERO: InterfaceFlux = InterfaceFlux {
        mass: 0.0,
        momentum_left: 0.0,
        momentum_right: 0.0,
    };
}

/// Height and velocity of one side of an interface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Side {
    pub h: f64,
    pub u: f64,
}

impl Side {
    pub fn new(h: f64, u: f64) -> Self {
        Self { h, u }
    }

    fn of(state: &State, i: usize) -> Self {
        if state.is_wet(i) {
            Self::new(state.heights()[i], state.velocity(i))
        } else {
            Self::new(0.0, 0.0)
        }
    }
}

/// Momentum delivered to the upstream side `a` of a jump `jump` towards `b`.
fn momentum_seen_by(a: &KineticDensity, b_mirrored: &KineticDensity, jump: f64) -> f64 {
    let mut total = upper_tail(a, 2, 0.0);
    if jump > 0.0 {
        total += upper_tail(a, 2, 0.0) - upper_tail(a, 2, jump.sqrt());
    }
    total + transmitted_positive(b_mirrored, 2, jump)
}

/// Flux at an interface with potential jump `dw = W_right - W_left`.
///
/// Heights at or below zero are dry and contribute nothing.
pub fn interface_flux(left: Side, right: Side, dw: f64, g: f64) -> InterfaceFlux {
    if left.h <= 0.0 && right.h <= 0.0 {
        return InterfaceFlux::ZERO;
    }
    let l = KineticDensity::new(left.h.max(0.0), left.u, g);
    let r = KineticDensity::new(right.h.max(0.0), right.u, g);
    let r_m = r.mirrored();
    let jump = 2.0 * g * dw;

    let mass =
        upper_tail(&l, 1, jump.max(0.0).sqrt()) - upper_tail(&r_m, 1, (-jump).max(0.0).sqrt());
    let momentum_left = momentum_seen_by(&l, &r_m, jump);
    let momentum_right = momentum_seen_by(&r_m, &l, -jump);
    InterfaceFlux {
        mass,
        momentum_left,
        momentum_right,
    }
}

/// Fluxes at all `N + 1` interfaces, interface `k` lying between cells
/// `k - 1` and `k`.
///
/// Ghost cells: periodic wraps state and jump, wall mirrors `(h, -u)`,
/// outflow copies `(h, u)`; wall and outflow use a zero jump.
pub fn all_fluxes(
    state: &State,
    w: &PotentialField,
    boundary: &Boundary,
    g: f64,
) -> Vec<InterfaceFlux> {
    let n = state.len();
    let ghost = |kind: BoundaryKind, s: Side| match kind {
        BoundaryKind::Wall => Side::new(s.h, -s.u),
        _ => s,
    };
    let flux_at = |k: usize| -> InterfaceFlux {
        if k > 0 && k < n {
            return interface_flux(
                Side::of(state, k - 1),
                Side::of(state, k),
                w.forward_jump(k - 1),
                g,
            );
        }
        if boundary.is_periodic() {
            return interface_flux(
                Side::of(state, n - 1),
                Side::of(state, 0),
                w.forward_jump(n - 1),
                g,
            );
        }
        if k == 0 {
            let inner = Side::of(state, 0);
            interface_flux(ghost(boundary.left, inner), inner, 0.0, g)
        } else {
            let inner = Side::of(state, n - 1);
            interface_flux(inner, ghost(boundary.right, inner), 0.0, g)
        }
    };
    (0..=n).into_par_iter().map(flux_at).collect()
}
