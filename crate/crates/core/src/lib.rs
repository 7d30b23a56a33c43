// `!(x > 0.0)` style tests are deliberate: they reject NaN too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod diagnostics;
pub mod error;
pub mod fluxes;
pub mod grid;
pub mod io;
pub mod kinetic;
pub mod potential;
pub mod quadrature;
pub mod scenario;
pub mod scenarios;
pub mod sources;
pub mod state;
pub mod stepper;
pub mod topography;
pub mod trajectory;
pub mod verify;
