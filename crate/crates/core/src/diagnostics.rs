use crate::potential::{friction_k0, friction_recharge};
use crate::scenario::{FrictionParams, ModelVariant};
use crate::sources::SourceRates;
use crate::state::State;
use crate::stepper::{ordered_sum, StepReport};

/// `E = h u^2 / 2 + g h^2 / 2`.
pub fn entropy(h: f64, u: f64, g: f64) -> f64 {
    0.5 * h * u * u + 0.5 * g * h * h
}

/// Entropy flux `(E + g h^2 / 2) u`.
pub fn entropy_flux(h: f64, u: f64, g: f64) -> f64 {
    (entropy(h, u, g) + 0.5 * g * h * h) * u
}

/// `psi = u^2 / 2 + g h + g Z`.
pub fn total_head(h: f64, u: f64, z: f64, g: f64) -> f64 {
    0.5 * u * u + g * h + g * z
}

/// `K = h u^2 / 2`.
pub fn kinetic_energy(h: f64, u: f64) -> f64 {
    0.5 * h * u * u
}

/// Characteristic speeds `u -+ sqrt(g h)`.
pub fn wave_speeds(h: f64, u: f64, g: f64) -> (f64, f64) {
    let c = (g * h.max(0.0)).sqrt();
    (u - c, u + c)
}

/// Right-hand side of the entropy balance at one cell.
///
/// Extended: `S (u^2/2 + g h) - g h u Z_x - (f_R + f_I + k0) u^2`.
/// Legacy: `-S (u^2/2 - g h) - g h u Z_x - k0 u^2`.
pub fn entropy_source(
    h: f64,
    u: f64,
    zx: f64,
    rain: f64,
    infiltration: f64,
    fp: &FrictionParams,
    g: f64,
) -> f64 {
    let s = rain - infiltration;
    let k0 = friction_k0(u, fp);
    match fp.model {
        ModelVariant::Extended => {
            let (f_r, f_i) = friction_recharge(fp.alpha, rain, infiltration);
            s * (0.5 * u * u + g * h) - g * h * u * zx - (f_r + f_i + k0) * u * u
        }
        ModelVariant::Legacy => -s * (0.5 * u * u - g * h) - g * h * u * zx - k0 * u * u,
    }
}

/// Threshold on `alpha` separating entropy decay from growth when water enters:
///
/// ```text
/// [S (u^2/2 + g h) - g h u Z_x - k0 u^2] / [R u^2 - min(0, I) u^2]
/// ```
///
/// `None` when the denominator vanishes (no velocity or no incoming water).
#[allow(clippy::too_many_arguments)]
pub fn alpha_threshold(
    s: f64,
    u: f64,
    h: f64,
    zx: f64,
    rain: f64,
    infiltration: f64,
    fp: &FrictionParams,
    g: f64,
) -> Option<f64> {
    let denominator = rain * u * u - infiltration.min(0.0) * u * u;
    if denominator == 0.0 {
        return None;
    }
    let k0 = friction_k0(u, fp);
    Some((s * (0.5 * u * u + g * h) - g * h * u * zx - k0 * u * u) / denominator)
}

/// Whether the legacy model's entropy inequality can hold at this state:
/// `2 g h (S - u Z_x) <= u^2 (S + 2 k0)`, i.e. `h <= u^2 (S + 2k0) / (2g (S - u Z_x))`
/// when the denominator is positive and `>=` when it is negative.
///
/// `None` when `S = u Z_x`.
pub fn legacy_entropy_condition(h: f64, u: f64, s: f64, zx: f64, k0: f64, g: f64) -> Option<bool> {
    let d = s - u * zx;
    if d == 0.0 {
        return None;
    }
    Some(2.0 * g * h * d <= u * u * (s + 2.0 * k0))
}

/// Cell-wise discrete entropy balance of one step.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyBalance {
    /// `(E^{n+1} - E^n)/dt + (Phi_{i+1} - Phi_{i-1}) / (2 dx)`.
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
    /// `lhs - rhs`.
    pub residual: Vec<f64>,
    /// Truncation-scaled tolerance for sign checks.
    pub tolerance: Vec<f64>,
    /// Cells wet before and after the step; others are not assessed.
    pub assessed: Vec<bool>,
}

fn neighbours(i: usize, n: usize, periodic: bool) -> (usize, usize) {
    if periodic {
        ((i + n - 1) % n, (i + 1) % n)
    } else {
        (i.saturating_sub(1), (i + 1).min(n - 1))
    }
}

/// Centred difference of `Z`, wrapped when periodic and one-sided at the ends otherwise.
pub fn bed_slope(z: &[f64], dx: f64, periodic: bool) -> Vec<f64> {
    let n = z.len();
    (0..n)
        .map(|i| {
            let (l, r) = neighbours(i, n, periodic);
            let span = if periodic || l + 2 == r { 2.0 * dx } else { dx };
            (z[r] - z[l]) / span
        })
        .collect()
}

/// Discrete entropy balance between two consecutive states.
///
/// The tolerance at cell `i` is ten times the truncation estimate
///
/// ```text
/// a |E_{i+1} - 2E_i + E_{i-1}| / dx + |Phi_{i+1} - 2Phi_i + Phi_{i-1}| / dx + dt g S_i^2 / 2
/// ```
///
/// (numerical diffusion of the upwind flux, curvature of the entropy flux and
/// the explicit source defect), plus a rounding floor.
#[allow(clippy::too_many_arguments)]
pub fn entropy_residual(
    prev: &State,
    next: &State,
    dt: f64,
    dx: f64,
    sources: &SourceRates,
    z: &[f64],
    fp: &FrictionParams,
    g: f64,
    periodic: bool,
) -> EntropyBalance {
    let n = prev.len();
    let u0 = prev.velocities();
    let h0 = prev.heights();
    let e0: Vec<f64> = (0..n).map(|i| entropy(h0[i], u0[i], g)).collect();
    let phi: Vec<f64> = (0..n).map(|i| entropy_flux(h0[i], u0[i], g)).collect();
    let e1: Vec<f64> = (0..n)
        .map(|i| entropy(next.heights()[i], next.velocity(i), g))
        .collect();
    let zx = bed_slope(z, dx, periodic);
    let speed = (0..n)
        .map(|i| u0[i].abs() + (2.0 * g * h0[i]).sqrt())
        .fold(0.0, f64::max);
    let eps = f64::EPSILON;

    let mut out = EntropyBalance {
        lhs: vec![0.0; n],
        rhs: vec![0.0; n],
        residual: vec![0.0; n],
        tolerance: vec![0.0; n],
        assessed: vec![false; n],
    };
    for i in 0..n {
        let (l, r) = neighbours(i, n, periodic);
        let span = if periodic || l + 2 == r { 2.0 * dx } else { dx };
        let lhs = (e1[i] - e0[i]) / dt + (phi[r] - phi[l]) / span;
        let rhs = entropy_source(
            h0[i],
            u0[i],
            zx[i],
            sources.rain[i],
            sources.infiltration[i],
            fp,
            g,
        );
        let s = sources.net[i];
        let tau = speed * (e0[r] - 2.0 * e0[i] + e0[l]).abs() / dx
            + (phi[r] - 2.0 * phi[i] + phi[l]).abs() / dx
            + 0.5 * dt * g * s * s;
        let floor =
            64.0 * eps * ((e1[i].abs() + e0[i].abs()) / dt + (phi[r].abs() + phi[l].abs()) / span);
        out.lhs[i] = lhs;
        out.rhs[i] = rhs;
        out.residual[i] = lhs - rhs;
        out.tolerance[i] = 10.0 * tau + floor;
        out.assessed[i] = prev.is_wet(i) && next.is_wet(i);
    }
    out
}

/// Sign-condition outcome of one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SignCheck {
    /// Cells with `S < 0` whose entropy LHS exceeds its tolerance.
    pub decay_violations: usize,
    /// Cells with `S > 0` where the LHS sign contradicts the `alpha` threshold.
    pub threshold_violations: usize,
}

/// Checks the entropy sign conditions for losing (`S < 0`) and gaining (`S > 0`) cells.
pub fn sign_check(
    balance: &EntropyBalance,
    prev: &State,
    sources: &SourceRates,
    zx: &[f64],
    fp: &FrictionParams,
    g: f64,
) -> SignCheck {
    let mut out = SignCheck::default();
    if fp.model == ModelVariant::Legacy {
        return out;
    }
    for i in (0..prev.len()).filter(|&i| balance.assessed[i]) {
        let s = sources.net[i];
        let (lhs, tol) = (balance.lhs[i], balance.tolerance[i]);
        if s < 0.0 {
            if lhs > tol {
                out.decay_violations += 1;
            }
        } else if s > 0.0 {
            let u = prev.velocity(i);
            let h = prev.heights()[i];
            if let Some(t) = alpha_threshold(
                s,
                u,
                h,
                zx[i],
                sources.rain[i],
                sources.infiltration[i],
                fp,
                g,
            ) {
                if (fp.alpha > t && lhs > tol) || (fp.alpha < t && lhs < -tol) {
                    out.threshold_violations += 1;
                }
            }
        }
    }
    out
}

/// Per-time energy summary.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyRecord {
    pub time: f64,
    pub entropy: Vec<f64>,
    pub total_entropy: f64,
    pub kinetic: Vec<f64>,
    pub total_kinetic: f64,
}

pub fn energy_record(state: &State, time: f64, dx: f64, g: f64) -> EnergyRecord {
    let n = state.len();
    let h = state.heights();
    let entropy: Vec<f64> = (0..n)
        .map(|i| entropy(h[i], state.velocity(i), g))
        .collect();
    let kinetic: Vec<f64> = (0..n)
        .map(|i| kinetic_energy(h[i], state.velocity(i)))
        .collect();
    EnergyRecord {
        time,
        total_entropy: ordered_sum(&entropy) * dx,
        total_kinetic: ordered_sum(&kinetic) * dx,
        entropy,
        kinetic,
    }
}

/// Cumulative budget error after each step:
/// `(M_n - M_0) - sum_{k<n} (source_k - outflow_k + clamp_k)`.
pub fn mass_audit(initial_mass: f64, masses: &[f64], reports: &[StepReport]) -> Vec<f64> {
    let mut budget = Vec::with_capacity(reports.len());
    masses
        .iter()
        .zip(reports)
        .map(|(m, r)| {
            budget.push(r.source_mass);
            budget.push(-r.boundary_outflow);
            budget.push(r.clamp_mass);
            (m - initial_mass) - ordered_sum(&budget)
        })
        .collect()
}
