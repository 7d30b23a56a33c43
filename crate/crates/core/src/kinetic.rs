//! Kinetic weight, kinetic density and its exact truncated moments.
//!
//! With the semicircle weight `chi(w) = sqrt((2g - w^2)+) / (pi g)` the
//! kinetic density of a cell with height `h` and velocity `u` is
//!
//! ```text
//! M(xi) = sqrt(h) chi((xi - u) / sqrt(h)) = sqrt((2gh - (xi - u)^2)+) / (pi g)
//! ```
//!
//! i.e. a semicircle of radius `sqrt(2gh)` centred on `u`. Every truncated
//! moment of order 0, 1 or 2 has an arcsine closed form, which is what the
//! flux assembly relies on.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::quadrature;

/// Semicircle kinetic weight, supported on `|w| < sqrt(2g)`.
pub fn chi(omega: f64, g: f64) -> f64 {
    (2.0 * g - omega * omega).max(0.0).sqrt() / (PI * g)
}

/// Height, velocity and gravity defining one kinetic density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KineticDensity {
    pub h: f64,
    pub u: f64,
    pub g: f64,
}

impl KineticDensity {
    pub fn new(h: f64, u: f64, g: f64) -> Self {
        Self { h, u, g }
    }

    /// Half-width `sqrt(2gh)` of the velocity support.
    pub fn radius(&self) -> f64 {
        (2.0 * self.g * self.h.max(0.0)).sqrt()
    }

    /// Support `[u - sqrt(2gh), u + sqrt(2gh)]`, or `None` for a dry cell.
    pub fn support(&self) -> Option<(f64, f64)> {
        (self.h > 0.0).then(|| {
            let r = self.radius();
            (self.u - r, self.u + r)
        })
    }

    /// Same height, velocity negated: the density of `M(-xi)`.
    pub fn mirrored(&self) -> Self {
        Self {
            u: -self.u,
            ..*self
        }
    }

    fn is_empty(&self) -> bool {
        self.h <= 0.0
    }

    /// Evaluates `M(xi)`.
    pub fn value(&self, xi: f64) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        let v = xi - self.u;
        (2.0 * self.g * self.h - v * v).max(0.0).sqrt() / (PI * self.g)
    }
}

/// Evaluates the kinetic density `M(xi)` for the given cell state.
pub fn density(p: &KineticDensity, xi: f64) -> f64 {
    p.value(xi)
}

/// Whether a moment is taken of `M(xi)` or of the reflected `M(-xi)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Argument {
    #[default]
    Direct,
    Reflected,
}

/// `int_lower^upper xi^order M(arg(xi)) dxi`; bounds may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentRequest {
    pub order: u32,
    pub lower: f64,
    pub upper: f64,
    pub argument: Argument,
}

impl MomentRequest {
    pub fn full(order: u32) -> Self {
        Self::between(order, f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn between(order: u32, lower: f64, upper: f64) -> Self {
        Self {
            order,
            lower,
            upper,
            argument: Argument::Direct,
        }
    }

    pub fn reflected(self) -> Self {
        Self {
            argument: Argument::Reflected,
            ..self
        }
    }
}

/// Primitives `[P0, P1, P2]` of `v^m sqrt(r^2 - v^2)` evaluated at `v`
/// (clipped to the support), using `v = r sin(theta)`.
fn semicircle_primitives(r: f64, v: f64) -> [f64; 3] {
    let (s, c, theta) = if v >= r {
        (1.0, 0.0, FRAC_PI_2)
    } else if v <= -r {
        (-1.0, 0.0, -FRAC_PI_2)
    } else {
        let s = v / r;
        let c = ((r - v) * (r + v)).sqrt() / r;
        (s, c, s.asin())
    };
    let r2 = r * r;
    [
        0.5 * r2 * (theta + s * c),
        -r2 * r * c * c * c / 3.0,
        0.125 * r2 * r2 * (theta - s * c * (c * c - s * s)),
    ]
}

/// Exact `int_a^b xi^m M(xi) dxi` for `m <= 2`, `a <= b`.
fn moment_between(p: &KineticDensity, m: u32, a: f64, b: f64) -> f64 {
    if p.is_empty() || b <= a {
        return 0.0;
    }
    let r = p.radius();
    let (va, vb) = (a - p.u, b - p.u);
    if vb <= -r || va >= r {
        return 0.0;
    }
    let lo = semicircle_primitives(r, va);
    let hi = semicircle_primitives(r, vb);
    let d0 = hi[0] - lo[0];
    let d1 = hi[1] - lo[1];
    let d2 = hi[2] - lo[2];
    let u = p.u;
    let raw = match m {
        0 => d0,
        1 => d1 + u * d0,
        _ => d2 + 2.0 * u * d1 + u * u * d0,
    };
    raw / (PI * p.g)
}

/// `int_a^inf xi^m M(xi) dxi`.
pub(crate) fn upper_tail(p: &KineticDensity, m: u32, a: f64) -> f64 {
    moment_between(p, m, a, f64::INFINITY)
}

/// Exact truncated moment of the kinetic density.
///
/// Full-line moments reproduce `[h, hu, hu^2 + gh^2/2]`.
pub fn truncated_moment(p: &KineticDensity, req: &MomentRequest) -> Result<f64> {
    if req.order > 2 {
        return Err(Error::UnsupportedMomentOrder(req.order));
    }
    if req.lower.is_nan() || req.upper.is_nan() || req.lower > req.upper {
        return Err(Error::InvalidBounds {
            lower: req.lower,
            upper: req.upper,
        });
    }
    if p.h < 0.0 || !p.h.is_finite() {
        return Err(Error::invalid(
            "h",
            format!("kinetic density needs h >= 0, got {}", p.h),
        ));
    }
    Ok(match req.argument {
        Argument::Direct => moment_between(p, req.order, req.lower, req.upper),
        Argument::Reflected => {
            // int_a^b xi^m M(-xi) = (-1)^m int_{-b}^{-a} z^m M(z)
            let sign = if req.order.is_multiple_of(2) {
                1.0
            } else {
                -1.0
            };
            sign * moment_between(p, req.order, -req.upper, -req.lower)
        }
    })
}

/// Half-line on which an incoming particle travels after crossing a potential jump.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `xi > 0`, transmitted density `M(+sqrt(xi^2 - jump))`.
    Positive,
    /// `xi < 0`, transmitted density `M(-sqrt(xi^2 - jump))`.
    Negative,
}

impl Side {
    fn sign(self) -> f64 {
        match self {
            Side::Positive => 1.0,
            Side::Negative => -1.0,
        }
    }
}

/// Moment of the density transmitted across a potential jump:
///
/// ```text
/// int_{s xi > 0, xi^2 >= jump} xi^m M(s sqrt(xi^2 - jump)) dxi,   s = sign(side)
/// ```
///
/// `jump` is `2 g dW`. A positive jump is a barrier that slows incoming
/// particles; a negative one accelerates them.
pub fn transmitted_moment(p: &KineticDensity, m: u32, jump: f64, side: Side) -> Result<f64> {
    if m > 2 {
        return Err(Error::UnsupportedMomentOrder(m));
    }
    if !jump.is_finite() {
        return Err(Error::invalid(
            "jump",
            format!("must be finite, got {jump}"),
        ));
    }
    if p.h < 0.0 || !p.h.is_finite() {
        return Err(Error::invalid(
            "h",
            format!("kinetic density needs h >= 0, got {}", p.h),
        ));
    }
    // Substituting xi -> s xi reduces both sides to the positive one.
    let oriented = KineticDensity {
        u: side.sign() * p.u,
        ..*p
    };
    let sign = if m % 2 == 1 { side.sign() } else { 1.0 };
    Ok(sign * transmitted_positive(&oriented, m, jump))
}

/// `int_{k >= sqrt(jump+)} k^m M(sqrt(k^2 - jump)) dk`.
pub(crate) fn transmitted_positive(p: &KineticDensity, m: u32, jump: f64) -> f64 {
    if p.is_empty() {
        return 0.0;
    }
    if jump == 0.0 {
        return upper_tail(p, m, 0.0);
    }
    if m == 1 {
        // k dk = eta deta
        return upper_tail(p, 1, (-jump).max(0.0).sqrt());
    }
    let top = p.u + p.radius();
    if top <= 0.0 || (jump < 0.0 && top * top <= -jump) {
        return 0.0;
    }
    if p.u - p.radius() >= p.radius() {
        return detached(p, m, jump);
    }
    let still = still_part(p, m, jump);
    if p.u == 0.0 {
        return still;
    }
    still + velocity_correction(p, m, jump)
}

/// Transmitted moment of a density whose support lies in `xi > 0` and clear of
/// the zero-velocity one: integrated directly over its support.
fn detached(p: &KineticDensity, m: u32, jump: f64) -> f64 {
    let (lo, hi) = (p.u - p.radius(), p.u + p.radius());
    let km = move |k: f64| if m == 0 { 1.0 } else { k * k };
    if jump >= 0.0 {
        quadrature::sine_mapped(
            |eta| {
                let k = (eta * eta + jump).sqrt();
                km(k) * eta / k * p.value(eta)
            },
            lo,
            hi,
        )
    } else {
        let floor = (-jump).sqrt();
        let to_k = |eta: f64| (eta - floor).max(0.0).sqrt() * (eta + floor).sqrt();
        let lo = if lo > floor { to_k(lo) } else { 0.0 };
        quadrature::sine_mapped(|k| km(k) * p.value((k * k - jump).sqrt()), lo, to_k(hi))
    }
}

/// Transmitted moment of the zero-velocity density with the same height.
///
/// For `u = 0` the transmitted density is itself a semicircle in `k` of
/// squared radius `2gh + jump`, so this part is exact. It is what makes the
/// lake at rest a fixed point.
fn still_part(p: &KineticDensity, m: u32, jump: f64) -> f64 {
    let lifted = p.h + jump / (2.0 * p.g);
    if lifted <= 0.0 {
        return 0.0;
    }
    let shadow = KineticDensity::new(lifted, 0.0, p.g);
    upper_tail(&shadow, m, jump.max(0.0).sqrt())
}

/// Difference between the transmitted moment of `(h, u)` and of `(h, 0)`.
///
/// Not elementary for `u != 0` (elliptic), so it is integrated with the
/// sine-mapped Gauss rule piecewise between the support end points, where the
/// integrand has square-root behaviour. Pieces outside both supports vanish
/// and are skipped.
fn velocity_correction(p: &KineticDensity, m: u32, jump: f64) -> f64 {
    let r = p.radius();
    let moving = *p;
    let still = KineticDensity::new(p.h, 0.0, p.g);
    let diff = move |eta: f64| moving.value(eta) - still.value(eta);
    // the integrand vanishes unless eta meets (-r, r) or (u - r, u + r)
    let live = move |lo: f64, hi: f64| lo < r || (lo < p.u + r && hi > p.u - r);

    let eta_top = (p.u + r).max(r);
    let marks = [p.u - r, p.u + r, r];

    if jump > 0.0 {
        // integrate in eta >= 0 with k = sqrt(eta^2 + jump), dk = eta/k deta
        let weight = move |eta: f64| {
            let k = (eta * eta + jump).sqrt();
            match m {
                0 => eta / k,
                _ => eta * k,
            }
        };
        let mut cuts = Cuts::new();
        cuts.push(0.0);
        cuts.push(eta_top);
        for e in marks.into_iter().filter(|e| *e > 0.0) {
            cuts.push(e);
        }
        cuts.integrate(live, |eta| weight(eta) * diff(eta))
    } else {
        // integrate in k >= 0 with eta = sqrt(k^2 - jump)
        let floor = (-jump).sqrt();
        if eta_top <= floor {
            return 0.0;
        }
        let to_k = |eta: f64| (eta - floor).max(0.0).sqrt() * (eta + floor).sqrt();
        let to_eta = move |k: f64| (k * k - jump).sqrt();
        let mut cuts = Cuts::new();
        cuts.push(0.0);
        cuts.push(to_k(eta_top));
        for e in marks.into_iter().filter(|e| *e > floor) {
            cuts.push(to_k(e));
        }
        cuts.integrate(
            |lo, hi| live(to_eta(lo), to_eta(hi)),
            |k| {
                let km = if m == 0 { 1.0 } else { k * k };
                km * diff(to_eta(k))
            },
        )
    }
}

/// At most five sorted break points on the stack.
struct Cuts {
    points: [f64; 5],
    len: usize,
}

impl Cuts {
    fn new() -> Self {
        Self {
            points: [0.0; 5],
            len: 0,
        }
    }

    fn push(&mut self, x: f64) {
        self.points[self.len] = x;
        self.len += 1;
    }

    /// Sums the sine-mapped rule over consecutive pieces accepted by `live`.
    fn integrate<L: Fn(f64, f64) -> bool, F: Fn(f64) -> f64>(mut self, live: L, f: F) -> f64 {
        let pts = &mut self.points[..self.len];
        pts.sort_by(f64::total_cmp);
        pts.windows(2)
            .filter(|w| w[1] > w[0] && live(w[0], w[1]))
            .map(|w| quadrature::sine_mapped(&f, w[0], w[1]))
            .sum()
    }
}
