//! Numerical integration helpers.
//!
//! Two independent families live here:
//!
//! * [`sine_mapped`]: fixed Gauss-Legendre on `x = c + d sin(theta)`, which
//!   turns square-root endpoint behaviour into an analytic integrand. The
//!   kinetic flux uses it for the velocity-dependent part of transmitted
//!   moments.
//! * [`adaptive`]: globally adaptive Gauss-Kronrod (7/15) on the raw
//!   integrand. It shares no code with the closed forms or with the
//!   sine-mapped rule and serves as the reference integrator in tests and in
//!   the `verify` suites.

use std::collections::BinaryHeap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

/// Number of Gauss-Legendre nodes used by [`sine_mapped`].
pub const GAUSS_NODES: usize = 32;

/// Gauss-Legendre nodes and weights on `[-1, 1]` computed by Newton iteration
/// on the three-term recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_n(x), p0 = P_{n-1}(x)
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Gauss-Legendre rule composed with `t -> sin(pi t / 2)`: mapped nodes and
/// weights already multiplied by the Jacobian `pi/2 cos(pi t / 2)`.
struct MappedRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

fn mapped_rule() -> &'static MappedRule {
    static RULE: OnceLock<MappedRule> = OnceLock::new();
    RULE.get_or_init(|| {
        let (t, w) = gauss_legendre(GAUSS_NODES);
        let (nodes, weights) = t
            .iter()
            .zip(&w)
            .map(|(t, w)| {
                let (s, c) = (FRAC_PI_2 * t).sin_cos();
                (s, w * c * FRAC_PI_2)
            })
            .unzip();
        MappedRule { nodes, weights }
    })
}

/// Integrates `f` over `[a, b]` after the substitution
/// `x = (a+b)/2 + (b-a)/2 sin(theta)`.
///
/// Functions behaving like `sqrt(x - a)` or `sqrt(b - x)` at the ends become
/// analytic in `theta`, so the fixed rule converges geometrically.
pub fn sine_mapped<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let rule = mapped_rule();
    let c = 0.5 * (a + b);
    let d = 0.5 * (b - a);
    let mut sum = 0.0;
    for (s, w) in rule.nodes.iter().zip(&rule.weights) {
        sum += w * f((c + d * s).clamp(a, b));
    }
    sum * d
}

// Kronrod 15-point extension of the 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn kronrod_segment<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let pair = f(c - dx) + f(c + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Globally adaptive Gauss-Kronrod integration of `f` over a finite `[a, b]`.
///
/// Bisects the segment with the largest error estimate until the summed
/// estimate drops below `tol` (absolute) or `max_segments` is reached.
pub fn adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64, max_segments: usize) -> f64 {
    if b <= a {
        return 0.0;
    }
    let mut heap = BinaryHeap::new();
    let (v, e) = kronrod_segment(&f, a, b);
    let mut total_err = e;
    heap.push(Segment {
        a,
        b,
        value: v,
        err: e,
    });
    while total_err > tol && heap.len() < max_segments {
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            heap.push(worst);
            break;
        }
        let (v1, e1) = kronrod_segment(&f, worst.a, mid);
        let (v2, e2) = kronrod_segment(&f, mid, worst.b);
        total_err += e1 + e2 - worst.err;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: v1,
            err: e1,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: v2,
            err: e2,
        });
    }
    let mut parts: Vec<f64> = heap.into_iter().map(|s| s.value).collect();
    parts.sort_by(|x, y| x.abs().total_cmp(&y.abs()));
    parts.iter().sum()
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err).is_eq()
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(GAUSS_NODES);
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
        // degree 2n-1 = 63 is exact; check x^40
        let approx: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(40)).sum();
        assert!((approx - 2.0 / 41.0).abs() < 1e-14);
    }

    #[test]
    fn odd_rule_has_zero_node() {
        let (x, w) = gauss_legendre(7);
        assert_eq!(x[3], 0.0);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn sine_map_handles_semicircle() {
        let area = sine_mapped(|x| (1.0 - x * x).max(0.0).sqrt(), -1.0, 1.0);
        assert!((area - PI / 2.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_reaches_tolerance_on_endpoint_singularity() {
        let area = adaptive(|x| (1.0 - x * x).max(0.0).sqrt(), -1.0, 1.0, 1e-12, 5000);
        assert!((area - PI / 2.0).abs() < 1e-10);
        let smooth = adaptive(f64::exp, 0.0, 1.0, 1e-14, 100);
        assert!((smooth - (1f64.exp() - 1.0)).abs() < 1e-14);
    }
}
