//! Closed forms for uniform rain on a flat periodic channel with
//! `h(0) = q(0) = 1` and unit rain rate, and the regime table they imply.

/// `(h, q, u) = (t + 1, (t + 1)^(1 - alpha), (t + 1)^(-alpha))`.
pub fn uniform_rain_exact(t: f64, alpha: f64) -> (f64, f64, f64) {
    let h = t + 1.0;
    (h, h.powf(1.0 - alpha), h.powf(-alpha))
}

/// `dK/dt = (1/2 - alpha) (t + 1)^(-2 alpha)`.
pub fn kinetic_energy_rate(t: f64, alpha: f64) -> f64 {
    (0.5 - alpha) * (t + 1.0).powf(-2.0 * alpha)
}

/// Sign of a rate of change.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trend {
    Decreasing,
    Constant,
    Increasing,
}

impl Trend {
    /// Classifies `delta` against `tolerance`.
    pub fn of(delta: f64, tolerance: f64) -> Trend {
        if delta > tolerance {
            Trend::Increasing
        } else if delta < -tolerance {
            Trend::Decreasing
        } else {
            Trend::Constant
        }
    }
}

/// The seven friction regimes, with `alpha = 0, 1/2, 1` as their own labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `alpha < 0`
    Negative,
    /// `alpha = 0`
    Zero,
    /// `0 < alpha < 1/2`
    BelowHalf,
    /// `alpha = 1/2`
    Half,
    /// `1/2 < alpha < 1`
    BelowOne,
    /// `alpha = 1`
    One,
    /// `alpha > 1`
    AboveOne,
}

impl Regime {
    /// Roman numeral used for the regimes.
    pub fn label(self) -> &'static str {
        match self {
            Regime::Negative => "i",
            Regime::Zero => "ii",
            Regime::BelowHalf => "iii",
            Regime::Half => "iv",
            Regime::BelowOne => "v",
            Regime::One => "vi",
            Regime::AboveOne => "vii",
        }
    }

    /// Expected trends of `(q, u, K)`.
    pub fn trends(self) -> (Trend, Trend, Trend) {
        use Trend::*;
        match self {
            Regime::Negative => (Increasing, Increasing, Increasing),
            Regime::Zero => (Increasing, Constant, Increasing),
            Regime::BelowHalf => (Increasing, Decreasing, Increasing),
            Regime::Half => (Increasing, Decreasing, Constant),
            Regime::BelowOne => (Increasing, Decreasing, Decreasing),
            Regime::One => (Constant, Decreasing, Decreasing),
            Regime::AboveOne => (Decreasing, Decreasing, Decreasing),
        }
    }
}

pub fn classify_regime(alpha: f64) -> Regime {
    if alpha < 0.0 {
        Regime::Negative
    } else if alpha == 0.0 {
        Regime::Zero
    } else if alpha < 0.5 {
        Regime::BelowHalf
    } else if alpha == 0.5 {
        Regime::Half
    } else if alpha < 1.0 {
        Regime::BelowOne
    } else if alpha == 1.0 {
        Regime::One
    } else {
        Regime::AboveOne
    }
}

/// One sample `(t, h, q, u)` of the reference trajectory.
pub type Sample = (f64, f64, f64, f64);

/// Classical RK4 on `h' = 1, q' = (1 - alpha) q / h` from `h = q = 1`,
/// `steps + 1` samples on `[0, final_time]`.
pub fn ode_reference(alpha: f64, final_time: f64, steps: usize) -> Vec<Sample> {
    let dt = final_time / steps as f64;
    let rhs = |h: f64, q: f64| (1.0, (1.0 - alpha) * q / h);
    let (mut h, mut q) = (1.0f64, 1.0f64);
    let mut out = Vec::with_capacity(steps + 1);
    out.push((0.0, h, q, q / h));
    for n in 0..steps {
        let k1 = rhs(h, q);
        let k2 = rhs(h + 0.5 * dt * k1.0, q + 0.5 * dt * k1.1);
        let k3 = rhs(h + 0.5 * dt * k2.0, q + 0.5 * dt * k2.1);
        let k4 = rhs(h + dt * k3.0, q + dt * k3.1);
        h += dt / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        q += dt / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        out.push(((n + 1) as f64 * dt, h, q, q / h));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_examples() {
        for a in [-1.0, 0.0, 0.5, 3.0] {
            assert_eq!(uniform_rain_exact(0.0, a), (1.0, 1.0, 1.0));
        }
        assert_eq!(uniform_rain_exact(1.0, 1.0), (2.0, 1.0, 0.5));
        assert_eq!(uniform_rain_exact(3.0, 0.0), (4.0, 4.0, 1.0));
    }

    #[test]
    fn energy_rate_examples() {
        assert_eq!(kinetic_energy_rate(2.3, 0.5), 0.0);
        assert_eq!(kinetic_energy_rate(0.0, 0.0), 0.5);
        assert_eq!(kinetic_energy_rate(1.0, 1.0), -0.125);
        assert_eq!(kinetic_energy_rate(0.0, 2.0), -1.5);
    }

    #[test]
    fn regime_examples() {
        use Trend::*;
        assert_eq!(
            classify_regime(-1.0).trends(),
            (Increasing, Increasing, Increasing)
        );
        assert_eq!(
            classify_regime(1.0).trends(),
            (Constant, Decreasing, Decreasing)
        );
        assert_eq!(
            classify_regime(5.0).trends(),
            (Decreasing, Decreasing, Decreasing)
        );
        assert_eq!(classify_regime(0.5), Regime::Half);
        assert_eq!(classify_regime(0.5).label(), "iv");
    }

    #[test]
    fn reference_ode_matches_closed_forms() {
        let q1 = ode_reference(1.0, 1.0, 1000).last().unwrap().2;
        assert!((q1 - 1.0).abs() < 1e-8);
        let u2 = ode_reference(2.0, 1.0, 1000).last().unwrap().3;
        assert!((u2 - 0.25).abs() < 1e-8);
        assert!(ode_reference(0.0, 2.0, 1000)
            .iter()
            .all(|s| (s.1 - s.2).abs() < 1e-13));
    }
}
