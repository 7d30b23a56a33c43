use crate::error::{Error, Result};
use crate::scenario::{FrictionParams, ModelVariant, RechargePlacement};
use crate::sources::SourceRates;
use crate::state::State;

/// `k0(u) = kappa_lam + kappa_tur |u|`.
pub fn friction_k0(u: f64, fp: &FrictionParams) -> f64 {
    fp.kappa_lam + fp.kappa_tur * u.abs()
}

/// `(f_R, f_I) = (alpha R, alpha max(0, -I))`.
pub fn friction_recharge(alpha: f64, rain: f64, infiltration: f64) -> (f64, f64) {
    (alpha * rain, alpha * (-infiltration).max(0.0))
}

/// Coefficient `c` of the explicit momentum source `c u`.
pub fn recharge_momentum_rate(net: f64, rain: f64, infiltration: f64, fp: &FrictionParams) -> f64 {
    match (fp.model, fp.recharge_placement) {
        (ModelVariant::Legacy, _) => 0.0,
        (ModelVariant::Extended, RechargePlacement::Potential) => net,
        (ModelVariant::Extended, RechargePlacement::Source) => {
            let (f_r, f_i) = friction_recharge(fp.alpha, rain, infiltration);
            net - (f_r + f_i)
        }
    }
}

/// Which side of cell `i` a jump is taken towards.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// `W = Z + cumulative friction head`, with the per-cell increments kept
/// apart from `Z` so that jumps are formed from local differences.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialField {
    z: Vec<f64>,
    increments: Vec<f64>,
    w: Vec<f64>,
}

impl PotentialField {
    pub fn values(&self) -> &[f64] {
        &self.w
    }

    /// `dx G_i`.
    pub fn increments(&self) -> &[f64] {
        &self.increments
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    /// `W_{i+1} - W_i` evaluated as `(Z_{i+1} - Z_i) + dx G_{i+1}`;
    /// `i = N-1` wraps to cell 0.
    pub(crate) fn forward_jump(&self, i: usize) -> f64 {
        let j = (i + 1) % self.z.len();
        (self.z[j] - self.z[i]) + self.increments[j]
    }
}

/// Builds `W_i = Z_i + sum_{j <= i} dx G_j` with
/// `G_j = (f_R + f_I + k0(u_j)) u_j / (g h_j)` on wet cells and 0 on dry ones.
///
/// `f_R + f_I` enters only for the extended model with the recharge friction
/// placed in the potential.
pub fn build_potential(
    state: &State,
    z: &[f64],
    sources: &SourceRates,
    fp: &FrictionParams,
    dx: f64,
    g: f64,
) -> PotentialField {
    let with_recharge =
        fp.model == ModelVariant::Extended && fp.recharge_placement == RechargePlacement::Potential;
    let increments: Vec<f64> = (0..state.len())
        .map(|j| {
            if !state.is_wet(j) {
                return 0.0;
            }
            let u = state.velocity(j);
            let mut coeff = friction_k0(u, fp);
            if with_recharge {
                let (f_r, f_i) =
                    friction_recharge(fp.alpha, sources.rain[j], sources.infiltration[j]);
                coeff += f_r + f_i;
            }
            if coeff == 0.0 || u == 0.0 {
                0.0
            } else {
                dx * coeff * u / (g * state.heights()[j])
            }
        })
        .collect();
    let mut acc = 0.0;
    let w = z
        .iter()
        .zip(&increments)
        .map(|(zi, inc)| {
            acc += inc;
            zi + acc
        })
        .collect();
    PotentialField {
        z: z.to_vec(),
        increments,
        w,
    }
}

/// Jump from cell `i` towards its neighbour on `side`.
///
/// At the domain ends the neighbour only exists when `periodic` is set.
pub fn delta_w(field: &PotentialField, i: usize, side: Side, periodic: bool) -> Result<f64> {
    let n = field.len();
    if i >= n {
        return Err(Error::invalid("cell", format!("index {i} outside 0..{n}")));
    }
    match side {
        Side::Right if i + 1 < n || periodic => Ok(field.forward_jump(i)),
        Side::Left if i > 0 => Ok(-field.forward_jump(i - 1)),
        Side::Left if periodic => Ok(-field.forward_jump(n - 1)),
        _ => Err(Error::invalid(
            "cell",
            format!("cell {i} has no {side:?} neighbour without boundary extension"),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(alpha: f64, kl: f64, kt: f64) -> FrictionParams {
        FrictionParams {
            kappa_lam: kl,
            kappa_tur: kt,
            ..FrictionParams::frictionless(alpha)
        }
    }

    fn state(h: &[f64], q: &[f64]) -> State {
        State::new(h.to_vec(), q.to_vec(), 1e-10).unwrap()
    }

    #[test]
    fn k0_examples() {
        assert_eq!(friction_k0(0.0, &fp(0.0, 0.1, 0.2)), 0.1);
        assert_eq!(friction_k0(-3.0, &fp(0.0, 0.0, 2.0)), 6.0);
        assert_eq!(friction_k0(7.0, &fp(0.0, 0.0, 0.0)), 0.0);
    }

    #[test]
    fn recharge_friction_examples() {
        assert_eq!(friction_recharge(1.0, 2.0, -3.0), (2.0, 3.0));
        assert_eq!(friction_recharge(1.0, 0.0, 5.0), (0.0, 0.0));
        assert_eq!(friction_recharge(-0.5, 2.0, 0.0), (-1.0, 0.0));
    }

    #[test]
    fn still_or_frictionless_potential_is_topography() {
        let z = [0.3, 0.1, 0.7];
        let src = SourceRates::zero(3);
        let still = build_potential(
            &state(&[1.0; 3], &[0.0; 3]),
            &z,
            &src,
            &fp(1.0, 1.0, 1.0),
            0.5,
            9.81,
        );
        assert_eq!(still.values(), &z);
        let moving = build_potential(
            &state(&[1.0; 3], &[2.0; 3]),
            &z,
            &src,
            &fp(0.0, 0.0, 0.0),
            0.5,
            9.81,
        );
        assert_eq!(moving.values(), &z);
    }

    #[test]
    fn hand_cumulative_sum() {
        let g = 9.81;
        let w = build_potential(
            &state(&[1.0; 2], &[1.0; 2]),
            &[0.0, 0.0],
            &SourceRates::zero(2),
            &fp(0.0, g, 0.0),
            1.0,
            g,
        );
        assert_eq!(w.values(), &[1.0, 2.0]);
    }

    #[test]
    fn jumps_follow_orientation() {
        let src = SourceRates::zero(2);
        let w = build_potential(
            &state(&[1.0; 2], &[0.0; 2]),
            &[0.0, 1.0],
            &src,
            &fp(0.0, 0.0, 0.0),
            1.0,
            9.81,
        );
        assert_eq!(delta_w(&w, 0, Side::Right, false).unwrap(), 1.0);
        assert_eq!(delta_w(&w, 1, Side::Left, false).unwrap(), -1.0);
        assert!(delta_w(&w, 0, Side::Left, false).is_err());
        assert!(delta_w(&w, 1, Side::Right, false).is_err());
        assert!(delta_w(&w, 5, Side::Right, true).is_err());
    }

    #[test]
    fn periodic_jumps_telescope() {
        let src = SourceRates::zero(3);
        let w = build_potential(
            &state(&[1.0; 3], &[0.0; 3]),
            &[0.0, 1.0, 2.0],
            &src,
            &fp(0.0, 0.0, 0.0),
            1.0,
            9.81,
        );
        assert_eq!(delta_w(&w, 0, Side::Left, true).unwrap(), 2.0);
        let total: f64 = (0..3)
            .map(|i| delta_w(&w, i, Side::Right, true).unwrap())
            .sum();
        assert_eq!(total, 0.0);
        // uniform friction on a uniform periodic state gives the same jump everywhere
        let g = 9.81;
        let uni = build_potential(
            &state(&[1.0; 3], &[1.0; 3]),
            &[0.0; 3],
            &src,
            &fp(0.0, g, 0.0),
            1.0,
            g,
        );
        let jumps: Vec<f64> = (0..3)
            .map(|i| delta_w(&uni, i, Side::Right, true).unwrap())
            .collect();
        assert_eq!(jumps, vec![1.0; 3]);
    }

    #[test]
    fn legacy_matches_extended_when_friction_equals_recharge() {
        let legacy = FrictionParams {
            model: ModelVariant::Legacy,
            ..fp(1.0, 0.0, 0.0)
        };
        let extended = fp(1.0, 0.0, 0.0);
        for (r, i) in [(1.0, 0.0), (0.3, -0.7), (0.0, -2.0), (1e-3, -1e-9)] {
            let s = r - i;
            assert_eq!(recharge_momentum_rate(s, r, i, &legacy), 0.0);
            assert_eq!(recharge_momentum_rate(s, r, i, &extended), 0.0);
        }
    }

    #[test]
    fn placement_selects_explicit_part() {
        let literal = FrictionParams {
            recharge_placement: RechargePlacement::Potential,
            ..fp(2.0, 0.0, 0.0)
        };
        assert_eq!(recharge_momentum_rate(1.0, 1.0, 0.0, &literal), 1.0);
        assert_eq!(
            recharge_momentum_rate(1.0, 1.0, 0.0, &fp(2.0, 0.0, 0.0)),
            -1.0
        );
    }
}
