use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Grid, GridSpec};
use crate::sources::SourceField;
use crate::state::State;
use crate::topography::{sample_topography, Topography, TopographySpec};

pub const DEFAULT_GRAVITY: f64 = 9.81;
pub const DEFAULT_CFL: f64 = 0.95;
pub const DEFAULT_H_DRY: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryKind {
    Periodic,
    /// Mirror ghost `(h, -u)`.
    Wall,
    /// Copy ghost `(h, u)`.
    Outflow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Boundary {
    pub left: BoundaryKind,
    pub right: BoundaryKind,
}

impl Boundary {
    pub const PERIODIC: Boundary = Boundary {
        left: BoundaryKind::Periodic,
        right: BoundaryKind::Periodic,
    };

    pub fn is_periodic(&self) -> bool {
        self.left == BoundaryKind::Periodic
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelVariant {
    /// Momentum source `S u` and recharge friction `f_R + f_I`.
    #[default]
    Extended,
    /// Neither the momentum source nor the recharge friction.
    Legacy,
}

/// Where the extended model applies the recharge friction `(f_R + f_I) u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RechargePlacement {
    /// Combined with the momentum source as the explicit term `(S - f_R - f_I) u`.
    #[default]
    Source,
    /// Inside the potential `W`, next to `k0`, with `S u` kept explicit.
    Potential,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrictionParams {
    #[serde(default)]
    pub alpha: f64,
    /// Laminar coefficient, 1/s.
    #[serde(default)]
    pub kappa_lam: f64,
    /// Turbulent coefficient, 1/m.
    #[serde(default)]
    pub kappa_tur: f64,
    #[serde(default)]
    pub model: ModelVariant,
    #[serde(default)]
    pub recharge_placement: RechargePlacement,
}

impl Default for FrictionParams {
    fn default() -> Self {
        Self::frictionless(0.0)
    }
}

impl FrictionParams {
    pub fn frictionless(alpha: f64) -> Self {
        Self {
            alpha,
            kappa_lam: 0.0,
            kappa_tur: 0.0,
            model: ModelVariant::Extended,
            recharge_placement: RechargePlacement::Source,
        }
    }

    fn validate(&self) -> Result<()> {
        if !self.alpha.is_finite() {
            return Err(Error::invalid("friction.alpha", "must be finite"));
        }
        for (key, v) in [
            ("friction.kappa_lam", self.kappa_lam),
            ("friction.kappa_tur", self.kappa_tur),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::invalid(
                    key,
                    format!("must be finite and >= 0, got {v}"),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialCondition {
    Uniform {
        height: f64,
        discharge: f64,
    },
    /// Still water with free surface `level`; cells above it start dry.
    Surface {
        level: f64,
    },
    Dry,
    Cells {
        height: Vec<f64>,
        discharge: Vec<f64>,
    },
}

impl InitialCondition {
    pub fn build(&self, topo: &Topography, h_dry: f64) -> Result<State> {
        let n = topo.values().len();
        let (h, q) = match self {
            InitialCondition::Uniform { height, discharge } => {
                (vec![*height; n], vec![*discharge; n])
            }
            InitialCondition::Surface { level } => (
                topo.values().iter().map(|z| (level - z).max(0.0)).collect(),
                vec![0.0; n],
            ),
            InitialCondition::Dry => (vec![0.0; n], vec![0.0; n]),
            InitialCondition::Cells { height, discharge } => {
                if height.len() != n || discharge.len() != n {
                    return Err(Error::invalid(
                        "initial",
                        format!(
                            "{} heights and {} discharges for {n} cells",
                            height.len(),
                            discharge.len()
                        ),
                    ));
                }
                (height.clone(), discharge.clone())
            }
        };
        State::new(h, q, h_dry)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunControls {
    pub final_time: f64,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    #[serde(default = "default_gravity")]
    pub gravity: f64,
    #[serde(default = "default_h_dry")]
    pub h_dry: f64,
}

fn default_cfl() -> f64 {
    DEFAULT_CFL
}
fn default_gravity() -> f64 {
    DEFAULT_GRAVITY
}
fn default_h_dry() -> f64 {
    DEFAULT_H_DRY
}

impl RunControls {
    pub fn new(final_time: f64) -> Self {
        Self {
            final_time,
            cfl: DEFAULT_CFL,
            gravity: DEFAULT_GRAVITY,
            h_dry: DEFAULT_H_DRY,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    /// Probe abscissae; each reports its containing cell at every step.
    #[serde(default)]
    pub probes: Vec<f64>,
    /// Snapshot times; the time step lands on each one exactly.
    #[serde(default)]
    pub snapshots: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub grid: GridSpec,
    pub topography: TopographySpec,
    pub initial: InitialCondition,
    pub boundary: Boundary,
    #[serde(default)]
    pub sources: SourceField,
    #[serde(default)]
    pub friction: FrictionParams,
    pub run: RunControls,
    #[serde(default)]
    pub output: OutputSpec,
}

/// Everything a run needs, derived once from a validated [`Scenario`].
#[derive(Debug, Clone)]
pub struct Setup {
    pub grid: Grid,
    pub topography: Topography,
    pub initial: State,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        self.setup().map(|_| ())
    }

    /// Validates the scenario and builds grid, sampled bed and initial state.
    pub fn setup(&self) -> Result<Setup> {
        let run = &self.run;
        if !(run.cfl > 0.0 && run.cfl <= 1.0) {
            return Err(Error::invalid(
                "run.cfl",
                format!("must lie in (0, 1], got {}", run.cfl),
            ));
        }
        if !(run.final_time >= 0.0 && run.final_time.is_finite()) {
            return Err(Error::invalid(
                "run.final_time",
                format!("must be finite and >= 0, got {}", run.final_time),
            ));
        }
        if !(run.gravity > 0.0 && run.gravity.is_finite()) {
            return Err(Error::invalid(
                "run.gravity",
                format!("must be positive, got {}", run.gravity),
            ));
        }
        if !(run.h_dry > 0.0 && run.h_dry.is_finite()) {
            return Err(Error::invalid(
                "run.h_dry",
                format!("must be positive, got {}", run.h_dry),
            ));
        }
        if (self.boundary.left == BoundaryKind::Periodic)
            != (self.boundary.right == BoundaryKind::Periodic)
        {
            return Err(Error::invalid(
                "boundary",
                "periodic must be set on both sides",
            ));
        }
        self.friction.validate()?;
        let grid = self.grid.build()?;
        self.sources.validate(run.final_time, grid.length())?;
        let topography = sample_topography(&self.topography, &grid)?;
        let initial = self.initial.build(&topography, run.h_dry)?;
        for &x in &self.output.probes {
            if grid.locate(x).is_none() {
                return Err(Error::invalid(
                    "output.probes",
                    format!("{x} lies outside [0, {}]", grid.length()),
                ));
            }
        }
        for &t in &self.output.snapshots {
            if !(t >= 0.0 && t <= run.final_time) {
                return Err(Error::invalid(
                    "output.snapshots",
                    format!("{t} lies outside [0, {}]", run.final_time),
                ));
            }
        }
        Ok(Setup {
            grid,
            topography,
            initial,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> Scenario {
        Scenario {
            grid: GridSpec {
                length: 1.0,
                cells: 4,
            },
            topography: TopographySpec::Flat { elevation: 0.0 },
            initial: InitialCondition::Uniform {
                height: 1.0,
                discharge: 0.0,
            },
            boundary: Boundary::PERIODIC,
            sources: SourceField::default(),
            friction: FrictionParams::default(),
            run: RunControls::new(1.0),
            output: OutputSpec::default(),
        }
    }

    #[test]
    fn defaults() {
        let r = RunControls::new(2.0);
        assert_eq!((r.cfl, r.gravity, r.h_dry), (0.95, 9.81, 1e-10));
        base().validate().unwrap();
    }

    #[test]
    fn rejects_bad_controls() {
        let mut s = base();
        s.run.cfl = 1.5;
        assert!(s.validate().is_err());
        let mut s = base();
        s.run.h_dry = 0.0;
        assert!(s.validate().is_err());
        let mut s = base();
        s.friction.kappa_tur = -1.0;
        assert!(s.validate().is_err());
        let mut s = base();
        s.boundary.right = BoundaryKind::Wall;
        assert!(s.validate().is_err());
        let mut s = base();
        s.output.probes = vec![2.0];
        assert!(s.validate().is_err());
    }

    #[test]
    fn negative_alpha_is_allowed() {
        let mut s = base();
        s.friction.alpha = -0.5;
        s.validate().unwrap();
    }

    #[test]
    fn surface_initial_condition_is_still_water() {
        let topo = Topography::from_values(vec![0.0, 0.5, 1.2]).unwrap();
        let st = InitialCondition::Surface { level: 1.0 }
            .build(&topo, 1e-10)
            .unwrap();
        assert_eq!(st.heights(), &[1.0, 0.5, 0.0]);
        assert!(st.discharges().iter().all(|&q| q == 0.0));
    }
}
