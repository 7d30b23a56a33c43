//! Built-in scenarios.

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::scenario::{
    Boundary, BoundaryKind, FrictionParams, InitialCondition, ModelVariant, OutputSpec,
    RechargePlacement, RunControls, Scenario, DEFAULT_CFL, DEFAULT_GRAVITY, DEFAULT_H_DRY,
};
use crate::sources::SourceField;
use crate::topography::TopographySpec;

pub const NAMES: [&str; 6] = [
    "uniform_rain_alpha",
    "flume",
    "cascade_single",
    "cascade_triple",
    "lake_at_rest",
    "filling_lake",
];

/// Override keys accepted by [`build`] and by `--set`.
pub const OVERRIDE_KEYS: [&str; 13] = [
    "alpha",
    "kappa_lam",
    "kappa_tur",
    "model",
    "recharge_placement",
    "cells",
    "final_time",
    "cfl",
    "gravity",
    "h_dry",
    "rain_rate",
    "rain_duration",
    "rain_rate_mm_per_hour",
];

/// Converts mm/h to m/s.
pub fn mm_per_hour(v: f64) -> f64 {
    v / 3.6e6
}

/// Cascade rain as printed: 0.001 mm/h.
pub const CASCADE_RAIN_MM_PER_HOUR: f64 = 0.001;

#[derive(Debug, Clone)]
struct Params {
    friction: FrictionParams,
    cells: usize,
    final_time: Option<f64>,
    cfl: f64,
    gravity: f64,
    h_dry: f64,
    rain_rate: Option<f64>,
    rain_duration: Option<f64>,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            friction: FrictionParams::frictionless(0.0),
            cells: 1000,
            final_time: None,
            cfl: DEFAULT_CFL,
            gravity: DEFAULT_GRAVITY,
            h_dry: DEFAULT_H_DRY,
            rain_rate: None,
            rain_duration: None,
        }
    }
}

fn number(key: &str, value: &str) -> Result<f64> {
    value
        .trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::invalid(key, format!("expected a finite number, got `{value}`")))
}

impl Params {
    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "alpha" => self.friction.alpha = number(key, value)?,
            "kappa_lam" => self.friction.kappa_lam = number(key, value)?,
            "kappa_tur" => self.friction.kappa_tur = number(key, value)?,
            "model" => {
                self.friction.model = match value.trim() {
                    "extended" => ModelVariant::Extended,
                    "legacy" => ModelVariant::Legacy,
                    other => {
                        return Err(Error::invalid(
                            key,
                            format!("expected extended or legacy, got `{other}`"),
                        ))
                    }
                }
            }
            "recharge_placement" => {
                self.friction.recharge_placement = match value.trim() {
                    "source" => RechargePlacement::Source,
                    "potential" => RechargePlacement::Potential,
                    other => {
                        return Err(Error::invalid(
                            key,
                            format!("expected source or potential, got `{other}`"),
                        ))
                    }
                }
            }
            "cells" => {
                self.cells = value.trim().parse().map_err(|_| {
                    Error::invalid(key, format!("expected a cell count, got `{value}`"))
                })?
            }
            "final_time" => self.final_time = Some(number(key, value)?),
            "cfl" => self.cfl = number(key, value)?,
            "gravity" => self.gravity = number(key, value)?,
            "h_dry" => self.h_dry = number(key, value)?,
            "rain_rate" => self.rain_rate = Some(number(key, value)?),
            "rain_rate_mm_per_hour" => self.rain_rate = Some(mm_per_hour(number(key, value)?)),
            "rain_duration" => self.rain_duration = Some(number(key, value)?),
            other => {
                return Err(Error::invalid(
                    other,
                    format!(
                        "unknown override; expected one of {}",
                        OVERRIDE_KEYS.join(", ")
                    ),
                ))
            }
        }
        Ok(())
    }

    fn run(&self, default_final: f64) -> RunControls {
        RunControls {
            final_time: self.final_time.unwrap_or(default_final),
            cfl: self.cfl,
            gravity: self.gravity,
            h_dry: self.h_dry,
        }
    }
}

const WALL_OUTFLOW: Boundary = Boundary {
    left: BoundaryKind::Wall,
    right: BoundaryKind::Outflow,
};

const WALLS: Boundary = Boundary {
    left: BoundaryKind::Wall,
    right: BoundaryKind::Wall,
};

/// Rain over `[0, end) x [0, length)`, or none when `end` is zero.
fn rain_until(end: f64, length: f64, rate: f64) -> SourceField {
    if end > 0.0 {
        SourceField::uniform_rain([0.0, end], [0.0, length], rate)
    } else {
        SourceField::default()
    }
}

fn uniform_rain_alpha(p: &Params) -> Scenario {
    let run = p.run(1.0);
    let rate = p.rain_rate.unwrap_or(1.0);
    let end = p.rain_duration.unwrap_or(run.final_time);
    Scenario {
        grid: GridSpec {
            length: 10.0,
            cells: p.cells,
        },
        topography: TopographySpec::Flat { elevation: 0.0 },
        initial: InitialCondition::Uniform {
            height: 1.0,
            discharge: 1.0,
        },
        boundary: Boundary::PERIODIC,
        sources: rain_until(end, 10.0, rate),
        friction: p.friction,
        run,
        output: OutputSpec {
            probes: vec![5.0],
            snapshots: vec![],
        },
    }
}

fn flume(p: &Params) -> Scenario {
    let rate = p.rain_rate.unwrap_or(mm_per_hour(50.0));
    let end = 5.0 + p.rain_duration.unwrap_or(120.0);
    Scenario {
        grid: GridSpec {
            length: 4.0,
            cells: p.cells,
        },
        topography: TopographySpec::Linear {
            at_origin: 0.2,
            slope: -1.0 / 20.0,
        },
        initial: InitialCondition::Dry,
        boundary: WALL_OUTFLOW,
        sources: SourceField::uniform_rain([5.0, end], [0.0, 3.95], rate),
        friction: p.friction,
        run: p.run(250.0),
        output: OutputSpec {
            probes: vec![3.98],
            snapshots: vec![125.0],
        },
    }
}

fn cascade(p: &Params, topography: TopographySpec) -> Scenario {
    let rate = p.rain_rate.unwrap_or(mm_per_hour(CASCADE_RAIN_MM_PER_HOUR));
    let duration = p.rain_duration.unwrap_or(20.0);
    Scenario {
        grid: GridSpec {
            length: 12.0,
            cells: p.cells,
        },
        topography,
        initial: InitialCondition::Dry,
        boundary: WALL_OUTFLOW,
        sources: SourceField::uniform_rain([0.0, duration], [0.0, 12.0], rate),
        friction: p.friction,
        run: p.run(40.0),
        output: OutputSpec {
            probes: vec![11.99],
            snapshots: vec![duration],
        },
    }
}

/// `Z1(x) = (12 - x) 0.005`.
pub fn cascade_single_topography() -> TopographySpec {
    TopographySpec::Linear {
        at_origin: 0.06,
        slope: -0.005,
    }
}

/// `Z2`: slopes 0.006, 0.005 and 0.004 on `[0,4]`, `[4,8]`, `[8,12]`.
pub fn cascade_triple_topography() -> TopographySpec {
    let z2 = |x: f64| {
        if x <= 4.0 {
            (12.0 - x) * 0.006 - 0.012
        } else if x <= 8.0 {
            (12.0 - x) * 0.005 - 0.004
        } else {
            (12.0 - x) * 0.004
        }
    };
    TopographySpec::PiecewiseLinear {
        points: [0.0, 4.0, 8.0, 12.0].map(|x| [x, z2(x)]).to_vec(),
    }
}

fn basin() -> TopographySpec {
    TopographySpec::PiecewiseLinear {
        points: vec![
            [0.0, 0.1],
            [3.0, 0.1],
            [4.0, 0.6],
            [6.0, 0.6],
            [7.0, 0.2],
            [10.0, 0.0],
        ],
    }
}

fn lake_at_rest(p: &Params) -> Scenario {
    Scenario {
        grid: GridSpec {
            length: 10.0,
            cells: if p.cells == 1000 { 200 } else { p.cells },
        },
        topography: basin(),
        initial: InitialCondition::Surface { level: 1.0 },
        boundary: WALLS,
        sources: SourceField::default(),
        friction: p.friction,
        run: p.run(20.0),
        output: OutputSpec::default(),
    }
}

fn filling_lake(p: &Params) -> Scenario {
    let run = p.run(20.0);
    let end = p.rain_duration.unwrap_or(run.final_time);
    Scenario {
        sources: rain_until(end, 10.0, p.rain_rate.unwrap_or(1e-3)),
        run,
        ..lake_at_rest(p)
    }
}

/// Builds a named scenario, applying `key = value` overrides.
///
/// Flume and cascades default to `alpha = 1` and no `k0` friction.
pub fn build<K: AsRef<str>, V: AsRef<str>>(name: &str, overrides: &[(K, V)]) -> Result<Scenario> {
    let mut p = Params::default();
    if matches!(name, "flume" | "cascade_single" | "cascade_triple") {
        p.friction.alpha = 1.0;
    }
    for (k, v) in overrides {
        p.set(k.as_ref(), v.as_ref())?;
    }
    let scenario = match name {
        "uniform_rain_alpha" => uniform_rain_alpha(&p),
        "flume" => flume(&p),
        "cascade_single" => cascade(&p, cascade_single_topography()),
        "cascade_triple" => cascade(&p, cascade_triple_topography()),
        "lake_at_rest" => lake_at_rest(&p),
        "filling_lake" => filling_lake(&p),
        other => return Err(Error::UnknownScenario(other.to_string())),
    };
    scenario.validate()?;
    Ok(scenario)
}
