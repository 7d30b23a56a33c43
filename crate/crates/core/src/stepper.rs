use crate::error::{Error, Result};
use crate::fluxes::{all_fluxes, InterfaceFlux};
use crate::grid::Grid;
use crate::potential::{build_potential, recharge_momentum_rate, PotentialField};
use crate::scenario::{Scenario, Setup};
use crate::sources::{evaluate_sources, SourceRates};
use crate::state::State;
use crate::topography::Topography;

/// Outcome of one explicit step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepReport {
    pub dt: f64,
    /// Cells whose height would have gone negative.
    pub clamped_cells: usize,
    /// Water added by clamping, `sum deficit * dx` (m^2).
    pub clamp_mass: f64,
    /// `max |u| + sqrt(2 g h)` before the step.
    pub max_wave_speed: f64,
    /// `dt * sum S_i dx`.
    pub source_mass: f64,
    /// `dt * (F_N - F_0)` for the mass flux: water leaving through the ends.
    pub boundary_outflow: f64,
}

/// Compensated sum in index order.
pub fn ordered_sum<'a>(values: impl IntoIterator<Item = &'a f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for &v in values {
        let t = sum + v;
        comp += if sum.abs() >= v.abs() {
            (sum - t) + v
        } else {
            (v - t) + sum
        };
        sum = t;
    }
    sum + comp
}

fn max_wave_speed(state: &State, g: f64) -> f64 {
    (0..state.len())
        .filter(|&i| state.is_wet(i))
        .map(|i| state.velocity(i).abs() + (2.0 * g * state.heights()[i]).sqrt())
        .fold(0.0, f64::max)
}

/// `dt = cfl dx / max_i (|u_i| + sqrt(2 g h_i))` over wet cells.
pub fn compute_dt(state: &State, dx: f64, cfl: f64, g: f64) -> Result<f64> {
    let speed = max_wave_speed(state, g);
    if speed > 0.0 {
        Ok(cfl * dx / speed)
    } else {
        Err(Error::NothingToEvolve { time: f64::NAN })
    }
}

/// Step for an all-dry state gaining water at `gain` m/s: the largest `dt` with
/// `dt * sqrt(2 g gain dt) <= cfl dx`, so the wetted state honours the
/// wave-speed bound of its own step.
fn dry_start_dt(dx: f64, cfl: f64, g: f64, gain: f64) -> f64 {
    (cfl * dx / (2.0 * g * gain).sqrt()).powf(2.0 / 3.0)
}

/// Immutable inputs of the update, shared by every step of a run.
#[derive(Debug, Clone)]
pub struct StepContext {
    pub scenario: Scenario,
    pub grid: Grid,
    pub topography: Topography,
}

/// Everything one step is built from; exposed for diagnostics.
#[derive(Debug, Clone)]
pub struct StepInputs {
    pub sources: SourceRates,
    pub potential: PotentialField,
    pub fluxes: Vec<InterfaceFlux>,
}

impl StepContext {
    pub fn new(scenario: &Scenario) -> Result<(Self, State)> {
        let Setup {
            grid,
            topography,
            initial,
        } = scenario.setup()?;
        Ok((
            Self {
                scenario: scenario.clone(),
                grid,
                topography,
            },
            initial,
        ))
    }

    pub fn gravity(&self) -> f64 {
        self.scenario.run.gravity
    }

    /// Sources at `t`, potential and fluxes of `state`.
    pub fn inputs(&self, state: &State, t: f64) -> StepInputs {
        let g = self.gravity();
        let sources = evaluate_sources(&self.scenario.sources, t, &self.grid);
        let potential = build_potential(
            state,
            self.topography.values(),
            &sources,
            &self.scenario.friction,
            self.grid.dx(),
            g,
        );
        let fluxes = all_fluxes(state, &potential, &self.scenario.boundary, g);
        StepInputs {
            sources,
            potential,
            fluxes,
        }
    }

    /// Explicit update `U' = U - dt/dx (F_{i+1/2} - F_{i-1/2}) + dt [S; c u]`.
    pub fn step(&self, state: &State, t: f64, dt: f64) -> Result<(State, StepReport)> {
        let inputs = self.inputs(state, t);
        self.apply(state, t, dt, &inputs)
    }

    pub fn apply(
        &self,
        state: &State,
        t: f64,
        dt: f64,
        inputs: &StepInputs,
    ) -> Result<(State, StepReport)> {
        let n = state.len();
        let dx = self.grid.dx();
        let lambda = dt / dx;
        let h_dry = state.h_dry();
        let fp = &self.scenario.friction;
        let src = &inputs.sources;
        let f = &inputs.fluxes;

        let mut h = Vec::with_capacity(n);
        let mut q = Vec::with_capacity(n);
        let mut clamped_cells = 0;
        let mut deficits = Vec::new();
        for i in 0..n {
            let mut hi =
                state.heights()[i] - lambda * (f[i + 1].mass - f[i].mass) + dt * src.net[i];
            let u = state.velocity(i);
            let c = recharge_momentum_rate(src.net[i], src.rain[i], src.infiltration[i], fp);
            let mut qi = state.discharges()[i]
                - lambda * (f[i + 1].momentum_left - f[i].momentum_right)
                + dt * c * u;
            if !hi.is_finite() || !qi.is_finite() {
                return Err(Error::NonFinite {
                    time: t,
                    cell: i,
                    height: hi,
                    discharge: qi,
                });
            }
            if hi < 0.0 {
                clamped_cells += 1;
                deficits.push(-hi * dx);
                hi = 0.0;
            }
            if hi <= h_dry {
                qi = 0.0;
            }
            h.push(hi);
            q.push(qi);
        }
        let report = StepReport {
            dt,
            clamped_cells,
            clamp_mass: ordered_sum(&deficits),
            max_wave_speed: max_wave_speed(state, self.gravity()),
            source_mass: dt * ordered_sum(&src.net) * dx,
            boundary_outflow: dt * (f[n].mass - f[0].mass),
        };
        Ok((State::from_parts(h, q, h_dry), report))
    }

    /// Step size at `t`: the CFL formula, cut to land on `limit`.
    ///
    /// With no wet cell the state only changes through sources: the step either
    /// wets it at the dry-start bound or jumps to the next change in sources.
    pub fn time_step(&self, state: &State, t: f64, limit: f64) -> Result<f64> {
        let run = &self.scenario.run;
        let dx = self.grid.dx();
        let sf = &self.scenario.sources;
        let dt = match compute_dt(state, dx, run.cfl, run.gravity) {
            Ok(dt) => dt,
            Err(_) => {
                let gain = evaluate_sources(sf, t, &self.grid)
                    .net
                    .iter()
                    .fold(0.0, |m: f64, &s| m.max(s));
                if gain > 0.0 {
                    dry_start_dt(dx, run.cfl, run.gravity, gain)
                } else if sf.adds_water_after(t) {
                    f64::INFINITY
                } else {
                    return Err(Error::NothingToEvolve { time: t });
                }
            }
        };
        let mut stop = limit;
        if let Some(b) = sf.next_breakpoint(t) {
            stop = stop.min(b);
        }
        Ok(dt.min(stop - t))
    }
}

/// Time loop state: advances a scenario one step at a time, landing exactly on
/// the final time and on every checkpoint.
#[derive(Debug, Clone)]
pub struct Simulation {
    ctx: StepContext,
    state: State,
    time: f64,
    steps: usize,
    checkpoints: Vec<f64>,
    initial_mass: f64,
    source_mass: Vec<f64>,
    outflow: Vec<f64>,
    clamp_mass: Vec<f64>,
}

impl Simulation {
    pub fn new(scenario: &Scenario) -> Result<Self> {
        let (ctx, state) = StepContext::new(scenario)?;
        let mut checkpoints = scenario.output.snapshots.clone();
        checkpoints.push(scenario.run.final_time);
        checkpoints.sort_by(f64::total_cmp);
        checkpoints.dedup();
        let initial_mass = state.total_mass(ctx.grid.dx());
        Ok(Self {
            ctx,
            state,
            time: 0.0,
            steps: 0,
            checkpoints,
            initial_mass,
            source_mass: Vec::new(),
            outflow: Vec::new(),
            clamp_mass: Vec::new(),
        })
    }

    pub fn context(&self) -> &StepContext {
        &self.ctx
    }

    pub fn state(&self) -> &State {
        &self.state
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn is_finished(&self) -> bool {
        self.time >= self.ctx.scenario.run.final_time
    }

    fn next_checkpoint(&self) -> f64 {
        self.checkpoints
            .iter()
            .copied()
            .find(|&c| c > self.time)
            .unwrap_or(self.ctx.scenario.run.final_time)
    }

    /// Advances one step and returns its report together with the inputs it used.
    pub fn advance_with_inputs(&mut self) -> Result<(StepReport, StepInputs)> {
        let target = self.next_checkpoint();
        let dt = self.ctx.time_step(&self.state, self.time, target)?;
        let inputs = self.ctx.inputs(&self.state, self.time);
        let (next, report) = self.ctx.apply(&self.state, self.time, dt, &inputs)?;
        self.state = next;
        // land exactly on checkpoints and breakpoints
        let t = self.time + dt;
        let snapped = if dt == target - self.time { target } else { t };
        self.time = match self.ctx.scenario.sources.next_breakpoint(self.time) {
            Some(b) if dt == b - self.time => b,
            _ => snapped,
        };
        self.steps += 1;
        self.source_mass.push(report.source_mass);
        self.outflow.push(report.boundary_outflow);
        self.clamp_mass.push(report.clamp_mass);
        Ok((report, inputs))
    }

    pub fn advance(&mut self) -> Result<StepReport> {
        self.advance_with_inputs().map(|(r, _)| r)
    }

    pub fn is_checkpoint(&self, t: f64) -> bool {
        self.checkpoints.contains(&t)
    }

    pub fn initial_mass(&self) -> f64 {
        self.initial_mass
    }

    pub fn mass(&self) -> f64 {
        ordered_sum(self.state.heights()) * self.ctx.grid.dx()
    }

    /// Cumulative `(source input, boundary outflow, clamp correction)`.
    pub fn balance(&self) -> MassBalance {
        MassBalance {
            initial: self.initial_mass,
            current: self.mass(),
            source: ordered_sum(&self.source_mass),
            outflow: ordered_sum(&self.outflow),
            clamp: ordered_sum(&self.clamp_mass),
        }
    }
}

/// Global water budget of a run so far.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassBalance {
    pub initial: f64,
    pub current: f64,
    pub source: f64,
    pub outflow: f64,
    pub clamp: f64,
}

impl MassBalance {
    /// `(current - initial) - (source - outflow + clamp)`.
    pub fn error(&self) -> f64 {
        (self.current - self.initial) - (self.source - self.outflow + self.clamp)
    }

    /// [`Self::error`] relative to the largest term of the budget.
    pub fn relative_error(&self) -> f64 {
        let scale = [
            self.initial,
            self.current,
            self.source,
            self.outflow,
            self.clamp,
        ]
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));
        if scale == 0.0 {
            0.0
        } else {
            self.error().abs() / scale
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use crate::scenario::{
        Boundary, BoundaryKind, FrictionParams, InitialCondition, OutputSpec, RunControls,
    };
    use crate::sources::SourceField;
    use crate::topography::TopographySpec;

    #[test]
    fn cfl_formula() {
        let s = State::new(vec![1.0; 4], vec![0.0; 4], 1e-10).unwrap();
        let dt = compute_dt(&s, 0.01, 0.95, 9.81).unwrap();
        assert!((dt - 0.95 * 0.01 / 19.62f64.sqrt()).abs() < 1e-18);
        assert!((dt - 2.1447e-3).abs() < 1e-7);
        assert_eq!(compute_dt(&s, 0.01, 0.475, 9.81).unwrap() * 2.0, dt);
        let fwd = State::new(vec![1.0; 4], vec![3.0; 4], 1e-10).unwrap();
        let back = State::new(vec![1.0; 4], vec![-3.0; 4], 1e-10).unwrap();
        assert_eq!(
            compute_dt(&fwd, 0.01, 0.95, 9.81).unwrap(),
            compute_dt(&back, 0.01, 0.95, 9.81).unwrap()
        );
        let dry = State::new(vec![0.0; 4], vec![0.0; 4], 1e-10).unwrap();
        assert!(matches!(
            compute_dt(&dry, 0.01, 0.95, 9.81),
            Err(Error::NothingToEvolve { .. })
        ));
    }

    #[test]
    fn ordered_sum_compensates() {
        let v = [1.0, 1e-16, 1e-16, -1.0];
        assert_eq!(ordered_sum(&v), 2e-16);
    }

    fn lake(z: Vec<f64>, rain: f64) -> Scenario {
        let n = z.len();
        Scenario {
            grid: GridSpec {
                length: 1.0,
                cells: n,
            },
            topography: TopographySpec::Cells { values: z },
            initial: InitialCondition::Surface { level: 1.0 },
            boundary: Boundary {
                left: BoundaryKind::Wall,
                right: BoundaryKind::Wall,
            },
            sources: if rain > 0.0 {
                SourceField::uniform_rain([0.0, 10.0], [0.0, 1.0], rain)
            } else {
                SourceField::default()
            },
            friction: FrictionParams {
                kappa_lam: 0.5,
                kappa_tur: 0.5,
                ..FrictionParams::frictionless(1.0)
            },
            run: RunControls::new(10.0),
            output: OutputSpec::default(),
        }
    }

    #[test]
    fn three_cell_lake_is_a_fixpoint() {
        let sim = Simulation::new(&lake(vec![0.2, 0.5, 0.1], 0.0)).unwrap();
        let ctx = sim.context();
        let (next, report) = ctx.step(sim.state(), 0.0, 0.01).unwrap();
        for i in 0..3 {
            assert!((next.heights()[i] - sim.state().heights()[i]).abs() < 1e-12);
            assert!(next.discharges()[i].abs() < 1e-12);
        }
        assert_eq!(report.clamped_cells, 0);
    }

    #[test]
    fn filling_lake_rises_uniformly() {
        let sim = Simulation::new(&lake(vec![0.2, 0.5, 0.1, 0.3], 1e-3)).unwrap();
        let (next, _) = sim.context().step(sim.state(), 0.0, 0.01).unwrap();
        for i in 0..4 {
            let gain = next.heights()[i] - sim.state().heights()[i];
            assert!((gain - 1e-5).abs() < 1e-12 * 1e-5 + 1e-15);
            assert!(next.discharges()[i].abs() < 1e-12);
        }
    }

    #[test]
    fn dry_start_waits_for_rain_then_wets() {
        let mut s = lake(vec![0.0; 4], 0.0);
        s.initial = InitialCondition::Dry;
        s.sources = SourceField::uniform_rain([2.0, 5.0], [0.0, 1.0], 1e-4);
        let mut sim = Simulation::new(&s).unwrap();
        let first = sim.advance().unwrap();
        assert_eq!(first.dt, 2.0);
        assert_eq!(sim.time(), 2.0);
        sim.advance().unwrap();
        assert!(!sim.state().all_dry());
        while !sim.is_finished() {
            sim.advance().unwrap();
        }
        assert_eq!(sim.time(), 10.0);
        let b = sim.balance();
        assert!(b.relative_error() < 1e-12, "{b:?}");
    }

    #[test]
    fn nothing_to_evolve() {
        let mut s = lake(vec![0.0; 4], 0.0);
        s.initial = InitialCondition::Dry;
        let mut sim = Simulation::new(&s).unwrap();
        assert!(matches!(sim.advance(), Err(Error::NothingToEvolve { time }) if time == 0.0));
    }

    #[test]
    fn lands_on_checkpoints() {
        let mut s = lake(vec![0.2, 0.5, 0.1], 0.0);
        s.run.final_time = 0.05;
        s.output.snapshots = vec![0.0123];
        let mut sim = Simulation::new(&s).unwrap();
        let mut times = vec![];
        while !sim.is_finished() {
            sim.advance().unwrap();
            times.push(sim.time());
        }
        assert!(times.contains(&0.0123));
        assert_eq!(*times.last().unwrap(), 0.05);
    }
}
