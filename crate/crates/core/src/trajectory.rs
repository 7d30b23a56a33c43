use crate::diagnostics::{
    bed_slope, energy_record, entropy, entropy_residual, sign_check, total_head,
};
use crate::error::{Error, Result};
use crate::scenario::Scenario;
use crate::stepper::Simulation;

/// Probe reading: the containing cell's values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeRecord {
    pub t: f64,
    pub x: f64,
    pub h: f64,
    pub q: f64,
    pub u: f64,
}

/// Cell values at one output time.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub x: Vec<f64>,
    pub z: Vec<f64>,
    pub h: Vec<f64>,
    pub q: Vec<f64>,
    pub u: Vec<f64>,
    pub entropy: Vec<f64>,
    pub head: Vec<f64>,
}

/// Global quantities after one step (or at `t = 0`, with `dt = 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub dt: f64,
    pub total_mass: f64,
    pub total_entropy: f64,
    pub mass_error: f64,
    pub decay_violations: usize,
    pub threshold_violations: usize,
    pub clamped_cells: usize,
    pub clamp_mass: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutputs {
    pub probes: Vec<ProbeRecord>,
    pub snapshots: Vec<Snapshot>,
    pub diagnostics: Vec<DiagnosticsRecord>,
    pub steps: usize,
    pub final_time: f64,
}

impl RunOutputs {
    /// Final cumulative mass-balance error.
    pub fn mass_error(&self) -> f64 {
        self.diagnostics.last().map_or(0.0, |d| d.mass_error)
    }
}

fn snapshot(sim: &Simulation) -> Snapshot {
    let ctx = sim.context();
    let st = sim.state();
    let g = ctx.gravity();
    let z = ctx.topography.values().to_vec();
    let u = st.velocities();
    let h = st.heights().to_vec();
    Snapshot {
        t: sim.time(),
        x: ctx.grid.centers().to_vec(),
        entropy: h.iter().zip(&u).map(|(&h, &u)| entropy(h, u, g)).collect(),
        head: (0..h.len())
            .map(|i| total_head(h[i], u[i], z[i], g))
            .collect(),
        q: st.discharges().to_vec(),
        z,
        h,
        u,
    }
}

fn probe_cells(sim: &Simulation) -> Vec<(f64, usize)> {
    let ctx = sim.context();
    ctx.scenario
        .output
        .probes
        .iter()
        .map(|&x| (x, ctx.grid.locate(x).expect("validated probe")))
        .collect()
}

fn read_probes(sim: &Simulation, cells: &[(f64, usize)], out: &mut Vec<ProbeRecord>) {
    let st = sim.state();
    for &(x, i) in cells {
        out.push(ProbeRecord {
            t: sim.time(),
            x,
            h: st.heights()[i],
            q: st.discharges()[i],
            u: st.velocity(i),
        });
    }
}

/// Worker count from `SWE_THREADS`, if set to a positive integer.
pub fn thread_limit() -> Option<usize> {
    std::env::var("SWE_THREADS")
        .ok()?
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
}

/// Runs a scenario from `t = 0` to its final time.
///
/// Results do not depend on the number of worker threads.
pub fn run(scenario: &Scenario) -> Result<RunOutputs> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_limit() {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::invalid("SWE_THREADS", e.to_string()))?;
    pool.install(|| run_here(scenario))
}

fn run_here(scenario: &Scenario) -> Result<RunOutputs> {
    let mut sim = Simulation::new(scenario)?;
    let dx = sim.context().grid.dx();
    let g = sim.context().gravity();
    let periodic = scenario.boundary.is_periodic();
    let zx = bed_slope(sim.context().topography.values(), dx, periodic);
    let cells = probe_cells(&sim);
    let wants_snapshot = |t: f64| scenario.output.snapshots.contains(&t);

    let mut probes = Vec::new();
    let mut snapshots = Vec::new();
    let mut diagnostics = Vec::new();
    read_probes(&sim, &cells, &mut probes);
    if wants_snapshot(0.0) {
        snapshots.push(snapshot(&sim));
    }
    diagnostics.push(DiagnosticsRecord {
        t: 0.0,
        dt: 0.0,
        total_mass: sim.mass(),
        total_entropy: energy_record(sim.state(), 0.0, dx, g).total_entropy,
        mass_error: 0.0,
        decay_violations: 0,
        threshold_violations: 0,
        clamped_cells: 0,
        clamp_mass: 0.0,
    });

    while !sim.is_finished() {
        let prev = sim.state().clone();
        let (report, inputs) = sim.advance_with_inputs()?;
        let balance = entropy_residual(
            &prev,
            sim.state(),
            report.dt,
            dx,
            &inputs.sources,
            sim.context().topography.values(),
            &scenario.friction,
            g,
            periodic,
        );
        let signs = sign_check(&balance, &prev, &inputs.sources, &zx, &scenario.friction, g);
        read_probes(&sim, &cells, &mut probes);
        diagnostics.push(DiagnosticsRecord {
            t: sim.time(),
            dt: report.dt,
            total_mass: sim.mass(),
            total_entropy: energy_record(sim.state(), sim.time(), dx, g).total_entropy,
            mass_error: sim.balance().error(),
            decay_violations: signs.decay_violations,
            threshold_violations: signs.threshold_violations,
            clamped_cells: report.clamped_cells,
            clamp_mass: report.clamp_mass,
        });
        if wants_snapshot(sim.time()) {
            snapshots.push(snapshot(&sim));
        }
    }
    Ok(RunOutputs {
        probes,
        snapshots,
        diagnostics,
        steps: sim.steps(),
        final_time: sim.time(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::build;

    #[test]
    fn zero_final_time_keeps_initial_condition() {
        let mut s = build("uniform_rain_alpha", &[("final_time", "0")]).unwrap();
        s.output.snapshots = vec![0.0];
        let out = run(&s).unwrap();
        assert_eq!(out.steps, 0);
        assert_eq!(out.probes.len(), 1);
        assert_eq!(out.snapshots.len(), 1);
        assert_eq!(out.diagnostics.len(), 1);
    }

    #[test]
    fn snapshots_at_requested_times() {
        let mut s = build("lake_at_rest", &[("final_time", "0.05"), ("cells", "20")]).unwrap();
        s.output.snapshots = vec![0.02, 0.05];
        let out = run(&s).unwrap();
        let times: Vec<f64> = out.snapshots.iter().map(|s| s.t).collect();
        assert_eq!(times, vec![0.02, 0.05]);
        assert!(out.diagnostics.windows(2).all(|w| w[1].t > w[0].t));
    }
}
