//! Acceptance checks, shared by the `acceptance` test target and `kinsv verify`.
//!
//! Each check returns an [`Outcome`] carrying the measured values next to the
//! tolerance they were judged against. Runtime limits are part of the verdict.

use std::fmt;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::analytic::{classify_regime, uniform_rain_exact, Trend};
use crate::diagnostics::{bed_slope, entropy_residual, kinetic_energy, sign_check};
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::kinetic::{chi, truncated_moment, KineticDensity, MomentRequest};
use crate::quadrature::adaptive;
use crate::scenario::{
    Boundary, FrictionParams, InitialCondition, ModelVariant, OutputSpec, RunControls, Scenario,
};
use crate::scenarios::{build, mm_per_hour};
use crate::sources::{RateBox, SourceField};
use crate::stepper::{ordered_sum, Simulation};
use crate::topography::TopographySpec;

/// Suite names accepted by [`Verifier::suite`], in criterion order, plus `all`.
pub const SUITES: [&str; 11] = [
    "moments",
    "lake_at_rest",
    "filling_lake",
    "uniform_rain",
    "mass",
    "entropy",
    "flume",
    "legacy",
    "cascade",
    "dry_start",
    "all",
];

/// Flume plateau `R0 * 3.95 m`, in m^2/s.
pub fn flume_plateau() -> f64 {
    mm_per_hour(50.0) * 3.95
}

const ALPHAS: [f64; 7] = [-0.5, 0.0, 0.25, 0.5, 0.75, 1.0, 2.0];

#[derive(Debug, Clone)]
pub struct Outcome {
    pub id: usize,
    pub title: &'static str,
    pub passed: bool,
    /// Measured values against their tolerances.
    pub detail: String,
    /// Extra lines that do not enter the verdict.
    pub notes: Vec<String>,
    pub elapsed: Duration,
    pub limit: Duration,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {:>2} {}  {}: {} [{:.2} s, limit {} s]",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.detail,
            self.elapsed.as_secs_f64(),
            self.limit.as_secs()
        )?;
        for note in &self.notes {
            write!(f, "\n    note: {note}")?;
        }
        Ok(())
    }
}

struct Check {
    ok: bool,
    detail: String,
    notes: Vec<String>,
}

impl Check {
    fn new(ok: bool, detail: String) -> Self {
        Self {
            ok,
            detail,
            notes: Vec::new(),
        }
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAILED"
    }
}

/// The flume run, shared by the mass, hydrograph and dry-start checks.
#[derive(Debug, Clone)]
pub struct FlumeRun {
    /// `(t, q)` at the probe after every step, starting at `t = 0`.
    pub probe: Vec<(f64, f64)>,
    pub min_height: f64,
    pub clamp_mass: f64,
    pub rained_mass: f64,
    pub balance_error: f64,
    pub steps: usize,
    pub elapsed: Duration,
}

fn flume_run() -> Result<FlumeRun> {
    let start = Instant::now();
    let scenario = build::<&str, &str>("flume", &[])?;
    let mut sim = Simulation::new(&scenario)?;
    let cell = sim
        .context()
        .grid
        .locate(scenario.output.probes[0])
        .ok_or_else(|| Error::invalid("probe", "outside the flume"))?;
    let mut probe = vec![(0.0, sim.state().discharges()[cell])];
    let mut min_height = f64::INFINITY;
    while !sim.is_finished() {
        sim.advance()?;
        let h = sim.state().heights();
        min_height = h.iter().copied().fold(min_height, f64::min);
        probe.push((sim.time(), sim.state().discharges()[cell]));
    }
    let balance = sim.balance();
    Ok(FlumeRun {
        probe,
        min_height,
        clamp_mass: balance.clamp,
        rained_mass: balance.source,
        balance_error: balance.error().abs() / balance.source,
        steps: sim.steps(),
        elapsed: start.elapsed(),
    })
}

/// Runs the checks, computing the flume run at most once.
#[derive(Debug, Default)]
pub struct Verifier {
    flume: Option<std::result::Result<FlumeRun, String>>,
}

impl Verifier {
    pub fn new() -> Self {
        Self::default()
    }

    /// The shared flume run and the time it cost.
    fn flume(&mut self) -> (std::result::Result<&FlumeRun, String>, Duration) {
        let run = self
            .flume
            .get_or_insert_with(|| flume_run().map_err(|e| e.to_string()));
        let cost = run.as_ref().map(|r| r.elapsed).unwrap_or_default();
        (run.as_ref().map_err(Clone::clone), cost)
    }

    /// Runs criterion `id` (1 to 10).
    pub fn criterion(&mut self, id: usize) -> Result<Outcome> {
        let (title, limit) = match id {
            1 => ("kinetic moment identities", 1),
            2 => ("lake at rest", 5),
            3 => ("filling the lake", 5),
            4 => ("uniform rain closed forms", 120),
            5 => ("mass audit", 60),
            6 => ("entropy sign conditions", 60),
            7 => ("flume hydrograph shape", 120),
            8 => ("legacy equivalence", 60),
            9 => ("cascade ordering", 180),
            10 => ("dry start", 120),
            _ => {
                return Err(Error::invalid(
                    "criterion",
                    format!("expected 1 to 10, got {id}"),
                ))
            }
        };
        let start = Instant::now();
        // checks that read the shared flume run are charged its full cost
        let (check, borrowed) = match id {
            1 => (moments(), Duration::ZERO),
            2 => (lake_at_rest()?, Duration::ZERO),
            3 => (filling_lake()?, Duration::ZERO),
            4 => (uniform_rain()?, Duration::ZERO),
            5 => {
                let periodic = periodic_mass()?;
                let (run, cost) = self.flume();
                (mass_audit(periodic, run), cost)
            }
            6 => (entropy()?, Duration::ZERO),
            7 => {
                let (run, cost) = self.flume();
                (hydrograph(run), cost)
            }
            8 => (legacy()?, Duration::ZERO),
            9 => (cascade()?, Duration::ZERO),
            _ => {
                let (run, cost) = self.flume();
                (dry_start(run), cost)
            }
        };
        let measured = start.elapsed();
        let elapsed = measured.max(borrowed);
        let limit = Duration::from_secs(limit);
        Ok(Outcome {
            id,
            title,
            passed: check.ok && elapsed < limit,
            detail: check.detail,
            notes: check.notes,
            elapsed,
            limit,
        })
    }

    /// Runs a named suite from [`SUITES`].
    pub fn suite(&mut self, name: &str) -> Result<Vec<Outcome>> {
        if name == "all" {
            return (1..=10).map(|id| self.criterion(id)).collect();
        }
        match SUITES.iter().position(|&s| s == name) {
            Some(i) => Ok(vec![self.criterion(i + 1)?]),
            None => Err(Error::invalid(
                "suite",
                format!(
                    "unknown suite `{name}`; expected one of {}",
                    SUITES.join(", ")
                ),
            )),
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        (a - b).abs() / b.abs()
    }
}

fn moments() -> Check {
    let g = 9.81;
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let h = 10f64.powf(rng.gen_range(-4.0..2.0));
        let u = rng.gen_range(-20.0..20.0);
        let p = KineticDensity::new(h, u, g);
        let exact = [h, h * u, h * u * u + 0.5 * g * h * h];
        for (m, e) in exact.iter().enumerate() {
            let got = truncated_moment(&p, &MomentRequest::full(m as u32)).unwrap_or(f64::NAN);
            worst = worst.max(rel(got, *e));
        }
    }

    let (mut closed, mut oracle) = (0.0f64, 0.0f64);
    for g in [9.81, 1.0, 3.7] {
        let still = KineticDensity::new(1.0, 0.0, g);
        let c0 = truncated_moment(&still, &MomentRequest::full(0)).unwrap_or(f64::NAN);
        let c2 = truncated_moment(&still, &MomentRequest::full(2)).unwrap_or(f64::NAN);
        closed = closed.max(rel(c0, 1.0)).max(rel(c2, 0.5 * g));
        let r = (2.0 * g).sqrt();
        let q0 = adaptive(|w| chi(w, g), -r, r, 1e-13, 4096);
        let q2 = adaptive(|w| w * w * chi(w, g), -r, r, 1e-13, 4096);
        oracle = oracle.max(rel(q0, 1.0)).max(rel(q2, 0.5 * g));
    }
    let ok = worst <= 1e-12 && closed <= 1e-12 && oracle <= 1e-8;
    Check::new(
        ok,
        format!(
            "200 random (h,u): max rel err {worst:.2e} (tol 1e-12); chi closed form {closed:.2e} (tol 1e-12); chi vs quadrature {oracle:.2e} (tol 1e-8)"
        ),
    )
}

fn lake_at_rest() -> Result<Check> {
    let scenario = build("lake_at_rest", &[("final_time", "1e9")])?;
    let mut sim = Simulation::new(&scenario)?;
    let z = sim.context().topography.values().to_vec();
    let (mut du, mut ds) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        sim.advance()?;
        let s = sim.state();
        for (i, (h, zi)) in s.heights().iter().zip(&z).enumerate() {
            du = du.max(s.velocity(i).abs());
            ds = ds.max((h + zi - 1.0).abs());
        }
    }
    Ok(Check::new(
        du <= 1e-12 && ds <= 1e-12,
        format!(
            "N={}, 1000 steps: max|u| {du:.2e} (tol 1e-12), max|h+Z-1| {ds:.2e} (tol 1e-12)",
            z.len()
        ),
    ))
}

fn filling_lake() -> Result<Check> {
    let rate = 1e-3;
    let scenario = build(
        "filling_lake",
        &[("final_time", "1e9"), ("rain_rate", "1e-3")],
    )?;
    let mut sim = Simulation::new(&scenario)?;
    let z = sim.context().topography.values().to_vec();
    let h0 = sim.state().heights().to_vec();
    let mut gains = Vec::with_capacity(1000);
    let mut spread = 0.0f64;
    for _ in 0..1000 {
        let report = sim.advance()?;
        gains.push(report.dt * rate);
        let eta = sim.state().free_surface(&z);
        let (lo, hi) = eta
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &e| {
                (lo.min(e), hi.max(e))
            });
        spread = spread.max(hi - lo);
    }
    let expected = ordered_sum(&gains);
    let h = sim.state().heights();
    let gain_err = (0..h.len())
        .map(|i| rel(h[i] - h0[i], expected))
        .fold(0.0, f64::max);
    Ok(Check::new(
        spread <= 1e-10 && gain_err <= 1e-12,
        format!("1000 steps: surface spread {spread:.2e} m (tol 1e-10), gain rel err {gain_err:.2e} (tol 1e-12)"),
    ))
}

/// `(h, q, u, K)` averaged over the cells.
fn means(sim: &Simulation) -> (f64, f64, f64, f64) {
    let s = sim.state();
    let n = s.len() as f64;
    let k: Vec<f64> = (0..s.len())
        .map(|i| kinetic_energy(s.heights()[i], s.velocity(i)))
        .collect();
    let u = s.velocities();
    (
        ordered_sum(s.heights()) / n,
        ordered_sum(s.discharges()) / n,
        ordered_sum(&u) / n,
        ordered_sum(&k) / n,
    )
}

fn rain_alpha(alpha: f64, extra: &[(&str, String)]) -> Result<Scenario> {
    let mut overrides = vec![("alpha", alpha.to_string())];
    overrides.extend(extra.iter().cloned());
    build("uniform_rain_alpha", &overrides)
}

fn trend(before: f64, after: f64) -> Trend {
    Trend::of(after - before, 1e-3 * before.abs().max(after.abs()))
}

fn uniform_rain() -> Result<Check> {
    let mut ok = true;
    let mut parts = Vec::new();
    for alpha in ALPHAS {
        let scenario = rain_alpha(alpha, &[])?;
        let t_end = scenario.run.final_time;
        let mut sim = Simulation::new(&scenario)?;
        let (_, q0, u0, k0) = means(&sim);
        while !sim.is_finished() {
            sim.advance()?;
        }
        let (h_ref, q_ref, _) = uniform_rain_exact(t_end, alpha);
        let s = sim.state();
        let eh = s
            .heights()
            .iter()
            .map(|&h| rel(h, h_ref))
            .fold(0.0, f64::max);
        let eq = s
            .discharges()
            .iter()
            .map(|&q| rel(q, q_ref))
            .fold(0.0, f64::max);
        let (_, q1, u1, k1) = means(&sim);
        let got = (trend(q0, q1), trend(u0, u1), trend(k0, k1));
        let regime = classify_regime(alpha);
        let signs = got == regime.trends();
        let this = eh <= 1e-3 && eq <= 1e-3 && signs;
        ok &= this;
        parts.push(format!(
            "a={alpha}: h {eh:.1e} q {eq:.1e} regime {} {}",
            regime.label(),
            if signs { "signs ok" } else { "signs WRONG" }
        ));
    }
    Ok(Check::new(ok, format!("{} (tol 1e-3)", parts.join("; "))))
}

fn periodic_mass() -> Result<Check> {
    let scenario = rain_alpha(2.0, &[])?;
    let mut sim = Simulation::new(&scenario)?;
    let m0 = sim.mass();
    while !sim.is_finished() {
        sim.advance()?;
    }
    // unit rain over [0, 10) during [0, 1)
    let supplied = 10.0 * scenario.run.final_time;
    let err = rel(sim.mass() - m0, supplied);
    Ok(Check::new(
        err <= 1e-10,
        format!("periodic: |dmass - R L T| rel {err:.2e} (tol 1e-10)"),
    ))
}

fn mass_audit(periodic: Check, flume: std::result::Result<&FlumeRun, String>) -> Check {
    match flume {
        Ok(run) => {
            let ok = periodic.ok && run.balance_error <= 1e-8;
            Check::new(
                ok,
                format!(
                    "{}; flume: balance rel err {:.2e} (tol 1e-8)",
                    periodic.detail, run.balance_error
                ),
            )
        }
        Err(e) => Check::new(false, format!("{}; flume run failed: {e}", periodic.detail)),
    }
}

/// Periodic flat channel losing water everywhere: `I > 0`, no rain.
pub fn drain_scenario() -> Scenario {
    let (length, cells) = (10.0, 200);
    let dx = length / cells as f64;
    let height: Vec<f64> = (0..cells)
        .map(|i| 1.0 + 0.2 * (2.0 * std::f64::consts::PI * (i as f64 + 0.5) * dx / length).sin())
        .collect();
    let discharge = height.iter().map(|h| 0.3 * h).collect();
    Scenario {
        grid: GridSpec { length, cells },
        topography: TopographySpec::Flat { elevation: 0.0 },
        initial: InitialCondition::Cells { height, discharge },
        boundary: Boundary::PERIODIC,
        sources: SourceField {
            rain: vec![],
            infiltration: vec![RateBox::new([0.0, 2.0], [0.0, length], 0.1)],
        },
        friction: FrictionParams {
            kappa_lam: 0.05,
            ..FrictionParams::frictionless(1.0)
        },
        run: RunControls::new(2.0),
        output: OutputSpec::default(),
    }
}

fn entropy() -> Result<Check> {
    let scenario = drain_scenario();
    let mut sim = Simulation::new(&scenario)?;
    let dx = sim.context().grid.dx();
    let g = sim.context().gravity();
    let z = sim.context().topography.values().to_vec();
    let zx = bed_slope(&z, dx, true);
    let (mut violations, mut clamped, mut assessed) = (0usize, 0usize, 0usize);
    let mut margin = f64::NEG_INFINITY;
    while !sim.is_finished() {
        let prev = sim.state().clone();
        let (report, inputs) = sim.advance_with_inputs()?;
        clamped += report.clamped_cells;
        let b = entropy_residual(
            &prev,
            sim.state(),
            report.dt,
            dx,
            &inputs.sources,
            &z,
            &scenario.friction,
            g,
            true,
        );
        violations +=
            sign_check(&b, &prev, &inputs.sources, &zx, &scenario.friction, g).decay_violations;
        for i in (0..b.lhs.len()).filter(|&i| b.assessed[i]) {
            assessed += 1;
            margin = margin.max(b.lhs[i] - b.tolerance[i]);
        }
    }
    let drain_ok = violations == 0 && clamped == 0 && assessed > 0;

    let mut flips = Vec::new();
    let mut flip_ok = true;
    for (alpha, want) in [(0.45, 1.0), (0.55, -1.0)] {
        let mut sim = Simulation::new(&rain_alpha(alpha, &[])?)?;
        let mut k = means(&sim).3;
        let mut wrong = 0usize;
        while !sim.is_finished() {
            sim.advance()?;
            let next = means(&sim).3;
            if (next - k) * want <= 0.0 {
                wrong += 1;
            }
            k = next;
        }
        flip_ok &= wrong == 0;
        flips.push(format!(
            "a={alpha}: dK {} at every step ({wrong} exceptions)",
            if want > 0.0 { "> 0" } else { "< 0" }
        ));
    }
    Ok(Check::new(
        drain_ok && flip_ok,
        format!(
            "drain: {violations} violations over {assessed} cell-steps, max(LHS - tol) {margin:.2e}, {clamped} clamps; {}",
            flips.join("; ")
        ),
    ))
}

/// Time-weighted means of a piecewise-constant series over `[k, k+1)` windows.
fn window_means(series: &[(f64, f64)], from: f64, to: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut lo = from;
    while lo + 1.0 <= to {
        let hi = lo + 1.0;
        let (mut acc, mut span) = (0.0, 0.0);
        for w in series.windows(2) {
            let (a, b) = (w[0].0.max(lo), w[1].0.min(hi));
            if b > a {
                acc += w[0].1 * (b - a);
                span += b - a;
            }
        }
        out.push((lo, if span > 0.0 { acc / span } else { 0.0 }));
        lo = hi;
    }
    out
}

fn hydrograph(run: std::result::Result<&FlumeRun, String>) -> Check {
    let run = match run {
        Ok(r) => r,
        Err(e) => return Check::new(false, format!("flume run failed: {e}")),
    };
    let plateau = flume_plateau();
    let smooth = window_means(&run.probe, 5.0, 125.0);
    let peak = smooth.iter().enumerate().fold(
        0,
        |best, (i, w)| if w.1 > smooth[best].1 { i } else { best },
    );
    let drops = smooth[..=peak]
        .windows(2)
        .filter(|w| w[1].1 < w[0].1)
        .count();
    let rise_ok = drops == 0 && smooth[peak].1 > 0.0;

    let band: Vec<f64> = run
        .probe
        .iter()
        .filter(|(t, _)| (80.0..=125.0).contains(t))
        .map(|&(_, q)| q / plateau - 1.0)
        .collect();
    let dev = band.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    let plateau_ok = !band.is_empty() && dev <= 0.05;

    let (t_end, q_end) = *run.probe.last().unwrap_or(&(0.0, f64::NAN));
    let below = run
        .probe
        .iter()
        .rev()
        .take_while(|(_, q)| q.abs() < 0.05 * plateau)
        .last()
        .map(|p| p.0);
    let tail_ok = t_end >= 250.0 && q_end.abs() < 0.05 * plateau;

    let mut check = Check::new(
        rise_ok && plateau_ok && tail_ok,
        format!(
            "(a) rise to smoothed peak {:.3e} at t={:.0} s: {drops} decreasing windows {}; (b) max |q/plateau - 1| on [80,125] s {dev:.2e} (tol 0.05) {}; (c) q(250 s)/plateau {:.2e} (tol 0.05) {}",
            smooth[peak].1,
            smooth[peak].0,
            verdict(rise_ok),
            verdict(plateau_ok),
            q_end.abs() / plateau,
            verdict(tail_ok)
        ),
    );
    check.notes.push(format!(
        "plateau reference R0 * 3.95 m = {plateau:.4e} m^2/s"
    ));
    if let Some(t) = below {
        check.notes.push(format!(
            "discharge stays below 5% of plateau from t = {t:.1} s"
        ));
    }
    check
}

fn lockstep(alpha: f64, infiltration: f64) -> Result<(f64, usize)> {
    let make = |model: ModelVariant| -> Result<Simulation> {
        let mut s = rain_alpha(alpha, &[])?;
        s.friction.model = model;
        if infiltration != 0.0 {
            s.sources.infiltration = vec![RateBox::new(
                [0.0, s.run.final_time],
                [0.0, s.grid.length],
                infiltration,
            )];
        }
        Simulation::new(&s)
    };
    let mut ext = make(ModelVariant::Extended)?;
    let mut leg = make(ModelVariant::Legacy)?;
    let mut worst = 0.0f64;
    while !ext.is_finished() || !leg.is_finished() {
        if ext.is_finished() != leg.is_finished() {
            return Ok((f64::INFINITY, ext.steps()));
        }
        let a = ext.advance()?;
        let b = leg.advance()?;
        worst = worst.max(rel(a.dt, b.dt));
        let (x, y) = (ext.state(), leg.state());
        for i in 0..x.len() {
            let dh = (x.heights()[i] - y.heights()[i]).abs() / y.heights()[i].abs().max(1.0);
            let dq =
                (x.discharges()[i] - y.discharges()[i]).abs() / y.discharges()[i].abs().max(1.0);
            worst = worst.max(dh).max(dq);
        }
    }
    Ok((worst, ext.steps()))
}

fn legacy() -> Result<Check> {
    let (dry, n1) = lockstep(1.0, 0.0)?;
    let (wet, n2) = lockstep(1.0, -0.5)?;
    Ok(Check::new(
        dry <= 1e-12 && wet <= 1e-12,
        format!("a=1, I=0: max diff {dry:.2e} over {n1} steps; a=1, I=-0.5: max diff {wet:.2e} over {n2} steps (tol 1e-12)"),
    ))
}

/// Time after the peak at which the downstream depth first drops below 10% of it.
fn recession_time(alpha: f64, extra: &[(&str, String)]) -> Result<(f64, f64)> {
    let mut overrides = vec![
        ("alpha", alpha.to_string()),
        ("rain_duration", "20".to_string()),
    ];
    overrides.extend(extra.iter().cloned());
    let scenario = build("cascade_single", &overrides)?;
    let mut sim = Simulation::new(&scenario)?;
    let cell = sim.context().grid.cells() - 1;
    let mut series = vec![(0.0, sim.state().heights()[cell])];
    while !sim.is_finished() {
        sim.advance()?;
        series.push((sim.time(), sim.state().heights()[cell]));
    }
    let (i_peak, &(_, peak)) = series
        .iter()
        .enumerate()
        .fold(
            (0, &series[0]),
            |best, (i, p)| if p.1 > best.1 .1 { (i, p) } else { best },
        );
    let fall = series[i_peak..]
        .iter()
        .find(|p| p.1 < 0.1 * peak)
        .map_or(f64::INFINITY, |p| p.0);
    Ok((peak, fall))
}

fn ordered(times: &[f64]) -> bool {
    times.windows(2).all(|w| w[0] <= w[1])
}

fn cascade() -> Result<Check> {
    let alphas = [0.0, 1.0, 5.0];
    let mut times = Vec::new();
    let mut parts = Vec::new();
    for a in alphas {
        let (peak, fall) = recession_time(a, &[])?;
        times.push(fall);
        parts.push(format!(
            "a={a}: peak {peak:.3e} m, below 10% at t={fall:.2} s"
        ));
    }
    let mut check = Check::new(
        ordered(&times),
        format!("{} (non-decreasing required)", parts.join("; ")),
    );

    let heavy = [("rain_rate_mm_per_hour", "50".to_string())];
    let mut heavy_times = Vec::new();
    for a in alphas {
        heavy_times.push(recession_time(a, &heavy)?.1);
    }
    check.notes.push(format!(
        "with R0 = 50 mm/h (not judged): fall times {} s, {}",
        heavy_times
            .iter()
            .map(|t| format!("{t:.2}"))
            .collect::<Vec<_>>()
            .join(", "),
        if ordered(&heavy_times) {
            "non-decreasing"
        } else {
            "NOT non-decreasing"
        }
    ));
    Ok(check)
}

fn dry_start(run: std::result::Result<&FlumeRun, String>) -> Check {
    match run {
        Ok(r) => {
            let ok = r.min_height >= 0.0 && r.clamp_mass <= 1e-12 * r.rained_mass;
            Check::new(
                ok,
                format!(
                    "{} steps finite; min h {:.2e}; clamp mass {:.2e} vs rained {:.4e} (tol 1e-12 relative)",
                    r.steps, r.min_height, r.clamp_mass, r.rained_mass
                ),
            )
        }
        Err(e) => Check::new(false, format!("run aborted: {e}")),
    }
}
