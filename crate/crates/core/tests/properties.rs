use proptest::prelude::*;

use kinsv::grid::GridSpec;
use kinsv::io::{parse_scenario, serialize_scenario};
use kinsv::kinetic::{transmitted_moment, truncated_moment, KineticDensity, MomentRequest, Side};
use kinsv::scenario::{
    Boundary, BoundaryKind, FrictionParams, InitialCondition, ModelVariant, OutputSpec,
    RechargePlacement, RunControls, Scenario,
};
use kinsv::sources::{RateBox, SourceField};
use kinsv::stepper::Simulation;
use kinsv::topography::TopographySpec;

fn moment(p: &KineticDensity, m: u32, a: f64, b: f64) -> f64 {
    truncated_moment(p, &MomentRequest::between(m, a, b)).unwrap()
}

proptest! {
    #[test]
    fn full_moments_are_macroscopic(h in 1e-6f64..50.0, u in -30.0f64..30.0, g in 0.5f64..20.0) {
        let p = KineticDensity::new(h, u, g);
        let want = [h, h * u, h * u * u + 0.5 * g * h * h];
        for (m, w) in want.iter().enumerate() {
            let got = truncated_moment(&p, &MomentRequest::full(m as u32)).unwrap();
            prop_assert!((got - w).abs() <= 1e-12 * w.abs().max(h * g.sqrt() * 1e-3), "m={} {} vs {}", m, got, w);
        }
    }

    #[test]
    fn shifting_velocity_shifts_the_window(h in 1e-3f64..10.0, u in -5.0f64..5.0, c in -5.0f64..5.0,
                                           a in -15.0f64..15.0, len in 0.0f64..10.0) {
        let g = 9.81;
        let here = moment(&KineticDensity::new(h, u, g), 0, a, a + len);
        let moved = moment(&KineticDensity::new(h, u + c, g), 0, a + c, a + len + c);
        prop_assert!((here - moved).abs() <= 1e-12 * h.max(1.0));
    }

    #[test]
    fn windows_add_up(h in 1e-3f64..10.0, u in -5.0f64..5.0, m in 0u32..3,
                      a in -20.0f64..20.0, s in 0.0f64..10.0, t in 0.0f64..10.0) {
        let p = KineticDensity::new(h, u, 9.81);
        let whole = moment(&p, m, a, a + s + t);
        let parts = moment(&p, m, a, a + s) + moment(&p, m, a + s, a + s + t);
        let scale = moment(&p, m, f64::NEG_INFINITY, f64::INFINITY).abs().max(h);
        prop_assert!((whole - parts).abs() <= 1e-12 * scale.max(1.0) * (1.0 + u.abs()).powi(m as i32));
    }

    #[test]
    fn transmitted_mass_flux_is_the_open_tail(h in 1e-3f64..10.0, u in -5.0f64..5.0, jump in -20.0f64..20.0) {
        // mass flux is conserved across the jump: only the admitted particles count
        let p = KineticDensity::new(h, u, 9.81);
        let got = transmitted_moment(&p, 1, jump, Side::Positive).unwrap();
        let open = moment(&p, 1, (-jump).max(0.0).sqrt(), f64::INFINITY);
        prop_assert!((got - open).abs() <= 1e-12 * h.max(1.0));
    }

    #[test]
    fn transmitted_moments_respond_to_the_jump(h in 1e-3f64..10.0, u in -5.0f64..5.0,
                                               j1 in -20.0f64..20.0, dj in 0.0f64..10.0) {
        // with eta = sqrt(k^2 - J): m0 = int eta / sqrt(eta^2 + J) M, m2 = int eta sqrt(eta^2 + J) M
        let p = KineticDensity::new(h, u, 9.81);
        let at = |m, j| transmitted_moment(&p, m, j, Side::Positive).unwrap();
        let (lo, hi) = (at(2, j1), at(2, j1 + dj));
        prop_assert!(lo >= -1e-14);
        prop_assert!(lo <= hi + 1e-10 * hi.abs().max(1.0), "m2 {} > {}", lo, hi);
        let (j0, j1) = (j1.abs(), j1.abs() + dj);
        let (before, after) = (at(0, j0), at(0, j1));
        prop_assert!(after >= -1e-14);
        prop_assert!(after <= before + 1e-10 * before.abs().max(1.0), "m0 {} > {}", after, before);
    }
}

fn bump(amplitude: f64, center: f64) -> TopographySpec {
    TopographySpec::Gaussian {
        base: 0.0,
        amplitude,
        center,
        width: 1.0,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn still_water_stays_still(amplitude in 0.0f64..0.9, center in 1.0f64..9.0, level in 0.5f64..2.0,
                               walls in any::<bool>()) {
        let s = Scenario {
            grid: GridSpec { length: 10.0, cells: 60 },
            topography: bump(amplitude, center),
            initial: InitialCondition::Surface { level },
            boundary: if walls { Boundary { left: BoundaryKind::Wall, right: BoundaryKind::Wall } } else { Boundary::PERIODIC },
            sources: SourceField::default(),
            friction: FrictionParams::frictionless(1.0),
            run: RunControls::new(1e9),
            output: OutputSpec::default(),
        };
        let mut sim = Simulation::new(&s).unwrap();
        let h0 = sim.state().heights().to_vec();
        for _ in 0..100 {
            sim.advance().unwrap();
        }
        for (i, h) in sim.state().heights().iter().enumerate() {
            prop_assert!((h - h0[i]).abs() <= 1e-12);
            prop_assert!(sim.state().velocity(i).abs() <= 1e-12);
        }
    }

    #[test]
    fn periodic_runs_conserve_water(seed in proptest::collection::vec((0.0f64..2.0, -1.0f64..1.0), 40),
                                    rain in 0.0f64..0.1, alpha in -1.0f64..3.0) {
        let height: Vec<f64> = seed.iter().map(|p| p.0).collect();
        let discharge: Vec<f64> = seed.iter().map(|p| p.0 * p.1).collect();
        let s = Scenario {
            grid: GridSpec { length: 4.0, cells: 40 },
            topography: bump(0.3, 2.0),
            initial: InitialCondition::Cells { height, discharge },
            boundary: Boundary::PERIODIC,
            sources: SourceField::uniform_rain([0.0, 0.5], [1.0, 3.0], rain),
            friction: FrictionParams::frictionless(alpha),
            run: RunControls::new(0.5),
            output: OutputSpec::default(),
        };
        let mut sim = Simulation::new(&s).unwrap();
        while !sim.is_finished() {
            sim.advance().unwrap();
            prop_assert!(sim.state().heights().iter().all(|&h| h >= 0.0 && h.is_finite()));
        }
        let b = sim.balance();
        prop_assert!(b.relative_error() <= 1e-12, "{:?}", b);
        prop_assert!((b.source - rain * 2.0 * 0.5).abs() <= 1e-12);
    }
}

fn boundary() -> impl Strategy<Value = Boundary> {
    let side = prop_oneof![Just(BoundaryKind::Wall), Just(BoundaryKind::Outflow)];
    prop_oneof![
        Just(Boundary::PERIODIC),
        (side.clone(), side).prop_map(|(left, right)| Boundary { left, right }),
    ]
}

fn topography(cells: usize) -> impl Strategy<Value = TopographySpec> {
    prop_oneof![
        (-5.0f64..5.0).prop_map(|elevation| TopographySpec::Flat { elevation }),
        (-1.0f64..1.0, -0.1f64..0.1)
            .prop_map(|(at_origin, slope)| TopographySpec::Linear { at_origin, slope }),
        proptest::collection::vec(-1.0f64..1.0, 2..6).prop_map(|zs| {
            let step = 1.0 / (zs.len() - 1) as f64;
            TopographySpec::PiecewiseLinear {
                points: zs
                    .iter()
                    .enumerate()
                    .map(|(i, &z)| [i as f64 * step, z])
                    .collect(),
            }
        }),
        (0.0f64..1.0, -1.0f64..1.0, 0.0f64..1.0, 0.01f64..1.0).prop_map(
            |(base, amplitude, center, width)| {
                TopographySpec::Gaussian {
                    base,
                    amplitude,
                    center,
                    width,
                }
            }
        ),
        proptest::collection::vec(-1.0f64..1.0, cells)
            .prop_map(|values| TopographySpec::Cells { values }),
    ]
}

fn initial(cells: usize) -> impl Strategy<Value = InitialCondition> {
    prop_oneof![
        (0.0f64..3.0, -2.0f64..2.0)
            .prop_map(|(height, discharge)| InitialCondition::Uniform { height, discharge }),
        (-1.0f64..2.0).prop_map(|level| InitialCondition::Surface { level }),
        Just(InitialCondition::Dry),
        proptest::collection::vec((0.0f64..2.0, -1.0f64..1.0), cells).prop_map(|v| {
            InitialCondition::Cells {
                height: v.iter().map(|p| p.0).collect(),
                discharge: v.iter().map(|p| p.1).collect(),
            }
        }),
    ]
}

fn friction() -> impl Strategy<Value = FrictionParams> {
    (
        -2.0f64..6.0,
        0.0f64..1.0,
        0.0f64..1.0,
        any::<bool>(),
        any::<bool>(),
    )
        .prop_map(
            |(alpha, kappa_lam, kappa_tur, legacy, potential)| FrictionParams {
                alpha,
                kappa_lam,
                kappa_tur,
                model: if legacy {
                    ModelVariant::Legacy
                } else {
                    ModelVariant::Extended
                },
                recharge_placement: if potential {
                    RechargePlacement::Potential
                } else {
                    RechargePlacement::Source
                },
            },
        )
}

/// Boxes in consecutive time slots over the unit domain, so they never overlap.
fn boxes(final_time: f64, signed: bool) -> impl Strategy<Value = Vec<RateBox>> {
    let rate = if signed { -1e-3f64..1e-3 } else { 0.0f64..1e-3 };
    proptest::collection::vec((rate, 0.0f64..0.5, 0.5f64..1.0), 0..3).prop_map(move |v| {
        let slot = final_time / 3.0;
        v.iter()
            .enumerate()
            .map(|(k, &(r, x0, x1))| {
                RateBox::new([k as f64 * slot, (k as f64 + 1.0) * slot], [x0, x1], r)
            })
            .collect()
    })
}

fn scenario() -> impl Strategy<Value = Scenario> {
    (2usize..40, 0.1f64..100.0).prop_flat_map(|(cells, final_time)| {
        (
            topography(cells),
            initial(cells),
            boundary(),
            boxes(final_time, false),
            boxes(final_time, true),
            friction(),
            (0.05f64..=1.0, 1.0f64..20.0, 1e-12f64..1e-6),
            proptest::collection::vec(0.0f64..1.0, 0..4),
            proptest::collection::vec(0.0f64..=1.0, 0..4),
        )
            .prop_map(
                move |(
                    topography,
                    initial,
                    boundary,
                    rain,
                    infiltration,
                    friction,
                    run,
                    probes,
                    snaps,
                )| {
                    Scenario {
                        grid: GridSpec { length: 1.0, cells },
                        topography,
                        initial,
                        boundary,
                        sources: SourceField { rain, infiltration },
                        friction,
                        run: RunControls {
                            final_time,
                            cfl: run.0,
                            gravity: run.1,
                            h_dry: run.2,
                        },
                        output: OutputSpec {
                            probes,
                            snapshots: snaps.iter().map(|f| f * final_time).collect(),
                        },
                    }
                },
            )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn scenarios_survive_a_round_trip(s in scenario()) {
        prop_assume!(s.validate().is_ok());
        let text = serialize_scenario(&s).unwrap();
        let back = parse_scenario(&text).unwrap();
        prop_assert_eq!(back, s);
    }
}

#[test]
fn generated_scenarios_are_mostly_valid() {
    use proptest::strategy::ValueTree;
    use proptest::test_runner::TestRunner;
    let mut runner = TestRunner::deterministic();
    let valid = (0..100)
        .filter(|_| {
            scenario()
                .new_tree(&mut runner)
                .unwrap()
                .current()
                .validate()
                .is_ok()
        })
        .count();
    assert!(
        valid >= 90,
        "only {valid} of 100 generated scenarios validate"
    );
}
