use proptest::prelude::*;
use unruh_core::dynamics::{MapTrajectory, QubitState};
use unruh_core::information::{
    divisibility_report, fine_evolution, helstrom_curve, helstrom_norm, info_flow, max_increase, trace_distance,
    ExtendedState, HelstromInput,
};
use unruh_core::dynamics::Evolution;
use unruh_core::rates::{RateTable, TableOptions};
use unruh_core::worldline::Worldline;

fn table(w: f64) -> RateTable {
    TableOptions { taubar_max: 10.5, ..TableOptions::default() }.build(w, Worldline::switch_on()).unwrap()
}

fn ball_point() -> impl Strategy<Value = [f64; 3]> {
    (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0).prop_map(|(x, y, z)| {
        let n = (x * x + y * y + z * z).sqrt().max(1.0);
        [x / n, y / n, z / n]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn trace_distance_contracts_on_divisible_dynamics(a in ball_point(), b in ball_point()) {
        let t = table(0.5);
        let maps = MapTrajectory::solve(&t, &fine_evolution(false)).unwrap();
        let (p, q) = (QubitState { bloch: a }, QubitState { bloch: b });
        let d0 = trace_distance(&p, &q);
        for k in 1..=40 {
            let m = maps.at(0.25 * k as f64);
            prop_assert!(trace_distance(&m.apply(&p), &m.apply(&q)) <= d0 + 1e-8);
        }
    }

    #[test]
    fn free_rotation_leaves_distance_unchanged(a in ball_point(), b in ball_point()) {
        let t = table(1.6);
        let plain = MapTrajectory::solve(&t, &fine_evolution(false)).unwrap();
        let rotating = MapTrajectory::solve(&t, &fine_evolution(true)).unwrap();
        let (p, q) = (QubitState { bloch: a }, QubitState { bloch: b });
        for tau in [0.5, 2.0, 6.0, 10.0] {
            let (m1, m2) = (plain.at(tau), rotating.at(tau));
            let d1 = trace_distance(&m1.apply(&p), &m1.apply(&q));
            let d2 = trace_distance(&m2.apply(&p), &m2.apply(&q));
            prop_assert!((d1 - d2).abs() < 1e-12, "{tau}: {d1} {d2}");
        }
    }

    #[test]
    fn equal_priors_reduce_to_trace_distance(a in ball_point(), b in ball_point(), tau in 0.0f64..10.0) {
        let t = table(1.6);
        let maps = MapTrajectory::solve(&t, &fine_evolution(false)).unwrap();
        let m = maps.at(tau);
        let (p, q) = (QubitState { bloch: a }, QubitState { bloch: b });
        let input = HelstromInput::new(ExtendedState::product(&p, 2), ExtendedState::product(&q, 2), 0.5).unwrap();
        let d = trace_distance(&m.apply(&p), &m.apply(&q));
        prop_assert!((helstrom_norm(&input, &m) - d).abs() < 1e-10);
    }
}

#[test]
fn divisibility_examples() {
    let grid: Vec<f64> = (1..=200).map(|i| 0.05 * i as f64).collect();
    let ev = Evolution::default();
    let calm = divisibility_report(&table(0.9), &grid, &ev).unwrap();
    assert!(calm.iter().all(|r| r.cp == Some(true) && r.min_rate() >= 0.0));
    let rough = divisibility_report(&table(1.6), &grid, &ev).unwrap();
    assert!(rough.iter().any(|r| r.cp == Some(false)));
    for r in &rough {
        if r.cp == Some(false) {
            assert!(r.min_rate() < 0.0, "[{}, {}]", r.s, r.t);
        }
    }
}

/// On CP intervals the Helstrom norm may not grow; where it grows by more
/// than 1e-4 some rate must be negative.
#[test]
fn helstrom_consistent_with_divisibility() {
    let grid: Vec<f64> = (0..=200).map(|i| 0.05 * i as f64).collect();
    for w in [1.6, 4.0] {
        let t = table(w);
        let rows = divisibility_report(&t, &grid, &Evolution::default()).unwrap();
        let maps = MapTrajectory::solve(&t, &fine_evolution(false)).unwrap();
        for input in [HelstromInput::bell_pair(), HelstromInput::shifted_pair(), HelstromInput::flagged_excited()] {
            let e = helstrom_curve(&input, &maps, &grid);
            for (k, r) in rows.iter().enumerate() {
                let rise = e[k + 1] - e[k];
                if r.cp == Some(true) {
                    assert!(rise <= 1e-6, "ω̄ {w} [{}, {}] rise {rise}", r.s, r.t);
                }
                if rise > 1e-4 {
                    assert!(r.min_rate() < 0.0);
                }
            }
        }
    }
}

#[test]
fn maximally_entangled_equal_priors_never_rise() {
    let grid: Vec<f64> = (0..=500).map(|i| 0.02 * i as f64).collect();
    let t = table(4.0);
    let maps = MapTrajectory::solve(&t, &fine_evolution(false)).unwrap();
    for input in [HelstromInput::bell_pair(), HelstromInput::shifted_pair()] {
        let e = helstrom_curve(&input, &maps, &grid);
        assert_eq!(e[0].round(), 1.0);
        assert!(max_increase(&grid, &e).0 < 1e-9);
    }
    // the flagged pair rises once the map stops being positive
    let e = helstrom_curve(&HelstromInput::flagged_excited(), &maps, &grid);
    let (rise, at) = max_increase(&grid, &e);
    assert!(rise > 1e-4 && t.triple_at(at).g2 < 0.0, "{rise} at {at}");
}

#[test]
fn dephasing_flow_is_negative() {
    let t = TableOptions { taubar_max: 5.0, ..TableOptions::default() };
    let mut params = t.params(0.0, Worldline::switch_on());
    params.dephasing_only = true;
    let table = RateTable::build(params, 5.0, 101).unwrap();
    let maps = MapTrajectory::solve(&table, &fine_evolution(false)).unwrap();
    let (p, q) = (QubitState::new(1.0, 0.0, 0.0), QubitState::new(-1.0, 0.0, 0.0));
    let d = |tau: f64| trace_distance(&maps.at(tau).apply(&p), &maps.at(tau).apply(&q));
    for tau in [0.1, 1.0, 3.0, 4.9] {
        assert!(info_flow(d, tau, (0.0, 5.0)) < 0.0);
    }
}
