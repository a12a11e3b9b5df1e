mod common;

use std::collections::HashSet;

use ejnet::analytics::analytic_rows;
use ejnet::broadcast::{run_all_to_all_observed, HalfDuplexViolation};
use ejnet::prelude::*;

fn net(a: i64, b: i64, n: u32) -> Network {
    Network::new(Modulus::new(a, b).unwrap(), n).unwrap()
}

const SMALL: [(i64, u32); 7] = [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (3, 1), (3, 2)];

#[test]
fn every_node_receives_exactly_once_within_nm_steps() {
    for (a, n) in SMALL {
        let g = net(a, a + 1, n);
        for algo in Algorithm::ALL {
            let t = run_one_to_all(&g, 0, algo).unwrap();
            assert_eq!(t.steps.len() as u32, n * g.layer_diameter());
            assert_eq!(t.total_receivers(), g.node_count() - 1);
            assert_eq!(t.first_receive[0], 0);
            assert!(t.first_receive[1..].iter().all(|&s| s >= 1));
            let hist: u64 = t.receive_histogram().iter().sum();
            assert_eq!(hist, g.node_count() - 1);
        }
    }
}

#[test]
fn senders_and_receivers_are_disjoint() {
    for (a, n) in SMALL {
        let g = net(a, a + 1, n);
        for algo in Algorithm::ALL {
            let t = run_one_to_all(&g, 0, algo).unwrap();
            for s in &t.steps {
                assert_eq!(s.active, s.sending + s.receiving);
                assert_eq!(s.free + s.active, g.node_count());
            }
            // no node is both a sender and a receiver in the same step
            for links in &t.links {
                let from: HashSet<u64> = links.uses.iter().map(|u| u.from).collect();
                assert!(links.uses.iter().all(|u| !from.contains(&u.to)));
            }
        }
    }
}

#[test]
fn simulation_matches_analytics() {
    for (a, n) in SMALL {
        let g = net(a, a + 1, n);
        for algo in Algorithm::ALL {
            let t = run_one_to_all(&g, 0, algo).unwrap();
            let rows = analytic_rows(g.modulus(), n, algo).unwrap();
            assert_eq!(rows.len(), t.steps.len());
            for (r, s) in rows.iter().zip(&t.steps) {
                assert_eq!(
                    r.senders,
                    s.sending.into(),
                    "{algo} a={a} n={n} step {}",
                    s.step
                );
                assert_eq!(r.receivers, s.receiving.into());
                assert_eq!(r.round, s.round.filter(|_| algo == Algorithm::Previous));
            }
        }
    }
}

#[test]
fn improved_first_step_fans_out_on_every_dimension() {
    for (a, n) in SMALL {
        let t = run_improved_one_to_all(&net(a, a + 1, n), 0).unwrap();
        assert_eq!(
            (t.steps[0].sending, t.steps[0].receiving),
            (1, 6 * u64::from(n))
        );
    }
}

#[test]
fn one_dimension_schedules_coincide() {
    for a in 1..=5 {
        let g = net(a, a + 1, 1);
        let p = run_previous_one_to_all(&g, 0).unwrap();
        let i = run_improved_one_to_all(&g, 0).unwrap();
        assert_eq!(p.first_receive, i.first_receive);
        assert_eq!(p.links, i.links);
        let counts = |t: &BroadcastTrace| -> Vec<_> {
            t.steps.iter().map(|s| (s.sending, s.receiving)).collect()
        };
        assert_eq!(counts(&p), counts(&i));
    }
}

#[test]
fn one_to_all_respects_half_duplex() {
    for (a, n) in SMALL {
        let g = net(a, a + 1, n);
        for algo in Algorithm::ALL {
            run_one_to_all(&g, 0, algo)
                .unwrap()
                .verify_half_duplex()
                .unwrap();
        }
    }
}

#[test]
fn rejects_unsupported_inputs() {
    assert!(run_improved_one_to_all(&net(2, 4, 1), 0).is_err());
    assert!(run_previous_one_to_all(&net(2, 3, 1), 19).is_err());
    assert!(run_all_to_all(&net(3, 3, 1)).is_err());
    assert!(matches!(
        run_all_to_all(&net(3, 4, 3)),
        Err(Error::BudgetExceeded { .. })
    ));
}

/// Per-dimension offset of `to` from `from`, as residues.
fn offsets(g: &Network, from: u64, to: u64) -> Vec<Residue> {
    let (f, t) = (g.coord(from).unwrap(), g.coord(to).unwrap());
    f.coords()
        .iter()
        .zip(t.coords())
        .map(|(x, y)| g.modulus().reduce(y.value() - x.value()))
        .collect()
}

#[test]
fn all_to_all_phases_stay_in_their_sectors() {
    for (a, n) in [(1, 1), (1, 2), (2, 1), (2, 2), (3, 1)] {
        let g = net(a, a + 1, n);
        let d = g.layer_diameter();
        let mut seen = HashSet::new();
        let trace = run_all_to_all_observed(&g, |del| {
            let allowed = del.phase.sectors();
            for off in offsets(&g, del.originator, del.to) {
                if let Some(s) = sector_of(off) {
                    assert!(
                        allowed.contains(&s),
                        "phase {:?} reached sector {}",
                        del.phase,
                        s.number()
                    );
                }
            }
            assert!(del.phase.send_units().contains(&del.label.unit));
            assert!(
                seen.insert((del.phase, del.originator, del.to)),
                "duplicate delivery"
            );
        })
        .unwrap();

        let region = u64::from(d * (d + 1) + 1).pow(n) - 1;
        assert_eq!(trace.total_steps(), 3 * n * d);
        for p in &trace.phases {
            assert!(p.originators_heard.iter().all(|&h| u64::from(h) == region));
        }
        assert_eq!(trace.phases[0].new_origins[0] as u64, region);
        assert!(trace.is_complete());
        trace.verify_half_duplex().unwrap();
    }
}

#[test]
fn all_to_all_on_2_3_squared() {
    let g = net(2, 3, 2);
    let t = run_all_to_all(&g).unwrap();
    assert_eq!(t.total_steps(), 12);
    assert!(t.held_origins.iter().all(|&h| h == 360));
    let cumulative: Vec<u32> = t
        .phases
        .iter()
        .scan(0, |acc, p| {
            *acc += p.new_origins[0];
            Some(*acc)
        })
        .collect();
    assert_eq!(cumulative, vec![48, 323, 360]);
    t.verify_half_duplex().unwrap();
}

#[test]
fn single_dimension_phase_one_covers_two_sectors() {
    // on the 7-node network every node hears its two neighbors behind it
    let g = net(1, 2, 1);
    let t = run_all_to_all(&g).unwrap();
    assert_eq!(t.total_steps(), 3);
    assert!(t.phases[0].new_origins.iter().all(|&k| k == 2));
    assert!(t.is_complete());
}

#[test]
fn half_duplex_checker_flags_a_collision() {
    let l = |from, to, unit| LinkUse {
        from,
        to,
        label: LinkLabel::new(1, unit),
    };
    let steps = vec![StepLinks {
        step: 3,
        phase: None,
        uses: vec![
            l(5, 6, ejnet::ej::Unit::One),
            l(6, 5, ejnet::ej::Unit::NegOne),
        ],
    }];
    assert_eq!(
        verify_half_duplex(&steps),
        Err(HalfDuplexViolation::BothDirections {
            step: 3,
            a: 5,
            b: 6
        })
    );
}
