//! Randomized and exhaustive invariants on small instances.

mod common;

use ejnet::prelude::*;
use proptest::prelude::*;

fn modulus() -> impl Strategy<Value = Modulus> {
    (0i64..12, 1i64..12).prop_filter_map("valid generator", |(a, d)| Modulus::new(a, a + d).ok())
}

fn ej(r: i64) -> impl Strategy<Value = EjInt> {
    (-r..=r, -r..=r).prop_map(|(x, y)| EjInt::new(x, y))
}

proptest! {
    #[test]
    fn reduce_ignores_multiples_of_the_generator(q in modulus(), z in ej(1_000_000), k in ej(1000)) {
        let shifted = z + k * q.generator();
        prop_assert_eq!(q.reduce(shifted), q.reduce(z));
    }

    #[test]
    fn reduce_is_idempotent_and_congruent(q in modulus(), z in ej(1 << 40)) {
        let r = q.reduce(z);
        prop_assert_eq!(q.reduce(r.value()), r);
        prop_assert!(q.divides(z - r.value()));
        prop_assert!(r.weight() <= u64::from(q.diameter()));
        prop_assert_eq!(common::class_key(&q, z), common::class_key(&q, r.value()));
    }

    #[test]
    fn weight_is_minimal(q in modulus(), z in ej(10_000)) {
        prop_assert_eq!(q.weight(z), common::min_weight(&q, z));
    }

    #[test]
    fn multiplication_is_commutative_and_norm_multiplicative(p in ej(1 << 14), r in ej(1 << 14)) {
        prop_assert_eq!(p * r, r * p);
        prop_assert_eq!((p * r).norm().unwrap(), p.norm().unwrap() * r.norm().unwrap());
    }

    #[test]
    fn distance_is_a_metric_on_2_3(x in ej(30), y in ej(30), z in ej(30)) {
        let q = Modulus::new(2, 3).unwrap();
        let d = |u, v| q.distance(u, v).unwrap();
        prop_assert_eq!(d(x, y), d(y, x));
        prop_assert_eq!(d(x, x), 0);
        prop_assert!(d(x, z) <= d(x, y) + d(y, z));
    }

    #[test]
    fn broadcast_from_any_source_looks_the_same(source in 0u64..361, improved in any::<bool>()) {
        let g = Network::new(Modulus::new(2, 3).unwrap(), 2).unwrap();
        let algo = if improved { Algorithm::Improved } else { Algorithm::Previous };
        let base = run_one_to_all(&g, 0, algo).unwrap();
        let t = run_one_to_all(&g, source, algo).unwrap();
        prop_assert_eq!(&t.steps, &base.steps);
        prop_assert_eq!(t.first_receive_step(source), None);
    }
}

#[test]
fn distance_triangle_exhaustive_on_2_3() {
    let q = Modulus::new(2, 3).unwrap();
    let rs = q.residues();
    for &a in &rs {
        for &b in &rs {
            let ab = q.distance(a.value(), b.value()).unwrap();
            assert_eq!(ab, q.distance(b.value(), a.value()).unwrap());
            for &c in &rs {
                let ac = q.distance(a.value(), c.value()).unwrap();
                let bc = q.distance(b.value(), c.value()).unwrap();
                assert!(ac <= ab + bc);
            }
        }
    }
}

#[test]
fn neighbor_involution_exhaustive() {
    let g = Network::new(Modulus::new(3, 4).unwrap(), 2).unwrap();
    for v in 0..g.node_count() {
        for l in g.labels() {
            let w = g.neighbor_index(v, l);
            assert_eq!(g.neighbor_index(w, l.negate()), v);
        }
    }
    let v = g.coord(100).unwrap();
    for l in g.labels() {
        let w = g.neighbor(&v, l).unwrap();
        assert_eq!(g.neighbor(&w, l.negate()).unwrap(), v);
    }
}

#[test]
fn every_node_has_6n_distinct_neighbors() {
    let g = Network::new(Modulus::new(2, 3).unwrap(), 3).unwrap();
    assert_eq!(g.degree(), 18);
    for v in 0..g.node_count() {
        let mut ns: Vec<u64> = g.neighbors_of(v).map(|(_, w)| w).collect();
        assert!(!ns.contains(&v));
        ns.sort_unstable();
        ns.dedup();
        assert_eq!(ns.len(), 18, "node {v}");
    }
}

#[test]
fn coordinates_round_trip() {
    let g = Network::new(Modulus::new(1, 2).unwrap(), 4).unwrap();
    for v in 0..g.node_count() {
        assert_eq!(g.index(&g.coord(v).unwrap()).unwrap(), v);
    }
    assert!(g.coord(g.node_count()).is_err());
}
