use proptest::prelude::*;

use nstab::generators::{gen_random, gen_tournament, RandomSeats};
use nstab::io::{parse_assignment, parse_instance, serialize_assignment, serialize_instance};
use nstab::pathpartition::{initial_minimal_partition, insert_agent, phi, DirectedPath};
use nstab::stability::{envies, is_blocking_pair, obs1_holds, obs2_nonenvy, Side};
use nstab::{check, Assignment, DistanceBound, Instance};

fn shape() -> impl Strategy<Value = RandomSeats> {
    prop_oneof![
        Just(RandomSeats::Cycle),
        Just(RandomSeats::Path),
        Just(RandomSeats::Star),
        Just(RandomSeats::Tree),
        Just(RandomSeats::Gnp),
    ]
}

fn instance(min_n: usize) -> impl Strategy<Value = Instance> {
    (min_n..10usize, 0.0..1.0f64, shape(), any::<u64>()).prop_filter_map("seat shape needs more agents", |(n, p, s, seed)| {
        gen_random(n, p, s, seed).ok()
    })
}

fn with_assignment(min_n: usize) -> impl Strategy<Value = (Instance, Assignment)> {
    instance(min_n).prop_flat_map(|inst| {
        let n = inst.n();
        let perm = Just((0..n).collect::<Vec<_>>()).prop_shuffle();
        (Just(inst), perm.prop_map(|p| Assignment::from_occupants(p).unwrap()))
    })
}

fn cycle_with_assignment() -> impl Strategy<Value = (Instance, Assignment)> {
    (3..10usize, 0.0..1.0f64, any::<u64>()).prop_flat_map(|(n, p, seed)| {
        let inst = gen_random(n, p, RandomSeats::Cycle, seed).unwrap();
        let perm = Just((0..n).collect::<Vec<_>>()).prop_shuffle();
        (Just(inst), perm.prop_map(|p| Assignment::from_occupants(p).unwrap()))
    })
}

proptest! {
    #[test]
    fn swapping_twice_is_the_identity((inst, asg) in with_assignment(2), i in 0usize..10, j in 0usize..10) {
        let (i, j) = (i % inst.n(), j % inst.n());
        prop_assume!(i != j);
        let once = asg.swap(i, j).unwrap();
        prop_assert_eq!(once.seat(i), asg.seat(j));
        prop_assert_eq!(once.swap(i, j).unwrap(), asg);
    }

    #[test]
    fn blocking_is_mutual_envy((inst, asg) in with_assignment(2), i in 0usize..10, j in 0usize..10) {
        let (i, j) = (i % inst.n(), j % inst.n());
        prop_assume!(i != j);
        let mutual = envies(&inst, &asg, i, j).unwrap() && envies(&inst, &asg, j, i).unwrap();
        prop_assert_eq!(is_blocking_pair(&inst, &asg, i, j), mutual);
        prop_assert_eq!(is_blocking_pair(&inst, &asg, j, i), mutual);
    }

    #[test]
    fn stability_is_monotone_in_the_bound((inst, asg) in with_assignment(1)) {
        let verdicts: Vec<bool> = [1, 2, 3]
            .into_iter()
            .map(DistanceBound::Within)
            .chain([DistanceBound::Unbounded])
            .map(|b| check(&inst, &asg, b).stable())
            .collect();
        prop_assert!(verdicts.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn reported_witness_blocks_within_the_bound((inst, asg) in with_assignment(2), d in 1u32..4) {
        if let Some(w) = check(&inst, &asg, DistanceBound::Within(d)).witness {
            prop_assert!(w.i < w.j);
            prop_assert!(is_blocking_pair(&inst, &asg, w.i, w.j));
            prop_assert!(w.distance.unwrap() <= d);
        }
    }

    #[test]
    fn initial_partition_is_minimal_and_covers(inst in instance(1)) {
        let part = initial_minimal_partition(inst.prefs());
        prop_assert!(part.covers(inst.prefs()));
        prop_assert!(part.is_minimal(inst.prefs()));
        let mut seen = part.concatenation();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..inst.n()).collect::<Vec<_>>());
        if inst.n() >= 3 {
            let asg = phi(&part, inst.n()).unwrap();
            prop_assert_eq!(asg.occupants(), &part.concatenation()[..]);
        }
    }

    #[test]
    fn insertion_keeps_a_directed_path(n in 2usize..10, seed in any::<u64>(), s in 0usize..10) {
        // every two agents are comparable in a tournament
        let inst = gen_tournament(n, RandomSeats::Path, seed).unwrap();
        let prefs = inst.prefs();
        let s = s % inst.n();
        let part = initial_minimal_partition(prefs);
        for path in part.paths() {
            if path.vertices().contains(&s) || !prefs.approves(s, path.tail()) {
                continue;
            }
            let grown = insert_agent(prefs, path, s).unwrap();
            prop_assert_eq!(grown.len(), path.len() + 1);
            prop_assert_eq!(grown.tail(), path.tail());
            prop_assert!(DirectedPath::new(prefs, grown.into_vertices()).is_ok());
        }
    }

    #[test]
    fn observations_on_cycles((inst, asg) in cycle_with_assignment()) {
        let n = inst.n();
        for v in 0..n {
            let i = asg.occupant(v);
            let j = asg.occupant((v + 1) % n);
            let left = asg.occupant((v + n - 1) % n);
            if obs1_holds(&inst, &asg, v).unwrap() {
                prop_assert!(!is_blocking_pair(&inst, &asg, i, j));
            }
            if obs2_nonenvy(&inst, &asg, v, Side::Right).unwrap() {
                prop_assert!(!envies(&inst, &asg, i, left).unwrap());
            }
            if obs2_nonenvy(&inst, &asg, v, Side::Left).unwrap() {
                prop_assert!(!envies(&inst, &asg, i, j).unwrap());
            }
        }
    }

    #[test]
    fn documents_round_trip((inst, asg) in with_assignment(1)) {
        let text = serialize_instance(&inst);
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(serialize_instance(&back), text);
        prop_assert_eq!(parse_assignment(&back, &serialize_assignment(&inst, &asg)).unwrap(), asg);
    }
}
