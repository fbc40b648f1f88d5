//! Named instance families and seeded random instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{AgentIdx, Assignment, Instance, PreferenceGraph, SeatGraph};

/// Labels `prefix0 .. prefix(n-1)`, zero-padded so that label order is
/// numeric order.
pub fn numbered_labels(prefix: &str, n: usize) -> Vec<String> {
    let width = n.saturating_sub(1).to_string().len();
    (0..n).map(|i| format!("{prefix}{i:0width$}")).collect()
}

/// Complete bipartite seats `K(t,t)` with agents `s1_j`, `s2_j`: a 2-cycle
/// between `s1_j` and `s2_j` for every `j`, and the directed `t`-cycles
/// `s1_1 -> s1_2 -> ... -> s1_1` and `s2_1 -> ... -> s2_1`.
///
/// For odd `t >= 3` no assignment is neighborhood stable.
pub fn gen_ktt(t: usize) -> Result<Instance> {
    if t < 3 || t.is_multiple_of(2) {
        return Err(Error::BadParameter(format!("ktt needs an odd t >= 3, got {t}")));
    }
    let width = t.to_string().len();
    let label = |row: usize, j: usize| format!("s{row}_{:0width$}", j + 1);
    let mut labels = Vec::with_capacity(2 * t);
    let mut arcs = Vec::with_capacity(4 * t);
    for j in 0..t {
        labels.push(label(1, j));
        labels.push(label(2, j));
        arcs.push((label(1, j), label(2, j)));
        arcs.push((label(2, j), label(1, j)));
        for row in 1..=2 {
            arcs.push((label(row, j), label(row, (j + 1) % t)));
        }
    }
    let edges = (0..t).flat_map(|u| (t..2 * t).map(move |v| (u, v)));
    let seats = SeatGraph::custom(2 * t, edges)?;
    Instance::from_labels(&labels, &arcs, seats)
}

/// Directed 6-cycle `a -> b -> ... -> f -> a` seated on two disjoint
/// triangles.
pub fn gen_two_triangles() -> Instance {
    let labels = ["a", "b", "c", "d", "e", "f"];
    let arcs: Vec<(&str, &str)> = (0..6).map(|k| (labels[k], labels[(k + 1) % 6])).collect();
    let seats = SeatGraph::custom(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
        .expect("two triangles");
    Instance::from_labels(&labels, &arcs, seats).expect("valid instance")
}

/// Four agents on a 4-cycle whose swap dynamics oscillate from the bundled
/// start `a@v0, b@v1, c@v2, d@v3`.
pub fn gen_prop1() -> (Instance, Assignment) {
    let inst = Instance::from_labels(
        &["a", "b", "c", "d"],
        &[("a", "b"), ("b", "d"), ("d", "c"), ("c", "a"), ("a", "d")],
        SeatGraph::cycle(4).expect("4-cycle"),
    )
    .expect("valid instance");
    (inst, Assignment::identity(4))
}

/// Four agents on a 4-path with the unstable start `a@v0, d@v1, b@v2, c@v3`.
pub fn gen_example1() -> (Instance, Assignment) {
    let inst = Instance::from_labels(
        &["a", "b", "c", "d"],
        &[("a", "c"), ("c", "a"), ("b", "d"), ("d", "b"), ("b", "a"), ("d", "c")],
        SeatGraph::path(4).expect("4-path"),
    )
    .expect("valid instance");
    let asg = Assignment::from_occupants(vec![0, 3, 1, 2]).expect("bijection");
    (inst, asg)
}

/// Seat graph families for random instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RandomSeats {
    Cycle,
    Path,
    /// Vertex 0 is the center.
    Star,
    /// Random recursive tree: vertex `v` hangs off a uniform earlier vertex.
    Tree,
    /// Each edge present independently with probability 1/2.
    Gnp,
}

impl std::str::FromStr for RandomSeats {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cycle" => Ok(RandomSeats::Cycle),
            "path" => Ok(RandomSeats::Path),
            "star" => Ok(RandomSeats::Star),
            "tree" => Ok(RandomSeats::Tree),
            "gnp" | "custom" => Ok(RandomSeats::Gnp),
            other => Err(Error::BadParameter(format!("unknown seat shape `{other}`"))),
        }
    }
}

pub fn random_seat_graph(n: usize, kind: RandomSeats, rng: &mut impl Rng) -> Result<SeatGraph> {
    match kind {
        RandomSeats::Cycle => SeatGraph::cycle(n),
        RandomSeats::Path => SeatGraph::path(n),
        RandomSeats::Star => SeatGraph::custom(n, (1..n).map(|v| (0, v))),
        RandomSeats::Tree => {
            let edges: Vec<_> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
            SeatGraph::custom(n, edges)
        }
        RandomSeats::Gnp => {
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.5) {
                        edges.push((u, v));
                    }
                }
            }
            SeatGraph::custom(n, edges)
        }
    }
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::BadParameter(format!("arc probability {p} outside [0, 1]")));
    }
    Ok(())
}

fn random_instance(
    n: usize,
    kind: RandomSeats,
    seed: u64,
    mut arcs: impl FnMut(&mut ChaCha8Rng) -> Vec<(AgentIdx, AgentIdx)>,
) -> Result<Instance> {
    if n == 0 {
        return Err(Error::BadParameter("need at least one agent".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let arcs = arcs(&mut rng);
    let seats = random_seat_graph(n, kind, &mut rng).map_err(|e| Error::BadParameter(e.to_string()))?;
    let prefs = PreferenceGraph::new(n, arcs)?;
    Instance::new(numbered_labels("x", n), prefs, seats)
}

/// Every ordered pair is an arc independently with probability `p`.
pub fn gen_random(n: usize, p: f64, kind: RandomSeats, seed: u64) -> Result<Instance> {
    check_probability(p)?;
    random_instance(n, kind, seed, |rng| {
        let mut arcs = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && rng.gen_bool(p) {
                    arcs.push((i, j));
                }
            }
        }
        arcs
    })
}

/// Acyclic preferences: arcs only run from a higher to a lower index, each
/// with probability `p`.
pub fn gen_random_dag(n: usize, p: f64, kind: RandomSeats, seed: u64) -> Result<Instance> {
    check_probability(p)?;
    random_instance(n, kind, seed, |rng| {
        let mut arcs = Vec::new();
        for i in 0..n {
            for j in 0..i {
                if rng.gen_bool(p) {
                    arcs.push((i, j));
                }
            }
        }
        arcs
    })
}

/// Random tournament: exactly one arc between every pair of agents.
pub fn gen_tournament(n: usize, kind: RandomSeats, seed: u64) -> Result<Instance> {
    random_instance(n, kind, seed, |rng| {
        let mut arcs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                arcs.push(if rng.gen_bool(0.5) { (i, j) } else { (j, i) });
            }
        }
        arcs
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::{parse_instance, serialize_instance};

    #[test]
    fn ktt_sizes() {
        let k3 = gen_ktt(3).unwrap();
        assert_eq!((k3.n(), k3.prefs().arc_count(), k3.seats().edge_count()), (6, 12, 9));
        let k5 = gen_ktt(5).unwrap();
        assert_eq!((k5.n(), k5.prefs().arc_count(), k5.seats().edge_count()), (10, 20, 25));
        assert!(matches!(gen_ktt(4), Err(Error::BadParameter(_))));
        assert!(matches!(gen_ktt(1), Err(Error::BadParameter(_))));
    }

    #[test]
    fn ktt_out_degree_two_and_arc_classes() {
        for t in [3, 5, 7, 11] {
            let inst = gen_ktt(t).unwrap();
            let prefs = inst.prefs();
            assert!((0..inst.n()).all(|i| prefs.out_degree(i) == 2));
            let (mut two_cycle, mut long_cycle) = (0, 0);
            for (i, j) in prefs.arcs() {
                let (li, lj) = (inst.label(i), inst.label(j));
                if li[1..2] != lj[1..2] {
                    assert_eq!(li[3..], lj[3..]);
                    two_cycle += 1;
                } else {
                    long_cycle += 1;
                }
            }
            assert_eq!(two_cycle, 2 * t);
            assert_eq!(long_cycle, 2 * t);
        }
    }

    #[test]
    fn named_instances() {
        let tt = gen_two_triangles();
        assert_eq!((tt.n(), tt.prefs().arc_count(), tt.seats().edge_count()), (6, 6, 6));
        let (p1, _) = gen_prop1();
        assert_eq!(p1.prefs().arc_count(), 5);
        let (e1, asg) = gen_example1();
        assert_eq!(e1.prefs().arc_count(), 6);
        assert_eq!(asg.seats(), &[0, 2, 3, 1]);
    }

    #[test]
    fn random_extremes_and_determinism() {
        let empty = gen_random(7, 0.0, RandomSeats::Cycle, 1).unwrap();
        assert_eq!(empty.prefs().arc_count(), 0);
        let full = gen_random(7, 1.0, RandomSeats::Path, 1).unwrap();
        assert_eq!(full.prefs().arc_count(), 42);
        let a = serialize_instance(&gen_random(6, 0.5, RandomSeats::Gnp, 42).unwrap());
        let b = serialize_instance(&gen_random(6, 0.5, RandomSeats::Gnp, 42).unwrap());
        assert_eq!(a, b);
        assert!(gen_random(6, 1.5, RandomSeats::Cycle, 0).is_err());
        assert!(gen_random(2, 0.5, RandomSeats::Cycle, 0).is_err());
    }

    #[test]
    fn generator_outputs_round_trip() {
        let mut all = vec![gen_ktt(3).unwrap(), gen_two_triangles(), gen_prop1().0, gen_example1().0];
        all.push(gen_random(9, 0.3, RandomSeats::Tree, 5).unwrap());
        all.push(gen_random_dag(9, 0.6, RandomSeats::Star, 5).unwrap());
        all.push(gen_tournament(9, RandomSeats::Cycle, 5).unwrap());
        for inst in all {
            assert_eq!(parse_instance(&serialize_instance(&inst)).unwrap(), inst);
        }
    }

    #[test]
    fn dag_arcs_point_down_and_tournaments_are_complete() {
        let dag = gen_random_dag(10, 0.7, RandomSeats::Tree, 3).unwrap();
        assert!(dag.prefs().arcs().all(|(i, j)| i > j));
        let t = gen_tournament(8, RandomSeats::Cycle, 3).unwrap();
        assert_eq!(t.prefs().arc_count(), 28);
        assert!((0..8).all(|i| (0..8).all(|j| i == j
            || t.prefs().approves(i, j) != t.prefs().approves(j, i))));
    }

    #[test]
    fn labels_sort_numerically() {
        let l = numbered_labels("x", 12);
        assert_eq!(l[0], "x00");
        let mut sorted = l.clone();
        sorted.sort();
        assert_eq!(sorted, l);
    }
}
