//! Utilities, envy, blocking pairs and stability verdicts at a seat-graph
//! distance bound.

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::model::{AgentIdx, Assignment, Instance, SeatShape};

/// How far apart (in seat-graph hops) the members of a blocking pair may sit
/// and still count. `Within(1)` is neighborhood stability; `Unbounded` is
/// classical exchange stability and also compares agents in different
/// components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DistanceBound {
    Within(u32),
    Unbounded,
}

impl DistanceBound {
    pub const NEIGHBORHOOD: DistanceBound = DistanceBound::Within(1);

    pub fn within(d: u32) -> Result<Self> {
        if d == 0 {
            return Err(Error::BadParameter("distance bound must be positive".into()));
        }
        Ok(DistanceBound::Within(d))
    }

    pub fn admits(self, distance: Option<u32>) -> bool {
        match (self, distance) {
            (DistanceBound::Unbounded, _) => true,
            (DistanceBound::Within(b), Some(d)) => d <= b,
            (DistanceBound::Within(_), None) => false,
        }
    }

    pub fn to_value(self) -> Value {
        match self {
            DistanceBound::Within(d) => Value::from(d),
            DistanceBound::Unbounded => Value::from("unbounded"),
        }
    }
}

impl fmt::Display for DistanceBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistanceBound::Within(d) => write!(f, "{d}"),
            DistanceBound::Unbounded => f.write_str("unbounded"),
        }
    }
}

impl std::str::FromStr for DistanceBound {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "unbounded" {
            return Ok(DistanceBound::Unbounded);
        }
        let d: u32 = s
            .parse()
            .map_err(|_| Error::BadParameter(format!("invalid distance bound `{s}`")))?;
        DistanceBound::within(d)
    }
}

/// A blocking pair `i < j` and the seat distance between them (`None` when
/// their seats are disconnected).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Witness {
    pub i: AgentIdx,
    pub j: AgentIdx,
    pub distance: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityReport {
    pub distance_bound: DistanceBound,
    pub witness: Option<Witness>,
}

impl StabilityReport {
    pub fn stable(&self) -> bool {
        self.witness.is_none()
    }

    pub fn to_value(&self, inst: &Instance) -> Value {
        let witness = match self.witness {
            Some(w) => json!({
                "i": inst.label(w.i),
                "j": inst.label(w.j),
                "distance": w.distance,
            }),
            None => Value::Null,
        };
        json!({
            "distance_bound": self.distance_bound.to_value(),
            "stable": self.stable(),
            "witness": witness,
        })
    }
}

/// Number of `i`'s approved neighbors under `asg`.
pub fn utility(inst: &Instance, asg: &Assignment, i: AgentIdx) -> usize {
    let prefs = inst.prefs();
    inst.seats()
        .neighbors(asg.seat(i))
        .iter()
        .filter(|&&v| prefs.approves(i, asg.occupant(v)))
        .count()
}

/// Utility of `i` after exchanging seats with `j`, without building the
/// swapped assignment.
pub fn utility_after_swap(inst: &Instance, asg: &Assignment, i: AgentIdx, j: AgentIdx) -> usize {
    let prefs = inst.prefs();
    let home = asg.seat(i);
    inst.seats()
        .neighbors(asg.seat(j))
        .iter()
        .filter(|&&v| {
            let who = if v == home { j } else { asg.occupant(v) };
            prefs.approves(i, who)
        })
        .count()
}

#[inline]
fn envies_unchecked(inst: &Instance, asg: &Assignment, i: AgentIdx, j: AgentIdx) -> bool {
    utility_after_swap(inst, asg, i, j) > utility(inst, asg, i)
}

/// Whether `i` strictly gains by exchanging seats with `j`.
pub fn envies(inst: &Instance, asg: &Assignment, i: AgentIdx, j: AgentIdx) -> Result<bool> {
    if i == j {
        return Err(Error::SameAgent(i));
    }
    Ok(envies_unchecked(inst, asg, i, j))
}

/// Mutual envy; `false` when `i == j`.
pub fn is_blocking_pair(inst: &Instance, asg: &Assignment, i: AgentIdx, j: AgentIdx) -> bool {
    i != j && envies_unchecked(inst, asg, i, j) && envies_unchecked(inst, asg, j, i)
}

/// Stability verdict at `bound`, with the lexicographically smallest
/// blocking pair `(i, j)`, `i < j`, as witness.
pub fn check(inst: &Instance, asg: &Assignment, bound: DistanceBound) -> StabilityReport {
    let n = inst.n();
    let seats = inst.seats();
    let mut witness = None;
    'outer: for i in 0..n {
        let partners: Vec<AgentIdx> = match bound {
            DistanceBound::Unbounded => (i + 1..n).collect(),
            DistanceBound::Within(d) if d == 1 || n > crate::model::DISTANCE_TABLE_LIMIT => {
                let mut js: Vec<_> = seats
                    .ball(asg.seat(i), d)
                    .into_iter()
                    .map(|v| asg.occupant(v))
                    .filter(|&j| j > i)
                    .collect();
                js.sort_unstable();
                js
            }
            DistanceBound::Within(_) => (i + 1..n)
                .filter(|&j| bound.admits(seats.distance(asg.seat(i), asg.seat(j))))
                .collect(),
        };
        for j in partners {
            if is_blocking_pair(inst, asg, i, j) {
                witness = Some(Witness {
                    i,
                    j,
                    distance: seats.distance(asg.seat(i), asg.seat(j)),
                });
                break 'outer;
            }
        }
    }
    StabilityReport {
        distance_bound: bound,
        witness,
    }
}

/// Verdict only, without locating the smallest witness.
pub fn is_stable(inst: &Instance, asg: &Assignment, bound: DistanceBound) -> bool {
    let n = inst.n();
    let seats = inst.seats();
    match bound {
        DistanceBound::Within(1) => !seats
            .edges()
            .any(|(u, v)| is_blocking_pair(inst, asg, asg.occupant(u), asg.occupant(v))),
        DistanceBound::Unbounded => {
            !(0..n).any(|i| (i + 1..n).any(|j| is_blocking_pair(inst, asg, i, j)))
        }
        DistanceBound::Within(_) => !(0..n).any(|i| {
            (i + 1..n).any(|j| {
                bound.admits(seats.distance(asg.seat(i), asg.seat(j)))
                    && is_blocking_pair(inst, asg, i, j)
            })
        }),
    }
}

/// Every blocking pair sitting on adjacent seats, as `(i, j)` with `i < j`,
/// sorted.
pub fn blocking_pairs_adjacent(inst: &Instance, asg: &Assignment) -> Vec<(AgentIdx, AgentIdx)> {
    let mut pairs: Vec<_> = inst
        .seats()
        .edges()
        .map(|(u, v)| {
            let (a, b) = (asg.occupant(u), asg.occupant(v));
            (a.min(b), a.max(b))
        })
        .filter(|&(i, j)| is_blocking_pair(inst, asg, i, j))
        .collect();
    pairs.sort_unstable();
    pairs
}

/// Which neighbor on the cycle: `Left` is `v(i-1)`, `Right` is `v(i+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

pub(crate) fn require_cycle(inst: &Instance) -> Result<usize> {
    if inst.seats().shape() != SeatShape::Cycle {
        return Err(Error::NotACycle);
    }
    Ok(inst.n())
}

/// Sufficient condition for the occupants of `v(i)` and `v(i+1)` not to block:
/// the right one does not approve the occupant of `v(i-1)`, or the left one
/// does not approve the occupant of `v(i+2)`.
pub fn obs1_holds(inst: &Instance, asg: &Assignment, i: usize) -> Result<bool> {
    let n = require_cycle(inst)?;
    let at = |k: usize| asg.occupant(k % n);
    let prefs = inst.prefs();
    let i = i % n;
    let p1 = !prefs.approves(at(i + 1), at(i + n - 1));
    let p2 = !prefs.approves(at(i), at(i + 2));
    Ok(p1 || p2)
}

/// True when the occupant of `v(i)` approves its neighbor on `side`, which
/// certifies that it does not envy the neighbor on the other side.
pub fn obs2_nonenvy(inst: &Instance, asg: &Assignment, i: usize, side: Side) -> Result<bool> {
    let n = require_cycle(inst)?;
    let i = i % n;
    let target = match side {
        Side::Left => (i + n - 1) % n,
        Side::Right => (i + 1) % n,
    };
    Ok(inst.prefs().approves(asg.occupant(i), asg.occupant(target)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_example1, gen_prop1, gen_two_triangles};
    use crate::model::{PreferenceGraph, SeatGraph};

    fn idx(inst: &Instance, l: &str) -> AgentIdx {
        inst.agent_index(l).unwrap()
    }

    #[test]
    fn example1_utilities_and_envy() {
        let (inst, asg) = gen_example1();
        let (b, d) = (idx(&inst, "b"), idx(&inst, "d"));
        assert_eq!(utility(&inst, &asg, b), 1);
        assert_eq!(utility(&inst, &asg, d), 1);
        assert!(envies(&inst, &asg, b, d).unwrap());
        assert!(envies(&inst, &asg, d, b).unwrap());
        let swapped = asg.swap(b, d).unwrap();
        assert_eq!(utility(&inst, &swapped, b), 2);
        assert_eq!(utility(&inst, &swapped, d), 2);
        assert_eq!(envies(&inst, &asg, b, b), Err(Error::SameAgent(b)));
    }

    #[test]
    fn example1_check() {
        let (inst, asg) = gen_example1();
        let rep = check(&inst, &asg, DistanceBound::NEIGHBORHOOD);
        assert_eq!(
            rep.witness,
            Some(Witness { i: idx(&inst, "b"), j: idx(&inst, "d"), distance: Some(1) })
        );
        let swapped = asg.swap(idx(&inst, "b"), idx(&inst, "d")).unwrap();
        assert!(check(&inst, &swapped, DistanceBound::Unbounded).stable());
    }

    #[test]
    fn no_arcs_means_zero_utility_and_no_envy() {
        let seats = SeatGraph::cycle(5).unwrap();
        let labels: Vec<String> = (0..5).map(|i| format!("x{i}")).collect();
        let inst = Instance::new(labels, PreferenceGraph::empty(5), seats).unwrap();
        let asg = Assignment::identity(5);
        for i in 0..5 {
            assert_eq!(utility(&inst, &asg, i), 0);
            assert!(obs1_holds(&inst, &asg, i).unwrap());
            assert!(!obs2_nonenvy(&inst, &asg, i, Side::Left).unwrap());
            assert!(!obs2_nonenvy(&inst, &asg, i, Side::Right).unwrap());
        }
        assert!(check(&inst, &asg, DistanceBound::Unbounded).stable());
    }

    #[test]
    fn satisfied_agents_do_not_envy() {
        let (inst, asg) = gen_prop1();
        let a = idx(&inst, "a");
        assert_eq!(utility(&inst, &asg, a), inst.prefs().out_degree(a));
        for j in (0..4).filter(|&j| j != a) {
            assert!(!envies(&inst, &asg, a, j).unwrap());
        }
    }

    #[test]
    fn prop1_after_first_swap_a_envies_d() {
        let (inst, asg) = gen_prop1();
        let asg1 = asg.swap(idx(&inst, "b"), idx(&inst, "c")).unwrap();
        let (a, d) = (idx(&inst, "a"), idx(&inst, "d"));
        assert_eq!(utility(&inst, &asg1, a), 1);
        assert!(envies(&inst, &asg1, a, d).unwrap());
        assert_eq!(utility_after_swap(&inst, &asg1, a, d), 2);
    }

    #[test]
    fn observations_on_prop1() {
        let (inst, asg) = gen_prop1();
        // pair (b, c) sits at (v1, v2); pair (a, b) at (v0, v1)
        assert!(!obs1_holds(&inst, &asg, 1).unwrap());
        assert!(obs1_holds(&inst, &asg, 0).unwrap());
        assert!(obs2_nonenvy(&inst, &asg, 0, Side::Left).unwrap());
        assert!(obs2_nonenvy(&inst, &asg, 0, Side::Right).unwrap());
    }

    #[test]
    fn observations_require_a_cycle() {
        let (inst, asg) = gen_example1();
        assert_eq!(obs1_holds(&inst, &asg, 0), Err(Error::NotACycle));
        assert_eq!(obs2_nonenvy(&inst, &asg, 0, Side::Left), Err(Error::NotACycle));
    }

    #[test]
    fn two_triangles_are_neighborhood_stable_but_not_stable() {
        let inst = gen_two_triangles();
        let asg = Assignment::identity(6);
        assert!(check(&inst, &asg, DistanceBound::NEIGHBORHOOD).stable());
        let rep = check(&inst, &asg, DistanceBound::Unbounded);
        assert!(!rep.stable());
        assert_eq!(rep.witness.unwrap().distance, None);
    }

    #[test]
    fn blocking_pairs_on_named_instances() {
        let (inst, asg) = gen_prop1();
        assert_eq!(blocking_pairs_adjacent(&inst, &asg), vec![(1, 2)]);
        let (inst, asg) = gen_example1();
        assert_eq!(blocking_pairs_adjacent(&inst, &asg), vec![(1, 3)]);
    }

    #[test]
    fn report_json_shape() {
        let (inst, asg) = gen_example1();
        let v = check(&inst, &asg, DistanceBound::NEIGHBORHOOD).to_value(&inst);
        assert_eq!(
            v,
            json!({"distance_bound": 1, "stable": false, "witness": {"i": "b", "j": "d", "distance": 1}})
        );
        let v = check(&inst, &asg.swap(1, 3).unwrap(), DistanceBound::Unbounded).to_value(&inst);
        assert_eq!(v, json!({"distance_bound": "unbounded", "stable": true, "witness": null}));
    }

    #[test]
    fn distance_bound_parsing() {
        assert_eq!("2".parse::<DistanceBound>().unwrap(), DistanceBound::Within(2));
        assert_eq!("unbounded".parse::<DistanceBound>().unwrap(), DistanceBound::Unbounded);
        assert!("0".parse::<DistanceBound>().is_err());
        assert!("far".parse::<DistanceBound>().is_err());
    }
}
