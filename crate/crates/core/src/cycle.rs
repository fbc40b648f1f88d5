//! Neighborhood-stable assignments on cycle seat graphs.
//!
//! Two regimes, decided by the preference graph alone:
//!
//! * some agent `w` has two approvers `s`, `t` with no arc between them:
//!   seat `s, w, t` on `v0..v2` and greedily extend, always preferring an
//!   unseated agent that approves the previous occupant;
//! * otherwise every two co-approvers are comparable. Lay a minimal path
//!   partition around the cycle and, while an adjacent blocking pair exists,
//!   rebuild the partition so that strictly more agents approve their
//!   clockwise neighbor. That count is at most `n`, so at most `n` rebuilds
//!   happen.

use crate::error::{Error, Result};
use crate::model::{AgentIdx, Assignment, Instance, PreferenceGraph};
use crate::pathpartition::{
    initial_minimal_partition, insert_agent, minimalize, phi, right_approval_count,
    DirectedPath, PathPartition,
};
use crate::stability::{check, is_blocking_pair, require_cycle, DistanceBound};

/// `s -> w <- t` with neither `s -> t` nor `t -> s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CaseOneTriple {
    pub s: AgentIdx,
    pub t: AgentIdx,
    pub w: AgentIdx,
}

impl CaseOneTriple {
    pub fn new(prefs: &PreferenceGraph, s: AgentIdx, t: AgentIdx, w: AgentIdx) -> Result<Self> {
        let distinct = s != t && s != w && t != w;
        if !distinct
            || !prefs.approves(s, w)
            || !prefs.approves(t, w)
            || prefs.approves(s, t)
            || prefs.approves(t, s)
        {
            return Err(Error::BadParameter(format!("({s}, {t}, {w}) is not a valid triple")));
        }
        Ok(CaseOneTriple { s, t, w })
    }
}

/// Lexicographically smallest `(w, s, t)` with `s < t`, or `None` when every
/// two approvers of a common agent are joined by an arc.
pub fn find_case1_triple(prefs: &PreferenceGraph) -> Option<CaseOneTriple> {
    (0..prefs.n()).find_map(|w| {
        let ins = prefs.in_neighbors(w);
        ins.iter().enumerate().find_map(|(k, &s)| {
            ins[k + 1..]
                .iter()
                .find(|&&t| !prefs.approves(s, t) && !prefs.approves(t, s))
                .map(|&t| CaseOneTriple { s, t, w })
        })
    })
}

/// Greedy fill: agent `q` at seat `k` approves the occupant of `k - 1`
/// whenever any unseated agent does.
pub(crate) fn greedy_fill(prefs: &PreferenceGraph, mut order: Vec<AgentIdx>) -> Vec<AgentIdx> {
    let n = prefs.n();
    let mut seated = vec![false; n];
    for &a in &order {
        seated[a] = true;
    }
    let mut cursor = 0;
    while order.len() < n {
        let prev = *order.last().expect("seed placed");
        let next = match prefs.in_neighbors(prev).iter().find(|&&q| !seated[q]) {
            Some(&q) => q,
            None => {
                while seated[cursor] {
                    cursor += 1;
                }
                cursor
            }
        };
        seated[next] = true;
        order.push(next);
    }
    order
}

/// Case-1 construction: `s@v0, w@v1, t@v2`, then the greedy fill.
pub fn solve_case1(inst: &Instance, triple: CaseOneTriple) -> Result<Assignment> {
    require_cycle(inst)?;
    let CaseOneTriple { s, t, w } = CaseOneTriple::new(inst.prefs(), triple.s, triple.t, triple.w)?;
    let order = greedy_fill(inst.prefs(), vec![s, w, t]);
    Assignment::from_occupants(order)
}

/// Which rebuild the blocking pair triggered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rebuild {
    /// Blocking path had two agents: split across the neighboring paths.
    Split,
    /// Blocking path had three or more agents: rerouted into the next path.
    Reroute,
    /// Two paths, the pair straddling them: the longer path closes a cycle
    /// and is rotated behind the singleton.
    Rotate,
}

/// One application of [`improve_partition`], with the quantities its
/// correctness argument is about.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImprovementStep {
    pub pair: (AgentIdx, AgentIdx),
    pub rebuild: Rebuild,
    pub paths_before: usize,
    pub paths_after: usize,
    pub right_approvals_before: usize,
    pub right_approvals_after: usize,
}

/// Rebuilds a minimal partition around an adjacent blocking pair of
/// `phi(part)`. Returns the new minimal partition and the rebuild kind.
fn rebuild_partition(
    inst: &Instance,
    part: &PathPartition,
    asg: &Assignment,
    pair: (AgentIdx, AgentIdx),
) -> Result<(PathPartition, Rebuild)> {
    let n = require_cycle(inst)?;
    let prefs = inst.prefs();
    if phi(part, n)? != *asg {
        return Err(Error::BadParameter("assignment is not the layout of the partition".into()));
    }
    let (a, b) = pair;
    let not_blocking = |reason: &str| Error::NotABlockingPair { i: a, j: b, reason: reason.into() };
    let (left, right) = if (asg.seat(a) + 1) % n == asg.seat(b) {
        (a, b)
    } else if (asg.seat(b) + 1) % n == asg.seat(a) {
        (b, a)
    } else {
        return Err(not_blocking("seats are not adjacent"));
    };
    if !is_blocking_pair(inst, asg, a, b) {
        return Err(not_blocking("no mutual envy"));
    }

    let mut paths = part.paths().to_vec();
    let k = paths.len();
    let r = paths
        .iter()
        .position(|p| p.vertices().contains(&left))
        .expect("partition covers every agent");
    let offset = paths[r].vertices().iter().position(|&v| v == left).expect("found above");
    let next_idx = (r + 1) % k;
    if offset + 1 == paths[r].len() {
        // The pair straddles two paths. With three or more paths this
        // contradicts minimality. With exactly two, the clockwise path is the
        // single agent `right`, `left` approves the head of its own path so
        // that path closes a directed cycle, and `right` approves the agent
        // before `left`: rotate the cycle to start there and put `right` first.
        let own = paths[r].vertices();
        let m = own.len();
        let closes = k == 2
            && m >= 2
            && paths[next_idx].len() == 1
            && prefs.approves(left, own[0])
            && prefs.approves(right, own[m - 2]);
        if !closes {
            return Err(Error::TypeTwoDetected { i: a.min(b), j: a.max(b) });
        }
        let mut merged = Vec::with_capacity(m + 1);
        merged.push(right);
        merged.extend_from_slice(&own[m - 2..]);
        merged.extend_from_slice(&own[..m - 2]);
        let merged = DirectedPath::from_raw(merged);
        debug_assert!(merged.is_valid(prefs));
        return Ok((PathPartition::new(vec![merged]), Rebuild::Rotate));
    }
    if paths[r].tail() != right {
        return Err(Error::InvariantViolated(format!(
            "blocking agent {right} approves its clockwise neighbor"
        )));
    }

    let rebuild = if paths[r].len() == 2 {
        // left is the head of P_r; right moves into P_{r-1}, left heads P_{r+1}
        let prev_idx = (r + k - 1) % k;
        paths[prev_idx] = insert_agent(prefs, &paths[prev_idx], right)?;
        let next = &paths[next_idx];
        if !prefs.approves(left, next.head()) {
            return Err(Error::InvariantViolated(format!("{left} does not approve the next head")));
        }
        let mut merged = vec![left];
        merged.extend_from_slice(next.vertices());
        paths[next_idx] = DirectedPath::from_raw(merged);
        paths.remove(r);
        Rebuild::Split
    } else {
        let body = &paths[r].vertices()[..paths[r].len() - 2];
        let tilde = insert_agent(prefs, &DirectedPath::from_raw(body.to_vec()), right)?;
        let mut merged = tilde.into_vertices();
        merged.push(left);
        if k == 1 {
            // the clockwise path is this one; the result closes a cycle
            paths[0] = DirectedPath::from_raw(merged);
        } else {
            let next = &paths[next_idx];
            if !prefs.approves(left, next.head()) {
                return Err(Error::InvariantViolated(format!(
                    "{left} does not approve the next head"
                )));
            }
            merged.extend_from_slice(next.vertices());
            paths[next_idx] = DirectedPath::from_raw(merged);
            paths.remove(r);
        }
        Rebuild::Reroute
    };
    Ok((minimalize(prefs, PathPartition::new(paths)), rebuild))
}

/// The partition rebuild driving the Case-2 loop; `pair` must be an adjacent
/// blocking pair of `asg = phi(part)`.
pub fn improve_partition(
    inst: &Instance,
    part: &PathPartition,
    asg: &Assignment,
    pair: (AgentIdx, AgentIdx),
) -> Result<PathPartition> {
    rebuild_partition(inst, part, asg, pair).map(|(p, _)| p)
}

/// Case-2 loop with every improvement recorded.
pub fn solve_case2_traced(inst: &Instance) -> Result<(Assignment, Vec<ImprovementStep>)> {
    let n = require_cycle(inst)?;
    let prefs = inst.prefs();
    let mut part = initial_minimal_partition(prefs);
    let mut asg = phi(&part, n)?;
    let mut steps = Vec::new();
    loop {
        let report = check(inst, &asg, DistanceBound::NEIGHBORHOOD);
        let Some(w) = report.witness else {
            return Ok((asg, steps));
        };
        if steps.len() == n {
            return Err(Error::InvariantViolated(format!(
                "still unstable after {n} partition rebuilds"
            )));
        }
        let (next, rebuild) = rebuild_partition(inst, &part, &asg, (w.i, w.j))?;
        let next_asg = phi(&next, n)?;
        let step = ImprovementStep {
            pair: (w.i, w.j),
            rebuild,
            paths_before: part.len(),
            paths_after: next.len(),
            right_approvals_before: right_approval_count(inst, &asg)?,
            right_approvals_after: right_approval_count(inst, &next_asg)?,
        };
        if step.right_approvals_after <= step.right_approvals_before {
            return Err(Error::InvariantViolated(format!(
                "rebuild did not raise the right-approval count ({} -> {})",
                step.right_approvals_before, step.right_approvals_after
            )));
        }
        steps.push(step);
        part = next;
        asg = next_asg;
    }
}

pub fn solve_case2(inst: &Instance) -> Result<Assignment> {
    solve_case2_traced(inst).map(|(a, _)| a)
}

/// How [`solve_cycle_traced`] produced its answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CycleRun {
    Greedy(CaseOneTriple),
    Partition(Vec<ImprovementStep>),
}

pub fn solve_cycle_traced(inst: &Instance) -> Result<(Assignment, CycleRun)> {
    require_cycle(inst)?;
    match find_case1_triple(inst.prefs()) {
        Some(triple) => Ok((solve_case1(inst, triple)?, CycleRun::Greedy(triple))),
        None => {
            let (asg, steps) = solve_case2_traced(inst)?;
            Ok((asg, CycleRun::Partition(steps)))
        }
    }
}

/// A neighborhood-stable assignment for any preferences on a cycle.
pub fn solve_cycle(inst: &Instance) -> Result<Assignment> {
    solve_cycle_traced(inst).map(|(a, _)| a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_example1, gen_ktt, gen_prop1, gen_random, gen_tournament, RandomSeats};
    use crate::model::SeatGraph;
    use crate::stability::check;

    fn on_cycle(inst: &Instance) -> Instance {
        inst.with_seats(SeatGraph::cycle(inst.n()).unwrap()).unwrap()
    }

    #[test]
    fn triple_on_example1() {
        let (inst, _) = gen_example1();
        // s = b, t = c, w = a
        assert_eq!(find_case1_triple(inst.prefs()), Some(CaseOneTriple { s: 1, t: 2, w: 0 }));
    }

    #[test]
    fn no_triple_for_a_two_cycle() {
        let p = PreferenceGraph::new(2, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(find_case1_triple(&p), None);
    }

    #[test]
    fn ktt_prefs_have_the_named_triple() {
        let inst = gen_ktt(3).unwrap();
        let p = inst.prefs();
        let idx = |l: &str| inst.agent_index(l).unwrap();
        assert!(CaseOneTriple::new(p, idx("s1_1"), idx("s2_3"), idx("s2_1")).is_ok());
        assert!(find_case1_triple(p).is_some());
    }

    #[test]
    fn case1_trace_on_example1() {
        let (inst, _) = gen_example1();
        let inst = on_cycle(&inst);
        let asg = solve_case1(&inst, CaseOneTriple { s: 1, t: 2, w: 0 }).unwrap();
        // b, a, c, d around the cycle
        assert_eq!(asg.occupants(), &[1, 0, 2, 3]);
        assert!(check(&inst, &asg, DistanceBound::NEIGHBORHOOD).stable());
    }

    #[test]
    fn case1_on_ktt_prefs_over_a_cycle() {
        let inst = on_cycle(&gen_ktt(3).unwrap());
        let triple = find_case1_triple(inst.prefs()).unwrap();
        let asg = solve_case1(&inst, triple).unwrap();
        assert!(check(&inst, &asg, DistanceBound::NEIGHBORHOOD).stable());
    }

    #[test]
    fn case2_small_cases() {
        let labels = vec!["x".to_string(), "y".into(), "z".into()];
        let none = Instance::new(labels.clone(), PreferenceGraph::empty(3), SeatGraph::cycle(3).unwrap())
            .unwrap();
        let (asg, steps) = solve_case2_traced(&none).unwrap();
        assert!(steps.is_empty());
        assert_eq!(asg, Assignment::identity(3));

        let pair = PreferenceGraph::new(3, [(0, 1), (1, 0)]).unwrap();
        let inst = Instance::new(labels, pair, SeatGraph::cycle(3).unwrap()).unwrap();
        assert_eq!(find_case1_triple(inst.prefs()), None);
        assert_eq!(
            initial_minimal_partition(inst.prefs()).paths(),
            &[DirectedPath::from_raw(vec![0, 1]), DirectedPath::from_raw(vec![2])]
        );
        let asg = solve_case2(&inst).unwrap();
        assert!(check(&inst, &asg, DistanceBound::NEIGHBORHOOD).stable());
    }

    #[test]
    fn prop1_instance_is_solvable() {
        let (inst, _) = gen_prop1();
        let asg = solve_cycle(&inst).unwrap();
        assert!(check(&inst, &asg, DistanceBound::NEIGHBORHOOD).stable());
    }

    #[test]
    fn rejects_other_shapes() {
        let (inst, _) = gen_example1();
        assert_eq!(solve_cycle(&inst), Err(Error::NotACycle));
    }

    #[test]
    fn tournaments_exercise_the_partition_loop() {
        let mut seen = std::collections::HashSet::new();
        for seed in 0..300 {
            let inst = gen_tournament(3 + (seed as usize % 10), RandomSeats::Cycle, seed).unwrap();
            assert_eq!(find_case1_triple(inst.prefs()), None);
            let (asg, steps) = solve_case2_traced(&inst).unwrap();
            assert!(check(&inst, &asg, DistanceBound::NEIGHBORHOOD).stable());
            for s in &steps {
                assert!(s.right_approvals_after > s.right_approvals_before);
                assert!(s.paths_after < s.paths_before || s.paths_before == 1);
                seen.insert(s.rebuild);
            }
        }
        assert!(seen.contains(&Rebuild::Reroute) && seen.contains(&Rebuild::Rotate));
    }

    #[test]
    fn straddling_pair_with_two_paths_rotates() {
        let arcs = [
            (0, 1), (0, 4), (1, 2), (1, 4), (2, 0), (2, 5), (3, 0), (3, 1),
            (3, 2), (4, 2), (4, 3), (4, 5), (5, 0), (5, 1), (5, 3),
        ];
        let prefs = PreferenceGraph::new(6, arcs).unwrap();
        let labels: Vec<String> = (0..6).map(|i| format!("a{i}")).collect();
        let inst = Instance::new(labels, prefs, SeatGraph::cycle(6).unwrap()).unwrap();
        let part = PathPartition::new(vec![
            DirectedPath::new(inst.prefs(), vec![0, 1, 2, 5, 3]).unwrap(),
            DirectedPath::singleton(4),
        ]);
        assert!(part.is_minimal(inst.prefs()));
        let asg = phi(&part, 6).unwrap();
        let (next, kind) = rebuild_partition(&inst, &part, &asg, (3, 4)).unwrap();
        assert_eq!(kind, Rebuild::Rotate);
        assert_eq!(next.paths()[0].vertices(), &[4, 5, 3, 0, 1, 2]);
        let after = phi(&next, 6).unwrap();
        assert!(right_approval_count(&inst, &after).unwrap() > right_approval_count(&inst, &asg).unwrap());
    }

    #[test]
    fn random_cycles_are_solved() {
        for seed in 0..2000u64 {
            let n = 3 + (seed as usize % 10);
            let p = [0.1, 0.3, 0.5, 0.7, 0.9][(seed / 10) as usize % 5];
            let inst = gen_random(n, p, RandomSeats::Cycle, seed).unwrap();
            let (asg, run) = solve_cycle_traced(&inst).unwrap();
            assert!(check(&inst, &asg, DistanceBound::NEIGHBORHOOD).stable(), "seed {seed}");
            if let CycleRun::Partition(steps) = run {
                assert!(steps.len() <= n);
            }
        }
    }

    #[test]
    fn improve_partition_rejects_non_blocking_pairs() {
        let (inst, _) = gen_prop1();
        let part = initial_minimal_partition(inst.prefs());
        let asg = phi(&part, 4).unwrap();
        let err = improve_partition(&inst, &part, &asg, (0, 0)).unwrap_err();
        assert!(matches!(err, Error::NotABlockingPair { .. }));
    }
}
