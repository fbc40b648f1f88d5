//! Exhaustive ground truth over all `n!` assignments of small instances.
//!
//! Assignments are enumerated as `seat_of` arrays in lexicographic order and
//! split into `n` blocks by the seat of agent 0. Blocks may run in parallel;
//! they are always reduced in block order.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::io::assignment_map;
use crate::model::{Assignment, Instance, SeatShape};
use crate::stability::{is_stable, DistanceBound};

pub const DEFAULT_LIMIT: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exists,
    Count,
    Enumerate,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exists" => Ok(Mode::Exists),
            "count" => Ok(Mode::Count),
            "enumerate" => Ok(Mode::Enumerate),
            other => Err(Error::BadParameter(format!("unknown oracle mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleResult {
    Exists(bool),
    Count(u64),
    Enumerate(Vec<Assignment>),
}

impl OracleResult {
    pub fn to_value(&self, inst: &Instance) -> Value {
        match self {
            OracleResult::Exists(b) => json!({ "exists": b }),
            OracleResult::Count(c) => json!({ "count": c }),
            OracleResult::Enumerate(all) => json!({
                "count": all.len(),
                "assignments": all.iter().map(|a| assignment_map(inst, a)).collect::<Vec<_>>(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct OracleOptions {
    /// Maximum number of agents accepted.
    pub limit: usize,
    /// On vertex-transitive seat graphs (cycles), only scan assignments with
    /// agent 0 on seat 0 for `exists`, and scale by `n` for `count`.
    pub symmetry: bool,
    pub exec: Execution,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            limit: DEFAULT_LIMIT,
            symmetry: false,
            exec: Execution::default(),
        }
    }
}

/// In-place lexicographic successor; `false` at the last permutation.
fn next_permutation(xs: &mut [usize]) -> bool {
    if xs.len() < 2 {
        return false;
    }
    let Some(i) = (0..xs.len() - 1).rev().find(|&i| xs[i] < xs[i + 1]) else {
        return false;
    };
    let j = (i + 1..xs.len()).rev().find(|&j| xs[j] > xs[i]).expect("xs[i+1] qualifies");
    xs.swap(i, j);
    xs[i + 1..].reverse();
    true
}

/// Calls `visit` on every assignment with agent 0 on `first_seat`, in
/// lexicographic order, until it returns `false`.
fn for_each_in_block(n: usize, first_seat: usize, mut visit: impl FnMut(&Assignment) -> bool) {
    let mut seat_of = Vec::with_capacity(n);
    seat_of.push(first_seat);
    seat_of.extend((0..n).filter(|&v| v != first_seat));
    loop {
        let asg = Assignment::new(seat_of.clone()).expect("permutation");
        if !visit(&asg) {
            return;
        }
        if !next_permutation(&mut seat_of[1..]) {
            return;
        }
    }
}

fn vertex_transitive(inst: &Instance) -> bool {
    inst.seats().shape() == SeatShape::Cycle
}

pub fn oracle_search(
    inst: &Instance,
    bound: DistanceBound,
    mode: Mode,
    opts: OracleOptions,
) -> Result<OracleResult> {
    let n = inst.n();
    if n > opts.limit {
        return Err(Error::TooLarge { n, limit: opts.limit });
    }
    let pruned = opts.symmetry && vertex_transitive(inst) && mode != Mode::Enumerate;
    let blocks = if pruned { 0..1 } else { 0..n };
    let exec = opts.exec;
    Ok(match mode {
        Mode::Exists => OracleResult::Exists(exec.any(blocks, |b| {
            let mut found = false;
            for_each_in_block(n, b, |a| {
                found = is_stable(inst, a, bound);
                !found
            });
            found
        })),
        Mode::Count => {
            let count = exec.sum(blocks, |b| {
                let mut c = 0;
                for_each_in_block(n, b, |a| {
                    c += u64::from(is_stable(inst, a, bound));
                    true
                });
                c
            });
            OracleResult::Count(if pruned { count * n as u64 } else { count })
        }
        Mode::Enumerate => OracleResult::Enumerate(
            exec.map(blocks, |b| {
                let mut found = Vec::new();
                for_each_in_block(n, b, |a| {
                    if is_stable(inst, a, bound) {
                        found.push(a.clone());
                    }
                    true
                });
                found
            })
            .into_iter()
            .flatten()
            .collect(),
        ),
    })
}

/// Shorthand for an existence query with default options.
pub fn exists_stable(inst: &Instance, bound: DistanceBound) -> Result<bool> {
    match oracle_search(inst, bound, Mode::Exists, OracleOptions::default())? {
        OracleResult::Exists(b) => Ok(b),
        _ => unreachable!(),
    }
}

pub fn count_stable(inst: &Instance, bound: DistanceBound) -> Result<u64> {
    match oracle_search(inst, bound, Mode::Count, OracleOptions::default())? {
        OracleResult::Count(c) => Ok(c),
        _ => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_example1, gen_ktt, gen_random, gen_two_triangles, RandomSeats};
    use crate::stability::check;

    #[test]
    fn permutations_in_order() {
        let mut xs = vec![0, 1, 2];
        let mut all = vec![xs.clone()];
        while next_permutation(&mut xs) {
            all.push(xs.clone());
        }
        assert_eq!(all.len(), 6);
        assert_eq!(all[1], vec![0, 2, 1]);
        assert_eq!(all[5], vec![2, 1, 0]);
    }

    #[test]
    fn ktt3_has_no_neighborhood_stable_assignment() {
        let inst = gen_ktt(3).unwrap();
        assert!(!exists_stable(&inst, DistanceBound::NEIGHBORHOOD).unwrap());
        assert_eq!(count_stable(&inst, DistanceBound::NEIGHBORHOOD).unwrap(), 0);
    }

    #[test]
    fn two_triangles_counts() {
        let inst = gen_two_triangles();
        assert_eq!(count_stable(&inst, DistanceBound::NEIGHBORHOOD).unwrap(), 720);
        assert!(!exists_stable(&inst, DistanceBound::Unbounded).unwrap());
    }

    #[test]
    fn example1_admits_a_stable_assignment() {
        let (inst, start) = gen_example1();
        assert!(exists_stable(&inst, DistanceBound::Unbounded).unwrap());
        let all = match oracle_search(&inst, DistanceBound::Unbounded, Mode::Enumerate, OracleOptions::default())
            .unwrap()
        {
            OracleResult::Enumerate(all) => all,
            _ => unreachable!(),
        };
        assert!(all.contains(&start.swap(1, 3).unwrap()));
        assert!(all.windows(2).all(|w| w[0].seats() < w[1].seats()));
        assert!(all.iter().all(|a| check(&inst, a, DistanceBound::Unbounded).stable()));
    }

    #[test]
    fn too_large() {
        let inst = gen_random(10, 0.5, RandomSeats::Cycle, 1).unwrap();
        assert_eq!(
            oracle_search(&inst, DistanceBound::NEIGHBORHOOD, Mode::Exists, OracleOptions::default()),
            Err(Error::TooLarge { n: 10, limit: 9 })
        );
    }

    #[test]
    fn monotone_in_the_bound() {
        for seed in 0..40 {
            let inst = gen_random(6, 0.4, RandomSeats::Path, seed).unwrap();
            let c1 = count_stable(&inst, DistanceBound::Within(1)).unwrap();
            let c2 = count_stable(&inst, DistanceBound::Within(2)).unwrap();
            let cu = count_stable(&inst, DistanceBound::Unbounded).unwrap();
            assert!(c1 >= c2 && c2 >= cu);
        }
    }

    #[test]
    fn symmetry_pruning_agrees_with_full_enumeration() {
        for seed in 0..60u64 {
            let n = 3 + seed as usize % 4;
            let inst = gen_random(n, 0.5, RandomSeats::Cycle, seed).unwrap();
            for bound in [DistanceBound::Within(1), DistanceBound::Within(2), DistanceBound::Unbounded] {
                for mode in [Mode::Exists, Mode::Count] {
                    let full = oracle_search(&inst, bound, mode, OracleOptions::default()).unwrap();
                    let opts = OracleOptions { symmetry: true, ..Default::default() };
                    assert_eq!(oracle_search(&inst, bound, mode, opts).unwrap(), full, "seed {seed}");
                }
            }
        }
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let inst = gen_random(7, 0.4, RandomSeats::Gnp, 8).unwrap();
        for mode in [Mode::Exists, Mode::Count, Mode::Enumerate] {
            let seq = OracleOptions { exec: Execution::Sequential, ..Default::default() };
            let par = OracleOptions { exec: Execution::Parallel, ..Default::default() };
            assert_eq!(
                oracle_search(&inst, DistanceBound::NEIGHBORHOOD, mode, seq).unwrap(),
                oracle_search(&inst, DistanceBound::NEIGHBORHOOD, mode, par).unwrap()
            );
        }
    }
}
