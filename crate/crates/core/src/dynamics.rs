//! Swap dynamics: adjacent blocking pairs exchange seats until none remain,
//! a state repeats, or a step cap is hit.

use std::collections::HashMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::io::assignment_map;
use crate::model::{AgentIdx, Assignment, Instance};
use crate::stability::blocking_pairs_adjacent;

/// Which adjacent blocking pair swaps when several exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Policy {
    /// Lexicographically smallest pair.
    First,
    /// Uniform choice from a ChaCha8 stream seeded with the given value.
    Random(u64),
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Policy::First => f.write_str("first"),
            Policy::Random(seed) => write!(f, "random:{seed}"),
        }
    }
}

impl std::str::FromStr for Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "first" {
            return Ok(Policy::First);
        }
        s.strip_prefix("random:")
            .and_then(|seed| seed.parse().ok())
            .map(Policy::Random)
            .ok_or_else(|| Error::BadParameter(format!("unknown policy `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Converged,
    /// The final state equals `states[first_repeat_index]`.
    Cycled { first_repeat_index: usize },
    Capped,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynamicsTrace {
    pub policy: Policy,
    pub states: Vec<Assignment>,
    pub swaps: Vec<(AgentIdx, AgentIdx)>,
    pub outcome: Outcome,
}

impl DynamicsTrace {
    pub fn final_state(&self) -> &Assignment {
        self.states.last().expect("trace holds the start state")
    }

    pub fn to_value(&self, inst: &Instance) -> Value {
        let (outcome, repeat) = match self.outcome {
            Outcome::Converged => ("converged", None),
            Outcome::Cycled { first_repeat_index } => ("cycled", Some(first_repeat_index)),
            Outcome::Capped => ("capped", None),
        };
        json!({
            "policy": self.policy.to_string(),
            "outcome": outcome,
            "first_repeat_index": repeat,
            "steps": self.swaps.len(),
            "swaps": self.swaps.iter()
                .map(|&(i, j)| json!([inst.label(i), inst.label(j)]))
                .collect::<Vec<_>>(),
            "states": self.states.iter()
                .map(|s| assignment_map(inst, s))
                .collect::<Vec<_>>(),
        })
    }
}

/// Default cap: `64 n^2` swaps.
pub fn default_max_steps(n: usize) -> usize {
    (n * n * 64).max(1)
}

pub fn run_dynamics(
    inst: &Instance,
    start: &Assignment,
    policy: Policy,
    max_steps: usize,
) -> Result<DynamicsTrace> {
    inst.validate_assignment(start)?;
    if max_steps == 0 {
        return Err(Error::BadParameter("max_steps must be positive".into()));
    }
    let mut rng = match policy {
        Policy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        Policy::First => None,
    };
    let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
    seen.insert(start.seats().to_vec(), 0);
    let mut states = vec![start.clone()];
    let mut swaps = Vec::new();
    let outcome = loop {
        let current = states.last().expect("non-empty");
        let pairs = blocking_pairs_adjacent(inst, current);
        if pairs.is_empty() {
            break Outcome::Converged;
        }
        if swaps.len() == max_steps {
            break Outcome::Capped;
        }
        let pick = match rng.as_mut() {
            Some(r) => pairs[r.gen_range(0..pairs.len())],
            None => pairs[0],
        };
        let next = current.swap(pick.0, pick.1)?;
        swaps.push(pick);
        let key = next.seats().to_vec();
        states.push(next);
        if let Some(&first) = seen.get(&key) {
            break Outcome::Cycled { first_repeat_index: first };
        }
        seen.insert(key, states.len() - 1);
    };
    Ok(DynamicsTrace { policy, states, swaps, outcome })
}
