//! Assignments on path seat graphs with no blocking pair within distance two.

use crate::cycle::greedy_fill;
use crate::error::{Error, Result};
use crate::model::{AgentIdx, Assignment, Instance, SeatShape};

/// Seats `seed` (default agent 0) at `v0`, then fills `v1, v2, ...` with the
/// smallest unseated agent approving the previous occupant, or the smallest
/// unseated agent when nobody does.
pub fn solve_path(inst: &Instance, seed: Option<AgentIdx>) -> Result<Assignment> {
    if inst.seats().shape() != SeatShape::Path {
        return Err(Error::NotAPath);
    }
    let seed = seed.unwrap_or(0);
    if seed >= inst.n() {
        return Err(Error::BadParameter(format!("seed agent {seed} out of range")));
    }
    Assignment::from_occupants(greedy_fill(inst.prefs(), vec![seed]))
}
