//! Exact offline optimum.
//!
//! Without loss of generality the offline optimum never preempts and never
//! accepts a packet of a frame it will not complete, so it is the largest
//! subset of frames whose packets all fit through the buffer. With unit
//! packets and FIFO service, a subset fits iff the occupancy recurrence
//! `o ← o + arrivals(t); o ≤ B; o ← max(o - 1, 0)` never exceeds `B`.

mod branch_bound;
mod exhaustive;

use std::collections::BTreeSet;

use serde::Serialize;

pub use branch_bound::{opt_branch_bound, BranchBoundConfig};
pub use exhaustive::{opt_bruteforce, opt_bruteforce_with_limit, oracle_limit, DEFAULT_ORACLE_LIMIT, ORACLE_LIMIT_ENV};

use crate::model::{append_drain, FrameId, Instance};

/// A set of frames, kept sorted.
pub type FrameSubset = BTreeSet<FrameId>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OptResult {
    pub gain: usize,
    pub witness: FrameSubset,
    /// Occupancy after each arrival subphase of the drained instance.
    pub profile: Vec<usize>,
}

/// Occupancy profile of accepting exactly the packets of `subset`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Feasibility {
    pub feasible: bool,
    /// Occupancy after each arrival subphase, up to the first overflow.
    pub profile: Vec<usize>,
}

/// Checks whether all packets of `subset` can be accepted with buffer `b`.
pub fn feasible(instance: &Instance, subset: &FrameSubset, b: usize) -> bool {
    feasibility(instance, subset, b).feasible
}

pub fn feasibility(instance: &Instance, subset: &FrameSubset, b: usize) -> Feasibility {
    let drained = append_drain(instance, b);
    let mut profile = Vec::with_capacity(drained.phases().len());
    let mut occ = 0usize;
    for arrivals in drained.phases() {
        occ += arrivals.iter().filter(|p| subset.contains(&p.frame)).count();
        profile.push(occ);
        if occ > b {
            return Feasibility {
                feasible: false,
                profile,
            };
        }
        occ = occ.saturating_sub(1);
    }
    Feasibility {
        feasible: true,
        profile,
    }
}

pub(crate) fn result_for(instance: &Instance, witness: FrameSubset, b: usize) -> OptResult {
    let f = feasibility(instance, &witness, b);
    debug_assert!(f.feasible);
    OptResult {
        gain: witness.len(),
        witness,
        profile: f.profile,
    }
}

/// Per-frame arrival counts over the distinct arrival phases, for the
/// searches. Phase gaps between consecutive arrival phases are kept so the
/// occupancy recurrence can skip empty phases.
#[derive(Debug, Clone)]
pub(crate) struct CompactInstance {
    pub b: usize,
    /// `gaps[e]`: phases elapsed between arrival phase `e - 1` and `e`.
    pub gaps: Vec<usize>,
    /// Per frame (index `f - 1`): (arrival phase index, packet count).
    pub frames: Vec<Vec<(usize, usize)>>,
}

impl CompactInstance {
    pub fn new(instance: &Instance, b: usize) -> Self {
        let mut phases: Vec<u32> = Vec::new();
        for (t, arrivals) in instance.phases().iter().enumerate() {
            if !arrivals.is_empty() {
                phases.push(t as u32);
            }
        }
        let gaps = phases
            .iter()
            .enumerate()
            .map(|(i, &t)| if i == 0 { 0 } else { (t - phases[i - 1]) as usize })
            .collect();
        let frames = instance
            .frames()
            .map(|f| {
                let mut counts: Vec<(usize, usize)> = Vec::new();
                for &t in instance.frame_arrivals(f) {
                    let e = phases.binary_search(&t).expect("arrival phase is indexed");
                    match counts.last_mut() {
                        Some((last, n)) if *last == e => *n += 1,
                        _ => counts.push((e, 1)),
                    }
                }
                counts
            })
            .collect();
        CompactInstance { b, gaps, frames }
    }

    pub fn n_phases(&self) -> usize {
        self.gaps.len()
    }

    /// Fills `occ` with post-arrival occupancy for the given per-phase loads.
    /// Returns false on overflow.
    pub fn occupancy(&self, load: &[usize], occ: &mut [usize]) -> bool {
        let mut o = 0usize;
        for e in 0..self.gaps.len() {
            if e > 0 {
                // one delivery in each phase from the previous arrival phase on
                o = o.saturating_sub(self.gaps[e]);
            }
            o += load[e];
            occ[e] = o;
            if o > self.b {
                return false;
            }
        }
        true
    }
}
