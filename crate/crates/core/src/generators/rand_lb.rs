use serde::Serialize;
use serde_json::json;

use super::{meta, Claim, Family, GeneratedCase, Relation, Schedule, V_ALG, V_OPT};
use crate::algorithms::{Action, OnlinePolicy, Simulator};
use crate::error::{Error, Result};
use crate::model::FrameId;

/// Frame number of member `m` of subgroup `j` of group `i` (all 1-based).
fn frame_id(y: u32, b: u32, i: u32, j: u32, m: u32) -> FrameId {
    (i - 1) * y * b + (j - 1) * b + m
}

fn check(k: u32, b: usize, y: u32) -> Result<()> {
    if k < 3 || b == 0 || y == 0 {
        return Err(Error::Parameters(format!(
            "rand-lb needs k >= 3, B >= 1, y >= 1 (k={k}, B={b}, y={y})"
        )));
    }
    Ok(())
}

fn schedule(k: u32, b: u32, y: u32, z: u32) -> Schedule {
    let mut s = Schedule::default();
    let round = |s: &mut Schedule, i: u32, x: u32, start: u32| {
        for j in 1..=y {
            s.burst(start + (j - 1) * b, (1..=b).map(|m| frame_id(y, b, i, j, m)), x);
        }
    };
    // x-major so that each phase lists groups in increasing order
    for x in 1..=k {
        for i in 1..k {
            let start = (i + x - 2) * y * b;
            if x < k || i == z {
                round(&mut s, i, x, start);
            } else {
                let frames = (1..=y).flat_map(|j| (1..=b).map(move |m| frame_id(y, b, i, j, m)));
                s.burst(start, frames, k);
            }
        }
    }
    s
}

/// Oblivious lower-bound instance with `k − 1` groups of `yB` frames.
///
/// Group `i`'s `x`-packets (`x < k`) arrive as a round starting at phase
/// `(i+x−2)yB`: `y` subrounds of `B` packets, `B` phases apart. The
/// `k`-packets of group `z` arrive as a round too; those of every other group
/// arrive in a single burst, so at most `B` of that group's frames can finish.
pub fn gen_rand_lower_bound(k: u32, b: usize, y: u32, z: u32) -> Result<GeneratedCase> {
    check(k, b, y)?;
    if !(1..k).contains(&z) {
        return Err(Error::Parameters(format!("z must lie in [1, {}] (got {z})", k - 1)));
    }
    let bb = b as u32;
    let instance = schedule(k, bb, y, z)
        .build(k, (k - 1) * y * bb)?
        .with_name(format!("rand-lb-k{k}-b{b}-y{y}-z{z}"))
        .with_meta(meta(&[
            ("family", json!("rand-lb")),
            ("k", json!(k)),
            ("b", json!(b)),
            ("y", json!(y)),
            ("z", json!(z)),
        ]));
    let yb = (y * bb) as u64;
    let km1 = (k - 1) as u64;
    let opt_witness = (1..=y)
        .flat_map(|j| (1..=bb).map(move |m| frame_id(y, bb, z, j, m)))
        .collect();
    Ok(GeneratedCase {
        family: Family::RandLb,
        instance,
        b,
        opt_witness,
        claims: vec![
            Claim::new(V_OPT, Relation::Ge, yb),
            // holds for the policy z was chosen against
            Claim::fraction(V_ALG, Relation::Le, yb + km1 * (k as u64 - 2) * b as u64, km1),
        ],
        golden: None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZChoice {
    pub z: u32,
    /// `accepted[i - 1]`: packets of `P(i, ·, k−i)` accepted, summed over trials.
    pub accepted: Vec<u64>,
    pub trials: u32,
}

/// Picks the group whose packets the policy accepts least often during the
/// `k − 1` simultaneous rounds starting at phase `(k−2)yB`.
///
/// Every phase before `(k−1)yB` is the same for all `z`, so the policy is run
/// on that prefix only. `factory(seed)` builds a fresh policy for trial
/// `seed`; deterministic policies need a single trial. Ties go to the
/// smallest group.
pub fn choose_z<P, F>(k: u32, b: usize, y: u32, mut factory: F, trials: u32) -> Result<ZChoice>
where
    P: OnlinePolicy,
    F: FnMut(u64) -> Result<P>,
{
    check(k, b, y)?;
    if trials == 0 {
        return Err(Error::Parameters("choose_z needs at least one trial".into()));
    }
    let bb = b as u32;
    let prefix = schedule(k, bb, y, 1).build(k, (k - 1) * y * bb)?;
    let window = (k - 2) * y * bb..(k - 1) * y * bb;
    let group_of = |f: FrameId| (f - 1) / (y * bb) + 1;

    let mut accepted = vec![0u64; (k - 1) as usize];
    for seed in 0..trials {
        let policy = factory(seed as u64)?;
        let actor = policy.actor();
        let mut sim = Simulator::new(k, b, policy);
        for arrivals in &prefix.phases()[..window.end as usize] {
            sim.step(arrivals)?;
        }
        for e in sim.trace() {
            if e.action != Action::Accept || e.actor != actor || !window.contains(&e.time.phase) {
                continue;
            }
            let i = group_of(e.packet.frame);
            if e.packet.j == k - i {
                accepted[(i - 1) as usize] += 1;
            }
        }
    }
    let z = accepted
        .iter()
        .enumerate()
        .min_by_key(|&(i, &a)| (a, i))
        .map(|(i, _)| i as u32 + 1)
        .expect("k >= 3 gives at least two groups");
    Ok(ZChoice { z, accepted, trials })
}
