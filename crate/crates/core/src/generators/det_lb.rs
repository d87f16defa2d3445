use std::collections::BTreeSet;

use serde_json::json;

use super::{gain_quantity, meta, Claim, Family, GeneratedCase, Relation, Schedule, V_OPT};
use crate::algorithms::{OnlinePolicy, Simulator};
use crate::error::{Error, Result};
use crate::model::FrameId;

/// Adaptive lower-bound instance against a deterministic policy.
///
/// Three bursts of 1-packets arrive at phases `0`, `B` and `2B` (sizes `2B`,
/// `B + X` and `2B` with `X = ⌊B/(k−1)⌋`). After each burst the adversary
/// looks at which packets the policy kept and reserves for the optimum `B`,
/// `X` and `B` frames the policy did not keep (sets D, F and H, lowest frame
/// numbers first). D's later packets arrive in per-index bursts at `(j+1)B`,
/// every other frame's remaining packets together at `(k+2)B`, and H's per
/// index at `(k+1+j)B`.
///
/// The policy is only driven through the three bursts; it must be fresh.
pub fn gen_det_lower_bound<P: OnlinePolicy>(k: u32, b: usize, policy: P) -> Result<GeneratedCase> {
    if k < 2 || b == 0 {
        return Err(Error::Parameters(format!(
            "det-lb needs k >= 2 and B >= 1 (k={k}, B={b})"
        )));
    }
    let actor = policy.actor();
    let bb = b as u32;
    let x = bb / (k - 1);
    let bursts: [(u32, u32, u32); 3] = [
        (0, 1, 2 * bb),
        (bb, 2 * bb + 1, bb + x),
        (2 * bb, 3 * bb + x + 1, 2 * bb),
    ];
    let wanted = [bb, x, bb];

    let mut sim = Simulator::new(k, b, policy);
    let mut kept_by_alg = Vec::new();
    let mut reserved = Vec::new();
    for ((start, first, len), want) in bursts.into_iter().zip(wanted) {
        while sim.phase() < start {
            sim.step(&[])?;
        }
        let frames: Vec<FrameId> = (first..first + len).collect();
        let arrivals: Vec<_> = frames.iter().map(|&f| crate::model::PacketId::new(f, 1)).collect();
        sim.arrive(&arrivals)?;
        let kept: BTreeSet<FrameId> = sim.buffer().iter().filter(|p| p.j == 1).map(|p| p.frame).collect();
        let passed: Vec<FrameId> = frames.iter().copied().filter(|f| !kept.contains(f)).collect();
        if passed.len() < want as usize {
            return Err(Error::Parameters(format!(
                "policy kept {} of {len} packets at phase {start}; need {want} left over",
                kept.len()
            )));
        }
        reserved.push(passed[..want as usize].to_vec());
        kept_by_alg.push(kept);
        sim.deliver();
    }
    let [d, f, h]: [Vec<FrameId>; 3] = reserved.try_into().expect("three bursts");
    let n_frames = 5 * bb + x;

    let mut s = Schedule::default();
    for (start, first, len) in bursts {
        s.burst(start, first..first + len, 1);
    }
    for j in 2..=k {
        s.burst((j + 1) * bb, d.iter().copied(), j);
    }
    let special: BTreeSet<FrameId> = d.iter().chain(&h).copied().collect();
    for frame in (1..=n_frames).filter(|fr| !special.contains(fr)) {
        for j in 2..=k {
            s.push((k + 2) * bb, frame, j);
        }
    }
    for j in 2..=k {
        s.burst((k + 1 + j) * bb, h.iter().copied(), j);
    }

    let instance = s
        .build(k, n_frames)?
        .with_name(format!("det-lb-k{k}-b{b}-{}", actor.as_str().to_lowercase()))
        .with_meta(meta(&[
            ("family", json!("det-lb")),
            ("k", json!(k)),
            ("b", json!(b)),
            ("x", json!(x)),
            ("alg", json!(actor.as_str())),
            (
                "alg_kept",
                json!(kept_by_alg.iter().map(BTreeSet::len).collect::<Vec<_>>()),
            ),
            ("h_schedule", json!("index j of H at phase (k+1+j)B")),
        ]));

    let opt_witness = d.iter().chain(&f).chain(&h).copied().collect();
    let claims = vec![
        Claim::new(V_OPT, Relation::Eq, (2 * bb + x) as u64),
        Claim::new(gain_quantity(actor.as_str()), Relation::Le, x as u64),
    ];
    Ok(GeneratedCase {
        family: Family::DetLb,
        instance,
        b,
        opt_witness,
        claims,
        golden: None,
    })
}
