//! The 120-frame worked example for `k = 3`, `B = 12` and its expected MF
//! decisions.

use std::ops::RangeInclusive;

use serde_json::json;

use super::{gain_quantity, meta, Claim, Family, GeneratedCase, Relation, Schedule};
use crate::algorithms::{Action, Actor, TraceEvent};
use crate::model::{EventTime, FrameId, PacketId};

pub const APPENDIX_B_BUFFER: usize = 12;

/// Frames MF completes on the example.
pub const APPENDIX_B_COMPLETED: [FrameId; 4] = [1, 2, 87, 88];

const K: u32 = 3;

/// 1-packet rows: phase, frames, GR₁ accepts, MF accepts, case.
const FIRST_ROWS: [(u32, RangeInclusive<FrameId>, bool, bool, &str); 16] = [
    (0, 1..=4, true, true, "1.2.1"),
    (0, 5..=12, true, false, "1.2.2"),
    (0, 13..=24, false, false, "1.1"),
    (12, 25..=36, true, false, "1.2.2"),
    (24, 37..=47, true, false, "1.2.2"),
    (24, 48..=48, true, false, "1.2.3"),
    (36, 49..=52, true, true, "1.2.1"),
    (36, 53..=60, true, false, "1.2.2"),
    (48, 61..=72, true, false, "1.2.2"),
    (60, 73..=83, true, false, "1.2.2"),
    (60, 84..=84, true, false, "1.2.3"),
    (72, 85..=88, true, true, "1.2.1"),
    (72, 89..=96, true, false, "1.2.2"),
    (84, 97..=108, true, false, "1.2.2"),
    (96, 109..=119, true, false, "1.2.2"),
    (96, 120..=120, true, false, "1.2.3"),
];

struct LaterRow {
    phase: u32,
    j: u32,
    frames: RangeInclusive<FrameId>,
    accept: bool,
    case: &'static str,
    /// (frame, j) preempted by middle-drop, victim first
    preempt: &'static [(FrameId, u32)],
    /// (frame, j) flushed, in queue order
    flush: &'static [(FrameId, u32)],
}

const fn row(phase: u32, j: u32, frames: RangeInclusive<FrameId>, accept: bool, case: &'static str) -> LaterRow {
    LaterRow {
        phase,
        j,
        frames,
        accept,
        case,
        preempt: &[],
        flush: &[],
    }
}

const fn middle_drop(
    phase: u32,
    j: u32,
    frame: FrameId,
    preempt: &'static [(FrameId, u32)],
    flush: &'static [(FrameId, u32)],
) -> LaterRow {
    LaterRow {
        phase,
        j,
        frames: frame..=frame,
        accept: true,
        case: "2.2.2",
        preempt,
        flush,
    }
}

/// 2- and 3-packet rows in arrival order.
fn later_rows() -> Vec<LaterRow> {
    vec![
        row(108, 2, 1..=4, true, "2.2.1"),
        row(108, 2, 5..=48, false, "2.1"),
        row(120, 2, 49..=52, true, "2.2.1"),
        row(120, 2, 53..=84, false, "2.1"),
        middle_drop(120, 2, 85, &[(51, 2)], &[]),
        middle_drop(120, 2, 86, &[(52, 2)], &[]),
        row(120, 3, 1..=4, true, "2.2.1"),
        row(120, 3, 5..=48, false, "2.1"),
        middle_drop(120, 3, 49, &[(3, 3)], &[]),
        middle_drop(120, 3, 50, &[(4, 3)], &[]),
        row(120, 3, 51..=84, false, "2.1"),
        middle_drop(120, 3, 85, &[(49, 3), (49, 2)], &[(50, 2), (50, 3)]),
        row(120, 3, 86..=86, true, "2.2.1"),
        row(121, 2, 87..=88, true, "2.2.1"),
        row(121, 2, 89..=120, false, "2.1"),
        middle_drop(121, 3, 87, &[(85, 3)], &[]),
        middle_drop(121, 3, 88, &[(86, 3), (86, 2)], &[]),
        // not listed in the tables: frames 89..120 lost their 1-packet
        row(121, 3, 89..=120, false, "2.1"),
    ]
}

fn block_of(frame: FrameId) -> u32 {
    match frame {
        1..=48 => 1,
        49..=84 => 2,
        _ => 3,
    }
}

/// The example's arrival schedule, `k = 3`, 120 frames.
pub fn gen_appendix_b() -> GeneratedCase {
    let mut s = Schedule::default();
    for (phase, frames, ..) in FIRST_ROWS {
        s.burst(phase, frames, 1);
    }
    for r in later_rows() {
        s.burst(r.phase, r.frames, r.j);
    }
    let instance = s
        .build(K, 120)
        .expect("example schedule is well formed")
        .with_name("appendix-b")
        .with_meta(meta(&[
            ("family", json!("appendix-b")),
            ("k", json!(K)),
            ("b", json!(APPENDIX_B_BUFFER)),
        ]));
    GeneratedCase {
        family: Family::AppendixB,
        instance,
        b: APPENDIX_B_BUFFER,
        opt_witness: APPENDIX_B_COMPLETED.into_iter().collect(),
        claims: vec![Claim::new(
            gain_quantity("MF"),
            Relation::Eq,
            APPENDIX_B_COMPLETED.len() as u64,
        )],
        golden: Some(appendix_b_golden()),
    }
}

/// Expected decision rows (no transmissions) of MF on [`gen_appendix_b`],
/// transcribed from the example's tables.
pub fn appendix_b_golden() -> Vec<TraceEvent> {
    let mut out = Vec::new();
    let mut seq = 0;
    let mut last_phase = None;
    let mut next_time = |phase: u32| {
        if last_phase != Some(phase) {
            seq = 0;
            last_phase = Some(phase);
        }
        let t = EventTime::decision(phase, seq);
        seq += 1;
        t
    };
    let event = |time, frame, j, actor, action, case: &str| TraceEvent {
        time,
        packet: PacketId::new(frame, j),
        actor,
        action,
        case_label: case.to_string(),
        block: Some(block_of(frame)),
    };
    let verdict = |accept| if accept { Action::Accept } else { Action::Reject };

    for (phase, frames, gr1, mf, case) in FIRST_ROWS {
        for f in frames {
            let t = next_time(phase);
            out.push(event(t, f, 1, Actor::Gr1, verdict(gr1), ""));
            out.push(event(t, f, 1, Actor::Mf, verdict(mf), case));
        }
    }
    for r in later_rows() {
        for f in r.frames {
            let t = next_time(r.phase);
            for &(pf, pj) in r.preempt {
                out.push(event(t, pf, pj, Actor::Mf, Action::Preempt, "2.2.2"));
            }
            out.push(event(t, f, r.j, Actor::Mf, verdict(r.accept), r.case));
            for &(pf, pj) in r.flush {
                out.push(event(t, pf, pj, Actor::Mf, Action::Flush, "2.2.2.1"));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_order_respecting;

    #[test]
    fn schedule_shape() {
        let case = gen_appendix_b();
        let inst = &case.instance;
        assert_eq!((inst.k(), inst.n_frames(), case.b), (3, 120, 12));
        assert_eq!(inst.last_arrival_phase(), 121);
        assert_eq!(inst.phases()[0].len(), 24);
        assert_eq!(inst.phases()[120].len(), 38 + 86);
        assert!(validate_order_respecting(inst).is_empty());
    }

    #[test]
    fn golden_rows() {
        let golden = appendix_b_golden();
        let find = |phase: u32, frame: FrameId, j: u32, action: Action| {
            golden
                .iter()
                .find(|e| {
                    e.actor == Actor::Mf
                        && e.time.phase == phase
                        && e.packet == PacketId::new(frame, j)
                        && e.action == action
                })
                .unwrap_or_else(|| panic!("no row for ({frame},{j}) at {phase}"))
        };
        let r49 = find(120, 49, 3, Action::Accept);
        assert_eq!(r49.case_label, "2.2.2");
        let pre = find(120, 3, 3, Action::Preempt);
        assert_eq!(pre.time, r49.time);
        let r87 = find(121, 87, 3, Action::Accept);
        assert_eq!(find(121, 85, 3, Action::Preempt).time, r87.time);
        assert_eq!(find(0, 13, 1, Action::Reject).case_label, "1.1");
        assert_eq!(find(24, 48, 1, Action::Reject).block, Some(1));
        // one decision per arriving packet plus one shadow row per 1-packet
        let decisions = golden
            .iter()
            .filter(|e| e.actor == Actor::Mf && matches!(e.action, Action::Accept | Action::Reject))
            .count();
        assert_eq!(decisions, 360);
        assert_eq!(golden.iter().filter(|e| e.actor == Actor::Gr1).count(), 120);
    }
}
