//! MIDDLE-DROP AND FLUSH.
//!
//! MF keeps at most `A = ⌊B/k⌋` packets of each index `j`. Admission of
//! 1-packets follows a shadow greedy algorithm GR₁ that accepts 1-packets
//! whenever its own size-`B` queue has room and ignores everything else: the
//! 1-packets GR₁ accepts are cut into blocks of `3B`, MF admits the first `A`
//! of each block and tags every frame with the block number current at its
//! 1-packet's decision time.
//!
//! For a `j`-packet (`j ≥ 2`) of a still-valid frame, MF accepts if fewer than
//! `A` `j`-packets are buffered. Otherwise it drops the `(⌊A/2⌋+1)`-st buffered
//! `j`-packet together with the rest of that packet's frame, and if the
//! dropped frame's block had at most `⌊A/2⌋` valid frames just before, every
//! buffered packet of that block is flushed.

use std::collections::{BTreeMap, HashMap, HashSet};

use super::{Actor, OnlinePolicy, PolicyDecision, PreemptKind, Preemption, ShadowDecision};
use crate::error::{Error, Result};
use crate::model::{EventTime, FrameId, PacketId, Queue};

/// The case of MF's definition that handled a packet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MfCase {
    /// 1-packet rejected by GR₁.
    GreedyReject,
    /// 1-packet among the first `A` of its block.
    BlockHead,
    /// 1-packet beyond the first `A` of its block.
    BlockTail,
    /// 1-packet closing its block; the counter wraps.
    BlockEnd,
    /// Packet of a frame that is no longer valid.
    InvalidFrame,
    /// Room in the `j`-subbuffer.
    Room,
    /// Middle-drop followed by a flush of the dropped frame's block.
    MiddleDropFlush,
    /// Middle-drop only.
    MiddleDrop,
}

impl MfCase {
    pub fn label(self) -> &'static str {
        match self {
            MfCase::GreedyReject => "1.1",
            MfCase::BlockHead => "1.2.1",
            MfCase::BlockTail => "1.2.2",
            MfCase::BlockEnd => "1.2.3",
            MfCase::InvalidFrame => "2.1",
            MfCase::Room => "2.2.1",
            MfCase::MiddleDropFlush => "2.2.2.1",
            MfCase::MiddleDrop => "2.2.2.2",
        }
    }

    /// Label written on the decision's preempt/accept/reject trace rows. Both
    /// middle-drop variants share `2.2.2`; flush rows carry `2.2.2.1`.
    pub fn trace_label(self) -> &'static str {
        match self {
            MfCase::MiddleDropFlush | MfCase::MiddleDrop => "2.2.2",
            other => other.label(),
        }
    }
}

const FLUSH_LABEL: &str = "2.2.2.1";

#[derive(Debug, Clone)]
pub struct MiddleDropFlush {
    k: u32,
    b: usize,
    a: usize,
    counter: usize,
    block: u32,
    gr1: Queue,
    block_of: HashMap<FrameId, u32>,
    invalid: HashSet<FrameId>,
    // h_u: frames of block u whose 1-packet MF accepted and that are still valid
    valid_in_block: HashMap<u32, usize>,
    cases: BTreeMap<MfCase, usize>,
}

impl MiddleDropFlush {
    /// MF with the standard subbuffer size `A = ⌊B/k⌋`.
    ///
    /// With `B < k` this is `A = 0`: no 1-packet is ever admitted, so no
    /// frame stays valid and MF rejects everything.
    pub fn new(k: u32, b: usize) -> Self {
        Self::with_subbuffer(k, b, b / k as usize)
    }

    /// MF with an arbitrary per-index cap `a`, for experiments.
    pub fn with_subbuffer(k: u32, b: usize, a: usize) -> Self {
        MiddleDropFlush {
            k,
            b,
            a,
            counter: 0,
            block: 1,
            gr1: Queue::new(b),
            block_of: HashMap::new(),
            invalid: HashSet::new(),
            valid_in_block: HashMap::new(),
            cases: BTreeMap::new(),
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn subbuffer(&self) -> usize {
        self.a
    }

    pub fn counter(&self) -> usize {
        self.counter
    }

    pub fn block(&self) -> u32 {
        self.block
    }

    pub fn gr1_buffer(&self) -> &Queue {
        &self.gr1
    }

    pub fn is_valid(&self, frame: FrameId) -> bool {
        !self.invalid.contains(&frame)
    }

    /// `h_u`: valid frames whose block number is `u` and whose 1-packet has
    /// been decided.
    pub fn valid_frames_in_block(&self, u: u32) -> usize {
        self.valid_in_block.get(&u).copied().unwrap_or(0)
    }

    /// How often each case fired so far.
    pub fn case_counts(&self) -> &BTreeMap<MfCase, usize> {
        &self.cases
    }

    /// GR₁'s decision on `packet`; accepted 1-packets enter the shadow queue.
    pub fn gr1_step(&mut self, packet: PacketId) -> bool {
        packet.j == 1 && self.gr1.push(packet).is_ok()
    }

    fn invalidate(&mut self, frame: FrameId) {
        if self.invalid.insert(frame) {
            if let Some(u) = self.block_of.get(&frame) {
                if let Some(h) = self.valid_in_block.get_mut(u) {
                    *h -= 1;
                }
            }
        }
    }

    fn consistency(&self, time: EventTime, message: String) -> Error {
        Error::Consistency {
            policy: "MF".into(),
            time,
            message,
        }
    }

    fn decide_first(&mut self, buffer: &Queue, p: PacketId, time: EventTime) -> Result<MfCase> {
        let accepted_by_gr1 = self.gr1_step(p);
        // g(p) is the block value before any wrap caused by p itself
        self.block_of.insert(p.frame, self.block);
        if !accepted_by_gr1 {
            self.invalid.insert(p.frame);
            return Ok(MfCase::GreedyReject);
        }
        self.counter += 1;
        if self.counter <= self.a {
            if buffer.is_full() {
                return Err(self.consistency(
                    time,
                    format!("no room for {p} although Counter={} <= A={}", self.counter, self.a),
                ));
            }
            *self.valid_in_block.entry(self.block).or_insert(0) += 1;
            return Ok(MfCase::BlockHead);
        }
        self.invalid.insert(p.frame);
        if self.counter < 3 * self.b {
            Ok(MfCase::BlockTail)
        } else {
            self.counter = 0;
            self.block += 1;
            Ok(MfCase::BlockEnd)
        }
    }

    fn decide_later(&mut self, buffer: &Queue, p: PacketId, time: EventTime) -> Result<(MfCase, Vec<Preemption>)> {
        let Some(&g) = self.block_of.get(&p.frame) else {
            return Err(self.consistency(time, format!("{p} arrived before its frame's 1-packet was decided")));
        };
        if self.invalid.contains(&p.frame) {
            return Ok((MfCase::InvalidFrame, Vec::new()));
        }
        let buffered = buffer.count_index(p.j);
        if buffered < self.a {
            if buffer.is_full() {
                return Err(self.consistency(
                    time,
                    format!("buffer full with {buffered} < A packets of index {}", p.j),
                ));
            }
            return Ok((MfCase::Room, Vec::new()));
        }
        if buffered > self.a || self.a == 0 {
            return Err(self.consistency(time, format!("{buffered} buffered {}-packets with A={}", p.j, self.a)));
        }

        let half = self.a / 2;
        let victim = buffer
            .nth_of_index(p.j, half + 1)
            .expect("A packets of this index are buffered");
        let victim_block = self.block_of[&victim.frame];
        let h = self.valid_frames_in_block(victim_block);

        let mut pre = vec![Preemption {
            packet: victim,
            kind: PreemptKind::MiddleDrop,
            case_label: MfCase::MiddleDrop.trace_label(),
        }];
        pre.extend(
            buffer
                .iter()
                .filter(|q| q.frame == victim.frame && *q != victim)
                .map(|q| Preemption {
                    packet: q,
                    kind: PreemptKind::Corresponding,
                    case_label: MfCase::MiddleDrop.trace_label(),
                }),
        );
        self.invalidate(victim.frame);

        if h > half {
            return Ok((MfCase::MiddleDrop, pre));
        }
        if g == victim_block {
            return Err(self.consistency(
                time,
                format!("flush of block {g} would drop the packet {p} being accepted"),
            ));
        }
        let flushed: Vec<PacketId> = buffer
            .iter()
            .filter(|q| q.frame != victim.frame && self.block_of.get(&q.frame) == Some(&victim_block))
            .collect();
        for q in flushed {
            self.invalidate(q.frame);
            pre.push(Preemption {
                packet: q,
                kind: PreemptKind::Flush,
                case_label: FLUSH_LABEL,
            });
        }
        Ok((MfCase::MiddleDropFlush, pre))
    }
}

impl OnlinePolicy for MiddleDropFlush {
    fn actor(&self) -> Actor {
        Actor::Mf
    }

    /// Smaller packet index first; among equal indices `j ≥ 2`, smaller block
    /// number first; remaining ties keep arrival order.
    ///
    /// A `j ≥ 2` packet whose 1-packet arrives in the same subphase gets the
    /// block number its 1-packet will receive. GR₁ does not depend on MF's
    /// decisions, so that number is known in advance.
    fn decision_order(&self, arrivals: &[PacketId], _buffer: &Queue) -> Result<Vec<PacketId>> {
        let mut pending: HashMap<FrameId, u32> = HashMap::new();
        let mut room = self.b.saturating_sub(self.gr1.len());
        let (mut counter, mut block) = (self.counter, self.block);
        for p in arrivals.iter().filter(|p| p.j == 1) {
            pending.insert(p.frame, block);
            if room > 0 {
                room -= 1;
                counter += 1;
                if counter == 3 * self.b {
                    counter = 0;
                    block += 1;
                }
            }
        }
        let mut keyed = Vec::with_capacity(arrivals.len());
        for &p in arrivals {
            let g = if p.j == 1 {
                0
            } else {
                match self.block_of.get(&p.frame).or_else(|| pending.get(&p.frame)) {
                    Some(&g) => g,
                    None => {
                        return Err(Error::Consistency {
                            policy: "MF".into(),
                            time: EventTime::decision(0, 0),
                            message: format!("{p} has no block number: its 1-packet never arrived"),
                        })
                    }
                }
            };
            keyed.push(((p.j, g), p));
        }
        keyed.sort_by_key(|(key, _)| *key);
        Ok(keyed.into_iter().map(|(_, p)| p).collect())
    }

    fn decide(&mut self, buffer: &Queue, packet: PacketId, time: EventTime) -> Result<PolicyDecision> {
        let (case, accept, preemptions, shadow) = if packet.j == 1 {
            let gr1_len = self.gr1.len();
            let case = self.decide_first(buffer, packet, time)?;
            let shadow = ShadowDecision {
                actor: Actor::Gr1,
                accepted: self.gr1.len() > gr1_len,
            };
            (case, case == MfCase::BlockHead, Vec::new(), Some(shadow))
        } else {
            let (case, pre) = self.decide_later(buffer, packet, time)?;
            let accept = !matches!(case, MfCase::InvalidFrame);
            if !accept {
                self.invalidate(packet.frame);
            }
            (case, accept, pre, None)
        };
        *self.cases.entry(case).or_insert(0) += 1;
        Ok(PolicyDecision {
            accept,
            preemptions,
            case_label: case.trace_label(),
            shadow,
        })
    }

    fn on_delivery(&mut self, _transmitted: Option<PacketId>) {
        self.gr1.pop_front();
    }

    fn block_of(&self, frame: FrameId) -> Option<u32> {
        self.block_of.get(&frame).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::{run_with, Action};
    use crate::model::Instance;

    fn p(frame: u32, j: u32) -> PacketId {
        PacketId::new(frame, j)
    }

    fn t(seq: u32) -> EventTime {
        EventTime::decision(0, seq)
    }

    #[test]
    fn gr1_ignores_later_packets_and_respects_capacity() {
        let mut mf = MiddleDropFlush::new(2, 2);
        assert!(!mf.gr1_step(p(1, 2)));
        assert!(mf.gr1_step(p(1, 1)));
        assert!(mf.gr1_step(p(2, 1)));
        assert!(!mf.gr1_step(p(3, 1)));
        mf.on_delivery(None);
        assert!(mf.gr1_step(p(3, 1)));
    }

    #[test]
    fn counter_cases_and_block_wrap() {
        // k=1, B=2: A=2, block length 3B=6
        let mut mf = MiddleDropFlush::new(1, 2);
        let buf = Queue::new(2);
        let mut labels = Vec::new();
        for f in 1..=7u32 {
            let d = mf.decide(&buf, p(f, 1), t(0)).unwrap();
            labels.push(d.case_label);
            // keep GR1 from filling up
            mf.on_delivery(None);
        }
        assert_eq!(labels, ["1.2.1", "1.2.1", "1.2.2", "1.2.2", "1.2.2", "1.2.3", "1.2.1"]);
        // the wrapping packet keeps the old block
        assert_eq!(mf.block_of(6), Some(1));
        assert_eq!(mf.block_of(7), Some(2));
        assert_eq!(mf.counter(), 1);
        assert_eq!(mf.valid_frames_in_block(1), 2);
        assert!(!mf.is_valid(3));
    }

    #[test]
    fn full_buffer_at_block_head_is_a_consistency_failure() {
        let mut mf = MiddleDropFlush::new(1, 1);
        let mut buf = Queue::new(1);
        buf.push(p(9, 1)).unwrap();
        let err = mf.decide(&buf, p(1, 1), t(0)).unwrap_err();
        assert!(matches!(err, Error::Consistency { .. }));
    }

    #[test]
    fn decision_order_index_then_block() {
        let mut mf = MiddleDropFlush::new(2, 4);
        let buf = Queue::new(4);
        mf.decide(&buf, p(5, 1), t(0)).unwrap();
        let order = mf.decision_order(&[p(5, 2), p(9, 1)], &buf).unwrap();
        assert_eq!(order, vec![p(9, 1), p(5, 2)]);

        // same-subphase 1-packets keep arrival order
        let order = mf.decision_order(&[p(11, 1), p(10, 1)], &buf).unwrap();
        assert_eq!(order, vec![p(11, 1), p(10, 1)]);

        let mut mf = MiddleDropFlush::new(2, 4);
        mf.block_of.insert(1, 3);
        mf.block_of.insert(2, 1);
        let order = mf.decision_order(&[p(1, 2), p(2, 2)], &buf).unwrap();
        assert_eq!(order, vec![p(2, 2), p(1, 2)]);

        assert!(mf.decision_order(&[p(7, 2)], &buf).is_err());
    }

    #[test]
    fn decision_order_predicts_blocks_of_same_subphase_frames() {
        // k=2, B=1: block length 3, GR1 takes one 1-packet per phase
        let mut mf = MiddleDropFlush::new(2, 1);
        let buf = Queue::new(1);
        for f in 1..=2 {
            mf.decide(&buf, p(f, 1), t(0)).unwrap();
            mf.on_delivery(None);
        }
        // frame 3's 1-packet closes block 1, frame 4's lands in block 2 (GR1 full)
        let order = mf.decision_order(&[p(4, 2), p(3, 2), p(3, 1), p(4, 1)], &buf).unwrap();
        assert_eq!(order, vec![p(3, 1), p(4, 1), p(3, 2), p(4, 2)]);
    }

    #[test]
    fn middle_drop_preempts_rank_half_plus_one() {
        // k=2, B=8: A=4, drop the 3rd buffered 2-packet
        let mut phases = vec![(1..=5).map(|f| p(f, 1)).collect::<Vec<_>>()];
        phases.push((1..=5).map(|f| p(f, 2)).collect());
        let inst = Instance::new(2, 5, phases).unwrap();
        let res = run_with(&inst, 8, MiddleDropFlush::new(2, 8)).unwrap();
        // only frames 1..4 get their 1-packet in (Counter <= A)
        let preempts: Vec<_> = res
            .trace
            .iter()
            .filter(|e| e.action == Action::Preempt)
            .map(|e| e.packet)
            .collect();
        assert!(preempts.is_empty(), "frame 5 is invalid, nothing to drop: {preempts:?}");

        let mut mf = MiddleDropFlush::new(2, 8);
        let mut buf = Queue::new(8);
        for f in 1..=5 {
            let d = mf.decide(&buf, p(f, 1), t(0)).unwrap();
            if d.accept {
                buf.push(p(f, 1)).unwrap();
            }
        }
        // transmit the 1-packets, then buffer four 2-packets
        while buf.pop_front().is_some() {}
        for f in 1..=4 {
            assert!(mf.decide(&buf, p(f, 2), t(0)).unwrap().accept);
            buf.push(p(f, 2)).unwrap();
        }
        // a fifth valid frame: bypass the counter by forcing validity
        mf.block_of.insert(6, 1);
        *mf.valid_in_block.get_mut(&1).unwrap() += 1;
        let d = mf.decide(&buf, p(6, 2), t(0)).unwrap();
        assert!(d.accept);
        assert_eq!(d.preemptions[0].packet, p(3, 2));
        assert_eq!(d.preemptions[0].kind, PreemptKind::MiddleDrop);
        // block 1 had 5 valid frames > 2, so no flush
        assert_eq!(d.preemptions.len(), 1);
        assert_eq!(mf.case_counts()[&MfCase::MiddleDrop], 1);
        assert!(!mf.is_valid(3));
    }

    #[test]
    fn zero_subbuffer_rejects_everything() {
        let phases = vec![vec![p(1, 1), p(2, 1)], vec![p(1, 2), p(2, 2)], vec![p(1, 3), p(2, 3)]];
        let inst = Instance::new(3, 2, phases).unwrap();
        let res = run_with(&inst, 2, MiddleDropFlush::new(3, 2)).unwrap();
        assert_eq!(res.gain, 0);
        assert!(res
            .trace
            .iter()
            .filter(|e| e.actor == Actor::Mf)
            .all(|e| e.action == Action::Reject));
    }
}
