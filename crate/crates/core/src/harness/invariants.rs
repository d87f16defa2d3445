//! Trace replay checks.
//!
//! The checker rebuilds the policy's buffer from the trace alone and checks
//! it at every non-event time (after all rows of one decision or delivery).
//! MF-specific checks read block numbers and GR₁'s decisions from the trace.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use crate::algorithms::{Action, Actor, SimResult, TraceEvent};
use crate::model::{EventTime, FrameId, Instance, PacketId, Queue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    /// Rows that cannot be replayed: dropping or sending packets that are not
    /// buffered, sending a packet that is not the head, unknown actors.
    TraceConsistency,
    /// Every arriving packet gets exactly one decision, in its arrival phase.
    DecisionCompleteness,
    Occupancy,
    /// At most `⌊B/k⌋` buffered packets per index (MF and SP).
    IndexCap,
    /// MF: a kept GR₁-accepted 1-packet leaves before the `2B−1`-th next
    /// GR₁-accepted 1-packet arrives.
    LeaveBeforeLater1Packets,
    /// MF: exactly the first `A` of every `3B` GR₁-accepted 1-packets are
    /// accepted, and the `n`-th gets block `⌈n/3B⌉`.
    BlockAdmission,
    /// MF: buffered packets of one index are in non-decreasing block order.
    BlockOrder,
    /// MF: no packet of a flushed block stays buffered.
    FlushCompleteness,
    /// MF: no packet is accepted for a frame that already lost one.
    InvalidAcceptance,
    /// Completed frames and gain agree with the transmissions.
    Gain,
}

impl Check {
    pub const ALL: [Check; 10] = [
        Check::TraceConsistency,
        Check::DecisionCompleteness,
        Check::Occupancy,
        Check::IndexCap,
        Check::LeaveBeforeLater1Packets,
        Check::BlockAdmission,
        Check::BlockOrder,
        Check::FlushCompleteness,
        Check::InvalidAcceptance,
        Check::Gain,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Check::TraceConsistency => "trace-consistency",
            Check::DecisionCompleteness => "decision-completeness",
            Check::Occupancy => "occupancy",
            Check::IndexCap => "index-cap",
            Check::LeaveBeforeLater1Packets => "leave-before-later-1-packets",
            Check::BlockAdmission => "block-admission",
            Check::BlockOrder => "block-order",
            Check::FlushCompleteness => "flush-completeness",
            Check::InvalidAcceptance => "invalid-acceptance",
            Check::Gain => "gain",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub check: Check,
    pub time: Option<EventTime>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.time {
            Some(t) => write!(f, "{} at {}: {}", self.check, t, self.detail),
            None => write!(f, "{}: {}", self.check, self.detail),
        }
    }
}

/// Replays `sim.trace` against `instance` with buffer size `b` and returns
/// every violated invariant; empty means all checks pass.
pub fn check_invariants(sim: &SimResult, instance: &Instance, b: usize) -> Vec<Violation> {
    let mut r = Replay::new(sim, instance, b);
    let trace = &sim.trace;
    let mut start = 0;
    while start < trace.len() {
        let time = trace[start].time;
        let end = start + trace[start..].iter().take_while(|e| e.time == time).count();
        r.group(&trace[start..end]);
        start = end;
    }
    r.finish();
    r.out
}

struct Gr1Row {
    time: EventTime,
    packet: PacketId,
}

struct Replay<'a> {
    sim: &'a SimResult,
    instance: &'a Instance,
    b: usize,
    a: usize,
    is_mf: bool,
    capped: bool,
    buffer: Queue,
    // frame -> block number as first reported in the trace
    blocks: HashMap<FrameId, u32>,
    decided: HashSet<PacketId>,
    dropped: HashSet<FrameId>,
    sent: HashMap<FrameId, u32>,
    left: HashMap<PacketId, EventTime>,
    gr1_accepted: Vec<Gr1Row>,
    mf_first: HashMap<PacketId, bool>,
    out: Vec<Violation>,
}

impl<'a> Replay<'a> {
    fn new(sim: &'a SimResult, instance: &'a Instance, b: usize) -> Self {
        let is_mf = sim.actor == Actor::Mf;
        Replay {
            sim,
            instance,
            b,
            a: b / instance.k() as usize,
            is_mf,
            capped: is_mf || sim.actor == Actor::Sp,
            // room for overfull replays; occupancy is checked explicitly
            buffer: Queue::new(usize::MAX),
            blocks: HashMap::new(),
            decided: HashSet::new(),
            dropped: HashSet::new(),
            sent: HashMap::new(),
            left: HashMap::new(),
            gr1_accepted: Vec::new(),
            mf_first: HashMap::new(),
            out: Vec::new(),
        }
    }

    fn report(&mut self, check: Check, time: Option<EventTime>, detail: String) {
        self.out.push(Violation { check, time, detail });
    }

    fn note_block(&mut self, e: &TraceEvent) {
        let Some(block) = e.block else { return };
        match self.blocks.get(&e.packet.frame) {
            None => {
                self.blocks.insert(e.packet.frame, block);
            }
            Some(&prev) if prev != block => self.report(
                Check::TraceConsistency,
                Some(e.time),
                format!(
                    "frame {} reported with block {block} after block {prev}",
                    e.packet.frame
                ),
            ),
            Some(_) => {}
        }
    }

    fn group(&mut self, events: &[TraceEvent]) {
        let mut flushed_blocks = BTreeSet::new();
        for e in events {
            self.note_block(e);
            if e.actor == Actor::Gr1 {
                self.gr1_row(e);
                continue;
            }
            if e.actor != self.sim.actor {
                self.report(
                    Check::TraceConsistency,
                    Some(e.time),
                    format!("row for unknown actor {}", e.actor),
                );
                continue;
            }
            match e.action {
                Action::Accept | Action::Reject => self.decision(e),
                Action::Preempt | Action::Flush => {
                    if !self.buffer.remove(e.packet) {
                        self.report(
                            Check::TraceConsistency,
                            Some(e.time),
                            format!("{} {} which is not buffered", e.action, e.packet),
                        );
                    }
                    self.dropped.insert(e.packet.frame);
                    self.left.insert(e.packet, e.time);
                    if e.action == Action::Flush {
                        if let Some(u) = e.block {
                            flushed_blocks.insert(u);
                        }
                    }
                }
                Action::Transmit => self.transmit(e),
            }
        }
        let time = events[0].time;
        self.after_event(time, &flushed_blocks);
    }

    fn gr1_row(&mut self, e: &TraceEvent) {
        if e.packet.j != 1 || !matches!(e.action, Action::Accept | Action::Reject) {
            self.report(
                Check::TraceConsistency,
                Some(e.time),
                format!("unexpected GR1 row: {e}"),
            );
            return;
        }
        if e.action == Action::Accept {
            self.gr1_accepted.push(Gr1Row {
                time: e.time,
                packet: e.packet,
            });
        }
    }

    fn decision(&mut self, e: &TraceEvent) {
        let p = e.packet;
        if e.time.is_delivery() {
            self.report(
                Check::TraceConsistency,
                Some(e.time),
                format!("decision on {p} in a delivery subphase"),
            );
            return;
        }
        if p.frame == 0 || p.frame > self.instance.n_frames() || p.j == 0 || p.j > self.instance.k() {
            self.report(
                Check::DecisionCompleteness,
                Some(e.time),
                format!("{p} is not part of the instance"),
            );
            return;
        }
        if self.instance.arrival(p) != e.time.phase {
            self.report(
                Check::DecisionCompleteness,
                Some(e.time),
                format!(
                    "{p} decided at phase {} but arrives at phase {}",
                    e.time.phase,
                    self.instance.arrival(p)
                ),
            );
        }
        if !self.decided.insert(p) {
            self.report(Check::DecisionCompleteness, Some(e.time), format!("{p} decided twice"));
        }
        if p.j == 1 && self.is_mf {
            self.mf_first.insert(p, e.action == Action::Accept);
        }
        if e.action == Action::Reject {
            self.dropped.insert(p.frame);
            return;
        }
        if self.is_mf && self.dropped.contains(&p.frame) {
            self.report(
                Check::InvalidAcceptance,
                Some(e.time),
                format!("accepted {p} although frame {} already lost a packet", p.frame),
            );
        }
        if self.buffer.contains(p) {
            self.report(
                Check::TraceConsistency,
                Some(e.time),
                format!("{p} accepted while already buffered"),
            );
            return;
        }
        self.buffer.push(p).expect("replay buffer is unbounded");
    }

    fn transmit(&mut self, e: &TraceEvent) {
        if !e.time.is_delivery() {
            self.report(
                Check::TraceConsistency,
                Some(e.time),
                format!("transmit of {} outside delivery", e.packet),
            );
        }
        if self.buffer.head() != Some(e.packet) {
            self.report(
                Check::TraceConsistency,
                Some(e.time),
                format!("transmitted {} but the head is {:?}", e.packet, self.buffer.head()),
            );
            self.buffer.remove(e.packet);
        } else {
            self.buffer.pop_front();
        }
        *self.sent.entry(e.packet.frame).or_insert(0) += 1;
        self.left.insert(e.packet, e.time);
    }

    fn after_event(&mut self, time: EventTime, flushed_blocks: &BTreeSet<u32>) {
        if self.buffer.len() > self.b {
            let n = self.buffer.len();
            self.report(
                Check::Occupancy,
                Some(time),
                format!("{n} packets buffered, B={}", self.b),
            );
        }
        if self.capped {
            let mut per_index: BTreeMap<u32, usize> = BTreeMap::new();
            for p in self.buffer.iter() {
                *per_index.entry(p.j).or_insert(0) += 1;
            }
            for (j, n) in per_index {
                if n > self.a {
                    self.report(
                        Check::IndexCap,
                        Some(time),
                        format!("{n} buffered {j}-packets, A={}", self.a),
                    );
                }
            }
        }
        if !self.is_mf {
            return;
        }
        let mut last: HashMap<u32, (u32, PacketId)> = HashMap::new();
        let mut disorder = Vec::new();
        for p in self.buffer.iter() {
            let Some(&g) = self.blocks.get(&p.frame) else { continue };
            if let Some(&(prev_g, prev)) = last.get(&p.j) {
                if g < prev_g {
                    disorder.push(format!("{prev} (block {prev_g}) is ahead of {p} (block {g})"));
                }
            }
            last.insert(p.j, (g, p));
        }
        for d in disorder {
            self.report(Check::BlockOrder, Some(time), d);
        }
        for &u in flushed_blocks {
            let left: Vec<PacketId> = self
                .buffer
                .iter()
                .filter(|p| self.blocks.get(&p.frame) == Some(&u))
                .collect();
            if !left.is_empty() {
                self.report(
                    Check::FlushCompleteness,
                    Some(time),
                    format!("block {u} flushed but {left:?} remain buffered"),
                );
            }
        }
    }

    fn finish(&mut self) {
        let missing: Vec<PacketId> = (1..=self.instance.n_frames())
            .flat_map(|f| (1..=self.instance.k()).map(move |j| PacketId::new(f, j)))
            .filter(|p| !self.decided.contains(p))
            .collect();
        if !missing.is_empty() {
            let n = missing.len();
            let shown: Vec<_> = missing.iter().take(5).map(ToString::to_string).collect();
            self.report(
                Check::DecisionCompleteness,
                None,
                format!("{n} packets never decided, e.g. {}", shown.join(" ")),
            );
        }
        if !self.buffer.is_empty() {
            let n = self.buffer.len();
            self.report(
                Check::TraceConsistency,
                None,
                format!("{n} packets still buffered at the end"),
            );
        }

        let k = self.instance.k();
        let completed: BTreeSet<FrameId> = self.sent.iter().filter(|&(_, &n)| n == k).map(|(&f, _)| f).collect();
        if completed != self.sim.completed || self.sim.gain != completed.len() {
            self.report(
                Check::Gain,
                None,
                format!(
                    "transmissions complete {} frames, result claims gain {} with {} frames",
                    completed.len(),
                    self.sim.gain,
                    self.sim.completed.len()
                ),
            );
        }
        if self.is_mf {
            self.block_admission();
            self.leave_in_time();
        }
    }

    fn block_admission(&mut self) {
        let period = 3 * self.b;
        let mut found = Vec::new();
        for (n, row) in self.gr1_accepted.iter().enumerate() {
            let p = row.packet;
            let want_block = (n / period) as u32 + 1;
            let want_accept = n % period < self.a;
            let accepted = self.mf_first.get(&p).copied();
            if accepted != Some(want_accept) {
                found.push((
                    row.time,
                    format!(
                        "GR1-accepted 1-packet #{} {p}: MF {} but should {}",
                        n + 1,
                        match accepted {
                            Some(true) => "accepted",
                            Some(false) => "rejected",
                            None => "never decided",
                        },
                        if want_accept { "accept" } else { "reject" }
                    ),
                ));
            }
            if let Some(&g) = self.blocks.get(&p.frame) {
                if g != want_block {
                    found.push((
                        row.time,
                        format!(
                            "GR1-accepted 1-packet #{} {p} has block {g}, expected {want_block}",
                            n + 1
                        ),
                    ));
                }
            }
        }
        let gr1: HashSet<PacketId> = self.gr1_accepted.iter().map(|r| r.packet).collect();
        let mut extra: Vec<_> = self
            .mf_first
            .iter()
            .filter(|&(p, &acc)| acc && !gr1.contains(p))
            .map(|(p, _)| *p)
            .collect();
        extra.sort();
        for p in extra {
            found.push((
                EventTime::decision(self.instance.arrival(p), 0),
                format!("MF accepted {p} which GR1 rejected"),
            ));
        }
        for (t, d) in found {
            self.report(Check::BlockAdmission, Some(t), d);
        }
    }

    fn leave_in_time(&mut self) {
        let z = self.gr1_accepted.len();
        let span = 2 * self.b - 1;
        if z < 2 * self.b {
            return;
        }
        let mut found = Vec::new();
        for i in 0..=z - 2 * self.b {
            let row = &self.gr1_accepted[i];
            if self.mf_first.get(&row.packet) != Some(&true) {
                continue;
            }
            let later = &self.gr1_accepted[i + span];
            match self.left.get(&row.packet) {
                Some(&t) if t < later.time => {}
                Some(&t) => found.push((
                    t,
                    format!(
                        "{} left at {t}, not before {} arrived at {}",
                        row.packet, later.packet, later.time
                    ),
                )),
                None => found.push((row.time, format!("{} never left the buffer", row.packet))),
            }
        }
        for (t, d) in found {
            self.report(Check::LeaveBeforeLater1Packets, Some(t), d);
        }
    }
}
