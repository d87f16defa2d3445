use std::collections::HashSet;

use super::{Actor, OnlinePolicy, PolicyDecision};
use crate::error::Result;
use crate::model::{EventTime, FrameId, PacketId, Queue};

/// STATICPARTITIONING: `k` virtual subbuffers of `A = ⌊B/k⌋` slots, one per
/// packet index, with tail-drop on overflow. Never preempts.
#[derive(Debug, Clone)]
pub struct StaticPartitioning {
    a: usize,
    skip_invalid: bool,
    broken: HashSet<FrameId>,
}

impl StaticPartitioning {
    pub fn new(k: u32, b: usize) -> Self {
        StaticPartitioning {
            a: b / k as usize,
            skip_invalid: false,
            broken: HashSet::new(),
        }
    }

    /// Also reject packets of frames SP has already dropped a packet of.
    pub fn skip_invalid(mut self, on: bool) -> Self {
        self.skip_invalid = on;
        self
    }

    pub fn subbuffer(&self) -> usize {
        self.a
    }
}

impl OnlinePolicy for StaticPartitioning {
    fn actor(&self) -> Actor {
        Actor::Sp
    }

    fn decide(&mut self, buffer: &Queue, packet: PacketId, _time: EventTime) -> Result<PolicyDecision> {
        if self.skip_invalid && self.broken.contains(&packet.frame) {
            return Ok(PolicyDecision::reject("invalid"));
        }
        if buffer.count_index(packet.j) < self.a && !buffer.is_full() {
            Ok(PolicyDecision::accept("accept"))
        } else {
            self.broken.insert(packet.frame);
            Ok(PolicyDecision::reject("tail-drop"))
        }
    }
}
