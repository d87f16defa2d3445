use super::{Actor, OnlinePolicy, PolicyDecision};
use crate::error::Result;
use crate::model::{EventTime, PacketId, Queue};

/// Non-preemptive greedy: accept whenever the buffer has room.
#[derive(Debug, Clone)]
pub struct Greedy {
    b: usize,
}

impl Greedy {
    pub fn new(b: usize) -> Self {
        Greedy { b }
    }
}

impl OnlinePolicy for Greedy {
    fn actor(&self) -> Actor {
        Actor::Greedy
    }

    fn decide(&mut self, buffer: &Queue, _packet: PacketId, _time: EventTime) -> Result<PolicyDecision> {
        if buffer.len() < self.b {
            Ok(PolicyDecision::accept("accept"))
        } else {
            Ok(PolicyDecision::reject("full"))
        }
    }
}
