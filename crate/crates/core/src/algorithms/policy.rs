use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Actor, Greedy, MiddleDropFlush, StaticPartitioning};
use crate::error::{Error, Result};
use crate::model::{EventTime, FrameId, PacketId, Queue};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PreemptKind {
    /// The buffered packet chosen by the overflow rule.
    MiddleDrop,
    /// A buffered packet of the middle-dropped packet's frame.
    Corresponding,
    /// A buffered packet removed because its whole block was given up.
    Flush,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preemption {
    pub packet: PacketId,
    pub kind: PreemptKind,
    pub case_label: &'static str,
}

/// Decision of a shadow algorithm run alongside the policy on the same packet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShadowDecision {
    pub actor: Actor,
    pub accepted: bool,
}

/// What a policy does with one arriving packet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolicyDecision {
    pub accept: bool,
    /// Buffered packets removed at this decision time, in trace order.
    pub preemptions: Vec<Preemption>,
    pub case_label: &'static str,
    pub shadow: Option<ShadowDecision>,
}

impl PolicyDecision {
    pub fn accept(case_label: &'static str) -> Self {
        PolicyDecision {
            accept: true,
            preemptions: Vec::new(),
            case_label,
            shadow: None,
        }
    }

    pub fn reject(case_label: &'static str) -> Self {
        PolicyDecision {
            accept: false,
            ..PolicyDecision::accept(case_label)
        }
    }
}

/// An online admission policy for a single FIFO buffer.
///
/// The simulator calls [`decision_order`](Self::decision_order) once per
/// arrival subphase, then [`decide`](Self::decide) for each packet in that
/// order, then [`on_delivery`](Self::on_delivery) once per phase after the
/// head (if any) has been transmitted.
pub trait OnlinePolicy {
    fn actor(&self) -> Actor;

    fn decision_order(&self, arrivals: &[PacketId], _buffer: &Queue) -> Result<Vec<PacketId>> {
        Ok(arrivals.to_vec())
    }

    fn decide(&mut self, buffer: &Queue, packet: PacketId, time: EventTime) -> Result<PolicyDecision>;

    fn on_delivery(&mut self, _transmitted: Option<PacketId>) {}

    /// Block number of a frame, for policies that partition frames into blocks.
    fn block_of(&self, _frame: FrameId) -> Option<u32> {
        None
    }
}

impl<P: OnlinePolicy + ?Sized> OnlinePolicy for Box<P> {
    fn actor(&self) -> Actor {
        (**self).actor()
    }

    fn decision_order(&self, arrivals: &[PacketId], buffer: &Queue) -> Result<Vec<PacketId>> {
        (**self).decision_order(arrivals, buffer)
    }

    fn decide(&mut self, buffer: &Queue, packet: PacketId, time: EventTime) -> Result<PolicyDecision> {
        (**self).decide(buffer, packet, time)
    }

    fn on_delivery(&mut self, transmitted: Option<PacketId>) {
        (**self).on_delivery(transmitted)
    }

    fn block_of(&self, frame: FrameId) -> Option<u32> {
        (**self).block_of(frame)
    }
}

/// The built-in policies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolicyKind {
    Mf,
    Sp,
    /// SP that also rejects packets of frames it has already broken.
    SpSkipInvalid,
    Greedy,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 4] = [
        PolicyKind::Mf,
        PolicyKind::Sp,
        PolicyKind::SpSkipInvalid,
        PolicyKind::Greedy,
    ];

    pub fn build(self, k: u32, b: usize) -> Result<Box<dyn OnlinePolicy + Send>> {
        if k == 0 || b == 0 {
            return Err(Error::Parameters(format!("need k >= 1 and B >= 1 (k={k}, B={b})")));
        }
        Ok(match self {
            PolicyKind::Mf => Box::new(MiddleDropFlush::new(k, b)),
            PolicyKind::Sp => Box::new(StaticPartitioning::new(k, b)),
            PolicyKind::SpSkipInvalid => Box::new(StaticPartitioning::new(k, b).skip_invalid(true)),
            PolicyKind::Greedy => Box::new(Greedy::new(b)),
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PolicyKind::Mf => "mf",
            PolicyKind::Sp => "sp",
            PolicyKind::SpSkipInvalid => "sp-skip-invalid",
            PolicyKind::Greedy => "greedy",
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PolicyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PolicyKind::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::Parameters(format!(
                    "unknown policy `{s}` (expected mf, sp, sp-skip-invalid or greedy)"
                ))
            })
    }
}
