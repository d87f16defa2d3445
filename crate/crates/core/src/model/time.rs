use std::fmt;

use serde::{Deserialize, Serialize};

/// Position of an event inside a phase. Every decision of the arrival
/// subphase precedes the single delivery of the same phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Slot {
    /// The `n`-th decision (0-based) of the arrival subphase.
    Decision(u32),
    Delivery,
}

/// A totally ordered event time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EventTime {
    pub phase: u32,
    pub slot: Slot,
}

impl EventTime {
    pub const fn decision(phase: u32, seq: u32) -> Self {
        EventTime {
            phase,
            slot: Slot::Decision(seq),
        }
    }

    pub const fn delivery(phase: u32) -> Self {
        EventTime {
            phase,
            slot: Slot::Delivery,
        }
    }

    pub fn is_delivery(&self) -> bool {
        self.slot == Slot::Delivery
    }
}

impl fmt::Display for EventTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.slot {
            Slot::Decision(seq) => write!(f, "phase {} decision {}", self.phase, seq),
            Slot::Delivery => write!(f, "phase {} delivery", self.phase),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decisions_precede_delivery_within_a_phase() {
        let mut times = vec![
            EventTime::delivery(3),
            EventTime::decision(3, 7),
            EventTime::decision(4, 0),
            EventTime::decision(3, 0),
            EventTime::delivery(2),
        ];
        times.sort();
        assert_eq!(
            times,
            vec![
                EventTime::delivery(2),
                EventTime::decision(3, 0),
                EventTime::decision(3, 7),
                EventTime::delivery(3),
                EventTime::decision(4, 0),
            ]
        );
    }
}
