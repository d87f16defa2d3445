use std::fmt;

use serde::{Deserialize, Serialize};

/// 1-based frame index.
pub type FrameId = u32;

/// One packet: the `j`-th packet (by arrival order) of frame `frame`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PacketId {
    pub frame: FrameId,
    pub j: u32,
}

impl PacketId {
    pub const fn new(frame: FrameId, j: u32) -> Self {
        PacketId { frame, j }
    }
}

impl fmt::Display for PacketId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.frame, self.j)
    }
}
