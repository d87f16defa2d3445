use serde::Serialize;
use serde_json::{Map, Value};

use super::{FrameId, PacketId};
use crate::error::StructureError;

/// A complete arrival schedule.
///
/// `phases()[t]` lists the packets arriving in the arrival subphase of phase
/// `t`; list order is the tie-break order for same-subphase processing.
/// Empty phases are explicit, so a delivery still happens in each of them.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    k: u32,
    n_frames: u32,
    name: String,
    meta: Map<String, Value>,
    phases: Vec<Vec<PacketId>>,
    // arrival phase of packet (f, j) at (f - 1) * k + (j - 1)
    arrival: Vec<u32>,
}

impl Instance {
    /// Builds an instance, rejecting structural malformations: out-of-range or
    /// duplicate packets, frames with fewer than `k` packets, and frames whose
    /// `j`-packet arrives before their `(j-1)`-packet.
    pub fn new(k: u32, n_frames: u32, phases: Vec<Vec<PacketId>>) -> Result<Self, StructureError> {
        if k == 0 {
            return Err(StructureError::ZeroK);
        }
        if n_frames == 0 {
            return Err(StructureError::NoFrames);
        }
        if phases.iter().all(|ph| ph.is_empty()) {
            return Err(StructureError::NoArrivals);
        }
        let kk = k as usize;
        let mut arrival = vec![u32::MAX; n_frames as usize * kk];
        for (t, arrivals) in phases.iter().enumerate() {
            for &p in arrivals {
                if p.frame == 0 || p.frame > n_frames || p.j == 0 || p.j > k {
                    return Err(StructureError::OutOfRange(p, k, n_frames));
                }
                let slot = &mut arrival[(p.frame as usize - 1) * kk + (p.j as usize - 1)];
                if *slot != u32::MAX {
                    return Err(StructureError::Duplicate(p));
                }
                *slot = t as u32;
            }
        }
        for frame in 1..=n_frames {
            let row = &arrival[(frame as usize - 1) * kk..frame as usize * kk];
            for (idx, &arr) in row.iter().enumerate() {
                if arr == u32::MAX {
                    return Err(StructureError::Missing(PacketId::new(frame, idx as u32 + 1)));
                }
                if idx > 0 && arr < row[idx - 1] {
                    return Err(StructureError::IndexOrder {
                        frame,
                        j: idx as u32 + 1,
                        arr,
                        prev_j: idx as u32,
                        prev_arr: row[idx - 1],
                    });
                }
            }
        }
        Ok(Instance {
            k,
            n_frames,
            name: String::new(),
            meta: Map::new(),
            phases,
            arrival,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_meta(mut self, meta: Map<String, Value>) -> Self {
        self.meta = meta;
        self
    }

    pub fn set_meta(&mut self, key: &str, value: impl Serialize) {
        let value = serde_json::to_value(value).unwrap_or(Value::Null);
        self.meta.insert(key.to_string(), value);
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n_frames(&self) -> u32 {
        self.n_frames
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn meta(&self) -> &Map<String, Value> {
        &self.meta
    }

    pub fn phases(&self) -> &[Vec<PacketId>] {
        &self.phases
    }

    /// Number of phases stored, including any explicit trailing empty ones.
    pub fn horizon(&self) -> u32 {
        self.phases.len() as u32
    }

    pub fn packet_count(&self) -> usize {
        self.arrival.len()
    }

    pub fn frames(&self) -> impl Iterator<Item = FrameId> {
        1..=self.n_frames
    }

    /// `arr(p)`.
    pub fn arrival(&self, p: PacketId) -> u32 {
        self.arrival[self.index(p)]
    }

    /// Arrival phases of a frame's packets, indexed by `j - 1`.
    pub fn frame_arrivals(&self, frame: FrameId) -> &[u32] {
        let kk = self.k as usize;
        let start = (frame as usize - 1) * kk;
        &self.arrival[start..start + kk]
    }

    pub fn last_arrival_phase(&self) -> u32 {
        self.phases
            .iter()
            .rposition(|ph| !ph.is_empty())
            .expect("instance has arrivals") as u32
    }

    /// Drops explicit trailing empty phases.
    pub fn trimmed(&self) -> Instance {
        let mut out = self.clone();
        out.phases.truncate(self.last_arrival_phase() as usize + 1);
        out
    }

    fn index(&self, p: PacketId) -> usize {
        (p.frame as usize - 1) * self.k as usize + (p.j as usize - 1)
    }
}

/// Extends `instance` with empty phases so that `b` deliveries follow the last
/// arrival, enough to drain any buffer of size `b`. Idempotent.
pub fn append_drain(instance: &Instance, b: usize) -> Instance {
    let needed = instance.last_arrival_phase() as usize + 1 + b;
    let mut out = instance.clone();
    if out.phases.len() < needed {
        out.phases.resize(needed, Vec::new());
    }
    out
}

/// A pair of frames whose relative order differs between two packet indices.
///
/// `frames.0`'s `indices.0`-packet arrives strictly before `frames.1`'s, while
/// its `indices.1`-packet arrives strictly after.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct OrderViolation {
    pub frames: (FrameId, FrameId),
    pub indices: (u32, u32),
}

/// Lists every order-respecting violation; empty iff the input is
/// order-respecting. Equal arrival phases are compatible with either order.
pub fn validate_order_respecting(instance: &Instance) -> Vec<OrderViolation> {
    let k = instance.k() as usize;
    let mut out = Vec::new();
    let mut before = Vec::with_capacity(k);
    let mut after = Vec::with_capacity(k);
    for f in instance.frames() {
        let fa = instance.frame_arrivals(f);
        for g in f + 1..=instance.n_frames() {
            let ga = instance.frame_arrivals(g);
            before.clear();
            after.clear();
            for j in 0..k {
                match fa[j].cmp(&ga[j]) {
                    std::cmp::Ordering::Less => before.push(j as u32 + 1),
                    std::cmp::Ordering::Greater => after.push(j as u32 + 1),
                    std::cmp::Ordering::Equal => {}
                }
            }
            if before.is_empty() || after.is_empty() {
                continue;
            }
            // orient each pair so that `frames.0` leads at `indices.0`
            for &jb in &before {
                for &ja in &after {
                    out.push(OrderViolation {
                        frames: (f, g),
                        indices: (jb, ja),
                    });
                }
            }
        }
    }
    out
}
