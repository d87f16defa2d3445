use std::collections::VecDeque;

use super::PacketId;

/// FIFO buffer of capacity `B`. Acceptance appends at the tail, transmission
/// pops the head, preemption removes an interior packet and keeps the
/// relative order of the rest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Queue {
    items: VecDeque<PacketId>,
    capacity: usize,
}

impl Queue {
    pub fn new(capacity: usize) -> Self {
        Queue {
            items: VecDeque::with_capacity(capacity.min(1024)),
            capacity,
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.items.len() >= self.capacity
    }

    /// Appends at the tail; hands the packet back if the queue is full.
    pub fn push(&mut self, packet: PacketId) -> Result<(), PacketId> {
        if self.is_full() {
            return Err(packet);
        }
        self.items.push_back(packet);
        Ok(())
    }

    pub fn pop_front(&mut self) -> Option<PacketId> {
        self.items.pop_front()
    }

    pub fn head(&self) -> Option<PacketId> {
        self.items.front().copied()
    }

    /// Removes `packet` wherever it sits. Returns false if it is not buffered.
    pub fn remove(&mut self, packet: PacketId) -> bool {
        match self.items.iter().position(|p| *p == packet) {
            Some(pos) => {
                self.items.remove(pos);
                true
            }
            None => false,
        }
    }

    pub fn contains(&self, packet: PacketId) -> bool {
        self.items.contains(&packet)
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = PacketId> + ExactSizeIterator + '_ {
        self.items.iter().copied()
    }

    /// Buffered packets with index `j`, head first.
    pub fn with_index(&self, j: u32) -> impl Iterator<Item = PacketId> + '_ {
        self.items.iter().copied().filter(move |p| p.j == j)
    }

    pub fn count_index(&self, j: u32) -> usize {
        self.with_index(j).count()
    }

    /// The packet `p` with `ℓ(p) = rank` among buffered `j`-packets (1-based).
    pub fn nth_of_index(&self, j: u32, rank: usize) -> Option<PacketId> {
        rank.checked_sub(1).and_then(|skip| self.with_index(j).nth(skip))
    }
}
