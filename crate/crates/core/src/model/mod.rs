//! Domain types: packets, phase-indexed instances, the FIFO queue and the
//! instance file format.

mod instance;
mod io;
mod packet;
mod queue;
mod time;

pub use instance::{append_drain, validate_order_respecting, Instance, OrderViolation};
pub use io::{read_instance, read_instance_from, write_instance, write_instance_to};
pub use packet::{FrameId, PacketId};
pub use queue::Queue;
pub use time::{EventTime, Slot};
