//! Online k-frame throughput maximization in a single FIFO switch buffer.
//!
//! A frame is split into `k` unit packets and counts toward an algorithm's
//! gain only when all `k` of them are transmitted. This crate provides:
//!
//! - [`model`]: packets, instances (phase-indexed arrival schedules), the FIFO
//!   queue, order-respecting validation and the JSON Lines instance format.
//! - [`algorithms`]: the [`OnlinePolicy`](algorithms::OnlinePolicy) interface, a
//!   phase-stepping [`Simulator`](algorithms::Simulator) and three policies:
//!   middle-drop-and-flush (MF), static partitioning (SP) and a non-preemptive
//!   greedy baseline.
//! - [`opt`]: an exact offline optimum (subset enumeration and branch and bound)
//!   plus the feasibility check used to certify witnesses.
//! - [`generators`]: adversarial instance families with machine-checkable claims.
//! - [`harness`]: competitive ratios, trace invariant checks, golden-trace
//!   comparison and parameter sweeps.

pub mod algorithms;
pub mod error;
pub mod generators;
pub mod harness;
pub mod model;
pub mod opt;

pub use algorithms::{run_policy, OnlinePolicy, PolicyKind, SimResult, Simulator};
pub use error::{Error, Result};
pub use model::{Instance, PacketId};
