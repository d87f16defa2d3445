//! Online admission policies and the phase-by-phase simulator that runs them.

mod greedy;
mod mf;
mod policy;
mod sim;
mod sp;
mod trace;

pub use greedy::Greedy;
pub use mf::{MfCase, MiddleDropFlush};
pub use policy::{OnlinePolicy, PolicyDecision, PolicyKind, PreemptKind, Preemption, ShadowDecision};
pub use sim::{run_policy, run_with, SimResult, Simulator};
pub use sp::StaticPartitioning;
pub use trace::{read_trace_csv, read_trace_csv_from, write_trace_csv, write_trace_csv_to, Action, Actor, TraceEvent};
