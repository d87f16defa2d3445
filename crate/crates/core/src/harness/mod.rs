//! Competitive ratios, trace invariants, golden-trace comparison and sweeps.

mod compare;
mod invariants;
mod ratio;
mod sweep;

pub use compare::{compare_trace, CompareScope, DiffEntry, TraceDiff};
pub use invariants::{check_invariants, Check, Violation};
pub use ratio::{
    deterministic_lower_bound, mf_upper_bound, run_ratio, OptMode, OptSource, PolicyReport, Ratio, RatioReport,
};
pub use sweep::{sweep, BSpec, Grid, SweepConfig, SweepOpt, SweepReport, SweepRow};
