//! Replays the worked k=3, B=12 example with MF and diffs the decision trace
//! against the expected rows.
//!
//! ```text
//! cargo run --example appendix_b_trace
//! ```

use kftm::algorithms::{run_policy, Actor, PolicyKind};
use kftm::generators::{gen_appendix_b, APPENDIX_B_COMPLETED};
use kftm::harness::{check_invariants, compare_trace, CompareScope, TraceDiff};

pub fn run_example() -> kftm::Result<(TraceDiff, Vec<u32>)> {
    let case = gen_appendix_b();
    let sim = run_policy(&case.instance, case.b, PolicyKind::Mf)?;
    let golden = case.golden.as_deref().unwrap_or_default();
    let diff = compare_trace(&sim.trace, golden, CompareScope::Decisions);

    println!(
        "frames {}, phases {}, B = {}",
        case.instance.n_frames(),
        case.instance.horizon(),
        case.b
    );
    for e in sim
        .trace
        .iter()
        .filter(|e| e.actor == Actor::Mf && !e.case_label.is_empty())
        .take(8)
    {
        println!("  {e}");
    }
    println!("{diff}");
    let completed: Vec<u32> = sim.completed.iter().copied().collect();
    println!("MF completes {completed:?} (expected {APPENDIX_B_COMPLETED:?})");
    println!(
        "invariant violations: {}",
        check_invariants(&sim, &case.instance, case.b).len()
    );
    Ok((diff, completed))
}

fn main() -> kftm::Result<()> {
    let (diff, _) = run_example()?;
    if !diff.is_empty() {
        std::process::exit(1);
    }
    Ok(())
}
