//! Plays the adaptive deterministic adversary against MF for a few `(k, B)`
//! and compares the certified ratio with `2B/⌊B/(k−1)⌋ + 1`.

use kftm::algorithms::{MiddleDropFlush, PolicyKind};
use kftm::generators::gen_det_lower_bound;
use kftm::harness::{deterministic_lower_bound, run_ratio, OptMode, Ratio};

pub fn run_example() -> kftm::Result<Vec<(u32, usize, Ratio, bool)>> {
    let mut out = Vec::new();
    for (k, b) in [(2, 4), (3, 6), (4, 9), (4, 2)] {
        let case = gen_det_lower_bound(k, b, MiddleDropFlush::new(k, b))?;
        let report = run_ratio(
            &case.instance,
            b,
            &[PolicyKind::Mf],
            &OptMode::Certificate(case.opt_witness.clone()),
        )?;
        let ratio = report.policies[0].ratio;
        let meets = match deterministic_lower_bound(k, b) {
            Some((n, d)) => ratio.at_least(n, d),
            None => ratio.is_infinite(),
        };
        println!(
            "k={k} B={b:>2}: V_OPT={:>3} V_MF={:>2} ratio={ratio:>7} bound={} {}",
            report.opt_gain,
            report.policies[0].gain,
            deterministic_lower_bound(k, b).map_or("inf".into(), |(n, d)| format!("{n}/{d}")),
            if meets { "ok" } else { "VIOLATED" }
        );
        out.push((k, b, ratio, meets));
    }
    Ok(out)
}

fn main() -> kftm::Result<()> {
    run_example()?;
    Ok(())
}
