//! The instance on which static partitioning completes only `⌊B/k⌋` frames
//! while the optimum completes `(k−1)B`.

use kftm::algorithms::PolicyKind;
use kftm::generators::gen_sp_killer;
use kftm::harness::{run_ratio, OptMode, RatioReport};

pub fn run_example(k: u32, b: usize) -> kftm::Result<RatioReport> {
    let case = gen_sp_killer(k, b)?;
    let report = run_ratio(
        &case.instance,
        b,
        &[PolicyKind::Sp, PolicyKind::Mf, PolicyKind::Greedy],
        &OptMode::Certificate(case.opt_witness.clone()),
    )?;
    println!(
        "k={k} B={b}: {} frames, certified V_OPT = {}",
        report.frames, report.opt_gain
    );
    for p in &report.policies {
        println!("  {:<7} gain {:>3}  ratio {}", p.policy.as_str(), p.gain, p.ratio);
    }
    for c in &case.claims {
        println!("  claim {c}");
    }
    Ok(report)
}

fn main() -> kftm::Result<()> {
    run_example(4, 8)?;
    Ok(())
}
