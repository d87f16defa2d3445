//! Builds the oblivious lower-bound instance for k=3, y=6, B=4, choosing the
//! good group `z` as the one MF accepts the fewest packets of.

use kftm::algorithms::{MiddleDropFlush, PolicyKind};
use kftm::generators::{choose_z, gen_rand_lower_bound};
use kftm::harness::{run_ratio, OptMode};
use kftm::model::validate_order_respecting;

pub fn run_example() -> kftm::Result<(u32, usize, usize)> {
    let (k, b, y) = (3, 4, 6);
    let choice = choose_z(k, b, y, |_| Ok(MiddleDropFlush::new(k, b)), 1)?;
    println!("accepted per group {:?} -> z = {}", choice.accepted, choice.z);

    let case = gen_rand_lower_bound(k, b, y, choice.z)?;
    assert!(validate_order_respecting(&case.instance).is_empty());
    let report = run_ratio(
        &case.instance,
        b,
        &[PolicyKind::Mf],
        &OptMode::Certificate(case.opt_witness.clone()),
    )?;
    let mf = &report.policies[0];
    println!("V_OPT >= {}, V_MF = {}, ratio {}", report.opt_gain, mf.gain, mf.ratio);
    Ok((choice.z, report.opt_gain, mf.gain))
}

fn main() -> kftm::Result<()> {
    run_example()?;
    Ok(())
}
