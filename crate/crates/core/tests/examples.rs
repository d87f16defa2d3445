//! Runs each example's `run_example` and checks what it reports.

#[allow(dead_code)]
#[path = "../examples/appendix_b_trace.rs"]
mod appendix_b_trace;
#[allow(dead_code)]
#[path = "../examples/custom_policy.rs"]
mod custom_policy;
#[allow(dead_code)]
#[path = "../examples/det_lower_bound.rs"]
mod det_lower_bound;
#[allow(dead_code)]
#[path = "../examples/instance_io.rs"]
mod instance_io;
#[allow(dead_code)]
#[path = "../examples/opt_oracles.rs"]
mod opt_oracles;
#[allow(dead_code)]
#[path = "../examples/randomized_lower_bound.rs"]
mod randomized_lower_bound;
#[allow(dead_code)]
#[path = "../examples/ratio_sweep.rs"]
mod ratio_sweep;
#[allow(dead_code)]
#[path = "../examples/sp_killer.rs"]
mod sp_killer;

use kftm::algorithms::PolicyKind;

#[test]
fn appendix_b_trace_matches() {
    let (diff, completed) = appendix_b_trace::run_example().unwrap();
    assert!(diff.is_empty(), "{diff}");
    assert_eq!(completed, vec![1, 2, 87, 88]);
}

#[test]
fn det_lower_bound_meets_bound() {
    let rows = det_lower_bound::run_example().unwrap();
    assert!(rows.iter().all(|r| r.3), "{rows:?}");
    assert!(rows.iter().any(|r| r.2.is_infinite()));
}

#[test]
fn sp_killer_ratios() {
    let report = sp_killer::run_example(4, 8).unwrap();
    assert_eq!(report.opt_gain, 24);
    assert_eq!(report.policy(PolicyKind::Sp).unwrap().gain, 2);
    assert!(report.policy(PolicyKind::Mf).unwrap().gain >= 4);
    assert!(report.passed());
}

#[test]
fn randomized_lower_bound_values() {
    let (z, opt, mf) = randomized_lower_bound::run_example().unwrap();
    assert!((1..=2).contains(&z));
    assert_eq!(opt, 24);
    assert!(mf <= 16);
}

#[test]
fn opt_oracles_agree() {
    assert_eq!(opt_oracles::run_example(5).unwrap(), 5);
}

#[test]
fn ratio_sweep_passes() {
    let report = ratio_sweep::run_example().unwrap();
    assert!(!report.rows.is_empty());
    assert!(report.passed());
}

#[test]
fn custom_policy_runs() {
    let (mine, greedy) = custom_policy::run_example().unwrap();
    assert!(mine > 0 && greedy > 0);
}

#[test]
fn instance_io_round_trips() {
    let inst = instance_io::run_example().unwrap();
    assert_eq!(inst.name(), "hand-made");
    assert!(kftm::model::validate_order_respecting(&inst).is_empty());
}
