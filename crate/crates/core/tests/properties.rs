//! Property tests over seeded random order-respecting instances.

use proptest::prelude::*;

use kftm::algorithms::{run_policy, PolicyKind};
use kftm::generators::{gen_random_order_respecting, BurstParams};
use kftm::harness::check_invariants;
use kftm::model::{append_drain, read_instance_from, validate_order_respecting, write_instance_to, Instance};
use kftm::opt::{feasible, opt_branch_bound, opt_bruteforce, FrameSubset};

fn instance(max_frames: u32) -> impl Strategy<Value = Instance> {
    (1u32..=3, 1..=max_frames, any::<u64>(), 0.0f64..=1.0, 1u32..=4, 0u32..=5).prop_map(
        |(k, n, seed, burst_prob, max_gap, max_lag)| {
            let params = BurstParams {
                burst_prob,
                max_gap,
                max_lag,
            };
            gen_random_order_respecting(k, n, seed, &params).unwrap()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn generated_instances_are_order_respecting(inst in instance(16)) {
        prop_assert!(validate_order_respecting(&inst).is_empty());
    }

    #[test]
    fn instance_round_trip(inst in instance(16)) {
        let mut buf = Vec::new();
        write_instance_to(&inst, &mut buf).unwrap();
        let back = read_instance_from(buf.as_slice(), "memory").unwrap();
        prop_assert_eq!(back, inst);
    }

    #[test]
    fn simulation_is_deterministic(inst in instance(12), b in 1usize..=8) {
        for kind in PolicyKind::ALL {
            let x = run_policy(&inst, b, kind).unwrap();
            let y = run_policy(&inst, b, kind).unwrap();
            prop_assert_eq!(&x.trace, &y.trace);
            prop_assert_eq!(&x.completed, &y.completed);
        }
    }

    #[test]
    fn drain_suffix_changes_nothing(inst in instance(12), b in 1usize..=8) {
        let drained = append_drain(&inst, b);
        prop_assert!(drained.horizon() >= inst.horizon());
        for kind in PolicyKind::ALL {
            prop_assert_eq!(run_policy(&inst, b, kind).unwrap().completed, run_policy(&drained, b, kind).unwrap().completed);
        }
        prop_assert_eq!(opt_bruteforce(&inst, b).unwrap().gain, opt_bruteforce(&drained, b).unwrap().gain);
    }

    #[test]
    fn opt_dominates_and_completed_sets_are_feasible(inst in instance(12), b in 1usize..=8) {
        let opt = opt_bruteforce(&inst, b).unwrap();
        prop_assert!(feasible(&inst, &opt.witness, b));
        for kind in PolicyKind::ALL {
            let sim = run_policy(&inst, b, kind).unwrap();
            prop_assert!(sim.gain <= opt.gain, "{} beat OPT", kind);
            prop_assert!(feasible(&inst, &sim.completed, b), "{} completed an infeasible set", kind);
        }
    }

    #[test]
    fn feasible_sets_are_downward_closed(inst in instance(12), b in 1usize..=8) {
        let opt = opt_bruteforce(&inst, b).unwrap();
        for &f in &opt.witness {
            let mut smaller: FrameSubset = opt.witness.clone();
            smaller.remove(&f);
            prop_assert!(feasible(&inst, &smaller, b));
        }
    }

    #[test]
    fn oracles_agree(inst in instance(12), b in 1usize..=8) {
        let brute = opt_bruteforce(&inst, b).unwrap();
        let bb = opt_branch_bound(&inst, b).unwrap();
        prop_assert_eq!(brute.gain, bb.gain);
        prop_assert!(feasible(&inst, &bb.witness, b));
    }

    #[test]
    fn policies_satisfy_invariants(inst in instance(14), b in 1usize..=9) {
        for kind in PolicyKind::ALL {
            let sim = run_policy(&inst, b, kind).unwrap();
            let v = check_invariants(&sim, &inst, b);
            prop_assert!(v.is_empty(), "{}: {:?}", kind, v);
        }
    }
}
