//! Plugging a user-defined policy into the simulator, the invariant checker
//! and the adaptive adversary.

use std::collections::HashSet;

use kftm::algorithms::{run_with, Actor, Greedy, OnlinePolicy, PolicyDecision};
use kftm::generators::{gen_det_lower_bound, gen_random_order_respecting, BurstParams};
use kftm::harness::check_invariants;
use kftm::model::{EventTime, FrameId, PacketId, Queue};

/// Greedy that stops spending buffer space on frames it has already lost.
#[derive(Debug, Clone)]
pub struct ValidOnlyGreedy {
    b: usize,
    lost: HashSet<FrameId>,
}

impl ValidOnlyGreedy {
    pub fn new(b: usize) -> Self {
        ValidOnlyGreedy {
            b,
            lost: HashSet::new(),
        }
    }
}

impl OnlinePolicy for ValidOnlyGreedy {
    fn actor(&self) -> Actor {
        Actor::Other("VALID-GREEDY".into())
    }

    fn decide(&mut self, buffer: &Queue, packet: PacketId, _time: EventTime) -> kftm::Result<PolicyDecision> {
        if self.lost.contains(&packet.frame) {
            return Ok(PolicyDecision::reject("lost"));
        }
        if buffer.len() < self.b {
            Ok(PolicyDecision::accept("accept"))
        } else {
            self.lost.insert(packet.frame);
            Ok(PolicyDecision::reject("full"))
        }
    }
}

pub fn run_example() -> kftm::Result<(usize, usize)> {
    let (k, b) = (3, 6);
    let (mut mine, mut greedy) = (0, 0);
    for seed in 0..50 {
        let inst = gen_random_order_respecting(k, 12, seed, &BurstParams::default())?;
        let sim = run_with(&inst, b, ValidOnlyGreedy::new(b))?;
        assert!(check_invariants(&sim, &inst, b).is_empty());
        mine += sim.gain;
        greedy += run_with(&inst, b, Greedy::new(b))?.gain;
    }
    println!("total gain over 50 instances: valid-only greedy {mine}, greedy {greedy}");

    let case = gen_det_lower_bound(k, b, ValidOnlyGreedy::new(b))?;
    let sim = run_with(&case.instance, b, ValidOnlyGreedy::new(b))?;
    println!(
        "against the adaptive adversary: {} of {} certified frames",
        sim.gain,
        case.opt_witness.len()
    );
    Ok((mine, greedy))
}

fn main() -> kftm::Result<()> {
    run_example()?;
    Ok(())
}
