//! Corrupted runs, one per invariant check.

use kftm::algorithms::{run_policy, Action, PolicyKind, SimResult};
use kftm::generators::{gen_appendix_b, generate, Family, GenParams};
use kftm::harness::Check;
use kftm::model::{Instance, PacketId};

pub struct Run {
    pub sim: SimResult,
    pub instance: Instance,
    pub b: usize,
}

pub fn appendix_b(kind: PolicyKind) -> Run {
    let case = gen_appendix_b();
    let sim = run_policy(&case.instance, case.b, kind).unwrap();
    Run {
        sim,
        instance: case.instance,
        b: case.b,
    }
}

fn row(sim: &SimResult, p: PacketId, action: Action) -> usize {
    sim.trace
        .iter()
        .position(|e| e.actor == sim.actor && e.packet == p && e.action == action)
        .unwrap_or_else(|| panic!("no {action} row for {p}"))
}

fn set_block(sim: &mut SimResult, frame: u32, block: u32) {
    for e in sim
        .trace
        .iter_mut()
        .filter(|e| e.packet.frame == frame && e.block.is_some())
    {
        e.block = Some(block);
    }
}

/// A run whose trace or result is corrupted so that `check` must fire.
pub fn inject(check: Check) -> Run {
    let mut run = appendix_b(PolicyKind::Mf);
    let sim = &mut run.sim;
    match check {
        Check::TraceConsistency => {
            let i = row(sim, PacketId::new(1, 1), Action::Transmit);
            sim.trace[i].packet = PacketId::new(2, 1);
        }
        Check::DecisionCompleteness => {
            let i = row(sim, PacketId::new(5, 1), Action::Reject);
            sim.trace.remove(i);
        }
        Check::Occupancy => {
            let params = GenParams {
                k: 2,
                b: 6,
                frames: 12,
                seed: 1,
                ..GenParams::default()
            };
            let case = generate(Family::Random, &params).unwrap();
            let sim = run_policy(&case.instance, 6, PolicyKind::Greedy).unwrap();
            // replayed against a smaller buffer than it ran with
            return Run {
                sim,
                instance: case.instance,
                b: 2,
            };
        }
        Check::IndexCap => {
            let mut run = appendix_b(PolicyKind::Sp);
            // A drops from 4 to 3
            run.b = 9;
            return run;
        }
        Check::LeaveBeforeLater1Packets => {
            let i = row(sim, PacketId::new(1, 1), Action::Transmit);
            sim.trace.remove(i);
        }
        Check::BlockAdmission => set_block(sim, 3, 2),
        Check::BlockOrder => {
            // frames 1 and 2 are buffered together; give the earlier one a later block
            set_block(sim, 1, 3);
            set_block(sim, 2, 1);
        }
        Check::FlushCompleteness => {
            let i = sim
                .trace
                .iter()
                .position(|e| e.action == Action::Flush)
                .expect("the appendix-b run flushes");
            sim.trace.remove(i);
        }
        Check::InvalidAcceptance => {
            let i = row(sim, PacketId::new(5, 2), Action::Reject);
            sim.trace[i].action = Action::Accept;
        }
        Check::Gain => sim.gain += 1,
    }
    run
}
