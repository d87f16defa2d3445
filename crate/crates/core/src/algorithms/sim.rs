use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use super::{Action, Actor, OnlinePolicy, PolicyKind, PreemptKind, TraceEvent};
use crate::error::{Error, Result};
use crate::model::{append_drain, EventTime, FrameId, Instance, PacketId, Queue};

/// Outcome of running one policy over an instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimResult {
    pub actor: Actor,
    pub k: u32,
    pub b: usize,
    /// Frames all of whose `k` packets were transmitted.
    pub completed: BTreeSet<FrameId>,
    pub gain: usize,
    #[serde(skip)]
    pub trace: Vec<TraceEvent>,
}

/// Steps a policy through phases one at a time.
///
/// Each phase is an arrival subphase ([`arrive`](Self::arrive)) followed by a
/// delivery subphase ([`deliver`](Self::deliver)). Adaptive adversaries drive
/// this directly and inspect [`buffer`](Self::buffer) between the two.
pub struct Simulator<P> {
    k: u32,
    policy: P,
    buffer: Queue,
    phase: u32,
    arrived: bool,
    sent: HashMap<FrameId, u32>,
    completed: BTreeSet<FrameId>,
    trace: Vec<TraceEvent>,
}

impl<P: OnlinePolicy> Simulator<P> {
    pub fn new(k: u32, b: usize, policy: P) -> Self {
        Simulator {
            k,
            policy,
            buffer: Queue::new(b),
            phase: 0,
            arrived: false,
            sent: HashMap::new(),
            completed: BTreeSet::new(),
            trace: Vec::new(),
        }
    }

    pub fn phase(&self) -> u32 {
        self.phase
    }

    pub fn buffer(&self) -> &Queue {
        &self.buffer
    }

    pub fn policy(&self) -> &P {
        &self.policy
    }

    pub fn trace(&self) -> &[TraceEvent] {
        &self.trace
    }

    /// Runs the arrival subphase of the current phase.
    pub fn arrive(&mut self, arrivals: &[PacketId]) -> Result<()> {
        if self.arrived {
            return Err(Error::Parameters(format!(
                "arrival subphase of phase {} already ran",
                self.phase
            )));
        }
        self.arrived = true;
        let order = self.policy.decision_order(arrivals, &self.buffer)?;
        if order.len() != arrivals.len() {
            return Err(self.illegal(
                EventTime::decision(self.phase, 0),
                format!(
                    "decision order has {} packets for {} arrivals",
                    order.len(),
                    arrivals.len()
                ),
            ));
        }
        for (seq, packet) in order.into_iter().enumerate() {
            let time = EventTime::decision(self.phase, seq as u32);
            self.decide_one(packet, time)?;
        }
        Ok(())
    }

    fn decide_one(&mut self, packet: PacketId, time: EventTime) -> Result<()> {
        let decision = self.policy.decide(&self.buffer, packet, time)?;
        for pre in &decision.preemptions {
            if !self.buffer.remove(pre.packet) {
                return Err(self.illegal(time, format!("preempted {} which is not buffered", pre.packet)));
            }
        }
        if decision.accept && self.buffer.push(packet).is_err() {
            return Err(self.illegal(time, format!("accepted {packet} into a full buffer")));
        }

        let actor = self.policy.actor();
        if let Some(shadow) = &decision.shadow {
            let action = if shadow.accepted {
                Action::Accept
            } else {
                Action::Reject
            };
            self.record(time, packet, shadow.actor.clone(), action, "");
        }
        let (flushed, preempted): (Vec<_>, Vec<_>) =
            decision.preemptions.iter().partition(|p| p.kind == PreemptKind::Flush);
        for pre in preempted {
            self.record(time, pre.packet, actor.clone(), Action::Preempt, pre.case_label);
        }
        let action = if decision.accept {
            Action::Accept
        } else {
            Action::Reject
        };
        self.record(time, packet, actor.clone(), action, decision.case_label);
        for pre in flushed {
            self.record(time, pre.packet, actor.clone(), Action::Flush, pre.case_label);
        }
        Ok(())
    }

    /// Runs the delivery subphase and advances to the next phase.
    pub fn deliver(&mut self) -> Option<PacketId> {
        let sent = self.buffer.pop_front();
        if let Some(p) = sent {
            let time = EventTime::delivery(self.phase);
            self.record(time, p, self.policy.actor(), Action::Transmit, "");
            let n = self.sent.entry(p.frame).or_insert(0);
            *n += 1;
            if *n == self.k {
                self.completed.insert(p.frame);
            }
        }
        self.policy.on_delivery(sent);
        self.phase += 1;
        self.arrived = false;
        sent
    }

    pub fn step(&mut self, arrivals: &[PacketId]) -> Result<Option<PacketId>> {
        self.arrive(arrivals)?;
        Ok(self.deliver())
    }

    pub fn finish(self) -> SimResult {
        SimResult {
            actor: self.policy.actor(),
            k: self.k,
            b: self.buffer.capacity(),
            gain: self.completed.len(),
            completed: self.completed,
            trace: self.trace,
        }
    }

    fn record(&mut self, time: EventTime, packet: PacketId, actor: Actor, action: Action, case: &str) {
        let block = self.policy.block_of(packet.frame);
        self.trace.push(TraceEvent {
            time,
            packet,
            actor,
            action,
            case_label: case.to_string(),
            block,
        });
    }

    fn illegal(&self, time: EventTime, message: String) -> Error {
        Error::IllegalDecision {
            policy: self.policy.actor().to_string(),
            time,
            message,
        }
    }
}

/// Runs `policy` over the drained instance.
pub fn run_with<P: OnlinePolicy>(instance: &Instance, b: usize, policy: P) -> Result<SimResult> {
    let drained = append_drain(instance, b);
    let mut sim = Simulator::new(instance.k(), b, policy);
    for arrivals in drained.phases() {
        sim.step(arrivals)?;
    }
    Ok(sim.finish())
}

/// Runs a built-in policy with buffer size `b` over the drained instance.
pub fn run_policy(instance: &Instance, b: usize, kind: PolicyKind) -> Result<SimResult> {
    run_with(instance, b, kind.build(instance.k(), b)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::PolicyDecision;

    struct AcceptAll;

    impl OnlinePolicy for AcceptAll {
        fn actor(&self) -> Actor {
            Actor::Other("ALL".into())
        }

        fn decide(&mut self, _: &Queue, _: PacketId, _: EventTime) -> Result<PolicyDecision> {
            Ok(PolicyDecision::accept("x"))
        }
    }

    #[test]
    fn overfull_accept_is_illegal() {
        let inst = Instance::new(1, 3, vec![(1..=3).map(|f| PacketId::new(f, 1)).collect()]).unwrap();
        let err = run_with(&inst, 2, AcceptAll).unwrap_err();
        assert!(matches!(err, Error::IllegalDecision { .. }), "{err}");
    }

    #[test]
    fn double_arrival_rejected() {
        let mut sim = Simulator::new(1, 1, AcceptAll);
        sim.arrive(&[]).unwrap();
        assert!(sim.arrive(&[]).is_err());
        sim.deliver();
        assert_eq!(sim.phase(), 1);
        assert!(sim.arrive(&[]).is_ok());
    }

    #[test]
    fn completes_after_all_packets_sent() {
        let inst = Instance::new(2, 1, vec![vec![PacketId::new(1, 1)], vec![], vec![PacketId::new(1, 2)]]).unwrap();
        let res = run_with(&inst, 1, AcceptAll).unwrap();
        assert_eq!(res.gain, 1);
        let sends: Vec<_> = res
            .trace
            .iter()
            .filter(|e| e.action == Action::Transmit)
            .map(|e| e.time.phase)
            .collect();
        assert_eq!(sends, vec![0, 2]);
    }
}
