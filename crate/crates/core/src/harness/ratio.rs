use std::fmt;
use std::time::Instant;

use serde::{Serialize, Serializer};
use serde_json::{Map, Value};

use super::invariants::{check_invariants, Violation};
use crate::algorithms::{run_policy, PolicyKind};
use crate::error::{Error, Result};
use crate::model::Instance;
use crate::opt::{feasibility, opt_branch_bound, opt_bruteforce, oracle_limit, FrameSubset};

/// `opt / alg` kept as integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    pub opt: usize,
    pub alg: usize,
}

impl Ratio {
    pub fn new(opt: usize, alg: usize) -> Self {
        Ratio { opt, alg }
    }

    /// Infinite when the policy completes nothing but the optimum does.
    pub fn is_infinite(&self) -> bool {
        self.alg == 0 && self.opt > 0
    }

    /// The ratio as a float; `0/0` counts as 1.
    pub fn value(&self) -> f64 {
        match (self.opt, self.alg) {
            (0, 0) => 1.0,
            (_, 0) => f64::INFINITY,
            (o, a) => o as f64 / a as f64,
        }
    }

    /// `opt/alg <= numer/denom`, exactly.
    pub fn at_most(&self, numer: u64, denom: u64) -> bool {
        if self.alg == 0 {
            return self.opt == 0;
        }
        self.opt as u128 * denom as u128 <= numer as u128 * self.alg as u128
    }

    /// `opt/alg >= numer/denom`, exactly.
    pub fn at_least(&self, numer: u64, denom: u64) -> bool {
        if self.alg == 0 {
            return self.opt > 0 || numer == 0;
        }
        self.opt as u128 * denom as u128 >= numer as u128 * self.alg as u128
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{:.4}", self.value())
        }
    }
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.value())
        }
    }
}

/// Upper bound `(5B + ⌊B/k⌋ − 4) / ⌊B/2k⌋` on MF's ratio, as (numerator,
/// denominator). Only stated for `B ≥ 2k`.
pub fn mf_upper_bound(k: u32, b: usize) -> Option<(u64, u64)> {
    let (k, b) = (k as u64, b as u64);
    (k >= 1 && b >= 2 * k).then(|| (5 * b + b / k - 4, b / (2 * k)))
}

/// Deterministic lower bound `2B/⌊B/(k−1)⌋ + 1` as (numerator, denominator);
/// `None` when `B ≤ k − 2` (unbounded).
pub fn deterministic_lower_bound(k: u32, b: usize) -> Option<(u64, u64)> {
    if k < 2 {
        return None;
    }
    let x = b as u64 / (k as u64 - 1);
    (x > 0).then(|| (2 * b as u64 + x, x))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OptMode {
    /// Exhaustive search within the oracle limit, branch and bound beyond.
    Auto,
    BruteForce,
    BranchBound,
    /// Certify a given witness instead of searching.
    Certificate(FrameSubset),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OptSource {
    BruteForce,
    BranchBound,
    Certificate,
}

#[derive(Debug, Clone, Serialize)]
pub struct PolicyReport {
    pub policy: PolicyKind,
    pub gain: usize,
    pub ratio: Ratio,
    pub violations: Vec<Violation>,
    pub runtime_us: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RatioReport {
    pub name: String,
    pub meta: Map<String, Value>,
    pub k: u32,
    pub b: usize,
    pub frames: u32,
    pub opt_gain: usize,
    pub opt_source: OptSource,
    pub opt_witness: FrameSubset,
    pub policies: Vec<PolicyReport>,
    pub opt_runtime_us: u64,
}

impl RatioReport {
    pub fn policy(&self, kind: PolicyKind) -> Option<&PolicyReport> {
        self.policies.iter().find(|p| p.policy == kind)
    }

    pub fn violations(&self) -> impl Iterator<Item = &Violation> {
        self.policies.iter().flat_map(|p| &p.violations)
    }

    pub fn passed(&self) -> bool {
        self.violations().next().is_none()
    }
}

/// Runs each policy, computes or certifies the optimum and checks every
/// trace invariant.
pub fn run_ratio(instance: &Instance, b: usize, policies: &[PolicyKind], opt: &OptMode) -> Result<RatioReport> {
    let started = Instant::now();
    let (opt_gain, opt_source, opt_witness) = match opt {
        OptMode::Certificate(w) => {
            let f = feasibility(instance, w, b);
            if !f.feasible {
                return Err(Error::InfeasibleCertificate {
                    b,
                    detail: format!(
                        "{} frames overflow at phase {}",
                        w.len(),
                        f.profile.len().saturating_sub(1)
                    ),
                });
            }
            (w.len(), OptSource::Certificate, w.clone())
        }
        OptMode::BruteForce => {
            let r = opt_bruteforce(instance, b)?;
            (r.gain, OptSource::BruteForce, r.witness)
        }
        OptMode::BranchBound => {
            let r = opt_branch_bound(instance, b)?;
            (r.gain, OptSource::BranchBound, r.witness)
        }
        OptMode::Auto if instance.n_frames() <= oracle_limit() => {
            let r = opt_bruteforce(instance, b)?;
            (r.gain, OptSource::BruteForce, r.witness)
        }
        OptMode::Auto => {
            let r = opt_branch_bound(instance, b)?;
            (r.gain, OptSource::BranchBound, r.witness)
        }
    };
    let opt_runtime_us = started.elapsed().as_micros() as u64;

    let mut reports = Vec::with_capacity(policies.len());
    for &kind in policies {
        let started = Instant::now();
        let sim = run_policy(instance, b, kind)?;
        let violations = check_invariants(&sim, instance, b);
        reports.push(PolicyReport {
            policy: kind,
            gain: sim.gain,
            ratio: Ratio::new(opt_gain, sim.gain),
            violations,
            runtime_us: started.elapsed().as_micros() as u64,
        });
    }
    Ok(RatioReport {
        name: instance.name().to_string(),
        meta: instance.meta().clone(),
        k: instance.k(),
        b,
        frames: instance.n_frames(),
        opt_gain,
        opt_source,
        opt_witness,
        policies: reports,
        opt_runtime_us,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PacketId;

    #[test]
    fn ratio_arithmetic() {
        let r = Ratio::new(12, 4);
        assert!(r.at_least(3, 1));
        assert!(r.at_most(3, 1));
        assert!(!r.at_least(13, 4));
        let inf = Ratio::new(4, 0);
        assert!(inf.is_infinite());
        assert!(inf.at_least(1_000, 1));
        assert!(!inf.at_most(1_000, 1));
        assert_eq!(serde_json::to_string(&inf).unwrap(), "\"inf\"");
        assert_eq!(serde_json::to_string(&r).unwrap(), "3.0");
        assert_eq!(Ratio::new(0, 0).value(), 1.0);
    }

    #[test]
    fn bounds() {
        // k=2, B=4: (20 + 2 - 4) / 1
        assert_eq!(mf_upper_bound(2, 4), Some((18, 1)));
        assert_eq!(mf_upper_bound(3, 5), None);
        // k=2, B=4: X = 4, 2B/X + 1 = 3
        assert_eq!(deterministic_lower_bound(2, 4), Some((12, 4)));
        assert_eq!(deterministic_lower_bound(4, 2), None);
    }

    #[test]
    fn single_frame_ratios_are_one() {
        let inst = Instance::new(
            3,
            1,
            vec![
                vec![PacketId::new(1, 1)],
                vec![PacketId::new(1, 2)],
                vec![PacketId::new(1, 3)],
            ],
        )
        .unwrap();
        let rep = run_ratio(&inst, 3, &PolicyKind::ALL, &OptMode::Auto).unwrap();
        assert_eq!(rep.opt_gain, 1);
        for p in &rep.policies {
            assert_eq!(p.ratio.value(), 1.0, "{:?}", p.policy);
        }
        assert!(rep.passed());
    }

    #[test]
    fn infeasible_certificate_fails() {
        let inst = Instance::new(1, 2, vec![vec![PacketId::new(1, 1), PacketId::new(2, 1)]]).unwrap();
        let err = run_ratio(&inst, 1, &[PolicyKind::Greedy], &OptMode::Certificate([1, 2].into())).unwrap_err();
        assert!(matches!(err, Error::InfeasibleCertificate { .. }));
    }
}
