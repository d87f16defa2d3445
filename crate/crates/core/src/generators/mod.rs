//! Instance families with machine-checkable claims.
//!
//! Each constructor returns a [`GeneratedCase`]: the instance, the buffer
//! size it is meant for, a frame subset the construction claims the offline
//! optimum can complete, and quantitative claims about policy gains.

mod appendix_b;
mod det_lb;
mod rand_lb;
mod random;
mod sp_killer;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

pub use appendix_b::{appendix_b_golden, gen_appendix_b, APPENDIX_B_BUFFER, APPENDIX_B_COMPLETED};
pub use det_lb::gen_det_lower_bound;
pub use rand_lb::{choose_z, gen_rand_lower_bound, ZChoice};
pub use random::{gen_random_order_respecting, BurstParams};
pub use sp_killer::{gen_sp_killer, sp_killer_offsets};

use crate::algorithms::{OnlinePolicy, PolicyKind, TraceEvent};
use crate::error::{Error, Result};
use crate::model::{FrameId, Instance, PacketId};
use crate::opt::FrameSubset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    DetLb,
    RandLb,
    SpKiller,
    AppendixB,
    Random,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::DetLb,
        Family::RandLb,
        Family::SpKiller,
        Family::AppendixB,
        Family::Random,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::DetLb => "det-lb",
            Family::RandLb => "rand-lb",
            Family::SpKiller => "sp-killer",
            Family::AppendixB => "appendix-b",
            Family::Random => "random",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::Parameters(format!("unknown family {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Eq,
    Le,
    Ge,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Le => "<=",
            Relation::Ge => ">=",
        }
    }
}

/// Where a claimed value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    /// Follows from the construction argument.
    Analytic,
    /// Measured while building the instance.
    Simulated,
}

/// A claim `quantity relation numer/denom`, checked with exact arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub quantity: String,
    pub relation: Relation,
    pub numer: u64,
    pub denom: u64,
    pub basis: Basis,
}

impl Claim {
    pub fn new(quantity: impl Into<String>, relation: Relation, value: u64) -> Self {
        Self::fraction(quantity, relation, value, 1)
    }

    pub fn fraction(quantity: impl Into<String>, relation: Relation, numer: u64, denom: u64) -> Self {
        assert!(denom > 0, "claim with zero denominator");
        Claim {
            quantity: quantity.into(),
            relation,
            numer,
            denom,
            basis: Basis::Analytic,
        }
    }

    pub fn simulated(mut self) -> Self {
        self.basis = Basis::Simulated;
        self
    }

    pub fn holds(&self, measured: u64) -> bool {
        let lhs = measured as u128 * self.denom as u128;
        let rhs = self.numer as u128;
        match self.relation {
            Relation::Eq => lhs == rhs,
            Relation::Le => lhs <= rhs,
            Relation::Ge => lhs >= rhs,
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.quantity, self.relation.symbol(), self.numer)?;
        if self.denom != 1 {
            write!(f, "/{}", self.denom)?;
        }
        Ok(())
    }
}

/// Gain quantity name for a policy, as used in claims (`V_MF`, `V_SP`, ...).
pub fn gain_quantity(actor: &str) -> String {
    format!("V_{actor}")
}

pub const V_OPT: &str = "V_OPT";

/// Gain of the policy a construction was built against, before it is named.
pub const V_ALG: &str = "V_ALG";

#[derive(Debug, Clone)]
pub struct GeneratedCase {
    pub family: Family,
    pub instance: Instance,
    pub b: usize,
    pub opt_witness: FrameSubset,
    pub claims: Vec<Claim>,
    /// Expected decision trace, when the construction comes with one.
    pub golden: Option<Vec<TraceEvent>>,
}

impl GeneratedCase {
    pub fn claims_for<'a>(&'a self, quantity: &'a str) -> impl Iterator<Item = &'a Claim> + 'a {
        self.claims.iter().filter(move |c| c.quantity == quantity)
    }

    pub fn sidecar(&self) -> Sidecar {
        Sidecar {
            family: self.family,
            name: self.instance.name().to_string(),
            k: self.instance.k(),
            b: self.b,
            meta: self.instance.meta().clone(),
            opt_witness: self.opt_witness.clone(),
            claims: self.claims.clone(),
        }
    }
}

/// Claims and witness stored next to a generated instance file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub family: Family,
    pub name: String,
    pub k: u32,
    pub b: usize,
    pub meta: Map<String, Value>,
    pub opt_witness: FrameSubset,
    pub claims: Vec<Claim>,
}

impl Sidecar {
    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Parameters for [`generate`]; each family reads the fields it needs.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct GenParams {
    pub k: u32,
    pub b: usize,
    pub y: u32,
    /// Good group for `rand-lb`; chosen with [`choose_z`] against `alg` when absent.
    pub z: Option<u32>,
    pub seed: u64,
    pub frames: u32,
    /// Policy the adaptive constructions play against.
    pub alg: PolicyKind,
    pub burst: BurstParams,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            k: 2,
            b: 4,
            y: 6,
            z: None,
            seed: 0,
            frames: 8,
            alg: PolicyKind::Mf,
            burst: BurstParams::default(),
        }
    }
}

/// Builds one instance of `family`.
pub fn generate(family: Family, params: &GenParams) -> Result<GeneratedCase> {
    let GenParams { k, b, y, .. } = *params;
    match family {
        Family::DetLb => gen_det_lower_bound(k, b, params.alg.build(k, b)?),
        Family::RandLb => {
            let z = match params.z {
                Some(z) => z,
                None => choose_z(k, b, y, |_| params.alg.build(k, b), 1)?.z,
            };
            let mut case = gen_rand_lower_bound(k, b, y, z)?;
            case.instance.set_meta("alg", params.alg);
            let actor = params.alg.build(k, b)?.actor();
            for c in case.claims.iter_mut().filter(|c| c.quantity == V_ALG) {
                c.quantity = gain_quantity(actor.as_str());
            }
            Ok(case)
        }
        Family::SpKiller => gen_sp_killer(k, b),
        Family::AppendixB => Ok(gen_appendix_b()),
        Family::Random => {
            let instance = gen_random_order_respecting(k, params.frames, params.seed, &params.burst)?;
            Ok(GeneratedCase {
                family,
                instance,
                b,
                opt_witness: FrameSubset::new(),
                claims: Vec::new(),
                golden: None,
            })
        }
    }
}

/// Collects arrivals by phase; packets keep insertion order within a phase.
#[derive(Debug, Default)]
pub(crate) struct Schedule {
    phases: Vec<Vec<PacketId>>,
}

impl Schedule {
    pub fn push(&mut self, phase: u32, frame: FrameId, j: u32) {
        let t = phase as usize;
        if self.phases.len() <= t {
            self.phases.resize_with(t + 1, Vec::new);
        }
        self.phases[t].push(PacketId::new(frame, j));
    }

    pub fn burst(&mut self, phase: u32, frames: impl IntoIterator<Item = FrameId>, j: u32) {
        for f in frames {
            self.push(phase, f, j);
        }
    }

    pub fn build(self, k: u32, n_frames: u32) -> Result<Instance> {
        Ok(Instance::new(k, n_frames, self.phases)?)
    }
}

pub(crate) fn meta(pairs: &[(&str, Value)]) -> Map<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}
