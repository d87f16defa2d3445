//! Parameter grids over generator families and policies.
//!
//! ```json
//! {
//!   "grids": [
//!     { "family": "det-lb", "k": [2, 3], "b": { "min": 2, "max": 12, "min_from_k": -1 } },
//!     { "family": "random", "k": [2], "b": [4], "seeds": 100, "frames": 10 }
//!   ]
//! }
//! ```

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ratio::{mf_upper_bound, run_ratio, OptMode, OptSource, Ratio};
use crate::algorithms::{OnlinePolicy, PolicyKind};
use crate::error::{Error, Result};
use crate::generators::{gain_quantity, generate, BurstParams, Family, GenParams, V_OPT};

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default)]
    pub grids: Vec<Grid>,
}

impl SweepConfig {
    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Buffer sizes: an explicit list, or a range whose lower end may depend on `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BSpec {
    List(Vec<usize>),
    Range {
        min: usize,
        max: usize,
        /// Raise the lower end to `k + min_from_k`.
        #[serde(default)]
        min_from_k: Option<i64>,
    },
}

impl Default for BSpec {
    fn default() -> Self {
        BSpec::List(vec![4])
    }
}

impl BSpec {
    pub fn values(&self, k: u32) -> Vec<usize> {
        match self {
            BSpec::List(v) => v.clone(),
            BSpec::Range { min, max, min_from_k } => {
                let lo = match min_from_k {
                    Some(off) => (*min as i64).max(k as i64 + off).max(1) as usize,
                    None => *min,
                };
                (lo..=*max).collect()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepOpt {
    Auto,
    BruteForce,
    BranchBound,
    /// Use the generator's witness.
    Certificate,
}

fn default_policies() -> Vec<PolicyKind> {
    vec![PolicyKind::Mf, PolicyKind::Sp, PolicyKind::Greedy]
}

fn one() -> u64 {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub family: Family,
    pub k: Vec<u32>,
    #[serde(default)]
    pub b: BSpec,
    /// Number of seeds, starting at `seed_start`.
    #[serde(default = "one")]
    pub seeds: u64,
    #[serde(default)]
    pub seed_start: u64,
    #[serde(default)]
    pub y: Option<u32>,
    #[serde(default)]
    pub z: Option<u32>,
    #[serde(default)]
    pub frames: Option<u32>,
    #[serde(default = "default_policies")]
    pub policies: Vec<PolicyKind>,
    #[serde(default)]
    pub alg: Option<PolicyKind>,
    /// Defaults to `certificate` for constructions and `auto` for `random`.
    #[serde(default)]
    pub opt: Option<SweepOpt>,
    #[serde(default)]
    pub burst: BurstParams,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub family: Family,
    pub k: u32,
    pub b: usize,
    pub y: u32,
    pub seed: u64,
    pub name: String,
    pub frames: u32,
    pub policy: PolicyKind,
    pub gain: usize,
    pub opt_gain: usize,
    pub opt_source: OptSource,
    pub ratio: Ratio,
    /// Claims about this policy or the optimum that failed, `;`-separated.
    pub failed_claims: String,
    /// MF's ratio against its upper bound, when `B ≥ 2k`.
    pub upper_bound_ok: Option<bool>,
    pub violations: usize,
}

impl SweepRow {
    pub fn passed(&self) -> bool {
        self.failed_claims.is_empty() && self.upper_bound_ok != Some(false) && self.violations == 0
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(SweepRow::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(|r| !r.passed())
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv_to(file)
    }

    pub fn write_csv_to<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record([
            "family",
            "k",
            "b",
            "y",
            "seed",
            "name",
            "frames",
            "policy",
            "gain",
            "opt_gain",
            "opt_source",
            "ratio",
            "failed_claims",
            "upper_bound_ok",
            "violations",
        ])?;
        for r in &self.rows {
            out.write_record([
                r.family.to_string(),
                r.k.to_string(),
                r.b.to_string(),
                r.y.to_string(),
                r.seed.to_string(),
                r.name.clone(),
                r.frames.to_string(),
                r.policy.to_string(),
                r.gain.to_string(),
                r.opt_gain.to_string(),
                serde_json::to_value(r.opt_source)?
                    .as_str()
                    .unwrap_or_default()
                    .to_string(),
                r.ratio.to_string(),
                r.failed_claims.clone(),
                r.upper_bound_ok.map(|b| b.to_string()).unwrap_or_default(),
                r.violations.to_string(),
            ])?;
        }
        out.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
    }
}

#[derive(Debug, Clone)]
struct Job<'a> {
    grid: &'a Grid,
    k: u32,
    b: usize,
    seed: u64,
}

fn expand(config: &SweepConfig) -> Vec<Job<'_>> {
    let mut jobs = Vec::new();
    for grid in &config.grids {
        for &k in &grid.k {
            for b in grid.b.values(k) {
                // constructions other than `random` ignore the seed
                let seeds = if grid.family == Family::Random { grid.seeds } else { 1 };
                for s in 0..seeds {
                    jobs.push(Job {
                        grid,
                        k,
                        b,
                        seed: grid.seed_start + s,
                    });
                }
            }
        }
    }
    jobs
}

fn run_job(job: &Job<'_>) -> Result<Vec<SweepRow>> {
    let g = job.grid;
    let defaults = GenParams::default();
    let params = GenParams {
        k: job.k,
        b: job.b,
        y: g.y.unwrap_or(defaults.y),
        z: g.z,
        seed: job.seed,
        frames: g.frames.unwrap_or(defaults.frames),
        alg: g.alg.unwrap_or(defaults.alg),
        burst: g.burst.clone(),
    };
    let case = generate(g.family, &params)?;
    let default_opt = if g.family == Family::Random {
        SweepOpt::Auto
    } else {
        SweepOpt::Certificate
    };
    let mode = match g.opt.unwrap_or(default_opt) {
        SweepOpt::Auto => OptMode::Auto,
        SweepOpt::BruteForce => OptMode::BruteForce,
        SweepOpt::BranchBound => OptMode::BranchBound,
        SweepOpt::Certificate => OptMode::Certificate(case.opt_witness.clone()),
    };
    let report = run_ratio(&case.instance, case.b, &g.policies, &mode).map_err(|e| {
        Error::Parameters(format!(
            "{} (k={}, B={}, seed={}): {e}",
            g.family, job.k, job.b, job.seed
        ))
    })?;

    let mut rows = Vec::with_capacity(report.policies.len());
    for p in &report.policies {
        let actor = p.policy.build(job.k, job.b)?.actor();
        let quantity = gain_quantity(actor.as_str());
        let mut failed = Vec::new();
        for c in &case.claims {
            let measured = if c.quantity == V_OPT {
                report.opt_gain
            } else if c.quantity == quantity {
                p.gain
            } else {
                continue;
            };
            if !c.holds(measured as u64) {
                failed.push(format!("{c} (measured {measured})"));
            }
        }
        let upper_bound_ok = match (p.policy, mf_upper_bound(job.k, job.b)) {
            (PolicyKind::Mf, Some((n, d))) => Some(p.ratio.at_most(n, d)),
            _ => None,
        };
        rows.push(SweepRow {
            family: g.family,
            k: job.k,
            b: job.b,
            y: params.y,
            seed: job.seed,
            name: report.name.clone(),
            frames: report.frames,
            policy: p.policy,
            gain: p.gain,
            opt_gain: report.opt_gain,
            opt_source: report.opt_source,
            ratio: p.ratio,
            failed_claims: failed.join("; "),
            upper_bound_ok,
            violations: p.violations.len(),
        });
    }
    Ok(rows)
}

/// Runs every grid point in parallel; rows come back sorted by family, `k`,
/// `B`, seed and policy.
pub fn sweep(config: &SweepConfig) -> Result<SweepReport> {
    let jobs = expand(config);
    let chunks: Vec<Vec<SweepRow>> = jobs.par_iter().map(run_job).collect::<Result<_>>()?;
    let mut rows: Vec<SweepRow> = chunks.into_iter().flatten().collect();
    rows.sort_by_key(|r| (r.family, r.k, r.b, r.y, r.seed, r.policy));
    Ok(SweepReport { rows })
}
