use itertools::Itertools;

use super::{result_for, CompactInstance, FrameSubset, OptResult};
use crate::error::{Error, Result};
use crate::model::Instance;

pub const DEFAULT_ORACLE_LIMIT: u32 = 22;

/// Environment variable overriding [`DEFAULT_ORACLE_LIMIT`].
pub const ORACLE_LIMIT_ENV: &str = "KFTM_ORACLE_LIMIT";

/// Frame-count limit for exhaustive search.
pub fn oracle_limit() -> u32 {
    std::env::var(ORACLE_LIMIT_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_ORACLE_LIMIT)
}

/// Exhaustive optimum with the limit from [`oracle_limit`].
pub fn opt_bruteforce(instance: &Instance, b: usize) -> Result<OptResult> {
    opt_bruteforce_with_limit(instance, b, oracle_limit())
}

/// Searches subsets by decreasing size, each size in lexicographic order, so
/// the first feasible subset found is the lexicographically smallest one of
/// maximum size.
pub fn opt_bruteforce_with_limit(instance: &Instance, b: usize, limit: u32) -> Result<OptResult> {
    let n = instance.n_frames();
    if n > limit {
        return Err(Error::OracleLimit { frames: n, limit });
    }
    let compact = CompactInstance::new(instance, b);
    let mut load = vec![0usize; compact.n_phases()];
    let mut occ = vec![0usize; compact.n_phases()];
    for size in (1..=n as usize).rev() {
        for combo in (0..n as usize).combinations(size) {
            load.iter_mut().for_each(|x| *x = 0);
            for &f in &combo {
                for &(e, c) in &compact.frames[f] {
                    load[e] += c;
                }
            }
            if compact.occupancy(&load, &mut occ) {
                let witness: FrameSubset = combo.iter().map(|&f| f as u32 + 1).collect();
                return Ok(result_for(instance, witness, b));
            }
        }
    }
    Ok(result_for(instance, FrameSubset::new(), b))
}
