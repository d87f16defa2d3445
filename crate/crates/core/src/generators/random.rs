use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{meta, Schedule};
use crate::error::{Error, Result};
use crate::model::Instance;

/// Shape of random arrival sequences.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BurstParams {
    /// Probability that the next frame's packet of the same index arrives in
    /// the same phase.
    pub burst_prob: f64,
    /// Largest gap between consecutive frames when not bursting.
    pub max_gap: u32,
    /// Largest delay of a frame's `j`-packet after its `(j−1)`-packet.
    pub max_lag: u32,
}

impl Default for BurstParams {
    fn default() -> Self {
        BurstParams {
            burst_prob: 0.5,
            max_gap: 3,
            max_lag: 4,
        }
    }
}

/// Random order-respecting instance.
///
/// Frames are ordered `1..=n` and for each index `j` the arrival phases are
/// non-decreasing along that order, so any two frames compare the same way
/// at every index (ties allowed). A frame's `j`-packet arrives no earlier than
/// its `(j−1)`-packet.
pub fn gen_random_order_respecting(k: u32, n_frames: u32, seed: u64, params: &BurstParams) -> Result<Instance> {
    if k == 0 || n_frames == 0 {
        return Err(Error::Parameters(format!(
            "need k >= 1 and at least one frame (k={k}, frames={n_frames})"
        )));
    }
    if !(0.0..=1.0).contains(&params.burst_prob) {
        return Err(Error::Parameters(format!(
            "burst_prob {} is not a probability",
            params.burst_prob
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = n_frames as usize;
    let mut prev: Vec<u32> = vec![0; n];
    let mut s = Schedule::default();
    for j in 1..=k {
        let mut cur = Vec::with_capacity(n);
        for i in 0..n {
            let gap = if i == 0 || rng.gen_bool(params.burst_prob) {
                0
            } else {
                rng.gen_range(1..=params.max_gap.max(1))
            };
            let lag = if j == 1 { 0 } else { rng.gen_range(0..=params.max_lag) };
            let after_prev_frame = if i == 0 { 0 } else { cur[i - 1] + gap };
            let after_prev_index = if j == 1 { 0 } else { prev[i] + lag };
            cur.push(after_prev_frame.max(after_prev_index));
        }
        for (i, &t) in cur.iter().enumerate() {
            s.push(t, i as u32 + 1, j);
        }
        prev = cur;
    }
    Ok(s.build(k, n_frames)?
        .with_name(format!("random-k{k}-n{n_frames}-s{seed}"))
        .with_meta(meta(&[
            ("family", json!("random")),
            ("seed", json!(seed)),
            ("params", json!(params)),
        ])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_order_respecting;

    #[test]
    fn deterministic_and_order_respecting() {
        let p = BurstParams::default();
        for seed in 0..50 {
            let a = gen_random_order_respecting(3, 10, seed, &p).unwrap();
            let b = gen_random_order_respecting(3, 10, seed, &p).unwrap();
            assert_eq!(a.phases(), b.phases());
            assert!(validate_order_respecting(&a).is_empty(), "seed {seed}");
        }
    }

    #[test]
    fn rejects_bad_probability() {
        let p = BurstParams {
            burst_prob: 1.5,
            ..BurstParams::default()
        };
        assert!(gen_random_order_respecting(2, 3, 0, &p).is_err());
    }
}
