use serde_json::json;

use super::{gain_quantity, meta, Claim, Family, GeneratedCase, Relation, Schedule, V_OPT};
use crate::error::{Error, Result};
use crate::model::FrameId;

/// Offsets `b_z` for `z = 1..=k−1`: `b_1 = 0` and
/// `b_z = Σ_{j<z} 2^{k−j−1}·3B`.
pub fn sp_killer_offsets(k: u32, b: usize) -> Vec<u32> {
    let d = 3 * b as u32;
    let mut out = vec![0];
    for z in 2..k {
        let prev = *out.last().expect("starts with b_1");
        out.push(prev + (1 << (k - (z - 1) - 1)) * d);
    }
    out
}

/// Instance on which static partitioning completes only `A = ⌊B/k⌋` frames.
///
/// With `D = 3B` and `N = 3·2^{k−1}` there are `NB` frames. 1-packets arrive
/// `B` at a time every `B` phases. The `j`-packets start at phase
/// `(j−1)NB` and arrive in `2^{k−j}` groups; each group opens with a burst of
/// `2^{j−2}D + D` packets followed by `2^{j−2} − 1` bursts of `D`, all `B`
/// phases apart. Every burst is larger than `A`, so static partitioning keeps
/// only the lowest-numbered `A` packets of each.
pub fn gen_sp_killer(k: u32, b: usize) -> Result<GeneratedCase> {
    if k < 2 || b < k as usize {
        return Err(Error::Parameters(format!(
            "sp-killer needs k >= 2 and B >= k (k={k}, B={b})"
        )));
    }
    if k > 16 {
        return Err(Error::Parameters(format!(
            "sp-killer has 3B·2^(k-1) frames; k={k} is too large"
        )));
    }
    let bb = b as u32;
    let d = 3 * bb;
    let n = 3 * (1u32 << (k - 1));
    let n_frames = n * bb;

    let mut s = Schedule::default();
    let mut t = 0;
    for w in 1..=n {
        s.burst(t, (w - 1) * bb + 1..=w * bb, 1);
        t += bb;
    }
    for j in 2..=k {
        t = (j - 1) * n * bb;
        let half = 1u32 << (j - 2);
        for y in 0..(1u32 << (k - j)) {
            let base: FrameId = y * 2 * half * d;
            s.burst(t, base + 1..=base + half * d + d, j);
            t += bb;
            for x in 1..half {
                let lo = base + half * d + x * d;
                s.burst(t, lo + 1..=lo + d, j);
                t += bb;
            }
        }
    }

    let a = (b / k as usize) as u64;
    let offsets = sp_killer_offsets(k, b);
    let opt_witness = offsets.iter().flat_map(|&bz| bz + d + 1..=bz + d + bb).collect();
    let instance = s
        .build(k, n_frames)?
        .with_name(format!("sp-killer-k{k}-b{b}"))
        .with_meta(meta(&[
            ("family", json!("sp-killer")),
            ("k", json!(k)),
            ("b", json!(b)),
            ("d", json!(d)),
            ("n", json!(n)),
            ("offsets", json!(offsets)),
        ]));
    Ok(GeneratedCase {
        family: Family::SpKiller,
        instance,
        b,
        opt_witness,
        claims: vec![
            Claim::new(gain_quantity("SP"), Relation::Eq, a),
            Claim::new(V_OPT, Relation::Eq, (k as u64 - 1) * b as u64),
            Claim::new(gain_quantity("MF"), Relation::Ge, k as u64 * (a / 2)),
        ],
        golden: None,
    })
}
