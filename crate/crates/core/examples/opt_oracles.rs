//! Solves random instances with both exact oracles and prints the witness's
//! buffer occupancy profile.

use kftm::generators::{gen_random_order_respecting, BurstParams};
use kftm::opt::{feasible, opt_branch_bound, opt_bruteforce};

pub fn run_example(seeds: u64) -> kftm::Result<usize> {
    let mut agree = 0;
    for seed in 0..seeds {
        let inst = gen_random_order_respecting(3, 10, seed, &BurstParams::default())?;
        let b = 6;
        let brute = opt_bruteforce(&inst, b)?;
        let bb = opt_branch_bound(&inst, b)?;
        assert!(feasible(&inst, &bb.witness, b));
        if brute.gain == bb.gain {
            agree += 1;
        }
        if seed == 0 {
            println!("witness {:?}", bb.witness);
            println!("occupancy {:?}", bb.profile);
        }
        println!(
            "seed {seed:>2}: brute force {} branch and bound {}",
            brute.gain, bb.gain
        );
    }
    Ok(agree)
}

fn main() -> kftm::Result<()> {
    run_example(10)?;
    Ok(())
}
