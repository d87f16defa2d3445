//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails. All gain and ratio comparisons are exact integer
//! arithmetic (tolerance 0); only wall-clock limits below are tunable.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use kftm::algorithms::{run_policy, MiddleDropFlush, PolicyKind};
use kftm::generators::{
    choose_z, gen_appendix_b, gen_det_lower_bound, gen_rand_lower_bound, gen_random_order_respecting, gen_sp_killer,
    BurstParams, APPENDIX_B_COMPLETED,
};
use kftm::harness::{check_invariants, compare_trace, mf_upper_bound, run_ratio, Check, CompareScope, OptMode};
use kftm::model::{validate_order_respecting, Instance};
use kftm::opt::{feasible, opt_branch_bound, opt_bruteforce};

const LIMIT_APPENDIX_B: Duration = Duration::from_secs(1);
const LIMIT_DET_LB: Duration = Duration::from_secs(10);
const LIMIT_SP_KILLER: Duration = Duration::from_secs(30);
const LIMIT_RANDOM_UPPER: Duration = Duration::from_secs(120);
const LIMIT_RAND_LB: Duration = Duration::from_secs(5);
const LIMIT_ORACLES: Duration = Duration::from_secs(60);

const RANDOM_INSTANCES_PER_CASE: u64 = 1000;
const ORACLE_INSTANCES: u64 = 500;
const MAX_FRAMES: u32 = 12;

/// Invariant and order-respecting results gathered while running criteria 1–6.
#[derive(Default)]
struct Audit {
    runs: usize,
    violations: Vec<String>,
    instances: usize,
    disordered: Vec<String>,
}

impl Audit {
    fn instance(&mut self, inst: &Instance) {
        self.instances += 1;
        if !validate_order_respecting(inst).is_empty() {
            self.disordered.push(inst.name().to_string());
        }
    }

    fn policies(&mut self, inst: &Instance, b: usize) -> kftm::Result<()> {
        for kind in PolicyKind::ALL {
            let sim = run_policy(inst, b, kind)?;
            self.runs += 1;
            for v in check_invariants(&sim, inst, b) {
                self.violations.push(format!("{} {kind}: {v}", inst.name()));
            }
        }
        Ok(())
    }
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(failures: Vec<String>, summary: String) -> Outcome {
    Outcome {
        ok: failures.is_empty(),
        detail: if failures.is_empty() {
            summary
        } else {
            format!("{summary}; {} failures, first: {}", failures.len(), failures[0])
        },
    }
}

fn appendix_b(audit: &mut Audit) -> kftm::Result<Outcome> {
    let case = gen_appendix_b();
    audit.instance(&case.instance);
    audit.policies(&case.instance, case.b)?;
    let sim = run_policy(&case.instance, case.b, PolicyKind::Mf)?;
    let diff = compare_trace(
        &sim.trace,
        case.golden.as_deref().unwrap_or_default(),
        CompareScope::Decisions,
    );
    let completed: Vec<u32> = sim.completed.iter().copied().collect();
    let mut failures = Vec::new();
    if !diff.is_empty() {
        failures.push(diff.to_string());
    }
    if completed != APPENDIX_B_COMPLETED {
        failures.push(format!("completed {completed:?}"));
    }
    Ok(outcome(
        failures,
        format!("{} decision rows compared, MF completes {completed:?}", diff.compared),
    ))
}

fn det_lower_bound(audit: &mut Audit) -> kftm::Result<Outcome> {
    let mut failures = Vec::new();
    let mut cases = 0;
    for k in 2u32..=5 {
        let lo = 2.max(k as usize - 1);
        for b in (2..lo).chain(lo..=12) {
            cases += 1;
            let case = gen_det_lower_bound(k, b, MiddleDropFlush::new(k, b))?;
            audit.instance(&case.instance);
            audit.policies(&case.instance, b)?;
            let x = b / (k as usize - 1);
            let tag = format!("k={k} B={b}");
            if !feasible(&case.instance, &case.opt_witness, b) {
                failures.push(format!("{tag}: witness infeasible"));
                continue;
            }
            let report = run_ratio(
                &case.instance,
                b,
                &[PolicyKind::Mf],
                &OptMode::Certificate(case.opt_witness.clone()),
            )?;
            let mf = &report.policies[0];
            if x == 0 {
                // B ≤ k−2: MF completes nothing, the optimum something
                if mf.gain != 0 || report.opt_gain == 0 {
                    failures.push(format!("{tag}: V_MF={} V_OPT={}", mf.gain, report.opt_gain));
                }
                continue;
            }
            if report.opt_gain != 2 * b + x {
                failures.push(format!("{tag}: V_OPT={} expected {}", report.opt_gain, 2 * b + x));
            }
            if mf.gain > x {
                failures.push(format!("{tag}: V_MF={} > {x}", mf.gain));
            }
            if !mf.ratio.at_least((2 * b + x) as u64, x as u64) {
                failures.push(format!("{tag}: ratio {} below bound", mf.ratio));
            }
        }
    }
    Ok(outcome(failures, format!("{cases} (k, B) cases")))
}

fn sp_killer(audit: &mut Audit) -> kftm::Result<Outcome> {
    let mut failures = Vec::new();
    let mut shown = Vec::new();
    for (k, b) in [(3u32, 6usize), (4, 8), (5, 10)] {
        let case = gen_sp_killer(k, b)?;
        audit.instance(&case.instance);
        audit.policies(&case.instance, b)?;
        let a = b / k as usize;
        let tag = format!("k={k} B={b}");
        if case.opt_witness.len() != (k as usize - 1) * b || !feasible(&case.instance, &case.opt_witness, b) {
            failures.push(format!(
                "{tag}: witness of {} frames not certified",
                case.opt_witness.len()
            ));
        }
        let sp = run_policy(&case.instance, b, PolicyKind::Sp)?.gain;
        let mf = run_policy(&case.instance, b, PolicyKind::Mf)?.gain;
        if sp != a {
            failures.push(format!("{tag}: V_SP={sp} expected {a}"));
        }
        if mf < k as usize * (a / 2) {
            failures.push(format!("{tag}: V_MF={mf} < {}", k as usize * (a / 2)));
        }
        shown.push(format!("{tag} SP={sp} MF={mf} OPT>={}", case.opt_witness.len()));
    }
    Ok(outcome(failures, shown.join(", ")))
}

fn burst_for(seed: u64) -> BurstParams {
    BurstParams {
        burst_prob: [0.3, 0.5, 0.8][(seed % 3) as usize],
        max_gap: 1 + (seed / 3 % 3) as u32,
        max_lag: (seed / 9 % 5) as u32,
    }
}

fn frames_for(seed: u64) -> u32 {
    1 + (seed % MAX_FRAMES as u64) as u32
}

fn random_upper_bound(audit: &mut Audit) -> kftm::Result<Outcome> {
    let mut failures = Vec::new();
    let mut worst = Vec::new();
    for (k, b) in [(2u32, 4usize), (2, 6), (3, 6)] {
        let (numer, denom) = mf_upper_bound(k, b).expect("B >= 2k");
        let mut max_ratio = 0.0f64;
        for seed in 0..RANDOM_INSTANCES_PER_CASE {
            let inst = gen_random_order_respecting(k, frames_for(seed), seed, &burst_for(seed))?;
            audit.instance(&inst);
            audit.policies(&inst, b)?;
            let opt = opt_bruteforce(&inst, b)?;
            let mf = run_policy(&inst, b, PolicyKind::Mf)?.gain;
            let ratio = kftm::harness::Ratio::new(opt.gain, mf);
            if opt.gain >= 1 && mf == 0 {
                failures.push(format!("k={k} B={b} seed={seed}: V_MF=0 with V_OPT={}", opt.gain));
            } else if !ratio.at_most(numer, denom) {
                failures.push(format!("k={k} B={b} seed={seed}: ratio {ratio} > {numer}/{denom}"));
            }
            max_ratio = max_ratio.max(ratio.value());
        }
        worst.push(format!("k={k} B={b} max ratio {max_ratio:.3} (bound {numer}/{denom})"));
    }
    Ok(outcome(
        failures,
        format!("{} instances per case; {}", RANDOM_INSTANCES_PER_CASE, worst.join(", ")),
    ))
}

fn rand_lower_bound(audit: &mut Audit) -> kftm::Result<Outcome> {
    let (k, b, y) = (3u32, 4usize, 6u32);
    let z = choose_z(k, b, y, |_| Ok(MiddleDropFlush::new(k, b)), 1)?.z;
    let case = gen_rand_lower_bound(k, b, y, z)?;
    audit.instance(&case.instance);
    audit.policies(&case.instance, b)?;
    let mut failures = Vec::new();
    let yb = y as usize * b;
    if case.opt_witness.len() != yb || !feasible(&case.instance, &case.opt_witness, b) {
        failures.push(format!("witness of {} frames not certified", case.opt_witness.len()));
    }
    if !validate_order_respecting(&case.instance).is_empty() {
        failures.push("instance is not order-respecting".into());
    }
    let mf = run_policy(&case.instance, b, PolicyKind::Mf)?.gain;
    let cap = yb / (k as usize - 1) + (k as usize - 2) * b;
    if mf > cap {
        failures.push(format!("V_MF={mf} > {cap}"));
    }
    Ok(outcome(
        failures,
        format!("z={z}, |F(z)|={}, V_MF={mf} <= {cap}", case.opt_witness.len()),
    ))
}

fn oracle_cross_check(audit: &mut Audit) -> kftm::Result<Outcome> {
    let mut failures = Vec::new();
    for i in 0..ORACLE_INSTANCES {
        let seed = 1_000_000 + i;
        let k = 2 + (i % 2) as u32;
        let b = 2 + (i / 2 % 7) as usize;
        let inst = gen_random_order_respecting(k, frames_for(i / 14), seed, &burst_for(i))?;
        audit.instance(&inst);
        let brute = opt_bruteforce(&inst, b)?;
        let bb = opt_branch_bound(&inst, b)?;
        if brute.gain != bb.gain {
            failures.push(format!(
                "seed={seed} k={k} B={b}: brute force {} vs branch and bound {}",
                brute.gain, bb.gain
            ));
        }
        if !feasible(&inst, &brute.witness, b) || !feasible(&inst, &bb.witness, b) {
            failures.push(format!("seed={seed}: infeasible witness"));
        }
    }
    Ok(outcome(
        failures,
        format!("{ORACLE_INSTANCES} instances, k in {{2, 3}}, B in 2..=8"),
    ))
}

fn invariant_suite(audit: &Audit) -> Outcome {
    let mut failures: Vec<String> = audit.violations.clone();
    failures.extend(audit.disordered.iter().map(|n| format!("{n} is not order-respecting")));
    let mut silent = Vec::new();
    for check in Check::ALL {
        let run = common::inject(check);
        if !check_invariants(&run.sim, &run.instance, run.b)
            .iter()
            .any(|v| v.check == check)
        {
            silent.push(check.as_str());
        }
    }
    failures.extend(silent.iter().map(|c| format!("injected fault not detected by {c}")));
    outcome(
        failures,
        format!(
            "{} policy runs, {} generated instances, {} fault injections",
            audit.runs,
            audit.instances,
            Check::ALL.len()
        ),
    )
}

type Criterion = fn(&mut Audit) -> kftm::Result<Outcome>;

fn main() -> ExitCode {
    let criteria: [(&str, Criterion, Duration); 6] = [
        ("1 appendix-b golden trace", appendix_b, LIMIT_APPENDIX_B),
        ("2 deterministic lower bound", det_lower_bound, LIMIT_DET_LB),
        ("3 static partitioning counterexample", sp_killer, LIMIT_SP_KILLER),
        (
            "4 MF upper bound on random instances",
            random_upper_bound,
            LIMIT_RANDOM_UPPER,
        ),
        ("5 randomized lower-bound instance", rand_lower_bound, LIMIT_RAND_LB),
        ("6 oracle cross-validation", oracle_cross_check, LIMIT_ORACLES),
    ];
    let mut audit = Audit::default();
    let mut all_ok = true;
    for (name, run, limit) in criteria {
        let started = Instant::now();
        let result = run(&mut audit);
        let elapsed = started.elapsed();
        let (ok, detail) = match result {
            Ok(o) if elapsed > limit => (false, format!("{} (took {elapsed:.2?}, limit {limit:?})", o.detail)),
            Ok(o) => (o.ok, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        all_ok &= ok;
        println!(
            "{} criterion {name}: {detail} [{elapsed:.2?}]",
            if ok { "PASS" } else { "FAIL" }
        );
    }
    let started = Instant::now();
    let o = invariant_suite(&audit);
    all_ok &= o.ok;
    println!(
        "{} criterion 7 invariant suite: {} [{:.2?}]",
        if o.ok { "PASS" } else { "FAIL" },
        o.detail,
        started.elapsed()
    );
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
